//! The on-disk text format: a JSON matrix file and a result document,
//! with every float written to 17 significant digits.

use std::collections::BTreeMap;
use std::io;

use serde::ser::Serialize;
use serde::{Deserialize, Serialize as SerializeDerive};
use serde_json::ser::{CompactFormatter, Formatter, PrettyFormatter};

use crate::dual::DualScalar;
use crate::linalg::DualMatrix;

/// `rows`, `cols` and row-major `[std, inf]` pairs.
#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MatrixFile {
    pub rows: usize,
    pub cols: usize,
    pub entries: Vec<[f64; 2]>,
}

impl MatrixFile {
    pub fn from_matrix(m: &DualMatrix) -> Self {
        let mut entries = Vec::with_capacity(m.nrows() * m.ncols());
        for i in 0..m.nrows() {
            for j in 0..m.ncols() {
                let x = m.get(i, j);
                entries.push([x.std, x.inf]);
            }
        }
        MatrixFile { rows: m.nrows(), cols: m.ncols(), entries }
    }

    pub fn to_matrix(&self) -> Result<DualMatrix, String> {
        if self.rows * self.cols != self.entries.len() {
            return Err(format!(
                "{}×{} matrix needs {} entries, found {}",
                self.rows,
                self.cols,
                self.rows * self.cols,
                self.entries.len()
            ));
        }
        Ok(DualMatrix::from_fn(self.rows, self.cols, |i, j| {
            let [std, inf] = self.entries[i * self.cols + j];
            DualScalar::new(std, inf)
        }))
    }
}

/// σ and σ′ of each diagonal block, in order.
#[derive(Debug, Clone, Default, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlockSummary {
    pub sigma: Vec<f64>,
    pub sigma_prime: Vec<f64>,
    pub block_sizes: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, SerializeDerive, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ResultDocument {
    pub kind: String,
    /// `"ok"`, or `"nonexistent"` for a pseudoinverse that does not exist.
    pub outcome: String,
    pub factors: BTreeMap<String, MatrixFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub summary: Option<BlockSummary>,
    pub residuals: BTreeMap<String, f64>,
}

/// Pretty JSON whose floats are written as `{:.16e}`. Arrays nested in
/// arrays (the `[std, inf]` pairs) stay on one line.
struct FixedDigits {
    pretty: PrettyFormatter<'static>,
    compact: CompactFormatter,
    arrays: usize,
}

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*)),* $(,)?) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                if self.arrays >= 2 {
                    self.compact.$name(w $(, $arg)*)
                } else {
                    self.pretty.$name(w $(, $arg)*)
                }
            }
        )*
    };
}

impl Formatter for FixedDigits {
    delegate!(
        begin_array_value(first: bool),
        end_array_value(),
        begin_object(),
        end_object(),
        begin_object_key(first: bool),
        begin_object_value(),
        end_object_value(),
    );

    fn begin_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        self.arrays += 1;
        if self.arrays >= 2 {
            self.compact.begin_array(w)
        } else {
            self.pretty.begin_array(w)
        }
    }

    fn end_array<W: ?Sized + io::Write>(&mut self, w: &mut W) -> io::Result<()> {
        let nested = self.arrays >= 2;
        self.arrays -= 1;
        if nested {
            self.compact.end_array(w)
        } else {
            self.pretty.end_array(w)
        }
    }

    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        // no negative zero in the output
        let value = if value == 0.0 { 0.0 } else { value };
        write!(w, "{value:.16e}")
    }
}

/// Serializes with fixed 17-digit floats and a trailing newline.
pub fn to_text<T: Serialize>(value: &T) -> serde_json::Result<String> {
    let mut out = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(
        &mut out,
        FixedDigits { pretty: PrettyFormatter::new(), compact: CompactFormatter, arrays: 0 },
    );
    value.serialize(&mut ser)?;
    out.push(b'\n');
    Ok(String::from_utf8(out).expect("serde_json writes UTF-8"))
}
