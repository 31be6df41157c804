//! Dual numbers `a + bε` with `ε² = 0`.
//!
//! The algebra is exact in structure: every operation is a finite
//! combination of the two real components, so the only error is the
//! rounding of the underlying `f64` arithmetic.

use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use crate::error::{Error, Result};

/// A dual scalar `std + inf·ε`.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DualScalar {
    /// Standard part.
    pub std: f64,
    /// Infinitesimal part.
    pub inf: f64,
}

impl DualScalar {
    pub const ZERO: DualScalar = DualScalar { std: 0.0, inf: 0.0 };
    pub const ONE: DualScalar = DualScalar { std: 1.0, inf: 0.0 };
    pub const EPSILON: DualScalar = DualScalar { std: 0.0, inf: 1.0 };

    pub const fn new(std: f64, inf: f64) -> Self {
        DualScalar { std, inf }
    }

    pub const fn real(std: f64) -> Self {
        DualScalar { std, inf: 0.0 }
    }

    /// `b·ε`.
    pub const fn infinitesimal(inf: f64) -> Self {
        DualScalar { std: 0.0, inf }
    }

    /// `a − bε`. Conjugation is a ring involution.
    pub fn conj(self) -> Self {
        DualScalar::new(self.std, -self.inf)
    }

    /// Nonzero standard part, tested exactly.
    pub fn is_appreciable(self) -> bool {
        self.std != 0.0
    }

    pub fn is_finite(self) -> bool {
        self.std.is_finite() && self.inf.is_finite()
    }

    pub fn scale(self, k: f64) -> Self {
        DualScalar::new(self.std * k, self.inf * k)
    }

    /// `(a + bε)⁻¹ = a⁻¹ − ε·b·a⁻²`.
    pub fn inv(self) -> Result<Self> {
        if self.std == 0.0 {
            return Err(Error::NotInvertible(format!("{self} has zero standard part")));
        }
        let r = 1.0 / self.std;
        Ok(DualScalar::new(r, -self.inf * r * r))
    }

    /// Square root on the positive-standard-part branch: `√a + ε·b/(2√a)`.
    ///
    /// `√0` is rejected even though it exists; the decompositions only take
    /// roots of strictly positive standard parts.
    pub fn sqrt(self) -> Result<Self> {
        if !(self.std > 0.0) {
            return Err(Error::NoSquareRoot(self.to_string()));
        }
        let s = self.std.sqrt();
        Ok(DualScalar::new(s, self.inf / (2.0 * s)))
    }

    /// Absolute value of each component, combined as a max.
    pub fn max_abs(self) -> f64 {
        self.std.abs().max(self.inf.abs())
    }
}

/// Evaluates the real polynomial `Σ coeffs[k]·X^k` at a dual argument,
/// giving `F(a) + ε·b·F′(a)`.
///
/// An empty coefficient list is the zero polynomial.
pub fn poly_eval(coeffs: &[f64], x: DualScalar) -> DualScalar {
    // Horner on the value and its derivative together.
    let mut value = 0.0;
    let mut deriv = 0.0;
    for &c in coeffs.iter().rev() {
        deriv = deriv * x.std + value;
        value = value * x.std + c;
    }
    DualScalar::new(value, x.inf * deriv)
}

impl fmt::Display for DualScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.inf.is_sign_negative() {
            write!(f, "{}-{}ε", self.std, -self.inf)
        } else {
            write!(f, "{}+{}ε", self.std, self.inf)
        }
    }
}

impl From<f64> for DualScalar {
    fn from(std: f64) -> Self {
        DualScalar::real(std)
    }
}

impl Add for DualScalar {
    type Output = DualScalar;
    fn add(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.std + rhs.std, self.inf + rhs.inf)
    }
}

impl Sub for DualScalar {
    type Output = DualScalar;
    fn sub(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.std - rhs.std, self.inf - rhs.inf)
    }
}

impl Mul for DualScalar {
    type Output = DualScalar;
    fn mul(self, rhs: DualScalar) -> DualScalar {
        DualScalar::new(self.std * rhs.std, self.std * rhs.inf + self.inf * rhs.std)
    }
}

impl Mul<f64> for DualScalar {
    type Output = DualScalar;
    fn mul(self, rhs: f64) -> DualScalar {
        self.scale(rhs)
    }
}

/// Division by an appreciable divisor.
///
/// # Panics
///
/// Panics when the divisor has zero standard part; use [`DualScalar::inv`]
/// to handle that case.
#[allow(clippy::suspicious_arithmetic_impl)]
impl Div for DualScalar {
    type Output = DualScalar;
    fn div(self, rhs: DualScalar) -> DualScalar {
        self * rhs.inv().expect("division by a non-appreciable dual number")
    }
}

impl Neg for DualScalar {
    type Output = DualScalar;
    fn neg(self) -> DualScalar {
        DualScalar::new(-self.std, -self.inf)
    }
}

impl AddAssign for DualScalar {
    fn add_assign(&mut self, rhs: DualScalar) {
        *self = *self + rhs;
    }
}

impl SubAssign for DualScalar {
    fn sub_assign(&mut self, rhs: DualScalar) {
        *self = *self - rhs;
    }
}

impl MulAssign for DualScalar {
    fn mul_assign(&mut self, rhs: DualScalar) {
        *self = *self * rhs;
    }
}

impl std::iter::Sum for DualScalar {
    fn sum<I: Iterator<Item = DualScalar>>(iter: I) -> DualScalar {
        iter.fold(DualScalar::ZERO, |acc, x| acc + x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(a: f64, b: f64) -> DualScalar {
        DualScalar::new(a, b)
    }

    #[test]
    fn multiplication_follows_the_product_rule() {
        assert_eq!(d(1.0, 2.0) * d(3.0, 4.0), d(3.0, 10.0));
    }

    #[test]
    fn additive_identity() {
        let x = d(-3.25, 7.5);
        assert_eq!(x + DualScalar::ZERO, x);
    }

    #[test]
    fn conjugate_flips_infinitesimal_sign() {
        assert_eq!(d(2.0, -5.0).conj(), d(2.0, 5.0));
        assert_eq!(d(2.0, -5.0).conj().conj(), d(2.0, -5.0));
    }

    #[test]
    fn epsilon_squares_to_zero() {
        assert_eq!(DualScalar::EPSILON * DualScalar::EPSILON, DualScalar::ZERO);
    }

    #[test]
    fn inverse() {
        assert_eq!(d(2.0, 6.0).inv().unwrap(), d(0.5, -1.5));
        assert_eq!(d(1.0, 0.0).inv().unwrap(), d(1.0, 0.0));
        assert!(matches!(d(0.0, 1.0).inv(), Err(Error::NotInvertible(_))));
    }

    #[test]
    fn square_root() {
        assert_eq!(d(4.0, 4.0).sqrt().unwrap(), d(2.0, 1.0));
        assert_eq!(d(1.0, 0.0).sqrt().unwrap(), d(1.0, 0.0));
        assert!(matches!(d(0.0, 1.0).sqrt(), Err(Error::NoSquareRoot(_))));
        assert!(matches!(d(0.0, 0.0).sqrt(), Err(Error::NoSquareRoot(_))));
        assert!(matches!(d(-1.0, 0.0).sqrt(), Err(Error::NoSquareRoot(_))));
    }

    #[test]
    fn polynomial_evaluation() {
        // X²
        assert_eq!(poly_eval(&[0.0, 0.0, 1.0], d(3.0, 1.0)), d(9.0, 6.0));
        // constant
        assert_eq!(poly_eval(&[4.5], d(3.0, 17.0)), d(4.5, 0.0));
        assert_eq!(poly_eval(&[], d(3.0, 17.0)), DualScalar::ZERO);
    }

    #[test]
    fn cubic_matches_expanded_dual_product() {
        // (2+3ε)³ − 2(2+3ε) expanded component-wise by hand:
        // std = 2³ − 2·2, inf = 3·2²·3 − 2·3
        let (a, b) = (2.0_f64, 3.0_f64);
        let expected = d(a * a * a - 2.0 * a, 3.0 * a * a * b - 2.0 * b);
        assert_eq!(expected, d(4.0, 30.0));
        assert_eq!(poly_eval(&[0.0, -2.0, 0.0, 1.0], d(a, b)), expected);
    }

    #[test]
    fn display() {
        assert_eq!(d(1.0, -2.0).to_string(), "1-2ε");
        assert_eq!(d(1.5, 2.0).to_string(), "1.5+2ε");
    }
}
