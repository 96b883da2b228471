use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::lattice::{rat, rational_serde};

/// Element `a + b·ζ` of ℚ(ζ), ζ a primitive cube root of unity, so that
/// `ζ² = −1 − ζ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct CycloNum {
    #[serde(with = "rational_serde")]
    pub a: BigRational,
    #[serde(with = "rational_serde")]
    pub b: BigRational,
}

impl CycloNum {
    pub fn new(a: BigRational, b: BigRational) -> Self {
        CycloNum { a, b }
    }

    pub fn from_ints(a: i64, b: i64) -> Self {
        CycloNum { a: rat(a), b: rat(b) }
    }

    pub fn zero() -> Self {
        Self::from_ints(0, 0)
    }

    pub fn one() -> Self {
        Self::from_ints(1, 0)
    }

    pub fn zeta() -> Self {
        Self::from_ints(0, 1)
    }

    /// `ζᵏ` for any integer `k`.
    pub fn zeta_pow(k: i64) -> Self {
        match k.rem_euclid(3) {
            0 => Self::one(),
            1 => Self::zeta(),
            _ => Self::from_ints(-1, -1),
        }
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    /// True when both coordinates are integers, i.e. the element lies in ℤ[ζ].
    pub fn is_integral(&self) -> bool {
        self.a.is_integer() && self.b.is_integer()
    }

    /// Complex conjugate `a + b·ζ̄ = (a − b) − b·ζ`.
    pub fn conj(&self) -> Self {
        CycloNum {
            a: &self.a - &self.b,
            b: -&self.b,
        }
    }

    /// Field norm `a² − ab + b²`, always ≥ 0.
    pub fn norm(&self) -> BigRational {
        &self.a * &self.a - &self.a * &self.b + &self.b * &self.b
    }

    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() {
            return None;
        }
        let n = self.norm();
        let c = self.conj();
        Some(CycloNum {
            a: c.a / &n,
            b: c.b / &n,
        })
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    pub fn to_complex(&self) -> (f64, f64) {
        use num_traits::ToPrimitive;
        let a = self.a.to_f64().unwrap_or(f64::NAN);
        let b = self.b.to_f64().unwrap_or(f64::NAN);
        (a - 0.5 * b, b * 3f64.sqrt() / 2.0)
    }
}

impl From<i64> for CycloNum {
    fn from(n: i64) -> Self {
        Self::from_ints(n, 0)
    }
}

impl From<BigRational> for CycloNum {
    fn from(a: BigRational) -> Self {
        CycloNum { a, b: BigRational::zero() }
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a.is_zero(), self.b.is_zero()) {
            (_, true) => write!(f, "{}", self.a),
            (true, false) => write!(f, "{}ζ", self.b),
            (false, false) => write!(f, "{} + {}ζ", self.a, self.b),
        }
    }
}

impl Add for &CycloNum {
    type Output = CycloNum;
    fn add(self, o: &CycloNum) -> CycloNum {
        CycloNum {
            a: &self.a + &o.a,
            b: &self.b + &o.b,
        }
    }
}

impl Sub for &CycloNum {
    type Output = CycloNum;
    fn sub(self, o: &CycloNum) -> CycloNum {
        CycloNum {
            a: &self.a - &o.a,
            b: &self.b - &o.b,
        }
    }
}

impl Mul for &CycloNum {
    type Output = CycloNum;
    fn mul(self, o: &CycloNum) -> CycloNum {
        // (a + bζ)(c + dζ) = ac + (ad + bc)ζ + bd·ζ², with ζ² = −1 − ζ
        let bd = &self.b * &o.b;
        CycloNum {
            a: &self.a * &o.a - &bd,
            b: &self.a * &o.b + &self.b * &o.a - bd,
        }
    }
}

impl Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            a: -&self.a,
            b: -&self.b,
        }
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for CycloNum {
            type Output = CycloNum;
            fn $m(self, o: CycloNum) -> CycloNum {
                (&self).$m(&o)
            }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

impl Zero for CycloNum {
    fn zero() -> Self {
        CycloNum::zero()
    }
    fn is_zero(&self) -> bool {
        CycloNum::is_zero(self)
    }
}

impl One for CycloNum {
    fn one() -> Self {
        CycloNum::one()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::ratio;

    #[test]
    fn zeta_is_a_cube_root_of_unity() {
        let z = CycloNum::zeta();
        assert_eq!(z.pow(3), CycloNum::one());
        assert_ne!(z, CycloNum::one());
        assert_eq!(&(&CycloNum::one() + &z) + &z.pow(2), CycloNum::zero());
        assert_eq!(CycloNum::zeta_pow(-1), z.pow(2));
        assert_eq!(z.conj(), z.pow(2));
    }

    #[test]
    fn inverse_and_norm() {
        let x = CycloNum::new(ratio(3, 2), ratio(-5, 7));
        let inv = x.inverse().unwrap();
        assert_eq!(&x * &inv, CycloNum::one());
        assert_eq!(CycloNum::zeta().norm(), rat(1));
        assert_eq!(CycloNum::from_ints(1, -1).norm(), rat(3));
        assert!(CycloNum::zero().inverse().is_none());
    }

    #[test]
    fn complex_embedding_multiplies() {
        let x = CycloNum::from_ints(2, 3);
        let y = CycloNum::from_ints(-1, 4);
        let (xr, xi) = x.to_complex();
        let (yr, yi) = y.to_complex();
        let (pr, pi) = (&x * &y).to_complex();
        assert!((pr - (xr * yr - xi * yi)).abs() < 1e-12);
        assert!((pi - (xr * yi + xi * yr)).abs() < 1e-12);
    }

    #[test]
    fn serde_shape() {
        let x = CycloNum::new(ratio(1, 2), rat(-3));
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"{"a":"1/2","b":"-3/1"}"#);
        let back: CycloNum = serde_json::from_str(r#"{"a":"1/2","b":-3}"#).unwrap();
        assert_eq!(back, x);
    }
}
