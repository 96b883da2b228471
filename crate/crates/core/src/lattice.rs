//! Picard lattices of blow-ups of the projective plane.
//!
//! A blow-up of P² at `k` points has Picard group of rank `k + 1` with basis
//! `(E₀, E₁, …, E_k)`: the pulled-back line class and the exceptional curves.
//! The intersection form is diagonal `(+1, −1, …, −1)`, so the lattice is
//! Lorentzian of signature `(1, k)`.
//!
//! All arithmetic here is exact over ℚ.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum LatticeError {
    #[error("dimension mismatch: class has {got} coordinates, lattice rank is {rank}")]
    DimensionMismatch { got: usize, rank: usize },
    #[error("blown-up point index {index} out of range 1..={k}")]
    IndexOutOfRange { index: usize, k: usize },
    #[error("cannot parse rational {0:?}")]
    BadRational(String),
}

/// Parses `"p/q"` or `"p"` into an exact rational.
pub fn parse_rational(s: &str) -> Result<BigRational, LatticeError> {
    let bad = || LatticeError::BadRational(s.to_string());
    let t = s.trim();
    match t.split_once('/') {
        Some((p, q)) => {
            let p: BigInt = p.trim().parse().map_err(|_| bad())?;
            let q: BigInt = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            Ok(BigRational::new(p, q))
        }
        None => Ok(BigRational::from_integer(t.parse().map_err(|_| bad())?)),
    }
}

/// Formats a rational as `"p/q"` (always with a denominator).
pub fn format_rational(r: &BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

pub(crate) fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

pub(crate) fn ratio(p: i64, q: i64) -> BigRational {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

/// Picard lattice of P² blown up at `k` points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PicardLattice {
    k: usize,
}

impl PicardLattice {
    pub fn new(k: usize) -> Self {
        PicardLattice { k }
    }

    /// Number of blown-up points.
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rank(&self) -> usize {
        self.k + 1
    }

    /// Diagonal of the Gram matrix in the `(E₀, …, E_k)` basis.
    pub fn gram_diagonal(&self) -> Vec<i64> {
        std::iter::once(1).chain(std::iter::repeat_n(-1, self.k)).collect()
    }

    /// `(positive, negative)` inertia counted from the diagonal form.
    pub fn signature(&self) -> (usize, usize) {
        let g = self.gram_diagonal();
        (
            g.iter().filter(|&&x| x > 0).count(),
            g.iter().filter(|&&x| x < 0).count(),
        )
    }

    fn check(&self, c: &DivisorClass) -> Result<(), LatticeError> {
        if c.coords.len() != self.rank() {
            return Err(LatticeError::DimensionMismatch {
                got: c.coords.len(),
                rank: self.rank(),
            });
        }
        Ok(())
    }

    /// Intersection product `uᵀ·G·v`.
    pub fn intersect(&self, u: &DivisorClass, v: &DivisorClass) -> Result<BigRational, LatticeError> {
        self.check(u)?;
        self.check(v)?;
        let mut acc = &u.coords[0] * &v.coords[0];
        for (a, b) in u.coords[1..].iter().zip(&v.coords[1..]) {
            acc -= a * b;
        }
        Ok(acc)
    }

    pub fn self_intersection(&self, u: &DivisorClass) -> Result<BigRational, LatticeError> {
        self.intersect(u, u)
    }

    /// `K = −3E₀ + Σ Eᵢ`.
    pub fn canonical_class(&self) -> DivisorClass {
        let mut coords = vec![rat(1); self.rank()];
        coords[0] = rat(-3);
        DivisorClass { coords }
    }

    /// Class of the strict transform of a plane curve of the given degree
    /// with multiplicity `mults[i]` at the i-th blown-up point (1-based).
    pub fn curve_class(&self, degree: u32, mults: &BTreeMap<usize, u32>) -> Result<DivisorClass, LatticeError> {
        let mut coords = vec![BigRational::zero(); self.rank()];
        coords[0] = rat(degree as i64);
        for (&i, &m) in mults {
            if i == 0 || i > self.k {
                return Err(LatticeError::IndexOutOfRange { index: i, k: self.k });
            }
            coords[i] = rat(-(m as i64));
        }
        Ok(DivisorClass { coords })
    }

    /// Class `E₀ − Σ_{i ∈ through} Eᵢ` of a line through the listed points.
    pub fn line_through(&self, through: &[usize]) -> Result<DivisorClass, LatticeError> {
        let mults = through.iter().map(|&i| (i, 1)).collect();
        self.curve_class(1, &mults)
    }

    pub fn zero(&self) -> DivisorClass {
        DivisorClass::zero(self.rank())
    }

    /// Basis vector `E_i` (`E_0` is the line class).
    pub fn basis(&self, i: usize) -> Result<DivisorClass, LatticeError> {
        if i > self.k {
            return Err(LatticeError::IndexOutOfRange { index: i, k: self.k });
        }
        let mut c = self.zero();
        c.coords[i] = BigRational::one();
        Ok(c)
    }
}

/// Coordinates of a divisor class in the `(E₀, …, E_k)` basis.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DivisorClass {
    coords: Vec<BigRational>,
}

impl DivisorClass {
    pub fn new(coords: Vec<BigRational>) -> Self {
        DivisorClass { coords }
    }

    pub fn from_ints(coords: &[i64]) -> Self {
        DivisorClass {
            coords: coords.iter().map(|&c| rat(c)).collect(),
        }
    }

    pub fn zero(rank: usize) -> Self {
        DivisorClass {
            coords: vec![BigRational::zero(); rank],
        }
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn len(&self) -> usize {
        self.coords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    /// On a regular surface numerical and ℚ-linear triviality agree, so this
    /// is exact vanishing of every coordinate.
    pub fn is_numerically_trivial(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_integral(&self) -> bool {
        self.coords.iter().all(|c| c.is_integer())
    }

    pub fn scale(&self, s: &BigRational) -> DivisorClass {
        DivisorClass {
            coords: self.coords.iter().map(|c| c * s).collect(),
        }
    }

    /// Coordinates as `f64`, for projecting classes into the hyperbolic models.
    pub fn to_f64(&self) -> Vec<f64> {
        use num_traits::ToPrimitive;
        self.coords.iter().map(|c| c.to_f64().unwrap_or(f64::NAN)).collect()
    }

    /// Same class with blown-up points relabeled: new index `perm[i-1]` gets
    /// the old coordinate at `i`. `perm` is a permutation of `1..=k`.
    pub fn relabel(&self, perm: &[usize]) -> DivisorClass {
        let mut coords = self.coords.clone();
        for (i, &j) in perm.iter().enumerate() {
            coords[j] = self.coords[i + 1].clone();
        }
        DivisorClass { coords }
    }

    fn zip_with(&self, other: &DivisorClass, f: impl Fn(&BigRational, &BigRational) -> BigRational) -> DivisorClass {
        assert_eq!(self.len(), other.len(), "divisor classes of different rank");
        DivisorClass {
            coords: self.coords.iter().zip(&other.coords).map(|(a, b)| f(a, b)).collect(),
        }
    }
}

impl fmt::Display for DivisorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, c) in self.coords.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

impl Add for &DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a + b)
    }
}

impl Add for DivisorClass {
    type Output = DivisorClass;
    fn add(self, rhs: DivisorClass) -> DivisorClass {
        &self + &rhs
    }
}

impl Sub for &DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: &DivisorClass) -> DivisorClass {
        self.zip_with(rhs, |a, b| a - b)
    }
}

impl Sub for DivisorClass {
    type Output = DivisorClass;
    fn sub(self, rhs: DivisorClass) -> DivisorClass {
        &self - &rhs
    }
}

impl Neg for &DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        DivisorClass {
            coords: self.coords.iter().map(|c| -c).collect(),
        }
    }
}

impl Neg for DivisorClass {
    type Output = DivisorClass;
    fn neg(self) -> DivisorClass {
        -&self
    }
}

impl Mul<&DivisorClass> for &BigRational {
    type Output = DivisorClass;
    fn mul(self, rhs: &DivisorClass) -> DivisorClass {
        rhs.scale(self)
    }
}

impl Mul<DivisorClass> for i64 {
    type Output = DivisorClass;
    fn mul(self, rhs: DivisorClass) -> DivisorClass {
        rhs.scale(&rat(self))
    }
}

impl<'a> std::iter::Sum<&'a DivisorClass> for Option<DivisorClass> {
    fn sum<I: Iterator<Item = &'a DivisorClass>>(iter: I) -> Self {
        iter.fold(None, |acc, c| match acc {
            None => Some(c.clone()),
            Some(a) => Some(&a + c),
        })
    }
}

// JSON: an array of "p/q" strings.
impl Serialize for DivisorClass {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let v: Vec<String> = self.coords.iter().map(format_rational).collect();
        v.serialize(s)
    }
}

impl<'de> Deserialize<'de> for DivisorClass {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let v: Vec<RationalRepr> = Vec::deserialize(d)?;
        Ok(DivisorClass {
            coords: v.into_iter().map(|r| r.0).collect(),
        })
    }
}

/// Serde adapter for a single exact rational written as `"p/q"`.
/// Bare JSON integers are accepted on input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RationalRepr(pub BigRational);

impl Serialize for RationalRepr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&format_rational(&self.0))
    }
}

impl<'de> Deserialize<'de> for RationalRepr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Str(String),
            Int(i64),
        }
        match Raw::deserialize(d)? {
            Raw::Str(s) => parse_rational(&s).map(RationalRepr).map_err(serde::de::Error::custom),
            Raw::Int(i) => Ok(RationalRepr(rat(i))),
        }
    }
}

pub(crate) mod rational_serde {
    use super::*;

    pub fn serialize<S: Serializer>(r: &BigRational, s: S) -> Result<S::Ok, S::Error> {
        RationalRepr(r.clone()).serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigRational, D::Error> {
        RationalRepr::deserialize(d).map(|r| r.0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gram_entries() {
        let l = PicardLattice::new(3);
        let e0 = l.basis(0).unwrap();
        let e1 = l.basis(1).unwrap();
        assert_eq!(l.intersect(&e0, &e0).unwrap(), rat(1));
        assert_eq!(l.intersect(&e1, &e1).unwrap(), rat(-1));
        assert_eq!(l.intersect(&e0, &e1).unwrap(), rat(0));
    }

    #[test]
    fn canonical_self_intersections() {
        assert_eq!(PicardLattice::new(0).canonical_class(), DivisorClass::from_ints(&[-3]));
        let l12 = PicardLattice::new(12);
        let k = l12.canonical_class();
        assert_eq!(k.coords()[0], rat(-3));
        assert!(k.coords()[1..].iter().all(|c| *c == rat(1)));
        assert_eq!(l12.self_intersection(&k).unwrap(), rat(-3));
        let l10 = PicardLattice::new(10);
        assert_eq!(l10.self_intersection(&l10.canonical_class()).unwrap(), rat(-1));
    }

    #[test]
    fn curve_classes() {
        let l = PicardLattice::new(12);
        let line = l.line_through(&[1, 2, 3, 4]).unwrap();
        assert_eq!(line, DivisorClass::from_ints(&[1, -1, -1, -1, -1, 0, 0, 0, 0, 0, 0, 0, 0]));
        assert_eq!(l.self_intersection(&line).unwrap(), rat(-3));
        assert!(l.curve_class(0, &BTreeMap::new()).unwrap().is_numerically_trivial());
        assert_eq!(
            l.curve_class(1, &BTreeMap::from([(13, 1)])),
            Err(LatticeError::IndexOutOfRange { index: 13, k: 12 })
        );
        assert_eq!(
            l.curve_class(1, &BTreeMap::from([(0, 1)])),
            Err(LatticeError::IndexOutOfRange { index: 0, k: 12 })
        );
    }

    #[test]
    fn dimension_mismatch() {
        let l = PicardLattice::new(2);
        let u = DivisorClass::from_ints(&[1, 0]);
        assert_eq!(
            l.intersect(&u, &l.zero()),
            Err(LatticeError::DimensionMismatch { got: 2, rank: 3 })
        );
    }

    #[test]
    fn cubic_through_all_points_cancels_canonical() {
        for k in 0..20 {
            let l = PicardLattice::new(k);
            let mults = (1..=k).map(|i| (i, 1)).collect();
            let cubic = l.curve_class(3, &mults).unwrap();
            assert!((&cubic + &l.canonical_class()).is_numerically_trivial());
        }
    }

    #[test]
    fn signature_is_one_k() {
        for k in 0..20 {
            assert_eq!(PicardLattice::new(k).signature(), (1, k));
        }
    }

    #[test]
    fn json_roundtrip() {
        let c = DivisorClass::new(vec![ratio(1, 3), rat(-2), rat(0)]);
        let s = serde_json::to_string(&c).unwrap();
        assert_eq!(s, r#"["1/3","-2/1","0/1"]"#);
        let back: DivisorClass = serde_json::from_str(&s).unwrap();
        assert_eq!(back, c);
        let ints: DivisorClass = serde_json::from_str(r#"["3", 4, "-6/4"]"#).unwrap();
        assert_eq!(ints, DivisorClass::new(vec![rat(3), rat(4), ratio(-3, 2)]));
        assert!(serde_json::from_str::<DivisorClass>(r#"["1/0"]"#).is_err());
    }
}
