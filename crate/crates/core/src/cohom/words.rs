use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::CohomError;
use crate::arrangements::CycloNum;

/// 2×2 integer matrix `[[a, b], [c, d]]` with its determinant.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(from = "[[JsonInt; 2]; 2]", into = "[[JsonInt; 2]; 2]")]
pub struct IntMatrix2 {
    e: [BigInt; 4],
    det: BigInt,
}

/// Integer written as a JSON number when it fits in `i64`, else a string.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
enum JsonInt {
    Small(i64),
    Big(#[serde(with = "big_string")] BigInt),
}

mod big_string {
    use num_bigint::BigInt;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(x: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&x.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        String::deserialize(d)?.trim().parse().map_err(serde::de::Error::custom)
    }
}

impl From<JsonInt> for BigInt {
    fn from(x: JsonInt) -> BigInt {
        match x {
            JsonInt::Small(i) => i.into(),
            JsonInt::Big(b) => b,
        }
    }
}

impl From<BigInt> for JsonInt {
    fn from(x: BigInt) -> JsonInt {
        i64::try_from(&x).map_or(JsonInt::Big(x), JsonInt::Small)
    }
}

impl From<[[JsonInt; 2]; 2]> for IntMatrix2 {
    fn from(rows: [[JsonInt; 2]; 2]) -> Self {
        let [[a, b], [c, d]] = rows;
        IntMatrix2::new(a.into(), b.into(), c.into(), d.into())
    }
}

impl From<IntMatrix2> for [[JsonInt; 2]; 2] {
    fn from(m: IntMatrix2) -> Self {
        let [a, b, c, d] = m.e;
        [[a.into(), b.into()], [c.into(), d.into()]]
    }
}

impl IntMatrix2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        let det = &a * &d - &b * &c;
        IntMatrix2 { e: [a, b, c, d], det }
    }

    pub fn from_i64(rows: [[i64; 2]; 2]) -> Self {
        Self::new(rows[0][0].into(), rows[0][1].into(), rows[1][0].into(), rows[1][1].into())
    }

    pub fn identity() -> Self {
        Self::from_i64([[1, 0], [0, 1]])
    }

    pub fn scalar(s: BigInt) -> Self {
        Self::new(s.clone(), BigInt::zero(), BigInt::zero(), s)
    }

    pub fn entries(&self) -> &[BigInt; 4] {
        &self.e
    }

    pub fn det(&self) -> &BigInt {
        &self.det
    }

    pub fn mul(&self, o: &IntMatrix2) -> IntMatrix2 {
        let [a, b, c, d] = &self.e;
        let [p, q, r, s] = &o.e;
        IntMatrix2 {
            e: [a * p + b * r, a * q + b * s, c * p + d * r, c * q + d * s],
            det: &self.det * &o.det,
        }
    }

    /// Inverse over ℤ; requires determinant ±1.
    pub fn inverse(&self) -> Option<IntMatrix2> {
        if !self.det.abs().is_one() {
            return None;
        }
        let [a, b, c, d] = &self.e;
        let s = &self.det;
        Some(IntMatrix2 {
            e: [d * s, -b * s, -c * s, a * s],
            det: s.clone(),
        })
    }

    pub fn pow(&self, n: i64) -> Option<IntMatrix2> {
        let base = if n < 0 { self.inverse()? } else { self.clone() };
        Some((0..n.unsigned_abs()).fold(IntMatrix2::identity(), |acc, _| acc.mul(&base)))
    }

    /// True for `λ·I`, returning `λ`.
    pub fn as_scalar(&self) -> Option<&BigInt> {
        let [a, b, c, d] = &self.e;
        (b.is_zero() && c.is_zero() && a == d).then_some(a)
    }

    fn max_bits(&self) -> u64 {
        self.e.iter().map(BigInt::bits).max().unwrap_or(0)
    }

    pub fn apply(&self, v: &(BigRational, BigRational)) -> (BigRational, BigRational) {
        let [a, b, c, d] = &self.e;
        let r = |x: &BigInt| BigRational::from_integer(x.clone());
        (&r(a) * &v.0 + &r(b) * &v.1, &r(c) * &v.0 + &r(d) * &v.1)
    }
}

/// Generators `[[1, 2], [0, 1]]` and `[[1, 0], [2, 1]]` of a free subgroup
/// of finite index in SL₂(ℤ).
pub fn sanov_generators() -> [IntMatrix2; 2] {
    [IntMatrix2::from_i64([[1, 2], [0, 1]]), IntMatrix2::from_i64([[1, 0], [2, 1]])]
}

/// Elementary generators `[[1, 1], [0, 1]]` and `[[1, 0], [1, 1]]` of SL₂(ℤ).
pub fn elementary_generators() -> [IntMatrix2; 2] {
    [IntMatrix2::from_i64([[1, 1], [0, 1]]), IntMatrix2::from_i64([[1, 0], [1, 1]])]
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationSearch {
    pub free_up_to_l: bool,
    pub word_length: usize,
    /// Shortest relation found, letters `±k` for generator `k` (1-based).
    pub witness: Option<Vec<i32>>,
    pub words_checked: u64,
}

/// Default bound on entry size, in bits.
pub const DEFAULT_MAX_BITS: u64 = 1 << 16;

/// Searches all reduced words of length `1..=max_len` for one whose product
/// is the identity, or a scalar in `center` when given.
pub fn no_relation_search(
    gens: &[IntMatrix2],
    max_len: usize,
    center: Option<&[BigInt]>,
    max_bits: u64,
) -> Result<RelationSearch, CohomError> {
    if gens.is_empty() {
        return Err(CohomError::NoGenerators);
    }
    if max_len == 0 {
        return Err(CohomError::ZeroWordLength);
    }
    let mut letters = Vec::with_capacity(2 * gens.len());
    for (i, g) in gens.iter().enumerate() {
        let inv = g.inverse().ok_or(CohomError::NotInvertible { index: i })?;
        letters.push(((i + 1) as i32, g.clone()));
        letters.push((-((i + 1) as i32), inv));
    }
    let one = BigInt::one();
    let identity_only = [one];
    let center = center.unwrap_or(&identity_only);
    let ctx = Search {
        letters: &letters,
        center,
        max_len,
        max_bits,
    };
    let branches: Vec<Result<Branch, CohomError>> = (0..letters.len())
        .into_par_iter()
        .map(|first| {
            let mut b = Branch::default();
            let mut word = vec![letters[first].0];
            ctx.descend(&letters[first].1, &mut word, &mut b)?;
            Ok(b)
        })
        .collect();
    let mut words_checked = 0;
    let mut witness: Option<Vec<i32>> = None;
    for b in branches {
        let b = b?;
        words_checked += b.checked;
        if let Some(w) = b.best {
            if witness.as_ref().is_none_or(|cur| w.len() < cur.len()) {
                witness = Some(w);
            }
        }
    }
    Ok(RelationSearch {
        free_up_to_l: witness.is_none(),
        word_length: max_len,
        witness,
        words_checked,
    })
}

struct Search<'a> {
    letters: &'a [(i32, IntMatrix2)],
    center: &'a [BigInt],
    max_len: usize,
    max_bits: u64,
}

#[derive(Default)]
struct Branch {
    best: Option<Vec<i32>>,
    checked: u64,
}

impl Search<'_> {
    /// Depth-first over reduced extensions of `word`, visiting words in
    /// lexicographic order and never going deeper than the best relation so
    /// far, so the kept witness is the first shortest one.
    fn descend(&self, m: &IntMatrix2, word: &mut Vec<i32>, b: &mut Branch) -> Result<(), CohomError> {
        b.checked += 1;
        if m.max_bits() > self.max_bits {
            return Err(CohomError::Overflow { bits: self.max_bits });
        }
        if m.as_scalar().is_some_and(|s| self.center.contains(s)) {
            b.best = Some(word.clone());
            return Ok(());
        }
        let limit = b.best.as_ref().map_or(self.max_len, |w| w.len() - 1);
        if word.len() >= limit {
            return Ok(());
        }
        let last = *word.last().expect("nonempty word");
        for (letter, g) in self.letters {
            if *letter == -last {
                continue;
            }
            word.push(*letter);
            self.descend(&m.mul(g), word, b)?;
            word.pop();
            if b.best.as_ref().is_some_and(|w| w.len() <= word.len() + 1) {
                break;
            }
        }
        Ok(())
    }
}

/// Product of a word in the generators (letters `±k`, 1-based).
pub fn evaluate_word(gens: &[IntMatrix2], word: &[i32]) -> Option<IntMatrix2> {
    word.iter().try_fold(IntMatrix2::identity(), |acc, &l| {
        let g = gens.get(l.unsigned_abs() as usize - 1)?;
        Some(acc.mul(&if l > 0 { g.clone() } else { g.inverse()? }))
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PingPongReport {
    pub holds: bool,
    pub checks: usize,
    pub failures: Vec<String>,
}

/// Sampled ping-pong check for the two generators `A = [[1, 2], [0, 1]]`
/// and `B = [[1, 0], [2, 1]]` on `X₁ = {|x| > |y|}`, `X₂ = {|y| > |x|}`:
/// `Aⁿ(X₂) ⊂ X₁` and `Bⁿ(X₁) ⊂ X₂` for `n = ±1, ±2, ±3`.
pub fn pingpong_witness(samples: &[(BigRational, BigRational)]) -> Result<PingPongReport, CohomError> {
    let [a, b] = sanov_generators();
    let mut checks = 0;
    let mut failures = Vec::new();
    for (k, p) in samples.iter().enumerate() {
        if p.0.is_zero() && p.1.is_zero() {
            return Err(CohomError::ZeroSample { index: k });
        }
        let (x, y) = (p.0.abs(), p.1.abs());
        let (gen, name, want_first_bigger) = if y > x {
            (&a, "A", true)
        } else if x > y {
            (&b, "B", false)
        } else {
            continue;
        };
        for n in [-3i64, -2, -1, 1, 2, 3] {
            let q = gen.pow(n).expect("unimodular").apply(p);
            let ok = if want_first_bigger {
                q.0.abs() > q.1.abs()
            } else {
                q.1.abs() > q.0.abs()
            };
            checks += 1;
            if !ok {
                failures.push(format!("{name}^{n} sends sample {k} to ({}, {})", q.0, q.1));
            }
        }
    }
    Ok(PingPongReport {
        holds: failures.is_empty(),
        checks,
        failures,
    })
}

/// 2×2 matrix over ℤ[ζ].
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CycloMatrix2(pub [[CycloNum; 2]; 2]);

impl CycloMatrix2 {
    pub fn scale(&self, s: &CycloNum) -> CycloMatrix2 {
        CycloMatrix2(self.0.clone().map(|row| row.map(|x| s * &x)))
    }
}

impl From<&IntMatrix2> for CycloMatrix2 {
    fn from(m: &IntMatrix2) -> Self {
        let c = |x: &BigInt| CycloNum::from(BigRational::from_integer(x.clone()));
        let [a, b, cc, d] = m.entries();
        CycloMatrix2([[c(a), c(b)], [c(cc), c(d)]])
    }
}

/// For each `(g, h)`, true iff `g ≠ ζᵏ·h` for `k = 0, 1, 2`.
pub fn distinct_mod_center(pairs: &[(CycloMatrix2, CycloMatrix2)]) -> Vec<bool> {
    pairs
        .iter()
        .map(|(g, h)| (0..3).all(|k| *g != h.scale(&CycloNum::zeta_pow(k))))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::rat;

    #[test]
    fn matrix_arithmetic() {
        let [a, b] = sanov_generators();
        assert_eq!(a.mul(&a.inverse().unwrap()), IntMatrix2::identity());
        assert_eq!(a.pow(3).unwrap(), IntMatrix2::from_i64([[1, 6], [0, 1]]));
        assert_eq!(b.pow(-1).unwrap(), IntMatrix2::from_i64([[1, 0], [-2, 1]]));
        assert!(IntMatrix2::from_i64([[2, 0], [0, 1]]).inverse().is_none());
    }

    #[test]
    fn sanov_pair_is_free_to_length_8() {
        let r = no_relation_search(&sanov_generators(), 8, None, DEFAULT_MAX_BITS).unwrap();
        assert!(r.free_up_to_l);
        // 4·3^(ℓ−1) reduced words of each length ℓ
        assert_eq!(r.words_checked, (1..=8).map(|l| 4 * 3u64.pow(l - 1)).sum::<u64>());
    }

    #[test]
    fn elementary_generators_have_a_relation() {
        let gens = elementary_generators();
        let r = no_relation_search(&gens, 12, None, DEFAULT_MAX_BITS).unwrap();
        assert!(!r.free_up_to_l);
        let w = r.witness.unwrap();
        assert_eq!(w.len(), 6);
        assert_eq!(evaluate_word(&gens, &w).unwrap(), IntMatrix2::identity());
        // modulo ±I, (a·b⁻¹)³ = −I has the same length
        let center = [BigInt::from(1), BigInt::from(-1)];
        let r = no_relation_search(&gens, 12, Some(&center), DEFAULT_MAX_BITS).unwrap();
        let w = r.witness.unwrap();
        assert_eq!(w.len(), 6);
        assert!(evaluate_word(&gens, &w).unwrap().as_scalar().is_some_and(|s| center.contains(s)));
    }

    #[test]
    fn overflow_guard() {
        let r = no_relation_search(&sanov_generators(), 10, None, 8);
        assert_eq!(r, Err(CohomError::Overflow { bits: 8 }));
        assert_eq!(
            no_relation_search(&[IntMatrix2::from_i64([[2, 0], [0, 1]])], 3, None, 64),
            Err(CohomError::NotInvertible { index: 0 })
        );
    }

    #[test]
    fn pingpong_examples() {
        let [a, b] = sanov_generators();
        let e2 = (rat(0), rat(1));
        let e1 = (rat(1), rat(0));
        assert_eq!(a.apply(&e2), (rat(2), rat(1)));
        assert_eq!(b.apply(&e1), (rat(1), rat(2)));
        assert_eq!(a.inverse().unwrap().apply(&e2), (rat(-2), rat(1)));
        let r = pingpong_witness(&[e1, e2, (rat(3), rat(-7)), (rat(1), rat(1))]).unwrap();
        assert!(r.holds);
        assert_eq!(r.checks, 18);
        assert!(pingpong_witness(&[(rat(0), rat(0))]).is_err());
    }

    #[test]
    fn mod_center_examples() {
        let id = CycloMatrix2::from(&IntMatrix2::identity());
        let neg = CycloMatrix2::from(&IntMatrix2::from_i64([[-1, 0], [0, -1]]));
        let [a, b] = sanov_generators();
        let pairs = [
            (id.clone(), id.clone()),
            (id.clone(), neg.clone()),
            ((&a).into(), (&b).into()),
            (id.scale(&CycloNum::zeta()), id.clone()),
        ];
        assert_eq!(distinct_mod_center(&pairs), vec![false, true, true, false]);
        let swapped: Vec<_> = pairs.iter().map(|(g, h)| (h.clone(), g.clone())).collect();
        assert_eq!(distinct_mod_center(&swapped), distinct_mod_center(&pairs));
    }

    #[test]
    fn serde_rows() {
        let m = IntMatrix2::from_i64([[1, 2], [0, 1]]);
        let s = serde_json::to_string(&m).unwrap();
        assert_eq!(s, "[[1,2],[0,1]]");
        let big: IntMatrix2 = serde_json::from_str(r#"[["100000000000000000000",0],[0,1]]"#).unwrap();
        assert_eq!(big.det().to_string(), "100000000000000000000");
        let back: IntMatrix2 = serde_json::from_str(&s).unwrap();
        assert_eq!(back, m);
        assert_eq!(back.det(), &BigInt::from(1));
    }
}
