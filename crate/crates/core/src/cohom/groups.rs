use serde::{Deserialize, Serialize};

use super::CohomError;

/// A finite group given by its multiplication table, with an involutive
/// automorphism `σ` (the action of the generator of ℤ/2).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "RawTable", into = "RawTable")]
pub struct FiniteGroupTable {
    order: usize,
    table: Vec<usize>,
    identity: usize,
    inverses: Vec<usize>,
    sigma: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawTable {
    order: usize,
    /// Row-major: `table[i·order + j] = i·j`.
    table: Vec<usize>,
    /// Defaults to the identity permutation.
    #[serde(default)]
    sigma: Option<Vec<usize>>,
}

impl TryFrom<RawTable> for FiniteGroupTable {
    type Error = CohomError;
    fn try_from(raw: RawTable) -> Result<Self, CohomError> {
        let sigma = raw.sigma.unwrap_or_else(|| (0..raw.order).collect());
        FiniteGroupTable::new(raw.order, raw.table, sigma)
    }
}

impl From<FiniteGroupTable> for RawTable {
    fn from(g: FiniteGroupTable) -> RawTable {
        RawTable {
            order: g.order,
            table: g.table,
            sigma: Some(g.sigma),
        }
    }
}

impl FiniteGroupTable {
    pub fn new(order: usize, table: Vec<usize>, sigma: Vec<usize>) -> Result<Self, CohomError> {
        let bad = |m: &str| Err(CohomError::InvalidTable(m.to_string()));
        if order == 0 {
            return bad("empty group");
        }
        if table.len() != order * order {
            return bad("table size is not order²");
        }
        if table.iter().any(|&x| x >= order) {
            return bad("table entry out of range");
        }
        let mul = |i: usize, j: usize| table[i * order + j];
        let Some(identity) = (0..order).find(|&e| (0..order).all(|x| mul(e, x) == x && mul(x, e) == x)) else {
            return bad("no identity element");
        };
        let mut inverses = Vec::with_capacity(order);
        for x in 0..order {
            match (0..order).find(|&y| mul(x, y) == identity && mul(y, x) == identity) {
                Some(y) => inverses.push(y),
                None => return Err(CohomError::InvalidTable(format!("element {x} has no inverse"))),
            }
        }
        for a in 0..order {
            for b in 0..order {
                let ab = mul(a, b);
                for c in 0..order {
                    if mul(ab, c) != mul(a, mul(b, c)) {
                        return Err(CohomError::InvalidTable(format!("not associative at ({a}, {b}, {c})")));
                    }
                }
            }
        }
        let g = FiniteGroupTable {
            order,
            table,
            identity,
            inverses,
            sigma: (0..order).collect(),
        };
        g.with_sigma(sigma)
    }

    /// Same group with another action.
    pub fn with_sigma(mut self, sigma: Vec<usize>) -> Result<Self, CohomError> {
        let n = self.order;
        let mut seen = vec![false; n];
        if sigma.len() != n || sigma.iter().any(|&s| s >= n || std::mem::replace(&mut seen[s], true)) {
            return Err(CohomError::NotAutomorphism);
        }
        for a in 0..n {
            for b in 0..n {
                if sigma[self.mul(a, b)] != self.mul(sigma[a], sigma[b]) {
                    return Err(CohomError::NotAutomorphism);
                }
            }
        }
        if (0..n).any(|a| sigma[sigma[a]] != a) {
            return Err(CohomError::NotInvolution);
        }
        self.sigma = sigma;
        Ok(self)
    }

    /// Builds a table from a list of distinct elements closed under `mul`.
    pub fn from_elements<T: PartialEq>(elems: &[T], mul: impl Fn(&T, &T) -> T) -> Result<Self, CohomError> {
        let n = elems.len();
        let mut table = Vec::with_capacity(n * n);
        for a in elems {
            for b in elems {
                let p = mul(a, b);
                match elems.iter().position(|e| *e == p) {
                    Some(k) => table.push(k),
                    None => return Err(CohomError::InvalidTable("elements not closed under product".into())),
                }
            }
        }
        FiniteGroupTable::new(n, table, (0..n).collect())
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn sigma(&self) -> &[usize] {
        &self.sigma
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.table[a * self.order + b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inverses[a]
    }

    pub fn act(&self, a: usize) -> usize {
        self.sigma[a]
    }

    /// Isomorphic copy with element `i` renamed `perm[i]`.
    pub fn relabel(&self, perm: &[usize]) -> Result<Self, CohomError> {
        let n = self.order;
        let mut table = vec![0; n * n];
        let mut sigma = vec![0; n];
        for a in 0..n {
            sigma[perm[a]] = perm[self.sigma[a]];
            for b in 0..n {
                table[perm[a] * n + perm[b]] = perm[self.mul(a, b)];
            }
        }
        FiniteGroupTable::new(n, table, sigma)
    }

    /// All automorphisms `φ` with `φ∘φ = id`, the identity included.
    pub fn involutive_automorphisms(&self) -> Vec<Vec<usize>> {
        let n = self.order;
        let mut out = Vec::new();
        let mut phi = vec![usize::MAX; n];
        let mut used = vec![false; n];
        phi[self.identity] = self.identity;
        used[self.identity] = true;
        self.extend_automorphism(0, &mut phi, &mut used, &mut out);
        out.retain(|phi| (0..n).all(|a| phi[phi[a]] == a));
        out
    }

    fn extend_automorphism(&self, next: usize, phi: &mut Vec<usize>, used: &mut Vec<bool>, out: &mut Vec<Vec<usize>>) {
        let n = self.order;
        let Some(a) = (next..n).find(|&a| phi[a] == usize::MAX) else {
            out.push(phi.clone());
            return;
        };
        for image in 0..n {
            if used[image] {
                continue;
            }
            phi[a] = image;
            used[image] = true;
            let consistent = (0..n).filter(|&b| phi[b] != usize::MAX).all(|b| {
                [(a, b), (b, a)].iter().all(|&(x, y)| {
                    let xy = self.mul(x, y);
                    phi[xy] == usize::MAX || phi[xy] == self.mul(phi[x], phi[y])
                })
            });
            if consistent {
                self.extend_automorphism(a + 1, phi, used, out);
            }
            phi[a] = usize::MAX;
            used[image] = false;
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct H1Result {
    /// Smallest element of each class of cocycles.
    pub classes: Vec<usize>,
    pub count: usize,
    /// All `z` with `z·σ(z) = e`.
    pub cocycles: Vec<usize>,
    /// Class index of each element (cocycles only).
    #[serde(skip)]
    pub class_of: Vec<Option<usize>>,
}

/// `H¹(ℤ/2, A)`: cocycles `z·σ(z) = e` modulo `z ~ c⁻¹·z·σ(c)`.
pub fn h1_z2(a: &FiniteGroupTable) -> H1Result {
    let n = a.order();
    let cocycles: Vec<usize> = (0..n).filter(|&z| a.mul(z, a.act(z)) == a.identity()).collect();
    let mut class_of = vec![None; n];
    let mut classes = Vec::new();
    for &z in &cocycles {
        if class_of[z].is_some() {
            continue;
        }
        let k = classes.len();
        classes.push(z);
        for c in 0..n {
            let w = a.mul(a.mul(a.inv(c), z), a.act(c));
            class_of[w] = Some(k);
        }
    }
    H1Result {
        count: classes.len(),
        classes,
        cocycles,
        class_of,
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SemidirectResult {
    /// Conjugacy classes of elements `(z, σ)` with square the identity.
    pub count: usize,
    pub h1_count: usize,
    /// Image of each H¹ class (in the order of [`H1Result::classes`]).
    pub map_from_h1: Vec<usize>,
    pub well_defined: bool,
    pub surjective: bool,
    /// Conjugacy classes of elements `(a, 1)` of order 2, kept apart.
    pub trivial_part_classes: usize,
}

/// Counts conjugacy classes of square-identity elements `(z, σ)` in
/// `A ⋊ ⟨σ⟩` and compares them with `H¹(ℤ/2, A)`.
pub fn semidirect_order2_classes(a: &FiniteGroupTable) -> SemidirectResult {
    let n = a.order();
    // element (x, g) ↦ index x + n·g, g ∈ {0, 1}
    let act = |g: usize, x: usize| if g == 1 { a.act(x) } else { x };
    let mul = |p: usize, q: usize| {
        let (x, g, y, h) = (p % n, p / n, q % n, q / n);
        a.mul(x, act(g, y)) + n * ((g + h) % 2)
    };
    let inv = |p: usize| {
        let (x, g) = (p % n, p / n);
        act(g, a.inv(x)) + n * g
    };
    let identity = a.identity();
    let mut class_of = vec![usize::MAX; 2 * n];
    let mut count = 0;
    let mut trivial_part_classes = 0;
    for p in 0..2 * n {
        if class_of[p] != usize::MAX || mul(p, p) != identity || p == identity {
            continue;
        }
        let k = if p >= n {
            count += 1;
            count - 1
        } else {
            trivial_part_classes += 1;
            usize::MAX - trivial_part_classes
        };
        for y in 0..2 * n {
            class_of[mul(mul(y, p), inv(y))] = k;
        }
    }
    let h1 = h1_z2(a);
    let mut map_from_h1 = vec![usize::MAX; h1.count];
    let mut well_defined = true;
    for &z in &h1.cocycles {
        let src = h1.class_of[z].expect("cocycle has a class");
        let dst = class_of[z + n];
        if map_from_h1[src] == usize::MAX {
            map_from_h1[src] = dst;
        } else if map_from_h1[src] != dst {
            well_defined = false;
        }
    }
    let surjective = (0..count).all(|k| map_from_h1.contains(&k));
    SemidirectResult {
        count,
        h1_count: h1.count,
        map_from_h1,
        well_defined,
        surjective,
        trivial_part_classes,
    }
}

/// Groups of order at most 8, one per isomorphism type.
pub fn small_groups() -> Vec<(&'static str, FiniteGroupTable)> {
    let cyclic = |n: usize| {
        let elems: Vec<usize> = (0..n).collect();
        FiniteGroupTable::from_elements(&elems, |a, b| (a + b) % n).expect("cyclic group")
    };
    let product = |m: usize, n: usize, k: usize| {
        let elems: Vec<(usize, usize, usize)> = (0..m)
            .flat_map(|a| (0..n).flat_map(move |b| (0..k).map(move |c| (a, b, c))))
            .collect();
        FiniteGroupTable::from_elements(&elems, |x, y| ((x.0 + y.0) % m, (x.1 + y.1) % n, (x.2 + y.2) % k))
            .expect("abelian group")
    };
    // r^i s^j with s r s = r⁻¹
    let dihedral = |m: usize| {
        let elems: Vec<(usize, usize)> = (0..m).flat_map(|i| (0..2).map(move |j| (i, j))).collect();
        FiniteGroupTable::from_elements(&elems, |x, y| {
            let i = if x.1 == 0 { x.0 + y.0 } else { x.0 + m - y.0 };
            (i % m, (x.1 + y.1) % 2)
        })
        .expect("dihedral group")
    };
    vec![
        ("1", cyclic(1)),
        ("Z2", cyclic(2)),
        ("Z3", cyclic(3)),
        ("Z4", cyclic(4)),
        ("Z2^2", product(2, 2, 1)),
        ("Z5", cyclic(5)),
        ("Z6", cyclic(6)),
        ("S3", dihedral(3)),
        ("Z7", cyclic(7)),
        ("Z8", cyclic(8)),
        ("Z4xZ2", product(4, 2, 1)),
        ("Z2^3", product(2, 2, 2)),
        ("D4", dihedral(4)),
        ("Q8", quaternions()),
    ]
}

fn quaternions() -> FiniteGroupTable {
    // (sign, unit) with units 1, i, j, k as 0..4
    const UNIT: [[(i8, usize); 4]; 4] = [
        [(1, 0), (1, 1), (1, 2), (1, 3)],
        [(1, 1), (-1, 0), (1, 3), (-1, 2)],
        [(1, 2), (-1, 3), (-1, 0), (1, 1)],
        [(1, 3), (1, 2), (-1, 1), (-1, 0)],
    ];
    let elems: Vec<(i8, usize)> = [1, -1].iter().flat_map(|&s| (0..4).map(move |u| (s, u))).collect();
    FiniteGroupTable::from_elements(&elems, |x, y| {
        let (s, u) = UNIT[x.1][y.1];
        (x.0 * y.0 * s, u)
    })
    .expect("quaternion group")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z(n: usize) -> FiniteGroupTable {
        small_groups().into_iter().find(|(name, _)| *name == format!("Z{n}")).unwrap().1
    }

    #[test]
    fn h1_examples() {
        let trivial = &small_groups()[0].1;
        assert_eq!(h1_z2(trivial).count, 1);
        assert_eq!(h1_z2(&z(2)).count, 2);
        let inversion = z(3).with_sigma(vec![0, 2, 1]).unwrap();
        let r = h1_z2(&inversion);
        assert_eq!(r.cocycles.len(), 3);
        assert_eq!(r.count, 1);
    }

    #[test]
    fn semidirect_examples() {
        let trivial = semidirect_order2_classes(&small_groups()[0].1);
        assert_eq!(trivial.count, 1);
        let r = semidirect_order2_classes(&z(2));
        assert_eq!((r.count, r.h1_count), (2, 2));
        let s3 = semidirect_order2_classes(&z(3).with_sigma(vec![0, 2, 1]).unwrap());
        assert_eq!((s3.count, s3.h1_count), (1, 1));
        assert!(s3.well_defined && s3.surjective);
    }

    #[test]
    fn group_list_has_expected_shapes() {
        let groups = small_groups();
        assert_eq!(groups.len(), 14);
        let abelian = |g: &FiniteGroupTable| (0..g.order()).all(|a| (0..g.order()).all(|b| g.mul(a, b) == g.mul(b, a)));
        for (name, g) in &groups {
            let expect_abelian = !matches!(*name, "S3" | "D4" | "Q8");
            assert_eq!(abelian(g), expect_abelian, "{name}");
        }
        // Q8 has a single involution, D4 has five
        let involutions = |g: &FiniteGroupTable| (0..g.order()).filter(|&a| a != g.identity() && g.mul(a, a) == g.identity()).count();
        let get = |n: &str| &groups.iter().find(|(m, _)| *m == n).unwrap().1;
        assert_eq!(involutions(get("Q8")), 1);
        assert_eq!(involutions(get("D4")), 5);
    }

    #[test]
    fn automorphism_counts() {
        // involutive automorphisms: identity plus the involutions of Aut(A)
        let groups = small_groups();
        let count = |n: &str| groups.iter().find(|(m, _)| *m == n).unwrap().1.involutive_automorphisms().len();
        assert_eq!(count("Z3"), 2);
        assert_eq!(count("Z8"), 4);
        assert_eq!(count("Z2^2"), 4); // GL₂(𝔽₂) ≅ S₃ has three involutions
        assert_eq!(count("S3"), 4); // Aut(S₃) ≅ S₃
    }

    #[test]
    fn validation() {
        assert!(matches!(FiniteGroupTable::new(2, vec![0, 1, 1, 1], vec![0, 1]), Err(CohomError::InvalidTable(_))));
        assert_eq!(z(3).with_sigma(vec![0, 2, 2]), Err(CohomError::NotAutomorphism));
        let g = z(5);
        // doubling is an automorphism of order 4
        assert_eq!(g.with_sigma(vec![0, 2, 4, 1, 3]), Err(CohomError::NotInvolution));
    }

    #[test]
    fn relabeling_preserves_h1() {
        let g = z(4).with_sigma(vec![0, 3, 2, 1]).unwrap();
        let h = g.relabel(&[2, 0, 3, 1]).unwrap();
        assert_eq!(h1_z2(&g).count, h1_z2(&h).count);
    }

    #[test]
    fn json_roundtrip() {
        let g = z(3).with_sigma(vec![0, 2, 1]).unwrap();
        let s = serde_json::to_string(&g).unwrap();
        let back: FiniteGroupTable = serde_json::from_str(&s).unwrap();
        assert_eq!(back, g);
        let parsed: FiniteGroupTable = serde_json::from_str(r#"{"order":2,"table":[0,1,1,0]}"#).unwrap();
        assert_eq!(parsed.sigma(), &[0, 1]);
    }
}
