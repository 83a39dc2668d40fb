//! Projective hyperplane arrangements and their incidence combinatorics.
//!
//! Arrangements live in `P^2` or `P^3` over a cyclotomic field. All of the
//! cohomology machinery downstream consumes only the purely combinatorial
//! [`LineIncidence`] structure: `d` lines and the list of singular points
//! with their incident line indices (1-based).

use std::collections::HashMap;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{CycloError, CycloField, CycloNum};
use crate::linalg::ExactMatrix;

#[derive(Debug, Error)]
pub enum ArrangementError {
    #[error("document error: {0}")]
    Document(String),
    #[error(transparent)]
    Literal(#[from] CycloError),
    #[error("hyperplane {index} is identically zero")]
    ZeroHyperplane { index: usize },
    #[error("hyperplane {index} has {got} coefficients, ambient dimension needs {expected}")]
    CoefficientCount { index: usize, expected: usize, got: usize },
    #[error("arrangement is not reduced: hyperplanes {first} and {second} are proportional")]
    NotReduced { first: usize, second: usize },
    #[error("ambient projective dimension must be 2 or 3, got {0}")]
    UnsupportedAmbient(usize),
    #[error("expected an arrangement in P^{expected}, got P^{got}")]
    WrongAmbient { expected: usize, got: usize },
    #[error("line index {index} out of range 1..={d}")]
    IndexOutOfRange { index: usize, d: usize },
    #[error("invalid incidence structure: {0}")]
    BadIncidence(String),
    #[error("no generic section found after {attempts} attempts")]
    GenericityExhausted { attempts: u64 },
}

/// A projective hyperplane, canonicalized so the first nonzero coefficient
/// is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Hyperplane {
    coeffs: Vec<CycloNum>,
}

impl Hyperplane {
    pub fn new(coeffs: Vec<CycloNum>) -> Result<Self, ArrangementError> {
        let lead = coeffs.iter().position(|c| !c.is_zero());
        let Some(lead) = lead else {
            return Err(ArrangementError::ZeroHyperplane { index: 0 });
        };
        let scale = coeffs[lead].inverse().expect("nonzero leading coefficient");
        let coeffs = coeffs.iter().map(|c| c * &scale).collect();
        Ok(Hyperplane { coeffs })
    }

    pub fn coeffs(&self) -> &[CycloNum] {
        &self.coeffs
    }
}

/// A reduced arrangement of hyperplanes in `P^{n-1}`, `n` in {3, 4}.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arrangement {
    field: CycloField,
    ambient_coords: usize,
    hyperplanes: Vec<Hyperplane>,
}

/// JSON shape of the arrangement document.
#[derive(Serialize, Deserialize)]
struct ArrangementDoc {
    cyclotomic_order: u32,
    ambient_projective_dim: usize,
    hyperplanes: Vec<Vec<String>>,
}

impl Arrangement {
    pub fn new(
        field: &CycloField,
        ambient_projective_dim: usize,
        coeff_rows: Vec<Vec<CycloNum>>,
    ) -> Result<Self, ArrangementError> {
        if !(2..=3).contains(&ambient_projective_dim) {
            return Err(ArrangementError::UnsupportedAmbient(ambient_projective_dim));
        }
        let n = ambient_projective_dim + 1;
        let mut hyperplanes = Vec::with_capacity(coeff_rows.len());
        for (i, row) in coeff_rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(ArrangementError::CoefficientCount {
                    index: i + 1,
                    expected: n,
                    got: row.len(),
                });
            }
            let h = Hyperplane::new(row)
                .map_err(|_| ArrangementError::ZeroHyperplane { index: i + 1 })?;
            hyperplanes.push(h);
        }
        if hyperplanes.is_empty() {
            return Err(ArrangementError::Document("at least one hyperplane required".into()));
        }
        for j in 0..hyperplanes.len() {
            for k in j + 1..hyperplanes.len() {
                if hyperplanes[j] == hyperplanes[k] {
                    return Err(ArrangementError::NotReduced { first: j + 1, second: k + 1 });
                }
            }
        }
        Ok(Arrangement { field: field.clone(), ambient_coords: n, hyperplanes })
    }

    /// Parse the JSON arrangement document, canonicalizing coefficients and
    /// rejecting non-reduced input.
    pub fn parse(document: &str) -> Result<Self, ArrangementError> {
        let doc: ArrangementDoc = serde_json::from_str(document)
            .map_err(|e| ArrangementError::Document(e.to_string()))?;
        let field = CycloField::new(doc.cyclotomic_order)?;
        let mut rows = Vec::with_capacity(doc.hyperplanes.len());
        for lits in &doc.hyperplanes {
            let row: Result<Vec<CycloNum>, CycloError> =
                lits.iter().map(|s| field.parse(s)).collect();
            rows.push(row?);
        }
        Arrangement::new(&field, doc.ambient_projective_dim, rows)
    }

    /// Canonical document; `parse(to_document())` is the identity and
    /// `to_document` is stable under re-parsing.
    pub fn to_document(&self) -> String {
        let doc = ArrangementDoc {
            cyclotomic_order: self.field.order(),
            ambient_projective_dim: self.projective_dim(),
            hyperplanes: self
                .hyperplanes
                .iter()
                .map(|h| h.coeffs.iter().map(|c| c.to_literal()).collect())
                .collect(),
        };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn field(&self) -> &CycloField {
        &self.field
    }

    /// Number of homogeneous coordinates (3 for `P^2`, 4 for `P^3`).
    pub fn ambient_coords(&self) -> usize {
        self.ambient_coords
    }

    pub fn projective_dim(&self) -> usize {
        self.ambient_coords - 1
    }

    /// Degree `d` of the arrangement.
    pub fn degree(&self) -> usize {
        self.hyperplanes.len()
    }

    pub fn hyperplanes(&self) -> &[Hyperplane] {
        &self.hyperplanes
    }

    /// 1-based access.
    pub fn hyperplane(&self, index: usize) -> &Hyperplane {
        &self.hyperplanes[index - 1]
    }

    /// Index (1-based) of the hyperplane with the given canonical
    /// coefficients, if present.
    pub fn index_of(&self, coeffs: &[CycloNum]) -> Option<usize> {
        let target = Hyperplane::new(coeffs.to_vec()).ok()?;
        self.hyperplanes.iter().position(|h| *h == target).map(|i| i + 1)
    }

    /// Singular points of a line arrangement in `P^2`, computed by exact
    /// pairwise intersection and grouping of coincident points.
    pub fn incidence_p2(&self) -> Result<LineIncidence, ArrangementError> {
        if self.projective_dim() != 2 {
            return Err(ArrangementError::WrongAmbient { expected: 2, got: self.projective_dim() });
        }
        let d = self.degree();
        let mut groups: HashMap<Vec<CycloNum>, Vec<usize>> = HashMap::new();
        for j in 1..=d {
            for k in j + 1..=d {
                let p = cross3(self.hyperplane(j).coeffs(), self.hyperplane(k).coeffs());
                let p = canonical_point(p).expect("distinct lines always meet in P^2");
                let entry = groups.entry(p).or_default();
                for idx in [j, k] {
                    if !entry.contains(&idx) {
                        entry.push(idx);
                    }
                }
            }
        }
        let mut points: Vec<Vec<usize>> = groups
            .into_values()
            .map(|mut v| {
                v.sort_unstable();
                v
            })
            .collect();
        points.sort();
        LineIncidence::new(d, points)
    }

    /// Codimension-2 edges of a plane arrangement in `P^3`, as the incidence
    /// structure of a generic plane section. Membership of a plane in an
    /// edge is decided by the rank of the stacked coefficient matrix.
    pub fn codim2_edges_p3(&self) -> Result<LineIncidence, ArrangementError> {
        if self.projective_dim() != 3 {
            return Err(ArrangementError::WrongAmbient { expected: 3, got: self.projective_dim() });
        }
        let d = self.degree();
        let mut groups: HashMap<Vec<CycloNum>, Vec<usize>> = HashMap::new();
        for j in 1..=d {
            for k in j + 1..=d {
                let m = ExactMatrix::from_rows(
                    &self.field,
                    vec![
                        self.hyperplane(j).coeffs().to_vec(),
                        self.hyperplane(k).coeffs().to_vec(),
                    ],
                );
                let (rref, pivots) = m.rref();
                debug_assert_eq!(pivots.len(), 2, "distinct hyperplanes span rank 2");
                let mut key: Vec<CycloNum> = Vec::with_capacity(8);
                for r in 0..2 {
                    for c in 0..4 {
                        key.push(rref.at(r, c).clone());
                    }
                }
                let entry = groups.entry(key).or_default();
                for idx in [j, k] {
                    if !entry.contains(&idx) {
                        entry.push(idx);
                    }
                }
            }
        }
        let mut points: Vec<Vec<usize>> = groups
            .into_values()
            .map(|mut v| {
                v.sort_unstable();
                v
            })
            .collect();
        points.sort();
        LineIncidence::new(d, points)
    }

    /// Cut a `P^3` arrangement by a plane with small pseudo-random rational
    /// coefficients derived from `seed`, producing an explicit `P^2`
    /// arrangement whose labeled incidence equals [`Self::codim2_edges_p3`].
    ///
    /// The incidence comparison is the exact genericity certificate; seeds
    /// are retried in sequence until it holds.
    pub fn generic_section_coords(&self, seed: u64) -> Result<Arrangement, ArrangementError> {
        self.generic_section_with_budget(seed, 64)
    }

    pub fn generic_section_with_budget(
        &self,
        seed: u64,
        budget: u64,
    ) -> Result<Arrangement, ArrangementError> {
        if self.projective_dim() != 3 {
            return Err(ArrangementError::WrongAmbient { expected: 3, got: self.projective_dim() });
        }
        let target = self.codim2_edges_p3()?;
        for attempt in 0..budget {
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
            let h: Vec<CycloNum> =
                (0..4).map(|_| self.field.from_integer(rng.gen_range(-9..=9))).collect();
            if h.iter().all(|c| c.is_zero()) {
                continue;
            }
            let plane = ExactMatrix::from_rows(&self.field, vec![h]);
            let (_, basis) = plane.rank_and_kernel();
            debug_assert_eq!(basis.len(), 3);
            let mut rows = Vec::with_capacity(self.degree());
            let mut degenerate = false;
            for hp in &self.hyperplanes {
                let restricted: Vec<CycloNum> = basis
                    .iter()
                    .map(|b| {
                        let mut acc = self.field.zero();
                        for (a, x) in hp.coeffs().iter().zip(b) {
                            if !a.is_zero() && !x.is_zero() {
                                acc = &acc + &(a * x);
                            }
                        }
                        acc
                    })
                    .collect();
                if restricted.iter().all(|c| c.is_zero()) {
                    degenerate = true;
                    break;
                }
                rows.push(restricted);
            }
            if degenerate {
                continue;
            }
            let section = match Arrangement::new(&self.field, 2, rows) {
                Ok(a) => a,
                Err(ArrangementError::NotReduced { .. }) => continue,
                Err(e) => return Err(e),
            };
            let got = section.incidence_p2()?;
            if got == target {
                return Ok(section);
            }
        }
        Err(ArrangementError::GenericityExhausted { attempts: budget })
    }
}

/// Cross product of two coefficient vectors in `P^2`: the intersection
/// point of the two lines.
fn cross3(a: &[CycloNum], b: &[CycloNum]) -> Vec<CycloNum> {
    vec![
        &(&a[1] * &b[2]) - &(&a[2] * &b[1]),
        &(&a[2] * &b[0]) - &(&a[0] * &b[2]),
        &(&a[0] * &b[1]) - &(&a[1] * &b[0]),
    ]
}

fn canonical_point(coords: Vec<CycloNum>) -> Option<Vec<CycloNum>> {
    let lead = coords.iter().position(|c| !c.is_zero())?;
    let scale = coords[lead].inverse().expect("nonzero");
    Some(coords.iter().map(|c| c * &scale).collect())
}

/// Purely combinatorial line arrangement: `d` lines, and every singular
/// point as its sorted set of incident line indices (1-based).
///
/// Pair-partition invariant: every unordered pair of lines belongs to
/// exactly one point.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LineIncidence {
    d: usize,
    points: Vec<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct IncidenceDoc {
    d: usize,
    points: Vec<Vec<usize>>,
}

impl LineIncidence {
    pub fn new(d: usize, points: Vec<Vec<usize>>) -> Result<Self, ArrangementError> {
        let mut seen = vec![false; d * d];
        for p in &points {
            if p.len() < 2 {
                return Err(ArrangementError::BadIncidence(format!(
                    "point {p:?} has fewer than two lines"
                )));
            }
            if p.windows(2).any(|w| w[0] >= w[1]) {
                return Err(ArrangementError::BadIncidence(format!(
                    "point {p:?} is not strictly sorted"
                )));
            }
            for (a, &j) in p.iter().enumerate() {
                if j < 1 || j > d {
                    return Err(ArrangementError::IndexOutOfRange { index: j, d });
                }
                for &k in &p[a + 1..] {
                    let cell = (j - 1) * d + (k - 1);
                    if seen[cell] {
                        return Err(ArrangementError::BadIncidence(format!(
                            "pair ({j},{k}) lies on two points"
                        )));
                    }
                    seen[cell] = true;
                }
            }
        }
        for j in 1..=d {
            for k in j + 1..=d {
                if !seen[(j - 1) * d + (k - 1)] {
                    return Err(ArrangementError::BadIncidence(format!(
                        "pair ({j},{k}) lies on no point"
                    )));
                }
            }
        }
        let mut points = points;
        points.sort();
        Ok(LineIncidence { d, points })
    }

    pub fn parse(document: &str) -> Result<Self, ArrangementError> {
        let doc: IncidenceDoc = serde_json::from_str(document)
            .map_err(|e| ArrangementError::Document(e.to_string()))?;
        LineIncidence::new(doc.d, doc.points)
    }

    pub fn to_document(&self) -> String {
        let doc = IncidenceDoc { d: self.d, points: self.points.clone() };
        let mut s = serde_json::to_string_pretty(&doc).expect("serializable");
        s.push('\n');
        s
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn points(&self) -> &[Vec<usize>] {
        &self.points
    }

    pub fn multiplicity(&self, point: usize) -> usize {
        self.points[point].len()
    }

    /// Index of the unique point through lines `j` and `k`.
    pub fn point_of_pair(&self, j: usize, k: usize) -> usize {
        self.points
            .iter()
            .position(|p| p.contains(&j) && p.contains(&k))
            .expect("pair partition")
    }

    /// `d x d` lookup table: entry `(j-1, k-1)` is the point through lines
    /// `j != k`.
    pub fn pair_table(&self) -> Vec<Vec<usize>> {
        let mut table = vec![vec![usize::MAX; self.d]; self.d];
        for (pi, p) in self.points.iter().enumerate() {
            for (a, &j) in p.iter().enumerate() {
                for &k in &p[a + 1..] {
                    table[j - 1][k - 1] = pi;
                    table[k - 1][j - 1] = pi;
                }
            }
        }
        table
    }

    /// Points with multiplicity at least 3 (the dense codimension-2 edges).
    pub fn dense_points(&self) -> Vec<usize> {
        (0..self.points.len()).filter(|&p| self.points[p].len() >= 3).collect()
    }

    /// Points lying on line `k`.
    pub fn points_on_line(&self, k: usize) -> Vec<usize> {
        (0..self.points.len()).filter(|&p| self.points[p].contains(&k)).collect()
    }

    /// Local poset ranks, Betti numbers and Euler characteristic of the
    /// complement, deconed at line `deleted`.
    ///
    /// For a point the rank is `multiplicity - 1`; the second Betti number
    /// sums the ranks of the affine points (those away from the deleted
    /// line), the first is `d - 1`, and the Euler characteristic is the
    /// alternating sum.
    pub fn poset_summary(&self, deleted: usize) -> Result<PosetSummary, ArrangementError> {
        if deleted < 1 || deleted > self.d {
            return Err(ArrangementError::IndexOutOfRange { index: deleted, d: self.d });
        }
        let rho: Vec<usize> = self.points.iter().map(|p| p.len() - 1).collect();
        let b2: usize = self
            .points
            .iter()
            .zip(&rho)
            .filter(|(p, _)| !p.contains(&deleted))
            .map(|(_, r)| *r)
            .sum();
        let betti = (1, self.d - 1, b2);
        let euler = 1 - (self.d as i64 - 1) + b2 as i64;
        Ok(PosetSummary { deleted, rho_points: rho, betti, euler })
    }

    /// Relabel lines by a permutation (`perm[old-1] = new`), preserving the
    /// structure.
    pub fn relabel(&self, perm: &[usize]) -> LineIncidence {
        assert_eq!(perm.len(), self.d);
        let points = self
            .points
            .iter()
            .map(|p| {
                let mut q: Vec<usize> = p.iter().map(|&j| perm[j - 1]).collect();
                q.sort_unstable();
                q
            })
            .collect();
        LineIncidence::new(self.d, points).expect("permutation preserves incidence")
    }
}

/// Poset ranks and Betti data for a chosen deleted line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PosetSummary {
    pub deleted: usize,
    /// `rho_p = multiplicity - 1` per point, aligned with the incidence
    /// point list (all points, affine or not).
    pub rho_points: Vec<usize>,
    /// `(b0, b1, b2)` of the deconed complement.
    pub betti: (usize, usize, usize),
    pub euler: i64,
}

#[cfg(test)]
mod tests {
    use super::*;

    pub fn triangle() -> Arrangement {
        let f = CycloField::new(1).unwrap();
        Arrangement::new(
            &f,
            2,
            vec![
                vec![f.one(), f.zero(), f.zero()],
                vec![f.zero(), f.one(), f.zero()],
                vec![f.zero(), f.zero(), f.one()],
            ],
        )
        .unwrap()
    }

    pub fn near_pencil() -> Arrangement {
        let f = CycloField::new(1).unwrap();
        Arrangement::new(
            &f,
            2,
            vec![
                vec![f.one(), f.zero(), f.zero()],
                vec![f.zero(), f.one(), f.zero()],
                vec![f.one(), f.from_integer(-1), f.zero()],
                vec![f.zero(), f.zero(), f.one()],
            ],
        )
        .unwrap()
    }

    #[test]
    fn triangle_document_round_trip() {
        let doc = r#"{"cyclotomic_order":1,"ambient_projective_dim":2,
                      "hyperplanes":[["1","0","0"],["0","1","0"],["0","0","1"]]}"#;
        let arr = Arrangement::parse(doc).unwrap();
        assert_eq!(arr.degree(), 3);
        let emitted = arr.to_document();
        let again = Arrangement::parse(&emitted).unwrap();
        assert_eq!(emitted, again.to_document());
    }

    #[test]
    fn proportional_hyperplanes_rejected() {
        let doc = r#"{"cyclotomic_order":1,"ambient_projective_dim":2,
                      "hyperplanes":[["1","0","0"],["2","0","0"]]}"#;
        match Arrangement::parse(doc) {
            Err(ArrangementError::NotReduced { first: 1, second: 2 }) => {}
            other => panic!("expected NotReduced, got {other:?}"),
        }
    }

    #[test]
    fn triangle_incidence_three_double_points() {
        let inc = triangle().incidence_p2().unwrap();
        assert_eq!(inc.points().len(), 3);
        assert!(inc.points().iter().all(|p| p.len() == 2));
        assert!(inc.dense_points().is_empty());
    }

    #[test]
    fn near_pencil_has_one_triple_point() {
        let inc = near_pencil().incidence_p2().unwrap();
        let triples: Vec<_> = inc.points().iter().filter(|p| p.len() == 3).collect();
        assert_eq!(triples, vec![&vec![1, 2, 3]]);
        assert_eq!(inc.points().len(), 4);
    }

    #[test]
    fn poset_summaries() {
        let inc = triangle().incidence_p2().unwrap();
        let s = inc.poset_summary(3).unwrap();
        assert_eq!(s.betti, (1, 2, 1));
        assert_eq!(s.euler, 0);

        let inc = near_pencil().incidence_p2().unwrap();
        let s = inc.poset_summary(4).unwrap();
        assert_eq!(s.betti, (1, 3, 2));
        assert_eq!(s.euler, 0);
        // euler does not depend on the deleted line
        for deleted in 1..=4 {
            assert_eq!(inc.poset_summary(deleted).unwrap().euler, 0);
        }
        assert!(matches!(
            inc.poset_summary(9),
            Err(ArrangementError::IndexOutOfRange { index: 9, d: 4 })
        ));
    }

    #[test]
    fn mobius_closure_reproduces_rho() {
        // At each point p: rho_p - |I_p| + 1 = 0 with rho for lines = 1 and
        // for the ambient plane = 1, matching rho_p = mult - 1.
        let inc = near_pencil().incidence_p2().unwrap();
        let s = inc.poset_summary(4).unwrap();
        for (p, &rho) in inc.points().iter().zip(&s.rho_points) {
            assert_eq!(rho as i64 - p.len() as i64 + 1, 0);
        }
    }

    fn tetrahedron() -> Arrangement {
        let f = CycloField::new(1).unwrap();
        Arrangement::new(
            &f,
            3,
            vec![
                vec![f.one(), f.zero(), f.zero(), f.zero()],
                vec![f.zero(), f.one(), f.zero(), f.zero()],
                vec![f.zero(), f.zero(), f.one(), f.zero()],
                vec![f.zero(), f.zero(), f.zero(), f.one()],
            ],
        )
        .unwrap()
    }

    #[test]
    fn tetrahedron_codim2_edges() {
        let inc = tetrahedron().codim2_edges_p3().unwrap();
        assert_eq!(inc.points().len(), 6);
        assert!(inc.points().iter().all(|p| p.len() == 2));
    }

    #[test]
    fn two_planes_one_edge() {
        let f = CycloField::new(1).unwrap();
        let arr = Arrangement::new(
            &f,
            3,
            vec![
                vec![f.one(), f.from_integer(2), f.zero(), f.zero()],
                vec![f.zero(), f.one(), f.one(), f.from_integer(3)],
            ],
        )
        .unwrap();
        let inc = arr.codim2_edges_p3().unwrap();
        assert_eq!(inc.points(), &[vec![1, 2]]);
    }

    #[test]
    fn tetrahedron_generic_section_certified() {
        let arr = tetrahedron();
        let section = arr.generic_section_coords(0).unwrap();
        assert_eq!(section.degree(), 4);
        let inc = section.incidence_p2().unwrap();
        assert_eq!(inc, arr.codim2_edges_p3().unwrap());
    }

    #[test]
    fn incidence_validation_rejects_broken_structures() {
        // pair (1,2) on two points
        assert!(LineIncidence::new(3, vec![vec![1, 2], vec![1, 2, 3]]).is_err());
        // pair (1,3) missing
        assert!(LineIncidence::new(3, vec![vec![1, 2], vec![2, 3]]).is_err());
        // fine
        assert!(LineIncidence::new(3, vec![vec![1, 2], vec![1, 3], vec![2, 3]]).is_ok());
    }

    #[test]
    fn incidence_document_round_trip() {
        let inc = LineIncidence::new(3, vec![vec![1, 2], vec![1, 3], vec![2, 3]]).unwrap();
        let doc = inc.to_document();
        let again = LineIncidence::parse(&doc).unwrap();
        assert_eq!(inc, again);
        assert_eq!(doc, again.to_document());
    }
}
