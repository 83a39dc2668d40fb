//! The Orlik–Solomon algebra in degrees 0..2 and the Aomoto complex.
//!
//! For a line arrangement deconed at a distinguished line, `A^1` is spanned
//! by the logarithmic forms `w_k` of the remaining lines and `A^2` carries
//! one block per affine singular point. The Aomoto complex is `(A^*, w^a ^)`
//! for a rational residue assignment `a`; its cohomology is computed by one
//! exact rank. The ESV/STV admissibility check and Milnor-fiber eigenspace
//! reports live here as well.

use num_traits::{Signed, Zero};
use serde::Serialize;
use thiserror::Error;

use crate::arrangement::LineIncidence;
use crate::conditions;
use crate::cyclo::{CycloField, Rational};
use crate::linalg::ExactMatrix;

#[derive(Debug, Error)]
pub enum TwistedError {
    #[error("residues must sum to zero (got {0})")]
    SumNonzero(Rational),
    #[error("subset size {got} does not match k = {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("subset index {index} out of range 1..={d}")]
    SubsetOutOfRange { index: usize, d: usize },
    #[error("subset contains a repeated index {0}")]
    SubsetRepeated(usize),
    #[error("k = {k} out of range 1..={max}")]
    KOutOfRange { k: usize, max: usize },
    #[error("deleted index {index} out of range 1..={d}")]
    DeletedOutOfRange { index: usize, d: usize },
    #[error("residue vector has {got} entries, the arrangement has {expected} lines")]
    LengthMismatch { expected: usize, got: usize },
    #[error("trivial local system: every residue is an integer")]
    TrivialAssignment,
    #[error("applicability check failed: {0}")]
    Conditions(#[from] conditions::ConditionError),
}

/// `q` is a positive integer.
pub(crate) fn is_positive_integer(q: &Rational) -> bool {
    q.is_integer() && q.is_positive()
}

/// Rational residues `a_1..a_d` with zero sum, plus the index of the
/// deleted (deconed) line.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueAssignment {
    alpha: Vec<Rational>,
    deleted: usize,
}

impl ResidueAssignment {
    pub fn new(alpha: Vec<Rational>, deleted: usize) -> Result<Self, TwistedError> {
        let d = alpha.len();
        if deleted < 1 || deleted > d {
            return Err(TwistedError::DeletedOutOfRange { index: deleted, d });
        }
        let sum: Rational = alpha.iter().sum();
        if !sum.is_zero() {
            return Err(TwistedError::SumNonzero(sum));
        }
        Ok(ResidueAssignment { alpha, deleted })
    }

    /// The eigenvalue datum `lambda = exp(-2 pi i k/d)`: residues are
    /// `1 - k/d` on the subset `I` and `-k/d` off it. The zero-sum
    /// constraint holds exactly because `|I| = k`.
    pub fn from_subset(
        d: usize,
        k: usize,
        subset: &[usize],
        deleted: usize,
    ) -> Result<Self, TwistedError> {
        if k < 1 || k > d - 1 {
            return Err(TwistedError::KOutOfRange { k, max: d - 1 });
        }
        if subset.len() != k {
            return Err(TwistedError::SizeMismatch { expected: k, got: subset.len() });
        }
        let mut inside = vec![false; d + 1];
        for &j in subset {
            if j < 1 || j > d {
                return Err(TwistedError::SubsetOutOfRange { index: j, d });
            }
            if inside[j] {
                return Err(TwistedError::SubsetRepeated(j));
            }
            inside[j] = true;
        }
        let frac = Rational::new(k.into(), d.into());
        let one = Rational::from_integer(1.into());
        let alpha = (1..=d)
            .map(|j| if inside[j] { &one - &frac } else { -frac.clone() })
            .collect();
        ResidueAssignment::new(alpha, deleted)
    }

    pub fn d(&self) -> usize {
        self.alpha.len()
    }

    pub fn deleted(&self) -> usize {
        self.deleted
    }

    /// 1-based residue access.
    pub fn alpha(&self, k: usize) -> &Rational {
        &self.alpha[k - 1]
    }

    pub fn alphas(&self) -> &[Rational] {
        &self.alpha
    }

    /// `alpha_p`: sum of residues over the lines through a point.
    pub fn alpha_point(&self, point: &[usize]) -> Rational {
        point.iter().map(|&j| self.alpha(j)).sum()
    }

    /// All residues integral (the excluded trivial local system).
    pub fn is_trivial(&self) -> bool {
        self.alpha.iter().all(|a| a.is_integer())
    }

    /// Relabel lines by `perm` (`perm[old-1] = new`, a bijection).
    pub fn relabel(&self, perm: &[usize]) -> ResidueAssignment {
        assert_eq!(perm.len(), self.d());
        let mut alpha = vec![Rational::zero(); self.d()];
        for (old0, a) in self.alpha.iter().enumerate() {
            alpha[perm[old0] - 1] = a.clone();
        }
        ResidueAssignment { alpha, deleted: perm[self.deleted - 1] }
    }

    fn check_len(&self, inc: &LineIncidence) -> Result<(), TwistedError> {
        if self.d() != inc.d() {
            return Err(TwistedError::LengthMismatch { expected: inc.d(), got: self.d() });
        }
        Ok(())
    }
}

/// Degree-2 part of the deconed Orlik–Solomon algebra.
///
/// The basis has one element `e_{p,k}` per affine point `p` and line
/// `k in I_p` other than the pivot `min I_p`; `e_{p,k}` is the class of
/// `w_{j0} ^ w_k`. Products expand per point:
/// `w_j ^ w_k = e_{p,k} - e_{p,j}` (with `e_{p,j0} = 0`), and any pair
/// meeting on the deleted line expands to zero.
#[derive(Clone, Debug)]
pub struct OsDegree2 {
    deleted: usize,
    /// `(point id, line k)` per basis element, in point order.
    basis: Vec<(usize, usize)>,
    /// `basis_index[point][k-1]`, usize::MAX when absent.
    basis_index: Vec<Vec<usize>>,
    pair_table: Vec<Vec<usize>>,
    affine: Vec<bool>,
    pivot: Vec<usize>,
}

impl OsDegree2 {
    pub fn build(inc: &LineIncidence, deleted: usize) -> OsDegree2 {
        let d = inc.d();
        assert!((1..=d).contains(&deleted));
        let mut basis = Vec::new();
        let mut basis_index = vec![vec![usize::MAX; d]; inc.points().len()];
        let mut affine = vec![false; inc.points().len()];
        let mut pivot = vec![0usize; inc.points().len()];
        for (pi, p) in inc.points().iter().enumerate() {
            pivot[pi] = p[0];
            if p.contains(&deleted) {
                continue;
            }
            affine[pi] = true;
            for &k in &p[1..] {
                basis_index[pi][k - 1] = basis.len();
                basis.push((pi, k));
            }
        }
        OsDegree2 { deleted, basis, basis_index, pair_table: inc.pair_table(), affine, pivot }
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn deleted(&self) -> usize {
        self.deleted
    }

    pub fn basis(&self) -> &[(usize, usize)] {
        &self.basis
    }

    /// Basis position of `e_{p,k}`; panics if `(p, k)` is not a basis
    /// element.
    pub fn basis_index_of(&self, point: usize, k: usize) -> usize {
        let pos = self.basis_index[point][k - 1];
        assert_ne!(pos, usize::MAX, "({point}, {k}) is not a basis element");
        pos
    }

    /// Expansion of `w_j ^ w_k` (any `j != k`, both differing from the
    /// deleted line) over the basis, as sparse `(basis position, +-1)`.
    pub fn expand_pair(&self, j: usize, k: usize) -> Vec<(usize, i64)> {
        assert!(j != k && j != self.deleted && k != self.deleted);
        if j > k {
            return self.expand_pair(k, j).into_iter().map(|(i, c)| (i, -c)).collect();
        }
        let p = self.pair_table[j - 1][k - 1];
        if !self.affine[p] {
            return vec![];
        }
        let j0 = self.pivot[p];
        if j == j0 {
            vec![(self.basis_index[p][k - 1], 1)]
        } else {
            vec![(self.basis_index[p][k - 1], 1), (self.basis_index[p][j - 1], -1)]
        }
    }
}

/// One ESV violation: a dense edge whose residue sum is a positive integer.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EsvViolation {
    /// Either a single line (codimension-1 edge) or the index set of a
    /// dense point.
    pub edge: Vec<usize>,
    pub alpha: String,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EsvOutcome {
    pub pass: bool,
    pub violations: Vec<EsvViolation>,
}

/// Check the ESV/STV condition: `alpha_Z` must avoid the positive integers
/// for every dense edge, i.e. every line and every point of multiplicity at
/// least 3.
pub fn esv_check(inc: &LineIncidence, ra: &ResidueAssignment) -> Result<EsvOutcome, TwistedError> {
    ra.check_len(inc)?;
    let mut violations = Vec::new();
    for k in 1..=inc.d() {
        if is_positive_integer(ra.alpha(k)) {
            violations.push(EsvViolation { edge: vec![k], alpha: ra.alpha(k).to_string() });
        }
    }
    for pi in inc.dense_points() {
        let p = &inc.points()[pi];
        let ap = ra.alpha_point(p);
        if is_positive_integer(&ap) {
            violations.push(EsvViolation { edge: p.clone(), alpha: ap.to_string() });
        }
    }
    Ok(EsvOutcome { pass: violations.is_empty(), violations })
}

/// Whether the computed dimensions provably equal the local-system
/// cohomology.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Certified {
    #[serde(rename = "ESV")]
    Esv,
    #[serde(rename = "THEOREM1")]
    Theorem1,
    #[serde(rename = "NONE")]
    None,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AomotoResult {
    /// `(h^0, h^1, h^2)` of the Aomoto complex.
    pub h: (usize, usize, usize),
    /// Rank of the degree-1 differential `A^1 -> A^2`.
    pub rank_m: usize,
    pub certified: Certified,
    pub esv: EsvOutcome,
}

/// Build the matrix of `w^a ^ : A^1 -> A^2` column by column.
pub(crate) fn aomoto_matrix(
    inc: &LineIncidence,
    ra: &ResidueAssignment,
    os2: &OsDegree2,
) -> ExactMatrix {
    let field = CycloField::new(1).expect("order 1");
    let d = inc.d();
    let cols: Vec<usize> = (1..=d).filter(|&k| k != ra.deleted()).collect();
    let mut m = ExactMatrix::zeros(&field, os2.dim(), cols.len());
    for (ci, &k) in cols.iter().enumerate() {
        let mut col = vec![Rational::zero(); os2.dim()];
        for j in 1..=d {
            if j == k || j == ra.deleted() {
                continue;
            }
            let aj = ra.alpha(j);
            if aj.is_zero() {
                continue;
            }
            for (pos, sign) in os2.expand_pair(j, k) {
                if sign > 0 {
                    col[pos] += aj;
                } else {
                    col[pos] -= aj;
                }
            }
        }
        for (r, v) in col.into_iter().enumerate() {
            if !v.is_zero() {
                *m.at_mut(r, ci) = field.from_rational(v);
            }
        }
    }
    m
}

/// Dimensions of the Aomoto complex `(A^*, w^a ^)` for a nontrivial
/// rational residue assignment, with the certification status.
///
/// `h^0 = 0`; `h^1` is the kernel dimension of the degree-1 differential
/// minus 1 (the image of `A^0`, nonzero since `w^a != 0`); `h^2` is the
/// cokernel dimension.
pub fn aomoto_cohomology(
    inc: &LineIncidence,
    ra: &ResidueAssignment,
) -> Result<AomotoResult, TwistedError> {
    ra.check_len(inc)?;
    if ra.is_trivial() {
        return Err(TwistedError::TrivialAssignment);
    }
    let os2 = OsDegree2::build(inc, ra.deleted());
    let m = aomoto_matrix(inc, ra, &os2);
    let rank_m = m.rank();
    let d = inc.d();
    let h1 = (d - 1 - rank_m) - 1;
    let h2 = os2.dim() - rank_m;
    let esv = esv_check(inc, ra)?;
    let certified = if esv.pass {
        Certified::Esv
    } else {
        match conditions::check_theorem1(inc, ra) {
            Ok(report) if report.overall => Certified::Theorem1,
            _ => Certified::None,
        }
    };
    Ok(AomotoResult { h: (0, h1, h2), rank_m, certified, esv })
}

/// Claimed Milnor eigenspace dimensions, valid only when certified.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MilnorClaim {
    pub h1: usize,
    pub h2: usize,
}

/// Report on the monodromy eigenspace `lambda = exp(-2 pi i k/d)` of the
/// first Milnor cohomology of the defining polynomial.
#[derive(Clone, Debug)]
pub struct MilnorReport {
    pub k: usize,
    pub d: usize,
    /// Reduced fraction `k/d`; the eigenvalue is `exp(-2 pi i k/d)`.
    pub lambda_exponent: Rational,
    pub subset: Vec<usize>,
    pub deleted: usize,
    pub euler: i64,
    pub aomoto: AomotoResult,
    /// Present exactly when the Aomoto dimensions are certified; then
    /// `dim H^1(F)_lambda = h^1` and `dim H^2(F)_lambda = euler + h^1`.
    pub claim: Option<MilnorClaim>,
}

pub fn milnor_report(
    inc: &LineIncidence,
    k: usize,
    subset: &[usize],
    deleted: usize,
) -> Result<MilnorReport, TwistedError> {
    let d = inc.d();
    let ra = ResidueAssignment::from_subset(d, k, subset, deleted)?;
    let aomoto = aomoto_cohomology(inc, &ra)?;
    let euler = inc
        .poset_summary(deleted)
        .map_err(|_| TwistedError::DeletedOutOfRange { index: deleted, d })?
        .euler;
    // Euler identity: the eigenspace alternating sum equals chi(U); with
    // h^0 = 0 this pins h^2 once h^1 is known.
    debug_assert_eq!(aomoto.h.0 as i64 - aomoto.h.1 as i64 + aomoto.h.2 as i64, euler);
    let claim = (aomoto.certified != Certified::None).then(|| MilnorClaim {
        h1: aomoto.h.1,
        h2: (euler + aomoto.h.1 as i64) as usize,
    });
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    Ok(MilnorReport {
        k,
        d,
        lambda_exponent: Rational::new(k.into(), d.into()),
        subset: sorted,
        deleted,
        euler,
        aomoto,
        claim,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arrangement::Arrangement;
    use proptest::prelude::*;

    fn fixture(name: &str) -> LineIncidence {
        let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
        let doc = std::fs::read_to_string(path).unwrap();
        Arrangement::parse(&doc).unwrap().incidence_p2().unwrap()
    }

    fn rat(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn triangle_os2_dimension() {
        let inc = fixture("triangle");
        let os2 = OsDegree2::build(&inc, 3);
        assert_eq!(os2.dim(), 1);
        assert_eq!(os2.basis(), &[(0, 2)]);
    }

    #[test]
    fn near_pencil_os2_dimension() {
        let inc = fixture("near_pencil");
        let os2 = OsDegree2::build(&inc, 4);
        assert_eq!(os2.dim(), 2);
    }

    #[test]
    fn expansion_rules() {
        let inc = fixture("near_pencil");
        let os2 = OsDegree2::build(&inc, 4);
        // triple point {1,2,3}: pivot 1
        assert_eq!(os2.expand_pair(1, 2), vec![(os2.basis_index_of(0, 2), 1)]);
        let e23 = os2.expand_pair(2, 3);
        assert_eq!(
            e23,
            vec![(os2.basis_index_of(0, 3), 1), (os2.basis_index_of(0, 2), -1)]
        );
        // orientation
        assert_eq!(
            os2.expand_pair(3, 2),
            vec![(os2.basis_index_of(0, 3), -1), (os2.basis_index_of(0, 2), 1)]
        );
    }

    #[test]
    fn residues_from_subset_examples() {
        let ra = ResidueAssignment::from_subset(9, 3, &[4, 5, 9], 9).unwrap();
        for j in 1..=9 {
            let expected = if [4, 5, 9].contains(&j) { rat(2, 3) } else { rat(-1, 3) };
            assert_eq!(*ra.alpha(j), expected);
        }
        let ra = ResidueAssignment::from_subset(4, 2, &[3, 4], 4).unwrap();
        assert_eq!(ra.alphas(), &[rat(-1, 2), rat(-1, 2), rat(1, 2), rat(1, 2)]);
        assert!(matches!(
            ResidueAssignment::from_subset(9, 3, &[4, 5], 9),
            Err(TwistedError::SizeMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn esv_examples() {
        let inc = fixture("near_pencil");
        let ra = ResidueAssignment::new(
            vec![rat(-1, 2), rat(-1, 2), rat(1, 2), rat(1, 2)],
            4,
        )
        .unwrap();
        let out = esv_check(&inc, &ra).unwrap();
        assert!(out.pass, "triple point has alpha_p = -1/2");

        // any residue equal to 1 on a line fails at that line
        let ra = ResidueAssignment::new(vec![rat(1, 1), rat(-1, 2), rat(-1, 2), rat(0, 1)], 4)
            .unwrap();
        let out = esv_check(&inc, &ra).unwrap();
        assert!(!out.pass);
        assert!(out.violations.iter().any(|v| v.edge == vec![1]));
    }

    #[test]
    fn ex26a_esv_fails_at_infinity_triples() {
        let inc = fixture("ex26a");
        let ra = ResidueAssignment::from_subset(9, 3, &[4, 5, 9], 9).unwrap();
        let out = esv_check(&inc, &ra).unwrap();
        assert!(!out.pass);
        let edges: Vec<_> = out.violations.iter().map(|v| v.edge.clone()).collect();
        assert!(edges.contains(&vec![2, 4, 9]));
        assert!(edges.contains(&vec![3, 5, 9]));
        assert_eq!(edges.len(), 2);
        for v in &out.violations {
            assert_eq!(v.alpha, "1");
        }
    }

    #[test]
    fn triangle_aomoto_vanishes() {
        let inc = fixture("triangle");
        let ra = ResidueAssignment::new(vec![rat(1, 3), rat(1, 3), rat(-2, 3)], 3).unwrap();
        let res = aomoto_cohomology(&inc, &ra).unwrap();
        assert_eq!(res.h, (0, 0, 0));
        assert_eq!(res.rank_m, 1);
        assert_eq!(res.certified, Certified::Esv);
    }

    #[test]
    fn near_pencil_aomoto_vanishes_with_esv() {
        let inc = fixture("near_pencil");
        let ra = ResidueAssignment::new(
            vec![rat(-1, 2), rat(-1, 2), rat(1, 2), rat(1, 2)],
            4,
        )
        .unwrap();
        let res = aomoto_cohomology(&inc, &ra).unwrap();
        assert_eq!(res.h, (0, 0, 0));
        assert_eq!(res.rank_m, 2);
        assert_eq!(res.certified, Certified::Esv);
    }

    #[test]
    fn trivial_assignment_rejected() {
        let inc = fixture("triangle");
        let ra = ResidueAssignment::new(vec![rat(1, 1), rat(1, 1), rat(-2, 1)], 3).unwrap();
        assert!(matches!(
            aomoto_cohomology(&inc, &ra),
            Err(TwistedError::TrivialAssignment)
        ));
    }

    #[test]
    fn milnor_ex26a_uncertified() {
        let inc = fixture("ex26a");
        let report = milnor_report(&inc, 3, &[4, 5, 9], 9).unwrap();
        assert_eq!(report.aomoto.certified, Certified::None);
        assert!(report.claim.is_none());
        assert_eq!(report.lambda_exponent, rat(1, 3));
    }

    // -- structural invariants ------------------------------------------

    /// Brute-force dimension of A^2: the span of all pairs modulo the full
    /// relation set, by generic exact linear algebra.
    fn os2_dim_brute_force(inc: &LineIncidence, deleted: usize) -> usize {
        let field = CycloField::new(1).unwrap();
        let d = inc.d();
        let lines: Vec<usize> = (1..=d).filter(|&k| k != deleted).collect();
        let mut pair_pos = std::collections::HashMap::new();
        let mut npairs = 0;
        for (a, &j) in lines.iter().enumerate() {
            for &k in &lines[a + 1..] {
                pair_pos.insert((j, k), npairs);
                npairs += 1;
            }
        }
        let mut relations: Vec<Vec<Rational>> = Vec::new();
        for p in inc.points() {
            if p.contains(&deleted) {
                // pairs meeting on the deleted line vanish
                let others: Vec<usize> = p.iter().copied().filter(|&j| j != deleted).collect();
                for (a, &j) in others.iter().enumerate() {
                    for &k in &others[a + 1..] {
                        let mut row = vec![Rational::zero(); npairs];
                        row[pair_pos[&(j, k)]] = Rational::from_integer(1.into());
                        relations.push(row);
                    }
                }
            } else {
                for (a, &i) in p.iter().enumerate() {
                    for (b, &j) in p.iter().enumerate().skip(a + 1) {
                        for &k in &p[b + 1..] {
                            // w_i^w_j - w_i^w_k + w_j^w_k = 0
                            let mut row = vec![Rational::zero(); npairs];
                            row[pair_pos[&(i, j)]] += Rational::from_integer(1.into());
                            row[pair_pos[&(i, k)]] -= Rational::from_integer(1.into());
                            row[pair_pos[&(j, k)]] += Rational::from_integer(1.into());
                            relations.push(row);
                        }
                    }
                }
            }
        }
        let m = ExactMatrix::from_fn(&field, relations.len(), npairs, |r, c| {
            field.from_rational(relations[r][c].clone())
        });
        npairs - m.rank()
    }

    #[test]
    fn os2_matches_brute_force_on_small_fixtures() {
        for name in ["triangle", "near_pencil", "ex26a", "ex26b"] {
            let inc = fixture(name);
            if inc.d() > 7 && name != "ex26a" && name != "ex26b" {
                continue;
            }
            for deleted in [1, inc.d()] {
                let os2 = OsDegree2::build(&inc, deleted);
                assert_eq!(
                    os2.dim(),
                    os2_dim_brute_force(&inc, deleted),
                    "{name} deleted {deleted}"
                );
            }
        }
    }

    #[test]
    fn per_point_support_of_aomoto_columns() {
        let inc = fixture("ex26a");
        let ra = ResidueAssignment::from_subset(9, 3, &[4, 5, 9], 9).unwrap();
        let os2 = OsDegree2::build(&inc, ra.deleted());
        let m = aomoto_matrix(&inc, &ra, &os2);
        let cols: Vec<usize> = (1..=9).filter(|&k| k != 9).collect();
        for (ci, &k) in cols.iter().enumerate() {
            for (row, &(pi, _)) in os2.basis().iter().enumerate() {
                let p = &inc.points()[pi];
                if !p.contains(&k) {
                    assert!(
                        m.at(row, ci).is_zero(),
                        "column {k} must be supported on points through line {k}"
                    );
                }
            }
        }
    }

    fn random_assignment(
        d: usize,
        deleted: usize,
        rng: &mut impl rand::Rng,
    ) -> ResidueAssignment {
        loop {
            let mut alpha: Vec<Rational> = (0..d - 1)
                .map(|_| Rational::new(rng.gen_range(-6i64..=6).into(), rng.gen_range(1i64..=4).into()))
                .collect();
            let sum: Rational = alpha.iter().sum();
            alpha.push(-sum);
            let ra = ResidueAssignment::new(alpha, deleted).unwrap();
            if !ra.is_trivial() {
                return ra;
            }
        }
    }

    #[test]
    fn euler_invariance_under_random_residues() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        for name in ["triangle", "near_pencil", "ex26a", "ex26b"] {
            let inc = fixture(name);
            let deleted = inc.d();
            let euler = inc.poset_summary(deleted).unwrap().euler;
            for _ in 0..100 {
                let ra = random_assignment(inc.d(), deleted, &mut rng);
                let res = aomoto_cohomology(&inc, &ra).unwrap();
                assert_eq!(
                    res.h.0 as i64 - res.h.1 as i64 + res.h.2 as i64,
                    euler,
                    "{name}"
                );
            }
        }
    }

    #[test]
    fn generic_admissible_residues_kill_h1() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
        for name in ["triangle", "near_pencil", "ex26a"] {
            let inc = fixture(name);
            let deleted = inc.d();
            let mut tested = 0;
            let mut attempts = 0;
            while tested < 10 && attempts < 4000 {
                attempts += 1;
                let ra = random_assignment(inc.d(), deleted, &mut rng);
                let esv = esv_check(&inc, &ra).unwrap();
                let no_integer_point = inc
                    .dense_points()
                    .iter()
                    .all(|&pi| !ra.alpha_point(&inc.points()[pi]).is_integer());
                if !esv.pass || !no_integer_point {
                    continue;
                }
                tested += 1;
                let res = aomoto_cohomology(&inc, &ra).unwrap();
                assert_eq!(res.h.1, 0, "{name}: admissible generic residues");
            }
            assert!(tested > 0, "{name}: no admissible sample found");
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        /// At an affine double point p = {j,k}, the expansion of
        /// pi_p(w^b ^ w^a) vanishes exactly when a_j b_k = b_j a_k, which is
        /// the two-residue coupling relation.
        #[test]
        fn coupling_at_double_points(bj in -5i64..=5, bk in -5i64..=5,
                                     aj in -5i64..=5, ak in -5i64..=5) {
            let (j, k) = (1usize, 2usize);
            let bjq = rat(bj, 3);
            let bkq = rat(bk, 3);
            let ajq = rat(aj, 2);
            let akq = rat(ak, 2);
            // pi_p(w^b ^ w^a) = (b_j a_k - b_k a_j) w_j ^ w_k
            let coeff = &bjq * &akq - &bkq * &ajq;
            let vanishes = coeff.is_zero();
            // coupling: alpha_p beta_x = beta_p alpha_x for x in {j,k}
            let ap = &ajq + &akq;
            let bp = &bjq + &bkq;
            let coupling = (&ap * &bjq == &bp * &ajq) && (&ap * &bkq == &bp * &akq);
            let _ = (j, k);
            prop_assert_eq!(vanishes, coupling);
        }
    }
}
