//! The degree-60 reflection arrangement of type G31 in `P^3`.
//!
//! Hyperplanes are classes of vectors over `{0} u mu_4` modulo the diagonal
//! `mu_4` action, split into three strata by support size. Pairs of
//! hyperplanes are classified by small exact discriminants (support
//! overlap, products, 2x2 determinants, twisted difference counts), which
//! determines the multiplicity of their common codimension-2 edge; the
//! census tables, the multiplicity-2 connectivity of the third stratum and
//! the residue data for the first Milnor cohomology all derive from that
//! classification.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::arrangement::Arrangement;
use crate::cyclo::CycloField;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum G31Error {
    #[error("the two labels denote the same hyperplane")]
    EqualClasses,
    #[error("census for stratum {stratum} depends on the representative: {details}")]
    RepresentativeDependent { stratum: usize, details: String },
}

/// Entry of a label vector: zero or a fourth root of unity `i^k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Psi {
    Zero,
    /// `Unit(k)` is `i^k`, `k` in `0..4`.
    Unit(u8),
}

impl Psi {
    fn scale(self, t: u8) -> Psi {
        match self {
            Psi::Zero => Psi::Zero,
            Psi::Unit(k) => Psi::Unit((k + t) % 4),
        }
    }

    /// Gaussian-integer value `(re, im)`.
    fn gauss(self) -> (i64, i64) {
        match self {
            Psi::Zero => (0, 0),
            Psi::Unit(0) => (1, 0),
            Psi::Unit(1) => (0, 1),
            Psi::Unit(2) => (-1, 0),
            Psi::Unit(3) => (0, -1),
            Psi::Unit(_) => unreachable!(),
        }
    }

    pub fn is_zero(self) -> bool {
        self == Psi::Zero
    }
}

fn g_mul(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 * b.0 - a.1 * b.1, a.0 * b.1 + a.1 * b.0)
}

fn g_sub(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 - b.0, a.1 - b.1)
}

fn g_add(a: (i64, i64), b: (i64, i64)) -> (i64, i64) {
    (a.0 + b.0, a.1 + b.1)
}

fn g_norm(a: (i64, i64)) -> i64 {
    a.0 * a.0 + a.1 * a.1
}

/// A hyperplane label: canonical representative (first nonzero entry 1) of
/// a vector in `({0} u mu_4)^4` modulo the diagonal `mu_4` action, plus its
/// stratum.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct G31Label {
    pub vector: [Psi; 4],
    pub stratum: u8,
}

impl G31Label {
    /// Canonicalize an arbitrary representative. Panics on the zero vector
    /// or a support pattern outside the three strata.
    pub fn from_vector(raw: [Psi; 4]) -> G31Label {
        let lead = raw
            .iter()
            .find_map(|e| match e {
                Psi::Zero => None,
                Psi::Unit(k) => Some(*k),
            })
            .expect("label vector must be nonzero");
        let mut vector = raw;
        for e in &mut vector {
            *e = e.scale((4 - lead) % 4);
        }
        let supp = vector.iter().filter(|e| !e.is_zero()).count();
        let stratum = match supp {
            1 => 1,
            2 => 2,
            4 => {
                debug_assert!(
                    matches!(prod(&vector), (1, 0) | (-1, 0)),
                    "full-support labels must have product +-1"
                );
                3
            }
            other => panic!("unsupported support size {other}"),
        };
        G31Label { vector, stratum }
    }

    pub fn support(&self) -> Vec<usize> {
        (0..4).filter(|&r| !self.vector[r].is_zero()).collect()
    }

    /// Entries as Gaussian integers.
    fn gauss(&self) -> [(i64, i64); 4] {
        [
            self.vector[0].gauss(),
            self.vector[1].gauss(),
            self.vector[2].gauss(),
            self.vector[3].gauss(),
        ]
    }

    /// Product of the entries, as a Gaussian integer.
    pub fn prod(&self) -> (i64, i64) {
        prod(&self.vector)
    }

    /// Representable by a real vector after some `mu_4` scaling.
    pub fn is_real(&self) -> bool {
        (0..4u8).any(|t| {
            self.vector
                .iter()
                .all(|e| matches!(e.scale(t), Psi::Zero | Psi::Unit(0) | Psi::Unit(2)))
        })
    }
}

fn prod(v: &[Psi; 4]) -> (i64, i64) {
    v.iter().fold((1, 0), |acc, e| g_mul(acc, e.gauss()))
}

/// Classification of a hyperplane pair: the stratum-ordered case tag and
/// the multiplicity of the codimension-2 edge they span.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PairClass {
    pub case_tag: CaseTag,
    pub mult: u8,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[allow(missing_docs)]
pub enum CaseTag {
    C11,
    C12a,
    C12b,
    C13,
    C22a,
    C22b,
    C22c,
    C22d,
    C23a,
    C23b,
    C23c,
    C33a,
    C33b,
    C33c,
    C33d,
}

impl CaseTag {
    pub fn as_str(self) -> &'static str {
        match self {
            CaseTag::C11 => "(1,1)",
            CaseTag::C12a => "(1,2)(a)",
            CaseTag::C12b => "(1,2)(b)",
            CaseTag::C13 => "(1,3)",
            CaseTag::C22a => "(2,2)(a)",
            CaseTag::C22b => "(2,2)(b)",
            CaseTag::C22c => "(2,2)(c)",
            CaseTag::C22d => "(2,2)(d)",
            CaseTag::C23a => "(2,3)(a)",
            CaseTag::C23b => "(2,3)(b)",
            CaseTag::C23c => "(2,3)(c)",
            CaseTag::C33a => "(3,3)(a)",
            CaseTag::C33b => "(3,3)(b)",
            CaseTag::C33c => "(3,3)(c)",
            CaseTag::C33d => "(3,3)(d)",
        }
    }
}

/// Number of positions where `i^t * a` and `b` differ.
fn diff_scaled(a: &G31Label, b: &G31Label, t: u8) -> usize {
    (0..4).filter(|&r| a.vector[r].scale(t) != b.vector[r]).count()
}

/// `diff([a],[b])`: minimum difference count over the four scalings,
/// together with the minimizing scaling (smallest power on ties).
fn diff_classes(a: &G31Label, b: &G31Label) -> (usize, u8) {
    (0..4u8)
        .map(|t| (diff_scaled(a, b, t), t))
        .min()
        .expect("four scalings")
}

/// 2x2 determinant over the support of `a` (which must have size 2).
fn det_on_support(a: &[(i64, i64); 4], supp: &[usize], b: &[(i64, i64); 4]) -> (i64, i64) {
    let (j, k) = (supp[0], supp[1]);
    g_sub(g_mul(a[j], b[k]), g_mul(a[k], b[j]))
}

/// Classify a pair of distinct hyperplane labels.
pub fn classify_pair(a: &G31Label, b: &G31Label) -> Result<PairClass, G31Error> {
    if a == b {
        return Err(G31Error::EqualClasses);
    }
    // canonical stratum order
    let (a, b) = if a.stratum <= b.stratum { (a, b) } else { (b, a) };
    let class = match (a.stratum, b.stratum) {
        (1, 1) => PairClass { case_tag: CaseTag::C11, mult: 6 },
        (1, 2) => {
            if a.support().iter().all(|r| b.support().contains(r)) {
                PairClass { case_tag: CaseTag::C12a, mult: 6 }
            } else {
                PairClass { case_tag: CaseTag::C12b, mult: 2 }
            }
        }
        (1, 3) => PairClass { case_tag: CaseTag::C13, mult: 3 },
        (2, 2) => {
            let mut union = a.support();
            for r in b.support() {
                if !union.contains(&r) {
                    union.push(r);
                }
            }
            match union.len() {
                2 => PairClass { case_tag: CaseTag::C22a, mult: 6 },
                3 => PairClass { case_tag: CaseTag::C22b, mult: 3 },
                4 => {
                    // disjoint supports: prod(a+b) is the product of both
                    // supports' entries; real means case (c)
                    let sum: [(i64, i64); 4] = {
                        let (ga, gb) = (a.gauss(), b.gauss());
                        [
                            g_add(ga[0], gb[0]),
                            g_add(ga[1], gb[1]),
                            g_add(ga[2], gb[2]),
                            g_add(ga[3], gb[3]),
                        ]
                    };
                    let p = sum.iter().fold((1, 0), |acc, &e| g_mul(acc, e));
                    debug_assert_eq!(g_norm(p), 1);
                    if p.1 == 0 {
                        PairClass { case_tag: CaseTag::C22c, mult: 6 }
                    } else {
                        PairClass { case_tag: CaseTag::C22d, mult: 2 }
                    }
                }
                _ => unreachable!("stratum-2 unions have size 2..4"),
            }
        }
        (2, 3) => {
            let det = det_on_support(&a.gauss(), &a.support(), &b.gauss());
            match g_norm(det) {
                0 => PairClass { case_tag: CaseTag::C23a, mult: 6 },
                2 => PairClass { case_tag: CaseTag::C23b, mult: 3 },
                4 => PairClass { case_tag: CaseTag::C23c, mult: 2 },
                n => unreachable!("impossible |det|^2 = {n} in case (2,3)"),
            }
        }
        (3, 3) => {
            let (dmin, t) = diff_classes(a, b);
            match dmin {
                1 => PairClass { case_tag: CaseTag::C33a, mult: 3 },
                3 => PairClass { case_tag: CaseTag::C33d, mult: 2 },
                2 => {
                    // difference vector of the minimizing representative
                    let ga: [(i64, i64); 4] = {
                        let mut v = a.vector;
                        for e in &mut v {
                            *e = e.scale(t);
                        }
                        [v[0].gauss(), v[1].gauss(), v[2].gauss(), v[3].gauss()]
                    };
                    let gb = b.gauss();
                    let c = [
                        g_sub(ga[0], gb[0]),
                        g_sub(ga[1], gb[1]),
                        g_sub(ga[2], gb[2]),
                        g_sub(ga[3], gb[3]),
                    ];
                    let supp: Vec<usize> = (0..4).filter(|&r| c[r] != (0, 0)).collect();
                    debug_assert_eq!(supp.len(), 2);
                    let det = g_sub(
                        g_mul(c[supp[0]], gb[supp[1]]),
                        g_mul(c[supp[1]], gb[supp[0]]),
                    );
                    if det == (0, 0) {
                        PairClass { case_tag: CaseTag::C33c, mult: 6 }
                    } else {
                        PairClass { case_tag: CaseTag::C33b, mult: 3 }
                    }
                }
                n => unreachable!("impossible diff {n} for distinct stratum-3 classes"),
            }
        }
        _ => unreachable!("strata are ordered"),
    };
    Ok(class)
}

/// The 60 canonical labels in deterministic order (stratum, then
/// lexicographic), together with the arrangement they define over
/// `Q(zeta_4)`.
pub fn generate() -> (Vec<G31Label>, Arrangement) {
    let mut labels = Vec::with_capacity(60);
    for pos in 0..4 {
        let mut v = [Psi::Zero; 4];
        v[pos] = Psi::Unit(0);
        labels.push(G31Label::from_vector(v));
    }
    for j in 0..4 {
        for k in j + 1..4 {
            for t in 0..4u8 {
                let mut v = [Psi::Zero; 4];
                v[j] = Psi::Unit(0);
                v[k] = Psi::Unit(t);
                labels.push(G31Label::from_vector(v));
            }
        }
    }
    for t1 in 0..4u8 {
        for t2 in 0..4u8 {
            for t3 in 0..4u8 {
                if (t1 + t2 + t3) % 2 != 0 {
                    continue;
                }
                let v = [Psi::Unit(0), Psi::Unit(t1), Psi::Unit(t2), Psi::Unit(t3)];
                labels.push(G31Label::from_vector(v));
            }
        }
    }
    labels.sort();
    debug_assert_eq!(labels.len(), 60);

    let field = CycloField::new(4).expect("order 4");
    let rows: Vec<Vec<crate::cyclo::CycloNum>> = labels
        .iter()
        .map(|l| {
            l.vector
                .iter()
                .map(|e| match e {
                    Psi::Zero => field.zero(),
                    Psi::Unit(k) => field.root_power(*k as u32),
                })
                .collect()
        })
        .collect();
    let arr = Arrangement::new(&field, 3, rows).expect("G31 is reduced");
    (labels, arr)
}

/// Census table: `counts[j-1][j'-1]` maps multiplicity (2, 3 or 6) to the
/// number of stratum-`j'` hyperplanes at that multiplicity seen from any
/// fixed stratum-`j` hyperplane.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LambdaTable {
    pub counts: [[BTreeMap<u8, usize>; 3]; 3],
}

impl LambdaTable {
    pub fn get(&self, j: usize, jp: usize, m: u8) -> usize {
        *self.counts[j - 1][jp - 1].get(&m).unwrap_or(&0)
    }

    /// Row sum over target strata for one multiplicity.
    pub fn lambda_j_m(&self, j: usize, m: u8) -> usize {
        (1..=3).map(|jp| self.get(j, jp, m)).sum()
    }

    /// Row sum over multiplicities for one target stratum.
    pub fn lambda_j_jp(&self, j: usize, jp: usize) -> usize {
        [2u8, 3, 6].iter().map(|&m| self.get(j, jp, m)).sum()
    }
}

/// Brute-force the census from `classify_pair`, verifying for every base
/// hyperplane of a stratum that the counts agree (representative
/// independence).
pub fn lambda_table(labels: &[G31Label]) -> Result<LambdaTable, G31Error> {
    let mut counts: [[BTreeMap<u8, usize>; 3]; 3] = Default::default();
    for j in 1..=3usize {
        let members: Vec<&G31Label> = labels.iter().filter(|l| l.stratum == j as u8).collect();
        let mut reference: Option<[BTreeMap<u8, usize>; 3]> = None;
        for a in &members {
            let mut row: [BTreeMap<u8, usize>; 3] = Default::default();
            for b in labels {
                if *a == b {
                    continue;
                }
                let class = classify_pair(a, b)?;
                *row[b.stratum as usize - 1].entry(class.mult).or_insert(0) += 1;
            }
            match &reference {
                None => reference = Some(row),
                Some(r) => {
                    if *r != row {
                        return Err(G31Error::RepresentativeDependent {
                            stratum: j,
                            details: format!("base {:?} disagrees", a.vector),
                        });
                    }
                }
            }
        }
        counts[j - 1] = reference.expect("nonempty stratum");
    }
    Ok(LambdaTable { counts })
}

/// Connected components of the third stratum under multiplicity-2 edges.
/// Returns sorted lists of 1-based hyperplane indices.
pub fn two_connectivity(labels: &[G31Label]) -> Vec<Vec<usize>> {
    let members: Vec<usize> = (0..labels.len()).filter(|&i| labels[i].stratum == 3).collect();
    let mut dsu: Vec<usize> = (0..members.len()).collect();
    fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
        if dsu[x] != x {
            let root = find(dsu, dsu[x]);
            dsu[x] = root;
        }
        dsu[x]
    }
    for ai in 0..members.len() {
        for bi in ai + 1..members.len() {
            let class = classify_pair(&labels[members[ai]], &labels[members[bi]])
                .expect("distinct labels");
            if class.mult == 2 {
                let (ra, rb) = (find(&mut dsu, ai), find(&mut dsu, bi));
                if ra != rb {
                    dsu[ra] = rb;
                }
            }
        }
    }
    let mut comps: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (i, &m) in members.iter().enumerate() {
        let root = find(&mut dsu, i);
        comps.entry(root).or_default().push(m + 1);
    }
    let mut out: Vec<Vec<usize>> = comps.into_values().collect();
    out.sort();
    out
}

/// Residue data for one Milnor eigenvalue: the subset `I` (1-based line
/// indices), the deleted line and `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ResidueData {
    pub k: usize,
    pub subset: Vec<usize>,
    pub deleted: usize,
}

fn index_of_label(labels: &[G31Label], raw: [Psi; 4]) -> usize {
    let canon = G31Label::from_vector(raw);
    labels.iter().position(|l| *l == canon).expect("label present") + 1
}

/// The explicit ten-line subset certifying the eigenvalue `exp(-2 pi i/6)`,
/// deconed at the hyperplane `(0,0,0,1)`.
pub fn a5_data(labels: &[G31Label]) -> ResidueData {
    use Psi::{Unit, Zero};
    let neg_i = Unit(3);
    let i = Unit(1);
    let one = Unit(0);
    let neg_one = Unit(2);
    let raw: [[Psi; 4]; 10] = [
        [Zero, Zero, Zero, one],
        [neg_i, Zero, Zero, one],
        [Zero, neg_i, Zero, one],
        [Zero, Zero, neg_i, one],
        [one, neg_one, Zero, Zero],
        [one, Zero, neg_one, Zero],
        [Zero, one, neg_one, Zero],
        [i, i, one, one],
        [i, one, i, one],
        [one, i, i, one],
    ];
    let mut subset: Vec<usize> = raw.iter().map(|v| index_of_label(labels, *v)).collect();
    let deleted = subset[0];
    subset.sort_unstable();
    ResidueData { k: 10, subset, deleted }
}

/// The half/half partition subset certifying the eigenvalue `-1`: two of
/// the four axis hyperplanes, half of the second stratum picked by the
/// reality/support rule, and the positive-product half of the third.
pub fn remark2_data(labels: &[G31Label]) -> ResidueData {
    let mut subset = Vec::with_capacity(30);
    for (idx, l) in labels.iter().enumerate() {
        let take = match l.stratum {
            1 => {
                let s = l.support();
                s == vec![2] || s == vec![3]
            }
            2 => {
                let has4 = l.support().contains(&3);
                l.is_real() == has4
            }
            3 => l.prod() == (1, 0),
            _ => unreachable!(),
        };
        if take {
            subset.push(idx + 1);
        }
    }
    use Psi::{Unit, Zero};
    let deleted = index_of_label(labels, [Zero, Zero, Zero, Unit(0)]);
    ResidueData { k: 30, subset, deleted }
}

#[cfg(test)]
mod tests {
    use super::*;
    use Psi::{Unit, Zero};

    fn labels() -> Vec<G31Label> {
        generate().0
    }

    #[test]
    fn stratum_counts() {
        let labels = labels();
        let counts: Vec<usize> = (1..=3)
            .map(|j| labels.iter().filter(|l| l.stratum == j as u8).count())
            .collect();
        assert_eq!(counts, vec![4, 24, 32]);
        assert_eq!(labels.len(), 60);
    }

    #[test]
    fn examples_of_stratum_membership() {
        let axis = G31Label::from_vector([Zero, Zero, Zero, Unit(0)]);
        assert_eq!(axis.stratum, 1);
        // (i, i, 1, 1) has product i*i = -1, full support
        let full = G31Label::from_vector([Unit(1), Unit(1), Unit(0), Unit(0)]);
        assert_eq!(full.stratum, 3);
        assert_eq!(full.prod(), (-1, 0));
    }

    #[test]
    fn canonicalization_scales_first_nonzero_to_one() {
        let l = G31Label::from_vector([Unit(3), Zero, Zero, Unit(0)]);
        assert_eq!(l.vector, [Unit(0), Zero, Zero, Unit(1)]);
    }

    #[test]
    fn classify_examples() {
        // two axes span a multiplicity-6 edge
        let a = G31Label::from_vector([Zero, Zero, Zero, Unit(0)]);
        let b = G31Label::from_vector([Zero, Zero, Unit(0), Zero]);
        let c = classify_pair(&a, &b).unwrap();
        assert_eq!((c.case_tag, c.mult), (CaseTag::C11, 6));

        // (1,-1,0,0) vs (1,1,1,1): |det|^2 = 4, multiplicity 2
        let a = G31Label::from_vector([Unit(0), Unit(2), Zero, Zero]);
        let b = G31Label::from_vector([Unit(0), Unit(0), Unit(0), Unit(0)]);
        let c = classify_pair(&a, &b).unwrap();
        assert_eq!((c.case_tag, c.mult), (CaseTag::C23c, 2));

        // (1,i,i,1) vs (i,1,i,1): twisted difference 2, nonzero det
        let a = G31Label::from_vector([Unit(0), Unit(1), Unit(1), Unit(0)]);
        let b = G31Label::from_vector([Unit(1), Unit(0), Unit(1), Unit(0)]);
        let c = classify_pair(&a, &b).unwrap();
        assert_eq!((c.case_tag, c.mult), (CaseTag::C33b, 3));

        assert_eq!(classify_pair(&a, &a), Err(G31Error::EqualClasses));
    }

    #[test]
    fn census_table_matches_known_counts() {
        let labels = labels();
        let t = lambda_table(&labels).unwrap();
        let expected: [[[usize; 3]; 3]; 3] = [
            // m = 2          m = 3           m = 6
            [[0, 12, 0], [0, 0, 32], [3, 12, 0]],   // j = 1
            [[2, 2, 8], [0, 16, 16], [2, 5, 8]],    // j = 2
            [[0, 6, 6], [4, 12, 16], [0, 6, 9]],    // j = 3
        ];
        for j in 1..=3 {
            for (mi, m) in [2u8, 3, 6].into_iter().enumerate() {
                for jp in 1..=3 {
                    assert_eq!(
                        t.get(j, jp, m),
                        expected[j - 1][mi][jp - 1],
                        "lambda_{{{j},{jp}}}^{m}"
                    );
                }
            }
        }
        assert_eq!(t.get(3, 3, 6), 9);
        assert_eq!(t.get(1, 2, 2), 12);
        assert_eq!(t.get(2, 3, 3), 16);
    }

    #[test]
    fn census_row_identities() {
        let t = lambda_table(&labels()).unwrap();
        for j in 1..=3usize {
            let delta = |a: usize, b: usize| usize::from(a == b);
            assert_eq!(t.lambda_j_jp(j, 1), 4 - delta(j, 1));
            assert_eq!(t.lambda_j_jp(j, 2), 24 - delta(j, 2));
            assert_eq!(t.lambda_j_jp(j, 3), 32 - delta(j, 3));
            assert_eq!(t.lambda_j_m(j, 2), 12);
            assert_eq!(t.lambda_j_m(j, 3), 32);
            assert_eq!(t.lambda_j_m(j, 6), 15);
            let total: usize = [2u8, 3, 6].iter().map(|&m| t.lambda_j_m(j, m)).sum();
            assert_eq!(total, 59);
        }
        // per-line point counts: lambda_j^m / (m-1), independent of j
        let t2 = t.lambda_j_m(1, 2);
        let t3 = t.lambda_j_m(1, 3) / 2;
        let t6 = t.lambda_j_m(1, 6) / 5;
        assert_eq!((t6, t3, t2), (3, 16, 12));
    }

    #[test]
    fn pair_count_conservation() {
        // sum over ordered pairs weighted by stratum sizes double counts
        // binom(60,2)
        let t = lambda_table(&labels()).unwrap();
        let sizes = [4usize, 24, 32];
        let mut total = 0usize;
        for j in 1..=3 {
            for jp in 1..=3 {
                for m in [2u8, 3, 6] {
                    total += sizes[j - 1] * t.get(j, jp, m);
                }
            }
        }
        assert_eq!(total, 60 * 59);
    }

    #[test]
    fn multiplicity_is_symmetric() {
        use rand::Rng;
        use rand::SeedableRng;
        let labels = labels();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        for _ in 0..500 {
            let a = &labels[rng.gen_range(0..60)];
            let b = &labels[rng.gen_range(0..60)];
            if a == b {
                continue;
            }
            assert_eq!(
                classify_pair(a, b).unwrap().mult,
                classify_pair(b, a).unwrap().mult
            );
        }
    }

    #[test]
    fn determinant_count_lemma() {
        // for units a, b and target e with |e|^2 = 2 there are exactly two
        // unit pairs (c, d) with det((a,b),(c,d)) = e; for |e|^2 = 4 exactly
        // one
        for a in 0..4u8 {
            for b in 0..4u8 {
                let ga = Psi::Unit(a).gauss();
                let gb = Psi::Unit(b).gauss();
                let mut counts: BTreeMap<(i64, i64), usize> = BTreeMap::new();
                for c in 0..4u8 {
                    for d in 0..4u8 {
                        let det =
                            g_sub(g_mul(ga, Psi::Unit(d).gauss()), g_mul(gb, Psi::Unit(c).gauss()));
                        *counts.entry(det).or_insert(0) += 1;
                    }
                }
                for (det, count) in counts {
                    match g_norm(det) {
                        2 => assert_eq!(count, 2, "|e|^2 = 2 for {det:?}"),
                        4 => assert_eq!(count, 1, "|e|^2 = 4 for {det:?}"),
                        _ => {}
                    }
                }
            }
        }
    }

    #[test]
    fn third_stratum_two_connectivity_structure() {
        // Every multiplicity-2 partner within the third stratum is a
        // full-pattern multiple, and the product of all four units is -1,
        // so each edge joins labels of opposite product sign: the graph is
        // bipartite over the sign and, as computed, connected.
        let labels = labels();
        for (ai, a) in labels.iter().enumerate() {
            if a.stratum != 3 {
                continue;
            }
            for b in labels.iter().skip(ai + 1) {
                if b.stratum != 3 {
                    continue;
                }
                if classify_pair(a, b).unwrap().mult == 2 {
                    assert_ne!(a.prod(), b.prod(), "mult-2 edges flip the product");
                }
            }
        }
        let comps = two_connectivity(&labels);
        assert_eq!(comps.len(), 1);
        assert_eq!(comps[0].len(), 32);
        // (1,1,1,1) and (1,1,-1,-1) both have product 1: same component
        let x = labels
            .iter()
            .position(|l| l.vector == [Unit(0); 4])
            .unwrap()
            + 1;
        let y = labels
            .iter()
            .position(|l| l.vector == [Unit(0), Unit(0), Unit(2), Unit(2)])
            .unwrap()
            + 1;
        assert!(comps.iter().any(|c| c.contains(&x) && c.contains(&y)));
    }

    #[test]
    fn a5_and_remark2_sizes() {
        let labels = labels();
        let a5 = a5_data(&labels);
        assert_eq!(a5.subset.len(), 10);
        assert_eq!(a5.k, 10);
        let axis = G31Label::from_vector([Zero, Zero, Zero, Unit(0)]);
        assert_eq!(labels[a5.deleted - 1], axis);
        assert!(a5.subset.contains(&a5.deleted));

        let r2 = remark2_data(&labels);
        assert_eq!(r2.subset.len(), 30);
        assert_eq!(r2.k, 30);
        assert!(r2.subset.contains(&r2.deleted));
        // strata shares 2 / 12 / 16
        let shares: Vec<usize> = (1..=3)
            .map(|j| {
                r2.subset
                    .iter()
                    .filter(|&&i| labels[i - 1].stratum == j as u8)
                    .count()
            })
            .collect();
        assert_eq!(shares, vec![2, 12, 16]);
    }

    #[test]
    fn reality_rule() {
        let real = G31Label::from_vector([Zero, Unit(1), Zero, Unit(3)]);
        assert!(real.is_real(), "(0,i,0,-i) scales to (0,1,0,-1)");
        let not_real = G31Label::from_vector([Zero, Unit(0), Zero, Unit(1)]);
        assert!(!not_real.is_real());
    }
}
