//! Applicability of the extended vanishing criterion when the ESV condition
//! fails at isolated dense points.
//!
//! Given a residue assignment, the dense points with positive-integer
//! residue sum form the bad locus; the lines through them are the bad
//! indices `I^b`, everything else `I^c`. The criterion consists of four
//! checks (a)-(d) plus a side clause; every verdict carries witnesses that
//! re-verify by hand in the incidence structure.

use std::collections::BTreeSet;

use num_traits::Zero;
use thiserror::Error;

use crate::arrangement::LineIncidence;
use crate::cyclo::Rational;
use crate::twisted::{is_positive_integer, ResidueAssignment};

#[derive(Debug, Error)]
pub enum ConditionError {
    #[error("line {line} has residue {alpha}, a positive integer: out of scope")]
    NotInScope { line: usize, alpha: Rational },
    #[error("residue vector has {got} entries, the arrangement has {expected} lines")]
    LengthMismatch { expected: usize, got: usize },
}

/// Dense points violating the ESV condition, and the induced index split.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BadLocus {
    /// Point ids into the incidence point list.
    pub bad_points: Vec<usize>,
    /// Union of the incident index sets of the bad points.
    pub ib: BTreeSet<usize>,
    /// Complement of `ib` in `1..=d`.
    pub ic: BTreeSet<usize>,
}

/// Compute the bad locus. Requires every line to satisfy the codimension-1
/// ESV condition (`alpha_k` not a positive integer); otherwise the
/// criterion does not apply at all.
pub fn bad_locus(inc: &LineIncidence, ra: &ResidueAssignment) -> Result<BadLocus, ConditionError> {
    if ra.d() != inc.d() {
        return Err(ConditionError::LengthMismatch { expected: inc.d(), got: ra.d() });
    }
    for k in 1..=inc.d() {
        if is_positive_integer(ra.alpha(k)) {
            return Err(ConditionError::NotInScope { line: k, alpha: ra.alpha(k).clone() });
        }
    }
    let mut bad_points = Vec::new();
    let mut ib = BTreeSet::new();
    for pi in inc.dense_points() {
        let p = &inc.points()[pi];
        if is_positive_integer(&ra.alpha_point(p)) {
            bad_points.push(pi);
            ib.extend(p.iter().copied());
        }
    }
    let ic = (1..=inc.d()).filter(|k| !ib.contains(k)).collect();
    Ok(BadLocus { bad_points, ib, ic })
}

/// Verdict of condition (a): every bad point lies on the deleted line with
/// residue sum exactly 1, and the deleted line's residue differs from 1.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionA {
    pub pass: bool,
    /// Bad points not on the deleted line.
    pub off_deleted: Vec<usize>,
    /// Bad points whose residue sum is a positive integer other than 1.
    pub wrong_sum: Vec<(usize, Rational)>,
    pub alpha_deleted_is_one: bool,
}

/// Verdict of the connectivity condition (b): the graph on the good lines
/// whose edges come from qualifying points must be nonempty and connected.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionB {
    pub pass: bool,
    pub vertices: Vec<usize>,
    /// Connected components, each a sorted list of lines; singletons are
    /// isolated vertices.
    pub components: Vec<Vec<usize>>,
}

/// Verdict of the per-bad-line count condition (c) or its indexed variant:
/// each bad line needs at least two points meeting the good lines away
/// from the other (resp. smaller-indexed) bad lines; plus the side clause
/// that no good line has residue zero.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionC {
    pub pass: bool,
    /// `(bad line k, qualifying point ids)`.
    pub per_line: Vec<(usize, Vec<usize>)>,
    /// Good lines with residue zero (side-clause violations).
    pub zero_residues: Vec<usize>,
}

/// Verdict of condition (d): the deleted line carries at least two
/// ordinary double points.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConditionD {
    pub pass: bool,
    pub double_points_on_deleted: Vec<usize>,
}

/// Which count variant decides the overall verdict.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CountVariant {
    /// Exclude all other bad lines.
    Strict,
    /// Exclude only smaller-indexed bad lines (the weaker sufficient form).
    #[default]
    Indexed,
}

#[derive(Clone, Debug)]
pub struct ConditionReport {
    pub deleted: usize,
    pub bad: BadLocus,
    pub a: ConditionA,
    pub b_affine: ConditionB,
    pub b_literal: ConditionB,
    pub c: ConditionC,
    pub c_prime: ConditionC,
    pub d_cond: ConditionD,
    pub variant: CountVariant,
    pub overall: bool,
}

/// Points of `X^{I^c}` that are dense within the good subarrangement and
/// have residue sum zero there; condition (b) must avoid them.
fn ic_zero_points(inc: &LineIncidence, ra: &ResidueAssignment, ic: &BTreeSet<usize>) -> Vec<bool> {
    inc.points()
        .iter()
        .map(|p| {
            let in_ic: Vec<usize> = p.iter().copied().filter(|j| ic.contains(j)).collect();
            in_ic.len() >= 3
                && in_ic.iter().map(|&j| ra.alpha(j)).sum::<Rational>().is_zero()
        })
        .collect()
}

fn connectivity(
    inc: &LineIncidence,
    bad: &BadLocus,
    zero_pts: &[bool],
    deleted: usize,
    include_deleted_points: bool,
) -> ConditionB {
    let vertices: Vec<usize> = bad.ic.iter().copied().filter(|&j| j != deleted).collect();
    let index_of: std::collections::HashMap<usize, usize> =
        vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let mut dsu: Vec<usize> = (0..vertices.len()).collect();
    fn find(dsu: &mut Vec<usize>, x: usize) -> usize {
        if dsu[x] != x {
            let root = find(dsu, dsu[x]);
            dsu[x] = root;
        }
        dsu[x]
    }
    for (pi, p) in inc.points().iter().enumerate() {
        if !include_deleted_points && p.contains(&deleted) {
            continue;
        }
        if p.iter().any(|j| bad.ib.contains(j)) {
            continue;
        }
        if zero_pts[pi] {
            continue;
        }
        let members: Vec<usize> = p
            .iter()
            .copied()
            .filter(|&j| j != deleted && bad.ic.contains(&j))
            .collect();
        for w in members.windows(2) {
            let (a, b) = (index_of[&w[0]], index_of[&w[1]]);
            let (ra_, rb) = (find(&mut dsu, a), find(&mut dsu, b));
            if ra_ != rb {
                dsu[ra_] = rb;
            }
        }
    }
    let mut comps: std::collections::BTreeMap<usize, Vec<usize>> = Default::default();
    for (i, &v) in vertices.iter().enumerate() {
        let root = find(&mut dsu, i);
        comps.entry(root).or_default().push(v);
    }
    let mut components: Vec<Vec<usize>> = comps.into_values().collect();
    components.sort();
    let pass = components.len() == 1 && !vertices.is_empty();
    ConditionB { pass, vertices, components }
}

fn count_condition(
    inc: &LineIncidence,
    ra: &ResidueAssignment,
    bad: &BadLocus,
    deleted: usize,
    variant: CountVariant,
) -> ConditionC {
    let mut per_line = Vec::new();
    let mut pass = true;
    for &k in bad.ib.iter().filter(|&&k| k != deleted) {
        let excluded: BTreeSet<usize> = match variant {
            CountVariant::Strict => bad.ib.iter().copied().filter(|&j| j != k).collect(),
            CountVariant::Indexed => bad.ib.iter().copied().filter(|&j| j < k).collect(),
        };
        let qualifying: Vec<usize> = inc
            .points_on_line(k)
            .into_iter()
            .filter(|&pi| {
                let p = &inc.points()[pi];
                p.iter().any(|j| bad.ic.contains(j))
                    && !p.iter().any(|j| excluded.contains(j))
            })
            .collect();
        if qualifying.len() < 2 {
            pass = false;
        }
        per_line.push((k, qualifying));
    }
    let zero_residues: Vec<usize> =
        bad.ic.iter().copied().filter(|&j| ra.alpha(j).is_zero()).collect();
    if !zero_residues.is_empty() {
        pass = false;
    }
    ConditionC { pass, per_line, zero_residues }
}

/// Run the full condition checker with the default (indexed) count variant.
pub fn check_theorem1(
    inc: &LineIncidence,
    ra: &ResidueAssignment,
) -> Result<ConditionReport, ConditionError> {
    check_theorem1_with(inc, ra, CountVariant::default())
}

pub fn check_theorem1_with(
    inc: &LineIncidence,
    ra: &ResidueAssignment,
    variant: CountVariant,
) -> Result<ConditionReport, ConditionError> {
    let deleted = ra.deleted();
    let bad = bad_locus(inc, ra)?;

    // (a) bad points on the deleted line with residue sum 1
    let one = Rational::from_integer(1.into());
    let mut off_deleted = Vec::new();
    let mut wrong_sum = Vec::new();
    for &pi in &bad.bad_points {
        let p = &inc.points()[pi];
        if !p.contains(&deleted) {
            off_deleted.push(pi);
        }
        let ap = ra.alpha_point(p);
        if ap != one {
            wrong_sum.push((pi, ap));
        }
    }
    let alpha_deleted_is_one = *ra.alpha(deleted) == one;
    let a = ConditionA {
        pass: off_deleted.is_empty() && wrong_sum.is_empty() && !alpha_deleted_is_one,
        off_deleted,
        wrong_sum,
        alpha_deleted_is_one,
    };

    let zero_pts = ic_zero_points(inc, ra, &bad.ic);
    let b_affine = connectivity(inc, &bad, &zero_pts, deleted, false);
    let b_literal = connectivity(inc, &bad, &zero_pts, deleted, true);

    let c = count_condition(inc, ra, &bad, deleted, CountVariant::Strict);
    let c_prime = count_condition(inc, ra, &bad, deleted, CountVariant::Indexed);

    let doubles: Vec<usize> = inc
        .points_on_line(deleted)
        .into_iter()
        .filter(|&pi| inc.points()[pi].len() == 2)
        .collect();
    let d_cond = ConditionD { pass: doubles.len() >= 2, double_points_on_deleted: doubles };

    let count_pass = match variant {
        CountVariant::Strict => c.pass,
        CountVariant::Indexed => c_prime.pass,
    };
    let overall = a.pass && b_affine.pass && count_pass && d_cond.pass;
    Ok(ConditionReport {
        deleted,
        bad,
        a,
        b_affine,
        b_literal,
        c,
        c_prime,
        d_cond,
        variant,
        overall,
    })
}

/// What a subset search should certify at each leaf.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SearchMode {
    /// The full ESV condition for the eigenvalue residues.
    EsvOnly,
    /// The overall condition report with the given deleted line.
    Overall { deleted: usize },
}

#[derive(Clone, Debug)]
pub struct SearchOutcome {
    pub found: Vec<Vec<usize>>,
    pub truncated: bool,
    pub nodes: u64,
}

/// Depth-first search over subsets `I` of size `k`, pruning a branch as
/// soon as a fully decided dense point already violates the target
/// condition. Deterministic: indices are decided in increasing order, so
/// results come out lexicographically sorted.
pub fn search_subset(
    inc: &LineIncidence,
    k: usize,
    mode: SearchMode,
    budget: u64,
) -> SearchOutcome {
    let d = inc.d();
    assert!(k >= 1 && k <= d - 1, "k must lie in 1..=d-1");
    let dense: Vec<usize> = inc.dense_points();
    // per dense point: lines through it
    let dense_sets: Vec<&Vec<usize>> = dense.iter().map(|&pi| &inc.points()[pi]).collect();
    // dense points a given line participates in
    let mut line_to_dense: Vec<Vec<usize>> = vec![Vec::new(); d + 1];
    for (di, p) in dense_sets.iter().enumerate() {
        for &j in p.iter() {
            line_to_dense[j].push(di);
        }
    }
    let mut chosen_in: Vec<usize> = vec![0; dense_sets.len()];
    let mut undecided_in: Vec<usize> = dense_sets.iter().map(|p| p.len()).collect();
    let mut chosen: Vec<usize> = Vec::with_capacity(k);
    let mut out = SearchOutcome { found: Vec::new(), truncated: false, nodes: 0 };

    // alpha_p = t - m*k/d for a dense point with multiplicity m and t
    // chosen lines; positive-integer violations depend only on (t, m).
    let violates = |t: usize, m: usize| -> Option<i64> {
        let num = t as i64 * d as i64 - m as i64 * k as i64;
        if num > 0 && num % d as i64 == 0 {
            Some(num / d as i64)
        } else {
            None
        }
    };

    fn dfs(
        line: usize,
        d: usize,
        k: usize,
        mode: SearchMode,
        budget: u64,
        inc: &LineIncidence,
        dense: &[usize],
        dense_sets: &[&Vec<usize>],
        line_to_dense: &[Vec<usize>],
        chosen_in: &mut Vec<usize>,
        undecided_in: &mut Vec<usize>,
        chosen: &mut Vec<usize>,
        out: &mut SearchOutcome,
        violates: &dyn Fn(usize, usize) -> Option<i64>,
    ) {
        if out.truncated {
            return;
        }
        out.nodes += 1;
        if out.nodes > budget {
            out.truncated = true;
            return;
        }
        if chosen.len() == k {
            let ra = ResidueAssignment::from_subset(
                d,
                k,
                chosen,
                match mode {
                    SearchMode::Overall { deleted } => deleted,
                    SearchMode::EsvOnly => d,
                },
            )
            .expect("search maintains a valid subset");
            let ok = match mode {
                SearchMode::EsvOnly => {
                    crate::twisted::esv_check(inc, &ra).map(|o| o.pass).unwrap_or(false)
                }
                SearchMode::Overall { .. } => {
                    check_theorem1(inc, &ra).map(|r| r.overall).unwrap_or(false)
                }
            };
            if ok {
                out.found.push(chosen.clone());
            }
            return;
        }
        if line > d || chosen.len() + (d - line + 1) < k {
            return;
        }
        for take in [true, false] {
            if take && chosen.len() == k {
                continue;
            }
            if take {
                chosen.push(line);
            }
            let mut pruned = false;
            for &di in &line_to_dense[line] {
                if take {
                    chosen_in[di] += 1;
                }
                undecided_in[di] -= 1;
                if undecided_in[di] == 0 {
                    let (t, m) = (chosen_in[di], dense_sets[di].len());
                    if let Some(v) = violates(t, m) {
                        let acceptable = match mode {
                            SearchMode::EsvOnly => false,
                            SearchMode::Overall { deleted } => {
                                v == 1 && dense_sets[di].contains(&deleted)
                            }
                        };
                        if !acceptable {
                            pruned = true;
                        }
                    }
                }
            }
            if !pruned {
                dfs(
                    line + 1,
                    d,
                    k,
                    mode,
                    budget,
                    inc,
                    dense,
                    dense_sets,
                    line_to_dense,
                    chosen_in,
                    undecided_in,
                    chosen,
                    out,
                    violates,
                );
            }
            for &di in &line_to_dense[line] {
                if take {
                    chosen_in[di] -= 1;
                }
                undecided_in[di] += 1;
            }
            if take {
                chosen.pop();
            }
            if out.truncated {
                return;
            }
        }
    }

    dfs(
        1,
        d,
        k,
        mode,
        budget,
        inc,
        &dense,
        &dense_sets,
        &line_to_dense,
        &mut chosen_in,
        &mut undecided_in,
        &mut chosen,
        &mut out,
        &violates,
    );
    out.found.sort();
    out
}
