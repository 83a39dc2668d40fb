//! Independent route to `dim H^1` through the pole-order filtration.
//!
//! Everything is computed with explicit rational differential forms on the
//! chart that deletes the distinguished line: bivariate polynomial
//! numerators over a denominator dividing `(g_1 ... g_{d-1})^2`, where the
//! `g_k` are the affine defining forms. The three-term filtered complex is
//! assembled once, its twisted differentials are expressed in certified
//! bases by exact linear solves, and `H^1` falls out of two ranks. A
//! quotient-complex connecting map gives the injectivity probe that
//! justifies equality with the Aomoto route when the applicability
//! conditions hold.
//!
//! Identities that the construction is usually derived from (product
//! expansions of the differentials) are deliberately not trusted as code
//! paths; they are asserted in tests against the solver output.

use std::collections::BTreeMap;

use num_traits::Zero;
use thiserror::Error;

use crate::arrangement::{Arrangement, ArrangementError, LineIncidence};
use crate::cyclo::{CycloField, CycloNum, Rational};
use crate::linalg::{ExactMatrix, SolveError};
use crate::twisted::{self, OsDegree2, ResidueAssignment, TwistedError};

#[derive(Debug, Error)]
pub enum PolefiltError {
    #[error(transparent)]
    Arrangement(#[from] ArrangementError),
    #[error(transparent)]
    Twisted(#[from] TwistedError),
    #[error("need at least 3 lines, got {0}")]
    TooFewLines(usize),
    #[error("line {line} has residue {alpha}, a positive integer")]
    LineViolation { line: usize, alpha: Rational },
    #[error("the deleted line carries {found} ordinary double points, need at least 2")]
    MissingDoublePoints { found: usize },
    #[error("lines {i} and {j} are parallel in the chart")]
    ParallelPair { i: usize, j: usize },
    #[error("claimed degree-{degree} basis is linearly dependent (rank {rank} of {cols})")]
    BasisDependent { degree: u8, rank: usize, cols: usize },
    #[error("degree-{degree} differential image(s) {targets:?} fall outside the basis span")]
    NotInSpan { degree: u8, targets: Vec<usize> },
    #[error("residue data violates the quotient construction: {0}")]
    DegenerateQuotient(String),
}

// ---- bivariate polynomials ---------------------------------------------

/// Dense-enough bivariate polynomial over one cyclotomic field; zero
/// coefficients are never stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct Poly2 {
    field: CycloField,
    terms: BTreeMap<(u16, u16), CycloNum>,
}

impl Poly2 {
    fn zero(field: &CycloField) -> Poly2 {
        Poly2 { field: field.clone(), terms: BTreeMap::new() }
    }

    fn constant(c: CycloNum) -> Poly2 {
        let field = c.field().clone();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((0, 0), c);
        }
        Poly2 { field, terms }
    }

    fn insert(&mut self, key: (u16, u16), value: CycloNum) {
        if !value.is_zero() {
            self.terms.insert(key, value);
        }
    }

    fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_assign_scaled(&mut self, other: &Poly2, scale: &CycloNum) {
        if scale.is_zero() {
            return;
        }
        for (key, coeff) in &other.terms {
            let add = coeff * scale;
            match self.terms.get_mut(key) {
                Some(cur) => {
                    let next = &*cur + &add;
                    if next.is_zero() {
                        self.terms.remove(key);
                    } else {
                        *cur = next;
                    }
                }
                None => {
                    self.terms.insert(*key, add);
                }
            }
        }
    }

    fn add(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        out.add_assign_scaled(other, &self.field.one());
        out
    }

    fn sub(&self, other: &Poly2) -> Poly2 {
        let mut out = self.clone();
        out.add_assign_scaled(other, &self.field.from_integer(-1));
        out
    }

    fn mul(&self, other: &Poly2) -> Poly2 {
        let mut out = Poly2::zero(&self.field);
        for ((i1, j1), c1) in &self.terms {
            for ((i2, j2), c2) in &other.terms {
                let key = (i1 + i2, j1 + j2);
                let add = c1 * c2;
                match out.terms.get_mut(&key) {
                    Some(cur) => {
                        let next = &*cur + &add;
                        if next.is_zero() {
                            out.terms.remove(&key);
                        } else {
                            *cur = next;
                        }
                    }
                    None => {
                        out.insert(key, add);
                    }
                }
            }
        }
        out
    }

    fn scale(&self, s: &CycloNum) -> Poly2 {
        let mut out = Poly2::zero(&self.field);
        out.add_assign_scaled(self, s);
        out
    }

    fn d_du(&self) -> Poly2 {
        let mut out = Poly2::zero(&self.field);
        for ((i, j), c) in &self.terms {
            if *i > 0 {
                out.insert((i - 1, *j), c * &self.field.from_integer(*i as i64));
            }
        }
        out
    }

    fn d_dv(&self) -> Poly2 {
        let mut out = Poly2::zero(&self.field);
        for ((i, j), c) in &self.terms {
            if *j > 0 {
                out.insert((*i, j - 1), c * &self.field.from_integer(*j as i64));
            }
        }
        out
    }

    /// Render as a polynomial string in `x`, `y` with cyclotomic-literal
    /// coefficients.
    fn to_literal(&self) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for ((i, j), c) in &self.terms {
            let lit = c.to_literal();
            let coeff = if lit.contains('+') || (lit.len() > 1 && lit[1..].contains('-')) {
                format!("({lit})")
            } else {
                lit
            };
            let mut term = coeff;
            if *i > 0 {
                term.push_str(if *i == 1 { "*x" } else { "" });
                if *i > 1 {
                    term.push_str(&format!("*x^{i}"));
                }
            }
            if *j > 0 {
                term.push_str(if *j == 1 { "*y" } else { "" });
                if *j > 1 {
                    term.push_str(&format!("*y^{j}"));
                }
            }
            parts.push(term);
        }
        parts.join(" + ")
    }

    /// Exact division by a linear form; `None` when not divisible.
    fn div_linear(&self, l: &LinearForm) -> Option<Poly2> {
        let field = self.field.clone();
        if self.is_zero() {
            return Some(Poly2::zero(&field));
        }
        // main variable: u when the u-coefficient is nonzero, else v
        let use_u = !l.a.is_zero();
        if !use_u && l.b.is_zero() {
            return None; // constant divisor is not a line
        }
        let lead = if use_u { l.a.clone() } else { l.b.clone() };
        let lead_inv = lead.inverse().expect("nonzero");
        let mut rem = self.clone();
        let mut quot = Poly2::zero(&field);
        loop {
            // highest main-variable degree term group
            let top = rem
                .terms
                .keys()
                .map(|&(i, j)| if use_u { i } else { j })
                .max();
            let Some(top) = top else { return Some(quot) };
            if top == 0 {
                return if rem.is_zero() { Some(quot) } else { None };
            }
            // t := (coefficient group at main degree `top`) / lead, shifted
            let group: Vec<((u16, u16), CycloNum)> = rem
                .terms
                .iter()
                .filter(|((i, j), _)| (if use_u { *i } else { *j }) == top)
                .map(|(k, v)| (*k, v.clone()))
                .collect();
            let mut t = Poly2::zero(&field);
            for ((i, j), c) in group {
                let key = if use_u { (i - 1, j) } else { (i, j - 1) };
                t.insert(key, &c * &lead_inv);
            }
            quot = quot.add(&t);
            rem = rem.sub(&t.mul(&l.poly()));
        }
    }
}

// ---- chart and affine forms --------------------------------------------

/// Affine linear form `a*u + b*v + c` on the chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearForm {
    pub a: CycloNum,
    pub b: CycloNum,
    pub c: CycloNum,
}

impl LinearForm {
    fn poly(&self) -> Poly2 {
        let mut p = Poly2::zero(self.a.field());
        p.insert((1, 0), self.a.clone());
        p.insert((0, 1), self.b.clone());
        p.insert((0, 0), self.c.clone());
        p
    }
}

/// The affine chart of a `P^2` arrangement deleting one line: one defining
/// linear form per remaining line, in the coordinates induced by the two
/// standard coordinate forms complementary to the deleted line's pivot.
#[derive(Clone, Debug)]
pub struct Chart {
    field: CycloField,
    d: usize,
    deleted: usize,
    forms: Vec<Option<LinearForm>>,
}

impl Chart {
    pub fn new(arr: &Arrangement, deleted: usize) -> Result<Chart, PolefiltError> {
        if arr.projective_dim() != 2 {
            return Err(ArrangementError::WrongAmbient { expected: 2, got: arr.projective_dim() }
                .into());
        }
        let d = arr.degree();
        if deleted < 1 || deleted > d {
            return Err(ArrangementError::IndexOutOfRange { index: deleted, d }.into());
        }
        let field = arr.field().clone();
        let h = arr.hyperplane(deleted).coeffs();
        let pivot = h.iter().position(|c| !c.is_zero()).expect("nonzero hyperplane");
        let others: Vec<usize> = (0..3).filter(|&i| i != pivot).collect();
        let mut forms = vec![None; d];
        for k in 1..=d {
            if k == deleted {
                continue;
            }
            let a_vec = arr.hyperplane(k).coeffs();
            // a = c1 e_{others[0]} + c2 e_{others[1]} + c3 h (h[pivot] = 1)
            let c3 = a_vec[pivot].clone();
            let c1 = &a_vec[others[0]] - &(&c3 * &h[others[0]]);
            let c2 = &a_vec[others[1]] - &(&c3 * &h[others[1]]);
            forms[k - 1] = Some(LinearForm { a: c1, b: c2, c: c3 });
        }
        Ok(Chart { field, d, deleted, forms })
    }

    pub fn d(&self) -> usize {
        self.d
    }

    pub fn deleted(&self) -> usize {
        self.deleted
    }

    /// Defining form of affine line `k`.
    pub fn g(&self, k: usize) -> &LinearForm {
        self.forms[k - 1].as_ref().expect("affine line")
    }
}

/// Solve `g_k = c + c' g_i + c'' g_j` exactly in the chart coordinates.
pub fn c_constants(
    chart: &Chart,
    k: usize,
    i: usize,
    j: usize,
) -> Result<(CycloNum, CycloNum, CycloNum), PolefiltError> {
    let (gk, gi, gj) = (chart.g(k), chart.g(i), chart.g(j));
    let det = &(&gi.a * &gj.b) - &(&gi.b * &gj.a);
    if det.is_zero() {
        return Err(PolefiltError::ParallelPair { i, j });
    }
    let det_inv = det.inverse().expect("nonzero");
    let cp = &(&(&gk.a * &gj.b) - &(&gk.b * &gj.a)) * &det_inv;
    let cpp = &(&(&gi.a * &gk.b) - &(&gi.b * &gk.a)) * &det_inv;
    let c = &(&gk.c - &(&cp * &gi.c)) - &(&cpp * &gj.c);
    Ok((c, cp, cpp))
}

// ---- rational differential forms ---------------------------------------

/// Rational differential form on the chart with a factored universal
/// denominator: `comps / prod_k g_k^{den[k]}`, where `comps` holds the
/// numerator polynomials (1 for degrees 0 and 2; `du`, `dv` for degree 1)
/// and every exponent stays at most 2.
#[derive(Clone, Debug)]
pub(crate) struct Form {
    degree: u8,
    comps: Vec<Poly2>,
    /// exponent per line (1-based index k stored at k-1)
    den: Vec<u8>,
}

impl Form {
    fn zero(field: &CycloField, degree: u8, d: usize) -> Form {
        let ncomps = match degree {
            0 | 2 => 1,
            1 => 2,
            _ => unreachable!(),
        };
        Form { degree, comps: vec![Poly2::zero(field); ncomps], den: vec![0; d] }
    }

    fn from_poly(p: Poly2, d: usize) -> Form {
        Form { degree: 0, comps: vec![p], den: vec![0; d] }
    }

    /// Rescale the numerators onto a larger denominator exponent vector.
    fn raise_to(&self, chart: &Chart, target: &[u8]) -> Form {
        let mut extra = Poly2::constant(chart.field.one());
        for (k0, (&have, &want)) in self.den.iter().zip(target).enumerate() {
            debug_assert!(want >= have, "target denominator must dominate");
            for _ in have..want {
                extra = extra.mul(&chart.g(k0 + 1).poly());
            }
        }
        Form {
            degree: self.degree,
            comps: self.comps.iter().map(|c| c.mul(&extra)).collect(),
            den: target.to_vec(),
        }
    }

    fn add(&self, chart: &Chart, other: &Form) -> Form {
        assert_eq!(self.degree, other.degree);
        let target: Vec<u8> =
            self.den.iter().zip(&other.den).map(|(&a, &b)| a.max(b)).collect();
        let a = self.raise_to(chart, &target);
        let b = other.raise_to(chart, &target);
        let comps = a.comps.iter().zip(&b.comps).map(|(x, y)| x.add(y)).collect();
        Form { degree: self.degree, comps, den: target }.normalized(chart)
    }

    fn scale(&self, s: &CycloNum) -> Form {
        Form {
            degree: self.degree,
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
            den: self.den.clone(),
        }
    }

    /// Multiply by the defining form of line `k` (pole-order drop first).
    fn mul_g(&self, chart: &Chart, k: usize) -> Form {
        let mut out = self.clone();
        if out.den[k - 1] > 0 {
            out.den[k - 1] -= 1;
        } else {
            let p = chart.g(k).poly();
            out.comps = out.comps.iter().map(|c| c.mul(&p)).collect();
        }
        out
    }

    fn mul_poly(&self, p: &Poly2) -> Form {
        Form {
            degree: self.degree,
            comps: self.comps.iter().map(|c| c.mul(p)).collect(),
            den: self.den.clone(),
        }
    }

    /// Cancel denominator factors dividing every numerator component.
    fn normalized(mut self, chart: &Chart) -> Form {
        for k0 in 0..self.den.len() {
            while self.den[k0] > 0 {
                let l = chart.g(k0 + 1);
                let divided: Option<Vec<Poly2>> =
                    self.comps.iter().map(|c| c.div_linear(l)).collect();
                match divided {
                    Some(comps) => {
                        self.comps = comps;
                        self.den[k0] -= 1;
                    }
                    None => break,
                }
            }
        }
        self
    }

    /// Exterior derivative.
    fn d_exterior(&self, chart: &Chart) -> Form {
        let field = &chart.field;
        // new denominator: bump every active factor by one
        let target: Vec<u8> = self.den.iter().map(|&e| if e > 0 { e + 1 } else { 0 }).collect();
        // P = product of active factors; S_u = sum_k e_k (du g_k) P/g_k
        let active: Vec<usize> =
            (0..self.den.len()).filter(|&k0| self.den[k0] > 0).collect();
        let mut p_full = Poly2::constant(field.one());
        for &k0 in &active {
            p_full = p_full.mul(&chart.g(k0 + 1).poly());
        }
        let mut s_u = Poly2::zero(field);
        let mut s_v = Poly2::zero(field);
        for &k0 in &active {
            let mut p_wo = Poly2::constant(field.one());
            for &l0 in &active {
                if l0 != k0 {
                    p_wo = p_wo.mul(&chart.g(l0 + 1).poly());
                }
            }
            let e = field.from_integer(self.den[k0] as i64);
            let g = chart.g(k0 + 1);
            s_u.add_assign_scaled(&p_wo, &(&g.a * &e));
            s_v.add_assign_scaled(&p_wo, &(&g.b * &e));
        }
        // d(N / D) = (dN * P - N * S) / (D * P) componentwise
        let deriv = |n: &Poly2, du: bool| -> Poly2 {
            let dn = if du { n.d_du() } else { n.d_dv() };
            let s = if du { &s_u } else { &s_v };
            dn.mul(&p_full).sub(&n.mul(s))
        };
        match self.degree {
            0 => {
                let n = &self.comps[0];
                Form {
                    degree: 1,
                    comps: vec![deriv(n, true), deriv(n, false)],
                    den: target,
                }
                .normalized(chart)
            }
            1 => {
                // d(A du + B dv) = (du B - dv A) du^dv
                let a = &self.comps[0];
                let b = &self.comps[1];
                let num = deriv(b, true).sub(&deriv(a, false));
                Form { degree: 2, comps: vec![num], den: target }.normalized(chart)
            }
            2 => Form::zero(field, 2, self.den.len()),
            _ => unreachable!(),
        }
    }

    /// Wedge of two degree-1 forms.
    fn wedge(&self, chart: &Chart, other: &Form) -> Form {
        assert_eq!((self.degree, other.degree), (1, 1));
        let num =
            self.comps[0].mul(&other.comps[1]).sub(&self.comps[1].mul(&other.comps[0]));
        let den: Vec<u8> = self.den.iter().zip(&other.den).map(|(&a, &b)| a + b).collect();
        Form { degree: 2, comps: vec![num], den }.normalized(chart)
    }

}

#[cfg(test)]
impl Form {
    fn is_zero(&self) -> bool {
        self.comps.iter().all(Poly2::is_zero)
    }

    fn neg(&self) -> Form {
        Form {
            degree: self.degree,
            comps: self
                .comps
                .iter()
                .map(|c| c.scale(&c.field.from_integer(-1)))
                .collect(),
            den: self.den.clone(),
        }
    }

    fn sub(&self, chart: &Chart, other: &Form) -> Form {
        self.add(chart, &other.neg())
    }

    fn equals(&self, chart: &Chart, other: &Form) -> bool {
        self.sub(chart, other).is_zero()
    }
}

/// `w_k = dg_k / g_k` as a [`Form`].
fn omega(chart: &Chart, k: usize) -> Form {
    let g = chart.g(k);
    let mut den = vec![0u8; chart.d];
    den[k - 1] = 1;
    Form {
        degree: 1,
        comps: vec![Poly2::constant(g.a.clone()), Poly2::constant(g.b.clone())],
        den,
    }
}

/// `w^a = sum_k a_k w_k` over the affine lines.
fn omega_alpha(chart: &Chart, field: &CycloField, ra: &ResidueAssignment) -> Form {
    let mut acc = Form::zero(field, 1, chart.d);
    for k in 1..=chart.d {
        if k == chart.deleted {
            continue;
        }
        let ak = ra.alpha(k);
        if ak.is_zero() {
            continue;
        }
        acc = acc.add(chart, &omega(chart, k).scale(&field.from_rational(ak.clone())));
    }
    acc
}

// ---- the filtered complex ----------------------------------------------

/// Labels of the degree-1 and degree-2 basis forms, in order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum BasisLabel {
    /// `w_k`
    Omega(usize),
    /// `x w_k`, `k >= 3`
    XOmega(usize),
    Dx,
    /// `y w_1`
    YOmega1,
    Dy,
    /// `x w_2`
    XOmega2,
    /// `w_{pivot(p)} ^ w_k`
    Os2 { point: usize, k: usize },
    /// `dx ^ w_k`, `k >= 3`
    DxOmega(usize),
    /// `x w_1 ^ w_2`
    XOmega12,
    /// `y w_1 ^ w_2`
    YOmega12,
}

/// The pole-order-1 part of the logarithmic de Rham complex, deconed at
/// the deleted line, with certified bases and exact twisted differentials.
///
/// Lines are relabeled so the two distinguished lines crossing the deleted
/// line at double points come first and the deleted line last; the
/// permutation (`old index -> new index`) is recorded.
pub struct PoleComplex {
    pub d: usize,
    /// `relabel[old-1] = new`.
    pub relabel: Vec<usize>,
    pub incidence: LineIncidence,
    pub residues: ResidueAssignment,
    pub os2_dim: usize,
    /// `(dim P0^0, dim P0^1, dim P0^2) = (1, d-1, os2_dim)` plus the
    /// rank-1 graded parts: total dims `(3, 2d, os2_dim + d - 1)`.
    pub dims: (usize, usize, usize),
    pub labels1: Vec<BasisLabel>,
    pub labels2: Vec<BasisLabel>,
    /// Degree-0 differential: `(2d) x 3` matrix over `Q(zeta_N)`.
    pub d0: ExactMatrix,
    /// Degree-1 differential: `(os2_dim + d - 1) x 2d`.
    pub d1: ExactMatrix,
    /// Coordinates of `x w^a` and `y w^a` in the degree-1 basis.
    pub theta1_extra: [Vec<CycloNum>; 2],
    /// Coordinates of `dx ^ w^a` and `dy ^ w^a` in the degree-2 basis.
    pub theta2: [Vec<CycloNum>; 2],
    chart: Chart,
    forms1: Vec<Form>,
    forms2: Vec<Form>,
    omega_alpha: Form,
}

impl PoleComplex {
    pub fn gr_offset1(&self) -> usize {
        self.d - 1
    }

    pub fn gr_offset2(&self) -> usize {
        self.os2_dim
    }

    /// Graded dimensions `(2, d+1, d-1)` of the rank-1 part, which must
    /// match the closed forms `(m+1, 2m+d-1, m+d-2)` at `m = 1`.
    pub fn gr_dims(&self) -> (usize, usize, usize) {
        (2, self.d + 1, self.d - 1)
    }

    /// Export the degree-1 and degree-2 bases together with the twisting
    /// form: numerator polynomials as cyclotomic-literal strings in the
    /// chart variables `x`, `y`, plus the factored denominator exponents.
    pub fn bases_document(&self) -> serde_json::Value {
        let render = |label: String, f: &Form| {
            serde_json::json!({
                "label": label,
                "numerators": f.comps.iter().map(Poly2::to_literal).collect::<Vec<_>>(),
                "denominator_exponents": f.den,
            })
        };
        let deg1: Vec<_> = self
            .labels1
            .iter()
            .zip(&self.forms1)
            .map(|(l, f)| render(l.describe(), f))
            .collect();
        let deg2: Vec<_> = self
            .labels2
            .iter()
            .zip(&self.forms2)
            .map(|(l, f)| render(l.describe(), f))
            .collect();
        serde_json::json!({
            "relabel": self.relabel,
            "twist": render("w^a".into(), &self.omega_alpha),
            "degree1": deg1,
            "degree2": deg2,
        })
    }
}

impl BasisLabel {
    pub fn describe(&self) -> String {
        match self {
            BasisLabel::Omega(k) => format!("w_{k}"),
            BasisLabel::XOmega(k) => format!("x*w_{k}"),
            BasisLabel::Dx => "dx".into(),
            BasisLabel::YOmega1 => "y*w_1".into(),
            BasisLabel::Dy => "dy".into(),
            BasisLabel::XOmega2 => "x*w_2".into(),
            BasisLabel::Os2 { point, k } => format!("os2[p{point},{k}]"),
            BasisLabel::DxOmega(k) => format!("dx^w_{k}"),
            BasisLabel::XOmega12 => "x*w_1^w_2".into(),
            BasisLabel::YOmega12 => "y*w_1^w_2".into(),
        }
    }
}

/// Closed-form graded dimensions for pole order `m`, alongside the count
/// of the enumerated basis lists; the two must agree for every `d >= 3`.
pub fn gr_dimension_check(d: usize, m: usize) -> ((usize, usize, usize), (usize, usize, usize)) {
    let closed = (m + 1, 2 * m + d - 1, m + d - 2);
    // enumerated: monomials x^i y^{m-i} (i in 0..=m) for p = 0;
    // x^m w_k (k in 3..=d-1) plus x^i y^{m-i} dx/x and dy/y for p = 1;
    // x^{m-1} dx ^ w_k plus x^i y^{m-i} w_1 ^ w_2 for p = 2.
    let enumerated = ((m + 1), (d - 3) + 2 * (m + 1), (d - 3) + (m + 1));
    (closed, enumerated)
}

/// Find the relabeling: two lowest-indexed lines meeting the deleted line
/// at double points become lines 1 and 2, other affine lines keep their
/// order, the deleted line becomes `d`.
fn choose_relabel(inc: &LineIncidence, deleted: usize) -> Result<Vec<usize>, PolefiltError> {
    let d = inc.d();
    let mut partners: Vec<usize> = inc
        .points_on_line(deleted)
        .into_iter()
        .filter(|&pi| inc.points()[pi].len() == 2)
        .map(|pi| {
            let p = &inc.points()[pi];
            if p[0] == deleted {
                p[1]
            } else {
                p[0]
            }
        })
        .collect();
    partners.sort_unstable();
    if partners.len() < 2 {
        return Err(PolefiltError::MissingDoublePoints { found: partners.len() });
    }
    let (first, second) = (partners[0], partners[1]);
    let mut relabel = vec![0usize; d];
    relabel[first - 1] = 1;
    relabel[second - 1] = 2;
    relabel[deleted - 1] = d;
    let mut next = 3;
    for old in 1..=d {
        if old == first || old == second || old == deleted {
            continue;
        }
        relabel[old - 1] = next;
        next += 1;
    }
    Ok(relabel)
}

/// Build the filtered complex for a `P^2` arrangement and a residue
/// assignment whose lines all satisfy the codimension-1 ESV condition.
pub fn build_pole_complex(
    arr: &Arrangement,
    ra: &ResidueAssignment,
) -> Result<PoleComplex, PolefiltError> {
    let d = arr.degree();
    if d < 3 {
        return Err(PolefiltError::TooFewLines(d));
    }
    for k in 1..=d {
        if twisted::is_positive_integer(ra.alpha(k)) {
            return Err(PolefiltError::LineViolation { line: k, alpha: ra.alpha(k).clone() });
        }
    }
    let inc0 = arr.incidence_p2()?;
    let relabel = choose_relabel(&inc0, ra.deleted())?;

    // permute the arrangement rows and the residues
    let field = arr.field().clone();
    let mut rows: Vec<Vec<CycloNum>> = vec![Vec::new(); d];
    for old in 1..=d {
        rows[relabel[old - 1] - 1] = arr.hyperplane(old).coeffs().to_vec();
    }
    let arr = Arrangement::new(&field, 2, rows)?;
    let ra = ra.relabel(&relabel);
    let inc = inc0.relabel(&relabel);
    debug_assert_eq!(ra.deleted(), d);

    let chart = Chart::new(&arr, d)?;
    let os2 = OsDegree2::build(&inc, d);
    let w_alpha = omega_alpha(&chart, &field, &ra);

    // degree-1 basis
    let mut forms1: Vec<Form> = Vec::new();
    let mut labels1 = Vec::new();
    for k in 1..=d - 1 {
        forms1.push(omega(&chart, k));
        labels1.push(BasisLabel::Omega(k));
    }
    for k in 3..=d - 1 {
        forms1.push(omega(&chart, k).mul_g(&chart, 1));
        labels1.push(BasisLabel::XOmega(k));
    }
    let dx = omega(&chart, 1).mul_g(&chart, 1); // dg_1
    let dy = omega(&chart, 2).mul_g(&chart, 2);
    forms1.push(dx.clone());
    labels1.push(BasisLabel::Dx);
    forms1.push(omega(&chart, 1).mul_g(&chart, 2)); // y w_1
    labels1.push(BasisLabel::YOmega1);
    forms1.push(dy.clone());
    labels1.push(BasisLabel::Dy);
    forms1.push(omega(&chart, 2).mul_g(&chart, 1)); // x w_2
    labels1.push(BasisLabel::XOmega2);
    debug_assert_eq!(forms1.len(), 2 * d);

    // degree-2 basis
    let mut forms2: Vec<Form> = Vec::new();
    let mut labels2 = Vec::new();
    for &(point, k) in os2.basis() {
        let pivot = inc.points()[point][0];
        forms2.push(omega(&chart, pivot).wedge(&chart, &omega(&chart, k)));
        labels2.push(BasisLabel::Os2 { point, k });
    }
    for k in 3..=d - 1 {
        forms2.push(dx.wedge(&chart, &omega(&chart, k)));
        labels2.push(BasisLabel::DxOmega(k));
    }
    let w12 = omega(&chart, 1).wedge(&chart, &omega(&chart, 2));
    forms2.push(w12.mul_g(&chart, 1));
    labels2.push(BasisLabel::XOmega12);
    forms2.push(w12.mul_g(&chart, 2));
    labels2.push(BasisLabel::YOmega12);
    debug_assert_eq!(forms2.len(), os2.dim() + d - 1);

    // degree-0 basis {1, x, y} and its differential targets
    let one_form = Form::from_poly(Poly2::constant(field.one()), d);
    let x_form = Form::from_poly(chart.g(1).poly(), d);
    let y_form = Form::from_poly(chart.g(2).poly(), d);
    let d_targets0: Vec<Form> = [one_form, x_form, y_form]
        .iter()
        .map(|h| {
            let dh = h.d_exterior(&chart);
            dh.add(&chart, &w_alpha.mul_poly(&h.comps[0]))
        })
        .collect();

    // degree-1 batch: images of {1, x, y} plus the lifts x w^a, y w^a
    let mut batch1 = d_targets0;
    batch1.push(w_alpha.mul_g(&chart, 1));
    batch1.push(w_alpha.mul_g(&chart, 2));
    let coords1 = expand_in_basis(&chart, &field, &forms1, &batch1, 1)?;
    let (d0_cols, theta1_cols) = coords1.split_at(3);

    // degree-2 batch: images of the degree-1 basis plus dx^w^a, dy^w^a
    let mut batch2: Vec<Form> = forms1
        .iter()
        .map(|f| f.d_exterior(&chart).add(&chart, &w_alpha.wedge(&chart, f)))
        .collect();
    batch2.push(dx.wedge(&chart, &w_alpha));
    batch2.push(dy.wedge(&chart, &w_alpha));
    let coords2 = expand_in_basis(&chart, &field, &forms2, &batch2, 2)?;
    let (d1_cols, theta2_cols) = coords2.split_at(2 * d);

    let d0 = ExactMatrix::from_fn(&field, 2 * d, 3, |r, c| d0_cols[c][r].clone());
    let d1 =
        ExactMatrix::from_fn(&field, forms2.len(), 2 * d, |r, c| d1_cols[c][r].clone());

    Ok(PoleComplex {
        d,
        relabel,
        incidence: inc,
        residues: ra,
        os2_dim: os2.dim(),
        dims: (3, 2 * d, os2.dim() + d - 1),
        labels1,
        labels2,
        d0,
        d1,
        theta1_extra: [theta1_cols[0].clone(), theta1_cols[1].clone()],
        theta2: [theta2_cols[0].clone(), theta2_cols[1].clone()],
        chart,
        forms1,
        forms2,
        omega_alpha: w_alpha,
    })
}

/// Express each target form in the given basis by one exact solve over the
/// flattened numerator coefficients (all forms raised to the componentwise
/// maximal denominator).
fn expand_in_basis(
    chart: &Chart,
    field: &CycloField,
    basis: &[Form],
    targets: &[Form],
    degree: u8,
) -> Result<Vec<Vec<CycloNum>>, PolefiltError> {
    let mut den_max = vec![0u8; chart.d];
    for f in basis.iter().chain(targets) {
        for (m, &e) in den_max.iter_mut().zip(&f.den) {
            *m = (*m).max(e);
        }
    }
    let raised_basis: Vec<Form> = basis.iter().map(|f| f.raise_to(chart, &den_max)).collect();
    let raised_targets: Vec<Form> = targets.iter().map(|f| f.raise_to(chart, &den_max)).collect();
    // collect the monomial support per component slot
    let ncomps = raised_basis
        .first()
        .or(raised_targets.first())
        .map(|f| f.comps.len())
        .unwrap_or(1);
    let mut support: Vec<std::collections::BTreeSet<(u16, u16)>> =
        vec![Default::default(); ncomps];
    for f in raised_basis.iter().chain(&raised_targets) {
        for (slot, comp) in f.comps.iter().enumerate() {
            support[slot].extend(comp.terms.keys().copied());
        }
    }
    let index: Vec<BTreeMap<(u16, u16), usize>> = {
        let mut offset = 0usize;
        support
            .iter()
            .map(|s| {
                let m: BTreeMap<(u16, u16), usize> =
                    s.iter().enumerate().map(|(i, &k)| (k, offset + i)).collect();
                offset += s.len();
                m
            })
            .collect()
    };
    let nrows: usize = support.iter().map(|s| s.len()).sum();
    let flatten = |f: &Form| -> Vec<CycloNum> {
        let mut v = vec![field.zero(); nrows];
        for (slot, comp) in f.comps.iter().enumerate() {
            for (key, coeff) in &comp.terms {
                v[index[slot][key]] = coeff.clone();
            }
        }
        v
    };
    let b = ExactMatrix::from_fn(field, nrows, raised_basis.len(), |r, c| {
        flatten(&raised_basis[c])[r].clone()
    });
    let t = ExactMatrix::from_fn(field, nrows, raised_targets.len(), |r, c| {
        flatten(&raised_targets[c])[r].clone()
    });
    match b.solve_many(&t) {
        Ok(coords) => Ok(coords),
        Err(SolveError::NotInSpan(targets)) => Err(PolefiltError::NotInSpan { degree, targets }),
        Err(SolveError::RankDeficient { rank, cols }) => {
            Err(PolefiltError::BasisDependent { degree, rank, cols })
        }
    }
}

/// `dim H^1` of the three-term filtered complex, by two exact ranks.
pub fn h1_pole(pc: &PoleComplex) -> usize {
    let rank0 = pc.d0.rank();
    let rank1 = pc.d1.rank();
    (pc.dims.1 - rank1) - rank0
}

/// `dim H^0`; zero for every admissible nontrivial assignment.
pub fn h0_pole(pc: &PoleComplex) -> usize {
    pc.dims.0 - pc.d0.rank()
}

/// Outcome of the connecting-map probe on the quotient complex.
#[derive(Clone, Debug)]
pub struct ConnectingReport {
    /// Dimension of `H^1` of the quotient complex.
    pub h1_quotient: usize,
    /// Whether the connecting map into the degree-2 cohomology of the
    /// logarithmic part is injective.
    pub injective: bool,
    pub aomoto_rank: usize,
    pub joint_rank: usize,
}

/// Build the quotient of the graded part by the acyclic span
/// `{x, y, dx, dy, x w^a, y w^a, dx ^ w^a, dy ^ w^a}`, compute `H^1` of
/// the quotient, and push its classes through the connecting map into the
/// logarithmic degree-2 part; injectivity is decided by one rank
/// comparison.
pub fn connecting_injectivity(pc: &PoleComplex) -> Result<ConnectingReport, PolefiltError> {
    let field = pc.d1.field().clone();
    let d = pc.d;
    let gr1_off = pc.gr_offset1();
    let gr1_len = d + 1;
    let gr2_off = pc.gr_offset2();
    let gr2_len = d - 1;

    // graded block of the degree-1 differential: rows gr2, cols gr1
    let c_block = ExactMatrix::from_fn(&field, gr2_len, gr1_len, |r, c| {
        pc.d1.at(gr2_off + r, gr1_off + c).clone()
    });
    // filtration check: logarithmic columns stay logarithmic
    for c in 0..gr1_off {
        for r in 0..gr2_len {
            if !pc.d1.at(gr2_off + r, c).is_zero() {
                return Err(PolefiltError::DegenerateQuotient(
                    "differential does not respect the filtration".into(),
                ));
            }
        }
    }

    // theta spans in graded coordinates
    let pos_dx = gr1_len - 4; // order: XOmega(3..) .., Dx, YOmega1, Dy, XOmega2
    let pos_dy = gr1_len - 2;
    let mut theta1 = ExactMatrix::zeros(&field, 4, gr1_len);
    *theta1.at_mut(0, pos_dx) = field.one();
    *theta1.at_mut(1, pos_dy) = field.one();
    for (row, extra) in pc.theta1_extra.iter().enumerate() {
        for c in 0..gr1_len {
            *theta1.at_mut(2 + row, c) = extra[gr1_off + c].clone();
        }
        // the logarithmic block of x w^a / y w^a is irrelevant for the
        // quotient; it lives in the lift ambiguity
    }
    let mut theta2 = ExactMatrix::zeros(&field, 2, gr2_len);
    for (row, t) in pc.theta2.iter().enumerate() {
        for r in 0..gr2_off {
            if !t[r].is_zero() {
                return Err(PolefiltError::DegenerateQuotient(
                    "theta span leaks into the logarithmic block".into(),
                ));
            }
        }
        for c in 0..gr2_len {
            *theta2.at_mut(row, c) = t[gr2_off + c].clone();
        }
    }

    let (_t1_rref, t1_pivots) = theta1.rref();
    if t1_pivots.len() != 4 {
        return Err(PolefiltError::DegenerateQuotient(format!(
            "degree-1 acyclic span has rank {} instead of 4",
            t1_pivots.len()
        )));
    }
    let (t2_rref, t2_pivots) = theta2.rref();
    if t2_pivots.len() != 2 {
        return Err(PolefiltError::DegenerateQuotient(format!(
            "degree-2 acyclic span has rank {} instead of 2",
            t2_pivots.len()
        )));
    }

    let reduce = |v: &mut Vec<CycloNum>, rref: &ExactMatrix, pivots: &[usize]| {
        for (row, &col) in pivots.iter().enumerate() {
            let factor = v[col].clone();
            if factor.is_zero() {
                continue;
            }
            for c in 0..v.len() {
                let e = rref.at(row, c);
                if !e.is_zero() {
                    v[c] = &v[c] - &(e * &factor);
                }
            }
        }
    };
    let free1: Vec<usize> = (0..gr1_len).filter(|c| !t1_pivots.contains(c)).collect();
    let free2: Vec<usize> = (0..gr2_len).filter(|c| !t2_pivots.contains(c)).collect();

    // induced quotient differential
    let mut dq = ExactMatrix::zeros(&field, free2.len(), free1.len());
    for (qc, &c) in free1.iter().enumerate() {
        let mut img: Vec<CycloNum> = (0..gr2_len)
            .map(|r| c_block.at(r, c).clone())
            .collect();
        reduce(&mut img, &t2_rref, &t2_pivots);
        for (qr, &r) in free2.iter().enumerate() {
            *dq.at_mut(qr, qc) = img[r].clone();
        }
    }
    let (_, kernel) = dq.rank_and_kernel();
    let h1_quotient = kernel.len();

    // push kernel classes through the connecting map: lift to the graded
    // block (zero on pivot coordinates), apply d1, read the logarithmic
    // component
    let aomoto_block = ExactMatrix::from_fn(&field, gr2_off, gr1_off, |r, c| {
        pc.d1.at(r, c).clone()
    });
    let mut deltas: Vec<Vec<CycloNum>> = Vec::new();
    for kv in &kernel {
        // graded lift
        let mut w = vec![field.zero(); pc.dims.1];
        for (qc, &c) in free1.iter().enumerate() {
            w[gr1_off + c] = kv[qc].clone();
        }
        let img = pc.d1.mul_vec(&w);
        // its graded part must lie in the degree-2 acyclic span
        let mut gr_part: Vec<CycloNum> =
            (0..gr2_len).map(|r| img[gr2_off + r].clone()).collect();
        reduce(&mut gr_part, &t2_rref, &t2_pivots);
        if gr_part.iter().any(|e| !e.is_zero()) {
            return Err(PolefiltError::DegenerateQuotient(
                "quotient kernel class fails to close modulo the acyclic span".into(),
            ));
        }
        deltas.push((0..gr2_off).map(|r| img[r].clone()).collect());
    }
    let aomoto_rank = aomoto_block.rank();
    let delta_mat = ExactMatrix::from_fn(&field, gr2_off, deltas.len(), |r, c| {
        deltas[c][r].clone()
    });
    let joint_rank = aomoto_block.hstack(&delta_mat).rank();
    Ok(ConnectingReport {
        h1_quotient,
        injective: joint_rank == aomoto_rank + h1_quotient,
        aomoto_rank,
        joint_rank,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::twisted::{aomoto_cohomology, Certified};
    use num_bigint::BigInt;

    fn fixture_arr(name: &str) -> Arrangement {
        let path = format!("{}/fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"));
        Arrangement::parse(&std::fs::read_to_string(path).unwrap()).unwrap()
    }

    fn rat(n: i64, den: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(den))
    }

    fn near_pencil_ra() -> ResidueAssignment {
        ResidueAssignment::new(vec![rat(-1, 2), rat(-1, 2), rat(1, 2), rat(1, 2)], 4).unwrap()
    }

    /// Five lines with one dense point at infinity whose residue sum is
    /// exactly 1: the smallest fixture where the ESV condition fails but
    /// the full condition report passes.
    fn bad_point_fixture() -> (Arrangement, ResidueAssignment) {
        let f = CycloField::new(1).unwrap();
        let arr = Arrangement::new(
            &f,
            2,
            vec![
                vec![f.one(), f.zero(), f.zero()],                      // x
                vec![f.zero(), f.one(), f.zero()],                      // y
                vec![f.one(), f.one(), f.from_integer(-1)],             // x + y - 1
                vec![f.one(), f.one(), f.from_integer(-2)],             // x + y - 2
                vec![f.zero(), f.zero(), f.one()],                      // infinity
            ],
        )
        .unwrap();
        let ra = ResidueAssignment::new(
            vec![rat(-1, 2), rat(-1, 2), rat(3, 4), rat(3, 4), rat(-1, 2)],
            5,
        )
        .unwrap();
        (arr, ra)
    }

    #[test]
    fn bad_point_fixture_is_certified_by_conditions() {
        let (arr, ra) = bad_point_fixture();
        let inc = arr.incidence_p2().unwrap();
        let esv = crate::twisted::esv_check(&inc, &ra).unwrap();
        assert!(!esv.pass);
        let report = crate::conditions::check_theorem1(&inc, &ra).unwrap();
        assert_eq!(report.bad.bad_points.len(), 1);
        let ib: Vec<usize> = report.bad.ib.iter().copied().collect();
        assert_eq!(ib, vec![3, 4, 5]);
        assert!(report.a.pass && report.b_affine.pass && report.c.pass && report.d_cond.pass);
        assert!(report.overall);
        let res = aomoto_cohomology(&inc, &ra).unwrap();
        assert_eq!(res.certified, Certified::Theorem1);
    }

    #[test]
    fn c_constant_examples() {
        // identity case on the triangle chart
        let chart = Chart::new(&fixture_arr("triangle"), 3).unwrap();
        let f = CycloField::new(1).unwrap();
        let (c, cp, cpp) = c_constants(&chart, 2, 1, 2).unwrap();
        assert_eq!((c, cp, cpp), (f.zero(), f.zero(), f.one()));

        let chart = Chart::new(&fixture_arr("near_pencil"), 4).unwrap();
        let (c, cp, cpp) = c_constants(&chart, 3, 1, 2).unwrap();
        assert_eq!((c, cp, cpp), (f.zero(), f.one(), f.from_integer(-1)));

        let chart = Chart::new(&fixture_arr("ex26a"), 9).unwrap();
        let (c, cp, cpp) = c_constants(&chart, 3, 1, 2).unwrap();
        assert_eq!((c, cp, cpp), (f.zero(), f.one(), f.from_integer(-2)));
        // lines 3 and 5 are parallel in the chart
        assert!(matches!(
            c_constants(&chart, 1, 3, 5),
            Err(PolefiltError::ParallelPair { i: 3, j: 5 })
        ));
    }

    #[test]
    fn near_pencil_dimensions_and_h1() {
        let pc = build_pole_complex(&fixture_arr("near_pencil"), &near_pencil_ra()).unwrap();
        assert_eq!(pc.dims, (3, 8, 5));
        assert_eq!(pc.gr_dims(), (2, 5, 3));
        assert_eq!(pc.relabel, vec![1, 2, 3, 4]);
        assert_eq!(h0_pole(&pc), 0);
        assert_eq!(h1_pole(&pc), 0);
        // twisted differential squares to zero
        assert!(pc.d1.mul_mat(&pc.d0).is_zero());
    }

    #[test]
    fn triangle_dimensions_and_h1() {
        let arr = fixture_arr("triangle");
        let ra = ResidueAssignment::new(vec![rat(1, 3), rat(1, 3), rat(-2, 3)], 3).unwrap();
        let pc = build_pole_complex(&arr, &ra).unwrap();
        assert_eq!(pc.dims, (3, 6, 3));
        assert_eq!(h1_pole(&pc), 0);
        assert!(pc.d1.mul_mat(&pc.d0).is_zero());
    }

    #[test]
    fn graded_dimension_formulas() {
        for d in 3..10 {
            for m in 1..=3 {
                let (closed, enumerated) = gr_dimension_check(d, m);
                assert_eq!(closed, enumerated, "d = {d}, m = {m}");
            }
        }
    }

    #[test]
    fn euler_characteristic_of_complex() {
        for (arr, ra) in [
            (fixture_arr("near_pencil"), near_pencil_ra()),
            bad_point_fixture(),
        ] {
            let inc = arr.incidence_p2().unwrap();
            let euler = inc.poset_summary(ra.deleted()).unwrap().euler;
            let pc = build_pole_complex(&arr, &ra).unwrap();
            let (n0, n1, n2) = pc.dims;
            assert_eq!(n0 as i64 - n1 as i64 + n2 as i64, euler);
        }
    }

    #[test]
    fn defining_form_wedge_identity() {
        // (c'_{j,1,2} dx + c''_{j,1,2} dy) ^ w_j = dg_j ^ w_j = 0
        let (arr, ra) = bad_point_fixture();
        let pc = build_pole_complex(&arr, &ra).unwrap();
        let chart = &pc.chart;
        let dx = omega(chart, 1).mul_g(chart, 1);
        let dy = omega(chart, 2).mul_g(chart, 2);
        for j in 3..pc.d {
            let (_, cp, cpp) = c_constants(chart, j, 1, 2).unwrap();
            let lhs = dx.scale(&cp).add(chart, &dy.scale(&cpp));
            let w = lhs.wedge(chart, &omega(chart, j));
            assert!(w.is_zero(), "j = {j}");
        }
    }

    #[test]
    fn twisted_image_expansion_identity() {
        // d^a(x w_k) expands through the intersection point p(k) on the
        // deleted line:
        //   sum_{j notin I_p(k)} c_{1,j,k} a_j w_j^w_k
        //   + (1 + sum_{j notin I_p(k)} a_j) dx^w_k
        //   - dx ^ (sum_{j notin I_p(k)} a_j w_j)
        for (arr, ra) in [
            (fixture_arr("near_pencil"), near_pencil_ra()),
            bad_point_fixture(),
        ] {
            let pc = build_pole_complex(&arr, &ra).unwrap();
            let chart = &pc.chart;
            let field = pc.d0.field().clone();
            let d = pc.d;
            let inc = &pc.incidence;
            let ra = &pc.residues;
            let dx = omega(chart, 1).mul_g(chart, 1);
            let table = inc.pair_table();
            for k in 3..d {
                let x_w_k = omega(chart, k).mul_g(chart, 1);
                let lhs = x_w_k
                    .d_exterior(chart)
                    .add(chart, &pc.omega_alpha.wedge(chart, &x_w_k));

                let p_k = table[k - 1][d - 1];
                let on_point = &inc.points()[p_k];
                let mut rhs = Form::zero(&field, 2, d);
                let mut off_sum = Rational::zero();
                let mut w_off = Form::zero(&field, 1, d);
                for j in 1..d {
                    if on_point.contains(&j) {
                        continue;
                    }
                    let aj = ra.alpha(j);
                    off_sum += aj;
                    if aj.is_zero() {
                        continue;
                    }
                    let ajf = field.from_rational(aj.clone());
                    let (c1jk, _, _) = c_constants(chart, 1, j, k).unwrap();
                    let wjk = omega(chart, j).wedge(chart, &omega(chart, k));
                    rhs = rhs.add(chart, &wjk.scale(&(&c1jk * &ajf)));
                    w_off = w_off.add(chart, &omega(chart, j).scale(&ajf));
                }
                let coeff = field.from_rational(Rational::from_integer(1.into()) + off_sum);
                rhs = rhs.add(chart, &dx.wedge(chart, &omega(chart, k)).scale(&coeff));
                rhs = rhs.sub(chart, &dx.wedge(chart, &w_off));
                assert!(lhs.equals(chart, &rhs), "k = {k}");
            }
        }
    }

    #[test]
    fn oracle_agreement_with_aomoto() {
        let cases = [
            (fixture_arr("triangle"),
             ResidueAssignment::new(vec![rat(1, 3), rat(1, 3), rat(-2, 3)], 3).unwrap()),
            (fixture_arr("near_pencil"), near_pencil_ra()),
            bad_point_fixture(),
        ];
        for (arr, ra) in cases {
            let inc = arr.incidence_p2().unwrap();
            let res = aomoto_cohomology(&inc, &ra).unwrap();
            assert_ne!(res.certified, Certified::None);
            let pc = build_pole_complex(&arr, &ra).unwrap();
            assert_eq!(h1_pole(&pc), res.h.1, "the two routes must agree");
        }
    }

    #[test]
    fn connecting_map_is_injective_on_certified_fixtures() {
        let (arr, ra) = bad_point_fixture();
        let pc = build_pole_complex(&arr, &ra).unwrap();
        let report = connecting_injectivity(&pc).unwrap();
        assert!(report.injective);

        let pc = build_pole_complex(&fixture_arr("near_pencil"), &near_pencil_ra()).unwrap();
        let report = connecting_injectivity(&pc).unwrap();
        assert!(report.injective);
    }

    #[test]
    fn preconditions_are_enforced() {
        // a residue of 1 on a line
        let arr = fixture_arr("near_pencil");
        let ra = ResidueAssignment::new(vec![rat(1, 1), rat(-1, 2), rat(-1, 2), rat(0, 1)], 4)
            .unwrap();
        assert!(matches!(
            build_pole_complex(&arr, &ra),
            Err(PolefiltError::LineViolation { line: 1, .. })
        ));

        // no double points at all
        let arr = fixture_arr("ex26b");
        let ra = ResidueAssignment::from_subset(9, 3, &[1, 4, 7], 9).unwrap();
        assert!(matches!(
            build_pole_complex(&arr, &ra),
            Err(PolefiltError::MissingDoublePoints { found: 0 })
        ));
    }

    #[test]
    fn relabeling_is_recorded() {
        let arr = fixture_arr("ex26a");
        let ra = ResidueAssignment::from_subset(9, 3, &[4, 5, 9], 9).unwrap();
        let pc = build_pole_complex(&arr, &ra).unwrap();
        // doubles on line 9 touch lines 1, 6, 7, 8; so 1 -> 1 and 6 -> 2
        assert_eq!(pc.relabel[0], 1);
        assert_eq!(pc.relabel[5], 2);
        assert_eq!(pc.relabel[8], 9);
        assert_eq!(pc.dims, (3, 18, 19 + 8));
        assert!(pc.d1.mul_mat(&pc.d0).is_zero());
    }
}
