//! Exact scalars: rationals and cyclotomic numbers.
//!
//! A [`CycloNum`] is an element of `Q(zeta_N)` stored canonically as a
//! rational polynomial of degree `< phi(N)` in a primitive `N`-th root of
//! unity `z`, reduced modulo the cyclotomic polynomial `Phi_N`. Canonical
//! reduction makes equality a coefficient-wise comparison, which the
//! incidence computations downstream rely on. `Q` itself is the case
//! `N = 1`, so a single scalar type serves every module.

use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use thiserror::Error;

/// Exact rational number with arbitrary-precision numerator/denominator.
pub type Rational = num_rational::BigRational;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum CycloError {
    #[error("cyclotomic order must be at least 1")]
    InvalidOrder,
    #[error("operands have different cyclotomic orders ({0} vs {1})")]
    OrderMismatch(u32, u32),
    #[error("division by zero")]
    DivisionByZero,
    #[error("`i` literal requires the order to be divisible by 4 (got {0})")]
    ImaginaryUnavailable(u32),
    #[error("malformed cyclotomic literal `{input}`: {reason}")]
    Parse { input: String, reason: String },
}

/// Euler's totient.
pub fn euler_phi(n: u32) -> u32 {
    let mut n = n;
    let mut result = n;
    let mut p = 2;
    while p * p <= n {
        if n % p == 0 {
            while n % p == 0 {
                n /= p;
            }
            result -= result / p;
        }
        p += 1;
    }
    if n > 1 {
        result -= result / n;
    }
    result
}

/// Coefficients of the `n`-th cyclotomic polynomial `Phi_n`, ascending
/// degree, monic of degree `phi(n)`.
///
/// Computed by exact division: `Phi_n = (z^n - 1) / prod_{d | n, d < n} Phi_d`.
pub fn cyclotomic_polynomial(n: u32) -> Result<Vec<BigInt>, CycloError> {
    if n == 0 {
        return Err(CycloError::InvalidOrder);
    }
    if n == 1 {
        return Ok(vec![BigInt::from(-1), BigInt::one()]);
    }
    // z^n - 1
    let mut num = vec![BigInt::zero(); n as usize + 1];
    num[0] = BigInt::from(-1);
    num[n as usize] = BigInt::one();
    for d in 1..n {
        if n % d == 0 {
            let phi_d = cyclotomic_polynomial(d)?;
            num = int_poly_div_exact(&num, &phi_d);
        }
    }
    Ok(num)
}

/// Exact division of integer polynomials; panics if the division is not
/// exact (never happens for cyclotomic factors, which are monic divisors).
fn int_poly_div_exact(num: &[BigInt], den: &[BigInt]) -> Vec<BigInt> {
    assert!(den.last().map(|c| c.is_one()).unwrap_or(false), "divisor must be monic");
    let mut rem: Vec<BigInt> = num.to_vec();
    let dd = den.len() - 1;
    let nd = rem.len() - 1;
    assert!(nd >= dd);
    let mut quot = vec![BigInt::zero(); nd - dd + 1];
    for i in (dd..=nd).rev() {
        let c = std::mem::replace(&mut rem[i], BigInt::zero());
        if c.is_zero() {
            continue;
        }
        for (j, dj) in den.iter().enumerate().take(dd) {
            rem[i - dd + j] -= &c * dj;
        }
        quot[i - dd] = c;
    }
    assert!(rem.iter().all(|c| c.is_zero()), "division not exact");
    quot
}

#[derive(Debug)]
struct FieldInner {
    order: u32,
    degree: usize,
    /// Phi_N as rationals, ascending degree, monic.
    modulus: Vec<Rational>,
}

/// The field `Q(zeta_N)`: shared context carrying the reduction modulus.
///
/// Cheap to clone (reference counted); two fields of the same order are
/// interchangeable. All values are immutable after construction.
#[derive(Clone, Debug)]
pub struct CycloField {
    inner: Arc<FieldInner>,
}

impl CycloField {
    pub fn new(order: u32) -> Result<Self, CycloError> {
        let phi = cyclotomic_polynomial(order)?;
        Ok(CycloField {
            inner: Arc::new(FieldInner {
                order,
                degree: phi.len() - 1,
                modulus: phi.into_iter().map(Rational::from_integer).collect(),
            }),
        })
    }

    pub fn order(&self) -> u32 {
        self.inner.order
    }

    /// `phi(N)`, the dimension of the field over `Q`.
    pub fn degree(&self) -> usize {
        self.inner.degree
    }

    pub fn zero(&self) -> CycloNum {
        CycloNum { field: self.clone(), coeffs: vec![Rational::zero(); self.degree()] }
    }

    pub fn one(&self) -> CycloNum {
        self.from_rational(Rational::one())
    }

    pub fn from_rational(&self, q: Rational) -> CycloNum {
        let mut coeffs = vec![Rational::zero(); self.degree()];
        if self.degree() > 0 {
            coeffs[0] = q;
        }
        CycloNum { field: self.clone(), coeffs }
    }

    pub fn from_integer(&self, n: i64) -> CycloNum {
        self.from_rational(Rational::from_integer(BigInt::from(n)))
    }

    /// `z^power` for the primitive root `z`.
    pub fn root_power(&self, power: u32) -> CycloNum {
        let power = (power % self.order()) as usize;
        let mut coeffs = vec![Rational::zero(); power + 1];
        coeffs[power] = Rational::one();
        self.reduce(coeffs)
    }

    /// The imaginary unit `i = z^{N/4}`; requires `4 | N`.
    pub fn imaginary_unit(&self) -> Result<CycloNum, CycloError> {
        if self.order() % 4 != 0 {
            return Err(CycloError::ImaginaryUnavailable(self.order()));
        }
        Ok(self.root_power(self.order() / 4))
    }

    /// Reduce a coefficient vector of any length modulo `Phi_N`.
    fn reduce(&self, mut coeffs: Vec<Rational>) -> CycloNum {
        let m = self.degree();
        let modulus = &self.inner.modulus;
        let mut i = coeffs.len();
        while i > m {
            i -= 1;
            let c = std::mem::replace(&mut coeffs[i], Rational::zero());
            if c.is_zero() {
                continue;
            }
            for j in 0..m {
                let t = &c * &modulus[j];
                coeffs[i - m + j] -= t;
            }
        }
        coeffs.resize(m, Rational::zero());
        CycloNum { field: self.clone(), coeffs }
    }

    pub fn parse(&self, input: &str) -> Result<CycloNum, CycloError> {
        parse_literal(self, input)
    }
}

impl PartialEq for CycloField {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order()
    }
}
impl Eq for CycloField {}

/// An element of `Q(zeta_N)` in canonical reduced form.
///
/// Two values are equal exactly when their orders and coefficient
/// sequences agree.
#[derive(Clone)]
pub struct CycloNum {
    field: CycloField,
    coeffs: Vec<Rational>,
}

impl CycloNum {
    pub fn field(&self) -> &CycloField {
        &self.field
    }

    pub fn order(&self) -> u32 {
        self.field.order()
    }

    /// Coefficients of `1, z, ..., z^{phi(N)-1}`.
    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    /// The rational value, if the element lies in `Q`.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.coeffs.iter().skip(1).all(|c| c.is_zero()) {
            Some(self.coeffs.first().cloned().unwrap_or_else(Rational::zero))
        } else {
            None
        }
    }

    fn check_same_order(&self, other: &CycloNum) -> Result<(), CycloError> {
        if self.order() != other.order() {
            Err(CycloError::OrderMismatch(self.order(), other.order()))
        } else {
            Ok(())
        }
    }

    pub fn checked_add(&self, other: &CycloNum) -> Result<CycloNum, CycloError> {
        self.check_same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        Ok(CycloNum { field: self.field.clone(), coeffs })
    }

    pub fn checked_sub(&self, other: &CycloNum) -> Result<CycloNum, CycloError> {
        self.check_same_order(other)?;
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        Ok(CycloNum { field: self.field.clone(), coeffs })
    }

    pub fn checked_mul(&self, other: &CycloNum) -> Result<CycloNum, CycloError> {
        self.check_same_order(other)?;
        let m = self.field.degree();
        if m == 0 {
            return Ok(self.field.zero());
        }
        let mut prod = vec![Rational::zero(); 2 * m];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let t = a * b;
                prod[i + j] += t;
            }
        }
        Ok(self.field.reduce(prod))
    }

    /// Multiplicative inverse via the extended Euclidean algorithm on
    /// polynomials modulo `Phi_N` (which is irreducible over `Q`).
    pub fn inverse(&self) -> Result<CycloNum, CycloError> {
        if self.is_zero() {
            return Err(CycloError::DivisionByZero);
        }
        if let Some(q) = self.as_rational() {
            return Ok(self.field.from_rational(q.recip()));
        }
        // gcd(self, Phi) = 1 = u*self + v*Phi; inverse = u mod Phi.
        let mut r0: Vec<Rational> = self.field.inner.modulus.clone();
        let mut r1: Vec<Rational> = trim(self.coeffs.clone());
        let mut u0: Vec<Rational> = vec![];
        let mut u1: Vec<Rational> = vec![Rational::one()];
        while !r1.is_empty() {
            let (q, r) = poly_divmod(&r0, &r1);
            let u = poly_sub(&u0, &poly_mul(&q, &u1));
            r0 = r1;
            r1 = r;
            u0 = u1;
            u1 = u;
        }
        // r0 is the gcd, a nonzero constant.
        debug_assert_eq!(r0.len(), 1);
        let scale = r0[0].recip();
        let inv: Vec<Rational> = u0.iter().map(|c| c * &scale).collect();
        Ok(self.field.reduce(inv))
    }

    pub fn checked_div(&self, other: &CycloNum) -> Result<CycloNum, CycloError> {
        self.check_same_order(other)?;
        self.checked_mul(&other.inverse()?)
    }

    /// The Galois conjugate `z -> z^{N-1}`, i.e. complex conjugation for the
    /// standard embedding.
    pub fn conj(&self) -> CycloNum {
        let n = self.order();
        let m = self.field.degree();
        let mut out = vec![Rational::zero(); ((m.max(1) - 1) * (n as usize - 1)).max(1) + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (k * (n as usize - 1)) % n as usize;
            out[e] += c;
        }
        self.field.reduce(out)
    }

    /// `|a|^2 = a * conj(a)`; for inputs from the root-of-unity lattice this
    /// is a non-negative rational.
    pub fn abs_squared(&self) -> CycloNum {
        self.checked_mul(&self.conj()).expect("same field")
    }

    /// Height proxy used by pivot selection: total bit size of all
    /// numerators and denominators.
    pub fn coefficient_height(&self) -> u64 {
        self.coeffs
            .iter()
            .map(|c| c.numer().bits() + c.denom().bits())
            .sum()
    }

    /// Canonical literal, re-parsable by [`CycloField::parse`].
    pub fn to_literal(&self) -> String {
        let mut out = String::new();
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            let mag = c.abs();
            if out.is_empty() {
                if neg {
                    out.push('-');
                }
            } else {
                out.push(if neg { '-' } else { '+' });
            }
            if k == 0 {
                out.push_str(&mag.to_string());
            } else {
                if !mag.is_one() {
                    out.push_str(&mag.to_string());
                    out.push('*');
                }
                if k == 1 {
                    out.push('z');
                } else {
                    out.push_str(&format!("z^{k}"));
                }
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

impl PartialEq for CycloNum {
    fn eq(&self, other: &Self) -> bool {
        self.order() == other.order() && self.coeffs == other.coeffs
    }
}
impl Eq for CycloNum {}

impl std::hash::Hash for CycloNum {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.order().hash(state);
        self.coeffs.hash(state);
    }
}

impl fmt::Debug for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycloNum(N={}, {})", self.order(), self.to_literal())
    }
}

impl fmt::Display for CycloNum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_literal())
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl std::ops::$trait for &CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: &CycloNum) -> CycloNum {
                self.$checked(rhs).expect("cyclotomic order mismatch or division by zero")
            }
        }
        impl std::ops::$trait for CycloNum {
            type Output = CycloNum;
            fn $method(self, rhs: CycloNum) -> CycloNum {
                (&self).$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);
binop!(Div, div, checked_div);

impl std::ops::Neg for &CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        CycloNum {
            field: self.field.clone(),
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}
impl std::ops::Neg for CycloNum {
    type Output = CycloNum;
    fn neg(self) -> CycloNum {
        -&self
    }
}

// ---- dense rational polynomial helpers (ascending degree, trimmed) ----

fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
    p
}

fn poly_mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, ai) in a.iter().enumerate() {
        if ai.is_zero() {
            continue;
        }
        for (j, bj) in b.iter().enumerate() {
            out[i + j] += ai * bj;
        }
    }
    trim(out)
}

fn poly_sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut out = vec![Rational::zero(); a.len().max(b.len())];
    for (i, ai) in a.iter().enumerate() {
        out[i] += ai;
    }
    for (i, bi) in b.iter().enumerate() {
        out[i] -= bi;
    }
    trim(out)
}

fn poly_divmod(num: &[Rational], den: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    assert!(!den.is_empty());
    let mut rem = num.to_vec();
    if rem.len() < den.len() {
        return (vec![], trim(rem));
    }
    let lead = den.last().unwrap();
    let mut quot = vec![Rational::zero(); rem.len() - den.len() + 1];
    for i in (den.len() - 1..rem.len()).rev() {
        if rem[i].is_zero() {
            continue;
        }
        let c = &rem[i] / lead;
        let off = i + 1 - den.len();
        for (j, dj) in den.iter().enumerate() {
            let t = &c * dj;
            rem[off + j] -= t;
        }
        quot[off] = c;
    }
    (trim(quot), trim(rem))
}

// ---- literal grammar ----
//
//   expr := '-'? term (('+'|'-') term)*
//   term := rat ('*' pow)? | pow
//   pow  := 'z' ('^' uint)? | 'i'
//   rat  := int ('/' uint)?
//
// `i` abbreviates `z^{N/4}` and needs `4 | N`. Whitespace insignificant.

struct Lexer<'a> {
    bytes: &'a [u8],
    pos: usize,
    input: &'a str,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Z,
    I,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    End,
}

impl<'a> Lexer<'a> {
    fn new(input: &'a str) -> Self {
        Lexer { bytes: input.as_bytes(), pos: 0, input }
    }

    fn err(&self, reason: impl Into<String>) -> CycloError {
        CycloError::Parse { input: self.input.to_string(), reason: reason.into() }
    }

    fn next_tok(&mut self) -> Result<Tok, CycloError> {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        if self.pos >= self.bytes.len() {
            return Ok(Tok::End);
        }
        let b = self.bytes[self.pos];
        self.pos += 1;
        Ok(match b {
            b'+' => Tok::Plus,
            b'-' => Tok::Minus,
            b'*' => Tok::Star,
            b'/' => Tok::Slash,
            b'^' => Tok::Caret,
            b'z' => Tok::Z,
            b'i' => Tok::I,
            b'0'..=b'9' => {
                let start = self.pos - 1;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let digits = &self.input[start..self.pos];
                Tok::Int(digits.parse().map_err(|_| self.err("integer out of range"))?)
            }
            other => return Err(self.err(format!("unexpected character `{}`", other as char))),
        })
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    lookahead: Tok,
    field: &'a CycloField,
}

impl<'a> Parser<'a> {
    fn new(field: &'a CycloField, input: &'a str) -> Result<Self, CycloError> {
        let mut lexer = Lexer::new(input);
        let lookahead = lexer.next_tok()?;
        Ok(Parser { lexer, lookahead, field })
    }

    fn bump(&mut self) -> Result<Tok, CycloError> {
        let next = self.lexer.next_tok()?;
        Ok(std::mem::replace(&mut self.lookahead, next))
    }

    fn err(&self, reason: impl Into<String>) -> CycloError {
        self.lexer.err(reason)
    }

    fn parse_expr(&mut self) -> Result<CycloNum, CycloError> {
        let mut negate_first = false;
        if self.lookahead == Tok::Minus {
            self.bump()?;
            negate_first = true;
        }
        let mut acc = self.parse_term()?;
        if negate_first {
            acc = -acc;
        }
        loop {
            match self.lookahead {
                Tok::Plus => {
                    self.bump()?;
                    let t = self.parse_term()?;
                    acc = acc.checked_add(&t)?;
                }
                Tok::Minus => {
                    self.bump()?;
                    let t = self.parse_term()?;
                    acc = acc.checked_sub(&t)?;
                }
                Tok::End => return Ok(acc),
                _ => return Err(self.err("expected `+`, `-` or end of input")),
            }
        }
    }

    fn parse_term(&mut self) -> Result<CycloNum, CycloError> {
        match self.lookahead {
            Tok::Z | Tok::I => self.parse_pow(),
            Tok::Int(_) => {
                let coeff = self.parse_rat()?;
                if self.lookahead == Tok::Star {
                    self.bump()?;
                    let p = self.parse_pow()?;
                    Ok(p.checked_mul(&self.field.from_rational(coeff))?)
                } else {
                    Ok(self.field.from_rational(coeff))
                }
            }
            _ => Err(self.err("expected a rational or a power of `z`")),
        }
    }

    fn parse_pow(&mut self) -> Result<CycloNum, CycloError> {
        match self.bump()? {
            Tok::Z => {
                if self.lookahead == Tok::Caret {
                    self.bump()?;
                    match self.bump()? {
                        Tok::Int(e) => {
                            let e: u32 = (&e % BigInt::from(self.field.order()))
                                .try_into()
                                .expect("reduced exponent fits");
                            Ok(self.field.root_power(e))
                        }
                        _ => Err(self.err("expected an exponent after `^`")),
                    }
                } else {
                    Ok(self.field.root_power(1))
                }
            }
            Tok::I => self.field.imaginary_unit(),
            _ => Err(self.err("expected `z` or `i`")),
        }
    }

    fn parse_rat(&mut self) -> Result<Rational, CycloError> {
        let numer = match self.bump()? {
            Tok::Int(n) => n,
            _ => return Err(self.err("expected an integer")),
        };
        if self.lookahead == Tok::Slash {
            self.bump()?;
            match self.bump()? {
                Tok::Int(d) => {
                    if d.is_zero() {
                        return Err(self.err("zero denominator"));
                    }
                    Ok(Rational::new(numer, d))
                }
                _ => Err(self.err("expected a denominator after `/`")),
            }
        } else {
            Ok(Rational::from_integer(numer))
        }
    }
}

fn parse_literal(field: &CycloField, input: &str) -> Result<CycloNum, CycloError> {
    let mut parser = Parser::new(field, input)?;
    parser.parse_expr()
}

/// Parse a plain rational literal such as `-5/6`.
pub fn parse_rational(input: &str) -> Result<Rational, CycloError> {
    let q1 = CycloField::new(1).expect("order 1");
    let v = q1.parse(input)?;
    v.as_rational().ok_or_else(|| CycloError::Parse {
        input: input.to_string(),
        reason: "not a rational".into(),
    })
}

/// Canonical rational literal (`a` or `a/b`), as emitted in documents.
pub fn rational_to_string(q: &Rational) -> String {
    q.to_string()
}
