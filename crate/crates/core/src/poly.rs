//! The graded ring `S = k[x, y, z]`: monomial bases of the pieces `S_k`,
//! homogeneous polynomials with integer coefficients, and the text parser.
//!
//! Polynomials are kept over the integers. They are only reduced modulo a
//! working prime when a matrix is assembled, so one parsed curve can be
//! analyzed over several primes.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use rand::Rng;

use crate::field::PrimeField;
use crate::Error;

/// `dim S_k = binomial(k + 2, 2)`, zero for negative `k`.
pub fn graded_dim(k: i64) -> usize {
    if k < 0 {
        0
    } else {
        let k = k as usize;
        (k + 2) * (k + 1) / 2
    }
}

/// Exponent triple `x^a y^b z^c`.
///
/// The derived ordering is lexicographic on `(a, b, c)`; inside a graded
/// piece it agrees with [`Monomial::index`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(pub [u32; 3]);

impl Monomial {
    pub const ONE: Monomial = Monomial([0, 0, 0]);

    pub fn new(a: u32, b: u32, c: u32) -> Self {
        Monomial([a, b, c])
    }

    /// The variable `x`, `y` or `z` for `var` = 0, 1, 2.
    pub fn var(var: usize) -> Self {
        let mut e = [0; 3];
        e[var] = 1;
        Monomial(e)
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        Monomial([
            self.0[0] + other.0[0],
            self.0[1] + other.0[1],
            self.0[2] + other.0[2],
        ])
    }

    /// Position of this monomial in the lexicographically ordered basis of
    /// `S_degree`.
    #[inline]
    pub fn index(&self) -> usize {
        let k = self.degree() as usize;
        let a = self.0[0] as usize;
        let b = self.0[1] as usize;
        a * (k + 1) - a * a.saturating_sub(1) / 2 + b
    }

    /// Inverse of [`Monomial::index`] in degree `k`.
    pub fn from_index(k: u32, mut idx: usize) -> Monomial {
        assert!(idx < graded_dim(i64::from(k)), "index {idx} out of range for degree {k}");
        for a in 0..=k {
            let block = (k - a + 1) as usize;
            if idx < block {
                let b = idx as u32;
                return Monomial([a, b, k - a - b]);
            }
            idx -= block;
        }
        unreachable!()
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (e, name) in self.0.iter().zip(["x", "y", "z"]) {
            if *e == 0 {
                continue;
            }
            if !first {
                f.write_str("*")?;
            }
            first = false;
            if *e == 1 {
                f.write_str(name)?;
            } else {
                write!(f, "{name}^{e}")?;
            }
        }
        if first {
            f.write_str("1")?;
        }
        Ok(())
    }
}

/// All monomials of degree `k`, in index order.
pub fn monomial_basis(k: u32) -> Vec<Monomial> {
    let mut out = Vec::with_capacity(graded_dim(i64::from(k)));
    for a in 0..=k {
        for b in 0..=(k - a) {
            out.push(Monomial([a, b, k - a - b]));
        }
    }
    out
}

/// Homogeneous polynomial with integer coefficients.
///
/// Zero coefficients are never stored; the zero polynomial keeps its declared
/// degree.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct HomogPoly {
    degree: u32,
    terms: BTreeMap<Monomial, BigInt>,
}

impl HomogPoly {
    pub fn zero(degree: u32) -> Self {
        Self {
            degree,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(coeff: impl Into<BigInt>, m: Monomial) -> Self {
        let mut p = Self::zero(m.degree());
        p.add_term(m, coeff.into());
        p
    }

    /// `a x + b y + c z`.
    pub fn linear_form(a: i64, b: i64, c: i64) -> Self {
        let mut p = Self::zero(1);
        p.add_term(Monomial::var(0), a.into());
        p.add_term(Monomial::var(1), b.into());
        p.add_term(Monomial::var(2), c.into());
        p
    }

    /// Builds a polynomial from terms, all of which must have degree `degree`.
    pub fn from_terms<I, C>(degree: u32, terms: I) -> Result<Self, Error>
    where
        I: IntoIterator<Item = (Monomial, C)>,
        C: Into<BigInt>,
    {
        let mut p = Self::zero(degree);
        for (m, c) in terms {
            if m.degree() != degree {
                return Err(Error::NonHomogeneous {
                    first: degree,
                    second: m.degree(),
                });
            }
            p.add_term(m, c.into());
        }
        Ok(p)
    }

    fn add_term(&mut self, m: Monomial, c: BigInt) {
        debug_assert_eq!(m.degree(), self.degree);
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(m).or_insert_with(BigInt::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigInt {
        self.terms.get(m).cloned().unwrap_or_default()
    }

    /// Terms in monomial index order.
    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &BigInt)> {
        self.terms.iter()
    }

    pub fn add(&self, other: &HomogPoly) -> Result<HomogPoly, Error> {
        if self.degree != other.degree {
            return Err(Error::DegreeMismatch {
                left: self.degree,
                right: other.degree,
            });
        }
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn neg(&self) -> HomogPoly {
        HomogPoly {
            degree: self.degree,
            terms: self.terms.iter().map(|(m, c)| (*m, -c)).collect(),
        }
    }

    pub fn sub(&self, other: &HomogPoly) -> Result<HomogPoly, Error> {
        self.add(&other.neg())
    }

    pub fn scale(&self, s: &BigInt) -> HomogPoly {
        let mut out = Self::zero(self.degree);
        for (m, c) in &self.terms {
            out.add_term(*m, c * s);
        }
        out
    }

    pub fn multiply(&self, other: &HomogPoly) -> HomogPoly {
        let mut out = Self::zero(self.degree + other.degree);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(m1.mul(m2), c1 * c2);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> HomogPoly {
        let mut acc = HomogPoly::monomial(1, Monomial::ONE);
        for _ in 0..e {
            acc = acc.multiply(self);
        }
        acc
    }

    /// Partial derivative with respect to variable `var` (0 = x, 1 = y, 2 = z).
    pub fn derivative(&self, var: usize) -> Result<HomogPoly, Error> {
        if self.degree == 0 {
            return Err(Error::InvalidInput(
                "cannot differentiate a polynomial of degree 0".into(),
            ));
        }
        let mut out = Self::zero(self.degree - 1);
        for (m, c) in &self.terms {
            let e = m.0[var];
            if e == 0 {
                continue;
            }
            let mut dm = *m;
            dm.0[var] -= 1;
            out.add_term(dm, c * BigInt::from(e));
        }
        Ok(out)
    }

    /// `(f_x, f_y, f_z)`.
    pub fn partials(&self) -> Result<[HomogPoly; 3], Error> {
        Ok([self.derivative(0)?, self.derivative(1)?, self.derivative(2)?])
    }

    /// Sparse image modulo `p` as `(index in S_degree, residue)` pairs,
    /// dropping terms that vanish modulo `p`.
    pub fn reduce_mod(&self, field: &PrimeField) -> Vec<(Monomial, u64)> {
        self.terms
            .iter()
            .map(|(m, c)| (*m, field.from_bigint(c)))
            .filter(|(_, c)| *c != 0)
            .collect()
    }

    /// Evaluates at a point of `F_p^3`.
    pub fn eval_mod(&self, field: &PrimeField, point: [u64; 3]) -> u64 {
        self.reduce_mod(field).into_iter().fold(0, |acc, (m, c)| {
            let v = (0..3).fold(c, |v, i| field.mul(v, field.pow(point[i], u64::from(m.0[i]))));
            field.add(acc, v)
        })
    }

    /// Restriction to the line `t -> p + t q`, as a univariate polynomial
    /// (low degree first) over `F_p`.
    fn restrict_to_line(&self, field: &PrimeField, p: [u64; 3], q: [u64; 3]) -> Vec<u64> {
        let d = self.degree as usize;
        // powers[i][e] = (p_i + t q_i)^e
        let powers: Vec<Vec<Vec<u64>>> = (0..3)
            .map(|i| {
                let lin = vec![p[i], q[i]];
                let mut acc = vec![vec![1u64]];
                for e in 1..=d {
                    let next = upoly_mul(field, &acc[e - 1], &lin);
                    acc.push(next);
                }
                acc
            })
            .collect();
        let mut out = vec![0u64; d + 1];
        for (m, c) in self.reduce_mod(field) {
            let t = upoly_mul(
                field,
                &upoly_mul(field, &powers[0][m.0[0] as usize], &powers[1][m.0[1] as usize]),
                &powers[2][m.0[2] as usize],
            );
            for (i, v) in t.iter().enumerate() {
                out[i] = field.mul_add(out[i], c, *v);
            }
        }
        out
    }
}

fn upoly_trim(mut a: Vec<u64>) -> Vec<u64> {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

fn upoly_mul(field: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = field.mul_add(out[i + j], x, y);
        }
    }
    out
}

fn upoly_rem(field: &PrimeField, a: &[u64], b: &[u64]) -> Vec<u64> {
    let b = upoly_trim(b.to_vec());
    let mut r = upoly_trim(a.to_vec());
    let lead_inv = field.inv(*b.last().expect("division by zero polynomial"));
    while r.len() >= b.len() {
        let shift = r.len() - b.len();
        let factor = field.neg(field.mul(*r.last().unwrap(), lead_inv));
        for (i, &bv) in b.iter().enumerate() {
            r[shift + i] = field.mul_add(r[shift + i], factor, bv);
        }
        r = upoly_trim(r);
    }
    r
}

fn upoly_gcd_degree(field: &PrimeField, a: &[u64], b: &[u64]) -> usize {
    let mut a = upoly_trim(a.to_vec());
    let mut b = upoly_trim(b.to_vec());
    while !b.is_empty() {
        let r = upoly_rem(field, &a, &b);
        a = b;
        b = r;
    }
    a.len().saturating_sub(1)
}

/// Probabilistic reducedness test.
///
/// Restricts `f` to random lines; a reduced curve meets a generic line in
/// `deg f` distinct points, so a repeated root on a full-degree restriction
/// proves `f` has a repeated factor. Restrictions that drop degree are
/// redrawn.
pub fn reduced_check<R: Rng + ?Sized>(
    f: &HomogPoly,
    trials: usize,
    field: &PrimeField,
    rng: &mut R,
) -> bool {
    let d = f.degree() as usize;
    if d <= 1 {
        return !f.is_zero();
    }
    let p = field.modulus();
    let mut done = 0;
    let mut attempts = 0;
    while done < trials && attempts < 20 * trials.max(1) {
        attempts += 1;
        let a = [rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p)];
        let b = [rng.gen_range(0..p), rng.gen_range(0..p), rng.gen_range(0..p)];
        let g = upoly_trim(f.restrict_to_line(field, a, b));
        if g.len() != d + 1 {
            continue;
        }
        let dg: Vec<u64> = g
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| field.mul(c, i as u64 % p))
            .collect();
        if upoly_gcd_degree(field, &g, &dg) > 0 {
            return false;
        }
        done += 1;
    }
    true
}

impl fmt::Display for HomogPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let abs = c.abs();
            if *m == Monomial::ONE {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{m}")?;
            } else {
                write!(f, "{abs}*{m}")?;
            }
        }
        Ok(())
    }
}

impl std::str::FromStr for HomogPoly {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_poly(s)
    }
}

/// Position-annotated syntax error.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("syntax error at byte {offset}: {message}")]
pub struct ParseError {
    pub offset: usize,
    pub message: String,
}

type Sparse = BTreeMap<Monomial, BigInt>;

fn sparse_add(acc: &mut Sparse, m: Monomial, c: BigInt) {
    let e = acc.entry(m).or_insert_with(BigInt::zero);
    *e += c;
    if e.is_zero() {
        acc.remove(&m);
    }
}

fn sparse_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (m1, c1) in a {
        for (m2, c2) in b {
            sparse_add(&mut out, m1.mul(m2), c1 * c2);
        }
    }
    out
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn err(&self, message: impl Into<String>) -> ParseError {
        ParseError {
            offset: self.pos,
            message: message.into(),
        }
    }

    fn uint(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an unsigned integer"));
        }
        let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
        Ok(text.parse().expect("ascii digits parse"))
    }

    fn expr(&mut self) -> Result<Sparse, ParseError> {
        let mut acc = Sparse::new();
        let mut sign = BigInt::one();
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -sign;
        }
        loop {
            let term = self.term()?;
            for (m, c) in term {
                sparse_add(&mut acc, m, c * &sign);
            }
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = BigInt::one();
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -BigInt::one();
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Sparse, ParseError> {
        let start = self.pos;
        let mut acc = Sparse::new();
        let mut seen = false;
        if matches!(self.peek(), Some(c) if c.is_ascii_digit()) {
            acc.insert(Monomial::ONE, self.uint()?);
            seen = true;
        } else {
            acc.insert(Monomial::ONE, BigInt::one());
        }
        loop {
            match self.peek() {
                Some(b'*') => {
                    if !seen {
                        return Err(self.err("unexpected '*'"));
                    }
                    self.pos += 1;
                    match self.peek() {
                        Some(b'x' | b'y' | b'z' | b'(') => {}
                        _ => return Err(self.err("expected a variable or '(' after '*'")),
                    }
                }
                Some(b'x' | b'y' | b'z' | b'(') => {}
                _ => break,
            }
            let factor = self.factor()?;
            acc = sparse_mul(&acc, &factor);
            seen = true;
        }
        if !seen {
            self.pos = start;
            self.skip_ws();
            return Err(self.err("expected a term"));
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Sparse, ParseError> {
        match self.peek() {
            Some(c @ (b'x' | b'y' | b'z')) => {
                self.pos += 1;
                let var = (c - b'x') as usize;
                let mut exp = 1u32;
                if self.peek() == Some(b'^') {
                    self.pos += 1;
                    let at = self.pos;
                    let e = self.uint()?;
                    exp = u32::try_from(&e)
                        .ok()
                        .filter(|&e| e <= 10_000)
                        .ok_or(ParseError {
                            offset: at,
                            message: format!("exponent {e} too large"),
                        })?;
                }
                let mut m = Monomial::ONE;
                m.0[var] = exp;
                Ok(Sparse::from([(m, BigInt::one())]))
            }
            Some(b'(') => {
                self.pos += 1;
                let inner = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.pos += 1;
                Ok(inner)
            }
            _ => Err(self.err("expected a variable or '('")),
        }
    }
}

/// Parses a homogeneous polynomial in `x, y, z` with integer coefficients.
///
/// ```text
/// expr   := ['-'] term (('+'|'-') term)*
/// term   := coeff? ('*'? factor)*
/// factor := ('x'|'y'|'z') ('^' uint)? | '(' expr ')'
/// coeff  := uint
/// ```
pub fn parse_poly(text: &str) -> Result<HomogPoly, Error> {
    let mut parser = Parser {
        src: text.as_bytes(),
        pos: 0,
    };
    let sparse = parser.expr()?;
    if parser.peek().is_some() {
        return Err(parser.err("unexpected character").into());
    }
    let mut iter = sparse.iter();
    let Some((first, _)) = iter.next() else {
        return Err(Error::ZeroPolynomial);
    };
    let degree = first.degree();
    if let Some((m, _)) = iter.find(|(m, _)| m.degree() != degree) {
        return Err(Error::NonHomogeneous {
            first: degree,
            second: m.degree(),
        });
    }
    Ok(HomogPoly {
        degree,
        terms: sparse,
    })
}
