//! Exact arithmetic for matrix entries.
//!
//! Entries are finite sums of monomials `z * a^e1 * b^e2 * ...` where `z` is a
//! Gaussian integer and `a`..`f` are symbolic parameters of modulus 1.  Because
//! every parameter is unimodular, its conjugate equals its inverse, so a
//! negative exponent encodes the conjugate and the monomials form a group under
//! multiplication.  Expressions are kept in a canonical sorted form, which makes
//! structural equality decide algebraic equality.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num::complex::Complex64;

use crate::error::{Error, Result};

/// Number of symbolic parameter names supported (`a` through `f`).
pub const PARAM_COUNT: usize = 6;

/// Modulus slack accepted when checking that an assigned value is unimodular.
pub const UNIMODULAR_TOL: f64 = 1e-12;

/// A symbolic parameter name, one of `a`..`f`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Param(u8);

impl Param {
    pub const A: Param = Param(0);
    pub const B: Param = Param(1);
    pub const C: Param = Param(2);
    pub const D: Param = Param(3);
    pub const E: Param = Param(4);
    pub const F: Param = Param(5);

    pub fn from_char(c: char) -> Result<Param> {
        if ('a'..='f').contains(&c) {
            Ok(Param(c as u8 - b'a'))
        } else {
            Err(Error::BadParamName(c.to_string()))
        }
    }

    pub fn as_char(self) -> char {
        (b'a' + self.0) as char
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = Param> {
        (0..PARAM_COUNT as u8).map(Param)
    }
}

/// A Gaussian integer `re + im*i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct GaussianInt {
    pub re: i64,
    pub im: i64,
}

impl GaussianInt {
    pub const ZERO: GaussianInt = GaussianInt { re: 0, im: 0 };
    pub const ONE: GaussianInt = GaussianInt { re: 1, im: 0 };
    pub const I: GaussianInt = GaussianInt { re: 0, im: 1 };

    pub fn new(re: i64, im: i64) -> GaussianInt {
        GaussianInt { re, im }
    }

    /// `re^2 + im^2`, always non-negative.
    pub fn norm(self) -> i64 {
        self.re * self.re + self.im * self.im
    }

    pub fn conj(self) -> GaussianInt {
        GaussianInt::new(self.re, -self.im)
    }

    pub fn is_zero(self) -> bool {
        self.re == 0 && self.im == 0
    }

    /// True for the four units 1, -1, i, -i.
    pub fn is_unit(self) -> bool {
        self.norm() == 1
    }

    pub fn to_complex(self) -> Complex64 {
        Complex64::new(self.re as f64, self.im as f64)
    }
}

impl Add for GaussianInt {
    type Output = GaussianInt;
    fn add(self, rhs: GaussianInt) -> GaussianInt {
        GaussianInt::new(self.re + rhs.re, self.im + rhs.im)
    }
}

impl Sub for GaussianInt {
    type Output = GaussianInt;
    fn sub(self, rhs: GaussianInt) -> GaussianInt {
        GaussianInt::new(self.re - rhs.re, self.im - rhs.im)
    }
}

impl Mul for GaussianInt {
    type Output = GaussianInt;
    fn mul(self, rhs: GaussianInt) -> GaussianInt {
        GaussianInt::new(
            self.re * rhs.re - self.im * rhs.im,
            self.re * rhs.im + self.im * rhs.re,
        )
    }
}

impl Neg for GaussianInt {
    type Output = GaussianInt;
    fn neg(self) -> GaussianInt {
        GaussianInt::new(-self.re, -self.im)
    }
}

impl From<i64> for GaussianInt {
    fn from(n: i64) -> GaussianInt {
        GaussianInt::new(n, 0)
    }
}

/// Exponent vector over the six parameter slots.
type ExpVec = [i16; PARAM_COUNT];

const EXP_ZERO: ExpVec = [0; PARAM_COUNT];

/// One monomial: a Gaussian-integer coefficient times a product of parameter
/// powers.  Negative exponents denote conjugates.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SymMonomial {
    pub coeff: GaussianInt,
    exps: ExpVec,
}

impl SymMonomial {
    fn constant(coeff: GaussianInt) -> SymMonomial {
        SymMonomial { coeff, exps: EXP_ZERO }
    }

    pub fn exponent(&self, p: Param) -> i32 {
        self.exps[p.index()] as i32
    }

    /// Parameters occurring with nonzero exponent, in name order.
    pub fn params(&self) -> impl Iterator<Item = (Param, i32)> + '_ {
        Param::all().filter_map(move |p| {
            let e = self.exponent(p);
            (e != 0).then_some((p, e))
        })
    }

    pub fn is_constant(&self) -> bool {
        self.exps == EXP_ZERO
    }

    fn conj(&self) -> SymMonomial {
        let mut exps = self.exps;
        for e in exps.iter_mut() {
            *e = -*e;
        }
        SymMonomial { coeff: self.coeff.conj(), exps }
    }

    fn mul(&self, rhs: &SymMonomial) -> SymMonomial {
        let mut exps = self.exps;
        for (e, r) in exps.iter_mut().zip(rhs.exps.iter()) {
            *e += r;
        }
        SymMonomial { coeff: self.coeff * rhs.coeff, exps }
    }
}

/// Lexicographic order on the sparse (parameter, exponent) sequences, so a
/// constant sorts first, `a` before `b`, and `conj(a)` before `a`.
fn cmp_exps(a: &ExpVec, b: &ExpVec) -> std::cmp::Ordering {
    use std::cmp::Ordering;
    let (mut i, mut j) = (0, 0);
    loop {
        while i < PARAM_COUNT && a[i] == 0 {
            i += 1;
        }
        while j < PARAM_COUNT && b[j] == 0 {
            j += 1;
        }
        match (i < PARAM_COUNT, j < PARAM_COUNT) {
            (false, false) => return Ordering::Equal,
            (false, true) => return Ordering::Less,
            (true, false) => return Ordering::Greater,
            (true, true) => {
                if i != j {
                    return i.cmp(&j);
                }
                if a[i] != b[i] {
                    return a[i].cmp(&b[i]);
                }
                i += 1;
                j += 1;
            }
        }
    }
}

/// A canonical sum of monomials with pairwise distinct exponent vectors,
/// sorted by [`cmp_exps`].  Zero is the empty sum.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct SymExpr {
    terms: Vec<SymMonomial>,
}

impl SymExpr {
    pub fn zero() -> SymExpr {
        SymExpr { terms: Vec::new() }
    }

    pub fn one() -> SymExpr {
        SymExpr::from_gaussian(GaussianInt::ONE)
    }

    pub fn i() -> SymExpr {
        SymExpr::from_gaussian(GaussianInt::I)
    }

    pub fn from_int(n: i64) -> SymExpr {
        SymExpr::from_gaussian(GaussianInt::new(n, 0))
    }

    pub fn from_gaussian(z: GaussianInt) -> SymExpr {
        if z.is_zero() {
            SymExpr::zero()
        } else {
            SymExpr { terms: vec![SymMonomial::constant(z)] }
        }
    }

    pub fn param(p: Param) -> SymExpr {
        SymExpr::param_pow(p, 1)
    }

    /// `p^e`; negative `e` is the conjugate power.
    pub fn param_pow(p: Param, e: i32) -> SymExpr {
        if e == 0 {
            return SymExpr::one();
        }
        let mut exps = EXP_ZERO;
        exps[p.index()] = e as i16;
        SymExpr { terms: vec![SymMonomial { coeff: GaussianInt::ONE, exps }] }
    }

    pub fn terms(&self) -> &[SymMonomial] {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// The constant value, if the expression has no parameter dependence.
    pub fn as_constant(&self) -> Option<GaussianInt> {
        match self.terms.len() {
            0 => Some(GaussianInt::ZERO),
            1 if self.terms[0].is_constant() => Some(self.terms[0].coeff),
            _ => None,
        }
    }

    /// True when the expression is a single monomial whose coefficient is a
    /// unit, i.e. evaluates to a unimodular number at every unimodular
    /// assignment.
    pub fn is_unit_monomial(&self) -> bool {
        self.terms.len() == 1 && self.terms[0].coeff.is_unit()
    }

    /// Bitmask of parameters occurring in the expression.
    pub fn param_mask(&self) -> u8 {
        let mut mask = 0u8;
        for t in &self.terms {
            for (p, _) in t.params() {
                mask |= 1 << p.index();
            }
        }
        mask
    }

    fn canonical(mut terms: Vec<SymMonomial>) -> SymExpr {
        terms.sort_by(|x, y| cmp_exps(&x.exps, &y.exps));
        let mut out: Vec<SymMonomial> = Vec::with_capacity(terms.len());
        for t in terms {
            match out.last_mut() {
                Some(last) if last.exps == t.exps => last.coeff = last.coeff + t.coeff,
                _ => out.push(t),
            }
        }
        out.retain(|t| !t.coeff.is_zero());
        SymExpr { terms: out }
    }

    pub fn conj(&self) -> SymExpr {
        SymExpr::canonical(self.terms.iter().map(SymMonomial::conj).collect())
    }

    /// Replace `p` by an exact Gaussian-integer value.  The value must be a
    /// unit whenever `p` occurs with a negative exponent, since conjugation
    /// is only an inverse on the unit circle.
    pub fn substitute(&self, p: Param, value: GaussianInt) -> Result<SymExpr> {
        let mut terms = Vec::with_capacity(self.terms.len());
        for t in &self.terms {
            let e = t.exponent(p);
            if e != 0 && !value.is_unit() {
                return Err(Error::NonUnimodularValue {
                    param: p.as_char(),
                    modulus: (value.norm() as f64).sqrt(),
                });
            }
            let base = if e >= 0 { value } else { value.conj() };
            let mut coeff = t.coeff;
            for _ in 0..e.unsigned_abs() {
                coeff = coeff * base;
            }
            let mut exps = t.exps;
            exps[p.index()] = 0;
            terms.push(SymMonomial { coeff, exps });
        }
        Ok(SymExpr::canonical(terms))
    }

    /// Evaluate at a unimodular assignment of every parameter occurring in
    /// the expression.
    pub fn eval(&self, assignment: &Assignment) -> Result<Complex64> {
        let mut acc = Complex64::new(0.0, 0.0);
        for t in &self.terms {
            let mut val = t.coeff.to_complex();
            for (p, e) in t.params() {
                let v = assignment.checked_get(p)?;
                val *= v.powi(e);
            }
            acc += val;
        }
        Ok(acc)
    }

    /// Number of terms the grammar formatter emits; a Gaussian coefficient
    /// with both components nonzero prints as two terms.
    pub fn grammar_terms(&self) -> usize {
        self.terms
            .iter()
            .map(|t| (t.coeff.re != 0) as usize + (t.coeff.im != 0) as usize)
            .sum()
    }

    pub fn parse(text: &str) -> Result<SymExpr> {
        Parser::new(text).parse_expr()
    }
}

impl Add for &SymExpr {
    type Output = SymExpr;
    fn add(self, rhs: &SymExpr) -> SymExpr {
        let mut terms = self.terms.clone();
        terms.extend_from_slice(&rhs.terms);
        SymExpr::canonical(terms)
    }
}

impl Sub for &SymExpr {
    type Output = SymExpr;
    fn sub(self, rhs: &SymExpr) -> SymExpr {
        self + &(-rhs)
    }
}

impl Mul for &SymExpr {
    type Output = SymExpr;
    fn mul(self, rhs: &SymExpr) -> SymExpr {
        let mut terms = Vec::with_capacity(self.terms.len() * rhs.terms.len());
        for x in &self.terms {
            for y in &rhs.terms {
                terms.push(x.mul(y));
            }
        }
        SymExpr::canonical(terms)
    }
}

impl Neg for &SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        SymExpr {
            terms: self.terms.iter().map(|t| SymMonomial { coeff: -t.coeff, exps: t.exps }).collect(),
        }
    }
}

macro_rules! forward_owned_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for SymExpr {
            type Output = SymExpr;
            fn $method(self, rhs: SymExpr) -> SymExpr {
                (&self).$method(&rhs)
            }
        }
    };
}
forward_owned_binop!(Add, add);
forward_owned_binop!(Sub, sub);
forward_owned_binop!(Mul, mul);

impl Neg for SymExpr {
    type Output = SymExpr;
    fn neg(self) -> SymExpr {
        -&self
    }
}

/// Values for the symbolic parameters, used by [`SymExpr::eval`].
#[derive(Debug, Clone, Default)]
pub struct Assignment {
    values: [Option<Complex64>; PARAM_COUNT],
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn set(&mut self, p: Param, value: Complex64) -> &mut Assignment {
        self.values[p.index()] = Some(value);
        self
    }

    pub fn with(mut self, p: Param, value: Complex64) -> Assignment {
        self.set(p, value);
        self
    }

    pub fn get(&self, p: Param) -> Option<Complex64> {
        self.values[p.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Param, Complex64)> + '_ {
        Param::all().filter_map(move |p| self.get(p).map(|v| (p, v)))
    }

    fn checked_get(&self, p: Param) -> Result<Complex64> {
        let v = self.get(p).ok_or(Error::MissingParameter(p.as_char()))?;
        if !v.re.is_finite() || !v.im.is_finite() || (v.norm() - 1.0).abs() > UNIMODULAR_TOL {
            return Err(Error::NonUnimodularValue { param: p.as_char(), modulus: v.norm() });
        }
        Ok(v)
    }
}

// ---------------------------------------------------------------------------
// Text format.
//
// expr   := ['-'] term (('+'|'-') term)*
// term   := factor ('*' factor)*
// factor := integer | 'i' | param | 'conj(' param ')'
//
// The formatter emits the same grammar with monomials in canonical order; a
// coefficient with nonzero real and imaginary parts is split into two terms.
// ---------------------------------------------------------------------------

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(text: &'a str) -> Parser<'a> {
        Parser { bytes: text.as_bytes(), pos: 0 }
    }

    fn error(&self, message: impl Into<String>) -> Error {
        Error::Syntax { offset: self.pos, message: message.into() }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        let b = self.peek()?;
        self.pos += 1;
        Some(b)
    }

    fn parse_expr(&mut self) -> Result<SymExpr> {
        let mut negate = false;
        if self.peek() == Some(b'-') {
            self.bump();
            negate = true;
        }
        let mut acc = self.parse_term(negate)?;
        while let Some(b) = self.peek() {
            let negate = match b {
                b'+' => false,
                b'-' => true,
                _ => return Err(self.error(format!("expected '+', '-' or end, found '{}'", b as char))),
            };
            self.bump();
            let term = self.parse_term(negate)?;
            acc = &acc + &term;
        }
        Ok(acc)
    }

    fn parse_term(&mut self, negate: bool) -> Result<SymExpr> {
        let mut acc = self.parse_factor()?;
        while self.peek() == Some(b'*') {
            self.bump();
            let f = self.parse_factor()?;
            acc = &acc * &f;
        }
        Ok(if negate { -acc } else { acc })
    }

    fn parse_factor(&mut self) -> Result<SymExpr> {
        match self.peek() {
            Some(b) if b.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
                let n: i64 = text.parse().map_err(|_| {
                    self.pos = start;
                    self.error(format!("integer '{text}' out of range"))
                })?;
                Ok(SymExpr::from_int(n))
            }
            Some(b'i') => {
                self.bump();
                Ok(SymExpr::i())
            }
            Some(b'c') if self.rest_starts_with(b"conj(") => {
                self.pos += 5;
                let p = self.parse_param()?;
                if self.bump() != Some(b')') {
                    return Err(self.error("expected ')' after conj(<param>"));
                }
                Ok(SymExpr::param_pow(p, -1))
            }
            Some(b) if (b'a'..=b'f').contains(&b) => {
                self.bump();
                Ok(SymExpr::param(Param::from_char(b as char).unwrap()))
            }
            Some(b) => Err(self.error(format!("unexpected character '{}'", b as char))),
            None => Err(self.error("unexpected end of input")),
        }
    }

    fn rest_starts_with(&mut self, prefix: &[u8]) -> bool {
        self.skip_ws();
        self.bytes[self.pos..].starts_with(prefix)
    }

    fn parse_param(&mut self) -> Result<Param> {
        match self.bump() {
            Some(b) if (b'a'..=b'f').contains(&b) => Ok(Param::from_char(b as char).unwrap()),
            Some(b) => Err(self.error(format!("expected a parameter a-f, found '{}'", b as char))),
            None => Err(self.error("expected a parameter a-f")),
        }
    }
}

impl FromStr for SymExpr {
    type Err = Error;
    fn from_str(s: &str) -> Result<SymExpr> {
        SymExpr::parse(s)
    }
}

/// One grammar term: sign, integer magnitude, whether an `i` factor is
/// present, and the exponent vector.
fn push_grammar_term(out: &mut String, first: bool, mag: i64, imag: bool, exps: &ExpVec) {
    debug_assert!(mag != 0);
    if mag < 0 {
        out.push('-');
    } else if !first {
        out.push('+');
    }
    let mut factors: Vec<String> = Vec::new();
    let abs = mag.unsigned_abs();
    if abs != 1 {
        factors.push(abs.to_string());
    }
    if imag {
        factors.push("i".to_string());
    }
    for p in Param::all() {
        let e = exps[p.index()];
        for _ in 0..e.unsigned_abs() {
            if e > 0 {
                factors.push(p.as_char().to_string());
            } else {
                factors.push(format!("conj({})", p.as_char()));
            }
        }
    }
    if factors.is_empty() {
        factors.push("1".to_string());
    }
    out.push_str(&factors.join("*"));
}

impl fmt::Display for SymExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        let mut out = String::new();
        let mut first = true;
        for t in &self.terms {
            if t.coeff.re != 0 {
                push_grammar_term(&mut out, first, t.coeff.re, false, &t.exps);
                first = false;
            }
            if t.coeff.im != 0 {
                push_grammar_term(&mut out, first, t.coeff.im, true, &t.exps);
                first = false;
            }
        }
        f.write_str(&out)
    }
}

/// The fixed assignment used to report a numeric residual for a symbolic
/// identity that fails: parameter `t` gets angle `2*pi*frac((t+1)*phi)` with
/// `phi` the golden ratio conjugate, so accidental zeros are unlikely.
pub fn probe_assignment() -> Assignment {
    let mut a = Assignment::new();
    let phi = 0.618_033_988_749_894_9_f64;
    for p in Param::all() {
        let theta = 2.0 * std::f64::consts::PI * ((p.index() as f64 + 1.0) * phi).fract();
        a.set(p, Complex64::from_polar(1.0, theta));
    }
    a
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sym(s: &str) -> SymExpr {
        SymExpr::parse(s).unwrap()
    }

    fn unit(theta: f64) -> Complex64 {
        Complex64::from_polar(1.0, theta)
    }

    #[test]
    fn additive_inverse_cancels() {
        let a = SymExpr::param(Param::A);
        assert!((&a + &(-&a)).is_zero());
    }

    #[test]
    fn distinct_monomials_do_not_merge() {
        let e = &SymExpr::one() + &sym("a*conj(b)");
        assert_eq!(e.terms().len(), 2);
    }

    #[test]
    fn c6_row_two_self_product_is_five() {
        // row [1, 0, -1, b, 1, -b] paired with its own conjugate
        let row = ["1", "0", "-1", "b", "1", "-b"].map(sym);
        let mut acc = SymExpr::zero();
        for entry in &row {
            acc = &acc + &(entry * &entry.conj());
        }
        assert_eq!(acc, SymExpr::from_int(5));

        // independent numeric oracle at 10 random unimodular b
        let mut rng = 0x9e3779b97f4a7c15u64;
        for _ in 0..10 {
            rng = rng.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            let theta = (rng >> 11) as f64 / (1u64 << 53) as f64 * std::f64::consts::TAU;
            let b = unit(theta);
            let vals = [
                Complex64::new(1.0, 0.0),
                Complex64::new(0.0, 0.0),
                Complex64::new(-1.0, 0.0),
                b,
                Complex64::new(1.0, 0.0),
                -b,
            ];
            let num: Complex64 = vals.iter().map(|v| v * v.conj()).sum();
            let asn = Assignment::new().with(Param::B, b);
            assert!((acc.eval(&asn).unwrap() - num).norm() < 1e-12);
        }
    }

    #[test]
    fn unimodularity_relations() {
        let a = SymExpr::param(Param::A);
        assert_eq!(&a * &a.conj(), SymExpr::one());
        let ab = sym("a*conj(b)");
        assert_eq!(&ab * &ab.conj(), SymExpr::one());
        assert_eq!(&SymExpr::i() * &SymExpr::i(), SymExpr::from_int(-1));
    }

    #[test]
    fn conj_is_an_involution() {
        let e = sym("1+2*a*conj(b)-3*i*c");
        assert_eq!(e.conj().conj(), e);
        assert_eq!(sym("a*conj(b)").conj(), sym("conj(a)*b"));
        assert_eq!(SymExpr::i().conj(), sym("-i"));
        assert_eq!(SymExpr::zero().conj(), SymExpr::zero());
    }

    #[test]
    fn eval_basics() {
        let i = Complex64::new(0.0, 1.0);
        let asn = Assignment::new().with(Param::A, i).with(Param::B, i);
        let v = sym("a*conj(b)").eval(&asn).unwrap();
        assert!((v - Complex64::new(1.0, 0.0)).norm() < 1e-15);

        let asn = Assignment::new().with(Param::A, Complex64::new(-1.0, 0.0));
        let v = sym("1+a").eval(&asn).unwrap();
        assert!(v.norm() < 1e-15);

        let theta = std::f64::consts::PI / 5.0;
        let asn = Assignment::new().with(Param::B, unit(theta));
        let v = SymExpr::param(Param::B).eval(&asn).unwrap();
        assert!((v - Complex64::new(theta.cos(), theta.sin())).norm() < 1e-15);
    }

    #[test]
    fn eval_rejects_missing_and_non_unimodular() {
        let e = sym("a");
        assert!(matches!(e.eval(&Assignment::new()), Err(Error::MissingParameter('a'))));
        let asn = Assignment::new().with(Param::A, Complex64::new(2.0, 0.0));
        assert!(matches!(e.eval(&asn), Err(Error::NonUnimodularValue { param: 'a', .. })));
    }

    #[test]
    fn parse_canonical_cases() {
        let e = sym("-a*conj(b)");
        assert_eq!(e.terms().len(), 1);
        assert_eq!(e.terms()[0].coeff, GaussianInt::new(-1, 0));
        assert_eq!(e.terms()[0].exponent(Param::A), 1);
        assert_eq!(e.terms()[0].exponent(Param::B), -1);

        let e = sym("c*conj(d)");
        assert_eq!(e.terms()[0].exponent(Param::C), 1);
        assert_eq!(e.terms()[0].exponent(Param::D), -1);

        // 1+i merges into one Gaussian coefficient but prints as two terms
        let e = sym("1+i");
        assert_eq!(e.as_constant(), Some(GaussianInt::new(1, 1)));
        assert_eq!(e.grammar_terms(), 2);
        assert_eq!(e.to_string(), "1+i");
    }

    #[test]
    fn parse_reports_byte_offsets() {
        match SymExpr::parse("a*$") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 2),
            other => panic!("expected syntax error, got {other:?}"),
        }
        match SymExpr::parse("conj(z)") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 6),
            other => panic!("expected syntax error, got {other:?}"),
        }
        assert!(SymExpr::parse("").is_err());
        assert!(SymExpr::parse("a+").is_err());
    }

    #[test]
    fn format_examples() {
        assert_eq!(sym("-a*conj(b)").to_string(), "-a*conj(b)");
        assert_eq!(SymExpr::zero().to_string(), "0");
        assert_eq!(sym("2*a*a").to_string(), "2*a*a");
        assert_eq!(sym("0-3*i").to_string(), "-3*i");
        assert_eq!(sym("b+a").to_string(), "a+b");
    }

    #[test]
    fn substitute_exact_units() {
        let e = sym("a*conj(b)+2*b");
        let g = e.substitute(Param::B, GaussianInt::I).unwrap();
        assert_eq!(g, sym("-i*a+2*i"));
        // non-unit substitution into a conjugated parameter is refused
        assert!(sym("conj(b)").substitute(Param::B, GaussianInt::new(2, 0)).is_err());
        // but a plain positive power accepts any exact value? no: the contract
        // is uniform, entries stay unimodular monomials
        assert!(sym("b").substitute(Param::B, GaussianInt::new(2, 0)).is_err());
    }

    #[test]
    fn canonicalization_is_idempotent_and_sorted() {
        let e = sym("b*a+a*b+1-1+c");
        let again = SymExpr::canonical(e.terms().to_vec());
        assert_eq!(e, again);
        for w in e.terms().windows(2) {
            assert_eq!(cmp_exps(&w[0].exps, &w[1].exps), std::cmp::Ordering::Less);
        }
    }

    // random SymExpr generator on a seeded LCG, small enough to stay exact
    fn random_expr(state: &mut u64) -> SymExpr {
        let mut next = move |m: u64| {
            *state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (*state >> 33) % m
        };
        let nterms = 1 + next(4);
        let mut e = SymExpr::zero();
        for _ in 0..nterms {
            let coeff = GaussianInt::new(next(9) as i64 - 4, next(9) as i64 - 4);
            let mut m = SymExpr::from_gaussian(coeff);
            for p in [Param::A, Param::B, Param::C] {
                let exp = next(7) as i32 - 3;
                m = &m * &SymExpr::param_pow(p, exp);
            }
            e = &e + &m;
        }
        e
    }

    #[test]
    fn eval_is_a_ring_homomorphism_on_random_samples() {
        let mut state = 42u64;
        let angle = move |s: &mut u64| {
            *s = s.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (*s >> 11) as f64 / (1u64 << 53) as f64 * std::f64::consts::TAU
        };
        for _ in 0..1000 {
            let x = random_expr(&mut state);
            let y = random_expr(&mut state);
            let mut asn = Assignment::new();
            for p in [Param::A, Param::B, Param::C] {
                asn.set(p, unit(angle(&mut state)));
            }
            let (ex, ey) = (x.eval(&asn).unwrap(), y.eval(&asn).unwrap());
            let sum = (&x + &y).eval(&asn).unwrap();
            let prod = (&x * &y).eval(&asn).unwrap();
            assert!((sum - (ex + ey)).norm() <= 1e-10);
            assert!((prod - ex * ey).norm() <= 1e-10);
            let e_conj = x.conj().eval(&asn).unwrap();
            assert!((e_conj - ex.conj()).norm() <= 1e-10);
        }
    }

    #[test]
    fn conj_is_a_ring_anti_automorphism_exactly() {
        let mut state = 7u64;
        for _ in 0..200 {
            let x = random_expr(&mut state);
            let y = random_expr(&mut state);
            assert_eq!((&x + &y).conj(), &x.conj() + &y.conj());
            assert_eq!((&x * &y).conj(), &y.conj() * &x.conj());
            assert_eq!(x.conj().conj(), x);
        }
    }

    #[test]
    fn format_parse_round_trip_on_random_samples() {
        let mut state = 99u64;
        for _ in 0..500 {
            let x = random_expr(&mut state);
            let text = x.to_string();
            let back = SymExpr::parse(&text).unwrap();
            assert_eq!(back, x, "round trip failed for {text}");
        }
    }
}
