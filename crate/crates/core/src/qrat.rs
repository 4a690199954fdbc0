//! Exact arithmetic in the field ℚ(q) of rational functions in one variable.
//!
//! `RatQ` is a reduced fraction of integer polynomials in `q`. Laurent
//! polynomials embed as fractions with monomial denominators, so quantum
//! integers, `q - q^-1` powers and friends all live here with structural
//! equality equal to mathematical equality.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum QratError {
    #[error("quantum integer index must be nonnegative, got {0}")]
    NegativeQint(i64),
    #[error("v-exponent must be positive, got {0}")]
    NonPositiveExponent(i64),
    #[error("binomial arguments out of range: n={0}, m={1}")]
    BadBinomial(i64, i64),
    #[error("pole at q = 1: element is not specializable")]
    PoleAtOne,
    #[error("parse error: {0}")]
    Parse(String),
}

/// Dense integer polynomial in q, lowest degree first, no trailing zeros.
/// The zero polynomial is the empty coefficient vector.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct IntPoly {
    c: Vec<BigInt>,
}

impl IntPoly {
    pub fn zero() -> Self {
        IntPoly { c: Vec::new() }
    }

    pub fn one() -> Self {
        IntPoly { c: vec![BigInt::one()] }
    }

    pub fn from_coeffs(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(|x| x.is_zero()) {
            c.pop();
        }
        IntPoly { c }
    }

    pub fn constant(n: BigInt) -> Self {
        Self::from_coeffs(vec![n])
    }

    pub fn monomial(coeff: BigInt, deg: usize) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); deg + 1];
        c[deg] = coeff;
        IntPoly { c }
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c.len() == 1 && self.c[0].is_one()
    }

    /// Degree; None for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    /// Index of the lowest nonzero coefficient.
    pub fn valuation(&self) -> Option<usize> {
        self.c.iter().position(|x| !x.is_zero())
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.c.get(k).cloned().unwrap_or_else(BigInt::zero)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.c
    }

    pub fn leading(&self) -> Option<&BigInt> {
        self.c.last()
    }

    /// True when the polynomial is c*q^k for a single nonzero c.
    pub fn is_monomial(&self) -> bool {
        !self.is_zero() && self.valuation() == self.degree()
    }

    pub fn neg(&self) -> Self {
        IntPoly { c: self.c.iter().map(|x| -x).collect() }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            c.push(self.coeff(k) + other.coeff(k));
        }
        Self::from_coeffs(c)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let mut c = Vec::with_capacity(n);
        for k in 0..n {
            c.push(self.coeff(k) - other.coeff(k));
        }
        Self::from_coeffs(c)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); self.c.len() + other.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.c.iter().enumerate() {
                if !b.is_zero() {
                    c[i + j] += a * b;
                }
            }
        }
        Self::from_coeffs(c)
    }

    pub fn mul_scalar(&self, s: &BigInt) -> Self {
        if s.is_zero() {
            return Self::zero();
        }
        IntPoly { c: self.c.iter().map(|x| x * s).collect() }
    }

    /// Multiply by q^k.
    pub fn shift_up(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let mut c = vec![BigInt::zero(); k];
        c.extend(self.c.iter().cloned());
        IntPoly { c }
    }

    /// Divide by q^k; requires valuation ≥ k.
    pub fn shift_down(&self, k: usize) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        debug_assert!(self.valuation().unwrap() >= k);
        IntPoly { c: self.c[k..].to_vec() }
    }

    /// gcd of all coefficients, nonnegative; 0 for the zero polynomial.
    pub fn content(&self) -> BigInt {
        let mut g = BigInt::zero();
        for a in &self.c {
            g = num_integer::gcd(g, a.clone());
            if g.is_one() {
                break;
            }
        }
        g
    }

    /// Divide every coefficient by d, which must divide exactly.
    pub fn div_scalar_exact(&self, d: &BigInt) -> Self {
        debug_assert!(!d.is_zero());
        IntPoly {
            c: self
                .c
                .iter()
                .map(|x| {
                    debug_assert!((x % d).is_zero());
                    x / d
                })
                .collect(),
        }
    }

    /// Exact polynomial division: self = q·d with no remainder. Panics when
    /// the division is not exact; callers only divide by known divisors.
    pub fn div_exact(&self, d: &Self) -> Self {
        assert!(!d.is_zero(), "division by zero polynomial");
        if self.is_zero() {
            return Self::zero();
        }
        let (quot, rem) = self.divrem_rational(d);
        assert!(rem.is_zero(), "non-exact polynomial division");
        quot
    }

    /// Long division over ℚ with the invariant that intermediate quotient
    /// coefficients stay integral when the division is exact.
    fn divrem_rational(&self, d: &Self) -> (Self, Self) {
        let dd = d.degree().expect("division by zero polynomial");
        let dl = d.leading().unwrap().clone();
        let mut rem = self.c.clone();
        if rem.len() < dd + 1 {
            return (Self::zero(), self.clone());
        }
        let qlen = rem.len() - dd;
        let mut quot = vec![BigInt::zero(); qlen];
        for k in (0..qlen).rev() {
            let top = rem[k + dd].clone();
            if top.is_zero() {
                continue;
            }
            if (&top % &dl).is_zero() {
                let qc = &top / &dl;
                for (j, dc) in d.c.iter().enumerate() {
                    let v = &rem[k + j] - &qc * dc;
                    rem[k + j] = v;
                }
                quot[k] = qc;
            } else {
                // Non-exact case: signal by returning a nonzero remainder.
                return (Self::zero(), Self::one());
            }
        }
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    fn primitive_part(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let c = self.content();
        let p = self.div_scalar_exact(&c);
        if p.leading().unwrap().is_negative() {
            p.neg()
        } else {
            p
        }
    }

    /// Pseudo-remainder of self by d (both nonzero, deg self ≥ deg d).
    fn pseudo_rem(&self, d: &Self) -> Self {
        let mut r = self.clone();
        let dd = d.degree().unwrap();
        let dl = d.leading().unwrap().clone();
        while let Some(rd) = r.degree() {
            if rd < dd {
                break;
            }
            let rl = r.leading().unwrap().clone();
            let mut c = r.mul_scalar(&dl);
            let sub = d.mul_scalar(&rl).shift_up(rd - dd);
            c = c.sub(&sub);
            r = c;
        }
        r
    }

    /// gcd over ℤ[q]: primitive PRS times the content gcd; result has
    /// positive leading coefficient.
    pub fn gcd(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.normalized_sign();
        }
        if other.is_zero() {
            return self.normalized_sign();
        }
        let cont = num_integer::gcd(self.content(), other.content());
        let mut a = self.primitive_part();
        let mut b = other.primitive_part();
        if a.degree() < b.degree() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.pseudo_rem(&b).primitive_part();
            a = b;
            b = r;
        }
        a.primitive_part().mul_scalar(&cont)
    }

    fn normalized_sign(&self) -> Self {
        match self.leading() {
            Some(l) if l.is_negative() => self.neg(),
            _ => self.clone(),
        }
    }

    pub fn eval_at_one(&self) -> BigInt {
        self.c.iter().sum()
    }

    /// Coefficients of p(1 + t) truncated to t^order.
    pub fn compose_one_plus_t(&self, order: usize) -> Vec<BigInt> {
        // Horner from the top: acc <- acc*(1+t) + c_k, truncated.
        let mut acc = vec![BigInt::zero(); order + 1];
        for k in (0..self.c.len()).rev() {
            let mut next = vec![BigInt::zero(); order + 1];
            for j in 0..=order {
                let mut v = acc[j].clone();
                if j > 0 {
                    v += &acc[j - 1];
                }
                next[j] = v;
            }
            next[0] += &self.c[k];
            acc = next;
        }
        acc
    }
}

impl fmt::Display for IntPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", poly_string(self, 0))
    }
}

/// A reduced fraction num/den of integer polynomials in q.
///
/// Canonical form: gcd(num, den) = 1 over ℤ[q] (including coprime contents),
/// den nonzero with positive leading coefficient; zero is 0/1. Structural
/// equality on the canonical form is field equality.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct RatQ {
    num: IntPoly,
    den: IntPoly,
}

impl RatQ {
    pub fn zero() -> Self {
        RatQ { num: IntPoly::zero(), den: IntPoly::one() }
    }

    pub fn one() -> Self {
        RatQ { num: IntPoly::one(), den: IntPoly::one() }
    }

    pub fn from_int(n: i64) -> Self {
        RatQ { num: IntPoly::constant(BigInt::from(n)), den: IntPoly::one() }
    }

    pub fn from_bigint(n: BigInt) -> Self {
        RatQ { num: IntPoly::constant(n), den: IntPoly::one() }
    }

    pub fn from_rational(r: &BigRational) -> Self {
        Self::new(IntPoly::constant(r.numer().clone()), IntPoly::constant(r.denom().clone()))
    }

    /// q^k for any integer k.
    pub fn q_pow(k: i64) -> Self {
        if k >= 0 {
            RatQ { num: IntPoly::monomial(BigInt::one(), k as usize), den: IntPoly::one() }
        } else {
            RatQ { num: IntPoly::one(), den: IntPoly::monomial(BigInt::one(), (-k) as usize) }
        }
    }

    /// Single Laurent term c·q^k.
    pub fn laurent_term(c: i64, k: i64) -> Self {
        Self::from_int(c).mul(&Self::q_pow(k))
    }

    /// Build from raw numerator/denominator, reducing to canonical form.
    pub fn new(num: IntPoly, den: IntPoly) -> Self {
        assert!(!den.is_zero(), "zero denominator");
        let mut r = RatQ { num, den };
        r.reduce();
        r
    }

    fn reduce(&mut self) {
        if self.num.is_zero() {
            self.den = IntPoly::one();
            return;
        }
        // Shared powers of q come off cheaply before any gcd work.
        let v = self.num.valuation().unwrap().min(self.den.valuation().unwrap());
        if v > 0 {
            self.num = self.num.shift_down(v);
            self.den = self.den.shift_down(v);
        }
        if self.den.is_monomial() {
            // Monomial denominators (the Laurent case) need only content work.
            let cn = self.num.content();
            let cd = self.den.content();
            let g = num_integer::gcd(cn, cd);
            if !g.is_one() {
                self.num = self.num.div_scalar_exact(&g);
                self.den = self.den.div_scalar_exact(&g);
            }
        } else {
            let g = self.num.gcd(&self.den);
            if !g.is_one() {
                self.num = self.num.div_exact(&g);
                self.den = self.den.div_exact(&g);
            }
        }
        if self.den.leading().unwrap().is_negative() {
            self.num = self.num.neg();
            self.den = self.den.neg();
        }
    }

    pub fn numerator(&self) -> &IntPoly {
        &self.num
    }

    pub fn denominator(&self) -> &IntPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// True when the element is a Laurent polynomial in q.
    pub fn is_laurent(&self) -> bool {
        self.den.is_monomial()
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let num = self.num.mul(&other.den).add(&other.num.mul(&self.den));
        let den = self.den.mul(&other.den);
        Self::new(num, den)
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        RatQ { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        Self::new(self.num.mul(&other.num), self.den.mul(&other.den))
    }

    pub fn div(&self, other: &Self) -> Self {
        self.mul(&other.inv())
    }

    pub fn inv(&self) -> Self {
        assert!(!self.is_zero(), "division by zero in RatQ");
        let mut r = RatQ { num: self.den.clone(), den: self.num.clone() };
        if r.den.leading().unwrap().is_negative() {
            r.num = r.num.neg();
            r.den = r.den.neg();
        }
        r
    }

    pub fn pow(&self, k: i64) -> Self {
        if k == 0 {
            return Self::one();
        }
        let base = if k < 0 { self.inv() } else { self.clone() };
        let mut out = Self::one();
        for _ in 0..k.unsigned_abs() {
            out = out.mul(&base);
        }
        out
    }

    /// q^d − q^{-d}, the γ-value attached to a simple root of length 2d.
    pub fn q_minus_q_inv(d: i64) -> Self {
        Self::q_pow(d).sub(&Self::q_pow(-d))
    }

    /// Quantum integer [n]_{q^d} = (q^{dn} − q^{−dn})/(q^d − q^{−d}).
    pub fn qint(n: i64, d: i64) -> Result<Self, QratError> {
        if n < 0 {
            return Err(QratError::NegativeQint(n));
        }
        if d <= 0 {
            return Err(QratError::NonPositiveExponent(d));
        }
        let mut out = Self::zero();
        for j in 0..n {
            out = out.add(&Self::q_pow(d * (n - 1 - 2 * j)));
        }
        Ok(out)
    }

    /// Quantum factorial [n]_{q^d}!.
    pub fn qfact(n: i64, d: i64) -> Result<Self, QratError> {
        if n < 0 {
            return Err(QratError::NegativeQint(n));
        }
        let mut out = Self::one();
        for k in 1..=n {
            out = out.mul(&Self::qint(k, d)?);
        }
        Ok(out)
    }

    /// Quantum binomial [n choose m]_{q^d}; always a Laurent polynomial.
    pub fn qbinom(n: i64, m: i64, d: i64) -> Result<Self, QratError> {
        if m < 0 || m > n {
            return Err(QratError::BadBinomial(n, m));
        }
        let num = Self::qfact(n, d)?;
        let den = Self::qfact(m, d)?.mul(&Self::qfact(n - m, d)?);
        Ok(num.div(&den))
    }

    /// True when the element has no pole at q = 1.
    pub fn specializable(&self) -> bool {
        !self.den.eval_at_one().is_zero()
    }

    /// Coefficients a_0..a_order of f(1+t) = Σ a_k t^k around t = q − 1 = 0.
    ///
    /// a_0 is the specialization at q = 1; a_1 the first t-derivative there.
    /// Reduced form makes the pole test exact: a pole exists iff (q−1)
    /// divides the denominator.
    pub fn taylor_at_1(&self, order: usize) -> Result<Vec<BigRational>, QratError> {
        let d1 = self.den.eval_at_one();
        if d1.is_zero() {
            return Err(QratError::PoleAtOne);
        }
        let a = self.num.compose_one_plus_t(order);
        let b = self.den.compose_one_plus_t(order);
        // Invert the denominator series over ℚ, then multiply truncated.
        let b0 = BigRational::from(b[0].clone());
        let mut inv = vec![BigRational::zero(); order + 1];
        inv[0] = BigRational::one() / b0.clone();
        for k in 1..=order {
            let mut s = BigRational::zero();
            for j in 1..=k {
                s += BigRational::from(b[j].clone()) * &inv[k - j];
            }
            inv[k] = -s / b0.clone();
        }
        let mut out = vec![BigRational::zero(); order + 1];
        for k in 0..=order {
            let mut s = BigRational::zero();
            for j in 0..=k {
                s += BigRational::from(a[j].clone()) * &inv[k - j];
            }
            out[k] = s;
        }
        Ok(out)
    }

    /// Specialization at q = 1 as an exact rational.
    pub fn eval_at_one(&self) -> Result<BigRational, QratError> {
        let d1 = self.den.eval_at_one();
        if d1.is_zero() {
            return Err(QratError::PoleAtOne);
        }
        Ok(BigRational::new(self.num.eval_at_one(), d1))
    }

    /// Laurent terms (exponent, rational coefficient), decreasing exponent.
    /// None when the denominator is not a monomial.
    pub fn laurent_terms(&self) -> Option<Vec<(i64, BigRational)>> {
        if !self.is_laurent() {
            return None;
        }
        if self.is_zero() {
            return Some(Vec::new());
        }
        let k = self.den.degree().unwrap() as i64;
        let dc = self.den.leading().unwrap().clone();
        let mut out = Vec::new();
        for (i, c) in self.num.coeffs().iter().enumerate().rev() {
            if !c.is_zero() {
                out.push((i as i64 - k, BigRational::new(c.clone(), dc.clone())));
            }
        }
        Some(out)
    }

    pub fn num_poly_string(&self) -> String {
        poly_string(&self.num, 0)
    }

    pub fn den_poly_string(&self) -> String {
        poly_string(&self.den, 0)
    }

    pub fn from_poly_strings(num: &str, den: &str) -> Result<Self, QratError> {
        let n: RatQ = num.parse()?;
        let d: RatQ = den.parse()?;
        if d.is_zero() {
            return Err(QratError::Parse("zero denominator".into()));
        }
        Ok(n.div(&d))
    }
}

/// Print an integer polynomial shifted down by q^shift as a Laurent string.
fn poly_string(p: &IntPoly, shift: i64) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut s = String::new();
    let mut first = true;
    for (i, c) in p.coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let e = i as i64 - shift;
        let neg = c.is_negative();
        let abs = c.abs();
        if first {
            if neg {
                s.push('-');
            }
            first = false;
        } else {
            s.push_str(if neg { " - " } else { " + " });
        }
        let unit = abs.is_one();
        if e == 0 {
            s.push_str(&abs.to_string());
        } else {
            if !unit {
                s.push_str(&abs.to_string());
                s.push('*');
            }
            if e == 1 {
                s.push('q');
            } else {
                s.push_str(&format!("q^{}", e));
            }
        }
    }
    s
}

fn rational_term_string(c: &BigRational, e: i64, first: bool) -> String {
    let mut s = String::new();
    let neg = c.is_negative();
    let abs = if neg { -c.clone() } else { c.clone() };
    if first {
        if neg {
            s.push('-');
        }
    } else {
        s.push_str(if neg { " - " } else { " + " });
    }
    let coeff_str = if abs.denom().is_one() {
        abs.numer().to_string()
    } else {
        format!("{}/{}", abs.numer(), abs.denom())
    };
    let unit = abs.is_one();
    if e == 0 {
        s.push_str(&coeff_str);
    } else {
        if !unit {
            s.push_str(&coeff_str);
            s.push('*');
        }
        if e == 1 {
            s.push('q');
        } else {
            s.push_str(&format!("q^{}", e));
        }
    }
    s
}

impl fmt::Display for RatQ {
    /// Sparse Laurent notation like `2*q^3 - q^-1 + 5`, decreasing exponent;
    /// genuine fractions print as `(num)/(den)`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        match self.laurent_terms() {
            Some(terms) => {
                let mut s = String::new();
                for (idx, (e, c)) in terms.iter().enumerate() {
                    s.push_str(&rational_term_string(c, *e, idx == 0));
                }
                write!(f, "{}", s)
            }
            None => write!(f, "({})/({})", poly_string(&self.num, 0), poly_string(&self.den, 0)),
        }
    }
}

// ---------------------------------------------------------------------------
// Parsing
// ---------------------------------------------------------------------------

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn new(s: &'a str) -> Self {
        Lexer { s: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn bump(&mut self) -> Option<u8> {
        self.skip_ws();
        let c = self.s.get(self.pos).copied();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn integer(&mut self) -> Result<BigInt, QratError> {
        self.skip_ws();
        let start = self.pos;
        if self.peek() == Some(b'-') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        txt.parse::<BigInt>().map_err(|_| QratError::Parse(format!("expected integer at byte {}", start)))
    }
}

/// One Laurent sum: term (± term)*.
fn parse_laurent(lx: &mut Lexer) -> Result<RatQ, QratError> {
    let mut acc = RatQ::zero();
    let mut sign = 1i64;
    match lx.peek() {
        Some(b'-') => {
            lx.bump();
            sign = -1;
        }
        Some(b'+') => {
            lx.bump();
        }
        _ => {}
    }
    loop {
        let term = parse_term(lx)?;
        let term = if sign < 0 { term.neg() } else { term };
        acc = acc.add(&term);
        match lx.peek() {
            Some(b'+') => {
                lx.bump();
                sign = 1;
            }
            Some(b'-') => {
                lx.bump();
                sign = -1;
            }
            _ => break,
        }
    }
    Ok(acc)
}

/// coeff, coeff*q^e, q^e, q, with coeff = int or int/int.
fn parse_term(lx: &mut Lexer) -> Result<RatQ, QratError> {
    let mut coeff = BigRational::one();
    let mut saw_coeff = false;
    if matches!(lx.peek(), Some(c) if c.is_ascii_digit()) {
        let n = lx.integer()?;
        let mut c = BigRational::from(n);
        if lx.peek() == Some(b'/') {
            lx.bump();
            let d = lx.integer()?;
            if d.is_zero() {
                return Err(QratError::Parse("zero denominator in coefficient".into()));
            }
            c /= BigRational::from(d);
        }
        coeff = c;
        saw_coeff = true;
    }
    let mut exp = 0i64;
    let mut saw_q = false;
    if lx.peek() == Some(b'*') {
        lx.bump();
    }
    if lx.peek() == Some(b'q') {
        lx.bump();
        saw_q = true;
        exp = 1;
        if lx.peek() == Some(b'^') {
            lx.bump();
            let e = lx.integer()?;
            exp = i64::try_from(&e).map_err(|_| QratError::Parse("exponent out of range".into()))?;
        }
    }
    if !saw_coeff && !saw_q {
        return Err(QratError::Parse(format!("expected term at byte {}", lx.pos)));
    }
    Ok(RatQ::from_rational(&coeff).mul(&RatQ::q_pow(exp)))
}

impl FromStr for RatQ {
    type Err = QratError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let mut lx = Lexer::new(s.trim());
        let out = if lx.peek() == Some(b'(') {
            lx.bump();
            let num = parse_laurent(&mut lx)?;
            if lx.bump() != Some(b')') {
                return Err(QratError::Parse("expected ')'".into()));
            }
            if lx.bump() != Some(b'/') {
                return Err(QratError::Parse("expected '/'".into()));
            }
            if lx.bump() != Some(b'(') {
                return Err(QratError::Parse("expected '('".into()));
            }
            let den = parse_laurent(&mut lx)?;
            if lx.bump() != Some(b')') {
                return Err(QratError::Parse("expected ')'".into()));
            }
            if den.is_zero() {
                return Err(QratError::Parse("zero denominator".into()));
            }
            num.div(&den)
        } else {
            parse_laurent(&mut lx)?
        };
        lx.skip_ws();
        if lx.pos != lx.s.len() {
            return Err(QratError::Parse(format!("trailing input at byte {}", lx.pos)));
        }
        Ok(out)
    }
}

impl PartialOrd for RatQ {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Arbitrary but stable total order (used only for deterministic printing).
impl Ord for RatQ {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num.coeffs(), self.den.coeffs()).cmp(&(other.num.coeffs(), other.den.coeffs()))
    }
}
