//! Free associative algebra over `RatQ` on a finite set of weighted
//! generators.
//!
//! Elements are finite linear combinations of words in the generators.
//! Each generator carries a weight in a lattice `Z^L` equipped with a
//! symmetric integer pairing; the pairing drives the twisted adjoint
//! actions and all q-power bookkeeping downstream.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use dashmap::DashMap;
use once_cell::sync::{Lazy, OnceCell};
use thiserror::Error;

use crate::qrat::RatQ;

#[derive(Debug, Error)]
pub enum FreeAlgError {
    #[error("generator weights or pairing have inconsistent dimensions")]
    BadDimensions,
    #[error("pairing matrix is not symmetric")]
    AsymmetricPairing,
    #[error("invalid generator name {0:?}")]
    BadName(String),
    #[error("duplicate generator name {0:?}")]
    DuplicateName(String),
    #[error("unknown generator {0:?}")]
    UnknownGenerator(String),
    #[error("generator index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("element is not homogeneous")]
    Inhomogeneous,
    #[error("generator {0} has odd self-pairing")]
    OddSelfPairing(usize),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Coefficient(#[from] crate::qrat::QratError),
}

/// Finite list of named generators with lattice weights and a symmetric
/// pairing on the weight lattice.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratorSet {
    names: Vec<String>,
    weights: Vec<Vec<i64>>,
    pairing: Vec<Vec<i64>>,
    lattice_rank: usize,
}

fn valid_name(s: &str) -> bool {
    !s.is_empty()
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '\'' || c == '-')
        && s != "1"
}

impl GeneratorSet {
    pub fn new(
        names: Vec<String>,
        weights: Vec<Vec<i64>>,
        pairing: Vec<Vec<i64>>,
    ) -> Result<Arc<Self>, FreeAlgError> {
        let rank = pairing.len();
        if weights.len() != names.len() || pairing.iter().any(|row| row.len() != rank) {
            return Err(FreeAlgError::BadDimensions);
        }
        if weights.iter().any(|w| w.len() != rank) {
            return Err(FreeAlgError::BadDimensions);
        }
        for i in 0..rank {
            for j in 0..i {
                if pairing[i][j] != pairing[j][i] {
                    return Err(FreeAlgError::AsymmetricPairing);
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        for n in &names {
            if !valid_name(n) {
                return Err(FreeAlgError::BadName(n.clone()));
            }
            if !seen.insert(n.clone()) {
                return Err(FreeAlgError::DuplicateName(n.clone()));
            }
        }
        Ok(Arc::new(GeneratorSet { names, weights, pairing, lattice_rank: rank }))
    }

    /// Generators named `E1..En` with the standard-basis weights and the
    /// symmetrized Cartan matrix `DA` as pairing.
    pub fn chevalley(d: &[i64], a: &[Vec<i64>]) -> Result<Arc<Self>, FreeAlgError> {
        let n = d.len();
        if a.len() != n || a.iter().any(|row| row.len() != n) {
            return Err(FreeAlgError::BadDimensions);
        }
        let names = (1..=n).map(|i| format!("E{i}")).collect();
        let weights = (0..n)
            .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
            .collect();
        let pairing = (0..n)
            .map(|i| (0..n).map(|j| d[i] * a[i][j]).collect())
            .collect();
        Self::new(names, weights, pairing)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.names.iter().position(|n| n == name)
    }

    pub fn weight(&self, i: usize) -> &[i64] {
        &self.weights[i]
    }

    pub fn lattice_rank(&self) -> usize {
        self.lattice_rank
    }

    /// Bilinear pairing of two lattice vectors.
    pub fn pair(&self, a: &[i64], b: &[i64]) -> i64 {
        debug_assert_eq!(a.len(), self.lattice_rank);
        debug_assert_eq!(b.len(), self.lattice_rank);
        let mut s = 0i64;
        for (l, al) in a.iter().enumerate() {
            if *al == 0 {
                continue;
            }
            for (m, bm) in b.iter().enumerate() {
                s += al * self.pairing[l][m] * bm;
            }
        }
        s
    }

    pub fn pair_gens(&self, i: usize, j: usize) -> i64 {
        self.pair(&self.weights[i], &self.weights[j])
    }

    /// Half the self-pairing of generator `i`; the q-power base for its
    /// divided powers.
    pub fn sym_d(&self, i: usize) -> Result<i64, FreeAlgError> {
        let p = self.pair_gens(i, i);
        if p % 2 != 0 {
            return Err(FreeAlgError::OddSelfPairing(i));
        }
        Ok(p / 2)
    }

    pub fn word_weight(&self, w: &Word) -> Vec<i64> {
        let mut acc = vec![0i64; self.lattice_rank];
        for &l in w.letters() {
            for (c, wc) in acc.iter_mut().zip(self.weights[l as usize].iter()) {
                *c += wc;
            }
        }
        acc
    }
}

static WORD_INTERN: Lazy<DashMap<Arc<[u32]>, ()>> = Lazy::new(DashMap::new);

fn intern(letters: &[u32]) -> Arc<[u32]> {
    if let Some(entry) = WORD_INTERN.get(letters) {
        return entry.key().clone();
    }
    let arc: Arc<[u32]> = Arc::from(letters);
    WORD_INTERN.entry(arc.clone()).or_insert(());
    arc
}

/// Interned word in generator indices. Ordered by length, then
/// left-to-right by index.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Word(Arc<[u32]>);

impl Word {
    pub fn empty() -> Self {
        Word(intern(&[]))
    }

    pub fn single(i: u32) -> Self {
        Word(intern(&[i]))
    }

    pub fn from_letters(letters: &[u32]) -> Self {
        Word(intern(letters))
    }

    pub fn letters(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn concat(&self, other: &Word) -> Word {
        if self.is_empty() {
            return other.clone();
        }
        if other.is_empty() {
            return self.clone();
        }
        let mut v = Vec::with_capacity(self.len() + other.len());
        v.extend_from_slice(&self.0);
        v.extend_from_slice(&other.0);
        Word(intern(&v))
    }

    /// Copy with the letter at position `p` removed.
    pub fn without(&self, p: usize) -> Word {
        let mut v = self.0.to_vec();
        v.remove(p);
        Word(intern(&v))
    }

    pub fn reversed(&self) -> Word {
        let mut v = self.0.to_vec();
        v.reverse();
        Word(intern(&v))
    }
}

impl Ord for Word {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.len().cmp(&other.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of the free algebra: a finite `RatQ`-linear combination of
/// words. Zero coefficients are never stored.
#[derive(Debug, Clone)]
pub struct FreeElement {
    gens: Arc<GeneratorSet>,
    terms: BTreeMap<Word, RatQ>,
    weight_cache: OnceCell<Option<Vec<i64>>>,
}

impl PartialEq for FreeElement {
    fn eq(&self, other: &Self) -> bool {
        (Arc::ptr_eq(&self.gens, &other.gens) || self.gens == other.gens)
            && self.terms == other.terms
    }
}

impl Eq for FreeElement {}

impl FreeElement {
    fn make(gens: Arc<GeneratorSet>, terms: BTreeMap<Word, RatQ>) -> Self {
        FreeElement { gens, terms, weight_cache: OnceCell::new() }
    }

    pub fn zero(gens: &Arc<GeneratorSet>) -> Self {
        Self::make(gens.clone(), BTreeMap::new())
    }

    pub fn unit(gens: &Arc<GeneratorSet>) -> Self {
        Self::scalar(gens, RatQ::one())
    }

    pub fn scalar(gens: &Arc<GeneratorSet>, c: RatQ) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(Word::empty(), c);
        }
        Self::make(gens.clone(), terms)
    }

    pub fn generator(gens: &Arc<GeneratorSet>, i: usize) -> Result<Self, FreeAlgError> {
        if i >= gens.len() {
            return Err(FreeAlgError::IndexOutOfRange(i));
        }
        Ok(Self::from_word(gens, Word::single(i as u32), RatQ::one()))
    }

    pub fn from_word(gens: &Arc<GeneratorSet>, word: Word, coeff: RatQ) -> Self {
        let mut terms = BTreeMap::new();
        if !coeff.is_zero() {
            terms.insert(word, coeff);
        }
        Self::make(gens.clone(), terms)
    }

    pub fn from_terms<I>(gens: &Arc<GeneratorSet>, items: I) -> Self
    where
        I: IntoIterator<Item = (Word, RatQ)>,
    {
        let mut out = Self::zero(gens);
        for (w, c) in items {
            out.add_term(w, &c);
        }
        out
    }

    pub fn gens(&self) -> &Arc<GeneratorSet> {
        &self.gens
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Word, &RatQ)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> RatQ {
        self.terms.get(w).cloned().unwrap_or_else(RatQ::zero)
    }

    /// Largest word of the support with its coefficient.
    pub fn leading(&self) -> Option<(&Word, &RatQ)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, w: Word, c: &RatQ) {
        if c.is_zero() {
            return;
        }
        self.weight_cache = OnceCell::new();
        match self.terms.entry(w) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let s = e.get().add(c);
                if s.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = s;
                }
            }
        }
    }

    /// Common weight of all words of the support; `None` for zero or
    /// inhomogeneous elements.
    pub fn weight(&self) -> Option<&[i64]> {
        self.weight_cache
            .get_or_init(|| {
                let mut it = self.terms.keys();
                let first = self.gens.word_weight(it.next()?);
                for w in it {
                    if self.gens.word_weight(w) != first {
                        return None;
                    }
                }
                Some(first)
            })
            .as_deref()
    }

    /// Splits into homogeneous parts keyed by weight.
    pub fn weight_components(&self) -> BTreeMap<Vec<i64>, FreeElement> {
        let mut out: BTreeMap<Vec<i64>, FreeElement> = BTreeMap::new();
        for (w, c) in &self.terms {
            let key = self.gens.word_weight(w);
            out.entry(key)
                .or_insert_with(|| Self::zero(&self.gens))
                .add_term(w.clone(), c);
        }
        out
    }

    pub fn map_coeffs<F: Fn(&RatQ) -> RatQ>(&self, f: F) -> Self {
        let mut out = Self::zero(&self.gens);
        for (w, c) in &self.terms {
            out.add_term(w.clone(), &f(c));
        }
        out
    }

    pub fn scale(&self, c: &RatQ) -> Self {
        if c.is_zero() {
            return Self::zero(&self.gens);
        }
        self.map_coeffs(|x| x.mul(c))
    }

    /// Image under the anti-automorphism fixing each generator and
    /// reversing words.
    pub fn reversed(&self) -> Self {
        let mut out = Self::zero(&self.gens);
        for (w, c) in &self.terms {
            out.add_term(w.reversed(), c);
        }
        out
    }

    fn assert_same_gens(&self, other: &Self) {
        assert!(
            Arc::ptr_eq(&self.gens, &other.gens) || self.gens == other.gens,
            "mixed generator sets"
        );
    }
}

impl std::ops::Add for &FreeElement {
    type Output = FreeElement;

    fn add(self, rhs: &FreeElement) -> FreeElement {
        self.assert_same_gens(rhs);
        let mut out = self.clone();
        out.weight_cache = OnceCell::new();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl std::ops::Sub for &FreeElement {
    type Output = FreeElement;

    fn sub(self, rhs: &FreeElement) -> FreeElement {
        self.assert_same_gens(rhs);
        let mut out = self.clone();
        out.weight_cache = OnceCell::new();
        for (w, c) in &rhs.terms {
            out.add_term(w.clone(), &c.neg());
        }
        out
    }
}

impl std::ops::Neg for &FreeElement {
    type Output = FreeElement;

    fn neg(self) -> FreeElement {
        self.map_coeffs(RatQ::neg)
    }
}

impl std::ops::Mul for &FreeElement {
    type Output = FreeElement;

    fn mul(self, rhs: &FreeElement) -> FreeElement {
        self.assert_same_gens(rhs);
        let mut out = FreeElement::zero(&self.gens);
        for (wa, ca) in &self.terms {
            for (wb, cb) in &rhs.terms {
                out.add_term(wa.concat(wb), &ca.mul(cb));
            }
        }
        out
    }
}

/// `a b - v b a`.
pub fn qcommutator(a: &FreeElement, b: &FreeElement, v: &RatQ) -> FreeElement {
    &(a * b) - &(b * a).scale(v)
}

/// `a b - b a`.
pub fn commutator(a: &FreeElement, b: &FreeElement) -> FreeElement {
    qcommutator(a, b, &RatQ::one())
}

/// Left twisted adjoint action of generator `i` on a homogeneous `u`:
/// `g_i u - q^{(w_i, wt u)} u g_i`.
pub fn ad(i: usize, u: &FreeElement) -> Result<FreeElement, FreeAlgError> {
    if u.is_zero() {
        return Ok(u.clone());
    }
    let gens = u.gens().clone();
    if i >= gens.len() {
        return Err(FreeAlgError::IndexOutOfRange(i));
    }
    let wt = u.weight().ok_or(FreeAlgError::Inhomogeneous)?;
    let p = gens.pair(gens.weight(i), wt);
    let gi = FreeElement::generator(&gens, i)?;
    Ok(qcommutator(&gi, u, &RatQ::q_pow(p)))
}

/// Right twisted adjoint action of generator `i` on a homogeneous `u`:
/// `u g_i - q^{(w_i, wt u)} g_i u`.
pub fn ad_star(i: usize, u: &FreeElement) -> Result<FreeElement, FreeAlgError> {
    if u.is_zero() {
        return Ok(u.clone());
    }
    let gens = u.gens().clone();
    if i >= gens.len() {
        return Err(FreeAlgError::IndexOutOfRange(i));
    }
    let wt = u.weight().ok_or(FreeAlgError::Inhomogeneous)?;
    let p = gens.pair(gens.weight(i), wt);
    let gi = FreeElement::generator(&gens, i)?;
    Ok(qcommutator(u, &gi, &RatQ::q_pow(p)))
}

/// `(ad g_i)^r (u) / [r]!` in the base `q^{d_i}`.
pub fn ad_pow_divided(i: usize, r: u32, u: &FreeElement) -> Result<FreeElement, FreeAlgError> {
    let d = u.gens().sym_d(i)?;
    let mut acc = u.clone();
    for _ in 0..r {
        acc = ad(i, &acc)?;
    }
    let fact = RatQ::qfact(i64::from(r), d)?;
    Ok(acc.scale(&fact.inv()))
}

/// `(ad* g_i)^r (u) / [r]!` in the base `q^{d_i}`.
pub fn ad_star_pow_divided(
    i: usize,
    r: u32,
    u: &FreeElement,
) -> Result<FreeElement, FreeAlgError> {
    let d = u.gens().sym_d(i)?;
    let mut acc = u.clone();
    for _ in 0..r {
        acc = ad_star(i, &acc)?;
    }
    let fact = RatQ::qfact(i64::from(r), d)?;
    Ok(acc.scale(&fact.inv()))
}

impl fmt::Display for FreeElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (w, c) in self.terms.iter().rev() {
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            write!(f, "({c})*")?;
            if w.is_empty() {
                write!(f, "1")?;
            } else {
                let mut sep = "";
                for &l in w.letters() {
                    write!(f, "{sep}{}", self.gens.name(l as usize))?;
                    sep = ".";
                }
            }
        }
        Ok(())
    }
}

/// Splits on `+` at paren depth zero.
fn split_top_level(s: &str) -> Vec<&str> {
    let mut pieces = Vec::new();
    let mut depth = 0usize;
    let mut start = 0usize;
    for (pos, ch) in s.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth = depth.saturating_sub(1),
            '+' if depth == 0 => {
                pieces.push(&s[start..pos]);
                start = pos + 1;
            }
            _ => {}
        }
    }
    pieces.push(&s[start..]);
    pieces
}

/// Parses the `Display` format: terms `(coeff)*name.name...` joined by
/// `+`, with `1` for the empty word and `0` for the zero element.
pub fn parse_element(gens: &Arc<GeneratorSet>, s: &str) -> Result<FreeElement, FreeAlgError> {
    let body = s.trim();
    if body == "0" {
        return Ok(FreeElement::zero(gens));
    }
    let mut out = FreeElement::zero(gens);
    for piece in split_top_level(body) {
        let piece = piece.trim();
        if piece.is_empty() {
            return Err(FreeAlgError::Parse("empty term".into()));
        }
        let (coeff, word_part) = if let Some(rest) = piece.strip_prefix('(') {
            let mut depth = 1usize;
            let mut close = None;
            for (pos, ch) in rest.char_indices() {
                match ch {
                    '(' => depth += 1,
                    ')' => {
                        depth -= 1;
                        if depth == 0 {
                            close = Some(pos);
                            break;
                        }
                    }
                    _ => {}
                }
            }
            let close = close.ok_or_else(|| FreeAlgError::Parse("unbalanced parens".into()))?;
            let coeff: RatQ = rest[..close]
                .trim()
                .parse()
                .map_err(FreeAlgError::Coefficient)?;
            let tail = rest[close + 1..].trim();
            let word_part = match tail.strip_prefix('*') {
                Some(w) => w.trim(),
                None if tail.is_empty() => "1",
                None => return Err(FreeAlgError::Parse(format!("expected `*` in {piece:?}"))),
            };
            (coeff, word_part)
        } else {
            (RatQ::one(), piece)
        };
        let word = if word_part == "1" {
            Word::empty()
        } else {
            let mut letters = Vec::new();
            for name in word_part.split('.') {
                let name = name.trim();
                let idx = gens
                    .index_of(name)
                    .ok_or_else(|| FreeAlgError::UnknownGenerator(name.to_string()))?;
                letters.push(idx as u32);
            }
            Word::from_letters(&letters)
        };
        out.add_term(word, &coeff);
    }
    Ok(out)
}
