//! Presentations with ordered generators and lowering rewrite rules:
//! normal forms, overlap (diamond) confluence certification, graded
//! monomial counting, and sub-PBW analysis against an ambient algebra
//! with exact coordinates.
//!
//! The reduction order is graded lex: words compare by total degree
//! weight, then letterwise by generator position. Every rule must send
//! its two-letter word to a strictly smaller combination, which makes
//! normal forms terminate regardless of rule semantics.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::sync::Arc;

use rayon::prelude::*;
use thiserror::Error;

use crate::freealg::{parse_element, FreeAlgError, FreeElement, GeneratorSet, Word};
use crate::linalg::{Eliminator, SparseVec};
use crate::qrat::RatQ;

#[derive(Debug, Error)]
pub enum RewriteError {
    #[error("degree weights must be positive and match the generator count")]
    BadDegrees,
    #[error("rule for pair ({hi}, {lo}) is keyed out of order")]
    BadRuleKey { hi: String, lo: String },
    #[error("missing rule for pair ({hi}, {lo})")]
    MissingRule { hi: String, lo: String },
    #[error("rule for ({hi}, {lo}) has no invertible ordered-pair coefficient")]
    MissingLeadCoefficient { hi: String, lo: String },
    #[error("rule for ({hi}, {lo}) contains the non-lowering monomial {monomial}")]
    NotLowering { hi: String, lo: String, monomial: String },
    #[error("rule element uses a different generator set")]
    MismatchedGens,
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    FreeAlg(#[from] FreeAlgError),
}

/// Ordered-generator presentation: for every out-of-order pair
/// `hi > lo` there is exactly one rule rewriting the word `hi.lo`.
#[derive(Debug, Clone)]
pub struct Presentation {
    gens: Arc<GeneratorSet>,
    degrees: Vec<u64>,
    rules: BTreeMap<(u32, u32), FreeElement>,
}

/// Result of an overlap sweep.
#[derive(Debug, Clone)]
pub struct ConfluenceReport {
    pub confluent: bool,
    pub witness: Option<Witness>,
}

/// Overlap triple whose two bracketings reduce differently.
#[derive(Debug, Clone)]
pub struct Witness {
    pub hi: usize,
    pub mid: usize,
    pub lo: usize,
    pub via_left: FreeElement,
    pub via_right: FreeElement,
}

impl Presentation {
    /// `rules` are keyed by the out-of-order letter pair `(hi, lo)`.
    pub fn new(
        gens: Arc<GeneratorSet>,
        degrees: Vec<u64>,
        rules: BTreeMap<(u32, u32), FreeElement>,
    ) -> Result<Self, RewriteError> {
        if degrees.len() != gens.len() || degrees.iter().any(|&d| d == 0) {
            return Err(RewriteError::BadDegrees);
        }
        let p = Presentation { gens, degrees, rules };
        let label = |i: u32| {
            if (i as usize) < p.gens.len() {
                p.gens.name(i as usize).to_string()
            } else {
                format!("#{i}")
            }
        };
        for (&(hi, lo), rhs) in &p.rules {
            if hi <= lo || hi as usize >= p.gens.len() {
                return Err(RewriteError::BadRuleKey { hi: label(hi), lo: label(lo) });
            }
            let hi_name = label(hi);
            let lo_name = label(lo);
            if rhs.gens() != &p.gens {
                return Err(RewriteError::MismatchedGens);
            }
            let lhs = Word::from_letters(&[hi, lo]);
            let ordered = Word::from_letters(&[lo, hi]);
            if rhs.coeff(&ordered).is_zero() {
                return Err(RewriteError::MissingLeadCoefficient { hi: hi_name, lo: lo_name });
            }
            for (w, _) in rhs.terms() {
                if p.cmp_words(w, &lhs) != Ordering::Less {
                    return Err(RewriteError::NotLowering {
                        hi: hi_name,
                        lo: lo_name,
                        monomial: p.word_string(w),
                    });
                }
            }
        }
        for hi in 1..p.gens.len() as u32 {
            for lo in 0..hi {
                if !p.rules.contains_key(&(hi, lo)) {
                    return Err(RewriteError::MissingRule {
                        hi: p.gens.name(hi as usize).to_string(),
                        lo: p.gens.name(lo as usize).to_string(),
                    });
                }
            }
        }
        Ok(p)
    }

    pub fn with_unit_degrees(
        gens: Arc<GeneratorSet>,
        rules: BTreeMap<(u32, u32), FreeElement>,
    ) -> Result<Self, RewriteError> {
        let n = gens.len();
        Self::new(gens, vec![1; n], rules)
    }

    pub fn gens(&self) -> &Arc<GeneratorSet> {
        &self.gens
    }

    pub fn degrees(&self) -> &[u64] {
        &self.degrees
    }

    pub fn rule(&self, hi: u32, lo: u32) -> Option<&FreeElement> {
        self.rules.get(&(hi, lo))
    }

    pub fn word_degree(&self, w: &Word) -> u64 {
        w.letters().iter().map(|&l| self.degrees[l as usize]).sum()
    }

    /// Graded lex order: degree weight first, then letter sequence.
    pub fn cmp_words(&self, a: &Word, b: &Word) -> Ordering {
        self.word_degree(a)
            .cmp(&self.word_degree(b))
            .then_with(|| a.letters().cmp(b.letters()))
    }

    fn word_string(&self, w: &Word) -> String {
        if w.is_empty() {
            return "1".into();
        }
        w.letters()
            .iter()
            .map(|&l| self.gens.name(l as usize))
            .collect::<Vec<_>>()
            .join(".")
    }

    pub fn is_ordered(&self, w: &Word) -> bool {
        w.letters().windows(2).all(|p| p[0] <= p[1])
    }

    /// Rewrites until every word is an ordered monomial. Within a word
    /// the leftmost out-of-order pair is rewritten first; across words
    /// the largest pending word is processed first so each distinct
    /// word is handled at most once.
    pub fn normal_form(&self, u: &FreeElement) -> FreeElement {
        assert!(u.gens() == &self.gens, "element over a different generator set");
        let mut pending: BTreeMap<(u64, LexWord), RatQ> = BTreeMap::new();
        for (w, c) in u.terms() {
            merge(&mut pending, (self.word_degree(w), LexWord(w.clone())), c.clone());
        }
        let mut done: BTreeMap<Word, RatQ> = BTreeMap::new();
        while let Some(((deg, lw), coeff)) = pending.pop_last() {
            let w = lw.0;
            let letters = w.letters();
            match letters.windows(2).position(|p| p[0] > p[1]) {
                None => {
                    let e = done.entry(w).or_insert_with(RatQ::zero);
                    *e = e.add(&coeff);
                }
                Some(p) => {
                    let rhs = self
                        .rules
                        .get(&(letters[p], letters[p + 1]))
                        .expect("complete rule table");
                    for (m, c) in rhs.terms() {
                        let mut new = Vec::with_capacity(letters.len() - 2 + m.len());
                        new.extend_from_slice(&letters[..p]);
                        new.extend_from_slice(m.letters());
                        new.extend_from_slice(&letters[p + 2..]);
                        let nw = Word::from_letters(&new);
                        let ndeg = self.word_degree(&nw);
                        debug_assert!((ndeg, nw.letters()) < (deg, w.letters()));
                        merge(&mut pending, (ndeg, LexWord(nw)), coeff.mul(c));
                    }
                }
            }
        }
        FreeElement::from_terms(&self.gens, done)
    }

    /// Reduces the single overlap word `hi.mid.lo` along both
    /// bracketings; `None` means they agree.
    pub fn check_triple(&self, hi: u32, mid: u32, lo: u32) -> Option<Witness> {
        debug_assert!(hi > mid && mid > lo);
        let lo_elt = FreeElement::from_word(&self.gens, Word::single(lo), RatQ::one());
        let hi_elt = FreeElement::from_word(&self.gens, Word::single(hi), RatQ::one());
        let left = self.normal_form(&(&self.rules[&(hi, mid)] * &lo_elt));
        let right = self.normal_form(&(&hi_elt * &self.rules[&(mid, lo)]));
        if left == right {
            None
        } else {
            Some(Witness {
                hi: hi as usize,
                mid: mid as usize,
                lo: lo as usize,
                via_left: left,
                via_right: right,
            })
        }
    }

    pub fn overlap_triples(&self) -> Vec<(u32, u32, u32)> {
        let n = self.gens.len() as u32;
        let mut out = Vec::new();
        for hi in 2..n {
            for mid in 1..hi {
                for lo in 0..mid {
                    out.push((hi, mid, lo));
                }
            }
        }
        out
    }

    /// Sweeps all strict overlap triples in parallel; the reported
    /// witness, if any, is the smallest disagreeing triple.
    pub fn check_diamond(&self) -> ConfluenceReport {
        let witness = self
            .overlap_triples()
            .into_par_iter()
            .filter_map(|(hi, mid, lo)| self.check_triple(hi, mid, lo))
            .min_by_key(|w| (w.hi, w.mid, w.lo));
        ConfluenceReport { confluent: witness.is_none(), witness }
    }

    /// Number of ordered monomials of total degree weight `d`.
    pub fn graded_dimension(&self, d: u64) -> u128 {
        let d = d as usize;
        let mut dp = vec![0u128; d + 1];
        dp[0] = 1;
        for &g in &self.degrees {
            let g = g as usize;
            for k in g..=d {
                dp[k] += dp[k - g];
            }
        }
        dp[d]
    }

    /// Structured text form; parses back bit-exactly.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        out.push_str("presentation v1\n");
        out.push_str(&format!("lattice_rank {}\n", self.gens.lattice_rank()));
        for i in 0..self.gens.len() {
            let ws: Vec<String> = self.gens.weight(i).iter().map(|x| x.to_string()).collect();
            out.push_str(&format!(
                "gen {} deg {} weight {}\n",
                self.gens.name(i),
                self.degrees[i],
                ws.join(" ")
            ));
        }
        out.push_str("pairing\n");
        for l in 0..self.gens.lattice_rank() {
            let row: Vec<String> = (0..self.gens.lattice_rank())
                .map(|m| {
                    self.gens
                        .pair(&unit_vec(l, self.gens.lattice_rank()), &unit_vec(m, self.gens.lattice_rank()))
                        .to_string()
                })
                .collect();
            out.push_str(&row.join(" "));
            out.push('\n');
        }
        for (&(hi, lo), rhs) in &self.rules {
            out.push_str(&format!(
                "rule {} {} := {}\n",
                self.gens.name(hi as usize),
                self.gens.name(lo as usize),
                rhs
            ));
        }
        out
    }

    pub fn from_text(text: &str) -> Result<Self, RewriteError> {
        let mut lines = text.lines().map(str::trim).filter(|l| !l.is_empty());
        let header = lines.next().ok_or_else(|| RewriteError::Parse("empty input".into()))?;
        if header != "presentation v1" {
            return Err(RewriteError::Parse(format!("bad header {header:?}")));
        }
        let rank_line = lines
            .next()
            .ok_or_else(|| RewriteError::Parse("missing lattice_rank".into()))?;
        let rank: usize = rank_line
            .strip_prefix("lattice_rank ")
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| RewriteError::Parse(format!("bad lattice_rank line {rank_line:?}")))?;
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut weights = Vec::new();
        let mut pairing = Vec::new();
        let mut rule_lines = Vec::new();
        let mut in_pairing = false;
        for line in lines {
            if line == "pairing" {
                in_pairing = true;
                continue;
            }
            if let Some(rest) = line.strip_prefix("gen ") {
                let (name, rest) = rest
                    .split_once(" deg ")
                    .ok_or_else(|| RewriteError::Parse(format!("bad gen line {line:?}")))?;
                let (deg, ws) = rest
                    .split_once(" weight ")
                    .ok_or_else(|| RewriteError::Parse(format!("bad gen line {line:?}")))?;
                names.push(name.trim().to_string());
                degrees.push(
                    deg.trim()
                        .parse::<u64>()
                        .map_err(|e| RewriteError::Parse(e.to_string()))?,
                );
                let wv: Vec<i64> = ws
                    .split_whitespace()
                    .map(|t| t.parse::<i64>().map_err(|e| RewriteError::Parse(e.to_string())))
                    .collect::<Result<_, _>>()?;
                weights.push(wv);
            } else if let Some(rest) = line.strip_prefix("rule ") {
                rule_lines.push(rest.to_string());
                in_pairing = false;
            } else if in_pairing {
                let row: Vec<i64> = line
                    .split_whitespace()
                    .map(|t| t.parse::<i64>().map_err(|e| RewriteError::Parse(e.to_string())))
                    .collect::<Result<_, _>>()?;
                pairing.push(row);
            } else {
                return Err(RewriteError::Parse(format!("unexpected line {line:?}")));
            }
        }
        if pairing.len() != rank {
            return Err(RewriteError::Parse("pairing rows do not match lattice_rank".into()));
        }
        let gens = GeneratorSet::new(names, weights, pairing)?;
        let mut rules = BTreeMap::new();
        for r in rule_lines {
            let (pair, rhs) = r
                .split_once(":=")
                .ok_or_else(|| RewriteError::Parse(format!("bad rule line {r:?}")))?;
            let mut toks = pair.split_whitespace();
            let hi_name = toks
                .next()
                .ok_or_else(|| RewriteError::Parse("rule missing names".into()))?;
            let lo_name = toks
                .next()
                .ok_or_else(|| RewriteError::Parse("rule missing names".into()))?;
            let hi = gens
                .index_of(hi_name)
                .ok_or_else(|| RewriteError::Parse(format!("unknown generator {hi_name:?}")))?
                as u32;
            let lo = gens
                .index_of(lo_name)
                .ok_or_else(|| RewriteError::Parse(format!("unknown generator {lo_name:?}")))?
                as u32;
            let elt = parse_element(&gens, rhs.trim())?;
            if rules.insert((hi, lo), elt).is_some() {
                return Err(RewriteError::Parse(format!(
                    "duplicate rule for ({hi_name}, {lo_name})"
                )));
            }
        }
        Self::new(gens, degrees, rules)
    }
}

fn unit_vec(i: usize, n: usize) -> Vec<i64> {
    (0..n).map(|j| i64::from(i == j)).collect()
}

fn merge(map: &mut BTreeMap<(u64, LexWord), RatQ>, key: (u64, LexWord), c: RatQ) {
    if c.is_zero() {
        return;
    }
    match map.entry(key) {
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
        std::collections::btree_map::Entry::Occupied(mut e) => {
            let s = e.get().add(&c);
            if s.is_zero() {
                e.remove();
            } else {
                *e.get_mut() = s;
            }
        }
    }
}

/// Word wrapper ordered purely letterwise (no length priority).
#[derive(Debug, Clone, PartialEq, Eq)]
struct LexWord(Word);

impl Ord for LexWord {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.letters().cmp(other.0.letters())
    }
}

impl PartialOrd for LexWord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Ambient algebra with exact canonical coordinates: two elements are
/// equal iff their coordinate vectors agree.
pub trait CoordinateAlgebra {
    type Elt: Clone + Send + Sync;
    type Key: Ord + Clone;

    fn unit(&self) -> Self::Elt;
    fn mul(&self, a: &Self::Elt, b: &Self::Elt) -> Self::Elt;
    fn coords(&self, e: &Self::Elt) -> SparseVec<Self::Key>;
}

/// A presentation acts as its own ambient algebra through normal
/// forms; coordinates are canonical only when the presentation is
/// confluent.
impl CoordinateAlgebra for Presentation {
    type Elt = FreeElement;
    type Key = Word;

    fn unit(&self) -> FreeElement {
        FreeElement::unit(&self.gens)
    }

    fn mul(&self, a: &FreeElement, b: &FreeElement) -> FreeElement {
        self.normal_form(&(a * b))
    }

    fn coords(&self, e: &FreeElement) -> SparseVec<Word> {
        self.normal_form(e)
            .terms()
            .map(|(w, c)| (w.clone(), c.clone()))
            .collect()
    }
}

/// Length-filtered sub-PBW report: per filtration level, whether
/// ordered monomials in the given generators span all their products.
#[derive(Debug, Clone)]
pub struct SubPbwReport {
    pub cap: usize,
    /// `spanning[k]` covers words of length `<= k + 1`.
    pub spanning: Vec<bool>,
    /// Minimal filtration degree of each out-of-order pair product
    /// `g_j g_i` (`i < j`); `None` when the cap was insufficient.
    pub pair_degrees: Vec<(usize, usize, Option<usize>)>,
    pub d0: Option<usize>,
    pub cap_insufficient: bool,
    pub tame: Option<bool>,
}

/// Tests whether ordered monomials in `gens` span the subalgebra they
/// generate, level by level up to `cap`, and measures the filtration
/// degrees of the out-of-order pair products.
pub fn subpbw_analysis<A: CoordinateAlgebra>(
    ambient: &A,
    gens: &[A::Elt],
    cap: usize,
) -> SubPbwReport {
    let m = gens.len();
    let mut ordered_elim: Eliminator<A::Key> = Eliminator::new();
    ordered_elim.insert(ambient.coords(&ambient.unit()));

    let mut pair_products = Vec::new();
    for j in 0..m {
        for i in 0..j {
            pair_products.push((i, j, ambient.mul(&gens[j], &gens[i])));
        }
    }
    let mut pair_degrees: Vec<(usize, usize, Option<usize>)> =
        pair_products.iter().map(|&(i, j, _)| (i, j, None)).collect();

    // level 0: scalars only
    for (idx, (_, _, prod)) in pair_products.iter().enumerate() {
        if ordered_elim.contains(&ambient.coords(prod)) {
            pair_degrees[idx].2 = Some(0);
        }
    }

    let mut spanning = Vec::new();
    let mut all_words: Vec<A::Elt> = vec![ambient.unit()];
    let mut ordered_tail: Vec<(usize, A::Elt)> = vec![(0, ambient.unit())];
    let mut all_elim: Eliminator<A::Key> = Eliminator::new();
    all_elim.insert(ambient.coords(&ambient.unit()));

    for level in 1..=cap {
        // extend ordered monomials: weakly increasing index words
        let mut next_ordered = Vec::new();
        for (last, elt) in &ordered_tail {
            for (g, gen) in gens.iter().enumerate().skip(*last) {
                next_ordered.push((g, ambient.mul(elt, gen)));
            }
        }
        for (_, elt) in &next_ordered {
            ordered_elim.insert(ambient.coords(elt));
        }
        ordered_tail = next_ordered;

        // extend all words
        let mut next_all = Vec::new();
        for elt in &all_words {
            for gen in gens {
                next_all.push(ambient.mul(elt, gen));
            }
        }
        for elt in &next_all {
            all_elim.insert(ambient.coords(elt));
        }
        all_words = next_all;

        spanning.push(all_elim.rank() == ordered_elim.rank());

        for (idx, (_, _, prod)) in pair_products.iter().enumerate() {
            if pair_degrees[idx].2.is_none() && ordered_elim.contains(&ambient.coords(prod)) {
                pair_degrees[idx].2 = Some(level);
            }
        }
    }

    let cap_insufficient = pair_degrees.iter().any(|(_, _, d)| d.is_none());
    let d0 = if pair_degrees.is_empty() || cap_insufficient {
        None
    } else {
        pair_degrees.iter().map(|(_, _, d)| d.unwrap()).max()
    };
    let tame = d0.map(|d| {
        // independence of ordered monomials of length <= d0: the
        // eliminator was filled level by level, so recompute ranks at
        // that level with a fresh pass
        let mut elim: Eliminator<A::Key> = Eliminator::new();
        let mut count = 0usize;
        let mut frontier: Vec<(usize, A::Elt)> = vec![(0, ambient.unit())];
        elim.insert(ambient.coords(&ambient.unit()));
        count += 1;
        for _ in 1..=d {
            let mut next = Vec::new();
            for (last, elt) in &frontier {
                for (g, gen) in gens.iter().enumerate().skip(*last) {
                    next.push((g, ambient.mul(elt, gen)));
                }
            }
            for (_, elt) in &next {
                elim.insert(ambient.coords(elt));
                count += 1;
            }
            frontier = next;
        }
        elim.rank() == count
    });
    SubPbwReport { cap, spanning, pair_degrees, d0, cap_insufficient, tame }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free_gens(names: &[&str]) -> Arc<GeneratorSet> {
        let n = names.len();
        GeneratorSet::new(
            names.iter().map(|s| s.to_string()).collect(),
            (0..n)
                .map(|i| (0..n).map(|j| i64::from(i == j)).collect())
                .collect(),
            vec![vec![0; n]; n],
        )
        .unwrap()
    }

    fn q_plane(coeffs: &[(&str, &str, RatQ)], names: &[&str]) -> Presentation {
        let gens = free_gens(names);
        let mut rules = BTreeMap::new();
        for (hi, lo, c) in coeffs {
            let hi = gens.index_of(hi).unwrap() as u32;
            let lo = gens.index_of(lo).unwrap() as u32;
            let rhs = FreeElement::from_word(&gens, Word::from_letters(&[lo, hi]), c.clone());
            rules.insert((hi, lo), rhs);
        }
        Presentation::with_unit_degrees(gens, rules).unwrap()
    }

    #[test]
    fn single_rule_application() {
        let p = q_plane(&[("y", "x", RatQ::q_pow(1))], &["x", "y"]);
        let g = p.gens().clone();
        let yx = FreeElement::from_word(&g, Word::from_letters(&[1, 0]), RatQ::one());
        let nf = p.normal_form(&yx);
        let expect = FreeElement::from_word(&g, Word::from_letters(&[0, 1]), RatQ::q_pow(1));
        assert_eq!(nf, expect);
        let ordered = FreeElement::from_word(&g, Word::from_letters(&[0, 0, 1]), RatQ::one());
        assert_eq!(p.normal_form(&ordered), ordered);
        assert_eq!(p.normal_form(&nf), nf);
    }

    #[test]
    fn two_generator_plane_is_confluent() {
        let p = q_plane(&[("y", "x", RatQ::q_pow(1))], &["x", "y"]);
        let report = p.check_diamond();
        assert!(report.confluent);
        assert!(report.witness.is_none());
    }

    #[test]
    fn three_generator_q_commuting_plane() {
        let q = RatQ::q_pow(1);
        let p = q_plane(
            &[
                ("y", "x", q.clone()),
                ("z", "x", q.clone()),
                ("z", "y", q.clone()),
            ],
            &["x", "y", "z"],
        );
        assert!(p.check_diamond().confluent);
        let g = p.gens().clone();
        let zyx = FreeElement::from_word(&g, Word::from_letters(&[2, 1, 0]), RatQ::one());
        let nf = p.normal_form(&zyx);
        let expect = FreeElement::from_word(&g, Word::from_letters(&[0, 1, 2]), RatQ::q_pow(3));
        assert_eq!(nf, expect);
    }

    #[test]
    fn normal_form_is_multiplicative_when_confluent() {
        let q = RatQ::q_pow(1);
        let p = q_plane(
            &[
                ("y", "x", q.clone()),
                ("z", "x", RatQ::q_pow(-2)),
                ("z", "y", q.clone()),
            ],
            &["x", "y", "z"],
        );
        assert!(p.check_diamond().confluent);
        let g = p.gens().clone();
        let a = FreeElement::from_word(&g, Word::from_letters(&[2, 0]), RatQ::one());
        let b = &FreeElement::from_word(&g, Word::from_letters(&[1, 1, 0]), RatQ::q_pow(2))
            + &FreeElement::from_word(&g, Word::from_letters(&[2]), RatQ::one());
        let lhs = p.normal_form(&(&a * &b));
        let rhs = p.normal_form(&(&p.normal_form(&a) * &p.normal_form(&b)));
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn corrupted_rule_produces_a_replayable_witness() {
        let q = RatQ::q_pow(1);
        let gens = free_gens(&["x", "y", "z"]);
        let mut rules = BTreeMap::new();
        let mk = |hi: u32, lo: u32, c: &RatQ| {
            FreeElement::from_word(&gens, Word::from_letters(&[lo, hi]), c.clone())
        };
        rules.insert((1, 0), mk(1, 0, &q));
        rules.insert((2, 0), mk(2, 0, &q));
        // corrupted: z y -> q y z + x z
        let bad = &mk(2, 1, &q)
            + &FreeElement::from_word(&gens, Word::from_letters(&[0, 2]), RatQ::one());
        rules.insert((2, 1), bad);
        let p = Presentation::with_unit_degrees(gens, rules).unwrap();
        let report = p.check_diamond();
        assert!(!report.confluent);
        let w = report.witness.unwrap();
        assert_eq!((w.hi, w.mid, w.lo), (2, 1, 0));
        assert_ne!(w.via_left, w.via_right);
        let replay = p.check_triple(2, 1, 0).unwrap();
        assert_eq!(replay.via_left, w.via_left);
        assert_eq!(replay.via_right, w.via_right);
    }

    #[test]
    fn graded_dimension_counts_monomials() {
        let q = RatQ::one();
        let p = q_plane(
            &[
                ("y", "x", q.clone()),
                ("z", "x", q.clone()),
                ("z", "y", q.clone()),
            ],
            &["x", "y", "z"],
        );
        // polynomial algebra in 3 variables: C(3 + d - 1, d)
        assert_eq!(p.graded_dimension(0), 1);
        assert_eq!(p.graded_dimension(1), 3);
        assert_eq!(p.graded_dimension(2), 6);
        assert_eq!(p.graded_dimension(3), 10);
        assert_eq!(p.graded_dimension(4), 15);
    }

    #[test]
    fn graded_dimension_respects_weights() {
        let gens = free_gens(&["x", "z"]);
        let mut rules = BTreeMap::new();
        rules.insert(
            (1u32, 0u32),
            FreeElement::from_word(&gens, Word::from_letters(&[0, 1]), RatQ::one()),
        );
        let p = Presentation::new(gens, vec![1, 2], rules).unwrap();
        // monomials x^a z^b with a + 2b = 4: (4,0), (2,1), (0,2)
        assert_eq!(p.graded_dimension(4), 3);
    }

    #[test]
    fn rule_validation_rejects_raising_rules() {
        let gens = free_gens(&["x", "y"]);
        let mut rules = BTreeMap::new();
        // y x -> x y + y y x (not lowering)
        let bad = &FreeElement::from_word(&gens, Word::from_letters(&[0, 1]), RatQ::one())
            + &FreeElement::from_word(&gens, Word::from_letters(&[1, 1, 0]), RatQ::one());
        rules.insert((1u32, 0u32), bad);
        let err = Presentation::with_unit_degrees(gens.clone(), rules).unwrap_err();
        assert!(matches!(err, RewriteError::NotLowering { .. }));
        let err = Presentation::with_unit_degrees(gens.clone(), BTreeMap::new()).unwrap_err();
        assert!(matches!(err, RewriteError::MissingRule { .. }));
        let mut rules = BTreeMap::new();
        rules.insert(
            (1u32, 0u32),
            FreeElement::from_word(&gens, Word::from_letters(&[0]), RatQ::one()),
        );
        let err = Presentation::with_unit_degrees(gens, rules).unwrap_err();
        assert!(matches!(err, RewriteError::MissingLeadCoefficient { .. }));
    }

    #[test]
    fn presentation_text_round_trips() {
        let q = RatQ::q_pow(1);
        let p = q_plane(
            &[
                ("y", "x", q.clone()),
                ("z", "x", RatQ::q_minus_q_inv(1).inv()),
                ("z", "y", q.clone()),
            ],
            &["x", "y", "z"],
        );
        let text = p.to_text();
        let back = Presentation::from_text(&text).unwrap();
        assert_eq!(back.to_text(), text);
        assert_eq!(back.gens().names(), p.gens().names());
    }

    #[test]
    fn subpbw_on_a_commuting_pair() {
        let q = RatQ::q_pow(1);
        let p = q_plane(&[("y", "x", q)], &["x", "y"]);
        let g = p.gens().clone();
        let x = FreeElement::generator(&g, 0).unwrap();
        let y = FreeElement::generator(&g, 1).unwrap();
        let report = subpbw_analysis(&p, &[x, y], 4);
        assert!(report.spanning.iter().all(|&s| s));
        assert_eq!(report.d0, Some(2));
        assert_eq!(report.tame, Some(true));
        assert!(!report.cap_insufficient);
    }

    #[test]
    fn subpbw_singleton_has_no_pairs() {
        let q = RatQ::q_pow(1);
        let p = q_plane(&[("y", "x", q)], &["x", "y"]);
        let g = p.gens().clone();
        let x = FreeElement::generator(&g, 0).unwrap();
        let report = subpbw_analysis(&p, &[x], 3);
        assert!(report.spanning.iter().all(|&s| s));
        assert_eq!(report.d0, None);
        assert_eq!(report.tame, None);
        assert!(report.pair_degrees.is_empty());
    }

    #[test]
    fn subpbw_detects_wrong_order() {
        // generators listed in an order whose pair product needs a
        // higher filtration level: x, y with y x = x y + z, z = third
        // generator NOT included in the list
        let gens = free_gens(&["z", "x", "y"]);
        let mut rules = BTreeMap::new();
        let unit_rule = |hi: u32, lo: u32| {
            FreeElement::from_word(&gens, Word::from_letters(&[lo, hi]), RatQ::one())
        };
        rules.insert((1, 0), unit_rule(1, 0));
        rules.insert((2, 0), unit_rule(2, 0));
        let yx = &unit_rule(2, 1)
            + &FreeElement::from_word(&gens, Word::from_letters(&[0]), RatQ::one());
        rules.insert((2, 1), yx);
        let p = Presentation::with_unit_degrees(gens.clone(), rules).unwrap();
        assert!(p.check_diamond().confluent);
        let x = FreeElement::generator(&gens, 1).unwrap();
        let y = FreeElement::generator(&gens, 2).unwrap();
        // without z, the ordered monomials in {x, y} cannot express yx
        let report = subpbw_analysis(&p, &[x, y], 4);
        assert!(report.spanning.iter().any(|&s| !s));
        assert!(report.cap_insufficient);
        assert_eq!(report.d0, None);
    }
}
