//! The braiding on the square of the vector representation: the Hecke
//! operator T on V⊗V, the four-factor braiding Ψ on (V⊗V)⊗(V⊗V), its
//! cubic Hecke and inverse identities, the braid equation, flatness
//! ranks, and braided factorials with their kernel dimensions.

use std::collections::BTreeMap;

use once_cell::sync::OnceCell;

use crate::linalg::{sparse_add_scaled, Eliminator, SparseVec};
use crate::qrat::RatQ;

use super::UberError;

/// Sparse linear operator; `cols[j]` is the image of basis vector `j`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseOp {
    dim: usize,
    cols: Vec<SparseVec<usize>>,
}

impl SparseOp {
    pub fn zero(dim: usize) -> Self {
        SparseOp { dim, cols: vec![SparseVec::new(); dim] }
    }

    pub fn identity(dim: usize) -> Self {
        let cols = (0..dim).map(|j| SparseVec::from([(j, RatQ::one())])).collect();
        SparseOp { dim, cols }
    }

    pub fn from_cols(cols: Vec<SparseVec<usize>>) -> Self {
        SparseOp { dim: cols.len(), cols }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn col(&self, j: usize) -> &SparseVec<usize> {
        &self.cols[j]
    }

    pub fn apply(&self, v: &SparseVec<usize>) -> SparseVec<usize> {
        let mut out = SparseVec::new();
        for (&j, c) in v {
            sparse_add_scaled(&mut out, &self.cols[j], c);
        }
        out
    }

    /// Operator composition `self ∘ rhs` (rhs acts first).
    pub fn compose(&self, rhs: &SparseOp) -> SparseOp {
        assert_eq!(self.dim, rhs.dim);
        SparseOp { dim: self.dim, cols: rhs.cols.iter().map(|c| self.apply(c)).collect() }
    }

    pub fn add(&self, rhs: &SparseOp) -> SparseOp {
        assert_eq!(self.dim, rhs.dim);
        let cols = self
            .cols
            .iter()
            .zip(&rhs.cols)
            .map(|(a, b)| {
                let mut out = a.clone();
                sparse_add_scaled(&mut out, b, &RatQ::one());
                out
            })
            .collect();
        SparseOp { dim: self.dim, cols }
    }

    pub fn sub(&self, rhs: &SparseOp) -> SparseOp {
        self.add(&rhs.scale(&RatQ::from_int(-1)))
    }

    pub fn scale(&self, c: &RatQ) -> SparseOp {
        if c.is_zero() {
            return SparseOp::zero(self.dim);
        }
        let cols = self
            .cols
            .iter()
            .map(|col| col.iter().map(|(&k, v)| (k, v.mul(c))).collect())
            .collect();
        SparseOp { dim: self.dim, cols }
    }

    pub fn is_zero(&self) -> bool {
        self.cols.iter().all(BTreeMap::is_empty)
    }

    pub fn is_identity(&self) -> bool {
        self.cols.iter().enumerate().all(|(j, col)| {
            col.len() == 1 && col.get(&j).is_some_and(RatQ::is_one)
        })
    }

    pub fn to_dense_rows(&self) -> Vec<Vec<RatQ>> {
        let mut rows = vec![vec![RatQ::zero(); self.dim]; self.dim];
        for (j, col) in self.cols.iter().enumerate() {
            for (&i, c) in col {
                rows[i][j] = c.clone();
            }
        }
        rows
    }

    /// Rank via the incremental sparse echelon basis.
    pub fn rank(&self) -> usize {
        let mut elim: Eliminator<usize> = Eliminator::new();
        for col in &self.cols {
            elim.insert(col.clone());
        }
        elim.rank()
    }

    /// Entrywise value at `q = 1`; `None` when some entry has a pole there.
    pub fn specialize_q1(&self) -> Option<SparseOp> {
        let mut cols = Vec::with_capacity(self.dim);
        for col in &self.cols {
            let mut out = SparseVec::new();
            for (&i, c) in col {
                let v = c.eval_at_one().ok()?;
                let r = RatQ::from_rational(&v);
                if !r.is_zero() {
                    out.insert(i, r);
                }
            }
            cols.push(out);
        }
        Some(SparseOp { dim: self.dim, cols })
    }

    /// Embeds an operator on `m` adjacent base-`n` digit slots into an
    /// operator on `total` slots, acting on digits `offset..offset + m`
    /// (digits are big-endian: leftmost tensor factor is most significant).
    pub fn embed(&self, n: usize, m: usize, total: usize, offset: usize) -> SparseOp {
        assert_eq!(self.dim, n.pow(m as u32));
        assert!(offset + m <= total);
        let dim = n.pow(total as u32);
        let right = n.pow((total - offset - m) as u32);
        let mid = self.dim;
        let mut cols = Vec::with_capacity(dim);
        for j in 0..dim {
            let lo = j % right;
            let sub = (j / right) % mid;
            let hi = j / (right * mid);
            let col = self.cols[sub]
                .iter()
                .map(|(&s, c)| ((hi * mid + s) * right + lo, c.clone()))
                .collect();
            cols.push(col);
        }
        SparseOp { dim, cols }
    }
}

fn digits(mut idx: usize, n: usize, k: usize) -> Vec<usize> {
    let mut d = vec![0; k];
    for slot in (0..k).rev() {
        d[slot] = idx % n;
        idx /= n;
    }
    d
}

fn index(d: &[usize], n: usize) -> usize {
    d.iter().fold(0, |acc, &x| acc * n + x)
}

/// The Hecke operator on V⊗V: for the basis v_a⊗v_b it maps a pair with
/// a < b to the flip, fixes diagonal pairs up to q^{-1}, and maps a pair
/// with a > b to flip minus (q - q^{-1}) times itself.
pub fn t_op(n: usize) -> SparseOp {
    let h = RatQ::q_minus_q_inv(1);
    let mut cols = Vec::with_capacity(n * n);
    for a in 0..n {
        for b in 0..n {
            let mut col = SparseVec::new();
            if a == b {
                col.insert(a * n + b, RatQ::q_pow(-1));
            } else {
                col.insert(b * n + a, RatQ::one());
                if a > b {
                    col.insert(a * n + b, h.neg());
                }
            }
            cols.push(col);
        }
    }
    SparseOp::from_cols(cols)
}

/// T acting in digit slots i-1, i (1-based i) of V^{⊗k}.
pub fn t_slot(n: usize, k: usize, i: usize) -> SparseOp {
    t_op(n).embed(n, 2, k, i - 1)
}

/// Product of slot operators, leftmost factor outermost.
fn slot_word(n: usize, k: usize, word: &[usize], offset: usize) -> SparseOp {
    let mut acc = SparseOp::identity(n.pow(k as u32));
    for &i in word {
        acc = acc.compose(&t_slot(n, k, i + offset));
    }
    acc
}

/// The four-factor braiding word on digit slots offset+1..offset+4 of
/// V^{⊗k}: Ψ₂Ψ₁Ψ₃Ψ₂ + (q-q^{-1})(Ψ₁Ψ₂Ψ₁ + Ψ₁Ψ₃Ψ₂) + (q-q^{-1})²Ψ₁Ψ₂.
fn psi_sum(n: usize, k: usize, offset: usize) -> SparseOp {
    let h = RatQ::q_minus_q_inv(1);
    let h2 = h.mul(&h);
    slot_word(n, k, &[2, 1, 3, 2], offset)
        .add(&slot_word(n, k, &[1, 2, 1], offset).add(&slot_word(n, k, &[1, 3, 2], offset)).scale(&h))
        .add(&slot_word(n, k, &[1, 2], offset).scale(&h2))
}

/// The stated inverse word: Ψ₂Ψ₁Ψ₃Ψ₂ + (q-q^{-1})(Ψ₂Ψ₃Ψ₂ + Ψ₁Ψ₃Ψ₂)
/// + (q-q^{-1})²Ψ₃Ψ₂.
fn psi_inverse_sum(n: usize, k: usize, offset: usize) -> SparseOp {
    let h = RatQ::q_minus_q_inv(1);
    let h2 = h.mul(&h);
    slot_word(n, k, &[2, 1, 3, 2], offset)
        .add(&slot_word(n, k, &[2, 3, 2], offset).add(&slot_word(n, k, &[1, 3, 2], offset)).scale(&h))
        .add(&slot_word(n, k, &[3, 2], offset).scale(&h2))
}

/// The braiding on (V⊗V)^{⊗2} for an n-dimensional V, with the braid
/// equation certificate cached after its first evaluation.
pub struct PsiOperator {
    n: usize,
    op: SparseOp,
    braid_ok: OnceCell<bool>,
}

impl PsiOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn op(&self) -> &SparseOp {
        &self.op
    }

    /// Ψ acting on the pair slots pos, pos+1 of (V⊗V)^{⊗pairs}.
    pub fn on_pairs(&self, pairs: usize, pos: usize) -> SparseOp {
        assert!(pos >= 1 && pos < pairs);
        self.op.embed(self.n, 4, 2 * pairs, 2 * (pos - 1))
    }

    /// Braid equation on (V⊗V)^{⊗3}, evaluated once and cached.
    pub fn braid_equation(&self) -> bool {
        *self.braid_ok.get_or_init(|| {
            let a = self.on_pairs(3, 1);
            let b = self.on_pairs(3, 2);
            a.compose(&b).compose(&a) == b.compose(&a).compose(&b)
        })
    }

    /// The negated transpose, the braiding of the quadratic dual; its
    /// braided factorials carry the exterior-algebra flatness data.
    pub fn dual_signed_braiding(&self) -> SparseOp {
        let dim = self.op.dim();
        let minus = RatQ::from_int(-1);
        let mut cols = vec![SparseVec::new(); dim];
        for (j, col) in self.op.cols.iter().enumerate() {
            for (&i, c) in col {
                cols[i].insert(j, c.mul(&minus));
            }
        }
        SparseOp { dim, cols }
    }
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc as usize
}

#[derive(Debug, Clone)]
pub struct PsiReport {
    pub n: usize,
    pub dim: usize,
    /// (Ψ-1)(Ψ+q²)(Ψ+q^{-2}) = 0.
    pub cubic_hecke: bool,
    /// The displayed inverse word is a two-sided inverse of Ψ.
    pub inverse_formula: bool,
    /// Braid equation on (V⊗V)^{⊗3}; evaluated for n ≤ 3.
    pub braid_equation: Option<bool>,
    pub rank_minus_one: usize,
    /// dim Λ²(V⊗V): the rank needed by the flatness criterion.
    pub pair_wedge_dim: usize,
    /// dim Λ²V: the other, smaller reading of the stated rank identity.
    pub vector_wedge_dim: usize,
    pub rank_matches_pair_wedge: bool,
    pub specializes_to_swap: bool,
}

impl PsiReport {
    pub fn all_verified(&self) -> bool {
        self.cubic_hecke
            && self.inverse_formula
            && self.braid_equation.unwrap_or(true)
            && self.rank_matches_pair_wedge
            && self.specializes_to_swap
    }
}

/// Builds Ψ for an n-dimensional vector space and certifies its stated
/// properties. Desk scale: 2 ≤ n ≤ 4; the braid equation (dimension n⁶)
/// is evaluated for n ≤ 3.
pub fn build_psi(n: usize) -> Result<(PsiOperator, PsiReport), UberError> {
    if n < 2 {
        return Err(UberError::RankTooSmall(n, 2));
    }
    if n > 4 {
        return Err(UberError::RankTooLarge(n, 4));
    }
    let dim = n.pow(4);
    let op = psi_sum(n, 4, 0);
    let psi = PsiOperator { n, op, braid_ok: OnceCell::new() };

    let id = SparseOp::identity(dim);
    let q2 = RatQ::q_pow(2);
    let qm2 = RatQ::q_pow(-2);
    let cubic_hecke = psi
        .op
        .sub(&id)
        .compose(&psi.op.add(&id.scale(&q2)))
        .compose(&psi.op.add(&id.scale(&qm2)))
        .is_zero();

    let inv = psi_inverse_sum(n, 4, 0);
    let inverse_formula =
        psi.op.compose(&inv).is_identity() && inv.compose(&psi.op).is_identity();

    let braid_equation = if n <= 3 { Some(psi.braid_equation()) } else { None };

    let minus_one = psi.op.sub(&id);
    let rank_minus_one = minus_one.rank();
    let pair_wedge_dim = binomial(n * n, 2);
    let vector_wedge_dim = binomial(n, 2);

    let specializes_to_swap = match psi.op.specialize_q1() {
        None => false,
        Some(q1) => (0..dim).all(|j| {
            let d = digits(j, n, 4);
            let target = index(&[d[2], d[3], d[0], d[1]], n);
            let col = q1.col(j);
            col.len() == 1 && col.get(&target).is_some_and(RatQ::is_one)
        }),
    };

    let report = PsiReport {
        n,
        dim,
        cubic_hecke,
        inverse_formula,
        braid_equation,
        rank_minus_one,
        pair_wedge_dim,
        vector_wedge_dim,
        rank_matches_pair_wedge: rank_minus_one == pair_wedge_dim,
        specializes_to_swap,
    };
    Ok((psi, report))
}

/// One-line-notation permutations of {0, .., k-1} with a reduced word
/// (1-based adjacent transposition indices) for each.
fn reduced_words(k: usize) -> Vec<(Vec<usize>, Vec<usize>)> {
    let id: Vec<usize> = (0..k).collect();
    let inversions = |p: &[usize]| {
        let mut c = 0usize;
        for i in 0..p.len() {
            for j in i + 1..p.len() {
                if p[i] > p[j] {
                    c += 1;
                }
            }
        }
        c
    };
    let mut out: BTreeMap<Vec<usize>, Vec<usize>> = BTreeMap::new();
    out.insert(id.clone(), Vec::new());
    let mut frontier = vec![id];
    while !frontier.is_empty() {
        let mut next = Vec::new();
        for w in frontier {
            let base = inversions(&w);
            for i in 0..k - 1 {
                let mut v = w.clone();
                v.swap(i, i + 1);
                if inversions(&v) == base + 1 && !out.contains_key(&v) {
                    let mut word = out[&w].clone();
                    word.push(i + 1);
                    out.insert(v.clone(), word);
                    next.push(v);
                }
            }
        }
        frontier = next;
    }
    out.into_iter().collect()
}

#[derive(Debug, Clone)]
pub struct FactorialReport {
    pub k: usize,
    /// Dimension of the underlying space W; the braiding acts on W⊗W.
    pub block: usize,
    pub dim: usize,
    pub kernel_dim: usize,
    pub classical_kernel_dim: Option<usize>,
    /// Kernel dimension is constant under q = 1 specialization.
    pub flat: Option<bool>,
    /// +1 when the braiding specializes to the block swap, -1 for the
    /// negated swap, None otherwise.
    pub classical_sign: Option<i8>,
    /// Kernel dimension of the classical (anti)symmetrizer: dim − dim S^k W
    /// for sign +1, dim − dim Λ^k W for sign -1.
    pub expected_classical_kernel: Option<usize>,
}

/// The braided factorial Σ_{w ∈ S_k} β_w on W^{⊗k} for a braiding β on
/// W⊗W with dim W = block, together with exact and q = 1 kernel
/// dimensions. The braid equation is verified first on W^{⊗3}; desk
/// scale bounds every ambient dimension by 1024.
pub fn braided_factorial(
    braiding: &SparseOp,
    block: usize,
    k: usize,
) -> Result<(SparseOp, FactorialReport), UberError> {
    if k == 0 || k > 4 {
        return Err(UberError::FactorialOrder(k));
    }
    if braiding.dim() != block * block {
        return Err(UberError::DimensionTooLarge(braiding.dim(), block * block));
    }
    let dim = block.pow(k as u32);
    let braid_dim = block.pow(3);
    if dim > 1024 || braid_dim > 1024 {
        return Err(UberError::DimensionTooLarge(dim.max(braid_dim), 1024));
    }
    let a = braiding.embed(block, 2, 3, 0);
    let b = braiding.embed(block, 2, 3, 1);
    if a.compose(&b).compose(&a) != b.compose(&a).compose(&b) {
        return Err(UberError::NotBraiding);
    }

    let words = reduced_words(k);
    let build = |slots: &[SparseOp]| {
        let mut acc = SparseOp::zero(dim);
        for (_, word) in &words {
            let mut term = SparseOp::identity(dim);
            for &i in word {
                term = term.compose(&slots[i - 1]);
            }
            acc = acc.add(&term);
        }
        acc
    };

    let slots: Vec<SparseOp> = (1..k).map(|i| braiding.embed(block, 2, k, i - 1)).collect();
    let factorial = build(&slots);
    let kernel_dim = dim - factorial.rank();

    let mut classical_kernel_dim = None;
    let mut classical_sign = None;
    let mut expected_classical_kernel = None;
    if let Some(q1) = braiding.specialize_q1() {
        let q1_slots: Vec<SparseOp> = (1..k).map(|i| q1.embed(block, 2, k, i - 1)).collect();
        let q1_factorial = build(&q1_slots);
        classical_kernel_dim = Some(dim - q1_factorial.rank());

        let swap = {
            let mut cols = Vec::with_capacity(block * block);
            for a in 0..block {
                for b in 0..block {
                    cols.push(SparseVec::from([(b * block + a, RatQ::one())]));
                }
            }
            SparseOp::from_cols(cols)
        };
        if q1 == swap {
            classical_sign = Some(1);
            expected_classical_kernel = Some(dim - binomial(block + k - 1, k));
        } else if q1 == swap.scale(&RatQ::from_int(-1)) {
            classical_sign = Some(-1);
            expected_classical_kernel = Some(dim - binomial(block, k));
        }
    }

    let report = FactorialReport {
        k,
        block,
        dim,
        kernel_dim,
        classical_kernel_dim,
        flat: classical_kernel_dim.map(|c| c == kernel_dim),
        classical_sign,
        expected_classical_kernel,
    };
    Ok((factorial, report))
}
