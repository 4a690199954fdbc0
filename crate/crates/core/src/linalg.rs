//! Exact linear algebra over `RatQ`: incremental sparse row echelon
//! bases keyed by arbitrary ordered coordinates, plus dense rank and
//! kernel helpers.

use std::collections::BTreeMap;

use crate::qrat::RatQ;

pub type SparseVec<K> = BTreeMap<K, RatQ>;

pub fn sparse_add_scaled<K: Ord + Clone>(dst: &mut SparseVec<K>, src: &SparseVec<K>, c: &RatQ) {
    for (k, v) in src {
        let merged = match dst.get(k) {
            Some(old) => old.add(&v.mul(c)),
            None => v.mul(c),
        };
        if merged.is_zero() {
            dst.remove(k);
        } else {
            dst.insert(k.clone(), merged);
        }
    }
}

/// Row echelon basis built incrementally; each stored row is
/// normalized to leading (largest-key) coefficient one.
#[derive(Debug, Clone, Default)]
pub struct Eliminator<K: Ord + Clone> {
    rows: BTreeMap<K, SparseVec<K>>,
}

impl<K: Ord + Clone> Eliminator<K> {
    pub fn new() -> Self {
        Eliminator { rows: BTreeMap::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Reduces `v` against the stored rows until its leading key has no
    /// pivot; the result is zero iff `v` lies in the row space.
    pub fn reduce(&self, v: &SparseVec<K>) -> SparseVec<K> {
        let mut cur = v.clone();
        while let Some((lead, c)) = cur.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) {
            match self.rows.get(&lead) {
                Some(pivot) => {
                    let factor = c.neg();
                    sparse_add_scaled(&mut cur, pivot, &factor);
                    debug_assert!(!cur.contains_key(&lead));
                }
                None => break,
            }
        }
        cur
    }

    pub fn contains(&self, v: &SparseVec<K>) -> bool {
        self.reduce(v).is_empty()
    }

    /// Adds `v` to the row space; returns `true` if the rank grew.
    pub fn insert(&mut self, v: SparseVec<K>) -> bool {
        let reduced = self.reduce(&v);
        match reduced.iter().next_back().map(|(k, c)| (k.clone(), c.clone())) {
            None => false,
            Some((lead, c)) => {
                let inv = c.inv();
                let normalized: SparseVec<K> =
                    reduced.iter().map(|(k, x)| (k.clone(), x.mul(&inv))).collect();
                self.rows.insert(lead, normalized);
                true
            }
        }
    }
}

/// Rank of a dense matrix given as rows.
pub fn dense_rank(rows: &[Vec<RatQ>]) -> usize {
    let mut elim: Eliminator<usize> = Eliminator::new();
    for row in rows {
        let v: SparseVec<usize> = row
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(j, c)| (j, c.clone()))
            .collect();
        elim.insert(v);
    }
    elim.rank()
}

/// Basis of the right kernel `{x : M x = 0}` of a dense matrix.
pub fn dense_kernel(rows: &[Vec<RatQ>], ncols: usize) -> Vec<Vec<RatQ>> {
    let mut work: Vec<Vec<RatQ>> = rows
        .iter()
        .map(|r| {
            assert_eq!(r.len(), ncols);
            r.clone()
        })
        .collect();
    let nrows = work.len();
    let mut pivot_col_of_row = Vec::new();
    let mut pivot_cols = vec![false; ncols];
    let mut r = 0usize;
    for col in 0..ncols {
        let Some(sel) = (r..nrows).find(|&i| !work[i][col].is_zero()) else {
            continue;
        };
        work.swap(r, sel);
        let inv = work[r][col].inv();
        for j in col..ncols {
            work[r][j] = work[r][j].mul(&inv);
        }
        for i in 0..nrows {
            if i != r && !work[i][col].is_zero() {
                let f = work[i][col].clone();
                for j in col..ncols {
                    let sub = work[r][j].mul(&f);
                    work[i][j] = work[i][j].sub(&sub);
                }
            }
        }
        pivot_col_of_row.push(col);
        pivot_cols[col] = true;
        r += 1;
        if r == nrows {
            break;
        }
    }
    let mut kernel = Vec::new();
    for free in 0..ncols {
        if pivot_cols[free] {
            continue;
        }
        let mut x = vec![RatQ::zero(); ncols];
        x[free] = RatQ::one();
        for (row, &pc) in pivot_col_of_row.iter().enumerate() {
            x[pc] = work[row][free].neg();
        }
        kernel.push(x);
    }
    kernel
}

/// Dense matrix product.
pub fn dense_mul(a: &[Vec<RatQ>], b: &[Vec<RatQ>]) -> Vec<Vec<RatQ>> {
    let n = a.len();
    let m = b.first().map_or(0, Vec::len);
    let inner = b.len();
    let mut out = vec![vec![RatQ::zero(); m]; n];
    for (i, arow) in a.iter().enumerate() {
        assert_eq!(arow.len(), inner);
        for (k, aik) in arow.iter().enumerate() {
            if aik.is_zero() {
                continue;
            }
            for (j, bkj) in b[k].iter().enumerate() {
                if bkj.is_zero() {
                    continue;
                }
                out[i][j] = out[i][j].add(&aik.mul(bkj));
            }
        }
    }
    out
}

/// Bareiss fraction-free echelon pass; returns (rank, det-of-leading-square
/// when the matrix is square, else None).  The two-term recurrence keeps every
/// intermediate entry a quotient of minors, which bounds coefficient growth in
/// `q` far better than plain Gaussian division chains.
fn bareiss_echelon(rows: &[Vec<RatQ>]) -> (usize, Option<RatQ>) {
    let nrows = rows.len();
    let ncols = rows.first().map_or(0, Vec::len);
    let square = nrows == ncols && rows.iter().all(|r| r.len() == ncols);
    let mut work = rows.to_vec();
    let mut prev = RatQ::one();
    let mut sign = false;
    let mut r = 0usize;
    for c in 0..ncols {
        let Some(sel) = (r..nrows).find(|&i| !work[i][c].is_zero()) else {
            continue;
        };
        if sel != r {
            work.swap(r, sel);
            sign = !sign;
        }
        let pivot = work[r][c].clone();
        for i in r + 1..nrows {
            for j in c + 1..ncols {
                let num = pivot.mul(&work[i][j]).sub(&work[i][c].mul(&work[r][j]));
                work[i][j] = num.div(&prev);
            }
            work[i][c] = RatQ::zero();
        }
        prev = pivot;
        r += 1;
        if r == nrows {
            break;
        }
    }
    let det = if square {
        let d = if r == nrows { prev } else { RatQ::zero() };
        Some(if sign { d.neg() } else { d })
    } else {
        None
    };
    (r, det)
}

/// Rank by Bareiss fraction-free elimination.
pub fn bareiss_rank(rows: &[Vec<RatQ>]) -> usize {
    bareiss_echelon(rows).0
}

/// Determinant by Bareiss fraction-free elimination; the last pivot is the
/// determinant itself, with no division by earlier pivots left over.
pub fn bareiss_det(rows: &[Vec<RatQ>]) -> RatQ {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        panic!("determinant of a non-square matrix");
    }
    bareiss_echelon(rows).1.expect("square input")
}

/// Determinant by plain Gaussian elimination on `RatQ` entries.
pub fn dense_det(rows: &[Vec<RatQ>]) -> RatQ {
    let n = rows.len();
    if rows.iter().any(|r| r.len() != n) {
        panic!("determinant of a non-square matrix");
    }
    let mut work = rows.to_vec();
    let mut det = RatQ::one();
    for col in 0..n {
        let Some(sel) = (col..n).find(|&i| !work[i][col].is_zero()) else {
            return RatQ::zero();
        };
        if sel != col {
            work.swap(col, sel);
            det = det.neg();
        }
        let pivot = work[col][col].clone();
        det = det.mul(&pivot);
        let inv = pivot.inv();
        for i in col + 1..n {
            if work[i][col].is_zero() {
                continue;
            }
            let f = work[i][col].mul(&inv);
            for j in col..n {
                let sub = work[col][j].mul(&f);
                work[i][j] = work[i][j].sub(&sub);
            }
        }
    }
    det
}
