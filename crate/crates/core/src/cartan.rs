//! Cartan data, diagram automorphisms, folded Cartan matrices, and Weyl
//! group words.
//!
//! Weyl group elements are represented by their matrices on simple-root
//! coordinates. Reduced-word tests and longest elements use the ascent
//! criterion: appending `s_i` lengthens `w` exactly when `w(alpha_i)` is
//! positive.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::freealg::{FreeAlgError, GeneratorSet};

#[derive(Debug, Error)]
pub enum CartanError {
    #[error("bad Cartan datum: {0}")]
    BadDatum(String),
    #[error("datum is not simply laced")]
    NotSimplyLaced,
    #[error("permutation is not a diagram automorphism")]
    NotAutomorphism,
    #[error("automorphism is not admissible: orbit of {0} is not discrete")]
    NotAdmissible(usize),
    #[error("word is not reduced")]
    NotReduced,
    #[error("node index {0} out of range")]
    IndexOutOfRange(usize),
    #[error("unknown node label {0:?}")]
    UnknownLabel(String),
    #[error("bad automorphism string: {0}")]
    ParseAut(String),
    #[error("Weyl group appears to be infinite")]
    NonFiniteType,
    #[error(transparent)]
    Generators(#[from] FreeAlgError),
}

/// Cartan matrix with symmetrizers and printable node labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CartanDatum {
    labels: Vec<String>,
    a: Vec<Vec<i64>>,
    d: Vec<i64>,
}

impl CartanDatum {
    pub fn new(labels: Vec<String>, a: Vec<Vec<i64>>, d: Vec<i64>) -> Result<Self, CartanError> {
        let n = labels.len();
        if a.len() != n || a.iter().any(|r| r.len() != n) || d.len() != n {
            return Err(CartanError::BadDatum("dimension mismatch".into()));
        }
        for i in 0..n {
            if a[i][i] != 2 {
                return Err(CartanError::BadDatum(format!("a[{i}][{i}] != 2")));
            }
            if d[i] <= 0 {
                return Err(CartanError::BadDatum(format!("d[{i}] <= 0")));
            }
            for j in 0..n {
                if i != j && a[i][j] > 0 {
                    return Err(CartanError::BadDatum(format!("a[{i}][{j}] > 0")));
                }
                if d[i] * a[i][j] != d[j] * a[j][i] {
                    return Err(CartanError::BadDatum("not symmetrizable by d".into()));
                }
            }
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.clone()) {
                return Err(CartanError::BadDatum(format!("duplicate label {l:?}")));
            }
        }
        Ok(CartanDatum { labels, a, d })
    }

    /// Chain of `n` nodes labelled `1..n`.
    pub fn type_a(n: usize) -> Self {
        let labels = (1..=n).map(|i| i.to_string()).collect();
        let mut a = vec![vec![0i64; n]; n];
        for i in 0..n {
            a[i][i] = 2;
            if i + 1 < n {
                a[i][i + 1] = -1;
                a[i + 1][i] = -1;
            }
        }
        CartanDatum { labels, a, d: vec![1; n] }
    }

    /// Fork with tine nodes `-1`, `0` joined to a chain `1..n-1`;
    /// `n + 1` nodes in total.
    pub fn type_d_fork(n: usize) -> Result<Self, CartanError> {
        if n < 2 {
            return Err(CartanError::BadDatum("fork needs at least 3 nodes".into()));
        }
        let labels: Vec<String> = (-1..n as i64).map(|i| i.to_string()).collect();
        let m = n + 1;
        let mut a = vec![vec![0i64; m]; m];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        // positions: -1 -> 0, 0 -> 1, k -> k+1
        a[0][2] = -1;
        a[2][0] = -1;
        a[1][2] = -1;
        a[2][1] = -1;
        for k in 2..n {
            a[k][k + 1] = -1;
            a[k + 1][k] = -1;
        }
        Ok(CartanDatum { labels, a, d: vec![1; m] })
    }

    /// Star with center `0` joined to `1`, `2`, `3`.
    pub fn d4_star() -> Self {
        let labels = (0..4).map(|i| i.to_string()).collect();
        let mut a = vec![vec![0i64; 4]; 4];
        for (i, row) in a.iter_mut().enumerate() {
            row[i] = 2;
        }
        for outer in 1..4 {
            a[0][outer] = -1;
            a[outer][0] = -1;
        }
        CartanDatum { labels, a, d: vec![1; 4] }
    }

    /// Disjoint union; the `k`-th copy gets `k` primes appended to its
    /// labels.
    pub fn disjoint_union(parts: &[&CartanDatum]) -> Self {
        let mut labels = Vec::new();
        let mut d = Vec::new();
        let total: usize = parts.iter().map(|p| p.rank()).sum();
        let mut a = vec![vec![0i64; total]; total];
        let mut off = 0;
        for (k, part) in parts.iter().enumerate() {
            let primes = "'".repeat(k);
            for i in 0..part.rank() {
                labels.push(format!("{}{}", part.labels[i], primes));
                d.push(part.d[i]);
                for j in 0..part.rank() {
                    a[off + i][off + j] = part.a[i][j];
                }
            }
            off += part.rank();
        }
        CartanDatum { labels, a, d }
    }

    pub fn rank(&self) -> usize {
        self.labels.len()
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of_label(&self, label: &str) -> Result<usize, CartanError> {
        self.labels
            .iter()
            .position(|l| l == label)
            .ok_or_else(|| CartanError::UnknownLabel(label.to_string()))
    }

    pub fn a(&self, i: usize, j: usize) -> i64 {
        self.a[i][j]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.a
    }

    pub fn d(&self, i: usize) -> i64 {
        self.d[i]
    }

    pub fn symmetrizers(&self) -> &[i64] {
        &self.d
    }

    /// Symmetrized entry `d_i a_ij`.
    pub fn c(&self, i: usize, j: usize) -> i64 {
        self.d[i] * self.a[i][j]
    }

    pub fn sym_matrix(&self) -> Vec<Vec<i64>> {
        (0..self.rank())
            .map(|i| (0..self.rank()).map(|j| self.c(i, j)).collect())
            .collect()
    }

    pub fn is_simply_laced(&self) -> bool {
        self.d.iter().all(|&x| x == 1)
            && self
                .a
                .iter()
                .enumerate()
                .all(|(i, row)| row.iter().enumerate().all(|(j, &x)| i == j || x >= -1))
    }

    /// Positive generators named `E<label>` with simple-root weights and
    /// the symmetrized Cartan pairing.
    pub fn positive_generators(&self) -> Result<Arc<GeneratorSet>, CartanError> {
        let names = self.labels.iter().map(|l| format!("E{l}")).collect();
        let weights = (0..self.rank())
            .map(|i| {
                (0..self.rank())
                    .map(|j| i64::from(i == j))
                    .collect::<Vec<_>>()
            })
            .collect();
        Ok(GeneratorSet::new(names, weights, self.sym_matrix())?)
    }

    /// `s_i(v)` on simple-root coordinates.
    pub fn reflect(&self, i: usize, v: &[i64]) -> Vec<i64> {
        let mut out = v.to_vec();
        let amount: i64 = (0..self.rank()).map(|j| self.a[i][j] * v[j]).sum();
        out[i] -= amount;
        out
    }

    /// Applies `s_{i_1} ... s_{i_k}` to `v` (rightmost letter first).
    pub fn apply_word(&self, word: &[usize], v: &[i64]) -> Vec<i64> {
        let mut out = v.to_vec();
        for &i in word.iter().rev() {
            out = self.reflect(i, &out);
        }
        out
    }

    pub fn simple_root(&self, i: usize) -> Vec<i64> {
        (0..self.rank()).map(|j| i64::from(i == j)).collect()
    }

    /// Roots `s_{i_1}...s_{i_{k-1}}(alpha_{i_k})` for `k = 1..=len`.
    pub fn root_sequence(&self, word: &[usize]) -> Vec<Vec<i64>> {
        (0..word.len())
            .map(|k| self.apply_word(&word[..k], &self.simple_root(word[k])))
            .collect()
    }

    pub fn is_reduced(&self, word: &[usize]) -> bool {
        let mut m = WeylMat::identity(self.rank());
        for &i in word {
            if i >= self.rank() || !m.column_positive(i) {
                return false;
            }
            m.mul_reflection(self, i);
        }
        true
    }

    /// A reduced word for the longest element; smallest ascent first.
    pub fn longest_word(&self) -> Result<Vec<usize>, CartanError> {
        let mut m = WeylMat::identity(self.rank());
        let mut word = Vec::new();
        loop {
            match (0..self.rank()).find(|&i| m.column_positive(i)) {
                Some(i) => {
                    word.push(i);
                    m.mul_reflection(self, i);
                }
                None => return Ok(word),
            }
            if word.len() > 100_000 {
                return Err(CartanError::NonFiniteType);
            }
        }
    }

    /// All reduced words of the element given by one reduced word.
    pub fn all_reduced_words(&self, word: &[usize]) -> Result<Vec<Vec<usize>>, CartanError> {
        if !self.is_reduced(word) {
            return Err(CartanError::NotReduced);
        }
        let mut m = WeylMat::identity(self.rank());
        for &i in word {
            m.mul_reflection(self, i);
        }
        let mut memo: HashMap<Vec<i64>, Vec<Vec<usize>>> = HashMap::new();
        Ok(self.reduced_words_rec(&m, &mut memo))
    }

    fn reduced_words_rec(
        &self,
        m: &WeylMat,
        memo: &mut HashMap<Vec<i64>, Vec<Vec<usize>>>,
    ) -> Vec<Vec<usize>> {
        if let Some(hit) = memo.get(&m.entries) {
            return hit.clone();
        }
        if m.is_identity() {
            return vec![vec![]];
        }
        let mut out = Vec::new();
        for i in 0..self.rank() {
            if !m.column_negative(i) {
                continue;
            }
            let mut shorter = m.clone();
            shorter.mul_reflection(self, i);
            for mut w in self.reduced_words_rec(&shorter, memo) {
                w.push(i);
                out.push(w);
            }
        }
        memo.insert(m.entries.clone(), out.clone());
        out
    }
}

/// Matrix of a Weyl group element; column `j` is the image of
/// `alpha_j` in simple-root coordinates.
#[derive(Debug, Clone, PartialEq, Eq)]
struct WeylMat {
    n: usize,
    entries: Vec<i64>,
}

impl WeylMat {
    fn identity(n: usize) -> Self {
        let mut entries = vec![0i64; n * n];
        for i in 0..n {
            entries[i * n + i] = 1;
        }
        WeylMat { n, entries }
    }

    fn is_identity(&self) -> bool {
        *self == WeylMat::identity(self.n)
    }

    fn column_positive(&self, j: usize) -> bool {
        (0..self.n).all(|r| self.entries[r * self.n + j] >= 0)
            && (0..self.n).any(|r| self.entries[r * self.n + j] != 0)
    }

    fn column_negative(&self, j: usize) -> bool {
        (0..self.n).all(|r| self.entries[r * self.n + j] <= 0)
            && (0..self.n).any(|r| self.entries[r * self.n + j] != 0)
    }

    /// Right-multiplies by `s_i`: column `j` becomes
    /// `col_j - a_ij col_i`.
    fn mul_reflection(&mut self, datum: &CartanDatum, i: usize) {
        let n = self.n;
        let col_i: Vec<i64> = (0..n).map(|r| self.entries[r * n + i]).collect();
        for j in 0..n {
            let aij = datum.a(i, j);
            if aij == 0 {
                continue;
            }
            for (r, ci) in col_i.iter().enumerate() {
                self.entries[r * n + j] -= aij * ci;
            }
        }
    }
}

/// Admissible diagram automorphism: a Cartan-matrix-preserving
/// permutation whose orbits contain no adjacent nodes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiagramAut {
    perm: Vec<usize>,
    orbits: Vec<Vec<usize>>,
}

impl DiagramAut {
    pub fn new(datum: &CartanDatum, perm: Vec<usize>) -> Result<Self, CartanError> {
        let n = datum.rank();
        if perm.len() != n {
            return Err(CartanError::BadDatum("permutation length mismatch".into()));
        }
        let mut seen = vec![false; n];
        for &p in &perm {
            if p >= n || seen[p] {
                return Err(CartanError::NotAutomorphism);
            }
            seen[p] = true;
        }
        for i in 0..n {
            if datum.d(perm[i]) != datum.d(i) {
                return Err(CartanError::NotAutomorphism);
            }
            for j in 0..n {
                if datum.a(perm[i], perm[j]) != datum.a(i, j) {
                    return Err(CartanError::NotAutomorphism);
                }
            }
        }
        let mut orbits = Vec::new();
        let mut assigned = vec![false; n];
        for start in 0..n {
            if assigned[start] {
                continue;
            }
            let mut orbit = vec![start];
            assigned[start] = true;
            let mut cur = perm[start];
            while cur != start {
                orbit.push(cur);
                assigned[cur] = true;
                cur = perm[cur];
            }
            orbit.sort_unstable();
            orbits.push(orbit);
        }
        for orbit in &orbits {
            for (pos, &i) in orbit.iter().enumerate() {
                for &j in &orbit[pos + 1..] {
                    if datum.a(i, j) != 0 {
                        return Err(CartanError::NotAdmissible(i));
                    }
                }
            }
        }
        Ok(DiagramAut { perm, orbits })
    }

    pub fn identity(datum: &CartanDatum) -> Self {
        DiagramAut {
            perm: (0..datum.rank()).collect(),
            orbits: (0..datum.rank()).map(|i| vec![i]).collect(),
        }
    }

    /// Parses cycle notation over node labels, e.g. `"(1 2 3)"` or
    /// `"(1 1')(2 2')"`; `"()"` is the identity.
    pub fn parse(datum: &CartanDatum, s: &str) -> Result<Self, CartanError> {
        let mut perm: Vec<usize> = (0..datum.rank()).collect();
        let body = s.trim();
        let mut rest = body;
        while !rest.is_empty() {
            let open = rest
                .find('(')
                .ok_or_else(|| CartanError::ParseAut(format!("expected `(` in {body:?}")))?;
            if !rest[..open].trim().is_empty() {
                return Err(CartanError::ParseAut(format!("stray text in {body:?}")));
            }
            let close = rest[open..]
                .find(')')
                .ok_or_else(|| CartanError::ParseAut(format!("unbalanced parens in {body:?}")))?
                + open;
            let cycle: Vec<usize> = rest[open + 1..close]
                .split([' ', ','])
                .filter(|t| !t.trim().is_empty())
                .map(|t| datum.index_of_label(t.trim()))
                .collect::<Result<_, _>>()?;
            for k in 0..cycle.len() {
                let from = cycle[k];
                let to = cycle[(k + 1) % cycle.len()];
                if perm[from] != from {
                    return Err(CartanError::ParseAut(format!(
                        "label {:?} appears twice",
                        datum.label(from)
                    )));
                }
                if from != to {
                    perm[from] = to;
                }
            }
            rest = &rest[close + 1..];
        }
        Self::new(datum, perm)
    }

    pub fn apply(&self, i: usize) -> usize {
        self.perm[i]
    }

    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn orbit_index(&self, i: usize) -> usize {
        self.orbits
            .iter()
            .position(|o| o.contains(&i))
            .expect("node in some orbit")
    }

    pub fn is_identity(&self) -> bool {
        self.perm.iter().enumerate().all(|(i, &p)| p == i)
    }
}

/// Folded Cartan data for a simply-laced datum with an admissible
/// automorphism. `folded` carries the Cartan matrix of the Langlands
/// dual of the fixed subalgebra: `A = (A')^T`, `d_r = |orbit r|`, so
/// that the symmetrized matrix is `C^sigma`.
#[derive(Debug, Clone)]
pub struct Folding {
    pub ambient: CartanDatum,
    pub aut: DiagramAut,
    pub c_sigma: Vec<Vec<i64>>,
    pub a_prime: Vec<Vec<i64>>,
    pub folded: CartanDatum,
}

pub fn fold_cartan(datum: &CartanDatum, aut: &DiagramAut) -> Result<Folding, CartanError> {
    if !datum.is_simply_laced() {
        return Err(CartanError::NotSimplyLaced);
    }
    let orbits = aut.orbits();
    let m = orbits.len();
    let mut c_sigma = vec![vec![0i64; m]; m];
    let mut a_prime = vec![vec![0i64; m]; m];
    for (r, orbit_r) in orbits.iter().enumerate() {
        for (s, orbit_s) in orbits.iter().enumerate() {
            for &i in orbit_r {
                for &j in orbit_s {
                    c_sigma[r][s] += datum.c(i, j);
                }
            }
            let sums: Vec<i64> = orbit_s
                .iter()
                .map(|&j| orbit_r.iter().map(|&i| datum.a(i, j)).sum())
                .collect();
            assert!(
                sums.windows(2).all(|w| w[0] == w[1]),
                "column sums must not depend on the orbit representative"
            );
            a_prime[r][s] = sums[0];
        }
    }
    let folded_a: Vec<Vec<i64>> = (0..m)
        .map(|r| (0..m).map(|s| a_prime[s][r]).collect())
        .collect();
    let folded_d: Vec<i64> = orbits.iter().map(|o| o.len() as i64).collect();
    let labels = (0..m).map(|r| r.to_string()).collect();
    let folded = CartanDatum::new(labels, folded_a, folded_d)?;
    for r in 0..m {
        for s in 0..m {
            assert_eq!(c_sigma[r][s], folded.c(r, s), "symmetrization must match the orbit sums");
        }
    }
    Ok(Folding {
        ambient: datum.clone(),
        aut: aut.clone(),
        c_sigma,
        a_prime,
        folded,
    })
}

impl Folding {
    pub fn orbits(&self) -> &[Vec<usize>] {
        self.aut.orbits()
    }

    /// Substitutes each folded letter by its orbit in ambient order and
    /// checks the result is reduced of the full expected length.
    pub fn hat_lift(&self, word: &[usize]) -> Result<Vec<usize>, CartanError> {
        if !self.folded.is_reduced(word) {
            return Err(CartanError::NotReduced);
        }
        let orbits = self.orbits();
        let mut lifted = Vec::new();
        for &r in word {
            if r >= orbits.len() {
                return Err(CartanError::IndexOutOfRange(r));
            }
            lifted.extend_from_slice(&orbits[r]);
        }
        for orbit in orbits {
            let fwd: Vec<usize> = orbit.clone();
            let mut rev = fwd.clone();
            rev.reverse();
            for v in 0..self.ambient.rank() {
                let e = self.ambient.simple_root(v);
                if self.ambient.apply_word(&fwd, &e) != self.ambient.apply_word(&rev, &e) {
                    return Err(CartanError::NotAdmissible(orbit[0]));
                }
            }
        }
        if !self.ambient.is_reduced(&lifted) {
            return Err(CartanError::NotReduced);
        }
        Ok(lifted)
    }
}

impl fmt::Display for CartanDatum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "nodes: {}", self.labels.join(" "))?;
        writeln!(f, "d: {:?}", self.d)?;
        for row in &self.a {
            writeln!(f, "{row:?}")?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fold_star_with_triality() {
        let d4 = CartanDatum::d4_star();
        let aut = DiagramAut::parse(&d4, "(1 2 3)").unwrap();
        let f = fold_cartan(&d4, &aut).unwrap();
        assert_eq!(f.c_sigma, vec![vec![2, -3], vec![-3, 6]]);
        assert_eq!(f.a_prime, vec![vec![2, -1], vec![-3, 2]]);
        assert_eq!(f.folded.matrix(), &[vec![2, -3], vec![-1, 2]]);
        assert_eq!(f.folded.symmetrizers(), &[1, 3]);
    }

    #[test]
    fn fold_with_identity_keeps_the_matrix() {
        let a3 = CartanDatum::type_a(3);
        let aut = DiagramAut::identity(&a3);
        let f = fold_cartan(&a3, &aut).unwrap();
        assert_eq!(f.c_sigma, a3.sym_matrix());
        assert_eq!(f.folded.matrix(), a3.matrix());
    }

    #[test]
    fn fold_fork_swap() {
        let d3 = CartanDatum::type_d_fork(2).unwrap();
        let aut = DiagramAut::parse(&d3, "(-1 0)").unwrap();
        let f = fold_cartan(&d3, &aut).unwrap();
        assert_eq!(f.c_sigma, vec![vec![4, -2], vec![-2, 2]]);
        assert_eq!(f.folded.symmetrizers(), &[2, 1]);
    }

    #[test]
    fn adjacent_orbits_are_rejected() {
        let a2 = CartanDatum::type_a(2);
        let err = DiagramAut::parse(&a2, "(1 2)").unwrap_err();
        assert!(matches!(err, CartanError::NotAdmissible(_)));
        let d4 = CartanDatum::d4_star();
        let err = DiagramAut::parse(&d4, "(0 1)").unwrap_err();
        assert!(matches!(err, CartanError::NotAutomorphism));
    }

    #[test]
    fn rank_two_reflections() {
        let a2 = CartanDatum::type_a(2);
        assert_eq!(a2.reflect(0, &a2.simple_root(1)), vec![1, 1]);
        assert_eq!(a2.reflect(0, &a2.simple_root(0)), vec![-1, 0]);
        let w = a2.apply_word(&[0, 1, 0], &a2.simple_root(0));
        assert_eq!(w, vec![0, -1]);
    }

    #[test]
    fn reduced_words_of_the_longest_element() {
        let a2 = CartanDatum::type_a(2);
        let w0 = a2.longest_word().unwrap();
        assert_eq!(w0.len(), 3);
        let mut all = a2.all_reduced_words(&w0).unwrap();
        all.sort();
        assert_eq!(all, vec![vec![0, 1, 0], vec![1, 0, 1]]);
        assert!(a2.is_reduced(&[0, 1, 0]));
        assert!(!a2.is_reduced(&[0, 0, 1]));
    }

    #[test]
    fn longest_lengths_match_positive_root_counts() {
        assert_eq!(CartanDatum::type_a(3).longest_word().unwrap().len(), 6);
        assert_eq!(CartanDatum::d4_star().longest_word().unwrap().len(), 12);
        assert_eq!(
            CartanDatum::type_d_fork(3).unwrap().longest_word().unwrap().len(),
            12
        );
        let g2 = fold_cartan(
            &CartanDatum::d4_star(),
            &DiagramAut::parse(&CartanDatum::d4_star(), "(1 2 3)").unwrap(),
        )
        .unwrap()
        .folded;
        assert_eq!(g2.longest_word().unwrap().len(), 6);
        assert!(g2.is_reduced(&[0, 1, 0, 1, 0, 1]));
        assert!(g2.is_reduced(&[1, 0, 1, 0, 1, 0]));
        assert!(!g2.is_reduced(&[0, 1, 0, 1, 0, 1, 0]));
    }

    #[test]
    fn hat_lift_substitutes_orbits() {
        let d4 = CartanDatum::d4_star();
        let aut = DiagramAut::parse(&d4, "(1 2 3)").unwrap();
        let f = fold_cartan(&d4, &aut).unwrap();
        assert_eq!(f.hat_lift(&[0, 1]).unwrap(), vec![0, 1, 2, 3]);
        let lift = f.hat_lift(&[0, 1, 0, 1, 0, 1]).unwrap();
        assert_eq!(lift.len(), 12);
        assert!(f.ambient.is_reduced(&lift));
        assert!(f.hat_lift(&[0, 0]).is_err());
    }

    #[test]
    fn hat_lift_on_a_product_diagonal() {
        let a2 = CartanDatum::type_a(2);
        let prod = CartanDatum::disjoint_union(&[&a2, &a2]);
        assert_eq!(prod.labels(), &["1", "2", "1'", "2'"]);
        let aut = DiagramAut::parse(&prod, "(1 1')(2 2')").unwrap();
        let f = fold_cartan(&prod, &aut).unwrap();
        assert_eq!(f.folded.matrix(), a2.matrix());
        assert_eq!(f.folded.symmetrizers(), &[2, 2]);
        let lift = f.hat_lift(&[0, 1, 0]).unwrap();
        assert_eq!(lift, vec![0, 2, 1, 3, 0, 2]);
        assert!(prod.is_reduced(&lift));
        assert_eq!(prod.longest_word().unwrap().len(), 6);
    }

    #[test]
    fn root_sequence_lists_distinct_positive_roots() {
        let a2 = CartanDatum::type_a(2);
        let seq = a2.root_sequence(&[0, 1, 0]);
        assert_eq!(seq, vec![vec![1, 0], vec![1, 1], vec![0, 1]]);
        let d4 = CartanDatum::d4_star();
        let w0 = d4.longest_word().unwrap();
        let seq = d4.root_sequence(&w0);
        let mut uniq = seq.clone();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), 12);
        assert!(seq.iter().all(|r| r.iter().all(|&c| c >= 0)));
    }

    #[test]
    fn braid_compatibility_of_orbit_products() {
        let d4 = CartanDatum::d4_star();
        let aut = DiagramAut::parse(&d4, "(1 2 3)").unwrap();
        let f = fold_cartan(&d4, &aut).unwrap();
        // folded reflection matrices agree with ambient orbit products
        // on sigma-invariant vectors
        let lift = f.hat_lift(&[1, 0]).unwrap();
        let invariant = vec![1, 1, 1, 1];
        let folded_img = f.folded.apply_word(&[1, 0], &[1, 1]);
        let ambient_img = f.ambient.apply_word(&lift, &invariant);
        // orbit sums of the ambient image reproduce the folded image in
        // the simple-root coordinates of the fixed subalgebra dual
        let orbit_avg: Vec<i64> = f
            .orbits()
            .iter()
            .map(|o| {
                let vals: Vec<i64> = o.iter().map(|&i| ambient_img[i]).collect();
                assert!(vals.windows(2).all(|w| w[0] == w[1]));
                vals[0]
            })
            .collect();
        assert_eq!(orbit_avg, folded_img);
    }
}
