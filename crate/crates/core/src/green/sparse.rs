//! Shell coupling matrices `α_n`, `β_n`, `γ_n`.
//!
//! Restricted to the canonical wedge `i >= j >= 0`, the equation
//! `(Δ_d + λ) G = 0` at the points of shell `n` reads
//! `γ_n V_n = α_n V_{n-1} + β_n V_{n+1}`.

use num_complex::Complex64;

use crate::linalg::CMatrix;

/// Length of the shell vector `V_n`.
pub fn shell_len(n: usize) -> usize {
    n / 2 + 1
}

/// A small sparse matrix in coordinate form, zero-based, row-major order.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, Complex64)>,
}

impl SparseMatrix {
    fn new(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    // one-based setter, mirroring how the entries are usually written down
    fn set(&mut self, i: usize, j: usize, v: impl Into<Complex64>) {
        assert!(i >= 1 && i <= self.rows && j >= 1 && j <= self.cols);
        let v = v.into();
        match self.entries.iter_mut().find(|(r, c, _)| *r == i - 1 && *c == j - 1) {
            Some(e) => e.2 = v,
            None => self.entries.push((i - 1, j - 1, v)),
        }
    }

    fn finish(mut self) -> Self {
        self.entries.sort_by_key(|&(r, c, _)| (r, c));
        self
    }

    pub fn shape(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn entries(&self) -> &[(usize, usize, Complex64)] {
        &self.entries
    }

    /// Entry at zero-based `(i, j)`.
    pub fn get(&self, i: usize, j: usize) -> Complex64 {
        self.entries
            .iter()
            .find(|(r, c, _)| *r == i && *c == j)
            .map_or(Complex64::new(0.0, 0.0), |e| e.2)
    }

    pub fn to_dense(&self) -> CMatrix {
        let mut m = CMatrix::zeros(self.rows, self.cols);
        for &(i, j, v) in &self.entries {
            m[(i, j)] = v;
        }
        m
    }

    pub fn apply(&self, x: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(x.len(), self.cols);
        let mut y = vec![Complex64::new(0.0, 0.0); self.rows];
        for &(i, j, v) in &self.entries {
            y[i] += v * x[j];
        }
        y
    }
}

/// The three coupling matrices of shell `n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseTriple {
    pub n: usize,
    pub alpha: SparseMatrix,
    pub beta: SparseMatrix,
    pub gamma: SparseMatrix,
}

/// Builds `α_n`, `β_n`, `γ_n` for `n >= 1`; `lambda` stands for `k²`
/// (complex when damped).
pub fn sparse_matrices(n: usize, lambda: Complex64) -> SparseTriple {
    assert!(n >= 1, "shell index starts at 1");
    let diag = Complex64::new(6.0, 0.0) - lambda;
    if n == 1 {
        let mut alpha = SparseMatrix::new(1, 1);
        alpha.set(1, 1, 1.0);
        let mut beta = SparseMatrix::new(1, 2);
        beta.set(1, 1, 1.0);
        beta.set(1, 2, 2.0);
        let mut gamma = SparseMatrix::new(1, 1);
        gamma.set(1, 1, Complex64::new(4.0, 0.0) - lambda);
        return SparseTriple {
            n,
            alpha: alpha.finish(),
            beta: beta.finish(),
            gamma: gamma.finish(),
        };
    }
    let p = n / 2;
    let (mut alpha, mut beta, mut gamma);
    if n.is_multiple_of(2) {
        alpha = SparseMatrix::new(p + 1, p);
        for i in 1..=p {
            alpha.set(i, i, 1.0);
        }
        for i in 2..=p {
            alpha.set(i, i - 1, 1.0);
        }
        alpha.set(p + 1, p, 2.0);

        beta = SparseMatrix::new(p + 1, p + 1);
        for i in 1..=p {
            beta.set(i, i, 1.0);
        }
        for i in 2..=p {
            beta.set(i, i + 1, 1.0);
        }
        beta.set(p + 1, p + 1, 2.0);
        beta.set(1, 2, 2.0);

        gamma = SparseMatrix::new(p + 1, p + 1);
        for i in 1..=p + 1 {
            gamma.set(i, i, diag);
        }
        for i in 2..=p {
            gamma.set(i, i + 1, -1.0);
            gamma.set(i, i - 1, -1.0);
        }
        gamma.set(1, 2, -2.0);
        gamma.set(p + 1, p, -2.0);
    } else {
        alpha = SparseMatrix::new(p + 1, p + 1);
        for i in 1..=p + 1 {
            alpha.set(i, i, 1.0);
        }
        for i in 2..=p + 1 {
            alpha.set(i, i - 1, 1.0);
        }

        beta = SparseMatrix::new(p + 1, p + 2);
        for i in 1..=p + 1 {
            beta.set(i, i, 1.0);
        }
        for i in 2..=p + 1 {
            beta.set(i, i + 1, 1.0);
        }
        beta.set(1, 2, 2.0);

        gamma = SparseMatrix::new(p + 1, p + 1);
        for i in 1..=p {
            gamma.set(i, i, diag);
        }
        gamma.set(p + 1, p + 1, Complex64::new(5.0, 0.0) - lambda);
        for i in 2..=p {
            gamma.set(i, i + 1, -1.0);
        }
        for i in 2..=p + 1 {
            gamma.set(i, i - 1, -1.0);
        }
        gamma.set(1, 2, -2.0);
    }
    SparseTriple {
        n,
        alpha: alpha.finish(),
        beta: beta.finish(),
        gamma: gamma.finish(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn first_shell() {
        let k2 = re(2.0);
        let t = sparse_matrices(1, k2);
        assert_eq!(t.gamma.shape(), (1, 1));
        assert_eq!(t.gamma.get(0, 0), re(2.0));
        assert_eq!(t.alpha.shape(), (1, 1));
        assert_eq!(t.alpha.get(0, 0), re(1.0));
        assert_eq!(t.beta.shape(), (1, 2));
        assert_eq!((t.beta.get(0, 0), t.beta.get(0, 1)), (re(1.0), re(2.0)));
    }

    #[test]
    fn second_shell() {
        let k2 = re(2.0);
        let t = sparse_matrices(2, k2);
        assert_eq!(t.alpha.shape(), (2, 1));
        assert_eq!((t.alpha.get(0, 0), t.alpha.get(1, 0)), (re(1.0), re(2.0)));
        assert_eq!(t.beta.shape(), (2, 2));
        let b: Vec<_> = [(0, 0), (0, 1), (1, 0), (1, 1)].iter().map(|&(i, j)| t.beta.get(i, j)).collect();
        assert_eq!(b, vec![re(1.0), re(2.0), re(0.0), re(2.0)]);
        let g: Vec<_> = [(0, 0), (0, 1), (1, 0), (1, 1)].iter().map(|&(i, j)| t.gamma.get(i, j)).collect();
        assert_eq!(g, vec![re(4.0), re(-2.0), re(-2.0), re(4.0)]);
    }

    #[test]
    fn shapes_chain_across_shells() {
        let k2 = re(2.0);
        for n in 1..=50 {
            let t = sparse_matrices(n, k2);
            let (ga, gb) = t.gamma.shape();
            assert_eq!((ga, gb), (shell_len(n), shell_len(n)));
            assert_eq!(t.alpha.shape(), (shell_len(n), shell_len(n - 1)));
            assert_eq!(t.beta.shape(), (shell_len(n), shell_len(n + 1)));
        }
    }

    #[test]
    fn gamma_diagonal() {
        let k2 = Complex64::new(2.0, 0.1);
        for n in 2..30 {
            let t = sparse_matrices(n, k2);
            let len = shell_len(n);
            for i in 0..len {
                let expected = if n % 2 == 1 && i == len - 1 { 5.0 } else { 6.0 };
                assert_eq!(t.gamma.get(i, i), re(expected) - k2);
            }
        }
    }
}
