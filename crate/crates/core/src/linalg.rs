//! Dense complex linear algebra: pivoted LU with a 1-norm condition
//! estimate, plus compensated summation.

use faer::linalg::solvers::{PartialPivLu, Solve, SolveCore};
use faer::{Conj, Mat};
use num_complex::Complex64;

pub type CMatrix = Mat<Complex64>;

/// Partial-pivot LU factorization of a square complex matrix.
pub struct LuFactor {
    lu: PartialPivLu<Complex64>,
    norm1: f64,
    n: usize,
    finite: bool,
}

impl LuFactor {
    pub fn new(a: &CMatrix) -> Self {
        assert_eq!(a.nrows(), a.ncols(), "LU needs a square matrix");
        let lu = a.partial_piv_lu();
        let u = lu.U();
        let finite = (0..u.nrows()).all(|i| {
            let d = u[(i, i)];
            d.re.is_finite() && d.im.is_finite() && d != Complex64::new(0.0, 0.0)
        });
        Self {
            lu,
            norm1: norm1(a),
            n: a.nrows(),
            finite,
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn solve(&self, rhs: &CMatrix) -> CMatrix {
        self.lu.solve(rhs)
    }

    pub fn solve_vec(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let mut b = Mat::from_fn(rhs.len(), 1, |i, _| rhs[i]);
        self.lu.solve_in_place(b.as_mut());
        (0..rhs.len()).map(|i| b[(i, 0)]).collect()
    }

    fn solve_adjoint_vec(&self, rhs: &[Complex64]) -> Vec<Complex64> {
        let mut b = Mat::from_fn(rhs.len(), 1, |i, _| rhs[i]);
        self.lu
            .solve_transpose_in_place_with_conj(Conj::Yes, b.as_mut());
        (0..rhs.len()).map(|i| b[(i, 0)]).collect()
    }

    /// Reciprocal 1-norm condition number estimate (Hager–Higham).
    ///
    /// Zero when the factorization has a zero or non-finite pivot.
    pub fn rcond(&self) -> f64 {
        if !self.finite {
            return 0.0;
        }
        if self.norm1 == 0.0 {
            return 0.0;
        }
        let inv_norm = self.inverse_norm1_estimate();
        if !inv_norm.is_finite() || inv_norm == 0.0 {
            return 0.0;
        }
        1.0 / (self.norm1 * inv_norm)
    }

    fn inverse_norm1_estimate(&self) -> f64 {
        let n = self.n;
        let mut x = vec![Complex64::new(1.0 / n as f64, 0.0); n];
        let mut estimate = 0.0;
        let mut last_j = usize::MAX;
        for _ in 0..5 {
            let y = self.solve_vec(&x);
            let y_norm: f64 = y.iter().map(|v| v.norm()).sum();
            if y_norm <= estimate {
                break;
            }
            estimate = y_norm;
            let signs: Vec<Complex64> = y
                .iter()
                .map(|v| {
                    let r = v.norm();
                    if r == 0.0 {
                        Complex64::new(1.0, 0.0)
                    } else {
                        v / r
                    }
                })
                .collect();
            let z = self.solve_adjoint_vec(&signs);
            let (j, zmax) = z
                .iter()
                .enumerate()
                .map(|(i, v)| (i, v.norm()))
                .fold((0, -1.0), |acc, c| if c.1 > acc.1 { c } else { acc });
            let zx: f64 = z.iter().zip(&x).map(|(a, b)| (a.conj() * b).re).sum();
            if j == last_j || zmax <= zx {
                break;
            }
            last_j = j;
            x = vec![Complex64::new(0.0, 0.0); n];
            x[j] = Complex64::new(1.0, 0.0);
        }
        // alternating-sign probe guards against the estimator's blind spots
        let probe: Vec<Complex64> = (0..n)
            .map(|i| {
                let s = if i % 2 == 0 { 1.0 } else { -1.0 };
                Complex64::new(s * (1.0 + i as f64 / (n.max(2) - 1) as f64), 0.0)
            })
            .collect();
        let y = self.solve_vec(&probe);
        let alt = 2.0 * y.iter().map(|v| v.norm()).sum::<f64>() / (3.0 * n as f64);
        estimate.max(alt)
    }
}

/// Maximum absolute column sum.
pub fn norm1(a: &CMatrix) -> f64 {
    (0..a.ncols())
        .map(|j| (0..a.nrows()).map(|i| a[(i, j)].norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

pub fn mat_vec(a: &CMatrix, x: &[Complex64]) -> Vec<Complex64> {
    assert_eq!(a.ncols(), x.len());
    (0..a.nrows())
        .map(|i| {
            let mut acc = NeumaierSum::default();
            for (j, xj) in x.iter().enumerate() {
                acc.add(a[(i, j)] * xj);
            }
            acc.value()
        })
        .collect()
}

pub fn max_abs(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm()).fold(0.0, f64::max)
}

/// Compensated (Neumaier) accumulator for complex sums.
#[derive(Debug, Clone, Copy, Default)]
pub struct NeumaierSum {
    re: (f64, f64),
    im: (f64, f64),
}

impl NeumaierSum {
    fn step((sum, comp): (f64, f64), x: f64) -> (f64, f64) {
        let t = sum + x;
        let c = if sum.abs() >= x.abs() {
            (sum - t) + x
        } else {
            (x - t) + sum
        };
        (t, comp + c)
    }

    pub fn add(&mut self, z: Complex64) {
        self.re = Self::step(self.re, z.re);
        self.im = Self::step(self.im, z.im);
    }

    pub fn value(&self) -> Complex64 {
        Complex64::new(self.re.0 + self.re.1, self.im.0 + self.im.1)
    }
}

impl FromIterator<Complex64> for NeumaierSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = Self::default();
        for z in iter {
            acc.add(z);
        }
        acc
    }
}

/// Compensated sum of a sequence of complex numbers.
pub fn compensated_sum(iter: impl IntoIterator<Item = Complex64>) -> Complex64 {
    iter.into_iter().collect::<NeumaierSum>().value()
}
