//! Coordinate-format operator used inside the master-equation right-hand side.

use crate::operators::{CMatrix, C64};

#[derive(Debug, Clone)]
pub(crate) struct Sparse {
    n: usize,
    entries: Vec<(usize, usize, C64)>,
}

impl Sparse {
    pub(crate) fn from_dense(m: &CMatrix) -> Self {
        let n = m.nrows();
        let mut entries = Vec::new();
        for j in 0..n {
            for i in 0..n {
                let v = m[(i, j)];
                if v.re != 0.0 || v.im != 0.0 {
                    entries.push((i, j, v));
                }
            }
        }
        Self { n, entries }
    }

    /// `out += A X` for column-major `X`.
    pub(crate) fn left_mul_add(&self, x: &[C64], out: &mut [C64]) {
        let n = self.n;
        for b in 0..n {
            let xc = &x[b * n..(b + 1) * n];
            let oc = &mut out[b * n..(b + 1) * n];
            for &(i, j, v) in &self.entries {
                oc[i] += v * xc[j];
            }
        }
    }

    /// `out += X A†` for column-major `X`.
    pub(crate) fn right_mul_adjoint_add(&self, x: &[C64], out: &mut [C64]) {
        let n = self.n;
        for &(b, c, v) in &self.entries {
            let w = v.conj();
            let (xc, oc) = (c * n, b * n);
            for a in 0..n {
                out[oc + a] += x[xc + a] * w;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn matches_dense_products() {
        let n = 5;
        let a = CMatrix::from_fn(n, n, |i, j| {
            if (i + 2 * j) % 3 == 0 {
                C64::new(i as f64 - 1.5, j as f64 * 0.3)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let x = CMatrix::from_fn(n, n, |i, j| C64::new((i * j) as f64 * 0.1, i as f64 - j as f64));
        let s = Sparse::from_dense(&a);
        let mut out = CMatrix::zeros(n, n);
        s.left_mul_add(x.as_slice(), out.as_mut_slice());
        assert!((&out - &a * &x).norm() < 1e-12);
        let mut out = CMatrix::zeros(n, n);
        s.right_mul_adjoint_add(x.as_slice(), out.as_mut_slice());
        assert!((&out - &x * a.adjoint()).norm() < 1e-12);
    }
}
