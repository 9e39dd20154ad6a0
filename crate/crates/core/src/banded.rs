//! Complex banded matrices with a partial-pivoting LU.
//!
//! Row `i` is stored as a window over columns `[i − kl, i + kl + ku]`; the extra
//! `kl` columns on the right absorb fill-in from row interchanges.

use crate::error::{Error, Result};
use crate::C64;

#[derive(Debug, Clone, PartialEq)]
pub struct BandMatrix {
    n: usize,
    kl: usize,
    ku: usize,
    width: usize,
    data: Vec<C64>,
}

impl BandMatrix {
    pub fn zeros(n: usize, kl: usize, ku: usize) -> Self {
        let width = 2 * kl + ku + 1;
        Self {
            n,
            kl,
            ku,
            width,
            data: vec![C64::new(0.0, 0.0); n * width],
        }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    #[inline]
    fn slot(&self, i: usize, j: usize) -> Option<usize> {
        let start = i as isize - self.kl as isize;
        let off = j as isize - start;
        if off < 0 || off as usize >= self.width {
            None
        } else {
            Some(i * self.width + off as usize)
        }
    }

    pub fn get(&self, i: usize, j: usize) -> C64 {
        self.slot(i, j).map_or(C64::new(0.0, 0.0), |s| self.data[s])
    }

    /// Adds `v` to entry `(i, j)`. Panics if the entry lies outside the band.
    pub fn add(&mut self, i: usize, j: usize, v: C64) {
        assert!(
            j + self.kl >= i && j <= i + self.ku,
            "entry ({i}, {j}) outside band ({}, {})",
            self.kl,
            self.ku
        );
        let s = self.slot(i, j).expect("in band");
        self.data[s] += v;
    }

    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        assert!(j + self.kl >= i && j <= i + self.ku, "entry ({i}, {j}) outside band");
        let s = self.slot(i, j).expect("in band");
        self.data[s] = v;
    }

    /// `y = A x`.
    pub fn matvec(&self, x: &[C64]) -> Vec<C64> {
        assert_eq!(x.len(), self.n);
        (0..self.n)
            .map(|i| {
                let lo = i.saturating_sub(self.kl);
                let hi = (i + self.ku).min(self.n - 1);
                (lo..=hi).map(|j| self.get(i, j) * x[j]).sum()
            })
            .collect()
    }

    /// Scales every entry; used to fold `(1 − iaδ)` factors into blocks.
    pub fn scaled(&self, s: C64) -> Self {
        let mut out = self.clone();
        out.data.iter_mut().for_each(|v| *v *= s);
        out
    }

    /// `self + other` for matrices with identical shape.
    pub fn plus(&self, other: &Self) -> Self {
        assert_eq!((self.n, self.kl, self.ku), (other.n, other.kl, other.ku));
        let mut out = self.clone();
        out.data.iter_mut().zip(&other.data).for_each(|(a, b)| *a += b);
        out
    }

    pub fn to_dense(&self) -> nalgebra::DMatrix<C64> {
        nalgebra::DMatrix::from_fn(self.n, self.n, |i, j| {
            if j + self.kl >= i && j <= i + self.ku {
                self.get(i, j)
            } else {
                C64::new(0.0, 0.0)
            }
        })
    }

    pub fn factor(&self) -> Result<BandLu> {
        let n = self.n;
        let mut a = self.clone();
        let mut piv = vec![0usize; n];
        let scale = self.data.iter().map(|v| v.norm()).fold(0.0, f64::max);
        if scale == 0.0 && n > 0 {
            return Err(Error::Discretization("zero matrix".into()));
        }
        let mut min_pivot = f64::INFINITY;
        for p in 0..n {
            let last = (p + self.kl).min(n - 1);
            let (mut best, mut best_val) = (p, a.get(p, p).norm());
            for r in p + 1..=last {
                let v = a.get(r, p).norm();
                if v > best_val {
                    best = r;
                    best_val = v;
                }
            }
            piv[p] = best;
            min_pivot = min_pivot.min(best_val);
            if best_val <= 1e-300 {
                return Err(Error::Discretization(format!("singular pivot at column {p}")));
            }
            let right = (p + self.kl + self.ku).min(n - 1);
            if best != p {
                for j in p..=right {
                    let sp = a.slot(p, j);
                    let sb = a.slot(best, j);
                    let vp = sp.map_or(C64::new(0.0, 0.0), |s| a.data[s]);
                    let vb = sb.map_or(C64::new(0.0, 0.0), |s| a.data[s]);
                    if let Some(s) = sp {
                        a.data[s] = vb;
                    }
                    if let Some(s) = sb {
                        a.data[s] = vp;
                    }
                }
            }
            let d = a.get(p, p);
            for r in p + 1..=last {
                let sr = a.slot(r, p).expect("in band");
                let l = a.data[sr] / d;
                a.data[sr] = l;
                if l == C64::new(0.0, 0.0) {
                    continue;
                }
                for j in p + 1..=right {
                    let u = a.get(p, j);
                    if u != C64::new(0.0, 0.0) {
                        let s = a.slot(r, j).expect("fill stays in window");
                        a.data[s] -= l * u;
                    }
                }
            }
        }
        Ok(BandLu {
            lu: a,
            piv,
            pivot_ratio: if n == 0 { 1.0 } else { min_pivot / scale },
        })
    }

    /// Factor and solve in one call.
    pub fn solve(&self, rhs: &[C64]) -> Result<Vec<C64>> {
        let lu = self.factor()?;
        let mut x = rhs.to_vec();
        lu.solve_in_place(&mut x);
        Ok(x)
    }
}

/// LU factors of a [`BandMatrix`].
#[derive(Debug, Clone)]
pub struct BandLu {
    lu: BandMatrix,
    piv: Vec<usize>,
    /// Smallest pivot magnitude relative to the largest matrix entry.
    pub pivot_ratio: f64,
}

impl BandLu {
    pub fn dim(&self) -> usize {
        self.lu.n
    }

    pub fn solve_in_place(&self, x: &mut [C64]) {
        let n = self.lu.n;
        let (kl, ku) = (self.lu.kl, self.lu.ku);
        assert_eq!(x.len(), n);
        for p in 0..n {
            let b = self.piv[p];
            if b != p {
                x.swap(p, b);
            }
            let xp = x[p];
            for r in p + 1..=(p + kl).min(n.saturating_sub(1)) {
                x[r] -= self.lu.get(r, p) * xp;
            }
        }
        for p in (0..n).rev() {
            let right = (p + kl + ku).min(n - 1);
            let mut s = x[p];
            for j in p + 1..=right {
                s -= self.lu.get(p, j) * x[j];
            }
            x[p] = s / self.lu.get(p, p);
        }
    }

    pub fn solve(&self, rhs: &[C64]) -> Vec<C64> {
        let mut x = rhs.to_vec();
        self.solve_in_place(&mut x);
        x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::c;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_band(n: usize, kl: usize, ku: usize, seed: u64) -> BandMatrix {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut a = BandMatrix::zeros(n, kl, ku);
        for i in 0..n {
            for j in i.saturating_sub(kl)..=(i + ku).min(n - 1) {
                a.add(i, j, c(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
            }
        }
        a
    }

    #[test]
    fn solves_against_dense_lu() {
        for (kl, ku, seed) in [(1, 1, 1), (2, 3, 2), (4, 4, 3), (0, 2, 4)] {
            let a = random_band(40, kl, ku, seed);
            let b: Vec<C64> = (0..40).map(|i| c(i as f64, 1.0 - i as f64 * 0.5)).collect();
            let x = a.solve(&b).unwrap();
            let dense = a.to_dense();
            let xd = dense.lu().solve(&nalgebra::DVector::from_vec(b.clone())).unwrap();
            for i in 0..40 {
                assert!((x[i] - xd[i]).norm() < 1e-9 * (1.0 + xd[i].norm()), "kl={kl} ku={ku}");
            }
            let r = a.matvec(&x);
            for i in 0..40 {
                assert!((r[i] - b[i]).norm() < 1e-9 * (1.0 + b[i].norm()));
            }
        }
    }

    #[test]
    fn pivoting_handles_zero_diagonal() {
        let mut a = BandMatrix::zeros(3, 1, 1);
        a.set(0, 1, c(1.0, 0.0));
        a.set(1, 0, c(2.0, 0.0));
        a.set(1, 2, c(1.0, 0.0));
        a.set(2, 1, c(3.0, 0.0));
        a.set(2, 2, c(1.0, 0.0));
        let x = a.solve(&[c(1.0, 0.0), c(2.0, 0.0), c(3.0, 0.0)]).unwrap();
        let r = a.matvec(&x);
        assert!((r[0] - c(1.0, 0.0)).norm() < 1e-14);
        assert!((r[2] - c(3.0, 0.0)).norm() < 1e-14);
    }

    #[test]
    fn singular_matrix_is_reported() {
        let a = BandMatrix::zeros(4, 1, 1);
        assert!(a.factor().is_err());
    }
}
