#![allow(dead_code)]

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use sicsep::ComplexMatrix;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_hermitian(n: usize, rng: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
        for j in (i + 1)..n {
            let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

pub fn random_weights(rows: usize, cols: usize, rng: &mut ChaCha8Rng) -> Vec<Vec<f64>> {
    (0..rows)
        .map(|_| (0..cols).map(|_| rng.random::<f64>()).collect())
        .collect()
}

/// Maximum of `Σ_r w[r][σ(r)]` over all injections of the smaller side into the larger.
pub fn brute_force_matching(w: &[Vec<f64>]) -> f64 {
    let rows = w.len();
    let cols = w[0].len();
    if rows <= cols {
        injections(rows, cols, &|sel| {
            sel.iter().enumerate().map(|(r, &c)| w[r][c]).sum()
        })
    } else {
        injections(cols, rows, &|sel| {
            sel.iter().enumerate().map(|(c, &r)| w[r][c]).sum()
        })
    }
}

fn injections(k: usize, n: usize, f: &dyn Fn(&[usize]) -> f64) -> f64 {
    fn rec(
        k: usize,
        n: usize,
        sel: &mut Vec<usize>,
        used: &mut [bool],
        f: &dyn Fn(&[usize]) -> f64,
    ) -> f64 {
        if sel.len() == k {
            return f(sel);
        }
        let mut best = f64::NEG_INFINITY;
        for i in 0..n {
            if !used[i] {
                used[i] = true;
                sel.push(i);
                best = best.max(rec(k, n, sel, used, f));
                sel.pop();
                used[i] = false;
            }
        }
        best
    }
    rec(k, n, &mut Vec::new(), &mut vec![false; n], f)
}
