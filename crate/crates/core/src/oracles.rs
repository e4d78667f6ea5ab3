//! Independent reference computations used to cross-check the main solvers.
//!
//! Nothing here goes through the assignment solvers or the tensor
//! contraction in `criteria`: correlations are taken from explicit Kronecker
//! products and `J` by exhaustive enumeration.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::matcore::{min_eigenvalue, partial_transpose_matrix, tensor_product_all, Density};
use crate::scalar::Real;
use crate::sicpovm::SicPovm;

pub const DEFAULT_ENUMERATION_LIMIT: u64 = 1_000_000;
/// Partial-transpose eigenvalues below this certify entanglement.
pub const NPT_THRESHOLD: f64 = -1e-10;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PptReport {
    /// Transposed parties, 1-based.
    pub cut: Vec<usize>,
    pub min_eigenvalue: f64,
    pub npt: bool,
}

/// Minimum eigenvalue of the partial transpose over the given (0-based) parties.
pub fn ppt_check<T: Real>(rho: &Density<T>, cut: &[usize]) -> Result<PptReport> {
    if cut.is_empty() || cut.len() >= rho.parties() {
        return Err(Error::InvalidPartition(format!(
            "cut must transpose a nonempty proper subset of the {} parties",
            rho.parties()
        )));
    }
    let mut sorted = cut.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.len() != cut.len() {
        return Err(Error::InvalidPartition(format!(
            "repeated party in cut {cut:?}"
        )));
    }
    let mut m = rho.matrix().clone();
    for &party in &sorted {
        m = partial_transpose_matrix(&m, rho.dims(), party)?;
    }
    let min = min_eigenvalue(&m)?.as_f64();
    Ok(PptReport {
        cut: sorted.iter().map(|p| p + 1).collect(),
        min_eigenvalue: min,
        npt: min < NPT_THRESHOLD,
    })
}

fn falling(n: usize, k: usize) -> f64 {
    (0..k).map(|i| (n - i) as f64).product()
}

/// Number of selections `brute_force_j` enumerates: the order of the smallest
/// party is fixed and every other party contributes an injection.
pub fn enumeration_count(outcome_counts: &[usize]) -> f64 {
    let d = *outcome_counts.iter().min().expect("nonempty");
    let pivot = outcome_counts
        .iter()
        .position(|&s| s == d)
        .expect("minimum exists");
    outcome_counts
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != pivot)
        .map(|(_, &s)| falling(s, d))
        .product()
}

struct Enumerator<'a, T: Real> {
    counts: &'a [usize],
    weights: &'a [T],
    pivot: usize,
    d: usize,
    /// injection per non-pivot party, indexed by pivot slot
    maps: Vec<Vec<usize>>,
    used: Vec<Vec<bool>>,
    best: T,
}

impl<T: Real> Enumerator<'_, T> {
    fn party(&mut self, k: usize) {
        if k == self.counts.len() {
            let value = self.evaluate();
            if value > self.best {
                self.best = value;
            }
            return;
        }
        if k == self.pivot {
            return self.party(k + 1);
        }
        self.slot(k, 0);
    }

    fn slot(&mut self, k: usize, j: usize) {
        if j == self.d {
            return self.party(k + 1);
        }
        for i in 0..self.counts[k] {
            if self.used[k][i] {
                continue;
            }
            self.used[k][i] = true;
            self.maps[k][j] = i;
            self.slot(k, j + 1);
            self.used[k][i] = false;
        }
    }

    fn evaluate(&self) -> T {
        let mut total = T::zero();
        for j in 0..self.d {
            let mut flat = 0;
            for (k, &s) in self.counts.iter().enumerate() {
                let idx = if k == self.pivot { j } else { self.maps[k][j] };
                flat = flat * s + idx;
            }
            total = total + self.weights[flat];
        }
        total
    }
}

/// `J(ρ)` by literal enumeration of every injective selection.
pub fn brute_force_j<T: Real>(rho: &Density<T>, povms: &[&SicPovm<T>], limit: u64) -> Result<T> {
    let pd: Vec<usize> = povms.iter().map(|p| p.dim()).collect();
    if pd != rho.dims() || povms.len() < 2 {
        return Err(Error::DimensionMismatch(format!(
            "POVM dimensions {pd:?} do not match state dims {:?}",
            rho.dims()
        )));
    }
    let counts: Vec<usize> = pd.iter().map(|d| d * d).collect();
    let count = enumeration_count(&counts);
    if count > limit as f64 {
        return Err(Error::EnumerationTooLarge { count, limit });
    }
    let weights = correlations_by_kron(rho, povms);
    let d = *counts.iter().min().expect("nonempty");
    let pivot = counts.iter().position(|&s| s == d).expect("minimum exists");
    let mut e = Enumerator {
        counts: &counts,
        weights: &weights,
        pivot,
        d,
        maps: counts.iter().map(|_| vec![0; d]).collect(),
        used: counts.iter().map(|&s| vec![false; s]).collect(),
        best: T::neg_infinity(),
    };
    e.party(0);
    Ok(e.best)
}

/// Every joint correlation `Tr[(⊗_i P_{j_i}) ρ]`, row-major over outcome tuples.
pub fn correlations_by_kron<T: Real>(rho: &Density<T>, povms: &[&SicPovm<T>]) -> Vec<T> {
    let counts: Vec<usize> = povms.iter().map(|p| p.operators().len()).collect();
    let total: usize = counts.iter().product();
    let mut idx = vec![0; counts.len()];
    (0..total)
        .map(|flat| {
            let mut rest = flat;
            for k in (0..counts.len()).rev() {
                idx[k] = rest % counts[k];
                rest /= counts[k];
            }
            let factors: Vec<_> = idx
                .iter()
                .zip(povms)
                .map(|(&j, p)| &p.operators()[j])
                .collect();
            tensor_product_all(&factors)
                .trace_product(rho.matrix())
                .expect("matching sides")
                .re
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states::{isotropic, maximally_entangled};

    #[test]
    fn bell_state_is_npt() {
        let r = ppt_check(&maximally_entangled::<f64>(2).unwrap(), &[0]).unwrap();
        assert!(r.npt);
        assert!((r.min_eigenvalue + 0.5).abs() < 1e-12);
        assert_eq!(r.cut, vec![1]);
    }

    #[test]
    fn isotropic_threshold_values() {
        let r = ppt_check(&isotropic::<f64>(2, 0.5).unwrap(), &[1]).unwrap();
        assert!((r.min_eigenvalue + 0.125).abs() < 1e-12 && r.npt);
        let r = ppt_check(&isotropic::<f64>(3, 0.25).unwrap(), &[1]).unwrap();
        assert!(r.min_eigenvalue.abs() < 1e-10 && !r.npt);
    }

    #[test]
    fn invalid_cuts() {
        let rho = maximally_entangled::<f64>(2).unwrap();
        assert!(ppt_check(&rho, &[]).is_err());
        assert!(ppt_check(&rho, &[0, 1]).is_err());
        assert!(ppt_check(&rho, &[5]).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumeration_count(&[4, 4]), 24.0);
        assert_eq!(enumeration_count(&[4, 9]), 3024.0);
        assert_eq!(enumeration_count(&[9, 9]), 362880.0);
    }

    #[test]
    fn maximally_mixed_value() {
        let rho = isotropic::<f64>(2, 0.0).unwrap();
        let pa = SicPovm::build_max(2).unwrap();
        let pb = SicPovm::build_max(2).unwrap();
        let j = brute_force_j(&rho, &[&pa, &pb], DEFAULT_ENUMERATION_LIMIT).unwrap();
        assert!((j - 0.25).abs() < 1e-14);
    }

    #[test]
    fn enumeration_limit() {
        let rho = isotropic::<f64>(3, 0.0).unwrap();
        let p = SicPovm::build_max(3).unwrap();
        assert!(matches!(
            brute_force_j(&rho, &[&p, &p], 1000),
            Err(Error::EnumerationTooLarge { .. })
        ));
    }
}
