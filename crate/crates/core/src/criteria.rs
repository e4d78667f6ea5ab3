//! Separability criteria built on general SIC-POVMs.
//!
//! For local general SIC-POVMs `P^(i)` with purities `a_i`, define
//!
//! ```text
//! J(ρ) = max Σ_{j=1}^{d} Tr[(⊗_i P^(i)_{n_j}) ρ],   d = min_i d_i²
//! ```
//!
//! over selections injective in every party. Writing
//! `c_i = (a_i d_i² + 1)/(d_i (d_i + 1))`, a separable state satisfies
//!
//! * two parties: `J ≤ (c₁ + c₂)/2` (additive) and `J ≤ √c₁ √c₂` (multiplicative);
//! * `m` parties, fully separable: `J ≤ (1/m) Σ c_i` and `J ≤ min_{i≠j} √c_i √c_j`.
//!
//! Exceeding a bound therefore certifies entanglement. Applied to a state whose
//! parties are grouped into `k` blocks, it certifies `k`-nonseparability with
//! respect to that partition.

use std::fmt;

use serde::Serialize;

use crate::assignment::{
    max_axial_assignment_exact, max_axial_assignment_heuristic, max_weight_matching, Assignment,
    WeightTensor,
};
use crate::error::{Error, Result};
use crate::matcore::{Density, Matrix};
use crate::scalar::{Real, C};
use crate::sicpovm::{check_purity_range, pure_state_coincidence, SicPovm};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Theorem {
    /// Bipartite additive bound.
    T1,
    /// Bipartite multiplicative bound.
    T2,
    /// Multipartite additive bound.
    T3,
    /// Multipartite pairwise multiplicative bound.
    T4,
}

impl Theorem {
    pub fn from_number(n: u8) -> Option<Self> {
        match n {
            1 => Some(Self::T1),
            2 => Some(Self::T2),
            3 => Some(Self::T3),
            4 => Some(Self::T4),
            _ => None,
        }
    }

    pub fn is_bipartite(self) -> bool {
        matches!(self, Self::T1 | Self::T2)
    }
}

impl fmt::Display for Theorem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum JMode {
    Exact,
    Heuristic,
}

/// How the multipartite maximization is carried out.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Solver {
    Exact,
    Heuristic { restarts: usize, seed: u64 },
}

impl Solver {
    pub const DEFAULT_RESTARTS: usize = 32;

    pub fn heuristic(seed: u64) -> Self {
        Self::Heuristic {
            restarts: Self::DEFAULT_RESTARTS,
            seed,
        }
    }

    fn mode(self) -> JMode {
        match self {
            Self::Exact => JMode::Exact,
            Self::Heuristic { .. } => JMode::Heuristic,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CriterionVerdict<T: Real> {
    pub theorem: Theorem,
    pub j_value: T,
    pub j_mode: JMode,
    pub bound: T,
    pub detected: bool,
    /// Heuristic run that did not exceed the bound: the true `J` may still do so.
    pub inconclusive: bool,
    pub assignment: Assignment<T>,
}

impl<T: Real> CriterionVerdict<T> {
    fn new(theorem: Theorem, assignment: Assignment<T>, mode: JMode, bound: T) -> Self {
        let j_value = assignment.value();
        let detected = exceeds(j_value, bound);
        Self {
            theorem,
            j_value,
            j_mode: mode,
            bound,
            detected,
            inconclusive: mode == JMode::Heuristic && !detected,
            assignment,
        }
    }
}

/// Strict comparison `j > bound` with the type's detection slack.
pub fn exceeds<T: Real>(j: T, bound: T) -> bool {
    j > bound + T::detect_slack()
}

fn coincidence_term<T: Real>(d: usize, a: T) -> Result<T> {
    if d < 2 {
        return Err(Error::ParameterOutOfRange(format!("dimension {d} < 2")));
    }
    check_purity_range(d, a)?;
    Ok(pure_state_coincidence(d, a))
}

fn terms<T: Real>(dims: &[usize], purities: &[T]) -> Result<Vec<T>> {
    if dims.len() != purities.len() {
        return Err(Error::DimensionMismatch(format!(
            "{} dimensions but {} purities",
            dims.len(),
            purities.len()
        )));
    }
    if dims.len() < 2 {
        return Err(Error::DimensionMismatch(
            "bounds need at least two parties".into(),
        ));
    }
    dims.iter()
        .zip(purities)
        .map(|(&d, &a)| coincidence_term(d, a))
        .collect()
}

pub fn bound_thm1<T: Real>(d1: usize, a1: T, d2: usize, a2: T) -> Result<T> {
    Ok((coincidence_term(d1, a1)? + coincidence_term(d2, a2)?) * T::lit(0.5))
}

pub fn bound_thm2<T: Real>(d1: usize, a1: T, d2: usize, a2: T) -> Result<T> {
    Ok(coincidence_term(d1, a1)?.sqrt() * coincidence_term(d2, a2)?.sqrt())
}

pub fn bound_thm3<T: Real>(dims: &[usize], purities: &[T]) -> Result<T> {
    let c = terms(dims, purities)?;
    let m = T::from_usize_exact(c.len());
    Ok(c.into_iter().fold(T::zero(), |acc, x| acc + x) / m)
}

pub fn bound_thm4<T: Real>(dims: &[usize], purities: &[T]) -> Result<T> {
    let c = terms(dims, purities)?;
    let mut best = T::infinity();
    for i in 0..c.len() {
        for j in 0..c.len() {
            if i != j {
                best = best.min(c[i].sqrt() * c[j].sqrt());
            }
        }
    }
    Ok(best)
}

/// Bound of `theorem` for local POVMs with the given dimensions and purities.
pub fn bound_for<T: Real>(theorem: Theorem, dims: &[usize], purities: &[T]) -> Result<T> {
    match theorem {
        Theorem::T1 | Theorem::T2 => {
            if dims.len() != 2 || purities.len() != 2 {
                return Err(Error::DimensionMismatch(format!(
                    "{theorem} is bipartite, got {} parties",
                    dims.len()
                )));
            }
            if theorem == Theorem::T1 {
                bound_thm1(dims[0], purities[0], dims[1], purities[1])
            } else {
                bound_thm2(dims[0], purities[0], dims[1], purities[1])
            }
        }
        Theorem::T3 => bound_thm3(dims, purities),
        Theorem::T4 => bound_thm4(dims, purities),
    }
}

fn check_povms<T: Real>(rho: &Density<T>, povms: &[&SicPovm<T>]) -> Result<()> {
    let pd: Vec<usize> = povms.iter().map(|p| p.dim()).collect();
    if pd != rho.dims() {
        return Err(Error::DimensionMismatch(format!(
            "POVM dimensions {pd:?} do not match state dims {:?}",
            rho.dims()
        )));
    }
    Ok(())
}

/// Contracts the first tensor factor of `m` with `op`, leaving the remaining factors.
fn contract_first<T: Real>(m: &Matrix<T>, d0: usize, op: &Matrix<T>) -> Matrix<T> {
    let rest = m.rows() / d0;
    let mut out = Matrix::zeros(rest, rest);
    for r1 in 0..rest {
        for r in 0..rest {
            let mut acc = C::new(T::zero(), T::zero());
            for i in 0..d0 {
                for i1 in 0..d0 {
                    acc = acc + op[(i, i1)] * m[(i1 * rest + r1, i * rest + r)];
                }
            }
            out[(r1, r)] = acc;
        }
    }
    out
}

fn correlations_into<T: Real>(
    m: &Matrix<T>,
    dims: &[usize],
    povms: &[&SicPovm<T>],
    out: &mut Vec<T>,
) {
    let (first, rest) = povms.split_first().expect("at least one POVM");
    if rest.is_empty() {
        out.extend(
            first
                .operators()
                .iter()
                .map(|p| p.trace_product(m).expect("matching sides").re),
        );
        return;
    }
    for p in first.operators() {
        let reduced = contract_first(m, dims[0], p);
        correlations_into(&reduced, &dims[1..], rest, out);
    }
}

/// All joint correlations `Tr[(⊗_i P^(i)_{j_i}) ρ]` as an m-way weight tensor.
pub fn correlation_tensor<T: Real>(
    rho: &Density<T>,
    povms: &[&SicPovm<T>],
) -> Result<WeightTensor<T>> {
    check_povms(rho, povms)?;
    let shape: Vec<usize> = povms.iter().map(|p| p.dim() * p.dim()).collect();
    let mut values = Vec::with_capacity(shape.iter().product());
    correlations_into(rho.matrix(), rho.dims(), povms, &mut values);
    WeightTensor::new(shape, values)
}

/// Bipartite `J(ρ)` by optimal rectangular matching. The assignment value is `J`.
pub fn j_bipartite<T: Real>(
    rho: &Density<T>,
    pa: &SicPovm<T>,
    pb: &SicPovm<T>,
) -> Result<Assignment<T>> {
    if rho.parties() != 2 {
        return Err(Error::DimensionMismatch(format!(
            "bipartite J needs 2 parties, state has {}",
            rho.parties()
        )));
    }
    max_weight_matching(&correlation_tensor(rho, &[pa, pb])?)
}

/// Multipartite `J(ρ)`; heuristic values are lower bounds.
pub fn j_multipartite<T: Real>(
    rho: &Density<T>,
    povms: &[&SicPovm<T>],
    solver: Solver,
) -> Result<(Assignment<T>, JMode)> {
    let w = correlation_tensor(rho, povms)?;
    let a = match solver {
        Solver::Exact => max_axial_assignment_exact(&w)?,
        Solver::Heuristic { restarts, seed } => max_axial_assignment_heuristic(&w, restarts, seed)?,
    };
    Ok((a, solver.mode()))
}

pub fn detect_bipartite<T: Real>(
    rho: &Density<T>,
    pa: &SicPovm<T>,
    pb: &SicPovm<T>,
    theorem: Theorem,
) -> Result<CriterionVerdict<T>> {
    if !theorem.is_bipartite() {
        return Err(Error::ParameterOutOfRange(format!(
            "{theorem} is not a bipartite criterion"
        )));
    }
    let bound = bound_for(theorem, &[pa.dim(), pb.dim()], &[pa.a(), pb.a()])?;
    let assignment = j_bipartite(rho, pa, pb)?;
    Ok(CriterionVerdict::new(
        theorem,
        assignment,
        JMode::Exact,
        bound,
    ))
}

pub fn detect_multipartite<T: Real>(
    rho: &Density<T>,
    povms: &[&SicPovm<T>],
    theorem: Theorem,
    solver: Solver,
) -> Result<CriterionVerdict<T>> {
    if theorem.is_bipartite() {
        return Err(Error::ParameterOutOfRange(format!(
            "{theorem} is not a multipartite criterion"
        )));
    }
    let dims: Vec<usize> = povms.iter().map(|p| p.dim()).collect();
    let purities: Vec<T> = povms.iter().map(|p| p.a()).collect();
    let bound = bound_for(theorem, &dims, &purities)?;
    let (assignment, mode) = j_multipartite(rho, povms, solver)?;
    Ok(CriterionVerdict::new(theorem, assignment, mode, bound))
}

/// A grouping of `n` parties into `k ≥ 2` disjoint nonempty blocks.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PartitionSpec {
    blocks: Vec<Vec<usize>>,
    block_dims: Vec<usize>,
}

impl PartitionSpec {
    /// `blocks` hold 0-based party indices.
    pub fn new(party_dims: &[usize], blocks: Vec<Vec<usize>>) -> Result<Self> {
        let n = party_dims.len();
        if blocks.len() < 2 {
            return Err(Error::InvalidPartition(format!(
                "need at least 2 blocks, got {}",
                blocks.len()
            )));
        }
        let mut seen = vec![false; n];
        for block in &blocks {
            if block.is_empty() {
                return Err(Error::InvalidPartition("empty block".into()));
            }
            for &p in block {
                if p >= n {
                    return Err(Error::InvalidPartition(format!(
                        "party {} out of range 1..={n}",
                        p + 1
                    )));
                }
                if std::mem::replace(&mut seen[p], true) {
                    return Err(Error::InvalidPartition(format!("party {} repeated", p + 1)));
                }
            }
        }
        if let Some(missing) = seen.iter().position(|s| !s) {
            return Err(Error::InvalidPartition(format!(
                "party {} not covered",
                missing + 1
            )));
        }
        let block_dims = blocks
            .iter()
            .map(|b| b.iter().map(|&p| party_dims[p]).product())
            .collect();
        Ok(Self { blocks, block_dims })
    }

    /// Parses comma-separated blocks of semicolon-separated 1-based parties,
    /// e.g. `"1;3,2"` for `{1,3}|{2}`.
    pub fn parse(spec: &str, party_dims: &[usize]) -> Result<Self> {
        let blocks = spec
            .split(',')
            .map(|block| {
                block
                    .split(';')
                    .map(|tok| {
                        let tok = tok.trim();
                        match tok.parse::<usize>() {
                            Ok(p) if p >= 1 => Ok(p - 1),
                            _ => Err(Error::InvalidPartition(format!("bad party index {tok:?}"))),
                        }
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(party_dims, blocks)
    }

    pub fn parties(&self) -> usize {
        self.blocks.iter().map(Vec::len).sum()
    }

    pub fn blocks(&self) -> &[Vec<usize>] {
        &self.blocks
    }

    pub fn block_dims(&self) -> &[usize] {
        &self.block_dims
    }

    /// Party order that makes every block contiguous.
    pub fn permutation(&self) -> Vec<usize> {
        self.blocks.concat()
    }
}

/// Regroups `rho` along `partition` and applies a multipartite criterion to
/// the blocks. `detected` certifies k-nonseparability for this partition.
pub fn detect_k_nonseparable<T: Real>(
    rho: &Density<T>,
    partition: &PartitionSpec,
    povms: &[&SicPovm<T>],
    theorem: Theorem,
    solver: Solver,
) -> Result<CriterionVerdict<T>> {
    if partition.parties() != rho.parties() {
        return Err(Error::InvalidPartition(format!(
            "partition covers {} parties, state has {}",
            partition.parties(),
            rho.parties()
        )));
    }
    let pd: Vec<usize> = povms.iter().map(|p| p.dim()).collect();
    if pd != partition.block_dims() {
        return Err(Error::DimensionMismatch(format!(
            "POVM dimensions {pd:?} do not match block dimensions {:?}",
            partition.block_dims()
        )));
    }
    let grouped = rho
        .permute_subsystems(&partition.permutation())?
        .regroup(partition.block_dims().to_vec())?;
    detect_multipartite(&grouped, povms, theorem, solver)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(x: f64, y: f64) -> bool {
        (x - y).abs() < 1e-14
    }

    #[test]
    fn bound_examples() {
        assert!(close(bound_thm1(2, 0.25, 2, 0.25).unwrap(), 1.0 / 3.0));
        assert!(close(bound_thm1(2, 0.25, 3, 1.0 / 9.0).unwrap(), 0.25));
        assert!(close(
            bound_thm2(2, 0.25, 3, 1.0 / 9.0).unwrap(),
            (1.0f64 / 18.0).sqrt()
        ));
        assert!(close(
            bound_thm3(&[2, 2, 2], &[0.25; 3]).unwrap(),
            1.0 / 3.0
        ));
        assert!(close(
            bound_thm3(&[2, 2, 3], &[0.25, 0.25, 1.0 / 9.0]).unwrap(),
            5.0 / 18.0
        ));
        assert!(close(
            bound_thm4(&[2, 2, 3], &[0.25, 0.25, 1.0 / 9.0]).unwrap(),
            (1.0f64 / 18.0).sqrt()
        ));
        assert!(close(
            bound_thm4(&[3, 3, 3], &[0.1; 3]).unwrap(),
            (0.9 + 1.0) / 12.0
        ));
    }

    #[test]
    fn symmetric_bounds_coincide() {
        let a = 0.07;
        let c = (a * 9.0 + 1.0) / 12.0;
        assert!(close(bound_thm1(3, a, 3, a).unwrap(), c));
        assert!(close(bound_thm2(3, a, 3, a).unwrap(), c));
    }

    #[test]
    fn lower_boundary_reduces_to_inverse_square() {
        // at a = 1/d³ the term is (1/d + 1)/(d(d+1)) = 1/d²; the open interval
        // excludes it, so probe just above
        let d = 3usize;
        let a: f64 = 1.0 / 27.0 * (1.0 + 1e-12);
        assert!((bound_thm1(d, a, d, a).unwrap() - 1.0 / 9.0).abs() < 1e-12);
        assert!(bound_thm1(d, 1.0 / 27.0, d, 1.0 / 27.0).is_err());
    }

    #[test]
    fn bound_argument_errors() {
        assert!(matches!(
            bound_thm3(&[2, 2], &[0.25]),
            Err(Error::DimensionMismatch(_))
        ));
        assert!(matches!(
            bound_thm1(2, 0.3, 2, 0.25),
            Err(Error::ParameterOutOfRange(_))
        ));
    }

    #[test]
    fn partition_parsing() {
        let p = PartitionSpec::parse("1;3,2", &[2, 3, 2]).unwrap();
        assert_eq!(p.blocks(), &[vec![0, 2], vec![1]]);
        assert_eq!(p.block_dims(), &[4, 3]);
        assert_eq!(p.permutation(), vec![0, 2, 1]);
        for bad in ["1;2;3", "1,1;2,3", "1,2", "0,1;2", "1,x,3", "1,2,4"] {
            assert!(
                matches!(
                    PartitionSpec::parse(bad, &[2, 2, 2]),
                    Err(Error::InvalidPartition(_))
                ),
                "{bad}"
            );
        }
    }

    #[test]
    fn theorem_numbers() {
        assert_eq!(Theorem::from_number(3), Some(Theorem::T3));
        assert_eq!(Theorem::from_number(5), None);
        assert_eq!(Theorem::T2.to_string(), "T2");
    }

    #[test]
    fn detection_threshold_is_strict() {
        assert!(!exceeds(1.0, 1.0));
        assert!(!exceeds(1.0 + 5e-13, 1.0));
        assert!(exceeds(1.0 + 2e-12, 1.0));
    }
}
