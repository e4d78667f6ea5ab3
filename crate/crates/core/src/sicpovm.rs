//! General symmetric informationally complete POVMs.
//!
//! A general SIC-POVM on `C^d` is a set of `d²` positive operators `P_α`
//! summing to the identity with `Tr P_α² = a` and
//! `Tr P_α P_β = (1 − d a)/(d(d² − 1))` for `α ≠ β`, where `1/d³ < a ≤ 1/d²`.
//! The construction used here is
//!
//! ```text
//! P_α   = I/d² + t [F − d(d+1) F_α]     α = 1..d²−1
//! P_d²  = I/d² + t (d+1) F
//! ```
//!
//! with `{F_α}` the generalized Gell-Mann basis and `F = Σ F_α`, giving
//! `a = 1/d³ + t² (d−1)(d+1)³`.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gellmann::{check_dim, gellmann_basis};
use crate::json;
use crate::matcore::{min_eigenvalue, Density, Matrix};
use crate::scalar::{re, Real};

#[derive(Debug, Clone, PartialEq)]
pub struct SicPovm<T: Real> {
    dim: usize,
    t: T,
    a: T,
    operators: Vec<Matrix<T>>,
}

/// Worst-case deviations from the defining conditions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PovmResiduals {
    pub identity_sum: f64,
    pub self_overlap: f64,
    pub cross_overlap: f64,
    pub min_eigenvalue: f64,
}

impl PovmResiduals {
    pub const IDENTITY_TOL: f64 = 1e-10;
    pub const OVERLAP_TOL: f64 = 1e-9;
    pub const PSD_TOL: f64 = 1e-10;

    /// First violated condition, in the order identity, self overlap, cross overlap, positivity.
    pub fn first_violation(&self) -> Option<String> {
        self.first_violation_at(Self::IDENTITY_TOL, Self::OVERLAP_TOL, Self::PSD_TOL)
    }

    fn for_scalar<T: Real>(&self) -> Option<String> {
        let tol = T::internal_tol().as_f64();
        self.first_violation_at(tol, 10.0 * tol, tol)
    }

    // negated comparisons so that NaN residuals count as violations
    #[allow(clippy::neg_cmp_op_on_partial_ord)]
    pub fn first_violation_at(&self, identity: f64, overlap: f64, psd: f64) -> Option<String> {
        if !(self.identity_sum <= identity) {
            Some(format!(
                "identity-sum residual {:e} exceeds {identity:e}",
                self.identity_sum
            ))
        } else if !(self.self_overlap <= overlap) {
            Some(format!(
                "self-overlap residual {:e} exceeds {overlap:e}",
                self.self_overlap
            ))
        } else if !(self.cross_overlap <= overlap) {
            Some(format!(
                "cross-overlap residual {:e} exceeds {overlap:e}",
                self.cross_overlap
            ))
        } else if !(self.min_eigenvalue >= -psd) {
            Some(format!(
                "positivity: minimum eigenvalue {:e}",
                self.min_eigenvalue
            ))
        } else {
            None
        }
    }
}

/// `(a d² + 1)/(d (d + 1))`: the index of coincidence of any pure state.
pub fn pure_state_coincidence<T: Real>(d: usize, a: T) -> T {
    let dt = T::from_usize_exact(d);
    (a * dt * dt + T::one()) / (dt * (dt + T::one()))
}

/// Admissible purity interval `(1/d³, 1/d²]`.
pub fn check_purity_range<T: Real>(d: usize, a: T) -> Result<()> {
    let dt = T::from_usize_exact(d);
    let lower = (dt * dt * dt).recip();
    let upper = (dt * dt).recip();
    if !(a > lower && a <= upper * (T::one() + T::epsilon() * T::lit(16.0))) {
        return Err(Error::ParameterOutOfRange(format!(
            "a = {a} outside (1/d³, 1/d²] = ({lower}, {upper}] for d = {d}"
        )));
    }
    Ok(())
}

fn a_from_t<T: Real>(d: usize, t: T) -> T {
    let dt = T::from_usize_exact(d);
    let dp = dt + T::one();
    (dt * dt * dt).recip() + t * t * (dt - T::one()) * dp * dp * dp
}

/// The `d²` traceless directions `M_α` with `P_α = I/d² + t M_α`.
fn directions<T: Real>(d: usize) -> Result<Vec<Matrix<T>>> {
    let basis = gellmann_basis::<T>(d)?;
    let f = basis.sum();
    let k = T::from_usize_exact(d * (d + 1));
    let mut dirs: Vec<Matrix<T>> = basis.elements().iter().map(|fa| f - &fa.scale(k)).collect();
    dirs.push(f.scale(T::from_usize_exact(d + 1)));
    Ok(dirs)
}

fn operators_at<T: Real>(d: usize, dirs: &[Matrix<T>], t: T) -> Vec<Matrix<T>> {
    let dt = T::from_usize_exact(d);
    let base = Matrix::identity(d).scale((dt * dt).recip());
    dirs.iter().map(|m| &base + &m.scale(t)).collect()
}

/// Minimum eigenvalue over all operators with the (1-based) index attaining it.
fn min_eigenvalue_over<T: Real>(ops: &[Matrix<T>]) -> (usize, T) {
    ops.iter()
        .enumerate()
        .map(|(i, p)| {
            (
                i + 1,
                min_eigenvalue(p).expect("constructed operators are Hermitian"),
            )
        })
        .fold(
            (0, T::infinity()),
            |best, cur| if cur.1 < best.1 { cur } else { best },
        )
}

impl<T: Real> SicPovm<T> {
    /// Explicit construction at parameter `t`.
    pub fn build_from_t(d: usize, t: T) -> Result<Self> {
        check_dim(d)?;
        if !t.is_finite() || t.abs() < T::lit(1e-12) {
            return Err(Error::DegenerateParameter(format!(
                "|t| = {t} < 1e-12 gives a = 1/d³, outside the open purity interval"
            )));
        }
        let dirs = directions::<T>(d)?;
        let operators = operators_at(d, &dirs, t);
        let (alpha, eigenvalue) = min_eigenvalue_over(&operators);
        if eigenvalue < -T::internal_tol() {
            return Err(Error::PositivityViolation {
                alpha,
                eigenvalue: eigenvalue.as_f64(),
            });
        }
        let povm = Self {
            dim: d,
            t,
            a: a_from_t(d, t),
            operators,
        };
        if let Some(msg) = povm.residuals().for_scalar::<T>() {
            return Err(Error::PovmCondition(msg));
        }
        Ok(povm)
    }

    /// Construction at purity `a`, using the positive root for `t`.
    pub fn build_from_a(d: usize, a: T) -> Result<Self> {
        check_dim(d)?;
        check_purity_range(d, a)?;
        let dt = T::from_usize_exact(d);
        let dp = dt + T::one();
        let t = ((a - (dt * dt * dt).recip()) / ((dt - T::one()) * dp * dp * dp)).sqrt();
        Self::build_from_t(d, t)
    }

    /// Construction at the largest feasible `t`, i.e. the largest purity this
    /// construction reaches.
    pub fn build_max(d: usize) -> Result<Self> {
        Self::build_from_t(d, max_t::<T>(d)?)
    }

    /// Wraps externally supplied operators without checking the defining conditions.
    pub fn from_parts(dim: usize, t: T, a: T, operators: Vec<Matrix<T>>) -> Result<Self> {
        check_dim(dim)?;
        if operators.len() != dim * dim {
            return Err(Error::Shape(format!(
                "{} operators for dimension {dim}, need {}",
                operators.len(),
                dim * dim
            )));
        }
        if let Some(op) = operators
            .iter()
            .find(|m| m.rows() != dim || m.cols() != dim)
        {
            return Err(Error::Shape(format!(
                "operator is {}x{}, need {dim}x{dim}",
                op.rows(),
                op.cols()
            )));
        }
        Ok(Self {
            dim,
            t,
            a,
            operators,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn t(&self) -> T {
        self.t
    }

    pub fn a(&self) -> T {
        self.a
    }

    pub fn operators(&self) -> &[Matrix<T>] {
        &self.operators
    }

    /// Cross overlap `(1 − d a)/(d (d² − 1))`.
    pub fn cross_overlap(&self) -> T {
        let dt = T::from_usize_exact(self.dim);
        (T::one() - dt * self.a) / (dt * (dt * dt - T::one()))
    }

    pub fn min_eigenvalue(&self) -> T {
        min_eigenvalue_over(&self.operators).1
    }

    pub fn residuals(&self) -> PovmResiduals {
        let d = self.dim;
        let mut sum = Matrix::zeros(d, d);
        for p in &self.operators {
            sum = &sum + p;
        }
        let identity_sum = sum.max_abs_diff(&Matrix::identity(d));
        let cross = self.cross_overlap();
        let mut self_overlap = T::zero();
        let mut cross_overlap = T::zero();
        for (i, p) in self.operators.iter().enumerate() {
            for (j, q) in self.operators.iter().enumerate().skip(i) {
                let v = p.trace_product(q).expect("square operators");
                let dev = if i == j {
                    (v - re(self.a)).norm()
                } else {
                    (v - re(cross)).norm()
                };
                if i == j {
                    self_overlap = self_overlap.max(dev);
                } else {
                    cross_overlap = cross_overlap.max(dev);
                }
            }
        }
        PovmResiduals {
            identity_sum: identity_sum.as_f64(),
            self_overlap: self_overlap.as_f64(),
            cross_overlap: cross_overlap.as_f64(),
            min_eigenvalue: self.min_eigenvalue().as_f64(),
        }
    }

    /// Checks the defining conditions at the standard tolerances.
    pub fn validate(&self) -> Result<PovmResiduals> {
        check_purity_range(self.dim, self.a)?;
        let r = self.residuals();
        match r.for_scalar::<T>() {
            Some(msg) => Err(Error::PovmCondition(msg)),
            None => Ok(r),
        }
    }

    /// Entrywise complex conjugate of every operator.
    pub fn conjugate(&self) -> Self {
        Self {
            dim: self.dim,
            t: self.t,
            a: self.a,
            operators: self.operators.iter().map(Matrix::conj).collect(),
        }
    }

    fn check_state(&self, rho: &Density<T>) -> Result<()> {
        if rho.side() != self.dim {
            return Err(Error::DimensionMismatch(format!(
                "state side {} but POVM dimension {}",
                rho.side(),
                self.dim
            )));
        }
        Ok(())
    }

    /// Outcome probabilities `Tr(P_α ρ)`.
    pub fn probabilities(&self, rho: &Density<T>) -> Result<Vec<T>> {
        self.check_state(rho)?;
        Ok(self
            .operators
            .iter()
            .map(|p| p.trace_product(rho.matrix()).expect("matching sides").re)
            .collect())
    }

    /// `C(P|ρ) = Σ_α [Tr(P_α ρ)]²`.
    pub fn index_of_coincidence(&self, rho: &Density<T>) -> Result<T> {
        Ok(self
            .probabilities(rho)?
            .into_iter()
            .fold(T::zero(), |acc, p| acc + p * p))
    }

    /// Index of coincidence predicted from the purity `Tr ρ²`.
    pub fn coincidence_from_purity(&self, purity: T) -> T {
        let dt = T::from_usize_exact(self.dim);
        let a = self.a;
        ((a * dt * dt * dt - T::one()) * purity + dt * (T::one() - a * dt))
            / (dt * (dt * dt - T::one()))
    }

    /// Inverts the coincidence identity for `Tr ρ²`.
    pub fn purity_from_ic(&self, c: T) -> Result<T> {
        let dt = T::from_usize_exact(self.dim);
        let a = self.a;
        let denom = a * dt * dt * dt - T::one();
        if denom.abs() <= T::lit(1e-12) {
            return Err(Error::DegenerateParameter(format!(
                "a·d³ − 1 = {denom} makes the coincidence identity non-invertible"
            )));
        }
        Ok((c * dt * (dt * dt - T::one()) - dt * (T::one() - a * dt)) / denom)
    }

    pub fn to_json(&self) -> String {
        let mut out = String::new();
        out.push_str(&format!(
            "{{\n  \"dim\": {},\n  \"t\": {},\n  \"a\": {},\n  \"operators\": [\n",
            self.dim,
            json::number(self.t.as_f64()),
            json::number(self.a.as_f64())
        ));
        for (i, p) in self.operators.iter().enumerate() {
            out.push_str("    ");
            json::write_matrix(&mut out, p);
            out.push_str(if i + 1 < self.operators.len() {
                ",\n"
            } else {
                "\n"
            });
        }
        out.push_str("  ]\n}\n");
        out
    }

    /// Parses a POVM file. The defining conditions are not checked; call [`Self::validate`].
    pub fn from_json(text: &str) -> Result<Self> {
        let file: PovmFile = serde_json::from_str(text)?;
        let ops = file
            .operators
            .iter()
            .map(|entries| json::read_matrix(file.dim, entries))
            .collect::<Result<Vec<_>>>()?;
        Self::from_parts(file.dim, T::lit(file.t), T::lit(file.a), ops)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_json())?;
        Ok(())
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PovmFile {
    dim: usize,
    t: f64,
    a: f64,
    operators: Vec<Vec<[f64; 2]>>,
}

/// Largest `t > 0` for which every constructed operator is positive
/// semidefinite, by bisection to an absolute tolerance of 1e-12.
pub fn max_t<T: Real>(d: usize) -> Result<T> {
    check_dim(d)?;
    let dirs = directions::<T>(d)?;
    let feasible = |t: T| min_eigenvalue_over(&operators_at(d, &dirs, t)).1 >= T::zero();
    let dt = T::from_usize_exact(d);
    let mut lo = T::zero();
    let mut hi = (dt * dt).recip();
    while feasible(hi) {
        lo = hi;
        hi = hi + hi;
    }
    let tol = T::lit(1e-12).max(T::epsilon() * T::lit(4.0));
    while hi - lo > tol {
        let mid = (lo + hi) * T::lit(0.5);
        if mid <= lo || mid >= hi {
            break;
        }
        if feasible(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    Ok(lo)
}
