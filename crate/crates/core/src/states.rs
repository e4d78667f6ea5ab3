//! Benchmark states and the state file format.
//!
//! Seeded generators use ChaCha8 (`rand_chacha`) seeded with a 64-bit integer
//! through `SeedableRng::seed_from_u64`, Gaussian variates from
//! `rand_distr::StandardNormal` and exponential variates from `rand_distr::Exp1`.
//! Draw order is documented per generator so corpora can be regenerated.

use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Exp1, StandardNormal};
use serde::Deserialize;

use crate::error::{Error, Result};
use crate::json;
use crate::matcore::{tensor_product_all, Density, Matrix};
use crate::scalar::{c, re, Real, C};

fn check_probability(p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::ParameterOutOfRange(format!(
            "p = {p} outside [0, 1]"
        )));
    }
    Ok(())
}

/// `(1/√d) Σ_i |i…i⟩` on `m` parties of dimension `d`.
fn ghz_vector<T: Real>(m: usize, d: usize) -> Vec<C<T>> {
    let side = d.pow(m as u32);
    let amp = re(T::from_usize_exact(d).sqrt().recip());
    let mut v = vec![c(T::zero(), T::zero()); side];
    // |i…i⟩ sits at i·(1 + d + … + d^{m−1})
    let stride: usize = (0..m).map(|k| d.pow(k as u32)).sum();
    for i in 0..d {
        v[i * stride] = amp;
    }
    v
}

/// `(1 − p) I/dᵐ + p |GHZ⟩⟨GHZ|`.
pub fn ghz_with_noise<T: Real>(m: usize, d: usize, p: f64) -> Result<Density<T>> {
    if m < 2 || d < 2 {
        return Err(Error::ParameterOutOfRange(format!(
            "need m >= 2 parties of dimension >= 2, got m = {m}, d = {d}"
        )));
    }
    check_probability(p)?;
    let side = d.pow(m as u32);
    let pt = T::lit(p);
    let noise = Matrix::identity(side).scale((T::one() - pt) / T::from_usize_exact(side));
    let pure = Matrix::projector(&ghz_vector::<T>(m, d)).scale(pt);
    Density::constructed(vec![d; m], &noise + &pure)
}

/// `|Φ⁺⟩⟨Φ⁺|` with `|Φ⁺⟩ = (1/√d) Σ_i |ii⟩`.
pub fn maximally_entangled<T: Real>(d: usize) -> Result<Density<T>> {
    ghz_with_noise(2, d, 1.0)
}

/// `(1 − p) I/d² + p |Φ⁺⟩⟨Φ⁺|`; separable exactly when `p ≤ 1/(d+1)`.
pub fn isotropic<T: Real>(d: usize, p: f64) -> Result<Density<T>> {
    ghz_with_noise(2, d, p)
}

fn gaussian_complex<T: Real>(rng: &mut ChaCha8Rng) -> C<T> {
    let x: f64 = rng.sample(StandardNormal);
    let y: f64 = rng.sample(StandardNormal);
    c(T::lit(x), T::lit(y))
}

/// Haar-random unit vector: a normalized complex Gaussian vector.
fn haar_vector<T: Real>(d: usize, rng: &mut ChaCha8Rng) -> Vec<C<T>> {
    let v: Vec<C<T>> = (0..d).map(|_| gaussian_complex(rng)).collect();
    let norm = v.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt();
    v.into_iter().map(|z| z / norm).collect()
}

/// Random fully separable state `Σ_k p_k ⊗_i |φ_ik⟩⟨φ_ik|`.
///
/// Draw order: for each term, each party's Haar vector (real then imaginary
/// Gaussian per entry); then `terms` `Exp(1)` variates normalized to the
/// Dirichlet(1,…,1) weights.
pub fn random_separable<T: Real>(dims: &[usize], terms: usize, seed: u64) -> Result<Density<T>> {
    if terms == 0 {
        return Err(Error::ParameterOutOfRange("terms must be >= 1".into()));
    }
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::Shape(format!("invalid dims {dims:?}")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let products: Vec<Matrix<T>> = (0..terms)
        .map(|_| {
            let locals: Vec<Matrix<T>> = dims
                .iter()
                .map(|&d| Matrix::projector(&haar_vector::<T>(d, &mut rng)))
                .collect();
            tensor_product_all(&locals.iter().collect::<Vec<_>>())
        })
        .collect();
    let raw: Vec<f64> = (0..terms).map(|_| rng.sample(Exp1)).collect();
    let total: f64 = raw.iter().sum();
    let side: usize = dims.iter().product();
    let mut acc = Matrix::zeros(side, side);
    for (prod, w) in products.iter().zip(&raw) {
        acc = &acc + &prod.scale(T::lit(w / total));
    }
    Density::constructed(dims.to_vec(), acc)
}

/// Ginibre state `G G† / Tr(G G†)` with `G` a `D × rank` complex Gaussian
/// matrix drawn row by row (real then imaginary part per entry).
pub fn random_density<T: Real>(dims: &[usize], rank: usize, seed: u64) -> Result<Density<T>> {
    if dims.is_empty() || dims.iter().any(|&d| d < 2) {
        return Err(Error::Shape(format!("invalid dims {dims:?}")));
    }
    let side: usize = dims.iter().product();
    if rank == 0 || rank > side {
        return Err(Error::ParameterOutOfRange(format!(
            "rank {rank} outside 1..={side}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let g = Matrix::from_vec(
        side,
        rank,
        (0..side * rank)
            .map(|_| gaussian_complex(&mut rng))
            .collect(),
    )?;
    let mut gg = &g * &g.adjoint();
    // exact Hermitian symmetry
    gg = (&gg + &gg.adjoint()).scale(T::lit(0.5));
    let tr = gg.trace().re;
    Density::constructed(dims.to_vec(), gg.scale(tr.recip()))
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct StateFile {
    dims: Vec<usize>,
    #[serde(default)]
    label: Option<String>,
    matrix: Vec<[f64; 2]>,
}

pub fn state_to_json<T: Real>(rho: &Density<T>, label: Option<&str>) -> String {
    let dims: Vec<String> = rho.dims().iter().map(ToString::to_string).collect();
    let mut out = format!("{{\n  \"dims\": [{}],\n", dims.join(", "));
    if let Some(label) = label {
        out.push_str(&format!(
            "  \"label\": {},\n",
            serde_json::to_string(label).expect("string serializes")
        ));
    }
    out.push_str("  \"matrix\": ");
    json::write_matrix(&mut out, rho.matrix());
    out.push_str("\n}\n");
    out
}

/// Parses and validates a state file; returns the state and its optional label.
pub fn state_from_json<T: Real>(text: &str) -> Result<(Density<T>, Option<String>)> {
    let file: StateFile = serde_json::from_str(text)?;
    let side = json::exact_sqrt(file.matrix.len()).ok_or_else(|| {
        Error::Shape(format!(
            "{} matrix entries is not a square count",
            file.matrix.len()
        ))
    })?;
    let product: usize = file.dims.iter().product();
    if product != side {
        return Err(Error::Shape(format!(
            "dims {:?} multiply to {product} but matrix side is {side}",
            file.dims
        )));
    }
    let m = json::read_matrix(side, &file.matrix)?;
    Ok((Density::new(file.dims, m)?, file.label))
}

pub fn save_state<T: Real>(rho: &Density<T>, path: impl AsRef<Path>) -> Result<()> {
    std::fs::write(path, state_to_json(rho, None))?;
    Ok(())
}

pub fn save_state_labeled<T: Real>(
    rho: &Density<T>,
    label: &str,
    path: impl AsRef<Path>,
) -> Result<()> {
    std::fs::write(path, state_to_json(rho, Some(label)))?;
    Ok(())
}

pub fn load_state<T: Real>(path: impl AsRef<Path>) -> Result<Density<T>> {
    Ok(state_from_json(&std::fs::read_to_string(path)?)?.0)
}
