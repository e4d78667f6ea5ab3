//! Text helpers for the JSON fixture formats.
//!
//! Numbers are written by hand with 17 significant digits so files round-trip
//! bit-exactly in double precision; reading goes through serde.

use std::fmt::Write;

use crate::error::{Error, Result};
use crate::matcore::Matrix;
use crate::scalar::{c, Real};

pub(crate) fn number(x: f64) -> String {
    if x == 0.0 {
        // avoid "-0" artifacts in fixtures
        return "0.0000000000000000e0".to_string();
    }
    format!("{x:.16e}")
}

/// Flat row-major list of `[re, im]` pairs.
pub(crate) fn write_matrix<T: Real>(out: &mut String, m: &Matrix<T>) {
    out.push('[');
    for (i, z) in m.as_slice().iter().enumerate() {
        if i > 0 {
            out.push_str(", ");
        }
        let _ = write!(
            out,
            "[{}, {}]",
            number(z.re.as_f64()),
            number(z.im.as_f64())
        );
    }
    out.push(']');
}

pub(crate) fn read_matrix<T: Real>(side: usize, entries: &[[f64; 2]]) -> Result<Matrix<T>> {
    if entries.len() != side * side {
        return Err(Error::Shape(format!(
            "expected {} entries for side {side}, found {}",
            side * side,
            entries.len()
        )));
    }
    if entries.iter().flatten().any(|x| !x.is_finite()) {
        return Err(Error::Parse("non-finite matrix entry".into()));
    }
    Matrix::from_vec(
        side,
        side,
        entries
            .iter()
            .map(|[r, i]| c(T::lit(*r), T::lit(*i)))
            .collect(),
    )
}

/// Integer square root for entry counts; `None` if not a perfect square.
pub(crate) fn exact_sqrt(n: usize) -> Option<usize> {
    let r = (n as f64).sqrt().round() as usize;
    (r * r == n).then_some(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_round_trip_bit_exactly() {
        for x in [1.0 / 3.0, -0.1, 1e-300, 6.02e23, std::f64::consts::PI, 0.0] {
            let s = number(x);
            assert_eq!(s.parse::<f64>().unwrap().to_bits(), x.to_bits(), "{s}");
        }
    }

    #[test]
    fn exact_sqrt_detects_squares() {
        assert_eq!(exact_sqrt(16), Some(4));
        assert_eq!(exact_sqrt(15), None);
    }
}
