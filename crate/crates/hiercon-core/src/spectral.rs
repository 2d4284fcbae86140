//! Numeric spectra of dense real matrices and the convergence rates
//! derived from them. Works for any depth; the closed forms in
//! [`crate::closedform`] cover two layers only and are cross-checked
//! against this module.

use alloc::vec::Vec;

use nalgebra::{Complex, DMatrix};

use crate::dynamics::InputSpec;
use crate::hierarchy::WeightMatrix;
use crate::scalar;
use crate::{Error, Result};

/// Distance in the complex plane, via `norm_sqr` so no float runtime
/// beyond the crate's own shim is needed.
fn cdist(a: Complex<f64>, b: Complex<f64>) -> f64 {
    scalar::sqrt((a - b).norm_sqr())
}

/// Two eigenvalues closer than this to the dominant one make the rate
/// undefined (the network is effectively disconnected or degenerate).
pub const DOMINANT_GAP: f64 = 1e-8;

/// All eigenvalues of a real matrix, sorted by descending real part and
/// then descending imaginary part.
#[derive(Debug, Clone, PartialEq)]
pub struct NumericSpectrum {
    pub eigenvalues: Vec<Complex<f64>>,
    pub n: usize,
}

/// Computes the full spectrum by Hessenberg reduction and double-shift QR
/// iteration.
pub fn numeric_spectrum(matrix: &DMatrix<f64>) -> Result<NumericSpectrum> {
    let n = matrix.nrows();
    if n == 0 {
        return Err(Error::Invalid("matrix must be nonempty"));
    }
    if matrix.ncols() != n {
        return Err(Error::DimensionMismatch { expected: n, got: matrix.ncols() });
    }
    if matrix.iter().any(|x| !x.is_finite()) {
        return Err(Error::Invalid("matrix entries must be finite"));
    }
    let mut eigenvalues = crate::qr::eigenvalues(matrix)?;
    eigenvalues.sort_unstable_by(|a, b| b.re.total_cmp(&a.re).then(b.im.total_cmp(&a.im)));
    Ok(NumericSpectrum { eigenvalues, n })
}

/// Decay exponent of the autonomous dynamics: one minus the largest real
/// part among eigenvalues away from the dominant eigenvalue 1. Errors if
/// the dominant eigenvalue is not simple.
pub fn rate_autonomous(w: &WeightMatrix) -> Result<f64> {
    let spectrum = numeric_spectrum(w.entries())?;
    let one = Complex::new(1.0, 0.0);
    let dominant = spectrum
        .eigenvalues
        .iter()
        .filter(|l| cdist(**l, one) <= DOMINANT_GAP)
        .count();
    if dominant != 1 {
        return Err(Error::Degenerate);
    }
    let second = spectrum
        .eigenvalues
        .iter()
        .filter(|l| cdist(**l, one) > DOMINANT_GAP)
        .map(|l| l.re)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(1.0 - second)
}

/// Decay exponent towards the input value: one minus the largest real part
/// of `W - diag(gamma)`. Requires at least one positive intensity.
pub fn rate_with_input(w: &WeightMatrix, input: &InputSpec) -> Result<f64> {
    if input.gamma.len() != w.n() {
        return Err(Error::DimensionMismatch { expected: w.n(), got: input.gamma.len() });
    }
    if input.is_autonomous() {
        return Err(Error::NoInput);
    }
    let mut damped = w.entries().clone();
    for i in 0..w.n() {
        damped[(i, i)] -= input.gamma[i];
    }
    let spectrum = numeric_spectrum(&damped)?;
    let largest = spectrum.eigenvalues.iter().map(|l| l.re).fold(f64::NEG_INFINITY, f64::max);
    Ok(1.0 - largest)
}

/// Greedy nearest matching of an expected real multiset against computed
/// eigenvalues. Expands `(value, multiplicity)` pairs, pairs each expected
/// value with the closest unconsumed computed eigenvalue, and returns the
/// largest pairwise distance. Errors if the multiplicities do not sum to
/// the computed count.
pub fn match_spectra(expected: &[(f64, usize)], observed: &[Complex<f64>]) -> Result<f64> {
    let total: usize = expected.iter().map(|(_, m)| m).sum();
    if total != observed.len() {
        return Err(Error::DimensionMismatch { expected: observed.len(), got: total });
    }
    let mut used = alloc::vec![false; observed.len()];
    let mut worst = 0.0f64;
    for &(value, mult) in expected {
        for _ in 0..mult {
            let mut best: Option<(usize, f64)> = None;
            for (k, eig) in observed.iter().enumerate() {
                if used[k] {
                    continue;
                }
                let dist = cdist(*eig, Complex::new(value, 0.0));
                if best.is_none_or(|(_, d)| dist < d) {
                    best = Some((k, dist));
                }
            }
            let (k, dist) = best.expect("count checked above");
            used[k] = true;
            worst = worst.max(dist);
        }
    }
    Ok(worst)
}
