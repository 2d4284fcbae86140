//! Closed-form spectral theory for two-layer networks: the stationary
//! weight vector, the full eigenvalue list with multiplicities, decay
//! rates, the equal-weights specialization and its optimum, the
//! first-order input-sensitivity coefficient, and explicit eigenvector
//! families for every eigenvalue.
//!
//! Everything here is cross-checked against the numeric path in
//! [`crate::spectral`]; see the crate's integration tests.

use nalgebra::DVector;

use crate::hierarchy::HierarchyConfig;
use crate::scalar;
use crate::{Error, Result};

/// The three real roots of the cubic that generates the eigenvalue
/// triple with multiplicity `M - 1` each, ordered `K_B > K_C > K_D`.
///
/// In standard form the cubic reads
/// `M b^2 K^3 + b (a b - 2M - (M+a)(M+b-1)) K^2 - a (2b+1) K + a = 0`
/// with `a = alpha`, `b = beta`. Its value at 0 is `a > 0` and at `1/b`
/// it is `-(M+a)(M+b)/b < 0`, which forces the sign pattern
/// `K_B > 1/beta`, `0 < K_C < 1/beta`, `K_D < 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CubicRoots {
    pub k_b: f64,
    pub k_c: f64,
    pub k_d: f64,
}

/// Which of the three cubic roots an eigenvector family belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CubicBranch {
    B,
    C,
    D,
}

/// The three simple eigenvalues with explicitly constructed eigenvectors.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimpleFamily {
    F,
    G,
    H,
}

/// Complete two-layer spectrum. `lambda_a = 1` is simple and dominant;
/// `lambda_b`, `lambda_c`, `lambda_d` carry multiplicity `M - 1` each;
/// `lambda_e` carries `M(M-1)`; `lambda_f`, `lambda_g`, `lambda_h` are
/// simple. Total count `(M+1)^2`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectrumL2 {
    pub lambda_a: f64,
    pub lambda_b: f64,
    pub lambda_c: f64,
    pub lambda_d: f64,
    pub lambda_e: f64,
    pub lambda_f: f64,
    pub lambda_g: f64,
    pub lambda_h: f64,
    pub roots: CubicRoots,
    pub config: HierarchyConfig,
}

impl SpectrumL2 {
    /// `(value, multiplicity)` pairs in the fixed `A..H` order.
    pub fn multiset(&self) -> [(f64, usize); 8] {
        let m = self.config.breadth as usize;
        [
            (self.lambda_a, 1),
            (self.lambda_b, m - 1),
            (self.lambda_c, m - 1),
            (self.lambda_d, m - 1),
            (self.lambda_e, m * (m - 1)),
            (self.lambda_f, 1),
            (self.lambda_g, 1),
            (self.lambda_h, 1),
        ]
    }

    pub fn total_multiplicity(&self) -> usize {
        self.multiset().iter().map(|(_, m)| m).sum()
    }
}

/// Left eigenvector of the coupling matrix for eigenvalue 1, normalized to
/// sum to one. Entry pattern: top members share one value `K`, the top
/// leader has `K (M+alpha)/(M+beta)`, bottom members share `K beta/alpha`,
/// bottom leaders share `K beta (M+alpha) / (alpha (M+beta))`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerronVectorL2 {
    pub pi: DVector<f64>,
    /// The normalization factor `K` shared by the top members.
    pub k_norm: f64,
}

fn validate_params(breadth: u32, alpha: f64, beta: f64) -> Result<()> {
    HierarchyConfig { layers: 2, breadth, alpha, beta }.validate()
}

fn require_two_layers(config: &HierarchyConfig) -> Result<()> {
    config.validate()?;
    if config.layers != 2 {
        return Err(Error::TwoLayersOnly);
    }
    Ok(())
}

/// Three real roots of `x^3 + a x^2 + b x + c`, descending, by the
/// trigonometric method. Assumes the three-real-roots regime; a slightly
/// out-of-range cosine argument (borderline multiple roots) is clamped.
fn solve_cubic_three_real(a: f64, b: f64, c: f64) -> Result<[f64; 3]> {
    let q = (a * a - 3.0 * b) / 9.0;
    let r = (2.0 * a * a * a - 9.0 * a * b + 27.0 * c) / 54.0;
    if !(q.is_finite() && r.is_finite() && q > 0.0) {
        return Err(Error::NoConvergence);
    }
    let qs = scalar::sqrt(q);
    let theta = scalar::acos((r / (q * qs)).clamp(-1.0, 1.0));
    let tau = 2.0 * core::f64::consts::PI;
    let mut roots = [
        -2.0 * qs * scalar::cos(theta / 3.0) - a / 3.0,
        -2.0 * qs * scalar::cos((theta + tau) / 3.0) - a / 3.0,
        -2.0 * qs * scalar::cos((theta - tau) / 3.0) - a / 3.0,
    ];
    roots.sort_unstable_by(|x, y| y.total_cmp(x));
    Ok(roots)
}

/// Solves the root cubic (see [`CubicRoots`]) by the trigonometric closed
/// form plus one Newton polish per root, then verifies the sign pattern.
pub fn cubic_k_roots(breadth: u32, alpha: f64, beta: f64) -> Result<CubicRoots> {
    validate_params(breadth, alpha, beta)?;
    let m = breadth as f64;
    let c3 = m * beta * beta;
    let c2 = beta * (alpha * beta - 2.0 * m - (m + alpha) * (m + beta - 1.0));
    let c1 = -alpha * (2.0 * beta + 1.0);
    let c0 = alpha;

    let mut roots = solve_cubic_three_real(c2 / c3, c1 / c3, c0 / c3)?;
    let p = |k: f64| ((c3 * k + c2) * k + c1) * k + c0;
    let dp = |k: f64| (3.0 * c3 * k + 2.0 * c2) * k + c1;
    for k in roots.iter_mut() {
        let d = dp(*k);
        if d != 0.0 {
            *k -= p(*k) / d;
        }
    }
    roots.sort_unstable_by(|x, y| y.total_cmp(x));

    let [k_b, k_c, k_d] = roots;
    // Value at 0 is alpha > 0 and at 1/beta it is negative, so the roots
    // must straddle those points; anything else means the arithmetic broke.
    let ok = k_b > 1.0 / beta && k_c > 0.0 && k_c < 1.0 / beta && k_d < 0.0;
    if !ok {
        return Err(Error::NoConvergence);
    }
    Ok(CubicRoots { k_b, k_c, k_d })
}

/// Eigenvalue generated by a cubic root:
/// `lambda = 1 - (beta K - M - beta - 1) / ((M+beta)(beta K - 1))`.
fn lambda_from_root(k: f64, m: f64, beta: f64) -> f64 {
    1.0 - (beta * k - m - beta - 1.0) / ((m + beta) * (beta * k - 1.0))
}

/// Full closed-form spectrum of a two-layer network.
pub fn analytic_spectrum_l2(config: &HierarchyConfig) -> Result<SpectrumL2> {
    require_two_layers(config)?;
    let m = config.breadth as f64;
    let (alpha, beta) = (config.alpha, config.beta);
    let roots = cubic_k_roots(config.breadth, alpha, beta)?;
    let disc = (m - 1.0) * (m - 1.0) + 4.0 * (m + beta) * (m + alpha * beta) / (m + alpha);
    let sq = scalar::sqrt(disc);
    Ok(SpectrumL2 {
        lambda_a: 1.0,
        lambda_b: lambda_from_root(roots.k_b, m, beta),
        lambda_c: lambda_from_root(roots.k_c, m, beta),
        lambda_d: lambda_from_root(roots.k_d, m, beta),
        lambda_e: (beta - 1.0) / (m + beta),
        lambda_f: (m * (alpha - 1.0) + alpha * (beta - 1.0)) / ((m + alpha) * (m + beta)),
        lambda_g: (m - 1.0 + sq) / (2.0 * (m + beta)),
        lambda_h: (m - 1.0 - sq) / (2.0 * (m + beta)),
        roots,
        config: *config,
    })
}

/// Stationary weight vector of a two-layer network, with normalization
/// `K = alpha (M+beta) / ((M^2 + M + alpha + M beta)(M beta + alpha))`.
pub fn left_perron_l2(config: &HierarchyConfig) -> Result<PerronVectorL2> {
    require_two_layers(config)?;
    let m = config.breadth as usize;
    let mf = m as f64;
    let (alpha, beta) = (config.alpha, config.beta);
    let k = alpha * (mf + beta) / ((mf * mf + mf + alpha + mf * beta) * (mf * beta + alpha));
    let top_leader = k * (mf + alpha) / (mf + beta);
    let bottom_member = k * beta / alpha;
    let bottom_leader = k * beta * (mf + alpha) / (alpha * (mf + beta));

    let n = (m + 1) * (m + 1);
    let mut pi = DVector::zeros(n);
    for p in 0..m {
        pi[p] = k;
    }
    pi[m] = top_leader;
    for unit in 1..=m {
        let base = (m + 1) * unit;
        for p in 0..m {
            pi[base + p] = bottom_member;
        }
        pi[base + m] = bottom_leader;
    }
    Ok(PerronVectorL2 { pi, k_norm: k })
}

/// Autonomous decay rate of a two-layer network,
/// `r = 1 - max(lambda_B, lambda_G)`.
pub fn rate_autonomous_l2(config: &HierarchyConfig) -> Result<f64> {
    let s = analytic_spectrum_l2(config)?;
    Ok(1.0 - s.lambda_b.max(s.lambda_g))
}

/// Autonomous rate in the equal-weights case `beta = alpha`:
/// `r = (s - sqrt(s^2 - 4 alpha)) / (2 (M + alpha))` with
/// `s = M + 2 alpha + 1`, evaluated in the rationalized form
/// `2 alpha / ((M + alpha)(s + sqrt(s^2 - 4 alpha)))` to avoid
/// cancellation for large `alpha`.
pub fn rate_equal_weights(breadth: u32, alpha: f64) -> Result<f64> {
    validate_params(breadth, alpha, alpha)?;
    let m = breadth as f64;
    let s = m + 2.0 * alpha + 1.0;
    let sq = scalar::sqrt(s * s - 4.0 * alpha);
    Ok(2.0 * alpha / ((m + alpha) * (s + sq)))
}

/// The equal-weights coupling that maximizes the autonomous rate:
/// `alpha* = (M + (M-1) sqrt(M (2M+1))) / (2M - 1)`. Grows like
/// `(sqrt(2)/2) M` for large `M`.
pub fn optimal_alpha_equal(breadth: u32) -> Result<f64> {
    if breadth < 2 {
        return Err(Error::Invalid("breadth must be at least 2"));
    }
    let m = breadth as f64;
    Ok((m + (m - 1.0) * scalar::sqrt(m * (2.0 * m + 1.0))) / (2.0 * m - 1.0))
}

/// First-order sensitivity of the dominant eigenvalue to an input of
/// intensity `gamma` at the first bottom member (flat index `M + 2`):
/// the dominant eigenvalue drops by `c gamma + o(gamma)` with
/// `c = beta (M+beta) / ((beta M + alpha)(M^2 + M beta + M + alpha))`.
/// Equals that node's stationary weight.
pub fn perturbation_coefficient(breadth: u32, alpha: f64, beta: f64) -> Result<f64> {
    validate_params(breadth, alpha, beta)?;
    let m = breadth as f64;
    Ok(beta * (m + beta) / ((beta * m + alpha) * (m * m + m * beta + m + alpha)))
}

fn root_for_branch(roots: &CubicRoots, branch: CubicBranch) -> f64 {
    match branch {
        CubicBranch::B => roots.k_b,
        CubicBranch::C => roots.k_c,
        CubicBranch::D => roots.k_d,
    }
}

/// Eigenvector family for the cubic-root eigenvalues, parameterized by a
/// nonzero seed `y` of length `M - 1`. Layout: top unit `(y, -sum y, 0)`;
/// bottom unit `u <= M-1` gets `(K y_u, ..., K y_u, H y_u)`; the last
/// bottom unit gets the same pattern with `-sum y` in place of `y_u`.
/// `H = K (M+beta) / (K beta - 1)`.
pub fn eigvec_vhat(config: &HierarchyConfig, branch: CubicBranch, y: &[f64]) -> Result<DVector<f64>> {
    require_two_layers(config)?;
    let m = config.breadth as usize;
    if y.len() != m - 1 {
        return Err(Error::DimensionMismatch { expected: m - 1, got: y.len() });
    }
    if y.iter().any(|v| !v.is_finite()) {
        return Err(Error::Invalid("seed entries must be finite"));
    }
    if y.iter().all(|v| *v == 0.0) {
        return Err(Error::Invalid("seed vector must be nonzero"));
    }
    let mf = m as f64;
    let beta = config.beta;
    let k = root_for_branch(&cubic_k_roots(config.breadth, config.alpha, beta)?, branch);
    let h = k * (mf + beta) / (k * beta - 1.0);
    let y_sum: f64 = y.iter().sum();

    let n = (m + 1) * (m + 1);
    let mut v = DVector::zeros(n);
    for (p, val) in y.iter().enumerate() {
        v[p] = *val;
    }
    v[m - 1] = -y_sum;
    // v[m] (top leader) stays zero.
    for unit in 1..=m {
        let seed = if unit < m { y[unit - 1] } else { -y_sum };
        let base = (m + 1) * unit;
        for p in 0..m {
            v[base + p] = k * seed;
        }
        v[base + m] = h * seed;
    }
    Ok(v)
}

/// Eigenvectors for the bottom-disagreement eigenvalue
/// `lambda_E = (beta - 1)/(M + beta)`: differences between the first
/// member and member `j` of bottom unit `i`. The `M (M-1)` choices span
/// the full eigenspace.
pub fn eigvec_vcheck(config: &HierarchyConfig, i: u32, j: u32) -> Result<DVector<f64>> {
    require_two_layers(config)?;
    let m = config.breadth as usize;
    if i < 1 || i as usize > m || j < 2 || j as usize > m {
        return Err(Error::InvalidCoordinate);
    }
    let n = (m + 1) * (m + 1);
    let mut v = DVector::zeros(n);
    v[(m + 1) * i as usize] = 1.0;
    v[(m + 1) * i as usize + j as usize - 1] = -1.0;
    Ok(v)
}

/// Eigenvectors for the three simple eigenvalues. All three share the
/// bottom-block pattern `(1, ..., 1, K)`; they differ in the top block and
/// in how `K` relates to the eigenvalue:
///
/// - `F`: top block `(K, ..., K, K^2)` with `K = (M+beta)(lambda_F - 1) + 1`.
/// - `G`, `H`: top block `(a, ..., a, b)` with
///   `K = lambda (M+beta) - (M+beta-1)`, `a = -beta (M - K alpha) / (alpha (K + beta))`,
///   `b = -M beta / alpha`.
pub fn eigvec_vbar_vtilde(config: &HierarchyConfig, which: SimpleFamily) -> Result<DVector<f64>> {
    require_two_layers(config)?;
    let m = config.breadth as usize;
    let mf = m as f64;
    let (alpha, beta) = (config.alpha, config.beta);
    let spectrum = analytic_spectrum_l2(config)?;

    let (top_member, top_leader, k) = match which {
        SimpleFamily::F => {
            let k = (mf + beta) * (spectrum.lambda_f - 1.0) + 1.0;
            (k, k * k, k)
        }
        SimpleFamily::G | SimpleFamily::H => {
            let lambda = if which == SimpleFamily::G { spectrum.lambda_g } else { spectrum.lambda_h };
            let k = lambda * (mf + beta) - (mf + beta - 1.0);
            if (k + beta).abs() < 1e-300 {
                return Err(Error::NoConvergence);
            }
            let a = -beta * (mf - k * alpha) / (alpha * (k + beta));
            let b = -mf * beta / alpha;
            (a, b, k)
        }
    };

    let n = (m + 1) * (m + 1);
    let mut v = DVector::zeros(n);
    for p in 0..m {
        v[p] = top_member;
    }
    v[m] = top_leader;
    for unit in 1..=m {
        let base = (m + 1) * unit;
        for p in 0..m {
            v[base + p] = 1.0;
        }
        v[base + m] = k;
    }
    Ok(v)
}

/// Convenience: the residual-checked eigenvalue a constructed family
/// belongs to.
pub fn family_eigenvalue(spectrum: &SpectrumL2, which: SimpleFamily) -> f64 {
    match which {
        SimpleFamily::F => spectrum.lambda_f,
        SimpleFamily::G => spectrum.lambda_g,
        SimpleFamily::H => spectrum.lambda_h,
    }
}
