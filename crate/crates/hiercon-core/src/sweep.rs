//! Parameter-grid evaluation over the coupling weights: rate heatmap data,
//! the map of which eigenvalue binds the autonomous rate, and the
//! coordination-versus-information tradeoff table.

use alloc::vec::Vec;

use crate::closedform::{analytic_spectrum_l2, rate_autonomous_l2};
use crate::dynamics::InputSpec;
use crate::hierarchy::{build_weight_matrix, node_count, HierarchyConfig};
use crate::spectral::{rate_autonomous, rate_with_input};
use crate::{Error, Result};

/// Ties between the two candidate eigenvalues closer than this are
/// reported as [`REGION_TIE`].
pub const TIE_THRESHOLD: f64 = 1e-12;

/// Region codes: the multiplicity-(M-1) eigenvalue binds (`B`), the simple
/// top-block eigenvalue binds (`G`), or the two tie.
pub const REGION_B: f64 = -1.0;
pub const REGION_G: f64 = 1.0;
pub const REGION_TIE: f64 = 0.0;

/// A rectangular grid in the two coupling weights at fixed shape.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    /// Ascending positive coupling weights for the layer above.
    pub alpha_values: Vec<f64>,
    /// Ascending positive coupling weights for the layer below.
    pub beta_values: Vec<f64>,
    pub layers: u32,
    pub breadth: u32,
    /// Input intensity; zero for autonomous sweeps.
    pub gamma: f64,
    /// 1-based flat index of the input node.
    pub input_node: usize,
}

impl GridSpec {
    /// Grid with no input; the input node defaults to the first bottom
    /// member, flat index `M + 2` in a two-layer network.
    pub fn new(
        layers: u32,
        breadth: u32,
        alpha_values: Vec<f64>,
        beta_values: Vec<f64>,
    ) -> Result<Self> {
        let spec = Self {
            alpha_values,
            beta_values,
            layers,
            breadth,
            gamma: 0.0,
            input_node: breadth as usize + 2,
        };
        spec.validate()?;
        Ok(spec)
    }

    pub fn with_input(mut self, gamma: f64, input_node: usize) -> Result<Self> {
        self.gamma = gamma;
        self.input_node = input_node;
        self.validate()?;
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        for axis in [&self.alpha_values, &self.beta_values] {
            if axis.is_empty() {
                return Err(Error::Invalid("empty parameter grid"));
            }
            if axis.iter().any(|v| !(v.is_finite() && *v > 0.0)) {
                return Err(Error::Invalid("grid values must be positive and finite"));
            }
            if axis.windows(2).any(|p| p[0] >= p[1]) {
                return Err(Error::Invalid("grid values must be strictly ascending"));
            }
        }
        if !(self.gamma.is_finite() && self.gamma >= 0.0) {
            return Err(Error::Invalid("gamma must be nonnegative and finite"));
        }
        // Shape checks reuse the config validation with placeholder weights.
        let probe = HierarchyConfig {
            layers: self.layers,
            breadth: self.breadth,
            alpha: 1.0,
            beta: 1.0,
        };
        let n = node_count(&probe)?;
        if self.input_node < 1 || self.input_node > n {
            return Err(Error::InvalidIndex);
        }
        Ok(())
    }

    fn config_at(&self, alpha: f64, beta: f64) -> HierarchyConfig {
        HierarchyConfig { layers: self.layers, breadth: self.breadth, alpha, beta }
    }
}

/// What a sweep's value matrix contains.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepKind {
    AutonomousRate,
    InputRate,
    Region,
}

impl SweepKind {
    /// Stable machine name used in serialized output.
    pub fn name(&self) -> &'static str {
        match self {
            SweepKind::AutonomousRate => "autonomous_rate",
            SweepKind::InputRate => "input_rate",
            SweepKind::Region => "region",
        }
    }
}

/// Values evaluated over a grid, indexed `values[beta_index][alpha_index]`.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepResult {
    pub grid: GridSpec,
    pub values: Vec<Vec<f64>>,
    pub kind: SweepKind,
}

/// One row of the tradeoff table.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TradeoffRow {
    pub alpha: f64,
    pub autonomous_rate: f64,
    pub input_rate: f64,
}

/// Autonomous and input rates along an `alpha` grid at fixed `beta`, with
/// the argmax of each column flagged (first index on ties).
#[derive(Debug, Clone, PartialEq)]
pub struct TradeoffReport {
    pub rows: Vec<TradeoffRow>,
    pub argmax_autonomous: usize,
    pub argmax_input: usize,
    pub beta: f64,
    pub gamma: f64,
    pub breadth: u32,
}

/// Autonomous decay rate per grid point: closed form for two layers, the
/// numeric spectrum otherwise. Requires `gamma = 0`.
pub fn sweep_autonomous_rate(grid: &GridSpec) -> Result<SweepResult> {
    grid.validate()?;
    if grid.gamma != 0.0 {
        return Err(Error::Invalid("autonomous sweep requires gamma = 0"));
    }
    let mut values = Vec::with_capacity(grid.beta_values.len());
    for &beta in &grid.beta_values {
        let mut row = Vec::with_capacity(grid.alpha_values.len());
        for &alpha in &grid.alpha_values {
            let config = grid.config_at(alpha, beta);
            let r = if grid.layers == 2 {
                rate_autonomous_l2(&config)?
            } else {
                rate_autonomous(&build_weight_matrix(&config)?)?
            };
            row.push(r);
        }
        values.push(row);
    }
    Ok(SweepResult { grid: grid.clone(), values, kind: SweepKind::AutonomousRate })
}

/// Input-tracking decay rate per grid point, with intensity `gamma` at the
/// grid's input node. Requires `gamma > 0`.
pub fn sweep_input_rate(grid: &GridSpec) -> Result<SweepResult> {
    grid.validate()?;
    if grid.gamma <= 0.0 {
        return Err(Error::Invalid("input sweep requires gamma > 0"));
    }
    let mut values = Vec::with_capacity(grid.beta_values.len());
    for &beta in &grid.beta_values {
        let mut row = Vec::with_capacity(grid.alpha_values.len());
        for &alpha in &grid.alpha_values {
            let w = build_weight_matrix(&grid.config_at(alpha, beta))?;
            let input = InputSpec::single(w.n(), grid.input_node, grid.gamma, 0.0)?;
            row.push(rate_with_input(&w, &input)?);
        }
        values.push(row);
    }
    Ok(SweepResult { grid: grid.clone(), values, kind: SweepKind::InputRate })
}

/// Which candidate eigenvalue binds the two-layer autonomous rate at each
/// grid point: [`REGION_B`], [`REGION_G`], or [`REGION_TIE`] within
/// [`TIE_THRESHOLD`].
pub fn classify_lambda_region(grid: &GridSpec) -> Result<SweepResult> {
    grid.validate()?;
    if grid.layers != 2 {
        return Err(Error::TwoLayersOnly);
    }
    let mut values = Vec::with_capacity(grid.beta_values.len());
    for &beta in &grid.beta_values {
        let mut row = Vec::with_capacity(grid.alpha_values.len());
        for &alpha in &grid.alpha_values {
            let s = analytic_spectrum_l2(&grid.config_at(alpha, beta))?;
            let code = if s.lambda_b > s.lambda_g + TIE_THRESHOLD {
                REGION_B
            } else if s.lambda_g > s.lambda_b + TIE_THRESHOLD {
                REGION_G
            } else {
                REGION_TIE
            };
            row.push(code);
        }
        values.push(row);
    }
    Ok(SweepResult { grid: grid.clone(), values, kind: SweepKind::Region })
}

/// Tradeoff table for a two-layer network: closed-form autonomous rate and
/// numeric input rate per `alpha`, input at the first bottom member.
pub fn tradeoff_report(
    breadth: u32,
    beta: f64,
    gamma: f64,
    alpha_values: &[f64],
) -> Result<TradeoffReport> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::Invalid("gamma must be positive and finite"));
    }
    let grid = GridSpec::new(2, breadth, alpha_values.to_vec(), alloc::vec![beta])?
        .with_input(gamma, breadth as usize + 2)?;

    let mut rows = Vec::with_capacity(alpha_values.len());
    for &alpha in alpha_values {
        let config = grid.config_at(alpha, beta);
        let autonomous_rate = rate_autonomous_l2(&config)?;
        let w = build_weight_matrix(&config)?;
        let input = InputSpec::single(w.n(), grid.input_node, gamma, 0.0)?;
        let input_rate = rate_with_input(&w, &input)?;
        rows.push(TradeoffRow { alpha, autonomous_rate, input_rate });
    }
    let argmax = |pick: fn(&TradeoffRow) -> f64| {
        let mut best = 0usize;
        for (k, row) in rows.iter().enumerate() {
            if pick(row) > pick(&rows[best]) {
                best = k;
            }
        }
        best
    };
    Ok(TradeoffReport {
        argmax_autonomous: argmax(|r| r.autonomous_rate),
        argmax_input: argmax(|r| r.input_rate),
        rows,
        beta,
        gamma,
        breadth,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid(layers: u32, breadth: u32, alphas: &[f64], betas: &[f64]) -> GridSpec {
        GridSpec::new(layers, breadth, alphas.to_vec(), betas.to_vec()).unwrap()
    }

    #[test]
    fn grid_validation() {
        assert!(GridSpec::new(2, 3, alloc::vec![], alloc::vec![1.0]).is_err());
        assert!(GridSpec::new(2, 3, alloc::vec![1.0, 1.0], alloc::vec![1.0]).is_err());
        assert!(GridSpec::new(2, 3, alloc::vec![2.0, 1.0], alloc::vec![1.0]).is_err());
        assert!(GridSpec::new(2, 3, alloc::vec![-1.0, 1.0], alloc::vec![1.0]).is_err());
        assert!(grid(2, 3, &[1.0], &[1.0]).with_input(-1.0, 5).is_err());
        assert!(grid(2, 3, &[1.0], &[1.0]).with_input(1.0, 17).is_err());
    }

    #[test]
    fn autonomous_single_point() {
        let result = sweep_autonomous_rate(&grid(2, 3, &[1.0], &[1.0])).unwrap();
        assert_eq!(result.kind, SweepKind::AutonomousRate);
        assert!((result.values[0][0] - (6.0 - 32.0f64.sqrt()) / 8.0).abs() < 1e-14);
    }

    #[test]
    fn autonomous_row_monotone_in_alpha() {
        let alphas: Vec<f64> = (1..=40).map(|k| 0.25 * k as f64).collect();
        let result = sweep_autonomous_rate(&grid(2, 3, &alphas, &[1.0])).unwrap();
        for pair in result.values[0].windows(2) {
            assert!(pair[1] >= pair[0] - 1e-13);
        }
    }

    #[test]
    fn autonomous_rejects_gamma() {
        let g = grid(2, 3, &[1.0], &[1.0]).with_input(0.5, 5).unwrap();
        assert!(sweep_autonomous_rate(&g).is_err());
    }

    #[test]
    fn deep_sweep_is_qualitatively_consistent() {
        // Three layers: still monotone in alpha and decreasing in beta on a
        // small grid.
        let alphas = [0.5, 1.0, 2.0, 4.0];
        let betas = [0.5, 1.0, 2.0];
        let result = sweep_autonomous_rate(&grid(3, 3, &alphas, &betas)).unwrap();
        for row in &result.values {
            for pair in row.windows(2) {
                assert!(pair[1] >= pair[0] - 1e-10);
            }
        }
        for col in 0..alphas.len() {
            for b in 1..betas.len() {
                assert!(result.values[b][col] <= result.values[b - 1][col] + 1e-10);
            }
        }
    }

    #[test]
    fn input_sweep_small_gamma_linear_regime() {
        let g = grid(2, 3, &[1.0], &[1.0]).with_input(1e-6, 5).unwrap();
        let result = sweep_input_rate(&g).unwrap();
        let ratio = result.values[0][0] / 1e-6;
        assert!((ratio - 0.0625).abs() / 0.0625 < 1e-3);
    }

    #[test]
    fn input_sweep_requires_gamma() {
        assert!(sweep_input_rate(&grid(2, 3, &[1.0], &[1.0])).is_err());
    }

    #[test]
    fn region_known_points() {
        let result = classify_lambda_region(&grid(2, 3, &[1.0, 30.0], &[0.05, 1.0])).unwrap();
        assert_eq!(result.values[1][0], REGION_B); // alpha = 1, beta = 1
        assert_eq!(result.values[0][1], REGION_G); // alpha = 30, beta = 0.05
    }

    #[test]
    fn region_requires_two_layers() {
        assert!(classify_lambda_region(&grid(3, 3, &[1.0], &[1.0])).is_err());
    }

    #[test]
    fn region_consistent_with_rate() {
        let g = grid(2, 4, &[0.5, 3.0, 25.0], &[0.05, 0.8, 1.9]);
        let region = classify_lambda_region(&g).unwrap();
        for (bi, &beta) in g.beta_values.iter().enumerate() {
            for (ai, &alpha) in g.alpha_values.iter().enumerate() {
                let s = analytic_spectrum_l2(&g.config_at(alpha, beta)).unwrap();
                let r = rate_autonomous_l2(&g.config_at(alpha, beta)).unwrap();
                let code = region.values[bi][ai];
                if code == REGION_B {
                    assert!((r - (1.0 - s.lambda_b)).abs() < 1e-15);
                } else if code == REGION_G {
                    assert!((r - (1.0 - s.lambda_g)).abs() < 1e-15);
                }
            }
        }
    }

    #[test]
    fn tradeoff_flags_the_right_maxima() {
        let report = tradeoff_report(3, 1.0, 1.0, &[0.1, 1.0, 10.0]).unwrap();
        assert_eq!(report.rows.len(), 3);
        // Autonomous rate grows with alpha; the input rate peaks inside.
        assert_eq!(report.argmax_autonomous, 2);
        assert_eq!(report.argmax_input, 1);
        assert!(report.rows[1].input_rate > report.rows[0].input_rate);
        assert!(report.rows[1].input_rate > report.rows[2].input_rate);
    }

    #[test]
    fn tradeoff_single_point() {
        let report = tradeoffs_single();
        assert_eq!(report.rows.len(), 1);
        assert_eq!(report.argmax_autonomous, 0);
        assert_eq!(report.argmax_input, 0);
    }

    fn tradeoffs_single() -> TradeoffReport {
        tradeoff_report(2, 0.7, 0.5, &[1.3]).unwrap()
    }

    #[test]
    fn sweep_is_a_pure_map() {
        // Evaluating a sub-grid reproduces the same values bit for bit.
        let full = sweep_autonomous_rate(&grid(2, 3, &[0.5, 1.0, 2.0], &[0.5, 1.5])).unwrap();
        let part = sweep_autonomous_rate(&grid(2, 3, &[1.0], &[1.5])).unwrap();
        assert_eq!(full.values[1][1].to_bits(), part.values[0][0].to_bits());
    }
}
