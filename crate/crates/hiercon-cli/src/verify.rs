//! The `verify` subcommand: re-checks the structural and spectral
//! invariants of one configuration, printing one PASS/FAIL line per check.
//!
//! Checks that apply at any depth: row sums, entry range, the index
//! bijection, symmetry exactly at `alpha = beta`, and the dominant
//! eigenvalue. Two-layer configurations additionally get every closed
//! form checked against its numeric counterpart. All tolerances scale
//! with `--tolerance-scale`.

use std::fmt::Write as _;

use hiercon_core::closedform::{
    analytic_spectrum_l2, cubic_k_roots, eigvec_vbar_vtilde, eigvec_vcheck, eigvec_vhat,
    left_perron_l2, perturbation_coefficient, rate_autonomous_l2, rate_equal_weights, CubicBranch,
    SimpleFamily, SpectrumL2,
};
use hiercon_core::hierarchy::{
    build_weight_matrix, build_weight_matrix_blockform, coord_to_index, index_to_coord,
    HierarchyConfig, WeightMatrix,
};
use hiercon_core::spectral::{match_spectra, numeric_spectrum, rate_autonomous, NumericSpectrum};
use hiercon_core::sweep::{classify_lambda_region, GridSpec, REGION_B, REGION_G};
use nalgebra::{DMatrix, DVector};

use crate::args::VerifyArgs;
use crate::commands::emit;
use crate::CliError;

type Check = Result<(), String>;

struct Report {
    text: String,
    total: usize,
    failed: usize,
}

impl Report {
    fn new(config: &HierarchyConfig, n: usize) -> Self {
        let mut text = String::new();
        writeln!(
            text,
            "configuration layers={} breadth={} alpha={} beta={} nodes={n}",
            config.layers, config.breadth, config.alpha, config.beta
        )
        .expect("writing to a string");
        Report { text, total: 0, failed: 0 }
    }

    fn check(&mut self, name: &str, outcome: Check) {
        self.total += 1;
        match outcome {
            Ok(()) => writeln!(self.text, "PASS {name}"),
            Err(detail) => {
                self.failed += 1;
                writeln!(self.text, "FAIL {name}: {detail}")
            }
        }
        .expect("writing to a string");
    }

    fn finish(&mut self) {
        if self.failed == 0 {
            writeln!(self.text, "{} checks passed", self.total).expect("writing to a string");
        } else {
            writeln!(self.text, "{} of {} checks failed", self.failed, self.total)
                .expect("writing to a string");
        }
    }
}

pub(crate) fn run(args: VerifyArgs) -> Result<(), CliError> {
    let scale = args.tolerance_scale;
    if !(scale.is_finite() && scale > 0.0) {
        return Err(CliError::Usage("--tolerance-scale must be positive and finite".into()));
    }
    let config =
        HierarchyConfig::new(args.net.layers, args.net.breadth, args.net.alpha, args.net.beta)?;
    let w = build_weight_matrix(&config)?;
    let numeric = numeric_spectrum(w.entries())?;

    let mut report = Report::new(&config, w.n());
    report.check("row-stochastic", row_stochastic(&w, scale));
    report.check("entry-range", entry_range(&w));
    report.check("index-round-trip", index_round_trip(&config, w.n()));
    report.check("symmetry", symmetry(&w, scale));
    report.check("dominant-eigenvalue", dominant_eigenvalue(&numeric, scale));

    if config.layers == 2 {
        let spectrum = analytic_spectrum_l2(&config)?;
        report.check("block-assembly", block_assembly(&config, &w));
        report.check("cubic-roots", cubic_roots(&config, scale));
        report.check("spectrum-match", spectrum_match(&spectrum, &numeric, scale));
        report.check("eigenvalue-order", eigenvalue_order(&spectrum, &config));
        report.check("stationary-vector", stationary_vector(&config, &w, scale));
        report.check("input-sensitivity", input_sensitivity(&config, scale));
        report.check("rate-consistency", rate_consistency(&config, &w, scale));
        report.check("region-consistency", region_consistency(&config, &spectrum, scale));
        report.check("eigenvector-families", eigenvector_families(&config, &w, &spectrum, scale));
    }
    report.finish();

    emit(args.out.as_deref(), &report.text)?;
    if report.failed > 0 {
        Err(CliError::VerificationFailed { failed: report.failed, total: report.total })
    } else {
        Ok(())
    }
}

fn row_stochastic(w: &WeightMatrix, scale: f64) -> Check {
    let mut worst = 0.0f64;
    for i in 0..w.n() {
        let sum: f64 = (0..w.n()).map(|j| w.entries()[(i, j)]).sum();
        worst = worst.max((sum - 1.0).abs());
    }
    if worst <= 1e-12 * scale {
        Ok(())
    } else {
        Err(format!("max row-sum deviation {worst:.3e}"))
    }
}

fn entry_range(w: &WeightMatrix) -> Check {
    match w.entries().iter().find(|x| !(0.0..=1.0).contains(*x)) {
        None => Ok(()),
        Some(x) => Err(format!("entry {x} outside [0, 1]")),
    }
}

fn index_round_trip(config: &HierarchyConfig, n: usize) -> Check {
    for i in 1..=n {
        let coord = index_to_coord(i, config).map_err(|e| format!("index {i}: {e}"))?;
        let back = coord_to_index(coord, config).map_err(|e| format!("index {i}: {e}"))?;
        if back != i {
            return Err(format!("index {i} maps to {back} after a round trip"));
        }
    }
    if index_to_coord(0, config).is_ok() || index_to_coord(n + 1, config).is_ok() {
        return Err("out-of-range indices were accepted".into());
    }
    Ok(())
}

fn symmetry(w: &WeightMatrix, scale: f64) -> Check {
    let mut dev = 0.0f64;
    for i in 0..w.n() {
        for j in (i + 1)..w.n() {
            dev = dev.max((w.entries()[(i, j)] - w.entries()[(j, i)]).abs());
        }
    }
    let tol = 1e-15 * scale;
    let equal_weights = w.config().alpha == w.config().beta;
    match (equal_weights, dev <= tol) {
        (true, false) => Err(format!("equal weights but asymmetry {dev:.3e}")),
        (false, true) => Err("unequal weights but the matrix is symmetric".into()),
        _ => Ok(()),
    }
}

fn dominant_eigenvalue(numeric: &NumericSpectrum, scale: f64) -> Check {
    let top = numeric.eigenvalues[0];
    let dev = (top.re - 1.0).abs().max(top.im.abs());
    if dev <= 1e-10 * scale {
        Ok(())
    } else {
        Err(format!("largest eigenvalue off by {dev:.3e}"))
    }
}

fn block_assembly(config: &HierarchyConfig, w: &WeightMatrix) -> Check {
    let block = build_weight_matrix_blockform(config).map_err(|e| e.to_string())?;
    if block.entries() == w.entries() {
        Ok(())
    } else {
        Err("block assembly differs from the per-node construction".into())
    }
}

fn cubic_roots(config: &HierarchyConfig, scale: f64) -> Check {
    let roots = cubic_k_roots(config.breadth, config.alpha, config.beta)
        .map_err(|e| e.to_string())?;
    let (m, a, b) = (f64::from(config.breadth), config.alpha, config.beta);
    let c3 = m * b * b;
    let c2 = b * (a * b - 2.0 * m - (m + a) * (m + b - 1.0)) / c3;
    let c1 = -a * (2.0 * b + 1.0) / c3;
    let c0 = a / c3;
    for k in [roots.k_b, roots.k_c, roots.k_d] {
        let value = ((k + c2) * k + c1) * k + c0;
        // Backward-error scaling: |p(k)| relative to the magnitudes of
        // the monic terms, so large roots are not penalized for the
        // k^3 amplification of their last-bit rounding.
        let terms = k.abs().powi(3) + (c2 * k * k).abs() + (c1 * k).abs() + c0.abs();
        let residual = value.abs() / terms.max(1.0);
        if residual > 1e-9 * scale {
            return Err(format!("residual {residual:.3e} at root {k}"));
        }
    }
    let inv_b = 1.0 / b;
    if !(roots.k_b > inv_b && roots.k_c > 0.0 && roots.k_c < inv_b && roots.k_d < 0.0) {
        return Err(format!(
            "root signs violated: {} / {} / {} against 1/beta = {inv_b}",
            roots.k_b, roots.k_c, roots.k_d
        ));
    }
    Ok(())
}

fn spectrum_match(spectrum: &SpectrumL2, numeric: &NumericSpectrum, scale: f64) -> Check {
    if spectrum.total_multiplicity() != numeric.n {
        return Err(format!(
            "closed-form multiplicities sum to {}, matrix has {} eigenvalues",
            spectrum.total_multiplicity(),
            numeric.n
        ));
    }
    let dev = match_spectra(&spectrum.multiset(), &numeric.eigenvalues)
        .map_err(|e| e.to_string())?;
    if dev <= 1e-7 * scale {
        Ok(())
    } else {
        Err(format!("worst eigenvalue distance {dev:.3e}"))
    }
}

fn eigenvalue_order(s: &SpectrumL2, config: &HierarchyConfig) -> Check {
    if s.lambda_a != 1.0 {
        return Err(format!("leading eigenvalue {} instead of 1", s.lambda_a));
    }
    let rest = [s.lambda_b, s.lambda_c, s.lambda_d, s.lambda_e, s.lambda_f, s.lambda_g, s.lambda_h];
    if let Some(l) = rest.iter().find(|l| **l >= 1.0) {
        return Err(format!("non-dominant eigenvalue {l} not below 1"));
    }
    let ordered = s.lambda_b > s.lambda_d
        && s.lambda_d > s.lambda_c
        && s.lambda_b > s.lambda_e
        && s.lambda_b > s.lambda_f
        && s.lambda_g > s.lambda_h;
    if !ordered {
        return Err(format!(
            "eigenvalue order violated at alpha={} beta={}",
            config.alpha, config.beta
        ));
    }
    Ok(())
}

fn stationary_vector(config: &HierarchyConfig, w: &WeightMatrix, scale: f64) -> Check {
    let p = left_perron_l2(config).map_err(|e| e.to_string())?;
    let residual = (w.entries().transpose() * &p.pi - &p.pi).amax();
    if residual > 1e-10 * scale {
        return Err(format!("stationarity residual {residual:.3e}"));
    }
    let sum_dev = (p.pi.sum() - 1.0).abs();
    if sum_dev > 1e-12 * scale {
        return Err(format!("weights sum off by {sum_dev:.3e}"));
    }
    if p.pi.min() <= 0.0 {
        return Err("a stationary weight is not positive".into());
    }
    if config.alpha == config.beta {
        let uniform = 1.0 / p.pi.len() as f64;
        let dev = p.pi.iter().fold(0.0f64, |acc, x| acc.max((x - uniform).abs()));
        if dev > 1e-12 * scale {
            return Err(format!("equal weights but non-uniform vector, deviation {dev:.3e}"));
        }
    }
    Ok(())
}

fn input_sensitivity(config: &HierarchyConfig, scale: f64) -> Check {
    let p = left_perron_l2(config).map_err(|e| e.to_string())?;
    let c = perturbation_coefficient(config.breadth, config.alpha, config.beta)
        .map_err(|e| e.to_string())?;
    // The sensitivity coefficient is the stationary weight of the input
    // node, here the leader of the first bottom unit (flat index M + 2).
    let dev = (p.pi[config.breadth as usize + 1] - c).abs();
    if dev <= 1e-12 * scale {
        Ok(())
    } else {
        Err(format!("coefficient differs from the stationary weight by {dev:.3e}"))
    }
}

fn rate_consistency(config: &HierarchyConfig, w: &WeightMatrix, scale: f64) -> Check {
    let analytic = rate_autonomous_l2(config).map_err(|e| e.to_string())?;
    if analytic <= 0.0 {
        return Err(format!("closed-form rate {analytic} not positive"));
    }
    let numeric = rate_autonomous(w).map_err(|e| e.to_string())?;
    let dev = (analytic - numeric).abs();
    if dev > 1e-8 * scale {
        return Err(format!("closed form and numeric rate differ by {dev:.3e}"));
    }
    if config.alpha == config.beta {
        let specialized =
            rate_equal_weights(config.breadth, config.alpha).map_err(|e| e.to_string())?;
        let dev = (specialized - analytic).abs();
        if dev > 1e-10 * scale {
            return Err(format!("equal-weight rate form differs by {dev:.3e}"));
        }
    }
    Ok(())
}

fn region_consistency(config: &HierarchyConfig, s: &SpectrumL2, scale: f64) -> Check {
    let grid = GridSpec::new(2, config.breadth, vec![config.alpha], vec![config.beta])
        .map_err(|e| e.to_string())?;
    let code = classify_lambda_region(&grid).map_err(|e| e.to_string())?.values[0][0];
    let rate = rate_autonomous_l2(config).map_err(|e| e.to_string())?;
    let binding = if code == REGION_B {
        s.lambda_b
    } else if code == REGION_G {
        s.lambda_g
    } else {
        s.lambda_b.max(s.lambda_g)
    };
    let dev = (rate - (1.0 - binding)).abs();
    if dev <= 1e-12 * scale {
        Ok(())
    } else {
        Err(format!("rate disagrees with the classified eigenvalue by {dev:.3e}"))
    }
}

fn eigenvector_families(
    config: &HierarchyConfig,
    w: &WeightMatrix,
    s: &SpectrumL2,
    scale: f64,
) -> Check {
    let m = config.breadth as usize;
    let mut vectors: Vec<(DVector<f64>, f64)> =
        vec![(DVector::repeat(w.n(), 1.0), s.lambda_a)];
    for (branch, lambda) in [
        (CubicBranch::B, s.lambda_b),
        (CubicBranch::C, s.lambda_c),
        (CubicBranch::D, s.lambda_d),
    ] {
        for k in 0..m - 1 {
            let mut y = vec![0.0; m - 1];
            y[k] = 1.0;
            let v = eigvec_vhat(config, branch, &y).map_err(|e| e.to_string())?;
            vectors.push((v, lambda));
        }
    }
    for i in 1..=m as u32 {
        for j in 2..=m as u32 {
            let v = eigvec_vcheck(config, i, j).map_err(|e| e.to_string())?;
            vectors.push((v, s.lambda_e));
        }
    }
    for (family, lambda) in [
        (SimpleFamily::F, s.lambda_f),
        (SimpleFamily::G, s.lambda_g),
        (SimpleFamily::H, s.lambda_h),
    ] {
        let v = eigvec_vbar_vtilde(config, family).map_err(|e| e.to_string())?;
        vectors.push((v, lambda));
    }

    let full = (m + 1) * (m + 1);
    if vectors.len() != full {
        return Err(format!("built {} eigenvectors, expected {full}", vectors.len()));
    }
    let mut worst = 0.0f64;
    for (v, lambda) in &vectors {
        let residual = (w.entries() * v - v * *lambda).amax() / v.amax();
        worst = worst.max(residual);
    }
    if worst > 1e-8 * scale {
        return Err(format!("worst relative eigen-residual {worst:.3e}"));
    }
    let columns: Vec<DVector<f64>> = vectors.iter().map(|(v, _)| v / v.amax()).collect();
    let rank = DMatrix::from_columns(&columns).rank(1e-10);
    if rank != full {
        return Err(format!("families span rank {rank}, expected {full}"));
    }
    Ok(())
}
