//! Text renderings of the core result types.
//!
//! CSV cells use `{:.16e}` (17 significant digits, enough to round-trip
//! an f64); JSON numbers rely on the serializer's shortest-round-trip
//! encoding. Both are deterministic: the same value always prints the
//! same bytes. Lines end with `\n` and every rendering ends with one.

use hiercon_core::closedform::SpectrumL2;
use hiercon_core::dynamics::Trajectory;
use hiercon_core::hierarchy::WeightMatrix;
use hiercon_core::spectral::NumericSpectrum;
use hiercon_core::sweep::{SweepKind, SweepResult, TradeoffReport};
use serde::Serialize;

pub(crate) fn machine(x: f64) -> String {
    format!("{x:.16e}")
}

fn join_machine(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(machine).collect::<Vec<_>>().join(",")
}

fn to_json_line<T: Serialize>(value: &T) -> String {
    let mut text = serde_json::to_string(value).expect("output types serialize");
    text.push('\n');
    text
}

pub(crate) fn matrix_csv(w: &WeightMatrix) -> String {
    let mut text = String::new();
    for i in 0..w.n() {
        text.push_str(&join_machine((0..w.n()).map(|j| w.entries()[(i, j)])));
        text.push('\n');
    }
    text
}

#[derive(Serialize)]
struct MatrixJson {
    n: usize,
    layers: u32,
    breadth: u32,
    alpha: f64,
    beta: f64,
    rows: Vec<Vec<f64>>,
}

pub(crate) fn matrix_json(w: &WeightMatrix) -> String {
    let c = w.config();
    let rows = (0..w.n())
        .map(|i| (0..w.n()).map(|j| w.entries()[(i, j)]).collect())
        .collect();
    to_json_line(&MatrixJson {
        n: w.n(),
        layers: c.layers,
        breadth: c.breadth,
        alpha: c.alpha,
        beta: c.beta,
        rows,
    })
}

pub(crate) fn trajectory_csv(traj: &Trajectory) -> String {
    let n = traj.states.first().map_or(0, |x| x.len());
    let mut text = String::from("t");
    for k in 1..=n {
        text.push_str(&format!(",x{k}"));
    }
    text.push('\n');
    for (t, x) in traj.times.iter().zip(&traj.states) {
        text.push_str(&machine(*t));
        for v in x.iter() {
            text.push(',');
            text.push_str(&machine(*v));
        }
        text.push('\n');
    }
    text
}

#[derive(Serialize)]
struct ComplexJson {
    re: f64,
    im: f64,
}

#[derive(Serialize)]
struct NumericSpectrumJson {
    n: usize,
    eigenvalues: Vec<ComplexJson>,
}

pub(crate) fn numeric_spectrum_json(spectrum: &NumericSpectrum) -> String {
    let eigenvalues = spectrum
        .eigenvalues
        .iter()
        .map(|e| ComplexJson { re: e.re, im: e.im })
        .collect();
    to_json_line(&NumericSpectrumJson { n: spectrum.n, eigenvalues })
}

#[derive(Serialize)]
struct MultiplicityJson {
    lambda_a: usize,
    lambda_b: usize,
    lambda_c: usize,
    lambda_d: usize,
    lambda_e: usize,
    lambda_f: usize,
    lambda_g: usize,
    lambda_h: usize,
}

#[derive(Serialize)]
struct AnalyticSpectrumJson {
    layers: u32,
    breadth: u32,
    alpha: f64,
    beta: f64,
    lambda_a: f64,
    lambda_b: f64,
    lambda_c: f64,
    lambda_d: f64,
    lambda_e: f64,
    lambda_f: f64,
    lambda_g: f64,
    lambda_h: f64,
    multiplicities: MultiplicityJson,
    k_b: f64,
    k_c: f64,
    k_d: f64,
}

pub(crate) fn analytic_spectrum_json(s: &SpectrumL2) -> String {
    let m = s.config.breadth as usize;
    to_json_line(&AnalyticSpectrumJson {
        layers: s.config.layers,
        breadth: s.config.breadth,
        alpha: s.config.alpha,
        beta: s.config.beta,
        lambda_a: s.lambda_a,
        lambda_b: s.lambda_b,
        lambda_c: s.lambda_c,
        lambda_d: s.lambda_d,
        lambda_e: s.lambda_e,
        lambda_f: s.lambda_f,
        lambda_g: s.lambda_g,
        lambda_h: s.lambda_h,
        multiplicities: MultiplicityJson {
            lambda_a: 1,
            lambda_b: m - 1,
            lambda_c: m - 1,
            lambda_d: m - 1,
            lambda_e: m * (m - 1),
            lambda_f: 1,
            lambda_g: 1,
            lambda_h: 1,
        },
        k_b: s.roots.k_b,
        k_c: s.roots.k_c,
        k_d: s.roots.k_d,
    })
}

/// Grid values as a table: the header row carries the alpha axis, the
/// first column the beta axis, hence the `beta\alpha` corner label.
pub(crate) fn sweep_csv(result: &SweepResult) -> String {
    let mut text = String::from("beta\\alpha,");
    text.push_str(&join_machine(result.grid.alpha_values.iter().copied()));
    text.push('\n');
    for (row, beta) in result.values.iter().zip(&result.grid.beta_values) {
        text.push_str(&machine(*beta));
        text.push(',');
        text.push_str(&join_machine(row.iter().copied()));
        text.push('\n');
    }
    text
}

#[derive(Serialize)]
struct SweepJson<'a> {
    kind: &'static str,
    layers: u32,
    breadth: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    input_node: Option<usize>,
    alpha: &'a [f64],
    beta: &'a [f64],
    values: &'a [Vec<f64>],
}

pub(crate) fn sweep_json(result: &SweepResult) -> String {
    let with_input = result.kind == SweepKind::InputRate;
    to_json_line(&SweepJson {
        kind: result.kind.name(),
        layers: result.grid.layers,
        breadth: result.grid.breadth,
        gamma: with_input.then_some(result.grid.gamma),
        input_node: with_input.then_some(result.grid.input_node),
        alpha: &result.grid.alpha_values,
        beta: &result.grid.beta_values,
        values: &result.values,
    })
}

pub(crate) fn tradeoff_csv(report: &TradeoffReport) -> String {
    let mut text = String::from("alpha,autonomous_rate,input_rate,autonomous_argmax,input_argmax\n");
    for (k, row) in report.rows.iter().enumerate() {
        text.push_str(&format!(
            "{},{},{},{},{}\n",
            machine(row.alpha),
            machine(row.autonomous_rate),
            machine(row.input_rate),
            u8::from(k == report.argmax_autonomous),
            u8::from(k == report.argmax_input),
        ));
    }
    text
}

#[derive(Serialize)]
struct TradeoffRowJson {
    alpha: f64,
    autonomous_rate: f64,
    input_rate: f64,
}

#[derive(Serialize)]
struct TradeoffJson {
    breadth: u32,
    beta: f64,
    gamma: f64,
    argmax_autonomous: usize,
    argmax_input: usize,
    rows: Vec<TradeoffRowJson>,
}

pub(crate) fn tradeoff_json(report: &TradeoffReport) -> String {
    let rows = report
        .rows
        .iter()
        .map(|r| TradeoffRowJson {
            alpha: r.alpha,
            autonomous_rate: r.autonomous_rate,
            input_rate: r.input_rate,
        })
        .collect();
    to_json_line(&TradeoffJson {
        breadth: report.breadth,
        beta: report.beta,
        gamma: report.gamma,
        argmax_autonomous: report.argmax_autonomous,
        argmax_input: report.argmax_input,
        rows,
    })
}

pub(crate) fn rate_csv(rate: f64, method: &str) -> String {
    format!("rate,method\n{},{method}\n", machine(rate))
}

#[derive(Serialize)]
pub(crate) struct RateJson {
    pub rate: f64,
    pub method: &'static str,
    pub layers: u32,
    pub breadth: u32,
    pub alpha: f64,
    pub beta: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub gamma: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub input_node: Option<usize>,
}

pub(crate) fn rate_json(fields: &RateJson) -> String {
    to_json_line(fields)
}

#[cfg(test)]
mod tests {
    use super::*;
    use hiercon_core::hierarchy::{build_weight_matrix, HierarchyConfig};
    use hiercon_core::sweep::{sweep_autonomous_rate, GridSpec};

    fn small_matrix() -> WeightMatrix {
        let config = HierarchyConfig::new(2, 2, 1.0, 1.0).unwrap();
        build_weight_matrix(&config).unwrap()
    }

    #[test]
    fn machine_format_round_trips() {
        for x in [0.25, 1.0 / 3.0, 6.02e23, -1.0, 0.0] {
            assert_eq!(machine(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(machine(0.25), "2.5000000000000000e-1");
    }

    #[test]
    fn matrix_csv_shape() {
        let text = matrix_csv(&small_matrix());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 9);
        assert!(lines.iter().all(|l| l.split(',').count() == 9));
        let row: Vec<f64> =
            lines[0].split(',').map(|cell| cell.parse().unwrap()).collect();
        // A top-unit member: no self-loop, 1/(M+beta) to its unit.
        assert_eq!(row[0], 0.0);
        assert!((row[1] - 1.0 / 3.0).abs() < 1e-16);
        assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn matrix_json_fields() {
        let value: serde_json::Value =
            serde_json::from_str(&matrix_json(&small_matrix())).unwrap();
        assert_eq!(value["n"], 9);
        assert_eq!(value["breadth"], 2);
        assert_eq!(value["rows"].as_array().unwrap().len(), 9);
    }

    #[test]
    fn trajectory_csv_header_and_rows() {
        let traj = Trajectory {
            times: vec![0.0, 0.1],
            states: vec![
                nalgebra::DVector::from_vec(vec![1.0, 2.0]),
                nalgebra::DVector::from_vec(vec![0.5, 1.5]),
            ],
        };
        let text = trajectory_csv(&traj);
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,x1,x2");
        assert_eq!(lines.len(), 3);
        assert!(lines[2].starts_with(&machine(0.1)));
    }

    #[test]
    fn sweep_csv_axes_in_header_and_first_column() {
        let grid = GridSpec::new(2, 3, vec![0.5, 2.0], vec![1.0]).unwrap();
        let text = sweep_csv(&sweep_autonomous_rate(&grid).unwrap());
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines.len(), 2);
        assert!(lines[0].starts_with("beta\\alpha,"));
        assert!(lines[0].contains(&machine(2.0)));
        assert!(lines[1].starts_with(&machine(1.0)));
        assert_eq!(lines[1].split(',').count(), 3);
    }

    #[test]
    fn sweep_json_has_axes_and_kind() {
        let grid = GridSpec::new(2, 3, vec![0.5, 2.0], vec![1.0]).unwrap();
        let value: serde_json::Value =
            serde_json::from_str(&sweep_json(&sweep_autonomous_rate(&grid).unwrap())).unwrap();
        assert_eq!(value["kind"], "autonomous_rate");
        assert_eq!(value["alpha"].as_array().unwrap().len(), 2);
        assert_eq!(value["values"][0].as_array().unwrap().len(), 2);
        assert!(value.get("gamma").is_none());
    }

    #[test]
    fn rate_renderings() {
        assert_eq!(rate_csv(0.25, "analytic"), "rate,method\n2.5000000000000000e-1,analytic\n");
        let fields = RateJson {
            rate: 0.25,
            method: "numeric",
            layers: 2,
            breadth: 3,
            alpha: 1.0,
            beta: 1.0,
            gamma: None,
            input_node: None,
        };
        let value: serde_json::Value = serde_json::from_str(&rate_json(&fields)).unwrap();
        assert_eq!(value["rate"], 0.25);
        assert_eq!(value["method"], "numeric");
        assert!(value.get("gamma").is_none());
    }
}
