use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use cqie_core::analysis::{
    coupling_to_temperature, fit_alpha, fit_effective_temperature, fit_inverse_n_model, fit_n0_model,
    locate_critical_coupling, CouplingSamples, FitResult, ScalingPoint,
};
use cqie_core::dynamics::{equilibrate, run_protocol_with, EquilibrationPlan, ShotSet, SpinConfiguration};
use cqie_core::measurement::{average_magnetization, global_fidelity, single_qubit_fidelity, target_alignment};
use cqie_core::par::{map_indexed, Execution};
use cqie_core::schedule::HamiltonianParams;
use cqie_core::seed::derive_labeled_seed;
use cqie_core::topology::Topology;
use cqie_core::units::square_lattice_critical_coupling;

use crate::config::{ExperimentConfig, Resolved};
use crate::error::{CliError, Result};
use crate::output::Staged;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Stat {
    pub value: f64,
    pub stderr: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MagnetizationStat {
    pub mean: f64,
    pub std: f64,
    pub stderr: f64,
}

/// Contents of `summary.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Summary {
    pub n_qubits: usize,
    pub shots: usize,
    pub master_seed: u64,
    pub engine: String,
    pub trotter_slices: Option<usize>,
    pub topology_kind: String,
    pub connectivity: f64,
    pub global_fidelity: Stat,
    pub single_qubit_fidelity: Stat,
    /// Per-shot magnetization projected on the all-|0⟩ target (+1 = reset).
    pub magnetization: MagnetizationStat,
    /// Per-shot `Σσᶻ/N` in the raw spin convention.
    pub spin_magnetization: MagnetizationStat,
}

fn mag_stat(mean: f64, std: f64, shots: usize) -> MagnetizationStat {
    MagnetizationStat { mean, std, stderr: std / (shots as f64).sqrt() }
}

pub fn summarize(shots: &ShotSet, topo: &Topology) -> Result<Summary> {
    let target = SpinConfiguration::all_zero(topo.n());
    let big_f = global_fidelity(shots, &target)?;
    let small_f = single_qubit_fidelity(shots, &target)?;
    let aligned = target_alignment(shots, &target)?;
    let raw = average_magnetization(shots)?;
    let meta = shots.metadata();
    Ok(Summary {
        n_qubits: topo.n(),
        shots: shots.len(),
        master_seed: meta.master_seed,
        engine: meta.engine.clone(),
        trotter_slices: meta.trotter_slices,
        topology_kind: topo.kind().as_str().to_string(),
        connectivity: topo.average_connectivity(),
        global_fidelity: Stat { value: big_f.value, stderr: big_f.stderr },
        single_qubit_fidelity: Stat { value: small_f.value, stderr: small_f.stderr },
        magnetization: mag_stat(aligned.mean, aligned.std, shots.len()),
        spin_magnetization: mag_stat(raw.mean, raw.std, shots.len()),
    })
}

pub fn execute(resolved: &Resolved, exec: Execution) -> Result<(ShotSet, Summary)> {
    let c = &resolved.config;
    let shots = run_protocol_with(
        &resolved.topology,
        &resolved.schedule,
        &resolved.scales,
        &c.bath,
        c.shots,
        c.master_seed,
        exec,
    )?;
    let summary = summarize(&shots, &resolved.topology)?;
    Ok((shots, summary))
}

fn pretty<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("serializable");
    s.push('\n');
    s
}

fn stage_run(staged: &mut Staged, dir: &Path, config: &ExperimentConfig, shots: &ShotSet, summary: &Summary) -> Result<()> {
    staged.add(dir.join("config.json"), config.to_canonical_json())?;
    staged.add(dir.join("shots.csv"), shots.to_csv())?;
    staged.add(dir.join("metadata.json"), shots.metadata_json())?;
    staged.add(dir.join("summary.json"), pretty(summary))
}

pub fn run(config: &ExperimentConfig, out: &Path, exec: Execution) -> Result<Summary> {
    let resolved = config.resolve()?;
    let (shots, summary) = execute(&resolved, exec)?;
    let mut staged = Staged::new();
    stage_run(&mut staged, out, config, &shots, &summary)?;
    staged.commit()?;
    Ok(summary)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum Axis {
    NQubits,
    HBar,
    JCoupling,
    SBar,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::NQubits => "n_qubits",
            Axis::HBar => "h_bar",
            Axis::JCoupling => "j_coupling",
            Axis::SBar => "s_bar",
        }
    }

    /// Canonical text of an axis value; also the seed label.
    pub fn format_value(self, v: f64) -> String {
        match self {
            Axis::NQubits => format!("{}", v as u64),
            _ => format!("{v}"),
        }
    }

    pub fn apply(self, base: &ExperimentConfig, v: f64) -> Result<ExperimentConfig> {
        let mut c = base.clone();
        match self {
            Axis::NQubits => {
                if v < 1.0 || v.fract() != 0.0 {
                    return Err(CliError::config(format!("n_qubits values must be positive integers, got {v}")));
                }
                c.topology = c.topology.with_size(v as usize)?;
            }
            Axis::HBar => c.schedule.h_bar = v,
            Axis::JCoupling => c.schedule.j_coupling = v,
            Axis::SBar => c.schedule.s_bar = v,
        }
        c.master_seed = derive_labeled_seed(base.master_seed, self.name(), &self.format_value(v));
        c.validate().map_err(|e| match e {
            CliError::Config(msg) => CliError::Config(format!("{} = {}: {msg}", self.name(), self.format_value(v))),
            other => other,
        })?;
        Ok(c)
    }
}

fn csv_field(s: &str) -> String {
    s.replace([',', '\n', '\r'], ";")
}

pub const SCALING_COLUMNS: [&str; 9] = ["N", "F", "F_err", "f", "f_err", "m", "m_std", "connectivity", "status"];

/// Runs one protocol per axis value. Failed points are flagged in the
/// `status` column and the sweep carries on; it only fails if every point
/// does. Returns the number of failed points.
pub fn sweep(base: &ExperimentConfig, axis: Axis, values: &[f64], out: &Path, exec: Execution) -> Result<usize> {
    if values.is_empty() {
        return Err(CliError::config("--values must list at least one value"));
    }
    let labels: Vec<String> = values.iter().map(|&v| axis.format_value(v)).collect();
    if labels.iter().collect::<BTreeSet<_>>().len() != labels.len() {
        return Err(CliError::config("--values contains duplicates"));
    }
    let configs = values.iter().map(|&v| axis.apply(base, v)).collect::<Result<Vec<_>>>()?;

    let mut staged = Staged::new();
    staged.add(out.join("config.json"), base.to_canonical_json())?;
    let mut csv = format!("{},{}\n", axis.name(), SCALING_COLUMNS.join(","));
    let mut failed = 0;
    for (config, label) in configs.iter().zip(&labels) {
        let dir = out.join("points").join(format!("{}={label}", axis.name()));
        let outcome = config.resolve().and_then(|r| {
            let (shots, summary) = execute(&r, exec)?;
            stage_run(&mut staged, &dir, config, &shots, &summary)?;
            Ok(summary)
        });
        match outcome {
            Ok(s) => writeln!(
                csv,
                "{label},{},{},{},{},{},{},{},{},ok",
                s.n_qubits,
                s.global_fidelity.value,
                s.global_fidelity.stderr,
                s.single_qubit_fidelity.value,
                s.single_qubit_fidelity.stderr,
                s.magnetization.mean,
                s.magnetization.std,
                s.connectivity
            )
            .unwrap(),
            Err(e) => {
                failed += 1;
                writeln!(csv, "{label},,,,,,,,,failed: {}", csv_field(&e.to_string())).unwrap();
            }
        }
    }
    if failed == values.len() {
        return Err(CliError::Core(cqie_core::Error::Infeasible(format!(
            "all {failed} sweep points failed"
        ))));
    }
    staged.add(out.join("scaling.csv"), csv)?;
    staged.commit()?;
    Ok(failed)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum FitModelArg {
    Alpha,
    EffectiveTemp,
    InverseN,
    N0,
}

/// A scaling-CSV row with its 1-based line number.
#[derive(Debug, Clone, Copy)]
struct Row {
    line: usize,
    n: usize,
    big_f: f64,
    big_f_err: f64,
    small_f: f64,
    small_f_err: f64,
}

fn read_scaling_csv(path: &Path) -> Result<Vec<Row>> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    let mut lines = text.lines().enumerate();
    let header: Vec<&str> = lines
        .next()
        .map(|(_, h)| h.split(',').map(str::trim).collect())
        .ok_or_else(|| CliError::config(format!("{}: empty file", path.display())))?;
    let col = |name: &str| {
        header
            .iter()
            .position(|h| *h == name)
            .ok_or_else(|| CliError::config(format!("{}: missing column {name}", path.display())))
    };
    let (ci_n, ci_f, ci_fe, ci_q, ci_qe) = (col("N")?, col("F")?, col("F_err")?, col("f")?, col("f_err")?);
    let ci_status = header.iter().position(|h| *h == "status");

    let mut rows = Vec::new();
    for (idx, line) in lines {
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split(',').map(str::trim).collect();
        let lineno = idx + 1;
        if ci_status.and_then(|c| fields.get(c)).is_some_and(|s| *s != "ok") {
            continue;
        }
        let get = |c: usize| -> Result<f64> {
            fields
                .get(c)
                .and_then(|s| s.parse::<f64>().ok())
                .ok_or_else(|| CliError::config(format!("{}: line {lineno}: bad column {}", path.display(), header[c])))
        };
        let n = get(ci_n)?;
        if n < 1.0 || n.fract() != 0.0 {
            return Err(CliError::config(format!("{}: line {lineno}: N must be a positive integer", path.display())));
        }
        rows.push(Row {
            line: lineno,
            n: n as usize,
            big_f: get(ci_f)?,
            big_f_err: get(ci_fe)?,
            small_f: get(ci_q)?,
            small_f_err: get(ci_qe)?,
        });
    }
    if rows.is_empty() {
        return Err(CliError::Degenerate(format!("{}: no usable rows", path.display())));
    }
    Ok(rows)
}

/// Reads `--alpha`: a number, or a fit JSON file holding an `alpha` param.
pub fn parse_alpha(arg: &str) -> Result<f64> {
    if let Ok(v) = arg.parse::<f64>() {
        return Ok(v);
    }
    let path = PathBuf::from(arg);
    let text = fs::read_to_string(&path).map_err(|_| {
        CliError::config(format!("--alpha {arg:?} is neither a number nor a readable fit file"))
    })?;
    let fit: FitResult = serde_json::from_str(&text)
        .map_err(|e| CliError::config(format!("{}: not a fit result: {e}", path.display())))?;
    fit.param("alpha")
        .ok_or_else(|| CliError::config(format!("{}: fit has no alpha parameter", path.display())))
}

fn log_grid(lo: usize, hi: usize, points: usize) -> Vec<usize> {
    let (a, b) = ((lo.max(1) as f64).ln(), (hi.max(lo).max(1) as f64).ln());
    let grid: BTreeSet<usize> = (0..points)
        .map(|k| (a + (b - a) * k as f64 / (points - 1) as f64).exp().round() as usize)
        .chain([lo.max(1), hi.max(1)])
        .collect();
    grid.into_iter().collect()
}

pub fn fit(csv: &Path, model: FitModelArg, delta_e: Option<f64>, alpha: Option<f64>, out: &Path) -> Result<FitResult> {
    let rows = read_scaling_csv(csv)?;
    let uses_single = model == FitModelArg::InverseN;
    let points: Vec<ScalingPoint> = rows
        .iter()
        .map(|r| {
            if uses_single {
                ScalingPoint::new(r.n, r.small_f, r.small_f_err)
            } else {
                ScalingPoint::new(r.n, r.big_f, r.big_f_err)
            }
        })
        .collect();
    if !uses_single {
        let bad: Vec<String> = rows.iter().filter(|r| r.big_f <= 0.0).map(|r| format!("line {} (N = {})", r.line, r.n)).collect();
        if !bad.is_empty() {
            return Err(CliError::Degenerate(format!(
                "zero global fidelity has no logarithm: {}",
                bad.join(", ")
            )));
        }
    }
    let result = match model {
        FitModelArg::Alpha => fit_alpha(&points),
        FitModelArg::EffectiveTemp => {
            let de = delta_e.ok_or_else(|| CliError::config("model effective_temp needs --delta-e GHZ"))?;
            fit_effective_temperature(&points, de)
        }
        FitModelArg::InverseN => fit_inverse_n_model(&points),
        FitModelArg::N0 => {
            let a = alpha.ok_or_else(|| CliError::config("model n0 needs --alpha (value or fit file)"))?;
            fit_n0_model(&points, a)
        }
    }
    .map_err(|e| match e {
        e if e.is_degenerate() => {
            let lines: Vec<String> = rows.iter().map(|r| r.line.to_string()).collect();
            CliError::Degenerate(format!("{e} (CSV data lines {})", lines.join(", ")))
        }
        other => CliError::Core(other),
    })?;

    let lo = rows.iter().map(|r| r.n).min().unwrap_or(1);
    let hi = rows.iter().map(|r| r.n).max().unwrap_or(1);
    let mut curve = String::from("N,fitted\n");
    for n in log_grid(lo, hi, 50) {
        writeln!(curve, "{n},{}", result.predict(n)?).unwrap();
    }
    let mut staged = Staged::new();
    staged.add(out.join("fit.json"), format!("{}\n", result.to_json()))?;
    staged.add(out.join("fitted_curve.csv"), curve)?;
    staged.commit()?;
    Ok(result)
}

/// Contents of `critical.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CriticalSummary {
    pub n_spins: usize,
    pub samples_per_point: usize,
    pub temperature_mk: f64,
    pub beta_per_ghz: f64,
    /// `B(1)` in GHz; the coupling energy is `(B/2)·J`.
    pub b_ghz: f64,
    pub j_c: f64,
    pub j_c_uncertainty: f64,
    /// Dimensionless `β·(B/2)·J_c`.
    pub coupling_c: f64,
    pub coupling_c_uncertainty: f64,
    pub exact_square_lattice_coupling: f64,
    /// Bath temperature implied by assuming `coupling_c` is the exact
    /// square-lattice value.
    pub temperature_estimate_mk: f64,
}

/// Samples the zero-field equilibrium at each `J` (full coupling, `s = 1`)
/// and locates the susceptibility peak.
pub fn locate_critical(config: &ExperimentConfig, j_values: &[f64], out: &Path, exec: Execution) -> Result<CriticalSummary> {
    if j_values.len() < 5 {
        return Err(CliError::config("locate-critical needs at least 5 --values"));
    }
    let resolved = config.resolve()?;
    let topo = &resolved.topology;
    let bx = resolved.scales.a(1.0)? / 2.0;
    let b = resolved.scales.b(1.0)?;
    let beta = config.bath.beta();
    let plan = EquilibrationPlan::new(config.equilibration.burn_in, config.shots, config.equilibration.thinning);

    let runs = map_indexed(j_values.len(), exec, |k| {
        let j = j_values[k];
        let seed = derive_labeled_seed(config.master_seed, "j_coupling", &format!("{j}"));
        let params = HamiltonianParams::new(bx, 0.0, b / 2.0 * j);
        equilibrate(topo, &params, config.bath.temperature_mk, config.bath.trotter_slices, plan, seed)
    });
    let curve = runs
        .into_iter()
        .zip(j_values)
        .map(|(r, &j)| {
            let shots = r?;
            let magnetizations = shots.shots().iter().map(SpinConfiguration::magnetization).collect();
            Ok(CouplingSamples { coupling: j, magnetizations })
        })
        .collect::<Result<Vec<_>>>()?;
    let point = locate_critical_coupling(&curve, topo.n())?;

    let to_k = beta * b / 2.0;
    let mut csv = String::from("j_coupling,coupling,mean_abs_m,susceptibility,binder\n");
    for r in &point.rows {
        writeln!(csv, "{},{},{},{},{}", r.coupling, to_k * r.coupling, r.mean_abs_m, r.susceptibility, r.binder).unwrap();
    }
    let summary = CriticalSummary {
        n_spins: topo.n(),
        samples_per_point: config.shots,
        temperature_mk: config.bath.temperature_mk,
        beta_per_ghz: beta,
        b_ghz: b,
        j_c: point.coupling,
        j_c_uncertainty: point.uncertainty,
        coupling_c: to_k * point.coupling,
        coupling_c_uncertainty: to_k * point.uncertainty,
        exact_square_lattice_coupling: square_lattice_critical_coupling(),
        temperature_estimate_mk: coupling_to_temperature(point.coupling, b)?,
    };
    let mut staged = Staged::new();
    staged.add(out.join("critical.csv"), csv)?;
    staged.add(out.join("critical.json"), pretty(&summary))?;
    staged.commit()?;
    Ok(summary)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TopologySummary {
    pub kind: String,
    pub n: usize,
    pub edges: usize,
    pub connectivity: f64,
    pub edges_per_node: f64,
    pub max_degree: usize,
    pub seed: u64,
    pub fingerprint: String,
}

pub fn gen_topology(config: &ExperimentConfig, out: &Path) -> Result<TopologySummary> {
    let topo = config.topology.build()?;
    let summary = TopologySummary {
        kind: topo.kind().as_str().to_string(),
        n: topo.n(),
        edges: topo.edges().len(),
        connectivity: topo.average_connectivity(),
        edges_per_node: topo.edges_per_node(),
        max_degree: topo.max_degree(),
        seed: topo.seed(),
        fingerprint: topo.fingerprint(),
    };
    let mut staged = Staged::new();
    staged.add(out.join("topology.edges"), topo.to_edge_list())?;
    staged.add(out.join("topology.json"), pretty(&summary))?;
    staged.commit()?;
    Ok(summary)
}
