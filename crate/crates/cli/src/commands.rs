use serde_json::{json, Value};

use dicke_core::ed::{self, CONVERGENCE_TOL};
use dicke_core::fluctuations::{solve_fluctuations_with, spin_fluctuations};
use dicke_core::meanfield;
use dicke_core::params::{derive, regime_classify};
use dicke_core::sweep::{self, compare_table1, linspace, SweepConfig, Table1Comparison};
use dicke_core::{CouplingOrder, DickeError, ModelParams};

use crate::args::Command;
use crate::config::RunConfig;
use crate::CliError;

/// What a subcommand produced: a sweep (with its own CSV layout) or a
/// generic JSON document, plus optional text for the terminal.
pub enum Artifact {
    Sweep(sweep::SweepResult),
    Document(Value),
}

pub struct Outcome {
    pub artifact: Artifact,
    pub summary: Option<String>,
}

fn to_value<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("result types serialize")
}

fn require_bounded(p: &ModelParams) -> Result<(), CliError> {
    if p.coupling_order == CouplingOrder::TwoPhoton && p.g >= p.omega / 2.0 {
        return Err(DickeError::Collapse {
            g: p.g,
            half_omega: p.omega / 2.0,
        }
        .into());
    }
    p.check()?;
    Ok(())
}

fn header(p: &ModelParams) -> Value {
    json!({ "params": to_value(p), "derived": to_value(&derive(p)), "regime": regime_classify(p).to_string() })
}

pub fn run(cfg: &RunConfig) -> Result<Outcome, CliError> {
    match cfg.command {
        Command::Meanfield => meanfield_cmd(cfg),
        Command::Fluctuations => fluctuations_cmd(cfg),
        Command::Sweep => sweep_cmd(cfg),
        Command::Ed => ed_cmd(cfg),
        Command::Exponents => exponents_cmd(cfg),
        Command::Collapse => collapse_cmd(cfg),
    }
}

fn meanfield_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    require_bounded(p)?;
    let mf = meanfield::minimize(p)?;
    let mut doc = header(p);
    doc["meanfield"] = to_value(&mf);
    if p.g1.is_some() {
        doc["linear_extension"] = to_value(&meanfield::solve_linear_extension(p)?);
    }
    Ok(Outcome {
        artifact: Artifact::Document(doc),
        summary: None,
    })
}

fn fluctuations_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    require_bounded(p)?;
    let mf = meanfield::minimize(p)?;
    let fl = solve_fluctuations_with(p, &cfg.fluctuations)?;
    let mut doc = header(p);
    doc["spin"] = to_value(&spin_fluctuations(p, &fl, &mf));
    doc["fluctuations"] = to_value(&fl);
    doc["meanfield"] = to_value(&mf);
    Ok(Outcome {
        artifact: Artifact::Document(doc),
        summary: None,
    })
}

fn sweep_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    p.with_g(0.0).check()?;
    let lo = cfg.g_min.unwrap_or(0.0);
    let hi = cfg.g_max.unwrap_or(0.49 * p.omega);
    if lo.is_nan() || hi.is_nan() || lo > hi || lo < 0.0 {
        return Err(CliError::Usage(format!("need 0 ≤ g-min ≤ g-max, got {lo}, {hi}")));
    }
    let grid = linspace(lo, hi, cfg.points.unwrap_or(200));
    let config = SweepConfig {
        fluctuations: cfg.fluctuations,
        ed: cfg.ed_cutoff.map(|c| (cfg.basis(c), cfg.solve_options(1))),
    };
    let result = sweep::sweep_g_checked(p, &grid, &config)?;
    Ok(Outcome {
        artifact: Artifact::Sweep(result),
        summary: None,
    })
}

fn ed_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    require_bounded(p)?;
    let opts = cfg.solve_options(6);
    let mut doc = header(p);
    let result = match cfg.cutoffs.as_slice() {
        [c] => ed::solve_lowest_with(p, &cfg.basis(*c), &opts)?,
        cs => ed::convergence_scan(p, &cfg.basis(cs[0]), cs, &opts, CONVERGENCE_TOL)?,
    };
    let mut summary = format!(
        "ground energy {:.12} at cutoff {} ({:?} solver, sector dimension {})",
        result.ground_energy(),
        result.cutoff_used,
        result.solver,
        result.basis.dim()
    );
    if !result.convergence_history.is_empty() {
        for c in &result.convergence_history {
            summary.push_str(&format!("\n  cutoff {:>6}  E0 = {:.15}", c.cutoff, c.ground_energy));
        }
        summary.push_str(&format!(
            "\nconverged = {} (relative change {:.3e}, tol {CONVERGENCE_TOL:e})",
            result.converged,
            result.last_relative_change().unwrap_or(f64::NAN)
        ));
        doc["relative_change"] = json!(result.last_relative_change());
        doc["tolerance"] = json!(CONVERGENCE_TOL);
    }
    if let Some(pair) = ed::symmetry_broken_pair(&result) {
        doc["symmetry_broken_pair"] = to_value(&pair);
    }
    doc["ed"] = to_value(&result);
    Ok(Outcome {
        artifact: Artifact::Document(doc),
        summary: Some(summary),
    })
}

fn table_text(t: &Table1Comparison) -> String {
    let mut s = format!(
        "{:<18} {:>9} {:>10} {:>10} {:>10}  verdict\n",
        "observable", "reference", "γ below", "r²", "γ above"
    );
    for row in &t.rows {
        let below = row.below.as_ref();
        let verdict = match row.verdict {
            Some(true) => "PASS",
            Some(false) => "FAIL",
            None => "n/a",
        };
        s.push_str(&format!(
            "{:<18} {:>+9.3} {:>10} {:>10} {:>10}  {verdict}\n",
            row.observable.name(),
            row.reference,
            below.map_or("-".into(), |f| format!("{:+.4}", f.gamma)),
            below.map_or("-".into(), |f| format!("{:.6}", f.r_squared)),
            row.above.as_ref().map_or("-".into(), |f| format!("{:+.4}", f.gamma)),
        ));
    }
    if let Some(c) = &t.ed_crossover {
        s.push_str(&format!(
            "ED crossover N = {}: g_peak = {:.4}, g_t = {:.4}, offset {:+.1}% [{}]\n",
            c.n_qubits,
            c.g_peak,
            c.g_t,
            100.0 * c.relative_offset,
            c.label
        ));
    }
    if let Some(first) = t.rows.iter().find_map(|r| r.below.as_ref()) {
        s.push_str(&format!(
            "window δ ∈ [{:.3e}, {:.3e}], tolerance ±{}",
            first.delta_min, first.delta_max, first.tolerance
        ));
    }
    s
}

fn exponents_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    p.with_g(0.0).check()?;
    let mut table = compare_table1(p, None, &cfg.fluctuations)?;
    if let Some(cutoff) = cfg.ed_cutoff {
        // finite-N crossover at N = 12, same λ; qualitative only
        let d = derive(p);
        let small = ModelParams {
            n_qubits: 12,
            omega_q: p.omega / (2.0 * d.lambda * 12.0),
            ..*p
        };
        let g_t = derive(&small).g_t;
        let grid = linspace(g_t / 2.0, (g_t + p.omega / 2.0) / 2.0, cfg.points.unwrap_or(41));
        let basis = dicke_core::BasisSpec::new(12, cutoff, cfg.parity);
        table.ed_crossover = Some(sweep::ed_crossover(&small, &basis, &grid, &cfg.solve_options(1))?);
    }
    let mut doc = header(p);
    doc["table"] = to_value(&table);
    doc["all_pass"] = json!(table.all_pass());
    Ok(Outcome {
        artifact: Artifact::Document(doc),
        summary: Some(table_text(&table)),
    })
}

fn collapse_cmd(cfg: &RunConfig) -> Result<Outcome, CliError> {
    let p = &cfg.params;
    p.with_g(0.0).check()?;
    let lo = cfg.g_min.unwrap_or(0.3 * p.omega);
    let hi = cfg.g_max.unwrap_or(0.49 * p.omega);
    let grid = linspace(lo, hi, cfg.points.unwrap_or(5));
    let cutoff = *cfg.cutoffs.iter().max().expect("cutoff list is never empty");
    let report = ed::collapse_probe(p, &cfg.basis(cutoff), &grid, &cfg.solve_options(6))?;
    let mut summary = format!("mean level spacing, cutoff {cutoff} vs {}:", cutoff / 2);
    for pt in &report.points {
        summary.push_str(&format!(
            "\n  g = {:.4}  {:.6e}  {:.6e}",
            pt.g, pt.mean_spacing, pt.mean_spacing_half_cutoff
        ));
    }
    summary.push_str(&format!(
        "\nspacing decreases with g: {}",
        report.spacing_decreases_with_g()
    ));
    summary.push_str(&format!(
        "\ncutoff-dependent (unbounded) at g = {:?}",
        report.unbounded_points()
    ));
    let mut doc = header(p);
    doc["spacing_decreases_with_g"] = json!(report.spacing_decreases_with_g());
    doc["unbounded_points"] = json!(report.unbounded_points());
    doc["collapse"] = to_value(&report);
    Ok(Outcome {
        artifact: Artifact::Document(doc),
        summary: Some(summary),
    })
}
