use anyhow::{bail, Context};
use otto_core::optimize::{log_grid, PiPoint};
use otto_core::verify::{run_suite, Property, VerifySpec};
use otto_core::{
    max_power_pqr, peak_power, pi_sweep, run_cycle_with, transient_trajectory, AscentOptions, BathPair, CostGeometry,
    OttoError, PairKind, PiSweepSpec, PowerModel, StrokeSchedule, TcycleSearch,
};
use serde::Serialize;

use crate::config::RunConfig;
use crate::output::{fmt_f64, Cell, RunRecord, Sink, Table, VERSION};

fn record<'a, T: Serialize>(command: &'a str, run: &'a RunConfig, pairs: &[BathPair], result: T) -> RunRecord<'a, T> {
    RunRecord {
        command,
        version: VERSION,
        config_hash: run.hash(),
        seed: run.seed,
        config: run,
        pairs: pairs.iter().map(BathPair::record).collect(),
        result,
    }
}

fn model(pair: &BathPair, run: &RunConfig) -> anyhow::Result<PowerModel> {
    let e = &run.file.engine;
    Ok(PowerModel::from_pair(pair, e.omega_h, e.omega_c, e.kappa)?)
}

fn search(run: &RunConfig) -> TcycleSearch {
    let o = &run.file.optimize;
    TcycleSearch {
        lo: o.t_lo,
        hi: o.t_hi,
        points: o.t_points,
        ..TcycleSearch::default()
    }
}

fn sweep_grid(run: &RunConfig) -> anyhow::Result<Vec<f64>> {
    let s = &run.file.sweep;
    if !(s.t_min > 0.0 && s.t_max > s.t_min && s.points >= 2) {
        bail!("sweep needs 0 < t_min < t_max and at least 2 points");
    }
    Ok(log_grid(s.t_min, s.t_max, s.points))
}

#[derive(Serialize)]
struct CurveSummary {
    pair: String,
    peak_power: f64,
    t_peak: f64,
    max_eta: f64,
    eta_at_t_max: f64,
    cost_at_t_max: f64,
    unprofitable_points: usize,
}

pub fn curve(run: &RunConfig, sink: &mut Sink) -> anyhow::Result<()> {
    let pairs = run.bath_pairs()?;
    let e = &run.file.engine;
    let geo = CostGeometry::new(e.omega_h, e.omega_c)?;
    let grid = sweep_grid(run)?;
    let mut table = Table::new(&[
        "pair", "t_cycle", "nbar_c", "nbar_h", "work", "q_h", "q_c", "v_e", "v_c", "cost", "eta", "power", "unprofitable",
    ]);
    let mut summaries = Vec::new();
    for pair in &pairs {
        let m = model(pair, run)?;
        let label = pair.label.to_string();
        let mut s = CurveSummary {
            pair: label.clone(),
            peak_power: f64::NEG_INFINITY,
            t_peak: f64::NAN,
            max_eta: f64::NEG_INFINITY,
            eta_at_t_max: f64::NAN,
            cost_at_t_max: f64::NAN,
            unprofitable_points: 0,
        };
        for &t in &grid {
            let rep = run_cycle_with(&m.config(t, e.p, e.q, e.r)?, &geo);
            let cost = rep.v_e + rep.v_c;
            table.row(vec![
                label.as_str().into(),
                t.into(),
                rep.nbar_c.into(),
                rep.nbar_h.into(),
                rep.work.into(),
                rep.q_h.into(),
                rep.q_c.into(),
                rep.v_e.into(),
                rep.v_c.into(),
                cost.into(),
                rep.eta.into(),
                rep.power.into(),
                rep.unprofitable.into(),
            ]);
            if rep.power > s.peak_power {
                s.peak_power = rep.power;
                s.t_peak = t;
            }
            s.max_eta = s.max_eta.max(rep.eta);
            s.eta_at_t_max = rep.eta;
            s.cost_at_t_max = cost;
            s.unprofitable_points += usize::from(rep.unprofitable);
        }
        summaries.push(s);
    }
    sink.csv("curve.csv", "curve", run, &table)?;
    sink.json("curve.json", &record("curve", run, &pairs, summaries))
}

#[derive(Serialize)]
struct TransientSummary {
    pair: String,
    cycles: u64,
    nbar_sc: f64,
    final_end_of_cycle: f64,
    final_gap: f64,
}

pub fn transient(run: &RunConfig, sink: &mut Sink) -> anyhow::Result<()> {
    let pairs = run.bath_pairs()?;
    let t = &run.file.transient;
    let e = &run.file.engine;
    let mut table = Table::new(&["pair", "t", "nbar", "cycle", "phase"]);
    let mut summaries = Vec::new();
    for pair in &pairs {
        let cfg = model(pair, run)?.config(t.t_cycle, e.p, e.q, e.r)?;
        let k = cfg.kernel();
        let cycles = t.cycles.unwrap_or_else(|| (50.0 / (k.x_h() + k.x_c())).ceil() as u64);
        let traj = transient_trajectory(t.n0, cycles, &cfg, t.per_stroke)?;
        let label = pair.label.to_string();
        for s in &traj {
            table.row(vec![label.as_str().into(), s.t.into(), s.nbar.into(), s.cycle.into(), s.phase.name().into()]);
        }
        let last = traj.last().map_or(t.n0, |s| s.nbar);
        summaries.push(TransientSummary {
            pair: label,
            cycles,
            nbar_sc: k.nbar_sc(),
            final_end_of_cycle: last,
            final_gap: (last - k.nbar_sc()).abs(),
        });
    }
    sink.csv("transient.csv", "transient", run, &table)?;
    sink.json("transient.json", &record("transient", run, &pairs, summaries))
}

#[derive(Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
enum PairOptimum {
    Optimized {
        pair: String,
        default_peak: otto_core::Optimum,
        optimum: otto_core::PqrOptimum,
        improvement: f64,
    },
    NoProfitableCycle {
        pair: String,
        best_power: f64,
        t_cycle: f64,
    },
}

pub fn optimize(run: &RunConfig, sink: &mut Sink) -> anyhow::Result<()> {
    let pairs = run.bath_pairs()?;
    let o = &run.file.optimize;
    let opts = AscentOptions {
        step: o.step,
        rel_tol: o.rel_tol,
        max_rounds: o.max_rounds,
        ..AscentOptions::default()
    };
    let search = search(run);
    let grid = sweep_grid(run)?;
    let mut curves = Table::new(&["pair", "t_cycle", "power_default", "power_optimized"]);
    let mut sections = Table::new(&["pair", "axis", "p", "q", "r", "peak_power"]);
    let mut results = Vec::new();
    for pair in &pairs {
        let m = model(pair, run)?;
        let label = pair.label.to_string();
        let [p0, q0, r0] = o.start;
        let default_peak = peak_power(&m, p0, q0, r0, &search);
        match max_power_pqr(&m, o.start, &search, &opts) {
            Ok(found) => {
                let x = &found.optimum;
                for &t in &grid {
                    curves.row(vec![
                        label.as_str().into(),
                        t.into(),
                        m.power(t, p0, q0, r0).into(),
                        m.power(t, x.p, x.q, x.r).into(),
                    ]);
                }
                for cs in &found.cross_sections {
                    for &(v, power) in &cs.points {
                        let mut at = cs.fixed;
                        at[cs.axis] = v;
                        sections.row(vec![
                            label.as_str().into(),
                            ["p", "q", "r"][cs.axis].into(),
                            at[0].into(),
                            at[1].into(),
                            at[2].into(),
                            power.into(),
                        ]);
                    }
                }
                results.push(PairOptimum::Optimized {
                    pair: label,
                    improvement: found.optimum.power / default_peak.power,
                    default_peak,
                    optimum: found,
                });
            }
            Err(OttoError::NoProfitableCycle { best_power, t_cycle }) => {
                results.push(PairOptimum::NoProfitableCycle {
                    pair: label,
                    best_power,
                    t_cycle,
                });
            }
            Err(e) => return Err(e).with_context(|| format!("optimizing pair {}", pair.label)),
        }
    }
    sink.csv("optimize_curves.csv", "optimize", run, &curves)?;
    sink.csv("optimize_cross_sections.csv", "optimize", run, &sections)?;
    sink.json("optimize.json", &record("optimize", run, &pairs, results))
}

#[derive(Serialize)]
struct PiSummary {
    argmax_work: f64,
    argmax_power: f64,
    points: Vec<PiPoint>,
}

pub fn pi_sweep_cmd(run: &RunConfig, sink: &mut Sink) -> anyhow::Result<()> {
    if run.file.bath.custom.is_some() {
        bail!("pi-sweep needs temperature-based baths, not [bath.custom] weights");
    }
    let b = &run.file.bath;
    let base = otto_core::make_pair_from_nbar(PairKind::Incoherent, b.nbar_hot, b.nbar_cold, b.omega, b.ell)?;
    let e = &run.file.engine;
    let pi = &run.file.pi;
    let spec = PiSweepSpec {
        omega_h: e.omega_h,
        omega_c: e.omega_c,
        kappa: e.kappa,
        p: e.p,
        q: e.q,
        r: e.r,
        t_reference: pi.t_reference,
    };
    StrokeSchedule::from_fractions(pi.t_reference, e.p, e.q, e.r)?;
    if pi.points < 2 {
        bail!("pi sweep needs at least 2 points");
    }
    let pis: Vec<f64> = (0..pi.points).map(|k| k as f64 / (pi.points - 1) as f64).collect();
    let sweep = pi_sweep(&base, &pis, &spec, &search(run))?;
    let mut table = Table::new(&["pi", "delta_h", "delta_c", "work", "peak_power", "t_peak"]);
    for p in &sweep.points {
        table.row(vec![p.pi.into(), p.delta_h.into(), p.delta_c.into(), p.work.into(), p.peak_power.into(), p.t_peak.into()]);
    }
    sink.csv("pi_sweep.csv", "pi-sweep", run, &table)?;
    let summary = PiSummary {
        argmax_work: sweep.argmax_work,
        argmax_power: sweep.argmax_power,
        points: sweep.points,
    };
    sink.json("pi_sweep.json", &record("pi-sweep", run, &[base], summary))
}

#[derive(Serialize)]
struct VerifySummary {
    passed: usize,
    failed: usize,
    properties: Vec<Property>,
}

/// Runs the property suite; returns whether every property passed.
pub fn verify(run: &RunConfig, sink: &mut Sink) -> anyhow::Result<bool> {
    let pairs = run.bath_pairs()?;
    let e = &run.file.engine;
    let v = &run.file.verify;
    let spec = VerifySpec {
        omega_h: e.omega_h,
        omega_c: e.omega_c,
        kappa: e.kappa,
        t_cycle: v.t_cycle,
        p: e.p,
        q: e.q,
        r: e.r,
        seed: run.seed,
        draws: v.draws,
        oracle_horizon: v.oracle_horizon,
    };
    let properties = run_suite(&pairs, &spec, &v.tolerances)?;
    let mut table = Table::new(&["property", "measured", "tolerance", "pass"]);
    for p in &properties {
        println!(
            "[{}] {} measured={} tolerance={}",
            if p.pass { "PASS" } else { "FAIL" },
            p.name,
            fmt_f64(p.measured),
            fmt_f64(p.tolerance)
        );
        table.row(vec![p.name.clone().into(), p.measured.into(), p.tolerance.into(), Cell::B(p.pass)]);
    }
    let failed = properties.iter().filter(|p| !p.pass).count();
    println!("verify: {} passed, {failed} failed", properties.len() - failed);
    sink.csv("verify.csv", "verify", run, &table)?;
    let summary = VerifySummary {
        passed: properties.len() - failed,
        failed,
        properties,
    };
    sink.json("verify.json", &record("verify", run, &pairs, summary))?;
    Ok(failed == 0)
}

