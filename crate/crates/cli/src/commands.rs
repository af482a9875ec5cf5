use std::fs;
use std::path::Path;

use lrs_core::analysis::{Analyzer, GuessDistribution, WorkFactor};
use lrs_core::counting::WeightComposition;
use lrs_core::decoder::{
    randomized_decode, run_planted_experiment, run_uniform_y_experiment, seed_stream, DecoderConfig, PlantedTarget,
    TrialReport,
};
use lrs_core::format::{format_rational, format_received, parse_received_word};
use lrs_core::lp::optimal_distribution;
use lrs_core::sum_rank::{sample_error, sum_rank_distance};
use num_rational::BigRational;
use serde_json::{json, Value};

use crate::params::{self, Point};
use crate::{
    CliError, CodeArgs, DecodeArgs, DistChoice, Format, OutputArgs, RoundtripArgs, SimulateArgs, SingleArgs, SweepArgs,
    TargetChoice,
};

fn emit(out: &OutputArgs, text: &str) -> Result<(), CliError> {
    match &out.output {
        Some(path) => write_file(path, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn log2_cell(wf: &WorkFactor) -> String {
    match wf {
        WorkFactor::Finite(_) => format!("{:.4}", wf.log2()),
        WorkFactor::Infinite => "inf".into(),
    }
}

fn log2_json(wf: &WorkFactor) -> Value {
    match wf {
        WorkFactor::Finite(_) => json!(wf.log2()),
        WorkFactor::Infinite => Value::Null,
    }
}

fn exact_json(wf: &WorkFactor) -> Value {
    wf.finite().map_or(Value::Null, |x| json!(format_rational(x)))
}

fn rational(x: &BigRational) -> Value {
    json!(format_rational(x))
}

/// The requested guessing distribution; falls back to uniform when the LP
/// does not finish.
fn distribution(an: &Analyzer, choice: DistChoice, budget: usize, ell: usize) -> GuessDistribution {
    match choice {
        DistChoice::Uniform => GuessDistribution::uniform(an.ctx()),
        DistChoice::Lp => match optimal_distribution(an, Some(budget)) {
            Ok(opt) => opt.dist,
            Err(e) => {
                eprintln!("note: ell={ell}: LP not solved ({e}); using the uniform distribution");
                GuessDistribution::uniform(an.ctx())
            }
        },
    }
}

pub fn bounds(a: &SweepArgs) -> Result<(), CliError> {
    let points = params::sweep(&a.code, &a.ell)?;
    let mut rows = Vec::new();
    for p in &points {
        let an = Analyzer::new(p.context(&a.code)?);
        let sb = an.sandwich_bounds();
        let opt = match optimal_distribution(&an, Some(a.code.pivot_budget)) {
            Ok(opt) => Some(opt.work_factor),
            Err(e) => {
                eprintln!(
                    "note: ell={}: LP not solved ({e}); reporting sandwich bounds only",
                    p.ell
                );
                None
            }
        };
        rows.push((p.ell, sb.lower, sb.upper, opt));
    }
    let text = match a.out.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("ell,log2_lbW,log2_ubW,log2_Wopt\n");
            for (ell, lb, ub, opt) in &rows {
                let opt = opt.as_ref().map(log2_cell).unwrap_or_default();
                s.push_str(&format!("{ell},{},{},{opt}\n", log2_cell(lb), log2_cell(ub)));
            }
            s
        }
        Format::Json => json_text(&Value::Array(
            rows.iter()
                .map(|(ell, lb, ub, opt)| {
                    json!({
                        "ell": ell,
                        "lbW": exact_json(lb),
                        "ubW": exact_json(ub),
                        "Wopt": opt.as_ref().map_or(Value::Null, exact_json),
                        "log2_lbW": log2_json(lb),
                        "log2_ubW": log2_json(ub),
                        "log2_Wopt": opt.as_ref().map_or(Value::Null, log2_json),
                    })
                })
                .collect(),
        )),
    };
    emit(&a.out, &text)
}

fn single_point(a: &SingleArgs) -> Result<Point, CliError> {
    let field = params::field_spec(&a.code)?;
    let p = params::point(&a.code, field, a.ell)?;
    p.context(&a.code)?;
    Ok(p)
}

pub fn lp(a: &SingleArgs) -> Result<(), CliError> {
    if a.out.format == Some(Format::Csv) {
        return Err(CliError::Validation("lp output is JSON only".into()));
    }
    let p = single_point(a)?;
    let an = Analyzer::new(p.context(&a.code)?);
    let opt = optimal_distribution(&an, Some(a.code.pivot_budget))?;
    let distribution: Vec<Value> = opt
        .dist
        .support()
        .map(|(c, pr)| json!({ "composition": c.parts(), "prob": format_rational(pr) }))
        .collect();
    let v = json!({
        "ell": p.ell,
        "objective": rational(&opt.objective),
        "work_factor": exact_json(&opt.work_factor),
        "log2_Wopt": log2_json(&opt.work_factor),
        "pivots": opt.solution.pivots,
        "distribution": distribution,
    });
    emit(&a.out, &json_text(&v))
}

fn error_composition(
    spec: Option<&str>,
    an: &Analyzer,
    dist: &GuessDistribution,
) -> Result<WeightComposition, CliError> {
    let ctx = an.ctx();
    let comp = match spec {
        Some(s) => WeightComposition::new(params::composition(s)?, ctx.mu)?,
        None => an.worst_case_prob(dist).1,
    };
    if comp.len() != ctx.ell || comp.total() > ctx.w {
        return Err(CliError::Validation(format!(
            "error composition {:?} needs {} entries summing to at most w = {}",
            comp.parts(),
            ctx.ell,
            ctx.w
        )));
    }
    Ok(comp)
}

pub fn simulate(a: &SimulateArgs) -> Result<(), CliError> {
    let code_args: &CodeArgs = &a.sweep.code;
    let points = params::sweep(code_args, &a.sweep.ell)?;
    if a.run.cap == 0 {
        return Err(CliError::Validation("--cap must be at least 1".into()));
    }
    let codes = points
        .iter()
        .map(|p| p.code(code_args))
        .collect::<Result<Vec<_>, _>>()?;
    let mut rows: Vec<(usize, TrialReport, WorkFactor)> = Vec::new();
    if a.trials > 0 {
        for (p, code) in points.iter().zip(&codes) {
            let an = Analyzer::new(p.context(code_args)?);
            let dist = distribution(&an, a.run.dist, code_args.pivot_budget, p.ell);
            let lower = an.uniform_lower_bound_for(&dist);
            let cfg = DecoderConfig::new(code, code_args.w, code_args.u, dist.clone(), a.run.cap, a.run.seed)?;
            let report = if a.planted {
                let comp = error_composition(a.error_composition.as_deref(), &an, &dist)?;
                let target = match a.target {
                    TargetChoice::Any => PlantedTarget::Any,
                    TargetChoice::Planted => PlantedTarget::Planted,
                };
                run_planted_experiment(&cfg, &comp, a.trials, target)?
            } else {
                run_uniform_y_experiment(&cfg, a.trials, a.run.cap)?
            };
            rows.push((p.ell, report, lower));
        }
    }
    let text = match a.sweep.out.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("ell,trials,total_iterations,successes,log2_empirical_wf,log2_W_LB\n");
            for (ell, r, lb) in &rows {
                let wf = r
                    .empirical_log2_work_factor
                    .map(|x| format!("{x:.4}"))
                    .unwrap_or_default();
                s.push_str(&format!(
                    "{ell},{},{},{},{wf},{}\n",
                    r.trials,
                    r.total_iterations,
                    r.successes,
                    log2_cell(lb)
                ));
            }
            s
        }
        Format::Json => json_text(&Value::Array(
            rows.iter()
                .map(|(ell, r, lb)| {
                    json!({
                        "ell": ell,
                        "mode": if a.planted { "planted" } else { "uniform" },
                        "trials": r.trials,
                        "total_iterations": r.total_iterations,
                        "successes": r.successes,
                        "empirical_success_prob_per_iteration": r.empirical_success_prob_per_iteration,
                        "log2_empirical_wf": r.empirical_log2_work_factor,
                        "log2_W_LB": log2_json(lb),
                    })
                })
                .collect(),
        )),
    };
    emit(&a.sweep.out, &text)
}

pub fn decode(a: &DecodeArgs) -> Result<(), CliError> {
    let code_args = &a.single.code;
    let p = single_point(&a.single)?;
    let code = p.code(code_args)?;
    let text = fs::read_to_string(&a.input).map_err(|e| CliError::Io(format!("{}: {e}", a.input.display())))?;
    let y = parse_received_word(code.field(), code.partition(), &text)
        .map_err(|e| CliError::Parse(format!("{}: {e}", a.input.display())))?;
    let an = Analyzer::new(p.context(code_args)?);
    let dist = distribution(&an, a.run.dist, code_args.pivot_budget, p.ell);
    let cfg = DecoderConfig::new(&code, code_args.w, code_args.u, dist, a.run.cap, a.run.seed)?;
    let out = randomized_decode(&cfg, &y)?;
    let Some(c) = out.codeword else {
        emit(
            &a.single.out,
            &json_text(&json!({ "status": "cap_exhausted", "iterations_used": out.iterations_used })),
        )?;
        return Err(CliError::CapExhausted(format!(
            "no codeword within w after {} iterations",
            out.iterations_used
        )));
    };
    let formatted = format_received(code.field(), &c);
    if let Some(path) = &a.codeword_out {
        write_file(path, &formatted)?;
    }
    let v = json!({
        "status": "decoded",
        "iterations_used": out.iterations_used,
        "distance": sum_rank_distance(code.field(), &y, &c)?,
        "codeword": formatted.lines().collect::<Vec<_>>(),
    });
    emit(&a.single.out, &json_text(&v))
}

pub fn roundtrip(a: &RoundtripArgs) -> Result<(), CliError> {
    let code_args = &a.single.code;
    let p = single_point(&a.single)?;
    let code = p.code(code_args)?;
    let an = Analyzer::new(p.context(code_args)?);
    let dist = distribution(&an, a.run.dist, code_args.pivot_budget, p.ell);
    let comp = error_composition(a.error_composition.as_deref(), &an, &dist)?;

    // The planted instance uses its own stream; decoding uses stream 0.
    let mut rng = seed_stream(a.run.seed, 1);
    let f = code.field();
    let c = code.encode(&code.random_message(&mut rng))?;
    let e = sample_error(f, code.partition(), &comp, &mut rng)?;
    let y = c.add(f, &e)?;
    if let Some(path) = &a.received_out {
        write_file(path, &format_received(f, &y))?;
    }
    if let Some(path) = &a.codeword_out {
        write_file(path, &format_received(f, &c))?;
    }
    let cfg = DecoderConfig::new(&code, code_args.w, code_args.u, dist, a.run.cap, a.run.seed)?;
    let out = randomized_decode(&cfg, &y)?;
    let v = json!({
        "status": if out.codeword.is_some() { "decoded" } else { "cap_exhausted" },
        "error_composition": comp.parts(),
        "iterations_used": out.iterations_used,
        "recovered_planted": out.codeword.as_ref() == Some(&c),
    });
    emit(&a.single.out, &json_text(&v))?;
    if out.codeword.is_none() {
        return Err(CliError::CapExhausted(format!(
            "no codeword within w after {} iterations",
            out.iterations_used
        )));
    }
    Ok(())
}
