//! Executes a [`RunConfig`].

use anyhow::{bail, Context, Result};
use ffdioph::boxcount::box_count;
use ffdioph::dimension::{s_length, theorem1_verdict, theorem2_verdict};
use ffdioph::exponents::{eta_of_psi, gamma_of_s, lambda_of_psi, v_of_s, ApproxFunction, SetFamily};
use ffdioph::measure::{self, brute, ResonantSet};
use ffdioph::serde_util::format_rational;
use ffdioph::stochastic::{nu_exact_moments, nu_monte_carlo, RhoSpec};
use ffdioph::{verify, FieldSpec, PolyVector};
use serde::Serialize;
use serde_json::{json, Value};

use crate::config::{DimensionTask, Quantity, RunConfig, Task};

pub struct Outcome {
    pub result: Value,
    /// Header first.
    pub table: Vec<Vec<String>>,
    /// `Some(false)` when a verification failed.
    pub passed: Option<bool>,
}

fn value<T: Serialize>(x: &T) -> Result<Value> {
    Ok(serde_json::to_value(x)?)
}

fn row<I: IntoIterator<Item = S>, S: ToString>(items: I) -> Vec<String> {
    items.into_iter().map(|s| s.to_string()).collect()
}

fn opt<T: ToString>(x: Option<T>) -> String {
    x.map_or(String::new(), |x| x.to_string())
}

fn key_values(pairs: &[(&str, String)]) -> Vec<Vec<String>> {
    let mut table = vec![row(["key", "value"])];
    table.extend(pairs.iter().map(|(k, v)| vec![k.to_string(), v.clone()]));
    table
}

pub fn execute(cfg: &RunConfig) -> Result<Outcome> {
    let spec = FieldSpec::from_config(&cfg.field)?;
    match &cfg.task {
        Task::Verify { lemma, params } => {
            let mut params = params.clone();
            params.k = params.k.or(Some(spec.k()));
            if params.seed.is_none() && lemma == "scaling" {
                params.seed = Some(cfg.seed);
            }
            let report = verify::run(lemma, &params)?;
            let table = vec![
                row(["lemma", "checked", "failures", "passed"]),
                row([report.lemma.clone(), report.checked.to_string(), report.failures.to_string(), report.passed.to_string()]),
            ];
            Ok(Outcome { passed: Some(report.passed), result: value(&report)?, table })
        }
        Task::Measure { sets, n, depth, brute: recount } => {
            if sets.is_empty() {
                bail!("measure needs at least one set");
            }
            let sets: Vec<ResonantSet> = sets
                .iter()
                .map(|s| {
                    let q = PolyVector::from_coeffs(&spec, &s.q)?;
                    Ok(ResonantSet { kind: s.kind, q, r: s.r })
                })
                .collect::<Result<_>>()?;
            let depth = depth.unwrap_or_else(|| measure::required_precision(&sets));
            let mu = measure::measure_intersection(&sets, *n, depth)?;
            let check = if *recount { Some(brute::measure_intersection(&sets, *n, depth)?) } else { None };
            let agrees = check.as_ref().map(|c| *c == mu);
            let mut pairs = vec![("measure", mu.to_string()), ("depth", depth.to_string())];
            if let Some(c) = &check {
                pairs.push(("brute", c.to_string()));
                pairs.push(("agrees", agrees.unwrap().to_string()));
            }
            Ok(Outcome {
                result: json!({ "measure": mu, "depth": depth, "brute": check, "agrees": agrees }),
                table: key_values(&pairs),
                passed: agrees,
            })
        }
        Task::Exponents { quantity, family, psi, n, n_max, tolerance } => {
            let s = SetFamily::from_config(&spec, family)?;
            let psi = psi.as_ref().map(|p| ApproxFunction::new(&spec, family.m, p)).transpose()?;
            let need_psi = || psi.as_ref().context("this quantity needs --psi");
            let (result, estimate) = match quantity {
                Quantity::VS => {
                    let e = v_of_s(&s, *n_max)?;
                    (value(&e)?, e.estimate)
                }
                Quantity::Gamma => {
                    let e = gamma_of_s(&s, *n_max)?;
                    (value(&e)?, e.estimate)
                }
                Quantity::Lambda => {
                    let e = lambda_of_psi(need_psi()?, &s, *n_max, *tolerance)?;
                    (value(&e)?, e.estimate)
                }
                Quantity::Eta => {
                    let e = eta_of_psi(need_psi()?, *n, *n_max, *tolerance)?;
                    (value(&e)?, e.estimate)
                }
            };
            let exact = result.get("exact").and_then(Value::as_str).map(str::to_string);
            let table = vec![row(["quantity", "estimate", "exact"]), row([quantity_name(*quantity).to_string(), estimate.to_string(), opt(exact)])];
            Ok(Outcome { result, table, passed: None })
        }
        Task::Dimension(task) => dimension(&spec, task),
        Task::Stochastic { family, n_t, delta, v_s, n, depth, samples } => {
            let s = SetFamily::from_config(&spec, family)?;
            let v_s = match v_s {
                Some(v) => v.clone(),
                None => s.oracle_v().context("the family has no closed-form v(S); give --vS")?,
            };
            let rho = RhoSpec { v_s, delta: delta.clone(), n: *n };
            let exact = nu_exact_moments(&s, *n_t, &rho, *depth)?;
            let mc = if *samples > 0 { Some(nu_monte_carlo(&s, *n_t, &rho, *samples, cfg.seed, *depth)?) } else { None };
            let mean = exact.mean.to_rational();
            let checks = mc.as_ref().map(|m| json!({ "mean_consistent": m.mean_consistent(&mean), "zero_bound_holds": m.zero_bound_holds(&mean) }));
            let mut table = vec![row(["n_t", "rho_exponent", "mean", "second_moment", "variance_ratio", "mc_mean", "mc_std_error", "zero_frequency"])];
            table.push(row([
                exact.n_t.to_string(),
                exact.rho.exponent.to_string(),
                exact.mean.to_string(),
                exact.second_moment.to_string(),
                format_rational(&exact.variance_ratio),
                opt(mc.as_ref().map(|m| m.mean)),
                opt(mc.as_ref().map(|m| m.std_error)),
                opt(mc.as_ref().map(|m| m.zero_frequency)),
            ]));
            Ok(Outcome { result: json!({ "exact": exact, "monte_carlo": mc, "checks": checks }), table, passed: None })
        }
        Task::Boxcount { family, psi, run } => {
            let s = SetFamily::from_config(&spec, family)?;
            let psi = ApproxFunction::new(&spec, family.m, psi)?;
            let report = box_count(&s, &psi, run)?;
            let prediction = opt(report.prediction.as_ref().map(format_rational));
            let mut table = vec![row(["depth", "survivors", "estimate", "prediction"])];
            for r in &report.series {
                table.push(row([r.depth.to_string(), r.survivors.to_string(), r.estimate.to_string(), prediction.clone()]));
            }
            Ok(Outcome { result: value(&report)?, table, passed: None })
        }
    }
}

fn quantity_name(q: Quantity) -> &'static str {
    match q {
        Quantity::VS => "vS",
        Quantity::Gamma => "gamma",
        Quantity::Lambda => "lambda",
        Quantity::Eta => "eta",
    }
}

fn dimension(spec: &FieldSpec, task: &DimensionTask) -> Result<Outcome> {
    let verdict_table = |v: &ffdioph::dimension::DimensionVerdict| -> Result<Vec<Vec<String>>> {
        let regime = value(&v.regime)?.as_str().unwrap_or_default().to_string();
        Ok(vec![row(["regime", "dim"]), row([regime, format_rational(&v.dim)])])
    };
    match task {
        DimensionTask::Thm1 { m, n, v_s, lambda } => {
            let v = theorem1_verdict(*m, *n, v_s, lambda)?;
            Ok(Outcome { table: verdict_table(&v)?, result: value(&v)?, passed: None })
        }
        DimensionTask::Thm2 { m, n, eta } => {
            let v = theorem2_verdict(*m, *n, eta)?;
            Ok(Outcome { table: verdict_table(&v)?, result: value(&v)?, passed: None })
        }
        DimensionTask::Slength { family, n, lambda, epsilon, s, m_exponent, n_max } => {
            let fam = SetFamily::from_config(spec, family)?;
            let report = s_length(&fam, lambda, epsilon, s, *m_exponent, *n, *n_max)?;
            let mut table = vec![row(["n", "balls_exponent", "radius_exponent", "log_term"])];
            for b in &report.blocks {
                table.push(row([
                    b.n.to_string(),
                    format_rational(&b.balls_exponent),
                    format_rational(&b.radius_exponent),
                    opt(b.log_term),
                ]));
            }
            Ok(Outcome { result: value(&report)?, table, passed: None })
        }
    }
}
