use std::sync::Arc;

use num_rational::BigRational;
use subent::closedform::{
    avg_coherence, avg_entropy_page, avg_subentropy_closed, harmonic, levy_bound, prop1_average_subentropy,
    to_f64,
};
use subent::entangle::ClassXEntanglement;
use subent::functional::Coherence;
use subent::identities::{quadrature_sweep, sweep};
use subent::montecarlo::{
    concentration_sweep, estimate_functionals, sample_values, strictly_decreasing, tail_reports,
    MonteCarloEstimate, RunConfig, DEFAULT_CHUNK,
};
use subent::{Functional, FunctionalRegistry};

use crate::args::{
    ConcentrationArgs, EntangleArgs, EpsList, EstimateArgs, FormulaArgs, IdentitiesArgs, RangeArg, SamplingArgs,
};
use crate::config::ConfigFile;
use crate::error::CliError;
use crate::output::{Record, Value};

const DEFAULT_SAMPLES: usize = 10_000;
const DEFAULT_SEED: u64 = 0;
const DEFAULT_MAX: usize = 20;

/// Everything a command produces before rendering.
#[derive(Debug, Default)]
pub struct Outcome {
    pub parameters: Vec<(String, Value)>,
    pub seed: u64,
    pub chunk: usize,
    pub records: Vec<Record>,
    /// Failed assertions or exceeded bounds; nonempty means exit code 3.
    pub violations: Vec<String>,
}

impl Outcome {
    fn param(&mut self, key: &str, value: impl Into<Value>) {
        self.parameters.push((key.to_string(), value.into()));
    }
}

pub struct Context {
    pub config: ConfigFile,
    pub workers: Option<usize>,
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn required<T>(v: Option<T>, flag: &str) -> Result<T, CliError> {
    v.ok_or_else(|| usage(format!("missing required flag --{flag}")))
}

fn check_pair(m: usize, n: usize, min_m: usize) -> Result<(), CliError> {
    if m < min_m {
        return Err(usage(format!("--m must be at least {min_m}, got {m}")));
    }
    if m > n {
        return Err(usage(format!("--m ({m}) must not exceed --n ({n})")));
    }
    Ok(())
}

fn run_config(s: &SamplingArgs, ctx: &Context, out: &mut Outcome) -> Result<RunConfig, CliError> {
    let samples = ctx.config.layer(s.samples, "samples")?.unwrap_or(DEFAULT_SAMPLES);
    let seed = ctx.config.layer(s.seed, "seed")?.unwrap_or(DEFAULT_SEED);
    let chunk = ctx.config.layer(s.chunk, "chunk")?.unwrap_or(DEFAULT_CHUNK);
    if samples < 2 {
        return Err(usage(format!("--samples must be at least 2, got {samples}")));
    }
    if chunk == 0 {
        return Err(usage("--chunk must be positive"));
    }
    out.seed = seed;
    out.chunk = chunk;
    out.param("samples", samples);
    let mut cfg = RunConfig::new(samples, seed).with_chunk(chunk);
    if let Some(w) = ctx.workers {
        cfg = cfg.with_workers(w);
    }
    Ok(cfg)
}

fn estimate_fields(r: Record, est: &MonteCarloEstimate) -> Record {
    r.with("samples", est.count())
        .with("mean", est.mean())
        .with("stderr", est.stderr())
        .with("stddev", est.stddev())
}

fn target_fields(r: Record, est: &MonteCarloEstimate, target: Option<&BigRational>) -> Record {
    match target {
        Some(t) => {
            let tf = to_f64(t);
            r.with("target_exact", t).with("target", tf).with("z_score", est.z_score(tf))
        }
        None => r,
    }
}

pub fn formula(a: &FormulaArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.config;
    let m = cfg.layer(a.m, "m")?;
    let n = cfg.layer(a.n, "n")?;
    let m_range = cfg.layer(a.m_range, "m-range")?;
    let n_range = cfg.layer(a.n_range, "n-range")?;
    let mut out = Outcome {
        chunk: DEFAULT_CHUNK,
        ..Outcome::default()
    };
    let pairs: Vec<(usize, usize)> = if m_range.is_some() || n_range.is_some() {
        let ms: Vec<usize> = match m_range {
            Some(r) => r.values().collect(),
            None => vec![required(m, "m or --m-range")?],
        };
        let ns: Vec<usize> = match n_range {
            Some(r) => r.values().collect(),
            None => vec![required(n, "n or --n-range")?],
        };
        if ms.contains(&0) || ns.contains(&0) {
            return Err(usage("dimensions must be positive"));
        }
        out.param("m_range", range_text(m_range, m));
        out.param("n_range", range_text(n_range, n));
        ns.iter()
            .flat_map(|&n| ms.iter().filter(move |&&m| m <= n).map(move |&m| (m, n)))
            .collect()
    } else {
        let m = required(m, "m")?;
        let n = required(n, "n")?;
        check_pair(m, n, 1)?;
        out.param("m", m);
        out.param("n", n);
        vec![(m, n)]
    };

    for (m, n) in pairs {
        let q = avg_subentropy_closed(m, n)?;
        let s = avg_entropy_page(m, n)?;
        let c = avg_coherence(m, n)?;
        let prop1 = prop1_average_subentropy(m, n - m + 1)?.exact;
        let half_ratio = BigRational::new((m as i64 - 1).into(), (2 * n as i64).into());
        let residual = (harmonic(m) - BigRational::from_integer(1.into())) + &q - &s - half_ratio;
        if residual != BigRational::from_integer(0.into()) {
            out.violations.push(format!("coherence assembly residual {residual} at ({m},{n})"));
        }
        if prop1 != q {
            out.violations.push(format!("subentropy sum disagrees with closed form at ({m},{n})"));
        }
        out.records.push(
            Record::new("formula")
                .with("m", m)
                .with("n", n)
                .with("avg_subentropy_exact", &q)
                .with("avg_subentropy", to_f64(&q))
                .with("avg_entropy_exact", &s)
                .with("avg_entropy", to_f64(&s))
                .with("avg_coherence_exact", &c)
                .with("avg_coherence", to_f64(&c))
                .with("prop1_exact", &prop1)
                .with("prop1", to_f64(&prop1))
                .with("residual_exact", &residual)
                .with("residual", to_f64(&residual)),
        );
    }
    Ok(out)
}

fn range_text(range: Option<RangeArg>, single: Option<usize>) -> String {
    match (range, single) {
        (Some(r), _) => r.to_string(),
        (None, Some(v)) => format!("{v}..{v}"),
        (None, None) => String::new(),
    }
}

fn resolve_functionals(which: &str) -> Result<Vec<Arc<dyn Functional>>, CliError> {
    let registry = FunctionalRegistry::with_builtins();
    let names: Vec<&str> = if which == "all" {
        vec!["entropy", "subentropy", "coherence"]
    } else {
        which.split(',').map(str::trim).collect()
    };
    names
        .into_iter()
        .map(|name| {
            registry.get(name).map_err(|_| {
                let known: Vec<&str> = registry.names().collect();
                usage(format!("unknown functional `{name}`; expected all or one of {}", known.join(", ")))
            })
        })
        .collect()
}

pub fn estimate(a: &EstimateArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.config;
    let m = required(cfg.layer(a.m, "m")?, "m")?;
    let n = required(cfg.layer(a.n, "n")?, "n")?;
    check_pair(m, n, 1)?;
    let which = cfg.layer(a.which.clone(), "which")?.unwrap_or_else(|| "all".to_string());
    let functionals = resolve_functionals(&which)?;
    let mut out = Outcome::default();
    out.param("m", m);
    out.param("n", n);
    out.param("which", which.as_str());
    let run = run_config(&a.sampling, ctx, &mut out)?;
    let estimates = estimate_functionals(m, n, &functionals, &run)?;
    for (f, est) in functionals.iter().zip(&estimates) {
        let target = f.induced_average(m, n)?;
        let r = Record::new("estimate").with("functional", f.name()).with("m", m).with("n", n);
        out.records.push(target_fields(estimate_fields(r, est), est, target.as_ref()));
    }
    Ok(out)
}

const DEFAULT_EPS: [f64; 3] = [0.05, 0.1, 0.2];

fn tail_records(
    kind: &str,
    m: usize,
    n: usize,
    values: &[f64],
    eps: &[f64],
    out: &mut Outcome,
) -> Result<(), CliError> {
    let center = to_f64(&avg_coherence(m, n)?);
    for t in tail_reports(values, center, eps, |e| levy_bound(m, n, e))? {
        if !t.within_bound() {
            out.violations.push(format!(
                "tail fraction {} exceeds bound {} at eps = {}",
                t.empirical_fraction, t.levy_bound, t.epsilon
            ));
        }
        out.records.push(
            Record::new(kind)
                .with("m", m)
                .with("n", n)
                .with("epsilon", t.epsilon)
                .with("center", t.center)
                .with("empirical_fraction", t.empirical_fraction)
                .with("bound", t.levy_bound)
                .with("within_bound", t.within_bound())
                .with("samples", t.count),
        );
    }
    Ok(())
}

pub fn concentration(a: &ConcentrationArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.config;
    let mut out = Outcome::default();
    if let Some(range) = cfg.layer(a.m_range, "m-range")? {
        let ms: Vec<usize> = range.values().collect();
        if let Some(m) = ms.iter().find(|&&m| m < 2) {
            return Err(usage(format!("sweep needs m >= 2, got {m}")));
        }
        out.param("m_range", range.to_string());
        let run = run_config(&a.sampling, ctx, &mut out)?;
        let rows = concentration_sweep(&ms, &run)?;
        for r in &rows {
            out.records.push(
                Record::new("spread")
                    .with("m", r.m)
                    .with("n", r.n)
                    .with("samples", r.count)
                    .with("mean", r.mean)
                    .with("stddev", r.stddev)
                    .with("stderr", r.stderr)
                    .with("target", r.target),
            );
        }
        if !rows.is_empty() {
            out.records
                .push(Record::new("trend").with("strictly_decreasing", strictly_decreasing(&rows)));
        }
        return Ok(out);
    }
    let m = required(cfg.layer(a.m, "m")?, "m")?;
    let n = required(cfg.layer(a.n, "n")?, "n")?;
    check_pair(m, n, 3)?;
    let eps = cfg.layer(a.eps.clone(), "eps")?.unwrap_or(EpsList(DEFAULT_EPS.to_vec()));
    out.param("m", m);
    out.param("n", n);
    out.param("eps", eps.to_string());
    let run = run_config(&a.sampling, ctx, &mut out)?;
    let values = sample_values(m, n, &Coherence, &run)?;
    let est = MonteCarloEstimate::from_values(&values)?;
    let target = avg_coherence(m, n)?;
    let r = Record::new("coherence").with("m", m).with("n", n);
    out.records.push(target_fields(estimate_fields(r, &est), &est, Some(&target)));
    tail_records("tail", m, n, &values, &eps.0, &mut out)?;
    Ok(out)
}

pub fn identities(a: &IdentitiesArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.config;
    let max_m = cfg.layer(a.max_m, "max-m")?.unwrap_or(DEFAULT_MAX);
    let max_n = cfg.layer(a.max_n, "max-n")?.unwrap_or(DEFAULT_MAX);
    let quadrature = cfg.flag(a.quadrature, "quadrature")?;
    let mut out = Outcome {
        chunk: DEFAULT_CHUNK,
        ..Outcome::default()
    };
    out.param("max_m", max_m);
    out.param("max_n", max_n);
    out.param("quadrature", quadrature);
    for r in sweep(max_m, max_n, max_n) {
        if !r.holds {
            out.violations.push(format!("{} fails at {:?}", r.name, r.parameters));
        }
        let params: Vec<String> = r.parameters.iter().map(|p| p.to_string()).collect();
        out.records.push(
            Record::new("identity")
                .with("name", r.name.as_str())
                .with("parameters", params.join(" "))
                .with("lhs", &r.lhs)
                .with("rhs", &r.rhs)
                .with("holds", r.holds),
        );
    }
    if quadrature {
        for q in quadrature_sweep()? {
            if !q.holds {
                out.violations
                    .push(format!("{} off by {} at m = {}, alpha = {}", q.name, q.relative_error, q.m, q.alpha));
            }
            out.records.push(
                Record::new("quadrature")
                    .with("name", q.name.as_str())
                    .with("m", q.m)
                    .with("k", q.k)
                    .with("alpha", q.alpha)
                    .with("quadrature", q.quadrature)
                    .with("error_estimate", q.error_estimate)
                    .with("closed_form", q.closed_form)
                    .with("relative_error", q.relative_error)
                    .with("tolerance", q.tolerance)
                    .with("holds", q.holds),
            );
        }
    }
    Ok(out)
}

pub fn entangle(a: &EntangleArgs, ctx: &Context) -> Result<Outcome, CliError> {
    let cfg = &ctx.config;
    let m = required(cfg.layer(a.m, "m")?, "m")?;
    let n = required(cfg.layer(a.n, "n")?, "n")?;
    check_pair(m, n, 3)?;
    let eps = cfg.layer(a.eps.clone(), "eps")?.unwrap_or(EpsList(DEFAULT_EPS.to_vec()));
    let mut out = Outcome::default();
    out.param("m", m);
    out.param("n", n);
    out.param("eps", eps.to_string());
    let run = run_config(&a.sampling, ctx, &mut out)?;
    // Relative entropy of entanglement and distillable entanglement coincide
    // on this class, so one sample serves both.
    let values = sample_values(m, n, &ClassXEntanglement, &run)?;
    let est = MonteCarloEstimate::from_values(&values)?;
    let target = avg_coherence(m, n)?;
    for measure in ["relative_entropy", "distillable"] {
        let r = Record::new("entanglement").with("measure", measure).with("m", m).with("n", n);
        out.records.push(target_fields(estimate_fields(r, &est), &est, Some(&target)));
    }
    tail_records("tail", m, n, &values, &eps.0, &mut out)?;
    Ok(out)
}
