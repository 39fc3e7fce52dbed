//! Numerical orbits `T̄ⁿf` and limit-cycle detection.
//!
//! Upper transition operators are sup-norm non-expansive, so for every
//! lag `p` the residual `‖T̄ⁿf − T̄ⁿ⁺ᵖf‖_∞` is non-increasing in `n`. The
//! detector watches these residuals for `p = 1..=max_period` and reports
//! the smallest lag whose residual stays below the tolerance. It never
//! reports divergence: an undetected limit is only "none within budget".

use std::collections::VecDeque;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{build_graph, communication_classes};
use crate::operator::UpperOperator;
use crate::state::{indicator, StateSet, StateSpace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct OrbitParams {
    pub tolerance: f64,
    pub burn_in: usize,
    pub max_iters: usize,
    pub max_period: usize,
    /// Keep every iterate, for CSV export.
    #[serde(default)]
    pub keep_trace: bool,
}

impl Default for OrbitParams {
    fn default() -> Self {
        Self { tolerance: 1e-9, burn_in: 200, max_iters: 5000, max_period: 64, keep_trace: false }
    }
}

impl OrbitParams {
    fn validate(&self) -> Result<()> {
        if self.max_period == 0 {
            return Err(Error::Precondition("max period must be at least 1".into()));
        }
        if self.tolerance.is_nan() || self.tolerance <= 0.0 {
            return Err(Error::Precondition("tolerance must be positive".into()));
        }
        Ok(())
    }

    /// Slack used when comparing numerically obtained limits.
    pub fn limit_slack(&self) -> f64 {
        (self.tolerance * 1e3).max(1e-12)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OrbitResult {
    pub detected_period: Option<usize>,
    /// First index of the run of below-tolerance residuals that confirmed
    /// the period.
    pub detected_at: Option<usize>,
    /// `ω_1, …, ω_p`, with `T̄ω_i ≈ ω_{i+1}` cyclically.
    pub limit_cycle: Vec<Vec<f64>>,
    pub converged: bool,
    pub residual: f64,
    pub iterations: usize,
    pub iterates_kept: Vec<Vec<f64>>,
    pub params: OrbitParams,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trace: Option<Vec<Vec<f64>>>,
}

impl OrbitResult {
    pub fn limit(&self) -> Option<&[f64]> {
        if self.converged {
            self.limit_cycle.first().map(Vec::as_slice)
        } else {
            None
        }
    }

    /// Trace as CSV: `iteration,<state>...`.
    pub fn trace_csv(&self, states: &StateSpace) -> Option<String> {
        let trace = self.trace.as_ref()?;
        let mut out = String::from("iteration");
        for l in states.labels() {
            out.push(',');
            out.push_str(l);
        }
        out.push('\n');
        for (i, row) in trace.iter().enumerate() {
            out.push_str(&i.to_string());
            for v in row {
                out.push(',');
                out.push_str(&format!("{v}"));
            }
            out.push('\n');
        }
        Some(out)
    }
}

/// Largest relative decrease of a residual over one window that still
/// counts as stalled.
const STALL_RATIO: f64 = 1e-3;

pub fn sup_distance(f: &[f64], g: &[f64]) -> f64 {
    f.iter().zip(g).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max)
}

pub fn iterate_orbit(op: &dyn UpperOperator, f: &[f64], params: &OrbitParams) -> Result<OrbitResult> {
    params.validate()?;
    op.states().check_len(f.len())?;
    if f.iter().any(|v| !v.is_finite()) {
        return Err(Error::Precondition("orbit start has non-finite entries".into()));
    }
    let lags = params.max_period;
    let tol = params.tolerance;

    // window[k] = x_{m-len+1+k}; holds up to `lags + 1` iterates.
    let mut window: VecDeque<Vec<f64>> = VecDeque::from([f.to_vec()]);
    let mut trace = params.keep_trace.then(|| vec![f.to_vec()]);
    let mut streak = vec![0usize; lags + 1];
    // residual history per lag, the last `lags + 1` values.
    let mut history: Vec<VecDeque<f64>> = vec![VecDeque::new(); lags + 1];

    let finish = |window: &VecDeque<Vec<f64>>, period: Option<usize>, at: Option<usize>, residual: f64, m: usize, trace: Option<Vec<Vec<f64>>>| {
        let cycle = match period {
            Some(p) => window.iter().skip(window.len() - p).cloned().collect(),
            None => Vec::new(),
        };
        OrbitResult {
            detected_period: period,
            detected_at: at,
            limit_cycle: cycle,
            converged: period == Some(1),
            residual,
            iterations: m,
            iterates_kept: window.iter().cloned().collect(),
            params: *params,
            trace,
        }
    };

    for m in 1..=params.max_iters {
        let next = op.upper(window.back().expect("non-empty window"));
        if let Some(t) = trace.as_mut() {
            t.push(next.clone());
        }
        if next == *window.back().unwrap() {
            window.push_back(next);
            if window.len() > lags + 1 {
                window.pop_front();
            }
            return Ok(finish(&window, Some(1), Some(m - 1), 0.0, m, trace));
        }
        window.push_back(next);
        if window.len() > lags + 1 {
            window.pop_front();
        }
        let last = window.len() - 1;
        for p in 1..=lags.min(last) {
            let r = sup_distance(&window[last - p], &window[last]);
            let h = &mut history[p];
            h.push_back(r);
            if h.len() > lags + 1 {
                h.pop_front();
            }
            if m - p >= params.burn_in && r <= tol {
                streak[p] += 1;
            } else {
                streak[p] = 0;
            }
        }
        let Some(p) = (1..=lags).find(|&p| streak[p] >= lags) else {
            continue;
        };
        // A smaller lag whose residual is still shrinking may be converging
        // slowly while lag `p` already looks periodic; wait for it. Only a
        // residual stuck clearly above the tolerance rules lag `q` out.
        let settled = (1..p).all(|q| {
            let h = &history[q];
            let (front, back) = (*h.front().unwrap(), *h.back().unwrap());
            h.len() > lags && back > tol && back >= front * (1.0 - STALL_RATIO)
        });
        if settled {
            let residual = *history[p].back().unwrap();
            let at = m - p - (streak[p] - 1);
            return Ok(finish(&window, Some(p), Some(at), residual, m, trace));
        }
    }
    let residual = history[1].back().copied().unwrap_or(0.0);
    Ok(finish(&window, None, None, residual, params.max_iters, trace))
}

/// Limit of the orbit on a regular maximal class. The limit is constant
/// there, at least `min f|_C`, and strictly above it unless `f|_C` is
/// constant; a violation is reported as an internal error.
pub fn orbit_limit_on_regular_class(
    op: &dyn UpperOperator,
    class: &StateSet,
    f: &[f64],
    params: &OrbitParams,
) -> Result<f64> {
    let classes = communication_classes(&build_graph(op)?);
    if !classes.iter().any(|c| c.members == *class && c.is_regular()) {
        return Err(Error::Precondition(format!(
            "{:?} is not a regular maximal class",
            op.states().labels_of(class)
        )));
    }
    let orbit = iterate_orbit(op, f, params)?;
    let Some(limit) = orbit.limit() else {
        return Err(Error::Internal(format!(
            "orbit did not settle within {} iterations on a regular class",
            params.max_iters
        )));
    };
    let on_class: Vec<f64> = class.iter().map(|&x| limit[x]).collect();
    let hi = on_class.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let lo = on_class.iter().copied().fold(f64::INFINITY, f64::min);
    let slack = params.limit_slack();
    if hi - lo > slack {
        return Err(Error::Internal(format!("limit on a regular class is not constant (spread {})", hi - lo)));
    }
    let phi = on_class.iter().sum::<f64>() / on_class.len() as f64;
    let f_min = class.iter().map(|&x| f[x]).fold(f64::INFINITY, f64::min);
    let f_max = class.iter().map(|&x| f[x]).fold(f64::NEG_INFINITY, f64::max);
    if phi < f_min - slack {
        return Err(Error::Internal(format!("limit {phi} below min f = {f_min}")));
    }
    if f_max > f_min && phi <= f_min {
        return Err(Error::Internal(format!("limit {phi} not above min f = {f_min} for non-constant f")));
    }
    Ok(phi)
}

/// Every state indicator, then `random` functions with entries in `[0, 1)`.
pub fn default_suite(states: &StateSpace, random: usize, seed: u64) -> Vec<(String, Vec<f64>)> {
    let n = states.len();
    let mut suite: Vec<(String, Vec<f64>)> = (0..n)
        .map(|x| (format!("1_{}", states.label(x)), indicator(n, &StateSet::from([x]))))
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for k in 0..random {
        suite.push((format!("random:{seed}#{k}"), (0..n).map(|_| rng.gen::<f64>()).collect()));
    }
    suite
}

/// Parses an orbit start: `0,1,0` or `[0,1,0]`, an indicator `1_b` or
/// `indicator:b`, or `random:<seed>`.
pub fn parse_function_spec(spec: &str, states: &StateSpace) -> Result<Vec<f64>> {
    let s = spec.trim();
    let bad = || Error::FunctionSpec(spec.to_string());
    let n = states.len();
    if let Some(seed) = s.strip_prefix("random:") {
        let seed: u64 = seed.trim().parse().map_err(|_| bad())?;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        return Ok((0..n).map(|_| rng.gen::<f64>()).collect());
    }
    if let Some(label) = s.strip_prefix("indicator:").or_else(|| s.strip_prefix("1_")) {
        let x = states.index_of(label.trim()).ok_or_else(bad)?;
        return Ok(indicator(n, &StateSet::from([x])));
    }
    let inner = s.strip_prefix('[').and_then(|t| t.strip_suffix(']')).unwrap_or(s);
    let values: Vec<f64> = inner
        .split(',')
        .map(|v| v.trim().parse::<f64>().map_err(|_| bad()))
        .collect::<Result<_>>()?;
    if values.iter().any(|v| !v.is_finite()) {
        return Err(bad());
    }
    states.check_len(values.len())?;
    Ok(values)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DiscrepancyKind {
    /// Verdict yes, but the orbit cycled with period ≥ 2.
    CycleUnderYes,
    /// Verdict yes, but no period was found within budget.
    UndetectedUnderYes,
    /// Verdict no, but every suite orbit settled. Soft: a finite suite
    /// cannot witness every start function.
    NoWitnessUnderNo,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Discrepancy {
    pub kind: DiscrepancyKind,
    pub function: Option<String>,
    pub soft: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SuiteRun {
    pub function: String,
    pub period: Option<usize>,
    pub iterations: usize,
    pub residual: f64,
    pub limit: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub verdict: crate::decomposition::Convergence,
    pub runs: Vec<SuiteRun>,
    pub discrepancies: Vec<Discrepancy>,
    pub notes: Vec<String>,
}

impl OracleReport {
    /// No hard discrepancy.
    pub fn agrees(&self) -> bool {
        self.discrepancies.iter().all(|d| d.soft)
    }

    pub fn has_cycle(&self) -> bool {
        self.runs.iter().any(|r| r.period.is_some_and(|p| p >= 2))
    }
}

/// Runs every suite orbit and checks it against the symbolic verdict.
pub fn oracle_compare(
    op: &dyn UpperOperator,
    verdict: &crate::decomposition::Verdict,
    suite: &[(String, Vec<f64>)],
    params: &OrbitParams,
) -> Result<OracleReport> {
    use crate::decomposition::Convergence;
    if suite.is_empty() {
        return Err(Error::Precondition("empty function suite".into()));
    }
    let mut runs = Vec::with_capacity(suite.len());
    let mut discrepancies = Vec::new();
    for (name, f) in suite {
        let orbit = iterate_orbit(op, f, params)?;
        log::debug!("orbit {name}: period {:?} after {} iterations", orbit.detected_period, orbit.iterations);
        if verdict.convergent == Convergence::Yes {
            match orbit.detected_period {
                Some(1) => {}
                Some(p) => discrepancies.push(Discrepancy {
                    kind: DiscrepancyKind::CycleUnderYes,
                    function: Some(name.clone()),
                    soft: false,
                    detail: format!("orbit has period {p}"),
                }),
                None => discrepancies.push(Discrepancy {
                    kind: DiscrepancyKind::UndetectedUnderYes,
                    function: Some(name.clone()),
                    soft: false,
                    detail: format!("no period within {} iterations", params.max_iters),
                }),
            }
        }
        runs.push(SuiteRun {
            function: name.clone(),
            period: orbit.detected_period,
            iterations: orbit.iterations,
            residual: orbit.residual,
            limit: orbit.limit().map(<[f64]>::to_vec),
        });
    }
    let mut notes = Vec::new();
    let cycled = runs.iter().any(|r| r.period.is_some_and(|p| p >= 2));
    match verdict.convergent {
        Convergence::No if !cycled => discrepancies.push(Discrepancy {
            kind: DiscrepancyKind::NoWitnessUnderNo,
            function: None,
            soft: true,
            detail: format!("none of the {} suite orbits cycles", suite.len()),
        }),
        Convergence::Inconclusive => {
            let unsettled = runs.iter().filter(|r| r.period.is_none()).count();
            notes.push(if cycled {
                "a suite orbit cycles, so the operator is not convergent".to_string()
            } else if unsettled == 0 {
                "every suite orbit settled; the level condition fails yet the operator may still be convergent"
                    .to_string()
            } else {
                format!("{unsettled} of {} suite orbits found no period within {} iterations", runs.len(), params.max_iters)
            });
        }
        _ => {}
    }
    Ok(OracleReport { verdict: verdict.convergent, runs, discrepancies, notes })
}
