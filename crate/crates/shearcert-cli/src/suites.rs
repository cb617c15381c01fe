use std::collections::BTreeMap;

use rand::seq::IndexedRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};
use shearcert::dyadic::Exact;
use shearcert::independence::{
    admissibility_check, classify_combination, classify_element, frame_bound_sequence, gram,
    oversampling_containment, prefix_nesting, required_cascade_level, verify_min_support_lemma,
    verify_prop33, GramReport, QuadratureSettings, ShearletFamily, SlopeVerdict, Verdict,
    CONE_MARGIN, TRIVIAL_SLOPE,
};
use shearcert::mra1d::{check_hypotheses, daubechies_filter, m0_positive_on_interval, Mra};
use shearcert::shearlet2d::{cone_slope, Cone, ShearletIndex, ShearletSystem};
use shearcert::{Error, Result};

use crate::config::RunConfig;

/// Aggregate result of a command; decides the exit code.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Pass,
    Fail,
    Inconclusive,
}

/// Status of one check line. `Info` lines are reported but not counted.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Inconclusive,
    Info,
}

impl Status {
    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Inconclusive => "INCONCLUSIVE",
            Status::Info => "INFO",
        }
    }

    fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn from_verdict(v: Verdict) -> Self {
        match v {
            Verdict::Independent => Status::Pass,
            Verdict::Dependent => Status::Fail,
            Verdict::Inconclusive => Status::Inconclusive,
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    fn new(name: impl Into<String>, status: Status, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            status,
            detail: detail.into(),
        }
    }

    pub fn line(&self) -> String {
        format!("{:<12} {}: {}", self.status.label(), self.name, self.detail)
    }
}

/// Report written for every command.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub config: RunConfig,
    pub outcome: Outcome,
    pub checks: Vec<Check>,
    pub details: Value,
}

impl Report {
    pub fn new(command: &str, config: &RunConfig, checks: Vec<Check>, details: Value) -> Self {
        let counted = checks.iter().map(|c| c.status);
        let outcome = if counted.clone().any(|s| s == Status::Fail) {
            Outcome::Fail
        } else if counted.into_iter().any(|s| s == Status::Inconclusive) {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        };
        Report {
            command: command.into(),
            config: config.clone(),
            outcome,
            checks,
            details,
        }
    }
}

fn sci(x: f64) -> String {
    format!("{x:.3e}")
}

pub fn filters(cfg: &RunConfig, orders: &[usize]) -> Result<Report> {
    let mut checks = Vec::new();
    let mut details = Vec::new();
    for &n in orders {
        let f = daubechies_filter(n)?;
        let sum_err = (f.sum() - 2.0).abs();
        let qmf = f.qmf_residual();
        checks.push(Check::new(
            format!("filter N={n}"),
            Status::from_bool(qmf < 1e-12 && sum_err < 1e-12),
            format!("qmf residual {} sum error {}", sci(qmf), sci(sum_err)),
        ));
        details.push(json!({
            "order": n,
            "mask": f.mask(),
            "sum": f.sum(),
            "qmf_residual": qmf,
            "highpass": f.highpass(),
        }));
    }
    Ok(Report::new("filters", cfg, checks, Value::Array(details)))
}

pub fn cascade_summary(cfg: &RunConfig, mra: &Mra) -> Report {
    let norm = |v: &[f64]| v.iter().map(|x| x * x).sum::<f64>() * (-(mra.level() as f64)).exp2();
    let phi_norm = norm(mra.phi.values());
    let psi_norm = norm(mra.psi.values());
    let checks = vec![
        Check::new(
            "phi norm",
            Status::Info,
            format!("{} at level {}", sci(phi_norm), mra.level()),
        ),
        Check::new("psi norm", Status::Info, sci(psi_norm)),
    ];
    let details = json!({
        "order": mra.filter.order(),
        "level": mra.level(),
        "phi_support": [mra.phi.support_min(), mra.phi.support_max()],
        "psi_support": [mra.psi.support_min(), mra.psi.support_max()],
        "phi_integral": mra.phi.riemann_sum(),
        "phi_norm_sq": phi_norm,
        "psi_norm_sq": psi_norm,
    });
    Report::new("cascade", cfg, checks, details)
}

pub fn system(cfg: &RunConfig) -> Result<Report> {
    let spec = cfg.spec()?;
    let indices = shearcert::shearlet2d::enumerate(&spec);
    let mut counts: BTreeMap<String, usize> = BTreeMap::new();
    for idx in &indices {
        *counts
            .entry(format!("{} j={}", idx.cone.name(), idx.j))
            .or_default() += 1;
    }
    let adm = admissibility_check(
        &spec,
        cfg.admissibility.desk_scale,
        cfg.admissibility.window,
        QuadratureSettings {
            tolerance: cfg.tolerance,
            ..QuadratureSettings::default()
        },
    )?;
    let mut checks = vec![Check::new(
        "odd denominators",
        Status::from_bool(adm.format_admissible),
        format!("c = ({}, {})", spec.c.0, spec.c.1),
    )];
    for (axis, a) in adm.axes.iter().enumerate() {
        checks.push(Check::new(
            format!("1D generator Gram, axis {}", axis + 1),
            Status::from_verdict(a.gram.verdict),
            format!(
                "{} functions, relative sigma_min {}",
                a.gram.size(),
                sci(a.gram.relative_sigma_min)
            ),
        ));
    }
    checks.push(Check::new(
        "elements",
        Status::Info,
        indices.len().to_string(),
    ));
    let details = json!({
        "count": indices.len(),
        "counts": counts,
        "indices": indices.iter().map(|i| i.to_string()).collect::<Vec<_>>(),
        "admissibility": adm,
    });
    Ok(Report::new("system", cfg, checks, details))
}

/// Shearlet Gram on the configured system, optionally with one element repeated.
pub fn gram_suite(cfg: &RunConfig, inject_duplicate: bool) -> Result<(Report, GramReport)> {
    let spec = cfg.spec()?;
    let system = ShearletSystem::build(spec.clone(), cfg.gram_cascade_level(spec.j_max))?;
    let mut indices = system.enumerate();
    if indices.is_empty() {
        return Err(Error::EmptySelection);
    }
    let duplicate = inject_duplicate.then(|| {
        let d = indices[indices.len() / 2];
        indices.push(d);
        d
    });
    let family = ShearletFamily::new(&system, indices);
    let (l0, l1) = cfg.levels();
    let report = gram(&family, l0, l1, cfg.tolerance)?;
    let mut checks = vec![Check::new(
        format!("gram j_max={}", spec.j_max),
        Status::from_verdict(report.verdict),
        format!(
            "{} elements, relative sigma_min {}, tail {}, sigma_min {}",
            report.size(),
            sci(report.relative_sigma_min),
            sci(report.sigma_tail),
            sci(report.sigma_min)
        ),
    )];
    for (level, delta) in &report.convergence {
        checks.push(Check::new(
            format!("entry delta at level {level}"),
            Status::Info,
            sci(*delta),
        ));
    }
    let details = json!({
        "cascade_level": system.cascade_level(),
        "duplicate": duplicate.map(|d| d.to_string()),
        "report": &report,
    });
    Ok((Report::new("gram", cfg, checks, details), report))
}

pub fn lemma31(cfg: &RunConfig) -> Result<Report> {
    let mut checks = Vec::new();
    let mut details = Vec::new();
    for &n in &cfg.lemma31.orders {
        let filter = daubechies_filter(n)?;
        for &j in &cfg.lemma31.scales {
            let r = verify_min_support_lemma(&filter, j, cfg.lemma31.trials, cfg.seed)?;
            checks.push(Check::new(
                format!("lemma31 N={n} J={j}"),
                Status::from_bool(r.passed),
                format!(
                    "worst distance {} (limit {}) over {} draws, {} redraws",
                    sci(r.worst_distance),
                    sci(r.tolerance),
                    r.trials,
                    r.redraws
                ),
            ));
            details.push(r);
        }
    }
    Ok(Report::new(
        "verify lemma31",
        cfg,
        checks,
        serde_json::to_value(details)?,
    ))
}

pub fn prop33(cfg: &RunConfig) -> Result<Report> {
    let filter = daubechies_filter(cfg.prop33.order)?;
    let t = cfg.prop33_offsets()?;
    let mut checks = Vec::new();
    let mut details = Vec::new();
    for &j in &cfg.prop33.scales {
        let name = format!("prop33 N={} J={j}", cfg.prop33.order);
        match verify_prop33(&filter, j, &t, cfg.prop33.window, cfg.prop33_settings()) {
            Ok(r) => {
                checks.push(Check::new(
                    name,
                    Status::from_verdict(r.verdict),
                    format!(
                        "{} functions, relative sigma_min {}, tail {}",
                        r.size(),
                        sci(r.relative_sigma_min),
                        sci(r.sigma_tail)
                    ),
                ));
                details.push(json!({ "scale": j, "report": r }));
            }
            Err(e @ Error::HypothesisFailed { .. }) => {
                checks.push(Check::new(
                    name,
                    Status::Fail,
                    format!("hypothesis_failed: {e}"),
                ));
                details.push(json!({ "scale": j, "hypothesis_failed": e.to_string() }));
            }
            Err(e) => return Err(e),
        }
    }
    Ok(Report::new(
        "verify prop33",
        cfg,
        checks,
        Value::Array(details),
    ))
}

fn expected_verdict(idx: &ShearletIndex) -> SlopeVerdict {
    match (idx.cone, idx.k) {
        (Cone::Phi, _) | (_, 0) => SlopeVerdict::Unsheared,
        (Cone::Psi, _) => SlopeVerdict::Cone1,
        (Cone::PsiTilde, _) => SlopeVerdict::Cone2,
    }
}

#[derive(Serialize)]
struct ClassSummary {
    cone: Cone,
    j: u32,
    k: i64,
    elements: usize,
    correct: usize,
    exact_slope: Option<Exact>,
    slope_range: Option<(f64, f64)>,
}

pub fn cones(cfg: &RunConfig) -> Result<Report> {
    let j_max = cfg.cones.j_max;
    let spec = cfg.spec_with_j_max(j_max)?;
    let level = cfg.cascade_level.unwrap_or(required_cascade_level(j_max));
    let system = ShearletSystem::build(spec, level)?;
    let indices = system.enumerate();
    let results: Vec<_> = indices
        .par_iter()
        .map(|idx| classify_element(&system, idx))
        .collect::<Result<_>>()?;
    let mut classes: BTreeMap<(Cone, u32, i64), ClassSummary> = BTreeMap::new();
    let mut misclassified = Vec::new();
    let mut slope_mismatches = Vec::new();
    for (idx, res) in indices.iter().zip(&results) {
        let ok = res.verdict == expected_verdict(idx);
        if !ok {
            misclassified.push(format!("{idx}: {:?} {:?}", res.verdict, res.slopes));
        }
        let exact = cone_slope(idx);
        let polygon = system.support_polygon(idx).shear_slope().map(|s| s.abs());
        let bound_ok = match (&exact, idx.cone) {
            (Some(s), Cone::Psi) => *s <= Exact::one() && s.is_positive(),
            (Some(s), Cone::PsiTilde) => *s > Exact::one(),
            (None, _) => true,
            (Some(_), Cone::Phi) => false,
        };
        if polygon != exact || !bound_ok {
            slope_mismatches.push(idx.to_string());
        }
        let sheared = res
            .slopes
            .iter()
            .copied()
            .filter(|s| s.abs() > TRIVIAL_SLOPE);
        let range = sheared.fold(None, |acc: Option<(f64, f64)>, s| {
            Some(acc.map_or((s, s), |(a, b)| (a.min(s), b.max(s))))
        });
        let entry = classes
            .entry((idx.cone, idx.j, idx.k))
            .or_insert_with(|| ClassSummary {
                cone: idx.cone,
                j: idx.j,
                k: idx.k,
                elements: 0,
                correct: 0,
                exact_slope: exact.clone(),
                slope_range: None,
            });
        entry.elements += 1;
        entry.correct += ok as usize;
        entry.slope_range = match (entry.slope_range, range) {
            (Some((a, b)), Some((c, d))) => Some((a.min(c), b.max(d))),
            (x, y) => x.or(y),
        };
    }
    let correct = indices.len() - misclassified.len();
    let mut checks = vec![
        Check::new(
            format!("cone classification j<={j_max}"),
            Status::from_bool(misclassified.is_empty()),
            format!("{correct}/{} elements", indices.len()),
        ),
        Check::new(
            "exact edge slopes",
            Status::from_bool(slope_mismatches.is_empty()),
            format!("{} mismatches", slope_mismatches.len()),
        ),
    ];
    let psi_sheared: Vec<ShearletIndex> = indices
        .iter()
        .copied()
        .filter(|i| i.cone == Cone::Psi && i.k != 0)
        .collect();
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut combos = Vec::new();
    let mut combo_failures = 0;
    if psi_sheared.len() >= 3 {
        for _ in 0..cfg.cones.combinations {
            let terms: Vec<(f64, ShearletIndex)> = psi_sheared
                .choose_multiple(&mut rng, 3)
                .map(|&i| {
                    let a: f64 = rng.random_range(0.5..1.5);
                    (if rng.random_bool(0.5) { a } else { -a }, i)
                })
                .collect();
            let c = classify_combination(&system, &terms)?;
            let ok = c
                .slope_at_minimum
                .is_some_and(|s| s.abs() > TRIVIAL_SLOPE && s.abs() <= 1.0 + CONE_MARGIN);
            combo_failures += (!ok) as usize;
            combos.push(c);
        }
        checks.push(Check::new(
            "PSI combinations",
            Status::from_bool(combo_failures == 0),
            format!(
                "{}/{} with a cone-1 slope at the support minimum",
                combos.len() - combo_failures,
                combos.len()
            ),
        ));
    }
    let details = json!({
        "cascade_level": level,
        "elements": indices.len(),
        "misclassified": misclassified,
        "slope_mismatches": slope_mismatches,
        "classes": classes.into_values().collect::<Vec<_>>(),
        "combinations": combos,
    });
    Ok(Report::new("verify cones", cfg, checks, details))
}

pub fn hypotheses(cfg: &RunConfig) -> Result<Report> {
    let h = &cfg.hypotheses;
    let mut checks = Vec::new();
    let mut details = Vec::new();
    for &n in &h.orders {
        let mra = Mra::daubechies(n, h.level)?;
        let r = check_hypotheses(n, &mra.phi, &mra.psi, h.alpha, h.gamma, h.xi_max)?;
        checks.push(Check::new(
            format!("essential inf |phi^|^2 N={n}"),
            Status::from_bool(r.inf_phi.positive),
            format!(
                "{} at xi={}{}",
                sci(r.inf_phi.min_value),
                r.inf_phi.min_at,
                r.inf_phi
                    .warning
                    .as_deref()
                    .map(|w| format!(" ({w})"))
                    .unwrap_or_default()
            ),
        ));
        let beta_status = match (&r.beta, n) {
            (Some(_), _) => Status::Pass,
            (None, 1) => Status::Info,
            (None, _) => Status::Fail,
        };
        checks.push(Check::new(
            format!("beta witness N={n}"),
            beta_status,
            r.beta
                .as_ref()
                .map(|b| format!("beta={} min |psi^|={}", b.beta, sci(b.min_modulus)))
                .unwrap_or_else(|| "none".into()),
        ));
        for (label, d) in [("phi", &r.decay_scaling), ("psi", &r.decay_wavelet)] {
            let status = match (d.holds, h.require_decay) {
                (true, _) => Status::Pass,
                (false, true) => Status::Fail,
                (false, false) => Status::Info,
            };
            let detail = match d.first_violation {
                Some(xi) => format!(
                    "bound with K={} fails at xi={xi} (alpha={}, gamma={})",
                    sci(d.constant),
                    h.alpha,
                    h.gamma
                ),
                None => format!("holds with K={} on {} points", sci(d.constant), d.points),
            };
            checks.push(Check::new(format!("decay {label} N={n}"), status, detail));
        }
        details.push(serde_json::to_value(&r)?);
    }
    for &n in &h.m0_orders {
        let (ok, min) = m0_positive_on_interval(n as u32);
        checks.push(Check::new(
            format!("m0 positive on (-1,1) N={n}"),
            Status::from_bool(ok),
            format!("min |m0| {}", sci(min)),
        ));
    }
    Ok(Report::new(
        "verify hypotheses",
        cfg,
        checks,
        Value::Array(details),
    ))
}

pub fn frame_bounds(cfg: &RunConfig, sizes: &[usize]) -> Result<Report> {
    let spec = cfg.spec()?;
    let system = ShearletSystem::build(spec.clone(), cfg.gram_cascade_level(spec.j_max))?;
    let mut indices = system.enumerate();
    let largest = sizes.iter().copied().max().ok_or(Error::EmptySelection)?;
    if indices.len() < largest {
        return Err(Error::InvalidArgument(format!(
            "system has {} elements, fewer than {largest}",
            indices.len()
        )));
    }
    indices.truncate(largest);
    let family = ShearletFamily::new(&system, indices);
    let (l0, l1) = cfg.levels();
    let r = frame_bound_sequence(&family, &prefix_nesting(sizes), l0, l1, cfg.tolerance)?;
    let checks = vec![
        Check::new(
            "nonincreasing",
            Status::from_bool(r.nonincreasing),
            r.bounds
                .iter()
                .map(|b| sci(*b))
                .collect::<Vec<_>>()
                .join(" "),
        ),
        Check::new(
            "positive",
            Status::from_bool(r.infimum > 0.0),
            format!("inf {}", sci(r.infimum)),
        ),
    ];
    Ok(Report::new(
        "frame-bounds",
        cfg,
        checks,
        serde_json::to_value(&r)?,
    ))
}

pub fn oversampling(cfg: &RunConfig, factors: &[u32]) -> Result<Report> {
    let spec = cfg.spec()?;
    let mut checks = Vec::new();
    let mut details = Vec::new();
    for &n in factors {
        let r = oversampling_containment(&spec, n)?;
        let ok = r.contained && (n == 1 && r.coarse_count == r.fine_count || n >= 2 && r.strict);
        checks.push(Check::new(
            format!("SH(c) in SH(c/{n})"),
            Status::from_bool(ok),
            format!(
                "{} -> {} elements, witness {}",
                r.coarse_count,
                r.fine_count,
                r.strictness_witness
                    .map(|w| w.to_string())
                    .unwrap_or_else(|| "none".into())
            ),
        ));
        checks.push(Check::new(
            format!("consequence n={n}"),
            Status::Info,
            r.consequence.clone(),
        ));
        details.push(r);
    }
    Ok(Report::new(
        "oversampling",
        cfg,
        checks,
        serde_json::to_value(details)?,
    ))
}
