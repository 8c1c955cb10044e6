//! Corpus files and the invariant audit run over them.
//!
//! A corpus is a JSON array of [`CorpusEntry`]. Auditing an entry enumerates its solutions
//! in the certified window and checks root geometry, logarithmic-curve identities and every
//! count or size bound whose preconditions are certified.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Deserializer, Serialize};

use crate::bounds::{bound_report, BoundContext, BoundValue};
use crate::error::{Error, Result};
use crate::forms::{parse_form, BinaryForm, Irreducibility};
use crate::logcurve::{origin_norm_applies, phi_norm_lower, LogCurve};
use crate::numeric::{int_string, parse_rational, Interval, Tri};
use crate::roots::{derivative_bounds, derivative_product, imag_lower_bound, separation_bound, RootSystem};
use crate::solver::{self, EnumerateOptions, Mode, SizeClass, Solution};
use crate::Config;

pub const DEFAULT_EPSILON: &str = "1/100";

fn int_or_string<'de, D: Deserializer<'de>>(d: D) -> std::result::Result<BigInt, D::Error> {
    #[derive(Deserialize)]
    #[serde(untagged)]
    enum Raw {
        Int(i64),
        Text(String),
    }
    match Raw::deserialize(d)? {
        Raw::Int(v) => Ok(v.into()),
        Raw::Text(s) => s.trim().parse().map_err(serde::de::Error::custom),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusEntry {
    pub form: String,
    #[serde(deserialize_with = "int_or_string", serialize_with = "int_string::serialize")]
    pub m: BigInt,
    pub mode: Mode,
    pub y_max: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub expected_count: Option<usize>,
    /// `ε` for the count bounds, as a decimal or fraction; defaults to [`DEFAULT_EPSILON`].
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<String>,
    #[serde(default)]
    pub notes: String,
}

impl CorpusEntry {
    pub fn binary_form(&self) -> Result<BinaryForm> {
        parse_form(&self.form)
    }

    pub fn epsilon(&self) -> Result<BigRational> {
        let text = self.epsilon.as_deref().unwrap_or(DEFAULT_EPSILON);
        parse_rational(text).ok_or_else(|| Error::InvalidArgument(format!("epsilon {text:?} is not a rational")))
    }

    /// A pinned count needs a provenance note; `m` must be positive.
    pub fn validate(&self) -> Result<()> {
        self.binary_form()?;
        self.epsilon()?;
        if !self.m.is_positive() {
            return Err(Error::InvalidArgument(format!("m must be positive, got {}", self.m)));
        }
        if self.expected_count.is_some() && self.notes.trim().is_empty() {
            return Err(Error::InvalidArgument(format!("{}: expected_count without a provenance note", self.form)));
        }
        Ok(())
    }
}

/// Reads and validates a corpus file.
pub fn parse_corpus(text: &str) -> Result<Vec<CorpusEntry>> {
    let entries: Vec<CorpusEntry> =
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("corpus: {e}")))?;
    entries.iter().try_for_each(CorpusEntry::validate)?;
    Ok(entries)
}

/// The corpus shipped with the crate.
pub fn builtin_corpus() -> Vec<CorpusEntry> {
    parse_corpus(include_str!("../data/corpus.json")).expect("shipped corpus is valid")
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "FAIL",
            Status::Skip => "skip",
        })
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

    /// `Pass` only when certified; an undecided comparison is a failure to certify.
    fn certified(name: impl Into<String>, t: Tri, detail: impl Into<String>) -> Self {
        let status = if t == Tri::True { Status::Pass } else { Status::Fail };
        Check::new(name, status, detail)
    }

    fn bool(name: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        Check::new(name, if ok { Status::Pass } else { Status::Fail }, detail)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct EntryAudit {
    pub form: String,
    #[serde(with = "int_string")]
    pub m: BigInt,
    pub mode: Mode,
    pub y_max: u64,
    pub count: usize,
    pub checks: Vec<Check>,
}

impl EntryAudit {
    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| c.status == Status::Fail)
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct AuditReport {
    pub entries: Vec<EntryAudit>,
    pub passed: usize,
    pub failed: usize,
    pub skipped: usize,
    /// Entries that could not be audited at all.
    pub errors: Vec<String>,
}

impl AuditReport {
    pub fn ok(&self) -> bool {
        self.failed == 0 && self.errors.is_empty()
    }

    pub fn checks_named<'a>(&'a self, prefix: &'a str) -> impl Iterator<Item = &'a Check> + 'a {
        self.entries
            .iter()
            .flat_map(|e| e.checks.iter())
            .filter(move |c| c.name.starts_with(prefix))
    }
}

/// Audits every entry in parallel.
pub fn audit_corpus(entries: &[CorpusEntry], cfg: &Config, tolerance: f64) -> AuditReport {
    let results: Vec<std::result::Result<EntryAudit, String>> = entries
        .par_iter()
        .map(|e| audit_entry(e, cfg, tolerance).map_err(|err| format!("{} (m = {}): {err}", e.form, e.m)))
        .collect();
    let mut report = AuditReport {
        entries: Vec::new(),
        passed: 0,
        failed: 0,
        skipped: 0,
        errors: Vec::new(),
    };
    for r in results {
        match r {
            Ok(a) => {
                for c in &a.checks {
                    match c.status {
                        Status::Pass => report.passed += 1,
                        Status::Fail => report.failed += 1,
                        Status::Skip => report.skipped += 1,
                    }
                }
                report.entries.push(a);
            }
            Err(e) => report.errors.push(e),
        }
    }
    report
}

fn y_interval(y: &BigInt, p: usize) -> Interval {
    Interval::from_int(&y.abs(), p)
}

/// Number of solutions that may satisfy `y ≥ t`.
fn count_possibly_at_least(sols: &[&Solution], t: &Interval) -> usize {
    sols.iter().filter(|s| y_interval(&s.y, t.prec()).ge(t) != Tri::False).count()
}

fn cap_check(id: &str, count: usize, floor: &Option<BigInt>, what: &str) -> Check {
    match floor {
        Some(b) => Check::bool(
            format!("bound:{id}"),
            BigInt::from(count) <= *b,
            format!("{count} {what} vs bound {b}"),
        ),
        None => Check::new(format!("bound:{id}"), Status::Skip, "no finite bound"),
    }
}

fn root_geometry(form: &BinaryForm, rs: &RootSystem, mahler: &Interval, irreducible: bool, tol: f64) -> Result<Vec<Check>> {
    let n = rs.n();
    let mut checks = Vec::new();
    let sep = separation_bound(n, mahler);
    let mut t = Tri::True;
    for i in 0..n {
        for j in i + 1..n {
            t = t.and(rs.distance(i, j).ge(&sep));
        }
    }
    checks.push(Check::certified("root_separation", t, format!("floor {:.6e}", sep.mid_f64())));

    let floor = imag_lower_bound(n, mahler);
    let nonreal: Vec<usize> = (0..n).filter(|&k| !rs.is_real(k)).collect();
    if nonreal.is_empty() {
        checks.push(Check::new("imaginary_floor", Status::Skip, "all roots real"));
    } else {
        let t = nonreal.iter().fold(Tri::True, |acc, &k| acc.and(rs.root(k).im.abs().ge(&floor)));
        checks.push(Check::certified("imaginary_floor", t, format!("floor {:.6e}", floor.mid_f64())));
    }

    let mut t = Tri::True;
    for k in 0..n {
        t = t.and(derivative_bounds(form, rs, mahler, irreducible, k)?.holds());
    }
    let detail = if irreducible { "two-sided" } else { "upper side only" };
    checks.push(Check::certified("derivative_bounds", t, detail));

    let (prod, target) = derivative_product(form, rs)?;
    let rel = prod.sub(&target).abs().div(&target).hi_f64();
    checks.push(Check::bool(
        "derivative_product",
        rel <= tol,
        format!("relative gap {rel:.3e}"),
    ));
    Ok(checks)
}

/// `‖Φ‖` floors for every solution other than the norm-minimizing one.
fn norm_floor_check(name: &str, lc: &LogCurve, sols: &[&Solution], floor: &Interval) -> Result<Check> {
    let mut norms = Vec::new();
    for s in sols {
        if s.value.is_zero() {
            continue;
        }
        norms.push((lc.phi(&s.x, &s.y)?.norm, s));
    }
    if norms.len() < 2 {
        return Ok(Check::new(name, Status::Skip, "fewer than two solutions"));
    }
    let min_at = norms
        .iter()
        .enumerate()
        .min_by(|a, b| a.1 .0.mid_f64().total_cmp(&b.1 .0.mid_f64()))
        .map(|(i, _)| i)
        .expect("nonempty");
    let mut t = Tri::True;
    let mut worst: Option<(f64, &Solution)> = None;
    for (i, (nv, s)) in norms.iter().enumerate() {
        if i == min_at {
            continue;
        }
        let c = nv.ge(floor);
        if c != Tri::True && worst.is_none_or(|w| nv.mid_f64() < w.0) {
            worst = Some((nv.mid_f64(), s));
        }
        t = t.and(c);
    }
    let detail = match worst {
        Some((v, s)) => format!("floor {:.6}; ‖Φ({}, {})‖ = {v:.6}", floor.mid_f64(), s.x, s.y),
        None => format!("floor {:.6} over {} solutions", floor.mid_f64(), norms.len() - 1),
    };
    Ok(Check::certified(name, t, detail))
}

/// Full audit of one corpus entry.
pub fn audit_entry(entry: &CorpusEntry, cfg: &Config, tol: f64) -> Result<EntryAudit> {
    entry.validate()?;
    let form = entry.binary_form()?;
    let m = &entry.m;
    let ineq = solver::enumerate(&form, m, entry.y_max, Mode::Inequality, EnumerateOptions::default(), cfg)?;
    let eq: Vec<&Solution> = ineq.solutions.iter().filter(|s| s.value.abs() == *m).collect();
    let all: Vec<&Solution> = ineq.solutions.iter().collect();
    let primary = match entry.mode {
        Mode::Inequality => all.len(),
        Mode::Equation => eq.len(),
    };
    let mut checks = Vec::new();
    if let Some(want) = entry.expected_count {
        checks.push(Check::bool("expected_count", primary == want, format!("enumerated {primary}, pinned {want}")));
    }
    let mut audit = EntryAudit {
        form: entry.form.clone(),
        m: m.clone(),
        mode: entry.mode,
        y_max: entry.y_max,
        count: primary,
        checks,
    };
    let d = form.discriminant()?;
    if d.is_zero() || form.degree() < 3 || form.a0().is_zero() {
        audit.checks.push(Check::new("invariants", Status::Skip, "needs n ≥ 3, a₀ ≠ 0 and D ≠ 0"));
        return Ok(audit);
    }
    let n = form.degree();
    let inv = form.invariants(cfg)?;
    let rs = form.roots(cfg)?;
    let mahler = inv.mahler.enclosure.clone();
    let p = mahler.prec();
    let irreducible = inv.irreducibility.verdict == Irreducibility::Irreducible;
    let checks = &mut audit.checks;

    checks.push(Check::certified("mahler_floor", inv.mahler_floor_holds(p), format!("M ≈ {:.6}", mahler.mid_f64())));
    checks.push(Check::certified("landau_sandwich", inv.landau_sandwich(p), ""));
    checks.extend(root_geometry(&form, &rs, &mahler, irreducible, tol)?);
    if irreducible {
        checks.push(Check::certified("degree_discriminant", inv.degree_disc_check(p), ""));
    }

    let mut lm = Tri::True;
    for s in all.iter().filter(|s| !s.y.is_zero()) {
        lm = lm.and(solver::lewis_mahler_holds(&form, &rs, &mahler, &s.x, &s.y)?);
    }
    checks.push(Check::certified("lewis_mahler", lm, format!("{} solutions", all.len())));

    let lc = LogCurve::from_parts(&form, rs.clone(), mahler.clone())?;
    let mut worst_sum = 0f64;
    for s in all.iter().filter(|s| !s.value.is_zero()) {
        worst_sum = worst_sum.max(lc.phi(&s.x, &s.y)?.coordinate_sum.abs().hi_f64());
    }
    checks.push(Check::bool("coordinate_sum", worst_sum <= tol, format!("max |Σφ| {worst_sum:.3e}")));

    let floor = phi_norm_lower(n, &d, m, Mode::Inequality, p)?;
    checks.push(norm_floor_check("norm_floor_inequality", &lc, &all, &floor)?);
    let floor = phi_norm_lower(n, &d, m, Mode::Equation, p)?;
    checks.push(norm_floor_check("norm_floor_equation", &lc, &eq, &floor)?);

    if origin_norm_applies(n, form.a0(), m, &d) {
        let mut t = Tri::True;
        for s in all.iter().filter(|s| !s.value.is_zero()) {
            t = t.and(lc.phi(&s.x, &s.y)?.norm.le(&lc.norm_upper_bound(&s.x, &s.y)?));
        }
        checks.push(Check::certified("norm_upper", t, ""));
    } else {
        checks.push(Check::new("norm_upper", Status::Skip, "needs |a₀| ≤ m and |D| > 2^{(n−1)²}"));
    }

    let ctx = BoundContext::from_form(&form, m, &entry.epsilon()?, cfg)?;
    let report = bound_report(&ctx)?;
    let m2 = mahler.powi(2);
    let small = |sols: &[&Solution]| {
        sols.iter()
            .filter(|s| !s.y.is_zero() && y_interval(&s.y, p).le(&m2) != Tri::False)
            .count()
    };
    for e in &report.entries {
        let id = e.theorem_id;
        if e.applicable != Tri::True {
            let why = e.reason.clone().unwrap_or_default();
            checks.push(Check::new(format!("bound:{id}"), Status::Skip, why));
            continue;
        }
        let check = match id {
            "inequality_count" | "reducible_inequality_count" | "prime_inequality_count" => {
                cap_check(id, all.len(), &e.bound_floor, "solutions")
            }
            "equation_count" | "prime_equation_count" => cap_check(id, eq.len(), &e.bound_floor, "solutions"),
            "large_solution_count" => {
                let th = e.threshold.as_ref().expect("threshold");
                cap_check(id, count_possibly_at_least(&all, th), &e.bound_floor, "solutions above the threshold")
            }
            "small_inequality_cap" => cap_check(id, small(&all), &e.bound_floor, "solutions with 0 < y ≤ M²"),
            "small_equation_cap" => cap_check(id, small(&eq), &e.bound_floor, "solutions with 0 < y ≤ M²"),
            "medium_count_cap" => {
                let counts = solver::medium_counts(&ineq, n);
                let per_root = (0..n).all(|k| counts[k] <= if rs.is_real(k) { 2 } else { 1 });
                let total: usize = counts.iter().sum();
                let ok = per_root && e.bound_floor.as_ref().is_none_or(|b| BigInt::from(total) <= *b);
                Check::bool(format!("bound:{id}"), ok, format!("per-root medium counts {counts:?}"))
            }
            "large_window_cap" => {
                let lo = e.threshold.as_ref().expect("threshold");
                let (_, hi) = crate::bounds::large_window(n, m, &mahler)?;
                let mut per_root = vec![0usize; n];
                for s in &ineq.solutions {
                    let y = y_interval(&s.y, p);
                    if y.gt(lo) != Tri::False && y.lt(&hi) != Tri::False {
                        if let Some(k) = s.related_root.filter(|&k| rs.is_real(k)) {
                            per_root[k] += 1;
                        }
                    }
                }
                let total: usize = per_root.iter().sum();
                let ok = per_root.iter().all(|&c| c <= 3) && e.bound_floor.as_ref().is_none_or(|b| BigInt::from(total) <= *b);
                Check::bool(format!("bound:{id}"), ok, format!("per-root counts {per_root:?}"))
            }
            "nonreal_related_y_cap" | "reducible_y_cap" => {
                let Some(BoundValue::Real(cap)) = &e.bound else {
                    unreachable!("y caps are real-valued")
                };
                let relevant = ineq.solutions.iter().filter(|s| {
                    id == "reducible_y_cap" || s.related_root.is_some_and(|k| !rs.is_real(k))
                });
                let t = relevant.fold(Tri::True, |acc, s| acc.and(y_interval(&s.y, p).le(cap)));
                Check::certified(format!("bound:{id}"), t, format!("cap {:.6e}", cap.mid_f64()))
            }
            "large_count_cap" | "large_count_cap_all_degrees" => {
                let large = ineq
                    .solutions
                    .iter()
                    .filter(|s| matches!(s.size_class, Some(SizeClass::Large) | None))
                    .count();
                cap_check(id, large, &e.bound_floor, "large solutions")
            }
            "large_equation_cap" => {
                let th = e.threshold.as_ref().expect("threshold");
                cap_check(id, count_possibly_at_least(&eq, th), &e.bound_floor, "solutions above the threshold")
            }
            _ => Check::new(format!("bound:{id}"), Status::Pass, "precondition certified"),
        };
        checks.push(check);
    }
    Ok(audit)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shipped_corpus_shape() {
        let corpus = builtin_corpus();
        assert!(corpus.len() >= 30);
        let forms: std::collections::HashSet<_> = corpus.iter().map(|e| e.binary_form().unwrap()).collect();
        assert!(forms.len() >= 30);
        for f in &forms {
            assert!((3..=6).contains(&f.degree()));
            assert!(f.discriminant().unwrap().abs() <= BigInt::from(100_000_000));
        }
    }

    #[test]
    fn entries_need_provenance_for_pinned_counts() {
        let bad = r#"[{"form": "1,0,0,-2", "m": 1, "mode": "inequality", "y_max": 10, "expected_count": 2}]"#;
        assert!(parse_corpus(bad).is_err());
        let good = r#"[{"form": "1,0,0,-2", "m": "1", "mode": "equation", "y_max": 10}]"#;
        assert_eq!(parse_corpus(good).unwrap()[0].mode, Mode::Equation);
        assert!(parse_corpus(r#"[{"form": "1,,2", "m": 1, "mode": "equation", "y_max": 1}]"#).is_err());
    }

    #[test]
    fn cube_root_two_audit() {
        let entry = &builtin_corpus()[0];
        let a = audit_entry(entry, &Config::default(), 1e-10).unwrap();
        assert_eq!(a.count, 2);
        assert!(a.failures().next().is_none(), "{:#?}", a.failures().collect::<Vec<_>>());
    }
}
