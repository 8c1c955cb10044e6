use std::io::Write;
use std::path::Path;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::Serialize;
use thue_core::audit::{audit_corpus, builtin_corpus, parse_corpus, Status};
use thue_core::bounds::{bound_report, check_epsilon, BoundContext, BoundEntry, BoundReport, BoundValue};
use thue_core::forms::{covering_matrices, Irreducibility, IrreducibilityReport};
use thue_core::logcurve::{LogCurve, LogCurveReport};
use thue_core::numeric::{int_string, parse_rational};
use thue_core::solver::{enumerate, EnumerateOptions, Mode};
use thue_core::{BinaryForm, Config, Error, IntMatrix2, Interval, Tri};

use crate::table::Table;
use crate::Failure;

type CmdResult = std::result::Result<(), Failure>;

pub struct Output {
    pub json: bool,
    pub strict: bool,
}

impl Output {
    /// JSON goes through `serde_json::Value`, whose maps keep keys sorted.
    fn emit<T: Serialize>(&self, value: &T, text: impl FnOnce() -> String) -> CmdResult {
        let body = if self.json {
            let v = serde_json::to_value(value).map_err(|e| Failure::Io(e.to_string()))?;
            serde_json::to_string_pretty(&v).map_err(|e| Failure::Io(e.to_string()))?
        } else {
            text()
        };
        let mut stdout = std::io::stdout().lock();
        writeln!(stdout, "{}", body.trim_end()).map_err(|e| Failure::Io(e.to_string()))
    }
}

fn parse_int(what: &str, s: &str) -> Result<BigInt, Error> {
    s.trim()
        .parse()
        .map_err(|_| Error::InvalidArgument(format!("{what} must be an integer, got {s:?}")))
}

fn parse_positive(what: &str, s: &str) -> Result<BigInt, Error> {
    let v = parse_int(what, s)?;
    if !v.is_positive() {
        return Err(Error::InvalidArgument(format!("{what} must be positive, got {v}")));
    }
    Ok(v)
}

fn parse_rat(what: &str, s: &str) -> Result<BigRational, Error> {
    parse_rational(s).ok_or_else(|| Error::InvalidArgument(format!("{what} must be a rational number, got {s:?}")))
}

/// The form, shifted by `y → kx + y` when `a₀ = 0` (refused under `--strict`).
fn normalized(out: &Output, src: &str) -> Result<(BinaryForm, Option<IntMatrix2>), Error> {
    let form: BinaryForm = src.parse()?;
    if !form.a0().is_zero() {
        return Ok((form, None));
    }
    if out.strict {
        return Err(Error::ZeroLeadingCoefficient);
    }
    let (m, g) = form.leading_shift().ok_or(Error::ZeroForm)?;
    Ok((g, Some(m)))
}

fn shift_line(shift: &Option<IntMatrix2>, original: &str) -> String {
    match shift {
        Some(m) => format!("shift           {original} composed with {m} (a0 = 0)\n"),
        None => String::new(),
    }
}

#[derive(Serialize)]
struct InfoReport {
    form: BinaryForm,
    shift: Option<IntMatrix2>,
    degree: usize,
    #[serde(with = "int_string")]
    discriminant: BigInt,
    mahler: Interval,
    #[serde(serialize_with = "ser_opt_int")]
    mahler_exact: Option<BigInt>,
    mahler_floor: Interval,
    mahler_floor_holds: Tri,
    landau_sandwich: Tri,
    #[serde(with = "int_string")]
    naive_height: BigInt,
    #[serde(with = "int_string")]
    content: BigInt,
    irreducibility: IrreducibilityReport,
    q: usize,
    real_roots: usize,
    degree_discriminant_check: Tri,
}

fn ser_opt_int<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> Result<S::Ok, S::Error> {
    match v {
        Some(i) => s.serialize_str(&i.to_string()),
        None => s.serialize_none(),
    }
}

pub fn info(out: &Output, cfg: &Config, src: &str) -> CmdResult {
    let (form, shift) = normalized(out, src)?;
    let inv = form.invariants(cfg)?;
    let p = inv.mahler.enclosure.prec();
    let report = InfoReport {
        form: form.clone(),
        shift,
        degree: inv.degree,
        discriminant: inv.discriminant.clone(),
        mahler: inv.mahler.enclosure.clone(),
        mahler_exact: inv.mahler.exact.clone(),
        mahler_floor: inv.mahler_floor(p),
        mahler_floor_holds: inv.mahler_floor_holds(p),
        landau_sandwich: inv.landau_sandwich(p),
        naive_height: inv.naive_height.clone(),
        content: form.content(),
        irreducibility: inv.irreducibility.clone(),
        q: inv.q,
        real_roots: inv.degree - 2 * inv.q,
        degree_discriminant_check: inv.degree_disc_check(p),
    };
    out.emit(&report, || {
        let mahler = match &report.mahler_exact {
            Some(m) => m.to_string(),
            None => report.mahler.certified_decimal(),
        };
        let irr = &report.irreducibility;
        let factor = irr.factor.as_ref().map(|f| format!(", factor {f}")).unwrap_or_default();
        format!(
            "{}form            {}\ndegree          {}\ndiscriminant    {}\nmahler          {}\nmahler floor    {} ({})\nheight          {}\ncontent         {}\nirreducibility  {} by {}{}\nq               {} (real roots: {})\ndegree/disc     {}\n",
            shift_line(&report.shift, src),
            report.form,
            report.degree,
            report.discriminant,
            mahler,
            report.mahler_floor.certified_decimal(),
            report.mahler_floor_holds,
            report.naive_height,
            report.content,
            verdict_name(irr.verdict),
            irr.method,
            factor,
            report.q,
            report.real_roots,
            report.degree_discriminant_check,
        )
    })
}

fn verdict_name(v: Irreducibility) -> &'static str {
    match v {
        Irreducibility::Irreducible => "irreducible",
        Irreducibility::Reducible => "reducible",
        Irreducibility::Unknown => "unknown",
    }
}

#[allow(clippy::too_many_arguments)]
pub fn solve(
    out: &Output,
    cfg: &Config,
    src: &str,
    m: &str,
    mode: Mode,
    ymax: u64,
    exclude_zero: bool,
    csv: bool,
) -> CmdResult {
    let form: BinaryForm = src.parse().map_err(Failure::Core)?;
    let m = parse_positive("m", m)?;
    let result = enumerate(&form, &m, ymax, mode, EnumerateOptions { exclude_zero }, cfg)?;
    if csv {
        let mut w = csv::Writer::from_writer(std::io::stdout().lock());
        for s in &result.solutions {
            w.serialize(s).map_err(|e| Failure::Io(e.to_string()))?;
        }
        return w.flush().map_err(|e| Failure::Io(e.to_string()));
    }
    out.emit(&result, || {
        let mut t = Table::new(["x", "y", "F(x,y)", "root", "class"]);
        for s in &result.solutions {
            let root = match s.related_root {
                Some(k) if s.related_tie => format!("{k} (tie)"),
                Some(k) => k.to_string(),
                None => "-".into(),
            };
            let class = s.size_class.map(|c| c.to_string()).unwrap_or_else(|| "undecided".into());
            t.row([s.x.to_string(), s.y.to_string(), s.value.to_string(), root, class]);
        }
        let sym = if mode == Mode::Inequality { "≤" } else { "=" };
        format!(
            "{} primitive solutions of |{}| {sym} {} with 0 ≤ y ≤ {}\n{}",
            result.count(),
            result.form,
            result.m,
            result.y_max,
            t.render()
        )
    })
}

#[derive(Serialize)]
struct BoundsOutput<'a> {
    shift: &'a Option<IntMatrix2>,
    #[serde(flatten)]
    report: &'a BoundReport,
}

fn bound_text(v: &Option<BoundValue>) -> String {
    match v {
        Some(BoundValue::Exact(r)) => thue_core::bounds::rational_string(r),
        Some(BoundValue::Real(iv)) => iv.certified_decimal(),
        None => "-".into(),
    }
}

fn entry_row(e: &BoundEntry) -> [String; 6] {
    [
        e.theorem_id.to_string(),
        e.applicable.to_string(),
        bound_text(&e.bound),
        e.bound_floor.as_ref().map(|b| b.to_string()).unwrap_or_else(|| "-".into()),
        e.threshold.as_ref().map(|t| t.certified_decimal()).unwrap_or_else(|| "-".into()),
        e.reason.clone().unwrap_or_default(),
    ]
}

#[derive(Serialize)]
struct BoundCsvRow {
    theorem_id: String,
    applicable: String,
    bound: String,
    bound_floor: String,
    threshold: String,
    reason: String,
}

#[allow(clippy::too_many_arguments)]
pub fn bounds(
    out: &Output,
    cfg: &Config,
    src: &str,
    m: &str,
    epsilon: &str,
    mode: Mode,
    gyory_a: &str,
    csv: bool,
) -> CmdResult {
    let (form, shift) = normalized(out, src)?;
    let m = parse_positive("m", m)?;
    let eps = parse_rat("epsilon", epsilon)?;
    check_epsilon(form.degree(), &eps, mode)?;
    let a = parse_rat("gyory-a", gyory_a)?;
    if !a.is_positive() || a >= BigRational::from_integer(1.into()) {
        return Err(Error::InvalidArgument(format!("gyory-a must lie in (0, 1), got {gyory_a}")).into());
    }
    let ctx = BoundContext::from_form(&form, &m, &eps, cfg)?.with_gyory_a(a);
    let report = bound_report(&ctx)?;
    if csv {
        let mut w = csv::Writer::from_writer(std::io::stdout().lock());
        for e in &report.entries {
            let [theorem_id, applicable, bound, bound_floor, threshold, reason] = entry_row(e);
            w.serialize(BoundCsvRow { theorem_id, applicable, bound, bound_floor, threshold, reason })
                .map_err(|e| Failure::Io(e.to_string()))?;
        }
        w.flush().map_err(|e| Failure::Io(e.to_string()))?;
    } else {
        out.emit(&BoundsOutput { shift: &shift, report: &report }, || {
            let mut t = Table::new(["theorem", "applicable", "bound", "floor", "threshold", "reason"]);
            for e in &report.entries {
                t.row(entry_row(e));
            }
            let mut c = Table::new(["comparison", "applicable", "bound", "condition"]);
            for r in &report.comparisons {
                c.row([r.name.to_string(), r.applicable.to_string(), r.bound.clone(), r.condition.clone()]);
            }
            let notes: String = report.notes.iter().map(|n| format!("note: {n}\n")).collect();
            format!(
                "{}n = {}, D = {}, m = {}, epsilon = {}, q = {}, M = {}\n\n{}\n{}{}",
                shift_line(&shift, src),
                report.n,
                report.discriminant,
                report.m,
                thue_core::bounds::rational_string(&report.epsilon),
                report.q.map(|q| q.to_string()).unwrap_or_else(|| "-".into()),
                report.mahler.certified_decimal(),
                t.render(),
                c.render(),
                notes
            )
        })?;
    }
    if out.strict {
        let id = match mode {
            Mode::Inequality => "inequality_count",
            Mode::Equation => "equation_count",
        };
        let e = report.entries.iter().find(|e| e.theorem_id == id).expect("count theorem is always reported");
        if e.applicable != Tri::True {
            return Err(Failure::Precondition(format!("{id}: {}", e.reason.clone().unwrap_or_default())));
        }
    }
    Ok(())
}

fn parse_point(s: &str) -> Result<(BigInt, BigInt), Error> {
    let (x, y) = s
        .split_once(',')
        .ok_or_else(|| Error::InvalidArgument(format!("point must be x,y, got {s:?}")))?;
    Ok((parse_int("x", x)?, parse_int("y", y)?))
}

#[derive(Serialize)]
struct LogCurveOutput<'a> {
    shift: &'a Option<IntMatrix2>,
    #[serde(with = "int_string")]
    m: BigInt,
    #[serde(flatten)]
    report: &'a LogCurveReport,
}

pub fn logcurve(
    out: &Output,
    cfg: &Config,
    src: &str,
    points: &[String],
    m: Option<&str>,
    root: Option<usize>,
    c: &str,
) -> CmdResult {
    let original: BinaryForm = src.parse()?;
    let (form, shift) = normalized(out, src)?;
    let given = points
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| parse_point(s))
        .collect::<Result<Vec<_>, _>>()?;
    // Points of F map to points of F∘A through A⁻¹.
    let pts: Vec<(BigInt, BigInt)> = match &shift {
        Some(a) => {
            let inv = a.inverse_unimodular().expect("shift is unimodular");
            given.iter().map(|(x, y)| inv.apply(x, y)).collect()
        }
        None => given.clone(),
    };
    let m = match m {
        Some(s) => parse_positive("m", s)?,
        None => given
            .iter()
            .map(|(x, y)| original.evaluate(x, y).abs())
            .max()
            .filter(|v| v.is_positive())
            .unwrap_or_else(|| BigInt::from(1)),
    };
    let c = parse_rat("c", c)?;
    if c < BigRational::from_integer(1.into()) {
        return Err(Error::InvalidArgument(format!("c must be at least 1, got {c}")).into());
    }
    let lc = LogCurve::new(&form, cfg)?;
    let c = Interval::from_rational(&c, lc.roots().precision());
    let mut report = lc.report(&pts, &m, &c, cfg)?;
    if let (Some(k), 3 | 4) = (root, pts.len()) {
        report.gap = Some(lc.gap_check(&pts, k, &m, &c)?);
    }
    out.emit(&LogCurveOutput { shift: &shift, m: m.clone(), report: &report }, || {
        let mut s = shift_line(&shift, src);
        s += &format!("n = {}, D = {}, m = {}, M = {}\n", report.n, report.discriminant, m, report.mahler.certified_decimal());
        for (p, (x, y)) in report.points.iter().zip(&given) {
            s += &format!("\n({x}, {y})\n  norm   {}\n  sum    {}\n", p.point.norm.certified_decimal(), p.point.coordinate_sum.certified_decimal());
            for (k, v) in p.point.coords.iter().enumerate() {
                s += &format!("  phi_{k:<3} {}\n", v.certified_decimal());
            }
            if let Some(d) = &p.distances {
                s += &format!(
                    "  line distance to root {}: {} (bound {}, {})\n",
                    d.line.root,
                    d.line.distance.certified_decimal(),
                    d.line.bound.certified_decimal(),
                    d.line.within_bound
                );
            }
        }
        if let Some(g) = &report.gap {
            s += &format!(
                "\ntriangle on root {}: sides {} / {} / {}\n  heron {}  gram {}\n  A = {}  lhs {}  rhs {}\n  verdict {:?}\n",
                g.root,
                g.sides[0].certified_decimal(),
                g.sides[1].certified_decimal(),
                g.sides[2].certified_decimal(),
                g.heron.certified_decimal(),
                g.gram.certified_decimal(),
                g.amplitude.certified_decimal(),
                g.lhs.certified_decimal(),
                g.rhs.certified_decimal(),
                g.verdict
            );
        }
        s
    })?;
    if out.strict {
        if let Some(g) = &report.gap {
            if g.verdict == thue_core::logcurve::GapVerdict::Vacuous {
                return Err(Failure::Precondition("triangle preconditions are not certified".into()));
            }
        }
    }
    Ok(())
}

#[derive(Serialize)]
struct ReducedForm {
    index: usize,
    matrix: IntMatrix2,
    form: BinaryForm,
    #[serde(with = "int_string")]
    discriminant: BigInt,
}

#[derive(Serialize)]
struct ReduceReport {
    form: BinaryForm,
    #[serde(with = "int_string")]
    p: BigInt,
    #[serde(with = "int_string")]
    discriminant: BigInt,
    forms: Vec<ReducedForm>,
}

pub fn reduce(out: &Output, _cfg: &Config, src: &str, p: &str) -> CmdResult {
    let form: BinaryForm = src.parse()?;
    let p = parse_int("p", p)?;
    let forms = covering_matrices(&p)?
        .into_iter()
        .enumerate()
        .map(|(index, matrix)| {
            let g = form.apply(&matrix);
            Ok(ReducedForm {
                index,
                discriminant: g.discriminant()?,
                form: g,
                matrix,
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let report = ReduceReport {
        discriminant: form.discriminant()?,
        form,
        p,
        forms,
    };
    out.emit(&report, || {
        let mut t = Table::new(["j", "matrix", "form", "discriminant"]);
        for r in &report.forms {
            t.row([r.index.to_string(), r.matrix.to_string(), r.form.to_string(), r.discriminant.to_string()]);
        }
        format!("{} (D = {}) over p = {}\n{}", report.form, report.discriminant, report.p, t.render())
    })
}

pub fn verify(out: &Output, cfg: &Config, corpus: Option<&Path>, tolerance: f64) -> CmdResult {
    let entries = match corpus {
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| Failure::Io(format!("{}: {e}", path.display())))?;
            parse_corpus(&text)?
        }
        None => builtin_corpus(),
    };
    let report = audit_corpus(&entries, cfg, tolerance);
    out.emit(&report, || {
        let mut s = String::new();
        for e in &report.entries {
            let fails: Vec<_> = e.failures().collect();
            let mark = if fails.is_empty() { "ok  " } else { "FAIL" };
            s += &format!("{mark} {} (m = {}, {}, y ≤ {}): {} solutions\n", e.form, e.m, e.mode, e.y_max, e.count);
            for c in fails {
                s += &format!("     {}: {}\n", c.name, c.detail);
            }
        }
        for err in &report.errors {
            s += &format!("error {err}\n");
        }
        s += &format!(
            "\n{} entries: {} passed, {} failed, {} skipped, {} errors\n",
            report.entries.len(),
            report.passed,
            report.failed,
            report.skipped,
            report.errors.len()
        );
        s
    })?;
    let failed = report.failed + report.errors.len();
    debug_assert_eq!(report.failed, report.entries.iter().flat_map(|e| &e.checks).filter(|c| c.status == Status::Fail).count());
    if failed > 0 {
        return Err(Failure::Audit(failed));
    }
    Ok(())
}
