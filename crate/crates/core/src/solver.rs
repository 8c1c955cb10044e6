//! Exhaustive enumeration of primitive solutions of `|F(x, y)| ≤ m` and `|F(x, y)| = m`
//! in a window `0 ≤ y ≤ y_max`, with related roots and size classes.
//!
//! For fixed `y > 0`, `g(x) = F(x, y)` has critical points `y·ρ` where `f′(ρ) = 0`. With
//! `c_i = ⌊y·ρ_i⌋` the integer ranges `[−B, c₁], [c₁+1, c₂], …, [c_s+1, B]` each lie in an
//! interval of monotonicity, so the solutions on each are one contiguous range found by
//! binary search. `B` is a Cauchy bound for `g(x) − c` over `|c| ≤ m`. Every decision is an
//! exact integer comparison.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::BinaryForm;
use crate::numeric::{Interval, Tri};
use crate::poly::{isolate_real_roots, IntPoly, RealRoot};
use crate::roots::{self, MahlerMeasure, RootSystem};
use crate::Config;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    Inequality,
    Equation,
}

impl FromStr for Mode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ineq" | "inequality" => Ok(Mode::Inequality),
            "eq" | "equation" => Ok(Mode::Equation),
            _ => Err(Error::InvalidArgument(format!("unknown mode {s:?}"))),
        }
    }
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Mode::Inequality => "inequality",
            Mode::Equation => "equation",
        })
    }
}

/// `Small`: `y < M²`; `Medium`: `M² ≤ y < M^{1+(n−1)²}`; `Large`: beyond. `y = 0` is Small.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SizeClass {
    Small,
    Medium,
    Large,
    /// `y` beyond the certified enumeration window.
    AboveWindow,
}

impl fmt::Display for SizeClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SizeClass::Small => "small",
            SizeClass::Medium => "medium",
            SizeClass::Large => "large",
            SizeClass::AboveWindow => "above_window",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Solution {
    #[serde(with = "crate::numeric::int_string")]
    pub x: BigInt,
    #[serde(with = "crate::numeric::int_string")]
    pub y: BigInt,
    #[serde(with = "crate::numeric::int_string")]
    pub value: BigInt,
    /// `None` when `D = 0`.
    pub related_root: Option<usize>,
    /// The minimum of `|x − α_j y|` was attained by more than one root.
    pub related_tie: bool,
    /// `None` when the class boundary could not be separated from `y`.
    #[serde(rename = "class")]
    pub size_class: Option<SizeClass>,
    pub primitive: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnumerationResult {
    pub form: BinaryForm,
    pub mode: Mode,
    #[serde(with = "crate::numeric::int_string")]
    pub m: BigInt,
    pub y_max: u64,
    /// Every solution with `0 ≤ y ≤ complete_up_to` is listed.
    pub complete_up_to: u64,
    pub exclude_zero: bool,
    pub solutions: Vec<Solution>,
}

impl EnumerationResult {
    pub fn count(&self) -> usize {
        self.solutions.len()
    }

    pub fn pairs(&self) -> Vec<(BigInt, BigInt)> {
        self.solutions.iter().map(|s| (s.x.clone(), s.y.clone())).collect()
    }
}

#[derive(Clone, Copy, Debug, Default)]
pub struct EnumerateOptions {
    /// Drop solutions with `F(x, y) = 0`.
    pub exclude_zero: bool,
}

/// Exact solver for one form and right-hand side, reusable across `y`.
#[derive(Clone, Debug)]
pub struct PairFinder {
    form: BinaryForm,
    critical: Vec<RealRoot>,
    m: BigInt,
    mode: Mode,
}

impl PairFinder {
    pub fn new(form: &BinaryForm, m: &BigInt, mode: Mode) -> Result<PairFinder> {
        form.require_a0()?;
        if !m.is_positive() {
            return Err(Error::InvalidArgument(format!("m must be positive, got {m}")));
        }
        Ok(PairFinder {
            form: form.clone(),
            critical: isolate_real_roots(&form.derivative_poly()),
            m: m.clone(),
            mode,
        })
    }

    fn accepts(&self, v: &BigInt) -> bool {
        match self.mode {
            Mode::Inequality => v.abs() <= self.m,
            Mode::Equation => v.abs() == self.m,
        }
    }

    /// All `(x, F(x, y))` with `F(x, y)` accepted, ascending in `x`, primitive or not.
    pub fn at(&self, y: &BigInt) -> Vec<(BigInt, BigInt)> {
        if y.is_zero() {
            let v = self.form.a0().clone();
            return if self.accepts(&v) { vec![(BigInt::one(), v)] } else { vec![] };
        }
        let n = self.form.degree();
        // g(x) = Σ a_i y^i x^{n−i}, ascending in x.
        let mut gc = vec![BigInt::zero(); n + 1];
        let mut ypow = BigInt::one();
        for (i, a) in self.form.coeffs().iter().enumerate() {
            gc[n - i] = a * &ypow;
            ypow *= y;
        }
        let g = IntPoly::new(gc);
        let a0 = self.form.a0().abs();
        let tail = (1..n).map(|i| g.coeff(n - i).abs()).max().unwrap_or_default();
        let last = g.coeff(0).abs() + &self.m;
        let bound = BigInt::one() + tail.max(last).div_ceil(&a0);

        let mut cuts: Vec<BigInt> = self.critical.clone().iter_mut().map(|r| r.floor_scaled(y)).collect();
        cuts.dedup();
        let mut pieces = Vec::with_capacity(cuts.len() + 1);
        let mut start = -&bound;
        for c in cuts {
            let end = c.clone().min(bound.clone());
            if start <= end {
                pieces.push((start.clone(), end));
            }
            start = start.max(c + 1);
        }
        if start <= bound {
            pieces.push((start, bound));
        }

        let targets: Vec<(BigInt, BigInt)> = match self.mode {
            Mode::Inequality => vec![(-&self.m, self.m.clone())],
            Mode::Equation => vec![(-&self.m, -&self.m), (self.m.clone(), self.m.clone())],
        };
        let mut out = Vec::new();
        for (lo, hi) in &pieces {
            for (t_lo, t_hi) in &targets {
                if let Some((a, b)) = monotone_range(&g, lo, hi, t_lo, t_hi) {
                    let mut x = a;
                    while x <= b {
                        out.push((x.clone(), g.eval(&x)));
                        x += 1;
                    }
                }
            }
        }
        out.sort();
        out.dedup();
        out
    }
}

/// Integers `x ∈ [lo, hi]` with `t_lo ≤ g(x) ≤ t_hi`, for `g` monotone on `[lo, hi]`.
fn monotone_range(g: &IntPoly, lo: &BigInt, hi: &BigInt, t_lo: &BigInt, t_hi: &BigInt) -> Option<(BigInt, BigInt)> {
    let increasing = g.eval(hi) >= g.eval(lo);
    let val = |x: &BigInt| if increasing { g.eval(x) } else { -g.eval(x) };
    let (lo_t, hi_t) = if increasing { (t_lo.clone(), t_hi.clone()) } else { (-t_hi, -t_lo) };
    // First x with val(x) ≥ lo_t, then first x with val(x) > hi_t.
    let first = partition_point(lo, hi, |x| val(x) >= lo_t);
    let past = partition_point(lo, hi, |x| val(x) > hi_t);
    (first < past).then(|| (first, past - 1))
}

/// Least `x ∈ [lo, hi]` with `pred(x)`, or `hi + 1`; `pred` must be monotone false → true.
fn partition_point(lo: &BigInt, hi: &BigInt, pred: impl Fn(&BigInt) -> bool) -> BigInt {
    let (mut a, mut b) = (lo.clone(), hi + 1);
    while a < b {
        let mid = (&a + &b).div_floor(&BigInt::from(2));
        if pred(&mid) {
            b = mid;
        } else {
            a = mid + 1;
        }
    }
    a
}

/// Canonical primitive solutions with `0 ≤ y ≤ y_max`, sorted by `(y, x)`.
pub fn enumerate(
    form: &BinaryForm,
    m: &BigInt,
    y_max: u64,
    mode: Mode,
    opts: EnumerateOptions,
    cfg: &Config,
) -> Result<EnumerationResult> {
    let finder = PairFinder::new(form, m, mode)?;
    let mut raw: Vec<(BigInt, BigInt, BigInt)> = (0..=y_max)
        .into_par_iter()
        .flat_map_iter(|y| {
            let yb = BigInt::from(y);
            finder
                .at(&yb)
                .into_iter()
                .filter(|(x, v)| x.gcd(&yb).is_one() && !(opts.exclude_zero && v.is_zero()))
                .map(|(x, v)| (yb.clone(), x, v))
                .collect::<Vec<_>>()
        })
        .collect();
    raw.sort();

    let squarefree = !form.discriminant()?.is_zero();
    let geometry = if squarefree && !raw.is_empty() {
        let rs = roots::solve_roots(form, cfg)?;
        let mahler = roots::mahler_from_roots(form, &rs, cfg)?;
        Some((rs, mahler))
    } else {
        None
    };
    let mut solutions: Vec<Solution> = raw
        .into_par_iter()
        .map(|(y, x, value)| {
            let (related_root, related_tie, size_class) = match &geometry {
                Some((rs, mahler)) => {
                    let r = related_root(rs, &x, &y, cfg);
                    let class = classify(form.degree(), mahler, &y).ok();
                    (Some(r.index), r.tie, class)
                }
                None => (None, false, None),
            };
            Solution {
                x,
                y,
                value,
                related_root,
                related_tie,
                size_class,
                primitive: true,
            }
        })
        .collect();

    if let Some((_, mahler)) = &geometry {
        if mahler.exact.is_none() && solutions.iter().any(|s| s.size_class.is_none()) {
            let tight = Config {
                mahler_rel_tol: 1e-60,
                root_tol: 1e-70,
                precision: cfg.precision.max(512),
                ..cfg.clone()
            };
            if let Ok(m2) = roots::mahler_measure(form, &tight) {
                for s in solutions.iter_mut().filter(|s| s.size_class.is_none()) {
                    s.size_class = classify(form.degree(), &m2, &s.y).ok();
                }
            }
        }
    }

    Ok(EnumerationResult {
        form: form.clone(),
        mode,
        m: m.clone(),
        y_max,
        complete_up_to: y_max,
        exclude_zero: opts.exclude_zero,
        solutions,
    })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RelatedRoot {
    pub index: usize,
    pub tie: bool,
}

fn decide_related(rs: &RootSystem, x: &BigInt, y: &BigInt) -> std::result::Result<RelatedRoot, Vec<usize>> {
    let n = rs.n();
    if y.is_zero() {
        return Ok(RelatedRoot { index: 0, tie: n > 1 });
    }
    let d: Vec<Interval> = (0..n).map(|j| rs.linear_factor_abs(j, x, y)).collect();
    let reps: Vec<usize> = (0..n).filter(|&j| rs.pairing()[j] >= j).collect();
    let best = *reps
        .iter()
        .min_by(|&&a, &&b| d[a].mid_f64().total_cmp(&d[b].mid_f64()).then(a.cmp(&b)))
        .expect("n ≥ 1");
    let contenders: Vec<usize> = reps.iter().copied().filter(|&j| j == best || d[best].lt(&d[j]) != Tri::True).collect();
    if contenders.len() == 1 {
        Ok(RelatedRoot {
            index: best,
            tie: rs.pairing()[best] != best,
        })
    } else {
        Err(contenders)
    }
}

/// Index minimizing `|x − α_j y|`. Conjugates tie exactly; the pair member of lower index
/// (the one with positive imaginary part) is returned and `tie` is set. Other ties that
/// survive refinement also resolve to the lowest index.
pub fn related_root(rs: &RootSystem, x: &BigInt, y: &BigInt, cfg: &Config) -> RelatedRoot {
    let mut contenders = match decide_related(rs, x, y) {
        Ok(r) => return r,
        Err(c) => c,
    };
    let mut current = rs.clone();
    for _ in 0..2 {
        let tol = current.radius_f64(0).max(f64::MIN_POSITIVE) * 1e-20;
        let Ok(next) = current.refined(tol, cfg) else { break };
        current = next;
        match decide_related(&current, x, y) {
            Ok(r) => return r,
            Err(c) => contenders = c,
        }
    }
    RelatedRoot {
        index: *contenders.iter().min().expect("nonempty"),
        tie: true,
    }
}

/// Class thresholds `(M², M^{1+(n−1)²})`.
pub fn class_thresholds(n: usize, mahler: &Interval) -> (Interval, Interval) {
    let e = 1 + ((n - 1) * (n - 1)) as i64;
    (mahler.powi(2), mahler.powi(e))
}

pub fn classify(n: usize, mahler: &MahlerMeasure, y: &BigInt) -> Result<SizeClass> {
    let y = y.abs();
    if y.is_zero() {
        return Ok(SizeClass::Small);
    }
    let e = 1 + ((n - 1) * (n - 1)) as u32;
    if let Some(m) = &mahler.exact {
        return Ok(if y < m.pow(2) {
            SizeClass::Small
        } else if y < m.pow(e) {
            SizeClass::Medium
        } else {
            SizeClass::Large
        });
    }
    let p = mahler.enclosure.prec();
    let yi = Interval::from_int(&y, p);
    let (small, large) = class_thresholds(n, &mahler.enclosure);
    let unresolved = |t: &Interval| Error::UnresolvableBoundary {
        value: y.to_string(),
        threshold: format!("{:.6e}", t.mid_f64()),
    };
    match yi.lt(&small) {
        Tri::True => return Ok(SizeClass::Small),
        Tri::Undecided => return Err(unresolved(&small)),
        Tri::False => {}
    }
    match yi.lt(&large) {
        Tri::True => Ok(SizeClass::Medium),
        Tri::False => Ok(SizeClass::Large),
        Tri::Undecided => Err(unresolved(&large)),
    }
}

/// As [`classify`], with `AboveWindow` for `y` beyond the certified window.
pub fn classify_in_window(n: usize, mahler: &MahlerMeasure, y: &BigInt, complete_up_to: u64) -> Result<SizeClass> {
    if y.abs() > BigInt::from(complete_up_to) {
        return Ok(SizeClass::AboveWindow);
    }
    classify(n, mahler, y)
}

/// `2^{n−1}·n^{n−1/2}·M^{n−2}·|F(x, y)| / (|D|^{1/2}·|y|ⁿ)`.
pub fn lewis_mahler_rhs(form: &BinaryForm, mahler: &Interval, x: &BigInt, y: &BigInt) -> Result<Interval> {
    if y.is_zero() {
        return Err(Error::ZeroY);
    }
    let d = form.discriminant()?;
    if d.is_zero() {
        return Err(Error::RepeatedRoot);
    }
    let n = form.degree() as i64;
    let p = mahler.prec();
    let two = Interval::from_i64(2, p);
    let nn = Interval::from_i64(n, p);
    let num = two
        .powi(n - 1)
        .mul(&nn.powi(n - 1))
        .mul(&nn.sqrt())
        .mul(&mahler.powi(n - 2))
        .mul(&Interval::from_int(&form.evaluate(x, y).abs(), p));
    let den = Interval::from_int(&d.abs(), p)
        .sqrt()
        .mul(&Interval::from_int(&y.abs(), p).powi(n));
    Ok(num.div(&den))
}

/// Enclosure of `min_j |α_j − x/y|`.
pub fn nearest_root_distance(rs: &RootSystem, x: &BigInt, y: &BigInt) -> Result<Interval> {
    if y.is_zero() {
        return Err(Error::ZeroY);
    }
    let p = rs.precision();
    let ya = Interval::from_int(&y.abs(), p);
    let d = (0..rs.n())
        .map(|j| rs.linear_factor_abs(j, x, y).div(&ya))
        .reduce(|a, b| a.min(&b))
        .expect("n ≥ 1");
    Ok(d)
}

/// Certified `min_j |α_j − x/y| ≤ rhs`.
pub fn lewis_mahler_holds(form: &BinaryForm, rs: &RootSystem, mahler: &Interval, x: &BigInt, y: &BigInt) -> Result<Tri> {
    let rhs = lewis_mahler_rhs(form, mahler, x, y)?;
    let d = nearest_root_distance(rs, x, y)?;
    Ok(d.le(&Interval::point(rhs.hi(), rhs.prec())))
}

/// Number of Medium solutions related to each root.
pub fn medium_counts(result: &EnumerationResult, n: usize) -> Vec<usize> {
    let mut counts = vec![0; n];
    for s in &result.solutions {
        if let (Some(SizeClass::Medium), Some(k)) = (s.size_class, s.related_root) {
            counts[k] += 1;
        }
    }
    counts
}

/// `y` as `f64`, saturating.
pub fn y_f64(s: &Solution) -> f64 {
    s.y.to_f64().unwrap_or(f64::INFINITY)
}
