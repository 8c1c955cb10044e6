//! Thresholds and count bounds for Thue inequalities and equations, the comparison
//! bounds quoted from the literature, and the constants feeding the
//! linear-forms-in-logarithms step.
//!
//! Real quantities are outward-rounded [`Interval`]s; counts built from rational
//! inputs are exact [`BigRational`]s.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::forms::{BinaryForm, Irreducibility};
use crate::numeric::{decimal_of_rational, int_string, Interval, Tri};
use crate::primes::{is_prime_u64, next_prime_at_least, omega};
use crate::solver::Mode;
use crate::Config;

fn int(v: impl Into<BigInt>, p: usize) -> Interval {
    Interval::from_int(&v.into(), p)
}

fn rat(num: i64, den: i64, p: usize) -> Interval {
    Interval::from_rational(&BigRational::new(num.into(), den.into()), p)
}

fn q_rat(num: i64, den: i64) -> BigRational {
    BigRational::new(num.into(), den.into())
}

fn factorial(k: usize) -> BigInt {
    (1..=k).map(BigInt::from).product()
}

/// `x^e` for `x ≥ 0` and `e > 0`; a lower endpoint at or below zero maps to 0.
fn pow_nonneg(x: &Interval, e: &Interval) -> Interval {
    if x.is_pos() {
        return x.pow(e);
    }
    let p = x.prec();
    let top = Interval::point(x.hi(), p);
    if top.is_pos() {
        Interval::zero(p).hull(&top.pow(e))
    } else {
        Interval::zero(p)
    }
}

fn require_n(n: usize) -> Result<()> {
    if n < 3 {
        return Err(Error::DegreeTooSmall { degree: n, required: 3 });
    }
    Ok(())
}

fn require_d(d: &BigInt) -> Result<()> {
    if d.is_zero() {
        return Err(Error::RepeatedRoot);
    }
    Ok(())
}

/// Everything the evaluators need about a form and the right-hand side `m`.
#[derive(Clone, Debug)]
pub struct BoundContext {
    pub form: Option<BinaryForm>,
    pub n: usize,
    pub discriminant: BigInt,
    pub m: BigInt,
    pub epsilon: BigRational,
    /// Number of complex-conjugate root pairs.
    pub q: Option<usize>,
    pub mahler: Interval,
    pub height: BigInt,
    pub a0: BigInt,
    pub irreducibility: Irreducibility,
    /// Parameter `0 < a < 1` of the Győry comparison row.
    pub gyory_a: BigRational,
    pub prec: usize,
}

impl BoundContext {
    pub fn from_form(form: &BinaryForm, m: &BigInt, epsilon: &BigRational, cfg: &Config) -> Result<Self> {
        form.require_degree(3)?;
        if !m.is_positive() {
            return Err(Error::InvalidArgument(format!("m must be positive, got {m}")));
        }
        let inv = form.invariants(cfg)?;
        Ok(BoundContext {
            form: Some(form.clone()),
            n: inv.degree,
            discriminant: inv.discriminant,
            m: m.clone(),
            epsilon: epsilon.clone(),
            q: Some(inv.q),
            mahler: inv.mahler.enclosure,
            height: inv.naive_height,
            a0: form.a0().clone(),
            irreducibility: inv.irreducibility.verdict,
            gyory_a: q_rat(1, 2),
            prec: cfg.precision,
        })
    }

    pub fn with_gyory_a(mut self, a: BigRational) -> Self {
        self.gyory_a = a;
        self
    }

    fn log_m(&self) -> Interval {
        int(self.m.clone(), self.prec).ln()
    }

    fn irreducible(&self) -> Tri {
        match self.irreducibility {
            Irreducibility::Irreducible => Tri::True,
            Irreducibility::Reducible => Tri::False,
            Irreducibility::Unknown => Tri::Undecided,
        }
    }
}

/// Upper end of the open ε range: `1/(4(n−1))` for the inequality, `1/(2(n−1))` for the equation.
pub fn epsilon_upper(n: usize, mode: Mode) -> BigRational {
    let k = match mode {
        Mode::Inequality => 4,
        Mode::Equation => 2,
    };
    q_rat(1, k * (n as i64 - 1))
}

pub fn check_epsilon(n: usize, eps: &BigRational, mode: Mode) -> Result<()> {
    let upper = epsilon_upper(n, mode);
    if !eps.is_positive() || eps >= &upper {
        return Err(Error::EpsilonOutOfRange {
            value: eps.to_string(),
            upper: upper.to_string(),
        });
    }
    Ok(())
}

/// `|D|^{1/(k(n−1))−ε} / (3.5^{n/2} · n^{n/(k(n−1))})`, `k = 4` for the inequality and `k = 2`
/// for the equation.
pub fn m_threshold(n: usize, d: &BigInt, eps: &BigRational, mode: Mode, prec: usize) -> Result<Interval> {
    require_n(n)?;
    check_epsilon(n, eps, mode)?;
    require_d(d)?;
    let k: i64 = match mode {
        Mode::Inequality => 4,
        Mode::Equation => 2,
    };
    let n_i = n as i64;
    let exp = q_rat(1, k * (n_i - 1)) - eps;
    let num = int(d.abs(), prec).pow(&Interval::from_rational(&exp, prec));
    let den = rat(7, 2, prec)
        .pow(&rat(n_i, 2, prec))
        .mul(&int(n_i, prec).pow(&rat(n_i, k * (n_i - 1), prec)));
    Ok(num.div(&den))
}

pub fn m_threshold_ineq(ctx: &BoundContext) -> Result<Interval> {
    m_threshold(ctx.n, &ctx.discriminant, &ctx.epsilon, Mode::Inequality, ctx.prec)
}

pub fn m_threshold_eq(ctx: &BoundContext) -> Result<Interval> {
    m_threshold(ctx.n, &ctx.discriminant, &ctx.epsilon, Mode::Equation, ctx.prec)
}

/// Certified `m ≤ threshold`.
pub fn qualifies(m: &BigInt, threshold: &Interval) -> Tri {
    int(m.clone(), threshold.prec()).le(threshold)
}

/// Certified `m < threshold`.
pub fn qualifies_strict(m: &BigInt, threshold: &Interval) -> Tri {
    int(m.clone(), threshold.prec()).lt(threshold)
}

fn count_bound(n: usize, eps: &BigRational, q: Option<usize>, denom: i64) -> BigRational {
    let n_i = n as i64;
    let q_i = q.unwrap_or(0) as i64;
    let base = if n >= 5 { 7 * n_i - 12 * q_i } else { 9 * n_i - 16 * q_i };
    BigRational::from_integer(base.into()) + BigRational::from_integer((n_i - q_i).into()) / (eps * BigInt::from(denom))
}

/// Primitive-solution count for `0 < |F| ≤ m` under the small-`m` threshold:
/// `7n − 12q + (n−q)/(2(n−1)ε)` for `n ≥ 5`, `9n − 16q + (n−q)/(2(n−1)ε)` for `n ∈ {3, 4}`;
/// `q = None` drops the refinement.
pub fn bound_ineq(n: usize, eps: &BigRational, q: Option<usize>) -> Result<BigRational> {
    require_n(n)?;
    check_epsilon(n, eps, Mode::Inequality)?;
    Ok(count_bound(n, eps, q, 2 * (n as i64 - 1)))
}

/// As [`bound_ineq`] for `|F| = m`, with `(n−1)ε` in the denominator.
pub fn bound_eq(n: usize, eps: &BigRational, q: Option<usize>) -> Result<BigRational> {
    require_n(n)?;
    check_epsilon(n, eps, Mode::Equation)?;
    Ok(count_bound(n, eps, q, n as i64 - 1))
}

/// `2n + n/(2(n−1)ε)` for reducible forms.
pub fn bound_reducible(n: usize, eps: &BigRational) -> Result<BigRational> {
    require_n(n)?;
    check_epsilon(n, eps, Mode::Inequality)?;
    let n_i = n as i64;
    Ok(BigRational::from_integer((2 * n_i).into()) + BigRational::from_integer(n_i.into()) / (eps * BigInt::from(2 * (n_i - 1))))
}

/// Count bound valid for every `m`, through the least prime above a cutoff.
#[derive(Clone, Debug, Serialize)]
pub struct PrimeBound {
    pub cutoff: Interval,
    /// Least integer `≥ cutoff`, decided exactly.
    #[serde(with = "int_string")]
    pub ceiling: BigInt,
    #[serde(with = "int_string")]
    pub prime: BigInt,
    #[serde(serialize_with = "ser_rational")]
    pub total: BigRational,
}

/// Cutoff `m^{8/n}·3.5⁴·n^{2/(n−1)}` (inequality) or `m^{4/n}·3.5²·n^{2/(n−1)}` (equation);
/// the bound is `(p+1)(9n + 4/(n−1))` for the least prime `p ≥ cutoff`.
pub fn prime_bound(n: usize, m: &BigInt, mode: Mode, prec: usize) -> Result<PrimeBound> {
    require_n(n)?;
    if !m.is_positive() {
        return Err(Error::InvalidArgument(format!("m must be positive, got {m}")));
    }
    let (a, b): (i64, u32) = match mode {
        Mode::Inequality => (8, 4),
        Mode::Equation => (4, 2),
    };
    let n_i = n as i64;
    let cutoff = int(m.clone(), prec)
        .pow(&rat(a, n_i, prec))
        .mul(&rat(7, 2, prec).powi(b as i64))
        .mul(&int(n_i, prec).pow(&rat(2, n_i - 1, prec)));
    // k ≥ cutoff  ⇔  (2ᵇk)^{n(n−1)} ≥ 7^{b·n(n−1)} · m^{a(n−1)} · n^{2n}
    let e = (n * (n - 1)) as u32;
    let rhs = num_traits::pow(BigInt::from(7), (b * e) as usize)
        * num_traits::pow(m.clone(), (a as usize) * (n - 1))
        * num_traits::pow(BigInt::from(n), 2 * n);
    let at_least = |k: &BigInt| num_traits::pow(k * BigInt::from(1u32 << b), e as usize) >= rhs;
    let mut k = cutoff
        .lo_rational()
        .map(|r| r.floor().to_integer())
        .unwrap_or_else(BigInt::one)
        .max(BigInt::one());
    while !at_least(&k) {
        k += 1;
    }
    let prime = next_prime_at_least(&k);
    let total = BigRational::from_integer(&prime + 1) * (BigRational::from_integer((9 * n_i).into()) + q_rat(4, n_i - 1));
    Ok(PrimeBound {
        cutoff,
        ceiling: k,
        prime,
        total,
    })
}

/// `2^{n/(n−2)} · n^{(2n−1)/(2n−4)} · m^{1/(n−2)} · M`.
pub fn large_base(n: usize, m: &BigInt, mahler: &Interval) -> Interval {
    let p = mahler.prec();
    let n_i = n as i64;
    int(2, p)
        .pow(&rat(n_i, n_i - 2, p))
        .mul(&int(n_i, p).pow(&rat(2 * n_i - 1, 2 * n_i - 4, p)))
        .mul(&int(m.clone(), p).pow(&rat(1, n_i - 2, p)))
        .mul(mahler)
}

/// Lower `y` threshold `base^{1+1/(n−1)}` above which at most [`large_solution_bound`]
/// primitive solutions exist.
pub fn large_solution_threshold(n: usize, m: &BigInt, mahler: &Interval) -> Result<Interval> {
    require_n(n)?;
    let p = mahler.prec();
    Ok(large_base(n, m, mahler).pow(&rat(n as i64, n as i64 - 1, p)))
}

/// `11n` for `n ∈ {3, 4}` and `min(9n, 11n) = 9n` for `n ≥ 5`.
pub fn large_solution_bound(n: usize) -> Result<usize> {
    require_n(n)?;
    Ok(if n >= 5 { 9 * n } else { 11 * n })
}

/// `(base^{1+1/(n−1)}, base^{1+(n−1)²})`: at most 3 primitive solutions related to each real
/// root lie strictly inside.
pub fn large_window(n: usize, m: &BigInt, mahler: &Interval) -> Result<(Interval, Interval)> {
    require_n(n)?;
    let base = large_base(n, m, mahler);
    let p = mahler.prec();
    let top = base.powi(1 + ((n - 1) * (n - 1)) as i64);
    Ok((base.pow(&rat(n as i64, n as i64 - 1, p)), top))
}

/// `(n − q)(1 + 1/(2(n−1)ε))` (inequality) or `(n − q)(1 + 1/((n−1)ε))` (equation) solutions
/// with `0 < y ≤ M²`.
pub fn small_cap(n: usize, q: usize, eps: &BigRational, mode: Mode) -> Result<BigRational> {
    require_n(n)?;
    check_epsilon(n, eps, mode)?;
    let k = match mode {
        Mode::Inequality => 2 * (n as i64 - 1),
        Mode::Equation => n as i64 - 1,
    };
    let nq = BigRational::from_integer((n as i64 - q as i64).into());
    Ok(nq * (BigRational::one() + BigRational::one() / (eps * BigInt::from(k))))
}

/// Small-solution threshold for the equation: `|D|^{1/(2(n−1))−ε} / ((7/2)ⁿ · n^{n/(2(n−1))})`.
pub fn small_eq_threshold(n: usize, d: &BigInt, eps: &BigRational, prec: usize) -> Result<Interval> {
    require_n(n)?;
    check_epsilon(n, eps, Mode::Equation)?;
    require_d(d)?;
    let n_i = n as i64;
    let exp = q_rat(1, 2 * (n_i - 1)) - eps;
    let num = int(d.abs(), prec).pow(&Interval::from_rational(&exp, prec));
    let den = rat(7, 2, prec)
        .powi(n_i)
        .mul(&int(n_i, prec).pow(&rat(n_i, 2 * (n_i - 1), prec)));
    Ok(num.div(&den))
}

#[derive(Clone, Debug, Serialize)]
pub struct SmallCap {
    #[serde(serialize_with = "ser_rational")]
    pub cap: BigRational,
    pub threshold: Interval,
    pub met: Tri,
}

/// Small-solution caps; a side is `None` when ε lies outside its range.
#[derive(Clone, Debug, Serialize)]
pub struct SmallCaps {
    pub inequality: Option<SmallCap>,
    pub equation: Option<SmallCap>,
}

pub fn small_count_caps(ctx: &BoundContext) -> Result<SmallCaps> {
    require_d(&ctx.discriminant)?;
    let q = ctx.q.unwrap_or(0);
    let ineq = match small_cap(ctx.n, q, &ctx.epsilon, Mode::Inequality) {
        Ok(cap) => {
            let threshold = m_threshold_ineq(ctx)?;
            let met = qualifies(&ctx.m, &threshold);
            Some(SmallCap { cap, threshold, met })
        }
        Err(Error::EpsilonOutOfRange { .. }) => None,
        Err(e) => return Err(e),
    };
    let eq = match small_cap(ctx.n, q, &ctx.epsilon, Mode::Equation) {
        Ok(cap) => {
            let threshold = small_eq_threshold(ctx.n, &ctx.discriminant, &ctx.epsilon, ctx.prec)?;
            let met = qualifies(&ctx.m, &threshold);
            Some(SmallCap { cap, threshold, met })
        }
        Err(Error::EpsilonOutOfRange { .. }) => None,
        Err(e) => return Err(e),
    };
    Ok(SmallCaps { inequality: ineq, equation: eq })
}

/// `(M², M^{1+(n−1)²})`.
pub fn medium_window(mahler: &Interval, n: usize) -> (Interval, Interval) {
    (mahler.sqr(), mahler.powi(1 + ((n - 1) * (n - 1)) as i64))
}

/// Strict threshold `|D|^{1/(2(n−1))} / ((7/2)ⁿ · n^{n/(2(n−1))})` for the medium caps.
pub fn medium_threshold(n: usize, d: &BigInt, prec: usize) -> Result<Interval> {
    require_n(n)?;
    require_d(d)?;
    let n_i = n as i64;
    let num = int(d.abs(), prec).pow(&rat(1, 2 * (n_i - 1), prec));
    let den = rat(7, 2, prec)
        .powi(n_i)
        .mul(&int(n_i, prec).pow(&rat(n_i, 2 * (n_i - 1), prec)));
    Ok(num.div(&den))
}

/// Medium solutions: at most 2 per real root and 1 per non-real root.
pub fn medium_cap(n: usize, q: usize) -> usize {
    2 * (n - 2 * q) + 2 * q
}

/// `|y| ≤ (n+1) m^{1/n} 2^{(n−1)²/n} M^{3−3/n} / (√3·|D|)^{1/n}` for solutions related to a
/// non-real root.
pub fn nonreal_y_cap(n: usize, m: &BigInt, d: &BigInt, mahler: &Interval) -> Result<Interval> {
    require_n(n)?;
    require_d(d)?;
    let p = mahler.prec();
    let n_i = n as i64;
    let inv_n = rat(1, n_i, p);
    let num = int(n_i + 1, p)
        .mul(&int(m.clone(), p).pow(&inv_n))
        .mul(&int(2, p).pow(&rat((n_i - 1) * (n_i - 1), n_i, p)))
        .mul(&mahler.pow(&rat(3 * n_i - 3, n_i, p)));
    let den = int(3, p).sqrt().mul(&int(d.abs(), p)).pow(&inv_n);
    Ok(num.div(&den))
}

/// `|y| ≤ 2^{n²/2} · Mⁿ` for every solution when `F` is reducible.
pub fn reducible_y_cap(n: usize, mahler: &Interval) -> Interval {
    let p = mahler.prec();
    int(2, p).pow(&rat((n * n) as i64, 2, p)).mul(&mahler.powi(n as i64))
}

/// `n ≤ (3 + 2 log|D|)/log 3`.
pub fn degree_disc_check(n: usize, d: &BigInt, prec: usize) -> Tri {
    let rhs = int(3, prec)
        .add(&int(d.abs(), prec).ln().mul_i64(2))
        .div(&int(3, prec).ln());
    int(n as i64, prec).le(&rhs)
}

/// Strict threshold `(2/7)ⁿ (|D|/nⁿ)^{1/(2(n−1))}` for the large-solution caps.
pub fn large_count_threshold(n: usize, d: &BigInt, prec: usize) -> Result<Interval> {
    require_n(n)?;
    require_d(d)?;
    let n_i = n as i64;
    let dn = int(d.abs(), prec).div(&int(n_i, prec).powi(n_i));
    Ok(rat(2, 7, prec).powi(n_i).mul(&dn.pow(&rat(1, 2 * (n_i - 1), prec))))
}

/// Large solutions (`y ≥ M^{1+(n−1)²}`, or above the general window for the equation):
/// `4(n − 2q)` for `n ≥ 5` and `6(n − 2q)` for every `n ≥ 3`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct LargeCaps {
    pub degree_five_up: Option<usize>,
    pub all_degrees: usize,
}

impl LargeCaps {
    pub fn best(&self) -> usize {
        self.degree_five_up.unwrap_or(self.all_degrees).min(self.all_degrees)
    }
}

pub fn large_count_caps(n: usize, q: usize) -> Result<LargeCaps> {
    require_n(n)?;
    let real = n - 2 * q;
    Ok(LargeCaps {
        degree_five_up: (n >= 5).then_some(4 * real),
        all_degrees: 6 * real,
    })
}

/// Lower end `base^{1+(n−1)²}` of the large range for the equation with arbitrary `m`.
pub fn large_equation_threshold(n: usize, m: &BigInt, mahler: &Interval) -> Result<Interval> {
    Ok(large_window(n, m, mahler)?.1)
}

fn ser_rational<S: serde::Serializer>(r: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&rational_string(r))
}

/// `"p/q"`, or the integer alone when `q = 1`.
pub fn rational_string(r: &BigRational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Evertse–Győry `(N(n), δ(n))`: `(6n·7^{C(n,3)}, 5n(n−1)/6)` for `n < 400`, else `(6n, 120(n−1))`.
pub fn evertse_gyory(n: usize) -> (BigInt, BigRational) {
    let n_b = BigInt::from(n);
    if n < 400 {
        let c3 = num_integer::binomial(n_b.clone(), BigInt::from(3));
        let e = c3.to_usize().expect("binomial fits");
        (BigInt::from(6) * &n_b * num_traits::pow(BigInt::from(7), e), q_rat(5 * n as i64 * (n as i64 - 1), 6))
    } else {
        (BigInt::from(6) * n_b, BigRational::from_integer(BigInt::from(120 * (n - 1))))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct ComparisonRow {
    pub name: &'static str,
    pub condition: String,
    pub applicable: Tri,
    /// Exact value, or a symbolic expression when an unspecified constant is involved.
    pub bound: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub threshold: Option<Interval>,
}

/// Count bounds from earlier work, evaluated on the context.
pub fn comparison_bounds(ctx: &BoundContext) -> Vec<ComparisonRow> {
    let p = ctx.prec;
    let n = ctx.n;
    let n_i = n as i64;
    let log_d = int(ctx.discriminant.abs(), p).ln();
    let log_m = ctx.log_m();
    let w = omega(&ctx.m);
    let mut rows = Vec::new();

    rows.push(ComparisonRow {
        name: "mahler",
        condition: "F irreducible; equation |F(x, y)| = m".into(),
        applicable: ctx.irreducible(),
        bound: format!("C1^{}", 1 + w),
        threshold: None,
    });
    rows.push(ComparisonRow {
        name: "bombieri_schmidt",
        condition: "equation F(x, y) = m, coprime x, y".into(),
        applicable: Tri::True,
        bound: format!("C2 * {}", num_traits::pow(BigInt::from(n), 1 + w)),
        threshold: None,
    });

    let (big_n, delta) = evertse_gyory(n);
    let rhs = Interval::from_rational(&delta, p)
        .mul(&log_m)
        .add(&int(80 * n_i * (n_i - 1), p));
    rows.push(ComparisonRow {
        name: "evertse_gyory",
        condition: format!("|D| > m^{} * exp({})", rational_string(&delta), 80 * n * (n - 1)),
        applicable: log_d.gt(&rhs),
        bound: big_n.to_string(),
        threshold: None,
    });

    let a = &ctx.gyory_a;
    let a_ok = a.is_positive() && a < &BigRational::one();
    let gy_tail = BigRational::from_integer((n_i + 2).into()) * (BigRational::from_integer(2.into()) / a + q_rat(1, 4));
    let gy_cond = if a_ok {
        let ex = BigRational::from_integer((2 * (n_i - 1)).into()) / (BigRational::one() - a);
        let rhs = int(n_i, p)
            .ln()
            .mul_i64(n_i)
            .add(&Interval::from_rational(&ex, p).mul(&rat(7, 2, p).ln().mul_i64(n_i).add(&log_m.mul_i64(2))));
        log_d.ge(&rhs)
    } else {
        Tri::False
    };
    let gy_text = format!("|D| >= n^n (3.5^n m^2)^(2(n-1)/(1-a)), a = {}", rational_string(a));
    rows.push(ComparisonRow {
        name: "gyory",
        condition: gy_text.clone(),
        applicable: gy_cond,
        bound: rational_string(&(BigRational::from_integer((25 * n_i).into()) + &gy_tail)),
        threshold: None,
    });
    rows.push(ComparisonRow {
        name: "gyory_reducible",
        condition: format!("F reducible; {gy_text}"),
        applicable: gy_cond.and(ctx.irreducible().not()),
        bound: rational_string(&(BigRational::from_integer((5 * n_i).into()) + &gy_tail)),
        threshold: None,
    });

    let eps = &ctx.epsilon;
    let stewart_ok = if eps.is_positive() {
        let lhs = log_d.div_i64(n_i * (n_i - 1));
        let rhs = log_m.mul_i64(2).div(&Interval::from_rational(&(BigRational::from_integer(n_i.into()) + eps), p));
        lhs.ge(&rhs)
    } else {
        Tri::False
    };
    let stewart = if eps.is_positive() {
        let v = BigRational::from_integer(1400.into())
            * (BigRational::one() + BigRational::one() / (eps * BigInt::from(8 * n_i)))
            * BigInt::from(n_i);
        rational_string(&v)
    } else {
        "undefined for epsilon <= 0".into()
    };
    rows.push(ComparisonRow {
        name: "stewart",
        condition: format!("|D|^(1/(n(n-1))) >= m^(2/(n+eps)), eps = {}", rational_string(eps)),
        applicable: stewart_ok,
        bound: stewart,
        threshold: None,
    });

    let bppw = 2 * n * n * (w + 1) + 13 * n;
    let th = int(21 * n_i * n_i, p)
        .mul(&ctx.mahler.powi(5))
        .mul(&int(ctx.m.clone(), p).pow(&Interval::from_rational(&(q_rat(1, n_i - 2) + q_rat(1, (n_i - 1) * (n_i - 1))), p)));
    rows.push(ComparisonRow {
        name: "bppw",
        condition: "solutions of |F(x, y)| = m with max(|x|, |y|) >= threshold".into(),
        applicable: Tri::True,
        bound: bppw.to_string(),
        threshold: Some(th),
    });
    rows
}

/// Parameters of the lower bound for a linear form in `N` logarithms.
#[derive(Clone, Debug, Serialize)]
pub struct MatveevParams {
    pub n_logs: usize,
    pub chi: u8,
    pub d: usize,
    pub b: Interval,
    pub a: Vec<Interval>,
    pub c_n: Interval,
    pub c0: Interval,
    pub w0: Interval,
    pub omega: Interval,
}

/// `C(N, χ) = 16/(N!χ) · eᴺ (2N+1+2χ)(N+2)(4N+4)^{N+1}(eN/2)^χ`,
/// `C₀ = log(e^{4.4N+7} N^{5.5} d² log(eN))`, `W₀ = log(1.5 e B d log(ed))`.
pub fn matveev_constants(n_logs: usize, chi: u8, d: usize, b: &Interval) -> Result<MatveevParams> {
    if n_logs == 0 || d == 0 || !(chi == 1 || chi == 2) {
        return Err(Error::InvalidArgument(format!("need N >= 1, d >= 1, chi in {{1, 2}}; got N={n_logs}, d={d}, chi={chi}")));
    }
    let p = b.prec();
    if b.lt(&Interval::one(p)) != Tri::False {
        return Err(Error::InvalidArgument("need B >= 1".into()));
    }
    let nn = n_logs as i64;
    let x = chi as i64;
    let e = Interval::e(p);
    let c_n = int(16, p)
        .div(&int(factorial(n_logs) * BigInt::from(x), p))
        .mul(&e.powi(nn))
        .mul(&int((2 * nn + 1 + 2 * x) * (nn + 2), p))
        .mul(&int(4 * nn + 4, p).powi(nn + 1))
        .mul(&e.mul_i64(nn).div_i64(2).powi(x));
    let log_en = int(nn, p).ln().add(&Interval::one(p));
    let c0 = rat(44 * nn + 70, 10, p)
        .add(&rat(11, 2, p).mul(&int(nn, p).ln()))
        .add(&int(d as i64, p).ln().mul_i64(2))
        .add(&log_en.ln());
    let log_ed = int(d as i64, p).ln().add(&Interval::one(p));
    let w0 = rat(3, 2, p).mul(&e).mul(b).mul_i64(d as i64).mul(&log_ed).ln();
    Ok(MatveevParams {
        n_logs,
        chi,
        d,
        b: b.clone(),
        a: Vec::new(),
        c_n,
        c0,
        w0,
        omega: Interval::one(p),
    })
}

impl MatveevParams {
    /// Attach `A₁, …, A_N`; `Ω` becomes their product.
    pub fn with_heights(mut self, a: Vec<Interval>) -> Result<Self> {
        if a.len() != self.n_logs {
            return Err(Error::InvalidArgument(format!("expected {} values of A, got {}", self.n_logs, a.len())));
        }
        if a.iter().any(|x| !x.is_pos()) {
            return Err(Error::InvalidArgument("every A must be positive".into()));
        }
        let p = self.b.prec();
        self.omega = a.iter().fold(Interval::one(p), |acc, x| acc.mul(x));
        self.a = a;
        Ok(self)
    }

    /// `−C(N)·C₀·W₀·d²·Ω`, a lower bound for `log|Λ|`.
    pub fn log_lower_bound(&self) -> Interval {
        self.c_n
            .mul(&self.c0)
            .mul(&self.w0)
            .mul_i64((self.d * self.d) as i64)
            .mul(&self.omega)
            .neg()
    }
}

/// Upper-bound data for a fundamental system of S-units.
#[derive(Clone, Debug, Serialize)]
pub struct SUnitBounds {
    pub d1: usize,
    pub s: usize,
    pub t: usize,
    /// Complex places.
    pub q: usize,
    #[serde(with = "int_string")]
    pub p: BigInt,
    pub delta: Interval,
    pub regulator: Interval,
    pub c4: Interval,
    pub c5: Interval,
    pub delta_k: Interval,
    pub unit_rank: usize,
    /// `s − 1 = r + t` with `r = d₁ − q − 1`.
    pub rank_consistent: bool,
}

/// `Δ = (2/π)^q |D_K|^{1/2}`;
/// `R_S ≤ Δ (log Δ)^{d₁−1−q} (d₁−1+log Δ)^q (d₁ log* P)^t / (d₁−1)!`;
/// `c₄ = ((s−1)!)² / (2^{s−2} d₁^{s−1})`; `δ_K = 1/(53 d₁ log 6d₁)`; `c₅ = c₄ (δ_K/d₁)^{2−s}`.
pub fn sunit_bounds(d1: usize, s: usize, t: usize, p: &BigInt, dk_abs: &BigInt, q: usize, prec: usize) -> Result<SUnitBounds> {
    if d1 < 2 {
        return Err(Error::DegreeTooSmall { degree: d1, required: 2 });
    }
    if s == 0 || 2 * q > d1 || dk_abs.is_zero() {
        return Err(Error::InvalidArgument(format!("need s >= 1, 2q <= d1, D_K != 0; got s={s}, q={q}")));
    }
    let d1_i = d1 as i64;
    let s_i = s as i64;
    let delta = rat(2, 1, prec)
        .div(&Interval::pi(prec))
        .powi(q as i64)
        .mul(&int(dk_abs.abs(), prec).sqrt());
    let log_delta = delta.ln();
    let log_star_p = int(p.abs().max(BigInt::one()), prec).ln().max(&Interval::one(prec));
    let regulator = delta
        .mul(&log_delta.powi(d1_i - 1 - q as i64))
        .mul(&int(d1_i - 1, prec).add(&log_delta).powi(q as i64))
        .mul(&log_star_p.mul_i64(d1_i).powi(t as i64))
        .div(&int(factorial(d1 - 1), prec));
    let fs = int(factorial(s - 1), prec);
    let c4 = fs
        .sqr()
        .div(&int(2, prec).powi(s_i - 2))
        .div(&int(d1_i, prec).powi(s_i - 1));
    let delta_k = int(53 * d1_i, prec).mul(&int(6 * d1_i, prec).ln()).recip();
    let c5 = c4.mul(&delta_k.div_i64(d1_i).powi(2 - s_i));
    let unit_rank = d1 - q - 1;
    Ok(SUnitBounds {
        d1,
        s,
        t,
        q,
        p: p.clone(),
        delta,
        regulator,
        c4,
        c5,
        delta_k,
        unit_rank,
        rank_consistent: s == unit_rank + t + 1,
    })
}

/// `π(m)`, the number of primes up to `m`.
pub fn prime_count(m: &BigInt) -> Result<usize> {
    let m = m
        .to_u64()
        .filter(|&v| v <= 100_000_000)
        .ok_or_else(|| Error::InvalidArgument(format!("prime count supported up to 10^8, got {m}")))?;
    Ok((2..=m).filter(|&k| is_prime_u64(k)).count())
}

/// Place count bound: `n + n·π(m)` for the inequality, `n + n·ω(m)` for the equation.
pub fn place_count_bound(n: usize, m: &BigInt, mode: Mode) -> Result<usize> {
    let k = match mode {
        Mode::Inequality => prime_count(m)?,
        Mode::Equation => omega(m),
    };
    Ok(n + n * k)
}

/// Which gap statement an amplitude belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapVariant {
    /// Three solutions, degree at least 5.
    Three,
    /// Four solutions, every degree at least 3.
    Four,
}

/// Bracket inside the gap amplitude:
/// `(n−2)(n−1) log m + (n−2)² log M` for three solutions,
/// `(n−2)n log m + (n−1)(n−2) log M` for four.
pub fn gap_bracket(n: usize, m: &BigInt, mahler: &Interval, variant: GapVariant) -> Interval {
    let p = mahler.prec();
    let n_i = n as i64;
    let (cm, cmm) = match variant {
        GapVariant::Three => ((n_i - 2) * (n_i - 1), (n_i - 2) * (n_i - 2)),
        GapVariant::Four => ((n_i - 2) * n_i, (n_i - 1) * (n_i - 2)),
    };
    int(m.clone(), p).ln().mul_i64(cm).add(&mahler.ln().mul_i64(cmm))
}

/// `C/4 · ((n−1)²+n−1)^{3/4} · bracket^{3/2}` for three solutions, `C/(8√2)` in place of `C/4`
/// for four.
pub fn gap_amplitude(n: usize, c: &Interval, bracket: &Interval, variant: GapVariant) -> Interval {
    let p = c.prec();
    let n_i = n as i64;
    let pre = match variant {
        GapVariant::Three => c.div_i64(4),
        GapVariant::Four => c.div(&int(8, p).mul(&int(2, p).sqrt())),
    };
    pre.mul(&int((n_i - 1) * (n_i - 1) + n_i - 1, p).pow(&rat(3, 4, p)))
        .mul(&pow_nonneg(bracket, &rat(3, 2, p)))
}

/// `√((n−1)²+n−1) · [(n−2)(n−1) log m + (n−2)² log M]`, the floor on triangle sides.
pub fn side_floor(n: usize, m: &BigInt, mahler: &Interval) -> Interval {
    let p = mahler.prec();
    let n_i = n as i64;
    int((n_i - 1) * (n_i - 1) + n_i - 1, p)
        .sqrt()
        .mul(&gap_bracket(n, m, mahler, GapVariant::Three))
}

#[derive(Clone, Debug, Serialize)]
pub struct GapConstants {
    pub a_three: Interval,
    pub a_four: Interval,
    pub k: Interval,
    /// `None` unless `K` is certified positive.
    pub k1: Option<Interval>,
}

/// `K = 2500 (s+2)^{2s+7} (4π)^{s+2} (n(n−1)(n−2))^{s+2} |D| (log|D|)ⁿ (log m)^{s+1} log log m
/// (log n / log log n)^{3(s−1)}`; the product `(log m)^{s+1} log log m` is 0 at `m = 1`.
pub fn k_constant(n: usize, s: usize, d: &BigInt, m: &BigInt, prec: usize) -> Result<Interval> {
    require_n(n)?;
    require_d(d)?;
    if !m.is_positive() {
        return Err(Error::InvalidArgument(format!("m must be positive, got {m}")));
    }
    if m.is_one() {
        return Ok(Interval::zero(prec));
    }
    let n_i = n as i64;
    let s_i = s as i64;
    let log_m = int(m.clone(), prec).ln();
    let log_n = int(n_i, prec).ln();
    let v = int(2500, prec)
        .mul(&int(s_i + 2, prec).powi(2 * s_i + 7))
        .mul(&Interval::pi(prec).mul_i64(4).powi(s_i + 2))
        .mul(&int(n_i * (n_i - 1) * (n_i - 2), prec).powi(s_i + 2))
        .mul(&int(d.abs(), prec))
        .mul(&int(d.abs(), prec).ln().powi(n_i))
        .mul(&log_m.powi(s_i + 1))
        .mul(&log_m.ln())
        .mul(&log_n.div(&log_n.ln()).powi(3 * (s_i - 1)));
    Ok(v)
}

/// `K₁ = (n√n·K)^{e/(e−1)}` for `K > 0`.
pub fn k1_constant(n: usize, k: &Interval) -> Option<Interval> {
    if !k.is_pos() {
        return None;
    }
    let p = k.prec();
    let e = Interval::e(p);
    let ex = e.div(&e.sub(&Interval::one(p)));
    let nn = int(n as i64, p);
    Some(nn.mul(&nn.sqrt()).mul(k).pow(&ex))
}

pub fn gap_constants(n: usize, m: &BigInt, mahler: &Interval, d: &BigInt, s: usize, c: &Interval) -> Result<GapConstants> {
    require_n(n)?;
    let a_three = gap_amplitude(n, c, &gap_bracket(n, m, mahler, GapVariant::Three), GapVariant::Three);
    let a_four = gap_amplitude(n, c, &gap_bracket(n, m, mahler, GapVariant::Four), GapVariant::Four);
    let k = k_constant(n, s, d, m, mahler.prec())?;
    let k1 = k1_constant(n, &k);
    Ok(GapConstants { a_three, a_four, k, k1 })
}

/// Constant `C` that moves the gap statement to `y ≥ M^{1+(n−1)²}`:
/// `M^{1+(n−1)²} / ((2/√3)(n+1)ⁿ √n mⁿ |D|^{1/(n²(n−2))} M^{(2n−2)/(n(n−2))+n−1})`.
pub fn gap_scale_for_large(n: usize, m: &BigInt, d: &BigInt, mahler: &Interval) -> Result<Interval> {
    require_n(n)?;
    let num = mahler.powi(1 + ((n - 1) * (n - 1)) as i64);
    Ok(num.div(&gap_threshold_unit(n, m, d, mahler)?))
}

/// `(2/√3)(n+1)ⁿ √n mⁿ |D|^{1/(n²(n−2))} M^{(2n−2)/(n(n−2))+n−1}`, the `y` threshold of the gap
/// statements at `C = 1`.
pub fn gap_threshold_unit(n: usize, m: &BigInt, d: &BigInt, mahler: &Interval) -> Result<Interval> {
    require_n(n)?;
    require_d(d)?;
    let p = mahler.prec();
    let n_i = n as i64;
    let me = q_rat(2 * n_i - 2, n_i * (n_i - 2)) + BigRational::from_integer((n_i - 1).into());
    Ok(int(2, p)
        .div(&int(3, p).sqrt())
        .mul(&int(n_i + 1, p).powi(n_i))
        .mul(&int(n_i, p).sqrt())
        .mul(&int(m.clone(), p).powi(n_i))
        .mul(&int(d.abs(), p).pow(&rat(1, n_i * n_i * (n_i - 2), p)))
        .mul(&mahler.pow(&Interval::from_rational(&me, p))))
}

/// `C(s) = 150/s! · (s+2)^{s+5} 4^{s+1} e^{s+1}` and `C₀ = 10(s+1)` for `N = s + 1` logarithms.
pub fn place_constants(s: usize, prec: usize) -> (Interval, Interval) {
    let s_i = s as i64;
    let c = int(150, prec)
        .div(&int(factorial(s), prec))
        .mul(&int(s_i + 2, prec).powi(s_i + 5))
        .mul(&int(4, prec).powi(s_i + 1))
        .mul(&Interval::e(prec).powi(s_i + 1));
    (c, int(10 * (s_i + 1), prec))
}

/// `W₀ = 4 log(3d) + 2 log (s−1)! + log(r₃ + log m) + log(s−1)` with `d = n(n−1)(n−2)`.
pub fn w0_estimate(n: usize, s: usize, r3: &Interval, m: &BigInt) -> Interval {
    let p = r3.prec();
    let n_i = n as i64;
    let d = n_i * (n_i - 1) * (n_i - 2);
    int(3 * d, p)
        .ln()
        .mul_i64(4)
        .add(&int(factorial(s - 1), p).ln().mul_i64(2))
        .add(&r3.add(&int(m.clone(), p).ln()).ln())
        .add(&int(s as i64 - 1, p).ln())
}

/// `Ω = (2π n(n−1)(n−2))^s / (n−1)! · ((s−1)!)² |D| (log|D|)ⁿ (log m)^s · [4r₁/√n + 4 log m]
/// · (log n / log log n)^{3(s−1)}`.
pub fn omega_estimate(n: usize, s: usize, d: &BigInt, m: &BigInt, r1: &Interval) -> Interval {
    let p = r1.prec();
    let n_i = n as i64;
    let s_i = s as i64;
    let log_m = int(m.clone(), p).ln();
    let log_n = int(n_i, p).ln();
    let bracket = r1.mul_i64(4).div(&int(n_i, p).sqrt()).add(&log_m.mul_i64(4));
    Interval::pi(p)
        .mul_i64(2 * n_i * (n_i - 1) * (n_i - 2))
        .powi(s_i)
        .div(&int(factorial(n - 1), p))
        .mul(&int(factorial(s - 1), p).sqr())
        .mul(&int(d.abs(), p))
        .mul(&int(d.abs(), p).ln().powi(n_i))
        .mul(&log_m.powi(s_i))
        .mul(&bracket)
        .mul(&log_n.div(&log_n.ln()).powi(3 * (s_i - 1)))
}

/// `B = 4(s−1) ((s−1)!)² · 53 n log(6n) / 2^{s−2} · (r₃ + log m)`.
pub fn b_choice(n: usize, s: usize, r3: &Interval, m: &BigInt) -> Interval {
    let p = r3.prec();
    let n_i = n as i64;
    let s_i = s as i64;
    int(4 * (s_i - 1), p)
        .mul(&int(factorial(s - 1), p).sqr())
        .mul(&int(53 * n_i, p).mul(&int(6 * n_i, p).ln()))
        .div(&int(2, p).powi(s_i - 2))
        .mul(&r3.add(&int(m.clone(), p).ln()))
}

/// `2 log 2 + (4/√n)·‖Φ‖ + 4 log m`, bounding `h((α₁−α_i)/(α₁−α_j))`.
pub fn height_quotient_bound(n: usize, phi_norm: &Interval, m: &BigInt) -> Interval {
    let p = phi_norm.prec();
    int(2, p)
        .ln()
        .mul_i64(2)
        .add(&phi_norm.mul_i64(4).div(&int(n as i64, p).sqrt()))
        .add(&int(m.clone(), p).ln().mul_i64(4))
}

/// A bound value: exact rational for counts, an interval for real caps.
#[derive(Clone, Debug)]
pub enum BoundValue {
    Exact(BigRational),
    Real(Interval),
}

impl BoundValue {
    /// `⌊value⌋`, when certified.
    pub fn floor(&self) -> Option<BigInt> {
        match self {
            BoundValue::Exact(r) => Some(r.floor().to_integer()),
            BoundValue::Real(iv) => {
                let lo = iv.lo_rational()?.floor().to_integer();
                let hi = iv.hi_rational()?.floor().to_integer();
                (lo == hi).then_some(lo)
            }
        }
    }
}

impl Serialize for BoundValue {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            BoundValue::Exact(r) => s.serialize_str(&rational_string(r)),
            BoundValue::Real(iv) => iv.serialize(s),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundEntry {
    pub theorem_id: &'static str,
    pub applicable: Tri,
    /// The precondition that failed or could not be decided.
    pub reason: Option<String>,
    pub threshold: Option<Interval>,
    pub bound: Option<BoundValue>,
    #[serde(serialize_with = "ser_opt_int")]
    pub bound_floor: Option<BigInt>,
}

fn ser_opt_int<S: serde::Serializer>(v: &Option<BigInt>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(i) => s.serialize_str(&i.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub form: Option<BinaryForm>,
    pub n: usize,
    #[serde(with = "int_string")]
    pub discriminant: BigInt,
    #[serde(with = "int_string")]
    pub m: BigInt,
    #[serde(serialize_with = "ser_rational")]
    pub epsilon: BigRational,
    pub q: Option<usize>,
    pub mahler: Interval,
    pub irreducibility: Irreducibility,
    pub entries: Vec<BoundEntry>,
    pub comparisons: Vec<ComparisonRow>,
    pub notes: Vec<String>,
}

struct Pre {
    status: Tri,
    failed: Vec<String>,
}

impl Pre {
    fn new() -> Self {
        Pre {
            status: Tri::True,
            failed: Vec::new(),
        }
    }

    fn need(&mut self, t: Tri, text: impl Into<String>) -> &mut Self {
        if t != Tri::True {
            let text = text.into();
            self.failed.push(if t == Tri::Undecided { format!("undecided: {text}") } else { text });
        }
        self.status = self.status.and(t);
        self
    }

    fn entry(&self, id: &'static str, threshold: Option<Interval>, bound: Option<BoundValue>) -> BoundEntry {
        let bound_floor = bound.as_ref().and_then(BoundValue::floor);
        BoundEntry {
            theorem_id: id,
            applicable: self.status,
            reason: (!self.failed.is_empty()).then(|| self.failed.join("; ")),
            threshold,
            bound,
            bound_floor,
        }
    }
}

const IRREDUCIBLE: &str = "F irreducible";
const INEQ_THRESHOLD: &str = "0 < m <= |D|^(1/(4(n-1)) - eps) / (3.5^(n/2) n^(n/(4(n-1))))";
const EQ_THRESHOLD: &str = "0 < m <= |D|^(1/(2(n-1)) - eps) / (3.5^(n/2) n^(n/(2(n-1))))";
const SMALL_EQ_THRESHOLD: &str = "0 < m <= |D|^(1/(2(n-1)) - eps) / ((7/2)^n n^(n/(2(n-1))))";
const MEDIUM_THRESHOLD: &str = "m < |D|^(1/(2(n-1))) / ((7/2)^n n^(n/(2(n-1))))";
const LARGE_THRESHOLD: &str = "m < (2/7)^n (|D|/n^n)^(1/(2(n-1)))";

fn eps_pre(pre: &mut Pre, n: usize, eps: &BigRational, mode: Mode) -> bool {
    match check_epsilon(n, eps, mode) {
        Ok(()) => true,
        Err(e) => {
            pre.need(Tri::False, e.to_string());
            false
        }
    }
}

/// Evaluate every count bound and cap on the context.
pub fn bound_report(ctx: &BoundContext) -> Result<BoundReport> {
    require_n(ctx.n)?;
    require_d(&ctx.discriminant)?;
    let n = ctx.n;
    let p = ctx.prec;
    let q = ctx.q.unwrap_or(0);
    let irr = ctx.irreducible();
    let mut entries = Vec::new();

    for (id, mode, text) in [
        ("inequality_count", Mode::Inequality, INEQ_THRESHOLD),
        ("equation_count", Mode::Equation, EQ_THRESHOLD),
    ] {
        let mut pre = Pre::new();
        pre.need(irr, IRREDUCIBLE);
        let (threshold, bound) = if eps_pre(&mut pre, n, &ctx.epsilon, mode) {
            let th = m_threshold(n, &ctx.discriminant, &ctx.epsilon, mode, p)?;
            pre.need(qualifies(&ctx.m, &th), text);
            let b = match mode {
                Mode::Inequality => bound_ineq(n, &ctx.epsilon, ctx.q)?,
                Mode::Equation => bound_eq(n, &ctx.epsilon, ctx.q)?,
            };
            (Some(th), Some(BoundValue::Exact(b)))
        } else {
            (None, None)
        };
        entries.push(pre.entry(id, threshold, bound));
    }

    {
        let mut pre = Pre::new();
        pre.need(irr.not(), "F reducible");
        let (threshold, bound) = if eps_pre(&mut pre, n, &ctx.epsilon, Mode::Inequality) {
            let th = m_threshold_ineq(ctx)?;
            pre.need(qualifies(&ctx.m, &th), INEQ_THRESHOLD);
            (Some(th), Some(BoundValue::Exact(bound_reducible(n, &ctx.epsilon)?)))
        } else {
            (None, None)
        };
        entries.push(pre.entry("reducible_inequality_count", threshold, bound));
    }

    for (id, mode) in [("prime_inequality_count", Mode::Inequality), ("prime_equation_count", Mode::Equation)] {
        let mut pre = Pre::new();
        pre.need(irr, IRREDUCIBLE);
        let pb = prime_bound(n, &ctx.m, mode, p)?;
        entries.push(pre.entry(id, Some(pb.cutoff), Some(BoundValue::Exact(pb.total))));
    }

    {
        let mut pre = Pre::new();
        pre.need(irr, IRREDUCIBLE);
        let th = large_solution_threshold(n, &ctx.m, &ctx.mahler)?;
        let b = BigRational::from_integer(large_solution_bound(n)?.into());
        entries.push(pre.entry("large_solution_count", Some(th), Some(BoundValue::Exact(b))));
    }

    let caps = small_count_caps(ctx)?;
    for (id, cap, text) in [
        ("small_inequality_cap", caps.inequality, INEQ_THRESHOLD),
        ("small_equation_cap", caps.equation, SMALL_EQ_THRESHOLD),
    ] {
        let mut pre = Pre::new();
        match cap {
            Some(c) => {
                pre.need(c.met, text);
                entries.push(pre.entry(id, Some(c.threshold), Some(BoundValue::Exact(c.cap))));
            }
            None => {
                pre.need(Tri::False, "epsilon outside the admissible range");
                entries.push(pre.entry(id, None, None));
            }
        }
    }

    {
        let th = medium_threshold(n, &ctx.discriminant, p)?;
        let mut pre = Pre::new();
        pre.need(qualifies_strict(&ctx.m, &th), MEDIUM_THRESHOLD);
        let b = BigRational::from_integer(medium_cap(n, q).into());
        entries.push(pre.entry("medium_count_cap", Some(th), Some(BoundValue::Exact(b))));
    }

    {
        let mut pre = Pre::new();
        let (lo, _) = large_window(n, &ctx.m, &ctx.mahler)?;
        let b = BigRational::from_integer((3 * (n - 2 * q)).into());
        pre.need(Tri::True, "");
        entries.push(pre.entry("large_window_cap", Some(lo), Some(BoundValue::Exact(b))));
    }

    {
        let mut pre = Pre::new();
        pre.need(Tri::from_bool(q > 0), "F(X, 1) has a non-real root");
        let cap = nonreal_y_cap(n, &ctx.m, &ctx.discriminant, &ctx.mahler)?;
        entries.push(pre.entry("nonreal_related_y_cap", None, Some(BoundValue::Real(cap))));
    }

    {
        let mut pre = Pre::new();
        pre.need(irr.not(), "F reducible");
        entries.push(pre.entry("reducible_y_cap", None, Some(BoundValue::Real(reducible_y_cap(n, &ctx.mahler)))));
    }

    {
        let mut pre = Pre::new();
        pre.need(degree_disc_check(n, &ctx.discriminant, p), "n <= (3 + 2 log|D|)/log 3");
        entries.push(pre.entry("degree_discriminant_check", None, None));
    }

    {
        let th = large_count_threshold(n, &ctx.discriminant, p)?;
        let caps = large_count_caps(n, q)?;
        let met = qualifies_strict(&ctx.m, &th);
        let mut pre = Pre::new();
        pre.need(irr, IRREDUCIBLE).need(Tri::from_bool(n >= 5), "n >= 5").need(met, LARGE_THRESHOLD);
        let b = caps.degree_five_up.map(|c| BoundValue::Exact(BigRational::from_integer(c.into())));
        entries.push(pre.entry("large_count_cap", Some(th.clone()), b));
        let mut pre = Pre::new();
        pre.need(irr, IRREDUCIBLE).need(met, LARGE_THRESHOLD);
        let b = BoundValue::Exact(BigRational::from_integer(caps.all_degrees.into()));
        entries.push(pre.entry("large_count_cap_all_degrees", Some(th), Some(b)));
    }

    {
        let th = large_equation_threshold(n, &ctx.m, &ctx.mahler)?;
        let caps = large_count_caps(n, q)?;
        let mut pre = Pre::new();
        pre.need(irr, IRREDUCIBLE);
        let b = BoundValue::Exact(BigRational::from_integer(caps.best().into()));
        entries.push(pre.entry("large_equation_cap", Some(th), Some(b)));
    }

    let mut notes = Vec::new();
    if ctx.m.is_one() {
        notes.push("m = 1: every log m term vanishes".to_string());
    }
    if n >= 5 {
        notes.push(format!("large_solution_count: both 11n = {} and 9n = {} apply; the minimum is reported", 11 * n, 9 * n));
    }
    notes.push("large_count_cap thresholds differ from the equation_count threshold".to_string());

    Ok(BoundReport {
        form: ctx.form.clone(),
        n,
        discriminant: ctx.discriminant.clone(),
        m: ctx.m.clone(),
        epsilon: ctx.epsilon.clone(),
        q: ctx.q,
        mahler: ctx.mahler.clone(),
        irreducibility: ctx.irreducibility,
        entries,
        comparisons: comparison_bounds(ctx),
        notes,
    })
}

/// Human-readable decimal of an exact rational (20 significant digits, rounded down).
pub fn rational_decimal(r: &BigRational) -> String {
    decimal_of_rational(r, 20, false)
}

#[cfg(test)]
mod tests {
    use super::*;

    const P: usize = 128;

    fn r(s: &str) -> BigRational {
        crate::numeric::parse_rational(s).unwrap()
    }

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn close(iv: &Interval, want: f64, rel: f64) {
        let mid = iv.mid_f64();
        assert!(((mid - want) / want).abs() < rel, "{iv:?} vs {want}");
    }

    #[test]
    fn small_m_thresholds() {
        let th = m_threshold(3, &b(-108), &r("0.01"), Mode::Inequality, P).unwrap();
        let want = 108f64.powf(0.115) / (3.5f64.powf(1.5) * 3f64.powf(0.375));
        close(&th, want, 1e-12);
        assert!((want - 0.173).abs() < 1e-3);
        assert_eq!(qualifies(&b(1), &th), Tri::False);

        let d = num_traits::pow(b(10), 16);
        let th = m_threshold(3, &d, &r("0.01"), Mode::Inequality, P).unwrap();
        let want = 10f64.powf(16.0 * 0.115) / (3.5f64.powf(1.5) * 3f64.powf(0.375));
        close(&th, want, 1e-12);
        assert_eq!(qualifies(&b(6), &th), Tri::True);
        assert_eq!(qualifies(&b(7), &th), Tri::False);

        let near_top = epsilon_upper(3, Mode::Inequality) - r("1/1000000");
        let th = m_threshold(3, &b(108), &near_top, Mode::Inequality, P).unwrap();
        assert_eq!(qualifies(&b(1), &th), Tri::False);
    }

    #[test]
    fn epsilon_range_is_open() {
        assert!(matches!(bound_ineq(3, &r("1/8"), None), Err(Error::EpsilonOutOfRange { .. })));
        assert!(matches!(bound_ineq(3, &r("0"), None), Err(Error::EpsilonOutOfRange { .. })));
        assert!(bound_eq(3, &r("1/8"), None).is_ok());
        assert!(matches!(bound_eq(3, &r("1/4"), None), Err(Error::EpsilonOutOfRange { .. })));
        assert!(matches!(bound_ineq(2, &r("0.01"), None), Err(Error::DegreeTooSmall { .. })));
    }

    #[test]
    fn count_bounds() {
        assert_eq!(bound_ineq(5, &r("0.05"), None).unwrap(), r("47.5"));
        assert_eq!(bound_ineq(5, &r("0.05"), Some(1)).unwrap(), r("33"));
        assert_eq!(bound_eq(3, &r("0.1"), None).unwrap(), r("42"));
        assert_eq!(bound_reducible(4, &r("0.05")).unwrap(), r("64/3"));
        assert_eq!(bound_reducible(3, &r("0.1")).unwrap(), r("13.5"));
        assert_eq!(bound_ineq(4, &r("0.05"), Some(1)).unwrap(), r("20") + r("3") / r("0.3"));
    }

    #[test]
    fn prime_bounds() {
        let pb = prime_bound(3, &b(1), Mode::Inequality, P).unwrap();
        assert_eq!(pb.ceiling, b(451));
        assert_eq!(pb.prime, b(457));
        assert_eq!(pb.total, r("13282"));
        close(&pb.cutoff, 450.1875, 1e-15);
        let pb = prime_bound(3, &b(1), Mode::Equation, P).unwrap();
        assert_eq!(pb.prime, b(37));
        assert_eq!(pb.total, r("1102"));
        let pb = prime_bound(4, &b(16), Mode::Equation, P).unwrap();
        let cutoff = 16f64.powf(1.0) * 12.25 * 4f64.powf(2.0 / 3.0);
        assert_eq!(pb.ceiling, BigInt::from(cutoff.ceil() as i64));
    }

    #[test]
    fn large_solutions() {
        let th = large_solution_threshold(3, &b(1), &Interval::from_i64(2, P)).unwrap();
        let base = 8.0 * 3f64.powf(2.5) * 2.0;
        close(&th, base.powf(1.5), 1e-12);
        assert!((th.mid_f64() - 3939.0).abs() < 1.0);
        assert_eq!(large_solution_bound(3).unwrap(), 33);
        assert_eq!(large_solution_bound(4).unwrap(), 44);
        assert_eq!(large_solution_bound(5).unwrap(), 45);
    }

    #[test]
    fn small_caps() {
        assert_eq!(small_cap(3, 1, &r("0.1"), Mode::Inequality).unwrap(), r("7"));
        assert_eq!(small_cap(3, 1, &r("0.1"), Mode::Equation).unwrap(), r("12"));
        assert!(small_cap(3, 1, &r("0.2"), Mode::Inequality).is_err());
    }

    #[test]
    fn windows_and_caps() {
        let (lo, hi) = medium_window(&Interval::from_i64(2, P), 3);
        assert_eq!((lo.mid_f64(), hi.mid_f64()), (4.0, 32.0));
        let cap = nonreal_y_cap(3, &b(1), &b(-108), &Interval::from_i64(2, P)).unwrap();
        let want = 4.0 * 2f64.powf(4.0 / 3.0) / (3f64.sqrt() * 108.0).powf(1.0 / 3.0) * 4.0;
        close(&cap, want, 1e-12);
        assert!((cap.mid_f64() - 7.05).abs() < 0.01);
        assert_eq!(degree_disc_check(3, &b(-108), P), Tri::True);
        close(&reducible_y_cap(3, &Interval::from_i64(2, P)), 2f64.powf(4.5) * 8.0, 1e-12);
        let a = medium_threshold(5, &b(1_000_000_007), P).unwrap();
        let c = large_count_threshold(5, &b(1_000_000_007), P).unwrap();
        close(&a, c.mid_f64(), 1e-20);
        assert_eq!(medium_cap(3, 1), 4);
        assert_eq!(large_count_caps(5, 1).unwrap(), LargeCaps { degree_five_up: Some(12), all_degrees: 18 });
    }

    #[test]
    fn comparison_rows() {
        let (nn, delta) = evertse_gyory(3);
        assert_eq!(nn, b(126));
        assert_eq!(delta, r("5"));
        assert_eq!(evertse_gyory(400), (b(2400), r("47880")));
        assert_eq!(omega(&b(12)), 2);
        let ctx = BoundContext {
            form: None,
            n: 3,
            discriminant: b(-108),
            m: b(12),
            epsilon: r("1"),
            q: Some(1),
            mahler: Interval::from_i64(2, P),
            height: b(2),
            a0: b(1),
            irreducibility: Irreducibility::Irreducible,
            gyory_a: r("1/2"),
            prec: P,
        };
        let rows = comparison_bounds(&ctx);
        let get = |name: &str| rows.iter().find(|r| r.name == name).unwrap();
        assert_eq!(get("stewart").bound, "4375");
        assert_eq!(get("bppw").bound, (2 * 9 * 3 + 39).to_string());
        assert_eq!(get("bombieri_schmidt").bound, "C2 * 27");
        assert_eq!(get("mahler").bound, "C1^3");
        assert_eq!(get("evertse_gyory").applicable, Tri::False);
        assert_eq!(get("gyory").bound, "385/4");
    }

    #[test]
    fn matveev_examples() {
        let one = Interval::one(P);
        let mp = matveev_constants(1, 1, 1, &one).unwrap();
        let e = std::f64::consts::E;
        close(&mp.c_n, 7680.0 * e * e, 1e-12);
        assert!((mp.c_n.mid_f64() - 5.6747e4).abs() < 1.0);
        close(&mp.c0, 11.4, 1e-15);
        close(&mp.w0, (1.5 * e).ln(), 1e-15);
        let mp = matveev_constants(3, 2, 6, &Interval::from_i64(10, P)).unwrap();
        let c = 16.0 / 12.0 * e.powi(3) * 11.0 * 5.0 * 16f64.powi(4) * (1.5 * e).powi(2);
        close(&mp.c_n, c, 1e-12);
        let c0 = (e.powf(20.2) * 3f64.powf(5.5) * 36.0 * (3.0 * e).ln()).ln();
        close(&mp.c0, c0, 1e-12);
        let mp = mp.with_heights(vec![Interval::from_i64(2, P); 3]).unwrap();
        close(&mp.omega, 8.0, 1e-15);
        assert!(mp.log_lower_bound().is_neg());
        assert!(matveev_constants(1, 3, 1, &one).is_err());
    }

    #[test]
    fn sunit_examples() {
        let sb = sunit_bounds(3, 3, 1, &b(2), &b(108), 1, P).unwrap();
        close(&sb.delta, 2.0 / std::f64::consts::PI * 108f64.sqrt(), 1e-14);
        assert!((sb.delta.mid_f64() - 6.616).abs() < 1e-3);
        close(&sb.c4, 4.0 / 18.0, 1e-15);
        let dk = 1.0 / (159.0 * 18f64.ln());
        close(&sb.delta_k, dk, 1e-14);
        assert!((dk - 0.002176).abs() < 1e-6);
        close(&sb.c5, 4.0 / 18.0 * (dk / 3.0).powi(-1), 1e-12);
        assert!(sb.rank_consistent);
        let ld = sb.delta.mid_f64().ln();
        close(&sb.regulator, sb.delta.mid_f64() * ld * (2.0 + ld) * 3.0 / 2.0, 1e-12);
        assert!(matches!(sunit_bounds(1, 1, 0, &b(1), &b(1), 0, P), Err(Error::DegreeTooSmall { .. })));
        assert_eq!(place_count_bound(3, &b(10), Mode::Inequality).unwrap(), 15);
        assert_eq!(place_count_bound(3, &b(12), Mode::Equation).unwrap(), 9);
    }

    #[test]
    fn gap_amplitudes() {
        let m2 = Interval::from_i64(2, P);
        let c = Interval::one(P);
        let g = gap_constants(5, &b(2), &m2, &b(1_000_000), 10, &c).unwrap();
        let l2 = 2f64.ln();
        let want = 0.25 * 20f64.powf(0.75) * (21.0 * l2).powf(1.5);
        close(&g.a_three, want, 1e-12);
        assert!((g.a_three.mid_f64() - 131.3).abs() < 0.05);
        let want4 = 20f64.powf(0.75) * (15.0 * l2 + 12.0 * l2).powf(1.5) / (8.0 * 2f64.sqrt());
        close(&g.a_four, want4, 1e-12);
        let br = gap_bracket(5, &b(2), &m2, GapVariant::Three);
        let ratio = gap_amplitude(5, &c, &br, GapVariant::Four).div(&gap_amplitude(5, &c, &br, GapVariant::Three));
        close(&ratio, 1.0 / (2.0 * 2f64.sqrt()), 1e-15);
        assert!(ratio.width_f64() < 1e-30);
        let zero = gap_amplitude(3, &c, &gap_bracket(3, &b(1), &Interval::one(P), GapVariant::Three), GapVariant::Three);
        assert_eq!(zero.mid_f64(), 0.0);
    }

    #[test]
    fn k_constants() {
        let k = k_constant(3, 6, &b(108), &b(2), P).unwrap();
        let l2 = 2f64.ln();
        let l3 = 3f64.ln();
        let want = 2500.0
            * 8f64.powi(19)
            * (4.0 * std::f64::consts::PI).powi(8)
            * 6f64.powi(8)
            * 108.0
            * 108f64.ln().powi(3)
            * l2.powi(7)
            * l2.ln()
            * (l3 / l3.ln()).powi(15);
        close(&k, want, 1e-10);
        assert!(k.is_neg());
        assert!(k1_constant(3, &k).is_none());
        let frozen = -1.2094723847644452e54;
        assert!(((k.mid_f64() - frozen) / frozen).abs() < 1e-4, "{}", k.mid_f64());
        assert_eq!(k_constant(3, 6, &b(108), &b(1), P).unwrap().mid_f64(), 0.0);
        let k = k_constant(3, 4, &b(108), &b(3), P).unwrap();
        assert!(k.is_pos());
        let k1 = k1_constant(3, &k).unwrap();
        let e = std::f64::consts::E;
        close(&k1, (3.0 * 3f64.sqrt() * k.mid_f64()).powf(e / (e - 1.0)), 1e-9);
    }

    #[test]
    fn section_constants() {
        let (c, c0) = place_constants(3, P);
        close(&c, 150.0 / 6.0 * 5f64.powi(8) * 256.0 * std::f64::consts::E.powi(4), 1e-12);
        close(&c0, 40.0, 1e-15);
        let r3 = Interval::from_i64(10, P);
        let w0 = w0_estimate(3, 3, &r3, &b(2));
        let want = 4.0 * 18f64.ln() + 2.0 * 2f64.ln() + (10.0 + 2f64.ln()).ln() + 2f64.ln();
        close(&w0, want, 1e-14);
        let bb = b_choice(3, 3, &r3, &b(2));
        close(&bb, 8.0 * 4.0 * 159.0 * 18f64.ln() / 2.0 * (10.0 + 2f64.ln()), 1e-14);
        let om = omega_estimate(3, 3, &b(108), &b(2), &r3);
        let l3 = 3f64.ln();
        let want = (12.0 * std::f64::consts::PI).powi(3) / 2.0
            * 4.0
            * 108.0
            * 108f64.ln().powi(3)
            * 2f64.ln().powi(3)
            * (40.0 / 3f64.sqrt() + 4.0 * 2f64.ln())
            * (l3 / l3.ln()).powi(6);
        close(&om, want, 1e-12);
    }

    #[test]
    fn height_quotient_examples() {
        let hq = height_quotient_bound(3, &Interval::zero(P), &b(1));
        close(&hq, 2.0 * 2f64.ln(), 1e-15);
        let hq = height_quotient_bound(4, &Interval::from_i64(10, P), &b(3));
        close(&hq, 2.0 * 2f64.ln() + 20.0 + 4.0 * 3f64.ln(), 1e-15);
        assert!((hq.mid_f64() - 25.78).abs() < 0.01);
    }

    #[test]
    fn report_for_cube_root_two() {
        let f: BinaryForm = "x^3 - 2*y^3".parse().unwrap();
        let ctx = BoundContext::from_form(&f, &b(1), &r("0.01"), &Config::default()).unwrap();
        let rep = bound_report(&ctx).unwrap();
        let get = |id: &str| rep.entries.iter().find(|e| e.theorem_id == id).unwrap();
        let e = get("inequality_count");
        assert_eq!(e.applicable, Tri::False);
        assert!(e.reason.as_deref().unwrap().contains("3.5^(n/2)"));
        assert_eq!(e.bound_floor, Some(b(61)));
        assert_eq!(get("prime_inequality_count").applicable, Tri::True);
        assert_eq!(get("large_solution_count").bound_floor, Some(b(33)));
        assert_eq!(get("reducible_y_cap").applicable, Tri::False);
        let json = serde_json::to_value(&rep).unwrap();
        assert_eq!(json["entries"][0]["theorem_id"], "inequality_count");
        assert_eq!(json["form"], "x^3 - 2*y^3");
    }
}
