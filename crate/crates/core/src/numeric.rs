//! Outward-rounded real intervals and complex boxes over `astro_float::BigFloat`.
//!
//! Every operation rounds the lower endpoint toward −∞ and the upper endpoint
//! toward +∞, so the true value of any expression built from these operations
//! lies in the resulting interval.

use std::cell::RefCell;
use std::cmp::Ordering;
use std::fmt;

use astro_float::{BigFloat, Consts, RoundingMode, Sign, Word, INF_NEG, INF_POS, WORD_BIT_SIZE};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

const _: () = assert!(WORD_BIT_SIZE == 64, "mantissa conversion assumes 64-bit words");

/// Default working precision in bits.
pub const DEFAULT_PRECISION: usize = 128;

const DOWN: RoundingMode = RoundingMode::Down;
const UP: RoundingMode = RoundingMode::Up;

thread_local! {
    static CONSTS: RefCell<Consts> = RefCell::new(Consts::new().expect("astro-float constant cache"));
}

fn with_consts<R>(f: impl FnOnce(&mut Consts) -> R) -> R {
    CONSTS.with(|c| f(&mut c.borrow_mut()))
}

/// Three-valued truth for certified comparisons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Tri {
    True,
    False,
    Undecided,
}

impl Tri {
    pub fn from_bool(b: bool) -> Self {
        if b {
            Tri::True
        } else {
            Tri::False
        }
    }

    pub fn and(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::False, _) | (_, Tri::False) => Tri::False,
            (Tri::True, Tri::True) => Tri::True,
            _ => Tri::Undecided,
        }
    }

    pub fn or(self, other: Tri) -> Tri {
        match (self, other) {
            (Tri::True, _) | (_, Tri::True) => Tri::True,
            (Tri::False, Tri::False) => Tri::False,
            _ => Tri::Undecided,
        }
    }

    pub fn not(self) -> Tri {
        match self {
            Tri::True => Tri::False,
            Tri::False => Tri::True,
            Tri::Undecided => Tri::Undecided,
        }
    }

    pub fn is_true(self) -> bool {
        self == Tri::True
    }
}

impl fmt::Display for Tri {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Tri::True => "true",
            Tri::False => "false",
            Tri::Undecided => "undecided",
        })
    }
}

/// Exact conversion of an integer to a `BigFloat` (precision grows with the integer).
pub fn bf_from_bigint(i: &BigInt) -> BigFloat {
    if i.is_zero() {
        return BigFloat::from_word(0, 64);
    }
    let (sign, digits) = i.to_u64_digits();
    let words: Vec<Word> = digits.iter().map(|&d| d as Word).collect();
    let s = if sign == num_bigint::Sign::Minus { Sign::Neg } else { Sign::Pos };
    BigFloat::from_words(&words, s, (words.len() * 64) as i32)
}

/// Exact conversion of a finite `BigFloat` to a rational. `None` for NaN or infinities.
pub fn bf_to_rational(x: &BigFloat) -> Option<BigRational> {
    if x.is_zero() {
        return Some(BigRational::zero());
    }
    let (m, _, s, e, _) = x.as_raw_parts()?;
    let mut mant = BigUint::zero();
    for w in m.iter().rev() {
        mant = (mant << 64u32) | BigUint::from(*w as u64);
    }
    let mut v = BigInt::from(mant);
    if s == Sign::Neg {
        v = -v;
    }
    let shift = e as i64 - 64 * m.len() as i64;
    let r = if shift >= 0 {
        BigRational::from_integer(v << (shift as u64))
    } else {
        BigRational::new(v, BigInt::one() << ((-shift) as u64))
    };
    Some(r)
}

fn ldexp(mut x: f64, mut e: i64) -> f64 {
    while e > 1000 {
        x *= 2f64.powi(1000);
        e -= 1000;
        if x.is_infinite() {
            return x;
        }
    }
    while e < -1000 {
        x *= 2f64.powi(-1000);
        e += 1000;
        if x == 0.0 {
            return x;
        }
    }
    x * 2f64.powi(e as i32)
}

/// Directed conversion to `f64`: the result is ≤ x for `Down`, ≥ x for `Up`.
pub fn bf_to_f64(x: &BigFloat, rm: RoundingMode) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x.is_inf_pos() {
        return f64::INFINITY;
    }
    if x.is_inf_neg() {
        return f64::NEG_INFINITY;
    }
    if x.is_zero() {
        return 0.0;
    }
    let mut y = x.clone();
    if y.set_precision(53, rm).is_err() {
        return f64::NAN;
    }
    let (m, _, s, e, _) = y.as_raw_parts().expect("finite");
    // After rounding to 53 bits the top word holds the whole mantissa exactly.
    let top = m[m.len() - 1];
    let mag = ldexp(top as f64, e as i64 - 64);
    if s == Sign::Neg {
        -mag
    } else {
        mag
    }
}

fn bf_cmp(a: &BigFloat, b: &BigFloat) -> Option<Ordering> {
    a.cmp(b).map(|c| c.cmp(&0))
}

fn bf_lt(a: &BigFloat, b: &BigFloat) -> bool {
    bf_cmp(a, b) == Some(Ordering::Less)
}

fn bf_le(a: &BigFloat, b: &BigFloat) -> bool {
    matches!(bf_cmp(a, b), Some(Ordering::Less | Ordering::Equal))
}

fn min_bf(a: BigFloat, b: BigFloat) -> BigFloat {
    if a.is_nan() || b.is_nan() {
        return INF_NEG;
    }
    if bf_le(&a, &b) {
        a
    } else {
        b
    }
}

fn max_bf(a: BigFloat, b: BigFloat) -> BigFloat {
    if a.is_nan() || b.is_nan() {
        return INF_POS;
    }
    if bf_le(&a, &b) {
        b
    } else {
        a
    }
}

fn fix_lo(x: BigFloat) -> BigFloat {
    if x.is_nan() {
        INF_NEG
    } else {
        x
    }
}

fn fix_hi(x: BigFloat) -> BigFloat {
    if x.is_nan() {
        INF_POS
    } else {
        x
    }
}

fn mul_dir(a: &BigFloat, b: &BigFloat, p: usize, rm: RoundingMode) -> BigFloat {
    if a.is_zero() || b.is_zero() {
        return BigFloat::from_word(0, p);
    }
    a.mul(b, p, rm)
}

fn round_dir(x: &BigFloat, p: usize, rm: RoundingMode) -> BigFloat {
    let mut y = x.clone();
    if x.is_nan() || x.is_inf() {
        return y;
    }
    if y.precision().is_some_and(|q| q > p) {
        y.set_precision(p, rm).expect("precision change");
    }
    y
}

/// A closed real interval `[lo, hi]` with outward-rounded arithmetic.
#[derive(Clone)]
pub struct Interval {
    lo: BigFloat,
    hi: BigFloat,
    prec: usize,
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{:e}, {:e}]", self.lo_f64(), self.hi_f64())
    }
}

impl fmt::Display for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}, {}]", self.lo_f64(), self.hi_f64())
    }
}

impl Interval {
    /// Interval from explicit endpoints; `lo ≤ hi` is the caller's invariant.
    pub fn new(lo: BigFloat, hi: BigFloat, prec: usize) -> Self {
        Interval {
            lo: fix_lo(lo),
            hi: fix_hi(hi),
            prec,
        }
    }

    pub fn entire(prec: usize) -> Self {
        Interval::new(INF_NEG, INF_POS, prec)
    }

    pub fn point(x: &BigFloat, prec: usize) -> Self {
        Interval::new(round_dir(x, prec, DOWN), round_dir(x, prec, UP), prec)
    }

    pub fn zero(prec: usize) -> Self {
        Interval::from_i64(0, prec)
    }

    pub fn one(prec: usize) -> Self {
        Interval::from_i64(1, prec)
    }

    pub fn from_i64(v: i64, prec: usize) -> Self {
        Interval::from_int(&BigInt::from(v), prec)
    }

    pub fn from_int(v: &BigInt, prec: usize) -> Self {
        Interval::point(&bf_from_bigint(v), prec)
    }

    pub fn from_rational(r: &BigRational, prec: usize) -> Self {
        let n = Interval::from_int(r.numer(), prec);
        if r.denom().is_one() {
            return n;
        }
        n.div(&Interval::from_int(r.denom(), prec))
    }

    /// Encloses the decimal value of an `f64` exactly (f64 values are dyadic).
    pub fn from_f64(v: f64, prec: usize) -> Self {
        let x = BigFloat::from_f64(v, 64);
        Interval::point(&x, prec)
    }

    pub fn pi(prec: usize) -> Self {
        with_consts(|cc| Interval::new(cc.pi(prec, DOWN), cc.pi(prec, UP), prec))
    }

    pub fn e(prec: usize) -> Self {
        Interval::one(prec).exp()
    }

    pub fn lo(&self) -> &BigFloat {
        &self.lo
    }

    pub fn hi(&self) -> &BigFloat {
        &self.hi
    }

    pub fn prec(&self) -> usize {
        self.prec
    }

    /// Same interval tagged with a new working precision.
    pub fn with_prec(&self, prec: usize) -> Self {
        Interval::new(round_dir(&self.lo, prec, DOWN), round_dir(&self.hi, prec, UP), prec)
    }

    pub fn lo_f64(&self) -> f64 {
        bf_to_f64(&self.lo, DOWN)
    }

    pub fn hi_f64(&self) -> f64 {
        bf_to_f64(&self.hi, UP)
    }

    /// Midpoint as an `f64` approximation (not certified).
    pub fn mid_f64(&self) -> f64 {
        let m = self.mid();
        bf_to_f64(&m, RoundingMode::ToEven)
    }

    pub fn mid(&self) -> BigFloat {
        if self.lo.is_inf() || self.hi.is_inf() {
            return BigFloat::from_word(0, self.prec);
        }
        let s = self.lo.add(&self.hi, self.prec + 2, RoundingMode::ToEven);
        s.div(&BigFloat::from_word(2, 64), self.prec + 2, RoundingMode::ToEven)
    }

    /// Upper bound on `hi − lo`.
    pub fn width(&self) -> BigFloat {
        self.hi.sub(&self.lo, self.prec, UP)
    }

    pub fn width_f64(&self) -> f64 {
        bf_to_f64(&self.width(), UP)
    }

    pub fn is_finite(&self) -> bool {
        !self.lo.is_inf() && !self.hi.is_inf() && !self.lo.is_nan() && !self.hi.is_nan()
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive_strict() && !self.hi.is_negative_strict()
    }

    pub fn contains(&self, x: &BigFloat) -> bool {
        bf_le(&self.lo, x) && bf_le(x, &self.hi)
    }

    pub fn contains_rational(&self, r: &BigRational) -> bool {
        match (bf_to_rational(&self.lo), bf_to_rational(&self.hi)) {
            (Some(lo), Some(hi)) => &lo <= r && r <= &hi,
            (None, Some(hi)) => r <= &hi,
            (Some(lo), None) => &lo <= r,
            (None, None) => true,
        }
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        bf_le(&self.lo, &other.lo) && bf_le(&other.hi, &self.hi)
    }

    /// Certainly positive.
    pub fn is_pos(&self) -> bool {
        self.lo.is_positive_strict()
    }

    /// Certainly negative.
    pub fn is_neg(&self) -> bool {
        self.hi.is_negative_strict()
    }

    /// Certified `self < other`.
    pub fn lt(&self, other: &Interval) -> Tri {
        if bf_lt(&self.hi, &other.lo) {
            Tri::True
        } else if bf_le(&other.hi, &self.lo) {
            Tri::False
        } else {
            Tri::Undecided
        }
    }

    /// Certified `self ≤ other`.
    pub fn le(&self, other: &Interval) -> Tri {
        if bf_le(&self.hi, &other.lo) {
            Tri::True
        } else if bf_lt(&other.hi, &self.lo) {
            Tri::False
        } else {
            Tri::Undecided
        }
    }

    pub fn gt(&self, other: &Interval) -> Tri {
        other.lt(self)
    }

    pub fn ge(&self, other: &Interval) -> Tri {
        other.le(self)
    }

    /// Interval hull.
    pub fn hull(&self, other: &Interval) -> Interval {
        Interval::new(
            min_bf(self.lo.clone(), other.lo.clone()),
            max_bf(self.hi.clone(), other.hi.clone()),
            self.prec.max(other.prec),
        )
    }

    fn p(&self, other: &Interval) -> usize {
        self.prec.max(other.prec)
    }

    pub fn add(&self, other: &Interval) -> Interval {
        let p = self.p(other);
        Interval::new(self.lo.add(&other.lo, p, DOWN), self.hi.add(&other.hi, p, UP), p)
    }

    pub fn sub(&self, other: &Interval) -> Interval {
        let p = self.p(other);
        Interval::new(self.lo.sub(&other.hi, p, DOWN), self.hi.sub(&other.lo, p, UP), p)
    }

    pub fn neg(&self) -> Interval {
        Interval::new(self.hi.neg(), self.lo.neg(), self.prec)
    }

    pub fn mul(&self, other: &Interval) -> Interval {
        let p = self.p(other);
        let (a, b, c, d) = (&self.lo, &self.hi, &other.lo, &other.hi);
        let lo = [
            mul_dir(a, c, p, DOWN),
            mul_dir(a, d, p, DOWN),
            mul_dir(b, c, p, DOWN),
            mul_dir(b, d, p, DOWN),
        ]
        .into_iter()
        .reduce(min_bf)
        .expect("four products");
        let hi = [
            mul_dir(a, c, p, UP),
            mul_dir(a, d, p, UP),
            mul_dir(b, c, p, UP),
            mul_dir(b, d, p, UP),
        ]
        .into_iter()
        .reduce(max_bf)
        .expect("four products");
        Interval::new(lo, hi, p)
    }

    pub fn mul_i64(&self, k: i64) -> Interval {
        self.mul(&Interval::from_i64(k, self.prec))
    }

    pub fn div(&self, other: &Interval) -> Interval {
        let p = self.p(other);
        if other.contains_zero() {
            return Interval::entire(p);
        }
        let (a, b, c, d) = (&self.lo, &self.hi, &other.lo, &other.hi);
        let lo = [a.div(c, p, DOWN), a.div(d, p, DOWN), b.div(c, p, DOWN), b.div(d, p, DOWN)]
            .into_iter()
            .reduce(min_bf)
            .expect("four quotients");
        let hi = [a.div(c, p, UP), a.div(d, p, UP), b.div(c, p, UP), b.div(d, p, UP)]
            .into_iter()
            .reduce(max_bf)
            .expect("four quotients");
        Interval::new(lo, hi, p)
    }

    pub fn div_i64(&self, k: i64) -> Interval {
        self.div(&Interval::from_i64(k, self.prec))
    }

    pub fn recip(&self) -> Interval {
        Interval::one(self.prec).div(self)
    }

    pub fn abs(&self) -> Interval {
        if self.lo.is_positive() || self.lo.is_zero() {
            self.clone()
        } else if self.hi.is_negative() || self.hi.is_zero() {
            self.neg()
        } else {
            Interval::new(
                BigFloat::from_word(0, self.prec),
                max_bf(self.lo.neg(), self.hi.clone()),
                self.prec,
            )
        }
    }

    pub fn sqr(&self) -> Interval {
        let a = self.abs();
        let p = self.prec;
        Interval::new(mul_dir(&a.lo, &a.lo, p, DOWN), mul_dir(&a.hi, &a.hi, p, UP), p)
    }

    /// Square root of the non-negative part.
    pub fn sqrt(&self) -> Interval {
        let p = self.prec;
        let zero = BigFloat::from_word(0, p);
        let lo = if self.lo.is_positive_strict() {
            self.lo.sqrt(p, DOWN)
        } else {
            zero.clone()
        };
        let hi = if self.hi.is_positive_strict() {
            self.hi.sqrt(p, UP)
        } else {
            zero
        };
        Interval::new(lo, hi, p)
    }

    /// Natural logarithm; a non-positive lower endpoint maps to −∞.
    pub fn ln(&self) -> Interval {
        let p = self.prec;
        with_consts(|cc| {
            let lo = if self.lo.is_positive_strict() {
                self.lo.ln(p, DOWN, cc)
            } else {
                INF_NEG
            };
            let hi = if self.hi.is_positive_strict() {
                self.hi.ln(p, UP, cc)
            } else {
                INF_NEG
            };
            Interval::new(lo, hi, p)
        })
    }

    pub fn exp(&self) -> Interval {
        let p = self.prec;
        with_consts(|cc| Interval::new(self.lo.exp(p, DOWN, cc), self.hi.exp(p, UP, cc), p))
    }

    /// `self^e` for a positive base.
    pub fn pow(&self, e: &Interval) -> Interval {
        self.ln().mul(e).exp()
    }

    pub fn pow_rational(&self, e: &BigRational) -> Interval {
        if e.is_integer() {
            if let Some(k) = e.numer().to_i64() {
                return self.powi(k);
            }
        }
        self.pow(&Interval::from_rational(e, self.prec))
    }

    /// Integer power with exact handling of sign.
    pub fn powi(&self, k: i64) -> Interval {
        if k < 0 {
            return self.powi(-k).recip();
        }
        if k == 0 {
            return Interval::one(self.prec);
        }
        let k = k as u64;
        let p = self.prec;
        let pow_abs = |x: &BigFloat, rm: RoundingMode| -> BigFloat {
            let base = x.abs();
            let mut acc = BigFloat::from_word(1, p);
            let mut b = base;
            let mut e = k;
            while e > 0 {
                if e & 1 == 1 {
                    acc = mul_dir(&acc, &b, p, rm);
                }
                e >>= 1;
                if e > 0 {
                    b = mul_dir(&b, &b, p, rm);
                }
            }
            acc
        };
        if k % 2 == 0 {
            let a = self.abs();
            return Interval::new(pow_abs(&a.lo, DOWN), pow_abs(&a.hi, UP), p);
        }
        let odd = |x: &BigFloat, lower: bool| -> BigFloat {
            if x.is_negative_strict() {
                pow_abs(x, if lower { UP } else { DOWN }).neg()
            } else {
                pow_abs(x, if lower { DOWN } else { UP })
            }
        };
        Interval::new(odd(&self.lo, true), odd(&self.hi, false), p)
    }

    pub fn atan(&self) -> Interval {
        let p = self.prec;
        with_consts(|cc| Interval::new(self.lo.atan(p, DOWN, cc), self.hi.atan(p, UP, cc), p))
    }

    pub fn max(&self, other: &Interval) -> Interval {
        Interval::new(
            max_bf(self.lo.clone(), other.lo.clone()),
            max_bf(self.hi.clone(), other.hi.clone()),
            self.p(other),
        )
    }

    pub fn min(&self, other: &Interval) -> Interval {
        Interval::new(
            min_bf(self.lo.clone(), other.lo.clone()),
            min_bf(self.hi.clone(), other.hi.clone()),
            self.p(other),
        )
    }

    /// Integers contained in the interval, if it is finite and holds at most `cap` of them.
    pub fn integers_inside(&self, cap: usize) -> Option<Vec<BigInt>> {
        let lo = bf_to_rational(&self.lo)?;
        let hi = bf_to_rational(&self.hi)?;
        let first = lo.ceil().to_integer();
        let last = hi.floor().to_integer();
        let mut out = Vec::new();
        let mut k = first;
        while k <= last {
            if out.len() == cap {
                return None;
            }
            out.push(k.clone());
            k += 1;
        }
        Some(out)
    }

    /// Rational lower endpoint (exact).
    pub fn lo_rational(&self) -> Option<BigRational> {
        bf_to_rational(&self.lo)
    }

    /// Rational upper endpoint (exact).
    pub fn hi_rational(&self) -> Option<BigRational> {
        bf_to_rational(&self.hi)
    }

    /// Relative width `(hi − lo)/|mid|`, as an f64 upper estimate.
    pub fn rel_width_f64(&self) -> f64 {
        let w = self.width_f64();
        let m = self.mid_f64().abs();
        if m == 0.0 {
            w
        } else {
            w / m
        }
    }
}

trait StrictSign {
    fn is_positive_strict(&self) -> bool;
    fn is_negative_strict(&self) -> bool;
}

impl StrictSign for BigFloat {
    fn is_positive_strict(&self) -> bool {
        !self.is_nan() && !self.is_zero() && self.is_positive()
    }

    fn is_negative_strict(&self) -> bool {
        !self.is_nan() && !self.is_zero() && self.is_negative()
    }
}

/// Rectangle `re + i·im` in the complex plane.
#[derive(Clone, Debug)]
pub struct ComplexBox {
    pub re: Interval,
    pub im: Interval,
}

impl ComplexBox {
    pub fn new(re: Interval, im: Interval) -> Self {
        ComplexBox { re, im }
    }

    pub fn real(re: Interval) -> Self {
        let p = re.prec();
        ComplexBox { re, im: Interval::zero(p) }
    }

    pub fn from_int(v: &BigInt, prec: usize) -> Self {
        ComplexBox::real(Interval::from_int(v, prec))
    }

    pub fn from_rational(v: &BigRational, prec: usize) -> Self {
        ComplexBox::real(Interval::from_rational(v, prec))
    }

    pub fn prec(&self) -> usize {
        self.re.prec().max(self.im.prec())
    }

    pub fn add(&self, o: &ComplexBox) -> ComplexBox {
        ComplexBox::new(self.re.add(&o.re), self.im.add(&o.im))
    }

    pub fn sub(&self, o: &ComplexBox) -> ComplexBox {
        ComplexBox::new(self.re.sub(&o.re), self.im.sub(&o.im))
    }

    pub fn neg(&self) -> ComplexBox {
        ComplexBox::new(self.re.neg(), self.im.neg())
    }

    pub fn conj(&self) -> ComplexBox {
        ComplexBox::new(self.re.clone(), self.im.neg())
    }

    pub fn mul(&self, o: &ComplexBox) -> ComplexBox {
        let re = self.re.mul(&o.re).sub(&self.im.mul(&o.im));
        let im = self.re.mul(&o.im).add(&self.im.mul(&o.re));
        ComplexBox::new(re, im)
    }

    pub fn scale(&self, k: &Interval) -> ComplexBox {
        ComplexBox::new(self.re.mul(k), self.im.mul(k))
    }

    pub fn norm_sqr(&self) -> Interval {
        self.re.sqr().add(&self.im.sqr())
    }

    pub fn abs(&self) -> Interval {
        self.norm_sqr().sqrt()
    }

    pub fn div(&self, o: &ComplexBox) -> ComplexBox {
        let d = o.norm_sqr();
        let num = self.mul(&o.conj());
        ComplexBox::new(num.re.div(&d), num.im.div(&d))
    }

    pub fn contains_zero(&self) -> bool {
        self.re.contains_zero() && self.im.contains_zero()
    }

    /// Principal argument, available when the box lies in the open right half-plane.
    pub fn arg_right_half(&self) -> Option<Interval> {
        if !self.re.is_pos() {
            return None;
        }
        Some(self.im.div(&self.re).atan())
    }

    /// Principal complex logarithm modulus `|Log z| = sqrt(ln²|z| + arg² z)` for boxes in
    /// the right half-plane.
    pub fn log_modulus_right_half(&self) -> Option<Interval> {
        let arg = self.arg_right_half()?;
        let l = self.abs().ln();
        Some(l.sqr().add(&arg.sqr()).sqrt())
    }
}

/// Largest power of ten a decimal literal may carry.
pub const MAX_DECIMAL_SCALE: u64 = 10_000;

/// Exact rational value of a decimal or fraction string, e.g. `"0.05"`, `"1/20"`, `"-3"`.
/// `None` when the decimal scale exceeds [`MAX_DECIMAL_SCALE`].
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    if let Some((n, d)) = s.split_once('/') {
        let n: BigInt = n.trim().parse().ok()?;
        let d: BigInt = d.trim().parse().ok()?;
        if d.is_zero() {
            return None;
        }
        return Some(BigRational::new(n, d));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(i) => (&s[..i], s[i + 1..].parse::<i64>().ok()?),
        None => (s, 0),
    };
    let (neg, body) = match mant.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, mant.strip_prefix('+').unwrap_or(mant)),
    };
    let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
    if ip.is_empty() && fp.is_empty() {
        return None;
    }
    if !ip.chars().chain(fp.chars()).all(|c| c.is_ascii_digit()) {
        return None;
    }
    let digits = format!("{ip}{fp}");
    let mut num: BigInt = if digits.is_empty() { BigInt::zero() } else { digits.parse().ok()? };
    if neg {
        num = -num;
    }
    let scale = exp.checked_sub(fp.len() as i64)?;
    if scale.unsigned_abs() > MAX_DECIMAL_SCALE {
        return None;
    }
    let ten = BigInt::from(10);
    let r = if scale >= 0 {
        BigRational::from_integer(num * num_traits::pow(ten, scale as usize))
    } else {
        BigRational::new(num, num_traits::pow(ten, (-scale) as usize))
    };
    Some(r)
}

/// Decimal string of `x` with `digits` significant digits, rounded toward +∞ when `up`
/// and toward −∞ otherwise. Trailing zeros are dropped.
pub fn decimal_directed(x: &BigFloat, digits: usize, up: bool) -> String {
    if x.is_nan() {
        return "nan".into();
    }
    if x.is_inf_pos() {
        return "inf".into();
    }
    if x.is_inf_neg() {
        return "-inf".into();
    }
    let Some(r) = bf_to_rational(x) else { return "nan".into() };
    decimal_of_rational(&r, digits, up)
}

/// Directed decimal rendering of a rational; see [`decimal_directed`].
pub fn decimal_of_rational(r: &BigRational, digits: usize, up: bool) -> String {
    if r.is_zero() {
        return "0".into();
    }
    let digits = digits.max(1);
    let neg = r.is_negative();
    let a = r.abs();
    // Magnitude toward +∞ for (up, positive) and (down, negative).
    let away = up != neg;
    let ten = BigInt::from(10);
    let pow10 = |k: i64| -> BigRational {
        let p = num_traits::pow(ten.clone(), k.unsigned_abs() as usize);
        if k >= 0 {
            BigRational::from_integer(p)
        } else {
            BigRational::new(BigInt::one(), p)
        }
    };
    let bits = a.numer().bits() as i64 - a.denom().bits() as i64;
    let mut e10 = ((bits as f64) * std::f64::consts::LOG10_2).floor() as i64;
    while a < pow10(e10) {
        e10 -= 1;
    }
    while a >= pow10(e10 + 1) {
        e10 += 1;
    }
    let scaled = &a * pow10(digits as i64 - 1 - e10);
    let mut mant = if away { scaled.ceil() } else { scaled.floor() }.to_integer();
    if mant.to_string().len() > digits {
        // Only a ceiling can carry past the digit budget, landing exactly on 10^digits.
        mant /= &ten;
        e10 += 1;
    }
    let ds = mant.to_string();
    let point = e10 + 1;
    let body = if (-4..=21).contains(&e10) {
        if point <= 0 {
            format!("0.{}{}", "0".repeat((-point) as usize), ds)
        } else if point as usize >= ds.len() {
            format!("{}{}", ds, "0".repeat(point as usize - ds.len()))
        } else {
            format!("{}.{}", &ds[..point as usize], &ds[point as usize..])
        }
    } else {
        format!("{}.{}e{}", &ds[..1], &ds[1..], e10)
    };
    let body = trim_zeros(&body);
    if neg {
        format!("-{body}")
    } else {
        body
    }
}

fn trim_zeros(s: &str) -> String {
    let (m, e) = match s.find('e') {
        Some(i) => (&s[..i], &s[i..]),
        None => (s, ""),
    };
    let m = if m.contains('.') { m.trim_end_matches('0').trim_end_matches('.') } else { m };
    format!("{m}{e}")
}

impl Serialize for Interval {
    fn serialize<S: serde::Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Interval", 2)?;
        st.serialize_field("lo", &decimal_directed(&self.lo, 20, false))?;
        st.serialize_field("hi", &decimal_directed(&self.hi, 20, true))?;
        st.end()
    }
}

impl Interval {
    /// `mid ±err` keeping only the digits the enclosure supports; `err` bounds the distance
    /// from the printed value to every point of the interval. Exact endpoints print bare.
    pub fn certified_decimal(&self) -> String {
        let (Some(lo), Some(hi)) = (bf_to_rational(&self.lo), bf_to_rational(&self.hi)) else {
            return self.to_string();
        };
        if lo == hi {
            let down = decimal_of_rational(&lo, 40, false);
            if down == decimal_of_rational(&lo, 40, true) {
                return down;
            }
        }
        let two = BigRational::from_integer(BigInt::from(2));
        let mid = (&lo + &hi) / &two;
        let rad = (&hi - &lo) / &two;
        let digits = if rad.is_zero() {
            40
        } else if mid.is_zero() {
            1
        } else {
            let ratio = rational_to_f64(&(mid.abs() / &rad));
            (ratio.log10().floor().max(1.0) as usize).min(40)
        };
        let shown = decimal_of_rational(&mid, digits, false);
        let printed = parse_rational(&shown).expect("rendered decimal re-parses");
        let err = rad + (mid - printed).abs();
        if err.is_zero() {
            return shown;
        }
        format!("{shown} ±{}", decimal_of_rational(&err, 2, true))
    }
}

/// Nearest `f64` to a rational (not certified).
pub fn rational_to_f64(r: &BigRational) -> f64 {
    Interval::from_rational(r, 80).mid_f64()
}

/// `|x|` as an interval for an integer, convenience for formulas.
pub fn abs_int(v: &BigInt, prec: usize) -> Interval {
    Interval::from_int(&v.abs(), prec)
}

/// Serde adapter writing integers as decimal strings.
pub mod int_string {
    use num_bigint::BigInt;
    use serde::{de::Error, Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(v: &BigInt, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&v.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<BigInt, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn certified_rendering() {
        assert_eq!(Interval::from_i64(-108, 64).certified_decimal(), "-108");
        assert_eq!(Interval::from_rational(&BigRational::new(1.into(), 4.into()), 64).certified_decimal(), "0.25");
        let r2 = Interval::from_i64(2, 128).sqrt();
        let s = r2.certified_decimal();
        assert!(s.starts_with("1.41421356237309504880168872"), "{s}");
        let (v, e) = s.split_once(" ±").unwrap();
        let err: f64 = e.parse().unwrap();
        assert!(err < 1e-30 && (v.parse::<f64>().unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let wide = Interval::from_f64(1.0, 64).hull(&Interval::from_f64(1.5, 64));
        assert_eq!(wide.certified_decimal(), "1 ±0.5");
    }

    #[test]
    fn bigint_round_trip() {
        for s in ["0", "1", "-1", "18446744073709551616", "-340282366920938463463374607431768211457", "108"] {
            let v: BigInt = s.parse().unwrap();
            let bf = bf_from_bigint(&v);
            assert_eq!(bf_to_rational(&bf).unwrap(), BigRational::from_integer(v));
        }
    }

    #[test]
    fn ln2_encloses_known_digits() {
        let two = Interval::from_i64(2, 128);
        let l = two.ln();
        let below = Interval::from_rational(&parse_rational("0.693147180559945309417232121458176568").unwrap(), 256);
        let above = Interval::from_rational(&parse_rational("0.693147180559945309417232121458176569").unwrap(), 256);
        assert!(below.hull(&above).contains_interval(&l));
        assert!(l.width_f64() < 1e-36);
    }

    #[test]
    fn pi_and_powers() {
        let pi = Interval::pi(128);
        let below = Interval::from_rational(&parse_rational("3.14159265358979323846264338327950288").unwrap(), 256);
        let above = Interval::from_rational(&parse_rational("3.14159265358979323846264338327950289").unwrap(), 256);
        assert!(below.hull(&above).contains_interval(&pi));
        let x = Interval::from_i64(-3, 64);
        let c = x.powi(3);
        assert!(c.contains_rational(&BigRational::from_integer((-27).into())));
        let sq = Interval::new(BigFloat::from_f64(-2.0, 64), BigFloat::from_f64(1.0, 64), 64).sqr();
        assert!(sq.contains_zero());
        assert_eq!(sq.hi_f64(), 4.0);
    }

    #[test]
    fn directed_f64() {
        let third = Interval::from_rational(&BigRational::new(1.into(), 3.into()), 128);
        assert!(third.lo_f64() <= 1.0 / 3.0 && third.hi_f64() >= 1.0 / 3.0);
        assert!(third.lo_f64() < third.hi_f64());
    }

    #[test]
    fn comparisons_are_three_valued() {
        let a = Interval::from_i64(1, 64);
        let b = Interval::from_i64(2, 64);
        assert_eq!(a.lt(&b), Tri::True);
        assert_eq!(b.lt(&a), Tri::False);
        assert_eq!(a.lt(&a), Tri::False);
        assert_eq!(a.le(&a), Tri::True);
        let c = a.hull(&b);
        assert_eq!(c.lt(&b), Tri::Undecided);
    }

    #[test]
    fn parse_rational_forms() {
        assert_eq!(parse_rational("0.05").unwrap(), BigRational::new(1.into(), 20.into()));
        assert_eq!(parse_rational("1/20").unwrap(), BigRational::new(1.into(), 20.into()));
        assert_eq!(parse_rational("-2.5e1").unwrap(), BigRational::from_integer((-25).into()));
        assert!(parse_rational("abc").is_none());
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("1e999999999").is_none());
        assert!(parse_rational("1e-9223372036854775808").is_none());
        assert_eq!(parse_rational("1e10000").unwrap().numer().to_string().len(), 10_001);
    }

    #[test]
    fn directed_decimals() {
        let q = |s: &str| parse_rational(s).unwrap();
        assert_eq!(decimal_of_rational(&q("47.5"), 20, false), "47.5");
        assert_eq!(decimal_of_rational(&q("1/3"), 5, false), "0.33333");
        assert_eq!(decimal_of_rational(&q("1/3"), 5, true), "0.33334");
        assert_eq!(decimal_of_rational(&q("-1/3"), 5, true), "-0.33333");
        assert_eq!(decimal_of_rational(&q("-1/3"), 5, false), "-0.33334");
        assert_eq!(decimal_of_rational(&q("99999"), 3, true), "100000");
        assert_eq!(decimal_of_rational(&q("123456e30"), 3, false), "1.23e35");
        assert_eq!(decimal_of_rational(&q("1e-9"), 3, false), "1e-9");
        let third = Interval::from_rational(&q("1/3"), 128);
        let j = serde_json::to_string(&third).unwrap();
        assert_eq!(j, r#"{"lo":"0.33333333333333333333","hi":"0.33333333333333333334"}"#);
    }

    #[test]
    fn complex_division() {
        let p = 128;
        let z = ComplexBox::new(Interval::from_i64(1, p), Interval::from_i64(2, p));
        let w = ComplexBox::new(Interval::from_i64(3, p), Interval::from_i64(-1, p));
        let q = z.mul(&w).div(&w);
        assert!(q.re.contains_rational(&BigRational::from_integer(1.into())));
        assert!(q.im.contains_rational(&BigRational::from_integer(2.into())));
    }
}
