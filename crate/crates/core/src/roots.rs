//! Certified complex root enclosures of `f(X) = F(X, 1)`.
//!
//! Approximations come from Aberth–Ehrlich iteration (first in `f64`, then at working
//! precision). Certification uses Smith's inclusion theorem: with distinct approximations
//! `z_k`, every root lies in a disc `|z − z_k| ≤ n·|f(z_k)| / (|a₀|·∏_{j≠k}|z_k − z_j|)`, and a
//! disc disjoint from all others contains exactly one root. Radii are evaluated in
//! outward-rounded interval arithmetic, so floating point never enters a certified claim.
//!
//! A real-centred disc holding exactly one root holds a real root, because the disc is
//! symmetric under conjugation. A disc not meeting the real axis holds a non-real root.

use std::cmp::Ordering;

use astro_float::{BigFloat, RoundingMode};
use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::forms::BinaryForm;
use crate::numeric::{bf_from_bigint, bf_to_f64, ComplexBox, Interval, Tri};
use crate::poly::IntPoly;
use crate::Config;

const NEAR: RoundingMode = RoundingMode::ToEven;

#[derive(Clone, Debug)]
struct Cx {
    re: BigFloat,
    im: BigFloat,
}

impl Cx {
    fn zero(p: usize) -> Cx {
        Cx {
            re: BigFloat::from_word(0, p),
            im: BigFloat::from_word(0, p),
        }
    }

    fn from_c64(z: Complex64, p: usize) -> Cx {
        Cx {
            re: BigFloat::from_f64(z.re, p),
            im: BigFloat::from_f64(z.im, p),
        }
    }

    fn add(&self, o: &Cx, p: usize) -> Cx {
        Cx {
            re: self.re.add(&o.re, p, NEAR),
            im: self.im.add(&o.im, p, NEAR),
        }
    }

    fn sub(&self, o: &Cx, p: usize) -> Cx {
        Cx {
            re: self.re.sub(&o.re, p, NEAR),
            im: self.im.sub(&o.im, p, NEAR),
        }
    }

    fn mul(&self, o: &Cx, p: usize) -> Cx {
        Cx {
            re: self.re.mul(&o.re, p, NEAR).sub(&self.im.mul(&o.im, p, NEAR), p, NEAR),
            im: self.re.mul(&o.im, p, NEAR).add(&self.im.mul(&o.re, p, NEAR), p, NEAR),
        }
    }

    fn norm_sqr(&self, p: usize) -> BigFloat {
        self.re.mul(&self.re, p, NEAR).add(&self.im.mul(&self.im, p, NEAR), p, NEAR)
    }

    fn div(&self, o: &Cx, p: usize) -> Cx {
        let d = o.norm_sqr(p);
        let conj = Cx {
            re: o.re.clone(),
            im: o.im.neg(),
        };
        let num = self.mul(&conj, p);
        Cx {
            re: num.re.div(&d, p, NEAR),
            im: num.im.div(&d, p, NEAR),
        }
    }

    fn abs_f64(&self) -> f64 {
        let r = bf_to_f64(&self.re, NEAR);
        let i = bf_to_f64(&self.im, NEAR);
        r.hypot(i)
    }

    fn to_c64(&self) -> Complex64 {
        Complex64::new(bf_to_f64(&self.re, NEAR), bf_to_f64(&self.im, NEAR))
    }

    fn with_prec(&self, p: usize) -> Cx {
        let mut re = self.re.clone();
        let mut im = self.im.clone();
        if re.precision().is_some_and(|q| q < p) {
            re.set_precision(p, NEAR).expect("precision");
        }
        if im.precision().is_some_and(|q| q < p) {
            im.set_precision(p, NEAR).expect("precision");
        }
        Cx { re, im }
    }

    fn point_box(&self, p: usize) -> ComplexBox {
        ComplexBox::new(Interval::point(&self.re, p.max(self.re.precision().unwrap_or(p))), Interval::point(&self.im, p.max(self.im.precision().unwrap_or(p))))
    }
}

/// Values of `f` and `f′` at `z`.
fn horner2(c: &[BigFloat], z: &Cx, p: usize) -> (Cx, Cx) {
    let mut f = Cx::zero(p);
    let mut d = Cx::zero(p);
    for a in c.iter().rev() {
        d = d.mul(z, p).add(&f, p);
        f = f.mul(z, p);
        f.re = f.re.add(a, p, NEAR);
    }
    (f, d)
}

fn aberth_f64(f: &IntPoly) -> Vec<Complex64> {
    let n = f.degree().expect("nonzero");
    let c: Vec<f64> = f.coeffs().iter().map(|v| v.to_f64().unwrap_or(f64::MAX)).collect();
    let lead = c[n];
    let centre = -c[n - 1] / (n as f64 * lead);
    let radius = {
        let m = c[..n].iter().map(|v| (v / lead).abs()).fold(0.0f64, f64::max);
        (1.0 + m).min(1e6).max(1e-3)
    };
    let mut z: Vec<Complex64> = (0..n)
        .map(|k| {
            let th = std::f64::consts::TAU * k as f64 / n as f64 + 0.4;
            Complex64::new(centre, 0.0) + Complex64::from_polar(radius, th)
        })
        .collect();
    for _ in 0..500 {
        let mut worst = 0.0f64;
        for k in 0..n {
            let (mut fv, mut dv) = (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0));
            for a in c.iter().rev() {
                dv = dv * z[k] + fv;
                fv = fv * z[k] + a;
            }
            if dv.norm() == 0.0 {
                continue;
            }
            let ratio = fv / dv;
            let s: Complex64 = (0..n).filter(|&j| j != k).map(|j| 1.0 / (z[k] - z[j])).sum();
            let w = ratio / (1.0 - ratio * s);
            if w.is_finite() {
                z[k] -= w;
                worst = worst.max(w.norm() / z[k].norm().max(1.0));
            }
        }
        if worst < 1e-15 {
            break;
        }
    }
    z
}

fn aberth_big(c: &[BigFloat], z: &mut [Cx], p: usize, max_iter: usize) {
    let n = z.len();
    let target = (-(p as i32) + 12) as f64;
    let one = Cx {
        re: BigFloat::from_word(1, p),
        im: BigFloat::from_word(0, p),
    };
    for _ in 0..max_iter {
        let mut worst = f64::NEG_INFINITY;
        for k in 0..n {
            let (fv, dv) = horner2(c, &z[k], p);
            if fv.re.is_zero() && fv.im.is_zero() {
                continue;
            }
            if dv.re.is_zero() && dv.im.is_zero() {
                continue;
            }
            let ratio = fv.div(&dv, p);
            let mut s = Cx::zero(p);
            for j in 0..n {
                if j != k {
                    let diff = z[k].sub(&z[j], p);
                    if diff.re.is_zero() && diff.im.is_zero() {
                        continue;
                    }
                    s = s.add(&one.div(&diff, p), p);
                }
            }
            let denom = one.sub(&ratio.mul(&s, p), p);
            let w = ratio.div(&denom, p);
            if w.re.is_nan() || w.im.is_nan() {
                continue;
            }
            z[k] = z[k].sub(&w, p);
            let rel = w.abs_f64() / z[k].abs_f64().max(1.0);
            let lg = if rel == 0.0 { f64::NEG_INFINITY } else { rel.log2() };
            worst = worst.max(lg);
        }
        if worst < target {
            break;
        }
    }
}

/// Certified roots of `F(X, 1)`.
#[derive(Clone, Debug)]
pub struct RootSystem {
    f: IntPoly,
    centers: Vec<Cx>,
    radii: Vec<BigFloat>,
    boxes: Vec<ComplexBox>,
    real: Vec<bool>,
    pairing: Vec<usize>,
    deriv_abs: Vec<Interval>,
    prec: usize,
}

/// Summary of one root for reports.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RootSummary {
    pub index: usize,
    pub real: bool,
    pub re: f64,
    pub im: f64,
    pub radius: f64,
    pub conjugate: usize,
}

impl RootSystem {
    pub fn n(&self) -> usize {
        self.centers.len()
    }

    /// Half the number of non-real roots.
    pub fn q(&self) -> usize {
        self.real.iter().filter(|r| !**r).count() / 2
    }

    pub fn poly(&self) -> &IntPoly {
        &self.f
    }

    pub fn precision(&self) -> usize {
        self.prec
    }

    /// Enclosing rectangle of root `k`.
    pub fn root(&self, k: usize) -> &ComplexBox {
        &self.boxes[k]
    }

    pub fn roots(&self) -> &[ComplexBox] {
        &self.boxes
    }

    pub fn is_real(&self, k: usize) -> bool {
        self.real[k]
    }

    pub fn real_indices(&self) -> Vec<usize> {
        (0..self.n()).filter(|&k| self.real[k]).collect()
    }

    /// Conjugation involution; fixes real roots.
    pub fn pairing(&self) -> &[usize] {
        &self.pairing
    }

    /// Enclosure of `|f′(α_k)|`.
    pub fn deriv_abs(&self, k: usize) -> &Interval {
        &self.deriv_abs[k]
    }

    /// Certified disc radius around the stored centre.
    pub fn radius(&self, k: usize) -> &BigFloat {
        &self.radii[k]
    }

    pub fn radius_f64(&self, k: usize) -> f64 {
        bf_to_f64(&self.radii[k], RoundingMode::Up)
    }

    pub fn center_f64(&self, k: usize) -> (f64, f64) {
        let c = self.centers[k].to_c64();
        (c.re, c.im)
    }

    /// Enclosure of `|α_k|`.
    pub fn abs(&self, k: usize) -> Interval {
        self.boxes[k].abs()
    }

    /// Enclosure of `|α_i − α_j|`.
    pub fn distance(&self, i: usize, j: usize) -> Interval {
        self.boxes[i].sub(&self.boxes[j]).abs()
    }

    /// Enclosure of `|x − α_k·y|`.
    pub fn linear_factor_abs(&self, k: usize, x: &BigInt, y: &BigInt) -> Interval {
        let p = self.prec;
        let xb = ComplexBox::from_int(x, p);
        let yb = Interval::from_int(y, p);
        xb.sub(&self.boxes[k].scale(&yb)).abs()
    }

    pub fn summary(&self) -> Vec<RootSummary> {
        (0..self.n())
            .map(|k| {
                let (re, im) = self.center_f64(k);
                RootSummary {
                    index: k,
                    real: self.real[k],
                    re,
                    im,
                    radius: self.radius_f64(k),
                    conjugate: self.pairing[k],
                }
            })
            .collect()
    }

    /// Same roots with tighter enclosures.
    pub fn refined(&self, tol: f64, cfg: &Config) -> Result<RootSystem> {
        let start: Vec<Cx> = self.centers.clone();
        solve_from(&self.f, tol, cfg, (self.prec * 2).min(cfg.max_precision), Some(start))
    }
}

/// Certified enclosures of all roots of `F(X, 1)` to `cfg.root_tol`.
pub fn solve_roots(form: &BinaryForm, cfg: &Config) -> Result<RootSystem> {
    solve_roots_tol(form, cfg.root_tol, cfg)
}

pub fn solve_roots_tol(form: &BinaryForm, tol: f64, cfg: &Config) -> Result<RootSystem> {
    form.require_a0()?;
    if form.discriminant()?.is_zero() {
        return Err(Error::RepeatedRoot);
    }
    solve_from(&form.dehomogenize(), tol, cfg, cfg.precision, None)
}

/// Certified roots of a squarefree integer polynomial of degree ≥ 1.
pub fn solve_poly(f: &IntPoly, tol: f64, cfg: &Config) -> Result<RootSystem> {
    solve_from(f, tol, cfg, cfg.precision, None)
}

fn solve_from(f: &IntPoly, tol: f64, cfg: &Config, start_prec: usize, start: Option<Vec<Cx>>) -> Result<RootSystem> {
    let n = f.degree().expect("nonzero");
    let mut p = start_prec.max(64);
    let mut z: Vec<Cx> = match start {
        Some(s) => s,
        None => aberth_f64(f).into_iter().map(|c| Cx::from_c64(c, p)).collect(),
    };
    loop {
        let coeffs: Vec<BigFloat> = f.coeffs().iter().map(bf_from_bigint).collect();
        z = z.iter().map(|c| c.with_prec(p)).collect();
        aberth_big(&coeffs, &mut z, p, 60 + n * 10);
        if let Some(rs) = certify(f, &z, p, tol) {
            return Ok(rs);
        }
        if p >= cfg.max_precision {
            return Err(Error::NonConvergence {
                bits: cfg.max_precision,
                what: "root isolation".into(),
            });
        }
        p = (p * 2).min(cfg.max_precision);
    }
}

fn certify(f: &IntPoly, approx: &[Cx], p: usize, tol: f64) -> Option<RootSystem> {
    let n = approx.len();
    let mut z: Vec<Cx> = approx.to_vec();
    // Snap near-real approximations onto the axis.
    let snap = (-(p as f64) / 2.0).exp2();
    let mut is_real = vec![false; n];
    for k in 0..n {
        let c = z[k].to_c64();
        if c.im.abs() <= snap * c.norm().max(1.0) {
            z[k].im = BigFloat::from_word(0, p);
            is_real[k] = true;
        }
    }
    // Pair the upper half-plane approximations with their nearest lower partners.
    let upper: Vec<usize> = (0..n).filter(|&k| !is_real[k] && z[k].im.is_positive()).collect();
    let mut lower: Vec<usize> = (0..n).filter(|&k| !is_real[k] && z[k].im.is_negative()).collect();
    if upper.len() != lower.len() {
        return None;
    }
    let mut pairing: Vec<usize> = (0..n).collect();
    for &u in &upper {
        let cu = z[u].to_c64().conj();
        let (pos, _) = lower.iter().enumerate().min_by(|a, b| {
            let da = (z[*a.1].to_c64() - cu).norm();
            let db = (z[*b.1].to_c64() - cu).norm();
            da.partial_cmp(&db).unwrap_or(Ordering::Equal)
        })?;
        let l = lower.remove(pos);
        z[l] = Cx {
            re: z[u].re.clone(),
            im: z[u].im.neg(),
        };
        pairing[u] = l;
        pairing[l] = u;
    }

    let pts: Vec<ComplexBox> = z.iter().map(|c| c.point_box(p)).collect();
    let a0 = Interval::from_int(&f.lc().abs(), p);
    let nn = Interval::from_i64(n as i64, p);
    let mut radii = Vec::with_capacity(n);
    for k in 0..n {
        let fz = f.eval_box(&pts[k]).abs();
        let mut den = a0.clone();
        for j in 0..n {
            if j != k {
                den = den.mul(&pts[k].sub(&pts[j]).abs());
            }
        }
        if !den.is_pos() {
            return None;
        }
        let r = nn.mul(&fz).div(&den);
        radii.push(r.hi().clone());
    }
    let tol_i = Interval::from_f64(tol, p);
    for k in 0..n {
        let rk = Interval::point(&radii[k], p);
        // Diameter 2r must not exceed tol.
        if rk.mul_i64(2).le(&tol_i) != Tri::True {
            return None;
        }
        if !is_real[k] && pts[k].im.abs().gt(&rk) != Tri::True {
            return None;
        }
        for j in k + 1..n {
            let rj = Interval::point(&radii[j], p);
            if pts[k].sub(&pts[j]).abs().gt(&rk.add(&rj)) != Tri::True {
                return None;
            }
        }
    }
    let boxes: Vec<ComplexBox> = (0..n)
        .map(|k| {
            let r = Interval::point(&radii[k], p);
            let rr = Interval::new(r.hi().neg(), r.hi().clone(), p);
            let re = pts[k].re.add(&rr);
            let im = if is_real[k] { Interval::zero(p) } else { pts[k].im.add(&rr) };
            ComplexBox::new(re, im)
        })
        .collect();
    for k in 0..n {
        for j in k + 1..n {
            let sep_re = boxes[k].re.lt(&boxes[j].re).or(boxes[j].re.lt(&boxes[k].re));
            let sep_im = boxes[k].im.lt(&boxes[j].im).or(boxes[j].im.lt(&boxes[k].im));
            if sep_re.or(sep_im) != Tri::True {
                return None;
            }
        }
    }
    let fd = f.derivative();
    let deriv_abs: Vec<Interval> = boxes.iter().map(|b| fd.eval_box(b).abs()).collect();
    if deriv_abs.iter().any(|d| !d.is_pos()) {
        return None;
    }

    // Canonical order: real roots ascending, then conjugate pairs by (Re, |Im|), upper first.
    let mut order: Vec<usize> = (0..n).collect();
    let key = |k: usize| {
        let c = z[k].to_c64();
        (!is_real[k], c.re, c.im.abs(), c.im < 0.0)
    };
    order.sort_by(|&a, &b| {
        let (ka, kb) = (key(a), key(b));
        ka.0.cmp(&kb.0)
            .then(ka.1.partial_cmp(&kb.1).unwrap_or(Ordering::Equal))
            .then(ka.2.partial_cmp(&kb.2).unwrap_or(Ordering::Equal))
            .then(ka.3.cmp(&kb.3))
    });
    let mut inv = vec![0; n];
    for (new, &old) in order.iter().enumerate() {
        inv[old] = new;
    }
    Some(RootSystem {
        f: f.clone(),
        centers: order.iter().map(|&k| z[k].clone()).collect(),
        radii: order.iter().map(|&k| radii[k].clone()).collect(),
        boxes: order.iter().map(|&k| boxes[k].clone()).collect(),
        real: order.iter().map(|&k| is_real[k]).collect(),
        pairing: order.iter().map(|&k| inv[pairing[k]]).collect(),
        deriv_abs: order.iter().map(|&k| deriv_abs[k].clone()).collect(),
        prec: p,
    })
}

/// Enclosure of `M(F) = |a₀|·∏max(1, |α_i|)`, with the exact integer value when it is
/// certified that every root lies on one side of the unit circle.
#[derive(Clone, Debug)]
pub struct MahlerMeasure {
    pub enclosure: Interval,
    pub exact: Option<BigInt>,
}

impl MahlerMeasure {
    pub fn f64(&self) -> f64 {
        self.enclosure.mid_f64()
    }
}

/// Position of a root relative to the unit circle.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Side {
    Outside,
    Inside,
    On,
    Unknown,
}

fn unit_side(f: &IntPoly, rs: &RootSystem, k: usize) -> Side {
    let p = rs.precision();
    let one = Interval::one(p);
    let m = rs.abs(k);
    if m.gt(&one) == Tri::True {
        return Side::Outside;
    }
    if m.lt(&one) == Tri::True {
        return Side::Inside;
    }
    // α on the unit circle ⇒ α is a common root of f and its reversal.
    let g = f.gcd(&f.reversed());
    if g.degree().unwrap_or(0) == 0 {
        return Side::Unknown;
    }
    let h = f.div_exact(&g).expect("gcd divides");
    if !h.eval_box(rs.root(k)).contains_zero() {
        // α is a root of g, so 1/ᾱ is a root of f; it coincides with α once it is
        // closer than the separation floor (Mahler's bound with M ≤ ‖f‖₂).
        let n = rs.n() as i64;
        let l2 = f
            .coeffs()
            .iter()
            .fold(Interval::zero(p), |acc, c| acc.add(&Interval::from_int(c, p).sqr()))
            .sqrt();
        let sep = Interval::from_i64(3, p)
            .sqrt()
            .mul(&Interval::from_i64(n + 1, p).powi(-n))
            .mul(&l2.powi(1 - n));
        let gap = m.mul(&one.sub(&m.sqr().recip()).abs());
        if gap.lt(&sep) == Tri::True {
            return Side::On;
        }
    }
    Side::Unknown
}

/// `M(F)` from certified roots.
pub fn mahler_from_roots(form: &BinaryForm, rs: &RootSystem, cfg: &Config) -> Result<MahlerMeasure> {
    let mut rs = rs.clone();
    let f = form.dehomogenize();
    let p = rs.precision();
    let a0 = Interval::from_int(&form.a0().abs(), p);
    let mut tries = 0;
    loop {
        let one = Interval::one(rs.precision());
        let enclosure = (0..rs.n()).fold(a0.clone(), |acc, k| acc.mul(&rs.abs(k).max(&one)));
        let sides: Vec<Side> = (0..rs.n()).map(|k| unit_side(&f, &rs, k)).collect();
        let exact = if sides.iter().all(|s| matches!(s, Side::Outside | Side::On)) {
            Some(form.an().abs())
        } else if sides.iter().all(|s| matches!(s, Side::Inside | Side::On)) {
            Some(form.a0().abs())
        } else {
            None
        };
        if let Some(e) = exact {
            return Ok(MahlerMeasure {
                enclosure: Interval::from_int(&e, p),
                exact: Some(e),
            });
        }
        let settled = !sides.contains(&Side::Unknown);
        if enclosure.rel_width_f64() <= cfg.mahler_rel_tol && (settled || tries >= 2) {
            return Ok(MahlerMeasure { enclosure, exact: None });
        }
        if rs.precision() >= cfg.max_precision {
            if enclosure.rel_width_f64() <= cfg.mahler_rel_tol {
                return Ok(MahlerMeasure { enclosure, exact: None });
            }
            return Err(Error::NonConvergence {
                bits: cfg.max_precision,
                what: "Mahler measure".into(),
            });
        }
        tries += 1;
        let tighter = (cfg.root_tol * 1e-20f64.powi(tries)).max(f64::MIN_POSITIVE);
        rs = rs.refined(tighter, cfg)?;
    }
}

pub fn mahler_measure(form: &BinaryForm, cfg: &Config) -> Result<MahlerMeasure> {
    let rs = solve_roots(form, cfg)?;
    mahler_from_roots(form, &rs, cfg)
}

/// Root separation floor `√3·(n+1)^{−n}·M^{−n+1}`, using the upper end of `M`.
pub fn separation_bound(n: usize, mahler: &Interval) -> Interval {
    let p = mahler.prec();
    let n = n as i64;
    let m_hi = Interval::point(mahler.hi(), p);
    Interval::from_i64(3, p)
        .sqrt()
        .mul(&Interval::from_i64(n + 1, p).powi(-n))
        .mul(&m_hi.powi(1 - n))
}

/// Floor `(√3/2)·(n+1)^{−n}·M^{−n+1}` on `|Im α|` of non-real roots.
pub fn imag_lower_bound(n: usize, mahler: &Interval) -> Interval {
    separation_bound(n, mahler).div_i64(2)
}

/// Two-sided bound on `|f′(α_k)|`.
#[derive(Clone, Debug)]
pub struct DerivativeBounds {
    /// `2^{−(n−1)²}·|D|/M^{2n−2}`; `None` when the form is not certified irreducible.
    pub lower: Option<Interval>,
    /// `(n(n+1)/2)·H·max(1, |α_k|)^{n−1}`.
    pub upper: Interval,
    pub value: Interval,
}

impl DerivativeBounds {
    pub fn holds(&self) -> Tri {
        let up = self.value.le(&self.upper);
        match &self.lower {
            Some(lo) => lo.le(&self.value).and(up),
            None => up,
        }
    }
}

pub fn derivative_bounds(
    form: &BinaryForm,
    rs: &RootSystem,
    mahler: &Interval,
    irreducible: bool,
    k: usize,
) -> Result<DerivativeBounds> {
    let n = form.degree() as i64;
    let p = rs.precision().max(mahler.prec());
    let d = form.discriminant()?;
    let h = Interval::from_int(&form.naive_height(), p);
    let one = Interval::one(p);
    let upper = Interval::from_i64(n * (n + 1) / 2, p)
        .mul(&h)
        .mul(&rs.abs(k).max(&one).powi(n - 1));
    let lower = irreducible.then(|| {
        let m_hi = Interval::point(mahler.hi(), p);
        Interval::from_i64(2, p)
            .powi(-(n - 1) * (n - 1))
            .mul(&Interval::from_int(&d.abs(), p))
            .div(&m_hi.powi(2 * n - 2))
    });
    Ok(DerivativeBounds {
        lower,
        upper,
        value: rs.deriv_abs(k).clone(),
    })
}

/// `∏|f′(α_k)|` enclosure and the exact target `|D/a₀^{n−2}|`.
pub fn derivative_product(form: &BinaryForm, rs: &RootSystem) -> Result<(Interval, Interval)> {
    let p = rs.precision();
    let prod = (0..rs.n()).fold(Interval::one(p), |acc, k| acc.mul(rs.deriv_abs(k)));
    let n = form.degree() as i64;
    let d = Interval::from_int(&form.discriminant()?.abs(), p);
    let a0 = Interval::from_int(&form.a0().abs(), p);
    Ok((prod, d.div(&a0.powi(n - 2))))
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_rational::BigRational;

    fn cfg() -> Config {
        Config::default()
    }

    fn form(s: &str) -> BinaryForm {
        s.parse().unwrap()
    }

    #[test]
    fn cube_root_of_two() {
        let rs = solve_roots(&form("x^3 - 2*y^3"), &cfg()).unwrap();
        assert_eq!(rs.n(), 3);
        assert_eq!(rs.q(), 1);
        assert!(rs.is_real(0));
        let r = &rs.root(0).re;
        assert!(r.gt(&Interval::from_f64(1.2599, 64)).is_true());
        assert!(r.lt(&Interval::from_f64(1.2600, 64)).is_true());
        let (re, im) = rs.center_f64(1);
        assert!((re + 0.6300).abs() < 1e-4 && (im.abs() - 1.0911).abs() < 1e-4);
        assert_eq!(rs.pairing()[1], 2);
        assert_eq!(rs.pairing()[0], 0);
        for k in 0..3 {
            assert!(rs.radius_f64(k) * 2.0 <= 1e-20);
        }
    }

    #[test]
    fn real_and_complex_counts() {
        assert_eq!(solve_roots(&form("x^3 - 4*x*y^2 + y^3"), &cfg()).unwrap().q(), 0);
        let rs = solve_roots(&form("x^4 + y^4"), &cfg()).unwrap();
        assert_eq!(rs.q(), 2);
        assert!(rs.real_indices().is_empty());
        assert!(matches!(solve_roots(&form("x^3 - 3*x*y^2 + 2*y^3"), &cfg()), Err(Error::RepeatedRoot)));
    }

    #[test]
    fn mahler_examples() {
        let m = mahler_measure(&form("x^3 - 2*y^3"), &cfg()).unwrap();
        assert_eq!(m.exact, Some(2.into()));
        let m = mahler_measure(&form("3*x^3 + y^3"), &cfg()).unwrap();
        assert_eq!(m.exact, Some(3.into()));
        let m = mahler_measure(&form("x^3 + y^3"), &cfg()).unwrap();
        assert_eq!(m.exact, Some(1.into()));
        assert!(m.enclosure.contains_rational(&BigRational::from_integer(1.into())));
        // Mixed moduli: x^3 - x y^2 - y^3 (plastic-type); M = 1.3247...
        let m = mahler_measure(&form("x^3 - x*y^2 - y^3"), &cfg()).unwrap();
        assert!(m.exact.is_none());
        assert!((m.f64() - 1.324717957244746).abs() < 1e-12);
        assert!(m.enclosure.rel_width_f64() <= 1e-12);
    }

    #[test]
    fn derivative_product_law() {
        let g = form("x^3 - 2*y^3");
        let rs = solve_roots(&g, &cfg()).unwrap();
        let (prod, target) = derivative_product(&g, &rs).unwrap();
        assert!(prod.contains_rational(&BigRational::from_integer(108.into())));
        assert!(target.contains_rational(&BigRational::from_integer(108.into())));
    }

    #[test]
    fn derivative_bounds_example() {
        let g = form("x^3 - 2*y^3");
        let rs = solve_roots(&g, &cfg()).unwrap();
        let m = Interval::from_i64(2, 128);
        let b = derivative_bounds(&g, &rs, &m, true, 0).unwrap();
        assert!((b.lower.as_ref().unwrap().mid_f64() - 0.421875).abs() < 1e-15);
        assert!((b.upper.mid_f64() - 19.0488).abs() < 1e-3);
        assert!((b.value.mid_f64() - 4.7622).abs() < 1e-4);
        assert_eq!(b.holds(), Tri::True);
    }

    #[test]
    fn separation_examples() {
        let m = Interval::from_i64(2, 128);
        assert!((separation_bound(3, &m).mid_f64() - 3f64.sqrt() / 256.0).abs() < 1e-15);
        assert!((imag_lower_bound(3, &m).mid_f64() - 3f64.sqrt() / 512.0).abs() < 1e-15);
        let one = Interval::one(128);
        assert!((separation_bound(3, &one).mid_f64() - 3f64.sqrt() / 64.0).abs() < 1e-15);
    }
}
