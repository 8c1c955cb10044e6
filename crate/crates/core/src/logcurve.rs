//! The logarithmic embedding `Φ(x, y) = (φ₁, …, φₙ)` of a pair, the basis `b_i`, `c_i` of the
//! trace-zero hyperplane, distances to the line attached to a real root, and the gap
//! diagnostics for three or four solutions related to the same root.
//!
//! Every real quantity is an outward-rounded [`Interval`]. Functions that single out a real
//! root `α_k` work in a root order with `α_k` moved to the last position; that order is
//! reported alongside the result.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::bounds::{gap_amplitude, gap_bracket, gap_threshold_unit, height_quotient_bound, side_floor, GapVariant};
use crate::error::{Error, Result};
use crate::forms::BinaryForm;
use crate::numeric::{bf_to_rational, int_string, ComplexBox, Interval, Tri};
use crate::roots::RootSystem;
use crate::solver::{related_root, Mode};
use crate::Config;

fn int(v: impl Into<BigInt>, p: usize) -> Interval {
    Interval::from_int(&v.into(), p)
}

fn rat(num: i64, den: i64, p: usize) -> Interval {
    Interval::from_rational(&BigRational::new(num.into(), den.into()), p)
}

fn norm(v: &[Interval]) -> Interval {
    let p = v[0].prec();
    v.iter().fold(Interval::zero(p), |acc, x| acc.add(&x.sqr())).sqrt()
}

fn sum(v: &[Interval]) -> Interval {
    let p = v[0].prec();
    v.iter().fold(Interval::zero(p), |acc, x| acc.add(x))
}

fn sub_vec(u: &[Interval], v: &[Interval]) -> Vec<Interval> {
    u.iter().zip(v).map(|(a, b)| a.sub(b)).collect()
}

fn dot(u: &[Interval], v: &[Interval]) -> Interval {
    let p = u[0].prec();
    u.iter().zip(v).fold(Interval::zero(p), |acc, (a, b)| acc.add(&a.mul(b)))
}

/// `exp(−‖Φ‖/(n√n))`.
fn decay(n: usize, phi_norm: &Interval) -> Interval {
    let p = phi_norm.prec();
    let nn = int(n as i64, p);
    phi_norm.div(&nn.mul(&nn.sqrt())).neg().exp()
}

/// The pair `(x, y)` a point was evaluated at.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Source {
    #[serde(with = "int_string")]
    pub x: BigInt,
    #[serde(with = "int_string")]
    pub y: BigInt,
}

/// `Φ(x, y)` in the original root order.
#[derive(Clone, Debug, Serialize)]
pub struct LogPoint {
    pub source: Source,
    pub coords: Vec<Interval>,
    pub norm: Interval,
    /// `Σ φ_k`, zero up to enclosure width.
    pub coordinate_sum: Interval,
}

/// The vectors `b_1, …, b_n` and `c_1, …, c_{n−1}` in exact rational coordinates, positions
/// taken in a root order whose last entry is the distinguished real root.
#[derive(Clone, Debug, PartialEq)]
pub struct BasisSet {
    pub n: usize,
    pub b: Vec<Vec<BigRational>>,
    pub c: Vec<Vec<BigRational>>,
}

fn rdot(u: &[BigRational], v: &[BigRational]) -> BigRational {
    u.iter().zip(v).map(|(a, b)| a * b).sum()
}

impl BasisSet {
    /// `b_i = (1/n)(−1, …, n−1, …, −1)` with `n−1` at position `i`, and
    /// `c_i = b_i + b_n/(n−1)`.
    pub fn new(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::DegreeTooSmall { degree: n, required: 3 });
        }
        let q = |a: i64, b: i64| BigRational::new(a.into(), b.into());
        let ni = n as i64;
        let b: Vec<Vec<BigRational>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { q(ni - 1, ni) } else { q(-1, ni) }).collect())
            .collect();
        let scale = q(1, ni - 1);
        let c = (0..n - 1)
            .map(|i| b[i].iter().zip(&b[n - 1]).map(|(u, v)| u + v * &scale).collect())
            .collect();
        Ok(BasisSet { n, b, c })
    }

    /// `(n² − 3n + 2)/(n − 1)²`.
    pub fn c_norm_sqr(&self) -> BigRational {
        let n = self.n as i64;
        BigRational::new((n * n - 3 * n + 2).into(), ((n - 1) * (n - 1)).into())
    }

    /// Every `b_i` sums to zero, every `c_i` is orthogonal to `b_n`, and every `‖c_i‖²`
    /// equals [`BasisSet::c_norm_sqr`].
    pub fn laws_hold(&self) -> bool {
        let bn = &self.b[self.n - 1];
        let target = self.c_norm_sqr();
        self.b.iter().all(|v| v.iter().sum::<BigRational>().is_zero())
            && self.c.iter().all(|v| rdot(v, bn).is_zero() && rdot(v, v) == target)
    }

    /// `c_i · c_j`.
    pub fn c_gram(&self, i: usize, j: usize) -> BigRational {
        rdot(&self.c[i], &self.c[j])
    }

    fn interval_rows(rows: &[Vec<BigRational>], p: usize) -> Vec<Vec<Interval>> {
        rows.iter()
            .map(|r| r.iter().map(|x| Interval::from_rational(x, p)).collect())
            .collect()
    }

    fn combine(&self, rows: &[Vec<Interval>], coeffs: &[Interval], p: usize) -> Vec<Interval> {
        (0..self.n)
            .map(|pos| {
                rows.iter()
                    .zip(coeffs)
                    .fold(Interval::zero(p), |acc, (r, k)| acc.add(&r[pos].mul(k)))
            })
            .collect()
    }
}

/// `Φ = Σ_{i<n} λ_i c_i + E_n b_n` with `λ_i = log(|t − α_i|/|f′(α_i)|^{1/(n−2)})`.
#[derive(Clone, Debug, Serialize)]
pub struct Decomposition {
    pub order: Vec<usize>,
    /// `λ_i` for the first `n − 1` roots of `order`.
    pub coefficients: Vec<Interval>,
    /// `λ_n − (1/(n−1)) Σ_{i<n} λ_i`.
    pub e_n: Interval,
    /// Largest coordinate gap between the reconstruction and `Φ`.
    pub residual: Interval,
}

/// Distance from `Φ(x, y)` to the line through the chosen real root.
#[derive(Clone, Debug, Serialize)]
pub struct LineDistance {
    pub root: usize,
    pub order: Vec<usize>,
    /// `‖Σ_{i<n} log(|t − α_i|/|α_n − α_i|) c_i‖`.
    pub distance: Interval,
    /// Orthogonal-projection residual of `Φ` onto the line with exponent `1/(n−2)`.
    pub projection: Interval,
    /// Same residual against the line written with exponent `1/(n−1)` on `|f′(α_i)|`.
    pub projection_alt_exponent: Interval,
    /// `|t − α_n|`.
    pub root_gap: Interval,
    /// `2M^{n−1}(n+1)ⁿ √(n(n²−3n+2)) / (√3(n−1)) · |t − α_n|`.
    pub bound: Interval,
    pub within_bound: Tri,
}

/// The pair minimizing `|t_ij|` and the two smallness checks attached to it.
#[derive(Clone, Debug, Serialize)]
pub struct PairSelection {
    pub pair: (usize, usize),
    pub min_abs: Interval,
    /// `C⁻¹ √(2/(n−2)) exp(−‖Φ‖/(n√n))`.
    pub bound: Interval,
    pub holds: Tri,
    /// `|Log Q|` for the principal logarithm of the quotient whose modulus defines `t_ij`;
    /// absent when the quotient is not certified in the right half-plane.
    pub complex_abs: Option<Interval>,
    /// `C⁻¹ √(n/(n−2)) exp(−‖Φ‖/(n√n))`.
    pub complex_bound: Interval,
    pub complex_holds: Tri,
}

/// Distance smallness for large `y`: `distance < C⁻¹ exp(−‖Φ‖/(n√n))` once
/// `|y| ≥ C·threshold_unit`.
#[derive(Clone, Debug, Serialize)]
pub struct NearRootCheck {
    pub threshold: Interval,
    pub threshold_met: Tri,
    pub distance: Interval,
    pub bound: Interval,
    pub holds: Tri,
}

/// Certified upper bound on `h((α₁−α_i)/(α₁−α_j))` against the bound in terms of `‖Φ‖`.
/// `certified` is true when the upper bound already lies below; otherwise the comparison is
/// inconclusive.
#[derive(Clone, Debug, Serialize)]
pub struct HeightCheck {
    pub height_upper: Interval,
    pub bound: Interval,
    pub certified: Tri,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum GapVerdict {
    /// Preconditions certified and the inequality holds.
    Confirmed,
    /// Preconditions certified and the inequality fails.
    Violated,
    /// Preconditions certified, inequality not separable at this precision.
    Undecided,
    /// Some precondition is not certified; the quantities are informational.
    Vacuous,
}

/// Geometry of the triangle spanned by three of the points `Φ(x_j, y_j)`.
#[derive(Clone, Debug, Serialize)]
pub struct GapDiagnostics {
    pub variant: GapVariant,
    pub root: usize,
    pub order: Vec<usize>,
    /// Solutions sorted by increasing `‖Φ‖`.
    pub points: Vec<Source>,
    pub norms: Vec<Interval>,
    /// Positions in `points` of the triangle vertices.
    pub vertices: [usize; 3],
    /// Side lengths `a ≤ b ≤ c`.
    pub sides: [Interval; 3],
    pub heron: Interval,
    pub gram: Interval,
    pub degenerate: bool,
    pub side_floor: Interval,
    pub sides_above_floor: Tri,
    pub amplitude: Interval,
    pub threshold: Interval,
    pub threshold_met: Tri,
    pub related: Tri,
    pub degree_ok: bool,
    /// `r_last`.
    pub lhs: Interval,
    /// `A · exp(r_first/(n√n))`.
    pub rhs: Interval,
    pub inequality: Tri,
    pub verdict: GapVerdict,
}

/// Coordinates, decomposition and distances for one input point.
#[derive(Clone, Debug, Serialize)]
pub struct PointReport {
    #[serde(flatten)]
    pub point: LogPoint,
    pub basis_decomposition: Option<Decomposition>,
    pub distances: Option<Distances>,
}

#[derive(Clone, Debug, Serialize)]
pub struct Distances {
    pub line: LineDistance,
    /// `t_ij` indexed by original root indices; `null` on the diagonal and the chosen root.
    pub t_ij: Vec<Vec<Option<Interval>>>,
}

#[derive(Clone, Debug, Serialize)]
pub struct LogCurveReport {
    pub n: usize,
    #[serde(with = "int_string")]
    pub discriminant: BigInt,
    pub mahler: Interval,
    pub points: Vec<PointReport>,
    pub gap: Option<GapDiagnostics>,
}

/// A form together with the certified root data `Φ` needs.
#[derive(Clone, Debug)]
pub struct LogCurve {
    form: BinaryForm,
    rs: RootSystem,
    mahler: Interval,
    discriminant: BigInt,
    n: usize,
    prec: usize,
    log_d: Interval,
    log_deriv: Vec<Interval>,
}

impl LogCurve {
    pub fn new(form: &BinaryForm, cfg: &Config) -> Result<Self> {
        Self::prepare(form)?;
        let rs = form.roots(cfg)?;
        let mahler = form.mahler_measure(cfg)?.enclosure;
        Self::from_parts(form, rs, mahler)
    }

    fn prepare(form: &BinaryForm) -> Result<BigInt> {
        form.require_degree(3)?;
        form.require_a0()?;
        let d = form.discriminant()?;
        if d.is_zero() {
            return Err(Error::RepeatedRoot);
        }
        Ok(d)
    }

    pub fn from_parts(form: &BinaryForm, rs: RootSystem, mahler: Interval) -> Result<Self> {
        let discriminant = Self::prepare(form)?;
        let n = form.degree();
        if rs.n() != n {
            return Err(Error::InvalidArgument(format!("{} roots for a degree-{n} form", rs.n())));
        }
        let prec = rs.precision();
        let log_d = int(discriminant.abs(), prec).ln();
        let log_deriv = (0..n).map(|k| rs.deriv_abs(k).ln()).collect();
        Ok(LogCurve {
            form: form.clone(),
            rs,
            mahler,
            discriminant,
            n,
            prec,
            log_d,
            log_deriv,
        })
    }

    /// Same form with root enclosures of diameter at most `tol`.
    pub fn refined(&self, tol: f64, cfg: &Config) -> Result<Self> {
        let rs = self.rs.refined(tol, cfg)?;
        let p = rs.precision();
        Self::from_parts(&self.form, rs, self.mahler.with_prec(p))
    }

    pub fn form(&self) -> &BinaryForm {
        &self.form
    }

    pub fn roots(&self) -> &RootSystem {
        &self.rs
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    pub fn mahler(&self) -> &Interval {
        &self.mahler
    }

    pub fn discriminant(&self) -> &BigInt {
        &self.discriminant
    }

    fn nonzero_value(&self, x: &BigInt, y: &BigInt) -> Result<BigInt> {
        let v = self.form.evaluate(x, y);
        if v.is_zero() {
            return Err(Error::ZeroValue { x: x.clone(), y: y.clone() });
        }
        Ok(v)
    }

    fn n_minus_2(&self) -> i64 {
        self.n as i64 - 2
    }

    /// `log|x − α_k y|` for every root.
    fn log_factors(&self, x: &BigInt, y: &BigInt) -> Vec<Interval> {
        (0..self.n).map(|k| self.rs.linear_factor_abs(k, x, y).ln()).collect()
    }

    /// `φ_k = log|D^{1/(n(n−2))}(x − yα_k) / (F(x,y)^{1/n} f′(α_k)^{1/(n−2)})|`.
    pub fn phi(&self, x: &BigInt, y: &BigInt) -> Result<LogPoint> {
        let value = self.nonzero_value(x, y)?;
        let p = self.prec;
        let n = self.n as i64;
        let shift = self
            .log_d
            .div_i64(n * self.n_minus_2())
            .sub(&int(value.abs(), p).ln().div_i64(n));
        let coords: Vec<Interval> = self
            .log_factors(x, y)
            .iter()
            .zip(&self.log_deriv)
            .map(|(lf, ld)| lf.add(&shift).sub(&ld.div_i64(self.n_minus_2())))
            .collect();
        Ok(LogPoint {
            source: Source { x: x.clone(), y: y.clone() },
            norm: norm(&coords),
            coordinate_sum: sum(&coords),
            coords,
        })
    }

    /// Root order with `root` last, the others in increasing index.
    pub fn order_for(&self, root: usize) -> Result<Vec<usize>> {
        if root >= self.n {
            return Err(Error::InvalidArgument(format!("root index {root} out of range 0..{}", self.n)));
        }
        if !self.rs.is_real(root) {
            return Err(Error::NotRealRoot(root));
        }
        Ok((0..self.n).filter(|&k| k != root).chain(std::iter::once(root)).collect())
    }

    /// Certified `|x − α_root y| ≤ |x − α_j y|` for every `j`.
    pub fn related(&self, x: &BigInt, y: &BigInt, root: usize) -> Tri {
        let d: Vec<Interval> = (0..self.n).map(|k| self.rs.linear_factor_abs(k, x, y)).collect();
        (0..self.n)
            .filter(|&j| j != root)
            .fold(Tri::True, |acc, j| acc.and(d[root].le(&d[j])))
    }

    /// `log(|t − α_i|/|α_n − α_i|)` for the first `n − 1` roots of `order`, `t = x/y`.
    fn line_logs(&self, x: &BigInt, y: &BigInt, order: &[usize]) -> Vec<Interval> {
        let root = order[self.n - 1];
        let log_y = int(y.abs(), self.prec).ln();
        let logs = self.log_factors(x, y);
        order[..self.n - 1]
            .iter()
            .map(|&i| logs[i].sub(&log_y).sub(&self.rs.distance(root, i).ln()))
            .collect()
    }

    /// Coefficients of `Φ(x, y)` on `c_1, …, c_{n−1}, b_n` in the order that puts `root` last.
    pub fn decomposition(&self, x: &BigInt, y: &BigInt, root: usize) -> Result<Decomposition> {
        if y.is_zero() {
            return Err(Error::ZeroY);
        }
        let order = self.order_for(root)?;
        let point = self.phi(x, y)?;
        let p = self.prec;
        let log_y = int(y.abs(), p).ln();
        let logs = self.log_factors(x, y);
        let lambda: Vec<Interval> = order
            .iter()
            .map(|&k| logs[k].sub(&log_y).sub(&self.log_deriv[k].div_i64(self.n_minus_2())))
            .collect();
        let head = &lambda[..self.n - 1];
        let e_n = lambda[self.n - 1].sub(&sum(head).div_i64(self.n as i64 - 1));
        let basis = BasisSet::new(self.n)?;
        let mut coeffs = head.to_vec();
        coeffs.push(e_n.clone());
        let mut rows = BasisSet::interval_rows(&basis.c, p);
        rows.extend(BasisSet::interval_rows(&basis.b[self.n - 1..], p));
        let rebuilt = basis.combine(&rows, &coeffs, p);
        let residual = order
            .iter()
            .zip(&rebuilt)
            .map(|(&k, r)| r.sub(&point.coords[k]).abs())
            .reduce(|a, b| a.max(&b))
            .expect("n ≥ 3");
        Ok(Decomposition {
            order,
            coefficients: head.to_vec(),
            e_n,
            residual,
        })
    }

    /// Point on the line `Σ_{i<n} log(|α_n − α_i|/|f′(α_i)|^{1/e}) c_i`, in `order` positions.
    fn line_base(&self, order: &[usize], exponent_den: i64, basis: &BasisSet) -> Vec<Interval> {
        let root = order[self.n - 1];
        let coeffs: Vec<Interval> = order[..self.n - 1]
            .iter()
            .map(|&i| self.rs.distance(root, i).ln().sub(&self.log_deriv[i].div_i64(exponent_den)))
            .collect();
        basis.combine(&BasisSet::interval_rows(&basis.c, self.prec), &coeffs, self.prec)
    }

    /// Residual of `v` after removing its `b_n` component.
    fn off_line(&self, v: &[Interval], bn: &[Interval]) -> Interval {
        let k = dot(v, bn).div(&dot(bn, bn));
        let r: Vec<Interval> = v.iter().zip(bn).map(|(a, b)| a.sub(&b.mul(&k))).collect();
        norm(&r)
    }

    /// `|t − α_root|` for `t = x/y`.
    pub fn root_gap(&self, x: &BigInt, y: &BigInt, root: usize) -> Result<Interval> {
        if y.is_zero() {
            return Err(Error::ZeroY);
        }
        Ok(self.rs.linear_factor_abs(root, x, y).div(&int(y.abs(), self.prec)))
    }

    /// `2M^{n−1}(n+1)ⁿ √(n(n²−3n+2)) / (√3(n−1))`.
    pub fn line_bound_factor(&self) -> Interval {
        let p = self.prec;
        let n = self.n as i64;
        self.mahler
            .powi(n - 1)
            .mul_i64(2)
            .mul(&int(n + 1, p).powi(n))
            .mul(&int(n * (n * n - 3 * n + 2), p).sqrt())
            .div(&int(3, p).sqrt().mul_i64(n - 1))
    }

    /// Distance from `Φ(x, y)` to the line attached to the real root `root`; requires the
    /// pair to be related to that root.
    pub fn line_distance(&self, x: &BigInt, y: &BigInt, root: usize) -> Result<LineDistance> {
        self.order_for(root)?;
        if y.is_zero() {
            return Err(Error::ZeroY);
        }
        if self.related(x, y, root) == Tri::False {
            return Err(Error::NotRelated {
                x: x.clone(),
                y: y.clone(),
                root,
            });
        }
        self.line_distance_unchecked(x, y, root)
    }

    /// [`LogCurve::line_distance`] without the relatedness requirement, for synthetic points.
    pub fn line_distance_unchecked(&self, x: &BigInt, y: &BigInt, root: usize) -> Result<LineDistance> {
        let order = self.order_for(root)?;
        let point = self.phi(x, y)?;
        let root_gap = self.root_gap(x, y, root)?;
        let p = self.prec;
        let basis = BasisSet::new(self.n)?;
        let c_rows = BasisSet::interval_rows(&basis.c, p);
        let distance = norm(&basis.combine(&c_rows, &self.line_logs(x, y, &order), p));
        let phi: Vec<Interval> = order.iter().map(|&k| point.coords[k].clone()).collect();
        let bn = &BasisSet::interval_rows(&basis.b[self.n - 1..], p)[0];
        let projection = self.off_line(&sub_vec(&phi, &self.line_base(&order, self.n_minus_2(), &basis)), bn);
        let projection_alt_exponent =
            self.off_line(&sub_vec(&phi, &self.line_base(&order, self.n as i64 - 1, &basis)), bn);
        let bound = self.line_bound_factor().mul(&root_gap);
        Ok(LineDistance {
            root,
            order,
            within_bound: distance.le(&bound),
            distance,
            projection,
            projection_alt_exponent,
            root_gap,
            bound,
        })
    }

    fn check_pair(&self, root: usize, i: usize, j: usize) -> Result<()> {
        if i >= self.n || j >= self.n || root >= self.n {
            return Err(Error::IndexClash(format!("index out of range 0..{}", self.n)));
        }
        if i == j || i == root || j == root {
            return Err(Error::IndexClash(format!("i = {i}, j = {j}, chosen root {root}")));
        }
        Ok(())
    }

    /// `t_ij = log|(α_n − α_i)/(α_n − α_j)| + log|(t − α_j)/(t − α_i)|` with `α_n = α_root`.
    pub fn t_ij(&self, x: &BigInt, y: &BigInt, root: usize, i: usize, j: usize) -> Result<Interval> {
        self.check_pair(root, i, j)?;
        if y.is_zero() {
            return Err(Error::ZeroY);
        }
        self.nonzero_value(x, y)?;
        let fi = self.rs.linear_factor_abs(i, x, y).ln();
        let fj = self.rs.linear_factor_abs(j, x, y).ln();
        Ok(self
            .rs
            .distance(root, i)
            .ln()
            .sub(&self.rs.distance(root, j).ln())
            .add(&fj)
            .sub(&fi))
    }

    /// All `t_ij`, `None` where undefined.
    pub fn t_matrix(&self, x: &BigInt, y: &BigInt, root: usize) -> Result<Vec<Vec<Option<Interval>>>> {
        self.order_for(root)?;
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| {
                        if i == j || i == root || j == root {
                            Ok(None)
                        } else {
                            self.t_ij(x, y, root, i, j).map(Some)
                        }
                    })
                    .collect()
            })
            .collect()
    }

    /// `Q = (α_n − α_i)(t − α_j) / ((α_n − α_j)(t − α_i))`.
    fn t_quotient(&self, x: &BigInt, y: &BigInt, root: usize, i: usize, j: usize) -> ComplexBox {
        let t = ComplexBox::from_rational(&BigRational::new(x.clone(), y.clone()), self.prec);
        let a = |k: usize| self.rs.root(k);
        let num = a(root).sub(a(i)).mul(&t.sub(a(j)));
        let den = a(root).sub(a(j)).mul(&t.sub(a(i)));
        num.div(&den)
    }

    /// Pair `(i, j)` minimizing `|t_ij|` with the real and complex smallness checks.
    pub fn pair_selection(&self, x: &BigInt, y: &BigInt, root: usize, c: &Interval) -> Result<PairSelection> {
        self.order_for(root)?;
        let point = self.phi(x, y)?;
        let others: Vec<usize> = (0..self.n).filter(|&k| k != root).collect();
        let mut values = Vec::new();
        for (a, &i) in others.iter().enumerate() {
            for &j in &others[a + 1..] {
                values.push(((i, j), self.t_ij(x, y, root, i, j)?.abs()));
            }
        }
        let (pair, _) = values
            .iter()
            .min_by(|a, b| a.1.mid_f64().total_cmp(&b.1.mid_f64()))
            .cloned()
            .expect("at least one pair");
        let min_abs = values.iter().map(|v| v.1.clone()).reduce(|a, b| a.min(&b)).expect("nonempty");
        let p = self.prec;
        let n2 = self.n_minus_2();
        let base = decay(self.n, &point.norm).div(c);
        let bound = rat(2, n2, p).sqrt().mul(&base);
        let complex_bound = rat(self.n as i64, n2, p).sqrt().mul(&base);
        let complex_abs = self.t_quotient(x, y, root, pair.0, pair.1).log_modulus_right_half();
        let complex_holds = complex_abs
            .as_ref()
            .map_or(Tri::Undecided, |v| v.lt(&complex_bound));
        Ok(PairSelection {
            pair,
            holds: min_abs.lt(&bound),
            min_abs,
            bound,
            complex_abs,
            complex_bound,
            complex_holds,
        })
    }

    /// `|LHS − (2n−2)‖Σ log(|t − α_i|/|α_n − α_i|) c_i‖²|` for the pairwise log-ratio identity,
    /// with `β_i` running cyclically over the first `n − 1` roots of the order.
    pub fn pairwise_identity_residual(&self, t: &BigRational, root: usize) -> Result<(Interval, Interval)> {
        let order = self.order_for(root)?;
        let (x, y) = (t.numer().clone(), t.denom().clone());
        if self.form.evaluate(&x, &y).is_zero() {
            return Err(Error::RootInput(t.to_string()));
        }
        let u = self.line_logs(&x, &y, &order);
        let m = self.n - 1;
        let mut lhs = Interval::zero(self.prec);
        for k in 1..=self.n - 2 {
            for i in 0..m {
                lhs = lhs.add(&u[i].sub(&u[(i + k) % m]).sqr());
            }
        }
        let basis = BasisSet::new(self.n)?;
        let c_rows = BasisSet::interval_rows(&basis.c, self.prec);
        let rhs = norm(&basis.combine(&c_rows, &u, self.prec)).sqr().mul_i64(2 * self.n as i64 - 2);
        Ok((lhs.sub(&rhs).abs(), lhs))
    }

    /// Distance smallness once `|y| ≥ C·threshold_unit`.
    pub fn near_root_check(&self, x: &BigInt, y: &BigInt, root: usize, m: &BigInt, c: &Interval) -> Result<NearRootCheck> {
        let line = self.line_distance_unchecked(x, y, root)?;
        let point = self.phi(x, y)?;
        let threshold = gap_threshold_unit(self.n, m, &self.discriminant, &self.mahler)?.mul(c);
        let bound = decay(self.n, &point.norm).div(c);
        Ok(NearRootCheck {
            threshold_met: int(y.abs(), self.prec).ge(&threshold),
            threshold,
            holds: line.distance.lt(&bound),
            distance: line.distance,
            bound,
        })
    }

    /// `n√n · log(|F(x,y)|^{1/n} / min_i |x − α_i y|) + ‖Φ(1,0)‖` bound.
    pub fn norm_upper_bound(&self, x: &BigInt, y: &BigInt) -> Result<Interval> {
        let value = self.nonzero_value(x, y)?;
        let p = self.prec;
        let nn = int(self.n as i64, p);
        let nearest = (0..self.n)
            .map(|k| self.rs.linear_factor_abs(k, x, y))
            .reduce(|a, b| a.min(&b))
            .expect("n ≥ 3");
        let ratio = int(value.abs(), p).ln().div_i64(self.n as i64).sub(&nearest.ln());
        Ok(nn.mul(&nn.sqrt()).mul(&ratio).add(&origin_norm_bound(self.n, &self.discriminant, &self.mahler)))
    }

    /// `h((α₁−α_i)/(α₁−α_j)) ≤ 2 log 2 + 4 log M / n` compared with the bound in `‖Φ(x, y)‖`.
    pub fn height_check(&self, x: &BigInt, y: &BigInt, m: &BigInt) -> Result<HeightCheck> {
        let point = self.phi(x, y)?;
        let height_upper = quotient_height_upper(self.n, &self.mahler);
        let bound = height_quotient_bound(self.n, &point.norm, m);
        Ok(HeightCheck {
            certified: height_upper.le(&bound),
            height_upper,
            bound,
        })
    }

    /// Triangle diagnostics for three or four solutions related to the real root `root`.
    pub fn gap_check(&self, solutions: &[(BigInt, BigInt)], root: usize, m: &BigInt, c: &Interval) -> Result<GapDiagnostics> {
        let variant = match solutions.len() {
            3 => GapVariant::Three,
            4 => GapVariant::Four,
            k => return Err(Error::WrongCount(k)),
        };
        let order = self.order_for(root)?;
        let mut pts = solutions
            .iter()
            .map(|(x, y)| self.phi(x, y))
            .collect::<Result<Vec<_>>>()?;
        pts.sort_by(|a, b| a.norm.mid_f64().total_cmp(&b.norm.mid_f64()));
        let vertices = match variant {
            GapVariant::Three => [0, 1, 2],
            GapVariant::Four => [0, 1, 3],
        };
        let [v1, v2, v3] = vertices.map(|k| &pts[k].coords);
        let mut sides = [
            norm(&sub_vec(v2, v1)),
            norm(&sub_vec(v3, v2)),
            norm(&sub_vec(v3, v1)),
        ];
        sides.sort_by(|a, b| a.mid_f64().total_cmp(&b.mid_f64()));
        let heron = heron_area(&sides[0], &sides[1], &sides[2]);
        let gram = gram_area(v1, v2, v3);
        let degenerate = is_degenerate(&gram, &sides[2]);
        let floor = side_floor(self.n, m, &self.mahler);
        let sides_above_floor = sides.iter().fold(Tri::True, |acc, s| acc.and(s.ge(&floor)));
        let amplitude = gap_amplitude(self.n, c, &gap_bracket(self.n, m, &self.mahler, variant), variant);
        let threshold = gap_threshold_unit(self.n, m, &self.discriminant, &self.mahler)?.mul(c);
        let threshold_met = pts
            .iter()
            .fold(Tri::True, |acc, pt| acc.and(int(pt.source.y.abs(), self.prec).ge(&threshold)));
        let related = pts
            .iter()
            .fold(Tri::True, |acc, pt| acc.and(self.related(&pt.source.x, &pt.source.y, root)));
        let bounded = pts.iter().fold(Tri::True, |acc, pt| {
            acc.and(Tri::from_bool(self.form.evaluate(&pt.source.x, &pt.source.y).abs() <= *m))
        });
        let degree_ok = variant == GapVariant::Four || self.n >= 5;
        let lhs = pts[vertices[2]].norm.clone();
        let rhs = amplitude.mul(&decay(self.n, &pts[0].norm).recip());
        let inequality = lhs.gt(&rhs);
        let preconditions = threshold_met.and(related).and(bounded).and(Tri::from_bool(degree_ok));
        let verdict = match (preconditions, inequality) {
            (Tri::True, Tri::True) => GapVerdict::Confirmed,
            (Tri::True, Tri::False) => GapVerdict::Violated,
            (Tri::True, Tri::Undecided) => GapVerdict::Undecided,
            _ => GapVerdict::Vacuous,
        };
        Ok(GapDiagnostics {
            variant,
            root,
            order,
            norms: pts.iter().map(|pt| pt.norm.clone()).collect(),
            points: pts.into_iter().map(|pt| pt.source).collect(),
            vertices,
            sides,
            heron,
            gram,
            degenerate,
            side_floor: floor,
            sides_above_floor,
            amplitude,
            threshold,
            threshold_met,
            related,
            degree_ok,
            lhs,
            rhs,
            inequality,
            verdict,
        })
    }

    /// Coordinates for each point; decomposition and distances for points related to a real
    /// root; gap diagnostics when three or four points are given.
    pub fn report(&self, points: &[(BigInt, BigInt)], m: &BigInt, c: &Interval, cfg: &Config) -> Result<LogCurveReport> {
        let mut reports = Vec::with_capacity(points.len());
        let mut roots = Vec::with_capacity(points.len());
        for (x, y) in points {
            let point = self.phi(x, y)?;
            let root = (!y.is_zero())
                .then(|| related_root(&self.rs, x, y, cfg).index)
                .filter(|&k| self.rs.is_real(k));
            roots.push(root);
            let (basis_decomposition, distances) = match root {
                Some(k) => (
                    Some(self.decomposition(x, y, k)?),
                    Some(Distances {
                        line: self.line_distance_unchecked(x, y, k)?,
                        t_ij: self.t_matrix(x, y, k)?,
                    }),
                ),
                None => (None, None),
            };
            reports.push(PointReport {
                point,
                basis_decomposition,
                distances,
            });
        }
        let gap = match (points.len(), roots.first().copied().flatten()) {
            (3 | 4, Some(k)) => Some(self.gap_check(points, k, m, c)?),
            _ => None,
        };
        Ok(LogCurveReport {
            n: self.n,
            discriminant: self.discriminant.clone(),
            mahler: self.mahler.clone(),
            points: reports,
            gap,
        })
    }
}

/// Lower bound on `‖Φ(x, y)‖` for all but the norm-minimizing solution:
/// `½ log(|D|^{1/(n(n−1))} / (2m^{2/n}))` for the inequality, `½ log(|D|^{1/(n(n−1))})` for the
/// equation.
pub fn phi_norm_lower(n: usize, d: &BigInt, m: &BigInt, mode: Mode, prec: usize) -> Result<Interval> {
    if n < 3 {
        return Err(Error::DegreeTooSmall { degree: n, required: 3 });
    }
    if d.is_zero() {
        return Err(Error::RepeatedRoot);
    }
    let ni = n as i64;
    let root_d = int(d.abs(), prec).ln().div_i64(ni * (ni - 1));
    let inner = match mode {
        Mode::Inequality => root_d
            .sub(&int(2, prec).ln())
            .sub(&int(m.clone(), prec).ln().mul_i64(2).div_i64(ni)),
        Mode::Equation => root_d,
    };
    Ok(inner.div_i64(2))
}

/// `√n · log(|D|^{1/(n(n−2))} M^{(2n−2)/(n−2)})`, bounding `‖Φ(1, 0)‖`.
pub fn origin_norm_bound(n: usize, d: &BigInt, mahler: &Interval) -> Interval {
    let p = mahler.prec();
    let ni = n as i64;
    int(d.abs(), p)
        .ln()
        .div_i64(ni * (ni - 2))
        .add(&mahler.ln().mul_i64(2 * ni - 2).div_i64(ni - 2))
        .mul(&int(ni, p).sqrt())
}

/// `|a₀| ≤ m` and `|D| > 2^{(n−1)²}`.
pub fn origin_norm_applies(n: usize, a0: &BigInt, m: &BigInt, d: &BigInt) -> bool {
    a0.abs() <= *m && d.abs() > BigInt::from(2).pow(((n - 1) * (n - 1)) as u32)
}

/// `2|a₀|^{1/(n−1)} n³ m^{1/n} H^{1/(n−2)} M^{4+4√n}`: beyond it `‖Φ(1,0)‖ < ‖Φ(x,y)‖`.
pub fn origin_separation_threshold(n: usize, a0: &BigInt, m: &BigInt, height: &BigInt, mahler: &Interval) -> Interval {
    let p = mahler.prec();
    let ni = n as i64;
    let e = |num: i64, den: i64| BigRational::new(num.into(), den.into());
    int(a0.abs(), p)
        .pow_rational(&e(1, ni - 1))
        .mul_i64(2 * ni * ni * ni)
        .mul(&int(m.clone(), p).pow_rational(&e(1, ni)))
        .mul(&int(height.clone(), p).pow_rational(&e(1, ni - 2)))
        .mul(&mahler.pow(&int(ni, p).sqrt().mul_i64(4).add(&int(4, p))))
}

/// `2 log 2 + 4 log M / n`, an upper bound on the height of any `(α_a − α_i)/(α_a − α_j)`.
pub fn quotient_height_upper(n: usize, mahler: &Interval) -> Interval {
    let p = mahler.prec();
    int(2, p).ln().mul_i64(2).add(&mahler.ln().mul_i64(4).div_i64(n as i64))
}

/// `√(s(s−a)(s−b)(s−c))` with `s = (a+b+c)/2`; negative factors clamp to zero.
pub fn heron_area(a: &Interval, b: &Interval, c: &Interval) -> Interval {
    let s = a.add(b).add(c).div_i64(2);
    s.mul(&s.sub(a)).mul(&s.sub(b)).mul(&s.sub(c)).sqrt()
}

/// `½ √(|u|²|v|² − (u·v)²)` for `u = q − p`, `v = r − p`.
pub fn gram_area(p: &[Interval], q: &[Interval], r: &[Interval]) -> Interval {
    let u = sub_vec(q, p);
    let v = sub_vec(r, p);
    dot(&u, &u).mul(&dot(&v, &v)).sub(&dot(&u, &v).sqr()).sqrt().div_i64(2)
}

/// Area below `10⁻⁹ c²` for longest side `c`.
pub fn is_degenerate(area: &Interval, longest: &Interval) -> bool {
    area.hi_f64() <= 1e-9 * longest.hi_f64().powi(2).max(f64::MIN_POSITIVE)
}

/// Continued-fraction convergents `p/q` of every real number in `alpha`, as far as the
/// partial quotients are determined by the enclosure.
pub fn convergents(alpha: &Interval, limit: usize) -> Vec<(BigInt, BigInt)> {
    let (Some(mut lo), Some(mut hi)) = (alpha.lo_rational(), alpha.hi_rational()) else {
        return Vec::new();
    };
    let (mut p0, mut q0) = (BigInt::one(), BigInt::zero());
    let (mut p1, mut q1) = (BigInt::zero(), BigInt::one());
    let mut out = Vec::new();
    while out.len() < limit {
        let a = lo.floor();
        if a != hi.floor() {
            break;
        }
        let a_int = a.to_integer();
        let p2 = &a_int * &p0 + &p1;
        let q2 = &a_int * &q0 + &q1;
        out.push((p2.clone(), q2.clone()));
        (p1, q1, p0, q0) = (p0, q0, p2, q2);
        let (flo, fhi) = (&lo - &a, &hi - &a);
        if flo.is_zero() || fhi.is_zero() {
            break;
        }
        (lo, hi) = (fhi.recip(), flo.recip());
    }
    out
}

/// Rational `mid(α_k) + delta` for a real root `k`, giving `|t − α_k| ≈ |delta|`.
pub fn offset_from_root(rs: &RootSystem, k: usize, delta: &BigRational) -> Result<BigRational> {
    if !rs.is_real(k) {
        return Err(Error::NotRealRoot(k));
    }
    let mid = bf_to_rational(&rs.root(k).re.mid())
        .ok_or_else(|| Error::InvalidArgument("root enclosure is not finite".into()))?;
    Ok(mid + delta)
}

/// Rational `t = x/y` with `gcd(x, y) = 1` and `y > 0`.
pub fn as_pair(t: &BigRational) -> (BigInt, BigInt) {
    let g = t.numer().gcd(t.denom());
    (t.numer() / &g, t.denom() / &g)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn b(v: i64) -> BigInt {
        BigInt::from(v)
    }

    fn curve(c: &[i64]) -> LogCurve {
        LogCurve::new(&BinaryForm::from_i64(c).unwrap(), &Config::default()).unwrap()
    }

    fn real_root(lc: &LogCurve) -> usize {
        lc.roots().real_indices()[0]
    }

    #[test]
    fn coordinates_sum_to_zero() {
        let lc = curve(&[1, 0, 0, -2]);
        for (x, y) in [(1, 1), (1, 0), (-3, 7), (5, 4)] {
            let pt = lc.phi(&b(x), &b(y)).unwrap();
            assert!(pt.coordinate_sum.abs().hi_f64() < 1e-10, "{x},{y}");
            let neg = lc.phi(&b(-x), &b(-y)).unwrap();
            assert!(pt.norm.sub(&neg.norm).abs().hi_f64() < 1e-25);
        }
        assert!(matches!(lc.phi(&b(0), &b(0)), Err(Error::ZeroValue { .. })));
    }

    #[test]
    fn phi_matches_direct_evaluation() {
        let lc = curve(&[1, 0, 0, -2]);
        let pt = lc.phi(&b(1), &b(1)).unwrap();
        let c = 2f64.cbrt();
        let w = num_complex::Complex64::from_polar(c, 2.0 * std::f64::consts::PI / 3.0);
        let roots = [num_complex::Complex64::new(c, 0.0), w, w.conj()];
        let mut want: Vec<f64> = roots
            .iter()
            .map(|a| (108f64.powf(1.0 / 3.0) * (1.0 - a).norm() / (3.0 * a.norm_sqr())).ln())
            .collect();
        want.sort_by(f64::total_cmp);
        let mut got: Vec<f64> = pt.coords.iter().map(Interval::mid_f64).collect();
        got.sort_by(f64::total_cmp);
        for (g, w) in got.iter().zip(&want) {
            assert!((g - w).abs() < 1e-12, "{g} vs {w}");
        }
    }

    #[test]
    fn basis_laws() {
        for n in 3..=8 {
            let basis = BasisSet::new(n).unwrap();
            assert!(basis.laws_hold());
            let nn = n as i64;
            assert_eq!(basis.c_gram(0, 1), BigRational::new((-1).into(), (nn - 1).into()));
        }
        assert!(BasisSet::new(2).is_err());
    }

    #[test]
    fn decomposition_rebuilds_phi() {
        for coeffs in [vec![1, 0, 0, -2], vec![1, 0, -4, 1], vec![1, 0, -6, 0, 8, 2]] {
            let lc = curve(&coeffs);
            for root in lc.roots().real_indices() {
                let dec = lc.decomposition(&b(7), &b(-3), root).unwrap();
                assert!(dec.residual.hi_f64() < 1e-9);
                assert_eq!(*dec.order.last().unwrap(), root);
            }
        }
    }

    #[test]
    fn norm_lower_examples() {
        let ineq = phi_norm_lower(3, &b(108), &b(1), Mode::Inequality, 128).unwrap();
        let eq = phi_norm_lower(3, &b(108), &b(1), Mode::Equation, 128).unwrap();
        assert!((ineq.mid_f64() - 0.5 * (108f64.powf(1.0 / 6.0) / 2.0).ln()).abs() < 1e-14);
        assert!((ineq.mid_f64() - 0.0436).abs() < 1e-4);
        assert!((eq.mid_f64() - 0.3902).abs() < 1e-4);
        let bigger = phi_norm_lower(3, &b(108), &b(5), Mode::Inequality, 128).unwrap();
        assert_eq!(bigger.lt(&ineq), Tri::True);
    }

    #[test]
    fn line_distance_agrees_with_projection() {
        let lc = curve(&[1, 0, 0, -2]);
        let k = real_root(&lc);
        let ld = lc.line_distance(&b(1), &b(1), k).unwrap();
        assert!(ld.distance.sub(&ld.projection).abs().hi_f64() < 1e-10);
        assert_eq!(ld.within_bound, Tri::True);
        // One real root: the conjugate pair contributes equal logs and Σ c_i = 0.
        assert!(ld.distance.hi_f64() < 1e-25);
        let nr = (0..3).find(|&j| !lc.roots().is_real(j)).unwrap();
        assert!(matches!(lc.line_distance(&b(1), &b(1), nr), Err(Error::NotRealRoot(_))));
    }

    #[test]
    fn totally_real_line_distance() {
        let lc = curve(&[1, 0, -4, 1]);
        for k in lc.roots().real_indices() {
            let ld = lc.line_distance_unchecked(&b(9), &b(4), k).unwrap();
            assert!(ld.distance.lo_f64() > 1e-3);
            assert!(ld.distance.sub(&ld.projection).abs().hi_f64() < 1e-10);
            assert!(ld.distance.sub(&ld.projection_alt_exponent).abs().lo_f64() > 1e-6);
        }
    }

    #[test]
    fn unrelated_pairs_are_rejected() {
        let lc = curve(&[1, 0, -4, 1]);
        let reals = lc.roots().real_indices();
        assert_eq!(reals.len(), 3);
        let r = related_root(lc.roots(), &b(2), &b(1), &Config::default()).index;
        let other = *reals.iter().find(|&&k| k != r).unwrap();
        assert!(matches!(lc.line_distance(&b(2), &b(1), other), Err(Error::NotRelated { .. })));
        assert!(lc.line_distance(&b(2), &b(1), r).is_ok());
    }

    #[test]
    fn distance_vanishes_at_the_root() {
        let lc = curve(&[1, 0, -4, 1]).refined(1e-60, &Config::default()).unwrap();
        let k = real_root(&lc);
        let mut last = f64::INFINITY;
        for e in [3, 6, 12, 24, 40] {
            let t = offset_from_root(lc.roots(), k, &BigRational::new(1.into(), BigInt::from(10).pow(e))).unwrap();
            let (x, y) = as_pair(&t);
            let ld = lc.line_distance_unchecked(&x, &y, k).unwrap();
            assert!(ld.distance.mid_f64() < last);
            assert_eq!(ld.within_bound, Tri::True);
            last = ld.distance.mid_f64();
        }
        assert!(last < 1e-38);
    }

    #[test]
    fn t_ij_properties() {
        let lc = curve(&[1, 0, -6, 0, 8, 2]);
        let k = real_root(&lc);
        let others: Vec<usize> = (0..5).filter(|&j| j != k).collect();
        let (i, j) = (others[0], others[1]);
        let a = lc.t_ij(&b(3), &b(2), k, i, j).unwrap();
        let r = lc.t_ij(&b(3), &b(2), k, j, i).unwrap();
        assert!(a.add(&r).abs().hi_f64() < 1e-25);
        assert!(matches!(lc.t_ij(&b(3), &b(2), k, i, i), Err(Error::IndexClash(_))));
        assert!(matches!(lc.t_ij(&b(3), &b(2), k, k, j), Err(Error::IndexClash(_))));
        let m = lc.t_matrix(&b(3), &b(2), k).unwrap();
        assert!(m[k].iter().all(Option::is_none));
        assert!(m[i][j].is_some());
    }

    #[test]
    fn pairwise_identity_residuals() {
        let lc = curve(&[1, 0, 0, -2]);
        let (res, lhs) = lc.pairwise_identity_residual(&BigRational::from_integer(10.into()), real_root(&lc)).unwrap();
        assert!(res.hi_f64() <= 1e-9 * lhs.mid_f64().max(1.0));
        let lc5 = curve(&[1, 0, -6, 0, 8, 2]);
        for k in lc5.roots().real_indices() {
            let (res, lhs) = lc5.pairwise_identity_residual(&BigRational::new(3.into(), 2.into()), k).unwrap();
            assert!(res.hi_f64() <= 1e-9 * lhs.mid_f64().max(1.0));
        }
        let reducible = curve(&[1, 0, -1, 0]);
        let k = real_root(&reducible);
        assert!(matches!(
            reducible.pairwise_identity_residual(&BigRational::one(), k),
            Err(Error::RootInput(_))
        ));
    }

    #[test]
    fn triangle_areas() {
        let p = 128;
        let s = |v: i64| Interval::from_i64(v, p);
        let h = heron_area(&s(3), &s(4), &s(5));
        assert!(h.sub(&s(6)).abs().hi_f64() < 1e-30);
        let g = gram_area(&[s(0), s(0)], &[s(3), s(0)], &[s(0), s(4)]);
        assert!(g.sub(&s(6)).abs().hi_f64() < 1e-30);
        let flat = gram_area(&[s(0), s(0)], &[s(1), s(1)], &[s(3), s(3)]);
        assert!(is_degenerate(&flat, &s(5)));
        assert!(heron_area(&s(1), &s(2), &s(3)).hi_f64() < 1e-15);
    }

    #[test]
    fn convergents_of_cube_root_two() {
        let lc = curve(&[1, 0, 0, -2]);
        let k = real_root(&lc);
        let cf = convergents(&lc.roots().root(k).re, 8);
        let want = [(1, 1), (4, 3), (5, 4), (29, 23), (34, 27), (63, 50), (286, 227), (349, 277)];
        let got: Vec<(BigInt, BigInt)> = cf;
        assert_eq!(got, want.iter().map(|&(p, q)| (b(p), b(q))).collect::<Vec<_>>());
    }

    #[test]
    fn gap_check_counts() {
        let lc = curve(&[1, 0, 0, -2]);
        let k = real_root(&lc);
        let two = vec![(b(1), b(1)), (b(4), b(3))];
        assert!(matches!(lc.gap_check(&two, k, &b(1), &Interval::one(128)), Err(Error::WrongCount(2))));
    }

    #[test]
    fn origin_norm_bounds() {
        let lc = curve(&[1, 0, -30, 1]);
        let d = lc.discriminant().clone();
        assert!(origin_norm_applies(3, &b(1), &b(1), &d));
        let origin = lc.phi(&b(1), &b(0)).unwrap();
        assert_eq!(origin.norm.le(&origin_norm_bound(3, &d, lc.mahler())), Tri::True);
        let up = lc.norm_upper_bound(&b(5), &b(1)).unwrap();
        assert_eq!(lc.phi(&b(5), &b(1)).unwrap().norm.le(&up), Tri::True);
    }
}
