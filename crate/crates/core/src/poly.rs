//! Dense univariate polynomials over ℤ: exact arithmetic, subresultant resultants,
//! Sturm sequences and real-root isolation with rational endpoints.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::numeric::{ComplexBox, Interval};

/// Coefficients in ascending order of powers; no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct IntPoly(Vec<BigInt>);

fn sign_of(v: &BigInt) -> i8 {
    match v.sign() {
        num_bigint::Sign::Minus => -1,
        num_bigint::Sign::NoSign => 0,
        num_bigint::Sign::Plus => 1,
    }
}

impl IntPoly {
    pub fn new(mut c: Vec<BigInt>) -> Self {
        while c.last().is_some_and(Zero::is_zero) {
            c.pop();
        }
        IntPoly(c)
    }

    pub fn from_i64(c: &[i64]) -> Self {
        IntPoly::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn zero() -> Self {
        IntPoly(Vec::new())
    }

    pub fn constant(v: BigInt) -> Self {
        IntPoly::new(vec![v])
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.0
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    /// Degree; the zero polynomial has none.
    pub fn degree(&self) -> Option<usize> {
        self.0.len().checked_sub(1)
    }

    fn deg(&self) -> usize {
        self.degree().expect("nonzero polynomial")
    }

    pub fn lc(&self) -> &BigInt {
        self.0.last().expect("nonzero polynomial")
    }

    pub fn coeff(&self, k: usize) -> BigInt {
        self.0.get(k).cloned().unwrap_or_default()
    }

    pub fn eval(&self, x: &BigInt) -> BigInt {
        self.0.iter().rev().fold(BigInt::zero(), |acc, c| acc * x + c)
    }

    /// `den^deg · P(num/den)`, an exact integer whose sign is that of `P(num/den)` for `den > 0`.
    pub fn eval_homog(&self, num: &BigInt, den: &BigInt) -> BigInt {
        let Some(d) = self.degree() else {
            return BigInt::zero();
        };
        let mut acc = BigInt::zero();
        let mut dpow = BigInt::one();
        // Horner over descending powers with den powers accumulated on the tail.
        let mut terms = Vec::with_capacity(d + 1);
        for k in 0..=d {
            terms.push(dpow.clone());
            if k < d {
                dpow *= den;
            }
        }
        for (k, c) in self.0.iter().enumerate().rev() {
            acc = acc * num + c * &terms[d - k];
        }
        acc
    }

    pub fn sign_at(&self, r: &BigRational) -> i8 {
        sign_of(&self.eval_homog(r.numer(), r.denom()))
    }

    pub fn eval_box(&self, z: &ComplexBox) -> ComplexBox {
        let p = z.prec();
        let mut acc = ComplexBox::from_int(&BigInt::zero(), p);
        for c in self.0.iter().rev() {
            acc = acc.mul(z).add(&ComplexBox::from_int(c, p));
        }
        acc
    }

    pub fn eval_interval(&self, x: &Interval) -> Interval {
        let p = x.prec();
        let mut acc = Interval::zero(p);
        for c in self.0.iter().rev() {
            acc = acc.mul(x).add(&Interval::from_int(c, p));
        }
        acc
    }

    pub fn derivative(&self) -> IntPoly {
        IntPoly::new(
            self.0
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c * BigInt::from(k))
                .collect(),
        )
    }

    /// Positive gcd of the coefficients (0 for the zero polynomial).
    pub fn content(&self) -> BigInt {
        self.0.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    /// `P / content`, keeping the sign of the leading coefficient.
    pub fn primitive_part(&self) -> IntPoly {
        let c = self.content();
        if c.is_zero() || c.is_one() {
            return self.clone();
        }
        IntPoly(self.0.iter().map(|v| v / &c).collect())
    }

    /// Primitive part normalised to a positive leading coefficient.
    pub fn normalized(&self) -> IntPoly {
        let p = self.primitive_part();
        if !p.is_zero() && p.lc().is_negative() {
            p.neg()
        } else {
            p
        }
    }

    pub fn neg(&self) -> IntPoly {
        IntPoly(self.0.iter().map(|v| -v).collect())
    }

    pub fn scale(&self, k: &BigInt) -> IntPoly {
        IntPoly::new(self.0.iter().map(|v| v * k).collect())
    }

    pub fn add(&self, o: &IntPoly) -> IntPoly {
        let n = self.0.len().max(o.0.len());
        IntPoly::new((0..n).map(|k| self.coeff(k) + o.coeff(k)).collect())
    }

    pub fn sub(&self, o: &IntPoly) -> IntPoly {
        self.add(&o.neg())
    }

    pub fn mul(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() || o.is_zero() {
            return IntPoly::zero();
        }
        let mut out = vec![BigInt::zero(); self.0.len() + o.0.len() - 1];
        for (i, a) in self.0.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.0.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        IntPoly::new(out)
    }

    /// Coefficients reversed: `X^deg · P(1/X)`.
    pub fn reversed(&self) -> IntPoly {
        IntPoly::new(self.0.iter().rev().cloned().collect())
    }

    /// Pseudo-remainder `lc(b)^(deg a − deg b + 1) · a mod b`.
    pub fn prem(&self, b: &IntPoly) -> IntPoly {
        let db = b.deg();
        let Some(da) = self.degree() else {
            return IntPoly::zero();
        };
        if da < db {
            return self.clone();
        }
        let lb = b.lc();
        let mut r = self.0.clone();
        let mut e = da - db + 1;
        while r.len() > db {
            let dr = r.len() - 1;
            let lr = r[dr].clone();
            for v in r.iter_mut() {
                *v *= lb;
            }
            for (k, bc) in b.0.iter().enumerate() {
                r[k + dr - db] -= &lr * bc;
            }
            while r.last().is_some_and(Zero::is_zero) {
                r.pop();
            }
            e -= 1;
        }
        IntPoly::new(r).scale(&num_traits::pow(lb.clone(), e))
    }

    /// Exact quotient when `b` divides `self` over ℤ.
    pub fn div_exact(&self, b: &IntPoly) -> Option<IntPoly> {
        let db = b.degree()?;
        let Some(da) = self.degree() else {
            return Some(IntPoly::zero());
        };
        if da < db {
            return None;
        }
        let mut r = self.0.clone();
        let mut q = vec![BigInt::zero(); da - db + 1];
        for k in (0..=da - db).rev() {
            let c = &r[k + db];
            let (qk, rem) = c.div_rem(b.lc());
            if !rem.is_zero() {
                return None;
            }
            for (j, bc) in b.0.iter().enumerate() {
                r[k + j] -= &qk * bc;
            }
            q[k] = qk;
        }
        if r.iter().all(Zero::is_zero) {
            Some(IntPoly::new(q))
        } else {
            None
        }
    }

    /// Greatest common divisor over ℤ[X], primitive with positive leading coefficient.
    pub fn gcd(&self, o: &IntPoly) -> IntPoly {
        if self.is_zero() {
            return o.normalized();
        }
        if o.is_zero() {
            return self.normalized();
        }
        let cg = self.content().gcd(&o.content());
        let (mut a, mut b) = (self.primitive_part(), o.primitive_part());
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
        }
        while !b.is_zero() {
            let r = a.prem(&b);
            a = b;
            b = r.primitive_part();
        }
        a.normalized().scale(&cg)
    }

    /// `P / gcd(P, P')`, normalised.
    pub fn squarefree_part(&self) -> IntPoly {
        let g = self.gcd(&self.derivative());
        if g.degree() == Some(0) {
            return self.normalized();
        }
        self.normalized().div_exact(&g.normalized()).expect("gcd divides").normalized()
    }

    /// Resultant via the subresultant pseudo-remainder sequence.
    pub fn resultant(&self, o: &IntPoly) -> BigInt {
        if self.is_zero() || o.is_zero() {
            return BigInt::zero();
        }
        let (mut a, mut b) = (self.clone(), o.clone());
        let mut s = BigInt::one();
        if a.deg() < b.deg() {
            std::mem::swap(&mut a, &mut b);
            if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
                s = -s;
            }
        }
        let ca = a.content();
        let cb = b.content();
        let t = num_traits::pow(ca.clone(), b.deg()) * num_traits::pow(cb.clone(), a.deg());
        a = IntPoly(a.0.iter().map(|v| v / &ca).collect());
        b = IntPoly(b.0.iter().map(|v| v / &cb).collect());
        if b.deg() == 0 {
            return s * t * num_traits::pow(b.lc().clone(), a.deg());
        }
        let mut g = BigInt::one();
        let mut h = BigInt::one();
        loop {
            let delta = a.deg() - b.deg();
            if a.deg() % 2 == 1 && b.deg() % 2 == 1 {
                s = -s;
            }
            let r = a.prem(&b);
            if r.is_zero() {
                return BigInt::zero();
            }
            a = b;
            let div = &g * num_traits::pow(h.clone(), delta);
            b = IntPoly(r.0.iter().map(|v| v / &div).collect());
            g = a.lc().clone();
            h = if delta == 0 {
                h
            } else {
                num_traits::pow(g.clone(), delta) / num_traits::pow(h.clone(), delta - 1)
            };
            if b.deg() == 0 {
                let da = a.deg();
                let num = num_traits::pow(b.lc().clone(), da);
                let hh = if da == 0 { BigInt::one() } else { num_traits::pow(h, da - 1) };
                return s * t * num / hh;
            }
        }
    }

    /// Cauchy bound: every complex root has modulus strictly below it.
    pub fn cauchy_bound(&self) -> BigRational {
        let lc = self.lc().abs();
        let m = self.0[..self.0.len() - 1]
            .iter()
            .map(|c| c.abs())
            .max()
            .unwrap_or_default();
        BigRational::one() + BigRational::new(m, lc)
    }
}

/// Sturm sequence of a squarefree polynomial with positive rescaling at each step.
#[derive(Clone, Debug)]
pub struct Sturm {
    seq: Vec<IntPoly>,
}

impl Sturm {
    pub fn new(p: &IntPoly) -> Self {
        let mut seq = vec![p.clone()];
        let d = p.derivative();
        if !d.is_zero() {
            seq.push(d);
        }
        while seq.len() >= 2 {
            let a = &seq[seq.len() - 2];
            let b = &seq[seq.len() - 1];
            if b.degree() == Some(0) {
                break;
            }
            let delta = a.deg() - b.deg() + 1;
            let mut r = a.prem(b);
            if b.lc().is_negative() && delta % 2 == 1 {
                r = r.neg();
            }
            let r = r.neg().primitive_part();
            if r.is_zero() {
                break;
            }
            seq.push(r);
        }
        Sturm { seq }
    }

    fn variations(signs: impl Iterator<Item = i8>) -> usize {
        let mut last = 0i8;
        let mut v = 0;
        for s in signs.filter(|&s| s != 0) {
            if last != 0 && s != last {
                v += 1;
            }
            last = s;
        }
        v
    }

    pub fn variations_at(&self, r: &BigRational) -> usize {
        Sturm::variations(self.seq.iter().map(|p| p.sign_at(r)))
    }

    pub fn variations_at_infinity(&self, positive: bool) -> usize {
        Sturm::variations(self.seq.iter().map(|p| {
            let s = sign_of(p.lc());
            if positive || p.deg() % 2 == 0 {
                s
            } else {
                -s
            }
        }))
    }

    /// Number of distinct real roots in `(a, b)` for non-root endpoints `a < b`.
    pub fn count(&self, a: &BigRational, b: &BigRational) -> usize {
        self.variations_at(a) - self.variations_at(b)
    }

    /// Total number of distinct real roots.
    pub fn count_all(&self) -> usize {
        self.variations_at_infinity(false) - self.variations_at_infinity(true)
    }
}

/// A real root of a squarefree integer polynomial, isolated in `(lo, hi)` or known exactly.
#[derive(Clone, Debug)]
pub struct RealRoot {
    poly: IntPoly,
    lo: BigRational,
    hi: BigRational,
    exact: bool,
}

impl RealRoot {
    pub fn lo(&self) -> &BigRational {
        &self.lo
    }

    pub fn hi(&self) -> &BigRational {
        &self.hi
    }

    pub fn is_exact(&self) -> bool {
        self.exact
    }

    fn sign_lo(&self) -> i8 {
        self.poly.sign_at(&self.lo)
    }

    /// Halve the isolating interval once.
    pub fn bisect(&mut self) {
        if self.exact {
            return;
        }
        let mid = (&self.lo + &self.hi) / BigRational::from_integer(2.into());
        self.cut(mid);
    }

    fn cut(&mut self, at: BigRational) {
        let s = self.poly.sign_at(&at);
        if s == 0 {
            self.lo = at.clone();
            self.hi = at;
            self.exact = true;
        } else if s == self.sign_lo() {
            self.lo = at;
        } else {
            self.hi = at;
        }
    }

    pub fn refine_to(&mut self, width: &BigRational) {
        while !self.exact && &(&self.hi - &self.lo) > width {
            self.bisect();
        }
    }

    /// Compares the root with a rational exactly.
    pub fn cmp_rational(&mut self, r: &BigRational) -> Ordering {
        if self.exact {
            return self.lo.cmp(r);
        }
        if r <= &self.lo {
            return Ordering::Greater;
        }
        if r >= &self.hi {
            return Ordering::Less;
        }
        let s = self.poly.sign_at(r);
        if s == 0 {
            self.lo = r.clone();
            self.hi = r.clone();
            self.exact = true;
            return Ordering::Equal;
        }
        if s == self.sign_lo() {
            self.lo = r.clone();
            Ordering::Greater
        } else {
            self.hi = r.clone();
            Ordering::Less
        }
    }

    /// `⌊y·ρ⌋` exactly, for `y > 0`.
    pub fn floor_scaled(&mut self, y: &BigInt) -> BigInt {
        let yr = BigRational::from_integer(y.clone());
        self.refine_to(&BigRational::new(BigInt::one(), y.clone()));
        loop {
            let flo = (&self.lo * &yr).floor().to_integer();
            if self.exact {
                return flo;
            }
            // ρ < hi strictly, so ⌊yρ⌋ ≤ ⌈y·hi⌉ − 1.
            let k: BigInt = (&self.hi * &yr).ceil().to_integer() - 1;
            if k <= flo {
                return flo;
            }
            let q = BigRational::new(k.clone(), y.clone());
            if self.cmp_rational(&q) != Ordering::Less {
                return k;
            }
        }
    }
}

/// Isolates the distinct real roots of `p` (any nonzero polynomial) in increasing order.
pub fn isolate_real_roots(p: &IntPoly) -> Vec<RealRoot> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    let sq = p.squarefree_part();
    let sturm = Sturm::new(&sq);
    let b = sq.cauchy_bound();
    let mut out = Vec::new();
    let mut stack = vec![(-b.clone(), b)];
    while let Some((lo, hi)) = stack.pop() {
        let c = sturm.count(&lo, &hi);
        if c == 0 {
            continue;
        }
        if c == 1 {
            out.push(RealRoot {
                poly: sq.clone(),
                lo,
                hi,
                exact: false,
            });
            continue;
        }
        let mid = split_point(&sq, &lo, &hi);
        stack.push((lo, mid.clone()));
        stack.push((mid, hi));
    }
    out.sort_by(|a, b| a.lo.cmp(&b.lo));
    out
}

// A rational strictly inside (lo, hi) that is not a root of p.
fn split_point(p: &IntPoly, lo: &BigRational, hi: &BigRational) -> BigRational {
    let w = hi - lo;
    for k in 1..=(2 * p.deg() + 2) {
        let t = lo + &w * BigRational::new(BigInt::from(k), BigInt::from(2 * p.deg() + 3));
        let t = if k == 1 { lo + &w / BigRational::from_integer(2.into()) } else { t };
        if p.sign_at(&t) != 0 {
            return t;
        }
    }
    unreachable!("more non-roots than degree among candidates")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sylvester_det(a: &IntPoly, b: &IntPoly) -> BigInt {
        // Bareiss fraction-free determinant of the Sylvester matrix.
        let (m, n) = (a.deg(), b.deg());
        let size = m + n;
        let mut mat = vec![vec![BigInt::zero(); size]; size];
        for i in 0..n {
            for (k, c) in a.coeffs().iter().rev().enumerate() {
                mat[i][i + k] = c.clone();
            }
        }
        for i in 0..m {
            for (k, c) in b.coeffs().iter().rev().enumerate() {
                mat[n + i][i + k] = c.clone();
            }
        }
        let mut sign = BigInt::one();
        let mut prev = BigInt::one();
        for k in 0..size {
            if mat[k][k].is_zero() {
                let Some(sw) = (k + 1..size).find(|&r| !mat[r][k].is_zero()) else {
                    return BigInt::zero();
                };
                mat.swap(k, sw);
                sign = -sign;
            }
            for i in k + 1..size {
                for j in k + 1..size {
                    let v = &mat[i][j] * &mat[k][k] - &mat[i][k] * &mat[k][j];
                    mat[i][j] = v / &prev;
                }
            }
            prev = mat[k][k].clone();
        }
        sign * prev
    }

    #[test]
    fn resultant_matches_sylvester() {
        let cases = [
            (vec![-2, 0, 0, 1], vec![0, 0, 3]),
            (vec![1, 2, 3, 4, 5], vec![-7, 0, 2]),
            (vec![3, -1, 0, 0, 2, 1], vec![1, 1, 1, 1]),
            (vec![0, 0, 1], vec![0, 1]),
            (vec![6, 5, 1], vec![2, 3, 1]),
        ];
        for (a, b) in cases {
            let (a, b) = (IntPoly::from_i64(&a), IntPoly::from_i64(&b));
            assert_eq!(a.resultant(&b), sylvester_det(&a, &b), "{a:?} {b:?}");
        }
    }

    #[test]
    fn resultant_of_constant() {
        let a = IntPoly::from_i64(&[1, 0, 1]);
        assert_eq!(a.resultant(&IntPoly::from_i64(&[3])), BigInt::from(9));
        assert_eq!(IntPoly::from_i64(&[-3]).resultant(&a), BigInt::from(9));
    }

    #[test]
    fn gcd_and_division() {
        let a = IntPoly::from_i64(&[-1, 0, 1]);
        let b = IntPoly::from_i64(&[1, 2, 1]);
        assert_eq!(a.gcd(&b), IntPoly::from_i64(&[1, 1]));
        let q = a.mul(&b).div_exact(&b).unwrap();
        assert_eq!(q, a);
        assert!(a.div_exact(&IntPoly::from_i64(&[2, 1])).is_none());
        let sq = b.mul(&a).squarefree_part();
        assert_eq!(sq, IntPoly::from_i64(&[-1, 0, 1]));
    }

    #[test]
    fn sturm_counts_and_isolation() {
        // x^3 - 4x + 1 has three real roots.
        let p = IntPoly::from_i64(&[1, -4, 0, 1]);
        assert_eq!(Sturm::new(&p).count_all(), 3);
        let roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 3);
        // x^3 - 2 has one.
        let q = IntPoly::from_i64(&[-2, 0, 0, 1]);
        let mut r = isolate_real_roots(&q).remove(0);
        r.refine_to(&BigRational::new(1.into(), 1_000_000.into()));
        assert!(r.lo() > &BigRational::new(12599.into(), 10000.into()));
        assert!(r.hi() < &BigRational::new(12600.into(), 10000.into()));
        assert_eq!(r.floor_scaled(&BigInt::from(100)), BigInt::from(125));
    }

    #[test]
    fn exact_rational_roots_found() {
        // (2x - 1)(x + 3) = 2x^2 + 5x - 3
        let p = IntPoly::from_i64(&[-3, 5, 2]);
        let mut roots = isolate_real_roots(&p);
        assert_eq!(roots.len(), 2);
        assert_eq!(roots[1].floor_scaled(&BigInt::from(2)), BigInt::from(1));
        assert_eq!(roots[0].floor_scaled(&BigInt::from(1)), BigInt::from(-3));
        assert_eq!(roots[1].floor_scaled(&BigInt::from(3)), BigInt::from(1));
    }
}
