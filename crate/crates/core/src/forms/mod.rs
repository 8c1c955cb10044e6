//! Integral binary forms: evaluation, discriminant, heights, the GL₂(ℤ) action and the
//! prime covering family.

mod irreducible;
mod parse;

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{Interval, Tri};
use crate::poly::IntPoly;
use crate::primes::is_prime;
use crate::roots::{self, MahlerMeasure, RootSystem};
use crate::Config;

pub use irreducible::{is_irreducible, modular_patterns, Irreducibility, IrreducibilityReport};
pub use parse::parse_form;

/// `F(x, y) = a₀xⁿ + a₁xⁿ⁻¹y + … + aₙyⁿ` with integer coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub struct BinaryForm {
    coeffs: Vec<BigInt>,
}

impl TryFrom<String> for BinaryForm {
    type Error = Error;

    fn try_from(s: String) -> Result<Self> {
        parse_form(&s)
    }
}

impl From<BinaryForm> for String {
    fn from(f: BinaryForm) -> Self {
        f.to_string()
    }
}

impl BinaryForm {
    /// Requires at least two coefficients, not all zero.
    pub fn new(coeffs: Vec<BigInt>) -> Result<Self> {
        if coeffs.len() < 2 {
            return Err(Error::DegreeTooSmall {
                degree: coeffs.len().saturating_sub(1),
                required: 1,
            });
        }
        if coeffs.iter().all(Zero::is_zero) {
            return Err(Error::ZeroForm);
        }
        Ok(BinaryForm { coeffs })
    }

    pub fn from_i64(c: &[i64]) -> Result<Self> {
        BinaryForm::new(c.iter().map(|&v| BigInt::from(v)).collect())
    }

    pub fn degree(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn a0(&self) -> &BigInt {
        &self.coeffs[0]
    }

    pub fn an(&self) -> &BigInt {
        &self.coeffs[self.degree()]
    }

    pub fn content(&self) -> BigInt {
        self.coeffs.iter().fold(BigInt::zero(), |g, c| g.gcd(c))
    }

    pub fn is_primitive(&self) -> bool {
        self.content().is_one()
    }

    /// `F / content`. Explicit: nothing in the library divides out content silently.
    pub fn primitive_part(&self) -> BinaryForm {
        let c = self.content();
        BinaryForm {
            coeffs: self.coeffs.iter().map(|v| v / &c).collect(),
        }
    }

    /// Requires the given minimum degree.
    pub fn require_degree(&self, required: usize) -> Result<()> {
        if self.degree() < required {
            return Err(Error::DegreeTooSmall {
                degree: self.degree(),
                required,
            });
        }
        Ok(())
    }

    pub fn require_a0(&self) -> Result<()> {
        if self.a0().is_zero() {
            return Err(Error::ZeroLeadingCoefficient);
        }
        Ok(())
    }

    /// Exact value `F(x, y)`.
    pub fn evaluate(&self, x: &BigInt, y: &BigInt) -> BigInt {
        let mut acc = BigInt::zero();
        let mut ypow = BigInt::one();
        let mut terms = Vec::with_capacity(self.coeffs.len());
        for _ in 0..self.coeffs.len() {
            terms.push(ypow.clone());
            ypow *= y;
        }
        for (i, a) in self.coeffs.iter().enumerate() {
            acc = acc * x + a * &terms[i];
        }
        acc
    }

    /// `f(X) = F(X, 1)`.
    pub fn dehomogenize(&self) -> IntPoly {
        IntPoly::new(self.coeffs.iter().rev().cloned().collect())
    }

    /// `∂F/∂x (X, 1)`, which equals `f′(X)`.
    pub fn derivative_poly(&self) -> IntPoly {
        self.dehomogenize().derivative()
    }

    /// Naive height `max |a_i|`.
    pub fn naive_height(&self) -> BigInt {
        self.coeffs.iter().map(|c| c.abs()).max().unwrap_or_default()
    }

    /// Exact discriminant with `D(F) = ∏_{i<j}(α_iβ_j − α_jβ_i)²`.
    pub fn discriminant(&self) -> Result<BigInt> {
        self.require_degree(2)?;
        if self.a0().is_zero() {
            // det = 1 leaves D unchanged; pick k with F(1, k) ≠ 0.
            let shifted = (0i64..)
                .map(|k| self.apply(&IntMatrix2::from_i64(1, 0, k, 1)))
                .find(|g| !g.a0().is_zero())
                .expect("a nonzero form has finitely many rational roots");
            return shifted.discriminant();
        }
        let n = self.degree();
        let f = self.dehomogenize();
        let r = f.resultant(&f.derivative());
        let d = r / self.a0();
        Ok(if (n * (n - 1) / 2) % 2 == 1 { -d } else { d })
    }

    /// `F_A(x, y) = F(ax + by, cx + dy)`.
    pub fn apply(&self, m: &IntMatrix2) -> BinaryForm {
        let n = self.degree();
        // Work in t = y/x: (a + b t)^(n−i) (c + d t)^i, index = power of y.
        let lin1 = IntPoly::new(vec![m.a.clone(), m.b.clone()]);
        let lin2 = IntPoly::new(vec![m.c.clone(), m.d.clone()]);
        let pow = |p: &IntPoly, e: usize| -> IntPoly {
            (0..e).fold(IntPoly::constant(BigInt::one()), |acc, _| acc.mul(p))
        };
        let mut out = vec![BigInt::zero(); n + 1];
        for (i, ai) in self.coeffs.iter().enumerate() {
            if ai.is_zero() {
                continue;
            }
            let term = pow(&lin1, n - i).mul(&pow(&lin2, i));
            for (j, c) in term.coeffs().iter().enumerate() {
                out[j] += ai * c;
            }
        }
        BinaryForm { coeffs: out }
    }

    /// Smallest `k ≥ 1` such that `y → kx + y` (matrix `[[1,0],[k,1]]`) gives a nonzero
    /// leading coefficient, together with the shifted form. `None` when `a₀ ≠ 0` already.
    pub fn leading_shift(&self) -> Option<(IntMatrix2, BinaryForm)> {
        if !self.a0().is_zero() {
            return None;
        }
        // The new leading coefficient is F(1, k).
        (1i64..)
            .map(|k| IntMatrix2::from_i64(1, 0, k, 1))
            .map(|m| {
                let g = self.apply(&m);
                (m, g)
            })
            .find(|(_, g)| !g.a0().is_zero())
    }

    pub fn mahler_measure(&self, cfg: &Config) -> Result<MahlerMeasure> {
        roots::mahler_measure(self, cfg)
    }

    pub fn roots(&self, cfg: &Config) -> Result<RootSystem> {
        roots::solve_roots(self, cfg)
    }

    /// Degree, discriminant, Mahler enclosure, height, irreducibility and q in one pass.
    pub fn invariants(&self, cfg: &Config) -> Result<FormInvariants> {
        let discriminant = self.discriminant()?;
        let naive_height = self.naive_height();
        let irreducibility = is_irreducible(self, cfg)?;
        if discriminant.is_zero() {
            return Err(Error::RepeatedRoot);
        }
        let rs = self.roots(cfg)?;
        let mahler = roots::mahler_from_roots(self, &rs, cfg)?;
        Ok(FormInvariants {
            degree: self.degree(),
            discriminant,
            mahler,
            naive_height,
            irreducibility,
            q: rs.q(),
        })
    }
}

impl fmt::Display for BinaryForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = self.degree();
        let mut first = true;
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let (xp, yp) = (n - i, i);
            let mut mono = Vec::new();
            match xp {
                0 => {}
                1 => mono.push("x".to_string()),
                e => mono.push(format!("x^{e}")),
            }
            match yp {
                0 => {}
                1 => mono.push("y".to_string()),
                e => mono.push(format!("y^{e}")),
            }
            let mag = a.abs();
            let body = if mono.is_empty() {
                mag.to_string()
            } else if mag.is_one() {
                mono.join("*")
            } else {
                format!("{mag}*{}", mono.join("*"))
            };
            if first {
                if a.is_negative() {
                    write!(f, "-{body}")?;
                } else {
                    write!(f, "{body}")?;
                }
                first = false;
            } else if a.is_negative() {
                write!(f, " - {body}")?;
            } else {
                write!(f, " + {body}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for BinaryForm {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse_form(s)
    }
}

/// Integer 2×2 matrix `[[a, b], [c, d]]` acting by `(x, y) ↦ (ax + by, cx + dy)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IntMatrix2 {
    #[serde(with = "crate::numeric::int_string")]
    pub a: BigInt,
    #[serde(with = "crate::numeric::int_string")]
    pub b: BigInt,
    #[serde(with = "crate::numeric::int_string")]
    pub c: BigInt,
    #[serde(with = "crate::numeric::int_string")]
    pub d: BigInt,
}

impl IntMatrix2 {
    pub fn new(a: BigInt, b: BigInt, c: BigInt, d: BigInt) -> Self {
        IntMatrix2 { a, b, c, d }
    }

    pub fn from_i64(a: i64, b: i64, c: i64, d: i64) -> Self {
        IntMatrix2::new(a.into(), b.into(), c.into(), d.into())
    }

    pub fn identity() -> Self {
        IntMatrix2::from_i64(1, 0, 0, 1)
    }

    pub fn det(&self) -> BigInt {
        &self.a * &self.d - &self.b * &self.c
    }

    pub fn is_unimodular(&self) -> bool {
        self.det().abs().is_one()
    }

    pub fn apply(&self, x: &BigInt, y: &BigInt) -> (BigInt, BigInt) {
        (&self.a * x + &self.b * y, &self.c * x + &self.d * y)
    }

    pub fn mul(&self, o: &IntMatrix2) -> IntMatrix2 {
        IntMatrix2::new(
            &self.a * &o.a + &self.b * &o.c,
            &self.a * &o.b + &self.b * &o.d,
            &self.c * &o.a + &self.d * &o.c,
            &self.c * &o.b + &self.d * &o.d,
        )
    }

    /// Inverse for unimodular matrices.
    pub fn inverse_unimodular(&self) -> Option<IntMatrix2> {
        let det = self.det();
        if !det.abs().is_one() {
            return None;
        }
        Some(IntMatrix2::new(
            &self.d * &det,
            -&self.b * &det,
            -&self.c * &det,
            &self.a * &det,
        ))
    }

    /// Preimage `A⁻¹(x, y)` when it is integral.
    pub fn preimage(&self, x: &BigInt, y: &BigInt) -> Option<(BigInt, BigInt)> {
        let det = self.det();
        if det.is_zero() {
            return None;
        }
        let u = &self.d * x - &self.b * y;
        let v = -&self.c * x + &self.a * y;
        if u.is_multiple_of(&det) && v.is_multiple_of(&det) {
            Some((u / &det, v / &det))
        } else {
            None
        }
    }
}

impl fmt::Display for IntMatrix2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// `A₀ = [[p,0],[0,1]]` and `A_j = [[0,−1],[p,j]]` for `j = 1…p`.
pub fn covering_matrices(p: &BigInt) -> Result<Vec<IntMatrix2>> {
    if !is_prime(p) {
        return Err(Error::NotPrime(p.clone()));
    }
    let mut out = vec![IntMatrix2::new(p.clone(), BigInt::zero(), BigInt::zero(), BigInt::one())];
    let mut j = BigInt::one();
    while &j <= p {
        out.push(IntMatrix2::new(BigInt::zero(), -BigInt::one(), p.clone(), j.clone()));
        j += 1;
    }
    Ok(out)
}

/// Index `j` of a covering matrix whose image contains `(x, y)`.
pub fn covering_index(p: &BigInt, x: &BigInt, y: &BigInt) -> usize {
    if x.is_multiple_of(p) {
        return 0;
    }
    // A_j(u, v) = (−v, pu + jv): need y + jx ≡ 0 (mod p).
    let xi = x.mod_floor(p);
    let inv = mod_inverse(&xi, p).expect("p prime and p ∤ x");
    let j = (-y * inv).mod_floor(p);
    if j.is_zero() {
        usize::try_from(p).expect("desk-scale prime")
    } else {
        usize::try_from(&j).expect("desk-scale prime")
    }
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Summary invariants of a form.
#[derive(Clone, Debug)]
pub struct FormInvariants {
    pub degree: usize,
    pub discriminant: BigInt,
    pub mahler: MahlerMeasure,
    pub naive_height: BigInt,
    pub irreducibility: IrreducibilityReport,
    pub q: usize,
}

impl FormInvariants {
    /// Floor `(|D|/nⁿ)^{1/(2n−2)}` on the Mahler measure.
    pub fn mahler_floor(&self, prec: usize) -> Interval {
        mahler_floor(self.degree, &self.discriminant, prec)
    }

    /// Certified `M ≥ (|D|/nⁿ)^{1/(2n−2)}` against the enclosure's upper endpoint.
    pub fn mahler_floor_holds(&self, prec: usize) -> Tri {
        self.mahler.enclosure.ge(&self.mahler_floor(prec))
    }

    /// `binom(n,⌊n/2⌋)⁻¹·H ≤ M ≤ √(n+1)·H`, certified against the enclosure.
    pub fn landau_sandwich(&self, prec: usize) -> Tri {
        let (lo, hi) = landau_bounds(self.degree, &self.naive_height, prec);
        self.mahler.enclosure.ge(&lo).and(self.mahler.enclosure.le(&hi))
    }

    /// `n ≤ (3 + 2 log|D|)/log 3`.
    pub fn degree_disc_check(&self, prec: usize) -> Tri {
        crate::bounds::degree_disc_check(self.degree, &self.discriminant, prec)
    }
}

/// `(|D|/nⁿ)^{1/(2n−2)}`.
pub fn mahler_floor(n: usize, d: &BigInt, prec: usize) -> Interval {
    let dn = Interval::from_int(&d.abs(), prec).div(&Interval::from_i64(n as i64, prec).powi(n as i64));
    dn.pow(&Interval::one(prec).div_i64(2 * n as i64 - 2))
}

/// `(binom(n,⌊n/2⌋)⁻¹·H, √(n+1)·H)`.
pub fn landau_bounds(n: usize, h: &BigInt, prec: usize) -> (Interval, Interval) {
    let binom = num_integer::binomial(BigInt::from(n), BigInt::from(n / 2));
    let hh = Interval::from_int(h, prec);
    (
        hh.div(&Interval::from_int(&binom, prec)),
        hh.mul(&Interval::from_i64(n as i64 + 1, prec).sqrt()),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> BinaryForm {
        s.parse().unwrap()
    }

    #[test]
    fn evaluate_examples() {
        let g = f("x^3 - 2*y^3");
        let e = |x: i64, y: i64| g.evaluate(&x.into(), &y.into());
        assert_eq!(e(1, 0), 1.into());
        assert_eq!(e(1, 1), (-1).into());
        assert_eq!(e(5, 4), (-3).into());
    }

    #[test]
    fn discriminant_examples() {
        assert_eq!(f("x^3 - 2*y^3").discriminant().unwrap(), (-108).into());
        assert_eq!(f("x^3 + y^3").discriminant().unwrap(), (-27).into());
        assert_eq!(f("1,0,-1").discriminant().unwrap(), 4.into());
        assert!(matches!(
            f("1,2").discriminant(),
            Err(Error::DegreeTooSmall { degree: 1, required: 2 })
        ));
        // a0 = 0: x^2 y - y^3 = y(x - y)(x + y) has roots 0, ±1 in y/x.
        assert_eq!(f("0,1,0,-1").discriminant().unwrap(), f("1,0,-1,0").discriminant().unwrap());
    }

    #[test]
    fn gl2_examples() {
        let g = f("x^3 - 2*y^3");
        let s = g.apply(&IntMatrix2::from_i64(1, 1, 0, 1));
        assert_eq!(s, f("x^3 + 3*x^2*y + 3*x*y^2 - y^3"));
        assert_eq!(s.discriminant().unwrap(), (-108).into());
        assert_eq!(g.apply(&IntMatrix2::identity()), g);
        let t = g.apply(&IntMatrix2::from_i64(2, 0, 0, 1));
        assert_eq!(t, f("8*x^3 - 2*y^3"));
        assert_eq!(t.discriminant().unwrap(), (-6912).into());
    }

    #[test]
    fn heights() {
        assert_eq!(f("x^3-2*y^3").naive_height(), 2.into());
        assert_eq!(f("3*x^3+y^3").naive_height(), 3.into());
        assert_eq!(f("x^4+5*x^2*y^2-7*y^4").naive_height(), 7.into());
    }

    #[test]
    fn covering_family() {
        let two = BigInt::from(2);
        let ms = covering_matrices(&two).unwrap();
        assert_eq!(
            ms,
            vec![
                IntMatrix2::from_i64(2, 0, 0, 1),
                IntMatrix2::from_i64(0, -1, 2, 1),
                IntMatrix2::from_i64(0, -1, 2, 2),
            ]
        );
        assert_eq!(covering_matrices(&3.into()).unwrap().len(), 4);
        assert!(matches!(covering_matrices(&4.into()), Err(Error::NotPrime(_))));
        for x in -10i64..=10 {
            for y in -10i64..=10 {
                let (x, y) = (BigInt::from(x), BigInt::from(y));
                let j = covering_index(&two, &x, &y);
                assert!(ms[j].preimage(&x, &y).is_some());
            }
        }
    }

    #[test]
    fn leading_shift_restores_a0() {
        let g = f("0,1,0,-1");
        let (m, h) = g.leading_shift().unwrap();
        assert!(!h.a0().is_zero());
        assert!(m.is_unimodular());
        assert_eq!(h.discriminant().unwrap(), g.discriminant().unwrap());
    }

    #[test]
    fn display_round_trips() {
        for s in ["x^3 - 2*y^3", "8*x^3 - 2*y^3", "-x^4 + x*y^3 + 7*y^4", "x^2*y - y^3"] {
            assert_eq!(f(s).to_string(), s);
            assert_eq!(f(&f(s).to_string()), f(s));
        }
    }
}
