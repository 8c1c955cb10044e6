//! Irreducibility over ℚ.
//!
//! Order of tests: squarefreeness, factorization patterns modulo small primes of good
//! reduction, then (for `n ≤ cfg.irreducible_search_cap`) a certified search over
//! conjugation-closed root subsets. Any factor `g | f` with `g` primitive satisfies
//! `lc(f)·g/lc(g) = lc(f)·∏_{α ∈ S}(X − α)` for some subset `S`, so that product has
//! integer coefficients; enclosing it in boxes and testing the unique integer candidate by
//! exact division covers every factor.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::BinaryForm;
use crate::error::Result;
use crate::numeric::ComplexBox;
use crate::poly::IntPoly;
use crate::primes::small_primes;
use crate::roots::{self, RootSystem};
use crate::Config;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Irreducibility {
    Irreducible,
    Reducible,
    Unknown,
}

/// Degrees of the irreducible factors of `f mod p`, ascending.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModularPattern {
    pub prime: u64,
    pub degrees: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IrreducibilityReport {
    pub verdict: Irreducibility,
    pub method: String,
    /// A proper factor, when one was found.
    pub factor: Option<BinaryForm>,
    pub patterns: Vec<ModularPattern>,
}

const PATTERN_PRIMES: usize = 8;

/// Factorization patterns of `F(X, 1)` modulo the first `count` primes of good reduction.
pub fn modular_patterns(form: &BinaryForm, count: usize) -> Vec<ModularPattern> {
    let f = form.dehomogenize().primitive_part();
    let mut out = Vec::new();
    for p in small_primes(60) {
        if out.len() == count {
            break;
        }
        if let Some(fp) = Fp::reduce(&f, p) {
            out.push(ModularPattern {
                prime: p,
                degrees: fp.ddf_degrees(),
            });
        }
    }
    out
}

pub fn is_irreducible(form: &BinaryForm, cfg: &Config) -> Result<IrreducibilityReport> {
    form.require_a0()?;
    let f = form.dehomogenize().primitive_part();
    let n = form.degree();
    let report = |verdict, method: &str, factor: Option<&IntPoly>, patterns: Vec<ModularPattern>| IrreducibilityReport {
        verdict,
        method: method.to_string(),
        factor: factor.map(poly_to_form),
        patterns,
    };
    if n == 1 {
        return Ok(report(Irreducibility::Irreducible, "linear", None, vec![]));
    }
    let g = f.gcd(&f.derivative());
    if g.degree().unwrap_or(0) > 0 {
        return Ok(report(Irreducibility::Reducible, "repeated factor", Some(&g), vec![]));
    }
    let patterns = modular_patterns(form, PATTERN_PRIMES);
    let mut possible = vec![true; n + 1];
    for pat in &patterns {
        let sums = subset_sums(&pat.degrees, n);
        for d in 0..=n {
            possible[d] &= sums[d];
        }
    }
    let candidates: Vec<usize> = (1..=n / 2).filter(|&d| possible[d] && possible[n - d]).collect();
    if candidates.is_empty() {
        return Ok(report(Irreducibility::Irreducible, "modular degree sets", None, patterns));
    }
    if n > cfg.irreducible_search_cap {
        return Ok(report(Irreducibility::Unknown, "search disabled beyond degree cap", None, patterns));
    }
    let mut rs = roots::solve_poly(&f, cfg.root_tol, cfg)?;
    for _ in 0..4 {
        match subset_search(&f, &rs, &candidates) {
            Search::Found(g) => return Ok(report(Irreducibility::Reducible, "root subset search", Some(&g), patterns)),
            Search::None => return Ok(report(Irreducibility::Irreducible, "root subset search", None, patterns)),
            Search::Ambiguous => {
                let tol = rs.radius_f64(0).max(f64::MIN_POSITIVE) * 1e-30;
                rs = match rs.refined(tol, cfg) {
                    Ok(r) => r,
                    Err(_) => break,
                };
            }
        }
    }
    Ok(report(Irreducibility::Unknown, "root subset search inconclusive", None, patterns))
}

fn poly_to_form(g: &IntPoly) -> BinaryForm {
    BinaryForm::new(g.coeffs().iter().rev().cloned().collect()).expect("factor has degree ≥ 1")
}

enum Search {
    Found(IntPoly),
    None,
    Ambiguous,
}

fn subset_search(f: &IntPoly, rs: &RootSystem, degrees: &[usize]) -> Search {
    let n = rs.n();
    let pairing = rs.pairing();
    let p = rs.precision();
    let lc = ComplexBox::from_int(f.lc(), p);
    let mut ambiguous = false;
    for &d in degrees {
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize != d {
                continue;
            }
            if (0..n).any(|k| mask >> k & 1 == 1 && mask >> pairing[k] & 1 == 0) {
                continue;
            }
            // lc·∏(X − α), ascending coefficients.
            let mut prod = vec![lc.clone()];
            for k in (0..n).filter(|k| mask >> k & 1 == 1) {
                let a = rs.root(k);
                let mut next = vec![ComplexBox::from_int(&BigInt::zero(), p); prod.len() + 1];
                for (i, c) in prod.iter().enumerate() {
                    next[i + 1] = next[i + 1].add(c);
                    next[i] = next[i].sub(&c.mul(a));
                }
                prod = next;
            }
            let mut coeffs = Vec::with_capacity(prod.len());
            let mut excluded = false;
            for c in &prod {
                if !c.im.contains_zero() {
                    excluded = true;
                    break;
                }
                match c.re.integers_inside(2) {
                    Some(v) if v.is_empty() => {
                        excluded = true;
                        break;
                    }
                    Some(v) if v.len() == 1 => coeffs.push(v[0].clone()),
                    _ => {
                        ambiguous = true;
                        excluded = true;
                        break;
                    }
                }
            }
            if excluded {
                continue;
            }
            let g = IntPoly::new(coeffs).primitive_part();
            if g.degree() == Some(d) && f.div_exact(&g).is_some() {
                return Search::Found(g);
            }
        }
    }
    if ambiguous {
        Search::Ambiguous
    } else {
        Search::None
    }
}

/// `sums[k]` is true when some sub-multiset of `parts` sums to `k`.
fn subset_sums(parts: &[usize], n: usize) -> Vec<bool> {
    let mut s = vec![false; n + 1];
    s[0] = true;
    for &d in parts {
        for k in (d..=n).rev() {
            s[k] |= s[k - d];
        }
    }
    s
}

/// Polynomial over `F_p`, ascending coefficients, trimmed.
#[derive(Clone, Debug, PartialEq, Eq)]
struct Fp {
    c: Vec<u64>,
    p: u64,
}

impl Fp {
    fn new(mut c: Vec<u64>, p: u64) -> Fp {
        while c.last() == Some(&0) {
            c.pop();
        }
        Fp { c, p }
    }

    /// Reduction mod `p`, when `p ∤ lc(f)` and `f mod p` stays squarefree.
    fn reduce(f: &IntPoly, p: u64) -> Option<Fp> {
        let pb = BigInt::from(p);
        let c: Vec<u64> = f
            .coeffs()
            .iter()
            .map(|a| {
                let r = a % &pb;
                let r = if r.is_negative() { r + &pb } else { r };
                r.to_u64().expect("reduced")
            })
            .collect();
        let fp = Fp::new(c, p);
        if fp.deg() != f.degree() {
            return None;
        }
        let g = fp.gcd(&fp.derivative());
        (g.deg() == Some(0)).then(|| fp.monic())
    }

    fn deg(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    fn mulm(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }

    fn inv(&self, a: u64) -> u64 {
        let (mut r, mut b, mut e) = (1u64, a % self.p, self.p - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = self.mulm(r, b);
            }
            b = self.mulm(b, b);
            e >>= 1;
        }
        r
    }

    fn monic(&self) -> Fp {
        let Some(&l) = self.c.last() else { return self.clone() };
        let il = self.inv(l);
        Fp::new(self.c.iter().map(|&v| self.mulm(v, il)).collect(), self.p)
    }

    fn derivative(&self) -> Fp {
        let c = self.c.iter().enumerate().skip(1).map(|(i, &v)| self.mulm(v, i as u64 % self.p)).collect();
        Fp::new(c, self.p)
    }

    fn sub(&self, o: &Fp) -> Fp {
        let len = self.c.len().max(o.c.len());
        let c = (0..len)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = o.c.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Fp::new(c, self.p)
    }

    fn mul(&self, o: &Fp) -> Fp {
        if self.c.is_empty() || o.c.is_empty() {
            return Fp::new(vec![], self.p);
        }
        let mut c = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in o.c.iter().enumerate() {
                c[i + j] = (c[i + j] + self.mulm(a, b)) % self.p;
            }
        }
        Fp::new(c, self.p)
    }

    fn divrem(&self, m: &Fp) -> (Fp, Fp) {
        let dm = m.deg().expect("nonzero divisor");
        let il = self.inv(*m.c.last().expect("nonzero"));
        let mut r = self.c.clone();
        let mut q = vec![0u64; self.c.len().saturating_sub(dm).max(1)];
        while r.len() > dm {
            let top = *r.last().expect("nonempty");
            let shift = r.len() - 1 - dm;
            if top != 0 {
                let k = self.mulm(top, il);
                q[shift] = k;
                for (i, &mc) in m.c.iter().enumerate() {
                    let t = self.mulm(k, mc);
                    r[shift + i] = (r[shift + i] + self.p - t) % self.p;
                }
            }
            r.pop();
        }
        (Fp::new(q, self.p), Fp::new(r, self.p))
    }

    fn rem(&self, m: &Fp) -> Fp {
        self.divrem(m).1
    }

    fn gcd(&self, o: &Fp) -> Fp {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.c.is_empty() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    fn powmod(&self, mut e: u64, m: &Fp) -> Fp {
        let mut r = Fp::new(vec![1], self.p).rem(m);
        let mut b = self.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).rem(m);
            }
            b = b.mul(&b).rem(m);
            e >>= 1;
        }
        r
    }

    /// Distinct-degree factorization of a monic squarefree polynomial.
    fn ddf_degrees(&self) -> Vec<usize> {
        let x = Fp::new(vec![0, 1], self.p);
        let mut f = self.clone();
        let mut h = x.rem(&f);
        let mut out = Vec::new();
        let mut d = 1;
        while f.deg().unwrap_or(0) >= 2 * d {
            h = h.powmod(self.p, &f);
            let g = f.gcd(&h.sub(&x));
            let gd = g.deg().unwrap_or(0);
            if gd > 0 {
                out.extend(std::iter::repeat_n(d, gd / d));
                f = f.divrem(&g).0.monic();
                h = h.rem(&f);
            }
            d += 1;
        }
        if let Some(k) = f.deg().filter(|&k| k > 0) {
            out.push(k);
        }
        out.sort_unstable();
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn verdict(s: &str) -> Irreducibility {
        is_irreducible(&s.parse().unwrap(), &Config::default()).unwrap().verdict
    }

    #[test]
    fn examples() {
        assert_eq!(verdict("x^3 - 2*y^3"), Irreducibility::Irreducible);
        assert_eq!(verdict("x^3 - y^3"), Irreducibility::Reducible);
        assert_eq!(verdict("x^4 + y^4"), Irreducibility::Irreducible);
        assert_eq!(verdict("x^3 - 4*x*y^2 + y^3"), Irreducibility::Irreducible);
    }

    #[test]
    fn modular_patterns_cannot_decide_x4_plus_4() {
        // x^4 + 4 = (x^2 + 2x + 2)(x^2 − 2x + 2), splits into quadratics or less everywhere.
        let r = is_irreducible(&"x^4 + 4*y^4".parse().unwrap(), &Config::default()).unwrap();
        assert_eq!(r.verdict, Irreducibility::Reducible);
        let g = r.factor.unwrap();
        assert_eq!(g.degree(), 2);
        // x^4 − 10x^2 + 1 is irreducible yet reducible mod every prime.
        let r = is_irreducible(&"x^4 - 10*x^2*y^2 + y^4".parse().unwrap(), &Config::default()).unwrap();
        assert_eq!(r.verdict, Irreducibility::Irreducible);
        assert_eq!(r.method, "root subset search");
    }

    #[test]
    fn non_monic_factor() {
        // (2x^2 + 1)(3x^3 − x − 1)
        let r = is_irreducible(&"6,0,1,-2,-1,-1".parse().unwrap(), &Config::default()).unwrap();
        assert_eq!(r.verdict, Irreducibility::Reducible);
        let g = r.factor.unwrap();
        let expected: BinaryForm = "2*x^2 + y^2".parse().unwrap();
        assert!(g == expected || g.degree() == 3);
    }

    #[test]
    fn cap_zero_gives_unknown() {
        let cfg = Config {
            irreducible_search_cap: 0,
            ..Config::default()
        };
        let r = is_irreducible(&"x^4 - 10*x^2*y^2 + y^4".parse().unwrap(), &cfg).unwrap();
        assert_eq!(r.verdict, Irreducibility::Unknown);
        assert!(!r.patterns.is_empty());
    }

    #[test]
    fn ddf_matches_known_splitting() {
        // x^3 − 2 mod 5: 3 is the unique cube root of 2, leaving an irreducible quadratic.
        let f = Fp::reduce(&IntPoly::from_i64(&[-2, 0, 0, 1]), 5).unwrap();
        assert_eq!(f.ddf_degrees(), vec![1, 2]);
        // mod 7, 2 is not a cube, so x^3 − 2 is irreducible.
        let f = Fp::reduce(&IntPoly::from_i64(&[-2, 0, 0, 1]), 7).unwrap();
        assert_eq!(f.ddf_degrees(), vec![3]);
        assert!(Fp::reduce(&IntPoly::from_i64(&[-2, 0, 0, 1]), 3).is_none());
    }
}
