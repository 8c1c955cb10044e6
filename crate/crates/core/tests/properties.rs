use std::sync::OnceLock;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use proptest::prelude::*;
use thue_core::bounds::prime_bound;
use thue_core::logcurve::{gram_area, heron_area, phi_norm_lower, LogCurve};
use thue_core::primes::is_prime;
use thue_core::solver::Mode;
use thue_core::forms::Irreducibility;
use thue_core::{BinaryForm, Config, IntMatrix2, Interval};

const FIXTURES: [&str; 5] = [
    "x^3 - 4*x*y^2 + y^3",
    "x^3 - 2*y^3",
    "x^4 - 4*x^2*y^2 + 2*y^4",
    "x^5 - 6*x^3*y^2 + 8*x*y^4 + 2*y^5",
    "x^6 + x^5*y - 5*x^4*y^2 - 4*x^3*y^3 + 6*x^2*y^4 + 3*x*y^5 - y^6",
];

fn curves() -> &'static [LogCurve] {
    static CURVES: OnceLock<Vec<LogCurve>> = OnceLock::new();
    CURVES.get_or_init(|| {
        let cfg = Config::default();
        FIXTURES
            .iter()
            .map(|s| LogCurve::new(&s.parse::<BinaryForm>().unwrap(), &cfg).unwrap())
            .collect()
    })
}

fn big(v: i64) -> BigInt {
    BigInt::from(v)
}

fn tiny(i: &Interval, scale: f64) -> bool {
    i.lo_f64().abs().max(i.hi_f64().abs()) <= 1e-25 * (1.0 + scale)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn discriminant_transforms_by_determinant(
        coeffs in (3usize..=6).prop_flat_map(|n| proptest::collection::vec(-1000i64..=1000, n + 1)),
        a in -5i64..=5, b in -5i64..=5, c in -5i64..=5, d in -5i64..=5,
    ) {
        prop_assume!(coeffs.iter().any(|&v| v != 0));
        let f = BinaryForm::from_i64(&coeffs).unwrap();
        let n = f.degree();
        let m = IntMatrix2::from_i64(a, b, c, d);
        prop_assume!(!m.det().is_zero());
        let g = f.apply(&m);
        let scale = num_traits::pow(m.det(), n * (n - 1));
        prop_assert_eq!(g.discriminant().unwrap(), scale * f.discriminant().unwrap());
    }

    #[test]
    fn heron_matches_gram(p in proptest::collection::vec(-50.0f64..50.0, 12)) {
        let prec = 128;
        let pts: Vec<Vec<Interval>> = p
            .chunks(4)
            .map(|c| c.iter().map(|&v| Interval::from_f64(v, prec)).collect())
            .collect();
        let side = |u: &[Interval], v: &[Interval]| {
            u.iter()
                .zip(v)
                .fold(Interval::zero(prec), |acc, (a, b)| acc.add(&a.sub(b).sqr()))
                .sqrt()
        };
        let h = heron_area(&side(&pts[0], &pts[1]), &side(&pts[1], &pts[2]), &side(&pts[0], &pts[2]));
        let g = gram_area(&pts[0], &pts[1], &pts[2]);
        let (h, g) = (h.mid_f64(), g.mid_f64());
        let longest = side(&pts[0], &pts[2]).mid_f64().max(1.0);
        prop_assert!((h - g).abs() <= 1e-9 * g.abs().max(longest * longest * 1e-6));
    }

    #[test]
    fn prime_bound_is_consistent(n in 3usize..=8, m in 1i64..=5000, eq in any::<bool>()) {
        let mode = if eq { Mode::Equation } else { Mode::Inequality };
        let pb = prime_bound(n, &big(m), mode, 128).unwrap();
        prop_assert!(is_prime(&pb.prime));
        prop_assert!(pb.prime >= pb.ceiling);
        let ceil = Interval::from_int(&pb.ceiling, 128);
        prop_assert!(!ceil.lt(&pb.cutoff).is_true());
        let below = Interval::from_int(&(&pb.ceiling - 1u32), 128);
        prop_assert!(pb.ceiling.is_one() || !below.ge(&pb.cutoff).is_true());
        let n_i = n as i64;
        let want = BigRational::from_integer(&pb.prime + 1u32)
            * (BigRational::from_integer(big(9 * n_i)) + BigRational::new(big(4), big(n_i - 1)));
        prop_assert_eq!(&pb.total, &want);
        let next = prime_bound(n, &big(m + 1), mode, 128).unwrap();
        prop_assert!(next.total >= pb.total);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn log_coordinates_sum_to_zero(k in 0usize..5, x in -400i64..=400, y in 1i64..=400) {
        let lc = &curves()[k];
        prop_assume!(x.gcd(&y) == 1);
        prop_assume!(!lc.form().evaluate(&big(x), &big(y)).is_zero());
        let p = lc.phi(&big(x), &big(y)).unwrap();
        prop_assert!(p.coordinate_sum.contains_zero() || tiny(&p.coordinate_sum, p.norm.hi_f64()));
    }

    #[test]
    fn decomposition_rebuilds_the_point(k in 0usize..5, x in -400i64..=400, y in 1i64..=400) {
        let lc = &curves()[k];
        prop_assume!(x.gcd(&y) == 1);
        prop_assume!(!lc.form().evaluate(&big(x), &big(y)).is_zero());
        let root = lc.roots().real_indices()[0];
        let d = lc.decomposition(&big(x), &big(y), root).unwrap();
        let norm = lc.phi(&big(x), &big(y)).unwrap().norm.hi_f64();
        prop_assert!(tiny(&d.residual, norm));
    }

    #[test]
    fn pairwise_identity_holds_at_rationals(k in 0usize..5, num in -10_000i64..=10_000, den in 1i64..=997) {
        let lc = &curves()[k];
        let t = BigRational::new(big(num), big(den));
        prop_assume!(!lc.form().evaluate(t.numer(), t.denom()).is_zero());
        for root in lc.roots().real_indices() {
            let (residual, lhs) = lc.pairwise_identity_residual(&t, root).unwrap();
            prop_assert!(tiny(&residual, lhs.hi_f64().abs()), "residual {:?}", residual.mid_f64());
        }
    }

    #[test]
    fn norm_floor_shrinks_as_m_grows(n in 3usize..=6, d in 1i64..=100_000_000, m in 1i64..=1000, step in 1i64..=1000) {
        let d = if n % 2 == 0 { -d } else { d };
        let lo = phi_norm_lower(n, &big(d), &big(m), Mode::Inequality, 128).unwrap();
        let hi = phi_norm_lower(n, &big(d), &big(m + step), Mode::Inequality, 128).unwrap();
        prop_assert!(!hi.gt(&lo).is_true());
        let e1 = phi_norm_lower(n, &big(d), &big(m), Mode::Equation, 128).unwrap();
        let e2 = phi_norm_lower(n, &big(d), &big(m + step), Mode::Equation, 128).unwrap();
        prop_assert!((e1.mid_f64() - e2.mid_f64()).abs() < 1e-15);
        prop_assert!(!lo.gt(&e1).is_true());
    }
}

#[test]
fn fixtures_are_irreducible_with_a_real_root() {
    let cfg = Config::default();
    for (lc, src) in curves().iter().zip(FIXTURES) {
        assert!(!lc.roots().real_indices().is_empty(), "{src}");
        let inv = lc.form().invariants(&cfg).unwrap();
        assert_eq!(inv.irreducibility.verdict, Irreducibility::Irreducible, "{src}");
        assert!(lc.discriminant().abs() > BigInt::one());
    }
}
