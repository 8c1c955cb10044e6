//! Near-root behaviour of the logarithmic curve, checked on continued-fraction convergents
//! of each real root, plus one triangle fixture built from actual equation solutions.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use thue_core::bounds::gap_threshold_unit;
use thue_core::logcurve::{
    convergents, origin_norm_applies, origin_separation_threshold, GapVerdict, LogCurve,
};
use thue_core::solver::{enumerate, EnumerateOptions, Mode};
use thue_core::{BinaryForm, Config, Interval, Tri};

const FORMS: [&str; 4] = [
    "x^3 - 4*x*y^2 + y^3",
    "x^3 - 2*y^3",
    "x^4 - 4*x^2*y^2 + 2*y^4",
    "x^5 - 6*x^3*y^2 + 8*x*y^4 + 2*y^5",
];

#[derive(Default, Debug)]
struct Tally {
    points: usize,
    near_root: usize,
    pair: usize,
    complex_pair: usize,
    origin_tested: usize,
    origin_held: usize,
    height_certified: usize,
}

fn tally(src: &str, cfg: &Config) -> Tally {
    let form: BinaryForm = src.parse().unwrap();
    let n = form.degree();
    let lc = LogCurve::new(&form, cfg).unwrap().refined(1e-60, cfg).unwrap();
    let prec = lc.roots().precision();
    let h = form.naive_height();
    let origin = lc.phi(&BigInt::from(1), &BigInt::zero()).unwrap().norm;
    let mut t = Tally::default();
    for k in lc.roots().real_indices() {
        for (x, y) in convergents(&lc.roots().root(k).re, 16).iter().skip(3) {
            let m = form.evaluate(x, y).abs();
            if m.is_zero() {
                continue;
            }
            // Scale C so that y sits at twice the distance threshold.
            let unit = gap_threshold_unit(n, &m, lc.discriminant(), lc.mahler()).unwrap();
            let c = Interval::from_int(y, prec).div(&unit).div_i64(2);
            t.points += 1;

            let nr = lc.near_root_check(x, y, k, &m, &c).unwrap();
            assert!(nr.threshold_met.is_true(), "{src}: {x}/{y}");
            t.near_root += nr.holds.is_true() as usize;

            let ps = lc.pair_selection(x, y, k, &c).unwrap();
            t.pair += ps.holds.is_true() as usize;
            t.complex_pair += ps.complex_holds.is_true() as usize;

            if origin_norm_applies(n, form.a0(), &m, lc.discriminant()) {
                let th = origin_separation_threshold(n, form.a0(), &m, &h, lc.mahler());
                if Interval::from_int(y, prec).ge(&th).is_true() {
                    t.origin_tested += 1;
                    t.origin_held += origin.lt(&lc.phi(x, y).unwrap().norm).is_true() as usize;
                }
            }
            t.height_certified += lc.height_check(x, y, &m).unwrap().certified.is_true() as usize;
        }
    }
    t
}

#[test]
fn convergents_satisfy_near_root_estimates() {
    let cfg = Config::default();
    for src in FORMS {
        let t = tally(src, &cfg);
        assert!(t.points >= 10, "{src}: {t:?}");
        assert_eq!(t.near_root, t.points, "{src}: {t:?}");
        assert_eq!(t.pair, t.points, "{src}: {t:?}");
        assert_eq!(t.complex_pair, t.points, "{src}: {t:?}");
        assert_eq!(t.height_certified, t.points, "{src}: {t:?}");
        assert_eq!(t.origin_held, t.origin_tested, "{src}: {t:?}");
    }
}

#[test]
fn simplest_cubic_triangle() {
    let cfg = Config::default();
    let form: BinaryForm = "x^3 - x^2*y - 2*x*y^2 + y^3".parse().unwrap();
    let one = BigInt::from(1);
    let sols = enumerate(&form, &one, 300, Mode::Equation, EnumerateOptions::default(), &cfg).unwrap();
    assert_eq!(sols.count(), 9);
    let lc = LogCurve::new(&form, &cfg).unwrap();
    let related: Vec<(BigInt, BigInt)> = sols
        .solutions
        .iter()
        .filter(|s| s.related_root == Some(1) && !s.y.is_zero())
        .map(|s| (s.x.clone(), s.y.clone()))
        .collect();
    let want: Vec<(BigInt, BigInt)> = [(0, 1), (1, 1), (1, 2), (4, 9)]
        .iter()
        .map(|&(x, y)| (BigInt::from(x), BigInt::from(y)))
        .collect();
    assert_eq!(related, want);

    let c = Interval::one(lc.roots().precision());
    let g = lc.gap_check(&related, 1, &one, &c).unwrap();
    assert!(g.degree_ok);
    assert_eq!(g.related, Tri::True);
    // y = 9 sits far below the distance threshold, so the verdict stays informational.
    assert_eq!(g.threshold_met, Tri::False);
    assert_eq!(g.verdict, GapVerdict::Vacuous);
    let rel = (g.heron.mid_f64() - g.gram.mid_f64()).abs() / g.gram.mid_f64().max(1e-300);
    assert!(rel < 1e-9 || g.degenerate);

    let pts: Vec<(f64, f64)> = g.points.iter().map(|p| (p.x.to_string().parse().unwrap(), p.y.to_string().parse().unwrap())).collect();
    let tri: Vec<(f64, f64)> = g.vertices.iter().map(|&k| pts[k]).collect();
    let want = oracle_sides(&tri);
    for (s, w) in g.sides.iter().zip(want) {
        assert!((s.mid_f64() - w).abs() < 1e-12, "{} vs {w}", s.mid_f64());
    }
    let frozen = [1.0251387048810247593, 5.4245241449240553405, 5.7077307479942927031];
    for (s, w) in g.sides.iter().zip(frozen) {
        assert!((s.mid_f64() - w).abs() < 1e-14);
    }
    assert!((g.heron.mid_f64() - 2.7303426195337476467).abs() < 1e-14);
    assert!((g.lhs.mid_f64() - 5.8291854299944585921).abs() < 1e-14);
}

/// Sorted triangle sides in f64 from the closed-form roots `−2cos(2πk/7)` and `D = 49`.
fn oracle_sides(pts: &[(f64, f64)]) -> [f64; 3] {
    let roots: Vec<f64> = (1..=3)
        .map(|k| -2.0 * (2.0 * std::f64::consts::PI * k as f64 / 7.0).cos())
        .collect();
    let phi = |x: f64, y: f64| -> Vec<f64> {
        let f = x.powi(3) - x * x * y - 2.0 * x * y * y + y.powi(3);
        roots
            .iter()
            .map(|&a| {
                let fp = 3.0 * a * a - 2.0 * a - 2.0;
                49f64.ln() / 3.0 + (x - a * y).abs().ln() - f.abs().ln() / 3.0 - fp.abs().ln()
            })
            .collect()
    };
    let v: Vec<Vec<f64>> = pts.iter().map(|&(x, y)| phi(x, y)).collect();
    let dist = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| (p - q).powi(2)).sum::<f64>().sqrt();
    let mut s = [dist(&v[0], &v[1]), dist(&v[1], &v[2]), dist(&v[0], &v[2])];
    s.sort_by(f64::total_cmp);
    s
}
