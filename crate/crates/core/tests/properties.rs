use std::sync::OnceLock;

use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use su2torsion::cli::{Check, Seed};
use su2torsion::cwmodel::CwPairModel;
use su2torsion::repspace::{continue_circle, Circle, Gauge, RepSystem, TraceOptions};
use su2torsion::su2::Su2;
use su2torsion::symm::{iota_images, PeriodicSeries};
use su2torsion::torsion::normalized_torsion;
use su2torsion::volform::tau_eval;

struct Shared {
    model: CwPairModel,
    sys: RepSystem,
    circle: Circle,
}

fn shared() -> &'static Shared {
    static S: OnceLock<Shared> = OnceLock::new();
    S.get_or_init(|| {
        let model = CwPairModel::figure_eight();
        let sys = model.rep_system().unwrap();
        let start = sys.solve_near(&Gauge::new(1.05, 1.05, 1.9)).unwrap();
        let circle = continue_circle(&sys, &start, TraceOptions::new(0.05)).unwrap();
        Shared { model, sys, circle }
    })
}

fn conjugate(images: &[Su2], g: &Su2) -> Vec<Su2> {
    images.iter().map(|x| *g * *x * g.inverse()).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn torsion_is_a_class_function(k in 0usize..1000, seed in any::<u64>()) {
        let s = shared();
        let p = &s.circle.points[k % s.circle.points.len()];
        let g = Su2::random(&mut ChaCha8Rng::seed_from_u64(seed));
        let a = normalized_torsion(&s.model, &p.images).unwrap();
        let b = normalized_torsion(&s.model, &conjugate(&p.images, &g)).unwrap();
        prop_assert!(a.poly.max_distance(&b.poly) < 1e-9);
    }

    #[test]
    fn solver_fingerprint_ignores_conjugation(k in 0usize..1000, seed in any::<u64>()) {
        let s = shared();
        let p = &s.circle.points[k % s.circle.points.len()];
        let g = Su2::random(&mut ChaCha8Rng::seed_from_u64(seed));
        let q = s.sys.solve_near_images(&conjugate(&p.images, &g)).unwrap();
        prop_assert!(q.fingerprint().distance(&p.fingerprint()) < 1e-9);
    }

    #[test]
    fn volume_form_is_nowhere_zero_and_iota_odd(k in 0usize..1000) {
        let s = shared();
        let p = &s.circle.points[k % s.circle.points.len()];
        let alpha = s.model.alpha().unwrap();
        let t = tau_eval(&s.model, &p.images, &p.cocycle).unwrap();
        prop_assert!(t.abs() > 1e-10);
        let ts = tau_eval(&s.model, &iota_images(&alpha, &p.images), &p.cocycle).unwrap();
        prop_assert!((ts + t).abs() <= 1e-6 * t.abs());
    }

    #[test]
    fn periodic_interpolation_of_smooth_data(n in 40usize..120, shift in -10.0f64..10.0, at in -20.0f64..20.0) {
        let period = 2.5;
        let f = |x: f64| (std::f64::consts::TAU * x / period).sin() + 0.3 * (2.0 * std::f64::consts::TAU * x / period).cos();
        // unsorted abscissae outside the base period
        let x: Vec<f64> = (0..n).map(|i| shift + period * ((i + n / 3) % n) as f64 / n as f64).collect();
        let y = x.iter().map(|&v| vec![f(v)]).collect();
        let series = PeriodicSeries::new(x, y, period);
        prop_assert!((series.eval(at)[0] - f(at)).abs() < 1e-5);
    }

    #[test]
    fn seed_and_check_round_trip(theta in 0.01f64..3.1, phi in 0.0f64..3.1, n in 1usize..9) {
        let s: Seed = format!("{theta},{phi}").parse().unwrap();
        prop_assert_eq!((s.theta1, s.theta2, s.phi), (theta, theta, phi));
        for c in [Check::Iota, Check::All, Check::Aut(n)] {
            prop_assert_eq!(c.to_string().parse::<Check>().unwrap(), c);
        }
    }
}

#[test]
fn trace_functions_are_smooth_along_the_path() {
    // second differences of I_x(y) along nearly equal steps scale like step²
    let s = shared();
    let w = s.model.presentation.word("x y").unwrap();
    let tr: Vec<f64> = s.circle.points.iter().map(|p| w.eval_su2(&p.images).trace()).collect();
    let worst = tr.windows(3).map(|v| (v[0] - 2.0 * v[1] + v[2]).abs()).fold(0.0, f64::max);
    assert!(worst < 50.0 * 0.05 * 0.05, "{worst}");
}

#[test]
fn regularity_holds_off_flagged_points() {
    let s = shared();
    let flagged = s.circle.points.iter().filter(|p| p.regularity.near_singular).count();
    assert!(flagged <= 2);
    for p in s.circle.points.iter().filter(|p| !p.regularity.near_singular) {
        assert_eq!(p.regularity.dims, [0, 1, 1]);
    }
}
