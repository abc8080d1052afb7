use circplane_core::{r_of_eps, Point, StripScheme};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn schemes() -> Vec<StripScheme> {
    vec![
        StripScheme::thm1(),
        StripScheme::thm2(0.05).unwrap(),
        StripScheme::thm2(1.0 / 11.0).unwrap(),
    ]
}

// circular distance between two colors, tolerant of a wrap at 0 / r
fn circ(s: &StripScheme, a: f64, b: f64) -> f64 {
    s.separation(a, b)
}

fn near_strip_line(s: &StripScheme, y: f64) -> bool {
    let t = y / s.h;
    (t - t.round()).abs() < 1e-9
}

#[test]
fn colors_stay_in_range() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for s in [StripScheme::thm1(), StripScheme::thm2(0.05).unwrap()] {
        for _ in 0..1_000_000 {
            let p = Point::new(rng.gen_range(-1e3..1e3), rng.gen_range(-1e3..1e3));
            let c = s.color_at(p);
            assert!((0.0..s.r).contains(&c), "{c} outside [0, {})", s.r);
        }
    }
}

#[test]
fn thm1_and_thm2_at_zero_agree_on_grid() {
    let a = StripScheme::thm1();
    let b = StripScheme::thm2(0.0).unwrap();
    for i in 0..100 {
        for j in 0..100 {
            let p = Point::new(-7.0 + 0.14 * i as f64, -3.0 + 0.061 * j as f64);
            assert!(circ(&a, a.color_at(p), b.color_at(p)) < 1e-12, "{p:?}");
        }
    }
}

#[test]
fn r_of_eps_strictly_increasing() {
    let mut prev = r_of_eps(0.0).unwrap();
    for i in 1..=330 {
        let r = r_of_eps(i as f64 * 1e-3).unwrap();
        assert!(r > prev);
        prev = r;
    }
}

#[test]
fn r_of_eps_matches_scheme_perimeter() {
    for eps in [0.0, 0.01, 0.05, 0.1, 0.2, 0.3] {
        let s = StripScheme::thm2(eps).unwrap();
        assert!((s.r - r_of_eps(eps).unwrap()).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn horizontal_period(x in -50.0f64..50.0, y in -20.0f64..20.0, which in 0usize..3) {
        let s = schemes()[which];
        let p = Point::new(x, y);
        let q = Point::new(x + s.ell, y);
        prop_assert!(circ(&s, s.color_at(p), s.color_at(q)) < 1e-12);
    }

    #[test]
    fn diagonal_period(x in -50.0f64..50.0, y in -20.0f64..20.0, which in 0usize..3) {
        let s = schemes()[which];
        prop_assume!(!near_strip_line(&s, y));
        let p = Point::new(x, y);
        let q = Point::new(x + s.strip_shift(), y + s.h);
        prop_assert!(circ(&s, s.color_at(p), s.color_at(q)) < 1e-12);
    }

    #[test]
    fn constant_in_y_within_strip(x in -50.0f64..50.0, y in -20.0f64..20.0, t in 0.0f64..1.0, which in 0usize..3) {
        let s = schemes()[which];
        let base = circplane_core::mod_floor(y, s.h).unwrap();
        let other = base + t * s.h;
        prop_assume!(other < base + s.h);
        prop_assert_eq!(s.color_at(Point::new(x, y)), s.color_at(Point::new(x, other)));
    }
}
