use circplane_core::verify::{
    adversarial_min_margin, check_reduction_invariance, chunk_count, enumerate_cases, reduce_pair, reduction_deviation,
    sample_chunk, sample_pairs, verify_cases, CaseRegion, PairReport, Sign, DEFAULT_TOLERANCE, SAMPLE_CHUNK,
};
use circplane_core::{Point, StripScheme};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const SQRT3: f64 = 1.732_050_807_568_877_2;

fn zero_shift() -> StripScheme {
    let t = StripScheme::thm1();
    t.with_params(t.h, 0.0, t.ell, t.slope).unwrap()
}

fn region_matches(r: &CaseRegion, k: i64, x: f64) -> bool {
    r.k == k
        && match r.sign {
            Sign::Plus => x >= 0.0,
            Sign::Minus => x < 0.0,
            Sign::Both => true,
        }
}

#[test]
fn thm1_certifies() {
    let rep = verify_cases(&StripScheme::thm1(), DEFAULT_TOLERANCE).unwrap();
    assert!(rep.pass);
    assert_eq!(rep.cases.len(), 6);
    let ks: Vec<i64> = rep.cases.iter().map(|c| c.region.k).collect();
    let mut distinct = ks.clone();
    distinct.sort();
    distinct.dedup();
    assert_eq!(distinct, [-2, -1, 0, 1, 2]);
}

#[test]
fn thm1_case_six_reaches_r_minus_one() {
    let rep = verify_cases(&StripScheme::thm1(), DEFAULT_TOLERANCE).unwrap();
    let c = rep.case(6).unwrap().c_ranges[0];
    let r = 4.0 + 4.0 * SQRT3 / 3.0;
    assert!((c.lo - (1.0 + 4.0 * SQRT3 / 3.0)).abs() < 1e-9);
    assert!((c.hi - (r - 1.0)).abs() < 1e-9);
    let c5 = rep.case(5).unwrap().c_ranges[0];
    assert!((c5.lo - 1.0).abs() < 1e-9 && (c5.hi - (1.0 + 4.0 * SQRT3 / 3.0)).abs() < 1e-9);
}

#[test]
fn zero_shift_fails_in_both_routes() {
    let s = zero_shift();
    assert!(!verify_cases(&s, DEFAULT_TOLERANCE).unwrap().pass);
    // a vertical unit edge joins equal colors
    let pair = PairReport::evaluate(&s, 0, Point::new(1.0, 0.1), Point::new(1.0, 1.1));
    assert_eq!(pair.margin, -1.0);
    assert!(sample_pairs(&s, 100_000, 42).violation_count > 0);
}

#[test]
fn band_scheme_case_four_counterexample() {
    // The interval certifier rejects eps = 0.05; this pair confirms it is a
    // genuine violation rather than over-approximation.
    let s = StripScheme::thm2(0.05).unwrap();
    let rep = verify_cases(&s, DEFAULT_TOLERANCE).unwrap();
    assert!(!rep.pass);
    let failing: Vec<u8> = rep
        .cases
        .iter()
        .filter(|c| !c.pass)
        .filter_map(|c| c.region.case)
        .collect();
    assert_eq!(failing, [4, 6]);
    let p2 = Point::new(0.0, s.h.next_down());
    let p1 = Point::new(-0.909, 2.0 * s.h);
    let pair = PairReport::evaluate(&s, 0, p1, p2);
    assert!(pair.distance >= 1.0 - s.epsilon && pair.distance <= 1.0 + s.epsilon);
    assert!(pair.margin < -0.1, "{pair:?}");
}

#[test]
fn band_scheme_a_identity() {
    for eps in [0.0, 0.01, 0.05, 0.09, 0.2] {
        let s = StripScheme::thm2(eps).unwrap();
        let cases = enumerate_cases(&s);
        let c1 = cases.iter().find(|c| c.case == Some(1)).unwrap();
        assert!(
            (c1.x_range.lo - s.a).abs() < 1e-12,
            "eps {eps}: {:?} vs {}",
            c1.x_range,
            s.a
        );
        assert!((c1.x_range.hi - (1.0 + eps)).abs() < 1e-12);
        assert_eq!(cases.len(), 6);
    }
}

#[test]
fn sampled_pairs_fall_in_their_case_region() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for s in [
        StripScheme::thm1(),
        StripScheme::thm2(0.05).unwrap(),
        StripScheme::thm2(0.2).unwrap(),
    ] {
        let regions = enumerate_cases(&s);
        for _ in 0..200_000 {
            let p2 = Point::new(rng.gen_range(-10.0..10.0), rng.gen_range(-10.0..10.0));
            let theta = rng.gen_range(0.0..std::f64::consts::TAU);
            let d = 1.0 - s.epsilon + 2.0 * s.epsilon * rng.gen::<f64>();
            let p1 = Point::new(p2.x + d * theta.cos(), p2.y + d * theta.sin());
            let (u, v) = reduce_pair(&s, p1, p2);
            let k = s.strip_index(u.y);
            let hits: Vec<&CaseRegion> = regions.iter().filter(|r| region_matches(r, k, u.x)).collect();
            assert_eq!(hits.len(), 1, "k={k} x={} for {:?}", u.x, s.family);
            let c = s.color_at(u);
            assert!(
                hits[0].c_ranges.iter().any(|r| r.widen(1e-9).contains(c)),
                "color {c} outside {:?}",
                hits[0].c_ranges
            );
            assert!(hits[0].v_range.widen(1e-9).contains(u.y - v.y));
            assert!(hits[0].x_range.widen(1e-9).contains(u.x.abs()));
        }
    }
}

#[test]
fn reduction_invariance_thm1() {
    let rep = check_reduction_invariance(&StripScheme::thm1(), 100_000, 42);
    assert!(rep.max_deviation() <= 1e-9, "{rep:?}");
}

#[test]
fn reduction_trivial_cases() {
    let s = StripScheme::thm1();
    let u = Point::new(2.3, 1.7);
    assert_eq!(reduction_deviation(&s, u, u), (0.0, 0.0));
    // same strip: pure horizontal translation
    let (ds, dd) = reduction_deviation(&s, Point::new(4.1, 0.3), Point::new(3.4, 0.05));
    assert!(ds < 1e-15 && dd < 1e-15);
}

#[test]
fn thm1_sampling_clean_and_tight() {
    let rep = sample_pairs(&StripScheme::thm1(), 1_000_000, 42);
    assert_eq!(rep.violation_count, 0);
    assert!(rep.min_margin >= -1e-9);
    assert!(rep.min_margin <= 1e-2);
    assert_eq!(rep.samples, 1_000_000);
}

#[test]
fn band_scheme_beyond_seven_has_real_violations() {
    let s = StripScheme::thm2(0.2).unwrap();
    assert!(s.r > 8.5 && s.r < 8.6);
    let rep = sample_pairs(&s, 1_000_000, 42);
    assert!(rep.violation_count > 0);
    for v in rep.violations.iter().take(1000) {
        assert!(v.distance >= 1.0 - s.epsilon - 1e-12 && v.distance <= 1.0 + s.epsilon + 1e-12);
        let again = PairReport::evaluate(&s, v.index, v.p1, v.p2);
        assert_eq!(&again, v);
        assert!(again.margin < -1e-9);
    }
}

#[test]
fn chunk_partition_does_not_change_report() {
    let s = StripScheme::thm2(0.05).unwrap();
    let n = 5 * SAMPLE_CHUNK + 123;
    let whole = sample_pairs(&s, n, 9);
    let chunks: Vec<_> = (0..chunk_count(n)).map(|c| sample_chunk(&s, n, 9, c)).collect();
    // merge as two halves, each built independently
    let left = chunks[..3].iter().cloned().reduce(|a, b| a.merge(b)).unwrap();
    let right = chunks[3..].iter().cloned().reduce(|a, b| a.merge(b)).unwrap();
    let mut regrouped = left.merge(right);
    regrouped.seed = whole.seed;
    assert_eq!(regrouped, whole);
}

#[test]
fn adversarial_thm1_finds_tight_boundary() {
    let rep = adversarial_min_margin(&StripScheme::thm1(), 8, 80).unwrap();
    assert!(rep.margin >= -1e-9 && rep.margin <= 1e-4, "{rep:?}");
    assert!(rep.margin <= rep.grid_margin);
    let w = rep.witness;
    assert!((w.distance - 1.0).abs() < 1e-12);
}

#[test]
fn adversarial_refinement_never_worse() {
    for s in [StripScheme::thm1(), StripScheme::thm2(0.05).unwrap()] {
        let grid = adversarial_min_margin(&s, 8, 0).unwrap();
        let refined = adversarial_min_margin(&s, 8, 40).unwrap();
        assert_eq!(grid.margin, grid.grid_margin);
        assert_eq!(refined.grid_margin, grid.margin);
        assert!(refined.margin <= grid.margin);
    }
}

#[test]
fn adversarial_zero_shift_gross_violation() {
    let rep = adversarial_min_margin(&zero_shift(), 8, 20).unwrap();
    assert!(rep.margin < -0.5, "{rep:?}");
}
