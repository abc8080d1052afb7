//! Certification that a [`StripScheme`] is an `r`-circular coloring of the
//! graph joining points at distance in `[1 - eps, 1 + eps]`.
//!
//! Three independent routes:
//!
//! * [`verify_cases`]: after translating the second endpoint to `x = 0`
//!   inside strip 0, the first endpoint sits in strip `k` for a handful of
//!   `k`. Each `(k, sign of x)` region is bounded in outward interval
//!   arithmetic and its color image must lie in `[1, r - 1]`.
//! * [`sample_pairs`]: seeded random edges, margins measured in `f64`.
//! * [`adversarial_min_margin`]: grid search plus local descent for the
//!   smallest margin.
//!
//! [`check_reduction_invariance`] tests the translation step the case
//! analysis relies on.

use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::numerics::{interval_mod_reduce, OuterInterval};
use crate::scheme::{Family, Point, StripScheme};

/// Default certification tolerance at the ends of `[1, r - 1]`.
pub const DEFAULT_TOLERANCE: f64 = 1e-9;
/// Largest tolerance [`verify_cases`] accepts.
pub const MAX_TOLERANCE: f64 = 1e-6;
/// Sampled pairs with a margin below `-VIOLATION_SLACK` count as violations.
pub const VIOLATION_SLACK: f64 = 1e-9;
/// Pairs per RNG stream in [`sample_pairs`].
pub const SAMPLE_CHUNK: u64 = 1 << 16;

/// Scheme parameters as intervals enclosing the exact real constants.
#[derive(Debug, Clone, Copy)]
pub struct SchemeBounds {
    pub h: OuterInterval,
    pub shift: OuterInterval,
    pub ell: OuterInterval,
    pub slope: OuterInterval,
    pub r: OuterInterval,
    /// `1 + eps`, the longest edge.
    pub reach: OuterInterval,
    /// `1 - eps`, the shortest edge.
    pub inner: OuterInterval,
    /// `reach / h`: how many strips the longest edge spans.
    pub reach_in_strips: OuterInterval,
}

impl SchemeBounds {
    pub fn of(sch: &StripScheme) -> Result<Self> {
        let one = OuterInterval::point(1.0);
        let two = OuterInterval::point(2.0);
        let eps = OuterInterval::point(sch.epsilon);
        let reach = one.add(eps);
        let inner = one.sub(eps);
        let (h, shift, ell, slope, reach_in_strips) = match sch.family {
            Family::Thm1 => {
                let sqrt3 = OuterInterval::point(3.0).sqrt()?;
                let h = OuterInterval::point(0.5);
                let shift = one.add(sqrt3.scale(0.5));
                let ell = two.add(sqrt3.scale(2.0));
                let slope = sqrt3.scale(2.0).div(OuterInterval::point(3.0))?;
                (h, shift, ell, slope, two)
            }
            Family::Thm2 => {
                let disc = eps.sqr().scale(3.0).sub(eps.scale(10.0)).add(OuterInterval::point(3.0));
                let a = disc.sqrt()?.scale(0.5);
                // h is defined as reach / 2, so the ratio is exactly 2
                let h = reach.scale(0.5);
                let shift = reach.add(a);
                let ell = two.add(eps.scale(2.0)).add(a.scale(4.0));
                let slope = one.div(a)?;
                (h, shift, ell, slope, two)
            }
            Family::Explicit => {
                let h = OuterInterval::point(sch.h);
                let shift = OuterInterval::point(sch.sigma).mul(h);
                let ratio = reach.div(h)?;
                (
                    h,
                    shift,
                    OuterInterval::point(sch.ell),
                    OuterInterval::point(sch.slope),
                    ratio,
                )
            }
        };
        Ok(Self {
            h,
            shift,
            ell,
            slope,
            r: slope.mul(ell),
            reach,
            inner,
            reach_in_strips,
        })
    }
}

/// Sign branch of the first endpoint's `x` after reduction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Sign {
    Plus,
    Minus,
    Both,
}

/// One branch of the case analysis.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CaseRegion {
    /// Numbering 1..=6 of the classical case split (`k = 0+, 0-, 1, 2, -1, -2`).
    pub case: Option<u8>,
    /// Strip offset: the first endpoint lies in `[k h, (k + 1) h)`.
    pub k: i64,
    pub sign: Sign,
    /// Vertical offset `y1 - y2`.
    pub v_range: OuterInterval,
    /// Magnitude `|x1|`.
    pub x_range: OuterInterval,
    /// Color image of the first endpoint after the wrap.
    pub c_ranges: Vec<OuterInterval>,
}

impl CaseRegion {
    /// Signed `x1` interval for this branch.
    pub fn signed_x(&self) -> OuterInterval {
        match self.sign {
            Sign::Plus => self.x_range,
            Sign::Minus => self.x_range.neg(),
            Sign::Both => OuterInterval {
                lo: -self.x_range.hi,
                hi: self.x_range.hi,
            },
        }
    }

    fn matches(&self, k: i64, x: f64) -> bool {
        self.k == k
            && match self.sign {
                Sign::Plus => x >= 0.0,
                Sign::Minus => x < 0.0,
                Sign::Both => true,
            }
    }
}

fn case_label(k: i64, sign: Sign) -> Option<u8> {
    match (k, sign) {
        (0, Sign::Plus) => Some(1),
        (0, Sign::Minus) => Some(2),
        (1, _) => Some(3),
        (2, _) => Some(4),
        (-1, _) => Some(5),
        (-2, _) => Some(6),
        _ => None,
    }
}

/// Emits every feasible `(k, sign)` region with its color image.
pub fn enumerate_cases(sch: &StripScheme) -> Vec<CaseRegion> {
    let bounds = match SchemeBounds::of(sch) {
        Ok(b) => b,
        Err(_) => return Vec::new(),
    };
    enumerate_with(&bounds)
}

fn enumerate_with(b: &SchemeBounds) -> Vec<CaseRegion> {
    let mut out = Vec::new();
    let kmax = libm::ceil(b.reach_in_strips.hi) as i64 + 1;
    let band = OuterInterval {
        lo: -b.reach.hi,
        hi: b.reach.hi,
    };
    let full_circle = OuterInterval { lo: 0.0, hi: b.r.hi };
    let mut ks: Vec<i64> = Vec::new();
    ks.push(0);
    for k in 1..=kmax {
        ks.push(k);
        ks.push(-k);
    }
    ks.sort_by_key(|&k| (k < 0, k.abs()));
    for k in ks {
        // y1 - y2 lies in the open interval ((k-1) h, (k+1) h)
        if (k.abs() - 1) as f64 >= b.reach_in_strips.hi {
            continue;
        }
        let span = OuterInterval {
            lo: b.h.scale((k - 1) as f64).lo,
            hi: b.h.scale((k + 1) as f64).hi,
        };
        let Some(v_range) = span.intersect(band) else {
            continue;
        };
        let v_abs = v_range.abs();
        let vmin = OuterInterval::point(v_abs.lo);
        let vmax = OuterInterval::point(v_abs.hi);
        let outer_rad = b.reach.sqr().sub(vmin.sqr());
        if outer_rad.hi < 0.0 {
            continue;
        }
        let x_hi = match outer_rad.max0().sqrt() {
            Ok(v) => v.hi,
            Err(_) => continue,
        };
        let x_lo = b.inner.sqr().sub(vmax.sqr()).max0().sqrt().map(|v| v.lo).unwrap_or(0.0);
        if x_lo > x_hi {
            continue;
        }
        let x_range = OuterInterval { lo: x_lo, hi: x_hi };
        let signs: &[Sign] = if k == 0 || x_lo > 0.0 {
            &[Sign::Plus, Sign::Minus]
        } else {
            &[Sign::Both]
        };
        for &sign in signs {
            let mut region = CaseRegion {
                case: case_label(k, sign),
                k,
                sign,
                v_range,
                x_range,
                c_ranges: Vec::new(),
            };
            let pre = region.signed_x().sub(b.shift.scale(k as f64));
            region.c_ranges = match interval_mod_reduce(pre, b.ell) {
                Ok(pieces) => pieces.into_iter().map(|p| p.mul(b.slope)).collect(),
                Err(_) => alloc::vec![full_circle],
            };
            out.push(region);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CheckedCase {
    pub region: CaseRegion,
    pub pass: bool,
}

/// Outcome of the mechanized case analysis.
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct CertificateReport {
    pub scheme: StripScheme,
    pub tolerance: f64,
    /// Every color image must lie inside this interval.
    pub target: OuterInterval,
    pub cases: Vec<CheckedCase>,
    pub pass: bool,
}

impl CertificateReport {
    pub fn case(&self, label: u8) -> Option<&CaseRegion> {
        self.cases.iter().map(|c| &c.region).find(|r| r.case == Some(label))
    }
}

/// Checks every case region against `[1 - tol, r - 1 + tol]`.
pub fn verify_cases(sch: &StripScheme, tol: f64) -> Result<CertificateReport> {
    if !(0.0..=MAX_TOLERANCE).contains(&tol) {
        return Err(Error::InvalidParameter("tolerance must lie in [0, 1e-6]"));
    }
    let bounds = SchemeBounds::of(sch)?;
    // smallest admissible r keeps the upper end conservative
    let target = OuterInterval {
        lo: 1.0 - tol,
        hi: OuterInterval::point(bounds.r.lo).sub(OuterInterval::point(1.0)).lo + tol,
    };
    let cases: Vec<CheckedCase> = enumerate_with(&bounds)
        .into_iter()
        .map(|region| {
            let pass = !region.c_ranges.is_empty() && region.c_ranges.iter().all(|c| c.is_subset_of(target));
            CheckedCase { region, pass }
        })
        .collect();
    let pass = !cases.is_empty() && cases.iter().all(|c| c.pass);
    Ok(CertificateReport {
        scheme: *sch,
        tolerance: tol,
        target,
        cases,
        pass,
    })
}

/// Translates a pair so the second point lands at `x = 0` inside strip 0.
pub fn reduce_pair(sch: &StripScheme, p1: Point, p2: Point) -> (Point, Point) {
    let base = sch.strip_index(p2.y) as f64 * sch.h;
    (Point::new(p1.x - p2.x, p1.y - base), Point::new(0.0, p2.y - base))
}

/// Index into `regions` of the branch covering the pair `(p1, p2)`.
pub fn locate_case(sch: &StripScheme, regions: &[CaseRegion], p1: Point, p2: Point) -> Option<usize> {
    let (u, _) = reduce_pair(sch, p1, p2);
    let k = sch.strip_index(u.y);
    regions.iter().position(|r| r.matches(k, u.x))
}

/// Largest deviations seen by [`check_reduction_invariance`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ReductionCheck {
    pub pairs: u64,
    pub max_separation_deviation: f64,
    pub max_distance_deviation: f64,
}

impl ReductionCheck {
    pub fn max_deviation(&self) -> f64 {
        self.max_separation_deviation.max(self.max_distance_deviation)
    }
}

/// Deviation in distance and circular separation between a pair and its reduction.
pub fn reduction_deviation(sch: &StripScheme, p1: Point, p2: Point) -> (f64, f64) {
    let (u, v) = reduce_pair(sch, p1, p2);
    let before = sch.separation(sch.color_at(p1), sch.color_at(p2));
    let after = sch.separation(sch.color_at(u), sch.color_at(v));
    ((before - after).abs(), (p1.dist(p2) - u.dist(v)).abs())
}

/// Random pairs around the origin; both the distance and the circular
/// separation must survive [`reduce_pair`].
pub fn check_reduction_invariance(sch: &StripScheme, n: u64, seed: u64) -> ReductionCheck {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let box_x = 4.0 * sch.ell;
    let box_y = 8.0 * sch.h;
    let max_d = 2.0 * (1.0 + sch.epsilon);
    let mut out = ReductionCheck {
        pairs: n,
        max_separation_deviation: 0.0,
        max_distance_deviation: 0.0,
    };
    for _ in 0..n {
        let p1 = Point::new(
            box_x * (2.0 * rng.gen::<f64>() - 1.0),
            box_y * (2.0 * rng.gen::<f64>() - 1.0),
        );
        let theta = 2.0 * PI * rng.gen::<f64>();
        let d = max_d * rng.gen::<f64>();
        let p2 = Point::new(p1.x + d * libm::cos(theta), p1.y + d * libm::sin(theta));
        let (ds, dd) = reduction_deviation(sch, p1, p2);
        out.max_separation_deviation = out.max_separation_deviation.max(ds);
        out.max_distance_deviation = out.max_distance_deviation.max(dd);
    }
    out
}

/// One evaluated pair of points.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PairReport {
    /// Position in the sample stream (0 for pairs not drawn by the sampler).
    pub index: u64,
    pub p1: Point,
    pub p2: Point,
    pub distance: f64,
    pub c1: f64,
    pub c2: f64,
    pub separation: f64,
    pub margin: f64,
}

impl PairReport {
    pub fn evaluate(sch: &StripScheme, index: u64, p1: Point, p2: Point) -> Self {
        let c1 = sch.color_at(p1);
        let c2 = sch.color_at(p2);
        let separation = sch.separation(c1, c2);
        Self {
            index,
            p1,
            p2,
            distance: p1.dist(p2),
            c1,
            c2,
            separation,
            margin: separation - 1.0,
        }
    }
}

/// Result of [`sample_pairs`].
#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct MarginReport {
    pub seed: u64,
    pub samples: u64,
    pub min_margin: f64,
    pub witness: Option<PairReport>,
    pub violation_count: u64,
    /// Pairs with margin below `-VIOLATION_SLACK`, in sample order.
    pub violations: Vec<PairReport>,
}

impl MarginReport {
    pub fn empty(seed: u64) -> Self {
        Self {
            seed,
            samples: 0,
            min_margin: f64::INFINITY,
            witness: None,
            violation_count: 0,
            violations: Vec::new(),
        }
    }

    /// Combines reports of consecutive sample ranges; `other` must come after `self`.
    pub fn merge(mut self, other: MarginReport) -> MarginReport {
        self.samples += other.samples;
        if let Some(w) = other.witness {
            let better = match self.witness {
                None => true,
                Some(mine) => (w.margin, w.index) < (mine.margin, mine.index),
            };
            if better {
                self.witness = Some(w);
                self.min_margin = w.margin;
            }
        }
        self.violation_count += other.violation_count;
        self.violations.extend(other.violations);
        self
    }
}

/// Number of RNG streams needed for `n` samples.
pub fn chunk_count(n: u64) -> u64 {
    n.div_ceil(SAMPLE_CHUNK)
}

/// Samples `[chunk * SAMPLE_CHUNK, min(n, (chunk + 1) * SAMPLE_CHUNK))` of the stream.
pub fn sample_chunk(sch: &StripScheme, n: u64, seed: u64, chunk: u64) -> MarginReport {
    let start = chunk * SAMPLE_CHUNK;
    let end = n.min(start + SAMPLE_CHUNK);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(chunk);
    let mut report = MarginReport::empty(seed);
    let eps = sch.epsilon;
    for index in start..end {
        let p = Point::new(sch.ell * rng.gen::<f64>(), sch.h * rng.gen::<f64>());
        let theta = 2.0 * PI * rng.gen::<f64>();
        let d = if eps == 0.0 {
            1.0
        } else {
            1.0 - eps + 2.0 * eps * rng.gen::<f64>()
        };
        let q = Point::new(p.x + d * libm::cos(theta), p.y + d * libm::sin(theta));
        let c1 = sch.color_at(p);
        let c2 = sch.color_at(q);
        let margin = sch.separation(c1, c2) - 1.0;
        report.samples += 1;
        let is_min = margin < report.min_margin;
        let is_violation = margin < -VIOLATION_SLACK;
        if is_min || is_violation {
            let pair = PairReport::evaluate(sch, index, p, q);
            if is_min {
                report.min_margin = margin;
                report.witness = Some(pair);
            }
            if is_violation {
                report.violation_count += 1;
                report.violations.push(pair);
            }
        }
    }
    report
}

/// Seeded random edges: `p` uniform in one period cell, direction uniform,
/// length 1 (or uniform in the band when `eps > 0`).
///
/// The stream is cut into chunks of [`SAMPLE_CHUNK`] pairs with one RNG
/// stream each, so any partition of chunks over workers yields the same report.
pub fn sample_pairs(sch: &StripScheme, n: u64, seed: u64) -> MarginReport {
    (0..chunk_count(n)).fold(MarginReport::empty(seed), |acc, c| {
        acc.merge(sample_chunk(sch, n, seed, c))
    })
}

/// Smallest margin found by [`adversarial_min_margin`].
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct AdversarialReport {
    pub margin: f64,
    /// Grid-only minimum before refinement.
    pub grid_margin: f64,
    /// Witness parameters `(x, y, theta, d)`: `p1 = (x, y)`, `p2 = p1 + d (cos theta, sin theta)`.
    pub params: [f64; 4],
    pub witness: PairReport,
    pub evaluations: u64,
}

// (strip offset of q, wrap index of p, wrap index of q): constant on each
// smooth piece of the margin function
type Signature = (i64, i64, i64);

struct Probe<'a> {
    sch: &'a StripScheme,
    evaluations: u64,
}

impl Probe<'_> {
    fn endpoints(params: [f64; 4]) -> (Point, Point) {
        let [x, y, theta, d] = params;
        let p = Point::new(x, y);
        (p, Point::new(x + d * libm::cos(theta), y + d * libm::sin(theta)))
    }

    fn margin(&mut self, params: [f64; 4]) -> f64 {
        self.evaluations += 1;
        let (p, q) = Self::endpoints(params);
        self.sch.separation(self.sch.color_at(p), self.sch.color_at(q)) - 1.0
    }

    fn signature(&self, params: [f64; 4]) -> Signature {
        let s = self.sch;
        let (p, q) = Self::endpoints(params);
        let wrap = |pt: Point| {
            let base = s.strip_index(pt.y) as f64 * s.h;
            libm::floor((pt.x - s.sigma * base) / s.ell) as i64
        };
        (s.strip_index(q.y) - s.strip_index(p.y), wrap(p), wrap(q))
    }
}

fn lex_less(a: &(f64, [f64; 4]), b: &(f64, [f64; 4])) -> bool {
    match a.0.partial_cmp(&b.0) {
        Some(core::cmp::Ordering::Less) => true,
        Some(core::cmp::Ordering::Equal) => a.1 < b.1,
        _ => false,
    }
}

/// Grid search over `(x, y, theta, d)` followed by coordinate descent inside
/// each smooth region of the margin function.
///
/// `density` is the number of grid points per unit of each coordinate
/// (at least 8). `iters` bounds the descent sweeps; `0` returns the grid minimum.
pub fn adversarial_min_margin(sch: &StripScheme, density: u32, iters: u32) -> Result<AdversarialReport> {
    if density < 8 {
        return Err(Error::InvalidParameter("grid density must be at least 8 per unit"));
    }
    let dens = density as f64;
    let eps = sch.epsilon;
    let nx = libm::ceil(sch.ell * dens) as usize;
    let ny = libm::ceil(sch.h * dens) as usize;
    let nt = libm::ceil(2.0 * PI * dens) as usize;
    let nd = if eps == 0.0 {
        1
    } else {
        libm::ceil(2.0 * eps * dens) as usize + 1
    };
    let steps = [
        sch.ell / nx as f64,
        sch.h / ny as f64,
        2.0 * PI / nt as f64,
        if nd > 1 { 2.0 * eps / (nd - 1) as f64 } else { 0.0 },
    ];
    let mut probe = Probe { sch, evaluations: 0 };

    // best grid point per signature, kept in first-seen order
    let mut seeds: Vec<(Signature, f64, [f64; 4])> = Vec::new();
    let mut best: Option<(f64, [f64; 4])> = None;
    for i in 0..nx {
        let x = steps[0] * i as f64;
        for j in 0..ny {
            let y = steps[1] * j as f64;
            for t in 0..nt {
                let theta = steps[2] * t as f64;
                for m in 0..nd {
                    let d = (1.0 - eps + steps[3] * m as f64).min(1.0 + eps);
                    let params = [x, y, theta, d];
                    let margin = probe.margin(params);
                    let cand = (margin, params);
                    if best.as_ref().is_none_or(|b| lex_less(&cand, b)) {
                        best = Some(cand);
                    }
                    let sig = probe.signature(params);
                    match seeds.iter_mut().find(|s| s.0 == sig) {
                        Some(slot) => {
                            if lex_less(&cand, &(slot.1, slot.2)) {
                                slot.1 = margin;
                                slot.2 = params;
                            }
                        }
                        None => seeds.push((sig, margin, params)),
                    }
                }
            }
        }
    }
    let (grid_margin, grid_params) = best.expect("grid is never empty");
    let mut overall = (grid_margin, grid_params);

    if iters > 0 {
        for (sig, margin, params) in seeds {
            let refined = descend(&mut probe, sig, (margin, params), steps, iters);
            if lex_less(&refined, &overall) {
                overall = refined;
            }
        }
    }

    let (p, q) = Probe::endpoints(overall.1);
    Ok(AdversarialReport {
        margin: overall.0,
        grid_margin,
        params: overall.1,
        witness: PairReport::evaluate(sch, 0, p, q),
        evaluations: probe.evaluations,
    })
}

fn descend(
    probe: &mut Probe<'_>,
    sig: Signature,
    start: (f64, [f64; 4]),
    mut steps: [f64; 4],
    iters: u32,
) -> (f64, [f64; 4]) {
    let sch = probe.sch;
    let eps = sch.epsilon;
    let inside = |p: &[f64; 4]| {
        (0.0..sch.ell).contains(&p[0]) && (0.0..sch.h).contains(&p[1]) && (1.0 - eps..=1.0 + eps).contains(&p[3])
    };
    let mut cur = start;
    for _ in 0..iters {
        let mut improved = false;
        for axis in 0..4 {
            if steps[axis] == 0.0 {
                continue;
            }
            for dir in [-1.0, 1.0] {
                let mut cand = cur.1;
                cand[axis] += dir * steps[axis];
                if !inside(&cand) || probe.signature(cand) != sig {
                    continue;
                }
                let m = probe.margin(cand);
                if m < cur.0 {
                    cur = (m, cand);
                    improved = true;
                    break;
                }
            }
        }
        if !improved {
            for s in steps.iter_mut() {
                *s *= 0.5;
            }
        }
    }
    cur
}
