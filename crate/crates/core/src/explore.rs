//! Epsilon sweeps, the `r(eps) = target` threshold, and a local search over
//! strip-scheme parameters.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::scheme::{r_of_eps, StripScheme};
use crate::verify::{sample_pairs, verify_cases, CertificateReport, DEFAULT_TOLERANCE};

pub const DEFAULT_SWEEP_SAMPLES: u64 = 100_000;
/// Bisection stops once the bracket is this narrow.
pub const THRESHOLD_TOLERANCE: f64 = 1e-13;

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct SweepRow {
    pub epsilon: f64,
    /// `None` when `epsilon` is outside `[0, 1/3)`.
    pub r: Option<f64>,
    pub certified: bool,
    pub min_margin: Option<f64>,
}

/// One row per epsilon: perimeter, interval certificate, sampled minimum margin.
pub fn eps_sweep(eps_values: &[f64], samples: u64, seed: u64) -> Vec<SweepRow> {
    eps_values
        .iter()
        .map(|&eps| match StripScheme::thm2(eps) {
            Ok(sch) => SweepRow {
                epsilon: eps,
                r: Some(sch.r),
                certified: verify_cases(&sch, DEFAULT_TOLERANCE).is_ok_and(|c| c.pass),
                min_margin: Some(sample_pairs(&sch, samples, seed).min_margin),
            },
            Err(_) => SweepRow {
                epsilon: eps,
                r: None,
                certified: false,
                min_margin: None,
            },
        })
        .collect()
}

/// Solves `r_of_eps(eps) = target_r` by bisection on `[0, 1/3)`.
///
/// `None` when the target is below `r_of_eps(0)`; `r_of_eps` is increasing
/// and unbounded near `1/3`, so every larger target has a solution.
pub fn eps_threshold(target_r: f64) -> Option<f64> {
    let r0 = r_of_eps(0.0).ok()?;
    if target_r.is_nan() || target_r < r0 {
        return None;
    }
    if target_r == r0 {
        return Some(0.0);
    }
    if target_r.is_infinite() {
        return None;
    }
    let (mut lo, mut hi) = (0.0f64, 1.0f64 / 3.0);
    while hi - lo > THRESHOLD_TOLERANCE {
        let mid = 0.5 * (lo + hi);
        let r = r_of_eps(mid).unwrap_or(f64::INFINITY);
        if r >= target_r {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Some(0.5 * (lo + hi))
}

/// Smaller root of `23 eps^2 - 106 eps + 11 = 0`, the band limit quoted
/// alongside the `r < 7` bound. Kept for comparison with [`eps_threshold`].
pub fn reference_epsilon() -> f64 {
    (53.0 - 6.0 * libm::sqrt(71.0)) / 23.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct ThresholdReport {
    pub target_r: f64,
    pub epsilon: Option<f64>,
    /// Distance band `[1 - eps, 1 + eps]` at the threshold.
    pub band: Option<[f64; 2]>,
    pub reference_epsilon: f64,
    pub r_at_reference: f64,
    /// Whether `r_of_eps(reference_epsilon) <= target_r`; measured, not assumed.
    pub reference_within_target: bool,
}

pub fn threshold_report(target_r: f64) -> ThresholdReport {
    let epsilon = eps_threshold(target_r);
    let reference = reference_epsilon();
    let r_ref = r_of_eps(reference).unwrap_or(f64::NAN);
    ThresholdReport {
        target_r,
        epsilon,
        band: epsilon.map(|e| [1.0 - e, 1.0 + e]),
        reference_epsilon: reference,
        r_at_reference: r_ref,
        reference_within_target: r_ref <= target_r,
    }
}

/// Search box for [`optimize_family`]: `(h, sigma, ell, slope)`.
pub const SEARCH_BOX: [(f64, f64); 4] = [(0.3, 0.8), (2.0, 5.0), (3.0, 8.0), (0.8, 2.0)];
/// Grid points per coordinate per round.
pub const GRID_POINTS: usize = 7;
/// Rounds of refinement; the grid span shrinks by 3 each round.
pub const ROUNDS: usize = 3;

#[derive(Debug, Clone, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OptimizeResult {
    pub scheme: StripScheme,
    pub r: f64,
    pub initial_r: f64,
    /// Certificates computed, excluding the check of the initial scheme.
    pub evaluations: u64,
}

fn params(s: &StripScheme) -> [f64; 4] {
    [s.h, s.sigma, s.ell, s.slope]
}

// smallest distance from a color image to the ends of the target interval
fn slack(rep: &CertificateReport) -> f64 {
    rep.cases
        .iter()
        .flat_map(|c| c.region.c_ranges.iter())
        .map(|c| (c.lo - rep.target.lo).min(rep.target.hi - c.hi))
        .fold(f64::INFINITY, f64::min)
}

/// Shrinking-grid coordinate search over `(h, sigma, ell, slope)` minimizing
/// `r = slope * ell` among certified schemes. Ties in `r` are broken toward
/// more certification slack. The evaluation order is fixed, so a larger
/// budget only extends the sequence and never yields a worse `r`.
pub fn optimize_family(eps: f64, init: &StripScheme, budget: u64) -> Result<OptimizeResult> {
    if init.epsilon != eps {
        return Err(Error::InvalidEpsilon(eps));
    }
    let first = verify_cases(init, DEFAULT_TOLERANCE)?;
    if !first.pass {
        return Err(Error::InfeasibleInit);
    }
    let mut best = *init;
    let mut best_slack = slack(&first);
    let mut used = 0u64;
    let mut span: [f64; 4] = SEARCH_BOX.map(|(lo, hi)| hi - lo);

    'search: for _ in 0..ROUNDS {
        for axis in 0..4 {
            let (lo, hi) = SEARCH_BOX[axis];
            let center = params(&best)[axis];
            for i in 0..GRID_POINTS {
                let t = i as f64 / (GRID_POINTS - 1) as f64 - 0.5;
                let value = (center + span[axis] * t).clamp(lo, hi);
                if value == center {
                    continue;
                }
                if used >= budget {
                    break 'search;
                }
                used += 1;
                let mut p = params(&best);
                p[axis] = value;
                let Ok(cand) = best.with_params(p[0], p[1], p[2], p[3]) else {
                    continue;
                };
                let Ok(rep) = verify_cases(&cand, DEFAULT_TOLERANCE) else {
                    continue;
                };
                if !rep.pass {
                    continue;
                }
                let s = slack(&rep);
                if cand.r < best.r || (cand.r == best.r && s > best_slack) {
                    best = cand;
                    best_slack = s;
                }
            }
        }
        for s in span.iter_mut() {
            *s /= 3.0;
        }
    }
    Ok(OptimizeResult {
        scheme: best,
        r: best.r,
        initial_r: init.r,
        evaluations: used,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn threshold_below_r0_is_none() {
        assert_eq!(eps_threshold(6.0), None);
        assert_eq!(eps_threshold(f64::NAN), None);
    }

    #[test]
    fn threshold_at_r0_is_zero() {
        assert_eq!(eps_threshold(r_of_eps(0.0).unwrap()), Some(0.0));
    }

    #[test]
    fn threshold_for_seven() {
        // 16 (1 + e)^2 = 9 (3 e^2 - 10 e + 3)  <=>  11 e^2 - 122 e + 11 = 0
        let root = (122.0 - libm::sqrt(122.0 * 122.0 - 4.0 * 11.0 * 11.0)) / 22.0;
        let e = eps_threshold(7.0).unwrap();
        assert!((e - root).abs() < 1e-9);
        assert!((e - 1.0 / 11.0).abs() < 1e-9);
    }

    #[test]
    fn reference_is_quadratic_root() {
        let e = reference_epsilon();
        assert!((23.0 * e * e - 106.0 * e + 11.0).abs() < 1e-12);
        assert!((e - 0.1062).abs() < 1e-4);
    }

    #[test]
    fn invalid_sweep_row() {
        let rows = eps_sweep(&[0.5, -0.1], 10, 1);
        assert!(rows
            .iter()
            .all(|r| r.r.is_none() && !r.certified && r.min_margin.is_none()));
    }

    #[test]
    fn zero_budget_returns_init() {
        let init = StripScheme::thm1();
        let out = optimize_family(0.0, &init, 0).unwrap();
        assert_eq!(out.scheme, init);
        assert_eq!(out.r, init.r);
        assert_eq!(out.evaluations, 0);
    }

    #[test]
    fn infeasible_init_rejected() {
        let t = StripScheme::thm1();
        let bad = t.with_params(t.h, 0.0, t.ell, t.slope).unwrap();
        assert_eq!(optimize_family(0.0, &bad, 10), Err(Error::InfeasibleInit));
    }
}
