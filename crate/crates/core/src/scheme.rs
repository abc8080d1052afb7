//! The strip-coloring family `c(x, y) = s * (x - sigma * floor_h(y)) mod ell`.
//!
//! The plane is cut into horizontal strips of height `h`. Inside a strip the
//! color is a linear ramp in `x` with slope `s` that wraps every `ell`, and
//! each strip is shifted right by `sigma * h` relative to the one below. The
//! coloring takes values on a circle of perimeter `r = s * ell`.

use crate::error::{Error, Result};
use crate::numerics::{floor_index, frac_unchecked};

/// Where a scheme's parameters came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Family {
    /// Unit distance graph, `r = 4 + 4/sqrt(3)`.
    Thm1,
    /// Distance band `[1 - eps, 1 + eps]`.
    Thm2,
    /// Free parameters, e.g. produced by the optimizer.
    Explicit,
}

#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Point {
    pub x: f64,
    pub y: f64,
}

impl Point {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn dist(self, other: Point) -> f64 {
        libm::hypot(self.x - other.x, self.y - other.y)
    }
}

/// A member of the strip-coloring family. Immutable once built.
#[derive(Debug, Clone, Copy, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct StripScheme {
    pub family: Family,
    pub epsilon: f64,
    /// Strip height.
    pub h: f64,
    /// Coefficient multiplying `floor_h(y)`; the per-strip shift is `sigma * h`.
    pub sigma: f64,
    /// Horizontal period.
    pub ell: f64,
    pub slope: f64,
    /// Circle perimeter, `slope * ell`.
    pub r: f64,
    /// `sqrt(3 eps^2 - 10 eps + 3) / 2`, the minimal horizontal reach of an
    /// edge that stays inside one strip.
    #[cfg_attr(feature = "serde", serde(skip))]
    pub a: f64,
}

fn band_discriminant(eps: f64) -> f64 {
    3.0 * eps * eps - 10.0 * eps + 3.0
}

fn check_epsilon(eps: f64) -> Result<()> {
    if !(eps.is_finite() && (0.0..1.0 / 3.0).contains(&eps)) || band_discriminant(eps) <= 0.0 {
        return Err(Error::InvalidEpsilon(eps));
    }
    Ok(())
}

impl StripScheme {
    /// The `r = 4 + 4*sqrt(3)/3` coloring of the unit distance graph.
    pub fn thm1() -> Self {
        let sqrt3 = libm::sqrt(3.0);
        let ell = 2.0 + 2.0 * sqrt3;
        let slope = 2.0 * sqrt3 / 3.0;
        Self {
            family: Family::Thm1,
            epsilon: 0.0,
            h: 0.5,
            sigma: 2.0 + sqrt3,
            ell,
            slope,
            r: slope * ell,
            a: sqrt3 / 2.0,
        }
    }

    /// The coloring for distances in `[1 - eps, 1 + eps]`.
    pub fn thm2(eps: f64) -> Result<Self> {
        check_epsilon(eps)?;
        let a = 0.5 * libm::sqrt(band_discriminant(eps));
        let reach = 1.0 + eps;
        let ell = 2.0 + 2.0 * eps + 4.0 * a;
        let slope = 1.0 / a;
        Ok(Self {
            family: Family::Thm2,
            epsilon: eps,
            h: reach / 2.0,
            sigma: (reach + a) * 2.0 / reach,
            ell,
            slope,
            r: slope * ell,
            a,
        })
    }

    pub fn explicit(h: f64, sigma: f64, ell: f64, slope: f64, eps: f64) -> Result<Self> {
        check_epsilon(eps)?;
        for (v, what) in [
            (h, "strip height must be positive"),
            (ell, "period must be positive"),
            (slope, "slope must be positive"),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(Error::InvalidParameter(what));
            }
        }
        if !sigma.is_finite() {
            return Err(Error::InvalidParameter("shift must be finite"));
        }
        Ok(Self {
            family: Family::Explicit,
            epsilon: eps,
            h,
            sigma,
            ell,
            slope,
            r: slope * ell,
            a: 0.5 * libm::sqrt(band_discriminant(eps)),
        })
    }

    /// Explicit scheme with new geometry and the same `epsilon`.
    pub fn with_params(&self, h: f64, sigma: f64, ell: f64, slope: f64) -> Result<Self> {
        Self::explicit(h, sigma, ell, slope, self.epsilon)
    }

    /// Horizontal displacement between consecutive strips.
    pub fn strip_shift(&self) -> f64 {
        self.sigma * self.h
    }

    /// Integer index of the strip containing `y`.
    pub fn strip_index(&self, y: f64) -> i64 {
        floor_index(y, self.h) as i64
    }

    pub fn color_at(&self, p: Point) -> f64 {
        let base = floor_index(p.y, self.h) * self.h;
        let c = self.slope * frac_unchecked(p.x - self.sigma * base, self.ell);
        if c >= self.r {
            self.r.next_down()
        } else {
            c
        }
    }

    /// Circular distance `min(d, r - d)` with `d = |c1 - c2|`; no range checks.
    pub fn separation(&self, c1: f64, c2: f64) -> f64 {
        let d = (c1 - c2).abs();
        d.min(self.r - d)
    }

    /// Circular separation minus one; the edge condition holds iff this is `>= 0`.
    pub fn circ_margin(&self, c1: f64, c2: f64) -> Result<f64> {
        for c in [c1, c2] {
            if !(0.0..self.r).contains(&c) {
                return Err(Error::InvalidColor { color: c, r: self.r });
            }
        }
        Ok(self.separation(c1, c2) - 1.0)
    }
}

/// Perimeter of the distance-band coloring as a function of `eps`.
pub fn r_of_eps(eps: f64) -> Result<f64> {
    check_epsilon(eps)?;
    Ok(4.0 + (4.0 + 4.0 * eps) / libm::sqrt(band_discriminant(eps)))
}

#[cfg(test)]
mod tests {
    use super::*;

    const SQRT3: f64 = 1.732_050_807_568_877_2;

    #[test]
    fn thm1_constants() {
        let s = StripScheme::thm1();
        assert!((s.r - (4.0 + 4.0 * SQRT3 / 3.0)).abs() < 1e-14);
        assert_eq!(s.r, s.slope * s.ell);
        assert!((s.strip_shift() - (1.0 + SQRT3 / 2.0)).abs() < 1e-15);
        assert!((s.r - 6.3094).abs() < 1e-4);
    }

    #[test]
    fn thm2_at_zero_matches_thm1() {
        let a = StripScheme::thm1();
        let b = StripScheme::thm2(0.0).unwrap();
        for (x, y) in [
            (a.h, b.h),
            (a.sigma, b.sigma),
            (a.ell, b.ell),
            (a.slope, b.slope),
            (a.r, b.r),
            (a.a, b.a),
        ] {
            assert!((x - y).abs() < 1e-12, "{x} vs {y}");
        }
    }

    #[test]
    fn thm2_at_one_eleventh_has_r_seven() {
        let s = StripScheme::thm2(1.0 / 11.0).unwrap();
        assert!((s.r - 7.0).abs() < 1e-12);
        assert!((s.a - 8.0 / 11.0).abs() < 1e-15);
    }

    #[test]
    fn epsilon_domain() {
        assert!(matches!(StripScheme::thm2(1.0 / 3.0), Err(Error::InvalidEpsilon(_))));
        assert!(matches!(StripScheme::thm2(-0.01), Err(Error::InvalidEpsilon(_))));
        assert!(matches!(StripScheme::thm2(f64::NAN), Err(Error::InvalidEpsilon(_))));
        assert!(r_of_eps(0.34).is_err());
    }

    #[test]
    fn color_examples() {
        let s = StripScheme::thm1();
        assert_eq!(s.color_at(Point::new(0.0, 0.0)), 0.0);
        assert!((s.color_at(Point::new(1.0, 0.0)) - 2.0 * SQRT3 / 3.0).abs() < 1e-14);
        assert!((s.color_at(Point::new(0.0, 0.5)) - (3.0 + 2.0 * SQRT3 / 3.0)).abs() < 1e-14);
    }

    #[test]
    fn strip_boundary_belongs_to_upper_strip() {
        let s = StripScheme::thm1();
        assert_eq!(s.strip_index(0.5), 1);
        assert_eq!(s.strip_index(0.5f64.next_down()), 0);
        assert_eq!(s.strip_index(-1e-300), -1);
    }

    #[test]
    fn margin_examples() {
        let s = StripScheme::thm1();
        assert_eq!(s.circ_margin(0.0, 1.0).unwrap(), 0.0);
        let m = s.circ_margin(0.2, 6.2).unwrap();
        assert!((m - (s.r - 6.0 - 1.0)).abs() < 1e-12);
        assert!((m + 0.6906).abs() < 1e-4);
        assert_eq!(s.circ_margin(2.5, 2.5).unwrap(), -1.0);
        assert!(matches!(s.circ_margin(-0.1, 1.0), Err(Error::InvalidColor { .. })));
        assert!(s.circ_margin(1.0, s.r).is_err());
    }

    #[test]
    fn r_of_eps_values() {
        assert!((r_of_eps(0.0).unwrap() - (4.0 + 4.0 * SQRT3 / 3.0)).abs() < 1e-14);
        // closed form 4 + 4.2 / sqrt(2.5075)
        assert!((r_of_eps(0.05).unwrap() - 6.652_337_707_392_8).abs() < 1e-12);
    }

    #[test]
    fn explicit_validation() {
        assert!(StripScheme::explicit(0.0, 1.0, 1.0, 1.0, 0.0).is_err());
        assert!(StripScheme::explicit(0.5, 1.0, -1.0, 1.0, 0.0).is_err());
        assert!(StripScheme::explicit(0.5, f64::INFINITY, 1.0, 1.0, 0.0).is_err());
        let s = StripScheme::explicit(0.5, 0.0, 5.0, 1.2, 0.0).unwrap();
        assert_eq!(s.family, Family::Explicit);
        assert_eq!(s.r, 6.0);
    }
}
