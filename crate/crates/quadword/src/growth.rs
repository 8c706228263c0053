//! Growth functions and growth invariants of the monomial algebra of a word:
//! filtration dimensions, fitted growth exponents, the growth-constant proxy,
//! and the complexity bound checks for the constructed limit word.
//!
//! All dimension values are exact integers; floating point appears only in
//! fitted estimates and in transcendental bound values.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::factor_index::ComplexityProfile;
use crate::word::FiniteWord;

/// `dim(V^n) = 1 + p(1) + ... + p(n)` for the standard frame spanned by 1
/// and the letters.
pub fn growth_function(profile: &ComplexityProfile, n: usize) -> Result<u64> {
    if n > profile.n_trust() {
        return Err(Error::FactorHorizon {
            requested: n as u64,
            trusted: profile.n_trust() as u64,
        });
    }
    let mut acc = 1u64;
    for j in 1..=n {
        acc = acc
            .checked_add(profile.p(j))
            .ok_or(Error::Overflow("growth_function"))?;
    }
    Ok(acc)
}

/// `dims[n] = dim(V^n)` for `0 <= n <= n_max`.
pub fn growth_series(profile: &ComplexityProfile, n_max: usize) -> Result<Vec<u64>> {
    if n_max > profile.n_trust() {
        return Err(Error::FactorHorizon {
            requested: n_max as u64,
            trusted: profile.n_trust() as u64,
        });
    }
    let mut dims = Vec::with_capacity(n_max + 1);
    let mut acc = 1u64;
    dims.push(acc);
    for j in 1..=n_max {
        acc = acc
            .checked_add(profile.p(j))
            .ok_or(Error::Overflow("growth_series"))?;
        dims.push(acc);
    }
    Ok(dims)
}

/// Least-squares slope of `log dim(V^n)` against `log n` over a window; the
/// growth exponent of the algebra at desk scale.
pub fn estimate_gk(profile: &ComplexityProfile, n_lo: usize, n_hi: usize) -> Result<f64> {
    if n_lo < 4 || n_hi < 4 * n_lo {
        return Err(Error::InsufficientWindow {
            lo: n_lo,
            hi: n_hi,
            reason: "need n_hi >= 4 * n_lo >= 16".into(),
        });
    }
    let dims = growth_series(profile, n_hi)?;
    let points: Vec<(f64, f64)> = (n_lo..=n_hi)
        .map(|n| ((n as f64).ln(), (dims[n] as f64).ln()))
        .collect();
    Ok(least_squares_slope(&points))
}

fn least_squares_slope(points: &[(f64, f64)]) -> f64 {
    let n = points.len() as f64;
    let sx: f64 = points.iter().map(|p| p.0).sum();
    let sy: f64 = points.iter().map(|p| p.1).sum();
    let sxx: f64 = points.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = points.iter().map(|p| p.0 * p.1).sum();
    (n * sxy - sx * sy) / (n * sxx - sx * sx)
}

/// Finite-horizon proxy for the growth constant: the maximum of
/// `dim(V^n) / n^2` over the top decade of the window, standard frame only.
pub fn estimate_growth_constant(profile: &ComplexityProfile, n_hi: usize) -> Result<f64> {
    if n_hi < 100 {
        return Err(Error::InsufficientWindow {
            lo: 0,
            hi: n_hi,
            reason: "growth-constant proxy needs n_hi >= 100".into(),
        });
    }
    let dims = growth_series(profile, n_hi)?;
    let lo = n_hi / 10;
    Ok((lo..=n_hi)
        .map(|n| dims[n] as f64 / (n as f64 * n as f64))
        .fold(f64::MIN, f64::max))
}

/// `floor(2 C)`: the budget on prime quotients of growth-exponent one for an
/// algebra whose word count is eventually below `C n^2`.
pub fn prime_budget(growth_constant: f64) -> u64 {
    (2.0 * growth_constant).floor() as u64
}

/// One bound check `actual <= bound` at a fixed length.
#[derive(Debug, Clone, Serialize)]
pub struct BoundCheck {
    pub n: usize,
    pub bound: f64,
    pub actual: u64,
    pub pass: bool,
}

/// The complexity bound rows `p(n) <= 100 (n+1) (log2 n)^2` for
/// `2 <= n <= n_max`, with no anchor data required.
pub fn complexity_bound_checks(profile: &ComplexityProfile, n_max: usize) -> Vec<BoundCheck> {
    let n_max = n_max.min(profile.n_max());
    (2..=n_max)
        .map(|n| {
            let log2n = (n as f64).log2();
            let bound = 100.0 * (n as f64 + 1.0) * log2n * log2n;
            let actual = profile.p(n);
            BoundCheck {
                n,
                bound,
                actual,
                pass: (actual as f64) <= bound,
            }
        })
        .collect()
}

/// Outcome of the two-sided dimension check
/// `C(n+1,2) <= dim(V^n) <= 1 + p(1) + sum of 100 (j+1) (log2 j)^2`,
/// clamped to the trusted horizon.
#[derive(Debug, Clone, Serialize)]
pub struct SandwichReport {
    pub checked_to: usize,
    pub all_pass: bool,
    pub first_failure: Option<usize>,
}

pub fn growth_sandwich_check(profile: &ComplexityProfile, n_max: usize) -> Result<SandwichReport> {
    let checked_to = n_max.min(profile.n_trust());
    let dims = growth_series(profile, checked_to)?;
    let p1 = if profile.n_max() >= 1 { profile.p(1) } else { 0 } as f64;
    let mut upper_sum = 0f64;
    let mut first_failure = None;
    #[allow(clippy::needless_range_loop)]
    for n in 1..=checked_to {
        if n >= 2 {
            let log2n = (n as f64).log2();
            upper_sum += 100.0 * (n as f64 + 1.0) * log2n * log2n;
        }
        let lower = (n as u64) * (n as u64 + 1) / 2;
        let upper = 1.0 + p1 + upper_sum;
        if !(lower <= dims[n] && (dims[n] as f64) <= upper) {
            first_failure = Some(n);
            break;
        }
    }
    Ok(SandwichReport {
        checked_to,
        all_pass: first_failure.is_none(),
        first_failure,
    })
}

/// Bound checks for the limit word's complexity profile.
#[derive(Debug, Clone, Serialize)]
pub struct UBoundReport {
    pub checks: Vec<BoundCheck>,
    pub all_pass: bool,
    pub n_trust: usize,
    /// max over n of `f(n) / (100 (n+1) log2(n)^2)`.
    pub max_ratio_bound: f64,
    /// Tightness against the intermediate `12 d^2 (n+1)` count, reported
    /// without being asserted.
    pub max_ratio_12d2: f64,
    /// Tightness against the intermediate `2(n+1) + 16 d^2 n` count,
    /// reported without being asserted.
    pub max_ratio_16d2: f64,
    /// Stage index checks `d(n) <= floor(log2 n) + 1`.
    pub depth_ok: bool,
    /// True when the anchor list extends past `n_max`, so every `d(n)` is
    /// the true stage index rather than a truncation.
    pub depth_complete: bool,
}

/// Check `f(n) <= 100 (n+1) (log2 n)^2` for `2 <= n <= n_max`, and that the
/// stage index `d(n) = max { d : |W_d| <= n }` stays within `floor(log2 n) + 1`.
pub fn check_u_bounds(
    profile: &ComplexityProfile,
    anchors: &[FiniteWord],
    n_max: usize,
) -> Result<UBoundReport> {
    if n_max < 2 {
        return Err(Error::InsufficientWindow {
            lo: 2,
            hi: n_max,
            reason: "bound checks start at n = 2".into(),
        });
    }
    let n_max = n_max.min(profile.n_max());
    let mut checks = Vec::with_capacity(n_max - 1);
    let mut depth_ok = true;
    let mut max_ratio_bound = 0f64;
    let mut max_ratio_12 = 0f64;
    let mut max_ratio_16 = 0f64;
    let mut d = 0usize;
    for n in 2..=n_max {
        while d < anchors.len() && anchors[d].len() <= n {
            d += 1;
        }
        // d anchors have length <= n
        let log2n = (n as f64).log2();
        let bound = 100.0 * (n as f64 + 1.0) * log2n * log2n;
        let actual = profile.p(n);
        let pass = (actual as f64) <= bound;
        max_ratio_bound = max_ratio_bound.max(actual as f64 / bound);
        if d >= 1 {
            let dd = (d * d) as f64;
            max_ratio_12 = max_ratio_12.max(actual as f64 / (12.0 * dd * (n as f64 + 1.0)));
            max_ratio_16 =
                max_ratio_16.max(actual as f64 / (2.0 * (n as f64 + 1.0) + 16.0 * dd * n as f64));
        }
        if d > (n as f64).log2().floor() as usize + 1 {
            depth_ok = false;
        }
        checks.push(BoundCheck {
            n,
            bound,
            actual,
            pass,
        });
    }
    let all_pass = checks.iter().all(|c| c.pass) && depth_ok;
    Ok(UBoundReport {
        checks,
        all_pass,
        n_trust: profile.n_trust(),
        max_ratio_bound,
        max_ratio_12d2: max_ratio_12,
        max_ratio_16d2: max_ratio_16,
        depth_ok,
        depth_complete: anchors.last().is_some_and(|a| a.len() > n_max),
    })
}

/// Growth profile of one word algebra over a fitted window.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthReport {
    pub dims: Vec<(usize, u64)>,
    pub gk_estimate: Option<f64>,
    pub gc_estimate: Option<f64>,
    /// min and max of `dim(V^n) / n^2` over the window.
    pub c_lower: f64,
    pub c_upper: f64,
    pub window: (usize, usize),
    pub n_trust: usize,
}

/// Bundle dimensions and fitted estimates for `n` up to `n_max`, clamped to
/// the trusted horizon.
pub fn growth_report(profile: &ComplexityProfile, n_max: usize) -> Result<GrowthReport> {
    let n_hi = n_max.min(profile.n_trust());
    if n_hi < 1 {
        return Err(Error::InsufficientWindow {
            lo: 1,
            hi: n_hi,
            reason: "no trusted lengths".into(),
        });
    }
    let dims = growth_series(profile, n_hi)?;
    let n_lo = (n_hi / 10).max(4);
    let gk_estimate = if n_hi >= 4 * n_lo {
        Some(estimate_gk(profile, n_lo, n_hi)?)
    } else {
        None
    };
    let gc_estimate = if n_hi >= 100 {
        Some(estimate_growth_constant(profile, n_hi)?)
    } else {
        None
    };
    let lo = n_lo.min(n_hi);
    let ratios: Vec<f64> = (lo..=n_hi)
        .map(|n| dims[n] as f64 / (n as f64 * n as f64))
        .collect();
    Ok(GrowthReport {
        dims: dims.iter().enumerate().map(|(n, &d)| (n, d)).collect(),
        gk_estimate,
        gc_estimate,
        c_lower: ratios.iter().copied().fold(f64::MAX, f64::min),
        c_upper: ratios.iter().copied().fold(f64::MIN, f64::max),
        window: (lo, n_hi),
        n_trust: profile.n_trust(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::factor_index::FactorIndex;
    use crate::sturmian::fibonacci_stream;
    use crate::word::{Alphabet, PeriodicStream};

    fn sturmian_profile(n_max: usize) -> ComplexityProfile {
        let f = fibonacci_stream();
        FactorIndex::index_stream(&f, 40 * n_max as u64)
            .unwrap()
            .profile(n_max)
    }

    fn constant_profile(n_max: usize) -> ComplexityProfile {
        let c = PeriodicStream::constant(Alphabet::binary(), 0).unwrap();
        FactorIndex::index_stream(&c, 40 * n_max as u64)
            .unwrap()
            .profile(n_max)
    }

    #[test]
    fn growth_function_examples() {
        let p = sturmian_profile(10);
        assert_eq!(growth_function(&p, 3).unwrap(), 10);
        let c = constant_profile(10);
        assert_eq!(growth_function(&c, 5).unwrap(), 6);
    }

    #[test]
    fn growth_function_respects_trust() {
        let p = sturmian_profile(10);
        assert!(growth_function(&p, 11).is_err());
    }

    #[test]
    fn sturmian_growth_closed_form() {
        let p = sturmian_profile(120);
        let dims = growth_series(&p, 120).unwrap();
        for n in 1..=120u64 {
            assert_eq!(dims[n as usize], 1 + n * (n + 3) / 2);
        }
    }

    #[test]
    fn growth_is_strictly_increasing() {
        let p = sturmian_profile(80);
        let dims = growth_series(&p, 80).unwrap();
        for n in 1..dims.len() {
            assert!(dims[n] > dims[n - 1]);
        }
    }

    #[test]
    fn gk_estimates() {
        let p = sturmian_profile(500);
        let slope = estimate_gk(&p, 50, 500).unwrap();
        assert!((slope - 2.0).abs() < 0.1, "slope {slope}");

        let c = constant_profile(500);
        let slope = estimate_gk(&c, 50, 500).unwrap();
        assert!((slope - 1.0).abs() < 0.1, "slope {slope}");

        assert!(estimate_gk(&p, 3, 500).is_err());
        assert!(estimate_gk(&p, 50, 120).is_err());
    }

    #[test]
    fn growth_constant_proxy() {
        let p = sturmian_profile(500);
        let gc = estimate_growth_constant(&p, 500).unwrap();
        assert!((gc - 0.5).abs() < 0.05, "gc {gc}");
        assert_eq!(prime_budget(gc), 1);

        let c = constant_profile(500);
        let gc = estimate_growth_constant(&c, 500).unwrap();
        assert!(gc < 0.05);
        assert!(estimate_growth_constant(&p, 50).is_err());
    }

    #[test]
    fn sturmian_bound_checks_pass() {
        // Even the base word satisfies the limit word's complexity bound.
        let p = sturmian_profile(200);
        let f = fibonacci_stream();
        let anchors = crate::construction::anchors_to_length(&f, 200, 2).unwrap();
        let report = check_u_bounds(&p, &anchors, 200).unwrap();
        assert!(report.all_pass);
        assert!(report.depth_complete);
        assert_eq!(report.checks[0].n, 2);
        assert_eq!(report.checks[0].bound, 300.0);
    }

    #[test]
    fn growth_report_bundles() {
        let p = sturmian_profile(500);
        let r = growth_report(&p, 500).unwrap();
        let gk = r.gk_estimate.unwrap();
        assert!((gk - 2.0).abs() < 0.1);
        let gc = r.gc_estimate.unwrap();
        assert!((0.45..=0.55).contains(&gc));
        assert!(r.c_lower > 0.4 && r.c_upper < 0.7);
        assert_eq!(r.dims.len(), 501);
    }
}
