//! Geometric rounding and the closed-form approximation-ratio functions.
//!
//! With a single random offset `r` in (0,1], an edge at level `i` (so
//! `alpha^(i+r) <= w < alpha^(i+r+1)`) is accounted at the rounded weight
//! `alpha^(i+r)`. The expected loss of that rounding is
//! `(alpha-1)/(alpha ln alpha)`, which trades the plain-mode factor
//! `2a/(a-1) + 2a` (minimum 8 at alpha = 2) for an expected factor
//! `2a^2 ln a/(a-1)^2` (minimum ~4.9108 near alpha = 3.512).

use crate::config::{Mode, RoundingConfig};
use crate::error::EngineError;
use crate::graph::level_of;

/// Rounded weight `alpha^(level + r)` of `w`. Rounded mode only.
pub fn rounded_weight(w: f64, cfg: &RoundingConfig) -> Result<f64, EngineError> {
    if cfg.mode != Mode::Rounded {
        return Err(EngineError::InvalidConfig(
            "rounded_weight requires rounded mode".into(),
        ));
    }
    let level = level_of(w, cfg)?;
    Ok(cfg.alpha.powf(level as f64 + cfg.r))
}

/// `E_r[w_r(e)/w(e)] = (alpha-1)/(alpha ln alpha)`.
pub fn expected_rounding_factor(alpha: f64) -> Result<f64, EngineError> {
    if !(alpha > 1.0) || !alpha.is_finite() {
        return Err(EngineError::InvalidConfig(format!(
            "alpha must be > 1, got {alpha}"
        )));
    }
    Ok((alpha - 1.0) / (alpha * alpha.ln()))
}

/// Plain-mode worst-case ratio `2a/(a-1) + 2a`.
pub fn plain_ratio(alpha: f64) -> f64 {
    2.0 * alpha / (alpha - 1.0) + 2.0 * alpha
}

/// Rounded-mode expected ratio `2a^2 ln a / (a-1)^2`.
pub fn rounded_ratio(alpha: f64) -> f64 {
    2.0 * alpha * alpha * alpha.ln() / ((alpha - 1.0) * (alpha - 1.0))
}

/// Golden-section minimization of [`rounded_ratio`] over alpha in (1, 100].
pub fn optimize_rounded_ratio() -> (f64, f64) {
    let (mut lo, mut hi) = (1.0 + 1e-9, 100.0);
    let inv_phi = (5f64.sqrt() - 1.0) / 2.0;
    let mut a = hi - inv_phi * (hi - lo);
    let mut b = lo + inv_phi * (hi - lo);
    let mut fa = rounded_ratio(a);
    let mut fb = rounded_ratio(b);
    while hi - lo > 1e-6 {
        if fa < fb {
            hi = b;
            b = a;
            fb = fa;
            a = hi - inv_phi * (hi - lo);
            fa = rounded_ratio(a);
        } else {
            lo = a;
            a = b;
            fa = fb;
            b = lo + inv_phi * (hi - lo);
            fb = rounded_ratio(b);
        }
    }
    let alpha = 0.5 * (lo + hi);
    (alpha, rounded_ratio(alpha))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn rounded_weight_example() {
        let cfg = RoundingConfig::rounded(2.0, Some(0.5), 0).unwrap();
        let wr = rounded_weight(5.0, &cfg).unwrap();
        assert!((wr - 2f64.powf(1.5)).abs() < 1e-12);
    }

    #[test]
    fn rounded_weight_fixed_point_at_boundary() {
        let cfg = RoundingConfig::rounded(2.0, Some(0.25), 0).unwrap();
        let w = 2f64.powf(3.25); // exactly alpha^(i+r)
        assert_eq!(rounded_weight(w, &cfg).unwrap(), w);
    }

    #[test]
    fn rounded_weight_requires_rounded_mode() {
        let cfg = RoundingConfig::plain(2.0).unwrap();
        assert!(rounded_weight(5.0, &cfg).is_err());
    }

    #[test]
    fn rounded_weight_never_exceeds_weight() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..10_000 {
            let w = rng.gen_range(1e-3..1e6);
            let r = 1.0 - rng.gen::<f64>();
            let cfg = RoundingConfig::rounded(2.0, Some(r), 0).unwrap();
            assert!(rounded_weight(w, &cfg).unwrap() <= w);
        }
    }

    #[test]
    fn expected_factor_values() {
        assert!((expected_rounding_factor(2.0).unwrap() - 1.0 / (2.0 * 2f64.ln())).abs() < 1e-12);
        let e = std::f64::consts::E;
        assert!((expected_rounding_factor(e).unwrap() - (e - 1.0) / e).abs() < 1e-12);
        // limit alpha -> 1+ is 1
        assert!((expected_rounding_factor(1.0001).unwrap() - 1.0).abs() < 1e-3);
        assert!(expected_rounding_factor(1.0).is_err());
    }

    #[test]
    fn expected_factor_matches_monte_carlo() {
        let alpha = 2.0;
        let w = 13.7;
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let samples = 200_000;
        let mut sum = 0.0;
        for _ in 0..samples {
            let r = 1.0 - rng.gen::<f64>();
            let cfg = RoundingConfig::rounded(alpha, Some(r), 0).unwrap();
            sum += rounded_weight(w, &cfg).unwrap() / w;
        }
        let mean = sum / samples as f64;
        assert!((mean - expected_rounding_factor(alpha).unwrap()).abs() < 2e-3);
    }

    #[test]
    fn closed_form_ratios() {
        assert_eq!(plain_ratio(2.0), 8.0);
        assert!((rounded_ratio(2.0) - 8.0 * 2f64.ln()).abs() < 1e-12);
        let (alpha, ratio) = optimize_rounded_ratio();
        assert!((alpha - 3.512).abs() < 0.01, "alpha* = {alpha}");
        assert!((ratio - 4.9108).abs() < 0.001, "ratio* = {ratio}");
    }
}
