//! Construction constants for the transport flow.
//!
//! Defaults follow a ratio ladder under the outer radius `r`: each scale is
//! a tenth of the next, the inner sphere is half of its cap, and the tube
//! scale sits another factor of five below. The two slopes b_1, b_2 make the
//! (log|F|, |z|^2)-image of a trajectory the fixed two-segment polyline.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::bipoly::BiPoly;
use crate::exact::rat::Rat;
use crate::tameness::semitame;

#[derive(Debug, Clone, Serialize)]
pub struct FlowConfig {
    pub r: f64,
    pub eps: f64,
    pub delta: f64,
    pub eps_prime0: f64,
    pub eps_prime: f64,
    pub eps_dprime: f64,
    pub eta: f64,
    pub xi: f64,
    pub rho: f64,
    pub b1: f64,
    pub b2: f64,
    /// Misalignment below which the field falls back to the normalized
    /// gradient; blending ends 10% above it.
    pub align_threshold: f64,
    pub rk_tol: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, Default)]
pub struct FlowOverrides {
    pub eta: Option<f64>,
    pub eps_dprime: Option<f64>,
    pub rho: Option<f64>,
    pub xi: Option<f64>,
    pub align_threshold: Option<f64>,
    pub rk_tol: Option<f64>,
    pub seed: Option<u64>,
}

/// Build the constants; refuses when the pair is not semitame (the
/// construction presupposes the bifurcation hypothesis).
pub fn make_config(
    f: &BiPoly<Rat>,
    g: &BiPoly<Rat>,
    r: f64,
    overrides: &FlowOverrides,
) -> Result<FlowConfig> {
    if !(r > 0.0) {
        return Err(Error::DegenerateInput("r must be positive".into()));
    }
    let verdict = semitame(f, g)?;
    if !verdict.value {
        return Err(Error::FlowRefused(
            "pair is not semitame; the transport construction does not apply".into(),
        ));
    }
    let cfg = config_for(r, overrides);
    if !(0.0 < cfg.b1 && cfg.b1 < cfg.b2) {
        return Err(Error::DegenerateInput(
            "overrides violate the slope ordering 0 < b1 < b2".into(),
        ));
    }
    Ok(cfg)
}

/// The ladder itself, exposed for tests that need a config without the
/// semitame gate.
pub fn config_for(r: f64, overrides: &FlowOverrides) -> FlowConfig {
    let eps = r / 10.0;
    let delta = eps / 10.0;
    let eps_prime0 = delta / 10.0;
    let eps_prime = eps_prime0 / 2.0;
    let eta = overrides.eta.unwrap_or(eps_prime / 50.0);
    let eps_dprime = overrides
        .eps_dprime
        .unwrap_or((eps_prime + eps_prime0) / 2.0);
    let rho = overrides.rho.unwrap_or(0.75 * r);
    let xi = overrides.xi.unwrap_or(eps_dprime / 10.0);
    let b1 = (eps_dprime * eps_dprime - eps_prime * eps_prime)
        / (2.0 * (rho.ln() - delta.ln()));
    let b2 = (eps_prime0 * eps_prime0 - eps_dprime * eps_dprime)
        / (2.0 * (r.ln() - rho.ln()));
    FlowConfig {
        r,
        eps,
        delta,
        eps_prime0,
        eps_prime,
        eps_dprime,
        eta,
        xi,
        rho,
        b1,
        b2,
        align_threshold: overrides.align_threshold.unwrap_or(1e-4),
        rk_tol: overrides.rk_tol.unwrap_or(1e-11),
        seed: overrides.seed.unwrap_or(0xC0FFEE),
    }
}

impl FlowConfig {
    /// Smooth monotone profile equal to b1 below eps_dprime - xi and to b2
    /// above eps_dprime + xi.
    pub fn b_profile(&self, x: f64) -> f64 {
        let lo = self.eps_dprime - self.xi;
        let hi = self.eps_dprime + self.xi;
        if x <= lo {
            return self.b1;
        }
        if x >= hi {
            return self.b2;
        }
        let t = (x - lo) / (hi - lo);
        let s = mollifier(t) / (mollifier(t) + mollifier(1.0 - t));
        self.b1 + (self.b2 - self.b1) * s
    }
}

fn mollifier(t: f64) -> f64 {
    if t <= 0.0 {
        0.0
    } else {
        (-1.0 / t).exp()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly;

    #[test]
    fn default_ladder_instantiation() {
        let cfg = config_for(1.0, &FlowOverrides::default());
        assert_eq!(cfg.eps, 0.1);
        assert_eq!(cfg.delta, 0.01);
        assert_eq!(cfg.eps_prime0, 1e-3);
        assert_eq!(cfg.eps_prime, 5e-4);
        assert!((cfg.eta - 1e-5).abs() < 1e-18);
        assert!(cfg.b1 > 0.0 && cfg.b1 < cfg.b2);
    }

    #[test]
    fn b1_formula_with_overrides() {
        // eps'' = 2 eps', rho = 3r/4: direct evaluation of the formula
        let ov = FlowOverrides {
            eps_dprime: Some(1e-3), // 2 * eps_prime with r = 1
            rho: Some(0.75),
            ..Default::default()
        };
        let cfg = config_for(1.0, &ov);
        let expect = (1e-6 - 2.5e-7) / (2.0 * (0.75f64.ln() - 0.01f64.ln()));
        assert!((cfg.b1 - expect).abs() < 1e-18 * expect.abs().max(1.0));
        // on the default ladder, eps'' = 2 eps' sits exactly on eps'_0, which
        // breaks the strict slope ordering; the gated constructor rejects it
        let f = parse_poly("x^3+y^2").unwrap();
        let g = parse_poly("x^2+y^3").unwrap();
        assert!(matches!(
            make_config(&f, &g, 1.0, &ov),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn profile_is_monotone_and_clamped() {
        let cfg = config_for(1.0, &FlowOverrides::default());
        assert_eq!(cfg.b_profile(cfg.eps_prime), cfg.b1);
        assert_eq!(cfg.b_profile(cfg.eps_prime0), cfg.b2);
        let mut prev = 0.0;
        for k in 0..=100 {
            let x = cfg.eps_prime + (cfg.eps_prime0 - cfg.eps_prime) * (k as f64) / 100.0;
            let b = cfg.b_profile(x);
            assert!(b >= prev - 1e-18);
            prev = b;
        }
    }

    #[test]
    fn non_semitame_refused() {
        let f = parse_poly("y^2-x^3").unwrap();
        let g = parse_poly("y^2-2*x^3").unwrap();
        assert!(matches!(
            make_config(&f, &g, 1.0, &FlowOverrides::default()),
            Err(Error::FlowRefused(_))
        ));
    }

    #[test]
    fn semitame_pair_accepted() {
        let f = parse_poly("x^3+y^2").unwrap();
        let g = parse_poly("x^2+y^3").unwrap();
        assert!(make_config(&f, &g, 1.0, &FlowOverrides::default()).is_ok());
    }
}
