//! Adaptive integration of the transport field and ensemble statistics.
//!
//! The field satisfies d(log F)/dt = 1 exactly, so trajectories are
//! integrated on the fixed interval [0, log(r/|F(z0)|)]; the endpoint then
//! lands on |F| = r up to integrator tolerance. A Dormand-Prince 4(5) pair
//! with step-size control does the stepping, re-solving the constrained
//! linear system at every stage evaluation.

use num_complex::Complex64;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::bipoly::BiPoly;
use crate::exact::rat::Rat;
use crate::tameness::numeric::{GermNumeric, C64};

use super::config::FlowConfig;
use super::field::vector_field;

#[derive(Debug, Clone, Serialize)]
pub struct TrajectorySample {
    pub t: f64,
    pub z: [[f64; 2]; 2],
    pub arg_f: f64,
    pub log_abs_f: f64,
    pub norm: f64,
    pub gamma: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct Trajectory {
    pub samples: Vec<TrajectorySample>,
    pub endpoint: [[f64; 2]; 2],
    /// Recorded diagnosis when integration stopped abnormally; the sample
    /// prefix remains available above.
    pub failure: Option<String>,
}

impl Trajectory {
    pub fn endpoint_c(&self) -> [C64; 2] {
        [
            C64::new(self.endpoint[0][0], self.endpoint[0][1]),
            C64::new(self.endpoint[1][0], self.endpoint[1][1]),
        ]
    }
}

fn sample_at(gn: &GermNumeric, t: f64, z: [C64; 2]) -> TrajectorySample {
    let fv = gn.big_f(z);
    TrajectorySample {
        t,
        z: [[z[0].re, z[0].im], [z[1].re, z[1].im]],
        arg_f: fv.arg(),
        log_abs_f: fv.norm().ln(),
        norm: (z[0].norm_sqr() + z[1].norm_sqr()).sqrt(),
        gamma: gn.gamma(z),
    }
}

/// psi(z) = (log|F(z)|, |z|^2), the diagnostic plane of the transport.
pub fn psi(gn: &GermNumeric, z: [C64; 2]) -> (f64, f64) {
    (gn.big_f(z).norm().ln(), z[0].norm_sqr() + z[1].norm_sqr())
}

// Dormand-Prince coefficients.
const A: [[f64; 6]; 6] = [
    [1.0 / 5.0, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
        0.0,
        0.0,
    ],
    [
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
        0.0,
    ],
    [
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
const B5: [f64; 7] = [
    35.0 / 384.0,
    0.0,
    500.0 / 1113.0,
    125.0 / 192.0,
    -2187.0 / 6784.0,
    11.0 / 84.0,
    0.0,
];
const B4: [f64; 7] = [
    5179.0 / 57600.0,
    0.0,
    7571.0 / 16695.0,
    393.0 / 640.0,
    -92097.0 / 339200.0,
    187.0 / 2100.0,
    1.0 / 40.0,
];

/// Transport along the field from a tube-fiber point until |F| reaches r.
pub fn transport(gn: &GermNumeric, z0: [C64; 2], cfg: &FlowConfig) -> Result<Trajectory> {
    let f0 = gn.big_f(z0).norm();
    if !f0.is_finite() || f0 <= 0.0 {
        return Err(Error::Numerical("seed on a zero or pole of F".into()));
    }
    let n0 = (z0[0].norm_sqr() + z0[1].norm_sqr()).sqrt();
    if n0 < 0.5 * cfg.eps_prime || n0 > 1.5 * cfg.eps {
        return Err(Error::Numerical(format!(
            "seed norm {n0} outside the shell [eps', eps]"
        )));
    }
    let t_end = (cfg.r / f0).ln();
    let mut samples = vec![sample_at(gn, 0.0, z0)];
    if t_end <= 0.0 {
        // already on |F| = r: accepted only on the outer sphere
        let ok = (n0 - cfg.eps).abs() <= 1e-6 * cfg.eps;
        return Ok(Trajectory {
            samples,
            endpoint: [[z0[0].re, z0[0].im], [z0[1].re, z0[1].im]],
            failure: if ok {
                None
            } else {
                Some("zero-length trajectory off the outer sphere".into())
            },
        });
    }

    let rhs = |z: [C64; 2]| -> Result<[C64; 2]> { Ok(vector_field(gn, z, cfg)?.v) };
    let mut z = z0;
    let mut t = 0.0f64;
    let mut h = t_end / 64.0;
    let mut failure = None;
    'outer: while t < t_end {
        if h < 1e-13 * t_end {
            failure = Some("integrator stall: step underflow".into());
            break;
        }
        h = h.min(t_end - t);
        let mut k: Vec<[C64; 2]> = Vec::with_capacity(7);
        match rhs(z) {
            Ok(v) => k.push(v),
            Err(e) => {
                failure = Some(format!("field evaluation failed: {e}"));
                break;
            }
        }
        for s in 0..6 {
            let mut zs = z;
            for (j, kj) in k.iter().enumerate() {
                zs[0] += kj[0] * (A[s][j] * h);
                zs[1] += kj[1] * (A[s][j] * h);
            }
            match rhs(zs) {
                Ok(v) => k.push(v),
                Err(_) => {
                    h *= 0.5;
                    continue 'outer;
                }
            }
        }
        let mut z5 = z;
        let mut z4 = z;
        for j in 0..7 {
            z5[0] += k[j][0] * (B5[j] * h);
            z5[1] += k[j][1] * (B5[j] * h);
            z4[0] += k[j][0] * (B4[j] * h);
            z4[1] += k[j][1] * (B4[j] * h);
        }
        let scale = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt().max(1e-12);
        let err = ((z5[0] - z4[0]).norm_sqr() + (z5[1] - z4[1]).norm_sqr()).sqrt()
            / (cfg.rk_tol * scale);
        if err <= 1.0 {
            t += h;
            z = z5;
            samples.push(sample_at(gn, t, z));
            let zn = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
            if zn > cfg.eps {
                failure = Some("trajectory exited the eps-ball".into());
                break;
            }
        }
        let fac = if err > 0.0 {
            (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
        } else {
            5.0
        };
        h *= fac;
    }
    Ok(Trajectory {
        samples,
        endpoint: [[z[0].re, z[0].im], [z[1].re, z[1].im]],
        failure,
    })
}

/// Find a seed with |F(z)| = delta and |z| = radius by damped minimum-norm
/// Newton from a random start.
pub fn find_seed(
    gn: &GermNumeric,
    delta: f64,
    radius: f64,
    rng: &mut ChaCha8Rng,
) -> Option<[C64; 2]> {
    find_two_constraint(
        gn,
        radius,
        move |gn, z| {
            let f = gn.big_f(z).norm();
            if !f.is_finite() || f <= 0.0 {
                return None;
            }
            Some((f / delta).ln())
        },
        move |_gn, z| {
            let n = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
            Some((n / radius).ln())
        },
        rng,
    )
}

/// Find a seed on the gamma shell gamma = eta0^2 with |F| pinned inside the
/// given range (the target value is sampled per attempt).
pub fn find_tube_seed(
    gn: &GermNumeric,
    eta0: f64,
    scale: f64,
    f_range: (f64, f64),
    rng: &mut ChaCha8Rng,
) -> Option<[C64; 2]> {
    for _ in 0..64 {
        let u = (rng.next_u64() as f64) / (u64::MAX as f64);
        let (llo, lhi) = (f_range.0.ln(), f_range.1.ln());
        let f_target = (llo + 0.1 * (lhi - llo) + 0.8 * (lhi - llo) * u).exp();
        let z = find_two_constraint(
            gn,
            scale,
            move |gn, z| {
                let g = gn.gamma(z);
                if g <= 0.0 {
                    return None;
                }
                Some((g / (eta0 * eta0)).ln())
            },
            move |gn, z| {
                let f = gn.big_f(z).norm();
                if !f.is_finite() || f <= 0.0 {
                    return None;
                }
                Some((f / f_target).ln())
            },
            rng,
        );
        if let Some(z) = z {
            let f = gn.big_f(z).norm();
            if f.is_finite() && f > f_range.0 && f < f_range.1 {
                return Some(z);
            }
        }
    }
    None
}

fn find_two_constraint(
    gn: &GermNumeric,
    scale: f64,
    c1: impl Fn(&GermNumeric, [C64; 2]) -> Option<f64>,
    c2: impl Fn(&GermNumeric, [C64; 2]) -> Option<f64>,
    rng: &mut ChaCha8Rng,
) -> Option<[C64; 2]> {
    'starts: for _ in 0..64 {
        let mut z = random_point(rng, scale);
        let h_of = |z: [C64; 2]| -> Option<[f64; 2]> { Some([c1(gn, z)?, c2(gn, z)?]) };
        let mut h = match h_of(z) {
            Some(h) => h,
            None => continue,
        };
        for _ in 0..160 {
            let hn = (h[0] * h[0] + h[1] * h[1]).sqrt();
            if hn < 1e-12 {
                return Some(z);
            }
            let eps = 1e-7 * scale;
            let mut jac = [[0.0f64; 4]; 2];
            for v in 0..4 {
                let mut zp = z;
                let mut zm = z;
                bump(&mut zp, v, eps);
                bump(&mut zm, v, -eps);
                let (hp, hm) = match (h_of(zp), h_of(zm)) {
                    (Some(a), Some(b)) => (a, b),
                    _ => continue 'starts,
                };
                for e in 0..2 {
                    jac[e][v] = (hp[e] - hm[e]) / (2.0 * eps);
                }
            }
            // min-norm: step = J^T (J J^T)^{-1} (-h)
            let a = (0..4).map(|v| jac[0][v] * jac[0][v]).sum::<f64>();
            let b = (0..4).map(|v| jac[0][v] * jac[1][v]).sum::<f64>();
            let d = (0..4).map(|v| jac[1][v] * jac[1][v]).sum::<f64>();
            let det = a * d - b * b;
            if det.abs() < 1e-300 {
                continue 'starts;
            }
            let s0 = (-h[0] * d + h[1] * b) / det;
            let s1 = (h[0] * b - h[1] * a) / det;
            let mut improved = false;
            let mut tstep = 1.0;
            for _ in 0..24 {
                let mut zn = z;
                for v in 0..4 {
                    bump(&mut zn, v, tstep * (jac[0][v] * s0 + jac[1][v] * s1));
                }
                if let Some(hnew) = h_of(zn) {
                    if (hnew[0] * hnew[0] + hnew[1] * hnew[1]).sqrt() < hn {
                        z = zn;
                        h = hnew;
                        improved = true;
                        break;
                    }
                }
                tstep *= 0.5;
            }
            if !improved {
                continue 'starts;
            }
        }
    }
    None
}

fn random_point(rng: &mut ChaCha8Rng, scale: f64) -> [C64; 2] {
    let mut g = [0.0f64; 4];
    for v in g.iter_mut() {
        let mut s = 0.0;
        for _ in 0..6 {
            s += (rng.next_u64() as f64) / (u64::MAX as f64) - 0.5;
        }
        *v = s;
    }
    let n = (g.iter().map(|x| x * x).sum::<f64>()).sqrt().max(1e-9);
    let sc = scale / n;
    [C64::new(g[0] * sc, g[1] * sc), C64::new(g[2] * sc, g[3] * sc)]
}

fn bump(z: &mut [C64; 2], v: usize, d: f64) {
    match v {
        0 => z[0] += C64::new(d, 0.0),
        1 => z[0] += C64::new(0.0, d),
        2 => z[1] += C64::new(d, 0.0),
        _ => z[1] += C64::new(0.0, d),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnsembleReport {
    pub requested: usize,
    pub completed: usize,
    pub failures: usize,
    pub max_argf_drift: f64,
    pub norm_strictly_increasing: bool,
    pub max_dlogf_deviation: f64,
    pub max_endpoint_rel_err: f64,
    pub max_gamma_rel_drift: f64,
    pub endpoints_pairwise_distinct: bool,
}

/// Run `count` transports from seeds on |F| = delta, |z| = eps'.
pub fn ensemble(
    f: &BiPoly<Rat>,
    g: &BiPoly<Rat>,
    cfg: &FlowConfig,
    count: usize,
) -> Result<(EnsembleReport, Vec<Trajectory>)> {
    let gn = GermNumeric::new(f, g);
    let mut seeds = vec![];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for _ in 0..count * 4 {
        if seeds.len() >= count {
            break;
        }
        if let Some(z) = find_seed(&gn, cfg.delta, cfg.eps_prime, &mut rng) {
            // avoid duplicate seeds
            let dup = seeds.iter().any(|s: &[C64; 2]| {
                ((s[0] - z[0]).norm_sqr() + (s[1] - z[1]).norm_sqr()).sqrt()
                    < 1e-6 * cfg.eps_prime
            });
            if !dup {
                seeds.push(z);
            }
        }
    }
    if seeds.len() < count {
        return Err(Error::Numerical(format!(
            "found only {} of {count} requested seeds",
            seeds.len()
        )));
    }
    let trajectories: Vec<Trajectory> = crate::parallel::maybe_par_map(&seeds, |&z0| {
        transport(&gn, z0, cfg).unwrap_or_else(|e| Trajectory {
            samples: vec![],
            endpoint: [[z0[0].re, z0[0].im], [z0[1].re, z0[1].im]],
            failure: Some(format!("{e}")),
        })
    });
    let report = summarize(&gn, cfg, &trajectories, count);
    Ok((report, trajectories))
}

/// Run transports seeded on a gamma shell inside the eta-tube.
pub fn tube_ensemble(
    f: &BiPoly<Rat>,
    g: &BiPoly<Rat>,
    cfg: &FlowConfig,
    count: usize,
) -> Result<(EnsembleReport, Vec<Trajectory>)> {
    let gn = GermNumeric::new(f, g);
    let eta0 = 0.9 * cfg.eta;
    let mut seeds = vec![];
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed ^ 0x7b3);
    for _ in 0..count * 8 {
        if seeds.len() >= count {
            break;
        }
        if let Some(z) =
            find_tube_seed(&gn, eta0, cfg.eps_prime, (2.0 * cfg.delta, 0.5 * cfg.r), &mut rng)
        {
            let n = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
            if n < 0.5 * cfg.eps_prime || n > 1.5 * cfg.eps {
                continue;
            }
            let dup = seeds.iter().any(|s: &[C64; 2]| {
                ((s[0] - z[0]).norm_sqr() + (s[1] - z[1]).norm_sqr()).sqrt() < 1e-8
            });
            if !dup {
                seeds.push(z);
            }
        }
    }
    if seeds.is_empty() {
        return Err(Error::Numerical("no tube seeds found".into()));
    }
    let trajectories: Vec<Trajectory> = crate::parallel::maybe_par_map(&seeds, |&z0| {
        transport(&gn, z0, cfg).unwrap_or_else(|e| Trajectory {
            samples: vec![],
            endpoint: [[z0[0].re, z0[0].im], [z0[1].re, z0[1].im]],
            failure: Some(format!("{e}")),
        })
    });
    let report = summarize(&gn, cfg, &trajectories, seeds.len());
    Ok((report, trajectories))
}

fn summarize(
    _gn: &GermNumeric,
    cfg: &FlowConfig,
    trajectories: &[Trajectory],
    requested: usize,
) -> EnsembleReport {
    let mut max_argf = 0.0f64;
    let mut monotone = true;
    let mut max_dlog = 0.0f64;
    let mut max_end = 0.0f64;
    let mut max_gamma = 0.0f64;
    let mut failures = 0;
    for tr in trajectories {
        if tr.failure.is_some() {
            failures += 1;
            continue;
        }
        let s = &tr.samples;
        if s.len() < 2 {
            continue;
        }
        let mut drift = 0.0;
        for w in s.windows(2) {
            let mut d = w[1].arg_f - w[0].arg_f;
            while d > std::f64::consts::PI {
                d -= 2.0 * std::f64::consts::PI;
            }
            while d < -std::f64::consts::PI {
                d += 2.0 * std::f64::consts::PI;
            }
            drift += d.abs();
            if w[1].norm <= w[0].norm {
                monotone = false;
            }
            let dt = w[1].t - w[0].t;
            if dt > 1e-9 {
                let rate = (w[1].log_abs_f - w[0].log_abs_f) / dt;
                max_dlog = max_dlog.max((rate - 1.0).abs());
            }
        }
        max_argf = max_argf.max(drift);
        let endf = s.last().unwrap().log_abs_f.exp();
        max_end = max_end.max((endf - cfg.r).abs() / cfg.r);
        let g0 = s[0].gamma;
        for smp in s {
            max_gamma = max_gamma.max((smp.gamma - g0).abs() / g0);
        }
    }
    // endpoint injectivity on the sampled fibers
    let mut distinct = true;
    let done: Vec<&Trajectory> = trajectories.iter().filter(|t| t.failure.is_none()).collect();
    for i in 0..done.len() {
        for j in i + 1..done.len() {
            let a = done[i].endpoint_c();
            let b = done[j].endpoint_c();
            let d = ((a[0] - b[0]).norm_sqr() + (a[1] - b[1]).norm_sqr()).sqrt();
            if d < 1e-9 {
                distinct = false;
            }
        }
    }
    EnsembleReport {
        requested,
        completed: trajectories.len() - failures,
        failures,
        max_argf_drift: max_argf,
        norm_strictly_increasing: monotone,
        max_dlogf_deviation: max_dlog,
        max_endpoint_rel_err: max_end,
        max_gamma_rel_drift: max_gamma,
        endpoints_pairwise_distinct: distinct,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly;
    use crate::flow::config::{config_for, FlowOverrides};

    fn p(s: &str) -> BiPoly<Rat> {
        parse_poly(s).unwrap()
    }

    #[test]
    fn hopf_single_transport() {
        let f = p("x");
        let g = p("y");
        let gn = GermNumeric::new(&f, &g);
        let cfg = config_for(1.0, &FlowOverrides::default());
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let z0 = find_seed(&gn, cfg.delta, cfg.eps_prime, &mut rng).unwrap();
        let tr = transport(&gn, z0, &cfg).unwrap();
        assert!(tr.failure.is_none(), "{:?}", tr.failure);
        let endf = gn.big_f(tr.endpoint_c()).norm();
        assert!(
            (endf - cfg.r).abs() < 1e-6 * cfg.r,
            "endpoint |F| = {endf}"
        );
        // norms strictly increase sample to sample
        for w in tr.samples.windows(2) {
            assert!(w[1].norm > w[0].norm);
        }
    }

    #[test]
    fn hopf_small_ensemble() {
        let (rep, _):
            (EnsembleReport, Vec<Trajectory>) =
            ensemble(&p("x"), &p("y"), &config_for(1.0, &FlowOverrides::default()), 8)
                .unwrap();
        assert_eq!(rep.failures, 0);
        assert!(rep.max_argf_drift < 1e-6, "arg drift {}", rep.max_argf_drift);
        assert!(rep.norm_strictly_increasing);
        assert!(rep.max_dlogf_deviation < 1e-4);
        assert!(rep.max_endpoint_rel_err < 1e-6);
        assert!(rep.endpoints_pairwise_distinct);
    }

    #[test]
    fn psi_image_follows_the_polyline() {
        let f = p("x");
        let g = p("y");
        let gn = GermNumeric::new(&f, &g);
        // a narrow blend zone keeps the trajectory image close to the
        // ideal two-segment polyline
        let ov = FlowOverrides {
            xi: Some(1e-7),
            ..Default::default()
        };
        let cfg = config_for(1.0, &ov);
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let z0 = find_seed(&gn, cfg.delta, cfg.eps_prime, &mut rng).unwrap();
        let tr = transport(&gn, z0, &cfg).unwrap();
        assert!(tr.failure.is_none());
        // polyline through (log delta, y0), slope 2 b1 then 2 b2 after rho
        let y0 = tr.samples[0].norm * tr.samples[0].norm;
        let x0 = cfg.delta.ln();
        let xbreak = cfg.rho.ln();
        // crossing the |z|-blend zone of width 2 xi at slope >= 2 b1 smears
        // the kink by at most 4 eps'' xi (b2 - b1)/b1 in the y-coordinate
        let dev_allow = 8.0 * cfg.eps_dprime * cfg.xi * (cfg.b2 - cfg.b1) / cfg.b1
            + 1e-6 * cfg.eps_prime0 * cfg.eps_prime0;
        for s in &tr.samples {
            let x = s.log_abs_f;
            let expect = if x <= xbreak {
                y0 + 2.0 * cfg.b1 * (x - x0)
            } else {
                y0 + 2.0 * cfg.b1 * (xbreak - x0) + 2.0 * cfg.b2 * (x - xbreak)
            };
            let got = s.norm * s.norm;
            assert!(
                (got - expect).abs() <= dev_allow,
                "psi deviation {} at x = {x} (allowed {dev_allow})",
                (got - expect).abs()
            );
        }
        // endpoint of the curve: (log r, ~eps'_0^2)
        let last = tr.samples.last().unwrap();
        assert!((last.log_abs_f - cfg.r.ln()).abs() < 1e-6);
        assert!((last.norm - cfg.eps_prime0).abs() < 0.02 * cfg.eps_prime0);
    }

    #[test]
    fn short_example_transport() {
        let f = p("x^3+y^2");
        let g = p("x^2+y^3");
        let gn = GermNumeric::new(&f, &g);
        let cfg = config_for(1.0, &FlowOverrides::default());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let z0 = find_seed(&gn, cfg.delta, cfg.eps_prime, &mut rng).unwrap();
        let tr = transport(&gn, z0, &cfg).unwrap();
        assert!(tr.failure.is_none(), "{:?}", tr.failure);
        let endf = gn.big_f(tr.endpoint_c()).norm();
        assert!((endf - cfg.r).abs() < 1e-6 * cfg.r);
    }

    #[test]
    fn tube_confinement_small() {
        let f = p("x^3+y^2");
        let g = p("x^2+y^3");
        let ov = FlowOverrides {
            eta: Some(1e-4),
            ..Default::default()
        };
        let cfg = config_for(1.0, &ov);
        let (rep, trs) = tube_ensemble(&f, &g, &cfg, 4).unwrap();
        assert!(rep.completed > 0);
        assert!(
            rep.max_gamma_rel_drift < 1e-4,
            "gamma drift {}",
            rep.max_gamma_rel_drift
        );
        for tr in &trs {
            if tr.failure.is_none() {
                assert!(!tr.samples.is_empty());
            }
        }
    }

}
