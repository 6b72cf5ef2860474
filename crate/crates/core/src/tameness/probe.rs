//! Numeric probes: the rank matrix A(z) on the suspension, and sampling of
//! the non-transversality locus M(F) on shrinking spheres.

use num_complex::Complex64;
use num_traits::Zero;
use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};
use serde::Serialize;

use crate::error::Result;
use crate::exact::bipoly::BiPoly;
use crate::exact::rat::Rat;

use super::numeric::{herm_inner, norm, singular_values_3, GermNumeric, C64};

/// A(z) evaluated at a point of C^3 (suspension: f, g constant in z_3).
#[derive(Debug, Clone)]
pub struct AMatrixResult {
    pub matrix: [[C64; 3]; 3],
    pub singular_values: [f64; 3],
    pub rank: u32,
    /// Set when z lies on the indeterminacy set f = g = 0.
    pub on_indeterminacy: bool,
}

/// Rows: conj(df_k) f + g conj(dg_k); z_k; conj(df_k g - dg_k f).
pub fn a_matrix(
    f: &BiPoly<Rat>,
    g: &BiPoly<Rat>,
    z: [C64; 3],
    rank_tol: f64,
) -> AMatrixResult {
    let gn = GermNumeric::new(f, g);
    let zz = [z[0], z[1]];
    let fv = gn.f_of(zz);
    let gv = gn.g_of(zz);
    let df = [gn.fx.eval(z[0], z[1]), gn.fy.eval(z[0], z[1]), C64::zero()];
    let dg = [gn.gx.eval(z[0], z[1]), gn.gy.eval(z[0], z[1]), C64::zero()];
    let mut m = [[C64::zero(); 3]; 3];
    for k in 0..3 {
        m[0][k] = df[k].conj() * fv + gv * dg[k].conj();
        m[1][k] = z[k];
        m[2][k] = (df[k] * gv - dg[k] * fv).conj();
    }
    let sv = singular_values_3(&m);
    let rank = if sv[0] <= 0.0 {
        0
    } else {
        sv.iter().filter(|&&s| s > rank_tol * sv[0]).count() as u32
    };
    AMatrixResult {
        matrix: m,
        singular_values: sv,
        rank,
        on_indeterminacy: fv.norm() < 1e-12 && gv.norm() < 1e-12,
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ProbeSample {
    pub radius: f64,
    pub z: [[f64; 2]; 2],
    pub residual: f64,
    pub f_abs: f64,
    pub f_arg: f64,
    pub arg_lambda: f64,
}

#[derive(Debug, Clone)]
pub struct ProbeConfig {
    pub starts: usize,
    pub residual_tol: f64,
    pub seed: u64,
    pub max_iter: usize,
}

impl Default for ProbeConfig {
    fn default() -> Self {
        ProbeConfig {
            starts: 64,
            residual_tol: 1e-6,
            seed: 0xC0FFEE,
            max_iter: 120,
        }
    }
}

/// Alignment defect of grad log F against z, in [0, 1]: zero exactly on M(F).
fn misalignment(gn: &GermNumeric, z: [C64; 2]) -> Option<(f64, Complex64)> {
    let fv = gn.f_of(z);
    let gv = gn.g_of(z);
    if fv.norm() < 1e-140 || gv.norm() < 1e-140 {
        return None;
    }
    let grad = gn.grad_log_f(z);
    let gnorm = norm(&grad);
    if !gnorm.is_finite() || gnorm == 0.0 {
        return None;
    }
    let znorm2 = z[0].norm_sqr() + z[1].norm_sqr();
    let lambda = herm_inner(&grad, &z) / znorm2;
    let dev = [grad[0] - lambda * z[0], grad[1] - lambda * z[1]];
    Some((norm(&dev) / gnorm, lambda))
}

/// Sample approximate M(F) points on the sphere of each radius by multi-start
/// Gauss-Newton on the alignment system; accepted samples have residual
/// below the tolerance. Non-convergence is reported by simply producing
/// fewer (possibly zero) samples for that radius.
pub fn m_locus_probe(
    f: &BiPoly<Rat>,
    g: &BiPoly<Rat>,
    radii: &[f64],
    cfg: &ProbeConfig,
) -> Result<Vec<Vec<ProbeSample>>> {
    let gn = GermNumeric::new(f, g);
    let mut out = vec![];
    for (ri, &r) in radii.iter().enumerate() {
        let runs: Vec<Option<ProbeSample>> = crate::parallel::maybe_par_map(
            &(0..cfg.starts).collect::<Vec<usize>>(),
            |&s| {
                let mut rng =
                    ChaCha8Rng::seed_from_u64(cfg.seed ^ ((ri as u64) << 32) ^ s as u64);
                let z0 = random_sphere_point(&mut rng, r);
                refine(&gn, z0, r, cfg)
            },
        );
        let mut samples: Vec<ProbeSample> = vec![];
        for s in runs.into_iter().flatten() {
            // deduplicate nearby solutions, keeping the first found
            let dup = samples.iter().any(|t| {
                let d2: f64 = (0..2)
                    .map(|k| {
                        let dz = C64::new(
                            t.z[k][0] - s.z[k][0],
                            t.z[k][1] - s.z[k][1],
                        );
                        dz.norm_sqr()
                    })
                    .sum();
                d2.sqrt() < 1e-5 * r
            });
            if !dup {
                samples.push(s);
            }
        }
        out.push(samples);
    }
    Ok(out)
}

fn random_sphere_point(rng: &mut ChaCha8Rng, r: f64) -> [C64; 2] {
    // four approximately gaussian reals via sums of uniforms
    let mut g = [0.0f64; 4];
    for v in g.iter_mut() {
        let mut s = 0.0;
        for _ in 0..6 {
            s += (rng.next_u64() as f64) / (u64::MAX as f64) - 0.5;
        }
        *v = s;
    }
    let n = (g.iter().map(|x| x * x).sum::<f64>()).sqrt().max(1e-9);
    let sc = r / n;
    [
        C64::new(g[0] * sc, g[1] * sc),
        C64::new(g[2] * sc, g[3] * sc),
    ]
}

/// Gauss-Newton on H(z) = (Re c, Im c, |z|^2 - r^2) where
/// c = normalized alignment form; minimum-norm step via the normal equations.
fn refine(
    gn: &GermNumeric,
    mut z: [C64; 2],
    r: f64,
    cfg: &ProbeConfig,
) -> Option<ProbeSample> {
    let h_of = |z: [C64; 2]| -> Option<[f64; 3]> {
        let fv = gn.f_of(z);
        let gv = gn.g_of(z);
        if fv.norm() < 1e-140 || gv.norm() < 1e-140 {
            return None;
        }
        let grad = gn.grad_log_f(z);
        let gnorm = norm(&grad);
        if !gnorm.is_finite() || gnorm == 0.0 {
            return None;
        }
        let znorm = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
        let c = (grad[0] * z[1] - grad[1] * z[0]) / (gnorm * znorm);
        Some([c.re, c.im, (znorm * znorm - r * r) / (r * r)])
    };
    let mut h = h_of(z)?;
    for _ in 0..cfg.max_iter {
        let hn = (h[0] * h[0] + h[1] * h[1] + h[2] * h[2]).sqrt();
        if hn < 1e-13 {
            break;
        }
        // numeric Jacobian, 3x4 over the real coordinates
        let eps = 1e-7 * r;
        let mut jac = [[0.0f64; 4]; 3];
        for v in 0..4 {
            let mut zp = z;
            let mut zm = z;
            bump(&mut zp, v, eps);
            bump(&mut zm, v, -eps);
            let hp = h_of(zp)?;
            let hm = h_of(zm)?;
            for e in 0..3 {
                jac[e][v] = (hp[e] - hm[e]) / (2.0 * eps);
            }
        }
        // minimum-norm solve: step = J^T (J J^T)^{-1} (-H)
        let mut jjt = [[0.0f64; 3]; 3];
        for a in 0..3 {
            for b in 0..3 {
                jjt[a][b] = (0..4).map(|v| jac[a][v] * jac[b][v]).sum();
            }
        }
        let rhs = [-h[0], -h[1], -h[2]];
        let sol = solve3(&jjt, &rhs)?;
        let mut step = [0.0f64; 4];
        for (v, s) in step.iter_mut().enumerate() {
            *s = (0..3).map(|e| jac[e][v] * sol[e]).sum();
        }
        // damped update
        let mut t = 1.0f64;
        let mut accepted = false;
        for _ in 0..24 {
            let mut zn = z;
            for v in 0..4 {
                bump(&mut zn, v, t * step[v]);
            }
            if let Some(hnew) = h_of(zn) {
                let hnn =
                    (hnew[0] * hnew[0] + hnew[1] * hnew[1] + hnew[2] * hnew[2]).sqrt();
                if hnn < hn {
                    z = zn;
                    h = hnew;
                    accepted = true;
                    break;
                }
            }
            t *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    // final acceptance by the specified residual
    let (res, lambda) = misalignment(gn, z)?;
    let sphere_err = ((z[0].norm_sqr() + z[1].norm_sqr()).sqrt() - r).abs() / r;
    if res < cfg.residual_tol && sphere_err < 1e-9 {
        let fv = gn.big_f(z);
        Some(ProbeSample {
            radius: r,
            z: [[z[0].re, z[0].im], [z[1].re, z[1].im]],
            residual: res,
            f_abs: fv.norm(),
            f_arg: fv.arg(),
            arg_lambda: lambda.arg(),
        })
    } else {
        None
    }
}

fn bump(z: &mut [C64; 2], v: usize, d: f64) {
    match v {
        0 => z[0] += C64::new(d, 0.0),
        1 => z[0] += C64::new(0.0, d),
        2 => z[1] += C64::new(d, 0.0),
        _ => z[1] += C64::new(0.0, d),
    }
}

fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for c in 0..3 {
        let piv = (c..3).max_by(|&x, &y| {
            m[x][c].abs().partial_cmp(&m[y][c].abs()).unwrap()
        })?;
        if m[piv][c].abs() < 1e-300 {
            return None;
        }
        m.swap(c, piv);
        let p = m[c][c];
        for j in c..4 {
            m[c][j] /= p;
        }
        for i in 0..3 {
            if i != c {
                let f = m[i][c];
                for j in c..4 {
                    m[i][j] -= f * m[c][j];
                }
            }
        }
    }
    Some([m[0][3], m[1][3], m[2][3]])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly;

    fn p(s: &str) -> BiPoly<Rat> {
        parse_poly(s).unwrap()
    }

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    #[test]
    fn suspension_rank_pattern() {
        // (x^2, y^3): full rank off the axes, drop on x = 0
        let f = p("x^2");
        let g = p("y^3");
        let full = a_matrix(&f, &g, [c(1.0), c(1.0), c(1.0)], 1e-8);
        assert_eq!(full.rank, 3);
        let drop = a_matrix(&f, &g, [c(0.0), c(1.0), c(1.0)], 1e-8);
        assert!(drop.rank < 3);
    }

    #[test]
    fn rank_at_origin() {
        let f = p("x^3+y^2");
        let g = p("x^2+y^3");
        let m = a_matrix(&f, &g, [c(0.0), c(0.0), c(0.0)], 1e-8);
        assert!(m.rank <= 1);
        assert!(m.on_indeterminacy);
    }

    #[test]
    fn monomial_pencils_have_empty_m_locus() {
        // grad log(x/y) pairs with z to zero identically: alignment is
        // impossible and no samples are accepted
        let samples = m_locus_probe(
            &p("x"),
            &p("y"),
            &[0.1, 0.01],
            &ProbeConfig {
                starts: 16,
                ..Default::default()
            },
        )
        .unwrap();
        assert!(samples.iter().all(|s| s.is_empty()));
    }

    #[test]
    fn short_example_probe_finds_aligned_points() {
        let cfg = ProbeConfig {
            starts: 48,
            ..Default::default()
        };
        let samples =
            m_locus_probe(&p("x^3+y^2"), &p("x^2+y^3"), &[0.1, 0.05], &cfg).unwrap();
        let total: usize = samples.iter().map(|s| s.len()).sum();
        assert!(total > 0, "expected aligned samples on the nondegenerate pair");
        for batch in &samples {
            for s in batch {
                assert!(s.residual < 1e-6);
            }
        }
    }

    #[test]
    fn probe_is_deterministic() {
        let cfg = ProbeConfig {
            starts: 24,
            ..Default::default()
        };
        let a = m_locus_probe(&p("x^3+y^2"), &p("x^2+y^3"), &[0.1], &cfg).unwrap();
        let b = m_locus_probe(&p("x^3+y^2"), &p("x^2+y^3"), &[0.1], &cfg).unwrap();
        assert_eq!(a.len(), b.len());
        for (x, y) in a[0].iter().zip(b[0].iter()) {
            assert_eq!(x.z, y.z);
        }
    }
}
