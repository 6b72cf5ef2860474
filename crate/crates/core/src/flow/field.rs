//! The constrained vector field: hermitian pairing +1 against grad log F,
//! prescribed radial pairing off the tube, tangency to the gamma shells
//! inside it, with a normalized-gradient fallback near the aligned locus.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tameness::numeric::{herm_inner, norm, GermNumeric, C64};

use super::config::FlowConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Region {
    /// Plain two-condition solve.
    Transverse,
    /// Smooth mix of the solve and the gradient fallback.
    Blend,
    /// Normalized-gradient fallback near the aligned locus.
    Aligned,
    /// Tube regime: tangency to the gamma shell replaces the radial value.
    Tube,
}

#[derive(Debug, Clone)]
pub struct FieldEval {
    pub v: [C64; 2],
    pub region: Region,
    /// |<v, grad log F> - 1|
    pub residual_i: f64,
    /// |<v, z> - b(|z|)| when condition (ii) is active
    pub residual_ii: Option<f64>,
    /// |Re<v, grad gamma>| when the tube condition is active
    pub residual_iv: Option<f64>,
    pub re_uz_positive: bool,
}

/// Evaluate the field at z.
pub fn vector_field(gn: &GermNumeric, z: [C64; 2], cfg: &FlowConfig) -> Result<FieldEval> {
    let grad = gn.grad_log_f(z);
    let gn2 = norm(&grad);
    if !gn2.is_finite() || gn2 == 0.0 {
        return Err(Error::Numerical("gradient undefined at point".into()));
    }
    let znorm = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
    let b = cfg.b_profile(znorm);
    let gamma = gn.gamma(z);
    let in_tube = gamma <= cfg.eta * cfg.eta;

    // misalignment and the gradient fallback
    let lambda = herm_inner(&grad, &z) / (znorm * znorm);
    let dev = [grad[0] - lambda * z[0], grad[1] - lambda * z[1]];
    let misalign = norm(&dev) / gn2;
    let u = [grad[0] / (gn2 * gn2), grad[1] / (gn2 * gn2)];
    let re_uz_positive = herm_inner(&u, &z).re > 0.0;

    let eval = |v: [C64; 2], region: Region, want_ii: bool, want_iv: bool| {
        let ri = (herm_inner(&v, &grad) - Complex64::new(1.0, 0.0)).norm();
        let rii = if want_ii {
            Some((herm_inner(&v, &z) - Complex64::new(b, 0.0)).norm())
        } else {
            None
        };
        let riv = if want_iv {
            let gg = gn.grad_gamma(z);
            Some(herm_inner(&v, &gg).re.abs())
        } else {
            None
        };
        FieldEval {
            v,
            region,
            residual_i: ri,
            residual_ii: rii,
            residual_iv: riv,
            re_uz_positive,
        }
    };

    if in_tube {
        let v = solve_tube(gn, z, &grad, b)?;
        return Ok(eval(v, Region::Tube, false, true));
    }

    let thr = cfg.align_threshold;
    if misalign <= thr {
        if !re_uz_positive {
            return Err(Error::Numerical(
                "aligned fallback with non-positive radial pairing".into(),
            ));
        }
        return Ok(eval(u, Region::Aligned, false, false));
    }
    let v2 = solve_two(&grad, &z, b).ok_or_else(|| {
        Error::Numerical("two-condition solve singular off the aligned locus".into())
    })?;
    if misalign <= 1.1 * thr {
        // smooth weight across the transition shell of relative width 10%
        let t = (misalign - thr) / (0.1 * thr);
        let s = smooth01(t);
        let v = [
            u[0] * (1.0 - s) + v2[0] * s,
            u[1] * (1.0 - s) + v2[1] * s,
        ];
        return Ok(eval(v, Region::Blend, false, false));
    }
    Ok(eval(v2, Region::Transverse, true, false))
}

fn smooth01(t: f64) -> f64 {
    let t = t.clamp(0.0, 1.0);
    let m = |x: f64| if x <= 0.0 { 0.0 } else { (-1.0 / x).exp() };
    m(t) / (m(t) + m(1.0 - t))
}

/// Exact 2x2 complex solve of <v, G> = 1, <v, z> = b.
fn solve_two(grad: &[C64; 2], z: &[C64; 2], b: f64) -> Option<[C64; 2]> {
    // rows: conj(G), conj(z)
    let a11 = grad[0].conj();
    let a12 = grad[1].conj();
    let a21 = z[0].conj();
    let a22 = z[1].conj();
    let det = a11 * a22 - a12 * a21;
    if det.norm() < 1e-300 {
        return None;
    }
    let r1 = Complex64::new(1.0, 0.0);
    let r2 = Complex64::new(b, 0.0);
    let v0 = (r1 * a22 - a12 * r2) / det;
    let v1 = (a11 * r2 - r1 * a21) / det;
    Some([v0, v1])
}

/// Tube solve: condition (i) exactly (two real equations), tangency to the
/// gamma shell exactly (one real equation), and the radial condition (ii)
/// in least squares over the remaining degree of freedom. In two complex
/// variables the full set (i)+(ii)+(iv) is overdetermined; this follows the
/// construction's tube-side compromise.
fn solve_tube(gn: &GermNumeric, z: [C64; 2], grad: &[C64; 2], b: f64) -> Result<[C64; 2]> {
    let gg = gn.grad_gamma(z);
    // real 3x4 system over v = (re v1, im v1, re v2, im v2)
    // <v, G> = sum v_k conj(G_k): Re and Im rows; Re<v, gg> row.
    let mut c = [[0.0f64; 4]; 3];
    let mut d = [0.0f64; 3];
    // Re<v,G> = 1
    c[0] = [grad[0].re, grad[0].im, grad[1].re, grad[1].im];
    d[0] = 1.0;
    // Im<v,G> = 0: Im((a+ib)(c-id)) = bc - ad
    c[1] = [-grad[0].im, grad[0].re, -grad[1].im, grad[1].re];
    d[1] = 0.0;
    // Re<v, gg> = 0
    c[2] = [gg[0].re, gg[0].im, gg[1].re, gg[1].im];
    d[2] = 0.0;
    // minimum-norm particular solution via C^T (C C^T)^{-1} d
    let mut cct = [[0.0f64; 3]; 3];
    for i in 0..3 {
        for j in 0..3 {
            cct[i][j] = (0..4).map(|k| c[i][k] * c[j][k]).sum();
        }
    }
    let sol = solve3(&cct, &d).ok_or(Error::ItameViolationSample)?;
    let mut v0 = [0.0f64; 4];
    for (k, vv) in v0.iter_mut().enumerate() {
        *vv = (0..3).map(|i| c[i][k] * sol[i]).sum();
    }
    // kernel direction: orthogonalize the standard basis against the rows
    let mut rows: Vec<[f64; 4]> = c.to_vec();
    gram_schmidt(&mut rows);
    let mut n = None;
    for e in 0..4 {
        let mut cand = [0.0f64; 4];
        cand[e] = 1.0;
        for r in &rows {
            let d: f64 = (0..4).map(|k| cand[k] * r[k]).sum();
            for k in 0..4 {
                cand[k] -= d * r[k];
            }
        }
        let nn: f64 = cand.iter().map(|x| x * x).sum::<f64>().sqrt();
        if nn > 1e-9 {
            for x in cand.iter_mut() {
                *x /= nn;
            }
            n = Some(cand);
            break;
        }
    }
    let n = n.ok_or(Error::ItameViolationSample)?;
    // minimize |<v0 + t n, z> - b|^2 over real t
    let vc = |v: &[f64; 4]| [C64::new(v[0], v[1]), C64::new(v[2], v[3])];
    let p = herm_inner(&vc(&v0), &z) - Complex64::new(b, 0.0);
    let q = herm_inner(&vc(&n), &z);
    let t = if q.norm_sqr() > 1e-300 {
        -(p * q.conj()).re / q.norm_sqr()
    } else {
        0.0
    };
    let v = [v0[0] + t * n[0], v0[1] + t * n[1], v0[2] + t * n[2], v0[3] + t * n[3]];
    Ok(vc(&v))
}

fn gram_schmidt(rows: &mut Vec<[f64; 4]>) {
    let mut out: Vec<[f64; 4]> = vec![];
    for r in rows.iter() {
        let mut v = *r;
        for o in &out {
            let d: f64 = (0..4).map(|k| v[k] * o[k]).sum();
            for k in 0..4 {
                v[k] -= d * o[k];
            }
        }
        let n: f64 = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if n > 1e-12 {
            for x in v.iter_mut() {
                *x /= n;
            }
            out.push(v);
        }
    }
    *rows = out;
}

fn solve3(a: &[[f64; 3]; 3], b: &[f64; 3]) -> Option<[f64; 3]> {
    let mut m = [[0.0f64; 4]; 3];
    for i in 0..3 {
        m[i][..3].copy_from_slice(&a[i]);
        m[i][3] = b[i];
    }
    for c in 0..3 {
        let piv = (c..3).max_by(|&x, &y| m[x][c].abs().partial_cmp(&m[y][c].abs()).unwrap())?;
        if m[piv][c].abs() < 1e-250 {
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
    use crate::flow::config::{config_for, FlowOverrides};

    fn germ(f: &str, g: &str) -> GermNumeric {
        GermNumeric::new(&parse_poly(f).unwrap(), &parse_poly(g).unwrap())
    }

    #[test]
    fn hopf_off_tube_residuals() {
        let gn = germ("x", "y");
        let cfg = config_for(1.0, &FlowOverrides::default());
        let z = [C64::new(0.01, 0.0), C64::new(0.002, 0.0)];
        let e = vector_field(&gn, z, &cfg).unwrap();
        assert_eq!(e.region, Region::Transverse);
        assert!(e.residual_i < 1e-10, "residual_i = {}", e.residual_i);
        assert!(e.residual_ii.unwrap() < 1e-10);
    }

    #[test]
    fn hopf_in_tube_tangency() {
        let gn = germ("x", "y");
        // the tube of the Hopf pair is |z| <= eta: enlarge eta so a point of
        // reasonable size is inside
        let cfg = config_for(
            1.0,
            &FlowOverrides {
                eta: Some(0.05),
                ..Default::default()
            },
        );
        let z = [C64::new(0.01, 0.005), C64::new(0.02, -0.01)];
        assert!(gn.gamma(z) <= cfg.eta * cfg.eta);
        let e = vector_field(&gn, z, &cfg).unwrap();
        assert_eq!(e.region, Region::Tube);
        assert!(e.residual_i < 1e-10);
        assert!(e.residual_iv.unwrap() < 1e-10);
    }

    #[test]
    fn short_example_radial_value_off_tube() {
        let gn = germ("x^3+y^2", "x^2+y^3");
        let cfg = config_for(1.0, &FlowOverrides::default());
        // a deterministic pseudo-random point in X off the tube
        let z = [C64::new(3.1e-3, -1.2e-3), C64::new(-2.3e-3, 1.7e-3)];
        let e = vector_field(&gn, z, &cfg).unwrap();
        assert_eq!(e.region, Region::Transverse);
        let znorm = (z[0].norm_sqr() + z[1].norm_sqr()).sqrt();
        let b = cfg.b_profile(znorm);
        let got = herm_inner(&e.v, &z);
        assert!((got - Complex64::new(b, 0.0)).norm() < 1e-10);
    }

    #[test]
    fn gradient_cross_check_by_finite_differences() {
        // <v, grad log F> recomputed through finite differences of log F
        let gn = germ("x^3+y^2", "x^2+y^3");
        let cfg = config_for(1.0, &FlowOverrides::default());
        let z = [C64::new(2.0e-3, 1.0e-3), C64::new(1.5e-3, -0.5e-3)];
        let e = vector_field(&gn, z, &cfg).unwrap();
        // directional derivative of log F along v should be 1
        let h = 1e-7;
        let zp = [z[0] + e.v[0] * h, z[1] + e.v[1] * h];
        let zm = [z[0] - e.v[0] * h, z[1] - e.v[1] * h];
        let d = (gn.big_f(zp).ln() - gn.big_f(zm).ln()) / (2.0 * h);
        assert!(
            (d - Complex64::new(1.0, 0.0)).norm() < 1e-5,
            "directional derivative {d}"
        );
    }
}
