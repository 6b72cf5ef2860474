//! Double-precision evaluation of the exact polynomial data: compiled
//! polynomials, gradients of log F, the tube function gamma, and a small
//! Hermitian eigensolver for numerical ranks.

use num_complex::Complex64;
use num_traits::Zero;

use crate::exact::bipoly::{BiPoly, Var};
use crate::exact::rat::{rat_to_f64, Rat};

pub type C64 = Complex64;

/// Polynomial compiled to float coefficients for fast evaluation.
#[derive(Debug, Clone)]
pub struct CPoly {
    terms: Vec<(f64, u32, u32)>,
}

impl CPoly {
    pub fn compile(p: &BiPoly<Rat>) -> Self {
        CPoly {
            terms: p
                .terms()
                .map(|(&(i, j), c)| (rat_to_f64(c), i, j))
                .collect(),
        }
    }

    pub fn eval(&self, x: C64, y: C64) -> C64 {
        let mut acc = C64::zero();
        for &(c, i, j) in &self.terms {
            acc += x.powu(i) * y.powu(j) * c;
        }
        acc
    }
}

/// The compiled germ pair with first derivatives.
#[derive(Debug, Clone)]
pub struct GermNumeric {
    pub f: CPoly,
    pub g: CPoly,
    pub fx: CPoly,
    pub fy: CPoly,
    pub gx: CPoly,
    pub gy: CPoly,
}

impl GermNumeric {
    pub fn new(f: &BiPoly<Rat>, g: &BiPoly<Rat>) -> Self {
        GermNumeric {
            f: CPoly::compile(f),
            g: CPoly::compile(g),
            fx: CPoly::compile(&f.partial(Var::X)),
            fy: CPoly::compile(&f.partial(Var::Y)),
            gx: CPoly::compile(&g.partial(Var::X)),
            gy: CPoly::compile(&g.partial(Var::Y)),
        }
    }

    pub fn f_of(&self, z: [C64; 2]) -> C64 {
        self.f.eval(z[0], z[1])
    }
    pub fn g_of(&self, z: [C64; 2]) -> C64 {
        self.g.eval(z[0], z[1])
    }

    /// F = f/g.
    pub fn big_f(&self, z: [C64; 2]) -> C64 {
        self.f_of(z) / self.g_of(z)
    }

    /// Milnor-style gradient of log F: conj of the partials of log(f/g).
    pub fn grad_log_f(&self, z: [C64; 2]) -> [C64; 2] {
        let f = self.f_of(z);
        let g = self.g_of(z);
        let d1 = self.fx.eval(z[0], z[1]) / f - self.gx.eval(z[0], z[1]) / g;
        let d2 = self.fy.eval(z[0], z[1]) / f - self.gy.eval(z[0], z[1]) / g;
        [d1.conj(), d2.conj()]
    }

    /// gamma(z) = |f|^2 + |g|^2.
    pub fn gamma(&self, z: [C64; 2]) -> f64 {
        self.f_of(z).norm_sqr() + self.g_of(z).norm_sqr()
    }

    /// Real gradient of gamma as a complex vector for the Re<.,.> pairing.
    pub fn grad_gamma(&self, z: [C64; 2]) -> [C64; 2] {
        let f = self.f_of(z);
        let g = self.g_of(z);
        let d1 = (self.fx.eval(z[0], z[1]).conj() * f + self.gx.eval(z[0], z[1]).conj() * g) * 2.0;
        let d2 = (self.fy.eval(z[0], z[1]).conj() * f + self.gy.eval(z[0], z[1]).conj() * g) * 2.0;
        [d1, d2]
    }
}

pub fn herm_inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x * y.conj()).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues of a Hermitian 3x3 matrix by cyclic complex Jacobi rotations.
pub fn hermitian_eigenvalues_3(a: &[[C64; 3]; 3]) -> [f64; 3] {
    let mut m = *a;
    for _sweep in 0..64 {
        let mut off = 0.0;
        for p in 0..3 {
            for q in p + 1..3 {
                off += m[p][q].norm_sqr();
            }
        }
        let scale: f64 = (0..3).map(|i| m[i][i].norm_sqr()).sum::<f64>() + off;
        if off <= scale * 1e-32 {
            break;
        }
        for p in 0..3 {
            for q in p + 1..3 {
                let b = m[p][q];
                if b.norm_sqr() == 0.0 {
                    continue;
                }
                // U = [[c, -s w],[s conj(w), c]] with w the phase of b zeros
                // the (p, q) entry when tan(2 theta) = 2|b|/(a - d).
                let a = m[p][p].re;
                let d = m[q][q].re;
                let w = b / b.norm();
                let theta = 0.5 * (2.0 * b.norm()).atan2(a - d);
                let (s, c) = theta.sin_cos();
                // M <- M U (columns p, q)
                for k in 0..3 {
                    let mkp = m[k][p];
                    let mkq = m[k][q];
                    m[k][p] = mkp * c + mkq * w.conj() * s;
                    m[k][q] = -mkp * w * s + mkq * c;
                }
                // M <- U^H M (rows p, q)
                for k in 0..3 {
                    let mpk = m[p][k];
                    let mqk = m[q][k];
                    m[p][k] = mpk * c + mqk * w * s;
                    m[q][k] = -mpk * w.conj() * s + mqk * c;
                }
            }
        }
    }
    let mut ev = [m[0][0].re, m[1][1].re, m[2][2].re];
    ev.sort_by(|a, b| b.partial_cmp(a).unwrap());
    ev
}

/// Singular values of a 3x3 complex matrix, descending.
pub fn singular_values_3(a: &[[C64; 3]; 3]) -> [f64; 3] {
    let mut ata = [[C64::zero(); 3]; 3];
    for (i, row) in ata.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            let mut s = C64::zero();
            for k in 0..3 {
                s += a[k][i].conj() * a[k][j];
            }
            *entry = s;
        }
    }
    let ev = hermitian_eigenvalues_3(&ata);
    [
        ev[0].max(0.0).sqrt(),
        ev[1].max(0.0).sqrt(),
        ev[2].max(0.0).sqrt(),
    ]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn jacobi_diagonal() {
        let a = [
            [c(3.0, 0.0), C64::zero(), C64::zero()],
            [C64::zero(), c(1.0, 0.0), C64::zero()],
            [C64::zero(), C64::zero(), c(2.0, 0.0)],
        ];
        let ev = hermitian_eigenvalues_3(&a);
        assert_eq!(ev, [3.0, 2.0, 1.0]);
    }

    #[test]
    fn jacobi_offdiagonal_complex() {
        // [[2, i],[-i, 2]] block has eigenvalues 3 and 1
        let a = [
            [c(2.0, 0.0), c(0.0, 1.0), C64::zero()],
            [c(0.0, -1.0), c(2.0, 0.0), C64::zero()],
            [C64::zero(), C64::zero(), c(5.0, 0.0)],
        ];
        let ev = hermitian_eigenvalues_3(&a);
        assert!((ev[0] - 5.0).abs() < 1e-12);
        assert!((ev[1] - 3.0).abs() < 1e-12);
        assert!((ev[2] - 1.0).abs() < 1e-12);
    }

    #[test]
    fn singular_values_of_rank_one() {
        let a = [
            [c(1.0, 0.0), c(2.0, 0.0), c(0.0, 0.0)],
            [c(2.0, 0.0), c(4.0, 0.0), c(0.0, 0.0)],
            [C64::zero(), C64::zero(), C64::zero()],
        ];
        let sv = singular_values_3(&a);
        assert!(sv[0] > 4.9 && sv[1] < 1e-12 && sv[2] < 1e-12);
    }

    #[test]
    fn grad_log_f_by_finite_differences() {
        let f = crate::exact::parse::parse_poly("x^3+y^2").unwrap();
        let g = crate::exact::parse::parse_poly("x^2+y^3").unwrap();
        let gn = GermNumeric::new(&f, &g);
        let z = [c(0.11, 0.07), c(-0.05, 0.13)];
        let grad = gn.grad_log_f(z);
        let h = 1e-7;
        for k in 0..2 {
            let mut zp = z;
            let mut zm = z;
            zp[k] += c(h, 0.0);
            zm[k] -= c(h, 0.0);
            let d = (gn.big_f(zp).ln() - gn.big_f(zm).ln()) / (2.0 * h);
            let analytic = grad[k].conj();
            assert!(
                (d - analytic).norm() < 1e-5 * (1.0 + analytic.norm()),
                "partial {k}: fd {d} vs {analytic}"
            );
        }
    }
}
