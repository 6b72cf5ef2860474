//! Sylvester resultants of bivariate polynomials.
//!
//! Convention: `Res(p, q)` is the determinant of the Sylvester matrix whose
//! first `deg q` rows hold the coefficients of `p` and whose last `deg p`
//! rows hold those of `q` (degrees taken in the eliminated variable). The
//! production route evaluates the matrix at enough sample points of the
//! surviving variable and interpolates; a direct fraction-free determinant
//! over the polynomial ring is kept as an independent cross-check for tests.

use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::bipoly::{BiPoly, Var};
use super::rat::Rat;
use super::unipoly::UniPoly;

/// Resultant of `p` and `q` with respect to the eliminated variable; the
/// result is a univariate polynomial in the other variable.
pub fn resultant(p: &BiPoly<Rat>, q: &BiPoly<Rat>, eliminate: Var) -> Result<UniPoly<Rat>> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::DegenerateInput("resultant of zero polynomial".into()));
    }
    // Orient so we always eliminate y.
    let (p, q) = match eliminate {
        Var::Y => (p.clone(), q.clone()),
        Var::X => (p.swap_vars(), q.swap_vars()),
    };
    let out_var = match eliminate {
        Var::Y => 'x',
        Var::X => 'y',
    };
    let m = p.deg_var(Var::Y).unwrap() as usize;
    let n = q.deg_var(Var::Y).unwrap() as usize;
    if m == 0 && n == 0 {
        return Err(Error::DegenerateInput(
            "both inputs constant in the eliminated variable".into(),
        ));
    }
    // Degenerate sizes: Res(p, q) = p^n when m = 0, q^m when n = 0.
    let pc = p.coeffs_in(Var::Y);
    let qc = q.coeffs_in(Var::Y);
    if m == 0 {
        let mut r = UniPoly::one(out_var);
        for _ in 0..n {
            r = r.mul(&retag(&pc[0], out_var));
        }
        return Ok(r);
    }
    if n == 0 {
        let mut r = UniPoly::one(out_var);
        for _ in 0..m {
            r = r.mul(&retag(&qc[0], out_var));
        }
        return Ok(r);
    }

    // Degree bound of the resultant in the surviving variable.
    let dx_p = p.deg_var(Var::X).unwrap_or(0) as usize;
    let dx_q = q.deg_var(Var::X).unwrap_or(0) as usize;
    let bound = n * dx_p + m * dx_q;

    let mut xs: Vec<Rat> = Vec::with_capacity(bound + 1);
    let mut ys: Vec<Rat> = Vec::with_capacity(bound + 1);
    for k in 0..=bound as i64 {
        let x = Rat::from_integer(k.into());
        let det = sylvester_det_at(&pc, &qc, m, n, &x);
        xs.push(x);
        ys.push(det);
    }
    let r = lagrange_interpolate(&xs, &ys, out_var);
    Ok(r)
}

fn retag(u: &UniPoly<Rat>, var: char) -> UniPoly<Rat> {
    UniPoly::new(var, u.coeffs().to_vec())
}

/// Sylvester determinant with the matrix entries evaluated at `x`.
fn sylvester_det_at(
    pc: &[UniPoly<Rat>],
    qc: &[UniPoly<Rat>],
    m: usize,
    n: usize,
    x: &Rat,
) -> Rat {
    let size = m + n;
    let pv: Vec<Rat> = pc.iter().map(|c| c.eval(x)).collect();
    let qv: Vec<Rat> = qc.iter().map(|c| c.eval(x)).collect();
    let mut mat = vec![vec![Rat::zero(); size]; size];
    // p-block: n rows; row r has p's coefficients (degree m..0) shifted by r.
    for r in 0..n {
        for (k, c) in pv.iter().enumerate() {
            // coefficient of y^k goes to column (m - k) + r
            mat[r][m - k + r] = c.clone();
        }
    }
    for r in 0..m {
        for (k, c) in qv.iter().enumerate() {
            mat[n + r][n - k + r] = c.clone();
        }
    }
    det_rat(mat)
}

/// Gaussian elimination over Q.
fn det_rat(mut m: Vec<Vec<Rat>>) -> Rat {
    let n = m.len();
    let mut det = Rat::one();
    for col in 0..n {
        let piv = (col..n).find(|&r| !m[r][col].is_zero());
        let piv = match piv {
            Some(p) => p,
            None => return Rat::zero(),
        };
        if piv != col {
            m.swap(piv, col);
            det = -det;
        }
        let pval = m[col][col].clone();
        det *= &pval;
        for r in col + 1..n {
            if m[r][col].is_zero() {
                continue;
            }
            let f = &m[r][col] / &pval;
            for c in col..n {
                let sub = &f * &m[col][c];
                m[r][c] = &m[r][c] - &sub;
            }
        }
    }
    det
}

fn lagrange_interpolate(xs: &[Rat], ys: &[Rat], var: char) -> UniPoly<Rat> {
    let mut acc = UniPoly::zero(var);
    for (i, yi) in ys.iter().enumerate() {
        if yi.is_zero() {
            continue;
        }
        let mut num = UniPoly::one(var);
        let mut den = Rat::one();
        for (j, xj) in xs.iter().enumerate() {
            if i == j {
                continue;
            }
            num = num.mul(&UniPoly::new(var, vec![-xj.clone(), Rat::one()]));
            den *= &xs[i] - xj;
        }
        acc = acc.add(&num.scale(&(yi / &den)));
    }
    acc
}

/// Direct Sylvester determinant with polynomial entries (fraction-free
/// Bareiss elimination over Q[x]); used as the independent oracle in tests.
pub fn resultant_direct(p: &BiPoly<Rat>, q: &BiPoly<Rat>, eliminate: Var) -> Result<UniPoly<Rat>> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::DegenerateInput("resultant of zero polynomial".into()));
    }
    let (p, q) = match eliminate {
        Var::Y => (p.clone(), q.clone()),
        Var::X => (p.swap_vars(), q.swap_vars()),
    };
    let out_var = match eliminate {
        Var::Y => 'x',
        Var::X => 'y',
    };
    let m = p.deg_var(Var::Y).unwrap() as usize;
    let n = q.deg_var(Var::Y).unwrap() as usize;
    if m == 0 && n == 0 {
        return Err(Error::DegenerateInput(
            "both inputs constant in the eliminated variable".into(),
        ));
    }
    let pc = p.coeffs_in(Var::Y);
    let qc = q.coeffs_in(Var::Y);
    let size = m + n;
    let zero = UniPoly::zero(out_var);
    let mut mat = vec![vec![zero.clone(); size]; size];
    for r in 0..n {
        for (k, c) in pc.iter().enumerate() {
            mat[r][m - k + r] = retag(c, out_var);
        }
    }
    for r in 0..m {
        for (k, c) in qc.iter().enumerate() {
            mat[n + r][n - k + r] = retag(c, out_var);
        }
    }
    Ok(det_bareiss(mat, out_var))
}

fn det_bareiss(mut m: Vec<Vec<UniPoly<Rat>>>, var: char) -> UniPoly<Rat> {
    let n = m.len();
    if n == 0 {
        return UniPoly::one(var);
    }
    let mut sign = Rat::one();
    let mut prev = UniPoly::one(var);
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            let swap = (k + 1..n).find(|&r| !m[r][k].is_zero());
            match swap {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return UniPoly::zero(var),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let t = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = t
                    .div_exact(&prev)
                    .expect("Bareiss exact division");
            }
        }
        for i in k + 1..n {
            m[i][k] = UniPoly::zero(var);
        }
        prev = m[k][k].clone();
    }
    m[n - 1][n - 1].scale(&sign)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly;

    fn p(s: &str) -> BiPoly<Rat> {
        parse_poly(s).unwrap()
    }

    fn u(c: &[i64]) -> UniPoly<Rat> {
        UniPoly::from_i64('x', c)
    }

    #[test]
    fn hand_expanded_sylvester() {
        // Res_y(y^2 - x, y + x) = x^2 - x by the 3x3 determinant
        let r = resultant(&p("y^2-x"), &p("y+x"), Var::Y).unwrap();
        assert_eq!(r, u(&[0, -1, 1]));
    }

    #[test]
    fn degenerate_block_sizes() {
        // Res_y(y, x) = x (1x1 matrix)
        assert_eq!(resultant(&p("y"), &p("x"), Var::Y).unwrap(), u(&[0, 1]));
        // Res_y(2x, 3y^2) = (2x)^2 = 4x^2
        assert_eq!(
            resultant(&p("2*x"), &p("3*y^2"), Var::Y).unwrap(),
            u(&[0, 0, 4])
        );
    }

    #[test]
    fn both_constant_in_eliminated_is_error() {
        assert!(matches!(
            resultant(&p("x"), &p("x+1"), Var::Y),
            Err(Error::DegenerateInput(_))
        ));
    }

    #[test]
    fn interpolation_matches_direct_oracle() {
        let cases = [
            ("y^2-x", "y+x"),
            ("x^3+y^2", "x^2+y^3"),
            ("y^2-x^3", "y^2-2*x^3"),
            ("x*y-1", "x^2+y^2-4"),
            ("3*y^3+x*y+x^2", "2*y^2-x"),
        ];
        for (a, b) in cases {
            let r1 = resultant(&p(a), &p(b), Var::Y).unwrap();
            let r2 = resultant_direct(&p(a), &p(b), Var::Y).unwrap();
            assert_eq!(r1, r2, "mismatch for ({a}, {b})");
            let r1x = resultant(&p(a), &p(b), Var::X).unwrap();
            let r2x = resultant_direct(&p(a), &p(b), Var::X).unwrap();
            assert_eq!(r1x, r2x, "x-mismatch for ({a}, {b})");
        }
    }

    #[test]
    fn vanishes_exactly_on_common_factor() {
        // shared factor with positive y-degree
        let r = resultant(&p("y*x"), &p("y*(x+1)"), Var::Y).unwrap();
        assert!(r.is_zero());
        // shared factor constant in y does not kill Res_y
        let r1 = resultant(&p("x*y"), &p("x*(y+1)"), Var::Y).unwrap();
        assert!(!r1.is_zero());
        let r2 = resultant(&p("y-x"), &p("y+x"), Var::Y).unwrap();
        assert!(!r2.is_zero());
    }
}
