//! Gcd machinery for bivariate polynomials over the rationals: content,
//! primitive parts, primitive PRS gcd, and squarefree decomposition.

use num_traits::{One, Zero};

use super::bipoly::{BiPoly, Var};
use super::rat::Rat;
use super::unipoly::UniPoly;

/// Content of `p` with respect to `main`: the (monic) gcd in the other
/// variable of all coefficients.
pub fn content(p: &BiPoly<Rat>, main: Var) -> UniPoly<Rat> {
    let coeffs = p.coeffs_in(main);
    let mut g = UniPoly::zero(main.other().tag());
    for c in &coeffs {
        if !c.is_zero() {
            g = g.gcd(c);
        }
        if g.degree() == Some(0) {
            break;
        }
    }
    g
}

pub fn primitive_part(p: &BiPoly<Rat>, main: Var) -> BiPoly<Rat> {
    if p.is_zero() {
        return p.clone();
    }
    let c = content(p, main);
    if c.degree() == Some(0) {
        let inv = Rat::one() / c.coeff(0);
        return p.scale(&inv);
    }
    let coeffs = p.coeffs_in(main);
    let divided: Vec<UniPoly<Rat>> = coeffs
        .iter()
        .map(|u| {
            if u.is_zero() {
                u.clone()
            } else {
                u.div_exact(&c).expect("content divides coefficients")
            }
        })
        .collect();
    BiPoly::from_coeffs_in(main, &divided)
}

/// Gcd over Q[x, y], returned integer-primitive with positive lead.
pub fn gcd_bi(a: &BiPoly<Rat>, b: &BiPoly<Rat>) -> BiPoly<Rat> {
    if a.is_zero() {
        return b.primitive_int().0;
    }
    if b.is_zero() {
        return a.primitive_int().0;
    }
    // Work in (Q[x])[y]; if both are y-free, fall back to x.
    let main = if a.deg_var(Var::Y) == Some(0) && b.deg_var(Var::Y) == Some(0) {
        let ga = a.coeffs_in(Var::Y).remove(0);
        let gb = b.coeffs_in(Var::Y).remove(0);
        let g = ga.gcd(&gb);
        return BiPoly::from_coeffs_in(Var::Y, &[g]).primitive_int().0;
    } else {
        Var::Y
    };
    let cont = content(a, main).gcd(&content(b, main));
    let mut p = primitive_part(a, main);
    let mut q = primitive_part(b, main);
    if p.deg_var(main) < q.deg_var(main) {
        std::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        let r = pseudo_rem(&p, &q, main);
        p = q;
        q = if r.is_zero() {
            r
        } else {
            primitive_part(&r, main)
        };
    }
    let g = if p.deg_var(main) == Some(0) {
        // coprime as y-polynomials; gcd is the content gcd only
        BiPoly::from_coeffs_in(main, &[cont])
    } else {
        p.mul(&BiPoly::from_coeffs_in(main, &[cont]))
    };
    g.primitive_int().0
}

/// Pseudo-remainder of `a` by `b` viewed in (Q[x])[main].
fn pseudo_rem(a: &BiPoly<Rat>, b: &BiPoly<Rat>, main: Var) -> BiPoly<Rat> {
    let da = a.deg_var(main).unwrap();
    let db = b.deg_var(main).unwrap();
    assert!(da >= db);
    let bc = b.coeffs_in(main);
    let lead_b = BiPoly::from_coeffs_in(main, &[bc.last().unwrap().clone()]);
    let mut rem = a.clone();
    loop {
        let dr = match rem.deg_var(main) {
            Some(d) if d >= db && !rem.is_zero() => d,
            _ => break,
        };
        let rc = rem.coeffs_in(main);
        let lead_r = BiPoly::from_coeffs_in(main, &[rc.last().unwrap().clone()]);
        // rem = lead_b * rem - lead_r * main^(dr-db) * b
        let shift = match main {
            Var::Y => BiPoly::monomial(Rat::one(), 0, dr - db),
            Var::X => BiPoly::monomial(Rat::one(), dr - db, 0),
        };
        rem = lead_b.mul(&rem).sub(&lead_r.mul(&shift).mul(b));
    }
    rem
}

/// Squarefree part of `p`: the product of its distinct irreducible factors.
pub fn squarefree_part(p: &BiPoly<Rat>) -> BiPoly<Rat> {
    if p.is_zero() || p.is_constant() {
        return p.clone();
    }
    let g1 = gcd_bi(p, &p.partial(Var::X));
    let g = gcd_bi(&g1, &p.partial(Var::Y));
    if g.is_constant() {
        return p.primitive_int().0;
    }
    p.div_exact(&g)
        .expect("gcd divides")
        .primitive_int()
        .0
}

/// True when f and g share a nonconstant factor that vanishes at the origin.
pub fn common_branch_through_origin(f: &BiPoly<Rat>, g: &BiPoly<Rat>) -> bool {
    let h = gcd_bi(f, g);
    !h.is_constant() && h.eval_origin().is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly;
    use num_traits::Zero;

    fn p(s: &str) -> BiPoly<Rat> {
        parse_poly(s).unwrap()
    }

    #[test]
    fn gcd_shared_factor() {
        let a = p("x*y");
        let b = p("x^2+x*y");
        assert_eq!(gcd_bi(&a, &b), p("x"));
    }

    #[test]
    fn gcd_coprime() {
        let a = p("x^3+y^2");
        let b = p("x^2+y^3");
        assert!(gcd_bi(&a, &b).is_constant());
    }

    #[test]
    fn gcd_content_only() {
        let a = p("x^2*y");
        let b = p("x^3");
        assert_eq!(gcd_bi(&a, &b), p("x^2"));
    }

    #[test]
    fn squarefree() {
        let a = p("x^2*y^3");
        assert_eq!(squarefree_part(&a), p("x*y"));
        let b = p("(x^2+y^3)^2");
        assert_eq!(squarefree_part(&b), p("x^2+y^3"));
    }

    #[test]
    fn common_branch() {
        assert!(common_branch_through_origin(&p("x"), &p("x*y")));
        assert!(!common_branch_through_origin(&p("x"), &p("y")));
        // shared factor not through the origin
        assert!(!common_branch_through_origin(
            &p("x*(x+1)-x*x"),
            &p("y*x+y")
        ));
        assert!(p("x*(x+1)-x*x").sub(&p("x")).is_zero());
    }
}
