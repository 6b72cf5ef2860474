//! Bivariate factorization over the rationals.
//!
//! Strategy per squarefree primitive part: specialize x at a good rational
//! point, factor the univariate image, lift the factors x-adically by linear
//! multifactor Hensel steps, and recombine subsets against exact division.
//! The driver extracts the y-content (factored as a univariate in x) and
//! multiplicities by repeated division, then normalizes every factor to
//! integer-primitive form with positive leading coefficient and sorts
//! deterministically.

use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::bipoly::{BiPoly, Var};
use super::factor_uni::factor_unipoly;
use super::gcd::{content, primitive_part, squarefree_part};
use super::rat::Rat;
use super::unipoly::UniPoly;

/// Factor `p` into irreducibles over Q; see [`crate::exact::factor_q`].
pub fn factor_bipoly(p: &BiPoly<Rat>) -> Result<(Rat, Vec<(BiPoly<Rat>, u32)>)> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("factor of zero polynomial".into()));
    }
    if p.is_constant() {
        return Ok((p.eval_origin(), vec![]));
    }
    let mut factors: Vec<(BiPoly<Rat>, u32)> = vec![];

    // y-content lives in Q[x]; factor it as a univariate.
    let cont = content(p, Var::Y);
    if cont.degree().map(|d| d > 0).unwrap_or(false) {
        let (_, cfs) = factor_unipoly(&cont);
        for (f, e) in cfs {
            let bi = BiPoly::from_coeffs_in(Var::Y, &[f]);
            factors.push((bi.primitive_int().0, e));
        }
    }
    let pp = primitive_part(p, Var::Y);

    if pp.deg_var(Var::Y).unwrap_or(0) > 0 {
        let sqf = squarefree_part(&pp);
        let irreducibles = factor_squarefree_primitive(&sqf)?;
        for h in irreducibles {
            // multiplicity by repeated division
            let mut e = 0u32;
            let mut rest = pp.clone();
            while let Some(q) = rest.div_exact(&h) {
                e += 1;
                rest = q;
            }
            debug_assert!(e >= 1);
            factors.push((h, e));
        }
    }

    factors.sort_by(|a, b| cmp_bipoly(&a.0, &b.0));

    // unit = p / prod factors^e; exact and constant.
    let mut prod = BiPoly::one();
    for (f, e) in &factors {
        prod = prod.mul(&f.pow(*e));
    }
    let q = p.div_exact(&prod).expect("factor product divides input");
    assert!(q.is_constant(), "unit not constant");
    Ok((q.eval_origin(), factors))
}

/// Deterministic factor order: total degree first, then the coefficient
/// sequence read along (y-exponent, x-exponent) keys, so that `x` sorts
/// before `y`.
fn cmp_bipoly(a: &BiPoly<Rat>, b: &BiPoly<Rat>) -> std::cmp::Ordering {
    a.degree().cmp(&b.degree()).then_with(|| {
        let key = |p: &BiPoly<Rat>| {
            let mut t: Vec<((u32, u32), Rat)> =
                p.terms().map(|(&(i, j), c)| ((j, i), c.clone())).collect();
            t.sort_by(|x, y| x.0.cmp(&y.0));
            t
        };
        key(a).cmp(&key(b))
    })
}

/// Factor a squarefree, y-primitive polynomial with deg_y >= 1 into
/// irreducibles, by peeling one factor at a time.
fn factor_squarefree_primitive(q: &BiPoly<Rat>) -> Result<Vec<BiPoly<Rat>>> {
    let mut out = vec![];
    let mut rest = q.primitive_int().0;
    loop {
        let dy = rest.deg_var(Var::Y).unwrap_or(0);
        if dy == 0 {
            assert!(rest.is_constant());
            break;
        }
        if dy == 1 {
            out.push(rest.primitive_int().0);
            break;
        }
        match find_one_factor(&rest)? {
            None => {
                out.push(rest.primitive_int().0);
                break;
            }
            Some(h) => {
                rest = rest.div_exact(&h).expect("found factor divides");
                out.push(h);
            }
        }
    }
    Ok(out)
}

/// Find an irreducible proper factor of a squarefree y-primitive polynomial,
/// or None when it is irreducible.
fn find_one_factor(q: &BiPoly<Rat>) -> Result<Option<BiPoly<Rat>>> {
    let dy = q.deg_var(Var::Y).unwrap() as usize;

    // Evaluation point where the y-degree is preserved and the image stays
    // squarefree.
    let mut a_opt = None;
    for k in 0..200i64 {
        let a = if k % 2 == 0 { k / 2 } else { -(k / 2 + 1) };
        let av = Rat::from_integer(a.into());
        let u = eval_x(q, &av);
        if u.degree() == Some(dy) && u.gcd(&u.derivative()).deg() == 0 {
            a_opt = Some((a, u));
            break;
        }
    }
    let (a, u) = a_opt.ok_or_else(|| {
        Error::InternalLimit("no good evaluation point for factorization".into())
    })?;

    let (_, ufs) = factor_unipoly(&u);
    if ufs.len() == 1 {
        return Ok(None);
    }
    let modular: Vec<UniPoly<Rat>> = ufs.into_iter().map(|(f, _)| f).collect();

    // Shift so the evaluation point is x = 0.
    let qs = if a == 0 {
        q.clone()
    } else {
        q.translate_x(&Rat::from_integer(a.into()))
    };

    let lead = qs.coeffs_in(Var::Y).pop().unwrap(); // lc_y ∈ Q[x], lc(0) != 0
    let bound = (qs.deg_var(Var::X).unwrap_or(0) + lead.degree().unwrap_or(0) as u32 + 1) as usize;

    // Monic x-adic model T = qs / lead  (mod x^bound).
    let lead_inv = series_inv(&lead, bound);
    let t: Vec<UniPoly<Rat>> = qs
        .coeffs_in(Var::Y)
        .iter()
        .map(|c| series_mul(c, &lead_inv, bound))
        .collect();

    let lifted = hensel_lift_series(&t, &modular, bound);

    // Subset recombination, smallest first: the first hit is irreducible.
    let n = lifted.len();
    for size in 1..=(n / 2) {
        for combo in combinations(n, size) {
            // candidate = lead * prod_{i in combo} U_i  (mod x^bound)
            let mut cand: Vec<UniPoly<Rat>> = vec![lead.clone()];
            for &i in &combo {
                cand = ypoly_mul(&cand, &lifted[i], bound);
            }
            let bi = ypoly_to_bipoly(&cand);
            let bi = primitive_part(&bi, Var::Y).primitive_int().0;
            if bi.degree().map(|d| d > 0).unwrap_or(false) && bi.divides(&qs) {
                // un-shift
                let h = if a == 0 {
                    bi
                } else {
                    bi.translate_x(&Rat::from_integer((-a).into()))
                };
                return Ok(Some(h.primitive_int().0));
            }
        }
    }
    Ok(None)
}

fn eval_x(p: &BiPoly<Rat>, a: &Rat) -> UniPoly<Rat> {
    let coeffs = p.coeffs_in(Var::Y);
    UniPoly::new('y', coeffs.iter().map(|c| c.eval(a)).collect())
}

/// Truncated product of two power series in x.
fn series_mul(a: &UniPoly<Rat>, b: &UniPoly<Rat>, n: usize) -> UniPoly<Rat> {
    let mut out = vec![Rat::zero(); n];
    for (i, ca) in a.coeffs().iter().enumerate() {
        if i >= n || Zero::is_zero(ca) {
            continue;
        }
        for (j, cb) in b.coeffs().iter().enumerate() {
            if i + j >= n {
                break;
            }
            out[i + j] += ca * cb;
        }
    }
    UniPoly::new('x', out)
}

/// Power-series inverse mod x^n; constant term must be nonzero.
fn series_inv(a: &UniPoly<Rat>, n: usize) -> UniPoly<Rat> {
    let c0 = a.coeff(0);
    assert!(!Zero::is_zero(&c0));
    let mut inv = vec![Rat::zero(); n];
    inv[0] = Rat::one() / &c0;
    for k in 1..n {
        let mut s = Rat::zero();
        for j in 1..=k {
            let aj = a.coeff(j);
            if !Zero::is_zero(&aj) {
                s += &aj * &inv[k - j];
            }
        }
        inv[k] = -s / &c0;
    }
    UniPoly::new('x', inv)
}

/// y-polynomials with truncated x-series coefficients: index = y-exponent.
type YPoly = Vec<UniPoly<Rat>>;

fn ypoly_mul(a: &YPoly, b: &YPoly, n: usize) -> YPoly {
    let mut out: YPoly = vec![UniPoly::zero('x'); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if cb.is_zero() {
                continue;
            }
            out[i + j] = out[i + j].add(&series_mul(ca, cb, n));
        }
    }
    out
}

fn ypoly_to_bipoly(a: &YPoly) -> BiPoly<Rat> {
    BiPoly::from_coeffs_in(Var::Y, a)
}

/// Coefficient of x^k as a polynomial in y.
fn coeff_xk(a: &YPoly, k: usize) -> UniPoly<Rat> {
    UniPoly::new('y', a.iter().map(|c| c.coeff(k)).collect())
}

/// Linear multifactor Hensel: given T monic in y over Q[[x]]/x^bound with
/// T(0, y) = prod of the (pairwise coprime, monic, squarefree) modular
/// factors, lift to U_i monic with T = prod U_i mod x^bound.
fn hensel_lift_series(t: &YPoly, modular: &[UniPoly<Rat>], bound: usize) -> Vec<YPoly> {
    let r = modular.len();
    // Bezout data at x = 0: s_i = (prod_{j != i} u_j)^{-1} mod u_i.
    let mut s: Vec<UniPoly<Rat>> = Vec::with_capacity(r);
    for i in 0..r {
        let mut prod = UniPoly::one('y');
        for (j, u) in modular.iter().enumerate() {
            if j != i {
                prod = prod.mul(u);
            }
        }
        s.push(poly_inverse_mod(&prod, &modular[i]));
    }
    // Initialize U_i = u_i as YPoly.
    let mut lifted: Vec<YPoly> = modular
        .iter()
        .map(|u| {
            u.coeffs()
                .iter()
                .map(|c| UniPoly::constant('x', c.clone()))
                .collect()
        })
        .collect();

    for k in 1..bound {
        // E = coeff of x^k in (T - prod U_i)
        let mut prod: YPoly = vec![UniPoly::one('x')];
        for u in &lifted {
            prod = ypoly_mul(&prod, u, k + 1);
        }
        let e = coeff_xk(t, k).sub(&coeff_xk(&prod, k));
        if e.is_zero() {
            continue;
        }
        for i in 0..r {
            // delta_i = (E * s_i) rem u_i
            let delta = e.mul(&s[i]).rem(&modular[i]);
            if delta.is_zero() {
                continue;
            }
            for (jy, c) in delta.coeffs().iter().enumerate() {
                if !Zero::is_zero(c) {
                    let cur = &lifted[i][jy];
                    lifted[i][jy] = cur.add(&UniPoly::monomial('x', c.clone(), k));
                }
            }
        }
    }
    lifted
}

/// Inverse of `a` modulo monic `m` over Q[y] (extended Euclid).
fn poly_inverse_mod(a: &UniPoly<Rat>, m: &UniPoly<Rat>) -> UniPoly<Rat> {
    let mut r0 = m.clone();
    let mut r1 = a.rem(m);
    let mut t0 = UniPoly::zero('y');
    let mut t1 = UniPoly::one('y');
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let nt = t0.sub(&q.mul(&t1));
        r0 = r1;
        r1 = r;
        t0 = t1;
        t1 = nt;
    }
    assert_eq!(r0.degree(), Some(0), "non-invertible residue");
    t0.scale(&(Rat::one() / r0.coeff(0)))
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    if k > n {
        return out;
    }
    let mut combo: Vec<usize> = (0..k).collect();
    loop {
        out.push(combo.clone());
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] != i + n - k {
                break;
            }
            if i == 0 {
                return out;
            }
        }
        combo[i] += 1;
        for j in i + 1..k {
            combo[j] = combo[j - 1] + 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly;

    fn p(s: &str) -> BiPoly<Rat> {
        parse_poly(s).unwrap()
    }

    fn check_product(s: &str) -> Vec<(BiPoly<Rat>, u32)> {
        let q = p(s);
        let (unit, fs) = factor_bipoly(&q).unwrap();
        let mut prod = BiPoly::constant(unit);
        for (f, e) in &fs {
            prod = prod.mul(&f.pow(*e));
        }
        assert_eq!(prod, q, "re-multiplied factorization differs for {}", s);
        fs
    }

    #[test]
    fn jacobian_of_short_example() {
        // 9x^2y^2 - 4xy = x * y * (9xy - 4), unit 1
        let fs = check_product("9*x^2*y^2-4*x*y");
        let strs: Vec<String> = fs.iter().map(|(f, e)| format!("{}^{}", f, e)).collect();
        assert_eq!(strs, vec!["x^1", "y^1", "9*x*y - 4^1"]);
    }

    #[test]
    fn pure_power() {
        let fs = check_product("x^2");
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].1, 2);
        assert_eq!(fs[0].0, p("x"));
    }

    #[test]
    fn irreducible_sum_of_squares() {
        let fs = check_product("x^2+y^2");
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].1, 1);
    }

    #[test]
    fn split_difference() {
        let fs = check_product("x^2-y^2");
        assert_eq!(fs.len(), 2);
    }

    #[test]
    fn mixed_with_content_and_multiplicity() {
        let fs = check_product("x^3*(y^2-x^3)^2*(x+y)");
        let total: u32 = fs.iter().map(|(f, e)| e * f.degree().unwrap()).sum();
        assert_eq!(total, 3 + 6 + 1);
    }

    #[test]
    fn needs_recombination() {
        // (y^2 - 2x^2)(y^2 - 3x^2) stays irreducible-paired at most x values
        let fs = check_product("(y^2-2*x^2)*(y^2-3*x^2)");
        assert_eq!(fs.len(), 2);
        for (f, _) in fs {
            assert_eq!(f.degree(), Some(2));
        }
    }

    #[test]
    fn cusp_pair_product() {
        let fs = check_product("(x^2+y^3)*(x^3+y^2)");
        assert_eq!(fs.len(), 2);
    }
}
