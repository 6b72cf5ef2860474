//! Puiseux expansion of curve germs at the origin.
//!
//! Expansions run over extension towers in rational-parametrization form:
//! a branch is `x = lambda * t^e`, `y = sum c_k t^k`, one item per Galois
//! conjugacy class, with the class size recording how many geometric
//! branches the item represents. Each face root is adjoined through a Bezout
//! substitution that keeps the coefficients inside the root's own field, so
//! class counting stays exact. For the public fractional-exponent view the
//! parametrization is renormalized to a series in x^(1/e).

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exact::algnum::{extend, factor_over_field, AlgNum, NumberField, DEFAULT_TOWER_LIMIT};
use crate::exact::bipoly::{BiPoly, Var};
use crate::exact::gcd::squarefree_part;
use crate::exact::rat::Rat;
use crate::exact::unipoly::Coeff;

use super::newton::faces_of;

/// One exported series term: exponent k/e and its coefficient.
#[derive(Debug, Clone)]
pub struct BranchTerm {
    pub exponent: Rat,
    pub coefficient: AlgNum,
}

/// A conjugacy class of Puiseux branches of a germ at the origin.
#[derive(Debug, Clone)]
pub struct PuiseuxBranch {
    /// Branch of the axis {x = 0}; such a branch has no y-series.
    pub vertical: bool,
    /// Ramification index: the series lives on the x^(1/e) grid.
    pub e: u32,
    /// Series terms with strictly increasing exponents.
    pub terms: Vec<BranchTerm>,
    /// Exponent up to which the series is known (inclusive grid bound).
    pub truncation: Rat,
    /// Number of geometric branches in this conjugacy class.
    pub class_size: u32,
    pub field: Option<Arc<NumberField>>,
    raw: Option<RawBranch>,
}

impl PuiseuxBranch {
    fn vertical_axis() -> Self {
        PuiseuxBranch {
            vertical: true,
            e: 1,
            terms: vec![],
            truncation: Rat::zero(),
            class_size: 1,
            field: None,
            raw: None,
        }
    }

    /// Leading exponent of the series (None for the vertical axis or y = 0).
    pub fn leading_exponent(&self) -> Option<Rat> {
        self.terms.first().map(|t| t.exponent.clone())
    }

    /// Re-expands the branch so the series is valid through `order`.
    pub fn expand_to(&self, order: &Rat) -> Result<PuiseuxBranch> {
        if self.vertical || self.raw.is_none() || &self.truncation >= order {
            return Ok(self.clone());
        }
        let raw = self.raw.as_ref().unwrap();
        // t-precision: order * e, rounded up, plus margin
        let n = rat_ceil(&(order * Rat::from_integer(self.e.into()))) + 2;
        let exported = export_branch(raw, n as usize)?;
        Ok(exported)
    }
}

/// A branch in parametrization form with enough state to extend precision.
#[derive(Debug, Clone)]
struct RawBranch {
    field: Option<Arc<NumberField>>,
    /// x = lambda * t^e
    lambda: AlgNum,
    e: u32,
    class_size: u32,
    /// Substitution steps from the original germ down to the terminal state.
    steps: Vec<Step>,
    terminal: Terminal,
}

#[derive(Debug, Clone)]
struct Step {
    u: u32,
    w: u32,
    /// face root in the leaf field
    d0: AlgNum,
    e1: i64,
    e2: i64,
}

#[derive(Debug, Clone)]
enum Terminal {
    /// The last substitution ended on an exact root y = 0.
    Exact,
    /// Regular state: q(x1, y1) with a simple root y1(x1), y1(0) = 0.
    Regular(BiPoly<AlgNum>),
}

fn rat_ceil(r: &Rat) -> i64 {
    let f = r.floor();
    let n: i64 = f.numer().try_into().unwrap_or(i64::MAX);
    if &Rat::from_integer(n.into()) == r {
        n
    } else {
        n + 1
    }
}

/// Puiseux branch classes of `p` at the origin, each expanded at least to
/// `min_order` and beyond every pairwise contact order.
pub fn puiseux_branches(p: &BiPoly<Rat>, min_order: &Rat) -> Result<Vec<PuiseuxBranch>> {
    if p.is_zero() {
        return Err(Error::DegenerateInput("puiseux expansion of zero".into()));
    }
    if !p.eval_origin().is_zero() {
        return Err(Error::NotAGerm);
    }
    let red = squarefree_part(p);
    let mut out = vec![];
    let mut work = red.map_coeffs(|c| AlgNum::rational(c.clone()));

    // vertical component {x = 0}
    let xfac = work
        .terms()
        .map(|(&(i, _), _)| i)
        .min()
        .unwrap_or(0);
    if xfac > 0 {
        out.push(PuiseuxBranch::vertical_axis());
        let mut stripped = BiPoly::zero();
        for (&(i, j), c) in work.terms() {
            stripped.add_term(i - xfac, j, c.clone());
        }
        work = stripped;
    }

    let mut raws = vec![];
    if work.eval_origin().is_zero() && !work.is_constant() {
        expand(&work, None, vec![], 0, &mut raws)?;
    }

    // initial t-precision from the requested order
    let mut prec: Vec<i64> = raws
        .iter()
        .map(|r| rat_ceil(&(min_order * Rat::from_integer(r.e.into()))) + 2)
        .collect();

    // expand, then enforce separation: every pair of branch classes should
    // disagree strictly before the common truncation. Distinct classes are
    // already separated by construction, so after the round limit we accept
    // the deepest expansion reached.
    let mut last: Vec<PuiseuxBranch> = vec![];
    for round in 0..6 {
        let mut branches: Vec<PuiseuxBranch> = vec![];
        for (r, n) in raws.iter().zip(prec.iter()) {
            branches.push(export_branch(r, *n as usize)?);
        }
        let mut need_more = false;
        'pairs: for a in 0..branches.len() {
            for b in a + 1..branches.len() {
                match super::subset::contact_order(&branches[a], &branches[b])? {
                    super::subset::Contact::Finite(_) => {}
                    super::subset::Contact::AtLeastTruncation(_) => {
                        need_more = true;
                        break 'pairs;
                    }
                }
            }
        }
        last = branches;
        if !need_more || round == 5 {
            break;
        }
        for n in prec.iter_mut() {
            *n *= 2;
        }
    }
    out.extend(last);
    Ok(out)
}

/// Recursive Newton-Puiseux over towers.
fn expand(
    p: &BiPoly<AlgNum>,
    field: Option<Arc<NumberField>>,
    steps: Vec<Step>,
    depth: u32,
    out: &mut Vec<RawBranch>,
) -> Result<()> {
    if depth > 64 {
        return Err(Error::InternalLimit("puiseux recursion depth".into()));
    }
    let mut work = p.clone();

    // exact root y = 0 at this level
    let yfac = work.terms().map(|(&(_, j), _)| j).min().unwrap_or(0);
    if yfac > 0 {
        let mut stripped = BiPoly::zero();
        for (&(i, j), c) in work.terms() {
            stripped.add_term(i, j - yfac, c.clone());
        }
        out.push(finish_branch(&field, &steps, Terminal::Exact));
        work = stripped;
    }

    if !work.eval_origin().is_zero() || work.is_constant() {
        return Ok(());
    }

    for face in faces_of(&work) {
        let fred = &face.reduced;
        debug_assert!(!fred.coeff(0).is_zero() && !fred.lead().is_zero());
        let factors = factor_over_field(field.as_ref(), fred)?;
        for (phi, mu) in factors {
            if phi.deg() == 0 {
                continue;
            }
            // adjoin the face root
            let ext = extend(field.as_ref(), &format!("g{}", depth), &phi, DEFAULT_TOWER_LIMIT)?;
            let d0 = ext.root.clone();
            let kf = ext.field.clone();
            // Bezout: w*e2 - u*e1 = 1
            let (e1, e2) = bezout_pair(face.u as i64, face.w as i64);
            let lifted = ext.lift_bipoly(&work);
            let q = duval_substitute(&lifted, &d0, face.u, face.w, e1, e2);
            // earlier steps' roots must live in the extended field
            let mut steps2: Vec<Step> = steps
                .iter()
                .map(|s| Step {
                    d0: ext.lift(&s.d0),
                    ..s.clone()
                })
                .collect();
            steps2.push(Step {
                u: face.u,
                w: face.w,
                d0: d0.clone(),
                e1,
                e2,
            });
            if mu == 1 {
                debug_assert!(q.eval_origin().is_zero());
                debug_assert!(!q.partial(Var::Y).eval_origin().is_zero());
                out.push(finish_branch(&kf, &steps2, Terminal::Regular(q)));
            } else {
                expand(&q, kf, steps2, depth + 1, out)?;
            }
        }
    }
    Ok(())
}

fn finish_branch(field: &Option<Arc<NumberField>>, steps: &[Step], terminal: Terminal) -> RawBranch {
    // lambda = prod d0_k^(e1_k * prod_{l>k} w_l) ... composed from the steps;
    // e = prod w_k. Walk outward from the terminal parameter.
    let mut e: u32 = 1;
    let mut lambda = AlgNum::one();
    for s in steps.iter().rev() {
        // inner gives x_{k+1} = lambda * t^e; this step: x_k = d0^{e1} x_{k+1}^w
        lambda = s.d0.pow_i64(s.e1).mul_ref(&lambda.pow_i64(s.w as i64));
        e *= s.w;
    }
    let class_size = field.as_ref().map(|f| f.degree()).unwrap_or(1);
    RawBranch {
        field: field.clone(),
        lambda,
        e,
        class_size,
        steps: steps.to_vec(),
        terminal,
    }
}

fn bezout_pair(u: i64, w: i64) -> (i64, i64) {
    // find (e1, e2) with w*e2 - u*e1 = 1
    let (mut r0, mut r1) = (w, u);
    let (mut s0, mut s1) = (1i64, 0i64);
    let (mut t0, mut t1) = (0i64, 1i64);
    while r1 != 0 {
        let q = r0.div_euclid(r1);
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    assert_eq!(r0, 1, "u, w not coprime");
    // w*s0 + u*t0 = 1  =>  e2 = s0, e1 = -t0
    (-t0, s0)
}

/// Substitute x = d0^e1 * x1^w, y = d0^e2 * x1^u * (1 + y1) and divide by the
/// maximal power of x1.
fn duval_substitute(
    p: &BiPoly<AlgNum>,
    d0: &AlgNum,
    u: u32,
    w: u32,
    e1: i64,
    e2: i64,
) -> BiPoly<AlgNum> {
    let mut acc: BiPoly<AlgNum> = BiPoly::zero();
    for (&(i, j), c) in p.terms() {
        let dpow = d0.pow_i64(e1 * i as i64 + e2 * j as i64);
        let coeff = c.mul_ref(&dpow);
        let xexp = w * i + u * j;
        // (1 + y1)^j expanded binomially
        let mut binom = AlgNum::one();
        for k in 0..=j {
            if k > 0 {
                // binom = C(j, k) update
                let num = AlgNum::from_i64((j - k + 1) as i64);
                let den = AlgNum::from_i64(k as i64);
                binom = binom.mul_ref(&num).mul_ref(&den.inv_ref());
            }
            acc.add_term(xexp, k, coeff.mul_ref(&binom));
        }
    }
    let min_x = acc.terms().map(|(&(i, _), _)| i).min().unwrap_or(0);
    let mut out = BiPoly::zero();
    for (&(i, j), c) in acc.terms() {
        out.add_term(i - min_x, j, c.clone());
    }
    out
}

/// Truncated power series over a field.
type Series = Vec<AlgNum>;

fn series_mul(a: &Series, b: &Series, n: usize) -> Series {
    let mut out = vec![AlgNum::zero(); n];
    for (i, ca) in a.iter().enumerate().take(n) {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            if i + j >= n {
                break;
            }
            if !cb.is_zero() {
                out[i + j] = out[i + j].add_ref(&ca.mul_ref(cb));
            }
        }
    }
    out
}

fn series_add(a: &Series, b: &Series, n: usize) -> Series {
    let mut out = vec![AlgNum::zero(); n];
    for (k, o) in out.iter_mut().enumerate() {
        let x = a.get(k).cloned().unwrap_or_else(AlgNum::zero);
        let y = b.get(k).cloned().unwrap_or_else(AlgNum::zero);
        *o = x.add_ref(&y);
    }
    out
}

/// Series inverse; a[0] must be nonzero.
fn series_inv(a: &Series, n: usize) -> Series {
    let inv0 = a[0].inv_ref();
    let mut out = vec![AlgNum::zero(); n];
    out[0] = inv0.clone();
    for k in 1..n {
        let mut s = AlgNum::zero();
        for j in 1..=k {
            let aj = a.get(j).cloned().unwrap_or_else(AlgNum::zero);
            if !aj.is_zero() {
                s = s.add_ref(&aj.mul_ref(&out[k - j]));
            }
        }
        out[k] = s.mul_ref(&inv0).neg_ref();
    }
    out
}

/// Evaluate a bivariate polynomial at (x = t, y = given series), truncated.
fn eval_series(q: &BiPoly<AlgNum>, y: &Series, n: usize) -> Series {
    // Horner in y: coefficients are polynomials in x = t.
    let coeffs = q.coeffs_in(Var::Y);
    let mut acc: Series = vec![AlgNum::zero(); n];
    for c in coeffs.iter().rev() {
        acc = series_mul(&acc, y, n);
        let cs: Series = c.coeffs().to_vec();
        acc = series_add(&acc, &cs, n);
    }
    acc
}

/// Simple-root series of a regular state: y(0) = 0, q(t, y(t)) = 0 mod t^n.
fn regular_root_series(q: &BiPoly<AlgNum>, n: usize) -> Series {
    let qy = q.partial(Var::Y);
    let mut y: Series = vec![AlgNum::zero(); n];
    let mut prec = 1usize;
    while prec < n {
        prec = (prec * 2).min(n);
        let f = eval_series(q, &y, prec);
        let fy = eval_series(&qy, &y, prec);
        let upd = series_mul(&f, &series_inv(&fy, prec), prec);
        for k in 0..prec {
            y[k] = y[k].sub_ref(&upd[k]);
        }
    }
    // ensure exactness to the requested order
    debug_assert!(eval_series(q, &y, n).iter().all(|c| c.is_zero()));
    y
}

/// Export a raw branch as a fractional-power series valid through t^n.
fn export_branch(raw: &RawBranch, n: usize) -> Result<PuiseuxBranch> {
    // terminal series in the terminal parameter
    let mut y: Series = match &raw.terminal {
        Terminal::Exact => vec![AlgNum::zero(); n + 1],
        Terminal::Regular(q) => regular_root_series(q, n + 1),
    };
    // fold back through the steps: Y_k = d0^e2 * t^(u * e_inner) * (1 + Y_{k+1})
    // where the inner parameterization has x_{k+1} = lambda_inner * t^e_inner.
    let mut e_inner: u32 = 1;
    let mut lambda_inner = AlgNum::one();
    for s in raw.steps.iter().rev() {
        let scale = s.d0.pow_i64(s.e2).mul_ref(&lambda_inner.pow_i64(s.u as i64));
        let shift = (s.u * e_inner) as usize;
        let mut out = vec![AlgNum::zero(); n + 1];
        // out = scale * t^shift * (1 + y)
        if shift <= n {
            out[shift] = scale.clone();
        }
        for (k, c) in y.iter().enumerate() {
            if k + shift > n {
                break;
            }
            if !c.is_zero() {
                out[k + shift] = out[k + shift].add_ref(&scale.mul_ref(c));
            }
        }
        y = out;
        lambda_inner = s.d0.pow_i64(s.e1).mul_ref(&lambda_inner.pow_i64(s.w as i64));
        e_inner *= s.w;
    }
    debug_assert_eq!(e_inner, raw.e);

    // renormalize x = lambda t^e to a series in x^(1/e): t = x^(1/e)/rho with
    // rho^e = lambda.
    let (field, rho, y) = if raw.lambda == AlgNum::one() {
        (raw.field.clone(), AlgNum::one(), y)
    } else {
        // adjoin an e-th root of lambda (any conjugate representative)
        let mut zpoly = crate::exact::unipoly::UniPoly::zero('z');
        zpoly = zpoly.add(&crate::exact::unipoly::UniPoly::monomial(
            'z',
            AlgNum::one(),
            raw.e as usize,
        ));
        zpoly = zpoly.sub(&crate::exact::unipoly::UniPoly::constant('z', raw.lambda.clone()));
        let factors = factor_over_field(raw.field.as_ref(), &zpoly)?;
        let ext = extend(
            raw.field.as_ref(),
            "r",
            &factors[0].0,
            DEFAULT_TOWER_LIMIT,
        )?;
        let rho = ext.root.clone();
        let y2: Series = y.iter().map(|c| ext.lift(c)).collect();
        (ext.field.clone(), rho, y2)
    };

    let rho_inv = if rho == AlgNum::one() {
        AlgNum::one()
    } else {
        rho.inv_ref()
    };
    let mut terms = vec![];
    let mut rp = AlgNum::one();
    for (k, c) in y.iter().enumerate() {
        if k > 0 {
            rp = rp.mul_ref(&rho_inv);
        }
        if !c.is_zero() {
            terms.push(BranchTerm {
                exponent: Rat::new((k as i64).into(), (raw.e as i64).into()),
                coefficient: c.mul_ref(&rp),
            });
        }
    }
    Ok(PuiseuxBranch {
        vertical: false,
        e: raw.e,
        terms,
        truncation: Rat::new((n as i64).into(), (raw.e as i64).into()),
        class_size: raw.class_size,
        field,
        raw: Some(raw.clone()),
    })
}

/// Order in t of p evaluated along the branch parametrization; used by tests
/// as the residual check (None means identically zero to the truncation).
pub(crate) fn residual_order(p: &BiPoly<Rat>, b: &PuiseuxBranch, n: usize) -> Option<usize> {
    assert!(!b.vertical);
    let raw = b.raw.as_ref().expect("expanded branch");
    // rebuild parametrization x(t) = lambda t^e, y(t) from export at precision n
    let exported = export_branch(raw, n).expect("export");
    // x-series: on the x^(1/e) grid: x = (x^(1/e))^e exactly
    let m = n + 1;
    let mut xs: Series = vec![AlgNum::zero(); m];
    if b.e as usize <= n {
        xs[raw.e as usize] = AlgNum::one();
    }
    let mut ys: Series = vec![AlgNum::zero(); m];
    for t in &exported.terms {
        // exponent k/e on the grid: t-index k = exponent * e (an integer)
        let ke = &t.exponent * Rat::from_integer((raw.e as i64).into());
        assert!(num_traits::One::is_one(ke.denom()));
        let k: usize = ke.numer().try_into().expect("small exponent");
        if k < m {
            ys[k] = t.coefficient.clone();
        }
    }
    // promote everything into the exported field
    let pa = p.map_coeffs(|c| AlgNum::rational(c.clone()));
    let coeffs = pa.coeffs_in(Var::Y);
    let mut acc: Series = vec![AlgNum::zero(); m];
    for c in coeffs.iter().rev() {
        acc = series_mul(&acc, &ys, m);
        // c is a poly in x: evaluate as series in t via xs
        let mut cx: Series = vec![AlgNum::zero(); m];
        let mut xpow: Series = vec![AlgNum::zero(); m];
        xpow[0] = AlgNum::one();
        for (i, r) in c.coeffs().iter().enumerate() {
            if i > 0 {
                xpow = series_mul(&xpow, &xs, m);
            }
            if !r.is_zero() {
                for (k, v) in xpow.iter().enumerate() {
                    if !v.is_zero() {
                        cx[k] = cx[k].add_ref(&v.mul_ref(r));
                    }
                }
            }
        }
        acc = series_add(&acc, &cx, m);
    }
    acc.iter().position(|c| !c.is_zero())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly;
    use crate::exact::intersect::{intersection_multiplicity_origin, IntersectionMult};

    fn p(s: &str) -> BiPoly<Rat> {
        parse_poly(s).unwrap()
    }

    fn branches(s: &str) -> Vec<PuiseuxBranch> {
        puiseux_branches(&p(s), &Rat::from_integer(8.into())).unwrap()
    }

    #[test]
    fn cusp_single_class() {
        let bs = branches("y^2-x^3");
        assert_eq!(bs.len(), 1);
        let b = &bs[0];
        assert_eq!(b.e, 2);
        assert_eq!(b.class_size, 1);
        assert_eq!(
            b.leading_exponent(),
            Some(Rat::new(3.into(), 2.into()))
        );
        assert_eq!(b.terms.len(), 1);
        assert_eq!(b.terms[0].coefficient.as_rational(), Some(Rat::one()));
    }

    #[test]
    fn normal_crossing_two_axes() {
        let bs = branches("x*y");
        assert_eq!(bs.len(), 2);
        assert!(bs.iter().any(|b| b.vertical));
        let horiz = bs.iter().find(|b| !b.vertical).unwrap();
        assert_eq!(horiz.e, 1);
        assert!(horiz.terms.is_empty()); // y = 0 exactly
    }

    #[test]
    fn two_smooth_lines() {
        let bs = branches("(y-x)*(y+x)");
        assert_eq!(bs.len(), 2);
        let leads: Vec<Rat> = bs
            .iter()
            .map(|b| b.terms[0].coefficient.as_rational().unwrap())
            .collect();
        assert!(leads.contains(&Rat::one()) && leads.contains(&-Rat::one()));
    }

    #[test]
    fn conjugate_pair_merged_with_class_size() {
        // y^2 - 2x^2: one class of size 2 over Q(sqrt 2)
        let bs = branches("y^2-2*x^2");
        assert_eq!(bs.len(), 1);
        assert_eq!(bs[0].class_size, 2);
        assert_eq!(bs[0].e, 1);
    }

    #[test]
    fn root_count_matches_intersection_with_axis() {
        // sum of class_size * e = i_0(p, x) for x-free reduced germs
        for s in [
            "y^2-x^3",
            "y^2-2*x^2",
            "x^2+y^3",
            "(y-x)*(y+x)",
            "(y^2-x^3)*(y^2-2*x^3)",
            "y^4-2*x^4",
            "y^3-x^5",
        ] {
            let bs = branches(s);
            let total: u32 = bs
                .iter()
                .filter(|b| !b.vertical)
                .map(|b| b.class_size * b.e)
                .sum();
            let i0 = intersection_multiplicity_origin(&p(s), &p("x")).unwrap();
            assert_eq!(
                IntersectionMult::Finite(total as u64),
                i0,
                "root count mismatch for {}",
                s
            );
        }
    }

    #[test]
    fn residuals_vanish_along_branches() {
        for s in ["y^2-x^3", "x^2+y^3", "(y-x^2)*(y^2-x)", "y^2-2*x^2"] {
            let q = p(s);
            for b in branches(s) {
                if b.vertical {
                    continue;
                }
                let r = residual_order(&q, &b, 16);
                assert!(
                    r.is_none(),
                    "branch of {} has residual order {:?}",
                    s,
                    r
                );
            }
        }
    }

    #[test]
    fn mixed_faces() {
        // (y - x^2)(y^2 - x): one smooth branch y = x^2, one ramified x = y^2
        let bs = branches("(y-x^2)*(y^2-x)");
        assert_eq!(bs.len(), 2);
        let rammed: Vec<u32> = bs.iter().map(|b| b.e).collect();
        assert!(rammed.contains(&1) && rammed.contains(&2));
    }
}
