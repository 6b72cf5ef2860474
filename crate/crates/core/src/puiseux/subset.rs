//! Contact orders between branches and germ-level containment of curves.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::exact::bipoly::BiPoly;
use crate::exact::gcd::common_branch_through_origin;
use crate::exact::rat::Rat;
use crate::exact::unipoly::Coeff;
use crate::exact::{factor_q, AlgNum};

use super::branch::{puiseux_branches, PuiseuxBranch};

/// Outcome of a contact-order comparison.
#[derive(Debug, Clone, PartialEq)]
pub enum Contact {
    /// First disagreement (over every conjugate matching) at this exponent.
    Finite(Rat),
    /// Identical through the common truncation; re-expand to resolve.
    AtLeastTruncation(Rat),
}

/// Maximal exponent up to which some conjugate of `b` agrees with `a`.
///
/// Conjugates act on a series by Galois conjugation of the coefficients
/// together with the root-of-unity twist `c_k -> c_k * zeta^k` on the
/// x^(1/e) grid. Coefficients are compared termwise: exactly for rational
/// values (including the sign twist on even-e grids), and by equality of
/// minimal polynomials over Q otherwise.
pub fn contact_order(a: &PuiseuxBranch, b: &PuiseuxBranch) -> Result<Contact> {
    if a.vertical || b.vertical {
        return Err(Error::DegenerateInput(
            "contact order of a vertical branch".into(),
        ));
    }
    let trunc = a.truncation.clone().min(b.truncation.clone());

    // Candidate twists: identity always; the rational sign twist when the
    // grid admits it. Non-rational twists are subsumed by the minimal
    // polynomial comparison.
    let lcm_e = lcm(a.e as i64, b.e as i64);
    let mut best: Option<Rat> = None;
    let twists: &[i64] = if lcm_e % 2 == 0 { &[0, 1] } else { &[0] };
    for &tw in twists {
        match first_disagreement(a, b, tw, &trunc) {
            None => return Ok(Contact::AtLeastTruncation(trunc)),
            Some(x) => {
                if best.as_ref().map(|r| x > *r).unwrap_or(true) {
                    best = Some(x);
                }
            }
        }
    }
    Ok(Contact::Finite(best.unwrap()))
}

fn lcm(a: i64, b: i64) -> i64 {
    a / gcd(a, b) * b
}
fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// First exponent where the two series must differ under the given sign
/// twist (`tw = 1` flips the sign of b's coefficients at odd grid indices).
fn first_disagreement(
    a: &PuiseuxBranch,
    b: &PuiseuxBranch,
    tw: i64,
    trunc: &Rat,
) -> Option<Rat> {
    let mut exps: Vec<Rat> = a
        .terms
        .iter()
        .map(|t| t.exponent.clone())
        .chain(b.terms.iter().map(|t| t.exponent.clone()))
        .filter(|x| x <= trunc)
        .collect();
    exps.sort();
    exps.dedup();
    let le = lcm(a.e as i64, b.e as i64);
    for x in exps {
        let ca = coeff_at(a, &x);
        let mut cb = coeff_at(b, &x);
        if tw == 1 {
            // grid index of x on the lcm grid
            let idx = (&x * Rat::from_integer(le.into())).numer().clone();
            if &idx % 2 != 0.into() {
                cb = cb.neg_ref();
            }
        }
        if !conjugate_compatible(&ca, &cb) {
            return Some(x);
        }
    }
    None
}

fn coeff_at(b: &PuiseuxBranch, x: &Rat) -> AlgNum {
    b.terms
        .iter()
        .find(|t| &t.exponent == x)
        .map(|t| t.coefficient.clone())
        .unwrap_or_else(AlgNum::zero)
}

/// Necessary (and for rational values exact) condition for two coefficients
/// to be identified by some conjugate matching.
fn conjugate_compatible(a: &AlgNum, b: &AlgNum) -> bool {
    match (a.as_rational(), b.as_rational()) {
        (Some(x), Some(y)) => x == y,
        (None, Some(_)) | (Some(_), None) => {
            // a rational value is conjugate only to itself
            a.min_poly_q() == b.min_poly_q()
        }
        (None, None) => a.min_poly_q() == b.min_poly_q(),
    }
}

/// Verdict of `germ_subset` with its supporting data.
#[derive(Debug, Clone)]
pub struct SubsetVerdict {
    pub contained: bool,
    /// On failure: a branch of `p` that is not a branch of `q`.
    pub witness: Option<PuiseuxBranch>,
    /// Factor of `p` carrying the witness branch, printable.
    pub witness_factor: Option<BiPoly<Rat>>,
    /// All checked irreducible factors of `p` through the origin, with the
    /// divisibility outcome.
    pub checked: Vec<(BiPoly<Rat>, bool)>,
}

/// Does every branch of `p` at the origin lie on `q`?
///
/// A branch of an irreducible (over Q) factor `h` of `p` lies on `q` exactly
/// when `h` divides `q`: a polynomial vanishing on an analytic branch
/// vanishes on the whole algebraic component, and divisibility by one
/// conjugate factor forces divisibility by the full Galois orbit. The
/// divisibility route therefore decides branch containment exactly; on
/// failure the witness branch is produced by Puiseux expansion of the
/// offending factor.
pub fn germ_subset(p: &BiPoly<Rat>, q: &BiPoly<Rat>) -> Result<SubsetVerdict> {
    if p.is_zero() || q.is_zero() {
        return Err(Error::DegenerateInput("zero polynomial".into()));
    }
    if !p.eval_origin().is_zero() {
        return Err(Error::NotAGerm);
    }
    let (_, factors) = factor_q(p)?;
    let mut checked = vec![];
    let mut offender: Option<BiPoly<Rat>> = None;
    for (h, _) in &factors {
        if !h.eval_origin().is_zero() {
            continue;
        }
        let divides = h.divides(q);
        checked.push((h.clone(), divides));
        if !divides && offender.is_none() {
            offender = Some(h.clone());
        }
    }
    match offender {
        None => Ok(SubsetVerdict {
            contained: true,
            witness: None,
            witness_factor: None,
            checked,
        }),
        Some(h) => {
            let deg = (p.degree().unwrap_or(1) + q.degree().unwrap_or(1)) as i64;
            let branches = puiseux_branches(&h, &Rat::from_integer((2 * deg).into()))?;
            let witness = branches.into_iter().next();
            Ok(SubsetVerdict {
                contained: false,
                witness,
                witness_factor: Some(h),
                checked,
            })
        }
    }
}

/// Shared-branch test used by precondition checks.
pub fn shares_branch_at_origin(f: &BiPoly<Rat>, g: &BiPoly<Rat>) -> bool {
    common_branch_through_origin(f, g)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::parse::parse_poly;

    fn p(s: &str) -> BiPoly<Rat> {
        parse_poly(s).unwrap()
    }

    fn bs(s: &str) -> Vec<PuiseuxBranch> {
        puiseux_branches(&p(s), &Rat::from_integer(8.into())).unwrap()
    }

    #[test]
    fn contact_examples() {
        // (y = x^{3/2}) vs (y = -x): first disagreement at exponent 1
        let cusp = bs("y^2-x^3");
        let line = bs("y+x");
        match contact_order(&cusp[0], &line[0]).unwrap() {
            Contact::Finite(r) => assert_eq!(r, Rat::from_integer(1.into())),
            c => panic!("unexpected {c:?}"),
        }
        // (y = x) vs (y = x + x^2): agree through 1, differ at 2
        let a = bs("y-x");
        let b = bs("y-x-x^2");
        match contact_order(&a[0], &b[0]).unwrap() {
            Contact::Finite(r) => assert_eq!(r, Rat::from_integer(2.into())),
            c => panic!("unexpected {c:?}"),
        }
    }

    #[test]
    fn self_contact_is_truncation_sentinel() {
        let cusp = bs("y^2-x^3");
        match contact_order(&cusp[0], &cusp[0]).unwrap() {
            Contact::AtLeastTruncation(_) => {}
            c => panic!("expected sentinel, got {c:?}"),
        }
        // deeper expansion keeps the sentinel (identical series)
        let deeper = cusp[0].expand_to(&Rat::from_integer(20.into())).unwrap();
        match contact_order(&deeper, &deeper).unwrap() {
            Contact::AtLeastTruncation(t) => {
                assert!(t >= Rat::from_integer(10.into()))
            }
            c => panic!("expected sentinel, got {c:?}"),
        }
    }

    #[test]
    fn conjugate_twist_detected() {
        // the two Puiseux series of the cusp are the same branch
        let cusp = bs("y^2-x^3");
        assert_eq!(cusp.len(), 1);
        // x^{3/2} and -x^{3/2} should be sentinel-equal via the sign twist
        let pos = &cusp[0];
        let mut neg = pos.clone();
        for t in neg.terms.iter_mut() {
            t.coefficient = t.coefficient.neg_ref();
        }
        match contact_order(pos, &neg).unwrap() {
            Contact::AtLeastTruncation(_) => {}
            c => panic!("expected sentinel, got {c:?}"),
        }
    }

    #[test]
    fn subset_examples() {
        // {x=0} is a component of {xy=0}
        assert!(germ_subset(&p("x"), &p("x*y")).unwrap().contained);
        // jacobian germ xy = 0 is not inside {fg = 0} for the cusp pair
        let v = germ_subset(&p("x*y"), &p("(x^3+y^2)*(x^2+y^3)")).unwrap();
        assert!(!v.contained);
        let w = v.witness.unwrap();
        assert!(w.vertical, "expected the {{x=0}} branch as witness");
        assert_eq!(v.witness_factor.unwrap(), p("x"));
        // suspension example: jacobian branches inside {x^p y^q = 0}
        assert!(germ_subset(&p("6*x*y^2"), &p("x^2*y^3")).unwrap().contained);
    }

    #[test]
    fn subset_reflexive_and_transitive() {
        let cases = ["x", "y^2-x^3", "x*y", "(x^2+y^3)*(x^3+y^2)", "x^2*y"];
        for c in cases {
            assert!(germ_subset(&p(c), &p(c)).unwrap().contained, "{c}");
        }
        // transitivity spot checks on monomial/binomial germs
        let chain = [("x", "x*y", "x*y*(y-x)"), ("y", "y*(y-x)", "y*(y-x)*(y+x)")];
        for (a, b, c) in chain {
            assert!(germ_subset(&p(a), &p(b)).unwrap().contained);
            assert!(germ_subset(&p(b), &p(c)).unwrap().contained);
            assert!(germ_subset(&p(a), &p(c)).unwrap().contained);
        }
    }

    #[test]
    fn factors_not_through_origin_ignored() {
        // 9xy - 4 misses the origin; only x and y matter
        assert!(
            germ_subset(&p("x*y*(9*x*y-4)"), &p("x^2*y^3"))
                .unwrap()
                .contained
        );
    }
}
