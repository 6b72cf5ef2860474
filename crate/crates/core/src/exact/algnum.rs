//! Algebraic extension towers over Q.
//!
//! User-visible shape: a tower is a chain of generators, each with a monic
//! minimal polynomial over the previous level, verified irreducible at
//! construction. Internally every field is flattened to a single primitive
//! element theta with an irreducible minimal polynomial over Q, so that all
//! arithmetic is plain "polynomials mod M" and factorization over the tower
//! reduces to norms (resultants) plus rational factorization.

use std::sync::Arc;

use num_traits::{One, Zero};

use crate::error::{Error, Result};

use super::bipoly::{BiPoly, Var};
use super::factor_uni::factor_unipoly;
use super::rat::{rat_to_string, Rat};
use super::resultant::resultant;
use super::unipoly::{Coeff, UniPoly};

pub const DEFAULT_TOWER_LIMIT: u32 = 24;

/// One step of the user-visible tower chain.
#[derive(Clone, Debug)]
pub struct ChainGen {
    pub tag: String,
    /// Minimal polynomial over the previous level; coefficient k is the value
    /// polynomial (in the previous primitive root) of that coefficient.
    pub min_poly_prev: Vec<UniPoly<Rat>>,
    /// This generator expressed in the current primitive root.
    pub embed: UniPoly<Rat>,
}

/// A number field Q(theta) with its chain presentation.
#[derive(Debug)]
pub struct NumberField {
    /// Monic irreducible minimal polynomial of theta over Q, variable 'w'.
    pub min_poly: UniPoly<Rat>,
    pub chain: Vec<ChainGen>,
}

impl NumberField {
    pub fn degree(&self) -> u32 {
        self.min_poly.deg() as u32
    }
}

impl PartialEq for NumberField {
    fn eq(&self, other: &Self) -> bool {
        self.min_poly == other.min_poly
    }
}

/// An element of Q or of a [`NumberField`]. `field == None` means rational.
#[derive(Clone, Debug)]
pub struct AlgNum {
    pub field: Option<Arc<NumberField>>,
    /// Value as a polynomial in theta, reduced mod the minimal polynomial.
    value: UniPoly<Rat>,
}

impl PartialEq for AlgNum {
    fn eq(&self, other: &Self) -> bool {
        match (&self.field, &other.field) {
            (None, None) => self.value == other.value,
            (Some(a), Some(b)) => {
                (Arc::ptr_eq(a, b) || a.min_poly == b.min_poly) && self.value == other.value
            }
            (None, Some(_)) => other.value.degree() <= Some(0) && self.value == other.value,
            (Some(_), None) => self.value.degree() <= Some(0) && self.value == other.value,
        }
    }
}

impl AlgNum {
    pub fn rational(r: Rat) -> Self {
        AlgNum {
            field: None,
            value: UniPoly::constant('w', r),
        }
    }

    pub fn from_i64(n: i64) -> Self {
        Self::rational(Rat::from_integer(n.into()))
    }

    pub fn in_field(field: &Arc<NumberField>, value: UniPoly<Rat>) -> Self {
        let v = value.rem(&field.min_poly);
        AlgNum {
            field: Some(Arc::clone(field)),
            value: v,
        }
    }

    /// The primitive generator of a field.
    pub fn generator(field: &Arc<NumberField>) -> Self {
        Self::in_field(field, UniPoly::monomial('w', Rat::one(), 1))
    }

    pub fn value(&self) -> &UniPoly<Rat> {
        &self.value
    }

    pub fn as_rational(&self) -> Option<Rat> {
        if self.value.degree().map(|d| d == 0).unwrap_or(true) {
            Some(self.value.coeff(0))
        } else {
            None
        }
    }

    pub fn field_degree(&self) -> u32 {
        self.field.as_ref().map(|f| f.degree()).unwrap_or(1)
    }

    fn promote(&self, field: &Arc<NumberField>) -> UniPoly<Rat> {
        match &self.field {
            None => self.value.clone(),
            Some(f) => {
                assert!(
                    Arc::ptr_eq(f, field) || f.min_poly == field.min_poly,
                    "algebraic numbers from incompatible fields"
                );
                self.value.clone()
            }
        }
    }

    fn common_field(&self, other: &Self) -> Option<Arc<NumberField>> {
        match (&self.field, &other.field) {
            (None, None) => None,
            (Some(f), None) => Some(Arc::clone(f)),
            (None, Some(f)) => Some(Arc::clone(f)),
            (Some(a), Some(b)) => {
                assert!(
                    Arc::ptr_eq(a, b) || a.min_poly == b.min_poly,
                    "algebraic numbers from incompatible fields"
                );
                Some(Arc::clone(a))
            }
        }
    }

    /// Minimal polynomial over Q (monic): squarefree part of the
    /// characteristic polynomial Res_w(M(w), z - value(w)).
    pub fn min_poly_q(&self) -> UniPoly<Rat> {
        match &self.field {
            None => UniPoly::new(
                'z',
                vec![-self.value.coeff(0), Rat::one()],
            ),
            Some(f) => {
                // char(z) = Res_w(M(w), z - value(w))
                let mut big = BiPoly::zero();
                // x <-> z, y <-> w
                big.add_term(1, 0, Rat::one());
                for (k, c) in self.value.coeffs().iter().enumerate() {
                    big.add_term(0, k as u32, -c.clone());
                }
                let m_big = unipoly_to_bipoly_y(&f.min_poly);
                let ch = resultant(&m_big, &big, Var::Y).expect("charpoly resultant");
                let ch = UniPoly::new('z', ch.coeffs().to_vec());
                let sf = ch.div_exact(&ch.gcd(&ch.derivative())).unwrap();
                sf.monic().0
            }
        }
    }

    pub fn pow_i64(&self, e: i64) -> Self {
        if e < 0 {
            return self.inv_ref().pow_i64(-e);
        }
        let mut acc = AlgNum::rational(Rat::one());
        let mut base = self.clone();
        let mut e = e as u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul_ref(&base);
            }
            base = base.mul_ref(&base);
            e >>= 1;
        }
        acc
    }

    /// Short human form: rational as-is, otherwise value in `w` with the
    /// minimal polynomial attached.
    pub fn display(&self) -> String {
        match self.as_rational() {
            Some(r) => rat_to_string(&r),
            None => {
                let f = self.field.as_ref().unwrap();
                let wpoly = UniPoly::new('w', self.value.coeffs().to_vec());
                format!("{} where {} = 0", wpoly, f.min_poly)
            }
        }
    }
}

impl std::ops::Add for AlgNum {
    type Output = AlgNum;
    fn add(self, rhs: AlgNum) -> AlgNum {
        self.add_ref(&rhs)
    }
}

impl std::ops::Mul for AlgNum {
    type Output = AlgNum;
    fn mul(self, rhs: AlgNum) -> AlgNum {
        self.mul_ref(&rhs)
    }
}

impl Zero for AlgNum {
    fn zero() -> Self {
        AlgNum::rational(Rat::zero())
    }
    fn is_zero(&self) -> bool {
        self.value.is_zero()
    }
}

impl One for AlgNum {
    fn one() -> Self {
        AlgNum::rational(Rat::one())
    }
}

impl Coeff for AlgNum {
    fn add_ref(&self, other: &Self) -> Self {
        match self.common_field(other) {
            None => AlgNum::rational(self.value.coeff(0) + other.value.coeff(0)),
            Some(f) => {
                let v = self.promote(&f).add(&other.promote(&f));
                AlgNum {
                    field: Some(f),
                    value: v,
                }
            }
        }
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self.add_ref(&other.neg_ref())
    }
    fn mul_ref(&self, other: &Self) -> Self {
        match self.common_field(other) {
            None => AlgNum::rational(self.value.coeff(0) * other.value.coeff(0)),
            Some(f) => {
                let v = self.promote(&f).mul(&other.promote(&f)).rem(&f.min_poly);
                AlgNum {
                    field: Some(f),
                    value: v,
                }
            }
        }
    }
    fn neg_ref(&self) -> Self {
        AlgNum {
            field: self.field.clone(),
            value: self.value.neg(),
        }
    }
    fn inv_ref(&self) -> Self {
        assert!(!self.value.is_zero(), "inverse of zero algebraic number");
        match &self.field {
            None => AlgNum::rational(Rat::one() / self.value.coeff(0)),
            Some(f) => {
                // extended Euclid: u*value + v*M = 1
                let (g, u) = half_extended_gcd(&self.value, &f.min_poly);
                assert_eq!(g.degree(), Some(0), "non-invertible tower element");
                let scale = Rat::one() / g.coeff(0);
                AlgNum {
                    field: Some(Arc::clone(f)),
                    value: u.scale(&scale).rem(&f.min_poly),
                }
            }
        }
    }
    fn from_i64(n: i64) -> Self {
        AlgNum::from_i64(n)
    }
}

/// Returns (gcd, u) with u*a = gcd (mod b).
fn half_extended_gcd(a: &UniPoly<Rat>, b: &UniPoly<Rat>) -> (UniPoly<Rat>, UniPoly<Rat>) {
    let mut r0 = a.clone();
    let mut r1 = b.clone();
    let mut u0 = UniPoly::one(a.var);
    let mut u1 = UniPoly::zero(a.var);
    while !r1.is_zero() {
        let (q, r) = r0.divrem(&r1);
        let nu = u0.sub(&q.mul(&u1));
        r0 = r1;
        r1 = r;
        u0 = u1;
        u1 = nu;
    }
    (r0, u0)
}

fn unipoly_to_bipoly_y(u: &UniPoly<Rat>) -> BiPoly<Rat> {
    let mut out = BiPoly::zero();
    for (k, c) in u.coeffs().iter().enumerate() {
        out.add_term(0, k as u32, c.clone());
    }
    out
}

/// Result of extending a field by an irreducible polynomial.
pub struct Extension {
    pub field: Option<Arc<NumberField>>,
    /// The adjoined root, as an element of `field`.
    pub root: AlgNum,
    /// Re-expresses elements of the base field in the new one.
    map: Option<EmbedMap>,
}

struct EmbedMap {
    new_field: Arc<NumberField>,
    theta_prev: UniPoly<Rat>,
}

impl Extension {
    pub fn lift(&self, a: &AlgNum) -> AlgNum {
        match (&self.map, &a.field) {
            (_, None) => match &self.field {
                None => a.clone(),
                Some(f) => AlgNum::in_field(f, a.value.clone()),
            },
            (None, Some(_)) => a.clone(),
            (Some(m), Some(_)) => {
                // evaluate a.value at theta_prev inside the new field
                let theta = AlgNum::in_field(&m.new_field, m.theta_prev.clone());
                let mut acc = AlgNum::rational(Rat::zero());
                for c in a.value.coeffs().iter().rev() {
                    acc = acc.mul_ref(&theta).add_ref(&AlgNum::rational(c.clone()));
                }
                acc
            }
        }
    }

    pub fn lift_poly(&self, p: &UniPoly<AlgNum>) -> UniPoly<AlgNum> {
        p.map_coeffs(|c| self.lift(c))
    }

    pub fn lift_bipoly(&self, p: &BiPoly<AlgNum>) -> BiPoly<AlgNum> {
        p.map_coeffs(|c| self.lift(c))
    }
}

/// Adjoin a root of the monic irreducible `psi` to `base`. Degree-1 inputs
/// yield no extension; reducible inputs are rejected (factor first).
pub fn extend(
    base: Option<&Arc<NumberField>>,
    tag: &str,
    psi: &UniPoly<AlgNum>,
    limit: u32,
) -> Result<Extension> {
    assert!(psi.degree().map(|d| d >= 1).unwrap_or(false));
    let (psi, _) = psi.monic();
    if psi.deg() == 1 {
        let root = psi.coeff(0).neg_ref();
        return Ok(Extension {
            field: base.cloned(),
            root,
            map: None,
        });
    }
    let base_deg = base.map(|f| f.degree()).unwrap_or(1);
    let new_deg = base_deg * psi.deg() as u32;
    if new_deg > limit {
        return Err(Error::TowerLimit { limit });
    }

    match base {
        None => {
            // coefficients are rational
            let m: UniPoly<Rat> = UniPoly::new(
                'w',
                psi.coeffs()
                    .iter()
                    .map(|c| c.as_rational().expect("rational coefficients"))
                    .collect(),
            );
            let (_, fs) = factor_unipoly(&m);
            if fs.len() != 1 || fs[0].1 != 1 {
                return Err(Error::DegenerateInput(
                    "extension polynomial is reducible over its level".into(),
                ));
            }
            let field = Arc::new(NumberField {
                min_poly: m.clone(),
                chain: vec![ChainGen {
                    tag: tag.to_string(),
                    min_poly_prev: m
                        .coeffs()
                        .iter()
                        .map(|c| UniPoly::constant('w', c.clone()))
                        .collect(),
                    embed: UniPoly::monomial('w', Rat::one(), 1),
                }],
            });
            let root = AlgNum::generator(&field);
            let map = EmbedMap {
                new_field: Arc::clone(&field),
                theta_prev: UniPoly::zero('w'),
            };
            Ok(Extension {
                field: Some(field),
                root,
                map: Some(map),
            })
        }
        Some(k) => {
            let m_old = &k.min_poly;
            // Psi(z, w): z-powers weighted by the value polynomials in w.
            let mut psi_big = BiPoly::zero();
            for (zdeg, c) in psi.coeffs().iter().enumerate() {
                let v = c.promote(k);
                for (wdeg, r) in v.coeffs().iter().enumerate() {
                    psi_big.add_term(zdeg as u32, wdeg as u32, r.clone());
                }
            }
            let m_big = unipoly_to_bipoly_y(m_old);

            for shift in 1..64i64 {
                let c = Rat::from_integer(shift.into());
                // substitute z -> z - c*w in psi_big
                let shifted = subst_x_minus_cy(&psi_big, &c);
                let mprime = resultant(&m_big, &shifted, Var::Y)?;
                let mprime = UniPoly::new('w', mprime.coeffs().to_vec());
                if mprime.degree() != Some(new_deg as usize) {
                    continue;
                }
                if mprime.gcd(&mprime.derivative()).deg() != 0 {
                    continue;
                }
                let mprime = mprime.monic().0;
                let (_, fs) = factor_unipoly(&mprime);
                if fs.len() != 1 || fs[0].1 != 1 {
                    return Err(Error::DegenerateInput(
                        "extension polynomial is reducible over its level".into(),
                    ));
                }
                // Provisional new field; chain filled in below.
                let nf = Arc::new(NumberField {
                    min_poly: mprime.clone(),
                    chain: vec![],
                });
                // Locate theta_old inside the new field:
                // gcd_w( M(w), Psi(theta' - c*w, w) ) is linear for good c.
                let theta_new = AlgNum::generator(&nf);
                let m_in_new: UniPoly<AlgNum> =
                    m_old.map_coeffs(|r| AlgNum::rational(r.clone()));
                let cnum = AlgNum::rational(c.clone());
                // build Psi(theta' - c*w, w) as a poly in w over the new field
                let mut p2 = UniPoly::zero('w');
                for (&(zi, wj), r) in psi_big.terms() {
                    // (theta' - c w)^zi * w^wj * r
                    let lin = UniPoly::new(
                        'w',
                        vec![theta_new.clone(), cnum.neg_ref()],
                    );
                    let term = lin
                        .pow(zi)
                        .mul(&UniPoly::monomial('w', AlgNum::rational(r.clone()), wj as usize));
                    p2 = p2.add(&term);
                }
                let g = m_in_new.gcd(&p2);
                if g.degree() != Some(1) {
                    continue;
                }
                let theta_old_in_new = g.coeff(0).neg_ref();
                let root = theta_new.sub_ref(&cnum.mul_ref(&theta_old_in_new));
                // sanity: root satisfies psi
                debug_assert!({
                    let lifted_map = EmbedMap {
                        new_field: Arc::clone(&nf),
                        theta_prev: theta_old_in_new.value.clone(),
                    };
                    let ext = Extension {
                        field: Some(Arc::clone(&nf)),
                        root: root.clone(),
                        map: Some(lifted_map),
                    };
                    let lifted = ext.lift_poly(&psi);
                    lifted.eval(&root).is_zero()
                });

                // chain metadata: lift old chain embeds, append the new gen.
                let mut chain: Vec<ChainGen> = vec![];
                for g_old in &k.chain {
                    let val = eval_rat_poly_at(&g_old.embed, &theta_old_in_new, &nf);
                    chain.push(ChainGen {
                        tag: g_old.tag.clone(),
                        min_poly_prev: g_old.min_poly_prev.clone(),
                        embed: val.value,
                    });
                }
                chain.push(ChainGen {
                    tag: tag.to_string(),
                    min_poly_prev: psi
                        .coeffs()
                        .iter()
                        .map(|c| c.promote(k))
                        .collect(),
                    embed: root.value.clone(),
                });
                let field = Arc::new(NumberField {
                    min_poly: mprime,
                    chain,
                });
                // rebind root/map to the final field object
                let root = AlgNum {
                    field: Some(Arc::clone(&field)),
                    value: root.value,
                };
                let map = EmbedMap {
                    new_field: Arc::clone(&field),
                    theta_prev: theta_old_in_new.value,
                };
                return Ok(Extension {
                    field: Some(field),
                    root,
                    map: Some(map),
                });
            }
            Err(Error::InternalLimit(
                "no primitive-element shift found".into(),
            ))
        }
    }
}

fn eval_rat_poly_at(p: &UniPoly<Rat>, at: &AlgNum, field: &Arc<NumberField>) -> AlgNum {
    let mut acc = AlgNum::rational(Rat::zero());
    let at = AlgNum {
        field: Some(Arc::clone(field)),
        value: at.value.clone(),
    };
    for c in p.coeffs().iter().rev() {
        acc = acc.mul_ref(&at).add_ref(&AlgNum::rational(c.clone()));
    }
    acc
}

/// x -> x - c*y on a bivariate polynomial.
fn subst_x_minus_cy(p: &BiPoly<Rat>, c: &Rat) -> BiPoly<Rat> {
    let coeffs = p.coeffs_in(Var::X);
    let mut acc = BiPoly::zero();
    let sub = BiPoly::from_terms([
        ((1u32, 0u32), Rat::one()),
        ((0, 1), -c.clone()),
    ]);
    for u in coeffs.iter().rev() {
        acc = acc.mul(&sub);
        acc = acc.add(&BiPoly::from_coeffs_in(Var::X, std::slice::from_ref(u)));
    }
    acc
}

/// Factor a univariate polynomial over the field `base` into monic
/// irreducibles with multiplicities (Trager's norm method).
pub fn factor_over_field(
    base: Option<&Arc<NumberField>>,
    poly: &UniPoly<AlgNum>,
) -> Result<Vec<(UniPoly<AlgNum>, u32)>> {
    assert!(!poly.is_zero());
    if poly.deg() == 0 {
        return Ok(vec![]);
    }
    let k = match base {
        None => {
            // rational coefficients
            let m = UniPoly::new(
                poly.var,
                poly.coeffs()
                    .iter()
                    .map(|c| c.as_rational().expect("rational coefficients"))
                    .collect(),
            );
            let (_, fs) = factor_unipoly(&m);
            return Ok(fs
                .into_iter()
                .map(|(f, e)| (f.map_coeffs(|r| AlgNum::rational(r.clone())), e))
                .collect());
        }
        Some(k) => k,
    };

    let (monic, _) = poly.monic();
    let mut out: Vec<(UniPoly<AlgNum>, u32)> = vec![];
    // An irreducible factor of multiplicity e survives in exactly e of the
    // successive gcd stages, so counting appearances gives multiplicities.
    let mut rest = monic;
    while rest.degree().map(|d| d >= 1).unwrap_or(false) {
        let g = rest.gcd(&rest.derivative());
        let sqf = rest.div_exact(&g).unwrap();
        if sqf.degree().map(|d| d >= 1).unwrap_or(false) {
            for f in factor_squarefree_over_field(k, &sqf)? {
                out.push((f, 1));
            }
        }
        rest = g;
    }
    let mut merged: Vec<(UniPoly<AlgNum>, u32)> = vec![];
    'outer: for (f, e) in out {
        for m in merged.iter_mut() {
            if m.0 == f {
                m.1 += e;
                continue 'outer;
            }
        }
        merged.push((f, e));
    }
    Ok(merged)
}

fn factor_squarefree_over_field(
    k: &Arc<NumberField>,
    poly: &UniPoly<AlgNum>,
) -> Result<Vec<UniPoly<AlgNum>>> {
    if poly.deg() == 1 {
        return Ok(vec![poly.clone()]);
    }
    let m_big = unipoly_to_bipoly_y(&k.min_poly);
    for shift in 0..64i64 {
        let s = Rat::from_integer(shift.into());
        // g_s(z) = poly(z - s*theta)
        let snum = AlgNum {
            field: Some(Arc::clone(k)),
            value: UniPoly::monomial('w', s.clone(), 1),
        };
        let lin = UniPoly::new('z', vec![snum.neg_ref(), AlgNum::one()]);
        let g_s = poly.compose(&lin);
        // norm: lift coefficients to polys in w, resultant with M
        let mut g_big = BiPoly::zero();
        for (zdeg, c) in g_s.coeffs().iter().enumerate() {
            let v = c.promote(k);
            for (wdeg, r) in v.coeffs().iter().enumerate() {
                g_big.add_term(zdeg as u32, wdeg as u32, r.clone());
            }
        }
        let norm = resultant(&m_big, &g_big, Var::Y)?;
        let norm = UniPoly::new('z', norm.coeffs().to_vec());
        if norm.is_zero() || norm.gcd(&norm.derivative()).deg() != 0 {
            continue;
        }
        let (_, nfs) = factor_unipoly(&norm);
        let mut out = vec![];
        for (nf, _) in nfs {
            let nf_k = nf.map_coeffs(|r| AlgNum::rational(r.clone()));
            let h = g_s.gcd(&nf_k);
            if h.degree().map(|d| d >= 1).unwrap_or(false) {
                // un-shift: factor of poly is h(z + s*theta)
                let snum = AlgNum {
                    field: Some(Arc::clone(k)),
                    value: UniPoly::monomial('w', s.clone(), 1),
                };
                let lin_back = UniPoly::new('z', vec![snum, AlgNum::one()]);
                let f = h.compose(&lin_back).monic().0;
                out.push(f);
            }
        }
        let total: usize = out.iter().map(|f| f.deg()).sum();
        if total == poly.deg() {
            out.sort_by_key(|f| f.deg());
            return Ok(out);
        }
    }
    Err(Error::InternalLimit("Trager shift exhausted".into()))
}

/// Roots of `poly` lying in the base field.
pub fn roots_in_field(
    base: Option<&Arc<NumberField>>,
    poly: &UniPoly<AlgNum>,
) -> Result<Vec<AlgNum>> {
    let fs = factor_over_field(base, poly)?;
    let mut out = vec![];
    for (f, _) in fs {
        if f.deg() == 1 {
            out.push(f.coeff(0).neg_ref());
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> AlgNum {
        AlgNum::from_i64(n)
    }

    fn sqrt2_field() -> Arc<NumberField> {
        let psi = UniPoly::new('z', vec![q(-2), q(0), q(1)]);
        extend(None, "a", &psi, DEFAULT_TOWER_LIMIT)
            .unwrap()
            .field
            .unwrap()
    }

    #[test]
    fn quadratic_arithmetic() {
        let f = sqrt2_field();
        let a = AlgNum::generator(&f); // sqrt(2)
        let two = a.mul_ref(&a);
        assert_eq!(two.as_rational(), Some(Rat::from_integer(2.into())));
        let inv = a.inv_ref();
        assert_eq!(a.mul_ref(&inv).as_rational(), Some(Rat::one()));
    }

    #[test]
    fn tower_of_two_quadratics() {
        // Q(sqrt2, sqrt3) has degree 4 with a primitive element.
        let f = sqrt2_field();
        let psi = UniPoly::new(
            'z',
            vec![AlgNum::in_field(&f, UniPoly::from_i64('w', &[-3])), AlgNum::zero(), AlgNum::one()],
        );
        let ext = extend(Some(&f), "b", &psi, DEFAULT_TOWER_LIMIT).unwrap();
        let nf = ext.field.clone().unwrap();
        assert_eq!(nf.degree(), 4);
        assert_eq!(nf.chain.len(), 2);
        // lifted sqrt2 still squares to 2
        let s2 = ext.lift(&AlgNum::generator(&f));
        assert_eq!(s2.mul_ref(&s2).as_rational(), Some(Rat::from_integer(2.into())));
        // the new root squares to 3
        let r = ext.root.clone();
        assert_eq!(r.mul_ref(&r).as_rational(), Some(Rat::from_integer(3.into())));
        // (a+b)-b = a and (a*b)/b = a
        let sum = s2.add_ref(&r);
        assert_eq!(sum.sub_ref(&r), s2);
        let prod = s2.mul_ref(&r);
        assert_eq!(prod.mul_ref(&r.inv_ref()), s2);
    }

    #[test]
    fn reducible_extension_rejected() {
        let psi = UniPoly::new('z', vec![q(-4), q(0), q(1)]); // z^2-4
        assert!(extend(None, "a", &psi, 24).is_err());
    }

    #[test]
    fn degree_one_is_no_extension() {
        let psi = UniPoly::new('z', vec![q(5), q(1)]);
        let ext = extend(None, "a", &psi, 24).unwrap();
        assert!(ext.field.is_none());
        assert_eq!(ext.root.as_rational(), Some(Rat::from_integer((-5).into())));
    }

    #[test]
    fn tower_limit_enforced() {
        let psi = UniPoly::new('z', vec![q(-2), q(0), q(0), q(0), q(0), q(1)]); // z^5-2
        assert!(matches!(
            extend(None, "a", &psi, 4),
            Err(Error::TowerLimit { limit: 4 })
        ));
    }

    #[test]
    fn factor_over_quadratic_field() {
        // z^2 - 2 splits over Q(sqrt2)
        let f = sqrt2_field();
        let poly = UniPoly::new('z', vec![q(-2), q(0), q(1)]);
        let poly = poly.map_coeffs(|c| c.clone());
        let fs = factor_over_field(Some(&f), &poly).unwrap();
        assert_eq!(fs.len(), 2);
        for (h, e) in &fs {
            assert_eq!(*e, 1);
            assert_eq!(h.deg(), 1);
        }
        let roots = roots_in_field(Some(&f), &poly).unwrap();
        assert_eq!(roots.len(), 2);
        let a = AlgNum::generator(&f);
        assert!(roots.contains(&a) && roots.contains(&a.neg_ref()));
    }

    #[test]
    fn factor_keeps_irreducible_whole() {
        // z^2 - 3 stays irreducible over Q(sqrt2)
        let f = sqrt2_field();
        let poly = UniPoly::new('z', vec![q(-3), q(0), q(1)]);
        let fs = factor_over_field(Some(&f), &poly).unwrap();
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].0.deg(), 2);
    }

    #[test]
    fn min_poly_of_sum() {
        let f = sqrt2_field();
        let a = AlgNum::generator(&f);
        let b = a.add_ref(&q(1)); // 1+sqrt2: min poly z^2-2z-1
        let mp = b.min_poly_q();
        assert_eq!(mp, UniPoly::from_i64('z', &[-1, -2, 1]));
    }
}
