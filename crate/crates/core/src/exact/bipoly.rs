//! Bivariate polynomials in `x, y` as sparse monomial maps.

use std::collections::BTreeMap;

use num_traits::{One, Signed, Zero};

use super::rat::{rat_to_string, Rat};
use super::unipoly::{Coeff, UniPoly};

/// Variable selector for operations that eliminate or single out one variable.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }
    pub fn tag(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
        }
    }
}

/// Sparse bivariate polynomial; keys are `(x_exponent, y_exponent)` and no
/// zero coefficient is ever stored.
#[derive(Clone, Debug, PartialEq)]
pub struct BiPoly<C: Coeff> {
    terms: BTreeMap<(u32, u32), C>,
}

impl<C: Coeff> Default for BiPoly<C> {
    fn default() -> Self {
        Self::zero()
    }
}

impl<C: Coeff> BiPoly<C> {
    pub fn zero() -> Self {
        BiPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(C::one(), 0, 0)
    }

    pub fn constant(c: C) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn var(v: Var) -> Self {
        match v {
            Var::X => Self::monomial(C::one(), 1, 0),
            Var::Y => Self::monomial(C::one(), 0, 1),
        }
    }

    pub fn monomial(c: C, i: u32, j: u32) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((i, j), c);
        }
        BiPoly { terms }
    }

    pub fn from_terms(it: impl IntoIterator<Item = ((u32, u32), C)>) -> Self {
        let mut p = Self::zero();
        for ((i, j), c) in it {
            p.add_term(i, j, c);
        }
        p
    }

    pub fn add_term(&mut self, i: u32, j: u32, c: C) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry((i, j)).or_insert_with(C::zero);
        *entry = entry.add_ref(&c);
        if entry.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &C)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> C {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(C::zero)
    }

    pub fn is_constant(&self) -> bool {
        self.terms.keys().all(|&(i, j)| i == 0 && j == 0)
    }

    /// Total degree, None for the zero polynomial.
    pub fn degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Minimal total degree of a monomial (the multiplicity at the origin).
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    pub fn deg_var(&self, v: Var) -> Option<u32> {
        match v {
            Var::X => self.terms.keys().map(|&(i, _)| i).max(),
            Var::Y => self.terms.keys().map(|&(_, j)| j).max(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&(i, j), c) in &other.terms {
            out.add_term(i, j, c.neg_ref());
        }
        out
    }

    pub fn neg(&self) -> Self {
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&k, c)| (k, c.neg_ref()))
                .collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term(i1 + i2, j1 + j2, c1.mul_ref(c2));
            }
        }
        out
    }

    pub fn scale(&self, c: &C) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        BiPoly {
            terms: self
                .terms
                .iter()
                .map(|(&k, a)| (k, a.mul_ref(c)))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    pub fn partial(&self, v: Var) -> Self {
        let mut out = Self::zero();
        for (&(i, j), c) in &self.terms {
            match v {
                Var::X if i > 0 => {
                    out.add_term(i - 1, j, c.mul_ref(&C::from_i64(i as i64)))
                }
                Var::Y if j > 0 => {
                    out.add_term(i, j - 1, c.mul_ref(&C::from_i64(j as i64)))
                }
                _ => {}
            }
        }
        out
    }

    pub fn eval(&self, x: &C, y: &C) -> C {
        // Horner in y with cached powers of x; desk-scale degrees.
        let mut acc = C::zero();
        for (&(i, j), c) in &self.terms {
            let mut t = c.clone();
            for _ in 0..i {
                t = t.mul_ref(x);
            }
            for _ in 0..j {
                t = t.mul_ref(y);
            }
            acc = acc.add_ref(&t);
        }
        acc
    }

    pub fn eval_origin(&self) -> C {
        self.coeff(0, 0)
    }

    pub fn swap_vars(&self) -> Self {
        BiPoly {
            terms: self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())).collect(),
        }
    }

    /// View as a polynomial in `main` whose coefficients are univariate
    /// polynomials in the other variable; index = exponent of `main`.
    pub fn coeffs_in(&self, main: Var) -> Vec<UniPoly<C>> {
        let d = self.deg_var(main).map(|d| d as usize + 1).unwrap_or(0);
        let other = main.other().tag();
        let mut out: Vec<Vec<C>> = vec![vec![]; d];
        for (&(i, j), c) in &self.terms {
            let (m, o) = match main {
                Var::X => (i as usize, j as usize),
                Var::Y => (j as usize, i as usize),
            };
            if out[m].len() <= o {
                out[m].resize(o + 1, C::zero());
            }
            out[m][o] = c.clone();
        }
        out.into_iter().map(|v| UniPoly::new(other, v)).collect()
    }

    pub fn from_coeffs_in(main: Var, coeffs: &[UniPoly<C>]) -> Self {
        let mut p = Self::zero();
        for (m, u) in coeffs.iter().enumerate() {
            for (o, c) in u.coeffs().iter().enumerate() {
                if !c.is_zero() {
                    let (i, j) = match main {
                        Var::X => (m as u32, o as u32),
                        Var::Y => (o as u32, m as u32),
                    };
                    p.add_term(i, j, c.clone());
                }
            }
        }
        p
    }

    /// Substitute a univariate polynomial for one variable: `p(x, s(x))` for
    /// `v = Y`, or `p(s(y), y)` for `v = X`.
    pub fn subst_uni(&self, v: Var, s: &UniPoly<C>) -> UniPoly<C> {
        let coeffs = self.coeffs_in(v);
        let var = v.other().tag();
        let mut acc = UniPoly::zero(var);
        for u in coeffs.iter().rev() {
            acc = acc.mul(s);
            acc = acc.add(&UniPoly::new(var, u.coeffs().to_vec()));
        }
        acc
    }

    /// p(x, y + c)
    pub fn translate_y(&self, c: &C) -> Self {
        // Horner: p = sum_j coeffs[j](x) * (y+c)^j
        let coeffs = self.coeffs_in(Var::Y);
        let mut acc = Self::zero();
        let shift = Self::from_terms([((0u32, 1u32), C::one()), ((0, 0), c.clone())]);
        for u in coeffs.iter().rev() {
            acc = acc.mul(&shift);
            acc = acc.add(&Self::from_coeffs_in(Var::Y, std::slice::from_ref(u)));
        }
        acc
    }

    /// p(x + c, y)
    pub fn translate_x(&self, c: &C) -> Self {
        self.swap_vars().translate_y(c).swap_vars()
    }

    /// Blowup chart `(x, y) -> (x, x*y)`, divided by the maximal power of x:
    /// returns (strict transform in the chart, exponent divided out).
    pub fn blowup_chart_x(&self) -> (Self, u32) {
        let mut out = Self::zero();
        let mut min_i = u32::MAX;
        for (&(i, j), _) in &self.terms {
            min_i = min_i.min(i + j);
        }
        if min_i == u32::MAX {
            return (Self::zero(), 0);
        }
        for (&(i, j), c) in &self.terms {
            out.add_term(i + j - min_i, j, c.clone());
        }
        (out, min_i)
    }

    /// Blowup chart `(x, y) -> (x*y, y)`, divided by the maximal power of y.
    pub fn blowup_chart_y(&self) -> (Self, u32) {
        let mut out = Self::zero();
        let mut min_j = u32::MAX;
        for (&(i, j), _) in &self.terms {
            min_j = min_j.min(i + j);
        }
        if min_j == u32::MAX {
            return (Self::zero(), 0);
        }
        for (&(i, j), c) in &self.terms {
            out.add_term(i, i + j - min_j, c.clone());
        }
        (out, min_j)
    }

    /// Terms of minimal total degree, as a polynomial.
    pub fn lowest_form(&self) -> Self {
        let m = match self.order() {
            Some(m) => m,
            None => return Self::zero(),
        };
        BiPoly {
            terms: self
                .terms
                .iter()
                .filter(|(&(i, j), _)| i + j == m)
                .map(|(&k, c)| (k, c.clone()))
                .collect(),
        }
    }

    /// Exact division by single-divisor term reduction; None if not divisible.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        assert!(!d.is_zero(), "division by zero polynomial");
        let dlead = *d.terms.keys().next_back().unwrap();
        let dlc = d.terms[&dlead].clone();
        let dlc_inv = dlc.inv_ref();
        let mut rem = self.clone();
        let mut quo = Self::zero();
        while !rem.is_zero() {
            let rlead = *rem.terms.keys().next_back().unwrap();
            if rlead.0 < dlead.0 || rlead.1 < dlead.1 {
                return None;
            }
            let m = (rlead.0 - dlead.0, rlead.1 - dlead.1);
            let c = rem.terms[&rlead].mul_ref(&dlc_inv);
            quo.add_term(m.0, m.1, c.clone());
            let t = Self::monomial(c, m.0, m.1);
            rem = rem.sub(&t.mul(d));
        }
        Some(quo)
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> BiPoly<D> {
        let mut out = BiPoly::zero();
        for (&(i, j), c) in &self.terms {
            out.add_term(i, j, f(c));
        }
        out
    }
}

impl BiPoly<Rat> {
    pub fn from_int_terms(terms: &[(i64, u32, u32)]) -> Self {
        Self::from_terms(
            terms
                .iter()
                .map(|&(c, i, j)| ((i, j), Rat::from_integer(c.into()))),
        )
    }

    /// Integer-primitive normalization with positive leading coefficient in
    /// the (total degree, x-degree) order; returns (primitive, unit) with
    /// `self = unit * primitive`.
    pub fn primitive_int(&self) -> (Self, Rat) {
        use num_integer::Integer;
        if self.is_zero() {
            return (self.clone(), Rat::one());
        }
        let mut den: super::rat::Int = 1.into();
        for c in self.terms.values() {
            den = den.lcm(c.denom());
        }
        let scaled: BTreeMap<(u32, u32), super::rat::Int> = self
            .terms
            .iter()
            .map(|(&k, c)| (k, c.numer() * (&den / c.denom())))
            .collect();
        let mut content: super::rat::Int = 0.into();
        for c in scaled.values() {
            content = content.gcd(c);
        }
        let lead_key = *scaled
            .keys()
            .max_by_key(|&&(i, j)| (i + j, i))
            .unwrap();
        if scaled[&lead_key].is_negative() {
            content = -content;
        }
        let prim = BiPoly {
            terms: scaled
                .into_iter()
                .map(|(k, c)| (k, Rat::from_integer(c / &content)))
                .collect(),
        };
        (prim, Rat::new(content, den))
    }
}

impl std::fmt::Display for BiPoly<Rat> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        // Sort terms by total degree descending, then x-degree descending.
        let mut keys: Vec<&(u32, u32)> = self.terms.keys().collect();
        keys.sort_by_key(|&&(i, j)| (std::cmp::Reverse(i + j), std::cmp::Reverse(i)));
        let mut first = true;
        for &&(i, j) in &keys {
            let c = &self.terms[&(i, j)];
            let s = rat_to_string(&c.abs());
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut pieces: Vec<String> = vec![];
            if s != "1" || (i == 0 && j == 0) {
                pieces.push(s);
            }
            if i > 0 {
                pieces.push(if i == 1 { "x".into() } else { format!("x^{}", i) });
            }
            if j > 0 {
                pieces.push(if j == 1 { "y".into() } else { format!("y^{}", j) });
            }
            write!(f, "{}", pieces.join("*"))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> BiPoly<Rat> {
        crate::exact::parse::parse_poly(s).unwrap()
    }

    #[test]
    fn arithmetic_and_degree() {
        let a = p("x^3+y^2");
        assert_eq!(a.degree(), Some(3));
        assert_eq!(a.order(), Some(2));
        let b = a.mul(&a);
        assert_eq!(b, p("x^6+2*x^3*y^2+y^4"));
    }

    #[test]
    fn partials() {
        let a = p("x^3+y^2");
        assert_eq!(a.partial(Var::X), p("3*x^2"));
        assert_eq!(a.partial(Var::Y), p("2*y"));
    }

    #[test]
    fn blowup_charts() {
        // f = x^2 + y^3 in chart (x, xy): x^2(1 + x y^3)
        let a = p("x^2+y^3");
        let (s, m) = a.blowup_chart_x();
        assert_eq!(m, 2);
        assert_eq!(s, p("1+x*y^3"));
        // chart (xy, y): y^2(x^2 + y)
        let (s2, m2) = a.blowup_chart_y();
        assert_eq!(m2, 2);
        assert_eq!(s2, p("x^2+y"));
    }

    #[test]
    fn translate() {
        let a = p("y^2");
        let t = a.translate_y(&Rat::from_integer(1.into()));
        assert_eq!(t, p("y^2+2*y+1"));
        let b = p("x*y");
        assert_eq!(b.translate_x(&Rat::from_integer((-2).into())), p("x*y-2*y"));
    }

    #[test]
    fn exact_division() {
        let a = p("9*x^2*y^2-4*x*y");
        let d = p("9*x*y-4");
        assert_eq!(a.div_exact(&d), Some(p("x*y")));
        assert_eq!(a.div_exact(&p("x+1")), None);
    }

    #[test]
    fn display_deterministic() {
        assert_eq!(p("9*x*y-4").to_string(), "9*x*y - 4");
        assert_eq!(p("y^2-x^3").to_string(), "-x^3 + y^2");
    }
}
