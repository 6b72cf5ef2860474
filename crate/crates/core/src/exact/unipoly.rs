//! Dense univariate polynomials over a field of coefficients.
//!
//! The coefficient field is abstracted by [`Coeff`] so the same code serves
//! `Rat` and tower elements ([`crate::exact::algnum::AlgNum`]).

use num_traits::{One, Signed, Zero};

use super::rat::Rat;

/// Field operations needed by the polynomial layer; `Zero`/`One` supply the
/// identities and zero tests.
pub trait Coeff: Clone + PartialEq + std::fmt::Debug + Zero + One {
    fn add_ref(&self, other: &Self) -> Self;
    fn sub_ref(&self, other: &Self) -> Self;
    fn mul_ref(&self, other: &Self) -> Self;
    fn neg_ref(&self) -> Self;
    /// Multiplicative inverse. Panics on zero.
    fn inv_ref(&self) -> Self;
    fn from_i64(n: i64) -> Self;

    fn div_ref(&self, other: &Self) -> Self {
        self.mul_ref(&other.inv_ref())
    }
}

impl Coeff for Rat {
    fn add_ref(&self, other: &Self) -> Self {
        self + other
    }
    fn sub_ref(&self, other: &Self) -> Self {
        self - other
    }
    fn mul_ref(&self, other: &Self) -> Self {
        self * other
    }
    fn neg_ref(&self) -> Self {
        -self
    }
    fn inv_ref(&self) -> Self {
        assert!(!Zero::is_zero(self), "inverse of zero");
        self.recip()
    }
    fn from_i64(n: i64) -> Self {
        Rat::from_integer(n.into())
    }
}

/// Univariate polynomial, dense from degree 0, with a variable tag used for
/// display and to record which variable survives a resultant.
#[derive(Clone, Debug, PartialEq)]
pub struct UniPoly<C: Coeff> {
    pub var: char,
    coeffs: Vec<C>,
}

impl<C: Coeff> UniPoly<C> {
    pub fn new(var: char, mut coeffs: Vec<C>) -> Self {
        while coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            coeffs.pop();
        }
        UniPoly { var, coeffs }
    }

    pub fn zero(var: char) -> Self {
        UniPoly { var, coeffs: vec![] }
    }

    pub fn one(var: char) -> Self {
        UniPoly { var, coeffs: vec![C::one()] }
    }

    pub fn constant(var: char, c: C) -> Self {
        Self::new(var, vec![c])
    }

    pub fn monomial(var: char, c: C, k: usize) -> Self {
        if c.is_zero() {
            return Self::zero(var);
        }
        let mut coeffs = vec![C::zero(); k + 1];
        coeffs[k] = c;
        UniPoly { var, coeffs }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        if self.coeffs.is_empty() {
            None
        } else {
            Some(self.coeffs.len() - 1)
        }
    }

    /// Degree of a nonzero polynomial; panics on zero.
    pub fn deg(&self) -> usize {
        self.degree().expect("degree of zero polynomial")
    }

    pub fn coeff(&self, k: usize) -> C {
        self.coeffs.get(k).cloned().unwrap_or_else(C::zero)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn lead(&self) -> &C {
        self.coeffs.last().expect("leading coefficient of zero")
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).add_ref(&other.coeff(k)));
        }
        Self::new(self.var, out)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = Vec::with_capacity(n);
        for k in 0..n {
            out.push(self.coeff(k).sub_ref(&other.coeff(k)));
        }
        Self::new(self.var, out)
    }

    pub fn neg(&self) -> Self {
        UniPoly {
            var: self.var,
            coeffs: self.coeffs.iter().map(|c| c.neg_ref()).collect(),
        }
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.var);
        }
        let mut out = vec![C::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].add_ref(&a.mul_ref(b));
            }
        }
        Self::new(self.var, out)
    }

    pub fn scale(&self, c: &C) -> Self {
        Self::new(
            self.var,
            self.coeffs.iter().map(|a| a.mul_ref(c)).collect(),
        )
    }

    pub fn pow(&self, mut e: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.var);
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

    /// Euclidean division; divisor must be nonzero.
    pub fn divrem(&self, d: &Self) -> (Self, Self) {
        assert!(!d.is_zero(), "division by zero polynomial");
        let mut rem = self.clone();
        let dd = d.deg();
        let lead_inv = d.lead().inv_ref();
        let mut quo = vec![C::zero(); self.coeffs.len().saturating_sub(dd)];
        while !rem.is_zero() && rem.deg() >= dd {
            let k = rem.deg() - dd;
            let q = rem.lead().mul_ref(&lead_inv);
            for (i, c) in d.coeffs.iter().enumerate() {
                let t = rem.coeff(i + k).sub_ref(&q.mul_ref(c));
                rem.set(i + k, t);
            }
            rem.trim();
            quo[k] = q;
        }
        (Self::new(self.var, quo), rem)
    }

    pub fn rem(&self, d: &Self) -> Self {
        self.divrem(d).1
    }

    /// Exact division; returns None when the remainder is nonzero.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        let (q, r) = self.divrem(d);
        if r.is_zero() {
            Some(q)
        } else {
            None
        }
    }

    fn set(&mut self, k: usize, c: C) {
        if k < self.coeffs.len() {
            self.coeffs[k] = c;
        } else if !c.is_zero() {
            while self.coeffs.len() < k {
                self.coeffs.push(C::zero());
            }
            self.coeffs.push(c);
        }
    }

    fn trim(&mut self) {
        while self.coeffs.last().map(|c| c.is_zero()).unwrap_or(false) {
            self.coeffs.pop();
        }
    }

    pub fn derivative(&self) -> Self {
        if self.coeffs.len() <= 1 {
            return Self::zero(self.var);
        }
        let mut out = Vec::with_capacity(self.coeffs.len() - 1);
        for (k, c) in self.coeffs.iter().enumerate().skip(1) {
            out.push(c.mul_ref(&C::from_i64(k as i64)));
        }
        Self::new(self.var, out)
    }

    pub fn eval(&self, x: &C) -> C {
        let mut acc = C::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc.mul_ref(x).add_ref(c);
        }
        acc
    }

    /// Splits off the leading coefficient: returns (monic polynomial, lead).
    pub fn monic(&self) -> (Self, C) {
        if self.is_zero() {
            return (self.clone(), C::one());
        }
        let l = self.lead().clone();
        let inv = l.inv_ref();
        (self.scale(&inv), l)
    }

    /// Monic gcd by the Euclidean algorithm over the coefficient field.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if a.is_zero() {
            a
        } else {
            a.monic().0
        }
    }

    /// p(x + a)
    pub fn shift(&self, a: &C) -> Self {
        let lin = Self::new(self.var, vec![a.clone(), C::one()]);
        self.compose(&lin)
    }

    /// p(q(x))
    pub fn compose(&self, q: &Self) -> Self {
        let mut acc = Self::zero(self.var);
        for c in self.coeffs.iter().rev() {
            acc = acc.mul(q);
            acc = acc.add(&Self::constant(self.var, c.clone()));
        }
        acc
    }

    /// Largest k with x^k dividing p; zero polynomial reports 0.
    pub fn order(&self) -> usize {
        self.coeffs
            .iter()
            .position(|c| !c.is_zero())
            .unwrap_or(0)
    }

    pub fn div_xpow(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        Self::new(self.var, self.coeffs[k.min(self.coeffs.len())..].to_vec())
    }

    pub fn map_coeffs<D: Coeff>(&self, f: impl Fn(&C) -> D) -> UniPoly<D> {
        UniPoly::new(self.var, self.coeffs.iter().map(|c| f(c)).collect())
    }
}

impl UniPoly<Rat> {
    pub fn from_i64(var: char, coeffs: &[i64]) -> Self {
        Self::new(
            var,
            coeffs.iter().map(|&c| Rat::from_integer(c.into())).collect(),
        )
    }

    /// Clears denominators and the integer content: returns (primitive
    /// integer-coefficient polynomial with positive lead, rational unit) with
    /// `self = unit * primitive`.
    pub fn primitive_int(&self) -> (Self, Rat) {
        use num_integer::Integer;
        if self.is_zero() {
            return (self.clone(), Rat::one());
        }
        let mut den: super::rat::Int = 1.into();
        for c in &self.coeffs {
            den = den.lcm(c.denom());
        }
        let scaled: Vec<super::rat::Int> = self
            .coeffs
            .iter()
            .map(|c| c.numer() * (&den / c.denom()))
            .collect();
        let mut content: super::rat::Int = 0.into();
        for c in &scaled {
            content = content.gcd(c);
        }
        if scaled.last().unwrap().is_negative() {
            content = -content;
        }
        let prim = Self::new(
            self.var,
            scaled
                .iter()
                .map(|c| Rat::from_integer(c / &content))
                .collect(),
        );
        let unit = Rat::new(content, den);
        (prim, unit)
    }
}

impl std::fmt::Display for UniPoly<Rat> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate().rev() {
            if Zero::is_zero(c) {
                continue;
            }
            let s = super::rat::rat_to_string(&c.abs());
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
            match k {
                0 => write!(f, "{}", s)?,
                _ => {
                    if s != "1" {
                        write!(f, "{}*", s)?;
                    }
                    write!(f, "{}", self.var)?;
                    if k > 1 {
                        write!(f, "^{}", k)?;
                    }
                }
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat::rat_i64;

    fn p(c: &[i64]) -> UniPoly<Rat> {
        UniPoly::from_i64('x', c)
    }

    #[test]
    fn divrem_exact() {
        // (x^2 - 1) = (x - 1)(x + 1)
        let a = p(&[-1, 0, 1]);
        let b = p(&[-1, 1]);
        let (q, r) = a.divrem(&b);
        assert!(r.is_zero());
        assert_eq!(q, p(&[1, 1]));
    }

    #[test]
    fn gcd_monic() {
        let a = p(&[-1, 0, 1]); // x^2-1
        let b = p(&[1, 1]); // x+1
        assert_eq!(a.gcd(&b), p(&[1, 1]));
    }

    #[test]
    fn shift_and_eval() {
        let a = p(&[0, 0, 1]); // x^2
        let s = a.shift(&rat_i64(1)); // (x+1)^2
        assert_eq!(s, p(&[1, 2, 1]));
        assert_eq!(s.eval(&rat_i64(2)), rat_i64(9));
    }

    #[test]
    fn primitive_int_normalization() {
        let a = UniPoly::new('x', vec![crate::exact::rat::rat(-2, 3), crate::exact::rat::rat(4, 3)]);
        let (prim, unit) = a.primitive_int();
        assert_eq!(prim, p(&[-1, 2]));
        assert_eq!(prim.scale(&unit), a);
    }

    #[test]
    fn display() {
        assert_eq!(p(&[-4, 0, 9]).to_string(), "9*x^2 - 4");
    }
}
