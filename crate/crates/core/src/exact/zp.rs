//! Polynomial arithmetic modulo a small odd prime, used by the univariate
//! factorization routine (distinct-degree plus equal-degree splitting).

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

#[derive(Clone, Copy)]
pub struct Fp {
    pub p: u64,
}

impl Fp {
    pub fn add(&self, a: u64, b: u64) -> u64 {
        let s = a + b;
        if s >= self.p {
            s - self.p
        } else {
            s
        }
    }
    pub fn sub(&self, a: u64, b: u64) -> u64 {
        if a >= b {
            a - b
        } else {
            a + self.p - b
        }
    }
    pub fn mul(&self, a: u64, b: u64) -> u64 {
        ((a as u128 * b as u128) % self.p as u128) as u64
    }
    pub fn pow(&self, mut a: u64, mut e: u64) -> u64 {
        let mut acc = 1u64;
        while e > 0 {
            if e & 1 == 1 {
                acc = self.mul(acc, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        acc
    }
    pub fn inv(&self, a: u64) -> u64 {
        assert!(a != 0, "inverse of zero mod p");
        self.pow(a, self.p - 2)
    }
}

/// Dense polynomial over F_p, low degree first, trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq)]
pub struct PolyZp {
    pub c: Vec<u64>,
}

impl PolyZp {
    pub fn new(mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        PolyZp { c }
    }
    pub fn zero() -> Self {
        PolyZp { c: vec![] }
    }
    pub fn one() -> Self {
        PolyZp { c: vec![1] }
    }
    pub fn x() -> Self {
        PolyZp { c: vec![0, 1] }
    }
    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    pub fn deg(&self) -> usize {
        assert!(!self.is_zero());
        self.c.len() - 1
    }
    pub fn lead(&self) -> u64 {
        *self.c.last().unwrap()
    }

    pub fn add(&self, o: &Self, f: Fp) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut out = vec![0; n];
        for (k, v) in out.iter_mut().enumerate() {
            let a = self.c.get(k).copied().unwrap_or(0);
            let b = o.c.get(k).copied().unwrap_or(0);
            *v = f.add(a, b);
        }
        Self::new(out)
    }

    pub fn sub(&self, o: &Self, f: Fp) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut out = vec![0; n];
        for (k, v) in out.iter_mut().enumerate() {
            let a = self.c.get(k).copied().unwrap_or(0);
            let b = o.c.get(k).copied().unwrap_or(0);
            *v = f.sub(a, b);
        }
        Self::new(out)
    }

    pub fn mul(&self, o: &Self, f: Fp) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero();
        }
        let mut out = vec![0u64; self.c.len() + o.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in o.c.iter().enumerate() {
                out[i + j] = f.add(out[i + j], f.mul(a, b));
            }
        }
        Self::new(out)
    }

    pub fn scale(&self, s: u64, f: Fp) -> Self {
        Self::new(self.c.iter().map(|&a| f.mul(a, s)).collect())
    }

    pub fn monic(&self, f: Fp) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(f.inv(self.lead()), f)
    }

    pub fn divrem(&self, d: &Self, f: Fp) -> (Self, Self) {
        assert!(!d.is_zero());
        let mut rem = self.clone();
        let dd = d.deg();
        let li = f.inv(d.lead());
        let mut quo = vec![0u64; self.c.len().saturating_sub(dd)];
        while !rem.is_zero() && rem.deg() >= dd {
            let k = rem.deg() - dd;
            let q = f.mul(rem.lead(), li);
            for (i, &c) in d.c.iter().enumerate() {
                rem.c[i + k] = f.sub(rem.c[i + k], f.mul(q, c));
            }
            while rem.c.last() == Some(&0) {
                rem.c.pop();
            }
            quo[k] = q;
        }
        (Self::new(quo), rem)
    }

    pub fn rem(&self, d: &Self, f: Fp) -> Self {
        self.divrem(d, f).1
    }

    pub fn gcd(&self, o: &Self, f: Fp) -> Self {
        let mut a = self.clone();
        let mut b = o.clone();
        while !b.is_zero() {
            let r = a.rem(&b, f);
            a = b;
            b = r;
        }
        a.monic(f)
    }

    pub fn derivative(&self, f: Fp) -> Self {
        if self.c.len() <= 1 {
            return Self::zero();
        }
        Self::new(
            self.c
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, &c)| f.mul(c, (k as u64) % f.p))
                .collect(),
        )
    }

    pub fn pow_mod(&self, mut e: u64, m: &Self, f: Fp) -> Self {
        let mut base = self.rem(m, f);
        let mut acc = Self::one();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base, f).rem(m, f);
            }
            base = base.mul(&base, f).rem(m, f);
            e >>= 1;
        }
        acc
    }
}

/// Factor a squarefree monic polynomial over F_p into monic irreducibles.
pub fn factor_squarefree_zp(w: &PolyZp, f: Fp) -> Vec<PolyZp> {
    assert!(!w.is_zero() && w.lead() == 1);
    let mut out = vec![];
    // distinct degree
    let mut v = w.clone();
    let mut h = PolyZp::x();
    let mut d = 0usize;
    let mut stages: Vec<(PolyZp, usize)> = vec![];
    while !v.is_zero() && v.deg() >= 1 {
        d += 1;
        if 2 * d > v.deg() {
            stages.push((v.clone(), v.deg()));
            break;
        }
        h = h.pow_mod(f.p, &v, f);
        let g = h.sub(&PolyZp::x(), f).gcd(&v, f);
        if !g.is_zero() && g.deg() >= 1 {
            stages.push((g.clone(), d));
            v = v.divrem(&g, f).0;
            h = h.rem(&v, f);
        }
    }
    // equal degree (Cantor-Zassenhaus), deterministic seeded RNG
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    for (g, d) in stages {
        split_equal_degree(&g, d, f, &mut rng, &mut out);
    }
    out.sort_by(|a, b| (a.deg(), &a.c).cmp(&(b.deg(), &b.c)));
    out
}

fn split_equal_degree(g: &PolyZp, d: usize, f: Fp, rng: &mut ChaCha8Rng, out: &mut Vec<PolyZp>) {
    if g.deg() == d {
        out.push(g.monic(f));
        return;
    }
    let e = (f.p.pow(d as u32) - 1) / 2;
    loop {
        let mut c: Vec<u64> = (0..g.deg()).map(|_| rng.next_u64() % f.p).collect();
        c.push(1);
        let r = PolyZp::new(c);
        let t = r.pow_mod(e, g, f).sub(&PolyZp::one(), f);
        let h = t.gcd(g, f);
        if !h.is_zero() && h.deg() >= 1 && h.deg() < g.deg() {
            let q = g.divrem(&h, f).0;
            split_equal_degree(&h, d, f, rng, out);
            split_equal_degree(&q, d, f, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn factor_mod_small_prime() {
        let f = Fp { p: 13 };
        // x^2 - 1 = (x-1)(x+1)
        let w = PolyZp::new(vec![12, 0, 1]);
        let fs = factor_squarefree_zp(&w, f);
        assert_eq!(fs.len(), 2);
        let prod = fs[0].mul(&fs[1], f);
        assert_eq!(prod, w);
    }

    #[test]
    fn irreducible_stays_whole() {
        let f = Fp { p: 7 };
        // x^2 + 1 is irreducible mod 7 (since -1 is not a QR mod 7)
        let w = PolyZp::new(vec![1, 0, 1]);
        let fs = factor_squarefree_zp(&w, f);
        assert_eq!(fs.len(), 1);
    }
}
