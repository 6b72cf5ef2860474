//! Univariate factorization over the rationals.
//!
//! Squarefree decomposition (Yun), then per squarefree part: factor modulo a
//! good small prime, Hensel-lift the modular factors above the Mignotte-style
//! coefficient bound, and recombine subsets by exact trial division. Output
//! is deterministic: modular splitting uses a fixed seed and the final list
//! is sorted canonically.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::rat::{Int, Rat};
use super::unipoly::UniPoly;
use super::zp::{factor_squarefree_zp, Fp, PolyZp};

const PRIMES: &[u64] = &[
    3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97,
    101, 103, 107, 109, 113, 127, 131, 137, 139, 149, 151, 157, 163, 167, 173, 179, 181, 191,
];

/// Factor `p` over Q. Returns `(unit, factors)` with monic rational factors
/// sorted by (degree, coefficient sequence); `p = unit * prod f_i^e_i`.
pub fn factor_unipoly(p: &UniPoly<Rat>) -> (Rat, Vec<(UniPoly<Rat>, u32)>) {
    assert!(!p.is_zero(), "factor of zero polynomial");
    if p.deg() == 0 {
        return (p.coeff(0), vec![]);
    }
    let (monic, lead) = p.monic();
    let mut factors: Vec<(UniPoly<Rat>, u32)> = vec![];
    // Yun squarefree decomposition on the monic polynomial.
    for (w, mult) in squarefree_decomposition(&monic) {
        if w.degree() == Some(0) {
            continue;
        }
        for f in factor_squarefree(&w) {
            factors.push((f, mult));
        }
    }
    factors.sort_by(|a, b| cmp_poly(&a.0, &b.0));
    (lead, factors)
}

fn cmp_poly(a: &UniPoly<Rat>, b: &UniPoly<Rat>) -> std::cmp::Ordering {
    (a.degree(), a.coeffs().len())
        .cmp(&(b.degree(), b.coeffs().len()))
        .then_with(|| {
            for k in (0..a.coeffs().len()).rev() {
                let o = a.coeff(k).cmp(&b.coeff(k));
                if o != std::cmp::Ordering::Equal {
                    return o;
                }
            }
            std::cmp::Ordering::Equal
        })
}

/// Yun: returns (squarefree factor, multiplicity) pairs for a monic input.
pub fn squarefree_decomposition(p: &UniPoly<Rat>) -> Vec<(UniPoly<Rat>, u32)> {
    let mut out = vec![];
    let dp = p.derivative();
    let a = p.gcd(&dp);
    let mut b = p.div_exact(&a).unwrap();
    let mut c = dp.div_exact(&a).unwrap();
    let mut i = 1u32;
    loop {
        let d = c.sub(&b.derivative());
        if b.degree() == Some(0) {
            break;
        }
        let g = b.gcd(&d);
        if g.degree().map(|d| d > 0).unwrap_or(false) {
            out.push((g.clone(), i));
        }
        b = b.div_exact(&g).unwrap();
        c = d.div_exact(&g).unwrap();
        i += 1;
    }
    out
}

/// Factor a monic squarefree polynomial over Q into monic irreducibles.
fn factor_squarefree(w: &UniPoly<Rat>) -> Vec<UniPoly<Rat>> {
    let d = w.deg();
    if d == 1 {
        return vec![w.clone()];
    }
    // Integer model: primitive with positive lead.
    let (prim, _) = w.primitive_int();
    let zc: Vec<Int> = prim.coeffs().iter().map(|c| c.numer().clone()).collect();
    let lead = zc.last().unwrap().clone();

    // Choose a prime where the reduction stays squarefree with full degree.
    let (fp, modular) = 'outer: {
        for &p in PRIMES {
            let f = Fp { p };
            if (&lead % Int::from(p)).is_zero() {
                continue;
            }
            let wp = reduce_mod(&zc, f);
            if wp.c.len() != zc.len() {
                continue;
            }
            let dw = wp.derivative(f);
            if dw.is_zero() {
                continue;
            }
            if wp.gcd(&dw, f).deg() == 0 {
                let m = wp.monic(f);
                break 'outer (f, factor_squarefree_zp(&m, f));
            }
        }
        panic!("no suitable prime found for factorization");
    };

    if modular.len() == 1 {
        return vec![w.clone()];
    }

    // Coefficient bound: |factor coeffs| <= 2^d * ||w||_2 * |lc|.
    let norm2: Int = {
        let s: Int = zc.iter().map(|c| c * c).sum();
        sqrt_ceil(&s) + Int::one()
    };
    let bound: Int = (Int::one() << d) * norm2 * lead.abs();
    // Lift modulus above 2*bound+1.
    let mut pk = Int::from(fp.p);
    let mut lift_steps = 0u32;
    while pk < (&bound << 1) + Int::one() {
        pk = &pk * &pk;
        lift_steps += 1;
    }
    let lifted = hensel_lift_tree(&zc, &modular, fp, lift_steps);

    // Subset recombination with exact division over Z.
    recombine(&zc, lifted, &pk)
        .into_iter()
        .map(|f| {
            let rat = UniPoly::new(
                w.var,
                f.iter().map(|c| Rat::from_integer(c.clone())).collect(),
            );
            rat.monic().0
        })
        .collect()
}

fn reduce_mod(zc: &[Int], f: Fp) -> PolyZp {
    let p = Int::from(f.p);
    PolyZp::new(
        zc.iter()
            .map(|c| {
                let r = c.mod_floor(&p);
                r.to_u64_digits().1.first().copied().unwrap_or(0)
            })
            .collect(),
    )
}

fn sqrt_ceil(n: &Int) -> Int {
    if n.is_zero() {
        return Int::zero();
    }
    let mut x: Int = Int::one() << ((n.bits() as usize + 1) / 2 + 1);
    loop {
        let y = (&x + n / &x) >> 1;
        if y >= x {
            break;
        }
        x = y;
    }
    x
}

/// Integer polynomials modulo m: helpers.
#[derive(Clone, Debug)]
struct ZmPoly {
    c: Vec<Int>,
}

impl ZmPoly {
    fn new(mut c: Vec<Int>, m: &Int) -> Self {
        for v in c.iter_mut() {
            *v = v.mod_floor(m);
        }
        while c.last().map(|v| v.is_zero()).unwrap_or(false) {
            c.pop();
        }
        ZmPoly { c }
    }
    fn is_zero(&self) -> bool {
        self.c.is_empty()
    }
    fn deg(&self) -> usize {
        self.c.len() - 1
    }
    fn mul(&self, o: &Self, m: &Int) -> Self {
        if self.is_zero() || o.is_zero() {
            return ZmPoly { c: vec![] };
        }
        let mut out = vec![Int::zero(); self.c.len() + o.c.len() - 1];
        for (i, a) in self.c.iter().enumerate() {
            for (j, b) in o.c.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::new(out, m)
    }
    fn add(&self, o: &Self, m: &Int) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut out = vec![Int::zero(); n];
        for (k, v) in out.iter_mut().enumerate() {
            *v = self.c.get(k).cloned().unwrap_or_else(Int::zero)
                + o.c.get(k).cloned().unwrap_or_else(Int::zero);
        }
        Self::new(out, m)
    }
    fn sub(&self, o: &Self, m: &Int) -> Self {
        let n = self.c.len().max(o.c.len());
        let mut out = vec![Int::zero(); n];
        for (k, v) in out.iter_mut().enumerate() {
            *v = self.c.get(k).cloned().unwrap_or_else(Int::zero)
                - o.c.get(k).cloned().unwrap_or_else(Int::zero);
        }
        Self::new(out, m)
    }
    /// Division when the divisor's lead is invertible mod m (monic usage).
    fn divrem(&self, d: &Self, m: &Int) -> (Self, Self) {
        let li = mod_inv(d.c.last().unwrap(), m);
        let dd = d.deg();
        let mut rem = self.clone();
        let mut quo = vec![Int::zero(); self.c.len().saturating_sub(dd)];
        while !rem.is_zero() && rem.deg() >= dd {
            let k = rem.deg() - dd;
            let q = (rem.c.last().unwrap() * &li).mod_floor(m);
            for (i, c) in d.c.iter().enumerate() {
                rem.c[i + k] = (&rem.c[i + k] - &q * c).mod_floor(m);
            }
            while rem.c.last().map(|v| v.is_zero()).unwrap_or(false) {
                rem.c.pop();
            }
            quo[k] = q;
        }
        (Self::new(quo, m), rem)
    }
}

fn mod_inv(a: &Int, m: &Int) -> Int {
    let e = a.extended_gcd(m);
    assert!(e.gcd.is_one(), "non-invertible element in Hensel lifting");
    e.x.mod_floor(m)
}

/// Binary lifting tree: internal nodes carry the two subtree products and
/// Bezout cofactors `s*g + t*h = 1` at the current modulus.
enum LiftNode {
    Leaf(usize),
    Pair {
        left: Box<LiftNode>,
        right: Box<LiftNode>,
        s: ZmPoly,
        t: ZmPoly,
    },
}

/// Lift the modular factorization of the primitive integer polynomial `zc`
/// through `steps` quadratic Hensel steps; returns monic factors modulo
/// p^(2^steps). Classic simultaneous factor-and-cofactor lifting.
fn hensel_lift_tree(zc: &[Int], modular: &[PolyZp], fp: Fp, steps: u32) -> Vec<ZmPoly> {
    let p = Int::from(fp.p);
    let f = fp;
    let mut polys: Vec<ZmPoly> = modular
        .iter()
        .map(|g| ZmPoly::new(g.c.iter().map(|&c| Int::from(c)).collect(), &p))
        .collect();

    // Build tree with cofactors over F_p (a field: plain extended Euclid).
    fn build(lo: usize, hi: usize, leaves: &[PolyZp], f: Fp, p: &Int) -> (LiftNode, PolyZp) {
        if hi - lo == 1 {
            return (LiftNode::Leaf(lo), leaves[lo].clone());
        }
        let mid = (lo + hi) / 2;
        let (ln, lp) = build(lo, mid, leaves, f, p);
        let (rn, rp) = build(mid, hi, leaves, f, p);
        let (s, t) = bezout_fp(&lp, &rp, f);
        let node = LiftNode::Pair {
            left: Box::new(ln),
            right: Box::new(rn),
            s: zp_to_zm(&s, p),
            t: zp_to_zm(&t, p),
        };
        (node, lp.mul(&rp, f))
    }
    fn bezout_fp(a: &PolyZp, b: &PolyZp, f: Fp) -> (PolyZp, PolyZp) {
        let mut r0 = a.clone();
        let mut r1 = b.clone();
        let mut s0 = PolyZp::one();
        let mut s1 = PolyZp::zero();
        let mut t0 = PolyZp::zero();
        let mut t1 = PolyZp::one();
        while !r1.is_zero() {
            let (q, r) = r0.divrem(&r1, f);
            let ns = s0.sub(&q.mul(&s1, f), f);
            let nt = t0.sub(&q.mul(&t1, f), f);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = ns;
            t0 = t1;
            t1 = nt;
        }
        assert!(r0.deg() == 0, "modular factors not coprime");
        let ci = f.inv(r0.lead());
        (s0.scale(ci, f), t0.scale(ci, f))
    }
    fn zp_to_zm(a: &PolyZp, m: &Int) -> ZmPoly {
        ZmPoly::new(a.c.iter().map(|&c| Int::from(c)).collect(), m)
    }

    let fps: Vec<PolyZp> = modular.to_vec();
    let (mut tree, _) = build(0, fps.len(), &fps, f, &p);

    let mut m = p;
    for _ in 0..steps {
        let m2 = &m * &m;
        let lead_inv = mod_inv(zc.last().unwrap(), &m2);
        let target_c: Vec<Int> = zc.iter().map(|c| (c * &lead_inv).mod_floor(&m2)).collect();
        let target = ZmPoly::new(target_c, &m2);
        lift_step(&mut tree, &target, &mut polys, &m2);
        m = m2;
    }
    polys
}

/// One quadratic Hensel step at `node`: `target` is monic mod m2 and factors
/// mod m through the node products; updates factors and cofactors to mod m2.
fn lift_step(node: &mut LiftNode, target: &ZmPoly, polys: &mut Vec<ZmPoly>, m2: &Int) {
    match node {
        LiftNode::Leaf(i) => {
            polys[*i] = target.clone();
        }
        LiftNode::Pair { left, right, s, t } => {
            let g = subtree_product(left, polys, m2);
            let h = subtree_product(right, polys, m2);
            // e = target - g*h, then g* = g + (t*e + q*g), h* = h + r
            // with (q, r) = divrem(s*e, h).
            let e = target.sub(&g.mul(&h, m2), m2);
            let (q, r) = s.mul(&e, m2).divrem(&h, m2);
            let gstar = g.add(&t.mul(&e, m2), m2).add(&q.mul(&g, m2), m2);
            let hstar = h.add(&r, m2);
            // cofactor update: b = s*g* + t*h* - 1;
            // (c, d) = divrem(s*b, h*); s* = s - d; t* = t - t*b - c*g*.
            let one = ZmPoly::new(vec![Int::one()], m2);
            let b = s
                .mul(&gstar, m2)
                .add(&t.mul(&hstar, m2), m2)
                .sub(&one, m2);
            let (c, d) = s.mul(&b, m2).divrem(&hstar, m2);
            let snew = s.sub(&d, m2);
            let tnew = t.sub(&t.mul(&b, m2), m2).sub(&c.mul(&gstar, m2), m2);
            *s = snew;
            *t = tnew;
            lift_step(left, &gstar, polys, m2);
            lift_step(right, &hstar, polys, m2);
        }
    }
}

fn subtree_product(node: &LiftNode, polys: &[ZmPoly], m: &Int) -> ZmPoly {
    match node {
        LiftNode::Leaf(i) => ZmPoly::new(polys[*i].c.clone(), m),
        LiftNode::Pair { left, right, .. } => {
            subtree_product(left, polys, m).mul(&subtree_product(right, polys, m), m)
        }
    }
}

/// Try subsets of the lifted factors; on success divide out and continue.
fn recombine(zc: &[Int], lifted: Vec<ZmPoly>, pk: &Int) -> Vec<Vec<Int>> {
    let mut remaining: Vec<ZmPoly> = lifted;
    let mut current: Vec<Int> = zc.to_vec();
    let mut out: Vec<Vec<Int>> = vec![];
    let mut size = 1usize;
    'outer: while 2 * size <= remaining.len() {
        let idxs: Vec<usize> = (0..remaining.len()).collect();
        for combo in combinations(&idxs, size) {
            if let Some((factor, quotient)) = try_subset(&current, &remaining, &combo, pk) {
                out.push(factor);
                current = quotient;
                let keep: Vec<ZmPoly> = remaining
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| !combo.contains(i))
                    .map(|(_, f)| f.clone())
                    .collect();
                remaining = keep;
                continue 'outer;
            }
        }
        size += 1;
    }
    if current.len() > 1 {
        out.push(current);
    }
    out
}

fn try_subset(
    current: &[Int],
    remaining: &[ZmPoly],
    combo: &[usize],
    pk: &Int,
) -> Option<(Vec<Int>, Vec<Int>)> {
    let lead = current.last().unwrap();
    let mut prod = ZmPoly::new(vec![lead.clone()], pk);
    for &i in combo {
        prod = prod.mul(&remaining[i], pk);
    }
    // Symmetric representatives
    let half = pk >> 1;
    let cand: Vec<Int> = prod
        .c
        .iter()
        .map(|c| {
            if c > &half {
                c - pk
            } else {
                c.clone()
            }
        })
        .collect();
    // primitive part
    let mut content = Int::zero();
    for c in &cand {
        content = content.gcd(c);
    }
    if content.is_zero() {
        return None;
    }
    if cand.last().unwrap().is_negative() {
        content = -content;
    }
    let cand: Vec<Int> = cand.iter().map(|c| c / &content).collect();
    // trial divide current by cand over Q
    let a = UniPoly::new(
        'x',
        current.iter().map(|c| Rat::from_integer(c.clone())).collect(),
    );
    let b = UniPoly::new(
        'x',
        cand.iter().map(|c| Rat::from_integer(c.clone())).collect(),
    );
    if b.degree().is_none() || b.deg() == 0 {
        return None;
    }
    let q = a.div_exact(&b)?;
    let (qprim, _) = q.primitive_int();
    let qc: Vec<Int> = qprim.coeffs().iter().map(|c| c.numer().clone()).collect();
    Some((cand, qc))
}

fn combinations(items: &[usize], k: usize) -> Vec<Vec<usize>> {
    let mut out = vec![];
    let mut combo: Vec<usize> = (0..k).collect();
    if k > items.len() {
        return out;
    }
    loop {
        out.push(combo.iter().map(|&i| items[i]).collect());
        // advance
        let mut i = k;
        loop {
            if i == 0 {
                return out;
            }
            i -= 1;
            if combo[i] != i + items.len() - k {
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

    fn p(c: &[i64]) -> UniPoly<Rat> {
        UniPoly::from_i64('x', c)
    }

    fn refactor(q: &UniPoly<Rat>) -> UniPoly<Rat> {
        let (unit, fs) = factor_unipoly(q);
        let mut acc = UniPoly::constant('x', unit);
        for (f, e) in fs {
            acc = acc.mul(&f.pow(e));
        }
        acc
    }

    #[test]
    fn linear_times_quadratic() {
        // (x-1)(x^2+1) * 6
        let q = p(&[-6, 6, -6, 6]);
        let (_, fs) = factor_unipoly(&q);
        assert_eq!(fs.len(), 2);
        assert_eq!(refactor(&q), q);
    }

    #[test]
    fn repeated_roots() {
        // (x+2)^3 (x-1)
        let q = p(&[1, 1]).pow(0).mul(&p(&[2, 1]).pow(3)).mul(&p(&[-1, 1]));
        let (_, fs) = factor_unipoly(&q);
        let mults: Vec<u32> = fs.iter().map(|(_, e)| *e).collect();
        assert!(mults.contains(&3));
        assert_eq!(refactor(&q), q);
    }

    #[test]
    fn irreducible_quartic() {
        // x^4 + x + 1 is irreducible over Q
        let q = p(&[1, 1, 0, 0, 1]);
        let (_, fs) = factor_unipoly(&q);
        assert_eq!(fs.len(), 1);
        assert_eq!(fs[0].1, 1);
    }

    #[test]
    fn swinnerton_dyer_like() {
        // (x^2-2)(x^2-3) requires recombination mod most primes
        let q = p(&[-2, 0, 1]).mul(&p(&[-3, 0, 1]));
        let (_, fs) = factor_unipoly(&q);
        assert_eq!(fs.len(), 2);
        assert_eq!(refactor(&q), q);
    }

    #[test]
    fn cyclotomic_and_content() {
        // 12(x^6 - 1) = 12 (x-1)(x+1)(x^2+x+1)(x^2-x+1)
        let q = p(&[-12, 0, 0, 0, 0, 0, 12]);
        let (unit, fs) = factor_unipoly(&q);
        assert_eq!(unit, Rat::from_integer(12.into()));
        assert_eq!(fs.len(), 4);
        assert_eq!(refactor(&q), q);
    }
}
