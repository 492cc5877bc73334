//! Multivariate gcd over Q by recursion on the main variable with
//! primitive pseudo-remainder sequences.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::poly::{Monomial, MultiPoly};
use super::rational::Rational;

/// Greatest common divisor, normalized to leading coefficient 1
/// (zero only when both inputs are zero).
pub fn gcd(a: &MultiPoly, b: &MultiPoly) -> MultiPoly {
    if a.is_zero() {
        return b.monic();
    }
    if b.is_zero() {
        return a.monic();
    }
    let one = MultiPoly::one(a.vars());
    if a.is_constant() || b.is_constant() {
        return one;
    }
    if a == b {
        return a.monic();
    }
    if a.is_monomial() {
        return monomial_gcd(a, b);
    }
    if b.is_monomial() {
        return monomial_gcd(b, a);
    }
    if coprime_mod_p(a, b) {
        return one;
    }
    let (small, big) = if a.num_terms() <= b.num_terms() { (a, b) } else { (b, a) };
    if big.div_exact(small).is_some() {
        return small.monic();
    }
    if let Some(h) = heuristic_gcd(a, b) {
        return h.monic();
    }

    let n = a.nvars();
    let k = (0..n)
        .rev()
        .find(|&i| a.contains_var(i) || b.contains_var(i))
        .expect("nonconstant polynomials involve some variable");
    match (a.contains_var(k), b.contains_var(k)) {
        (true, false) => return gcd(&content_in(a, k), b),
        (false, true) => return gcd(a, &content_in(b, k)),
        _ => {}
    }
    let ca = content_in(a, k);
    let cb = content_in(b, k);
    let c = gcd(&ca, &cb);
    let pa = a.div_exact(&ca).expect("content divides");
    let pb = b.div_exact(&cb).expect("content divides");
    let g = primitive_prs(pa, pb, k);
    c.mul(&g).monic()
}

/// gcd of the coefficients of `p` viewed as a polynomial in `x_k`.
pub fn content_in(p: &MultiPoly, k: usize) -> MultiPoly {
    let mut acc = MultiPoly::zero(p.vars());
    for c in p.coeffs_in(k) {
        if c.is_zero() {
            continue;
        }
        acc = gcd(&acc, &c);
        if acc.is_constant() {
            return MultiPoly::one(p.vars());
        }
    }
    acc
}

pub fn primitive_part_in(p: &MultiPoly, k: usize) -> MultiPoly {
    if p.is_zero() {
        return p.clone();
    }
    let c = content_in(p, k);
    p.div_exact(&c).expect("content divides")
}

fn leading_coeff_in(p: &MultiPoly, k: usize) -> MultiPoly {
    p.coeffs_in(k).pop().unwrap_or_else(|| MultiPoly::zero(p.vars()))
}

/// Pseudo-remainder of `a` by `b` in `x_k` (up to a factor from the other variables).
pub fn pseudo_rem(a: &MultiPoly, b: &MultiPoly, k: usize) -> MultiPoly {
    let db = b.degree_in(k);
    let lcb = leading_coeff_in(b, k);
    let mut r = a.clone();
    while !r.is_zero() && r.contains_var(k) && r.degree_in(k) >= db {
        let dr = r.degree_in(k);
        let lcr = leading_coeff_in(&r, k);
        let mut e = vec![0; r.nvars()];
        e[k] = dr - db;
        let shift = Monomial::from_exps(e);
        let sub = lcr.mul(&b.mul_monomial(&shift, &super::rational::Rational::one()));
        r = r.mul(&lcb).sub(&sub);
    }
    if db == 0 {
        return MultiPoly::zero(a.vars());
    }
    r
}

fn primitive_prs(a: MultiPoly, b: MultiPoly, k: usize) -> MultiPoly {
    let (mut a, mut b) = if a.degree_in(k) >= b.degree_in(k) { (a, b) } else { (b, a) };
    loop {
        if !b.contains_var(k) {
            // b is primitive in x_k, so a constant in x_k means b is a unit.
            return MultiPoly::one(a.vars());
        }
        let r = pseudo_rem(&a, &b, k);
        if r.is_zero() {
            return primitive_part_in(&b, k).monic();
        }
        if !r.contains_var(k) {
            return MultiPoly::one(a.vars());
        }
        a = b;
        b = primitive_part_in(&r, k);
    }
}

/// `p` scaled to a primitive polynomial with integer coefficients.
fn integer_primitive(p: &MultiPoly) -> MultiPoly {
    let mut l = BigInt::one();
    for (_, c) in p.terms() {
        l = l.lcm(&c.denom());
    }
    let scaled = p.scale(&Rational::from_bigint(l));
    let c = integer_content(&scaled);
    if c.is_one() {
        scaled
    } else {
        scaled.scale(&Rational::from_bigint(c).inv().expect("content is nonzero"))
    }
}

fn integer_content(p: &MultiPoly) -> BigInt {
    let mut g = BigInt::zero();
    for (_, c) in p.terms() {
        g = g.gcd(&c.numer());
        if g.is_one() {
            break;
        }
    }
    g
}

fn max_norm(p: &MultiPoly) -> BigInt {
    p.terms().map(|(_, c)| c.numer().abs()).max().unwrap_or_default()
}

fn eval_at(p: &MultiPoly, k: usize, xi: &BigInt) -> MultiPoly {
    let x = Rational::from_bigint(xi.clone());
    let mut acc = MultiPoly::zero(p.vars());
    for c in p.coeffs_in(k).iter().rev() {
        acc = acc.scale(&x).add(c);
    }
    acc
}

/// The ξ-adic expansion of `h` with symmetric digits, as a polynomial in `x_k`.
fn interpolate(h: &MultiPoly, k: usize, xi: &BigInt) -> MultiPoly {
    let vars = h.vars().clone();
    let half = xi / 2;
    let mut h = h.clone();
    let mut out = MultiPoly::zero(&vars);
    let mut i = 0u32;
    while !h.is_zero() {
        let mut digit = Vec::new();
        for (m, c) in h.terms() {
            let mut r = c.numer().mod_floor(xi);
            if r > half {
                r -= xi;
            }
            if !r.is_zero() {
                digit.push((m.exps().to_vec(), Rational::from_bigint(r)));
            }
        }
        let g = MultiPoly::from_terms(&vars, digit);
        let mut e = g.clone();
        if i > 0 {
            let mut m = vec![0; vars.len()];
            m[k] = i;
            e = g.mul_monomial(&Monomial::from_exps(m), &Rational::one());
        }
        out = out.add(&e);
        h = h.sub(&g).scale(&Rational::from_bigint(xi.clone()).inv().expect("xi > 0"));
        i += 1;
    }
    out
}

/// gcd of integer polynomials by evaluation at large integers, or `None`
/// when six evaluation points fail. With `ξ ≥ 2 min(|f|, |g|) + 2` a
/// primitive reconstruction dividing both inputs is the gcd.
fn heu_rec(f: &MultiPoly, g: &MultiPoly, depth: u32) -> Option<MultiPoly> {
    let vars = f.vars().clone();
    let k = (0..f.nvars()).rev().find(|&i| f.contains_var(i) || g.contains_var(i));
    let cf = integer_content(f);
    let cg = integer_content(g);
    let c = cf.gcd(&cg);
    let Some(k) = k else {
        return Some(MultiPoly::constant(&vars, Rational::from_bigint(c)));
    };
    if f.is_constant() || g.is_constant() {
        return Some(MultiPoly::constant(&vars, Rational::from_bigint(c)));
    }
    if depth > 8 {
        return None;
    }
    let f = f.scale(&Rational::from_bigint(cf).inv().ok()?);
    let g = g.scale(&Rational::from_bigint(cg).inv().ok()?);
    let bound = max_norm(&f).min(max_norm(&g));
    let mut xi: BigInt = bound * 2 + 29;
    for _ in 0..6 {
        let ff = eval_at(&f, k, &xi);
        let gg = eval_at(&g, k, &xi);
        if !ff.is_zero() && !gg.is_zero() {
            if let Some(h) = heu_rec(&ff, &gg, depth + 1) {
                let cand = integer_primitive(&interpolate(&h, k, &xi));
                if !cand.is_zero() && f.div_exact(&cand).is_some() && g.div_exact(&cand).is_some() {
                    return Some(cand.scale(&Rational::from_bigint(c)));
                }
                // the cofactor of f often reconstructs when h does not
                if let Some(cff) = ff.div_exact(&h) {
                    let cof = interpolate(&cff, k, &xi);
                    if !cof.is_zero() {
                        if let Some(q) = f.div_exact(&cof) {
                            let cand = integer_primitive(&q);
                            if g.div_exact(&cand).is_some() {
                                return Some(cand.scale(&Rational::from_bigint(c)));
                            }
                        }
                    }
                }
            }
        }
        xi = &xi * 73794 / 27011 + 1;
    }
    None
}

fn heuristic_gcd(a: &MultiPoly, b: &MultiPoly) -> Option<MultiPoly> {
    heu_rec(&integer_primitive(a), &integer_primitive(b), 0)
}

const P: u64 = (1 << 61) - 1;

fn mulmod(a: u64, b: u64) -> u64 {
    ((a as u128 * b as u128) % P as u128) as u64
}

fn powmod(mut a: u64, mut e: u64) -> u64 {
    let mut r = 1;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a);
        }
        a = mulmod(a, a);
        e >>= 1;
    }
    r
}

fn invmod(a: u64) -> u64 {
    powmod(a, P - 2)
}

fn bigint_mod(n: &num_bigint::BigInt) -> u64 {
    use num_traits::ToPrimitive;
    let p = num_bigint::BigInt::from(P);
    let r = ((n % &p) + &p) % &p;
    r.to_u64().expect("reduced below P")
}

fn i64_mod(n: i64) -> u64 {
    n.rem_euclid(P as i64) as u64
}

fn rational_mod(q: &super::rational::Rational) -> Option<u64> {
    if let Some((n, d)) = q.small_parts() {
        return match i64_mod(d) {
            0 => None,
            1 => Some(i64_mod(n)),
            d => Some(mulmod(i64_mod(n), invmod(d))),
        };
    }
    let d = bigint_mod(&q.denom());
    if d == 0 {
        return None;
    }
    Some(mulmod(bigint_mod(&q.numer()), invmod(d)))
}

/// Image of `p` in F_P[x_k] after substituting `point` for the other variables.
fn specialize(p: &MultiPoly, k: usize, point: &[u64]) -> Option<Vec<u64>> {
    let mut out = vec![0u64; p.degree_in(k) as usize + 1];
    for (m, c) in p.terms() {
        let mut v = rational_mod(c)?;
        for (i, &e) in m.exps().iter().enumerate() {
            if i != k && e > 0 {
                v = mulmod(v, powmod(point[i], e as u64));
            }
        }
        let slot = &mut out[m.exps()[k] as usize];
        *slot = (*slot + v) % P;
    }
    Some(out)
}

fn trim(p: &mut Vec<u64>) {
    while p.last() == Some(&0) {
        p.pop();
    }
}

fn univariate_gcd_degree(mut a: Vec<u64>, mut b: Vec<u64>) -> usize {
    trim(&mut a);
    trim(&mut b);
    while !b.is_empty() {
        let lb_inv = invmod(*b.last().unwrap());
        while a.len() >= b.len() {
            let f = mulmod(*a.last().unwrap(), lb_inv);
            let shift = a.len() - b.len();
            for (i, &bc) in b.iter().enumerate() {
                a[shift + i] = (a[shift + i] + P - mulmod(f, bc)) % P;
            }
            trim(&mut a);
            if a.is_empty() {
                break;
            }
        }
        std::mem::swap(&mut a, &mut b);
    }
    a.len().saturating_sub(1)
}

/// A sufficient test for `gcd(a, b) = 1`: for every shared variable, some
/// specialization mod P keeps the degree of `a` and has a constant gcd.
fn coprime_mod_p(a: &MultiPoly, b: &MultiPoly) -> bool {
    let n = a.nvars();
    let mut seed: u64 = 0x9e37_79b9_7f4a_7c15;
    let mut next = || {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        seed % P
    };
    for k in 0..n {
        if !(a.contains_var(k) && b.contains_var(k)) {
            continue;
        }
        let da = a.degree_in(k) as usize;
        let mut settled = false;
        for _ in 0..3 {
            let point: Vec<u64> = (0..n).map(|_| next()).collect();
            let (Some(ua), Some(ub)) = (specialize(a, k, &point), specialize(b, k, &point)) else {
                return false;
            };
            if ua[da] == 0 {
                continue;
            }
            if univariate_gcd_degree(ua, ub) > 0 {
                return false;
            }
            settled = true;
            break;
        }
        if !settled {
            return false;
        }
    }
    true
}

fn monomial_gcd(mono: &MultiPoly, p: &MultiPoly) -> MultiPoly {
    let (m, _) = mono.leading().unwrap();
    let mut exps = m.exps().to_vec();
    for (pm, _) in p.terms() {
        for (e, pe) in exps.iter_mut().zip(pm.exps()) {
            *e = (*e).min(*pe);
        }
    }
    MultiPoly::monomial(mono.vars(), Monomial::from_exps(exps), super::rational::Rational::one())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::rational::Rational;
    use crate::scalars::vars::Vars;

    #[test]
    fn gcd_of_products() {
        let v = Vars::new(&["x", "y", "z"]).unwrap();
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        let z = MultiPoly::var(&v, 2);
        let one = MultiPoly::one(&v);
        let common = x.mul(&y).add(&z.pow(2)).sub(&one);
        let a = common.mul(&x.add(&y).pow(2));
        let b = common.mul(&y.sub(&z).add(&one)).mul(&x);
        let g = gcd(&a, &b);
        assert_eq!(g, common.monic());
        let two = Rational::from_int(2);
        assert_eq!(gcd(&a.scale(&two), &a), a.monic());
    }

    #[test]
    fn coprime_and_monomial_cases() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        let one = MultiPoly::one(&v);
        assert!(gcd(&x.add(&one), &y.add(&one)).is_one());
        let a = x.pow(3).mul(&y);
        let b = x.pow(2).mul(&y.pow(2)).add(&x.pow(4));
        assert_eq!(gcd(&a, &b), x.pow(2));
    }
}
