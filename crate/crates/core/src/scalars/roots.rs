//! Roots in F = Q(x1..xr) of polynomials in F[u].
//!
//! Only what boundary computations need: square-free part, F-rational roots
//! with multiplicity, and the leftover factor without F-rational roots.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::field::FieldElem;
use super::gcd::gcd;
use super::poly::MultiPoly;
use super::rational::Rational;
use super::vars::Vars;

/// Rational roots of a polynomial in the last variable.
#[derive(Debug, Clone)]
pub struct RootReport {
    /// Distinct roots in F with multiplicity, in order of discovery.
    pub roots: Vec<(FieldElem, u32)>,
    /// What is left after removing all linear factors; it has no roots in F.
    pub residual: MultiPoly,
}

impl RootReport {
    pub fn fully_rational(&self) -> bool {
        !self.residual.contains_var(self.residual.nvars() - 1)
    }
}

/// Finds the roots in F of `p`, a polynomial over `base + [u]` viewed in `u`.
pub fn rational_roots(p: &MultiPoly, base: &Vars) -> RootReport {
    let u = p.nvars() - 1;
    assert_eq!(base.len(), u, "base must be the list without the last variable");
    let mut residual = p.clone();
    let mut roots = Vec::new();
    if p.is_zero() || !p.contains_var(u) {
        return RootReport { roots, residual };
    }
    let dp = p.derivative(u);
    let g = gcd(p, &dp);
    let sqfree = p.div_exact(&g).expect("gcd divides");
    for c in squarefree_roots(&sqfree, base) {
        let lin = linear_factor(&c, p.vars());
        let mut mult = 0;
        while let Some(q) = residual.div_exact(&lin) {
            residual = q;
            mult += 1;
        }
        debug_assert!(mult > 0);
        roots.push((c, mult));
    }
    RootReport { roots, residual }
}

/// `den(c)*u - num(c)` over the extended list.
pub fn linear_factor(c: &FieldElem, ext: &Vars) -> MultiPoly {
    let u = MultiPoly::var(ext, ext.len() - 1);
    c.den().embed(ext).mul(&u).sub(&c.num().embed(ext))
}

fn squarefree_roots(p: &MultiPoly, base: &Vars) -> Vec<FieldElem> {
    let u = p.nvars() - 1;
    let coeffs: Vec<MultiPoly> = p.coeffs_in(u).iter().map(|c| c.drop_last_var(base)).collect();
    let n = coeffs.len() - 1;
    if n == 1 {
        let c = FieldElem::from_fraction(coeffs[0].neg(), coeffs[1].clone()).expect("nonzero lc");
        return vec![c];
    }
    let lc = coeffs[n].clone();
    // h(v) = lc^(n-1) p(v / lc) is monic with coefficients in Q[x]; its roots
    // in Q(x) are polynomials.
    let mut h = Vec::with_capacity(n + 1);
    let mut lc_pow = MultiPoly::one(base);
    for k in (0..n).rev() {
        h.push(coeffs[k].mul(&lc_pow));
        lc_pow = lc_pow.mul(&lc);
    }
    h.reverse();
    h.push(MultiPoly::one(base));
    let bound = (0..n)
        .map(|k| {
            let d = h[k].total_degree();
            let w = (n - k) as u32;
            d.div_ceil(w)
        })
        .max()
        .unwrap_or(0);

    let Some((point, uni)) = good_specialization(&h) else {
        return Vec::new();
    };
    let shifted: Vec<MultiPoly> = h.iter().map(|c| c.shift(&point)).collect();
    let neg_point: Vec<Rational> = point.iter().map(|a| -a).collect();
    let mut out = Vec::new();
    for v0 in univariate_rational_roots(&uni) {
        if let Some(v) = lift_root(&shifted, &v0, bound) {
            let v = v.shift(&neg_point);
            if horner(&h, &v).is_zero() {
                out.push(FieldElem::from_fraction(v, lc.clone()).expect("nonzero lc"));
            }
        }
    }
    out
}

fn horner(h: &[MultiPoly], v: &MultiPoly) -> MultiPoly {
    let mut acc = MultiPoly::zero(v.vars());
    for c in h.iter().rev() {
        acc = acc.mul(v).add(c);
    }
    acc
}

fn horner_truncated(h: &[MultiPoly], v: &MultiPoly, deg: u32) -> MultiPoly {
    let mut acc = MultiPoly::zero(v.vars());
    for c in h.iter().rev() {
        acc = acc.mul(v).truncate_degree(deg).add(&c.truncate_degree(deg));
    }
    acc
}

/// Picks an integer point where the monic `h` stays square-free, returning the
/// point and the specialized univariate coefficients.
fn good_specialization(h: &[MultiPoly]) -> Option<(Vec<Rational>, Vec<Rational>)> {
    let r = h[0].nvars();
    for attempt in 0..64i64 {
        let point: Vec<Rational> = (0..r)
            .map(|i| {
                let v = if attempt == 0 { 0 } else { (attempt * (2 * i as i64 + 3) + i as i64) % 41 - 20 };
                Rational::from_int(v)
            })
            .collect();
        let uni: Vec<Rational> = h.iter().map(|c| c.eval(&point)).collect();
        if uni_degree(&uni_gcd(&uni, &uni_derivative(&uni))) == 0 {
            return Some((point, uni));
        }
    }
    None
}

/// Hensel lifting of a simple root `v0` of `h(0, v)` to a polynomial root of
/// total degree at most `bound` in the shifted coordinates.
fn lift_root(h: &[MultiPoly], v0: &Rational, bound: u32) -> Option<MultiPoly> {
    let vars = h[0].vars().clone();
    let n = h.len() - 1;
    // derivative of h at (0, v0)
    let mut slope = Rational::zero();
    for k in (1..=n).rev() {
        let c = h[k].constant_term() * &Rational::from_int(k as i64);
        slope = &slope * v0 + c;
    }
    let slope_inv = slope.inv().ok()?;
    let mut v = MultiPoly::constant(&vars, v0.clone());
    for d in 1..=bound {
        let res = horner_truncated(h, &v, d);
        let top = res.homogeneous_part(d);
        if top.is_zero() {
            continue;
        }
        v = v.sub(&top.scale(&slope_inv));
    }
    Some(v)
}

// Univariate helpers over Q; coefficient index = exponent.

fn uni_trim(p: &mut Vec<Rational>) {
    while p.last().is_some_and(Rational::is_zero) {
        p.pop();
    }
}

fn uni_degree(p: &[Rational]) -> usize {
    p.iter().rposition(|c| !c.is_zero()).unwrap_or(0)
}

fn uni_derivative(p: &[Rational]) -> Vec<Rational> {
    p.iter().enumerate().skip(1).map(|(k, c)| c * &Rational::from_int(k as i64)).collect()
}

fn uni_rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    uni_trim(&mut r);
    let db = uni_degree(b);
    let lb = b[db].clone();
    while r.len() > db && !r.is_empty() {
        let k = r.len() - 1;
        let q = &r[k] / &lb;
        for i in 0..=db {
            let t = &q * &b[i];
            r[k - db + i] -= &t;
        }
        uni_trim(&mut r);
    }
    r
}

fn uni_gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    uni_trim(&mut a);
    uni_trim(&mut b);
    while !b.is_empty() {
        let r = uni_rem(&a, &b);
        a = b;
        b = r;
    }
    a
}

fn uni_eval(p: &[Rational], x: &Rational) -> Rational {
    let mut acc = Rational::zero();
    for c in p.iter().rev() {
        acc = &acc * x + c;
    }
    acc
}

fn uni_div_exact(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut r = a.to_vec();
    uni_trim(&mut r);
    let db = uni_degree(b);
    let lb = b[db].clone();
    if r.len() <= db {
        return vec![Rational::zero()];
    }
    let mut q = vec![Rational::zero(); r.len() - db];
    while r.len() > db {
        let k = r.len() - 1;
        let c = &r[k] / &lb;
        for i in 0..=db {
            let t = &c * &b[i];
            r[k - db + i] -= &t;
        }
        q[k - db] = c;
        r.pop();
    }
    q
}

/// Rational roots of a univariate polynomial.
///
/// A rational root of the square-free part `s` with integer coefficients is
/// `w / lc(s)` for an integer root `w` of the monic `lc^(n-1) s(w / lc)`.
/// Approximate complex roots locate the candidates `w`; each is then checked
/// exactly.
pub fn univariate_rational_roots(p: &[Rational]) -> Vec<Rational> {
    let mut p = p.to_vec();
    uni_trim(&mut p);
    let mut out = Vec::new();
    if p.len() <= 1 {
        return out;
    }
    let lead_zeros = p.iter().position(|c| !c.is_zero()).unwrap();
    if lead_zeros > 0 {
        out.push(Rational::zero());
        p.drain(..lead_zeros);
    }
    if p.len() <= 1 {
        return out;
    }
    let g = uni_gcd(&p, &uni_derivative(&p));
    let s = if uni_degree(&g) > 0 { uni_div_exact(&p, &g) } else { p };
    let lcm = s.iter().fold(BigInt::one(), |acc, c| acc.lcm(&c.denom()));
    let ints: Vec<BigInt> = s.iter().map(|c| c.numer() * (&lcm / c.denom())).collect();
    out.extend(integer_poly_roots(&ints));
    out
}

fn integer_poly_roots(ints: &[BigInt]) -> Vec<Rational> {
    let n = ints.len() - 1;
    let an = ints[n].clone();
    if n == 1 {
        return vec![Rational::from_bigint(-&ints[0]) * Rational::from_bigint(an).inv().expect("nonzero")];
    }
    if n == 2 {
        let (a, b, c) = (&ints[2], &ints[1], &ints[0]);
        let disc = b * b - BigInt::from(4) * a * c;
        if disc.is_negative() {
            return Vec::new();
        }
        let r = disc.sqrt();
        if &r * &r != disc {
            return Vec::new();
        }
        let two_a = Rational::from_bigint(BigInt::from(2) * a);
        let mut v = vec![
            Rational::from_bigint(-b + &r) * two_a.inv().expect("nonzero"),
            Rational::from_bigint(-b - &r) * two_a.inv().expect("nonzero"),
        ];
        v.dedup();
        return v;
    }
    // monic H(w) = an^(n-1) s(w / an)
    let mut h = Vec::with_capacity(n + 1);
    let mut pow = BigInt::one();
    for k in (0..n).rev() {
        h.push(&ints[k] * &pow);
        pow *= &an;
    }
    h.reverse();
    h.push(BigInt::one());
    let an_q = Rational::from_bigint(an);
    monic_integer_roots(&h).into_iter().map(|w| &Rational::from_bigint(w) / &an_q).collect()
}

fn eval_int(h: &[BigInt], w: &BigInt) -> BigInt {
    let mut acc = BigInt::zero();
    for c in h.iter().rev() {
        acc = acc * w + c;
    }
    acc
}

const PRIMES: [u64; 8] = [2147483647, 2147483629, 2147483587, 2147483579, 2147483563, 2147483549, 2147483543, 2147483497];

/// Integer roots of a monic square-free integer polynomial: roots mod a prime
/// where `h` stays square-free, Hensel-lifted past the root bound.
fn monic_integer_roots(h: &[BigInt]) -> Vec<BigInt> {
    // Fujiwara: |w| <= 2 max_k |h_(n-k)|^(1/k)
    let n = h.len() - 1;
    let bound: BigInt = (1..=n)
        .map(|k| (h[n - k].abs().nth_root(k as u32) + BigInt::one()) * 2)
        .max()
        .expect("positive degree");
    for &p in &PRIMES {
        let hp = ModPoly::reduce(h, p);
        if !hp.derivative().gcd(&hp).is_constant() {
            continue;
        }
        let mut out = Vec::new();
        for r in hp.roots() {
            if let Some(w) = hensel_lift(h, r, p, &bound) {
                if eval_int(h, &w).is_zero() {
                    out.push(w);
                }
            }
        }
        return out;
    }
    let mut out = Vec::new();
    let p: Vec<Rational> = h.iter().map(|c| Rational::from_bigint(c.clone())).collect();
    for d in divisors(&h[0].abs()) {
        for w in [d.clone(), -d] {
            if uni_eval(&p, &Rational::from_bigint(w.clone())).is_zero() && !out.contains(&w) {
                out.push(w);
            }
        }
    }
    out
}

/// Lifts a simple root mod p to the symmetric residue mod p^(2^k) > 2 bound.
fn hensel_lift(h: &[BigInt], r: u64, p: u64, bound: &BigInt) -> Option<BigInt> {
    let dh: Vec<BigInt> = h.iter().enumerate().skip(1).map(|(k, c)| c * BigInt::from(k)).collect();
    let mut modulus = BigInt::from(p);
    let mut w = BigInt::from(r);
    let target = bound * 2;
    while modulus <= target {
        modulus = &modulus * &modulus;
        let f = eval_int(h, &w).mod_floor(&modulus);
        let df = eval_int(&dh, &w).mod_floor(&modulus);
        let inv = mod_inverse(&df, &modulus)?;
        w = (&w - f * inv).mod_floor(&modulus);
    }
    if &w * 2 > modulus {
        w -= &modulus;
    }
    Some(w)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if !e.gcd.is_one() {
        return None;
    }
    Some(e.x.mod_floor(m))
}

/// Dense polynomials over F_p, lowest degree first, no trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
struct ModPoly {
    p: u64,
    c: Vec<u64>,
}

impl ModPoly {
    fn new(p: u64, mut c: Vec<u64>) -> Self {
        while c.last() == Some(&0) {
            c.pop();
        }
        ModPoly { p, c }
    }

    fn reduce(h: &[BigInt], p: u64) -> Self {
        let bp = BigInt::from(p);
        Self::new(p, h.iter().map(|c| c.mod_floor(&bp).to_u64().expect("below p")).collect())
    }

    fn is_constant(&self) -> bool {
        self.c.len() <= 1
    }

    fn degree(&self) -> usize {
        self.c.len().saturating_sub(1)
    }

    fn mulm(&self, a: u64, b: u64) -> u64 {
        a * b % self.p
    }

    fn inv(&self, a: u64) -> u64 {
        let mut r = 1u64;
        let mut b = a;
        let mut e = self.p - 2;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mulm(r, b);
            }
            b = self.mulm(b, b);
            e >>= 1;
        }
        r
    }

    fn derivative(&self) -> Self {
        let c = self.c.iter().enumerate().skip(1).map(|(k, &v)| self.mulm(v, k as u64 % self.p)).collect();
        Self::new(self.p, c)
    }

    fn sub(&self, other: &Self) -> Self {
        let n = self.c.len().max(other.c.len());
        let c = (0..n)
            .map(|i| {
                let a = self.c.get(i).copied().unwrap_or(0);
                let b = other.c.get(i).copied().unwrap_or(0);
                (a + self.p - b) % self.p
            })
            .collect();
        Self::new(self.p, c)
    }

    fn mul(&self, other: &Self) -> Self {
        if self.c.is_empty() || other.c.is_empty() {
            return Self::new(self.p, Vec::new());
        }
        let mut c = vec![0u64; self.c.len() + other.c.len() - 1];
        for (i, &a) in self.c.iter().enumerate() {
            for (j, &b) in other.c.iter().enumerate() {
                c[i + j] = (c[i + j] + self.mulm(a, b)) % self.p;
            }
        }
        Self::new(self.p, c)
    }

    fn rem(&self, m: &Self) -> Self {
        let mut r = self.c.clone();
        let dm = m.degree();
        let li = self.inv(*m.c.last().expect("nonzero modulus"));
        while r.len() > dm && !r.is_empty() {
            let k = r.len() - 1;
            let f = self.mulm(r[k], li);
            for (i, &mc) in m.c.iter().enumerate() {
                r[k - dm + i] = (r[k - dm + i] + self.p - self.mulm(f, mc)) % self.p;
            }
            while r.last() == Some(&0) {
                r.pop();
            }
        }
        Self::new(self.p, r)
    }

    fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.c.is_empty() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        if let Some(&l) = a.c.last() {
            let li = self.inv(l);
            a.c.iter_mut().for_each(|v| *v = self.mulm(*v, li));
        }
        a
    }

    /// `base^e mod m`.
    fn pow_mod(base: &Self, mut e: u64, m: &Self) -> Self {
        let mut r = Self::new(base.p, vec![1]);
        let mut b = base.rem(m);
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b).rem(m);
            }
            b = b.mul(&b).rem(m);
            e >>= 1;
        }
        r
    }

    /// Distinct roots in F_p of a square-free polynomial.
    fn roots(&self) -> Vec<u64> {
        let x = Self::new(self.p, vec![0, 1]);
        let xp = Self::pow_mod(&x, self.p, self);
        let g = self.gcd(&xp.sub(&x));
        let mut out = Vec::new();
        let mut seed = 0x2545_f491_4f6c_dd1du64;
        self.split_linear(g, &mut out, &mut seed);
        out
    }

    fn split_linear(&self, g: Self, out: &mut Vec<u64>, seed: &mut u64) {
        match g.degree() {
            0 => {}
            1 => {
                // monic: x + c0
                out.push((self.p - g.c[0]) % self.p);
            }
            _ => loop {
                *seed ^= *seed << 13;
                *seed ^= *seed >> 7;
                *seed ^= *seed << 17;
                let delta = *seed % self.p;
                let shifted = Self::new(self.p, vec![delta, 1]);
                let t = Self::pow_mod(&shifted, (self.p - 1) / 2, &g).sub(&Self::new(self.p, vec![1]));
                let d = g.gcd(&t);
                if d.degree() > 0 && d.degree() < g.degree() {
                    let (q, _) = g.div_rem(&d);
                    self.split_linear(d, out, seed);
                    self.split_linear(q, out, seed);
                    return;
                }
            },
        }
    }

    fn div_rem(&self, m: &Self) -> (Self, Self) {
        let mut r = self.c.clone();
        let dm = m.degree();
        let li = self.inv(*m.c.last().expect("nonzero modulus"));
        let mut q = vec![0u64; r.len().saturating_sub(dm)];
        while r.len() > dm && !r.is_empty() {
            let k = r.len() - 1;
            let f = self.mulm(r[k], li);
            q[k - dm] = f;
            for (i, &mc) in m.c.iter().enumerate() {
                r[k - dm + i] = (r[k - dm + i] + self.p - self.mulm(f, mc)) % self.p;
            }
            r.pop();
        }
        (Self::new(self.p, q), Self::new(self.p, r))
    }
}

const TRIAL_LIMIT: u64 = 1 << 20;

/// Positive divisors by trial division. A cofactor that survives the trial
/// range is treated as prime, so a few divisors of huge inputs may be missed.
fn divisors(n: &BigInt) -> Vec<BigInt> {
    let mut n = n.abs();
    let mut factors: Vec<(BigInt, u32)> = Vec::new();
    if n.is_zero() {
        return vec![BigInt::one()];
    }
    let mut p = 2u64;
    while p < TRIAL_LIMIT {
        let bp = BigInt::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            factors.push((bp, e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigInt::one() {
        factors.push((n, 1));
    }
    let mut divs = vec![BigInt::one()];
    for (f, e) in factors {
        let mut next = Vec::with_capacity(divs.len() * (e as usize + 1));
        for d in &divs {
            let mut x = d.clone();
            for _ in 0..=e {
                next.push(x.clone());
                x *= &f;
            }
        }
        divs = next;
    }
    if divs.len() > 1 << 16 {
        divs.truncate(1 << 16);
    }
    divs
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse::parse_field_elem;

    fn poly(s: &str, vars: &Vars) -> MultiPoly {
        let e = parse_field_elem(s, vars).unwrap();
        assert!(e.is_polynomial());
        e.num().clone()
    }

    #[test]
    fn univariate() {
        let q = |n: i64, d: i64| Rational::new(n, d).unwrap();
        // (2v - 3)(v + 5) v = 2v^3 + 7v^2 - 15v
        let p = vec![q(0, 1), q(-15, 1), q(7, 1), q(2, 1)];
        let mut r = univariate_rational_roots(&p);
        r.sort();
        assert_eq!(r, vec![q(-5, 1), q(0, 1), q(3, 2)]);
    }

    #[test]
    fn univariate_large_and_repeated() {
        let v = Vars::new(&["v"]).unwrap();
        let p = poly("(3v - 1)^2 (7v + 2) (v^2 + 1) (v - 1000003) (5v - 1152921504606846977) (v^3 - 2)", &v);
        let coeffs: Vec<Rational> = p.coeffs_in(0).iter().map(|c| c.constant_value().unwrap()).collect();
        let mut r = univariate_rational_roots(&coeffs);
        r.sort();
        let q = |s: &str| s.parse::<Rational>().unwrap();
        assert_eq!(r, vec![q("-2/7"), q("1/3"), q("1000003"), q("1152921504606846977/5")]);
    }

    #[test]
    fn roots_over_function_field() {
        let base = Vars::new(&["x", "y"]).unwrap();
        let ext = base.extended("u").unwrap();
        let p = poly("(u - x)^2 * (x*u - y - 1) * (u^2 + 1)", &ext);
        let rep = rational_roots(&p, &base);
        let mut got: Vec<(String, u32)> = rep.roots.iter().map(|(c, m)| (c.to_string(), *m)).collect();
        got.sort();
        let x = FieldElem::var(&base, 0);
        let c2 = parse_field_elem("(y+1)/x", &base).unwrap();
        let mut want = vec![(x.to_string(), 2), (c2.to_string(), 1)];
        want.sort();
        assert_eq!(got, want);
        assert!(!rep.fully_rational());
        assert_eq!(rep.residual.monic(), poly("u^2+1", &ext));
    }

    #[test]
    fn no_roots() {
        let base = Vars::new(&["x"]).unwrap();
        let ext = base.extended("u").unwrap();
        let rep = rational_roots(&poly("u^2 - x", &ext), &base);
        assert!(rep.roots.is_empty());
    }
}
