//! Big Witt vectors W_m(F), ghost coordinates, and the isomorphism γ with
//! principal units of F_m.

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{FieldElem, Rational, Vars};
use crate::trunc::TruncElem;

/// `(g_1..g_m)` with componentwise ring structure.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct GhostTuple {
    vars: Vars,
    comps: Vec<FieldElem>,
}

impl GhostTuple {
    pub fn new(vars: &Vars, comps: Vec<FieldElem>) -> Self {
        GhostTuple { vars: vars.clone(), comps }
    }

    pub fn zero(vars: &Vars, level: usize) -> Self {
        GhostTuple { vars: vars.clone(), comps: vec![FieldElem::zero(vars); level] }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn level(&self) -> usize {
        self.comps.len()
    }

    /// `comps()[j-1]` is `g_j`.
    pub fn comps(&self) -> &[FieldElem] {
        &self.comps
    }

    pub fn comp(&self, j: usize) -> &FieldElem {
        &self.comps[j - 1]
    }

    pub fn add(&self, other: &GhostTuple) -> GhostTuple {
        assert_eq!(self.level(), other.level(), "mixed Witt levels");
        GhostTuple { vars: self.vars.clone(), comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn mul(&self, other: &GhostTuple) -> GhostTuple {
        assert_eq!(self.level(), other.level(), "mixed Witt levels");
        GhostTuple { vars: self.vars.clone(), comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.mul(b)).collect() }
    }

    pub fn scale(&self, c: &Rational) -> GhostTuple {
        GhostTuple { vars: self.vars.clone(), comps: self.comps.iter().map(|a| a.scale(c)).collect() }
    }
}

impl fmt::Debug for GhostTuple {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.comps.iter()).finish()
    }
}

/// `(a_1..a_m) ∈ W_m(F)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct WittVector {
    vars: Vars,
    coords: Vec<FieldElem>,
}

impl WittVector {
    pub fn new(vars: &Vars, coords: Vec<FieldElem>) -> Self {
        WittVector { vars: vars.clone(), coords }
    }

    pub fn zero(vars: &Vars, level: usize) -> Self {
        WittVector { vars: vars.clone(), coords: vec![FieldElem::zero(vars); level] }
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn level(&self) -> usize {
        self.coords.len()
    }

    /// `coords()[i-1]` is `a_i`.
    pub fn coords(&self) -> &[FieldElem] {
        &self.coords
    }

    pub fn coord(&self, i: usize) -> &FieldElem {
        &self.coords[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(FieldElem::is_zero)
    }

    /// `g_j = sum_{d | j} d a_d^(j/d)`.
    pub fn ghost(&self) -> GhostTuple {
        let m = self.level();
        let mut g = vec![FieldElem::zero(&self.vars); m];
        for d in 1..=m {
            let a = &self.coords[d - 1];
            if a.is_zero() {
                continue;
            }
            let dq = Rational::from_int(d as i64);
            let mut p = a.clone();
            let mut j = d;
            while j <= m {
                g[j - 1] = g[j - 1].add(&p.scale(&dq));
                j += d;
                if j <= m {
                    p = p.mul(a);
                }
            }
        }
        GhostTuple { vars: self.vars.clone(), comps: g }
    }

    /// Inverse of `ghost` by forward substitution; needs characteristic zero.
    pub fn unghost(g: &GhostTuple) -> WittVector {
        let m = g.level();
        let vars = g.vars().clone();
        let mut a: Vec<FieldElem> = Vec::with_capacity(m);
        for j in 1..=m {
            let mut rest = FieldElem::zero(&vars);
            for d in 1..j {
                if j % d == 0 && !a[d - 1].is_zero() {
                    rest = rest.add(&a[d - 1].pow((j / d) as i64).scale(&Rational::from_int(d as i64)));
                }
            }
            let aj = g.comp(j).sub(&rest).scale(&Rational::new(1, j as i64).expect("j > 0"));
            a.push(aj);
        }
        WittVector { vars, coords: a }
    }

    pub fn add(&self, other: &WittVector) -> WittVector {
        Self::unghost(&self.ghost().add(&other.ghost()))
    }

    pub fn neg(&self) -> WittVector {
        Self::unghost(&self.ghost().scale(&Rational::from_int(-1)))
    }

    pub fn mul(&self, other: &WittVector) -> WittVector {
        Self::unghost(&self.ghost().mul(&other.ghost()))
    }

    /// `[a] = (a, 0, ..., 0)`.
    pub fn teichmuller(a: &FieldElem, level: usize) -> WittVector {
        let mut coords = vec![FieldElem::zero(a.vars()); level];
        if level > 0 {
            coords[0] = a.clone();
        }
        WittVector { vars: a.vars().clone(), coords }
    }

    /// `γ(a) = prod (1 - a_i t^i) mod t^(m+1)`.
    pub fn gamma(&self) -> TruncElem {
        let m = self.level();
        let mut acc = TruncElem::one(&self.vars, m);
        for (idx, a) in self.coords.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            let factor = TruncElem::one(&self.vars, m).sub(&TruncElem::monomial(a.clone(), idx + 1, m));
            acc = acc.mul(&factor);
        }
        acc
    }

    /// Inverse of `gamma` on principal units.
    pub fn gamma_inv(u: &TruncElem) -> Result<WittVector> {
        if !u.is_principal() {
            return Err(Error::BadConstantTerm { expected: "1" });
        }
        let m = u.level();
        let vars = u.vars().clone();
        let mut v = u.clone();
        let mut coords = Vec::with_capacity(m);
        for i in 1..=m {
            let a = v.coeff(i).neg();
            if !a.is_zero() {
                let factor = TruncElem::one(&vars, m).sub(&TruncElem::monomial(a.clone(), i, m));
                v = v.mul(&factor.inv()?);
            }
            coords.push(a);
        }
        Ok(WittVector { vars, coords })
    }

    /// `V_s`, composed with restriction to `level`: entry `a_k` moves to `s k`.
    pub fn verschiebung(&self, s: usize, level: usize) -> Result<WittVector> {
        if s == 0 {
            return Err(Error::InvalidArgument("s must be at least 1".into()));
        }
        let mut coords = vec![FieldElem::zero(&self.vars); level];
        for (k, a) in self.coords.iter().enumerate() {
            let pos = s * (k + 1);
            if pos <= level {
                coords[pos - 1] = a.clone();
            }
        }
        Ok(WittVector { vars: self.vars.clone(), coords })
    }

    /// `F_s: W_m -> W_{m/s}` with ghost components `g_{s j}`.
    pub fn frobenius(&self, s: usize) -> Result<WittVector> {
        if s == 0 {
            return Err(Error::InvalidArgument("s must be at least 1".into()));
        }
        let g = self.ghost();
        let level = self.level() / s;
        let comps = (1..=level).map(|j| g.comp(s * j).clone()).collect();
        Ok(Self::unghost(&GhostTuple { vars: self.vars.clone(), comps }))
    }

    pub fn restrict(&self, level: usize) -> Result<WittVector> {
        if level > self.level() {
            return Err(Error::InvalidArgument(format!("cannot restrict level {} to {level}", self.level())));
        }
        Ok(WittVector { vars: self.vars.clone(), coords: self.coords[..level].to_vec() })
    }

    /// The presentation `a = sum_i V_i([a_i])`: nonzero `(i, a_i)`.
    pub fn decompose(&self) -> Vec<(usize, FieldElem)> {
        self.coords
            .iter()
            .enumerate()
            .filter(|(_, a)| !a.is_zero())
            .map(|(i, a)| (i + 1, a.clone()))
            .collect()
    }

    /// Re-sums a presentation through `add`.
    pub fn recompose(vars: &Vars, parts: &[(usize, FieldElem)], level: usize) -> Result<WittVector> {
        let mut acc = WittVector::zero(vars, level);
        for (i, a) in parts {
            let term = WittVector::teichmuller(a, level / i).verschiebung(*i, level)?;
            acc = acc.add(&term);
        }
        Ok(acc)
    }
}

impl fmt::Debug for WittVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.coords.iter()).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse::parse_field_elem;

    fn ab() -> Vars {
        Vars::new(&["a", "b"]).unwrap()
    }

    fn wv(items: &[&str], v: &Vars) -> WittVector {
        WittVector::new(v, items.iter().map(|s| parse_field_elem(s, v).unwrap()).collect())
    }

    fn gt(items: &[&str], v: &Vars) -> GhostTuple {
        GhostTuple::new(v, items.iter().map(|s| parse_field_elem(s, v).unwrap()).collect())
    }

    #[test]
    fn ghost_examples() {
        let v = ab();
        assert_eq!(wv(&["a", "0"], &v).ghost(), gt(&["a", "a^2"], &v));
        assert_eq!(wv(&["0", "a"], &v).ghost(), gt(&["0", "2a"], &v));
        assert_eq!(WittVector::unghost(&gt(&["3", "9"], &v)), wv(&["3", "0"], &v));
    }

    #[test]
    fn add_example() {
        let v = ab();
        let s = wv(&["a", "0"], &v).add(&wv(&["b", "0"], &v));
        assert_eq!(s, wv(&["a+b", "-a b"], &v));
        let one = WittVector::teichmuller(&FieldElem::one(&v), 3);
        let x = wv(&["a", "b", "a b"], &v);
        assert_eq!(one.mul(&x), x);
    }

    #[test]
    fn gamma_examples() {
        let v = ab();
        let m = 2;
        assert_eq!(wv(&["a", "0"], &v).gamma(), TruncElem::parse("1 - a t", &v, m).unwrap());
        let g = WittVector::gamma_inv(&TruncElem::parse("1 - 3t", &v, m).unwrap()).unwrap();
        assert_eq!(g, wv(&["3", "0"], &v));
        let g = WittVector::gamma_inv(&TruncElem::parse("1 + t", &v, m).unwrap()).unwrap();
        assert_eq!(g, wv(&["-1", "0"], &v));
        assert!(WittVector::gamma_inv(&TruncElem::parse("2 + t", &v, m).unwrap()).is_err());
    }

    #[test]
    fn v_f_restrict_decompose() {
        let v = ab();
        let va = wv(&["a"], &v).verschiebung(2, 2).unwrap();
        assert_eq!(va.ghost(), gt(&["0", "2a"], &v));
        assert_eq!(va.gamma(), TruncElem::parse("1 - a t^2", &v, 2).unwrap());
        assert_eq!(wv(&["a", "b", "a+b"], &v).restrict(2).unwrap(), wv(&["a", "b"], &v));
        let x = wv(&["a", "b"], &v);
        let parts = x.decompose();
        assert_eq!(parts.len(), 2);
        assert_eq!(WittVector::recompose(&v, &parts, 2).unwrap(), x);
        assert!(WittVector::zero(&v, 3).decompose().is_empty());
    }
}
