//! The big de Rham–Witt complex W_mΩ^n_F, stored in ghost coordinates
//! `(ω_1..ω_m)` with each `ω_j ∈ Ω^n_F`.

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::scalars::{FieldElem, Rational, Vars};
use crate::witt::{GhostTuple, WittVector};

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DRWForm {
    vars: Vars,
    degree: usize,
    ghost: Vec<DiffForm>,
}

impl DRWForm {
    pub fn zero(vars: &Vars, degree: usize, level: usize) -> Self {
        DRWForm { vars: vars.clone(), degree, ghost: vec![DiffForm::zero(vars, degree); level] }
    }

    pub fn new(vars: &Vars, degree: usize, ghost: Vec<DiffForm>) -> Result<Self> {
        if ghost.iter().any(|w| w.degree() != degree) {
            return Err(Error::Mismatch("ghost components must share one degree".into()));
        }
        Ok(DRWForm { vars: vars.clone(), degree, ghost })
    }

    /// A Witt vector as a degree-0 form.
    pub fn from_witt(a: &WittVector) -> Self {
        Self::from_ghost(&a.ghost())
    }

    pub fn from_ghost(g: &GhostTuple) -> Self {
        DRWForm {
            vars: g.vars().clone(),
            degree: 0,
            ghost: g.comps().iter().map(|c| DiffForm::function(c.clone())).collect(),
        }
    }

    /// The degree-0 part as a ghost tuple.
    pub fn to_ghost(&self) -> Result<GhostTuple> {
        if self.degree != 0 {
            return Err(Error::Mismatch("only degree-0 forms are ghost tuples".into()));
        }
        Ok(GhostTuple::new(&self.vars, self.ghost.iter().map(DiffForm::as_function).collect()))
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn level(&self) -> usize {
        self.ghost.len()
    }

    /// `ghost()[j-1]` is `ω_j`.
    pub fn ghost(&self) -> &[DiffForm] {
        &self.ghost
    }

    pub fn comp(&self, j: usize) -> &DiffForm {
        &self.ghost[j - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.ghost.iter().all(DiffForm::is_zero)
    }

    fn zip_with(&self, other: &DRWForm, f: impl Fn(&DiffForm, &DiffForm) -> DiffForm) -> DRWForm {
        assert_eq!(self.level(), other.level(), "mixed de Rham-Witt levels");
        let ghost: Vec<DiffForm> = self.ghost.iter().zip(&other.ghost).map(|(a, b)| f(a, b)).collect();
        let degree = ghost.first().map(DiffForm::degree).unwrap_or(self.degree);
        DRWForm { vars: self.vars.clone(), degree, ghost }
    }

    pub fn add(&self, other: &DRWForm) -> DRWForm {
        self.zip_with(other, DiffForm::add)
    }

    pub fn sub(&self, other: &DRWForm) -> DRWForm {
        self.zip_with(other, DiffForm::sub)
    }

    pub fn scale(&self, c: &Rational) -> DRWForm {
        DRWForm { vars: self.vars.clone(), degree: self.degree, ghost: self.ghost.iter().map(|w| w.scale(c)).collect() }
    }

    pub fn mul(&self, other: &DRWForm) -> DRWForm {
        let mut out = self.zip_with(other, DiffForm::wedge);
        out.degree = self.degree + other.degree;
        out
    }

    /// `(dα)_j = (1/j) dω_j`.
    pub fn d(&self) -> DRWForm {
        let ghost = self
            .ghost
            .iter()
            .enumerate()
            .map(|(k, w)| w.d().scale(&Rational::new(1, k as i64 + 1).expect("j > 0")))
            .collect();
        DRWForm { vars: self.vars.clone(), degree: self.degree + 1, ghost }
    }

    /// `V_s` into level `level`: component j is `s ω_{j/s}` when s | j.
    pub fn verschiebung(&self, s: usize, level: usize) -> Result<DRWForm> {
        if s == 0 {
            return Err(Error::InvalidArgument("s must be at least 1".into()));
        }
        let sq = Rational::from_int(s as i64);
        let ghost = (1..=level)
            .map(|j| {
                if j % s == 0 && j / s <= self.level() {
                    self.comp(j / s).scale(&sq)
                } else {
                    DiffForm::zero(&self.vars, self.degree)
                }
            })
            .collect();
        Ok(DRWForm { vars: self.vars.clone(), degree: self.degree, ghost })
    }

    /// `F_s` into level `m/s`: component j is `ω_{s j}`.
    pub fn frobenius(&self, s: usize) -> Result<DRWForm> {
        if s == 0 {
            return Err(Error::InvalidArgument("s must be at least 1".into()));
        }
        let level = self.level() / s;
        let ghost = (1..=level).map(|j| self.comp(s * j).clone()).collect();
        Ok(DRWForm { vars: self.vars.clone(), degree: self.degree, ghost })
    }

    pub fn restrict(&self, level: usize) -> Result<DRWForm> {
        if level > self.level() {
            return Err(Error::InvalidArgument(format!("cannot restrict level {} to {level}", self.level())));
        }
        Ok(DRWForm { vars: self.vars.clone(), degree: self.degree, ghost: self.ghost[..level].to_vec() })
    }

    /// `dlog [b]`: the constant tuple `(dlog b)_j`.
    pub fn teich_dlog(b: &FieldElem, level: usize) -> Result<DRWForm> {
        let w = DiffForm::dlog(b)?;
        Ok(DRWForm { vars: b.vars().clone(), degree: 1, ghost: vec![w; level] })
    }

    /// `a dlog[b_1] ∧ ... ∧ dlog[b_k]`.
    pub fn phi(a: &WittVector, bs: &[FieldElem]) -> Result<DRWForm> {
        let vars = a.vars();
        let w = DiffForm::dlog_wedge(vars, bs)?;
        let g = a.ghost();
        let ghost = g.comps().iter().map(|gj| w.mul_fn(gj)).collect();
        Ok(DRWForm { vars: vars.clone(), degree: bs.len(), ghost })
    }

    /// Whether `V_s(a dlog[b]...) = V_s(a) dlog[b]...` at level `level`,
    /// with both sides built independently.
    pub fn v_dlog_identity_check(a: &WittVector, bs: &[FieldElem], s: usize, level: usize) -> Result<bool> {
        let lhs = Self::phi(a, bs)?.verschiebung(s, level)?;
        let va = a.verschiebung(s, level)?;
        let mut rhs = Self::from_witt(&va);
        for b in bs {
            rhs = rhs.mul(&Self::teich_dlog(b, level)?);
        }
        Ok(lhs == rhs)
    }
}

impl fmt::Debug for DRWForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DRW[n={}](", self.degree)?;
        for (i, c) in self.ghost.iter().enumerate() {
            if i > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{c}")?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse::parse_field_elem;

    fn fe(s: &str, v: &Vars) -> FieldElem {
        parse_field_elem(s, v).unwrap()
    }

    #[test]
    fn d_of_teichmuller() {
        let v = Vars::new(&["x", "a"]).unwrap();
        let a = fe("x + a^2", &v);
        let m = 4;
        let da = DRWForm::from_witt(&WittVector::teichmuller(&a, m)).d();
        let dform = DiffForm::function(a.clone()).d();
        for j in 1..=m {
            assert_eq!(da.comp(j), &dform.mul_fn(&a.pow(j as i64 - 1)));
        }
        // F_s d[a] = [a]^(s-1) d[a]: component j is a^(s j - 1) da
        let s = 2;
        let f = da.frobenius(s).unwrap();
        for j in 1..=m / s {
            assert_eq!(f.comp(j), &dform.mul_fn(&a.pow((s * j) as i64 - 1)));
        }
    }

    #[test]
    fn dlog_examples() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let m = 3;
        let tx = DRWForm::teich_dlog(&fe("x", &v), m).unwrap();
        assert!(tx.mul(&tx).is_zero());
        assert!(DRWForm::teich_dlog(&fe("5/2", &v), m).unwrap().is_zero());
        let txy = DRWForm::teich_dlog(&fe("x y", &v), m).unwrap();
        assert_eq!(txy, tx.add(&DRWForm::teich_dlog(&fe("y", &v), m).unwrap()));
        // route through d: [b]^{-1} d[b]
        let b = fe("1 + x y", &v);
        let via_d = DRWForm::from_witt(&WittVector::teichmuller(&b.inv().unwrap(), m))
            .mul(&DRWForm::from_witt(&WittVector::teichmuller(&b, m)).d());
        assert_eq!(via_d, DRWForm::teich_dlog(&b, m).unwrap());
    }

    #[test]
    fn phi_examples() {
        let v = Vars::new(&["x"]).unwrap();
        let a = WittVector::new(&v, vec![fe("3", &v), fe("0", &v)]);
        let p = DRWForm::phi(&a, &[fe("x", &v)]).unwrap();
        let dl = DiffForm::dlog(&fe("x", &v)).unwrap();
        assert_eq!(p.ghost(), &[dl.scale(&Rational::from_int(3)), dl.scale(&Rational::from_int(9))]);
        assert!(DRWForm::phi(&a, &[fe("2", &v)]).unwrap().is_zero());
        let va = WittVector::new(&v, vec![fe("x+1", &v)]);
        let lhs = DRWForm::phi(&va.verschiebung(2, 2).unwrap(), &[fe("x", &v)]).unwrap();
        let rhs = DRWForm::phi(&va, &[fe("x", &v)]).unwrap().verschiebung(2, 2).unwrap();
        assert_eq!(lhs, rhs);
        assert!(lhs.comp(1).is_zero());
        assert_eq!(lhs.comp(2), &dl.mul_fn(&fe("2x+2", &v)));
    }
}
