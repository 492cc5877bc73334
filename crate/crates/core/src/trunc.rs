//! The truncated polynomial ring F_m = F[t]/(t^(m+1)).

use std::fmt;

use crate::error::{Error, Result};
use crate::forms::{DiffForm, FormOnTrunc};
use crate::scalars::parse::parse_field_elem;
use crate::scalars::{FieldElem, MultiPoly, Rational, Vars};

/// `c_0 + c_1 t + ... + c_m t^m`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TruncElem {
    vars: Vars,
    coeffs: Vec<FieldElem>,
}

impl TruncElem {
    pub fn zero(vars: &Vars, level: usize) -> Self {
        TruncElem { vars: vars.clone(), coeffs: vec![FieldElem::zero(vars); level + 1] }
    }

    pub fn one(vars: &Vars, level: usize) -> Self {
        Self::constant(FieldElem::one(vars), level)
    }

    pub fn constant(c: FieldElem, level: usize) -> Self {
        let mut out = Self::zero(c.vars(), level);
        out.coeffs[0] = c;
        out
    }

    /// `c t^i`.
    pub fn monomial(c: FieldElem, i: usize, level: usize) -> Self {
        let mut out = Self::zero(c.vars(), level);
        if i <= level {
            out.coeffs[i] = c;
        }
        out
    }

    /// Coefficients `c_0..c_m`; missing ones are zero and extra ones are dropped.
    pub fn from_coeffs(vars: &Vars, mut coeffs: Vec<FieldElem>, level: usize) -> Self {
        coeffs.resize(level + 1, FieldElem::zero(vars));
        TruncElem { vars: vars.clone(), coeffs }
    }

    /// Parses `c0 + c1*t + ...`; a denominator in `t` is allowed when its
    /// constant term is nonzero.
    pub fn parse(s: &str, vars: &Vars, level: usize) -> Result<Self> {
        if vars.index_of("t").is_some() {
            return Err(Error::InvalidArgument("the name t is reserved for the truncation variable".into()));
        }
        let ext = vars.extended("t")?;
        let e = parse_field_elem(s, &ext)?;
        let num = Self::from_ext_poly(e.num(), vars, level);
        let den = Self::from_ext_poly(e.den(), vars, level);
        Ok(num.mul(&den.inv()?))
    }

    fn from_ext_poly(p: &MultiPoly, vars: &Vars, level: usize) -> Self {
        let last = p.nvars() - 1;
        let coeffs = p
            .coeffs_in(last)
            .into_iter()
            .map(|c| FieldElem::from_poly(c.drop_last_var(vars)))
            .collect();
        Self::from_coeffs(vars, coeffs, level)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn level(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[FieldElem] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> &FieldElem {
        &self.coeffs[i]
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(FieldElem::is_zero)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(FieldElem::is_zero)
    }

    pub fn is_unit(&self) -> bool {
        !self.coeffs[0].is_zero()
    }

    pub fn is_principal(&self) -> bool {
        self.coeffs[0].is_one()
    }

    /// Lies in the ideal (t).
    pub fn is_nilpotent(&self) -> bool {
        self.coeffs[0].is_zero()
    }

    fn check(&self, other: &TruncElem) {
        assert_eq!(self.level(), other.level(), "mixed truncation levels");
    }

    pub fn add(&self, other: &TruncElem) -> TruncElem {
        self.check(other);
        TruncElem { vars: self.vars.clone(), coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a.add(b)).collect() }
    }

    pub fn neg(&self) -> TruncElem {
        TruncElem { vars: self.vars.clone(), coeffs: self.coeffs.iter().map(FieldElem::neg).collect() }
    }

    pub fn sub(&self, other: &TruncElem) -> TruncElem {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &FieldElem) -> TruncElem {
        TruncElem { vars: self.vars.clone(), coeffs: self.coeffs.iter().map(|a| a.mul(c)).collect() }
    }

    pub fn scale_q(&self, c: &Rational) -> TruncElem {
        TruncElem { vars: self.vars.clone(), coeffs: self.coeffs.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn mul(&self, other: &TruncElem) -> TruncElem {
        self.check(other);
        let m = self.level();
        let mut out = Self::zero(&self.vars, m);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for j in 0..=(m - i) {
                let b = &other.coeffs[j];
                if !b.is_zero() {
                    out.coeffs[i + j] = out.coeffs[i + j].add(&a.mul(b));
                }
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> TruncElem {
        let mut acc = Self::one(&self.vars, self.level());
        for _ in 0..e {
            acc = acc.mul(self);
        }
        acc
    }

    pub fn inv(&self) -> Result<TruncElem> {
        if !self.is_unit() {
            return Err(Error::NotAUnit);
        }
        let m = self.level();
        let b0 = self.coeffs[0].inv()?;
        let mut b = vec![b0.clone()];
        for k in 1..=m {
            let mut s = FieldElem::zero(&self.vars);
            for j in 1..=k {
                if !self.coeffs[j].is_zero() {
                    s = s.add(&self.coeffs[j].mul(&b[k - j]));
                }
            }
            b.push(s.mul(&b0).neg());
        }
        Ok(TruncElem { vars: self.vars.clone(), coeffs: b })
    }

    pub fn restrict(&self, level: usize) -> Result<TruncElem> {
        if level > self.level() {
            return Err(Error::InvalidArgument(format!("cannot restrict level {} to {level}", self.level())));
        }
        Ok(TruncElem { vars: self.vars.clone(), coeffs: self.coeffs[..=level].to_vec() })
    }

    /// `exp(a) = sum a^k / k!` for `a ∈ tF_m`.
    pub fn exp(&self) -> Result<TruncElem> {
        if !self.is_nilpotent() {
            return Err(Error::BadConstantTerm { expected: "0" });
        }
        let m = self.level();
        let mut out = Self::one(&self.vars, m);
        let mut term = Self::one(&self.vars, m);
        for k in 1..=m {
            term = term.mul(self).scale_q(&Rational::new(1, k as i64).expect("k > 0"));
            if term.is_zero() {
                break;
            }
            out = out.add(&term);
        }
        Ok(out)
    }

    /// `log(u) = sum (-1)^(k+1) (u-1)^k / k` for `u ∈ 1 + tF_m`.
    pub fn log(&self) -> Result<TruncElem> {
        if !self.is_principal() {
            return Err(Error::BadConstantTerm { expected: "1" });
        }
        let m = self.level();
        let w = self.sub(&Self::one(&self.vars, m));
        let mut out = Self::zero(&self.vars, m);
        let mut pw = Self::one(&self.vars, m);
        for k in 1..=m {
            pw = pw.mul(&w);
            if pw.is_zero() {
                break;
            }
            let sign = if k % 2 == 1 { 1 } else { -1 };
            out = out.add(&pw.scale_q(&Rational::new(sign, k as i64).expect("k > 0")));
        }
        Ok(out)
    }

    /// The element as a 0-form over F_m.
    pub fn as_form(&self) -> FormOnTrunc {
        let poly = self.coeffs[1..].iter().map(|c| DiffForm::function(c.clone())).collect();
        FormOnTrunc::from_parts(DiffForm::function(self.coeffs[0].clone()), poly, Vec::new()).expect("degree 0 shape")
    }

    pub fn d(&self) -> FormOnTrunc {
        self.as_form().d()
    }

    /// `u^(-1) du` as a 1-form over F_m.
    pub fn dlog(&self) -> Result<FormOnTrunc> {
        let inv = self.inv()?;
        Ok(inv.as_form().wedge(&self.d()))
    }
}

impl fmt::Display for TruncElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match i {
                0 => write!(f, "{c}")?,
                1 => write!(f, "({c})*t")?,
                _ => write!(f, "({c})*t^{i}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for TruncElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[m={}] {}", self.level(), self)
    }
}

/// A unit of F_m with its principal flag computed once.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct TruncUnit {
    elem: TruncElem,
    principal: bool,
}

impl TruncUnit {
    pub fn new(elem: TruncElem) -> Result<Self> {
        if !elem.is_unit() {
            return Err(Error::NotAUnit);
        }
        let principal = elem.is_principal();
        Ok(TruncUnit { elem, principal })
    }

    pub fn elem(&self) -> &TruncElem {
        &self.elem
    }

    pub fn into_elem(self) -> TruncElem {
        self.elem
    }

    pub fn is_principal(&self) -> bool {
        self.principal
    }

    pub fn level(&self) -> usize {
        self.elem.level()
    }

    pub fn mul(&self, other: &TruncUnit) -> TruncUnit {
        TruncUnit::new(self.elem.mul(&other.elem)).expect("product of units")
    }

    pub fn inv(&self) -> TruncUnit {
        TruncUnit::new(self.elem.inv().expect("unit")).expect("inverse of a unit")
    }

    pub fn restrict(&self, level: usize) -> Result<TruncUnit> {
        TruncUnit::new(self.elem.restrict(level)?)
    }

    pub fn log(&self) -> Result<TruncElem> {
        self.elem.log()
    }

    pub fn dlog(&self) -> FormOnTrunc {
        self.elem.dlog().expect("unit")
    }
}

impl From<TruncUnit> for TruncElem {
    fn from(u: TruncUnit) -> Self {
        u.elem
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x() -> Vars {
        Vars::new(&["x"]).unwrap()
    }

    fn te(s: &str, m: usize) -> TruncElem {
        TruncElem::parse(s, &x(), m).unwrap()
    }

    #[test]
    fn ring_examples() {
        let m = 5;
        assert!(te("1+t", m).mul(&te("1 - t + t^2 - t^3 + t^4 - t^5", m)).is_one());
        assert_eq!(te("1+t", m).inv().unwrap(), te("1/(1+t)", m));
        assert_eq!(te("1 + t + t^3", 3).restrict(2).unwrap(), te("1 + t", 2));
        assert!(te("t", m).mul(&te("t^5", m)).is_zero());
        assert_eq!(te("3t", m).inv(), Err(Error::NotAUnit));
    }

    #[test]
    fn exp_log_examples() {
        assert_eq!(te("t", 1).exp().unwrap(), te("1+t", 1));
        assert_eq!(te("1+t", 3).log().unwrap(), te("t - t^2/2 + t^3/3", 3));
        let u = te("1 - 3t + x t^2", 4);
        assert_eq!(u.log().unwrap().exp().unwrap(), u);
        assert_eq!(te("2+t", 2).log(), Err(Error::BadConstantTerm { expected: "1" }));
        assert_eq!(te("1+t", 2).exp(), Err(Error::BadConstantTerm { expected: "0" }));
    }

    #[test]
    fn dlog_examples() {
        let v = x();
        let m = 2;
        let xr = te("x", m).dlog().unwrap();
        assert_eq!(xr.base(), &DiffForm::dlog(&FieldElem::var(&v, 0)).unwrap());
        assert!(xr.poly().iter().all(DiffForm::is_zero));
        assert!(xr.dt_parts().iter().all(DiffForm::is_zero));

        let w = te("1+t", m).dlog().unwrap();
        let one = DiffForm::function(FieldElem::one(&v));
        let want = FormOnTrunc::t_power_dt(0, one.clone(), m).sub(&FormOnTrunc::t_power_dt(1, one, m));
        assert_eq!(w, want);
    }
}
