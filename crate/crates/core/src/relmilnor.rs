//! Relative Milnor K-groups of F_m in canonical coordinates
//! `tF_m ⊗ Ω^(n-1)_F`, computed by the trace `log(u) dlog(...)` followed by
//! reduction modulo exact forms.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::forms::{CanonRelForm, DiffForm};
use crate::scalars::{FieldElem, Rational, Vars};
use crate::trunc::{TruncElem, TruncUnit};

/// Coefficient ring of formal sums of symbols.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Default)]
pub enum CoeffRing {
    Z,
    #[default]
    Q,
}

impl CoeffRing {
    pub fn check(self, c: &Rational) -> Result<()> {
        if self == CoeffRing::Z && !c.is_integer() {
            return Err(Error::InvalidArgument(format!("coefficient {c} is not an integer")));
        }
        Ok(())
    }
}

impl FromStr for CoeffRing {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "z" => Ok(CoeffRing::Z),
            "q" => Ok(CoeffRing::Q),
            _ => Err(Error::Parse(format!("coefficient ring must be z or q, got {s:?}"))),
        }
    }
}

/// `coef · {u_1, ..., u_n}` with every `u_i` a unit of F_m.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct RelSymbol {
    coef: Rational,
    entries: Vec<TruncUnit>,
}

impl RelSymbol {
    pub fn new(coef: Rational, entries: Vec<TruncUnit>) -> Result<Self> {
        if entries.is_empty() {
            return Err(Error::InvalidArgument("a symbol needs at least one entry".into()));
        }
        let m = entries[0].level();
        if entries.iter().any(|u| u.level() != m) {
            return Err(Error::Mismatch("symbol entries live at different levels".into()));
        }
        if !entries.iter().any(TruncUnit::is_principal) {
            return Err(Error::NoPrincipalEntry);
        }
        Ok(RelSymbol { coef, entries })
    }

    /// Builds from ring elements, checking each is a unit.
    pub fn from_elems(coef: Rational, entries: Vec<TruncElem>) -> Result<Self> {
        let units = entries.into_iter().map(TruncUnit::new).collect::<Result<Vec<_>>>()?;
        Self::new(coef, units)
    }

    pub fn coef(&self) -> &Rational {
        &self.coef
    }

    pub fn entries(&self) -> &[TruncUnit] {
        &self.entries
    }

    pub fn degree(&self) -> usize {
        self.entries.len()
    }

    pub fn level(&self) -> usize {
        self.entries[0].level()
    }

    pub fn vars(&self) -> &Vars {
        self.entries[0].elem().vars()
    }

    pub fn with_coef(&self, coef: Rational) -> RelSymbol {
        RelSymbol { coef, entries: self.entries.clone() }
    }

    pub fn principal_positions(&self) -> Vec<usize> {
        self.entries.iter().enumerate().filter(|(_, u)| u.is_principal()).map(|(i, _)| i).collect()
    }

    /// Normal form computed from the principal entry at `k` (0-based).
    pub fn normal_form_at(&self, k: usize) -> Result<RelMilnorClass> {
        let u = self.entries.get(k).ok_or_else(|| Error::InvalidArgument(format!("no entry {k}")))?;
        if !u.is_principal() {
            return Err(Error::NoPrincipalEntry);
        }
        let mut form = u.log()?.as_form();
        for (j, e) in self.entries.iter().enumerate() {
            if j != k {
                form = form.wedge(&e.dlog());
            }
        }
        let canon = form.reduce_mod_exact()?;
        let sign = if k % 2 == 1 { -self.coef.clone() } else { self.coef.clone() };
        Ok(RelMilnorClass { canon: canon.scale(&sign) })
    }

    /// Normal form using the first principal entry.
    pub fn normal_form(&self) -> Result<RelMilnorClass> {
        let k = self.principal_positions().first().copied().ok_or(Error::NoPrincipalEntry)?;
        self.normal_form_at(k)
    }

    pub fn restrict(&self, level: usize) -> Result<RelSymbol> {
        let entries = self.entries.iter().map(|u| u.restrict(level)).collect::<Result<Vec<_>>>()?;
        RelSymbol::new(self.coef.clone(), entries)
    }

    /// Appends constant entries `cs`.
    pub fn append_constants(&self, cs: &[FieldElem]) -> Result<RelSymbol> {
        let m = self.level();
        let mut entries = self.entries.clone();
        for c in cs {
            if c.is_zero() {
                return Err(Error::ZeroEntry);
            }
            entries.push(TruncUnit::new(TruncElem::constant(c.clone(), m))?);
        }
        RelSymbol::new(self.coef.clone(), entries)
    }
}

/// The shape of a class: variables, symbol degree n, level m.
#[derive(Clone, Debug)]
pub struct Shape {
    pub vars: Vars,
    pub n: usize,
    pub m: usize,
}

/// Normal form of a formal sum of symbols of degree `shape.n` at level `shape.m`.
pub fn normal_form(shape: &Shape, terms: &[RelSymbol], ring: CoeffRing) -> Result<RelMilnorClass> {
    if shape.n == 0 {
        return Err(Error::InvalidArgument("relative symbols have degree at least 1".into()));
    }
    let mut acc = RelMilnorClass::zero(&shape.vars, shape.n, shape.m);
    for s in terms {
        ring.check(&s.coef)?;
        if s.degree() != shape.n || s.level() != shape.m {
            return Err(Error::Mismatch(format!(
                "symbol of degree {} at level {} in a sum of degree {} at level {}",
                s.degree(),
                s.level(),
                shape.n,
                shape.m
            )));
        }
        acc = acc.add(&s.normal_form()?);
    }
    Ok(acc)
}

/// A class of the relative group, identified with its canonical coordinates.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RelMilnorClass {
    canon: CanonRelForm,
}

impl RelMilnorClass {
    pub fn zero(vars: &Vars, n: usize, m: usize) -> Self {
        RelMilnorClass { canon: CanonRelForm::zero(vars, n - 1, m) }
    }

    pub fn from_canon(canon: CanonRelForm) -> Self {
        RelMilnorClass { canon }
    }

    pub fn canon(&self) -> &CanonRelForm {
        &self.canon
    }

    /// Symbol degree n (the canonical forms have degree n-1).
    pub fn degree(&self) -> usize {
        self.canon.degree() + 1
    }

    pub fn level(&self) -> usize {
        self.canon.level()
    }

    pub fn is_zero(&self) -> bool {
        self.canon.is_zero()
    }

    pub fn add(&self, other: &RelMilnorClass) -> RelMilnorClass {
        RelMilnorClass { canon: self.canon.add(&other.canon) }
    }

    pub fn sub(&self, other: &RelMilnorClass) -> RelMilnorClass {
        RelMilnorClass { canon: self.canon.sub(&other.canon) }
    }

    pub fn neg(&self) -> RelMilnorClass {
        RelMilnorClass { canon: self.canon.neg() }
    }

    pub fn scale(&self, c: &Rational) -> RelMilnorClass {
        RelMilnorClass { canon: self.canon.scale(c) }
    }

    /// Product with the absolute symbol `{c_1, ..., c_k}`.
    pub fn mult_by_absolute(&self, cs: &[FieldElem]) -> Result<RelMilnorClass> {
        let w = DiffForm::dlog_wedge(self.canon.vars(), cs)?;
        Ok(RelMilnorClass { canon: self.canon.wedge_right(&w) })
    }

    pub fn restrict(&self, level: usize) -> Result<RelMilnorClass> {
        Ok(RelMilnorClass { canon: self.canon.truncate(level)? })
    }
}

impl fmt::Debug for RelMilnorClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.canon)
    }
}

/// `{exp(a), b_1, ..., b_k}` for `a ∈ tF_m`.
pub fn theta(a: &TruncElem, bs: &[FieldElem]) -> Result<RelSymbol> {
    let u = TruncUnit::new(a.exp()?)?;
    RelSymbol::new(Rational::one(), vec![u])?.append_constants(bs)
}

/// Decomposable symbols whose normal forms sum to `canon`; a witness that
/// the normal form map is onto.
pub fn theta_section(canon: &CanonRelForm) -> Result<Vec<RelSymbol>> {
    let vars = canon.vars().clone();
    let m = canon.level();
    let mut out = Vec::new();
    for (idx, c) in canon.comps().iter().enumerate() {
        let i = idx + 1;
        for (s, f) in c.terms() {
            // f dx_S = (f x_S) dlog x_{s_1} ∧ ...
            let mut coeff = f.clone();
            let mut bs = Vec::new();
            for k in 0..vars.len() {
                if s & (1 << k) != 0 {
                    let xk = FieldElem::var(&vars, k);
                    coeff = coeff.mul(&xk);
                    bs.push(xk);
                }
            }
            out.push(theta(&TruncElem::monomial(coeff, i, m), &bs)?);
        }
    }
    Ok(out)
}

/// Both sides of the symbol identity
/// `{1+as, 1+bτ} = -{1 + (ab/(1+as)) sτ, -as(1+bτ)}` in F_m, with `bτ ∈ tF_m`.
pub fn elem_identity_relative(
    a: &TruncElem,
    b: &TruncElem,
    s: &TruncElem,
    tau: &TruncElem,
) -> Result<(RelSymbol, RelSymbol)> {
    let m = a.level();
    let vars = a.vars().clone();
    let one = TruncElem::one(&vars, m);
    let as_ = a.mul(s);
    let btau = b.mul(tau);
    if !btau.is_nilpotent() {
        return Err(Error::InvalidArgument("b tau must lie in tF_m".into()));
    }
    let e1 = one.add(&as_);
    let e2 = one.add(&btau);
    if !e1.is_unit() {
        return Err(Error::NoUnitEntry("1 + as".into()));
    }
    let w = one.add(&a.mul(b).mul(&e1.inv()?).mul(s).mul(tau));
    let v = as_.mul(&e2).neg();
    if !v.is_unit() {
        return Err(Error::NoUnitEntry("-as(1 + b tau)".into()));
    }
    let lhs = RelSymbol::from_elems(Rational::one(), vec![e1, e2])?;
    let rhs = RelSymbol::from_elems(Rational::from_int(-1), vec![w, v])?;
    Ok((lhs, rhs))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalars::parse::parse_field_elem;

    fn x() -> Vars {
        Vars::new(&["x", "y"]).unwrap()
    }

    fn te(s: &str, m: usize) -> TruncElem {
        TruncElem::parse(s, &x(), m).unwrap()
    }

    fn sym(parts: &[&str], m: usize) -> RelSymbol {
        RelSymbol::from_elems(Rational::one(), parts.iter().map(|p| te(p, m)).collect()).unwrap()
    }

    fn dlx() -> DiffForm {
        DiffForm::dlog(&FieldElem::var(&x(), 0)).unwrap()
    }

    #[test]
    fn examples() {
        let c = sym(&["1+t", "x"], 1).normal_form().unwrap();
        assert_eq!(c.canon().comps(), &[dlx()]);
        let c = sym(&["1-3t", "x"], 2).normal_form().unwrap();
        assert_eq!(
            c.canon().comps(),
            &[dlx().scale(&Rational::from_int(-3)), dlx().scale(&Rational::new(-9, 2).unwrap())]
        );
        assert!(sym(&["1+x t - t^2", "1+x t - t^2"], 4).normal_form().unwrap().is_zero());
        assert_eq!(
            RelSymbol::from_elems(Rational::one(), vec![te("2+t", 2), te("x", 2)]),
            Err(Error::NoPrincipalEntry)
        );
    }

    #[test]
    fn restriction_and_products() {
        let c = sym(&["1-3t", "x"], 2).normal_form().unwrap();
        assert_eq!(c.restrict(1).unwrap().canon().comps(), &[dlx().scale(&Rational::from_int(-3))]);
        assert_eq!(c.restrict(2).unwrap(), c);

        let v = x();
        let y = FieldElem::var(&v, 1);
        let base = sym(&["1+t", "x"], 1);
        let prod = base.normal_form().unwrap().mult_by_absolute(std::slice::from_ref(&y)).unwrap();
        let dly = DiffForm::dlog(&y).unwrap();
        assert_eq!(prod.canon().comps(), &[dlx().wedge(&dly)]);
        assert_eq!(base.append_constants(&[y]).unwrap().normal_form().unwrap(), prod);
        let q = parse_field_elem("7/2", &v).unwrap();
        assert!(base.normal_form().unwrap().mult_by_absolute(&[q]).unwrap().is_zero());
        let xx = FieldElem::var(&v, 0);
        assert!(base.normal_form().unwrap().mult_by_absolute(&[xx]).unwrap().is_zero());
    }

    #[test]
    fn theta_examples() {
        let v = x();
        let s = theta(&te("t", 1), &[FieldElem::var(&v, 0)]).unwrap();
        assert_eq!(s, sym(&["1+t", "x"], 1));
        let z = theta(&TruncElem::zero(&v, 3), &[FieldElem::var(&v, 0)]).unwrap();
        assert!(z.normal_form().unwrap().is_zero());
    }
}
