//! Kähler forms over F, forms over F_m = F[t]/(t^(m+1)), and reduction of
//! relative forms modulo exact ones.

use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::{FieldElem, Rational, Vars};

/// Index subset of {0..r-1} as a bitmask.
pub type Subset = u64;

fn sign_of(neg: bool) -> Rational {
    if neg {
        Rational::from_int(-1)
    } else {
        Rational::one()
    }
}

/// Parity of the permutation sorting `S ++ T`, or `None` when they overlap.
fn wedge_sign(s: Subset, t: Subset) -> Option<bool> {
    if s & t != 0 {
        return None;
    }
    let mut inversions = 0u32;
    let mut rest = t;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        // elements of s above j
        inversions += (s >> (j + 1)).count_ones();
    }
    Some(inversions % 2 == 1)
}

/// A homogeneous n-form `sum_S f_S dx_S` over F.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DiffForm {
    vars: Vars,
    degree: usize,
    terms: BTreeMap<Subset, FieldElem>,
}

impl DiffForm {
    pub fn zero(vars: &Vars, degree: usize) -> Self {
        assert!(vars.len() < 64, "at most 63 variables");
        DiffForm { vars: vars.clone(), degree, terms: BTreeMap::new() }
    }

    /// The 0-form `f`.
    pub fn function(f: FieldElem) -> Self {
        let mut out = Self::zero(f.vars(), 0);
        if !f.is_zero() {
            out.terms.insert(0, f);
        }
        out
    }

    /// `f dx_S` for the subset given by sorted indices.
    pub fn monomial(f: FieldElem, indices: &[usize]) -> Result<Self> {
        let vars = f.vars().clone();
        let mut mask: Subset = 0;
        for w in indices.windows(2) {
            if w[0] >= w[1] {
                return Err(Error::InvalidArgument("form indices must be strictly increasing".into()));
            }
        }
        for &i in indices {
            if i >= vars.len() {
                return Err(Error::InvalidArgument(format!("form index {i} out of range")));
            }
            mask |= 1 << i;
        }
        let mut out = Self::zero(&vars, indices.len());
        if !f.is_zero() {
            out.terms.insert(mask, f);
        }
        Ok(out)
    }

    /// `dx_i`.
    pub fn dx(vars: &Vars, i: usize) -> Self {
        let mut out = Self::zero(vars, 1);
        out.terms.insert(1 << i, FieldElem::one(vars));
        out
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (Subset, &FieldElem)> {
        self.terms.iter().map(|(s, f)| (*s, f))
    }

    pub fn coeff(&self, s: Subset) -> FieldElem {
        self.terms.get(&s).cloned().unwrap_or_else(|| FieldElem::zero(&self.vars))
    }

    /// The coefficient of a 0-form.
    pub fn as_function(&self) -> FieldElem {
        debug_assert_eq!(self.degree, 0);
        self.coeff(0)
    }

    fn add_term(&mut self, s: Subset, f: &FieldElem) {
        if f.is_zero() {
            return;
        }
        match self.terms.get_mut(&s) {
            Some(v) => {
                *v = v.add(f);
                if v.is_zero() {
                    self.terms.remove(&s);
                }
            }
            None => {
                self.terms.insert(s, f.clone());
            }
        }
    }

    pub fn add(&self, other: &DiffForm) -> DiffForm {
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        let mut out = self.clone();
        for (s, f) in &other.terms {
            out.add_term(*s, f);
        }
        out
    }

    pub fn neg(&self) -> DiffForm {
        DiffForm {
            vars: self.vars.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(s, f)| (*s, f.neg())).collect(),
        }
    }

    pub fn sub(&self, other: &DiffForm) -> DiffForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> DiffForm {
        if c.is_zero() {
            return Self::zero(&self.vars, self.degree);
        }
        DiffForm {
            vars: self.vars.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(s, f)| (*s, f.scale(c))).collect(),
        }
    }

    /// Multiplication by a function.
    pub fn mul_fn(&self, g: &FieldElem) -> DiffForm {
        if g.is_zero() {
            return Self::zero(&self.vars, self.degree);
        }
        if g.is_one() {
            return self.clone();
        }
        DiffForm {
            vars: self.vars.clone(),
            degree: self.degree,
            terms: self.terms.iter().map(|(s, f)| (*s, f.mul(g))).collect(),
        }
    }

    pub fn wedge(&self, other: &DiffForm) -> DiffForm {
        let mut out = Self::zero(&self.vars, self.degree + other.degree);
        for (s, f) in &self.terms {
            for (t, g) in &other.terms {
                if let Some(neg) = wedge_sign(*s, *t) {
                    let c = f.mul(g);
                    out.add_term(s | t, &if neg { c.neg() } else { c });
                }
            }
        }
        out
    }

    /// Exterior derivative.
    pub fn d(&self) -> DiffForm {
        let r = self.vars.len();
        let mut out = Self::zero(&self.vars, self.degree + 1);
        for (s, f) in &self.terms {
            for i in 0..r {
                if s & (1 << i) != 0 || !f.contains_var(i) {
                    continue;
                }
                let below = (s & ((1 << i) - 1)).count_ones();
                let df = f.partial_derivative(i);
                out.add_term(s | (1 << i), &if below % 2 == 1 { df.neg() } else { df });
            }
        }
        out
    }

    /// `du/u`.
    pub fn dlog(u: &FieldElem) -> Result<DiffForm> {
        if u.is_zero() {
            return Err(Error::ZeroArgument);
        }
        let vars = u.vars();
        let mut out = Self::zero(vars, 1);
        let inv = u.inv()?;
        for i in 0..vars.len() {
            if u.contains_var(i) {
                out.add_term(1 << i, &u.partial_derivative(i).mul(&inv));
            }
        }
        Ok(out)
    }

    /// `dlog b1 ∧ ... ∧ dlog bk` (the 0-form 1 for an empty list).
    pub fn dlog_wedge(vars: &Vars, bs: &[FieldElem]) -> Result<DiffForm> {
        let mut acc = DiffForm::function(FieldElem::one(vars));
        for b in bs {
            acc = acc.wedge(&DiffForm::dlog(b)?);
            if acc.is_zero() {
                // still validate the remaining entries
                for rest in bs {
                    if rest.is_zero() {
                        return Err(Error::ZeroArgument);
                    }
                }
                return Ok(DiffForm::zero(vars, bs.len()));
            }
        }
        Ok(acc)
    }
}

impl fmt::Display for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (k, (s, c)) in self.terms.iter().enumerate() {
            if k > 0 {
                write!(f, " + ")?;
            }
            if *s == 0 {
                write!(f, "({c})")?;
                continue;
            }
            let names: Vec<String> =
                (0..self.vars.len()).filter(|i| s & (1 << i) != 0).map(|i| format!("d{}", self.vars.name(i))).collect();
            write!(f, "({c}) {}", names.join("^"))?;
        }
        Ok(())
    }
}

impl fmt::Debug for DiffForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.degree, self)
    }
}

/// A k-form over F_m in the split decomposition
/// `base + sum_{i=1..m} t^i ω_i + sum_{i=0..m-1} t^i dt ∧ η_i`.
#[derive(Clone, PartialEq, Eq)]
pub struct FormOnTrunc {
    degree: usize,
    level: usize,
    base: DiffForm,
    /// `poly[i-1]` multiplies `t^i`.
    poly: Vec<DiffForm>,
    /// `dt[i]` multiplies `t^i dt`; empty when the degree is 0.
    dt: Vec<DiffForm>,
}

impl FormOnTrunc {
    pub fn zero(vars: &Vars, degree: usize, level: usize) -> Self {
        FormOnTrunc {
            degree,
            level,
            base: DiffForm::zero(vars, degree),
            poly: vec![DiffForm::zero(vars, degree); level],
            dt: if degree == 0 { Vec::new() } else { vec![DiffForm::zero(vars, degree - 1); level] },
        }
    }

    pub fn from_parts(base: DiffForm, poly: Vec<DiffForm>, dt: Vec<DiffForm>) -> Result<Self> {
        let degree = base.degree();
        let level = poly.len();
        if poly.iter().any(|w| w.degree() != degree) {
            return Err(Error::Mismatch("t-parts must have the base degree".into()));
        }
        if degree == 0 {
            if !dt.is_empty() {
                return Err(Error::Mismatch("a 0-form has no dt-part".into()));
            }
        } else if dt.len() != level || dt.iter().any(|w| w.degree() != degree - 1) {
            return Err(Error::Mismatch("dt-parts must number m and have degree k-1".into()));
        }
        Ok(FormOnTrunc { degree, level, base, poly, dt })
    }

    /// `t^i ⊗ ω` for 0 ≤ i ≤ m.
    pub fn t_power(i: usize, w: DiffForm, level: usize) -> Self {
        let mut out = Self::zero(w.vars(), w.degree(), level);
        if i == 0 {
            out.base = w;
        } else if i <= level {
            out.poly[i - 1] = w;
        }
        out
    }

    /// `t^i dt ∧ η`; zero when i ≥ m.
    pub fn t_power_dt(i: usize, eta: DiffForm, level: usize) -> Self {
        let mut out = Self::zero(eta.vars(), eta.degree() + 1, level);
        if i < level {
            out.dt[i] = eta;
        }
        out
    }

    pub fn vars(&self) -> &Vars {
        self.base.vars()
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn level(&self) -> usize {
        self.level
    }

    pub fn base(&self) -> &DiffForm {
        &self.base
    }

    pub fn poly(&self) -> &[DiffForm] {
        &self.poly
    }

    pub fn dt_parts(&self) -> &[DiffForm] {
        &self.dt
    }

    /// Coefficient of `t^i` without dt, 0 ≤ i ≤ m.
    pub fn t_coeff(&self, i: usize) -> &DiffForm {
        if i == 0 {
            &self.base
        } else {
            &self.poly[i - 1]
        }
    }

    fn t_coeff_mut(&mut self, i: usize) -> &mut DiffForm {
        if i == 0 {
            &mut self.base
        } else {
            &mut self.poly[i - 1]
        }
    }

    pub fn is_zero(&self) -> bool {
        self.base.is_zero() && self.poly.iter().all(DiffForm::is_zero) && self.dt.iter().all(DiffForm::is_zero)
    }

    pub fn is_relative(&self) -> bool {
        self.base.is_zero()
    }

    fn check(&self, other: &FormOnTrunc) {
        assert_eq!(self.level, other.level, "mixed truncation levels");
    }

    pub fn add(&self, other: &FormOnTrunc) -> FormOnTrunc {
        self.check(other);
        assert_eq!(self.degree, other.degree, "adding forms of different degree");
        FormOnTrunc {
            degree: self.degree,
            level: self.level,
            base: self.base.add(&other.base),
            poly: self.poly.iter().zip(&other.poly).map(|(a, b)| a.add(b)).collect(),
            dt: self.dt.iter().zip(&other.dt).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn neg(&self) -> FormOnTrunc {
        self.scale(&Rational::from_int(-1))
    }

    pub fn sub(&self, other: &FormOnTrunc) -> FormOnTrunc {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> FormOnTrunc {
        FormOnTrunc {
            degree: self.degree,
            level: self.level,
            base: self.base.scale(c),
            poly: self.poly.iter().map(|w| w.scale(c)).collect(),
            dt: self.dt.iter().map(|w| w.scale(c)).collect(),
        }
    }

    pub fn wedge(&self, other: &FormOnTrunc) -> FormOnTrunc {
        self.check(other);
        let m = self.level;
        let vars = self.vars().clone();
        let mut out = Self::zero(&vars, self.degree + other.degree, m);
        let p_sign = sign_of(self.degree % 2 == 1);
        for i in 0..=m {
            let a = self.t_coeff(i);
            if a.is_zero() {
                continue;
            }
            for j in 0..=(m - i) {
                let b = other.t_coeff(j);
                if !b.is_zero() {
                    let w = a.wedge(b);
                    let slot = out.t_coeff_mut(i + j);
                    *slot = slot.add(&w);
                }
            }
            for j in 0..other.dt.len() {
                if i + j >= m || other.dt[j].is_zero() {
                    continue;
                }
                let w = a.wedge(&other.dt[j]).scale(&p_sign);
                out.dt[i + j] = out.dt[i + j].add(&w);
            }
        }
        for i in 0..self.dt.len() {
            let a = &self.dt[i];
            if a.is_zero() {
                continue;
            }
            for j in 0..=(m - 1 - i) {
                let b = other.t_coeff(j);
                if !b.is_zero() {
                    let w = a.wedge(b);
                    out.dt[i + j] = out.dt[i + j].add(&w);
                }
            }
        }
        out
    }

    /// Exterior derivative with `d(t^i) = i t^(i-1) dt`.
    pub fn d(&self) -> FormOnTrunc {
        let m = self.level;
        let vars = self.vars().clone();
        let mut out = Self::zero(&vars, self.degree + 1, m);
        for i in 0..=m {
            let w = self.t_coeff(i);
            if w.is_zero() {
                continue;
            }
            *out.t_coeff_mut(i) = w.d();
            if i >= 1 {
                out.dt[i - 1] = out.dt[i - 1].add(&w.scale(&Rational::from_int(i as i64)));
            }
        }
        for (i, eta) in self.dt.iter().enumerate() {
            if !eta.is_zero() {
                out.dt[i] = out.dt[i].sub(&eta.d());
            }
        }
        out
    }

    /// Image under F_m -> F_{m'} for m' ≤ m.
    pub fn restrict(&self, level: usize) -> Result<FormOnTrunc> {
        if level > self.level {
            return Err(Error::InvalidArgument(format!("cannot restrict level {} to {level}", self.level)));
        }
        Ok(FormOnTrunc {
            degree: self.degree,
            level,
            base: self.base.clone(),
            poly: self.poly[..level].to_vec(),
            dt: self.dt.iter().take(level).cloned().collect(),
        })
    }

    /// Canonical representative modulo exact forms, for a relative form.
    pub fn reduce_mod_exact(&self) -> Result<CanonRelForm> {
        if !self.is_relative() {
            return Err(Error::NotRelative);
        }
        let mut comps = Vec::with_capacity(self.level);
        for i in 1..=self.level {
            let w = &self.poly[i - 1];
            if self.degree == 0 {
                comps.push(w.clone());
                continue;
            }
            let eta = &self.dt[i - 1];
            if eta.is_zero() {
                comps.push(w.clone());
                continue;
            }
            // Dividing by i needs characteristic zero.
            let corr = eta.d().scale(&Rational::new(1, i as i64).expect("i > 0"));
            #[cfg(not(feature = "inject-reduce-sign-bug"))]
            comps.push(w.sub(&corr));
            #[cfg(feature = "inject-reduce-sign-bug")]
            comps.push(w.add(&corr));
        }
        Ok(CanonRelForm { vars: self.vars().clone(), degree: self.degree, comps })
    }
}

impl fmt::Debug for FormOnTrunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FormOnTrunc(k={}, m={}) {{ base: {}", self.degree, self.level, self.base)?;
        for (i, w) in self.poly.iter().enumerate() {
            if !w.is_zero() {
                write!(f, ", t^{}: {}", i + 1, w)?;
            }
        }
        for (i, w) in self.dt.iter().enumerate() {
            if !w.is_zero() {
                write!(f, ", t^{i}dt: {w}")?;
            }
        }
        write!(f, " }}")
    }
}

/// `sum_{i=1..m} t^i ⊗ c_i` with each `c_i` an n-form over F.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CanonRelForm {
    vars: Vars,
    degree: usize,
    comps: Vec<DiffForm>,
}

impl CanonRelForm {
    pub fn zero(vars: &Vars, degree: usize, level: usize) -> Self {
        CanonRelForm { vars: vars.clone(), degree, comps: vec![DiffForm::zero(vars, degree); level] }
    }

    pub fn new(vars: &Vars, degree: usize, comps: Vec<DiffForm>) -> Result<Self> {
        if comps.iter().any(|c| c.degree() != degree) {
            return Err(Error::Mismatch("canonical components must share one degree".into()));
        }
        Ok(CanonRelForm { vars: vars.clone(), degree, comps })
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn level(&self) -> usize {
        self.comps.len()
    }

    /// `comps()[i-1]` is `c_i`.
    pub fn comps(&self) -> &[DiffForm] {
        &self.comps
    }

    pub fn comp(&self, i: usize) -> &DiffForm {
        &self.comps[i - 1]
    }

    pub fn is_zero(&self) -> bool {
        self.comps.iter().all(DiffForm::is_zero)
    }

    pub fn add(&self, other: &CanonRelForm) -> CanonRelForm {
        assert_eq!(self.level(), other.level(), "mixed truncation levels");
        CanonRelForm {
            vars: self.vars.clone(),
            degree: self.degree,
            comps: self.comps.iter().zip(&other.comps).map(|(a, b)| a.add(b)).collect(),
        }
    }

    pub fn neg(&self) -> CanonRelForm {
        self.scale(&Rational::from_int(-1))
    }

    pub fn sub(&self, other: &CanonRelForm) -> CanonRelForm {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &Rational) -> CanonRelForm {
        CanonRelForm {
            vars: self.vars.clone(),
            degree: self.degree,
            comps: self.comps.iter().map(|w| w.scale(c)).collect(),
        }
    }

    /// Wedge every component on the right by `w`.
    pub fn wedge_right(&self, w: &DiffForm) -> CanonRelForm {
        CanonRelForm {
            vars: self.vars.clone(),
            degree: self.degree + w.degree(),
            comps: self.comps.iter().map(|c| c.wedge(w)).collect(),
        }
    }

    pub fn truncate(&self, level: usize) -> Result<CanonRelForm> {
        if level > self.level() {
            return Err(Error::InvalidArgument(format!("cannot restrict level {} to {level}", self.level())));
        }
        Ok(CanonRelForm { vars: self.vars.clone(), degree: self.degree, comps: self.comps[..level].to_vec() })
    }

    /// The relative form `sum t^i ⊗ c_i`.
    pub fn embed(&self) -> FormOnTrunc {
        let m = self.level();
        let mut out = FormOnTrunc::zero(&self.vars, self.degree, m);
        out.poly = self.comps.clone();
        out
    }
}

impl fmt::Debug for CanonRelForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Canon[n={}](", self.degree)?;
        for (i, c) in self.comps.iter().enumerate() {
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

    fn xy() -> Vars {
        Vars::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn basic_operations() {
        let v = xy();
        let dx = DiffForm::dx(&v, 0);
        let dy = DiffForm::dx(&v, 1);
        assert_eq!(DiffForm::dlog(&fe("x", &v)).unwrap(), dx.mul_fn(&fe("1/x", &v)));
        // d(x dy) = dx ∧ dy
        assert_eq!(dy.mul_fn(&fe("x", &v)).d(), dx.wedge(&dy));
        assert_eq!(dy.wedge(&dx), dx.wedge(&dy).neg());
        let want = dx.mul_fn(&fe("1/(1+x)", &v)).add(&dy.mul_fn(&fe("1/(1+y)", &v)));
        assert_eq!(DiffForm::dlog(&fe("(1+x)(1+y)", &v)).unwrap(), want);
        assert!(DiffForm::dlog(&fe("-7/3", &v)).unwrap().is_zero());
        assert_eq!(DiffForm::dlog(&FieldElem::zero(&v)), Err(Error::ZeroArgument));
    }

    #[test]
    fn d_squared_on_a_two_form_source() {
        let v = Vars::new(&["x", "y", "z"]).unwrap();
        let w = DiffForm::dx(&v, 2).mul_fn(&fe("x^2 y/(1+z)", &v));
        assert!(w.d().d().is_zero());
    }

    #[test]
    fn trunc_differential() {
        let v = xy();
        let m = 3;
        let x = DiffForm::function(fe("x", &v));
        let a = FormOnTrunc::t_power(2, x.clone(), m);
        let want = FormOnTrunc::t_power(2, DiffForm::dx(&v, 0), m)
            .add(&FormOnTrunc::t_power_dt(1, x.scale(&Rational::from_int(2)), m));
        assert_eq!(a.d(), want);
        let lhs = FormOnTrunc::t_power(1, DiffForm::dx(&v, 0), m)
            .wedge(&FormOnTrunc::t_power(m, DiffForm::dx(&v, 1), m));
        assert!(lhs.is_zero());
        assert!(FormOnTrunc::t_power_dt(m, x, m).d().is_zero());
    }

    #[test]
    fn reduction_examples() {
        let v = xy();
        let m = 3;
        let eta = DiffForm::function(fe("x y", &v));
        let alpha = FormOnTrunc::t_power_dt(0, eta.clone(), m);
        let c = alpha.reduce_mod_exact().unwrap();
        assert_eq!(c.comp(1), &eta.d().neg());
        assert!(c.comp(2).is_zero() && c.comp(3).is_zero());

        let w = DiffForm::dx(&v, 0).mul_fn(&fe("y", &v));
        let exact = FormOnTrunc::t_power(2, w.clone(), m).d();
        assert!(exact.reduce_mod_exact().unwrap().is_zero());

        let closed = DiffForm::dlog(&fe("x+y", &v)).unwrap();
        let c = FormOnTrunc::t_power(1, closed.clone(), m).reduce_mod_exact().unwrap();
        assert_eq!(c.comp(1), &closed);

        let not_rel = FormOnTrunc::t_power(0, w, m);
        assert_eq!(not_rel.reduce_mod_exact(), Err(Error::NotRelative));
    }
}
