use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use super::rational::Rational;
use super::vars::Vars;

/// Exponent vector of a monomial, ordered graded-lexicographically.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Monomial(Box<[u32]>);

impl Monomial {
    pub fn one(n: usize) -> Self {
        Monomial(vec![0; n].into())
    }

    pub fn from_exps(exps: Vec<u32>) -> Self {
        Monomial(exps.into())
    }

    pub fn exps(&self) -> &[u32] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    fn mul(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a + b).collect())
    }

    fn divides(&self, other: &Monomial) -> bool {
        self.0.iter().zip(other.0.iter()).all(|(a, b)| a <= b)
    }

    fn div(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.iter().zip(other.0.iter()).map(|(a, b)| a - b).collect())
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Sparse multivariate polynomial over Q. No zero coefficients are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct MultiPoly {
    vars: Vars,
    terms: BTreeMap<Monomial, Rational>,
}

impl MultiPoly {
    pub fn zero(vars: &Vars) -> Self {
        MultiPoly { vars: vars.clone(), terms: BTreeMap::new() }
    }

    pub fn constant(vars: &Vars, c: Rational) -> Self {
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(Monomial::one(vars.len()), c);
        }
        p
    }

    pub fn one(vars: &Vars) -> Self {
        Self::constant(vars, Rational::one())
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        let mut e = vec![0; vars.len()];
        e[i] = 1;
        Self::monomial(vars, Monomial::from_exps(e), Rational::one())
    }

    pub fn monomial(vars: &Vars, m: Monomial, c: Rational) -> Self {
        assert_eq!(m.exps().len(), vars.len(), "exponent tuple length must equal r");
        let mut p = Self::zero(vars);
        if !c.is_zero() {
            p.terms.insert(m, c);
        }
        p
    }

    /// Builds a polynomial from (exponents, coefficient) pairs, merging repeats.
    pub fn from_terms(vars: &Vars, terms: impl IntoIterator<Item = (Vec<u32>, Rational)>) -> Self {
        let mut p = Self::zero(vars);
        for (e, c) in terms {
            assert_eq!(e.len(), vars.len(), "exponent tuple length must equal r");
            p.add_term(Monomial::from_exps(e), &c);
        }
        p
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_constant(&self) -> bool {
        self.terms.is_empty() || (self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one())
    }

    pub fn constant_value(&self) -> Option<Rational> {
        if self.is_zero() {
            Some(Rational::zero())
        } else if self.is_constant() {
            Some(self.terms.values().next().unwrap().clone())
        } else {
            None
        }
    }

    pub fn is_one(&self) -> bool {
        self.constant_value().is_some_and(|c| c.is_one())
    }

    pub fn is_monomial(&self) -> bool {
        self.terms.len() == 1
    }

    /// Leading term under graded-lexicographic order.
    pub fn leading(&self) -> Option<(&Monomial, &Rational)> {
        self.terms.iter().next_back()
    }

    pub fn leading_coeff(&self) -> Rational {
        self.leading().map(|(_, c)| c.clone()).unwrap_or_else(Rational::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    pub fn degree_in(&self, i: usize) -> u32 {
        self.terms.keys().map(|m| m.exps()[i]).max().unwrap_or(0)
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.terms.keys().any(|m| m.exps()[i] > 0)
    }

    fn add_term(&mut self, m: Monomial, c: &Rational) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(v) => {
                *v += c;
                if v.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c.clone());
            }
        }
    }

    fn check_vars(&self, other: &MultiPoly) {
        debug_assert!(self.vars.same(&other.vars), "mixed variable lists");
    }

    pub fn add(&self, other: &MultiPoly) -> MultiPoly {
        self.check_vars(other);
        let (mut big, small) = if self.terms.len() >= other.terms.len() {
            (self.clone(), other)
        } else {
            (other.clone(), self)
        };
        for (m, c) in &small.terms {
            big.add_term(m.clone(), c);
        }
        big
    }

    pub fn sub(&self, other: &MultiPoly) -> MultiPoly {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, c)| (m.clone(), -c)).collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(m, v)| (m.clone(), v * c)).collect(),
        }
    }

    pub fn mul(&self, other: &MultiPoly) -> MultiPoly {
        self.check_vars(other);
        if self.is_zero() || other.is_zero() {
            return Self::zero(&self.vars);
        }
        if let Some(c) = self.constant_value() {
            return other.scale(&c);
        }
        if let Some(c) = other.constant_value() {
            return self.scale(&c);
        }
        let mut out = Self::zero(&self.vars);
        for (ma, ca) in &self.terms {
            for (mb, cb) in &other.terms {
                out.add_term(ma.mul(mb), &(ca * cb));
            }
        }
        out
    }

    pub fn mul_monomial(&self, m: &Monomial, c: &Rational) -> MultiPoly {
        if c.is_zero() {
            return Self::zero(&self.vars);
        }
        MultiPoly {
            vars: self.vars.clone(),
            terms: self.terms.iter().map(|(k, v)| (k.mul(m), v * c)).collect(),
        }
    }

    pub fn pow(&self, e: u32) -> MultiPoly {
        let mut result = Self::one(&self.vars);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                result = result.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        result
    }

    pub fn derivative(&self, i: usize) -> MultiPoly {
        let mut out = Self::zero(&self.vars);
        for (m, c) in &self.terms {
            let e = m.exps()[i];
            if e == 0 {
                continue;
            }
            let mut exps = m.exps().to_vec();
            exps[i] -= 1;
            out.add_term(Monomial::from_exps(exps), &(c * &Rational::from_int(e as i64)));
        }
        out
    }

    /// Exact quotient `self / d`, or `None` when `d` does not divide `self`.
    pub fn div_exact(&self, d: &MultiPoly) -> Option<MultiPoly> {
        self.check_vars(d);
        assert!(!d.is_zero(), "division by the zero polynomial");
        if let Some(c) = d.constant_value() {
            return Some(self.scale(&c.inv().ok()?));
        }
        let (dm, dc) = d.leading().map(|(m, c)| (m.clone(), c.clone()))?;
        let dc_inv = dc.inv().ok()?;
        let mut rem = self.clone();
        let mut quot = Self::zero(&self.vars);
        while let Some((rm, rc)) = rem.leading().map(|(m, c)| (m.clone(), c.clone())) {
            if !dm.divides(&rm) {
                return None;
            }
            let qm = rm.div(&dm);
            let qc = &rc * &dc_inv;
            rem = rem.sub(&d.mul_monomial(&qm, &qc));
            quot.add_term(qm, &qc);
        }
        Some(quot)
    }

    /// Coefficients of `self` viewed as a univariate polynomial in variable `i`.
    /// Entry `k` multiplies `x_i^k` and does not involve `x_i`.
    pub fn coeffs_in(&self, i: usize) -> Vec<MultiPoly> {
        let deg = self.degree_in(i) as usize;
        let mut out = vec![Self::zero(&self.vars); deg + 1];
        for (m, c) in &self.terms {
            let k = m.exps()[i] as usize;
            let mut exps = m.exps().to_vec();
            exps[i] = 0;
            out[k].add_term(Monomial::from_exps(exps), c);
        }
        if self.is_zero() {
            out.clear();
        }
        out
    }

    /// Inverse of `coeffs_in`.
    pub fn from_coeffs_in(vars: &Vars, i: usize, coeffs: &[MultiPoly]) -> MultiPoly {
        let mut out = Self::zero(vars);
        for (k, c) in coeffs.iter().enumerate() {
            for (m, v) in &c.terms {
                let mut exps = m.exps().to_vec();
                exps[i] += k as u32;
                out.add_term(Monomial::from_exps(exps), v);
            }
        }
        out
    }

    /// Re-expresses a polynomial not involving the last variable over `target`
    /// (which must be this list minus its last entry).
    pub fn drop_last_var(&self, target: &Vars) -> MultiPoly {
        let n = target.len();
        assert_eq!(n + 1, self.nvars());
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            assert_eq!(m.exps()[n], 0, "polynomial involves the dropped variable");
            out.add_term(Monomial::from_exps(m.exps()[..n].to_vec()), c);
        }
        out
    }

    /// Re-expresses over `target`, a list extending this one at the end.
    pub fn embed(&self, target: &Vars) -> MultiPoly {
        let n = target.len();
        assert!(n >= self.nvars());
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut exps = m.exps().to_vec();
            exps.resize(n, 0);
            out.terms.insert(Monomial::from_exps(exps), c.clone());
        }
        out
    }

    /// Substitutes `x_i -> x_i + shift_i` for every variable.
    pub fn shift(&self, shift: &[Rational]) -> MultiPoly {
        let vars = &self.vars;
        let lin: Vec<MultiPoly> = (0..vars.len())
            .map(|i| MultiPoly::var(vars, i).add(&MultiPoly::constant(vars, shift[i].clone())))
            .collect();
        let mut out = Self::zero(vars);
        for (m, c) in &self.terms {
            let mut t = MultiPoly::constant(vars, c.clone());
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t = t.mul(&lin[i].pow(e));
                }
            }
            out = out.add(&t);
        }
        out
    }

    /// Evaluates at a rational point.
    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (m, c) in &self.terms {
            let mut t = c.clone();
            for (i, &e) in m.exps().iter().enumerate() {
                if e > 0 {
                    t *= &point[i].pow(e as i32);
                }
            }
            acc += &t;
        }
        acc
    }

    /// Drops every term of total degree above `deg`.
    pub fn truncate_degree(&self, deg: u32) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() <= deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Coefficient of the monomial 1.
    pub fn constant_term(&self) -> Rational {
        self.terms.get(&Monomial::one(self.nvars())).cloned().unwrap_or_else(Rational::zero)
    }

    /// Terms of total degree exactly `deg`.
    pub fn homogeneous_part(&self, deg: u32) -> MultiPoly {
        MultiPoly {
            vars: self.vars.clone(),
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == deg)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Scales so the leading coefficient is 1.
    pub fn monic(&self) -> MultiPoly {
        match self.leading() {
            Some((_, c)) if !c.is_one() => self.scale(&c.inv().unwrap()),
            _ => self.clone(),
        }
    }

    /// Renames variables: old variable `i` becomes `new_index[i]` of `target`.
    pub fn permute_vars(&self, target: &Vars, new_index: &[usize]) -> MultiPoly {
        assert_eq!(target.len(), self.nvars());
        let mut out = Self::zero(target);
        for (m, c) in &self.terms {
            let mut exps = vec![0; target.len()];
            for (i, &e) in m.exps().iter().enumerate() {
                exps[new_index[i]] = e;
            }
            out.terms.insert(Monomial::from_exps(exps), c.clone());
        }
        out
    }

    pub fn fmt_with_names(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let neg = c.is_negative();
            let abs = c.abs();
            if k == 0 {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { "-" } else { "+" })?;
            }
            let mut factors: Vec<String> = Vec::new();
            for (i, &e) in m.exps().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(self.vars.name(i).to_string()),
                    _ => factors.push(format!("{}^{}", self.vars.name(i), e)),
                }
            }
            if factors.is_empty() {
                write!(f, "{abs}")?;
            } else if abs.is_one() {
                write!(f, "{}", factors.join("*"))?;
            } else {
                write!(f, "{abs}*{}", factors.join("*"))?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_names(f)
    }
}

impl fmt::Debug for MultiPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_names(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Vars {
        Vars::new(&["x", "y"]).unwrap()
    }

    #[test]
    fn grlex_leading_term() {
        let v = xy();
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        let p = x.mul(&y).add(&y.pow(2)).add(&x);
        // x*y > y^2 in grlex with x before y.
        assert_eq!(p.leading().unwrap().0.exps(), &[1, 1]);
        assert_eq!(p.to_string(), "x*y + y^2 + x");
    }

    #[test]
    fn exact_division() {
        let v = xy();
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        let a = x.add(&y);
        let b = x.sub(&y).add(&MultiPoly::one(&v));
        let prod = a.mul(&b);
        assert_eq!(prod.div_exact(&a).unwrap(), b);
        assert!(prod.div_exact(&x).is_none());
    }

    #[test]
    fn shift_and_eval_agree() {
        let v = xy();
        let x = MultiPoly::var(&v, 0);
        let y = MultiPoly::var(&v, 1);
        let p = x.pow(3).mul(&y).sub(&y.scale(&Rational::from_int(5)));
        let s = [Rational::from_int(2), Rational::from_int(-1)];
        let q = p.shift(&s);
        let pt = [Rational::from_int(3), Rational::from_int(4)];
        let shifted_pt = [Rational::from_int(5), Rational::from_int(3)];
        assert_eq!(q.eval(&pt), p.eval(&shifted_pt));
    }
}
