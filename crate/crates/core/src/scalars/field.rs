use std::fmt;

use super::gcd::gcd;
use super::poly::MultiPoly;
use super::rational::Rational;
use super::vars::Vars;
use crate::error::{Error, Result};

/// An element of Q(x1, ..., xr) as a reduced fraction.
///
/// Canonical form: `gcd(num, den) = 1` and the graded-lex leading coefficient
/// of `den` is 1. Zero is `0/1`. Equality is therefore structural.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct FieldElem {
    num: MultiPoly,
    den: MultiPoly,
}

impl FieldElem {
    pub fn zero(vars: &Vars) -> Self {
        FieldElem { num: MultiPoly::zero(vars), den: MultiPoly::one(vars) }
    }

    pub fn one(vars: &Vars) -> Self {
        FieldElem { num: MultiPoly::one(vars), den: MultiPoly::one(vars) }
    }

    pub fn from_rational(vars: &Vars, q: Rational) -> Self {
        FieldElem { num: MultiPoly::constant(vars, q), den: MultiPoly::one(vars) }
    }

    pub fn from_int(vars: &Vars, n: i64) -> Self {
        Self::from_rational(vars, Rational::from_int(n))
    }

    pub fn var(vars: &Vars, i: usize) -> Self {
        FieldElem { num: MultiPoly::var(vars, i), den: MultiPoly::one(vars) }
    }

    pub fn from_poly(num: MultiPoly) -> Self {
        let den = MultiPoly::one(num.vars());
        FieldElem { num, den }
    }

    /// Builds `num/den` and normalizes.
    pub fn from_fraction(num: MultiPoly, den: MultiPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize(num, den))
    }

    fn normalize(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        if let Some(c) = den.constant_value() {
            let inv = c.inv().expect("nonzero denominator");
            return FieldElem { num: num.scale(&inv), den: MultiPoly::one(num.vars()) };
        }
        let g = gcd(&num, &den);
        let (num, den) = if g.is_constant() {
            (num, den)
        } else {
            (num.div_exact(&g).expect("gcd divides"), den.div_exact(&g).expect("gcd divides"))
        };
        let lc = den.leading_coeff();
        if lc.is_one() {
            FieldElem { num, den }
        } else {
            let inv = lc.inv().expect("nonzero leading coefficient");
            FieldElem { num: num.scale(&inv), den: den.scale(&inv) }
        }
    }

    pub fn vars(&self) -> &Vars {
        self.num.vars()
    }

    pub fn num(&self) -> &MultiPoly {
        &self.num
    }

    pub fn den(&self) -> &MultiPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The value as a rational constant, if it is one.
    pub fn as_rational(&self) -> Option<Rational> {
        if self.den.is_one() {
            self.num.constant_value()
        } else {
            None
        }
    }

    pub fn is_rational(&self) -> bool {
        self.as_rational().is_some()
    }

    pub fn is_polynomial(&self) -> bool {
        self.den.is_one()
    }

    pub fn add(&self, other: &FieldElem) -> FieldElem {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        if self.den == other.den {
            if self.den.is_one() {
                return FieldElem { num: self.num.add(&other.num), den: self.den.clone() };
            }
            return Self::normalize(self.num.add(&other.num), self.den.clone());
        }
        if self.den.is_one() {
            return FieldElem {
                num: self.num.mul(&other.den).add(&other.num),
                den: other.den.clone(),
            };
        }
        if other.den.is_one() {
            return FieldElem {
                num: other.num.mul(&self.den).add(&self.num),
                den: self.den.clone(),
            };
        }
        let g = gcd(&self.den, &other.den);
        let d1 = self.den.div_exact(&g).expect("gcd divides");
        let d2 = other.den.div_exact(&g).expect("gcd divides");
        let num = self.num.mul(&d2).add(&other.num.mul(&d1));
        let den = self.den.mul(&d2);
        if g.is_constant() {
            // Coprime denominators: any common factor of num and den must divide g.
            return Self::normalize_scaled(num, den);
        }
        // num is coprime to d1 and d2, so only g can share factors with it
        let h = gcd(&num, &g);
        if h.is_constant() {
            return Self::normalize_scaled(num, den);
        }
        Self::normalize_scaled(num.div_exact(&h).expect("gcd divides"), den.div_exact(&h).expect("gcd divides"))
    }

    fn normalize_scaled(num: MultiPoly, den: MultiPoly) -> Self {
        if num.is_zero() {
            return Self::zero(num.vars());
        }
        let lc = den.leading_coeff();
        let inv = lc.inv().expect("nonzero leading coefficient");
        FieldElem { num: num.scale(&inv), den: den.scale(&inv) }
    }

    pub fn neg(&self) -> FieldElem {
        FieldElem { num: self.num.neg(), den: self.den.clone() }
    }

    pub fn sub(&self, other: &FieldElem) -> FieldElem {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &FieldElem) -> FieldElem {
        if self.is_zero() || other.is_zero() {
            return Self::zero(self.vars());
        }
        if self.den.is_one() && other.den.is_one() {
            return FieldElem { num: self.num.mul(&other.num), den: self.den.clone() };
        }
        let g1 = gcd(&self.num, &other.den);
        let g2 = gcd(&other.num, &self.den);
        let n1 = self.num.div_exact(&g1).expect("gcd divides");
        let d2 = other.den.div_exact(&g1).expect("gcd divides");
        let n2 = other.num.div_exact(&g2).expect("gcd divides");
        let d1 = self.den.div_exact(&g2).expect("gcd divides");
        Self::normalize_scaled(n1.mul(&n2), d1.mul(&d2))
    }

    pub fn scale(&self, c: &Rational) -> FieldElem {
        if c.is_zero() {
            return Self::zero(self.vars());
        }
        FieldElem { num: self.num.scale(c), den: self.den.clone() }
    }

    pub fn inv(&self) -> Result<FieldElem> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(Self::normalize_scaled(self.den.clone(), self.num.clone()))
    }

    pub fn div(&self, other: &FieldElem) -> Result<FieldElem> {
        Ok(self.mul(&other.inv()?))
    }

    pub fn pow(&self, e: i64) -> FieldElem {
        if e < 0 {
            return self.inv().expect("negative power of zero").pow(-e);
        }
        let e = e as u32;
        FieldElem { num: self.num.pow(e), den: self.den.pow(e) }
    }

    /// Partial derivative with respect to variable `i` (0-based).
    pub fn partial_derivative(&self, i: usize) -> FieldElem {
        assert!(i < self.vars().len(), "variable index out of range");
        let dn = self.num.derivative(i);
        if self.den.is_one() {
            return FieldElem { num: dn, den: self.den.clone() };
        }
        let dd = self.den.derivative(i);
        if dd.is_zero() {
            return Self::normalize(dn, self.den.clone());
        }
        let num = dn.mul(&self.den).sub(&self.num.mul(&dd));
        Self::normalize(num, self.den.mul(&self.den))
    }

    /// Writes `a = u1 + u2` with `u1` a nonzero rational and `u2` nonzero,
    /// scanning `u1 = 1, -1, 2, -2, ...`.
    pub fn split_unit(&self) -> (Rational, FieldElem) {
        let mut k = 1i64;
        loop {
            for u1 in [k, -k] {
                let q = Rational::from_int(u1);
                let u2 = self.sub(&FieldElem::from_rational(self.vars(), q.clone()));
                if !u2.is_zero() {
                    return (q, u2);
                }
            }
            k += 1;
        }
    }

    /// Re-expresses over a variable list extending this one at the end.
    pub fn embed(&self, target: &Vars) -> FieldElem {
        FieldElem { num: self.num.embed(target), den: self.den.embed(target) }
    }

    /// Re-expresses an element not involving the last variable over `target`.
    pub fn drop_last_var(&self, target: &Vars) -> FieldElem {
        FieldElem { num: self.num.drop_last_var(target), den: self.den.drop_last_var(target) }
    }

    /// Renames variables: old variable `i` becomes `new_index[i]` of `target`.
    pub fn permute_vars(&self, target: &Vars, new_index: &[usize]) -> FieldElem {
        Self::normalize_scaled(self.num.permute_vars(target, new_index), self.den.permute_vars(target, new_index))
    }

    pub fn contains_var(&self, i: usize) -> bool {
        self.num.contains_var(i) || self.den.contains_var(i)
    }

    /// Substitutes the last variable by `value` (an element over `base`, the
    /// list without that variable). Fails when the denominator vanishes there.
    pub fn eval_last(&self, value: &FieldElem, base: &Vars) -> Result<FieldElem> {
        let last = self.vars().len() - 1;
        let eval = |p: &MultiPoly| -> FieldElem {
            let coeffs = p.coeffs_in(last);
            let mut acc = FieldElem::zero(base);
            for c in coeffs.iter().rev() {
                acc = acc.mul(value).add(&FieldElem::from_poly(c.drop_last_var(base)));
            }
            acc
        };
        let d = eval(&self.den);
        if d.is_zero() {
            return Err(Error::DivisionByZero);
        }
        eval(&self.num).div(&d)
    }

    /// Evaluates at a rational point; `None` if the denominator vanishes.
    pub fn eval(&self, point: &[Rational]) -> Option<Rational> {
        let d = self.den.eval(point);
        if d.is_zero() {
            return None;
        }
        Some(&self.num.eval(point) / &d)
    }

    pub fn total_degree(&self) -> u32 {
        self.num.total_degree().max(self.den.total_degree())
    }
}

fn needs_parens(p: &MultiPoly) -> bool {
    p.num_terms() > 1 || p.leading().is_some_and(|(m, c)| !m.is_one() && !c.is_one() && !(-c).is_one())
}

impl fmt::Display for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        if self.num.num_terms() > 1 {
            write!(f, "({})", self.num)?;
        } else {
            write!(f, "{}", self.num)?;
        }
        if needs_parens(&self.den) {
            write!(f, "/({})", self.den)
        } else {
            write!(f, "/{}", self.den)
        }
    }
}

impl fmt::Debug for FieldElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn setup() -> (Vars, FieldElem, FieldElem) {
        let v = Vars::new(&["x", "y"]).unwrap();
        let x = FieldElem::var(&v, 0);
        let y = FieldElem::var(&v, 1);
        (v, x, y)
    }

    #[test]
    fn cancellation() {
        let (v, x, _) = setup();
        let one = FieldElem::one(&v);
        let a = x.add(&one).div(&x).unwrap();
        assert_eq!(a.mul(&x), x.add(&one));
    }

    #[test]
    fn additive_inverse_of_swapped_difference() {
        let (v, x, y) = setup();
        let one = FieldElem::one(&v);
        let a = one.div(&x.sub(&y)).unwrap();
        let b = one.div(&y.sub(&x)).unwrap();
        assert!(a.add(&b).is_zero());
    }

    #[test]
    fn inverse_reduces_by_gcd() {
        let (v, x, _) = setup();
        let one = FieldElem::one(&v);
        let a = x.pow(2).sub(&one).div(&x.add(&one)).unwrap();
        // (x^2 - 1) = (x + 1)(x - 1), checked by polynomial division.
        let q = x.pow(2).sub(&one).num().div_exact(x.add(&one).num()).unwrap();
        assert_eq!(q, x.sub(&one).num().clone());
        assert_eq!(a.inv().unwrap(), one.div(&x.sub(&one)).unwrap());
        assert!(a.inv().unwrap().den().leading_coeff().is_one());
    }

    #[test]
    fn division_by_zero() {
        let (v, x, _) = setup();
        assert_eq!(x.div(&FieldElem::zero(&v)), Err(Error::DivisionByZero));
        assert_eq!(FieldElem::zero(&v).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn derivatives() {
        let (v, x, y) = setup();
        let one = FieldElem::one(&v);
        let p = x.pow(2).mul(&y);
        assert_eq!(p.partial_derivative(0), x.mul(&y).scale(&Rational::from_int(2)));
        let r = one.div(&x).unwrap();
        assert_eq!(r.partial_derivative(0), one.div(&x.pow(2)).unwrap().neg());
        // Quotient rule by hand: d/dy (x+y)/(x-y) = ((x-y) + (x+y)) / (x-y)^2.
        let q = x.add(&y).div(&x.sub(&y)).unwrap();
        let expected = x.scale(&Rational::from_int(2)).div(&x.sub(&y).pow(2)).unwrap();
        assert_eq!(q.partial_derivative(1), expected);
    }

    #[test]
    fn split_unit_examples() {
        let (v, x, _) = setup();
        let (u1, u2) = FieldElem::zero(&v).split_unit();
        assert_eq!((u1, u2), (Rational::one(), FieldElem::from_int(&v, -1)));
        let (u1, u2) = x.split_unit();
        assert_eq!(u1, Rational::one());
        assert_eq!(u2, x.sub(&FieldElem::one(&v)));
        let (u1, u2) = FieldElem::from_int(&v, 5).split_unit();
        assert_eq!((u1, u2), (Rational::one(), FieldElem::from_int(&v, 4)));
        let (u1, u2) = FieldElem::one(&v).split_unit();
        assert_eq!((u1, u2), (Rational::from_int(-1), FieldElem::from_int(&v, 2)));
    }

    #[test]
    fn eval_last_substitutes() {
        let v = Vars::new(&["x", "u"]).unwrap();
        let base = v.without_last();
        let x = FieldElem::var(&v, 0);
        let u = FieldElem::var(&v, 1);
        let f = u.mul(&u).add(&x).div(&u.sub(&x)).unwrap();
        let two = FieldElem::from_int(&base, 2);
        let got = f.eval_last(&two, &base).unwrap();
        let xb = FieldElem::var(&base, 0);
        let expected = FieldElem::from_int(&base, 4).add(&xb).div(&two.sub(&xb)).unwrap();
        assert_eq!(got, expected);
    }
}
