//! Additive 0-cycles with modulus over a function field, their classes in
//! relative Milnor K-theory and de Rham-Witt forms, and boundaries of
//! parametrized curves in `A^1 × □^n`.

use std::collections::BTreeMap;
use std::fmt;

use crate::drw::DRWForm;
use crate::error::{Error, Result};
use crate::forms::{CanonRelForm, DiffForm};
use crate::milnorfield::{ord, ord_residue, Frame, Point};
use crate::relmilnor::{RelMilnorClass, RelSymbol};
use crate::scalars::gcd::gcd;
use crate::scalars::poly::MultiPoly;
use crate::scalars::parse::{parse_field_elem, split_top_level, strip_brackets};
use crate::scalars::roots::rational_roots;
use crate::scalars::{FieldElem, Rational, Vars};
use crate::trunc::TruncElem;
use crate::witt::WittVector;

/// `coef · [f(t) = 0, y_1 = b_1, ..., y_{n-1} = b_{n-1}]`.
#[derive(Clone, PartialEq, Eq)]
pub struct CycleGen {
    vars: Vars,
    /// `f[i]` multiplies `t^i`.
    f: Vec<FieldElem>,
    bs: Vec<FieldElem>,
    coef: i64,
}

pub type CycleSum = Vec<CycleGen>;

impl CycleGen {
    pub fn new(vars: &Vars, mut f: Vec<FieldElem>, bs: Vec<FieldElem>, coef: i64) -> Result<Self> {
        while f.len() > 1 && f.last().is_some_and(FieldElem::is_zero) {
            f.pop();
        }
        if f.is_empty() || f.iter().all(FieldElem::is_zero) {
            return Err(Error::ZeroArgument);
        }
        Ok(CycleGen { vars: vars.clone(), f, bs, coef })
    }

    /// `(f(t); b_1, ..., b_k)`, optionally prefixed by an integer coefficient `k*`.
    pub fn parse(s: &str, vars: &Vars) -> Result<Self> {
        let s = s.trim();
        let (coef, body) = match s.split_once('*') {
            Some((c, rest)) if c.trim().parse::<i64>().is_ok() && rest.trim_start().starts_with('(') => {
                (c.trim().parse::<i64>().expect("checked"), rest.trim())
            }
            _ => (1, s),
        };
        let inner = strip_brackets(body, '(', ')')?;
        let parts = split_top_level(inner, ';');
        if parts.len() > 2 {
            return Err(Error::Parse("expected \"(f; b_1, ..., b_k)\"".into()));
        }
        let f = parse_t_poly(parts[0], vars)?;
        let bs = match parts.get(1) {
            Some(p) if !p.trim().is_empty() => {
                split_top_level(p, ',').into_iter().map(|b| parse_field_elem(b, vars)).collect::<Result<Vec<_>>>()?
            }
            _ => Vec::new(),
        };
        Self::new(vars, f, bs, coef)
    }

    pub fn vars(&self) -> &Vars {
        &self.vars
    }

    pub fn f(&self) -> &[FieldElem] {
        &self.f
    }

    pub fn bs(&self) -> &[FieldElem] {
        &self.bs
    }

    pub fn coef(&self) -> i64 {
        self.coef
    }

    pub fn with_coef(&self, coef: i64) -> CycleGen {
        CycleGen { coef, ..self.clone() }
    }

    /// The cube dimension n: one more than the number of b-coordinates.
    pub fn n(&self) -> usize {
        self.bs.len() + 1
    }

    /// `f(0)^{-1} f(t) mod t^{m+1}`.
    pub fn normalized_unit(&self, m: usize) -> Result<TruncElem> {
        let c0 = self.f[0].inv().map_err(|_| Error::NotAdmissible("f(0) = 0".into()))?;
        let coeffs = self.f.iter().map(|c| c.mul(&c0)).collect();
        Ok(TruncElem::from_coeffs(&self.vars, coeffs, m))
    }

    fn require_admissible(&self, m: usize) -> Result<()> {
        if check_admissible(self, m) {
            Ok(())
        } else if self.f[0].is_zero() {
            Err(Error::NotAdmissible("f(0) = 0".into()))
        } else {
            Err(Error::NotAdmissible("a b-coordinate lies on a face".into()))
        }
    }
}

fn parse_t_poly(s: &str, vars: &Vars) -> Result<Vec<FieldElem>> {
    if vars.index_of("t").is_some() {
        return Err(Error::InvalidArgument("the name t is reserved for the truncation variable".into()));
    }
    let ext = vars.extended("t")?;
    let e = parse_field_elem(s, &ext)?;
    let k = ext.len() - 1;
    if e.den().contains_var(k) {
        return Err(Error::InvalidArgument("f must be a polynomial in t".into()));
    }
    let den = FieldElem::from_poly(e.den().drop_last_var(vars));
    e.num()
        .coeffs_in(k)
        .into_iter()
        .map(|c| FieldElem::from_poly(c.drop_last_var(vars)).div(&den))
        .collect()
}

impl fmt::Debug for CycleGen {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl fmt::Display for CycleGen {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coef != 1 {
            write!(out, "{}*", self.coef)?;
        }
        let mut terms = Vec::new();
        for (i, c) in self.f.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            terms.push(match i {
                0 => format!("({c})"),
                1 => format!("({c})t"),
                _ => format!("({c})t^{i}"),
            });
        }
        let bs: Vec<String> = self.bs.iter().map(|b| b.to_string()).collect();
        write!(out, "({}; {})", terms.join(" + "), bs.join(", "))
    }
}

/// The point is off `t = 0` and its cube coordinates avoid `{0, ∞}`; the
/// modulus condition is then empty for every `m`.
pub fn check_admissible(z: &CycleGen, _m: usize) -> bool {
    !z.f[0].is_zero() && z.bs.iter().all(|b| !b.is_zero())
}

/// `coef · {f(0)^{-1} f(t), b_1, ..., b_{n-1}}` in canonical coordinates.
/// For n = 1 these are the coefficients of `log(f(0)^{-1} f)`; see
/// [`cyc_witt`] for the Witt-vector description.
pub fn cyc_milnor(z: &CycleGen, m: usize) -> Result<RelMilnorClass> {
    z.require_admissible(m)?;
    let u = z.normalized_unit(m)?;
    let sym = RelSymbol::from_elems(Rational::from_int(z.coef), vec![u])?.append_constants(&z.bs)?;
    sym.normal_form()
}

pub fn cyc_milnor_sum(zs: &[CycleGen], vars: &Vars, n: usize, m: usize) -> Result<RelMilnorClass> {
    let mut acc = RelMilnorClass::zero(vars, n, m);
    for z in zs {
        if z.n() != n {
            return Err(Error::Mismatch(format!("generator of dimension {} in a sum of dimension {n}", z.n())));
        }
        acc = acc.add(&cyc_milnor(z, m)?);
    }
    Ok(acc)
}

/// `coef · gamma_inv(f(0)^{-1} f)`.
pub fn cyc_witt(z: &CycleGen, m: usize) -> Result<WittVector> {
    z.require_admissible(m)?;
    let a = WittVector::gamma_inv(&z.normalized_unit(m)?)?;
    Ok(WittVector::unghost(&a.ghost().scale(&Rational::from_int(z.coef))))
}

/// `coef · a dlog[b_1] ∧ ... ∧ dlog[b_{n-1}]` with `a = gamma_inv(f(0)^{-1} f)`.
pub fn cycle_to_drw(z: &CycleGen, m: usize) -> Result<DRWForm> {
    z.require_admissible(m)?;
    let a = WittVector::gamma_inv(&z.normalized_unit(m)?)?;
    Ok(DRWForm::phi(&a, &z.bs)?.scale(&Rational::from_int(z.coef)))
}

pub fn cycle_sum_to_drw(zs: &[CycleGen], vars: &Vars, n: usize, m: usize) -> Result<DRWForm> {
    let mut acc = DRWForm::zero(vars, n - 1, m);
    for z in zs {
        acc = acc.add(&cycle_to_drw(z, m)?);
    }
    Ok(acc)
}

/// `c_i = -(1/i) ω_i`.
pub fn drw_to_milnor_diagonal(w: &DRWForm) -> RelMilnorClass {
    let comps = w
        .ghost()
        .iter()
        .enumerate()
        .map(|(k, wj)| wj.scale(&Rational::new(-1, k as i64 + 1).expect("i > 0")))
        .collect();
    let canon = CanonRelForm::new(w.vars(), w.degree(), comps).expect("components share the degree");
    RelMilnorClass::from_canon(canon)
}

/// Inverse of [`drw_to_milnor_diagonal`]: `ω_i = -i c_i`.
pub fn milnor_to_drw_diagonal(c: &RelMilnorClass) -> DRWForm {
    let canon = c.canon();
    let ghost: Vec<DiffForm> =
        canon.comps().iter().enumerate().map(|(k, ci)| ci.scale(&Rational::from_int(-(k as i64 + 1)))).collect();
    DRWForm::new(canon.vars(), canon.degree(), ghost).expect("components share the degree")
}

/// `u ↦ (g_0(u), g_1(u), ..., g_n(u))`, with `g_0` the t-coordinate.
#[derive(Clone, PartialEq, Eq)]
pub struct ParamCurve {
    frame: Frame,
    g: Vec<FieldElem>,
}

impl ParamCurve {
    /// `g` lives over `vars + [u]`.
    pub fn new(vars: &Vars, g: Vec<FieldElem>) -> Result<Self> {
        let ext = vars.extended("u")?;
        if g.len() < 2 {
            return Err(Error::InvalidArgument("a curve needs g_0 and at least one cube coordinate".into()));
        }
        if g.iter().any(|e| !e.vars().same(&ext)) {
            return Err(Error::Mismatch("curve coordinates must live over vars + [u]".into()));
        }
        if g.iter().any(FieldElem::is_zero) {
            return Err(Error::ZeroEntry);
        }
        if g[1..].iter().any(FieldElem::is_one) {
            return Err(Error::InvalidArgument("a cube coordinate is identically 1".into()));
        }
        Ok(ParamCurve { frame: Frame::new(&ext)?, g })
    }

    pub fn parse(items: &[&str], vars: &Vars) -> Result<Self> {
        let ext = vars.extended("u")?;
        let g = items.iter().map(|s| parse_field_elem(s, &ext)).collect::<Result<Vec<_>>>()?;
        Self::new(vars, g)
    }

    pub fn vars(&self) -> &Vars {
        self.frame.base()
    }

    pub fn n(&self) -> usize {
        self.g.len() - 1
    }

    pub fn coords(&self) -> &[FieldElem] {
        &self.g
    }

    /// The curve after `u ↦ 1/u`.
    pub fn invert_parameter(&self) -> Result<ParamCurve> {
        let ext = self.frame.ext();
        let k = self.frame.var_index();
        let u = self.frame.var();
        let reversed = |p: &MultiPoly| {
            let mut cs = p.coeffs_in(k);
            cs.reverse();
            (MultiPoly::from_coeffs_in(ext, k, &cs), cs.len() as i64 - 1)
        };
        let g = self
            .g
            .iter()
            .map(|e| {
                let (n, dn) = reversed(e.num());
                let (d, dd) = reversed(e.den());
                Ok(FieldElem::from_fraction(n, d)?.mul(&u.pow(dd - dn)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(ParamCurve { frame: self.frame.clone(), g })
    }
}

impl fmt::Debug for ParamCurve {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.g.iter().map(|e| e.to_string()).collect();
        write!(f, "({})", parts.join("; "))
    }
}

/// Value of `g` at a point: `None` for ∞.
fn value_at(frame: &Frame, g: &FieldElem, pt: &Point) -> Result<Option<FieldElem>> {
    let (o, r) = ord_residue(frame, g, pt)?;
    Ok(match o.cmp(&0) {
        std::cmp::Ordering::Equal => Some(r),
        std::cmp::Ordering::Greater => Some(FieldElem::zero(frame.base())),
        std::cmp::Ordering::Less => None,
    })
}

fn rational_support(frame: &Frame, g: &FieldElem) -> std::result::Result<Vec<Point>, String> {
    let k = frame.var_index();
    let mut pts = Vec::new();
    for p in [g.num(), g.den()] {
        if !p.contains_var(k) {
            continue;
        }
        let rep = rational_roots(p, frame.base());
        if !rep.fully_rational() {
            return Err(rep.residual.to_string());
        }
        for (c, _) in rep.roots {
            pts.push(Point::Finite(c));
        }
    }
    pts.push(Point::Infinity);
    Ok(pts)
}

/// The boundary cycle and the points that did not contribute.
#[derive(Clone, Debug, Default)]
pub struct BoundaryReport {
    pub cycles: CycleSum,
    /// Points where `g_0 = ∞`: they leave `A^1`.
    pub at_infinity: usize,
    /// Points where another coordinate equals 1: they leave `□^{n-1}`.
    pub on_degenerate_face: usize,
}

/// `Σ_i (-1)^i (∂_i^∞ - ∂_i^0) W`, each boundary point written as
/// `(1 - t/g_0(c); g_j(c) for j ≠ i)` with multiplicity `ord_c(g_i)`.
pub fn boundary(w: &ParamCurve, _m: usize) -> Result<BoundaryReport> {
    let fr = &w.frame;
    let base = fr.base();
    let mut rep = BoundaryReport::default();
    for i in 1..=w.n() {
        let pts = rational_support(fr, &w.g[i]).map_err(Error::NonRationalBoundary)?;
        for pt in pts {
            let o = ord(fr, &w.g[i], &pt)?;
            if o == 0 {
                continue;
            }
            let g0 = match value_at(fr, &w.g[0], &pt)? {
                None => {
                    rep.at_infinity += 1;
                    continue;
                }
                Some(v) if v.is_zero() => return Err(Error::FaceDegenerate(format!("g_0 vanishes at u = {pt}"))),
                Some(v) => v,
            };
            let mut bs = Vec::with_capacity(w.n() - 1);
            let mut degenerate = false;
            for j in (1..=w.n()).filter(|&j| j != i) {
                match value_at(fr, &w.g[j], &pt)? {
                    Some(v) if v.is_one() => degenerate = true,
                    Some(v) if !v.is_zero() => bs.push(v),
                    _ => return Err(Error::FaceDegenerate(format!("g_{j} meets a face at u = {pt}"))),
                }
            }
            if degenerate {
                rep.on_degenerate_face += 1;
                continue;
            }
            let f = vec![FieldElem::one(base), g0.inv()?.neg()];
            let sign = if i % 2 == 1 { 1 } else { -1 };
            rep.cycles.push(CycleGen::new(base, f, bs, sign * o)?);
        }
    }
    Ok(rep)
}

/// `Σ_i max(0, ord_c(g_i - 1)) ≥ (m+1) ord_c(g_0)` at every zero `c` of `g_0`.
pub fn modulus_check_curve(w: &ParamCurve, m: usize) -> Result<bool> {
    let fr = &w.frame;
    let k = fr.var_index();
    let mut zeros: Vec<Point> = Vec::new();
    let num = w.g[0].num();
    if num.contains_var(k) {
        let rep = rational_roots(num, fr.base());
        if !rep.fully_rational() {
            // At a non-rational zero the condition needs some g_i = 1 there.
            let r = &rep.residual;
            let touches = w.g[1..].iter().any(|g| {
                let d = g.sub(&FieldElem::one(g.vars()));
                !gcd(r, d.num()).is_constant()
            });
            if touches {
                return Err(Error::NonRationalSupport(r.to_string()));
            }
            return Ok(false);
        }
        zeros.extend(rep.roots.into_iter().map(|(c, _)| Point::Finite(c)));
    }
    if ord(fr, &w.g[0], &Point::Infinity)? > 0 {
        zeros.push(Point::Infinity);
    }
    for pt in zeros {
        let e = ord(fr, &w.g[0], &pt)?;
        let mut lhs = 0i64;
        for g in &w.g[1..] {
            let d = g.sub(&FieldElem::one(g.vars()));
            lhs += ord(fr, &d, &pt)?.max(0);
        }
        if lhs < (m as i64 + 1) * e {
            return Ok(false);
        }
    }
    Ok(true)
}

#[derive(Clone, Debug)]
pub struct VanishingReport {
    /// The modulus condition failed, so nothing was tested.
    pub vacuous: bool,
    pub boundary: BoundaryReport,
    pub class: Option<RelMilnorClass>,
    pub vanishes: bool,
}

/// The class of `∂W` at level `m`, and whether it is 0.
pub fn verify_boundary_vanishing(w: &ParamCurve, m: usize) -> Result<VanishingReport> {
    if !modulus_check_curve(w, m)? {
        return Ok(VanishingReport { vacuous: true, boundary: BoundaryReport::default(), class: None, vanishes: true });
    }
    let b = boundary(w, m)?;
    let class = cyc_milnor_sum(&b.cycles, w.vars(), w.n(), m)?;
    Ok(VanishingReport { vacuous: false, vanishes: class.is_zero(), boundary: b, class: Some(class) })
}

/// Objects with restriction maps between levels.
pub trait Restrict: Sized {
    fn restrict_to(&self, level: usize) -> Result<Self>;
}

impl Restrict for RelMilnorClass {
    fn restrict_to(&self, level: usize) -> Result<Self> {
        self.restrict(level)
    }
}

impl Restrict for WittVector {
    fn restrict_to(&self, level: usize) -> Result<Self> {
        self.restrict(level)
    }
}

impl Restrict for TruncElem {
    fn restrict_to(&self, level: usize) -> Result<Self> {
        self.restrict(level)
    }
}

impl Restrict for DRWForm {
    fn restrict_to(&self, level: usize) -> Result<Self> {
        self.restrict(level)
    }
}

/// Finitely many levels of a pro-system, one element per level.
#[derive(Clone, Debug)]
pub struct Tower<T> {
    levels: BTreeMap<usize, T>,
}

impl<T> Default for Tower<T> {
    fn default() -> Self {
        Tower { levels: BTreeMap::new() }
    }
}

impl<T: Restrict + PartialEq> Tower<T> {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, level: usize, x: T) {
        self.levels.insert(level, x);
    }

    pub fn get(&self, level: usize) -> Option<&T> {
        self.levels.get(&level)
    }

    pub fn levels(&self) -> impl Iterator<Item = usize> + '_ {
        self.levels.keys().copied()
    }

    /// Whether restricting each level to every lower one gives the stored element.
    pub fn is_compatible(&self) -> Result<bool> {
        for (&hi, x) in &self.levels {
            for (&lo, y) in self.levels.range(..hi) {
                if &x.restrict_to(lo)? != y {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }
}

/// `cyc(zs)` at `m_hi`, restricted to `m_lo`, against `cyc(zs)` at `m_lo`.
pub fn tower_compat(zs: &[CycleGen], vars: &Vars, n: usize, m_hi: usize, m_lo: usize) -> Result<bool> {
    if m_lo > m_hi {
        return Err(Error::InvalidArgument("need m' ≥ m".into()));
    }
    let mut tower = Tower::new();
    tower.insert(m_hi, cyc_milnor_sum(zs, vars, n, m_hi)?);
    tower.insert(m_lo, cyc_milnor_sum(zs, vars, n, m_lo)?);
    tower.is_compatible()
}

/// Pairs of integer sets with equal power sums up to degree `len - 1`.
pub const EQUAL_POWER_SUMS: [(&[i64], &[i64]); 5] = [
    (&[0, 3], &[1, 2]),
    (&[0, 4, 5], &[1, 2, 6]),
    (&[0, 4, 7, 11], &[1, 2, 9, 10]),
    (&[0, 4, 8, 16, 17], &[1, 2, 10, 14, 18]),
    (&[0, 5, 6, 16, 17, 22], &[1, 2, 10, 12, 20, 21]),
];

/// Parameters of a curve `g_0 = c/(u - γ)`, `g_1 = Π(u - A)/Π(u - B)` with
/// `A, B` an affine image `α a + β` of an equal-power-sum pair. Its only zero
/// of `g_0` is `u = ∞`, where `ord(g_1 - 1) = |A|`, so the modulus condition
/// holds up to `m = |A| - 1`.
#[derive(Clone, Debug)]
pub struct CurveRecipe {
    pub pair: usize,
    pub alpha: Rational,
    pub beta: Rational,
    pub gamma: Rational,
    /// The numerator `c` of `g_0`, over the base variables.
    pub c: FieldElem,
    /// Optional second cube coordinate, over `vars + [u]`.
    pub g2: Option<FieldElem>,
    pub invert: bool,
}

impl CurveRecipe {
    pub fn max_modulus(&self) -> usize {
        EQUAL_POWER_SUMS[self.pair].0.len() - 1
    }

    pub fn build(&self, vars: &Vars) -> Result<ParamCurve> {
        let ext = vars.extended("u")?;
        let u = FieldElem::var(&ext, ext.len() - 1);
        let (a_set, b_set) = EQUAL_POWER_SUMS[self.pair];
        let shift = |a: i64| {
            let v = &(&self.alpha * &Rational::from_int(a)) + &self.beta;
            u.sub(&FieldElem::from_rational(&ext, v))
        };
        let mut num = FieldElem::one(&ext);
        for &a in a_set {
            num = num.mul(&shift(a));
        }
        let mut den = FieldElem::one(&ext);
        for &b in b_set {
            den = den.mul(&shift(b));
        }
        let g1 = num.div(&den)?;
        let g0 = self.c.embed(&ext).div(&u.sub(&FieldElem::from_rational(&ext, self.gamma.clone())))?;
        let mut g = vec![g0, g1];
        if let Some(g2) = &self.g2 {
            g.push(g2.clone());
        }
        let w = ParamCurve::new(vars, g)?;
        if self.invert {
            w.invert_parameter()
        } else {
            Ok(w)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fe(s: &str, v: &Vars) -> FieldElem {
        parse_field_elem(s, v).unwrap()
    }

    fn xv() -> Vars {
        Vars::new(&["x"]).unwrap()
    }

    #[test]
    fn admissibility() {
        let v = xv();
        assert!(check_admissible(&CycleGen::parse("(1-3t; x)", &v).unwrap(), 2));
        assert!(!check_admissible(&CycleGen::parse("(t; x)", &v).unwrap(), 2));
        assert!(!check_admissible(&CycleGen::parse("(1+t; 0)", &v).unwrap(), 2));
        assert!(matches!(cyc_milnor(&CycleGen::parse("(t; x)", &v).unwrap(), 2), Err(Error::NotAdmissible(_))));
    }

    #[test]
    fn cyc_examples() {
        let v = xv();
        let z1 = CycleGen::parse("(1-3t)", &v).unwrap();
        assert_eq!(cyc_witt(&z1, 2).unwrap(), WittVector::new(&v, vec![fe("3", &v), fe("0", &v)]));
        let z = CycleGen::parse("(1-3t; x)", &v).unwrap();
        let c = cyc_milnor(&z, 2).unwrap();
        let dl = DiffForm::dlog(&fe("x", &v)).unwrap();
        assert_eq!(c.canon().comps(), &[dl.scale(&Rational::from_int(-3)), dl.scale(&Rational::new(-9, 2).unwrap())]);
        assert_eq!(cyc_milnor(&CycleGen::parse("(2-6t; x)", &v).unwrap(), 2).unwrap(), c);
        let w = cycle_to_drw(&z, 2).unwrap();
        assert_eq!(w.ghost(), &[dl.scale(&Rational::from_int(3)), dl.scale(&Rational::from_int(9))]);
        assert_eq!(drw_to_milnor_diagonal(&w), c);
        assert_eq!(milnor_to_drw_diagonal(&c), w);
    }

    #[test]
    fn drw_examples() {
        let v = Vars::new(&["x", "a", "b"]).unwrap();
        let z = CycleGen::parse("(1 - a t^2; x)", &v).unwrap();
        let dl = DiffForm::dlog(&fe("x", &v)).unwrap();
        let w = cycle_to_drw(&z, 2).unwrap();
        assert!(w.comp(1).is_zero());
        assert_eq!(w.comp(2), &dl.mul_fn(&fe("2a", &v)));
        let prod = cycle_to_drw(&CycleGen::parse("((1 - a t)(1 - b t); x)", &v).unwrap(), 3).unwrap();
        let sum = cycle_to_drw(&CycleGen::parse("(1 - a t; x)", &v).unwrap(), 3)
            .unwrap()
            .add(&cycle_to_drw(&CycleGen::parse("(1 - b t; x)", &v).unwrap(), 3).unwrap());
        assert_eq!(prod, sum);
    }

    #[test]
    fn boundary_examples() {
        let v = xv();
        let w = ParamCurve::parse(&["x", "u"], &v).unwrap();
        let b = boundary(&w, 2).unwrap();
        assert!(cyc_milnor_sum(&b.cycles, &v, 1, 3).unwrap().is_zero());
        let w = ParamCurve::parse(&["x(1+u)", "u/(u-1)"], &v).unwrap();
        let b = boundary(&w, 2).unwrap();
        assert_eq!(
            b.cycles,
            vec![
                CycleGen::parse("(1 - t/x)", &v).unwrap(),
                CycleGen::parse("-1*(1 - t/(2x))", &v).unwrap(),
            ]
        );
        let w = ParamCurve::parse(&["x", "u^2+1"], &v).unwrap();
        assert!(matches!(boundary(&w, 2), Err(Error::NonRationalBoundary(_))));
    }

    #[test]
    fn modulus_examples() {
        let v = xv();
        assert!(modulus_check_curve(&ParamCurve::parse(&["x", "u"], &v).unwrap(), 5).unwrap());
        for m in 1..4 {
            let w = ParamCurve::parse(&["u", &format!("1 + x u^{}", m + 1)], &v).unwrap();
            assert!(modulus_check_curve(&w, m).unwrap());
            let w = ParamCurve::parse(&["u", "1 + x u"], &v).unwrap();
            assert!(!modulus_check_curve(&w, m).unwrap());
        }
        let w = ParamCurve::parse(&["1+u^2", "u/(u-1)", "x"], &v).unwrap();
        let r = verify_boundary_vanishing(&w, 2).unwrap();
        assert!(r.vacuous);
    }

    #[test]
    fn corpus_curves_vanish() {
        let v = xv();
        let ext = v.extended("u").unwrap();
        for pair in 0..4 {
            for (g2, invert) in [(None, false), (Some(fe("x+2", &ext)), true), (Some(fe("(u-7)/(u+5)", &ext)), false)] {
                let r = CurveRecipe {
                    pair,
                    alpha: Rational::from_int(2),
                    beta: Rational::new(1, 3).unwrap(),
                    gamma: Rational::from_int(-4),
                    c: fe("x", &v),
                    g2,
                    invert,
                };
                let w = r.build(&v).unwrap();
                for m in 1..=r.max_modulus().min(3) {
                    let rep = verify_boundary_vanishing(&w, m).unwrap();
                    assert!(!rep.vacuous, "{w:?} at {m}");
                    assert!(rep.vanishes, "{w:?} at {m}: {:?}", rep.class);
                }
            }
        }
    }

    #[test]
    fn towers() {
        let v = xv();
        let zs = vec![
            CycleGen::parse("(1 - 3t + x t^2; x)", &v).unwrap(),
            CycleGen::parse("2*(1 + t^3; x+1)", &v).unwrap(),
        ];
        assert!(tower_compat(&zs, &v, 2, 4, 2).unwrap());
    }
}
