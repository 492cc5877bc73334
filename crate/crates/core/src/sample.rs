//! Seeded generators of low-complexity random elements for property checks.
//!
//! Every generator draws from the caller's RNG only, so a trial is fully
//! determined by its seed.

use rand::seq::index::sample;
use rand::Rng;

use crate::addchow::{CurveRecipe, CycleGen, ParamCurve, EQUAL_POWER_SUMS};
use crate::forms::{CanonRelForm, DiffForm, FormOnTrunc};
use crate::milnorfield::FieldSymbol;
use crate::scalars::{FieldElem, Monomial, MultiPoly, Rational, Vars};
use crate::trunc::TruncElem;
use crate::witt::WittVector;

pub fn small_rational<R: Rng>(rng: &mut R) -> Rational {
    Rational::new(rng.random_range(-4i64..=4), rng.random_range(1i64..=3)).expect("positive denominator")
}

pub fn nonzero_rational<R: Rng>(rng: &mut R) -> Rational {
    loop {
        let q = small_rational(rng);
        if !q.is_zero() {
            return q;
        }
    }
}

/// A polynomial with at most `terms` terms of total degree at most `deg`.
pub fn poly<R: Rng>(rng: &mut R, vars: &Vars, terms: usize, deg: u32) -> MultiPoly {
    let mut p = MultiPoly::zero(vars);
    for _ in 0..rng.random_range(1..=terms) {
        let mut exps = vec![0u32; vars.len()];
        let mut budget = rng.random_range(0..=deg);
        while budget > 0 && !vars.is_empty() {
            exps[rng.random_range(0..vars.len())] += 1;
            budget -= 1;
        }
        p = p.add(&MultiPoly::monomial(vars, Monomial::from_exps(exps), small_rational(rng)));
    }
    p
}

pub fn nonzero_poly<R: Rng>(rng: &mut R, vars: &Vars, terms: usize, deg: u32) -> MultiPoly {
    loop {
        let p = poly(rng, vars, terms, deg);
        if !p.is_zero() {
            return p;
        }
    }
}

/// Mostly polynomials; sometimes a quotient by a simple denominator.
pub fn field_elem<R: Rng>(rng: &mut R, vars: &Vars) -> FieldElem {
    let num = poly(rng, vars, 3, 2);
    if vars.is_empty() || rng.random_bool(0.7) {
        return FieldElem::from_poly(num);
    }
    FieldElem::from_fraction(num, simple_factor(rng, vars)).expect("nonzero denominator")
}

pub fn nonzero_field_elem<R: Rng>(rng: &mut R, vars: &Vars) -> FieldElem {
    loop {
        let e = field_elem(rng, vars);
        if !e.is_zero() {
            return e;
        }
    }
}

/// `c x_i`, `x_i + c` or `x_i x_j + c` with `c ≠ 0`.
fn simple_factor<R: Rng>(rng: &mut R, vars: &Vars) -> MultiPoly {
    let n = vars.len();
    let c = MultiPoly::constant(vars, nonzero_rational(rng));
    let xi = MultiPoly::var(vars, rng.random_range(0..n));
    match rng.random_range(0..3) {
        0 => xi.mul(&c),
        1 => xi.add(&c),
        _ => xi.mul(&MultiPoly::var(vars, rng.random_range(0..n))).add(&c),
    }
}

/// A nonzero element built from a few simple factors, for dlog arguments.
pub fn dlog_arg<R: Rng>(rng: &mut R, vars: &Vars) -> FieldElem {
    let mut e = FieldElem::from_rational(vars, nonzero_rational(rng));
    if vars.is_empty() {
        return e;
    }
    for _ in 0..rng.random_range(1..=2) {
        let f = FieldElem::from_poly(simple_factor(rng, vars));
        e = if rng.random_bool(0.8) { e.mul(&f) } else { e.div(&f).expect("nonzero factor") };
    }
    e
}

/// Sparse coefficients: each `c_i` is zero with probability `1 - density`.
pub fn trunc<R: Rng>(rng: &mut R, vars: &Vars, m: usize, density: f64) -> TruncElem {
    let coeffs = (0..=m).map(|_| if rng.random_bool(density) { field_elem(rng, vars) } else { FieldElem::zero(vars) }).collect();
    TruncElem::from_coeffs(vars, coeffs, m)
}

pub fn nilpotent<R: Rng>(rng: &mut R, vars: &Vars, m: usize) -> TruncElem {
    let mut coeffs: Vec<FieldElem> =
        (0..=m).map(|_| if rng.random_bool(0.5) { field_elem(rng, vars) } else { FieldElem::zero(vars) }).collect();
    coeffs[0] = FieldElem::zero(vars);
    if m > 0 && coeffs.iter().all(FieldElem::is_zero) {
        coeffs[rng.random_range(1..=m)] = nonzero_field_elem(rng, vars);
    }
    TruncElem::from_coeffs(vars, coeffs, m)
}

pub fn principal<R: Rng>(rng: &mut R, vars: &Vars, m: usize) -> TruncElem {
    TruncElem::one(vars, m).add(&nilpotent(rng, vars, m))
}

/// A unit `c (1 + n)` with `c` a nonzero constant of F.
pub fn unit<R: Rng>(rng: &mut R, vars: &Vars, m: usize) -> TruncElem {
    principal(rng, vars, m).scale(&dlog_arg(rng, vars))
}

pub fn witt<R: Rng>(rng: &mut R, vars: &Vars, m: usize) -> WittVector {
    let coords = (0..m).map(|_| if rng.random_bool(0.5) { field_elem(rng, vars) } else { FieldElem::zero(vars) }).collect();
    WittVector::new(vars, coords)
}

/// A sum of one or two terms `f dx_S` with `|S| = degree`.
pub fn diff_form<R: Rng>(rng: &mut R, vars: &Vars, degree: usize) -> DiffForm {
    let mut w = DiffForm::zero(vars, degree);
    if degree > vars.len() {
        return w;
    }
    for _ in 0..rng.random_range(1..=2) {
        let mut idx = sample(rng, vars.len(), degree).into_vec();
        idx.sort_unstable();
        let f = field_elem(rng, vars);
        w = w.add(&DiffForm::monomial(f, &idx).expect("distinct indices"));
    }
    w
}

/// A relative form `sum t^i ω_i + sum t^i dt ∧ η_i` with zero base.
pub fn relative_form<R: Rng>(rng: &mut R, vars: &Vars, degree: usize, m: usize) -> FormOnTrunc {
    let sparse = |rng: &mut R, deg: usize| if rng.random_bool(0.5) { diff_form(rng, vars, deg) } else { DiffForm::zero(vars, deg) };
    let poly = (0..m).map(|_| sparse(rng, degree)).collect();
    let dt = if degree == 0 { Vec::new() } else { (0..m).map(|_| sparse(rng, degree - 1)).collect() };
    FormOnTrunc::from_parts(DiffForm::zero(vars, degree), poly, dt).expect("consistent shape")
}

pub fn canon<R: Rng>(rng: &mut R, vars: &Vars, degree: usize, m: usize) -> CanonRelForm {
    let comps = (0..m).map(|_| if rng.random_bool(0.6) { diff_form(rng, vars, degree) } else { DiffForm::zero(vars, degree) }).collect();
    CanonRelForm::new(vars, degree, comps).expect("consistent degree")
}

/// A nonzero canonical form.
pub fn nonzero_canon<R: Rng>(rng: &mut R, vars: &Vars, degree: usize, m: usize) -> CanonRelForm {
    loop {
        let c = canon(rng, vars, degree, m);
        if !c.is_zero() {
            return c;
        }
    }
}

/// `(f; b_1, ..., b_{n-1})` with `f(0) ≠ 0`: either a product of factors
/// `1 - a t^s` times a constant, or a random polynomial.
pub fn cycle_gen<R: Rng>(rng: &mut R, vars: &Vars, n: usize, m: usize) -> CycleGen {
    let f0 = dlog_arg(rng, vars);
    let mut f = TruncElem::constant(f0, m + 2);
    if rng.random_bool(0.6) {
        for _ in 0..rng.random_range(1..=2) {
            let s = rng.random_range(1..=m.max(1));
            let a = nonzero_field_elem(rng, vars);
            f = f.mul(&TruncElem::one(vars, m + 2).sub(&TruncElem::monomial(a, s, m + 2)));
        }
    } else {
        f = f.add(&nilpotent(rng, vars, m + 2));
    }
    let bs = (0..n - 1).map(|_| dlog_arg(rng, vars)).collect();
    let coef = [1, 1, 1, -1, 2, -3][rng.random_range(0..6)];
    CycleGen::new(vars, f.coeffs().to_vec(), bs, coef).expect("nonzero f")
}

/// `c Π (u - r_k)^{e_k}` with roots in F, degree at most `max_deg` in u.
pub fn split_in_u<R: Rng>(rng: &mut R, ext: &Vars, max_deg: usize) -> FieldElem {
    let base = ext.without_last();
    let u = FieldElem::var(ext, ext.len() - 1);
    let mut e = dlog_arg(rng, &base).embed(ext);
    let mut deg = 0;
    while deg < max_deg && (deg == 0 || rng.random_bool(0.6)) {
        let root = if base.is_empty() || rng.random_bool(0.5) {
            FieldElem::from_rational(&base, small_rational(rng))
        } else {
            FieldElem::from_poly(simple_factor(rng, &base))
        };
        let lin = u.sub(&root.embed(ext));
        e = if rng.random_bool(0.7) { e.mul(&lin) } else { e.div(&lin).expect("nonzero") };
        deg += 1;
    }
    e
}

/// A symbol of degree `n` over `ext` whose entries split into linear factors in u.
pub fn split_symbol<R: Rng>(rng: &mut R, ext: &Vars, n: usize, max_deg: usize) -> FieldSymbol {
    let entries = (0..n).map(|_| split_in_u(rng, ext, max_deg)).collect();
    FieldSymbol::new(nonzero_rational(rng), entries).expect("nonzero entries")
}

/// A curve from the equal-power-sum corpus together with the largest
/// modulus it satisfies.
pub fn corpus_curve<R: Rng>(rng: &mut R, vars: &Vars, n: usize) -> (ParamCurve, usize) {
    let ext = vars.extended("u").expect("u is free");
    loop {
        let pair = rng.random_range(0..EQUAL_POWER_SUMS.len() - 1);
        let alpha = nonzero_rational(rng);
        let beta = small_rational(rng);
        let gamma = small_rational(rng);
        let c = dlog_arg(rng, vars);
        let g2 = if n >= 2 {
            let u = FieldElem::var(&ext, ext.len() - 1);
            Some(if rng.random_bool(0.4) {
                loop {
                    let b = dlog_arg(rng, vars);
                    if !b.is_one() {
                        break b.embed(&ext);
                    }
                }
            } else {
                let p = FieldElem::from_rational(&ext, small_rational(rng));
                let q = FieldElem::from_rational(&ext, small_rational(rng));
                if p == q {
                    continue;
                }
                u.sub(&p).div(&u.sub(&q)).expect("nonzero")
            })
        } else {
            None
        };
        let recipe = CurveRecipe { pair, alpha, beta, gamma, c, g2, invert: rng.random_bool(0.5) };
        // coincidences of the sample points with γ or with each other make
        // faces meet; resample those
        match recipe.build(vars) {
            Ok(w) => {
                if crate::addchow::boundary(&w, 1).is_ok() {
                    return (w, recipe.max_modulus());
                }
            }
            Err(_) => continue,
        }
    }
}

/// A de Rham–Witt form with independent random ghost components.
pub fn drw_form<R: Rng>(rng: &mut R, vars: &Vars, degree: usize, level: usize) -> crate::drw::DRWForm {
    let ghost = (0..level).map(|_| if rng.random_bool(0.6) { diff_form(rng, vars, degree) } else { DiffForm::zero(vars, degree) }).collect();
    crate::drw::DRWForm::new(vars, degree, ghost).expect("consistent degree")
}
