//! JSON encodings of the library's values.
//!
//! Rationals are strings `"p/q"`, polynomials are arrays of
//! `[exponents, coefficient]` pairs, and field elements are their text form,
//! which parses back with [`parse_field_elem`].

use serde_json::{json, Value};

use crate::addchow::{CycleGen, ParamCurve};
use crate::drw::DRWForm;
use crate::error::{Error, Result};
use crate::forms::{CanonRelForm, DiffForm, FormOnTrunc};
use crate::milnorfield::{FieldSymbol, Valuation};
use crate::relmilnor::{RelMilnorClass, RelSymbol};
use crate::scalars::parse::parse_field_elem;
use crate::scalars::{FieldElem, MultiPoly, Rational, Vars};
use crate::trunc::TruncElem;
use crate::witt::{GhostTuple, WittVector};

pub fn rational(q: &Rational) -> Value {
    Value::String(q.to_string())
}

pub fn poly(p: &MultiPoly) -> Value {
    Value::Array(p.terms().map(|(m, c)| json!([m.exps(), c.to_string()])).collect())
}

pub fn field(e: &FieldElem) -> Value {
    Value::String(e.to_string())
}

fn fields(es: &[FieldElem]) -> Value {
    Value::Array(es.iter().map(field).collect())
}

/// `[[i, j, ...], f]` for each term `f dx_i ∧ dx_j ∧ ...`.
pub fn diff_form(w: &DiffForm) -> Value {
    let terms = w
        .terms()
        .map(|(s, f)| {
            let idx: Vec<usize> = (0..64).filter(|k| s & (1u64 << k) != 0).collect();
            json!([idx, field(f)])
        })
        .collect();
    Value::Array(terms)
}

fn diff_forms(ws: &[DiffForm]) -> Value {
    Value::Array(ws.iter().map(diff_form).collect())
}

pub fn form_on_trunc(w: &FormOnTrunc) -> Value {
    json!({"base": diff_form(w.base()), "poly": diff_forms(w.poly()), "dt": diff_forms(w.dt_parts())})
}

/// Component `i` of the array is `c_{i+1}`.
pub fn canon(c: &CanonRelForm) -> Value {
    diff_forms(c.comps())
}

pub fn class(c: &RelMilnorClass) -> Value {
    canon(c.canon())
}

pub fn trunc(a: &TruncElem) -> Value {
    fields(a.coeffs())
}

pub fn ghost(g: &GhostTuple) -> Value {
    fields(g.comps())
}

pub fn witt(a: &WittVector) -> Value {
    json!({"coords": fields(a.coords()), "ghost": ghost(&a.ghost())})
}

pub fn drw(w: &DRWForm) -> Value {
    json!({"degree": w.degree(), "level": w.level(), "ghost": diff_forms(w.ghost())})
}

pub fn rel_symbol(s: &RelSymbol) -> Value {
    json!({"coef": rational(s.coef()), "entries": s.entries().iter().map(|u| trunc(u.elem())).collect::<Vec<_>>()})
}

pub fn field_symbol(s: &FieldSymbol) -> Value {
    json!({"coef": rational(&s.coef), "entries": fields(&s.entries)})
}

pub fn valuation(v: &Valuation) -> Value {
    match v {
        Valuation::Finite(p) => json!({"kind": "finite", "poly": poly(p)}),
        Valuation::Infinity => json!({"kind": "infinity", "poly": Value::Null}),
    }
}

pub fn cycle_gen(z: &CycleGen) -> Value {
    json!({"f": fields(z.f()), "bs": fields(z.bs()), "coef": z.coef()})
}

pub fn curve(w: &ParamCurve) -> Value {
    json!({"g": fields(w.coords())})
}

fn bad(msg: impl Into<String>) -> Error {
    Error::Json(msg.into())
}

fn get<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| bad(format!("missing field {key:?}")))
}

pub fn parse_rational(v: &Value) -> Result<Rational> {
    match v {
        Value::String(s) => s.trim().parse(),
        Value::Number(n) => n.as_i64().map(Rational::from_int).ok_or_else(|| bad("rationals must be integers or \"p/q\"")),
        _ => Err(bad("rationals must be integers or \"p/q\"")),
    }
}

pub fn parse_field(v: &Value, vars: &Vars) -> Result<FieldElem> {
    match v {
        Value::String(s) => parse_field_elem(s, vars),
        Value::Number(_) => Ok(FieldElem::from_rational(vars, parse_rational(v)?)),
        _ => Err(bad("field elements must be strings")),
    }
}

fn parse_fields(v: &Value, vars: &Vars) -> Result<Vec<FieldElem>> {
    v.as_array().ok_or_else(|| bad("expected an array"))?.iter().map(|e| parse_field(e, vars)).collect()
}

pub fn parse_trunc(v: &Value, vars: &Vars, level: usize) -> Result<TruncElem> {
    Ok(TruncElem::from_coeffs(vars, parse_fields(v, vars)?, level))
}

/// `{"coef": "p/q", "entries": [[c0, c1, ...], ...]}`.
pub fn parse_rel_symbol(v: &Value, vars: &Vars, level: usize) -> Result<RelSymbol> {
    let coef = match v.get("coef") {
        Some(c) => parse_rational(c)?,
        None => Rational::one(),
    };
    let entries = get(v, "entries")?
        .as_array()
        .ok_or_else(|| bad("entries must be an array"))?
        .iter()
        .map(|e| parse_trunc(e, vars, level))
        .collect::<Result<Vec<_>>>()?;
    RelSymbol::from_elems(coef, entries)
}

/// `{"f": [...], "bs": [...], "coef": k}`.
pub fn parse_cycle_gen(v: &Value, vars: &Vars) -> Result<CycleGen> {
    let f = parse_fields(get(v, "f")?, vars)?;
    let bs = match v.get("bs") {
        Some(b) => parse_fields(b, vars)?,
        None => Vec::new(),
    };
    let coef = match v.get("coef") {
        Some(c) => c.as_i64().ok_or_else(|| bad("coef must be an integer"))?,
        None => 1,
    };
    CycleGen::new(vars, f, bs, coef)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn encodings() {
        let v = Vars::new(&["x", "y"]).unwrap();
        let x = parse_field_elem("x", &v).unwrap();
        let p = parse_field_elem("3*x^2*y - 1/2", &v).unwrap();
        let enc = poly(p.num());
        assert!(enc.as_array().unwrap().contains(&json!([[2, 1], "3"])));
        assert_eq!(rational(&Rational::new(-1, 2).unwrap()), json!("-1/2"));
        let w = DiffForm::dlog(&x).unwrap();
        assert_eq!(diff_form(&w), json!([[[0], "1/x"]]));
        let a = WittVector::new(&v, vec![FieldElem::from_int(&v, 3), FieldElem::zero(&v)]);
        assert_eq!(witt(&a)["ghost"], json!(["3", "9"]));
        assert_eq!(valuation(&Valuation::Infinity)["kind"], json!("infinity"));
    }

    #[test]
    fn decoding() {
        let v = Vars::new(&["x"]).unwrap();
        let s = parse_rel_symbol(&json!({"coef": "2", "entries": [["1", "1"], ["x"]]}), &v, 1).unwrap();
        assert_eq!(s.degree(), 2);
        assert_eq!(parse_rel_symbol(&rel_symbol(&s), &v, 1).unwrap(), s);
        let z = parse_cycle_gen(&json!({"f": ["1", "-3"], "bs": ["x"]}), &v).unwrap();
        assert_eq!(parse_cycle_gen(&cycle_gen(&z), &v).unwrap(), z);
        assert!(matches!(parse_rel_symbol(&json!({"entries": 3}), &v, 1), Err(Error::Json(_))));
    }
}
