//! Randomized property suites, one per module, with a deterministic runner.
//!
//! Trial `k` of property `p` draws from a ChaCha8 stream keyed by the seed,
//! a hash of the property name and `k`, so reports do not depend on thread
//! scheduling. Trials run in parallel; the report is assembled in trial order.

use std::fmt;
use std::str::FromStr;
use std::time::{Duration, Instant};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::addchow::{
    cycle_to_drw, cyc_milnor, drw_to_milnor_diagonal, milnor_to_drw_diagonal, tower_compat, verify_boundary_vanishing,
    CycleGen,
};
use crate::drw::DRWForm;
use crate::error::{Error, Result};
use crate::forms::DiffForm;
use crate::milnorfield::{
    elem_identity_instance, realization_zero, rewrite_filtration, support, tame_symbol, verify_rewrite,
    weil_reciprocity_check, FieldSymbol, Frame, Point,
};
use crate::relmilnor::{elem_identity_relative, theta, theta_section, CoeffRing, RelMilnorClass, RelSymbol};
use crate::sample;
use crate::scalars::{FieldElem, Rational, Vars};
use crate::trunc::TruncElem;
use crate::witt::WittVector;

/// Result of one trial.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Pass,
    /// The sampled instance did not meet the property's hypotheses.
    Skip,
    Fail(String),
}

type Check = fn(&mut ChaCha8Rng, usize) -> Result<Outcome>;

#[derive(Clone, Copy)]
pub struct Property {
    pub name: &'static str,
    pub default_trials: usize,
    check: Check,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Counterexample {
    pub trial: usize,
    pub detail: String,
}

#[derive(Clone, Debug)]
pub struct PropertyReport {
    pub name: &'static str,
    pub trials: usize,
    pub passed: usize,
    pub skipped: usize,
    pub failed: usize,
    pub counterexample: Option<Counterexample>,
    pub elapsed: Duration,
}

impl PropertyReport {
    pub fn ok(&self) -> bool {
        self.failed == 0
    }

    /// Timing is left out so that reports compare equal across runs.
    pub fn to_json(&self) -> Value {
        json!({
            "property": self.name,
            "trials": self.trials,
            "passed": self.passed,
            "skipped": self.skipped,
            "failed": self.failed,
            "status": if self.ok() { "PASS" } else { "FAIL" },
            "counterexample": self.counterexample.as_ref().map(|c| json!({"trial": c.trial, "detail": c.detail})),
        })
    }
}

#[derive(Clone, Debug)]
pub struct SuiteReport {
    pub suite: Suite,
    pub seed: u64,
    pub properties: Vec<PropertyReport>,
}

impl SuiteReport {
    pub fn ok(&self) -> bool {
        self.properties.iter().all(PropertyReport::ok)
    }

    pub fn elapsed(&self) -> Duration {
        self.properties.iter().map(|p| p.elapsed).sum()
    }

    pub fn property(&self, name: &str) -> Option<&PropertyReport> {
        self.properties.iter().find(|p| p.name == name)
    }

    pub fn to_json(&self) -> Value {
        json!({
            "suite": self.suite.name(),
            "seed": self.seed,
            "status": if self.ok() { "PASS" } else { "FAIL" },
            "properties": self.properties.iter().map(PropertyReport::to_json).collect::<Vec<_>>(),
        })
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "suite {} (seed {}): {}", self.suite.name(), self.seed, if self.ok() { "PASS" } else { "FAIL" })?;
        for p in &self.properties {
            write!(
                f,
                "  {:<4} {:<34} {:>5} trials, {:>4} skipped  {:>8.2?}",
                if p.ok() { "PASS" } else { "FAIL" },
                p.name,
                p.trials,
                p.skipped,
                p.elapsed
            )?;
            if let Some(c) = &p.counterexample {
                write!(f, "\n       trial {}: {}", c.trial, c.detail)?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    Scalars,
    Forms,
    Trunc,
    Witt,
    Drw,
    Relmilnor,
    Reciprocity,
    Rewriting,
    CycleIso,
}

impl Suite {
    pub const ALL: [Suite; 9] = [
        Suite::Scalars,
        Suite::Forms,
        Suite::Trunc,
        Suite::Witt,
        Suite::Drw,
        Suite::Relmilnor,
        Suite::Reciprocity,
        Suite::Rewriting,
        Suite::CycleIso,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Scalars => "scalars",
            Suite::Forms => "forms",
            Suite::Trunc => "trunc",
            Suite::Witt => "witt",
            Suite::Drw => "drw",
            Suite::Relmilnor => "relmilnor",
            Suite::Reciprocity => "reciprocity",
            Suite::Rewriting => "rewriting",
            Suite::CycleIso => "cycle-iso",
        }
    }

    pub fn properties(self) -> Vec<Property> {
        macro_rules! props {
            ($($name:literal => $trials:expr, $f:path;)*) => {
                vec![$(Property { name: $name, default_trials: $trials, check: $f }),*]
            };
        }
        match self {
            Suite::Scalars => props! {
                "field_axioms" => 200, scalars::field_axioms;
                "partial_leibniz" => 200, scalars::partial_leibniz;
                "split_unit" => 200, scalars::split_unit;
            },
            Suite::Forms => props! {
                "reduce_kills_exact" => 200 * forms::GRID, forms::reduce_kills_exact;
                "d_injective_on_canon" => 100, forms::d_injective_on_canon;
                "reduce_additive" => 200, forms::reduce_additive;
                "reduce_fixes_canon" => 200, forms::reduce_fixes_canon;
            },
            Suite::Trunc => props! {
                "exp_log_inverse" => 500, trunc::exp_log_inverse;
                "exp_log_homomorphism" => 500, trunc::exp_log_homomorphism;
                "restriction_commutes" => 200, trunc::restriction_commutes;
            },
            Suite::Witt => props! {
                "gamma_homomorphism" => 300, witt::gamma_homomorphism;
                "gamma_inverse" => 300, witt::gamma_inverse;
                "ghost_ring_homomorphism" => 300, witt::ghost_ring_homomorphism;
                "unghost_ghost" => 300, witt::unghost_ghost;
                "log_derivative" => 300, witt::log_derivative;
                "frobenius_verschiebung" => 200, witt::frobenius_verschiebung;
                "restrict_verschiebung" => 200, witt::restrict_verschiebung;
            },
            Suite::Drw => props! {
                "zeta_coherence" => 100, drw::zeta_coherence;
                "frobenius_d_verschiebung" => 100, drw::frobenius_d_verschiebung;
                "projection_formula" => 100, drw::projection_formula;
                "d_squared_zero" => 100, drw::d_squared_zero;
                "leibniz" => 100, drw::leibniz;
                "restriction_commutes" => 100, drw::restriction_commutes;
                "v_dlog_identity" => 100, drw::v_dlog_identity;
                "restriction_kernel" => 100, drw::restriction_kernel;
            },
            Suite::Relmilnor => props! {
                "principal_entry_independence" => 200, relmilnor::principal_entry_independence;
                "log_dlog_symmetric_exact" => 200, relmilnor::log_dlog_symmetric_exact;
                "bilinearity" => 200, relmilnor::bilinearity;
                "antisymmetry" => 200, relmilnor::antisymmetry;
                "steinberg" => 200, relmilnor::steinberg;
                "symbol_identity" => 200, relmilnor::symbol_identity;
                "theta_roundtrip" => 100 * relmilnor::GRID, relmilnor::theta_roundtrip;
                "theta_section" => 100, relmilnor::theta_section_sum;
            },
            Suite::Reciprocity => props! {
                "weil_reciprocity" => 60, reciprocity::weil;
                "tame_multilinear" => 100, reciprocity::tame_multilinear;
                "tame_unit_entries" => 100, reciprocity::tame_unit_entries;
                "tame_antisymmetry" => 100, reciprocity::tame_antisymmetry;
            },
            Suite::Rewriting => props! {
                "identity_generic_branch" => 60, rewriting::identity_generic;
                "identity_degenerate_branch" => 60, rewriting::identity_degenerate;
                "filtration_rewrite_z" => 60, rewriting::filtration_z;
                "filtration_rewrite_q" => 60, rewriting::filtration_q;
            },
            Suite::CycleIso => props! {
                "dictionary_coherence" => 300, cycle::dictionary_coherence;
                "diagonal_invertible" => 100, cycle::diagonal_invertible;
                "v_compatibility" => 100, cycle::v_compatibility;
                "tower_compat" => 100, cycle::towers;
                "boundary_vanishing" => 40, cycle::boundary_vanishing;
            },
        }
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|x| x.name() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown suite {s:?}")))
    }
}

fn stream_key(suite: Suite, name: &str) -> u64 {
    // FNV-1a, so the key survives reordering of the property list
    let mut h: u64 = 0xcbf2_9ce4_8422_2325;
    for b in suite.name().bytes().chain(*b"/").chain(name.bytes()) {
        h ^= b as u64;
        h = h.wrapping_mul(0x0100_0000_01b3);
    }
    h & 0xffff_ffff
}

/// The RNG of one trial.
pub fn trial_rng(seed: u64, suite: Suite, name: &str, trial: usize) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream((stream_key(suite, name) << 32) | trial as u64);
    rng
}

pub fn run_property(suite: Suite, p: &Property, seed: u64, trials: usize) -> PropertyReport {
    let start = Instant::now();
    let outcomes: Vec<Outcome> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = trial_rng(seed, suite, p.name, k);
            match (p.check)(&mut rng, k) {
                Ok(o) => o,
                Err(e) => Outcome::Fail(format!("error: {e}")),
            }
        })
        .collect();
    let mut rep = PropertyReport {
        name: p.name,
        trials,
        passed: 0,
        skipped: 0,
        failed: 0,
        counterexample: None,
        elapsed: Duration::ZERO,
    };
    for (k, o) in outcomes.into_iter().enumerate() {
        match o {
            Outcome::Pass => rep.passed += 1,
            Outcome::Skip => rep.skipped += 1,
            Outcome::Fail(detail) => {
                rep.failed += 1;
                if rep.counterexample.is_none() {
                    rep.counterexample = Some(Counterexample { trial: k, detail });
                }
            }
        }
    }
    rep.elapsed = start.elapsed();
    rep
}

/// Runs every property of `suite`; `trials` overrides each default count.
pub fn run_suite(suite: Suite, seed: u64, trials: Option<usize>) -> SuiteReport {
    let properties =
        suite.properties().iter().map(|p| run_property(suite, p, seed, trials.unwrap_or(p.default_trials))).collect();
    SuiteReport { suite, seed, properties }
}

/// Runs a single named property.
pub fn run_named(suite: Suite, name: &str, seed: u64, trials: Option<usize>) -> Result<PropertyReport> {
    let p = suite
        .properties()
        .into_iter()
        .find(|p| p.name == name)
        .ok_or_else(|| Error::InvalidArgument(format!("suite {} has no property {name:?}", suite.name())))?;
    Ok(run_property(suite, &p, seed, trials.unwrap_or(p.default_trials)))
}

macro_rules! ensure {
    ($cond:expr, $($arg:tt)*) => {
        if !$cond {
            return Ok(Outcome::Fail(format!($($arg)*)));
        }
    };
}

fn vars(names: &[&str]) -> Vars {
    Vars::new(names).expect("fixed names")
}

fn xy() -> Vars {
    vars(&["x", "y"])
}

fn q(n: i64) -> Rational {
    Rational::from_int(n)
}

mod scalars {
    use super::*;

    pub fn field_axioms(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let (a, b, c) = (sample::field_elem(rng, &v), sample::field_elem(rng, &v), sample::field_elem(rng, &v));
        ensure!(a.add(&b).add(&c) == a.add(&b.add(&c)), "associativity: a={a} b={b} c={c}");
        ensure!(a.mul(&b.add(&c)) == a.mul(&b).add(&a.mul(&c)), "distributivity: a={a} b={b} c={c}");
        if !a.is_zero() {
            ensure!(a.mul(&a.inv()?).is_one(), "inverse: a={a}");
        }
        Ok(Outcome::Pass)
    }

    pub fn partial_leibniz(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let (a, b) = (sample::field_elem(rng, &v), sample::field_elem(rng, &v));
        let i = rng.random_range(0..v.len());
        let lhs = a.mul(&b).partial_derivative(i);
        let rhs = a.mul(&b.partial_derivative(i)).add(&b.mul(&a.partial_derivative(i)));
        ensure!(lhs == rhs, "d/d{}: a={a} b={b}", v.name(i));
        Ok(Outcome::Pass)
    }

    pub fn split_unit(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let a = match rng.random_range(0..4) {
            0 => FieldElem::zero(&v),
            1 => FieldElem::from_rational(&v, sample::small_rational(rng)),
            _ => sample::field_elem(rng, &v),
        };
        let (u1, u2) = a.split_unit();
        ensure!(!u1.is_zero() && !u2.is_zero(), "zero part for a={a}");
        ensure!(FieldElem::from_rational(&v, u1.clone()).add(&u2) == a, "u1 + u2 != a for a={a}");
        Ok(Outcome::Pass)
    }
}

mod forms {
    use super::*;

    /// degrees 1..=4 times levels 1..=6, over three variables
    pub const GRID: usize = 24;

    fn xyz() -> Vars {
        vars(&["x", "y", "z"])
    }

    pub fn reduce_kills_exact(rng: &mut ChaCha8Rng, k: usize) -> Result<Outcome> {
        let v = xyz();
        let (n, m) = (k % 4 + 1, (k / 4) % 6 + 1);
        let beta = sample::relative_form(rng, &v, n - 1, m);
        let r = beta.d().reduce_mod_exact()?;
        ensure!(r.is_zero(), "n={n} m={m} beta={beta:?} reduces to {r:?}");
        Ok(Outcome::Pass)
    }

    pub fn d_injective_on_canon(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xyz();
        let (n, m) = (rng.random_range(0..=3), rng.random_range(1..=6));
        let g = sample::nonzero_canon(rng, &v, n, m);
        ensure!(!g.embed().d().is_zero(), "d kills {g:?}");
        Ok(Outcome::Pass)
    }

    pub fn reduce_additive(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xyz();
        let (n, m) = (rng.random_range(0..=3), rng.random_range(1..=6));
        let a = sample::relative_form(rng, &v, n, m);
        let b = sample::relative_form(rng, &v, n, m);
        let lhs = a.add(&b).reduce_mod_exact()?;
        let rhs = a.reduce_mod_exact()?.add(&b.reduce_mod_exact()?);
        ensure!(lhs == rhs, "a={a:?} b={b:?}");
        Ok(Outcome::Pass)
    }

    pub fn reduce_fixes_canon(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xyz();
        let (n, m) = (rng.random_range(0..=3), rng.random_range(1..=6));
        let g = sample::canon(rng, &v, n, m);
        ensure!(g.embed().reduce_mod_exact()? == g, "g={g:?}");
        Ok(Outcome::Pass)
    }
}

mod trunc {
    use super::*;

    pub fn exp_log_inverse(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let m = rng.random_range(1..=8);
        let a = sample::nilpotent(rng, &v, m);
        ensure!(a.exp()?.log()? == a, "log(exp(a)) != a for a={a}");
        let u = sample::principal(rng, &v, m);
        ensure!(u.log()?.exp()? == u, "exp(log(u)) != u for u={u}");
        Ok(Outcome::Pass)
    }

    pub fn exp_log_homomorphism(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let m = rng.random_range(1..=8);
        let (a, b) = (sample::nilpotent(rng, &v, m), sample::nilpotent(rng, &v, m));
        ensure!(a.add(&b).exp()? == a.exp()?.mul(&b.exp()?), "exp(a+b): a={a} b={b}");
        let (u, w) = (sample::principal(rng, &v, m), sample::principal(rng, &v, m));
        ensure!(u.mul(&w).log()? == u.log()?.add(&w.log()?), "log(uw): u={u} w={w}");
        Ok(Outcome::Pass)
    }

    pub fn restriction_commutes(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let m = rng.random_range(2..=8);
        let l = rng.random_range(1..m);
        let a = sample::nilpotent(rng, &v, m);
        ensure!(a.exp()?.restrict(l)? == a.restrict(l)?.exp()?, "exp: a={a} l={l}");
        let u = sample::principal(rng, &v, m);
        ensure!(u.log()?.restrict(l)? == u.restrict(l)?.log()?, "log: u={u} l={l}");
        let w = sample::unit(rng, &v, m);
        ensure!(w.dlog()?.restrict(l)? == w.restrict(l)?.dlog()?, "dlog: w={w} l={l}");
        Ok(Outcome::Pass)
    }
}

mod witt {
    use super::*;

    fn pair(rng: &mut ChaCha8Rng) -> (WittVector, WittVector) {
        let v = xy();
        let m = rng.random_range(1..=8);
        (sample::witt(rng, &v, m), sample::witt(rng, &v, m))
    }

    pub fn gamma_homomorphism(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let (a, b) = pair(rng);
        ensure!(a.add(&b).gamma() == a.gamma().mul(&b.gamma()), "a={a:?} b={b:?}");
        Ok(Outcome::Pass)
    }

    pub fn gamma_inverse(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let (a, _) = pair(rng);
        ensure!(WittVector::gamma_inv(&a.gamma())? == a, "a={a:?}");
        Ok(Outcome::Pass)
    }

    pub fn ghost_ring_homomorphism(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let (a, b) = pair(rng);
        ensure!(a.add(&b).ghost() == a.ghost().add(&b.ghost()), "sum: a={a:?} b={b:?}");
        ensure!(a.mul(&b).ghost() == a.ghost().mul(&b.ghost()), "product: a={a:?} b={b:?}");
        Ok(Outcome::Pass)
    }

    pub fn unghost_ghost(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let (a, _) = pair(rng);
        ensure!(WittVector::unghost(&a.ghost()) == a, "a={a:?}");
        Ok(Outcome::Pass)
    }

    /// `-t γ'/γ = Σ ghost_j t^j`.
    pub fn log_derivative(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let (a, _) = pair(rng);
        let v = a.vars().clone();
        let m = a.level();
        let g = a.gamma();
        let t_dg: Vec<FieldElem> = g.coeffs().iter().enumerate().map(|(i, c)| c.scale(&q(-(i as i64)))).collect();
        let lhs = TruncElem::from_coeffs(&v, t_dg, m).mul(&g.inv()?);
        let gh = a.ghost();
        ensure!(lhs.coeff(0).is_zero(), "constant term for a={a:?}");
        for j in 1..=m {
            ensure!(lhs.coeff(j) == gh.comp(j), "coefficient {j} for a={a:?}");
        }
        Ok(Outcome::Pass)
    }

    pub fn frobenius_verschiebung(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let s = rng.random_range(1..=3);
        let l = rng.random_range(1..=8 / s);
        let a = sample::witt(rng, &v, l);
        let lhs = a.verschiebung(s, l * s)?.frobenius(s)?;
        ensure!(lhs.ghost() == a.ghost().scale(&q(s as i64)), "s={s} a={a:?}");
        Ok(Outcome::Pass)
    }

    pub fn restrict_verschiebung(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let s = rng.random_range(1..=3);
        let big = rng.random_range(s..=8);
        let small = rng.random_range(s..=big);
        let a = sample::witt(rng, &v, big / s);
        let lhs = a.verschiebung(s, big)?.restrict(small)?;
        let rhs = a.restrict(small / s)?.verschiebung(s, small)?;
        ensure!(lhs == rhs, "s={s} {big}->{small} a={a:?}");
        Ok(Outcome::Pass)
    }
}

mod drw {
    use super::*;

    fn bs(rng: &mut ChaCha8Rng, v: &Vars, k: usize) -> Vec<FieldElem> {
        (0..k).map(|_| sample::dlog_arg(rng, v)).collect()
    }

    pub fn zeta_coherence(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let m = rng.random_range(1..=6);
        let a = sample::witt(rng, &v, m);
        let k0 = rng.random_range(0..=2);
        let b = bs(rng, &v, k0);
        let mut built = DRWForm::from_witt(&a);
        for bi in &b {
            built = built.mul(&DRWForm::teich_dlog(bi, m)?);
        }
        ensure!(built == DRWForm::phi(&a, &b)?, "a={a:?} bs={b:?}");
        Ok(Outcome::Pass)
    }

    pub fn frobenius_d_verschiebung(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let s = rng.random_range(1..=3);
        let l = rng.random_range(1..=6 / s);
        let k0 = rng.random_range(0..=1);
        let w = sample::drw_form(rng, &v, k0, l);
        let lhs = w.verschiebung(s, l * s)?.d().frobenius(s)?;
        ensure!(lhs == w.d(), "s={s} w={w:?}");
        Ok(Outcome::Pass)
    }

    pub fn projection_formula(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let s = rng.random_range(1..=3);
        let l = rng.random_range(1..=6 / s);
        let k0 = rng.random_range(0..=1);
        let x = sample::drw_form(rng, &v, k0, l);
        let k0 = rng.random_range(0..=1);
        let beta = sample::drw_form(rng, &v, k0, l * s);
        let lhs = x.mul(&beta.frobenius(s)?).verschiebung(s, l * s)?;
        let rhs = x.verschiebung(s, l * s)?.mul(&beta);
        ensure!(lhs == rhs, "s={s} x={x:?} beta={beta:?}");
        Ok(Outcome::Pass)
    }

    pub fn d_squared_zero(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let k0 = rng.random_range(0..=1);
        let k1 = rng.random_range(1..=6);
        let w = sample::drw_form(rng, &v, k0, k1);
        ensure!(w.d().d().is_zero(), "w={w:?}");
        Ok(Outcome::Pass)
    }

    pub fn leibniz(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let m = rng.random_range(1..=6);
        let p = rng.random_range(0..=1);
        let a = sample::drw_form(rng, &v, p, m);
        let k0 = rng.random_range(0..=1);
        let b = sample::drw_form(rng, &v, k0, m);
        let sign = if p % 2 == 0 { q(1) } else { q(-1) };
        let rhs = a.d().mul(&b).add(&a.mul(&b.d()).scale(&sign));
        ensure!(a.mul(&b).d() == rhs, "a={a:?} b={b:?}");
        Ok(Outcome::Pass)
    }

    pub fn restriction_commutes(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let m = rng.random_range(2..=6);
        let l = rng.random_range(1..m);
        let k0 = rng.random_range(0..=1);
        let a = sample::drw_form(rng, &v, k0, m);
        let k0 = rng.random_range(0..=1);
        let b = sample::drw_form(rng, &v, k0, m);
        ensure!(a.d().restrict(l)? == a.restrict(l)?.d(), "d: a={a:?}");
        ensure!(a.mul(&b).restrict(l)? == a.restrict(l)?.mul(&b.restrict(l)?), "product: a={a:?} b={b:?}");
        let s = rng.random_range(1..=l);
        let c = sample::drw_form(rng, &v, 0, m / s);
        ensure!(c.verschiebung(s, m)?.restrict(l)? == c.restrict(l / s)?.verschiebung(s, l)?, "V_{s}: c={c:?}");
        ensure!(a.frobenius(s)?.restrict(l / s)? == a.restrict(l)?.frobenius(s)?, "F_{s}: a={a:?}");
        Ok(Outcome::Pass)
    }

    pub fn v_dlog_identity(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let s = rng.random_range(1..=3);
        let l = rng.random_range(1..=6 / s);
        let a = sample::witt(rng, &v, l);
        let k0 = rng.random_range(1..=2);
        let b = bs(rng, &v, k0);
        ensure!(DRWForm::v_dlog_identity_check(&a, &b, s, l * s)?, "s={s} a={a:?} bs={b:?}");
        Ok(Outcome::Pass)
    }

    /// `ker(W_{m+1} → W_m) = V_{m+1}(W_1)`.
    pub fn restriction_kernel(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let m = rng.random_range(1..=5);
        let deg = rng.random_range(0..=1);
        let eta = sample::drw_form(rng, &v, deg, 1);
        ensure!(eta.verschiebung(m + 1, m + 1)?.restrict(m)?.is_zero(), "V_{} image: eta={eta:?}", m + 1);
        let mut ghost = vec![DiffForm::zero(&v, deg); m];
        ghost.push(sample::diff_form(rng, &v, deg));
        let w = DRWForm::new(&v, deg, ghost)?;
        let pre = DRWForm::new(&v, deg, vec![w.comp(m + 1).scale(&Rational::new(1, m as i64 + 1)?)])?;
        ensure!(pre.verschiebung(m + 1, m + 1)? == w, "kernel element w={w:?}");
        Ok(Outcome::Pass)
    }
}

mod relmilnor {
    use super::*;

    /// symbol degrees 1..=3 times levels 1..=6, over two variables
    pub const GRID: usize = 18;

    fn units(rng: &mut ChaCha8Rng, v: &Vars, m: usize, k: usize) -> Vec<TruncElem> {
        (0..k).map(|_| sample::unit(rng, v, m)).collect()
    }

    fn sym(coef: i64, entries: Vec<TruncElem>) -> Result<RelSymbol> {
        RelSymbol::from_elems(q(coef), entries)
    }

    pub fn principal_entry_independence(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let m = rng.random_range(1..=6);
        let (u, w) = (sample::principal(rng, &v, m), sample::principal(rng, &v, m));
        let mut entries = vec![u, w];
        let k0 = rng.random_range(0..=1);
        entries.extend(units(rng, &v, m, k0));
        let s = sym(1, entries)?;
        ensure!(s.normal_form_at(0)? == s.normal_form_at(1)?, "s={s:?}");
        Ok(Outcome::Pass)
    }

    pub fn log_dlog_symmetric_exact(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let m = rng.random_range(1..=6);
        let (u, w) = (sample::principal(rng, &v, m), sample::principal(rng, &v, m));
        let f = u.log()?.as_form().wedge(&w.dlog()?).add(&w.log()?.as_form().wedge(&u.dlog()?));
        let r = f.reduce_mod_exact()?;
        ensure!(r.is_zero(), "u={u} w={w} gives {r:?}");
        Ok(Outcome::Pass)
    }

    pub fn bilinearity(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let m = rng.random_range(1..=6);
        let k0 = rng.random_range(0..=1);
        let rest = units(rng, &v, m, k0);
        let with = |head: Vec<TruncElem>| -> Result<RelMilnorClass> {
            let mut e = head;
            e.extend(rest.iter().cloned());
            sym(1, e)?.normal_form()
        };
        let (u, u2) = (sample::principal(rng, &v, m), sample::principal(rng, &v, m));
        ensure!(
            with(vec![u.mul(&u2)])? == with(vec![u.clone()])?.add(&with(vec![u2.clone()])?),
            "first slot: u={u} u'={u2} rest={rest:?}"
        );
        let (c, c2) = (sample::unit(rng, &v, m), sample::unit(rng, &v, m));
        ensure!(
            with(vec![u.clone(), c.mul(&c2)])?
                == with(vec![u.clone(), c.clone()])?.add(&with(vec![u.clone(), c2.clone()])?),
            "second slot: u={u} c={c} c'={c2} rest={rest:?}"
        );
        Ok(Outcome::Pass)
    }

    pub fn antisymmetry(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let m = rng.random_range(1..=6);
        let u = sample::principal(rng, &v, m);
        let w = sample::unit(rng, &v, m);
        let k0 = rng.random_range(0..=1);
        let rest = units(rng, &v, m, k0);
        let mut a = vec![u.clone(), w.clone()];
        a.extend(rest.iter().cloned());
        let mut b = vec![w.clone(), u.clone()];
        b.extend(rest.iter().cloned());
        ensure!(sym(1, a)?.normal_form()? == sym(1, b)?.normal_form()?.neg(), "u={u} v={w} rest={rest:?}");
        Ok(Outcome::Pass)
    }

    pub fn steinberg(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let m = rng.random_range(1..=6);
        let u = sample::principal(rng, &v, m);
        let k0 = rng.random_range(0..=1);
        let rest = units(rng, &v, m, k0);
        let minus_one = TruncElem::constant(FieldElem::from_int(&v, -1), m);
        for second in [u.clone(), minus_one] {
            let mut e = vec![u.clone(), second];
            e.extend(rest.iter().cloned());
            let c = sym(1, e)?.normal_form()?;
            ensure!(c.is_zero(), "u={u} rest={rest:?} gives {c:?}");
        }
        Ok(Outcome::Pass)
    }

    // one variable and m <= 4: the entries of the right side grow quickly
    pub fn symbol_identity(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = Vars::new(&["x"])?;
        let m = rng.random_range(1..=4);
        let a = sample::unit(rng, &v, m);
        let s = sample::unit(rng, &v, m);
        let b = sample::trunc(rng, &v, m, 0.7);
        let tau = sample::nilpotent(rng, &v, m);
        match elem_identity_relative(&a, &b, &s, &tau) {
            Ok((lhs, rhs)) => {
                ensure!(lhs.normal_form()? == rhs.normal_form()?, "a={a} b={b} s={s} tau={tau}");
                Ok(Outcome::Pass)
            }
            Err(Error::NoUnitEntry(_)) => Ok(Outcome::Skip),
            Err(e) => Err(e),
        }
    }

    pub fn theta_roundtrip(rng: &mut ChaCha8Rng, k: usize) -> Result<Outcome> {
        let v = xy();
        let (n, m) = (k % 3 + 1, (k / 3) % 6 + 1);
        let a = sample::nilpotent(rng, &v, m);
        let bs: Vec<FieldElem> = (0..n - 1).map(|_| sample::dlog_arg(rng, &v)).collect();
        let class = theta(&a, &bs)?.normal_form()?;
        let w = DiffForm::dlog_wedge(&v, &bs)?;
        for i in 1..=m {
            ensure!(*class.canon().comp(i) == w.mul_fn(a.coeff(i)), "n={n} m={m} a={a} bs={bs:?}");
        }
        Ok(Outcome::Pass)
    }

    pub fn theta_section_sum(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let (n, m) = (rng.random_range(1..=3), rng.random_range(1..=6));
        let g = sample::canon(rng, &v, n - 1, m);
        let mut acc = RelMilnorClass::zero(&v, n, m);
        for s in theta_section(&g)? {
            acc = acc.add(&s.normal_form()?);
        }
        ensure!(acc.canon() == &g, "g={g:?}");
        Ok(Outcome::Pass)
    }
}

mod reciprocity {
    use super::*;

    fn frame(rng: &mut ChaCha8Rng) -> Result<Frame> {
        let names: &[&str] = if rng.random_bool(0.5) { &["x", "u"] } else { &["x", "y", "u"] };
        Frame::new(&vars(names))
    }

    fn realizes_zero(frame: &Frame, sum: &[FieldSymbol]) -> Result<bool> {
        Ok(realization_zero(frame.base(), sum, CoeffRing::Z)?.consistent)
    }

    fn any_point(rng: &mut ChaCha8Rng, frame: &Frame, sum: &[FieldSymbol]) -> Point {
        let (pts, _) = support(frame, sum);
        if pts.is_empty() || rng.random_bool(0.2) {
            return Point::Finite(FieldElem::from_rational(frame.base(), sample::small_rational(rng)));
        }
        pts[rng.random_range(0..pts.len())].clone()
    }

    pub fn weil(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let fr = frame(rng)?;
        let n = rng.random_range(1..=3);
        let sum: Vec<FieldSymbol> =
            (0..rng.random_range(1..=2)).map(|_| sample::split_symbol(rng, fr.ext(), n, 4)).collect();
        let rep = weil_reciprocity_check(&fr, &sum, CoeffRing::Z)?;
        ensure!(rep.holds, "sum={sum:?} boundary={:?}", rep.boundary.total());
        Ok(Outcome::Pass)
    }

    pub fn tame_multilinear(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let fr = frame(rng)?;
        let n = rng.random_range(1..=2);
        let s = sample::split_symbol(rng, fr.ext(), n, 3);
        let g = sample::split_in_u(rng, fr.ext(), 2);
        let slot = rng.random_range(0..n);
        let mut prod = s.clone();
        prod.entries[slot] = prod.entries[slot].mul(&g);
        let mut other = s.clone();
        other.entries[slot] = g;
        let p = any_point(rng, &fr, &[prod.clone()]);
        let mut diff = tame_symbol(&fr, &p, &prod)?;
        diff.extend(tame_symbol(&fr, &p, &s)?.into_iter().map(|t| t.neg()));
        diff.extend(tame_symbol(&fr, &p, &other)?.into_iter().map(|t| t.neg()));
        ensure!(realizes_zero(&fr, &diff)?, "slot {slot} of {prod:?} at {p}");
        Ok(Outcome::Pass)
    }

    pub fn tame_unit_entries(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let fr = frame(rng)?;
        let k0 = rng.random_range(1..=3);
        let s = sample::split_symbol(rng, fr.ext(), k0, 3);
        for _ in 0..6 {
            let p = Point::Finite(FieldElem::from_rational(fr.base(), sample::small_rational(rng)));
            let mut units = true;
            for e in &s.entries {
                units &= crate::milnorfield::ord(&fr, e, &p)? == 0;
            }
            if units {
                let t = tame_symbol(&fr, &p, &s)?;
                ensure!(realizes_zero(&fr, &t)?, "{s:?} at {p} gives {t:?}");
                return Ok(Outcome::Pass);
            }
        }
        Ok(Outcome::Skip)
    }

    pub fn tame_antisymmetry(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let fr = frame(rng)?;
        let k0 = rng.random_range(2..=3);
        let s = sample::split_symbol(rng, fr.ext(), k0, 3);
        let mut swapped = s.clone();
        swapped.entries.swap(0, 1);
        let p = any_point(rng, &fr, std::slice::from_ref(&s));
        let mut sum = tame_symbol(&fr, &p, &s)?;
        sum.extend(tame_symbol(&fr, &p, &swapped)?);
        ensure!(realizes_zero(&fr, &sum)?, "{s:?} at {p}");
        Ok(Outcome::Pass)
    }
}

mod rewriting {
    use super::*;

    fn ring_sample(rng: &mut ChaCha8Rng, v: &Vars) -> [FieldElem; 4] {
        [sample::dlog_arg(rng, v), sample::dlog_arg(rng, v), sample::dlog_arg(rng, v), sample::dlog_arg(rng, v)]
    }

    pub fn identity_generic(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let [a, b, s, tau] = ring_sample(rng, &v);
        match elem_identity_instance(&a, &b, &s, &tau) {
            Ok((lhs, rhs)) => {
                let diff = vec![lhs, rhs.neg()];
                ensure!(realization_zero(&v, &diff, CoeffRing::Z)?.consistent, "a={a} b={b} s={s} tau={tau}");
                Ok(Outcome::Pass)
            }
            Err(Error::ZeroEntry | Error::DegenerateBranch) => Ok(Outcome::Skip),
            Err(e) => Err(e),
        }
    }

    /// With `1 + (1+bτ)as = 0` the left side is `{1+as, -1/(as)}`, which
    /// is zero by the Steinberg relation.
    pub fn identity_degenerate(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = xy();
        let [a, b, s, _] = ring_sample(rng, &v);
        let one = FieldElem::one(&v);
        let as_ = a.mul(&s);
        let tau = as_.inv()?.neg().sub(&one).div(&b)?;
        if tau.is_zero() || one.add(&as_).is_zero() {
            return Ok(Outcome::Skip);
        }
        let got = elem_identity_instance(&a, &b, &s, &tau);
        ensure!(got == Err(Error::DegenerateBranch), "a={a} b={b} s={s}: not flagged");
        let lhs = FieldSymbol::unit(vec![one.add(&as_), one.add(&b.mul(&tau))])?;
        ensure!(realization_zero(&v, &[lhs], CoeffRing::Z)?.consistent, "a={a} b={b} s={s}");
        Ok(Outcome::Pass)
    }

    /// A symbol over `Q(x)(p)` or `Q(x,y)(p)` with entries of prescribed
    /// `ord_p(y - 1)` summing to at least `m`.
    fn instance(rng: &mut ChaCha8Rng) -> Result<(Frame, FieldSymbol, i64)> {
        let names: &[&str] = if rng.random_bool(0.6) { &["x", "p"] } else { &["x", "y", "p"] };
        let ext = vars(names);
        let fr = Frame::new(&ext)?;
        let base = fr.base().clone();
        let n = rng.random_range(1..=3);
        let m = rng.random_range(1..=3i64);
        let mut ords: Vec<i64> = (0..n).map(|_| rng.random_range(0..=m)).collect();
        while ords.iter().sum::<i64>() < m {
            let i = rng.random_range(0..n);
            ords[i] += 1;
        }
        let p = fr.var();
        let one = FieldElem::one(&ext);
        let mut entries = Vec::with_capacity(n);
        for &o in &ords {
            let e = if o == 0 {
                let b = loop {
                    let b = sample::dlog_arg(rng, &base);
                    if !b.is_one() {
                        break b.embed(&ext);
                    }
                };
                if rng.random_bool(0.5) {
                    b.mul(&one.add(&p))
                } else {
                    b
                }
            } else {
                let c = sample::dlog_arg(rng, &base).embed(&ext);
                let mut g = one.clone();
                if rng.random_bool(0.4) {
                    g = g.add(&p.scale(&sample::nonzero_rational(rng)));
                }
                one.add(&c.mul(&p.pow(o)).mul(&g))
            };
            entries.push(e);
        }
        Ok((fr, FieldSymbol::new(q(1), entries)?, m))
    }

    fn filtration(rng: &mut ChaCha8Rng, ring: CoeffRing) -> Result<Outcome> {
        let (fr, s, m) = instance(rng)?;
        let terms = rewrite_filtration(&fr, &s, m, ring)?;
        let chk = verify_rewrite(&fr, &s, m, &terms, ring)?;
        ensure!(chk.ok(ring), "m={m} sym={s:?} terms={terms:?} check={chk:?}");
        Ok(Outcome::Pass)
    }

    pub fn filtration_z(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        filtration(rng, CoeffRing::Z)
    }

    pub fn filtration_q(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        filtration(rng, CoeffRing::Q)
    }
}

mod cycle {
    use super::*;

    fn shape(rng: &mut ChaCha8Rng) -> (Vars, usize, usize) {
        let r = rng.random_range(1..=3);
        let v = vars(&["x", "y", "z"][..r]);
        let n = rng.random_range(1..=r + 1);
        (v, n, rng.random_range(1..=6))
    }

    pub fn dictionary_coherence(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let (v, n, m) = shape(rng);
        let z = sample::cycle_gen(rng, &v, n, m);
        ensure!(drw_to_milnor_diagonal(&cycle_to_drw(&z, m)?) == cyc_milnor(&z, m)?, "m={m} z={z}");
        Ok(Outcome::Pass)
    }

    pub fn diagonal_invertible(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let (v, n, m) = shape(rng);
        let w = sample::drw_form(rng, &v, n - 1, m);
        ensure!(milnor_to_drw_diagonal(&drw_to_milnor_diagonal(&w)) == w, "w={w:?}");
        let c = RelMilnorClass::from_canon(sample::canon(rng, &v, n - 1, m));
        ensure!(drw_to_milnor_diagonal(&milnor_to_drw_diagonal(&c)) == c, "c={c:?}");
        Ok(Outcome::Pass)
    }

    /// `(1 - a t^s; b)` goes to `V_s([a]) dlog[b]` under the dictionary.
    pub fn v_compatibility(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let (v, n, m) = shape(rng);
        let s = rng.random_range(1..=m);
        let a = sample::nonzero_field_elem(rng, &v);
        let bs: Vec<FieldElem> = (0..n - 1).map(|_| sample::dlog_arg(rng, &v)).collect();
        let mut f = vec![FieldElem::one(&v)];
        f.resize(s, FieldElem::zero(&v));
        f.push(a.neg());
        let z = CycleGen::new(&v, f, bs.clone(), 1)?;
        let va = WittVector::teichmuller(&a, m / s).verschiebung(s, m)?;
        let w = DRWForm::phi(&va, &bs)?;
        ensure!(drw_to_milnor_diagonal(&w) == cyc_milnor(&z, m)?, "m={m} z={z}");
        Ok(Outcome::Pass)
    }

    pub fn towers(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let (v, n, m_hi) = shape(rng);
        let m_hi = m_hi.max(2);
        let m_lo = rng.random_range(1..m_hi);
        let zs: Vec<CycleGen> = (0..rng.random_range(1..=3)).map(|_| sample::cycle_gen(rng, &v, n, m_hi)).collect();
        ensure!(tower_compat(&zs, &v, n, m_hi, m_lo)?, "{m_hi} -> {m_lo}: {zs:?}");
        Ok(Outcome::Pass)
    }

    pub fn boundary_vanishing(rng: &mut ChaCha8Rng, _: usize) -> Result<Outcome> {
        let v = vars(&["x"]);
        let n = rng.random_range(1..=2);
        let (w, top) = sample::corpus_curve(rng, &v, n);
        let m = rng.random_range(1..=top.min(4));
        let rep = verify_boundary_vanishing(&w, m)?;
        ensure!(!rep.vacuous, "modulus {m} fails on {w:?}");
        ensure!(rep.vanishes, "m={m} curve={w:?} boundary={:?}", rep.boundary.cycles);
        Ok(Outcome::Pass)
    }
}
