use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use drwk::addchow::{
    cyc_milnor, cyc_witt, cycle_to_drw, drw_to_milnor_diagonal, modulus_check_curve, verify_boundary_vanishing,
    CycleGen, ParamCurve,
};
use drwk::drw::DRWForm;
use drwk::json;
use drwk::relmilnor::{normal_form, CoeffRing, RelMilnorClass, RelSymbol, Shape};
use drwk::scalars::parse::{identifiers, parse_field_elem, split_top_level, strip_brackets};
use drwk::scalars::{FieldElem, Rational, Vars};
use drwk::trunc::TruncElem;
use drwk::verify::{run_named, run_suite, Suite, SuiteReport};
use drwk::witt::{GhostTuple, WittVector};
use drwk::{Error, Result};

/// Exact computations with de Rham-Witt forms, relative Milnor K-groups of
/// F[t]/(t^(m+1)) and additive 0-cycles, over F = Q(x_1, ..., x_r).
#[derive(Parser)]
#[command(name = "drwk", version)]
struct Cli {
    #[command(flatten)]
    session: Session,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct Session {
    /// Comma-separated variable names; detected from the input when omitted.
    #[arg(long, global = true)]
    vars: Option<String>,
    /// Truncation level m.
    #[arg(long, global = true)]
    m: Option<usize>,
    /// Symbol degree n (checked against the input when given).
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Coefficient ring of symbol sums: z or q.
    #[arg(long, global = true, default_value = "z")]
    coeff: String,
    #[arg(long, global = true, default_value_t = 42)]
    seed: u64,
    /// Trials per property, overriding the suite defaults.
    #[arg(long, global = true)]
    trials: Option<usize>,
    /// Verification suite: all, or one of the module suites.
    #[arg(long, global = true, default_value = "all")]
    suite: String,
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
}

#[derive(Subcommand)]
enum Cmd {
    /// Normal form of a sum of relative Milnor symbols.
    Nf {
        /// Symbol sum such as "{1+t, x} - 2{1+x*t, y}".
        #[arg(long)]
        symbol: Option<String>,
        /// JSON array of {"coef", "entries"} objects.
        #[arg(long)]
        json: Option<String>,
    },
    /// Class of additive 0-cycles "(f(t); b_1, ..., b_k)" (repeatable).
    Cyc {
        #[arg(long = "gen", required = true)]
        gens: Vec<String>,
    },
    /// Big Witt vector operations; vectors are written "(a_1, ..., a_m)".
    Witt {
        #[command(subcommand)]
        op: WittOp,
    },
    /// de Rham-Witt forms a dlog[b_1]...dlog[b_k], given by a Witt vector and the b's.
    Drw {
        #[command(subcommand)]
        op: DrwOp,
    },
    /// Modulus check and boundary vanishing for a curve u -> (g_0, ..., g_n).
    Boundary {
        /// Coordinates over vars + [u], g_0 first (repeatable).
        #[arg(long = "g", required = true)]
        g: Vec<String>,
        /// Test at modulus (n+1)m instead of m.
        #[arg(long)]
        pro: bool,
    },
    /// Run randomized property suites.
    Verify {
        /// Run only this property of the chosen suite.
        #[arg(long)]
        property: Option<String>,
    },
}

#[derive(Subcommand)]
enum WittOp {
    Ghost { a: String },
    Unghost { g: String },
    Add { a: String, b: String },
    Mul { a: String, b: String },
    /// prod (1 - a_i t^i)
    Gamma { a: String },
    /// From a principal unit written as a polynomial in t.
    GammaInv { u: String },
    Teich { a: String },
    #[command(name = "V")]
    V {
        #[arg(long)]
        s: usize,
        a: String,
    },
    #[command(name = "F")]
    F {
        #[arg(long)]
        s: usize,
        a: String,
    },
    Restrict {
        #[arg(long)]
        to: usize,
        a: String,
    },
    Decompose { a: String },
}

#[derive(Args)]
struct DrwInput {
    /// Witt vector a.
    a: String,
    /// Entries b_1, ..., b_k.
    bs: Vec<String>,
}

#[derive(Subcommand)]
enum DrwOp {
    Phi(DrwInput),
    D(DrwInput),
    #[command(name = "V")]
    V {
        #[arg(long)]
        s: usize,
        #[command(flatten)]
        input: DrwInput,
    },
    #[command(name = "F")]
    F {
        #[arg(long)]
        s: usize,
        #[command(flatten)]
        input: DrwInput,
    },
    Restrict {
        #[arg(long)]
        to: usize,
        #[command(flatten)]
        input: DrwInput,
    },
    /// Image in relative Milnor K-theory under c_i = -(1/i) w_i.
    ToMilnor(DrwInput),
}

struct Output {
    json: Value,
    human: String,
    ok: bool,
}

impl Output {
    fn new(json: Value, human: String) -> Self {
        Output { json, human, ok: true }
    }
}

fn resolve_vars(session: &Session, inputs: &[&str]) -> Result<Vars> {
    if let Some(list) = &session.vars {
        return Vars::parse_list(list);
    }
    let mut names: Vec<String> = Vec::new();
    for s in inputs {
        // symbol and generator syntax use brackets and separators the
        // expression tokenizer does not know
        let cleaned: String = s.chars().map(|c| if "{}[];,".contains(c) { ' ' } else { c }).collect();
        for part in cleaned.split(' ') {
            for id in identifiers(part)? {
                if id != "t" && id != "u" && !names.contains(&id) {
                    names.push(id);
                }
            }
        }
    }
    names.sort();
    Vars::new(&names)
}

fn string_leaves<'a>(v: &'a Value, out: &mut Vec<&'a str>) {
    match v {
        Value::String(s) => out.push(s),
        Value::Array(a) => a.iter().for_each(|x| string_leaves(x, out)),
        Value::Object(o) => o.iter().filter(|(k, _)| k.as_str() != "coef").for_each(|(_, x)| string_leaves(x, out)),
        _ => {}
    }
}

fn coeff_ring(session: &Session) -> Result<CoeffRing> {
    session.coeff.parse()
}

/// Splits a sum of symbols at top-level `+`/`-`, returning signed terms.
fn split_sum(s: &str) -> Vec<(bool, &str)> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    let mut neg = false;
    for (i, c) in s.char_indices() {
        match c {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            '+' | '-' if depth == 0 => {
                let term = s[start..i].trim();
                if !term.is_empty() {
                    out.push((neg, term));
                }
                neg = c == '-';
                start = i + 1;
            }
            _ => {}
        }
    }
    let term = s[start..].trim();
    if !term.is_empty() || out.is_empty() {
        out.push((neg, term));
    }
    out
}

/// `[c][*]{e_1, ..., e_n}`.
fn parse_symbol(term: &str, neg: bool, vars: &Vars, m: usize) -> Result<RelSymbol> {
    let open = term.find('{').ok_or_else(|| Error::Parse(format!("expected {{...}} in {term:?}")))?;
    let prefix = term[..open].trim().trim_end_matches('*').trim();
    let mut coef = if prefix.is_empty() { Rational::one() } else { prefix.parse::<Rational>()? };
    if neg {
        coef = -coef;
    }
    let body = strip_brackets(&term[open..], '{', '}')?;
    let entries = split_top_level(body, ',')
        .into_iter()
        .map(|e| TruncElem::parse(e, vars, m))
        .collect::<Result<Vec<_>>>()?;
    RelSymbol::from_elems(coef, entries)
}

fn class_output(c: &RelMilnorClass) -> Output {
    let human = if c.is_zero() { "0".to_string() } else { format!("{:?}", c.canon()) };
    Output::new(
        json!({"degree": c.degree(), "level": c.level(), "zero": c.is_zero(), "canon": json::class(c)}),
        human,
    )
}

fn cmd_nf(session: &Session, symbol: Option<&str>, js: Option<&str>) -> Result<Output> {
    let m = session.m.unwrap_or(1);
    let ring = coeff_ring(session)?;
    let (vars, terms) = match (symbol, js) {
        (Some(s), None) => {
            let vars = resolve_vars(session, &[s])?;
            let terms =
                split_sum(s).into_iter().map(|(neg, t)| parse_symbol(t, neg, &vars, m)).collect::<Result<Vec<_>>>()?;
            (vars, terms)
        }
        (None, Some(j)) => {
            let v: Value = serde_json::from_str(j).map_err(|e| Error::Json(e.to_string()))?;
            let items = match &v {
                Value::Array(a) => a.clone(),
                other => vec![other.clone()],
            };
            let mut leaves = Vec::new();
            string_leaves(&v, &mut leaves);
            let vars = resolve_vars(session, &leaves)?;
            let terms = items.iter().map(|it| json::parse_rel_symbol(it, &vars, m)).collect::<Result<Vec<_>>>()?;
            (vars, terms)
        }
        _ => return Err(Error::InvalidArgument("give exactly one of --symbol and --json".into())),
    };
    let n = terms[0].degree();
    if let Some(want) = session.n {
        if want != n {
            return Err(Error::Mismatch(format!("--n {want} but the symbols have degree {n}")));
        }
    }
    let class = normal_form(&Shape { vars, n, m }, &terms, ring)?;
    Ok(class_output(&class))
}

fn cmd_cyc(session: &Session, gens: &[String]) -> Result<Output> {
    let m = session.m.unwrap_or(1);
    let refs: Vec<&str> = gens.iter().map(String::as_str).collect();
    let vars = resolve_vars(session, &refs)?;
    let zs = gens.iter().map(|g| CycleGen::parse(g, &vars)).collect::<Result<Vec<_>>>()?;
    let n = zs[0].n();
    if zs.iter().any(|z| z.n() != n) {
        return Err(Error::Mismatch("generators of different dimension".into()));
    }
    if let Some(want) = session.n {
        if want != n {
            return Err(Error::Mismatch(format!("--n {want} but the generators have n = {n}")));
        }
    }
    let mut class = RelMilnorClass::zero(&vars, n, m);
    let mut drw = DRWForm::zero(&vars, n - 1, m);
    for z in &zs {
        class = class.add(&cyc_milnor(z, m)?);
        drw = drw.add(&cycle_to_drw(z, m)?);
    }
    let mut out = class_output(&class);
    out.json["drw"] = json::drw(&drw);
    out.json["diagonal_agrees"] = json!(drw_to_milnor_diagonal(&drw) == class);
    if n == 1 {
        let mut w = WittVector::zero(&vars, m);
        for z in &zs {
            w = w.add(&cyc_witt(z, m)?);
        }
        out.json["witt"] = json::witt(&w);
        out.human.push_str(&format!("\nwitt {:?}", w));
    }
    Ok(out)
}

fn parse_tuple(s: &str, vars: &Vars) -> Result<Vec<FieldElem>> {
    let inner = strip_brackets(s, '(', ')')?;
    split_top_level(inner, ',').into_iter().map(|e| parse_field_elem(e, vars)).collect()
}

fn parse_witt(s: &str, vars: &Vars, m: Option<usize>) -> Result<WittVector> {
    let mut coords = parse_tuple(s, vars)?;
    if let Some(m) = m {
        if coords.len() > m {
            return Err(Error::Mismatch(format!("{} coordinates at level {m}", coords.len())));
        }
        coords.resize(m, FieldElem::zero(vars));
    }
    Ok(WittVector::new(vars, coords))
}

fn witt_output(a: &WittVector) -> Output {
    Output::new(json::witt(a), format!("{a:?}"))
}

fn cmd_witt(session: &Session, op: &WittOp) -> Result<Output> {
    let inputs: Vec<&str> = match op {
        WittOp::Ghost { a }
        | WittOp::Unghost { g: a }
        | WittOp::Gamma { a }
        | WittOp::GammaInv { u: a }
        | WittOp::Teich { a }
        | WittOp::V { a, .. }
        | WittOp::F { a, .. }
        | WittOp::Restrict { a, .. }
        | WittOp::Decompose { a } => vec![a],
        WittOp::Add { a, b } | WittOp::Mul { a, b } => vec![a, b],
    };
    let vars = resolve_vars(session, &inputs)?;
    let m = session.m;
    let w = |s: &str| parse_witt(s, &vars, m);
    Ok(match op {
        WittOp::Ghost { a } => {
            let g = w(a)?.ghost();
            Output::new(json::ghost(&g), format!("{g:?}"))
        }
        WittOp::Unghost { g } => {
            let comps = parse_tuple(g, &vars)?;
            witt_output(&WittVector::unghost(&GhostTuple::new(&vars, comps)))
        }
        WittOp::Add { a, b } => witt_output(&binary(w(a)?, w(b)?, WittVector::add)?),
        WittOp::Mul { a, b } => witt_output(&binary(w(a)?, w(b)?, WittVector::mul)?),
        WittOp::Gamma { a } => {
            let g = w(a)?.gamma();
            Output::new(json::trunc(&g), g.to_string())
        }
        WittOp::GammaInv { u } => {
            let level = m.ok_or_else(|| Error::InvalidArgument("gamma-inv needs --m".into()))?;
            witt_output(&WittVector::gamma_inv(&TruncElem::parse(u, &vars, level)?)?)
        }
        WittOp::Teich { a } => {
            let level = m.ok_or_else(|| Error::InvalidArgument("teich needs --m".into()))?;
            witt_output(&WittVector::teichmuller(&parse_field_elem(a, &vars)?, level))
        }
        WittOp::V { s, a } => {
            let a = parse_witt(a, &vars, None)?;
            let level = m.unwrap_or(a.level() * s);
            witt_output(&a.verschiebung(*s, level)?)
        }
        WittOp::F { s, a } => witt_output(&w(a)?.frobenius(*s)?),
        WittOp::Restrict { to, a } => witt_output(&w(a)?.restrict(*to)?),
        WittOp::Decompose { a } => {
            let parts = w(a)?.decompose();
            let js: Vec<Value> = parts.iter().map(|(i, c)| json!({"s": i, "a": json::field(c)})).collect();
            let human: Vec<String> = parts.iter().map(|(i, c)| format!("V_{i}[{c}]")).collect();
            Output::new(Value::Array(js), if human.is_empty() { "0".into() } else { human.join(" + ") })
        }
    })
}

fn binary(a: WittVector, b: WittVector, f: fn(&WittVector, &WittVector) -> WittVector) -> Result<WittVector> {
    if a.level() != b.level() {
        return Err(Error::Mismatch(format!("levels {} and {}", a.level(), b.level())));
    }
    Ok(f(&a, &b))
}

fn drw_output(w: &DRWForm) -> Output {
    Output::new(json::drw(w), format!("{w:?}"))
}

fn cmd_drw(session: &Session, op: &DrwOp) -> Result<Output> {
    let input = match op {
        DrwOp::Phi(i) | DrwOp::D(i) | DrwOp::ToMilnor(i) => i,
        DrwOp::V { input, .. } | DrwOp::F { input, .. } | DrwOp::Restrict { input, .. } => input,
    };
    let mut refs: Vec<&str> = vec![&input.a];
    refs.extend(input.bs.iter().map(String::as_str));
    let vars = resolve_vars(session, &refs)?;
    let a = parse_witt(&input.a, &vars, session.m)?;
    let bs = input.bs.iter().map(|b| parse_field_elem(b, &vars)).collect::<Result<Vec<_>>>()?;
    let w = DRWForm::phi(&a, &bs)?;
    Ok(match op {
        DrwOp::Phi(_) => drw_output(&w),
        DrwOp::D(_) => drw_output(&w.d()),
        DrwOp::V { s, .. } => drw_output(&w.verschiebung(*s, w.level() * s)?),
        DrwOp::F { s, .. } => drw_output(&w.frobenius(*s)?),
        DrwOp::Restrict { to, .. } => drw_output(&w.restrict(*to)?),
        DrwOp::ToMilnor(_) => class_output(&drw_to_milnor_diagonal(&w)),
    })
}

fn cmd_boundary(session: &Session, g: &[String], pro: bool) -> Result<Output> {
    let m = session.m.unwrap_or(1);
    let refs: Vec<&str> = g.iter().map(String::as_str).collect();
    let vars = resolve_vars(session, &refs)?;
    let w = ParamCurve::parse(&refs, &vars)?;
    let level = if pro { (w.n() + 1) * m } else { m };
    let modulus = modulus_check_curve(&w, level)?;
    let rep = verify_boundary_vanishing(&w, level)?;
    let cycles: Vec<Value> = rep.boundary.cycles.iter().map(json::cycle_gen).collect();
    let class = rep.class.as_ref().map(json::class);
    let js = json!({
        "curve": json::curve(&w),
        "level": level,
        "modulus": modulus,
        "vacuous": rep.vacuous,
        "boundary": cycles,
        "at_infinity": rep.boundary.at_infinity,
        "on_degenerate_face": rep.boundary.on_degenerate_face,
        "class": class,
        "vanishes": rep.vanishes,
    });
    let human = if rep.vacuous {
        format!("modulus condition fails at level {level}; nothing to test")
    } else {
        let cs: Vec<String> = rep.boundary.cycles.iter().map(|z| z.to_string()).collect();
        format!("boundary {}\nclass at level {level} is {}", cs.join(" + "), if rep.vanishes { "0" } else { "nonzero" })
    };
    Ok(Output { json: js, human, ok: rep.vanishes })
}

fn cmd_verify(session: &Session, property: Option<&str>) -> Result<Output> {
    if let Some(name) = property {
        let suite: Suite = session.suite.parse()?;
        let p = run_named(suite, name, session.seed, session.trials)?;
        let r = SuiteReport { suite, seed: session.seed, properties: vec![p] };
        let ok = r.ok();
        return Ok(Output { json: r.to_json(), human: r.to_string().trim_end().to_string(), ok });
    }
    let suites: Vec<Suite> = if session.suite == "all" { Suite::ALL.to_vec() } else { vec![session.suite.parse()?] };
    let reports: Vec<SuiteReport> = suites.iter().map(|&s| run_suite(s, session.seed, session.trials)).collect();
    let ok = reports.iter().all(SuiteReport::ok);
    let status = if ok { "PASS" } else { "FAIL" };
    let js = if reports.len() == 1 {
        reports[0].to_json()
    } else {
        json!({
            "suite": "all",
            "seed": session.seed,
            "status": status,
            "suites": reports.iter().map(SuiteReport::to_json).collect::<Vec<_>>(),
        })
    };
    let mut human: String = reports.iter().map(|r| r.to_string()).collect();
    if reports.len() > 1 {
        human.push_str(&format!("all suites: {status}\n"));
    }
    Ok(Output { json: js, human: human.trim_end().to_string(), ok })
}

fn run(cli: &Cli) -> Result<Output> {
    let s = &cli.session;
    match &cli.cmd {
        Cmd::Nf { symbol, json } => cmd_nf(s, symbol.as_deref(), json.as_deref()),
        Cmd::Cyc { gens } => cmd_cyc(s, gens),
        Cmd::Witt { op } => cmd_witt(s, op),
        Cmd::Drw { op } => cmd_drw(s, op),
        Cmd::Boundary { g, pro } => cmd_boundary(s, g, *pro),
        Cmd::Verify { property } => cmd_verify(s, property.as_deref()),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            if cli.session.pretty {
                println!("{}", out.human);
            } else {
                println!("{}", out.json);
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => {
            println!("{}", json!({"error": e.code(), "message": e.to_string()}));
            ExitCode::from(2)
        }
    }
}
