//! Command-line front end for `opmod`: the expression grammar, canonical
//! text and JSON encodings, and one subcommand per library operation.
//!
//! [`run`] is the whole program minus process plumbing, so it can be driven
//! from tests with in-memory streams.

#![allow(clippy::result_large_err)]

pub mod expr;
pub mod json;

use std::io::{Read, Write};
use std::panic::{self, AssertUnwindSafe};

use clap::{Parser, Subcommand, ValueEnum};
use opmod::cohomology::Cochain1;
use opmod::density::transvectant;
use opmod::intertwiner::{apply_t, critical_set, solve_diagonal_intertwiner, IntertwinerVerdict, Status};
use opmod::symbol::{derive_scheme, render_scheme};
use opmod::{Density, DiffOp, NormalSymbol, Scalar, SymbolCalculus, VectorField};
use serde_json::Value;

use crate::expr::{parse_operator, parse_poly, parse_scalar, parse_symbol, ParseError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PARSE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "opmod",
    version,
    about = "Exact computations on modules of differential operators on the line"
)]
struct Cli {
    /// Emit JSON instead of canonical text
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// ad L_X(A) = [L_X, A] on D^k_λ
    Act {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        field: String,
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        /// Store the operator at this order
        #[arg(long)]
        k: Option<usize>,
    },
    /// Normal symbol of an operator
    Symbol {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Operator with the given normal symbol
    Unsymbol {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        symbol: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// Formal adjoint, from D^k_λ to D^k_{−1−λ}
    Adjoint {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        op: String,
        #[arg(long)]
        k: Option<usize>,
    },
    /// The intertwining operator D³_λ → D³_μ
    Intertwine {
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        op: String,
    },
    /// Decide whether D^k_λ and D^k_μ are isomorphic
    Classify {
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
    },
    /// Critical weights of D^k
    Critical {
        #[arg(long)]
        k: usize,
    },
    /// Transvectant j_n(φ, ψ) of densities in F_λ and F_μ
    Transvectant {
        #[arg(long)]
        n: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true)]
        mu: String,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
        #[arg(long, allow_hyphen_values = true)]
        psi: String,
    },
    /// Check the cocycle identity on a monomial basis
    CocycleCheck {
        #[arg(long, value_enum)]
        which: Which,
        #[arg(long, allow_hyphen_values = true)]
        s: String,
        /// Largest degree of the vector fields X, Y
        #[arg(long, default_value_t = 8)]
        pmax: usize,
        /// Largest degree of the density a
        #[arg(long, default_value_t = 6)]
        qmax: usize,
    },
    /// The normal symbol coefficient table α[j][i]
    Scheme {
        #[arg(long)]
        k: usize,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Which {
    C3,
    C4,
    Tilde3,
    Tilde4,
}

#[derive(Debug, thiserror::Error)]
enum CliError {
    #[error("{flag}: {source}")]
    Parse {
        flag: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("{flag}: {message}")]
    Payload { flag: &'static str, message: String },
    #[error("{0}")]
    Usage(String),
    #[error("{0}")]
    Domain(#[from] opmod::Error),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } | CliError::Payload { .. } | CliError::Usage(_) => EXIT_PARSE,
            CliError::Domain(_) => EXIT_DOMAIN,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

/// Resolves `-` to standard input, read at most once.
struct Payloads<'a> {
    stdin: &'a mut dyn Read,
    used: bool,
}

impl Payloads<'_> {
    fn get(&mut self, flag: &'static str, value: &str) -> Result<String, CliError> {
        if value != "-" {
            return Ok(value.to_owned());
        }
        if self.used {
            return Err(CliError::Usage(String::from(
                "only one payload flag may read standard input",
            )));
        }
        self.used = true;
        let mut buf = String::new();
        self.stdin.read_to_string(&mut buf).map_err(|e| CliError::Payload {
            flag,
            message: format!("reading standard input: {e}"),
        })?;
        Ok(buf.trim().to_owned())
    }
}

fn scalar_flag(flag: &'static str, text: &str) -> Result<Scalar, CliError> {
    parse_scalar(text).map_err(|source| CliError::Parse { flag, source })
}

fn json_payload(flag: &'static str, text: &str) -> Result<Option<Value>, CliError> {
    if !text.trim_start().starts_with('{') {
        return Ok(None);
    }
    serde_json::from_str(text).map(Some).map_err(|e| CliError::Payload {
        flag,
        message: e.to_string(),
    })
}

fn expect_weight(found: &Scalar, expected: &Scalar) -> Result<(), CliError> {
    if found == expected {
        Ok(())
    } else {
        Err(opmod::Error::WeightMismatch {
            expected: expected.clone(),
            found: found.clone(),
        }
        .into())
    }
}

/// Text in the grammar or a `diffop` JSON object.
fn operator_flag(flag: &'static str, text: &str, weight: &Scalar, k: Option<usize>) -> Result<DiffOp, CliError> {
    let op = match json_payload(flag, text)? {
        Some(v) => {
            let op = json::decode_diffop(&v).map_err(|e| CliError::Payload {
                flag,
                message: e.to_string(),
            })?;
            expect_weight(&op.weight, weight)?;
            op
        }
        None => parse_operator(text, weight).map_err(|source| CliError::Parse { flag, source })?,
    };
    match k {
        Some(k) => Ok(op.with_order(k)?),
        None => Ok(op),
    }
}

fn symbol_flag(flag: &'static str, text: &str, weight: &Scalar, k: Option<usize>) -> Result<NormalSymbol, CliError> {
    let s = match json_payload(flag, text)? {
        Some(v) => {
            let s = json::decode_symbol(&v).map_err(|e| CliError::Payload {
                flag,
                message: e.to_string(),
            })?;
            expect_weight(&s.weight, weight)?;
            s
        }
        None => parse_symbol(text, weight).map_err(|source| CliError::Parse { flag, source })?,
    };
    let Some(k) = k else { return Ok(s) };
    if s.bars().iter().skip(k + 1).any(|p| !p.is_zero()) {
        return Err(opmod::Error::UnsupportedOrder {
            order: s.order(),
            reason: "the symbol has nonzero terms above --k",
        }
        .into());
    }
    let bars = (0..=k).map(|i| s.bar(i)).collect();
    Ok(NormalSymbol::new(s.weight, bars))
}

fn poly_flag(flag: &'static str, text: &str) -> Result<opmod::Poly, CliError> {
    parse_poly(text).map_err(|source| CliError::Parse { flag, source })
}

struct Output {
    text: String,
    json: Value,
}

fn operator_output(a: DiffOp) -> Output {
    Output {
        text: a.to_string(),
        json: json::diffop(&a),
    }
}

fn verdict_text(v: &IntertwinerVerdict) -> String {
    let status = match v.status {
        Status::Isomorphic => "isomorphic",
        Status::NotIsomorphic => "not-isomorphic",
    };
    let mut out = format!("status: {status}\ndimension: {}", v.solution_dimension);
    for m in &v.basis {
        let alphas: Vec<String> = m.alphas.iter().map(Scalar::to_string).collect();
        out.push_str(&format!("\nalphas: {}", alphas.join(", ")));
    }
    let slots: Vec<String> = v.degenerate_slots.iter().map(usize::to_string).collect();
    out.push_str(&format!(
        "\ndegenerate slots: {}",
        if slots.is_empty() {
            String::from("none")
        } else {
            slots.join(", ")
        }
    ));
    out
}

fn cochain_text(c: &Cochain1) -> String {
    let jet = |name: &str, n: usize| match n {
        0 => String::from(name),
        n => format!("{name}^({n})"),
    };
    let mut out = String::new();
    for (idx, ((p, q), v)) in c.terms().iter().rev().enumerate() {
        let body = format!("{}*{}", jet("X", *p), jet("a", *q));
        let negative = v.is_rational() && v.rational_part() < &opmod::Rational::from_integer(0.into());
        let mag = if negative { -v } else { v.clone() };
        let term = if mag.is_one() {
            body
        } else if mag.is_rational() {
            format!("{mag}*{body}")
        } else {
            format!("({mag})*{body}")
        };
        match (idx, negative) {
            (0, false) => out.push_str(&term),
            (0, true) => out.push_str(&format!("-{term}")),
            (_, false) => out.push_str(&format!(" + {term}")),
            (_, true) => out.push_str(&format!(" - {term}")),
        }
    }
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn execute(command: Command, payloads: &mut Payloads<'_>) -> Result<Output, CliError> {
    match command {
        Command::Act { lambda, field, op, k } => {
            let l = scalar_flag("--lambda", &lambda)?;
            let field = payloads.get("--field", &field)?;
            let op = payloads.get("--op", &op)?;
            let x = VectorField::new(poly_flag("--field", &field)?);
            let a = operator_flag("--op", &op, &l, k)?;
            Ok(operator_output(a.ad(&x)))
        }
        Command::Symbol { lambda, op, k } => {
            let l = scalar_flag("--lambda", &lambda)?;
            let op = payloads.get("--op", &op)?;
            let a = operator_flag("--op", &op, &l, k)?;
            let calc = SymbolCalculus::new(a.order(), &l)?;
            let s = calc.to_symbol(&a)?;
            if calc.from_symbol(&s)? != a {
                return Err(CliError::Internal(String::from("normal symbol does not invert")));
            }
            Ok(Output {
                text: s.to_string(),
                json: json::symbol(&s),
            })
        }
        Command::Unsymbol { lambda, symbol, k } => {
            let l = scalar_flag("--lambda", &lambda)?;
            let symbol = payloads.get("--symbol", &symbol)?;
            let s = symbol_flag("--symbol", &symbol, &l, k)?;
            let calc = SymbolCalculus::new(s.order(), &l)?;
            Ok(operator_output(calc.from_symbol(&s)?))
        }
        Command::Adjoint { lambda, op, k } => {
            let l = scalar_flag("--lambda", &lambda)?;
            let op = payloads.get("--op", &op)?;
            Ok(operator_output(operator_flag("--op", &op, &l, k)?.adjoint()))
        }
        Command::Intertwine { lambda, mu, op } => {
            let l = scalar_flag("--lambda", &lambda)?;
            let m = scalar_flag("--mu", &mu)?;
            let op = payloads.get("--op", &op)?;
            let a = operator_flag("--op", &op, &l, None)?;
            Ok(operator_output(apply_t(&a, &m)?))
        }
        Command::Classify { k, lambda, mu } => {
            let l = scalar_flag("--lambda", &lambda)?;
            let m = scalar_flag("--mu", &mu)?;
            let v = solve_diagonal_intertwiner(k, &l, &m)?;
            Ok(Output {
                text: verdict_text(&v),
                json: json::verdict(&v),
            })
        }
        Command::Critical { k } => {
            let set = critical_set(k)?;
            let lines: Vec<String> = set.iter().map(Scalar::to_string).collect();
            Ok(Output {
                text: lines.join("\n"),
                json: Value::Array(set.iter().map(json::scalar).collect()),
            })
        }
        Command::Transvectant {
            n,
            lambda,
            mu,
            phi,
            psi,
        } => {
            let l = scalar_flag("--lambda", &lambda)?;
            let m = scalar_flag("--mu", &mu)?;
            let phi = payloads.get("--phi", &phi)?;
            let psi = payloads.get("--psi", &psi)?;
            let phi = Density::new(l, poly_flag("--phi", &phi)?);
            let psi = Density::new(m, poly_flag("--psi", &psi)?);
            let out = transvectant(n, &phi, &psi);
            Ok(Output {
                text: out.value.to_string(),
                json: json::density(&out),
            })
        }
        Command::CocycleCheck { which, s, pmax, qmax } => {
            let s = scalar_flag("--s", &s)?;
            let c = match which {
                Which::C3 => Cochain1::c3(&s),
                Which::C4 => Cochain1::c4(&s),
                Which::Tilde3 => Cochain1::tilde_c3(&s),
                Which::Tilde4 => Cochain1::tilde_c4(&s),
            };
            let defect = c.first_defect(pmax, qmax);
            let text = match defect {
                None => format!("{}\ncocycle: true", cochain_text(&c)),
                Some((p, q, r)) => format!("{}\ncocycle: false at X=x^{p}, Y=x^{q}, a=x^{r}", cochain_text(&c)),
            };
            let defect_json = match defect {
                None => Value::Null,
                Some((p, q, r)) => serde_json::json!({"p": p, "q": q, "r": r}),
            };
            Ok(Output {
                text,
                json: serde_json::json!({"cochain": json::cochain(&c), "cocycle": defect.is_none(), "defect": defect_json}),
            })
        }
        Command::Scheme { k, lambda } => {
            let l = scalar_flag("--lambda", &lambda)?;
            let s = derive_scheme(k, &l)?;
            Ok(Output {
                text: render_scheme(&s).trim_end().to_owned(),
                json: json::scheme(&s),
            })
        }
    }
}

/// Runs one command. Results go to `out`, diagnostics to `err`; the return
/// value is the process exit code.
pub fn run<I, T>(args: I, stdin: &mut dyn Read, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_PARSE } else { EXIT_OK };
            let sink: &mut dyn Write = if e.use_stderr() { err } else { out };
            let _ = write!(sink, "{}", e.render());
            return code;
        }
    };
    let as_json = cli.json;
    let mut payloads = Payloads { stdin, used: false };
    let result = panic::catch_unwind(AssertUnwindSafe(|| execute(cli.command, &mut payloads))).unwrap_or_else(|p| {
        let msg = p
            .downcast_ref::<&str>()
            .map(|s| s.to_string())
            .or_else(|| p.downcast_ref::<String>().cloned())
            .unwrap_or_else(|| String::from("panic"));
        Err(CliError::Internal(msg))
    });
    match result {
        Ok(output) => {
            let body = if as_json { output.json.to_string() } else { output.text };
            match writeln!(out, "{body}") {
                Ok(()) => EXIT_OK,
                Err(_) => EXIT_INTERNAL,
            }
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            e.exit_code()
        }
    }
}
