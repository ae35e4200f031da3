//! Command-line front end.
//!
//! Exit codes: 0 on success, 2 on usage or validation errors, 3 when two
//! computation routes disagree. Errors go to the error stream as one line
//! `error[<category>]: <message>`.

use std::ffi::OsString;
use std::io::Write;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::arf::{arf, chain_form, count_arf, symplectic_basis, ArfError};
use crate::billiard::{classify, BilliardError, BilliardTable};
use crate::cover::{cover_pattern, spin_defined};
use crate::enumerate::{enumerate_rows, EnumerationBounds};
use crate::exec::Execution;
use crate::parity::{odd_orders, residue_counts, spin_parity_closed, spin_parity_sum, SpinParity};
use crate::arf::spin_parity_arf;
use crate::pattern::{Flavor, Pattern, PatternError};
use crate::selftest;

/// Environment variable setting the number of worker threads for sweeps.
pub const THREADS_ENV: &str = "STRATUM_SPIN_THREADS";

pub const EXIT_OK: u8 = 0;
pub const EXIT_VALIDATION: u8 = 2;
pub const EXIT_DISAGREEMENT: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "stratum-spin", version, about = "Invariants of strata of Abelian and quadratic differentials")]
struct Cli {
    /// Emit JSON instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Stratum-level facts.
    Stratum {
        #[command(subcommand)]
        action: StratumAction,
    },
    /// Pattern of the orientation double cover.
    Cover {
        pattern: String,
        /// Keep the two preimages of every marked point.
        #[arg(long)]
        keep_marked: bool,
    },
    /// Spin parity by all three routes.
    Spin { pattern: String },
    /// Quadratic forms over Z/2.
    Arf {
        #[command(subcommand)]
        action: ArfAction,
    },
    /// Rational billiard tables.
    Billiard {
        #[command(subcommand)]
        action: BilliardAction,
    },
    /// List every valid pattern up to a sum bound.
    Enumerate {
        #[arg(long, value_enum)]
        flavor: FlavorArg,
        #[arg(long, allow_hyphen_values = true)]
        max_sum: i64,
        #[arg(long, default_value_t = 8)]
        max_entries: usize,
        /// Also list patterns with marked points (order 0).
        #[arg(long)]
        include_marked: bool,
    },
    /// Run the cross-route verification corpus.
    Selftest,
}

#[derive(Debug, Subcommand)]
enum StratumAction {
    Info { pattern: String },
}

#[derive(Debug, Subcommand)]
enum ArfAction {
    /// Chain form of a list of odd orders, e.g. `-1,-1,-1,-1`.
    Chain {
        #[arg(allow_hyphen_values = true)]
        orders: String,
    },
    /// Count forms by Arf invariant on the rank-2g symplectic space.
    Count {
        #[arg(long)]
        genus: u32,
        #[arg(long, default_value_t = crate::arf::DEFAULT_MAX_ENUMERATION_RANK)]
        max_rank: usize,
    },
}

#[derive(Debug, Subcommand)]
enum BilliardAction {
    Classify {
        /// Angles as multiples of π, e.g. `11/14,1/7,1/14`.
        #[arg(long, allow_hyphen_values = true)]
        angles: String,
        /// Accept angle systems that are not polygons.
        #[arg(long)]
        relax: bool,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FlavorArg {
    #[value(name = "Q", alias = "q")]
    Q,
    #[value(name = "H", alias = "h")]
    H,
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Invalid { category: &'static str, message: String },
    Disagreement(String),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Disagreement(_) => EXIT_DISAGREEMENT,
            _ => EXIT_VALIDATION,
        }
    }

    fn line(&self) -> String {
        match self {
            CliError::Usage(m) => format!("error[usage]: {m}"),
            CliError::Invalid { category, message } => format!("error[{category}]: {message}"),
            CliError::Disagreement(m) => format!("error[disagreement]: {m}"),
        }
    }
}

impl From<PatternError> for CliError {
    fn from(e: PatternError) -> Self {
        CliError::Invalid {
            category: e.category(),
            message: e.to_string(),
        }
    }
}

impl From<ArfError> for CliError {
    fn from(e: ArfError) -> Self {
        match e {
            ArfError::Pattern(p) => p.into(),
            other => CliError::Invalid {
                category: "arf",
                message: other.to_string(),
            },
        }
    }
}

impl From<BilliardError> for CliError {
    fn from(e: BilliardError) -> Self {
        if e.is_internal() {
            CliError::Disagreement(e.to_string())
        } else {
            CliError::Invalid {
                category: "billiard",
                message: e.to_string(),
            }
        }
    }
}

/// Output of one command: JSON body plus its text rendering.
struct Output {
    json: serde_json::Value,
    text: String,
    exit: u8,
}

#[derive(Serialize)]
struct Report<'a, T: Serialize> {
    command: &'a str,
    #[serde(flatten)]
    body: T,
    warnings: Vec<String>,
}

fn report<T: Serialize>(command: &str, body: T, warnings: Vec<String>) -> serde_json::Value {
    serde_json::to_value(Report {
        command,
        body,
        warnings,
    })
    .expect("report serializes")
}

/// Runs the tool on `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let message = e.to_string();
                    let first = message.lines().next().unwrap_or("invalid arguments");
                    let first = first.trim_start_matches("error: ");
                    let _ = writeln!(err, "{}", CliError::Usage(first.to_string()).line());
                    EXIT_VALIDATION
                }
            };
        }
    };
    let json = cli.json;
    match with_thread_pool(|| dispatch(cli.command)) {
        Ok(output) => {
            let _ = if json {
                writeln!(out, "{}", serde_json::to_string_pretty(&output.json).expect("json"))
            } else {
                write!(out, "{}", output.text)
            };
            output.exit
        }
        Err(e) => {
            let _ = writeln!(err, "{}", e.line());
            e.exit_code()
        }
    }
}

fn with_thread_pool<R: Send>(f: impl FnOnce() -> Result<R, CliError> + Send) -> Result<R, CliError> {
    let Some(value) = std::env::var_os(THREADS_ENV) else {
        return f();
    };
    let threads: usize = value
        .to_str()
        .and_then(|s| s.trim().parse().ok())
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Usage(format!("{THREADS_ENV} must be a positive integer")))?;
    #[cfg(feature = "parallel")]
    {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        pool.install(f)
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = threads;
        f()
    }
}

fn dispatch(command: Command) -> Result<Output, CliError> {
    match command {
        Command::Stratum {
            action: StratumAction::Info { pattern },
        } => stratum_info(&pattern),
        Command::Cover {
            pattern,
            keep_marked,
        } => cover(&pattern, keep_marked),
        Command::Spin { pattern } => spin(&pattern),
        Command::Arf {
            action: ArfAction::Chain { orders },
        } => arf_chain(&orders),
        Command::Arf {
            action: ArfAction::Count { genus, max_rank },
        } => arf_count(genus, max_rank),
        Command::Billiard {
            action: BilliardAction::Classify { angles, relax },
        } => billiard(&angles, relax),
        Command::Enumerate {
            flavor,
            max_sum,
            max_entries,
            include_marked,
        } => enumerate(flavor, max_sum, max_entries, include_marked),
        Command::Selftest => selftest_all(),
    }
}

fn ok(json: serde_json::Value, text: String) -> Result<Output, CliError> {
    Ok(Output { json, text, exit: EXIT_OK })
}

fn stratum_info(text: &str) -> Result<Output, CliError> {
    let p: Pattern = text.parse()?;
    let facts = p.facts();
    #[derive(Serialize)]
    struct Body<'a> {
        input: &'a str,
        pattern: &'a Pattern,
        flavor: Flavor,
        entries: usize,
        marked_points: usize,
        genus: i64,
        dimension: i64,
        nonempty: Option<bool>,
        connectedness: crate::pattern::Connectedness,
        spin_defined: bool,
    }
    let body = Body {
        input: text,
        pattern: &p,
        flavor: p.flavor(),
        entries: p.len(),
        marked_points: p.marked_points(),
        genus: facts.genus,
        dimension: facts.dimension,
        nonempty: facts.nonempty,
        connectedness: facts.connectedness,
        spin_defined: spin_defined(&p).is_ok(),
    };
    let nonempty = match facts.nonempty {
        Some(b) => b.to_string(),
        None => "unknown".to_string(),
    };
    let text_out = format!(
        "pattern        {p}\nflavor         {}\ngenus          {}\ndimension      {}\nentries        {}\nmarked_points  {}\nnonempty       {nonempty}\nconnectedness  {}\nspin_defined   {}\n",
        p.flavor(),
        facts.genus,
        facts.dimension,
        p.len(),
        p.marked_points(),
        facts.connectedness,
        body.spin_defined
    );
    ok(report("stratum info", &body, vec![]), text_out)
}

fn cover(text: &str, keep_marked: bool) -> Result<Output, CliError> {
    let p: Pattern = text.parse()?;
    let data = cover_pattern(&p, keep_marked)?;
    let mut warnings = Vec::new();
    if data.square_candidate {
        warnings.push(
            "all orders are even: a differential in this stratum may be a global square with a disconnected cover"
                .to_string(),
        );
    }
    let text_out = format!(
        "base                {}\ncover               {}\nramification_count  {}\ncover_genus         {}\nh1_dim              {}\nsquare_candidate    {}\n{}",
        data.base,
        data.cover,
        data.ramification_count,
        data.cover_genus,
        data.h1_dim,
        data.square_candidate,
        warning_lines(&warnings)
    );
    ok(report("cover", &data, warnings), text_out)
}

fn warning_lines(warnings: &[String]) -> String {
    warnings.iter().map(|w| format!("warning: {w}\n")).collect()
}

#[derive(Serialize)]
struct SpinBody {
    pattern: Pattern,
    defined: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    reason: Option<String>,
    parity: SpinParity,
    n_plus: usize,
    n_minus: usize,
    route_closed: SpinParity,
    route_sum: SpinParity,
    route_arf: SpinParity,
}

fn spin(text: &str) -> Result<Output, CliError> {
    let p: Pattern = text.parse()?;
    if p.flavor() != Flavor::Quadratic {
        return Err(PatternError::Flavor {
            expected: Flavor::Quadratic,
            found: p.flavor(),
        }
        .into());
    }
    let closed = spin_parity_closed(&p).map_err(|e| CliError::Disagreement(e.to_string()))?;
    let route_sum = if closed.is_defined() {
        spin_parity_sum(&odd_orders(&p)).map_err(|e| CliError::Disagreement(e.to_string()))?
    } else {
        closed.clone()
    };
    let route_arf = spin_parity_arf(&p)?;
    let (n_plus, n_minus) = residue_counts(&p);
    let reason = match &closed {
        SpinParity::Undefined(r) => Some(r.clone()),
        _ => None,
    };
    let body = SpinBody {
        pattern: p.clone(),
        defined: closed.is_defined(),
        reason,
        parity: closed.clone(),
        n_plus,
        n_minus,
        route_closed: closed.clone(),
        route_sum: route_sum.clone(),
        route_arf: route_arf.clone(),
    };
    let agree = closed == route_sum && route_sum == route_arf;
    let text_out = format!(
        "pattern   {p}\nparity    {closed}\nn_plus    {n_plus}\nn_minus   {n_minus}\nroutes    closed={} sum={} arf={}\n",
        closed.name(),
        route_sum.name(),
        route_arf.name()
    );
    let exit = if agree { EXIT_OK } else { EXIT_DISAGREEMENT };
    let mut warnings = Vec::new();
    if !agree {
        warnings.push("spin parity routes disagree".to_string());
    }
    Ok(Output {
        json: report("spin", body, warnings),
        text: text_out,
        exit,
    })
}

fn parse_orders(text: &str) -> Result<Vec<i64>, CliError> {
    text.split(',')
        .map(|s| {
            s.trim().parse::<i64>().map_err(|_| CliError::Invalid {
                category: "syntax",
                message: format!("cannot parse order {:?}", s.trim()),
            })
        })
        .collect()
}

fn arf_chain(text: &str) -> Result<Output, CliError> {
    let orders = parse_orders(text)?;
    let form = chain_form(&orders)?;
    let basis = symplectic_basis(form.intersection())?;
    let value = arf(&form)?;
    #[derive(Serialize)]
    struct Pair {
        a: String,
        b: String,
        omega_a: u8,
        omega_b: u8,
    }
    let pairs: Vec<Pair> = basis
        .pairs
        .iter()
        .map(|(a, b)| Pair {
            a: a.to_string(),
            b: b.to_string(),
            omega_a: form.evaluate(a).map(u8::from).unwrap_or(0),
            omega_b: form.evaluate(b).map(u8::from).unwrap_or(0),
        })
        .collect();
    #[derive(Serialize)]
    struct Body<'a> {
        orders: &'a [i64],
        rank: usize,
        values: String,
        intersection: Vec<String>,
        basis: &'a [Pair],
        arf: u8,
        parity: SpinParity,
    }
    let body = Body {
        orders: &orders,
        rank: form.rank(),
        values: form.values().to_string(),
        intersection: form.intersection().rows().iter().map(|r| r.to_string()).collect(),
        basis: &pairs,
        arf: u8::from(value),
        parity: SpinParity::from_bit(value),
    };
    let mut text_out = format!(
        "orders        {}\nrank          {}\nvalues        {}\nintersection\n",
        orders.iter().map(i64::to_string).collect::<Vec<_>>().join(","),
        body.rank,
        body.values
    );
    for row in &body.intersection {
        text_out.push_str(&format!("  {row}\n"));
    }
    text_out.push_str("basis\n");
    for (i, pair) in pairs.iter().enumerate() {
        text_out.push_str(&format!(
            "  a{} = {}  (Ω={})   b{} = {}  (Ω={})\n",
            i + 1,
            pair.a,
            pair.omega_a,
            i + 1,
            pair.b,
            pair.omega_b
        ));
    }
    text_out.push_str(&format!("arf           {}\n", body.arf));
    ok(report("arf chain", &body, vec![]), text_out)
}

fn arf_count(genus: u32, max_rank: usize) -> Result<Output, CliError> {
    let counts = count_arf(genus, max_rank, Execution::default())?;
    let text_out = format!(
        "genus  {}\narf0   {}\narf1   {}\n",
        counts.genus, counts.arf0, counts.arf1
    );
    ok(report("arf count", counts, vec![]), text_out)
}

fn billiard(angles: &str, relax: bool) -> Result<Output, CliError> {
    let table = BilliardTable::parse(angles, relax)?;
    let r = classify(&table)?;
    let hyp = match &r.hyperelliptic {
        Some(h) => format!(
            "hyperelliptic  {} component has {} parity: {}\n",
            h.stratum,
            h.hyperelliptic_parity.name(),
            h.verdict.as_str()
        ),
        None => String::new(),
    };
    let text_out = format!(
        "angles             {}\nN                  {}\ngenus              {}\nabelian_pattern    {}\nfake_zero_count    {}\nquadratic_pattern  {}\nQ                  {}\nis_abelian_square  {}\nspin               {}\n{hyp}component_label    {}\n{}",
        r.angles,
        r.n_lcm,
        r.genus,
        r.abelian_pattern,
        r.fake_zero_count,
        r.quadratic_pattern,
        r.q_lcm,
        r.is_abelian_square,
        r.spin,
        r.component_label.as_deref().unwrap_or("-"),
        warning_lines(&r.warnings)
    );
    let mut json = serde_json::to_value(&r).expect("json");
    if let serde_json::Value::Object(map) = &mut json {
        let mut ordered = serde_json::Map::new();
        ordered.insert("command".into(), "billiard classify".into());
        ordered.append(map);
        json = serde_json::Value::Object(ordered);
    }
    ok(json, text_out)
}

fn enumerate(flavor: FlavorArg, max_sum: i64, max_entries: usize, include_marked: bool) -> Result<Output, CliError> {
    let flavor = match flavor {
        FlavorArg::Q => Flavor::Quadratic,
        FlavorArg::H => Flavor::Abelian,
    };
    let bounds = EnumerationBounds::new(flavor, max_sum, max_entries).with_marked(include_marked);
    let rows = enumerate_rows(&bounds, Execution::default());
    let mut text_out = String::new();
    for row in &rows {
        let nonempty = match row.nonempty {
            Some(b) => b.to_string(),
            None => "-".into(),
        };
        let spin = row.spin.as_ref().map_or("-", SpinParity::name);
        text_out.push_str(&format!(
            "{:<24} sum={:<4} g={:<3} dim={:<3} nonempty={:<5} spin={:<9} {}\n",
            row.pattern.to_string(),
            row.sum,
            row.genus,
            row.dimension,
            nonempty,
            spin,
            row.connectedness
        ));
    }
    #[derive(Serialize)]
    struct Body<'a> {
        flavor: Flavor,
        max_sum: i64,
        max_entries: usize,
        include_marked: bool,
        count: usize,
        rows: &'a [crate::enumerate::EnumerationRow],
    }
    let body = Body {
        flavor,
        max_sum,
        max_entries,
        include_marked,
        count: rows.len(),
        rows: &rows,
    };
    ok(report("enumerate", &body, vec![]), text_out)
}

fn selftest_all() -> Result<Output, CliError> {
    let outcomes = selftest::run_all(Execution::default());
    let all_pass = outcomes.iter().all(|o| o.passed && o.within_limit());
    let text: String = outcomes.iter().map(|o| o.line() + "\n").collect();
    #[derive(Serialize)]
    struct Body<'a> {
        passed: bool,
        checks: &'a [selftest::CheckOutcome],
    }
    Ok(Output {
        json: report(
            "selftest",
            Body {
                passed: all_pass,
                checks: &outcomes,
            },
            vec![],
        ),
        text,
        exit: if all_pass { EXIT_OK } else { EXIT_DISAGREEMENT },
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (u8, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("stratum-spin").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn usage_errors_exit_two() {
        let (code, _, err) = run_cli(&["frobnicate"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error[usage]:"), "{err}");
    }

    #[test]
    fn help_exits_zero() {
        let (code, out, _) = run_cli(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("spin"));
    }

    #[test]
    fn pattern_errors_carry_category() {
        let (code, _, err) = run_cli(&["spin", "Q(4,-1)"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error[sum]:"), "{err}");
        let (code, _, err) = run_cli(&["spin", "H(2)"]);
        assert_eq!(code, 2);
        assert!(err.starts_with("error[flavor]:"), "{err}");
    }
}
