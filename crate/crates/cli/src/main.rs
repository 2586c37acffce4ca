use std::path::Path;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use wpbailey::dsl::{parse_spec, Item, SpecDocument};
use wpbailey::expr::{eval_to_order, parse_binding, ParamBinding, QExpr, SumPolicy};
use wpbailey::pairs::{catalog, catalog_entries, verify_pair, PairCheck, PairSpec};
use wpbailey::rational::{fmt_exp_pq, parse_rational, t_to_exp};
use wpbailey::report::{Status, VerificationReport};
use wpbailey::transforms::binding_scale;
use wpbailey::verify::{find_case, identity_cases, run_suite, suite_status, verify_identity, IdentityCase, VerifyOptions};
use wpbailey::QRational;

#[derive(Parser)]
#[command(name = "wpbailey", version, about = "Exact q-series verification of WP-Bailey pairs and identities")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Check a pair's beta against the transform of its alpha.
    VerifyPair {
        /// Catalog id, a spec file, or FILE#NAME.
        target: String,
        /// Values of k to test (repeatable).
        #[arg(long = "k", value_parser = rational)]
        k: Vec<QRational>,
        /// Values of a to test, for pairs with free a (repeatable).
        #[arg(long = "a", value_parser = rational)]
        a: Vec<QRational>,
        #[arg(long, default_value_t = 10)]
        n_max: i64,
        #[arg(long, default_value_t = 20)]
        order: i64,
        /// Number of sampled k values when --k is not given.
        #[arg(long, default_value_t = 2)]
        samples: usize,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
        /// Draw enough k values to pin every coefficient exactly.
        #[arg(long)]
        prove_degree: bool,
    },
    /// Expand both sides of an identity and compare them.
    VerifyIdentity {
        /// Catalog id, a spec file, or FILE#NAME.
        target: String,
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 2)]
        samples: usize,
        #[arg(long)]
        json: bool,
        /// Degree-audit finite identities; otherwise use enough k values to
        /// pin each coefficient.
        #[arg(long)]
        prove_degree: bool,
    },
    /// Run the identity catalog.
    Suite {
        #[arg(long, default_value = "*")]
        filter: String,
        #[arg(long)]
        order: Option<i64>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        json: bool,
        #[arg(long)]
        jobs: Option<usize>,
    },
    /// Print the coefficients of one side of an identity or pair.
    Expand {
        /// `catalog:ID.SIDE` or `FILE#NAME.SIDE`; SIDE is lhs, rhs, alpha or beta.
        target: String,
        #[arg(long)]
        order: i64,
        /// Parameter values, e.g. `k=1/3,a=q^(1/2)`.
        #[arg(long, default_value = "")]
        binding: String,
        /// Index for alpha or beta.
        #[arg(long, default_value_t = 0)]
        n: i64,
    },
    /// List catalog ids.
    List {
        #[arg(value_enum)]
        what: Option<ListWhat>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ListWhat {
    Pairs,
    Identities,
}

fn rational(s: &str) -> Result<QRational, String> {
    parse_rational(s)
}

/// Usage or input problem; exit code 2.
struct Usage(String);

impl<E: std::fmt::Display> From<E> for Usage {
    fn from(e: E) -> Self {
        Usage(e.to_string())
    }
}

fn exit_for(s: Status) -> u8 {
    match s {
        Status::Pass => 0,
        Status::Fail => 1,
        Status::Singular | Status::Nonconvergent => 3,
    }
}

fn load(path: &str) -> Result<SpecDocument, Usage> {
    let text = std::fs::read_to_string(path).map_err(|e| Usage(format!("cannot read `{path}`: {e}")))?;
    parse_spec(&text).map_err(|d| Usage(format!("{path}:{}", d.render(&text))))
}

/// The single item of the document, or the one named after `#`.
fn file_item(target: &str) -> Result<Option<Item>, Usage> {
    let (path, name) = match target.split_once('#') {
        Some((p, n)) => (p, Some(n)),
        None => (target, None),
    };
    if !Path::new(path).is_file() {
        return Ok(None);
    }
    let doc = load(path)?;
    match name {
        Some(n) => doc.get(n).cloned().map(Some).ok_or_else(|| Usage(format!("`{path}` defines nothing named `{n}`"))),
        None if doc.items.len() == 1 => Ok(Some(doc.items[0].clone())),
        None => Err(Usage(format!("`{path}` defines {} items; pick one with {path}#NAME", doc.items.len()))),
    }
}

fn resolve_pair(target: &str) -> Result<PairSpec, Usage> {
    match file_item(target)? {
        Some(Item::Pair(p)) => Ok(p.to_pair()),
        Some(Item::Identity(i)) => Err(Usage(format!("`{}` is an identity, not a pair", i.name))),
        None => catalog(target).map_err(|e| Usage(format!("unknown pair `{target}`: {e}"))),
    }
}

fn resolve_identity(target: &str) -> Result<IdentityCase, Usage> {
    match file_item(target)? {
        Some(Item::Identity(i)) => Ok(i.to_case()),
        Some(Item::Pair(p)) => Err(Usage(format!("`{}` is a pair, not an identity", p.name))),
        None => find_case(target).ok_or_else(|| Usage(format!("unknown identity `{target}`"))),
    }
}

fn emit(reports: &[VerificationReport], json: bool, single: bool) -> Result<(), Usage> {
    if json {
        let s = if single { serde_json::to_string_pretty(&reports[0])? } else { serde_json::to_string_pretty(reports)? };
        println!("{s}");
    } else {
        for r in reports {
            println!("{}", r.summary_line());
        }
    }
    Ok(())
}

/// Seeded runs print zero runtimes so their output is reproducible.
fn settle(mut reports: Vec<VerificationReport>, seed: Option<u64>) -> Vec<VerificationReport> {
    if seed.is_some() {
        for r in &mut reports {
            r.runtime_ms = 0;
        }
    }
    reports
}

fn expand(target: &str, order: i64, binding: &str, n: i64) -> Result<u8, Usage> {
    let (source, side) = match target.rsplit_once('.') {
        Some((s, side)) if ["lhs", "rhs", "alpha", "beta"].contains(&side) => (s, side),
        _ => (target, "lhs"),
    };
    let given = parse_binding(binding).map_err(Usage)?;
    let item = if let Some(id) = source.strip_prefix("catalog:") {
        match find_case(id) {
            Some(c) => Resolved::Identity(c),
            None => Resolved::Pair(catalog(id).map_err(|_| Usage(format!("unknown catalog id `{id}`")))?),
        }
    } else {
        match file_item(source)? {
            Some(Item::Pair(p)) => Resolved::Pair(p.to_pair()),
            Some(Item::Identity(i)) => Resolved::Identity(i.to_case()),
            None => return Err(Usage(format!("`{source}` is neither a catalog id (catalog:ID) nor a spec file"))),
        }
    };
    let (expr, mut b, scale): (QExpr, ParamBinding, u32) = match (&item, side) {
        (Resolved::Identity(c), "lhs") => (c.lhs.clone(), c.fixed.clone(), c.scale),
        (Resolved::Identity(c), "rhs") => (c.rhs.clone(), c.fixed.clone(), c.scale),
        (Resolved::Pair(p), "alpha" | "lhs") => (p.alpha_at(n)?, p.fixed.clone(), p.scale),
        (Resolved::Pair(p), "beta") => match p.beta_at(n)? {
            Some(e) => (e, p.fixed.clone(), p.scale),
            None => return Err(Usage(format!("pair `{}` has no closed-form beta", p.name))),
        },
        _ => return Err(Usage(format!("side `{side}` does not apply here"))),
    };
    b.extend(given);
    let missing: Vec<String> = expr.params().into_iter().filter(|p| !b.contains_key(p)).collect();
    if !missing.is_empty() {
        return Err(Usage(format!("bind {} with --binding", missing.join(", "))));
    }
    let scale = binding_scale(&b, scale);
    match eval_to_order(&expr, &b, scale, order, SumPolicy::default()) {
        Ok((s, _)) => {
            let lo = s.valuation_t().unwrap_or(0).min(0);
            for t in lo..=order * scale as i64 {
                let c = s.coeff_t(t);
                println!("{}\t{}", plain(&fmt_exp_pq(t_to_exp(t, scale))), plain(&wpbailey::rational::fmt_pq(&c)));
            }
            Ok(0)
        }
        Err(e) => {
            eprintln!("error: {e}");
            Ok(if e.is_nonconvergent() || e.is_singular() { 3 } else { 2 })
        }
    }
}

enum Resolved {
    Pair(PairSpec),
    Identity(IdentityCase),
}

/// `5/1` prints as `5`.
fn plain(s: &str) -> String {
    s.strip_suffix("/1").unwrap_or(s).to_string()
}

fn run(cli: Cli) -> Result<u8, Usage> {
    match cli.cmd {
        Cmd::VerifyPair { target, k, a, n_max, order, samples, seed, json, prove_degree } => {
            let pr = resolve_pair(&target)?;
            let s = seed.unwrap_or(0);
            let mut check = if prove_degree {
                PairCheck::proving(&pr, n_max, order, s)
            } else {
                PairCheck::sampled(&pr, samples, 1, n_max, order, s)
            };
            if !k.is_empty() {
                check.k_needed = k.len();
                check.k_samples = k;
            }
            if !a.is_empty() {
                check.a_needed = a.len();
                check.a_samples = a;
            }
            let r = verify_pair(&pr, &check)?;
            let reports = settle(vec![r], seed);
            emit(&reports, json, true)?;
            Ok(exit_for(reports[0].status))
        }
        Cmd::VerifyIdentity { target, order, seed, samples, json, prove_degree } => {
            let case = resolve_identity(&target)?;
            let opts = VerifyOptions { order, samples, seed: seed.unwrap_or(0), prove: prove_degree, jobs: None };
            let reports = settle(vec![verify_identity(&case, &opts)], seed);
            emit(&reports, json, true)?;
            Ok(exit_for(reports[0].status))
        }
        Cmd::Suite { filter, order, seed, json, jobs } => {
            let reports = settle(run_suite(&filter, order, seed.unwrap_or(0), jobs)?, seed);
            if reports.is_empty() {
                return Err(Usage(format!("no identity matches `{filter}`")));
            }
            emit(&reports, json, false)?;
            Ok(exit_for(suite_status(&reports)))
        }
        Cmd::Expand { target, order, binding, n } => expand(&target, order, &binding, n),
        Cmd::List { what } => {
            if !matches!(what, Some(ListWhat::Identities)) {
                for e in catalog_entries() {
                    let params = if e.params.is_empty() { String::new() } else { format!(" [{}]", e.params) };
                    println!("{}{params}\t{}", e.id, e.description);
                }
            }
            if !matches!(what, Some(ListWhat::Pairs)) {
                for c in identity_cases() {
                    println!("{}\t{}", c.id, c.description);
                }
            }
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
