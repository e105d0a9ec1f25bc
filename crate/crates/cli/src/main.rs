//! `dnsign` command-line front end.
//!
//! Exit codes: 0 feasible / pass, 1 domain negative (infeasible pattern, not
//! a tree, failed campaign, ...), 2 usage, I/O or parse error.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use dnsign::densemat::{cholesky_invert_with, verify_dense};
use dnsign::oracle::{necessity_campaign_with, tree_prediction_campaign_with};
use dnsign::signpattern::{sign_of_report, sign_of_with};
use dnsign::textfmt::{parse_graph, parse_matrix, parse_sign_matrix, write_sign_matrix, write_sym_matrix};
use dnsign::treesign::two_coloring;
use dnsign::{
    check_feasible, construct_witness, search_nonunique_complete, CampaignReport, Error, SignMatrix,
    SymMatrix, Tolerances,
};

#[derive(Parser)]
#[command(name = "dnsign", version, about = "Sign patterns of inverse doubly-nonnegative matrices")]
struct Cli {
    #[command(flatten)]
    tol: TolFlags,
    /// Emit a JSON report instead of human-readable text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct TolFlags {
    /// Relative zero threshold for sign and graph classification.
    #[arg(long, global = true, default_value_t = Tolerances::default().zero_rel)]
    tol_zero: f64,
    /// Relative Cholesky pivot floor.
    #[arg(long, global = true, default_value_t = Tolerances::default().pivot_rel)]
    tol_pivot: f64,
    /// Allowed inversion residual per unit of dimension.
    #[arg(long, global = true, default_value_t = Tolerances::default().residual_per_n)]
    tol_residual: f64,
    /// Relative eigenvalue accuracy.
    #[arg(long, global = true, default_value_t = Tolerances::default().eig)]
    tol_eig: f64,
    /// Relative spread allowed in leaf column ratios.
    #[arg(long, global = true, default_value_t = Tolerances::default().ratio)]
    tol_ratio: f64,
    #[arg(long, global = true, default_value_t = Tolerances::default().max_iters)]
    max_iters: usize,
}

impl TolFlags {
    fn tolerances(&self) -> Tolerances {
        Tolerances {
            zero_rel: self.tol_zero,
            pivot_rel: self.tol_pivot,
            residual_per_n: self.tol_residual,
            eig: self.tol_eig,
            max_iters: self.max_iters,
            ratio: self.tol_ratio,
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether a sign matrix is the inverse pattern of some DN matrix.
    Check { file: PathBuf },
    /// Write a DN matrix whose inverse has the given sign pattern.
    Witness {
        file: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Predict the inverse sign pattern for a tree graph.
    Predict {
        file: PathBuf,
        /// Annotate each pair with its tree distance.
        #[arg(long)]
        distances: bool,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Test a matrix for double nonnegativity and report its inverse pattern.
    Verify { file: PathBuf },
    /// Run a seeded randomized campaign.
    Fuzz {
        /// 1: inverse patterns of random DN matrices; 2: tree predictions.
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        theorem: u8,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 1000)]
        trials: usize,
        #[arg(long, default_value_t = 2)]
        n_min: usize,
        /// Defaults to 12 for campaign 1 and 100 for campaign 2.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Search for two complete-graph DN matrices with different inverse patterns.
    SearchNonunique {
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = 3)]
        n: usize,
        #[arg(long, default_value_t = 100_000)]
        trials: usize,
        /// Directory receiving first.txt, second.txt, *.signs and diff.txt.
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Failure that maps onto exit code 2.
struct UsageError(String);

impl From<std::io::Error> for UsageError {
    fn from(e: std::io::Error) -> Self {
        UsageError(e.to_string())
    }
}

type CmdResult = Result<ExitCode, UsageError>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let tol = cli.tol.tolerances();
    let result = match &cli.command {
        Command::Check { file } => cmd_check(file, &tol, cli.json),
        Command::Witness { file, out } => cmd_witness(file, out, &tol, cli.json),
        Command::Predict { file, distances, out } => cmd_predict(file, *distances, out.as_deref(), cli.json),
        Command::Verify { file } => cmd_verify(file, &tol, cli.json),
        Command::Fuzz {
            theorem,
            seed,
            trials,
            n_min,
            n_max,
            out,
        } => {
            let n_max = n_max.unwrap_or(if *theorem == 1 { 12 } else { 100 });
            cmd_fuzz(*theorem, *seed, *trials, *n_min, n_max, out.as_deref(), &tol, cli.json)
        }
        Command::SearchNonunique { seed, n, trials, out } => {
            cmd_search(*n, *trials, *seed, out.as_deref(), &tol, cli.json)
        }
    };
    match result {
        Ok(code) => code,
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn read_with<T>(path: &Path, parse: impl FnOnce(&str) -> dnsign::Result<T>) -> Result<T, UsageError> {
    let text = fs::read_to_string(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
    parse(&text).map_err(|e| match e {
        Error::Parse { line, message } => UsageError(format!("{}:{line}: {message}", path.display())),
        other => UsageError(format!("{}: {other}", path.display())),
    })
}

fn exit(ok: bool) -> ExitCode {
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn print_json(value: &Value) {
    println!("{}", serde_json::to_string_pretty(value).expect("JSON values serialize"));
}

fn one_based(components: &[Vec<usize>]) -> Vec<Vec<usize>> {
    components
        .iter()
        .map(|c| c.iter().map(|v| v + 1).collect())
        .collect()
}

fn pattern_rows(s: &SignMatrix) -> Vec<String> {
    s.to_string().lines().map(str::to_owned).collect()
}

fn cmd_check(file: &Path, tol: &Tolerances, as_json: bool) -> CmdResult {
    let s = read_with(file, parse_sign_matrix)?;
    let report = check_feasible(&s);
    if as_json {
        print_json(&json!({
            "tolerances": tol,
            "n": s.n(),
            "feasible": report.feasible,
            "symmetric_ok": report.symmetric_ok,
            "diagonal_ok": report.diagonal_ok,
            "delta_connected": report.delta_connected,
            "delta_components": one_based(&report.delta_components),
        }));
    } else {
        println!("n: {}", s.n());
        println!("symmetric: {}", report.symmetric_ok);
        println!("diagonal all +: {}", report.diagonal_ok);
        println!("negative-sign graph connected: {}", report.delta_connected);
        let comps: Vec<String> = one_based(&report.delta_components)
            .iter()
            .map(|c| format!("{{{}}}", c.iter().map(usize::to_string).collect::<Vec<_>>().join(",")))
            .collect();
        println!("components: {}", comps.join(" "));
        println!("verdict: {}", if report.feasible { "feasible" } else { "infeasible" });
    }
    Ok(exit(report.feasible))
}

fn cmd_witness(file: &Path, out: &Path, tol: &Tolerances, as_json: bool) -> CmdResult {
    let s = read_with(file, parse_sign_matrix)?;
    let q = match construct_witness(&s) {
        Ok(q) => q,
        Err(e) => {
            eprintln!("InfeasiblePattern: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let witness = cholesky_invert_with(&q, tol).map_err(|e| UsageError(e.to_string()))?;
    let verdict = dnsign::densemat::verify_doubly_nonnegative_with(&witness, tol);
    let round_trip = cholesky_invert_with(&witness, tol)
        .map(|inv| sign_of_with(&inv, tol) == s)
        .unwrap_or(false);
    fs::write(out, write_sym_matrix(&witness))?;
    if as_json {
        print_json(&json!({
            "tolerances": tol,
            "out": out.display().to_string(),
            "verdict": verdict,
            "doubly_nonnegative": verdict.passes(),
            "round_trip": round_trip,
        }));
    } else {
        println!("wrote {}", out.display());
        println!("doubly nonnegative: {}", verdict.passes());
        println!("min eigenvalue: {:e}", verdict.min_eigenvalue);
        println!("inverse sign pattern reproduces input: {round_trip}");
    }
    Ok(exit(verdict.passes() && round_trip))
}

fn cmd_predict(file: &Path, distances: bool, out: Option<&Path>, as_json: bool) -> CmdResult {
    let g = read_with(file, parse_graph)?;
    let coloring = match two_coloring(&g) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("NotATree: {e}");
            return Ok(ExitCode::from(1));
        }
    };
    let pattern = dnsign::treesign::pattern_from_coloring(&coloring);
    let n = g.n();
    let pairs: Vec<(usize, usize, usize)> = (0..n)
        .flat_map(|i| {
            let d = g.bfs_distances(i);
            (i + 1..n).map(move |j| (i, j, d[j].expect("trees are connected")))
        })
        .collect();
    let text = if as_json {
        let mut value = json!({
            "n": n,
            "colors": coloring.colors(),
            "pattern": pattern_rows(&pattern),
        });
        if distances {
            value["distances"] = pairs
                .iter()
                .map(|&(i, j, d)| json!({"i": i + 1, "j": j + 1, "distance": d, "odd": d % 2 == 1}))
                .collect();
        }
        serde_json::to_string_pretty(&value).expect("JSON values serialize") + "\n"
    } else {
        let mut text = write_sign_matrix(&pattern);
        if distances {
            text.push_str("# pair distance sign (odd distance gives -)\n");
            for (i, j, d) in pairs {
                let sign = if d % 2 == 1 { '-' } else { '+' };
                text.push_str(&format!("# {} {} {d} {sign}\n", i + 1, j + 1));
            }
        }
        text
    };
    match out {
        Some(path) => fs::write(path, text)?,
        None => print!("{text}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_verify(file: &Path, tol: &Tolerances, as_json: bool) -> CmdResult {
    let a = read_with(file, parse_matrix)?;
    let verdict = verify_dense(&a, tol);
    let inverse = SymMatrix::from_dense(a)
        .ok()
        .and_then(|sym| cholesky_invert_with(&sym, tol).ok())
        .map(|inv| {
            let reading = sign_of_report(&inv, tol);
            let feas = check_feasible(&reading.signs);
            json!({
                "pattern": pattern_rows(&reading.signs),
                "ambiguous": reading.ambiguous.iter().map(|(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
                "feasible": feas.feasible,
                "delta_components": one_based(&feas.delta_components),
            })
        });
    if as_json {
        print_json(&json!({
            "tolerances": tol,
            "verdict": verdict,
            "doubly_nonnegative": verdict.passes(),
            "inverse": inverse,
        }));
    } else {
        println!("symmetric: {}", verdict.is_symmetric);
        println!("entrywise nonnegative: {}", verdict.is_entrywise_nonneg);
        println!("positive definite: {}", verdict.is_positive_definite);
        println!("irreducible: {}", verdict.is_irreducible);
        println!("min eigenvalue: {:e}", verdict.min_eigenvalue);
        println!("worst negative entry: {:e}", verdict.worst_negative_entry);
        if let Some(inv) = &inverse {
            println!("inverse sign pattern:");
            for row in inv["pattern"].as_array().into_iter().flatten() {
                println!("  {}", row.as_str().unwrap_or_default());
            }
            println!("inverse pattern feasible: {}", inv["feasible"]);
        }
        println!("verdict: {}", if verdict.passes() { "doubly nonnegative" } else { "not doubly nonnegative" });
    }
    Ok(exit(verdict.passes()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_fuzz(
    theorem: u8,
    seed: u64,
    trials: usize,
    n_min: usize,
    n_max: usize,
    out: Option<&Path>,
    tol: &Tolerances,
    as_json: bool,
) -> CmdResult {
    if n_min < 2 || n_min > n_max {
        return Err(UsageError(format!("invalid dimension range {n_min}..={n_max}")));
    }
    let (name, report): (&str, CampaignReport) = match theorem {
        1 => ("necessity", necessity_campaign_with(n_min..=n_max, trials, seed, tol)),
        _ => ("tree_prediction", tree_prediction_campaign_with(n_min..=n_max, trials, seed, tol)),
    };
    let mut value = serde_json::to_value(&report).expect("reports serialize");
    value["campaign"] = json!(name);
    value["seed"] = json!(seed);
    value["n_range"] = json!([n_min, n_max]);
    value["tolerances"] = json!(tol);
    if let Some(path) = out {
        fs::write(path, serde_json::to_string_pretty(&value).expect("JSON values serialize") + "\n")?;
    }
    if as_json {
        print_json(&value);
    } else {
        println!("campaign: {name} (seed {seed}, n in {n_min}..={n_max})");
        println!("trials: {}, failures: {}", report.trials, report.failures);
        for (k, v) in &report.min_margins {
            println!("min {k}: {v:e}");
        }
        for (k, v) in &report.counters {
            println!("{k}: {v}");
        }
    }
    if !report.passed() {
        let seeds: Vec<String> = report.failure_seeds.iter().map(u64::to_string).collect();
        eprintln!("failing trial seeds: {}", seeds.join(" "));
    }
    Ok(exit(report.passed()))
}

fn cmd_search(n: usize, trials: usize, seed: u64, out: Option<&Path>, tol: &Tolerances, as_json: bool) -> CmdResult {
    if n < 3 {
        return Err(UsageError("search-nonunique needs --n >= 3".into()));
    }
    let pair = match search_nonunique_complete(n, trials, seed) {
        Ok(pair) => pair,
        Err(Error::NotFound { trials }) => {
            eprintln!("NotFound: no pair after {trials} trials");
            return Ok(ExitCode::from(1));
        }
        Err(e) => return Err(UsageError(e.to_string())),
    };
    let diff = pair.first_pattern.diff(&pair.second_pattern);
    if let Some(dir) = out {
        fs::create_dir_all(dir)?;
        let header = |which: &str, s: u64| format!("# {which} of a non-uniqueness pair (search seed {seed}, trial seed {s})\n");
        fs::write(dir.join("first.txt"), header("first", pair.first_seed) + &write_sym_matrix(&pair.first))?;
        fs::write(dir.join("second.txt"), header("second", pair.second_seed) + &write_sym_matrix(&pair.second))?;
        fs::write(dir.join("first.signs"), write_sign_matrix(&pair.first_pattern))?;
        fs::write(dir.join("second.signs"), write_sign_matrix(&pair.second_pattern))?;
        let mut text = String::from("# i j first second\n");
        for &(i, j) in &diff {
            text.push_str(&format!(
                "{} {} {} {}\n",
                i + 1,
                j + 1,
                pair.first_pattern.get(i, j).as_char(),
                pair.second_pattern.get(i, j).as_char()
            ));
        }
        fs::write(dir.join("diff.txt"), text)?;
    }
    if as_json {
        print_json(&json!({
            "tolerances": tol,
            "n": n,
            "seed": seed,
            "trials_used": pair.trials_used,
            "first_seed": pair.first_seed,
            "second_seed": pair.second_seed,
            "first_pattern": pattern_rows(&pair.first_pattern),
            "second_pattern": pattern_rows(&pair.second_pattern),
            "differing_entries": diff.iter().map(|(i, j)| [i + 1, j + 1]).collect::<Vec<_>>(),
        }));
    } else {
        println!("found after {} trials", pair.trials_used);
        println!("first inverse pattern:\n{}", pair.first_pattern);
        println!("second inverse pattern:\n{}", pair.second_pattern);
    }
    Ok(ExitCode::SUCCESS)
}
