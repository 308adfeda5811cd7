use std::fs;
use std::io::{self, Read, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use matchstack::bounds::{corollary_bound, theorem_bound, BoundVariant};
use matchstack::oracles::{count_perfect_matchings, MATCHING_GUARD};
use matchstack::sweep::{run_suite, Suite, SweepConfig};
use matchstack::triangulation::{enumerate_histories, random_histories};
use matchstack::{
    degeneracy, degeneracy_vector, to_tree, Error, GrowthHistory, StackTriangulation,
};

#[derive(Parser)]
#[command(
    name = "matchstack",
    version,
    about = "Groundstate degeneracy of stack triangulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Emit growth histories as JSON lines.
    Gen {
        #[arg(long)]
        n: usize,
        /// Seed for uniformly random histories.
        #[arg(
            long,
            conflicts_with = "exhaustive",
            required_unless_present = "exhaustive"
        )]
        seed: Option<u64>,
        /// Number of random histories.
        #[arg(long, default_value_t = 1, conflicts_with = "exhaustive")]
        count: usize,
        /// Every history of length n, in lexicographic order.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Run the pipeline on histories (one JSON array per line, `-` for stdin).
    Analyze { input: String },
    /// Run a verification suite and print its report.
    Verify {
        #[arg(long, value_parser = parse_suite)]
        suite: Suite,
        #[arg(long)]
        max_n: usize,
        /// Whitelist bound violations on triangulations with fewer vertices.
        #[arg(long)]
        allow_below: Option<usize>,
        /// Number of random instances in the bound suites.
        #[arg(long, default_value_t = 500)]
        random: usize,
        #[arg(long, default_value_t = 60)]
        random_max_n: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Serialize a triangulation, its tree or its dual.
    Export {
        input: String,
        #[arg(long, value_enum)]
        format: Format,
        #[arg(long, value_enum)]
        what: What,
        #[arg(long)]
        output: Option<PathBuf>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Dot,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum What {
    Tri,
    Tree,
    Dual,
}

fn parse_suite(s: &str) -> Result<Suite, String> {
    s.parse().map_err(|e: Error| e.to_string())
}

fn read_input(input: &str) -> io::Result<String> {
    if input == "-" {
        let mut text = String::new();
        io::stdin().read_to_string(&mut text)?;
        Ok(text)
    } else {
        fs::read_to_string(input)
    }
}

/// Every JSON value in `text`, with the line number on parse errors.
fn parse_histories(text: &str) -> Result<Vec<GrowthHistory>, Error> {
    let mut out = Vec::new();
    for item in serde_json::Deserializer::from_str(text).into_iter::<GrowthHistory>() {
        let h = item.map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        h.validate()?;
        out.push(h);
    }
    if out.is_empty() {
        return Err(Error::Parse {
            line: 1,
            message: "no history found".into(),
        });
    }
    Ok(out)
}

fn analyze(h: &GrowthHistory) -> Result<Value, Error> {
    let tri = StackTriangulation::from_history(h)?;
    let vector = degeneracy_vector(&tri);
    let d = degeneracy(&vector);
    let dual = tri.dual();
    let g = dual.vertex_count();
    let by_identity = &d >> 1;
    let matchings = if g <= MATCHING_GUARD {
        let m = count_perfect_matchings(&dual)?;
        if m != by_identity {
            return Err(Error::OracleMismatch(format!(
                "degeneracy {d} but {m} perfect matchings in the dual"
            )));
        }
        Some(m.to_string())
    } else {
        None
    };
    let tree = match to_tree(&tri) {
        Ok(t) => serde_json::to_value(&t).expect("tree serializes"),
        Err(_) => Value::Null,
    };
    let size = tri.vertex_count();
    let theorem: serde_json::Map<String, Value> = BoundVariant::ALL
        .iter()
        .map(|&v| {
            (
                v.theorem_denominator().to_string(),
                json!(theorem_bound(size, &d, v)),
            )
        })
        .collect();
    let corollary: serde_json::Map<String, Value> = BoundVariant::ALL
        .iter()
        .map(|&v| {
            (
                v.corollary_denominator().to_string(),
                json!(corollary_bound(g, &by_identity, v)),
            )
        })
        .collect();
    Ok(json!({
        "history": h,
        "vertices": size,
        "tree": tree,
        "degeneracy_vector": vector,
        "degeneracy": d.to_string(),
        "dual_size": g,
        "matchings": matchings,
        "theorem": theorem,
        "corollary": corollary,
    }))
}

fn export(h: &GrowthHistory, format: Format, what: What) -> Result<String, Error> {
    let tri = StackTriangulation::from_history(h)?;
    let mut text = match (what, format) {
        (What::Tri, Format::Json) => tri.to_json(),
        (What::Tri, Format::Dot) => tri.to_dot(),
        (What::Tree, Format::Json) => to_tree(&tri)?.to_json(),
        (What::Tree, Format::Dot) => to_tree(&tri)?.to_dot(),
        (What::Dual, Format::Json) => tri.dual().to_json(),
        (What::Dual, Format::Dot) => tri.dual().to_dot(),
    };
    if !text.ends_with('\n') {
        text.push('\n');
    }
    Ok(text)
}

fn configure_threads() {
    let Ok(value) = std::env::var("MATCHSTACK_THREADS") else {
        return;
    };
    match value.parse::<usize>() {
        Ok(n) if n > 0 => {
            rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build_global()
                .expect("global pool is configured once");
        }
        _ => eprintln!("warning: ignoring MATCHSTACK_THREADS={value:?}"),
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn std::error::Error>> {
    let mut out = io::BufWriter::new(io::stdout().lock());
    match cli.command {
        Command::Gen {
            n,
            seed,
            count,
            exhaustive,
        } => {
            if exhaustive {
                for h in enumerate_histories(n) {
                    writeln!(out, "{}", h.to_json())?;
                }
            } else {
                let seed = seed.expect("clap requires a seed without --exhaustive");
                for h in random_histories(n, seed, count) {
                    writeln!(out, "{}", h.to_json())?;
                }
            }
        }
        Command::Analyze { input } => {
            for h in parse_histories(&read_input(&input)?)? {
                writeln!(out, "{}", analyze(&h)?)?;
            }
        }
        Command::Verify {
            suite,
            max_n,
            allow_below,
            random,
            random_max_n,
            seed,
        } => {
            let config = SweepConfig {
                max_n,
                allow_below,
                random_count: random,
                random_max_n,
                seed,
            };
            let report = run_suite(suite, &config);
            writeln!(out, "{}", report.to_json())?;
            out.flush()?;
            if !report.passed() {
                eprintln!(
                    "{}: {} of {} instances failed",
                    suite, report.fail_count, report.instance_count
                );
                return Ok(ExitCode::FAILURE);
            }
        }
        Command::Export {
            input,
            format,
            what,
            output,
        } => {
            let histories = parse_histories(&read_input(&input)?)?;
            let text = export(&histories[0], format, what)?;
            match output {
                Some(path) => fs::write(path, text)?,
                None => out.write_all(text.as_bytes())?,
            }
        }
    }
    out.flush()?;
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    configure_threads();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
