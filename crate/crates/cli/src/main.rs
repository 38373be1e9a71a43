use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};

use waring_core::criteria::{self, certify_timed, CertConfig, Status};
use waring_core::cubics;
use waring_core::field::{Field, PrimeField, RationalField};
use waring_core::io::{DecompositionFile, FieldChoice, ReportFile};
use waring_core::reference;
use waring_core::scan::{self, ScanConfig};

/// Exit code for a decomposition that could not be certified, or a cubic case
/// whose dimensions disagree with the expected ones.
const EXIT_INCONCLUSIVE: u8 = 2;
const EXIT_ERROR: u8 = 1;

#[derive(Parser)]
#[command(name = "waring", version, about = "Certify uniqueness of Waring decompositions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the certification pipeline on a decomposition file and print the report as JSON.
    Certify {
        #[arg(long)]
        input: PathBuf,
        /// `rational`, `prime:<p>`, or `prime` (default prime, or $WARING_PRIME).
        /// Overrides the field named in the file.
        #[arg(long)]
        field: Option<String>,
        /// Wedge degree of the Koszul flattening used for cubics.
        #[arg(long)]
        koszul_a: Option<usize>,
        /// Also run the determinantal tangent test for d >= 4.
        #[arg(long)]
        cross_check: bool,
    },
    /// Certify random decompositions of the given shape over F_p.
    Scan {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
        #[arg(long)]
        r: usize,
        #[arg(long, default_value_t = scan::DEFAULT_TRIALS, value_parser = positive)]
        trials: usize,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        koszul_a: Option<usize>,
    },
    /// Recompute the smoothness-range tables and compare with the reference values.
    Tables {
        #[arg(long, value_parser = clap::value_parser!(u8).range(1..=2))]
        table: u8,
        #[arg(long, default_value_t = 3)]
        max_n: usize,
        /// Largest r probed per row; defaults to one past the reference value.
        #[arg(long)]
        max_r: Option<usize>,
        /// Degrees for table 1.
        #[arg(long, value_delimiter = ',', default_values_t = [4, 5, 6])]
        degrees: Vec<usize>,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        koszul_a: Option<usize>,
    },
    /// Dimension and singular-locus checks for a named configuration of double points.
    Cubics {
        /// Case name; `all` runs every case at its base values of n.
        #[arg(long)]
        case: String,
        /// Defaults to the case's base values.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Kruskal rank and Kruskal's bound for a decomposition file.
    Kruskal {
        #[arg(long)]
        input: PathBuf,
        #[arg(long)]
        field: Option<String>,
    },
    /// Closed-form rank bounds for (n, d).
    Bounds {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        d: usize,
    },
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".into()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

fn prime_or_default(p: Option<u64>) -> Result<u64> {
    Ok(match p {
        Some(p) => PrimeField::new(p)?.modulus(),
        None => PrimeField::from_env()?.modulus(),
    })
}

fn load(input: &PathBuf, field: Option<&str>) -> Result<(DecompositionFile, FieldChoice)> {
    let text = fs::read_to_string(input).with_context(|| format!("reading {}", input.display()))?;
    let file = DecompositionFile::parse(&text)?;
    let choice = match field {
        Some(s) => FieldChoice::parse(s)?,
        None => file.field_choice()?,
    };
    Ok((file, choice))
}

fn run_certify<F: Field>(file: &DecompositionFile, field: F, cfg: &CertConfig) -> Result<Status> {
    let w = file.input(field)?;
    let (report, timings) = certify_timed(&w, cfg)?;
    let status = report.status;
    println!("{}", ReportFile::new(report, timings).to_json());
    Ok(status)
}

fn run_kruskal<F: Field>(file: &DecompositionFile, field: F) -> Result<()> {
    let w = file.input(field)?;
    println!("{}", serde_json::to_string_pretty(&criteria::kruskal_check(&w))?);
    Ok(())
}

fn cell(v: Option<usize>) -> String {
    v.map_or("*".into(), |x| x.to_string())
}

fn print_row(label: &str, values: &[String]) {
    let cells: Vec<String> = values.iter().map(|v| format!("{v:>4}")).collect();
    println!("{label:<9}{}", cells.join(""));
}

/// Computed value for a row; `>=k` when every probe passed, so the true maximum
/// may be larger than the probe budget.
fn shown(row: &scan::TableRow) -> String {
    if row.max_pass == row.probes.len() {
        format!(">={}", row.max_pass)
    } else {
        row.max_pass.to_string()
    }
}

fn run_tables(
    table: u8,
    max_n: usize,
    max_r: Option<usize>,
    degrees: &[usize],
    prime: u64,
    seed: u64,
    koszul_a: Option<usize>,
) -> Result<bool> {
    let ns: Vec<usize> = (1..=max_n).collect();
    let header: Vec<String> = ns.iter().map(|n| n.to_string()).collect();
    let mut all_match = true;
    if table == 2 {
        let mut computed = Vec::new();
        let mut expected = Vec::new();
        let mut notes = Vec::new();
        for &n in &ns {
            let budget = max_r.unwrap_or_else(|| {
                reference::table2(n).map_or(reference::generic_rank(n, 3), |v| v + 1)
            });
            let row = scan::table2_row(n, budget, prime, seed, koszul_a)?;
            all_match &= row.reference.is_none_or(|v| v == row.max_pass);
            if let Some(note) = row.probe(row.max_pass).and_then(|p| p.note.clone()) {
                notes.push(format!("n={n}, r={}: Koszul {note}", row.max_pass));
            }
            computed.push(shown(&row));
            expected.push(cell(row.reference));
        }
        println!("table 2 (d = 3, Koszul flattening)");
        print_row("n", &header);
        print_row("computed", &computed);
        print_row("expected", &expected);
        for note in notes {
            println!("note: {note}");
        }
    } else {
        for &d in degrees {
            if d < 4 {
                bail!("table 1 covers d >= 4, got {d}");
            }
            let mut computed = Vec::new();
            let mut expected = Vec::new();
            let mut spade = Vec::new();
            let mut square = Vec::new();
            for &n in &ns {
                let refs = reference::table1(n, d);
                let budget = max_r.unwrap_or_else(|| {
                    refs.and_then(|t| t.club)
                        .map_or(reference::generic_rank(n, d), |v| v + 1)
                });
                let row = scan::table1_row(d, n, budget, prime, seed)?;
                all_match &= row.reference.is_none_or(|v| v == row.max_pass);
                computed.push(shown(&row));
                expected.push(cell(row.reference));
                spade.push(reference::spade_formula(n, d).to_string());
                square.push(reference::kruskal_formula(n, d).to_string());
            }
            println!("table 1, d = {d} (catalecticant)");
            print_row("n", &header);
            print_row("spade", &spade);
            print_row("computed", &computed);
            print_row("expected", &expected);
            print_row("kruskal", &square);
        }
    }
    println!("{}", if all_match { "MATCH" } else { "MISMATCH" });
    println!("note: {}", scan::GENERIC_NOTE);
    Ok(all_match)
}

fn run_cubics(case: &str, n: Option<usize>, seed: u64, prime: u64) -> Result<bool> {
    let cases: Vec<&cubics::CaseDef> = if case == "all" {
        cubics::REGISTRY.iter().collect()
    } else {
        vec![cubics::find_case(case)?]
    };
    let prefixed = n.is_none() || cases.len() > 1;
    let mut all_match = true;
    for c in cases {
        let ns = match n {
            Some(n) => vec![n],
            None => c.base_cases.to_vec(),
        };
        for n in ns {
            let out = cubics::run_case(c.name, n, seed, prime)?;
            all_match &= out.matches;
            if prefixed {
                println!("{} n={n}: {}", c.name, out.line());
            } else {
                println!("{}", out.line());
            }
        }
    }
    Ok(all_match)
}

fn run(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::Certify {
            input,
            field,
            koszul_a,
            cross_check,
        } => {
            let (file, choice) = load(&input, field.as_deref())?;
            let cfg = CertConfig { koszul_a, cross_check };
            let status = match choice {
                FieldChoice::Rational => run_certify(&file, RationalField, &cfg)?,
                FieldChoice::Prime(p) => run_certify(&file, PrimeField::new(p)?, &cfg)?,
            };
            Ok(match status {
                Status::Identifiable => 0,
                Status::Inconclusive => EXIT_INCONCLUSIVE,
            })
        }
        Command::Scan {
            n,
            d,
            r,
            trials,
            prime,
            seed,
            koszul_a,
        } => {
            let cfg = ScanConfig {
                n,
                d,
                r,
                trials,
                prime: prime_or_default(prime)?,
                seed,
                koszul_a,
            };
            let result = scan::generic_scan(&cfg)?;
            println!("{}", serde_json::to_string_pretty(&result)?);
            Ok(0)
        }
        Command::Tables {
            table,
            max_n,
            max_r,
            degrees,
            prime,
            seed,
            koszul_a,
        } => {
            let ok = run_tables(table, max_n, max_r, &degrees, prime_or_default(prime)?, seed, koszul_a)?;
            Ok(if ok { 0 } else { EXIT_INCONCLUSIVE })
        }
        Command::Cubics { case, n, seed, prime } => {
            let ok = run_cubics(&case, n, seed, prime_or_default(prime)?)?;
            Ok(if ok { 0 } else { EXIT_INCONCLUSIVE })
        }
        Command::Kruskal { input, field } => {
            let (file, choice) = load(&input, field.as_deref())?;
            match choice {
                FieldChoice::Rational => run_kruskal(&file, RationalField)?,
                FieldChoice::Prime(p) => run_kruskal(&file, PrimeField::new(p)?)?,
            }
            Ok(0)
        }
        Command::Bounds { n, d } => {
            println!("{}", serde_json::to_string_pretty(&criteria::bounds(n, d)?)?);
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // help and version requests are not errors
            return if e.use_stderr() {
                ExitCode::from(EXIT_ERROR)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(EXIT_ERROR)
        }
    }
}
