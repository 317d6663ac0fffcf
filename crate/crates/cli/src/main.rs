use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tracediag::dsl::{self, DiagramSet};
use tracediag::lab::{self, oracle, Identity, VerificationReport};
use tracediag::{scalar, Error, FormalSum, FunctionMatrix, MatrixBinding};

/// Exact evaluation of trace diagrams and checks of diagrammatic matrix identities.
#[derive(Parser, Debug)]
#[command(name = "tracediag", version)]
struct Cli {
    /// Worker threads for parallel trials (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,

    /// Include wall-clock timings, which makes output run-dependent.
    #[arg(long, global = true)]
    timing: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    /// One JSON object per line.
    Records,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Evaluate a diagram (`.tdg`) or relation (`.trel`).
    Eval {
        file: PathBuf,
        /// Matrix and vector bindings (`.tmat`).
        #[arg(long)]
        bind: Option<PathBuf>,
        /// Entry of the diagram set to evaluate.
        #[arg(long)]
        diagram: Option<String>,
    },
    /// Check an identity on random exact inputs.
    Verify {
        identity: String,
        /// Dimension; every default dimension of the identity when omitted.
        #[arg(long)]
        dim: Option<usize>,
        #[arg(long, default_value_t = 20)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Characteristic polynomial coefficients from diagrams and from the oracle.
    Charpoly {
        #[arg(long)]
        bind: PathBuf,
        #[arg(long, default_value = "A")]
        matrix: String,
    },
    /// Compare the generalized Cayley–Hamilton diagram with the polarized identity.
    Polarize {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 5)]
        samples: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Ratios of the Pfaffian diagram to the Pfaffian.
    Pfaffian {
        #[arg(long)]
        dim: usize,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

/// Why a command stopped short of success.
enum Failure {
    /// A check ran and found a counterexample.
    Verification,
    Input(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Input(e.to_string())
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let pool = match rayon::ThreadPoolBuilder::new()
        .num_threads(cli.jobs.unwrap_or(0))
        .build()
    {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    };
    match pool.install(|| run(&cli)) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Input(message)) => {
            eprintln!("error: {message}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: &Cli) -> Outcome {
    match &cli.command {
        Command::Eval {
            file,
            bind,
            diagram,
        } => eval(cli, file, bind.as_deref(), diagram.as_deref()),
        Command::Verify {
            identity,
            dim,
            trials,
            seed,
        } => {
            let identity: Identity = identity.parse()?;
            let dims = match dim {
                Some(n) => vec![*n],
                None => identity.default_dims().to_vec(),
            };
            let mut ok = true;
            for n in dims {
                let report = lab::verify(identity, n, *trials, *seed)?;
                ok &= report.passed();
                emit_report(cli, &report);
            }
            verdict(ok)
        }
        Command::Charpoly { bind, matrix } => charpoly(cli, bind, matrix),
        Command::Polarize { dim, samples, seed } => {
            let report = lab::polarization_check(*dim, *samples, *seed)?;
            emit_report(cli, &report.to_report());
            verdict(report.passed())
        }
        Command::Pfaffian { dim, trials, seed } => {
            let scan = lab::pfaffian_scan(*dim, *trials, *seed)?;
            let report = scan.to_report(*seed);
            emit_report(cli, &report);
            verdict(report.passed())
        }
    }
}

fn verdict(ok: bool) -> Outcome {
    if ok {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn emit_report(cli: &Cli, report: &VerificationReport) {
    match cli.format {
        Format::Text => print!("{}", report.to_text(cli.timing)),
        Format::Records => {
            for r in report.records(cli.timing) {
                println!("{r}");
            }
        }
    }
}

fn load_sum(file: &Path, name: Option<&str>) -> Result<FormalSum, Failure> {
    if file.extension().is_some_and(|e| e == "trel") {
        if name.is_some() {
            return Err(Failure::Input("--diagram does not apply to a relation file".into()));
        }
        return Ok(dsl::load_relation(file)?);
    }
    let set: DiagramSet = dsl::load_diagram_set(file)?;
    let name = match name {
        Some(n) => n,
        None => set.default_name().ok_or_else(|| {
            Failure::Input(format!(
                "{} holds several diagrams; pick one with --diagram ({})",
                file.display(),
                set.names().collect::<Vec<_>>().join(", ")
            ))
        })?,
    };
    Ok(set.get(name)?)
}

fn eval(cli: &Cli, file: &Path, bind: Option<&Path>, name: Option<&str>) -> Outcome {
    let sum = load_sum(file, name)?;
    let binding = match bind {
        Some(p) => dsl::load_matrix_file(p)?,
        None => MatrixBinding::new(sum.dimension()),
    };
    if binding.dimension() != sum.dimension() {
        return Err(Error::DimensionMismatch {
            expected: sum.dimension().get(),
            found: binding.dimension().get(),
        }
        .into());
    }
    for (_, d) in sum.terms() {
        binding.check_covers(d)?;
    }
    let f = sum.function_matrix(&binding)?;
    match cli.format {
        Format::Text => print!("{}", function_text(&f)),
        Format::Records => println!("{}", function_record(&f)),
    }
    Ok(())
}

/// A scalar on one line, or a header and one row per output basis vector.
fn function_text(f: &FunctionMatrix) -> String {
    if let Some(s) = f.scalar() {
        return format!("{}\n", scalar::format(s));
    }
    let m = f.matrix();
    let mut out = format!(
        "function n={} inputs={} outputs={} rows={} cols={}\n",
        f.n(),
        f.inputs(),
        f.outputs(),
        m.rows(),
        m.cols()
    );
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(scalar::format).collect();
        out.push_str(&row.join(" "));
        out.push('\n');
    }
    out
}

fn function_record(f: &FunctionMatrix) -> Value {
    if let Some(s) = f.scalar() {
        return json!({ "record": "value", "value": scalar::format(s) });
    }
    let m = f.matrix();
    let rows: Vec<Vec<String>> = (0..m.rows())
        .map(|i| m.row(i).iter().map(scalar::format).collect())
        .collect();
    json!({
        "record": "function",
        "n": f.n(),
        "inputs": f.inputs(),
        "outputs": f.outputs(),
        "rows": rows,
    })
}

fn charpoly(cli: &Cli, bind: &Path, label: &str) -> Outcome {
    let binding = dsl::load_matrix_file(bind)?;
    let a = binding.matrix(label)?;
    let diagrams = lab::charpoly_diagrammatic(a)?;
    let classical = oracle::charpoly_oracle(a);
    let agree = diagrams == classical;
    let fmt = |c: &[tracediag::Scalar]| c.iter().map(scalar::format).collect::<Vec<_>>();
    match cli.format {
        Format::Text => {
            println!("diagram {}", fmt(&diagrams).join(" "));
            println!("oracle {}", fmt(&classical).join(" "));
            println!("{}", if agree { "match" } else { "mismatch" });
        }
        Format::Records => println!(
            "{}",
            json!({
                "record": "charpoly",
                "matrix": label,
                "dimension": binding.dimension().get(),
                "diagram": fmt(&diagrams),
                "oracle": fmt(&classical),
                "match": agree,
            })
        ),
    }
    verdict(agree)
}
