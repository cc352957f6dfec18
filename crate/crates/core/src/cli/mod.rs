//! `kscert` command line.
//!
//! Exit codes: 0 on success (or the expected physics), 1 for usage and I/O
//! errors, 2 when a result contradicts the expected physics.

mod complex_arg;

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

pub use complex_arg::{parse_complex, parse_qubit_pair};

use crate::json::{self, to_canonical_string};
use crate::peres_ks::{
    certificate_json, complete_bases, orthogonality_graph, parse_ray_set, peres_33, solve_coloring, to_dot,
    write_ray_set, ColoringProblem, PeresStructure, RaySet,
};
use crate::qsim::{
    circuit_instrument, classify_preparation, mub_set, probs_to_state, run_circuit, state_to_probs, CVector,
    DensityOperator, PrepCircuit, Preparation, PureState,
};
use crate::stairs;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_PHYSICS: i32 = 2;

/// Round-trip tolerance for `tomo roundtrip`.
pub const TOMO_TOL: f64 = 1e-10;

#[derive(Parser, Debug)]
#[command(name = "kscert", version, about = "Kochen-Specker prover and quantum preparation simulator")]
pub struct RunConfig {
    /// Write output here instead of standard output.
    #[arg(long, global = true)]
    pub output: Option<PathBuf>,
    /// Seed for randomized checks.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Peres ray set, its basis completion, and the orthogonality graph.
    Peres {
        #[command(subcommand)]
        what: PeresCmd,
    },
    /// Kochen-Specker noncolorability.
    Ks {
        #[command(subcommand)]
        what: KsCmd,
    },
    /// Steering on the entangled qutrit pair.
    Stairs {
        #[command(subcommand)]
        what: StairsCmd,
    },
    /// Two-qubit preparation circuits.
    Prep {
        #[command(subcommand)]
        what: PrepCmd,
    },
    /// Mutually-unbiased-basis reconstruction.
    Tomo {
        #[command(subcommand)]
        what: TomoCmd,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Dot,
    Text,
}

#[derive(Subcommand, Debug)]
pub enum PeresCmd {
    /// The 33 Peres rays.
    Rays {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// The completed 57-ray, 40-basis structure.
    Bases {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
    /// Orthogonality graph of the completed ray set.
    Graph {
        #[arg(long, value_enum, default_value_t = Format::Json)]
        format: Format,
    },
}

#[derive(Subcommand, Debug)]
pub enum KsCmd {
    /// Search for a value map; exits 0 on UNSAT.
    Prove {
        /// Ray-set file to complete and color instead of the Peres set.
        #[arg(long, visible_alias = "bases-file")]
        rays_file: Option<PathBuf>,
    },
}

#[derive(Subcommand, Debug)]
pub enum StairsCmd {
    Verify {
        /// 1-based basis index; all bases when omitted.
        #[arg(long)]
        k: Option<usize>,
    },
}

#[derive(Subcommand, Debug)]
pub enum PrepCmd {
    Demo(PrepArgs),
}

#[derive(Args, Debug)]
pub struct PrepArgs {
    #[arg(long, value_parser = parse_circuit)]
    pub circuit: PrepCircuit,
    /// Amplitude of |0⟩ in the system input, `re[+im i]`.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "1")]
    pub alpha: Complex64,
    /// Amplitude of |1⟩ in the system input.
    #[arg(long, value_parser = parse_complex, allow_hyphen_values = true, default_value = "0")]
    pub beta: Complex64,
    /// Apparatus input: 0, 1, +, - or AMP0,AMP1 (default |0⟩, or |1⟩ for circuit c).
    #[arg(long, value_parser = parse_qubit_pair, allow_hyphen_values = true)]
    pub apparatus: Option<[Complex64; 2]>,
}

fn parse_circuit(s: &str) -> Result<PrepCircuit, String> {
    s.parse()
}

#[derive(Subcommand, Debug)]
pub enum TomoCmd {
    Roundtrip {
        #[arg(long, value_parser = clap::builder::PossibleValuesParser::new(["2", "3"]))]
        dim: String,
        #[arg(long, default_value_t = 100)]
        trials: usize,
    },
}

/// A finished command: text to emit and the exit code.
struct Outcome {
    text: String,
    code: i32,
}

impl Outcome {
    fn json(v: &Value, code: i32) -> Self {
        Outcome { text: to_canonical_string(v), code }
    }
}

/// Parses `args` (including the program name) and runs the command.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cfg = match RunConfig::try_parse_from(args) {
        Ok(cfg) => cfg,
        Err(e) => {
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let target: &mut dyn Write = if code == EXIT_OK { stdout } else { stderr };
            let _ = write!(target, "{}", e.render());
            return code;
        }
    };
    let outcome = match execute(&cfg) {
        Ok(o) => o,
        Err(msg) => {
            let _ = writeln!(stderr, "error: {msg}");
            return EXIT_USAGE;
        }
    };
    let written = match &cfg.output {
        Some(path) => std::fs::write(path, &outcome.text).map_err(|e| format!("{}: {e}", path.display())),
        None => stdout.write_all(outcome.text.as_bytes()).map_err(|e| e.to_string()),
    };
    if let Err(msg) = written {
        let _ = writeln!(stderr, "error: {msg}");
        return EXIT_USAGE;
    }
    outcome.code
}

fn execute(cfg: &RunConfig) -> Result<Outcome, String> {
    match &cfg.command {
        Command::Peres { what } => cmd_peres(what),
        Command::Ks { what: KsCmd::Prove { rays_file } } => cmd_ks_prove(rays_file.as_ref()),
        Command::Stairs { what: StairsCmd::Verify { k } } => cmd_stairs(*k),
        Command::Prep { what: PrepCmd::Demo(args) } => cmd_prep(args),
        Command::Tomo { what: TomoCmd::Roundtrip { dim, trials } } => {
            cmd_tomo(dim.parse().expect("restricted to 2 or 3"), *trials, cfg.seed)
        }
    }
}

fn rays_json(set: &RaySet) -> Value {
    Value::Array(
        set.rays()
            .iter()
            .enumerate()
            .map(|(id, r)| {
                let v = r.vector();
                json!({"id": id, "components": [v.x.to_string(), v.y.to_string(), v.z.to_string()]})
            })
            .collect(),
    )
}

fn unsupported(format: Format, cmd: &str) -> String {
    format!("format {format:?} is not available for `peres {cmd}`").to_lowercase()
}

fn cmd_peres(what: &PeresCmd) -> Result<Outcome, String> {
    match *what {
        PeresCmd::Rays { format } => {
            let set = peres_33();
            match format {
                Format::Json => Ok(Outcome::json(&json!({"count": set.len(), "rays": rays_json(&set)}), EXIT_OK)),
                Format::Text => Ok(Outcome { text: write_ray_set(&set), code: EXIT_OK }),
                Format::Dot => Err(unsupported(format, "rays")),
            }
        }
        PeresCmd::Bases { format } => {
            let peres = PeresStructure::build();
            match format {
                Format::Json => {
                    let members: Vec<Value> = peres
                        .bases
                        .iter()
                        .enumerate()
                        .map(|(k, b)| json!({"k": k + 1, "members": b.members()}))
                        .collect();
                    let v = json!({
                        "rays": peres.rays.len(),
                        "bases": peres.bases.len(),
                        "original_rays": 33,
                        "ray_list": rays_json(&peres.rays),
                        "basis_list": members,
                    });
                    Ok(Outcome::json(&v, EXIT_OK))
                }
                Format::Text => Ok(Outcome { text: write_ray_set(&peres.rays), code: EXIT_OK }),
                Format::Dot => Err(unsupported(format, "bases")),
            }
        }
        PeresCmd::Graph { format } => {
            let peres = PeresStructure::build();
            match format {
                Format::Dot => Ok(Outcome { text: to_dot(&peres.rays), code: EXIT_OK }),
                Format::Json => {
                    let edges = orthogonality_graph(&peres.rays);
                    let v = json!({"nodes": peres.rays.len(), "edge_count": edges.len(), "edges": edges});
                    Ok(Outcome::json(&v, EXIT_OK))
                }
                Format::Text => Err(unsupported(format, "graph")),
            }
        }
    }
}

fn cmd_ks_prove(rays_file: Option<&PathBuf>) -> Result<Outcome, String> {
    let problem = match rays_file {
        None => PeresStructure::build().problem(),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
            let set = parse_ray_set(&text).map_err(|e| format!("{}: {e}", path.display()))?;
            let (rays, bases) = complete_bases(&set);
            ColoringProblem::new(rays.len(), bases).map_err(|e| e.to_string())?
        }
    };
    let cert = solve_coloring(&problem);
    let code = if cert.is_unsat() { EXIT_OK } else { EXIT_PHYSICS };
    Ok(Outcome::json(&certificate_json(&cert), code))
}

fn cmd_stairs(k: Option<usize>) -> Result<Outcome, String> {
    let peres = PeresStructure::build();
    let which: Vec<usize> = k.into_iter().collect();
    let mut report = stairs::verify_certainties(&peres, &which).map_err(|e| e.to_string())?;
    report.coloring = Some(solve_coloring(&stairs::local_value_problem(&peres)));
    let unsat = report.coloring.as_ref().is_some_and(|c| c.is_unsat());
    let code = if report.all_certain() && unsat { EXIT_OK } else { EXIT_PHYSICS };
    Ok(Outcome::json(&report.to_json(), code))
}

fn density_json(rho: &DensityOperator) -> Value {
    json::matrix(rho.matrix())
}

fn preparation_json(p: &Preparation) -> Value {
    json!({
        "class": p.label(),
        "state": p.state().map_or(Value::Null, density_json),
    })
}

fn normalized_qubit(amps: [Complex64; 2], what: &str) -> Result<PureState, String> {
    let norm2 = amps[0].norm_sqr() + amps[1].norm_sqr();
    if (norm2 - 1.0).abs() > 1e-9 {
        log::warn!("{what} has squared norm {norm2}; normalizing");
    }
    PureState::normalized(CVector::from_vec(amps.to_vec())).map_err(|_| format!("{what} is the zero vector"))
}

fn cmd_prep(args: &PrepArgs) -> Result<Outcome, String> {
    let system = normalized_qubit([args.alpha, args.beta], "system state")?;
    let apparatus = match args.apparatus {
        Some(a) => normalized_qubit(a, "apparatus state")?,
        None => args.circuit.default_apparatus(),
    };
    let run = run_circuit(args.circuit, &system, &apparatus).map_err(|e| e.to_string())?;
    let inst = circuit_instrument(args.circuit, &apparatus).map_err(|e| e.to_string())?;
    let overall = classify_preparation(&inst.coarse_grained(), 0).map_err(|e| e.to_string())?;
    let per_outcome: Vec<Value> = (0..inst.outcome_count())
        .map(|d| classify_preparation(&inst, d).map(|p| preparation_json(&p)))
        .collect::<Result<_, _>>()
        .map_err(|e| e.to_string())?;
    let outcomes = run.outcomes.map_or(Value::Null, |[p0, p1]| json!({"0": json::num(p0), "1": json::num(p1)}));
    let v = json!({
        "circuit": args.circuit.to_string(),
        "system_in": json::vector(system.amplitudes()),
        "apparatus_in": json::vector(apparatus.amplitudes()),
        "system_out": density_json(&run.system_out),
        "apparatus_out": density_json(&run.apparatus_out),
        "outcomes": outcomes,
        "preparation": preparation_json(&overall),
        "preparation_per_outcome": per_outcome,
    });
    Ok(Outcome::json(&v, EXIT_OK))
}

fn cmd_tomo(dim: usize, trials: usize, seed: u64) -> Result<Outcome, String> {
    let mubs = mub_set(dim).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut worst: f64 = 0.0;
    for _ in 0..trials {
        let rho = DensityOperator::random(dim, &mut rng);
        let table = state_to_probs(&rho, &mubs).map_err(|e| e.to_string())?;
        let back = probs_to_state(&table.rows, &mubs).map_err(|e| e.to_string())?;
        worst = worst.max(crate::qsim::trace_distance(&back.matrix, rho.matrix()));
    }
    let pass = worst < TOMO_TOL;
    let v = json!({
        "dim": dim,
        "trials": trials,
        "seed": seed,
        "max_trace_distance": json::num(worst),
        "unbiasedness_error": json::num(mubs.unbiasedness_error()),
        "pass": pass,
    });
    Ok(Outcome::json(&v, if pass { EXIT_OK } else { EXIT_PHYSICS }))
}
