//! Single-binary workbench: entanglement measures, LOCC transformation
//! criteria, the antisymmetric-state linear-programming series,
//! order-permutation distillation, quantized two-player games, and
//! distributed-gate verification — all with reproducible seeds and
//! machine-readable output (JSON or CSV).

mod formats;

use std::fmt::Write as _;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use entkit_core::games::{self, GameSpec, StrategyPoint, StrategySet};
use entkit_core::measures::{self, ReferenceSet};
use entkit_core::nlgates;
use entkit_core::perm_distill;
use entkit_core::qla::log2;
use entkit_core::rng::SplitRng;
use entkit_core::transform::{self, TransformVerdict, Witness};
use entkit_core::werner_lp;

use formats::{fmt_sig, load_state, parse_cut, parse_spectrum, parse_split, MatrixJson};

/// CLI failure with its process exit code: 2 for usage/validation
/// errors, 3 when a solver stopped before its tolerance (the partial
/// result has already been printed).
pub struct CliError {
    message: String,
    code: u8,
}

impl CliError {
    pub(crate) fn usage(message: impl Into<String>) -> Self {
        CliError {
            message: message.into(),
            code: 2,
        }
    }

    pub(crate) fn compute(err: entkit_core::Error) -> Self {
        CliError {
            message: err.to_string(),
            code: 2,
        }
    }

    fn not_converged() -> Self {
        CliError {
            message: "computation did not converge; partial result above".into(),
            code: 3,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "entkit",
    about = "Workbench for finite-dimensional entanglement analysis",
    long_about = "Workbench for finite-dimensional entanglement analysis: \
entanglement monotones and their minimizers, LOCC/catalysis criteria for \
pure-state transformations, the symmetric-group-reduced linear programs \
behind the antisymmetric Werner state series, distillation after losing \
the pair-order record, branch-exact verification of distributed gate \
protocols, and quantized two-player games.\n\nAll stochastic commands \
take --seed and echo it; output is byte-identical across runs with the \
same seed and flags. ENTKIT_THREADS caps internal parallelism (the \
current solvers are single-threaded, so any cap is honored trivially)."
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Seed for every stochastic component; echoed in the output.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Emit a named or file-loaded state as matrix JSON.
    State(StateArgs),
    /// Entanglement measures: negativity family, two-qubit concurrence
    /// and formation, relative-entropy minimizers, trace-norm measure,
    /// Schmidt measure bounds, and the product-reference Monte-Carlo.
    Measure(MeasureArgs),
    /// Pure-state LOCC transformation criteria: majorization check,
    /// catalysis, power-sum obstruction, optimal fidelity.
    Transform(TransformArgs),
    /// Regularized relative-entropy series for copies of the
    /// antisymmetric Werner state via exact-rational linear programs.
    Werner(WernerArgs),
    /// Distillable entanglement after losing the pair-order record.
    Permute(PermuteArgs),
    /// Quantized two-player binary-choice games: payoffs, equilibrium
    /// checks, and the unfair-game entanglement sweep.
    Game(GameArgs),
    /// Distributed-gate protocols: resource ledgers, exact channel
    /// equivalence, and per-branch traces.
    Gate(GateArgs),
    /// Regenerate the data sets behind the bundled figures and tables.
    Repro(ReproArgs),
}

#[derive(Args)]
struct StateArgs {
    /// Factory string (ghz:3, w:4, bell:phi+, cluster4, product:0101,
    /// schmidt:0.5,0.3,0.2, werner2:0.75, wernersym:0.0:3) or a JSON
    /// file path.
    source: String,
}

#[derive(Args)]
struct MeasureArgs {
    /// One of: negativity, log-negativity, concurrence, eof, rel-ent,
    /// trace-norm, schmidt-measure, werner-schmidt, conjecture210.
    name: String,
    /// State source: factory string or JSON file.
    #[arg(long)]
    state: Option<String>,
    /// Subsystem indices of side A, comma separated.
    #[arg(long, default_value = "0")]
    cut: String,
    /// Solver tolerance where applicable.
    #[arg(long, default_value_t = 1e-3)]
    tol: f64,
    /// Reference set for rel-ent: separable, ppt,
    /// separable-fixed-marginals, ppt-fixed-marginals.
    #[arg(long, default_value = "separable")]
    reference: String,
    /// Partition for schmidt-measure, e.g. 0/1/2,3.
    #[arg(long)]
    split: Option<String>,
    /// Trials for conjecture210.
    #[arg(long, default_value_t = 5000)]
    trials: u64,
    /// Werner weight for werner-schmidt.
    #[arg(long)]
    lambda: Option<f64>,
}

#[derive(Args)]
struct TransformArgs {
    #[command(subcommand)]
    action: TransformAction,
}

#[derive(Subcommand)]
enum TransformAction {
    /// Majorization criterion for an exact transformation.
    Check(SpectraPair),
    /// Catalysis check with an explicit catalyst spectrum.
    Catalyst(CatalystArgs),
    /// Power-sum falsification search for any catalyst.
    Obstruct(SpectraPair),
    /// Best reachable fidelity toward a pure target.
    Fidelity(SpectraPair),
}

#[derive(Args)]
struct SpectraPair {
    /// Source Schmidt probabilities, comma separated.
    #[arg(long)]
    source: String,
    /// Target Schmidt probabilities, comma separated.
    #[arg(long)]
    target: String,
}

#[derive(Args)]
struct CatalystArgs {
    #[command(flatten)]
    pair: SpectraPair,
    /// Catalyst Schmidt probabilities, comma separated.
    #[arg(long)]
    catalyst: String,
}

#[derive(Args)]
struct WernerArgs {
    #[command(subcommand)]
    action: WernerAction,
}

#[derive(Subcommand)]
enum WernerAction {
    /// CSV of (n, e_n): per-copy entanglement bound of n antisymmetric
    /// copies, optionally at a symmetric admixture λ.
    Series {
        #[arg(long, default_value_t = 7)]
        n: usize,
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// The exact optimal probability vector for one copy count.
    Optimum {
        #[arg(long)]
        n: usize,
    },
}

#[derive(Args)]
struct PermuteArgs {
    /// Number of shared pairs (even).
    #[arg(long)]
    n: Option<usize>,
    /// Schmidt weight of each pair.
    #[arg(long, default_value_t = 0.5)]
    alpha: f64,
    /// Emit a CSV sweep over α instead of a single report.
    #[arg(long)]
    sweep: bool,
    /// Points in the α sweep.
    #[arg(long, default_value_t = 51)]
    points: usize,
}

#[derive(Args)]
struct GameArgs {
    #[command(subcommand)]
    action: GameAction,
}

#[derive(Clone, Args)]
struct GameSelector {
    /// pd, chicken, or a JSON file {"payoff_a":[..4],"payoff_b":[..4]}.
    #[arg(long, default_value = "pd")]
    game: String,
    /// Entangling parameter γ in [0, π/2]; defaults to the maximum.
    #[arg(long)]
    gamma: Option<f64>,
}

#[derive(Subcommand)]
enum GameAction {
    /// Expected payoffs for an explicit strategy pair.
    Payoff {
        #[command(flatten)]
        selector: GameSelector,
        /// Alice's strategy: C, D, Q, M, s1:θ, s2:θ:φ or su2:θ:φ1:φ2.
        #[arg(long)]
        alice: String,
        /// Bob's strategy, same grammar.
        #[arg(long)]
        bob: String,
    },
    /// Grid-plus-polish Nash check of a strategy pair within a set.
    Nash {
        #[command(flatten)]
        selector: GameSelector,
        #[arg(long)]
        alice: String,
        #[arg(long)]
        bob: String,
        /// Strategy set: s1, s2 or su2.
        #[arg(long, default_value = "s2")]
        set: String,
        #[arg(long, default_value_t = 64)]
        grid: usize,
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
    /// CSV of the guaranteed quantum-vs-classical payoff m(γ).
    Sweep {
        #[command(flatten)]
        selector: GameSelector,
        #[arg(long, default_value_t = 33)]
        points: usize,
        #[arg(long, default_value_t = 128)]
        grid: usize,
    },
    /// Payoff of the maximally-mixing focal strategy pair.
    Focal {
        #[command(flatten)]
        selector: GameSelector,
    },
}

#[derive(Args)]
struct GateArgs {
    #[command(subcommand)]
    action: GateAction,
}

#[derive(Subcommand)]
enum GateAction {
    /// Ledger plus exact channel-equivalence verdict for a protocol:
    /// cnot, cu, swap, toffoli, or ncu:N.
    Verify {
        #[arg(long)]
        protocol: String,
    },
    /// Per-branch transcripts and probabilities on a basis input.
    Trace {
        #[arg(long)]
        protocol: String,
        /// Computational-basis input bits for the data register.
        #[arg(long)]
        input: Option<String>,
    },
}

#[derive(Args)]
struct ReproArgs {
    /// One of: werner-series, permute-sweep, game-sweep, schmidt-pure,
    /// schmidt-mixed, lp-optima.
    target: String,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

fn print_json(value: &serde_json::Value) {
    println!(
        "{}",
        serde_json::to_string_pretty(value).expect("serializable")
    );
}

fn dispatch(cli: Cli) -> Result<(), CliError> {
    let seed = cli.seed;
    match cli.command {
        Command::State(args) => {
            let rho = load_state(&args.source)?;
            let mut value =
                serde_json::to_value(MatrixJson::from_density(&rho)).expect("serializable");
            value["seed"] = json!(seed);
            print_json(&value);
            Ok(())
        }
        Command::Measure(args) => run_measure(args, seed),
        Command::Transform(args) => run_transform(args, seed),
        Command::Werner(args) => run_werner(args, seed),
        Command::Permute(args) => run_permute(args, seed),
        Command::Game(args) => run_game(args, seed),
        Command::Gate(args) => run_gate(args, seed),
        Command::Repro(args) => run_repro(args, seed),
    }
}

#[derive(Serialize)]
struct MeasureOutput {
    measure: String,
    value: f64,
    method: String,
    gap: f64,
    converged: bool,
    seed: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    certificate: Option<MatrixJson>,
}

fn run_measure(args: MeasureArgs, seed: u64) -> Result<(), CliError> {
    let cut = parse_cut(&args.cut)?;
    let need_state = || -> Result<entkit_core::qla::DensityMatrix, CliError> {
        load_state(
            args.state
                .as_deref()
                .ok_or_else(|| CliError::usage("--state is required for this measure"))?,
        )
    };
    let simple = |name: &str, value: f64| MeasureOutput {
        measure: name.into(),
        value,
        method: "closed-form".into(),
        gap: 0.0,
        converged: true,
        seed,
        certificate: None,
    };
    let output = match args.name.as_str() {
        "negativity" => {
            let rho = need_state()?;
            simple(
                "negativity",
                measures::negativity(&rho, &cut).map_err(CliError::compute)?,
            )
        }
        "log-negativity" => {
            let rho = need_state()?;
            simple(
                "log-negativity",
                measures::log_negativity(&rho, &cut).map_err(CliError::compute)?,
            )
        }
        "concurrence" => {
            let rho = need_state()?;
            simple(
                "concurrence",
                measures::concurrence(&rho).map_err(CliError::compute)?,
            )
        }
        "eof" => {
            let rho = need_state()?;
            simple(
                "eof",
                measures::eof_two_qubit(&rho).map_err(CliError::compute)?,
            )
        }
        "rel-ent" => {
            let rho = need_state()?;
            let reference = match args.reference.as_str() {
                "separable" => ReferenceSet::Separable,
                "ppt" => ReferenceSet::Ppt,
                "separable-fixed-marginals" => ReferenceSet::SeparableFixedMarginals,
                "ppt-fixed-marginals" => ReferenceSet::PptFixedMarginals,
                other => return Err(CliError::usage(format!("unknown reference `{other}`"))),
            };
            let r = measures::rel_ent_entanglement(&rho, &cut, reference, args.tol)
                .map_err(CliError::compute)?;
            MeasureOutput {
                measure: format!("rel-ent:{}", reference.as_str()),
                value: r.value,
                method: r.method.as_str().into(),
                gap: r.gap,
                converged: r.converged,
                seed,
                certificate: r.certificate.as_ref().map(MatrixJson::from_density),
            }
        }
        "trace-norm" => {
            let rho = need_state()?;
            let r =
                measures::trace_norm_measure(&rho, &cut, args.tol).map_err(CliError::compute)?;
            MeasureOutput {
                measure: "trace-norm".into(),
                value: r.value,
                method: r.method.as_str().into(),
                gap: r.gap,
                converged: r.converged,
                seed,
                certificate: r.certificate.as_ref().map(MatrixJson::from_density),
            }
        }
        "schmidt-measure" => {
            let source = args
                .state
                .as_deref()
                .ok_or_else(|| CliError::usage("--state is required"))?;
            let rho = load_state(source)?;
            let split = parse_split(
                args.split
                    .as_deref()
                    .ok_or_else(|| CliError::usage("--split is required"))?,
            )?;
            // Pure input expected: take the dominant eigenvector.
            let spec = rho.spectrum();
            if spec.values()[0] < 1.0 - 1e-9 {
                return Err(CliError::usage("schmidt-measure expects a pure state"));
            }
            let (_, basis) =
                entkit_core::qla::eig_hermitian(rho.matrix()).map_err(CliError::compute)?;
            let psi =
                entkit_core::states::StateVector::normalized(basis.column(0), rho.dims().to_vec())
                    .map_err(CliError::compute)?;
            let b = measures::schmidt_measure_bounds(&psi, &split).map_err(CliError::compute)?;
            let mut value = json!({
                "measure": "schmidt-measure",
                "lower": b.lower,
                "upper": b.upper,
                "terms": b.terms,
                "exact": b.exact,
                "method": "als-bound",
                "seed": seed,
            });
            if b.exact {
                value["value"] = json!(b.upper);
            }
            print_json(&value);
            return Ok(());
        }
        "werner-schmidt" => {
            let lambda = args
                .lambda
                .ok_or_else(|| CliError::usage("--lambda is required"))?;
            simple(
                "werner-schmidt",
                measures::schmidt_measure_werner2(lambda).map_err(CliError::compute)?,
            )
        }
        "conjecture210" => {
            let report =
                measures::conjecture210_frequency(args.trials, seed).map_err(CliError::compute)?;
            let value = json!({
                "measure": "conjecture210",
                "trials": report.trials,
                "violations": report.violations,
                "frequency": report.frequency,
                "seed": seed,
            });
            print_json(&value);
            return Ok(());
        }
        other => return Err(CliError::usage(format!("unknown measure `{other}`"))),
    };
    let converged = output.converged;
    print_json(&serde_json::to_value(&output).expect("serializable"));
    if !converged {
        return Err(CliError::not_converged());
    }
    Ok(())
}

fn verdict_json(verdict: &TransformVerdict) -> serde_json::Value {
    match verdict {
        TransformVerdict::Yes => json!({"possible": "yes"}),
        TransformVerdict::Unknown => json!({"possible": "unknown"}),
        TransformVerdict::No(witness) => {
            let w = match witness {
                Witness::PartialSum { k, lhs, rhs } => json!({
                    "kind": "partial-sum", "k": k, "lhs": lhs, "rhs": rhs,
                }),
                Witness::PowerSum { xi, lhs, rhs } => json!({
                    "kind": "power-sum", "xi": xi, "lhs": lhs, "rhs": rhs,
                }),
            };
            json!({"possible": "no", "witness": w})
        }
    }
}

fn run_transform(args: TransformArgs, seed: u64) -> Result<(), CliError> {
    let out = match args.action {
        TransformAction::Check(pair) => {
            let a = parse_spectrum(&pair.source)?;
            let b = parse_spectrum(&pair.target)?;
            let mut v = verdict_json(&transform::nielsen_from_spectra(&a, &b));
            v["criterion"] = json!("majorization");
            v
        }
        TransformAction::Catalyst(args) => {
            let a = parse_spectrum(&args.pair.source)?;
            let b = parse_spectrum(&args.pair.target)?;
            let w = parse_spectrum(&args.catalyst)?;
            let mut v = verdict_json(&transform::catalyst_enables(&a, &b, &w));
            v["criterion"] = json!("catalysis");
            v
        }
        TransformAction::Obstruct(pair) => {
            let a = parse_spectrum(&pair.source)?;
            let b = parse_spectrum(&pair.target)?;
            let mut v = verdict_json(&transform::powersum_obstruction(&a, &b));
            v["criterion"] = json!("power-sum");
            v
        }
        TransformAction::Fidelity(pair) => {
            let a = parse_spectrum(&pair.source)?;
            let b = parse_spectrum(&pair.target)?;
            let r = transform::optimal_fidelity_locc(&a, &b);
            let value = json!({
                "criterion": "optimal-fidelity",
                "fidelity": r.fidelity,
                "optimum": r.optimum,
                "converged": r.converged,
                "seed": seed,
            });
            print_json(&value);
            if !r.converged {
                return Err(CliError::not_converged());
            }
            return Ok(());
        }
    };
    let mut out = out;
    out["seed"] = json!(seed);
    print_json(&out);
    Ok(())
}

fn run_werner(args: WernerArgs, seed: u64) -> Result<(), CliError> {
    match args.action {
        WernerAction::Series { n, lambda, tol } => {
            let mut csv = String::new();
            let _ = writeln!(csv, "# seed={seed}");
            let _ = writeln!(csv, "n,e_n");
            for copies in 1..=n {
                let value = match lambda {
                    None => werner_lp::e_antisym(copies).map_err(CliError::compute)?.0,
                    Some(l) => {
                        let r = werner_lp::e_general(copies, l, tol).map_err(CliError::compute)?;
                        if !r.converged {
                            print!("{csv}");
                            return Err(CliError::not_converged());
                        }
                        r.value
                    }
                };
                let _ = writeln!(csv, "{copies},{}", fmt_sig(value));
            }
            print!("{csv}");
            Ok(())
        }
        WernerAction::Optimum { n } => {
            let sys = werner_lp::ppt_constraints(n).map_err(CliError::compute)?;
            let vertex = werner_lp::simplex_lexicographic(&sys).map_err(CliError::compute)?;
            let rationals: Vec<String> = vertex.iter().map(|r| r.to_string()).collect();
            let value = json!({
                "n": n,
                "p": rationals,
                "seed": seed,
            });
            print_json(&value);
            Ok(())
        }
    }
}

fn permute_report_json(r: &perm_distill::PermutationReport, seed: u64) -> serde_json::Value {
    json!({
        "n": r.n,
        "alpha": r.alpha,
        "d_before": r.d_before,
        "d_after": r.d_after,
        "info_loss": r.info_loss,
        "ratio": r.ratio,
        "seed": seed,
    })
}

fn run_permute(args: PermuteArgs, seed: u64) -> Result<(), CliError> {
    if args.sweep {
        let n = args.n.unwrap_or(2);
        let mut csv = String::new();
        let _ = writeln!(csv, "# seed={seed}");
        let _ = writeln!(csv, "alpha,d_before,d_after,info_loss,ratio");
        for i in 0..args.points {
            let alpha = i as f64 / (args.points.max(2) - 1) as f64;
            let r =
                perm_distill::distillable_after_permutation(n, alpha).map_err(CliError::compute)?;
            let _ = writeln!(
                csv,
                "{},{},{},{},{}",
                fmt_sig(alpha),
                fmt_sig(r.d_before),
                fmt_sig(r.d_after),
                fmt_sig(r.info_loss),
                fmt_sig(r.ratio)
            );
        }
        print!("{csv}");
        return Ok(());
    }
    let n = args
        .n
        .ok_or_else(|| CliError::usage("--n is required without --sweep"))?;
    let r =
        perm_distill::distillable_after_permutation(n, args.alpha).map_err(CliError::compute)?;
    print_json(&permute_report_json(&r, seed));
    Ok(())
}

fn parse_strategy(text: &str) -> Result<StrategyPoint, CliError> {
    match text {
        "C" | "c" => return Ok(StrategyPoint::COOPERATE),
        "D" | "d" => return Ok(StrategyPoint::DEFECT),
        "Q" | "q" => return Ok(StrategyPoint::Q),
        "M" | "m" => return Ok(StrategyPoint::M),
        _ => {}
    }
    let parts: Vec<&str> = text.split(':').collect();
    let num = |i: usize| -> Result<f64, CliError> {
        parts
            .get(i)
            .ok_or_else(|| CliError::usage(format!("strategy `{text}`: missing angle {i}")))?
            .parse::<f64>()
            .map_err(|_| CliError::usage(format!("strategy `{text}`: bad angle {i}")))
    };
    match parts[0] {
        "s1" => Ok(StrategyPoint::S1 { theta: num(1)? }),
        "s2" => Ok(StrategyPoint::S2 {
            theta: num(1)?,
            phi: num(2)?,
        }),
        "su2" => Ok(StrategyPoint::SU2 {
            theta: num(1)?,
            phi1: num(2)?,
            phi2: num(3)?,
        }),
        other => Err(CliError::usage(format!("unknown strategy `{other}`"))),
    }
}

fn parse_set(text: &str) -> Result<StrategySet, CliError> {
    match text {
        "s1" => Ok(StrategySet::S1),
        "s2" => Ok(StrategySet::S2),
        "su2" => Ok(StrategySet::SU2),
        other => Err(CliError::usage(format!("unknown strategy set `{other}`"))),
    }
}

fn load_game(selector: &GameSelector) -> Result<GameSpec, CliError> {
    let base = match selector.game.as_str() {
        "pd" => GameSpec::prisoners_dilemma(),
        "chicken" => GameSpec::chicken(),
        path => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| CliError::usage(format!("cannot read {path}: {e}")))?;
            #[derive(serde::Deserialize)]
            struct Custom {
                payoff_a: [f64; 4],
                payoff_b: [f64; 4],
            }
            let parsed: Custom = serde_json::from_str(&text)
                .map_err(|e| CliError::usage(format!("cannot parse {path}: {e}")))?;
            GameSpec::new(
                parsed.payoff_a,
                parsed.payoff_b,
                core::f64::consts::FRAC_PI_2,
            )
            .map_err(CliError::compute)?
        }
    };
    match selector.gamma {
        None => Ok(base),
        Some(g) => base.with_gamma(g).map_err(CliError::compute),
    }
}

fn run_game(args: GameArgs, seed: u64) -> Result<(), CliError> {
    match args.action {
        GameAction::Payoff {
            selector,
            alice,
            bob,
        } => {
            let game = load_game(&selector)?;
            let sa = parse_strategy(&alice)?;
            let sb = parse_strategy(&bob)?;
            let (pa, pb) = games::payoff(&game, &sa, &sb);
            print_json(&json!({
                "payoff_alice": pa,
                "payoff_bob": pb,
                "gamma": game.gamma,
                "seed": seed,
            }));
            Ok(())
        }
        GameAction::Nash {
            selector,
            alice,
            bob,
            set,
            grid,
            tol,
        } => {
            let game = load_game(&selector)?;
            let sa = parse_strategy(&alice)?;
            let sb = parse_strategy(&bob)?;
            let set = parse_set(&set)?;
            let nash = games::is_nash(&game, &sa, &sb, set, grid, tol);
            let (pa, pb) = games::payoff(&game, &sa, &sb);
            let (_, best_a) = games::best_response(&game, &sb, set, grid, true);
            let (_, best_b) = games::best_response(&game, &sa, set, grid, false);
            print_json(&json!({
                "nash": nash,
                "payoff_alice": pa,
                "payoff_bob": pb,
                "best_deviation_alice": best_a,
                "best_deviation_bob": best_b,
                "gamma": game.gamma,
                "seed": seed,
            }));
            Ok(())
        }
        GameAction::Sweep {
            selector,
            points,
            grid,
        } => {
            let game = load_game(&selector)?;
            let gammas: Vec<f64> = (0..points)
                .map(|i| core::f64::consts::FRAC_PI_2 * i as f64 / (points.max(2) - 1) as f64)
                .collect();
            let (curve, switch) =
                games::threshold_sweep(&game, &gammas, grid).map_err(CliError::compute)?;
            let mut csv = String::new();
            let _ = writeln!(csv, "# seed={seed}");
            if let Some(s) = switch {
                let _ = writeln!(csv, "# strategy_switch_gamma={}", fmt_sig(s));
            }
            let _ = writeln!(csv, "gamma,m");
            for (g, m) in curve {
                let _ = writeln!(csv, "{},{}", fmt_sig(g), fmt_sig(m));
            }
            print!("{csv}");
            Ok(())
        }
        GameAction::Focal { selector } => {
            let game = load_game(&selector)?;
            let (fa, fb) = games::focal_payoff(&game);
            print_json(&json!({
                "payoff_alice": fa,
                "payoff_bob": fb,
                "seed": seed,
            }));
            Ok(())
        }
    }
}

fn build_protocol(name: &str, seed: u64) -> Result<nlgates::Protocol, CliError> {
    let mut rng = SplitRng::new(seed);
    match name {
        "cnot" => Ok(nlgates::protocol_nonlocal_cnot()),
        "cu" => {
            let u = entkit_core::states::haar_unitary(2, &mut rng);
            nlgates::protocol_control_u(&u).map_err(CliError::compute)
        }
        "swap" => Ok(nlgates::protocol_swap()),
        "toffoli" => Ok(nlgates::protocol_toffoli()),
        other => {
            if let Some(n) = other.strip_prefix("ncu:") {
                let n: usize = n
                    .parse()
                    .map_err(|_| CliError::usage(format!("bad party count in `{other}`")))?;
                let u = entkit_core::states::haar_unitary(2, &mut rng);
                nlgates::protocol_n_control_u(n, &u).map_err(CliError::compute)
            } else {
                Err(CliError::usage(format!("unknown protocol `{other}`")))
            }
        }
    }
}

fn run_gate(args: GateArgs, seed: u64) -> Result<(), CliError> {
    match args.action {
        GateAction::Verify { protocol } => {
            let p = build_protocol(&protocol, seed)?;
            let k = p.circuit.data_qubits().len();
            let input = entkit_core::states::product_basis_state(&vec![0u8; k]);
            let (_, ledger) = nlgates::run(&p.circuit, &input).map_err(CliError::compute)?;
            let report =
                nlgates::channel_equivalence(&p.circuit, &p.ideal).map_err(CliError::compute)?;
            let cbits: Vec<serde_json::Value> = ledger
                .cbits
                .iter()
                .map(|((from, to), count)| json!({"from": from, "to": to, "count": count}))
                .collect();
            print_json(&json!({
                "protocol": p.name,
                "ebits": ledger.ebits_consumed,
                "cbits_total": ledger.cbits_total(),
                "cbits": cbits,
                "equal": report.equal,
                "worst_fidelity": report.worst_fidelity,
                "witness": report.witness,
                "seed": seed,
            }));
            Ok(())
        }
        GateAction::Trace { protocol, input } => {
            let p = build_protocol(&protocol, seed)?;
            let k = p.circuit.data_qubits().len();
            let bits: Vec<u8> = match input {
                None => vec![0; k],
                Some(text) => text
                    .chars()
                    .map(|c| match c {
                        '0' => Ok(0u8),
                        '1' => Ok(1u8),
                        _ => Err(CliError::usage("input must be a bit string")),
                    })
                    .collect::<Result<_, _>>()?,
            };
            if bits.len() != k {
                return Err(CliError::usage(format!(
                    "protocol `{}` expects {k} input bits",
                    p.name
                )));
            }
            let state = entkit_core::states::product_basis_state(&bits);
            let (set, ledger) = nlgates::run(&p.circuit, &state).map_err(CliError::compute)?;
            let branches: Vec<serde_json::Value> = set
                .branches
                .iter()
                .map(|b| {
                    let transcript: String = b
                        .transcript
                        .iter()
                        .map(|t| match t {
                            Some(true) => '1',
                            Some(false) => '0',
                            None => '-',
                        })
                        .collect();
                    json!({
                        "transcript": transcript,
                        "probability": b.probability(),
                    })
                })
                .collect();
            print_json(&json!({
                "protocol": p.name,
                "input": bits,
                "branches": branches,
                "ebits": ledger.ebits_consumed,
                "cbits_total": ledger.cbits_total(),
                "seed": seed,
            }));
            Ok(())
        }
    }
}

fn run_repro(args: ReproArgs, seed: u64) -> Result<(), CliError> {
    match args.target.as_str() {
        // Per-copy entanglement of the antisymmetric state, n = 1..7
        // plus the n = 40 limit estimate.
        "werner-series" => {
            let mut csv = String::new();
            let _ = writeln!(csv, "# seed={seed}");
            let _ = writeln!(csv, "n,e_n");
            for n in 1..=7 {
                let (e, _) = werner_lp::e_antisym(n).map_err(CliError::compute)?;
                let _ = writeln!(csv, "{n},{}", fmt_sig(e));
            }
            let (e40, _) = werner_lp::e_antisym(40).map_err(CliError::compute)?;
            let _ = writeln!(csv, "40,{}", fmt_sig(e40));
            print!("{csv}");
            Ok(())
        }
        // Distillable entanglement before/after losing the pair order
        // for two pairs, as a function of the Schmidt weight.
        "permute-sweep" => run_permute(
            PermuteArgs {
                n: Some(2),
                alpha: 0.5,
                sweep: true,
                points: 51,
            },
            seed,
        ),
        // Guaranteed payoff m(γ) for the quantum player in the unfair
        // game.
        "game-sweep" => run_game(
            GameArgs {
                action: GameAction::Sweep {
                    selector: GameSelector {
                        game: "pd".into(),
                        gamma: None,
                    },
                    points: 33,
                    grid: 128,
                },
            },
            seed,
        ),
        // Schmidt-measure values of the named four-qubit states over
        // all seven splits.
        "schmidt-pure" => {
            let states: [(&str, entkit_core::states::StateVector); 4] = [
                (
                    "ghz4",
                    entkit_core::states::ghz(4).map_err(CliError::compute)?,
                ),
                (
                    "w4",
                    entkit_core::states::w_state(4).map_err(CliError::compute)?,
                ),
                ("cluster4", entkit_core::states::cluster4()),
                (
                    "bell-pair-squared",
                    entkit_core::states::bell(entkit_core::states::BellKind::PhiPlus).tensor(
                        &entkit_core::states::bell(entkit_core::states::BellKind::PhiPlus),
                    ),
                ),
            ];
            let splits: [(&str, Vec<Vec<usize>>); 7] = [
                ("0/1/2/3", parse_split("0/1/2/3")?),
                ("0/1/2,3", parse_split("0/1/2,3")?),
                ("0,1/2/3", parse_split("0,1/2/3")?),
                ("0,1/2,3", parse_split("0,1/2,3")?),
                ("0,2/1,3", parse_split("0,2/1,3")?),
                ("0,3/1,2", parse_split("0,3/1,2")?),
                ("0,1,2/3", parse_split("0,1,2/3")?),
            ];
            let mut csv = String::new();
            let _ = writeln!(csv, "# seed={seed}");
            let _ = writeln!(csv, "state,split,schmidt_measure");
            for (name, psi) in &states {
                for (label, split) in &splits {
                    let b =
                        measures::schmidt_measure_bounds(psi, split).map_err(CliError::compute)?;
                    let _ = writeln!(csv, "{name},{label},{}", fmt_sig(b.upper));
                }
            }
            print!("{csv}");
            Ok(())
        }
        // Schmidt measures of the GHZ/product mixture per split, as a
        // function of the mixing weight.
        "schmidt-mixed" => {
            let mut csv = String::new();
            let _ = writeln!(csv, "# seed={seed}");
            let _ = writeln!(csv, "lambda,full,pair01,pair02,pair12");
            for i in 0..=10 {
                let lam = i as f64 / 10.0;
                let vals = measures::schmidt_measure_ghz_mixture(lam).map_err(CliError::compute)?;
                let _ = writeln!(
                    csv,
                    "{},{},{},{},{}",
                    fmt_sig(lam),
                    fmt_sig(vals[0]),
                    fmt_sig(vals[1]),
                    fmt_sig(vals[2]),
                    fmt_sig(vals[3])
                );
            }
            print!("{csv}");
            Ok(())
        }
        // Exact LP optima p₀..p_n for n = 1..7.
        "lp-optima" => {
            let mut rows = Vec::new();
            for n in 1..=7usize {
                let sys = werner_lp::ppt_constraints(n).map_err(CliError::compute)?;
                let vertex = werner_lp::simplex_lexicographic(&sys).map_err(CliError::compute)?;
                rows.push(json!({
                    "n": n,
                    "p": vertex.iter().map(|r| r.to_string()).collect::<Vec<_>>(),
                    "e_n": -log2(werner_lp::rational_to_f64(&vertex[n])) / n as f64,
                }));
            }
            print_json(&json!({"optima": rows, "seed": seed}));
            Ok(())
        }
        other => Err(CliError::usage(format!("unknown repro target `{other}`"))),
    }
}
