use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use asr_core::cipher::{feistel_decrypt, feistel_encrypt, FeistelSpec, MasterKey, SubkeySet};
use asr_core::quantum::WalkMode;
use asr_core::schedule::{key_schedule, ZSequence};
use clap::{Args, Parser, Subcommand, ValueEnum};

use asr_workbench::attack::{run_attack, AttackRequest, Backend, PairSource, RoundFn};
use asr_workbench::parse::{format_pair_file, parse_block, parse_master, parse_pair_file, parse_subkeys, parse_word};
use asr_workbench::scaling::{scaling_rows, slopes, write_csv, ScalingRequest};
use asr_workbench::selftest::run_selftest;
use asr_workbench::sim::{sim_clawwalk, sim_grover, GroverRequest, WalkRequest};
use asr_workbench::{CliError, CliResult};

/// Subkey-recovery workbench for 6-round Feistel-2* ciphers.
#[derive(Parser, Debug)]
#[command(name = "asr", version)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Encrypt or decrypt one block.
    Cipher {
        #[arg(value_enum)]
        direction: Direction,
        #[command(flatten)]
        cipher: CipherArgs,
        #[command(flatten)]
        keys: KeyArgs,
        /// Block as `L|R` in hex.
        #[arg(long)]
        block: String,
    },
    /// Print the round subkeys derived from a master key.
    Keyschedule {
        #[command(flatten)]
        cipher: CipherArgs,
        #[arg(long)]
        master: String,
    },
    /// Key-recovery attack.
    Attack {
        #[command(subcommand)]
        cmd: AttackCmd,
    },
    /// Grover statevector simulation against the closed form.
    SimGrover(GroverArgs),
    /// Quantum-walk claw finder on a toy claw problem.
    SimClawwalk(WalkArgs),
    /// Query-count scaling sweep as CSV.
    Scaling(ScalingArgs),
    /// Quick end-to-end checks.
    Selftest,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Direction {
    Enc,
    Dec,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum Schedule {
    /// Constant `2^w - 4` in every step.
    #[default]
    Constant,
    /// Constant XOR the Simeck m-sequence bit.
    Simeck,
}

impl From<Schedule> for ZSequence {
    fn from(s: Schedule) -> Self {
        match s {
            Schedule::Constant => ZSequence::ConstantOnly,
            Schedule::Simeck => ZSequence::Simeck,
        }
    }
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum RoundFnArg {
    #[default]
    Simeck,
    Tables,
}

#[derive(Args, Debug)]
struct CipherArgs {
    #[arg(long, default_value_t = 16)]
    width: u32,
    #[arg(long, default_value_t = 6)]
    rounds: usize,
    #[arg(long, value_enum, default_value_t)]
    schedule: Schedule,
    #[arg(long = "round-fn", value_enum, default_value_t)]
    round_fn: RoundFnArg,
    /// Seed of the random round tables.
    #[arg(long, default_value_t = 0)]
    table_seed: u64,
}

impl CipherArgs {
    fn spec(&self) -> CliResult<FeistelSpec> {
        Ok(match self.round_fn {
            RoundFnArg::Simeck => FeistelSpec::simeck(self.width, self.rounds)?,
            RoundFnArg::Tables => FeistelSpec::random_tables(self.width, self.rounds, self.table_seed)?,
        })
    }
}

#[derive(Args, Debug)]
#[group(required = true, multiple = false)]
struct KeyArgs {
    /// Four master-key words, concatenated or comma separated.
    #[arg(long)]
    master: Option<String>,
    /// Comma-separated round subkeys, one per round.
    #[arg(long)]
    subkeys: Option<String>,
}

#[derive(Subcommand, Debug)]
enum AttackCmd {
    /// Run the 6-round attack and emit a JSON report.
    Run(Box<AttackArgs>),
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Vectors {
    /// Built-in 6-round Simeck32/64 worked example.
    #[value(name = "paper", alias = "worked-example")]
    WorkedExample,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum BackendArg {
    #[default]
    Classical,
    Exhaustive,
    GroverSim,
    WalkSim,
}

#[derive(Clone, Copy, Debug, Default, ValueEnum)]
enum WalkModeArg {
    #[default]
    Collapsed,
    Full,
}

impl From<WalkModeArg> for WalkMode {
    fn from(m: WalkModeArg) -> Self {
        match m {
            WalkModeArg::Collapsed => WalkMode::Collapsed,
            WalkModeArg::Full => WalkMode::Full,
        }
    }
}

#[derive(Args, Debug)]
#[command(group(clap::ArgGroup::new("source").required(true).args(["vectors", "pairs", "seed"])))]
struct AttackArgs {
    #[arg(long, default_value_t = 16)]
    width: u32,
    #[arg(long, value_enum)]
    vectors: Option<Vectors>,
    /// Pair file (`width`, `c`, `pair P C` and `extra P C` lines).
    #[arg(long)]
    pairs: Option<PathBuf>,
    /// Generate a hidden-key instance from this seed.
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long, value_enum, default_value_t)]
    backend: BackendArg,
    /// Off-rule known pairs to add.
    #[arg(long, conflicts_with = "extra_pair")]
    extra_pairs: Option<usize>,
    /// Shorthand for `--extra-pairs 1`.
    #[arg(long)]
    extra_pair: bool,
    /// Seed for extra worked-example pairs beyond the first.
    #[arg(long, default_value_t = 0)]
    extra_seed: u64,
    #[arg(long, value_enum, default_value_t)]
    schedule: Schedule,
    #[arg(long = "round-fn", value_enum, default_value_t)]
    round_fn: RoundFnArg,
    /// Seed of the random round tables; defaults to `--seed`.
    #[arg(long)]
    table_seed: Option<u64>,
    /// Chosen-plaintext constant C in hex.
    #[arg(long)]
    constant: Option<String>,
    /// Also sweep K3 with the literal round-3 matching check.
    #[arg(long)]
    literal_k3: bool,
    /// Seed of simulated measurements.
    #[arg(long, default_value_t = 0)]
    quantum_seed: u64,
    #[arg(long, value_enum, default_value_t)]
    walk_mode: WalkModeArg,
    #[arg(long, default_value_t = 1000)]
    walk_retries: u32,
    #[arg(long, default_value_t = 1.0)]
    outer_mult: f64,
    #[arg(long, default_value_t = 5)]
    grover_retries: u32,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Also write the pairs used as a pair file.
    #[arg(long)]
    pairs_out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct GroverArgs {
    #[arg(long)]
    n: usize,
    /// Comma-separated marked indices.
    #[arg(long, conflicts_with = "m")]
    marked: Option<String>,
    /// Number of seeded random marked indices.
    #[arg(long, default_value_t = 1)]
    m: usize,
    /// Grover iterations; defaults to the optimum for M.
    #[arg(long)]
    iterations: Option<u64>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
}

#[derive(Args, Debug)]
struct WalkArgs {
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 16)]
    range_bits: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t)]
    mode: WalkModeArg,
    /// Random tables with this many equations instead of one planted claw.
    #[arg(long)]
    random_equations: Option<usize>,
    #[arg(long, default_value_t = 1.0)]
    outer_mult: f64,
    /// Subset sizes as `r1,r2`.
    #[arg(long)]
    subsets: Option<String>,
}

#[derive(Args, Debug)]
struct ScalingArgs {
    #[arg(long, default_value_t = 6)]
    min_bits: u32,
    #[arg(long, default_value_t = 12)]
    max_bits: u32,
    /// Explicit comma-separated sizes; overrides the bit range.
    #[arg(long)]
    sizes: Option<String>,
    #[arg(long)]
    range_bits: Option<u32>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1.0)]
    outer_mult: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn emit(text: &str, out: Option<&Path>) -> CliResult<()> {
    match out {
        Some(p) => fs::write(p, text).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => io::stdout().write_all(text.as_bytes()).map_err(|source| CliError::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}

fn flag<T>(name: &str, r: CliResult<T>) -> CliResult<T> {
    r.map_err(|e| match e {
        CliError::Input(m) => CliError::Input(format!("{name}: {m}")),
        other => other,
    })
}

fn list<T: std::str::FromStr>(name: &str, s: &str) -> CliResult<Vec<T>> {
    s.split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .enumerate()
        .map(|(i, t)| {
            t.parse()
                .map_err(|_| CliError::input(format!("{name}: item {} '{t}' is not a number", i + 1)))
        })
        .collect()
}

fn subkeys_for(c: &CipherArgs, keys: &KeyArgs) -> CliResult<SubkeySet> {
    let spec = c.spec()?;
    if let Some(m) = &keys.master {
        let words = flag("--master", parse_master(m, c.width))?;
        return Ok(key_schedule(
            &MasterKey::new(words)?,
            c.rounds,
            &spec,
            c.schedule.into(),
        )?);
    }
    let ks = flag(
        "--subkeys",
        parse_subkeys(keys.subkeys.as_deref().unwrap_or(""), c.width),
    )?;
    if ks.len() != c.rounds {
        return Err(CliError::input(format!(
            "--subkeys: expected {} subkeys, found {}",
            c.rounds,
            ks.len()
        )));
    }
    Ok(SubkeySet::new(ks)?)
}

fn attack(a: &AttackArgs) -> CliResult<()> {
    let source = if a.vectors.is_some() {
        PairSource::Worked {
            schedule: a.schedule.into(),
            extra_seed: a.extra_seed,
        }
    } else if let Some(p) = &a.pairs {
        let text = read(p)?;
        let file = parse_pair_file(&text).map_err(|e| CliError::Input(format!("{}: {e}", p.display())))?;
        PairSource::File(file)
    } else {
        PairSource::Seeded {
            seed: a.seed.unwrap_or(0),
        }
    };
    let backend = match a.backend {
        BackendArg::Classical => Backend::Classical,
        BackendArg::Exhaustive => Backend::Exhaustive,
        BackendArg::GroverSim => Backend::GroverSim,
        BackendArg::WalkSim => Backend::WalkSim,
    };
    let mut req = AttackRequest::new(a.width, source, backend);
    req.round_fn = match a.round_fn {
        RoundFnArg::Simeck => RoundFn::Simeck,
        RoundFnArg::Tables => RoundFn::Tables {
            seed: a.table_seed.or(a.seed).unwrap_or(0),
        },
    };
    req.extras = if a.extra_pair { Some(1) } else { a.extra_pairs };
    req.constant = match &a.constant {
        Some(c) => Some(flag("--constant", parse_word(c, a.width))?.value()),
        None => None,
    };
    req.literal_k3 = a.literal_k3;
    req.quantum_seed = a.quantum_seed;
    req.walk_mode = a.walk_mode.into();
    req.walk_retries = a.walk_retries;
    req.outer_multiplier = a.outer_mult;
    req.grover_retries = a.grover_retries;

    let run = run_attack(&req)?;
    if let Some(p) = &a.pairs_out {
        emit(&format_pair_file(&run.set), Some(p))?;
    }
    for n in &run.report.vector_notes {
        eprintln!("note: {} printed {} recomputed {}", n.entry, n.printed, n.derived);
    }
    emit(&run.report.to_json(), a.out.as_deref())?;
    run.report.verdict()
}

fn dispatch(cmd: Cmd) -> CliResult<()> {
    match cmd {
        Cmd::Cipher {
            direction,
            cipher,
            keys,
            block,
        } => {
            let spec = cipher.spec()?;
            let ks = subkeys_for(&cipher, &keys)?;
            let b = flag("--block", parse_block(&block, cipher.width))?;
            let out = match direction {
                Direction::Enc => feistel_encrypt(b, &ks, &spec)?,
                Direction::Dec => feistel_decrypt(b, &ks, &spec)?,
            };
            println!("{out}");
        }
        Cmd::Keyschedule { cipher, master } => {
            let keys = KeyArgs {
                master: Some(master),
                subkeys: None,
            };
            for (i, k) in subkeys_for(&cipher, &keys)?.words().iter().enumerate() {
                println!("k{} {k}", i + 1);
            }
        }
        Cmd::Attack { cmd: AttackCmd::Run(a) } => attack(&a)?,
        Cmd::SimGrover(g) => {
            let marked = match &g.marked {
                Some(s) => list("--marked", s)?,
                None => Vec::new(),
            };
            let r = sim_grover(&GroverRequest {
                n: g.n,
                marked,
                m: g.m,
                iterations: g.iterations,
                seed: g.seed,
            })?;
            println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
        }
        Cmd::SimClawwalk(w) => {
            let subsets = match &w.subsets {
                Some(s) => match list::<usize>("--subsets", s)?[..] {
                    [a, b] => Some((a, b)),
                    _ => return Err(CliError::input("--subsets: expected r1,r2")),
                },
                None => None,
            };
            let r = sim_clawwalk(&WalkRequest {
                n: w.n,
                range_bits: w.range_bits,
                seed: w.seed,
                mode: w.mode.into(),
                random_equations: w.random_equations,
                outer_multiplier: w.outer_mult,
                subsets,
            })?;
            println!("{}", serde_json::to_string_pretty(&r).expect("report serializes"));
        }
        Cmd::Scaling(s) => {
            let sizes = match &s.sizes {
                Some(list_str) => list("--sizes", list_str)?,
                None if s.min_bits > s.max_bits => Vec::new(),
                None => {
                    if s.max_bits > 30 {
                        return Err(CliError::input("--max-bits: at most 30"));
                    }
                    (s.min_bits..=s.max_bits).map(|b| 1usize << b).collect()
                }
            };
            let rows = scaling_rows(&ScalingRequest {
                sizes,
                range_bits: s.range_bits,
                seed: s.seed,
                outer_multiplier: s.outer_mult,
            })?;
            let mut buf = Vec::new();
            write_csv(&rows, &mut buf)?;
            emit(&String::from_utf8(buf).expect("csv is utf-8"), s.out.as_deref())?;
            let (walk, classical) = slopes(&rows);
            let fmt = |v: Option<f64>| v.map_or("n/a".to_string(), |v| format!("{v:.4}"));
            eprintln!("slope walk {} classical {}", fmt(walk), fmt(classical));
        }
        Cmd::Selftest => {
            let checks = run_selftest();
            for c in &checks {
                println!("{} {}: {}", if c.passed { "PASS" } else { "FAIL" }, c.name, c.detail);
            }
            if checks.iter().any(|c| !c.passed) {
                return Err(CliError::Verification("selftest failed".into()));
            }
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(3)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let start = Instant::now();
    let res = dispatch(cli.cmd);
    eprintln!("wall time {:.3} s", start.elapsed().as_secs_f64());
    match res {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
