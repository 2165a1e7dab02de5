//! `ira`: interleaver generation, code construction, decoding, defect
//! analysis and Monte-Carlo sweeps from the command line.

use std::fs;
use std::io::{self, Read, Write};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use ira_fec::analysis::{self, SearchSetup, DEFAULT_STOPPING_BOUND};
use ira_fec::baseline::{conv_encode, viterbi_decode, ConvCodeSpec};
use ira_fec::code::{build_code_with, realize_check_degrees, realize_degrees, DegreeProfile, IraCode, PAPER_PINNED};
use ira_fec::decoder::{decode, CheckRule, DecoderConfig, InfoUpdate, Scheduling, DEFAULT_ITERATIONS};
use ira_fec::graph::{derive_dither_sequence, find_hamiltonian_path, gruenbaum_graph, validate_graph};
use ira_fec::interleaver::{
    build_gruenbaum_interleaver, paper_interleaver, s_random_metric, InterleaverSpec, Permutation, ShiftMode,
    SmallTable, PAPER_N, PAPER_P, PAPER_S,
};
use ira_fec::sim::{self, parse_key_values, SweepConfig};
use ira_fec::{Bit, Error, Result};

#[derive(Parser)]
#[command(name = "ira", version, about = "IRA codes with a Gruenbaum-graph interleaver")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Grünbaum graph export and dither derivation.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Interleaver generation.
    #[command(subcommand)]
    Interleave(InterleaveCmd),
    /// Code construction.
    #[command(subcommand)]
    Code(CodeCmd),
    /// Decode a file of channel LLRs.
    Decode(DecodeArgs),
    /// Convolutional baseline encoder/decoder.
    #[command(subcommand)]
    Baseline(BaselineCmd),
    /// Tanner-graph defect analysis and (p, s) search.
    #[command(subcommand)]
    Analyze(AnalyzeCmd),
    /// Monte-Carlo simulation.
    #[command(subcommand)]
    Sim(SimCmd),
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Print the edge list (`u v` per line).
    Export {
        #[arg(long)]
        out: Option<String>,
    },
    /// Print graph properties, a Hamiltonian path and the derived dither sequence.
    Info {
        #[arg(long, default_value_t = 0)]
        start: usize,
    },
}

#[derive(Subcommand)]
enum InterleaveCmd {
    /// Generate a permutation file (`n`, then one index per line).
    Gen {
        #[arg(long, default_value_t = PAPER_N)]
        n: usize,
        #[arg(long, default_value_t = PAPER_P)]
        p: usize,
        #[arg(long, default_value_t = PAPER_S)]
        s: usize,
        /// fig7 | gr24
        #[arg(long, default_value = "fig7")]
        small: String,
        /// skip-first | cyclic | off
        #[arg(long, default_value = "skip-first")]
        shift: String,
        #[arg(long)]
        out: Option<String>,
        /// Also print the s-random metric to stderr.
        #[arg(long)]
        metric: bool,
    },
}

#[derive(Subcommand)]
enum CodeCmd {
    /// Build a code description file.
    Build {
        /// `paper` or `deg:frac,...`
        #[arg(long, default_value = "paper")]
        profile: String,
        #[arg(long, default_value_t = 192)]
        k: usize,
        /// Code rate as `a/b`.
        #[arg(long, default_value = "1/4")]
        rate: String,
        /// Permutation file, or `builtin` for the 1344-entry interleaver.
        #[arg(long, default_value = "builtin")]
        interleaver: String,
        /// Comma-separated pinned positions (set to 1), `paper`, or `none`.
        #[arg(long, default_value = "paper")]
        pins: String,
        /// gather | scatter
        #[arg(long, default_value = "gather")]
        wiring: String,
        #[arg(long)]
        out: Option<String>,
    },
}

#[derive(Args)]
struct DecodeArgs {
    /// flooding | turbo
    #[arg(long, default_value = "turbo")]
    scheduling: String,
    #[arg(long, default_value_t = DEFAULT_ITERATIONS)]
    iters: usize,
    /// LLR file, one value per line, systematic bits first. `-` reads stdin.
    #[arg(long = "in")]
    input: String,
    /// Code description file, or `builtin`.
    #[arg(long, default_value = "builtin")]
    code: String,
    #[arg(long)]
    early_stop: bool,
    #[arg(long)]
    min_sum: bool,
    #[arg(long)]
    per_check: bool,
    /// Print only the payload bits instead of all information bits.
    #[arg(long)]
    payload: bool,
}

#[derive(Subcommand)]
enum BaselineCmd {
    /// Encode a string of 0/1 characters.
    Encode {
        #[arg(long, default_value = "463,535,733,745")]
        gens: String,
        /// Bit file (0/1 characters, whitespace ignored); `-` reads stdin.
        #[arg(long = "in", default_value = "-")]
        input: String,
    },
    /// Viterbi-decode a file of LLRs (one per line).
    Decode {
        #[arg(long, default_value = "463,535,733,745")]
        gens: String,
        #[arg(long = "in", default_value = "-")]
        input: String,
    },
}

#[derive(Subcommand)]
enum AnalyzeCmd {
    /// 4-cycle and stopping-set report for a code.
    Defects {
        /// Code description file, or `builtin`.
        #[arg(long, default_value = "builtin")]
        code: String,
        #[arg(long, default_value_t = DEFAULT_STOPPING_BOUND)]
        bound: usize,
    },
    /// Search interleaver parameters minimizing graph defects.
    SearchPs {
        #[arg(long, default_value = "1:1344")]
        p_range: String,
        #[arg(long, default_value = "0:1344")]
        s_range: String,
        /// Random sample size; ignored with --full.
        #[arg(long, default_value_t = 100)]
        sample: usize,
        /// Exhaustive sweep over the whole grid.
        #[arg(long)]
        full: bool,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_STOPPING_BOUND)]
        bound: usize,
        /// fig7 | gr24
        #[arg(long, default_value = "fig7")]
        small: String,
        /// gather | scatter
        #[arg(long, default_value = "gather")]
        wiring: String,
        /// Also print every evaluated row.
        #[arg(long)]
        rows: bool,
    },
}

#[derive(Subcommand)]
enum SimCmd {
    /// Run a sweep from a `key = value` config file; `--set key=value` overrides.
    Sweep {
        #[arg(long)]
        config: Option<String>,
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

fn read_input(path: &str) -> Result<String> {
    if path == "-" {
        let mut s = String::new();
        io::stdin().read_to_string(&mut s)?;
        Ok(s)
    } else {
        fs::read_to_string(path).map_err(|e| Error::Io(format!("{path}: {e}")))
    }
}

fn emit(out: Option<&str>, text: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, text).map_err(|e| Error::Io(format!("{path}: {e}"))),
        None => {
            io::stdout().write_all(text.as_bytes())?;
            Ok(())
        }
    }
}

fn load_code(spec: &str) -> Result<IraCode> {
    if spec == "builtin" || spec == "paper" {
        Ok(ira_fec::code::paper_code())
    } else {
        IraCode::from_text(&read_input(spec)?)
    }
}

fn parse_llrs(text: &str) -> Result<Vec<f64>> {
    text.split_whitespace()
        .enumerate()
        .map(|(i, t)| {
            t.parse().map_err(|_| Error::Parse {
                line: i + 1,
                msg: format!("`{t}` is not a number"),
            })
        })
        .collect()
}

fn bits_to_string(bits: &[Bit]) -> String {
    bits.iter().map(|b| char::from(b'0' + b)).collect()
}

fn parse_range(text: &str) -> Result<std::ops::Range<usize>> {
    let (a, b) = text
        .split_once(':')
        .ok_or_else(|| Error::Parameter(format!("range `{text}` is not `a:b`")))?;
    let a = a.parse().map_err(|_| Error::Parameter(format!("bad range start `{a}`")))?;
    let b = b.parse().map_err(|_| Error::Parameter(format!("bad range end `{b}`")))?;
    Ok(a..b)
}

fn parse_rate(text: &str) -> Result<(usize, usize)> {
    let bad = || Error::Parameter(format!("rate `{text}` is not `a/b`"));
    let (a, b) = text.split_once('/').ok_or_else(bad)?;
    let a: usize = a.trim().parse().map_err(|_| bad())?;
    let b: usize = b.trim().parse().map_err(|_| bad())?;
    if a == 0 || b <= a {
        return Err(bad());
    }
    Ok((a, b))
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Graph(GraphCmd::Export { out }) => emit(out.as_deref(), &gruenbaum_graph().to_edge_list()),
        Command::Graph(GraphCmd::Info { start }) => {
            let g = gruenbaum_graph();
            let r = validate_graph(&g);
            println!("vertices {}", r.vertex_count);
            println!("edges {}", r.edge_count);
            println!("regular_degree {:?}", r.regular_degree);
            println!("girth {:?}", r.girth);
            match find_hamiltonian_path(&g, start) {
                None => println!("hamiltonian_path none"),
                Some(ham) => {
                    println!("hamiltonian_path {:?}", ham.vertices);
                    match derive_dither_sequence(&g, &ham)? {
                        Some(d) => {
                            println!("dither {:?}", d.values());
                            println!("s_random {:?}", s_random_metric(d.values()));
                        }
                        None => println!("dither none"),
                    }
                }
            }
            Ok(())
        }
        Command::Interleave(InterleaveCmd::Gen {
            n,
            p,
            s,
            small,
            shift,
            out,
            metric,
        }) => {
            let spec = InterleaverSpec {
                n,
                p,
                s,
                small: small.parse::<SmallTable>()?.sequence(),
                shift: shift.parse::<ShiftMode>()?,
            };
            let perm = build_gruenbaum_interleaver(&spec)?;
            if metric {
                eprintln!("s_random {:?}", s_random_metric(perm.as_slice()));
            }
            emit(out.as_deref(), &perm.to_text())
        }
        Command::Code(CodeCmd::Build {
            profile,
            k,
            rate,
            interleaver,
            pins,
            wiring,
            out,
        }) => {
            let (num, den) = parse_rate(&rate)?;
            if (k * den) % num != 0 {
                return Err(Error::Parameter(format!("k = {k} does not give an integer length at rate {rate}")));
            }
            let m = k * den / num - k;
            let perm = if interleaver == "builtin" {
                paper_interleaver()
            } else {
                Permutation::from_text(&read_input(&interleaver)?)?
            };
            let profile: DegreeProfile = profile.parse()?;
            let rep = realize_degrees(&profile, k, perm.len())?;
            let check = realize_check_degrees(perm.len(), m)?;
            let pinned: Vec<(usize, Bit)> = match pins.as_str() {
                "paper" => PAPER_PINNED.iter().map(|&p| (p, 1)).collect(),
                "none" | "" => Vec::new(),
                list => list
                    .split(',')
                    .map(|t| {
                        t.trim()
                            .parse()
                            .map(|p| (p, 1))
                            .map_err(|_| Error::Parameter(format!("bad pin `{t}`")))
                    })
                    .collect::<Result<_>>()?,
            };
            let code = build_code_with(&rep, &perm, &check, &pinned, wiring.parse()?)?;
            emit(out.as_deref(), &code.to_text())
        }
        Command::Decode(args) => {
            let code = load_code(&args.code)?;
            let llrs = parse_llrs(&read_input(&args.input)?)?;
            let cfg = DecoderConfig {
                scheduling: args.scheduling.parse::<Scheduling>()?,
                max_iter: args.iters,
                early_stop: args.early_stop,
                rule: if args.min_sum { CheckRule::MinSum } else { CheckRule::Exact },
                info_update: if args.per_check { InfoUpdate::PerCheck } else { InfoUpdate::PerSweep },
            };
            let r = decode(&code, &llrs, &cfg)?;
            let bits = if args.payload { code.extract_payload(&r.hard_bits) } else { r.hard_bits.clone() };
            println!("{}", bits_to_string(&bits));
            eprintln!("converged {} iterations {}", r.converged, r.iterations_used);
            Ok(())
        }
        Command::Baseline(BaselineCmd::Encode { gens, input }) => {
            let spec: ConvCodeSpec = gens.parse()?;
            let bits: Vec<Bit> = read_input(&input)?
                .chars()
                .filter(|c| !c.is_whitespace())
                .map(|c| match c {
                    '0' => Ok(0),
                    '1' => Ok(1),
                    other => Err(Error::Parameter(format!("`{other}` is not a bit"))),
                })
                .collect::<Result<_>>()?;
            println!("{}", bits_to_string(&conv_encode(&spec, &bits)));
            Ok(())
        }
        Command::Baseline(BaselineCmd::Decode { gens, input }) => {
            let spec: ConvCodeSpec = gens.parse()?;
            let llrs = parse_llrs(&read_input(&input)?)?;
            println!("{}", bits_to_string(&viterbi_decode(&spec, &llrs)?));
            Ok(())
        }
        Command::Analyze(AnalyzeCmd::Defects { code, bound }) => {
            let code = load_code(&code)?;
            print!("{}", analysis::analyze(&code, bound)?.to_text());
            Ok(())
        }
        Command::Analyze(AnalyzeCmd::SearchPs {
            p_range,
            s_range,
            sample,
            full,
            seed,
            bound,
            small,
            wiring,
            rows,
        }) => {
            let setup = SearchSetup {
                small: small.parse::<SmallTable>()?.sequence(),
                wiring: wiring.parse()?,
                ..SearchSetup::paper(bound)
            };
            let (pr, sr) = (parse_range(&p_range)?, parse_range(&s_range)?);
            let candidates = if full {
                analysis::grid_candidates(setup.n, pr, sr)
            } else {
                analysis::sample_candidates(setup.n, pr, sr, sample, seed)?
            };
            let outcome = analysis::search_ps_with_progress(&setup, &candidates, &|done, total| {
                if full {
                    eprintln!("progress {done}/{total}");
                }
            })?;
            if rows {
                println!("p,s,cycle4_min_degree,cycle4_total,min_stopping_set_size");
                for c in &outcome.evaluated {
                    println!(
                        "{},{},{},{},{}",
                        c.p,
                        c.s,
                        c.report.cycle4_min_degree,
                        c.report.cycle4_total,
                        c.report.min_stopping_set_size.map_or("none".into(), |v| v.to_string())
                    );
                }
            }
            println!("best_p {}", outcome.best.p);
            println!("best_s {}", outcome.best.s);
            print!("{}", outcome.best.report.to_text());
            Ok(())
        }
        Command::Sim(SimCmd::Sweep { config, overrides }) => {
            let mut pairs = match &config {
                Some(path) => parse_key_values(&read_input(path)?)?,
                None => Default::default(),
            };
            for o in &overrides {
                let (k, v) = o
                    .split_once('=')
                    .ok_or_else(|| Error::Config(format!("override `{o}` is not key=value")))?;
                pairs.insert(k.trim().to_string(), v.trim().to_string());
            }
            let cfg = SweepConfig::from_pairs(&pairs)?;
            let simulator = sim::Simulator::new(cfg.clone())?;
            for &system in &cfg.systems {
                let (payload, eb_bits, channel) = simulator.frame_shape(system);
                eprintln!(
                    "# {system}: payload {payload} bits, Eb over {eb_bits} bits, {channel} channel bits, rate {:.4}",
                    eb_bits as f64 / channel as f64
                );
            }
            for path in [&cfg.output, &cfg.plot].into_iter().flatten() {
                fs::OpenOptions::new()
                    .create(true)
                    .append(true)
                    .open(path)
                    .map_err(|e| Error::Io(format!("{path}: {e}")))?;
            }
            println!("{}", sim::CSV_HEADER);
            let results = simulator.run_sweep_with(&mut |r| {
                println!("{}", r.csv_row());
                eprintln!("# {} {} dB: {:.1}s", r.system, r.ebno_db, r.elapsed_seconds);
            })?;
            if let Some(path) = &cfg.output {
                fs::write(path, sim::to_csv(&results)).map_err(|e| Error::Io(format!("{path}: {e}")))?;
            }
            if let Some(path) = &cfg.plot {
                sim::write_svg(std::path::Path::new(path), &results)?;
            }
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::Parameter(_) | Error::Parse { .. } => ExitCode::from(2),
                _ => ExitCode::FAILURE,
            }
        }
    }
}
