//! Monte-Carlo BER/FER harness comparing the IRA code against the
//! convolutional baseline, with CSV and SVG output.
//!
//! Every frame draws its payload and noise from a stream keyed by
//! `(seed, point, frame)`. Frames are decoded in fixed-size batches on a
//! worker pool and tallied in frame order, stopping exactly at the frame that
//! reaches the error target, so results do not depend on the worker count.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;
use std::str::FromStr;
use std::time::Instant;

use rayon::prelude::*;

use crate::baseline::{conv_encode, viterbi_decode, ConvCodeSpec};
use crate::channel::{add_noise, ebno_to_sigma, frame_rng, llrs, modulate, random_bits, EbAccounting};
use crate::code::{encode, paper_code, IraCode};
use crate::decoder::{decode, CheckRule, DecoderConfig, InfoUpdate, Scheduling, DEFAULT_ITERATIONS};
use crate::{Bit, Error, Result};

pub const CSV_HEADER: &str = "system,scheduling,ebno_db,frames,bit_errors,frame_errors,ber,fer,iters,seed";

const BATCH: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum System {
    Ira,
    Conv,
}

impl FromStr for System {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "ira" => Ok(Self::Ira),
            "conv" => Ok(Self::Conv),
            other => Err(Error::Config(format!("unknown system `{other}`"))),
        }
    }
}

impl std::fmt::Display for System {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Self::Ira => "ira",
            Self::Conv => "conv",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepConfig {
    /// Systems to simulate, in order.
    pub systems: Vec<System>,
    pub scheduling: Scheduling,
    pub iters: usize,
    pub snr_points: Vec<f64>,
    pub max_frames: u64,
    pub target_frame_errors: u64,
    pub seed: u64,
    pub eb_accounting: EbAccounting,
    /// Worker threads; `None` uses the global pool.
    pub workers: Option<usize>,
    pub early_stop: bool,
    pub rule: CheckRule,
    pub info_update: InfoUpdate,
    pub generators: ConvCodeSpec,
    /// Code description file; the built-in default code when absent.
    pub code_file: Option<String>,
    pub output: Option<String>,
    pub plot: Option<String>,
}

impl Default for SweepConfig {
    fn default() -> Self {
        Self {
            systems: vec![System::Ira, System::Conv],
            scheduling: Scheduling::Turbo,
            iters: DEFAULT_ITERATIONS,
            snr_points: (0..9).map(|i| 1.0 + 0.5 * i as f64).collect(),
            max_frames: 10_000,
            target_frame_errors: 100,
            seed: 1,
            eb_accounting: EbAccounting::Payload,
            workers: None,
            early_stop: false,
            rule: CheckRule::Exact,
            info_update: InfoUpdate::PerSweep,
            generators: ConvCodeSpec::default(),
            code_file: None,
            output: None,
            plot: None,
        }
    }
}

/// `a,b,c` or inclusive `start:stop:step`.
pub fn parse_snr_points(text: &str) -> Result<Vec<f64>> {
    let bad = |t: &str| Error::Config(format!("bad Eb/N0 value `{t}`"));
    let parts: Vec<&str> = text.split(':').map(str::trim).collect();
    let points = if parts.len() == 3 {
        let [a, b, step] = [parts[0], parts[1], parts[2]].map(|t| t.parse::<f64>().map_err(|_| bad(t)));
        let (a, b, step) = (a?, b?, step?);
        if step <= 0.0 || b < a {
            return Err(Error::Config(format!("bad Eb/N0 range `{text}`")));
        }
        let count = ((b - a) / step + 1e-9).floor() as usize + 1;
        (0..count).map(|i| a + step * i as f64).collect()
    } else {
        text.split(',')
            .map(|t| t.trim().parse::<f64>().map_err(|_| bad(t)))
            .collect::<Result<Vec<_>>>()?
    };
    if points.is_empty() {
        return Err(Error::Config("snr_points is empty".into()));
    }
    Ok(points)
}

/// Flat `key = value` text; `#` starts a comment.
pub fn parse_key_values(text: &str) -> Result<BTreeMap<String, String>> {
    let mut out = BTreeMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line.split_once('=').ok_or(Error::Parse {
            line: idx + 1,
            msg: format!("expected `key = value`, got `{line}`"),
        })?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

impl SweepConfig {
    /// Applies `key = value` settings over the defaults. Unknown keys are errors.
    pub fn from_pairs(pairs: &BTreeMap<String, String>) -> Result<Self> {
        let mut cfg = Self::default();
        for (key, value) in pairs {
            cfg.set(key, value)?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn from_text(text: &str) -> Result<Self> {
        Self::from_pairs(&parse_key_values(text)?)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: FromStr>(key: &str, v: &str) -> Result<T> {
            v.parse().map_err(|_| Error::Config(format!("bad value `{v}` for `{key}`")))
        }
        let flag = |v: &str| match v {
            "true" | "on" | "yes" | "1" => Ok(true),
            "false" | "off" | "no" | "0" => Ok(false),
            _ => Err(Error::Config(format!("bad boolean `{v}` for `{key}`"))),
        };
        match key {
            "system" | "systems" => {
                self.systems = value
                    .split(',')
                    .map(|s| s.trim().parse())
                    .collect::<Result<Vec<_>>>()?;
            }
            "scheduling" => {
                self.scheduling = value.parse().map_err(|e: Error| Error::Config(e.to_string()))?
            }
            "iters" => self.iters = num(key, value)?,
            "snr_points" | "ebno_db" => self.snr_points = parse_snr_points(value)?,
            "max_frames" => self.max_frames = num(key, value)?,
            "target_frame_errors" => self.target_frame_errors = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "eb_accounting" => self.eb_accounting = value.parse()?,
            "workers" => {
                let w: usize = num(key, value)?;
                self.workers = (w > 0).then_some(w);
            }
            "early_stop" => self.early_stop = flag(value)?,
            "rule" => {
                self.rule = match value {
                    "exact" => CheckRule::Exact,
                    "min-sum" | "minsum" => CheckRule::MinSum,
                    _ => return Err(Error::Config(format!("unknown rule `{value}`"))),
                }
            }
            "info_update" => {
                self.info_update = match value {
                    "per-sweep" => InfoUpdate::PerSweep,
                    "per-check" => InfoUpdate::PerCheck,
                    _ => return Err(Error::Config(format!("unknown info_update `{value}`"))),
                }
            }
            "generators" | "gens" => {
                self.generators = value.parse().map_err(|e: Error| Error::Config(e.to_string()))?
            }
            "code" | "code_file" => {
                self.code_file = (value != "paper" && value != "builtin").then(|| value.to_string())
            }
            "output" | "csv" => self.output = Some(value.to_string()),
            "plot" | "svg" => self.plot = Some(value.to_string()),
            other => return Err(Error::Config(format!("unknown key `{other}`"))),
        }
        Ok(())
    }

    pub fn validate(&self) -> Result<()> {
        if self.snr_points.is_empty() {
            return Err(Error::Config("snr_points is empty".into()));
        }
        if self.snr_points.iter().any(|x| x.is_nan()) {
            return Err(Error::Config("snr_points contains NaN".into()));
        }
        if self.max_frames == 0 {
            return Err(Error::Config("max_frames must be at least 1".into()));
        }
        if self.systems.is_empty() {
            return Err(Error::Config("no system selected".into()));
        }
        if self.iters == 0 && self.systems.contains(&System::Ira) {
            return Err(Error::Config("iters must be positive".into()));
        }
        Ok(())
    }

    fn decoder(&self) -> DecoderConfig {
        DecoderConfig {
            scheduling: self.scheduling,
            max_iter: self.iters,
            early_stop: self.early_stop,
            rule: self.rule,
            info_update: self.info_update,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SimResult {
    pub system: System,
    /// `flooding`/`turbo` for the IRA code, `viterbi` for the baseline.
    pub scheduling: String,
    pub ebno_db: f64,
    pub frames_run: u64,
    pub bit_errors: u64,
    pub frame_errors: u64,
    pub ber: f64,
    pub fer: f64,
    pub iters: usize,
    pub seed: u64,
    pub elapsed_seconds: f64,
}

impl SimResult {
    pub fn csv_row(&self) -> String {
        format!(
            "{},{},{},{},{},{},{},{},{},{}",
            self.system,
            self.scheduling,
            self.ebno_db,
            self.frames_run,
            self.bit_errors,
            self.frame_errors,
            self.ber,
            self.fer,
            self.iters,
            self.seed
        )
    }

    /// Inverse of [`SimResult::csv_row`]; `elapsed_seconds` is not stored.
    pub fn from_csv_row(row: &str) -> Result<Self> {
        let f: Vec<&str> = row.trim().split(',').collect();
        if f.len() != 10 {
            return Err(Error::Parse {
                line: 0,
                msg: format!("expected 10 fields, got {}", f.len()),
            });
        }
        fn p<T: FromStr>(s: &str) -> Result<T> {
            s.parse().map_err(|_| Error::Parse {
                line: 0,
                msg: format!("bad field `{s}`"),
            })
        }
        Ok(Self {
            system: f[0].parse()?,
            scheduling: f[1].to_string(),
            ebno_db: p(f[2])?,
            frames_run: p(f[3])?,
            bit_errors: p(f[4])?,
            frame_errors: p(f[5])?,
            ber: p(f[6])?,
            fer: p(f[7])?,
            iters: p(f[8])?,
            seed: p(f[9])?,
            elapsed_seconds: 0.0,
        })
    }
}

pub fn to_csv(results: &[SimResult]) -> String {
    let mut out = String::from(CSV_HEADER);
    out.push('\n');
    for r in results {
        out.push_str(&r.csv_row());
        out.push('\n');
    }
    out
}

pub fn parse_csv(text: &str) -> Result<Vec<SimResult>> {
    let mut lines = text.lines().filter(|l| !l.trim().is_empty());
    match lines.next() {
        Some(h) if h.trim() == CSV_HEADER => {}
        _ => {
            return Err(Error::Parse {
                line: 1,
                msg: "missing or wrong CSV header".into(),
            })
        }
    }
    lines.map(SimResult::from_csv_row).collect()
}

/// Built code plus baseline, ready to simulate.
pub struct Simulator {
    pub config: SweepConfig,
    pub code: IraCode,
}

#[derive(Debug, Clone, Copy, Default)]
struct FrameOutcome {
    bit_errors: u64,
}

impl Simulator {
    /// Loads the code and checks every dimension before any frame runs.
    pub fn new(config: SweepConfig) -> Result<Self> {
        config.validate()?;
        let code = match &config.code_file {
            None => paper_code(),
            Some(path) => {
                let text = std::fs::read_to_string(path)
                    .map_err(|e| Error::Config(format!("cannot read code file `{path}`: {e}")))?;
                IraCode::from_text(&text).map_err(|e| Error::Config(format!("code file `{path}`: {e}")))?
            }
        };
        if code.payload_len() == 0 {
            return Err(Error::Config("code has no payload bits".into()));
        }
        Ok(Self { config, code })
    }

    pub fn with_code(config: SweepConfig, code: IraCode) -> Result<Self> {
        config.validate()?;
        Ok(Self { config, code })
    }

    /// Payload bits per frame and the Eb reference bit count.
    pub fn frame_shape(&self, system: System) -> (usize, usize, usize) {
        match system {
            System::Ira => {
                let eb_bits = match self.config.eb_accounting {
                    EbAccounting::Payload => self.code.payload_len(),
                    EbAccounting::Frame => self.code.k(),
                };
                (self.code.payload_len(), eb_bits, self.code.n())
            }
            System::Conv => {
                let payload = self.code.k();
                (payload, payload, self.config.generators.coded_len(payload))
            }
        }
    }

    fn simulate_frame(&self, system: System, point: usize, sigma: f64, frame: u64) -> FrameOutcome {
        let mut rng = frame_rng(self.config.seed, point, frame);
        let (payload_len, _, _) = self.frame_shape(system);
        let payload = random_bits(payload_len, &mut rng);
        let decided: Vec<Bit> = match system {
            System::Ira => {
                let cw = encode(&self.code, &payload).expect("payload sized from code");
                let y = add_noise(&modulate(&cw.to_bits()), sigma, &mut rng);
                let r = decode(&self.code, &llrs(&y, sigma), &self.config.decoder())
                    .expect("llr length matches code");
                self.code.extract_payload(&r.hard_bits)
            }
            System::Conv => {
                let coded = conv_encode(&self.config.generators, &payload);
                let y = add_noise(&modulate(&coded), sigma, &mut rng);
                viterbi_decode(&self.config.generators, &llrs(&y, sigma)).expect("frame length")
            }
        };
        FrameOutcome {
            bit_errors: payload.iter().zip(&decided).filter(|(a, b)| a != b).count() as u64,
        }
    }

    /// Runs one Eb/N0 point. `point` selects the random substream.
    pub fn run_point(&self, system: System, point: usize, ebno_db: f64) -> Result<SimResult> {
        let (payload_len, eb_bits, channel_bits) = self.frame_shape(system);
        let sigma = ebno_to_sigma(ebno_db, eb_bits, channel_bits);
        let start = Instant::now();
        let pool = match self.config.workers {
            Some(w) => Some(
                rayon::ThreadPoolBuilder::new()
                    .num_threads(w)
                    .build()
                    .map_err(|e| Error::Config(format!("thread pool: {e}")))?,
            ),
            None => None,
        };
        let (mut frames, mut bit_errors, mut frame_errors) = (0u64, 0u64, 0u64);
        'outer: while frames < self.config.max_frames {
            let batch_end = (frames + BATCH as u64).min(self.config.max_frames);
            let run = || {
                (frames..batch_end)
                    .into_par_iter()
                    .map(|f| self.simulate_frame(system, point, sigma, f))
                    .collect::<Vec<_>>()
            };
            let outcomes = match &pool {
                Some(p) => p.install(run),
                None => run(),
            };
            for o in outcomes {
                frames += 1;
                bit_errors += o.bit_errors;
                frame_errors += u64::from(o.bit_errors > 0);
                if self.config.target_frame_errors > 0 && frame_errors >= self.config.target_frame_errors {
                    break 'outer;
                }
            }
        }
        let (scheduling, iters) = match system {
            System::Ira => (self.config.scheduling.to_string(), self.config.iters),
            System::Conv => ("viterbi".to_string(), 0),
        };
        Ok(SimResult {
            system,
            scheduling,
            ebno_db,
            frames_run: frames,
            bit_errors,
            frame_errors,
            ber: bit_errors as f64 / (frames * payload_len as u64) as f64,
            fer: frame_errors as f64 / frames as f64,
            iters,
            seed: self.config.seed,
            elapsed_seconds: start.elapsed().as_secs_f64(),
        })
    }

    /// Every system over every point; `on_point` sees each result as it lands.
    pub fn run_sweep_with(&self, on_point: &mut dyn FnMut(&SimResult)) -> Result<Vec<SimResult>> {
        let mut out = Vec::new();
        for &system in &self.config.systems {
            for (i, &ebno) in self.config.snr_points.iter().enumerate() {
                let r = self.run_point(system, i, ebno)?;
                on_point(&r);
                out.push(r);
            }
        }
        Ok(out)
    }
}

/// Runs the sweep and writes the CSV and plot named in the config.
pub fn run_sweep(config: &SweepConfig) -> Result<Vec<SimResult>> {
    let sim = Simulator::new(config.clone())?;
    // fail on unwritable paths before spending time simulating
    for path in [&config.output, &config.plot].into_iter().flatten() {
        std::fs::OpenOptions::new()
            .create(true)
            .append(true)
            .open(path)
            .map_err(|e| Error::Io(format!("{path}: {e}")))?;
    }
    let results = sim.run_sweep_with(&mut |_| {})?;
    if let Some(path) = &config.output {
        std::fs::write(path, to_csv(&results)).map_err(|e| Error::Io(format!("{path}: {e}")))?;
    }
    if let Some(path) = &config.plot {
        write_svg(Path::new(path), &results)?;
    }
    Ok(results)
}

/// Eb/N0 where the FER curve of `system` crosses `target`, interpolating
/// log10(FER) linearly between the bracketing points.
pub fn crossing_ebno(results: &[SimResult], system: System, target: f64) -> Option<f64> {
    let mut pts: Vec<(f64, f64)> = results
        .iter()
        .filter(|r| r.system == system)
        .map(|r| (r.ebno_db, r.fer))
        .collect();
    pts.sort_by(|a, b| a.0.total_cmp(&b.0));
    for w in pts.windows(2) {
        let ((x0, f0), (x1, f1)) = (w[0], w[1]);
        if f0 >= target && f1 <= target {
            if f1 == 0.0 || f0 == f1 {
                return Some(if f0 == target { x0 } else { x1 });
            }
            let (l0, l1, lt) = (f0.log10(), f1.log10(), target.log10());
            return Some(x0 + (l0 - lt) / (l0 - l1) * (x1 - x0));
        }
    }
    None
}

/// Log-scale FER/BER plot, one polyline per (system, metric).
pub fn render_svg(results: &[SimResult]) -> String {
    let (w, h) = (720.0, 480.0);
    let (left, right, top, bottom) = (70.0, 150.0, 20.0, 50.0);
    let finite: Vec<&SimResult> = results.iter().filter(|r| r.ebno_db.is_finite()).collect();
    let xs = finite.iter().map(|r| r.ebno_db);
    let (mut x_min, mut x_max) = xs.clone().fold((f64::MAX, f64::MIN), |(a, b), x| (a.min(x), b.max(x)));
    if x_min > x_max {
        (x_min, x_max) = (0.0, 1.0);
    }
    if x_max - x_min < 1e-9 {
        x_max = x_min + 1.0;
    }
    let positive = finite
        .iter()
        .flat_map(|r| [r.ber, r.fer])
        .filter(|v| *v > 0.0)
        .fold(1.0f64, f64::min);
    let decade_lo = positive.log10().floor().min(-1.0);
    let px = |x: f64| left + (x - x_min) / (x_max - x_min) * (w - left - right);
    let py = |v: f64| {
        let l = v.max(10f64.powf(decade_lo)).log10();
        top + (0.0 - l) / (0.0 - decade_lo) * (h - top - bottom)
    };

    let mut s = String::new();
    let _ = writeln!(
        s,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(s, r#"<rect width="{w}" height="{h}" fill="white"/>"#);
    let mut decade = 0.0;
    while decade >= decade_lo {
        let y = py(10f64.powf(decade));
        let _ = writeln!(
            s,
            "<line x1=\"{left}\" y1=\"{y:.1}\" x2=\"{:.1}\" y2=\"{y:.1}\" stroke=\"#ddd\"/><text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"end\">1e{decade}</text>",
            w - right,
            left - 6.0,
            y + 4.0
        );
        decade -= 1.0;
    }
    let steps = ((x_max - x_min) / 0.5).round().max(1.0) as usize;
    for i in 0..=steps {
        let x = x_min + (x_max - x_min) * i as f64 / steps as f64;
        let _ = writeln!(
            s,
            "<line x1=\"{0:.1}\" y1=\"{top}\" x2=\"{0:.1}\" y2=\"{1:.1}\" stroke=\"#eee\"/><text x=\"{0:.1}\" y=\"{2:.1}\" text-anchor=\"middle\">{x:.1}</text>",
            px(x),
            h - bottom,
            h - bottom + 16.0
        );
    }
    let _ = writeln!(
        s,
        "<text x=\"{:.1}\" y=\"{:.1}\" text-anchor=\"middle\">Eb/N0 (dB)</text>",
        (left + w - right) / 2.0,
        h - 10.0
    );

    let colors = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];
    let mut systems: Vec<(System, String)> = finite.iter().map(|r| (r.system, r.scheduling.clone())).collect();
    systems.sort();
    systems.dedup();
    let mut legend_y = top + 10.0;
    for (ci, (system, sched)) in systems.iter().enumerate() {
        let color = colors[ci % colors.len()];
        let mut rows: Vec<&&SimResult> = finite
            .iter()
            .filter(|r| r.system == *system && &r.scheduling == sched)
            .collect();
        rows.sort_by(|a, b| a.ebno_db.total_cmp(&b.ebno_db));
        for (metric, dash) in [("fer", ""), ("ber", " stroke-dasharray=\"5,3\"")] {
            let pts: Vec<String> = rows
                .iter()
                .map(|r| {
                    let v = if metric == "fer" { r.fer } else { r.ber };
                    format!("{:.1},{:.1}", px(r.ebno_db), py(v))
                })
                .collect();
            let _ = writeln!(
                s,
                "<polyline data-system=\"{system}\" data-metric=\"{metric}\" fill=\"none\" stroke=\"{color}\" stroke-width=\"2\"{dash} points=\"{}\"/>",
                pts.join(" ")
            );
            let _ = writeln!(
                s,
                "<text x=\"{:.1}\" y=\"{legend_y:.1}\" fill=\"{color}\">{system} {sched} {}</text>",
                w - right + 8.0,
                metric.to_uppercase()
            );
            legend_y += 16.0;
        }
    }
    s.push_str("</svg>\n");
    s
}

pub fn write_svg(path: &Path, results: &[SimResult]) -> Result<()> {
    std::fs::write(path, render_svg(results)).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}
