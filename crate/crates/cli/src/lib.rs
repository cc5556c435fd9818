//! Command-line front end for `groupshift`: spec files, message files and
//! `key: value` reports.
//!
//! [`run_command`] is the whole program minus process exit, so tests can
//! drive it directly. Exit codes: 0 when every check passed, 1 when a
//! verdict was negative, 2 for usage, IO and parse errors.

pub mod message;
pub mod report;
pub mod spec;

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use groupshift::canonical::canonical_generators;
use groupshift::certify::{certify_encoder, conjugacy_certificate, ConjugacyCertificate};
use groupshift::control::{analyze, Derived, IndexSearch};
use groupshift::encoder::Encoder;
use groupshift::horizon::Horizons;
use groupshift::oracle::WindowCode;
use groupshift::{FiniteAbelianGroup, GroupShift};

use crate::report::{found, Report, DISCLAIMER};
use crate::spec::{format_symbol, format_word, parse_spec, Overrides, ShiftSpec};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "groupshift", version, about = "Controllability, canonical generators and encoders for group shifts")]
struct Cli {
    #[command(flatten)]
    horizons: HorizonArgs,
    /// Append wall-clock timing to the report (breaks byte-for-byte reproducibility).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct HorizonArgs {
    /// Padding on each side when certifying a finite word as a member [default: 2 x span]
    #[arg(long, global = true)]
    margin: Option<usize>,
    /// Past horizon L for the steering checks [default: 2 x (span + n)]
    #[arg(long, global = true)]
    past: Option<usize>,
    /// Largest candidate controllability index [default: 16]
    #[arg(long, global = true)]
    index_cap: Option<usize>,
    /// Largest block length tried for the finite-type memory [default: 16]
    #[arg(long, global = true)]
    memory_cap: Option<usize>,
    /// Longest finite member searched when building generating sets [default: 16]
    #[arg(long, global = true)]
    support_cap: Option<usize>,
    /// Largest block [0, N] tried by the injectivity check [default: 16]
    #[arg(long, global = true)]
    block_cap: Option<usize>,
    /// Window lengths used by the verification checks [default: 8]
    #[arg(long, global = true)]
    verify: Option<usize>,
}

impl HorizonArgs {
    fn overrides(&self) -> Overrides {
        Overrides {
            margin: self.margin,
            past: self.past,
            index_cap: self.index_cap,
            memory_cap: self.memory_cap,
            support_cap: self.support_cap,
            block_cap: self.block_cap,
            verify: self.verify,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Weak controllability, controllability indices and finite-type memory
    Analyze { spec: PathBuf },
    /// Canonical generating set for every prime dividing the alphabet order
    Generators { spec: PathBuf },
    /// Apply the spec's taps, or the canonical encoder, to a message file
    Encode { spec: PathBuf, message: PathBuf },
    /// Full conjugacy certificate, or certification of the spec's taps
    Certify { spec: PathBuf },
    /// Enumerate a window code by brute force and compare it with the solver
    Oracle {
        spec: PathBuf,
        /// First index of the window
        #[arg(long, default_value_t = 0, allow_negative_numbers = true)]
        from: i64,
        /// Last index of the window [default: from + 3]
        #[arg(long, allow_negative_numbers = true)]
        to: Option<i64>,
        /// Give up once the code has more elements than this
        #[arg(long, default_value_t = 1 << 20)]
        limit: u64,
        /// Print every element
        #[arg(long)]
        list: bool,
    },
}

/// Runs one command line (including the program name) and returns the exit
/// code with everything meant for standard output.
pub fn run_command<I, T>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            return (code, e.render().to_string());
        }
    };
    let start = Instant::now();
    let flags = cli.horizons.overrides();
    let result = match &cli.command {
        Command::Analyze { spec } => load(spec).map(|s| run_analyze(&s, &flags)),
        Command::Generators { spec } => load(spec).map(|s| run_generators(&s, &flags)),
        Command::Encode { spec, message } => load(spec).and_then(|s| run_encode(&s, &flags, message)),
        Command::Certify { spec } => load(spec).map(|s| run_certify(&s, &flags)),
        Command::Oracle { spec, from, to, limit, list } => {
            load(spec).map(|s| run_oracle(&s, &flags, *from, to.unwrap_or(from + 3), *limit, *list))
        }
    };
    match result {
        Ok((code, mut report)) => {
            if cli.timing {
                report.push("timing.ms", start.elapsed().as_millis());
            }
            (code, report.to_string())
        }
        Err(message) => (EXIT_USAGE, format!("error: {message}\n")),
    }
}

fn load(path: &Path) -> Result<ShiftSpec, String> {
    let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
    parse_spec(&text).map_err(|e| format!("{}: {e}", path.display()))
}

fn header(command: &str, spec: &ShiftSpec, hz: &Horizons) -> Report {
    let mut r = Report::new();
    r.push("command", command);
    r.push("input.group", &spec.group);
    for (i, w) in spec.generators.iter().enumerate() {
        r.push(format!("input.gen.{i}"), format_word(&spec.group, w));
    }
    for (i, w) in spec.taps.iter().enumerate() {
        r.push(format!("input.tap.{i}"), format_word(&spec.group, w));
    }
    r.push("horizon.margin", hz.margin);
    r.push("horizon.past", hz.past.map_or_else(|| "auto (2 x (span + n))".to_string(), |l| l.to_string()));
    r.push("horizon.index-cap", hz.index_cap);
    r.push("horizon.memory-cap", hz.memory_cap);
    r.push("horizon.support-cap", hz.support_cap);
    r.push("horizon.block-cap", hz.block_cap);
    r.push("horizon.verify", hz.verify);
    r.push("disclaimer", DISCLAIMER);
    r
}

fn push_search(r: &mut Report, key: &str, h: &FiniteAbelianGroup, s: &IndexSearch) {
    r.push(key, found(s.index, s.cap));
    r.push(format!("{key}.monotone"), s.is_monotone());
    if let Some(t) = s.last_failure() {
        r.push(format!("{key}.failing-n"), t.n);
        r.push(format!("{key}.failing-past"), t.past);
        if let Some(w) = &t.counterexample {
            r.push(format!("{key}.counterexample"), format_word(h, w));
        }
    }
}

fn run_analyze(spec: &ShiftSpec, flags: &Overrides) -> (i32, Report) {
    let g = spec.shift();
    let hz = spec.horizons(flags);
    let h = g.alphabet();
    let mut r = header("analyze", spec, &hz);
    let report = analyze(&g, &hz);
    for d in &report.density {
        let key = match d.derived {
            Derived::Itself => "analysis.dense.shift".to_string(),
            Derived::Socle(p) => format!("analysis.dense.socle-{p}"),
        };
        r.push(&key, d.holds);
        if let Some((a, b)) = d.failure {
            r.push(format!("{key}.failure"), format!("[{a}, {b}]"));
        }
    }
    r.push("analysis.weakly-controllable", report.weakly_controllable());
    push_search(&mut r, "analysis.n_c", h, &report.controllability);
    push_search(&mut r, "analysis.n_o", h, &report.order_controllability);
    r.push("analysis.indices-consistent", report.indices_consistent());
    let memory = g.finite_type_memory(hz.memory_cap.max(1), hz.verify).expect("cap is positive");
    r.push("analysis.finite-type-memory", found(memory, hz.memory_cap));
    let positive = report.weakly_controllable() && report.n_c().is_some() && memory.is_some() && report.indices_consistent();
    r.push("verdict", if positive { "controllable" } else { "not-controllable" });
    (if positive { EXIT_PASS } else { EXIT_NEGATIVE }, r)
}

fn push_generators(r: &mut Report, g: &GroupShift, hz: &Horizons) -> bool {
    let h = g.alphabet();
    let mut ok = true;
    for p in h.primes() {
        let key = format!("prime.{p}");
        match canonical_generators(g, p, hz) {
            Ok(set) => {
                r.push(format!("{key}.order-index"), set.order_index);
                r.push(format!("{key}.count"), set.entries.len());
                let heights: Vec<String> = set.heights().iter().map(u32::to_string).collect();
                r.push(format!("{key}.heights"), heights.join(" "));
                for (i, e) in set.entries.iter().enumerate() {
                    r.push(format!("{key}.generator.{i}.height"), e.height);
                    r.push(format!("{key}.generator.{i}.tap"), format_word(h, &e.tap));
                    r.push(format!("{key}.generator.{i}.socle"), format_word(h, &e.socle));
                }
            }
            Err(e) => {
                ok = false;
                r.push(format!("{key}.error"), e);
            }
        }
    }
    ok
}

fn run_generators(spec: &ShiftSpec, flags: &Overrides) -> (i32, Report) {
    let g = spec.shift();
    let hz = spec.horizons(flags);
    let mut r = header("generators", spec, &hz);
    let ok = push_generators(&mut r, &g, &hz);
    r.push("verdict", if ok { "complete" } else { "incomplete" });
    (if ok { EXIT_PASS } else { EXIT_NEGATIVE }, r)
}

fn push_encoder(r: &mut Report, e: &Encoder) {
    let h = e.alphabet();
    r.push("encoder.source", e.source());
    r.push("encoder.memory", e.memory());
    for (j, t) in e.taps().iter().enumerate() {
        r.push(format!("encoder.tap.{j}"), format!("order {} height {} word {}", t.order(), t.height, format_word(h, &t.word)));
    }
}

fn push_certificate(r: &mut Report, c: &ConjugacyCertificate) {
    if let Some(e) = &c.encoder {
        push_encoder(r, e);
    }
    if let (Some(e), Some(k)) = (&c.encoder, &c.checks) {
        let h = e.alphabet();
        r.push("checks.structure.homomorphism", k.structure.homomorphism);
        r.push("checks.structure.equivariance", k.structure.equivariance);
        r.push("checks.structure.order-bound", k.structure.order_bound);
        r.push("checks.injectivity.block", found(k.injectivity.block, c.horizons.block_cap));
        if k.injectivity.block.is_none() {
            let terms: Vec<String> = k.injectivity.witness.iter().map(|(j, n, a)| format!("{a}*x{j}@{n}")).collect();
            r.push("checks.injectivity.witness", terms.join(" + "));
        }
        r.push("checks.surjectivity", k.surjectivity.failure.is_none());
        if let Some((a, b)) = k.surjectivity.failure {
            r.push("checks.surjectivity.failure", format!("[{a}, {b}]"));
        }
        r.push("checks.noncatastrophic", k.noncatastrophic.witness.is_none());
        r.push("checks.noncatastrophic.pad", k.noncatastrophic.pad);
        if let Some(w) = &k.noncatastrophic.witness {
            r.push("checks.noncatastrophic.witness", format_word(h, w));
        }
        if let Some(m) = &k.noncatastrophic.partial_preimage {
            r.push("checks.noncatastrophic.partial-preimage", format_word(e.source(), m));
        }
    }
    r.push("certificate.complete", c.complete());
    if let Some(f) = &c.failure {
        r.push("certificate.failed-stage", f.stage);
        r.push("certificate.detail", &f.detail);
    }
}

fn certificate(spec: &ShiftSpec, g: &GroupShift, hz: &Horizons) -> ConjugacyCertificate {
    if spec.taps.is_empty() {
        conjugacy_certificate(g, hz)
    } else {
        let e = Encoder::from_words(spec.group.clone(), &spec.taps).expect("taps validated by the parser");
        certify_encoder(g, &e, hz)
    }
}

fn run_certify(spec: &ShiftSpec, flags: &Overrides) -> (i32, Report) {
    let g = spec.shift();
    let hz = spec.horizons(flags);
    let mut r = header("certify", spec, &hz);
    if spec.taps.is_empty() {
        push_generators(&mut r, &g, &hz);
    }
    let c = certificate(spec, &g, &hz);
    push_certificate(&mut r, &c);
    r.push("verdict", if c.complete() { "conjugate" } else { "not-certified" });
    (if c.complete() { EXIT_PASS } else { EXIT_NEGATIVE }, r)
}

fn run_encode(spec: &ShiftSpec, flags: &Overrides, path: &Path) -> Result<(i32, Report), String> {
    let g = spec.shift();
    let hz = spec.horizons(flags);
    let mut r = header("encode", spec, &hz);
    let e = if spec.taps.is_empty() {
        match conjugacy_certificate(&g, &hz) {
            ConjugacyCertificate { encoder: Some(e), .. } => e,
            ConjugacyCertificate { failure, .. } => {
                r.push("encoder", "unavailable");
                if let Some(f) = failure {
                    r.push("certificate.failed-stage", f.stage);
                    r.push("certificate.detail", f.detail);
                }
                r.push("verdict", "no-encoder");
                return Ok((EXIT_NEGATIVE, r));
            }
        }
    } else {
        Encoder::from_words(spec.group.clone(), &spec.taps).expect("taps validated by the parser")
    };
    let text = std::fs::read_to_string(path).map_err(|err| format!("{}: {err}", path.display()))?;
    let (first, symbols) = message::parse_message(&text, e.source().declared_orders())
        .map_err(|err| format!("{}: {err}", path.display()))?;
    let m = e.message(first, &symbols).map_err(|err| format!("{}: {err}", path.display()))?;
    let x = e.encode(&m);
    push_encoder(&mut r, &e);
    r.push("message", format_word(e.source(), &m));
    r.push("codeword", format_word(&spec.group, &x));
    let member = g.member(&x, hz.margin).inside;
    r.push("codeword.member", member);
    r.push("verdict", if member { "encoded" } else { "outside-shift" });
    Ok((if member { EXIT_PASS } else { EXIT_NEGATIVE }, r))
}

fn run_oracle(spec: &ShiftSpec, flags: &Overrides, a: i64, b: i64, limit: u64, list: bool) -> (i32, Report) {
    let g = spec.shift();
    let hz = spec.horizons(flags);
    let h = g.alphabet();
    let mut r = header("oracle", spec, &hz);
    r.push("oracle.window", format!("[{a}, {b}]"));
    let Some(code) = WindowCode::enumerate(&g, a, b, limit) else {
        r.push("oracle.size", format!("more than {limit}"));
        r.push("verdict", "limit-exceeded");
        return (EXIT_NEGATIVE, r);
    };
    r.push("oracle.size", code.len());
    let window = g.window(a, b).map(|w| w.order());
    let mut agrees = true;
    match window {
        Ok(n) => {
            r.push("oracle.window-module.order", n);
            agrees &= n == code.len() as u128;
        }
        Err(e) => {
            r.push("oracle.window-module.error", e);
            agrees = false;
        }
    }
    let c = certificate(spec, &g, &hz);
    if let (true, Some(e)) = (c.complete(), &c.encoder) {
        let image = e.image_window(a, b);
        let inside = image.rows().iter().all(|row| {
            let block: Vec<_> = row.chunks(h.rank()).map(|s| h.from_residues(s)).collect();
            code.contains(&block)
        });
        r.push("oracle.encoder-image.order", image.order());
        agrees &= inside && image.order() == code.len() as u128;
    } else {
        r.push("oracle.encoder-image.order", "no certified encoder");
    }
    r.push("oracle.agrees", agrees);
    if list {
        for (i, block) in code.blocks().enumerate() {
            let syms: Vec<String> = block.iter().map(|s| format_symbol(h, s)).collect();
            r.push(format!("oracle.element.{i}"), syms.join(" "));
        }
    }
    r.push("verdict", if agrees { "agrees" } else { "disagrees" });
    (if agrees { EXIT_PASS } else { EXIT_NEGATIVE }, r)
}
