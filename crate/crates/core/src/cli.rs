//! The `commforge` command line.
//!
//! Exit codes: 0 for success or a true answer, 1 for a checked false answer
//! or a refusal, 2 for usage and input errors. Output on stdout is
//! deterministic; elapsed time goes to stderr under `--timing`.

use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::bounds::l_of_surface;
use crate::commutator::decompose::{DecomposeError, Decomposer};
use crate::commutator::identities::{witt_hall_b, witt_hall_c};
use crate::commutator::tree::{CommutatorTree, Shape};
use crate::limits::Limits;
use crate::magnus::{lcs_member_with, magnus_expand_with};
use crate::notation::{flat_len, flatten, parse, parse_inferring_alphabet, print, Expr};
use crate::sample;
use crate::surface::{check_n_hyperbolic, lint_good_position, search_ordering, BandSurface, Hyperbolicity, Role};
use crate::triviality::{brute_witness, verify_witness, witness_for_product, witness_from_tree, MarkedWord};
use crate::word::{Alphabet, Word};

/// Longest flattened word the CLI will build.
pub const MAX_FLAT_LEN: u128 = 1 << 22;

#[derive(Debug, Parser)]
#[command(name = "commforge", version, about = "Commutator calculus for n-triviality of Seifert surface push-offs")]
struct Cli {
    /// Print elapsed time to stderr.
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct WordArgs {
    /// Word in bracket notation, e.g. "[[x,y],y^-1]".
    #[arg(long)]
    word: String,
    /// Comma-separated generator names; inferred from the word when absent.
    #[arg(long)]
    alphabet: Option<String>,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Test membership in the lower central term F^(depth).
    Member {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        depth: usize,
        #[arg(long)]
        json: bool,
    },
    /// Write an element of F^(depth) as simple commutators of length >= depth.
    Decompose {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        depth: usize,
        /// Magnus rounds allowed (default 2 * depth).
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long)]
        json: bool,
    },
    /// Build an n-triviality witness.
    Witness {
        #[command(flatten)]
        word: WordArgs,
        #[arg(long)]
        n: usize,
        /// Check all 2^(n+1) - 1 deletions.
        #[arg(long)]
        verify: bool,
        /// Search position sets exhaustively instead (short words only).
        #[arg(long)]
        brute: bool,
    },
    /// Disc-band surfaces.
    Surface {
        #[command(subcommand)]
        command: SurfaceCommand,
    },
    /// Run seeded property checks.
    Selftest {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 50)]
        cases: usize,
    },
}

#[derive(Debug, Args)]
struct OrderingArgs {
    /// Comma-separated gamma indices, e.g. "2,1".
    #[arg(long, conflicts_with = "search")]
    ordering: Option<String>,
    /// Try every ordering (genus <= 6).
    #[arg(long)]
    search: bool,
}

#[derive(Debug, Subcommand)]
enum SurfaceCommand {
    /// Certify n-hyperbolicity.
    Check {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        ordering: OrderingArgs,
    },
    /// Triviality-order bounds of a certified surface.
    Bounds {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        n: usize,
        #[command(flatten)]
        ordering: OrderingArgs,
    },
    /// Good-position lint of an annotated band.
    Lint {
        #[arg(long)]
        file: PathBuf,
        #[arg(long)]
        band: String,
    },
}

/// Machine-readable result envelope.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: Vec<String>,
    pub input_digest: String,
    pub result: Value,
}

struct Failure {
    code: i32,
    message: String,
}

fn usage(message: impl Into<String>) -> Failure {
    Failure { code: 2, message: message.into() }
}

fn refused(message: impl Into<String>) -> Failure {
    Failure { code: 1, message: message.into() }
}

struct Ctx<'a> {
    out: &'a mut dyn Write,
    echo: Vec<String>,
    limits: Limits,
}

impl Ctx<'_> {
    fn emit(&mut self, digest_input: &[u8], result: Value) -> Result<(), Failure> {
        let report = RunReport {
            tool: "commforge",
            version: env!("CARGO_PKG_VERSION"),
            command: self.echo.clone(),
            input_digest: hex(&Sha256::digest(digest_input)),
            result,
        };
        let text = serde_json::to_string_pretty(&report).expect("reports serialize");
        self.line(&text)
    }

    fn line(&mut self, s: &str) -> Result<(), Failure> {
        writeln!(self.out, "{s}").map_err(|e| usage(format!("cannot write output: {e}")))
    }
}

fn hex(bytes: &[u8]) -> String {
    bytes.iter().map(|b| format!("{b:02x}")).collect()
}

/// Run the CLI on `args` (program name first) and return the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    let limits = match Limits::from_env() {
        Ok(l) => l,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return 2;
        }
    };
    let echo = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    let started = Instant::now();
    let timing = cli.timing;
    let mut ctx = Ctx { out, echo, limits };
    let code = match dispatch(cli.command, &mut ctx) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    };
    if timing {
        let _ = writeln!(err, "elapsed: {:.3} ms", started.elapsed().as_secs_f64() * 1e3);
    }
    code
}

fn dispatch(cmd: Command, ctx: &mut Ctx) -> Result<i32, Failure> {
    match cmd {
        Command::Member { word, depth, json } => member(ctx, &word, depth, json),
        Command::Decompose { word, depth, budget, json } => decompose(ctx, &word, depth, budget, json),
        Command::Witness { word, n, verify, brute } => witness(ctx, &word, n, verify, brute),
        Command::Surface { command } => surface(ctx, command),
        Command::Selftest { seed, cases } => selftest(ctx, seed, cases),
    }
}

fn read_word(args: &WordArgs) -> Result<(Arc<Alphabet>, Expr, Word), Failure> {
    let (alphabet, expr) = match &args.alphabet {
        Some(names) => {
            let alphabet = Alphabet::new(names.split(',').map(str::trim).filter(|s| !s.is_empty()))
                .map_err(|e| usage(format!("bad alphabet: {e}")))?;
            let expr = parse(&args.word, &alphabet).map_err(|e| usage(e.to_string()))?;
            (alphabet, expr)
        }
        None => parse_inferring_alphabet(&args.word).map_err(|e| usage(e.to_string()))?,
    };
    let len = flat_len(&expr);
    if len > MAX_FLAT_LEN {
        return Err(usage(format!("word flattens to {len} letters, above the limit {MAX_FLAT_LEN}")));
    }
    let word = flatten(&expr, alphabet.clone());
    Ok((alphabet, expr, word))
}

fn word_digest(args: &WordArgs, extra: &str) -> Vec<u8> {
    format!("{}\n{}\n{extra}", args.word, args.alphabet.as_deref().unwrap_or("")).into_bytes()
}

fn member(ctx: &mut Ctx, args: &WordArgs, depth: usize, json: bool) -> Result<i32, Failure> {
    if depth == 0 {
        return Err(usage("--depth must be at least 1"));
    }
    let (_, _, w) = read_word(args)?;
    let member = lcs_member_with(&w, depth, &ctx.limits).map_err(|e| usage(e.to_string()))?;
    if json {
        let result = json!({ "word": print(&w), "depth": depth, "member": member });
        ctx.emit(&word_digest(args, &depth.to_string()), result)?;
    } else {
        ctx.line(&member.to_string())?;
    }
    Ok(if member { 0 } else { 1 })
}

fn decompose(ctx: &mut Ctx, args: &WordArgs, depth: usize, budget: Option<usize>, json: bool) -> Result<i32, Failure> {
    if depth == 0 {
        return Err(usage("--depth must be at least 1"));
    }
    let (alphabet, expr, w) = read_word(args)?;
    let mut limits = ctx.limits;
    if budget.is_some() {
        limits.decompose_budget = budget;
    }
    let d = match Decomposer::new(limits).decompose_expr(&expr, alphabet, depth) {
        Ok(d) => d,
        Err(
            e @ (DecomposeError::NotMember(_)
            | DecomposeError::BudgetExceeded { .. }
            | DecomposeError::RemainderTooLong { .. }),
        ) => {
            return Err(refused(e.to_string()))
        }
        Err(e) => return Err(usage(e.to_string())),
    };
    if json {
        let factors: Vec<Value> = d
            .factors
            .iter()
            .map(|t| json!({ "commutator": t.to_text(), "length": t.length(), "word": print(&t.flatten()) }))
            .collect();
        let result = json!({ "word": print(&w), "depth": depth, "magnus_rounds": d.magnus_rounds, "factors": factors });
        ctx.emit(&word_digest(args, &format!("{depth} {budget:?}")), result)?;
    } else {
        for t in &d.factors {
            ctx.line(&t.to_text())?;
        }
    }
    Ok(0)
}

fn witness(ctx: &mut Ctx, args: &WordArgs, n: usize, verify: bool, brute: bool) -> Result<i32, Failure> {
    let (alphabet, expr, w) = read_word(args)?;
    let (mw, source): (MarkedWord, &str) = if brute {
        match brute_witness(&w, n, &ctx.limits).map_err(|e| usage(e.to_string()))? {
            Some(mw) => (mw, "brute"),
            None => return Err(refused(format!("no {n}-triviality witness exists for this word"))),
        }
    } else {
        match Shape::from_expr(&expr).filter(|s| s.length() > n) {
            Some(shape) => {
                let t = CommutatorTree::new(alphabet.clone(), shape);
                let mw = if t.length() == n + 1 {
                    witness_from_tree(&t)
                } else {
                    witness_for_product(&[t], n).map_err(|e| usage(e.to_string()))?
                };
                (mw, "tree")
            }
            None => {
                let member = lcs_member_with(&w, n + 1, &ctx.limits).map_err(|e| usage(e.to_string()))?;
                if !member {
                    return Err(refused(format!("word not certified in F^({})", n + 1)));
                }
                let d = Decomposer::new(ctx.limits)
                    .decompose_expr(&expr, alphabet.clone(), n + 1)
                    .map_err(|e| refused(e.to_string()))?;
                if d.factors.is_empty() {
                    return Err(refused("word is trivial; a witness needs a nonempty letter set"));
                }
                (witness_for_product(&d.factors, n).map_err(|e| usage(e.to_string()))?, "decomposition")
            }
        }
    };
    let verified = if verify { Some(verify_witness(&mw, &ctx.limits).map_err(|e| usage(e.to_string()))?) } else { None };
    let result = json!({
        "n": n,
        "source": source,
        "word": print(mw.word()),
        "length": mw.word().len(),
        "freely_equal_to_input": mw.word().freely_equal(&w),
        "sets": mw.sets(),
        "verified": verified,
    });
    ctx.emit(&word_digest(args, &format!("{n} {verify} {brute}")), result)?;
    Ok(if verified == Some(false) { 1 } else { 0 })
}

fn load_surface(file: &PathBuf) -> Result<(BandSurface, Vec<u8>), Failure> {
    let bytes = std::fs::read(file).map_err(|e| usage(format!("cannot read {}: {e}", file.display())))?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| usage("surface file is not UTF-8"))?;
    let s = BandSurface::from_json(&text).map_err(|e| usage(e.to_string()))?;
    Ok((s, bytes))
}

fn certify(ctx: &Ctx, s: &BandSurface, n: usize, ordering: &OrderingArgs) -> Result<Hyperbolicity, Failure> {
    let dec = Decomposer::new(ctx.limits);
    let result = if ordering.search {
        search_ordering(s, n, &dec)
    } else {
        let order: Vec<usize> = match &ordering.ordering {
            Some(text) => text
                .split(',')
                .map(|t| t.trim().parse::<usize>().map_err(|_| usage(format!("bad ordering entry `{t}`"))))
                .collect::<Result<_, _>>()?,
            None => (1..=s.genus()).collect(),
        };
        check_n_hyperbolic(s, &order, n, &dec)
    };
    result.map_err(|e| usage(e.to_string()))
}

fn surface(ctx: &mut Ctx, cmd: SurfaceCommand) -> Result<i32, Failure> {
    match cmd {
        SurfaceCommand::Check { file, n, ordering } => {
            let (s, mut digest) = load_surface(&file)?;
            let h = certify(ctx, &s, n, &ordering)?;
            digest.extend_from_slice(format!("\n{n} {:?} {}", ordering.ordering, ordering.search).as_bytes());
            let code = if matches!(h, Hyperbolicity::Certified(_)) { 0 } else { 1 };
            ctx.emit(&digest, serde_json::to_value(&h).expect("certificates serialize"))?;
            Ok(code)
        }
        SurfaceCommand::Bounds { file, n, ordering } => {
            let (s, mut digest) = load_surface(&file)?;
            digest.extend_from_slice(format!("\n{n} {:?} {}", ordering.ordering, ordering.search).as_bytes());
            match certify(ctx, &s, n, &ordering)? {
                Hyperbolicity::Certified(cert) => {
                    let report = l_of_surface(&cert);
                    ctx.emit(&digest, serde_json::to_value(&report).expect("reports serialize"))?;
                    Ok(0)
                }
                refusal => {
                    ctx.emit(&digest, serde_json::to_value(&refusal).expect("refusals serialize"))?;
                    Ok(1)
                }
            }
        }
        SurfaceCommand::Lint { file, band } => {
            let (s, mut digest) = load_surface(&file)?;
            digest.extend_from_slice(band.as_bytes());
            let role = (1..=s.genus())
                .flat_map(|i| [Role::Gamma(i), Role::Beta(i)])
                .find(|r| r.to_string() == band)
                .ok_or_else(|| usage(format!("no band `{band}`")))?;
            let v = lint_good_position(&s, role).map_err(|e| usage(e.to_string()))?;
            let clean = v.is_empty();
            ctx.emit(&digest, json!({ "band": band, "violations": v }))?;
            Ok(if clean { 0 } else { 1 })
        }
    }
}

fn selftest(ctx: &mut Ctx, seed: u64, cases: usize) -> Result<i32, Failure> {
    let mut rng = sample::rng(seed);
    let abc = Alphabet::new(["x", "y", "z"]).expect("valid names");
    let limits = ctx.limits;
    let mut results: Vec<(&str, bool)> = Vec::new();

    let magnus = (0..cases).all(|_| {
        let (u, v) = (sample::word(&mut rng, &abc, 20), sample::word(&mut rng, &abc, 20));
        let uv = magnus_expand_with(&u.concat(&v).unwrap(), 4, &limits).unwrap();
        let prod = magnus_expand_with(&u, 4, &limits).unwrap().mul(&magnus_expand_with(&v, 4, &limits).unwrap()).unwrap();
        uv == prod && magnus_expand_with(&u.concat(&u.invert()).unwrap(), 4, &limits).unwrap().is_one()
    });
    results.push(("magnus homomorphism and inverse", magnus));

    let identities = (0..cases).all(|_| {
        let [a, b, c] = [0; 3].map(|_| sample::word(&mut rng, &abc, 6));
        let (l1, r1) = witt_hall_b(&a, &b, &c).unwrap();
        let (l2, r2) = witt_hall_c(&a, &b, &c).unwrap();
        l1.freely_equal(&r1) && l2.freely_equal(&r2)
    });
    results.push(("witt-hall identities", identities));

    let dec = Decomposer::new(limits);
    let decomposition = (0..cases).all(|_| {
        let lens: Vec<usize> = (0..rand::Rng::gen_range(&mut rng, 1..=3)).map(|_| rand::Rng::gen_range(&mut rng, 2..=4)).collect();
        let trees: Vec<CommutatorTree> = lens.iter().map(|&l| sample::nontrivial_tree(&mut rng, &abc, l)).collect();
        let flat: Vec<Word> = trees.iter().map(|t| t.flatten()).collect();
        let w = Word::product(abc.clone(), flat.iter()).unwrap().reduce();
        let n = *lens.iter().min().unwrap();
        match dec.decompose(&w, n) {
            Ok(d) => d.factors.iter().all(|t| t.length() >= n),
            Err(_) => false,
        }
    });
    results.push(("decomposition soundness", decomposition));

    let witnesses = (0..cases).all(|_| {
        let len = rand::Rng::gen_range(&mut rng, 1..=5);
        let t = CommutatorTree::new(abc.clone(), sample::shape(&mut rng, 3, len));
        verify_witness(&witness_from_tree(&t), &limits).unwrap_or(false)
    });
    results.push(("tree witnesses", witnesses));

    for (name, ok) in &results {
        ctx.line(&format!("{} {name}", if *ok { "ok  " } else { "FAIL" }))?;
    }
    Ok(if results.iter().all(|(_, ok)| *ok) { 0 } else { 1 })
}
