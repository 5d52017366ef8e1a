//! `ildtt`: batch checker for `.ildtt` modules.
//!
//! Exit status: 0 on success, 1 when any input fails, 2 on a usage error.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use ildtt_core::checker::{check_module, dual_context, infer, DeclReport, ModuleReport};
use ildtt_core::corpus::{coverage, run_dir};
use ildtt_core::equality::{normalize, EqualityMode, Verdict};
use ildtt_core::model::{Config, Gf2, Interp, PointedSets, SmcBackend};
use ildtt_core::surface::{parse_module, print_term, print_ty, Decl, DeclKind, SourceModule};
use ildtt_core::syntax::{Term, Ty};

#[derive(Parser, Debug)]
#[command(name = "ildtt", version, about = "Type checker, normaliser and model evaluator for linear dependent type theory")]
struct Cli {
    #[command(flatten)]
    opts: Opts,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Opts {
    /// Compare negative types η-long (the default).
    #[arg(long, global = true, overrides_with = "no_eta")]
    eta: bool,
    /// Compare negative types without η.
    #[arg(long, global = true)]
    no_eta: bool,
    /// Try positive uniqueness rules, with an optional fuel budget
    /// (default: $ILDTT_FUEL, else 8).
    #[arg(long, global = true, value_name = "FUEL", num_args = 0..=1, require_equals = true)]
    ext: Option<Option<usize>>,
    /// Output style.
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Human-readable.
    Text,
    /// One tab-separated line per result: file, name, keyword, status, detail.
    Lines,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Backend {
    /// Families of finite pointed sets.
    Pset,
    /// Families of finite-dimensional GF(2) vector spaces.
    Gf2,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Type-check modules; succeeds iff every declaration does.
    Check {
        #[arg(required = true)]
        paths: Vec<PathBuf>,
    },
    /// Print the canonical form of a definition.
    Norm {
        path: PathBuf,
        #[arg(long = "def", value_name = "NAME")]
        def: String,
    },
    /// Decide whether two terms are judgementally equal; prints true, false or undecided.
    Eq {
        path: PathBuf,
        #[arg(long)]
        left: String,
        #[arg(long)]
        right: String,
        /// Binders the terms live in, e.g. `(!x : A) (y : B(x))`.
        #[arg(long, default_value = "")]
        ctx: String,
        /// The type to compare at; inferred from `--left` when omitted.
        #[arg(long = "ty")]
        ty: Option<String>,
    },
    /// Interpret a module in a families model and cross-check its equalities.
    Eval {
        path: PathBuf,
        #[arg(long, value_enum)]
        backend: Backend,
        /// Model configuration file.
        #[arg(long, value_name = "FILE")]
        model: PathBuf,
    },
    /// Run a corpus directory against its manifest.
    Corpus {
        #[arg(default_value = "corpus")]
        root: PathBuf,
        /// Also print the rule coverage table.
        #[arg(long)]
        coverage: bool,
    },
}

/// How a command ended, short of a usage error.
enum Failure {
    /// Some input did not check / compare / evaluate as required.
    Failed,
    /// The invocation itself is wrong.
    Usage(String),
}

type Run = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mode = mode(&cli.opts);
    let fmt = cli.opts.format;
    let out = match cli.command {
        Command::Check { paths } => check(&paths, mode, fmt),
        Command::Norm { path, def } => norm(&path, &def, mode, fmt),
        Command::Eq {
            path,
            left,
            right,
            ctx,
            ty,
        } => eq(&path, &left, &right, &ctx, ty.as_deref(), mode, fmt),
        Command::Eval { path, backend, model } => eval(&path, backend, &model, mode, fmt),
        Command::Corpus { root, coverage } => corpus(&root, coverage, fmt),
    };
    match out {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Failed) => ExitCode::from(1),
        Err(Failure::Usage(m)) => {
            eprintln!("error: {}", m);
            ExitCode::from(2)
        }
    }
}

fn mode(o: &Opts) -> EqualityMode {
    let mut m = match o.ext {
        Some(_) => EqualityMode::extensional(),
        None => EqualityMode::default(),
    };
    if let Some(Some(fuel)) = o.ext {
        m.fuel = fuel;
    }
    m.eta_negative = !o.no_eta || o.eta;
    m
}

fn read(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| {
        eprintln!("{}: {}", path.display(), e);
        Failure::Failed
    })
}

fn parse(path: &Path, src: &str) -> Result<SourceModule, Failure> {
    parse_module(src).map_err(|ds| {
        for d in ds {
            eprintln!("{}:{}", path.display(), d);
        }
        Failure::Failed
    })
}

fn load(path: &Path, mode: EqualityMode) -> Result<(SourceModule, ModuleReport), Failure> {
    let m = parse(path, &read(path)?)?;
    let r = check_module(&m, mode);
    Ok((m, r))
}

fn status(d: &DeclReport) -> String {
    if d.failed() {
        return "error".into();
    }
    match d.verdict() {
        Some(v) => format!("eq-{}", v),
        None => "ok".into(),
    }
}

// ---- check ---------------------------------------------------------------

/// The report for one file: what goes to stdout, what to stderr, and whether
/// it passed.
fn check_one(path: &Path, mode: EqualityMode, fmt: Format) -> (String, String, bool) {
    let (mut out, mut err) = (String::new(), String::new());
    let src = match std::fs::read_to_string(path) {
        Ok(s) => s,
        Err(e) => return (out, format!("{}: {}\n", path.display(), e), false),
    };
    let m = match parse_module(&src) {
        Ok(m) => m,
        Err(ds) => {
            for d in ds {
                let _ = writeln!(err, "{}:{}", path.display(), d);
            }
            return (out, err, false);
        }
    };
    let r = check_module(&m, mode);
    for d in &r.decls {
        for diag in &d.diagnostics {
            let _ = writeln!(err, "{}:{}", path.display(), diag);
        }
        if fmt == Format::Lines {
            let detail = d.diagnostics.first().and_then(|x| x.rule.clone()).unwrap_or_default();
            let _ = writeln!(out, "{}\t{}\t{}\t{}\t{}", path.display(), d.name, d.keyword, status(d), detail);
        }
    }
    let ok = r.ok();
    if fmt == Format::Text {
        let failed = r.decls.iter().filter(|d| d.failed()).count();
        let _ = writeln!(
            out,
            "{}: {} declarations, {}",
            path.display(),
            r.decls.len(),
            if ok { "all ok".to_string() } else { format!("{} failed", failed) }
        );
    }
    (out, err, ok)
}

fn check(paths: &[PathBuf], mode: EqualityMode, fmt: Format) -> Run {
    // files are independent; report in argument order
    let results: Vec<_> = std::thread::scope(|s| {
        let hs: Vec<_> = paths.iter().map(|p| s.spawn(move || check_one(p, mode, fmt))).collect();
        hs.into_iter().map(|h| h.join().expect("checker thread panicked")).collect()
    });
    let mut ok = true;
    for (out, err, good) in results {
        print!("{}", out);
        eprint!("{}", err);
        ok &= good;
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

// ---- norm ----------------------------------------------------------------

fn norm(path: &Path, name: &str, mode: EqualityMode, fmt: Format) -> Run {
    let (m, r) = load(path, mode)?;
    let Some(Decl {
        kind: DeclKind::Def { ty, body, .. },
        ..
    }) = m.find(name)
    else {
        return Err(Failure::Usage(format!("no definition `{}` in {}", name, path.display())));
    };
    let d = r.find(name).unwrap();
    if d.failed() {
        for diag in &d.diagnostics {
            eprintln!("{}:{}", path.display(), diag);
        }
        return Err(Failure::Failed);
    }
    let nf = normalize(&r.signature, &d.ctx, body, ty, mode);
    match fmt {
        Format::Text => println!("{}", print_term(&nf.term)),
        Format::Lines => println!(
            "{}\t{}\tnorm\t{}\t{}",
            path.display(),
            name,
            if nf.ceiling_hit { "ceiling" } else { "ok" },
            print_term(&nf.term)
        ),
    }
    if nf.ceiling_hit {
        eprintln!("{}: normalisation of `{}` hit the step ceiling", path.display(), name);
        return Err(Failure::Failed);
    }
    Ok(())
}

// ---- eq ------------------------------------------------------------------

const PROBE: &str = "__cli_probe";
const QUERY: &str = "__cli_eq";

fn eq(path: &Path, left: &str, right: &str, ctx: &str, ty: Option<&str>, mode: EqualityMode, fmt: Format) -> Run {
    let src = read(path)?;
    parse(path, &src)?;
    let ty = match ty {
        Some(t) => t.to_string(),
        None => infer_type(path, &src, ctx, left, mode)?,
    };
    let full = format!("{}\neq #{} {} |- {} == {} : {}\n", src, QUERY, ctx, left, right, ty);
    let m = parse_module(&full).map_err(|ds| Failure::Usage(ds.iter().map(|d| d.message.clone()).collect::<Vec<_>>().join("; ")))?;
    let r = check_module(&m, mode);
    let d = r.find(QUERY).unwrap();
    if d.verdict().is_none() {
        for diag in &d.diagnostics {
            eprintln!("<query>: {}", diag);
        }
        return Err(Failure::Failed);
    }
    let v = d.verdict().unwrap();
    match fmt {
        Format::Text => println!("{}", v),
        Format::Lines => println!("{}\t{}\teq\t{}\t{}", path.display(), QUERY, v, ty),
    }
    if v == Verdict::True {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

/// Synthesise the type of `left` in `ctx`, and print it back as source.
fn infer_type(path: &Path, src: &str, ctx: &str, left: &str, mode: EqualityMode) -> Result<String, Failure> {
    let probe = format!("{}\ncheck #{} {} |- {} : I\n", src, PROBE, ctx, left);
    let m = parse_module(&probe).map_err(|ds| Failure::Usage(ds.iter().map(|d| d.message.clone()).collect::<Vec<_>>().join("; ")))?;
    let Some(DeclKind::Check { ctx, term, .. }) = m.find(PROBE).map(|d| &d.kind) else { unreachable!() };
    let sig = check_module(&parse(path, src)?, mode).signature;
    match infer(&sig, &dual_context(ctx), term) {
        Ok((d, _)) => Ok(print_ty(&d.ty)),
        Err(e) => Err(Failure::Usage(format!("cannot infer the type of `{}` ({}); pass --ty", left, e.message))),
    }
}

// ---- eval ----------------------------------------------------------------

fn eval(path: &Path, backend: Backend, model: &Path, mode: EqualityMode, fmt: Format) -> Run {
    let cfg_src = std::fs::read_to_string(model).map_err(|e| Failure::Usage(format!("{}: {}", model.display(), e)))?;
    let cfg = Config::parse(&cfg_src).map_err(|e| Failure::Usage(format!("{}: {}", model.display(), e)))?;
    let (m, r) = load(path, mode)?;
    match backend {
        Backend::Pset => eval_with(&PointedSets, path, &m, &r, &cfg, fmt),
        Backend::Gf2 => eval_with(&Gf2, path, &m, &r, &cfg, fmt),
    }
}

/// A point of an intuitionistic context, as indices of global elements.
fn show_point<B: SmcBackend>(it: &Interp<B>, int: &[(String, Ty)], p: &ildtt_core::model::Point<B::Elem>) -> String {
    let parts: Vec<String> = p
        .iter()
        .enumerate()
        .map(|(k, (x, e))| match it.interp_type(&int[..k], &p[..k].to_vec(), &int[k].1) {
            Ok(o) => format!("{}={}", x, it.backend.point_index(&o, e)),
            Err(_) => format!("{}={:?}", x, e),
        })
        .collect();
    format!("[{}]", parts.join(", "))
}

fn eval_with<B: SmcBackend>(b: &B, path: &Path, m: &SourceModule, r: &ModuleReport, cfg: &Config, fmt: Format) -> Run {
    let it = Interp::new(b, &r.signature, cfg);
    let unit = if b.name() == "gf2" { "dim" } else { "size" };
    let mut ok = true;
    let emit = |name: &str, kw: &str, status: &str, detail: String| match fmt {
        Format::Text => println!("{} {}: {}{}", kw, name, status, if detail.is_empty() { String::new() } else { format!("  {}", detail) }),
        Format::Lines => println!("{}\t{}\t{}\t{}\t{}", path.display(), name, kw, status, detail),
    };
    for (decl, d) in m.decls.iter().zip(&r.decls) {
        if d.failed() {
            emit(&d.name, d.keyword, "skipped", "does not check".into());
            ok = false;
            continue;
        }
        match &decl.kind {
            DeclKind::Type { params } => {
                let int: Vec<(String, Ty)> = params.iter().map(|p| (p.name.clone(), p.ty.clone())).collect();
                let args: Vec<Term> = params.iter().map(|p| Term::free(p.name.as_str())).collect();
                let ty = Ty::Base(decl.name.clone(), args);
                let bang = Ty::Bang(Box::new(ty.clone()));
                let pts = match it.interp_ctx(&int) {
                    Ok(p) => p,
                    Err(e) => {
                        emit(&d.name, "type", "error", e.to_string());
                        ok = false;
                        continue;
                    }
                };
                for p in pts {
                    let size = |t: &Ty| it.interp_type(&int, &p, t).ok().and_then(|o| b.size(&o));
                    let show = |n: Option<u128>| n.map_or("?".to_string(), |n| n.to_string());
                    emit(
                        &d.name,
                        "type",
                        "ok",
                        format!("at {}: {} {} = {}, {} !{} = {}", show_point(&it, &int, &p), unit, decl.name, show(size(&ty)), unit, decl.name, show(size(&bang))),
                    );
                }
            }
            DeclKind::Const { .. } => {}
            DeclKind::Def { ty, body: t, .. } | DeclKind::Check { term: t, ty, .. } => match it.denote(&d.ctx, t, ty) {
                Ok(den) => {
                    for (p, f) in &den.points {
                        emit(
                            &d.name,
                            d.keyword,
                            "ok",
                            format!(
                                "at {}: {} {} -> {}, images {:?}",
                                show_point(&it, &d.ctx.int, p),
                                unit,
                                b.size(&f.dom).map_or("?".into(), |n| n.to_string()),
                                b.size(&f.cod).map_or("?".into(), |n| n.to_string()),
                                f.images
                            ),
                        );
                    }
                }
                Err(e) => {
                    emit(&d.name, d.keyword, "error", e.to_string());
                    ok = false;
                }
            },
            DeclKind::Eq { left, right, ty, .. } => {
                let syntactic = d.verdict().unwrap();
                match it.denot_equal(&d.ctx, left, right, ty) {
                    Ok(sem) => {
                        // identified terms must denote the same thing
                        let sound = syntactic != Verdict::True || sem;
                        ok &= sound;
                        emit(
                            &d.name,
                            "eq",
                            if sound { "ok" } else { "unsound" },
                            format!("checker {}, model {}", syntactic, if sem { "equal" } else { "different" }),
                        );
                    }
                    Err(e) => {
                        emit(&d.name, "eq", "error", e.to_string());
                        ok = false;
                    }
                }
            }
            DeclKind::Iso {
                a,
                b: bt,
                fwd_var,
                fwd,
                bwd_var,
                bwd,
                ..
            } => {
                let syntactic = d.verdict().unwrap();
                match it.check_iso(&d.ctx.int, a, bt, fwd_var, fwd, bwd_var, bwd) {
                    Ok(sem) => {
                        let sound = syntactic != Verdict::True || sem;
                        ok &= sound;
                        emit(
                            &d.name,
                            "iso",
                            if sound { "ok" } else { "unsound" },
                            format!("checker {}, model {}", syntactic, if sem { "inverse" } else { "not inverse" }),
                        );
                    }
                    Err(e) => {
                        emit(&d.name, "iso", "error", e.to_string());
                        ok = false;
                    }
                }
            }
        }
    }
    if ok {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}

// ---- corpus --------------------------------------------------------------

fn corpus(root: &Path, show_coverage: bool, fmt: Format) -> Run {
    let report = run_dir(root).map_err(|e| {
        eprintln!("{}", e);
        Failure::Failed
    })?;
    for o in &report.outcomes {
        let e = &o.entry;
        match fmt {
            Format::Lines => println!(
                "{}\t{}\t{}\t{}\t{}",
                e.file,
                e.name,
                e.expect,
                if o.pass { "pass" } else { "FAIL" },
                o.observed
            ),
            Format::Text if !o.pass => println!("FAIL {}#{}: expected {}, got {}", e.file, e.name, e.expect, o.observed),
            Format::Text => {}
        }
    }
    for u in &report.unlisted {
        eprintln!("not in manifest: {}", u);
    }
    let passed = report.outcomes.iter().filter(|o| o.pass).count();
    let cov = coverage(&report);
    if fmt == Format::Text {
        println!("{}/{} corpus entries as expected", passed, report.outcomes.len());
        let missing = cov.missing();
        if missing.is_empty() {
            println!("rule coverage complete ({} rules)", cov.rows.len());
        } else {
            println!("rule coverage incomplete: {:?}", missing.iter().map(|m| m.rule.name).collect::<Vec<_>>());
        }
    }
    if show_coverage {
        println!("{}", cov.table());
    }
    if report.ok() && cov.complete() {
        Ok(())
    } else {
        Err(Failure::Failed)
    }
}
