//! The example corpus: `.ildtt` files under one directory and a manifest
//! stating what must happen to every declaration.
//!
//! Manifest lines read `file name verdict mode [rule]`, whitespace separated,
//! with `#` comments. Verdicts are `ok`, `type-error`, `eq-true`, `eq-false`
//! and `undecided-forbidden` (any decided answer); modes are `default` and
//! `ext`. For `type-error` the rule is the one the checker must blame; for
//! `eq-false` it names the rule the near miss imitates.

mod coverage;
mod oracle;

pub use coverage::{coverage, Coverage, CoverageRow, RuleInfo, RULES};
pub use oracle::{denotational_check, oracle_configs, OracleRow};

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::path::{Path, PathBuf};

use crate::checker::{check_module, DeclOutcome, DeclReport, ModuleReport};
use crate::diag::{Diagnostic, Severity};
use crate::equality::{EqualityMode, Verdict};
use crate::surface::{parse_module, SourceModule};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expect {
    Ok,
    TypeError,
    EqTrue,
    EqFalse,
    UndecidedForbidden,
}

impl Expect {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "ok" => Expect::Ok,
            "type-error" => Expect::TypeError,
            "eq-true" => Expect::EqTrue,
            "eq-false" => Expect::EqFalse,
            "undecided-forbidden" => Expect::UndecidedForbidden,
            _ => return None,
        })
    }
}

impl fmt::Display for Expect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Expect::Ok => "ok",
            Expect::TypeError => "type-error",
            Expect::EqTrue => "eq-true",
            Expect::EqFalse => "eq-false",
            Expect::UndecidedForbidden => "undecided-forbidden",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum ModeTag {
    Default,
    Ext,
}

impl ModeTag {
    pub fn mode(self) -> EqualityMode {
        match self {
            ModeTag::Default => EqualityMode::default(),
            ModeTag::Ext => EqualityMode::extensional(),
        }
    }
}

impl fmt::Display for ModeTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ModeTag::Default => "default",
            ModeTag::Ext => "ext",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Entry {
    pub file: String,
    pub name: String,
    pub expect: Expect,
    pub mode: ModeTag,
    pub rule: Option<String>,
    pub line: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Manifest {
    pub entries: Vec<Entry>,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("manifest line {line}: {message}")]
    Manifest { line: usize, message: String },
    #[error("{file}: {}", .diags.iter().map(|d| d.to_string()).collect::<Vec<_>>().join("; "))]
    Parse { file: String, diags: Vec<Diagnostic> },
}

impl Manifest {
    pub fn parse(src: &str) -> Result<Manifest, CorpusError> {
        let mut entries = Vec::new();
        for (i, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let bad = |m: String| CorpusError::Manifest { line: i + 1, message: m };
            let f: Vec<&str> = line.split_whitespace().collect();
            if !(4..=5).contains(&f.len()) {
                return Err(bad(format!("expected 4 or 5 fields, found {}", f.len())));
            }
            let expect = Expect::parse(f[2]).ok_or_else(|| bad(format!("unknown verdict `{}`", f[2])))?;
            let mode = match f[3] {
                "default" => ModeTag::Default,
                "ext" => ModeTag::Ext,
                m => return Err(bad(format!("unknown mode `{}`", m))),
            };
            entries.push(Entry {
                file: f[0].to_string(),
                name: f[1].to_string(),
                expect,
                mode,
                rule: f.get(4).map(|s| s.to_string()),
                line: i + 1,
            });
        }
        Ok(Manifest { entries })
    }

    pub fn load(path: &Path) -> Result<Manifest, CorpusError> {
        let src = std::fs::read_to_string(path).map_err(|source| CorpusError::Io {
            path: path.to_path_buf(),
            source,
        })?;
        Self::parse(&src)
    }
}

/// One corpus file, checked in every mode its entries ask for.
#[derive(Clone, Debug)]
pub struct Loaded {
    pub file: String,
    pub module: SourceModule,
    pub reports: BTreeMap<ModeTag, ModuleReport>,
}

impl Loaded {
    pub fn decl(&self, mode: ModeTag, name: &str) -> Option<&DeclReport> {
        self.reports.get(&mode)?.find(name)
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub entry: Entry,
    pub pass: bool,
    pub observed: String,
}

#[derive(Clone, Debug, Default)]
pub struct CorpusReport {
    pub files: Vec<Loaded>,
    pub outcomes: Vec<Outcome>,
    /// Declarations (as `file#name`) the manifest does not mention.
    pub unlisted: Vec<String>,
}

impl CorpusReport {
    pub fn ok(&self) -> bool {
        self.unlisted.is_empty() && self.outcomes.iter().all(|o| o.pass)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Outcome> {
        self.outcomes.iter().filter(|o| !o.pass)
    }

    pub fn file(&self, name: &str) -> Option<&Loaded> {
        self.files.iter().find(|f| f.file == name)
    }

    /// The checked declaration behind a manifest entry.
    pub fn decl(&self, e: &Entry) -> Option<&DeclReport> {
        self.file(&e.file)?.decl(e.mode, &e.name)
    }
}

/// Every `.ildtt` file below `root`, as sorted `/`-separated relative paths.
pub fn corpus_files(root: &Path) -> Result<Vec<String>, CorpusError> {
    fn walk(dir: &Path, root: &Path, out: &mut Vec<String>) -> Result<(), CorpusError> {
        let io = |source| CorpusError::Io {
            path: dir.to_path_buf(),
            source,
        };
        for e in std::fs::read_dir(dir).map_err(io)? {
            let p = e.map_err(io)?.path();
            if p.is_dir() {
                walk(&p, root, out)?;
            } else if p.extension().is_some_and(|x| x == "ildtt") {
                let rel = p.strip_prefix(root).unwrap_or(&p);
                out.push(rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/"));
            }
        }
        Ok(())
    }
    let mut out = Vec::new();
    walk(root, root, &mut out)?;
    out.sort();
    Ok(out)
}

fn first_error(d: &DeclReport) -> Option<&Diagnostic> {
    d.diagnostics.iter().find(|x| x.severity == Severity::Error)
}

fn judge(e: &Entry, d: &DeclReport) -> (bool, String) {
    let typed = !matches!(d.outcome, DeclOutcome::Failed);
    let verdict = d.verdict();
    match e.expect {
        Expect::Ok => (typed && !d.failed(), if typed { "ok".into() } else { describe_error(d) }),
        Expect::TypeError => match first_error(d) {
            Some(err) if !typed => {
                let rule = err.rule.clone().unwrap_or_default();
                let pass = e.rule.as_ref().is_none_or(|r| *r == rule);
                (pass, format!("type-error {}", rule))
            }
            _ => (false, observed_verdict(typed, verdict)),
        },
        Expect::EqTrue => (verdict == Some(Verdict::True), observed_verdict(typed, verdict)),
        Expect::EqFalse => (verdict == Some(Verdict::False), observed_verdict(typed, verdict)),
        Expect::UndecidedForbidden => (
            typed && verdict.is_some() && verdict != Some(Verdict::Undecided),
            observed_verdict(typed, verdict),
        ),
    }
}

fn describe_error(d: &DeclReport) -> String {
    match first_error(d) {
        Some(e) => format!("type-error {}", e.rule.clone().unwrap_or_default()),
        None => "error".into(),
    }
}

fn observed_verdict(typed: bool, v: Option<Verdict>) -> String {
    match (typed, v) {
        (false, _) => "type-error".into(),
        (true, Some(v)) => format!("eq-{}", v),
        (true, None) => "ok".into(),
    }
}

/// Check every file under `root` against the manifest.
pub fn run_corpus(root: &Path, manifest: &Manifest) -> Result<CorpusReport, CorpusError> {
    let mut modes: BTreeMap<&str, BTreeSet<ModeTag>> = BTreeMap::new();
    for e in &manifest.entries {
        modes.entry(e.file.as_str()).or_default().insert(e.mode);
    }
    let mut report = CorpusReport::default();
    for file in corpus_files(root)? {
        let path = root.join(&file);
        let src = std::fs::read_to_string(&path).map_err(|source| CorpusError::Io { path, source })?;
        let module = parse_module(&src).map_err(|diags| CorpusError::Parse {
            file: file.clone(),
            diags,
        })?;
        if !modes.contains_key(file.as_str()) {
            report.unlisted.push(file.clone());
        }
        let mut reports = BTreeMap::new();
        let wanted = modes.get(file.as_str()).cloned().unwrap_or_default();
        for m in wanted.iter().copied().chain([ModeTag::Default]) {
            reports.entry(m).or_insert_with(|| check_module(&module, m.mode()));
        }
        let listed: BTreeSet<&str> = manifest
            .entries
            .iter()
            .filter(|e| e.file == file)
            .map(|e| e.name.as_str())
            .collect();
        for d in &module.decls {
            if !matches!(d.kind.keyword(), "type" | "const") && !listed.contains(d.name.as_str()) {
                report.unlisted.push(format!("{}#{}", file, d.name));
            }
        }
        report.files.push(Loaded { file, module, reports });
    }
    for e in &manifest.entries {
        let (pass, observed) = match report.file(&e.file).and_then(|f| f.decl(e.mode, &e.name)) {
            Some(d) => judge(e, d),
            None => (false, "missing".into()),
        };
        report.outcomes.push(Outcome {
            entry: e.clone(),
            pass,
            observed,
        });
    }
    Ok(report)
}

/// `run_corpus` with `root/manifest.txt`.
pub fn run_dir(root: &Path) -> Result<CorpusReport, CorpusError> {
    run_corpus(root, &Manifest::load(&root.join("manifest.txt"))?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_lines() {
        let m = Manifest::parse("# header\n\na.ildtt f ok default\nb.ildtt g type-error default Lin-Var # why\n").unwrap();
        assert_eq!(m.entries.len(), 2);
        assert_eq!(m.entries[1].rule.as_deref(), Some("Lin-Var"));
        assert_eq!(m.entries[1].line, 4);
        assert!(Manifest::parse("a.ildtt f maybe default").is_err());
        assert!(Manifest::parse("a.ildtt f ok sometimes").is_err());
        assert!(Manifest::parse("a.ildtt f").is_err());
    }

    #[test]
    fn runs_a_small_directory() {
        let dir = tempdir();
        std::fs::write(
            dir.join("m.ildtt"),
            "type A\ncheck #id (x : A) |- x : A\ncheck #dup (x : A) |- x (x) x : A (x) A\neq #beta (a : A) |- (\\x:A. x) a == a : A\n",
        )
        .unwrap();
        let manifest = Manifest::parse(
            "m.ildtt id ok default\nm.ildtt dup type-error default Lin-Var\nm.ildtt beta eq-true default\n",
        )
        .unwrap();
        let r = run_corpus(&dir, &manifest).unwrap();
        assert!(r.ok(), "{:?}", r.failures().collect::<Vec<_>>());
        let wrong = Manifest::parse("m.ildtt id type-error default\nm.ildtt beta eq-false default\n").unwrap();
        let r = run_corpus(&dir, &wrong).unwrap();
        assert_eq!(r.failures().count(), 2);
        assert_eq!(r.unlisted, vec!["m.ildtt#dup".to_string()]);
        std::fs::remove_dir_all(&dir).ok();
    }

    fn tempdir() -> PathBuf {
        let d = std::env::temp_dir().join(format!("ildtt-corpus-{}", std::process::id()));
        std::fs::create_dir_all(&d).unwrap();
        d
    }
}
