//! Command-line front end. `run` parses arguments, writes the report and
//! returns the exit status: 0 done, 1 `--assert` failed, 2 usage or input
//! error, 3 a search cap was reached.

use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::error::Error;
use crate::factorbasis::{self, Limits};
use crate::factorization::{self, Caps};
use crate::incidence::{self, EmpiricalCaps, IncidenceMatrix, VerdictKind};
use crate::morphisms::{self, Morphism};
use crate::oracle::{self, SearchBounds};
use crate::text;
use crate::words::{show, Alphabet};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERT: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_CAPS: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "morphkit", version, about = "Decompose free semigroup endomorphisms")]
pub struct Cli {
    #[command(flatten)]
    pub global: Global,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Global {
    /// Print JSON instead of text.
    #[arg(long, global = true)]
    pub json: bool,
    /// Exit 1 unless the verdict equals this value (e.g. `irreducible`).
    #[arg(long, global = true, value_name = "VERDICT")]
    pub assert: Option<String>,
    /// Alphabet for parsing morphisms, e.g. `abc`.
    #[arg(long, global = true)]
    pub alphabet: Option<Alphabet>,
    /// Most factor bases kept by a search.
    #[arg(long, global = true, env = "MORPHKIT_MAX_BASES", default_value_t = 1_000_000)]
    pub max_bases: usize,
    /// Most morphisms enumerated from a matrix.
    #[arg(long, global = true, env = "MORPHKIT_MAX_ENUM", default_value_t = 100_000)]
    pub max_enum: usize,
}

/// Morphisms are written `a->ab; b->ba` (or as JSON); `@file` reads a file
/// and `-` reads standard input. Matrices are written `2 2; 2 2`.
#[derive(Subcommand, Debug)]
pub enum Command {
    /// Decide reducibility and print a split.
    Reduce {
        phi: String,
        /// Cross-check against exhaustive search.
        #[arg(long)]
        oracle: bool,
    },
    /// List factor bases.
    Bases {
        phi: String,
        /// Include the trivial bases.
        #[arg(long)]
        all: bool,
    },
    /// Derivation graph of the non-trivial bases.
    Graph {
        phi: String,
        /// Emit Graphviz DOT.
        #[arg(long)]
        dot: bool,
    },
    /// Is MU a factor of PHI, i.e. PHI = psi2 . MU . psi1?
    Factor { mu: String, phi: String },
    /// Is MU a left factor of PHI, i.e. PHI = MU . psi1?
    LeftFactor { mu: String, phi: String },
    /// Compose, outermost first: `compose F G` applies G then F.
    Compose {
        #[arg(required = true, num_args = 2..)]
        factors: Vec<String>,
    },
    /// Reverse every image.
    Reverse { phi: String },
    /// Equality up to automorphisms on both sides.
    Equivalent { phi: String, other: String },
    /// Do two morphisms commute?
    Commute { phi1: String, phi2: String },
    /// Uniqueness of factorisation into irreducibles.
    Unique {
        phi: String,
        /// Use the block-shape characterisation only.
        #[arg(long)]
        blockform: bool,
    },
    /// Incidence matrix of a morphism.
    Matrix { phi: String },
    /// Classify a matrix by the reducibility of the morphisms it represents.
    Classify {
        matrix: String,
        #[arg(long)]
        symbolic: bool,
        #[arg(long)]
        empirical: bool,
    },
    /// List the morphisms with a given incidence matrix.
    Enumerate {
        matrix: String,
        /// Only print the count.
        #[arg(long)]
        count: bool,
    },
    /// Cross-check the library over all binary morphisms up to a total length.
    Verify {
        /// Compare against exhaustive search.
        #[arg(long)]
        oracle: bool,
        #[arg(long, default_value_t = 8)]
        max_total: usize,
    },
}

struct Report {
    text: String,
    json: Value,
    verdict: Option<String>,
    capped: bool,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Report { text, json, verdict: None, capped: false }
    }

    fn verdict(mut self, v: impl Into<String>) -> Self {
        self.verdict = Some(v.into());
        self
    }

    fn capped(mut self, c: bool) -> Self {
        self.capped = c;
        self
    }
}

/// Failure with its exit status and message.
struct Failure(i32, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Truncated(_) | Error::BoundsInsufficient(_) => EXIT_CAPS,
            _ => EXIT_USAGE,
        };
        Failure(code, e.to_string())
    }
}

type Outcome<T> = std::result::Result<T, Failure>;

fn load(arg: &str) -> Outcome<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure(EXIT_USAGE, format!("stdin: {e}")))?;
        Ok(s)
    } else if let Some(path) = arg.strip_prefix('@') {
        std::fs::read_to_string(path).map_err(|e| Failure(EXIT_USAGE, format!("{path}: {e}")))
    } else {
        Ok(arg.to_string())
    }
}

fn morphism(arg: &str, g: &Global) -> Outcome<Morphism> {
    let src = load(arg)?;
    text::parse_morphism_any(&src, g.alphabet.as_ref()).map_err(|e| Failure(EXIT_USAGE, text::annotate(&src, &e)))
}

fn matrix(arg: &str) -> Outcome<IncidenceMatrix> {
    let src = load(arg)?;
    src.trim()
        .parse::<IncidenceMatrix>()
        .or_else(|e| match serde_json::from_str::<IncidenceMatrix>(&src) {
            Ok(m) => Ok(m),
            Err(_) => Err(e),
        })
        .map_err(|e| Failure(EXIT_USAGE, text::annotate(src.trim(), &e)))
}

fn limits(g: &Global) -> Limits {
    Limits { max_bases: g.max_bases, ..Limits::default() }
}

fn caps(g: &Global) -> Caps {
    Caps { limits: limits(g), ..Caps::default() }
}

fn yes_no(b: bool, yes: &str, no: &str) -> String {
    if b { yes } else { no }.to_string()
}

fn normalise(v: &str) -> String {
    v.chars().filter(|c| c.is_alphanumeric()).flat_map(char::to_lowercase).collect()
}

pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = if e.use_stderr() { write!(err, "{e}") } else { write!(out, "{e}") };
            return code;
        }
    };
    match execute(&cli) {
        Ok(report) => {
            let _ = if cli.global.json {
                writeln!(out, "{}", serde_json::to_string_pretty(&report.json).expect("reports serialise"))
            } else {
                write!(out, "{}", report.text)
            };
            if report.capped {
                let _ = writeln!(err, "search cap reached; the result may be incomplete");
                return EXIT_CAPS;
            }
            match (&cli.global.assert, &report.verdict) {
                (None, _) => EXIT_OK,
                (Some(_), None) => {
                    let _ = writeln!(err, "this subcommand has no verdict to assert");
                    EXIT_USAGE
                }
                (Some(want), Some(got)) if normalise(want) == normalise(got) => EXIT_OK,
                (Some(want), Some(got)) => {
                    let _ = writeln!(err, "assertion failed: expected {want}, got {got}");
                    EXIT_ASSERT
                }
            }
        }
        Err(Failure(code, msg)) => {
            let _ = writeln!(err, "error: {msg}");
            code
        }
    }
}

fn execute(cli: &Cli) -> Outcome<Report> {
    let g = &cli.global;
    match &cli.command {
        Command::Reduce { phi, oracle } => reduce(&morphism(phi, g)?, *oracle, g),
        Command::Bases { phi, all } => bases(&morphism(phi, g)?, *all, g),
        Command::Graph { phi, dot } => graph(&morphism(phi, g)?, *dot, g),
        Command::Factor { mu, phi } => factor(&morphism(mu, g)?, &morphism(phi, g)?, g),
        Command::LeftFactor { mu, phi } => left_factor(&morphism(mu, g)?, &morphism(phi, g)?),
        Command::Compose { factors } => {
            let fs = factors.iter().map(|f| morphism(f, g)).collect::<Outcome<Vec<_>>>()?;
            let phi = morphisms::compose_chain(&fs)?;
            Ok(Report::new(format!("{phi}\n"), json!({ "morphism": phi })))
        }
        Command::Reverse { phi } => {
            let r = morphism(phi, g)?.reversed();
            Ok(Report::new(format!("{r}\n"), json!({ "morphism": r })))
        }
        Command::Equivalent { phi, other } => {
            let (a, b) = (morphism(phi, g)?, morphism(other, g)?);
            let found = morphisms::is_equivalent(&a, &b)?;
            let text = match &found {
                Some((p1, p2)) => format!("equivalent\n  psi1: {p1}\n  psi2: {p2}\n"),
                None => "not equivalent\n".into(),
            };
            let json = json!({
                "equivalent": found.is_some(),
                "psi1": found.as_ref().map(|f| &f.0),
                "psi2": found.as_ref().map(|f| &f.1),
            });
            Ok(Report::new(text, json).verdict(yes_no(found.is_some(), "equivalent", "not-equivalent")))
        }
        Command::Commute { phi1, phi2 } => {
            let (a, b) = (morphism(phi1, g)?, morphism(phi2, g)?);
            let c = morphisms::commute(&a, &b)?;
            let split = morphisms::find_commuting_split(&a, &b);
            let mut text = yes_no(c, "commute\n", "do not commute\n");
            if let Some(s) = &split {
                text.push_str(&format!("  split letters: {}\n", show(s)));
            }
            let json = json!({ "commute": c, "split": split.as_ref().map(|s| show(s)) });
            Ok(Report::new(text, json).verdict(yes_no(c, "commute", "not-commute")))
        }
        Command::Unique { phi, blockform } => unique(&morphism(phi, g)?, *blockform, g),
        Command::Matrix { phi } => {
            let m = incidence::incidence(&morphism(phi, g)?)?;
            let text =
                m.rows().iter().map(|r| r.iter().map(|x| format!("{x:>4}")).collect::<String>() + "\n").collect();
            Ok(Report::new(text, json!({ "matrix": m, "text": m.to_string() })))
        }
        Command::Classify { matrix: m, symbolic, empirical } => classify(&matrix(m)?, *symbolic, *empirical, g),
        Command::Enumerate { matrix: m, count } => enumerate(&matrix(m)?, *count, g),
        Command::Verify { oracle, max_total } => verify(*oracle, *max_total, g),
    }
}

fn reduce(phi: &Morphism, with_oracle: bool, g: &Global) -> Outcome<Report> {
    if !phi.is_endomorphism() {
        let split = morphisms::cross_alphabet_decompose(phi)?;
        let text = match &split {
            Some((p1, p2)) => format!("reducible\n  psi1: {p1}\n  psi2: {p2}\n"),
            None => "irreducible\n".into(),
        };
        let json = json!({
            "reducible": split.is_some(),
            "psi1": split.as_ref().map(|s| &s.0),
            "psi2": split.as_ref().map(|s| &s.1),
        });
        return Ok(Report::new(text, json).verdict(yes_no(split.is_some(), "reducible", "irreducible")));
    }
    let r = factorbasis::is_reducible_with(phi, limits(g))?;
    let mut text = yes_no(r.reducible, "reducible\n", "irreducible\n");
    if r.unit {
        text.push_str("  (automorphism)\n");
    }
    if let Some(w) = &r.witness {
        text.push_str(&format!("  basis: {}\n  psi1: {}\n  psi2: {}\n", w.basis, w.psi1, w.psi2));
    }
    let mut json = serde_json::to_value(&r).expect("serialisable");
    if with_oracle {
        let o = oracle::oracle_is_reducible(phi, SearchBounds::covering(phi))?;
        text.push_str(&format!("  oracle: {}\n", yes_no(o, "reducible", "irreducible")));
        json["oracle"] = json!(o);
        if o != r.reducible {
            return Err(Failure(EXIT_ASSERT, format!("oracle disagrees on {phi}")));
        }
    }
    Ok(Report::new(text, json).verdict(yes_no(r.reducible, "reducible", "irreducible")))
}

fn bases(phi: &Morphism, all: bool, g: &Global) -> Outcome<Report> {
    let e = factorbasis::enumerate_factor_bases(phi, limits(g))?;
    let shown: Vec<_> = e.bases.iter().filter(|b| all || !b.trivial).collect();
    let mut text = String::new();
    for b in &shown {
        text.push_str(&format!("{}{}\n", b.basis, if b.trivial { "  (trivial)" } else { "" }));
    }
    text.push_str(&format!("{} basis(es)\n", shown.len()));
    let json = json!({ "bases": shown, "truncated": e.truncated });
    Ok(Report::new(text, json).capped(e.truncated))
}

fn graph(phi: &Morphism, dot: bool, g: &Global) -> Outcome<Report> {
    let gr = factorbasis::derivation_graph(phi, limits(g))?;
    let text = if dot {
        gr.to_dot()
    } else {
        let mut t = String::new();
        for (i, v) in gr.vertices.iter().enumerate() {
            t.push_str(&format!("v{i} {v}\n"));
        }
        for (a, b) in &gr.edges {
            t.push_str(&format!("v{a} -> v{b}\n"));
        }
        let sinks: Vec<String> = gr.sinks().iter().map(|s| s.to_string()).collect();
        t.push_str(&format!("maximally derived: {}\n", sinks.join(" ")));
        t
    };
    let mut json = gr.to_json();
    json["sinks"] = json!(gr.sinks());
    if dot {
        json["dot"] = json!(gr.to_dot());
    }
    Ok(Report::new(text, json).capped(gr.truncated))
}

fn factor(mu: &Morphism, phi: &Morphism, g: &Global) -> Outcome<Report> {
    let w = factorization::is_factor(mu, phi, caps(g))?;
    let text = match &w {
        Some(w) => format!(
            "factor\n  basis: {}\n  psi1: {}\n  psi2: {}\n",
            w.indexed_basis.iter().map(|v| show(v)).collect::<Vec<_>>().join(", "),
            w.psi1,
            w.psi2
        ),
        None => "not a factor\n".into(),
    };
    let json = json!({ "factor": w.is_some(), "witness": w });
    Ok(Report::new(text, json).verdict(yes_no(w.is_some(), "factor", "not-factor")))
}

fn left_factor(mu: &Morphism, phi: &Morphism) -> Outcome<Report> {
    let lf = factorization::is_left_factor(mu, phi)?;
    let text = match &lf {
        Some(l) => format!("left factor\n  psi1: {}\n  unique: {}\n", l.psi1, l.unique),
        None => "not a left factor\n".into(),
    };
    let json = json!({ "left_factor": lf.is_some(), "witness": lf });
    Ok(Report::new(text, json).verdict(yes_no(lf.is_some(), "left-factor", "not-left-factor")))
}

fn unique(phi: &Morphism, blockform: bool, g: &Global) -> Outcome<Report> {
    let r = if blockform {
        factorization::uniquely_reducible_blockform(phi, limits(g))?
    } else {
        factorization::uniqueness_report(phi, caps(g))?
    };
    let mut text = format!("{:?}\n", r.verdict);
    for reason in &r.reasons {
        text.push_str(&format!("  {}: {}\n", reason.tag, reason.detail));
    }
    if let Some(e) = &r.unary_exponents {
        text.push_str(&format!("  exponents: {e:?}\n"));
    }
    for c in &r.chains {
        text.push_str(&format!("  {c}\n"));
    }
    let mut json = serde_json::to_value(&r).expect("serialisable");
    if !blockform {
        // The block-shape characterisation counts maximal bases only, so it
        // can call unique what the chain analysis calls non-unique.
        let b = factorization::uniquely_reducible_blockform(phi, limits(g))?;
        if b.verdict != factorization::Verdict::Unknown {
            text.push_str(&format!("  blockform: {:?}\n", b.verdict));
            json["blockform"] = json!(b.verdict);
        }
    }
    Ok(Report::new(text, json)
        .verdict(format!("{:?}", r.verdict))
        .capped(r.truncated && r.verdict == factorization::Verdict::Unknown))
}

fn verdict_text(v: &incidence::MatrixVerdict, label: &str) -> String {
    let mut t = format!("{label}: {} ({})\n", v.kind, v.rule);
    for w in &v.witnesses {
        let kind = yes_no(w.reducible, "reducible", "irreducible");
        t.push_str(&format!("  {kind}: {}\n", w.morphism));
        if let (Some(p1), Some(p2)) = (&w.psi1, &w.psi2) {
            t.push_str(&format!("    psi1: {p1}\n    psi2: {p2}\n"));
        }
    }
    t
}

fn classify(m: &IncidenceMatrix, symbolic: bool, empirical: bool, g: &Global) -> Outcome<Report> {
    let symbolic = symbolic || !empirical;
    let s = symbolic.then(|| incidence::classify_symbolic(m));
    let caps = EmpiricalCaps { max_morphisms: g.max_enum, limits: limits(g) };
    let e = if empirical { Some(incidence::classify_empirical(m, caps)?) } else { None };
    let mut text = String::new();
    if let Some(s) = &s {
        text.push_str(&verdict_text(s, "symbolic"));
    }
    if let Some(e) = &e {
        text.push_str(&verdict_text(e, "empirical"));
    }
    let consistent = match (&s, &e) {
        (Some(s), Some(e)) => Some(incidence::consistent(s.kind, e.kind)),
        _ => None,
    };
    if consistent == Some(false) {
        text.push_str("inconsistent verdicts\n");
    }
    let json = json!({ "matrix": m, "symbolic": s, "empirical": e, "consistent": consistent });
    let verdict = s.as_ref().or(e.as_ref()).map(|v| v.kind.to_string()).unwrap_or_default();
    let capped = e.as_ref().is_some_and(|e| e.kind == VerdictKind::Unknown);
    let report = Report::new(text, json).verdict(verdict).capped(capped && s.is_none());
    if consistent == Some(false) {
        return Err(Failure(EXIT_ASSERT, format!("symbolic and empirical verdicts disagree on {m}")));
    }
    Ok(report)
}

fn enumerate(m: &IncidenceMatrix, count_only: bool, g: &Global) -> Outcome<Report> {
    let total = incidence::realization_count(m);
    if count_only {
        return Ok(Report::new(format!("{total}\n"), json!({ "count": total.to_string() })));
    }
    let e = incidence::enumerate_morphisms(m, g.max_enum);
    let mut text: String = e.morphisms.iter().map(|f| format!("{f}\n")).collect();
    text.push_str(&format!("{} of {total} morphism(s)\n", e.morphisms.len()));
    let json = json!({ "count": total.to_string(), "morphisms": e.morphisms, "truncated": e.truncated });
    Ok(Report::new(text, json).capped(e.truncated))
}

/// Parikh-positive binary endomorphisms with total image length at most `max_total`.
pub fn binary_corpus(max_total: usize) -> Vec<Morphism> {
    let words = |len: usize| -> Vec<String> {
        (0..1usize << len)
            .map(|bits| (0..len).map(|i| if bits >> (len - 1 - i) & 1 == 1 { 'b' } else { 'a' }).collect())
            .collect()
    };
    let mut out = Vec::new();
    for la in 1..max_total {
        for lb in 1..=max_total - la {
            for x in words(la) {
                for y in words(lb) {
                    let phi = Morphism::from_images(&[&x, &y]).expect("binary words");
                    if phi.is_parikh_positive_endo() {
                        out.push(phi);
                    }
                }
            }
        }
    }
    out
}

fn verify(with_oracle: bool, max_total: usize, g: &Global) -> Outcome<Report> {
    let corpus = binary_corpus(max_total);
    let mut disagreements = Vec::new();
    for phi in &corpus {
        let r = factorbasis::is_reducible_with(phi, limits(g))?;
        if let Some(w) = &r.witness {
            if morphisms::compose(&w.psi2, &w.psi1)? != *phi || w.psi1.is_automorphism() || w.psi2.is_automorphism() {
                disagreements.push(format!("{phi}: split does not recompose"));
            }
        }
        let rr = factorbasis::is_reducible_with(&phi.reversed(), limits(g))?;
        if rr.reducible != r.reducible {
            disagreements.push(format!("{phi}: verdict changes under reversal"));
        }
        if with_oracle {
            let bounds = SearchBounds::covering(phi);
            if oracle::oracle_is_reducible(phi, bounds)? != r.reducible {
                disagreements.push(format!("{phi}: oracle disagrees on reducibility"));
            }
            let mine: Vec<_> = factorbasis::enumerate_factor_bases(phi, limits(g))?
                .bases
                .into_iter()
                .map(|b| b.basis.canonical())
                .collect();
            let theirs: Vec<_> = oracle::oracle_factor_bases(phi, bounds)?.into_iter().map(|b| b.canonical()).collect();
            let (mut mine, mut theirs) = (mine, theirs);
            mine.sort();
            theirs.sort();
            if mine != theirs {
                disagreements.push(format!("{phi}: oracle disagrees on factor bases"));
            }
        }
    }
    let mut text = format!("{} morphisms checked, {} disagreement(s)\n", corpus.len(), disagreements.len());
    for d in &disagreements {
        text.push_str(&format!("  {d}\n"));
    }
    let json = json!({ "checked": corpus.len(), "oracle": with_oracle, "disagreements": disagreements });
    if !disagreements.is_empty() {
        return Err(Failure(EXIT_ASSERT, text));
    }
    Ok(Report::new(text, json).verdict("agree"))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn call(args: &[&str]) -> (i32, String, String) {
        let (mut out, mut err) = (Vec::new(), Vec::new());
        let code = run(std::iter::once("morphkit").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn reduce_and_assert() {
        let (code, out, _) = call(&["reduce", "a->a; b->babb"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.starts_with("irreducible"));
        assert_eq!(call(&["reduce", "a->a; b->aabb", "--assert", "irreducible"]).0, EXIT_ASSERT);
        assert_eq!(call(&["reduce", "a->a; b->aabb", "--assert", "reducible"]).0, EXIT_OK);
    }

    #[test]
    fn parse_errors_exit_two() {
        let (code, _, err) = call(&["reduce", "a->ab; b=ba"]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains('^'));
        assert_eq!(call(&["classify", "1 x; 2 2"]).0, EXIT_USAGE);
        assert_eq!(call(&["nonsense"]).0, EXIT_USAGE);
    }

    #[test]
    fn caps_exit_three() {
        assert_eq!(call(&["enumerate", "2 2; 2 2", "--max-enum", "5"]).0, EXIT_CAPS);
    }

    #[test]
    fn corpus_size() {
        assert!(binary_corpus(8).len() > 1000);
        assert!(binary_corpus(2).iter().all(|f| f.total_length() == 2));
    }
}
