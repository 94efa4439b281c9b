//! Report bodies and their Markdown, JSON and CSV renderings.

use std::fmt::Write as _;

use clap::ValueEnum;
use serde::Serialize;

use crate::commuting::{MaxTable, NamedSet};
use crate::nilradical::UVector;
use crate::roots::{Permutation, RootSet};
use crate::solver::{Classification, DichotomyReport, FiberProblem, LtLemmaReport, SolutionSet};
use crate::subspace::EchelonSubspace;

pub const SCHEMA: &str = "submax-lie/1";

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Md,
    Json,
    Csv,
}

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: &'static str,
    command: &'a str,
    #[serde(flatten)]
    body: &'a T,
}

/// Pretty JSON with the schema tag and command name in front.
pub fn to_json<T: Serialize>(command: &str, body: &T) -> String {
    let mut s = serde_json::to_string_pretty(&Envelope { schema: SCHEMA, command, body }).expect("report serializes");
    s.push('\n');
    s
}

/// Space-separated roots, safe inside CSV and table cells.
fn roots_cell(set: &RootSet) -> String {
    set.iter().map(|r| r.to_string()).collect::<Vec<_>>().join(" ")
}

fn vector_cell(v: &UVector) -> String {
    let rank = v.field().rank();
    let terms: Vec<String> = v
        .coeffs()
        .iter()
        .enumerate()
        .filter(|(_, &c)| c != 0)
        .map(|(k, &c)| if c == 1 { format!("x{}", rank.root_at(k)) } else { format!("{c}x{}", rank.root_at(k)) })
        .collect();
    if terms.is_empty() {
        "0".to_string()
    } else {
        terms.join(" + ")
    }
}

fn basis_lines(out: &mut String, e: &EchelonSubspace) {
    for v in e.basis() {
        let _ = writeln!(out, "  - {}", vector_cell(v));
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct RankReport {
    pub n: usize,
    pub rk: usize,
    pub submax: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub brute_force: Option<usize>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
}

pub fn render_rank(r: &RankReport, format: Format) -> String {
    match format {
        Format::Json => to_json("rank", r),
        Format::Md => match (r.brute_force, r.matches) {
            (Some(b), Some(m)) => format!("rk={} submax={} brute_force={b} match={m}\n", r.rk, r.submax),
            _ => format!("rk={} submax={}\n", r.rk, r.submax),
        },
        Format::Csv => {
            let mut s = String::from("n,rk,submax,brute_force,match\n");
            let opt = |x: Option<String>| x.unwrap_or_default();
            let _ = writeln!(
                s,
                "{},{},{},{},{}",
                r.n,
                r.rk,
                r.submax,
                opt(r.brute_force.map(|b| b.to_string())),
                opt(r.matches.map(|m| m.to_string()))
            );
            s
        }
    }
}

pub fn render_table(t: &MaxTable, format: Format) -> String {
    let opt_bool = |b: Option<bool>| b.map_or("n/a".to_string(), |b| b.to_string());
    match format {
        Format::Json => to_json("tables", t),
        Format::Md => {
            let mut s = String::new();
            let _ = writeln!(s, "| type | level | order | maximal subsets | computed | match |");
            let _ = writeln!(s, "|---|---|---|---|---|---|");
            let tags: Vec<String> = t.predicted.iter().map(|e| e.tag.to_string()).collect();
            let computed = t.computed.as_ref().map_or("refused".to_string(), |c| c.len().to_string());
            let _ = writeln!(
                s,
                "| {} | {} | {} | {} | {} | {} |",
                t.lie_type,
                t.level,
                t.order,
                tags.join(", "),
                computed,
                opt_bool(t.matches)
            );
            s.push('\n');
            for e in &t.predicted {
                let _ = writeln!(s, "- {}: {}", e.tag, e.roots);
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("type,level,order,tag,roots,computed\n");
            for e in &t.predicted {
                let found = t.computed.as_ref().map(|c| c.contains(&e.roots));
                let _ = writeln!(s, "{},{},{},{},{},{}", t.lie_type, t.level, t.order, e.tag, roots_cell(&e.roots), opt_bool(found));
            }
            s
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct EnumerationReport {
    pub n: usize,
    pub r: usize,
    pub maximal_only: bool,
    pub count: usize,
    pub sets: Vec<RootSet>,
}

pub fn render_enumeration(e: &EnumerationReport, format: Format) -> String {
    match format {
        Format::Json => to_json("enumerate", e),
        Format::Md => {
            let kind = if e.maximal_only { "maximal commuting" } else { "commuting" };
            let mut s = format!("{} {kind} sets of size {} in A{}\n\n", e.count, e.r, e.n);
            for set in &e.sets {
                let _ = writeln!(s, "- {set}");
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("index,size,roots\n");
            for (k, set) in e.sets.iter().enumerate() {
                let _ = writeln!(s, "{k},{},{}", set.len(), roots_cell(set));
            }
            s
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct FiberReport {
    pub problem: FiberProblem,
    #[serde(flatten)]
    pub result: SolutionSet,
    /// `None` when no family is predicted for these pivots.
    pub matches_family: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub classification: Option<Classification>,
}

pub fn render_fiber(f: &FiberReport, format: Format) -> String {
    match format {
        Format::Json => to_json("fiber", f),
        Format::Md => {
            let pr = &f.problem;
            let name = pr.case.map_or_else(|| pr.pivots.to_string(), |t: NamedSet| t.to_string());
            let mut s = format!(
                "A{} p={} LT={} strategy={}: {} solutions, complete={}, nodes={}, unknowns={}, matches_family={}\n",
                pr.field.rank().n(),
                pr.field.p(),
                name,
                pr.strategy,
                f.result.len(),
                f.result.complete,
                f.result.nodes,
                f.result.unknowns,
                f.matches_family.map_or("n/a".to_string(), |m| m.to_string())
            );
            for (k, e) in f.result.solutions.iter().enumerate() {
                let _ = writeln!(s, "\nsolution {k}:");
                basis_lines(&mut s, e);
            }
            if let Some(trace) = &f.result.replay {
                let _ = writeln!(s, "\nreplay {}: {} branches, {} stalled, {} coefficients forced to zero", trace.case, trace.branches, trace.stalled, trace.forced_zero.len());
                if let Some(g) = trace.gauge {
                    let _ = writeln!(s, "surviving parameter: coefficient {} of y[{}] (exp ad along {})", g.coefficient, g.pivot, g.generator);
                }
            }
            s
        }
        Format::Csv => {
            let mut s = String::from("solution,pivot,vector\n");
            for (k, e) in f.result.solutions.iter().enumerate() {
                for v in e.basis() {
                    let lead = e.order().leading_root(v).map(|r| r.to_string()).unwrap_or_default();
                    let _ = writeln!(s, "{k},{lead},{}", vector_cell(v));
                }
            }
            s
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct ConjugacyReport {
    pub n: usize,
    pub r1: RootSet,
    pub r2: RootSet,
    /// Roots must map to positive roots; no sign normalization.
    pub action: &'static str,
    pub found: bool,
    pub permutation: Option<Permutation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<bool>,
    #[serde(rename = "match", skip_serializing_if = "Option::is_none")]
    pub matches: Option<bool>,
}

pub fn render_conjugacy(c: &ConjugacyReport, format: Format) -> String {
    match format {
        Format::Json => to_json("conjugacy", c),
        Format::Md => match &c.permutation {
            Some(w) => format!("conjugate: w={w} maps {} onto {}\n", c.r1, c.r2),
            None => format!("not conjugate: no w in S_{} maps {} onto {}\n", c.n + 1, c.r1, c.r2),
        },
        Format::Csv => format!(
            "n,found,permutation\n{},{},{}\n",
            c.n,
            c.found,
            c.permutation.as_ref().map(|w| w.images().iter().map(|x| x.to_string()).collect::<Vec<_>>().join(" ")).unwrap_or_default()
        ),
    }
}

pub fn render_lt_lemma(r: &LtLemmaReport, format: Format) -> String {
    match format {
        Format::Json => to_json("sample", r),
        Format::Md => {
            let mut s = format!(
                "lt-lemma A{} p={} seed={}: {} samples, {} violations, {} inconclusive\n",
                r.n, r.p, r.seed, r.samples, r.violations, r.inconclusive
            );
            for w in &r.witnesses {
                let _ = writeln!(s, "- {w}");
            }
            s
        }
        Format::Csv => format!(
            "experiment,n,p,seed,samples,violations,inconclusive\nlt-lemma,{},{},{},{},{},{}\n",
            r.n, r.p, r.seed, r.samples, r.violations, r.inconclusive
        ),
    }
}

pub fn render_dichotomy(r: &DichotomyReport, format: Format) -> String {
    match format {
        Format::Json => to_json("sample", r),
        Format::Md => {
            let mut s = format!(
                "dichotomy A{} p={} seed={}: {} samples, {} maximal, {} extendable, {} violations, {} inconclusive\n",
                r.n, r.p, r.seed, r.samples, r.maximal, r.extendable, r.violations, r.inconclusive
            );
            for w in &r.witnesses {
                let _ = writeln!(s, "- {w}");
            }
            s
        }
        Format::Csv => format!(
            "experiment,n,p,seed,samples,maximal,extendable,violations,inconclusive\ndichotomy,{},{},{},{},{},{},{},{}\n",
            r.n, r.p, r.seed, r.samples, r.maximal, r.extendable, r.violations, r.inconclusive
        ),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub criterion: u8,
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct VerifyReport {
    pub criteria: Vec<u8>,
    pub n_max: usize,
    pub seed: u64,
    pub checks: Vec<Check>,
    pub passed: bool,
}

pub fn render_verify(v: &VerifyReport, format: Format) -> String {
    match format {
        Format::Json => to_json("verify", v),
        Format::Md => {
            let mut s = String::new();
            for c in &v.checks {
                let _ = writeln!(s, "{} criterion {} ({}): {}", if c.passed { "PASS" } else { "FAIL" }, c.criterion, c.name, c.detail);
            }
            let _ = writeln!(s, "{}", if v.passed { "all checks passed" } else { "some checks failed" });
            s
        }
        Format::Csv => {
            let mut s = String::from("criterion,name,passed,detail\n");
            for c in &v.checks {
                let _ = writeln!(s, "{},{},{},\"{}\"", c.criterion, c.name, c.passed, c.detail.replace('"', "'"));
            }
            s
        }
    }
}
