use std::collections::HashMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use anyhow::{anyhow, bail, Context, Result};
use higgins_core::backend::{AbelianBackend, GroupBackend};
use higgins_core::certify::{
    certify_automatic, certify_coset_system, combination_hypotheses_report, concat_structure, geodesic_coset_filter,
    HypothesisParams, Theorem,
};
use higgins_core::config::{CosetDecl, CosetTarget, GroupHandle, Project, ProjectConfig};
use higgins_core::coset::{check_limited_crossover, CosetSystem, Mode};
use higgins_core::experiment::{trefoil_crossover, TrefoilGenerators};
use higgins_core::fsa::{Dfa, Language};
use higgins_core::gog;
use higgins_core::higgins::{BaseMode, Pi1, Pi1Coset, Pi1Group};
use higgins_core::word::Word;
use higgins_core::Error;

use crate::{CertifyWhat, FsaOp, GeneratorsArg, LanguageKind, TheoremArg};

fn read_config(path: &Path) -> Result<ProjectConfig> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    let dir = path.parent().unwrap_or(Path::new("."));
    Ok(ProjectConfig::parse(&text, &path.display().to_string(), dir)?)
}

fn load(path: &Path) -> Result<Project> {
    Ok(Project::build(read_config(path)?)?)
}

/// Print `text` and optionally write it to `out`.
fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    print!("{text}");
    if let Some(p) = out {
        fs::write(p, text).with_context(|| format!("cannot write {}", p.display()))?;
    }
    Ok(())
}

fn pi1(project: &Project) -> Result<Arc<Pi1>> {
    match (&project.gog, &project.tree) {
        (Some(g), Some(t)) => Ok(Arc::new(Pi1::new(g.clone(), t.clone())?)),
        _ => bail!("the configuration has no [graph] section"),
    }
}

fn vertex(p: &Pi1, name: Option<&str>) -> Result<usize> {
    match name {
        None => Ok(0),
        Some(n) => p.gog().vertex_index(n).ok_or_else(|| anyhow!("unknown vertex `{n}`")),
    }
}

fn edge(p: &Pi1, name: &str) -> Result<usize> {
    p.gog().edge_index(name).ok_or_else(|| anyhow!("unknown edge `{name}`"))
}

/// Build failures are property failures; unreadable or malformed files are
/// usage errors.
pub fn validate(path: &Path) -> Result<bool> {
    let cfg = read_config(path)?;
    let project = match Project::build(cfg) {
        Ok(p) => p,
        Err(e) => {
            println!("status=fail\nfailures=1\nfailure {e}");
            return Ok(false);
        }
    };
    let mut out = String::new();
    writeln!(out, "# {} groups, {} subgroups", project.groups.len(), project.subgroups.len())?;
    let passed = match &project.gog {
        Some(g) => {
            let report = gog::validate(g);
            writeln!(
                out,
                "# graph: {} vertices, {} edge pairs",
                g.vertices().len(),
                g.edges().len() / 2
            )?;
            write!(out, "{report}")?;
            report.passed()
        }
        None => {
            out.push_str("status=pass\nfailures=0\n");
            true
        }
    };
    emit(&out, None)?;
    Ok(passed)
}

pub fn normal_form(path: &Path, word: &str, base: Option<&str>, coset_edge: Option<&str>, trace: bool) -> Result<bool> {
    let p = pi1(&load(path)?)?;
    let w = p.parse(word)?;
    let mode = match coset_edge {
        Some(e) => BaseMode::Coset(edge(&p, e)?),
        None => BaseMode::Group(vertex(&p, base)?),
    };
    let (nf, traces) = p.reduce_traced(&w, mode)?;
    let mut out = format!("{}\n", p.format(&nf));
    if trace {
        for (k, t) in traces.iter().enumerate() {
            writeln!(out, "round={k}")?;
            out.push_str(&p.format_trace(t));
        }
    }
    emit(&out, None)?;
    Ok(true)
}

pub struct EnumArgs {
    pub language: LanguageKind,
    pub max_len: usize,
    pub base: Option<String>,
    pub coset_edge: Option<String>,
    pub vertex: Option<String>,
    pub subgroup: Option<String>,
    pub check_unique: bool,
}

fn duplicates(keys: impl Iterator<Item = Word>) -> usize {
    let mut seen: HashMap<Word, ()> = HashMap::new();
    keys.filter(|k| seen.insert(k.clone(), ()).is_some()).count()
}

pub fn enumerate(path: &Path, args: EnumArgs) -> Result<bool> {
    let project = load(path)?;
    let mut out = String::new();
    let (count, dups) = match args.language {
        LanguageKind::Higgins | LanguageKind::Coset => {
            let p = pi1(&project)?;
            let mode = match args.language {
                LanguageKind::Coset => {
                    let e = args
                        .coset_edge
                        .as_deref()
                        .ok_or_else(|| anyhow!("--language coset needs --coset-edge"))?;
                    BaseMode::Coset(edge(&p, e)?)
                }
                _ => BaseMode::Group(vertex(&p, args.base.as_deref())?),
            };
            let words = match p.higgins_automaton(mode) {
                Ok(dfa) => dfa.enumerate(args.max_len),
                Err(Error::NoAutomaton(_)) => p
                    .alphabet()
                    .all_words(args.max_len)
                    .into_iter()
                    .filter(|w| p.is_higgins(w, mode))
                    .collect(),
                Err(e) => return Err(e.into()),
            };
            for w in &words {
                writeln!(out, "{}", p.format(w))?;
            }
            let dups = if args.check_unique {
                let keys: Vec<Word> = words
                    .iter()
                    .map(|w| match mode {
                        BaseMode::Group(v) => p.normal_form(w, v),
                        BaseMode::Coset(e) => p.coset_normal_form(w, e),
                    })
                    .collect::<std::result::Result<_, _>>()?;
                duplicates(keys.into_iter())
            } else {
                0
            };
            (words.len(), dups)
        }
        LanguageKind::Component => {
            if let Some(s) = &args.subgroup {
                let sub = project.subgroup(s).ok_or_else(|| anyhow!("unknown subgroup `{s}`"))?;
                let ctx = sub.context.clone();
                let al = ctx.parent().alphabet().clone();
                let words = ctx.coset_language().enumerate(args.max_len);
                for w in &words {
                    writeln!(out, "{}", al.format(w))?;
                }
                let dups = if args.check_unique {
                    duplicates(words.iter().map(|w| ctx.coset_rep(w)))
                } else {
                    0
                };
                (words.len(), dups)
            } else {
                let group = component_group(&project, args.vertex.as_deref())?;
                let words = group.canonical_language().enumerate(args.max_len);
                for w in &words {
                    writeln!(out, "{}", group.alphabet().format(w))?;
                }
                let dups = if args.check_unique {
                    duplicates(words.iter().map(|w| group.canonical(w)))
                } else {
                    0
                };
                (words.len(), dups)
            }
        }
    };
    if args.check_unique {
        writeln!(out, "# check-unique words={count} duplicates={dups}")?;
    }
    emit(&out, None)?;
    Ok(dups == 0)
}

/// A vertex group by vertex name, else a declared group by name.
fn component_group(project: &Project, name: Option<&str>) -> Result<Arc<dyn GroupBackend>> {
    let name = name.ok_or_else(|| anyhow!("--language component needs --vertex or --subgroup"))?;
    if let Some(g) = &project.gog {
        if let Some(v) = g.vertex_index(name) {
            return Ok(g.vertex(v).group.clone());
        }
    }
    project
        .group(name)
        .map(GroupHandle::backend)
        .ok_or_else(|| anyhow!("unknown vertex or group `{name}`"))
}

pub struct CertifyArgs {
    pub what: CertifyWhat,
    pub radius: Option<usize>,
    pub lambda: Option<usize>,
    pub mu: Option<usize>,
    pub theorem: TheoremArg,
    pub coset: Option<String>,
    pub out: Option<PathBuf>,
}

/// `π₁` and its groups by base vertex, built on first use.
type Pi1Groups = (Arc<Pi1>, Vec<Option<Arc<Pi1Group>>>);

fn coset_systems<'a>(project: &'a Project, only: Option<&str>) -> Result<Vec<(&'a CosetDecl, CosetSystem)>> {
    let mut out = Vec::new();
    let mut group: Option<Pi1Groups> = None;
    for decl in &project.config.cosets {
        if only.is_some_and(|n| n != decl.name) {
            continue;
        }
        let sys = match &decl.target {
            CosetTarget::Subgroup(s) => {
                let sub = project.subgroup(s).ok_or_else(|| anyhow!("unknown subgroup `{s}`"))?;
                CosetSystem::new(sub.context.clone(), decl.mode)
            }
            CosetTarget::Edge(e) => {
                if group.is_none() {
                    let p = pi1(project)?;
                    let n = p.gog().vertices().len();
                    group = Some((p, vec![None; n]));
                }
                let (p, groups) = group.as_mut().expect("just set");
                let e = edge(p, e)?;
                let v = p.gog().edge(e).to;
                if groups[v].is_none() {
                    groups[v] = Some(Arc::new(Pi1Group::new(p.clone(), v)?));
                }
                let g = groups[v].clone().expect("just set");
                CosetSystem::new(Arc::new(Pi1Coset::new(g, e)?), decl.mode)
            }
        };
        out.push((decl, sys));
    }
    if out.is_empty() {
        match only {
            Some(n) => bail!("no [coset] section named `{n}`"),
            None => bail!("the configuration declares no [coset] sections"),
        }
    }
    Ok(out)
}

fn describe(decl: &CosetDecl) -> String {
    match &decl.target {
        CosetTarget::Subgroup(s) => format!("coset={} subgroup={} mode={}", decl.name, s, decl.mode),
        CosetTarget::Edge(e) => format!("coset={} edge={} mode={}", decl.name, e, decl.mode),
    }
}

/// Linear independence over Q, by integer elimination.
fn independent(mut rows: Vec<Vec<i128>>) -> bool {
    let n = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..n).find(|&r| rows[r][c] != 0) else {
            continue;
        };
        rows.swap(rank, p);
        for r in 0..n {
            if r != rank && rows[r][c] != 0 {
                let (a, b) = (rows[rank][c], rows[r][c]);
                let pivot = rows[rank].clone();
                for (x, y) in rows[r].iter_mut().zip(&pivot) {
                    *x = *x * a - *y * b;
                }
            }
        }
        rank += 1;
    }
    rank == n
}

/// Shortlex words over `Y` when `Y` freely generates a free abelian `H`.
fn free_abelian_language(project: &Project, decl: &CosetDecl) -> Result<Language> {
    let CosetTarget::Subgroup(s) = &decl.target else {
        bail!("coset `{}`: automatic structures need a component subgroup", decl.name);
    };
    let sub = project.subgroup(s).ok_or_else(|| anyhow!("unknown subgroup `{s}`"))?;
    let Some(GroupHandle::Abelian(g)) = project.group(&sub.group) else {
        bail!("coset `{}`: L_H is only built for subgroups of abelian groups", decl.name);
    };
    let y = sub.context.generators();
    let rows = y
        .words()
        .iter()
        .map(|w| g.exponents(w).into_iter().map(i128::from).collect())
        .collect();
    if !g.torsion().is_empty() || !independent(rows) {
        bail!("coset `{}`: generators of `{s}` do not freely generate a free abelian group", decl.name);
    }
    Ok(AbelianBackend::with_names(y.len(), &[], y.alphabet().generator_names())?.canonical_language())
}

pub fn certify(path: &Path, args: CertifyArgs) -> Result<bool> {
    let project = load(path)?;
    let cfg = &project.config;
    let radius = match args.radius {
        Some(r) => r,
        None => cfg.param("radius")?.unwrap_or(4),
    };
    let lambda = match args.lambda {
        Some(l) => Some(l),
        None => cfg.param("lambda")?,
    };
    let mut out = String::new();
    let mut passed = true;
    match args.what {
        CertifyWhat::Hypotheses => {
            let g = project
                .gog
                .as_ref()
                .ok_or_else(|| anyhow!("the configuration has no [graph] section"))?;
            let mu = match args.mu {
                Some(m) => m,
                None => cfg.param("mu")?.unwrap_or(1),
            };
            let theorem = match args.theorem {
                TheoremArg::Async => Theorem::Async,
                TheoremArg::Sync => Theorem::Sync,
                TheoremArg::Both => Theorem::Both,
            };
            let lambda = lambda.unwrap_or(1);
            let report = combination_hypotheses_report(
                g,
                HypothesisParams {
                    radius,
                    lambda,
                    mu,
                    theorem,
                },
            );
            writeln!(out, "# combination hypotheses, {} rows", report.rows.len())?;
            writeln!(out, "hypotheses radius={radius} lambda={lambda} mu={mu}")?;
            write!(out, "{report}")?;
            passed = report.passed();
        }
        what => {
            for (decl, sys) in coset_systems(&project, args.coset.as_deref())? {
                writeln!(out, "{}", describe(decl))?;
                let cert = match what {
                    CertifyWhat::Coset => certify_coset_system(&sys, radius),
                    CertifyWhat::SyncFilter => {
                        let mut filtered = geodesic_coset_filter(&sys, radius)?;
                        filtered.mode = Mode::Sync;
                        writeln!(out, "filtered words={}", filtered.language.enumerate(radius).len())?;
                        certify_coset_system(&filtered, radius)
                    }
                    _ => {
                        let l_h = free_abelian_language(&project, decl)?;
                        let cs = concat_structure(&l_h, &sys)?;
                        certify_automatic(&cs.language, cs.group.as_ref(), radius, sys.mode)
                    }
                };
                writeln!(
                    out,
                    "# {}: {} pairs within radius {radius}, K={}{}",
                    decl.name,
                    cert.pairs,
                    cert.k,
                    if cert.bounded() { "" } else { ", some pairs leave the ball" }
                )?;
                write!(out, "{cert}")?;
                passed &= cert.bounded();
                if let (CertifyWhat::Coset, Some(l)) = (what, lambda) {
                    let y = sys.context.generators().clone();
                    let report = check_limited_crossover(&sys, &y, y.words(), l, radius)?;
                    write!(out, "{}", report.to_report())?;
                    passed &= report.passed();
                }
            }
        }
    }
    emit(&out, args.out.as_deref())?;
    Ok(passed)
}

pub fn experiment(radii: &[usize], lambda_max: usize, generators: GeneratorsArg, out: Option<&Path>) -> Result<bool> {
    let gens = match generators {
        GeneratorsArg::Xy => TrefoilGenerators::Braid,
        GeneratorsArg::Ab => TrefoilGenerators::Amalgam,
    };
    let mut text = String::new();
    let mut table = Vec::new();
    let mut conclusive = true;
    for &r in radii {
        let e = trefoil_crossover(gens, r, lambda_max)?;
        write!(text, "{e}")?;
        conclusive &= !e.inconclusive();
        table.push((r, e.min_lambda()));
    }
    writeln!(text, "# minimal witness-free λ per radius; none means above {lambda_max}")?;
    for (r, m) in &table {
        match m {
            Some(l) => writeln!(text, "table radius={r} min_lambda={l}")?,
            None => writeln!(text, "table radius={r} min_lambda=none")?,
        }
    }
    let values: Vec<usize> = table.iter().map(|(_, m)| m.unwrap_or(lambda_max + 1)).collect();
    let monotone = values.windows(2).all(|w| w[0] <= w[1]);
    writeln!(text, "monotone={}", if monotone { "yes" } else { "no" })?;
    emit(&text, out)?;
    Ok(conclusive)
}

fn read_dfa(path: &Path) -> Result<(String, Dfa)> {
    let text = fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))?;
    Dfa::from_text(&text).with_context(|| format!("in {}", path.display()))
}

pub fn fsa(op: FsaOp) -> Result<bool> {
    let (text, out) = match op {
        FsaOp::Min { file, out } => {
            let (name, d) = read_dfa(&file)?;
            (d.minimize().to_text(&name), out)
        }
        FsaOp::Concat { first, second, out } => {
            let ((n1, a), (n2, b)) = (read_dfa(&first)?, read_dfa(&second)?);
            (a.concat(&b)?.minimize().to_text(&format!("{n1}_{n2}")), out)
        }
        FsaOp::Intersect { first, second, out } => {
            let ((n1, a), (n2, b)) = (read_dfa(&first)?, read_dfa(&second)?);
            (a.intersect(&b)?.minimize().to_text(&format!("{n1}_and_{n2}")), out)
        }
        FsaOp::Enum { file, max_len } => {
            let (_, d) = read_dfa(&file)?;
            let mut s = String::new();
            for w in d.enumerate(max_len) {
                if w.is_empty() {
                    s.push_str("ε\n");
                } else {
                    let names: Vec<&str> = w.iter().map(|l| d.symbols()[l.index()].as_str()).collect();
                    writeln!(s, "{}", names.join(" "))?;
                }
            }
            (s, None)
        }
    };
    emit(&text, out.as_deref())?;
    Ok(true)
}

#[cfg(test)]
mod tests {
    use super::independent;

    #[test]
    fn independence() {
        assert!(independent(vec![vec![1, 0, 0], vec![0, 1, 0]]));
        assert!(independent(vec![vec![1, 1], vec![1, -1]]));
        assert!(!independent(vec![vec![2, 4], vec![1, 2]]));
        assert!(!independent(vec![vec![0, 0]]));
    }
}
