//! Command line: `ainf check ...` and `ainf construct ...`.

use std::io::Write;
use std::path::PathBuf;
use std::sync::Arc;

use ainf_core::ainfmod::{self, ModMorphism};
use ainf_core::ainfty;
use ainf_core::bocs::{self, bar_construct};
use ainf_core::check::CheckResult;
use ainf_core::gmodb::{self, GMorph};
use ainf_core::twisted;
use ainf_core::Field;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use crate::format::{BarRef, Document};
use crate::workspace::*;

/// Exit code for a passed check or a verified construction.
pub const EXIT_PASS: i32 = 0;
/// Exit code when an identity fails.
pub const EXIT_FAIL: i32 = 1;
/// Exit code for parse errors and unmet preconditions.
pub const EXIT_ERROR: i32 = 2;

#[derive(Parser, Debug)]
#[command(name = "ainf", version, about = "Exact checks and constructions for A-infinity structures and twisted modules")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Checks the defining identities of a structure.
    Check {
        #[arg(value_enum)]
        kind: CheckKind,
        /// Structure to check; omit with `all`.
        #[arg(long)]
        target: Option<String>,
        #[command(flatten)]
        common: Common,
    },
    /// Builds a new structure, verifies it and adds it to the workspace.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        #[arg(long)]
        target: String,
        /// Second input: a bocs map, algebra morphism or isomorphism.
        #[arg(long)]
        along: Option<String>,
        /// Name of the result; derived from the target when omitted.
        #[arg(long)]
        name: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args, Debug)]
pub struct Common {
    #[arg(long)]
    pub input: PathBuf,
    /// Report file for `check`, workspace file for `construct`.
    #[arg(long)]
    pub output: Option<PathBuf>,
    /// Arity bound for checks, filtration level for bar constructions.
    #[arg(long)]
    pub level: Option<usize>,
    /// Overrides the field declared in the document: `q` or `fp:P`.
    #[arg(long)]
    pub field: Option<String>,
    #[arg(long, value_enum, default_value_t = ReportFormat::Text)]
    pub report: ReportFormat,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum CheckKind {
    Stasheff,
    Bocs,
    Mc,
    Morphism,
    Homotopy,
    Module,
    All,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ConstructKind {
    Bar,
    Invert,
    SplitIdem,
    Nullhomotopy,
    Cone,
    HomotopyInverse,
    Shift,
    Jfun,
    Restrict,
    Transport,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Text,
    Json,
}

/// Which section of the document a name lives in.
#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Section {
    Algebra,
    Module,
    AlgMorphism,
    AlgHomotopy,
    ModMorphism,
    ModHomotopy,
    Bocs,
    BocsMap,
    BocsHomotopy,
    Space,
    Twisted,
    GMorph,
    TwistedHomotopy,
}

pub fn section_of(doc: &Document, name: &str) -> Option<Section> {
    use Section::*;
    let s = if doc.algebras.contains_key(name) {
        Algebra
    } else if doc.modules.contains_key(name) {
        Module
    } else if doc.alg_morphisms.contains_key(name) {
        AlgMorphism
    } else if doc.alg_homotopies.contains_key(name) {
        AlgHomotopy
    } else if doc.mod_morphisms.contains_key(name) {
        ModMorphism
    } else if doc.mod_homotopies.contains_key(name) {
        ModHomotopy
    } else if doc.bocses.contains_key(name) {
        Bocs
    } else if doc.bocs_maps.contains_key(name) {
        BocsMap
    } else if doc.bocs_homotopies.contains_key(name) {
        BocsHomotopy
    } else if doc.spaces.contains_key(name) {
        Space
    } else if doc.twisted.contains_key(name) {
        Twisted
    } else if doc.gmorphs.contains_key(name) {
        GMorph
    } else if doc.twisted_homotopies.contains_key(name) {
        TwistedHomotopy
    } else {
        return None;
    };
    Some(s)
}

fn kind_matches(kind: CheckKind, s: Section) -> bool {
    use Section::*;
    match kind {
        CheckKind::Stasheff => s == Algebra,
        CheckKind::Module => s == Module,
        CheckKind::Bocs => s == Bocs,
        CheckKind::Mc => s == Twisted,
        CheckKind::Morphism => matches!(s, AlgMorphism | ModMorphism | BocsMap | GMorph),
        CheckKind::Homotopy => matches!(s, AlgHomotopy | ModHomotopy | BocsHomotopy | TwistedHomotopy),
        CheckKind::All => true,
    }
}

/// Results grouped by the structure they belong to.
#[derive(Clone, Debug, Default)]
pub struct Report {
    pub command: String,
    pub parts: Vec<(String, CheckResult)>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.parts.iter().all(|(_, r)| r.passed())
    }

    fn counts(&self) -> (usize, usize) {
        let total = self.parts.iter().map(|(_, r)| r.items.len()).sum();
        let failed = self.parts.iter().map(|(_, r)| r.items.iter().filter(|i| !i.ok).count()).sum();
        (total, failed)
    }

    pub fn text(&self) -> String {
        let mut s = format!("{}\n", self.command);
        for (name, r) in &self.parts {
            for i in &r.items {
                s.push_str(&format!("{} {} {} {}", if i.ok { "PASS" } else { "FAIL" }, name, i.identity, i.index));
                if let Some(w) = &i.witness {
                    s.push_str(&format!(": {}", w));
                }
                s.push('\n');
            }
        }
        let (total, failed) = self.counts();
        if failed == 0 {
            s.push_str(&format!("result: PASS ({} identities)\n", total));
        } else {
            s.push_str(&format!("result: FAIL ({} of {} identities failed)\n", failed, total));
        }
        s
    }

    pub fn json(&self) -> String {
        let parts: Vec<_> = self
            .parts
            .iter()
            .map(|(name, r)| {
                let items: Vec<_> = r
                    .items
                    .iter()
                    .map(|i| json!({"identity": i.identity, "index": i.index, "ok": i.ok, "witness": i.witness}))
                    .collect();
                json!({"structure": name, "passed": r.passed(), "items": items})
            })
            .collect();
        let v = json!({"command": self.command, "passed": self.passed(), "results": parts});
        let mut s = serde_json::to_string_pretty(&v).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn render(&self, format: ReportFormat) -> String {
        match format {
            ReportFormat::Text => self.text(),
            ReportFormat::Json => self.json(),
        }
    }
}

fn ok_item(res: &mut CheckResult, identity: &str) {
    res.pass(identity, "well-formed".into());
}

fn arities(level: Option<usize>, bound: usize) -> std::ops::RangeInclusive<usize> {
    1..=level.unwrap_or(2 * bound)
}

/// Runs the defining checker of the structure called `name`.
pub fn defining_check(ws: &Workspace, name: &str, level: Option<usize>) -> Result<CheckResult> {
    let section = section_of(&ws.doc, name).ok_or_else(|| Error(format!("unknown structure {:?}", name)))?;
    let mut res = CheckResult::new();
    match section {
        Section::Algebra => {
            let a = &ws.algebras[name];
            for n in arities(level, a.bound) {
                res.extend(ainfty::check_stasheff(a, n));
            }
        }
        Section::Module => {
            let m = &ws.modules[name];
            for n in arities(level, m.bound) {
                res.extend(ainfmod::check_module(m, n));
            }
        }
        Section::AlgMorphism => {
            let f = &ws.alg_morphisms[name];
            for n in arities(level, f.bound()) {
                res.extend(ainfty::check_alg_morphism(f, n));
            }
        }
        Section::AlgHomotopy => {
            let d = &ws.doc.alg_homotopies[name];
            let (f, g) = (&ws.alg_morphisms[&d.f], &ws.alg_morphisms[&d.g]);
            let h = &ws.alg_homotopies[name];
            let top = h.comps.keys().next_back().copied().unwrap_or(0).max(f.bound()).max(g.bound());
            for n in arities(level, top) {
                res.extend(ainfty::check_alg_homotopy(h, f, g, n));
            }
        }
        Section::ModMorphism => {
            let f = &ws.mod_morphisms[name];
            let upto = level.or(ws.doc.mod_morphisms[name].upto);
            for n in arities(upto, f.bound()) {
                res.extend(ainfmod::check_mod_morphism(f, n)?);
            }
        }
        Section::ModHomotopy => {
            let d = &ws.doc.mod_homotopies[name];
            let (f, g) = (&ws.mod_morphisms[&d.f], &ws.mod_morphisms[&d.g]);
            let h = &ws.mod_homotopies[name];
            let top = level.or(d.upto).unwrap_or(2 * h.bound().max(f.bound()).max(g.bound()));
            res.extend(ainfmod::check_mod_homotopy_upto(h, f, g, top)?);
        }
        Section::Bocs => res.extend(bocs::check_bocs_axioms(&ws.bocses[name])),
        Section::BocsMap => {
            let psi = &ws.bocs_maps[name];
            if psi.deg == 0 {
                res.extend(bocs::check_bocs_morphism(psi));
            } else {
                ok_item(&mut res, "bocs-map");
            }
        }
        Section::BocsHomotopy => {
            let d = &ws.doc.bocs_homotopies[name];
            res.extend(bocs::check_bocs_homotopy(&ws.bocs_homotopies[name], &ws.bocs_maps[&d.phi], &ws.bocs_maps[&d.psi]));
        }
        Section::Space => ok_item(&mut res, "space"),
        Section::Twisted => res.extend(twisted::check_mc(&ws.twisted[name])),
        Section::GMorph => {
            let d = &ws.doc.gmorphs[name];
            if ws.twisted.contains_key(&d.source) && ws.twisted.contains_key(&d.target) {
                let (src, tgt) = ws.endpoints(name)?;
                res.extend(twisted::check_twisted_morphism(&ws.gmorphs[name], src, tgt));
            } else {
                ok_item(&mut res, "morphism");
            }
        }
        Section::TwistedHomotopy => {
            let d = &ws.doc.twisted_homotopies[name];
            let (src, tgt) = ws.endpoints(&d.f)?;
            res.extend(twisted::check_homotopy(&ws.twisted_homotopies[name], &ws.gmorphs[&d.f], &ws.gmorphs[&d.g], src, tgt));
        }
    }
    Ok(res)
}

fn parse_field(s: &Option<String>) -> Result<Option<Field>> {
    match s {
        None => Ok(None),
        Some(s) => Ok(Some(s.parse::<Field>()?)),
    }
}

fn load(common: &Common) -> Result<Workspace> {
    let text = std::fs::read_to_string(&common.input)
        .map_err(|e| Error(format!("cannot read {}: {}", common.input.display(), e)))?;
    Workspace::parse(&text, parse_field(&common.field)?)
}

pub fn check(ws: &Workspace, kind: CheckKind, target: Option<&str>, level: Option<usize>) -> Result<Report> {
    let mut report = Report::default();
    match target {
        Some(t) => {
            let s = section_of(&ws.doc, t).ok_or_else(|| Error(format!("unknown structure {:?}", t)))?;
            if !kind_matches(kind, s) {
                return Err(Error(format!("{:?} is not a target for this check", t)));
            }
            report.command = format!("check {} {}", kind_name(kind), t);
            report.parts.push((t.to_string(), defining_check(ws, t, level)?));
        }
        None if kind == CheckKind::All => {
            report.command = "check all".into();
            for name in ordered_names(&ws.doc) {
                report.parts.push((name.clone(), defining_check(ws, &name, level)?));
            }
        }
        None => return Err(Error("--target is required".into())),
    }
    Ok(report)
}

fn ordered_names(doc: &Document) -> Vec<String> {
    doc.names().into_iter().map(String::from).collect()
}

fn kind_name(kind: CheckKind) -> String {
    kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

fn construct_name(kind: ConstructKind) -> String {
    kind.to_possible_value().map(|v| v.get_name().to_string()).unwrap_or_default()
}

/// A construction: the extended document, the names it added and any
/// extra identities to verify besides their defining checks.
struct Built {
    doc: Document,
    added: Vec<String>,
    extra: Vec<Extra>,
}

enum Extra {
    /// `g` and `f` are mutually inverse.
    Inverse(String, String),
}

fn claim(doc: &Document, name: &str) -> Result<String> {
    if section_of(doc, name).is_some() {
        return Err(Error(format!("name {:?} is already in use", name)));
    }
    Ok(name.to_string())
}

fn need<'a>(along: &'a Option<String>, what: &str) -> Result<&'a str> {
    along.as_deref().ok_or_else(|| Error(format!("--along {} is required", what)))
}

fn gmorph_bocs(ws: &Workspace, name: &str) -> String {
    ws.doc.gmorphs[name].bocs.clone()
}

fn build(ws: &Workspace, kind: ConstructKind, target: &str, along: &Option<String>, name: &Option<String>, level: Option<usize>) -> Result<Built> {
    let section = section_of(&ws.doc, target).ok_or_else(|| Error(format!("unknown structure {:?}", target)))?;
    let suffix = match kind {
        ConstructKind::Bar => "bar",
        ConstructKind::Invert => "inv",
        ConstructKind::SplitIdem => "split",
        ConstructKind::Nullhomotopy => "null",
        ConstructKind::Cone => "cone",
        ConstructKind::HomotopyInverse => "hinv",
        ConstructKind::Shift => "shift",
        ConstructKind::Jfun => "j",
        ConstructKind::Restrict => "res",
        ConstructKind::Transport => "tr",
    };
    let base = name.clone().unwrap_or_else(|| format!("{}_{}", target, suffix));
    let mut doc = ws.doc.clone();
    let mut added = Vec::new();
    let mut extra = Vec::new();
    let wrong = || Error(format!("{:?} is not a valid target for construct {}", target, construct_name(kind)));
    macro_rules! add {
        ($section:ident, $name:expr, $data:expr) => {{
            let n = claim(&doc, &$name)?;
            doc.$section.insert(n.clone(), $data);
            added.push(n);
        }};
    }

    match (kind, section) {
        (ConstructKind::Bar, Section::Algebra) => {
            let level = level.unwrap_or(3);
            let b = bar_construct(ws.algebras[target].clone(), level)?;
            add!(bocses, base, bocs_data(&b, Some(BarRef { algebra: target.into(), level })));
        }
        (ConstructKind::Invert, Section::GMorph) => {
            let d = &ws.doc.gmorphs[target];
            let inv = gmodb::invert(&ws.gmorphs[target])?;
            add!(gmorphs, base, gmorph_data(&inv, &d.bocs, &d.target, &d.source));
            extra.push(Extra::Inverse(base.clone(), target.into()));
        }
        (ConstructKind::SplitIdem, Section::GMorph) => {
            let d = &ws.doc.gmorphs[target];
            if d.source != d.target {
                return Err(Error(format!("{} is not an endomorphism", target)));
            }
            let (m, _) = ws.endpoints(target)?;
            let s = twisted::split_idempotent(&ws.gmorphs[target], m)?;
            let (sum, first, second) = (format!("{}_sum", base), format!("{}_1", base), format!("{}_2", base));
            add!(twisted, sum, twisted_data(&s.total, &d.bocs));
            add!(twisted, first, twisted_data(&s.first, &d.bocs));
            add!(twisted, second, twisted_data(&s.second, &d.bocs));
            let (h, h_inv) = (format!("{}_h", base), format!("{}_hinv", base));
            add!(gmorphs, h, gmorph_data(&s.h, &d.bocs, &d.source, &sum));
            add!(gmorphs, h_inv, gmorph_data(&s.h_inv, &d.bocs, &sum, &d.source));
            let b = m.bocs();
            for (i, part) in [&first, &second].into_iter().enumerate() {
                let inj = s.sum.inj(b, i).relabel(ws_space(&s, i), s.total.space.clone(), 0);
                let proj = s.sum.proj(b, i).relabel(s.total.space.clone(), ws_space(&s, i), 0);
                add!(gmorphs, format!("{}_inj{}", base, i + 1), gmorph_data(&inj, &d.bocs, part, &sum));
                add!(gmorphs, format!("{}_proj{}", base, i + 1), gmorph_data(&proj, &d.bocs, &sum, part));
            }
            extra.push(Extra::Inverse(h_inv, h));
        }
        (ConstructKind::Nullhomotopy, Section::Twisted) => {
            let m = &ws.twisted[target];
            let bocs = ws.doc.twisted[target].bocs.clone();
            let h = twisted::nullhomotopy(m)?;
            let (id, zero) = (format!("{}_id", base), format!("{}_zero", base));
            add!(gmorphs, id, gmorph_data(&m.identity(), &bocs, target, target));
            let z = GMorph::zero(m.bocs().clone(), m.space.clone(), m.space.clone(), 0);
            add!(gmorphs, zero, gmorph_data(&z, &bocs, target, target));
            add!(twisted_homotopies, base, twisted_homotopy_data(&h, &id, &zero));
        }
        (ConstructKind::Cone, Section::GMorph) => {
            let d = ws.doc.gmorphs[target].clone();
            let (src, tgt) = ws.endpoints(target)?;
            let c = twisted::cone(&ws.gmorphs[target], src, tgt)?;
            let shifted = format!("{}_shift", base);
            add!(twisted, base, twisted_data(&c.cone, &d.bocs));
            add!(twisted, shifted, twisted_data(&c.shifted, &d.bocs));
            add!(gmorphs, format!("{}_inc", base), gmorph_data(&c.inc, &d.bocs, &d.target, &base));
            add!(gmorphs, format!("{}_out", base), gmorph_data(&c.out, &d.bocs, &base, &shifted));
        }
        (ConstructKind::HomotopyInverse, Section::GMorph) => {
            let d = ws.doc.gmorphs[target].clone();
            let f = &ws.gmorphs[target];
            let (src, tgt) = ws.endpoints(target)?;
            let hi = twisted::homotopy_inverse(f, src, tgt)?;
            let fg = gmodb::compose(f, &hi.g)?;
            let gf = gmodb::compose(&hi.g, f)?;
            let names = [format!("{}_fg", base), format!("{}_gf", base), format!("{}_id_target", base), format!("{}_id_source", base)];
            add!(gmorphs, base, gmorph_data(&hi.g, &d.bocs, &d.target, &d.source));
            add!(gmorphs, names[0].clone(), gmorph_data(&fg, &d.bocs, &d.target, &d.target));
            add!(gmorphs, names[1].clone(), gmorph_data(&gf, &d.bocs, &d.source, &d.source));
            add!(gmorphs, names[2].clone(), gmorph_data(&tgt.identity(), &d.bocs, &d.target, &d.target));
            add!(gmorphs, names[3].clone(), gmorph_data(&src.identity(), &d.bocs, &d.source, &d.source));
            add!(twisted_homotopies, format!("{}_h_fg", base), twisted_homotopy_data(&hi.h_fg, &names[0], &names[2]));
            add!(twisted_homotopies, format!("{}_h_gf", base), twisted_homotopy_data(&hi.h_gf, &names[1], &names[3]));
        }
        (ConstructKind::HomotopyInverse, Section::ModMorphism) => {
            let d = ws.doc.mod_morphisms[target].clone();
            let f = &ws.mod_morphisms[target];
            let level = level.unwrap_or(3);
            let b = Arc::new(bar_construct(f.src.alg.clone(), level)?);
            let hi = ainfmod::mod_homotopy_inverse(f, &b)?;
            let upto = Some(level + 1);
            let fg = ainfmod::compose_mod(f, &hi.g)?.truncated(level + 1);
            let gf = ainfmod::compose_mod(&hi.g, f)?.truncated(level + 1);
            let names = [format!("{}_fg", base), format!("{}_gf", base), format!("{}_id_target", base), format!("{}_id_source", base)];
            add!(mod_morphisms, base, mod_morphism_data(&hi.g, &d.target, &d.source, upto));
            add!(mod_morphisms, names[0].clone(), mod_morphism_data(&fg, &d.target, &d.target, upto));
            add!(mod_morphisms, names[1].clone(), mod_morphism_data(&gf, &d.source, &d.source, upto));
            add!(mod_morphisms, names[2].clone(), mod_morphism_data(&ModMorphism::identity(f.tgt.clone()), &d.target, &d.target, None));
            add!(mod_morphisms, names[3].clone(), mod_morphism_data(&ModMorphism::identity(f.src.clone()), &d.source, &d.source, None));
            let hom = |h: &ModMorphism, a: &str, b: &str| crate::format::ModHomotopyData {
                f: a.into(),
                g: b.into(),
                upto,
                comps: family_data(&h.comps),
            };
            add!(mod_homotopies, format!("{}_h_fg", base), hom(&hi.h_fg, &names[0], &names[2]));
            add!(mod_homotopies, format!("{}_h_gf", base), hom(&hi.h_gf, &names[1], &names[3]));
        }
        (ConstructKind::Shift, Section::Twisted) => {
            let bocs = ws.doc.twisted[target].bocs.clone();
            add!(twisted, base, twisted_data(&twisted::shift(&ws.twisted[target]), &bocs));
        }
        (ConstructKind::Shift, Section::Module) => {
            let alg = ws.doc.modules[target].algebra.clone();
            add!(modules, base, module_data(&ainfmod::shift_mod(&ws.modules[target])?, &alg));
        }
        (ConstructKind::Jfun, Section::Twisted) => {
            let bocs = ws.doc.twisted[target].bocs.clone();
            let j = twisted::jfun(&ws.twisted[target])?;
            add!(twisted, base, twisted_data(&j.j, &bocs));
        }
        (ConstructKind::Jfun, Section::Module) => {
            let alg = ws.doc.modules[target].algebra.clone();
            add!(modules, base, module_data(&ainfmod::jfun_mod(&ws.modules[target])?, &alg));
        }
        (ConstructKind::Restrict, Section::Twisted) => {
            let along = need(along, "BOCS_MAP")?;
            let psi = ws.bocs_maps.get(along).ok_or_else(|| Error(format!("unknown bocs map {:?}", along)))?;
            let bocs = ws.doc.bocs_maps[along].source.clone();
            add!(twisted, base, twisted_data(&twisted::restrict_twisted(psi, &ws.twisted[target])?, &bocs));
        }
        (ConstructKind::Restrict, Section::Module) => {
            let along = need(along, "ALGEBRA_MORPHISM")?;
            let phi = ws.alg_morphisms.get(along).ok_or_else(|| Error(format!("unknown algebra morphism {:?}", along)))?;
            let alg = ws.doc.alg_morphisms[along].source.clone();
            add!(modules, base, module_data(&ainfmod::restrict_module(phi, &ws.modules[target])?, &alg));
        }
        (ConstructKind::Transport, Section::Twisted) => {
            let along = need(along, "ISOMORPHISM")?;
            let h = ws.gmorphs.get(along).ok_or_else(|| Error(format!("unknown morphism {:?}", along)))?;
            if ws.doc.gmorphs[along].source != target {
                return Err(Error(format!("{} does not start at {}", along, target)));
            }
            let bocs = gmorph_bocs(ws, along);
            add!(twisted, base, twisted_data(&twisted::transport(h, &ws.twisted[target])?, &bocs));
        }
        _ => return Err(wrong()),
    }
    Ok(Built { doc, added, extra })
}

fn ws_space(s: &twisted::IdemSplit, i: usize) -> Arc<ainf_core::graded::Space> {
    if i == 0 {
        s.first.space.clone()
    } else {
        s.second.space.clone()
    }
}

/// Builds, serializes, reloads and re-checks a construction.
pub fn construct(
    ws: &Workspace,
    kind: ConstructKind,
    target: &str,
    along: &Option<String>,
    name: &Option<String>,
    level: Option<usize>,
) -> Result<(String, Report)> {
    let built = build(ws, kind, target, along, name, level)?;
    let text = built.doc.to_json();
    let reloaded = Workspace::parse(&text, None)?;
    let mut report = Report { command: format!("construct {} {}", construct_name(kind), target), parts: Vec::new() };
    for n in &built.added {
        report.parts.push((n.clone(), defining_check(&reloaded, n, None)?));
    }
    for e in &built.extra {
        match e {
            Extra::Inverse(g, f) => {
                let (gm, fm) = (&reloaded.gmorphs[g], &reloaded.gmorphs[f]);
                let mut res = CheckResult::new();
                let left = gmodb::compose(gm, fm)?;
                let right = gmodb::compose(fm, gm)?;
                let id_l = GMorph::identity(fm.bocs.clone(), fm.dom.clone());
                let id_r = GMorph::identity(fm.bocs.clone(), fm.cod.clone());
                res.push("inverse", format!("{}*{}", g, f), left.sub(&id_l).witness().map(|(_, w)| w));
                res.push("inverse", format!("{}*{}", f, g), right.sub(&id_r).witness().map(|(_, w)| w));
                report.parts.push((g.clone(), res));
            }
        }
    }
    Ok((text, report))
}

fn emit(path: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| Error(format!("cannot write {}: {}", p.display(), e))),
        None => stdout.write_all(text.as_bytes()).map_err(Error::from),
    }
}

/// Runs a parsed command line and returns the exit code.
pub fn run(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32 {
    match run_inner(cli, stdout, stderr) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e);
            EXIT_ERROR
        }
    }
}

fn run_inner(cli: Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<i32> {
    match cli.command {
        Command::Check { kind, target, common } => {
            let ws = load(&common)?;
            let report = check(&ws, kind, target.as_deref(), common.level)?;
            emit(&common.output, &report.render(common.report), stdout)?;
            Ok(if report.passed() { EXIT_PASS } else { EXIT_FAIL })
        }
        Command::Construct { kind, target, along, name, common } => {
            let ws = load(&common)?;
            let (text, report) = construct(&ws, kind, &target, &along, &name, common.level)?;
            let rendered = report.render(common.report);
            if !report.passed() {
                stderr.write_all(rendered.as_bytes())?;
                return Ok(EXIT_FAIL);
            }
            match &common.output {
                Some(_) => {
                    emit(&common.output, &text, stdout)?;
                    stdout.write_all(rendered.as_bytes())?;
                }
                None => {
                    stdout.write_all(text.as_bytes())?;
                    stderr.write_all(rendered.as_bytes())?;
                }
            }
            Ok(EXIT_PASS)
        }
    }
}
