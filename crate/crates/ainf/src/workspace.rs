//! Resolving a [`Document`] into core structures, and writing structures back.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use ainf_core::ainfmod::{AInfModule, ModMorphism};
use ainf_core::ainfty::{AInfAlgebra, AlgHomotopy, AlgMorphism};
use ainf_core::bocs::{bar_construct, BGen, Bocs, BocsMap, Vector};
use ainf_core::gmodb::GMorph;
use ainf_core::graded::{Gen, Space, TMap};
use ainf_core::linalg::Mat;
use ainf_core::twisted::TwMod;
use ainf_core::{Field, Scalar};

use crate::format::*;

/// A load or precondition failure, reported with exit code 2.
#[derive(Clone, Debug, PartialEq)]
pub struct Error(pub String);

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for Error {}

impl From<ainf_core::Error> for Error {
    fn from(e: ainf_core::Error) -> Error {
        Error(e.to_string())
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Error {
        Error(format!("malformed document: {}", e))
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Error {
        Error(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

fn err<T>(msg: impl Into<String>) -> Result<T> {
    Err(Error(msg.into()))
}

fn ctx<T>(r: ainf_core::Result<T>, what: &str) -> Result<T> {
    r.map_err(|e| Error(format!("{}: {}", what, e)))
}

/// A document together with every structure it declares.
#[derive(Clone, Debug)]
pub struct Workspace {
    pub doc: Document,
    pub field: Field,
    pub algebras: BTreeMap<String, Arc<AInfAlgebra>>,
    pub modules: BTreeMap<String, Arc<AInfModule>>,
    pub alg_morphisms: BTreeMap<String, AlgMorphism>,
    pub alg_homotopies: BTreeMap<String, AlgHomotopy>,
    pub mod_morphisms: BTreeMap<String, ModMorphism>,
    pub mod_homotopies: BTreeMap<String, ModMorphism>,
    pub bocses: BTreeMap<String, Arc<Bocs>>,
    pub bocs_maps: BTreeMap<String, BocsMap>,
    pub bocs_homotopies: BTreeMap<String, BocsMap>,
    pub spaces: BTreeMap<String, Arc<Space>>,
    pub twisted: BTreeMap<String, TwMod>,
    pub gmorphs: BTreeMap<String, GMorph>,
    pub twisted_homotopies: BTreeMap<String, GMorph>,
}

fn lookup<'a, T>(map: &'a BTreeMap<String, T>, name: &str, what: &str) -> Result<&'a T> {
    map.get(name).ok_or_else(|| Error(format!("unknown {} {:?}", what, name)))
}

fn coeff(field: Field, c: &Coeff) -> Result<Scalar> {
    Ok(field.parse(&c.text())?)
}

fn find(sp: &Space, label: &str, what: &str) -> Result<usize> {
    sp.find(label).ok_or_else(|| Error(format!("unknown basis element {:?} in {}", label, what)))
}

fn arity(key: &str, what: &str) -> Result<usize> {
    match key.parse::<usize>() {
        Ok(n) if n > 0 => Ok(n),
        _ => err(format!("bad arity {:?} in {}", key, what)),
    }
}

pub fn space(nidem: usize, basis: &[GenData], bimodule: bool, what: &str) -> Result<Arc<Space>> {
    let mut gens = Vec::new();
    for g in basis {
        if g.tgt.is_some() != bimodule {
            let need = if bimodule { "needs" } else { "must not have" };
            return err(format!("{}: basis element {:?} {} a target idempotent", what, g.label, need));
        }
        gens.push(Gen { label: g.label.clone(), deg: g.deg, src: g.src, tgt: g.tgt });
    }
    Ok(Arc::new(ctx(Space::new(nidem, gens), what)?))
}

fn tmap(field: Field, deg: i64, dom: Vec<Arc<Space>>, cod: Arc<Space>, entries: &[MapEntry], what: &str) -> Result<TMap> {
    let mut t = TMap::zero(field, deg, dom.clone(), vec![cod.clone()]);
    for MapEntry(ins, out, c) in entries {
        if ins.len() != dom.len() {
            return err(format!("{}: entry {:?} has {} inputs, expected {}", what, ins, ins.len(), dom.len()));
        }
        let mut w = Vec::new();
        for (sp, l) in dom.iter().zip(ins) {
            w.push(find(sp, l, what)? as u32);
        }
        let o = find(&cod, out, what)? as u32;
        t.add_entry(w, vec![o], &coeff(field, c)?);
    }
    ctx(t.validate(), what)?;
    Ok(t)
}

fn family(
    fam: &Family,
    what: &str,
    mut build: impl FnMut(usize, &[MapEntry], &str) -> Result<TMap>,
) -> Result<BTreeMap<usize, TMap>> {
    let mut out = BTreeMap::new();
    for (k, entries) in fam {
        let n = arity(k, what)?;
        let w = format!("{} arity {}", what, n);
        out.insert(n, build(n, entries, &w)?);
    }
    Ok(out)
}

fn mat(field: Field, rows: &Space, cols: &Space, entries: &[MatEntry], what: &str) -> Result<Mat> {
    let mut m = Mat::zeros(field, rows.len(), cols.len());
    for MatEntry(r, c, v) in entries {
        m.add_at(find(rows, r, what)?, find(cols, c, what)?, &coeff(field, v)?);
    }
    Ok(m)
}

fn gmorph(
    bocs: &Arc<Bocs>,
    dom: &Arc<Space>,
    cod: &Arc<Space>,
    deg: i64,
    f0: &[MatEntry],
    f1: &BTreeMap<String, Vec<MatEntry>>,
    what: &str,
) -> Result<GMorph> {
    let field = bocs.field;
    let mut g = GMorph::zero(bocs.clone(), dom.clone(), cod.clone(), deg);
    g.f0 = mat(field, cod, dom, f0, what)?;
    for (label, entries) in f1 {
        let c = bocs.find(label).ok_or_else(|| Error(format!("{}: unknown bocs element {:?}", what, label)))?;
        g.f1[c] = mat(field, cod, dom, entries, what)?;
    }
    ctx(g.validate(), what)?;
    Ok(g)
}

fn vector(field: Field, b: &Bocs, entries: &[VecEntry], what: &str) -> Result<Vector> {
    let mut v = Vector::new();
    for VecEntry(l, c) in entries {
        let i = b.find(l).ok_or_else(|| Error(format!("{}: unknown bocs element {:?}", what, l)))?;
        ainf_core::linalg::sv_add(&mut v, i, &coeff(field, c)?);
    }
    Ok(v)
}

fn bocs_map(src: &Arc<Bocs>, tgt: &Arc<Bocs>, deg: i64, map: &BTreeMap<String, Vec<VecEntry>>, what: &str) -> Result<BocsMap> {
    let mut psi = BocsMap::zero(src.clone(), tgt.clone(), deg);
    for (label, entries) in map {
        let i = src.find(label).ok_or_else(|| Error(format!("{}: unknown bocs element {:?}", what, label)))?;
        psi.map[i] = vector(src.field, tgt, entries, what)?;
    }
    Ok(psi)
}

fn explicit_bocs(field: Field, nidem: usize, d: &BocsData, what: &str) -> Result<Bocs> {
    let basis: Vec<BGen> = d
        .basis
        .iter()
        .map(|g| BGen { label: g.label.clone(), deg: g.deg, src: g.src, tgt: g.tgt, layer: g.layer })
        .collect();
    let index: BTreeMap<&str, usize> = basis.iter().enumerate().map(|(i, g)| (g.label.as_str(), i)).collect();
    let idx = |l: &str| index.get(l).copied().ok_or_else(|| Error(format!("{}: unknown bocs element {:?}", what, l)));
    let mut comult = vec![Vec::new(); basis.len()];
    for (l, terms) in &d.comult {
        let i = idx(l)?;
        for PairEntry(x, y, c) in terms {
            comult[i].push((idx(x)?, idx(y)?, coeff(field, c)?));
        }
    }
    let mut delta = vec![Vector::new(); basis.len()];
    for (l, terms) in &d.delta {
        let i = idx(l)?;
        for VecEntry(x, c) in terms {
            ainf_core::linalg::sv_add(&mut delta[i], idx(x)?, &coeff(field, c)?);
        }
    }
    ctx(Bocs::new(field, nidem, basis, comult, delta), what)
}

impl Workspace {
    pub fn parse(text: &str, field_override: Option<Field>) -> Result<Workspace> {
        let mut doc: Document = serde_json::from_str(text)?;
        if let Some(f) = field_override {
            doc.field = f.to_string();
        }
        Workspace::load(doc)
    }

    pub fn load(doc: Document) -> Result<Workspace> {
        if doc.format != FORMAT_VERSION {
            return err(format!("unsupported format version {}", doc.format));
        }
        let field: Field = doc.field.parse()?;
        let nidem = doc.idempotents;
        if nidem == 0 {
            return err("at least one idempotent is required");
        }
        let mut names = doc.names();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return err(format!("name {:?} is declared twice", w[0]));
        }
        let mut ws = Workspace {
            doc: doc.clone(),
            field,
            algebras: BTreeMap::new(),
            modules: BTreeMap::new(),
            alg_morphisms: BTreeMap::new(),
            alg_homotopies: BTreeMap::new(),
            mod_morphisms: BTreeMap::new(),
            mod_homotopies: BTreeMap::new(),
            bocses: BTreeMap::new(),
            bocs_maps: BTreeMap::new(),
            bocs_homotopies: BTreeMap::new(),
            spaces: BTreeMap::new(),
            twisted: BTreeMap::new(),
            gmorphs: BTreeMap::new(),
            twisted_homotopies: BTreeMap::new(),
        };

        for (name, d) in &doc.algebras {
            let what = format!("algebra {}", name);
            let sp = space(nidem, &d.basis, true, &what)?;
            let mut a = ctx(AInfAlgebra::new(field, sp.clone(), d.bound), &what)?;
            let ops = family(&d.ops, &what, |n, e, w| tmap(field, 2 - n as i64, vec![sp.clone(); n], sp.clone(), e, w))?;
            for (n, op) in ops {
                ctx(a.set_op(n, op), &what)?;
            }
            ws.algebras.insert(name.clone(), Arc::new(a));
        }

        for (name, d) in &doc.modules {
            let what = format!("module {}", name);
            let a = lookup(&ws.algebras, &d.algebra, "algebra")?.clone();
            let sp = space(nidem, &d.basis, false, &what)?;
            let mut m = ctx(AInfModule::new(a, sp.clone(), d.bound), &what)?;
            let ops = family(&d.ops, &what, |n, e, w| tmap(field, 2 - n as i64, m.dom(n), sp.clone(), e, w))?;
            for (n, op) in ops {
                ctx(m.set_op(n, op), &what)?;
            }
            ws.modules.insert(name.clone(), Arc::new(m));
        }

        for (name, d) in &doc.alg_morphisms {
            let what = format!("algebra morphism {}", name);
            let src = lookup(&ws.algebras, &d.source, "algebra")?.clone();
            let tgt = lookup(&ws.algebras, &d.target, "algebra")?.clone();
            let mut f = AlgMorphism::new(src.clone(), tgt.clone());
            let comps = family(&d.comps, &what, |n, e, w| tmap(field, 1 - n as i64, src.dom(n), tgt.space.clone(), e, w))?;
            for (n, c) in comps {
                ctx(f.set_comp(n, c), &what)?;
            }
            ws.alg_morphisms.insert(name.clone(), f);
        }

        for (name, d) in &doc.alg_homotopies {
            let what = format!("algebra homotopy {}", name);
            let f = lookup(&ws.alg_morphisms, &d.f, "algebra morphism")?;
            let g = lookup(&ws.alg_morphisms, &d.g, "algebra morphism")?;
            if f.src.space != g.src.space || f.tgt.space != g.tgt.space {
                return err(format!("{}: {} and {} have different endpoints", what, d.f, d.g));
            }
            let comps = family(&d.comps, &what, |n, e, w| tmap(field, -(n as i64), f.src.dom(n), f.tgt.space.clone(), e, w))?;
            let comps = comps.into_iter().filter(|(_, c)| !c.is_zero()).collect();
            ws.alg_homotopies.insert(name.clone(), AlgHomotopy { comps });
        }

        for (name, d) in &doc.mod_morphisms {
            let what = format!("module morphism {}", name);
            let src = lookup(&ws.modules, &d.source, "module")?.clone();
            let tgt = lookup(&ws.modules, &d.target, "module")?.clone();
            let f = mod_morphism(field, src, tgt, d.degree, &d.comps, &what)?;
            ws.mod_morphisms.insert(name.clone(), f);
        }

        for (name, d) in &doc.mod_homotopies {
            let what = format!("module homotopy {}", name);
            let f = lookup(&ws.mod_morphisms, &d.f, "module morphism")?;
            let g = lookup(&ws.mod_morphisms, &d.g, "module morphism")?;
            if f.src != g.src || f.tgt != g.tgt || f.deg != g.deg {
                return err(format!("{}: {} and {} are not parallel", what, d.f, d.g));
            }
            let h = mod_morphism(field, f.src.clone(), f.tgt.clone(), f.deg - 1, &d.comps, &what)?;
            ws.mod_homotopies.insert(name.clone(), h);
        }

        for (name, d) in &doc.bocses {
            let what = format!("bocs {}", name);
            let b = match &d.bar {
                Some(r) => {
                    let a = lookup(&ws.algebras, &r.algebra, "algebra")?.clone();
                    let b = ctx(bar_construct(a, r.level), &what)?;
                    if !d.basis.is_empty() || !d.comult.is_empty() || !d.delta.is_empty() {
                        let mut written = d.clone();
                        written.bar = None;
                        let mut built = bocs_data(&b, None);
                        built.bar = None;
                        if written != built {
                            return err(format!("{}: explicit data disagrees with the bar construction", what));
                        }
                    }
                    b
                }
                None => explicit_bocs(field, nidem, d, &what)?,
            };
            if b.nidem != nidem {
                return err(format!("{}: idempotent count mismatch", what));
            }
            ws.bocses.insert(name.clone(), Arc::new(b));
        }

        for (name, d) in &doc.bocs_maps {
            let what = format!("bocs map {}", name);
            let src = lookup(&ws.bocses, &d.source, "bocs")?;
            let tgt = lookup(&ws.bocses, &d.target, "bocs")?;
            ws.bocs_maps.insert(name.clone(), bocs_map(src, tgt, d.degree, &d.map, &what)?);
        }

        for (name, d) in &doc.bocs_homotopies {
            let what = format!("bocs homotopy {}", name);
            let phi = lookup(&ws.bocs_maps, &d.phi, "bocs map")?;
            let psi = lookup(&ws.bocs_maps, &d.psi, "bocs map")?;
            if *phi.src != *psi.src || *phi.tgt != *psi.tgt {
                return err(format!("{}: {} and {} are not parallel", what, d.phi, d.psi));
            }
            let h = bocs_map(&phi.src, &phi.tgt, phi.deg - 1, &d.map, &what)?;
            ws.bocs_homotopies.insert(name.clone(), h);
        }

        for (name, basis) in &doc.spaces {
            ws.spaces.insert(name.clone(), space(nidem, basis, false, &format!("space {}", name))?);
        }

        for (name, d) in &doc.twisted {
            let what = format!("twisted module {}", name);
            let b = lookup(&ws.bocses, &d.bocs, "bocs")?;
            let sp = space(nidem, &d.basis, false, &what)?;
            let u = gmorph(b, &sp, &sp, 1, &d.u.f0, &d.u.f1, &what)?;
            ws.twisted.insert(name.clone(), ctx(TwMod::new(u), &what)?);
        }

        for (name, d) in &doc.gmorphs {
            let what = format!("morphism {}", name);
            let b = lookup(&ws.bocses, &d.bocs, "bocs")?;
            let dom = ws.object_space(&d.source)?;
            let cod = ws.object_space(&d.target)?;
            let g = gmorph(b, &dom, &cod, d.degree, &d.f0, &d.f1, &what)?;
            ws.gmorphs.insert(name.clone(), g);
        }

        for (name, d) in &doc.twisted_homotopies {
            let what = format!("homotopy {}", name);
            let f = lookup(&ws.gmorphs, &d.f, "morphism")?;
            let g = lookup(&ws.gmorphs, &d.g, "morphism")?;
            let (df, dg) = (&doc.gmorphs[&d.f], &doc.gmorphs[&d.g]);
            if df.source != dg.source || df.target != dg.target || df.bocs != dg.bocs || f.deg != g.deg {
                return err(format!("{}: {} and {} are not parallel", what, d.f, d.g));
            }
            let h = gmorph(&f.bocs, &f.dom, &f.cod, f.deg - 1, &d.f0, &d.f1, &what)?;
            ws.twisted_homotopies.insert(name.clone(), h);
        }

        Ok(ws)
    }

    /// The underlying space of a twisted module or a plain space.
    pub fn object_space(&self, name: &str) -> Result<Arc<Space>> {
        if let Some(t) = self.twisted.get(name) {
            return Ok(t.space.clone());
        }
        if let Some(s) = self.spaces.get(name) {
            return Ok(s.clone());
        }
        err(format!("unknown twisted module or space {:?}", name))
    }

    /// Source and target twisted modules of a morphism, when both are twisted.
    pub fn endpoints(&self, gmorph: &str) -> Result<(&TwMod, &TwMod)> {
        let d = lookup(&self.doc.gmorphs, gmorph, "morphism")?;
        let src = lookup(&self.twisted, &d.source, "twisted module")?;
        let tgt = lookup(&self.twisted, &d.target, "twisted module")?;
        Ok((src, tgt))
    }
}

fn mod_morphism(field: Field, src: Arc<AInfModule>, tgt: Arc<AInfModule>, deg: i64, fam: &Family, what: &str) -> Result<ModMorphism> {
    if src.alg != tgt.alg {
        return err(format!("{}: modules over different algebras", what));
    }
    let mut f = ModMorphism::new(src.clone(), tgt.clone(), deg);
    let comps = family(fam, what, |n, e, w| tmap(field, deg + 1 - n as i64, src.dom(n), tgt.space.clone(), e, w))?;
    for (n, c) in comps {
        ctx(f.set_comp(n, c), what)?;
    }
    Ok(f)
}

// Writing structures back.

pub fn scalar_text(s: &Scalar) -> Coeff {
    Coeff::Text(s.short())
}

pub fn basis_data(sp: &Space) -> Vec<GenData> {
    sp.gens().iter().map(|g| GenData { label: g.label.clone(), deg: g.deg, src: g.src, tgt: g.tgt }).collect()
}

pub fn family_data<'a>(maps: impl IntoIterator<Item = (&'a usize, &'a TMap)>) -> Family {
    let mut fam = Family::new();
    for (n, t) in maps {
        if t.is_zero() {
            continue;
        }
        let entries = t
            .entries()
            .map(|(w, o, v)| {
                let ins = w.iter().enumerate().map(|(i, &x)| t.dom[i].gen(x as usize).label.clone()).collect();
                MapEntry(ins, t.cod[0].gen(o[0] as usize).label.clone(), scalar_text(v))
            })
            .collect();
        fam.insert(n.to_string(), entries);
    }
    fam
}

fn mat_data(m: &Mat, rows: &Space, cols: &Space) -> Vec<MatEntry> {
    m.data
        .iter()
        .filter(|(_, v)| !v.is_zero())
        .map(|(&(i, j), v)| MatEntry(rows.gen(i).label.clone(), cols.gen(j).label.clone(), scalar_text(v)))
        .collect()
}

pub fn components(g: &GMorph) -> Components {
    let mut f1 = BTreeMap::new();
    for (c, m) in g.f1.iter().enumerate() {
        if !m.is_zero() {
            f1.insert(g.bocs.gen(c).label.clone(), mat_data(m, &g.cod, &g.dom));
        }
    }
    Components { f0: mat_data(&g.f0, &g.cod, &g.dom), f1 }
}

pub fn algebra_data(a: &AInfAlgebra) -> AlgebraData {
    AlgebraData { bound: a.bound, basis: basis_data(&a.space), ops: family_data(a.ops()) }
}

pub fn module_data(m: &AInfModule, algebra: &str) -> ModuleData {
    ModuleData { algebra: algebra.into(), bound: m.bound, basis: basis_data(&m.space), ops: family_data(m.ops()) }
}

pub fn mod_morphism_data(f: &ModMorphism, source: &str, target: &str, upto: Option<usize>) -> ModMorphismData {
    ModMorphismData { source: source.into(), target: target.into(), degree: f.deg, upto, comps: family_data(&f.comps) }
}

pub fn bocs_data(b: &Bocs, bar: Option<BarRef>) -> BocsData {
    let basis = b
        .basis()
        .iter()
        .map(|g| BocsGenData { label: g.label.clone(), deg: g.deg, src: g.src, tgt: g.tgt, layer: g.layer })
        .collect();
    let label = |i: usize| b.gen(i).label.clone();
    let mut comult = BTreeMap::new();
    let mut delta = BTreeMap::new();
    for i in 0..b.len() {
        if !b.comult(i).is_empty() {
            comult.insert(label(i), b.comult(i).iter().map(|(x, y, v)| PairEntry(label(*x), label(*y), scalar_text(v))).collect());
        }
        if !b.delta(i).is_empty() {
            delta.insert(label(i), b.delta(i).iter().map(|(x, v)| VecEntry(label(*x), scalar_text(v))).collect());
        }
    }
    BocsData { bar, basis, comult, delta }
}

pub fn twisted_data(m: &TwMod, bocs: &str) -> TwistedData {
    TwistedData { bocs: bocs.into(), basis: basis_data(&m.space), u: components(&m.u) }
}

pub fn gmorph_data(g: &GMorph, bocs: &str, source: &str, target: &str) -> GMorphData {
    let c = components(g);
    GMorphData { bocs: bocs.into(), source: source.into(), target: target.into(), degree: g.deg, f0: c.f0, f1: c.f1 }
}

pub fn twisted_homotopy_data(h: &GMorph, f: &str, g: &str) -> TwistedHomotopyData {
    let c = components(h);
    TwistedHomotopyData { f: f.into(), g: g.into(), f0: c.f0, f1: c.f1 }
}
