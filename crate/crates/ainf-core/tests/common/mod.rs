#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use ainf_core::ainfmod::{self, AInfModule, ModMorphism};
use ainf_core::ainfty::{self, AInfAlgebra, AlgHomotopy, AlgMorphism};
use ainf_core::bocs::{self, bar_construct, Bocs};
use ainf_core::check::CheckResult;
use ainf_core::gmodb::{self, GMorph};
use ainf_core::graded::{Gen, Space, TMap};
use ainf_core::linalg::Mat;
use ainf_core::oracles::{self, brute, AlgOpts, Rng, WAlg, WMod};
use ainf_core::twisted::{self, TwMod};
use ainf_core::{Field, Result};

pub const Q: Field = Field::Q;

pub fn small() -> AlgOpts {
    AlgOpts { max_dim: 4, ..AlgOpts::default() }
}

pub fn bar(a: &WAlg, level: usize) -> Arc<Bocs> {
    Arc::new(bar_construct(a.alg.clone(), level).expect("bar construction"))
}

pub fn ok(r: &CheckResult) -> bool {
    r.passed()
}

pub fn zero(src: &TwMod, tgt: &TwMod, deg: i64) -> GMorph {
    GMorph::zero(src.bocs().clone(), src.space.clone(), tgt.space.clone(), deg)
}

/// An algebra on the space of `a` with random operations, usually violating
/// every identity.
pub fn noisy_algebra(rng: &mut Rng, a: &WAlg) -> WAlg {
    let mut b = AInfAlgebra::new(a.alg.field, a.alg.space.clone(), 3).expect("algebra");
    for (n, t) in oracles::random_alg_family(rng, a, a, 1, 1, 3, 0.4) {
        b.set_op(n, t).expect("degree");
    }
    WAlg { alg: Arc::new(b), weight: a.weight.clone() }
}

/// A module on the space of `m` with random operations.
pub fn noisy_module(rng: &mut Rng, a: &WAlg, m: &WMod) -> WMod {
    let cap = oracles::arity_cap(m);
    let mut n = AInfModule::new(a.alg.clone(), m.module.space.clone(), cap).expect("module");
    for (k, t) in oracles::random_mod_family(rng, a, m, m, 1, 1, cap, 0.4) {
        n.set_op(k, t).expect("degree");
    }
    WMod { module: Arc::new(n), weight: m.weight.clone() }
}

pub fn random_mod_morphism(rng: &mut Rng, a: &WAlg, m: &WMod, n: &WMod, deg: i64, density: f64) -> ModMorphism {
    let comps = oracles::random_mod_family(rng, a, m, n, deg, 1, oracles::arity_cap(m), density);
    ModMorphism { src: m.module.clone(), tgt: n.module.clone(), deg, comps }
}

pub fn random_alg_map(rng: &mut Rng, a: &WAlg, b: &WAlg, deg: i64) -> BTreeMap<usize, TMap> {
    oracles::random_alg_family(rng, a, b, deg, 1, 3, 0.5)
}

fn alg_morphism_from(src: &WAlg, tgt: &WAlg, comps: BTreeMap<usize, TMap>) -> AlgMorphism {
    let mut f = AlgMorphism::new(src.alg.clone(), tgt.alg.clone());
    for (n, c) in comps {
        f.set_comp(n, c).expect("degree");
    }
    f
}

fn same_family(top: usize, engine: impl Fn(usize) -> TMap, oracle: impl Fn(usize) -> TMap) -> bool {
    (1..=top).all(|n| engine(n) == oracle(n))
}

/// Every identity family evaluated by the engine and by the brute force
/// oracle on instances drawn from `seed`. Returns one flag per family.
pub fn dual_path(seed: u64) -> Result<Vec<(&'static str, bool)>> {
    let mut rng = oracles::rng(seed);
    let r = &mut rng;
    let mut out = Vec::new();
    let (b, a, phi) = oracles::gen_algebra_pair(r, Q, small())?;
    let noisy = noisy_algebra(r, &a);
    let top = 2 * b.alg.bound;

    for alg in [&b.alg, &noisy.alg] {
        out.push(("stasheff", same_family(top, |n| ainfty::stasheff_defect(alg, n), |n| brute::stasheff(alg, n, false))));
        out.push(("stasheff-translated", same_family(top, |n| ainfty::translated_defect(alg, n), |n| brute::stasheff(alg, n, true))));
    }

    let rough = alg_morphism_from(&b, &a, random_alg_map(r, &b, &a, 0));
    for f in [&phi, &rough] {
        out.push(("alg-morphism", same_family(top, |n| ainfty::morphism_defect(f, n), |n| brute::alg_morphism(f, n))));
    }
    let h = AlgHomotopy { comps: random_alg_map(r, &b, &a, -1) };
    let g = alg_morphism_from(&b, &a, random_alg_map(r, &b, &a, 0));
    out.push(("alg-homotopy", same_family(top, |n| ainfty::alg_homotopy_defect(&h, &phi, &g, n), |n| brute::alg_homotopy(&h, &phi, &g, n))));

    let m = oracles::gen_module(r, &a, false)?;
    let n = oracles::gen_module(r, &a, false)?;
    let p = oracles::gen_module(r, &a, false)?;
    let wild = noisy_module(r, &a, &m);
    let mtop = 2 * m.module.bound.max(wild.module.bound);
    for x in [&m.module, &wild.module] {
        out.push(("module", same_family(mtop, |k| ainfmod::module_defect(x, k), |k| brute::module(x, k))));
        out.push(("module-dg", same_family(mtop, |k| ainfmod::module_defect_dg(x, k), |k| brute::module(x, k))));
    }

    let d1 = [-1, 0, 1][(seed % 3) as usize];
    let f = random_mod_morphism(r, &a, &m, &n, d1, 0.4);
    let g = random_mod_morphism(r, &a, &n, &p, 0, 0.4);
    let ctop = 6;
    let gf = ainfmod::compose_mod(&g, &f)?;
    out.push(("compose-mod", same_family(ctop, |k| gf.comp(k), |k| brute::compose_mod(&g, &f, k))));
    let df = ainfmod::delta_inf(&f);
    out.push(("delta-inf", same_family(ctop, |k| df.comp(k), |k| brute::delta_inf_mod(&f, k))));
    let dd = ainfmod::mod_differential(&f)?;
    out.push(("mod-differential", same_family(ctop, |k| dd.comp(k), |k| brute::mod_differential(&f, k))));
    let hm = random_mod_morphism(r, &a, &m, &n, -1, 0.4);
    out.push(("mod-homotopy", same_family(ctop, |k| ainfmod::homotopy_sums(&hm, k), |k| brute::mod_homotopy_sums(&hm, k))));

    let level = 3;
    let ba = bar(&a, level);
    let bb = bar(&b, level);
    out.push(("bar-differential", (0..ba.len()).all(|i| ba.delta(i) == &brute::bar_differential(&ba)[i])));
    out.push(("bridge", ainfmod::to_gmorph_truncated(&f, &ba)? == brute::bridge(&f, &ba)));
    out.push(("bridge", ainfmod::to_gmorph_truncated(&ModMorphism::operations(m.module.clone()), &ba)? == brute::bridge(&ModMorphism::operations(m.module.clone()), &ba)));

    out.push(("psi", bocs::psi_of_morphism(&phi, bb.clone(), ba.clone())? == brute::coderivation(None, 0, &phi, &phi, &bb, &ba)));
    out.push(("psi", bocs::psi_of_morphism(&rough, bb.clone(), ba.clone())? == brute::coderivation(None, 0, &rough, &rough, &bb, &ba)));
    let gg = alg_morphism_from(&b, &a, random_alg_map(r, &b, &a, 0));
    out.push((
        "coderivation",
        bocs::delta_coderivation(&h, -1, &phi, &gg, bb.clone(), ba.clone())? == brute::coderivation(Some(&h), -1, &phi, &gg, &bb, &ba),
    ));

    let s1 = oracles::random_space(r, ba.nidem, 3, "p");
    let s2 = oracles::random_space(r, ba.nidem, 3, "q");
    let s3 = oracles::random_space(r, ba.nidem, 2, "s");
    let x = oracles::random_gmorph(r, &ba, &s1, &s2, d1, 0.5);
    let y = oracles::random_gmorph(r, &ba, &s2, &s3, 1 - d1, 0.5);
    out.push(("compose", gmodb::compose(&y, &x)? == brute::compose(&y, &x)));
    out.push(("hat-delta", gmodb::hat_delta(&x) == brute::hat_delta(&x)));
    let u = oracles::random_gmorph(r, &ba, &s1, &s1, 1, 0.5);
    out.push(("mc", twisted::mc_defect(&u)? == brute::mc(&u)));
    let tm = oracles::gen_twisted(r, &a, &ba, false)?;
    let tn = oracles::gen_twisted(r, &a, &ba, false)?;
    let k = oracles::random_gmorph(r, &ba, &tm.space, &tn.space, d1, 0.5);
    out.push(("twisted-differential", twisted::differential(&k, &tm, &tn)? == brute::twisted_differential(&k, &tm.u, &tn.u)));
    out.push(("mc", twisted::mc_defect(&tm.u)? == brute::mc(&tm.u)));
    Ok(out)
}

pub fn bimod(nidem: usize, gens: &[(&str, i64, usize, usize)]) -> Arc<Space> {
    let gens = gens.iter().map(|&(l, d, s, t)| Gen { label: l.into(), deg: d, src: s, tgt: Some(t) }).collect();
    Arc::new(Space::new(nidem, gens).expect("space"))
}

pub fn rmod(nidem: usize, gens: &[(&str, i64, usize)]) -> Arc<Space> {
    let gens = gens.iter().map(|&(l, d, s)| Gen { label: l.into(), deg: d, src: s, tgt: None }).collect();
    Arc::new(Space::new(nidem, gens).expect("space"))
}

/// `k[x]/(x^2)` on the basis `e, x` in degree 0, with `e x = c x`. It is
/// associative exactly when `c = 1`.
pub fn dual_numbers(c: i64) -> AInfAlgebra {
    let sp = bimod(1, &[("e", 0, 0, 0), ("x", 0, 0, 0)]);
    let mut a = AInfAlgebra::new(Q, sp.clone(), 2).expect("algebra");
    let m2 = TMap::from_entries(
        Q,
        0,
        vec![sp.clone(), sp.clone()],
        sp,
        [(vec![0, 0], 0, Q.one()), (vec![0, 1], 1, Q.int(c)), (vec![1, 0], 1, Q.one())],
    );
    a.set_op(2, m2).expect("degree");
    a
}

/// The complex `k -> k` in degrees 0 and 1 with the identity differential.
pub fn two_term(bocs: &Arc<Bocs>) -> TwMod {
    let sp = rmod(bocs.nidem, &[("p", 0, 0), ("q", 1, 0)]);
    let mut u = GMorph::zero(bocs.clone(), sp.clone(), sp, 1);
    u.f0.set(1, 0, Q.one());
    TwMod::new(u).expect("twisted module")
}

pub fn mat(rows: usize, cols: usize, entries: &[(usize, usize, i64)]) -> Mat {
    let mut m = Mat::zeros(Q, rows, cols);
    for &(i, j, v) in entries {
        m.set(i, j, Q.int(v));
    }
    m
}
