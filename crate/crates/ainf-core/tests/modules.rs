mod common;

use std::sync::Arc;

use ainf_core::ainfmod::{self, AInfModule, ModMorphism};
use ainf_core::ainfty::AlgMorphism;
use ainf_core::gmodb::GMorph;
use ainf_core::graded::{self, TMap};
use ainf_core::oracles::{self, WAlg};
use ainf_core::twisted::{self, check_mc};
use common::*;

/// The module `k^2` over the dual numbers with `u x = v`, `v x = 0` and `e`
/// acting by `c` on `u`.
fn action_module(c: i64) -> AInfModule {
    let a = Arc::new(dual_numbers(1));
    let sp = rmod(1, &[("u", 0, 0), ("v", 0, 0)]);
    let mut m = AInfModule::new(a.clone(), sp.clone(), 2).unwrap();
    let op = TMap::from_entries(
        Q,
        0,
        m.dom(2),
        sp,
        [(vec![0, 0], 0, Q.int(c)), (vec![1, 0], 1, Q.one()), (vec![0, 1], 1, Q.one())],
    );
    m.set_op(2, op).unwrap();
    m
}

#[test]
fn zero_module_operations_pass() {
    let a = Arc::new(dual_numbers(1));
    let m = AInfModule::new(a, rmod(1, &[("u", 0, 0), ("v", 2, 0)]), 4).unwrap();
    assert!(ainfmod::check_module_all(&m).passed());
}

#[test]
fn first_identity_is_square_zero() {
    let a = Arc::new(dual_numbers(1));
    let sp = rmod(1, &[("u", 0, 0), ("v", 1, 0), ("w", 2, 0)]);
    for chain in [false, true] {
        let mut m = AInfModule::new(a.clone(), sp.clone(), 1).unwrap();
        let mut entries = vec![(vec![0], 1, Q.one())];
        if chain {
            entries.push((vec![1], 2, Q.one()));
        }
        let m1 = TMap::from_entries(Q, 1, m.dom(1), sp.clone(), entries);
        m.set_op(1, m1.clone()).unwrap();
        assert_eq!(ainfmod::module_defect(&m, 1), TMap::compose(&m1, &m1));
        assert_eq!(ainfmod::check_module(&m, 1).passed(), !chain);
    }
}

#[test]
fn third_identity_is_associativity_of_the_action() {
    for c in [1, 3] {
        let m = action_module(c);
        let act = m.op(2);
        let id_m = TMap::identity(Q, vec![m.space.clone()]);
        let id_a = TMap::identity(Q, vec![m.alg.space.clone()]);
        let left = TMap::compose(&act, &TMap::tensor(&act, &id_a));
        let right = TMap::compose(&act, &TMap::tensor(&id_m, &m.alg.op(2)));
        let assoc = left.sub(&right);
        assert_eq!(assoc.is_zero(), c == 1);
        let d = ainfmod::module_defect(&m, 3);
        assert!(d == assoc || d == assoc.neg());
        assert_eq!(ainfmod::check_module_all(&m).passed(), c == 1);
    }
}

fn sample(seed: u64) -> (WAlg, oracles::WMod, oracles::WMod, oracles::Rng) {
    let mut rng = oracles::rng(seed);
    let a = oracles::gen_algebra(&mut rng, Q, small()).unwrap();
    let m = oracles::gen_module(&mut rng, &a, false).unwrap();
    let n = oracles::gen_module(&mut rng, &a, false).unwrap();
    (a, m, n, rng)
}

#[test]
fn composition_first_component_and_units() {
    for seed in 0..10 {
        let (a, m, n, mut rng) = sample(seed);
        let f = random_mod_morphism(&mut rng, &a, &m, &n, 0, 0.5);
        let g = random_mod_morphism(&mut rng, &a, &n, &m, 1, 0.5);
        let gf = ainfmod::compose_mod(&g, &f).unwrap();
        assert_eq!(gf.comp(1), TMap::compose(&g.comp(1), &f.comp(1)));
        let id_m = ModMorphism::identity(m.module.clone());
        let id_n = ModMorphism::identity(n.module.clone());
        assert_eq!(ainfmod::compose_mod(&f, &id_m).unwrap().comps, f.comps);
        assert_eq!(ainfmod::compose_mod(&id_n, &f).unwrap().comps, f.comps);
        assert!(ainfmod::delta_inf(&id_m).is_zero());
    }
}

#[test]
fn bridge_of_identity_is_identity() {
    for seed in 0..10 {
        let (a, m, _, _) = sample(seed);
        let b = bar(&a, 3);
        let g = ainfmod::to_gmorph(&ModMorphism::identity(m.module.clone()), &b).unwrap();
        assert_eq!(g, GMorph::identity(b.clone(), m.module.shifted.clone()));
    }
}

#[test]
fn complexes_become_strict_twisted_modules() {
    for seed in 0..10 {
        let mut rng = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut rng, Q, small()).unwrap();
        let c = oracles::gen_complex(&mut rng, &a, 3, false).unwrap();
        let b = bar(&a, 3);
        let t = ainfmod::to_twisted(&c.module, &b).unwrap();
        assert!(t.u.is_strict());
        assert_eq!(t.u.f0, graded::to_mat(&c.module.op(1)));
        assert!(check_mc(&t).passed());
    }
}

#[test]
fn module_identities_match_maurer_cartan() {
    let mut good = 0;
    let mut bad = 0;
    for seed in 0..20 {
        let (a, m, _, mut rng) = sample(seed);
        let wild = noisy_module(&mut rng, &a, &m);
        let b = bar(&a, 4);
        for x in [&m.module, &wild.module] {
            let t = ainfmod::to_twisted(x, &b).unwrap();
            let module_ok = (1..=4).all(|n| ainfmod::check_module(x, n).passed());
            assert_eq!(module_ok, check_mc(&t).passed(), "seed {}", seed);
            if module_ok {
                good += 1;
            } else {
                bad += 1;
            }
        }
    }
    assert!(good >= 20 && bad > 0);
}

#[test]
fn round_trip_through_twisted_modules() {
    for seed in 0..10 {
        let (a, m, _, _) = sample(seed);
        let b = bar(&a, 4);
        let t = ainfmod::to_twisted(&m.module, &b).unwrap();
        let back = ainfmod::from_twisted(&t, a.alg.clone(), m.module.space.clone()).unwrap();
        assert!((1..=5).all(|n| back.op(n) == m.module.op(n)));
    }
}

#[test]
fn shifted_first_operation() {
    for seed in 0..10 {
        let (_, m, _, _) = sample(seed);
        let t = ainfmod::shift_mod(&m.module).unwrap();
        assert_eq!(t.op(1).table, m.module.op(1).neg().table);
        assert_eq!(t.op(2).table, m.module.op(2).table);
        assert!(ainfmod::check_module_all(&t).passed());
        let j = ainfmod::jfun_mod(&m.module).unwrap();
        assert!(ainfmod::check_module_all(&j).passed());
        assert!(ainfmod::mod_homology(&j).unwrap().is_empty());
    }
    let a = Arc::new(dual_numbers(1));
    let z = AInfModule::new(a, rmod(1, &[]), 2).unwrap();
    let t = ainfmod::shift_mod(&z).unwrap();
    assert!(t.space.is_empty() && t.op(1).is_zero());
}

#[test]
fn bridge_commutes_with_shift_and_j() {
    for seed in 0..10 {
        let (a, m, _, _) = sample(seed);
        let b = bar(&a, 3);
        let gm = ainfmod::to_twisted(&m.module, &b).unwrap();
        let shifted = ainfmod::to_twisted(&Arc::new(ainfmod::shift_mod(&m.module).unwrap()), &b).unwrap();
        let expect = twisted::shift(&gm);
        assert_eq!((&shifted.u.f0, &shifted.u.f1), (&expect.u.f0, &expect.u.f1));
        let jm = ainfmod::to_twisted(&Arc::new(ainfmod::jfun_mod(&m.module).unwrap()), &b).unwrap();
        let expect = twisted::jfun(&gm).unwrap().j;
        assert_eq!((&jm.u.f0, &jm.u.f1), (&expect.u.f0, &expect.u.f1), "seed {}", seed);
    }
}

#[test]
fn restriction_along_identity() {
    for seed in 0..10 {
        let (a, m, n, mut rng) = sample(seed);
        let id = AlgMorphism::identity(a.alg.clone());
        let r = ainfmod::restrict_module(&id, &m.module).unwrap();
        assert!((1..=6).all(|k| r.op(k) == m.module.op(k)));
        let f = random_mod_morphism(&mut rng, &a, &m, &n, 0, 0.5);
        let rf = ainfmod::restrict_mod_morphism(&id, &f, m.module.clone(), n.module.clone()).unwrap();
        assert_eq!(rf.comps, f.comps);
    }
}

#[test]
fn homology_of_a_complex_module() {
    let a = Arc::new(dual_numbers(1));
    let sp = rmod(1, &[("p", 0, 0), ("q", 1, 0), ("r", 1, 0)]);
    let mut m = AInfModule::new(a, sp.clone(), 1).unwrap();
    m.set_op(1, TMap::from_entries(Q, 1, m.dom(1), sp, [(vec![0], 1, Q.one())])).unwrap();
    let h = ainfmod::mod_homology(&m).unwrap();
    assert_eq!(h.into_iter().collect::<Vec<_>>(), vec![((1, 0), 1)]);
}

#[test]
fn degree_zero_composition_sign() {
    // with |f| = 0 the general sign (|f|+r+1)s is the classical (r+1)s
    let mut nonzero = 0;
    for seed in 0..40 {
        let (a, m, n, mut rng) = sample(seed);
        let f = random_mod_morphism(&mut rng, &a, &m, &n, 0, 0.9);
        let g = random_mod_morphism(&mut rng, &a, &n, &m, 0, 0.9);
        let gf = ainfmod::compose_mod(&g, &f).unwrap();
        for k in 1..=5 {
            let mut acc = TMap::zero(Q, 1 - k as i64, m.module.dom(k), vec![m.module.space.clone()]);
            for r in 1..=k {
                let s = k - r;
                let inner = TMap::insert(&f.comp(r), &[], &vec![a.alg.space.clone(); s]);
                let term = TMap::compose(&g.comp(1 + s), &inner);
                acc.add_assign(&if (r + 1) * s % 2 == 1 { term.neg() } else { term });
            }
            assert_eq!(gf.comp(k), acc, "seed {} arity {}", seed, k);
            nonzero += usize::from(k > 1 && !acc.is_zero());
        }
    }
    assert!(nonzero > 5, "{}", nonzero);
}
