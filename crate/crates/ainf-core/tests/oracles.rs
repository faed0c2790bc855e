mod common;

use std::sync::Arc;

use ainf_core::ainfty::{self, AInfAlgebra};
use ainf_core::bocs::Bocs;
use ainf_core::graded;
use ainf_core::oracles::{self, brute};
use ainf_core::twisted::{self, check_mc};
use common::*;

#[test]
fn generated_algebras_satisfy_every_identity() {
    for seed in 0..50 {
        let mut rng = oracles::rng(seed);
        let a = oracles::gen_dg_algebra(&mut rng, Q, oracles::AlgOpts::default());
        assert!(ainfty::check_stasheff_all(&a.alg).passed(), "seed {}", seed);
        let b = oracles::gen_algebra(&mut rng, Q, oracles::AlgOpts::default()).unwrap();
        assert!(ainfty::check_stasheff_all(&b.alg).passed(), "seed {}", seed);
    }
}

#[test]
fn generated_complexes() {
    for seed in 0..20 {
        let mut rng = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut rng, Q, small()).unwrap();
        let c = oracles::gen_complex(&mut rng, &a, 4, seed % 2 == 0).unwrap();
        assert!(c.module.ops().keys().all(|&n| n == 1));
        let d = graded::to_mat(&c.module.op(1));
        assert!(d.mul(&d).is_zero());
        if seed % 2 == 0 {
            assert!(twisted::homology(&c.module.space, &d).unwrap().is_empty());
        }
    }
}

#[test]
fn twistings_over_the_trivial_bocs_are_complexes() {
    let b = Arc::new(Bocs::trivial(Q, 2));
    for seed in 0..10 {
        let mut rng = oracles::rng(seed);
        let m = oracles::gen_mc(&mut rng, &b, 4, false).unwrap();
        assert!(m.u.f1.is_empty());
        assert!(m.u.f0.mul(&m.u.f0).is_zero());
    }
}

#[test]
fn generated_twistings_and_acyclic_variants() {
    for seed in 0..20 {
        let mut rng = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut rng, Q, small()).unwrap();
        let b = bar(&a, 3);
        let m = oracles::gen_mc(&mut rng, &b, 4, true).unwrap();
        assert!(check_mc(&m).passed());
        assert!(twisted::is_acyclic(&m).unwrap());
        let t = oracles::gen_twisted(&mut rng, &a, &b, true).unwrap();
        assert!(check_mc(&t).passed());
        assert!(twisted::is_acyclic(&t).unwrap());
    }
}

#[test]
fn brute_force_stasheff_on_an_associative_algebra() {
    let a = dual_numbers(1);
    for n in 1..=4 {
        assert!(brute::stasheff(&a, n, false).is_zero());
        assert!(brute::stasheff(&a, n, true).is_zero());
    }
}

#[test]
fn brute_force_leibniz() {
    for seed in 0..20 {
        let mut rng = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut rng, Q, small()).unwrap();
        let b = bar(&a, 3);
        let m = oracles::random_space(&mut rng, b.nidem, 3, "m");
        let f = oracles::random_gmorph(&mut rng, &b, &m, &m, 0, 0.5);
        let g = oracles::random_gmorph(&mut rng, &b, &m, &m, -1, 0.5);
        let lhs = brute::hat_delta(&brute::compose(&g, &f));
        let rhs = brute::compose(&brute::hat_delta(&g), &f).add(&brute::compose(&g, &brute::hat_delta(&f)).neg());
        assert!(lhs.sub(&rhs).is_zero(), "seed {}", seed);
    }
}

#[test]
fn broken_sign_is_localized() {
    let a = dual_numbers(1);
    let mut m2 = a.op(2);
    // x e = -x instead of x
    m2.table.get_mut(&vec![1, 0]).unwrap().insert(vec![1], Q.int(-1));
    let mut broken = AInfAlgebra::new(Q, a.space.clone(), 2).unwrap();
    broken.set_op(2, m2).unwrap();
    let d = brute::stasheff(&broken, 3, false);
    let inputs: Vec<String> = d.table.keys().map(|w| graded::word_label(&d.dom, w)).collect();
    assert_eq!(inputs, vec!["x|e|e".to_string()]);
    assert_eq!(ainfty::stasheff_defect(&broken, 3), d);
    let w = ainfty::check_stasheff(&broken, 3);
    assert!(w.first_failure().unwrap().witness.as_ref().unwrap().contains("x|e|e"));
}

#[test]
fn engine_and_oracle_agree_on_a_few_seeds() {
    for seed in 0..5 {
        for (name, agree) in dual_path(seed).unwrap() {
            assert!(agree, "{} seed {}", name, seed);
        }
    }
}
