mod common;

use std::sync::Arc;

use ainf_core::ainfty::{self, AInfAlgebra, AlgHomotopy, AlgMorphism};
use ainf_core::graded::{self, TMap};
use ainf_core::linalg::Mat;
use ainf_core::oracles;
use ainf_core::{Error, Field};
use common::*;

#[test]
fn rational_and_prime_arithmetic() {
    let half = Q.frac(1, 2).unwrap();
    let third = Q.frac(1, 3).unwrap();
    assert_eq!(half.try_add(&third).unwrap(), Q.frac(5, 6).unwrap());
    let f7 = Field::prime(7).unwrap();
    assert_eq!(f7.int(3).try_mul(&f7.int(5)).unwrap(), f7.one());
    assert_eq!(half.try_add(&f7.one()), Err(Error::FieldMismatch));
}

#[test]
fn identity_tensor_identity() {
    let m = rmod(1, &[("a", 0, 0), ("b", 1, 0)]);
    let n = bimod(1, &[("x", 2, 0, 0), ("y", -1, 0, 0)]);
    let i = TMap::tensor(&TMap::identity(Q, vec![m.clone()]), &TMap::identity(Q, vec![n.clone()]));
    assert_eq!(i, TMap::identity(Q, vec![m, n]));
}

#[test]
fn shift_moves_degrees_down() {
    let m = rmod(1, &[("a", 0, 0), ("b", 0, 0)]);
    let (m1, sigma) = graded::shift_iso(Q, &m);
    assert!(m1.gens().iter().all(|g| g.deg == -1));
    assert_eq!(sigma.deg, -1);
}

#[test]
fn splitting_of_zero_and_identity() {
    let m = rmod(2, &[("a", 0, 0), ("b", 1, 0), ("c", 0, 1)]);
    let z = graded::solve_splitting(Q, &m, &m, 0, &Mat::zeros(Q, 3, 3));
    assert_eq!(z.kernel.len(), 3);
    assert!(z.image.is_empty());
    let i = graded::solve_splitting(Q, &m, &m, 0, &Mat::identity(Q, 3));
    assert!(i.kernel.is_empty());
    assert_eq!(i.inverse, Mat::identity(Q, 3));
}

#[test]
fn sgn_parities() {
    assert!(!ainfty::sgn(&[5]).unwrap());
    assert!(!ainfty::sgn(&[1, 1, 1, 1]).unwrap());
    assert!(ainfty::sgn(&[2, 3]).unwrap());
    assert_eq!(ainfty::sgn(&[]), Err(Error::EmptyPartition));
    assert_eq!(ainfty::sgn(&[2, 0]), Err(Error::EmptyPartition));
}

fn associator(a: &AInfAlgebra) -> TMap {
    let m2 = a.op(2);
    let id = TMap::identity(Q, vec![a.space.clone()]);
    TMap::compose(&m2, &TMap::tensor(&m2, &id)).sub(&TMap::compose(&m2, &TMap::tensor(&id, &m2)))
}

#[test]
fn stasheff_three_is_associativity() {
    for c in [1, 2] {
        let a = dual_numbers(c);
        let d = ainfty::stasheff_defect(&a, 3);
        let assoc = associator(&a);
        assert_eq!(assoc.is_zero(), c == 1);
        assert!(d == assoc || d == assoc.neg());
        assert_eq!(ainfty::check_stasheff(&a, 3).passed(), c == 1);
    }
}

#[test]
fn stasheff_one_is_square_zero() {
    let sp = bimod(1, &[("a", 0, 0, 0), ("b", 1, 0, 0), ("c", 2, 0, 0)]);
    for chain in [false, true] {
        let mut a = AInfAlgebra::new(Q, sp.clone(), 1).unwrap();
        let mut entries = vec![(vec![0], 1, Q.one())];
        if chain {
            entries.push((vec![1], 2, Q.one()));
        }
        let m1 = TMap::from_entries(Q, 1, vec![sp.clone()], sp.clone(), entries);
        a.set_op(1, m1.clone()).unwrap();
        assert_eq!(ainfty::stasheff_defect(&a, 1), TMap::compose(&m1, &m1));
        assert_eq!(ainfty::check_stasheff(&a, 1).passed(), !chain);
    }
}

#[test]
fn zero_operations_satisfy_everything() {
    let sp = bimod(2, &[("a", 0, 0, 1), ("b", 1, 1, 0), ("c", -1, 0, 0)]);
    let a = AInfAlgebra::new(Q, sp, 4).unwrap();
    assert!(ainfty::check_stasheff_all(&a).passed());
}

#[test]
fn sign_translation_of_low_arities() {
    let mut rng = oracles::rng(7);
    let w = oracles::gen_algebra(&mut rng, Q, small()).unwrap();
    let mut a = AInfAlgebra::new(Q, w.alg.space.clone(), 4).unwrap();
    for (n, t) in oracles::random_alg_family(&mut rng, &w, &w, 1, 1, 4, 0.6) {
        a.set_op(n, t).unwrap();
    }
    let b = ainfty::sign_translate(&a).unwrap();
    assert_eq!(b.op(1), a.op(1));
    assert_eq!(b.op(2), a.op(2).neg());
    assert_eq!(b.op(3), a.op(3).neg());
    assert_eq!(b.op(4), a.op(4));
    assert_eq!(ainfty::sign_translate(&b).unwrap(), a);
}

#[test]
fn translated_defects_match_up_to_sign() {
    let mut seen_nonzero = false;
    for seed in 0..20 {
        let mut rng = oracles::rng(seed);
        let w = oracles::gen_algebra(&mut rng, Q, small()).unwrap();
        let noisy = noisy_algebra(&mut rng, &w);
        let b = ainfty::sign_translate(&noisy.alg).unwrap();
        for n in 1..=6 {
            let z = ainfty::stasheff_defect(&noisy.alg, n);
            let z2 = ainfty::translated_defect(&b, n);
            let expect = if (n * (n - 1) / 2) % 2 == 1 { z.neg() } else { z.clone() };
            assert_eq!(z2, expect, "seed {} n {}", seed, n);
            seen_nonzero |= !z.is_zero();
        }
    }
    assert!(seen_nonzero);
}

fn strict(a: &Arc<AInfAlgebra>, b: &Arc<AInfAlgebra>, f1: TMap) -> AlgMorphism {
    let mut f = AlgMorphism::new(a.clone(), b.clone());
    f.set_comp(1, f1).unwrap();
    f
}

#[test]
fn algebra_maps_of_associative_algebras() {
    let a = Arc::new(dual_numbers(1));
    let sp = a.space.clone();
    let good = TMap::from_entries(Q, 0, vec![sp.clone()], sp.clone(), [(vec![0], 0, Q.one()), (vec![1], 1, Q.int(2))]);
    let bad = TMap::from_entries(Q, 0, vec![sp.clone()], sp.clone(), [(vec![0], 0, Q.one()), (vec![1], 1, Q.one()), (vec![1], 0, Q.one())]);
    let m2 = a.op(2);
    for (f1, expect) in [(good, true), (bad, false)] {
        let direct = TMap::compose(&f1, &m2) == TMap::compose(&m2, &TMap::tensor(&f1, &f1));
        assert_eq!(direct, expect);
        let f = strict(&a, &a, f1);
        assert_eq!(ainfty::check_alg_morphism(&f, 2).passed(), expect);
    }
}

#[test]
fn identity_and_zero_morphisms() {
    for seed in 0..10 {
        let mut rng = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut rng, Q, small()).unwrap().alg;
        assert!(ainfty::check_alg_morphism_all(&AlgMorphism::identity(a.clone())).passed());
    }
    let sp = bimod(1, &[("e", 0, 0, 0), ("x", 0, 0, 0)]);
    let mut a = AInfAlgebra::new(Q, sp.clone(), 3).unwrap();
    let mut rng = oracles::rng(3);
    let w = oracles::WAlg { alg: Arc::new(a.clone()), weight: vec![1, 1] };
    for (n, t) in oracles::random_alg_family(&mut rng, &w, &w, 1, 2, 3, 0.7) {
        a.set_op(n, t).unwrap();
    }
    let a = Arc::new(a);
    assert!(ainfty::check_alg_morphism_all(&AlgMorphism::new(a.clone(), a)).passed());
}

#[test]
fn composition_of_morphisms() {
    for seed in 0..10 {
        let mut rng = oracles::rng(seed);
        let (b, a, f) = oracles::gen_algebra_pair(&mut rng, Q, small()).unwrap();
        let id_a = AlgMorphism::identity(a.alg.clone());
        let id_b = AlgMorphism::identity(b.alg.clone());
        assert_eq!(ainfty::compose_alg_morphisms(&id_a, &f).unwrap().comps, f.comps);
        assert_eq!(ainfty::compose_alg_morphisms(&f, &id_b).unwrap().comps, f.comps);
        let higher = oracles::random_alg_family(&mut rng, &b, &b, 0, 2, 3, 0.5);
        let (_, t) = oracles::transport_algebra(&b, &higher).unwrap();
        let ft = ainfty::compose_alg_morphisms(&f, &t).unwrap();
        assert_eq!(ft.comp(1), TMap::compose(&f.comp(1), &t.comp(1)));
        assert!(ainfty::check_alg_morphism_all(&ft).passed(), "seed {}", seed);
    }
}

#[test]
fn composing_strict_morphisms_stays_strict() {
    let a = Arc::new(dual_numbers(1));
    let sp = a.space.clone();
    let f1 = TMap::from_entries(Q, 0, vec![sp.clone()], sp.clone(), [(vec![0], 0, Q.one()), (vec![1], 1, Q.int(2))]);
    let g1 = TMap::from_entries(Q, 0, vec![sp.clone()], sp.clone(), [(vec![0], 0, Q.one()), (vec![1], 1, Q.int(-3))]);
    let gf = ainfty::compose_alg_morphisms(&strict(&a, &a, g1.clone()), &strict(&a, &a, f1.clone())).unwrap();
    assert_eq!(gf.comp(1), TMap::compose(&g1, &f1));
    assert!((2..=4).all(|n| gf.comp(n).is_zero()));
    assert!(ainfty::check_alg_morphism_all(&gf).passed());
}

#[test]
fn mismatched_composition_is_rejected() {
    let a = Arc::new(dual_numbers(1));
    let b = Arc::new(AInfAlgebra::new(Q, bimod(1, &[("z", 0, 0, 0)]), 2).unwrap());
    let f = AlgMorphism::identity(a);
    let g = AlgMorphism::identity(b);
    assert_eq!(ainfty::compose_alg_morphisms(&g, &f).err(), Some(Error::AlgebraMismatch));
}

#[test]
fn zero_homotopy_between_equal_morphisms() {
    let mut rng = oracles::rng(11);
    let (_, _, f) = oracles::gen_algebra_pair(&mut rng, Q, small()).unwrap();
    let h = AlgHomotopy { comps: Default::default() };
    assert!(ainfty::check_alg_homotopy_all(&h, &f, &f).passed());
}

#[test]
fn first_homotopy_identity_is_a_chain_homotopy() {
    for seed in 0..20 {
        let mut rng = oracles::rng(seed);
        let (b, a, f, g, h) = oracles::gen_homotopic(&mut rng, Q, small()).unwrap();
        let h1 = h.comps.get(&1).cloned().unwrap_or_else(|| f.zero_comp(1, -1));
        let chain = TMap::compose(&a.alg.op(1), &h1).add(&TMap::compose(&h1, &b.alg.op(1)));
        assert_eq!(f.comp(1).sub(&g.comp(1)), chain, "seed {}", seed);
        assert!(ainfty::check_alg_homotopy_all(&h, &f, &g).passed());
        let mut g2 = g.clone();
        let bump = random_alg_map(&mut rng, &b, &a, 0).remove(&1);
        if let Some(bump) = bump.filter(|t| !t.is_zero()) {
            g2.set_comp(1, g.comp(1).add(&bump)).unwrap();
            assert!(!ainfty::check_alg_homotopy(&h, &f, &g2, 1).passed());
        }
    }
}
