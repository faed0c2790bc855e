mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use ainf_core::ainfty::{AInfAlgebra, AlgHomotopy, AlgMorphism};
use ainf_core::bocs::{self, bar_construct, Bocs, BocsMap, Vector};
use ainf_core::gmodb::{self, GMorph};
use ainf_core::graded::{self, TMap};
use ainf_core::linalg::{self, Mat};
use ainf_core::oracles;
use ainf_core::Error;
use common::*;

fn unit(i: usize) -> Vector {
    let mut v = Vector::new();
    v.insert(i, Q.one());
    v
}

fn letters() -> Arc<AInfAlgebra> {
    Arc::new(AInfAlgebra::new(Q, bimod(1, &[("a", 1, 0, 0), ("b", 1, 0, 0), ("c", 1, 0, 0)]), 2).unwrap())
}

#[test]
fn bar_of_zero_operations() {
    let b = bar_construct(letters(), 3).unwrap();
    assert_eq!(b.len(), 3 + 9 + 27);
    for i in 0..b.len() {
        assert!(b.delta(i).is_empty());
        assert_eq!(b.comult(i).len(), b.gen(i).layer - 1);
    }
    assert!(bocs::check_bocs_axioms(&b).passed());
}

#[test]
fn comultiplication_splits_words() {
    let b = bar_construct(letters(), 3).unwrap();
    let abc = b.find("a|b|c").unwrap();
    let got = b.comult_vec(&unit(abc));
    let mut expect = BTreeMap::new();
    expect.insert((b.find("a").unwrap(), b.find("b|c").unwrap()), Q.one());
    expect.insert((b.find("a|b").unwrap(), b.find("c").unwrap()), Q.one());
    assert_eq!(got, expect);
    assert!(b.comult(b.find("b").unwrap()).is_empty());
}

#[test]
fn iterated_comultiplication() {
    let b = bar_construct(letters(), 3).unwrap();
    for i in 0..b.len() {
        let c = unit(i);
        let zero = bocs::iterate_comult(&b, 0, &c);
        assert_eq!(zero.len(), 1);
        assert_eq!(zero.get(&vec![i]), Some(&Q.one()));
        let layer = b.gen(i).layer;
        assert!(bocs::iterate_comult(&b, layer, &c).is_empty());
        // the full split of a word into letters
        let letters = bocs::iterate_comult(&b, layer - 1, &c);
        assert_eq!(letters.len(), 1);
    }
}

#[test]
fn trivial_bocs_passes() {
    assert!(bocs::check_bocs_axioms(&Bocs::trivial(Q, 2)).passed());
}

#[test]
fn bar_detects_nonassociativity() {
    assert!(bar_construct(Arc::new(dual_numbers(1)), 4).is_ok());
    assert!(bar_construct(Arc::new(dual_numbers(2)), 2).is_ok());
    assert!(matches!(bar_construct(Arc::new(dual_numbers(2)), 3), Err(Error::StasheffViolation(_))));
}

#[test]
fn length_two_differential_is_the_product() {
    let b = bar_construct(Arc::new(dual_numbers(1)), 2).unwrap();
    let ex = b.find("e|x").unwrap();
    assert_eq!(b.delta(ex).len(), 1);
    assert_eq!(b.gen(*b.delta(ex).keys().next().unwrap()).label, "x");
    let xx = b.find("x|x").unwrap();
    assert!(b.delta(xx).is_empty());
}

#[test]
fn first_layer_differential_stays_in_first_layer() {
    for seed in 0..20 {
        let mut rng = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut rng, Q, small()).unwrap();
        let b = bar(&a, 3);
        for i in b.layer(1) {
            assert!(b.vec_layer(b.delta(i)) <= 1);
        }
        assert!(bocs::check_bocs_axioms(&b).passed());
    }
}

#[test]
fn layer_split_without_differential() {
    let b = bar_construct(letters(), 3).unwrap();
    let split = bocs::layer_split(&b).unwrap();
    for part in &split.layers {
        assert!(part.w.is_empty());
        assert_eq!(part.v.len(), b.layer(part.layer).len());
    }
}

#[test]
fn layer_split_dimensions() {
    for seed in 0..20 {
        let mut rng = oracles::rng(seed);
        let a = oracles::gen_dg_algebra(&mut rng, Q, small());
        let b = bar(&a, 3);
        let split = bocs::layer_split(&b).unwrap();
        for part in &split.layers {
            assert_eq!(part.v.len() + part.w.len(), b.layer(part.layer).len());
            for v in &part.v {
                assert!(b.delta_vec(v).is_empty());
            }
        }
        let m1 = graded::to_mat(&a.alg.op(1));
        let n = a.alg.space.len();
        let rank = linalg::rank(&m1.to_dense(), n);
        assert_eq!(split.layers[0].v.len(), n - rank, "seed {}", seed);
    }
}

#[test]
fn psi_of_a_strict_map_is_wordwise() {
    let a = Arc::new(dual_numbers(1));
    let sp = a.space.clone();
    let mut f = AlgMorphism::new(a.clone(), a.clone());
    f.set_comp(1, TMap::from_entries(Q, 0, vec![sp.clone()], sp, [(vec![0], 0, Q.one()), (vec![1], 1, Q.int(2))])).unwrap();
    let b = Arc::new(bar_construct(a, 3).unwrap());
    let psi = bocs::psi_of_morphism(&f, b.clone(), b.clone()).unwrap();
    for i in 0..b.len() {
        let xs = b.gen(i).label.matches('x').count() as u32;
        let expect = unit(i).into_iter().map(|(k, _)| (k, Q.int(2i64.pow(xs)))).collect::<Vector>();
        assert_eq!(psi.map[i], expect);
    }
    assert!(bocs::check_bocs_morphism(&psi).passed());
}

#[test]
fn coderivation_of_zero_is_zero() {
    let mut rng = oracles::rng(5);
    let (b, a, f) = oracles::gen_algebra_pair(&mut rng, Q, small()).unwrap();
    let ba = bar(&b, 3);
    let bb = bar(&a, 3);
    let h = AlgHomotopy { comps: BTreeMap::new() };
    let d = bocs::delta_coderivation(&h, -1, &f, &f, ba.clone(), bb.clone()).unwrap();
    assert!(d.is_zero());
    let psi = bocs::psi_of_morphism(&f, ba, bb).unwrap();
    assert!(bocs::check_bocs_homotopy(&d, &psi, &psi).passed());
}

fn setting(seed: u64) -> (Arc<Bocs>, Arc<ainf_core::graded::Space>, oracles::Rng) {
    let mut rng = oracles::rng(seed);
    let a = oracles::gen_algebra(&mut rng, Q, small()).unwrap();
    let b = bar(&a, 3);
    let m = oracles::random_space(&mut rng, b.nidem, 4, "m");
    (b, m, rng)
}

#[test]
fn identities_are_units() {
    for seed in 0..20 {
        let (b, m, mut rng) = setting(seed);
        let n = oracles::random_space(&mut rng, b.nidem, 3, "n");
        let f = oracles::random_gmorph(&mut rng, &b, &m, &n, seed as i64 % 3 - 1, 0.5);
        assert_eq!(gmodb::compose(&f, &GMorph::identity(b.clone(), m.clone())).unwrap(), f);
        assert_eq!(gmodb::compose(&GMorph::identity(b.clone(), n.clone()), &f).unwrap(), f);
        assert!(gmodb::hat_delta(&GMorph::identity(b.clone(), m.clone())).is_zero());
    }
}

#[test]
fn strict_morphisms_compose_strictly() {
    let (b, m, mut rng) = setting(3);
    let mut f = oracles::random_gmorph(&mut rng, &b, &m, &m, 0, 0.6);
    let mut g = oracles::random_gmorph(&mut rng, &b, &m, &m, 0, 0.6);
    for c in 0..b.len() {
        f.f1[c] = Mat::zeros(Q, m.len(), m.len());
        g.f1[c] = Mat::zeros(Q, m.len(), m.len());
    }
    let gf = gmodb::compose(&g, &f).unwrap();
    assert!(gf.is_strict());
    assert_eq!(gf.f0, g.f0.mul(&f.f0));
}

#[test]
fn composite_on_the_first_layer() {
    for seed in 0..10 {
        let (b, m, mut rng) = setting(seed);
        let f = oracles::random_gmorph(&mut rng, &b, &m, &m, 0, 0.6);
        let g = oracles::random_gmorph(&mut rng, &b, &m, &m, 1, 0.6);
        let gf = gmodb::compose(&g, &f).unwrap();
        for c in b.layer(1) {
            assert_eq!(gf.f1[c], g.f1[c].mul(&f.f0).add(&g.f0.mul(&f.f1[c])));
        }
    }
}

#[test]
fn inverse_of_a_first_layer_perturbation() {
    let a = oracles::WAlg { alg: Arc::new(dual_numbers(1)), weight: vec![1, 1] };
    let b = bar(&a, 2);
    let mut rng = oracles::rng(1);
    let m = oracles::random_space(&mut rng, 1, 3, "m");
    let mut p = oracles::random_gmorph(&mut rng, &b, &m, &m, 0, 0.7);
    p.f0 = Mat::zeros(Q, 3, 3);
    for c in b.layer(2) {
        p.f1[c] = Mat::zeros(Q, 3, 3);
    }
    assert!(!p.is_zero());
    let id = GMorph::identity(b.clone(), m.clone());
    let f = id.add(&p);
    let inv = gmodb::invert(&f).unwrap();
    for c in b.layer(1) {
        assert_eq!(inv.f1[c], p.f1[c].neg());
    }
    let pp = gmodb::compose(&p, &p).unwrap();
    assert_eq!(inv, id.sub(&p).add(&pp));
    assert_eq!(gmodb::compose(&f, &inv).unwrap(), id);
    assert_eq!(gmodb::invert(&id).unwrap(), id);
}

#[test]
fn singular_first_component_is_not_invertible() {
    let (b, m, mut rng) = setting(2);
    let mut f = oracles::random_iso(&mut rng, &b, &m, 0.5);
    for i in 0..m.len() {
        f.f0.set(i, 0, Q.zero());
    }
    assert!(matches!(gmodb::invert(&f), Err(Error::NotInvertible(_))));
}

#[test]
fn restriction_along_identity_and_zero_homotopy() {
    let (b, m, mut rng) = setting(4);
    let f = oracles::random_gmorph(&mut rng, &b, &m, &m, 1, 0.6);
    let id = BocsMap::identity(b.clone());
    assert_eq!(gmodb::restrict(&id, &f).unwrap(), f);
    let h = BocsMap::zero(b.clone(), b.clone(), -1);
    let rh = gmodb::r_h(&h, &id, &id, &f).unwrap();
    assert!(rh.is_zero());
    assert_eq!(rh.deg, 0);
}

#[test]
fn leibniz_and_square_zero() {
    for seed in 0..20 {
        let (b, m, mut rng) = setting(seed);
        let f = oracles::random_gmorph(&mut rng, &b, &m, &m, 0, 0.5);
        let g = oracles::random_gmorph(&mut rng, &b, &m, &m, 1, 0.5);
        let d = gmodb::hat_delta;
        assert!(d(&d(&f)).is_zero());
        let lhs = d(&gmodb::compose(&g, &f).unwrap());
        let rhs = gmodb::compose(&d(&g), &f).unwrap().sub(&gmodb::compose(&g, &d(&f)).unwrap());
        assert_eq!(lhs, rhs);
    }
}
