mod common;

use ainf_core::ainfmod::{self, ModMorphism};
use ainf_core::ainfty;
use ainf_core::bocs;
use ainf_core::gmodb::{self, compose, hat_delta};
use ainf_core::oracles;
use ainf_core::twisted::{self, check_homotopy, check_mc, check_twisted_morphism};
use common::*;
use proptest::prelude::*;

fn config() -> ProptestConfig {
    ProptestConfig { cases: 24, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn algebras_satisfy_stasheff(seed in any::<u64>()) {
        let mut r = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut r, Q, oracles::AlgOpts::default()).unwrap();
        prop_assert!(ainfty::check_stasheff_all(&a.alg).passed());
        let twice = ainfty::sign_translate(&ainfty::sign_translate(&a.alg).unwrap()).unwrap();
        prop_assert_eq!(&twice, &*a.alg);
    }

    #[test]
    fn composition_of_algebra_morphisms_is_associative(seed in any::<u64>()) {
        let mut r = oracles::rng(seed);
        let (b, _, f) = oracles::gen_algebra_pair(&mut r, Q, small()).unwrap();
        let h1 = oracles::random_alg_family(&mut r, &b, &b, 0, 2, 2, 0.6);
        let (b1, t1) = oracles::transport_algebra(&b, &h1).unwrap();
        let h2 = oracles::random_alg_family(&mut r, &b1, &b1, 0, 2, 2, 0.6);
        let (_, t2) = oracles::transport_algebra(&b1, &h2).unwrap();
        let left = ainfty::compose_alg_morphisms(&ainfty::compose_alg_morphisms(&f, &t1).unwrap(), &t2).unwrap();
        let right = ainfty::compose_alg_morphisms(&f, &ainfty::compose_alg_morphisms(&t1, &t2).unwrap()).unwrap();
        prop_assert_eq!(&left.comps, &right.comps);
        prop_assert!(ainfty::check_alg_morphism_all(&left).passed());
    }

    #[test]
    fn homotopic_partners_satisfy_the_homotopy_identity(seed in any::<u64>()) {
        let mut r = oracles::rng(seed);
        let (_, _, f, g, h) = oracles::gen_homotopic(&mut r, Q, small()).unwrap();
        prop_assert!(ainfty::check_alg_morphism_all(&g).passed());
        prop_assert!(ainfty::check_alg_homotopy_all(&h, &f, &g).passed());
    }

    #[test]
    fn bar_bocses_satisfy_the_axioms(seed in any::<u64>()) {
        let mut r = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut r, Q, small()).unwrap();
        let b = bar(&a, 4);
        prop_assert!(bocs::check_bocs_axioms(&b).passed());
        let split = bocs::layer_split(&b).unwrap();
        for part in &split.layers {
            prop_assert_eq!(part.v.len() + part.w.len(), b.layer(part.layer).len());
        }
    }

    #[test]
    fn gmod_is_a_dg_category(seed in any::<u64>()) {
        let mut r = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut r, Q, small()).unwrap();
        let b = bar(&a, 3);
        let m = oracles::random_space(&mut r, b.nidem, 3, "m");
        let f = oracles::random_gmorph(&mut r, &b, &m, &m, 0, 0.5);
        let g = oracles::random_gmorph(&mut r, &b, &m, &m, 1, 0.5);
        let h = oracles::random_gmorph(&mut r, &b, &m, &m, -1, 0.5);
        prop_assert_eq!(
            compose(&compose(&h, &g).unwrap(), &f).unwrap(),
            compose(&h, &compose(&g, &f).unwrap()).unwrap()
        );
        prop_assert!(hat_delta(&hat_delta(&g)).is_zero());
        let lhs = hat_delta(&compose(&g, &f).unwrap());
        let rhs = compose(&hat_delta(&g), &f).unwrap().sub(&compose(&g, &hat_delta(&f)).unwrap());
        prop_assert_eq!(lhs, rhs);
        let iso = oracles::random_iso(&mut r, &b, &m, 0.5);
        let inv = gmodb::invert(&iso).unwrap();
        let id = gmodb::GMorph::identity(b.clone(), m.clone());
        prop_assert_eq!(&compose(&iso, &inv).unwrap(), &id);
        prop_assert_eq!(&compose(&inv, &iso).unwrap(), &id);
    }

    #[test]
    fn generated_twistings_are_maurer_cartan(seed in any::<u64>()) {
        let mut r = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut r, Q, small()).unwrap();
        let b = bar(&a, 3);
        prop_assert!(check_mc(&oracles::gen_mc(&mut r, &b, 4, false).unwrap()).passed());
        let m = oracles::gen_twisted(&mut r, &a, &b, false).unwrap();
        prop_assert!(check_mc(&m).passed());
        let h = oracles::random_iso(&mut r, &b, &m.space, 0.5);
        let n = twisted::transport(&h, &m).unwrap();
        prop_assert!(check_mc(&n).passed());
        prop_assert!(check_twisted_morphism(&h, &m, &n).passed());
    }

    #[test]
    fn j_gives_a_conflation_and_factors_null_homotopic_maps(seed in any::<u64>()) {
        let mut r = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut r, Q, small()).unwrap();
        let b = bar(&a, 3);
        let m = oracles::gen_twisted(&mut r, &a, &b, false).unwrap();
        let n = oracles::gen_twisted(&mut r, &a, &b, false).unwrap();
        let jm = twisted::jfun(&m).unwrap();
        let (al, be) = (twisted::alpha(&jm), twisted::beta(&jm));
        prop_assert!(compose(&be, &al).unwrap().is_zero());
        prop_assert!(twisted::check_conflation(&al, &be).is_ok());
        let k = oracles::random_gmorph(&mut r, &b, &m.space, &n.space, -1, 0.5);
        let f = twisted::differential(&k, &m, &n).unwrap();
        let fac = twisted::factor_through_j(&k, &jm, &n).unwrap();
        prop_assert_eq!(compose(&fac, &al).unwrap(), f.clone());
        let hh = twisted::homotopy_from_factor(&fac, &jm).unwrap();
        prop_assert!(check_homotopy(&hh, &f, &zero(&m, &n, 0), &m, &n).passed());
    }

    #[test]
    fn acyclic_modules_are_contractible(seed in any::<u64>()) {
        let mut r = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut r, Q, small()).unwrap();
        let b = bar(&a, 3);
        let m = oracles::gen_twisted(&mut r, &a, &b, true).unwrap();
        let h = twisted::nullhomotopy(&m).unwrap();
        prop_assert!(check_homotopy(&h, &m.identity(), &zero(&m, &m, 0), &m, &m).passed());
    }

    #[test]
    fn idempotents_split(seed in any::<u64>()) {
        let mut r = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut r, Q, small()).unwrap();
        let b = bar(&a, 3);
        let (e, m) = oracles::gen_idempotent(&mut r, &a, &b).unwrap();
        let s = twisted::split_idempotent(&e, &m).unwrap();
        prop_assert_eq!(s.first.space.len() + s.second.space.len(), m.space.len());
        prop_assert!(check_mc(&s.first).passed() && check_mc(&s.second).passed());
        let he = compose(&s.h, &e).unwrap();
        let p = compose(&s.sum.inj(&b, 0), &s.sum.proj(&b, 0)).unwrap();
        prop_assert_eq!(compose(&he, &s.h_inv).unwrap(), p);
    }

    #[test]
    fn bridge_is_a_dg_functor(seed in any::<u64>()) {
        let mut r = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut r, Q, small()).unwrap();
        let b = bar(&a, 3);
        let m = oracles::gen_module(&mut r, &a, false).unwrap();
        let n = oracles::gen_module(&mut r, &a, false).unwrap();
        let f = random_mod_morphism(&mut r, &a, &m, &n, 0, 0.4);
        let g = random_mod_morphism(&mut r, &a, &n, &m, 1, 0.4);
        let bridge = |x: &ModMorphism| ainfmod::to_gmorph_truncated(x, &b).unwrap();
        prop_assert_eq!(bridge(&ainfmod::compose_mod(&g, &f).unwrap()), compose(&bridge(&g), &bridge(&f)).unwrap());
        prop_assert_eq!(bridge(&ainfmod::delta_inf(&f)), hat_delta(&bridge(&f)));
        let df = ainfmod::mod_differential(&f).unwrap();
        prop_assert!(ainfmod::mod_differential(&df).unwrap().is_zero());
        prop_assert!(ainfmod::delta_inf(&ainfmod::delta_inf(&f)).is_zero());
    }

    #[test]
    fn shift_and_j_commute_with_the_bridge(seed in any::<u64>()) {
        let mut r = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut r, Q, small()).unwrap();
        let b = bar(&a, 3);
        let m = oracles::gen_module(&mut r, &a, false).unwrap();
        let gm = ainfmod::to_twisted(&m.module, &b).unwrap();
        let t = ainfmod::to_twisted(&std::sync::Arc::new(ainfmod::shift_mod(&m.module).unwrap()), &b).unwrap();
        prop_assert_eq!(&t.u.f1, &twisted::shift(&gm).u.f1);
        let j = ainfmod::to_twisted(&std::sync::Arc::new(ainfmod::jfun_mod(&m.module).unwrap()), &b).unwrap();
        prop_assert_eq!(&j.u.f0, &twisted::jfun(&gm).unwrap().j.u.f0);
    }
}
