use ainf::format::{BarRef, Document};
use ainf::workspace::*;
use ainf_core::bocs::bar_construct;
use ainf_core::oracles::{self, AlgOpts};
use ainf_core::{Field, Scalar};
use std::sync::Arc;

fn opts() -> AlgOpts {
    AlgOpts { max_dim: 4, ..AlgOpts::default() }
}

#[test]
fn generated_structures_survive_serialization() {
    for (seed, field) in (0..16).zip([Field::Q, Field::Fp(7)].into_iter().cycle()) {
        let mut rng = oracles::rng(seed);
        let a = oracles::gen_algebra(&mut rng, field, opts()).unwrap();
        let m = oracles::gen_module(&mut rng, &a, false).unwrap();
        let b = Arc::new(bar_construct(a.alg.clone(), 3).unwrap());
        let t = oracles::gen_twisted(&mut rng, &a, &b, false).unwrap();
        let f = oracles::random_gmorph(&mut rng, &b, &t.space, &t.space, 0, 0.5);

        let mut doc = Document::empty(&field.to_string(), a.alg.space.nidem);
        doc.algebras.insert("A".into(), algebra_data(&a.alg));
        doc.modules.insert("M".into(), module_data(&m.module, "A"));
        doc.bocses.insert("B".into(), bocs_data(&b, Some(BarRef { algebra: "A".into(), level: 3 })));
        doc.bocses.insert("E".into(), bocs_data(&b, None));
        doc.twisted.insert("T".into(), twisted_data(&t, "B"));
        doc.gmorphs.insert("f".into(), gmorph_data(&f, "B", "T", "T"));

        let text = doc.to_json();
        let ws = Workspace::parse(&text, None).unwrap();
        assert_eq!(*ws.algebras["A"], *a.alg, "seed {}", seed);
        assert_eq!(*ws.modules["M"], *m.module, "seed {}", seed);
        assert_eq!(*ws.bocses["B"], *b, "seed {}", seed);
        assert_eq!(bocs_data(&ws.bocses["E"], None), bocs_data(&b, None));
        assert_eq!(ws.twisted["T"], t, "seed {}", seed);
        assert_eq!(ws.gmorphs["f"], f, "seed {}", seed);
        assert_eq!(ws.doc.to_json(), text);
    }
}

#[test]
fn coefficients_print_canonically() {
    let q = Field::Q;
    assert!(matches!(scalar_text(&q.parse("6/-4").unwrap()), ainf::format::Coeff::Text(s) if s == "-3/2"));
    let f7 = Field::Fp(7);
    let x: Scalar = f7.parse("-1").unwrap();
    assert!(matches!(scalar_text(&x), ainf::format::Coeff::Text(s) if s == "6"));
}
