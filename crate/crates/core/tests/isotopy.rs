//! Isotopy checks for tangle manipulations, judged by the quantum sl₂
//! vector representation, which sees more than linking and framing.

use hopfc_core::corpus::{self, random_diagram, random_presentation, string_link_corpus, DEFAULT_SEED};
use hopfc_core::oracle::{quantum_sl2, RibbonModule};
use hopfc_core::tangle::{
    contract_presentation, extract_presentation, presentation_to_tangle, to_handle, to_string_link, Mode, TangleWord,
};
use hopfc_core::translate::{phi, psi_full, psi_geom};

fn sl2() -> RibbonModule {
    quantum_sl2(14).unwrap()
}

fn same(rm: &RibbonModule, a: &TangleWord, b: &TangleWord, mode: Mode) -> bool {
    rm.evaluate(a, mode).unwrap() == rm.evaluate(b, mode).unwrap()
}

#[test]
fn extraction_preserves_isotopy_class() {
    let rm = sl2();
    for (name, t) in string_link_corpus(DEFAULT_SEED) {
        let p = extract_presentation(&t).unwrap();
        let back = presentation_to_tangle(&p).unwrap();
        assert!(same(&rm, &t, &back, Mode::StringLink), "{name}: {p}");
    }
}

#[test]
fn bending_round_trips() {
    let rm = sl2();
    for (name, t) in string_link_corpus(DEFAULT_SEED) {
        if t.bottom > 4 {
            continue;
        }
        let h = to_handle(&t).unwrap();
        assert!(same(&rm, &to_string_link(&h).unwrap(), &t, Mode::StringLink), "G∘F on {name}");
    }
    let mut r = corpus::rng(3);
    for k in 0..40 {
        let d = random_diagram(&mut r, 1 + k % 3, 8, 3);
        let h = phi(&d);
        let hh = to_handle(&to_string_link(&h).unwrap()).unwrap();
        assert!(same(&rm, &hh, &h, Mode::Handle), "F∘G on {}", d.term().to_text());
    }
}

#[test]
fn retraction_holds_up_to_isotopy() {
    let rm = sl2();
    let mut r = corpus::rng(5);
    for k in 0..30 {
        let p = random_presentation(&mut r, 2 + k % 3, 1 + k % 2, k % 2);
        let t = presentation_to_tangle(&p).unwrap();
        let d = psi_full(&p).unwrap();
        if d.term().slices().iter().map(|s| s.width_in()).max().unwrap_or(0) > 6 {
            continue;
        }
        assert!(same(&rm, &psi_geom(&d).unwrap(), &t, Mode::StringLink), "ψΨ on {p}");
    }
}

#[test]
fn contraction_commutation_on_tangles() {
    let rm = sl2();
    let mut r = corpus::rng(9);
    for _ in 0..10 {
        let p = random_presentation(&mut r, 7, 3, 0);
        for i in 2..=4 {
            for j in 2..=i {
                let a = contract_presentation(&contract_presentation(&p, j).unwrap(), i).unwrap();
                let b = contract_presentation(&contract_presentation(&p, i + 2).unwrap(), j).unwrap();
                let (ta, tb) = (presentation_to_tangle(&a).unwrap(), presentation_to_tangle(&b).unwrap());
                assert!(same(&rm, &ta, &tb, Mode::StringLink), "i={i} j={j} on {p}");
            }
        }
    }
}
