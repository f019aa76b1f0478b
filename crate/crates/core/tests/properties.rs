//! Property tests over seeded random inputs.

use proptest::prelude::*;

use hopfc_core::bundle::builtin_bundles;
use hopfc_core::corpus::{random_cod0_term, random_diagram, random_presentation, random_pure_braid, rng};
use hopfc_core::eval::Evaluator;
use hopfc_core::oracle::{quantum_sl2, RibbonModule};
use hopfc_core::tangle::{braid_eq, braid_to_tangle, presentation_to_tangle, to_handle, Mode};
use hopfc_core::term::conv_product;
use hopfc_core::{canonicalize, eliminate_antipodes, psi0, BraidedTerm, PureBraidWord, StringLinkPresentation, TangleWord};

fn config() -> ProptestConfig {
    ProptestConfig { cases: 64, ..ProptestConfig::default() }
}

proptest! {
    #![proptest_config(config())]

    #[test]
    fn term_text_round_trips(seed in any::<u64>(), dom in 1usize..=3) {
        let t = random_cod0_term(&mut rng(seed), dom, 12, 3);
        prop_assert_eq!(BraidedTerm::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn link_texts_round_trip(seed in any::<u64>(), n in 3usize..=5) {
        let p = random_presentation(&mut rng(seed), n, 4, 1);
        prop_assert_eq!(StringLinkPresentation::parse(&p.to_text()).unwrap(), p.clone());
        prop_assert_eq!(PureBraidWord::parse(&p.braid.to_text()).unwrap(), p.braid.clone());
        let t = presentation_to_tangle(&p).unwrap();
        prop_assert_eq!(TangleWord::parse(&t.to_text()).unwrap(), t);
    }

    #[test]
    fn antipode_elimination_keeps_values(seed in any::<u64>(), dom in 1usize..=3) {
        let t = random_cod0_term(&mut rng(seed), dom, 15, 5);
        let out = eliminate_antipodes(&t);
        prop_assert_eq!(out.antipode_count(), 0);
        for b in builtin_bundles() {
            let ev = Evaluator::new(&b);
            prop_assert_eq!(ev.eval_term(&t).to_dense(), ev.eval_term(&out).to_dense(), "{}", b.name);
        }
    }

    #[test]
    fn canonical_form_is_idempotent_and_sound(seed in any::<u64>(), dom in 1usize..=3) {
        let t = random_cod0_term(&mut rng(seed), dom, 12, 3);
        let c = canonicalize(&t);
        prop_assert_eq!(canonicalize(&c), c.clone());
        for b in builtin_bundles() {
            let ev = Evaluator::new(&b);
            prop_assert_eq!(ev.eval_term(&t).to_dense(), ev.eval_term(&c).to_dense(), "{}", b.name);
        }
    }

    /// The braid image turns concatenation into convolution, the later
    /// word landing on top.
    #[test]
    fn braid_image_is_multiplicative(seed in any::<u64>(), n in 2usize..=3) {
        let mut r = rng(seed);
        let a = random_pure_braid(&mut r, n, 3, true);
        let b = random_pure_braid(&mut r, n, 3, true);
        let ab = PureBraidWord::new(n, a.letters.iter().chain(&b.letters).copied().collect()).unwrap();
        let prod = conv_product(&[psi0(&b).unwrap(), psi0(&a).unwrap()], n).unwrap();
        for bd in builtin_bundles() {
            let ev = Evaluator::new(&bd);
            prop_assert_eq!(ev.eval_diagram(&psi0(&ab).unwrap()), ev.eval_diagram(&prod), "{}", bd.name);
        }
    }

    #[test]
    fn braid_times_inverse_is_trivial(seed in any::<u64>(), n in 2usize..=4) {
        let a = random_pure_braid(&mut rng(seed), n, 4, true);
        let inv = a.inverse();
        let aa = PureBraidWord::new(n, a.letters.iter().chain(&inv.letters).copied().collect()).unwrap();
        prop_assert!(braid_eq(&aa, &PureBraidWord::new(n, vec![]).unwrap()));
        let m = RibbonModule::from_test_module(&builtin_bundles()[3].modules[0]).unwrap();
        prop_assert_eq!(
            m.evaluate(&braid_to_tangle(&aa), Mode::StringLink).unwrap(),
            m.evaluate(&TangleWord::identity(n), Mode::StringLink).unwrap()
        );
    }

    #[test]
    fn evaluation_strategies_agree(seed in any::<u64>(), n in 2usize..=4) {
        let t = braid_to_tangle(&random_pure_braid(&mut rng(seed), n, 3, true));
        let h = to_handle(&t).unwrap();
        let mut mods: Vec<RibbonModule> =
            builtin_bundles().iter().map(|b| RibbonModule::from_test_module(&b.modules[0]).unwrap()).collect();
        mods.push(quantum_sl2(14).unwrap());
        for m in &mods {
            let sweep = m.evaluate_sweep(&t, Mode::StringLink).unwrap();
            prop_assert_eq!(&m.evaluate(&t, Mode::StringLink).unwrap(), &sweep);
            prop_assert_eq!(&m.evaluate_network(&t, Mode::StringLink).unwrap(), &sweep);
            prop_assert_eq!(m.evaluate(&h, Mode::Handle).unwrap(), m.evaluate_network(&h, Mode::Handle).unwrap());
        }
    }

    #[test]
    fn random_diagrams_are_forms(seed in any::<u64>(), n in 1usize..=4) {
        let d = random_diagram(&mut rng(seed), n, 10, 2);
        prop_assert_eq!(d.n(), n);
        prop_assert_eq!(d.term().cod(), 0);
    }
}
