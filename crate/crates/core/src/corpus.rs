//! Seeded random inputs and named fixtures shared by the tests, the
//! acceptance suite and the benches.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::tangle::{
    braid_to_tangle, contract_tangle, double_strand, extract_presentation, presentation_to_tangle, Letter, PureBraidWord,
    StringLinkPresentation, TangleEvent, TangleWord,
};
use crate::term::{BraidedTerm, Generator, HopfDiagram, Slice};

/// Default seed for every generated corpus.
pub const DEFAULT_SEED: u64 = 0x5eed_2024;

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Random term with `dom` inputs and no outputs, at most `max_slices`
/// slices and `max_antipodes` antipodes.
pub fn random_cod0_term(rng: &mut impl Rng, dom: usize, max_slices: usize, max_antipodes: usize) -> BraidedTerm {
    use Generator::*;
    let mut w = dom;
    let mut slices = Vec::new();
    let mut antipodes = 0;
    let place = |rng: &mut dyn rand::RngCore, w: usize, g: Generator| {
        let a = g.arity().0;
        let left = rng.gen_range(0..=w - a);
        Slice::new(left, g, w - a - left)
    };
    while w > 0 && slices.len() + w < max_slices && rng.gen_bool(0.85) {
        let mut pool: Vec<Generator> = vec![ThetaPlus, ThetaMinus];
        if w < 4 {
            pool.extend([Delta, Delta, Delta]);
        }
        if antipodes < max_antipodes {
            pool.extend([S, Sinv]);
        }
        if w >= 2 {
            pool.extend([BraidPlus, BraidMinus, OmegaPlus, OmegaMinus]);
        }
        if w >= 3 {
            pool.push(Eps);
        }
        let g = *pool.choose(rng).expect("pool is never empty");
        if g.is_antipode() {
            antipodes += 1;
        }
        slices.push(place(rng, w, g));
        let (a, o) = g.arity();
        w = w + o - a;
    }
    while w > 0 {
        let g = if w >= 2 && rng.gen_bool(0.5) {
            *[OmegaPlus, OmegaMinus].choose(rng).unwrap()
        } else {
            *[Eps, Eps, ThetaPlus, ThetaMinus].choose(rng).unwrap()
        };
        slices.push(place(rng, w, g));
        w -= g.arity().0;
    }
    BraidedTerm::new(dom, slices).expect("generated slices fit")
}

pub fn random_diagram(rng: &mut impl Rng, n: usize, max_slices: usize, max_antipodes: usize) -> HopfDiagram {
    HopfDiagram::new(random_cod0_term(rng, n, max_slices.max(n), max_antipodes)).expect("cod-0 term")
}

pub fn random_pure_braid(rng: &mut impl Rng, n: usize, len: usize, twists: bool) -> PureBraidWord {
    let letters = (0..len)
        .filter_map(|_| {
            let e = if rng.gen_bool(0.5) { 1 } else { -1 };
            if n == 1 || (twists && rng.gen_bool(0.2)) {
                twists.then(|| Letter::twist(rng.gen_range(1..=n), e))
            } else {
                let i = rng.gen_range(1..n);
                Some(Letter::sigma(i, rng.gen_range(i + 1..=n), e))
            }
        })
        .collect();
    PureBraidWord::new(n, letters).expect("letters fit")
}

/// Random presentation on `n` braid strands with `contractions` steps.
pub fn random_presentation(rng: &mut impl Rng, n: usize, len: usize, contractions: usize) -> StringLinkPresentation {
    let braid = random_pure_braid(rng, n, len, true);
    let mut js = Vec::new();
    let mut w = n;
    for _ in 0..contractions {
        if w < 3 {
            break;
        }
        js.push(rng.gen_range(2..w));
        w -= 2;
    }
    let twists = (0..w).map(|_| rng.gen_range(-1..=1)).collect();
    StringLinkPresentation::new(braid, js, twists).expect("valid by construction")
}

fn kink(k: usize, e: i8) -> [TangleEvent; 3] {
    [TangleEvent::Cup { pos: k + 1 }, TangleEvent::cross(k, e), TangleEvent::Cap { pos: k + 1 }]
}

/// Right-handed trefoil cut open into a 1-strand string link, framing +1:
/// three positive crossings (writhe 3) and two negative curls.
pub fn trefoil_plus_one() -> TangleWord {
    use TangleEvent::*;
    let mut ev = vec![Cup { pos: 2 }, TangleEvent::cross(1, 1), TangleEvent::cross(1, 1), TangleEvent::cross(1, 1), Cap { pos: 2 }];
    ev.extend(kink(1, -1));
    ev.extend(kink(1, -1));
    TangleWord::new(1, ev).expect("fixture is well formed")
}

/// One strand with `|f|` curls of sign `f`.
pub fn unknot(f: i64) -> TangleWord {
    let e = if f > 0 { 1 } else { -1 };
    let ev = (0..f.unsigned_abs()).flat_map(|_| kink(1, e)).collect();
    TangleWord::new(1, ev).expect("fixture is well formed")
}

pub fn empty_link() -> TangleWord {
    TangleWord::identity(0)
}

/// Named string links for the retraction suite: pure braids, contracted
/// braids, the trefoil fixture and doubled components.
pub fn string_link_corpus(seed: u64) -> Vec<(String, TangleWord)> {
    let mut r = rng(seed);
    let mut out: Vec<(String, TangleWord)> = Vec::new();
    out.push(("trefoil_plus1".into(), trefoil_plus_one()));
    for f in [-2, -1, 0, 1, 2] {
        out.push((format!("unknot_{f:+}"), unknot(f)));
    }
    for n in 1..=3 {
        out.push((format!("identity_{n}"), TangleWord::identity(n)));
    }
    for k in 0..16 {
        let n = 2 + k % 3;
        let p = random_pure_braid(&mut r, n, 1 + k % 4, true);
        out.push((format!("braid_{k:02}"), braid_to_tangle(&p)));
    }
    for k in 0..14 {
        let n = 3 + 2 * (k % 2);
        let p = random_presentation(&mut r, n, 1 + k % 3, 1 + k % 2);
        out.push((format!("contracted_{k:02}"), presentation_to_tangle(&p).expect("valid presentation")));
    }
    for k in 0..8 {
        let p = random_pure_braid(&mut r, 2, 1 + k % 2, true);
        let d = double_strand(&p, 1 + k % 2).expect("valid strand");
        out.push((format!("doubled_{k:02}"), braid_to_tangle(&d)));
    }
    // a knotted contraction: two strands of a clasped braid joined through a third
    for k in 0..4 {
        let p = random_pure_braid(&mut r, 3, 2 + k, false);
        out.push((format!("closed_braid_{k:02}"), contract_tangle(&braid_to_tangle(&p), 2).expect("width 3")));
    }
    out
}

/// Presentations of a corpus, in corpus order.
pub fn corpus_presentations(corpus: &[(String, TangleWord)]) -> Vec<(String, StringLinkPresentation)> {
    corpus.iter().map(|(n, t)| (n.clone(), extract_presentation(t).expect("corpus items are string links"))).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tangle::{validate_tangle, Mode};

    #[test]
    fn generated_terms_respect_bounds() {
        let mut r = rng(1);
        for _ in 0..500 {
            let dom = r.gen_range(1..=3);
            let t = random_cod0_term(&mut r, dom, 15, 5);
            assert!(t.len() <= 15 && t.antipode_count() <= 5 && t.cod() == 0, "{}", t.to_text());
        }
    }

    #[test]
    fn corpus_is_large_and_valid() {
        let c = string_link_corpus(DEFAULT_SEED);
        assert!(c.len() >= 50);
        for (name, t) in &c {
            validate_tangle(t, Mode::StringLink).unwrap_or_else(|e| panic!("{name}: {e}"));
        }
    }
}
