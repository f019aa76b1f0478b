//! The extra relations of the quotient category of Hopf diagrams, each as a
//! list of terms that must all evaluate equally.

use crate::term::{conv_product, pair_form, BraidedTerm, Generator, HopfDiagram, Slice};

#[derive(Clone, Debug)]
pub struct Relation {
    pub name: &'static str,
    pub sides: Vec<BraidedTerm>,
}

fn t(dom: usize, s: &[(usize, Generator, usize)]) -> BraidedTerm {
    BraidedTerm::new(dom, s.iter().map(|&(l, g, r)| Slice::new(l, g, r)).collect()).expect("relation side")
}

fn w(sign: bool, i: usize, j: usize, n: usize) -> HopfDiagram {
    let g = if sign { Generator::OmegaPlus } else { Generator::OmegaMinus };
    pair_form(g, i, j, n).expect("pair form")
}

fn conv(ds: &[HopfDiagram], n: usize) -> BraidedTerm {
    conv_product(ds, n).expect("convolution").into_term()
}

pub fn bar_relations() -> Vec<Relation> {
    use Generator::*;
    let mut out = Vec::new();
    for (name, th) in [("twist-central+", ThetaPlus), ("twist-central-", ThetaMinus)] {
        out.push(Relation { name, sides: vec![t(1, &[(0, Delta, 0), (1, th, 0)]), t(1, &[(0, Delta, 0), (0, th, 1)])] });
    }
    out.push(Relation {
        name: "twist-inverse",
        sides: vec![t(1, &[(0, Delta, 0), (0, ThetaPlus, 1), (0, ThetaMinus, 0)]), t(1, &[(0, Eps, 0)])],
    });
    out.push(Relation {
        name: "twist-square+",
        sides: vec![
            t(1, &[(0, Delta, 0), (0, ThetaPlus, 1), (0, ThetaPlus, 0)]),
            t(1, &[(0, Delta, 0), (0, BraidMinus, 0), (0, OmegaPlus, 0)]),
        ],
    });
    out.push(Relation {
        name: "twist-square-",
        sides: vec![
            t(1, &[(0, Delta, 0), (0, ThetaMinus, 1), (0, ThetaMinus, 0)]),
            t(1, &[(0, Delta, 0), (0, OmegaMinus, 0)]),
        ],
    });
    out.push(Relation {
        name: "pairing-inverse",
        sides: vec![
            conv(&[w(true, 1, 2, 2), w(false, 1, 2, 2)], 2),
            t(2, &[(0, Eps, 1), (0, Eps, 0)]),
            conv(&[w(false, 1, 2, 2), w(true, 1, 2, 2)], 2),
        ],
    });
    out.push(Relation {
        name: "three-term",
        sides: vec![
            conv(&[w(true, 1, 2, 3), w(true, 1, 3, 3), w(true, 2, 3, 3)], 3),
            conv(&[w(true, 1, 3, 3), w(true, 2, 3, 3), w(true, 1, 2, 3)], 3),
            conv(&[w(true, 2, 3, 3), w(true, 1, 2, 3), w(true, 1, 3, 3)], 3),
        ],
    });
    out.push(Relation {
        name: "four-term",
        sides: vec![
            conv(&[w(true, 1, 3, 4), w(true, 2, 3, 4), w(true, 2, 4, 4), w(false, 2, 3, 4)], 4),
            conv(&[w(true, 2, 3, 4), w(true, 2, 4, 4), w(false, 2, 3, 4), w(true, 1, 3, 4)], 4),
        ],
    });
    out
}
