//! Evaluation of Hopf diagrams against a coend bundle.

use rayon::prelude::*;

use crate::bundle::CoendBundle;
use crate::scalar::Scalar;
use crate::tensor::{apply, decode, DenseTensor, Key, SparseMap, SparseVec};
use crate::term::{BraidedTerm, Generator, HopfDiagram};

/// Per-generator sparse maps of a bundle, ready for propagation.
#[derive(Clone, Debug)]
pub struct Evaluator {
    pub dim: usize,
    maps: Vec<SparseMap>,
}

fn gen_slot(g: Generator) -> usize {
    Generator::ALL.iter().position(|&x| x == g).unwrap()
}

/// Input counts below this are evaluated sequentially.
const PAR_THRESHOLD: usize = 256;

impl Evaluator {
    pub fn new(b: &CoendBundle) -> Self {
        use Generator::*;
        let maps = Generator::ALL
            .iter()
            .map(|&g| {
                let (a, o) = g.arity();
                let t = match g {
                    Delta => &b.delta,
                    Eps => &b.eps,
                    S => &b.s,
                    Sinv => &b.sinv,
                    OmegaPlus => &b.omega_plus,
                    OmegaMinus => &b.omega_minus,
                    ThetaPlus => &b.theta_plus,
                    ThetaMinus => &b.theta_minus,
                    BraidPlus => &b.braid,
                    BraidMinus => &b.braid_inv,
                };
                SparseMap::from_dense(t, a, o)
            })
            .collect();
        Evaluator { dim: b.dim, maps }
    }

    pub fn map(&self, g: Generator) -> &SparseMap {
        &self.maps[gen_slot(g)]
    }

    /// Image of one basis tuple under the term.
    pub fn propagate(&self, t: &BraidedTerm, input: Key) -> SparseVec {
        let mut state = SparseVec::new();
        state.insert(input, Scalar::one());
        for s in t.slices() {
            state = apply(&state, s.left, self.map(s.gen));
            if state.is_empty() {
                break;
            }
        }
        state
    }

    /// The full linear map of a term.
    pub fn eval_term(&self, t: &BraidedTerm) -> SparseMap {
        let n_in = self.dim.pow(t.dom() as u32);
        let run = |i: usize| -> Vec<(Key, Scalar)> {
            let mut v: Vec<(Key, Scalar)> = self.propagate(t, decode(i, self.dim, t.dom())).into_iter().collect();
            v.sort_by(|a, b| a.0.cmp(&b.0));
            v
        };
        let cols: Vec<Vec<(Key, Scalar)>> = if n_in >= PAR_THRESHOLD {
            (0..n_in).into_par_iter().map(run).collect()
        } else {
            (0..n_in).map(run).collect()
        };
        SparseMap { dim: self.dim, arity_in: t.dom(), arity_out: t.cod(), cols }
    }

    /// `E(D)` as an n-index tensor.
    pub fn eval_diagram(&self, d: &HopfDiagram) -> DenseTensor {
        let m = self.eval_term(d.term());
        let entries = m
            .cols
            .into_iter()
            .map(|col| col.into_iter().next().map(|(_, v)| v).unwrap_or_else(Scalar::zero))
            .collect();
        DenseTensor { shape: vec![self.dim; d.n()], entries }
    }

    /// `E(D) ∘ (v ⊗ … ⊗ v)` for a vector `v: 1 → A`.
    pub fn contract_with(&self, d: &HopfDiagram, v: &DenseTensor) -> Scalar {
        let e = self.eval_diagram(d);
        contract_form(&e, v)
    }
}

/// Contracts every index of a form with the same vector.
pub fn contract_form(form: &DenseTensor, v: &DenseTensor) -> Scalar {
    let mut acc = Scalar::zero();
    for (flat, coeff) in form.entries.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let idx = form.multi_index(flat);
        let mut w = coeff.clone();
        for &i in &idx {
            w = &w * &v.entries[i];
            if w.is_zero() {
                break;
            }
        }
        acc += &w;
    }
    acc
}

pub fn eval_diagram(d: &HopfDiagram, b: &CoendBundle) -> DenseTensor {
    Evaluator::new(b).eval_diagram(d)
}

pub fn eval_term(t: &BraidedTerm, b: &CoendBundle) -> SparseMap {
    Evaluator::new(b).eval_term(t)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::{builtin_bundle, builtin_bundles};
    use crate::term::{conv_compose, conv_identity};

    #[test]
    fn identity_form_is_counit_power() {
        for b in builtin_bundles() {
            let ev = Evaluator::new(&b);
            let e = ev.eval_diagram(&conv_identity(2));
            assert_eq!(e, b.eps.outer(&b.eps));
        }
    }

    #[test]
    fn trivial_bundle_gives_one() {
        let b = builtin_bundle("trivial").unwrap();
        let d = conv_compose(&HopfDiagram::generator(Generator::ThetaPlus), &HopfDiagram::generator(Generator::Eps)).unwrap();
        assert_eq!(eval_diagram(&d, &b).entries, vec![Scalar::one()]);
    }

    #[test]
    fn twist_inverse_relation() {
        for b in builtin_bundles() {
            let d = conv_compose(&HopfDiagram::generator(Generator::ThetaPlus), &HopfDiagram::generator(Generator::ThetaMinus))
                .unwrap();
            assert_eq!(eval_diagram(&d, &b), b.eps);
        }
    }
}
