//! Kirby elements and the surgery invariant.

use serde::Serialize;

use crate::bundle::{AbelianParams, CoendBundle};
use crate::error::{Error, Result};
use crate::eval::{contract_form, Evaluator};
use crate::scalar::Scalar;
use crate::tangle::{closure_linking, presentation_to_tangle, LinkingData, StringLinkPresentation};
use crate::tensor::{apply, DenseTensor, SparseMap, SparseVec};
use crate::term::{BraidedTerm, Generator, HopfDiagram, Slice};
use crate::translate::psi_full;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct KirbyCandidate {
    #[serde(skip)]
    pub alpha: DenseTensor,
    /// `S_A α = α`
    pub antipode_fixed: bool,
    /// `(μ⊗id)(id⊗Δ)(α⊗α) = α⊗α`
    pub slide_invariant: bool,
    pub kirby_ok: bool,
    pub normalizable: bool,
    #[serde(serialize_with = "crate::kirby::ser_scalar")]
    pub theta_plus_alpha: Scalar,
    #[serde(serialize_with = "crate::kirby::ser_scalar")]
    pub theta_minus_alpha: Scalar,
}

pub(crate) fn ser_scalar<S: serde::Serializer>(x: &Scalar, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&x.to_exact_string())
}

fn vector_state(v: &DenseTensor) -> SparseVec {
    v.entries.iter().enumerate().filter(|(_, x)| !x.is_zero()).map(|(i, x)| (vec![i as u8], x.clone())).collect()
}

fn state_to_dense(s: &SparseVec, dim: usize, rank: usize) -> DenseTensor {
    let mut t = DenseTensor::zeros(vec![dim; rank]);
    for (k, v) in s {
        let idx: Vec<usize> = k.iter().map(|&x| x as usize).collect();
        t.set(&idx, v.clone());
    }
    t
}

/// `g ∘ α`, for a map out of `A`.
fn apply_vec(v: &DenseTensor, m: &SparseMap, dim: usize) -> DenseTensor {
    let out = apply(&vector_state(v), 0, m);
    state_to_dense(&out, dim, m.arity_out)
}

/// `α⊗α` and `(μ⊗id)(id⊗Δ)(α⊗α)`.
fn slide_pair(alpha: &DenseTensor, b: &CoendBundle) -> (SparseVec, SparseVec) {
    let mut aa = SparseVec::new();
    for (i, x) in alpha.entries.iter().enumerate() {
        for (j, y) in alpha.entries.iter().enumerate() {
            let p = x * y;
            if !p.is_zero() {
                aa.insert(vec![i as u8, j as u8], p);
            }
        }
    }
    let slid = apply(&apply(&aa, 1, &SparseMap::from_dense(&b.delta, 1, 2)), 0, &SparseMap::from_dense(&b.mu, 2, 1));
    (aa, slid)
}

pub fn kirby_check(alpha: &DenseTensor, b: &CoendBundle) -> Result<KirbyCandidate> {
    if alpha.shape != vec![b.dim] {
        return Err(Error::Arity(format!("α has shape {:?}, expected [{}]", alpha.shape, b.dim)));
    }
    let d = b.dim;
    let s = SparseMap::from_dense(&b.s, 1, 1);
    let antipode_fixed = apply_vec(alpha, &s, d) == *alpha;
    let (aa, slid) = slide_pair(alpha, b);
    let slide_invariant = state_to_dense(&slid, d, 2) == state_to_dense(&aa, d, 2);
    let dot = |t: &DenseTensor| contract_form(t, alpha);
    let theta_plus_alpha = dot(&b.theta_plus);
    let theta_minus_alpha = dot(&b.theta_minus);
    let normalizable = !theta_plus_alpha.is_zero() && !theta_minus_alpha.is_zero();
    Ok(KirbyCandidate {
        alpha: alpha.clone(),
        antipode_fixed,
        slide_invariant,
        kirby_ok: antipode_fixed && slide_invariant,
        normalizable,
        theta_plus_alpha,
        theta_minus_alpha,
    })
}

/// Sampled evidence for the diagram-wise Kirby conditions: counts of
/// diagrams on which the antipode and slide moves leave `E(D)α^{⊗n}` fixed.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct KirbyEvidence {
    pub sampled: usize,
    pub antipode_agree: usize,
    pub slide_agree: usize,
}

pub fn kirby_sample_evidence(alpha: &DenseTensor, b: &CoendBundle, diagrams: &[HopfDiagram]) -> KirbyEvidence {
    let ev = Evaluator::new(b);
    let d = b.dim;
    let s_alpha = apply_vec(alpha, &SparseMap::from_dense(&b.s, 1, 1), d);
    let (_, slid) = slide_pair(alpha, b);
    let mut out = KirbyEvidence::default();
    for diag in diagrams {
        let n = diag.n();
        if n == 0 {
            continue;
        }
        out.sampled += 1;
        let form = ev.eval_diagram(diag);
        let base = contract_form(&form, alpha);
        let mut vs: Vec<&DenseTensor> = vec![alpha; n];
        vs[0] = &s_alpha;
        if contract_mixed(&form, &vs) == base {
            out.antipode_agree += 1;
        }
        if n >= 2 {
            // (μ⊗id)(id⊗Δ) on the first two legs, then E(D)
            let mut total = Scalar::zero();
            for (k, c) in &slid {
                // fix the first two legs to the basis tuple k, contract the rest with α
                let mut acc = Scalar::zero();
                for (flat, coeff) in form.entries.iter().enumerate() {
                    if coeff.is_zero() {
                        continue;
                    }
                    let idx = form.multi_index(flat);
                    if idx[0] != k[0] as usize || idx[1] != k[1] as usize {
                        continue;
                    }
                    let mut w = coeff.clone();
                    for &i in &idx[2..] {
                        w = &w * &alpha.entries[i];
                    }
                    acc += &w;
                }
                total += &(&acc * c);
            }
            if total == base {
                out.slide_agree += 1;
            }
        } else {
            out.slide_agree += 1;
        }
    }
    out
}

/// Contracts leg `k` of a form with `vs[k]`.
fn contract_mixed(form: &DenseTensor, vs: &[&DenseTensor]) -> Scalar {
    let mut acc = Scalar::zero();
    for (flat, coeff) in form.entries.iter().enumerate() {
        if coeff.is_zero() {
            continue;
        }
        let idx = form.multi_index(flat);
        let mut w = coeff.clone();
        for (k, &i) in idx.iter().enumerate() {
            w = &w * &vs[k].entries[i];
            if w.is_zero() {
                break;
            }
        }
        acc += &w;
    }
    acc
}

/// Value of the surgery invariant with its ingredients.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TauResult {
    #[serde(serialize_with = "crate::kirby::ser_scalar")]
    pub tau: Scalar,
    pub n_components: usize,
    pub b_minus: usize,
    pub linking: LinkingData,
    /// False when α failed the sufficient Kirby conditions; the value is
    /// still computed.
    pub kirby_ok: bool,
}

/// `(θ⁺α)^{b₋−n} (θ⁻α)^{−b₋} E(Ψ(T)) α^{⊗n}`.
pub fn invariant_tau(p: &StringLinkPresentation, alpha: &DenseTensor, b: &CoendBundle) -> Result<TauResult> {
    let k = kirby_check(alpha, b)?;
    if !k.normalizable {
        return Err(Error::NotNormalizable(format!(
            "θ⁺α = {}, θ⁻α = {}",
            k.theta_plus_alpha, k.theta_minus_alpha
        )));
    }
    let linking = closure_linking(&presentation_to_tangle(p)?)?;
    let d = psi_full(p)?;
    let value = Evaluator::new(b).contract_with(&d, alpha);
    let n = linking.n_components as i64;
    let bm = linking.b_minus as i64;
    let tau = normalize(value, &k, bm, n);
    Ok(TauResult { tau, n_components: linking.n_components, b_minus: linking.b_minus, kirby_ok: k.kirby_ok, linking })
}

fn normalize(value: Scalar, k: &KirbyCandidate, b_minus: i64, n: i64) -> Scalar {
    let a = k.theta_plus_alpha.pow(b_minus - n).expect("normalizable");
    let c = k.theta_minus_alpha.pow(-b_minus).expect("normalizable");
    &(&a * &c) * &value
}

/// `(ω₊Δ⊗θ₋)Δ`: the one-input diagram of the +1-framed right-handed trefoil.
pub fn poincare_diagram() -> HopfDiagram {
    use Generator::*;
    let t = BraidedTerm::new(
        1,
        vec![Slice::new(0, Delta, 0), Slice::new(1, ThetaMinus, 0), Slice::new(0, Delta, 0), Slice::new(0, OmegaPlus, 0)],
    );
    HopfDiagram::new(t.expect("fixed slices fit")).expect("cod-0 term")
}

/// The closing formula for the Poincaré sphere: `(θ⁺α)^{−1} E((ω₊Δ⊗θ₋)Δ) α`.
pub fn poincare_hand_formula(alpha: &DenseTensor, b: &CoendBundle) -> Result<Scalar> {
    let k = kirby_check(alpha, b)?;
    if !k.normalizable {
        return Err(Error::NotNormalizable("θ±α vanishes".into()));
    }
    let d = poincare_diagram();
    let value = Evaluator::new(b).contract_with(&d, alpha);
    Ok(&k.theta_plus_alpha.inv().expect("normalizable") * &value)
}

/// τ of the unknot with framing `f` and uniform α, summed directly over
/// group elements from the twist values.
pub fn gauss_sum_oracle(p: &AbelianParams, f: i64) -> Scalar {
    let sum = |e: i64| {
        let mut acc = Scalar::zero();
        for g in 0..p.m {
            acc += &p.theta(g).pow(e).expect("twist values are roots of unity");
        }
        acc
    };
    let gf = sum(f);
    let norm = if f < 0 { sum(-1) } else { sum(1) };
    &gf * &norm.inv().expect("Gauss sum is nonzero")
}

/// `(1, …, 1)`: the sum of all group elements.
pub fn uniform_alpha(dim: usize) -> DenseTensor {
    DenseTensor { shape: vec![dim], entries: vec![Scalar::one(); dim] }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::builtin_bundles;

    #[test]
    fn unit_and_zero_candidates() {
        for b in builtin_bundles() {
            let k = kirby_check(&b.eta, &b).unwrap();
            assert!(k.kirby_ok && k.normalizable, "{}", b.name);
            let z = kirby_check(&DenseTensor::zeros(vec![b.dim]), &b).unwrap();
            assert!(z.kirby_ok && !z.normalizable);
            assert!(kirby_check(&uniform_alpha(b.dim), &b).unwrap().kirby_ok);
        }
    }
}
