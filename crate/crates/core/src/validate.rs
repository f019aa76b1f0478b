//! Exact axiom checks for coend bundles.

use crate::bundle::{CoendBundle, TestModule};
use crate::eval::Evaluator;
use crate::relations::bar_relations;
use crate::scalar::Scalar;
use crate::tensor::{compose, identity_n, kron, DenseTensor, SparseMap};

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub passed: Vec<String>,
    /// `axiom: detail` for every failed identity.
    pub failed: Vec<String>,
}

impl ValidationReport {
    pub fn ok(&self) -> bool {
        self.failed.is_empty()
    }

    /// Names of the failed axioms, without details.
    pub fn failed_axioms(&self) -> Vec<&str> {
        self.failed.iter().map(|f| f.split(':').next().unwrap_or(f)).collect()
    }

    fn record(&mut self, name: &str, ok: bool, detail: &str) {
        if ok {
            self.passed.push(name.to_string());
        } else {
            self.failed.push(format!("{name}: {detail}"));
        }
    }
}

fn eq(a: &SparseMap, b: &SparseMap) -> bool {
    a.arity_in == b.arity_in && a.arity_out == b.arity_out && a.to_dense() == b.to_dense()
}

/// `f` then `g` then …
fn chain(maps: &[SparseMap]) -> SparseMap {
    let mut it = maps.iter();
    let first = it.next().expect("non-empty chain").clone();
    it.fold(first, |acc, m| compose(&acc, m))
}

fn shapes_ok(b: &CoendBundle) -> Result<(), String> {
    let d = b.dim;
    let want: [(&str, &DenseTensor, usize); 12] = [
        ("delta", &b.delta, 3),
        ("eps", &b.eps, 1),
        ("s", &b.s, 2),
        ("sinv", &b.sinv, 2),
        ("mu", &b.mu, 3),
        ("eta", &b.eta, 1),
        ("omega_plus", &b.omega_plus, 2),
        ("omega_minus", &b.omega_minus, 2),
        ("theta_plus", &b.theta_plus, 1),
        ("theta_minus", &b.theta_minus, 1),
        ("braid", &b.braid, 4),
        ("braid_inv", &b.braid_inv, 4),
    ];
    for (name, t, r) in want {
        if t.shape != vec![d; r] || t.entries.len() != d.pow(r as u32) {
            return Err(format!("{name} has shape {:?}, expected {:?}", t.shape, vec![d; r]));
        }
    }
    Ok(())
}

pub fn bundle_validate(b: &CoendBundle) -> ValidationReport {
    let mut rep = ValidationReport::default();
    if let Err(e) = shapes_ok(b) {
        rep.record("shape", false, &e);
        return rep;
    }
    let d = b.dim;
    let id = identity_n(d, 1);
    let id2 = identity_n(d, 2);
    let delta = SparseMap::from_dense(&b.delta, 1, 2);
    let eps = SparseMap::from_dense(&b.eps, 1, 0);
    let s = SparseMap::from_dense(&b.s, 1, 1);
    let sinv = SparseMap::from_dense(&b.sinv, 1, 1);
    let mu = SparseMap::from_dense(&b.mu, 2, 1);
    let eta = SparseMap::from_dense(&b.eta, 0, 1);
    let c = SparseMap::from_dense(&b.braid, 2, 2);
    let ci = SparseMap::from_dense(&b.braid_inv, 2, 2);
    let wp = SparseMap::from_dense(&b.omega_plus, 2, 0);
    let wm = SparseMap::from_dense(&b.omega_minus, 2, 0);
    let unit_scalar = identity_n(d, 0);

    rep.record(
        "counit",
        eq(&chain(&[delta.clone(), kron(&eps, &id)]), &id) && eq(&chain(&[delta.clone(), kron(&id, &eps)]), &id),
        "(ε⊗id)Δ or (id⊗ε)Δ differs from id",
    );
    rep.record(
        "coassociativity",
        eq(&chain(&[delta.clone(), kron(&delta, &id)]), &chain(&[delta.clone(), kron(&id, &delta)])),
        "(Δ⊗id)Δ ≠ (id⊗Δ)Δ",
    );
    rep.record(
        "unit",
        eq(&chain(&[kron(&eta, &id), mu.clone()]), &id) && eq(&chain(&[kron(&id, &eta), mu.clone()]), &id),
        "μ(η⊗id) or μ(id⊗η) differs from id",
    );
    rep.record(
        "associativity",
        eq(&chain(&[kron(&mu, &id), mu.clone()]), &chain(&[kron(&id, &mu), mu.clone()])),
        "μ(μ⊗id) ≠ μ(id⊗μ)",
    );
    rep.record(
        "braiding-inverse",
        eq(&compose(&c, &ci), &id2) && eq(&compose(&ci, &c), &id2),
        "c·c⁻¹ ≠ id",
    );
    let c12 = kron(&c, &id);
    let c23 = kron(&id, &c);
    rep.record(
        "braid-relation",
        eq(&chain(&[c12.clone(), c23.clone(), c12.clone()]), &chain(&[c23.clone(), c12, c23])),
        "Yang–Baxter equation fails",
    );
    let lhs = compose(&mu, &delta);
    let rhs = chain(&[kron(&delta, &delta), kron(&kron(&id, &c), &id), kron(&mu, &mu)]);
    let bialg = eq(&lhs, &rhs)
        && eq(&compose(&mu, &eps), &kron(&eps, &eps))
        && eq(&compose(&eta, &delta), &kron(&eta, &eta))
        && eq(&compose(&eta, &eps), &unit_scalar);
    rep.record("bialgebra", bialg, "Δ, ε are not algebra maps for the braided product");
    let unit_counit = compose(&eps, &eta);
    rep.record(
        "antipode",
        eq(&chain(&[delta.clone(), kron(&s, &id), mu.clone()]), &unit_counit)
            && eq(&chain(&[delta.clone(), kron(&id, &s), mu.clone()]), &unit_counit),
        "μ(S⊗id)Δ ≠ ηε",
    );
    rep.record(
        "antipode-inverse",
        eq(&compose(&s, &sinv), &id) && eq(&compose(&sinv, &s), &id),
        "S·S⁻¹ ≠ id",
    );
    rep.record(
        "omega-plus",
        eq(&wp, &compose(&kron(&sinv, &id), &wm)),
        "ω⁺ ≠ ω⁻(S⁻¹⊗id)",
    );
    let ev = Evaluator::new(b);
    for r in bar_relations() {
        let first = ev.eval_term(&r.sides[0]);
        let ok = r.sides[1..].iter().all(|t| eq(&ev.eval_term(t), &first));
        rep.record(&format!("relation-{}", r.name), ok, "sides evaluate differently");
    }
    for (k, m) in b.modules.iter().enumerate() {
        validate_module(b, k, m, &mut rep);
    }
    rep
}

fn validate_module(b: &CoendBundle, k: usize, m: &TestModule, rep: &mut ValidationReport) {
    let v = m.dim;
    let tag = |s: &str| format!("module-{k}-{s}");
    let shapes = m.braid.shape == vec![v; 4]
        && m.braid_inv.shape == vec![v; 4]
        && m.twist.shape == vec![v; 2]
        && m.twist_inv.shape == vec![v; 2]
        && m.ev.shape == vec![v; 2]
        && m.coev.shape == vec![v; 2]
        && m.i_v.shape == vec![v, v, b.dim];
    if !shapes {
        rep.record(&tag("shape"), false, "tensor shapes do not match the module dimension");
        return;
    }
    let id = identity_n(v, 1);
    let id2 = identity_n(v, 2);
    let c = SparseMap::from_dense(&m.braid, 2, 2);
    let ci = SparseMap::from_dense(&m.braid_inv, 2, 2);
    let th = SparseMap::from_dense(&m.twist, 1, 1);
    let thi = SparseMap::from_dense(&m.twist_inv, 1, 1);
    let ev = SparseMap::from_dense(&m.ev, 2, 0);
    let coev = SparseMap::from_dense(&m.coev, 0, 2);
    rep.record(&tag("braid-inverse"), eq(&compose(&c, &ci), &id2) && eq(&compose(&ci, &c), &id2), "c·c⁻¹ ≠ id");
    rep.record(&tag("twist-inverse"), eq(&compose(&th, &thi), &id) && eq(&compose(&thi, &th), &id), "θ·θ⁻¹ ≠ id");
    // snakes: (id_V ⊗ ev)(coev ⊗ id_V) = id_V and (ev ⊗ id)(id ⊗ coev) = id on V^∨
    let snake1 = chain(&[kron(&coev, &id), kron(&id, &ev)]);
    let snake2 = chain(&[kron(&id, &coev), kron(&ev, &id)]);
    rep.record(&tag("snake"), eq(&snake1, &id) && eq(&snake2, &id), "duality zigzag is not the identity");
    let tt = kron(&th, &th);
    rep.record(
        &tag("twist-naturality"),
        eq(&compose(&tt, &c), &compose(&c, &tt)),
        "θ⊗θ does not commute with the braiding",
    );
    let c12 = kron(&c, &id);
    let c23 = kron(&id, &c);
    rep.record(
        &tag("braid-relation"),
        eq(&chain(&[c12.clone(), c23.clone(), c12.clone()]), &chain(&[c23.clone(), c12, c23])),
        "Yang–Baxter equation fails",
    );
    let fact = crate::oracle::module_probe_factorization(b, k);
    rep.record(&tag("factorization"), fact.is_ok(), fact.err().as_deref().unwrap_or(""));
}

/// `θ^±_A α` and friends need a scalar from a rank-0 map.
pub fn scalar_of(m: &SparseMap) -> Scalar {
    m.cols[0].first().map(|(_, v)| v.clone()).unwrap_or_else(Scalar::zero)
}

/// A built-in bundle with one tensor damaged, and the axiom that must catch it.
#[derive(Clone, Debug)]
pub struct CorruptionFixture {
    pub name: String,
    pub bundle: CoendBundle,
    pub expected_axiom: &'static str,
}

/// Five damaged copies of `base`, each entry chosen by `seed`.
pub fn corruption_fixtures(base: &CoendBundle, seed: u64) -> Vec<CorruptionFixture> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::new();
    // bump one entry of a tensor, picking among its nonzero entries when there are any
    let mut bump = |t: &mut DenseTensor, delta: Scalar| {
        let nz: Vec<usize> = (0..t.entries.len()).filter(|&i| !t.entries[i].is_zero()).collect();
        let i = if nz.is_empty() { rng.gen_range(0..t.entries.len()) } else { nz[rng.gen_range(0..nz.len())] };
        t.entries[i] = &t.entries[i] + &delta;
    };
    let one = Scalar::one();
    let mut push = |label: &str, axiom: &'static str, f: &mut dyn FnMut(&mut CoendBundle)| {
        let mut b = base.clone();
        f(&mut b);
        b.name = format!("{}-{label}", base.name);
        out.push(CorruptionFixture { name: b.name.clone(), bundle: b, expected_axiom: axiom });
    };
    push("eps", "counit", &mut |b| bump(&mut b.eps, one.clone()));
    push("eta", "unit", &mut |b| bump(&mut b.eta, one.clone()));
    push("s", "antipode", &mut |b| bump(&mut b.s, one.clone()));
    push("braid", "braiding-inverse", &mut |b| bump(&mut b.braid, one.clone()));
    push("omega", "omega-plus", &mut |b| bump(&mut b.omega_plus, one.clone()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::builtin_bundles;

    #[test]
    fn builtins_pass_and_corruptions_are_caught() {
        for b in builtin_bundles() {
            let rep = bundle_validate(&b);
            assert!(rep.ok(), "{}: {:?}", b.name, rep.failed);
            for fx in corruption_fixtures(&b, 7) {
                let rep = bundle_validate(&fx.bundle);
                assert!(rep.failed_axioms().contains(&fx.expected_axiom), "{}: {:?}", fx.name, rep.failed);
            }
        }
    }
}
