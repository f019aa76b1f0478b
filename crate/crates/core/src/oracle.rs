//! Reference evaluation of framed tangles in a ribbon category presented by
//! one object `V`: its braiding, twist and left duality. Crossings involving
//! `V^∨` and the right duality are derived from those.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::bundle::{CoendBundle, TestModule};
use crate::error::{Error, Result};
use crate::eval::Evaluator;
use crate::network::{as_map, contract_network, SparseTensor};
use crate::scalar::Scalar;
use crate::tangle::{presentation_to_tangle, to_handle, validate_tangle, Mode, StringLinkPresentation, TangleEvent, TangleWord};
use crate::tensor::{compose, decode, encode, identity_n, kron, Key, SparseMap, SparseVec};
use crate::term::{BraidedTerm, Generator, HopfDiagram, Slice};
use crate::translate::{phi, psi_full};

/// Crossing maps indexed by (left is dual, right is dual).
#[derive(Clone, Debug)]
struct Crossings {
    pos: [[SparseMap; 2]; 2],
    neg: [[SparseMap; 2]; 2],
}

#[derive(Clone, Debug)]
pub struct RibbonModule {
    pub dim: usize,
    crossings: Crossings,
    /// `V^∨ ⊗ V → 1`
    ev: SparseMap,
    /// `V ⊗ V^∨ → 1`
    ev_right: SparseMap,
    /// `1 → V ⊗ V^∨`
    coev: SparseMap,
    /// `1 → V^∨ ⊗ V`
    coev_right: SparseMap,
    pub twist: SparseMap,
    /// Every crossing carries labels along strands and every cap and cup
    /// pairs equal labels, so a tangle is a sum over component labels.
    transports: bool,
}

/// Inverse of a square map by Gauss–Jordan elimination.
pub fn invert(m: &SparseMap) -> Option<SparseMap> {
    assert_eq!(m.arity_in, m.arity_out);
    let n = m.cols.len();
    let dim = m.dim;
    // a[row][col] with row = output, col = input
    let mut a = vec![vec![Scalar::zero(); n]; n];
    for (c, col) in m.cols.iter().enumerate() {
        for (k, v) in col {
            a[encode(k, dim)][c] = v.clone();
        }
    }
    let mut inv: Vec<Vec<Scalar>> = (0..n).map(|i| (0..n).map(|j| Scalar::from_int((i == j) as i64)).collect()).collect();
    for c in 0..n {
        let piv = (c..n).find(|&r| !a[r][c].is_zero())?;
        a.swap(c, piv);
        inv.swap(c, piv);
        let f = a[c][c].inv()?;
        for j in 0..n {
            a[c][j] = &a[c][j] * &f;
            inv[c][j] = &inv[c][j] * &f;
        }
        for r in 0..n {
            if r != c && !a[r][c].is_zero() {
                let g = a[r][c].clone();
                for j in 0..n {
                    let (x, y) = (&a[c][j] * &g, &inv[c][j] * &g);
                    a[r][j] = &a[r][j] - &x;
                    inv[r][j] = &inv[r][j] - &y;
                }
            }
        }
    }
    let cols = (0..n)
        .map(|c| (0..n).filter(|&r| !inv[r][c].is_zero()).map(|r| (decode(r, dim, m.arity_out), inv[r][c].clone())).collect())
        .collect();
    Some(SparseMap { dim, arity_in: m.arity_in, arity_out: m.arity_out, cols })
}

fn chain(maps: &[&SparseMap]) -> SparseMap {
    let mut acc = maps[0].clone();
    for m in &maps[1..] {
        acc = compose(&acc, m);
    }
    acc
}

impl RibbonModule {
    pub fn new(
        braid: SparseMap,
        braid_inv: SparseMap,
        twist: SparseMap,
        ev: SparseMap,
        coev: SparseMap,
    ) -> Result<RibbonModule> {
        let dim = braid.dim;
        let id = identity_n(dim, 1);
        // h: W⊗V → V⊗W becomes V^∨⊗W → W⊗V^∨
        let mate = |h: &SparseMap| {
            chain(&[&kron(&identity_n(dim, 2), &coev), &kron(&kron(&id, h), &id), &kron(&ev, &identity_n(dim, 2))])
        };
        let p_uu = braid;
        let n_uu = braid_inv;
        let p_du = mate(&n_uu);
        let n_du = mate(&p_uu);
        let p_dd = mate(&n_du);
        let n_dd = mate(&p_du);
        let p_ud = invert(&n_du).ok_or_else(|| Error::Other("derived crossing is singular".into()))?;
        let n_ud = invert(&p_du).ok_or_else(|| Error::Other("derived crossing is singular".into()))?;
        let ev_right = chain(&[&kron(&twist, &id), &p_ud, &ev]);
        let coev_right = chain(&[&coev, &p_ud, &kron(&id, &twist)]);
        let crossings = Crossings { pos: [[p_uu, p_ud], [p_du, p_dd]], neg: [[n_uu, n_ud], [n_du, n_dd]] };
        let transports = crossings.pos.iter().chain(&crossings.neg).flatten().all(carries_labels)
            && [&ev, &ev_right, &coev, &coev_right].into_iter().all(carries_labels);
        Ok(RibbonModule { dim, crossings, ev, ev_right, coev, coev_right, twist, transports })
    }

    pub fn from_test_module(m: &TestModule) -> Result<RibbonModule> {
        RibbonModule::new(
            SparseMap::from_dense(&m.braid, 2, 2),
            SparseMap::from_dense(&m.braid_inv, 2, 2),
            SparseMap::from_dense(&m.twist, 1, 1),
            SparseMap::from_dense(&m.ev, 2, 0),
            SparseMap::from_dense(&m.coev, 0, 2),
        )
    }

    fn event_map(&self, e: TangleEvent, dual: &[bool]) -> &SparseMap {
        match e {
            TangleEvent::Cross { sign, .. } => {
                let t = if sign > 0 { &self.crossings.pos } else { &self.crossings.neg };
                &t[dual[0] as usize][dual[1] as usize]
            }
            TangleEvent::Cap { .. } => {
                if dual[0] {
                    &self.ev
                } else {
                    &self.ev_right
                }
            }
            TangleEvent::Cup { .. } => {
                if dual[0] {
                    &self.coev_right
                } else {
                    &self.coev
                }
            }
        }
    }

    /// The linear map of a tangle (bottom strands in, top strands out).
    ///
    /// Modules that carry labels along strands are summed over component
    /// labels; others are contracted as a network of one tensor per event.
    pub fn evaluate(&self, w: &TangleWord, mode: Mode) -> Result<SparseMap> {
        self.evaluate_with(w, mode, self.transports)
    }

    /// [`evaluate`](Self::evaluate) without the component-label shortcut.
    pub fn evaluate_network(&self, w: &TangleWord, mode: Mode) -> Result<SparseMap> {
        self.evaluate_with(w, mode, false)
    }

    fn evaluate_with(&self, w: &TangleWord, mode: Mode, by_labels: bool) -> Result<SparseMap> {
        let rep = validate_tangle(w, mode)?;
        let bottom: Vec<usize> = (0..w.bottom).collect();
        let mut cur = bottom.clone();
        let mut fresh = w.bottom;
        let mut events: Vec<(&SparseMap, Vec<usize>, Vec<usize>)> = Vec::with_capacity(w.events.len());
        for (e, &ev) in w.events.iter().enumerate() {
            let pieces = if rep.pieces.event_in[e].is_empty() { &rep.pieces.event_out[e] } else { &rep.pieces.event_in[e] };
            let dual: Vec<bool> = pieces.iter().map(|&p| rep.piece_dir[p] < 0).collect();
            let map = self.event_map(ev, &dual);
            let at = ev.pos() - 1;
            let ins: Vec<usize> = cur[at..at + map.arity_in].to_vec();
            let outs: Vec<usize> = (fresh..fresh + map.arity_out).collect();
            fresh += map.arity_out;
            cur.splice(at..at + map.arity_in, outs.iter().copied());
            events.push((map, ins, outs));
        }
        if by_labels {
            if let Some(m) = self.evaluate_by_labels(&events, &bottom, &cur, fresh) {
                return Ok(m);
            }
        }
        let mut tensors: Vec<SparseTensor> = events.iter().map(|(m, i, o)| SparseTensor::from_map(m, i, o)).collect();
        // strands with no events pass straight through
        let mut top = cur.clone();
        for (i, l) in cur.iter().enumerate() {
            if *l < w.bottom {
                tensors.push(SparseTensor::from_map(&identity_n(self.dim, 1), &[*l], &[fresh]));
                top[i] = fresh;
                fresh += 1;
            }
        }
        Ok(as_map(&contract_network(tensors, self.dim), &bottom, &top, self.dim))
    }

    /// Sum over one label per component, for modules that transport labels.
    /// `None` when there are too many components for enumeration to pay off.
    fn evaluate_by_labels(
        &self,
        events: &[(&SparseMap, Vec<usize>, Vec<usize>)],
        bottom: &[usize],
        top: &[usize],
        n_legs: usize,
    ) -> Option<SparseMap> {
        let dim = self.dim;
        let mut parent: Vec<usize> = (0..n_legs).collect();
        fn find(p: &mut [usize], mut x: usize) -> usize {
            while p[x] != x {
                p[x] = p[p[x]];
                x = p[x];
            }
            x
        }
        let union = |p: &mut Vec<usize>, a: usize, b: usize| {
            let (ra, rb) = (find(p, a), find(p, b));
            p[ra] = rb;
        };
        for (_, ins, outs) in events {
            match (ins.len(), outs.len()) {
                (2, 2) => {
                    union(&mut parent, ins[0], outs[1]);
                    union(&mut parent, ins[1], outs[0]);
                }
                (2, 0) => union(&mut parent, ins[0], ins[1]),
                (0, 2) => union(&mut parent, outs[0], outs[1]),
                _ => return None,
            }
        }
        // components that carry at least one leg in use
        let mut comp_of = vec![usize::MAX; n_legs];
        let mut n_comp = 0;
        let used = events.iter().flat_map(|(_, i, o)| i.iter().chain(o)).chain(bottom).chain(top);
        let mut root_index: HashMap<usize, usize> = HashMap::new();
        for &l in used {
            let r = find(&mut parent, l);
            let c = *root_index.entry(r).or_insert_with(|| {
                n_comp += 1;
                n_comp - 1
            });
            comp_of[l] = c;
        }
        let labelings = (dim as f64).powi(n_comp as i32);
        if labelings * (events.len().max(1) as f64) > 2.0e7 {
            return None;
        }
        let mut cols: Vec<Vec<(Key, Scalar)>> = vec![Vec::new(); dim.pow(bottom.len() as u32)];
        let mut acc: HashMap<(Vec<u8>, Vec<u8>), Scalar> = HashMap::new();
        for flat in 0..dim.pow(n_comp as u32) {
            let labels = decode(flat, dim, n_comp);
            let lab = |l: usize| labels[comp_of[l]];
            let mut amp = Scalar::one();
            for (m, ins, outs) in events {
                let input: Vec<u8> = ins.iter().map(|&l| lab(l)).collect();
                let output: Vec<u8> = outs.iter().map(|&l| lab(l)).collect();
                let col = &m.cols[encode(&input, dim)];
                match col.iter().find(|(k, _)| *k == output) {
                    Some((_, v)) => amp = &amp * v,
                    None => {
                        amp = Scalar::zero();
                        break;
                    }
                }
            }
            if amp.is_zero() {
                continue;
            }
            let key = (bottom.iter().map(|&l| lab(l)).collect(), top.iter().map(|&l| lab(l)).collect());
            match acc.get_mut(&key) {
                Some(a) => *a += &amp,
                None => {
                    acc.insert(key, amp);
                }
            }
        }
        for ((b, t), v) in acc {
            if !v.is_zero() {
                cols[encode(&b, dim)].push((t, v));
            }
        }
        for c in cols.iter_mut() {
            c.sort_by(|a, b| a.0.cmp(&b.0));
        }
        Some(SparseMap { dim, arity_in: bottom.len(), arity_out: top.len(), cols })
    }

    /// Same map as [`evaluate`](Self::evaluate), computed by a top-down sweep
    /// on covectors. Kept as an independent check of the network contraction.
    pub fn evaluate_sweep(&self, w: &TangleWord, mode: Mode) -> Result<SparseMap> {
        let rep = validate_tangle(w, mode)?;
        let top = rep.pieces.top_pieces.len();
        let dim = self.dim;
        let widths = w.widths()?;
        // key = top indices followed by the indices of the current strands
        let mut state: SparseVec = HashMap::new();
        for t in 0..dim.pow(top as u32) {
            let k = decode(t, dim, top);
            let mut key = k.clone();
            key.extend_from_slice(&k);
            state.insert(key, Scalar::one());
        }
        for (e, &ev) in w.events.iter().enumerate().rev() {
            let pieces = if rep.pieces.event_in[e].is_empty() { &rep.pieces.event_out[e] } else { &rep.pieces.event_in[e] };
            let dual: Vec<bool> = pieces.iter().map(|&p| rep.piece_dir[p] < 0).collect();
            let map = self.event_map(ev, &dual);
            state = apply_transpose(&state, top + ev.pos() - 1, map, widths[e]);
            if state.is_empty() {
                break;
            }
        }
        let bottom = w.bottom;
        let mut cols = vec![Vec::new(); dim.pow(bottom as u32)];
        for (key, v) in state {
            cols[encode(&key[top..], dim)].push((key[..top].to_vec(), v));
        }
        for c in cols.iter_mut() {
            c.sort_by(|a, b| a.0.cmp(&b.0));
        }
        Ok(SparseMap { dim, arity_in: bottom, arity_out: top, cols })
    }
}

/// True when every nonzero entry sends `(a, b)` to `(b, a)` (crossings) or
/// pairs equal labels (caps and cups).
fn carries_labels(m: &SparseMap) -> bool {
    m.cols.iter().enumerate().all(|(flat, col)| {
        let input = decode(flat, m.dim, m.arity_in);
        col.iter().all(|(out, v)| {
            v.is_zero()
                || match (m.arity_in, m.arity_out) {
                    (2, 2) => out[0] == input[1] && out[1] == input[0],
                    (2, 0) => input[0] == input[1],
                    (0, 2) => out[0] == out[1],
                    _ => false,
                }
        })
    })
}

/// Builds a map on a 2-dimensional space from its nonzero entries.
fn map_from_entries(arity_in: usize, arity_out: usize, entries: &[(&[u8], &[u8], Scalar)]) -> SparseMap {
    let mut cols = vec![Vec::new(); 2usize.pow(arity_in as u32)];
    for (i, o, v) in entries {
        cols[encode(i, 2)].push((o.to_vec(), v.clone()));
    }
    for c in cols.iter_mut() {
        c.sort_by(|a, b| a.0.cmp(&b.0));
    }
    SparseMap { dim: 2, arity_in, arity_out, cols }
}

/// The vector representation of quantum sl₂ at `q = ζ_order²`, with all
/// entries in `ℚ(ζ_{2·order})`.
///
/// Unlike the pointed modules of the abelian bundles it sees more than
/// linking numbers and framings, so it serves as an isotopy oracle for
/// tangle manipulations. The twist scalar is the root of unity solving the
/// right snake identity.
pub fn quantum_sl2(order: u32) -> Result<RibbonModule> {
    // one ambient field for every entry keeps representations comparable
    let q = Scalar::zeta(2 * order, 4);
    let qi = Scalar::zeta(2 * order, -4);
    let one = Scalar::one;
    let braid = map_from_entries(
        2,
        2,
        &[
            (&[0, 0], &[0, 0], q.clone()),
            (&[1, 1], &[1, 1], q.clone()),
            (&[0, 1], &[1, 0], one()),
            (&[1, 0], &[0, 1], one()),
            (&[1, 0], &[1, 0], &q + &(-&qi)),
        ],
    );
    let braid_inv = invert(&braid).ok_or_else(|| Error::Other("singular braiding".into()))?;
    let ev = map_from_entries(2, 0, &[(&[0, 0], &[], one()), (&[1, 1], &[], one())]);
    let coev = map_from_entries(0, 2, &[(&[], &[0, 0], one()), (&[], &[1, 1], one())]);
    let id = identity_n(2, 1);
    let probe = RibbonModule::new(braid.clone(), braid_inv.clone(), id.clone(), ev.clone(), coev.clone())?;
    let snake = chain(&[&kron(&id, &probe.coev_right), &kron(&probe.ev_right, &id)]);
    // with twist t the snake scales by t²
    let x = snake.cols[0].iter().find(|(k, _)| k[0] == 0).map(|(_, v)| v.clone()).unwrap_or_else(Scalar::zero);
    let t = (0..2 * order as i64)
        .map(|k| Scalar::zeta(2 * order, k))
        .find(|t| (&(t * t) * &x).is_one())
        .ok_or_else(|| Error::Other("no root of unity solves the snake identity".into()))?;
    let twist = map_from_entries(1, 1, &[(&[0], &[0], t.clone()), (&[1], &[1], t)]);
    RibbonModule::new(braid, braid_inv, twist, ev, coev)
}

/// Rows of a map: output tuple → inputs reaching it with their coefficients.
fn rows(map: &SparseMap) -> HashMap<Key, Vec<(Key, Scalar)>> {
    let mut out: HashMap<Key, Vec<(Key, Scalar)>> = HashMap::new();
    for (i, col) in map.cols.iter().enumerate() {
        for (k, v) in col {
            out.entry(k.clone()).or_default().push((decode(i, map.dim, map.arity_in), v.clone()));
        }
    }
    out
}

/// Pulls a covector back through `map` acting at offset `left` of the key.
fn apply_transpose(state: &SparseVec, left: usize, map: &SparseMap, _width_below: usize) -> SparseVec {
    let r = rows(map);
    let mut out: SparseVec = HashMap::with_capacity(state.len());
    for (key, c) in state {
        let Some(pre) = r.get(&key[left..left + map.arity_out]) else { continue };
        for (x, v) in pre {
            let mut nk = Vec::with_capacity(key.len() + map.arity_in - map.arity_out);
            nk.extend_from_slice(&key[..left]);
            nk.extend_from_slice(x);
            nk.extend_from_slice(&key[left + map.arity_out..]);
            let t = c * v;
            match out.get_mut(&nk) {
                Some(acc) => *acc += &t,
                None => {
                    out.insert(nk, t);
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Oracle value of a tangle against one test module of a bundle.
pub fn eval_tangle_oracle(w: &TangleWord, m: &TestModule, mode: Mode) -> Result<SparseMap> {
    RibbonModule::from_test_module(m)?.evaluate(w, mode)
}

/// `E(D) ∘ i_V^{⊗n}`: a map `(V^∨⊗V)^{⊗n} → 1`.
pub fn factorized_side(ev: &Evaluator, d: &HopfDiagram, m: &TestModule) -> SparseMap {
    let form = ev.eval_term(d.term());
    let iv = SparseMap::from_dense(&m.i_v, 2, 1);
    let n = d.n();
    let v = m.dim;
    let a = ev.dim;
    // a form is cheap to contract index by index
    let cols: Vec<Vec<(Key, Scalar)>> = (0..v.pow(2 * n as u32))
        .into_par_iter()
        .map(|flat| {
            let key = decode(flat, v, 2 * n);
            let mut partial: Vec<(Key, Scalar)> = vec![(Vec::new(), Scalar::one())];
            for k in 0..n {
                let col = &iv.cols[encode(&key[2 * k..2 * k + 2], v)];
                let mut next = Vec::with_capacity(partial.len() * col.len());
                for (pk, pv) in &partial {
                    for (g, gv) in col {
                        let mut nk = pk.clone();
                        nk.push(g[0]);
                        next.push((nk, pv * gv));
                    }
                }
                partial = next;
            }
            let mut acc = Scalar::zero();
            for (gk, c) in partial {
                if let Some((_, val)) = form.cols[encode(&gk, a)].first() {
                    acc += &(&c * val);
                }
            }
            if acc.is_zero() {
                vec![]
            } else {
                vec![(Vec::new(), acc)]
            }
        })
        .collect();
    SparseMap { dim: v, arity_in: 2 * n, arity_out: 0, cols }
}

/// Outcome of comparing a diagram's evaluation with its handle's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FactorizationReport {
    /// One entry per test module: whether both sides agree exactly.
    pub modules: Vec<(String, bool)>,
}

impl FactorizationReport {
    pub fn ok(&self) -> bool {
        self.modules.iter().all(|(_, ok)| *ok)
    }
}

/// Checks `T_{V,…,V}(φ(D)) = E(D) ∘ i_V^{⊗n}` for every test module.
pub fn check_factorization(d: &HopfDiagram, b: &CoendBundle) -> Result<FactorizationReport> {
    let ev = Evaluator::new(b);
    let h = phi(d);
    let mut modules = Vec::new();
    for m in &b.modules {
        let lhs = eval_tangle_oracle(&h, m, Mode::Handle)?;
        let rhs = factorized_side(&ev, d, m);
        modules.push((m.name.clone(), lhs == rhs));
    }
    Ok(FactorizationReport { modules })
}

/// Checks `T_{V,…,V}(F(T)) = E(Ψ(T)) ∘ i_V^{⊗n}` for every test module,
/// where `T` is the string link a presentation stands for.
pub fn check_retraction(p: &StringLinkPresentation, b: &CoendBundle) -> Result<FactorizationReport> {
    let ev = Evaluator::new(b);
    let h = to_handle(&presentation_to_tangle(p)?)?;
    let d = psi_full(p)?;
    let mut modules = Vec::new();
    for m in &b.modules {
        let lhs = eval_tangle_oracle(&h, m, Mode::Handle)?;
        let rhs = factorized_side(&ev, &d, m);
        modules.push((m.name.clone(), lhs == rhs));
    }
    Ok(FactorizationReport { modules })
}

/// Small diagrams exercising every generator through the factorization.
pub fn probe_diagrams() -> Vec<HopfDiagram> {
    use Generator::*;
    let t = |dom: usize, s: &[(usize, Generator, usize)]| {
        HopfDiagram::new(BraidedTerm::new(dom, s.iter().map(|&(l, g, r)| Slice::new(l, g, r)).collect()).unwrap()).unwrap()
    };
    vec![
        t(1, &[(0, Eps, 0)]),
        t(1, &[(0, ThetaPlus, 0)]),
        t(1, &[(0, ThetaMinus, 0)]),
        t(2, &[(0, OmegaPlus, 0)]),
        t(2, &[(0, OmegaMinus, 0)]),
        t(1, &[(0, S, 0), (0, ThetaPlus, 0)]),
        t(1, &[(0, Sinv, 0), (0, Eps, 0)]),
        t(1, &[(0, Delta, 0), (0, OmegaPlus, 0)]),
        t(2, &[(0, BraidPlus, 0), (0, OmegaMinus, 0)]),
        t(2, &[(0, BraidMinus, 0), (0, ThetaPlus, 1), (0, Eps, 0)]),
        t(2, &[(0, S, 1), (0, OmegaMinus, 0)]),
    ]
}

/// Factorization of the probe diagrams for module `k` of a bundle.
pub fn module_probe_factorization(b: &CoendBundle, k: usize) -> std::result::Result<(), String> {
    let m = &b.modules[k];
    let ev = Evaluator::new(b);
    for d in probe_diagrams() {
        let lhs = eval_tangle_oracle(&phi(&d), m, Mode::Handle).map_err(|e| e.to_string())?;
        if lhs != factorized_side(&ev, &d, m) {
            return Err(format!("handle of {} differs", d.term().to_text().replace('\n', "; ")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bundle::builtin_bundles;
    use crate::tangle::TangleEvent::*;

    fn modules() -> Vec<RibbonModule> {
        let mut v: Vec<RibbonModule> =
            builtin_bundles().iter().flat_map(|b| b.modules.iter().map(|m| RibbonModule::from_test_module(m).unwrap())).collect();
        v.push(quantum_sl2(14).unwrap());
        v
    }

    fn same(rm: &RibbonModule, a: &TangleWord, b: &TangleWord, mode: Mode) -> bool {
        rm.evaluate(a, mode).unwrap() == rm.evaluate(b, mode).unwrap()
    }

    #[test]
    fn strategies_agree() {
        let corpus = crate::corpus::string_link_corpus(3);
        for rm in modules() {
            for (name, t) in corpus.iter().filter(|(_, t)| t.widths().unwrap().into_iter().max().unwrap_or(0) <= 5) {
                let h = to_handle(t).unwrap();
                for (w, mode) in [(t, Mode::StringLink), (&h, Mode::Handle)] {
                    if w.widths().unwrap().into_iter().max().unwrap_or(0) <= 8 {
                        let sweep = rm.evaluate_sweep(w, mode).unwrap();
                        assert_eq!(rm.evaluate(w, mode).unwrap(), sweep, "{name}");
                        assert_eq!(rm.evaluate_network(w, mode).unwrap(), sweep, "{name}");
                    }
                }
            }
        }
    }

    #[test]
    fn zigzags_and_second_moves() {
        for rm in modules() {
            let id1 = TangleWord::identity(1);
            for w in [vec![Cup { pos: 2 }, Cap { pos: 1 }], vec![Cup { pos: 1 }, Cap { pos: 2 }]] {
                assert!(same(&rm, &TangleWord::new(1, w).unwrap(), &id1, Mode::StringLink));
            }
            // R2 with all orientations, inside a closed picture
            for s in [1, -1] {
                let w = TangleWord::new(
                    0,
                    vec![Cup { pos: 1 }, Cup { pos: 3 }, Cross { pos: 2, sign: s }, Cross { pos: 2, sign: -s }, Cap { pos: 1 }, Cap { pos: 1 }],
                )
                .unwrap();
                let plain = TangleWord::new(0, vec![Cup { pos: 1 }, Cup { pos: 3 }, Cap { pos: 1 }, Cap { pos: 1 }]).unwrap();
                assert!(same(&rm, &w, &plain, Mode::ClosedLink));
            }
        }
    }

    #[test]
    fn third_move_all_signs() {
        for rm in modules() {
            for s in [1, -1] {
                // both halves induce the same permutation, so each product is pure
                let x = |p: usize| Cross { pos: p, sign: s };
                let tail = [x(1), x(2), x(1)];
                let a = TangleWord::new(3, [x(1), x(2), x(1)].iter().chain(&tail).copied().collect()).unwrap();
                let b = TangleWord::new(3, [x(2), x(1), x(2)].iter().chain(&tail).copied().collect()).unwrap();
                assert!(same(&rm, &a, &b, Mode::StringLink));
            }
        }
    }

    #[test]
    fn sl2_module_sees_chirality() {
        let rm = quantum_sl2(14).unwrap();
        let knot = |s: i8| {
            TangleWord::new(0, vec![Cup { pos: 1 }, Cup { pos: 1 }, Cross { pos: 2, sign: s }, Cross { pos: 2, sign: s }, Cross { pos: 2, sign: s }, Cap { pos: 1 }, Cap { pos: 1 }])
                .unwrap()
        };
        let val = |w: &TangleWord| rm.evaluate(w, Mode::ClosedLink).unwrap();
        assert_ne!(val(&knot(1)), val(&knot(-1)));
        let clasp = |s: i8| TangleWord::new(2, vec![Cross { pos: 1, sign: s }, Cross { pos: 1, sign: s }]).unwrap();
        assert_ne!(rm.evaluate(&clasp(1), Mode::StringLink).unwrap(), rm.evaluate(&clasp(-1), Mode::StringLink).unwrap());
    }

    #[test]
    fn positive_curl_is_the_twist() {
        for rm in modules() {
            let w = TangleWord::new(1, vec![Cup { pos: 2 }, Cross { pos: 1, sign: 1 }, Cap { pos: 2 }]).unwrap();
            assert_eq!(rm.evaluate(&w, Mode::StringLink).unwrap(), rm.twist);
            let mirror = TangleWord::new(1, vec![Cup { pos: 1 }, Cross { pos: 2, sign: 1 }, Cap { pos: 1 }]).unwrap();
            assert_eq!(rm.evaluate(&mirror, Mode::StringLink).unwrap(), rm.twist);
        }
    }

    #[test]
    fn builtin_probes_factor() {
        for b in builtin_bundles() {
            for k in 0..b.modules.len() {
                module_probe_factorization(&b, k).unwrap();
            }
        }
    }
}

#[cfg(test)]
mod retraction_tests {
    use super::*;
    use crate::bundle::builtin_bundles;
    use crate::tangle::{Letter, PureBraidWord};

    fn pres(n: usize, letters: Vec<Letter>, contractions: Vec<usize>, twists: Vec<i64>) -> StringLinkPresentation {
        StringLinkPresentation::new(PureBraidWord::new(n, letters).unwrap(), contractions, twists).unwrap()
    }

    #[test]
    fn small_presentations_retract() {
        let cases = vec![
            pres(1, vec![], vec![], vec![0]),
            pres(1, vec![], vec![], vec![1]),
            pres(1, vec![], vec![], vec![-2]),
            pres(2, vec![], vec![], vec![0, 0]),
            pres(2, vec![Letter::sigma(1, 2, 1)], vec![], vec![0, 0]),
            pres(2, vec![Letter::sigma(1, 2, -1)], vec![], vec![1, 0]),
            pres(3, vec![Letter::sigma(1, 3, 1)], vec![], vec![0, 0, 0]),
            pres(3, vec![Letter::sigma(1, 3, 1), Letter::sigma(2, 3, -1)], vec![], vec![0, 1, 0]),
            pres(3, vec![], vec![2], vec![0]),
            pres(3, vec![Letter::sigma(1, 2, 1)], vec![2], vec![1]),
            pres(3, vec![Letter::sigma(1, 3, 1), Letter::twist(2, 1)], vec![2], vec![0]),
        ];
        for b in builtin_bundles() {
            for (k, p) in cases.iter().enumerate() {
                let r = check_retraction(p, &b).unwrap();
                assert!(r.ok(), "case {k} on {}: {:?}", b.name, r);
            }
        }
    }

    #[test]
    fn retraction_detects_mismatches() {
        let pairs = vec![
            (pres(1, vec![], vec![], vec![1]), pres(1, vec![], vec![], vec![-1])),
            (pres(2, vec![Letter::sigma(1, 2, 1)], vec![], vec![0, 0]), pres(2, vec![Letter::sigma(1, 2, -1)], vec![], vec![0, 0])),
            (pres(3, vec![Letter::sigma(1, 2, 1)], vec![2], vec![0]), pres(3, vec![], vec![2], vec![0])),
        ];
        // a single pointed bundle may be blind to a sign (ℤ/4 has monodromy ±1)
        let bundles = builtin_bundles();
        for (p, q) in pairs {
            let h = to_handle(&presentation_to_tangle(&p).unwrap()).unwrap();
            let d = psi_full(&q).unwrap();
            let differs = bundles.iter().any(|b| {
                let ev = Evaluator::new(b);
                b.modules.iter().any(|m| eval_tangle_oracle(&h, m, Mode::Handle).unwrap() != factorized_side(&ev, &d, m))
            });
            assert!(differs, "{p} vs {q}");
        }
    }
}
