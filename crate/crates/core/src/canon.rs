//! Canonical forms.
//!
//! Terms are converted to their planar dataflow graph, simplified there, and
//! re-emitted in a deterministic order, so that two presentations differing
//! only by interchange of independent slices produce the same output.

use crate::rewrite::eliminate_antipodes;
use crate::term::{BraidedTerm, Generator, Slice};

#[derive(Clone, Debug)]
struct Node {
    gen: Generator,
    ins: Vec<usize>,
    outs: Vec<usize>,
    alive: bool,
}

/// Planar string diagram: strands are ids, nodes list their strands in order.
#[derive(Clone, Debug)]
pub struct Graph {
    inputs: Vec<usize>,
    outputs: Vec<usize>,
    nodes: Vec<Node>,
    strand_count: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum End {
    Node(usize, usize),
    Output(usize),
}

impl Graph {
    pub fn from_term(t: &BraidedTerm) -> Self {
        let mut next = t.dom();
        let inputs: Vec<usize> = (0..t.dom()).collect();
        let mut frontier = inputs.clone();
        let mut nodes = Vec::with_capacity(t.len());
        for s in t.slices() {
            let (a, b) = s.gen.arity();
            let ins: Vec<usize> = frontier[s.left..s.left + a].to_vec();
            let outs: Vec<usize> = (next..next + b).collect();
            next += b;
            frontier.splice(s.left..s.left + a, outs.iter().copied());
            nodes.push(Node { gen: s.gen, ins, outs, alive: true });
        }
        Graph { inputs, outputs: frontier, nodes, strand_count: next }
    }

    fn consumers(&self) -> Vec<Option<End>> {
        let mut c = vec![None; self.strand_count];
        for (k, n) in self.nodes.iter().enumerate().filter(|(_, n)| n.alive) {
            for (leg, &s) in n.ins.iter().enumerate() {
                c[s] = Some(End::Node(k, leg));
            }
        }
        for (p, &s) in self.outputs.iter().enumerate() {
            c[s] = Some(End::Output(p));
        }
        c
    }

    fn producers(&self) -> Vec<Option<usize>> {
        let mut p = vec![None; self.strand_count];
        for (k, n) in self.nodes.iter().enumerate().filter(|(_, n)| n.alive) {
            for &s in &n.outs {
                p[s] = Some(k);
            }
        }
        p
    }

    /// Replaces every use of strand `from` by strand `to`.
    fn rename(&mut self, from: usize, to: usize) {
        for n in self.nodes.iter_mut().filter(|n| n.alive) {
            for s in n.ins.iter_mut() {
                if *s == from {
                    *s = to;
                }
            }
        }
        for s in self.outputs.iter_mut() {
            if *s == from {
                *s = to;
            }
        }
    }

    /// `(ε ⊗ id)Δ = id = (id ⊗ ε)Δ`.
    fn counit_step(&mut self) -> bool {
        let cons = self.consumers();
        for k in 0..self.nodes.len() {
            if !self.nodes[k].alive || self.nodes[k].gen != Generator::Delta {
                continue;
            }
            for leg in 0..2 {
                let s = self.nodes[k].outs[leg];
                if let Some(End::Node(e, _)) = cons[s] {
                    if self.nodes[e].gen == Generator::Eps {
                        let other = self.nodes[k].outs[1 - leg];
                        let input = self.nodes[k].ins[0];
                        self.nodes[k].alive = false;
                        self.nodes[e].alive = false;
                        self.rename(other, input);
                        return true;
                    }
                }
            }
        }
        false
    }

    /// `τ^{∓1} τ^{±1} = id` on the same pair of strands.
    fn braid_cancel_step(&mut self) -> bool {
        let cons = self.consumers();
        for k in 0..self.nodes.len() {
            let n = &self.nodes[k];
            if !n.alive || !n.gen.is_braiding() {
                continue;
            }
            let (c0, c1) = (cons[n.outs[0]], cons[n.outs[1]]);
            if let (Some(End::Node(a, 0)), Some(End::Node(b, 1))) = (c0, c1) {
                if a == b && Some(self.nodes[a].gen) == n.gen.inverse_braiding() {
                    let ins = n.ins.clone();
                    let outs = self.nodes[a].outs.clone();
                    self.nodes[k].alive = false;
                    self.nodes[a].alive = false;
                    self.rename(outs[0], ins[0]);
                    self.rename(outs[1], ins[1]);
                    return true;
                }
            }
        }
        false
    }

    /// `(id ⊗ Δ)Δ → (Δ ⊗ id)Δ`.
    fn coassoc_step(&mut self) -> bool {
        let cons = self.consumers();
        for k in 0..self.nodes.len() {
            if !self.nodes[k].alive || self.nodes[k].gen != Generator::Delta {
                continue;
            }
            let b = self.nodes[k].outs[1];
            if let Some(End::Node(j, 0)) = cons[b] {
                if self.nodes[j].gen == Generator::Delta {
                    let a = self.nodes[k].outs[0];
                    let (c, d) = (self.nodes[j].outs[0], self.nodes[j].outs[1]);
                    self.nodes[k].outs = vec![b, d];
                    self.nodes[j].ins = vec![b];
                    self.nodes[j].outs = vec![a, c];
                    return true;
                }
            }
        }
        false
    }

    /// Greedy re-emission: among slices whose inputs are present and adjacent,
    /// take the lowest dependency level, then the leftmost.
    pub fn emit(&self) -> BraidedTerm {
        let prod = self.producers();
        let mut level = vec![usize::MAX; self.nodes.len()];
        fn lvl(k: usize, g: &Graph, prod: &[Option<usize>], level: &mut [usize]) -> usize {
            if level[k] != usize::MAX {
                return level[k];
            }
            let mut m = 0;
            for &s in &g.nodes[k].ins {
                if let Some(p) = prod[s] {
                    m = m.max(lvl(p, g, prod, level) + 1);
                }
            }
            level[k] = m;
            m
        }
        let alive: Vec<usize> = (0..self.nodes.len()).filter(|&k| self.nodes[k].alive).collect();
        for &k in &alive {
            lvl(k, self, &prod, &mut level);
        }
        let mut frontier = self.inputs.clone();
        let mut done = vec![false; self.nodes.len()];
        let mut slices = Vec::with_capacity(alive.len());
        for _ in 0..alive.len() {
            let mut best: Option<(usize, usize, usize)> = None;
            for &k in &alive {
                if done[k] {
                    continue;
                }
                let n = &self.nodes[k];
                let Some(p) = frontier.iter().position(|&s| s == n.ins[0]) else { continue };
                if p + n.ins.len() > frontier.len() || frontier[p..p + n.ins.len()] != n.ins[..] {
                    continue;
                }
                let key = (level[k], p, k);
                if best.is_none_or(|b| (key.0, key.1) < (b.0, b.1)) {
                    best = Some(key);
                }
            }
            let (_, p, k) = best.expect("planar graph always has an emittable slice");
            let n = &self.nodes[k];
            let w = frontier.len();
            slices.push(Slice::new(p, n.gen, w - p - n.ins.len()));
            frontier.splice(p..p + n.ins.len(), n.outs.iter().copied());
            done[k] = true;
        }
        debug_assert_eq!(frontier, self.outputs);
        BraidedTerm::from_parts(self.inputs.len(), slices)
    }
}

/// Interchange normal form with inverse braidings cancelled; the
/// equivalence used to compare normal forms of the rewriting system.
pub fn structural_form(t: &BraidedTerm) -> BraidedTerm {
    let mut g = Graph::from_term(t);
    while g.braid_cancel_step() {}
    g.emit()
}

/// Interchange normal form only.
pub fn interchange_normal_form(t: &BraidedTerm) -> BraidedTerm {
    Graph::from_term(t).emit()
}

/// Antipode elimination, then counit, braid-inverse and left-comb
/// coassociativity simplifications, then interchange normal form.
pub fn canonicalize(t: &BraidedTerm) -> BraidedTerm {
    let t = eliminate_antipodes(t);
    let mut g = Graph::from_term(&t);
    loop {
        let changed = g.counit_step() || g.braid_cancel_step() || g.coassoc_step();
        if !changed {
            break;
        }
    }
    g.emit()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::term::delta_power;
    use Generator::*;

    fn term(dom: usize, s: &[(usize, Generator, usize)]) -> BraidedTerm {
        BraidedTerm::new(dom, s.iter().map(|&(l, g, r)| Slice::new(l, g, r)).collect()).unwrap()
    }

    #[test]
    fn counit_removes_delta() {
        assert_eq!(canonicalize(&term(1, &[(0, Delta, 0), (0, Eps, 1)])), BraidedTerm::identity(1));
        assert_eq!(canonicalize(&term(1, &[(0, Delta, 0), (1, Eps, 0)])), BraidedTerm::identity(1));
    }

    #[test]
    fn coassociativity_gives_left_comb() {
        let right = term(1, &[(0, Delta, 0), (1, Delta, 0)]);
        assert_eq!(canonicalize(&right), delta_power(2));
        let deep = term(1, &[(0, Delta, 0), (1, Delta, 0), (2, Delta, 0)]);
        assert_eq!(canonicalize(&deep), delta_power(3));
    }

    #[test]
    fn interchange_invariance() {
        let a = term(2, &[(0, ThetaPlus, 1), (0, Eps, 0)]);
        let b = term(2, &[(1, Eps, 0), (0, ThetaPlus, 0)]);
        assert_eq!(canonicalize(&a), canonicalize(&b));
    }

    #[test]
    fn braid_inverse_cancels() {
        let t = term(2, &[(0, BraidPlus, 0), (0, BraidMinus, 0), (0, OmegaPlus, 0)]);
        assert_eq!(canonicalize(&t), term(2, &[(0, OmegaPlus, 0)]));
    }

    #[test]
    fn emission_respects_nested_regions() {
        // ε nested between the legs of ω must be emitted first
        let t = term(3, &[(0, Delta, 2), (1, Eps, 2), (1, Eps, 1), (0, OmegaMinus, 0)]);
        let c = interchange_normal_form(&t);
        assert_eq!(c.cod(), 0);
        assert_eq!(interchange_normal_form(&c), c);
    }
}
