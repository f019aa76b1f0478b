//! Sparse tensor networks contracted pairwise in a greedy order.
//!
//! Used for tangle evaluation: a sweep across a wide tangle keeps every arc
//! crossing the cut open at once, while contracting along shared legs keeps
//! intermediates close to the support of the actual answer.

use std::collections::{BTreeMap, BTreeSet, HashMap};

use crate::scalar::Scalar;
use crate::tensor::{encode, SparseMap};

/// A sparse tensor with named legs.
#[derive(Clone, Debug)]
pub struct SparseTensor {
    pub legs: Vec<usize>,
    pub entries: HashMap<Vec<u8>, Scalar>,
}

impl SparseTensor {
    /// Tensor of a map whose inputs sit on legs `ins` and outputs on `outs`.
    pub fn from_map(m: &SparseMap, ins: &[usize], outs: &[usize]) -> Self {
        let mut legs = ins.to_vec();
        legs.extend_from_slice(outs);
        let mut entries = HashMap::new();
        for (flat, col) in m.cols.iter().enumerate() {
            let input = crate::tensor::decode(flat, m.dim, m.arity_in);
            for (out, v) in col {
                if v.is_zero() {
                    continue;
                }
                let mut k = input.clone();
                k.extend_from_slice(out);
                entries.insert(k, v.clone());
            }
        }
        SparseTensor { legs, entries }
    }

    fn scalar(s: Scalar) -> Self {
        let mut entries = HashMap::new();
        if !s.is_zero() {
            entries.insert(Vec::new(), s);
        }
        SparseTensor { legs: Vec::new(), entries }
    }
}

/// Contracts every leg shared by `a` and `b`.
fn contract_pair(a: &SparseTensor, b: &SparseTensor) -> SparseTensor {
    let shared: Vec<usize> = a.legs.iter().copied().filter(|l| b.legs.contains(l)).collect();
    let pos = |t: &SparseTensor, l: usize| t.legs.iter().position(|&x| x == l).expect("leg present");
    let sa: Vec<usize> = shared.iter().map(|&l| pos(a, l)).collect();
    let sb: Vec<usize> = shared.iter().map(|&l| pos(b, l)).collect();
    let ka: Vec<usize> = (0..a.legs.len()).filter(|i| !sa.contains(i)).collect();
    let kb: Vec<usize> = (0..b.legs.len()).filter(|i| !sb.contains(i)).collect();
    let mut index: HashMap<Vec<u8>, Vec<(Vec<u8>, &Scalar)>> = HashMap::new();
    for (k, v) in &b.entries {
        let s: Vec<u8> = sb.iter().map(|&i| k[i]).collect();
        index.entry(s).or_default().push((kb.iter().map(|&i| k[i]).collect(), v));
    }
    let mut entries: HashMap<Vec<u8>, Scalar> = HashMap::new();
    for (k, v) in &a.entries {
        let s: Vec<u8> = sa.iter().map(|&i| k[i]).collect();
        let Some(matches) = index.get(&s) else { continue };
        let rest: Vec<u8> = ka.iter().map(|&i| k[i]).collect();
        for (kr, w) in matches {
            let mut key = rest.clone();
            key.extend_from_slice(kr);
            let t = v * *w;
            match entries.get_mut(&key) {
                Some(acc) => *acc += &t,
                None => {
                    entries.insert(key, t);
                }
            }
        }
    }
    entries.retain(|_, v| !v.is_zero());
    let mut legs: Vec<usize> = ka.iter().map(|&i| a.legs[i]).collect();
    legs.extend(kb.iter().map(|&i| b.legs[i]));
    SparseTensor { legs, entries }
}

/// Estimated log-size of the result, then its number of open legs.
fn pair_cost(a: &SparseTensor, b: &SparseTensor, dim: usize) -> (u64, usize) {
    let shared = a.legs.iter().filter(|l| b.legs.contains(l)).count();
    let est = (a.entries.len().max(1) as f64) * (b.entries.len().max(1) as f64) / (dim as f64).powi(shared as i32);
    ((est.max(1.0).log2() * 64.0) as u64, a.legs.len() + b.legs.len() - 2 * shared)
}

/// Contracts a network down to one tensor on the legs that appear once.
/// The pair merged next is the one with the smallest estimated result.
pub fn contract_network(tensors: Vec<SparseTensor>, dim: usize) -> SparseTensor {
    use std::cmp::Reverse;
    use std::collections::BinaryHeap;
    if tensors.is_empty() {
        return SparseTensor::scalar(Scalar::one());
    }
    let mut alive: BTreeMap<usize, SparseTensor> = tensors.into_iter().enumerate().collect();
    let mut next_id = alive.len();
    // leg -> tensors carrying it
    let mut owners: HashMap<usize, Vec<usize>> = HashMap::new();
    for (&id, t) in &alive {
        for &l in &t.legs {
            owners.entry(l).or_default().push(id);
        }
    }
    let mut heap = BinaryHeap::new();
    let mut seen = BTreeSet::new();
    for ids in owners.values() {
        if let [a, b] = ids[..] {
            let key = (a.min(b), a.max(b));
            if seen.insert(key) {
                heap.push(Reverse((pair_cost(&alive[&a], &alive[&b], dim), key.0, key.1)));
            }
        }
    }
    // stale entries name a tensor that has since been merged away
    while let Some(Reverse((_, a, b))) = heap.pop() {
        if !alive.contains_key(&a) || !alive.contains_key(&b) {
            continue;
        }
        let ta = alive.remove(&a).expect("alive");
        let tb = alive.remove(&b).expect("alive");
        let merged = contract_pair(&ta, &tb);
        let id = next_id;
        next_id += 1;
        let mut neighbours = BTreeSet::new();
        for l in ta.legs.iter().chain(&tb.legs) {
            let Some(o) = owners.get_mut(l) else { continue };
            o.retain(|&x| x != a && x != b);
            if o.is_empty() {
                owners.remove(l);
            }
        }
        for &l in &merged.legs {
            let o = owners.entry(l).or_default();
            o.push(id);
            neighbours.extend(o.iter().copied().filter(|&x| x != id));
        }
        for nb in neighbours {
            heap.push(Reverse((pair_cost(&merged, &alive[&nb], dim), nb.min(id), nb.max(id))));
        }
        alive.insert(id, merged);
    }
    // disconnected pieces: outer product, scalars first
    let mut rest: Vec<SparseTensor> = alive.into_values().collect();
    rest.sort_by_key(|t| t.legs.len());
    let mut acc = SparseTensor::scalar(Scalar::one());
    for t in rest {
        acc = contract_pair(&acc, &t);
        if acc.entries.is_empty() {
            break;
        }
    }
    acc
}

/// Reads a network result as a map from the `bottom` legs to the `top` legs.
pub fn as_map(t: &SparseTensor, bottom: &[usize], top: &[usize], dim: usize) -> SparseMap {
    let pos = |l: usize| t.legs.iter().position(|&x| x == l);
    let mut cols = vec![Vec::new(); dim.pow(bottom.len() as u32)];
    // legs missing from an empty result are fine: every column stays empty
    if !t.entries.is_empty() {
        let bi: Vec<usize> = bottom.iter().map(|&l| pos(l).expect("open leg")).collect();
        let ti: Vec<usize> = top.iter().map(|&l| pos(l).expect("open leg")).collect();
        for (k, v) in &t.entries {
            let inp: Vec<u8> = bi.iter().map(|&i| k[i]).collect();
            let out: Vec<u8> = ti.iter().map(|&i| k[i]).collect();
            cols[encode(&inp, dim)].push((out, v.clone()));
        }
    }
    for c in cols.iter_mut() {
        c.sort_by(|a, b| a.0.cmp(&b.0));
    }
    SparseMap { dim, arity_in: bottom.len(), arity_out: top.len(), cols }
}
