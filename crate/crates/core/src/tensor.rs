//! Dense multi-index arrays of exact scalars and the sparse linear maps
//! used to push basis vectors through a sliced diagram.

use std::collections::HashMap;

use crate::scalar::Scalar;

/// Row-major array; entry count equals the product of `shape`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseTensor {
    pub shape: Vec<usize>,
    pub entries: Vec<Scalar>,
}

impl DenseTensor {
    pub fn zeros(shape: Vec<usize>) -> Self {
        let n = shape.iter().product();
        DenseTensor { shape, entries: vec![Scalar::zero(); n] }
    }

    pub fn scalar(s: Scalar) -> Self {
        DenseTensor { shape: Vec::new(), entries: vec![s] }
    }

    pub fn from_fn(shape: Vec<usize>, mut f: impl FnMut(&[usize]) -> Scalar) -> Self {
        let mut t = Self::zeros(shape);
        let mut idx = vec![0usize; t.shape.len()];
        for k in 0..t.entries.len() {
            t.entries[k] = f(&idx);
            t.bump(&mut idx);
        }
        t
    }

    pub fn rank(&self) -> usize {
        self.shape.len()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn flat_index(&self, idx: &[usize]) -> usize {
        debug_assert_eq!(idx.len(), self.shape.len());
        idx.iter().zip(&self.shape).fold(0, |acc, (&i, &d)| acc * d + i)
    }

    pub fn multi_index(&self, mut flat: usize) -> Vec<usize> {
        let mut idx = vec![0; self.shape.len()];
        for k in (0..self.shape.len()).rev() {
            idx[k] = flat % self.shape[k];
            flat /= self.shape[k];
        }
        idx
    }

    pub fn get(&self, idx: &[usize]) -> &Scalar {
        &self.entries[self.flat_index(idx)]
    }

    pub fn set(&mut self, idx: &[usize], v: Scalar) {
        let k = self.flat_index(idx);
        self.entries[k] = v;
    }

    fn bump(&self, idx: &mut [usize]) {
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < self.shape[k] {
                return;
            }
            idx[k] = 0;
        }
    }

    /// Outer product; indices of `self` come first.
    pub fn outer(&self, other: &DenseTensor) -> DenseTensor {
        let mut shape = self.shape.clone();
        shape.extend_from_slice(&other.shape);
        let mut entries = Vec::with_capacity(self.len() * other.len());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a * b);
            }
        }
        DenseTensor { shape, entries }
    }

    pub fn nonzero_count(&self) -> usize {
        self.entries.iter().filter(|s| !s.is_zero()).count()
    }
}

/// Basis-index tuple of the strands currently open in a propagation.
pub type Key = Vec<u8>;

/// Sparse linear combination of basis tuples.
pub type SparseVec = HashMap<Key, Scalar>;

/// A linear map (V^{⊗a} → V^{⊗b}) stored column by column.
///
/// `cols[flat input index]` lists the nonzero outputs of that basis input.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMap {
    pub dim: usize,
    pub arity_in: usize,
    pub arity_out: usize,
    pub cols: Vec<Vec<(Key, Scalar)>>,
}

impl SparseMap {
    /// Reads a tensor with index order (inputs…, outputs…), every index of size `dim`.
    pub fn from_dense(t: &DenseTensor, arity_in: usize, arity_out: usize) -> Self {
        assert_eq!(t.rank(), arity_in + arity_out, "tensor rank does not match arity");
        let dim = t.shape.first().copied().unwrap_or(1);
        assert!(t.shape.iter().all(|&d| d == dim), "non-uniform tensor shape");
        let n_in = dim.pow(arity_in as u32);
        let n_out = dim.pow(arity_out as u32);
        let mut cols = vec![Vec::new(); n_in];
        for (i, col) in cols.iter_mut().enumerate() {
            for o in 0..n_out {
                let e = &t.entries[i * n_out + o];
                if !e.is_zero() {
                    col.push((decode(o, dim, arity_out), e.clone()));
                }
            }
        }
        SparseMap { dim, arity_in, arity_out, cols }
    }

    pub fn to_dense(&self) -> DenseTensor {
        let mut t = DenseTensor::zeros(vec![self.dim; self.arity_in + self.arity_out]);
        let n_out = self.dim.pow(self.arity_out as u32);
        for (i, col) in self.cols.iter().enumerate() {
            for (k, v) in col {
                let o = encode(k, self.dim);
                t.entries[i * n_out + o] = v.clone();
            }
        }
        t
    }

    pub fn column(&self, input: &[u8]) -> &[(Key, Scalar)] {
        &self.cols[encode(input, self.dim)]
    }

    pub fn identity(dim: usize) -> Self {
        let cols = (0..dim).map(|i| vec![(vec![i as u8], Scalar::one())]).collect();
        SparseMap { dim, arity_in: 1, arity_out: 1, cols }
    }

    /// Flip of two tensor factors.
    pub fn flip(dim: usize) -> Self {
        let mut cols = Vec::with_capacity(dim * dim);
        for a in 0..dim {
            for b in 0..dim {
                cols.push(vec![(vec![b as u8, a as u8], Scalar::one())]);
            }
        }
        SparseMap { dim, arity_in: 2, arity_out: 2, cols }
    }
}

pub fn encode(key: &[u8], dim: usize) -> usize {
    key.iter().fold(0, |acc, &i| acc * dim + i as usize)
}

pub fn decode(mut flat: usize, dim: usize, len: usize) -> Key {
    let mut k = vec![0u8; len];
    for slot in k.iter_mut().rev() {
        *slot = (flat % dim) as u8;
        flat /= dim;
    }
    k
}

/// Applies `map` to the strands `left .. left + arity_in` of every term of `state`.
pub fn apply(state: &SparseVec, left: usize, map: &SparseMap) -> SparseVec {
    let mut out: SparseVec = HashMap::with_capacity(state.len());
    for (key, coeff) in state {
        let col = map.column(&key[left..left + map.arity_in]);
        for (img, v) in col {
            let mut nk = Vec::with_capacity(key.len() - map.arity_in + map.arity_out);
            nk.extend_from_slice(&key[..left]);
            nk.extend_from_slice(img);
            nk.extend_from_slice(&key[left + map.arity_in..]);
            let c = coeff * v;
            match out.get_mut(&nk) {
                Some(acc) => *acc += &c,
                None => {
                    out.insert(nk, c);
                }
            }
        }
    }
    out.retain(|_, v| !v.is_zero());
    out
}

/// Composes two maps of the same dimension (`first` then `second`).
pub fn compose(first: &SparseMap, second: &SparseMap) -> SparseMap {
    assert_eq!(first.arity_out, second.arity_in);
    let cols = first
        .cols
        .iter()
        .map(|col| {
            let state: SparseVec = col.iter().cloned().collect();
            let mut v: Vec<(Key, Scalar)> = apply(&state, 0, second).into_iter().collect();
            v.sort_by(|a, b| a.0.cmp(&b.0));
            v
        })
        .collect();
    SparseMap { dim: first.dim, arity_in: first.arity_in, arity_out: second.arity_out, cols }
}

/// Tensor product of two maps of the same dimension (`a` on the left strands).
pub fn kron(a: &SparseMap, b: &SparseMap) -> SparseMap {
    assert_eq!(a.dim, b.dim);
    let mut cols = Vec::with_capacity(a.cols.len() * b.cols.len());
    for ca in &a.cols {
        for cb in &b.cols {
            let mut col = Vec::with_capacity(ca.len() * cb.len());
            for (ka, va) in ca {
                for (kb, vb) in cb {
                    let mut k = ka.clone();
                    k.extend_from_slice(kb);
                    col.push((k, va * vb));
                }
            }
            cols.push(col);
        }
    }
    SparseMap { dim: a.dim, arity_in: a.arity_in + b.arity_in, arity_out: a.arity_out + b.arity_out, cols }
}

/// Identity on `k` strands.
pub fn identity_n(dim: usize, k: usize) -> SparseMap {
    let n = dim.pow(k as u32);
    let cols = (0..n).map(|i| vec![(decode(i, dim, k), Scalar::one())]).collect();
    SparseMap { dim, arity_in: k, arity_out: k, cols }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dense_roundtrip() {
        let t = DenseTensor::from_fn(vec![2, 2, 2], |i| Scalar::from_int((i[0] * 4 + i[1] * 2 + i[2]) as i64));
        assert_eq!(t.get(&[1, 0, 1]), &Scalar::from_int(5));
        assert_eq!(t.multi_index(6), vec![1, 1, 0]);
        let m = SparseMap::from_dense(&t, 1, 2);
        assert_eq!(m.to_dense(), t);
    }

    #[test]
    fn flip_twice_is_identity() {
        let f = SparseMap::flip(3);
        let ff = compose(&f, &f);
        let id2 = DenseTensor::from_fn(vec![3, 3, 3, 3], |i| {
            Scalar::from_int((i[0] == i[2] && i[1] == i[3]) as i64)
        });
        assert_eq!(ff.to_dense(), id2);
    }

    #[test]
    fn apply_offsets() {
        let mut s = SparseVec::new();
        s.insert(vec![0, 1, 2], Scalar::one());
        let out = apply(&s, 1, &SparseMap::flip(3));
        assert_eq!(out.get(&vec![0, 2, 1]), Some(&Scalar::one()));
    }
}
