use std::collections::BTreeMap;

use num_traits::Zero;

use super::rational::Q;

/// Sparse multi-index array over `Q`; the factor order is part of its identity.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Tensor {
    dims: Vec<usize>,
    entries: BTreeMap<Vec<usize>, Q>,
}

impl Tensor {
    pub fn new(dims: Vec<usize>) -> Self {
        Tensor { dims, entries: BTreeMap::new() }
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    fn check(&self, idx: &[usize]) {
        assert_eq!(idx.len(), self.dims.len(), "tensor rank mismatch");
        for (i, d) in idx.iter().zip(&self.dims) {
            assert!(i < d, "index {idx:?} outside {:?}", self.dims);
        }
    }

    pub fn get(&self, idx: &[usize]) -> Q {
        self.entries.get(idx).cloned().unwrap_or_else(Q::zero)
    }

    /// Adds `v` at `idx`; an entry that cancels to zero is removed.
    pub fn add(&mut self, idx: &[usize], v: &Q) {
        self.check(idx);
        if v.is_zero() {
            return;
        }
        match self.entries.get_mut(idx) {
            Some(x) => {
                *x += v;
                if x.is_zero() {
                    self.entries.remove(idx);
                }
            }
            None => {
                self.entries.insert(idx.to_vec(), v.clone());
            }
        }
    }

    pub fn set(&mut self, idx: &[usize], v: Q) {
        self.check(idx);
        if v.is_zero() {
            self.entries.remove(idx);
        } else {
            self.entries.insert(idx.to_vec(), v);
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&[usize], &Q)> + '_ {
        self.entries.iter().map(|(k, v)| (k.as_slice(), v))
    }

    /// Reorders factors: output factor `i` is input factor `perm[i]`.
    pub fn permute(&self, perm: &[usize]) -> Tensor {
        assert_eq!(perm.len(), self.dims.len());
        let dims = perm.iter().map(|&p| self.dims[p]).collect();
        let entries = self
            .entries
            .iter()
            .map(|(k, v)| (perm.iter().map(|&p| k[p]).collect(), v.clone()))
            .collect();
        Tensor { dims, entries }
    }

    /// First multi-index where the tensors differ.
    pub fn first_difference(&self, other: &Tensor) -> Option<Vec<usize>> {
        if self.dims != other.dims {
            return Some(Vec::new());
        }
        self.entries
            .keys()
            .chain(other.entries.keys())
            .find(|k| self.get(k) != other.get(k))
            .cloned()
    }
}
