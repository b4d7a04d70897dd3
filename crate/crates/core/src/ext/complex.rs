use std::collections::BTreeMap;

use crate::f2linalg::BitMatrix;

/// A cochain complex of finite-dimensional `F_2`-spaces bigraded by
/// cohomological degree `s` and internal degree `a`, with `d: C^{s,a} ->
/// C^{s+1,a}`. Only internal degrees `a <= max_a` are present.
#[derive(Clone, Debug, Default)]
pub struct CochainComplex {
    max_a: usize,
    dims: BTreeMap<(usize, usize), usize>,
    diffs: BTreeMap<(usize, usize), BitMatrix>,
}

impl CochainComplex {
    pub fn new(max_a: usize) -> Self {
        CochainComplex {
            max_a,
            ..Default::default()
        }
    }

    pub fn max_a(&self) -> usize {
        self.max_a
    }

    pub fn set_dim(&mut self, s: usize, a: usize, dim: usize) {
        assert!(a <= self.max_a);
        if dim == 0 {
            self.dims.remove(&(s, a));
        } else {
            self.dims.insert((s, a), dim);
        }
    }

    /// Sets `d^{s,a}`; its shape must match the current dimensions.
    pub fn set_diff(&mut self, s: usize, a: usize, d: BitMatrix) {
        assert_eq!((d.rows(), d.cols()), (self.dim(s + 1, a), self.dim(s, a)), "d^({s},{a})");
        if d.is_zero() {
            self.diffs.remove(&(s, a));
        } else {
            self.diffs.insert((s, a), d);
        }
    }

    pub fn dim(&self, s: usize, a: usize) -> usize {
        self.dims.get(&(s, a)).copied().unwrap_or(0)
    }

    /// Nonzero `((s, a), dim)` entries in order.
    pub fn dims(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.dims.iter().map(|(&k, &v)| (k, v))
    }

    pub fn diff(&self, s: usize, a: usize) -> BitMatrix {
        self.diffs
            .get(&(s, a))
            .cloned()
            .unwrap_or_else(|| BitMatrix::zeros(self.dim(s + 1, a), self.dim(s, a)))
    }

    /// Whether every differential is the zero matrix.
    pub fn differentials_vanish(&self) -> bool {
        self.diffs.is_empty()
    }

    /// Largest `s` with a nonzero space.
    pub fn max_s(&self) -> usize {
        self.dims.keys().map(|&(s, _)| s).max().unwrap_or(0)
    }

    /// Bigradings `(s, a)` where `d^{s+1,a} d^{s,a} != 0`.
    pub fn d2_failures(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for (&(s, a), d) in &self.diffs {
            if let Some(next) = self.diffs.get(&(s + 1, a)) {
                if !next.mul(d).is_zero() {
                    bad.push((s, a));
                }
            }
        }
        bad
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_differentials_are_dropped() {
        let mut c = CochainComplex::new(3);
        c.set_dim(0, 1, 2);
        c.set_dim(1, 1, 1);
        c.set_diff(0, 1, BitMatrix::zeros(1, 2));
        assert!(c.differentials_vanish());
        c.set_diff(0, 1, BitMatrix::from_strs(2, &["11"]));
        assert!(!c.differentials_vanish());
        assert!(c.d2_failures().is_empty());
        assert_eq!(c.max_s(), 1);
    }
}
