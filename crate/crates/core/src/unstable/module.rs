use std::collections::BTreeMap;
use std::fmt;

use crate::error::{Error, Result};
use crate::f2linalg::{BitMatrix, BitVector};

/// How many top squares a module carries: `Sq_0, ..., Sq_{k-1}` for
/// `Finite(k)`, or all of them for a module in `U`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Finite(usize),
    Infinite,
}

impl Level {
    /// Whether `Sq_j` with `j >= 0` belongs to the algebra.
    pub fn allows(self, j: usize) -> bool {
        match self {
            Level::Finite(k) => j < k,
            Level::Infinite => true,
        }
    }

    /// `min(n, k)`.
    pub fn cap(self, n: usize) -> usize {
        match self {
            Level::Finite(k) => n.min(k),
            Level::Infinite => n,
        }
    }

    pub fn finite(self) -> Option<usize> {
        match self {
            Level::Finite(k) => Some(k),
            Level::Infinite => None,
        }
    }

    pub fn succ(self) -> Level {
        match self {
            Level::Finite(k) => Level::Finite(k + 1),
            Level::Infinite => Level::Infinite,
        }
    }

    pub fn pred(self) -> Option<Level> {
        match self {
            Level::Finite(0) => None,
            Level::Finite(k) => Some(Level::Finite(k - 1)),
            Level::Infinite => Some(Level::Infinite),
        }
    }

    pub fn double(self) -> Level {
        match self {
            Level::Finite(k) => Level::Finite(2 * k),
            Level::Infinite => Level::Infinite,
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Level::Finite(k) => write!(f, "{k}"),
            Level::Infinite => write!(f, "inf"),
        }
    }
}

impl std::str::FromStr for Level {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "inf" | "infinity" | "∞" => Ok(Level::Infinite),
            _ => s
                .parse::<usize>()
                .map(Level::Finite)
                .map_err(|_| format!("expected a natural number or 'inf', got '{s}'")),
        }
    }
}

/// A module in `U_k` (or `U`) known in degrees `0..=max_deg`.
///
/// `Sq_j` maps degree `d` to degree `2d - j`. The square `Sq_d` on degree `d`
/// is `Sq^0`, the identity, and is never stored. Stored matrices cover
/// `j < d` with `j` allowed by the level and target degree within the
/// window; a missing entry in that range is the zero map.
#[derive(Clone, Debug)]
pub struct FiniteUModule {
    name: String,
    k: Level,
    max_deg: usize,
    labels: Vec<Vec<String>>,
    action: BTreeMap<(usize, usize), BitMatrix>,
}

impl FiniteUModule {
    /// The zero module.
    pub fn new(name: impl Into<String>, k: Level, max_deg: usize) -> Self {
        FiniteUModule {
            name: name.into(),
            k,
            max_deg,
            labels: vec![Vec::new(); max_deg + 1],
            action: BTreeMap::new(),
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn k(&self) -> Level {
        self.k
    }

    pub fn max_deg(&self) -> usize {
        self.max_deg
    }

    pub fn dim(&self, d: usize) -> usize {
        self.labels.get(d).map_or(0, Vec::len)
    }

    pub fn dims(&self) -> Vec<usize> {
        self.labels.iter().map(Vec::len).collect()
    }

    pub fn total_dim(&self) -> usize {
        self.labels.iter().map(Vec::len).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.total_dim() == 0
    }

    pub fn labels(&self, d: usize) -> &[String] {
        self.labels.get(d).map_or(&[], Vec::as_slice)
    }

    /// Degree and index of the basis element called `label`.
    pub fn find_label(&self, label: &str) -> Option<(usize, usize)> {
        self.labels
            .iter()
            .enumerate()
            .find_map(|(d, ls)| ls.iter().position(|l| l == label).map(|i| (d, i)))
    }

    /// Appends a basis element in degree `d`, returning its index there.
    /// Existing action matrices touching degree `d` are widened with zeros.
    pub fn add_basis(&mut self, label: impl Into<String>, d: usize) -> usize {
        assert!(d <= self.max_deg, "degree {d} outside window {}", self.max_deg);
        self.labels[d].push(label.into());
        let new_dim = self.labels[d].len();
        let keys: Vec<_> = self.action.keys().copied().collect();
        for (j, src) in keys {
            let tgt = 2 * src - j;
            if src == d || tgt == d {
                let old = self.action.remove(&(j, src)).unwrap();
                let rows = if tgt == d { new_dim } else { old.rows() };
                let cols = if src == d { new_dim } else { old.cols() };
                let m = BitMatrix::from_fn(rows, cols, |r, c| r < old.rows() && c < old.cols() && old.get(r, c));
                self.action.insert((j, src), m);
            }
        }
        new_dim - 1
    }

    /// Whether `Sq_j` on degree `d` is part of the structure and lands in
    /// the window.
    pub fn defined(&self, j: usize, d: usize) -> bool {
        if d > self.max_deg || j > d || 2 * d - j > self.max_deg {
            return false;
        }
        j == d || self.k.allows(j)
    }

    /// The matrix of `Sq_j: M^d -> M^{2d-j}`, or `None` if undefined.
    pub fn action(&self, j: usize, d: usize) -> Option<BitMatrix> {
        if !self.defined(j, d) {
            return None;
        }
        if j == d {
            return Some(BitMatrix::identity(self.dim(d)));
        }
        Some(
            self.action
                .get(&(j, d))
                .cloned()
                .unwrap_or_else(|| BitMatrix::zeros(self.dim(2 * d - j), self.dim(d))),
        )
    }

    /// Borrowed stored matrix for `j < d`, `None` when it is zero or
    /// undefined.
    pub fn stored(&self, j: usize, d: usize) -> Option<&BitMatrix> {
        self.action.get(&(j, d))
    }

    /// `Sq_j v` for `v` in degree `d`.
    pub fn act(&self, j: usize, d: usize, v: &BitVector) -> Option<BitVector> {
        if !self.defined(j, d) {
            return None;
        }
        if j == d {
            return Some(v.clone());
        }
        Some(match self.action.get(&(j, d)) {
            Some(m) => m.mul_vec(v),
            None => BitVector::zeros(self.dim(2 * d - j)),
        })
    }

    /// Sets `Sq_j` on degree `d` for `j < d`.
    pub fn set_action(&mut self, j: usize, d: usize, m: BitMatrix) -> Result<()> {
        if j >= d {
            return Err(Error::Precondition(format!(
                "Sq_{j} on degree {d} is not a stored square (need j < d)"
            )));
        }
        if !self.defined(j, d) {
            return Err(Error::Precondition(format!(
                "Sq_{j} on degree {d} is outside level {} or window {}",
                self.k, self.max_deg
            )));
        }
        let tgt = 2 * d - j;
        if m.rows() != self.dim(tgt) || m.cols() != self.dim(d) {
            return Err(Error::Precondition(format!(
                "Sq_{j} on degree {d}: matrix is {}x{}, expected {}x{}",
                m.rows(),
                m.cols(),
                self.dim(tgt),
                self.dim(d)
            )));
        }
        if m.is_zero() {
            self.action.remove(&(j, d));
        } else {
            self.action.insert((j, d), m);
        }
        Ok(())
    }

    /// All `(j, d)` with `j < d` for which the square is defined, in order.
    pub fn squares(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..=self.max_deg).flat_map(move |d| (0..d).filter(move |&j| self.defined(j, d)).map(move |j| (j, d)))
    }

    /// Same dimensions and action matrices (labels and names ignored).
    pub fn same_structure(&self, other: &FiniteUModule) -> bool {
        if self.k != other.k || self.max_deg != other.max_deg || self.dims() != other.dims() {
            return false;
        }
        self.action == other.action
    }

    /// Replaces the labels of degree `d`.
    pub fn relabel(&mut self, d: usize, labels: Vec<String>) {
        assert_eq!(labels.len(), self.dim(d));
        self.labels[d] = labels;
    }
}

/// A degree-preserving linear map between modules at the same level,
/// given by one matrix per degree up to `window`.
#[derive(Clone, Debug)]
pub struct ModuleMap {
    pub source: FiniteUModule,
    pub target: FiniteUModule,
    pub window: usize,
    pub matrices: Vec<BitMatrix>,
}

impl ModuleMap {
    pub fn new(source: FiniteUModule, target: FiniteUModule, matrices: Vec<BitMatrix>) -> Self {
        let window = matrices.len().saturating_sub(1);
        assert!(window <= source.max_deg().min(target.max_deg()) || matrices.is_empty());
        for (d, m) in matrices.iter().enumerate() {
            assert_eq!((m.rows(), m.cols()), (target.dim(d), source.dim(d)), "degree {d}");
        }
        ModuleMap {
            source,
            target,
            window,
            matrices,
        }
    }

    pub fn matrix(&self, d: usize) -> &BitMatrix {
        &self.matrices[d]
    }

    pub fn rank(&self, d: usize) -> usize {
        self.matrices[d].rank()
    }

    /// Commutation with every square defined on both sides inside the
    /// window; returns the offending `(j, d)` pairs.
    pub fn commutation_failures(&self) -> Vec<(usize, usize)> {
        let mut bad = Vec::new();
        for d in 0..=self.window {
            for j in 0..d {
                let tgt = 2 * d - j;
                if tgt > self.window {
                    continue;
                }
                let (Some(s), Some(t)) = (self.source.action(j, d), self.target.action(j, d)) else {
                    continue;
                };
                if self.matrices[tgt].mul(&s) != t.mul(&self.matrices[d]) {
                    bad.push((j, d));
                }
            }
        }
        bad
    }

    pub fn commutes(&self) -> bool {
        self.commutation_failures().is_empty()
    }
}
