use std::collections::BTreeMap;
use std::fmt;

use crate::error::Result;
use crate::f2linalg::{cohomology_dim, BitMatrix};

use super::complex::CochainComplex;

/// Which computation produced a table.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Provenance {
    Lambda,
    Resolution,
}

impl fmt::Display for Provenance {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Provenance::Lambda => write!(f, "lambda"),
            Provenance::Resolution => write!(f, "resolution"),
        }
    }
}

/// Dimensions of `Ext^{s,a}`, exact for internal degrees `a <= max_a` and,
/// when `max_s` is set, for `s <= max_s`. Zero entries are not stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtTable {
    pub max_a: usize,
    pub max_s: Option<usize>,
    pub provenance: Provenance,
    entries: BTreeMap<(usize, usize), usize>,
}

impl ExtTable {
    pub fn new(max_a: usize, max_s: Option<usize>, provenance: Provenance) -> Self {
        ExtTable {
            max_a,
            max_s,
            provenance,
            entries: BTreeMap::new(),
        }
    }

    pub fn set(&mut self, s: usize, a: usize, dim: usize) {
        if dim == 0 {
            self.entries.remove(&(s, a));
        } else {
            self.entries.insert((s, a), dim);
        }
    }

    pub fn get(&self, s: usize, a: usize) -> usize {
        self.entries.get(&(s, a)).copied().unwrap_or(0)
    }

    /// Nonzero entries sorted by `(s, a)`.
    pub fn entries(&self) -> impl Iterator<Item = ((usize, usize), usize)> + '_ {
        self.entries.iter().map(|(&k, &v)| (k, v))
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Restriction to `s <= max_s` and `a <= max_a`.
    pub fn restrict(&self, max_s: Option<usize>, max_a: usize) -> ExtTable {
        let max_s = match (self.max_s, max_s) {
            (Some(x), Some(y)) => Some(x.min(y)),
            (x, None) => x,
            (None, y) => y,
        };
        let mut out = ExtTable::new(self.max_a.min(max_a), max_s, self.provenance);
        for ((s, a), d) in self.entries() {
            if a <= out.max_a && max_s.is_none_or(|m| s <= m) {
                out.set(s, a, d);
            }
        }
        out
    }

    /// Entries where two tables differ on their common range, as
    /// `(s, a, self, other)`.
    pub fn differences(&self, other: &ExtTable) -> Vec<(usize, usize, usize, usize)> {
        let x = self.restrict(other.max_s, other.max_a);
        let y = other.restrict(self.max_s, self.max_a);
        let mut keys: Vec<(usize, usize)> = x.entries.keys().chain(y.entries.keys()).copied().collect();
        keys.sort_unstable();
        keys.dedup();
        keys.into_iter()
            .filter(|&(s, a)| x.get(s, a) != y.get(s, a))
            .map(|(s, a)| (s, a, x.get(s, a), y.get(s, a)))
            .collect()
    }

    /// TSV rendering: comment header, then `s<TAB>a<TAB>dim` rows.
    pub fn to_tsv(&self, title: &str) -> String {
        let mut out = format!("# {title}\n# via {}\n", self.provenance);
        match self.max_s {
            Some(s) => out.push_str(&format!("# window a<={} s<={}\n", self.max_a, s)),
            None => out.push_str(&format!("# window a<={}\n", self.max_a)),
        }
        out.push_str("s\ta\tdim\n");
        for ((s, a), d) in self.entries() {
            out.push_str(&format!("{s}\t{a}\t{d}\n"));
        }
        out
    }
}

/// `H^{s,a} = ker d^{s,a} / im d^{s-1,a}` at every bigrading of the complex.
pub fn cohomology(c: &CochainComplex) -> Result<ExtTable> {
    let mut t = ExtTable::new(c.max_a(), None, Provenance::Lambda);
    for ((s, a), _) in c.dims() {
        let d_in = if s == 0 {
            BitMatrix::zeros(c.dim(0, a), 0)
        } else {
            c.diff(s - 1, a)
        };
        t.set(s, a, cohomology_dim(&d_in, &c.diff(s, a))?);
    }
    Ok(t)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_complex_gives_empty_table() {
        assert!(cohomology(&CochainComplex::new(5)).unwrap().is_empty());
    }

    #[test]
    fn zero_differentials_give_dims() {
        let mut c = CochainComplex::new(4);
        c.set_dim(0, 1, 2);
        c.set_dim(1, 3, 1);
        let t = cohomology(&c).unwrap();
        assert_eq!(t.get(0, 1), 2);
        assert_eq!(t.get(1, 3), 1);
    }

    #[test]
    fn differences_respect_common_range() {
        let mut x = ExtTable::new(10, Some(2), Provenance::Lambda);
        let mut y = ExtTable::new(8, None, Provenance::Resolution);
        x.set(0, 1, 1);
        y.set(0, 1, 1);
        x.set(1, 9, 1);
        y.set(3, 5, 1);
        assert!(x.differences(&y).is_empty());
        y.set(1, 2, 1);
        assert_eq!(x.differences(&y), vec![(1, 2, 0, 1)]);
    }
}
