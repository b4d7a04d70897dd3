use std::collections::HashMap;

use crate::f2linalg::BitMatrix;
use crate::steenrod::{adem_normalize, instability_kill, lower_to_upper, upper_to_lower, LowerWord};

use super::module::{FiniteUModule, Level};

/// The free module `F_k(n)` on one generator `iota_n`, truncated at
/// `max_deg`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FreeDescriptor {
    pub n: usize,
    pub k: Level,
    pub max_deg: usize,
}

/// `F_k(n)` together with its basis of lower words.
///
/// In degree `a` the basis is the set of words `Sq_{i(1)} ... Sq_{i(m)} iota_n`
/// with `0 <= i(1) <= ... <= i(m) < min(n, k)` and final degree `a`.
#[derive(Clone, Debug)]
pub struct FreeModule {
    pub descriptor: FreeDescriptor,
    words: Vec<Vec<Vec<i64>>>,
    index: HashMap<Vec<i64>, (usize, usize)>,
    module: FiniteUModule,
}

/// Label of a basis word, e.g. `Sq_0Sq_1i_2`.
pub fn word_label(n: usize, indices: &[i64]) -> String {
    let mut s = String::new();
    for i in indices {
        s.push_str(&format!("Sq_{i}"));
    }
    s.push_str(&format!("i_{n}"));
    s
}

/// Nondecreasing lower words on `iota_n` with indices below `bound`, grouped
/// by degree up to `max_deg`, ordered by length then lexicographically.
pub fn free_basis_words(n: usize, bound: usize, max_deg: usize) -> Vec<Vec<Vec<i64>>> {
    fn extend(word_rev: &mut Vec<i64>, deg: usize, max_deg: usize, out: &mut Vec<Vec<Vec<i64>>>) {
        out[deg].push(word_rev.iter().rev().copied().collect());
        // the next square goes on the left and may not exceed the current leftmost index
        let top = word_rev.last().copied();
        for i in 0..deg as i64 {
            if top.is_some_and(|t| i > t) {
                break;
            }
            let next = 2 * deg - i as usize;
            if next > max_deg {
                continue;
            }
            word_rev.push(i);
            extend(word_rev, next, max_deg, out);
            word_rev.pop();
        }
    }
    let mut out = vec![Vec::new(); max_deg + 1];
    if n > max_deg {
        return out;
    }
    out[n].push(Vec::new());
    let mut word_rev = Vec::new();
    for last in 0..bound as i64 {
        let next = 2 * n - last as usize;
        if next > max_deg {
            continue;
        }
        word_rev.push(last);
        extend(&mut word_rev, next, max_deg, &mut out);
        word_rev.pop();
    }
    for words in &mut out {
        words.sort_by(|a, b| a.len().cmp(&b.len()).then_with(|| a.cmp(b)));
    }
    out
}

impl FreeModule {
    pub fn new(descriptor: FreeDescriptor) -> Self {
        let FreeDescriptor { n, k, max_deg } = descriptor;
        let bound = k.cap(n);
        let words = free_basis_words(n, bound, max_deg);
        let mut index = HashMap::new();
        let mut module = FiniteUModule::new(format!("F_{k}({n})"), k, max_deg);
        for (d, ws) in words.iter().enumerate() {
            for (i, w) in ws.iter().enumerate() {
                index.insert(w.clone(), (d, i));
                module.add_basis(word_label(n, w), d);
            }
        }
        let mut free = FreeModule {
            descriptor,
            words,
            index,
            module,
        };
        free.fill_action();
        free
    }

    fn fill_action(&mut self) {
        let FreeDescriptor { n, k, max_deg } = self.descriptor;
        let bound = k.cap(n);
        for d in 0..=max_deg {
            if self.words[d].is_empty() {
                continue;
            }
            for j in 0..d {
                if !self.module.defined(j, d) {
                    continue;
                }
                let tgt = 2 * d - j;
                let mut m = BitMatrix::zeros(self.words[tgt].len(), self.words[d].len());
                for (c, w) in self.words[d].iter().enumerate() {
                    let mut word = Vec::with_capacity(w.len() + 1);
                    word.push(j as i64);
                    word.extend_from_slice(w);
                    let (upper, _) = lower_to_upper(&LowerWord::new(n as i64, word)).expect("j < d keeps upper indices positive");
                    let expanded = instability_kill(&adem_normalize(&upper), n as u64);
                    for term in expanded.terms() {
                        let lower = upper_to_lower(term, n as u64);
                        assert!(
                            lower.indices.iter().all(|&i| i >= 0 && (i as usize) < bound),
                            "Sq_{j} {} leaves the basis of F_{k}({n}): {lower}",
                            word_label(n, w)
                        );
                        let &(dd, r) = self
                            .index
                            .get(&lower.indices)
                            .unwrap_or_else(|| panic!("{lower} missing from the basis of F_{k}({n})"));
                        debug_assert_eq!(dd, tgt);
                        m.set(r, c, !m.get(r, c));
                    }
                }
                self.module.set_action(j, d, m).expect("shapes match by construction");
            }
        }
    }

    pub fn module(&self) -> &FiniteUModule {
        &self.module
    }

    pub fn into_module(self) -> FiniteUModule {
        self.module
    }

    /// Basis words in degree `d`.
    pub fn words(&self, d: usize) -> &[Vec<i64>] {
        self.words.get(d).map_or(&[], Vec::as_slice)
    }

    /// Degree and position of a basis word.
    pub fn position(&self, word: &[i64]) -> Option<(usize, usize)> {
        self.index.get(word).copied()
    }
}

/// `F_k(n)` truncated at `max_deg`.
pub fn free_module(d: FreeDescriptor) -> FiniteUModule {
    FreeModule::new(d).into_module()
}

/// The sphere `S_k(n)`: one class in degree `n`, all squares zero except
/// the identity `Sq_0` on degree `0`.
pub fn sphere(n: usize, k: Level, max_deg: usize) -> FiniteUModule {
    let mut m = FiniteUModule::new(format!("S_{k}({n})"), k, max_deg);
    if n <= max_deg {
        m.add_basis(format!("i_{n}"), n);
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;

    fn free(n: usize, k: Level, max_deg: usize) -> FreeModule {
        FreeModule::new(FreeDescriptor { n, k, max_deg })
    }

    #[test]
    fn free_examples() {
        for k in [Level::Finite(1), Level::Finite(3), Level::Infinite] {
            let f = free(0, k, 10);
            assert_eq!(f.module().dims()[0], 1);
            assert_eq!(f.module().total_dim(), 1);
        }
        let f = free(1, Level::Finite(1), 40);
        for d in 0..=40usize {
            let expected = usize::from(d.is_power_of_two());
            assert_eq!(f.module().dim(d), expected, "degree {d}");
        }
        let f = free(2, Level::Finite(2), 6);
        assert_eq!(&f.module().dims()[2..=6], &[1, 1, 1, 1, 1]);
        let labels: Vec<_> = (2..=6).map(|d| f.module().labels(d)[0].clone()).collect();
        assert_eq!(labels, ["i_2", "Sq_1i_2", "Sq_0i_2", "Sq_1Sq_1i_2", "Sq_0Sq_1i_2"]);
    }

    #[test]
    fn free_action_small() {
        // in F_2(2): Sq_1 i_2 = Sq^1 i_2, and Sq_1 Sq_1 i_2 is Sq^2 Sq^1 i_2
        let f = free(2, Level::Finite(2), 6);
        let m = f.module();
        assert!(m.action(1, 2).unwrap().get(0, 0));
        assert!(m.action(1, 3).unwrap().get(0, 0));
        // Sq_0 Sq_1 i_2 = Sq^3 Sq^1 i_2 is a basis word in degree 6
        assert!(m.action(0, 3).unwrap().get(0, 0));
        // Sq_1 on degree 3 is Sq^2; Sq^2 Sq^1 is admissible with excess 1
        assert!(m.stored(1, 3).is_some());
    }

    #[test]
    fn free_counts_match_closed_form() {
        // count nondecreasing words directly by dynamic programming over (degree, max index)
        fn count(n: usize, bound: usize, a: usize) -> usize {
            fn go(deg: usize, top: Option<usize>, target: usize, bound: usize) -> usize {
                let mut c = usize::from(deg == target);
                let hi = top.map_or(bound, |t| t + 1).min(deg);
                for i in 0..hi {
                    let next = 2 * deg - i;
                    if next <= target {
                        c += go(next, Some(i), target, bound);
                    }
                }
                c
            }
            if a < n {
                0
            } else {
                go(n, None, a, bound)
            }
        }
        for n in 0..=8 {
            for k in [Level::Finite(1), Level::Finite(2), Level::Finite(3), Level::Infinite] {
                let words = free_basis_words(n, k.cap(n), 40);
                for a in 0..=40 {
                    assert_eq!(words[a].len(), count(n, k.cap(n), a), "n={n} k={k} a={a}");
                }
            }
        }
    }

    #[test]
    fn free_modules_build_for_many_parameters() {
        for n in 0..=6 {
            for k in [Level::Finite(1), Level::Finite(2), Level::Finite(3), Level::Infinite] {
                let f = free(n, k, 24);
                assert_eq!(f.module().dim(n), 1);
            }
        }
    }

    #[test]
    fn sphere_examples() {
        let s = sphere(0, Level::Finite(3), 5);
        assert_eq!(s.dims(), vec![1, 0, 0, 0, 0, 0]);
        assert!(s.action(0, 0).unwrap().get(0, 0));
        let s = sphere(4, Level::Finite(2), 10);
        assert_eq!(s.dim(4), 1);
        assert_eq!(s.total_dim(), 1);
        assert!(s.action(1, 4).unwrap().is_zero());
    }
}
