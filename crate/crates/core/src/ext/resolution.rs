use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::f2linalg::{BitMatrix, BitVector, Subspace};
use crate::unstable::{direct_sum, validate, FiniteUModule, FreeDescriptor, FreeModule, Level};

use super::table::{ExtTable, Provenance};

/// One free module `P_s` of a resolution together with its map to the
/// previous stage (or to the resolved module when `s = 0`).
#[derive(Clone, Debug)]
pub struct Stage {
    /// Degrees of the generators, ascending.
    pub generators: Vec<usize>,
    /// Image of each generator in the previous stage.
    pub images: Vec<BitVector>,
    /// `P_s` as a direct sum of free modules, generators in order.
    pub module: FiniteUModule,
    /// `d_s` in each degree `0..=max_deg`.
    pub map: Vec<BitMatrix>,
    /// Column where generator `g`'s block starts, per degree.
    offsets: Vec<Vec<usize>>,
}

impl Stage {
    pub fn generator_count(&self, a: usize) -> usize {
        self.generators.iter().filter(|&&d| d == a).count()
    }

    /// Column of generator `g` itself (the empty word) in its own degree.
    fn generator_column(&self, g: usize) -> usize {
        self.offsets[self.generators[g]][g]
    }
}

/// A minimal free resolution `... -> P_1 -> P_0 -> M` over `Q_k`, exact in
/// degrees `<= max_deg`.
#[derive(Clone, Debug)]
pub struct Resolution {
    pub k: Level,
    pub max_deg: usize,
    pub stages: Vec<Stage>,
}

struct FreeCache {
    k: Level,
    max_deg: usize,
    frees: HashMap<usize, FreeModule>,
}

impl FreeCache {
    fn get(&mut self, n: usize) -> &FreeModule {
        let (k, max_deg) = (self.k, self.max_deg);
        self.frees
            .entry(n)
            .or_insert_with(|| FreeModule::new(FreeDescriptor { n, k, max_deg }))
    }
}

/// Chooses generators degree by degree so that their images span `want`
/// (a submodule of `target`), adding a generator only for a vector not
/// already reached by the lower-degree generators.
fn cover(target: &FiniteUModule, want: &[Subspace], cache: &mut FreeCache) -> Stage {
    let max_deg = cache.max_deg;
    let mut generators: Vec<usize> = Vec::new();
    let mut images: Vec<BitVector> = Vec::new();
    // image of every basis word of every generator, keyed by (generator, word)
    let mut word_images: Vec<HashMap<Vec<i64>, BitVector>> = Vec::new();
    let mut columns: Vec<Vec<BitVector>> = vec![Vec::new(); max_deg + 1];
    let mut offsets: Vec<Vec<usize>> = vec![Vec::new(); max_deg + 1];
    for d in 0..=max_deg {
        let mut span = Subspace::new(target.dim(d));
        for g in 0..generators.len() {
            offsets[d].push(columns[d].len());
            let words: Vec<Vec<i64>> = cache.get(generators[g]).words(d).to_vec();
            for w in words {
                let v = if w.is_empty() {
                    images[g].clone()
                } else {
                    let tail_deg = (d + w[0] as usize) / 2;
                    let tail = &word_images[g][&w[1..]];
                    target
                        .act(w[0] as usize, tail_deg, tail)
                        .expect("square inside the window")
                };
                span.insert(&v);
                columns[d].push(v.clone());
                word_images[g].insert(w, v);
            }
        }
        for v in want[d].generators() {
            if span.insert(v) {
                generators.push(d);
                images.push(v.clone());
                word_images.push(HashMap::from([(Vec::new(), v.clone())]));
                offsets[d].push(columns[d].len());
                columns[d].push(v.clone());
            }
        }
    }
    let frees: Vec<FiniteUModule> = generators.iter().map(|&n| cache.get(n).module().clone()).collect();
    let module = if frees.is_empty() {
        FiniteUModule::new("0", cache.k, max_deg)
    } else {
        direct_sum(&frees.iter().collect::<Vec<_>>())
    };
    let map = (0..=max_deg)
        .map(|d| {
            assert_eq!(columns[d].len(), module.dim(d));
            BitMatrix::from_columns(target.dim(d), &columns[d])
        })
        .collect();
    Stage {
        generators,
        images,
        module,
        map,
        offsets,
    }
}

/// A minimal resolution of `m` through stage `max_s`, exact in degrees
/// `<= max_deg`.
pub fn minimal_resolution(m: &FiniteUModule, max_deg: usize, max_s: usize) -> Result<Resolution> {
    if max_deg > m.max_deg() {
        return Err(Error::Window(format!(
            "resolution through degree {max_deg} needs {} through that degree, but it is known only through {}",
            m.name(),
            m.max_deg()
        )));
    }
    let violations = validate(m);
    if !violations.is_empty() {
        return Err(Error::Validation(violations));
    }
    let target = crate::unstable::truncate(m, max_deg);
    let mut cache = FreeCache {
        k: m.k(),
        max_deg,
        frees: HashMap::new(),
    };
    let everything: Vec<Subspace> = (0..=max_deg)
        .map(|d| {
            let units: Vec<BitVector> = (0..target.dim(d)).map(|i| BitVector::unit(target.dim(d), i)).collect();
            Subspace::spanned_by(target.dim(d), &units)
        })
        .collect();
    let mut stages = vec![cover(&target, &everything, &mut cache)];
    for _ in 0..max_s {
        let prev = stages.last().unwrap();
        let kernel: Vec<Subspace> = prev
            .map
            .iter()
            .map(|d| Subspace::spanned_by(d.cols(), &d.kernel_basis()))
            .collect();
        let next = cover(&prev.module, &kernel, &mut cache);
        stages.push(next);
    }
    Ok(Resolution {
        k: m.k(),
        max_deg,
        stages,
    })
}

impl Resolution {
    pub fn max_s(&self) -> usize {
        self.stages.len() - 1
    }

    /// Generator degrees of `P_s`.
    pub fn generators(&self, s: usize) -> &[usize] {
        &self.stages[s].generators
    }

    /// No generator of `P_{s+1}` maps onto a generator of `P_s`: its image
    /// has zero coefficient on every length-zero word.
    pub fn minimality_failures(&self) -> Vec<String> {
        let mut bad = Vec::new();
        for s in 1..self.stages.len() {
            let (prev, cur) = (&self.stages[s - 1], &self.stages[s]);
            for (g, (&d, v)) in cur.generators.iter().zip(&cur.images).enumerate() {
                for h in 0..prev.generators.len() {
                    if prev.generators[h] == d && v.get(prev.generator_column(h)) {
                        bad.push(format!("stage {s}: generator {g} in degree {d} hits generator {h} of stage {}", s - 1));
                    }
                }
            }
        }
        bad
    }

    /// Exactness of `... -> P_1 -> P_0 -> M -> 0` in every degree.
    pub fn exactness_failures(&self, m: &FiniteUModule) -> Vec<String> {
        let mut bad = Vec::new();
        for d in 0..=self.max_deg {
            if self.stages[0].map[d].rank() != m.dim(d) {
                bad.push(format!("P_0 -> M is not onto in degree {d}"));
            }
            for s in 1..self.stages.len() {
                let (lower, upper) = (&self.stages[s - 1].map[d], &self.stages[s].map[d]);
                if !lower.mul(upper).is_zero() {
                    bad.push(format!("d_{} d_{s} != 0 in degree {d}", s - 1));
                }
                if upper.rank() != lower.cols() - lower.rank() {
                    bad.push(format!("not exact at P_{} in degree {d}", s - 1));
                }
            }
        }
        bad
    }

    /// `Ext^{s,a}` read off as generator counts.
    pub fn ext_table(&self) -> ExtTable {
        let mut t = ExtTable::new(self.max_deg, Some(self.max_s()), Provenance::Resolution);
        for (s, stage) in self.stages.iter().enumerate() {
            for a in 0..=self.max_deg {
                t.set(s, a, stage.generator_count(a));
            }
        }
        t
    }
}

/// `Ext_k^{s}(M, S_k(a))` for `s <= max_s`, `a <= max_deg`, from a minimal
/// resolution.
pub fn ext_via_resolution(m: &FiniteUModule, max_deg: usize, max_s: usize) -> Result<ExtTable> {
    Ok(minimal_resolution(m, max_deg, max_s)?.ext_table())
}
