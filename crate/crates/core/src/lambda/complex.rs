use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::ext::CochainComplex;
use crate::f2linalg::BitMatrix;
use crate::unstable::{FiniteUModule, Level};

use super::algebra::{d_lambda, lambda_normalize, LambdaMonomial};
use super::space::LambdaKSpace;

/// A basis element `lambda_I (x) x^v` of `Lambda_k(M)`, where `x^v` is the
/// dual of the `x`-th basis element of `M^m`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LambdaChainBasisElement {
    pub mono: LambdaMonomial,
    pub m: usize,
    pub x: usize,
}

impl LambdaChainBasisElement {
    /// Internal degree `a = m + t`.
    pub fn a(&self) -> usize {
        self.m + self.mono.t()
    }
}

/// Basis of `Lambda_k(M)^{s,a}`: by `m` ascending, then `I`
/// lexicographically, then the dual index.
pub fn chain_basis(module: &FiniteUModule, s: usize, a: usize) -> Vec<LambdaChainBasisElement> {
    let mut out = Vec::new();
    for m in 0..=a.min(module.max_deg()) {
        if module.dim(m) == 0 {
            continue;
        }
        let space = LambdaKSpace::new(m, module.k());
        for mono in space.basis(s, a - m).iter() {
            for x in 0..module.dim(m) {
                out.push(LambdaChainBasisElement {
                    mono: mono.clone(),
                    m,
                    x,
                });
            }
        }
    }
    out
}

fn s_range(k: Level, a: usize) -> usize {
    match k {
        Level::Finite(k) => k.min(a),
        Level::Infinite => a,
    }
}

/// The differential `d^{s,a}` of `Lambda_k(M)`:
/// `d(lambda_I (x) x) = d(lambda_I) (x) x + sum_i lambda_{i-1} lambda_I (x) x Sq^i`
/// over `i >= 1` with `Sq^i` on degree `m - i` of lower index `m - 2i` in
/// the module's range. Terms are reduced to admissible form and then
/// projected to the quotient.
fn differential(
    module: &FiniteUModule,
    src: &[LambdaChainBasisElement],
    tgt: &[LambdaChainBasisElement],
) -> BitMatrix {
    let index: HashMap<(&LambdaMonomial, usize, usize), usize> =
        tgt.iter().enumerate().map(|(r, b)| ((&b.mono, b.m, b.x), r)).collect();
    let row = |mono: &LambdaMonomial, m: usize, x: usize| -> usize {
        *index
            .get(&(mono, m, x))
            .unwrap_or_else(|| panic!("{mono} (x) dual {x} in degree {m} is not a basis element"))
    };
    let k = module.k();
    let mut d = BitMatrix::zeros(tgt.len(), src.len());
    let mut transposes: HashMap<(usize, usize), BitMatrix> = HashMap::new();
    for (c, b) in src.iter().enumerate() {
        let space = LambdaKSpace::new(b.m, k);
        for term in space.project(&d_lambda(&b.mono)).terms() {
            let r = row(term, b.m, b.x);
            d.set(r, c, !d.get(r, c));
        }
        for i in 1..=b.m / 2 {
            let j = b.m - 2 * i;
            if !k.allows(j) {
                continue;
            }
            let e = b.m - i;
            // x Sq^i is row x of the matrix of Sq_j: M^e -> M^m
            let t = transposes
                .entry((j, e))
                .or_insert_with(|| module.action(j, e).expect("square inside the window").transpose());
            let dual = t.column(b.x);
            if dual.is_zero() {
                continue;
            }
            let lower = LambdaKSpace::new(e, k);
            let product = lower.project(&lambda_normalize(b.mono.prepend(i as u32 - 1).indices()));
            for y in dual.iter_ones() {
                for term in product.terms() {
                    let r = row(term, e, y);
                    d.set(r, c, !d.get(r, c));
                }
            }
        }
    }
    d
}

/// `Lambda_k(M)` in internal degrees `a <= max_a`, or `Lambda(M)` when `M` is
/// a module in `U`. Internal degrees are built independently in parallel.
pub fn lambda_k_complex(module: &FiniteUModule, max_a: usize) -> Result<CochainComplex> {
    if max_a > module.max_deg() {
        return Err(Error::Window(format!(
            "internal degree {max_a} needs the module through degree {max_a}, but {} is known only through {}",
            module.name(),
            module.max_deg()
        )));
    }
    let k = module.k();
    let slices: Vec<(usize, Vec<usize>, Vec<BitMatrix>)> = (0..=max_a)
        .into_par_iter()
        .map(|a| {
            let top = s_range(k, a);
            let bases: Vec<Vec<LambdaChainBasisElement>> = (0..=top + 1).map(|s| chain_basis(module, s, a)).collect();
            let diffs = (0..=top).map(|s| differential(module, &bases[s], &bases[s + 1])).collect();
            (a, bases[..=top].iter().map(Vec::len).collect(), diffs)
        })
        .collect();
    let mut c = CochainComplex::new(max_a);
    for (a, dims, _) in &slices {
        for (s, &dim) in dims.iter().enumerate() {
            c.set_dim(s, *a, dim);
        }
    }
    for (a, _, diffs) in slices {
        for (s, d) in diffs.into_iter().enumerate() {
            c.set_diff(s, a, d);
        }
    }
    Ok(c)
}

/// `Lambda(M)` for a module in `U`.
pub fn lambda_complex_u(module: &FiniteUModule, max_a: usize) -> Result<CochainComplex> {
    if module.k() != Level::Infinite {
        return Err(Error::Precondition(format!(
            "{} is a module in U_{}, not in U",
            module.name(),
            module.k()
        )));
    }
    lambda_k_complex(module, max_a)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unstable::{free_module, sphere, FreeDescriptor};

    #[test]
    fn sphere_complex_matches_lambda_k_m() {
        for k in 0..=3 {
            for m in 0..=10 {
                let lk = Level::Finite(k);
                let c = lambda_k_complex(&sphere(m, lk, 60), 60).unwrap();
                assert!(c.differentials_vanish(), "k={k} m={m}");
                let space = LambdaKSpace::new(m, lk);
                for a in 0..=60 {
                    for s in 0..=k {
                        let expected = if a >= m { space.basis(s, a - m).len() } else { 0 };
                        assert_eq!(c.dim(s, a), expected);
                    }
                }
            }
        }
    }

    #[test]
    fn sphere_one_in_u() {
        let c = lambda_complex_u(&sphere(1, Level::Infinite, 12), 12).unwrap();
        for a in 1..=12 {
            assert_eq!(c.dim(a - 1, a), 1);
        }
        assert!(c.differentials_vanish());
    }

    #[test]
    fn d_squared_on_free_modules() {
        let f = free_module(FreeDescriptor {
            n: 2,
            k: Level::Finite(2),
            max_deg: 8,
        });
        assert!(lambda_k_complex(&f, 8).unwrap().d2_failures().is_empty());
        let f = free_module(FreeDescriptor {
            n: 2,
            k: Level::Infinite,
            max_deg: 10,
        });
        assert!(lambda_complex_u(&f, 10).unwrap().d2_failures().is_empty());
    }

    #[test]
    fn window_is_enforced() {
        assert!(lambda_k_complex(&sphere(1, Level::Finite(1), 5), 6).is_err());
    }
}
