use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::f2linalg::BitVector;

use super::free::{free_module, FreeDescriptor};
use super::functors::{direct_sum, quotient, submodule_generated};
use super::module::{FiniteUModule, Level};

/// A reproducible random module in `U_k`: a quotient of a sum of up to three
/// free modules by the submodule generated by a few random elements.
pub fn random_module(seed: u64, k: usize, max_deg: usize) -> FiniteUModule {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let summands = rng.gen_range(1..=3);
    let frees: Vec<FiniteUModule> = (0..summands)
        .map(|_| {
            let n = rng.gen_range(0..=max_deg.min(4));
            free_module(FreeDescriptor {
                n,
                k: Level::Finite(k),
                max_deg,
            })
        })
        .collect();
    let refs: Vec<&FiniteUModule> = frees.iter().collect();
    let sum = direct_sum(&refs);
    let occupied: Vec<usize> = (0..=max_deg).filter(|&d| sum.dim(d) > 0).collect();
    let relations = rng.gen_range(0..=3);
    let mut gens = Vec::new();
    for _ in 0..relations {
        let d = occupied[rng.gen_range(0..occupied.len())];
        let v = BitVector::from_bools((0..sum.dim(d)).map(|_| rng.gen_bool(0.5)));
        if !v.is_zero() {
            gens.push((d, v));
        }
    }
    let sub = submodule_generated(&sum, &gens);
    quotient(&sum, &sub).with_name(format!("R{seed}"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unstable::validate::validate;

    #[test]
    fn random_modules_validate_and_repeat() {
        for seed in 0..30 {
            let k = 1 + (seed as usize % 3);
            let m = random_module(seed, k, 16);
            assert!(validate(&m).is_empty(), "seed {seed}");
            assert!(m.same_structure(&random_module(seed, k, 16)));
        }
    }
}
