use crate::f2linalg::BitMatrix;
use crate::steenrod::binom_mod2_extended;

use super::module::FiniteUModule;

/// Matrix of `Sq_l` on degree `d` for a lower index that may be negative or
/// exceed the degree (both give zero). `None` if the square is not part of
/// the structure.
fn square(m: &FiniteUModule, l: i64, d: usize) -> Option<BitMatrix> {
    let tgt = 2 * d as i64 - l;
    if l < 0 || l > d as i64 {
        let rows = if tgt >= 0 { m.dim(tgt as usize) } else { 0 };
        return Some(BitMatrix::zeros(rows, m.dim(d)));
    }
    m.action(l as usize, d)
}

/// Checks every lower-index Adem relation `Sq_i Sq_j x = sum_s ...` on
/// classes `x` in the window whose squares, on both sides, all belong to
/// the module's level. Returns one message per failing instance.
///
/// This is a necessary condition for `M` to be a module over `Q_k`.
pub fn validate(m: &FiniteUModule) -> Vec<String> {
    let mut violations = Vec::new();
    let w = m.max_deg() as i64;
    for n in 0..=m.max_deg() {
        if m.dim(n) == 0 {
            continue;
        }
        let ni = n as i64;
        for j in 0..ni {
            let mid = (2 * ni - j) as usize;
            let Some(sq_j) = m.action(j as usize, n) else {
                continue;
            };
            for i in 0..(2 * ni - j) {
                if 2 * mid as i64 - i > w {
                    continue;
                }
                let Some(sq_i) = m.action(i as usize, mid) else {
                    continue;
                };
                let lhs = sq_i.mul(&sq_j);
                let mut rhs = BitMatrix::zeros(lhs.rows(), lhs.cols());
                let mut expressible = true;
                for s in (i + j + 1).div_euclid(2)..=ni {
                    if !binom_mod2_extended(s - j - 1, 2 * s - i - j) {
                        continue;
                    }
                    let inner = square(m, s, n);
                    let outer = square(m, i + 2 * j - 2 * s, (2 * ni - s) as usize);
                    match (inner, outer) {
                        (Some(a), Some(b)) => rhs = rhs.add(&b.mul(&a)),
                        _ => {
                            expressible = false;
                            break;
                        }
                    }
                }
                if expressible && lhs != rhs {
                    violations.push(format!(
                        "Sq_{i} Sq_{j} on degree {n} disagrees with the lower Adem relation"
                    ));
                }
            }
        }
    }
    violations
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::unstable::free::{free_module, sphere, FreeDescriptor};
    use crate::unstable::module::Level;

    #[test]
    fn free_and_spheres_validate() {
        for k in [Level::Finite(1), Level::Finite(2), Level::Finite(3), Level::Infinite] {
            for n in 0..=5 {
                let f = free_module(FreeDescriptor { n, k, max_deg: 24 });
                assert!(validate(&f).is_empty(), "F_{k}({n}): {:?}", validate(&f));
                assert!(validate(&sphere(n, k, 24)).is_empty());
            }
        }
    }

    #[test]
    fn counterexample_has_one_violation() {
        // x, y, z in degrees 1, 2, 3 with Sq_0 x = y and Sq_1 y = z; the relation
        // Sq_1 Sq_0 = 0 on degree 1 fails
        let mut m = FiniteUModule::new("bad", Level::Finite(2), 3);
        m.add_basis("x", 1);
        m.add_basis("y", 2);
        m.add_basis("z", 3);
        m.set_action(0, 1, BitMatrix::identity(1)).unwrap();
        m.set_action(1, 2, BitMatrix::identity(1)).unwrap();
        let v = validate(&m);
        assert_eq!(v.len(), 1, "{v:?}");
        assert!(v[0].contains("Sq_1 Sq_0 on degree 1"));
    }

    #[test]
    fn counterexample_is_minimal_by_search() {
        // over all action choices on the three classes, exactly the choices with
        // Sq_0 x and Sq_1 y both nonzero are rejected
        for a in [false, true] {
            for b in [false, true] {
                let mut m = FiniteUModule::new("t", Level::Finite(2), 3);
                m.add_basis("x", 1);
                m.add_basis("y", 2);
                m.add_basis("z", 3);
                m.set_action(0, 1, BitMatrix::from_fn(1, 1, |_, _| a)).unwrap();
                m.set_action(1, 2, BitMatrix::from_fn(1, 1, |_, _| b)).unwrap();
                assert_eq!(validate(&m).len(), usize::from(a && b));
            }
        }
    }
}
