//! Functors between the categories `U_k`: forgetting squares, suspension,
//! Frobenius, the loop functors and tensor products.

use crate::error::{Error, Result};
use crate::f2linalg::{BitMatrix, BitVector, Subspace};

use super::module::{FiniteUModule, Level, ModuleMap};

/// Keeps `Sq_0, ..., Sq_{k-1}` only.
pub fn forget_to(m: &FiniteUModule, k: Level) -> FiniteUModule {
    assert!(k <= m.k(), "cannot forget from level {} up to {k}", m.k());
    let mut out = FiniteUModule::new(m.name(), k, m.max_deg());
    copy_basis(m, &mut out, 0);
    for (j, d) in m.squares() {
        if k.allows(j) {
            if let Some(a) = m.stored(j, d) {
                out.set_action(j, d, a.clone()).unwrap();
            }
        }
    }
    out
}

/// The forgetful functor `U_{k+1} -> U_k`.
pub fn forget(m: &FiniteUModule) -> FiniteUModule {
    let k = match m.k() {
        Level::Finite(k) => Level::Finite(k.checked_sub(1).expect("nothing to forget at level 0")),
        Level::Infinite => panic!("forget needs a finite level; use forget_to"),
    };
    forget_to(m, k)
}

fn copy_basis(from: &FiniteUModule, to: &mut FiniteUModule, shift: usize) {
    for d in 0..=from.max_deg() {
        for l in from.labels(d) {
            if d + shift <= to.max_deg() {
                to.add_basis(l.clone(), d + shift);
            }
        }
    }
}

/// Restriction to degrees `<= max_deg`.
pub fn truncate(m: &FiniteUModule, max_deg: usize) -> FiniteUModule {
    let max_deg = max_deg.min(m.max_deg());
    let mut out = FiniteUModule::new(m.name(), m.k(), max_deg);
    copy_basis(m, &mut out, 0);
    for (j, d) in m.squares() {
        if 2 * d - j <= max_deg {
            if let Some(a) = m.stored(j, d) {
                out.set_action(j, d, a.clone()).unwrap();
            }
        }
    }
    out
}

/// `Sigma M` in `U_{k+1}`: `(Sigma M)^{n+1} = M^n` and
/// `Sq_{j+1}(Sigma x) = Sigma(Sq_j x)`.
pub fn suspend(m: &FiniteUModule) -> FiniteUModule {
    let mut out = FiniteUModule::new(format!("S{}", m.name()), m.k().succ(), m.max_deg() + 1);
    for d in 0..=m.max_deg() {
        for l in m.labels(d) {
            out.add_basis(format!("s{l}"), d + 1);
        }
    }
    for (j, d) in m.squares() {
        if let Some(a) = m.stored(j, d) {
            out.set_action(j + 1, d + 1, a.clone()).unwrap();
        }
    }
    out
}

/// Inverse of [`suspend`] on modules with `M^0 = 0` and `Sq_0 = 0`.
pub fn desuspend(m: &FiniteUModule) -> Result<FiniteUModule> {
    let k = m
        .k()
        .pred()
        .ok_or_else(|| Error::Precondition("cannot desuspend a module at level 0".into()))?;
    if m.dim(0) != 0 {
        return Err(Error::Precondition("module is nonzero in degree 0".into()));
    }
    if m.squares().any(|(j, d)| j == 0 && m.stored(0, d).is_some()) {
        return Err(Error::Precondition("Sq_0 acts nontrivially".into()));
    }
    let name = m.name().strip_prefix('S').map_or_else(|| format!("D{}", m.name()), str::to_string);
    let mut out = FiniteUModule::new(name, k, m.max_deg().saturating_sub(1));
    for d in 1..=m.max_deg() {
        for l in m.labels(d) {
            out.add_basis(l.strip_prefix('s').unwrap_or(l).to_string(), d - 1);
        }
    }
    for (j, d) in m.squares() {
        if j >= 1 {
            if let Some(a) = m.stored(j, d) {
                out.set_action(j - 1, d - 1, a.clone()).unwrap();
            }
        }
    }
    Ok(out)
}

/// `Phi M` in `U_{2k}`: `(Phi M)^{2n} = M^n`, `Sq_{2i}(Phi x) = Phi(Sq_i x)`,
/// odd squares zero. The window becomes `2 max_deg + 1`.
pub fn frobenius(m: &FiniteUModule) -> FiniteUModule {
    let mut out = FiniteUModule::new(format!("F{}", m.name()), m.k().double(), 2 * m.max_deg() + 1);
    for d in 0..=m.max_deg() {
        for l in m.labels(d) {
            out.add_basis(format!("f{l}"), 2 * d);
        }
    }
    for (j, d) in m.squares() {
        if let Some(a) = m.stored(j, d) {
            out.set_action(2 * j, 2 * d, a.clone()).unwrap();
        }
    }
    out
}

/// `M + N`, basis of `M` first in each degree.
pub fn direct_sum(parts: &[&FiniteUModule]) -> FiniteUModule {
    assert!(!parts.is_empty());
    let k = parts[0].k();
    let max_deg = parts.iter().map(|p| p.max_deg()).min().unwrap();
    assert!(parts.iter().all(|p| p.k() == k), "summands at different levels");
    let name = parts.iter().map(|p| p.name()).collect::<Vec<_>>().join("+");
    let mut out = FiniteUModule::new(name, k, max_deg);
    let mut seen = std::collections::HashSet::new();
    let clash = !parts
        .iter()
        .flat_map(|p| (0..=max_deg).flat_map(move |d| p.labels(d)))
        .all(|l| seen.insert(l));
    for (i, p) in parts.iter().enumerate() {
        for d in 0..=max_deg {
            for l in p.labels(d) {
                out.add_basis(if clash { format!("{i}:{l}") } else { l.clone() }, d);
            }
        }
    }
    for d in 0..=max_deg {
        for j in 0..d {
            if !out.defined(j, d) {
                continue;
            }
            let blocks: Vec<BitMatrix> = parts.iter().map(|p| p.action(j, d).unwrap()).collect();
            out.set_action(j, d, BitMatrix::block_diag(&blocks)).unwrap();
        }
    }
    out
}

/// A per-degree choice of subspaces, closed under the action.
pub type Submodule = Vec<Subspace>;

/// The smallest submodule containing the given homogeneous elements.
pub fn submodule_generated(m: &FiniteUModule, gens: &[(usize, BitVector)]) -> Submodule {
    let mut sub: Submodule = (0..=m.max_deg()).map(|d| Subspace::new(m.dim(d))).collect();
    for (d, v) in gens {
        sub[*d].insert(v);
    }
    // squares raise degree, so one ascending pass closes everything
    for d in 0..=m.max_deg() {
        let vs: Vec<BitVector> = sub[d].generators().to_vec();
        for j in 0..d {
            if !m.defined(j, d) {
                continue;
            }
            for v in &vs {
                let w = m.act(j, d, v).unwrap();
                sub[2 * d - j].insert(&w);
            }
        }
    }
    sub
}

/// `M / S` with basis the unit vectors of non-pivot columns of `S`.
pub fn quotient(m: &FiniteUModule, sub: &Submodule) -> FiniteUModule {
    let cols: Vec<Vec<usize>> = sub.iter().map(Subspace::complement_columns).collect();
    let mut out = FiniteUModule::new(format!("{}/S", m.name()), m.k(), m.max_deg());
    for (d, cs) in cols.iter().enumerate() {
        for &c in cs {
            out.add_basis(m.labels(d)[c].clone(), d);
        }
    }
    for (j, d) in m.squares() {
        let tgt = 2 * d - j;
        if cols[d].is_empty() || cols[tgt].is_empty() {
            continue;
        }
        let mut a = BitMatrix::zeros(cols[tgt].len(), cols[d].len());
        for (ci, &c) in cols[d].iter().enumerate() {
            let img = sub[tgt].reduce(&m.act(j, d, &BitVector::unit(m.dim(d), c)).unwrap());
            for (ri, &r) in cols[tgt].iter().enumerate() {
                if img.get(r) {
                    a.set(ri, ci, true);
                }
            }
        }
        out.set_action(j, d, a).unwrap();
    }
    out
}

/// A submodule as a module in its own right, with basis the generators of
/// each subspace.
pub fn submodule(m: &FiniteUModule, sub: &Submodule, name: &str) -> FiniteUModule {
    let mut out = FiniteUModule::new(name, m.k(), m.max_deg());
    for (d, s) in sub.iter().enumerate() {
        for (i, v) in s.generators().iter().enumerate() {
            let terms: Vec<&str> = v.iter_ones().map(|c| m.labels(d)[c].as_str()).collect();
            let label = if terms.len() == 1 {
                terms[0].to_string()
            } else {
                format!("{name}{d}.{i}")
            };
            out.add_basis(label, d);
        }
    }
    for (j, d) in m.squares() {
        let tgt = 2 * d - j;
        if sub[d].dim() == 0 || sub[tgt].dim() == 0 {
            continue;
        }
        let columns: Vec<BitVector> = sub[d]
            .generators()
            .iter()
            .map(|v| {
                sub[tgt]
                    .coordinates(&m.act(j, d, v).unwrap())
                    .expect("submodule is not closed under the action")
            })
            .collect();
        out.set_action(j, d, BitMatrix::from_columns(sub[tgt].dim(), &columns)).unwrap();
    }
    out
}

/// `lambda_M: u Phi M -> M`, `Phi x -> Sq_0 x`, known up to the window of `M`.
pub fn lambda_map(m: &FiniteUModule) -> ModuleMap {
    let k = m.k();
    assert!(k != Level::Finite(0), "lambda_M needs k >= 1");
    let phi = forget_to(&truncate(&frobenius(m), m.max_deg()), k);
    let matrices = (0..=m.max_deg())
        .map(|d| {
            if d % 2 == 0 && m.defined(0, d / 2) {
                m.action(0, d / 2).unwrap()
            } else {
                BitMatrix::zeros(m.dim(d), phi.dim(d))
            }
        })
        .collect();
    let map = ModuleMap::new(phi, m.clone(), matrices);
    debug_assert!(map.commutes(), "lambda_M fails to commute with the squares");
    map
}

/// Kernel of a module map as a submodule of its source.
pub fn kernel(f: &ModuleMap) -> Submodule {
    (0..=f.window)
        .map(|d| Subspace::spanned_by(f.source.dim(d), &f.matrix(d).kernel_basis()))
        .collect()
}

/// Image of a module map as a submodule of its target.
pub fn image(f: &ModuleMap) -> Submodule {
    (0..=f.window)
        .map(|d| {
            let m = f.matrix(d);
            let cols: Vec<BitVector> = (0..m.cols()).map(|c| m.column(c)).collect();
            Subspace::spanned_by(f.target.dim(d), &cols)
        })
        .collect()
}

/// `(Omega M, Omega_1 M)`: desuspended cokernel and kernel of `lambda_M`,
/// both in `U_{k-1}` with window one less than that of `M`.
pub fn loop_functor(m: &FiniteUModule) -> (FiniteUModule, FiniteUModule) {
    let f = lambda_map(m);
    let coker = quotient(m, &image(&f));
    let source = truncate(&f.source, f.window);
    let ker = submodule(&source, &kernel(&f), "k");
    let omega = desuspend(&coker).expect("cokernel of lambda_M must be a suspension");
    let omega1 = desuspend(&ker).expect("kernel of lambda_M must be a suspension");
    (
        omega.with_name(format!("O({})", m.name())),
        omega1.with_name(format!("O1({})", m.name())),
    )
}

/// `M (x) N` with the Cartan formula; in lower indices
/// `Sq_l (x (x) y) = sum_{l1 + l2 = l} Sq_{l1} x (x) Sq_{l2} y`.
/// The basis in degree `n` lists pairs by the degree of the left factor,
/// then left index, then right index.
pub fn tensor(m: &FiniteUModule, n: &FiniteUModule) -> FiniteUModule {
    assert_eq!(m.k(), n.k(), "tensor factors at different levels");
    let max_deg = m.max_deg().min(n.max_deg());
    let mut out = FiniteUModule::new(format!("{}*{}", m.name(), n.name()), m.k(), max_deg);
    // offsets[d][p] = start of the block M^p (x) N^{d-p} inside degree d
    let mut offsets = vec![vec![0usize; max_deg + 1]; max_deg + 1];
    for d in 0..=max_deg {
        let mut at = 0;
        for p in 0..=d {
            offsets[d][p] = at;
            for a in m.labels(p) {
                for b in n.labels(d - p) {
                    out.add_basis(format!("{a}*{b}"), d);
                }
            }
            at += m.dim(p) * n.dim(d - p);
        }
    }
    for d in 0..=max_deg {
        for l in 0..d {
            if !out.defined(l, d) {
                continue;
            }
            let tgt = 2 * d - l;
            let mut a = BitMatrix::zeros(out.dim(tgt), out.dim(d));
            for p in 0..=d {
                let q = d - p;
                for l1 in 0..=l.min(p) {
                    let l2 = l - l1;
                    if l2 > q {
                        continue;
                    }
                    let (Some(am), Some(an)) = (m.action(l1, p), n.action(l2, q)) else {
                        continue;
                    };
                    let (p2, q2) = (2 * p - l1, 2 * q - l2);
                    let (src0, dst0) = (offsets[d][p], offsets[tgt][p2]);
                    for x in 0..m.dim(p) {
                        for y in 0..n.dim(q) {
                            let col = src0 + x * n.dim(q) + y;
                            for x2 in am.column(x).iter_ones() {
                                for y2 in an.column(y).iter_ones() {
                                    let row = dst0 + x2 * n.dim(q2) + y2;
                                    a.set(row, col, !a.get(row, col));
                                }
                            }
                        }
                    }
                }
            }
            out.set_action(l, d, a).unwrap();
        }
    }
    out
}

/// Dimension per degree of `M / (decomposables)`, where the decomposables are
/// the images of all squares `Sq^i` with `i >= 1` available at this level.
pub fn indecomposables(m: &FiniteUModule) -> Vec<usize> {
    let mut dec: Vec<Subspace> = (0..=m.max_deg()).map(|d| Subspace::new(m.dim(d))).collect();
    for (j, d) in m.squares() {
        if let Some(a) = m.stored(j, d) {
            for c in 0..a.cols() {
                dec[2 * d - j].insert(&a.column(c));
            }
        }
    }
    (0..=m.max_deg()).map(|d| m.dim(d) - dec[d].dim()).collect()
}
