use std::cell::RefCell;
use std::collections::HashMap;
use std::rc::Rc;

use crate::f2linalg::BitMatrix;
use crate::unstable::Level;

use super::algebra::{admissible_monomials, d_lambda, LambdaElement, LambdaMonomial};

/// Membership in `Gamma(m, k)`: a nontrivial admissible `I` with
/// `excess(I) + (s - 1) > I(1) - (m - k)`, equivalently
/// `t + m - k - 1 > 2 I(s)`. The unit is never in `Gamma`.
pub fn in_gamma(i: &LambdaMonomial, m: usize, k: usize) -> bool {
    let (Some(first), Some(last)) = (i.first(), i.last()) else {
        return false;
    };
    let (m, k) = (m as i64, k as i64);
    let by_excess = i.excess() + (i.s() as i64 - 1) > first as i64 - (m - k);
    let by_last = i.t() as i64 + m - k - 1 > 2 * last as i64;
    assert_eq!(by_excess, by_last, "the two forms of the Gamma condition disagree on {i}");
    by_excess
}

/// The complex `Lambda_k(m)`, or `Lambda(m)` when `k` is infinite: admissible
/// `I` with `I(1) < m`, modulo `Gamma(m, k)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LambdaKSpace {
    pub m: usize,
    pub k: Level,
}

impl LambdaKSpace {
    pub fn new(m: usize, k: Level) -> Self {
        LambdaKSpace { m, k }
    }

    /// Whether an admissible monomial is a basis element.
    pub fn contains(&self, i: &LambdaMonomial) -> bool {
        match i.first() {
            None => true,
            Some(f) => {
                (f as usize) < self.m
                    && match self.k {
                        Level::Finite(k) => !in_gamma(i, self.m, k),
                        Level::Infinite => true,
                    }
            }
        }
    }

    /// Basis in bidegree `(s, t)`, lexicographic.
    pub fn basis(&self, s: usize, t: usize) -> Rc<Vec<LambdaMonomial>> {
        thread_local! {
            static BASES: RefCell<HashMap<(LambdaKSpace, usize, usize), Rc<Vec<LambdaMonomial>>>> = RefCell::new(HashMap::new());
        }
        let key = (*self, s, t);
        if let Some(hit) = BASES.with(|b| b.borrow().get(&key).cloned()) {
            return hit;
        }
        let basis = Rc::new(self.enumerate(s, t));
        BASES.with(|b| b.borrow_mut().insert(key, Rc::clone(&basis)));
        basis
    }

    fn enumerate(&self, s: usize, t: usize) -> Vec<LambdaMonomial> {
        // nonzero classes of Lambda_k(m) have s <= k and I(1) >= m - k; both are
        // checked against the unrestricted enumeration in the tests
        let lo = match self.k {
            Level::Finite(k) if s > k => return Vec::new(),
            Level::Finite(k) => self.m.saturating_sub(k) as u32,
            Level::Infinite => 0,
        };
        admissible_monomials(lo..self.m as u32, s, t)
            .into_iter()
            .filter(|i| self.contains(i))
            .collect()
    }

    /// Same as [`LambdaKSpace::basis`] without the pruning shortcuts.
    pub fn basis_unpruned(&self, s: usize, t: usize) -> Vec<LambdaMonomial> {
        admissible_monomials(0..self.m as u32, s, t)
            .into_iter()
            .filter(|i| self.contains(i))
            .collect()
    }

    /// Drops the terms that vanish in the quotient. Every term must already
    /// satisfy `I(1) < m`.
    pub fn project(&self, e: &LambdaElement) -> LambdaElement {
        e.filter(|t| {
            assert!(t.first().is_none_or(|f| (f as usize) < self.m), "{t} is not in Lambda({})", self.m);
            self.contains(t)
        })
    }

    /// `d: (s, t) -> (s + 1, t)` in the bases above.
    pub fn differential(&self, s: usize, t: usize) -> BitMatrix {
        let src = self.basis(s, t);
        let tgt = self.basis(s + 1, t);
        let index: HashMap<&LambdaMonomial, usize> = tgt.iter().enumerate().map(|(r, m)| (m, r)).collect();
        let mut d = BitMatrix::zeros(tgt.len(), src.len());
        for (c, i) in src.iter().enumerate() {
            for term in self.project(&d_lambda(i)).terms() {
                d.set(index[term], c, true);
            }
        }
        d
    }

    /// Every basis element with `s <= smax` and `t <= tmax`, ordered by
    /// `(s, t)` then lexicographically.
    pub fn all(&self, smax: usize, tmax: usize) -> Vec<LambdaMonomial> {
        let mut out = Vec::new();
        for s in 0..=smax {
            for t in 0..=tmax {
                out.extend(self.basis(s, t).iter().cloned());
            }
        }
        out
    }

    /// A bound on `t` beyond which a finite `Lambda_k(m)` vanishes:
    /// `I(r) < 2^{r-1} m` for admissible words with `I(1) < m`.
    pub fn t_bound(&self) -> Option<usize> {
        let k = self.k.finite()?;
        if self.m == 0 {
            return Some(0);
        }
        Some(k + (self.m - 1) * ((1usize << k) - 1))
    }
}

/// The EHP maps in bidegree `(s, t)`: `e: Lambda_k(m) -> Lambda_{k+1}(m+1)`
/// includes basis monomials, and `h: Lambda_{k+1}(m+1) -> Lambda_k(2m+1)`
/// sends `lambda_m lambda_J` to `lambda_J` in bidegree `(s-1, t-m-1)` and
/// kills every other basis monomial.
pub fn ehp_maps(m: usize, k: Level, s: usize, t: usize) -> (BitMatrix, BitMatrix) {
    let src = LambdaKSpace::new(m, k);
    let mid = LambdaKSpace::new(m + 1, k.succ());
    let tgt = LambdaKSpace::new(2 * m + 1, k);
    let mid_basis = mid.basis(s, t);
    let mid_index: HashMap<&LambdaMonomial, usize> = mid_basis.iter().enumerate().map(|(r, x)| (x, r)).collect();
    let src_basis = src.basis(s, t);
    let mut e = BitMatrix::zeros(mid_basis.len(), src_basis.len());
    for (c, i) in src_basis.iter().enumerate() {
        let r = *mid_index
            .get(i)
            .unwrap_or_else(|| panic!("{i} is not a basis element of the middle term"));
        e.set(r, c, true);
    }
    let tgt_basis: Rc<Vec<LambdaMonomial>> = if s >= 1 && t > m {
        tgt.basis(s - 1, t - m - 1)
    } else {
        Rc::new(Vec::new())
    };
    let tgt_index: HashMap<&LambdaMonomial, usize> = tgt_basis.iter().enumerate().map(|(r, x)| (x, r)).collect();
    let mut h = BitMatrix::zeros(tgt_basis.len(), mid_basis.len());
    for (c, i) in mid_basis.iter().enumerate() {
        if i.first() == Some(m as u32) {
            let rest = i.tail();
            let r = *tgt_index
                .get(&rest)
                .unwrap_or_else(|| panic!("{rest} is not a basis element of the third term"));
            h.set(r, c, true);
        }
    }
    (e, h)
}

/// Checks that `e` and `h` are chain maps forming a short exact sequence in
/// every bidegree with `t <= tmax`. Returns a description of each failure.
pub fn ehp_check(m: usize, k: Level, tmax: usize) -> Vec<String> {
    let src = LambdaKSpace::new(m, k);
    let mid = LambdaKSpace::new(m + 1, k.succ());
    let tgt = LambdaKSpace::new(2 * m + 1, k);
    let mut bad = Vec::new();
    for t in 0..=tmax {
        for s in 0..=t {
            let (e, h) = ehp_maps(m, k, s, t);
            let where_ = format!("m={m} k={k} (s,t)=({s},{t})");
            if e.rank() != e.cols() {
                bad.push(format!("{where_}: e is not injective"));
            }
            if h.rank() != h.rows() {
                bad.push(format!("{where_}: h is not surjective"));
            }
            if !h.mul(&e).is_zero() || e.cols() + h.rows() != e.rows() {
                bad.push(format!("{where_}: not exact in the middle"));
            }
            let (e1, h1) = ehp_maps(m, k, s + 1, t);
            if mid.differential(s, t).mul(&e) != e1.mul(&src.differential(s, t)) {
                bad.push(format!("{where_}: e does not commute with d"));
            }
            let d_tgt = if s >= 1 && t > m {
                tgt.differential(s - 1, t - m - 1)
            } else {
                BitMatrix::zeros(h1.rows(), h.rows())
            };
            if h1.mul(&mid.differential(s, t)) != d_tgt.mul(&h) {
                bad.push(format!("{where_}: h does not commute with d"));
            }
        }
    }
    bad
}
