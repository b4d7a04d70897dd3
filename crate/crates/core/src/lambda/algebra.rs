use std::cell::RefCell;
use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::rc::Rc;

use crate::steenrod::binom_mod2;

/// A word `lambda_{I(1)} ... lambda_{I(s)}` in bidegree `(s, t)` with
/// `t = sum (I(r) + 1)`. The empty word is the unit.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Debug, Default)]
pub struct LambdaMonomial(Vec<u32>);

impl LambdaMonomial {
    pub fn new(word: Vec<u32>) -> Self {
        LambdaMonomial(word)
    }

    pub fn one() -> Self {
        LambdaMonomial(Vec::new())
    }

    pub fn indices(&self) -> &[u32] {
        &self.0
    }

    pub fn s(&self) -> usize {
        self.0.len()
    }

    pub fn t(&self) -> usize {
        self.0.iter().map(|&i| i as usize + 1).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn first(&self) -> Option<u32> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<u32> {
        self.0.last().copied()
    }

    /// `2 I(r) >= I(r+1)` for all `r`.
    pub fn is_admissible(&self) -> bool {
        self.0.windows(2).all(|w| 2 * w[0] >= w[1])
    }

    /// `sum_{r < s} (2 I(r) - I(r+1))`.
    pub fn excess(&self) -> i64 {
        self.0.windows(2).map(|w| 2 * w[0] as i64 - w[1] as i64).sum()
    }

    /// `lambda_i * self` as an unreduced word.
    pub fn prepend(&self, i: u32) -> LambdaMonomial {
        let mut w = Vec::with_capacity(self.0.len() + 1);
        w.push(i);
        w.extend_from_slice(&self.0);
        LambdaMonomial(w)
    }

    /// Drops the first letter.
    pub fn tail(&self) -> LambdaMonomial {
        LambdaMonomial(self.0.get(1..).unwrap_or(&[]).to_vec())
    }
}

impl fmt::Display for LambdaMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (r, i) in self.0.iter().enumerate() {
            if r > 0 {
                write!(f, " ")?;
            }
            write!(f, "λ{i}")?;
        }
        Ok(())
    }
}

/// A sum of admissible monomials of one bidegree, coefficients in `F_2`.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct LambdaElement {
    terms: BTreeSet<LambdaMonomial>,
}

impl LambdaElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn from_terms<I: IntoIterator<Item = LambdaMonomial>>(terms: I) -> Self {
        let mut e = Self::zero();
        for t in terms {
            e.toggle(t);
        }
        e
    }

    pub fn toggle(&mut self, m: LambdaMonomial) {
        if !self.terms.remove(&m) {
            self.terms.insert(m);
        }
    }

    pub fn add_assign(&mut self, other: &LambdaElement) {
        for t in &other.terms {
            self.toggle(t.clone());
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = &LambdaMonomial> {
        self.terms.iter()
    }

    pub fn contains(&self, m: &LambdaMonomial) -> bool {
        self.terms.contains(m)
    }

    /// Keeps the terms satisfying `keep`.
    pub fn filter(&self, mut keep: impl FnMut(&LambdaMonomial) -> bool) -> LambdaElement {
        LambdaElement {
            terms: self.terms.iter().filter(|t| keep(t)).cloned().collect(),
        }
    }
}

impl fmt::Display for LambdaElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (n, t) in self.terms.iter().rev().enumerate() {
            if n > 0 {
                write!(f, " + ")?;
            }
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

const REWRITE_BUDGET: usize = 50_000_000;

/// `lambda_i lambda_{2i+1+j} = sum_{t >= 0} C(j-t-1, t) lambda_{i+j-t} lambda_{2i+1+t}`
/// for an inadmissible pair `(i, 2i+1+j)`.
fn relation(i: u32, b: u32) -> Vec<[u32; 2]> {
    debug_assert!(b > 2 * i);
    let j = (b - 2 * i - 1) as i64;
    (0..=j)
        .filter(|&t| binom_mod2(j - t - 1, t))
        .map(|t| [(i as i64 + j - t) as u32, (2 * i as i64 + 1 + t) as u32])
        .collect()
}

fn normalize_memo(word: &[u32], steps: &mut usize) -> Rc<Vec<Vec<u32>>> {
    thread_local! {
        static NORMAL: RefCell<HashMap<Vec<u32>, Rc<Vec<Vec<u32>>>>> = RefCell::new(HashMap::new());
    }
    if let Some(hit) = NORMAL.with(|m| m.borrow().get(word).cloned()) {
        return hit;
    }
    let result = match (0..word.len().saturating_sub(1)).find(|&p| word[p + 1] > 2 * word[p]) {
        None => vec![word.to_vec()],
        Some(p) => {
            *steps += 1;
            assert!(*steps <= REWRITE_BUDGET, "lambda rewriting exceeded {REWRITE_BUDGET} steps on {word:?}");
            let mut acc: BTreeSet<Vec<u32>> = BTreeSet::new();
            for pair in relation(word[p], word[p + 1]) {
                let mut next = Vec::with_capacity(word.len());
                next.extend_from_slice(&word[..p]);
                next.extend_from_slice(&pair);
                next.extend_from_slice(&word[p + 2..]);
                for t in normalize_memo(&next, steps).iter() {
                    if !acc.remove(t) {
                        acc.insert(t.clone());
                    }
                }
            }
            acc.into_iter().collect()
        }
    };
    let result = Rc::new(result);
    NORMAL.with(|m| m.borrow_mut().insert(word.to_vec(), Rc::clone(&result)));
    result
}

/// Expansion of a word in the admissible basis, rewriting the leftmost
/// inadmissible pair first.
pub fn lambda_normalize(word: &[u32]) -> LambdaElement {
    let mut steps = 0;
    LambdaElement {
        terms: normalize_memo(word, &mut steps)
            .iter()
            .map(|w| LambdaMonomial(w.clone()))
            .collect(),
    }
}

/// `d(lambda_i) = sum_{j >= 1} C(i-j, j) lambda_{i-j} lambda_{j-1}`.
pub fn d_lambda_gen(i: u32) -> LambdaElement {
    let i = i as i64;
    LambdaElement::from_terms(
        (1..=i)
            .filter(|&j| binom_mod2(i - j, j))
            .map(|j| LambdaMonomial(vec![(i - j) as u32, (j - 1) as u32])),
    )
}

/// The differential on a word, extended from generators as a derivation
/// and reduced to the admissible basis.
pub fn d_lambda(m: &LambdaMonomial) -> LambdaElement {
    thread_local! {
        static DIFF: RefCell<HashMap<Vec<u32>, LambdaElement>> = RefCell::new(HashMap::new());
    }
    if let Some(hit) = DIFF.with(|c| c.borrow().get(&m.0).cloned()) {
        return hit;
    }
    let w = &m.0;
    let mut out = LambdaElement::zero();
    for r in 0..w.len() {
        for term in d_lambda_gen(w[r]).terms() {
            let mut next = Vec::with_capacity(w.len() + 1);
            next.extend_from_slice(&w[..r]);
            next.extend_from_slice(&term.0);
            next.extend_from_slice(&w[r + 1..]);
            out.add_assign(&lambda_normalize(&next));
        }
    }
    DIFF.with(|c| c.borrow_mut().insert(m.0.clone(), out.clone()));
    out
}

/// Applies `d` to every term of an element.
pub fn d_lambda_element(e: &LambdaElement) -> LambdaElement {
    let mut out = LambdaElement::zero();
    for t in e.terms() {
        out.add_assign(&d_lambda(t));
    }
    out
}

/// Admissible words of length `s` and internal degree `t` whose first
/// index lies in `first`.
pub fn admissible_monomials(first: std::ops::Range<u32>, s: usize, t: usize) -> Vec<LambdaMonomial> {
    fn go(word: &mut Vec<u32>, s: usize, remaining: usize, out: &mut Vec<LambdaMonomial>) {
        if word.len() == s {
            if remaining == 0 {
                out.push(LambdaMonomial(word.clone()));
            }
            return;
        }
        let left = s - word.len();
        // every remaining letter contributes at least 1
        if remaining < left {
            return;
        }
        let hi = (2 * *word.last().unwrap()).min((remaining - left) as u32);
        for i in 0..=hi {
            word.push(i);
            go(word, s, remaining - i as usize - 1, out);
            word.pop();
        }
    }
    let mut out = Vec::new();
    if s == 0 {
        if t == 0 {
            out.push(LambdaMonomial::one());
        }
        return out;
    }
    for i in first {
        if i as usize + s > t {
            break;
        }
        let mut word = vec![i];
        go(&mut word, s, t - i as usize - 1, &mut out);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mono(w: &[u32]) -> LambdaMonomial {
        LambdaMonomial::new(w.to_vec())
    }

    fn elem(ws: &[&[u32]]) -> LambdaElement {
        LambdaElement::from_terms(ws.iter().map(|w| mono(w)))
    }

    #[test]
    fn normalize_examples() {
        assert!(lambda_normalize(&[0, 1]).is_zero());
        assert_eq!(lambda_normalize(&[0, 2]), elem(&[&[1, 1]]));
        assert_eq!(lambda_normalize(&[0, 3]), elem(&[&[2, 1]]));
        assert_eq!(lambda_normalize(&[1, 1]), elem(&[&[1, 1]]));
        assert_eq!(lambda_normalize(&[0, 4]), elem(&[&[3, 1], &[2, 2]]));
    }

    #[test]
    fn differential_on_generators() {
        assert!(d_lambda_gen(0).is_zero());
        assert!(d_lambda_gen(1).is_zero());
        assert_eq!(d_lambda_gen(2), elem(&[&[1, 0]]));
        assert_eq!(d_lambda_gen(4), elem(&[&[3, 0], &[2, 1]]));
        assert!(d_lambda_gen(3).is_zero());
    }

    #[test]
    fn differential_golden() {
        // computed by hand: d(l2) l4 = l1 l0 l4 = l1 l3 l1 + l1 l2 l2 and l1 l3 = 0
        assert_eq!(d_lambda(&mono(&[2, 4])), elem(&[&[2, 3, 0], &[2, 2, 1], &[1, 2, 2]]));
        assert_eq!(d_lambda(&mono(&[2, 4])).to_string(), "λ2 λ3 λ0 + λ2 λ2 λ1 + λ1 λ2 λ2");
        assert!(d_lambda(&mono(&[0, 0])).is_zero());
        assert!(d_lambda(&mono(&[1])).is_zero());
    }

    #[test]
    fn normalize_preserves_bidegree_and_is_idempotent() {
        for a in 0..10u32 {
            for b in 0..20u32 {
                for c in 0..12u32 {
                    let w = [a, b, c];
                    for t in lambda_normalize(&w).terms() {
                        assert!(t.is_admissible());
                        assert_eq!((t.s(), t.t()), (3, mono(&w).t()));
                        assert_eq!(lambda_normalize(t.indices()), LambdaElement::from_terms([t.clone()]));
                    }
                }
            }
        }
    }

    #[test]
    fn d_squared_vanishes_through_t_40() {
        for t in 1..=40 {
            for s in 1..=4usize {
                if s > t {
                    break;
                }
                for m in admissible_monomials(0..t as u32, s, t) {
                    let dd = d_lambda_element(&d_lambda(&m));
                    assert!(dd.is_zero(), "d^2 {m} = {dd}");
                    for term in d_lambda(&m).terms() {
                        assert_eq!((term.s(), term.t()), (s + 1, t));
                    }
                }
            }
        }
    }

    #[test]
    fn left_multiplication_keeps_first_index() {
        // every term of lambda_i lambda_J starts with an index >= i
        for i in 0..6u32 {
            for t in 1..=14usize {
                for s in 1..=3usize {
                    for j in admissible_monomials(0..t as u32, s, t) {
                        for term in lambda_normalize(j.prepend(i).indices()).terms() {
                            assert!(term.first().unwrap() >= i, "{} {j}", i);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn admissible_enumeration() {
        assert_eq!(admissible_monomials(0..3, 0, 0), vec![LambdaMonomial::one()]);
        assert_eq!(admissible_monomials(0..3, 1, 2), vec![mono(&[1])]);
        let all = admissible_monomials(0..100, 2, 6);
        assert!(all.iter().all(|m| m.is_admissible() && m.t() == 6));
        assert_eq!(all.len(), 3); // l2 l2, l3 l1, l4 l0
    }
}
