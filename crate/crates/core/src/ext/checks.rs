use std::fmt;

use crate::error::Result;
use crate::lambda::{lambda_complex_u, lambda_k_complex};
use crate::unstable::{forget_to, loop_functor, sphere, FiniteUModule, Level};

use super::resolution::minimal_resolution;
use super::table::{cohomology, ExtTable};

/// Outcome of a verification: how many cases were examined and what failed.
#[derive(Clone, Debug, Default)]
pub struct CheckReport {
    pub name: String,
    pub cases: usize,
    pub failures: Vec<String>,
}

impl CheckReport {
    pub fn new(name: impl Into<String>) -> Self {
        CheckReport {
            name: name.into(),
            ..Default::default()
        }
    }

    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }

    pub fn case(&mut self, ok: bool, failure: impl FnOnce() -> String) {
        self.cases += 1;
        if !ok {
            self.failures.push(failure());
        }
    }

    pub fn merge(&mut self, other: CheckReport) {
        self.cases += other.cases;
        self.failures.extend(other.failures);
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let status = if self.passed() { "PASS" } else { "FAIL" };
        write!(f, "{status} {} ({} cases", self.name, self.cases)?;
        if !self.passed() {
            write!(f, ", {} failures; first: {}", self.failures.len(), self.failures[0])?;
        }
        write!(f, ")")
    }
}

/// `H^{*,a}(Lambda_k(M))` for `a <= max_a`.
pub fn ext_via_lambda(m: &FiniteUModule, max_a: usize) -> Result<ExtTable> {
    cohomology(&lambda_k_complex(m, max_a)?)
}

/// Compares `Ext_k^s(S_k(m), S_k(n))` for consecutive `k >= n - 1` with each
/// other and with `Ext_U^s(S(m), S(n))`, for `s <= max_s`. The level-`k`
/// groups come from minimal resolutions, the `U` groups from `Lambda(m)`.
pub fn stabilization_check(m: usize, n: usize, max_s: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("stabilization S({m}) -> S({n})"));
    let u_sphere = sphere(m, Level::Infinite, n.max(m));
    let u_table = cohomology(&lambda_complex_u(&u_sphere, n)?)?;
    let k_lo = n.saturating_sub(1);
    let k_hi = n + 3;
    let mut tables = Vec::new();
    for k in k_lo..=k_hi {
        let module = forget_to(&u_sphere, Level::Finite(k));
        tables.push((k, minimal_resolution(&module, n, max_s)?.ext_table()));
    }
    for s in 0..=max_s {
        let u = u_table.get(s, n);
        for (k, t) in &tables {
            let v = t.get(s, n);
            report.case(v == u, || format!("s={s}: Ext_{k} has dim {v} but Ext_U has dim {u}"));
        }
        for w in tables.windows(2) {
            let ((k, x), (_, y)) = (&w[0], &w[1]);
            let (a, b) = (x.get(s, n), y.get(s, n));
            report.case(a == b, || format!("s={s}: Ext_{k} = {a} but Ext_{} = {b}", k + 1));
        }
    }
    Ok(report)
}

/// Euler characteristic of the EHP long exact sequence
/// `Ext_{k-1}^s(Omega M, N) -> Ext_k^s(M, Sigma N) -> Ext_{k-1}^{s-1}(Omega_1 M, N) -> ...`
/// for `N = S_{k-1}(n)` and every `n` with `n + 1` inside the window of `M`.
pub fn ehp_euler_check(m: &FiniteUModule) -> Result<CheckReport> {
    let k = m
        .k()
        .finite()
        .filter(|&k| k >= 1)
        .ok_or_else(|| crate::Error::Precondition("the EHP sequence needs a finite level k >= 1".into()))?;
    let mut report = CheckReport::new(format!("EHP Euler characteristic for {}", m.name()));
    let w = m.max_deg();
    if w == 0 {
        return Ok(report);
    }
    let (omega, omega1) = loop_functor(m);
    let a_table = ext_via_lambda(&omega, w - 1)?;
    let c_table = ext_via_lambda(&omega1, w - 1)?;
    let b_table = ext_via_lambda(m, w)?;
    for n in 0..w {
        let mut euler: i64 = 0;
        for s in 0..=k + 1 {
            let a = a_table.get(s, n) as i64;
            let b = b_table.get(s, n + 1) as i64;
            let c = if s >= 1 { c_table.get(s - 1, n) as i64 } else { 0 };
            let sign = if s % 2 == 0 { 1 } else { -1 };
            euler += sign * (a - b + c);
        }
        report.case(euler == 0, || format!("N = S_{}({n}): alternating sum {euler}", k - 1));
    }
    Ok(report)
}

/// `Ext_k^s(M, -)` vanishes for `s > k`: the minimal resolution has no
/// generators beyond stage `k` in the window, and `Lambda_k(M)` has no
/// cochains beyond `s = k`.
pub fn hdim_check(m: &FiniteUModule, max_deg: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("homological dimension of {}", m.name()));
    let Some(k) = m.k().finite() else {
        return Err(crate::Error::Precondition("homological dimension is checked for finite k".into()));
    };
    let r = minimal_resolution(m, max_deg, k + 2)?;
    for s in k + 1..=k + 2 {
        let g = r.generators(s);
        report.case(g.is_empty(), || format!("P_{s} has generators in degrees {g:?}"));
    }
    let c = lambda_k_complex(m, max_deg)?;
    report.case(c.max_s() <= k, || format!("Lambda_k(M) has cochains in s = {}", c.max_s()));
    let failures = r.minimality_failures();
    report.case(failures.is_empty(), || failures.join("; "));
    let failures = r.exactness_failures(&crate::unstable::truncate(m, max_deg));
    report.case(failures.is_empty(), || failures.join("; "));
    Ok(report)
}

/// Entrywise agreement of the two `Ext` computations for `s <= max_s` and
/// `a <= max_a`.
pub fn oracle_check(m: &FiniteUModule, max_a: usize, max_s: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new(format!("lambda vs resolution for {}", m.name()));
    let lambda = ext_via_lambda(m, max_a)?;
    let resolution = minimal_resolution(m, max_a, max_s)?;
    let failures = resolution.minimality_failures();
    report.case(failures.is_empty(), || failures.join("; "));
    for (s, a, x, y) in lambda.differences(&resolution.ext_table()) {
        report.failures.push(format!("(s,a)=({s},{a}): lambda {x}, resolution {y}"));
    }
    report.cases += (max_s + 1) * (max_a + 1);
    Ok(report)
}
