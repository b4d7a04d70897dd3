//! The verification suite: each function checks one property over its full
//! corpus and returns a [`CheckReport`].

use crate::error::Result;
use crate::ext::{cohomology, ext_via_lambda, hdim_check, oracle_check, stabilization_check, CheckReport};
use crate::lambda::{ehp_check, lambda_complex_u, lambda_k_complex, LambdaKSpace, LambdaMonomial};
use crate::steenrod::verify_lower_adem;
use crate::unstable::{free_module, random_module, sphere, suspend, tensor, FiniteUModule, FreeDescriptor, Level};

use super::modfile::{parse_module_file, write_module_file};

fn free(n: usize, k: usize, max_deg: usize) -> FiniteUModule {
    free_module(FreeDescriptor {
        n,
        k: Level::Finite(k),
        max_deg,
    })
}

/// Hand-listed bases of `Lambda_k(m)` for `k <= 3`.
pub fn expected_lambda_basis(m: usize, k: usize) -> Vec<Vec<u32>> {
    let m32 = m as u32;
    let mut out = vec![vec![]];
    if m == 0 {
        return out;
    }
    match k {
        0 => {}
        1 => out.push(vec![m32 - 1]),
        2 if m == 1 => out.extend([vec![0], vec![0, 0]]),
        2 => out.extend([vec![m32 - 2], vec![m32 - 1], vec![m32 - 1, 2 * m32 - 2]]),
        3 if m == 1 => out.extend([vec![0], vec![0, 0], vec![0, 0, 0]]),
        3 if m == 2 => out.extend([vec![0], vec![1], vec![0, 0], vec![1, 1], vec![1, 2], vec![1, 2, 4]]),
        3 => out.extend([
            vec![m32 - 3],
            vec![m32 - 2],
            vec![m32 - 1],
            vec![m32 - 2, 2 * m32 - 4],
            vec![m32 - 1, 2 * m32 - 3],
            vec![m32 - 1, 2 * m32 - 2],
            vec![m32 - 1, 2 * m32 - 2, 4 * m32 - 4],
        ]),
        _ => panic!("no listed basis for k = {k}"),
    }
    out
}

/// Bases of `Lambda_k(m)`, `k <= 3`, `m <= 10`, against the listed ones, with
/// every differential zero.
pub fn goldens() -> CheckReport {
    let mut report = CheckReport::new("lambda_k(m) bases, k <= 3, m <= 10");
    for k in 0..=3 {
        for m in 0..=10 {
            let space = LambdaKSpace::new(m, Level::Finite(k));
            let tmax = space.t_bound().unwrap();
            let mut got: Vec<Vec<u32>> = Vec::new();
            for s in 0..=k + 1 {
                for t in 0..=tmax + 1 {
                    got.extend(space.basis_unpruned(s, t).iter().map(|i| i.indices().to_vec()));
                }
            }
            let mut want = expected_lambda_basis(m, k);
            got.sort();
            want.sort();
            report.case(got == want, || format!("Lambda_{k}({m}): got {got:?}, want {want:?}"));
            for s in 0..=k {
                for t in 0..=tmax {
                    let d = space.differential(s, t);
                    report.case(d.is_zero(), || format!("Lambda_{k}({m}): d nonzero at (s,t)=({s},{t})"));
                }
            }
        }
    }
    report
}

/// Modules whose `Lambda_k(M)` is checked for `d^2 = 0`.
pub fn d2_corpus() -> Vec<FiniteUModule> {
    let mut out = Vec::new();
    for k in 0..=4 {
        for n in 0..=10 {
            let w = n + LambdaKSpace::new(n, Level::Finite(k)).t_bound().unwrap();
            out.push(sphere(n, Level::Finite(k), w));
        }
    }
    for k in 0..=3 {
        for n in 0..=6 {
            out.push(free(n, k, 40));
        }
    }
    for k in 0..=3 {
        for n in [1, 3, 6] {
            out.push(suspend(&sphere(n, Level::Finite(k), 30)));
            out.push(suspend(&free(n, k, 40)));
        }
    }
    for k in 1..=3 {
        out.push(tensor(&free(1, k, 40), &free(2, k, 40)));
        out.push(tensor(&sphere(3, Level::Finite(k), 40), &free(2, k, 40)));
        out.push(tensor(&free(2, k, 30), &free(2, k, 30)));
    }
    for seed in 0..50 {
        out.push(random_module(seed, 1 + seed as usize % 3, 20));
    }
    out
}

/// `d^2 = 0` in every bigrading of `Lambda_k(M)` over [`d2_corpus`].
pub fn d2() -> Result<CheckReport> {
    let mut report = CheckReport::new("d^2 = 0 in Lambda_k(M)");
    for m in d2_corpus() {
        let c = lambda_k_complex(&m, m.max_deg())?;
        for (s, a) in c.d2_failures() {
            report.failures.push(format!("{}: d^2 != 0 at (s,a)=({s},{a})", m.name()));
        }
        report.cases += c.dims().count();
    }
    Ok(report)
}

/// `H(Lambda_k F_k(n))` is one copy of the field at `(0, n)`, for `n <= 8`,
/// `k <= 4`, `a <= 30`.
pub fn acyclic() -> Result<CheckReport> {
    let mut report = CheckReport::new("free modules are acyclic");
    for k in 0..=4 {
        for n in 0..=8 {
            let t = ext_via_lambda(&free(n, k, 30), 30)?;
            let entries: Vec<_> = t.entries().collect();
            report.case(entries == [((0, n), 1)], || format!("F_{k}({n}): {entries:?}"));
        }
    }
    Ok(report)
}

/// Both Ext computations agree on spheres `n <= 6`, `k <= 3`, `a <= 24`,
/// `s <= k`.
pub fn oracle() -> Result<CheckReport> {
    let mut report = CheckReport::new("lambda and resolution agree on spheres");
    for k in 0..=3 {
        for n in 0..=6 {
            report.merge(oracle_check(&sphere(n, Level::Finite(k), 24), 24, k)?);
        }
    }
    Ok(report)
}

/// Spheres, free modules, suspensions, tensors and random modules at levels
/// `1..=3`, each known through degree `max_deg`.
pub fn corpus(max_deg: usize) -> Vec<FiniteUModule> {
    let mut out = Vec::new();
    for k in 1..=3 {
        for n in 0..=6 {
            out.push(sphere(n, Level::Finite(k), max_deg));
            out.push(free(n, k, max_deg));
        }
        if k < 3 {
            for n in [1, 2, 4] {
                out.push(suspend(&sphere(n, Level::Finite(k), max_deg + 1)));
                out.push(suspend(&free(n, k, max_deg + 1)));
            }
        }
        out.push(tensor(&free(1, k, max_deg), &free(2, k, max_deg)));
        out.push(tensor(&sphere(2, Level::Finite(k), max_deg), &free(1, k, max_deg)));
        for seed in 0..5 {
            out.push(random_module(100 * k as u64 + seed, k, max_deg));
        }
    }
    out
}

/// No generators beyond stage `k` in minimal resolutions of [`corpus`],
/// through degree 24.
pub fn hdim() -> Result<CheckReport> {
    let mut report = CheckReport::new("homological dimension <= k");
    for m in corpus(24) {
        report.merge(hdim_check(&m, 24)?);
    }
    Ok(report)
}

/// Both Ext computations agree on [`corpus`] through degree `max_deg`.
pub fn oracle_corpus(max_deg: usize) -> Result<CheckReport> {
    let mut report = CheckReport::new("lambda and resolution agree on the corpus");
    for m in corpus(max_deg) {
        let k = m.k().finite().unwrap();
        report.merge(oracle_check(&m, max_deg, k + 1)?);
    }
    Ok(report)
}

/// EHP maps commute with `d`, the sequences are exact, and the dimensions
/// add up, for `m <= 8`, `k <= 4`, `t <= 30`.
pub fn ehp() -> CheckReport {
    let mut report = CheckReport::new("EHP short exact sequences");
    for k in 0..=4 {
        for m in 0..=8 {
            let failures = ehp_check(m, Level::Finite(k), 30);
            report.cases += 1;
            report.failures.extend(failures);
            let (small, big, double) = (
                LambdaKSpace::new(m, Level::Finite(k)),
                LambdaKSpace::new(m + 1, Level::Finite(k + 1)),
                LambdaKSpace::new(2 * m + 1, Level::Finite(k)),
            );
            for s in 0..=k + 2 {
                for t in 0..=30 {
                    let lhs = big.basis(s, t).len();
                    let mut rhs = small.basis(s, t).len();
                    if s >= 1 && t > m {
                        rhs += double.basis(s - 1, t - m - 1).len();
                    }
                    report.case(lhs == rhs, || {
                        format!("m={m}, k={k}, (s,t)=({s},{t}): {lhs} != {rhs}")
                    });
                }
            }
        }
    }
    report
}

/// Stabilization of `Ext_k(S(m), S(n))` to `Ext_U` for `m <= 5`, `n <= 4`,
/// `s <= 3`.
pub fn stabilization() -> Result<CheckReport> {
    let mut report = CheckReport::new("stabilization to U");
    for m in 0..=5 {
        for n in 0..=4 {
            report.merge(stabilization_check(m, n, 3)?);
        }
    }
    Ok(report)
}

/// `H^{s,t}(Lambda(1))` is the field exactly when `t = s`, for `s <= 10`.
pub fn lambda_one() -> Result<CheckReport> {
    let mut report = CheckReport::new("H(Lambda(1)) is polynomial on lambda_0");
    let max_a = 11;
    let c = lambda_complex_u(&sphere(1, Level::Infinite, max_a), max_a)?;
    let h = cohomology(&c)?;
    for s in 0..=10 {
        for a in 1..=max_a {
            let want = usize::from(a == 1 + s);
            let got = h.get(s, a);
            report.case(got == want, || format!("(s,t)=({s},{}): dim {got}, want {want}", a - 1));
        }
    }
    let tower = LambdaMonomial::new(vec![0; 10]);
    report.case(LambdaKSpace::new(1, Level::Infinite).basis(10, 10).contains(&tower), || {
        "lambda_0^10 missing from Lambda(1)".into()
    });
    Ok(report)
}

/// The lower-index Adem relation for `0 <= j < n <= 8`, `i + j < 2n`.
pub fn lower_adem() -> Result<CheckReport> {
    let mut report = CheckReport::new("lower-index Adem relations");
    for n in 1..=8i64 {
        for j in 0..n {
            for i in 0..2 * n - j {
                let ok = verify_lower_adem(i, j, n)?;
                report.case(ok, || format!("Sq_{i} Sq_{j} on degree {n}"));
            }
        }
    }
    Ok(report)
}

/// Free modules written out and parsed back give the same module, the same
/// file and the same Ext table.
pub fn round_trip() -> Result<CheckReport> {
    let mut report = CheckReport::new("module file round trip");
    for k in 1..=3 {
        for n in 0..=4 {
            let f = free(n, k, 16);
            let text = write_module_file(&f);
            let back = parse_module_file(&text)?;
            report.case(back.same_structure(&f), || format!("F_{k}({n}) changed structure"));
            report.case(write_module_file(&back) == text, || format!("F_{k}({n}) file not stable"));
            let (x, y) = (ext_via_lambda(&f, 16)?, ext_via_lambda(&back, 16)?);
            report.case(x == y, || format!("F_{k}({n}) Ext tables differ"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn listed_bases_have_expected_sizes() {
        assert_eq!(expected_lambda_basis(3, 2).len(), 4);
        assert_eq!(expected_lambda_basis(5, 3).len(), 8);
        assert_eq!(expected_lambda_basis(2, 3).len(), 7);
        assert_eq!(expected_lambda_basis(0, 3).len(), 1);
    }

    #[test]
    fn goldens_pass() {
        let r = goldens();
        assert!(r.passed(), "{r}");
    }
}
