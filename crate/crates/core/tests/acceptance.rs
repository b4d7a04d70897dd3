//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any
//! criterion fails.

use std::process::Command;
use std::time::{Duration, Instant};

use lambdak::cli::{parse_module_file, verify};
use lambdak::ext::{ext_via_lambda, CheckReport};
use lambdak::lambda::LambdaMonomial;
use lambdak::unstable::{free_module, FreeDescriptor, Level};

struct Outcome {
    ok: bool,
    detail: String,
}

fn from_report(r: lambdak::Result<CheckReport>) -> Outcome {
    match r {
        Ok(r) => Outcome {
            ok: r.passed(),
            detail: r.to_string(),
        },
        Err(e) => Outcome {
            ok: false,
            detail: format!("error: {e}"),
        },
    }
}

fn lambdak(args: &[&str]) -> (i32, String) {
    lambdak_env(args, None)
}

fn lambdak_env(args: &[&str], threads: Option<&str>) -> (i32, String) {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_lambdak"));
    cmd.args(args);
    if let Some(t) = threads {
        cmd.env("LAMBDAK_THREADS", t);
    }
    let out = cmd.output().expect("run lambdak");
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).expect("utf-8 output"))
}

fn goldens() -> Outcome {
    let mut bad = Vec::new();
    for k in 0..=3 {
        for m in 0..=10 {
            let (code, out) = lambdak(&["lambda-basis", "--m", &m.to_string(), "--k", &k.to_string()]);
            let mut got: Vec<&str> = out.lines().collect();
            let mut want: Vec<String> = verify::expected_lambda_basis(m, k)
                .into_iter()
                .map(|i| LambdaMonomial::new(i).to_string())
                .collect();
            got.sort();
            want.sort();
            if code != 0 || got != want {
                bad.push(format!("k={k} m={m}: {got:?} vs {want:?}"));
            }
        }
    }
    let mut o = from_report(Ok(verify::goldens()));
    if !bad.is_empty() {
        o.ok = false;
        o.detail = format!("lambda-basis output differs: {}", bad.join("; "));
    }
    o
}

fn round_trip_and_determinism() -> Outcome {
    let mut bad = Vec::new();
    let invocations: Vec<Vec<&str>> = vec![
        vec!["adem", "Sq2", "Sq2"],
        vec!["lambda-basis", "--m", "5", "--k", "3"],
        vec!["free-basis", "--n", "3", "--k", "2", "--maxdeg", "14"],
        vec!["ext", "sphere", "--m", "3", "--k", "3"],
        vec!["ext", "sphere", "--m", "2", "--k", "2", "--via", "both", "--window", "20"],
        vec!["verify", "stabilization"],
    ];
    for args in &invocations {
        let first = lambdak(args);
        for threads in [None, Some("1"), Some("3")] {
            if lambdak_env(args, threads) != first {
                bad.push(format!("{args:?} differs with LAMBDAK_THREADS={threads:?}"));
            }
        }
    }
    let dir = std::env::temp_dir().join(format!("lambdak-acceptance-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    for k in 1..=3 {
        for n in 0..=4 {
            let (ks, ns) = (k.to_string(), n.to_string());
            let (code, text) = lambdak(&["free-basis", "--n", &ns, "--k", &ks, "--maxdeg", "16"]);
            let path = dir.join(format!("f{k}{n}.mod"));
            std::fs::write(&path, &text).unwrap();
            let direct = free_module(FreeDescriptor {
                n,
                k: Level::Finite(k),
                max_deg: 16,
            });
            match parse_module_file(&text) {
                Ok(m) if code == 0 && m.same_structure(&direct) => {
                    let via_file = ext_via_lambda(&m, 16).unwrap();
                    if via_file != ext_via_lambda(&direct, 16).unwrap() {
                        bad.push(format!("F_{k}({n}): Ext changed after the round trip"));
                    }
                }
                _ => bad.push(format!("F_{k}({n}): free-basis output does not parse back")),
            }
            let p = path.to_str().unwrap();
            let (code, table) = lambdak(&["ext", "module", p, "--via", "both"]);
            let want = format!("0\t{n}\t1");
            let rows: Vec<&str> = table.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
            if code != 0 || rows != [want.as_str()] {
                bad.push(format!("F_{k}({n}): ext module --via both gave {rows:?} (exit {code})"));
            }
        }
    }
    std::fs::remove_dir_all(&dir).ok();
    let lib = from_report(verify::round_trip());
    Outcome {
        ok: bad.is_empty() && lib.ok,
        detail: if bad.is_empty() { lib.detail } else { bad.join("; ") },
    }
}

fn main() {
    type Criterion = (usize, &'static str, Option<Duration>, fn() -> Outcome);
    let criteria: Vec<Criterion> = vec![
        (1, "listed Lambda_k(m) bases and zero differentials", Some(Duration::from_secs(1)), goldens),
        (2, "d^2 = 0 on the corpus", Some(Duration::from_secs(60)), || from_report(verify::d2())),
        (3, "free modules are acyclic", Some(Duration::from_secs(120)), || from_report(verify::acyclic())),
        (4, "lambda and resolution agree", Some(Duration::from_secs(600)), || from_report(verify::oracle())),
        (5, "homological dimension <= k", None, || from_report(verify::hdim())),
        (6, "EHP short exact sequences", None, || from_report(Ok(verify::ehp()))),
        (7, "stabilization to U", None, || from_report(verify::stabilization())),
        (8, "H(Lambda(1))", None, || from_report(verify::lambda_one())),
        (9, "lower-index Adem relations", None, || from_report(verify::lower_adem())),
        (10, "determinism and round trip", None, round_trip_and_determinism),
    ];
    let mut failed = 0;
    for (n, name, limit, check) in criteria {
        let start = Instant::now();
        let mut o = check();
        let elapsed = start.elapsed();
        if let Some(limit) = limit {
            if elapsed > limit {
                o.ok = false;
                o.detail = format!("took {elapsed:?}, limit {limit:?}; {}", o.detail);
            }
        }
        let status = if o.ok { "PASS" } else { "FAIL" };
        println!("{status} criterion {n:>2}: {name} [{:.2}s] {}", elapsed.as_secs_f64(), o.detail);
        if !o.ok {
            failed += 1;
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
