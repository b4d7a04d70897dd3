use std::path::PathBuf;
use std::process::{Command, Output};

fn lambdak(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lambdak"))
        .args(args)
        .output()
        .expect("run lambdak")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn write_temp(name: &str, text: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("lambdak-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn adem() {
    let o = lambdak(&["adem", "Sq2", "Sq2"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "Sq3 Sq1\n");
    assert_eq!(stdout(&lambdak(&["adem", "Sq1", "Sq1"])), "0\n");
}

#[test]
fn lambda_basis() {
    let o = lambdak(&["lambda-basis", "--m", "3", "--k", "2"]);
    assert_eq!(stdout(&o), "1\nλ1\nλ2\nλ2 λ4\n");
    let o = lambdak(&["lambda-basis", "--m", "1", "--k", "inf", "--smax", "3", "--tmax", "3"]);
    assert_eq!(stdout(&o), "1\nλ0\nλ0 λ0\nλ0 λ0 λ0\n");
}

#[test]
fn ext_sphere_table() {
    let o = lambdak(&["ext", "sphere", "--m", "2", "--k", "2"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.lines().any(|l| l.starts_with("# window ")));
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["s\ta\tdim", "0\t2\t1", "1\t3\t1", "1\t4\t1", "2\t7\t1"]);
    let o = lambdak(&["ext", "sphere", "--m", "2", "--k", "2", "--via", "resolution"]);
    let rows2: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(rows2, rows);
}

#[test]
fn free_module_file_both_ways() {
    let o = lambdak(&["free-basis", "--n", "2", "--k", "2", "--maxdeg", "8"]);
    let path = write_temp("f22.mod", &stdout(&o));
    let o = lambdak(&["ext", "module", path.to_str().unwrap(), "--via", "both"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rows: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(rows, ["s\ta\tdim", "0\t2\t1"]);
}

#[test]
fn resolve_module_file() {
    let path = write_temp("s1.mod", "umodule s1\nk 3\nmaxdeg 8\ngen x 1\n");
    let o = lambdak(&["resolve", path.to_str().unwrap(), "--max-s", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let rows: Vec<String> = stdout(&o).lines().filter(|l| !l.starts_with('#')).map(String::from).collect();
    assert_eq!(rows, ["s\tgenerator degrees", "0\t1", "1\t2", "2\t3", "3\t4", "4\t"]);
}

#[test]
fn exit_codes() {
    assert_eq!(lambdak(&[]).status.code(), Some(2));
    assert_eq!(lambdak(&["lambda-basis", "--m", "3"]).status.code(), Some(2));
    let bad_degree = write_temp("deg.mod", "umodule t\nk 2\nmaxdeg 10\ngen x 2\ngen y 3\nsq 0 x = y\n");
    assert_eq!(lambdak(&["ext", "module", bad_degree.to_str().unwrap()]).status.code(), Some(2));
    let invalid = write_temp("bad.mod", "umodule bad\nk 2\nmaxdeg 3\ngen x 1\ngen y 2\ngen z 3\nsq 0 x = y\nsq 1 y = z\n");
    let o = lambdak(&["ext", "module", invalid.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("Sq_1 Sq_0"));
}

#[test]
fn verify_quick_checks() {
    let o = lambdak(&["verify", "lower-adem", "goldens"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 2);
    assert!(text.lines().all(|l| l.starts_with("PASS ")));
}

#[test]
fn output_is_deterministic() {
    let args = ["ext", "sphere", "--m", "4", "--k", "3", "--via", "both"];
    let a = lambdak(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_lambdak"))
        .args(args)
        .env("LAMBDAK_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}
