//! The `lambdak` command line: argument handling, command dispatch and
//! output formatting. [`run`] does all the work and returns what the process
//! should print, so the binary is a thin wrapper.

mod modfile;
pub mod verify;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

pub use modfile::{parse_module_file, write_module_file};

use crate::error::Error;
use crate::ext::{ext_via_lambda, minimal_resolution, CheckReport, ExtTable};
use crate::lambda::LambdaKSpace;
use crate::steenrod::{adem_normalize, UpperMonomial};
use crate::unstable::{free_module, sphere, truncate, FiniteUModule, FreeDescriptor, Level};

/// Exit status and output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CommandResult {
    /// 0 on success, 1 when a check fails, 2 on usage or parse errors.
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

impl CommandResult {
    fn ok(stdout: String) -> Self {
        CommandResult {
            code: 0,
            stdout,
            stderr: String::new(),
        }
    }

    fn fail(code: i32, stderr: String) -> Self {
        CommandResult {
            code,
            stdout: String::new(),
            stderr,
        }
    }
}

impl From<Error> for CommandResult {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Validation(_) => 1,
            _ => 2,
        };
        CommandResult::fail(code, format!("error: {e}\n"))
    }
}

#[derive(Parser, Debug)]
#[command(name = "lambdak", version, about = "Lambda_k complexes and Ext over the top k Steenrod squares")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Reduce a word in upper squares to admissible form, e.g. `adem Sq2 Sq2`
    Adem {
        #[arg(required = true, num_args = 1..)]
        word: Vec<String>,
    },
    /// List the basis of Lambda_k(m), one monomial per line
    LambdaBasis {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: Level,
        /// Largest length s (default k)
        #[arg(long)]
        smax: Option<usize>,
        /// Largest stem t (default: the top of Lambda_k(m))
        #[arg(long)]
        tmax: Option<usize>,
    },
    /// Write the free module F_k(n) through degree maxdeg as a module file
    FreeBasis {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        k: Level,
        #[arg(long)]
        maxdeg: usize,
    },
    /// Compute an Ext table
    Ext {
        #[command(subcommand)]
        target: ExtTarget,
    },
    /// Print a minimal free resolution of a module file
    Resolve {
        file: PathBuf,
        #[arg(long)]
        max_s: Option<usize>,
        #[arg(long)]
        maxdeg: Option<usize>,
    },
    /// Run verification checks
    Verify {
        #[arg(value_enum, required = true, num_args = 1..)]
        checks: Vec<VerifyTarget>,
    },
}

#[derive(Subcommand, Debug)]
enum ExtTarget {
    /// Ext_k(S_k(m), S_k(a))
    Sphere {
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: Level,
        /// Largest internal degree a
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, value_enum, default_value_t = Via::Lambda)]
        via: Via,
        /// Largest s for resolutions (default k)
        #[arg(long)]
        max_s: Option<usize>,
    },
    /// Ext_k(M, S_k(a)) for a module file
    Module {
        file: PathBuf,
        #[arg(long)]
        window: Option<usize>,
        #[arg(long, value_enum, default_value_t = Via::Lambda)]
        via: Via,
        #[arg(long)]
        max_s: Option<usize>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Via {
    Lambda,
    Resolution,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum VerifyTarget {
    Goldens,
    D2,
    Acyclic,
    Oracle,
    Hdim,
    Ehp,
    Stabilization,
    LambdaOne,
    LowerAdem,
    RoundTrip,
    All,
}

/// Runs one invocation; `argv[0]` is the program name.
pub fn run<I, T>(argv: I) -> CommandResult
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                CommandResult::fail(2, text)
            } else {
                CommandResult::ok(text)
            };
        }
    };
    let result = match cli.command {
        Command::Adem { word } => adem(&word),
        Command::LambdaBasis { m, k, smax, tmax } => lambda_basis(m, k, smax, tmax),
        Command::FreeBasis { n, k, maxdeg } => Ok(CommandResult::ok(write_module_file(&free_module(FreeDescriptor {
            n,
            k,
            max_deg: maxdeg,
        })))),
        Command::Ext { target } => match target {
            ExtTarget::Sphere {
                m,
                k,
                window,
                via,
                max_s,
            } => ext_sphere(m, k, window, via, max_s),
            ExtTarget::Module {
                file,
                window,
                via,
                max_s,
            } => read_module(&file).and_then(|module| ext(&module, window, via, max_s)),
        },
        Command::Resolve { file, max_s, maxdeg } => read_module(&file).and_then(|m| resolve(&m, max_s, maxdeg)),
        Command::Verify { checks } => verify_cmd(&checks),
    };
    result.unwrap_or_else(CommandResult::from)
}

fn usage(message: impl Into<String>) -> Error {
    Error::Precondition(message.into())
}

fn read_module(path: &Path) -> crate::Result<FiniteUModule> {
    let text = std::fs::read_to_string(path).map_err(|e| usage(format!("cannot read {}: {e}", path.display())))?;
    parse_module_file(&text)
}

/// Parses `Sq2 Sq2`, `Sq^2Sq^2` or `2 2` into upper indices.
fn parse_sq_word(args: &[String]) -> crate::Result<Vec<u32>> {
    let joined = args.join(" ").replace('^', "");
    let mut out = Vec::new();
    for tok in joined.split_whitespace() {
        let parts: Vec<&str> = if tok.starts_with("Sq") {
            tok.split("Sq").skip(1).collect()
        } else {
            vec![tok]
        };
        for p in parts {
            out.push(p.parse().map_err(|_| usage(format!("cannot read '{tok}' as a square")))?);
        }
    }
    Ok(out)
}

fn adem(word: &[String]) -> crate::Result<CommandResult> {
    let w = UpperMonomial::new(parse_sq_word(word)?);
    Ok(CommandResult::ok(format!("{}\n", adem_normalize(&w))))
}

fn lambda_basis(m: usize, k: Level, smax: Option<usize>, tmax: Option<usize>) -> crate::Result<CommandResult> {
    let space = LambdaKSpace::new(m, k);
    let tmax = tmax
        .or(space.t_bound())
        .ok_or_else(|| usage("--tmax is required for k = inf"))?;
    let smax = smax
        .or(k.finite())
        .ok_or_else(|| usage("--smax is required for k = inf"))?;
    let mut out = String::new();
    for i in space.all(smax, tmax) {
        out.push_str(&format!("{i}\n"));
    }
    Ok(CommandResult::ok(out))
}

fn title(module: &FiniteUModule) -> String {
    let over = match module.k() {
        Level::Finite(k) => format!("Q_{k}"),
        Level::Infinite => "A (unstable)".into(),
    };
    format!("Ext^{{s,a}} over {over} of {} against spheres S(a)", module.name())
}

fn ext_sphere(m: usize, k: Level, window: Option<usize>, via: Via, max_s: Option<usize>) -> crate::Result<CommandResult> {
    let window = match window {
        Some(w) => w,
        None => m + LambdaKSpace::new(m, k)
            .t_bound()
            .ok_or_else(|| usage("--window is required for k = inf"))?,
    };
    ext(&sphere(m, k, window), Some(window), via, max_s)
}

fn ext(module: &FiniteUModule, window: Option<usize>, via: Via, max_s: Option<usize>) -> crate::Result<CommandResult> {
    let window = window.unwrap_or(module.max_deg());
    let max_s = max_s.or(module.k().finite()).unwrap_or(window);
    let title = title(module);
    let lambda = || ext_via_lambda(module, window);
    let resolution = || Ok::<ExtTable, Error>(minimal_resolution(module, window, max_s)?.ext_table());
    match via {
        Via::Lambda => Ok(CommandResult::ok(lambda()?.to_tsv(&title))),
        Via::Resolution => Ok(CommandResult::ok(resolution()?.to_tsv(&title))),
        Via::Both => {
            let (x, y) = (lambda()?, resolution()?);
            let diffs = x.differences(&y);
            if diffs.is_empty() {
                let mut out = y.to_tsv(&title);
                out.insert_str(out.find("s\ta\tdim").unwrap(), "# lambda and resolution agree\n");
                return Ok(CommandResult::ok(out));
            }
            let mut err = format!("lambda and resolution differ in {} entries\ns\ta\tlambda\tresolution\n", diffs.len());
            for (s, a, p, q) in diffs {
                err.push_str(&format!("{s}\t{a}\t{p}\t{q}\n"));
            }
            Ok(CommandResult {
                code: 1,
                stdout: String::new(),
                stderr: err,
            })
        }
    }
}

fn resolve(module: &FiniteUModule, max_s: Option<usize>, maxdeg: Option<usize>) -> crate::Result<CommandResult> {
    let maxdeg = maxdeg.unwrap_or(module.max_deg());
    let max_s = max_s.or(module.k().finite().map(|k| k + 1)).unwrap_or(maxdeg);
    let r = minimal_resolution(module, maxdeg, max_s)?;
    let mut out = format!("# minimal resolution of {} over Q_{}\n", module.name(), module.k());
    out.push_str(&format!("# window a<={maxdeg} s<={max_s}\n"));
    let mut bad = r.minimality_failures();
    bad.extend(r.exactness_failures(&truncate(module, maxdeg)));
    out.push_str("s\tgenerator degrees\n");
    for s in 0..=r.max_s() {
        let degs: Vec<String> = r.generators(s).iter().map(usize::to_string).collect();
        out.push_str(&format!("{s}\t{}\n", degs.join(" ")));
    }
    if bad.is_empty() {
        Ok(CommandResult::ok(out))
    } else {
        Ok(CommandResult {
            code: 1,
            stdout: out,
            stderr: bad.join("\n") + "\n",
        })
    }
}

fn run_check(target: VerifyTarget) -> crate::Result<Vec<CheckReport>> {
    use verify::*;
    Ok(match target {
        VerifyTarget::Goldens => vec![goldens()],
        VerifyTarget::D2 => vec![d2()?],
        VerifyTarget::Acyclic => vec![acyclic()?],
        VerifyTarget::Oracle => vec![oracle()?, oracle_corpus(24)?],
        VerifyTarget::Hdim => vec![hdim()?],
        VerifyTarget::Ehp => vec![ehp()],
        VerifyTarget::Stabilization => vec![stabilization()?],
        VerifyTarget::LambdaOne => vec![lambda_one()?],
        VerifyTarget::LowerAdem => vec![lower_adem()?],
        VerifyTarget::RoundTrip => vec![round_trip()?],
        VerifyTarget::All => {
            let mut all = Vec::new();
            for t in VerifyTarget::value_variants() {
                if *t != VerifyTarget::All {
                    all.extend(run_check(*t)?);
                }
            }
            all
        }
    })
}

fn verify_cmd(targets: &[VerifyTarget]) -> crate::Result<CommandResult> {
    let mut out = String::new();
    let mut code = 0;
    for &t in targets {
        for report in run_check(t)? {
            if !report.passed() {
                code = 1;
            }
            out.push_str(&format!("{report}\n"));
        }
    }
    Ok(CommandResult {
        code,
        stdout: out,
        stderr: String::new(),
    })
}
