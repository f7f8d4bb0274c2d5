use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fullwit_core::finite_field::is_prime;
use fullwit_core::matrix_group::{enumerate_group, group_order};
use fullwit_core::oracle::{self, IdempotentTag};
use fullwit_core::witness::{self, BuildOptions};
use fullwit_core::{Exec, FieldSpec, GroupKind, MatrixSpace, RingDescriptor, DEFAULT_CAP};

#[derive(Parser)]
#[command(name = "fullwit", version, about = "Build and check fullness certificates for e_n in R SL_n(F_q)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build a certificate and write it to a file.
    Build {
        #[arg(short)]
        n: usize,
        /// Field size: p, p^k or Q=p^k.
        #[arg(short)]
        q: String,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long)]
        no_compress: bool,
        /// Keep only the rational component of every coefficient.
        #[arg(long)]
        rationalize: bool,
    },
    /// Verify a certificate over a coefficient ring.
    Verify {
        path: PathBuf,
        /// cyclotomic, rational or fp:l[:d]
        #[arg(long)]
        ring: String,
        #[arg(long, value_enum, default_value_t = GroupArg::Sl)]
        group: GroupArg,
    },
    /// Decide fullness by linear algebra over a finite field.
    Oracle {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        q: String,
        /// fp:l[:d]
        #[arg(long)]
        ring: String,
        #[arg(long, default_value = "e")]
        idempotent: String,
        #[arg(long, value_enum, default_value_t = GroupArg::Sl)]
        group: GroupArg,
    },
    /// Print group and subgroup orders.
    Info {
        #[arg(short)]
        n: usize,
        #[arg(short)]
        q: String,
        #[arg(long, value_enum, default_value_t = GroupArg::Sl)]
        group: GroupArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum GroupArg {
    P,
    Sl,
    Gl,
}

impl GroupArg {
    fn kind(self) -> GroupKind {
        match self {
            GroupArg::P => GroupKind::Affine,
            GroupArg::Sl => GroupKind::Special,
            GroupArg::Gl => GroupKind::General,
        }
    }
}

/// Parses "p", "p^k" or "Q=p^k".
fn parse_q(s: &str) -> Result<(u32, u32)> {
    let (total, power) = match s.split_once('=') {
        Some((t, rest)) => (Some(t), rest),
        None => (None, s),
    };
    let (p, k) = match power.split_once('^') {
        Some((p, k)) => (p.trim().parse::<u32>()?, k.trim().parse::<u32>()?),
        None => (power.trim().parse::<u32>()?, 1),
    };
    if !is_prime(p as u64) {
        bail!("q = {s:?}: {p} is not prime; write prime powers as p^k");
    }
    if k == 0 {
        bail!("q = {s:?}: exponent must be positive");
    }
    let q = (p as u64).checked_pow(k).filter(|&q| q <= u32::MAX as u64);
    let q = q.ok_or_else(|| anyhow!("q = {s:?} is too large"))?;
    if let Some(t) = total {
        if t.trim().parse::<u64>()? != q {
            bail!("q = {s:?}: {t} != {p}^{k}");
        }
    }
    Ok((p, k))
}

fn field(q: &str) -> Result<FieldSpec> {
    let (p, k) = parse_q(q)?;
    Ok(FieldSpec::find(p, k)?)
}

fn cap() -> Result<usize> {
    match std::env::var("FULLWIT_CAP") {
        Ok(v) => v.trim().parse().with_context(|| format!("FULLWIT_CAP = {v:?}")),
        Err(_) => Ok(DEFAULT_CAP),
    }
}

fn emit<T: Serialize>(report: &T) {
    println!("{}", serde_json::to_string(report).expect("report serializes"));
}

#[derive(Serialize)]
struct LevelReport {
    level: usize,
    terms: u64,
}

#[derive(Serialize)]
struct BuildReport {
    n: usize,
    q: u32,
    field: String,
    coeff_kind: &'static str,
    compressed: bool,
    levels: Vec<LevelReport>,
    terms: usize,
    bytes: usize,
}

#[derive(Serialize)]
struct VerifyOutput {
    n: usize,
    q: u32,
    ring: String,
    group: String,
    terms: usize,
    residual_support: usize,
    ok: bool,
}

#[derive(Serialize)]
struct InfoReport {
    n: usize,
    q: u32,
    group: String,
    order: String,
    u: String,
    derived_u: String,
    v: String,
    v_prime: String,
    p: String,
    #[serde(rename = "N")]
    big_n: usize,
}

fn run(cli: Cli) -> Result<ExitCode> {
    let start = Instant::now();
    let exec = Exec::default();
    match cli.command {
        Command::Build { n, q, output, no_compress, rationalize } => {
            let field = field(&q)?;
            let opts = BuildOptions { compress: !no_compress, ..BuildOptions::default() };
            let mut cert = witness::build(n, &field, opts)?;
            if rationalize {
                cert = witness::rationalize(&cert)?;
            }
            let bytes = witness::to_bytes(&cert);
            std::fs::write(&output, &bytes).with_context(|| format!("writing {}", output.display()))?;
            emit(&BuildReport {
                n,
                q: field.q(),
                field: field.to_string(),
                coeff_kind: cert.coeff_kind.as_str(),
                compressed: cert.compressed,
                levels: cert.meta.levels.iter().map(|l| LevelReport { level: l.level, terms: l.terms }).collect(),
                terms: cert.terms.len(),
                bytes: bytes.len(),
            });
            eprintln!("build: {:.3}s", start.elapsed().as_secs_f64());
            Ok(ExitCode::SUCCESS)
        }
        Command::Verify { path, ring, group } => {
            let bytes = std::fs::read(&path).with_context(|| format!("reading {}", path.display()))?;
            let cert = witness::from_bytes(&bytes)?;
            let target = RingDescriptor::from_selector(&ring, cert.p())?;
            let report = witness::verify(&cert, &target, group.kind(), exec)?;
            emit(&VerifyOutput {
                n: cert.n,
                q: cert.q(),
                ring: target.to_string(),
                group: group.kind().to_string(),
                terms: report.terms,
                residual_support: report.residual_support,
                ok: report.ok,
            });
            eprintln!("verify: {:.3}s", report.elapsed.as_secs_f64());
            Ok(if report.ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
        }
        Command::Oracle { n, q, ring, idempotent, group } => {
            let field = field(&q)?;
            if !ring.starts_with("fp:") {
                bail!("the oracle needs a finite field ring fp:l[:d], got {ring:?}");
            }
            let tag = IdempotentTag::parse(&idempotent)?;
            let target = RingDescriptor::from_selector(&ring, field.p())?;
            let cap = cap()?;
            let space = MatrixSpace::new(n, field)?;
            let g = enumerate_group(group.kind(), &space, cap)?;
            let report = oracle::run(&g, tag, &target, cap, exec)?;
            emit(&report);
            eprintln!("oracle: {:.3}s", report.elapsed.as_secs_f64());
            Ok(ExitCode::SUCCESS)
        }
        Command::Info { n, q, group } => {
            let field = field(&q)?;
            if n == 0 {
                bail!("n must be at least 1");
            }
            let qq = field.q() as u128;
            let pow = |e: usize| qq.checked_pow(e as u32).map_or("overflow".to_string(), |x| x.to_string());
            let tri = |m: usize| m * m.saturating_sub(1) / 2;
            let big_n = (n - 1) * n.saturating_sub(2) / 2;
            emit(&InfoReport {
                n,
                q: field.q(),
                group: format!("{}_{n}({field})", group.kind()),
                order: group_order(group.kind(), n, field.q()).to_string(),
                u: pow(tri(n)),
                derived_u: pow(big_n),
                v: pow(n - 1),
                v_prime: pow(n.saturating_sub(2)),
                p: group_order(GroupKind::Affine, n, field.q()).to_string(),
                big_n,
            });
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn q_syntax() {
        assert_eq!(parse_q("2").unwrap(), (2, 1));
        assert_eq!(parse_q("2^2").unwrap(), (2, 2));
        assert_eq!(parse_q("4=2^2").unwrap(), (2, 2));
        assert_eq!(parse_q("3").unwrap(), (3, 1));
        assert!(parse_q("4").is_err());
        assert!(parse_q("8=2^2").is_err());
        assert!(parse_q("2^0").is_err());
        assert!(parse_q("x").is_err());
    }
}
