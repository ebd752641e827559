//! One function per subcommand. Each validates its flags, runs the engine
//! and returns the artifacts to write.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde_json::{json, Value};

use uwstbc::clifford::{self, BasisElement, Sign};
use uwstbc::code::{parse_codes, GroupSignature, StbcCode};
use uwstbc::codecheck::{decoding_complexity, verify_report, ConstellationKind, ConstellationSpec};
use uwstbc::exactmat::ExactMatrix;
use uwstbc::exec::{with_workers, Execution};
use uwstbc::fixtures;
use uwstbc::lambda::{enumerate_lambdas, EnumerateOptions};
use uwstbc::search::{
    candidates, find_gamma_sets, max_rate_search, reconstruct_many, MaxRateOptions, SearchOptions,
};

use crate::args::{BasisArgs, BasisFormat, ComplexityArgs, Emit, LambdaArgs, ReproArgs, SearchArgs, VerifyArgs};
use crate::error::{CliError, CliResult, ErrorKind};
use crate::manifest::{sha256_hex, Artifact, RunConfig};
use crate::repro;

/// What a subcommand produced. `failure` is set when the run completed but
/// its verdict is negative; artifacts are still written.
pub struct Run {
    pub config: RunConfig,
    pub artifacts: Vec<Artifact>,
    pub timing_ms: BTreeMap<String, u128>,
    pub failure: Option<CliError>,
}

impl Run {
    fn new(config: RunConfig, artifacts: Vec<Artifact>, elapsed: Instant) -> Self {
        let mut timing_ms = BTreeMap::new();
        timing_ms.insert("total".to_string(), elapsed.elapsed().as_millis());
        Self {
            config,
            artifacts,
            timing_ms,
            failure: None,
        }
    }
}

fn execution(workers: usize) -> Execution {
    if workers > 1 {
        Execution::Parallel
    } else {
        Execution::Sequential
    }
}

fn read_input(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

fn parse_sizes(s: &str) -> CliResult<GroupSignature> {
    GroupSignature::parse_list(s).map_err(|e| CliError::usage(format!("--sizes: {e}")))
}

pub fn generate_basis(args: &BasisArgs) -> CliResult<Run> {
    let start = Instant::now();
    let sign: Sign = args.sign_gamma1.parse()?;
    let config = RunConfig::new(
        "generate-basis",
        json!({ "a": args.a, "sign_gamma1": sign.value(), "format": format!("{:?}", args.format).to_lowercase() }),
        1,
    );
    let basis = clifford::basis(args.a, sign)?;
    let artifact = match args.format {
        BasisFormat::Json => Artifact::json("basis", args.out.clone(), &basis.elements)?,
        BasisFormat::Table => Artifact::text("basis", args.out.clone(), basis_table(&basis.elements)),
    };
    Ok(Run::new(config, vec![artifact], start))
}

/// `jI`, `R1R2`, `jR1R2R3`, ... with the matrix below each name.
pub fn basis_table(elements: &[BasisElement]) -> String {
    let mut out = String::new();
    for e in elements {
        let phase = ["", "j", "-", "-j"][(e.phase_power % 4) as usize];
        let body = if e.gen_subset.is_empty() {
            "I".to_string()
        } else {
            e.gen_subset.iter().map(|i| format!("R{i}")).collect()
        };
        out.push_str(&format!("α_{} = {phase}{body}\n", e.index));
        let cells: Vec<Vec<String>> = (0..e.matrix.rows())
            .map(|r| e.matrix.row(r).iter().map(ToString::to_string).collect())
            .collect();
        let width = cells.iter().flatten().map(|c| c.chars().count()).max().unwrap_or(1);
        for row in cells {
            let padded: Vec<String> = row.iter().map(|c| format!("{c:>width$}")).collect();
            out.push_str(&format!("    [ {} ]\n", padded.join("  ")));
        }
        out.push('\n');
    }
    out
}

pub fn enumerate(args: &LambdaArgs) -> CliResult<Run> {
    let start = Instant::now();
    let workers = args.workers.count();
    let config = RunConfig::new(
        "enumerate-lambdas",
        json!({ "a": args.a, "emit": format!("{:?}", args.emit).to_lowercase(), "allow_a3": args.allow_a3 }),
        workers,
    );
    if args.a == 3 && !args.allow_a3 {
        return Err(CliError::new(ErrorKind::Domain, "a = 3 enumeration is expensive; pass --allow-a3"));
    }
    let opts = EnumerateOptions {
        allow_a3: args.allow_a3,
        execution: execution(workers),
    };
    let found = with_workers(workers, || enumerate_lambdas(args.a, opts))?;
    let artifact = match args.emit {
        Emit::Json => Artifact::json("lambdas", args.out.clone(), &found)?,
        Emit::Count => Artifact::json("lambdas", args.out.clone(), &json!({ "a": args.a, "count": found.len() }))?,
    };
    Ok(Run::new(config, vec![artifact], start))
}

fn load_a1(spec: &str, n: usize) -> CliResult<(ExactMatrix, String)> {
    if spec == "identity" {
        return Ok((ExactMatrix::identity(n), "identity".into()));
    }
    let text = read_input(Path::new(spec))?;
    let m: ExactMatrix = serde_json::from_str(&text).map_err(|e| CliError::input(format!("{spec}: {e}")))?;
    Ok((m, sha256_hex(text.as_bytes())))
}

pub fn search(args: &SearchArgs) -> CliResult<Run> {
    let start = Instant::now();
    let workers = args.workers.count();
    let exec = execution(workers);
    if args.max_rate && args.sizes.is_some() {
        return Err(CliError::usage("--sizes and --max-rate are mutually exclusive"));
    }
    if args.max_rate && args.limit.is_some() {
        return Err(CliError::usage("--limit does not apply to --max-rate"));
    }
    let signature = match (&args.sizes, args.max_rate) {
        (Some(s), _) => {
            let sig = parse_sizes(s)?;
            if sig.groups() != args.groups {
                return Err(CliError::usage(format!(
                    "--sizes lists {} groups but --groups is {}",
                    sig.groups(),
                    args.groups
                )));
            }
            if args.symmetric && !sig.is_symmetric() {
                return Err(CliError::usage("--symmetric needs equal --sizes"));
            }
            Some(sig)
        }
        (None, true) => None,
        (None, false) => return Err(CliError::usage("--sizes is required unless --max-rate is given")),
    };
    if !(1..=4).contains(&args.a) {
        return Err(CliError::new(ErrorKind::Domain, format!("a = {} is outside 1..=4", args.a)));
    }
    let (a1, a1_id) = load_a1(&args.a1, 1 << args.a)?;
    let config = RunConfig::new(
        "search",
        json!({
            "a": args.a,
            "groups": args.groups,
            "sizes": signature.as_ref().map(|s| s.sizes().to_vec()),
            "symmetric": args.symmetric,
            "max_rate": args.max_rate,
            "min_group_size": args.min_group_size,
            "limit": args.limit,
            "max_results": args.max_results,
            "a1": a1_id,
            "allow_a3": args.allow_a3,
        }),
        workers,
    );

    let (codes, summary) = with_workers(workers, || -> CliResult<(Vec<StbcCode>, Value)> {
        match &signature {
            None => {
                let opts = MaxRateOptions {
                    allow_a3: args.allow_a3,
                    execution: exec,
                    min_group_size: args.min_group_size as usize,
                };
                let r = max_rate_search(args.a, args.groups, args.symmetric, opts)?;
                let codes = if args.a1 == "identity" {
                    r.witnesses.clone()
                } else {
                    reconstruct_many(&r.gammas, &a1, exec)?
                };
                let mut summary = serde_json::to_value(&r).map_err(|e| CliError::io(e.to_string()))?;
                if let Some(obj) = summary.as_object_mut() {
                    obj.remove("witnesses");
                }
                Ok((codes, summary))
            }
            Some(sig) => {
                let cands = candidates(args.a, args.allow_a3, exec)?;
                let cap = args.limit.unwrap_or(args.max_results + 1) as usize;
                let sets = find_gamma_sets(
                    sig,
                    &cands,
                    SearchOptions {
                        limit: Some(cap),
                        execution: exec,
                    },
                )?;
                if args.limit.is_none() && sets.len() as u64 > args.max_results {
                    return Err(CliError::new(
                        ErrorKind::Budget,
                        format!(
                            "signature {sig} has more than {} generating sets; pass --limit or raise --max-results",
                            args.max_results
                        ),
                    ));
                }
                let codes = reconstruct_many(&sets, &a1, exec)?;
                let complete = args.limit.is_none_or(|l| (sets.len() as u64) < l);
                let summary = json!({
                    "signature": sig,
                    "rate": sig.rate(1 << args.a).to_string(),
                    "sets": sets.len(),
                    "limit": args.limit,
                    "exhaustive": complete,
                });
                Ok((codes, summary))
            }
        }
    })?;

    let mut artifacts = vec![Artifact::json("codes", args.out.clone(), &codes)?];
    if let Some(path) = &args.report {
        artifacts.push(Artifact::json("search_report", Some(path.clone()), &summary)?);
    }
    Ok(Run::new(config, artifacts, start))
}

fn load_codes(spec: &str) -> CliResult<(Vec<StbcCode>, String)> {
    match spec {
        "builtin:table2" => Ok((vec![fixtures::table2()], sha256_hex(fixtures::TABLE2_JSON.as_bytes()))),
        "builtin:table3" => Ok((vec![fixtures::table3()], sha256_hex(fixtures::TABLE3_JSON.as_bytes()))),
        _ if spec.starts_with("builtin:") => Err(CliError::usage(format!(
            "unknown bundled code '{spec}' (expected builtin:table2 or builtin:table3)"
        ))),
        path => {
            let text = read_input(Path::new(path))?;
            let codes = parse_codes(&text).map_err(|e| CliError::input(format!("{path}: {e}")))?;
            Ok((codes, sha256_hex(text.as_bytes())))
        }
    }
}

fn load_constellation(spec: &str) -> CliResult<(ConstellationSpec, String)> {
    if let Some(m) = spec.strip_prefix("square:") {
        let m: u64 = m
            .parse()
            .map_err(|_| CliError::usage(format!("--constellation square:M needs an integer M, got '{m}'")))?;
        return Ok((ConstellationSpec::square_qam(m)?, spec.to_string()));
    }
    if let Some(path) = spec.strip_prefix("custom:") {
        let text = read_input(Path::new(path))?;
        let cs = ConstellationSpec::from_json(&text).map_err(|e| CliError::input(format!("{path}: {e}")))?;
        return Ok((cs, format!("custom:{}", sha256_hex(text.as_bytes()))));
    }
    Err(CliError::usage(format!(
        "--constellation must be square:M or custom:<file>, got '{spec}'"
    )))
}

pub fn verify(args: &VerifyArgs) -> CliResult<Run> {
    let start = Instant::now();
    let workers = args.workers.count();
    if args.coding_gain && args.constellation.is_none() {
        return Err(CliError::usage("--coding-gain needs --constellation"));
    }
    let (codes, code_id) = load_codes(&args.code)?;
    let cs = args.constellation.as_deref().map(load_constellation).transpose()?;
    let config = RunConfig::new(
        "verify",
        json!({
            "code": code_id,
            "constellation": cs.as_ref().map(|(_, id)| id.clone()),
            "coding_gain": args.coding_gain,
            "budget": args.budget,
        }),
        workers,
    );
    let reports = with_workers(workers, || {
        codes
            .iter()
            .map(|c| verify_report(c, cs.as_ref().map(|(s, _)| s), args.coding_gain, args.budget))
            .collect::<uwstbc::Result<Vec<_>>>()
    })?;
    let failed: Vec<usize> = reports
        .iter()
        .enumerate()
        .filter(|(_, r)| !r.passed)
        .map(|(i, _)| i)
        .collect();
    let mut run = Run::new(config, vec![Artifact::json("verify_report", args.report.clone(), &reports)?], start);
    if !failed.is_empty() {
        run.failure = Some(CliError::new(
            ErrorKind::Verification,
            format!("codes at positions {failed:?} failed verification"),
        ));
    }
    Ok(run)
}

pub fn complexity(args: &ComplexityArgs) -> CliResult<Run> {
    let start = Instant::now();
    let sig = parse_sizes(&args.sizes)?;
    let kind: ConstellationKind = args.kind.parse().map_err(|e: uwstbc::Error| CliError::usage(e.to_string()))?;
    let config = RunConfig::new(
        "complexity",
        json!({ "sizes": sig.sizes(), "M": args.m, "kind": kind }),
        1,
    );
    let c = decoding_complexity(&sig, args.m, kind)?;
    Ok(Run::new(config, vec![Artifact::json("complexity", args.out.clone(), &c)?], start))
}

pub fn repro_cmd(args: &ReproArgs) -> CliResult<Run> {
    let start = Instant::now();
    if !args.paper_tables {
        return Err(CliError::usage("nothing to reproduce; pass --paper-tables"));
    }
    let workers = args.workers.count();
    let expected = match &args.expected {
        Some(p) => repro::parse_expected(&read_input(p)?)?,
        None => repro::recorded_digests()?,
    };
    let config = RunConfig::new("repro", json!({ "paper_tables": true, "expected": expected }), workers);
    let outcome = with_workers(workers, || repro::paper_tables(execution(workers)))?;
    let report = outcome.report(&expected);

    let mut artifacts = vec![Artifact::json("repro_report", args.out.clone(), &report)?];
    for (name, value) in &outcome.artifacts {
        let path = args.out_dir.as_ref().map(|d| d.join(format!("{name}.json")));
        let a = Artifact::json(name, path, value)?;
        if a.path.is_some() {
            artifacts.push(a);
        }
    }
    if let Some(path) = &args.record_digests {
        artifacts.push(Artifact::json("recorded_digests", Some(path.clone()), &outcome.digests())?);
    }

    let mut run = Run::new(config, artifacts, start);
    run.timing_ms.extend(outcome.timing_ms.clone());
    if !report.passed {
        let failing: Vec<String> = report
            .criteria
            .iter()
            .filter(|c| !c.passed)
            .map(|c| format!("criterion {}", c.id))
            .chain(report.digests.iter().filter(|d| !d.matches).map(|d| format!("digest {}", d.artifact)))
            .collect();
        run.failure = Some(CliError::new(
            ErrorKind::Mismatch,
            format!("reproduction differs: {}", failing.join(", ")),
        ));
    }
    Ok(run)
}

/// Default manifest location for a run: next to its first file artifact.
pub fn default_manifest_path(run: &Run) -> Option<PathBuf> {
    run.artifacts.iter().find_map(|a| a.path.as_ref()).map(|p| {
        let mut s = p.as_os_str().to_owned();
        s.push(".manifest.json");
        PathBuf::from(s)
    })
}
