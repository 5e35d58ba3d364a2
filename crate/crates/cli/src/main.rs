//! `reslie`: command-line front end. Every command prints one JSON report on stdout
//! and exits 0 when all checks pass, 1 when a check fails and 2 on usage or input errors.

use std::collections::BTreeMap;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use reslie::abelres::{abelian_cochain_cohomology, dual_cochain_dim, AbelianComplex};
use reslie::classical::{choose, cochain_dim};
use reslie::field::Prime;
use reslie::frontend::{parse_structure, witt_file};
use reslie::interp::{deformation_check, derivation_check};
use reslie::liealg::MAX_NONABELIAN_PRIME;
use reslie::rescochain::{c2_dim, c3_dim, compare_classical, delta0_matrix, delta1_matrix};
use reslie::ures::{witt_oracle_check, PBW_BOUND};
use reslie::{
    build_resolution, classical_cohomology, emit, infer_p_operator, parse, resolution_homology, restricted_cohomology,
    verify_identities, witt_algebra, AlgebraFile, Check, Cochain2, Error, RestrictedLieAlgebra, RestrictedModule, Ures,
};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

/// Samples used by the Witt oracle when exhaustive checking is out of reach.
const WITT_SAMPLES: usize = 500;

#[derive(Parser)]
#[command(name = "reslie", version, about = "Restricted Lie algebra cohomology over prime fields")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the restricted Lie algebra axioms and the declared modules.
    Validate { file: PathBuf },
    /// Restricted and classical cohomology in one degree.
    Cohomology {
        file: PathBuf,
        /// A declared module, `trivial` or `adjoint`.
        #[arg(long)]
        module: String,
        #[arg(long)]
        degree: usize,
        /// Only the classical complex.
        #[arg(long)]
        classical: bool,
    },
    /// Cochain dimension formulas against enumerated counts.
    Dims { file: PathBuf },
    /// Restricted derivations against H^1 with adjoint coefficients.
    Derivations { file: PathBuf },
    /// Build the abelian resolution up to degree kmax and report its homology.
    Resolve {
        file: PathBuf,
        #[arg(long)]
        kmax: usize,
    },
    /// Check that an infinitesimal deformation is restricted exactly when it is a cocycle.
    DeformCheck {
        file: PathBuf,
        /// JSON file `{"phi": {"x,y": [..]}, "omega": {"x": [..]}}`; omitted entries are zero.
        #[arg(long)]
        cocycle: PathBuf,
    },
    /// Exhaustive check of the binomial identities for one prime.
    Identities {
        #[arg(long)]
        p: u64,
    },
    /// The Witt algebra: its oracle report, or the algebra file with --emit.
    Witt {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        emit: bool,
        /// Write the emitted file here instead of stdout.
        #[arg(long, requires = "emit")]
        out: Option<PathBuf>,
    },
    /// Infer a p-operator from the brackets of a file.
    Infer { file: PathBuf },
}

#[derive(Serialize)]
struct Output {
    tool_version: &'static str,
    input_digest: String,
    command: &'static str,
    results: Value,
    checks: Vec<Check>,
}

impl Output {
    fn new(command: &'static str, input: &[u8], results: Value, checks: Vec<Check>) -> Output {
        Output {
            tool_version: env!("CARGO_PKG_VERSION"),
            input_digest: hex::encode(Sha256::digest(input)),
            command,
            results,
            checks,
        }
    }
}

enum Outcome {
    Report(Output),
    Text(String),
}

#[derive(Debug)]
struct UsageError(String);

impl From<Error> for UsageError {
    fn from(e: Error) -> Self {
        UsageError(e.to_string())
    }
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CocycleFile {
    #[serde(default)]
    phi: BTreeMap<String, Vec<i64>>,
    #[serde(default)]
    omega: BTreeMap<String, Vec<i64>>,
}

fn read(path: &Path) -> Result<Vec<u8>, UsageError> {
    std::fs::read(path).map_err(|e| UsageError(format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<(Vec<u8>, AlgebraFile), UsageError> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|_| UsageError(format!("{}: not UTF-8", path.display())))?;
    let file = parse(text)?;
    Ok((bytes, file))
}

fn load_algebra(path: &Path) -> Result<(Vec<u8>, AlgebraFile, Arc<RestrictedLieAlgebra>), UsageError> {
    let (bytes, file) = load(path)?;
    let alg = Arc::new(file.algebra()?);
    Ok((bytes, file, alg))
}

fn prefixed(prefix: &str, checks: Vec<Check>) -> impl Iterator<Item = Check> + '_ {
    checks.into_iter().map(move |c| Check { name: format!("{prefix}: {}", c.name), ..c })
}

fn equal_check(name: &str, formula: usize, counted: usize) -> Check {
    Check::from_witness(name, (formula != counted).then(|| format!("formula {formula}, counted {counted}")))
}

fn label_index(file: &AlgebraFile, label: &str) -> Result<usize, UsageError> {
    file.basis.iter().position(|b| b == label).ok_or_else(|| UsageError(format!("unknown basis label {label}")))
}

fn reduce_vector(p: Prime, v: &[i64], len: usize, what: &str) -> Result<Vec<u32>, UsageError> {
    if v.len() != len {
        return Err(UsageError(format!("{what}: expected {len} coordinates, found {}", v.len())));
    }
    Ok(v.iter().map(|&x| p.reduce(x)).collect())
}

fn module_names(file: &AlgebraFile) -> Vec<String> {
    let mut names = vec!["trivial".to_string(), "adjoint".to_string()];
    names.extend(file.modules.iter().map(|b| b.name.clone()).filter(|n| n != "trivial" && n != "adjoint"));
    names
}

fn validate(path: &Path) -> Result<Outcome, UsageError> {
    let (bytes, file) = load(path)?;
    let alg = Arc::new(file.algebra_unchecked()?);
    let mut checks = alg.verify_restricted().checks;
    for (name, module) in file.modules_unchecked(&alg)? {
        checks.extend(prefixed(&format!("module {name}"), module.verify_module().checks));
    }
    let results = json!({
        "name": file.name,
        "p": file.p,
        "dim": alg.dim(),
        "abelian": alg.is_abelian(),
        "strongly_abelian": alg.is_strongly_abelian(),
        "modules": file.modules.iter().map(|b| json!({"name": b.name, "dim": b.dim})).collect::<Vec<_>>(),
    });
    Ok(Outcome::Report(Output::new("validate", &bytes, results, checks)))
}

fn cohomology(path: &Path, module_name: &str, k: usize, classical_only: bool) -> Result<Outcome, UsageError> {
    let (bytes, file, alg) = load_algebra(path)?;
    let module = file.module(&alg, module_name)?;
    let classical = classical_cohomology(&module, k)?;
    let mut results = json!({
        "module": module_name,
        "degree": k,
        "module_dim": module.dim(),
        "classical_dim": classical.dim,
    });
    let mut checks = Vec::new();
    if !classical_only {
        let restricted = restricted_cohomology(&module, k)?;
        results["restricted_dim"] = json!(restricted.dim);
        if k == 0 {
            let inv = module.invariants().dim();
            results["invariants_dim"] = json!(inv);
            checks.push(equal_check("H0 equals invariants", inv, restricted.dim));
        } else {
            let cmp = compare_classical(&module, k)?;
            results["kernel_dim"] = json!(cmp.kernel_dim);
            if k == 1 {
                checks.push(Check::from_witness(
                    "H1 injects into classical H1",
                    (cmp.kernel_dim != 0).then(|| format!("kernel dimension {}", cmp.kernel_dim)),
                ));
            }
        }
        if alg.is_abelian() && k + 1 < alg.p().get() as usize {
            let dual = abelian_cochain_cohomology(&module, k)?;
            results["abelian_resolution_dim"] = json!(dual);
            checks.push(equal_check("agrees with abelian resolution", dual, restricted.dim));
        }
    }
    Ok(Outcome::Report(Output::new("cohomology", &bytes, results, checks)))
}

fn dims(path: &Path) -> Result<Outcome, UsageError> {
    let (bytes, file, alg) = load_algebra(path)?;
    let (n, p) = (alg.dim(), alg.p().get() as usize);
    let mut checks = Vec::new();
    let mut results = json!({"dim": n, "p": p});
    let pbw = Ures::new(alg.clone()).pbw_basis().ok().map(|b| b.len());
    let formula = (p as u64).checked_pow(n as u32);
    results["pbw_dim"] = json!(formula);
    match (pbw, formula) {
        (Some(count), Some(f)) => checks.push(equal_check("PBW basis size", f as usize, count)),
        _ => results["pbw_skipped"] = json!(format!("above {PBW_BOUND}")),
    }
    let mut per_module = Vec::new();
    for name in module_names(&file) {
        let module = file.module(&alg, &name)?;
        let m = module.dim();
        let classical: Vec<usize> = (0..=n).map(|q| choose(n, q) * m).collect();
        let c2 = n * (n + 1) / 2 * m;
        let c3 = n * (n + 1) * (n + 2) / 6 * m;
        checks.push(equal_check(&format!("{name}: C1"), n * m, delta0_matrix(&module).rows()));
        checks.push(equal_check(&format!("{name}: C2"), c2, delta1_matrix(&module).rows()));
        checks.push(equal_check(&format!("{name}: C2 count"), c2, c2_dim(&module)));
        checks.push(equal_check(&format!("{name}: C3 count"), c3, c3_dim(&module)));
        for (q, &d) in classical.iter().enumerate() {
            checks.push(equal_check(&format!("{name}: classical C{q}"), d, cochain_dim(&module, q)));
        }
        let mut entry = json!({"module": name, "m": m, "classical": classical, "c2": c2, "c3": c3});
        if alg.is_abelian() {
            let mut dual = Vec::new();
            for k in 0..p {
                let formula = choose((n + k).saturating_sub(1), k) * m;
                let counted = dual_cochain_dim(&alg, m, k)?;
                checks.push(equal_check(&format!("{name}: abelian dual C{k}"), formula, counted));
                dual.push(formula);
            }
            entry["abelian_dual"] = json!(dual);
        }
        per_module.push(entry);
    }
    results["modules"] = json!(per_module);
    if alg.is_abelian() {
        let complex = AbelianComplex::new(alg.clone())?;
        results["chain_dims"] = json!((0..p).map(|k| complex.chain_dim(k)).collect::<Vec<_>>());
    }
    Ok(Outcome::Report(Output::new("dims", &bytes, results, checks)))
}

fn derivations(path: &Path) -> Result<Outcome, UsageError> {
    let (bytes, _, alg) = load_algebra(path)?;
    let (der, report) = derivation_check(&alg)?;
    let results = json!({
        "dim": der.dim(),
        "inner_dim": der.inner.dim(),
        "outer_dim": der.outer_dim(),
        "exhaustive": der.exhaustive,
    });
    Ok(Outcome::Report(Output::new("derivations", &bytes, results, report.checks)))
}

fn resolve(path: &Path, kmax: usize) -> Result<Outcome, UsageError> {
    let (bytes, _, alg) = load_algebra(path)?;
    let res = build_resolution(&alg, kmax)?;
    let homology = (0..=kmax).map(|k| resolution_homology(&res, k)).collect::<reslie::Result<Vec<_>>>()?;
    let mut checks = res.report.checks;
    let witness = homology.iter().position(|&h| h != 0).map(|k| format!("H_{k} has dimension {}", homology[k]));
    checks.push(Check::from_witness("homology vanishes", witness));
    let results = json!({
        "kmax": kmax,
        "chain_dims": res.slices[..=kmax].iter().map(|s| s.basis.len()).collect::<Vec<_>>(),
        "homology": homology,
    });
    Ok(Outcome::Report(Output::new("resolve", &bytes, results, checks)))
}

fn deform_check(path: &Path, cocycle_path: &Path) -> Result<Outcome, UsageError> {
    let (mut bytes, file, alg) = load_algebra(path)?;
    let cocycle_bytes = read(cocycle_path)?;
    let cocycle: CocycleFile =
        serde_json::from_slice(&cocycle_bytes).map_err(|e| UsageError(format!("{}: {e}", cocycle_path.display())))?;
    let (n, p) = (alg.dim(), alg.p());
    let adjoint = RestrictedModule::adjoint(&alg);
    let mut c2 = Cochain2::zero(&adjoint);
    for (key, v) in &cocycle.phi {
        let (a, b) = key.split_once(',').ok_or_else(|| UsageError(format!("phi key {key:?} is not \"x,y\"")))?;
        let (i, j) = (label_index(&file, a.trim())?, label_index(&file, b.trim())?);
        let value = reduce_vector(p, v, n, &format!("phi {key}"))?;
        match i.cmp(&j) {
            std::cmp::Ordering::Less => c2.phi.set(&[i, j], &value),
            std::cmp::Ordering::Greater => c2.phi.set(&[j, i], &p.vneg(&value)),
            std::cmp::Ordering::Equal => {
                if value.iter().any(|&x| x != 0) {
                    return Err(UsageError(format!("phi {key}: nonzero value on a repeated argument")));
                }
            }
        }
    }
    for (key, v) in &cocycle.omega {
        let i = label_index(&file, key.trim())?;
        c2.omega[i] = reduce_vector(p, v, n, &format!("omega {key}"))?;
    }
    let outcome = deformation_check(&alg, &c2)?;
    let checks = vec![Check::from_witness(
        "restricted iff cocycle",
        (!outcome.agrees())
            .then(|| format!("restricted = {}, cocycle = {}", outcome.is_restricted(), outcome.is_cocycle)),
    )];
    let results = json!({
        "is_cocycle": outcome.is_cocycle,
        "deformation_restricted": outcome.is_restricted(),
        "failing_axiom": outcome.failing_axiom(),
        "deformation_checks": outcome.restricted.checks,
    });
    bytes.push(0);
    bytes.extend(&cocycle_bytes);
    Ok(Outcome::Report(Output::new("deform-check", &bytes, results, checks)))
}

fn identities(p: u64) -> Result<Outcome, UsageError> {
    let prime = Prime::new(p)?;
    let report = verify_identities(prime)?;
    let input = format!("identities --p {p}");
    Ok(Outcome::Report(Output::new("identities", input.as_bytes(), json!({"p": p}), report.checks)))
}

fn witt(p: u64, emit_file: bool, out: Option<&Path>) -> Result<Outcome, UsageError> {
    let prime = Prime::new(p)?;
    if p > MAX_NONABELIAN_PRIME as u64 {
        return Err(Error::UnsupportedPrime(p as u32).into());
    }
    if emit_file {
        let text = emit(&witt_file(prime));
        return match out {
            Some(path) => {
                std::fs::write(path, &text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
                Ok(Outcome::Text(String::new()))
            }
            None => Ok(Outcome::Text(text)),
        };
    }
    let (alg, _) = witt_algebra(prime);
    let mut checks = alg.verify_restricted().checks;
    checks.extend(witt_oracle_check(prime, WITT_SAMPLES)?.checks);
    let input = format!("witt --p {p}");
    let results = json!({"p": p, "dim": alg.dim()});
    Ok(Outcome::Report(Output::new("witt", input.as_bytes(), results, checks)))
}

fn infer(path: &Path) -> Result<Outcome, UsageError> {
    let bytes = read(path)?;
    let text = std::str::from_utf8(&bytes).map_err(|_| UsageError(format!("{}: not UTF-8", path.display())))?;
    let file = parse_structure(text)?;
    let inference = match infer_p_operator(file.prime(), file.structure.clone()) {
        Ok(inf) => inf,
        Err(Error::NotRestrictable(i)) => {
            let check = Check::fail("restrictable", format!("(ad {})^p is not inner", file.basis[i]));
            return Ok(Outcome::Report(Output::new("infer", &bytes, json!({}), vec![check])));
        }
        Err(e) => return Err(e.into()),
    };
    let mut checks = inference.report.checks;
    checks.extend(prefixed("inferred algebra", inference.algebra.verify_restricted().checks));
    let mut inferred = AlgebraFile::from_algebra(&file.name, &inference.algebra, Some(file.basis.clone()));
    inferred.modules = file.modules.clone();
    let pmap: BTreeMap<&str, &[u32]> =
        file.basis.iter().map(String::as_str).zip(inference.algebra.pi_values().iter().map(Vec::as_slice)).collect();
    let results = json!({
        "center_dim": inference.center_dim,
        "pmap": pmap,
        "file": emit(&inferred),
    });
    Ok(Outcome::Report(Output::new("infer", &bytes, results, checks)))
}

fn run(cli: Cli) -> Result<Outcome, UsageError> {
    match cli.command {
        Command::Validate { file } => validate(&file),
        Command::Cohomology { file, module, degree, classical } => cohomology(&file, &module, degree, classical),
        Command::Dims { file } => dims(&file),
        Command::Derivations { file } => derivations(&file),
        Command::Resolve { file, kmax } => resolve(&file, kmax),
        Command::DeformCheck { file, cocycle } => deform_check(&file, &cocycle),
        Command::Identities { p } => identities(p),
        Command::Witt { p, emit, out } => witt(p, emit, out.as_deref()),
        Command::Infer { file } => infer(&file),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(Outcome::Text(text)) => {
            let _ = std::io::stdout().write_all(text.as_bytes());
            ExitCode::SUCCESS
        }
        Ok(Outcome::Report(out)) => {
            let pass = out.checks.iter().all(|c| c.pass);
            let json = serde_json::to_string_pretty(&out).expect("report serializes");
            let _ = writeln!(std::io::stdout(), "{json}");
            if pass {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(UsageError(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
