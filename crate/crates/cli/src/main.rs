use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use eqindex::assembler::{assemble_index, IndexDataSpec};
use eqindex::finedecomp::{canonical_isotropy_bundle, fine_decomposition, is_adapted, BundleSpec};
use eqindex::gcomplex::{orbit_type_stratification, relative_euler, singular_set, ComplexSpec, GComplex, OrbitSpace};
use eqindex::grouprep::{CharacterTable, FiniteGroup, GroupLimits, GroupSpec, DEFAULT_MAX_ORDER, DEFAULT_TABLE_CAP};
use eqindex::io::{rational_to_string, to_pretty};
use eqindex::strataformula::{verify_strata_vs_oracle, VerificationStatus};
use eqindex::Error;

const EXIT_VALIDATION: u8 = 1;
const EXIT_MISMATCH: u8 = 2;
const EXIT_SKIPPED: u8 = 3;

#[derive(Parser)]
#[command(name = "eqindex", version, about = "Equivariant Euler characteristics and index formulas for finite group actions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Orbit-type strata, codimensions, components and orbit-space Euler characteristics.
    Strata {
        #[command(flatten)]
        space: SpaceArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Compare the stratified formula with the Lefschetz oracle for every irreducible.
    Verify {
        #[command(flatten)]
        space: SpaceArgs,
        /// Only this irreducible index.
        #[arg(long)]
        rho: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Fine decomposition of bundle data and canonical isotropy bundles.
    FineDecomp {
        #[arg(long)]
        group: PathBuf,
        #[arg(long)]
        bundle: PathBuf,
        #[command(flatten)]
        limits: LimitArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Evaluate the index formula from per-stratum data.
    Assemble {
        #[arg(long)]
        data: PathBuf,
        /// Only this irreducible index.
        #[arg(long)]
        rho: Option<usize>,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Args)]
struct SpaceArgs {
    #[arg(long)]
    complex: PathBuf,
    #[arg(long)]
    group: PathBuf,
    #[command(flatten)]
    limits: LimitArgs,
}

#[derive(Args)]
struct LimitArgs {
    /// Largest group order accepted.
    #[arg(long, default_value_t = DEFAULT_MAX_ORDER)]
    max_order: usize,
    /// Largest group order for which the character table is computed.
    #[arg(long, default_value_t = DEFAULT_TABLE_CAP)]
    table_cap: usize,
}

#[derive(Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Write the report here instead of standard output.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add wall time to the report (makes it non-reproducible).
    #[arg(long)]
    timing: bool,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Table,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure { code: EXIT_VALIDATION, message: e.to_string() }
    }
}

fn fail(path: &Path, e: Error) -> Failure {
    Failure { code: EXIT_VALIDATION, message: format!("{}: {e}", path.display()) }
}

struct Input {
    role: &'static str,
    path: PathBuf,
    text: String,
}

impl Input {
    fn read(role: &'static str, path: &Path) -> Result<Self, Failure> {
        let text = fs::read_to_string(path)
            .map_err(|e| Failure { code: EXIT_VALIDATION, message: format!("{}: {e}", path.display()) })?;
        Ok(Input { role, path: path.to_path_buf(), text })
    }

    fn digest(&self) -> Value {
        json!({"path": self.path.display().to_string(), "sha256": hex::encode(Sha256::digest(self.text.as_bytes()))})
    }
}

/// A finished command: report body, table rendering and exit status.
struct Outcome {
    output: Value,
    table: String,
    audit: Value,
    code: u8,
    notes: Vec<String>,
}

fn load_group(input: &Input, limits: &LimitArgs) -> Result<(FiniteGroup, CharacterTable), Failure> {
    let spec = GroupSpec::from_json(&input.text).map_err(|e| fail(&input.path, e))?;
    spec.build(GroupLimits { max_order: limits.max_order, table_cap: limits.table_cap }).map_err(|e| fail(&input.path, e))
}

fn load_space(space: &SpaceArgs) -> Result<(Vec<Input>, GComplex, CharacterTable), Failure> {
    let complex_in = Input::read("complex", &space.complex)?;
    let group_in = Input::read("group", &space.group)?;
    let (group, table) = load_group(&group_in, &space.limits)?;
    let spec = ComplexSpec::from_json(&complex_in.text).map_err(|e| fail(&complex_in.path, e))?;
    let x = spec.build(&group).map_err(|e| fail(&complex_in.path, e))?;
    let x = x.regularize().map_err(|e| fail(&complex_in.path, e))?;
    Ok((vec![complex_in, group_in], x, table))
}

fn cmd_strata(space: &SpaceArgs) -> Result<(Vec<Input>, Outcome), Failure> {
    let (inputs, x, _) = load_space(space)?;
    let k = x.complex();
    let strata = orbit_type_stratification(&x)?;
    let quotient = OrbitSpace::new(&x)?;
    let sing = singular_set(&x, &strata);
    let sing_image = quotient.image(&sing);
    let mut table = String::new();
    let _ = writeln!(
        table,
        "complex: {} vertices, dimension {}, χ = {}, {} barycentric subdivision(s)",
        k.num_labels(),
        k.dimension(),
        k.euler_characteristic(),
        x.subdivisions()
    );
    let _ = writeln!(
        table,
        "orbit space: χ = {}, singular image χ = {}, relative χ = {}",
        quotient.complex.euler_characteristic(),
        sing_image.euler_characteristic(),
        relative_euler(&quotient.complex, &sing_image)?
    );
    let _ = writeln!(table, "{:<12} {:<8} {:<6} {:<5} {:<5} {:<10} {}", "component", "stratum", "|H|", "dim", "codim", "rel χ", "basepoint");
    let mut strata_json = Vec::new();
    for s in &strata {
        let mut comps = Vec::new();
        for c in &s.components {
            let rel = relative_euler(&quotient.image(&c.closure), &quotient.image(&c.lower))?;
            let basepoint = c.basepoints(&x).first().map(|&v| k.label(v).to_string());
            let _ = writeln!(
                table,
                "{:<12} {:<8} {:<6} {:<5} {:<5} {:<10} {}",
                c.id,
                s.index,
                s.isotropy.order(),
                c.dimension,
                c.codimension,
                rel,
                basepoint.as_deref().unwrap_or("-")
            );
            comps.push(json!({
                "id": c.id,
                "dimension": c.dimension,
                "codimension": c.codimension,
                "simplices": c.simplices.len(),
                "fixed_pieces": c.fixed_pieces.len(),
                "basepoint": basepoint,
                "relative_euler": rel,
            }));
        }
        strata_json.push(json!({
            "index": s.index,
            "principal": s.is_principal(),
            "isotropy": s.isotropy.elements(),
            "isotropy_order": s.isotropy.order(),
            "components": comps,
        }));
    }
    let output = json!({
        "complex": {
            "vertices": k.num_labels(),
            "dimension": k.dimension(),
            "f_vector": k.f_vector(),
            "euler_characteristic": k.euler_characteristic(),
            "subdivisions": x.subdivisions(),
        },
        "group_order": x.group().order(),
        "orbit_space": {
            "euler_characteristic": quotient.complex.euler_characteristic(),
            "singular_euler_characteristic": sing_image.euler_characteristic(),
            "relative_euler": relative_euler(&quotient.complex, &sing_image)?,
        },
        "strata": strata_json,
    });
    let audit = json!({"exact_arithmetic": true, "regularity": x.check_regularity()});
    Ok((inputs, Outcome { output, table, audit, code: 0, notes: Vec::new() }))
}

fn cmd_verify(space: &SpaceArgs, rho: Option<usize>) -> Result<(Vec<Input>, Outcome), Failure> {
    let (inputs, x, table) = load_space(space)?;
    if let Some(r) = rho {
        if r >= table.len() {
            return Err(Failure { code: EXIT_VALIDATION, message: format!("--rho {r}: the group has {} irreducibles", table.len()) });
        }
    }
    let mut report = verify_strata_vs_oracle(&x, &table)?;
    if let Some(r) = rho {
        report.rows.retain(|row| row.rho == r);
        report.breakdowns.retain(|b| b.rho == r);
        if !matches!(report.status, VerificationStatus::Skipped { .. }) {
            report.status =
                if report.rows.iter().all(|row| row.matches) { VerificationStatus::AllMatch } else { VerificationStatus::Mismatch };
        }
    }
    let mut text = String::new();
    let mut notes = Vec::new();
    let code = match &report.status {
        VerificationStatus::AllMatch => 0,
        VerificationStatus::Mismatch => {
            notes.push("stratified formula and oracle disagree".to_string());
            EXIT_MISMATCH
        }
        VerificationStatus::Skipped { reason, .. } => {
            notes.push(format!("skipped: {reason}"));
            let _ = writeln!(text, "skipped: {reason}");
            EXIT_SKIPPED
        }
    };
    if !report.rows.is_empty() {
        let _ = writeln!(text, "{:<5} {:<7} {:<8} {:<8} {}", "rho", "degree", "oracle", "formula", "match");
        for row in &report.rows {
            let _ = writeln!(
                text,
                "{:<5} {:<7} {:<8} {:<8} {}",
                row.rho,
                row.degree,
                row.oracle,
                row.formula,
                if row.matches { "yes" } else { "NO" }
            );
        }
    }
    let output = serde_json::to_value(&report).expect("serialisable");
    let audit = json!({
        "exact_arithmetic": true,
        "character_table_validated": true,
        "hopf_identity_checked": !report.rows.is_empty(),
        "subdivisions": x.subdivisions(),
    });
    Ok((inputs, Outcome { output, table: text, audit, code, notes }))
}

fn cmd_fine_decomp(group: &Path, bundle: &Path, limits: &LimitArgs) -> Result<(Vec<Input>, Outcome), Failure> {
    let group_in = Input::read("group", group)?;
    let bundle_in = Input::read("bundle", bundle)?;
    let (g, g_table) = load_group(&group_in, limits)?;
    let spec = BundleSpec::from_json(&bundle_in.text).map_err(|e| fail(&bundle_in.path, e))?;
    let b = spec.build(&g).map_err(|e| fail(&bundle_in.path, e))?;
    b.check_equivariance().map_err(|e| fail(&bundle_in.path, e))?;
    let mut text = String::new();
    let _ = writeln!(
        text,
        "H = {:?} (order {}), N(H) order {}, {} irreducibles of H",
        b.isotropy().elements(),
        b.isotropy().order(),
        b.normalizer().order(),
        b.isotropy_table().len()
    );
    let mut components = Vec::new();
    for (alpha, comp) in b.components().iter().enumerate() {
        let fine = fine_decomposition(&b, alpha).map_err(|e| fail(&bundle_in.path, e))?;
        let stabilizer = b.component_stabilizer(alpha);
        let _ = writeln!(text, "component {} (N_α order {}):", comp.id, stabilizer.order());
        let mut fine_json = Vec::new();
        for f in &fine {
            let w = canonical_isotropy_bundle(&g_table, &b, alpha, f.orbit[0])?;
            let adapted = is_adapted(&w.bundle, f)?;
            let _ = writeln!(
                text,
                "  orbit {:?}: m = {}, d = {}, rank = {}, n_b = {}; canonical j0 = {} (degree {}), rank {}, adapted: {}",
                f.orbit,
                f.multiplicity,
                f.degree,
                f.rank,
                f.n_b,
                w.j0,
                w.character.degree(),
                w.fine.rank,
                adapted
            );
            fine_json.push(json!({
                "fine_component": f,
                "canonical": {
                    "j0": w.j0,
                    "degree": w.character.degree(),
                    "fine_component": w.fine,
                    "adapted": adapted,
                },
            }));
        }
        components.push(json!({
            "id": comp.id,
            "stabilizer": stabilizer.elements(),
            "rank": b.rank(alpha),
            "fine_components": fine_json,
        }));
    }
    let output = json!({
        "isotropy": b.isotropy().elements(),
        "normalizer": b.normalizer().elements(),
        "isotropy_table": b.isotropy_table().to_canonical_json(),
        "components": components,
    });
    let audit = json!({"exact_arithmetic": true, "equivariance_checked": true});
    Ok((vec![group_in, bundle_in], Outcome { output, table: text, audit, code: 0, notes: Vec::new() }))
}

fn cmd_assemble(data: &Path, rho: Option<usize>) -> Result<(Vec<Input>, Outcome), Failure> {
    let data_in = Input::read("data", data)?;
    let d = IndexDataSpec::from_json(&data_in.text).and_then(|s| s.build()).map_err(|e| fail(&data_in.path, e))?;
    let rhos: Vec<usize> = match rho {
        Some(r) => vec![r],
        None => d.principal.keys().copied().collect(),
    };
    let mut text = String::new();
    let mut notes = Vec::new();
    let mut results = Vec::new();
    for r in rhos {
        let b = assemble_index(&d, r).map_err(|e| fail(&data_in.path, e))?;
        let betas: Vec<String> = b.betas.iter().map(|(id, v)| format!("{id}: {}", rational_to_string(v))).collect();
        let _ = writeln!(
            text,
            "rho {}: A0 = {}, beta [{}], index = {}",
            r,
            rational_to_string(&b.principal),
            betas.join(", "),
            rational_to_string(&b.total)
        );
        if let Some(w) = &b.warning {
            let _ = writeln!(text, "  warning: {w}");
            notes.push(format!("warning: {w}"));
        }
        results.push(b.to_json());
    }
    let integral = results.iter().all(|r| r["integral"] == json!(true));
    let output = json!({"mode": d.mode, "indices": results});
    let audit = json!({"exact_arithmetic": true, "all_integral": integral});
    Ok((vec![data_in], Outcome { output, table: text, audit, code: 0, notes }))
}

fn emit(command: &str, inputs: &[Input], outcome: &Outcome, output: &OutputArgs, elapsed: f64) -> Result<(), Failure> {
    let rendered = match output.format {
        Format::Json => {
            let digests: BTreeMap<&str, Value> = inputs.iter().map(|i| (i.role, i.digest())).collect();
            let mut report = json!({
                "command": command,
                "inputs": digests,
                "output": outcome.output,
                "audit": outcome.audit,
                "exit_code": outcome.code,
            });
            if output.timing {
                report["wall_time_seconds"] = json!(elapsed);
            }
            to_pretty(&report)
        }
        Format::Table => {
            let mut t = outcome.table.clone();
            if output.timing {
                let _ = writeln!(t, "wall time: {elapsed:.3} s");
            }
            t
        }
    };
    match &output.out {
        Some(path) => fs::write(path, rendered)
            .map_err(|e| Failure { code: EXIT_VALIDATION, message: format!("{}: {e}", path.display()) }),
        None => {
            print!("{rendered}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let start = Instant::now();
    let (name, result, output) = match &cli.command {
        Command::Strata { space, output } => ("strata", cmd_strata(space), output),
        Command::Verify { space, rho, output } => ("verify", cmd_verify(space, *rho), output),
        Command::FineDecomp { group, bundle, limits, output } => ("fine-decomp", cmd_fine_decomp(group, bundle, limits), output),
        Command::Assemble { data, rho, output } => ("assemble", cmd_assemble(data, *rho), output),
    };
    let (inputs, outcome) = result?;
    emit(name, &inputs, &outcome, output, start.elapsed().as_secs_f64())?;
    if output.format == Format::Json || output.out.is_some() {
        for note in &outcome.notes {
            eprintln!("{note}");
        }
    }
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
