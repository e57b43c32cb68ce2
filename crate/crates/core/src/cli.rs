//! Command implementations behind the `flatcoh` binary.
//!
//! Each command takes the raw input bytes and returns an [`Outcome`]: a JSON
//! [`Report`], a human-readable rendering of it, and the process exit code.
//! Exit codes: 0 success, 1 usage or parse error, 2 failed domain
//! precondition or verification mismatch.

use std::fmt::Write as _;

use itertools::Itertools;
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::complex::SimplicialComplex;
use crate::error::Error;
use crate::flatnorm::{flat_norm, mass};
use crate::homology::{boundary_matrices, cohomology, homology_with, Coefficients, HomologyResult};
use crate::intersection::{default_stratification, intersection_homology, PerversityChoice, Stratification};
use crate::io::{chain_json, complex_file, format_rational, parse_chain, parse_complex, ComplexInput};
use crate::normalization::{derham_verify, normalize, verify_projection};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Check,
    Homology,
    Cohomology,
    Ih,
    Normalize,
    Flatnorm,
    Verify,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Self::Check => "check",
            Self::Homology => "homology",
            Self::Cohomology => "cohomology",
            Self::Ih => "ih",
            Self::Normalize => "normalize",
            Self::Flatnorm => "flatnorm",
            Self::Verify => "verify",
        }
    }
}

#[derive(Clone, Debug)]
pub struct Options {
    pub perversity: PerversityChoice,
    pub coefficients: Coefficients,
    /// Chain JSON text for `flatnorm`.
    pub chain: Option<String>,
}

impl Default for Options {
    fn default() -> Self {
        Self { perversity: PerversityChoice::Top, coefficients: Coefficients::Integers, chain: None }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub input_digest: String,
    pub results: Value,
    pub warnings: Vec<String>,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

#[derive(Clone, Debug)]
pub struct Outcome {
    pub exit_code: i32,
    /// Present unless the input could not be read at all.
    pub report: Option<Report>,
    pub human: String,
    pub error: Option<String>,
}

pub fn digest(input: &[u8]) -> String {
    let hash = Sha256::digest(input);
    format!("sha256:{}", hash.iter().map(|b| format!("{b:02x}")).join(""))
}

/// Exit code for a library error raised after the input parsed.
pub fn exit_code_for(e: &Error) -> i32 {
    match e {
        Error::InvalidPerversity(_) | Error::InvalidArgument(_) => EXIT_USAGE,
        _ => EXIT_DOMAIN,
    }
}

struct Success {
    results: Value,
    human: String,
    warnings: Vec<String>,
    exit_code: i32,
}

impl Success {
    fn ok(results: Value, human: String) -> Self {
        Self { results, human, warnings: Vec::new(), exit_code: EXIT_OK }
    }
}

pub fn run(command: Command, input: &[u8], opts: &Options) -> Outcome {
    let input_digest = digest(input);
    let fail = |code: i32, msg: String| Outcome { exit_code: code, report: None, human: String::new(), error: Some(msg) };

    let text = match std::str::from_utf8(input) {
        Ok(t) => t,
        Err(_) => return fail(EXIT_USAGE, "input is not UTF-8".into()),
    };
    let parsed = match parse_complex(text) {
        Ok(p) => p,
        Err(e) => return fail(EXIT_USAGE, format!("invalid complex: {e}")),
    };
    let result = match command {
        Command::Check => cmd_check(&parsed),
        Command::Homology => cmd_homology(&parsed, opts, false),
        Command::Cohomology => cmd_homology(&parsed, opts, true),
        Command::Ih => cmd_ih(&parsed, opts),
        Command::Normalize => cmd_normalize(&parsed),
        Command::Flatnorm => cmd_flatnorm(&parsed, opts),
        Command::Verify => cmd_verify(&parsed),
    };
    match result {
        Ok(s) => Outcome {
            exit_code: s.exit_code,
            report: Some(Report {
                command: command.name().to_string(),
                input_digest,
                results: s.results,
                warnings: s.warnings,
            }),
            human: s.human,
            error: None,
        },
        Err(e) => fail(exit_code_for(&e), e.to_string()),
    }
}

fn tuple(v: &[usize]) -> String {
    format!("({})", v.iter().join(", "))
}

fn stratification_for(input: &ComplexInput) -> Result<(Stratification, Vec<String>), Error> {
    match &input.strata {
        Some(given) => Ok((Stratification::from_strata(&input.complex, given.clone())?, Vec::new())),
        None => Ok((
            default_stratification(&input.complex)?,
            vec!["heuristic stratification used (homology-sphere link screen)".to_string()],
        )),
    }
}

fn groups_table(h: &HomologyResult, label: &str) -> String {
    let mut out = format!("{label} over {}:\n", if h.coefficients == Coefficients::Integers { "Z" } else { "Q" });
    out.push_str(&h.to_string());
    out
}

fn cmd_check(input: &ComplexInput) -> Result<Success, Error> {
    let c = &input.complex;
    let pm = c.pseudomanifold_report();
    let normality = if pm.is_pseudomanifold { Some(c.normality()?) } else { None };
    let components = c.connected_components().len();
    let results = json!({
        "dimension": c.dimension(),
        "f_vector": c.f_vector(),
        "is_pseudomanifold": pm.is_pseudomanifold,
        "pseudomanifold": pm,
        "is_normal": normality.as_ref().map(|n| n.is_normal),
        "bad_vertices": normality.as_ref().map(|n| n.bad_vertices.clone()),
        "components": components,
    });
    let mut human = String::new();
    let _ = writeln!(human, "dimension       {}", c.dimension().map_or("-".into(), |d| d.to_string()));
    let _ = writeln!(human, "f-vector        {}", tuple(&c.f_vector()));
    let _ = writeln!(human, "pseudomanifold  {}", if pm.is_pseudomanifold { "yes" } else { "no" });
    if !pm.is_pseudomanifold {
        for (r, n) in &pm.bad_ridges {
            let _ = writeln!(human, "  ridge {r} lies in {n} facets");
        }
        for f in &pm.low_dimensional_facets {
            let _ = writeln!(human, "  facet {f} is below the top dimension");
        }
    }
    match &normality {
        Some(n) if n.is_normal => human.push_str("normal          yes\n"),
        Some(n) => {
            let _ = writeln!(human, "normal          no (bad vertices: {})", n.bad_vertices.iter().join(", "));
        }
        None => human.push_str("normal          n/a\n"),
    }
    let _ = writeln!(human, "components      {components}");
    let mut s = Success::ok(results, human);
    if !pm.is_pseudomanifold {
        s.exit_code = EXIT_DOMAIN;
    }
    Ok(s)
}

fn cmd_homology(input: &ComplexInput, opts: &Options, dual: bool) -> Result<Success, Error> {
    let data = boundary_matrices(&input.complex);
    let h = if dual { cohomology(&data, opts.coefficients)? } else { homology_with(&data, opts.coefficients)? };
    let results = json!({
        "coefficients": h.coefficients,
        "groups": h.groups,
        "f_vector": input.complex.f_vector(),
        "euler_characteristic": input.complex.euler_characteristic(),
    });
    let human = groups_table(&h, if dual { "cohomology" } else { "homology" });
    Ok(Success::ok(results, human))
}

fn cmd_ih(input: &ComplexInput, opts: &Options) -> Result<Success, Error> {
    if !input.complex.is_pseudomanifold() {
        return Err(Error::PseudomanifoldRequired);
    }
    let l = input.complex.dimension().expect("non-empty");
    let perversity = opts.perversity.resolve(l)?;
    let (strat, warnings) = stratification_for(input)?;
    let h = intersection_homology(&input.complex, &strat, &perversity, opts.coefficients)?;
    let singular = strat.singular().maximal_faces();
    let results = json!({
        "perversity": opts.perversity.to_string(),
        "perversity_values": perversity.values(),
        "stratification": {
            "heuristic": strat.is_heuristic(),
            "singular_faces": singular,
        },
        "coefficients": h.coefficients,
        "groups": h.groups,
    });
    let mut human = format!(
        "perversity      {} {:?}\nsingular set    {}\n",
        opts.perversity,
        perversity.values(),
        if singular.is_empty() { "empty".to_string() } else { singular.iter().join(" ") }
    );
    human.push_str(&groups_table(&h, "intersection homology"));
    Ok(Success { results, human, warnings, exit_code: EXIT_OK })
}

fn cmd_normalize(input: &ComplexInput) -> Result<Success, Error> {
    let n = normalize(&input.complex)?;
    let check = verify_projection(&n);
    let mut file = complex_file(&n.normalized);
    file.projection = Some(n.projection.iter().map(|(a, b)| (a.key(), b.key())).collect());
    let multi: serde_json::Map<String, Value> = n
        .sheet_count
        .iter()
        .filter(|(_, c)| **c > 1)
        .map(|(s, c)| (s.key(), json!(c)))
        .collect();
    let results = json!({
        "facets": file.facets,
        "projection": file.projection,
        "vertex_origin": n.vertex_origin,
        "multi_sheet_faces": multi,
        "verification": check,
    });
    let mut human = String::new();
    let _ = writeln!(human, "input f-vector       {}", tuple(&input.complex.f_vector()));
    let _ = writeln!(human, "normalized f-vector  {}", tuple(&n.normalized.f_vector()));
    let _ = writeln!(human, "components           {}", n.normalized.connected_components().len());
    if multi.is_empty() {
        human.push_str("already normal: every face has one preimage\n");
    }
    for (k, c) in &multi {
        let _ = writeln!(human, "  face {k} splits into {c} sheets");
    }
    let _ = writeln!(human, "projection checks    {}", if check.passed() { "pass" } else { "FAIL" });
    for v in &check.violations {
        let _ = writeln!(human, "  {v}");
    }
    let mut s = Success::ok(results, human);
    if !check.passed() {
        s.exit_code = EXIT_DOMAIN;
    }
    Ok(s)
}

fn cmd_flatnorm(input: &ComplexInput, opts: &Options) -> Result<Success, Error> {
    let text = opts
        .chain
        .as_deref()
        .ok_or_else(|| Error::InvalidArgument("flatnorm needs --chain".into()))?;
    let chain = parse_chain(text)?;
    let weights = input.mass_weights()?;
    let f = flat_norm(&input.complex, &chain, &weights)?;
    let m = mass(&chain, &weights)?;
    let results = json!({
        "degree": chain.degree(),
        "value": format_rational(&f.value),
        "mass": format_rational(&m),
        "A": chain_json(&f.witness),
        "R": chain_json(&f.residual),
    });
    let human = format!(
        "flat norm   {}\nmass        {}\nA           {}\nR           {}\n",
        format_rational(&f.value),
        format_rational(&m),
        f.witness,
        f.residual
    );
    let mut s = Success::ok(results, human);
    if input.coordinates.is_some() {
        s.warnings.push("Euclidean weights rounded from floating point".into());
    }
    Ok(s)
}

fn cmd_verify(input: &ComplexInput) -> Result<Success, Error> {
    let (strat, warnings) = stratification_for(input)?;
    let r = derham_verify(&input.complex, Some(&strat))?;
    let results = serde_json::to_value(&r).expect("report serializes");
    let mut human = String::from("degree  IH_top(Q)  H^*(normalization; Q)\n");
    let (a, b) = (r.ih_top.betti(), r.normalization_cohomology.betti());
    for k in 0..a.len().max(b.len()) {
        let cell = |v: &[usize]| v.get(k).map_or("-".to_string(), |x| x.to_string());
        let _ = writeln!(human, "{k:>6}  {:>9}  {:>21}", cell(&a), cell(&b));
    }
    let _ = writeln!(human, "match: {}", if r.matches { "yes" } else { "NO" });
    let exit_code = if r.matches { EXIT_OK } else { EXIT_DOMAIN };
    Ok(Success { results, human, warnings, exit_code })
}

/// Facet list of `complex` in the shared JSON format.
pub fn emit_complex(complex: &SimplicialComplex) -> String {
    let mut s = serde_json::to_string(&complex_file(complex)).expect("serializes");
    s.push('\n');
    s
}
