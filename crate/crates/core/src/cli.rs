//! File-driven verification runs and their line-oriented reports.
//!
//! A report is a header, one `CHECK <name> <params> <PASS|FAIL> [witness]`
//! line per check, then `LEDGER <key>=<value>` lines with the pinned sign
//! conventions. Nothing in it depends on time or hashing order, so equal
//! inputs give byte-identical reports.

use std::fmt::{self, Write as _};
use std::path::PathBuf;

use crate::ainf::{
    assoc_vs_delta_squared, associative_order, compat_check, induced_on_cohomology, AInfStructure,
    Order, OrderWitness,
};
use crate::algebra::{tuple_names, validate_algebra, GradedAlgebra, ValidationReport};
use crate::bar::{
    coderivation_square_report, shift_strict, strict_collapse_report, tk_equals_construction,
};
use crate::format::parse_algebra_file;
use crate::hochschild::{
    bv_identity_on_hh, check_connes_chain_map, hh_cohomology, hochschild_ainf_structure,
    FrobeniusData,
};
use crate::multiop::MultiOp;

/// Random samples per cochain degree in the chain-map check.
const CHAIN_MAP_SAMPLES: usize = 5;
/// Arity bound of the Stasheff sweep on cochains.
const HOCHSCHILD_ARITIES: usize = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, clap::ValueEnum)]
pub enum Command {
    Validate,
    Ainf,
    Order,
    Compat,
    Cohomology,
    Bar,
    Hochschild,
    All,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Ainf => "ainf",
            Command::Order => "order",
            Command::Compat => "compat",
            Command::Cohomology => "cohomology",
            Command::Bar => "bar",
            Command::Hochschild => "hochschild",
            Command::All => "all",
        }
    }

    pub fn parse(s: &str) -> Option<Command> {
        [
            Command::Validate,
            Command::Ainf,
            Command::Order,
            Command::Compat,
            Command::Cohomology,
            Command::Bar,
            Command::Hochschild,
            Command::All,
        ]
        .into_iter()
        .find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RunConfig {
    pub command: Command,
    pub input_path: PathBuf,
    pub max_arity: usize,
    pub max_word: usize,
    pub max_cochain: usize,
    pub seed: u64,
    pub report_path: Option<PathBuf>,
}

impl RunConfig {
    pub fn new(command: Command, input_path: impl Into<PathBuf>) -> Self {
        RunConfig {
            command,
            input_path: input_path.into(),
            max_arity: 6,
            max_word: 4,
            max_cochain: 4,
            seed: 0,
            report_path: None,
        }
    }

    fn check_bounds(&self) -> Result<(), RunError> {
        for (name, v) in [
            ("max-arity", self.max_arity),
            ("max-word", self.max_word),
            ("max-cochain", self.max_cochain),
        ] {
            if v == 0 {
                return Err(RunError::Input(format!("--{name} must be positive")));
            }
        }
        Ok(())
    }
}

/// Problems that stop a run before any check can be judged.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RunError {
    Input(String),
    Io(String),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        2
    }
}

impl fmt::Display for RunError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RunError::Input(m) => write!(f, "input error: {m}"),
            RunError::Io(m) => write!(f, "i/o error: {m}"),
        }
    }
}

impl std::error::Error for RunError {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub params: String,
    pub passed: bool,
    /// Result summary on success, witness on failure.
    pub detail: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Report {
    pub header: Vec<String>,
    pub checks: Vec<Check>,
    pub ledger: Vec<(String, String)>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    /// 0 if every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.passed() {
            0
        } else {
            1
        }
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn ledger_value(&self, key: &str) -> Option<&str> {
        self.ledger
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    fn push(
        &mut self,
        name: &str,
        params: String,
        passed: bool,
        detail: impl Into<String>,
    ) -> bool {
        self.checks.push(Check {
            name: name.to_string(),
            params,
            passed,
            detail: detail.into(),
        });
        passed
    }

    fn pass(&mut self, name: &str, params: String, detail: impl Into<String>) -> bool {
        self.push(name, params, true, detail)
    }

    fn fail(&mut self, name: &str, params: String, witness: impl Into<String>) -> bool {
        self.push(name, params, false, witness)
    }

    fn push_validation(
        &mut self,
        name: &str,
        params: String,
        r: &ValidationReport,
        ok: String,
    ) -> bool {
        match r.violations.first() {
            None => self.pass(name, params, ok),
            Some(v) => {
                let more = r.violations.len() - 1;
                let suffix = if more > 0 {
                    format!(" (+{more} more)")
                } else {
                    String::new()
                };
                self.fail(name, params, format!("{}{suffix}", violation_witness(v)))
            }
        }
    }

    fn record(&mut self, key: &str, value: impl Into<String>) {
        let value = value.into();
        match self.ledger.iter_mut().find(|(k, _)| k == key) {
            Some(entry) => entry.1 = value,
            None => self.ledger.push((key.to_string(), value)),
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&emit_report(self))
    }
}

fn violation_witness(v: &crate::algebra::Violation) -> String {
    let t: Vec<String> = v.tuple.iter().map(|i| i.to_string()).collect();
    format!("{} at=[{}]: {}", v.kind, t.join(","), v.message)
}

/// Renders the report text.
pub fn emit_report(report: &Report) -> String {
    let mut out = String::new();
    for h in &report.header {
        let _ = writeln!(out, "# {h}");
    }
    for c in &report.checks {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let params = if c.params.is_empty() {
            "-"
        } else {
            c.params.as_str()
        };
        let _ = write!(out, "CHECK {} {params} {status}", c.name);
        if !c.detail.is_empty() {
            let _ = write!(out, " {}", c.detail);
        }
        out.push('\n');
    }
    for (k, v) in &report.ledger {
        let _ = writeln!(out, "LEDGER {k}={v}");
    }
    out
}

/// Reads the input file, runs the command and writes the report file if one was asked for.
pub fn run(config: &RunConfig) -> Result<Report, RunError> {
    config.check_bounds()?;
    let text = std::fs::read_to_string(&config.input_path)
        .map_err(|e| RunError::Io(format!("{}: {e}", config.input_path.display())))?;
    let report = run_text(config, &text)?;
    if let Some(path) = &config.report_path {
        std::fs::write(path, emit_report(&report))
            .map_err(|e| RunError::Io(format!("{}: {e}", path.display())))?;
    }
    Ok(report)
}

/// Runs the command on algebra file contents.
pub fn run_text(config: &RunConfig, text: &str) -> Result<Report, RunError> {
    config.check_bounds()?;
    let alg = parse_algebra_file(text).map_err(|e| RunError::Input(e.to_string()))?;
    let input = config
        .input_path
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_default();
    let mut report = Report {
        header: vec![
            format!("deltainf {}", config.command.name()),
            format!("input={input} algebra={} dim={}", alg.name(), alg.dim()),
            format!(
                "seed={} max_arity={} max_word={} max_cochain={}",
                config.seed, config.max_arity, config.max_word, config.max_cochain
            ),
        ],
        ..Report::default()
    };
    let needs_delta = matches!(
        config.command,
        Command::Ainf | Command::Order | Command::Compat | Command::Cohomology
    );
    if needs_delta && alg.delta().is_none() {
        return Err(RunError::Input(format!(
            "`{}` needs a delta section",
            config.command.name()
        )));
    }
    if config.command == Command::Hochschild {
        if alg.pairing().is_none() {
            return Err(RunError::Input(
                "`hochschild` needs a pairing section".into(),
            ));
        }
        if (0..alg.dim()).any(|i| alg.degree(i) != 0) {
            return Err(RunError::Input(
                "`hochschild` needs an algebra in degree 0".into(),
            ));
        }
    }
    if !validate(&mut report, &alg) {
        return Ok(report);
    }
    match config.command {
        Command::Validate => {}
        Command::Ainf => ainf_suite(&mut report, &alg, config),
        Command::Order => {
            order_suite(&mut report, &alg, config);
        }
        Command::Compat => compat_suite(&mut report, &alg),
        Command::Cohomology => cohomology_suite(&mut report, &alg, config),
        Command::Bar => bar_suite(&mut report, &alg, config),
        Command::Hochschild => hochschild_suite(&mut report, &alg, config),
        Command::All => {
            if alg.delta().is_some() {
                ainf_suite(&mut report, &alg, config);
                if let Some(order) = order_suite(&mut report, &alg, config) {
                    if order <= 2 {
                        compat_suite(&mut report, &alg);
                    }
                }
                cohomology_suite(&mut report, &alg, config);
            }
            bar_suite(&mut report, &alg, config);
            let ungraded = (0..alg.dim()).all(|i| alg.degree(i) == 0);
            if alg.pairing().is_some() && ungraded {
                hochschild_suite(&mut report, &alg, config);
            }
        }
    }
    Ok(report)
}

fn validate(report: &mut Report, alg: &GradedAlgebra) -> bool {
    let r = validate_algebra(alg);
    report.push_validation(
        "validate_algebra",
        format!("dim={}", alg.dim()),
        &r,
        String::new(),
    )
}

fn delta_of(alg: &GradedAlgebra) -> &crate::operator::LinearOperator {
    alg.delta().expect("checked before dispatch")
}

fn square_zero(report: &mut Report, alg: &GradedAlgebra) -> bool {
    let delta = delta_of(alg);
    match crate::ainf::require_square_zero(delta) {
        Ok(()) => report.pass("delta_square_zero", String::new(), ""),
        Err(e) => report.fail("delta_square_zero", String::new(), e.to_string()),
    }
}

fn first_nonzero(basis: &crate::basis::GradedBasis, m: &MultiOp) -> Option<String> {
    m.first_nonzero().map(|(t, v)| {
        format!(
            "tuple={} value={}",
            tuple_names(basis, &t),
            basis.display(&v)
        )
    })
}

fn ainf_suite(report: &mut Report, alg: &GradedAlgebra, config: &RunConfig) {
    let delta = delta_of(alg);
    let n = config.max_arity;
    let params = format!("max_arity={n}");
    let basis = alg.basis();
    let mut witness = None;
    for k in 1..=n {
        match assoc_vs_delta_squared(alg, delta, k) {
            Ok(m) => {
                if let Some(w) = first_nonzero(basis, &m) {
                    witness = Some(format!("arity={k} {w}"));
                    break;
                }
            }
            Err(e) => {
                witness = Some(e.to_string());
                break;
            }
        }
    }
    match witness {
        None => report.pass("assoc_vs_delta_squared", params.clone(), ""),
        Some(w) => report.fail("assoc_vs_delta_squared", params.clone(), w),
    };
    if !square_zero(report, alg) {
        return;
    }
    match AInfStructure::from_delta(alg, delta, n) {
        Ok(s) => match s.first_stasheff_failure(n) {
            None => report.pass("stasheff", params, ""),
            Some((k, t, d)) => report.fail(
                "stasheff",
                params,
                format!(
                    "arity={k} tuple={} defect={}",
                    tuple_names(basis, &t),
                    basis.display(&d)
                ),
            ),
        },
        Err(e) => report.fail("stasheff", params, e.to_string()),
    };
}

fn order_suite(report: &mut Report, alg: &GradedAlgebra, config: &RunConfig) -> Option<usize> {
    let cap = config.max_arity;
    let params = format!("cap={cap}");
    match associative_order(alg, delta_of(alg), cap) {
        Ok(r) => match (r.order, r.witness) {
            (Order::Finite(k), _) => {
                report.pass("associative_order", params, format!("order={k}"));
                report.record("associative_order", k.to_string());
                Some(k)
            }
            (
                Order::ExceedsCap,
                OrderWitness::Nonzero {
                    arity,
                    tuple,
                    value,
                },
            ) => {
                let b = alg.basis();
                report.pass(
                    "associative_order",
                    params,
                    format!(
                        "order>{cap} arity={arity} tuple={} value={}",
                        tuple_names(b, &tuple),
                        b.display(&value)
                    ),
                );
                report.record("associative_order", format!(">{cap}"));
                None
            }
            (Order::ExceedsCap, OrderWitness::Vanishes { .. }) => {
                unreachable!("exceeding the cap has a nonzero witness")
            }
        },
        Err(e) => {
            report.fail("associative_order", params, e.to_string());
            None
        }
    }
}

fn compat_suite(report: &mut Report, alg: &GradedAlgebra) {
    match compat_check(alg, delta_of(alg)) {
        Ok(r) => {
            report.push_validation("compatibility", "order<=2".into(), &r, String::new());
        }
        Err(e) => {
            report.fail("compatibility", "order<=2".into(), e.to_string());
        }
    }
}

fn cohomology_suite(report: &mut Report, alg: &GradedAlgebra, config: &RunConfig) {
    let n = config.max_arity.max(2);
    let params = format!("max_arity={n}");
    match induced_on_cohomology(alg, delta_of(alg), n) {
        Ok(h) => {
            let ok = format!("classes={}", h.cohomology.len());
            report.push_validation("induced_on_cohomology", params, &h.report, ok);
        }
        Err(e) => {
            report.fail("induced_on_cohomology", params, e.to_string());
        }
    }
}

fn bar_suite(report: &mut Report, alg: &GradedAlgebra, config: &RunConfig) {
    let l = config.max_word;
    let input = match shift_strict(alg) {
        Ok(i) => {
            report.record(
                "bar_input",
                if alg.delta().is_some() {
                    "shifted_with_delta"
                } else {
                    "shifted"
                },
            );
            i
        }
        Err(first) => match shift_strict(&alg.without_delta()) {
            Ok(i) => {
                report.record("bar_input", "shifted_without_delta");
                i
            }
            Err(_) => {
                report.fail("bar_input", String::new(), first.to_string());
                return;
            }
        },
    };
    let params = format!("max_word={l}");
    let checks: [(&str, crate::error::Result<ValidationReport>); 3] = [
        ("coderivation_square", coderivation_square_report(&input, l)),
        (
            "tk_equals_construction",
            tk_equals_construction(&input, l, l),
        ),
        ("strict_collapse", strict_collapse_report(&input, l, l)),
    ];
    for (name, r) in checks {
        match r {
            Ok(r) => {
                report.push_validation(name, params.clone(), &r, String::new());
            }
            Err(e) => {
                report.fail(name, params.clone(), e.to_string());
            }
        }
    }
}

fn sign_text(s: i8) -> &'static str {
    if s < 0 {
        "-1"
    } else {
        "+1"
    }
}

fn hochschild_suite(report: &mut Report, alg: &GradedAlgebra, config: &RunConfig) {
    let c = config.max_cochain;
    let fd = match FrobeniusData::from_algebra(alg) {
        Ok(fd) => {
            report.pass("frobenius_pairing", String::new(), "");
            fd
        }
        Err(e) => {
            report.fail("frobenius_pairing", String::new(), e.to_string());
            return;
        }
    };
    let top = c.saturating_sub(1);
    match hh_cohomology(alg, top) {
        Ok(hh) => {
            let dims: Vec<String> = hh.dims().iter().map(|d| d.to_string()).collect();
            report.pass(
                "hochschild_cohomology",
                format!("max_degree={top}"),
                format!("dims={}", dims.join(",")),
            );
        }
        Err(e) => {
            report.fail(
                "hochschild_cohomology",
                format!("max_degree={top}"),
                e.to_string(),
            );
        }
    }
    let params = format!("max_cochain={c}");
    match check_connes_chain_map(&fd, c, CHAIN_MAP_SAMPLES, config.seed) {
        Ok(out) => {
            let eps = match out.epsilon {
                Some(e) => sign_text(e).to_string(),
                None if out.candidates.len() == 2 => "any".to_string(),
                None => "none".to_string(),
            };
            let ok = format!("epsilon={eps} cochains={}", out.cochains_tested);
            if report.push_validation("connes_chain_map", params.clone(), &out.report, ok) {
                report.record("epsilon", eps);
            }
        }
        Err(e) => {
            report.fail("connes_chain_map", params.clone(), e.to_string());
        }
    }
    let bv_params = format!("max_degree={c}");
    match bv_identity_on_hh(&fd, top, config.seed) {
        Ok(out) => {
            let reading = match out.passing.as_slice() {
                [] => "none".to_string(),
                [(r, _), ..] if out.reading.is_some() => r.name().to_string(),
                _ => "any".to_string(),
            };
            let kappa = out
                .kappa
                .map(|k| sign_text(k).to_string())
                .unwrap_or_else(|| "any".into());
            let ok = format!(
                "reading={reading} kappa={kappa} pairs={} nonzero={}",
                out.pairs_checked, out.nonzero_pairs
            );
            if report.push_validation("bv_identity", bv_params, &out.report, ok) {
                report.record("bv_reading", reading);
                report.record("bv_kappa", kappa);
            }
        }
        Err(e) => {
            report.fail("bv_identity", bv_params, e.to_string());
        }
    }
    let ainf_params = format!("max_cochain={c},max_arity={HOCHSCHILD_ARITIES}");
    match hochschild_ainf_structure(&fd, HOCHSCHILD_ARITIES, c, config.seed) {
        Ok(s) => {
            let cmp = &s.comparison;
            let sigma = cmp.sigma_global.map(sign_text).unwrap_or("any");
            let law = cmp.sigma_law.map(sign_text).unwrap_or("any");
            let ok = format!(
                "grading={} sigma={sigma} pairs={} m3_nonzero={}",
                s.grading.name(),
                cmp.m2_pairs_nonzero,
                cmp.m3_nonzero
            );
            let varying = cmp.m2_pairs_nonzero > 0 && cmp.sigma_global.is_none();
            let mut r = s.report.clone();
            if varying {
                r.push(
                    "m2_sign",
                    vec![],
                    None,
                    "no single sign relates m_2 and the bracket".into(),
                );
            }
            if report.push_validation("hochschild_ainf", ainf_params, &r, ok) {
                report.record("grading", s.grading.name());
                report.record("sigma", sigma);
                report.record("sigma_law", law);
                report.record("m3_nonzero", cmp.m3_nonzero.to_string());
            }
        }
        Err(e) => {
            report.fail("hochschild_ainf", ainf_params, e.to_string());
        }
    }
}
