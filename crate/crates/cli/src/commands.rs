//! Command implementations. Each returns report lines and an exit status;
//! `main` only handles argument parsing and printing.

use wittbox_core::bounds::bound_report;
use wittbox_core::counting::count_zeros;
use wittbox_core::selftest::{run_structural, soundness_suite, SoundnessTally};
use wittbox_core::witt::{twisted_digit_polys, witt_op_polys};
use wittbox_core::{
    BoundOptions, CountConfig, DegreeReading, Integers, ProblemInstance, Status, WittGenRequest, WittOp,
};

use crate::error::{CliError, EXIT_ASSERTION, EXIT_OK};
use crate::instance::parse_instance;

pub const DEFAULT_SEED: u64 = 2024;

/// Report text and process exit status of a completed command.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Output {
    pub lines: Vec<String>,
    pub exit: i32,
}

impl Output {
    fn ok(lines: Vec<String>) -> Self {
        Self { lines, exit: EXIT_OK }
    }

    pub fn text(&self) -> String {
        let mut s = self.lines.join("\n");
        s.push('\n');
        s
    }
}

pub fn parse_kind(s: &str) -> Result<WittOp, CliError> {
    match s {
        "sum" | "S" => Ok(WittOp::Sum),
        "product" | "M" => Ok(WittOp::Product),
        other => Err(CliError::new("usage", format!("unknown kind `{other}` (sum|product)"))),
    }
}

/// Canonical renderings of P_0..P_n, or of the twisted digit polynomials.
pub fn witt_polys(p: u64, n: usize, r: usize, kind: WittOp, twisted: bool) -> Result<Output, CliError> {
    let req = WittGenRequest::new(p, n, r, kind)?;
    let polys = if twisted {
        twisted_digit_polys(&req)?
    } else {
        witt_op_polys(&req)?.as_ref().clone()
    };
    let symbol = if twisted {
        kind.symbol().to_lowercase()
    } else {
        kind.symbol().to_string()
    };
    let mut lines = vec![
        format!("p={p}"),
        format!("r={r}"),
        format!("kind={}", if kind == WittOp::Sum { "sum" } else { "product" }),
    ];
    for (k, f) in polys.iter().enumerate() {
        lines.push(format!("{symbol}_{k} = {}", f.render(&Integers)));
    }
    Ok(Output::ok(lines))
}

fn summary(inst: &ProblemInstance) -> Vec<String> {
    let f = inst.field();
    let mut lines = vec![
        format!("p={}", f.p()),
        format!("h={}", f.h()),
        format!("q={}", f.q()),
        format!("n={}", inst.n()),
        format!("m={}", inst.m()),
        format!("s={}", inst.system().len()),
        format!("precision={}", inst.precision()),
    ];
    for k in 0..inst.system().len() {
        lines.push(format!("f{}={}", k + 1, inst.render_congruence(k)));
    }
    for g in inst.boxspec().render() {
        lines.push(format!("box.{}", g.replacen(" = ", "=", 1)));
    }
    lines
}

pub fn load(text: &str) -> Result<ProblemInstance, CliError> {
    Ok(parse_instance(text)?.instance)
}

pub fn count(text: &str, cfg: &CountConfig) -> Result<Output, CliError> {
    let inst = load(text)?;
    let report = count_zeros(&inst, cfg)?;
    let mut lines = summary(&inst);
    lines.extend(report.lines());
    Ok(Output::ok(lines))
}

/// Bounds and hypotheses without counting.
pub fn bound(text: &str, opts: &BoundOptions) -> Result<Output, CliError> {
    let inst = load(text)?;
    let mut lines = summary(&inst);
    lines.extend(bound_report(&inst, None, opts).lines());
    Ok(Output::ok(lines))
}

/// Count, evaluate every applicable bound and check it against the count.
pub fn verify(text: &str, cfg: &CountConfig, opts: &BoundOptions) -> Result<Output, CliError> {
    let inst = load(text)?;
    let count = count_zeros(&inst, cfg)?;
    let report = bound_report(&inst, Some(&count), opts);
    let mut lines = summary(&inst);
    lines.extend(count.lines());
    lines.extend(report.lines());
    let exit = if report.status == Some(Status::Fail) {
        EXIT_ASSERTION
    } else {
        EXIT_OK
    };
    Ok(Output { lines, exit })
}

pub const EXAMPLE_41: &str = include_str!("../fixtures/example41.box");
pub const EXAMPLE_42: &str = include_str!("../fixtures/example42.box");
pub const EXAMPLE_43: &str = include_str!("../fixtures/example43.box");

/// Expected values for one bundled fixture.
struct Expected {
    name: &'static str,
    text: &'static str,
    cardinality: u64,
    ord_p: Option<u32>,
    close: bool,
    general: Option<u64>,
    status: Option<Status>,
}

const EXPECTED: [Expected; 3] = [
    Expected {
        name: "example41",
        text: EXAMPLE_41,
        cardinality: 30,
        ord_p: Some(1),
        close: true,
        general: Some(1),
        status: Some(Status::Pass),
    },
    Expected {
        name: "example42",
        text: EXAMPLE_42,
        cardinality: 32,
        ord_p: Some(5),
        close: true,
        general: Some(1),
        status: Some(Status::Pass),
    },
    Expected {
        name: "example43",
        text: EXAMPLE_43,
        cardinality: 30,
        ord_p: None,
        close: false,
        general: None,
        status: None,
    },
];

/// Runs the three bundled fixtures and asserts their known values.
pub fn bundled_examples(cfg: &CountConfig) -> Result<Output, CliError> {
    let mut lines = Vec::new();
    let mut all_ok = true;
    for ex in &EXPECTED {
        let inst = load(ex.text)?;
        let count = count_zeros(&inst, cfg)?;
        let report = bound_report(&inst, Some(&count), &BoundOptions::default());
        let close = inst.boxspec().closeness(inst.precision() as usize).holds;
        let general = report.value("general");
        let mut ok = count.cardinality == ex.cardinality && close == ex.close && general == ex.general;
        if let Some(e) = ex.ord_p {
            ok &= count.ord_p == wittbox_core::Valuation::Finite(e);
        }
        if let Some(s) = ex.status {
            ok &= report.status == Some(s);
        }
        all_ok &= ok;
        let name = ex.name;
        lines.push(format!("{name}.cardinality={}", count.cardinality));
        lines.push(format!("{name}.ord_p={}", count.ord_p));
        lines.push(format!("{name}.closeness={close}"));
        lines.push(format!(
            "{name}.bound.general={}",
            general.map_or_else(|| "none".to_string(), |v| v.to_string())
        ));
        if let Some(s) = report.status {
            lines.push(format!("{name}.status={s}"));
        }
        lines.push(format!("{name}.check={}", if ok { "PASS" } else { "FAIL" }));
    }
    lines.push(format!("examples={}", if all_ok { "PASS" } else { "FAIL" }));
    Ok(Output {
        lines,
        exit: if all_ok { EXIT_OK } else { EXIT_ASSERTION },
    })
}

fn tally_lines(reading: DegreeReading, tally: &SoundnessTally) -> Vec<String> {
    let r = reading.name();
    let mut lines = vec![format!("soundness.{r}.violations={}", tally.violations.len())];
    for (name, n) in &tally.checked {
        lines.push(format!("soundness.{r}.checked.{name}={n}"));
    }
    for v in &tally.violations {
        lines.push(format!("soundness.{r}.violation={v}"));
    }
    lines
}

/// The structural suites, plus the randomized soundness run when
/// `soundness_cases` is given.
pub fn selftest(seed: u64, soundness_cases: Option<usize>) -> Result<Output, CliError> {
    let suites = run_structural(seed)?;
    let mut ok = suites.iter().all(|s| s.passed());
    let mut lines = vec![format!("seed={seed}")];
    for s in &suites {
        lines.push(s.line());
        for f in &s.failures {
            lines.push(format!("failure.{}={f}", s.name));
        }
    }
    if let Some(cases) = soundness_cases {
        let out = soundness_suite(seed, cases)?;
        lines.push(format!("soundness.instances={}", out.instances));
        lines.extend(tally_lines(DegreeReading::Any, &out.any));
        lines.extend(tally_lines(DegreeReading::All, &out.all));
        lines.push(format!("soundness.discrepancies={}", out.discrepancies.len()));
        for d in &out.discrepancies {
            lines.push(format!("soundness.discrepancy={d}"));
        }
        let sound = out.any.violations.is_empty() && out.all.violations.is_empty();
        lines.push(format!("suite.soundness={}", if sound { "PASS" } else { "FAIL" }));
        ok &= sound;
    }
    lines.push(format!("selftest={}", if ok { "PASS" } else { "FAIL" }));
    Ok(Output {
        lines,
        exit: if ok { EXIT_OK } else { EXIT_ASSERTION },
    })
}
