//! Instance files: `[ring]`, `[problem]`, `[system]` and optional `[box]`
//! sections of `key = value` lines, with `#` comments.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use wittbox_core::boxes::box_vars;
use wittbox_core::counting::{render_integer_poly, system_vars};
use wittbox_core::expr::parse_poly;
use wittbox_core::{BoxSpec, FieldParams, Fq, FqElem, MultiPoly, ProblemInstance, Ring, Vars};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
enum Section {
    Ring,
    Problem,
    System,
    Box,
}

impl Section {
    fn parse(name: &str) -> Option<Self> {
        match name {
            "ring" => Some(Section::Ring),
            "problem" => Some(Section::Problem),
            "system" => Some(Section::System),
            "box" => Some(Section::Box),
            _ => None,
        }
    }
}

/// A source line with its 1-based number.
#[derive(Debug, Clone)]
struct Entry {
    line: usize,
    key: String,
    value: String,
}

/// A parsed, validated instance file.
#[derive(Debug, Clone)]
pub struct InstanceFile {
    pub instance: ProblemInstance,
    /// The system as written, before digit decomposition.
    pub integer_system: Vec<(MultiPoly<BigInt>, u32)>,
}

fn err(line: usize, kind: &'static str, message: impl Into<String>) -> CliError {
    CliError::new(kind, message).at_line(line)
}

fn lift(line: usize, e: wittbox_core::Error) -> CliError {
    CliError::from(e).at_line(line)
}

fn split_sections(text: &str) -> Result<BTreeMap<Section, Vec<Entry>>, CliError> {
    let mut sections: BTreeMap<Section, Vec<Entry>> = BTreeMap::new();
    let mut current: Option<Section> = None;
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let body = raw.split('#').next().unwrap_or("").trim();
        if body.is_empty() {
            continue;
        }
        if let Some(name) = body.strip_prefix('[').and_then(|b| b.strip_suffix(']')) {
            let sec = Section::parse(name.trim())
                .ok_or_else(|| err(line, "parse", format!("unknown section [{}]", name.trim())))?;
            if sections.contains_key(&sec) {
                return Err(err(line, "parse", format!("duplicate section [{}]", name.trim())));
            }
            sections.insert(sec, Vec::new());
            current = Some(sec);
            continue;
        }
        let sec = current.ok_or_else(|| err(line, "parse", "content before the first section header"))?;
        let (key, value) = body
            .split_once('=')
            .ok_or_else(|| err(line, "parse", "expected `key = value`"))?;
        sections.get_mut(&sec).expect("section exists").push(Entry {
            line,
            key: key.trim().to_string(),
            value: value.trim().to_string(),
        });
    }
    Ok(sections)
}

/// Scalar `key = value` settings of one section, rejecting unknown and
/// repeated keys.
fn settings<'a>(entries: &'a [Entry], allowed: &[&str], section: &str) -> Result<BTreeMap<&'a str, &'a Entry>, CliError> {
    let mut out = BTreeMap::new();
    for e in entries {
        if !allowed.contains(&e.key.as_str()) {
            return Err(err(e.line, "parse", format!("unknown key `{}` in [{section}]", e.key)));
        }
        if out.insert(e.key.as_str(), e).is_some() {
            return Err(err(e.line, "parse", format!("duplicate key `{}`", e.key)));
        }
    }
    Ok(out)
}

fn number<T: std::str::FromStr>(e: &Entry) -> Result<T, CliError> {
    e.value
        .parse()
        .map_err(|_| err(e.line, "parse", format!("`{}` expects a nonnegative integer, got `{}`", e.key, e.value)))
}

fn required<'a>(map: &BTreeMap<&str, &'a Entry>, key: &str, section: &str, line: usize) -> Result<&'a Entry, CliError> {
    map.get(key)
        .copied()
        .ok_or_else(|| err(line, "parse", format!("[{section}] is missing `{key}`")))
}

/// Coefficients of a polynomial in `t`, constant term first.
fn modulus_coeffs(e: &Entry, p: u64) -> Result<Vec<u64>, CliError> {
    let poly = parse_poly(&e.value, &Vars::new(["t"])).map_err(|x| lift(e.line, x))?;
    let len = poly.total_degree() as usize + 1;
    let mut out = vec![0u64; len];
    let pb = BigInt::from(p);
    for (mono, c) in poly.terms() {
        let r = ((c % &pb) + &pb) % &pb;
        out[mono.exps()[0] as usize] = u64::try_from(&r).expect("residue below p");
    }
    Ok(out)
}

fn parse_field(entries: &[Entry], header_line: usize) -> Result<Fq, CliError> {
    let map = settings(entries, &["p", "h", "modulus"], "ring")?;
    let p_entry = required(&map, "p", "ring", header_line)?;
    let p: u64 = number(p_entry)?;
    let h: usize = match map.get("h") {
        Some(e) => number(e)?,
        None => 1,
    };
    let modulus = match map.get("modulus") {
        Some(e) => Some(modulus_coeffs(e, p)?),
        None => None,
    };
    let line = map.get("modulus").map_or(p_entry.line, |e| e.line);
    let params = FieldParams::new(p, h, modulus).map_err(|x| lift(line, x))?;
    Ok(Fq::new(params))
}

/// `f<k> = <poly> mod p^<mk>` lines; labels must run f1, f2, ... in order.
fn parse_system(entries: &[Entry], n: usize) -> Result<Vec<(MultiPoly<BigInt>, u32)>, CliError> {
    let vars = system_vars(n);
    let mut out = Vec::new();
    for (k, e) in entries.iter().enumerate() {
        let expected = format!("f{}", k + 1);
        if e.key != expected {
            return Err(err(e.line, "parse", format!("expected label `{expected}`, got `{}`", e.key)));
        }
        let (expr, modulus) = e
            .value
            .rsplit_once("mod")
            .ok_or_else(|| err(e.line, "parse", "expected `<poly> mod p^<k>`"))?;
        let mk = modulus
            .trim()
            .strip_prefix("p^")
            .and_then(|x| x.trim().parse::<u32>().ok())
            .ok_or_else(|| err(e.line, "parse", format!("bad modulus `{}`, expected `p^<k>`", modulus.trim())))?;
        let f = parse_poly(expr.trim(), &vars).map_err(|x| lift(e.line, x))?;
        out.push((f, mk));
    }
    if out.is_empty() {
        return Err(CliError::new("validation", "[system] has no congruences"));
    }
    Ok(out)
}

fn parse_generator_key(e: &Entry) -> Result<(usize, usize), CliError> {
    let bad = || err(e.line, "parse", format!("expected `g[i][j]`, got `{}`", e.key));
    let rest = e.key.strip_prefix("g[").ok_or_else(bad)?;
    let (i, rest) = rest.split_once("][").ok_or_else(bad)?;
    let j = rest.strip_suffix(']').ok_or_else(bad)?;
    Ok((i.trim().parse().map_err(|_| bad())?, j.trim().parse().map_err(|_| bad())?))
}

/// Generator over F_q: integer coefficients, with `t` standing for the
/// generator of F_q over F_p.
fn parse_generator(e: &Entry, field: &Fq, vars: &Vars) -> Result<MultiPoly<FqElem>, CliError> {
    let mut names: Vec<String> = vars.names().to_vec();
    names.push("t".into());
    let with_t = Vars::new(names);
    let poly = parse_poly(&e.value, &with_t).map_err(|x| lift(e.line, x))?;
    let t_idx = vars.len();
    if field.h() == 1 && poly.degree_in(t_idx) > 0 {
        return Err(err(e.line, "parse", "`t` is not available in a prime field"));
    }
    let over_field = poly.map_coeffs(field, |c| field.from_int(c));
    let specialized = over_field.specialize(t_idx, &field.t(), field);
    specialized.with_vars(vars).map_err(|x| lift(e.line, x))
}

/// Parses and validates an instance file.
pub fn parse_instance(text: &str) -> Result<InstanceFile, CliError> {
    let sections = split_sections(text)?;
    let header = |s: Section| -> usize {
        let name = match s {
            Section::Ring => "[ring]",
            Section::Problem => "[problem]",
            Section::System => "[system]",
            Section::Box => "[box]",
        };
        text.lines().position(|l| l.trim() == name).map_or(0, |i| i + 1)
    };
    let ring = sections
        .get(&Section::Ring)
        .ok_or_else(|| CliError::new("parse", "missing [ring] section"))?;
    let field = parse_field(ring, header(Section::Ring))?;

    let problem = sections
        .get(&Section::Problem)
        .ok_or_else(|| CliError::new("parse", "missing [problem] section"))?;
    let map = settings(problem, &["n", "m"], "problem")?;
    let n_entry = required(&map, "n", "problem", header(Section::Problem))?;
    let m_entry = required(&map, "m", "problem", header(Section::Problem))?;
    let n: usize = number(n_entry)?;
    let m: usize = number(m_entry)?;

    let system = sections
        .get(&Section::System)
        .ok_or_else(|| CliError::new("parse", "missing [system] section"))?;
    let integer_system = parse_system(system, n)?;

    let vars = box_vars(n, m);
    let mut generators = Vec::new();
    for e in sections.get(&Section::Box).map(Vec::as_slice).unwrap_or(&[]) {
        let key = parse_generator_key(e)?;
        if generators.iter().any(|(k, _)| *k == key) {
            return Err(err(e.line, "validation", format!("duplicate generator `{}`", e.key)));
        }
        generators.push((key, parse_generator(e, &field, &vars)?));
    }
    let boxspec = BoxSpec::new(field, n, m, generators).map_err(|x| {
        let line = sections.get(&Section::Box).and_then(|b| b.first()).map(|e| e.line);
        let line = line.unwrap_or_else(|| n_entry.line.max(m_entry.line));
        lift(line, x)
    })?;
    let instance = ProblemInstance::from_integer_system(boxspec, integer_system.clone())
        .map_err(|x| lift(system.first().map_or(header(Section::System), |e| e.line), x))?;
    Ok(InstanceFile {
        instance,
        integer_system,
    })
}

/// Canonical text of an instance with an integer system; parsing it back
/// yields the same instance.
pub fn render_instance(file: &InstanceFile) -> String {
    let inst = &file.instance;
    let field = inst.field();
    let mut out = vec!["[ring]".to_string(), format!("p = {}", field.p()), format!("h = {}", field.h())];
    if field.h() > 1 {
        let terms: Vec<String> = field
            .params()
            .modulus()
            .iter()
            .enumerate()
            .rev()
            .filter(|(_, &c)| c != 0)
            .map(|(e, &c)| match (e, c) {
                (0, c) => c.to_string(),
                (e, 1) => format!("t^{e}"),
                (e, c) => format!("{c}*t^{e}"),
            })
            .collect();
        out.push(format!("modulus = {}", terms.join(" + ")));
    }
    out.push(String::new());
    out.push("[problem]".into());
    out.push(format!("n = {}", inst.n()));
    out.push(format!("m = {}", inst.m()));
    out.push(String::new());
    out.push("[system]".into());
    for (k, (f, mk)) in file.integer_system.iter().enumerate() {
        out.push(format!("f{} = {} mod p^{mk}", k + 1, render_integer_poly(f)));
    }
    let gens = inst.boxspec().generators();
    if !gens.is_empty() {
        out.push(String::new());
        out.push("[box]".into());
        for line in inst.boxspec().render() {
            out.push(line);
        }
    }
    out.push(String::new());
    out.join("\n")
}
