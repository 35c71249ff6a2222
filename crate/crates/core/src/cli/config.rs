//! `key = value` experiment files.
//!
//! ```text
//! # bump released from rest
//! command = limit-study
//! mu = 1.0
//! f = bump 0 1 1
//! g = zero
//! t_list = 25, 100, 400
//! ```
//!
//! Data descriptors are `zero`, `bump c hw amp`, `gaussian c hw amp`,
//! `indicator c hw amp`, `table c hw amp v0,v1,...`, and sums of these
//! joined by `+`.

use std::collections::HashMap;
use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::compact::CompactFunction;
use crate::quadrature::QuadratureSpec;
use crate::scaling::{GridSpec, DEFAULT_L_LIST};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Command {
    Solve,
    Fdm,
    Heat,
    LimitStudy,
    Decomposition,
    BesselCheck,
    Energy,
}

impl Command {
    pub const ALL: [Command; 7] = [
        Command::Solve,
        Command::Fdm,
        Command::Heat,
        Command::LimitStudy,
        Command::Decomposition,
        Command::BesselCheck,
        Command::Energy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Fdm => "fdm",
            Command::Heat => "heat",
            Command::LimitStudy => "limit-study",
            Command::Decomposition => "decomposition",
            Command::BesselCheck => "bessel-check",
            Command::Energy => "energy",
        }
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Command {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Command::ALL
            .into_iter()
            .find(|c| c.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = Command::ALL.iter().map(|c| c.name()).collect();
                Error::config(format!(
                    "unknown command '{s}', expected one of {}",
                    names.join(", ")
                ))
            })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub command: Command,
    pub mu: f64,
    pub f: CompactFunction,
    pub g: CompactFunction,
    pub grid: GridSpec,
    /// Evaluation time for `solve`, `fdm`, `heat` and `energy`.
    pub t: f64,
    pub t_list: Vec<f64>,
    pub l_list: Vec<f64>,
    /// Points for `decomposition`.
    pub x_list: Vec<f64>,
    pub nu_list: Vec<u32>,
    /// Arguments for `bessel-check`.
    pub bessel_x: Vec<f64>,
    /// Size of the uniform `delta` grid on `[0.01, 0.49]` checked by `bessel-check`.
    pub delta_points: usize,
    pub dx: f64,
    pub cfl: f64,
    pub quadrature: QuadratureSpec,
    pub out_path: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(command: Command) -> Self {
        Self {
            command,
            mu: 1.0,
            f: CompactFunction::Zero,
            g: CompactFunction::Zero,
            grid: GridSpec::default(),
            t: 1.0,
            t_list: vec![25.0, 100.0, 400.0],
            l_list: DEFAULT_L_LIST.to_vec(),
            x_list: vec![0.0, 0.5, 1.0],
            nu_list: vec![0, 1],
            bessel_x: vec![10.0, 20.0, 50.0, 100.0, 200.0, 500.0],
            delta_points: 50,
            dx: 1.0 / 200.0,
            cfl: 0.5,
            quadrature: QuadratureSpec::default(),
            out_path: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.mu >= 0.0 && self.mu.is_finite()) {
            return Err(Error::config(format!("mu must be ≥ 0, got {}", self.mu)));
        }
        self.grid.validate()?;
        if !(self.t > 0.0 && self.t.is_finite()) {
            return Err(Error::config(format!("t must be > 0, got {}", self.t)));
        }
        let finite = |name: &str, v: &[f64]| -> Result<()> {
            if v.is_empty() || v.iter().any(|x| !x.is_finite()) {
                return Err(Error::config(format!(
                    "{name} must be a non-empty list of finite numbers"
                )));
            }
            Ok(())
        };
        finite("t_list", &self.t_list)?;
        finite("l_list", &self.l_list)?;
        finite("x_list", &self.x_list)?;
        finite("bessel_x", &self.bessel_x)?;
        if self.t_list.iter().any(|t| *t <= 0.0) || self.t_list.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::config(
                "t_list must be positive and strictly increasing",
            ));
        }
        if self.l_list.iter().any(|l| *l <= 1.0) {
            return Err(Error::config("l_list entries must be > 1"));
        }
        if self.bessel_x.iter().any(|x| *x <= 0.0) {
            return Err(Error::config("bessel_x entries must be > 0"));
        }
        if self.nu_list.is_empty() {
            return Err(Error::config("nu_list must not be empty"));
        }
        if self.delta_points < 2 {
            return Err(Error::config("delta_points must be ≥ 2"));
        }
        if !(self.dx > 0.0 && self.dx.is_finite()) {
            return Err(Error::config(format!("dx must be > 0, got {}", self.dx)));
        }
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(Error::config(format!(
                "cfl must be in (0, 1], got {}",
                self.cfl
            )));
        }
        self.quadrature
            .validate()
            .map_err(|e| Error::config(format!("tolerances: {e}")))?;
        if matches!(
            self.command,
            Command::Heat | Command::LimitStudy | Command::Decomposition
        ) && self.mu == 0.0
        {
            return Err(Error::config(format!("{} needs mu > 0", self.command)));
        }
        Ok(())
    }
}

const KEYS: [&str; 20] = [
    "command",
    "mu",
    "f",
    "g",
    "x_min",
    "x_max",
    "points",
    "t",
    "t_list",
    "l_list",
    "x_list",
    "nu_list",
    "bessel_x",
    "delta_points",
    "dx",
    "cfl",
    "abs_tol",
    "rel_tol",
    "max_subdivisions",
    "out",
];

fn at_line<T: FromStr>(key: &str, value: &str, line: usize) -> Result<T> {
    value.parse().map_err(|_| {
        Error::config(format!(
            "line {line}: cannot parse '{value}' for key '{key}'"
        ))
    })
}

fn list<T: FromStr>(key: &str, value: &str, line: usize) -> Result<Vec<T>> {
    value
        .split(',')
        .map(|s| at_line(key, s.trim(), line))
        .collect()
}

fn number(value: &str) -> Result<f64> {
    value
        .parse()
        .map_err(|_| Error::config(format!("expected a number, got '{value}'")))
}

/// Parses one data descriptor.
pub fn parse_function(text: &str) -> Result<CompactFunction> {
    let mut terms = Vec::new();
    for term in text.split('+') {
        let words: Vec<&str> = term.split_whitespace().collect();
        let Some((&kind, args)) = words.split_first() else {
            return Err(Error::config(format!(
                "empty term in function descriptor '{text}'"
            )));
        };
        if kind == "zero" {
            if !args.is_empty() {
                return Err(Error::config("'zero' takes no arguments"));
            }
            terms.push(CompactFunction::Zero);
            continue;
        }
        let expected = if kind == "table" { 4 } else { 3 };
        if args.len() != expected {
            return Err(Error::config(format!(
                "'{kind}' takes {expected} arguments, got {}",
                args.len()
            )));
        }
        let (c, hw, amp) = (number(args[0])?, number(args[1])?, number(args[2])?);
        terms.push(match kind {
            "bump" => CompactFunction::bump(c, hw, amp)?,
            "gaussian" => CompactFunction::truncated_gaussian(c, hw, amp)?,
            "indicator" => CompactFunction::indicator(c, hw, amp)?,
            "table" => {
                let values = args[3].split(',').map(number).collect::<Result<_>>()?;
                CompactFunction::table(c, hw, amp, values)?
            }
            other => {
                return Err(Error::config(format!(
                    "unknown function kind '{other}', expected zero, bump, gaussian, indicator or table"
                )))
            }
        });
    }
    terms.retain(|t| !t.is_zero());
    Ok(match terms.len() {
        0 => CompactFunction::Zero,
        1 => terms.pop().unwrap(),
        _ => CompactFunction::Sum(terms),
    })
}

/// Parses and validates an experiment file. Unknown and repeated keys are
/// rejected with their line number.
pub fn parse_config(text: &str) -> Result<ExperimentConfig> {
    let mut entries: HashMap<&str, (&str, usize)> = HashMap::new();
    for (idx, raw) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let Some((key, value)) = content.split_once('=') else {
            return Err(Error::config(format!(
                "line {line}: expected 'key = value', got '{content}'"
            )));
        };
        let (key, value) = (key.trim(), value.trim());
        if !KEYS.contains(&key) {
            return Err(Error::config(format!("unknown key '{key}' at line {line}")));
        }
        if value.is_empty() {
            return Err(Error::config(format!(
                "line {line}: key '{key}' has no value"
            )));
        }
        if entries.insert(key, (value, line)).is_some() {
            return Err(Error::config(format!(
                "duplicate key '{key}' at line {line}"
            )));
        }
    }

    let Some(&(command, line)) = entries.get("command") else {
        return Err(Error::config("missing required key 'command'"));
    };
    let command: Command = command
        .parse()
        .map_err(|e: Error| Error::config(format!("line {line}: {e}")))?;
    let mut cfg = ExperimentConfig::new(command);
    let mut abs_tol = cfg.quadrature.abs_tol;
    let mut rel_tol = cfg.quadrature.rel_tol;
    let mut max_sub = cfg.quadrature.max_subdivisions;

    for (&key, &(value, line)) in &entries {
        let with_line = |e: Error| Error::config(format!("line {line}, key '{key}': {e}"));
        match key {
            "command" => {}
            "mu" => cfg.mu = at_line(key, value, line)?,
            "f" => cfg.f = parse_function(value).map_err(with_line)?,
            "g" => cfg.g = parse_function(value).map_err(with_line)?,
            "x_min" => cfg.grid.x_min = at_line(key, value, line)?,
            "x_max" => cfg.grid.x_max = at_line(key, value, line)?,
            "points" => cfg.grid.points = at_line(key, value, line)?,
            "t" => cfg.t = at_line(key, value, line)?,
            "t_list" => cfg.t_list = list(key, value, line)?,
            "l_list" => cfg.l_list = list(key, value, line)?,
            "x_list" => cfg.x_list = list(key, value, line)?,
            "nu_list" => cfg.nu_list = list(key, value, line)?,
            "bessel_x" => cfg.bessel_x = list(key, value, line)?,
            "delta_points" => cfg.delta_points = at_line(key, value, line)?,
            "dx" => cfg.dx = at_line(key, value, line)?,
            "cfl" => cfg.cfl = at_line(key, value, line)?,
            "abs_tol" => abs_tol = at_line(key, value, line)?,
            "rel_tol" => rel_tol = at_line(key, value, line)?,
            "max_subdivisions" => max_sub = at_line(key, value, line)?,
            "out" => cfg.out_path = Some(PathBuf::from(value)),
            _ => unreachable!("key list and match arms disagree"),
        }
    }
    cfg.quadrature = QuadratureSpec {
        abs_tol,
        rel_tol,
        max_subdivisions: max_sub,
    };
    cfg.validate()?;
    Ok(cfg)
}
