use std::fs;
use std::path::Path;

use rayon::prelude::*;

use super::config::{Command, ExperimentConfig};
use crate::bessel::{asymptotic_bound, asymptotic_ratio, optimize_delta, BesselOrder};
use crate::compact::Interval;
use crate::fdm::{fdm_telegraph, FdmConfig};
use crate::heat::{gaussian_profile, heat_solve_convolution, Damping};
use crate::scaling::{diffusive_limit_study, prefactor, proof_decomposition_check};
use crate::telegraph::{telegraph_exact, CauchyProblem};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Cell {
    Int(i64),
    Real(f64),
}

impl Cell {
    /// Integers plainly, reals with 17 significant digits.
    pub fn render(&self) -> String {
        match self {
            Cell::Int(v) => v.to_string(),
            Cell::Real(v) => format!("{v:.16e}"),
        }
    }

    pub fn as_f64(&self) -> f64 {
        match *self {
            Cell::Int(v) => v as f64,
            Cell::Real(v) => v,
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Real(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CsvTable {
    pub header: Vec<String>,
    pub rows: Vec<Vec<Cell>>,
}

impl CsvTable {
    pub fn new(header: &[&str]) -> Self {
        Self {
            header: header.iter().map(|s| s.to_string()).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) -> Result<()> {
        if row.len() != self.header.len() {
            return Err(Error::domain(format!(
                "row has {} cells, header has {}",
                row.len(),
                self.header.len()
            )));
        }
        if let Some(bad) = row.iter().find(|c| !c.as_f64().is_finite()) {
            return Err(Error::domain(format!("non-finite CSV entry {bad:?}")));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let k = self.header.iter().position(|h| h == name)?;
        Some(self.rows.iter().map(|r| r[k].as_f64()).collect())
    }

    pub fn to_csv_string(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::domain(format!("csv serialization: {e}"));
        w.write_record(&self.header).map_err(io)?;
        for row in &self.rows {
            w.write_record(row.iter().map(Cell::render)).map_err(io)?;
        }
        let bytes = w
            .into_inner()
            .map_err(|e| Error::domain(format!("csv serialization: {e}")))?;
        Ok(String::from_utf8(bytes).expect("csv output is ASCII"))
    }

    pub fn write_to(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_csv_string()?).map_err(|source| Error::Io {
            path: path.display().to_string(),
            source,
        })
    }
}

fn params(cfg: &ExperimentConfig) -> String {
    match cfg.command {
        Command::Solve | Command::Fdm | Command::Heat | Command::Energy => {
            format!("mu = {}, t = {}", cfg.mu, cfg.t)
        }
        Command::LimitStudy => format!("mu = {}, t_list = {:?}", cfg.mu, cfg.t_list),
        Command::Decomposition => {
            format!(
                "mu = {}, l_list = {:?}, x_list = {:?}",
                cfg.mu, cfg.l_list, cfg.x_list
            )
        }
        Command::BesselCheck => {
            format!("nu_list = {:?}, bessel_x = {:?}", cfg.nu_list, cfg.bessel_x)
        }
    }
}

/// Runs the configured command and writes its table to `out_path` if set.
/// Identical configs give byte-identical output.
pub fn run_experiment(cfg: &ExperimentConfig) -> Result<Vec<CsvTable>> {
    cfg.validate()?;
    let table = dispatch(cfg).map_err(|e| Error::Experiment {
        command: cfg.command.to_string(),
        params: params(cfg),
        source: Box::new(e),
    })?;
    if let Some(path) = &cfg.out_path {
        table.write_to(path)?;
    }
    Ok(vec![table])
}

fn dispatch(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let problem = || CauchyProblem::new(cfg.mu, cfg.f.clone(), cfg.g.clone());
    match cfg.command {
        Command::Solve => {
            let p = problem()?;
            grid_table(cfg, "u_exact", |x| {
                telegraph_exact(&p, x, cfg.t, &cfg.quadrature)
            })
        }
        Command::Heat => {
            let mu = Damping::new(cfg.mu)?;
            let f0 = cfg.f.plus(&cfg.g.scaled(1.0 / cfg.mu));
            grid_table(cfg, "u_heat", |x| {
                heat_solve_convolution(mu, &f0, x, cfg.t, &cfg.quadrature)
            })
        }
        Command::Fdm => {
            let (u, _) = fdm_telegraph(&problem()?, &fdm_domain(cfg)?)?;
            grid_table(cfg, "u_fdm", |x| Ok(u.interpolate(x)))
        }
        Command::Energy => {
            let (_, trace) = fdm_telegraph(&problem()?, &fdm_domain(cfg)?)?;
            let mut table = CsvTable::new(&["t", "energy", "dissipation"]);
            for k in 0..trace.times.len() {
                table.push(vec![
                    trace.times[k].into(),
                    trace.energy[k].into(),
                    trace.dissipation[k].into(),
                ])?;
            }
            Ok(table)
        }
        Command::LimitStudy => {
            let r = diffusive_limit_study(&problem()?, &cfg.t_list, &cfg.grid, &cfg.quadrature)?;
            let mut table = CsvTable::new(&["t", "sup_dist", "l2_dist", "prefactor_M"]);
            for k in 0..r.t_values.len() {
                table.push(vec![
                    r.t_values[k].into(),
                    r.sup_dist[k].into(),
                    r.l2_dist[k].into(),
                    r.prefactor.into(),
                ])?;
            }
            Ok(table)
        }
        Command::Decomposition => {
            let p = problem()?;
            let mu = Damping::new(p.mu)?;
            let m = prefactor(&p, &cfg.quadrature)?;
            let mut table = CsvTable::new(&[
                "L",
                "x",
                "T_3_2",
                "T_2",
                "S_1_2",
                "S_1",
                "leading",
                "remainder",
                "M_fstar",
            ]);
            for &x in &cfg.x_list {
                for d in proof_decomposition_check(&p, x, &cfg.l_list, &cfg.quadrature)? {
                    table.push(vec![
                        d.l.into(),
                        d.x.into(),
                        d.t_three_halves.into(),
                        d.t_two.into(),
                        d.s_half.into(),
                        d.s_one.into(),
                        d.leading().into(),
                        d.remainder().into(),
                        (m * gaussian_profile(mu, x)).into(),
                    ])?;
                }
            }
            Ok(table)
        }
        Command::BesselCheck => bessel_table(cfg),
    }
}

/// `[x, t, <value>]` over the configured grid, evaluated in parallel.
fn grid_table<F>(cfg: &ExperimentConfig, name: &str, eval: F) -> Result<CsvTable>
where
    F: Fn(f64) -> Result<f64> + Sync,
{
    let nodes = cfg.grid.nodes();
    let values: Vec<f64> = nodes.par_iter().map(|&x| eval(x)).collect::<Result<_>>()?;
    let mut table = CsvTable::new(&["x", "t", name]);
    for (x, u) in nodes.into_iter().zip(values) {
        table.push(vec![x.into(), cfg.t.into(), u.into()])?;
    }
    Ok(table)
}

/// Output grid and data support, widened by the light cone plus a margin.
fn fdm_domain(cfg: &ExperimentConfig) -> Result<FdmConfig> {
    let out = Interval {
        lo: cfg.grid.x_min,
        hi: cfg.grid.x_max,
    };
    let hull = match cfg
        .f
        .support()
        .into_iter()
        .chain(cfg.g.support())
        .reduce(|a, b| a.hull(&b))
    {
        Some(s) => s.hull(&out),
        None => out,
    };
    let d = hull.widen(cfg.t + 1.0);
    let cells = ((d.hi - d.lo) / cfg.dx).ceil();
    FdmConfig::new(d.lo, d.lo + cells * cfg.dx, cfg.dx, cfg.cfl, cfg.t)
}

/// For each `(nu, x)`: the optimal `delta`, `|sqrt(2 pi x) e^{-x} I_nu(x) - 1|`,
/// the bound at the optimum, and whether the bound holds at every `delta` of
/// a uniform grid on `[0.01, 0.49]`.
fn bessel_table(cfg: &ExperimentConfig) -> Result<CsvTable> {
    let n = cfg.delta_points;
    let deltas: Vec<f64> = (0..n)
        .map(|k| 0.01 + 0.48 * k as f64 / (n - 1) as f64)
        .collect();
    let mut table = CsvTable::new(&["nu", "x", "delta_star", "lhs", "C_bound", "holds"]);
    for &nu in &cfg.nu_list {
        let order = BesselOrder::from(nu);
        for &x in &cfg.bessel_x {
            let lhs = (asymptotic_ratio(nu, x) - 1.0).abs();
            let (delta_star, c_star) = optimize_delta(order, x)?;
            let mut holds = lhs <= c_star;
            for &delta in &deltas {
                holds &= lhs <= asymptotic_bound(order, x, delta)?.value;
            }
            table.push(vec![
                i64::from(nu).into(),
                x.into(),
                delta_star.into(),
                lhs.into(),
                c_star.into(),
                i64::from(holds).into(),
            ])?;
        }
    }
    Ok(table)
}
