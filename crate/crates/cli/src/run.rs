//! Command dispatch and CSV output.

use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use weno_core::analysis::{
    adr_sweep, collect_weight_trace, derivative_accuracy_table, ek_table_config, frozen_gste_field,
    weight_relative_error, AdrParams, WeightTrace, DEFAULT_RESOLUTIONS,
};
use weno_core::euler::{cons_to_prim, cons_to_prim_2d};
use weno_core::problems::{
    gste_exact, riemann_reference, setup_dmr, setup_euler1d, setup_gste, setup_rti, ProblemId,
    ProblemSpec, TestFunction, Triangle,
};
use weno_core::solver::{integrate, ReconstructionMode, TimeControls};
use weno_core::weno::{SchemeConfig, SchemeKind};

use crate::config::{Command, RunConfig};
use crate::error::CliError;

/// Schemes tabulated by `ek-table`, in table order.
pub const EK_SCHEMES: [SchemeKind; 7] = [
    SchemeKind::Js,
    SchemeKind::Jsc,
    SchemeKind::ZPlus,
    SchemeKind::Z,
    SchemeKind::C,
    SchemeKind::Zc,
    SchemeKind::ZcPlus,
];

#[derive(Debug, Clone, PartialEq)]
pub struct RunSummary {
    pub path: PathBuf,
    pub rows: usize,
}

fn missing(key: &str) -> CliError {
    CliError::Config(format!("missing required key '{key}'"))
}

/// Fill every default the command needs, so the recorded config is complete.
pub fn resolve(cfg: &RunConfig) -> Result<RunConfig, CliError> {
    let mut r = cfg.clone();
    let command = r.command.ok_or_else(|| missing("command"))?;
    r.scheme.get_or_insert(SchemeKind::Z);
    match command {
        Command::Solve => {
            let id = r.problem.ok_or_else(|| missing("problem"))?;
            if matches!(
                id,
                ProblemId::AccuracyF0 | ProblemId::AccuracyF1 | ProblemId::AccuracyF2
            ) {
                return Err(CliError::Config(format!(
                    "problem '{id}' is a derivative test; use the accuracy command"
                )));
            }
            problem_defaults(&mut r, id);
        }
        Command::Accuracy => {
            let from_problem = match r.problem {
                Some(ProblemId::AccuracyF0) => Some(TestFunction::F0),
                Some(ProblemId::AccuracyF1) => Some(TestFunction::F1),
                Some(ProblemId::AccuracyF2) => Some(TestFunction::F2),
                Some(other) => {
                    return Err(CliError::Config(format!(
                        "problem '{other}' has no derivative test"
                    )))
                }
                None => None,
            };
            let f = *r
                .function
                .get_or_insert(from_problem.unwrap_or(TestFunction::F0));
            r.problem = Some(f.problem());
            r.resolutions
                .get_or_insert_with(|| DEFAULT_RESOLUTIONS.to_vec());
        }
        Command::Adr => {
            let d = AdrParams::default();
            r.n_points.get_or_insert(d.n_points);
            r.cfl.get_or_insert(d.cfl);
            if let Some(dt) = d.dt_probe {
                r.dt_probe.get_or_insert(dt);
            }
        }
        Command::EkTable => {
            let id = *r.problem.get_or_insert(ProblemId::Gste);
            if id != ProblemId::Gste {
                return Err(CliError::Config(
                    "ek-table runs on the gste field only".into(),
                ));
            }
            problem_defaults(&mut r, id);
        }
        Command::Weights | Command::Distribution => {
            let default = if command == Command::Weights {
                ProblemId::Gste
            } else {
                ProblemId::TitarevToro
            };
            let id = *r.problem.get_or_insert(default);
            if !(id == ProblemId::Gste || id.is_euler_1d()) {
                return Err(CliError::Config(format!(
                    "weight traces need a 1D problem, got '{id}'"
                )));
            }
            problem_defaults(&mut r, id);
            let t_final = r.t_final.unwrap_or(0.0);
            r.record_times.get_or_insert_with(|| {
                if command == Command::Distribution {
                    // every half time unit, ending at t_final
                    let k = (t_final / 0.5 + 1e-9).floor() as usize;
                    (0..=k).map(|i| i as f64 * 0.5).collect()
                } else {
                    vec![t_final]
                }
            });
        }
    }
    if r.output.is_none() {
        r.output = Some(default_output(&r));
    }
    Ok(r)
}

fn problem_defaults(r: &mut RunConfig, id: ProblemId) {
    let spec = ProblemSpec::get(id);
    if id.is_euler_2d() {
        r.nx.get_or_insert(spec.n);
        r.ny.get_or_insert(spec.ny.unwrap_or(spec.n));
    } else {
        r.n.get_or_insert(spec.n);
    }
    r.cfl.get_or_insert(spec.cfl);
    r.t_final.get_or_insert(spec.t_final);
    if id == ProblemId::Gste {
        r.triangle.get_or_insert(Triangle::default());
    } else {
        r.mode.get_or_insert(ReconstructionMode::default());
    }
}

fn default_output(r: &RunConfig) -> String {
    let scheme = r.scheme.map(|s| s.id()).unwrap_or("z");
    let problem = r.problem.map(|p| p.id()).unwrap_or("none");
    match r.command {
        Some(Command::Solve) => format!("{problem}_{scheme}.csv"),
        Some(Command::Accuracy) => {
            let f = r.function.map(|f| f.id()).unwrap_or("f0");
            format!("accuracy_{f}_{scheme}.csv")
        }
        Some(Command::Adr) => format!("adr_{scheme}.csv"),
        Some(Command::Weights) => format!("weights_{problem}_{scheme}.csv"),
        Some(Command::EkTable) => "ek_table.csv".to_string(),
        Some(Command::Distribution) => format!("distribution_{problem}_{scheme}.csv"),
        None => "out.csv".to_string(),
    }
}

fn scheme_config(r: &RunConfig, kind: SchemeKind) -> SchemeConfig {
    let mut s = SchemeConfig::new(kind);
    if let Some(e) = r.epsilon {
        s = s.with_epsilon(e);
    }
    if let Some(p) = r.p {
        s = s.with_p(p);
    }
    if let Some(eta) = r.eta {
        s = s.with_eta(eta);
    }
    if let Some(c) = r.c {
        s = s.with_c(c);
    }
    s
}

/// 17 significant digits.
pub fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn write_csv(
    path: &Path,
    r: &RunConfig,
    header: &[&str],
    rows: &[Vec<String>],
) -> Result<usize, CliError> {
    let io = |source| CliError::Io {
        path: path.display().to_string(),
        source,
    };
    let mut out = BufWriter::new(File::create(path).map_err(io)?);
    writeln!(out, "# weno-lab {}", r.to_line()).map_err(io)?;
    {
        let mut w = csv::Writer::from_writer(&mut out);
        w.write_record(header)?;
        for row in rows {
            w.write_record(row)?;
        }
        w.flush().map_err(io)?;
    }
    out.flush().map_err(io)?;
    Ok(rows.len())
}

fn need<T: Copy>(v: Option<T>, key: &str) -> Result<T, CliError> {
    v.ok_or_else(|| missing(key))
}

/// Execute a configuration and write its CSV artifact.
pub fn run(cfg: &RunConfig) -> Result<RunSummary, CliError> {
    let r = resolve(cfg)?;
    let command = need(r.command, "command")?;
    let (header, rows): (Vec<&str>, Vec<Vec<String>>) = match command {
        Command::Solve => solve(&r)?,
        Command::Accuracy => accuracy(&r)?,
        Command::Adr => adr(&r)?,
        Command::EkTable => ek_table(&r)?,
        Command::Weights | Command::Distribution => weights(&r)?,
    };
    let path = PathBuf::from(r.output.clone().ok_or_else(|| missing("output"))?);
    let n = write_csv(&path, &r, &header, &rows)?;
    Ok(RunSummary { path, rows: n })
}

type Table = (Vec<&'static str>, Vec<Vec<String>>);

fn solve(r: &RunConfig) -> Result<Table, CliError> {
    let id = need(r.problem, "problem")?;
    let scheme = scheme_config(r, need(r.scheme, "scheme")?);
    let cfl = need(r.cfl, "cfl")?;
    let t_final = need(r.t_final, "t_final")?;
    let controls = TimeControls::new(cfl, t_final);
    if id == ProblemId::Gste {
        let tri = need(r.triangle, "triangle")?;
        let s = setup_gste(need(r.n, "n")?, scheme, tri)?;
        let grid = s.disc.grid;
        let out = integrate(&s.disc, s.initial, &controls, &[], |_, _| Ok(()))?;
        let g = grid.ghost();
        let rows = (0..grid.n())
            .map(|i| {
                let x = grid.x(i as isize);
                vec![
                    num(x),
                    num(out.state[g + i]),
                    num(gste_exact(x, out.t, tri)),
                ]
            })
            .collect();
        return Ok((vec!["x", "u", "u_exact"], rows));
    }
    let mode = need(r.mode, "mode")?;
    if id.is_euler_2d() {
        let (nx, ny) = (need(r.nx, "nx")?, need(r.ny, "ny")?);
        let s = match id {
            ProblemId::Rti => setup_rti(nx, ny, scheme, mode)?,
            _ => setup_dmr(nx, ny, scheme, mode)?,
        };
        let grid = s.disc.grid;
        let gamma = s.disc.gamma;
        let out = integrate(&s.disc, s.initial, &controls, &[], |_, _| Ok(()))?;
        let mut rows = Vec::with_capacity(nx * ny);
        for j in 0..ny as isize {
            for i in 0..nx as isize {
                let w = cons_to_prim_2d(&out.state[grid.idx(i, j)], gamma)
                    .map_err(|e| CliError::Numerical(e.to_string()))?;
                rows.push(vec![
                    num(grid.x.x(i)),
                    num(grid.y.x(j)),
                    num(w.rho),
                    num(w.u),
                    num(w.v),
                    num(w.p),
                ]);
            }
        }
        return Ok((vec!["x", "y", "rho", "u", "v", "p"], rows));
    }
    let s = setup_euler1d(id, need(r.n, "n")?, scheme, mode)?;
    let grid = s.disc.grid;
    let gamma = s.disc.gamma;
    let out = integrate(&s.disc, s.initial, &controls, &[], |_, _| Ok(()))?;
    let g = grid.ghost();
    let exact = matches!(id, ProblemId::Sod | ProblemId::Lax);
    let mut rows = Vec::with_capacity(grid.n());
    for i in 0..grid.n() {
        let x = grid.x(i as isize);
        let w = cons_to_prim(&out.state[g + i], gamma)
            .map_err(|e| CliError::Numerical(e.to_string()))?;
        let mut row = vec![num(x), num(w.rho), num(w.u), num(w.p)];
        if exact {
            row.push(num(riemann_reference(id, x, out.t)?.rho));
        }
        rows.push(row);
    }
    let mut header = vec!["x", "rho", "u", "p"];
    if exact {
        header.push("rho_exact");
    }
    Ok((header, rows))
}

fn accuracy(r: &RunConfig) -> Result<Table, CliError> {
    let scheme = scheme_config(r, need(r.scheme, "scheme")?);
    let f = need(r.function, "function")?;
    let res = r
        .resolutions
        .clone()
        .ok_or_else(|| missing("resolutions"))?;
    let rep = derivative_accuracy_table(&scheme, f, &res)?;
    let rows = rep
        .rows
        .iter()
        .map(|row| {
            vec![
                row.inv_dx.to_string(),
                num(row.l1_error),
                row.l1_order.map(num).unwrap_or_default(),
            ]
        })
        .collect();
    Ok((vec!["inv_dx", "l1_error", "l1_order"], rows))
}

fn adr(r: &RunConfig) -> Result<Table, CliError> {
    let scheme = scheme_config(r, need(r.scheme, "scheme")?);
    let params = AdrParams {
        n_points: need(r.n_points, "n_points")?,
        cfl: need(r.cfl, "cfl")?,
        dt_probe: r.dt_probe,
        ..AdrParams::default()
    };
    let res = adr_sweep(&scheme, &params)?;
    let rows = res
        .rows
        .iter()
        .map(|row| vec![num(row.omega), num(row.re_phi), num(row.im_phi)])
        .collect();
    Ok((vec!["omega", "re_phi", "im_phi"], rows))
}

fn ek_table(r: &RunConfig) -> Result<Table, CliError> {
    let (grid, field) = frozen_gste_field(
        need(r.n, "n")?,
        need(r.cfl, "cfl")?,
        need(r.t_final, "t_final")?,
        need(r.triangle, "triangle")?,
    )?;
    let mut rows = Vec::new();
    for kind in EK_SCHEMES {
        let mut cfg = ek_table_config(kind);
        if let Some(e) = r.epsilon {
            cfg = cfg.with_epsilon(e);
        }
        if let Some(p) = r.p {
            cfg = cfg.with_p(p);
        }
        let e = weight_relative_error(&cfg, &field, grid.dx())?;
        let mut row = vec![kind.id().to_string()];
        row.extend(e.iter().map(|v| num(*v)));
        rows.push(row);
    }
    Ok((vec!["scheme", "e0", "e1", "e2", "total"], rows))
}

fn weights(r: &RunConfig) -> Result<Table, CliError> {
    let id = need(r.problem, "problem")?;
    let scheme = scheme_config(r, need(r.scheme, "scheme")?);
    let controls = TimeControls::new(need(r.cfl, "cfl")?, need(r.t_final, "t_final")?);
    let times = r
        .record_times
        .clone()
        .ok_or_else(|| missing("record_times"))?;
    let trace: WeightTrace = if id == ProblemId::Gste {
        let s = setup_gste(need(r.n, "n")?, scheme, need(r.triangle, "triangle")?)?;
        collect_weight_trace(&s.disc, s.initial, &controls, &times)?
    } else {
        let s = setup_euler1d(id, need(r.n, "n")?, scheme, need(r.mode, "mode")?)?;
        collect_weight_trace(&s.disc, s.initial, &controls, &times)?
    };
    let rows = trace
        .samples
        .iter()
        .map(|s| {
            vec![
                num(s.t),
                num(s.x),
                num(s.omega[0]),
                num(s.omega[1]),
                num(s.omega[2]),
                num(s.lambda[0]),
                num(s.lambda[2]),
            ]
        })
        .collect();
    Ok((vec!["t", "x", "w0", "w1", "w2", "l0", "l2"], rows))
}
