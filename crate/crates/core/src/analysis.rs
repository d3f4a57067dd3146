//! Measurement tools: L1 errors and orders, the derivative accuracy test,
//! weight relative errors, weight traces and the approximate dispersion
//! relation.

use num_complex::Complex64;

use crate::error::AnalysisError;
use crate::grid::{Convention, Grid1D, GHOST_WIDTH};
use crate::problems::{setup_gste, TestFunction, Triangle};
use crate::solver::{integrate, rk3_increment, Advection1D, Discretization, Euler1D, TimeControls};
use crate::weno::{
    lambda_distribution, normalize, Reconstructor, SchemeConfig, SchemeKind, IDEAL_WEIGHTS,
};

pub const DEFAULT_RESOLUTIONS: [usize; 6] = [25, 50, 100, 200, 400, 800];

/// `sum_i |num_i - reference(x_i)| dx` over the interior.
pub fn l1_error(
    numerical: &[f64],
    reference: impl Fn(f64) -> f64,
    grid: &Grid1D,
) -> Result<f64, AnalysisError> {
    if numerical.len() != grid.n() {
        return Err(AnalysisError::Input(format!(
            "{} values for a grid of {} nodes",
            numerical.len(),
            grid.n()
        )));
    }
    Ok(numerical
        .iter()
        .enumerate()
        .map(|(i, v)| (v - reference(grid.x(i as isize))).abs())
        .sum::<f64>()
        * grid.dx())
}

/// Convergence order between successive refinements by a factor of two.
pub fn order(previous_error: f64, error: f64) -> f64 {
    (previous_error / error).log2()
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AccuracyRow {
    pub inv_dx: usize,
    pub l1_error: f64,
    pub l1_order: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorReport {
    pub scheme: SchemeKind,
    pub function: TestFunction,
    pub rows: Vec<AccuracyRow>,
}

impl ErrorReport {
    pub fn row(&self, inv_dx: usize) -> Option<&AccuracyRow> {
        self.rows.iter().find(|r| r.inv_dx == inv_dx)
    }
}

/// L1 error of `(h(x+dx/2) - h(x-dx/2))/dx` against `f'` for one resolution.
///
/// The nodes are `x_i = -1 + i dx`, `i = 0..=n`, with `dx = 2/n`; stencils
/// reaching past the ends sample `f` directly.
pub fn derivative_l1(
    cfg: &SchemeConfig,
    function: TestFunction,
    n: usize,
) -> Result<f64, AnalysisError> {
    if n < 2 {
        return Err(AnalysisError::Input(format!("resolution {n} too small")));
    }
    let dx = 2.0 / n as f64;
    let recon = Reconstructor::new(*cfg, dx)?;
    let f = |x: f64| function.eval(x).0;
    let mut sum = 0.0;
    for i in 0..=n {
        let x = -1.0 + i as f64 * dx;
        let s: [f64; 6] = std::array::from_fn(|m| f(x + (m as f64 - 3.0) * dx));
        let hp = recon.reconstruct(&[s[1], s[2], s[3], s[4], s[5]]);
        let hm = recon.reconstruct(&[s[0], s[1], s[2], s[3], s[4]]);
        sum += ((hp - hm) / dx - function.eval(x).1).abs();
    }
    Ok(sum * dx)
}

pub fn derivative_accuracy_table(
    cfg: &SchemeConfig,
    function: TestFunction,
    resolutions: &[usize],
) -> Result<ErrorReport, AnalysisError> {
    if resolutions.is_empty() {
        return Err(AnalysisError::Input("no resolutions".into()));
    }
    let mut rows: Vec<AccuracyRow> = Vec::with_capacity(resolutions.len());
    for &n in resolutions {
        let e = derivative_l1(cfg, function, n)?;
        let l1_order = rows.last().map(|p| order(p.l1_error, e));
        rows.push(AccuracyRow {
            inv_dx: n,
            l1_error: e,
            l1_order,
        });
    }
    Ok(ErrorReport {
        scheme: cfg.kind,
        function,
        rows,
    })
}

/// WENO-Z solution of the GSTE problem used as the shared field for the
/// weight relative error. Returns the grid and the interior values.
pub fn frozen_gste_field(
    n: usize,
    cfl: f64,
    t_final: f64,
    triangle: Triangle,
) -> Result<(Grid1D, Vec<f64>), AnalysisError> {
    let cfg = SchemeConfig::new(SchemeKind::Z).with_epsilon(1e-40);
    let setup = setup_gste(n, cfg, triangle)?;
    let grid = setup.disc.grid;
    let controls = TimeControls::new(cfl, t_final).with_fixed_dt(cfl * grid.dx());
    let out = integrate(&setup.disc, setup.initial, &controls, &[], |_, _| Ok(()))?;
    let g = grid.ghost();
    Ok((grid, out.state[g..g + grid.n()].to_vec()))
}

/// Scheme settings for the weight relative error table (`eps = 1e-40`).
pub fn ek_table_config(kind: SchemeKind) -> SchemeConfig {
    SchemeConfig::new(kind).with_epsilon(1e-40)
}

/// `(e_0, e_1, e_2, total)` with `e_k = sum_i |omega_k - d_k| / d_k dx`,
/// evaluating the weights at every cell's right face of a periodic field.
pub fn weight_relative_error(
    cfg: &SchemeConfig,
    field: &[f64],
    dx: f64,
) -> Result<[f64; 4], AnalysisError> {
    let n = field.len();
    if n < 5 {
        return Err(AnalysisError::Input(format!(
            "field of {n} cells is too short"
        )));
    }
    let recon = Reconstructor::new(*cfg, dx)?;
    let at = |i: isize| field[i.rem_euclid(n as isize) as usize];
    let mut e = [0.0; 3];
    for i in 0..n as isize {
        let w = normalize(&recon.alphas(&[at(i - 2), at(i - 1), at(i), at(i + 1), at(i + 2)]))?;
        for k in 0..3 {
            e[k] += (w[k] - IDEAL_WEIGHTS[k]).abs() / IDEAL_WEIGHTS[k];
        }
    }
    let e = e.map(|v| v * dx);
    Ok([e[0], e[1], e[2], e[0] + e[1] + e[2]])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdrRow {
    pub omega: f64,
    pub re_phi: f64,
    pub im_phi: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdrResult {
    pub scheme: SchemeKind,
    pub rows: Vec<AdrRow>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdrParams {
    pub n_points: usize,
    pub cfl: f64,
    /// Probe step; `cfl * dx` when absent.
    pub dt_probe: Option<f64>,
    pub length: f64,
}

impl Default for AdrParams {
    fn default() -> Self {
        Self {
            n_points: 422,
            cfl: 0.5,
            dt_probe: Some(1e-10),
            length: 2.0,
        }
    }
}

/// Modified wavenumber of one probe step on `u_t + u_x = 0` for every grid
/// wavenumber `2 pi m / N`, `m = 1..=N/2`.
pub fn adr_sweep(cfg: &SchemeConfig, params: &AdrParams) -> Result<AdrResult, AnalysisError> {
    let n = params.n_points;
    if n < 6 {
        return Err(AnalysisError::Input(format!("n_points = {n} is too small")));
    }
    if !(params.length > 0.0 && params.length.is_finite()) {
        return Err(AnalysisError::Input(format!("length = {}", params.length)));
    }
    let grid = Grid1D::new(0.0, params.length, n, GHOST_WIDTH, Convention::Cells)?;
    let dx = grid.dx();
    let dt = params.dt_probe.unwrap_or(params.cfl * dx);
    if !(dt > 0.0 && dt.is_finite()) {
        return Err(AnalysisError::Input(format!("probe step {dt}")));
    }
    let disc = Advection1D::periodic(grid, *cfg, 1.0)?;
    let g = grid.ghost();
    let mut rows = Vec::with_capacity(n / 2);
    for m in 1..=n / 2 {
        let w = 2.0 * std::f64::consts::PI * m as f64 / n as f64;
        let wave = |f: fn(f64) -> f64| {
            let mut u = vec![0.0; disc.len()];
            for j in 0..n {
                u[g + j] = f(w * j as f64);
            }
            u
        };
        let dc = rk3_increment(&disc, &wave(f64::cos), 0.0, dt)?;
        let ds = rk3_increment(&disc, &wave(f64::sin), 0.0, dt)?;
        let mut acc = Complex64::new(0.0, 0.0);
        for j in 0..n {
            let z =
                Complex64::new(dc[g + j], ds[g + j]) * Complex64::from_polar(1.0, -w * j as f64);
            // log(1 + z) without cancellation for |z| << 1
            acc += Complex64::new(
                0.5 * (2.0 * z.re + z.norm_sqr()).ln_1p(),
                z.im.atan2(1.0 + z.re),
            );
        }
        let phi = Complex64::i() * (dx / dt) * (acc / n as f64);
        rows.push(AdrRow {
            omega: w,
            re_phi: phi.re,
            im_phi: phi.im,
        });
    }
    Ok(AdrResult {
        scheme: cfg.kind,
        rows,
    })
}

/// Modified wavenumber of the linear fifth-order upwind scheme.
pub fn linear_upwind5_symbol(omega: f64) -> Complex64 {
    const C: [f64; 5] = [
        2.0 / 60.0,
        -13.0 / 60.0,
        47.0 / 60.0,
        27.0 / 60.0,
        -3.0 / 60.0,
    ];
    let h: Complex64 = C
        .iter()
        .enumerate()
        .map(|(k, c)| c * Complex64::from_polar(1.0, (k as f64 - 2.0) * omega))
        .sum();
    -Complex64::i() * (1.0 - Complex64::from_polar(1.0, -omega)) * h
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSample {
    pub t: f64,
    pub x: f64,
    pub omega: [f64; 3],
    pub lambda: [f64; 3],
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct WeightTrace {
    pub samples: Vec<WeightSample>,
}

impl WeightTrace {
    /// Fraction of samples whose central λ lies below `threshold`.
    pub fn lambda1_fraction_below(&self, threshold: f64) -> f64 {
        if self.samples.is_empty() {
            return 0.0;
        }
        let hits = self
            .samples
            .iter()
            .filter(|s| s.lambda[1] < threshold)
            .count();
        hits as f64 / self.samples.len() as f64
    }
}

/// Solvers whose positive split flux can be sampled for weight traces.
pub trait WeightProbe: Discretization {
    /// Unnormalized weights at the right face of every interior cell, with
    /// the cell position. `u` is ghost-filled.
    fn probe(&self, u: &[Self::S]) -> Vec<(f64, [f64; 3])>;
}

impl WeightProbe for Advection1D {
    fn probe(&self, u: &[f64]) -> Vec<(f64, [f64; 3])> {
        let g = self.grid.ghost();
        (0..self.grid.n())
            .map(|i| {
                let c = g + i;
                let a =
                    self.reconstructor()
                        .alphas(&[u[c - 2], u[c - 1], u[c], u[c + 1], u[c + 2]]);
                (self.grid.x(i as isize), a)
            })
            .collect()
    }
}

impl WeightProbe for Euler1D {
    /// Density component of the Lax-Friedrichs positive flux.
    fn probe(&self, u: &[[f64; 3]]) -> Vec<(f64, [f64; 3])> {
        let g = self.grid.ghost();
        let alpha = self.split_speeds(u).into_iter().fold(0.0, f64::max);
        let fp = |q: &[f64; 3]| 0.5 * (q[1] + alpha * q[0]);
        (0..self.grid.n())
            .map(|i| {
                let c = g + i;
                let a = self.reconstructor().alphas(&[
                    fp(&u[c - 2]),
                    fp(&u[c - 1]),
                    fp(&u[c]),
                    fp(&u[c + 1]),
                    fp(&u[c + 2]),
                ]);
                (self.grid.x(i as isize), a)
            })
            .collect()
    }
}

/// Weights and λ at every cell of a ghost-filled state.
pub fn weight_snapshot<D: WeightProbe>(
    disc: &D,
    u: &[D::S],
    t: f64,
) -> Result<Vec<WeightSample>, AnalysisError> {
    disc.probe(u)
        .into_iter()
        .map(|(x, a)| {
            Ok(WeightSample {
                t,
                x,
                omega: normalize(&a)?,
                lambda: lambda_distribution(&a)?,
            })
        })
        .collect()
}

/// Integrate and record weight samples at each record time.
pub fn collect_weight_trace<D: WeightProbe>(
    disc: &D,
    initial: Vec<D::S>,
    controls: &TimeControls,
    record_times: &[f64],
) -> Result<WeightTrace, AnalysisError> {
    let mut samples = Vec::new();
    let mut fail = None;
    integrate(disc, initial, controls, record_times, |t, u| {
        match weight_snapshot(disc, u, t) {
            Ok(s) => samples.extend(s),
            Err(e) => fail = fail.take().or(Some(e)),
        }
        Ok(())
    })?;
    match fail {
        Some(e) => Err(e),
        None => Ok(WeightTrace { samples }),
    }
}

/// `max_k |omega_k - d_k|` over both faces of the node at `x0`.
pub fn weight_deviation(
    cfg: &SchemeConfig,
    f: impl Fn(f64) -> f64,
    x0: f64,
    dx: f64,
) -> Result<f64, AnalysisError> {
    let recon = Reconstructor::new(*cfg, dx)?;
    let s: [f64; 6] = std::array::from_fn(|m| f(x0 + (m as f64 - 3.0) * dx));
    let mut dev = 0.0f64;
    for v in [
        [s[1], s[2], s[3], s[4], s[5]],
        [s[0], s[1], s[2], s[3], s[4]],
    ] {
        let w = normalize(&recon.alphas(&v))?;
        for k in 0..3 {
            dev = dev.max((w[k] - IDEAL_WEIGHTS[k]).abs());
        }
    }
    Ok(dev)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeReport {
    pub dx: Vec<f64>,
    pub deviation: Vec<f64>,
    /// Least-squares slope of `log2 deviation` against `log2 dx`; infinite
    /// when fewer than two samples sit above `floor`.
    pub slope: f64,
}

/// Deviation of the weights from ideal at `x0` for `dx = 2^-e`, `e` in
/// `exponents`, and its convergence rate.
pub fn weight_convergence_slope(
    cfg: &SchemeConfig,
    f: impl Fn(f64) -> f64,
    x0: f64,
    exponents: std::ops::RangeInclusive<i32>,
    floor: f64,
) -> Result<SlopeReport, AnalysisError> {
    let mut dx = Vec::new();
    let mut deviation = Vec::new();
    for e in exponents {
        let h = 2f64.powi(-e);
        dx.push(h);
        deviation.push(weight_deviation(cfg, &f, x0, h)?);
    }
    let pts: Vec<(f64, f64)> = dx
        .iter()
        .zip(&deviation)
        .filter(|(_, d)| **d > floor)
        .map(|(h, d)| (h.log2(), d.log2()))
        .collect();
    let slope = if pts.len() < 2 {
        f64::INFINITY
    } else {
        let m = pts.len() as f64;
        let (sx, sy) = pts.iter().fold((0.0, 0.0), |(a, b), (x, y)| (a + x, b + y));
        let (mx, my) = (sx / m, sy / m);
        let num: f64 = pts.iter().map(|(x, y)| (x - mx) * (y - my)).sum();
        let den: f64 = pts.iter().map(|(x, _)| (x - mx) * (x - mx)).sum();
        num / den
    };
    Ok(SlopeReport {
        dx,
        deviation,
        slope,
    })
}
