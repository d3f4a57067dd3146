//! Semi-discrete operators (flux splitting, WENO reconstruction, conservative
//! difference) and the third-order TVD Runge-Kutta integrator.
//!
//! Fluxes are split with a global Lax-Friedrichs speed recomputed at every
//! stage. Euler systems are reconstructed in characteristic variables by
//! default, using one Roe eigensystem per interface applied to the six cells
//! `i-2..=i+3`.

use std::sync::Arc;

use crate::error::{PhysicsError, SolverError};
use crate::euler::{
    self, euler_flux, euler_flux_2d, family_speeds, family_speeds_2d, pressure, pressure_2d,
    EigenSystem,
};
use crate::grid::{
    fill_ghosts_2d, fill_ghosts_slice, Boundaries2D, BoundaryKind, Grid1D, Grid2D, StateVec,
};
use crate::weno::{Reconstructor, SchemeConfig};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ReconstructionMode {
    #[default]
    Characteristic,
    Componentwise,
}

impl std::str::FromStr for ReconstructionMode {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "characteristic" => Ok(Self::Characteristic),
            "componentwise" => Ok(Self::Componentwise),
            other => Err(format!("unknown reconstruction mode '{other}'")),
        }
    }
}

impl ReconstructionMode {
    pub fn id(self) -> &'static str {
        match self {
            Self::Characteristic => "characteristic",
            Self::Componentwise => "componentwise",
        }
    }
}

/// Lax-Friedrichs splitting `f± = (f ± alpha u) / 2`.
pub fn lf_split(f: &[f64], u: &[f64], alpha: f64) -> (Vec<f64>, Vec<f64>) {
    f.iter()
        .zip(u)
        .map(|(f, u)| (0.5 * (f + alpha * u), 0.5 * (f - alpha * u)))
        .unzip()
}

/// A method-of-lines spatial operator on a padded state vector.
pub trait Discretization {
    type S: StateVec;

    /// Padded length (interior plus ghosts).
    fn len(&self) -> usize;

    fn fill_ghosts(&self, u: &mut [Self::S], t: f64) -> Result<(), SolverError>;

    /// `du/dt` on interior cells of a ghost-filled state; ghost entries of `out` are zero.
    fn rhs(&self, u: &[Self::S], t: f64, out: &mut [Self::S]) -> Result<(), SolverError>;

    /// Largest stable step for the given CFL number.
    fn max_dt(&self, u: &[Self::S], cfl: f64) -> Result<f64, SolverError>;

    /// Per-step physical admissibility check of the interior.
    fn check_state(&self, u: &[Self::S], t: f64) -> Result<(), SolverError> {
        for (cell, v) in u.iter().enumerate() {
            if v.comps().iter().any(|c| !c.is_finite()) {
                return Err(SolverError::NonFinite { cell, t });
            }
        }
        Ok(())
    }
}

/// Characteristic decomposition along one line direction.
trait LineModel<const N: usize> {
    fn eigen(&self, l: &[f64; N], r: &[f64; N]) -> Result<EigenSystem<N>, PhysicsError>;
}

struct Gas1D(f64);
struct Gas2D(f64);

impl LineModel<3> for Gas1D {
    #[inline]
    fn eigen(&self, l: &[f64; 3], r: &[f64; 3]) -> Result<EigenSystem<3>, PhysicsError> {
        euler::roe_eigensystem(l, r, self.0)
    }
}

impl LineModel<4> for Gas2D {
    #[inline]
    fn eigen(&self, l: &[f64; 4], r: &[f64; 4]) -> Result<EigenSystem<4>, PhysicsError> {
        euler::roe_eigensystem_2d(l, r, self.0)
    }
}

/// Interface fluxes `h_{j-1/2}` for `j = 0..=n` of one padded line.
///
/// `q` and `f` hold states and physical fluxes of the padded line; `out[j]` is
/// the flux between interior cells `j-1` and `j`.
#[allow(clippy::too_many_arguments)]
fn line_fluxes<M: LineModel<N>, const N: usize>(
    model: &M,
    recon: &Reconstructor,
    mode: ReconstructionMode,
    q: &[[f64; N]],
    f: &[[f64; N]],
    alpha: &[f64; N],
    g: usize,
    n: usize,
    out: &mut [[f64; N]],
) -> Result<(), (usize, PhysicsError)> {
    match mode {
        ReconstructionMode::Characteristic => {
            let mut wq = [[0.0; N]; 6];
            let mut wf = [[0.0; N]; 6];
            for j in 0..=n {
                let i = g - 1 + j;
                let es = model.eigen(&q[i], &q[i + 1]).map_err(|e| (i, e))?;
                for m in 0..6 {
                    wq[m] = es.to_characteristic(&q[i - 2 + m]);
                    wf[m] = es.to_characteristic(&f[i - 2 + m]);
                }
                let mut h = [0.0; N];
                for k in 0..N {
                    let a = alpha[k];
                    let p = [
                        0.5 * (wf[0][k] + a * wq[0][k]),
                        0.5 * (wf[1][k] + a * wq[1][k]),
                        0.5 * (wf[2][k] + a * wq[2][k]),
                        0.5 * (wf[3][k] + a * wq[3][k]),
                        0.5 * (wf[4][k] + a * wq[4][k]),
                    ];
                    let mm = [
                        0.5 * (wf[5][k] - a * wq[5][k]),
                        0.5 * (wf[4][k] - a * wq[4][k]),
                        0.5 * (wf[3][k] - a * wq[3][k]),
                        0.5 * (wf[2][k] - a * wq[2][k]),
                        0.5 * (wf[1][k] - a * wq[1][k]),
                    ];
                    h[k] = recon.reconstruct(&p) + recon.reconstruct(&mm);
                }
                out[j] = es.to_conserved(&h);
            }
        }
        ReconstructionMode::Componentwise => {
            let a = alpha.iter().fold(0.0f64, |m, v| m.max(*v));
            for j in 0..=n {
                let i = g - 1 + j;
                let mut h = [0.0; N];
                for (k, hk) in h.iter_mut().enumerate() {
                    let sp = |m: usize| 0.5 * (f[m][k] + a * q[m][k]);
                    let sm = |m: usize| 0.5 * (f[m][k] - a * q[m][k]);
                    let p = [sp(i - 2), sp(i - 1), sp(i), sp(i + 1), sp(i + 2)];
                    let mm = [sm(i + 3), sm(i + 2), sm(i + 1), sm(i), sm(i - 1)];
                    *hk = recon.reconstruct(&p) + recon.reconstruct(&mm);
                }
                out[j] = h;
            }
        }
    }
    Ok(())
}

/// Scalar conservation law `u_t + (c u)_x = 0`.
#[derive(Debug, Clone)]
pub struct Advection1D {
    pub grid: Grid1D,
    pub speed: f64,
    pub left: BoundaryKind<f64>,
    pub right: BoundaryKind<f64>,
    recon: Reconstructor,
}

impl Advection1D {
    pub fn new(
        grid: Grid1D,
        scheme: SchemeConfig,
        speed: f64,
        left: BoundaryKind<f64>,
        right: BoundaryKind<f64>,
    ) -> Result<Self, SolverError> {
        let recon = Reconstructor::new(scheme, grid.dx())?;
        Ok(Self {
            grid,
            speed,
            left,
            right,
            recon,
        })
    }

    pub fn periodic(grid: Grid1D, scheme: SchemeConfig, speed: f64) -> Result<Self, SolverError> {
        Self::new(
            grid,
            scheme,
            speed,
            BoundaryKind::Periodic,
            BoundaryKind::Periodic,
        )
    }

    pub fn reconstructor(&self) -> &Reconstructor {
        &self.recon
    }

    /// Interface fluxes `h_{j-1/2}`, `j = 0..=n`.
    pub fn interface_fluxes(&self, u: &[f64], out: &mut [f64]) {
        let g = self.grid.ghost();
        let n = self.grid.n();
        let c = self.speed;
        let a = c.abs();
        for j in 0..=n {
            let i = g - 1 + j;
            let sp = |m: usize| 0.5 * (c + a) * u[m];
            let sm = |m: usize| 0.5 * (c - a) * u[m];
            let mut h = 0.0;
            if c + a != 0.0 {
                h += self
                    .recon
                    .reconstruct(&[sp(i - 2), sp(i - 1), sp(i), sp(i + 1), sp(i + 2)]);
            }
            if c - a != 0.0 {
                h += self
                    .recon
                    .reconstruct(&[sm(i + 3), sm(i + 2), sm(i + 1), sm(i), sm(i - 1)]);
            }
            out[j] = h;
        }
    }
}

impl Discretization for Advection1D {
    type S = f64;

    fn len(&self) -> usize {
        self.grid.padded_len()
    }

    fn fill_ghosts(&self, u: &mut [f64], t: f64) -> Result<(), SolverError> {
        Ok(fill_ghosts_slice(
            u,
            &self.grid,
            &self.left,
            &self.right,
            t,
        )?)
    }

    fn rhs(&self, u: &[f64], _t: f64, out: &mut [f64]) -> Result<(), SolverError> {
        let g = self.grid.ghost();
        let n = self.grid.n();
        let mut h = vec![0.0; n + 1];
        self.interface_fluxes(u, &mut h);
        out.fill(0.0);
        let inv = 1.0 / self.grid.dx();
        for j in 0..n {
            out[g + j] = -(h[j + 1] - h[j]) * inv;
        }
        Ok(())
    }

    fn max_dt(&self, _u: &[f64], cfl: f64) -> Result<f64, SolverError> {
        Ok(cfl * self.grid.dx() / self.speed.abs())
    }
}

/// One-dimensional Euler equations.
#[derive(Debug, Clone)]
pub struct Euler1D {
    pub grid: Grid1D,
    pub gamma: f64,
    pub left: BoundaryKind<[f64; 3]>,
    pub right: BoundaryKind<[f64; 3]>,
    pub mode: ReconstructionMode,
    recon: Reconstructor,
}

impl Euler1D {
    pub fn new(
        grid: Grid1D,
        scheme: SchemeConfig,
        gamma: f64,
        left: BoundaryKind<[f64; 3]>,
        right: BoundaryKind<[f64; 3]>,
        mode: ReconstructionMode,
    ) -> Result<Self, SolverError> {
        euler::check_gamma(gamma).map_err(|e| SolverError::Physics {
            source: e,
            cell: 0,
            t: 0.0,
        })?;
        let recon = Reconstructor::new(scheme, grid.dx())?;
        Ok(Self {
            grid,
            gamma,
            left,
            right,
            mode,
            recon,
        })
    }

    pub fn reconstructor(&self) -> &Reconstructor {
        &self.recon
    }

    /// Global splitting speed per characteristic family over the padded line.
    pub fn split_speeds(&self, u: &[[f64; 3]]) -> [f64; 3] {
        let mut a = [0.0f64; 3];
        for q in u {
            let s = family_speeds(q, self.gamma);
            for k in 0..3 {
                a[k] = a[k].max(s[k]);
            }
        }
        a
    }
}

impl Discretization for Euler1D {
    type S = [f64; 3];

    fn len(&self) -> usize {
        self.grid.padded_len()
    }

    fn fill_ghosts(&self, u: &mut [[f64; 3]], t: f64) -> Result<(), SolverError> {
        Ok(fill_ghosts_slice(
            u,
            &self.grid,
            &self.left,
            &self.right,
            t,
        )?)
    }

    fn rhs(&self, u: &[[f64; 3]], t: f64, out: &mut [[f64; 3]]) -> Result<(), SolverError> {
        let g = self.grid.ghost();
        let n = self.grid.n();
        let alpha = self.split_speeds(u);
        let f: Vec<[f64; 3]> = u.iter().map(|q| euler_flux(q, self.gamma)).collect();
        let mut h = vec![[0.0; 3]; n + 1];
        line_fluxes(
            &Gas1D(self.gamma),
            &self.recon,
            self.mode,
            u,
            &f,
            &alpha,
            g,
            n,
            &mut h,
        )
        .map_err(|(cell, source)| SolverError::Physics { source, cell, t })?;
        out.fill([0.0; 3]);
        let inv = 1.0 / self.grid.dx();
        for j in 0..n {
            for k in 0..3 {
                out[g + j][k] = -(h[j + 1][k] - h[j][k]) * inv;
            }
        }
        Ok(())
    }

    fn max_dt(&self, u: &[[f64; 3]], cfl: f64) -> Result<f64, SolverError> {
        let g = self.grid.ghost();
        let lam = euler::max_wavespeed(&u[g..g + self.grid.n()], self.gamma);
        Ok(cfl * self.grid.dx() / lam)
    }

    fn check_state(&self, u: &[[f64; 3]], t: f64) -> Result<(), SolverError> {
        let g = self.grid.ghost();
        for (j, q) in u[g..g + self.grid.n()].iter().enumerate() {
            if q.iter().any(|v| !v.is_finite()) {
                return Err(SolverError::NonFinite { cell: j, t });
            }
            let p = pressure(q, self.gamma);
            if !(q[0] > 0.0 && p > 0.0) {
                return Err(SolverError::Physics {
                    source: PhysicsError::PositivityFailure { rho: q[0], p },
                    cell: j,
                    t,
                });
            }
        }
        Ok(())
    }
}

/// Source term `s(q, x, y, t)` added at every stage.
pub type Source2D = Arc<dyn Fn(&[f64; 4], f64, f64, f64) -> [f64; 4] + Send + Sync>;

/// Two-dimensional Euler equations, dimension by dimension.
#[derive(Clone)]
pub struct Euler2D {
    pub grid: Grid2D,
    pub gamma: f64,
    pub bc: Boundaries2D<[f64; 4]>,
    pub mode: ReconstructionMode,
    pub source: Option<Source2D>,
    recon_x: Reconstructor,
    recon_y: Reconstructor,
}

impl std::fmt::Debug for Euler2D {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Euler2D")
            .field("grid", &self.grid)
            .field("gamma", &self.gamma)
            .field("bc", &self.bc)
            .field("mode", &self.mode)
            .field("source", &self.source.is_some())
            .finish()
    }
}

#[inline]
fn swap_xy(q: &[f64; 4]) -> [f64; 4] {
    [q[0], q[2], q[1], q[3]]
}

impl Euler2D {
    pub fn new(
        grid: Grid2D,
        scheme: SchemeConfig,
        gamma: f64,
        bc: Boundaries2D<[f64; 4]>,
        mode: ReconstructionMode,
        source: Option<Source2D>,
    ) -> Result<Self, SolverError> {
        euler::check_gamma(gamma).map_err(|e| SolverError::Physics {
            source: e,
            cell: 0,
            t: 0.0,
        })?;
        let recon_x = Reconstructor::new(scheme, grid.x.dx())?;
        let recon_y = Reconstructor::new(scheme, grid.y.dx())?;
        Ok(Self {
            grid,
            gamma,
            bc,
            mode,
            source,
            recon_x,
            recon_y,
        })
    }

    fn split_speeds(&self, u: &[[f64; 4]]) -> ([f64; 4], [f64; 4]) {
        let mut ax = [0.0f64; 4];
        let mut ay = [0.0f64; 4];
        let gx = &self.grid.x;
        let gy = &self.grid.y;
        let g = self.grid.ghost() as isize;
        // every padded cell except the unused corner blocks
        for j in -g..gy.n() as isize + g {
            let inside_j = j >= 0 && j < gy.n() as isize;
            for i in -g..gx.n() as isize + g {
                let inside_i = i >= 0 && i < gx.n() as isize;
                if !inside_i && !inside_j {
                    continue;
                }
                let q = &u[self.grid.idx(i, j)];
                let sx = family_speeds_2d(q, self.gamma);
                let sy = family_speeds_2d(&swap_xy(q), self.gamma);
                for k in 0..4 {
                    ax[k] = ax[k].max(sx[k]);
                    ay[k] = ay[k].max(sy[k]);
                }
            }
        }
        (ax, ay)
    }
}

impl Discretization for Euler2D {
    type S = [f64; 4];

    fn len(&self) -> usize {
        self.grid.padded_len()
    }

    fn fill_ghosts(&self, u: &mut [[f64; 4]], t: f64) -> Result<(), SolverError> {
        Ok(fill_ghosts_2d(u, &self.grid, &self.bc, t)?)
    }

    fn rhs(&self, u: &[[f64; 4]], t: f64, out: &mut [[f64; 4]]) -> Result<(), SolverError> {
        let g = self.grid.ghost();
        let nx = self.grid.x.n();
        let ny = self.grid.y.n();
        let sx = self.grid.stride();
        let model = Gas2D(self.gamma);
        let (ax, ay) = self.split_speeds(u);
        out.fill([0.0; 4]);

        let mut f = vec![[0.0; 4]; nx.max(ny) + 2 * g];
        let mut h = vec![[0.0; 4]; nx.max(ny) + 1];
        let inv_dx = 1.0 / self.grid.x.dx();
        for j in 0..ny {
            let row = &u[(j + g) * sx..(j + g + 1) * sx];
            for (fi, q) in f.iter_mut().zip(row) {
                *fi = euler_flux_2d(q, self.gamma);
            }
            line_fluxes(
                &model,
                &self.recon_x,
                self.mode,
                row,
                &f,
                &ax,
                g,
                nx,
                &mut h,
            )
            .map_err(|(i, source)| SolverError::Physics {
                source,
                cell: (j + g) * sx + i,
                t,
            })?;
            let base = (j + g) * sx + g;
            for i in 0..nx {
                let o = &mut out[base + i];
                for k in 0..4 {
                    o[k] -= (h[i + 1][k] - h[i][k]) * inv_dx;
                }
            }
        }

        let inv_dy = 1.0 / self.grid.y.dx();
        let mut col = vec![[0.0; 4]; ny + 2 * g];
        for i in 0..nx {
            for (jj, c) in col.iter_mut().enumerate() {
                *c = swap_xy(&u[jj * sx + i + g]);
            }
            for (fj, q) in f.iter_mut().zip(&col) {
                *fj = euler_flux_2d(q, self.gamma);
            }
            line_fluxes(
                &model,
                &self.recon_y,
                self.mode,
                &col,
                &f,
                &ay,
                g,
                ny,
                &mut h,
            )
            .map_err(|(jj, source)| SolverError::Physics {
                source,
                cell: jj * sx + i + g,
                t,
            })?;
            for j in 0..ny {
                let o = &mut out[(j + g) * sx + i + g];
                let d = [
                    h[j + 1][0] - h[j][0],
                    h[j + 1][2] - h[j][2],
                    h[j + 1][1] - h[j][1],
                    h[j + 1][3] - h[j][3],
                ];
                for k in 0..4 {
                    o[k] -= d[k] * inv_dy;
                }
            }
        }

        if let Some(src) = &self.source {
            for j in 0..ny as isize {
                let y = self.grid.y.x(j);
                for i in 0..nx as isize {
                    let k = self.grid.idx(i, j);
                    let s = src(&u[k], self.grid.x.x(i), y, t);
                    for c in 0..4 {
                        out[k][c] += s[c];
                    }
                }
            }
        }
        Ok(())
    }

    fn max_dt(&self, u: &[[f64; 4]], cfl: f64) -> Result<f64, SolverError> {
        let mut lx = 0.0f64;
        let mut ly = 0.0f64;
        for j in 0..self.grid.y.n() as isize {
            for i in 0..self.grid.x.n() as isize {
                let q = &u[self.grid.idx(i, j)];
                let p = pressure_2d(q, self.gamma).max(0.0);
                let a = (self.gamma * p / q[0]).sqrt();
                lx = lx.max((q[1] / q[0]).abs() + a);
                ly = ly.max((q[2] / q[0]).abs() + a);
            }
        }
        Ok(cfl / (lx / self.grid.x.dx() + ly / self.grid.y.dx()))
    }

    fn check_state(&self, u: &[[f64; 4]], t: f64) -> Result<(), SolverError> {
        for j in 0..self.grid.y.n() as isize {
            for i in 0..self.grid.x.n() as isize {
                let k = self.grid.idx(i, j);
                let q = &u[k];
                if q.iter().any(|v| !v.is_finite()) {
                    return Err(SolverError::NonFinite { cell: k, t });
                }
                let p = pressure_2d(q, self.gamma);
                if !(q[0] > 0.0 && p > 0.0) {
                    return Err(SolverError::Physics {
                        source: PhysicsError::PositivityFailure { rho: q[0], p },
                        cell: k,
                        t,
                    });
                }
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TimeControls {
    pub cfl: f64,
    pub t_final: f64,
    /// Overrides the CFL rule when set.
    pub fixed_dt: Option<f64>,
}

impl TimeControls {
    pub fn new(cfl: f64, t_final: f64) -> Self {
        Self {
            cfl,
            t_final,
            fixed_dt: None,
        }
    }

    pub fn with_fixed_dt(mut self, dt: f64) -> Self {
        self.fixed_dt = Some(dt);
        self
    }

    pub fn validate(&self) -> Result<(), SolverError> {
        if !(self.cfl > 0.0 && self.cfl <= 1.0) {
            return Err(SolverError::Controls(format!(
                "cfl {} outside (0, 1]",
                self.cfl
            )));
        }
        if !(self.t_final >= 0.0 && self.t_final.is_finite()) {
            return Err(SolverError::Controls(format!(
                "t_final {} invalid",
                self.t_final
            )));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0 && dt.is_finite()) {
                return Err(SolverError::Controls(format!("fixed dt {dt} invalid")));
            }
        }
        Ok(())
    }
}

pub fn cfl_dt<D: Discretization>(
    disc: &D,
    u: &[D::S],
    controls: &TimeControls,
) -> Result<f64, SolverError> {
    match controls.fixed_dt {
        Some(dt) => Ok(dt),
        None => disc.max_dt(u, controls.cfl),
    }
}

/// Scratch buffers reused across steps.
#[derive(Debug, Clone)]
pub struct Rk3Work<S> {
    l: Vec<S>,
    u1: Vec<S>,
    u2: Vec<S>,
}

impl<S: StateVec> Rk3Work<S> {
    pub fn new(len: usize) -> Self {
        Self {
            l: vec![S::default(); len],
            u1: vec![S::default(); len],
            u2: vec![S::default(); len],
        }
    }
}

/// `out = a x + b (y + dt l)`, componentwise.
#[inline]
fn combine<S: StateVec>(out: &mut [S], a: f64, x: &[S], b: f64, y: &[S], dt: f64, l: &[S]) {
    for (((o, x), y), l) in out.iter_mut().zip(x).zip(y).zip(l) {
        let (xs, ys, ls) = (x.comps(), y.comps(), l.comps());
        for (c, oc) in o.comps_mut().iter_mut().enumerate() {
            *oc = a * xs[c] + b * (ys[c] + dt * ls[c]);
        }
    }
}

/// One TVD-RK3 step in place. Ghosts are refilled at `t`, `t + dt`, `t + dt/2`.
pub fn rk3_step<D: Discretization>(
    disc: &D,
    u: &mut [D::S],
    t: f64,
    dt: f64,
    work: &mut Rk3Work<D::S>,
) -> Result<(), SolverError> {
    let Rk3Work { l, u1, u2 } = work;
    disc.fill_ghosts(u, t)?;
    disc.rhs(u, t, l)?;
    combine(u1, 0.0, u, 1.0, u, dt, l);

    disc.fill_ghosts(u1, t + dt)?;
    disc.rhs(u1, t + dt, l)?;
    combine(u2, 0.75, u, 0.25, u1, dt, l);

    disc.fill_ghosts(u2, t + 0.5 * dt)?;
    disc.rhs(u2, t + 0.5 * dt, l)?;
    let u0 = u.to_vec();
    combine(u, 1.0 / 3.0, &u0, 2.0 / 3.0, u2, dt, l);
    Ok(())
}

/// `u^{n+1} - u^n` of one RK3 step, formed from the stage slopes so that
/// tiny steps keep full relative precision.
pub fn rk3_increment<D: Discretization>(
    disc: &D,
    u: &[D::S],
    t: f64,
    dt: f64,
) -> Result<Vec<D::S>, SolverError> {
    let n = disc.len();
    let mut u0 = u.to_vec();
    let mut l0 = vec![D::S::default(); n];
    let mut l1 = vec![D::S::default(); n];
    let mut l2 = vec![D::S::default(); n];
    disc.fill_ghosts(&mut u0, t)?;
    disc.rhs(&u0, t, &mut l0)?;
    let mut u1 = u0.clone();
    combine(&mut u1, 0.0, &u0, 1.0, &u0, dt, &l0);
    disc.fill_ghosts(&mut u1, t + dt)?;
    disc.rhs(&u1, t + dt, &mut l1)?;
    let mut u2 = u0.clone();
    for (((o, x), a), b) in u2.iter_mut().zip(&u0).zip(&l0).zip(&l1) {
        for (c, oc) in o.comps_mut().iter_mut().enumerate() {
            *oc = x.comps()[c] + 0.25 * dt * (a.comps()[c] + b.comps()[c]);
        }
    }
    disc.fill_ghosts(&mut u2, t + 0.5 * dt)?;
    disc.rhs(&u2, t + 0.5 * dt, &mut l2)?;
    let mut inc = vec![D::S::default(); n];
    for (i, o) in inc.iter_mut().enumerate() {
        for (c, oc) in o.comps_mut().iter_mut().enumerate() {
            *oc = dt * (l0[i].comps()[c] + l1[i].comps()[c] + 4.0 * l2[i].comps()[c]) / 6.0;
        }
    }
    Ok(inc)
}

#[derive(Debug, Clone)]
pub struct Outcome<S> {
    pub state: Vec<S>,
    pub t: f64,
    pub steps: usize,
}

/// Advance to `controls.t_final`, landing exactly on every record time and on
/// `t_final`. `observer(t, u)` runs with ghost-filled `u` at each record time
/// inside `[0, t_final]`.
pub fn integrate<D, F>(
    disc: &D,
    initial: Vec<D::S>,
    controls: &TimeControls,
    record_times: &[f64],
    mut observer: F,
) -> Result<Outcome<D::S>, SolverError>
where
    D: Discretization,
    F: FnMut(f64, &[D::S]) -> Result<(), SolverError>,
{
    controls.validate()?;
    if initial.len() != disc.len() {
        return Err(crate::error::GridError::SizeMismatch {
            expected: disc.len(),
            got: initial.len(),
        }
        .into());
    }
    let mut marks: Vec<f64> = record_times
        .iter()
        .copied()
        .filter(|r| *r >= 0.0 && *r <= controls.t_final)
        .collect();
    marks.sort_by(f64::total_cmp);
    marks.dedup();
    let mut next_mark = 0;

    let mut u = initial;
    let mut work = Rk3Work::new(disc.len());
    let mut t = 0.0;
    let mut steps = 0usize;
    disc.fill_ghosts(&mut u, t)?;
    disc.check_state(&u, t)?;
    while next_mark < marks.len() && marks[next_mark] <= t {
        observer(t, &u)?;
        next_mark += 1;
    }
    let tiny = 1e-14 * controls.t_final.max(1e-300);
    while controls.t_final - t > tiny {
        let step = steps;
        let wrap = move |e: SolverError| SolverError::AtStep {
            step,
            source: Box::new(e),
        };
        let mut dt = cfl_dt(disc, &u, controls).map_err(wrap)?;
        if !(dt > 0.0 && dt.is_finite()) {
            return Err(SolverError::StepCollapse { dt, t });
        }
        let stop = if next_mark < marks.len() {
            marks[next_mark]
        } else {
            controls.t_final
        };
        let mut hit = false;
        if t + dt >= stop - tiny {
            dt = stop - t;
            hit = true;
        }
        rk3_step(disc, &mut u, t, dt, &mut work).map_err(wrap)?;
        t = if hit { stop } else { t + dt };
        steps += 1;
        disc.fill_ghosts(&mut u, t).map_err(wrap)?;
        disc.check_state(&u, t).map_err(wrap)?;
        while next_mark < marks.len() && marks[next_mark] <= t + tiny {
            observer(t, &u)?;
            next_mark += 1;
        }
    }
    Ok(Outcome { state: u, t, steps })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::euler::{prim_to_cons, prim_to_cons_2d, Primitive, Primitive2};
    use crate::grid::Field1D;
    use crate::weno::SchemeKind;
    use std::f64::consts::PI;

    fn adv(n: usize, kind: SchemeKind) -> Advection1D {
        let grid = Grid1D::cells(0.0, 1.0, n).unwrap();
        Advection1D::periodic(grid, SchemeConfig::new(kind), 1.0).unwrap()
    }

    fn rhs_of<D: Discretization>(d: &D, mut u: Vec<D::S>) -> Vec<D::S> {
        d.fill_ghosts(&mut u, 0.0).unwrap();
        let mut out = vec![D::S::default(); d.len()];
        d.rhs(&u, 0.0, &mut out).unwrap();
        out
    }

    #[test]
    fn split_identities() {
        let u = [0.3, -1.0, 2.0];
        let (fp, fm) = lf_split(&u, &u, 1.0);
        assert_eq!(fp, u.to_vec());
        assert_eq!(fm, vec![0.0; 3]);
        let f = [1.0, 4.0, -2.0];
        let (fp, fm) = lf_split(&f, &u, 3.0);
        for k in 0..3 {
            assert!((fp[k] + fm[k] - f[k]).abs() < 1e-15);
        }
    }

    #[test]
    fn scalar_constant_and_conservation() {
        let d = adv(40, SchemeKind::Zc);
        let r = rhs_of(&d, vec![2.0; d.len()]);
        assert!(r.iter().all(|v| v.abs() < 1e-12));
        let mut u = vec![0.0; d.len()];
        u[3 + 17] = 1.0;
        let r = rhs_of(&d, u);
        let total: f64 = r.iter().sum::<f64>() * d.grid.dx();
        assert!(total.abs() < 1e-12);
    }

    #[test]
    fn scalar_fifth_order() {
        let err = |n: usize| {
            let d = adv(n, SchemeKind::Linear);
            let f = Field1D::from_fn(&d.grid, |x| (2.0 * PI * x).sin());
            let r = rhs_of(&d, f.data);
            let g = d.grid.ghost();
            (0..n)
                .map(|i| (r[g + i] + 2.0 * PI * (2.0 * PI * d.grid.x(i as isize)).cos()).abs())
                .sum::<f64>()
                * d.grid.dx()
        };
        let ratio = err(64) / err(128);
        assert!((ratio.log2() - 5.0).abs() < 0.2, "{ratio}");
    }

    #[test]
    fn linear_operator_with_ideal_weights() {
        let d = adv(32, SchemeKind::Linear);
        let a: Vec<f64> = (0..d.len()).map(|i| ((i * 7) % 11) as f64 - 5.0).collect();
        let b: Vec<f64> = (0..d.len()).map(|i| ((i * 3) % 5) as f64).collect();
        let ab: Vec<f64> = a.iter().zip(&b).map(|(x, y)| 2.0 * x - 0.5 * y).collect();
        let (ra, rb, rab) = (rhs_of(&d, a), rhs_of(&d, b), rhs_of(&d, ab));
        for i in 0..d.len() {
            assert!((rab[i] - (2.0 * ra[i] - 0.5 * rb[i])).abs() < 1e-12);
        }
    }

    fn sod_like(n: usize, kind: SchemeKind, mode: ReconstructionMode) -> (Euler1D, Vec<[f64; 3]>) {
        let grid = Grid1D::points(-0.5, 0.5, n).unwrap();
        let d = Euler1D::new(
            grid,
            SchemeConfig::new(kind),
            1.4,
            BoundaryKind::Outflow,
            BoundaryKind::Outflow,
            mode,
        )
        .unwrap();
        let f = Field1D::from_fn(&grid, |x| {
            let w = if x <= 0.0 {
                Primitive::new(0.125, 0.0, 0.1)
            } else {
                Primitive::new(1.0, 0.0, 1.0)
            };
            prim_to_cons(&w, 1.4)
        });
        (d, f.data)
    }

    #[test]
    fn euler_uniform_and_locality() {
        let (d, _) = sod_like(51, SchemeKind::Z, ReconstructionMode::Characteristic);
        let q = prim_to_cons(&Primitive::new(1.0, 0.3, 2.0), 1.4);
        let r = rhs_of(&d, vec![q; d.len()]);
        assert!(r.iter().flatten().all(|v| v.abs() < 1e-11));

        let (d, u) = sod_like(51, SchemeKind::Z, ReconstructionMode::Characteristic);
        let r = rhs_of(&d, u);
        let g = d.grid.ghost();
        // jump between interior cells 25 and 26
        for (j, v) in r[g..g + 51].iter().enumerate() {
            if !(23..=28).contains(&j) {
                assert!(v.iter().all(|c| c.abs() < 1e-12), "cell {j}: {v:?}");
            }
        }
    }

    #[test]
    fn euler_periodic_conservation() {
        let grid = Grid1D::cells(0.0, 1.0, 64).unwrap();
        for mode in [
            ReconstructionMode::Characteristic,
            ReconstructionMode::Componentwise,
        ] {
            let d = Euler1D::new(
                grid,
                SchemeConfig::new(SchemeKind::ZcPlus),
                1.4,
                BoundaryKind::Periodic,
                BoundaryKind::Periodic,
                mode,
            )
            .unwrap();
            let f = Field1D::from_fn(&grid, |x| {
                prim_to_cons(
                    &Primitive::new(
                        1.0 + 0.5 * (x > 0.5) as u8 as f64,
                        0.2,
                        1.0 + 0.2 * (6.0 * x).sin(),
                    ),
                    1.4,
                )
            });
            let before: Vec<f64> = (0..3)
                .map(|k| f.interior().iter().map(|q| q[k]).sum::<f64>())
                .collect();
            let out = integrate(
                &d,
                f.data,
                &TimeControls::new(0.5, 0.05),
                &[],
                |_, _| Ok(()),
            )
            .unwrap();
            let g = grid.ghost();
            for k in 0..3 {
                let after: f64 = out.state[g..g + 64].iter().map(|q| q[k]).sum();
                assert!(((after - before[k]) * grid.dx()).abs() < 1e-12 * out.steps as f64);
            }
        }
    }

    #[test]
    fn two_d_matches_one_d_on_x_slab() {
        let gx = Grid1D::points(-0.5, 0.5, 41).unwrap();
        let gy = Grid1D::cells(0.0, 1.0, 6).unwrap();
        let grid = Grid2D::new(gx, gy).unwrap();
        let cfg = SchemeConfig::new(SchemeKind::Zc);
        let bc = Boundaries2D {
            x_low: BoundaryKind::Outflow,
            x_high: BoundaryKind::Outflow,
            y_low: BoundaryKind::Periodic,
            y_high: BoundaryKind::Periodic,
        };
        let d2 =
            Euler2D::new(grid, cfg, 1.4, bc, ReconstructionMode::Characteristic, None).unwrap();
        let (d1, u1) = sod_like(41, SchemeKind::Zc, ReconstructionMode::Characteristic);
        let f2 = crate::grid::Field2D::from_fn(&grid, |x, _| {
            let w = if x <= 0.0 {
                Primitive2::new(0.125, 0.0, 0.0, 0.1)
            } else {
                Primitive2::new(1.0, 0.0, 0.0, 1.0)
            };
            prim_to_cons_2d(&w, 1.4)
        });
        let r1 = rhs_of(&d1, u1);
        let r2 = rhs_of(&d2, f2.data);
        for j in 0..6 {
            for i in 0..41 {
                let a = r1[i + 3];
                let b = r2[grid.idx(i as isize, j)];
                assert!(
                    (a[0] - b[0]).abs() < 1e-13
                        && (a[1] - b[1]).abs() < 1e-13
                        && (a[2] - b[3]).abs() < 1e-13
                );
                assert!(b[2].abs() < 1e-13);
            }
        }
    }

    #[test]
    fn source_term_added() {
        let g1 = Grid1D::cells(0.0, 1.0, 8).unwrap();
        let grid = Grid2D::new(g1, g1).unwrap();
        let bc = Boundaries2D {
            x_low: BoundaryKind::Periodic,
            x_high: BoundaryKind::Periodic,
            y_low: BoundaryKind::Periodic,
            y_high: BoundaryKind::Periodic,
        };
        let src: Source2D = Arc::new(|q: &[f64; 4], _, _, _| [0.0, 0.0, q[0], q[2]]);
        let d = Euler2D::new(
            grid,
            SchemeConfig::new(SchemeKind::Z),
            5.0 / 3.0,
            bc,
            ReconstructionMode::Characteristic,
            Some(src),
        )
        .unwrap();
        let q = prim_to_cons_2d(&Primitive2::new(2.0, 0.0, 0.0, 1.0), 5.0 / 3.0);
        let r = rhs_of(&d, vec![q; d.len()]);
        let v = r[grid.idx(3, 3)];
        assert!(
            v[0].abs() < 1e-12
                && v[1].abs() < 1e-12
                && (v[2] - 2.0).abs() < 1e-12
                && v[3].abs() < 1e-12
        );
    }

    #[test]
    fn dt_rules() {
        let d = adv(100, SchemeKind::Z);
        let u = vec![0.0; d.len()];
        let dt = cfl_dt(&d, &u, &TimeControls::new(0.45, 1.0)).unwrap();
        assert!((dt - 0.0045).abs() < 1e-15);
        assert_eq!(
            cfl_dt(&d, &u, &TimeControls::new(0.45, 1.0).with_fixed_dt(1e-10)).unwrap(),
            1e-10
        );

        let g1 = Grid1D::cells(0.0, 1.0, 10).unwrap();
        let grid = Grid2D::new(g1, g1).unwrap();
        let bc = Boundaries2D {
            x_low: BoundaryKind::Periodic,
            x_high: BoundaryKind::Periodic,
            y_low: BoundaryKind::Periodic,
            y_high: BoundaryKind::Periodic,
        };
        let d2 = Euler2D::new(
            grid,
            SchemeConfig::new(SchemeKind::Z),
            1.4,
            bc,
            ReconstructionMode::Characteristic,
            None,
        )
        .unwrap();
        // rho = 1.4, p = 1 gives a = 1 and u = v = 0
        let q = prim_to_cons_2d(&Primitive2::new(1.4, 0.0, 0.0, 1.0), 1.4);
        let dt = d2.max_dt(&vec![q; d2.len()], 0.5).unwrap();
        assert!((dt - 0.5 * 0.1 / 2.0).abs() < 1e-15);
    }

    struct Decay(f64);
    impl Discretization for Decay {
        type S = f64;
        fn len(&self) -> usize {
            1
        }
        fn fill_ghosts(&self, _: &mut [f64], _: f64) -> Result<(), SolverError> {
            Ok(())
        }
        fn rhs(&self, u: &[f64], _: f64, out: &mut [f64]) -> Result<(), SolverError> {
            out[0] = self.0 * u[0];
            Ok(())
        }
        fn max_dt(&self, _: &[f64], cfl: f64) -> Result<f64, SolverError> {
            Ok(cfl)
        }
    }

    #[test]
    fn rk3_taylor_polynomial() {
        let lam = -0.7;
        let dt = 0.3;
        let mut u = vec![1.0];
        rk3_step(&Decay(lam), &mut u, 0.0, dt, &mut Rk3Work::new(1)).unwrap();
        let z = lam * dt;
        assert!((u[0] - (1.0 + z + z * z / 2.0 + z * z * z / 6.0)).abs() < 1e-15);
        let mut u = vec![3.0];
        rk3_step(&Decay(0.0), &mut u, 0.0, dt, &mut Rk3Work::new(1)).unwrap();
        assert_eq!(u[0], 3.0);
        let inc = rk3_increment(&Decay(lam), &[1.0], 0.0, dt).unwrap();
        assert!((inc[0] - (z + z * z / 2.0 + z * z * z / 6.0)).abs() < 1e-15);
    }

    #[test]
    fn integrate_zero_time_and_chaining() {
        let d = adv(50, SchemeKind::Zc);
        let f = Field1D::from_fn(&d.grid, |x| if (0.3..0.6).contains(&x) { 1.0 } else { 0.0 });
        let out = integrate(
            &d,
            f.data.clone(),
            &TimeControls::new(0.45, 0.0),
            &[],
            |_, _| Ok(()),
        )
        .unwrap();
        assert_eq!(out.steps, 0);
        assert_eq!(&out.state[3..53], f.interior());

        let c = TimeControls::new(0.45, 0.2).with_fixed_dt(0.004);
        let full = integrate(&d, f.data.clone(), &c, &[], |_, _| Ok(())).unwrap();
        let half = TimeControls::new(0.45, 0.1).with_fixed_dt(0.004);
        let a = integrate(&d, f.data.clone(), &half, &[], |_, _| Ok(())).unwrap();
        let b = integrate(&d, a.state, &half, &[], |_, _| Ok(())).unwrap();
        assert_eq!(a.steps + b.steps, full.steps);
        for (x, y) in full.state[3..53].iter().zip(&b.state[3..53]) {
            assert!((x - y).abs() < 1e-14);
        }
    }

    #[test]
    fn observers_land_on_marks() {
        let d = adv(50, SchemeKind::Z);
        let f = Field1D::from_fn(&d.grid, |x| (2.0 * PI * x).sin());
        let mut seen = vec![];
        integrate(
            &d,
            f.data,
            &TimeControls::new(0.45, 0.5),
            &[0.0, 0.123, 0.5, 0.9],
            |t, _| {
                seen.push(t);
                Ok(())
            },
        )
        .unwrap();
        assert_eq!(seen, vec![0.0, 0.123, 0.5]);
    }

    #[test]
    fn time_reversal_returns_close() {
        let grid = Grid1D::cells(0.0, 1.0, 100).unwrap();
        let fwd = Advection1D::periodic(grid, SchemeConfig::new(SchemeKind::Zc), -1.0).unwrap();
        let back = Advection1D::periodic(grid, SchemeConfig::new(SchemeKind::Zc), 1.0).unwrap();
        let f = Field1D::from_fn(&grid, |x| (2.0 * PI * x).sin());
        let c = TimeControls::new(0.4, 0.25);
        let a = integrate(&fwd, f.data.clone(), &c, &[], |_, _| Ok(())).unwrap();
        let b = integrate(&back, a.state.clone(), &c, &[], |_, _| Ok(())).unwrap();
        let err: f64 = b.state[3..103]
            .iter()
            .zip(f.interior())
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        // one-way error against the exact shift measures the scheme's own dissipation
        let one_way: f64 = a.state[3..103]
            .iter()
            .zip(grid.centers())
            .map(|(v, x)| (v - (2.0 * PI * (x + 0.25)).sin()).abs())
            .fold(0.0, f64::max);
        assert!(err > 0.0 && err <= 2.5 * one_way, "{err} vs {one_way}");
    }

    #[test]
    fn positivity_failure_reported() {
        let (d, mut u) = sod_like(21, SchemeKind::Z, ReconstructionMode::Characteristic);
        u[10][2] = -1.0;
        let err = integrate(&d, u, &TimeControls::new(0.5, 0.1), &[], |_, _| Ok(())).unwrap_err();
        assert!(
            matches!(
                err,
                SolverError::Physics { .. } | SolverError::AtStep { .. }
            ),
            "{err}"
        );
    }
}
