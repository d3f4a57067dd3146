//! Benchmark problems: initial data, exact references, boundary rules and
//! canonical run parameters.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use crate::error::ProblemError;
use crate::euler::{
    exact_riemann, prim_to_cons, prim_to_cons_2d, sample_riemann, Primitive, Primitive2,
};
use crate::grid::{
    Boundaries2D, BoundaryKind, Convention, Field1D, Field2D, GhostQuery, Grid1D, Grid2D, Side,
    StateVec, GHOST_WIDTH,
};
use crate::solver::{Advection1D, Euler1D, Euler2D, ReconstructionMode, Source2D, TimeControls};
use crate::weno::SchemeConfig;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProblemId {
    Gste,
    AccuracyF0,
    AccuracyF1,
    AccuracyF2,
    Sod,
    Lax,
    ShuOsher,
    TitarevToro,
    Blast,
    Sedov,
    Rti,
    Dmr,
}

impl ProblemId {
    pub const ALL: [ProblemId; 12] = [
        Self::Gste,
        Self::AccuracyF0,
        Self::AccuracyF1,
        Self::AccuracyF2,
        Self::Sod,
        Self::Lax,
        Self::ShuOsher,
        Self::TitarevToro,
        Self::Blast,
        Self::Sedov,
        Self::Rti,
        Self::Dmr,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Gste => "gste",
            Self::AccuracyF0 => "accuracy_f0",
            Self::AccuracyF1 => "accuracy_f1",
            Self::AccuracyF2 => "accuracy_f2",
            Self::Sod => "sod",
            Self::Lax => "lax",
            Self::ShuOsher => "shu_osher",
            Self::TitarevToro => "titarev_toro",
            Self::Blast => "blast",
            Self::Sedov => "sedov",
            Self::Rti => "rti",
            Self::Dmr => "dmr",
        }
    }

    pub fn is_euler_1d(self) -> bool {
        matches!(
            self,
            Self::Sod | Self::Lax | Self::ShuOsher | Self::TitarevToro | Self::Blast | Self::Sedov
        )
    }

    pub fn is_euler_2d(self) -> bool {
        matches!(self, Self::Rti | Self::Dmr)
    }
}

impl fmt::Display for ProblemId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for ProblemId {
    type Err = ProblemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|p| p.id() == s.trim())
            .ok_or_else(|| ProblemError::UnknownProblem(s.to_string()))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundaryTag {
    Periodic,
    Outflow,
    Reflective,
    Fixed,
    Custom,
    /// Analytic samples (accuracy tests).
    Analytic,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProblemSpec {
    pub id: ProblemId,
    pub x_range: (f64, f64),
    pub y_range: Option<(f64, f64)>,
    pub n: usize,
    pub ny: Option<usize>,
    /// Grid used for the published figures, when it differs from `n`/`ny`.
    pub full_resolution: Option<(usize, usize)>,
    pub cfl: f64,
    pub t_final: f64,
    pub gamma: f64,
    pub convention: Convention,
    /// x-low, x-high, y-low, y-high (the last two only in 2D).
    pub boundaries: [Option<BoundaryTag>; 4],
    pub has_exact: bool,
    pub has_source: bool,
}

pub const SOD_PRINTED_T_FINAL: f64 = 2.0;

impl ProblemSpec {
    pub fn get(id: ProblemId) -> Self {
        use BoundaryTag as B;
        let base = ProblemSpec {
            id,
            x_range: (-1.0, 1.0),
            y_range: None,
            n: 200,
            ny: None,
            full_resolution: None,
            cfl: 0.5,
            t_final: 0.0,
            gamma: 1.4,
            convention: Convention::Points,
            boundaries: [Some(B::Outflow), Some(B::Outflow), None, None],
            has_exact: false,
            has_source: false,
        };
        match id {
            ProblemId::Gste => ProblemSpec {
                n: 400,
                cfl: 0.45,
                t_final: 2.0,
                convention: Convention::Cells,
                boundaries: [Some(B::Periodic), Some(B::Periodic), None, None],
                has_exact: true,
                ..base
            },
            ProblemId::AccuracyF0 | ProblemId::AccuracyF1 | ProblemId::AccuracyF2 => ProblemSpec {
                n: 25,
                cfl: 0.0,
                boundaries: [Some(B::Analytic), Some(B::Analytic), None, None],
                has_exact: true,
                ..base
            },
            ProblemId::Sod => ProblemSpec {
                x_range: (-0.5, 0.5),
                t_final: 0.2,
                has_exact: true,
                ..base
            },
            ProblemId::Lax => ProblemSpec {
                x_range: (-0.5, 0.5),
                t_final: 0.13,
                has_exact: true,
                ..base
            },
            ProblemId::ShuOsher => ProblemSpec {
                x_range: (-5.0, 5.0),
                t_final: 1.8,
                ..base
            },
            ProblemId::TitarevToro => ProblemSpec {
                x_range: (-5.0, 5.0),
                n: 1000,
                t_final: 5.0,
                ..base
            },
            ProblemId::Blast => ProblemSpec {
                x_range: (0.0, 1.0),
                n: 400,
                t_final: 0.038,
                convention: Convention::Cells,
                boundaries: [Some(B::Reflective), Some(B::Reflective), None, None],
                ..base
            },
            ProblemId::Sedov => ProblemSpec {
                x_range: (-2.0, 2.0),
                n: 1250,
                t_final: 1e-3,
                ..base
            },
            ProblemId::Rti => ProblemSpec {
                x_range: (0.0, 0.25),
                y_range: Some((0.0, 1.0)),
                n: 60,
                ny: Some(240),
                full_resolution: Some((3840, 950)),
                cfl: 0.3,
                t_final: 1.95,
                gamma: 5.0 / 3.0,
                convention: Convention::Cells,
                boundaries: [
                    Some(B::Reflective),
                    Some(B::Reflective),
                    Some(B::Fixed),
                    Some(B::Fixed),
                ],
                has_source: true,
                ..base
            },
            ProblemId::Dmr => ProblemSpec {
                x_range: (0.0, 4.0),
                y_range: Some((0.0, 1.0)),
                n: 480,
                ny: Some(120),
                full_resolution: Some((2000, 500)),
                cfl: 0.45,
                t_final: 0.2,
                convention: Convention::Cells,
                boundaries: [
                    Some(B::Fixed),
                    Some(B::Outflow),
                    Some(B::Custom),
                    Some(B::Custom),
                ],
                ..base
            },
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TestFunction {
    F0,
    F1,
    F2,
}

impl TestFunction {
    pub const ALL: [TestFunction; 3] = [Self::F0, Self::F1, Self::F2];

    pub fn id(self) -> &'static str {
        match self {
            Self::F0 => "f0",
            Self::F1 => "f1",
            Self::F2 => "f2",
        }
    }

    /// `(f(x), f'(x))` in closed form.
    pub fn eval(self, x: f64) -> (f64, f64) {
        let (s, c) = (PI * x).sin_cos();
        match self {
            Self::F0 => {
                let f = (x - s / (2.0 * PI)).exp();
                (f, f * (1.0 - 0.5 * c))
            }
            Self::F1 => {
                let g = PI * x - s / PI;
                (g.sin(), g.cos() * (PI - c))
            }
            Self::F2 => {
                let g = PI * x + c + s + 0.5 * c * c + c * c * c;
                let dg = PI - PI * s + PI * c - PI * c * s - 3.0 * PI * c * c * s;
                (g.sin(), g.cos() * dg)
            }
        }
    }

    pub fn problem(self) -> ProblemId {
        match self {
            Self::F0 => ProblemId::AccuracyF0,
            Self::F1 => ProblemId::AccuracyF1,
            Self::F2 => ProblemId::AccuracyF2,
        }
    }
}

impl FromStr for TestFunction {
    type Err = ProblemError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim() {
            "f0" | "accuracy_f0" => Ok(Self::F0),
            "f1" | "accuracy_f1" => Ok(Self::F1),
            "f2" | "accuracy_f2" => Ok(Self::F2),
            other => Err(ProblemError::UnknownFunction(other.to_string())),
        }
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Root of `f1'` in `(0.3, 0.9)`: a first-order critical point of `f1`.
pub fn f1_critical_point() -> f64 {
    // pi x - sin(pi x)/pi = pi/2
    let h = |x: f64| PI * x - (PI * x).sin() / PI - 0.5 * PI;
    let (mut lo, mut hi) = (0.3, 0.9);
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if h(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Triangle {
    /// `1 - 10 |x - 0.1|`.
    #[default]
    Tent,
    /// `1 - 10 (x - 0.1)`, as printed.
    Printed,
}

impl FromStr for Triangle {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, String> {
        match s.trim() {
            "tent" => Ok(Self::Tent),
            "printed" => Ok(Self::Printed),
            other => Err(format!(
                "unknown triangle variant '{other}' (tent, printed)"
            )),
        }
    }
}

impl Triangle {
    pub fn id(self) -> &'static str {
        match self {
            Self::Tent => "tent",
            Self::Printed => "printed",
        }
    }
}

pub fn gste_initial(x: f64, triangle: Triangle) -> f64 {
    const Z: f64 = -0.7;
    const DELTA: f64 = 0.005;
    const A: f64 = 0.5;
    const ALPHA: f64 = 10.0;
    let beta = 2f64.ln() / (36.0 * DELTA * DELTA);
    let g = |z: f64| (-beta * (x - z) * (x - z)).exp();
    let f = |a: f64| (1.0 - ALPHA * ALPHA * (x - a) * (x - a)).max(0.0).sqrt();
    if (-0.8..=-0.6).contains(&x) {
        (g(Z - DELTA) + 4.0 * g(Z) + g(Z + DELTA)) / 6.0
    } else if (-0.4..=-0.2).contains(&x) {
        1.0
    } else if (0.0..=0.2).contains(&x) {
        match triangle {
            Triangle::Tent => 1.0 - 10.0 * (x - 0.1).abs(),
            Triangle::Printed => 1.0 - 10.0 * (x - 0.1),
        }
    } else if (0.4..=0.6).contains(&x) {
        (f(A - DELTA) + 4.0 * f(A) + f(A + DELTA)) / 6.0
    } else {
        0.0
    }
}

/// Exact solution of `u_t + u_x = 0` on the periodic interval `[-1, 1)`.
pub fn gste_exact(x: f64, t: f64, triangle: Triangle) -> f64 {
    gste_initial((x - t + 1.0).rem_euclid(2.0) - 1.0, triangle)
}

/// Initial primitive state of a 1D Euler problem; `dx` sets the Sedov spike width.
pub fn euler1d_initial(id: ProblemId, x: f64, dx: f64) -> Result<Primitive, ProblemError> {
    let w = match id {
        ProblemId::Lax => {
            if x <= 0.0 {
                Primitive::new(0.445, 0.698, 3.528)
            } else {
                Primitive::new(0.5, 0.0, 0.571)
            }
        }
        ProblemId::Sod => {
            if x <= 0.0 {
                Primitive::new(0.125, 0.0, 0.1)
            } else {
                Primitive::new(1.0, 0.0, 1.0)
            }
        }
        ProblemId::ShuOsher => {
            if x < -4.0 {
                Primitive::new(27.0 / 7.0, 4.0 * 35f64.sqrt() / 9.0, 31.0 / 3.0)
            } else {
                Primitive::new(1.0 + (5.0 * x).sin() / 5.0, 0.0, 1.0)
            }
        }
        ProblemId::TitarevToro => {
            if x < -4.5 {
                Primitive::new(1.515695, 0.523346, 1.805)
            } else {
                Primitive::new(1.0 + (20.0 * PI * x).sin() / 10.0, 0.0, 1.0)
            }
        }
        ProblemId::Blast => {
            let p = if x < 0.1 {
                1000.0
            } else if x > 0.9 {
                100.0
            } else {
                0.01
            };
            Primitive::new(1.0, 0.0, p)
        }
        ProblemId::Sedov => {
            // nodes at exactly +-dx/2 must count as inside despite rounding
            let delta = 0.5 * dx;
            if x.abs() <= delta * (1.0 + 1e-9) {
                Primitive::new(1.0, 0.0, 2.56e8)
            } else {
                Primitive::new(1.0, 0.0, 4e-13)
            }
        }
        other => return Err(ProblemError::Unsupported(other.id().to_string())),
    };
    Ok(w)
}

/// Exact Riemann solution of the Sod or Lax problem at `(x, t)`.
pub fn riemann_reference(id: ProblemId, x: f64, t: f64) -> Result<Primitive, ProblemError> {
    if !matches!(id, ProblemId::Sod | ProblemId::Lax) {
        return Err(ProblemError::Unsupported(id.id().to_string()));
    }
    let l = euler1d_initial(id, -1.0, 0.0)?;
    let r = euler1d_initial(id, 1.0, 0.0)?;
    if t <= 0.0 {
        return Ok(if x <= 0.0 { l } else { r });
    }
    let sol = exact_riemann(&l, &r, 1.4)?;
    Ok(sample_riemann(&sol, x / t))
}

pub fn rti_initial(x: f64, y: f64) -> Primitive2 {
    let gamma = 5.0 / 3.0;
    let (rho, p) = if y < 0.5 {
        (2.0, 2.0 * y + 1.0)
    } else {
        (1.0, y + 1.5)
    };
    let a = (gamma * p / rho).sqrt();
    Primitive2::new(rho, 0.0, -0.025 * a * (8.0 * PI * x).cos(), p)
}

/// Conserved-variable source `(0, 0, rho, rho v)`.
pub fn rti_source(q: &[f64; 4]) -> [f64; 4] {
    [0.0, 0.0, q[0], q[2]]
}

pub const DMR_POST: Primitive2 =
    Primitive2::new(8.0, 4.125 * 1.732_050_807_568_877_2, -4.125, 116.5);
pub const DMR_PRE: Primitive2 = Primitive2::new(1.4, 0.0, 0.0, 1.0);

/// x-position of the incident shock at height `y` and time `t`.
pub fn dmr_shock_x(y: f64, t: f64) -> f64 {
    1.0 / 6.0 + (y + 20.0 * t) / 3f64.sqrt()
}

pub fn dmr_initial(x: f64, y: f64) -> Primitive2 {
    if x < dmr_shock_x(y, 0.0) {
        DMR_POST
    } else {
        DMR_PRE
    }
}

#[derive(Debug, Clone)]
pub struct Setup<D, S> {
    pub disc: D,
    pub initial: Vec<S>,
    pub controls: TimeControls,
}

pub fn setup_gste(
    n: usize,
    scheme: SchemeConfig,
    triangle: Triangle,
) -> Result<Setup<Advection1D, f64>, ProblemError> {
    let spec = ProblemSpec::get(ProblemId::Gste);
    let grid = Grid1D::new(
        spec.x_range.0,
        spec.x_range.1,
        n,
        GHOST_WIDTH,
        spec.convention,
    )?;
    let disc = Advection1D::periodic(grid, scheme, 1.0)?;
    let initial = Field1D::from_fn(&grid, |x| gste_initial(x, triangle)).data;
    Ok(Setup {
        disc,
        initial,
        controls: TimeControls::new(spec.cfl, spec.t_final),
    })
}

pub fn setup_euler1d(
    id: ProblemId,
    n: usize,
    scheme: SchemeConfig,
    mode: ReconstructionMode,
) -> Result<Setup<Euler1D, [f64; 3]>, ProblemError> {
    if !id.is_euler_1d() {
        return Err(ProblemError::Unsupported(id.id().to_string()));
    }
    let spec = ProblemSpec::get(id);
    let grid = Grid1D::new(
        spec.x_range.0,
        spec.x_range.1,
        n,
        GHOST_WIDTH,
        spec.convention,
    )?;
    let bc = |tag: Option<BoundaryTag>| match tag {
        Some(BoundaryTag::Reflective) => BoundaryKind::Reflective,
        Some(BoundaryTag::Periodic) => BoundaryKind::Periodic,
        _ => BoundaryKind::Outflow,
    };
    let disc = Euler1D::new(
        grid,
        scheme,
        spec.gamma,
        bc(spec.boundaries[0]),
        bc(spec.boundaries[1]),
        mode,
    )?;
    let mut field = Field1D::<[f64; 3]>::zeros(&grid);
    for (i, v) in field.interior_mut().iter_mut().enumerate() {
        *v = prim_to_cons(
            &euler1d_initial(id, grid.x(i as isize), grid.dx())?,
            spec.gamma,
        );
    }
    Ok(Setup {
        disc,
        initial: field.data,
        controls: TimeControls::new(spec.cfl, spec.t_final),
    })
}

pub fn setup_rti(
    nx: usize,
    ny: usize,
    scheme: SchemeConfig,
    mode: ReconstructionMode,
) -> Result<Setup<Euler2D, [f64; 4]>, ProblemError> {
    let spec = ProblemSpec::get(ProblemId::Rti);
    let (y0, y1) = spec.y_range.unwrap_or((0.0, 1.0));
    let grid = Grid2D::new(
        Grid1D::new(
            spec.x_range.0,
            spec.x_range.1,
            nx,
            GHOST_WIDTH,
            spec.convention,
        )?,
        Grid1D::new(y0, y1, ny, GHOST_WIDTH, spec.convention)?,
    )?;
    let g = spec.gamma;
    let bc = Boundaries2D {
        x_low: BoundaryKind::Reflective,
        x_high: BoundaryKind::Reflective,
        y_low: BoundaryKind::FixedState(prim_to_cons_2d(&Primitive2::new(2.0, 0.0, 0.0, 1.0), g)),
        y_high: BoundaryKind::FixedState(prim_to_cons_2d(&Primitive2::new(1.0, 0.0, 0.0, 2.5), g)),
    };
    let source: Source2D = Arc::new(|q: &[f64; 4], _, _, _| rti_source(q));
    let disc = Euler2D::new(grid, scheme, g, bc, mode, Some(source))?;
    let initial = Field2D::from_fn(&grid, |x, y| prim_to_cons_2d(&rti_initial(x, y), g)).data;
    Ok(Setup {
        disc,
        initial,
        controls: TimeControls::new(spec.cfl, spec.t_final),
    })
}

pub fn dmr_boundaries(gamma: f64) -> Boundaries2D<[f64; 4]> {
    let post = prim_to_cons_2d(&DMR_POST, gamma);
    let pre = prim_to_cons_2d(&DMR_PRE, gamma);
    let bottom = move |q: &GhostQuery<[f64; 4]>| {
        if q.tangential <= 1.0 / 6.0 {
            post
        } else {
            q.mirror.reflect(1)
        }
    };
    let top = move |q: &GhostQuery<[f64; 4]>| {
        debug_assert_eq!(q.side, Side::High);
        if q.tangential < dmr_shock_x(q.normal, q.t) {
            post
        } else {
            pre
        }
    };
    Boundaries2D {
        x_low: BoundaryKind::FixedState(post),
        x_high: BoundaryKind::Outflow,
        y_low: BoundaryKind::custom(bottom),
        y_high: BoundaryKind::custom(top),
    }
}

pub fn setup_dmr(
    nx: usize,
    ny: usize,
    scheme: SchemeConfig,
    mode: ReconstructionMode,
) -> Result<Setup<Euler2D, [f64; 4]>, ProblemError> {
    let spec = ProblemSpec::get(ProblemId::Dmr);
    let (y0, y1) = spec.y_range.unwrap_or((0.0, 1.0));
    let grid = Grid2D::new(
        Grid1D::new(
            spec.x_range.0,
            spec.x_range.1,
            nx,
            GHOST_WIDTH,
            spec.convention,
        )?,
        Grid1D::new(y0, y1, ny, GHOST_WIDTH, spec.convention)?,
    )?;
    let g = spec.gamma;
    let disc = Euler2D::new(grid, scheme, g, dmr_boundaries(g), mode, None)?;
    let initial = Field2D::from_fn(&grid, |x, y| prim_to_cons_2d(&dmr_initial(x, y), g)).data;
    Ok(Setup {
        disc,
        initial,
        controls: TimeControls::new(spec.cfl, spec.t_final),
    })
}
