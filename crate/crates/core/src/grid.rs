//! Uniform grids, ghost-padded field storage and boundary filling.

use std::fmt;
use std::sync::Arc;

use crate::error::GridError;

/// Ghost layer width used by every WENO-5 operator in this crate.
pub const GHOST_WIDTH: usize = 3;

/// How `n` relates to the spacing.
///
/// `Points`: `n` nodes including both ends, `dx = L/(n-1)`, `x_i = x_min + i dx`.
/// `Cells`: `n` cells, `dx = L/n`, `x_i = x_min + (i + 1/2) dx`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Convention {
    #[default]
    Points,
    Cells,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid1D {
    x_min: f64,
    x_max: f64,
    n: usize,
    dx: f64,
    ghost: usize,
    convention: Convention,
}

impl Grid1D {
    pub fn new(
        x_min: f64,
        x_max: f64,
        n: usize,
        ghost_width: usize,
        convention: Convention,
    ) -> Result<Self, GridError> {
        if !x_min.is_finite() || !x_max.is_finite() {
            return Err(GridError::NonFiniteBounds { x_min, x_max });
        }
        if x_max <= x_min {
            return Err(GridError::EmptyDomain { x_min, x_max });
        }
        if n < 5 {
            return Err(GridError::TooFewPoints(n));
        }
        if ghost_width < GHOST_WIDTH {
            return Err(GridError::GhostWidth(ghost_width));
        }
        let len = x_max - x_min;
        let dx = match convention {
            Convention::Points => len / (n - 1) as f64,
            Convention::Cells => len / n as f64,
        };
        Ok(Self {
            x_min,
            x_max,
            n,
            dx,
            ghost: ghost_width,
            convention,
        })
    }

    /// `make_uniform_grid` with the default point convention.
    pub fn points(x_min: f64, x_max: f64, n: usize) -> Result<Self, GridError> {
        Self::new(x_min, x_max, n, GHOST_WIDTH, Convention::Points)
    }

    pub fn cells(x_min: f64, x_max: f64, n: usize) -> Result<Self, GridError> {
        Self::new(x_min, x_max, n, GHOST_WIDTH, Convention::Cells)
    }

    pub fn x_min(&self) -> f64 {
        self.x_min
    }
    pub fn x_max(&self) -> f64 {
        self.x_max
    }
    pub fn n(&self) -> usize {
        self.n
    }
    pub fn dx(&self) -> f64 {
        self.dx
    }
    pub fn ghost(&self) -> usize {
        self.ghost
    }
    pub fn convention(&self) -> Convention {
        self.convention
    }
    /// Interior plus both ghost layers.
    pub fn padded_len(&self) -> usize {
        self.n + 2 * self.ghost
    }

    /// Coordinate of interior node `i`; negative or `>= n` indices give ghost positions.
    pub fn x(&self, i: isize) -> f64 {
        match self.convention {
            Convention::Points => self.x_min + i as f64 * self.dx,
            Convention::Cells => self.x_min + (i as f64 + 0.5) * self.dx,
        }
    }

    pub fn centers(&self) -> Vec<f64> {
        (0..self.n as isize).map(|i| self.x(i)).collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid2D {
    pub x: Grid1D,
    pub y: Grid1D,
}

impl Grid2D {
    pub fn new(x: Grid1D, y: Grid1D) -> Result<Self, GridError> {
        if x.ghost != y.ghost {
            return Err(GridError::GhostMismatch(x.ghost, y.ghost));
        }
        Ok(Self { x, y })
    }
    pub fn ghost(&self) -> usize {
        self.x.ghost
    }
    pub fn stride(&self) -> usize {
        self.x.padded_len()
    }
    pub fn padded_len(&self) -> usize {
        self.x.padded_len() * self.y.padded_len()
    }
    /// Flat index of interior cell `(i, j)`; ghost cells use negative or overflowing indices.
    pub fn idx(&self, i: isize, j: isize) -> usize {
        let g = self.ghost() as isize;
        ((j + g) as usize) * self.stride() + (i + g) as usize
    }
}

/// Data that can live in a field: a scalar or a fixed-size state vector.
pub trait StateVec: Copy + Default + Send + Sync + fmt::Debug + 'static {
    fn comps(&self) -> &[f64];
    fn comps_mut(&mut self) -> &mut [f64];
    /// Mirror image across a wall normal to `axis`.
    fn reflect(self, axis: usize) -> Self;
}

impl StateVec for f64 {
    fn comps(&self) -> &[f64] {
        std::slice::from_ref(self)
    }
    fn comps_mut(&mut self) -> &mut [f64] {
        std::slice::from_mut(self)
    }
    fn reflect(self, _axis: usize) -> Self {
        self
    }
}

/// Euler 1D conserved state `(rho, rho u, E)`.
impl StateVec for [f64; 3] {
    fn comps(&self) -> &[f64] {
        self
    }
    fn comps_mut(&mut self) -> &mut [f64] {
        self
    }
    fn reflect(mut self, _axis: usize) -> Self {
        self[1] = -self[1];
        self
    }
}

/// Euler 2D conserved state `(rho, rho u, rho v, E)`.
impl StateVec for [f64; 4] {
    fn comps(&self) -> &[f64] {
        self
    }
    fn comps_mut(&mut self) -> &mut [f64] {
        self
    }
    fn reflect(mut self, axis: usize) -> Self {
        self[1 + axis] = -self[1 + axis];
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    Low,
    High,
}

/// Everything a custom ghost rule may depend on.
#[derive(Debug, Clone, Copy)]
pub struct GhostQuery<T> {
    pub side: Side,
    /// 0 for x, 1 for y.
    pub axis: usize,
    /// 1 for the ghost adjacent to the boundary.
    pub depth: usize,
    pub t: f64,
    /// Ghost coordinate along `axis`.
    pub normal: f64,
    /// Coordinate along the other axis (0 in 1D).
    pub tangential: f64,
    /// Interior value mirrored across the boundary face.
    pub mirror: T,
    /// Interior value adjacent to the boundary.
    pub nearest: T,
}

pub type GhostRule<T> = Arc<dyn Fn(&GhostQuery<T>) -> T + Send + Sync>;

#[derive(Clone)]
pub enum BoundaryKind<T> {
    Periodic,
    Outflow,
    Reflective,
    FixedState(T),
    Custom(GhostRule<T>),
}

impl<T: fmt::Debug> fmt::Debug for BoundaryKind<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::Periodic => write!(f, "Periodic"),
            Self::Outflow => write!(f, "Outflow"),
            Self::Reflective => write!(f, "Reflective"),
            Self::FixedState(s) => write!(f, "FixedState({s:?})"),
            Self::Custom(_) => write!(f, "Custom(..)"),
        }
    }
}

impl<T: StateVec> BoundaryKind<T> {
    pub fn custom(rule: impl Fn(&GhostQuery<T>) -> T + Send + Sync + 'static) -> Self {
        Self::Custom(Arc::new(rule))
    }
}

/// Field values along one line, with ghosts; `data.len() == n + 2 g`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field1D<T> {
    pub data: Vec<T>,
    n: usize,
    ghost: usize,
}

impl<T: StateVec> Field1D<T> {
    pub fn zeros(grid: &Grid1D) -> Self {
        Self {
            data: vec![T::default(); grid.padded_len()],
            n: grid.n(),
            ghost: grid.ghost(),
        }
    }

    pub fn from_fn(grid: &Grid1D, mut f: impl FnMut(f64) -> T) -> Self {
        let mut out = Self::zeros(grid);
        for i in 0..grid.n() {
            out.data[i + grid.ghost()] = f(grid.x(i as isize));
        }
        out
    }

    pub fn from_interior(grid: &Grid1D, interior: &[T]) -> Result<Self, GridError> {
        if interior.len() != grid.n() {
            return Err(GridError::SizeMismatch {
                expected: grid.n(),
                got: interior.len(),
            });
        }
        let mut out = Self::zeros(grid);
        out.interior_mut().copy_from_slice(interior);
        Ok(out)
    }

    pub fn n(&self) -> usize {
        self.n
    }
    pub fn ghost(&self) -> usize {
        self.ghost
    }
    pub fn interior(&self) -> &[T] {
        &self.data[self.ghost..self.ghost + self.n]
    }
    pub fn interior_mut(&mut self) -> &mut [T] {
        let g = self.ghost;
        &mut self.data[g..g + self.n]
    }
    /// Value at interior index `i`; `-1` is the first left ghost.
    pub fn at(&self, i: isize) -> T {
        self.data[(i + self.ghost as isize) as usize]
    }
}

/// Cell-major 2D field; row `j` holds all `i` for fixed `y_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct Field2D<T> {
    pub data: Vec<T>,
    grid: Grid2D,
}

impl<T: StateVec> Field2D<T> {
    pub fn zeros(grid: &Grid2D) -> Self {
        Self {
            data: vec![T::default(); grid.padded_len()],
            grid: *grid,
        }
    }

    pub fn from_fn(grid: &Grid2D, mut f: impl FnMut(f64, f64) -> T) -> Self {
        let mut out = Self::zeros(grid);
        for j in 0..grid.y.n() as isize {
            for i in 0..grid.x.n() as isize {
                out.data[grid.idx(i, j)] = f(grid.x.x(i), grid.y.x(j));
            }
        }
        out
    }

    pub fn grid(&self) -> &Grid2D {
        &self.grid
    }
    pub fn get(&self, i: isize, j: isize) -> T {
        self.data[self.grid.idx(i, j)]
    }
    pub fn set(&mut self, i: isize, j: isize, v: T) {
        let k = self.grid.idx(i, j);
        self.data[k] = v;
    }
    pub fn interior_values(&self) -> Vec<T> {
        let mut out = Vec::with_capacity(self.grid.x.n() * self.grid.y.n());
        for j in 0..self.grid.y.n() as isize {
            for i in 0..self.grid.x.n() as isize {
                out.push(self.get(i, j));
            }
        }
        out
    }
}

/// Fill both ghost layers of a padded line `data` (length `n + 2 g`).
///
/// `get` reads along the line with a fixed `stride` starting at `offset`; this
/// is shared between 1D fields and the rows/columns of 2D fields.
#[allow(clippy::too_many_arguments)]
fn fill_line<T: StateVec>(
    data: &mut [T],
    offset: usize,
    stride: usize,
    grid: &Grid1D,
    axis: usize,
    tangential: f64,
    low: &BoundaryKind<T>,
    high: &BoundaryKind<T>,
    t: f64,
) {
    let n = grid.n();
    let g = grid.ghost();
    let at = |k: usize| offset + k * stride;
    for d in 1..=g {
        // low side: ghost k = g - d, mirror interior g + d - 1
        let ghost = at(g - d);
        let v = match low {
            BoundaryKind::Periodic => data[at(g + n - d)],
            BoundaryKind::Outflow => data[at(g)],
            BoundaryKind::Reflective => data[at(g + d - 1)].reflect(axis),
            BoundaryKind::FixedState(s) => *s,
            BoundaryKind::Custom(rule) => rule(&GhostQuery {
                side: Side::Low,
                axis,
                depth: d,
                t,
                normal: grid.x(-(d as isize)),
                tangential,
                mirror: data[at(g + d - 1)],
                nearest: data[at(g)],
            }),
        };
        data[ghost] = v;

        let ghost = at(g + n - 1 + d);
        let v = match high {
            BoundaryKind::Periodic => data[at(g + d - 1)],
            BoundaryKind::Outflow => data[at(g + n - 1)],
            BoundaryKind::Reflective => data[at(g + n - d)].reflect(axis),
            BoundaryKind::FixedState(s) => *s,
            BoundaryKind::Custom(rule) => rule(&GhostQuery {
                side: Side::High,
                axis,
                depth: d,
                t,
                normal: grid.x((n - 1 + d) as isize),
                tangential,
                mirror: data[at(g + n - d)],
                nearest: data[at(g + n - 1)],
            }),
        };
        data[ghost] = v;
    }
}

/// Populate the ghost cells of a 1D field; interior values are untouched.
pub fn fill_ghosts<T: StateVec>(
    field: &mut Field1D<T>,
    grid: &Grid1D,
    left: &BoundaryKind<T>,
    right: &BoundaryKind<T>,
    t: f64,
) -> Result<(), GridError> {
    if field.n != grid.n() || field.ghost != grid.ghost() || field.data.len() != grid.padded_len() {
        return Err(GridError::SizeMismatch {
            expected: grid.padded_len(),
            got: field.data.len(),
        });
    }
    fill_line(&mut field.data, 0, 1, grid, 0, 0.0, left, right, t);
    Ok(())
}

/// Slice form of [`fill_ghosts`] for solver internals.
pub fn fill_ghosts_slice<T: StateVec>(
    data: &mut [T],
    grid: &Grid1D,
    left: &BoundaryKind<T>,
    right: &BoundaryKind<T>,
    t: f64,
) -> Result<(), GridError> {
    if data.len() != grid.padded_len() {
        return Err(GridError::SizeMismatch {
            expected: grid.padded_len(),
            got: data.len(),
        });
    }
    fill_line(data, 0, 1, grid, 0, 0.0, left, right, t);
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Boundaries2D<T> {
    pub x_low: BoundaryKind<T>,
    pub x_high: BoundaryKind<T>,
    pub y_low: BoundaryKind<T>,
    pub y_high: BoundaryKind<T>,
}

/// Fill x ghosts on every interior row, then y ghosts on every padded column.
pub fn fill_ghosts_2d<T: StateVec>(
    data: &mut [T],
    grid: &Grid2D,
    bc: &Boundaries2D<T>,
    t: f64,
) -> Result<(), GridError> {
    if data.len() != grid.padded_len() {
        return Err(GridError::SizeMismatch {
            expected: grid.padded_len(),
            got: data.len(),
        });
    }
    let g = grid.ghost();
    let sx = grid.stride();
    for j in 0..grid.y.n() {
        let y = grid.y.x(j as isize);
        fill_line(
            data,
            (j + g) * sx,
            1,
            &grid.x,
            0,
            y,
            &bc.x_low,
            &bc.x_high,
            t,
        );
    }
    for i in 0..sx {
        let x = grid.x.x(i as isize - g as isize);
        fill_line(data, i, sx, &grid.y, 1, x, &bc.y_low, &bc.y_high, t);
    }
    Ok(())
}
