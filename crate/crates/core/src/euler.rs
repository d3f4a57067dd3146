//! Ideal-gas Euler equations: state conversions, fluxes, Roe eigensystems
//! and an exact Riemann solver.

use crate::error::PhysicsError;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive {
    pub rho: f64,
    pub u: f64,
    pub p: f64,
}

impl Primitive {
    pub const fn new(rho: f64, u: f64, p: f64) -> Self {
        Self { rho, u, p }
    }

    pub fn sound_speed(&self, gamma: f64) -> f64 {
        (gamma * self.p / self.rho).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Primitive2 {
    pub rho: f64,
    pub u: f64,
    pub v: f64,
    pub p: f64,
}

impl Primitive2 {
    pub const fn new(rho: f64, u: f64, v: f64, p: f64) -> Self {
        Self { rho, u, v, p }
    }
}

pub fn check_gamma(gamma: f64) -> Result<(), PhysicsError> {
    if gamma.is_finite() && gamma > 1.0 {
        Ok(())
    } else {
        Err(PhysicsError::BadGamma(gamma))
    }
}

pub fn prim_to_cons(w: &Primitive, gamma: f64) -> [f64; 3] {
    [
        w.rho,
        w.rho * w.u,
        w.p / (gamma - 1.0) + 0.5 * w.rho * w.u * w.u,
    ]
}

pub fn cons_to_prim(q: &[f64; 3], gamma: f64) -> Result<Primitive, PhysicsError> {
    let rho = q[0];
    let u = q[1] / rho;
    let p = (gamma - 1.0) * (q[2] - 0.5 * q[1] * u);
    if !(rho > 0.0 && p > 0.0) {
        return Err(PhysicsError::PositivityFailure { rho, p });
    }
    Ok(Primitive { rho, u, p })
}

pub fn prim_to_cons_2d(w: &Primitive2, gamma: f64) -> [f64; 4] {
    let ke = 0.5 * w.rho * (w.u * w.u + w.v * w.v);
    [w.rho, w.rho * w.u, w.rho * w.v, w.p / (gamma - 1.0) + ke]
}

pub fn cons_to_prim_2d(q: &[f64; 4], gamma: f64) -> Result<Primitive2, PhysicsError> {
    let rho = q[0];
    let u = q[1] / rho;
    let v = q[2] / rho;
    let p = (gamma - 1.0) * (q[3] - 0.5 * (q[1] * u + q[2] * v));
    if !(rho > 0.0 && p > 0.0) {
        return Err(PhysicsError::PositivityFailure { rho, p });
    }
    Ok(Primitive2 { rho, u, v, p })
}

#[inline]
pub fn pressure(q: &[f64; 3], gamma: f64) -> f64 {
    (gamma - 1.0) * (q[2] - 0.5 * q[1] * q[1] / q[0])
}

#[inline]
pub fn pressure_2d(q: &[f64; 4], gamma: f64) -> f64 {
    (gamma - 1.0) * (q[3] - 0.5 * (q[1] * q[1] + q[2] * q[2]) / q[0])
}

#[inline]
pub fn euler_flux(q: &[f64; 3], gamma: f64) -> [f64; 3] {
    let u = q[1] / q[0];
    let p = pressure(q, gamma);
    [q[1], q[1] * u + p, u * (q[2] + p)]
}

/// x-direction flux of the 2D system.
#[inline]
pub fn euler_flux_2d(q: &[f64; 4], gamma: f64) -> [f64; 4] {
    let u = q[1] / q[0];
    let p = pressure_2d(q, gamma);
    [q[1], q[1] * u + p, q[2] * u, u * (q[3] + p)]
}

/// `max |u| + a` over the cells.
pub fn max_wavespeed(cells: &[[f64; 3]], gamma: f64) -> f64 {
    cells
        .iter()
        .map(|q| {
            let u = q[1] / q[0];
            let p = pressure(q, gamma).max(0.0);
            u.abs() + (gamma * p / q[0]).sqrt()
        })
        .fold(0.0, f64::max)
}

/// `|u-a|, |u|, |u+a|` of one cell.
#[inline]
pub fn family_speeds(q: &[f64; 3], gamma: f64) -> [f64; 3] {
    let u = q[1] / q[0];
    let a = (gamma * pressure(q, gamma).max(0.0) / q[0]).sqrt();
    [(u - a).abs(), u.abs(), (u + a).abs()]
}

/// `|u-a|, |u|, |u+a|, |u|` of one cell, x-direction.
#[inline]
pub fn family_speeds_2d(q: &[f64; 4], gamma: f64) -> [f64; 4] {
    let u = q[1] / q[0];
    let a = (gamma * pressure_2d(q, gamma).max(0.0) / q[0]).sqrt();
    [(u - a).abs(), u.abs(), (u + a).abs(), u.abs()]
}

/// Rows of `left` are left eigenvectors; columns of `right` are right eigenvectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenSystem<const N: usize> {
    pub left: [[f64; N]; N],
    pub right: [[f64; N]; N],
    pub eigenvalues: [f64; N],
}

impl<const N: usize> EigenSystem<N> {
    #[inline]
    pub fn to_characteristic(&self, q: &[f64; N]) -> [f64; N] {
        let mut out = [0.0; N];
        for (o, row) in out.iter_mut().zip(&self.left) {
            let mut s = 0.0;
            for c in 0..N {
                s += row[c] * q[c];
            }
            *o = s;
        }
        out
    }

    #[inline]
    pub fn to_conserved(&self, w: &[f64; N]) -> [f64; N] {
        let mut out = [0.0; N];
        for (o, row) in out.iter_mut().zip(&self.right) {
            let mut s = 0.0;
            for c in 0..N {
                s += row[c] * w[c];
            }
            *o = s;
        }
        out
    }
}

#[inline]
fn roe_weights(rl: f64, rr: f64) -> (f64, f64) {
    let sl = rl.sqrt();
    let sr = rr.sqrt();
    (sl / (sl + sr), sr / (sl + sr))
}

/// Eigensystem of the flux Jacobian at the Roe average of two cells.
pub fn roe_eigensystem(
    l: &[f64; 3],
    r: &[f64; 3],
    gamma: f64,
) -> Result<EigenSystem<3>, PhysicsError> {
    if !(l[0] > 0.0 && r[0] > 0.0) {
        return Err(PhysicsError::PositivityFailure {
            rho: l[0].min(r[0]),
            p: f64::NAN,
        });
    }
    let (wl, wr) = roe_weights(l[0], r[0]);
    let hl = (l[2] + pressure(l, gamma)) / l[0];
    let hr = (r[2] + pressure(r, gamma)) / r[0];
    let u = wl * l[1] / l[0] + wr * r[1] / r[0];
    let h = wl * hl + wr * hr;
    let a2 = (gamma - 1.0) * (h - 0.5 * u * u);
    if !(a2 > 0.0) {
        return Err(PhysicsError::RoeSoundSpeed(a2));
    }
    let a = a2.sqrt();
    let b1 = (gamma - 1.0) / a2;
    let b2 = 0.5 * b1 * u * u;
    let right = [
        [1.0, 1.0, 1.0],
        [u - a, u, u + a],
        [h - u * a, 0.5 * u * u, h + u * a],
    ];
    let left = [
        [0.5 * (b2 + u / a), -0.5 * (b1 * u + 1.0 / a), 0.5 * b1],
        [1.0 - b2, b1 * u, -b1],
        [0.5 * (b2 - u / a), -0.5 * (b1 * u - 1.0 / a), 0.5 * b1],
    ];
    Ok(EigenSystem {
        left,
        right,
        eigenvalues: [u - a, u, u + a],
    })
}

/// x-direction eigensystem of the 2D system at the Roe average; eigenvalues
/// are ordered `(u-a, u, u+a, u)` with the shear wave last.
pub fn roe_eigensystem_2d(
    l: &[f64; 4],
    r: &[f64; 4],
    gamma: f64,
) -> Result<EigenSystem<4>, PhysicsError> {
    if !(l[0] > 0.0 && r[0] > 0.0) {
        return Err(PhysicsError::PositivityFailure {
            rho: l[0].min(r[0]),
            p: f64::NAN,
        });
    }
    let (wl, wr) = roe_weights(l[0], r[0]);
    let hl = (l[3] + pressure_2d(l, gamma)) / l[0];
    let hr = (r[3] + pressure_2d(r, gamma)) / r[0];
    let u = wl * l[1] / l[0] + wr * r[1] / r[0];
    let v = wl * l[2] / l[0] + wr * r[2] / r[0];
    let h = wl * hl + wr * hr;
    let q2 = u * u + v * v;
    let a2 = (gamma - 1.0) * (h - 0.5 * q2);
    if !(a2 > 0.0) {
        return Err(PhysicsError::RoeSoundSpeed(a2));
    }
    let a = a2.sqrt();
    let b1 = (gamma - 1.0) / a2;
    let b2 = 0.5 * b1 * q2;
    let right = [
        [1.0, 1.0, 1.0, 0.0],
        [u - a, u, u + a, 0.0],
        [v, v, v, 1.0],
        [h - u * a, 0.5 * q2, h + u * a, v],
    ];
    let left = [
        [
            0.5 * (b2 + u / a),
            -0.5 * (b1 * u + 1.0 / a),
            -0.5 * b1 * v,
            0.5 * b1,
        ],
        [1.0 - b2, b1 * u, b1 * v, -b1],
        [
            0.5 * (b2 - u / a),
            -0.5 * (b1 * u - 1.0 / a),
            -0.5 * b1 * v,
            0.5 * b1,
        ],
        [-v, 0.0, 1.0, 0.0],
    ];
    Ok(EigenSystem {
        left,
        right,
        eigenvalues: [u - a, u, u + a, u],
    })
}

/// Analytic Jacobian of [`euler_flux`] in terms of `u` and total enthalpy `h`.
pub fn flux_jacobian(u: f64, h: f64, gamma: f64) -> [[f64; 3]; 3] {
    let g1 = gamma - 1.0;
    [
        [0.0, 1.0, 0.0],
        [0.5 * (gamma - 3.0) * u * u, (3.0 - gamma) * u, g1],
        [u * (0.5 * g1 * u * u - h), h - g1 * u * u, gamma * u],
    ]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Wave {
    Shock,
    Rarefaction,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RiemannSolution {
    pub left: Primitive,
    pub right: Primitive,
    pub gamma: f64,
    pub p_star: f64,
    pub u_star: f64,
    pub left_wave: Wave,
    pub right_wave: Wave,
}

/// Pressure function of one side and its derivative.
fn side_function(p: f64, s: &Primitive, gamma: f64) -> (f64, f64) {
    let a = s.sound_speed(gamma);
    if p > s.p {
        let ak = 2.0 / ((gamma + 1.0) * s.rho);
        let bk = (gamma - 1.0) / (gamma + 1.0) * s.p;
        let q = (ak / (p + bk)).sqrt();
        ((p - s.p) * q, q * (1.0 - 0.5 * (p - s.p) / (bk + p)))
    } else {
        let z = (gamma - 1.0) / (2.0 * gamma);
        let r = p / s.p;
        (
            2.0 * a / (gamma - 1.0) * (r.powf(z) - 1.0),
            r.powf(-(gamma + 1.0) / (2.0 * gamma)) / (s.rho * a),
        )
    }
}

fn check_states(l: &Primitive, r: &Primitive, gamma: f64) -> Result<(), PhysicsError> {
    check_gamma(gamma)?;
    for s in [l, r] {
        if !(s.rho > 0.0 && s.p > 0.0 && s.u.is_finite()) {
            return Err(PhysicsError::PositivityFailure { rho: s.rho, p: s.p });
        }
    }
    let al = l.sound_speed(gamma);
    let ar = r.sound_speed(gamma);
    if 2.0 / (gamma - 1.0) * (al + ar) <= r.u - l.u {
        return Err(PhysicsError::Vacuum);
    }
    Ok(())
}

fn star_velocity(p: f64, l: &Primitive, r: &Primitive, gamma: f64) -> f64 {
    let (fl, _) = side_function(p, l, gamma);
    let (fr, _) = side_function(p, r, gamma);
    0.5 * (l.u + r.u) + 0.5 * (fr - fl)
}

fn build(l: &Primitive, r: &Primitive, gamma: f64, p: f64) -> RiemannSolution {
    let wave = |s: &Primitive| {
        if p > s.p {
            Wave::Shock
        } else {
            Wave::Rarefaction
        }
    };
    RiemannSolution {
        left: *l,
        right: *r,
        gamma,
        p_star: p,
        u_star: star_velocity(p, l, r, gamma),
        left_wave: wave(l),
        right_wave: wave(r),
    }
}

/// Star pressure by plain bisection; the independent cross-check for Newton.
pub fn star_pressure_bisection(
    l: &Primitive,
    r: &Primitive,
    gamma: f64,
) -> Result<f64, PhysicsError> {
    check_states(l, r, gamma)?;
    let f = |p: f64| side_function(p, l, gamma).0 + side_function(p, r, gamma).0 + r.u - l.u;
    let mut lo = 1e-14 * l.p.min(r.p);
    let mut hi = l.p.max(r.p);
    while f(hi) < 0.0 {
        hi *= 2.0;
        if !hi.is_finite() {
            return Err(PhysicsError::NoConvergence);
        }
    }
    if f(lo) > 0.0 {
        return Err(PhysicsError::Vacuum);
    }
    for _ in 0..400 {
        let mid = 0.5 * (lo + hi);
        if f(mid) > 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
        if hi - lo <= 1e-15 * hi {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

pub fn exact_riemann(
    left: &Primitive,
    right: &Primitive,
    gamma: f64,
) -> Result<RiemannSolution, PhysicsError> {
    check_states(left, right, gamma)?;
    let (l, r) = (left, right);
    let al = l.sound_speed(gamma);
    let ar = r.sound_speed(gamma);
    let z = (gamma - 1.0) / (2.0 * gamma);
    let du = r.u - l.u;
    let guess = ((al + ar - 0.5 * (gamma - 1.0) * du) / (al / l.p.powf(z) + ar / r.p.powf(z)))
        .powf(1.0 / z);
    let tol = 1e-12 * l.p.max(r.p);
    let mut p = guess.max(1e-14 * l.p.min(r.p));
    for _ in 0..50 {
        let (fl, dl) = side_function(p, l, gamma);
        let (fr, dr) = side_function(p, r, gamma);
        let step = (fl + fr + du) / (dl + dr);
        let next = (p - step).max(1e-14 * l.p.min(r.p));
        if (next - p).abs() < tol {
            return Ok(build(l, r, gamma, next));
        }
        p = next;
    }
    Ok(build(l, r, gamma, star_pressure_bisection(l, r, gamma)?))
}

/// State at similarity coordinate `xi = x / t`.
pub fn sample_riemann(sol: &RiemannSolution, xi: f64) -> Primitive {
    let g = sol.gamma;
    let (ps, us) = (sol.p_star, sol.u_star);
    let gm = (g - 1.0) / (g + 1.0);
    if xi <= us {
        let s = &sol.left;
        let a = s.sound_speed(g);
        match sol.left_wave {
            Wave::Shock => {
                let r = ps / s.p;
                let speed = s.u - a * ((g + 1.0) / (2.0 * g) * r + (g - 1.0) / (2.0 * g)).sqrt();
                if xi <= speed {
                    *s
                } else {
                    Primitive::new(s.rho * (r + gm) / (gm * r + 1.0), us, ps)
                }
            }
            Wave::Rarefaction => {
                let a_star = a * (ps / s.p).powf((g - 1.0) / (2.0 * g));
                if xi <= s.u - a {
                    *s
                } else if xi >= us - a_star {
                    Primitive::new(s.rho * (ps / s.p).powf(1.0 / g), us, ps)
                } else {
                    let c = 2.0 / (g + 1.0) + gm / a * (s.u - xi);
                    Primitive::new(
                        s.rho * c.powf(2.0 / (g - 1.0)),
                        2.0 / (g + 1.0) * (a + 0.5 * (g - 1.0) * s.u + xi),
                        s.p * c.powf(2.0 * g / (g - 1.0)),
                    )
                }
            }
        }
    } else {
        let s = &sol.right;
        let a = s.sound_speed(g);
        match sol.right_wave {
            Wave::Shock => {
                let r = ps / s.p;
                let speed = s.u + a * ((g + 1.0) / (2.0 * g) * r + (g - 1.0) / (2.0 * g)).sqrt();
                if xi >= speed {
                    *s
                } else {
                    Primitive::new(s.rho * (r + gm) / (gm * r + 1.0), us, ps)
                }
            }
            Wave::Rarefaction => {
                let a_star = a * (ps / s.p).powf((g - 1.0) / (2.0 * g));
                if xi >= s.u + a {
                    *s
                } else if xi <= us + a_star {
                    Primitive::new(s.rho * (ps / s.p).powf(1.0 / g), us, ps)
                } else {
                    let c = 2.0 / (g + 1.0) - gm / a * (s.u - xi);
                    Primitive::new(
                        s.rho * c.powf(2.0 / (g - 1.0)),
                        2.0 / (g + 1.0) * (-a + 0.5 * (g - 1.0) * s.u + xi),
                        s.p * c.powf(2.0 * g / (g - 1.0)),
                    )
                }
            }
        }
    }
}

/// Speed of the shock on `side` (left = true), if that wave is a shock.
pub fn shock_speed(sol: &RiemannSolution, left: bool) -> Option<f64> {
    let g = sol.gamma;
    let (s, wave, sign) = if left {
        (&sol.left, sol.left_wave, -1.0)
    } else {
        (&sol.right, sol.right_wave, 1.0)
    };
    if wave != Wave::Shock {
        return None;
    }
    let r = sol.p_star / s.p;
    Some(s.u + sign * s.sound_speed(g) * ((g + 1.0) / (2.0 * g) * r + (g - 1.0) / (2.0 * g)).sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;

    const G: f64 = 1.4;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn conversions() {
        let q = prim_to_cons(&Primitive::new(1.0, 0.0, 1.0), G);
        assert!(rel(q[2], 2.5) < 4.0 * f64::EPSILON);
        let w = Primitive::new(0.7, -1.3, 2.2);
        let back = cons_to_prim(&prim_to_cons(&w, G), G).unwrap();
        assert!(
            rel(back.rho, w.rho) < 1e-15 && rel(back.u, w.u) < 1e-15 && rel(back.p, w.p) < 1e-14
        );
        assert!(matches!(
            cons_to_prim(&[1.0, 0.0, -1.0], G),
            Err(PhysicsError::PositivityFailure { .. })
        ));
        assert!(cons_to_prim(&[0.0, 0.0, 1.0], G).is_err());
    }

    #[test]
    fn fluxes() {
        assert_eq!(
            euler_flux(&prim_to_cons(&Primitive::new(1.0, 0.0, 1.0), G), G),
            [0.0, 1.0, 0.0]
        );
        let f = euler_flux(&prim_to_cons(&Primitive::new(1.0, 1.0, 1.0), G), G);
        assert!(rel(f[0], 1.0) < 1e-15 && rel(f[1], 2.0) < 1e-15 && rel(f[2], 4.0) < 1e-15);
        let q = prim_to_cons(&Primitive::new(0.8, 0.4, 1.7), G);
        let fr = euler_flux(&[q[0], -q[1], q[2]], G);
        let fq = euler_flux(&q, G);
        assert_eq!([fr[0], fr[1], fr[2]], [-fq[0], fq[1], -fq[2]]);
    }

    #[test]
    fn wavespeeds() {
        let c = |rho, u, p| prim_to_cons(&Primitive::new(rho, u, p), G);
        assert!(rel(max_wavespeed(&[c(1.0, 0.0, 1.0)], G), 1.4f64.sqrt()) < 1e-15);
        assert!(rel(max_wavespeed(&[c(1.0, 2.0, 1.0)], G), 2.0 + 1.4f64.sqrt()) < 1e-15);
        assert!(rel(max_wavespeed(&[c(1.0, -3.0, 1e-300)], G), 3.0) < 1e-12);
    }

    fn check_eigen<const N: usize>(e: &EigenSystem<N>, tol: f64) {
        for i in 0..N {
            for j in 0..N {
                let s: f64 = (0..N).map(|k| e.left[i][k] * e.right[k][j]).sum();
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((s - want).abs() < tol, "LR[{i}][{j}] = {s}");
            }
        }
    }

    #[test]
    fn roe_identity_and_order() {
        let l = prim_to_cons(&Primitive::new(0.125, 0.0, 0.1), G);
        let r = prim_to_cons(&Primitive::new(1.0, 0.0, 1.0), G);
        let e = roe_eigensystem(&l, &r, G).unwrap();
        check_eigen(&e, 1e-12);
        assert!(e.eigenvalues[0] <= e.eigenvalues[1] && e.eigenvalues[1] <= e.eigenvalues[2]);
        let same = roe_eigensystem(&r, &r, G).unwrap();
        check_eigen(&same, 1e-12);
        assert!(rel(same.eigenvalues[2], 1.4f64.sqrt()) < 1e-14);
        assert!(roe_eigensystem(&[1.0, 0.0, -1.0], &[1.0, 0.0, -1.0], G).is_err());
    }

    #[test]
    fn roe_2d_identity() {
        let l = prim_to_cons_2d(&Primitive2::new(1.2, 0.3, -0.7, 2.0), G);
        let r = prim_to_cons_2d(&Primitive2::new(0.4, -1.1, 0.2, 0.5), G);
        let e = roe_eigensystem_2d(&l, &r, G).unwrap();
        check_eigen(&e, 1e-12);
    }

    #[test]
    fn sod_star_values() {
        let l = Primitive::new(1.0, 0.0, 1.0);
        let r = Primitive::new(0.125, 0.0, 0.1);
        let s = exact_riemann(&l, &r, G).unwrap();
        assert!((s.p_star - 0.30313).abs() < 1e-5, "{}", s.p_star);
        assert!((s.u_star - 0.92745).abs() < 1e-5, "{}", s.u_star);
        let pb = star_pressure_bisection(&l, &r, G).unwrap();
        assert!((pb - s.p_star).abs() < 1e-8);
        assert_eq!(
            (s.left_wave, s.right_wave),
            (Wave::Rarefaction, Wave::Shock)
        );
    }

    #[test]
    fn lax_dual_solvers_agree() {
        let l = Primitive::new(0.445, 0.698, 3.528);
        let r = Primitive::new(0.5, 0.0, 0.571);
        let s = exact_riemann(&l, &r, G).unwrap();
        let pb = star_pressure_bisection(&l, &r, G).unwrap();
        assert!((pb - s.p_star).abs() < 1e-8);
        let ub = star_velocity(pb, &l, &r, G);
        assert!((ub - s.u_star).abs() < 1e-8);
    }

    #[test]
    fn equal_states_and_vacuum() {
        let w = Primitive::new(1.3, 0.4, 0.9);
        let s = exact_riemann(&w, &w, G).unwrap();
        assert!(rel(s.p_star, 0.9) < 1e-12 && (s.u_star - 0.4).abs() < 1e-12);
        for xi in [-5.0, -0.3, 0.4, 2.0] {
            let v = sample_riemann(&s, xi);
            assert!(rel(v.rho, 1.3) < 1e-10 && rel(v.p, 0.9) < 1e-10);
        }
        let l = Primitive::new(1.0, -20.0, 0.1);
        let r = Primitive::new(1.0, 20.0, 0.1);
        assert_eq!(exact_riemann(&l, &r, G), Err(PhysicsError::Vacuum));
    }

    #[test]
    fn sampler_limits_and_contact() {
        let l = Primitive::new(1.0, 0.0, 1.0);
        let r = Primitive::new(0.125, 0.0, 0.1);
        let s = exact_riemann(&l, &r, G).unwrap();
        assert_eq!(sample_riemann(&s, -1e9), l);
        assert_eq!(sample_riemann(&s, 1e9), r);
        let a = sample_riemann(&s, s.u_star - 1e-12);
        let b = sample_riemann(&s, s.u_star + 1e-12);
        assert!((a.p - b.p).abs() < 1e-10 && (a.u - b.u).abs() < 1e-10);
        assert!((a.rho - b.rho).abs() > 0.1);
        // rarefaction fan is continuous at both edges
        let al = l.sound_speed(G);
        let head = sample_riemann(&s, -al + 1e-10);
        assert!((head.rho - 1.0).abs() < 1e-8);
    }

    fn flux_of(w: &Primitive) -> [f64; 3] {
        euler_flux(&prim_to_cons(w, G), G)
    }

    #[test]
    fn rankine_hugoniot_across_shocks() {
        let cases = [
            (
                Primitive::new(1.0, 0.0, 1.0),
                Primitive::new(0.125, 0.0, 0.1),
            ),
            (
                Primitive::new(0.445, 0.698, 3.528),
                Primitive::new(0.5, 0.0, 0.571),
            ),
            (
                Primitive::new(1.0, 0.0, 1000.0),
                Primitive::new(1.0, 0.0, 0.01),
            ),
            (
                Primitive::new(1.0, 2.0, 0.4),
                Primitive::new(1.0, -2.0, 0.4),
            ),
        ];
        for (l, r) in cases {
            let s = exact_riemann(&l, &r, G).unwrap();
            for left in [true, false] {
                if let Some(speed) = shock_speed(&s, left) {
                    let (outer, inner) = if left {
                        (l, sample_riemann(&s, speed + 1e-9))
                    } else {
                        (r, sample_riemann(&s, speed - 1e-9))
                    };
                    let fo = flux_of(&outer);
                    let fi = flux_of(&inner);
                    let qo = prim_to_cons(&outer, G);
                    let qi = prim_to_cons(&inner, G);
                    for k in 0..3 {
                        let jump = fi[k] - fo[k] - speed * (qi[k] - qo[k]);
                        assert!(jump.abs() < 1e-8 * (1.0 + fo[k].abs()), "{k}: {jump}");
                    }
                }
            }
        }
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        fn state() -> impl Strategy<Value = Primitive> {
            (0.05f64..5.0, -3.0f64..3.0, 0.05f64..10.0)
                .prop_map(|(r, u, p)| Primitive::new(r, u, p))
        }

        proptest! {
            #![proptest_config(ProptestConfig::with_cases(10_000))]
            #[test]
            fn jacobian_from_eigensystem(l in state(), r in state()) {
                let ql = prim_to_cons(&l, G);
                let qr = prim_to_cons(&r, G);
                let e = roe_eigensystem(&ql, &qr, G).unwrap();
                let u = e.eigenvalues[1];
                let a = e.eigenvalues[2] - u;
                let h = a * a / (G - 1.0) + 0.5 * u * u;
                let jac = flux_jacobian(u, h, G);
                let scale = jac.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
                for i in 0..3 {
                    for j in 0..3 {
                        let s: f64 = (0..3).map(|k| e.right[i][k] * e.eigenvalues[k] * e.left[k][j]).sum();
                        prop_assert!((s - jac[i][j]).abs() <= 1e-10 * scale, "{} vs {}", s, jac[i][j]);
                    }
                }
            }
        }

        proptest! {
            #[test]
            fn round_trip(w in state()) {
                let b = cons_to_prim(&prim_to_cons(&w, G), G).unwrap();
                prop_assert!((b.rho - w.rho).abs() <= 4.0 * f64::EPSILON * w.rho);
                prop_assert!((b.u - w.u).abs() <= 4.0 * f64::EPSILON * (w.u.abs() + 1e-300) + 1e-15);
                prop_assert!((b.p - w.p).abs() <= 1e-12 * w.p);
            }

            #[test]
            fn galilean_boost(l in state(), r in state(), v in -2.0f64..2.0) {
                prop_assume!(exact_riemann(&l, &r, G).is_ok());
                let s = exact_riemann(&l, &r, G).unwrap();
                let lb = Primitive::new(l.rho, l.u + v, l.p);
                let rb = Primitive::new(r.rho, r.u + v, r.p);
                let sb = exact_riemann(&lb, &rb, G).unwrap();
                prop_assert!((sb.p_star - s.p_star).abs() <= 1e-9 * s.p_star.max(1e-3));
                prop_assert!((sb.u_star - s.u_star - v).abs() <= 1e-8);
            }
        }
    }
}
