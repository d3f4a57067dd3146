//! Pointwise fifth-order WENO machinery.
//!
//! Indices follow the upwind frame: for a `PlusHalf` window `(f_{i-2}..f_{i+2})`
//! substencil 0 is the left one. A `MinusHalf` window is reconstructed by
//! reflecting it, so its substencil 0 is the rightmost one in space.

use std::fmt;
use std::str::FromStr;

use crate::error::KernelError;

/// Ideal weights `d_k`.
pub const IDEAL_WEIGHTS: [f64; 3] = [0.1, 0.6, 0.3];

/// Centering coefficients of C, JSC and ZC.
pub const C_CENTERED: [f64; 3] = [0.75, 1.5, 0.75];
/// Centering coefficients of ZC+.
pub const C_CENTERED_PLUS: [f64; 3] = [9.0 / 8.0, 9.0 / 4.0, 9.0 / 8.0];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Side {
    /// `x_{i+1/2}`, biased to the left.
    PlusHalf,
    /// `x_{i-1/2}`, biased to the right (mirror of `PlusHalf`).
    MinusHalf,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StencilWindow {
    samples: [f64; 5],
    side: Side,
}

impl StencilWindow {
    pub fn new(samples: [f64; 5], side: Side) -> Result<Self, KernelError> {
        if samples.iter().any(|v| !v.is_finite()) {
            return Err(KernelError::NonFiniteSample);
        }
        Ok(Self { samples, side })
    }

    pub fn plus(samples: [f64; 5]) -> Result<Self, KernelError> {
        Self::new(samples, Side::PlusHalf)
    }

    pub fn minus(samples: [f64; 5]) -> Result<Self, KernelError> {
        Self::new(samples, Side::MinusHalf)
    }

    pub fn samples(&self) -> [f64; 5] {
        self.samples
    }

    pub fn side(&self) -> Side {
        self.side
    }

    /// Samples ordered from most upwind to most downwind.
    pub fn upwind(&self) -> [f64; 5] {
        match self.side {
            Side::PlusHalf => self.samples,
            Side::MinusHalf => reflect(self.samples),
        }
    }

    /// Same samples in reverse spatial order, with the opposite side.
    pub fn reflected(&self) -> Self {
        let side = match self.side {
            Side::PlusHalf => Side::MinusHalf,
            Side::MinusHalf => Side::PlusHalf,
        };
        Self {
            samples: reflect(self.samples),
            side,
        }
    }
}

#[inline]
fn reflect(v: [f64; 5]) -> [f64; 5] {
    [v[4], v[3], v[2], v[1], v[0]]
}

#[inline]
fn candidates_plus(v: &[f64; 5]) -> [f64; 3] {
    [
        (2.0 * v[0] - 7.0 * v[1] + 11.0 * v[2]) / 6.0,
        (-v[1] + 5.0 * v[2] + 2.0 * v[3]) / 6.0,
        (2.0 * v[2] + 5.0 * v[3] - v[4]) / 6.0,
    ]
}

#[inline]
fn betas_plus(v: &[f64; 5]) -> [f64; 3] {
    const K: f64 = 13.0 / 12.0;
    let a0 = v[0] - 4.0 * v[1] + 3.0 * v[2];
    let s0 = v[0] - 2.0 * v[1] + v[2];
    let a1 = v[3] - v[1];
    let s1 = v[1] - 2.0 * v[2] + v[3];
    let a2 = -3.0 * v[2] + 4.0 * v[3] - v[4];
    let s2 = v[2] - 2.0 * v[3] + v[4];
    [
        0.25 * a0 * a0 + K * s0 * s0,
        0.25 * a1 * a1 + K * s1 * s1,
        0.25 * a2 * a2 + K * s2 * s2,
    ]
}

pub fn candidate_reconstructions(w: &StencilWindow) -> [f64; 3] {
    candidates_plus(&w.upwind())
}

/// `sum_k d_k fhat^k`, the fifth-order upwind value.
pub fn ideal_combination(w: &StencilWindow) -> f64 {
    let q = candidate_reconstructions(w);
    IDEAL_WEIGHTS[0] * q[0] + IDEAL_WEIGHTS[1] * q[1] + IDEAL_WEIGHTS[2] * q[2]
}

pub fn smoothness_indicators(w: &StencilWindow) -> [f64; 3] {
    betas_plus(&w.upwind())
}

pub fn tau_global(beta: &[f64; 3]) -> f64 {
    (beta[2] - beta[0]).abs()
}

#[inline]
fn g_map(omega: f64, d: f64) -> f64 {
    omega * (d + d * d - 3.0 * d * omega + omega * omega) / (d * d + omega * (1.0 - 2.0 * d))
}

/// Mapping function of WENO-M for substencil `k`.
pub fn mapped_g(omega: f64, k: usize) -> Result<f64, KernelError> {
    if k > 2 {
        return Err(KernelError::BadIndex(k));
    }
    if !(0.0..=1.0).contains(&omega) {
        return Err(KernelError::OmegaOutOfRange(omega));
    }
    Ok(g_map(omega, IDEAL_WEIGHTS[k]))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SchemeKind {
    Js,
    Jsc,
    M,
    Z,
    ZPlus,
    D,
    C,
    Zc,
    ZcPlus,
    /// Ideal weights everywhere (linear upwind-5).
    Linear,
}

impl SchemeKind {
    pub const ALL: [SchemeKind; 10] = [
        Self::Js,
        Self::Jsc,
        Self::M,
        Self::Z,
        Self::ZPlus,
        Self::D,
        Self::C,
        Self::Zc,
        Self::ZcPlus,
        Self::Linear,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Js => "js",
            Self::Jsc => "jsc",
            Self::M => "m",
            Self::Z => "z",
            Self::ZPlus => "zplus",
            Self::D => "d",
            Self::C => "c",
            Self::Zc => "zc",
            Self::ZcPlus => "zcplus",
            Self::Linear => "linear",
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Self::Js => "WENO-JS",
            Self::Jsc => "WENO-JSC",
            Self::M => "WENO-M",
            Self::Z => "WENO-Z",
            Self::ZPlus => "WENO-Z+",
            Self::D => "WENO-D",
            Self::C => "WENO-C",
            Self::Zc => "WENO-ZC",
            Self::ZcPlus => "WENO-ZC+",
            Self::Linear => "linear",
        }
    }

    fn default_c(self) -> [f64; 3] {
        match self {
            Self::ZcPlus => C_CENTERED_PLUS,
            Self::C | Self::Jsc | Self::Zc => C_CENTERED,
            _ => [1.0; 3],
        }
    }

    fn default_epsilon(self) -> f64 {
        match self {
            Self::Js | Self::Jsc | Self::M => 1e-6,
            _ => 1e-40,
        }
    }
}

impl fmt::Display for SchemeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

impl FromStr for SchemeKind {
    type Err = KernelError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let key = s.trim().to_ascii_lowercase();
        let key = key.strip_prefix("weno-").unwrap_or(&key);
        match key {
            "js" => Ok(Self::Js),
            "jsc" => Ok(Self::Jsc),
            "m" => Ok(Self::M),
            "z" => Ok(Self::Z),
            "zplus" | "z+" => Ok(Self::ZPlus),
            "d" => Ok(Self::D),
            "c" => Ok(Self::C),
            "zc" => Ok(Self::Zc),
            "zcplus" | "zc+" => Ok(Self::ZcPlus),
            "linear" | "ideal" => Ok(Self::Linear),
            _ => Err(KernelError::UnknownScheme(s.to_string())),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SchemeConfig {
    pub kind: SchemeKind,
    pub epsilon: f64,
    pub p: f64,
    /// Z+ only; `None` means `dx^(2/3)`.
    pub eta: Option<f64>,
    pub c: [f64; 3],
}

impl SchemeConfig {
    pub fn new(kind: SchemeKind) -> Self {
        Self {
            kind,
            epsilon: kind.default_epsilon(),
            p: 2.0,
            eta: None,
            c: kind.default_c(),
        }
    }

    pub fn with_epsilon(mut self, epsilon: f64) -> Self {
        self.epsilon = epsilon;
        self
    }

    pub fn with_p(mut self, p: f64) -> Self {
        self.p = p;
        self
    }

    pub fn with_eta(mut self, eta: f64) -> Self {
        self.eta = Some(eta);
        self
    }

    pub fn with_c(mut self, c: [f64; 3]) -> Self {
        self.c = c;
        self
    }

    /// Parameter checks shared by every entry point; `epsilon = 0` passes here.
    pub fn check(&self) -> Result<(), KernelError> {
        if !self.epsilon.is_finite() || self.epsilon < 0.0 {
            return Err(KernelError::BadEpsilon(self.epsilon));
        }
        if !self.p.is_finite() || self.p <= 0.0 {
            return Err(KernelError::BadExponent(self.p));
        }
        if let Some(eta) = self.eta {
            if !eta.is_finite() || eta < 0.0 {
                return Err(KernelError::BadEta(eta));
            }
        }
        if self.c.iter().any(|c| !c.is_finite() || *c <= 0.0) {
            return Err(KernelError::BadCentering(self.c));
        }
        Ok(())
    }

    /// Stricter check used before running a solver: `epsilon` must be positive.
    pub fn validate(&self) -> Result<(), KernelError> {
        self.check()?;
        if self.epsilon == 0.0 && self.kind != SchemeKind::Linear {
            return Err(KernelError::ZeroEpsilon);
        }
        Ok(())
    }

    pub fn eta_for(&self, dx: f64) -> f64 {
        self.eta.unwrap_or_else(|| dx.powf(2.0 / 3.0))
    }
}

#[inline(always)]
fn powp(x: f64, p: f64) -> f64 {
    if p == 2.0 {
        x * x
    } else if p == 1.0 {
        x
    } else {
        x.powf(p)
    }
}

/// Unnormalized weights from `beta`, `tau`; no argument checks.
#[inline]
fn alpha_core(cfg: &SchemeConfig, eta: f64, b: &[f64; 3], tau: f64) -> [f64; 3] {
    let d = IDEAL_WEIGHTS;
    let eps = cfg.epsilon;
    let p = cfg.p;
    let c = cfg.c;
    match cfg.kind {
        SchemeKind::Linear => d,
        SchemeKind::Js => [
            d[0] / powp(b[0] + eps, p),
            d[1] / powp(b[1] + eps, p),
            d[2] / powp(b[2] + eps, p),
        ],
        SchemeKind::Jsc => [
            c[0] * d[0] / powp(b[0] + eps, p),
            c[1] * d[1] / powp(b[1] + eps, p),
            c[2] * d[2] / powp(b[2] + eps, p),
        ],
        SchemeKind::M => {
            let a = [
                d[0] / powp(b[0] + eps, p),
                d[1] / powp(b[1] + eps, p),
                d[2] / powp(b[2] + eps, p),
            ];
            let s = a[0] + a[1] + a[2];
            [
                g_map(a[0] / s, d[0]),
                g_map(a[1] / s, d[1]),
                g_map(a[2] / s, d[2]),
            ]
        }
        SchemeKind::Z => {
            let r = |k: usize| powp(tau / (b[k] + eps), p);
            [
                d[0] * (1.0 + r(0)),
                d[1] * (1.0 + r(1)),
                d[2] * (1.0 + r(2)),
            ]
        }
        SchemeKind::ZPlus => {
            let r = |k: usize| powp(tau / (b[k] + eps), p) + eta * b[k] / (tau + eps);
            [
                d[0] * (1.0 + r(0)),
                d[1] * (1.0 + r(1)),
                d[2] * (1.0 + r(2)),
            ]
        }
        SchemeKind::D => {
            let phi = (b[0] - 2.0 * b[1] + b[2]).abs().sqrt().min(1.0);
            let r = |k: usize| phi * powp(tau / (b[k] + eps), p);
            [
                d[0] * (1.0 + r(0)),
                d[1] * (1.0 + r(1)),
                d[2] * (1.0 + r(2)),
            ]
        }
        SchemeKind::C => {
            let r = |k: usize| c[k] * powp(tau / (b[k] + eps), p);
            [
                d[0] * (1.0 + r(0)),
                d[1] * (1.0 + r(1)),
                d[2] * (1.0 + r(2)),
            ]
        }
        SchemeKind::Zc => {
            let den = tau + (b[0] + b[1] + b[2]) / 3.0 + eps;
            let z = powp(tau / den, p);
            let r = |k: usize| c[k] * powp(tau / (b[k] + eps), p) * z;
            [
                d[0] * (1.0 + r(0)),
                d[1] * (1.0 + r(1)),
                d[2] * (1.0 + r(2)),
            ]
        }
        SchemeKind::ZcPlus => {
            let den = tau + (b[0] + b[1] + b[2]) / 3.0 + eps;
            let z = powp(tau / den, p);
            let r = |k: usize| c[k] * powp(tau / (b[k] + eps), p) * z + b[k] / den;
            [
                d[0] * (1.0 + r(0)),
                d[1] * (1.0 + r(1)),
                d[2] * (1.0 + r(2)),
            ]
        }
    }
}

/// Unnormalized weights plus the ZC-family diagnostics.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Unnormalized {
    pub alpha: [f64; 3],
    /// `tau / (tau + mean(beta) + eps)`.
    pub zeta: f64,
    /// `beta_k / (tau + mean(beta) + eps)`; the ZC+ anti-dissipative terms.
    pub xi: [f64; 3],
}

pub fn unnormalized_weights(
    cfg: &SchemeConfig,
    beta: &[f64; 3],
    tau: f64,
    dx: f64,
) -> Result<Unnormalized, KernelError> {
    cfg.check()?;
    if beta.iter().any(|b| !b.is_finite() || *b < 0.0) || !tau.is_finite() || tau < 0.0 {
        return Err(KernelError::NonFiniteSample);
    }
    if cfg.kind == SchemeKind::ZPlus && cfg.eta.is_none() && !(dx.is_finite() && dx > 0.0) {
        return Err(KernelError::BadDx(dx));
    }
    let eps = cfg.epsilon;
    let bbar = (beta[0] + beta[1] + beta[2]) / 3.0;
    let den = tau + bbar + eps;
    if eps == 0.0 {
        let uses_beta_den = !matches!(cfg.kind, SchemeKind::Linear);
        let uses_tau_den = cfg.kind == SchemeKind::ZPlus;
        let uses_mean_den = matches!(cfg.kind, SchemeKind::Zc | SchemeKind::ZcPlus);
        if (uses_beta_den && beta.contains(&0.0))
            || (uses_tau_den && tau == 0.0)
            || (uses_mean_den && den == 0.0)
        {
            return Err(KernelError::DivisionByZero);
        }
    }
    let alpha = alpha_core(cfg, cfg.eta_for(dx), beta, tau);
    let (zeta, xi) = if den > 0.0 {
        (tau / den, [beta[0] / den, beta[1] / den, beta[2] / den])
    } else {
        (0.0, [0.0; 3])
    };
    Ok(Unnormalized { alpha, zeta, xi })
}

pub fn normalize(alpha: &[f64; 3]) -> Result<[f64; 3], KernelError> {
    let s = alpha[0] + alpha[1] + alpha[2];
    if alpha.iter().any(|a| !a.is_finite() || *a < 0.0) || !(s > 0.0) {
        return Err(KernelError::BadWeights(*alpha));
    }
    Ok([alpha[0] / s, alpha[1] / s, alpha[2] / s])
}

pub fn lambda_distribution(alpha: &[f64; 3]) -> Result<[f64; 3], KernelError> {
    let d = IDEAL_WEIGHTS;
    normalize(&[alpha[0] / d[0], alpha[1] / d[1], alpha[2] / d[2]])
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WeightSet {
    pub beta: [f64; 3],
    pub tau: f64,
    pub alpha: [f64; 3],
    pub omega: [f64; 3],
    pub lambda: [f64; 3],
    pub zeta: f64,
    pub xi: [f64; 3],
}

/// Weighted value at the window's interface, with every intermediate quantity.
pub fn reconstruct_interface(
    w: &StencilWindow,
    cfg: &SchemeConfig,
    dx: f64,
) -> Result<(f64, WeightSet), KernelError> {
    let v = w.upwind();
    let beta = betas_plus(&v);
    let tau = tau_global(&beta);
    let un = unnormalized_weights(cfg, &beta, tau, dx)?;
    let omega = normalize(&un.alpha)?;
    let lambda = lambda_distribution(&un.alpha)?;
    let q = candidates_plus(&v);
    let value = omega[0] * q[0] + omega[1] * q[1] + omega[2] * q[2];
    Ok((
        value,
        WeightSet {
            beta,
            tau,
            alpha: un.alpha,
            omega,
            lambda,
            zeta: un.zeta,
            xi: un.xi,
        },
    ))
}

/// Validated scheme bound to a grid spacing: the solver hot path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reconstructor {
    cfg: SchemeConfig,
    eta: f64,
}

impl Reconstructor {
    pub fn new(cfg: SchemeConfig, dx: f64) -> Result<Self, KernelError> {
        cfg.validate()?;
        if !(dx.is_finite() && dx > 0.0) {
            return Err(KernelError::BadDx(dx));
        }
        Ok(Self {
            cfg,
            eta: cfg.eta_for(dx),
        })
    }

    pub fn config(&self) -> &SchemeConfig {
        &self.cfg
    }

    /// Normalized weights for an upwind-ordered window.
    #[inline]
    pub fn weights(&self, v: &[f64; 5]) -> [f64; 3] {
        let b = betas_plus(v);
        let a = alpha_core(&self.cfg, self.eta, &b, tau_global(&b));
        let s = a[0] + a[1] + a[2];
        [a[0] / s, a[1] / s, a[2] / s]
    }

    /// Unnormalized weights for an upwind-ordered window.
    #[inline]
    pub fn alphas(&self, v: &[f64; 5]) -> [f64; 3] {
        let b = betas_plus(v);
        alpha_core(&self.cfg, self.eta, &b, tau_global(&b))
    }

    /// Value at the downwind face of an upwind-ordered window.
    #[inline]
    pub fn reconstruct(&self, v: &[f64; 5]) -> f64 {
        if self.cfg.kind == SchemeKind::Linear {
            let q = candidates_plus(v);
            return 0.1 * q[0] + 0.6 * q[1] + 0.3 * q[2];
        }
        let w = self.weights(v);
        let q = candidates_plus(v);
        w[0] * q[0] + w[1] * q[1] + w[2] * q[2]
    }
}
