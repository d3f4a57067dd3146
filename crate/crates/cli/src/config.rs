//! Flat `key = value` run configuration.

use std::fmt;
use std::str::FromStr;

use weno_core::problems::{ProblemId, TestFunction, Triangle};
use weno_core::solver::ReconstructionMode;
use weno_core::weno::SchemeKind;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Accuracy,
    Adr,
    Weights,
    EkTable,
    Distribution,
}

impl Command {
    pub const ALL: [Command; 6] = [
        Self::Solve,
        Self::Accuracy,
        Self::Adr,
        Self::Weights,
        Self::EkTable,
        Self::Distribution,
    ];

    pub fn id(self) -> &'static str {
        match self {
            Self::Solve => "solve",
            Self::Accuracy => "accuracy",
            Self::Adr => "adr",
            Self::Weights => "weights",
            Self::EkTable => "ek-table",
            Self::Distribution => "distribution",
        }
    }
}

impl FromStr for Command {
    type Err = CliError;
    fn from_str(s: &str) -> Result<Self, CliError> {
        Self::ALL.into_iter().find(|c| c.id() == s).ok_or_else(|| {
            let valid: Vec<&str> = Self::ALL.iter().map(|c| c.id()).collect();
            CliError::Config(format!(
                "unknown command '{s}' (valid: {})",
                valid.join(", ")
            ))
        })
    }
}

impl fmt::Display for Command {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.id())
    }
}

/// Every recognised key, in serialization order.
pub const KEYS: [&str; 20] = [
    "command",
    "problem",
    "scheme",
    "function",
    "n",
    "nx",
    "ny",
    "cfl",
    "t_final",
    "epsilon",
    "p",
    "eta",
    "c",
    "mode",
    "triangle",
    "resolutions",
    "record_times",
    "n_points",
    "dt_probe",
    "output",
];

/// A parsed run description. Unset fields fall back to problem defaults.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub problem: Option<ProblemId>,
    pub scheme: Option<SchemeKind>,
    pub function: Option<TestFunction>,
    pub n: Option<usize>,
    pub nx: Option<usize>,
    pub ny: Option<usize>,
    pub cfl: Option<f64>,
    pub t_final: Option<f64>,
    pub epsilon: Option<f64>,
    pub p: Option<f64>,
    pub eta: Option<f64>,
    pub c: Option<[f64; 3]>,
    pub mode: Option<ReconstructionMode>,
    pub triangle: Option<Triangle>,
    pub resolutions: Option<Vec<usize>>,
    pub record_times: Option<Vec<f64>>,
    pub n_points: Option<usize>,
    pub dt_probe: Option<f64>,
    pub output: Option<String>,
}

fn bad(key: &str, value: &str, why: impl fmt::Display) -> CliError {
    CliError::Config(format!("{key} = '{value}': {why}"))
}

fn count(key: &str, v: &str) -> Result<usize, CliError> {
    let n: usize = v.parse().map_err(|e| bad(key, v, e))?;
    if n == 0 {
        return Err(bad(key, v, "must be positive"));
    }
    Ok(n)
}

fn positive(key: &str, v: &str) -> Result<f64, CliError> {
    let x: f64 = v.parse().map_err(|e| bad(key, v, e))?;
    if !(x.is_finite() && x > 0.0) {
        return Err(bad(key, v, "must be positive and finite"));
    }
    Ok(x)
}

fn list<T>(
    key: &str,
    v: &str,
    item: impl Fn(&str, &str) -> Result<T, CliError>,
) -> Result<Vec<T>, CliError> {
    let items: Vec<T> = v
        .split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| item(key, s))
        .collect::<Result<_, _>>()?;
    if items.is_empty() {
        return Err(bad(key, v, "empty list"));
    }
    Ok(items)
}

fn join<T: fmt::Display>(v: &[T]) -> String {
    v.iter()
        .map(|x| x.to_string())
        .collect::<Vec<_>>()
        .join(",")
}

impl RunConfig {
    /// Set one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), CliError> {
        let v = value.trim();
        match key {
            "command" => self.command = Some(v.parse()?),
            "problem" => {
                self.problem = Some(v.parse().map_err(|e| {
                    let valid: Vec<&str> = ProblemId::ALL.iter().map(|p| p.id()).collect();
                    bad(key, v, format!("{e} (valid: {})", valid.join(", ")))
                })?)
            }
            "scheme" => self.scheme = Some(v.parse().map_err(|e| bad(key, v, e))?),
            "function" => self.function = Some(v.parse().map_err(|e| bad(key, v, e))?),
            "n" => self.n = Some(count(key, v)?),
            "nx" => self.nx = Some(count(key, v)?),
            "ny" => self.ny = Some(count(key, v)?),
            "n_points" => self.n_points = Some(count(key, v)?),
            "cfl" => self.cfl = Some(positive(key, v)?),
            "t_final" => self.t_final = Some(positive(key, v)?),
            "epsilon" => self.epsilon = Some(positive(key, v)?),
            "p" => self.p = Some(positive(key, v)?),
            "eta" => self.eta = Some(positive(key, v)?),
            "dt_probe" => self.dt_probe = Some(positive(key, v)?),
            "c" => {
                let c = list(key, v, positive)?;
                let c: [f64; 3] = c
                    .try_into()
                    .map_err(|_| bad(key, v, "expected three comma-separated values"))?;
                self.c = Some(c);
            }
            "mode" => self.mode = Some(v.parse().map_err(|e| bad(key, v, e))?),
            "triangle" => self.triangle = Some(v.parse().map_err(|e| bad(key, v, e))?),
            "resolutions" => self.resolutions = Some(list(key, v, count)?),
            "record_times" => {
                self.record_times = Some(list(key, v, |k, s| {
                    let t: f64 = s.parse().map_err(|e| bad(k, s, e))?;
                    if !(t.is_finite() && t >= 0.0) {
                        return Err(bad(k, s, "must be finite and non-negative"));
                    }
                    Ok(t)
                })?)
            }
            "output" => {
                if v.is_empty() {
                    return Err(bad(key, v, "empty path"));
                }
                self.output = Some(v.to_string());
            }
            other => {
                return Err(CliError::Config(format!(
                    "unknown key '{other}' (valid: {})",
                    KEYS.join(", ")
                )))
            }
        }
        Ok(())
    }

    /// Apply every set field of `other` on top of `self`.
    pub fn merge(&mut self, other: RunConfig) {
        macro_rules! take {
            ($($f:ident),*) => { $( if other.$f.is_some() { self.$f = other.$f; } )* };
        }
        take!(
            command,
            problem,
            scheme,
            function,
            n,
            nx,
            ny,
            cfl,
            t_final,
            epsilon,
            p,
            eta,
            c,
            mode,
            triangle,
            resolutions,
            record_times,
            n_points,
            dt_probe,
            output
        );
    }

    /// `(key, value)` pairs of the set fields, in `KEYS` order.
    pub fn pairs(&self) -> Vec<(&'static str, String)> {
        let mut out = Vec::new();
        let mut put = |k: &'static str, v: Option<String>| {
            if let Some(v) = v {
                out.push((k, v));
            }
        };
        put("command", self.command.map(|c| c.id().to_string()));
        put("problem", self.problem.map(|p| p.id().to_string()));
        put("scheme", self.scheme.map(|s| s.id().to_string()));
        put("function", self.function.map(|f| f.id().to_string()));
        put("n", self.n.map(|v| v.to_string()));
        put("nx", self.nx.map(|v| v.to_string()));
        put("ny", self.ny.map(|v| v.to_string()));
        put("cfl", self.cfl.map(|v| v.to_string()));
        put("t_final", self.t_final.map(|v| v.to_string()));
        put("epsilon", self.epsilon.map(|v| v.to_string()));
        put("p", self.p.map(|v| v.to_string()));
        put("eta", self.eta.map(|v| v.to_string()));
        put("c", self.c.map(|c| join(&c)));
        put("mode", self.mode.map(|m| m.id().to_string()));
        put("triangle", self.triangle.map(|t| t.id().to_string()));
        put("resolutions", self.resolutions.as_deref().map(join));
        put("record_times", self.record_times.as_deref().map(join));
        put("n_points", self.n_points.map(|v| v.to_string()));
        put("dt_probe", self.dt_probe.map(|v| v.to_string()));
        put("output", self.output.clone());
        out
    }

    /// One `key = value` line per set field; `parse_config` reads it back.
    pub fn to_text(&self) -> String {
        self.pairs()
            .into_iter()
            .map(|(k, v)| format!("{k} = {v}\n"))
            .collect()
    }

    /// Single-line form used in CSV headers.
    pub fn to_line(&self) -> String {
        self.pairs()
            .into_iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(" ")
    }
}

/// Parse `key = value` lines. `#` starts a comment; blank lines are skipped.
pub fn parse_config(text: &str) -> Result<RunConfig, CliError> {
    let mut cfg = RunConfig::default();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| CliError::Config(format!("line {}: expected key = value", no + 1)))?;
        cfg.set(k.trim(), v)
            .map_err(|e| CliError::Config(format!("line {}: {e}", no + 1)))?;
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn accuracy_example() {
        let c = parse_config("command=accuracy\nscheme=zc\nfunction=f1").unwrap();
        assert_eq!(c.command, Some(Command::Accuracy));
        assert_eq!(c.scheme, Some(SchemeKind::Zc));
        assert_eq!(c.function, Some(TestFunction::F1));
        assert!(c.resolutions.is_none());
    }

    #[test]
    fn unknown_scheme_lists_ids() {
        let e = parse_config("scheme=banana").unwrap_err().to_string();
        assert!(e.contains("banana"), "{e}");
        for id in ["js", "zc", "zcplus"] {
            assert!(e.contains(id), "{e}");
        }
    }

    #[test]
    fn rejects_bad_input() {
        assert!(parse_config("colour = red")
            .unwrap_err()
            .to_string()
            .contains("unknown key"));
        assert!(parse_config("n = twelve").is_err());
        assert!(parse_config("cfl = -0.5").is_err());
        assert!(parse_config("cfl = inf").is_err());
        assert!(parse_config("c = 1,2").is_err());
        assert!(parse_config("just words").is_err());
        assert!(parse_config("command = dance").is_err());
    }

    #[test]
    fn comments_and_blanks() {
        let c = parse_config("# header\n\n  n = 50   # trailing\ncfl=0.25\n").unwrap();
        assert_eq!(c.n, Some(50));
        assert_eq!(c.cfl, Some(0.25));
    }

    #[test]
    fn round_trip() {
        let text = "command = weights\nproblem = titarev_toro\nscheme = zc+\nn = 1000\ncfl = 0.1\n\
                    t_final = 0.30000000000000004\nepsilon = 1e-40\np = 2\neta = 0.0123\nc = 0.75,1.5,0.75\n\
                    mode = componentwise\ntriangle = printed\nresolutions = 25,50\nrecord_times = 0,0.5\n\
                    n_points = 64\ndt_probe = 1e-10\noutput = out.csv\nfunction = f2\nnx = 4\nny = 5\n";
        let a = parse_config(text).unwrap();
        let b = parse_config(&a.to_text()).unwrap();
        assert_eq!(a, b);
        assert_eq!(b.t_final, Some(0.30000000000000004));
    }

    #[test]
    fn merge_overrides() {
        let mut base = parse_config("scheme = z\nn = 100").unwrap();
        base.merge(parse_config("n = 200").unwrap());
        assert_eq!((base.scheme, base.n), (Some(SchemeKind::Z), Some(200)));
    }
}
