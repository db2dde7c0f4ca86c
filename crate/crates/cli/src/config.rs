//! Scenario files: INI sections with `key = value` pairs. Unknown sections or
//! keys are errors.
//!
//! Comments take a whole line (`;` or `#`); a `;` after a value is part of
//! the value.
//!
//! ```ini
//! [scenario]
//! name = fig3
//! ; su11 | su2
//! kind = su11
//! ; time | n_sweep
//! mode = time
//!
//! [map]
//! Phi0 = 100
//! Lambda0 = 0.01
//! phi0 = 0
//! ; feed -Phi0 to the formulas
//! flip_phi = true
//!
//! [hamiltonian]
//! ; omega_I(t) = gamma^2 t; the other entries are polynomial coefficients c0, c1, ...
//! gamma = 0.5
//! omega_R = 0
//! alpha_abs = 0
//! alpha_phase = 0
//! beta_abs = 0
//! beta_phase = 0
//!
//! [evolution]
//! l = 1
//! r0 = 0
//! ; su2 sector sizes
//! n = 1, 10, 100
//!
//! [time]
//! ; auto (0.999 T) or a number
//! t_end = auto
//! samples = 400
//!
//! [solver]
//! ; auto | closed | ode
//! method = auto
//! rtol = 1e-10
//! atol = 1e-12
//!
//! ; n_sweep mode only
//! [sweep]
//! n_min = 1
//! n_max = 100
//! r = 0.7853981633974483
//!
//! [output]
//! series = S_lin, r
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use ini::Ini;
use pseudoherm::AlgebraKind;
use serde::Serialize;

use crate::error::CliError;

pub const PRESET_NAMES: [&str; 7] = ["fig1", "fig2", "fig3", "fig4", "fig5", "fig6", "fig7"];

pub fn preset_text(name: &str) -> Option<&'static str> {
    Some(match name {
        "fig1" => include_str!("../presets/fig1.ini"),
        "fig2" => include_str!("../presets/fig2.ini"),
        "fig3" => include_str!("../presets/fig3.ini"),
        "fig4" => include_str!("../presets/fig4.ini"),
        "fig5" => include_str!("../presets/fig5.ini"),
        "fig6" => include_str!("../presets/fig6.ini"),
        "fig7" => include_str!("../presets/fig7.ini"),
        _ => return None,
    })
}

pub fn preset(name: &str) -> Result<Scenario, CliError> {
    let text = preset_text(name).ok_or_else(|| {
        CliError::Parse(format!(
            "unknown preset '{name}' (available: {})",
            PRESET_NAMES.join(", ")
        ))
    })?;
    Scenario::parse(text)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Time,
    NSweep,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Auto,
    Closed,
    Ode,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TimeEnd {
    Auto,
    Explicit(f64),
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Sweep {
    pub n_min: usize,
    pub n_max: usize,
    pub r: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Scenario {
    pub name: String,
    #[serde(serialize_with = "ser_kind")]
    pub kind: AlgebraKind,
    pub mode: Mode,
    #[serde(rename = "Phi0")]
    pub phi_amp0: f64,
    #[serde(rename = "Lambda0")]
    pub lambda0: f64,
    pub phi0: f64,
    pub flip_phi: bool,
    pub gamma: f64,
    pub omega_re: Vec<f64>,
    pub alpha_abs: Vec<f64>,
    pub alpha_phase: Vec<f64>,
    pub beta_abs: Vec<f64>,
    pub beta_phase: Vec<f64>,
    pub l: i32,
    pub r0: f64,
    pub n: Vec<usize>,
    pub t_end: TimeEnd,
    pub samples: usize,
    pub method: Method,
    pub rtol: f64,
    pub atol: f64,
    pub sweep: Sweep,
    pub series: Vec<String>,
}

fn ser_kind<S: serde::Serializer>(k: &AlgebraKind, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(k.name())
}

const SCHEMA: &[(&str, &[&str])] = &[
    ("scenario", &["name", "kind", "mode"]),
    ("map", &["Phi0", "Lambda0", "phi0", "flip_phi"]),
    (
        "hamiltonian",
        &["gamma", "omega_R", "alpha_abs", "alpha_phase", "beta_abs", "beta_phase"],
    ),
    ("evolution", &["l", "r0", "n"]),
    ("time", &["t_end", "samples"]),
    ("solver", &["method", "rtol", "atol"]),
    ("sweep", &["n_min", "n_max", "r"]),
    ("output", &["series"]),
];

/// Columns a time-mode run can produce, besides `t` and `gamma_t`.
pub const TIME_SERIES: &[&str] = &[
    "Phi",
    "phi",
    "Lambda",
    "z_abs",
    "eps",
    "mu_abs",
    "r",
    "phase",
    "S_lin",
    "W",
    "U_abs",
    "U_arg",
    "herm_residual",
    "Omega",
];
pub const DEFAULT_SERIES: &[&str] = &["Phi", "phi", "Lambda", "z_abs", "eps", "mu_abs", "r", "phase", "S_lin"];

struct Entries(BTreeMap<(String, String), String>);

impl Entries {
    fn take(&mut self, section: &str, key: &str) -> Option<String> {
        self.0.remove(&(section.to_string(), key.to_string()))
    }

    fn real(&mut self, section: &str, key: &str, default: f64) -> Result<f64, CliError> {
        match self.take(section, key) {
            None => Ok(default),
            Some(v) => parse_real(&v).map_err(|e| CliError::Parse(format!("[{section}] {key}: {e}"))),
        }
    }

    fn list(&mut self, section: &str, key: &str, default: &[f64]) -> Result<Vec<f64>, CliError> {
        match self.take(section, key) {
            None => Ok(default.to_vec()),
            Some(v) => split_list(&v)
                .map(parse_real)
                .collect::<Result<Vec<_>, _>>()
                .map_err(|e| CliError::Parse(format!("[{section}] {key}: {e}"))),
        }
    }

    fn integer<N: std::str::FromStr>(&mut self, section: &str, key: &str, default: N) -> Result<N, CliError> {
        match self.take(section, key) {
            None => Ok(default),
            Some(v) => v
                .trim()
                .parse()
                .map_err(|_| CliError::Parse(format!("[{section}] {key}: expected an integer, got '{v}'"))),
        }
    }
}

fn split_list(v: &str) -> impl Iterator<Item = &str> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty())
}

fn parse_real(v: &str) -> Result<f64, String> {
    let x: f64 = v
        .trim()
        .parse()
        .map_err(|_| format!("expected a number, got '{}'", v.trim()))?;
    if !x.is_finite() {
        return Err(format!("value must be finite, got '{}'", v.trim()));
    }
    Ok(x)
}

fn parse_bool(v: &str) -> Result<bool, String> {
    match v.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(format!("expected true/false, got '{other}'")),
    }
}

impl Scenario {
    pub fn from_file(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Parse(format!("cannot read {}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        let ini = Ini::load_from_str(text).map_err(|e| CliError::Parse(e.to_string()))?;
        let mut map = BTreeMap::new();
        for (section, props) in ini.iter() {
            let Some(section) = section else {
                if props.iter().next().is_some() {
                    return Err(CliError::Parse("keys outside a section".into()));
                }
                continue;
            };
            let Some((_, keys)) = SCHEMA.iter().find(|(s, _)| *s == section) else {
                return Err(CliError::Parse(format!("unknown section [{section}]")));
            };
            for (key, value) in props.iter() {
                if !keys.contains(&key) {
                    return Err(CliError::Parse(format!("unknown key '{key}' in [{section}]")));
                }
                if map
                    .insert((section.to_string(), key.to_string()), value.to_string())
                    .is_some()
                {
                    return Err(CliError::Parse(format!("duplicate key '{key}' in [{section}]")));
                }
            }
        }
        let mut e = Entries(map);

        let name = e.take("scenario", "name").unwrap_or_else(|| "scenario".into());
        if name.is_empty() || !name.chars().all(|c| c.is_ascii_alphanumeric() || c == '_' || c == '-') {
            return Err(CliError::Parse(format!(
                "[scenario] name '{name}' must be alphanumeric, '_' or '-'"
            )));
        }
        let kind: AlgebraKind = e
            .take("scenario", "kind")
            .ok_or_else(|| CliError::Parse("[scenario] kind is required".into()))?
            .trim()
            .parse()
            .map_err(|err: pseudoherm::Error| CliError::Parse(format!("[scenario] kind: {err}")))?;
        let mode = match e.take("scenario", "mode").as_deref().map(str::trim) {
            None | Some("time") => Mode::Time,
            Some("n_sweep") => Mode::NSweep,
            Some(other) => return Err(CliError::Parse(format!("[scenario] mode: unknown value '{other}'"))),
        };

        let phi_amp0 = e.real("map", "Phi0", 100.0)?;
        let lambda0 = e.real("map", "Lambda0", 0.01)?;
        let phi0 = e.real("map", "phi0", 0.0)?;
        let flip_phi = match e.take("map", "flip_phi") {
            None => false,
            Some(v) => parse_bool(&v).map_err(|err| CliError::Parse(format!("[map] flip_phi: {err}")))?,
        };

        let gamma = e.real("hamiltonian", "gamma", 0.5)?;
        let omega_re = e.list("hamiltonian", "omega_R", &[0.0])?;
        let alpha_abs = e.list("hamiltonian", "alpha_abs", &[0.0])?;
        let alpha_phase = e.list("hamiltonian", "alpha_phase", &[0.0])?;
        let beta_abs = e.list("hamiltonian", "beta_abs", &[0.0])?;
        let beta_phase = e.list("hamiltonian", "beta_phase", &[0.0])?;

        let l = e.integer("evolution", "l", 1i32)?;
        let r0 = e.real("evolution", "r0", 0.0)?;
        let n = match e.take("evolution", "n") {
            None => vec![if kind == AlgebraKind::Su2 { 1 } else { 0 }],
            Some(v) => split_list(&v)
                .map(|s| s.parse::<usize>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| CliError::Parse(format!("[evolution] n: expected integers, got '{v}'")))?,
        };

        let t_end = match e.take("time", "t_end") {
            None => TimeEnd::Auto,
            Some(v) if v.trim() == "auto" => TimeEnd::Auto,
            Some(v) => {
                TimeEnd::Explicit(parse_real(&v).map_err(|err| CliError::Parse(format!("[time] t_end: {err}")))?)
            }
        };
        let samples = e.integer("time", "samples", 400usize)?;

        let method = match e.take("solver", "method").as_deref().map(str::trim) {
            None | Some("auto") => Method::Auto,
            Some("closed") => Method::Closed,
            Some("ode") => Method::Ode,
            Some(other) => return Err(CliError::Parse(format!("[solver] method: unknown value '{other}'"))),
        };
        let rtol = e.real("solver", "rtol", 1e-10)?;
        let atol = e.real("solver", "atol", 1e-12)?;

        let sweep = Sweep {
            n_min: e.integer("sweep", "n_min", 1usize)?,
            n_max: e.integer("sweep", "n_max", 100usize)?,
            r: e.real("sweep", "r", std::f64::consts::FRAC_PI_4)?,
        };

        let series = match e.take("output", "series") {
            None => Vec::new(),
            Some(v) => split_list(&v).map(String::from).collect(),
        };
        debug_assert!(e.0.is_empty());

        let sc = Scenario {
            name,
            kind,
            mode,
            phi_amp0,
            lambda0,
            phi0,
            flip_phi,
            gamma,
            omega_re,
            alpha_abs,
            alpha_phase,
            beta_abs,
            beta_phase,
            l,
            r0,
            n,
            t_end,
            samples,
            method,
            rtol,
            atol,
            sweep,
            series,
        };
        sc.validate()?;
        Ok(sc)
    }

    pub fn validate(&self) -> Result<(), CliError> {
        let bad = |m: String| Err(CliError::Parse(m));
        if !(self.gamma > 0.0) {
            return bad(format!("gamma must be positive, got {}", self.gamma));
        }
        if self.samples < 2 {
            return bad(format!("samples must be at least 2, got {}", self.samples));
        }
        if self.phi_amp0 < 0.0 {
            return bad("Phi0 is an amplitude and must be >= 0 (use flip_phi for the sign)".into());
        }
        if !(self.lambda0 > 0.0) {
            return bad(format!("Lambda0 must be positive, got {}", self.lambda0));
        }
        if self.n.is_empty() {
            return bad("[evolution] n must not be empty".into());
        }
        if self.kind == AlgebraKind::Su2 && self.n.iter().any(|&n| n < 1) {
            return bad("su2 requires n >= 1".into());
        }
        if !(self.rtol > 0.0 && self.atol > 0.0) {
            return bad("solver tolerances must be positive".into());
        }
        if let TimeEnd::Explicit(t) = self.t_end {
            if !(t > 0.0) {
                return bad(format!("t_end must be positive, got {t}"));
            }
        }
        if self.method == Method::Closed && !self.is_k0() {
            return bad("closed forms need alpha = beta = 0; use method = ode".into());
        }
        if self.t_end == TimeEnd::Auto && self.mode == Mode::Time && !self.is_k0() {
            return bad("t_end = auto needs alpha = beta = 0; give an explicit t_end".into());
        }
        match self.mode {
            Mode::Time => {
                for s in &self.series {
                    if !TIME_SERIES.contains(&s.as_str()) {
                        return bad(format!("unknown series '{s}' (available: {})", TIME_SERIES.join(", ")));
                    }
                }
            }
            Mode::NSweep => {
                if self.kind != AlgebraKind::Su2 {
                    return bad("n_sweep mode is defined for su2 only".into());
                }
                if self.sweep.n_min < 1 || self.sweep.n_max < self.sweep.n_min {
                    return bad("sweep needs 1 <= n_min <= n_max".into());
                }
                if !(self.sweep.r >= 0.0) {
                    return bad("sweep r must be >= 0".into());
                }
                if self.series.iter().any(|s| s != "S_lin" && s != "r") {
                    return bad("n_sweep mode produces only the series r, S_lin".into());
                }
            }
        }
        Ok(())
    }

    pub fn is_k0(&self) -> bool {
        self.alpha_abs.iter().all(|c| *c == 0.0) && self.beta_abs.iter().all(|c| *c == 0.0)
    }

    pub fn series_or_default(&self) -> Vec<String> {
        if self.series.is_empty() {
            DEFAULT_SERIES.iter().map(|s| s.to_string()).collect()
        } else {
            self.series.clone()
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn presets_parse() {
        for name in PRESET_NAMES {
            let sc = preset(name).unwrap();
            assert_eq!(sc.name, name);
            assert_eq!(sc.gamma, 0.5);
        }
        assert_eq!(preset("fig7").unwrap().n, vec![1, 10, 100]);
        assert!(preset("fig3").unwrap().flip_phi);
    }

    #[test]
    fn defaults() {
        let sc = Scenario::parse("[scenario]\nkind = su2\n").unwrap();
        assert_eq!(sc.n, vec![1]);
        assert_eq!(sc.l, 1);
        assert_eq!(sc.t_end, TimeEnd::Auto);
        assert_eq!(sc.method, Method::Auto);
        assert_eq!(sc.series_or_default().len(), DEFAULT_SERIES.len());
    }

    #[test]
    fn rejects_unknown_keys_and_sections() {
        assert!(matches!(
            Scenario::parse("[scenario]\nkind = su2\ncolour = red\n"),
            Err(CliError::Parse(_))
        ));
        assert!(Scenario::parse("[scenario]\nkind = su2\n[extra]\na = 1\n").is_err());
        assert!(Scenario::parse("kind = su2\n").is_err());
        assert!(Scenario::parse("[scenario]\nkind = su3\n").is_err());
    }

    #[test]
    fn rejects_invalid_values() {
        for text in [
            "[scenario]\nkind = su2\n[hamiltonian]\ngamma = 0\n",
            "[scenario]\nkind = su2\n[time]\nsamples = 1\n",
            "[scenario]\nkind = su2\n[evolution]\nn = 0\n",
            "[scenario]\nkind = su2\n[map]\nLambda0 = -1\n",
            "[scenario]\nkind = su2\n[map]\nPhi0 = abc\n",
            "[scenario]\nkind = su2\n[output]\nseries = Phi, nope\n",
            "[scenario]\nkind = su2\n[hamiltonian]\nalpha_abs = 0.1\n",
            "[scenario]\nkind = su11\nmode = n_sweep\n",
        ] {
            assert!(Scenario::parse(text).is_err(), "{text}");
        }
    }

    #[test]
    fn general_profile_with_explicit_end() {
        let sc = Scenario::parse(
            "[scenario]\nkind = su11\n[hamiltonian]\nalpha_abs = 0.1, 0.02\nbeta_phase = 0.3\n[time]\nt_end = 2\n",
        )
        .unwrap();
        assert_eq!(sc.alpha_abs, vec![0.1, 0.02]);
        assert!(!sc.is_k0());
        assert_eq!(sc.t_end, TimeEnd::Explicit(2.0));
    }
}
