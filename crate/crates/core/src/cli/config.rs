//! Flat `key = value` run configuration with dotted section keys.
//!
//! Sources are applied in order: built-in defaults, the `--config` file,
//! `--set` overrides, then dedicated flags. A config file may also be a CSV
//! produced by this tool; its `# config:` header block is read back so that
//! re-running reproduces the file.

use std::collections::BTreeMap;
use std::fmt;

/// Known keys in echo order, with defaults (`None` = unset unless supplied).
pub const KEYS: &[(&str, Option<&str>, &str)] = &[
    ("physics.gamma", None, "wide-band decay rate; 1 unless physics.d0 is given"),
    ("physics.d0", None, "Lorentzian height, gamma = 2 pi d0 (exclusive with physics.gamma)"),
    ("physics.lambda", Some("10"), "Lorentzian half-width"),
    ("physics.omega0", Some("100"), "Lorentzian center"),
    ("physics.e_g", Some("0"), "ground level energy"),
    ("physics.tau", None, "measurement interval (explicit parameterization, list allowed)"),
    ("physics.e", None, "energy offset E (explicit parameterization)"),
    ("scaling.x", None, "scaling variable lambda*tau (list allowed)"),
    ("scaling.c", None, "E / lambda"),
    ("time.t_final", Some("5"), "simulated horizon"),
    ("time.dt", Some("0.01"), "coarse step of jump trajectories and the master equation"),
    ("volterra.h", Some("0.001"), "Volterra kernel spacing"),
    ("drive.rabi", Some("0.1"), "Rabi amplitude"),
    ("drive.delta", Some("0"), "detuning in the simulation frame"),
    ("homodyne.phi", Some("0"), "local-oscillator phase"),
    ("homodyne.dt", Some("0.001"), "integration step of the diffusive unraveling"),
    ("init.p_excited", Some("1"), "initial excited population"),
    ("init.phase", Some("0"), "relative phase of the ground amplitude"),
    ("ensemble.n_traj", Some("2000"), "number of trajectories"),
    ("ensemble.samples", Some("50"), "number of sample times"),
    ("ensemble.z", Some("3"), "z-score threshold"),
    ("rate.x_log", None, "log sweep min,max,points for the rate command"),
    ("zeno.k", Some("1"), "K = sum of squared couplings"),
    ("zeno.t", Some("1"), "total time"),
    ("zeno.tau", Some("0.05,0.02,0.01,0.005,0.002,0.001"), "measurement intervals"),
    ("run.seed", Some("1"), "master seed"),
    ("run.solver", Some("all"), "analytic | scaled | volterra | all"),
    ("run.kind", Some("mcwf"), "mcwf | homodyne"),
];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError(pub String);

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for ConfigError {}

fn err<T>(msg: impl Into<String>) -> Result<T, ConfigError> {
    Err(ConfigError(msg.into()))
}

/// Resolved key/value pairs.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct RunConfig {
    values: BTreeMap<&'static str, String>,
}

fn known_key(key: &str) -> Option<&'static str> {
    KEYS.iter().map(|k| k.0).find(|k| *k == key)
}

impl RunConfig {
    pub fn defaults() -> Self {
        let values = KEYS
            .iter()
            .filter_map(|&(k, d, _)| d.map(|d| (k, d.to_string())))
            .collect();
        RunConfig { values }
    }

    pub fn set(&mut self, key: &str, value: &str, location: &str) -> Result<(), ConfigError> {
        let Some(k) = known_key(key) else {
            return err(format!("{location}: unknown key `{key}`"));
        };
        let value = value.trim();
        if value.is_empty() {
            return err(format!("{location}: empty value for `{key}`"));
        }
        self.values.insert(k, value.to_string());
        Ok(())
    }

    /// Parses `key = value` from a `--set` argument.
    pub fn apply_assignment(&mut self, text: &str, location: &str) -> Result<(), ConfigError> {
        let Some((k, v)) = text.split_once('=') else {
            return err(format!("{location}: expected key=value, got `{text}`"));
        };
        self.set(k.trim(), v, location)
    }

    /// Applies a config file. `#` starts a comment; a CSV written by this
    /// tool is recognized by its first line and only its config block is read.
    pub fn apply_file(&mut self, text: &str, path: &str) -> Result<(), ConfigError> {
        let is_output = text.lines().next().is_some_and(|l| l.starts_with("# qtraj "));
        if is_output {
            let mut in_block = false;
            for (n, line) in text.lines().enumerate() {
                let loc = format!("{path}:{}", n + 1);
                match line {
                    "# config:" => in_block = true,
                    _ if in_block && !line.starts_with("# ") => break,
                    _ if in_block && line.ends_with(':') => break,
                    _ if in_block => self.apply_assignment(&line[2..], &loc)?,
                    _ => {}
                }
            }
            return Ok(());
        }
        for (n, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            self.apply_assignment(line, &format!("{path}:{}", n + 1))?;
        }
        Ok(())
    }

    pub fn remove(&mut self, key: &str) {
        self.values.remove(key);
    }

    pub fn contains(&self, key: &str) -> bool {
        self.values.contains_key(key)
    }

    pub fn raw(&self, key: &str) -> Option<&str> {
        self.values.get(key).map(String::as_str)
    }

    pub fn get_f64(&self, key: &str) -> Result<Option<f64>, ConfigError> {
        self.raw(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| ConfigError(format!("key `{key}`: `{v}` is not a number")))
            })
            .transpose()
    }

    pub fn require_f64(&self, key: &str) -> Result<f64, ConfigError> {
        self.get_f64(key)?
            .ok_or_else(|| ConfigError(format!("missing required key `{key}`")))
    }

    pub fn get_list(&self, key: &str) -> Result<Option<Vec<f64>>, ConfigError> {
        self.raw(key)
            .map(|v| {
                v.split(',')
                    .map(|s| {
                        s.trim().parse::<f64>().map_err(|_| {
                            ConfigError(format!("key `{key}`: `{}` is not a number", s.trim()))
                        })
                    })
                    .collect()
            })
            .transpose()
    }

    pub fn require_u64(&self, key: &str) -> Result<u64, ConfigError> {
        let v = self
            .raw(key)
            .ok_or_else(|| ConfigError(format!("missing required key `{key}`")))?;
        v.parse::<u64>()
            .map_err(|_| ConfigError(format!("key `{key}`: `{v}` is not a nonnegative integer")))
    }

    /// `key = value` lines in the canonical key order.
    pub fn echo(&self) -> Vec<String> {
        KEYS.iter()
            .filter_map(|&(k, _, _)| self.values.get(k).map(|v| format!("{k} = {v}")))
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_override() {
        let mut c = RunConfig::defaults();
        c.apply_file("# comment\nphysics.lambda = 20  # inline\n\nscaling.x = 0.2,1\n", "f")
            .unwrap();
        c.apply_assignment("physics.lambda=30", "--set").unwrap();
        assert_eq!(c.get_f64("physics.lambda").unwrap(), Some(30.0));
        assert_eq!(c.get_list("scaling.x").unwrap(), Some(vec![0.2, 1.0]));
    }

    #[test]
    fn unknown_key_reports_location() {
        let mut c = RunConfig::defaults();
        let e = c.apply_file("physics.lambda = 1\nphysics.lamda = 2\n", "run.cfg").unwrap_err();
        assert!(e.0.contains("run.cfg:2"), "{}", e.0);
        assert!(e.0.contains("physics.lamda"));
        assert!(c.apply_assignment("novalue", "--set").is_err());
    }

    #[test]
    fn reads_back_echoed_header() {
        let mut c = RunConfig::defaults();
        c.set("scaling.x", "0.5", "t").unwrap();
        let mut text = String::from("# qtraj 0.1.0\n# command = rate\n# config:\n");
        for l in c.echo() {
            text.push_str(&format!("# {l}\n"));
        }
        text.push_str("# derived:\n# derived.tau = 0.05\nx,rate\n1,2\n");
        let mut d = RunConfig::default();
        d.apply_file(&text, "out.csv").unwrap();
        assert_eq!(c, d);
    }

    #[test]
    fn bad_number_is_reported() {
        let mut c = RunConfig::defaults();
        c.set("time.dt", "fast", "t").unwrap();
        assert!(c.get_f64("time.dt").unwrap_err().0.contains("time.dt"));
    }
}
