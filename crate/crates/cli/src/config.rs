use std::path::PathBuf;

use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentKind {
    BcjlHonest,
    BcjlAttack,
    ScriptAttack,
    FidelitySweep,
    TwoParty,
}

impl ExperimentKind {
    pub fn name(self) -> &'static str {
        match self {
            ExperimentKind::BcjlHonest => "bcjl-honest",
            ExperimentKind::BcjlAttack => "bcjl-attack",
            ExperimentKind::ScriptAttack => "script-attack",
            ExperimentKind::FidelitySweep => "fidelity-sweep",
            ExperimentKind::TwoParty => "two-party",
        }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Jsonl,
}

/// Which commitment scripts `script-attack` draws.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ScriptFamily {
    /// 2 Alice qubits, 1 Bob qubit, one qubit sent.
    #[default]
    Random,
    /// Same shape, with the bit hidden in a register Alice keeps.
    Concealing,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FunctionKind {
    #[default]
    Equality,
    Constant,
    Random,
}

/// One experiment, as read from JSON. Unknown fields are rejected.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub kind: ExperimentKind,
    #[serde(default)]
    pub master_seed: Option<u64>,
    #[serde(default = "default_trials")]
    pub trials: usize,
    #[serde(default)]
    pub n: Option<usize>,
    #[serde(default)]
    pub k: Option<usize>,
    #[serde(default)]
    pub epsilon: f64,
    #[serde(default)]
    pub threshold_factor: Option<f64>,
    /// Leak values in `[0, 1]` for `fidelity-sweep`.
    #[serde(default)]
    pub sweep: Option<Vec<f64>>,
    #[serde(default)]
    pub script: ScriptFamily,
    /// Input domain size for `two-party`.
    #[serde(default)]
    pub domain: Option<usize>,
    #[serde(default)]
    pub function: FunctionKind,
    #[serde(default)]
    pub out: Option<PathBuf>,
    #[serde(default)]
    pub format: Option<Format>,
}

fn default_trials() -> usize {
    1
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub format: Option<Format>,
}

pub const DEFAULT_DOMAIN: usize = 8;

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, CliError> {
        let de = &mut serde_json::Deserializer::from_str(text);
        serde_path_to_error::deserialize(de).map_err(|e| {
            let field = json_field(&e);
            CliError::config(field, e.into_inner().to_string())
        })
    }

    pub fn apply(&mut self, o: &Overrides) {
        if o.seed.is_some() {
            self.master_seed = o.seed;
        }
        if o.out.is_some() {
            self.out.clone_from(&o.out);
        }
        if o.format.is_some() {
            self.format = o.format;
        }
    }

    pub fn seed(&self) -> u64 {
        self.master_seed.unwrap_or_default()
    }

    pub fn sweep_grid(&self) -> Vec<f64> {
        self.sweep.clone().unwrap_or_else(|| (0..=10).map(|i| f64::from(i) / 10.0).collect())
    }

    /// Shape checks only; size limits are left to the library, which
    /// reports them as cap violations.
    pub fn validate(&self) -> Result<(), CliError> {
        if self.master_seed.is_none() {
            return Err(CliError::config("master_seed", "required (in the file or via --seed)"));
        }
        if self.trials == 0 {
            return Err(CliError::config("trials", "must be at least 1"));
        }
        if !(0.0..0.5).contains(&self.epsilon) {
            return Err(CliError::config("epsilon", format!("{} is outside [0, 0.5)", self.epsilon)));
        }
        if let Some(t) = self.threshold_factor {
            if !(t.is_finite() && t > 0.0) {
                return Err(CliError::config("threshold_factor", format!("{t} must be positive")));
            }
        }
        match self.kind {
            ExperimentKind::BcjlHonest | ExperimentKind::BcjlAttack => {
                let n = self.n.ok_or_else(|| CliError::config("n", format!("required for {}", self.kind.name())))?;
                let k = self.k.ok_or_else(|| CliError::config("k", format!("required for {}", self.kind.name())))?;
                if n == 0 {
                    return Err(CliError::config("n", "must be at least 1"));
                }
                if k == 0 || k > n {
                    return Err(CliError::config("k", format!("need 1 <= k <= n, got k={k} n={n}")));
                }
                if self.kind == ExperimentKind::BcjlAttack && self.epsilon != 0.0 {
                    return Err(CliError::config("epsilon", "bcjl-attack is simulated noiselessly; set 0"));
                }
            }
            ExperimentKind::FidelitySweep => {
                let grid = self.sweep_grid();
                if grid.is_empty() {
                    return Err(CliError::config("sweep", "needs at least one point"));
                }
                if let Some(bad) = grid.iter().find(|s| !(0.0..=1.0).contains(*s)) {
                    return Err(CliError::config("sweep", format!("leak {bad} is outside [0, 1]")));
                }
            }
            ExperimentKind::TwoParty => {
                if self.domain == Some(0) {
                    return Err(CliError::config("domain", "must be at least 1"));
                }
            }
            ExperimentKind::ScriptAttack => {}
        }
        Ok(())
    }
}

/// Best guess at the field a serde error is about.
fn json_field(e: &serde_path_to_error::Error<serde_json::Error>) -> String {
    let path = e.path().to_string();
    if path != "." {
        return path;
    }
    // errors on the whole object quote the field: "missing field `kind`"
    let msg = e.inner().to_string();
    msg.split('`').nth(1).map(str::to_string).unwrap_or_else(|| "config".to_string())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<ExperimentConfig, CliError> {
        let c = ExperimentConfig::from_json(text)?;
        c.validate()?;
        Ok(c)
    }

    fn field_of(e: CliError) -> String {
        match e {
            CliError::Config { field, .. } => field,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn minimal_configs_parse() {
        let c = parse(r#"{"kind": "bcjl-honest", "master_seed": 1, "n": 20, "k": 10, "trials": 5}"#).unwrap();
        assert_eq!(c.kind, ExperimentKind::BcjlHonest);
        assert_eq!(c.format, None);
        let c = parse(r#"{"kind": "fidelity-sweep", "master_seed": 0}"#).unwrap();
        assert_eq!(c.sweep_grid().len(), 11);
    }

    #[test]
    fn errors_name_the_field() {
        let cases = [
            (r#"{"kind": "bcjl-honest", "master_seed": 1, "k": 3}"#, "n"),
            (r#"{"kind": "bcjl-honest", "master_seed": 1, "n": 3, "k": 4}"#, "k"),
            (r#"{"kind": "script-attack", "master_seed": 1, "trials": 0}"#, "trials"),
            (r#"{"kind": "script-attack", "master_seed": 1, "epsilon": 0.7}"#, "epsilon"),
            (r#"{"kind": "script-attack"}"#, "master_seed"),
            (r#"{"kind": "script-attack", "master_seed": 1, "bogus": 2}"#, "bogus"),
            (r#"{"master_seed": 1}"#, "kind"),
            (r#"{"kind": "fidelity-sweep", "master_seed": 1, "sweep": [0.5, 2.0]}"#, "sweep"),
            (r#"{"kind": "bcjl-attack", "master_seed": 1, "n": 3, "k": 2, "epsilon": 0.1}"#, "epsilon"),
        ];
        for (text, field) in cases {
            assert_eq!(field_of(parse(text).unwrap_err()), field, "{text}");
        }
    }

    #[test]
    fn overrides_win() {
        let mut c = ExperimentConfig::from_json(r#"{"kind": "two-party", "master_seed": 1, "format": "csv"}"#).unwrap();
        c.apply(&Overrides { seed: Some(9), out: None, format: Some(Format::Jsonl) });
        assert_eq!(c.seed(), 9);
        assert_eq!(c.format, Some(Format::Jsonl));
    }
}
