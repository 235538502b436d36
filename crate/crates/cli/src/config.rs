//! Run configuration: one flat JSON document, every field overridable by a
//! command-line flag.

use serde::{Deserialize, Serialize};

/// Flat configuration shared by all subcommands. Unset fields fall back to
/// defaults; flags override file values.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Subcommand name when driven purely from a config file.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub command: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<u32>,
    /// Kernel profile preset: `hermite:1,1` or `custom:1=0.5;3=-0.25`
    /// (Hermite coefficients keyed by multi-index).
    #[serde(default, skip_serializing_if = "Option::is_none", rename = "F")]
    pub profile: Option<String>,
    /// Multi-index for `calibrate`, e.g. `1` or `1,1`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub beta: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub trials: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub samples: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub threads: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tol: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub out: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub cd: Option<f64>,
    /// Bump scales for `weak11`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub bump_scales: Option<Vec<f64>>,
    /// Explicit level grid for `weak11`; empty means sweep observed values.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda_grid: Option<Vec<f64>>,
    /// Grid side length for `kernel-dump`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub grid: Option<usize>,
}

impl RunConfig {
    /// Merge: fields set in `flags` win over `self`.
    pub fn overridden_by(mut self, flags: RunConfig) -> RunConfig {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if flags.$field.is_some() { self.$field = flags.$field; })*
            };
        }
        take!(
            command,
            d,
            m,
            profile,
            beta,
            p,
            degree,
            trials,
            samples,
            seed,
            threads,
            tol,
            out,
            cd,
            bump_scales,
            lambda_grid,
            grid
        );
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file_values() {
        let file: RunConfig = serde_json::from_str(
            r#"{"command":"verify","d":2,"m":4,"F":"hermite:1,1","seed":7}"#,
        )
        .unwrap();
        let flags = RunConfig {
            d: Some(1),
            seed: Some(99),
            ..Default::default()
        };
        let merged = file.overridden_by(flags);
        assert_eq!(merged.d, Some(1));
        assert_eq!(merged.seed, Some(99));
        assert_eq!(merged.m, Some(4));
        assert_eq!(merged.profile.as_deref(), Some("hermite:1,1"));
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let parsed: Result<RunConfig, _> = serde_json::from_str(r#"{"nonsense": 1}"#);
        assert!(parsed.is_err());
    }
}
