use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Largest clone count accepted; Bob's output dimension is `clones + 1`.
pub const MAX_CLONES: u32 = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    AmplitudeDamping,
    PhotonDetectedJump,
    Erasure,
    Dephasing,
    Cloning,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::AmplitudeDamping,
        Family::PhotonDetectedJump,
        Family::Erasure,
        Family::Dephasing,
        Family::Cloning,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::AmplitudeDamping => "amplitude_damping",
            Family::PhotonDetectedJump => "photon_detected_jump",
            Family::Erasure => "erasure",
            Family::Dephasing => "dephasing",
            Family::Cloning => "cloning",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Invalid(format!("unknown channel family '{s}'")))
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Pauli axis of a dephasing channel.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum Axis {
    X,
    Y,
    #[default]
    Z,
}

/// JSON-facing description of a channel:
/// `{"family": .., "parameter": .., "clones": .., "dephasing_axis": ..}`.
///
/// `parameter` is γ, γ, ε or p for the first four families; cloning uses
/// `clones` instead. Absent optional fields stay absent on re-serialization.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelFamilySpec {
    pub family: Family,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub parameter: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub clones: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dephasing_axis: Option<Axis>,
}

impl ChannelFamilySpec {
    fn with_parameter(family: Family, parameter: f64) -> Self {
        Self {
            family,
            parameter: Some(parameter),
            clones: None,
            dephasing_axis: None,
        }
    }

    pub fn amplitude_damping(gamma: f64) -> Self {
        Self::with_parameter(Family::AmplitudeDamping, gamma)
    }

    pub fn photon_detected_jump(gamma: f64) -> Self {
        Self::with_parameter(Family::PhotonDetectedJump, gamma)
    }

    pub fn erasure(epsilon: f64) -> Self {
        Self::with_parameter(Family::Erasure, epsilon)
    }

    pub fn dephasing(p: f64, axis: Axis) -> Self {
        Self {
            dephasing_axis: Some(axis),
            ..Self::with_parameter(Family::Dephasing, p)
        }
    }

    pub fn cloning(clones: u32) -> Self {
        Self {
            family: Family::Cloning,
            parameter: None,
            clones: Some(clones),
            dephasing_axis: None,
        }
    }

    /// Same family with a different parameter (clone count for cloning).
    pub fn with_value(&self, value: f64) -> Self {
        let mut out = self.clone();
        if self.family == Family::Cloning {
            out.clones = Some(value.round().max(0.0) as u32);
        } else {
            out.parameter = Some(value);
        }
        out
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let spec: Self = serde_json::from_str(text)
            .map_err(|e| Error::Invalid(format!("malformed channel spec: {e}")))?;
        spec.validate()?;
        Ok(spec)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("spec serialization cannot fail")
    }

    pub fn validate(&self) -> Result<()> {
        if self.dephasing_axis.is_some() && self.family != Family::Dephasing {
            return Err(Error::Invalid(format!(
                "dephasing_axis given for {}",
                self.family
            )));
        }
        if self.family == Family::Cloning {
            if self.parameter.is_some() {
                return Err(Error::Invalid(
                    "cloning takes 'clones', not 'parameter'".into(),
                ));
            }
            return match self.clones {
                Some(n) if (2..=MAX_CLONES).contains(&n) => Ok(()),
                Some(n) => Err(Error::Domain(format!(
                    "clone count {n} outside [2, {MAX_CLONES}]"
                ))),
                None => Err(Error::Invalid("cloning requires 'clones'".into())),
            };
        }
        if self.clones.is_some() {
            return Err(Error::Invalid(format!(
                "'clones' given for {}",
                self.family
            )));
        }
        match self.parameter {
            Some(p) if p.is_finite() && (0.0..=1.0).contains(&p) => Ok(()),
            Some(p) => Err(Error::Domain(format!(
                "{} parameter {p} outside [0, 1]",
                self.family
            ))),
            None => Err(Error::Invalid(format!(
                "{} requires 'parameter'",
                self.family
            ))),
        }
    }

    /// Channel parameter, or the clone count for cloning.
    pub fn value(&self) -> f64 {
        match self.family {
            Family::Cloning => self.clones.unwrap_or(0) as f64,
            _ => self.parameter.unwrap_or(f64::NAN),
        }
    }

    pub fn axis(&self) -> Axis {
        self.dephasing_axis.unwrap_or_default()
    }

    /// Whether the channel is degradable at this parameter.
    pub fn is_degradable(&self) -> bool {
        let v = self.value();
        match self.family {
            Family::AmplitudeDamping => (0.0..0.5).contains(&v),
            Family::Erasure => (0.0..=0.5).contains(&v),
            Family::PhotonDetectedJump | Family::Dephasing | Family::Cloning => true,
        }
    }

    /// Human-readable degradable range for error messages and reports.
    pub fn degradable_range(&self) -> &'static str {
        match self.family {
            Family::AmplitudeDamping => "gamma in [0, 1/2)",
            Family::Erasure => "epsilon in [0, 1/2]",
            Family::PhotonDetectedJump => "gamma in [0, 1]",
            Family::Dephasing => "p in [0, 1]",
            Family::Cloning => "any clone count",
        }
    }
}

impl fmt::Display for ChannelFamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.family {
            Family::Cloning => write!(f, "cloning(N={})", self.clones.unwrap_or(0)),
            Family::Dephasing => write!(f, "dephasing_{:?}({})", self.axis(), self.value()),
            fam => write!(f, "{fam}({})", self.value()),
        }
    }
}
