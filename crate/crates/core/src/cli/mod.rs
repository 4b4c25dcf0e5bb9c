//! Command-line surface: configuration, reports, and the `validate`,
//! `transform`, `star`, `propagate` and `compare` commands.
//!
//! Exit codes: 0 all checks pass, 1 a check failed, 2 usage or
//! configuration error.

mod checks;
mod csv;
mod run;

pub use run::execute;

use crate::error::{Error, Result};
use crate::lie::{Chart, ChartKind, LieGroup};
use crate::noncomm::Interpolation;
use crate::quadrature::Damping;
use crate::scheme::Scheme;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Command {
    Validate,
    Transform,
    Star,
    Propagate,
    Compare,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum GroupName {
    Rd,
    U1,
    Su2,
    So3,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum ChartName {
    Exp,
    Trace,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DampingName {
    None,
    Gaussian,
    Fejer,
    Plateau,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SchemeName {
    Imaginary,
    Real,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum KernelGrid {
    Auto,
    Group,
    Class,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum HamiltonianName {
    #[serde(rename = "free")]
    Free,
    #[serde(rename = "free+cos")]
    FreeCos,
}

/// Run parameters. JSON keys are the field names; unset optional values
/// get group- and command-dependent defaults in [`RunConfig::resolved`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub command: Option<Command>,
    pub group: GroupName,
    /// Dimension of R^d.
    pub dim: usize,
    pub chart: ChartName,
    /// Coordinate scale; anything but 1 is a broken chart (test fixture).
    pub chart_scale: f64,
    /// Group grid nodes per dimension.
    pub n: Option<usize>,
    /// Half-width of R^d grids.
    pub extent: f64,
    pub interpolation: Interpolation,
    pub kernel_grid: KernelGrid,
    pub shells: usize,
    pub directions: usize,
    /// Dual cutoff Λ.
    pub cutoff: f64,
    pub dual_nodes: usize,
    pub damping: DampingName,
    pub damping_sigma: f64,
    /// Total time T; ε = T/N.
    pub time: Option<f64>,
    pub steps: Option<usize>,
    pub scheme: SchemeName,
    pub hamiltonian: HamiltonianName,
    pub potential_strength: f64,
    pub ladder: usize,
    /// Largest mode reported (j on SU(2)/SO(3), |n| on U(1)).
    pub j_max: f64,
    pub samples: usize,
    pub out: PathBuf,
    pub seed: u64,
    pub threads: Option<usize>,
    /// Directory of a run to compare against instead of the oracle.
    pub reference: Option<PathBuf>,
    /// Record wall-clock timings in reports (breaks byte-identical output).
    pub timing: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            command: None,
            group: GroupName::Su2,
            dim: 1,
            chart: ChartName::Exp,
            chart_scale: 1.0,
            n: None,
            extent: 6.0,
            interpolation: Interpolation::Multilinear,
            kernel_grid: KernelGrid::Auto,
            shells: 512,
            directions: 24,
            cutoff: 40.0,
            dual_nodes: 800,
            damping: DampingName::Plateau,
            damping_sigma: 10.0,
            time: None,
            steps: None,
            scheme: SchemeName::Imaginary,
            hamiltonian: HamiltonianName::Free,
            potential_strength: 1.0,
            ladder: 2,
            j_max: 3.0,
            samples: 50,
            out: PathBuf::from("ncgf-out"),
            seed: 0,
            threads: None,
            reference: None,
            timing: false,
        }
    }
}

impl RunConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::InvalidConfig(format!("cannot read {}: {e}", path.display())))?;
        serde_json::from_str(&text).map_err(|e| Error::InvalidConfig(format!("{}: {e}", path.display())))
    }

    pub fn lie_group(&self) -> LieGroup {
        match self.group {
            GroupName::Rd => LieGroup::rd(self.dim),
            GroupName::U1 => LieGroup::u1(),
            GroupName::Su2 => LieGroup::su2(),
            GroupName::So3 => LieGroup::so3(),
        }
    }

    pub fn build_chart(&self) -> Result<Chart> {
        let kind = match self.chart {
            ChartName::Exp => ChartKind::Exponential,
            ChartName::Trace => ChartKind::Trace,
        };
        Ok(Chart::new(self.lie_group(), kind)?.rescaled(self.chart_scale))
    }

    pub fn build_damping(&self) -> Damping {
        match self.damping {
            DampingName::None => Damping::None,
            DampingName::Gaussian => Damping::Gaussian(self.damping_sigma),
            DampingName::Fejer => Damping::Fejer,
            DampingName::Plateau => Damping::Plateau,
        }
    }

    pub fn time_scheme(&self) -> Scheme {
        match self.scheme {
            SchemeName::Imaginary => Scheme::ImaginaryTime,
            SchemeName::Real => Scheme::RealTime,
        }
    }

    pub fn command(&self) -> Result<Command> {
        self.command.ok_or_else(|| Error::InvalidConfig("no command given".into()))
    }

    /// Fills unset values and checks ranges.
    pub fn resolved(&self) -> Result<Self> {
        let mut c = self.clone();
        let command = c.command()?;
        let propagating = matches!(command, Command::Propagate | Command::Compare);
        if c.n.is_none() {
            c.n = Some(match (c.group, propagating) {
                (GroupName::U1, true) => 513,
                (GroupName::U1, false) => 129,
                (GroupName::Rd, true) => 601,
                (GroupName::Rd, false) => if c.dim == 1 { 129 } else { 16 },
                (_, true) => 12,
                (_, false) => 16,
            });
        }
        if c.time.is_none() {
            c.time = Some(match c.group {
                GroupName::U1 => 0.5,
                GroupName::Rd => 1.0,
                _ => 0.3,
            });
        }
        if c.steps.is_none() {
            c.steps = Some(match c.group {
                GroupName::Su2 | GroupName::So3 => 32,
                _ => 64,
            });
        }
        if c.kernel_grid == KernelGrid::Auto {
            c.kernel_grid = match c.group {
                GroupName::Su2 | GroupName::So3 if c.hamiltonian == HamiltonianName::Free => KernelGrid::Class,
                _ => KernelGrid::Group,
            };
        }
        let positive = [
            ("chart_scale", c.chart_scale),
            ("extent", c.extent),
            ("cutoff", c.cutoff),
            ("damping_sigma", c.damping_sigma),
            ("time", c.time.unwrap_or(0.0)),
        ];
        for (name, v) in positive {
            if !(v > 0.0 && v.is_finite()) {
                return Err(Error::InvalidConfig(format!("{name} must be positive, got {v}")));
            }
        }
        let counts = [
            ("dim", c.dim),
            ("n", c.n.unwrap_or(0)),
            ("shells", c.shells),
            ("directions", c.directions),
            ("dual_nodes", c.dual_nodes),
            ("steps", c.steps.unwrap_or(0)),
            ("samples", c.samples),
        ];
        for (name, v) in counts {
            if v == 0 {
                return Err(Error::InvalidConfig(format!("{name} must be positive")));
            }
        }
        if c.threads == Some(0) {
            return Err(Error::InvalidConfig("threads must be positive".into()));
        }
        if !(c.j_max >= 0.0) || (2.0 * c.j_max).fract() != 0.0 {
            return Err(Error::InvalidConfig(format!("j_max must be a non-negative half-integer, got {}", c.j_max)));
        }
        if c.group == GroupName::U1 && c.chart == ChartName::Trace {
            return Err(Error::InvalidConfig("the trace chart is defined on SU(2) and SO(3) only".into()));
        }
        if c.group == GroupName::Rd && c.chart == ChartName::Trace {
            return Err(Error::InvalidConfig("the trace chart is defined on SU(2) and SO(3) only".into()));
        }
        Ok(c)
    }

    pub fn epsilon(&self) -> f64 {
        self.time.unwrap_or(0.0) / self.steps.unwrap_or(1) as f64
    }
}

/// One named check.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    /// `"<="` (value must not exceed the tolerance) or `">"`.
    pub comparison: String,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl Check {
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            comparison: "<=".into(),
            pass: value <= tolerance,
            note: None,
            seconds: None,
        }
    }

    pub fn above(name: &str, value: f64, threshold: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance: threshold,
            comparison: ">".into(),
            pass: value > threshold,
            note: None,
            seconds: None,
        }
    }

    /// A check whose computation itself failed.
    pub fn error(name: &str, e: &Error) -> Self {
        Check {
            name: name.into(),
            value: f64::NAN,
            tolerance: f64::NAN,
            comparison: "error".into(),
            pass: false,
            note: Some(e.to_string()),
            seconds: None,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Command,
    pub version: String,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extra: Option<serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seconds: Option<f64>,
}

impl Report {
    pub fn new(config: &RunConfig, checks: Vec<Check>) -> Result<Self> {
        Ok(Report {
            command: config.command()?,
            version: env!("CARGO_PKG_VERSION").to_string(),
            config: config.clone(),
            pass: checks.iter().all(|c| c.pass),
            checks,
            extra: None,
            seconds: None,
        })
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }

    pub fn write(&self, dir: &Path) -> Result<PathBuf> {
        std::fs::create_dir_all(dir)?;
        let path = dir.join("report.json");
        let mut text = serde_json::to_string_pretty(self)?;
        text.push('\n');
        std::fs::write(&path, text)?;
        Ok(path)
    }
}
