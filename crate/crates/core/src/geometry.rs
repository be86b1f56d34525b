//! Physical data model of the via stack: units, layers, material,
//! validation, and the JSON stackup config.
//!
//! All lengths are carried in meters internally; mils appear only at I/O
//! boundaries (config files, CLI, reports).

use serde::{Deserialize, Serialize};

use crate::constants::METERS_PER_MIL;
use crate::error::{Error, Result};

/// A physical length, stored canonically in meters.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Length {
    meters: f64,
}

impl Length {
    pub const ZERO: Length = Length { meters: 0.0 };

    pub fn from_meters(meters: f64) -> Self {
        Length { meters }
    }

    pub fn from_mils(mils: f64) -> Self {
        Length {
            meters: mils * METERS_PER_MIL,
        }
    }

    pub fn from_mm(mm: f64) -> Self {
        Length { meters: mm * 1e-3 }
    }

    pub fn meters(&self) -> f64 {
        self.meters
    }

    pub fn mils(&self) -> f64 {
        self.meters / METERS_PER_MIL
    }

    pub fn mm(&self) -> f64 {
        self.meters * 1e3
    }

    pub fn is_finite(&self) -> bool {
        self.meters.is_finite()
    }
}

/// Checked mil-to-meter conversion, exact multiplication by 25.4e-6.
pub fn mil_to_m(mils: f64) -> Result<Length> {
    if !mils.is_finite() {
        return Err(Error::Domain(format!("mil value must be finite, got {mils}")));
    }
    Ok(Length::from_mils(mils))
}

/// Dielectric material between the conductors. Nonmagnetic (mu = mu0);
/// magnetic substrates are out of scope.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Material {
    /// Relative permittivity (Dk).
    pub epsilon_r: f64,
    /// Dissipation factor (Df), 0 for lossless.
    pub loss_tangent: f64,
}

impl Material {
    pub fn lossless(epsilon_r: f64) -> Self {
        Material {
            epsilon_r,
            loss_tangent: 0.0,
        }
    }

    pub fn new(epsilon_r: f64, loss_tangent: f64) -> Self {
        Material {
            epsilon_r,
            loss_tangent,
        }
    }
}

/// One dielectric layer the via passes through.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Layer {
    pub name: String,
    pub thickness: Length,
    /// Radius of the anti-pad void in this layer's reference planes.
    pub antipad_radius: Length,
}

/// The full via-stack parameterization.
///
/// `stitch_ring_radius` is the distance from the signal-via center to the
/// *edge* of the stitching vias; the stitched ring is treated as a solid
/// outer conductor at that radius once validation passes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ViaGeometry {
    /// Inner-conductor radius `a` (half the drilled barrel diameter).
    pub barrel_radius: Length,
    /// Outer-conductor radius `b` set by the stitching-via ring.
    pub stitch_ring_radius: Length,
    /// Number of stitching vias forming the ring.
    pub stitch_count: u32,
    /// Layers in stack order, top to bottom.
    pub layers: Vec<Layer>,
    pub material: Material,
}

/// Severity of a validation diagnostic.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

/// A single validation finding.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    pub fn error(message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
        }
    }

    pub fn warning(message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message: message.into(),
        }
    }
}

/// True if any diagnostic is an error.
pub fn has_errors(diagnostics: &[Diagnostic]) -> bool {
    diagnostics.iter().any(|d| d.severity == Severity::Error)
}

/// Fewer stitching vias than this draws an advisory warning; the coaxial
/// approximation assumes the ring closes into an effective outer conductor.
pub const MIN_ADVISED_STITCH_COUNT: u32 = 6;

/// Anti-pads tighter than this multiple of the barrel radius draw a
/// manufacturing-margin warning.
pub const ANTIPAD_MARGIN_FACTOR: f64 = 1.2;

impl ViaGeometry {
    /// Checks every structural invariant. Errors block downstream
    /// computation; warnings are advisories. Pure: identical input yields
    /// identical diagnostics.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let a = self.barrel_radius.meters();
        let ring = self.stitch_ring_radius.meters();

        if !a.is_finite() || a <= 0.0 {
            out.push(Diagnostic::error(format!(
                "barrel_radius must be positive and finite, got {a} m"
            )));
        }
        if !ring.is_finite() || ring <= 0.0 {
            out.push(Diagnostic::error(format!(
                "stitch_ring_radius must be positive and finite, got {ring} m"
            )));
        }
        if a.is_finite() && ring.is_finite() && a > 0.0 && a >= ring {
            out.push(Diagnostic::error(format!(
                "barrel_radius < stitch_ring_radius violated ({:.4} mil >= {:.4} mil)",
                self.barrel_radius.mils(),
                self.stitch_ring_radius.mils()
            )));
        }
        if self.stitch_count == 0 {
            out.push(Diagnostic::error("stitch_count must be >= 1"));
        } else if self.stitch_count < MIN_ADVISED_STITCH_COUNT {
            out.push(Diagnostic::warning(format!(
                "stitch_count {} is below the advised minimum of {}; the coaxial \
                 approximation may be poor",
                self.stitch_count, MIN_ADVISED_STITCH_COUNT
            )));
        }
        if !self.material.epsilon_r.is_finite() || self.material.epsilon_r < 1.0 {
            out.push(Diagnostic::error(format!(
                "epsilon_r must be >= 1, got {}",
                self.material.epsilon_r
            )));
        }
        if !self.material.loss_tangent.is_finite() || self.material.loss_tangent < 0.0 {
            out.push(Diagnostic::error(format!(
                "loss_tangent must be >= 0, got {}",
                self.material.loss_tangent
            )));
        }
        if self.layers.is_empty() {
            out.push(Diagnostic::error("layers must not be empty"));
        }
        for layer in &self.layers {
            let t = layer.thickness.meters();
            let ap = layer.antipad_radius.meters();
            if !t.is_finite() || t <= 0.0 {
                out.push(Diagnostic::error(format!(
                    "layer '{}': thickness must be positive, got {t} m",
                    layer.name
                )));
            }
            if !ap.is_finite() || ap <= 0.0 {
                out.push(Diagnostic::error(format!(
                    "layer '{}': antipad_radius must be positive, got {ap} m",
                    layer.name
                )));
                continue;
            }
            if a.is_finite() && a > 0.0 {
                if a >= ap {
                    out.push(Diagnostic::error(format!(
                        "layer '{}': barrel_radius < antipad_radius violated \
                         ({:.4} mil >= {:.4} mil)",
                        layer.name,
                        self.barrel_radius.mils(),
                        layer.antipad_radius.mils()
                    )));
                } else if ap < a * ANTIPAD_MARGIN_FACTOR {
                    out.push(Diagnostic::warning(format!(
                        "layer '{}': antipad_radius {:.4} mil is within {}x of the \
                         barrel radius; manufacturing margin is tight",
                        layer.name,
                        layer.antipad_radius.mils(),
                        ANTIPAD_MARGIN_FACTOR
                    )));
                }
            }
            if ring.is_finite() && ring > 0.0 && ap > ring {
                out.push(Diagnostic::error(format!(
                    "layer '{}': antipad_radius <= stitch_ring_radius violated \
                     ({:.4} mil > {:.4} mil)",
                    layer.name,
                    layer.antipad_radius.mils(),
                    self.stitch_ring_radius.mils()
                )));
            }
        }
        out
    }

    /// Effective outer-conductor radius a layer presents: its anti-pad radius
    /// clamped to the stitch ring.
    pub fn effective_outer_radius(&self, layer: &Layer) -> Length {
        if layer.antipad_radius <= self.stitch_ring_radius {
            layer.antipad_radius
        } else {
            self.stitch_ring_radius
        }
    }

    /// Total stack height.
    pub fn total_thickness(&self) -> Length {
        Length::from_meters(self.layers.iter().map(|l| l.thickness.meters()).sum())
    }

    /// Parses the JSON stackup config. Unknown keys are rejected with an
    /// error naming the key.
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: StackupConfig =
            serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        Ok(cfg.into())
    }

    /// Serializes back to the JSON stackup config (mil units).
    pub fn to_json(&self) -> String {
        let cfg = StackupConfig::from(self);
        serde_json::to_string_pretty(&cfg).expect("stackup config serializes")
    }
}

/// On-disk stackup schema. Dimensions in mils; radii are radii, not
/// diameters or center-to-center distances.
#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct StackupConfig {
    barrel_radius_mil: f64,
    /// Center of signal via to *edge* of stitching via.
    stitch_ring_radius_mil: f64,
    stitch_count: u32,
    epsilon_r: f64,
    #[serde(default)]
    loss_tangent: f64,
    layers: Vec<LayerConfig>,
}

#[derive(Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct LayerConfig {
    name: String,
    thickness_mil: f64,
    antipad_radius_mil: f64,
}

impl From<StackupConfig> for ViaGeometry {
    fn from(cfg: StackupConfig) -> Self {
        ViaGeometry {
            barrel_radius: Length::from_mils(cfg.barrel_radius_mil),
            stitch_ring_radius: Length::from_mils(cfg.stitch_ring_radius_mil),
            stitch_count: cfg.stitch_count,
            layers: cfg
                .layers
                .into_iter()
                .map(|l| Layer {
                    name: l.name,
                    thickness: Length::from_mils(l.thickness_mil),
                    antipad_radius: Length::from_mils(l.antipad_radius_mil),
                })
                .collect(),
            material: Material::new(cfg.epsilon_r, cfg.loss_tangent),
        }
    }
}

impl From<&ViaGeometry> for StackupConfig {
    fn from(g: &ViaGeometry) -> Self {
        StackupConfig {
            barrel_radius_mil: g.barrel_radius.mils(),
            stitch_ring_radius_mil: g.stitch_ring_radius.mils(),
            stitch_count: g.stitch_count,
            epsilon_r: g.material.epsilon_r,
            loss_tangent: g.material.loss_tangent,
            layers: g
                .layers
                .iter()
                .map(|l| LayerConfig {
                    name: l.name.clone(),
                    thickness_mil: l.thickness.mils(),
                    antipad_radius_mil: l.antipad_radius.mils(),
                })
                .collect(),
        }
    }
}
