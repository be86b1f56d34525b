//! Design and analysis toolkit for high-speed PCB via transitions.
//!
//! A via ringed by enough equally spaced stitching (ground) vias behaves like
//! a short coaxial transmission line: the barrel is the inner conductor and
//! the stitch ring / anti-pad boundary is the outer conductor. This crate
//! builds on that approximation:
//!
//! - [`coaxmodel`]: TEM characteristic impedance of the equivalent coax and
//!   its closed-form inverses for design.
//! - [`modesolver`]: higher-order mode cutoffs (TE11, TM0n), both the
//!   closed-form estimate and the exact Bessel-root solution, plus
//!   below-cutoff evanescent attenuation.
//! - [`cascade`]: the via stack as a cascade of coaxial segments (one per
//!   layer), swept to 2-port S-parameters with a per-segment mode advisory.
//! - [`tdr`]: step-response time-domain reflectometry from S11.
//! - [`touchstone`]: Touchstone v1 (.s1p/.s2p) reader/writer for correlating
//!   model output against VNA or field-solver exports.
//! - [`designer`]: the design flow itself — solve geometry for a target
//!   impedance, check mode margins, modulate inner-layer anti-pads, sweep
//!   barrel diameters.
//! - [`cli`]: the `viakit` command-line front end.

pub mod bessel;
pub mod cascade;
pub mod cli;
pub mod coaxmodel;
pub mod constants;
pub mod designer;
pub mod error;
pub mod geometry;
pub mod modesolver;
pub mod tdr;
pub mod touchstone;

pub use cascade::{CascadeOutput, FrequencyResponse, ModeAdvisory, SweepSpec, TransferMatrix};
pub use coaxmodel::CoaxSection;
pub use error::{Error, Result};
pub use geometry::{Diagnostic, Layer, Length, Material, Severity, ViaGeometry};
pub use modesolver::{CutoffMethod, Mode, ModeCutoff};
pub use tdr::{TdrTrace, Window};
pub use touchstone::TouchstoneDocument;
