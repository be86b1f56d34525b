//! The via stack as a cascade of TEM coaxial segments.
//!
//! One segment per layer, each with its own anti-pad radius and therefore
//! its own Z0; segment ABCD matrices multiply top to bottom and convert to
//! 2-port S-parameters against a real reference impedance. Higher-order
//! modes are deliberately NOT inserted into the S-parameters — a TEM model
//! cannot carry them honestly — and are surfaced instead as a per-segment
//! [`ModeAdvisory`] with exact cutoffs and evanescent attenuation.

use num_complex::Complex64;
use serde::Serialize;

use crate::coaxmodel::CoaxSection;
use crate::constants::{C0, NEPER_TO_DB};
use crate::error::{Error, Result};
use crate::geometry::{has_errors, Severity, ViaGeometry};
use crate::modesolver::{
    cutoff_frequency, evanescent_alpha, kc_exact, CutoffMethod, Mode, ModeCutoff,
};

/// A uniform frequency sweep definition.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepSpec {
    pub f_start_hz: f64,
    pub f_stop_hz: f64,
    pub n_points: usize,
}

impl SweepSpec {
    pub fn new(f_start_hz: f64, f_stop_hz: f64, n_points: usize) -> Result<Self> {
        let s = SweepSpec {
            f_start_hz,
            f_stop_hz,
            n_points,
        };
        s.validate()?;
        Ok(s)
    }

    /// 0.01 to 110 GHz on a 10 MHz grid: covers the band the via plots run
    /// to, with a spacing that extends cleanly to DC for TDR work.
    pub fn default_via_sweep() -> Self {
        SweepSpec {
            f_start_hz: 0.01e9,
            f_stop_hz: 110e9,
            n_points: 11_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_points < 2 {
            return Err(Error::Sweep(format!(
                "n_points must be >= 2, got {}",
                self.n_points
            )));
        }
        if !(self.f_start_hz >= 0.0) || !self.f_start_hz.is_finite() {
            return Err(Error::Sweep(format!(
                "f_start must be >= 0, got {}",
                self.f_start_hz
            )));
        }
        if !(self.f_stop_hz > self.f_start_hz) || !self.f_stop_hz.is_finite() {
            return Err(Error::Sweep(format!(
                "f_stop ({}) must exceed f_start ({})",
                self.f_stop_hz, self.f_start_hz
            )));
        }
        Ok(())
    }

    pub fn spacing_hz(&self) -> f64 {
        (self.f_stop_hz - self.f_start_hz) / (self.n_points - 1) as f64
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let df = self.spacing_hz();
        (0..self.n_points)
            .map(|i| self.f_start_hz + i as f64 * df)
            .collect()
    }
}

/// ABCD two-port matrix.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransferMatrix {
    pub a: Complex64,
    pub b: Complex64,
    pub c: Complex64,
    pub d: Complex64,
}

impl TransferMatrix {
    pub fn identity() -> Self {
        TransferMatrix {
            a: Complex64::new(1.0, 0.0),
            b: Complex64::new(0.0, 0.0),
            c: Complex64::new(0.0, 0.0),
            d: Complex64::new(1.0, 0.0),
        }
    }

    /// Matrix product: `self` followed by `rhs`.
    pub fn cascade(&self, rhs: &TransferMatrix) -> TransferMatrix {
        TransferMatrix {
            a: self.a * rhs.a + self.b * rhs.c,
            b: self.a * rhs.b + self.b * rhs.d,
            c: self.c * rhs.a + self.d * rhs.c,
            d: self.c * rhs.b + self.d * rhs.d,
        }
    }

    /// AD - BC; 1 for any reciprocal network.
    pub fn determinant(&self) -> Complex64 {
        self.a * self.d - self.b * self.c
    }

    /// S-parameters [s11, s12, s21, s22] against a real reference impedance.
    pub fn to_s_params(&self, z_ref: f64) -> [Complex64; 4] {
        let zr = Complex64::new(z_ref, 0.0);
        let den = self.a * zr + self.b + self.c * zr * zr + self.d * zr;
        let two_zr = Complex64::new(2.0 * z_ref, 0.0);
        let s11 = (self.a * zr + self.b - self.c * zr * zr - self.d * zr) / den;
        let s21 = two_zr * self.determinant() / den;
        let s12 = two_zr / den;
        let s22 = (-self.a * zr + self.b - self.c * zr * zr + self.d * zr) / den;
        [s11, s12, s21, s22]
    }
}

/// ABCD matrix of one coaxial segment at a single frequency.
///
/// gamma = alpha_d + j beta with beta = 2 pi f sqrt(epsilon_r)/c and the
/// dielectric-loss term alpha_d = beta tan(delta)/2; A = D = cosh(gamma l),
/// B = Z0 sinh(gamma l), C = sinh(gamma l)/Z0. At f = 0 this is the
/// identity.
pub fn segment_matrix(section: &CoaxSection, f_hz: f64) -> Result<TransferMatrix> {
    if !(f_hz >= 0.0) || !f_hz.is_finite() {
        return Err(Error::Domain(format!("frequency must be >= 0, got {f_hz}")));
    }
    let beta = 2.0 * std::f64::consts::PI * f_hz * section.material.epsilon_r.sqrt() / C0;
    let alpha_d = beta * section.material.loss_tangent / 2.0;
    let gamma_l = Complex64::new(alpha_d, beta) * section.length.meters();
    let ch = gamma_l.cosh();
    let sh = gamma_l.sinh();
    let z0 = Complex64::new(section.z0, 0.0);
    Ok(TransferMatrix {
        a: ch,
        b: z0 * sh,
        c: sh / z0,
        d: ch,
    })
}

/// Complex S-parameter samples over a uniform frequency grid, 1 or 2 ports,
/// against a real reference impedance.
#[derive(Debug, Clone, PartialEq)]
pub struct FrequencyResponse {
    f_hz: Vec<f64>,
    z_ref: f64,
    ports: usize,
    /// n * ports^2 entries, row-major per point: [s11] or [s11 s12 s21 s22].
    s: Vec<Complex64>,
}

impl FrequencyResponse {
    pub fn one_port(f_hz: Vec<f64>, s11: Vec<Complex64>, z_ref: f64) -> Result<Self> {
        if f_hz.len() != s11.len() {
            return Err(Error::Domain(format!(
                "frequency grid has {} points but s11 has {}",
                f_hz.len(),
                s11.len()
            )));
        }
        Ok(FrequencyResponse {
            f_hz,
            z_ref,
            ports: 1,
            s: s11,
        })
    }

    pub fn two_port(f_hz: Vec<f64>, s: Vec<[Complex64; 4]>, z_ref: f64) -> Result<Self> {
        if f_hz.len() != s.len() {
            return Err(Error::Domain(format!(
                "frequency grid has {} points but s-matrix list has {}",
                f_hz.len(),
                s.len()
            )));
        }
        Ok(FrequencyResponse {
            f_hz,
            z_ref,
            ports: 2,
            s: s.into_iter().flatten().collect(),
        })
    }

    pub fn ports(&self) -> usize {
        self.ports
    }

    pub fn z_ref(&self) -> f64 {
        self.z_ref
    }

    pub fn len(&self) -> usize {
        self.f_hz.len()
    }

    pub fn is_empty(&self) -> bool {
        self.f_hz.is_empty()
    }

    pub fn frequencies(&self) -> &[f64] {
        &self.f_hz
    }

    /// S_{ij} (1-based port indices) at grid point `idx`.
    pub fn s(&self, idx: usize, i: usize, j: usize) -> Complex64 {
        debug_assert!(i >= 1 && i <= self.ports && j >= 1 && j <= self.ports);
        self.s[idx * self.ports * self.ports + (i - 1) * self.ports + (j - 1)]
    }

    pub fn s11(&self, idx: usize) -> Complex64 {
        self.s(idx, 1, 1)
    }

    pub fn s21(&self, idx: usize) -> Complex64 {
        self.s(idx, 2, 1)
    }

    pub fn s12(&self, idx: usize) -> Complex64 {
        self.s(idx, 1, 2)
    }

    pub fn s22(&self, idx: usize) -> Complex64 {
        self.s(idx, 2, 2)
    }

    /// |S11| in dB, floored far below any physical dynamic range.
    pub fn s11_db(&self, idx: usize) -> f64 {
        20.0 * self.s11(idx).norm().max(1e-20).log10()
    }

    /// Grid spacing if the grid is uniform to 1e-9 relative.
    pub fn uniform_spacing_hz(&self) -> Option<f64> {
        if self.f_hz.len() < 2 {
            return None;
        }
        let df = self.f_hz[1] - self.f_hz[0];
        if !(df > 0.0) {
            return None;
        }
        let span = self.f_hz[self.f_hz.len() - 1].abs().max(df);
        for (i, &f) in self.f_hz.iter().enumerate() {
            let expected = self.f_hz[0] + i as f64 * df;
            if (f - expected).abs() > 1e-9 * span {
                return None;
            }
        }
        Some(df)
    }
}

/// Mode bookkeeping for one segment: exact TE11/TM01 cutoffs, evanescent
/// attenuation per sweep frequency, and the total dB through the segment
/// length.
#[derive(Debug, Clone, Serialize)]
pub struct SegmentAdvisory {
    pub layer_name: String,
    pub length_m: f64,
    pub te11: ModeCutoff,
    pub tm01: ModeCutoff,
    pub te11_alpha_np_per_m: Vec<f64>,
    pub tm01_alpha_np_per_m: Vec<f64>,
    pub te11_attenuation_db: Vec<f64>,
    pub tm01_attenuation_db: Vec<f64>,
}

/// Per-segment mode advisory across the sweep. Frequencies that are not
/// supported are not immediately attenuated: attenuation is a strong
/// function of how far below cutoff the signal sits, which is exactly what
/// these arrays record.
#[derive(Debug, Clone, Serialize)]
pub struct ModeAdvisory {
    pub f_hz: Vec<f64>,
    pub segments: Vec<SegmentAdvisory>,
}

/// Cascade result: the 2-port TEM response plus the mode advisory.
#[derive(Debug, Clone)]
pub struct CascadeOutput {
    pub response: FrequencyResponse,
    pub advisory: ModeAdvisory,
}

/// The coaxial segments a geometry maps to, one per layer, using each
/// layer's anti-pad radius (clamped to the stitch ring) as the outer radius.
pub fn sections_for(geometry: &ViaGeometry) -> Result<Vec<CoaxSection>> {
    geometry
        .layers
        .iter()
        .map(|layer| {
            CoaxSection::new(
                geometry.barrel_radius,
                geometry.effective_outer_radius(layer),
                geometry.material,
                layer.thickness,
            )
        })
        .collect()
}

/// Sweeps the validated geometry to 2-port S-parameters with the per-layer
/// mode advisory attached.
pub fn cascade_s_params(
    geometry: &ViaGeometry,
    sweep: &SweepSpec,
    z_ref: f64,
) -> Result<CascadeOutput> {
    cascade_s_params_with_feed(geometry, None, sweep, z_ref)
}

/// As [`cascade_s_params`], with an optional leading feed section (an ideal
/// coaxial launch) prepended to the layer stack. The feed participates in
/// the S-parameters but not in the mode advisory.
pub fn cascade_s_params_with_feed(
    geometry: &ViaGeometry,
    feed: Option<&CoaxSection>,
    sweep: &SweepSpec,
    z_ref: f64,
) -> Result<CascadeOutput> {
    sweep.validate()?;
    if !(z_ref > 0.0) || !z_ref.is_finite() {
        return Err(Error::Domain(format!(
            "reference impedance must be positive, got {z_ref}"
        )));
    }
    let diagnostics = geometry.validate();
    if has_errors(&diagnostics) {
        let msgs: Vec<&str> = diagnostics
            .iter()
            .filter(|d| d.severity == Severity::Error)
            .map(|d| d.message.as_str())
            .collect();
        return Err(Error::Geometry(msgs.join("; ")));
    }

    let sections = sections_for(geometry)?;
    let fs = sweep.frequencies();

    let mut samples = Vec::with_capacity(fs.len());
    for &f in &fs {
        let mut m = TransferMatrix::identity();
        if let Some(feed_section) = feed {
            m = m.cascade(&segment_matrix(feed_section, f)?);
        }
        for section in &sections {
            m = m.cascade(&segment_matrix(section, f)?);
        }
        samples.push(m.to_s_params(z_ref));
    }
    let response = FrequencyResponse::two_port(fs.clone(), samples, z_ref)?;

    let epsilon_r = geometry.material.epsilon_r;
    let mut segments = Vec::with_capacity(sections.len());
    for (layer, section) in geometry.layers.iter().zip(&sections) {
        let te11 = ModeCutoff::new(
            Mode::Te11,
            kc_exact(Mode::Te11, section.inner_radius, section.outer_radius)?,
            epsilon_r,
            CutoffMethod::ExactBesselRoot,
        )?;
        let tm01 = ModeCutoff::new(
            Mode::TM01,
            kc_exact(Mode::TM01, section.inner_radius, section.outer_radius)?,
            epsilon_r,
            CutoffMethod::ExactBesselRoot,
        )?;
        let len_m = section.length.meters();
        let mut advisory = SegmentAdvisory {
            layer_name: layer.name.clone(),
            length_m: len_m,
            te11,
            tm01,
            te11_alpha_np_per_m: Vec::with_capacity(fs.len()),
            tm01_alpha_np_per_m: Vec::with_capacity(fs.len()),
            te11_attenuation_db: Vec::with_capacity(fs.len()),
            tm01_attenuation_db: Vec::with_capacity(fs.len()),
        };
        for &f in &fs {
            let a_te = evanescent_alpha(te11.kc_rad_per_m, f, epsilon_r)?;
            let a_tm = evanescent_alpha(tm01.kc_rad_per_m, f, epsilon_r)?;
            advisory.te11_alpha_np_per_m.push(a_te);
            advisory.tm01_alpha_np_per_m.push(a_tm);
            advisory.te11_attenuation_db.push(a_te * len_m * NEPER_TO_DB);
            advisory.tm01_attenuation_db.push(a_tm * len_m * NEPER_TO_DB);
        }
        segments.push(advisory);
    }

    Ok(CascadeOutput {
        response,
        advisory: ModeAdvisory { f_hz: fs, segments },
    })
}

/// Lowest frequency at which |S11| in dB first reaches `threshold_db`,
/// linearly interpolated between grid points; the sweep's last frequency if
/// it never crosses.
pub fn effective_bandwidth(response: &FrequencyResponse, threshold_db: f64) -> Result<f64> {
    if response.is_empty() {
        return Err(Error::Domain("empty response".into()));
    }
    let n = response.len();
    let mut prev_db = response.s11_db(0);
    if prev_db >= threshold_db {
        return Ok(response.frequencies()[0]);
    }
    for i in 1..n {
        let db = response.s11_db(i);
        if db >= threshold_db {
            let f0 = response.frequencies()[i - 1];
            let f1 = response.frequencies()[i];
            let t = (threshold_db - prev_db) / (db - prev_db);
            return Ok(f0 + t * (f1 - f0));
        }
        prev_db = db;
    }
    Ok(response.frequencies()[n - 1])
}
