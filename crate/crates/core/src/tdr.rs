//! Time-domain reflectometry from S11.
//!
//! Builds a Hermitian-symmetric spectrum from the reflection response,
//! applies a band-edge window and a Gaussian step-shaping filter for the
//! requested 10-90% rise time, inverse-transforms to an impulse response,
//! and integrates to the step reflection rho(t). The impedance profile is
//! z(t) = z_ref (1 + rho)/(1 - rho): dips below the feed impedance read as
//! capacitive discontinuities, peaks as inductive ones.
//!
//! Single-ended only; differential TDR is out of scope.

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::Serialize;

use crate::cascade::FrequencyResponse;
use crate::error::{Error, Result};

/// Spectral window applied across the measured band before the inverse
/// transform. Kaiser tapers from 1 at DC to ~1/I0(beta) at the band edge.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum Window {
    Kaiser { beta: f64 },
    None,
}

impl Default for Window {
    fn default() -> Self {
        Window::Kaiser { beta: 6.0 }
    }
}

impl std::fmt::Display for Window {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Window::Kaiser { beta } => write!(f, "kaiser:{beta}"),
            Window::None => write!(f, "none"),
        }
    }
}

/// Default 10-90% rise time: 15 ps supports content past 23 GHz, a typical
/// oscilloscope setting for design review in the 67 GHz band.
pub const DEFAULT_RISE_TIME_S: f64 = 15e-12;

/// Zero-padding factor of the inverse transform; interpolates the trace
/// smoothly without inventing band content.
const TIME_OVERSAMPLING: usize = 8;

/// 10-90% rise time of a Gaussian step is 2 sqrt(2) erfinv(0.8) sigma_t.
const RISE_TIME_PER_SIGMA: f64 = 2.563_103_131_089_201;

/// Step-reflection trace with its impedance profile and the transform
/// settings that produced it (the paper never states its TDR rise time or
/// window, so comparisons must carry their own).
#[derive(Debug, Clone)]
pub struct TdrTrace {
    pub t_s: Vec<f64>,
    pub rho: Vec<f64>,
    /// z_ref (1+rho)/(1-rho); +inf marks rho >= 1 (unbounded), 0 caps
    /// rho <= -1.
    pub z_ohm: Vec<f64>,
    pub rise_time_s: f64,
    pub window: Window,
    pub z_ref: f64,
}

impl TdrTrace {
    pub fn dt(&self) -> f64 {
        if self.t_s.len() < 2 {
            return 0.0;
        }
        self.t_s[1] - self.t_s[0]
    }

    /// Settled reflection level: mean of the central third of the trace,
    /// past the rise but clear of the wrapped acausal tail.
    pub fn settled_rho(&self) -> f64 {
        let n = self.rho.len();
        let (lo, hi) = (n / 3, 2 * n / 3);
        let slice = &self.rho[lo..hi.max(lo + 1)];
        slice.iter().sum::<f64>() / slice.len() as f64
    }
}

/// Converts a reflection response into a step TDR trace.
///
/// The grid must be uniform and either include DC or start on an integer
/// multiple of its spacing; a missing DC value is extrapolated as the real
/// part of S11 at the lowest frequency (the reflection of a lossless TEM
/// cascade is real at DC). The returned time grid leads in a few rise times
/// before t = 0, like a scope's pre-trigger region.
pub fn s11_to_tdr(
    response: &FrequencyResponse,
    rise_time_s: f64,
    window: Window,
) -> Result<TdrTrace> {
    if response.len() < 2 {
        return Err(Error::Tdr(format!(
            "need at least 2 frequency points, got {}",
            response.len()
        )));
    }
    if !(rise_time_s > 0.0) || !rise_time_s.is_finite() {
        return Err(Error::Tdr(format!("rise time must be > 0, got {rise_time_s} s")));
    }
    if let Window::Kaiser { beta } = window {
        if !(beta >= 0.0) || !beta.is_finite() {
            return Err(Error::Tdr(format!("kaiser beta must be >= 0, got {beta}")));
        }
    }
    let df = response
        .uniform_spacing_hz()
        .ok_or_else(|| Error::Tdr("frequency grid is not uniform".into()))?;

    let f0 = response.frequencies()[0];
    let offset = f0 / df;
    let m = offset.round() as usize;
    if (offset - offset.round()).abs() > 1e-6 {
        return Err(Error::Tdr(format!(
            "grid start {f0} Hz is not an integer multiple of the spacing {df} Hz; \
             cannot extend to DC"
        )));
    }

    let n = response.len();
    let n_pos = m + n;
    // positive-frequency spectrum, bins 0..n_pos at spacing df
    let mut spectrum = vec![Complex64::new(0.0, 0.0); n_pos];
    for i in 0..n {
        spectrum[m + i] = response.s11(i);
    }
    if m > 0 {
        let dc = Complex64::new(response.s11(0).re, 0.0);
        spectrum[0] = dc;
        for k in 1..m {
            let t = k as f64 / m as f64;
            spectrum[k] = dc + (response.s11(0) - dc) * t;
        }
    } else {
        // force a real DC bin; an imaginary part there is unphysical
        spectrum[0] = Complex64::new(spectrum[0].re, 0.0);
    }

    apply_band_window(&mut spectrum, window);
    apply_rise_time_filter(&mut spectrum, df, rise_time_s);

    // Hermitian-symmetric buffer, zero-padded for smooth time interpolation
    let half = TIME_OVERSAMPLING * n_pos;
    let n_fft = 2 * half;
    let mut buf = vec![Complex64::new(0.0, 0.0); n_fft];
    buf[..n_pos].copy_from_slice(&spectrum);
    for k in 1..half {
        buf[n_fft - k] = buf[k].conj();
    }

    FftPlanner::new().plan_fft_inverse(n_fft).process(&mut buf);
    let scale = 1.0 / n_fft as f64;

    let dt = 1.0 / (n_fft as f64 * df);
    // Start integrating a little before t = 0: the shaped step's acausal
    // precursor wraps to the end of the circular buffer and must be
    // accumulated before the edge, not after the trace end.
    let pre = ((4.0 * rise_time_s / dt).ceil() as usize)
        .max(16)
        .min(n_fft / 8)
        .max(1);
    let mut t_s = Vec::with_capacity(n_fft);
    let mut rho = Vec::with_capacity(n_fft);
    let mut z_ohm = Vec::with_capacity(n_fft);
    let mut acc = 0.0;
    for i in 0..n_fft {
        let j = (n_fft - pre + i) % n_fft;
        acc += buf[j].re * scale;
        t_s.push((i as f64 - pre as f64) * dt);
        rho.push(acc);
        z_ohm.push(rho_to_z(acc, response.z_ref()));
    }

    Ok(TdrTrace {
        t_s,
        rho,
        z_ohm,
        rise_time_s,
        window,
        z_ref: response.z_ref(),
    })
}

/// rho -> z mapping, strictly increasing on (-1, 1); rho = 0 maps to z_ref
/// exactly.
pub fn rho_to_z(rho: f64, z_ref: f64) -> f64 {
    if rho >= 1.0 {
        return f64::INFINITY;
    }
    if rho <= -1.0 {
        return 0.0;
    }
    z_ref * (1.0 + rho) / (1.0 - rho)
}

fn apply_band_window(spectrum: &mut [Complex64], window: Window) {
    let beta = match window {
        Window::None => return,
        Window::Kaiser { beta } => beta,
    };
    let n = spectrum.len();
    if n < 2 {
        return;
    }
    let denom = bessel_i0(beta);
    for (k, v) in spectrum.iter_mut().enumerate() {
        // right half of a symmetric Kaiser window: 1 at DC, minimal at edge
        let x = k as f64 / (n - 1) as f64;
        let w = bessel_i0(beta * (1.0 - x * x).max(0.0).sqrt()) / denom;
        *v *= w;
    }
}

fn apply_rise_time_filter(spectrum: &mut [Complex64], df: f64, rise_time_s: f64) {
    let sigma_t = rise_time_s / RISE_TIME_PER_SIGMA;
    let c = 2.0 * std::f64::consts::PI * std::f64::consts::PI * sigma_t * sigma_t;
    for (k, v) in spectrum.iter_mut().enumerate() {
        let f = k as f64 * df;
        *v *= (-c * f * f).exp();
    }
}

/// Modified Bessel function I0 by its power series; all terms positive, no
/// cancellation, fine for any window beta in practical use.
fn bessel_i0(x: f64) -> f64 {
    let q = x * x / 4.0;
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 1..200 {
        term *= q / ((k * k) as f64);
        sum += term;
        if term < 1e-17 * sum {
            break;
        }
    }
    sum
}

/// Result of aligning and differencing two traces.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct TraceComparison {
    /// Peak |z_a - z_b| over the aligned overlap window.
    pub max_abs_dz_ohm: f64,
    /// How much `b` lags `a`, from cross-correlating d(rho)/dt.
    pub delay_offset_s: f64,
}

/// Aligns `b` against `a` by cross-correlation of the step derivative and
/// reports the peak impedance deviation over the overlap.
pub fn compare_traces(a: &TdrTrace, b: &TdrTrace) -> Result<TraceComparison> {
    if a.t_s.len() < 3 || b.t_s.len() < 3 {
        return Err(Error::Tdr("traces too short to compare".into()));
    }
    let (dt_a, dt_b) = (a.dt(), b.dt());
    if !(dt_a > 0.0) || !(dt_b > 0.0) || (dt_a - dt_b).abs() > 1e-9 * dt_a {
        return Err(Error::Tdr(format!(
            "time grids must match: dt = {dt_a} s vs {dt_b} s"
        )));
    }
    if (a.rise_time_s - b.rise_time_s).abs() > 1e-12 * a.rise_time_s.max(b.rise_time_s) {
        return Err(Error::Tdr(format!(
            "rise times must match: {} s vs {} s",
            a.rise_time_s, b.rise_time_s
        )));
    }
    let span_a = (a.t_s[0], *a.t_s.last().unwrap());
    let span_b = (b.t_s[0], *b.t_s.last().unwrap());
    if span_a.1 < span_b.0 || span_b.1 < span_a.0 {
        return Err(Error::Tdr("time spans do not overlap".into()));
    }

    let da: Vec<f64> = a.rho.windows(2).map(|w| w[1] - w[0]).collect();
    let db: Vec<f64> = b.rho.windows(2).map(|w| w[1] - w[0]).collect();
    let lag = best_lag(&da, &db);
    let offset_s = lag as f64 * dt_a;

    // aligned comparison: a[i] against b[i + lag]
    let n_a = a.z_ohm.len() as isize;
    let n_b = b.z_ohm.len() as isize;
    let i_lo = 0.max(-lag);
    let i_hi = n_a.min(n_b - lag);
    if i_hi <= i_lo {
        return Err(Error::Tdr("no overlap after alignment".into()));
    }
    let mut max_dz = 0.0_f64;
    for i in i_lo..i_hi {
        let za = a.z_ohm[i as usize];
        let zb = b.z_ohm[(i + lag) as usize];
        if za.is_finite() && zb.is_finite() {
            max_dz = max_dz.max((za - zb).abs());
        }
    }
    Ok(TraceComparison {
        max_abs_dz_ohm: max_dz,
        delay_offset_s: offset_s,
    })
}

/// Lag of `b` relative to `a` maximizing the cross-correlation of the two
/// derivative sequences, via FFT (linear, not circular, correlation).
fn best_lag(da: &[f64], db: &[f64]) -> isize {
    let m = (da.len() + db.len()).next_power_of_two();
    let mut fa: Vec<Complex64> = da.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    let mut fb: Vec<Complex64> = db.iter().map(|&v| Complex64::new(v, 0.0)).collect();
    fa.resize(m, Complex64::new(0.0, 0.0));
    fb.resize(m, Complex64::new(0.0, 0.0));
    let mut planner = FftPlanner::new();
    let fft = planner.plan_fft_forward(m);
    fft.process(&mut fa);
    fft.process(&mut fb);
    let mut prod: Vec<Complex64> = fa.iter().zip(&fb).map(|(x, y)| x.conj() * y).collect();
    planner.plan_fft_inverse(m).process(&mut prod);
    // prod[l] ~ sum_i da[i] * db[i + l], lags wrapped mod m
    let mut best = 0usize;
    let mut best_val = f64::NEG_INFINITY;
    for (idx, v) in prod.iter().enumerate() {
        if v.re > best_val {
            best_val = v.re;
            best = idx;
        }
    }
    if best > m / 2 {
        best as isize - m as isize
    } else {
        best as isize
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cascade::FrequencyResponse;

    fn constant_gamma_response(gamma: f64, n: usize) -> FrequencyResponse {
        let f: Vec<f64> = (0..n).map(|i| i as f64 * 10e6).collect();
        let s11 = vec![Complex64::new(gamma, 0.0); n];
        FrequencyResponse::one_port(f, s11, 50.0).unwrap()
    }

    #[test]
    fn matched_line_is_flat_at_z_ref() {
        let resp = constant_gamma_response(0.0, 2001);
        let trace = s11_to_tdr(&resp, 15e-12, Window::default()).unwrap();
        for (&rho, &z) in trace.rho.iter().zip(&trace.z_ohm) {
            assert!(rho.abs() < 1e-12);
            assert!((z - 50.0).abs() < 0.01);
        }
    }

    #[test]
    fn constant_reflection_settles_at_75_ohm() {
        let resp = constant_gamma_response(0.2, 2001);
        let trace = s11_to_tdr(&resp, 15e-12, Window::default()).unwrap();
        let settled = trace.settled_rho();
        assert!((settled - 0.2).abs() < 1e-3, "settled = {settled}");
        let mid = trace.z_ohm.len() / 2;
        assert!((trace.z_ohm[mid] - 75.0).abs() < 0.1, "z = {}", trace.z_ohm[mid]);
    }

    #[test]
    fn settled_level_is_window_independent() {
        let resp = constant_gamma_response(0.2, 1001);
        let mut levels = Vec::new();
        for beta in [4.0, 6.0, 8.0] {
            let trace = s11_to_tdr(&resp, 15e-12, Window::Kaiser { beta }).unwrap();
            levels.push(trace.settled_rho());
        }
        for &l in &levels {
            assert!((l - 0.2).abs() / 0.2 < 0.005, "level = {l}");
        }
    }

    #[test]
    fn grid_without_dc_extrapolates_real_part() {
        // starts at 10 MHz with 10 MHz spacing: DC bin is one step away
        let n = 1001;
        let f: Vec<f64> = (1..=n).map(|i| i as f64 * 10e6).collect();
        let s11 = vec![Complex64::new(0.2, 0.0); n];
        let resp = FrequencyResponse::one_port(f, s11, 50.0).unwrap();
        let trace = s11_to_tdr(&resp, 15e-12, Window::default()).unwrap();
        assert!((trace.settled_rho() - 0.2).abs() < 1e-3);
    }

    #[test]
    fn rho_z_mapping() {
        assert_eq!(rho_to_z(0.0, 50.0), 50.0);
        assert!((rho_to_z(0.2, 50.0) - 75.0).abs() < 1e-12);
        assert_eq!(rho_to_z(1.0, 50.0), f64::INFINITY);
        assert_eq!(rho_to_z(-1.0, 50.0), 0.0);
        // strictly increasing
        let mut prev = rho_to_z(-0.999, 50.0);
        for i in 1..1000 {
            let r = -0.999 + 1.998 * i as f64 / 1000.0;
            let z = rho_to_z(r, 50.0);
            assert!(z > prev);
            prev = z;
        }
    }

    #[test]
    fn non_uniform_grid_is_rejected() {
        let f = vec![0.0, 1e9, 3e9];
        let s11 = vec![Complex64::new(0.0, 0.0); 3];
        let resp = FrequencyResponse::one_port(f, s11, 50.0).unwrap();
        assert!(s11_to_tdr(&resp, 15e-12, Window::default()).is_err());
    }

    #[test]
    fn bad_rise_time_is_rejected() {
        let resp = constant_gamma_response(0.0, 10);
        assert!(s11_to_tdr(&resp, 0.0, Window::default()).is_err());
        assert!(s11_to_tdr(&resp, -1e-12, Window::default()).is_err());
    }

    #[test]
    fn self_comparison_is_exact() {
        let resp = constant_gamma_response(0.15, 501);
        let trace = s11_to_tdr(&resp, 15e-12, Window::default()).unwrap();
        let cmp = compare_traces(&trace, &trace).unwrap();
        assert_eq!(cmp.delay_offset_s, 0.0);
        assert_eq!(cmp.max_abs_dz_ohm, 0.0);
    }

    #[test]
    fn constructed_shift_is_recovered() {
        let resp = constant_gamma_response(0.15, 501);
        let trace = s11_to_tdr(&resp, 15e-12, Window::default()).unwrap();
        // delay by an integer number of samples
        let shift = 40usize;
        let dt = trace.dt();
        let mut delayed = trace.clone();
        delayed.rho = {
            let mut v = vec![0.0; shift];
            v.extend_from_slice(&trace.rho[..trace.rho.len() - shift]);
            v
        };
        delayed.z_ohm = delayed.rho.iter().map(|&r| rho_to_z(r, 50.0)).collect();
        let cmp = compare_traces(&trace, &delayed).unwrap();
        let expected = shift as f64 * dt;
        assert!(
            (cmp.delay_offset_s - expected).abs() <= dt,
            "offset = {} vs {expected}",
            cmp.delay_offset_s
        );
    }

    #[test]
    fn mismatched_rise_times_are_rejected() {
        let resp = constant_gamma_response(0.1, 301);
        let a = s11_to_tdr(&resp, 15e-12, Window::default()).unwrap();
        let b = s11_to_tdr(&resp, 20e-12, Window::default()).unwrap();
        assert!(compare_traces(&a, &b).is_err());
    }
}
