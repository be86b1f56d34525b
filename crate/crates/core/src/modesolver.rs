//! Higher-order-mode cutoffs of the coaxial cross-section.
//!
//! The closed-form TE11 estimate kc = 2/(a+b) covers quick design work; the
//! exact route solves the coaxial characteristic equations numerically:
//!
//! - TM0n: J0(kc a) Y0(kc b) - J0(kc b) Y0(kc a) = 0
//! - TE11: J1'(kc a) Y1'(kc b) - J1'(kc b) Y1'(kc a) = 0
//!
//! Roots are located by a dense sign-change scan and refined by bisection;
//! every reported root is bracketed. Below cutoff the mode is evanescent
//! with attenuation alpha = sqrt(kc^2 - k^2).

use serde::Serialize;

use crate::bessel::{j0, j1_prime, y0, y1_prime};
use crate::constants::C0;
use crate::error::{Error, Result};
use crate::geometry::Length;

/// Coaxial waveguide mode label. TM0n indices start at 1: `Tm0n(1)` is TM01.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Mode {
    Te11,
    Tm0n(u32),
}

impl Mode {
    pub const TM01: Mode = Mode::Tm0n(1);

    pub fn label(&self) -> String {
        match self {
            Mode::Te11 => "TE11".to_string(),
            Mode::Tm0n(n) => format!("TM0{n}"),
        }
    }
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.label())
    }
}

/// How a cutoff was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CutoffMethod {
    Approximate,
    ExactBesselRoot,
}

/// A mode cutoff: wavenumber and the frequency it maps to in the dielectric.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct ModeCutoff {
    pub mode: Mode,
    pub kc_rad_per_m: f64,
    pub fc_hz: f64,
    pub method: CutoffMethod,
}

impl ModeCutoff {
    pub fn new(mode: Mode, kc: f64, epsilon_r: f64, method: CutoffMethod) -> Result<Self> {
        Ok(ModeCutoff {
            mode,
            kc_rad_per_m: kc,
            fc_hz: cutoff_frequency(kc, epsilon_r)?,
            method,
        })
    }
}

/// Closed-form TE11 cutoff wavenumber estimate, kc = 2/(a+b), SI units.
pub fn kc_approx(a: Length, b: Length) -> Result<f64> {
    let (am, bm) = (a.meters(), b.meters());
    if !(am > 0.0) || !(bm > 0.0) || am > bm {
        return Err(Error::Domain(format!(
            "kc_approx requires 0 < a <= b, got a = {am} m, b = {bm} m"
        )));
    }
    Ok(2.0 / (am + bm))
}

/// Thin-annulus TM0n cutoff estimate, kc = n pi / (b - a).
pub fn tm0n_kc_estimate(n: u32, a: Length, b: Length) -> Result<f64> {
    let (am, bm) = (a.meters(), b.meters());
    if !(am > 0.0) || !(bm > am) || n == 0 {
        return Err(Error::Domain(format!(
            "tm0n estimate requires 0 < a < b and n >= 1, got a = {am}, b = {bm}, n = {n}"
        )));
    }
    Ok(n as f64 * std::f64::consts::PI / (bm - am))
}

/// Cutoff frequency fc = c kc / (2 pi sqrt(epsilon_r)).
pub fn cutoff_frequency(kc: f64, epsilon_r: f64) -> Result<f64> {
    if !(kc > 0.0) || !kc.is_finite() {
        return Err(Error::Domain(format!("kc must be positive, got {kc}")));
    }
    if !(epsilon_r >= 1.0) {
        return Err(Error::Domain(format!("epsilon_r must be >= 1, got {epsilon_r}")));
    }
    Ok(C0 * kc / (2.0 * std::f64::consts::PI * epsilon_r.sqrt()))
}

/// Real part of the propagation constant below cutoff (nepers/m):
/// sqrt(kc^2 - k^2) with k = 2 pi f sqrt(epsilon_r) / c, and 0 at or above
/// cutoff. Dielectric loss is not included here.
pub fn evanescent_alpha(kc: f64, f_hz: f64, epsilon_r: f64) -> Result<f64> {
    if !(kc > 0.0) || !kc.is_finite() {
        return Err(Error::Domain(format!("kc must be positive, got {kc}")));
    }
    if !(f_hz >= 0.0) || !f_hz.is_finite() {
        return Err(Error::Domain(format!("frequency must be >= 0, got {f_hz}")));
    }
    if !(epsilon_r >= 1.0) {
        return Err(Error::Domain(format!("epsilon_r must be >= 1, got {epsilon_r}")));
    }
    let k = 2.0 * std::f64::consts::PI * f_hz * epsilon_r.sqrt() / C0;
    if k >= kc {
        Ok(0.0)
    } else {
        Ok((kc * kc - k * k).sqrt())
    }
}

/// A root together with the final bisection bracket that pins it.
#[derive(Debug, Clone, Copy)]
pub struct BracketedRoot {
    pub value: f64,
    pub bracket_lo: f64,
    pub bracket_hi: f64,
}

/// Relative width the bisection brackets are refined to.
const BISECTION_REL_TOL: f64 = 1e-12;
/// Scan resolution: TM0n roots are spaced about pi/(b-a); sampling at
/// pi/(100(b-a)) oversamples that spacing 100x.
const SCAN_STEPS_PER_ROOT_SPACING: f64 = 100.0;
/// Scan ceiling: 20 pi / (b - a) holds roughly the first twenty TM roots.
const SCAN_ROOT_SPACINGS: f64 = 20.0;
/// Residual acceptance relative to the local scale of the two products.
const RESIDUAL_REL_TOL: f64 = 1e-9;
/// Hard cap on scan evaluations; only reachable for pathological mode
/// indices on near-degenerate annuli.
const MAX_SCAN_STEPS: u64 = 8_000_000;

/// Exact cutoff wavenumber of `mode` from the characteristic equation.
/// Returns an explicit error when no root lies in the scan range; never
/// falls back to the approximation.
pub fn kc_exact(mode: Mode, a: Length, b: Length) -> Result<f64> {
    Ok(kc_exact_bracketed(mode, a, b)?.value)
}

/// As [`kc_exact`], also exposing the final bracket.
pub fn kc_exact_bracketed(mode: Mode, a: Length, b: Length) -> Result<BracketedRoot> {
    let (am, bm) = (a.meters(), b.meters());
    if !(am > 0.0) || !(bm > am) {
        return Err(Error::Domain(format!(
            "kc_exact requires 0 < a < b, got a = {am} m, b = {bm} m"
        )));
    }
    let tm_spacing = std::f64::consts::PI / (bm - am);
    let (ordinal, scale, f): (usize, f64, Box<dyn Fn(f64) -> f64>) = match mode {
        // The TE11 root sits near 2/(a+b), which drops below pi/(b-a) as the
        // annulus thins; oversample whichever scale is smaller.
        Mode::Te11 => (
            1,
            tm_spacing.min(2.0 / (am + bm)),
            Box::new(move |k: f64| te_char_eq(k, am, bm)),
        ),
        Mode::Tm0n(0) => {
            return Err(Error::Domain("TM0n index starts at 1 (TM01)".into()));
        }
        Mode::Tm0n(n) => (
            n as usize,
            tm_spacing,
            Box::new(move |k: f64| tm_char_eq(k, am, bm)),
        ),
    };

    let step = scale / SCAN_STEPS_PER_ROOT_SPACING;
    let k_max = SCAN_ROOT_SPACINGS * tm_spacing;
    let mut found = 0usize;
    let mut steps = 0u64;
    let mut x_prev = step;
    let mut f_prev = f(x_prev);
    let mut x = x_prev + step;
    while x <= k_max * (1.0 + 1e-12) && steps < MAX_SCAN_STEPS {
        steps += 1;
        let fx = f(x);
        if fx == 0.0 {
            found += 1;
            if found == ordinal {
                return Ok(BracketedRoot {
                    value: x,
                    bracket_lo: x_prev,
                    bracket_hi: x + step,
                });
            }
        } else if f_prev * fx < 0.0 {
            found += 1;
            if found == ordinal {
                let root = bisect(&*f, x_prev, x)?;
                check_residual(mode, root.value, am, bm)?;
                return Ok(root);
            }
        }
        x_prev = x;
        f_prev = fx;
        x += step;
    }
    Err(Error::NoRoot(format!(
        "{} root {} not found for kc in ({step:.6e}, {k_max:.6e}] rad/m (a = {:.4} mil, b = {:.4} mil)",
        mode.label(),
        ordinal,
        a.mils(),
        b.mils()
    )))
}

/// TM0n characteristic function F(kc).
pub fn tm_char_eq(kc: f64, a_m: f64, b_m: f64) -> f64 {
    j0(kc * a_m) * y0(kc * b_m) - j0(kc * b_m) * y0(kc * a_m)
}

/// TE11 characteristic function G(kc).
pub fn te_char_eq(kc: f64, a_m: f64, b_m: f64) -> f64 {
    j1_prime(kc * a_m) * y1_prime(kc * b_m) - j1_prime(kc * b_m) * y1_prime(kc * a_m)
}

fn bisect(f: &dyn Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> Result<BracketedRoot> {
    let mut f_lo = f(lo);
    for _ in 0..200 {
        if hi - lo <= BISECTION_REL_TOL * hi {
            break;
        }
        let mid = 0.5 * (lo + hi);
        let f_mid = f(mid);
        if f_mid == 0.0 {
            // Nudge the bracket onto the exact hit.
            let eps = (hi - lo) * 1e-3;
            return Ok(BracketedRoot {
                value: mid,
                bracket_lo: mid - eps,
                bracket_hi: mid + eps,
            });
        }
        if f_lo * f_mid < 0.0 {
            hi = mid;
        } else {
            lo = mid;
            f_lo = f_mid;
        }
    }
    Ok(BracketedRoot {
        value: 0.5 * (lo + hi),
        bracket_lo: lo,
        bracket_hi: hi,
    })
}

/// Rejects a converged bracket whose midpoint is not actually a zero at the
/// local scale of the characteristic function's two products.
fn check_residual(mode: Mode, kc: f64, a_m: f64, b_m: f64) -> Result<()> {
    let (residual, scale) = match mode {
        Mode::Te11 => {
            let t1 = j1_prime(kc * a_m) * y1_prime(kc * b_m);
            let t2 = j1_prime(kc * b_m) * y1_prime(kc * a_m);
            ((t1 - t2).abs(), t1.abs() + t2.abs())
        }
        Mode::Tm0n(_) => {
            let t1 = j0(kc * a_m) * y0(kc * b_m);
            let t2 = j0(kc * b_m) * y0(kc * a_m);
            ((t1 - t2).abs(), t1.abs() + t2.abs())
        }
    };
    if residual > RESIDUAL_REL_TOL * scale.max(f64::MIN_POSITIVE) {
        return Err(Error::NoRoot(format!(
            "{} candidate at kc = {kc:.6e} rad/m failed the residual check \
             ({residual:.3e} vs scale {scale:.3e})",
            mode.label()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    const MIL: f64 = 25.4e-6;

    fn mils(x: f64) -> Length {
        Length::from_mils(x)
    }

    #[test]
    fn kc_approx_paper_geometry() {
        let kc = kc_approx(mils(3.5), mils(15.0)).unwrap();
        assert!((kc - 4256.2).abs() < 0.5, "kc = {kc}");
        // hand evaluation: 2 / (18.5 * 25.4e-6)
        assert!((kc - 2.0 / (18.5 * MIL)).abs() < 1e-9);
    }

    #[test]
    fn kc_approx_collapses_and_scales() {
        let r = mils(4.0);
        assert!((kc_approx(r, r).unwrap() - 1.0 / r.meters()).abs() < 1e-9);
        let k1 = kc_approx(mils(3.0), mils(9.0)).unwrap();
        let k2 = kc_approx(mils(6.0), mils(18.0)).unwrap();
        assert!((k1 / k2 - 2.0).abs() < 1e-12);
        assert!(kc_approx(mils(-1.0), mils(5.0)).is_err());
        assert!(kc_approx(mils(6.0), mils(5.0)).is_err());
    }

    #[test]
    fn cutoff_frequency_paper_value() {
        let kc = kc_approx(mils(3.5), mils(15.0)).unwrap();
        let fc = cutoff_frequency(kc, 3.62).unwrap();
        assert!((fc - 106.7e9).abs() < 0.2e9, "fc = {fc}");
        // paper reports 109 GHz for this geometry; approximate route lands within 3%
        assert!((fc - 109e9).abs() < 3e9);
    }

    #[test]
    fn cutoff_frequency_scaling() {
        let fc1 = cutoff_frequency(4000.0, 2.0).unwrap();
        let fc2 = cutoff_frequency(4000.0, 8.0).unwrap();
        assert!((fc1 / fc2 - 2.0).abs() < 1e-12);
        assert!(cutoff_frequency(0.0, 2.0).is_err());
        assert!(cutoff_frequency(1.0, 0.5).is_err());
    }

    #[test]
    fn te11_exact_near_approx_for_paper_geometry() {
        let kc = kc_exact(Mode::Te11, mils(3.5), mils(15.0)).unwrap();
        let approx = kc_approx(mils(3.5), mils(15.0)).unwrap();
        assert!((kc - approx).abs() / kc < 0.05, "kc = {kc}, approx = {approx}");
        // scipy brentq on the same characteristic equation: 4370.3149 rad/m
        assert!((kc - 4370.3149).abs() < 0.5, "kc = {kc}");
    }

    #[test]
    fn tm01_exact_near_thin_annulus_estimate() {
        let kc = kc_exact(Mode::TM01, mils(3.5), mils(15.0)).unwrap();
        let est = tm0n_kc_estimate(1, mils(3.5), mils(15.0)).unwrap();
        assert!((kc - est).abs() / est < 0.10, "kc = {kc}, estimate = {est}");
        // scipy value for the first TM root of this geometry
        assert!((kc - 10500.166).abs() < 1.0, "kc = {kc}");
    }

    #[test]
    fn tm02_is_second_root() {
        let k1 = kc_exact(Mode::Tm0n(1), mils(3.5), mils(15.0)).unwrap();
        let k2 = kc_exact(Mode::Tm0n(2), mils(3.5), mils(15.0)).unwrap();
        assert!(k2 > 1.8 * k1);
        // scipy: second root at 21357.77 rad/m
        assert!((k2 - 21357.77).abs() < 2.0, "k2 = {k2}");
    }

    #[test]
    fn te11_thin_coax_limit_matches_approximation() {
        let a = mils(10.0);
        let b = mils(10.01);
        let kc = kc_exact(Mode::Te11, a, b).unwrap();
        let normalized = kc * (a.meters() + b.meters()) / 2.0;
        assert!((normalized - 1.0).abs() < 1e-3, "normalized = {normalized}");
    }

    #[test]
    fn te11_below_tm01_over_sweep() {
        for i in 0..20 {
            let ratio = 2.0 + 4.0 * i as f64 / 19.0;
            let a = mils(2.0);
            let b = mils(2.0 * ratio);
            let te = kc_exact(Mode::Te11, a, b).unwrap();
            let tm = kc_exact(Mode::TM01, a, b).unwrap();
            assert!(te < tm, "b/a = {ratio}: te = {te}, tm = {tm}");
        }
    }

    #[test]
    fn exact_root_is_bracketed_by_sign_change() {
        let a = mils(3.5);
        let b = mils(15.0);
        for mode in [Mode::Te11, Mode::TM01, Mode::Tm0n(3)] {
            let r = kc_exact_bracketed(mode, a, b).unwrap();
            let f = |k: f64| match mode {
                Mode::Te11 => te_char_eq(k, a.meters(), b.meters()),
                Mode::Tm0n(_) => tm_char_eq(k, a.meters(), b.meters()),
            };
            assert!(
                f(r.bracket_lo) * f(r.bracket_hi) < 0.0,
                "{mode}: no sign change across final bracket"
            );
            assert!(r.bracket_lo <= r.value && r.value <= r.bracket_hi);
            assert!((r.bracket_hi - r.bracket_lo) <= 2e-12 * r.bracket_hi);
        }
    }

    #[test]
    fn exact_scale_invariance() {
        let a = mils(3.0);
        let b = mils(11.0);
        let base = kc_exact(Mode::Te11, a, b).unwrap();
        for s in [0.5, 2.0, 10.0] {
            let scaled = kc_exact(
                Mode::Te11,
                Length::from_meters(a.meters() * s),
                Length::from_meters(b.meters() * s),
            )
            .unwrap();
            assert!(
                (scaled - base / s).abs() < 1e-9 * base / s,
                "s = {s}: {scaled} vs {}",
                base / s
            );
        }
    }

    #[test]
    fn alpha_endpoints_and_midpoint() {
        let kc = 4256.2;
        let er = 3.62;
        let fc = cutoff_frequency(kc, er).unwrap();
        assert_eq!(evanescent_alpha(kc, 0.0, er).unwrap(), kc);
        assert_eq!(evanescent_alpha(kc, fc, er).unwrap(), 0.0);
        let mid = evanescent_alpha(kc, fc / 2.0, er).unwrap();
        assert!((mid - kc * 3f64.sqrt() / 2.0).abs() < 1e-6 * kc);
        assert_eq!(evanescent_alpha(kc, fc * 2.0, er).unwrap(), 0.0);
    }

    #[test]
    fn alpha_strictly_decreasing_below_cutoff() {
        let kc = 5000.0;
        let er = 4.0;
        let fc = cutoff_frequency(kc, er).unwrap();
        let mut prev = evanescent_alpha(kc, 0.0, er).unwrap();
        for i in 1..100 {
            let f = fc * i as f64 / 100.0;
            let alpha = evanescent_alpha(kc, f, er).unwrap();
            assert!(alpha < prev, "alpha not decreasing at f = {f}");
            prev = alpha;
        }
    }

    #[test]
    fn no_root_is_an_error_not_a_fallback() {
        // TM index far beyond the scan ceiling of ~20 roots
        let err = kc_exact(Mode::Tm0n(40), mils(3.5), mils(15.0)).unwrap_err();
        assert!(matches!(err, Error::NoRoot(_)), "{err}");
    }
}
