//! Physical constants, SI values throughout.

/// Speed of light in vacuum (m/s).
pub const C0: f64 = 299_792_458.0;

/// Permeability of free space (H/m), CODATA 2018.
pub const MU0: f64 = 1.256_637_062_12e-6;

/// Permittivity of free space (F/m), CODATA 2018.
pub const EPS0: f64 = 8.854_187_812_8e-12;

/// Nepers to decibels, 20/ln(10).
pub const NEPER_TO_DB: f64 = 8.685_889_638_065_035;

/// Meters per mil (one thousandth of an inch), exact.
pub const METERS_PER_MIL: f64 = 25.4e-6;

/// Wave impedance of free space, sqrt(MU0/EPS0) ≈ 376.73 Ω.
#[inline]
pub fn eta0() -> f64 {
    (MU0 / EPS0).sqrt()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn eta0_matches_mu0_c0() {
        // eta0 = mu0 * c0 up to the rounding of the CODATA values
        assert!((eta0() - MU0 * C0).abs() < 1e-6);
        assert!((eta0() - 376.730_313_667).abs() < 1e-8);
    }

    #[test]
    fn c0_consistent_with_mu0_eps0() {
        let c = 1.0 / (MU0 * EPS0).sqrt();
        assert!((c - C0).abs() < 1.0);
    }
}
