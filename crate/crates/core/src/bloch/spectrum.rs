use crate::constants::GAUSSIAN_TIME_BANDWIDTH;

/// FWHM (Hz) of the spectrum of a transform-limited Gaussian pulse with FWHM
/// duration `duration` (s).
pub fn spectral_fwhm(duration: f64) -> f64 {
    GAUSSIAN_TIME_BANDWIDTH / duration
}

/// Relative spectral power at detuning `detuning` (Hz) from the pulse centre.
/// Multiplies θ² when a pulse is tuned away from resonance.
pub fn spectral_weight(detuning: f64, duration: f64) -> f64 {
    let sigma = spectral_fwhm(duration) / (2.0 * (2.0 * std::f64::consts::LN_2).sqrt());
    (-detuning * detuning / (2.0 * sigma * sigma)).exp()
}
