//! Fringe contrast and harmonic content.

use std::collections::BTreeMap;
use std::f64::consts::TAU;

use rustfft::num_complex::Complex;
use rustfft::FftPlanner;

use crate::error::{Error, Result};

/// Magnitudes at or below this are treated as absent.
pub const DEFAULT_THRESHOLD: f64 = 1e-9;

/// `(max - min) / (max + min)`, or 0 for an all-zero series.
pub fn visibility(series: &[f64]) -> Result<f64> {
    if series.is_empty() {
        return Err(Error::EmptySeries);
    }
    if let Some(&neg) = series.iter().find(|v| **v < 0.0) {
        return Err(Error::NegativeValue(neg));
    }
    let max = series.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = series.iter().copied().fold(f64::INFINITY, f64::min);
    if max + min == 0.0 {
        return Ok(0.0);
    }
    Ok((max - min) / (max + min))
}

/// Amplitude of each `cos(k phi + delta)` component of a series sampled on
/// a uniform grid covering one period. Harmonic 0 is the mean. Entries with
/// magnitude at or below `threshold` are omitted.
pub fn harmonic_spectrum(series: &[f64], threshold: f64) -> Result<BTreeMap<usize, f64>> {
    let n = series.len();
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    let mut buf: Vec<Complex<f64>> = series.iter().map(|&v| Complex::new(v, 0.0)).collect();
    FftPlanner::new().plan_fft_forward(n).process(&mut buf);

    let scale = 1.0 / n as f64;
    let mut spectrum = BTreeMap::new();
    for (k, coeff) in buf.iter().enumerate().take(n / 2 + 1) {
        // Folded pairs k and n-k carry equal weight except at DC and Nyquist.
        let fold = if k == 0 || 2 * k == n { 1.0 } else { 2.0 };
        let magnitude = fold * coeff.norm() * scale;
        if magnitude > threshold {
            spectrum.insert(k, magnitude);
        }
    }
    Ok(spectrum)
}

/// Checks that `phi` is the uniform grid `2 pi i / n` and returns
/// [`harmonic_spectrum`] of the aligned series.
pub fn harmonic_spectrum_on_grid(
    phi: &[f64],
    series: &[f64],
    threshold: f64,
) -> Result<BTreeMap<usize, f64>> {
    if phi.len() != series.len() {
        return Err(Error::SeriesLength {
            series: series.len(),
            grid: phi.len(),
        });
    }
    check_uniform_grid(phi)?;
    harmonic_spectrum(series, threshold)
}

pub(crate) fn check_uniform_grid(phi: &[f64]) -> Result<()> {
    let n = phi.len();
    if n == 0 {
        return Err(Error::EmptySeries);
    }
    let step = TAU / n as f64;
    let uniform = phi
        .iter()
        .enumerate()
        .all(|(i, &p)| (p - step * i as f64).abs() <= 1e-9);
    if uniform {
        Ok(())
    } else {
        Err(Error::NonUniformGrid)
    }
}

/// Highest harmonic index above `threshold`; 0 for a constant series.
pub fn debroglie_reduction_factor(series: &[f64], threshold: f64) -> Result<usize> {
    if series.iter().all(|v| *v == 0.0) {
        return Err(Error::AllZeroSeries);
    }
    let spectrum = harmonic_spectrum(series, threshold)?;
    Ok(spectrum.keys().next_back().copied().unwrap_or(0))
}
