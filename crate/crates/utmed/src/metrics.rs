//! Restoration quality measures: MSE, PSNR, and the image enhancement factor.
//!
//! Squared-error sums are accumulated in 64-bit integers before any division.
//! PSNR of identical images is `+inf`; the enhancement factor of a perfect
//! restoration divides by zero and is reported as `nan`. The CSV form spells
//! those markers exactly `inf` and `nan`.
//!
//! The enhancement factor is the standard ratio of summed squared errors,
//! `sum((noisy - clean)^2) / sum((restored - clean)^2`): values above 1 mean
//! the restoration reduced the total squared error.

use crate::image::{Image, ImageError};

/// The three measures for one (clean, noisy, restored) triple.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct QualityReport {
    pub mse: f64,
    pub psnr: f64,
    pub ief: f64,
}

impl QualityReport {
    /// Measures `restored` against `clean`, with `noisy` fixing the
    /// enhancement-factor numerator.
    pub fn measure(clean: &Image, noisy: &Image, restored: &Image) -> Result<Self, ImageError> {
        Ok(Self {
            mse: mse(clean, restored)?,
            psnr: psnr(clean, restored)?,
            ief: ief(clean, noisy, restored)?,
        })
    }

    /// `mse,psnr,ief` with infinities as `inf` and undefined values as `nan`.
    pub fn to_csv_row(&self) -> String {
        format!(
            "{},{},{}",
            fmt_metric(self.mse),
            fmt_metric(self.psnr),
            fmt_metric(self.ief)
        )
    }
}

/// Formats one metric value, spelling the markers exactly.
pub fn fmt_metric(v: f64) -> String {
    if v.is_nan() {
        "nan".to_owned()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_owned()
    } else {
        format!("{v}")
    }
}

fn sum_squared_error(a: &Image, b: &Image) -> u64 {
    a.pixels()
        .iter()
        .zip(b.pixels())
        .map(|(&x, &y)| {
            let d = u64::from(x.abs_diff(y));
            d * d
        })
        .sum()
}

/// Mean squared error between two equal-sized images.
pub fn mse(reference: &Image, test: &Image) -> Result<f64, ImageError> {
    reference.same_dimensions(test)?;
    Ok(sum_squared_error(reference, test) as f64 / reference.len() as f64)
}

/// Peak signal-to-noise ratio in dB for the given mean squared error.
pub fn psnr_from_mse(mse: f64) -> f64 {
    if mse == 0.0 {
        f64::INFINITY
    } else {
        10.0 * (255.0f64 * 255.0 / mse).log10()
    }
}

/// Peak signal-to-noise ratio between two equal-sized images, `+inf` when
/// they are identical.
pub fn psnr(reference: &Image, test: &Image) -> Result<f64, ImageError> {
    Ok(psnr_from_mse(mse(reference, test)?))
}

/// Image enhancement factor; `nan` when the restoration is perfect.
pub fn ief(clean: &Image, noisy: &Image, restored: &Image) -> Result<f64, ImageError> {
    clean.same_dimensions(noisy)?;
    clean.same_dimensions(restored)?;
    let numerator = sum_squared_error(noisy, clean);
    let denominator = sum_squared_error(restored, clean);
    if denominator == 0 {
        Ok(f64::NAN)
    } else {
        Ok(numerator as f64 / denominator as f64)
    }
}
