//! The switched trimmed-median filter and the baseline filters it is
//! measured against.
//!
//! Per pixel, the 3x3 window is sorted, the runs of 0s and 255s are trimmed
//! off the ends, and the median of what remains (the unsymmetrical trimmed
//! median, UTMED) acts as the noise detector: a center pixel far from UTMED
//! is corrupted, and if the window median is also far from UTMED the window
//! median itself is untrustworthy, so UTMED replaces the pixel. When the
//! window holds nothing but 0s and 255s there is nothing to trim and a
//! lookup table of window means stands in for UTMED.

use thiserror::Error;

use crate::image::{gather3, pad_replicate, Image};
use crate::snake::{sort9, SortedWindow};

/// Errors for the baseline filters.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum FilterError {
    #[error("unsupported median window size {0}, expected 3 or 5")]
    BadMedianSize(u32),
    #[error("mean filter window size {0} must be odd and positive")]
    BadMeanSize(u32),
}

/// Detection thresholds: `t` gates the center-pixel test, `t1` the
/// median-trust test.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FilterParams {
    pub t: u8,
    pub t1: u8,
}

impl Default for FilterParams {
    fn default() -> Self {
        Self { t: 40, t1: 20 }
    }
}

impl FilterParams {
    pub fn new(t: u8, t1: u8) -> Self {
        Self { t, t1 }
    }
}

/// One-based bounds of the non-extreme run in a sorted window.
///
/// `f` points past the zeros (forward counter), `l` before the 255s
/// (reverse counter). `f > l` means every value is 0 or 255.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TrimBounds {
    pub f: u8,
    pub l: u8,
}

impl TrimBounds {
    /// Number of non-extreme values, zero when the window is all 0s/255s.
    pub fn trimmed_len(&self) -> usize {
        if self.l >= self.f {
            (self.l - self.f + 1) as usize
        } else {
            0
        }
    }

    /// Count of zeros trimmed from the front.
    pub fn zero_count(&self) -> u8 {
        self.f - 1
    }

    /// Count of 255s trimmed from the back.
    pub fn full_count(&self) -> u8 {
        9 - self.l
    }
}

/// What the per-pixel decision did.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Decision {
    /// Center judged clean and kept.
    Unaltered,
    /// Center corrupted, window median trusted: median written.
    MedianReplace,
    /// Center corrupted and median untrusted: trimmed median written.
    UtmedReplace,
}

/// Scans a sorted window: the forward counter starts at 1 and advances once
/// per 0, the reverse counter starts at 9 and retreats once per 255.
pub fn trim_bounds(s: &SortedWindow) -> TrimBounds {
    let zeros = s.values().iter().filter(|&&v| v == 0).count() as u8;
    let fulls = s.values().iter().filter(|&&v| v == 255).count() as u8;
    TrimBounds {
        f: 1 + zeros,
        l: 9 - fulls,
    }
}

/// Replacement value for a window made up solely of 0s and 255s: the window
/// mean, `floor(255 * (9 - zero_count) / 9)`.
///
/// `zero_count` 9 gives 0 and 0 gives 255; the interior values are
/// 226, 198, 170, 141, 113, 85, 56, 28 for one through eight zeros.
pub fn impulse_lut(zero_count: u8) -> u8 {
    assert!(zero_count <= 9, "a 3x3 window holds at most 9 zeros");
    ((255u32 * (9 - u32::from(zero_count))) / 9) as u8
}

/// The unsymmetrical trimmed median: the median of the non-extreme run,
/// with the floor of the mean of the two central values when the run has
/// even length, and the [`impulse_lut`] value when the run is empty.
pub fn utmed(s: &SortedWindow, tb: &TrimBounds) -> u8 {
    let n = tb.trimmed_len();
    if n == 0 {
        return impulse_lut(tb.zero_count());
    }
    let f = tb.f as usize;
    if !n.is_multiple_of(2) {
        s.rank(f + (n - 1) / 2)
    } else {
        let lo = u16::from(s.rank(f + n / 2 - 1));
        let hi = u16::from(s.rank(f + n / 2));
        ((lo + hi) / 2) as u8
    }
}

/// The two-threshold decision for one pixel.
///
/// A center within `t` of UTMED is clean. Otherwise the center is corrupted:
/// if the window median sits within `t1` of UTMED it is trusted and written,
/// else UTMED itself is written.
pub fn classify_and_correct(
    center: u8,
    s_med: u8,
    ut: u8,
    params: &FilterParams,
) -> (u8, Decision) {
    if center.abs_diff(ut) <= params.t {
        (center, Decision::Unaltered)
    } else if s_med.abs_diff(ut) > params.t1 {
        (ut, Decision::UtmedReplace)
    } else {
        (s_med, Decision::MedianReplace)
    }
}

/// Sorted-window form of the per-pixel filter, shared by the direct filter
/// and the scheduler model's oracle tests.
pub fn correct_window(center: u8, s: &SortedWindow, params: &FilterParams) -> (u8, Decision) {
    let tb = trim_bounds(s);
    let ut = utmed(s, &tb);
    classify_and_correct(center, s.median(), ut, params)
}

/// The switched trimmed-median filter over a whole image.
///
/// Single pass; every window is read from the original (replicate-padded)
/// input, never from already-restored pixels, so pixels can be processed in
/// any order or in parallel.
pub fn denoise_pa(img: &Image, params: &FilterParams) -> Image {
    let padded = pad_replicate(img, 1);
    Image::from_fn(img.width(), img.height(), |x, y| {
        let mesh = gather3(&padded, x + 1, y + 1);
        let center = mesh[4];
        let sorted = sort9(mesh);
        correct_window(center, &sorted, params).0
    })
}

/// Standard median filter with a 3x3 or 5x5 window (replicate-padded).
pub fn smf(img: &Image, size: u32) -> Result<Image, FilterError> {
    if size != 3 && size != 5 {
        return Err(FilterError::BadMedianSize(size));
    }
    Ok(rank_filter(img, size, |neighborhood| {
        neighborhood.sort_unstable();
        neighborhood[neighborhood.len() / 2]
    }))
}

/// Box mean filter (floor of the neighborhood average, replicate-padded).
pub fn mean_filter(img: &Image, size: u32) -> Result<Image, FilterError> {
    if size == 0 || size.is_multiple_of(2) {
        return Err(FilterError::BadMeanSize(size));
    }
    let count = size * size;
    Ok(rank_filter(img, size, |neighborhood| {
        let sum: u32 = neighborhood.iter().map(|&v| u32::from(v)).sum();
        (sum / count) as u8
    }))
}

fn rank_filter(img: &Image, size: u32, mut reduce: impl FnMut(&mut [u8]) -> u8) -> Image {
    let half = size / 2;
    let padded = pad_replicate(img, half);
    let mut neighborhood = vec![0u8; size as usize * size as usize];
    Image::from_fn(img.width(), img.height(), |x, y| {
        let mut i = 0;
        for wy in y..y + size {
            let row = padded.row(wy);
            let start = x as usize;
            neighborhood[i..i + size as usize].copy_from_slice(&row[start..start + size as usize]);
            i += size as usize;
        }
        reduce(&mut neighborhood)
    })
}
