//! Seeded, reproducible corruption of clean images.
//!
//! Four regimes are covered: fixed-valued (salt & pepper) impulses,
//! random-valued impulses, additive zero-mean Gaussian noise on the
//! normalized [0, 1] intensity scale, and Gaussian-plus-impulse mixed noise.
//!
//! # Determinism contract
//!
//! Every injector draws from a `ChaCha8Rng` built with
//! `SeedableRng::seed_from_u64(seed)` and visits pixels in row-major order:
//!
//! * salt & pepper — one `f64` in [0, 1) per pixel;
//! * random impulse — one `f64` per pixel, plus one `u8` for each replaced pixel;
//! * Gaussian — one normal sample per pixel;
//! * mixed — two sub-seeds drawn up front with `next_u64` (Gaussian stage
//!   first, impulse stage second), then the stages above.
//!
//! A fixed (image, parameters, seed) triple therefore reproduces bit-identical
//! output on any platform, for the RNG crate versions pinned in the manifest.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Normal};
use thiserror::Error;

use crate::image::{Image, ImageError};

/// Parameter validation errors for the noise injectors.
#[derive(Debug, Error, PartialEq)]
pub enum NoiseError {
    #[error("probabilities out of range: p={p}, q={q} (need p, q >= 0 and p + q <= 1)")]
    BadProbabilities { p: f64, q: f64 },
    #[error("probability {0} outside [0, 1]")]
    BadProbability(f64),
    #[error("variance {0} must be finite and nonnegative")]
    BadVariance(f64),
}

/// One noise regime with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum NoiseKind {
    /// Pixels become 0 with probability `p` and 255 with probability `q`.
    SaltPepper { p: f64, q: f64 },
    /// Pixels are replaced, with probability `d`, by a uniform value in [0, 255].
    RandomImpulse { d: f64 },
    /// Additive zero-mean Gaussian noise with variance `var` on the [0, 1] scale.
    Gaussian { var: f64 },
    /// Gaussian noise first, then symmetric salt & pepper of total density `d`.
    Mixed { d: f64, var: f64 },
}

/// A noise regime plus the seed that makes it reproducible.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct NoiseSpec {
    pub kind: NoiseKind,
    pub seed: u64,
}

impl NoiseSpec {
    pub fn new(kind: NoiseKind, seed: u64) -> Self {
        Self { kind, seed }
    }

    pub fn validate(&self) -> Result<(), NoiseError> {
        match self.kind {
            NoiseKind::SaltPepper { p, q } => check_split(p, q),
            NoiseKind::RandomImpulse { d } => check_probability(d),
            NoiseKind::Gaussian { var } => check_variance(var),
            NoiseKind::Mixed { d, var } => {
                check_probability(d)?;
                check_variance(var)
            }
        }
    }

    /// Applies the regime to `img`.
    pub fn apply(&self, img: &Image) -> Result<Image, NoiseError> {
        match self.kind {
            NoiseKind::SaltPepper { p, q } => add_salt_pepper(img, p, q, self.seed),
            NoiseKind::RandomImpulse { d } => add_random_impulse(img, d, self.seed),
            NoiseKind::Gaussian { var } => add_gaussian(img, var, self.seed),
            NoiseKind::Mixed { d, var } => add_mixed(img, d, var, self.seed),
        }
    }
}

fn check_split(p: f64, q: f64) -> Result<(), NoiseError> {
    let ok = p.is_finite() && q.is_finite() && p >= 0.0 && q >= 0.0 && p + q <= 1.0;
    if ok {
        Ok(())
    } else {
        Err(NoiseError::BadProbabilities { p, q })
    }
}

fn check_probability(d: f64) -> Result<(), NoiseError> {
    if d.is_finite() && (0.0..=1.0).contains(&d) {
        Ok(())
    } else {
        Err(NoiseError::BadProbability(d))
    }
}

fn check_variance(var: f64) -> Result<(), NoiseError> {
    if var.is_finite() && var >= 0.0 {
        Ok(())
    } else {
        Err(NoiseError::BadVariance(var))
    }
}

/// Salt & pepper: each pixel independently becomes 0 with probability `p`,
/// 255 with probability `q`, and is left unchanged otherwise.
pub fn add_salt_pepper(img: &Image, p: f64, q: f64, seed: u64) -> Result<Image, NoiseError> {
    check_split(p, q)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = img.clone();
    for px in out.pixels_mut() {
        let u: f64 = rng.random();
        if u < p {
            *px = 0;
        } else if u < p + q {
            *px = 255;
        }
    }
    Ok(out)
}

/// Random-valued impulse: each pixel is replaced, with probability `d`, by a
/// uniform random intensity in [0, 255].
pub fn add_random_impulse(img: &Image, d: f64, seed: u64) -> Result<Image, NoiseError> {
    check_probability(d)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = img.clone();
    for px in out.pixels_mut() {
        let u: f64 = rng.random();
        if u < d {
            *px = rng.random();
        }
    }
    Ok(out)
}

/// Additive zero-mean Gaussian noise with variance `var` on the normalized
/// [0, 1] scale: each pixel becomes `clamp(round(pixel + 255 * g), 0, 255)`
/// with `g ~ Normal(0, sqrt(var))`.
pub fn add_gaussian(img: &Image, var: f64, seed: u64) -> Result<Image, NoiseError> {
    check_variance(var)?;
    let normal = Normal::new(0.0, var.sqrt()).map_err(|_| NoiseError::BadVariance(var))?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = img.clone();
    for px in out.pixels_mut() {
        let g = normal.sample(&mut rng);
        let v = (f64::from(*px) + 255.0 * g).round();
        *px = v.clamp(0.0, 255.0) as u8;
    }
    Ok(out)
}

/// Mixed noise: Gaussian of variance `var` first, then salt & pepper with the
/// impulse density `d` split evenly (`p = q = d / 2`).
///
/// The two stage seeds are drawn from `ChaCha8Rng::seed_from_u64(seed)` with
/// `next_u64()`, Gaussian stage first.
pub fn add_mixed(img: &Image, d: f64, var: f64, seed: u64) -> Result<Image, NoiseError> {
    check_probability(d)?;
    check_variance(var)?;
    let (gauss_seed, impulse_seed) = mixed_stage_seeds(seed);
    let blurred = add_gaussian(img, var, gauss_seed)?;
    add_salt_pepper(&blurred, d / 2.0, d / 2.0, impulse_seed)
}

/// The deterministic (Gaussian, impulse) sub-seed pair used by [`add_mixed`].
pub fn mixed_stage_seeds(seed: u64) -> (u64, u64) {
    let mut seeder = ChaCha8Rng::seed_from_u64(seed);
    (seeder.next_u64(), seeder.next_u64())
}

/// Fraction of pixel positions where `noisy` differs from `clean`.
pub fn measure_density(clean: &Image, noisy: &Image) -> Result<f64, ImageError> {
    clean.same_dimensions(noisy)?;
    let changed = clean
        .pixels()
        .iter()
        .zip(noisy.pixels())
        .filter(|(a, b)| a != b)
        .count();
    Ok(changed as f64 / clean.len() as f64)
}
