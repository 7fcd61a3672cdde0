//! Grayscale image storage, replicate padding, and square window extraction.
//!
//! Every pipeline stage exchanges [`Image`] values: row-major 8-bit
//! intensities with the origin at the top-left corner.

use std::fmt;

use thiserror::Error;

/// Errors for image construction and window extraction.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum ImageError {
    #[error("pixel buffer holds {actual} samples, expected {expected} for {width}x{height}")]
    PixelCountMismatch {
        width: u32,
        height: u32,
        expected: usize,
        actual: usize,
    },
    #[error("image dimensions must be positive, got {width}x{height}")]
    ZeroDimension { width: u32, height: u32 },
    #[error("window size {size} must be a positive odd number")]
    BadWindowSize { size: u32 },
    #[error("{size}x{size} window centered at ({x}, {y}) leaves the {width}x{height} image")]
    WindowOutOfBounds {
        x: u32,
        y: u32,
        size: u32,
        width: u32,
        height: u32,
    },
    #[error("image dimensions differ: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(u32, u32, u32, u32),
}

/// A rectangular grid of 8-bit grayscale intensities, row-major, top-left origin.
#[derive(Clone, PartialEq, Eq)]
pub struct Image {
    width: u32,
    height: u32,
    pixels: Vec<u8>,
}

impl fmt::Debug for Image {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Image({}x{})", self.width, self.height)
    }
}

impl Image {
    /// Builds an image from a row-major pixel buffer.
    pub fn new(width: u32, height: u32, pixels: Vec<u8>) -> Result<Self, ImageError> {
        if width == 0 || height == 0 {
            return Err(ImageError::ZeroDimension { width, height });
        }
        let expected = width as usize * height as usize;
        if pixels.len() != expected {
            return Err(ImageError::PixelCountMismatch {
                width,
                height,
                expected,
                actual: pixels.len(),
            });
        }
        Ok(Self {
            width,
            height,
            pixels,
        })
    }

    /// An image filled with a single intensity.
    pub fn constant(width: u32, height: u32, value: u8) -> Self {
        Self::new(width, height, vec![value; width as usize * height as usize])
            .expect("constant image dimensions must be positive")
    }

    /// Builds an image by evaluating `f(x, y)` at every pixel.
    pub fn from_fn(width: u32, height: u32, mut f: impl FnMut(u32, u32) -> u8) -> Self {
        let mut pixels = Vec::with_capacity(width as usize * height as usize);
        for y in 0..height {
            for x in 0..width {
                pixels.push(f(x, y));
            }
        }
        Self::new(width, height, pixels).expect("generated image dimensions must be positive")
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Total pixel count.
    pub fn len(&self) -> usize {
        self.pixels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pixels.is_empty()
    }

    /// Row-major pixel slice.
    pub fn pixels(&self) -> &[u8] {
        &self.pixels
    }

    pub fn pixels_mut(&mut self) -> &mut [u8] {
        &mut self.pixels
    }

    /// Consumes the image, returning the pixel buffer.
    pub fn into_pixels(self) -> Vec<u8> {
        self.pixels
    }

    /// Intensity at column `x`, row `y`. Panics outside the image.
    pub fn get(&self, x: u32, y: u32) -> u8 {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of bounds");
        self.pixels[y as usize * self.width as usize + x as usize]
    }

    pub fn set(&mut self, x: u32, y: u32, value: u8) {
        assert!(x < self.width && y < self.height, "pixel ({x}, {y}) out of bounds");
        self.pixels[y as usize * self.width as usize + x as usize] = value;
    }

    /// One row as a slice.
    pub fn row(&self, y: u32) -> &[u8] {
        assert!(y < self.height, "row {y} out of bounds");
        let w = self.width as usize;
        &self.pixels[y as usize * w..(y as usize + 1) * w]
    }

    /// Checks that `other` has the same dimensions.
    pub fn same_dimensions(&self, other: &Image) -> Result<(), ImageError> {
        if self.width != other.width || self.height != other.height {
            return Err(ImageError::DimensionMismatch(
                self.width,
                self.height,
                other.width,
                other.height,
            ));
        }
        Ok(())
    }
}

/// A size x size neighborhood copied out of an image, row-major.
///
/// The processed pixel sits at the geometric center, index `(size^2 - 1) / 2`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Window {
    size: u32,
    values: Vec<u8>,
}

impl Window {
    /// Builds a window from row-major values; `size` must be odd and match the length.
    pub fn new(size: u32, values: Vec<u8>) -> Result<Self, ImageError> {
        if size == 0 || size.is_multiple_of(2) {
            return Err(ImageError::BadWindowSize { size });
        }
        let expected = size as usize * size as usize;
        if values.len() != expected {
            return Err(ImageError::PixelCountMismatch {
                width: size,
                height: size,
                expected,
                actual: values.len(),
            });
        }
        Ok(Self { size, values })
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    pub fn values(&self) -> &[u8] {
        &self.values
    }

    /// The processed (center) pixel.
    pub fn center(&self) -> u8 {
        self.values[(self.values.len() - 1) / 2]
    }
}

/// Grows an image by `margin` on every side, replicating the nearest edge pixel.
///
/// The interior is copied verbatim, so filters that pad by half the window
/// size process every original pixel and keep the output dimensions.
pub fn pad_replicate(img: &Image, margin: u32) -> Image {
    if margin == 0 {
        return img.clone();
    }
    let w = img.width();
    let h = img.height();
    Image::from_fn(w + 2 * margin, h + 2 * margin, |x, y| {
        let sx = x.saturating_sub(margin).min(w - 1);
        let sy = y.saturating_sub(margin).min(h - 1);
        img.get(sx, sy)
    })
}

/// Copies the size x size window centered at `(x, y)` out of `padded`.
///
/// The window must lie fully inside the image; callers working on
/// original-image coordinates pad by `(size - 1) / 2` first.
pub fn window_at(padded: &Image, x: u32, y: u32, size: u32) -> Result<Window, ImageError> {
    if size == 0 || size.is_multiple_of(2) {
        return Err(ImageError::BadWindowSize { size });
    }
    let half = size / 2;
    let inside = x >= half
        && y >= half
        && x + half < padded.width()
        && y + half < padded.height();
    if !inside {
        return Err(ImageError::WindowOutOfBounds {
            x,
            y,
            size,
            width: padded.width(),
            height: padded.height(),
        });
    }
    let mut values = Vec::with_capacity(size as usize * size as usize);
    for wy in (y - half)..=(y + half) {
        let row = padded.row(wy);
        values.extend_from_slice(&row[(x - half) as usize..=(x + half) as usize]);
    }
    Window::new(size, values)
}

/// Gathers the 3x3 neighborhood of `(x, y)` without allocating.
///
/// Hot-path variant of [`window_at`] for the per-pixel filter loops; the
/// center must be at least one pixel away from every border.
pub(crate) fn gather3(padded: &Image, x: u32, y: u32) -> [u8; 9] {
    debug_assert!(x >= 1 && y >= 1 && x + 1 < padded.width() && y + 1 < padded.height());
    let w = padded.width() as usize;
    let i = y as usize * w + x as usize;
    let p = padded.pixels();
    [
        p[i - w - 1],
        p[i - w],
        p[i - w + 1],
        p[i - 1],
        p[i],
        p[i + 1],
        p[i + w - 1],
        p[i + w],
        p[i + w + 1],
    ]
}
