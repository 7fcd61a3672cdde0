//! Switched median filtering for impulse-corrupted 8-bit grayscale images.
//!
//! The restoration pipeline sorts each 3x3 window with a snake-order shear
//! sorting network, trims the 0/255 runs off the sorted values, and uses the
//! unsymmetrical trimmed median (UTMED) both to detect corrupted pixels and,
//! when the ordinary window median is itself suspect, to replace them.
//!
//! The crate also carries everything needed to exercise the filter end to
//! end: bit-exact PGM I/O ([`pgm`]), seeded noise injectors ([`noise`]),
//! exhaustive verification of the sorting network ([`snake`]), baseline
//! median/mean filters ([`filter`]), a cycle-accounted model of the hardware
//! scheduler that is output-equivalent to the direct filter ([`fsmd`]), and
//! the MSE/PSNR/IEF quality measures ([`metrics`]).

pub mod filter;
pub mod fsmd;
pub mod image;
pub mod metrics;
pub mod noise;
pub mod pgm;
pub mod snake;

pub use filter::{
    classify_and_correct, denoise_pa, impulse_lut, mean_filter, smf, trim_bounds, utmed, Decision,
    FilterError, FilterParams, TrimBounds,
};
pub use fsmd::{
    fsmd_run_image, fsmd_run_window, CycleCosts, CycleReport, Datapath, FsmdState, IndexTable,
    Scheduler,
};
pub use image::{pad_replicate, window_at, Image, ImageError, Window};
pub use metrics::{ief, mse, psnr, psnr_from_mse, QualityReport};
pub use noise::{
    add_gaussian, add_mixed, add_random_impulse, add_salt_pepper, measure_density, NoiseError,
    NoiseKind, NoiseSpec,
};
pub use pgm::{read_pgm, write_pgm, PgmError};
pub use snake::{
    reference_sort, snake_sort_network, sort3, sort9, verify_network, Network, NetworkReport,
    SortedWindow,
};
