//! Property tests for the invariants that hold across modules.

use proptest::prelude::*;

use utmed::filter::{denoise_pa, mean_filter, smf, trim_bounds, utmed, FilterParams};
use utmed::image::{pad_replicate, window_at, Image};
use utmed::metrics::{ief, mse, psnr};
use utmed::noise::add_salt_pepper;
use utmed::pgm::{read_pgm, write_pgm};
use utmed::snake::{reference_sort, snake_sort_network};

fn arb_image(max_side: u32) -> impl Strategy<Value = Image> {
    (1..=max_side, 1..=max_side)
        .prop_flat_map(|(w, h)| {
            prop::collection::vec(any::<u8>(), (w * h) as usize)
                .prop_map(move |pixels| Image::new(w, h, pixels).unwrap())
        })
}

/// Window values weighted toward 0/255 so the trim and lookup paths get hit.
fn arb_window_values() -> impl Strategy<Value = [u8; 9]> {
    let extreme_or_any = prop_oneof![
        2 => Just(0u8),
        2 => Just(255u8),
        3 => any::<u8>(),
    ];
    prop::array::uniform9(extreme_or_any)
}

/// Trimmed-median oracle: plain sort, drop every 0 and 255, median with the
/// floor-mean tie rule; an emptied window falls back to the window mean.
fn oracle_utmed(mut values: [u8; 9]) -> u8 {
    values.sort_unstable();
    let trimmed: Vec<u8> = values
        .iter()
        .copied()
        .filter(|&v| v != 0 && v != 255)
        .collect();
    if trimmed.is_empty() {
        let sum: u32 = values.iter().map(|&v| u32::from(v)).sum();
        return (sum / 9) as u8;
    }
    let n = trimmed.len();
    if n % 2 == 1 {
        trimmed[n / 2]
    } else {
        ((u16::from(trimmed[n / 2 - 1]) + u16::from(trimmed[n / 2])) / 2) as u8
    }
}

fn invert(img: &Image) -> Image {
    Image::new(
        img.width(),
        img.height(),
        img.pixels().iter().map(|&p| 255 - p).collect(),
    )
    .unwrap()
}

#[test]
fn full_size_image_roundtrips_bit_exactly() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../assets/camera.pgm");
    let original = std::fs::read(path).expect("bundled camera image");
    let img = read_pgm(&original).unwrap();
    assert_eq!((img.width(), img.height()), (512, 512));
    assert_eq!(write_pgm(&img, false), original);
    assert_eq!(read_pgm(&write_pgm(&img, true)).unwrap(), img);
}

proptest! {
    #[test]
    fn pgm_roundtrip_binary(img in arb_image(24)) {
        prop_assert_eq!(read_pgm(&write_pgm(&img, false)).unwrap(), img);
    }

    #[test]
    fn pgm_roundtrip_ascii(img in arb_image(24)) {
        let data = write_pgm(&img, true);
        prop_assert!(data.split(|&b| b == b'\n').all(|line| line.len() <= 70));
        prop_assert_eq!(read_pgm(&data).unwrap(), img);
    }

    #[test]
    fn padding_preserves_interior_and_draws_from_the_image(
        img in arb_image(12),
        margin in 0u32..4,
    ) {
        let padded = pad_replicate(&img, margin);
        prop_assert_eq!(padded.width(), img.width() + 2 * margin);
        prop_assert_eq!(padded.height(), img.height() + 2 * margin);
        for y in 0..img.height() {
            for x in 0..img.width() {
                prop_assert_eq!(padded.get(x + margin, y + margin), img.get(x, y));
            }
        }
        // every padded value exists somewhere in the original
        for &v in padded.pixels() {
            prop_assert!(img.pixels().contains(&v));
        }
    }

    #[test]
    fn windows_visit_every_pixel_once_as_center(img in arb_image(8)) {
        let padded = pad_replicate(&img, 1);
        let mut centers = Vec::new();
        for y in 0..img.height() {
            for x in 0..img.width() {
                let win = window_at(&padded, x + 1, y + 1, 3).unwrap();
                centers.push(win.center());
            }
        }
        prop_assert_eq!(centers.as_slice(), img.pixels());
    }

    #[test]
    fn network_sorts_exactly_like_the_reference(values in arb_window_values()) {
        let w = utmed::Window::new(3, values.to_vec()).unwrap();
        let net = snake_sort_network(&w);
        prop_assert_eq!(net, reference_sort(&w));
        // and the output is a permutation of the input
        let mut input = values;
        input.sort_unstable();
        prop_assert_eq!(net.values(), &input);
    }

    #[test]
    fn utmed_matches_the_brute_force_oracle(values in arb_window_values()) {
        let w = utmed::Window::new(3, values.to_vec()).unwrap();
        let s = snake_sort_network(&w);
        let tb = trim_bounds(&s);
        prop_assert_eq!(utmed(&s, &tb), oracle_utmed(values));
    }

    #[test]
    fn utmed_stays_between_the_surviving_values(values in arb_window_values()) {
        let w = utmed::Window::new(3, values.to_vec()).unwrap();
        let s = snake_sort_network(&w);
        let tb = trim_bounds(&s);
        if tb.trimmed_len() > 0 {
            let ut = utmed(&s, &tb);
            let lo = s.rank(tb.f as usize);
            let hi = s.rank(tb.l as usize);
            prop_assert!(lo <= ut && ut <= hi);
        }
    }

    #[test]
    fn restored_pixels_come_from_the_window_statistics(img in arb_image(10)) {
        let params = FilterParams::default();
        let out = denoise_pa(&img, &params);
        let padded = pad_replicate(&img, 1);
        for y in 0..img.height() {
            for x in 0..img.width() {
                let win = window_at(&padded, x + 1, y + 1, 3).unwrap();
                let s = snake_sort_network(&win);
                let tb = trim_bounds(&s);
                let ut = utmed(&s, &tb);
                let v = out.get(x, y);
                prop_assert!(
                    v == win.center() || v == s.median() || v == ut,
                    "pixel ({}, {}) = {} not among center {}, median {}, trimmed {}",
                    x, y, v, win.center(), s.median(), ut
                );
                // an unaltered classification means a bit-identical pixel
                if win.center().abs_diff(ut) <= params.t {
                    prop_assert_eq!(v, win.center());
                }
            }
        }
    }

    #[test]
    fn median_filter_commutes_with_inversion(img in arb_image(12)) {
        let direct = invert(&smf(&img, 3).unwrap());
        let flipped = smf(&invert(&img), 3).unwrap();
        prop_assert_eq!(direct, flipped);
    }

    #[test]
    fn mean_filter_respects_the_input_range(img in arb_image(12)) {
        let out = mean_filter(&img, 3).unwrap();
        let lo = *img.pixels().iter().min().unwrap();
        let hi = *img.pixels().iter().max().unwrap();
        prop_assert!(out.pixels().iter().all(|&v| (lo..=hi).contains(&v)));
    }

    #[test]
    fn metrics_ignore_pixel_placement(
        img in arb_image(8),
        seed in any::<u64>(),
    ) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;

        let noisy = add_salt_pepper(&img, 0.2, 0.2, seed).unwrap();
        let restored = smf(&noisy, 3).unwrap();

        let mut order: Vec<usize> = (0..img.len()).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        order.shuffle(&mut rng);
        let permute = |src: &Image| {
            Image::new(
                img.len() as u32,
                1,
                order.iter().map(|&i| src.pixels()[i]).collect(),
            )
            .unwrap()
        };

        let (pc, pn, pr) = (permute(&img), permute(&noisy), permute(&restored));
        prop_assert_eq!(mse(&img, &restored).unwrap(), mse(&pc, &pr).unwrap());
        prop_assert_eq!(psnr(&img, &restored).unwrap(), psnr(&pc, &pr).unwrap());
        let a = ief(&img, &noisy, &restored).unwrap();
        let b = ief(&pc, &pn, &pr).unwrap();
        prop_assert!(a == b || (a.is_nan() && b.is_nan()));
    }

    #[test]
    fn salt_pepper_only_writes_extremes(
        img in arb_image(16),
        seed in any::<u64>(),
    ) {
        let noisy = add_salt_pepper(&img, 0.3, 0.3, seed).unwrap();
        for (&clean, &dirty) in img.pixels().iter().zip(noisy.pixels()) {
            prop_assert!(dirty == clean || dirty == 0 || dirty == 255);
        }
    }
}
