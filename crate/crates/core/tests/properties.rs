use proptest::prelude::*;
use sumset_core::construct::verify_bc;
use sumset_core::density::{prefix_density, window_banach_density};
use sumset_core::io::{format_set, parse_set, ReadOptions, SetFormat};
use sumset_core::mixing::{autocorrelation, Mode};
use sumset_core::oracle;
use sumset_core::ramsey::{mono_subset, DenseColoring};
use sumset_core::transform::block_transform;
use sumset_core::WindowSet;

fn arb_set(max_len: usize) -> impl Strategy<Value = WindowSet> {
    (8..=max_len).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), n)
            .prop_map(move |bits| WindowSet::from_fn(n, |x| bits[x - 1]).unwrap())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn members_round_trip(a in arb_set(300)) {
        let m = oracle::membership(&a);
        prop_assert_eq!(a.len(), m.iter().filter(|&&b| b).count());
        prop_assert_eq!(WindowSet::from_members(a.window_len(), a.to_vec()).unwrap(), a);
    }

    #[test]
    fn file_formats_round_trip(a in arb_set(300), rle in any::<bool>()) {
        let format = if rle { SetFormat::Rle } else { SetFormat::List };
        let text = format_set(&a, format);
        prop_assert!(text.lines().skip(1).all(|l| l.split_whitespace().filter(|t| *t != "RLE:").count() <= 16));
        prop_assert_eq!(parse_set(&text, ReadOptions::default()).unwrap(), a);
    }

    #[test]
    fn shift_matches_naive(a in arb_set(200), k in -150i64..150) {
        prop_assume!(k.unsigned_abs() < a.window_len() as u64);
        let s = a.shift(k).unwrap();
        let n = a.window_len() as i64;
        let expect: Vec<usize> = a.iter().map(|x| x as i64 + k).filter(|y| (1..=n).contains(y)).map(|y| y as usize).collect();
        prop_assert_eq!(s.set.to_vec(), expect.clone());
        prop_assert_eq!(s.dropped, a.len() - expect.len());
    }

    #[test]
    fn intersect_translate_matches_naive(a in arb_set(200), shifts in proptest::collection::vec(0usize..60, 1..4)) {
        prop_assume!(shifts.iter().all(|&s| s < a.window_len()));
        let got = a.intersect_translate(&shifts).unwrap();
        let m = oracle::membership(&a);
        let n = a.window_len();
        for x in 1..=n {
            let expect = m[x] && shifts.iter().all(|&s| x + s <= n && m[x + s]);
            prop_assert_eq!(got.window_len() >= x && got.contains(x), expect, "x = {}", x);
        }
    }

    #[test]
    fn densities_match_naive(a in arb_set(256), frac in 0.05f64..1.0) {
        let m = oracle::membership(&a);
        let len = ((a.window_len() as f64 * frac) as usize).max(1);
        prop_assert_eq!(prefix_density(&a, len).unwrap(), oracle::prefix_density(&m, len));
        let w = window_banach_density(&a, len).unwrap();
        prop_assert_eq!((w.start, w.count), oracle::window_max(&m, len));
    }

    #[test]
    fn block_transform_matches_naive(a in arb_set(400), n in 1usize..=8) {
        prop_assume!(n <= a.window_len() / 4);
        let r = block_transform(&a, n).unwrap();
        prop_assert_eq!(r.blocks.to_vec(), oracle::block_transform(&oracle::membership(&a), n));
    }

    #[test]
    fn autocorrelation_matches_naive(a in arb_set(200), i in 0usize..100) {
        prop_assume!(i < a.window_len());
        let m = oracle::membership(&a);
        prop_assert_eq!(autocorrelation(&a, i, Mode::Truncated).unwrap(), oracle::autocorrelation_truncated(&m, i));
        prop_assert_eq!(autocorrelation(&a, i, Mode::Cyclic).unwrap(), oracle::autocorrelation_cyclic(&m, i));
    }

    #[test]
    fn verify_matches_naive(
        a in arb_set(120),
        b in proptest::collection::vec(1usize..70, 0..6),
        c in proptest::collection::vec(1usize..70, 0..6),
        k in -5i64..5,
    ) {
        let cert = verify_bc(&a, &b, &c, k);
        let naive = oracle::bc_violations(&oracle::membership(&a), &b, &c, k);
        prop_assert_eq!(cert.verified, naive.is_empty());
        let got: Vec<_> = cert.violations.iter().map(|v| (v.b, v.c, v.sum)).collect();
        prop_assert_eq!(got, naive);
    }

    #[test]
    fn mono_subset_is_sound(v in 2usize..40, colors in 1u8..6, seed in any::<u64>(), target in 2usize..6) {
        let table = oracle::random_coloring(seed, v, colors);
        let col = DenseColoring::from_fn(v, |i, j| table.get(&(i, j)).copied());
        let mono = mono_subset(&col, target).unwrap();
        prop_assert!(oracle::is_mono(&mono.indices, |i, j| table.get(&(i, j)).copied()));
        prop_assert_eq!(mono.complete, mono.indices.len() >= target);
    }
}
