use sumset_core::construct::*;
use sumset_core::density::default_banach_estimate;
use sumset_core::exact;
use sumset_core::oracle;
use sumset_core::ramsey::{color_pairs, mono_subset, one_shift, DenseColoring, OneShiftParams, PairColoring};
use sumset_core::{generate, GeneratorSpec, WindowSet};

#[test]
fn extract_l_dense_random_set() {
    let a = generate(&GeneratorSpec::bernoulli(0.75, 1, 1_000_000)).unwrap();
    let l = extract_l(&a, ExtractParams::default()).unwrap();
    assert!(exact::ge_f64(&l.density_score, 0.70), "{}", exact::density_f64(&l.density_score));
    let m = oracle::membership(&a);
    assert!(l.set.iter().all(|x| m[l.base_point + x]));
    assert_eq!(l.cardinality, (1..=l.window_len).filter(|&x| m[l.base_point + x]).count());
}

#[test]
fn build_d_condition_by_recount() {
    let a = generate(&GeneratorSpec::bernoulli(0.8, 4, 200_000)).unwrap();
    let m = oracle::membership(&a);
    let l = extract_l(&a, ExtractParams::default()).unwrap();
    let l_enum: Vec<usize> = l.set.iter().take(10).collect();
    let d = build_d(&a, &l_enum, 10).unwrap();
    assert!(d.complete);
    for (j, t) in d.terms.iter().enumerate() {
        assert!(m[t.value]);
        assert!(t.covered >= (j + 1).saturating_sub(d.drops).max(1));
        for &li in &l_enum[..t.covered] {
            assert!(li + t.value < m.len() && m[li + t.value]);
        }
    }
}

#[test]
fn thinning_floors_by_recount() {
    let a = generate(&GeneratorSpec::bernoulli(0.75, 6, 200_000)).unwrap();
    let m = oracle::membership(&a);
    let l = extract_l(&a, ExtractParams::default()).unwrap();
    let l_enum: Vec<usize> = l.set.iter().take(40).collect();
    let d = build_d(&a, &l_enum, 40).unwrap();
    let t = bergelson_thin(&a, &l.set, &d.values(), ThinParams::new(0.05)).unwrap();
    let w = l.window_len;
    let mut chosen = Vec::new();
    for (n, step) in t.survivors.iter().enumerate() {
        chosen.push(step.value);
        let count = (1..=w)
            .filter(|&x| l.set.contains(x) && chosen.iter().all(|&e| x + e < m.len() && m[x + e]))
            .count();
        assert_eq!(count, step.intersection);
        let floor = 0.05 * 0.9f64.powi(n as i32 + 1) * w as f64;
        assert!(count as f64 >= floor * (1.0 - 1e-12));
    }
}

#[test]
fn small_window_certificates_agree_with_oracle() {
    let mut emitted = 0;
    for seed in 0..400 {
        let a = generate(&GeneratorSpec::bernoulli(0.7, seed, 64)).unwrap();
        let m = oracle::membership(&a);
        let Ok(l) = extract_l(&a, ExtractParams { candidates: 4, prefer_robust: false }) else { continue };
        let e: Vec<usize> = a.iter().collect();
        let cert = interleave_bc(&a, &l.set, &e, 3).unwrap();
        if cert.is_verified_at_size() {
            emitted += 1;
            assert!(oracle::bc_violations(&m, &cert.b, &cert.c, 0).is_empty());
        }
    }
    assert!(emitted > 0);
}

#[test]
fn high_density_certificates_recheck() {
    for seed in 0..5 {
        let a = generate(&GeneratorSpec::bernoulli(0.8, seed, 200_000)).unwrap();
        let cert = find_bc_high_density(&a, HighDensityParams::new(10)).unwrap();
        assert!(cert.is_verified_at_size());
        let m = oracle::membership(&a);
        assert!(oracle::bc_violations(&m, &cert.b, &cert.c, 0).is_empty());
        assert!(cert.c.iter().all(|&c| m[c]));
    }
}

#[test]
fn coloring_entries_by_block_scan() {
    let a = generate(&GeneratorSpec::bernoulli(0.3, 2, 100_000)).unwrap();
    let m = oracle::membership(&a);
    let n = 4;
    let blocks = sumset_core::transform::block_transform(&a, n).unwrap().blocks;
    assert!(default_banach_estimate(&blocks).count > 0);
    let cert = find_bc_high_density(&blocks, HighDensityParams::new(6)).unwrap();
    let count = cert.b.len().min(cert.c.len());
    let table = color_pairs(&a, n, &cert.b[..count], &cert.c[..count]).unwrap();
    for i in 0..count {
        for j in i + 1..count {
            let expect = oracle::first_offset(&m, n, cert.b[i] + cert.c[j])
                .zip(oracle::first_offset(&m, n, cert.c[i] + cert.b[j]));
            assert_eq!(table.color(i, j), expect);
        }
    }
}

#[test]
fn matching_coloring_has_no_triangle() {
    // Round-robin schedule on 6 vertices: 5 perfect matchings.
    let v = 6;
    let round = |i: usize, j: usize| -> u8 {
        if j == v - 1 {
            (2 * i % (v - 1)) as u8
        } else {
            ((i + j) % (v - 1)) as u8
        }
    };
    let col = DenseColoring::from_fn(v, |i, j| Some(round(i, j)));
    assert_eq!(oracle::max_mono_size(v, |i, j| col.color(i, j)), 2);
    let mono = mono_subset(&col, 3).unwrap();
    assert!(!mono.complete);
}

#[test]
fn one_shift_residue_classes() {
    let a = WindowSet::from_fn(300_000, |x| x % 3 == 1).unwrap();
    let cert = one_shift(&a, OneShiftParams::new(3, 0.1)).unwrap();
    let m = oracle::membership(&a);
    let c = &cert.certificate;
    assert!(c.is_verified_at_size());
    assert!(oracle::bc_violations(&m, &c.b, &c.c, c.k).is_empty());
}
