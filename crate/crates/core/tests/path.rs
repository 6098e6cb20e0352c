use levy_strong::levy::{Atom, JumpRegion, LevyModel};
use levy_strong::path::{build_path, dw_dz_from_normals, simulate_events, DrivingPath};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn reference() -> LevyModel {
    LevyModel::finite(
        vec![Atom { x: 0.5, mass: 0.6 }, Atom { x: -0.25, mass: 0.4 }],
        vec![Atom { x: 1.5, mass: 0.3 }, Atom { x: -1.2, mass: 0.2 }],
    )
    .unwrap()
}

fn dense() -> LevyModel {
    LevyModel::finite(vec![Atom { x: 0.3, mass: 20.0 }], vec![Atom { x: -2.0, mass: 10.0 }]).unwrap()
}

/// Merges two adjacent fine slices into the coarse one.
fn check_two_level(path: &DrivingPath, level: u32) {
    let coarse = path.slice_level(level).unwrap();
    let fine = path.slice_level(level + 1).unwrap();
    for (i, c) in coarse.iter().enumerate() {
        let (f1, f2) = (&fine[2 * i], &fine[2 * i + 1]);
        assert_eq!(c.delta_w, f1.delta_w + f2.delta_w, "ΔW telescoping");
        let dz = f1.delta_z + f2.delta_z + f1.delta_w * f2.delta;
        assert!((c.delta_z - dz).abs() < 1e-12, "ΔZ identity: {} vs {dz}", c.delta_z);
        let merged: Vec<_> = f1.jumps.iter().chain(&f2.jumps).map(|j| (j.time, j.mark, j.w)).collect();
        let direct: Vec<_> = c.jumps.iter().map(|j| (j.time, j.mark, j.w)).collect();
        assert_eq!(merged, direct);
    }
}

#[test]
fn aggregation_identities_hold_on_random_paths() {
    for seed in 0..100 {
        let path = build_path(1.0, 8, &dense(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        for level in 0..8 {
            check_two_level(&path, level);
        }
    }
}

#[test]
fn jump_counts_are_poisson() {
    let m = reference();
    let n = 20_000;
    let mut counts = [0usize; 2];
    let mut total = Vec::with_capacity(n);
    for seed in 0..n as u64 {
        let ev = simulate_events(2.0, &m, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        assert!(ev.windows(2).all(|w| w[0].time < w[1].time));
        for e in &ev {
            counts[(e.region == JumpRegion::Tail) as usize] += 1;
        }
        total.push(ev.len() as f64);
    }
    let mean = total.iter().sum::<f64>() / n as f64;
    // λT = 1.5 · 2, Var = λT
    assert!((mean - 3.0).abs() < 3.0 * (3.0 / n as f64).sqrt(), "mean count {mean}");
    let tail_share = counts[1] as f64 / (counts[0] + counts[1]) as f64;
    assert!((tail_share - 1.0 / 3.0).abs() < 0.01);
}

#[test]
fn coarse_grid_sees_same_noise_as_fine_grid() {
    let path = build_path(1.0, 10, &reference(), &mut ChaCha8Rng::seed_from_u64(1)).unwrap();
    for level in [3, 6, 10] {
        let slices = path.slice_level(level).unwrap();
        let w_end: f64 = slices.iter().map(|s| s.delta_w).sum();
        assert_eq!(w_end, *path.w_values().last().unwrap());
        let n_jumps: usize = slices.iter().map(|s| s.count()).sum();
        assert_eq!(n_jumps, path.jumps().len());
    }
}

proptest! {
    #[test]
    fn dw_dz_is_linear_in_normals(delta in 1e-6f64..4.0, u1 in -5f64..5.0, u2 in -5f64..5.0) {
        let (dw, dz) = dw_dz_from_normals(delta, u1, u2);
        let (dw2, dz2) = dw_dz_from_normals(delta, 2.0 * u1, 2.0 * u2);
        prop_assert!((dw2 - 2.0 * dw).abs() <= 1e-14 * dw.abs().max(1.0));
        prop_assert!((dz2 - 2.0 * dz).abs() <= 1e-14 * dz.abs().max(1.0));
    }

    #[test]
    fn thinning_is_nested(seed in any::<u64>(), e1 in 0.01f64..0.5, f in 1.0f64..1.9) {
        let m = LevyModel::power_law(1.0, 0.8, vec![Atom { x: 1.5, mass: 0.5 }]).unwrap();
        let t = m.truncate(0.005).unwrap();
        let path = build_path(1.0, 4, &t, &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let fine = path.restrict_small(e1);
        let coarse = path.restrict_small(e1 * f);
        let fine_times: Vec<f64> = fine.jump_events().map(|e| e.time).collect();
        prop_assert!(coarse.jump_events().all(|e| fine_times.contains(&e.time)));
        let same = path.restrict_small(0.005);
        prop_assert_eq!(same.jumps(), path.jumps());
    }

    #[test]
    fn paths_are_reproducible_and_dump_round_trips(seed in any::<u64>(), level in 0u32..7) {
        let a = build_path(1.5, level, &reference(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        let b = build_path(1.5, level, &reference(), &mut ChaCha8Rng::seed_from_u64(seed)).unwrap();
        prop_assert_eq!(&a, &b);
        let mut buf = Vec::new();
        a.write_binary(&mut buf).unwrap();
        prop_assert_eq!(DrivingPath::read_binary(&buf[..]).unwrap(), a);
    }
}
