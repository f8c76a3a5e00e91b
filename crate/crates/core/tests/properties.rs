use proptest::prelude::*;

use aperiodic_core::generator::{cell_at, generate_window};
use aperiodic_core::io::{window_from_json, window_to_json};
use aperiodic_core::periodicity::derive_axis_periods;
use aperiodic_core::verifier::verify_around;
use aperiodic_core::{compile_tileset, verify, verify_with, Coord2, Exec, SymbolId, TileSet, Wrap};

use std::sync::OnceLock;

fn ts() -> &'static TileSet {
    static TS: OnceLock<TileSet> = OnceLock::new();
    TS.get_or_init(compile_tileset)
}

fn origin() -> impl Strategy<Value = Coord2> {
    (-100_000i64..100_000, -100_000i64..100_000).prop_map(|(x, y)| Coord2::new(x, y))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn canonical_windows_are_clean(o in origin(), w in 1usize..40, h in 1usize..40) {
        prop_assert!(verify(&generate_window(o, w, h), ts(), Wrap::Open).is_empty());
    }

    #[test]
    fn overlapping_windows_agree(o in origin(), dx in 0i64..20, dy in 0i64..20) {
        let a = generate_window(o, 30, 30);
        let b = generate_window(o.offset(dx, dy), 30, 30);
        for (c, s) in b.iter() {
            if let Some(t) = a.get(c) {
                prop_assert_eq!(s, t);
            }
            prop_assert_eq!(*s, cell_at(c));
        }
    }

    #[test]
    fn sub_windows_of_clean_windows_are_clean(o in origin(), x in 0i64..20, y in 0i64..20, w in 1usize..20, h in 1usize..20) {
        let big = generate_window(o, 40, 40);
        let sub = big.sub_window(o.offset(x, y), w, h).unwrap();
        prop_assert!(verify(&sub, ts(), Wrap::Open).is_empty());
    }

    #[test]
    fn json_round_trip(o in origin(), w in 1usize..25, h in 1usize..25, noise in proptest::collection::vec((0usize..625, 0u32..3719), 0..10)) {
        let mut win = generate_window(o, w, h);
        for (i, s) in noise {
            let i = i % (w * h);
            *win.at_local_mut(i % w, i / w) = *ts().state(SymbolId(s));
        }
        let back = window_from_json(&window_to_json(&win), ts()).unwrap();
        prop_assert_eq!(back, win);
    }

    #[test]
    fn local_check_matches_full_pass(o in origin(), x in 0usize..12, y in 0usize..12, s in 0u32..3719, torus in any::<bool>()) {
        let mut win = generate_window(o, 12, 12);
        *win.at_local_mut(x, y) = *ts().state(SymbolId(s));
        let wrap = if torus { Wrap::Torus } else { Wrap::Open };
        let c = win.absolute(x, y);
        let local = verify_around(&win, ts(), wrap, c);
        let full = verify(&win, ts(), wrap);
        for v in &local {
            prop_assert!(full.contains(v));
        }
        // everything the local pass skipped is also present before the change
        let before = verify(&generate_window(o, 12, 12), ts(), wrap);
        for v in full.iter().filter(|v| !local.contains(v)) {
            prop_assert!(before.contains(v), "{:?} missed by the local pass", v);
        }
    }

    #[test]
    fn transposition_preserves_violation_count(o in origin(), noise in proptest::collection::vec((0usize..100, 0u32..3719), 0..6)) {
        let mut win = generate_window(o, 10, 10);
        for (i, s) in noise {
            *win.at_local_mut(i % 10, i / 10) = *ts().state(SymbolId(s));
        }
        let t = win.transposed(|c| c.transposed());
        prop_assert_eq!(verify(&win, ts(), Wrap::Open).len(), verify(&t, ts(), Wrap::Open).len());
    }

    #[test]
    fn parallel_verify_matches_sequential(o in origin(), noise in proptest::collection::vec((0usize..900, 0u32..3719), 0..30)) {
        let mut win = generate_window(o, 30, 30);
        for (i, s) in noise {
            *win.at_local_mut(i % 30, i / 30) = *ts().state(SymbolId(s));
        }
        prop_assert_eq!(
            verify_with(&win, ts(), Wrap::Open, &Exec::sequential()),
            verify_with(&win, ts(), Wrap::Open, &Exec::with_threads(3))
        );
    }

    #[test]
    fn axis_periods_are_lattice_vectors(a in -1000i64..1000, b in -1000i64..1000, c in -1000i64..1000, d in -1000i64..1000) {
        let det = a * d - b * c;
        match derive_axis_periods((a, b), (c, d)) {
            Ok(p) => {
                prop_assert_eq!(p.horizontal, (det.abs(), 0));
                prop_assert_eq!(p.vertical, (0, det.abs()));
                // (p, 0) = m (a, b) + n (c, d) with integer m, n
                let (m, n) = (d * p.horizontal.0 / det, -b * p.horizontal.0 / det);
                prop_assert_eq!((m * a + n * c, m * b + n * d), p.horizontal);
                prop_assert_eq!(derive_axis_periods((c, d), (a, b)).unwrap(), p);
            }
            Err(_) => prop_assert_eq!(det, 0),
        }
    }
}
