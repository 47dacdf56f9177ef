//! Cross-validation of the pipeline against independent oracles.

mod common;

use common::{brute_classify, kuhn_complex, BruteKind};
use persifold::baseline::exact_sweep_diagram;
use persifold::critical::{classify, extract_critical_points, CriticalKind};
use persifold::field::FieldState;
use persifold::grid::{build_hierarchy, GridDims, GridHierarchy, VertexId};
use persifold::metrics::{bottleneck, diagram_points};
use persifold::pairing::{compute_diagram, PairSelector, PersistenceDiagram};
use persifold::scalar::Scalar;
use persifold::synth;
use persifold::traversal::{sweep, FoldingPolicy, PolarityState};
use proptest::prelude::Strategy;

fn run_pipeline<S: Scalar>(
    axes: &[usize],
    values: Vec<S>,
    epsilon_percent: f64,
) -> (
    GridHierarchy,
    FieldState<S>,
    PolarityState,
    PersistenceDiagram,
) {
    let dims = GridDims::new(axes).unwrap();
    let hier = build_hierarchy(dims, 32);
    let mut field = FieldState::new(values).unwrap();
    let policy = FoldingPolicy::from_percent(epsilon_percent, field.range()).unwrap();
    let state = sweep(&hier, &mut field, &policy).unwrap();
    let crits = extract_critical_points(&hier, &field, &state);
    let diagram = compute_diagram(
        &hier,
        &field,
        &crits,
        policy.epsilon_abs(),
        PairSelector::Both,
    );
    (hier, field, state, diagram)
}

fn pair_keys(d: &PersistenceDiagram) -> Vec<(u8, usize, usize, u64, u64)> {
    let mut keys: Vec<_> = d
        .pairs
        .iter()
        .map(|p| {
            let t = match p.pair_type {
                persifold::PairType::MinSaddle => 0u8,
                persifold::PairType::SaddleMax => 1,
                persifold::PairType::Global => 2,
            };
            (
                t,
                p.birth_vertex.0,
                p.death_vertex.0,
                p.birth.to_bits(),
                p.death.to_bits(),
            )
        })
        .collect();
    keys.sort_unstable();
    keys
}

#[test]
fn classification_matches_the_explicit_link_oracle() {
    for axes in [vec![7usize, 6], vec![9, 9], vec![5, 5, 5]] {
        let dims = GridDims::new(&axes).unwrap();
        for epsilon in [0.0, 5.0, 100.0] {
            for seed in 0..3 {
                let (hier, field, _, _) =
                    run_pipeline(&axes, synth::uniform_noise(dims, seed), epsilon);
                let explicit = kuhn_complex(dims);
                let less =
                    |a: usize, b: usize| field.compare(VertexId(a), VertexId(b)).unwrap().is_lt();
                for v in hier.vertices(hier.depth()) {
                    let got = classify(&hier, &field, v);
                    let (kind, lower, upper) = brute_classify(&explicit, v.0, &less);
                    assert_eq!(got.lower_components as usize, lower, "{v:?} {axes:?}");
                    assert_eq!(got.upper_components as usize, upper, "{v:?} {axes:?}");
                    let kind_matches = match kind {
                        BruteKind::Minimum => got.kind == CriticalKind::Minimum,
                        BruteKind::Maximum => got.kind == CriticalKind::Maximum,
                        BruteKind::Regular => got.kind == CriticalKind::Regular,
                        BruteKind::Saddle => matches!(
                            got.kind,
                            CriticalKind::Saddle1
                                | CriticalKind::Saddle2
                                | CriticalKind::Degenerate
                        ),
                    };
                    assert!(kind_matches, "{v:?}: {:?} vs {kind:?}", got.kind);
                }
            }
        }
    }
}

#[test]
fn certified_regular_vertices_really_are_regular() {
    for axes in [vec![9usize, 9], vec![5, 5, 5]] {
        let dims = GridDims::new(&axes).unwrap();
        for epsilon in [0.0, 5.0, 100.0] {
            let (hier, field, state, _) =
                run_pipeline(&axes, synth::uniform_noise(dims, 42), epsilon);
            for v in hier.vertices(hier.depth()) {
                if !state.needs_criticality(v) {
                    assert_eq!(
                        classify(&hier, &field, v).kind,
                        CriticalKind::Regular,
                        "wrongly certified {v:?} at eps {epsilon}"
                    );
                }
            }
        }
    }
}

#[test]
fn exact_pipeline_equals_the_sublevel_sweep_oracle() {
    for axes in [vec![9usize, 9], vec![17, 17], vec![9, 9, 9]] {
        let dims = GridDims::new(&axes).unwrap();
        for seed in 0..8 {
            let values = synth::uniform_noise(dims, seed);
            let (hier, _, _, diagram) = run_pipeline(&axes, values.clone(), 0.0);
            let oracle = exact_sweep_diagram(&values, &hier).unwrap();
            assert_eq!(
                pair_keys(&diagram),
                pair_keys(&oracle),
                "diagram mismatch on {axes:?} seed {seed}"
            );
        }
    }
}

#[test]
fn approximation_respects_the_bottleneck_bound() {
    for axes in [vec![17usize, 17], vec![9, 9, 9]] {
        let dims = GridDims::new(&axes).unwrap();
        for seed in 0..4 {
            let values = synth::bump_noise(dims, seed, 0.25);
            let hier = build_hierarchy(dims, 32);
            let exact = exact_sweep_diagram(&values, &hier).unwrap();
            for epsilon in [1.0, 5.0, 10.0] {
                let (_, field, state, diagram) = run_pipeline(&axes, values.clone(), epsilon);
                let eps_abs = diagram.epsilon_abs;
                // field bound, exact: the max folding error is the deviation
                let deviation = field.max_fold_deviation();
                assert!(deviation <= eps_abs);
                assert_eq!(deviation, state.max_folding_error());
                let dist = bottleneck(&diagram_points(&diagram), &diagram_points(&exact));
                assert!(
                    dist <= eps_abs + 1e-9,
                    "bottleneck {dist} above eps {eps_abs} on {axes:?} seed {seed}"
                );
            }
        }
    }
}

#[test]
fn folded_vertices_sit_strictly_between_their_parents() {
    // engineered integer plateaus: values in a tiny range fold massively
    for axes in [vec![17usize, 17], vec![9, 9, 9]] {
        let dims = GridDims::new(&axes).unwrap();
        let noise = synth::uniform_noise(dims, 3);
        let values: Vec<i32> = noise.iter().map(|v| (v * 4.0) as i32).collect();
        let (hier, field, _, _) = run_pipeline(&axes, values, 60.0);
        assert!(field.folded_count() > 0, "fixture should fold");
        for level in 1..=hier.depth() {
            for n in hier.new_vertices(level) {
                if !field.is_folded(n) {
                    continue;
                }
                let (o0, o1) = hier.edge_parents(level, n).unwrap();
                let (lo, hi) = if field.compare(o0, o1).unwrap().is_lt() {
                    (o0, o1)
                } else {
                    (o1, o0)
                };
                assert!(field.compare(lo, n).unwrap().is_lt(), "{n:?} below {lo:?}");
                assert!(field.compare(n, hi).unwrap().is_lt(), "{n:?} above {hi:?}");
            }
        }
    }
}

#[test]
fn unsigned_plateau_fields_keep_monotony_too() {
    let dims = GridDims::new(&[33, 33]).unwrap();
    let noise = synth::uniform_noise(dims, 11);
    let values: Vec<u8> = noise.iter().map(|v| (v * 3.0) as u8).collect();
    let (hier, field, _, _) = run_pipeline(&[33, 33], values, 80.0);
    assert!(field.folded_count() > 0);
    for level in 1..=hier.depth() {
        for n in hier.new_vertices(level) {
            if field.is_folded(n) {
                let (o0, o1) = hier.edge_parents(level, n).unwrap();
                let (lo, hi) = if field.compare(o0, o1).unwrap().is_lt() {
                    (o0, o1)
                } else {
                    (o1, o0)
                };
                assert!(field.compare(lo, n).unwrap().is_lt());
                assert!(field.compare(n, hi).unwrap().is_lt());
            }
        }
    }
}

proptest::proptest! {
    // folding keeps every folded vertex strictly inside its parent edge,
    // whatever the value distribution, dimensions or tolerance
    #[test]
    fn folds_stay_between_parents_on_random_integer_fields(
        axes in proptest::collection::vec(3usize..=9, 2..=3)
            .prop_filter("at least one axis must be refinable", |a| {
                a.iter().any(|&n| n % 2 == 1 && n > 2)
            }),
        levels in proptest::collection::vec(0i16..6, 27..=729),
        percent in 10.0f64..100.0,
    ) {
        let dims = GridDims::new(&axes).unwrap();
        let n = dims.vertex_count();
        let values: Vec<i16> = (0..n).map(|i| levels[i % levels.len()]).collect();
        let (hier, field, _, _) = run_pipeline(&axes, values, percent);
        for level in 1..=hier.depth() {
            for v in hier.new_vertices(level) {
                if !field.is_folded(v) {
                    continue;
                }
                let (o0, o1) = hier.edge_parents(level, v).unwrap();
                let (lo, hi) = if field.compare(o0, o1).unwrap().is_lt() {
                    (o0, o1)
                } else {
                    (o1, o0)
                };
                proptest::prop_assert!(field.compare(lo, v).unwrap().is_lt());
                proptest::prop_assert!(field.compare(v, hi).unwrap().is_lt());
            }
        }
    }
}

/// Lower-star Euler characteristic: summing `1 - chi(lower link)` over all
/// vertices gives the Euler characteristic of the complex (1 for a grid
/// rectangle). On interior vertices this is the familiar
/// `#min - #saddle(multiplicity) + #max` count; boundary extrema contribute
/// through their clipped links.
#[test]
fn lower_star_euler_characteristic_is_one_2d() {
    for seed in 0..10 {
        let dims = GridDims::new(&[9, 9]).unwrap();
        let values = synth::uniform_noise(dims, seed);
        let field = FieldState::new(values).unwrap();
        let explicit = kuhn_complex(dims);
        let less = |a: usize, b: usize| field.compare(VertexId(a), VertexId(b)).unwrap().is_lt();
        let mut chi = 0i64;
        for v in 0..dims.vertex_count() {
            let (_, _, lower_vertices, lower_edges) = explicit.link_split(v, &less);
            chi += 1 - (lower_vertices as i64 - lower_edges as i64);
        }
        assert_eq!(chi, 1, "seed {seed}");
    }
}

/// With all critical points interior (three bumps on a decaying base, so
/// only boundary minima and interior maxima/saddles), the literal count
/// form holds: minima - saddles (with multiplicity) + maxima = 1.
#[test]
fn critical_point_counts_satisfy_euler_on_the_bump_fixture() {
    let dims = GridDims::new(&[33, 33]).unwrap();
    let (hier, field, state, _) = run_pipeline(&[33, 33], synth::multi_bump(dims), 0.0);
    let crits = extract_critical_points(&hier, &field, &state);
    let mut total = 0i64;
    for (_, c) in &crits {
        match c.kind {
            CriticalKind::Minimum | CriticalKind::Maximum => total += 1,
            CriticalKind::Saddle1 => total -= c.lower_components as i64 - 1,
            _ => {}
        }
    }
    assert_eq!(total, 1);
}

#[test]
fn stability_under_small_perturbations() {
    let dims = GridDims::new(&[17, 17]).unwrap();
    for seed in 0..10 {
        let f = synth::uniform_noise(dims, seed);
        let perturbation = synth::uniform_noise(dims, seed + 1000);
        let eta = 0.05;
        let g: Vec<f64> = f
            .iter()
            .zip(&perturbation)
            .map(|(v, p)| v + eta * (2.0 * p - 1.0))
            .collect();
        let actual_eta = f
            .iter()
            .zip(&g)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        let (_, _, _, df) = run_pipeline(&[17, 17], f, 0.0);
        let (_, _, _, dg) = run_pipeline(&[17, 17], g, 0.0);
        let dist = bottleneck(&diagram_points(&df), &diagram_points(&dg));
        assert!(
            dist <= actual_eta + 1e-12,
            "stability violated: {dist} > {actual_eta}"
        );
    }
}
