use degperc::graph::{havel_hakimi_degrees, sample_uniform, LabeledGraph};
use degperc::percolation::{components, coupled_l1_sweep, percolate, percolate_coupled, UnionFind};
use degperc::rng::seeded;
use degperc::DegreeSequence;
use proptest::prelude::*;

fn random_graph() -> impl Strategy<Value = LabeledGraph> {
    (2usize..60).prop_flat_map(|n| {
        proptest::collection::vec((0..n as u32, 0..n as u32), 0..4 * n).prop_map(move |pairs| {
            let mut g = LabeledGraph::empty(n);
            for (a, b) in pairs {
                if a != b && !g.has_edge(a, b) {
                    g.add_edge(a, b).unwrap();
                }
            }
            g
        })
    })
}

fn sorted_grid() -> impl Strategy<Value = Vec<f64>> {
    proptest::collection::vec(0.0f64..=1.0, 1..8).prop_map(|mut v| {
        v.sort_by(f64::total_cmp);
        v.dedup();
        v
    })
}

proptest! {
    #[test]
    fn survivors_are_nested(g in random_graph(), grid in sorted_grid(), seed in any::<u64>()) {
        let samples = percolate_coupled(&g, &grid, &mut seeded(seed)).unwrap();
        for w in samples.windows(2) {
            for (lo, hi) in w[0].survived.iter().zip(&w[1].survived) {
                prop_assert!(!lo || *hi);
            }
            prop_assert!(w[0].partition.refines(&w[1].partition));
            prop_assert!(w[0].l1 <= w[1].l1);
        }
    }

    #[test]
    fn sweep_matches_coupled_samples(g in random_graph(), grid in sorted_grid(), seed in any::<u64>()) {
        let samples = percolate_coupled(&g, &grid, &mut seeded(seed)).unwrap();
        let sweep = coupled_l1_sweep(&g, &grid, &mut seeded(seed)).unwrap();
        let l1: Vec<u32> = samples.iter().map(|s| s.l1).collect();
        prop_assert_eq!(l1, sweep);
    }

    #[test]
    fn component_sizes_account_for_every_vertex(g in random_graph(), p in 0.0f64..=1.0, seed in any::<u64>()) {
        let s = percolate(&g, p, &mut seeded(seed)).unwrap();
        let total: u64 = s.partition.sizes().iter().map(|&x| u64::from(x)).sum();
        prop_assert_eq!(total, g.n() as u64);
        let hist_total: u64 = s.size_histogram.iter().map(|(&k, &c)| u64::from(k) * u64::from(c)).sum();
        prop_assert_eq!(hist_total, g.n() as u64);
        prop_assert_eq!(s.partition.clone(), components(g.n(), s.surviving_edges(&g)));
        prop_assert!(s.l2 <= s.l1);
    }

    #[test]
    fn extreme_retention(g in random_graph(), seed in any::<u64>()) {
        let all = percolate(&g, 1.0, &mut seeded(seed)).unwrap();
        prop_assert_eq!(all.num_survived(), g.m());
        prop_assert_eq!(all.partition, components(g.n(), g.sorted_edges()));
        let none = percolate(&g, 0.0, &mut seeded(seed)).unwrap();
        prop_assert_eq!(none.num_survived(), 0);
        prop_assert_eq!(none.l1, u32::from(g.n() > 0));
        prop_assert_eq!(none.partition.num_parts(), g.n());
    }

    #[test]
    fn union_find_tracks_largest(n in 1usize..50, pairs in proptest::collection::vec((0u32..50, 0u32..50), 0..100)) {
        let mut uf = UnionFind::new(n);
        let edges: Vec<(u32, u32)> =
            pairs.into_iter().filter(|&(a, b)| (a as usize) < n && (b as usize) < n).collect();
        for &(a, b) in &edges {
            uf.union(a, b);
        }
        let largest = uf.largest();
        let p = uf.into_partition();
        prop_assert_eq!(largest, p.l1());
    }
}

#[test]
fn retention_rate_matches_p() {
    let d = DegreeSequence::regular(2000, 4).unwrap();
    let g = sample_uniform(&d, 20_000, &mut seeded(3)).unwrap();
    let m = g.m() as f64;
    for p in [0.1, 0.5, 0.9] {
        let s = percolate(&g, p, &mut seeded(4)).unwrap();
        let se = (p * (1.0 - p) / m).sqrt();
        let rate = s.num_survived() as f64 / m;
        assert!((rate - p).abs() < 5.0 * se, "p = {p}, rate = {rate}");
    }
}

#[test]
fn same_seed_same_sample() {
    let g = havel_hakimi_degrees(&[3; 40]).unwrap();
    let a = percolate(&g, 0.4, &mut seeded(9)).unwrap();
    let b = percolate(&g, 0.4, &mut seeded(9)).unwrap();
    assert_eq!(a.survived, b.survived);
    assert_eq!(a.partition, b.partition);
}
