use negsssp::hoplimited::bfd;
use negsssp::io::{parse_graph, write_graph, AnyGraph};
use negsssp::solver::{dijkstra, solve_bfd};
use negsssp::testkit::{generate, oracle_hop_dp, oracle_sssp, InstanceSpec, OracleResult, Tag};
use negsssp::{normalize, solve_sssp, Dist, Graph, PriceFunction};
use proptest::prelude::*;

fn small_spec() -> impl Strategy<Value = InstanceSpec> {
    (3usize..25, any::<u64>()).prop_flat_map(|(n, seed)| {
        let max_m = (n * (n - 1)).min(4 * n);
        (n - 1..=max_m).prop_flat_map(move |m| {
            (0..=n.min(m / 2)).prop_map(move |k| InstanceSpec::uniform(n, m, k, seed))
        })
    })
}

fn instance(spec: &InstanceSpec) -> Graph<i64> {
    generate(spec).expect("feasible spec")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bfd_matches_hop_dp(spec in small_spec(), src in any::<prop::sample::Index>()) {
        let g = instance(&spec);
        let s = src.index(g.n());
        let h = g.count_negative();
        let table = bfd(&g, &[s], h).unwrap();
        let dp = oracle_hop_dp(&g, &[s], h).unwrap();
        for (j, want) in dp.iter().enumerate() {
            prop_assert_eq!(table.round(j).unwrap(), &want[..], "round {}", j);
        }
    }

    #[test]
    fn rounds_never_increase(spec in small_spec()) {
        let g = instance(&spec);
        let h = g.count_negative() + 1;
        let table = bfd(&g, &[0], h).unwrap();
        for j in 1..=h {
            for (a, b) in table.round(j - 1).unwrap().iter().zip(table.round(j).unwrap()) {
                prop_assert!(b.cmp_total(a).is_le());
            }
        }
    }

    #[test]
    fn distances_satisfy_triangle_inequality(spec in small_spec()) {
        let g = instance(&spec);
        let res = solve_sssp(&g, 0, spec.seed).unwrap();
        let d = res.distances().expect("generator output is cycle-free");
        for e in g.edges() {
            if let Dist::Finite(du) = d[e.src] {
                prop_assert!(d[e.dst].cmp_total(&Dist::Finite(du + e.weight)).is_le());
            }
        }
    }

    #[test]
    fn solver_agrees_with_oracle(spec in small_spec(), seed in any::<u64>()) {
        let g = instance(&spec);
        let want = oracle_sssp(&g, 0).unwrap();
        let got = solve_sssp(&g, 0, seed).unwrap();
        prop_assert_eq!(got.distances(), want.distances());
        prop_assert_eq!(solve_bfd(&g, 0).unwrap(), got);
    }

    #[test]
    fn reweighting_shifts_distances(spec in small_spec(), shift in prop::collection::vec(-50i64..50, 25)) {
        let g = instance(&spec);
        let phi = PriceFunction::from_vec(shift[..g.n()].to_vec());
        let h = g.reweight(&phi).unwrap();
        let OracleResult::Distances(d) = oracle_sssp(&g, 0).unwrap() else { panic!("cycle-free") };
        let OracleResult::Distances(dh) = oracle_sssp(&h, 0).unwrap() else { panic!("cycle-free") };
        for v in 0..g.n() {
            prop_assert_eq!(dh[v], d[v].plus(phi[0] - phi[v]));
        }
    }

    #[test]
    fn normalization_preserves_distances(spec in small_spec()) {
        let g = instance(&spec);
        let (gn, map) = normalize(&g);
        prop_assert!(gn.is_normalized());
        let want = oracle_sssp(&g, 0).unwrap();
        let got = oracle_sssp(&gn, map.to_normalized(0)).unwrap();
        let (want, got) = (want.distances().unwrap(), got.distances().unwrap());
        for v in 0..g.n() {
            prop_assert_eq!(got[map.to_normalized(v)], want[v]);
        }
    }

    #[test]
    fn transpose_is_an_involution(spec in small_spec()) {
        let g = instance(&spec);
        let t = g.transpose();
        for e in t.edges() {
            prop_assert!(g.edges().any(|f| f.src == e.dst && f.dst == e.src && f.weight == e.weight));
        }
        prop_assert_eq!(t.transpose(), g);
    }

    #[test]
    fn generator_is_deterministic(spec in small_spec()) {
        prop_assert_eq!(instance(&spec), instance(&spec));
    }

    #[test]
    fn text_round_trip(spec in small_spec()) {
        let g = instance(&spec);
        let text = write_graph(&g);
        let AnyGraph::Int(back) = parse_graph(&text).unwrap() else { panic!("integer weights") };
        prop_assert_eq!(write_graph(&back), text);
        prop_assert_eq!(back, g);
    }

    #[test]
    fn nonnegative_graphs_reduce_to_dijkstra(spec in small_spec()) {
        let g = instance(&InstanceSpec { k: 0, ..spec });
        let res = solve_sssp(&g, 0, 1).unwrap();
        prop_assert_eq!(res.distances().unwrap(), &dijkstra(&g, 0).unwrap()[..]);
    }
}

#[test]
fn every_tag_generates_and_solves() {
    for tag in Tag::ALL {
        for seed in 0..5 {
            let g = generate(&InstanceSpec::new(tag, 60, 240, 30, seed)).unwrap();
            assert_eq!((g.n(), g.m(), g.count_negative()), (60, 240, 30), "{tag}");
            let want = oracle_sssp(&g, 0).unwrap();
            assert_eq!(want.is_cycle(), tag == Tag::CyclePlanted, "{tag} seed {seed}");
            let got = solve_sssp(&g, 0, seed).unwrap();
            assert_eq!(got.is_cycle(), want.is_cycle());
            assert_eq!(got.distances(), want.distances());
        }
    }
}
