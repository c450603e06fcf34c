use kdiff::enumerate::{enumerate_consistent, enumerate_level_graphs};
use kdiff::graph::LevelGraph;
use kdiff::StratumSpec;
use std::collections::BTreeSet;

fn spec(s: &str) -> StratumSpec {
    s.parse().unwrap()
}

#[test]
fn five_point_divisors() {
    let s = spec("3;(-1,-1,-1,-1,-2)");
    let g = enumerate_level_graphs(&s, 1, false).unwrap();
    assert_eq!(g.len(), 9);
    let cherries = g.iter().filter(|g| g.vertices.len() == 3).count();
    assert_eq!(cherries, 3);
    let all = enumerate_level_graphs(&s, 1, true).unwrap();
    assert_eq!(all.len(), 13);
    for h in all.iter().filter(|g| g.has_horizontal()) {
        let v = h.leg_vertex(5).unwrap();
        assert_eq!(h.legs.iter().filter(|l| l.vertex == v).count(), 2);
    }
}

#[test]
fn trivial_graph_at_depth_zero() {
    for s in ["3;(-1,-1,-1,-1,-2)", "1;(0,-1,-1)", "2;(2,-2,-2,-2)"] {
        let s = spec(s);
        let g = enumerate_level_graphs(&s, 0, false).unwrap();
        assert_eq!(g, vec![LevelGraph::trivial(&s)]);
    }
}

#[test]
fn every_graph_is_valid_and_unique() {
    for text in ["3;(-1,-1,-1,-1,-2)", "1;(2,-1,-1,-1,-1)", "1;(3,-1,-1,-1,-1,-1)", "2;(1,1,-2,-2,-2)", "4;(-1,-1,-1,-2,-3)"] {
        let s = spec(text);
        let d = s.dimension().unwrap() as usize;
        for depth in 0..=d {
            let graphs = enumerate_level_graphs(&s, depth, false).unwrap();
            let mut seen = BTreeSet::new();
            for g in &graphs {
                g.validate().unwrap();
                assert!(g.is_forest());
                assert_eq!(g.depth(), depth);
                assert!(seen.insert(g.canonical().encode()), "duplicate in {text}");
                let dims = g.level_dimensions(&s).unwrap();
                assert_eq!(dims.iter().sum::<i64>(), d as i64 - depth as i64);
            }
        }
        assert!(enumerate_level_graphs(&s, d + 1, false).unwrap().is_empty());
    }
}

#[test]
fn consistent_graphs_of_m05() {
    let s = spec("1;(2,-1,-1,-1,-1)");
    assert_eq!(enumerate_consistent(&s, 1, 0, 8).unwrap().len(), 13);
}
