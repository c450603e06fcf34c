use kdiff::cover::{deg_d_pi, deg_d_pi_by_levels, enumerate_covers};
use kdiff::enumerate::enumerate_level_graphs;
use kdiff::graph::LevelGraph;
use kdiff::rat::{q, qf};
use kdiff::StratumSpec;

fn doubled_edge_base() -> LevelGraph {
    "2:2|0,-1|1@1:8|(0,1,0),(0,1,0)|g0=1,g1=1".parse().unwrap()
}

#[test]
fn doubled_edge_cover_has_half_stabilizer() {
    let base = doubled_edge_base();
    assert_eq!(base.aut_order(), 2);
    let covers = enumerate_covers(&base, Some(&[2, 2]));
    assert_eq!(covers.len(), 2);
    let crossed: Vec<_> = covers
        .iter()
        .filter(|c| c.components_over_base().iter().all(|&(_, n)| n == 1))
        .collect();
    assert_eq!(crossed.len(), 1);
    let c = crossed[0];
    assert_eq!(c.explicit().edges.len(), 4);
    assert_eq!(c.s_pi(), qf(1, 2));
    assert_eq!(c.aut_commuting(), 2);
    let (lhs, rhs) = c.stabilizer_identity();
    assert_eq!(lhs, rhs);
    assert_eq!(lhs, 32.into());
}

#[test]
fn unique_cover_over_dumbbell() {
    let s: StratumSpec = "3;(-1,-1,-1,-1,-2)".parse().unwrap();
    for g in enumerate_level_graphs(&s, 1, true).unwrap() {
        let covers = enumerate_covers(&g, None);
        assert_eq!(covers.len(), 1);
        let c = &covers[0];
        assert_eq!(c.s_pi(), q(1));
        let expected: i64 = if g.has_horizontal() { 3 } else { 1 };
        assert_eq!(c.aut_commuting() as i64, expected);
        if !g.has_horizontal() {
            assert_eq!(c.prong_count(), 1);
        }
    }
}

#[test]
fn prong_and_ell_hat() {
    let g: LevelGraph = "2:2|0,-1|1@0:-2,2@0:-4,3@1:1,4@1:1|(0,1,2)".parse().unwrap();
    let c = &enumerate_covers(&g, None)[0];
    assert_eq!(c.prong_count(), 2);
    assert_eq!(c.ell_hat(), (vec![2], 2));
}

#[test]
fn identity_cover_for_k_one() {
    let s: StratumSpec = "1;(3,-1,-1,-1,-1,-1)".parse().unwrap();
    for depth in 1..=3 {
        for g in enumerate_level_graphs(&s, depth, false).unwrap() {
            let covers = enumerate_covers(&g, None);
            assert_eq!(covers.len(), 1);
            let c = &covers[0];
            assert!(c.fibers.iter().all(|&p| p == 1));
            assert_eq!(c.s_pi(), q(1));
            assert_eq!(c.ell_hat().1, g.ell_factors().unwrap().1);
            let kprod: i64 = (0..g.edges.len()).map(|e| g.kappa(e)).product();
            assert_eq!(c.prong_count(), kprod);
        }
    }
}

#[test]
fn stabilizer_identity_on_five_point_strata() {
    for text in ["3;(-1,-1,-1,-1,-2)", "2;(2,-2,-2,0,-2)", "4;(-1,-1,-1,-2,-3)", "2;(0,0,0,-2,-2)", "6;(-2,-2,-2,-2,-4)"] {
        let s: StratumSpec = text.parse().unwrap();
        for depth in 0..=s.dimension().unwrap() as usize {
            for g in enumerate_level_graphs(&s, depth, depth == 1).unwrap() {
                for c in enumerate_covers(&g, None) {
                    let (lhs, rhs) = c.stabilizer_identity();
                    assert_eq!(lhs, rhs, "{text} {c}");
                    let ex = c.explicit();
                    for (i, &(v, q)) in ex.vertices.iter().enumerate() {
                        let mut j = i;
                        for _ in 0..c.fibers[v] {
                            j = ex.tau_vertices[j];
                        }
                        assert_eq!(j, i);
                        assert_eq!(ex.vertices[ex.tau_vertices[i]].0, v);
                        let _ = q;
                    }
                    if !g.has_horizontal() {
                        assert_eq!(Some(deg_d_pi(&c)), deg_d_pi_by_levels(&c, &s));
                    }
                }
            }
        }
    }
}
