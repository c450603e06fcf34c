use kdiff::bq::{classify, Divisor, DmTuple};
use kdiff::cover::GraphCover;
use kdiff::rat::{q, qf};
use kdiff::taut::{
    divisor_class, normal_bundle_c1, zeta_rewrite, Decoration, Evaluator, Factor, LegChoice, Psi, TautExpression, Term,
};
use kdiff::{Error, StratumSpec};
use serde_json::json;

fn spec(s: &str) -> StratumSpec {
    s.parse().unwrap()
}

fn divisor(ev: &Evaluator, t: &DmTuple, d: Divisor) -> GraphCover {
    ev.graphs(&t.spec(), 1, true)
        .unwrap()
        .iter()
        .flat_map(|g| ev.covers(g))
        .find(|c| classify(t, c) == Some(d))
        .unwrap_or_else(|| panic!("{d} not found"))
}

fn product(ev: &Evaluator, t: &DmTuple, x: Divisor, y: Divisor) -> TautExpression {
    let cx = divisor(ev, t, x);
    let cy = divisor(ev, t, y);
    divisor_class(&t.spec(), &cx).multiply(ev, &Factor::Divisor(cy)).unwrap()
}

#[test]
fn zeta_rewrite_via_first_leg() {
    let ev = Evaluator::new();
    let s = spec("3;(-1,-1,-1,-1,-2)");
    let e = zeta_rewrite(&ev, &s, 1).unwrap();
    assert_eq!(e.len(), 7);
    let mut boundary = 0;
    for (term, c) in e.terms() {
        match term.graph() {
            None => {
                assert_eq!(term.deco.psi, [(1, 1)].into_iter().collect::<Psi>());
                assert_eq!(c, &q(2));
            }
            Some(g) => {
                boundary += 1;
                assert!(!g.has_horizontal());
                assert_eq!(g.leg_level(1), Some(-1));
                assert_eq!(c, &q(-3));
            }
        }
    }
    assert_eq!(boundary, 6);
}

#[test]
fn zeta_rewrite_via_last_leg_has_no_boundary() {
    let ev = Evaluator::new();
    let e = zeta_rewrite(&ev, &spec("3;(-1,-1,-1,-1,-2)"), 5).unwrap();
    assert_eq!(e.to_json(), json!([{"coefficient": "1/1", "graph": "", "psi": {"5": 1}, "zeta": {}}]));
}

#[test]
fn zeta_rewrite_without_boundary_for_abelian_minimal_pole() {
    let ev = Evaluator::new();
    let e = zeta_rewrite(&ev, &spec("1;(0,-1,-1)"), 1).unwrap();
    assert_eq!(e.len(), 1);
    let (term, c) = e.terms().next().unwrap();
    assert!(term.cover.is_none());
    assert_eq!(c, &q(1));
}

#[test]
fn dumbbell_self_intersection() {
    let ev = Evaluator::new();
    let t: DmTuple = "3:1,1,1,1,2".parse().unwrap();
    let g12 = divisor(&ev, &t, Divisor::Gamma((1, 2)));
    let n = normal_bundle_c1(&ev, &t.spec(), &g12).unwrap();
    assert_eq!(n.integrate(&ev).unwrap(), qf(-2, 9));
    assert_eq!(product(&ev, &t, Divisor::Gamma((1, 2)), Divisor::Gamma((1, 2))).integrate(&ev).unwrap(), qf(-2, 9));
}

#[test]
fn horizontal_normal_bundle() {
    let ev = Evaluator::new();
    let t: DmTuple = "3:1,1,1,1,2".parse().unwrap();
    let h = divisor(&ev, &t, Divisor::H((1, 5)));
    let n = normal_bundle_c1(&ev, &t.spec(), &h).unwrap();
    assert_eq!(n.len(), 2);
    for (term, c) in n.terms() {
        assert_eq!(c, &q(-1));
        assert!(term.deco.zeta.is_empty());
        assert_eq!(term.deco.psi.len(), 1);
        let (&id, &e) = term.deco.psi.iter().next().unwrap();
        assert_eq!(e, 1);
        assert!(h.base.half_edge_of(id).is_some());
    }
    assert_eq!(n.integrate(&ev).unwrap(), q(-1));
}

#[test]
fn abelian_normal_bundle_is_difference_of_level_classes() {
    let ev = Evaluator::new();
    let s = spec("1;(1,-1,-1,-1)");
    for g in ev.graphs(&s, 1, false).unwrap().iter() {
        let c = &ev.covers(g)[0];
        let n = normal_bundle_c1(&ev, &s, c).unwrap();
        let mut seen: Vec<(usize, String)> = n
            .terms()
            .map(|(t, c)| {
                assert!(t.deco.psi.is_empty());
                assert_eq!(t.deco.zeta.len(), 1);
                (*t.deco.zeta.keys().next().unwrap(), kdiff::rat::fmt(c))
            })
            .collect();
        seen.sort();
        assert_eq!(seen, vec![(0, "-1/1".to_string()), (1, "1/1".to_string())]);
    }
}

#[test]
fn dumbbell_times_l_divisor_is_slanted_cherry() {
    let ev = Evaluator::new();
    let t: DmTuple = "4:1,1,1,2,3".parse().unwrap();
    let e = product(&ev, &t, Divisor::Gamma((2, 3)), Divisor::L((4, 5)));
    assert_eq!(e.len(), 1);
    let (term, _) = e.terms().next().unwrap();
    let g = term.graph().unwrap();
    assert_eq!(g.depth(), 2);
    assert_eq!(g.leg_level(4), Some(0));
    assert_eq!(g.leg_level(1), Some(-1));
    assert_eq!(g.leg_level(2), Some(-2));
    assert_eq!(e.integrate(&ev).unwrap(), qf(2, 16));
}

#[test]
fn products_without_common_degeneration_vanish() {
    let ev = Evaluator::new();
    let t: DmTuple = "3:1,1,1,1,2".parse().unwrap();
    let e = product(&ev, &t, Divisor::Gamma((1, 2)), Divisor::H((1, 5)));
    assert!(e.is_empty());
    assert_eq!(e.integrate(&ev).unwrap(), q(0));
    let e = product(&ev, &t, Divisor::Gamma((1, 2)), Divisor::Gamma((1, 3)));
    assert_eq!(e.integrate(&ev).unwrap(), q(0));
}

#[test]
fn dumbbells_and_cherries() {
    let ev = Evaluator::new();
    let t: DmTuple = "3:1,1,1,1,2".parse().unwrap();
    let e = product(&ev, &t, Divisor::Gamma((1, 2)), Divisor::Gamma((3, 4)));
    assert_eq!(e.integrate(&ev).unwrap(), q(0));
    let e = product(&ev, &t, Divisor::Gamma((1, 2)), Divisor::Lambda((1, 2), (3, 4)));
    assert_eq!(e.integrate(&ev).unwrap(), qf(1, 9));
    let e = product(&ev, &t, Divisor::Lambda((1, 2), (3, 4)), Divisor::Lambda((1, 2), (3, 4)));
    assert_eq!(e.integrate(&ev).unwrap(), qf(-1, 9));
}

#[test]
fn three_level_cherry_degree() {
    let ev = Evaluator::new();
    let s = spec("3;(-1,-1,-1,-1,-2)");
    let graphs = ev.graphs(&s, 2, false).unwrap();
    assert_eq!(graphs.len(), 6);
    for g in graphs.iter() {
        for c in ev.covers(g) {
            let mut e = TautExpression::zero(&s);
            e.add_term(Term::boundary(c, Decoration::default()), q(1));
            assert_eq!(e.integrate(&ev).unwrap(), qf(1, 9));
        }
    }
}

#[test]
fn psi_product_on_five_points() {
    let ev = Evaluator::new();
    let s = spec("3;(-1,-1,-1,-1,-2)");
    let e = TautExpression::psi(&s, 1).multiply(&ev, &Factor::Psi(2)).unwrap();
    assert_eq!(e.integrate(&ev).unwrap(), q(2));
    assert_eq!(TautExpression::one(&spec("1;(0,-1,-1)")).integrate(&ev).unwrap(), q(1));
}

#[test]
fn misplaced_level_degree_integrates_to_zero() {
    let ev = Evaluator::new();
    let t: DmTuple = "3:1,1,1,1,2".parse().unwrap();
    let s = t.spec();
    let g12 = divisor(&ev, &t, Divisor::Gamma((1, 2)));
    let mut bottom = Decoration::default();
    bottom.add_zeta(1, 1);
    let mut e = TautExpression::zero(&s);
    e.add_term(Term::boundary(g12.clone(), bottom), q(1));
    assert_eq!(e.integrate(&ev).unwrap(), q(0));
    let mut top = Decoration::default();
    top.add_zeta(0, 1);
    let mut e = TautExpression::zero(&s);
    e.add_term(Term::boundary(g12, top), q(1));
    assert_ne!(e.integrate(&ev).unwrap(), q(0));
}

#[test]
fn degree_errors() {
    let ev = Evaluator::new();
    let s = spec("3;(-1,-1,-1,-1,-2)");
    let z2 = TautExpression::zeta(&s).multiply(&ev, &Factor::Zeta).unwrap();
    assert!(matches!(z2.multiply(&ev, &Factor::Zeta), Err(Error::DegreeOverflow { degree: 3, dim: 2 })));
    assert!(matches!(TautExpression::zeta(&s).integrate(&ev), Err(Error::IntegrandDegree { .. })));
}

#[test]
fn zeta_squared_agrees_across_legs_and_leg_choices() {
    let s = spec("4;(-1,-1,-1,-2,-3)");
    let first = Evaluator::new().eval(&s, 2, &Psi::new()).unwrap();
    let last = Evaluator::new().with_leg_choice(LegChoice::Last).eval(&s, 2, &Psi::new()).unwrap();
    assert_eq!(first, last);
    for i in 1..=5 {
        assert_eq!(Evaluator::new().eval_via_leg(&s, 2, &Psi::new(), i).unwrap(), first);
    }
}

#[test]
fn expression_json_is_deterministic() {
    let ev = Evaluator::new();
    let s = spec("3;(-1,-1,-1,-1,-2)");
    let a = zeta_rewrite(&ev, &s, 1).unwrap().to_json();
    let b = zeta_rewrite(&Evaluator::new(), &s, 1).unwrap().to_json();
    assert_eq!(a, b);
    for item in a.as_array().unwrap() {
        let c = item["coefficient"].as_str().unwrap();
        assert!(c == "2/1" || c == "-3/1", "{c}");
        assert!(item["psi"].is_object() && item["zeta"].is_object());
    }
}
