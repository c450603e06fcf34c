mod common;

use common::{monomials, psi_oracle};
use kdiff::rat::q;
use kdiff::taut::{psi_monomial_integral, Evaluator, Psi};
use kdiff::{Error, StratumSpec};
use std::collections::HashMap;

#[test]
fn closed_form_matches_string_equation_up_to_seven_points() {
    let mut memo = HashMap::new();
    let mut count = 0;
    for n in 3..=7 {
        for m in monomials(n) {
            assert_eq!(psi_monomial_integral(n, &m).unwrap(), psi_oracle(&m, &mut memo), "n={n} {m:?}");
            count += 1;
        }
    }
    assert_eq!(count, 1 + 4 + 15 + 56 + 210);
}

#[test]
fn small_examples() {
    assert_eq!(psi_monomial_integral(5, &[1, 1, 0, 0, 0]).unwrap(), q(2));
    assert_eq!(psi_monomial_integral(5, &[2, 0, 0, 0, 0]).unwrap(), q(1));
    assert_eq!(psi_monomial_integral(4, &[1, 0, 0, 0]).unwrap(), q(1));
}

#[test]
fn wrong_degree_is_rejected() {
    assert!(matches!(psi_monomial_integral(5, &[1, 0, 0, 0, 0]), Err(Error::IntegrandDegree { degree: 1, dim: 2 })));
}

#[test]
fn psi_integrals_on_strata() {
    let ev = Evaluator::new();
    let s: StratumSpec = "3;(-1,-1,-1,-1,-2)".parse().unwrap();
    let psi: Psi = [(1, 1), (2, 1)].into_iter().collect();
    assert_eq!(ev.eval(&s, 0, &psi).unwrap(), q(2));
}

#[test]
fn zero_dimensional_strata_have_degree_one() {
    let ev = Evaluator::new();
    for s in ["1;(0,-1,-1)", "2;(0,-2,-2)", "3;(-1,-1,-4)", "5;(-3,-3,-4)", "4;(2,-4,-6)", "6;(-2,-4,-6)"] {
        let spec: StratumSpec = s.parse().unwrap();
        assert_eq!(spec.dimension().unwrap(), 0);
        assert_eq!(ev.eval(&spec, 0, &Psi::new()).unwrap(), q(1), "{s}");
    }
}

#[test]
fn disconnected_strata() {
    let ev = Evaluator::new();
    let s: StratumSpec = "1;c1:(0,-1,-1);c2:(1,-1,-2)".parse().unwrap();
    assert_eq!(ev.eval(&s, 1, &Psi::new()).unwrap(), q(-1));
    let psi: Psi = [(4, 1)].into_iter().collect();
    assert_eq!(ev.eval(&s, 0, &psi).unwrap(), q(0));
}
