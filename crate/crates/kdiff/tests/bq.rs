use kdiff::bq::*;
use kdiff::rat::{q, qf};
use kdiff::taut::Evaluator;
use num_traits::Zero;

fn t(s: &str) -> DmTuple {
    s.parse().unwrap()
}

#[test]
fn int_condition() {
    assert!(check_int(&t("3:1,1,1,1,2")));
    assert!(check_int(&t("4:1,1,1,2,3")));
    assert!(!check_int(&t("5:1,1,1,3,4")));
}

#[test]
fn tuple_validation() {
    assert!("3:1,1,1,1,3".parse::<DmTuple>().is_err());
    assert!("4:2,2,2,1,1".parse::<DmTuple>().is_ok());
    assert!("4:2,2,2,2,0".parse::<DmTuple>().is_err());
    assert!("2:1,1,1,1".parse::<DmTuple>().is_err());
    assert_eq!(t("4:3,1,2,1,1").to_string(), "4:1,1,1,2,3");
}

#[test]
fn small_scan_is_consistent_with_check() {
    let list = scan_int(12);
    assert!(list.iter().all(check_int));
    let mut sorted = list.clone();
    sorted.sort();
    sorted.dedup();
    assert_eq!(sorted.len(), list.len());
    assert_eq!(list[0], t("3:1,1,1,1,2"));
    assert!(scan_int(2).is_empty());
}

#[test]
fn inventory_of_simplest_tuple() {
    let inv = inventory(&t("3:1,1,1,1,2"));
    assert_eq!(inv.gamma, vec![(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)]);
    assert!(inv.l.is_empty());
    assert_eq!(inv.h, vec![(1, 5), (2, 5), (3, 5), (4, 5)]);
    assert_eq!(inv.lambda.len(), 3);
    assert!(inv.slanted.is_empty());
    assert!(inv.gamma.iter().all(|&p| inv.kappa[&format!("{}{}", p.0, p.1)] == 1));
}

#[test]
fn inventory_with_l_divisor() {
    let x = t("4:1,1,1,2,3");
    let inv = inventory(&x);
    assert_eq!(inv.l, vec![(4, 5)]);
    assert_eq!(x.kappa((4, 5)), -1);
    assert_eq!(inv.h, vec![(1, 5), (2, 5), (3, 5)]);
    assert_eq!(inv.slanted.len(), 3);
}

#[test]
fn pair_families_partition_all_pairs() {
    for x in scan_int(DEFAULT_KMAX) {
        let inv = inventory(&x);
        assert_eq!(inv.gamma.len() + inv.l.len() + inv.h.len(), 10, "{x}");
    }
}

#[test]
fn intersection_examples() {
    let x = t("3:1,1,1,1,2");
    assert_eq!(upstairs_product(&x, Divisor::Gamma((1, 2)), Divisor::Gamma((1, 2))), qf(-2, 9));
    assert_eq!(downstairs_product(&x, Divisor::Gamma((1, 2)), Divisor::Gamma((3, 4))), qf(1, 9));
    assert_eq!(downstairs_product(&x, Divisor::Gamma((1, 2)), Divisor::Gamma((1, 3))), q(0));
    assert_eq!(downstairs_product(&x, Divisor::H((1, 5)), Divisor::H((1, 5))), q(-1));
    let y = t("4:1,1,1,2,3");
    assert_eq!(upstairs_product(&y, Divisor::L((4, 5)), Divisor::L((4, 5))), qf(-1, 16));
    assert_eq!(downstairs_product(&y, Divisor::Gamma((1, 2)), Divisor::Gamma((1, 3))), qf(4, 16));
    assert!(matches!(upstairs_matrix(&t("5:1,1,1,3,4")), Err(kdiff::Error::NotInt(_))));
}

#[test]
fn matrices_are_symmetric() {
    for x in scan_int(DEFAULT_KMAX) {
        for (_, m) in [upstairs_matrix(&x).unwrap(), downstairs_matrix(&x).unwrap()] {
            for (i, row) in m.iter().enumerate() {
                for (j, x) in row.iter().enumerate() {
                    assert_eq!(x, &m[j][i]);
                }
            }
        }
    }
}

#[test]
fn contraction_examples() {
    let y = contraction_degrees(&t("4:1,1,1,2,3")).unwrap();
    assert_eq!(y["L45"], qf(1, 16));
    let x = contraction_degrees(&t("3:1,1,1,1,2")).unwrap();
    assert_eq!(x["Lambda12|34"], qf(1, 9));
    let empty: Vec<DmTuple> = scan_int(DEFAULT_KMAX)
        .into_iter()
        .filter(|x| {
            let inv = inventory(x);
            inv.l.is_empty() && inv.lambda.is_empty()
        })
        .collect();
    for x in empty {
        assert!(contraction_degrees(&x).unwrap().is_empty());
    }
}

#[test]
fn chern_numbers_of_simplest_tuple() {
    let x = t("3:1,1,1,1,2");
    let c = chern_numbers(&x).unwrap();
    assert_eq!(c.c1_sq, q(1));
    assert_eq!(c.c2, qf(1, 3));
    assert_eq!(c.c1_sq, c.c1_sq_from_matrix);
    for (d, coeff) in &c.c1 {
        match d {
            Divisor::Gamma(_) => assert_eq!(coeff, &qf(1, 2)),
            _ => assert_eq!(coeff, &qf(1, 2)),
        }
    }
    assert!(zero_identity(3, [1, 1, 1, 1, 2]).is_zero());
}

#[test]
fn certify_examples() {
    let r = certify(&t("3:1,1,1,1,2"), None).unwrap();
    assert!(r.certified());
    assert_eq!(r.c1_sq.as_deref(), Some("1/1"));
    assert_eq!(r.c2.as_deref(), Some("1/3"));
    let r = certify(&t("5:1,1,1,3,4"), None).unwrap();
    assert!(!r.int);
    assert!(!r.certified());
    assert!(r.c1_sq.is_none());
}

#[test]
fn report_json_is_byte_identical() {
    let a = serde_json::to_string(&certify(&t("4:1,1,1,2,3"), None).unwrap()).unwrap();
    let b = serde_json::to_string(&certify(&t("4:1,1,1,2,3"), None).unwrap()).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_str(&a).unwrap();
    for key in ["tuple", "k", "int", "inventory", "matrix", "c1_sq", "c2", "bmy", "positivity", "cross_validated"] {
        assert!(v.get(key).is_some(), "{key}");
    }
}

#[test]
fn cross_validation_of_small_tuples() {
    for s in ["3:1,1,1,1,2", "4:1,1,1,2,3", "6:1,2,2,3,4"] {
        let cv = cross_validate(&t(s), &Evaluator::new()).unwrap();
        assert!(cv.passed, "{s}: {:?}", cv.mismatches);
        assert!(cv.matrix_entries > 0);
    }
    let r = certify(&t("3:1,1,1,1,2"), Some(&Evaluator::new())).unwrap();
    assert!(r.cross_validated);
}
