use super::*;
use crate::fixtures;
use crate::random::Rng;
use crate::scalar::int;
use proptest::prelude::*;

fn delta_of(alg: &GradedAlgebra) -> LinearOperator {
    alg.delta().expect("fixture has delta").clone()
}

fn diag(a: i64, b: i64, c: i64) -> Element {
    Element::from_terms([(0, int(a)), (1, int(b)), (2, int(c))])
}

#[test]
fn triangular_m2_is_minus_ad() {
    let alg = fixtures::triangular();
    let m2 = construct_m(&alg, &delta_of(&alg), 2).unwrap();
    assert_eq!(m2.eval_basis(&[0, 1]), Element::term(2, int(-1)));
    for (a, b, c, d) in [
        (1, 0, 0, 1),
        (1, 2, 3, 4),
        (0, 1, 1, 0),
        (1, 1, 1, 1),
        (-2, 5, 7, -3),
    ] {
        let x = Element::from_terms([(0, int(a)), (1, int(b))]);
        let y = Element::from_terms([(0, int(c)), (1, int(d))]);
        assert_eq!(m2.eval(&[x, y]).unwrap(), Element::term(2, int(-a * d)));
    }
}

#[test]
fn triangular_higher_operations_vanish() {
    let alg = fixtures::triangular();
    for n in 3..=6 {
        assert!(
            construct_m(&alg, &delta_of(&alg), n).unwrap().is_zero(),
            "m_{n}"
        );
    }
}

#[test]
fn zero_delta_gives_zero_operations() {
    let alg = fixtures::triangular();
    let zero = LinearOperator::zero(alg.basis().clone(), 1);
    for n in 1..=5 {
        assert!(construct_m(&alg, &zero, n).unwrap().is_zero());
    }
}

#[test]
fn wrong_degree_delta_is_rejected() {
    let alg = fixtures::triangular();
    let bad = LinearOperator::new(alg.basis().clone(), 1, [(0, Element::basis(1))]).unwrap();
    assert!(matches!(
        construct_m(&alg, &bad, 2),
        Err(Error::DegreeMismatch(_))
    ));
}

#[test]
fn stasheff_holds_on_triangular() {
    let alg = fixtures::triangular();
    let s = AInfStructure::from_delta(&alg, &delta_of(&alg), 6).unwrap();
    for n in 1..=6 {
        assert!(stasheff_defect(&s, n).unwrap().is_zero(), "n = {n}");
    }
}

#[test]
fn perturbations_into_e12_are_invisible_on_triangular() {
    // every degree +1 value lies in span(e12), which m_1 and m_2 both kill
    let alg = fixtures::triangular();
    let s = AInfStructure::from_delta(&alg, &delta_of(&alg), 4).unwrap();
    let mut m2 = s.op(2).unwrap().clone();
    let old = m2.eval_basis(&[0, 0]);
    m2.set(vec![0, 0], &old + &Element::basis(2)).unwrap();
    let p = s.with_op(m2).unwrap();
    assert!(p.first_stasheff_failure(4).is_none());
}

#[test]
fn stasheff_detects_a_perturbed_product() {
    let alg = crate::random::truncated_polynomial(3, 1);
    let d = LinearOperator::new(alg.basis().clone(), 1, [(1, Element::basis(2))]).unwrap();
    let s = AInfStructure::from_delta(&alg, &d, 4).unwrap();
    assert!(s.first_stasheff_failure(4).is_none());
    let mut m2 = s.op(2).unwrap().clone();
    let old = m2.eval_basis(&[0, 0]);
    m2.set(vec![0, 0], &old + &Element::basis(1)).unwrap();
    let p = s.with_op(m2).unwrap();
    let defect = stasheff_defect(&p, 2).unwrap();
    assert_eq!(defect.eval_basis(&[0, 0]), Element::basis(2));
}

#[test]
fn stasheff_reports_missing_arity() {
    let alg = fixtures::triangular();
    let s = AInfStructure::from_delta(&alg, &delta_of(&alg), 2).unwrap();
    assert!(matches!(
        stasheff_defect(&s, 3),
        Err(Error::MissingArity(3))
    ));
}

#[test]
fn only_m1_square_zero_is_ainf() {
    let alg = fixtures::triangular();
    let m1 = construct_m(&alg, &delta_of(&alg), 1).unwrap();
    let s = AInfStructure::new([m1], Mode::Cohomological).unwrap();
    for n in 1..=5 {
        assert!(stasheff_defect_family(&s, n).is_zero());
    }
}

#[test]
fn structure_rejects_bad_degree() {
    let alg = fixtures::triangular();
    let m1 = construct_m(&alg, &delta_of(&alg), 1).unwrap();
    assert!(matches!(
        AInfStructure::new([m1], Mode::Homological),
        Err(Error::DegreeMismatch(_))
    ));
    let m2 = construct_m(&alg, &delta_of(&alg), 2).unwrap();
    assert!(matches!(
        AInfStructure::new([m2], Mode::Cohomological),
        Err(Error::MissingArity(1))
    ));
}

#[test]
fn stasheff_holds_on_random_square_zero_instances() {
    let mut rng = Rng::seeded(0x5eed_0001);
    for case in 0..20 {
        let alg = rng.random_algebra_with_square_zero_delta(4);
        let s = AInfStructure::from_delta(&alg, &delta_of(&alg), 6).unwrap();
        if let Some((n, t, d)) = s.first_stasheff_failure(6) {
            panic!(
                "case {case} {}: arity {n} tuple {t:?} defect {}",
                alg.name(),
                alg.basis().display(&d)
            );
        }
    }
}

#[test]
fn squaring_identity_on_non_square_zero_fixture() {
    let alg = fixtures::non_square_zero();
    let d = delta_of(&alg);
    assert!(!compose(&d, &d).unwrap().is_zero());
    for n in 1..=5 {
        assert!(
            assoc_vs_delta_squared(&alg, &d, n).unwrap().is_zero(),
            "n = {n}"
        );
    }
    let ops = DeltaOperations::new(&alg, &d).unwrap();
    assert!(!stasheff_defect_family(&ops, 2).is_zero());
}

#[test]
fn squaring_identity_on_random_operators() {
    let mut rng = Rng::seeded(0x5eed_0002);
    for case in 0..20 {
        let alg = rng.random_algebra_with_non_square_zero_delta(4);
        let d = delta_of(&alg);
        for n in 1..=5 {
            let diff = assoc_vs_delta_squared(&alg, &d, n).unwrap();
            assert!(
                diff.is_zero(),
                "case {case} n {n}: {:?}",
                diff.first_nonzero()
            );
        }
    }
}

#[test]
fn squaring_identity_reduces_to_stasheff_when_square_zero() {
    let alg = fixtures::triangular();
    let d = delta_of(&alg);
    let ops = DeltaOperations::new(&alg, &d).unwrap();
    for n in 1..=4 {
        assert_eq!(
            assoc_vs_delta_squared(&alg, &d, n).unwrap(),
            stasheff_defect_family(&ops, n)
        );
    }
}

#[test]
fn associative_order_examples() {
    let alg = fixtures::triangular();
    let r = associative_order(&alg, &delta_of(&alg), 6).unwrap();
    assert_eq!(r.order, Order::Finite(2));
    assert_eq!(r.witness, OrderWitness::Vanishes { arity: 3 });

    for alg in [
        fixtures::inner_derivation(),
        fixtures::zero_product_derivation(),
    ] {
        let r = associative_order(&alg, &delta_of(&alg), 6).unwrap();
        assert_eq!(r.order, Order::Finite(1), "{}", alg.name());
    }
    let zero = LinearOperator::zero(alg.basis().clone(), 1);
    assert_eq!(
        associative_order(&alg, &zero, 6).unwrap().order,
        Order::Finite(0)
    );

    let nsz = fixtures::non_square_zero();
    assert!(matches!(
        associative_order(&nsz, &delta_of(&nsz), 6),
        Err(Error::NotSquareZero(_))
    ));
}

#[test]
fn associative_order_can_exceed_cap() {
    let alg = fixtures::triangular();
    let r = associative_order(&alg, &delta_of(&alg), 1).unwrap();
    assert_eq!(r.order, Order::ExceedsCap);
    match r.witness {
        OrderWitness::Nonzero { arity, .. } => assert_eq!(arity, 2),
        w => panic!("{w:?}"),
    }
}

#[test]
fn order_vanishing_is_monotone_on_random_instances() {
    let mut rng = Rng::seeded(0x5eed_0003);
    for _ in 0..20 {
        let alg = rng.random_algebra_with_square_zero_delta(3);
        let ops = DeltaOperations::new(&alg, alg.delta().unwrap()).unwrap();
        let zeros: Vec<bool> = (1..=6).map(|n| ops.tabulate(n).is_zero()).collect();
        for w in zeros.windows(2) {
            assert!(!w[0] || w[1], "{zeros:?}");
        }
        associative_order(&alg, alg.delta().unwrap(), 5).unwrap();
    }
}

#[test]
fn compatibility_on_triangular() {
    let alg = fixtures::triangular();
    let d = delta_of(&alg);
    assert!(compat_check(&alg, &d).unwrap().is_ok());
    let m2 = construct_m(&alg, &d, 2).unwrap();
    let args = [Element::basis(0), Element::basis(0), Element::basis(1)];
    let inner = apply_tensor_slot(2, 1, &m2, &args).unwrap();
    assert_eq!(
        alg.multiply(&inner[0], &inner[1]),
        Element::term(2, int(-1))
    );
    let outer = apply_tensor_slot(
        2,
        0,
        &MultiOp::tabulate(alg.basis().clone(), 2, 0, |t| alg.multiply_indices(t)),
        &args,
    )
    .unwrap();
    assert_eq!(m2.eval(&outer).unwrap(), Element::term(2, int(-1)));
}

#[test]
fn compatibility_for_derivations_and_left_actions() {
    for alg in [
        fixtures::inner_derivation(),
        fixtures::zero_product_derivation(),
    ] {
        assert!(compat_check(&alg, &delta_of(&alg)).unwrap().is_ok());
    }
    let alg = fixtures::triangular();
    let l = left_multiplication(&alg, &Element::basis(2)).unwrap();
    assert!(compat_check(&alg, &l).unwrap().is_ok());
}

#[test]
fn compatibility_requires_order_two() {
    let mut rng = Rng::seeded(0x5eed_0004);
    for _ in 0..200 {
        let alg = rng.random_algebra_with_square_zero_delta(4);
        let d = delta_of(&alg);
        let r = associative_order(&alg, &d, 6).unwrap();
        let check = compat_check(&alg, &d);
        match r.order {
            Order::Finite(n) if n <= 2 => assert!(check.unwrap().is_ok()),
            _ => {
                assert!(matches!(check, Err(Error::Precondition(_))));
                return;
            }
        }
    }
    panic!("no instance of order above 2 found");
}

#[test]
fn induced_operations_on_triangular() {
    let alg = fixtures::triangular();
    let ind = induced_on_cohomology(&alg, &delta_of(&alg), 4).unwrap();
    assert_eq!(ind.cohomology.len(), 1);
    assert_eq!(
        ind.cohomology.classes()[0].representative,
        Element::basis(0)
    );
    assert!(ind.is_trivial());
    assert!(ind.ops.values().all(MultiOp::is_zero));
}

#[test]
fn induced_operations_with_zero_delta() {
    let alg = fixtures::triangular();
    let zero = LinearOperator::zero(alg.basis().clone(), 1);
    let ind = induced_on_cohomology(&alg, &zero, 4).unwrap();
    assert_eq!(ind.cohomology.len(), 3);
    assert!(ind.is_trivial());
}

#[test]
fn induced_operations_on_random_instances() {
    let mut rng = Rng::seeded(0x5eed_0005);
    for case in 0..20 {
        let alg = rng.random_algebra_with_square_zero_delta(4);
        let ind = induced_on_cohomology(&alg, &delta_of(&alg), 4).unwrap();
        assert!(
            ind.is_trivial(),
            "case {case}: {:?}",
            ind.report.violations.first()
        );
    }
}

#[test]
fn induced_requires_square_zero() {
    let alg = fixtures::non_square_zero();
    assert!(matches!(
        induced_on_cohomology(&alg, &delta_of(&alg), 3),
        Err(Error::NotSquareZero(_))
    ));
}

#[test]
fn left_multiplication_by_e12_is_the_fixture_delta() {
    let alg = fixtures::triangular();
    let l = left_multiplication(&alg, &Element::basis(2)).unwrap();
    assert_eq!(l, delta_of(&alg));
    let s = left_action_structure(&alg, &l, 4).unwrap();
    assert!(s.op(3).unwrap().is_zero());
    assert_eq!(
        s.op(2).unwrap().eval_basis(&[0, 1]),
        Element::term(2, int(-1))
    );
    // m2(a, b) = −(−1)^{|a|} a ξ b on basis pairs
    for i in 0..3 {
        for j in 0..3 {
            let axb = alg.multiply_indices(&[i, 2, j]);
            let expected = axb.scaled(&-crate::sign::koszul_sign(1, &[alg.degree(i)]));
            assert_eq!(s.op(2).unwrap().eval_basis(&[i, j]), expected);
        }
    }
}

#[test]
fn left_action_rejects_non_left_linear_operators() {
    let alg = fixtures::inner_derivation();
    assert!(matches!(
        left_action_structure(&alg, &delta_of(&alg), 4),
        Err(Error::LawViolated(_))
    ));
    let alg = fixtures::triangular();
    let even = left_multiplication(&alg, &diag(1, 0, 0)).unwrap();
    assert!(matches!(
        left_action_structure(&alg, &even, 4),
        Err(Error::DegreeMismatch(_))
    ));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn stasheff_holds_for_any_seed(seed in any::<u64>()) {
        let mut rng = Rng::seeded(seed);
        let alg = rng.random_algebra_with_square_zero_delta(3);
        let s = AInfStructure::from_delta(&alg, alg.delta().unwrap(), 5).unwrap();
        prop_assert!(s.first_stasheff_failure(5).is_none());
    }

    #[test]
    fn squaring_identity_for_any_seed(seed in any::<u64>()) {
        let mut rng = Rng::seeded(seed);
        let alg = rng.random_algebra_with_non_square_zero_delta(3);
        for n in 1..=4 {
            prop_assert!(assoc_vs_delta_squared(&alg, alg.delta().unwrap(), n).unwrap().is_zero());
        }
    }
}
