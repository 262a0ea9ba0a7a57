use thickdist::formulas::{
    bowen_coefficient, bowen_derivative, bowen_direct, bowen_inductive, bowen_naive, bowen_naive_parts, frahm, h4, h6, h7, IndexedFormula,
};
use thickdist::{project, MultiIndex, ScalarCoeff, StandardDistribution};

fn index_choices(k: usize) -> Vec<Vec<usize>> {
    (0..k).fold(vec![vec![]], |acc, _| acc.into_iter().flat_map(|v| (1..=3).map(move |a| [v.clone(), vec![a]].concat())).collect())
}

#[test]
fn both_bowen_routes_agree_up_to_four_indices() {
    for k in 1..=4 {
        for js in index_choices(k) {
            for i in 1..=3 {
                let direct = bowen_direct(&js, i);
                assert_eq!(direct, bowen_inductive(&js, i), "i={i} j={js:?}");
                let pattern = js.iter().fold(MultiIndex::unit(3, i), |acc, &j| acc.bumped(j, 1));
                assert_eq!(direct.delta_coefficient(), bowen_coefficient(&pattern));
            }
        }
    }
}

#[test]
fn naive_route_differs_only_by_a_delta() {
    for js in index_choices(3) {
        for i in 1..=3 {
            let right = bowen_derivative(&js, i);
            let naive = bowen_naive(js[0], js[1], js[2], i);
            let difference = &naive - &right;
            assert!(difference.function_part().is_zero(), "i={i} j={js:?}");
            assert!(difference.delta_terms().all(|(a, _)| a.order() == 0));
            if !right.delta_coefficient().is_zero() {
                assert_ne!(naive, right, "i={i} j={js:?}");
            }
        }
    }
}

#[test]
fn naive_source_coefficient() {
    let (_, sym) = bowen_naive_parts(1, 1, 2, 2);
    assert_eq!(sym.to_pi_form(3).to_string(), "4π/27");
    let (_, sym) = bowen_naive_parts(1, 1, 1, 1);
    assert_eq!(sym, &ScalarCoeff::c() * &ScalarCoeff::ratio(1, 9));
}

#[test]
fn order_zero_values_differ_but_project_alike() {
    for i in 1..=3 {
        for j in 1..=3 {
            let difference = h6(i, j) - h7(i, j);
            assert!(!difference.is_zero());
            assert_eq!(difference.pf_terms().count(), 0);
            assert!(project(&difference).is_zero());
            assert_eq!(project(&h6(i, j)), frahm(i, j));
        }
    }
}

#[test]
fn printed_formulas() {
    let f = IndexedFormula::from_standard(3, frahm).unwrap();
    assert_eq!(f.to_unicode(), "p.v.((3 xi xj − r^2 δij)/r^5) − (4π/3) δij δ");
    let f = IndexedFormula::from_thick(2, |i, j| h4(2, i, j)).unwrap();
    assert_eq!(f.to_unicode(), "2π(δij − 2 ni nj) δ∗");
    let trace = (1..=3).fold(StandardDistribution::zero(3), |acc, i| acc + frahm(i, i));
    assert_eq!(trace.to_string(), "-C*delta");
}
