use lqu_core::linalg::kron;
use lqu_core::lqu::lqu_closed_form;
use lqu_core::measure::{apply_filter_pair, LocalFilter};
use lqu_core::random::{random_density, rng_for};
use lqu_core::states::{validate, DensityMatrix};
use proptest::prelude::*;

fn filter(d: usize) -> impl Strategy<Value = LocalFilter> {
    proptest::collection::vec(0.05f64..3.0, d).prop_map(|v| LocalFilter::new(v).unwrap())
}

fn product(a: &LocalFilter, b: &LocalFilter) -> LocalFilter {
    LocalFilter::new(a.diag().iter().zip(b.diag()).map(|(x, y)| x * y).collect()).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(96))]

    #[test]
    fn output_is_a_valid_state(seed in any::<u64>(), fa in filter(3), fb in filter(2)) {
        let rho = random_density(&mut rng_for(seed, 0), 3, 2);
        let out = apply_filter_pair(&fa, &fb, &rho).unwrap();
        prop_assert!(validate(&out.state).is_valid());
        // direct evaluation F ρ F† / Tr(…) with F = F_A ⊗ F_B
        let f = kron(&fa.matrix(), &fb.matrix());
        let raw = &(&f * rho.matrix()) * &f;
        let tr = raw.trace().re;
        prop_assert!((out.success_prob - tr).abs() < 1e-12 * tr.max(1.0));
        prop_assert!(out.state.matrix().max_abs_diff(&raw.scale_real(1.0 / tr)) < 1e-12);
    }

    #[test]
    fn sequential_filters_compose(seed in any::<u64>(), a in filter(2), b in filter(2), c in filter(2), d in filter(2)) {
        let rho = random_density(&mut rng_for(seed, 1), 2, 2);
        let two_step = apply_filter_pair(&c, &d, &apply_filter_pair(&a, &b, &rho).unwrap().state).unwrap();
        let one_step = apply_filter_pair(&product(&a, &c), &product(&b, &d), &rho).unwrap();
        prop_assert!(two_step.state.matrix().max_abs_diff(one_step.state.matrix()) < 1e-10);
    }

    #[test]
    fn identity_filters_change_nothing(seed in any::<u64>()) {
        let rho = random_density(&mut rng_for(seed, 2), 3, 3);
        let id = LocalFilter::identity(3);
        let out = apply_filter_pair(&id, &id, &rho).unwrap();
        prop_assert!(out.state.matrix().max_abs_diff(rho.matrix()) < 1e-12);
        let (u0, u1) = (lqu_closed_form(&rho).unwrap().value, lqu_closed_form(&out.state).unwrap().value);
        prop_assert!((u0 - u1).abs() < 1e-10);
    }

    #[test]
    fn normalized_output_is_scale_invariant(seed in any::<u64>(), fa in filter(2), fb in filter(2), s in 0.01f64..10.0) {
        let rho = random_density(&mut rng_for(seed, 3), 2, 2);
        let base = apply_filter_pair(&fa, &fb, &rho).unwrap();
        let scaled = apply_filter_pair(&fa.scaled(s).unwrap(), &fb, &rho).unwrap();
        prop_assert!(base.state.matrix().max_abs_diff(scaled.state.matrix()) < 1e-12);
        prop_assert!((scaled.success_prob - s * s * base.success_prob).abs() < 1e-12 * scaled.success_prob.max(1.0));
        prop_assert!((scaled.physical_success_prob - base.physical_success_prob).abs() < 1e-12);
    }
}

#[test]
fn canonical_filter_is_a_contraction() {
    let f = LocalFilter::new(vec![1.606, 1.0]).unwrap();
    let c = f.canonical();
    assert!(!c.exceeds_unit());
    assert_eq!(c.max_entry(), 1.0);
    let rho = DensityMatrix::maximally_mixed(2, 2);
    let id = LocalFilter::identity(2);
    let raw = apply_filter_pair(&f, &id, &rho).unwrap();
    let phys = apply_filter_pair(&c, &id, &rho).unwrap();
    assert!((raw.physical_success_prob - phys.success_prob).abs() < 1e-15);
    assert!(raw.state.matrix().max_abs_diff(phys.state.matrix()) < 1e-15);
}
