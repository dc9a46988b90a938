use proptest::prelude::*;

use sgdm_lab::dynamics::run_path;
use sgdm_lab::lyapunov::{drift_margin, envelope_lower_bounds, lyapunov_value};
use sgdm_lab::metrics::RangeBox;
use sgdm_lab::objective::finite_difference_grad;
use sgdm_lab::{
    evolve_ensemble, sgdm_step, tv_histogram, w1_1d, w1_exact_small, w1_sliced, EnsembleSpec,
    GradNoiseModel, LyapunovParams, ModelParams, NoiseMode, NoiseStream, Objective,
    ObjectiveKind, State, StepDraws, StepSchedule, System,
};

const GAUSS: GradNoiseModel = GradNoiseModel::AdditiveGaussian { scale: 1.0 };

fn objective_kind() -> impl Strategy<Value = ObjectiveKind> {
    prop_oneof![
        (0.2f64..4.0).prop_map(|scale| ObjectiveKind::QuadraticWell { scale }),
        (0.5f64..3.0, 0.0f64..0.3).prop_map(|(scale, amplitude)| {
            ObjectiveKind::CosinePerturbedQuadratic { scale, amplitude }
        }),
    ]
}

fn vector(dim: usize, r: f64) -> impl Strategy<Value = Vec<f64>> {
    prop::collection::vec(-r..r, dim)
}

fn cloud(n: usize, k: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    prop::collection::vec(vector(k, 3.0), n)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn objective_nonnegative_with_linear_gradient_growth(
        kind in objective_kind(),
        x in (1usize..5).prop_flat_map(|d| vector(d, 20.0)),
    ) {
        let obj = Objective::new(x.len(), kind, &GAUSS).unwrap();
        let c = obj.constants;
        prop_assert!(obj.value(&x) >= 0.0);
        let g = obj.grad_f(&x).unwrap();
        let gn = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        let xn = x.iter().map(|v| v * v).sum::<f64>().sqrt();
        prop_assert!(gn <= c.smoothness * xn + c.grad0_bound + 1e-12 * (1.0 + gn));
    }

    #[test]
    fn gradient_matches_finite_differences(
        kind in objective_kind(),
        x in (1usize..5).prop_flat_map(|d| vector(d, 5.0)),
    ) {
        let obj = Objective::new(x.len(), kind, &GAUSS).unwrap();
        let g = obj.grad_f(&x).unwrap();
        let fd = finite_difference_grad(&obj, &x, 1e-6);
        for (a, b) in g.iter().zip(&fd) {
            prop_assert!((a - b).abs() <= 1e-6 * (1.0 + a.abs()));
        }
    }

    #[test]
    fn hessian_op_norm_bounded_by_smoothness(
        kind in objective_kind(),
        x in (1usize..5).prop_flat_map(|d| vector(d, 10.0)),
    ) {
        let obj = Objective::new(x.len(), kind, &GAUSS).unwrap();
        let d = x.len();
        let h = nalgebra::DMatrix::from_row_slice(d, d, &obj.hessian(&x));
        let eig = nalgebra::SymmetricEigen::new(h).eigenvalues;
        let op = eig.iter().fold(0.0f64, |m, v| m.max(v.abs()));
        prop_assert!(op <= obj.constants.smoothness + 1e-12);
    }

    #[test]
    fn sgdm_and_intermediate_couple(
        kind in objective_kind(),
        seed in any::<u64>(),
        gamma in 0.5f64..6.0,
        beta in 0.0f64..2.0,
        batch in 1usize..5,
        eta in 0.001f64..0.1,
        dim in 1usize..4,
    ) {
        let obj = Objective::new(dim, kind, &GAUSS).unwrap();
        let p = ModelParams::new(gamma, beta, batch, dim).unwrap();
        let sched = StepSchedule::constant(eta).unwrap();
        let init = State::ones(dim);
        let mut s1 = NoiseStream::new(seed, 3, NoiseMode::BrownianDerived);
        let mut s2 = s1.replay();
        let a = run_path(System::Sgdm, &init, &sched, &p, &obj, &GAUSS, &mut s1, 200).unwrap();
        let b = run_path(System::Intermediate, &init, &sched, &p, &obj, &GAUSS, &mut s2, 200).unwrap();
        for (u, v) in a.iter().zip(&b) {
            for (x, y) in u.to_vec().iter().zip(v.to_vec()) {
                prop_assert!((x - y).abs() <= 1e-12);
            }
        }
    }

    #[test]
    fn position_update_ignores_current_gradient(
        m in vector(2, 3.0),
        x in vector(2, 3.0),
        xi in vector(2, 5.0),
        eta in 0.001f64..0.5,
    ) {
        let obj = Objective::cosine_perturbed(2, 1.0, 0.1).unwrap();
        let p = ModelParams::new(2.0, 1.0, 1, 2).unwrap();
        let s = State::new(m, x).unwrap();
        let mut d1 = StepDraws::zeros(2, 1);
        let mut d2 = StepDraws::zeros(2, 1);
        d2.batch[0] = xi;
        let a = sgdm_step(&s, eta, &p, &obj, &d1).unwrap();
        let b = sgdm_step(&s, eta, &p, &obj, &d2).unwrap();
        prop_assert_eq!(a.x, b.x);
        d1.zeta = vec![1.0, -1.0];
        let c = sgdm_step(&s, eta, &p, &obj, &d1).unwrap();
        prop_assert_eq!(c.x, sgdm_step(&s, eta, &p, &obj, &d2).unwrap().x);
    }

    #[test]
    fn step_sizes_non_increasing_and_times_increasing(
        eta in 0.001f64..1.0,
        alpha in 0.05f64..0.95,
        polynomial in any::<bool>(),
    ) {
        let sched = if polynomial {
            StepSchedule::polynomial(eta, alpha).unwrap()
        } else {
            StepSchedule::constant(eta).unwrap()
        };
        let times = sched.times(500);
        for k in 1..=500 {
            prop_assert!(sched.eta(k + 1).unwrap() <= sched.eta(k).unwrap());
            prop_assert!(times[k] > times[k - 1]);
        }
    }

    #[test]
    fn lyapunov_bounds_and_drift(
        kind in objective_kind(),
        gamma in 3.0f64..8.0,
        beta in 0.1f64..2.0,
        m in (1usize..4).prop_flat_map(|d| (vector(d, 10.0), vector(d, 10.0))),
    ) {
        let (m, x) = m;
        let d = m.len();
        let obj = Objective::new(d, kind, &GAUSS).unwrap();
        let p = ModelParams::new(gamma, beta, 1, d).unwrap();
        let lp = LyapunovParams::default_for(&p, &obj);
        let s = State::new(m, x).unwrap();
        let v = lyapunov_value(&p, &lp, &obj, &s);
        let (bm, bx) = envelope_lower_bounds(&p, &lp, &s);
        let tol = 1e-12 * (1.0 + v.abs());
        prop_assert!(v >= -tol);
        prop_assert!(v - bm >= -tol && v - bx >= -tol);
        prop_assert!(drift_margin(&p, &lp, &obj, &s) >= -1e-9);
    }

    #[test]
    fn w1_1d_metric_axioms(
        (a, b, c) in (1usize..40).prop_flat_map(|n| (vector(n, 5.0), vector(n, 5.0), vector(n, 5.0))),
    ) {
        let ab = w1_1d(&a, &b).unwrap();
        prop_assert_eq!(w1_1d(&a, &a).unwrap(), 0.0);
        prop_assert_eq!(ab, w1_1d(&b, &a).unwrap());
        prop_assert!(w1_1d(&a, &c).unwrap() <= ab + w1_1d(&b, &c).unwrap() + 1e-12);
    }

    #[test]
    fn sliced_lower_bounds_exact(
        (a, b) in (1usize..30, 1usize..4).prop_flat_map(|(n, k)| (cloud(n, k), cloud(n, k))),
        seed in any::<u64>(),
    ) {
        let exact = w1_exact_small(&a, &b).unwrap();
        let sliced = w1_sliced(&a, &b, 32, seed).unwrap();
        prop_assert!(sliced <= exact + 1e-12);
        prop_assert_eq!(sliced, w1_sliced(&a, &b, 32, seed).unwrap());
    }

    #[test]
    fn tv_histogram_range_identity_and_permutation(
        (a, b) in (2usize..200).prop_flat_map(|n| (cloud(n, 2), cloud(n, 2))),
        bins in 2usize..32,
        shift in 0usize..200,
    ) {
        let range = RangeBox::around(&a, &b, 3.0).unwrap();
        let tv = tv_histogram(&a, &b, bins, &range).unwrap();
        prop_assert!((0.0..=1.0).contains(&tv));
        prop_assert_eq!(tv_histogram(&a, &a, bins, &range).unwrap(), 0.0);
        let (mut pa, mut pb) = (a.clone(), b.clone());
        pa.rotate_left(shift % a.len());
        pb.rotate_left(shift % b.len());
        prop_assert_eq!(tv, tv_histogram(&pa, &pb, bins, &range).unwrap());
    }
}

#[test]
fn ensembles_identical_across_thread_counts() {
    let obj = Objective::cosine_perturbed(2, 1.0, 0.1).unwrap();
    let p = ModelParams::new(5.0, 1.0, 3, 2).unwrap();
    let sched = StepSchedule::constant(0.05).unwrap();
    let spec = EnsembleSpec {
        system: System::Sgdm,
        schedule: &sched,
        params: &p,
        objective: &obj,
        noise: &GAUSS,
        seed: 42,
        mode: NoiseMode::BrownianDerived,
        count: 257,
        init: State::ones(2),
        record_steps: vec![10, 100],
        substeps: 1,
    };
    let run_with = |threads: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| evolve_ensemble(&spec).unwrap())
    };
    let one = run_with(1);
    assert_eq!(one, run_with(3));
    assert_eq!(one, evolve_ensemble(&spec).unwrap());
}
