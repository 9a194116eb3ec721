use cstrack::frame_io::Frame;
use cstrack::measurement::{make_mask, sample};
use cstrack::recovery::{
    dct2, idct2, l0_oracle, reconstruct_frame, reconstructors, solve_l1, CoeffPlane, LinearOperator, MaskedDct,
    SolverParams,
};
use nalgebra::DMatrix;
use proptest::prelude::*;

fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

#[test]
fn one_sparse_frame_is_recovered() {
    let mut coeffs = vec![0.0; 64];
    coeffs[8 + 1] = 1.0;
    let frame = idct2(&CoeffPlane::new(8, 8, coeffs).unwrap());
    let params = SolverParams::default();
    let mut good = 0;
    for seed in 0..10 {
        let mask = make_mask(8, 8, 50.0, seed).unwrap();
        let (plane, _) = solve_l1(&sample(&frame, &mask).unwrap(), &params).unwrap();
        let hit = (plane.coeffs[9] - 1.0).abs() <= 1e-2;
        let rest = plane.coeffs.iter().enumerate().all(|(i, c)| i == 9 || c.abs() < 1e-3);
        if hit && rest {
            good += 1;
        }
    }
    assert!(good >= 9, "{good}/10");
}

#[test]
fn full_mask_reproduces_the_frame() {
    let data: Vec<f64> = (0..256).map(|i| ((i * 37) % 101) as f64 / 100.0).collect();
    let frame = Frame::new(16, 16, data).unwrap();
    let mask = make_mask(16, 16, 100.0, 0).unwrap();
    let params = SolverParams {
        lambda: 1e-6,
        // continuation needs about 20 halvings of 50 steps to get down to 1e-6
        max_iters: 2000,
        enforce_data_consistency: false,
        ..SolverParams::default()
    };
    let (g, _) = reconstruct_frame(&sample(&frame, &mask).unwrap(), &params).unwrap();
    let worst = g
        .data()
        .iter()
        .zip(frame.data())
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    assert!(worst <= 1e-3, "{worst}");
}

#[test]
fn data_consistency_restores_measured_pixels_exactly() {
    let data: Vec<f64> = (0..400).map(|i| (i as f64 * 0.37).sin().abs()).collect();
    let frame = Frame::new(20, 20, data).unwrap();
    let mask = make_mask(20, 20, 15.0, 8).unwrap();
    let meas = sample(&frame, &mask).unwrap();
    let (g, _) = reconstruct_frame(&meas, &SolverParams::default()).unwrap();
    assert_eq!(sample(&g, &mask).unwrap().values, meas.values);
}

#[test]
fn objective_never_increases() {
    let data: Vec<f64> = (0..1024).map(|i| ((i % 32) as f64 / 31.0).powi(2)).collect();
    let frame = Frame::new(32, 32, data).unwrap();
    let mask = make_mask(32, 32, 10.0, 1).unwrap();
    let params = SolverParams {
        continuation: false,
        ..SolverParams::default()
    };
    let (_, report) = solve_l1(&sample(&frame, &mask).unwrap(), &params).unwrap();
    for w in report.objective_history.windows(2) {
        assert!(w[1] <= w[0] + 1e-9 * w[0].max(1.0));
    }
}

#[test]
fn registry_selects_by_name() {
    let reg = reconstructors();
    assert!(reg.names().contains(&"ista"));
    assert!(reg.names().contains(&"zero-fill"));
    assert_eq!(reg.create("zero-fill").unwrap().name(), "zero-fill");
    assert_eq!(reg.create("nope").err().unwrap().exit_code(), 2);
}

#[test]
fn l0_examples() {
    let a = DMatrix::<f64>::identity(4, 4);
    let s = l0_oracle(&[0.0, 2.0, 0.0, 0.0], &a, 2).unwrap();
    assert_eq!(s.support, vec![1]);
    assert!((s.x[1] - 2.0).abs() < 1e-12);
    let z = l0_oracle(&[0.0; 4], &a, 2).unwrap();
    assert!(z.support.is_empty());
    assert!(z.x.iter().all(|v| *v == 0.0));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn dct_preserves_inner_products(
        f in proptest::collection::vec(-1.0f64..1.0, 48),
        g in proptest::collection::vec(-1.0f64..1.0, 48),
    ) {
        let (a, b) = (Frame::new(8, 6, f.clone()).unwrap(), Frame::new(8, 6, g.clone()).unwrap());
        let (da, db) = (dct2(&a), dct2(&b));
        let lhs = dot(&da.coeffs, &db.coeffs);
        let rhs = dot(&f, &g);
        prop_assert!((lhs - rhs).abs() <= 1e-9 * rhs.abs().max(1.0));
        let back = idct2(&da);
        for (x, y) in back.data().iter().zip(&f) {
            prop_assert!((x - y).abs() < 1e-12);
        }
    }

    #[test]
    fn masked_operator_adjoint_identity(
        x in proptest::collection::vec(-1.0f64..1.0, 80),
        p in 5.0f64..100.0,
        seed in any::<u64>(),
    ) {
        let mask = make_mask(10, 8, p, seed).unwrap();
        let op = MaskedDct::new(&mask);
        let y: Vec<f64> = (0..op.rows()).map(|i| (i as f64 * 0.7).cos()).collect();
        let mut ax = vec![0.0; op.rows()];
        let mut aty = vec![0.0; op.cols()];
        op.apply(&x, &mut ax);
        op.adjoint(&y, &mut aty);
        prop_assert!((dot(&ax, &y) - dot(&x, &aty)).abs() < 1e-10);
    }
}
