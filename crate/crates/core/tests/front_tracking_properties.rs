use fluxstab::evolution::{front_tracking_gap, ft_evolve, semigroup_l1_diff, FrontTrackingState};
use fluxstab::scalar::{PiecewiseLinearFlux, ScalarFlux};
use fluxstab::{l1_distance, Interval, PiecewiseConstantFn};
use proptest::prelude::*;

fn k() -> Interval {
    Interval::new(-1.0, 1.0).unwrap()
}

fn arb_flux() -> impl Strategy<Value = PiecewiseLinearFlux> {
    prop::collection::vec(-0.5f64..0.5, 3..12).prop_map(|vals| {
        let nodes = k().linspace(vals.len());
        PiecewiseLinearFlux::new("random", nodes, vals).unwrap()
    })
}

/// Data whose values are node indices of an `n`-node flux on `[-1, 1]`.
fn arb_datum(n_max: usize) -> impl Strategy<Value = (Vec<f64>, Vec<usize>)> {
    (1usize..8).prop_flat_map(move |m| {
        (
            prop::collection::vec(-2.0f64..2.0, m),
            prop::collection::vec(0..n_max, m + 1),
        )
    })
}

fn build(f: &PiecewiseLinearFlux, (mut xs, idx): (Vec<f64>, Vec<usize>)) -> PiecewiseConstantFn {
    xs.sort_by(f64::total_cmp);
    xs.dedup();
    let nodes = f.nodes();
    let vals = idx.iter().take(xs.len() + 1).map(|&i| nodes[i % nodes.len()]).collect();
    PiecewiseConstantFn::scalar(xs, vals).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn l1_contraction(f in arb_flux(), du in arb_datum(12), dv in arb_datum(12), t in 0.05f64..3.0) {
        let u = build(&f, du);
        let mut v = build(&f, dv);
        let vals: Vec<f64> = {
            let mut w: Vec<f64> = v.values().map(|x| x[0]).collect();
            w[0] = u.left_tail()[0];
            *w.last_mut().unwrap() = u.right_tail()[0];
            w
        };
        v = PiecewiseConstantFn::scalar(v.breakpoints().to_vec(), vals).unwrap();
        let w = f.lambda_hat() * t + 3.0;
        let before = l1_distance(&u, &v, -w, w).unwrap();
        let after = l1_distance(&ft_evolve(&f, &u, t).unwrap().profile(), &ft_evolve(&f, &v, t).unwrap().profile(), -w, w).unwrap();
        prop_assert!(after <= before + 1e-10, "{after} > {before}");
    }

    #[test]
    fn tv_nonincreasing_and_mass_balance(f in arb_flux(), du in arb_datum(12), t in 0.05f64..3.0) {
        let u = build(&f, du);
        let mut s = FrontTrackingState::new(&f, &u).unwrap();
        s.advance(&f, t).unwrap();
        s.check_invariants(&f).unwrap();
        for w in s.tv_history().windows(2) {
            prop_assert!(w[1].1 <= w[0].1 + 1e-12);
        }
        let p = s.profile();
        prop_assert!(p.total_variation(None) <= u.total_variation(None) + 1e-10);
        let w = f.lambda_hat() * t + 3.0;
        let (ul, ur) = (u.left_tail()[0], u.right_tail()[0]);
        let expected = u.integral(-w, w)[0] + t * (f.eval(ul) - f.eval(ur));
        prop_assert!((p.integral(-w, w)[0] - expected).abs() <= 1e-10);
    }

    #[test]
    fn semigroup_property(f in arb_flux(), du in arb_datum(12), t1 in 0.05f64..1.5, t2 in 0.05f64..1.5) {
        let u = build(&f, du);
        let direct = ft_evolve(&f, &u, t1 + t2).unwrap().profile();
        let mid = ft_evolve(&f, &u, t1).unwrap().profile();
        let composed = ft_evolve(&f, &mid, t2).unwrap().profile();
        let w = f.lambda_hat() * (t1 + t2) + 3.0;
        prop_assert!(l1_distance(&direct, &composed, -w, w).unwrap() <= 1e-9);
    }
}

#[test]
fn shift_pair_gap_is_linear_in_time_and_eps() {
    let f = PiecewiseLinearFlux::sample(&ScalarFlux::burgers(k()), 257).unwrap();
    let u0 = PiecewiseConstantFn::scalar(vec![-0.5, 0.5], vec![0.0, 0.8, 0.0]).unwrap();
    let base = semigroup_l1_diff(&f, &f.with_linear_term(0.01).unwrap(), &u0, 0.5).unwrap();
    assert!(base > 0.0);
    for (eps, t) in [(0.02, 0.5), (0.01, 1.0), (0.03, 0.25)] {
        let gap = semigroup_l1_diff(&f, &f.with_linear_term(eps).unwrap(), &u0, t).unwrap();
        let expect = base * (eps * t) / 0.005;
        assert!((gap - expect).abs() < 1e-9 * expect.max(1.0), "{eps} {t}: {gap} vs {expect}");
    }
}

#[test]
fn front_tracking_converges_to_lax_oleinik() {
    let k01 = Interval::new(0.0, 1.0).unwrap();
    let burgers = ScalarFlux::burgers(k01);
    let u0 = PiecewiseConstantFn::scalar(vec![-0.5, 0.5], vec![0.0, 1.0, 0.0]).unwrap();
    let gaps: Vec<f64> = [33, 65, 129]
        .iter()
        .map(|&n| front_tracking_gap(&burgers, &PiecewiseLinearFlux::sample(&burgers, n).unwrap(), &u0, 1.0).unwrap())
        .collect();
    // the staircase error of a unit fan with step h is h / 4 per unit width
    for (g, n) in gaps.iter().zip([33.0, 65.0, 129.0]) {
        let h = 1.0 / (n - 1.0);
        assert!((g - h / 4.0).abs() < 0.05 * h, "{g} vs {}", h / 4.0);
    }
}
