use std::f64::consts::PI;

use hcalc::grids::PvRule;
use hcalc::numlin::{c, C64};
use hcalc::representations::{
    laplace_multiplier, poisson_factorization_residual, reconstruct, singular_cauchy, singular_grid, LaplaceParams, ReprMethod,
};
use hcalc::sqfun::line_grid;
use hcalc::strip_calc::HolFn;
use proptest::prelude::*;

fn lorentz() -> HolFn {
    HolFn::strip("1/(4+z^2)", 2.0, |z| 1.0 / (4.0 + z * z)).bounded()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn poisson_factors_recombine(omega in 0.3f64..2.0, ratio in 1.05f64..3.0) {
        let g = line_grid(20.0, 0.1).unwrap();
        prop_assert!(poisson_factorization_residual(omega, ratio * omega, &g).unwrap() < 1e-10);
    }

    #[test]
    fn gauss_cauchy_at_random_points(x in -3.0f64..3.0, y in -0.7f64..0.7) {
        let r = reconstruct(&ReprMethod::gauss_cauchy(1.0), &lorentz(), &[c(x, y)]).unwrap();
        prop_assert!(r.max_error < 1e-8);
    }
}

#[test]
fn laplace_bound_respected() {
    let p = LaplaceParams::new(1.0, 1.0);
    let taus: Vec<f64> = (0..40).map(|k| 10f64.powf(-3.0 + 0.1 * k as f64)).collect();
    for u in [
        HolFn::sector("1/(1+z)", PI, |z| 1.0 / (1.0 + z)),
        HolFn::sector("z^2/(1+z)^3", PI, |z| z * z / ((1.0 + z) * (1.0 + z) * (1.0 + z))),
        HolFn::sector("z/(1+z)^2", PI, |z| z / ((1.0 + z) * (1.0 + z))),
    ] {
        let r = reconstruct(&ReprMethod::Laplace(p.clone()), &u, &[c(1.0, 0.0)]).unwrap();
        let mp = r.multiplier.unwrap();
        assert!(mp.sup <= mp.bound * (1.0 + 1e-6), "{}: {} > {}", u.label(), mp.sup, mp.bound);
        let m = laplace_multiplier(&p, &u, &taus).unwrap();
        assert!(m.iter().all(|v| v.is_finite()));
    }
    let narrow = HolFn::sector("exp(-z)", PI / 2.0, |z| (-z).exp());
    assert!(reconstruct(&ReprMethod::Laplace(p), &narrow, &[c(1.0, 0.0)]).is_err());
}

#[test]
fn skip_rule_is_first_order() {
    let pts = [c(0.2, 0.1), c(0.0, 0.0), c(-0.5, 0.3), c(1.0, -0.4), c(0.0, 0.3)];
    let f = HolFn::strip("exp(-z^2)", f64::INFINITY, |z: C64| (-z * z).exp());
    let coarse = singular_cauchy(&f, &singular_grid(1.0, 60.0, 0.1).unwrap(), &pts, 5.0, PvRule::Skip).unwrap();
    let fine = singular_cauchy(&f, &singular_grid(1.0, 60.0, 0.05).unwrap(), &pts, 5.0, PvRule::Skip).unwrap();
    let corrected = singular_cauchy(&f, &singular_grid(1.0, 60.0, 0.05).unwrap(), &pts, 5.0, PvRule::Corrected).unwrap();
    assert!(corrected.residual < fine.residual);
    let ratio = coarse.residual / fine.residual;
    assert!((1.6..2.5).contains(&ratio), "ratio {ratio}");
}
