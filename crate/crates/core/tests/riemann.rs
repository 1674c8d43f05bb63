mod common;

use cnslab::riemann::{sample, solve_riemann, RiemannData, WaveKind, WaveStructure};
use cnslab::{GammaLawEos, PointState};
use common::{bisection_riemann, Gas};
use proptest::prelude::*;

fn solve(gamma: f64, l: (f64, f64), r: (f64, f64)) -> WaveStructure {
    let eos = GammaLawEos::new(gamma).unwrap();
    solve_riemann(
        &eos,
        &RiemannData {
            left: PointState::new(l.0, l.1),
            right: PointState::new(r.0, r.1),
        },
    )
    .unwrap()
}

/// Jump defect of the mass and momentum fluxes across a discontinuity moving at `s`.
fn rh_defect(gas: Gas, a: (f64, f64), b: (f64, f64), s: f64) -> f64 {
    let f = |(r, u): (f64, f64)| [r * u, r * u * u + gas.p(r)];
    let (fa, fb) = (f(a), f(b));
    let d0 = s * (b.0 - a.0) - (fb[0] - fa[0]);
    let d1 = s * (b.0 * b.1 - a.0 * a.1) - (fb[1] - fa[1]);
    d0.abs().max(d1.abs())
}

#[test]
fn sod_star_state_matches_bisection() {
    let w = solve(2.0, (1.0, 0.0), (0.125, 0.0));
    let o = bisection_riemann(Gas { gamma: 2.0 }, (1.0, 0.0), (0.125, 0.0));
    assert!((w.star_rho - o.star_rho).abs() < 1e-12, "{} vs {}", w.star_rho, o.star_rho);
    assert!((w.star_u - o.star_u).abs() < 1e-12);
    assert_eq!(w.wave1.kind, WaveKind::Rarefaction);
    assert_eq!(w.wave2.kind, WaveKind::Shock);
}

#[test]
fn sampled_profiles_match_the_oracle_sampler() {
    for (g, l, r) in [
        (2.0, (1.0, 0.0), (0.125, 0.0)),
        (1.4, (0.4, 1.5), (1.0, -0.5)),
        (5.0 / 3.0, (2.0, -0.3), (0.7, 0.9)),
        (3.0, (1.0, -0.1), (1.0, 0.1)),
        (2.0, (1.0, -2.5), (0.5, 2.5)),
    ] {
        let eos = GammaLawEos::new(g).unwrap();
        let w = solve(g, l, r);
        let o = bisection_riemann(Gas { gamma: g }, l, r);
        for k in -400..=400 {
            let xi = k as f64 * 0.01;
            let a = sample(&eos, &w, xi);
            let b = o.sample(xi);
            // away from discontinuities the two must agree closely
            if (a.rho - b.0).abs() > 1e-9 {
                let near_jump = [w.wave1, w.wave2]
                    .iter()
                    .any(|wv| wv.kind == WaveKind::Shock && (xi - wv.lo).abs() < 1e-9);
                assert!(near_jump, "gamma={g} xi={xi}: {} vs {}", a.rho, b.0);
            }
            if b.0 > 0.0 {
                assert!((a.u - b.1).abs() < 1e-9, "gamma={g} xi={xi}: u {} vs {}", a.u, b.1);
            }
        }
    }
}

#[test]
fn vacuum_threshold_is_approached_continuously() {
    // gamma = 2, rho = 1 on both sides: vacuum once u_R - u_L >= 2
    let gap = |du: f64| solve(2.0, (1.0, -0.5 * du), (1.0, 0.5 * du));
    let below = gap(2.0 - 1e-6);
    assert!(below.star_rho > 0.0 && below.star_rho < 1e-10);
    let at = gap(2.0);
    assert!(at.star_rho == 0.0 && at.has_vacuum());
    let above = gap(2.0 + 1e-6);
    assert!(above.star_rho == 0.0 && above.has_vacuum());
    let mid = sample(&GammaLawEos::new(2.0).unwrap(), &above, 0.0);
    assert_eq!(mid.rho, 0.0);
}

#[test]
fn nonpositive_densities_are_rejected() {
    let eos = GammaLawEos::new(2.0).unwrap();
    for (rl, rr) in [(0.0, 1.0), (1.0, -1.0), (f64::NAN, 1.0)] {
        let data = RiemannData {
            left: PointState::new(rl, 0.0),
            right: PointState::new(rr, 0.0),
        };
        assert!(solve_riemann(&eos, &data).is_err());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn shocks_satisfy_jump_conditions(
        g in prop::sample::select(vec![1.4, 5.0 / 3.0, 2.0, 3.0]),
        rl in 0.1f64..4.0, rr in 0.1f64..4.0, ul in -2.0f64..2.0, ur in -2.0f64..2.0,
    ) {
        let gas = Gas { gamma: g };
        let w = solve(g, (rl, ul), (rr, ur));
        let star = (w.star_rho, w.star_u);
        if w.wave1.kind == WaveKind::Shock {
            prop_assert!(rh_defect(gas, (rl, ul), star, w.wave1.lo) <= 1e-10);
        }
        if w.wave2.kind == WaveKind::Shock {
            prop_assert!(rh_defect(gas, star, (rr, ur), w.wave2.lo) <= 1e-10);
        }
    }

    #[test]
    fn rarefactions_preserve_their_riemann_invariant(
        g in prop::sample::select(vec![1.4, 2.0, 3.0, 4.0]),
        rl in 0.1f64..4.0, rr in 0.1f64..4.0, ul in -2.0f64..2.0, ur in -2.0f64..2.0,
    ) {
        let eos = GammaLawEos::new(g).unwrap();
        let th = eos.theta();
        let w = solve(g, (rl, ul), (rr, ur));
        if w.wave1.kind != WaveKind::Shock {
            let inv = ul + rl.powf(th);
            for k in 0..=20 {
                let xi = w.wave1.lo + (w.wave1.hi - w.wave1.lo) * k as f64 / 20.0;
                let s = sample(&eos, &w, xi);
                // velocity carries no information at vacuum
                if s.rho == 0.0 {
                    continue;
                }
                prop_assert!((s.u + s.rho.powf(th) - inv).abs() <= 1e-10 * (1.0 + inv.abs()));
            }
        }
        if w.wave2.kind != WaveKind::Shock {
            let inv = ur - rr.powf(th);
            for k in 0..=20 {
                let xi = w.wave2.lo + (w.wave2.hi - w.wave2.lo) * k as f64 / 20.0;
                let s = sample(&eos, &w, xi);
                if s.rho == 0.0 {
                    continue;
                }
                prop_assert!((s.u - s.rho.powf(th) - inv).abs() <= 1e-10 * (1.0 + inv.abs()));
            }
        }
    }

    #[test]
    fn galilean_shift_moves_every_wave(
        rl in 0.1f64..4.0, rr in 0.1f64..4.0, ul in -1.0f64..1.0, ur in -1.0f64..1.0, v in -2.0f64..2.0,
    ) {
        let a = solve(2.0, (rl, ul), (rr, ur));
        let b = solve(2.0, (rl, ul + v), (rr, ur + v));
        prop_assert!((a.star_rho - b.star_rho).abs() <= 1e-12 * (1.0 + a.star_rho));
        if !a.has_vacuum() {
            prop_assert!((a.star_u + v - b.star_u).abs() <= 1e-12 * (1.0 + a.star_u.abs() + v.abs()));
        }
        prop_assert!((a.wave1.lo + v - b.wave1.lo).abs() <= 1e-12 * (1.0 + v.abs() + a.wave1.lo.abs()));
        prop_assert!((a.wave2.hi + v - b.wave2.hi).abs() <= 1e-12 * (1.0 + v.abs() + a.wave2.hi.abs()));
    }

    #[test]
    fn newton_agrees_with_bisection(
        g in prop::sample::select(vec![1.4, 5.0 / 3.0, 2.0, 3.0, 4.0]),
        rl in 0.05f64..4.0, rr in 0.05f64..4.0, ul in -1.5f64..1.5, ur in -1.5f64..1.5,
    ) {
        let w = solve(g, (rl, ul), (rr, ur));
        let o = bisection_riemann(Gas { gamma: g }, (rl, ul), (rr, ur));
        prop_assert_eq!(w.has_vacuum(), o.vacuum);
        if !o.vacuum {
            prop_assert!((w.star_rho - o.star_rho).abs() <= 1e-10 * (1.0 + o.star_rho));
            prop_assert!((w.star_u - o.star_u).abs() <= 1e-10 * (1.0 + o.star_u.abs()));
        }
    }
}
