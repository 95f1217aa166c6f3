//! Convergence diagnostics for all four families at |n| <= 10^4: terminal
//! distances to the claimed limit points, line-fit intercepts, and the
//! side the cosine sequences approach from.

use std::time::Instant;
use ushape_core::analysis::{convergence_study, side_of_approach, Side};
use ushape_core::big::PrecisionContext;
use ushape_core::families::Family;

fn main() {
    let ctx = PrecisionContext::default();
    for f in Family::ALL {
        let t0 = Instant::now();
        let limit = f.claimed_limit(&ctx);
        let rep = convergence_study(f, 10_000, &limit, &ctx).unwrap();
        let first = rep.samples.first().unwrap();
        let last = rep.samples.last().unwrap();
        let a_dist = rep.distance_fit.intercept.to_f64();
        let a_cos = rep.cos_fit.intercept.to_f64();
        let side = match f.claimed_cos_limit(&ctx) {
            Some(t) => match side_of_approach(&rep, &t) {
                Side::FromBelow => "below",
                Side::FromAbove => "above",
                Side::Mixed => "mixed",
            },
            None => "n/a",
        };
        println!(
            "{:<18} members={:<5} d_first={:.5} d_last={:.6} A_dist={:+.5} A_cos={:+.6} cos_first={:+.5} cos_last={:+.6} side={} [{:.1?}]",
            f.tag(),
            rep.samples.len(),
            first.distance.to_f64(),
            last.distance.to_f64(),
            a_dist,
            a_cos,
            first.cos_theta.to_f64(),
            last.cos_theta.to_f64(),
            side,
            t0.elapsed()
        );
    }
}
