use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use proptest::prelude::*;

use shadow_core::constructions::equalize_radii;
use shadow_core::coverage::{verify_exact_2d, verify_exact_3d, verify_monte_carlo};
use shadow_core::io::{load_instance, save_instance};
use shadow_core::{
    cap_of_ball, homothety_ball, line_margin, pairwise_disjoint, system_margin, Ball, ShadowInstance, Vector, Verdict,
};

fn vector(dim: usize, range: f64) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-range..range, dim).prop_map(Vector::from)
}

fn unit(dim: usize) -> impl Strategy<Value = Vector> {
    prop::collection::vec(-1.0..1.0f64, dim).prop_filter_map("zero vector", |v| Vector::from(v).normalized())
}

/// Ball seen from `x` along a random axis, at distance in [1, 3] and with
/// `radius / distance` in [0.05, 0.95].
fn ball_about(dim: usize) -> impl Strategy<Value = (Vector, f64, f64, bool)> {
    (unit(dim), 1.0..3.0f64, 0.05..0.95f64, any::<bool>())
}

fn instance(dim: usize, max_balls: usize) -> impl Strategy<Value = ShadowInstance> {
    (vector(dim, 2.0), prop::collection::vec(ball_about(dim), 1..=max_balls)).prop_map(|(x, specs)| {
        let balls = specs
            .into_iter()
            .map(|(u, dist, frac, closed)| Ball::new(&x + &(&u * dist), dist * frac, closed).unwrap())
            .collect();
        ShadowInstance::new(x, balls).unwrap()
    })
}

/// Many large caps, so a good share of instances shadow.
fn dense_instance() -> impl Strategy<Value = ShadowInstance> {
    (
        vector(3, 2.0),
        prop::collection::vec((unit(3), 1.0..3.0f64, 0.6..0.95f64, any::<bool>()), 6..=10),
    )
        .prop_map(|(x, specs)| {
            let balls = specs
                .into_iter()
                .map(|(u, dist, frac, closed)| Ball::new(&x + &(&u * dist), dist * frac, closed).unwrap())
                .collect();
            ShadowInstance::new(x, balls).unwrap()
        })
}

fn mixed_instance() -> impl Strategy<Value = ShadowInstance> {
    prop_oneof![instance(3, 7), dense_instance()]
}

fn orthogonal(dim: usize) -> impl Strategy<Value = DMatrix<f64>> {
    prop::collection::vec(-1.0..1.0f64, dim * dim).prop_filter_map("singular", move |v| {
        let m = DMatrix::from_vec(dim, dim, v);
        (m.determinant().abs() > 1e-3).then(|| m.qr().q())
    })
}

fn apply(q: &DMatrix<f64>, p: &Vector) -> Vector {
    let v = q * DVector::from_column_slice(p.coords());
    Vector::from(v.iter().copied().collect::<Vec<_>>())
}

/// Euclidean distance from `c` to the line through `x` with unit direction `d`.
fn distance_to_line(x: &Vector, d: &Vector, c: &Vector) -> f64 {
    let w = c - x;
    let t = w.dot(d);
    (&w - &(d * t)).norm()
}

proptest! {
    #[test]
    fn cap_is_invariant_under_homothety(
        dim in 2usize..7,
        seed in vector(7, 5.0),
        (u, dist, frac, closed) in ball_about(7),
        k in (-3.0..3.0f64).prop_map(|e| 10f64.powf(e)),
    ) {
        let x = Vector::from(seed.coords()[..dim].to_vec());
        let Some(u) = Vector::from(u.coords()[..dim].to_vec()).normalized() else { return Ok(()) };
        let b = Ball::new(&x + &(&u * dist), dist * frac, closed).unwrap();
        let before = cap_of_ball(&x, &b).unwrap();
        let after = cap_of_ball(&x, &homothety_ball(&x, &b, k).unwrap()).unwrap();
        prop_assert!((before.half_angle - after.half_angle).abs() <= 1e-12);
        prop_assert!(before.axis.distance(&after.axis) <= 1e-12);
        prop_assert_eq!(before.open, after.open);
    }

    #[test]
    fn positive_margin_iff_line_meets_ball(
        x in vector(4, 3.0),
        d in unit(4),
        (u, dist, frac, closed) in ball_about(4),
    ) {
        let b = Ball::new(&x + &(&u * dist), dist * frac, closed).unwrap();
        let m = line_margin(&x, &d, &b).unwrap();
        let gap = distance_to_line(&x, &d, b.center()) - b.radius();
        if gap.abs() > 1e-10 {
            prop_assert_eq!(m > 0.0, gap < 0.0, "margin {} gap {}", m, gap);
        }
    }

    #[test]
    fn margin_is_antipodally_symmetric(
        x in vector(5, 3.0),
        d in unit(5),
        (u, dist, frac, closed) in ball_about(5),
    ) {
        let b = Ball::new(&x + &(&u * dist), dist * frac, closed).unwrap();
        prop_assert_eq!(line_margin(&x, &d, &b).unwrap(), line_margin(&x, &-&d, &b).unwrap());
    }

    #[test]
    fn permuting_balls_permutes_margins(inst in instance(3, 6), d in unit(3), rot in 0usize..6) {
        let mut balls = inst.balls().to_vec();
        let n = balls.len();
        balls.rotate_left(rot % n);
        let permuted = inst.with_balls(balls).unwrap();
        let a = system_margin(&inst, &d).unwrap();
        let b = system_margin(&permuted, &d).unwrap();
        for (i, (_, m)) in a.per_ball.iter().enumerate() {
            let j = (i + n - rot % n) % n;
            prop_assert_eq!(*m, b.per_ball[j].1);
        }
        prop_assert_eq!(a.best_margin, b.best_margin);
    }

    #[test]
    fn documents_round_trip(inst in instance(4, 5)) {
        prop_assert_eq!(load_instance(&save_instance(&inst)).unwrap(), inst);
    }
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 10_000,
        max_global_rejects: 100_000,
        ..ProptestConfig::default()
    })]

    /// Two disjoint balls centered on a common sphere about `x`, radii below
    /// the sphere radius; the smaller one scaled by at least as much as the
    /// larger stays disjoint from it.
    #[test]
    fn homothety_preserves_disjointness_on_a_common_sphere(
        dim in 2usize..6,
        x in vector(5, 2.0),
        u1 in unit(5),
        u2 in unit(5),
        sphere_r in 0.5..3.0f64,
        f1 in 0.01..0.99f64,
        f2 in 0.01..1.0f64,
        k1 in 0.01..3.0f64,
        extra in 0.0..3.0f64,
        closed in any::<bool>(),
    ) {
        let x = Vector::from(x.coords()[..dim].to_vec());
        let (Some(u1), Some(u2)) = (
            Vector::from(u1.coords()[..dim].to_vec()).normalized(),
            Vector::from(u2.coords()[..dim].to_vec()).normalized(),
        ) else { return Ok(()) };
        let r1 = f1 * sphere_r;
        let r2 = f2 * r1;
        let b1 = Ball::new(&x + &(&u1 * sphere_r), r1, closed).unwrap();
        let b2 = Ball::new(&x + &(&u2 * sphere_r), r2, closed).unwrap();
        let pair = ShadowInstance::new(x.clone(), vec![b1.clone(), b2.clone()]).unwrap();
        prop_assume!(pairwise_disjoint(&pair).is_empty());
        let k2 = k1 + extra;
        let images = vec![homothety_ball(&x, &b1, k1).unwrap(), homothety_ball(&x, &b2, k2).unwrap()];
        prop_assert!(pairwise_disjoint(&pair.with_balls(images).unwrap()).is_empty());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn exact_3d_verdict_is_rotation_invariant(inst in mixed_instance(), q in orthogonal(3)) {
        let a = verify_exact_3d(&inst).unwrap();
        prop_assume!(a.worst_margin.abs() > 1e-7);
        let rotated = inst.transformed(1.0, |p| apply(&q, p)).unwrap();
        let b = verify_exact_3d(&rotated).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!((a.worst_margin - b.worst_margin).abs() <= 1e-9, "{} vs {}", a.worst_margin, b.worst_margin);
    }

    #[test]
    fn exact_2d_verdict_is_rotation_invariant(inst in instance(2, 4), q in orthogonal(2)) {
        let a = verify_exact_2d(&inst).unwrap();
        prop_assume!(a.worst_margin.abs() > 1e-7);
        let rotated = inst.transformed(1.0, |p| apply(&q, p)).unwrap();
        let b = verify_exact_2d(&rotated).unwrap();
        prop_assert_eq!(a.verdict, b.verdict);
        prop_assert!((a.worst_margin - b.worst_margin).abs() <= 1e-9);
    }

    #[test]
    fn exact_2d_witness_is_uncovered(inst in instance(2, 4)) {
        let r = verify_exact_2d(&inst).unwrap();
        if r.verdict == Verdict::NoShadow {
            let w = r.witness.unwrap();
            prop_assert!(system_margin(&inst, &w).unwrap().best_margin <= 1e-12);
        }
    }

    #[test]
    fn growing_a_ball_never_loses_the_shadow(inst in dense_instance(), pick in 0usize..10, grow in 1.0..1.5f64) {
        let before = verify_exact_3d(&inst).unwrap();
        prop_assume!(before.verdict == Verdict::Shadow && !before.tolerance_critical);
        let i = pick % inst.balls().len();
        let mut balls = inst.balls().to_vec();
        let b = &balls[i];
        let dist = b.center().distance(inst.point());
        let radius = (b.radius() * grow).min(0.99 * dist);
        balls[i] = Ball::new(b.center().clone(), radius, b.is_closed()).unwrap();
        let after = verify_exact_3d(&inst.with_balls(balls).unwrap()).unwrap();
        prop_assert_eq!(after.verdict, Verdict::Shadow);
        prop_assert!(after.worst_margin >= before.worst_margin - 1e-12);
    }

    #[test]
    fn equalization_keeps_every_margin(inst in instance(3, 5), d in unit(3)) {
        let open: Vec<Ball> = inst.balls().iter().map(|b| Ball::open(b.center().clone(), b.radius()).unwrap()).collect();
        let inst = inst.with_balls(open).unwrap();
        // collisions are possible off a common sphere; margins are kept either way
        if let Ok(eq) = equalize_radii(&inst) {
            let a = system_margin(&inst, &d).unwrap();
            let b = system_margin(&eq, &d).unwrap();
            for ((_, m0), (_, m1)) in a.per_ball.iter().zip(&b.per_ball) {
                prop_assert!((m0 - m1).abs() <= 1e-12);
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn monte_carlo_never_contradicts_exact_3d(inst in mixed_instance(), seed in any::<u64>()) {
        let exact = verify_exact_3d(&inst).unwrap();
        let mc = verify_monte_carlo(&inst, 20_000, seed).unwrap();
        if exact.verdict == Verdict::Shadow {
            prop_assert_eq!(mc.uncovered_count, Some(0));
        }
        if mc.verdict == Verdict::NoShadow {
            prop_assert_eq!(exact.verdict, Verdict::NoShadow);
        }
        prop_assert!(mc.worst_margin >= exact.worst_margin - 1e-9);
    }
}

#[test]
fn single_cap_gap_is_complement_of_arc() {
    // sanity anchor for the generators: one ball at half-angle α leaves π − 2α
    let alpha: f64 = 0.3;
    let inst = ShadowInstance::new(Vector::zeros(2), vec![Ball::open([1.0, 0.0], alpha.sin()).unwrap()]).unwrap();
    let r = verify_exact_2d(&inst).unwrap();
    assert!((r.worst_margin + 0.5 * (PI - 2.0 * alpha)).abs() < 1e-12);
}
