use cdist::condition::{
    condition_event, constant, discrete_posterior, gaussian_noise, obs_dens, posterior_bounds,
    BndDens,
};
use cdist::exactreal::rational::{int, rat, to_f64};
use cdist::measure::{measure_bounds, measure_mc, DiscreteMeasure, OpenSet};
use cdist::sampler::{std_geometric, std_uniform, BitTape, Fuel, Sampler};
use cdist::{CReal, Error, LazyNat, Rational};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

fn simpson<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, n: usize) -> f64 {
    let h = (b - a) / n as f64;
    let mut s = f(a) + f(b);
    for i in 1..n {
        s += f(a + i as f64 * h) * if i % 2 == 1 { 4.0 } else { 2.0 };
    }
    s * h / 3.0
}

fn gauss(u: f64, y: f64) -> f64 {
    (-(y - u).powi(2) / 2.0).exp() / (2.0 * std::f64::consts::PI).sqrt()
}

fn gaussian_example() -> BndDens<CReal> {
    gaussian_noise(&int(1))
        .unwrap()
        .with_bound(rat(2, 5))
        .unwrap()
}

#[test]
fn gaussian_posterior_mean_matches_quadrature() {
    let y = 0.5;
    let oracle =
        simpson(|u| u * gauss(u, y), 0.0, 1.0, 1000) / simpson(|u| gauss(u, y), 0.0, 1.0, 1000);
    let post = obs_dens(
        &std_uniform(),
        &gaussian_example(),
        &CReal::from_rational(rat(1, 2)),
        Fuel::default(),
    );
    let n = 10_000u64;
    let sum: f64 = (0..n)
        .into_par_iter()
        .map(|i| to_f64(&post.run(&BitTape::prng(i)).unwrap().approx(20).unwrap()))
        .sum();
    let mean = sum / n as f64;
    assert!(
        (mean - oracle).abs() < 0.03,
        "mean {mean} vs oracle {oracle}"
    );
    assert!((0.47..=0.53).contains(&mean));
}

#[test]
fn gaussian_posterior_bounds_bracket_half() {
    let u = OpenSet::interval(int(0), rat(1, 2)).unwrap();
    let b = posterior_bounds(
        &std_uniform(),
        &gaussian_example(),
        &CReal::from_rational(rat(1, 2)),
        &u,
        12,
        10,
    )
    .unwrap();
    assert!(b.contains(&rat(1, 2)), "{b:?}");
    assert!(b.width() <= rat(15, 100), "width {}", to_f64(&b.width()));
}

#[test]
fn constant_density_posterior_is_prior() {
    let u = OpenSet::interval(int(0), rat(1, 2)).unwrap();
    let d = constant::<CReal>(&int(1)).unwrap();
    let post = posterior_bounds(&std_uniform(), &d, &CReal::from_int(0), &u, 10, 9).unwrap();
    let prior = measure_bounds(&std_uniform(), &u, 10, 9).unwrap();
    assert!(post.contains(&rat(1, 2)));
    assert!(post.lower <= prior.lower && prior.upper <= post.upper + rat(1, 100));
}

#[test]
fn full_space_posterior_brackets_one() {
    let all = OpenSet::reals();
    let b = posterior_bounds(
        &std_uniform(),
        &gaussian_example(),
        &CReal::from_int(0),
        &all,
        10,
        8,
    )
    .unwrap();
    assert_eq!(b.upper, int(1));
    assert!(b.lower > rat(9, 10));
}

#[test]
fn acceptance_is_scale_invariant() {
    let d = gaussian_example();
    let y = CReal::from_rational(rat(3, 10));
    let a = obs_dens(&std_uniform(), &d, &y, Fuel::default());
    for c in [rat(1, 7), rat(5, 2), int(1000)] {
        let b = obs_dens(&std_uniform(), &d.scaled(&c).unwrap(), &y, Fuel::default());
        for seed in 0..200 {
            let t = BitTape::prng(seed);
            let (x, z) = (a.run(&t).unwrap(), b.run(&t).unwrap());
            assert_eq!(
                x.approx(16).unwrap(),
                z.approx(16).unwrap(),
                "c={c} seed={seed}"
            );
        }
    }
}

#[test]
fn posterior_bounds_bracket_rejection_estimate() {
    let y = CReal::from_rational(rat(9, 10));
    let d = gaussian_example();
    for (lo, hi) in [
        (rat(0, 1), rat(1, 2)),
        (rat(1, 4), rat(3, 4)),
        (rat(3, 5), int(1)),
    ] {
        let set = OpenSet::interval(lo, hi).unwrap();
        let cert = posterior_bounds(&std_uniform(), &d, &y, &set, 10, 8).unwrap();
        let post = obs_dens(&std_uniform(), &d, &y, Fuel::default());
        let mc = measure_mc(&post, &set, 4000, 17, 12, &rat(1, 1000)).unwrap();
        assert!(
            mc.lower <= cert.upper && cert.lower <= mc.upper,
            "{cert:?} vs {mc:?}"
        );
    }
}

#[test]
fn event_conditioning_uniform_half() {
    let half = OpenSet::interval(int(0), rat(1, 2)).unwrap();
    let s = condition_event(&std_uniform(), &half, Fuel::default());
    let quarter = OpenSet::interval(int(0), rat(1, 4)).unwrap();
    let b = measure_mc(&s, &quarter, 10_000, 3, 12, &rat(1, 1000)).unwrap();
    assert!(b.contains(&rat(1, 2)), "{b:?}");
}

#[test]
fn event_conditioning_full_measure_is_identity() {
    let s = condition_event(
        &std_uniform(),
        &OpenSet::interval(int(0), int(1)).unwrap(),
        Fuel::default(),
    );
    for seed in 0..50 {
        let t = BitTape::prng(seed);
        let x = s.run(&t).unwrap();
        let direct = std_uniform().run(&t.split().0).unwrap();
        assert_eq!(x.approx(10).unwrap(), direct.approx(10).unwrap());
    }
}

#[test]
fn event_conditioning_geometric() {
    let s = condition_event(&std_geometric(), &OpenSet::nats([1, 2]), Fuel::default());
    let one = measure_mc(&s, &OpenSet::nats([1]), 10_000, 5, 0, &rat(1, 1000)).unwrap();
    let two = measure_mc(&s, &OpenSet::nats([2]), 10_000, 5, 0, &rat(1, 1000)).unwrap();
    assert!(one.contains(&rat(2, 3)), "{one:?}");
    assert!(two.contains(&rat(1, 3)), "{two:?}");
}

#[test]
fn impossible_event_diverges() {
    let s = condition_event(
        &std_uniform(),
        &OpenSet::interval(int(2), int(3)).unwrap(),
        Fuel::uniform(10),
    );
    assert!(matches!(s.run(&BitTape::prng(0)), Err(Error::Diverged(_))));
}

/// A prior on `{0, .., 2^b - 1}` reading `b` bits, each value with mass `2^-b`.
fn bits_prior(b: u32) -> Sampler<LazyNat> {
    Sampler::new(move |t| {
        let mut v = 0u64;
        for i in 0..b {
            v = 2 * v + t.read(i as u64)? as u64;
        }
        Ok(LazyNat::new(v))
    })
}

#[test]
fn discrete_rejection_matches_bayes_rule() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for _ in 0..5 {
        let weights: Vec<Rational> = (0..4).map(|_| rat(rng.gen_range(1..=8), 8)).collect();
        let w = weights.clone();
        let d = BndDens::<LazyNat>::new(
            "table",
            move |x: &LazyNat, _y: &CReal| {
                CReal::from_rational(w[x.force().unwrap() as usize].clone())
            },
            int(1),
            int(0),
        )
        .unwrap();
        let prior = DiscreteMeasure::new((0..4u64).map(|v| (v, rat(1, 4)))).unwrap();
        let exact = discrete_posterior(&prior, |v| weights[*v as usize].clone()).unwrap();
        let post = obs_dens(&bits_prior(2), &d, &CReal::from_int(0), Fuel::default());
        for v in 0..4u64 {
            let b = measure_bounds(&post, &OpenSet::nats([v]), 16, 0).unwrap();
            assert!(
                b.contains(&exact.mass(&v)),
                "v={v}: {b:?} vs {}",
                exact.mass(&v)
            );
        }
    }
}
