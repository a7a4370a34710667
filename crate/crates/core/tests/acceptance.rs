//! Acceptance criteria, one PASS/FAIL line each.

use std::time::{Duration, Instant};

use num_bigint::BigUint;
use num_complex::Complex64;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestCaseError, TestRunner};
use rand::{Rng, SeedableRng};

use torcov::covering::{
    construct_cover, exact_value_2d, exact_value_3d, lower_bound_recurrence,
    lower_bound_unit_fraction, search_minimal_cover, verify_cover, CubeCover, SearchOptions, Side,
};
use torcov::fractional::{lp_fractional_cover, uniform_measure_certificate};
use torcov::polydisc::{light_source_number, light_source_side};
use torcov::torus::{cyclic_order, oriented_distance, rational, scale, TorusPoint, UnitRational};
use torcov::zonoid::{
    complex_real_identity_check, summand_extraction, support_function, Atom, DiscreteZonoid,
    Quadrature,
};
use torcov::zonotope::{
    candidate, complex_illuminating_set, complex_v1, exact_max_modulus, find_witness,
    fractional_measure, min_enclosing_circle, proof_witness, random_canonical,
    real_illuminating_set, verify_illumination, CanonicalZonotope,
};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn within(elapsed: Duration, limit: Duration, what: &str) -> Result<(), String> {
    ensure(elapsed < limit, || {
        format!("{what} took {elapsed:?}, limit {limit:?}")
    })
}

fn polydisc_closed_forms() -> Check {
    let start = Instant::now();
    for k in 1..=16usize {
        let mut out = Vec::new();
        let code = torcov::cli::run_with(
            ["torcov", "polydisc", "ill", "--n", &k.to_string()],
            &mut std::io::empty(),
            &mut out,
            &mut Vec::new(),
        );
        let expected = format!(
            "classical={} fractional={}\n",
            (1u64 << (k + 1)) - 1,
            1u64 << k
        );
        let got = String::from_utf8_lossy(&out);
        ensure(code == 0 && got == expected, || {
            format!("n={k}: got {got:?}")
        })?;
    }
    within(start.elapsed(), Duration::from_secs(1), "k = 1..16")?;
    Ok(format!("k=1..16 in {:?}", start.elapsed()))
}

fn cover_construction() -> Check {
    let mut detail = Vec::new();
    for (n, m) in [(1, 2), (1, 3), (2, 2), (2, 3), (2, 4), (3, 2), (3, 3)] {
        let start = Instant::now();
        let cover = construct_cover(n, m).map_err(|e| e.to_string())?;
        let cert = verify_cover(&cover).map_err(|e| e.to_string())?;
        let expected = (m.pow(n as u32 + 1) - 1) / (m - 1);
        ensure(cert.is_covered(), || format!("({n},{m}) not covered"))?;
        ensure(cover.len() as u64 == expected, || {
            format!("({n},{m}) has {} cubes", cover.len())
        })?;
        within(
            start.elapsed(),
            Duration::from_secs(10),
            &format!("({n},{m})"),
        )?;
        detail.push(format!("({n},{m})={expected}"));
    }
    Ok(format!(
        "{} exact certificates; (4,2) not run",
        detail.join(" ")
    ))
}

fn boltyanski_martini() -> Check {
    let bases = (0..7)
        .map(|k| TorusPoint::new(vec![UnitRational::new(k, 3), UnitRational::new(k, 7)]))
        .collect();
    let cover = CubeCover::new(2, Side::exact(rational(1, 2)).unwrap(), bases).unwrap();
    let cert = verify_cover(&cover).map_err(|e| e.to_string())?;
    ensure(!cert.is_covered(), || "cover accepted".into())?;
    let point = TorusPoint::new(vec![UnitRational::new(5, 6), UnitRational::new(3, 14)]);
    ensure(cover.contains(&point) == Some(false), || {
        "(5/6, 3/14) is covered".into()
    })?;
    let witness = match &cert.verdict {
        torcov::covering::Verdict::Uncovered(w) => w.to_string(),
        torcov::covering::Verdict::Covered => unreachable!(),
    };
    Ok(format!(
        "rejected with witness {witness}; (5/6,3/14) uncovered"
    ))
}

fn recurrence_concordance() -> Check {
    let mut rng = rand::rngs::StdRng::seed_from_u64(4);
    for _ in 0..500 {
        let q: i64 = rng.gen_range(2..2000);
        let p: i64 = rng.gen_range(1..q);
        let eps = rational(p, q);
        let (a, b) = (lower_bound_recurrence(2, &eps), exact_value_2d(&eps));
        ensure(a == b, || format!("eps={p}/{q}: {a} vs {b}"))?;
    }
    for n in 1..=6usize {
        for m in 2..=6u64 {
            let closed = BigUint::from((m.pow(n as u32 + 1) - 1) / (m - 1));
            let rec = lower_bound_recurrence(n, &rational(1, m as i64));
            ensure(
                rec == closed && lower_bound_unit_fraction(n, m) == closed,
                || format!("n={n} m={m}: {rec} vs {closed}"),
            )?;
        }
    }
    Ok("500 random eps in dimension 2; n,m <= 6".into())
}

fn three_dimensional_table() -> Check {
    let r = |p: i64, q: i64| rational(p, q);
    let inv = |x: BigRational| x.recip();
    let m = |k: i64| BigRational::from_integer(k.into());
    // (sample, low, high, value): the interval bounds are the table's own
    let cases: Vec<(BigRational, BigRational, BigRational, u64)> = vec![
        (r(4, 5), r(3, 4), r(1, 1), 4),
        (r(7, 10), r(2, 3), r(3, 4), 5),
        (r(31, 50), r(3, 5), r(2, 3), 7),
        (r(11, 20), r(1, 2), r(3, 5), 8),
        (r(1, 2), inv(m(2) + inv(m(7))), r(1, 2), 15),
        (r(49, 100), inv(m(2) + inv(m(7))), r(1, 2), 15),
        (r(33, 100), inv(m(3) + inv(m(13))), r(1, 3), 40),
        (r(34, 100), r(1, 3), inv(m(3) - inv(m(8))), 27),
        (r(252, 1000), r(1, 4), inv(m(4) - inv(m(15))), 64),
    ];
    let mut seen = Vec::new();
    for (eps, low, high, value) in cases {
        ensure(eps > low && eps <= high, || {
            format!("sample {eps} outside its interval")
        })?;
        let (got, _) = exact_value_3d(&eps).map_err(|e| e.to_string())?;
        ensure(got == BigUint::from(value), || {
            format!("eps={eps}: {got} vs {value}")
        })?;
        seen.push(format!("{eps}->{value}"));
    }
    ensure(exact_value_3d(&r(45, 100)).is_err(), || {
        "0.45 should not be tabulated".into()
    })?;
    Ok(seen.join(" "))
}

fn minimal_cover_search() -> Check {
    let start = Instant::now();
    let opts = SearchOptions {
        node_budget: 1_000_000,
    };
    let plane = search_minimal_cover(2, &rational(1, 2), 14, &opts).map_err(|e| e.to_string())?;
    let circle = search_minimal_cover(1, &rational(1, 2), 6, &opts).map_err(|e| e.to_string())?;
    ensure(plane.cover.len() == 7 && plane.is_exact, || {
        format!("plane: {}", plane.cover.len())
    })?;
    ensure(circle.cover.len() == 3 && circle.is_exact, || {
        format!("circle: {}", circle.cover.len())
    })?;
    within(start.elapsed(), Duration::from_secs(60), "search")?;
    Ok(format!(
        "7 ({} nodes) and 3 ({} nodes) in {:?}",
        plane.nodes,
        circle.nodes,
        start.elapsed()
    ))
}

fn fractional_values() -> Check {
    let half = rational(1, 2);
    for n in 1..=3usize {
        let target = f64::from(1u32 << n);
        for k in [4, 6, 8] {
            let rep = lp_fractional_cover(n, &half, k).map_err(|e| e.to_string())?;
            ensure(
                (rep.primal_value - target).abs() < 1e-6 && (rep.dual_value - target).abs() < 1e-6,
                || format!("n={n} k={k}: {} / {}", rep.primal_value, rep.dual_value),
            )?;
        }
        let cert = uniform_measure_certificate(n, &half, 7).map_err(|e| e.to_string())?;
        ensure(cert.passes(), || {
            format!("uniform certificate fails for n={n}")
        })?;
    }
    Ok("LP = 2^n for n<=3, k in {4,6,8}; uniform measure exact".into())
}

fn light_sources() -> Check {
    let side = light_source_side(2.0).map_err(|e| e.to_string())?;
    ensure((side - 1.0 / 3.0).abs() < 1e-12, || {
        format!("eps_2 = {side}")
    })?;
    for n in 1..=5usize {
        let v = light_source_number(n, 2.0).map_err(|e| e.to_string())?;
        let expected = BigUint::from((3u64.pow(n as u32 + 1) - 1) / 2);
        ensure(v.exact() == Some(&expected), || {
            format!("n={n}: [{}, {}] vs {expected}", v.lower, v.upper)
        })?;
    }
    Ok("eps_2 = 1/3, counts (3^{n+1}-1)/2 for n<=5".into())
}

fn real_zonotopes() -> Check {
    let start = Instant::now();
    let mut rng = rand::rngs::StdRng::seed_from_u64(9);
    let mut witnesses = 0;
    for i in 0..50 {
        let n = 2 + i % 3;
        let k: CanonicalZonotope<BigRational> = random_canonical(n, &mut rng);
        let dirs = real_illuminating_set(&k).map_err(|e| e.to_string())?;
        ensure(dirs.len() == 3 << (n - 2), || {
            format!("size {}", dirs.len())
        })?;
        for rank in 0..1u64 << (n + 1) {
            let x = candidate::<BigRational>(rank, n + 1, 0).point;
            let (_, w) = proof_witness(&k, &x).map_err(|e| e.to_string())?;
            let v = &dirs[w.direction];
            ensure(w.revalidate(&x, v, k.lambda()), || {
                format!("witness fails at {x:?}")
            })?;
            ensure(exact_max_modulus(&w) <= rational(5, 6), || {
                "modulus above 5/6".into()
            })?;
            // the witness is an actual point: Σ y_j a_j = Σ x_j a_j + Σ v_j a_j
            let lhs = k.vector_of(&w.coefficients);
            let shifted: Vec<BigRational> = x.iter().zip(v).map(|(a, b)| a + b).collect();
            ensure(lhs == k.vector_of(&shifted), || {
                "witness vector mismatch".into()
            })?;
            witnesses += 1;
        }
    }
    within(start.elapsed(), Duration::from_secs(30), "50 zonotopes")?;
    Ok(format!(
        "{witnesses} exact witnesses in {:?}",
        start.elapsed()
    ))
}

fn complex_zonotopes() -> Check {
    let start = Instant::now();
    let mut rng = rand::rngs::StdRng::seed_from_u64(10);
    let mut candidates = 0;
    for i in 0..20 {
        let n = 2 + i % 2;
        let k: CanonicalZonotope<Complex64> = random_canonical(n, &mut rng);
        let dirs = complex_illuminating_set(&k).map_err(|e| e.to_string())?;
        ensure(dirs.len() == (1 << (n + 1)) - 2, || {
            format!("size {}", dirs.len())
        })?;
        let report = verify_illumination(&k, &dirs, 24).map_err(|e| e.to_string())?;
        ensure(report.passes(), || {
            format!("zonotope {i}: fails at {:?}", report.first_failure)
        })?;
        candidates += report.candidates;
        let v1 = complex_v1(&k).map_err(|e| e.to_string())?;
        let report = verify_illumination(&k, &v1, 24).map_err(|e| e.to_string())?;
        let fail = report.first_failure.ok_or("V_1 alone passes")?;
        ensure((fail.index[n - 1] + 12) % 24 == fail.index[n], || {
            format!(
                "zonotope {i}: V_1 failure {:?} has x_n != -x_(n+1)",
                fail.index
            )
        })?;
    }
    within(start.elapsed(), Duration::from_secs(300), "20 zonotopes")?;
    Ok(format!(
        "{candidates} candidates in {:?}; V_1 alone fails at x_n = -x_(n+1)",
        start.elapsed()
    ))
}

fn fractional_zonotopes() -> Check {
    let mut rng = rand::rngs::StdRng::seed_from_u64(12);
    let mut worst = 1.0f64;
    for n in 2..=4usize {
        let k: CanonicalZonotope<Complex64> = random_canonical(n, &mut rng);
        let m = fractional_measure(&k).map_err(|e| e.to_string())?;
        ensure(
            m.total_mass() == 3 << (n - 2) && m.total_mass() < 1 << n,
            || format!("n={n}: mass {}", m.total_mass()),
        )?;
        for _ in 0..100 {
            let rank = rng.gen_range(0..24u64.pow(n as u32 + 1));
            let x = candidate::<Complex64>(rank, n + 1, 24).point;
            let cov = m.theta_coverage(&k, &x, 48);
            ensure(cov.fraction() >= 0.95, || {
                format!("n={n}: coverage {cov:?}")
            })?;
            worst = worst.min(cov.fraction());
        }
    }
    Ok(format!(
        "masses 3, 6, 12; worst angle coverage {worst:.3} over 300 samples"
    ))
}

fn random_vector<R: Rng>(n: usize, rng: &mut R) -> Vec<Complex64> {
    (0..n)
        .map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)))
        .collect()
}

fn normalize(v: Vec<Complex64>) -> Vec<Complex64> {
    let s = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|z| z / s).collect()
}

fn zonoid_identity() -> Check {
    let mut rng = rand::rngs::StdRng::seed_from_u64(13);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let (x, y) = (random_vector(3, &mut rng), random_vector(3, &mut rng));
        let c = complex_real_identity_check(&x, &y, 4096, Quadrature::SplitSimpson);
        worst = worst.max(c.error);
    }
    ensure(worst < 1e-6, || format!("max error {worst:e}"))?;
    let n = 2;
    let centers: Vec<Vec<Complex64>> = (0..=n)
        .map(|_| normalize(random_vector(n, &mut rng)))
        .collect();
    let exact_atoms = centers
        .iter()
        .map(|c| Atom {
            point: c.clone(),
            weight: rng.gen_range(0.5..2.0),
        })
        .collect();
    let z = DiscreteZonoid::new(n, exact_atoms).map_err(|e| e.to_string())?;
    let delta = 1e-2 * (n + 1) as f64;
    let x = summand_extraction(&z, &centers, delta, 10_000).map_err(|e| e.to_string())?;
    ensure(x.hausdorff_estimate == 0.0, || {
        format!("zero width: {}", x.hausdorff_estimate)
    })?;
    let mut atoms = Vec::new();
    for c in &centers {
        for _ in 0..5 {
            let p: Vec<Complex64> = c
                .iter()
                .zip(random_vector(n, &mut rng))
                .map(|(a, b)| a + b * 1e-3)
                .collect();
            atoms.push(Atom {
                point: normalize(p),
                weight: rng.gen_range(0.5..2.0),
            });
        }
    }
    let z = DiscreteZonoid::new(n, atoms).map_err(|e| e.to_string())?;
    let x = summand_extraction(&z, &centers, delta, 10_000).map_err(|e| e.to_string())?;
    ensure(x.within_delta() && x.summand_ok, || {
        format!(
            "perturbed: {} (summand {})",
            x.hausdorff_estimate, x.summand_ok
        )
    })?;
    Ok(format!(
        "identity error {worst:.1e}; estimates 0 and {:.1e} < {delta}",
        x.hausdorff_estimate
    ))
}

fn runner(seed: u8) -> TestRunner {
    let config = Config {
        cases: 1000,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(
        config,
        proptest::test_runner::TestRng::from_seed(
            proptest::test_runner::RngAlgorithm::ChaCha,
            &[seed; 32],
        ),
    )
}

fn unit_rational() -> impl Strategy<Value = UnitRational> {
    (1i64..=1000)
        .prop_flat_map(|q| (0..q, Just(q)))
        .prop_map(|(p, q)| UnitRational::new(p, q))
}

fn prop_fail(msg: String) -> TestCaseError {
    TestCaseError::fail(msg)
}

fn property_suites() -> Check {
    let mut names = Vec::new();
    let mut run = |name: &str, result: Result<(), String>| -> Result<(), String> {
        result.map_err(|e| format!("{name}: {e}"))?;
        names.push(name.to_string());
        Ok(())
    };

    run(
        "complement",
        runner(1)
            .run(&(unit_rational(), unit_rational()), |(a, b)| {
                let s =
                    oriented_distance(&a, &b).into_inner() + oriented_distance(&b, &a).into_inner();
                let expected = if a == b {
                    BigRational::zero()
                } else {
                    BigRational::one()
                };
                prop_assert_eq!(s, expected);
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;

    run(
        "telescoping",
        runner(2)
            .run(&proptest::collection::vec(unit_rational(), 1..12), |pts| {
                let ordered = cyclic_order(&pts);
                for i in 0..ordered.len() {
                    let mut sum = BigRational::zero();
                    for j in i + 1..ordered.len() {
                        sum += oriented_distance(&ordered[j - 1], &ordered[j]).into_inner();
                        let direct = oriented_distance(&ordered[i], &ordered[j]).into_inner();
                        if direct != sum {
                            return Err(prop_fail(format!("{i}..{j}: {direct} vs {sum}")));
                        }
                    }
                }
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;

    run(
        "scaling",
        runner(3)
            .run(&(1u64..=20, unit_rational(), 0i64..1000), |(k, a, t)| {
                // d(a, b) = t / (1000 k) < 1/k
                let d = rational(t, 1000 * k as i64);
                let b = a.shift(&d);
                prop_assert_eq!(oriented_distance(&a, &b).into_inner(), d.clone());
                let scaled = oriented_distance(&scale(k, &a), &scale(k, &b)).into_inner();
                prop_assert_eq!(scaled, d * BigRational::from_integer((k as i64).into()));
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;

    let point = (-10.0f64..10.0, -10.0f64..10.0).prop_map(|(x, y)| Complex64::new(x, y));
    run(
        "mec-monotone",
        runner(4)
            .run(
                &(
                    proptest::collection::vec(point.clone(), 1..20),
                    point,
                    any::<prop::sample::Index>(),
                ),
                |(pts, extra, cut)| {
                    let base = min_enclosing_circle(&pts).unwrap();
                    for p in &pts {
                        prop_assert!((p - base.center).norm() <= base.radius + 1e-9);
                    }
                    let mut more = pts.clone();
                    more.push(extra);
                    let bigger = min_enclosing_circle(&more).unwrap();
                    prop_assert!(base.radius <= bigger.radius + 1e-9);
                    let sub = &pts[..=cut.index(pts.len())];
                    prop_assert!(min_enclosing_circle(sub).unwrap().radius <= base.radius + 1e-9);
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    )?;

    run(
        "witness-revalidation",
        runner(5)
            .run(
                &(any::<u64>(), 2usize..=3, any::<u64>(), any::<bool>()),
                |(seed, n, rank, real)| {
                    let mut rng = rand::rngs::StdRng::seed_from_u64(seed);
                    if real {
                        let k: CanonicalZonotope<BigRational> = random_canonical(n, &mut rng);
                        let dirs = real_illuminating_set(&k).unwrap();
                        let x = candidate::<BigRational>(rank % (1 << (n + 1)), n + 1, 0).point;
                        let w = find_witness(&x, &dirs, k.lambda())
                            .ok_or_else(|| prop_fail("no witness".into()))?;
                        prop_assert!(w.revalidate(&x, &dirs[w.direction], k.lambda()));
                    } else {
                        let k: CanonicalZonotope<Complex64> = random_canonical(n, &mut rng);
                        let dirs = complex_illuminating_set(&k).unwrap();
                        let x =
                            candidate::<Complex64>(rank % 24u64.pow(n as u32 + 1), n + 1, 24).point;
                        let w = find_witness(&x, &dirs, k.lambda())
                            .ok_or_else(|| prop_fail("no witness".into()))?;
                        prop_assert!(w.revalidate(&x, &dirs[w.direction], k.lambda()));
                    }
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    )?;

    let cvec = |n: usize| {
        proptest::collection::vec(
            (-1.0f64..1.0, -1.0f64..1.0).prop_map(|(a, b)| Complex64::new(a, b)),
            n,
        )
    };
    run(
        "support-sublinear-rotation",
        runner(6)
            .run(
                &(
                    proptest::collection::vec((cvec(3), 0.1f64..2.0), 1..8),
                    cvec(3),
                    cvec(3),
                    0.0f64..std::f64::consts::TAU,
                ),
                |(raw, a, b, t)| {
                    let atoms: Vec<Atom> = raw
                        .into_iter()
                        .filter(|(v, _)| v.iter().any(|z| z.norm() > 1e-3))
                        .map(|(v, weight)| Atom {
                            point: normalize(v),
                            weight,
                        })
                        .collect();
                    let z = DiscreteZonoid::new(3, atoms).map_err(|e| prop_fail(e.to_string()))?;
                    let sum: Vec<Complex64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                    let (ha, hb) = (support_function(&z, &a), support_function(&z, &b));
                    prop_assert!(support_function(&z, &sum) <= ha + hb + 1e-9);
                    let rot: Vec<Complex64> = a
                        .iter()
                        .map(|x| x * Complex64::from_polar(1.0, t))
                        .collect();
                    prop_assert!((support_function(&z, &rot) - ha).abs() <= 1e-9 * (1.0 + ha));
                    Ok(())
                },
            )
            .map_err(|e| e.to_string()),
    )?;
    Ok(format!("{} x 1000 cases", names.join(", ")))
}

fn main() {
    let criteria: [(&str, fn() -> Check); 13] = [
        ("polydisc closed forms", polydisc_closed_forms),
        ("cover construction and certification", cover_construction),
        ("Boltyanski-Martini regression", boltyanski_martini),
        ("recurrence and formula concordance", recurrence_concordance),
        ("three-dimensional table", three_dimensional_table),
        ("minimal-cover search", minimal_cover_search),
        ("fractional covering", fractional_values),
        ("light sources", light_sources),
        ("real zonotope construction", real_zonotopes),
        ("complex zonotope construction", complex_zonotopes),
        ("fractional zonotope measure", fractional_zonotopes),
        ("zonoid identity and summand extraction", zonoid_identity),
        ("property suites", property_suites),
    ];
    let mut failed = 0;
    for (i, (name, check)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = std::panic::catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let secs = start.elapsed().as_secs_f64();
        match result {
            Ok(detail) => println!("criterion {:>2} PASS {name} [{secs:.2}s]: {detail}", i + 1),
            Err(reason) => {
                failed += 1;
                println!("criterion {:>2} FAIL {name} [{secs:.2}s]: {reason}", i + 1);
            }
        }
    }
    println!(
        "acceptance: {} passed, {failed} failed",
        criteria.len() - failed
    );
    if failed > 0 {
        std::process::exit(1);
    }
}
