//! Acceptance checks, run without the test harness so every criterion's
//! PASS/FAIL line is printed. Exits nonzero if any criterion fails.

use std::time::{Duration, Instant};

use hensel_rewrite::algebra::PolyShape;
use hensel_rewrite::convert::shift_system;
use hensel_rewrite::generators::power_sums;
use hensel_rewrite::lifting::lift_with_trace;
use hensel_rewrite::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type P = QPolynomial;
type Outcome = std::result::Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn q(n: i64, d: i64) -> Rational {
    Rational::new(n.into(), d.into())
}

fn z(n: i64) -> Rational {
    q(n, 1)
}

fn ms(d: Duration) -> String {
    format!("{:.1} ms", d.as_secs_f64() * 1e3)
}

fn check(cond: bool, msg: impl FnOnce() -> String) -> std::result::Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn xs(n: usize) -> Vec<P> {
    (0..n).map(|i| P::var(n, i, &RationalField)).collect()
}

fn random_rational<R: Rng>(rng: &mut R) -> Rational {
    let num = rng.gen_range(1..=9) * if rng.gen_bool(0.5) { -1 } else { 1 };
    q(num, rng.gen_range(1..=5))
}

/// Random polynomial in `n` variables of total degree at most `max_deg`
/// whose monomials have weighted degree at most `max_weighted`.
fn random_poly<R: Rng>(rng: &mut R, weights: &[u32], max_deg: u32, max_weighted: u32, terms: usize) -> P {
    let n = weights.len();
    let candidates: Vec<Monomial> = monomials_up_to_degree(n, max_deg)
        .into_iter()
        .filter(|m| m.exponents().iter().zip(weights).map(|(e, w)| e * w).sum::<u32>() <= max_weighted)
        .collect();
    loop {
        let p = P::from_terms(
            n,
            &RationalField,
            (0..terms).map(|_| (candidates[rng.gen_range(0..candidates.len())].clone(), random_rational(rng))),
        );
        if !p.is_zero() {
            return p;
        }
    }
}

fn families(max_n: usize) -> Vec<GeneratorFamily> {
    let names = [
        "elem:1", "elem:2", "elem:3", "elem:4", "psum:1", "psum:2", "psum:3", "psum:4", "hyper:1", "hyper:2",
        "hyper:3", "hyper:4", "prodsym:1,1", "prodsym:2,1", "prodsym:1,3", "prodsym:2,2", "prodsym:1,1,2", "d3",
    ];
    names
        .iter()
        .map(|s| s.parse::<GeneratorFamily>().unwrap())
        .filter(|f| f.num_vars() <= max_n)
        .collect()
}

/// Cap on `deg(g(u))` so the lifting degree stays within budget.
fn weighted_cap(n: usize) -> u32 {
    match n {
        1 | 2 => 12,
        3 => 8,
        _ => 6,
    }
}

struct Instance {
    family: GeneratorFamily,
    u: Vec<P>,
    g: P,
    f: P,
}

fn round_trip_instances(count: usize, seed: u64) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let fams = families(4);
    (0..count)
        .map(|_| {
            let family = fams[rng.gen_range(0..fams.len())].clone();
            let u: Vec<P> = family.generators(&RationalField);
            let cap = weighted_cap(u.len());
            let terms = rng.gen_range(1..=4);
            let g = random_poly(&mut rng, &family.degrees(), 6, cap, terms);
            let f = g.compose(&u).unwrap();
            Instance { family, u, g, f }
        })
        .collect()
}

fn criterion_1() -> Outcome {
    let u = power_sums::<Rational>(3, &RationalField);
    let x = xs(3);
    let cases = [
        (&(&(&x[0] * &x[1]) * &x[2]) + &P::constant(3, z(2)), "1/6*e1^3 - 1/2*e1*e2 + 1/3*e3 + 2"),
        (&(&(&x[0].pow(2) + &x[1].pow(2)) + &x[2].pow(2)) - &P::constant(3, z(6)), "e2 - 6"),
        (&(&(&x[0] + &x[1]) + &x[2]) - &P::constant(3, z(2)), "e1 - 2"),
    ];
    let names = var_names("e", 3);
    let mut slowest = Duration::ZERO;
    for (f, expected) in cases {
        let t = Instant::now();
        let res = convert_polynomial(&ConvertRequest::new(u.clone(), f)).map_err(|e| e.to_string())?;
        let dt = t.elapsed();
        slowest = slowest.max(dt);
        let got = res.f_new.render(&names);
        check(got == expected, || format!("got {got}, expected {expected}"))?;
        check(dt < Duration::from_secs(1), || format!("{expected} took {}", ms(dt)))?;
    }
    Ok(format!("3 targets exact, slowest {}", ms(slowest)))
}

fn criterion_2() -> Outcome {
    let u = power_sums::<Rational>(3, &RationalField);
    let x = xs(3);
    let f = &(&u[2] - &(&(&x[0] * &x[1]) * &x[2]).scale(&z(2))) - &u[0];
    let t = Instant::now();
    let req = ConvertRequest::new(u, f).forced_point(vec![z(4), z(6), z(0)]);
    let res = convert_polynomial(&req).map_err(|e| e.to_string())?;
    let dt = t.elapsed();
    let names = var_names("e", 3);
    check(res.c == [z(10), z(52), z(280)], || format!("c = {:?}", res.c))?;
    let bar = res.bar_f_new.render(&names);
    check(bar == "-1/3*e1^3 - 10*e1^2 + e1*e2 - 49*e1 + 10*e2 + 1/3*e3 + 270", || format!("bar_f_new = {bar}"))?;
    let fnew = res.f_new.render(&names);
    check(fnew == "-1/3*e1^3 + e1*e2 - e1 + 1/3*e3", || format!("f_new = {fnew}"))?;
    check(dt < Duration::from_secs(1), || format!("took {}", ms(dt)))?;
    Ok(format!("c, bar_f_new and f_new exact in {}", ms(dt)))
}

fn criterion_3() -> Outcome {
    let v = |i| P::var(4, i, &RationalField);
    let h1 = &(&(&v(0) + &v(1)) - &v(2)) - &P::constant(4, z(2));
    let h2 = &(&(&v(0).pow(2) + &v(1).pow(2)) - &v(3)) - &P::constant(4, z(10));
    let t = Instant::now();
    let prob = LiftProblem::new(QSlp::from_polynomials(&[h1, h2]).unwrap(), vec![z(-1), z(3)], 2)
        .map_err(|e| e.to_string())?;
    let sol = lift(&prob).map_err(|e| e.to_string())?;
    let dt = t.elapsed();
    let monos = [[0, 0], [1, 0], [0, 1], [2, 0], [1, 1], [0, 2]];
    let expected = [
        [z(-1), q(3, 4), q(-1, 8), q(5, 64), q(-1, 64), q(1, 256)],
        [z(3), q(1, 4), q(1, 8), q(-5, 64), q(1, 64), q(-1, 256)],
    ];
    let mut matched = 0;
    for (vi, row) in sol.iter().zip(&expected) {
        for (m, c) in monos.iter().zip(row) {
            let got = vi.coeff(&Monomial::from_exponents(m));
            check(got == *c, || format!("coefficient of {m:?}: {got} != {c}"))?;
            matched += 1;
        }
        check(vi.terms().count() == 6, || "unexpected extra terms".into())?;
    }
    check(dt < Duration::from_millis(100), || format!("took {}", ms(dt)))?;
    Ok(format!("{matched}/12 coefficients exact in {}", ms(dt)))
}

fn criterion_4() -> Outcome {
    let instances = round_trip_instances(100, 4);
    let t = Instant::now();
    let mut max_deg = 0;
    for (i, inst) in instances.iter().enumerate() {
        let req = ConvertRequest::new(inst.u.clone(), inst.f.clone()).seed(i as u64);
        let res = convert_polynomial(&req).map_err(|e| format!("trial {i} ({}): {e}", inst.family))?;
        check(res.f_new == inst.g, || {
            format!("trial {i} ({}): got {}, expected {}", inst.family, res.f_new, inst.g)
        })?;
        max_deg = max_deg.max(inst.f.total_degree());
    }
    let dt = t.elapsed();
    check(dt < Duration::from_secs(60), || format!("took {:.1} s", dt.as_secs_f64()))?;
    Ok(format!("100/100 exact, deg f up to {max_deg}, {:.1} s total", dt.as_secs_f64()))
}

fn criterion_5() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let fams = families(3);
    for i in 0..25 {
        let family = &fams[rng.gen_range(0..fams.len())];
        let u: Vec<P> = family.generators(&RationalField);
        let terms = rng.gen_range(1..=4);
        let g = random_poly(&mut rng, &family.degrees(), 4, 4, terms);
        let f = g.compose(&u).unwrap();
        let lifted = convert_polynomial(&ConvertRequest::new(u.clone(), f.clone()).seed(i))
            .map_err(|e| format!("instance {i}: {e}"))?
            .f_new;
        let interp = interpolate_fnew(&u, &f, &mut rng, 20).map_err(|e| format!("instance {i}: {e}"))?;
        check(lifted == interp, || format!("instance {i} ({family}): {lifted} vs {interp}"))?;
    }
    Ok("25/25 instances agree".into())
}

fn criterion_6() -> Outcome {
    let u = power_sums::<Rational>(3, &RationalField);
    let prog = QSlp::from_polynomials(&u).unwrap();
    let sys = shift_system(&prog, &[z(10), z(52), z(280)]).map_err(|e| e.to_string())?;
    let prob = LiftProblem::new(sys.clone(), vec![z(4), z(6), z(0)], 8).map_err(|e| e.to_string())?;
    let trace = lift_with_trace(&prob).map_err(|e| e.to_string())?;
    check(trace.doubling_steps() == 3, || format!("{} steps at delta 8", trace.doubling_steps()))?;
    for (k, v) in trace.steps.iter().enumerate() {
        let bound = (1u32 << (k + 1)).min(8);
        for (i, r) in prob.residual(v, 8).map_err(|e| e.to_string())?.iter().enumerate() {
            check(r.order().is_none_or(|o| o > bound), || {
                format!("step {}: residual {} has a term of degree {:?}", k + 1, i + 1, r.order())
            })?;
        }
    }
    for delta in 2..=9u32 {
        let p = LiftProblem::new(sys.clone(), vec![z(4), z(6), z(0)], delta).map_err(|e| e.to_string())?;
        let steps = lift_with_trace(&p).map_err(|e| e.to_string())?.doubling_steps();
        let expected = (delta as f64).log2().ceil() as usize;
        check(steps == expected, || format!("delta {delta}: {steps} steps, expected {expected}"))?;
    }
    let jac0 = Matrix::new(
        3,
        3,
        &RationalField,
        prog.jacobian(3).unwrap().eval(&RationalField, &[z(4), z(6), z(0)]).unwrap(),
    )
    .unwrap();
    check(prob.constant_jacobian_inverse() == &jac0.inverse().unwrap(), || "cached inverse differs".into())?;
    Ok("residual orders exceed 2, 4, 8 after steps 1..3; step count = ceil(log2 delta) for delta 2..9".into())
}

fn criterion_7() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst_ratio: f64 = 0.0;
    for i in 0..100 {
        let n = rng.gen_range(1..=4);
        let terms = rng.gen_range(1..=8);
        let p = random_poly(&mut rng, &vec![1; n], 5, 5, terms);
        let prog = QSlp::from_polynomials(std::slice::from_ref(&p)).unwrap();
        let grad = prog.gradient().map_err(|e| e.to_string())?;
        let shape = PolyShape { num_vars: n, ctx: RationalField };
        let got = grad.eval(&shape, &xs(n)).map_err(|e| e.to_string())?;
        for (j, g) in got.iter().enumerate() {
            let want = p.partial_derivative(j);
            check(*g == want, || format!("poly {i}, d/dx{}: {g} vs {want}", j + 1))?;
        }
        check(grad.len() <= 5 * prog.len() + 2 * n + 4, || {
            format!("poly {i}: gradient length {} for program length {}", grad.len(), prog.len())
        })?;
        worst_ratio = worst_ratio.max(grad.len() as f64 / prog.len().max(1) as f64);
    }
    Ok(format!("100/100 exact, gradient length at most {worst_ratio:.2} L"))
}

fn criterion_8() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..20 {
        let n = rng.gen_range(1..=4);
        let terms = rng.gen_range(1..=6);
        let f = random_poly(&mut rng, &vec![1; n], 5, 5, terms);
        let res = convert_polynomial(&ConvertRequest::new(xs(n), f.clone()).seed(i)).map_err(|e| e.to_string())?;
        check(res.f_new == f, || format!("instance {i}: {} vs {f}", res.f_new))?;
        let renamed = f.render(&var_names("e", n));
        check(res.f_new.render_with_prefix("e") == renamed, || format!("instance {i}: rendering"))?;
    }
    Ok("20/20 identical after renaming".into())
}

fn criterion_9() -> Outcome {
    let instances = round_trip_instances(100, 4);
    let mut differing_c = 0;
    let checked = 25;
    for (i, inst) in instances.iter().take(checked).enumerate() {
        let base = ConvertRequest::new(inst.u.clone(), inst.f.clone());
        let run = |seed: u64| convert_polynomial(&base.clone().seed(seed)).map_err(|e| format!("instance {i}: {e}"));
        let (a, a_again, b) = (run(100 + i as u64)?, run(100 + i as u64)?, run(200 + i as u64)?);
        check(a == a_again, || format!("instance {i}: same seed gave different results"))?;
        check(a.f_new == b.f_new, || format!("instance {i}: f_new depends on the seed"))?;
        if a.c != b.c {
            differing_c += 1;
        }
    }
    check(differing_c * 10 >= checked * 9, || format!("only {differing_c}/{checked} shifts differ"))?;
    Ok(format!(
        "{checked} round-trip instances: same seed bit-identical, f_new seed-independent, c differs in {differing_c}/{checked}"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("symmetric system rewrites", criterion_1),
        ("forced-point rewrite", criterion_2),
        ("two-variable lift", criterion_3),
        ("round trip", criterion_4),
        ("oracle equivalence", criterion_5),
        ("residual doubling", criterion_6),
        ("gradient correctness", criterion_7),
        ("identity family", criterion_8),
        ("seed determinism and point independence", criterion_9),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        match f() {
            Ok(detail) => println!("criterion {} ({name}): PASS - {detail}", i + 1),
            Err(detail) => {
                println!("criterion {} ({name}): FAIL - {detail}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
