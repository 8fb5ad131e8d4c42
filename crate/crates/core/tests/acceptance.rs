//! One line per acceptance criterion. Runs without the test harness so the lines always print.

mod common;

use std::time::{Duration, Instant};

use common::{finite_shapes, shape, two_parts};
use multiholo::gamma::{
    f_value, theta, verify_correspondence, CheckStatus, CorrespondenceOptions, CHECK_NAMES,
};
use multiholo::group::{Element, GroupShape, Torsion2Vector};
use multiholo::oracle::{
    compute_h_and_t, full_symmetric_normalizer, FiniteGroup, OracleConfig, DEFAULT_HOL_LIMIT,
};
use multiholo::ring::{
    brute_enumerate_tables, circle_invariant_factors, enumerate_rings, h_rings, RingStructure,
    DEFAULT_BRUTE_LIMIT,
};
use multiholo::{classify, CaseLabel};
use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const C1_RUNTIME: Duration = Duration::from_secs(1);
const C3_RUNTIME: Duration = Duration::from_secs(5 * 60);
const C4_RUNTIME: Duration = Duration::from_secs(60);
/// Largest order for criteria 3 and 5, and for the finite instantiation in criterion 7.
const ORACLE_MAX_ORDER: u64 = 32;
const PROPERTY_MAX_ORDER: u64 = 64;
const SYM_MAX_ORDER: u64 = 8;
const RANDOM_TRIALS: usize = 128;
const RANDOM_SEED: u64 = 0x0ac7;
/// Free coordinates of random elements are drawn from `-FREE_RANGE..=FREE_RANGE`.
const FREE_RANGE: i64 = 1 << 20;

type Outcome = Result<String, String>;

fn criterion_1() -> Outcome {
    let start = Instant::now();
    let mut count = 0;
    for rank in 0..=3 {
        for two in two_parts(4, 4) {
            let s = GroupShape::new(rank, two, vec![]).unwrap();
            let report = classify(&s);
            if ![1, 2, 4].contains(&report.t_order) || !report.is_consistent() {
                return Err(format!(
                    "{s}: t_order {} with case {}",
                    report.t_order, report.case
                ));
            }
            count += 1;
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= C1_RUNTIME {
        return Err(format!("{count} shapes took {elapsed:?}"));
    }
    Ok(format!("{count} shapes in {elapsed:?}"))
}

fn criterion_2() -> Outcome {
    let table = [
        ("Z8", 2),
        ("Z16", 2),
        ("Z4", 1),
        ("Z2", 1),
        ("Z4 x Z2", 2),
        ("Z4 x Z4", 1),
        ("Z8 x Z8", 2),
        ("Z16 x Z2", 4),
        ("Z8 x Z2 x Z2", 2),
        ("Z^1", 1),
        ("Z^1 x Z2", 2),
        ("Z^1 x Z4", 4),
        ("Z^1 x Z4 x Z4", 2),
        ("Z^2 x Z8", 2),
        ("Z^3 x Z8", 1),
        ("Z8 x Z3", 2),
    ];
    for (d, expected) in table {
        let report = classify(&shape(d));
        if report.t_order != expected || !report.is_consistent() {
            return Err(format!(
                "{d}: expected {expected}, got {} ({})",
                report.t_order, report.case
            ));
        }
    }
    let e = classify(&shape("Z8 x Z2 x Z2")).case;
    if e != CaseLabel::T2HomogTail {
        return Err(format!("Z8 x Z2 x Z2 labelled {e}"));
    }
    Ok(format!("{} spot values", table.len()))
}

fn criterion_3() -> Outcome {
    let start = Instant::now();
    let cfg = OracleConfig::default();
    let shapes = finite_shapes(ORACLE_MAX_ORDER);
    for s in &shapes {
        let report = compute_h_and_t(s, &cfg).map_err(|e| format!("{s}: {e}"))?;
        let t = classify(s).t_order;
        let rings = enumerate_rings(s, true)
            .map_err(|e| format!("{s}: {e}"))?
            .len();
        if report.h_count != t || report.k_count != rings {
            return Err(format!(
                "{s}: H_count {} vs t_order {t}, K_count {} vs {rings} rings",
                report.h_count, report.k_count
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= C3_RUNTIME {
        return Err(format!("{} groups took {elapsed:?}", shapes.len()));
    }
    Ok(format!("{} groups in {elapsed:?}", shapes.len()))
}

fn criterion_4() -> Outcome {
    let start = Instant::now();
    let shapes: Vec<_> = finite_shapes(SYM_MAX_ORDER)
        .into_iter()
        .filter(|s| s.order() != Some(1))
        .collect();
    for s in &shapes {
        let scan = full_symmetric_normalizer(s, SYM_MAX_ORDER as usize, DEFAULT_HOL_LIMIT)
            .map_err(|e| format!("{s}: {e}"))?;
        let t = classify(s).t_order;
        if scan.t_order != t
            || !scan.elementary_abelian
            || scan.normalizer_order != t * scan.hol_order
        {
            return Err(format!(
                "{s}: normalizer {} over Hol {} (t_order {t}), elementary abelian {}",
                scan.normalizer_order, scan.hol_order, scan.elementary_abelian
            ));
        }
    }
    let elapsed = start.elapsed();
    if elapsed >= C4_RUNTIME {
        return Err(format!("{} groups took {elapsed:?}", shapes.len()));
    }
    Ok(format!("{} groups in {elapsed:?}", shapes.len()))
}

fn criterion_5() -> Outcome {
    let opts = CorrespondenceOptions::default();
    let (mut h_count, mut k_count) = (0, 0);
    for s in finite_shapes(ORACLE_MAX_ORDER) {
        for r in enumerate_rings(&s, true).map_err(|e| format!("{s}: {e}"))? {
            let report = verify_correspondence(&r, &opts);
            let k_only = report.in_h == Some(false);
            for (name, check) in CHECK_NAMES.iter().zip(&report.checks) {
                let theta_check = *name == "theta-involution" || *name == "theta-conjugation";
                let ok = match &check.status {
                    CheckStatus::Passed => true,
                    CheckStatus::Skipped(_) => k_only && theta_check,
                    CheckStatus::Failed(_) => false,
                };
                if !ok {
                    return Err(format!("{s}, ring {}: {report}", r.to_json()));
                }
            }
            if k_only {
                k_count += 1;
            } else {
                h_count += 1;
            }
        }
    }
    Ok(format!(
        "{h_count} rings with all five checks, {k_count} rings outside H(G) with checks 1, 2, 5"
    ))
}

fn criterion_6() -> Outcome {
    let s = shape("Z4");
    let r = RingStructure::from_pairs(
        &s,
        &[(
            "x1".parse().unwrap(),
            "x1".parse().unwrap(),
            "t1".parse().unwrap(),
        )],
    )
    .map_err(|e| e.to_string())?;
    let circle = circle_invariant_factors(&r).map_err(|e| e.to_string())?;
    if circle.torsion != vec![2, 2] {
        return Err(format!("circle group has invariant factors {circle}"));
    }
    let report = compute_h_and_t(&s, &OracleConfig::default()).map_err(|e| e.to_string())?;
    let g = FiniteGroup::new(&s, 4).map_err(|e| e.to_string())?;
    let x = g.index(&s.torsion_element(&[1], &[]).unwrap());
    let placed = report.members.iter().find(|m| {
        // nu(x) for the ring with x*x = t1 sends 0 to x and x to x + x + t1 = 0.
        m.subgroup.nu(x).apply(x) == 0
    });
    match placed {
        Some(m) if !m.in_h && m.invariant_factors == vec![2, 2] => {
            Ok("C2 x C2 circle group, member of K(G) \\ H(G)".into())
        }
        Some(m) => Err(format!(
            "member found with in_h {} and type {:?}",
            m.in_h, m.invariant_factors
        )),
        None => Err("no member of K(G) realizes the ring".into()),
    }
}

fn criterion_7_shapes() -> Vec<GroupShape> {
    let mut out = Vec::new();
    for rank in 0..=3usize {
        for s in finite_shapes(ORACLE_MAX_ORDER) {
            if rank + s.two_rank() <= 3 {
                out.push(
                    GroupShape::new(rank, s.two_part().to_vec(), s.odd_part().to_vec()).unwrap(),
                );
            }
        }
    }
    out
}

fn criterion_7() -> Outcome {
    let shapes = criterion_7_shapes();
    for s in &shapes {
        let mut brute =
            brute_enumerate_tables(s, DEFAULT_BRUTE_LIMIT).map_err(|e| format!("{s}: {e}"))?;
        let mut rings = enumerate_rings(s, true).map_err(|e| format!("{s}: {e}"))?;
        brute.sort();
        brute.dedup();
        rings.sort();
        rings.dedup();
        if brute != rings {
            return Err(format!(
                "{s}: brute search finds {}, enumeration {}",
                brute.len(),
                rings.len()
            ));
        }
    }
    Ok(format!("{} shapes", shapes.len()))
}

/// `v` lies in the span of the table entries, i.e. in `G^2 = { xy }`.
fn in_products(r: &RingStructure, v: Torsion2Vector) -> bool {
    let mut basis: Vec<u64> = Vec::new();
    for mut b in r.upper().into_iter().map(Torsion2Vector::bits) {
        for &p in &basis {
            b = b.min(b ^ p);
        }
        if b != 0 {
            basis.push(b);
            basis.sort_unstable_by(|a, b| b.cmp(a));
        }
    }
    let mut x = v.bits();
    for &p in &basis {
        x = x.min(x ^ p);
    }
    x == 0
}

fn check_properties(r: &RingStructure, elems: &[Element], triples: bool) -> Result<(), String> {
    let s = r.shape();
    let autos = s.standard_automorphisms();
    let two = BigInt::from(2);
    let four = BigInt::from(4);
    // theta is only a bijection for rings whose circle group is isomorphic to G.
    let in_h = h_rings(s).contains(r);
    for a in elems {
        if in_h
            && theta(r, &theta(r, a).map_err(|e| e.to_string())?).map_err(|e| e.to_string())? != *a
        {
            return Err(format!("theta^2({}) != itself", s.format_element(a)));
        }
        let fa = f_value(r, a).map_err(|e| e.to_string())?;
        if !in_products(r, fa) {
            return Err(format!("f({}) = {fa} is not in G^2", s.format_element(a)));
        }
        let a4 = s.scale(a, &four).unwrap();
        if !f_value(r, &a4).map_err(|e| e.to_string())?.is_zero() {
            return Err(format!("f(4*{}) != 0", s.format_element(a)));
        }
        for b in elems {
            let ab = r.multiply(a, b).map_err(|e| e.to_string())?;
            if ab != r.multiply(b, a).map_err(|e| e.to_string())? {
                return Err(format!(
                    "{} * {} is not symmetric",
                    s.format_element(a),
                    s.format_element(b)
                ));
            }
            if !s.scale(&s.embed(ab), &two).unwrap().is_zero() {
                return Err(format!(
                    "2({} * {}) != 0",
                    s.format_element(a),
                    s.format_element(b)
                ));
            }
            for beta in &autos {
                let lhs = s.apply(beta, &s.embed(ab)).unwrap();
                let rhs = s.embed(
                    r.multiply(&s.apply(beta, a).unwrap(), &s.apply(beta, b).unwrap())
                        .map_err(|e| e.to_string())?,
                );
                if lhs != rhs {
                    return Err(format!(
                        "{:?} does not preserve {} * {}",
                        beta.label(),
                        s.format_element(a),
                        s.format_element(b)
                    ));
                }
            }
            let abp = s.embed(ab);
            for c in elems.iter().take(if triples { elems.len() } else { 8 }) {
                if !r.multiply(&abp, c).map_err(|e| e.to_string())?.is_zero() {
                    return Err(format!(
                        "({} * {}) * {} != 0",
                        s.format_element(a),
                        s.format_element(b),
                        s.format_element(c)
                    ));
                }
                let sum = s.add(a, b).unwrap();
                let lin = r.multiply(a, c).unwrap() + r.multiply(b, c).unwrap();
                if r.multiply(&sum, c).map_err(|e| e.to_string())? != lin {
                    return Err(format!(
                        "product is not additive at {}",
                        s.format_element(&sum)
                    ));
                }
            }
        }
    }
    Ok(())
}

fn random_element(s: &GroupShape, rng: &mut ChaCha8Rng) -> Element {
    let free = (0..s.rank())
        .map(|_| BigInt::from(rng.gen_range(-FREE_RANGE..=FREE_RANGE)))
        .collect();
    let two: Vec<i128> = (0..s.two_rank())
        .map(|i| rng.gen_range(0..s.two_order(i)) as i128)
        .collect();
    let odd: Vec<i128> = s
        .odd_part()
        .iter()
        .map(|&q| rng.gen_range(0..q) as i128)
        .collect();
    s.element(free, &two, &odd).unwrap()
}

fn criterion_8() -> Outcome {
    let mut finite_rings = 0;
    for s in finite_shapes(PROPERTY_MAX_ORDER) {
        let g =
            FiniteGroup::new(&s, PROPERTY_MAX_ORDER as usize).map_err(|e| format!("{s}: {e}"))?;
        let elems: Vec<_> = (0..g.len()).map(|i| g.element(i)).collect();
        for r in enumerate_rings(&s, true).map_err(|e| format!("{s}: {e}"))? {
            check_properties(&r, &elems, true).map_err(|e| format!("{s}: {e}"))?;
            finite_rings += 1;
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(RANDOM_SEED);
    let mut infinite = 0;
    for rank in 1..=3 {
        for two in two_parts(3, 4) {
            let s = GroupShape::new(rank, two, vec![]).unwrap();
            for r in enumerate_rings(&s, true).map_err(|e| format!("{s}: {e}"))? {
                let elems: Vec<_> = (0..RANDOM_TRIALS)
                    .map(|_| random_element(&s, &mut rng))
                    .collect();
                // Pairs are exhaustive over the sample; triples use the first few third factors.
                check_properties(&r, &elems, false).map_err(|e| format!("{s}: {e}"))?;
            }
            infinite += 1;
        }
    }
    Ok(format!(
        "{finite_rings} rings exhaustively on groups of order <= {PROPERTY_MAX_ORDER}, {infinite} infinite shapes x {RANDOM_TRIALS} random elements"
    ))
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("2-group shapes have t_order in {1, 2, 4}", criterion_1),
        ("spot table", criterion_2),
        ("oracle H and K counts", criterion_3),
        ("full symmetric group scan", criterion_4),
        ("correspondence checks", criterion_5),
        ("Z4 counterexample", criterion_6),
        ("brute table search", criterion_7),
        ("ring properties", criterion_8),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        match run() {
            Ok(detail) => println!("criterion {}: PASS {name}: {detail}", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {}: FAIL {name}: {detail}", i + 1);
            }
        }
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
