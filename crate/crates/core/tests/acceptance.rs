//! Acceptance suite: one test per criterion, each printing a pass line.
//! Run with `cargo test --test acceptance -- --nocapture` to see them.

use std::time::Instant;

use fano3::bundles::{
    dual, riemann_roch, serre_bundle, serre_chi_identity, twist, whitney_sum, BundleClass,
};
use fano3::chow::{build_catalog, verify_ring_laws, Catalog, PRIME_GENERA};
use fano3::instanton::{
    cohomology_table, ext_balance, min_quantum, moduli_dim, serre_plan, Entry, InstantonError,
    InstantonSpec,
};
use fano3::linalg::Mat;
use fano3::monad::{
    jumping_class_p3, jumping_scan, monad_chern, monad_ranks, pencil_jumping_count, qmonad_random,
    qmonad_verify_bundle, MonadSpace,
};
use fano3::rat::{frac, is_integer, rat, Rat};
use fano3::stability::{decomposable_balance, sharp_case_replay, DivisorClass};
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn catalog() -> Catalog {
    build_catalog().expect("catalog builds")
}

#[test]
fn criterion_01_catalog_integrity() {
    let t0 = Instant::now();
    let c = catalog();
    for x in c.threefolds() {
        let laws = verify_ring_laws(&x.ring);
        assert!(laws.violations.is_empty(), "{}: {:?}", x.id, laws.violations);
        assert_eq!(
            x.h.pow(3).degree_of().unwrap(),
            rat(x.degree),
            "{}: deg(h^3)",
            x.id
        );
        let noether = x
            .h
            .scale(&rat(x.index))
            .mul(&x.c2_omega)
            .degree_of()
            .unwrap();
        assert_eq!(noether, rat(24), "{}: Noether product", x.id);
        let chi_o = riemann_roch(x, &BundleClass::trivial(&x.ring, 1));
        assert_eq!(chi_o, rat(1), "{}: chi(O)", x.id);
    }
    for r in c.aux_rings() {
        let laws = verify_ring_laws(r);
        assert!(laws.violations.is_empty(), "{}: {:?}", r.id, laws.violations);
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!(
        "criterion 1 (catalog integrity, {} threefolds + {} auxiliary rings): PASS in {elapsed:?}",
        c.threefolds().len(),
        c.aux_rings().len()
    );
}

#[test]
fn criterion_02_cohomology_table_reproduction() {
    let c = catalog();
    let p3 = c.get("P3").unwrap();
    for k in [2i64, 4, 6, 8] {
        let spec = InstantonSpec::new(p3, 1, k).unwrap();
        let table = cohomology_table(&spec, -3..=0).unwrap();
        for p in -3..=0 {
            for q in 0..4usize {
                let expected = match (q, p) {
                    (2, -3) => 3 * k / 2 - 1,
                    (2, -2) => k / 2,
                    (1, -1) => k / 2,
                    (1, 0) => 3 * k / 2 - 1,
                    _ => 0,
                };
                assert_eq!(
                    table.get(q, p),
                    &Entry::Known(expected),
                    "k={k}: h^{q}(E({p}h))"
                );
            }
        }
    }
    println!("criterion 2 (P3 cohomology table for k = 2,4,6,8): PASS");
}

#[test]
fn criterion_03_moduli_dimensions() {
    let c = catalog();
    let mut cases = 0;
    for x in c.threefolds() {
        for eps in 0..=1i64 {
            if (x.index - eps) % 2 == 0 {
                continue;
            }
            let min = min_quantum(x, eps).unwrap();
            for k in (min..=20).step_by(2) {
                let spec = InstantonSpec::new(x, eps, k).unwrap();
                let dim = moduli_dim(&spec).unwrap();
                let balance = ext_balance(&spec).unwrap();
                assert_eq!(dim, balance, "{} eps={eps} k={k}", x.id);
                let closed = match x.index {
                    4 => 8 * k - 5,
                    3 => 6 * k - 3,
                    2 => 4 * k - x.degree - 3,
                    1 => 2 * k - 3,
                    _ => unreachable!(),
                };
                assert_eq!(dim, rat(closed), "{} eps={eps} k={k}", x.id);
                cases += 1;
            }
        }
    }
    let p3k4 = InstantonSpec::new(c.get("P3").unwrap(), 1, 4).unwrap();
    assert_eq!(moduli_dim(&p3k4).unwrap(), rat(27));
    println!("criterion 3 (moduli dimension = ext balance, {cases} specs, P3 k=4 gives 27): PASS");
}

#[test]
fn criterion_04_monad_ranks_and_chern() {
    let c = catalog();
    let p3 = c.get("P3").unwrap();
    let q3 = c.get("Q3").unwrap();
    for k in (2..=20i64).step_by(2) {
        let rp = monad_ranks(MonadSpace::P3, k).unwrap();
        assert_eq!((rp.dim_h, rp.dim_k), (3 * k / 2 - 1, k / 2), "P3 k={k}");
        let rq = monad_ranks(MonadSpace::Q3, k).unwrap();
        assert_eq!((rq.dim_h, rq.dim_k), (k / 2, k + 2), "Q3 k={k}");

        let ep = monad_chern(&c, MonadSpace::P3, k).unwrap();
        assert_eq!(ep.rank, 2);
        assert_eq!(ep.c1, p3.h.neg(), "P3 k={k}: c1");
        assert_eq!(ep.c2, p3.line_class.scale(&rat(k)), "P3 k={k}: c2");
        assert!(ep.c3.is_zero());

        let eq = monad_chern(&c, MonadSpace::Q3, k).unwrap();
        assert_eq!(eq.rank, 2);
        assert!(eq.c1.is_zero(), "Q3 k={k}: c1");
        assert_eq!(eq.c2, q3.line_class.scale(&rat(k)), "Q3 k={k}: c2");
        assert!(eq.c3.is_zero());
    }
    println!("criterion 4 (monad ranks and Chern data for even k <= 20): PASS");
}

#[test]
fn criterion_05_jumping_class_on_g24() {
    let c = catalog();
    let g24 = c.ring("G24").unwrap();
    for k in (2..=30i64).step_by(2) {
        // jumping_class_p3 computes by Whitney arithmetic and errors if the
        // closed form disagrees; compare explicitly as well
        let class = jumping_class_p3(&c, k).unwrap();
        let closed = g24
            .basis_class("s2")
            .scale(&frac(k * k, 2))
            .add(&g24.basis_class("s11").scale(&frac(k * (k - 1), 2)));
        assert_eq!(class, closed, "k={k}");
    }
    println!("criterion 5 (jumping class on G(2,4) for even k <= 30): PASS");
}

#[test]
fn criterion_06_qmonad_sampling_and_scans() {
    let t0 = Instant::now();
    let mut passed = 0usize;
    let mut exposed = 0usize;
    let mut total_hits = 0usize;
    for seed in 1..=100u64 {
        let monad = qmonad_random(2, seed).expect("sampling within budget");
        let verify = qmonad_verify_bundle(&monad, 50, seed);
        if !verify.ok {
            continue;
        }
        // jumping hits are cross-validated inside the scan: a gcd/Cech
        // disagreement surfaces as an error and fails the criterion
        match jumping_scan(&monad, 200, seed, 4) {
            Ok(stats) => {
                assert!(
                    stats.jumping_count <= 5,
                    "seed {seed}: {} jumping lines in 200",
                    stats.jumping_count
                );
                total_hits += stats.jumping_count;
                passed += 1;
            }
            // a restriction that is not a bundle quotient proves the monad
            // escaped the 50-point check without being a bundle monad; it
            // counts against the verification budget, not the scan
            Err(fano3::monad::MonadError::NotABundleRestriction) => exposed += 1,
            Err(e) => panic!("seed {seed}: scan failed: {e}"),
        }
    }
    assert!(passed >= 95, "only {passed} of 100 seeds verified and scanned clean");
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 60.0, "took {elapsed:?}");
    println!(
        "criterion 6 (k=2 sampling: {passed}/100 verified, {exposed} exposed as non-bundles \
         by their scans, {total_hits} jumping hits, every hit double-checked): PASS in {elapsed:?}"
    );
}

#[test]
fn criterion_07_pencil_degree_proportionality() {
    let t0 = Instant::now();
    let mut matched = 0usize;
    let mut seed = 1u64;
    while matched < 10 {
        assert!(seed <= 200, "ran out of seeds before 10 matched families");
        let m2 = qmonad_random(2, seed).expect("k=2 sampling");
        let m4 = qmonad_random(4, seed).expect("k=4 sampling");
        let c2 = pencil_jumping_count(&m2, seed);
        let c4 = pencil_jumping_count(&m4, seed);
        seed += 1;
        // degenerate or tangent families are resampled
        let (c2, c4) = match (c2, c4) {
            (Ok(a), Ok(b)) if a.squarefree && b.squarefree => (a, b),
            _ => continue,
        };
        assert_eq!(
            c4.distinct_roots,
            2 * c2.distinct_roots,
            "seed {}: {} vs {}",
            seed - 1,
            c4.distinct_roots,
            c2.distinct_roots
        );
        matched += 1;
    }
    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!(
        "criterion 7 (pencil count k=4 is exactly twice k=2 on {matched} matched families): PASS in {elapsed:?}"
    );
}

#[test]
fn criterion_08_serre_planner() {
    let c = catalog();
    let mut planned = 0usize;
    for x in c.threefolds() {
        if x.index < 2 {
            continue;
        }
        for eps in 0..=1i64 {
            if (x.index - eps) % 2 == 0 {
                continue;
            }
            let min = min_quantum(x, eps).unwrap();
            for k in (min..=12).step_by(2) {
                let spec = InstantonSpec::new(x, eps, k).unwrap();
                let plan = serre_plan(&spec).unwrap();
                assert!(plan.s >= 1, "{} eps={eps} k={k}", x.id);
                assert_eq!(plan.result.c1, x.h.scale(&rat(-eps)));
                assert_eq!(
                    x.h.mul(&plan.result.c2).degree_of().unwrap(),
                    rat(k),
                    "{} eps={eps} k={k}",
                    x.id
                );
                planned += 1;
            }
        }
    }
    for g in PRIME_GENERA {
        let spec = InstantonSpec::new(c.prime(g).unwrap(), 0, 4).unwrap();
        assert!(matches!(
            serre_plan(&spec),
            Err(InstantonError::PlannerIndexOne)
        ));
    }
    println!("criterion 8 (Serre planner on {planned} index >= 2 specs; index 1 rejected): PASS");
}

#[test]
fn criterion_09_case_analysis_replay() {
    let c = catalog();
    let f62 = sharp_case_replay(c.get("F62").unwrap()).unwrap();
    assert_eq!(f62.nonzero_survivors(), vec![vec![0, 1], vec![1, 0]]);
    let f63 = sharp_case_replay(c.get("F63").unwrap()).unwrap();
    assert_eq!(
        f63.nonzero_survivors(),
        vec![vec![0, 0, 1], vec![0, 1, 0], vec![1, 0, 0]]
    );
    let f7 = sharp_case_replay(c.get("F7").unwrap()).unwrap();
    assert_eq!(f7.nonzero_survivors(), vec![vec![0, 1], vec![1, -1]]);

    // decomposable certificate: O(-h1) (+) O(-h2) on F62 balances and has
    // quantum number 2
    let x = c.get("F62").unwrap();
    assert!(decomposable_balance(x, 1, &DivisorClass::new(vec![-1, 0])));
    let h1 = x.divisor_class(&[1, 0]);
    let h2 = x.divisor_class(&[0, 1]);
    let split = whitney_sum(
        &BundleClass::line_bundle(&h1.neg()),
        &BundleClass::line_bundle(&h2.neg()),
    );
    assert_eq!(split.c1, x.h.neg());
    assert_eq!(x.h.mul(&split.c2).degree_of().unwrap(), rat(2));
    println!("criterion 9 (divisor case replay and split certificate): PASS");
}

#[test]
fn criterion_10_property_suites() {
    let t0 = Instant::now();
    let c = catalog();

    // random realisable bundle classes: Whitney sums of twisted line
    // bundles and conic-construction Serre classes (section vanishing on s
    // disjoint conics forces the end twists to add to (index - 1) h),
    // optionally twisted again
    let random_class = |x: &std::sync::Arc<fano3::chow::FanoThreefold>,
                        rng: &mut ChaCha8Rng|
     -> BundleClass {
        let rank = x.picard_rank;
        fn coords(rng: &mut ChaCha8Rng, rank: usize) -> Vec<i64> {
            (0..rank).map(|_| rng.gen_range(-3..=3)).collect()
        }
        let mut acc = BundleClass::line_bundle(&x.divisor_class(&coords(rng, rank)));
        for _ in 0..rng.gen_range(0..=2) {
            let d = x.divisor_class(&coords(rng, rank));
            acc = whitney_sum(&acc, &BundleClass::line_bundle(&d));
        }
        if rng.gen_bool(0.5) {
            let a = x.ring.zero();
            let b = x.h.scale(&rat(x.index - 1));
            let mut z = x.ring.zero();
            for cls in &x.conic_classes {
                z = z.add(&cls.scale(&rat(rng.gen_range(0..=3))));
            }
            let serre = serre_bundle(x, &a, &b, &z).unwrap();
            let l = x.divisor_class(&coords(rng, rank));
            acc = whitney_sum(&acc, &twist(&serre, &l));
        }
        twist(&acc, &x.divisor_class(&coords(rng, rank)))
    };

    for x in c.threefolds() {
        let mut rng = ChaCha8Rng::seed_from_u64(0xF0 + x.degree as u64);
        for _ in 0..1000 {
            let f = random_class(x, &mut rng);
            // RR integrality on realisable classes
            let chi = riemann_roch(x, &f);
            assert!(is_integer(&chi), "{}: chi = {chi}", x.id);
            // Serre chi-duality
            assert!(serre_chi_identity(x, &f), "{}", x.id);
            // twist composition and dual involution
            let l1 = x.divisor_class(&vec![1; x.picard_rank]);
            let l2 = x.h.clone();
            assert_eq!(twist(&twist(&f, &l1), &l2), twist(&f, &l1.add(&l2)));
            assert_eq!(dual(&dual(&f)), f);
        }
    }

    // Whitney associativity on one entry per Picard rank
    for id in ["P3", "F62", "F63"] {
        let x = c.get(id).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..200 {
            let a = random_class(x, &mut rng);
            let b = random_class(x, &mut rng);
            let d = random_class(x, &mut rng);
            assert_eq!(
                whitney_sum(&whitney_sum(&a, &b), &d),
                whitney_sum(&a, &whitney_sum(&b, &d))
            );
            assert_eq!(whitney_sum(&a, &b), whitney_sum(&b, &a));
        }
    }

    // linalg oracles: Pf^2 = det and kernel verification
    let mut rng = ChaCha8Rng::seed_from_u64(0xAB);
    for n in [2usize, 4, 6] {
        for _ in 0..50 {
            let mut m = Mat::zeros(n, n);
            for i in 0..n {
                for j in i + 1..n {
                    let v = rat(rng.gen_range(-6i64..=6));
                    m[(i, j)] = v.clone();
                    m[(j, i)] = -v;
                }
            }
            let pf = m.pfaffian().unwrap();
            assert_eq!(&pf * &pf, m.det());
        }
    }
    for _ in 0..100 {
        let rows: Vec<Vec<Rat>> = (0..4)
            .map(|_| (0..7).map(|_| rat(rng.gen_range(-5..=5))).collect())
            .collect();
        let m = Mat::from_rows(rows);
        let kernel = m.kernel_basis();
        assert_eq!(kernel.len(), 7 - m.rank());
        for v in kernel {
            assert!(m.mul_vec(&v).iter().all(Rat::is_zero));
        }
    }

    let elapsed = t0.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("criterion 10 (property suites, >= 1000 RR cases per catalog entry): PASS in {elapsed:?}");
}
