//! End-to-end acceptance suite: one test per verified guarantee, each
//! printing a pass line with the observed slack. Run with
//! `cargo test --test acceptance`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use schur_cheeger::graph::VertexSet;
use schur_cheeger::{gen, oracle, schur, spectral, sweep, Graph};

const SUITE_SEED: u64 = 0x5c42_2024;

/// 50 seeded random connected graphs, 3 to 8 vertices, integer weights
/// 1 to 4.
fn random_suite() -> Vec<Graph> {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    (0..50)
        .map(|_| {
            let n = rng.gen_range(3..=8);
            gen::random_connected(&mut rng, n, 0.5, 4).unwrap()
        })
        .collect()
}

fn lambda_of(g: &Graph) -> f64 {
    spectral::lambda_dense(g).unwrap().lambda
}

#[test]
fn criterion_01_main_theorem_sandwich() {
    let mut worst_lower = f64::INFINITY;
    let mut worst_upper = f64::INFINITY;
    for g in random_suite() {
        let lambda = lambda_of(&g);
        let rs = oracle::rho_sigma_exact(&g).unwrap();
        assert!(
            rs.rho >= lambda / 2.0 - 1e-9,
            "rho {} < lambda/2 {}",
            rs.rho,
            lambda / 2.0
        );
        assert!(
            rs.rho <= 25600.0 * lambda + 1e-6,
            "rho {} > 25600 lambda {}",
            rs.rho,
            25600.0 * lambda
        );
        worst_lower = worst_lower.min(rs.rho - lambda / 2.0);
        worst_upper = worst_upper.min(25600.0 * lambda - rs.rho);
    }
    println!(
        "criterion 1 (lambda/2 <= rho_G <= 25600 lambda): PASS \
         (min slack lower {worst_lower:.3e}, upper {worst_upper:.3e})"
    );
}

#[test]
fn criterion_02_pairwise_lower_bound() {
    let mut worst = f64::INFINITY;
    for g in random_suite() {
        let lambda = lambda_of(&g);
        for pair in oracle::admissible_pairs(g.n()).unwrap() {
            let rep = schur::conductance_pair(&g, &pair.a, &pair.b).unwrap();
            assert!(
                lambda <= 2.0 * rep.sigma + 1e-9,
                "lambda {} > 2 sigma {} for pair {:?}",
                lambda,
                2.0 * rep.sigma,
                pair
            );
            worst = worst.min(2.0 * rep.sigma - lambda);
        }
    }
    println!("criterion 2 (lambda <= 2 sigma_AB for every pair): PASS (min slack {worst:.3e})");
}

#[test]
fn criterion_03_sweep_cut_contract() {
    let n = 2000;
    let cases = [
        ("cycle", gen::cycle(n).unwrap(), spectral::cycle_lambda_closed_form(n)),
        ("path", gen::path(n).unwrap(), spectral::lambda_iterative(&gen::path(n).unwrap()).unwrap().lambda),
    ];
    for (name, g, lambda) in cases {
        assert!(lambda < 1.0 / 25600.0, "{name}: gap not small enough");
        let res = sweep::sweep_cut(&g).unwrap();
        assert!(res.satisfied, "{name}: sweep unsatisfied");
        assert!(
            res.report.sigma <= 640.0 * lambda * (1.0 + 1e-6),
            "{name}: sigma {} > 640 lambda {}",
            res.report.sigma,
            640.0 * lambda
        );
        assert!(res.phi_a <= 0.25 + 1e-9, "{name}: phi_A {}", res.phi_a);
        assert!(res.phi_b <= 0.25 + 1e-9, "{name}: phi_B {}", res.phi_b);
        assert!(
            res.report.rho <= 1280.0 * lambda * (1.0 + 1e-6),
            "{name}: rho {} > 1280 lambda {}",
            res.report.rho,
            1280.0 * lambda
        );
        println!(
            "criterion 3 ({name} n=2000 sweep contract): PASS \
             (sigma/lambda = {:.2}, rho/lambda = {:.2}, phi = {:.3}/{:.3})",
            res.report.sigma / lambda,
            res.report.rho / lambda,
            res.phi_a,
            res.phi_b
        );
    }
}

#[test]
fn criterion_04_cycle_quartering() {
    for n in [64usize, 256, 1024] {
        let g = gen::cycle(n).unwrap();
        let lambda = spectral::cycle_lambda_closed_form(n);
        let q = n / 4;
        let a = VertexSet::from_sorted((0..q).collect());
        let b = VertexSet::from_sorted((n / 2..n / 2 + q).collect());
        let rep = schur::conductance_pair(&g, &a, &b).unwrap();
        let ratio = rep.rho / lambda;
        assert!(
            (0.5..=50.0).contains(&ratio),
            "n={n}: rho/lambda = {ratio}"
        );
        let (phi, _) = sweep::cheeger_sweep(&g).unwrap();
        let phi_n = phi * n as f64;
        assert!(
            (1.0..=8.0).contains(&phi_n),
            "n={n}: phi_G * n = {phi_n}"
        );
        println!(
            "criterion 4 (cycle quartering n={n}): PASS (rho/lambda = {ratio:.2}, phi*n = {phi_n:.2})"
        );
    }
}

#[test]
fn criterion_05_proxy_dominance() {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 5);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..20 {
        let n = rng.gen_range(4..=10);
        let g = gen::random_connected(&mut rng, n, 0.5, 4).unwrap();
        let fiedler = spectral::apx_fiedler(&g).unwrap();
        let x: Vec<f64> = (0..n)
            .map(|v| fiedler.vector[v] / g.degree(v).sqrt())
            .collect();
        let sv = sweep::SweepVector::from_embedding(&g, x);
        let y_max = sv.y.iter().cloned().fold(f64::MIN, f64::max);
        let y_min = sv.y.iter().cloned().fold(f64::MAX, f64::min);
        let mut checked = 0;
        let mut attempts = 0;
        while checked < 20 && attempts < 2000 {
            attempts += 1;
            let q = if rng.gen_bool(0.5) && y_max > 1e-12 {
                rng.gen_range(1e-12..2.0 * y_max)
            } else if y_min < -1e-12 {
                rng.gen_range(2.0 * y_min..-1e-12)
            } else {
                continue;
            };
            let (near, far): (Vec<usize>, Vec<usize>) = if q > 0.0 {
                (
                    (0..n).filter(|&v| sv.y[v] <= q / 2.0).collect(),
                    (0..n).filter(|&v| sv.y[v] >= q).collect(),
                )
            } else {
                (
                    (0..n).filter(|&v| sv.y[v] >= q / 2.0).collect(),
                    (0..n).filter(|&v| sv.y[v] <= q).collect(),
                )
            };
            if near.is_empty() || far.is_empty() {
                continue;
            }
            let a = VertexSet::from_sorted(near);
            let b = VertexSet::from_sorted(far);
            if !a.is_disjoint(&b) {
                continue;
            }
            let cut = schur::schur_cut_weight(&g, &a, &b).unwrap();
            let proxy = sweep::proxy_value(&g, &sv, q).unwrap();
            assert!(
                cut <= proxy + 1e-7 * (1.0 + proxy),
                "proxy dominance violated: cut {cut} > proxy {proxy} at q = {q}"
            );
            worst = worst.max(cut - proxy);
            checked += 1;
        }
        assert!(checked >= 20, "could not sample enough thresholds");
    }
    println!("criterion 5 (proxy dominance): PASS (max cut - proxy = {worst:.3e})");
}

#[test]
fn criterion_06_kappa_integral() {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 6);
    let mut case1_checked = 0;
    for _ in 0..200 {
        let a: f64 = rng.gen_range(-3.0..3.0);
        let b: f64 = rng.gen_range(-3.0..3.0);
        let val = oracle::kappa_integral_numeric(a, b);
        let bound = 10.0 * (a - b) * (a - b);
        assert!(val <= bound + 1e-6, "integral {val} > 10(a-b)^2 {bound} for ({a}, {b})");
        let (lo, hi) = (a.min(b), a.max(b));
        if lo <= 0.0 && hi > 0.0 {
            // Closed form for the one-sided case.
            let expect = hi * hi * (std::f64::consts::LN_2 - 0.5);
            assert!(
                (val - expect).abs() <= 1e-6 * expect.max(1e-12),
                "closed form mismatch: {val} vs {expect} for ({a}, {b})"
            );
            case1_checked += 1;
        }
    }
    assert!(case1_checked > 10, "too few one-sided samples: {case1_checked}");
    println!(
        "criterion 6 (kappa integral <= 10 (a-b)^2): PASS ({case1_checked} closed-form checks)"
    );
}

fn graphs_agree(a: &Graph, b: &Graph, tol: f64) -> bool {
    use std::collections::BTreeMap;
    let mut weights: BTreeMap<(usize, usize), (f64, f64)> = BTreeMap::new();
    for e in a.edges() {
        weights.entry((e.u, e.v)).or_insert((0.0, 0.0)).0 = e.w;
    }
    for e in b.edges() {
        weights.entry((e.u, e.v)).or_insert((0.0, 0.0)).1 = e.w;
    }
    weights
        .values()
        .all(|&(wa, wb)| (wa - wb).abs() <= tol * wa.max(wb).max(1.0))
}

#[test]
fn criterion_07_schur_algebra() {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 7);
    for trial in 0..100 {
        let n = rng.gen_range(4..=9);
        let g = gen::random_connected(&mut rng, n, 0.6, 4).unwrap();
        let k = rng.gen_range(2..n);
        let mut ids: Vec<usize> = (0..n).collect();
        // Fisher-Yates prefix shuffle for the retained set.
        for i in 0..k {
            let j = rng.gen_range(i..n);
            ids.swap(i, j);
        }
        let x = VertexSet::new(ids[..k].to_vec());

        // Order invariance: minimum-degree vs a random elimination
        // order.
        let min_deg = schur::schur_complement(&g, &x).unwrap();
        let mut dropped: Vec<usize> = (0..n).filter(|v| !x.contains(*v)).collect();
        for i in (1..dropped.len()).rev() {
            let j = rng.gen_range(0..=i);
            dropped.swap(i, j);
        }
        let random_order = schur::schur_complement_ordered(&g, &x, Some(&dropped)).unwrap();
        assert!(
            graphs_agree(&min_deg.graph, &random_order.graph, 1e-9),
            "order invariance failed on trial {trial}"
        );

        // Dense block-formula agreement.
        let dense = oracle::dense_schur(&g, &x).unwrap();
        assert!(
            graphs_agree(&min_deg.graph, &dense, 1e-9),
            "dense formula disagreement on trial {trial}"
        );

        // Volume monotonicity for a random subset of the retained set.
        let sub = VertexSet::new(
            x.iter().filter(|_| rng.gen_bool(0.6)).collect::<Vec<usize>>(),
        );
        if !sub.is_empty() {
            let vol_i = min_deg.volume_original(&sub);
            let vol_g = g.volume(&sub);
            assert!(
                vol_i <= vol_g + 1e-9 * vol_g.max(1.0),
                "volume monotonicity failed: {vol_i} > {vol_g}"
            );
        }

        // Quadratic-form consistency for a random vector supported on
        // the retained set.
        let mut xv = vec![0.0; n];
        for v in x.iter() {
            xv[v] = rng.gen_range(-1.0..1.0);
        }
        let mean: f64 = xv.iter().sum::<f64>() / x.len() as f64;
        for v in x.iter() {
            xv[v] -= mean;
        }
        let sol_g = spectral::solve_laplacian(&g, &xv).unwrap();
        let quad_g: f64 = xv.iter().zip(&sol_g).map(|(a, b)| a * b).sum();
        let xs: Vec<f64> = x.iter().map(|v| xv[v]).collect();
        let sol_i = spectral::solve_laplacian(&min_deg.graph, &xs).unwrap();
        let quad_i: f64 = xs.iter().zip(&sol_i).map(|(a, b)| a * b).sum();
        assert!(
            (quad_g - quad_i).abs() <= 1e-6 * quad_g.abs().max(1.0),
            "quadratic form mismatch: {quad_g} vs {quad_i}"
        );
    }
    println!("criterion 7 (Schur algebra: order invariance, dense formula, volume monotonicity, quadratic forms): PASS");
}

#[test]
fn criterion_08_resistance_identity() {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED ^ 8);
    let mut max_dev: f64 = 0.0;
    for g in random_suite() {
        let lambda = lambda_of(&g);
        let pairs = oracle::admissible_pairs(g.n()).unwrap();
        for _ in 0..20 {
            let pair = &pairs[rng.gen_range(0..pairs.len())];
            let rep = schur::conductance_pair(&g, &pair.a, &pair.b).unwrap();
            let reff = schur::effective_resistance(&g, &pair.a, &pair.b).unwrap();
            let min_vol = rep.vol_g_a.min(rep.vol_g_b);
            let prod = reff * min_vol * rep.sigma;
            assert!(
                (prod - 1.0).abs() <= 1e-7,
                "resistance identity off by {} for {:?}",
                prod - 1.0,
                pair
            );
            max_dev = max_dev.max((prod - 1.0).abs());
            // Upper bound of the clustering theorem for arbitrary pairs.
            assert!(
                reff <= 2.0 / (lambda * min_vol) * (1.0 + 1e-6),
                "Reff {} > 2/(lambda min_vol) {}",
                reff,
                2.0 / (lambda * min_vol)
            );
        }
        // Lower bound attained by the sigma argmin pair.
        let rs = oracle::rho_sigma_exact(&g).unwrap();
        let reff = schur::effective_resistance(&g, &rs.sigma_argmin.a, &rs.sigma_argmin.b)
            .unwrap();
        let min_vol = g
            .volume(&rs.sigma_argmin.a)
            .min(g.volume(&rs.sigma_argmin.b));
        assert!(
            reff >= 1.0 / (25600.0 * lambda * min_vol) * (1.0 - 1e-6),
            "Reff {} below clustering lower bound",
            reff
        );
    }
    println!("criterion 8 (Reff * min vol = 1/sigma): PASS (max deviation {max_dev:.3e})");
}

#[test]
fn criterion_09_classic_cheeger() {
    let mut worst_lower = f64::INFINITY;
    let mut worst_upper = f64::INFINITY;
    for g in random_suite() {
        let lambda = lambda_of(&g);
        let (phi, _) = oracle::phi_exact(&g).unwrap();
        assert!(phi >= lambda / 2.0 - 1e-9, "phi {phi} < lambda/2");
        assert!(
            phi <= (2.0 * lambda).sqrt() + 1e-9,
            "phi {phi} > sqrt(2 lambda)"
        );
        worst_lower = worst_lower.min(phi - lambda / 2.0);
        worst_upper = worst_upper.min((2.0 * lambda).sqrt() - phi);
    }
    println!(
        "criterion 9 (lambda/2 <= phi_G <= sqrt(2 lambda)): PASS \
         (min slack lower {worst_lower:.3e}, upper {worst_upper:.3e})"
    );
}

#[test]
fn criterion_10_eigen_correctness() {
    for n in [4usize, 16, 100] {
        let g = gen::cycle(n).unwrap();
        let lambda = spectral::lambda_gap(&g).unwrap().lambda;
        let expect = spectral::cycle_lambda_closed_form(n);
        assert!(
            (lambda - expect).abs() <= 1e-8,
            "cycle n={n}: lambda {lambda} vs closed form {expect}"
        );
    }
    // Factor-2 Fiedler contract against the dense oracle on every graph
    // family at hand with n <= 500.
    let mut graphs = random_suite();
    graphs.push(gen::cycle(100).unwrap());
    graphs.push(gen::path(200).unwrap());
    graphs.push(gen::grid(10, 20).unwrap());
    graphs.push(gen::dumbbell(8).unwrap());
    let mut worst: f64 = f64::NEG_INFINITY;
    for g in &graphs {
        let lambda = lambda_of(g);
        let f = spectral::apx_fiedler(g).unwrap();
        assert!(
            f.rayleigh <= 2.0 * lambda + 1e-9,
            "rayleigh {} > 2 lambda {} (n = {})",
            f.rayleigh,
            2.0 * lambda,
            g.n()
        );
        worst = worst.max(f.rayleigh / lambda);
    }
    println!("criterion 10 (eigen correctness): PASS (max rayleigh/lambda = {worst:.3})");
}
