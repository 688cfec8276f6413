mod common;

use common::{random_connected, random_non_bipartite, rng};
use ppestim::edgelist::{from_edge_list, graph_digest, to_edge_list};
use ppestim::eigen::symmetric_eigenvalues;
use ppestim::estimator::{
    centralized_solve, cost_gradient, gauge_align, matrix_iterate, SchemeConfig,
};
use ppestim::matrix::DenseMatrix;
use ppestim::measurement::{measure, GroundTruth};
use ppestim::metrics::cost;
use ppestim::rng::PairStream;
use ppestim::spectral::{convergence_rate, spectrum_f, spectrum_normalized_laplacian};
use ppestim::Graph;
use proptest::prelude::*;
use rand::Rng;

fn graph_strategy(lo: usize, hi: usize) -> impl Strategy<Value = Graph> {
    (lo..=hi, 0.0f64..0.7, any::<u64>())
        .prop_map(|(n, p, seed)| random_connected(&mut rng(seed), n, p))
}

/// Leibniz determinant; fine for the tiny sizes used here.
fn det(m: &[Vec<f64>]) -> f64 {
    let n = m.len();
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = 0.0;
    loop {
        let inversions = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .filter(|&(i, j)| perm[i] > perm[j])
            .count();
        let sign = if inversions % 2 == 0 { 1.0 } else { -1.0 };
        total += sign * (0..n).map(|i| m[i][perm[i]]).product::<f64>();
        // next permutation in lexicographic order
        let Some(k) = (0..n.saturating_sub(1))
            .rev()
            .find(|&k| perm[k] < perm[k + 1])
        else {
            break;
        };
        let l = (k + 1..n).rev().find(|&l| perm[k] < perm[l]).unwrap();
        perm.swap(k, l);
        perm[k + 1..].reverse();
    }
    total
}

fn char_poly(s: &[Vec<f64>], t: f64) -> f64 {
    let shifted: Vec<Vec<f64>> = s
        .iter()
        .enumerate()
        .map(|(i, row)| {
            row.iter()
                .enumerate()
                .map(|(j, &v)| if i == j { v - t } else { v })
                .collect()
        })
        .collect();
    det(&shifted)
}

/// A root of `p` in the given interval (sign change assumed).
fn bisect_root(p: impl Fn(f64) -> f64, mut a: f64, mut b: f64) -> f64 {
    let mut fa = p(a);
    for _ in 0..200 {
        let m = 0.5 * (a + b);
        let fm = p(m);
        if fm == 0.0 {
            return m;
        }
        if (fm < 0.0) == (fa < 0.0) {
            a = m;
            fa = fm;
        } else {
            b = m;
        }
    }
    0.5 * (a + b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn edge_list_round_trip(g in graph_strategy(2, 30)) {
        let text = to_edge_list(&g, "prop");
        let back = from_edge_list(&text).unwrap();
        prop_assert_eq!(&back, &g);
        prop_assert_eq!(graph_digest(&back), graph_digest(&g));
    }

    #[test]
    fn jacobi_matches_characteristic_polynomial(
        n in 2usize..=5,
        entries in prop::collection::vec(-3.0f64..3.0, 25),
    ) {
        // well-separated spectrum: add a diagonal ramp
        let mut rows = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..=i {
                let v = entries[i * 5 + j];
                rows[i][j] = v;
                rows[j][i] = v;
            }
            rows[i][i] += 10.0 * i as f64;
        }
        let dm = DenseMatrix::from_rows(&rows).unwrap();
        let values = symmetric_eigenvalues(&dm).unwrap();
        // Gershgorin bound brackets every eigenvalue
        let r = rows.iter().map(|row| row.iter().map(|v| v.abs()).sum::<f64>()).fold(0.0, f64::max);
        let p = |t: f64| char_poly(&rows, t);
        let grid = 4000;
        let mut roots = Vec::new();
        let step = 2.0 * (r + 1.0) / grid as f64;
        let mut a = -(r + 1.0);
        let mut fa = p(a);
        for _ in 0..grid {
            let b = a + step;
            let fb = p(b);
            if fa == 0.0 {
                roots.push(a);
            } else if (fa < 0.0) != (fb < 0.0) {
                roots.push(bisect_root(p, a, b));
            }
            a = b;
            fa = fb;
        }
        prop_assume!(roots.len() == n);
        for (got, want) in values.iter().zip(&roots) {
            prop_assert!((got - want).abs() < 1e-8, "{} vs {}", got, want);
        }
    }

    #[test]
    fn noise_free_aggregate_is_twice_laplacian_times_truth(
        g in graph_strategy(2, 20),
        values in prop::collection::vec(-10.0f64..10.0, 20),
    ) {
        let truth = GroundTruth::custom(values[..g.n()].to_vec()).unwrap();
        let meas = measure(&g, &truth, 0.0, 0).unwrap();
        let lx = g.operators().unwrap().laplacian.mul_vec(&truth.values).unwrap();
        for (agg, l) in meas.aggregated.iter().zip(&lx) {
            prop_assert!((agg - 2.0 * l).abs() < 1e-9);
        }
    }

    #[test]
    fn centroid_strictly_increases_with_rho(g in graph_strategy(3, 16), rho in 0.0f64..20.0) {
        let a = spectrum_f(&g, rho).unwrap().centroid();
        let b = spectrum_f(&g, rho + 0.5).unwrap().centroid();
        prop_assert!(b > a);
    }

    #[test]
    fn bipartite_iff_top_laplacian_eigenvalue_is_two(g in graph_strategy(2, 18)) {
        let lap = spectrum_normalized_laplacian(&g).unwrap();
        let top = *lap.values.last().unwrap();
        prop_assert_eq!(g.is_bipartite(), (top - 2.0).abs() < 1e-9);
        prop_assert!(top <= 2.0 + 1e-9);
    }

    #[test]
    fn optimum_has_zero_gradient_and_lowest_cost(
        g in graph_strategy(2, 16),
        seed in any::<u64>(),
        bump in prop::collection::vec(-0.2f64..0.2, 16),
    ) {
        let truth = GroundTruth::linear(g.n(), 1.0).unwrap();
        let meas = measure(&g, &truth, 0.1, seed).unwrap();
        let x = centralized_solve(&g, &meas.aggregated).unwrap();
        let grad = cost_gradient(&g, &meas, &x).unwrap();
        prop_assert!(grad.iter().all(|v| v.abs() < 1e-8));
        let best = cost(&g, &meas, &x).unwrap();
        let moved: Vec<f64> = x.iter().zip(&bump).map(|(a, b)| a + b).collect();
        prop_assert!(cost(&g, &meas, &moved).unwrap() >= best - 1e-12);
        // shifts along the kernel leave the cost alone
        let shifted: Vec<f64> = x.iter().map(|v| v + 3.5).collect();
        prop_assert!((cost(&g, &meas, &shifted).unwrap() - best).abs() < 1e-9);
    }

    #[test]
    fn positive_penalty_keeps_spectrum_above_minus_one(g in graph_strategy(2, 16), rho in 0.01f64..20.0) {
        let d_max = g.max_degree() as f64;
        let floor = (rho - 2.0 * d_max) / (rho + 2.0 * d_max);
        let f = spectrum_f(&g, rho).unwrap();
        prop_assert!((f.values[0] - 1.0).abs() < 1e-10);
        // attained (not strict) on regular bipartite graphs such as K2
        prop_assert!(f.values.iter().all(|&v| v >= floor - 1e-10 && v > -1.0 && v <= 1.0 + 1e-10));
    }

    #[test]
    fn pair_streams_stay_in_range(seed in any::<u64>(), i in 0u64..1000, j in 0u64..1000) {
        let mut s = PairStream::new(seed, i, j);
        for _ in 0..16 {
            let u = s.next_unit();
            prop_assert!((0.0..1.0).contains(&u));
        }
    }
}

#[test]
fn empirical_rate_matches_spectral_rate() {
    let mut r = rng(77);
    let mut checked = 0;
    while checked < 10 {
        let n = r.gen_range(5..=14);
        let p = r.gen_range(0.2..0.6);
        let g = random_non_bipartite(&mut r, n, p);
        let predicted = convergence_rate(&spectrum_f(&g, 0.0).unwrap()).unwrap();
        if predicted < 0.3 {
            // contracts to rounding noise before the asymptotic regime shows
            continue;
        }
        let truth = GroundTruth::linear(n, 1.0).unwrap();
        let meas = measure(&g, &truth, 0.1, checked).unwrap();
        let x0: Vec<f64> = (0..n).map(|_| r.gen_range(-5.0..5.0)).collect();
        let traj =
            matrix_iterate(&g, &meas, &SchemeConfig::new(0.0, 200).with_initial(x0)).unwrap();
        let norms = traj.error_norms();
        // the subdominant mode may alternate sign, so use a two-step ratio
        let k = norms.iter().rposition(|&e| e > 1e-10).unwrap().min(200);
        assert_two_step_rate(norms[k], norms[k - 2], predicted);
        checked += 1;
    }
}

fn assert_two_step_rate(late: f64, early: f64, predicted: f64) {
    let measured = (late / early).sqrt();
    assert!(
        (measured - predicted).abs() < 0.02,
        "measured {measured} vs predicted {predicted}"
    );
}

#[test]
fn aligned_limit_is_shift_invariant() {
    let g = random_connected(&mut rng(5), 9, 0.4);
    let truth = GroundTruth::linear(9, 2.0).unwrap();
    let meas = measure(&g, &truth, 0.1, 5).unwrap();
    let x = centralized_solve(&g, &meas.aggregated).unwrap();
    let start: Vec<f64> = x.iter().map(|v| v + 4.0).collect();
    let traj = matrix_iterate(&g, &meas, &SchemeConfig::new(1.0, 5).with_initial(start)).unwrap();
    for state in &traj.states {
        assert!(gauge_align(state, &x).iter().all(|e| e.abs() < 1e-9));
    }
}
