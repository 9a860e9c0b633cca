//! Library results checked against naive, independently written oracles.

use proptest::prelude::*;

use tensor_cs::linalg::{spectral_norm, svd, truncated_pinv};
use tensor_cs::reconstruction::{reconstruct, TruncationPolicy};
use tensor_cs::rng::{gaussian_matrix, gaussian_tensor, tag};
use tensor_cs::sensing::{multiway_measure, rank_for_ratio, sampling_ratio, SensingEnsemble, SensingKind};
use tensor_cs::tensor::{fold, kronecker, mode_n_product, mul_kron, relative_error, unfold, DenseTensor, Matrix};
use tensor_cs::tucker::{hosvd, TuckerModel};

fn multi_index(mut lin: usize, dims: &[usize]) -> Vec<usize> {
    dims.iter()
        .map(|&d| {
            let i = lin % d;
            lin /= d;
            i
        })
        .collect()
}

// column of entry `idx` in the mode-n unfolding: sum over k != n of i_k * prod_{m<k, m!=n} I_m
fn unfold_column(idx: &[usize], dims: &[usize], n: usize) -> usize {
    let mut col = 0;
    let mut stride = 1;
    for k in 0..dims.len() {
        if k == n {
            continue;
        }
        col += idx[k] * stride;
        stride *= dims[k];
    }
    col
}

fn naive_unfold(t: &DenseTensor, n: usize) -> Matrix {
    let dims = t.dims();
    let cols: usize = dims
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != n)
        .map(|(_, &d)| d)
        .product();
    let mut m = Matrix::zeros(dims[n], cols);
    for lin in 0..t.len() {
        let idx = multi_index(lin, dims);
        m[(idx[n], unfold_column(&idx, dims, n))] = t.get(&idx);
    }
    m
}

fn naive_mode_product(t: &DenseTensor, a: &Matrix, n: usize) -> DenseTensor {
    let mut out_dims = t.dims().to_vec();
    out_dims[n] = a.nrows();
    DenseTensor::from_fn(&out_dims, |idx| {
        let mut src = idx.to_vec();
        (0..t.dims()[n])
            .map(|i| {
                src[n] = i;
                a[(idx[n], i)] * t.get(&src)
            })
            .sum()
    })
    .unwrap()
}

fn power_iteration_norm(m: &Matrix) -> f64 {
    let g = m.transpose() * m;
    let mut v = nalgebra::DVector::from_fn(g.ncols(), |i, _| 1.0 + (i as f64 * 0.37).sin());
    let mut lambda = 0.0;
    for _ in 0..5000 {
        let w = &g * &v;
        let norm = w.norm();
        if norm == 0.0 {
            return 0.0;
        }
        let next = norm / v.norm();
        v = w / norm;
        if (next - lambda).abs() <= 1e-15 * next {
            lambda = next;
            break;
        }
        lambda = next;
    }
    lambda.sqrt()
}

fn dims_strategy(order: std::ops::RangeInclusive<usize>) -> impl Strategy<Value = Vec<usize>> {
    order.prop_flat_map(|n| proptest::collection::vec(1usize..=5, n))
}

#[test]
fn unfold_matches_index_formula() {
    for (k, dims) in [vec![3, 4], vec![2, 3, 4], vec![3, 1, 2, 2], vec![2, 2, 2, 2, 3]]
        .iter()
        .enumerate()
    {
        let t = gaussian_tensor(dims, k as u64, tag::MISC);
        for n in 0..dims.len() {
            assert_eq!(unfold(&t, n).unwrap(), naive_unfold(&t, n), "dims {dims:?} mode {n}");
        }
    }
}

#[test]
fn spectral_norm_matches_power_iteration() {
    for (k, (r, c)) in [(1, 1), (5, 3), (3, 5), (20, 20), (40, 7)].into_iter().enumerate() {
        let m = gaussian_matrix(r, c, 100 + k as u64, tag::MISC);
        let got = spectral_norm(&m).unwrap();
        let want = power_iteration_norm(&m);
        assert!((got - want).abs() <= 1e-8 * want, "{r}x{c}: {got} vs {want}");
    }
}

#[test]
fn svd_reconstructs_rank_deficient_matrices() {
    for k in 0..2000u64 {
        let (r, c, rank) = (
            1 + (k % 13) as usize,
            1 + ((k / 13) % 13) as usize,
            1 + (k % 4) as usize,
        );
        let m = gaussian_matrix(r, rank, k, tag::MISC) * gaussian_matrix(rank, c, k, tag::FACTOR);
        let f = svd(&m).unwrap();
        assert!(
            (f.reconstruct() - &m).norm() <= 1e-12 * m.norm(),
            "{r}x{c} rank {rank}, seed {k}"
        );
        assert!(f.s.windows(2).all(|w| w[0] >= w[1]));
    }
}

#[test]
fn kronecker_matches_block_definition() {
    let a = gaussian_matrix(2, 3, 1, tag::MISC);
    let b = gaussian_matrix(4, 2, 2, tag::MISC);
    let k = kronecker(&a, &b);
    for i in 0..8 {
        for j in 0..6 {
            assert_eq!(k[(i, j)], a[(i / 4, j / 2)] * b[(i % 4, j % 2)]);
        }
    }
    let y = gaussian_matrix(3, 8, 3, tag::MISC);
    let fast = mul_kron(&y, &a, &b).unwrap();
    assert!((fast - &y * &k).norm() <= 1e-12 * (&y * &k).norm());
}

#[test]
fn pinv_of_full_rank_square_is_inverse() {
    let m = gaussian_matrix(6, 6, 9, tag::MISC) + Matrix::identity(6, 6) * 6.0;
    let inv = m.clone().try_inverse().unwrap();
    let p = truncated_pinv(&m, 0.0).unwrap();
    assert!((p - &inv).norm() <= 1e-12 * inv.norm());
}

#[test]
fn hosvd_recovers_exact_low_rank() {
    let x = TuckerModel::random(&[7, 8, 9], &[2, 3, 4], 5)
        .unwrap()
        .reconstruct()
        .unwrap();
    let m = hosvd(&x, &[2, 3, 4]).unwrap();
    assert!(relative_error(&m.reconstruct().unwrap(), &x).unwrap() < 1e-12);
}

#[test]
fn sampling_ratio_at_full_rank_is_one() {
    for i in 1..50 {
        assert_eq!(sampling_ratio(i, i), 1.0);
        assert_eq!(rank_for_ratio(1.0, i), i);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn fold_inverts_unfold(dims in dims_strategy(1..=4), seed in any::<u64>()) {
        let t = gaussian_tensor(&dims, seed, tag::MISC);
        for n in 0..dims.len() {
            prop_assert_eq!(fold(&unfold(&t, n).unwrap(), n, &dims).unwrap(), t.clone());
        }
    }

    #[test]
    fn mode_product_matches_naive(dims in dims_strategy(1..=4), rows in 1usize..=4, seed in any::<u64>()) {
        let t = gaussian_tensor(&dims, seed, tag::MISC);
        for (n, &d) in dims.iter().enumerate() {
            let a = gaussian_matrix(rows, d, seed ^ n as u64, tag::SENSING);
            let got = mode_n_product(&t, &a, n).unwrap();
            let want = naive_mode_product(&t, &a, n);
            prop_assert!(got.sub(&want).unwrap().frobenius_norm() <= 1e-12 * (1.0 + want.frobenius_norm()));
        }
    }

    #[test]
    fn same_mode_products_compose(dims in dims_strategy(2..=4), seed in any::<u64>()) {
        let t = gaussian_tensor(&dims, seed, tag::MISC);
        let a = gaussian_matrix(3, dims[1], seed, tag::SENSING);
        let b = gaussian_matrix(2, 3, seed, tag::FACTOR);
        let chained = mode_n_product(&mode_n_product(&t, &a, 1).unwrap(), &b, 1).unwrap();
        let direct = mode_n_product(&t, &(&b * &a), 1).unwrap();
        prop_assert!(relative_error(&chained, &direct).unwrap() <= 1e-12);
    }

    #[test]
    fn distinct_mode_products_commute(dims in dims_strategy(2..=4), seed in any::<u64>()) {
        let t = gaussian_tensor(&dims, seed, tag::MISC);
        let a = gaussian_matrix(2, dims[0], seed, tag::SENSING);
        let b = gaussian_matrix(3, dims[1], seed, tag::FACTOR);
        let ab = mode_n_product(&mode_n_product(&t, &a, 0).unwrap(), &b, 1).unwrap();
        let ba = mode_n_product(&mode_n_product(&t, &b, 1).unwrap(), &a, 0).unwrap();
        prop_assert!(relative_error(&ab, &ba).unwrap() <= 1e-12);
    }

    #[test]
    fn truncated_pinv_keeps_only_large_singular_values(r in 1usize..=12, c in 1usize..=12, frac in 0.0f64..1.2, seed in any::<u64>()) {
        let m = gaussian_matrix(r, c, seed, tag::MISC);
        let f = svd(&m).unwrap();
        let tau = frac * f.sigma_max();
        let p = truncated_pinv(&m, tau).unwrap();
        let kept = f.s.iter().filter(|&&s| s > tau).count();
        let ps = svd(&p).unwrap();
        let nonzero = ps.s.iter().filter(|&&s| s > 1e-9 * (1.0 + ps.sigma_max())).count();
        prop_assert_eq!(nonzero, kept);
        // the retained values of W* are the reciprocals of the kept ones
        if kept > 0 {
            prop_assert!((ps.sigma_max() - 1.0 / f.s[kept - 1]).abs() <= 1e-9 * ps.sigma_max());
        }
    }

    #[test]
    fn exact_recovery_holds(
        dims in proptest::collection::vec(3usize..=8, 2..=4),
        seed in any::<u64>(),
        kind in prop_oneof![Just(SensingKind::Gaussian), Just(SensingKind::Bernoulli)],
    ) {
        let ranks: Vec<usize> = dims.iter().map(|&d| 1 + d / 3).collect();
        let x = TuckerModel::random(&dims, &ranks, seed).unwrap().reconstruct().unwrap();
        let e = SensingEnsemble::generate(&vec![kind; dims.len()], &ranks, &dims, seed.wrapping_add(1)).unwrap();
        // small sign matrices can have dependent rows, which rules out recovery
        for phi in e.matrices() {
            let f = svd(phi).unwrap();
            prop_assume!(f.sigma_min() > 1e-6 * f.sigma_max());
        }
        let m = multiway_measure(&x, &e).unwrap();
        let r = reconstruct(&m, &e, TruncationPolicy::FixedTau(0.0)).unwrap();
        prop_assert!(relative_error(&r.reconstruction, &x).unwrap() <= 1e-6);
    }
}
