use kitaev::linalg::{dense_rank, fmt_q, parse_q, q, qi, SparseMatrix, Q};
use proptest::prelude::*;

fn m(rows: &[&[i64]]) -> SparseMatrix {
    let dense: Vec<Vec<Q>> = rows.iter().map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
    SparseMatrix::from_dense(&dense)
}

#[test]
fn kron_examples() {
    assert_eq!(SparseMatrix::identity(2).kron(&SparseMatrix::identity(3)), SparseMatrix::identity(6));
    let a = m(&[&[1, 2], &[3, 4]]);
    assert_eq!(a.kron(&SparseMatrix::identity(1)), a);
    assert_eq!(m(&[&[0, 1], &[1, 0]]).kron(&m(&[&[2]])), m(&[&[0, 2], &[2, 0]]));
}

#[test]
fn kron_index_convention() {
    let a = m(&[&[1, 0], &[0, 0]]);
    let b = m(&[&[0, 5, 0], &[0, 0, 0], &[0, 0, 0]]);
    let k = a.kron(&b);
    assert_eq!(k.nnz(), 1);
    assert_eq!(k.get(0, 1), qi(5));
}

#[test]
fn kernel_dimension_examples() {
    assert_eq!(SparseMatrix::identity(7).kernel_dimension(), 0);
    assert_eq!(SparseMatrix::zeros(5, 5).kernel_dimension(), 5);
    assert_eq!(m(&[&[1, 1], &[1, 1]]).kernel_dimension(), 1);
}

#[test]
fn trace_examples() {
    assert_eq!(SparseMatrix::identity(4).trace().unwrap(), qi(4));
    assert_eq!(SparseMatrix::zeros(3, 3).trace().unwrap(), qi(0));
    assert!(SparseMatrix::zeros(2, 3).trace().is_err());
}

#[test]
fn rationals_stay_reduced() {
    let x = q(2, 4) + q(1, 6);
    assert_eq!(x, q(2, 3));
    assert_eq!(fmt_q(&x), "2/3");
    assert_eq!(fmt_q(&q(-6, 3)), "-2");
    assert_eq!(parse_q("4/-6").unwrap(), q(-2, 3));
    assert!(parse_q("1/0").is_err());
    assert!(parse_q("x").is_err());
}

fn small_matrix(max: usize) -> impl Strategy<Value = SparseMatrix> {
    (1..=max, 1..=max).prop_flat_map(|(r, c)| {
        prop::collection::vec(prop::collection::vec((-3i64..=3, 1i64..=3), c), r).prop_map(move |rows| {
            let dense: Vec<Vec<Q>> = rows
                .into_iter()
                .map(|row| row.into_iter().map(|(n, d)| if n.abs() <= 1 { qi(0) } else { q(n, d) }).collect())
                .collect();
            SparseMatrix::from_dense(&dense)
        })
    })
}

fn square_of(n: usize) -> impl Strategy<Value = SparseMatrix> {
    prop::collection::vec(-2i64..=2, n * n).prop_map(move |v| {
        let dense: Vec<Vec<Q>> = v.chunks(n).map(|r| r.iter().map(|&x| qi(x)).collect()).collect();
        SparseMatrix::from_dense(&dense)
    })
}

fn square(max: usize) -> impl Strategy<Value = SparseMatrix> {
    (1..=max).prop_flat_map(square_of)
}

fn square_pair(max: usize) -> impl Strategy<Value = (SparseMatrix, SparseMatrix)> {
    (1..=max).prop_flat_map(|n| (square_of(n), square_of(n)))
}

proptest! {
    #[test]
    fn kron_is_associative(a in small_matrix(3), b in small_matrix(3), c in small_matrix(2)) {
        prop_assert_eq!(a.kron(&b).kron(&c), a.kron(&b.kron(&c)));
    }

    #[test]
    fn kron_trace_is_multiplicative(a in square(4), b in square(4)) {
        prop_assert_eq!(a.kron(&b).trace().unwrap(), a.trace().unwrap() * b.trace().unwrap());
    }

    #[test]
    fn kron_respects_products((a, c) in square_pair(3), (b, d) in square_pair(3)) {
        prop_assert_eq!(a.kron(&b).mul(&c.kron(&d)), a.mul(&c).kron(&b.mul(&d)));
    }

    #[test]
    fn rank_nullity_matches_dense_oracle(a in small_matrix(8)) {
        let rank = a.rank();
        prop_assert_eq!(rank, dense_rank(&a.to_dense()));
        prop_assert_eq!(rank + a.kernel_dimension(), a.cols());
        prop_assert_eq!(a.transpose().rank(), rank);
    }

    #[test]
    fn trace_of_product_matches_product((a, b) in square_pair(5)) {
        prop_assert_eq!(a.trace_of_product(&b).unwrap(), a.mul(&b).trace().unwrap());
    }

    #[test]
    fn rational_text_round_trip(n in -10_000i64..10_000, d in 1i64..10_000) {
        let x = q(n, d);
        prop_assert_eq!(parse_q(&fmt_q(&x)).unwrap(), x.clone());
        prop_assert!(num_integer::Integer::gcd(x.numer(), x.denom()) == num_bigint::BigInt::from(1) || n == 0);
    }

    #[test]
    fn addition_is_exact(a in -50i64..50, b in 1i64..50, c in -50i64..50, d in 1i64..50) {
        prop_assert_eq!(q(a, b) + q(c, d), q(a * d + c * b, b * d));
    }
}
