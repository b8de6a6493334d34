//! Small integer matrices: frames of lattice bases.

pub type IntVector = Vec<i64>;
/// Row-major square matrix.
pub type IntMatrix = Vec<Vec<i64>>;

/// The matrix whose j-th column is `cols[j]`.
pub fn cols_to_mat(cols: &[IntVector]) -> IntMatrix {
    let m = cols.len();
    (0..cols[0].len()).map(|i| (0..m).map(|j| cols[j][i]).collect()).collect()
}

/// Bareiss fraction-free determinant.
pub fn determinant(a: &IntMatrix) -> i64 {
    let n = a.len();
    if n == 0 {
        return 1;
    }
    let mut m: Vec<Vec<i128>> = a.iter().map(|r| r.iter().map(|&x| x as i128).collect()).collect();
    let mut sign = 1i128;
    let mut prev = 1i128;
    for k in 0..n - 1 {
        if m[k][k] == 0 {
            let Some(p) = (k + 1..n).find(|&i| m[i][k] != 0) else { return 0 };
            m.swap(k, p);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (m[i][j] * m[k][k] - m[i][k] * m[k][j]) / prev;
            }
        }
        prev = m[k][k];
    }
    (sign * m[n - 1][n - 1]) as i64
}

/// Exact inverse of a unimodular integer matrix via the adjugate.
pub fn inverse(a: &IntMatrix) -> Option<IntMatrix> {
    let n = a.len();
    let det = determinant(a);
    if det.abs() != 1 {
        return None;
    }
    let minor = |r: usize, c: usize| -> IntMatrix {
        (0..n).filter(|&i| i != r).map(|i| (0..n).filter(|&j| j != c).map(|j| a[i][j]).collect()).collect()
    };
    Some(
        (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| {
                        let s = if (i + j) % 2 == 0 { 1 } else { -1 };
                        s * determinant(&minor(j, i)) * det
                    })
                    .collect()
            })
            .collect(),
    )
}

pub fn mat_mul(a: &IntMatrix, b: &IntMatrix) -> IntMatrix {
    let n = a.len();
    let p = b[0].len();
    (0..n).map(|i| (0..p).map(|j| (0..b.len()).map(|k| a[i][k] * b[k][j]).sum()).collect()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn inverse_round_trip() {
        let g = vec![vec![1, 2, 0], vec![0, 1, 3], vec![1, 2, 1]];
        assert_eq!(determinant(&g), 1);
        let gi = inverse(&g).unwrap();
        assert_eq!(mat_mul(&g, &gi), vec![vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]);
        assert!(inverse(&vec![vec![2, 0], vec![0, 1]]).is_none());
    }
}
