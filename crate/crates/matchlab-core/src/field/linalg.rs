//! Dense row-vector linear algebra over the prime field F_p. Matrices are
//! `Vec<Vec<u64>>` with entries reduced mod p; dimensions here are tiny
//! (the extension degree), so clarity beats cleverness.

fn inv_mod(a: u64, p: u64) -> u64 {
    let mut result = 1u64;
    let mut base = a % p;
    let mut e = p - 2;
    while e > 0 {
        if e & 1 == 1 {
            result = result * base % p;
        }
        base = base * base % p;
        e >>= 1;
    }
    result
}

/// Reduced row echelon form with unit pivots, zero rows dropped. The result
/// is the canonical matrix of the row space.
pub fn rref(rows: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    rref_with_pivots(rows, p).0
}

// Elimination reads one row while mutating another, so index loops stay.
#[allow(clippy::needless_range_loop)]
pub fn rref_with_pivots(rows: &[Vec<u64>], p: u64) -> (Vec<Vec<u64>>, Vec<usize>) {
    let mut m: Vec<Vec<u64>> = rows
        .iter()
        .map(|r| r.iter().map(|&c| c % p).collect())
        .collect();
    let width = m.first().map_or(0, Vec::len);
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..width {
        let Some(sel) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, sel);
        let inv = inv_mod(m[row][col], p);
        for c in m[row].iter_mut() {
            *c = *c * inv % p;
        }
        for r in 0..m.len() {
            if r != row && m[r][col] != 0 {
                let factor = m[r][col];
                for c in 0..width {
                    let sub = factor * m[row][c] % p;
                    m[r][c] = (m[r][c] + p - sub) % p;
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    m.truncate(row);
    (m, pivots)
}

pub fn rank(rows: &[Vec<u64>], p: u64) -> usize {
    rref(rows, p).len()
}

/// Right kernel `{x : M·x = 0}` of `m` (rows are constraint functionals),
/// returned as canonical (RREF) row vectors of length `width`. An empty
/// constraint list yields the full space.
pub fn kernel(m: &[Vec<u64>], p: u64, width: usize) -> Vec<Vec<u64>> {
    let (r, pivots) = rref_with_pivots(m, p);
    let mut basis = Vec::new();
    let pivot_set: std::collections::HashSet<usize> = pivots.iter().copied().collect();
    for free_col in 0..width {
        if pivot_set.contains(&free_col) {
            continue;
        }
        let mut v = vec![0u64; width];
        v[free_col] = 1;
        for (ri, &pc) in pivots.iter().enumerate() {
            // pivot variable = -coefficient of the free column
            v[pc] = (p - r[ri][free_col] % p) % p;
        }
        basis.push(v);
    }
    rref(&basis, p)
}

/// Left kernel `{x : x·M = 0}` where `M` has `width` columns and rows `m`.
pub fn left_kernel(m: &[Vec<u64>], p: u64, _width: usize) -> Vec<Vec<u64>> {
    let t = transpose(m);
    kernel(&t, p, m.len())
}

pub fn transpose(m: &[Vec<u64>]) -> Vec<Vec<u64>> {
    if m.is_empty() {
        return vec![];
    }
    let rows = m.len();
    let cols = m[0].len();
    let mut t = vec![vec![0u64; rows]; cols];
    for (i, r) in m.iter().enumerate() {
        for (j, &c) in r.iter().enumerate() {
            t[j][i] = c;
        }
    }
    t
}

/// Row vector times matrix: `v·M` where `M` is given by rows.
pub fn vec_mat(v: &[u64], m: &[Vec<u64>], p: u64) -> Vec<u64> {
    let cols = m.first().map_or(0, Vec::len);
    let mut out = vec![0u64; cols];
    for (i, &c) in v.iter().enumerate() {
        if c == 0 {
            continue;
        }
        for j in 0..cols {
            out[j] = (out[j] + c * m[i][j]) % p;
        }
    }
    out
}

pub fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    a.iter().map(|r| vec_mat(r, b, p)).collect()
}

/// Inverse of a square matrix, if it exists.
#[allow(clippy::needless_range_loop, clippy::explicit_counter_loop)]
pub fn mat_inv(m: &[Vec<u64>], p: u64) -> Option<Vec<Vec<u64>>> {
    let n = m.len();
    let mut aug: Vec<Vec<u64>> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row: Vec<u64> = r.iter().map(|&c| c % p).collect();
            row.extend((0..n).map(|j| u64::from(j == i)));
            row
        })
        .collect();
    let mut row = 0;
    for col in 0..n {
        let sel = (row..n).find(|&r| aug[r][col] != 0)?;
        aug.swap(row, sel);
        let inv = inv_mod(aug[row][col], p);
        for c in aug[row].iter_mut() {
            *c = *c * inv % p;
        }
        for r in 0..n {
            if r != row && aug[r][col] != 0 {
                let factor = aug[r][col];
                for c in 0..2 * n {
                    let sub = factor * aug[row][c] % p;
                    aug[r][c] = (aug[r][c] + p - sub) % p;
                }
            }
        }
        row += 1;
    }
    Some(aug.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn is_zero_vec(v: &[u64]) -> bool {
    v.iter().all(|&c| c == 0)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rref_is_canonical_and_idempotent() {
        let m = vec![vec![1, 1, 0], vec![0, 1, 1], vec![1, 0, 1]];
        let r = rref(&m, 2);
        assert_eq!(r, vec![vec![1, 0, 1], vec![0, 1, 1]]);
        assert_eq!(rref(&r, 2), r);
    }

    #[test]
    fn kernel_dimensions_complement_rank() {
        let m = vec![vec![1, 2, 0, 1], vec![0, 1, 1, 2]];
        let k = kernel(&m, 3, 4);
        assert_eq!(k.len(), 2);
        for v in &k {
            for row in &m {
                let dot: u64 = v.iter().zip(row).map(|(&a, &b)| a * b).sum();
                assert_eq!(dot % 3, 0);
            }
        }
    }

    #[test]
    fn kernel_of_empty_constraints_is_full() {
        let k = kernel(&[], 2, 3);
        assert_eq!(k.len(), 3);
    }

    #[test]
    fn inverse_round_trip() {
        let m = vec![vec![1, 1], vec![1, 0]];
        let inv = mat_inv(&m, 2).unwrap();
        let prod = mat_mul(&m, &inv, 2);
        assert_eq!(prod, vec![vec![1, 0], vec![0, 1]]);
        let singular = vec![vec![1, 1], vec![1, 1]];
        assert!(mat_inv(&singular, 2).is_none());
    }
}
