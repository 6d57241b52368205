use crate::error::{Error, Result};

/// Column vectors over GF(p), stored reduced into `0..p`.
#[derive(Debug)]
pub(super) struct LinearMatrix {
    prime: u64,
    rows: usize,
    columns: Vec<Vec<u64>>,
    raw: Vec<Vec<i64>>,
}

impl LinearMatrix {
    pub(super) fn new(prime: u64, columns: Vec<Vec<i64>>) -> Result<Self> {
        if !is_prime(prime) || prime >= 1 << 31 {
            return Err(Error::InvalidMatroid(format!(
                "field size {prime} is not a prime below 2^31"
            )));
        }
        let rows = columns.first().map_or(0, Vec::len);
        if columns.iter().any(|c| c.len() != rows) {
            return Err(Error::InvalidMatroid("columns have different lengths".into()));
        }
        let p = prime as i64;
        let reduced = columns
            .iter()
            .map(|c| c.iter().map(|&x| x.rem_euclid(p) as u64).collect())
            .collect();
        Ok(Self {
            prime,
            rows,
            columns: reduced,
            raw: columns,
        })
    }

    pub(super) fn prime(&self) -> u64 {
        self.prime
    }

    pub(super) fn raw_columns(&self) -> &[Vec<i64>] {
        &self.raw
    }

    /// Gaussian elimination: `true` iff the selected columns are linearly
    /// independent.
    pub(super) fn columns_independent(&self, set: &[usize]) -> bool {
        if set.len() > self.rows {
            return false;
        }
        let p = self.prime;
        // basis rows kept in echelon form keyed by pivot position
        let mut basis: Vec<(usize, Vec<u64>)> = Vec::with_capacity(set.len());
        for &c in set {
            let mut v = self.columns[c].clone();
            for (pivot, row) in &basis {
                let factor = v[*pivot];
                if factor != 0 {
                    for (x, &r) in v.iter_mut().zip(row) {
                        *x = (*x + p - factor * r % p) % p;
                    }
                }
            }
            match v.iter().position(|&x| x != 0) {
                None => return false,
                Some(pivot) => {
                    let inv = mod_pow(v[pivot], p - 2, p);
                    for x in v.iter_mut() {
                        *x = *x * inv % p;
                    }
                    // keep earlier rows reduced at the new pivot
                    for (_, row) in basis.iter_mut() {
                        let factor = row[pivot];
                        if factor != 0 {
                            for (x, &r) in row.iter_mut().zip(&v) {
                                *x = (*x + p - factor * r % p) % p;
                            }
                        }
                    }
                    basis.push((pivot, v));
                }
            }
        }
        true
    }
}

fn mod_pow(mut base: u64, mut exp: u64, modulus: u64) -> u64 {
    let mut acc = 1 % modulus;
    base %= modulus;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % modulus;
        }
        base = base * base % modulus;
        exp >>= 1;
    }
    acc
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gf2_dependence() {
        let m = LinearMatrix::new(2, vec![vec![1, 0], vec![0, 1], vec![1, 1]]).unwrap();
        assert!(m.columns_independent(&[0, 1]));
        assert!(m.columns_independent(&[1, 2]));
        assert!(!m.columns_independent(&[0, 1, 2]));
    }

    #[test]
    fn gf3_sees_what_gf2_does_not() {
        // (1,1) and (1,-1) are independent over GF(3) and equal over GF(2)
        let cols = vec![vec![1, 1], vec![1, -1]];
        assert!(LinearMatrix::new(3, cols.clone()).unwrap().columns_independent(&[0, 1]));
        assert!(!LinearMatrix::new(2, cols).unwrap().columns_independent(&[0, 1]));
    }

    #[test]
    fn zero_column_is_a_loop() {
        let m = LinearMatrix::new(5, vec![vec![0, 0, 0]]).unwrap();
        assert!(!m.columns_independent(&[0]));
        assert!(m.columns_independent(&[]));
    }

    #[test]
    fn rejects_composite_field() {
        assert!(LinearMatrix::new(4, vec![]).is_err());
        assert!(LinearMatrix::new(7, vec![vec![1], vec![1, 2]]).is_err());
    }
}
