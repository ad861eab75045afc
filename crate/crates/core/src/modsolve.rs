//! Linear systems over `Z_m` for arbitrary (composite) `m ≥ 2`.
//!
//! Solving goes through the Howell form of the augmented matrix `[A | r]`.
//! Rows are combined with unimodular extended-gcd transforms, each pivot is
//! normalized to a divisor of `m`, and for each pivot `p` the annihilated
//! row `(m/p)·row` is fed back into elimination. The Howell property makes
//! back-substitution with free variables fixed to 0 complete: whenever the
//! system is solvable, every pivot divides its residual.

use serde::{Deserialize, Serialize};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ModSystem {
    modulus: u64,
    cols: usize,
    rows: Vec<Vec<u64>>,
    rhs: Vec<u64>,
}

impl ModSystem {
    pub fn new(modulus: u64, cols: usize) -> Self {
        assert!(modulus >= 2, "modulus must be at least 2");
        ModSystem { modulus, cols, rows: Vec::new(), rhs: Vec::new() }
    }

    /// Appends `coeffs · x ≡ rhs`; entries are reduced into `0..modulus`.
    pub fn push_row(&mut self, coeffs: &[i64], rhs: i64) {
        assert_eq!(coeffs.len(), self.cols, "row length must equal column count");
        let m = self.modulus as i64;
        self.rows.push(coeffs.iter().map(|&c| c.rem_euclid(m) as u64).collect());
        self.rhs.push(rhs.rem_euclid(m) as u64);
    }

    pub fn push_row_u(&mut self, coeffs: &[u64], rhs: u64) {
        assert_eq!(coeffs.len(), self.cols, "row length must equal column count");
        self.rows.push(coeffs.iter().map(|&c| c % self.modulus).collect());
        self.rhs.push(rhs % self.modulus);
    }

    /// `x_var ≡ value`
    pub fn pin(&mut self, var: usize, value: i64) {
        let mut row = vec![0i64; self.cols];
        row[var] = 1;
        self.push_row(&row, value);
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }
    pub fn cols(&self) -> usize {
        self.cols
    }
    pub fn row_count(&self) -> usize {
        self.rows.len()
    }
    pub fn rows(&self) -> &[Vec<u64>] {
        &self.rows
    }
    pub fn rhs(&self) -> &[u64] {
        &self.rhs
    }

    /// Drops rows that are zero on both sides.
    pub fn drop_zero_rows(&mut self) {
        let keep: Vec<bool> = self
            .rows
            .iter()
            .zip(&self.rhs)
            .map(|(r, &b)| b != 0 || r.iter().any(|&c| c != 0))
            .collect();
        let mut it = keep.iter();
        self.rows.retain(|_| *it.next().unwrap());
        let mut it = keep.iter();
        self.rhs.retain(|_| *it.next().unwrap());
    }

    /// `Mx ≡ rhs (mod modulus)`
    pub fn verify(&self, x: &[u64]) -> bool {
        if x.len() != self.cols {
            return false;
        }
        let m = self.modulus as u128;
        self.rows.iter().zip(&self.rhs).all(|(row, &b)| {
            let lhs = row.iter().zip(x).fold(0u128, |acc, (&c, &v)| (acc + c as u128 * (v as u128 % m)) % m);
            lhs == b as u128
        })
    }

    /// An equivalent system in Howell form. An inconsistent system keeps a
    /// row `0 ≡ g` with `g ≠ 0`.
    pub fn reduced(&self) -> ModSystem {
        let aug = howell(self.modulus, self.augmented(), self.cols + 1);
        let mut out = ModSystem::new(self.modulus, self.cols);
        for row in aug {
            let (coeffs, b) = row.split_at(self.cols);
            out.rows.push(coeffs.to_vec());
            out.rhs.push(b[0]);
        }
        out
    }

    /// Some solution, deterministic for a given system, or `None` iff the
    /// system has no solution over `Z_modulus`.
    pub fn solve(&self) -> Option<Vec<u64>> {
        let m = self.modulus;
        let h = howell(m, self.augmented(), self.cols + 1);
        let mut x = vec![0u64; self.cols];
        for row in h.iter().rev() {
            let c = row.iter().position(|&v| v != 0).expect("Howell rows are nonzero");
            if c == self.cols {
                return None;
            }
            let mut acc = row[self.cols] as u128;
            for j in c + 1..self.cols {
                acc = (acc + (m as u128 - row[j] as u128) * x[j] as u128) % m as u128;
            }
            let p = row[c] as u128;
            assert!(acc % p == 0, "Howell form guarantees divisibility");
            x[c] = (acc / p) as u64;
        }
        assert!(self.verify(&x), "solution must verify");
        Some(x)
    }

    fn augmented(&self) -> Vec<Vec<u64>> {
        self.rows
            .iter()
            .zip(&self.rhs)
            .map(|(r, &b)| {
                let mut v = r.clone();
                v.push(b);
                v
            })
            .collect()
    }
}

/// Convenience wrapper for [`ModSystem::solve`].
pub fn solve(sys: &ModSystem) -> Option<Vec<u64>> {
    sys.solve()
}

/// Convenience wrapper for [`ModSystem::verify`].
pub fn verify(sys: &ModSystem, x: &[u64]) -> bool {
    sys.verify(x)
}

pub(crate) fn gcd(mut a: u64, mut b: u64) -> u64 {
    while b != 0 {
        (a, b) = (b, a % b);
    }
    a
}

/// `(g, s, t)` with `s·a + t·b = g = gcd(a, b)` over the integers.
fn ext_gcd(a: i128, b: i128) -> (i128, i128, i128) {
    let (mut r0, mut r1) = (a, b);
    let (mut s0, mut s1) = (1i128, 0i128);
    let (mut t0, mut t1) = (0i128, 1i128);
    while r1 != 0 {
        let q = r0 / r1;
        (r0, r1) = (r1, r0 - q * r1);
        (s0, s1) = (s1, s0 - q * s1);
        (t0, t1) = (t1, t0 - q * t1);
    }
    (r0, s0, t0)
}

fn md(v: i128, m: u64) -> u64 {
    v.rem_euclid(m as i128) as u64
}

/// A unit `w` of `Z_m` with `w·a ≡ gcd(a, m)`.
fn unit_normalizer(a: u64, m: u64) -> u64 {
    let g = gcd(a, m);
    let (a1, m1) = (a / g, m / g);
    if m1 == 1 {
        return 1;
    }
    let (_, s, _) = ext_gcd(a1 as i128, m1 as i128);
    let w0 = md(s, m1);
    let mut w = w0;
    while gcd(w, m) != 1 {
        w += m1;
    }
    w % m
}

fn howell(m: u64, mut rows: Vec<Vec<u64>>, ncols: usize) -> Vec<Vec<u64>> {
    let mut r = 0;
    for c in 0..ncols {
        let pick = (r..rows.len()).filter(|&i| rows[i][c] != 0).min_by_key(|&i| (gcd(rows[i][c], m), i));
        let Some(p) = pick else { continue };
        rows.swap(r, p);
        for i in r + 1..rows.len() {
            if rows[i][c] == 0 {
                continue;
            }
            let (a, b) = (rows[r][c] as i128, rows[i][c] as i128);
            let (g, s, t) = ext_gcd(a, b);
            let (u, v) = (-b / g, a / g);
            for j in c..ncols {
                let (x, y) = (rows[r][j] as i128, rows[i][j] as i128);
                rows[r][j] = md(s * x + t * y, m);
                rows[i][j] = md(u * x + v * y, m);
            }
        }
        let w = unit_normalizer(rows[r][c], m) as u128;
        for j in c..ncols {
            rows[r][j] = ((rows[r][j] as u128 * w) % m as u128) as u64;
        }
        let piv = rows[r][c];
        for i in 0..r {
            let q = rows[i][c] / piv;
            if q != 0 {
                for j in c..ncols {
                    rows[i][j] = md(rows[i][j] as i128 - q as i128 * rows[r][j] as i128, m);
                }
            }
        }
        let ann = m / piv;
        if ann != m {
            let extra: Vec<u64> = rows[r].iter().map(|&v| ((v as u128 * ann as u128) % m as u128) as u64).collect();
            if extra.iter().any(|&v| v != 0) {
                rows.push(extra);
            }
        }
        r += 1;
    }
    rows.truncate(r);
    rows
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unit_normalizer_hits_gcd() {
        for m in 2..40u64 {
            for a in 1..m {
                let w = unit_normalizer(a, m);
                assert_eq!(gcd(w, m), 1, "a={a} m={m}");
                assert_eq!((w * a) % m, gcd(a, m), "a={a} m={m}");
            }
        }
    }

    #[test]
    fn zero_divisor_needs_annihilator_row() {
        // 2x + y = 1, 2x = 0 (mod 4): y = 1, x ∈ {0, 2}.
        let mut s = ModSystem::new(4, 2);
        s.push_row(&[2, 1], 1);
        s.push_row(&[2, 0], 0);
        let x = s.solve().unwrap();
        assert!(s.verify(&x));
        // 2x ≡ 1 (mod 4) has no solution.
        let mut t = ModSystem::new(4, 1);
        t.push_row(&[2], 1);
        assert_eq!(t.solve(), None);
    }

    #[test]
    fn reduced_preserves_solution_set() {
        let mut s = ModSystem::new(6, 3);
        s.push_row(&[2, 3, 4], 1);
        s.push_row(&[3, 0, 3], 3);
        let h = s.reduced();
        for a in 0..6 {
            for b in 0..6 {
                for c in 0..6 {
                    assert_eq!(s.verify(&[a, b, c]), h.verify(&[a, b, c]));
                }
            }
        }
    }
}
