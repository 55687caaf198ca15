//! Integer row lattices in `Z^n` via unimodular diagonalization.

/// The lattice spanned by a list of integer row vectors, with transforms
/// `U·A·V = D` where `D` is diagonal.
#[derive(Debug, Clone)]
pub(crate) struct Lattice {
    n: usize,
    u: Vec<Vec<i128>>,
    v: Vec<Vec<i128>>,
    diag: Vec<i128>,
}

impl Lattice {
    pub(crate) fn new(rows: &[Vec<i64>], n: usize) -> Self {
        let m = rows.len();
        let mut a: Vec<Vec<i128>> = rows
            .iter()
            .map(|r| {
                assert_eq!(r.len(), n, "row of wrong dimension");
                r.iter().map(|&x| x as i128).collect()
            })
            .collect();
        let mut u = identity(m);
        let mut v = identity(n);
        let r = m.min(n);
        for t in 0..r {
            loop {
                let Some((pi, pj)) = min_entry(&a, t) else {
                    break;
                };
                a.swap(t, pi);
                u.swap(t, pi);
                for row in a.iter_mut() {
                    row.swap(t, pj);
                }
                for row in v.iter_mut() {
                    row.swap(t, pj);
                }
                let p = a[t][t];
                let mut clean = true;
                for i in t + 1..m {
                    let q = a[i][t].div_euclid(p);
                    if q != 0 {
                        row_sub(&mut a, i, t, q);
                        row_sub(&mut u, i, t, q);
                    }
                    clean &= a[i][t] == 0;
                }
                for j in t + 1..n {
                    let q = a[t][j].div_euclid(p);
                    if q != 0 {
                        col_sub(&mut a, j, t, q);
                        col_sub(&mut v, j, t, q);
                    }
                    clean &= a[t][j] == 0;
                }
                if clean {
                    break;
                }
            }
            if a[t][t] < 0 {
                for x in a[t].iter_mut() {
                    *x = -*x;
                }
                for x in u[t].iter_mut() {
                    *x = -*x;
                }
            }
        }
        let diag = (0..n).map(|i| if i < r { a[i][i] } else { 0 }).collect();
        Lattice { n, u, v, diag }
    }

    fn coords(&self, x: &[i64]) -> Vec<i128> {
        assert_eq!(x.len(), self.n, "vector of wrong dimension");
        (0..self.n)
            .map(|j| (0..self.n).map(|i| x[i] as i128 * self.v[i][j]).sum())
            .collect()
    }

    /// Canonical key of the class `x + L`; equal keys iff same class.
    pub(crate) fn key(&self, x: &[i64]) -> Vec<i64> {
        self.coords(x)
            .into_iter()
            .zip(&self.diag)
            .filter(|&(_, &d)| d != 1)
            .map(|(y, &d)| if d == 0 { y as i64 } else { y.rem_euclid(d) as i64 })
            .collect()
    }

    /// Moduli of the key coordinates; 0 marks a free coordinate.
    pub(crate) fn key_moduli(&self) -> Vec<i64> {
        self.diag.iter().filter(|&&d| d != 1).map(|&d| d as i64).collect()
    }

    pub(crate) fn contains(&self, x: &[i64]) -> bool {
        self.key(x).iter().all(|&c| c == 0)
    }

    /// Integer coefficients `c` with `x = Σ c_i row_i`, if `x ∈ L`.
    pub(crate) fn express(&self, x: &[i64]) -> Option<Vec<i64>> {
        let y = self.coords(x);
        let m = self.u.len();
        let mut z = vec![0i128; m];
        for (i, (&yi, &d)) in y.iter().zip(&self.diag).enumerate() {
            if d == 0 {
                if yi != 0 {
                    return None;
                }
            } else {
                if yi % d != 0 {
                    return None;
                }
                z[i] = yi / d;
            }
        }
        Some(
            (0..m)
                .map(|j| (0..m).map(|i| z[i] * self.u[i][j]).sum::<i128>() as i64)
                .collect(),
        )
    }
}

fn identity(n: usize) -> Vec<Vec<i128>> {
    (0..n)
        .map(|i| (0..n).map(|j| i128::from(i == j)).collect())
        .collect()
}

fn min_entry(a: &[Vec<i128>], t: usize) -> Option<(usize, usize)> {
    let mut best: Option<(i128, usize, usize)> = None;
    for (i, row) in a.iter().enumerate().skip(t) {
        for (j, &x) in row.iter().enumerate().skip(t) {
            if x != 0 && best.is_none_or(|(b, _, _)| x.abs() < b) {
                best = Some((x.abs(), i, j));
            }
        }
    }
    best.map(|(_, i, j)| (i, j))
}

fn row_sub(a: &mut [Vec<i128>], i: usize, t: usize, q: i128) {
    for j in 0..a[i].len() {
        a[i][j] -= q * a[t][j];
    }
}

fn col_sub(a: &mut [Vec<i128>], j: usize, t: usize, q: i128) {
    for row in a.iter_mut() {
        row[j] -= q * row[t];
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_lattice() {
        let l = Lattice::new(&[vec![2, 0], vec![0, 3]], 2);
        assert!(l.contains(&[4, -3]));
        assert!(!l.contains(&[1, 0]));
        assert_eq!(l.express(&[4, -3]), Some(vec![2, -1]));
        assert_eq!(l.key_moduli().iter().product::<i64>(), 6);
    }

    #[test]
    fn diagonal_line() {
        let l = Lattice::new(&[vec![1, 1]], 2);
        assert_eq!(l.key(&[2, 3]), l.key(&[-1, 0]));
        assert_ne!(l.key(&[1, 0]), l.key(&[0, 0]));
        assert_eq!(l.express(&[3, 3]), Some(vec![3]));
        assert_eq!(l.express(&[3, 2]), None);
    }

    #[test]
    fn express_reconstructs_members() {
        let rows = vec![vec![2, 4, 0], vec![0, 6, 3], vec![4, 0, 0]];
        let l = Lattice::new(&rows, 3);
        for a in -3i64..=3 {
            for b in -3i64..=3 {
                for c in -2i64..=2 {
                    let x: Vec<i64> = (0..3)
                        .map(|j| a * rows[0][j] + b * rows[1][j] + c * rows[2][j])
                        .collect();
                    let coeffs = l.express(&x).expect("member");
                    let back: Vec<i64> = (0..3)
                        .map(|j| (0..3).map(|i| coeffs[i] * rows[i][j]).sum())
                        .collect();
                    assert_eq!(back, x);
                }
            }
        }
        assert!(!l.contains(&[1, 0, 0]));
    }

    #[test]
    fn empty_lattice_keys_are_vectors() {
        let l = Lattice::new(&[], 2);
        assert_eq!(l.key(&[3, -1]), vec![3, -1]);
        assert_eq!(l.express(&[0, 0]), Some(vec![]));
    }
}
