//! Exterior powers of vectors and matrices over increasing index tuples.

use std::collections::BTreeMap;

use super::tuples;
use crate::linalg::{Matrix, Vector};
use crate::rational::{rat, Rational};

/// `u₁ ∧ … ∧ u_m` as a sparse map from increasing index tuples to coefficients.
pub fn wedge_vectors(vectors: &[Vector]) -> BTreeMap<Vec<usize>, Rational> {
    let mut acc: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
    acc.insert(Vec::new(), rat(1));
    for u in vectors {
        let mut next: BTreeMap<Vec<usize>, Rational> = BTreeMap::new();
        for (partial, c) in &acc {
            for (r, x) in u.iter().enumerate() {
                if *x == rat(0) || partial.contains(&r) {
                    continue;
                }
                // appending r, then moving it past the larger entries
                let larger = partial.iter().filter(|&&p| p > r).count();
                let mut t = partial.clone();
                t.push(r);
                t.sort_unstable();
                let mut v = c * x;
                if larger % 2 == 1 {
                    v = -v;
                }
                let e = next.entry(t).or_insert_with(|| rat(0));
                *e += v;
            }
        }
        next.retain(|_, c| *c != rat(0));
        acc = next;
    }
    acc
}

/// `Λ^m(g)` on the lexicographic basis of increasing `m`-tuples, which is returned
/// alongside.
pub fn exterior_power(g: &Matrix, m: usize) -> (Vec<Vec<usize>>, Matrix) {
    let basis = tuples(&vec![0; g.cols()], m, None);
    let mut out = Matrix::zeros(basis.len(), basis.len());
    for (col, t) in basis.iter().enumerate() {
        let columns: Vec<Vector> = t.iter().map(|&i| g.column(i)).collect();
        for (tuple, c) in wedge_vectors(&columns) {
            let row = basis.binary_search(&tuple).expect("tuples are sorted");
            out.set(row, col, c);
        }
    }
    (basis, out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn top_exterior_power_is_the_determinant() {
        let g = Matrix::from_i64(&[vec![2, 1, 0], vec![1, 3, 1], vec![0, 4, 1]]);
        let (_, top) = exterior_power(&g, 3);
        assert_eq!(*top.get(0, 0), g.determinant());
    }

    #[test]
    fn wedge_is_alternating() {
        let u = vec![rat(1), rat(2), rat(0)];
        let v = vec![rat(0), rat(1), rat(5)];
        let uv = wedge_vectors(&[u.clone(), v.clone()]);
        let vu = wedge_vectors(&[v, u.clone()]);
        for (t, c) in &uv {
            assert_eq!(vu[t], -c.clone());
        }
        assert!(wedge_vectors(&[u.clone(), u]).is_empty());
    }
}
