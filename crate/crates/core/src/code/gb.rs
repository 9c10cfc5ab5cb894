use serde::{Deserialize, Serialize};

use super::SparseCheckMatrix;
use crate::error::{Error, Result};
use crate::pauli::Pauli;

/// Generalized bicycle code: binary polynomials `a(x)`, `b(x)` modulo
/// `x^ell − 1`, given by their exponent sets.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GbSpec {
    pub ell: usize,
    pub a: Vec<usize>,
    pub b: Vec<usize>,
}

impl GbSpec {
    /// Validates and sorts the exponent sets.
    pub fn new(ell: usize, mut a: Vec<usize>, mut b: Vec<usize>) -> Result<Self> {
        if ell == 0 {
            return Err(Error::InvalidGbSpec("ell must be positive".into()));
        }
        for (name, poly) in [("a", &mut a), ("b", &mut b)] {
            if poly.is_empty() {
                return Err(Error::InvalidGbSpec(format!("{name}(x) has no terms")));
            }
            poly.sort_unstable();
            if let Some(&e) = poly.iter().find(|&&e| e >= ell) {
                return Err(Error::InvalidGbSpec(format!(
                    "{name}: exponent {e} not in [0, {ell})"
                )));
            }
            if poly.windows(2).any(|w| w[0] == w[1]) {
                return Err(Error::InvalidGbSpec(format!("{name}: repeated exponent")));
            }
        }
        Ok(GbSpec { ell, a, b })
    }
}

/// Stacks `H_X = [A | B]` (X rows) over `H_Z = [Bᵀ | Aᵀ]` (Z rows), where
/// `A`, `B` are the `ell × ell` circulants of `a(x)`, `b(x)`.
pub fn build_gb(spec: &GbSpec) -> Result<SparseCheckMatrix> {
    let spec = GbSpec::new(spec.ell, spec.a.clone(), spec.b.clone())?;
    let ell = spec.ell;
    // Row r of a circulant has ones at (r + e) mod ell; row r of its transpose
    // at (r − e) mod ell.
    let fwd = |r: usize, e: usize| (r + e) % ell;
    let back = |r: usize, e: usize| (r + ell - e) % ell;

    let mut rows = Vec::with_capacity(2 * ell);
    for r in 0..ell {
        let mut row: Vec<(usize, Pauli)> = spec.a.iter().map(|&e| (fwd(r, e), Pauli::X)).collect();
        row.extend(spec.b.iter().map(|&e| (ell + fwd(r, e), Pauli::X)));
        rows.push(row);
    }
    for r in 0..ell {
        let mut row: Vec<(usize, Pauli)> = spec.b.iter().map(|&e| (back(r, e), Pauli::Z)).collect();
        row.extend(spec.a.iter().map(|&e| (ell + back(r, e), Pauli::Z)));
        rows.push(row);
    }
    Ok(SparseCheckMatrix::new(2 * ell, rows)?.with_gb(spec))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::code::{compute_params, TannerGraph};
    use proptest::prelude::*;

    /// GF(2) polynomial as a bit mask (bit i = coefficient of x^i).
    fn poly(exps: &[usize]) -> u128 {
        exps.iter().fold(0, |acc, &e| acc ^ (1u128 << e))
    }

    fn degree(p: u128) -> Option<u32> {
        (p != 0).then(|| 127 - p.leading_zeros())
    }

    fn poly_mod(mut a: u128, b: u128) -> u128 {
        let db = degree(b).unwrap();
        while let Some(da) = degree(a) {
            if da < db {
                break;
            }
            a ^= b << (da - db);
        }
        a
    }

    fn poly_gcd(mut a: u128, mut b: u128) -> u128 {
        while b != 0 {
            let r = poly_mod(a, b);
            a = b;
            b = r;
        }
        a
    }

    #[test]
    fn toy_layout() {
        let h = build_gb(&GbSpec::new(3, vec![0, 1], vec![0, 2]).unwrap()).unwrap();
        assert_eq!((h.m(), h.n()), (6, 6));
        assert!(h.rows().iter().all(|r| r.len() == 4));
        assert_eq!(
            h.row(0),
            &[(0, Pauli::X), (1, Pauli::X), (3, Pauli::X), (5, Pauli::X)]
        );
        // Bᵀ row 0: b = {0, 2} -> columns 0 and (0 - 2) mod 3 = 1; Aᵀ row 0: 3 + {0, 2}.
        assert_eq!(
            h.row(3),
            &[(0, Pauli::Z), (1, Pauli::Z), (3, Pauli::Z), (5, Pauli::Z)]
        );
        assert!(h.is_orthogonal());
        assert_eq!(compute_params(&h).k, 2);
    }

    #[test]
    fn gb_126_28() {
        let spec = GbSpec::new(63, vec![0, 1, 14, 16, 22], vec![0, 3, 13, 20, 42]).unwrap();
        let h = build_gb(&spec).unwrap();
        let p = compute_params(&h);
        assert_eq!((p.n, p.k, p.m, p.d_c, p.d_v), (126, 28, 126, 10, 10));
        assert!(p.overcomplete && p.regular);
        assert!(h.is_orthogonal());
        assert_eq!(TannerGraph::new(&h).num_edges(), 1260);
    }

    #[test]
    fn rejects_invalid_specs() {
        assert!(GbSpec::new(0, vec![0], vec![0]).is_err());
        assert!(GbSpec::new(3, vec![], vec![0]).is_err());
        assert!(GbSpec::new(3, vec![3], vec![0]).is_err());
        assert!(GbSpec::new(3, vec![1, 1], vec![0]).is_err());
        let bad = GbSpec {
            ell: 4,
            a: vec![7],
            b: vec![0],
        };
        assert!(matches!(build_gb(&bad), Err(Error::InvalidGbSpec(_))));
    }

    fn arb_spec() -> impl Strategy<Value = GbSpec> {
        (2usize..24).prop_flat_map(|ell| {
            (
                Just(ell),
                proptest::sample::subsequence((0..ell).collect::<Vec<_>>(), 1..=ell.min(5)),
                proptest::sample::subsequence((0..ell).collect::<Vec<_>>(), 1..=ell.min(5)),
            )
                .prop_map(|(ell, a, b)| GbSpec::new(ell, a, b).unwrap())
        })
    }

    proptest! {
        #[test]
        fn always_orthogonal(spec in arb_spec()) {
            prop_assert!(build_gb(&spec).unwrap().is_orthogonal());
        }

        #[test]
        fn k_is_twice_gcd_degree(spec in arb_spec()) {
            let h = build_gb(&spec).unwrap();
            let g = poly_gcd(poly_gcd(poly(&spec.a), poly(&spec.b)), (1u128 << spec.ell) | 1);
            let k = compute_params(&h).k;
            prop_assert_eq!(k % 2, 0);
            prop_assert_eq!(k, 2 * degree(g).unwrap() as usize);
        }

        #[test]
        fn edge_count_and_degrees(spec in arb_spec()) {
            let h = build_gb(&spec).unwrap();
            let g = TannerGraph::new(&h);
            prop_assert_eq!(g.num_edges(), h.nnz());
            let w = spec.a.len() + spec.b.len();
            prop_assert!(g.cn_degrees().iter().all(|&d| d == w));
            prop_assert!(g.vn_degrees().iter().all(|&d| d == w));
        }
    }
}
