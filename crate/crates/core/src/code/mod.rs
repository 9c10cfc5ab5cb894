//! Stabilizer check matrices over GF(4) and their Tanner graphs.

mod gb;
mod gf2;
mod io;

use std::ops::Range;

use serde::{Deserialize, Serialize};

pub use gb::{build_gb, GbSpec};
pub use gf2::gf2_rank;
pub use io::{load_code, parse_code, save_code, write_code};

use crate::error::{Error, Result};
use crate::pauli::{self, Pauli};

/// An `m × n` GF(4) parity-check matrix stored row-wise as sorted
/// `(column, symbol)` lists with no identity entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SparseCheckMatrix {
    n: usize,
    rows: Vec<Vec<(usize, Pauli)>>,
    gb: Option<GbSpec>,
}

impl SparseCheckMatrix {
    /// Builds a matrix, sorting each row by column. Rejects duplicate
    /// columns, identity entries and out-of-range columns.
    pub fn new(n: usize, mut rows: Vec<Vec<(usize, Pauli)>>) -> Result<Self> {
        for (i, row) in rows.iter_mut().enumerate() {
            row.sort_by_key(|&(j, _)| j);
            for w in row.windows(2) {
                if w[0].0 == w[1].0 {
                    return Err(Error::InvalidMatrix(format!(
                        "row {i}: duplicate column {}",
                        w[0].0
                    )));
                }
            }
            for &(j, p) in row.iter() {
                if j >= n {
                    return Err(Error::InvalidMatrix(format!(
                        "row {i}: column {j} out of range (n={n})"
                    )));
                }
                if p.is_identity() {
                    return Err(Error::InvalidMatrix(format!(
                        "row {i}: identity entry at column {j}"
                    )));
                }
            }
        }
        Ok(SparseCheckMatrix { n, rows, gb: None })
    }

    pub(crate) fn with_gb(mut self, spec: GbSpec) -> Self {
        self.gb = Some(spec);
        self
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.rows.len()
    }

    pub fn rows(&self) -> &[Vec<(usize, Pauli)>] {
        &self.rows
    }

    pub fn row(&self, i: usize) -> &[(usize, Pauli)] {
        &self.rows[i]
    }

    /// The generalized bicycle spec this matrix was built from, if any.
    pub fn gb_spec(&self) -> Option<&GbSpec> {
        self.gb.as_ref()
    }

    pub fn nnz(&self) -> usize {
        self.rows.iter().map(Vec::len).sum()
    }

    pub fn is_orthogonal(&self) -> bool {
        pauli::check_orthogonality(self)
    }

    /// Errors with the first anticommuting row pair.
    pub fn validate_orthogonality(&self) -> Result<()> {
        match pauli::first_anticommuting_pair(self) {
            None => Ok(()),
            Some((row_a, row_b)) => Err(Error::NotOrthogonal { row_a, row_b }),
        }
    }

    pub fn column_weights(&self) -> Vec<usize> {
        let mut w = vec![0; self.n];
        for row in &self.rows {
            for &(j, _) in row {
                w[j] += 1;
            }
        }
        w
    }

    /// Binary symplectic expansion `[H_x | H_z]`, packed into 64-bit words.
    pub fn symplectic_rows(&self) -> Vec<Vec<u64>> {
        let words = (2 * self.n).div_ceil(64);
        self.rows
            .iter()
            .map(|row| {
                let mut bits = vec![0u64; words];
                for &(j, p) in row {
                    if p.x_bit() == 1 {
                        bits[j / 64] |= 1 << (j % 64);
                    }
                    if p.z_bit() == 1 {
                        let c = self.n + j;
                        bits[c / 64] |= 1 << (c % 64);
                    }
                }
                bits
            })
            .collect()
    }
}

/// `[[n, k]]` parameters plus the check count and degrees.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CodeParams {
    pub n: usize,
    pub k: usize,
    pub m: usize,
    /// Largest check degree.
    pub d_c: usize,
    /// Largest qubit degree.
    pub d_v: usize,
    /// All checks share one degree and all qubits share one degree.
    pub regular: bool,
    /// `m > n − k`.
    pub overcomplete: bool,
}

impl std::fmt::Display for CodeParams {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "[[{},{}]] m={} dc={} dv={}",
            self.n, self.k, self.m, self.d_c, self.d_v
        )
    }
}

/// Computes `k = n − rank_GF2([H_x | H_z])` and the degree profile.
pub fn compute_params(h: &SparseCheckMatrix) -> CodeParams {
    let rank = gf2_rank(h.symplectic_rows(), 2 * h.n());
    let k = h.n().saturating_sub(rank);
    let row_w: Vec<usize> = h.rows().iter().map(Vec::len).collect();
    let col_w = h.column_weights();
    let uniform = |w: &[usize]| w.windows(2).all(|p| p[0] == p[1]);
    CodeParams {
        n: h.n(),
        k,
        m: h.m(),
        d_c: row_w.iter().copied().max().unwrap_or(0),
        d_v: col_w.iter().copied().max().unwrap_or(0),
        regular: uniform(&row_w) && uniform(&col_w),
        overcomplete: h.m() + k > h.n(),
    }
}

/// One nonzero entry of `H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    pub check: usize,
    pub qubit: usize,
    pub pauli: Pauli,
}

/// Edge-indexed bipartite graph. Edges are numbered row-major, so the edges
/// of check `i` form the contiguous range [`TannerGraph::cn_edges`]; the
/// edges of qubit `j` are listed in increasing check order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TannerGraph {
    n: usize,
    m: usize,
    edges: Vec<Edge>,
    cn_offsets: Vec<usize>,
    vn_offsets: Vec<usize>,
    vn_edges: Vec<usize>,
}

impl TannerGraph {
    pub fn new(h: &SparseCheckMatrix) -> Self {
        let mut edges = Vec::with_capacity(h.nnz());
        let mut cn_offsets = Vec::with_capacity(h.m() + 1);
        cn_offsets.push(0);
        for (i, row) in h.rows().iter().enumerate() {
            edges.extend(row.iter().map(|&(j, p)| Edge {
                check: i,
                qubit: j,
                pauli: p,
            }));
            cn_offsets.push(edges.len());
        }

        let col_w = h.column_weights();
        let mut vn_offsets = Vec::with_capacity(h.n() + 1);
        vn_offsets.push(0);
        for w in &col_w {
            vn_offsets.push(vn_offsets.last().unwrap() + w);
        }
        let mut fill = vn_offsets[..h.n()].to_vec();
        let mut vn_edges = vec![0; edges.len()];
        for (idx, e) in edges.iter().enumerate() {
            vn_edges[fill[e.qubit]] = idx;
            fill[e.qubit] += 1;
        }

        TannerGraph {
            n: h.n(),
            m: h.m(),
            edges,
            cn_offsets,
            vn_offsets,
            vn_edges,
        }
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    #[inline]
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    /// Edge indices of check `i`, i.e. `M(i)`.
    #[inline]
    pub fn cn_edges(&self, i: usize) -> Range<usize> {
        self.cn_offsets[i]..self.cn_offsets[i + 1]
    }

    /// Edge indices of qubit `j`, i.e. `N(j)`.
    #[inline]
    pub fn vn_edges(&self, j: usize) -> &[usize] {
        &self.vn_edges[self.vn_offsets[j]..self.vn_offsets[j + 1]]
    }

    pub fn cn_degrees(&self) -> Vec<usize> {
        (0..self.m).map(|i| self.cn_edges(i).len()).collect()
    }

    pub fn vn_degrees(&self) -> Vec<usize> {
        (0..self.n).map(|j| self.vn_edges(j).len()).collect()
    }

    /// `⟨H_i, e⟩_tr` for every check.
    pub fn syndrome_into(&self, e: &[Pauli], out: &mut [u8]) {
        debug_assert_eq!(e.len(), self.n);
        for (i, s) in out.iter_mut().enumerate() {
            *s = self.edges[self.cn_edges(i)].iter().fold(0, |acc, edge| {
                acc ^ pauli::trace_inner(edge.pauli, e[edge.qubit])
            });
        }
    }
}

/// Convenience alias for [`TannerGraph::new`].
pub fn tanner_graph(h: &SparseCheckMatrix) -> TannerGraph {
    TannerGraph::new(h)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn toy() -> SparseCheckMatrix {
        build_gb(&GbSpec::new(3, vec![0, 1], vec![0, 2]).unwrap()).unwrap()
    }

    #[test]
    fn rejects_bad_rows() {
        assert!(SparseCheckMatrix::new(2, vec![vec![(0, Pauli::X), (0, Pauli::Z)]]).is_err());
        assert!(SparseCheckMatrix::new(2, vec![vec![(2, Pauli::X)]]).is_err());
        assert!(SparseCheckMatrix::new(2, vec![vec![(1, Pauli::I)]]).is_err());
        let h = SparseCheckMatrix::new(3, vec![vec![(2, Pauli::X), (0, Pauli::Z)]]).unwrap();
        assert_eq!(h.row(0), &[(0, Pauli::Z), (2, Pauli::X)]);
    }

    #[test]
    fn single_entry_graph() {
        let h = SparseCheckMatrix::new(1, vec![vec![(0, Pauli::X)]]).unwrap();
        let g = TannerGraph::new(&h);
        assert_eq!(g.num_edges(), 1);
        assert_eq!(g.cn_degrees(), vec![1]);
        assert_eq!(g.vn_degrees(), vec![1]);
    }

    #[test]
    fn toy_graph_and_params() {
        let h = toy();
        let g = TannerGraph::new(&h);
        assert_eq!(g.num_edges(), 24);
        assert!(g.cn_degrees().iter().all(|&d| d == 4));
        assert!(g.vn_degrees().iter().all(|&d| d == 4));

        let p = compute_params(&h);
        assert_eq!(
            p,
            CodeParams {
                n: 6,
                k: 2,
                m: 6,
                d_c: 4,
                d_v: 4,
                regular: true,
                overcomplete: true
            }
        );
        assert_eq!(p.to_string(), "[[6,2]] m=6 dc=4 dv=4");
    }

    #[test]
    fn every_edge_in_exactly_one_list_each() {
        let h = toy();
        let g = TannerGraph::new(&h);
        let mut seen_cn = vec![0; g.num_edges()];
        let mut seen_vn = vec![0; g.num_edges()];
        for i in 0..g.m() {
            for e in g.cn_edges(i) {
                assert_eq!(g.edges()[e].check, i);
                seen_cn[e] += 1;
            }
        }
        for j in 0..g.n() {
            let es = g.vn_edges(j);
            assert!(es
                .windows(2)
                .all(|w| g.edges()[w[0]].check < g.edges()[w[1]].check));
            for &e in es {
                assert_eq!(g.edges()[e].qubit, j);
                seen_vn[e] += 1;
            }
        }
        assert!(seen_cn.iter().chain(&seen_vn).all(|&c| c == 1));
    }

    #[test]
    fn graph_syndrome_agrees_with_matrix() {
        let h = toy();
        let g = TannerGraph::new(&h);
        let e = [Pauli::Y, Pauli::I, Pauli::Z, Pauli::X, Pauli::I, Pauli::Y];
        let mut out = vec![0; 6];
        g.syndrome_into(&e, &mut out);
        assert_eq!(out, pauli::syndrome(&h, &e).unwrap().0);
    }

    #[test]
    fn anticommuting_rows_fail_validation() {
        let h = SparseCheckMatrix::new(1, vec![vec![(0, Pauli::X)], vec![(0, Pauli::Z)]]).unwrap();
        assert!(matches!(
            h.validate_orthogonality(),
            Err(Error::NotOrthogonal { row_a: 0, row_b: 1 })
        ));
    }
}
