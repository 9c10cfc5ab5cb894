//! Single-qubit Pauli operators in the symplectic (x, z) representation.
//!
//! GF(4) elements are identified with Paulis modulo phase: addition is the
//! XOR of the symplectic pairs and the trace inner product is the binary
//! symplectic form, equal to 1 exactly when two Paulis anticommute.

use std::fmt;
use std::ops::{Deref, DerefMut};

use serde::{Deserialize, Serialize};

use crate::code::SparseCheckMatrix;
use crate::error::{Error, Result};

/// A Pauli symbol. The discriminant is the canonical integer encoding
/// `0=I, 1=X, 2=Z, 3=Y`, i.e. `x_bit | z_bit << 1`.
#[derive(
    Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize,
)]
#[repr(u8)]
pub enum Pauli {
    #[default]
    I = 0,
    X = 1,
    Z = 2,
    Y = 3,
}

impl Pauli {
    /// All four symbols in encoding order, which is also the tie-break order
    /// used by hard decisions.
    pub const ALL: [Pauli; 4] = [Pauli::I, Pauli::X, Pauli::Z, Pauli::Y];

    pub const fn from_code(code: u8) -> Option<Pauli> {
        match code {
            0 => Some(Pauli::I),
            1 => Some(Pauli::X),
            2 => Some(Pauli::Z),
            3 => Some(Pauli::Y),
            _ => None,
        }
    }

    #[inline]
    pub const fn code(self) -> u8 {
        self as u8
    }

    #[inline]
    pub const fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (false, true) => Pauli::Z,
            (true, true) => Pauli::Y,
        }
    }

    #[inline]
    pub const fn x_bit(self) -> u8 {
        self as u8 & 1
    }

    #[inline]
    pub const fn z_bit(self) -> u8 {
        (self as u8 >> 1) & 1
    }

    #[inline]
    pub const fn is_identity(self) -> bool {
        matches!(self, Pauli::I)
    }

    #[inline]
    pub fn anticommutes(self, other: Pauli) -> bool {
        trace_inner(self, other) == 1
    }

    pub fn from_char(c: char) -> Option<Pauli> {
        match c {
            'I' => Some(Pauli::I),
            'X' => Some(Pauli::X),
            'Z' => Some(Pauli::Z),
            'Y' => Some(Pauli::Y),
            _ => None,
        }
    }

    pub const fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Z => 'Z',
            Pauli::Y => 'Y',
        }
    }
}

impl fmt::Display for Pauli {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_char())
    }
}

/// Symplectic form `a.x·b.z ⊕ a.z·b.x`.
#[inline]
pub const fn trace_inner(a: Pauli, b: Pauli) -> u8 {
    (a.x_bit() & b.z_bit()) ^ (a.z_bit() & b.x_bit())
}

/// Composition modulo global phase.
#[inline]
pub const fn pauli_compose(a: Pauli, b: Pauli) -> Pauli {
    match Pauli::from_code(a.code() ^ b.code()) {
        Some(p) => p,
        None => unreachable!(),
    }
}

/// An n-qubit Pauli operator.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct PauliVector(pub Vec<Pauli>);

impl PauliVector {
    pub fn identity(n: usize) -> Self {
        PauliVector(vec![Pauli::I; n])
    }

    /// Number of non-identity positions.
    pub fn weight(&self) -> usize {
        self.0.iter().filter(|p| !p.is_identity()).count()
    }

    pub fn compose(&self, other: &PauliVector) -> Result<PauliVector> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(PauliVector(
            self.iter()
                .zip(other.iter())
                .map(|(&a, &b)| pauli_compose(a, b))
                .collect(),
        ))
    }
}

impl Deref for PauliVector {
    type Target = [Pauli];
    fn deref(&self) -> &[Pauli] {
        &self.0
    }
}

impl DerefMut for PauliVector {
    fn deref_mut(&mut self) -> &mut [Pauli] {
        &mut self.0
    }
}

impl From<Vec<Pauli>> for PauliVector {
    fn from(v: Vec<Pauli>) -> Self {
        PauliVector(v)
    }
}

impl fmt::Display for PauliVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for p in self.iter() {
            write!(f, "{p}")?;
        }
        Ok(())
    }
}

/// A vector over GF(2), one byte (0 or 1) per entry.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub struct BitVector(pub Vec<u8>);

impl BitVector {
    pub fn zeros(len: usize) -> Self {
        BitVector(vec![0; len])
    }

    pub fn from_bools(bits: &[bool]) -> Self {
        BitVector(bits.iter().map(|&b| b as u8).collect())
    }

    /// Hamming weight.
    pub fn count_ones(&self) -> usize {
        self.0.iter().filter(|&&b| b != 0).count()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&b| b == 0)
    }

    pub fn xor(&self, other: &BitVector) -> Result<BitVector> {
        if self.len() != other.len() {
            return Err(Error::LengthMismatch {
                expected: self.len(),
                actual: other.len(),
            });
        }
        Ok(BitVector(
            self.iter().zip(other.iter()).map(|(a, b)| a ^ b).collect(),
        ))
    }
}

impl Deref for BitVector {
    type Target = [u8];
    fn deref(&self) -> &[u8] {
        &self.0
    }
}

impl DerefMut for BitVector {
    fn deref_mut(&mut self) -> &mut [u8] {
        &mut self.0
    }
}

/// Syndrome `s_i = ⟨H_i, e⟩_tr` of an error against every check.
pub fn syndrome(h: &SparseCheckMatrix, e: &[Pauli]) -> Result<BitVector> {
    if e.len() != h.n() {
        return Err(Error::LengthMismatch {
            expected: h.n(),
            actual: e.len(),
        });
    }
    Ok(BitVector(
        h.rows()
            .iter()
            .map(|row| {
                row.iter()
                    .fold(0u8, |acc, &(j, p)| acc ^ trace_inner(p, e[j]))
            })
            .collect(),
    ))
}

/// `s ⊕ syndrome(H, e_hat)`.
pub fn residual_syndrome(
    s: &BitVector,
    h: &SparseCheckMatrix,
    e_hat: &[Pauli],
) -> Result<BitVector> {
    if s.len() != h.m() {
        return Err(Error::LengthMismatch {
            expected: h.m(),
            actual: s.len(),
        });
    }
    syndrome(h, e_hat)?.xor(s)
}

/// Symplectic product of two sparse rows with sorted column indices.
pub(crate) fn row_product(a: &[(usize, Pauli)], b: &[(usize, Pauli)]) -> u8 {
    let (mut ia, mut ib) = (0, 0);
    let mut acc = 0u8;
    while ia < a.len() && ib < b.len() {
        match a[ia].0.cmp(&b[ib].0) {
            std::cmp::Ordering::Less => ia += 1,
            std::cmp::Ordering::Greater => ib += 1,
            std::cmp::Ordering::Equal => {
                acc ^= trace_inner(a[ia].1, b[ib].1);
                ia += 1;
                ib += 1;
            }
        }
    }
    acc
}

/// First pair of rows `(i, i')`, `i ≤ i'`, whose symplectic product is 1.
pub fn first_anticommuting_pair(h: &SparseCheckMatrix) -> Option<(usize, usize)> {
    let rows = h.rows();
    for i in 0..rows.len() {
        for k in i..rows.len() {
            if row_product(&rows[i], &rows[k]) == 1 {
                return Some((i, k));
            }
        }
    }
    None
}

/// True iff `H Λ Hᵀ = 0` over GF(2), i.e. all rows pairwise commute.
pub fn check_orthogonality(h: &SparseCheckMatrix) -> bool {
    first_anticommuting_pair(h).is_none()
}
