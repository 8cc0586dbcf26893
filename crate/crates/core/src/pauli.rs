//! Local qutrit observables as exact 3×3 monomial matrices, and tensor
//! product words built from them.
//!
//! `X` is the cyclic shift `|n⟩ ↦ |n+1⟩`. The other two measurement bases are
//! rotations of `X` about the z axis: `Y = R X R†` and `W = R² X R†²` with
//! `R = Z^{1/3} = diag(1, α, α²)`. Every local operator has exactly one
//! nonzero entry per column, so a tensor word acts on a computational basis
//! state by a permutation and a phase, in `O(N)`.

mod dense;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::cyclo::{Cyclotomic, PhaseExponent};

pub use dense::{dense_matrix, dense_matrix_with, local_dense, SparseMatrix, MAX_DENSE_N};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("invalid basis label {0:?}, expected one of X, Y, W")]
    InvalidLabel(char),
    #[error("observable words must have at least one site")]
    EmptyWord,
    #[error("basis state has {got} sites but the word has {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("basis index {0} is not a qutrit level")]
    InvalidLevel(u8),
    #[error("dense matrices are limited to N <= {max}, got N = {n}")]
    SizeGuard { n: usize, max: usize },
}

/// Which matrix to use for the third local basis `W`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WVariant {
    /// `W = Z^{2/3} X Z^{-2/3}`, computed by conjugation.
    #[default]
    Conjugation,
    /// Column phases `α^{2 - 6δ(n,0)}`: the exceptional phase sits on column 0.
    Displayed,
}

/// Local measurement basis.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasisLabel {
    X,
    Y,
    W,
}

impl BasisLabel {
    pub const ALL: [BasisLabel; 3] = [BasisLabel::X, BasisLabel::Y, BasisLabel::W];

    /// Rotation of this basis away from `X`, in units of 2π/9.
    pub const fn rotation_units(self) -> u8 {
        match self {
            BasisLabel::X => 0,
            BasisLabel::Y => 1,
            BasisLabel::W => 2,
        }
    }

    pub const fn symbol(self) -> char {
        match self {
            BasisLabel::X => 'X',
            BasisLabel::Y => 'Y',
            BasisLabel::W => 'W',
        }
    }
}

impl TryFrom<char> for BasisLabel {
    type Error = PauliError;
    fn try_from(c: char) -> Result<Self, PauliError> {
        match c {
            'X' => Ok(BasisLabel::X),
            'Y' => Ok(BasisLabel::Y),
            'W' => Ok(BasisLabel::W),
            other => Err(PauliError::InvalidLabel(other)),
        }
    }
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.symbol())
    }
}

/// A 3×3 monomial matrix with phases drawn from the ninth roots of unity.
///
/// Column `n` holds the single entry `α^{phases[n]}` in row `perm[n]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct LocalOperator {
    perm: [u8; 3],
    phases: [PhaseExponent; 3],
}

impl LocalOperator {
    pub const IDENTITY: Self = Self {
        perm: [0, 1, 2],
        phases: [PhaseExponent::ONE; 3],
    };

    /// Builds an operator, rejecting `perm` if it is not a permutation of `{0,1,2}`.
    pub fn new(perm: [u8; 3], phases: [PhaseExponent; 3]) -> Option<Self> {
        let mut seen = [false; 3];
        for &p in &perm {
            if p > 2 || seen[p as usize] {
                return None;
            }
            seen[p as usize] = true;
        }
        Some(Self { perm, phases })
    }

    /// The cyclic shift `X|n⟩ = |n+1⟩`.
    pub const fn shift() -> Self {
        Self {
            perm: [1, 2, 0],
            phases: [PhaseExponent::ONE; 3],
        }
    }

    /// The clock operator `Z|n⟩ = ωⁿ|n⟩`.
    pub const fn clock() -> Self {
        Self::diagonal([PhaseExponent::new(0), PhaseExponent::new(3), PhaseExponent::new(6)])
    }

    /// `Z^{u/3} = diag(1, α^u, α^{2u})`, a z rotation by `u` units of 2π/9.
    pub const fn rotation(units: i64) -> Self {
        Self::diagonal([
            PhaseExponent::new(0),
            PhaseExponent::new(units),
            PhaseExponent::new(2 * units),
        ])
    }

    pub const fn diagonal(phases: [PhaseExponent; 3]) -> Self {
        Self {
            perm: [0, 1, 2],
            phases,
        }
    }

    pub const fn perm(&self) -> [u8; 3] {
        self.perm
    }

    /// Phase of the nonzero entry in each column.
    pub const fn column_phases(&self) -> [PhaseExponent; 3] {
        self.phases
    }

    /// Image of basis state `|n⟩`: `(phase, perm(n))`.
    pub fn apply(&self, n: u8) -> (PhaseExponent, u8) {
        let n = n as usize;
        (self.phases[n], self.perm[n])
    }

    /// Matrix product `self · rhs` (apply `rhs` first).
    pub fn compose(&self, rhs: &Self) -> Self {
        let mut perm = [0; 3];
        let mut phases = [PhaseExponent::ONE; 3];
        for n in 0..3 {
            let (p1, m) = rhs.apply(n as u8);
            let (p2, out) = self.apply(m);
            perm[n] = out;
            phases[n] = p1 + p2;
        }
        Self { perm, phases }
    }

    /// Conjugate transpose, which is also the inverse.
    pub fn dagger(&self) -> Self {
        let mut perm = [0; 3];
        let mut phases = [PhaseExponent::ONE; 3];
        for n in 0..3 {
            let row = self.perm[n] as usize;
            perm[row] = n as u8;
            phases[row] = self.phases[n].inverse();
        }
        Self { perm, phases }
    }

    pub fn pow(&self, k: u32) -> Self {
        (0..k).fold(Self::IDENTITY, |acc, _| acc.compose(self))
    }

    pub fn is_identity(&self) -> bool {
        *self == Self::IDENTITY
    }

    /// Dense exact form, `m[row][col]`.
    pub fn to_dense(&self) -> [[Cyclotomic; 3]; 3] {
        let mut m = [[Cyclotomic::ZERO; 3]; 3];
        for col in 0..3 {
            m[self.perm[col] as usize][col] = self.phases[col].to_cyclotomic();
        }
        m
    }
}

/// Local matrix for `label`, with `W` built by conjugation.
pub fn local_matrix(label: BasisLabel) -> LocalOperator {
    local_matrix_with(label, WVariant::Conjugation)
}

pub fn local_matrix_with(label: BasisLabel, variant: WVariant) -> LocalOperator {
    match (label, variant) {
        (BasisLabel::W, WVariant::Displayed) => LocalOperator::new(
            [1, 2, 0],
            [PhaseExponent::new(2 - 6), PhaseExponent::new(2), PhaseExponent::new(2)],
        )
        .expect("shift permutation"),
        _ => {
            let units = label.rotation_units() as i64;
            let r = LocalOperator::rotation(units);
            r.compose(&LocalOperator::shift()).compose(&r.dagger())
        }
    }
}

/// The three local matrices used to act with words.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct LocalBases {
    ops: [LocalOperator; 3],
}

impl LocalBases {
    pub fn new(variant: WVariant) -> Self {
        Self {
            ops: BasisLabel::ALL.map(|l| local_matrix_with(l, variant)),
        }
    }

    pub fn get(&self, label: BasisLabel) -> &LocalOperator {
        &self.ops[label as usize]
    }
}

impl Default for LocalBases {
    fn default() -> Self {
        Self::new(WVariant::Conjugation)
    }
}

/// A tensor product of local observables, leftmost label on qutrit 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ObservableWord {
    labels: Vec<BasisLabel>,
}

impl ObservableWord {
    pub fn new(labels: Vec<BasisLabel>) -> Result<Self, PauliError> {
        if labels.is_empty() {
            return Err(PauliError::EmptyWord);
        }
        Ok(Self { labels })
    }

    /// `XX…X` with `Y` at the sites set in `y_mask` (bit `i` is site `i`).
    pub fn from_y_mask(n: usize, y_mask: u64) -> Self {
        let labels = (0..n)
            .map(|i| {
                if y_mask >> i & 1 == 1 {
                    BasisLabel::Y
                } else {
                    BasisLabel::X
                }
            })
            .collect();
        Self { labels }
    }

    pub fn labels(&self) -> &[BasisLabel] {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    /// Total rotation of the word away from `XX…X`, in units of 2π/9.
    pub fn total_units(&self) -> u32 {
        self.labels.iter().map(|l| l.rotation_units() as u32).sum()
    }

    pub fn count(&self, label: BasisLabel) -> usize {
        self.labels.iter().filter(|&&l| l == label).count()
    }

    pub fn contains_w(&self) -> bool {
        self.labels.contains(&BasisLabel::W)
    }

    /// Acts on a computational basis state. Returns the accumulated phase
    /// and the image state.
    pub fn apply(
        &self,
        bases: &LocalBases,
        state: &[u8],
    ) -> Result<(PhaseExponent, Vec<u8>), PauliError> {
        if state.len() != self.len() {
            return Err(PauliError::LengthMismatch {
                expected: self.len(),
                got: state.len(),
            });
        }
        let mut phase = PhaseExponent::ONE;
        let mut image = Vec::with_capacity(state.len());
        for (&label, &n) in self.labels.iter().zip(state) {
            if n > 2 {
                return Err(PauliError::InvalidLevel(n));
            }
            let (p, m) = bases.get(label).apply(n);
            phase = phase + p;
            image.push(m);
        }
        Ok((phase, image))
    }
}

/// Applies `word` (with `W` by conjugation) to a computational basis state.
pub fn apply_word(
    word: &ObservableWord,
    state: &[u8],
) -> Result<(PhaseExponent, Vec<u8>), PauliError> {
    word.apply(&LocalBases::default(), state)
}

impl fmt::Display for ObservableWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for l in &self.labels {
            write!(f, "{}", l.symbol())?;
        }
        Ok(())
    }
}

impl FromStr for ObservableWord {
    type Err = PauliError;
    fn from_str(s: &str) -> Result<Self, PauliError> {
        let labels = s
            .chars()
            .map(BasisLabel::try_from)
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(labels)
    }
}

impl Serialize for ObservableWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ObservableWord {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// All words of length `n` over `alphabet`, in lexicographic string order.
pub fn all_words(n: usize, alphabet: &[BasisLabel]) -> Vec<ObservableWord> {
    let mut sorted = alphabet.to_vec();
    sorted.sort_by_key(|l| l.symbol());
    sorted.dedup();
    let base = sorted.len();
    let total = base.pow(n as u32);
    (0..total)
        .map(|mut idx| {
            let mut labels = vec![BasisLabel::X; n];
            for slot in labels.iter_mut().rev() {
                *slot = sorted[idx % base];
                idx /= base;
            }
            ObservableWord { labels }
        })
        .collect()
}

/// Mixed-radix index of a basis state, qutrit 1 most significant.
pub fn basis_index(state: &[u8]) -> usize {
    state.iter().fold(0, |acc, &n| acc * 3 + n as usize)
}

/// Inverse of [`basis_index`].
pub fn basis_state(n: usize, mut index: usize) -> Vec<u8> {
    let mut state = vec![0u8; n];
    for slot in state.iter_mut().rev() {
        *slot = (index % 3) as u8;
        index /= 3;
    }
    state
}
