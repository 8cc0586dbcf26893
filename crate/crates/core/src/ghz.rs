//! GHZ states `|00…0⟩ + α^p|11…1⟩ + α^{2p}|22…2⟩` (normalization `1/√3`
//! carried as a tag) and exact eigenstate checks against observable words.

use std::collections::BTreeMap;

use serde::Serialize;
use thiserror::Error;

use crate::cyclo::{CycloError, Cyclotomic, PhaseExponent};
use crate::pauli::{LocalBases, ObservableWord, PauliError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GhzError {
    #[error("GHZ states need at least 3 qutrits, got N = {0}")]
    TooFewQutrits(usize),
    #[error("GHZ index k must be 0, 1 or 2, got {0}")]
    InvalidK(u8),
    #[error("length mismatch: state has {state} qutrits, operand has {operand}")]
    LengthMismatch { state: usize, operand: usize },
    #[error(transparent)]
    Pauli(#[from] PauliError),
    #[error(transparent)]
    Arithmetic(#[from] CycloError),
}

/// Symbolic global normalization of a state vector.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum NormTag {
    InvSqrt3,
}

impl NormTag {
    pub fn value(self) -> f64 {
        match self {
            NormTag::InvSqrt3 => 3f64.sqrt().recip(),
        }
    }
}

/// An N-qutrit GHZ state with relative phases `(1, α^p, α^{2p})`.
///
/// The standard states `|GHZ⟩_k` have `p = k ∈ {0,1,2}`. Z rotations can
/// produce any `p mod 9`, so the phase index is stored as a [`PhaseExponent`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GhzState {
    n: usize,
    phase_index: PhaseExponent,
}

impl GhzState {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase_index(&self) -> PhaseExponent {
        self.phase_index
    }

    /// `k` for the three standard states, `None` for rotated variants.
    pub fn k(&self) -> Option<u8> {
        let p = self.phase_index.value();
        (p < 3).then_some(p)
    }

    pub fn norm_tag(&self) -> NormTag {
        NormTag::InvSqrt3
    }

    /// Amplitude phase on `|ll…l⟩`, without the normalization.
    pub fn amplitude_phase(&self, level: u8) -> PhaseExponent {
        self.phase_index.pow(level as i64)
    }

    pub fn amplitudes(&self) -> [Cyclotomic; 3] {
        [0, 1, 2].map(|l| self.amplitude_phase(l).to_cyclotomic())
    }

    /// The three support states with their unnormalized amplitudes.
    pub fn to_sparse(&self) -> SparseState {
        let mut s = SparseState::new(self.n);
        for l in 0..3u8 {
            s.amplitudes
                .insert(vec![l; self.n], self.amplitude_phase(l).to_cyclotomic());
        }
        s
    }
}

pub fn ghz_state(n: usize, k: u8) -> Result<GhzState, GhzError> {
    if n < 3 {
        return Err(GhzError::TooFewQutrits(n));
    }
    if k > 2 {
        return Err(GhzError::InvalidK(k));
    }
    Ok(GhzState {
        n,
        phase_index: PhaseExponent::new(k as i64),
    })
}

/// Outcome of an eigenstate check.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EigenResult {
    Eigenvalue(Cyclotomic),
    NotEigenstate,
}

impl EigenResult {
    pub fn eigenvalue(&self) -> Option<Cyclotomic> {
        match self {
            EigenResult::Eigenvalue(v) => Some(*v),
            EigenResult::NotEigenstate => None,
        }
    }
}

/// Checks whether `state` is an eigenstate of `word`, using `W` by conjugation.
pub fn eigencheck(word: &ObservableWord, state: &GhzState) -> Result<EigenResult, GhzError> {
    eigencheck_with(&LocalBases::default(), word, state)
}

pub fn eigencheck_with(
    bases: &LocalBases,
    word: &ObservableWord,
    state: &GhzState,
) -> Result<EigenResult, GhzError> {
    Ok(match eigen_phase(bases, word, state)? {
        Some(p) => EigenResult::Eigenvalue(p.to_cyclotomic()),
        None => EigenResult::NotEigenstate,
    })
}

/// Eigenvalue of `word` on `state` as a phase. Each support state must map
/// onto a support state with one consistent amplitude ratio.
pub(crate) fn eigen_phase(
    bases: &LocalBases,
    word: &ObservableWord,
    state: &GhzState,
) -> Result<Option<PhaseExponent>, GhzError> {
    if word.len() != state.n {
        return Err(GhzError::LengthMismatch {
            state: state.n,
            operand: word.len(),
        });
    }
    let mut eigen = None;
    for level in 0..3u8 {
        let (phase, image) = word.apply(bases, &vec![level; state.n])?;
        let target = image[0];
        if image.iter().any(|&m| m != target) {
            return Ok(None);
        }
        // word·amp(level)|image⟩ must equal λ·amp(target)|image⟩
        let ratio = phase + state.amplitude_phase(level) - state.amplitude_phase(target);
        match eigen {
            None => eigen = Some(ratio),
            Some(prev) if prev != ratio => return Ok(None),
            Some(_) => {}
        }
    }
    Ok(eigen)
}

/// Rotates every qutrit about z by `increments[i]` units of 2π/9. Only the
/// total of the increments matters.
pub fn rotate_state(state: &GhzState, increments: &[i64]) -> Result<GhzState, GhzError> {
    if increments.len() != state.n {
        return Err(GhzError::LengthMismatch {
            state: state.n,
            operand: increments.len(),
        });
    }
    let total: i64 = increments.iter().map(|m| m.rem_euclid(9)).sum();
    Ok(GhzState {
        n: state.n,
        phase_index: state.phase_index + PhaseExponent::new(total),
    })
}

/// General sparse state vector with exact amplitudes, keyed by basis state.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseState {
    n: usize,
    amplitudes: BTreeMap<Vec<u8>, Cyclotomic>,
}

impl SparseState {
    pub fn new(n: usize) -> Self {
        Self {
            n,
            amplitudes: BTreeMap::new(),
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn amplitude(&self, basis: &[u8]) -> Cyclotomic {
        self.amplitudes.get(basis).copied().unwrap_or(Cyclotomic::ZERO)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&Vec<u8>, &Cyclotomic)> {
        self.amplitudes.iter()
    }

    pub fn add_amplitude(&mut self, basis: Vec<u8>, value: Cyclotomic) -> Result<(), CycloError> {
        let entry = self.amplitudes.entry(basis).or_insert(Cyclotomic::ZERO);
        *entry = entry.checked_add(&value)?;
        Ok(())
    }

    /// Drops zero amplitudes.
    pub fn prune(&mut self) {
        self.amplitudes.retain(|_, v| !v.is_zero());
    }

    pub fn scaled(&self, factor: Cyclotomic) -> Result<Self, CycloError> {
        let amplitudes = self
            .amplitudes
            .iter()
            .map(|(k, v)| Ok((k.clone(), v.checked_mul(&factor)?)))
            .collect::<Result<_, CycloError>>()?;
        Ok(Self { n: self.n, amplitudes })
    }

    /// `weight · word |self⟩`, accumulated into `out`.
    pub fn apply_word_into(
        &self,
        bases: &LocalBases,
        word: &ObservableWord,
        weight: Cyclotomic,
        out: &mut SparseState,
    ) -> Result<(), GhzError> {
        if word.len() != self.n {
            return Err(GhzError::LengthMismatch {
                state: self.n,
                operand: word.len(),
            });
        }
        for (basis, amp) in &self.amplitudes {
            let (phase, image) = word.apply(bases, basis)?;
            out.add_amplitude(image, amp.mul_phase(phase)?.checked_mul(&weight)?)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::{all_words, dense_matrix, basis_index, BasisLabel};
    use rand::{Rng, SeedableRng};

    fn word(s: &str) -> ObservableWord {
        s.parse().unwrap()
    }

    #[test]
    fn ghz_amplitudes() {
        let a = |e| Cyclotomic::alpha_pow(e);
        assert_eq!(ghz_state(4, 0).unwrap().amplitudes(), [Cyclotomic::ONE; 3]);
        assert_eq!(ghz_state(4, 1).unwrap().amplitudes(), [a(0), a(1), a(2)]);
        assert_eq!(ghz_state(3, 2).unwrap().amplitudes(), [a(0), a(2), a(4)]);
        assert_eq!(ghz_state(2, 0), Err(GhzError::TooFewQutrits(2)));
        assert_eq!(ghz_state(3, 3), Err(GhzError::InvalidK(3)));
        assert!((ghz_state(3, 0).unwrap().norm_tag().value() - 0.5773502691896258).abs() < 1e-15);
    }

    #[test]
    fn eigencheck_examples() {
        let g0 = ghz_state(4, 0).unwrap();
        let g1 = ghz_state(4, 1).unwrap();
        assert_eq!(
            eigencheck(&word("XXXX"), &g0).unwrap(),
            EigenResult::Eigenvalue(Cyclotomic::ONE)
        );
        assert_eq!(
            eigencheck(&word("YYYY"), &g1).unwrap(),
            EigenResult::Eigenvalue(Cyclotomic::omega())
        );
        assert_eq!(eigencheck(&word("YXXX"), &g0).unwrap(), EigenResult::NotEigenstate);
        assert!(matches!(
            eigencheck(&word("XXX"), &g0),
            Err(GhzError::LengthMismatch { state: 4, operand: 3 })
        ));
    }

    #[test]
    fn yxxx_not_eigenstate_of_ghz0_by_dense_oracle() {
        let m = dense_matrix(&word("YXXX")).unwrap();
        let g = ghz_state(4, 0).unwrap().to_sparse();
        let mut image = vec![Cyclotomic::ZERO; m.dim()];
        for (basis, amp) in g.iter() {
            for &(row, v) in m.column(basis_index(basis)) {
                image[row] = image[row] + v * *amp;
            }
        }
        // GHZ_0 has equal amplitudes, so an eigenstate image would too
        let support: Vec<_> = (0..3u8).map(|l| image[basis_index(&[l; 4])]).collect();
        assert!(support[0] != support[1] || support[1] != support[2]);
    }

    #[test]
    fn rotate_examples() {
        let g0 = ghz_state(4, 0).unwrap();
        assert_eq!(rotate_state(&g0, &[1, 1, 0, 0]).unwrap(), ghz_state(4, 2).unwrap());
        assert_eq!(rotate_state(&g0, &[0; 4]).unwrap(), g0);
        assert_eq!(
            rotate_state(&g0, &[2, 0, 0, 0]).unwrap(),
            rotate_state(&g0, &[0, 0, 1, 1]).unwrap()
        );
        assert!(rotate_state(&g0, &[1, 1]).is_err());
        let g2 = ghz_state(4, 2).unwrap();
        let r = rotate_state(&g2, &[1, 0, 0, 0]).unwrap();
        assert_eq!(r.k(), None);
        assert_eq!(r.phase_index(), PhaseExponent::OMEGA);
    }

    /// Rotated state computed by applying diag(1, α^m, α^{2m}) to every
    /// support amplitude, independent of `rotate_state`.
    fn rotate_by_hand(state: &GhzState, increments: &[i64]) -> SparseState {
        let mut out = SparseState::new(state.n());
        for (basis, amp) in state.to_sparse().iter() {
            let phase: PhaseExponent = basis
                .iter()
                .zip(increments)
                .map(|(&l, &m)| PhaseExponent::new(l as i64 * m))
                .sum();
            out.add_amplitude(basis.clone(), amp.mul_phase(phase).unwrap()).unwrap();
        }
        out
    }

    #[test]
    fn rotation_depends_only_on_total() {
        for n in 3..=6usize {
            let g = ghz_state(n, 0).unwrap();
            for total in 0..9i64 {
                let mut reference = None;
                // every distribution of `total` over n sites with entries 0..=total
                let mut inc = vec![0i64; n];
                loop {
                    if inc.iter().sum::<i64>() == total {
                        let rotated = rotate_state(&g, &inc).unwrap();
                        assert_eq!(rotated.to_sparse(), rotate_by_hand(&g, &inc));
                        match &reference {
                            None => reference = Some(rotated),
                            Some(r) => assert_eq!(*r, rotated),
                        }
                    }
                    let mut i = 0;
                    while i < n {
                        inc[i] += 1;
                        if inc[i] <= total {
                            break;
                        }
                        inc[i] = 0;
                        i += 1;
                    }
                    if i == n {
                        break;
                    }
                }
            }
        }
    }

    fn periodicity_eigenvalue(word: &ObservableWord, k: u8) -> Option<Cyclotomic> {
        let t = word.total_units() as i64;
        let k = k as i64;
        ((t - k).rem_euclid(3) == 0)
            .then(|| PhaseExponent::omega_pow((t - k) / 3).to_cyclotomic())
    }

    #[test]
    fn periodicity_exhaustive_two_basis() {
        for n in 3..=8 {
            for k in 0..3 {
                let g = ghz_state(n, k).unwrap();
                for w in all_words(n, &[BasisLabel::X, BasisLabel::Y]) {
                    let got = eigencheck(&w, &g).unwrap().eigenvalue();
                    assert_eq!(got, periodicity_eigenvalue(&w, k), "{w} k={k}");
                }
            }
        }
    }

    #[test]
    fn periodicity_three_basis_n3() {
        for k in 0..3 {
            let g = ghz_state(3, k).unwrap();
            for w in all_words(3, &BasisLabel::ALL) {
                assert_eq!(eigencheck(&w, &g).unwrap().eigenvalue(), periodicity_eigenvalue(&w, k));
            }
        }
    }

    #[test]
    fn periodicity_sampled_large_n() {
        let mut rng = rand::rngs::StdRng::seed_from_u64(9);
        for n in 9..=12 {
            for k in 0..3 {
                let g = ghz_state(n, k).unwrap();
                for _ in 0..1000 {
                    let w = ObservableWord::from_y_mask(n, rng.gen_range(0..1u64 << n));
                    assert_eq!(eigencheck(&w, &g).unwrap().eigenvalue(), periodicity_eigenvalue(&w, k));
                }
            }
        }
    }

    #[test]
    fn eigencheck_matches_dense_oracle() {
        for n in 3..=5 {
            let alphabet: &[BasisLabel] = if n == 3 { &BasisLabel::ALL } else { &[BasisLabel::X, BasisLabel::Y] };
            for k in 0..3 {
                let g = ghz_state(n, k).unwrap();
                let sparse = g.to_sparse();
                for w in all_words(n, alphabet) {
                    let m = dense_matrix(&w).unwrap();
                    let mut image = vec![Cyclotomic::ZERO; m.dim()];
                    for (basis, amp) in sparse.iter() {
                        for &(row, v) in m.column(basis_index(basis)) {
                            image[row] = image[row] + v * *amp;
                        }
                    }
                    // λ = image[|00..0⟩] since the |00..0⟩ amplitude is 1
                    let lambda = image[0];
                    let is_eigen = (0..m.dim()).all(|i| {
                        let expected = sparse
                            .iter()
                            .find(|(b, _)| basis_index(b) == i)
                            .map_or(Cyclotomic::ZERO, |(_, a)| lambda * *a);
                        image[i] == expected
                    }) && !lambda.is_zero();
                    let got = eigencheck(&w, &g).unwrap();
                    if is_eigen {
                        assert_eq!(got, EigenResult::Eigenvalue(lambda), "{w}");
                    } else {
                        assert_eq!(got, EigenResult::NotEigenstate, "{w}");
                    }
                }
            }
        }
    }
}
