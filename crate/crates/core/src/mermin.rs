//! Concurrent observable sets and the weighted Mermin operators built from
//! them.
//!
//! For `N ≥ 4` the operator `𝓜ₖ` collects every `{X,Y}` word whose Y-count
//! `j` satisfies `j ≡ k (mod 3)`. At `N = 3` the third basis `W` joins and
//! membership is decided by the total rotation `t ≡ k (mod 3)`. Each word is
//! weighted by `α^{k-t}`, one of `1, ω², ω`, so that every weighted term has
//! `|GHZ⟩ₖ` as an eigenvector with eigenvalue exactly 1.

use serde::Serialize;
use thiserror::Error;

use crate::cyclo::{CycloError, Cyclotomic, PhaseExponent};
use crate::ghz::{eigen_phase, GhzError, GhzState, SparseState};
use crate::pauli::{all_words, BasisLabel, LocalBases, ObservableWord};

/// Largest N for which operator term lists are materialized.
pub const MAX_OPERATOR_N: usize = 22;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum MerminError {
    #[error("Mermin operators need N >= {min}, got N = {n}")]
    TooFewQutrits { n: usize, min: usize },
    #[error("k must be 0, 1 or 2, got {0}")]
    InvalidK(u8),
    #[error("operator term lists are limited to N <= {max}, got N = {n}")]
    SizeGuard { n: usize, max: usize },
    #[error(transparent)]
    Ghz(#[from] GhzError),
    #[error(transparent)]
    Arithmetic(#[from] CycloError),
}

fn check_args(n: usize, k: u8, min: usize) -> Result<(), MerminError> {
    if n < min {
        return Err(MerminError::TooFewQutrits { n, min });
    }
    if k > 2 {
        return Err(MerminError::InvalidK(k));
    }
    if n > MAX_OPERATOR_N {
        return Err(MerminError::SizeGuard { n, max: MAX_OPERATOR_N });
    }
    Ok(())
}

/// Local bases used at a given N: `{X,Y,W}` at N = 3, `{X,Y}` otherwise.
pub fn alphabet(n: usize) -> &'static [BasisLabel] {
    if n == 3 {
        &BasisLabel::ALL
    } else {
        &[BasisLabel::X, BasisLabel::Y]
    }
}

/// Weight `α^{k-t}` of a word with total rotation `t` in `𝓜ₖ`. Only
/// meaningful when `t ≡ k (mod 3)`, where it is a cube root of unity.
pub fn term_weight(total_units: u32, k: u8) -> PhaseExponent {
    PhaseExponent::new(k as i64 - total_units as i64)
}

/// Words sharing `|GHZ⟩ₖ` as a joint eigenstate, in lexicographic order.
pub fn concurrent_set(n: usize, k: u8) -> Result<Vec<ObservableWord>, MerminError> {
    check_args(n, k, 3)?;
    Ok(all_words(n, alphabet(n))
        .into_iter()
        .filter(|w| w.total_units() % 3 == k as u32)
        .collect())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MerminTerm {
    pub word: ObservableWord,
    /// A cube root of unity.
    pub weight: PhaseExponent,
}

impl MerminTerm {
    pub fn weight_value(&self) -> Cyclotomic {
        self.weight.to_cyclotomic()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MerminOperator {
    n: usize,
    k: u8,
    terms: Vec<MerminTerm>,
}

impl MerminOperator {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> u8 {
        self.k
    }

    pub fn terms(&self) -> &[MerminTerm] {
        &self.terms
    }

    /// The quantum prediction: every weighted term contributes eigenvalue 1.
    pub fn quantum_value(&self) -> u64 {
        self.terms.len() as u64
    }

    pub fn uses_w(&self) -> bool {
        self.n == 3
    }

    /// Sum of all weighted terms applied to `state`.
    pub fn apply(&self, bases: &LocalBases, state: &SparseState) -> Result<SparseState, MerminError> {
        let mut out = SparseState::new(state.n());
        for term in &self.terms {
            state.apply_word_into(bases, &term.word, term.weight_value(), &mut out)?;
        }
        out.prune();
        Ok(out)
    }
}

pub fn mermin_operator(n: usize, k: u8) -> Result<MerminOperator, MerminError> {
    let terms = concurrent_set(n, k)?
        .into_iter()
        .map(|word| {
            let weight = term_weight(word.total_units(), k);
            MerminTerm { word, weight }
        })
        .collect();
    Ok(MerminOperator { n, k, terms })
}

#[derive(Serialize)]
struct TermJson<'a> {
    word: &'a ObservableWord,
    #[serde(rename = "weightExponent")]
    weight_exponent: u8,
}

impl Serialize for MerminOperator {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct OperatorJson<'a> {
            #[serde(rename = "N")]
            n: usize,
            k: u8,
            terms: Vec<TermJson<'a>>,
            #[serde(rename = "quantumValue")]
            quantum_value: u64,
        }
        OperatorJson {
            n: self.n,
            k: self.k,
            terms: self
                .terms
                .iter()
                .map(|t| TermJson {
                    word: &t.word,
                    weight_exponent: t.weight.value(),
                })
                .collect(),
            quantum_value: self.quantum_value(),
        }
        .serialize(serializer)
    }
}

pub(crate) fn binomial(n: u64, r: u64) -> u128 {
    if r > n {
        return 0;
    }
    let r = r.min(n - r);
    (0..r).fold(1u128, |acc, i| acc * (n - i) as u128 / (i + 1) as u128)
}

/// Number of concurrent observables in `𝓜ₖ`, by counting rather than
/// enumeration.
pub fn quantum_value(n: usize, k: u8) -> Result<u64, MerminError> {
    if n < 3 {
        return Err(MerminError::TooFewQutrits { n, min: 3 });
    }
    if k > 2 {
        return Err(MerminError::InvalidK(k));
    }
    if n == 3 {
        // 27 three-basis words split evenly over t mod 3
        return Ok(9);
    }
    Ok((0..=n as u64)
        .filter(|j| j % 3 == k as u64)
        .map(|j| binomial(n as u64, j) as u64)
        .sum())
}

/// `(2^N - 1)/3` for even N and `(2^N - 2)/3` for odd N.
pub fn table_quantum_value(n: usize) -> u64 {
    let p = 1u64 << n;
    if n.is_multiple_of(2) {
        (p - 1) / 3
    } else {
        (p - 2) / 3
    }
}

/// Checks every word's eigenvalue on `|GHZ⟩ₖ` against its weight. Returns
/// the words whose weighted eigenvalue is not exactly 1.
pub fn failing_terms(
    op: &MerminOperator,
    bases: &LocalBases,
    state: &GhzState,
) -> Result<Vec<ObservableWord>, MerminError> {
    let mut bad = Vec::new();
    for term in &op.terms {
        match eigen_phase(bases, &term.word, state)? {
            Some(p) if p + term.weight == PhaseExponent::ONE => {}
            _ => bad.push(term.word.clone()),
        }
    }
    Ok(bad)
}

/// One Y-count class in the expansion of the closed form.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormClass {
    #[serde(rename = "yCount")]
    pub y_count: usize,
    pub words: u64,
    pub coefficient: Cyclotomic,
    /// `α^{2k}` times the operator weight, when the class belongs to `𝓜ₖ`.
    pub expected: Option<Cyclotomic>,
    pub ok: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosedFormReport {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: u8,
    #[serde(rename = "overallFactor")]
    pub overall_factor: Cyclotomic,
    pub classes: Vec<ClosedFormClass>,
    pub passed: bool,
}

/// Expands `⅓[(X + α²Y)^N + ω^{2k}(X + ωα²Y)^N + ω^k(X + ω²α²Y)^N]` word by
/// word and compares it with the constructed `𝓜ₖ`: words outside the
/// operator must cancel, and words inside must carry `α^{2k}` times their
/// weight.
pub fn closed_form_check(n: usize, k: u8) -> Result<ClosedFormReport, MerminError> {
    check_args(n, k, 4)?;
    let op = mermin_operator(n, k)?;
    let omega = PhaseExponent::OMEGA;
    let branches = [
        (PhaseExponent::ONE, PhaseExponent::new(2)),
        (omega.pow(2 * k as i64), omega + PhaseExponent::new(2)),
        (omega.pow(k as i64), omega.pow(2) + PhaseExponent::new(2)),
    ];
    let overall = PhaseExponent::new(2 * k as i64);

    // coefficient of a single word with j factors of Y
    let coefficient = |j: usize| -> Result<Cyclotomic, CycloError> {
        let mut bracket = Cyclotomic::ZERO;
        for (prefactor, y_coeff) in branches {
            let term = y_coeff.to_cyclotomic().checked_pow(j as u32)?.mul_phase(prefactor)?;
            bracket = bracket.checked_add(&term)?;
        }
        bracket.checked_div_int(3)
    };

    let mut per_word = std::collections::BTreeMap::new();
    for mask in 0..(1u64 << n) {
        let word = ObservableWord::from_y_mask(n, mask);
        let c = coefficient(mask.count_ones() as usize)?;
        if !c.is_zero() {
            per_word.insert(word, c);
        }
    }

    let mut passed = per_word.len() == op.terms.len();
    for term in &op.terms {
        let expected = term.weight_value().mul_phase(overall)?;
        passed &= per_word.get(&term.word) == Some(&expected);
    }

    let mut classes = Vec::with_capacity(n + 1);
    for j in 0..=n {
        let c = coefficient(j)?;
        let expected = (j % 3 == k as usize)
            .then(|| term_weight(j as u32, k).to_cyclotomic().mul_phase(overall))
            .transpose()?;
        let ok = match expected {
            Some(e) => c == e,
            None => c.is_zero(),
        };
        passed &= ok;
        classes.push(ClosedFormClass {
            y_count: j,
            words: binomial(n as u64, j as u64) as u64,
            coefficient: c,
            expected,
            ok,
        });
    }
    Ok(ClosedFormReport {
        n,
        k,
        overall_factor: overall.to_cyclotomic(),
        classes,
        passed,
    })
}

/// Quantum and hidden-variable values of the qubit Mermin operator
/// `½[(X + iY)^N + (-1)^k (X - iY)^N]`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct QubitComparison {
    #[serde(rename = "N")]
    pub n: usize,
    pub k: u8,
    #[serde(rename = "quantumValue")]
    pub quantum_value: u64,
    /// Exhaustive maximum of `|v|` over `±1` assignments.
    #[serde(rename = "hvMax")]
    pub hv_max: u64,
    /// `quantumValue / hvMax`.
    pub ratio: f64,
    /// The closed-form ratio `2^{N/2}` (even N) or `2^{(N-1)/2}` (odd N).
    #[serde(rename = "formulaRatio")]
    pub formula_ratio: f64,
}

/// Largest N for the exhaustive qubit search.
pub const MAX_QUBIT_N: usize = 16;

/// Evaluates the qubit construction directly: the operator is the sum of
/// `i^j` times each `{X,Y}` word with `j ≡ k (mod 2)` factors of `Y`, and
/// hidden variables assign `±1` to every local observable.
pub fn qubit_comparison(n: usize, k: u8) -> Result<QubitComparison, MerminError> {
    if n < 3 {
        return Err(MerminError::TooFewQutrits { n, min: 3 });
    }
    if k > 1 {
        return Err(MerminError::InvalidK(k));
    }
    if n > MAX_QUBIT_N {
        return Err(MerminError::SizeGuard { n, max: MAX_QUBIT_N });
    }
    let terms: Vec<u64> = (0..1u64 << n)
        .filter(|m| m.count_ones() % 2 == k as u32)
        .collect();
    // |v| depends only on the ratios r_i = v(Y_i)/v(X_i) = ±1; bit i of
    // `signs` set means r_i = -1
    let mut best = 0u64;
    for signs in 0..1u64 << n {
        let (mut re, mut im) = (0i64, 0i64);
        for &mask in &terms {
            let sign = if (mask & signs).count_ones() % 2 == 0 { 1 } else { -1 };
            match mask.count_ones() % 4 {
                0 => re += sign,
                1 => im += sign,
                2 => re -= sign,
                _ => im -= sign,
            }
        }
        let mag_sq = (re * re + im * im) as u64;
        // one of re, im is always zero, so |v| is an integer
        debug_assert!(re == 0 || im == 0);
        best = best.max(mag_sq.isqrt());
    }
    let quantum_value = terms.len() as u64;
    let formula_ratio = if n.is_multiple_of(2) {
        2f64.powi(n as i32 / 2)
    } else {
        2f64.powi((n as i32 - 1) / 2)
    };
    Ok(QubitComparison {
        n,
        k,
        quantum_value,
        hv_max: best,
        ratio: quantum_value as f64 / best as f64,
        formula_ratio,
    })
}
