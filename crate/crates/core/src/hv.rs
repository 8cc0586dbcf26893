//! Local hidden-variable values of Mermin operators and their maxima.
//!
//! A hidden-variable model assigns a cube root of unity to every local
//! observable. The modulus of the resulting value depends only on per-site
//! ratios of those assignments:
//!
//! * `N ≥ 4`: `Rᵢ = v(Yᵢ)/v(Xᵢ)`, global phase `Π v(Xᵢ)`;
//! * `N = 3`: `Rᵢ = v(Xᵢ)/v(Yᵢ)` and `Sᵢ = v(Wᵢ)/v(Yᵢ)`, global phase `v(YYY)`.
//!
//! The maximum of `|v|²` is found three ways:
//!
//! * [`hv_max_brute`] walks every ratio tuple and sums the operator terms;
//! * [`hv_max_symmetric`] uses permutation symmetry and only visits the
//!   counts of sites holding `1`, `ω` and `ω²`;
//! * [`hv_max_theorem`] compares the uniform and single-departure models in
//!   the product form `⅓|Π(1 + α²Rᵢ) + ω^{2k}Π(1 + ωα²Rᵢ) + ω^kΠ(1 + ω²α²Rᵢ)|`.
//!
//! All comparisons are on exact integers.

use std::f64::consts::PI;

use rayon::prelude::*;
use serde::{Serialize, Serializer};
use thiserror::Error;

use crate::cyclo::{CycloError, Cyclotomic, PhaseExponent};
use crate::mermin::{binomial, mermin_operator, term_weight, MerminError, MerminOperator};
use crate::pauli::BasisLabel;

/// Hard limit for exhaustive search over two-basis ratio tuples (`3^N`).
pub const MAX_BRUTE_N: usize = 14;

/// Limit for exact A-ratio comparisons in [`optimal_k`].
pub const MAX_OPTIMAL_K_N: usize = 30;

const ARGMAX_CAP: usize = 10;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HvError {
    #[error("exhaustive search is limited to N <= {max}, got N = {n}")]
    SizeGuard { n: usize, max: usize },
    #[error("assignment has {got} sites, operator has {expected}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("operator uses W but the assignment has no W values")]
    MissingW,
    #[error("hidden-variable values must be cube roots of unity, got {0}")]
    NotCubeRoot(PhaseExponent),
    #[error("{method} method does not apply to N = {n}")]
    NotApplicable { method: Method, n: usize },
    #[error("k = {k} is outside the theorem's scope for N = {n} (valid: {valid:?})")]
    KOutOfScope { n: usize, k: u8, valid: Vec<u8> },
    #[error("theorem evaluation is inconsistent: {0}")]
    Inconsistent(String),
    #[error(transparent)]
    Mermin(#[from] MerminError),
    #[error(transparent)]
    Arithmetic(#[from] CycloError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Brute,
    Symmetric,
    Theorem,
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Method::Brute => "brute",
            Method::Symmetric => "symmetric",
            Method::Theorem => "theorem",
        })
    }
}

/// Orientation of the ratios an outcome's assignments are expressed in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum RatioConvention {
    #[serde(rename = "R=v(Y)/v(X)")]
    YOverX,
    #[serde(rename = "R=v(X)/v(Y),S=v(W)/v(Y)")]
    XOverYWOverY,
}

impl RatioConvention {
    pub fn for_n(n: usize) -> Self {
        if n == 3 {
            RatioConvention::XOverYWOverY
        } else {
            RatioConvention::YOverX
        }
    }
}

fn check_cube_roots(values: &[PhaseExponent]) -> Result<(), HvError> {
    match values.iter().find(|p| !p.is_cube_root()) {
        Some(&p) => Err(HvError::NotCubeRoot(p)),
        None => Ok(()),
    }
}

/// Values assigned to each local observable. `w` is only needed at N = 3.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HvAssignment {
    pub x: Vec<PhaseExponent>,
    pub y: Vec<PhaseExponent>,
    pub w: Option<Vec<PhaseExponent>>,
}

impl HvAssignment {
    pub fn uniform(n: usize, with_w: bool) -> Self {
        Self {
            x: vec![PhaseExponent::ONE; n],
            y: vec![PhaseExponent::ONE; n],
            w: with_w.then(|| vec![PhaseExponent::ONE; n]),
        }
    }

    pub fn n(&self) -> usize {
        self.x.len()
    }

    fn value(&self, label: BasisLabel, site: usize) -> Result<PhaseExponent, HvError> {
        match label {
            BasisLabel::X => Ok(self.x[site]),
            BasisLabel::Y => Ok(self.y[site]),
            BasisLabel::W => self.w.as_ref().map(|w| w[site]).ok_or(HvError::MissingW),
        }
    }

    /// The ratios this assignment induces under `convention`.
    pub fn ratios(&self, convention: RatioConvention) -> Result<RatioAssignment, HvError> {
        match convention {
            RatioConvention::YOverX => Ok(RatioAssignment {
                r: self.y.iter().zip(&self.x).map(|(&y, &x)| y - x).collect(),
                s: None,
            }),
            RatioConvention::XOverYWOverY => {
                let w = self.w.as_ref().ok_or(HvError::MissingW)?;
                Ok(RatioAssignment {
                    r: self.x.iter().zip(&self.y).map(|(&x, &y)| x - y).collect(),
                    s: Some(w.iter().zip(&self.y).map(|(&w, &y)| w - y).collect()),
                })
            }
        }
    }
}

/// Per-site ratios of hidden-variable values (see the module docs for the
/// orientation used at each N).
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct RatioAssignment {
    pub r: Vec<PhaseExponent>,
    pub s: Option<Vec<PhaseExponent>>,
}

impl RatioAssignment {
    pub fn uniform(n: usize) -> Self {
        Self {
            r: vec![PhaseExponent::ONE; n],
            s: (n == 3).then(|| vec![PhaseExponent::ONE; n]),
        }
    }

    /// All ratios 1 except `R[site] = value`.
    pub fn single_departure(n: usize, site: usize, value: PhaseExponent) -> Self {
        let mut a = Self::uniform(n);
        a.r[site] = value;
        a
    }

    pub fn n(&self) -> usize {
        self.r.len()
    }

    /// The tuple of α-exponents, `R` sites then `S` sites.
    pub fn exponents(&self) -> Vec<u8> {
        self.r
            .iter()
            .chain(self.s.iter().flatten())
            .map(|p| p.value())
            .collect()
    }

    fn from_digits(n: usize, digits: &[u8]) -> Self {
        let to_phase = |d: &u8| PhaseExponent::omega_pow(*d as i64);
        Self {
            r: digits[..n].iter().map(to_phase).collect(),
            s: (digits.len() > n).then(|| digits[n..].iter().map(to_phase).collect()),
        }
    }
}

impl Serialize for RatioAssignment {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.exponents().serialize(serializer)
    }
}

/// `Σ weight × Π v(local factor)` over the terms of `op`.
pub fn hv_value(op: &MerminOperator, assignment: &HvAssignment) -> Result<Cyclotomic, HvError> {
    let n = op.n();
    if assignment.n() != n || assignment.y.len() != n {
        return Err(HvError::SizeMismatch { expected: n, got: assignment.n() });
    }
    if let Some(w) = &assignment.w {
        if w.len() != n {
            return Err(HvError::SizeMismatch { expected: n, got: w.len() });
        }
        check_cube_roots(w)?;
    }
    check_cube_roots(&assignment.x)?;
    check_cube_roots(&assignment.y)?;
    let mut total = Cyclotomic::ZERO;
    for term in op.terms() {
        let mut phase = term.weight;
        for (site, &label) in term.word.labels().iter().enumerate() {
            phase = phase + assignment.value(label, site)?;
        }
        total = total.checked_add(&phase.to_cyclotomic())?;
    }
    Ok(total)
}

/// The operator value as a function of the ratios alone, with the global
/// phase removed.
pub fn ratio_value(op: &MerminOperator, ratios: &RatioAssignment) -> Result<Cyclotomic, HvError> {
    let n = op.n();
    if ratios.n() != n {
        return Err(HvError::SizeMismatch { expected: n, got: ratios.n() });
    }
    check_cube_roots(&ratios.r)?;
    let s = match (&ratios.s, op.uses_w()) {
        (Some(s), true) => {
            if s.len() != n {
                return Err(HvError::SizeMismatch { expected: n, got: s.len() });
            }
            check_cube_roots(s)?;
            Some(s)
        }
        (None, true) => return Err(HvError::MissingW),
        (_, false) => None,
    };
    let mut total = Cyclotomic::ZERO;
    for term in op.terms() {
        let mut phase = term.weight;
        for (site, &label) in term.word.labels().iter().enumerate() {
            phase = phase
                + match (label, s) {
                    (BasisLabel::Y, None) => ratios.r[site],
                    (BasisLabel::X, None) => PhaseExponent::ONE,
                    (BasisLabel::X, Some(_)) => ratios.r[site],
                    (BasisLabel::Y, Some(_)) => PhaseExponent::ONE,
                    (BasisLabel::W, Some(s)) => s[site],
                    (BasisLabel::W, None) => return Err(HvError::MissingW),
                };
        }
        total = total.checked_add(&phase.to_cyclotomic())?;
    }
    Ok(total)
}

/// Result of a hidden-variable maximization.
#[derive(Clone, Debug, PartialEq)]
pub struct HvOutcome {
    pub n: usize,
    pub k: u8,
    pub method: Method,
    /// Exact `max |v|²`.
    pub max_magnitude_squared: Cyclotomic,
    pub max_magnitude: f64,
    /// Maximizing ratio assignments, lexicographically first [`ARGMAX_CAP`].
    /// The symmetric method lists one sorted representative per multiset.
    pub argmax: Vec<RatioAssignment>,
    /// Number of maximizers found, counted the same way as `argmax`.
    pub argmax_count: u64,
    pub quantum_value: u64,
    /// `quantum_value / max_magnitude`.
    pub ratio_a: f64,
    pub convention: RatioConvention,
}

impl HvOutcome {
    fn new(
        n: usize,
        k: u8,
        method: Method,
        max_sq: i128,
        argmax: Vec<RatioAssignment>,
        argmax_count: u64,
        quantum_value: u64,
    ) -> Self {
        let max_magnitude = (max_sq as f64).sqrt();
        Self {
            n,
            k,
            method,
            max_magnitude_squared: Cyclotomic::from_int(max_sq),
            max_magnitude,
            argmax,
            argmax_count,
            quantum_value,
            ratio_a: quantum_value as f64 / max_magnitude,
            convention: RatioConvention::for_n(n),
        }
    }

    /// `max |v|²` as an integer. Always present for this crate's operators.
    pub fn max_squared_int(&self) -> Option<i128> {
        self.max_magnitude_squared.to_integer()
    }
}

impl Serialize for HvOutcome {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(untagged)]
        enum Exact {
            Integer(i128),
            Coefficients(Cyclotomic),
        }
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct Json<'a> {
            #[serde(rename = "N")]
            n: usize,
            k: u8,
            method: Method,
            quantum_value: u64,
            max_magnitude_squared: Exact,
            max_magnitude: f64,
            #[serde(rename = "ratioA")]
            ratio_a: f64,
            argmax: &'a [RatioAssignment],
            argmax_count: u64,
            convention: RatioConvention,
        }
        Json {
            n: self.n,
            k: self.k,
            method: self.method,
            quantum_value: self.quantum_value,
            max_magnitude_squared: match self.max_squared_int() {
                Some(v) => Exact::Integer(v),
                None => Exact::Coefficients(self.max_magnitude_squared),
            },
            max_magnitude: self.max_magnitude,
            ratio_a: self.ratio_a,
            argmax: &self.argmax,
            argmax_count: self.argmax_count,
            convention: self.convention,
        }
        .serialize(serializer)
    }
}

/// `|a + bω + cω²|²`.
fn omega_norm(b: [i128; 3]) -> i128 {
    let [a, b, c] = b;
    a * a + b * b + c * c - a * b - b * c - c * a
}

/// A term reduced to bit masks: the sites carrying the first ratio family,
/// the sites carrying the second, and the weight as a power of ω.
#[derive(Clone, Copy, Debug)]
struct PackedTerm {
    mask_r: u32,
    mask_s: u32,
    weight: u8,
}

fn pack_terms(op: &MerminOperator) -> Vec<PackedTerm> {
    let (r_label, s_label) = if op.uses_w() {
        (BasisLabel::X, Some(BasisLabel::W))
    } else {
        (BasisLabel::Y, None)
    };
    op.terms()
        .iter()
        .map(|t| {
            let mut mask_r = 0u32;
            let mut mask_s = 0u32;
            for (i, &l) in t.word.labels().iter().enumerate() {
                if l == r_label {
                    mask_r |= 1 << i;
                } else if Some(l) == s_label {
                    mask_s |= 1 << i;
                }
            }
            PackedTerm {
                mask_r,
                mask_s,
                weight: t.weight.omega_index().expect("weights are cube roots"),
            }
        })
        .collect()
}

/// Sums `digits[i]` (mod 3) over the bits of any mask, via two half tables.
struct MaskSums {
    split: u32,
    lo: Vec<u8>,
    hi: Vec<u8>,
}

impl MaskSums {
    fn new(digits: &[u8]) -> Self {
        let split = (digits.len() / 2) as u32;
        let table = |ds: &[u8]| {
            let mut t = vec![0u8; 1 << ds.len()];
            for m in 1..t.len() {
                let low = m.trailing_zeros() as usize;
                t[m] = (t[m & (m - 1)] + ds[low]) % 3;
            }
            t
        };
        Self {
            split,
            lo: table(&digits[..split as usize]),
            hi: table(&digits[split as usize..]),
        }
    }

    #[inline]
    fn sum(&self, mask: u32) -> u8 {
        self.lo[(mask & ((1 << self.split) - 1)) as usize] + self.hi[(mask >> self.split) as usize]
    }
}

#[derive(Clone, Debug)]
struct SearchBest {
    norm: i128,
    count: u64,
    first: Vec<u64>,
}

impl SearchBest {
    fn empty() -> Self {
        Self { norm: -1, count: 0, first: Vec::new() }
    }

    fn offer(&mut self, norm: i128, index: u64) {
        if norm > self.norm {
            self.norm = norm;
            self.count = 0;
            self.first.clear();
        }
        if norm == self.norm {
            self.count += 1;
            if self.first.len() < ARGMAX_CAP {
                self.first.push(index);
            }
        }
    }

    fn merge(mut self, other: Self) -> Self {
        if other.norm > self.norm {
            return other;
        }
        if other.norm == self.norm {
            self.count += other.count;
            self.first.extend(other.first);
            self.first.sort_unstable();
            self.first.truncate(ARGMAX_CAP);
        }
        self
    }
}

fn index_digits(mut index: u64, len: usize) -> Vec<u8> {
    let mut d = vec![0u8; len];
    for slot in d.iter_mut().rev() {
        *slot = (index % 3) as u8;
        index /= 3;
    }
    d
}

/// Exact maximum over every ratio tuple: `3^N` for two bases, `3^6 = 729`
/// `(R, S)` tuples at N = 3.
pub fn hv_max_brute(n: usize, k: u8) -> Result<HvOutcome, HvError> {
    hv_max_brute_limited(n, k, MAX_BRUTE_N)
}

/// [`hv_max_brute`] with a caller-chosen size guard (never above
/// [`MAX_BRUTE_N`]).
pub fn hv_max_brute_limited(n: usize, k: u8, max_n: usize) -> Result<HvOutcome, HvError> {
    let max = max_n.min(MAX_BRUTE_N);
    if n > max {
        return Err(HvError::SizeGuard { n, max });
    }
    let op = mermin_operator(n, k)?;
    let terms = pack_terms(&op);
    let families = if op.uses_w() { 2 } else { 1 };
    let len = n * families;
    let total = 3u64.pow(len as u32);

    // Digits are ordered R₁..R_N then S₁..S_N, most significant first, so
    // index order is lexicographic order on the exponent tuple.
    let chunk = 3u64.pow(len.min(6) as u32);
    let best = (0..total.div_ceil(chunk))
        .into_par_iter()
        .map(|c| {
            let mut best = SearchBest::empty();
            let start = c * chunk;
            let mut digits = index_digits(start, len);
            for index in start..(start + chunk).min(total) {
                let sums_r = MaskSums::new(&digits[..n]);
                let sums_s = (families == 2).then(|| MaskSums::new(&digits[n..]));
                let mut buckets = [0i128; 3];
                for t in &terms {
                    let mut e = t.weight + sums_r.sum(t.mask_r);
                    if let Some(s) = &sums_s {
                        e += s.sum(t.mask_s);
                    }
                    buckets[(e % 3) as usize] += 1;
                }
                best.offer(omega_norm(buckets), index);
                // increment the base-3 counter
                for d in digits.iter_mut().rev() {
                    *d += 1;
                    if *d < 3 {
                        break;
                    }
                    *d = 0;
                }
            }
            best
        })
        .reduce(SearchBest::empty, SearchBest::merge);

    let argmax = best
        .first
        .iter()
        .map(|&i| RatioAssignment::from_digits(n, &index_digits(i, len)))
        .collect();
    Ok(HvOutcome::new(n, k, Method::Brute, best.norm, argmax, best.count, op.quantum_value()))
}

/// Exact maximum over multisets of ratios. The value is symmetric under
/// permuting sites, so only the counts `(n₀, n₁, n₂)` of sites with ratio
/// `1, ω, ω²` matter; each evaluation counts Y placements combinatorially.
pub fn hv_max_symmetric(n: usize, k: u8) -> Result<HvOutcome, HvError> {
    if n < 4 {
        return Err(HvError::NotApplicable { method: Method::Symmetric, n });
    }
    let quantum_value = crate::mermin::quantum_value(n, k)?;
    let weights: Vec<usize> = (0..=n)
        .map(|j| term_weight(j as u32, k).omega_index().unwrap_or(0) as usize)
        .collect();
    let binom = |a: usize, b: usize| binomial(a as u64, b as u64) as i128;

    let mut scored = Vec::new();
    for n1 in 0..=n {
        for n2 in 0..=n - n1 {
            let n0 = n - n1 - n2;
            let mut buckets = [0i128; 3];
            for a in 0..=n0 {
                for b in 0..=n1 {
                    for c in 0..=n2 {
                        let j = a + b + c;
                        if j % 3 != k as usize {
                            continue;
                        }
                        let phase = (weights[j] + b + 2 * c) % 3;
                        buckets[phase] += binom(n0, a) * binom(n1, b) * binom(n2, c);
                    }
                }
            }
            scored.push((omega_norm(buckets), [n0, n1, n2]));
        }
    }
    let max_norm = scored.iter().map(|&(v, _)| v).max().expect("nonempty");
    // sorted digits are the lexicographically first arrangement of a multiset
    let mut argmax: Vec<RatioAssignment> = scored
        .iter()
        .filter(|&&(v, _)| v == max_norm)
        .map(|&(_, [n0, n1, n2])| {
            let digits: Vec<u8> = std::iter::repeat_n(0u8, n0)
                .chain(std::iter::repeat_n(1, n1))
                .chain(std::iter::repeat_n(2, n2))
                .collect();
            RatioAssignment::from_digits(n, &digits)
        })
        .collect();
    argmax.sort();
    let count = argmax.len() as u64;
    argmax.truncate(ARGMAX_CAP);
    Ok(HvOutcome::new(n, k, Method::Symmetric, max_norm, argmax, count, quantum_value))
}

/// The k values for which the theorem's alignment argument holds: for odd
/// N the unique `k` with `N ≡ 2k (mod 3)`, for even N the two others.
pub fn theorem_k_set(n: usize) -> Vec<u8> {
    (0..3u8)
        .filter(|&k| {
            let aligned = (n as i64 - 2 * k as i64).rem_euclid(3) == 0;
            if n % 2 == 1 {
                aligned
            } else {
                !aligned
            }
        })
        .collect()
}

/// `3·α^{2k}·v` for ratios `r`, from the product form.
fn product_form(k: u8, r: &[PhaseExponent]) -> Result<Cyclotomic, CycloError> {
    let omega = PhaseExponent::OMEGA;
    let two = PhaseExponent::new(2);
    let mut bracket = Cyclotomic::ZERO;
    for (m, prefactor) in [(0, 0), (1, 2 * k as i64), (2, k as i64)] {
        let shift = omega.pow(m) + two;
        let mut prod = omega.pow(prefactor).to_cyclotomic();
        for &ri in r {
            let factor = Cyclotomic::ONE.checked_add(&(shift + ri).to_cyclotomic())?;
            prod = prod.checked_mul(&factor)?;
        }
        bracket = bracket.checked_add(&prod)?;
    }
    Ok(bracket)
}

/// Exact `|v|²` of `𝓜ₖ` at ratios `r`, via the product form.
pub fn product_form_norm(k: u8, r: &[PhaseExponent]) -> Result<i128, HvError> {
    let norm = product_form(k, r)?.checked_norm_squared()?.checked_div_int(9)?;
    norm.to_integer()
        .ok_or_else(|| HvError::Inconsistent(format!("|v|² = {norm} is not an integer")))
}

/// The magnitudes `A > B > C` of the three product-form factors.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct Magnitudes {
    pub a: f64,
    pub b: f64,
    pub c: f64,
}

pub fn magnitudes_abc() -> Magnitudes {
    Magnitudes {
        a: 2.0 * (PI / 9.0).cos(),
        b: 2.0 * (2.0 * PI / 9.0).cos(),
        c: 2.0 * (4.0 * PI / 9.0).cos(),
    }
}

/// Collinear uniform value `(A^N - B^N - C^N)/3`, valid for odd N.
pub fn collinear_uniform(n: f64) -> f64 {
    let m = magnitudes_abc();
    (m.a.powf(n) - m.b.powf(n) - m.c.powf(n)) / 3.0
}

/// Collinear single-departure value `(A^{N-1}B + B^{N-1}C - C^{N-1}A)/3`.
pub fn collinear_single_departure(n: f64) -> f64 {
    let m = magnitudes_abc();
    (m.a.powf(n - 1.0) * m.b + m.b.powf(n - 1.0) * m.c - m.c.powf(n - 1.0) * m.a) / 3.0
}

/// Uniform minus single-departure value, continued to real N.
pub fn crossover_difference(n: f64) -> f64 {
    collinear_uniform(n) - collinear_single_departure(n)
}

/// Zero of [`crossover_difference`] on `[9, 11]`, by bisection to 1e-6.
pub fn crossover_n() -> f64 {
    let (mut lo, mut hi) = (9.0, 11.0);
    debug_assert!(crossover_difference(lo) < 0.0 && crossover_difference(hi) > 0.0);
    while hi - lo > 1e-6 {
        let mid = 0.5 * (lo + hi);
        if crossover_difference(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
#[serde(rename_all = "camelCase")]
pub struct Asymptotics {
    /// `A^N / 3`.
    pub hv_asymptote: f64,
    /// `2/A`, the growth base of the quantum-to-HV ratio.
    pub ratio_growth_base: f64,
}

pub fn asymptotics(n: usize) -> Asymptotics {
    let a = magnitudes_abc().a;
    Asymptotics {
        hv_asymptote: a.powi(n as i32) / 3.0,
        ratio_growth_base: 2.0 / a,
    }
}

/// Maximum from the theorem: the larger of the uniform model and the
/// single departure `R = ω` on one site, evaluated exactly. For odd N the
/// exact values are also checked against the collinear closed forms.
pub fn hv_max_theorem(n: usize, k: u8) -> Result<HvOutcome, HvError> {
    if n < 4 {
        return Err(HvError::NotApplicable { method: Method::Theorem, n });
    }
    let valid = theorem_k_set(n);
    if !valid.contains(&k) {
        return Err(HvError::KOutOfScope { n, k, valid });
    }
    let quantum_value = crate::mermin::quantum_value(n, k)?;
    let uniform = RatioAssignment::uniform(n);
    // lexicographically first placement of the departed site
    let departure = RatioAssignment::single_departure(n, n - 1, PhaseExponent::OMEGA);
    let u = product_form_norm(k, &uniform.r)?;
    let d = product_form_norm(k, &departure.r)?;

    if n % 2 == 1 {
        for (exact, closed, name) in [
            (u, collinear_uniform(n as f64), "uniform"),
            (d, collinear_single_departure(n as f64), "single departure"),
        ] {
            let exact = (exact as f64).sqrt();
            if (exact - closed).abs() > 1e-9 * exact.max(1.0) {
                return Err(HvError::Inconsistent(format!(
                    "{name} value {exact} differs from collinear form {closed} at N = {n}"
                )));
            }
        }
    }

    let max = u.max(d);
    let argmax: Vec<RatioAssignment> = [(u, uniform), (d, departure)]
        .into_iter()
        .filter(|(v, _)| *v == max)
        .map(|(_, a)| a)
        .collect();
    let count = argmax.len() as u64;
    Ok(HvOutcome::new(n, k, Method::Theorem, max, argmax, count, quantum_value))
}

/// Per-k outcomes and the k values maximizing `𝒜 = 𝓜_Q / 𝓜_HVM`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct OptimalK {
    #[serde(rename = "N")]
    pub n: usize,
    pub ks: Vec<u8>,
    pub outcomes: Vec<HvOutcome>,
}

/// Computes the outcome for every k with `method` and keeps the exact
/// argmax of `𝒜² = Q²/|v|²`.
pub fn optimal_k(n: usize, method: Method) -> Result<OptimalK, HvError> {
    if n > MAX_OPTIMAL_K_N {
        return Err(HvError::SizeGuard { n, max: MAX_OPTIMAL_K_N });
    }
    let outcomes = (0..3u8)
        .map(|k| match method {
            Method::Brute => hv_max_brute(n, k),
            Method::Symmetric => hv_max_symmetric(n, k),
            Method::Theorem => Err(HvError::NotApplicable { method, n }),
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok(OptimalK { n, ks: best_ks(&outcomes), outcomes })
}

/// Indices of the outcomes with the largest `Q²/|v|²`, compared exactly.
pub fn best_ks(outcomes: &[HvOutcome]) -> Vec<u8> {
    let key = |o: &HvOutcome| {
        let q = o.quantum_value as u128;
        (q * q, o.max_squared_int().expect("integer maxima") as u128)
    };
    let mut best: Vec<u8> = Vec::new();
    let mut best_key: Option<(u128, u128)> = None;
    for o in outcomes {
        let (num, den) = key(o);
        match best_key {
            Some((bn, bd)) if num * bd < bn * den => {}
            Some((bn, bd)) if num * bd == bn * den => best.push(o.k),
            _ => {
                best = vec![o.k];
                best_key = Some((num, den));
            }
        }
    }
    best.sort_unstable();
    best
}
