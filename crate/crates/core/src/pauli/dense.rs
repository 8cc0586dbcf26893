//! Explicit matrices for small systems, used as an oracle for the monomial
//! word action. Nothing here goes through [`LocalOperator`](super::LocalOperator):
//! the local matrices come from plain dense products and the tensor words
//! from Kronecker products.

use crate::cyclo::Cyclotomic;

use super::{BasisLabel, ObservableWord, PauliError, WVariant};

/// Largest N for which [`dense_matrix`] will build a `3^N × 3^N` matrix.
pub const MAX_DENSE_N: usize = 8;

/// Column-compressed exact matrix. `columns[c]` lists `(row, value)` pairs
/// sorted by row, zeros omitted.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SparseMatrix {
    dim: usize,
    columns: Vec<Vec<(usize, Cyclotomic)>>,
}

impl SparseMatrix {
    pub fn identity(dim: usize) -> Self {
        Self {
            dim,
            columns: (0..dim).map(|c| vec![(c, Cyclotomic::ONE)]).collect(),
        }
    }

    pub fn from_dense<const D: usize>(m: &[[Cyclotomic; D]; D]) -> Self {
        let columns = (0..D)
            .map(|c| {
                (0..D)
                    .filter(|&r| !m[r][c].is_zero())
                    .map(|r| (r, m[r][c]))
                    .collect()
            })
            .collect();
        Self { dim: D, columns }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn column(&self, c: usize) -> &[(usize, Cyclotomic)] {
        &self.columns[c]
    }

    pub fn get(&self, row: usize, col: usize) -> Cyclotomic {
        self.columns[col]
            .iter()
            .find(|(r, _)| *r == row)
            .map_or(Cyclotomic::ZERO, |(_, v)| *v)
    }

    /// Exactly one nonzero entry in every row and column.
    pub fn is_monomial(&self) -> bool {
        let mut row_seen = vec![false; self.dim];
        for col in &self.columns {
            if col.len() != 1 || row_seen[col[0].0] {
                return false;
            }
            row_seen[col[0].0] = true;
        }
        true
    }

    pub fn kron(&self, rhs: &Self) -> Self {
        let dim = self.dim * rhs.dim;
        let mut columns = Vec::with_capacity(dim);
        for a_col in &self.columns {
            for b_col in &rhs.columns {
                let mut col = Vec::with_capacity(a_col.len() * b_col.len());
                for &(ra, va) in a_col {
                    for &(rb, vb) in b_col {
                        col.push((ra * rhs.dim + rb, va * vb));
                    }
                }
                col.sort_by_key(|&(r, _)| r);
                columns.push(col);
            }
        }
        Self { dim, columns }
    }

    /// Matrix product `self · rhs`.
    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.dim, rhs.dim, "dimension mismatch");
        let columns = rhs
            .columns
            .iter()
            .map(|b_col| {
                let mut acc = vec![Cyclotomic::ZERO; self.dim];
                for &(k, vb) in b_col {
                    for &(r, va) in &self.columns[k] {
                        acc[r] = acc[r] + va * vb;
                    }
                }
                acc.into_iter()
                    .enumerate()
                    .filter(|(_, v)| !v.is_zero())
                    .collect()
            })
            .collect();
        Self {
            dim: self.dim,
            columns,
        }
    }
}

type Dense3 = [[Cyclotomic; 3]; 3];

fn matmul3(a: &Dense3, b: &Dense3) -> Dense3 {
    let mut c = [[Cyclotomic::ZERO; 3]; 3];
    for (i, row) in c.iter_mut().enumerate() {
        for (j, entry) in row.iter_mut().enumerate() {
            *entry = (0..3).map(|k| a[i][k] * b[k][j]).sum();
        }
    }
    c
}

fn diag3(exps: [i64; 3]) -> Dense3 {
    let mut m = [[Cyclotomic::ZERO; 3]; 3];
    for (i, e) in exps.into_iter().enumerate() {
        m[i][i] = Cyclotomic::alpha_pow(e);
    }
    m
}

/// Dense 3×3 matrix of a local basis, from the defining products.
pub fn local_dense(label: BasisLabel, variant: WVariant) -> Dense3 {
    let mut x = [[Cyclotomic::ZERO; 3]; 3];
    for n in 0..3 {
        x[(n + 1) % 3][n] = Cyclotomic::ONE;
    }
    match (label, variant) {
        (BasisLabel::X, _) => x,
        (BasisLabel::W, WVariant::Displayed) => {
            let mut w = [[Cyclotomic::ZERO; 3]; 3];
            for n in 0..3 {
                let e = if n == 0 { 2 - 6 } else { 2 };
                w[(n + 1) % 3][n] = Cyclotomic::alpha_pow(e);
            }
            w
        }
        (label, _) => {
            let u = label.rotation_units() as i64;
            let z_pow = diag3([0, u, 2 * u]);
            let z_pow_inv = diag3([0, -u, -2 * u]);
            matmul3(&matmul3(&z_pow, &x), &z_pow_inv)
        }
    }
}

/// Explicit matrix of a tensor word, with `W` by conjugation.
pub fn dense_matrix(word: &ObservableWord) -> Result<SparseMatrix, PauliError> {
    dense_matrix_with(word, WVariant::Conjugation)
}

pub fn dense_matrix_with(
    word: &ObservableWord,
    variant: WVariant,
) -> Result<SparseMatrix, PauliError> {
    if word.len() > MAX_DENSE_N {
        return Err(PauliError::SizeGuard {
            n: word.len(),
            max: MAX_DENSE_N,
        });
    }
    Ok(word
        .labels()
        .iter()
        .map(|&l| SparseMatrix::from_dense(&local_dense(l, variant)))
        .reduce(|acc, m| acc.kron(&m))
        .expect("words are nonempty"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cyclo::PhaseExponent;
    use crate::pauli::{all_words, apply_word, basis_index, basis_state};

    #[test]
    fn single_x_is_shift() {
        let m = dense_matrix(&"X".parse().unwrap()).unwrap();
        for c in 0..3 {
            assert_eq!(m.column(c), &[((c + 1) % 3, Cyclotomic::ONE)]);
        }
    }

    #[test]
    fn cube_of_yxxx_is_identity() {
        let m = dense_matrix(&"YXXX".parse().unwrap()).unwrap();
        assert!(m.is_monomial());
        assert_eq!(m.mul(&m).mul(&m), SparseMatrix::identity(81));
    }

    #[test]
    fn xyw_on_origin_matches_word_action() {
        let word: ObservableWord = "XYW".parse().unwrap();
        let m = dense_matrix(&word).unwrap();
        let (phase, image) = apply_word(&word, &[0, 0, 0]).unwrap();
        assert_eq!(m.column(0), &[(basis_index(&image), phase.to_cyclotomic())]);
        assert_eq!(phase, PhaseExponent::new(3));
    }

    #[test]
    fn size_guard() {
        let word = ObservableWord::from_y_mask(MAX_DENSE_N + 1, 0);
        assert_eq!(
            dense_matrix(&word),
            Err(PauliError::SizeGuard { n: MAX_DENSE_N + 1, max: MAX_DENSE_N })
        );
    }

    #[test]
    fn dense_agrees_with_word_action_small() {
        for n in 1..=3 {
            for word in all_words(n, &BasisLabel::ALL) {
                let m = dense_matrix(&word).unwrap();
                for idx in 0..m.dim() {
                    let (phase, image) = apply_word(&word, &basis_state(n, idx)).unwrap();
                    assert_eq!(m.column(idx), &[(basis_index(&image), phase.to_cyclotomic())]);
                }
            }
        }
    }
}
