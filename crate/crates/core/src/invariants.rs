//! Filtration and operator invariants of nilpotent algebras.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{invalid, Error, Result};
use crate::linalg::{kernel_dim, random_rational, Matrix, Subspace, Vector};

/// Seed used whenever a caller does not supply one.
pub const DEFAULT_SEED: u64 = 0x6e69_6c61_6c67;

/// Random test vectors used by [`characteristic_sequence`] by default.
pub const DEFAULT_SAMPLES: usize = 25;

/// `L = L^1 ⊇ L^2 ⊇ ...` down to the first zero term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CentralSeries {
    pub terms: Vec<Subspace>,
}

impl CentralSeries {
    /// Dimensions of all terms, ending in 0.
    pub fn dims(&self) -> Vec<usize> {
        self.terms.iter().map(Subspace::dim).collect()
    }

    /// `L^k` for `k >= 1`; zero past the end.
    pub fn term(&self, k: usize) -> Subspace {
        let ambient = self.terms[0].ambient();
        self.terms
            .get(k.saturating_sub(1))
            .cloned()
            .unwrap_or_else(|| Subspace::zero(ambient))
    }

    pub fn nilindex(&self) -> usize {
        self.terms.len() - 1
    }
}

/// `L^{k+1} = [L^k, L]`, spanned by `[v, e_j]` for `v` in a basis of `L^k`.
pub fn lower_central_series(alg: &Algebra) -> Result<CentralSeries> {
    let n = alg.dim();
    let mut terms = vec![Subspace::full(n)];
    loop {
        let last = terms.last().expect("series is never empty");
        if last.is_zero() {
            return Ok(CentralSeries { terms });
        }
        let mut next = Subspace::zero(n);
        for v in last.basis() {
            for j in 0..n {
                next.insert(alg.bracket_unchecked(v, &alg.basis_vector(j)));
            }
        }
        if next.dim() == last.dim() {
            let dims: Vec<usize> = terms.iter().map(Subspace::dim).collect();
            return Err(Error::NotNilpotent(format!(
                "lower central series stalls at dimension {} (dims so far {dims:?})",
                next.dim()
            )));
        }
        terms.push(next);
    }
}

pub fn nilindex(alg: &Algebra) -> Result<usize> {
    Ok(lower_central_series(alg)?.nilindex())
}

/// Matrix of `R_x: y -> [y, x]`; column `j` holds `[e_j, x]`.
pub fn right_mult_matrix(alg: &Algebra, x: &Vector) -> Result<Matrix> {
    let n = alg.dim();
    let cols = (0..n)
        .map(|j| alg.bracket(&alg.basis_vector(j), x))
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_columns(&cols)
}

/// Jordan block sizes of a nilpotent matrix in descending order, read off
/// from the kernel dimensions of its powers.
pub fn nilpotent_block_profile(m: &Matrix) -> Result<Vec<usize>> {
    if !m.is_square() {
        return Err(invalid(format!(
            "expected a square matrix, got {}x{}",
            m.rows(),
            m.cols()
        )));
    }
    let n = m.rows();
    // kernels[k] = dim ker m^k
    let mut kernels = vec![0usize];
    let mut power = Matrix::identity(n);
    while *kernels.last().unwrap() < n {
        power = power.mul(m)?;
        let k = kernel_dim(&power);
        if k == *kernels.last().unwrap() {
            return Err(invalid(format!(
                "matrix is not nilpotent (kernel of powers stalls at {k} < {n})"
            )));
        }
        kernels.push(k);
    }
    // at_least[k] = number of blocks of size >= k
    let at_least: Vec<usize> = kernels.windows(2).map(|w| w[1] - w[0]).collect();
    let mut sizes = Vec::new();
    for (k, pair) in at_least.iter().enumerate() {
        let longer = at_least.get(k + 1).copied().unwrap_or(0);
        sizes.extend(std::iter::repeat_n(k + 1, pair - longer));
    }
    sizes.reverse();
    Ok(sizes)
}

/// Descending Jordan profile, compared lexicographically.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CharacteristicSequence(pub Vec<usize>);

impl CharacteristicSequence {
    /// `(n - p, 1, ..., 1)` with `p` ones.
    pub fn p_filiform(n: usize, p: usize) -> Self {
        let mut seq = vec![n - p];
        seq.extend(std::iter::repeat_n(1, p));
        CharacteristicSequence(seq)
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.0
    }
}

impl std::fmt::Display for CharacteristicSequence {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Jordan profile of `R_x` for `x` outside `L^2`.
pub fn char_seq_at(alg: &Algebra, x: &Vector) -> Result<CharacteristicSequence> {
    let series = lower_central_series(alg)?;
    char_seq_with(alg, &series.term(2), x)
}

fn char_seq_with(alg: &Algebra, square: &Subspace, x: &Vector) -> Result<CharacteristicSequence> {
    if x.len() != alg.dim() {
        return Err(invalid(format!(
            "vector of length {} in dimension {}",
            x.len(),
            alg.dim()
        )));
    }
    if square.contains(x) {
        return Err(invalid("x lies in L^2"));
    }
    let m = right_mult_matrix(alg, x)?;
    match nilpotent_block_profile(&m) {
        Ok(p) => Ok(CharacteristicSequence(p)),
        Err(Error::InvalidInput(msg)) => Err(Error::NotNilpotent(format!("R_x: {msg}"))),
        Err(e) => Err(e),
    }
}

/// Lexicographic maximum of [`char_seq_at`] over basis vectors outside
/// `L^2`, their pairwise sums, and `samples` random vectors outside `L^2`.
///
/// The maximum over `L \ L^2` is attained on a dense open set, so this is
/// exact for generic samples; formally it is a lower bound.
pub fn characteristic_sequence(alg: &Algebra, samples: usize) -> Result<CharacteristicSequence> {
    characteristic_sequence_seeded(alg, samples, DEFAULT_SEED)
}

pub fn characteristic_sequence_seeded(
    alg: &Algebra,
    samples: usize,
    seed: u64,
) -> Result<CharacteristicSequence> {
    let n = alg.dim();
    let series = lower_central_series(alg)?;
    let square = series.term(2);
    if square.dim() == n {
        return Err(invalid("L^2 = L, the algebra has no generators"));
    }
    let outside: Vec<Vector> = (0..n)
        .map(|i| alg.basis_vector(i))
        .filter(|v| !square.contains(v))
        .collect();
    let mut candidates = outside.clone();
    for (a, u) in outside.iter().enumerate() {
        for w in &outside[a + 1..] {
            let s = u.plus(w);
            if !square.contains(&s) {
                candidates.push(s);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut drawn = 0;
    let mut attempts = 0;
    while drawn < samples && attempts < samples * 20 {
        attempts += 1;
        let v = Vector::from_scalars((0..n).map(|_| random_rational(&mut rng, 4, 3)).collect());
        if !square.contains(&v) {
            candidates.push(v);
            drawn += 1;
        }
    }
    let mut best: Option<CharacteristicSequence> = None;
    for x in &candidates {
        let c = char_seq_with(alg, &square, x)?;
        if best.as_ref().is_none_or(|b| c > *b) {
            best = Some(c);
        }
    }
    Ok(best.expect("at least one basis vector lies outside L^2"))
}

/// `C(L) = (n - p, 1, ..., 1)` with exactly `p` ones.
pub fn is_p_filiform(alg: &Algebra, p: usize) -> Result<bool> {
    is_p_filiform_seeded(alg, p, DEFAULT_SAMPLES, DEFAULT_SEED)
}

pub fn is_p_filiform_seeded(alg: &Algebra, p: usize, samples: usize, seed: u64) -> Result<bool> {
    let n = alg.dim();
    if p >= n {
        return Err(invalid(format!(
            "p = {p} must be smaller than the dimension {n}"
        )));
    }
    Ok(characteristic_sequence_seeded(alg, samples, seed)?
        == CharacteristicSequence::p_filiform(n, p))
}

/// Dimension of `{x : [x, L] = 0}`.
pub fn left_annihilator_dim(alg: &Algebra) -> usize {
    let n = alg.dim();
    // row i lists [e_i, e_0], ..., [e_i, e_{n-1}] side by side
    let rows: Vec<Vector> = (0..n)
        .map(|i| {
            let mut coords = Vec::with_capacity(n * n);
            for j in 0..n {
                match alg.product(i, j) {
                    Some(v) => coords.extend(v.iter().cloned()),
                    None => coords.extend(Vector::zeros(n).into_inner()),
                }
            }
            Vector::from_scalars(coords)
        })
        .collect();
    n - Subspace::span(n * n, rows).dim()
}
