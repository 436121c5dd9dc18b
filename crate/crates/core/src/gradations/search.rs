//! Search for gradations of maximum length in which a chosen set of
//! generators is homogeneous.
//!
//! Every generator `g_s` gets an unknown integer degree `k_s`. Iterated
//! brackets of the generators span the algebra; a word containing `g_s`
//! `m_s` times has degree `Σ m_s k_s`. The degrees are then enumerated over a
//! window and every candidate is checked for injectivity, connectedness and
//! closure in the adapted basis.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{invalid, Error, Result};
use crate::invariants::{lower_central_series, DEFAULT_SEED};
use crate::linalg::{random_nonzero_rational, Matrix, Subspace, Vector};

use super::{
    verify_gradation, AdaptedBasis, DegreeAssignment, DrawSummary, FailureKind, FailureTally,
    GradationReport, KtFailures, SearchSummary, Verdict,
};

/// Generic draws made after the unperturbed one.
pub const DEFAULT_SEARCH_SAMPLES: usize = 3;

pub const NO_GRADATION_NOTE: &str = "no gradation found under the two-generator adapted-basis scheme: \
the generators are assumed homogeneous of the generic form (a lift of a basis of L/L^2 with random rational \
coefficients on every other basis vector) and the rest of the basis consists of their iterated brackets; \
by genericity the sampled coefficients stand for almost all choices, so this is strong evidence but not a \
formal non-existence proof";

/// Degree of a word as a combination of the generator degrees.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SymbolicDegree {
    /// Multiplicity of each generator in the word.
    pub coefficients: Vec<i64>,
}

impl SymbolicDegree {
    pub fn generator(count: usize, s: usize) -> Self {
        let mut coefficients = vec![0; count];
        coefficients[s] = 1;
        SymbolicDegree { coefficients }
    }

    pub fn plus(&self, other: &SymbolicDegree) -> Self {
        SymbolicDegree {
            coefficients: self
                .coefficients
                .iter()
                .zip(&other.coefficients)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }

    pub fn eval(&self, k: &[i64]) -> i64 {
        self.coefficients.iter().zip(k).map(|(a, b)| a * b).sum()
    }

    /// Index of the last generator that occurs in the word.
    fn last_generator(&self) -> usize {
        self.coefficients.iter().rposition(|&c| c != 0).unwrap_or(0)
    }
}

fn parameter_name(s: usize) -> String {
    match s {
        0 => "k_s".to_string(),
        1 => "k_t".to_string(),
        _ => format!("k_{}", s + 1),
    }
}

impl fmt::Display for SymbolicDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (s, &c) in self.coefficients.iter().enumerate() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            if c != 1 {
                write!(f, "{c}")?;
            }
            f.write_str(&parameter_name(s))?;
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

/// Generators and their iterated brackets forming a basis.
#[derive(Debug, Clone)]
pub struct AdaptedBasisSample {
    pub generators: Vec<Vector>,
    pub basis: Vec<Vector>,
    pub labels: Vec<String>,
    pub degrees: Vec<SymbolicDegree>,
}

impl AdaptedBasisSample {
    /// Every basis vector is a multiple of an input basis vector.
    pub fn is_monomial(&self) -> bool {
        self.basis.iter().all(|v| v.support().count() == 1)
    }

    pub fn matrix(&self) -> Result<Matrix> {
        Matrix::from_rows(&self.basis)
    }
}

/// Greedy choice of basis vectors spanning `L / L^2`, in index order.
pub fn infer_generators(alg: &Algebra) -> Result<Vec<usize>> {
    let series = lower_central_series(alg)?;
    let mut span = series.term(2);
    Ok((0..alg.dim())
        .filter(|&i| span.insert(alg.basis_vector(i)))
        .collect())
}

/// Brackets words in the generators level by level (by word length) and
/// keeps each one that is independent of those kept so far. Returns `None`
/// when the words do not span the algebra.
pub fn adapted_basis(
    alg: &Algebra,
    generators: &[Vector],
    names: &[String],
) -> Result<Option<AdaptedBasisSample>> {
    let n = alg.dim();
    if generators.is_empty() {
        return Err(invalid("at least one generator is required"));
    }
    if names.len() != generators.len() {
        return Err(invalid("one name per generator is required"));
    }
    let g = generators.len();
    let mut span = Subspace::zero(n);
    let mut basis = Vec::new();
    let mut labels = Vec::new();
    let mut degrees = Vec::new();
    let mut lengths = Vec::new();
    for (s, v) in generators.iter().enumerate() {
        if v.len() != n {
            return Err(invalid(format!(
                "generator {s} has length {} in dimension {n}",
                v.len()
            )));
        }
        if span.insert(v.clone()) {
            basis.push(v.clone());
            labels.push(names[s].clone());
            degrees.push(SymbolicDegree::generator(g, s));
            lengths.push(1usize);
        }
    }
    // words of length > n vanish in a nilpotent algebra of dimension n
    let mut level = 2;
    while span.dim() < n && level <= n {
        let existing = basis.len();
        for a in 0..existing {
            for b in 0..existing {
                if lengths[a] + lengths[b] != level {
                    continue;
                }
                let w = alg.bracket_unchecked(&basis[a], &basis[b]);
                if span.insert(w.clone()) {
                    basis.push(w);
                    labels.push(format!("[{},{}]", labels[a], labels[b]));
                    degrees.push(degrees[a].plus(&degrees[b]));
                    lengths.push(level);
                }
            }
        }
        level += 1;
    }
    if span.dim() < n {
        return Ok(None);
    }
    Ok(Some(AdaptedBasisSample {
        generators: generators.to_vec(),
        basis,
        labels,
        degrees,
    }))
}

#[derive(Debug, Clone)]
pub struct SearchOptions {
    /// Window `[-W, W]` for the generator degrees; defaults to `2n`.
    pub kt_window: Option<i64>,
    /// Generic draws after the unperturbed one.
    pub samples: usize,
    pub seed: u64,
    /// Basis indices of the generators; inferred from `L / L^2` if absent.
    pub generators: Option<Vec<usize>>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            kt_window: None,
            samples: DEFAULT_SEARCH_SAMPLES,
            seed: DEFAULT_SEED,
            generators: None,
        }
    }
}

/// Search with inferred generators and the default seed.
pub fn two_generator_search(
    alg: &Algebra,
    kt_window: i64,
    samples: usize,
) -> Result<GradationReport> {
    two_generator_search_with(
        alg,
        &SearchOptions {
            kt_window: Some(kt_window),
            samples,
            ..SearchOptions::default()
        },
    )
}

struct DrawOutcome {
    summary: DrawSummary,
    slice: BTreeMap<Option<i64>, FailureTally>,
    found: Option<(AdaptedBasisSample, Vec<i64>)>,
}

pub fn two_generator_search_with(alg: &Algebra, opts: &SearchOptions) -> Result<GradationReport> {
    let n = alg.dim();
    let window = opts.kt_window.unwrap_or(2 * n as i64);
    if window < 1 {
        return Err(invalid(format!("kt window must be positive, got {window}")));
    }
    let gens = match &opts.generators {
        Some(g) => {
            if let Some(&bad) = g.iter().find(|&&i| i >= n) {
                return Err(invalid(format!(
                    "generator index {bad} out of range for dimension {n}"
                )));
            }
            g.clone()
        }
        None => infer_generators(alg)?,
    };
    if gens.is_empty() {
        return Err(invalid("the algebra has no generators outside L^2"));
    }
    let names: Vec<String> = gens.iter().map(|&i| alg.labels()[i].clone()).collect();

    let outcomes = (0..=opts.samples)
        .into_par_iter()
        .map(|draw| run_draw(alg, &gens, &names, draw, opts.seed, window))
        .collect::<Result<Vec<_>>>()?;

    if let Some((sample, k)) = outcomes.iter().find_map(|o| o.found.as_ref()) {
        return witness_report(alg, sample, k);
    }
    let generic = &outcomes[1..];
    if !generic.is_empty() && generic.iter().all(|o| o.summary.degenerate) {
        return Err(Error::DegenerateSample {
            draws: generic.len(),
        });
    }
    if outcomes.iter().all(|o| o.summary.degenerate) {
        return Err(invalid("the given generators do not generate the algebra"));
    }

    let mut tally = FailureTally::default();
    let mut slice: BTreeMap<Option<i64>, FailureTally> = BTreeMap::new();
    for o in &outcomes {
        tally.merge(&o.summary.tally);
        for (kt, t) in &o.slice {
            slice.entry(*kt).or_default().merge(t);
        }
    }
    let normalized_slice = slice
        .into_iter()
        .map(|(k_t, tally)| KtFailures {
            k_t,
            reason: tally.deepest(),
            tally,
        })
        .collect();
    let summary = SearchSummary {
        note: NO_GRADATION_NOTE.to_string(),
        generators: names,
        kt_window: window,
        samples: opts.samples,
        seed: opts.seed,
        tally,
        normalized_slice,
        draws: outcomes.into_iter().map(|o| o.summary).collect(),
    };
    Ok(GradationReport {
        verdict: Verdict::NoGradationFound { summary },
        checked_properties: Default::default(),
    })
}

fn draw_generators(alg: &Algebra, gens: &[usize], draw: usize, seed: u64) -> Vec<Vector> {
    let n = alg.dim();
    if draw == 0 {
        return gens.iter().map(|&i| alg.basis_vector(i)).collect();
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(draw as u64);
    gens.iter()
        .map(|&i| {
            let mut v = alg.basis_vector(i);
            for m in (0..n).filter(|&m| m != i) {
                v[m] = random_nonzero_rational(&mut rng, 4, 3);
            }
            v
        })
        .collect()
}

fn run_draw(
    alg: &Algebra,
    gens: &[usize],
    names: &[String],
    draw: usize,
    seed: u64,
    window: i64,
) -> Result<DrawOutcome> {
    let kind = if draw == 0 { "unperturbed" } else { "generic" }.to_string();
    let generators = draw_generators(alg, gens, draw, seed);
    let Some(sample) = adapted_basis(alg, &generators, names)? else {
        return Ok(DrawOutcome {
            summary: DrawSummary {
                index: draw,
                kind,
                degenerate: true,
                monomial: false,
                degrees: Vec::new(),
                tally: FailureTally::default(),
            },
            slice: BTreeMap::new(),
            found: None,
        });
    };
    let transformed = alg.change_of_basis(&sample.matrix()?)?;
    let mut constraints = BTreeSet::new();
    for (&(a, b), v) in transformed.products() {
        let sum = sample.degrees[a].plus(&sample.degrees[b]);
        for k in v.support() {
            let diff: Vec<i64> = sum
                .coefficients
                .iter()
                .zip(&sample.degrees[k].coefficients)
                .map(|(x, y)| x - y)
                .collect();
            if diff.iter().any(|&c| c != 0) {
                constraints.insert(diff);
            }
        }
    }
    let mut e = Enumerator::new(&sample.degrees, constraints.into_iter().collect(), window);
    e.run(0);
    let summary = DrawSummary {
        index: draw,
        kind,
        degenerate: false,
        monomial: sample.is_monomial(),
        degrees: sample
            .labels
            .iter()
            .cloned()
            .zip(sample.degrees.iter().map(ToString::to_string))
            .collect(),
        tally: e.tally,
    };
    let (slice, found) = (e.slice, e.found);
    Ok(DrawOutcome {
        summary,
        slice,
        found: found.map(|k| (sample, k)),
    })
}

fn witness_report(
    alg: &Algebra,
    sample: &AdaptedBasisSample,
    k: &[i64],
) -> Result<GradationReport> {
    let degrees: Vec<i64> = sample.degrees.iter().map(|d| d.eval(k)).collect();
    if sample.is_monomial() {
        let mut original = vec![0; alg.dim()];
        for (v, &d) in sample.basis.iter().zip(&degrees) {
            let idx = v.support().next().expect("basis vectors are nonzero");
            original[idx] = d;
        }
        let w = DegreeAssignment::for_algebra(alg, original)?;
        let report = verify_gradation(alg, &w)?;
        if !report.is_maximum_length() {
            return Err(invalid(format!(
                "internal: search witness failed re-verification: {report:?}"
            )));
        }
        return Ok(report);
    }
    let transformed = alg
        .change_of_basis(&sample.matrix()?)?
        .with_labels(sample.labels.clone())?;
    let w = DegreeAssignment::for_algebra(&transformed, degrees)?;
    let report = verify_gradation(&transformed, &w)?;
    match report.verdict {
        Verdict::MaximumLength { witness, .. } => Ok(GradationReport {
            verdict: Verdict::MaximumLength {
                witness,
                basis: Some(AdaptedBasis::from_vectors(
                    sample.labels.clone(),
                    &sample.basis,
                )),
            },
            checked_properties: report.checked_properties,
        }),
        _ => Err(invalid(format!(
            "internal: search witness failed re-verification: {report:?}"
        ))),
    }
}

/// Depth-first enumeration of generator degrees. Parameter `t` ranges over
/// `1..=W, 0` for `t = 0` (the sign of the first degree is fixed by
/// negation) and over `-W..=W` otherwise. A word is placed as soon as the
/// last generator it contains has a degree; a repeated degree prunes the
/// whole subtree as a collision, and every pruned leaf is still counted.
struct Enumerator<'a> {
    n: usize,
    g: usize,
    window: i64,
    degrees: &'a [SymbolicDegree],
    by_depth: Vec<Vec<usize>>,
    constraints: Vec<Vec<i64>>,
    k: Vec<i64>,
    used: BTreeSet<i64>,
    tally: FailureTally,
    slice: BTreeMap<Option<i64>, FailureTally>,
    found: Option<Vec<i64>>,
}

impl<'a> Enumerator<'a> {
    fn new(degrees: &'a [SymbolicDegree], constraints: Vec<Vec<i64>>, window: i64) -> Self {
        let g = degrees[0].coefficients.len();
        let mut by_depth = vec![Vec::new(); g];
        for (i, d) in degrees.iter().enumerate() {
            by_depth[d.last_generator()].push(i);
        }
        Enumerator {
            n: degrees.len(),
            g,
            window,
            degrees,
            by_depth,
            constraints,
            k: vec![0; g],
            used: BTreeSet::new(),
            tally: FailureTally::default(),
            slice: BTreeMap::new(),
            found: None,
        }
    }

    fn values(&self, t: usize) -> Vec<i64> {
        if t == 0 {
            (1..=self.window).chain(std::iter::once(0)).collect()
        } else {
            (-self.window..=self.window).collect()
        }
    }

    /// Leaves below a node at depth `t`.
    fn leaves_below(&self, t: usize) -> u64 {
        (2 * self.window as u64 + 1).pow((self.g - 1 - t) as u32)
    }

    fn record(&mut self, t: usize, kind: FailureKind) {
        let count = self.leaves_below(t);
        self.tally.add(kind, count);
        if self.k[0] != 1 {
            return;
        }
        if self.g == 1 {
            self.slice.entry(None).or_default().add(kind, count);
        } else if t >= 1 {
            self.slice
                .entry(Some(self.k[1]))
                .or_default()
                .add(kind, count);
        } else {
            let each = self.leaves_below(1);
            for kt in -self.window..=self.window {
                self.slice.entry(Some(kt)).or_default().add(kind, each);
            }
        }
    }

    /// Returns true once a witness has been found.
    fn run(&mut self, t: usize) -> bool {
        for value in self.values(t) {
            self.k[t] = value;
            let mut inserted = Vec::new();
            let mut collision = false;
            for &i in &self.by_depth[t] {
                let d = self.degrees[i].eval(&self.k);
                if self.used.insert(d) {
                    inserted.push(d);
                } else {
                    collision = true;
                    break;
                }
            }
            let done = if collision {
                self.record(t, FailureKind::Collision);
                false
            } else if t + 1 < self.g {
                self.run(t + 1)
            } else {
                self.leaf()
            };
            for d in inserted {
                self.used.remove(&d);
            }
            if done {
                return true;
            }
        }
        false
    }

    fn leaf(&mut self) -> bool {
        let t = self.g - 1;
        let lo = *self.used.first().expect("at least one word");
        let hi = *self.used.last().expect("at least one word");
        if (hi - lo + 1) as usize != self.n {
            self.record(t, FailureKind::Disconnected);
            return false;
        }
        let k = &self.k;
        if self
            .constraints
            .iter()
            .any(|c| c.iter().zip(k).map(|(a, b)| a * b).sum::<i64>() != 0)
        {
            self.record(t, FailureKind::Closure);
            return false;
        }
        self.found = Some(self.k.clone());
        true
    }
}
