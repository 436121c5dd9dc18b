//! Diagonal ℤ-gradations: verification, the natural gradation, and searches
//! for gradations of maximum length.

mod diagonal;
mod natural;
mod search;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::ser::SerializeMap;
use serde::{Deserialize, Serialize, Serializer};

use crate::algebra::Algebra;
use crate::error::{invalid, Error, Result};
use crate::linalg::{format_scalar, parse_scalar, Matrix, Vector};

pub use diagonal::{diagonal_search, DIAGONAL_MAX_DIM};
pub use natural::{graded_fingerprint, natural_gradation, Fingerprint, NaturalGradation};
pub use search::{
    adapted_basis, infer_generators, two_generator_search, two_generator_search_with,
    AdaptedBasisSample, SearchOptions, SymbolicDegree, DEFAULT_SEARCH_SAMPLES, NO_GRADATION_NOTE,
};

/// Degree of every basis vector, keyed by label in basis order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DegreeAssignment {
    labels: Vec<String>,
    degrees: Vec<i64>,
}

impl DegreeAssignment {
    pub fn new(labels: Vec<String>, degrees: Vec<i64>) -> Result<Self> {
        if labels.len() != degrees.len() {
            return Err(invalid(format!(
                "{} labels but {} degrees",
                labels.len(),
                degrees.len()
            )));
        }
        Ok(DegreeAssignment { labels, degrees })
    }

    /// Degrees listed in the basis order of `alg`.
    pub fn for_algebra(alg: &Algebra, degrees: Vec<i64>) -> Result<Self> {
        Self::new(alg.labels().to_vec(), degrees)
    }

    /// Resolves a label → degree map against the basis of `alg`; every label
    /// must be known and every basis vector must receive a degree.
    pub fn from_label_map(alg: &Algebra, map: &BTreeMap<String, i64>) -> Result<Self> {
        if let Some(unknown) = map.keys().find(|l| alg.index_of(l).is_none()) {
            return Err(invalid(format!(
                "degree given for unknown basis label {unknown:?}"
            )));
        }
        let degrees = alg
            .labels()
            .iter()
            .map(|l| {
                map.get(l)
                    .copied()
                    .ok_or_else(|| invalid(format!("no degree for basis label {l:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::for_algebra(alg, degrees)
    }

    /// Parses `{ "degrees": { "label": integer, ... } }`.
    pub fn from_json(alg: &Algebra, text: &str) -> Result<Self> {
        #[derive(Deserialize)]
        #[serde(deny_unknown_fields)]
        struct Doc {
            degrees: BTreeMap<String, i64>,
        }
        let doc: Doc = serde_json::from_str(text)
            .map_err(|e| Error::Json(format!("line {}, column {}: {e}", e.line(), e.column())))?;
        Self::from_label_map(alg, &doc.degrees)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("serialization cannot fail")
    }

    pub fn len(&self) -> usize {
        self.degrees.len()
    }

    pub fn is_empty(&self) -> bool {
        self.degrees.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degree_of(&self, label: &str) -> Option<i64> {
        self.labels
            .iter()
            .position(|l| l == label)
            .map(|i| self.degrees[i])
    }

    pub fn shifted(&self, c: i64) -> Self {
        DegreeAssignment {
            labels: self.labels.clone(),
            degrees: self.degrees.iter().map(|d| d + c).collect(),
        }
    }

    pub fn negated(&self) -> Self {
        DegreeAssignment {
            labels: self.labels.clone(),
            degrees: self.degrees.iter().map(|d| -d).collect(),
        }
    }

    /// Sorted degrees with multiplicity.
    pub fn sorted_degrees(&self) -> Vec<i64> {
        let mut d = self.degrees.clone();
        d.sort_unstable();
        d
    }
}

impl Serialize for DegreeAssignment {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        struct Degrees<'a>(&'a DegreeAssignment);
        impl Serialize for Degrees<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
                let mut map = s.serialize_map(Some(self.0.len()))?;
                for (l, d) in self.0.labels.iter().zip(&self.0.degrees) {
                    map.serialize_entry(l, d)?;
                }
                map.end()
            }
        }
        let mut map = s.serialize_map(Some(1))?;
        map.serialize_entry("degrees", &Degrees(self))?;
        map.end()
    }
}

/// Why a candidate fails to be a gradation of maximum length.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum FailureKind {
    #[serde(rename = "degree collision")]
    Collision,
    #[serde(rename = "disconnected")]
    Disconnected,
    #[serde(rename = "closure")]
    Closure,
}

impl fmt::Display for FailureKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailureKind::Collision => "degree collision",
            FailureKind::Disconnected => "disconnected",
            FailureKind::Closure => "closure",
        })
    }
}

/// Outcome of each check made by [`verify_gradation`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CheckedProperties {
    /// `[V_i, V_j] ⊆ V_{i+j}` on every basis pair.
    pub closure: bool,
    /// Every degree between the smallest and largest one is used.
    pub nonempty: bool,
    /// Every used degree carries a single basis vector.
    pub dim_one: bool,
    /// No two basis vectors share a degree.
    pub distinct: bool,
    /// The degree set is an integer interval.
    pub connected: bool,
    /// The interval has as many degrees as the dimension.
    pub maximum_length: bool,
}

impl CheckedProperties {
    pub fn all(&self) -> bool {
        self.closure
            && self.nonempty
            && self.dim_one
            && self.distinct
            && self.connected
            && self.maximum_length
    }

    /// First failing property, in the order collision, disconnected, closure.
    pub fn first_failure(&self) -> Option<FailureKind> {
        if !(self.distinct && self.dim_one) {
            Some(FailureKind::Collision)
        } else if !(self.connected && self.nonempty && self.maximum_length) {
            Some(FailureKind::Disconnected)
        } else if !self.closure {
            Some(FailureKind::Closure)
        } else {
            None
        }
    }
}

/// Failure counts, one per kind.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct FailureTally {
    pub collision: u64,
    pub disconnected: u64,
    pub closure: u64,
}

impl FailureTally {
    pub fn add(&mut self, kind: FailureKind, count: u64) {
        match kind {
            FailureKind::Collision => self.collision += count,
            FailureKind::Disconnected => self.disconnected += count,
            FailureKind::Closure => self.closure += count,
        }
    }

    pub fn merge(&mut self, other: &FailureTally) {
        self.collision += other.collision;
        self.disconnected += other.disconnected;
        self.closure += other.closure;
    }

    pub fn total(&self) -> u64 {
        self.collision + self.disconnected + self.closure
    }

    pub fn get(&self, kind: FailureKind) -> u64 {
        match kind {
            FailureKind::Collision => self.collision,
            FailureKind::Disconnected => self.disconnected,
            FailureKind::Closure => self.closure,
        }
    }

    /// Latest check reached by any candidate (checks run collision,
    /// disconnected, closure). This is the obstruction that no choice of the
    /// remaining degrees gets past.
    pub fn deepest(&self) -> Option<FailureKind> {
        [
            FailureKind::Closure,
            FailureKind::Disconnected,
            FailureKind::Collision,
        ]
        .into_iter()
        .find(|k| self.get(*k) > 0)
    }
}

/// Failures at one value of the second generator degree with the first
/// generator degree fixed to 1.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct KtFailures {
    /// `None` when the algebra has a single generator.
    pub k_t: Option<i64>,
    pub reason: Option<FailureKind>,
    pub tally: FailureTally,
}

/// One adapted basis tried by the two-generator search.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DrawSummary {
    pub index: usize,
    /// `"unperturbed"` or `"generic"`.
    pub kind: String,
    pub degenerate: bool,
    pub monomial: bool,
    /// Word label → symbolic degree in the generator degrees.
    pub degrees: Vec<(String, String)>,
    pub tally: FailureTally,
}

/// What the two-generator search tried before giving up.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SearchSummary {
    pub note: String,
    pub generators: Vec<String>,
    pub kt_window: i64,
    pub samples: usize,
    pub seed: u64,
    pub tally: FailureTally,
    pub normalized_slice: Vec<KtFailures>,
    pub draws: Vec<DrawSummary>,
}

/// Basis in which a witness is diagonal, when it is not the input basis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdaptedBasis {
    pub labels: Vec<String>,
    /// Row `k`: coordinates of the `k`-th adapted vector in the input basis.
    pub rows: Vec<Vec<String>>,
}

impl AdaptedBasis {
    pub fn from_vectors(labels: Vec<String>, rows: &[Vector]) -> Self {
        let rows = rows
            .iter()
            .map(|r| r.iter().map(format_scalar).collect())
            .collect();
        AdaptedBasis { labels, rows }
    }

    pub fn matrix(&self) -> Result<Matrix> {
        let rows = self
            .rows
            .iter()
            .map(|r| {
                r.iter()
                    .map(|s| parse_scalar(s))
                    .collect::<Result<Vec<_>>>()
                    .map(Vector::from_scalars)
            })
            .collect::<Result<Vec<_>>>()?;
        Matrix::from_rows(&rows)
    }

    /// The input algebra rewritten in this basis, with the adapted labels.
    pub fn transform(&self, alg: &Algebra) -> Result<Algebra> {
        alg.change_of_basis(&self.matrix()?)?
            .with_labels(self.labels.clone())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum Verdict {
    MaximumLength {
        witness: DegreeAssignment,
        /// `None` when the witness is diagonal in the input basis.
        basis: Option<AdaptedBasis>,
    },
    NotMaximumLength {
        reason: FailureKind,
        detail: String,
    },
    NoGradationFound {
        summary: SearchSummary,
    },
}

impl<'de> Deserialize<'de> for DegreeAssignment {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        // Label order is not recoverable from a JSON object in general, so
        // reports are read back with labels sorted; callers re-resolve
        // against an algebra with `from_label_map`.
        #[derive(Deserialize)]
        struct Doc {
            degrees: BTreeMap<String, i64>,
        }
        let doc = Doc::deserialize(d)?;
        let (labels, degrees) = doc.degrees.into_iter().unzip();
        Ok(DegreeAssignment { labels, degrees })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GradationReport {
    pub verdict: Verdict,
    pub checked_properties: CheckedProperties,
}

impl GradationReport {
    pub fn is_maximum_length(&self) -> bool {
        matches!(self.verdict, Verdict::MaximumLength { .. })
    }

    pub fn witness(&self) -> Option<&DegreeAssignment> {
        match &self.verdict {
            Verdict::MaximumLength { witness, .. } => Some(witness),
            _ => None,
        }
    }

    pub fn verdict_name(&self) -> &'static str {
        match self.verdict {
            Verdict::MaximumLength { .. } => "MaximumLength",
            Verdict::NotMaximumLength { .. } => "NotMaximumLength",
            Verdict::NoGradationFound { .. } => "NoGradationFound",
        }
    }

    /// Re-runs [`verify_gradation`] on the witness, in the adapted basis if
    /// one is attached. Verdicts without a witness give `Ok(false)`.
    pub fn recheck(&self, alg: &Algebra) -> Result<bool> {
        let Verdict::MaximumLength { witness, basis } = &self.verdict else {
            return Ok(false);
        };
        let target = match basis {
            Some(b) => b.transform(alg)?,
            None => alg.clone(),
        };
        let map: BTreeMap<String, i64> = witness
            .labels()
            .iter()
            .cloned()
            .zip(witness.degrees().iter().copied())
            .collect();
        let w = DegreeAssignment::from_label_map(&target, &map)?;
        Ok(verify_gradation(&target, &w)?.is_maximum_length())
    }
}

/// Evaluates the properties of a diagonal gradation of maximum length.
fn check_properties(alg: &Algebra, d: &DegreeAssignment) -> (CheckedProperties, Option<String>) {
    let n = alg.dim();
    let degrees = d.degrees();
    let mut detail = None;

    let set: BTreeSet<i64> = degrees.iter().copied().collect();
    let distinct = set.len() == n;
    if !distinct {
        let mut first: BTreeMap<i64, usize> = BTreeMap::new();
        for (i, &g) in degrees.iter().enumerate() {
            if let Some(&j) = first.get(&g) {
                detail = Some(format!(
                    "{} and {} both have degree {g}",
                    d.labels()[j],
                    d.labels()[i]
                ));
                break;
            }
            first.insert(g, i);
        }
    }
    let (lo, hi) = (*set.first().unwrap(), *set.last().unwrap());
    let span = (hi - lo + 1) as usize;
    let connected = span == set.len();
    if !connected && detail.is_none() {
        let gap = (lo..=hi).find(|g| !set.contains(g)).unwrap();
        detail = Some(format!(
            "no basis vector of degree {gap} between {lo} and {hi}"
        ));
    }
    let maximum_length = connected && span == n;

    let mut closure = true;
    let mut closure_detail = None;
    for (&(i, j), v) in alg.products() {
        let target = degrees[i] + degrees[j];
        if let Some(k) = v.support().find(|&k| degrees[k] != target) {
            closure = false;
            closure_detail = Some(format!(
                "[{}, {}] has a component along {} of degree {} instead of {target}",
                d.labels()[i],
                d.labels()[j],
                d.labels()[k],
                degrees[k]
            ));
            break;
        }
    }
    if detail.is_none() {
        detail = closure_detail;
    }
    let props = CheckedProperties {
        closure,
        nonempty: connected,
        dim_one: distinct,
        distinct,
        connected,
        maximum_length,
    };
    (props, detail)
}

/// Checks closure, injectivity and connectedness of a degree assignment, and
/// whether the resulting interval has length `dim`.
pub fn verify_gradation(alg: &Algebra, d: &DegreeAssignment) -> Result<GradationReport> {
    if d.len() != alg.dim() {
        return Err(invalid(format!(
            "degree assignment has {} entries for dimension {}",
            d.len(),
            alg.dim()
        )));
    }
    if d.labels() != alg.labels() {
        return Err(invalid("degree assignment labels do not match the basis"));
    }
    let (checked_properties, detail) = check_properties(alg, d);
    let verdict = match checked_properties.first_failure() {
        None => Verdict::MaximumLength {
            witness: d.clone(),
            basis: None,
        },
        Some(reason) => Verdict::NotMaximumLength {
            reason,
            detail: detail.unwrap_or_default(),
        },
    };
    Ok(GradationReport {
        verdict,
        checked_properties,
    })
}
