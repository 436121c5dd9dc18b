use crate::algebra::Algebra;
use crate::error::{invalid, Error, Result};

use super::{
    verify_gradation, CheckedProperties, DegreeAssignment, FailureKind, FailureTally,
    GradationReport, KtFailures, SearchSummary, Verdict,
};

/// Largest dimension accepted by [`diagonal_search`].
pub const DIAGONAL_MAX_DIM: usize = 8;

/// Exhaustive search for gradations of maximum length that are diagonal in
/// the given basis, with all degrees inside `[-window, window]`.
///
/// Such a gradation uses every degree of an interval of length `n` exactly
/// once, so the search walks the interval starts (by distance from zero,
/// non-negative first) and the bijections onto each interval, pruning on
/// closure as soon as a product has all three of its degrees fixed.
pub fn diagonal_search(alg: &Algebra, window: i64) -> Result<GradationReport> {
    let n = alg.dim();
    if n > DIAGONAL_MAX_DIM {
        return Err(Error::ComplexityGuard(format!(
            "diagonal search enumerates n! assignments and is limited to dimension {DIAGONAL_MAX_DIM}, got {n}"
        )));
    }
    if window < 0 {
        return Err(invalid(format!(
            "window must be non-negative, got {window}"
        )));
    }
    // checks[i]: (a, b, k) with max(a, b, k) = i, requiring d_k = d_a + d_b
    let mut checks: Vec<Vec<(usize, usize, usize)>> = vec![Vec::new(); n];
    for (&(a, b), v) in alg.products() {
        for k in v.support() {
            checks[a.max(b).max(k)].push((a, b, k));
        }
    }
    let lo = -window;
    let hi_start = window - n as i64 + 1;
    let mut starts: Vec<i64> = (lo..=hi_start).collect();
    starts.sort_by_key(|s| (s.abs(), *s < 0));

    let mut search = Bijections {
        n,
        checks: &checks,
        degrees: vec![0; n],
        taken: vec![false; n],
        start: 0,
        pruned: 0,
    };
    for start in starts {
        search.start = start;
        if search.run(0) {
            let w = DegreeAssignment::for_algebra(alg, search.degrees.clone())?;
            let report = verify_gradation(alg, &w)?;
            if !report.is_maximum_length() {
                return Err(invalid(format!(
                    "internal: diagonal witness failed re-verification: {report:?}"
                )));
            }
            return Ok(report);
        }
    }
    let mut tally = FailureTally::default();
    tally.add(FailureKind::Closure, search.pruned);
    let summary = SearchSummary {
        note: format!(
            "no gradation of maximum length is diagonal in the given basis with degrees in [{lo}, {window}]"
        ),
        generators: Vec::new(),
        kt_window: window,
        samples: 0,
        seed: 0,
        tally,
        normalized_slice: Vec::<KtFailures>::new(),
        draws: Vec::new(),
    };
    Ok(GradationReport {
        verdict: Verdict::NoGradationFound { summary },
        checked_properties: CheckedProperties::default(),
    })
}

struct Bijections<'a> {
    n: usize,
    checks: &'a [Vec<(usize, usize, usize)>],
    degrees: Vec<i64>,
    taken: Vec<bool>,
    start: i64,
    pruned: u64,
}

impl Bijections<'_> {
    fn run(&mut self, i: usize) -> bool {
        if i == self.n {
            return true;
        }
        for slot in 0..self.n {
            if self.taken[slot] {
                continue;
            }
            self.degrees[i] = self.start + slot as i64;
            let d = &self.degrees;
            if self.checks[i].iter().any(|&(a, b, k)| d[k] != d[a] + d[b]) {
                self.pruned += 1;
                continue;
            }
            self.taken[slot] = true;
            let found = self.run(i + 1);
            self.taken[slot] = false;
            if found {
                return true;
            }
        }
        false
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{chain, make, Family, FamilySpec};
    use crate::gradations::two_generator_search;

    #[test]
    fn chain_gets_consecutive_degrees() {
        let r = diagonal_search(&chain(4).unwrap(), 8).unwrap();
        assert_eq!(r.witness().unwrap().degrees(), &[1, 2, 3, 4]);
    }

    #[test]
    fn abelian_gets_any_interval() {
        let r = diagonal_search(&Algebra::abelian(3).unwrap(), 6).unwrap();
        assert_eq!(r.witness().unwrap().degrees(), &[0, 1, 2]);
    }

    #[test]
    fn smallest_m3_agrees_with_the_generator_search() {
        let a = make(&FamilySpec::m(Family::M3, 5, 1)).unwrap();
        let diagonal = diagonal_search(&a, 10).unwrap();
        let generic = two_generator_search(&a, 10, 3).unwrap();
        assert_eq!(diagonal.verdict_name(), "NoGradationFound");
        assert_eq!(generic.verdict_name(), "NoGradationFound");
    }

    #[test]
    fn refuses_large_dimensions() {
        let a = Algebra::abelian(9).unwrap();
        assert!(matches!(
            diagonal_search(&a, 20),
            Err(Error::ComplexityGuard(_))
        ));
    }

    #[test]
    fn window_too_small_finds_nothing() {
        let r = diagonal_search(&chain(4).unwrap(), 1).unwrap();
        assert_eq!(r.verdict_name(), "NoGradationFound");
    }
}
