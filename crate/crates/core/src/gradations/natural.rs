use std::collections::HashSet;

use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{invalid, Result};
use crate::invariants::{
    characteristic_sequence, lower_central_series, CharacteristicSequence, DEFAULT_SAMPLES,
};
use crate::linalg::{Matrix, Subspace, Vector};

use super::DegreeAssignment;

/// `gr L = ⊕ L^i / L^{i+1}` realised on chosen complements.
#[derive(Debug, Clone)]
pub struct NaturalGradation {
    /// Representatives of `L^i / L^{i+1}`, for `i = 1, 2, ...`.
    pub components: Vec<Vec<Vector>>,
    /// Structure constants of `gr L` in the basis of all representatives.
    pub graded_algebra: Algebra,
    /// Component index of each basis vector of `graded_algebra`.
    pub degrees: DegreeAssignment,
}

impl NaturalGradation {
    pub fn component_dims(&self) -> Vec<usize> {
        self.components.iter().map(Vec::len).collect()
    }

    /// Representatives stacked in degree order (rows of the basis change).
    pub fn adapted_basis(&self) -> Vec<Vector> {
        self.components.iter().flatten().cloned().collect()
    }
}

fn unit_index(v: &Vector) -> Option<usize> {
    let mut support = v.support();
    let k = support.next()?;
    (support.next().is_none() && v[k].is_one()).then_some(k)
}

/// Builds `gr L`. Complements are taken greedily from the echelon rows of
/// `L^i`, so the earliest pivot columns win.
pub fn natural_gradation(alg: &Algebra) -> Result<NaturalGradation> {
    let n = alg.dim();
    let series = lower_central_series(alg)?;
    let mut components = Vec::new();
    for w in series.terms.windows(2) {
        let mut span: Subspace = w[1].clone();
        let reps: Vec<Vector> = w[0]
            .basis()
            .iter()
            .filter(|r| span.insert((*r).clone()))
            .cloned()
            .collect();
        components.push(reps);
    }

    let mut basis = Vec::with_capacity(n);
    let mut degree = Vec::with_capacity(n);
    let mut labels = Vec::with_capacity(n);
    let mut used: HashSet<String> = HashSet::new();
    for (c, reps) in components.iter().enumerate() {
        for (k, r) in reps.iter().enumerate() {
            basis.push(r.clone());
            degree.push(c as i64 + 1);
            let mut label = match unit_index(r) {
                Some(i) => alg.labels()[i].clone(),
                None => format!("g{}.{}", c + 1, k + 1),
            };
            while used.contains(&label) {
                label.push('\'');
            }
            used.insert(label.clone());
            labels.push(label);
        }
    }

    let m = Matrix::from_rows(&basis)?;
    let to_new = m
        .inverse()
        .ok_or_else(|| invalid("complements do not form a basis"))?
        .transpose();
    let mut graded = Algebra::new(labels.clone())?;
    for (a, u) in basis.iter().enumerate() {
        for (b, v) in basis.iter().enumerate() {
            let prod = alg.bracket_unchecked(u, v);
            if prod.is_zero() {
                continue;
            }
            let coords = to_new.mul_vec(&prod)?;
            let target = degree[a] + degree[b];
            let mut projected = Vector::zeros(n);
            for k in coords.support() {
                if degree[k] < target {
                    return Err(invalid(format!(
                        "[{}, {}] leaves the filtration: component along {} of degree {}",
                        labels[a], labels[b], labels[k], degree[k]
                    )));
                }
                if degree[k] == target {
                    projected[k] = coords[k].clone();
                }
            }
            if !projected.iter().all(Zero::is_zero) {
                graded.add_product(a, b, &projected)?;
            }
        }
    }
    let degrees = DegreeAssignment::new(labels, degree)?;
    Ok(NaturalGradation {
        components,
        graded_algebra: graded,
        degrees,
    })
}

/// Invariants that agree on isomorphic algebras.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Fingerprint {
    pub dim: usize,
    pub series_dims: Vec<usize>,
    pub characteristic_sequence: CharacteristicSequence,
    pub is_lie: bool,
    pub component_dims: Vec<usize>,
    pub square_ideal_dim: usize,
}

pub fn graded_fingerprint(alg: &Algebra) -> Result<Fingerprint> {
    Ok(Fingerprint {
        dim: alg.dim(),
        series_dims: lower_central_series(alg)?.dims(),
        characteristic_sequence: characteristic_sequence(alg, DEFAULT_SAMPLES)?,
        is_lie: alg.is_lie(),
        component_dims: natural_gradation(alg)?.component_dims(),
        square_ideal_dim: alg.square_ideal().dim(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::catalog::{make, Family, FamilySpec};
    use crate::gradations::verify_gradation;
    use crate::linalg::int;

    #[test]
    fn component_dims_of_m1_and_m3() {
        let m1 = make(&FamilySpec::m(Family::M1, 8, 4)).unwrap();
        assert_eq!(
            natural_gradation(&m1).unwrap().component_dims(),
            vec![3, 3, 1, 1]
        );
        let m3 = make(&FamilySpec::m(Family::M3, 9, 5)).unwrap();
        assert_eq!(
            natural_gradation(&m3).unwrap().component_dims(),
            vec![4, 3, 1, 1]
        );
        let ab = Algebra::abelian(4).unwrap();
        assert_eq!(natural_gradation(&ab).unwrap().component_dims(), vec![4]);
    }

    #[test]
    fn graded_algebra_is_closed_for_component_degrees() {
        for spec in [
            FamilySpec::m(Family::M2, 8, 4),
            FamilySpec::lie(Family::TauNp2, 13, 4, vec![3, 5]),
            FamilySpec::m(Family::M5, 10, 4),
        ] {
            let g = natural_gradation(&make(&spec).unwrap()).unwrap();
            let r = verify_gradation(&g.graded_algebra, &g.degrees).unwrap();
            assert!(r.checked_properties.closure, "{spec}");
        }
    }

    #[test]
    fn unit_representatives_keep_their_labels() {
        let m1 = make(&FamilySpec::m(Family::M1, 8, 4)).unwrap();
        let g = natural_gradation(&m1).unwrap();
        let gr = &g.graded_algebra;
        assert_eq!(
            gr.labels(),
            ["e1", "f1", "f2", "e2", "f3", "f4", "e3", "e4"]
        );
        // same table once products are read through the labels
        type Row = (String, String, Vec<(String, String)>);
        let by_label = |a: &Algebra| -> Vec<Row> {
            let mut out: Vec<_> = a
                .products()
                .map(|(&(i, j), v)| {
                    let mut terms: Vec<_> = v
                        .support()
                        .map(|k| (a.labels()[k].clone(), v[k].to_string()))
                        .collect();
                    terms.sort();
                    (a.labels()[i].clone(), a.labels()[j].clone(), terms)
                })
                .collect();
            out.sort();
            out
        };
        assert_eq!(by_label(gr), by_label(&m1));
        assert_eq!(g.degrees.degrees(), &[1, 1, 1, 2, 2, 2, 3, 4]);
    }

    #[test]
    fn non_graded_algebra_loses_its_tail() {
        // [e1,e1] = e2 + e3, [e2,e1] = e3: the e3 part of [e1,e1] sits in
        // degree 3 and is dropped by the projection.
        let mut a = Algebra::abelian(3).unwrap();
        a.add_term(0, 0, int(1), 1).unwrap();
        a.add_term(0, 0, int(1), 2).unwrap();
        a.add_term(1, 0, int(1), 2).unwrap();
        let g = natural_gradation(&a).unwrap();
        assert_eq!(g.component_dims(), vec![1, 1, 1]);
        let gr = &g.graded_algebra;
        assert_eq!(
            gr.product(0, 0).unwrap().support().collect::<Vec<_>>(),
            vec![1]
        );
    }

    #[test]
    fn fingerprints() {
        let m1 = make(&FamilySpec::m(Family::M1, 8, 4)).unwrap();
        let gr = natural_gradation(&m1).unwrap().graded_algebra;
        assert_eq!(
            graded_fingerprint(&gr).unwrap(),
            graded_fingerprint(&m1).unwrap()
        );
        assert_ne!(
            graded_fingerprint(&Algebra::abelian(8).unwrap()).unwrap(),
            graded_fingerprint(&m1).unwrap()
        );
        let l = make(&FamilySpec::lie(Family::L, 12, 4, vec![3, 5, 7])).unwrap();
        let q = make(&FamilySpec::lie(Family::Q, 15, 4, vec![3, 5, 7])).unwrap();
        assert_ne!(
            graded_fingerprint(&l).unwrap(),
            graded_fingerprint(&q).unwrap()
        );
    }
}
