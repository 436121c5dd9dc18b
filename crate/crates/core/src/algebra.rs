//! Finite-dimensional algebras given by structure constants.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::error::{invalid, Result};
use crate::linalg::{Matrix, Scalar, Subspace, Vector};

/// An algebra on the basis `e_0, ..., e_{n-1}` with sparse products
/// `[e_i, e_j]`. Missing entries are zero. No symmetry is assumed.
#[derive(Clone, PartialEq, Eq)]
pub struct Algebra {
    labels: Vec<String>,
    table: BTreeMap<(usize, usize), Vector>,
}

impl Algebra {
    /// Zero multiplication on the given basis labels.
    pub fn new(labels: Vec<String>) -> Result<Self> {
        if labels.is_empty() {
            return Err(invalid("algebra dimension must be positive"));
        }
        let mut seen = std::collections::HashSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(invalid(format!("duplicate basis label {l:?}")));
            }
        }
        Ok(Algebra {
            labels,
            table: BTreeMap::new(),
        })
    }

    pub fn abelian(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("e{i}")).collect())
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn basis_vector(&self, i: usize) -> Vector {
        Vector::unit(self.dim(), i)
    }

    /// Nonzero products, keyed by ordered basis pair.
    pub fn products(&self) -> impl Iterator<Item = (&(usize, usize), &Vector)> {
        self.table.iter()
    }

    pub fn product(&self, i: usize, j: usize) -> Option<&Vector> {
        self.table.get(&(i, j))
    }

    /// `[e_i, e_j] += v`. Entries that cancel to zero are dropped.
    pub fn add_product(&mut self, i: usize, j: usize, v: &Vector) -> Result<()> {
        let n = self.dim();
        if i >= n || j >= n || v.len() != n {
            return Err(invalid(format!(
                "product [{i},{j}] out of range for dimension {n}"
            )));
        }
        let entry = self.table.entry((i, j)).or_insert_with(|| Vector::zeros(n));
        entry.add_scaled(&Scalar::from_integer(1.into()), v);
        if entry.is_zero() {
            self.table.remove(&(i, j));
        }
        Ok(())
    }

    /// `[e_i, e_j] += c * e_k`
    pub fn add_term(&mut self, i: usize, j: usize, c: Scalar, k: usize) -> Result<()> {
        let n = self.dim();
        if k >= n {
            return Err(invalid(format!(
                "basis index {k} out of range for dimension {n}"
            )));
        }
        let mut v = Vector::zeros(n);
        v[k] = c;
        self.add_product(i, j, &v)
    }

    /// Same table under new basis labels.
    pub fn with_labels(self, labels: Vec<String>) -> Result<Algebra> {
        if labels.len() != self.dim() {
            return Err(invalid(format!(
                "expected {} labels, got {}",
                self.dim(),
                labels.len()
            )));
        }
        let fresh = Algebra::new(labels)?;
        Ok(Algebra {
            labels: fresh.labels,
            table: self.table,
        })
    }

    pub fn set_product(&mut self, i: usize, j: usize, v: Vector) -> Result<()> {
        self.table.remove(&(i, j));
        self.add_product(i, j, &v)
    }

    fn check_len(&self, v: &Vector) -> Result<()> {
        if v.len() != self.dim() {
            return Err(invalid(format!(
                "vector of length {} in an algebra of dimension {}",
                v.len(),
                self.dim()
            )));
        }
        Ok(())
    }

    /// Bilinear product `[x, y]`.
    pub fn bracket(&self, x: &Vector, y: &Vector) -> Result<Vector> {
        self.check_len(x)?;
        self.check_len(y)?;
        Ok(self.bracket_unchecked(x, y))
    }

    pub(crate) fn bracket_unchecked(&self, x: &Vector, y: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim());
        for (&(i, j), v) in &self.table {
            if x[i].is_zero() || y[j].is_zero() {
                continue;
            }
            out.add_scaled(&(&x[i] * &y[j]), v);
        }
        out
    }

    /// `[e_i, y]`
    fn bracket_basis_left(&self, i: usize, y: &Vector) -> Vector {
        let mut out = Vector::zeros(self.dim());
        for j in y.support() {
            if let Some(v) = self.table.get(&(i, j)) {
                out.add_scaled(&y[j], v);
            }
        }
        out
    }

    /// `[x, e_k]`
    fn bracket_basis_right(&self, x: &Vector, k: usize) -> Vector {
        let mut out = Vector::zeros(self.dim());
        for i in x.support() {
            if let Some(v) = self.table.get(&(i, k)) {
                out.add_scaled(&x[i], v);
            }
        }
        out
    }

    /// Evaluates `[e_i,[e_j,e_k]] - [[e_i,e_j],e_k] + [[e_i,e_k],e_j]` on every
    /// basis triple. By trilinearity an empty report means the algebra is a
    /// (right) Leibniz algebra.
    pub fn check_leibniz(&self) -> LeibnizReport {
        let n = self.dim();
        let zero = Vector::zeros(n);
        let mut violations = Vec::new();
        for i in 0..n {
            for j in 0..n {
                let ij = self.table.get(&(i, j)).unwrap_or(&zero);
                for k in 0..n {
                    let jk = self.table.get(&(j, k)).unwrap_or(&zero);
                    let ik = self.table.get(&(i, k)).unwrap_or(&zero);
                    let mut defect = self.bracket_basis_left(i, jk);
                    defect = defect.minus(&self.bracket_basis_right(ij, k));
                    defect = defect.plus(&self.bracket_basis_right(ik, j));
                    if !defect.is_zero() {
                        violations.push(LeibnizViolation { i, j, k, defect });
                    }
                }
            }
        }
        LeibnizReport { violations }
    }

    /// Lie iff every `[e_i, e_i]` vanishes and the table is antisymmetric.
    pub fn is_lie(&self) -> bool {
        let n = self.dim();
        for (&(i, j), v) in &self.table {
            if i == j {
                return false;
            }
            match self.table.get(&(j, i)) {
                Some(w) if w.plus(v).is_zero() => {}
                _ => return false,
            }
        }
        debug_assert!(self.table.keys().all(|&(i, j)| i < n && j < n));
        true
    }

    /// Two-sided ideal generated by all squares `[x, x]`.
    ///
    /// Squares span the same space as `[e_i, e_i]` together with
    /// `[e_i, e_j] + [e_j, e_i]`; the span is then closed under brackets with
    /// basis elements on both sides.
    pub fn square_ideal(&self) -> Subspace {
        let n = self.dim();
        let mut ideal = Subspace::zero(n);
        let mut queue = Vec::new();
        for i in 0..n {
            for j in i..n {
                let mut v = self
                    .table
                    .get(&(i, j))
                    .cloned()
                    .unwrap_or_else(|| Vector::zeros(n));
                if i != j {
                    if let Some(w) = self.table.get(&(j, i)) {
                        v = v.plus(w);
                    }
                }
                if ideal.insert(v.clone()) {
                    queue.push(v);
                }
            }
        }
        while let Some(v) = queue.pop() {
            for k in 0..n {
                for w in [
                    self.bracket_basis_right(&v, k),
                    self.bracket_basis_left(k, &v),
                ] {
                    if ideal.insert(w.clone()) {
                        queue.push(w);
                    }
                }
            }
        }
        ideal
    }

    /// Re-expresses the algebra in a new basis. Row `k` of `m` holds the
    /// coordinates of the `k`-th new basis vector in the current basis. Labels
    /// are kept as they are.
    pub fn change_of_basis(&self, m: &Matrix) -> Result<Algebra> {
        let n = self.dim();
        if m.rows() != n || m.cols() != n {
            return Err(invalid(format!(
                "change of basis must be {n}x{n}, got {}x{}",
                m.rows(),
                m.cols()
            )));
        }
        let inv = m
            .inverse()
            .ok_or_else(|| invalid("change-of-basis matrix is singular"))?;
        // old coordinates v -> new coordinates c with m^T c = v, i.e. c = inv^T v
        let to_new = inv.transpose();
        let new_basis = m.row_vectors();
        let mut out = Algebra {
            labels: self.labels.clone(),
            table: BTreeMap::new(),
        };
        for (a, u) in new_basis.iter().enumerate() {
            for (b, w) in new_basis.iter().enumerate() {
                let prod = self.bracket_unchecked(u, w);
                if prod.is_zero() {
                    continue;
                }
                out.table.insert((a, b), to_new.mul_vec(&prod)?);
            }
        }
        Ok(out)
    }
}

impl std::fmt::Debug for Algebra {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "Algebra(dim {}) {{", self.dim())?;
        for (&(i, j), v) in &self.table {
            let terms: Vec<String> = v
                .support()
                .map(|k| format!("({}){}", v[k], self.labels[k]))
                .collect();
            writeln!(
                f,
                "  [{}, {}] = {}",
                self.labels[i],
                self.labels[j],
                terms.join(" + ")
            )?;
        }
        f.write_str("}")
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LeibnizViolation {
    pub i: usize,
    pub j: usize,
    pub k: usize,
    /// `[e_i,[e_j,e_k]] - [[e_i,e_j],e_k] + [[e_i,e_k],e_j]`
    pub defect: Vector,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LeibnizReport {
    pub violations: Vec<LeibnizViolation>,
}

impl LeibnizReport {
    pub fn is_leibniz(&self) -> bool {
        self.violations.is_empty()
    }

    /// Human-readable description of the first failing triple.
    pub fn describe_first(&self, alg: &Algebra) -> Option<String> {
        let v = self.violations.first()?;
        let l = alg.labels();
        let terms: Vec<String> = v
            .defect
            .support()
            .map(|k| format!("({}){}", v.defect[k], l[k]))
            .collect();
        Some(format!(
            "x={}, y={}, z={}: [x,[y,z]] - [[x,y],z] + [[x,z],y] = {}",
            l[v.i],
            l[v.j],
            l[v.k],
            terms.join(" + ")
        ))
    }
}
