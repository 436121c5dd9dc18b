//! Constructors for the p-filiform families and their known maximum-length
//! gradations.
//!
//! Lie families (`L`, `Q`, `TAU_NP1`, `TAU_NP2`) use the basis
//! `x_0, ..., x_{n-p}, y_1, ..., y_{p-1}` and are completed antisymmetrically.
//! `M1`–`M3` use `e_1, ..., e_{n-p}, f_1, ..., f_p`; `M4`/`M5` use
//! `x_1, ..., x_{n-p}, y_1, ..., y_{p/2}, z_1, ..., z_{p/2}`.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::Algebra;
use crate::error::{invalid, Result};
use crate::gradations::DegreeAssignment;
use crate::linalg::{frac, int, Scalar, Vector};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Family {
    L,
    Q,
    #[serde(rename = "TAU_NP1")]
    TauNp1,
    #[serde(rename = "TAU_NP2")]
    TauNp2,
    M1,
    M2,
    M3,
    M4,
    M5,
}

impl Family {
    pub const ALL: [Family; 9] = [
        Family::L,
        Family::Q,
        Family::TauNp1,
        Family::TauNp2,
        Family::M1,
        Family::M2,
        Family::M3,
        Family::M4,
        Family::M5,
    ];

    pub fn is_lie(self) -> bool {
        matches!(
            self,
            Family::L | Family::Q | Family::TauNp1 | Family::TauNp2
        )
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::L => "L",
            Family::Q => "Q",
            Family::TauNp1 => "TAU_NP1",
            Family::TauNp2 => "TAU_NP2",
            Family::M1 => "M1",
            Family::M2 => "M2",
            Family::M3 => "M3",
            Family::M4 => "M4",
            Family::M5 => "M5",
        }
    }

    pub fn parse(name: &str) -> Result<Family> {
        Family::ALL
            .into_iter()
            .find(|f| f.name().eq_ignore_ascii_case(name))
            .ok_or_else(|| invalid(format!("unknown family {name:?}")))
    }

    /// Parameter constraints, one line per family.
    pub fn hypotheses(self) -> &'static str {
        match self {
            Family::L => "p > 1, n >= max(3p-1, p+8), 3 <= r_1 < ... < r_{p-1} <= n-p, all r odd",
            Family::Q => "as L, plus n-p odd and r_{p-1} <= n-p-2",
            Family::TauNp1 => "as L with r_{p-1} fixed to n-p-1 (so n-p even); give r_1..r_{p-2}",
            Family::TauNp2 => "as L with r_{p-1} fixed to n-p-2 (so n-p odd); give r_1..r_{p-2}",
            Family::M1 | Family::M2 => "p even, p >= 2, n-p >= 4",
            Family::M3 => "p odd, n-p >= 4",
            Family::M4 => {
                "p even, p >= 4, n-p >= 4, alpha in {0,1}; alpha = 1 needs n even and (n-p) | n"
            }
            Family::M5 => "p even, p >= 4, n-p >= 4",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parameters selecting one member of a family.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FamilySpec {
    pub family: Family,
    pub n: usize,
    pub p: usize,
    #[serde(default)]
    pub r: Vec<usize>,
    #[serde(default)]
    pub alpha: Option<u8>,
}

impl FamilySpec {
    pub fn lie(family: Family, n: usize, p: usize, r: Vec<usize>) -> Self {
        FamilySpec {
            family,
            n,
            p,
            r,
            alpha: None,
        }
    }

    pub fn m(family: Family, n: usize, p: usize) -> Self {
        FamilySpec {
            family,
            n,
            p,
            r: Vec::new(),
            alpha: None,
        }
    }

    pub fn m4(n: usize, p: usize, alpha: u8) -> Self {
        FamilySpec {
            family: Family::M4,
            n,
            p,
            r: Vec::new(),
            alpha: Some(alpha),
        }
    }

    /// The full list `r_1, ..., r_{p-1}`; for the τ families the fixed last
    /// parameter is appended.
    pub fn full_r(&self) -> Vec<usize> {
        let mut r = self.r.clone();
        let m = self.n.saturating_sub(self.p);
        let last = match self.family {
            Family::TauNp1 => Some(m.saturating_sub(1)),
            Family::TauNp2 => Some(m.saturating_sub(2)),
            _ => None,
        };
        if let Some(last) = last {
            if r.len() + 2 == self.p {
                r.push(last);
            }
        }
        r
    }

    pub fn validate(&self) -> Result<()> {
        let (n, p) = (self.n, self.p);
        let fail = |msg: String| Err(invalid(format!("{}: {msg}", self)));
        if p >= n {
            return fail(format!("p = {p} must be smaller than n = {n}"));
        }
        if self.family != Family::M4 && self.alpha.is_some() {
            return fail("alpha applies to M4 only".into());
        }
        if !self.family.is_lie() && !self.r.is_empty() {
            return fail("r parameters apply to L, Q and the tau families only".into());
        }
        let m = n - p;
        match self.family {
            Family::L | Family::Q | Family::TauNp1 | Family::TauNp2 => {
                if p < 2 {
                    return fail("requires p > 1".into());
                }
                let bound = (3 * p - 1).max(p + 8);
                if n < bound {
                    return fail(format!("requires n >= max(3p-1, p+8) = {bound}"));
                }
                let expected_len = if matches!(self.family, Family::TauNp1 | Family::TauNp2) {
                    p - 2
                } else {
                    p - 1
                };
                let r = self.full_r();
                if self.r.len() != expected_len && !(self.r.len() == p - 1 && r.len() == p - 1) {
                    return fail(format!(
                        "expected {expected_len} r parameters, got {}",
                        self.r.len()
                    ));
                }
                if r.len() != p - 1 {
                    return fail(format!("expected {} r parameters in total", p - 1));
                }
                if let Some(&bad) = r.iter().find(|&&x| x % 2 == 0) {
                    return fail(format!("r parameters must be odd, found {bad}"));
                }
                if r[0] < 3 {
                    return fail("requires r_1 >= 3".into());
                }
                if r.windows(2).any(|w| w[0] >= w[1]) {
                    return fail("r parameters must be strictly increasing".into());
                }
                if r[p - 2] > m {
                    return fail(format!("requires r_{{p-1}} <= n-p = {m}"));
                }
                match self.family {
                    Family::Q => {
                        if m % 2 == 0 {
                            return fail("Q requires n-p odd".into());
                        }
                        if r[p - 2] > m - 2 {
                            return fail(format!("Q requires r_{{p-1}} <= n-p-2 = {}", m - 2));
                        }
                    }
                    Family::TauNp1 if r[p - 2] != m - 1 => {
                        return fail(format!("TAU_NP1 fixes r_{{p-1}} = n-p-1 = {}", m - 1));
                    }
                    Family::TauNp2 if r[p - 2] != m - 2 => {
                        return fail(format!("TAU_NP2 fixes r_{{p-1}} = n-p-2 = {}", m - 2));
                    }
                    _ => {}
                }
            }
            Family::M1 | Family::M2 => {
                if p % 2 != 0 || p < 2 {
                    return fail("requires p even and p >= 2".into());
                }
                if m < 4 {
                    return fail("requires n-p >= 4".into());
                }
            }
            Family::M3 => {
                if p % 2 != 1 {
                    return fail("requires p odd".into());
                }
                if m < 4 {
                    return fail("requires n-p >= 4".into());
                }
            }
            Family::M4 | Family::M5 => {
                if p % 2 != 0 || p < 4 {
                    return fail("requires p even and p >= 4".into());
                }
                if m < 4 {
                    return fail("requires n-p >= 4".into());
                }
                if self.family == Family::M4 {
                    match self.alpha {
                        Some(0) => {}
                        Some(1) => {
                            if n % 2 != 0 {
                                return fail("M4(1) requires n even".into());
                            }
                            if n % m != 0 {
                                return fail(format!(
                                    "M4(1) requires (n-p) | n, but {m} does not divide {n}"
                                ));
                            }
                        }
                        Some(a) => return fail(format!("alpha must be 0 or 1, got {a}")),
                        None => return fail("M4 requires alpha".into()),
                    }
                }
            }
        }
        Ok(())
    }

    /// Basis indices of the generators used by the adapted-basis search: the
    /// chain generator first, then the remaining generators of `L / L^2`.
    pub fn generator_hint(&self) -> Vec<usize> {
        let m = self.n - self.p;
        match self.family {
            Family::L | Family::Q | Family::TauNp1 | Family::TauNp2 => vec![0, 1],
            Family::M1 | Family::M2 => std::iter::once(0)
                .chain((1..=self.p / 2).map(|j| m + j - 1))
                .collect(),
            Family::M3 => std::iter::once(0)
                .chain((1..=self.p / 2 + 1).map(|j| m + j - 1))
                .collect(),
            Family::M4 | Family::M5 => std::iter::once(0)
                .chain((1..=self.p / 2).map(|j| m + j - 1))
                .collect(),
        }
    }
}

impl fmt::Display for FamilySpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}(n={}, p={}", self.family, self.n, self.p)?;
        if !self.r.is_empty() {
            let r: Vec<String> = self.r.iter().map(ToString::to_string).collect();
            write!(f, ", r=({})", r.join(","))?;
        }
        if let Some(a) = self.alpha {
            write!(f, ", alpha={a}")?;
        }
        f.write_str(")")
    }
}

fn sign(i: usize) -> i64 {
    if i.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

struct Builder {
    alg: Algebra,
    lie: bool,
}

impl Builder {
    fn new(labels: Vec<String>, lie: bool) -> Result<Self> {
        Ok(Builder {
            alg: Algebra::new(labels)?,
            lie,
        })
    }

    /// `[a, b] += sum c_k e_k`, plus `[b, a] -= ...` for Lie families.
    fn put(&mut self, a: usize, b: usize, terms: &[(Scalar, usize)]) -> Result<()> {
        let n = self.alg.dim();
        let mut v = Vector::zeros(n);
        for (c, k) in terms {
            v[*k] += c;
        }
        self.alg.add_product(a, b, &v)?;
        if self.lie {
            self.alg.add_product(b, a, &v.neg())?;
        }
        Ok(())
    }
}

/// Builds the algebra selected by `spec`; omitted products are zero.
pub fn make(spec: &FamilySpec) -> Result<Algebra> {
    spec.validate()?;
    let (n, p) = (spec.n, spec.p);
    let m = n - p;
    match spec.family {
        Family::L | Family::Q | Family::TauNp1 | Family::TauNp2 => make_lie(spec),
        Family::M1 | Family::M2 | Family::M3 => {
            let labels = (1..=m)
                .map(|i| format!("e{i}"))
                .chain((1..=p).map(|j| format!("f{j}")))
                .collect();
            let mut b = Builder::new(labels, false)?;
            let e = |i: usize| i - 1;
            let f = |j: usize| m + j - 1;
            let one = || int(1);
            for i in 1..m {
                b.put(e(i), e(1), &[(one(), e(i + 1))])?;
            }
            match spec.family {
                Family::M1 => {
                    for j in 1..=p / 2 {
                        b.put(e(1), f(j), &[(one(), f(p / 2 + j))])?;
                    }
                }
                Family::M2 => {
                    b.put(e(1), f(1), &[(one(), e(2)), (one(), f(p / 2 + 1))])?;
                    for i in 2..m {
                        b.put(e(i), f(1), &[(one(), e(i + 1))])?;
                    }
                    for j in 2..=p / 2 {
                        b.put(e(1), f(j), &[(one(), f(p / 2 + j))])?;
                    }
                }
                _ => {
                    let q = p / 2;
                    for j in 1..=q {
                        b.put(e(1), f(j), &[(one(), f(q + 1 + j))])?;
                    }
                    for i in 1..m {
                        b.put(e(i), f(q + 1), &[(one(), e(i + 1))])?;
                    }
                }
            }
            Ok(b.alg)
        }
        Family::M4 | Family::M5 => {
            let h = p / 2;
            let labels = (1..=m)
                .map(|i| format!("x{i}"))
                .chain((1..=h).map(|j| format!("y{j}")))
                .chain((1..=h).map(|j| format!("z{j}")))
                .collect();
            let mut b = Builder::new(labels, false)?;
            let x = |i: usize| i - 1;
            let y = |j: usize| m + j - 1;
            let z = |j: usize| m + h + j - 1;
            for i in 1..m {
                b.put(x(i), x(1), &[(int(1), x(i + 1))])?;
            }
            for j in 1..=h {
                b.put(x(1), y(j), &[(int(1), z(j))])?;
            }
            if spec.family == Family::M4 {
                if spec.alpha == Some(1) {
                    b.put(z(1), y(2), &[(int(1), x(m))])?;
                    b.put(z(2), y(1), &[(int(1), x(m))])?;
                }
            } else {
                b.put(y(1), y(2), &[(int(1), x(m))])?;
            }
            Ok(b.alg)
        }
    }
}

fn make_lie(spec: &FamilySpec) -> Result<Algebra> {
    let (n, p) = (spec.n, spec.p);
    let m = n - p;
    let r = spec.full_r();
    let labels = (0..=m)
        .map(|i| format!("x{i}"))
        .chain((1..p).map(|j| format!("y{j}")))
        .collect();
    let mut b = Builder::new(labels, true)?;
    let x = |i: usize| i;
    let y = |j: usize| m + j;

    for i in 1..m {
        b.put(x(0), x(i), &[(int(1), x(i + 1))])?;
    }
    let plain_y = match spec.family {
        Family::L | Family::Q => p - 1,
        _ => p - 2,
    };
    for (j, &rj) in r.iter().enumerate().take(plain_y) {
        for i in 1..=(rj - 1) / 2 {
            b.put(x(i), x(rj - i), &[(int(sign(i - 1)), y(j + 1))])?;
        }
    }
    let (n_i, p_i, m_i) = (n as i64, p as i64, m as i64);
    match spec.family {
        Family::L => {}
        Family::Q => {
            for i in 1..=(m - 1) / 2 {
                b.put(x(i), x(m - i), &[(int(sign(i - 1)), x(m))])?;
            }
        }
        Family::TauNp1 => {
            for i in 1..=(m - 2) / 2 {
                let s = int(sign(i - 1));
                b.put(x(i), x(m - 1 - i), &[(s.clone(), x(m - 1)), (s, y(p - 1))])?;
            }
            for i in 1..=(m - 2) / 2 {
                let c = frac(sign(i - 1) * (n_i - 2 * i as i64 - p_i), 2);
                b.put(x(i), x(m - i), &[(c, x(m))])?;
            }
            b.put(x(1), y(p - 1), &[(frac(p_i + 2 - n_i, 2), x(m))])?;
        }
        Family::TauNp2 => {
            for i in 1..=(m - 3) / 2 {
                let s = int(sign(i - 1));
                b.put(x(i), x(m - 2 - i), &[(s.clone(), x(m - 2)), (s, y(p - 1))])?;
            }
            for i in 1..=(m - 3) / 2 {
                let c = frac(sign(i - 1) * (m_i - 1 - 2 * i as i64), 2);
                b.put(x(i), x(m - 1 - i), &[(c, x(m - 1))])?;
            }
            for i in 2..=(m - 1) / 2 {
                let ii = i as i64;
                let c = frac(sign(i) * (ii - 1) * (m_i - 1 - ii), 2);
                b.put(x(i), x(m - i), &[(c, x(m))])?;
            }
            for i in 1..=2 {
                b.put(x(i), y(p - 1), &[(frac(p_i + 3 - n_i, 2), x(m - 2 + i))])?;
            }
        }
        _ => unreachable!(),
    }
    Ok(b.alg)
}

/// The chain algebra `[e_i, e_1] = e_{i+1}` of dimension `n` (1-filiform,
/// nilindex `n`).
pub fn chain(n: usize) -> Result<Algebra> {
    let mut a = Algebra::abelian(n)?;
    for i in 1..n {
        a.add_term(i - 1, 0, int(1), i)?;
    }
    Ok(a)
}

/// Explicit maximum-length gradation for `M4(0)`, `M4(1)` and `M5`; `None`
/// for every family that admits no gradation of maximum length.
pub fn reference_witness(spec: &FamilySpec) -> Result<Option<DegreeAssignment>> {
    spec.validate()?;
    let (n, p) = (spec.n, spec.p);
    let m = n - p;
    let h = p / 2;
    let mi = m as i64;
    let labels = make(spec)?.labels().to_vec();
    let witness = match (spec.family, spec.alpha) {
        (Family::M4, Some(0)) => {
            let mut d = vec![0i64; n];
            for i in 1..=m {
                d[i - 1] = i as i64;
            }
            for j in 1..=h {
                d[m + j - 1] = mi + 2 * j as i64 - 1;
                d[m + h + j - 1] = mi + 2 * j as i64;
            }
            Some(DegreeAssignment::new(labels, d)?)
        }
        (Family::M4, Some(1)) => Some(m4_1_witness(n, p)?),
        (Family::M5, _) => {
            let mut d = vec![0i64; n];
            for i in 1..=m {
                d[i - 1] = i as i64;
            }
            // y_1 -> -1, z_1 -> 0
            d[m] = -1;
            d[m + h] = 0;
            for k in 0..=h - 2 {
                d[m + (k + 2) - 1] = mi + 2 * k as i64 + 1;
            }
            for k in 1..h {
                d[m + h + (k + 1) - 1] = mi + 2 * k as i64;
            }
            Some(DegreeAssignment::new(labels, d)?)
        }
        _ => None,
    };
    Ok(witness)
}

/// Degree table of `M4(1)` with `k = n / (n-p)`: `x_i -> i k`, `y_1 -> 1`,
/// `z_1 -> k + 1`, `y_2 -> (n-p-1)k - 1`, `z_2 -> (n-p)k - 1`, and the
/// remaining `y`/`z` pairs interleaved in blocks of `k - 1`.
pub fn m4_1_witness(n: usize, p: usize) -> Result<DegreeAssignment> {
    let spec = FamilySpec::m4(n, p, 1);
    spec.validate()?;
    let m = n - p;
    let h = p / 2;
    let k = (n / m) as i64;
    let mi = m as i64;
    let mut y: Vec<Option<i64>> = vec![None; h + 1];
    let mut z: Vec<Option<i64>> = vec![None; h + 1];
    let place = |slot: &mut Vec<Option<i64>>, idx: i64, deg: i64| -> Result<()> {
        let i = usize::try_from(idx).ok().filter(|&i| (1..=h).contains(&i));
        match i {
            Some(i) if slot[i].is_none() => {
                slot[i] = Some(deg);
                Ok(())
            }
            _ => Err(invalid(format!(
                "M4(1) degree table does not fit n={n}, p={p} at index {idx}"
            ))),
        }
    };
    place(&mut y, 1, 1)?;
    place(&mut y, 2, (mi - 1) * k - 1)?;
    place(&mut z, 1, k + 1)?;
    place(&mut z, 2, mi * k - 1)?;
    for i in 3..=k {
        place(&mut y, i, i - 1)?;
        place(&mut z, i, k + i - 1)?;
    }
    for q in 1..=(mi - 4) / 2 {
        for i in 2..=k {
            place(&mut y, q * (k - 1) + i, 2 * q * k - 1 + i)?;
            place(&mut z, q * (k - 1) + i, (2 * q + 1) * k - 1 + i)?;
        }
    }
    let last = (mi - 2) / 2 * (k - 1);
    for i in 2..k {
        place(&mut y, last + i, (mi - 2) * k - 1 + i)?;
        place(&mut z, last + i, (mi - 1) * k - 1 + i)?;
    }
    let mut d = Vec::with_capacity(n);
    d.extend((1..=mi).map(|i| i * k));
    for slot in [&y, &z] {
        for (j, deg) in slot.iter().enumerate().skip(1) {
            d.push(deg.ok_or_else(|| {
                invalid(format!("M4(1) degree table leaves index {j} unassigned"))
            })?);
        }
    }
    DegreeAssignment::new(make(&spec)?.labels().to_vec(), d)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn deg(w: &DegreeAssignment, label: &str) -> i64 {
        w.degree_of(label).unwrap()
    }

    #[test]
    fn l_table_entries() {
        let a = make(&FamilySpec::lie(Family::L, 12, 4, vec![3, 5, 7])).unwrap();
        assert_eq!(a.dim(), 12);
        let x = |i: usize| a.basis_vector(a.index_of(&format!("x{i}")).unwrap());
        let y1 = a.basis_vector(a.index_of("y1").unwrap());
        assert_eq!(a.bracket(&x(1), &x(2)).unwrap(), y1);
        assert_eq!(a.bracket(&x(2), &x(1)).unwrap(), y1.neg());
        // [x_2, x_3] = -y_2 for r_2 = 5
        let y2 = a.basis_vector(a.index_of("y2").unwrap());
        assert_eq!(a.bracket(&x(2), &x(3)).unwrap(), y2.neg());
    }

    #[test]
    fn m4_table_entry() {
        let a = make(&FamilySpec::m4(10, 4, 0)).unwrap();
        let v = |l: &str| a.basis_vector(a.index_of(l).unwrap());
        assert_eq!(a.bracket(&v("x1"), &v("y1")).unwrap(), v("z1"));
    }

    #[test]
    fn tau_np1_fractional_coefficients() {
        let a = make(&FamilySpec::lie(Family::TauNp1, 12, 4, vec![3, 5])).unwrap();
        let v = |l: &str| a.basis_vector(a.index_of(l).unwrap());
        // (n - 2i - p)/2 at i = 1 is 3, at i = 2 it is -(2)
        assert_eq!(
            a.bracket(&v("x1"), &v("x7")).unwrap(),
            v("x8").scaled(&int(3))
        );
        assert_eq!(
            a.bracket(&v("x2"), &v("x6")).unwrap(),
            v("x8").scaled(&int(-2))
        );
        assert_eq!(
            a.bracket(&v("x1"), &v("y3")).unwrap(),
            v("x8").scaled(&int(-3))
        );
        assert_eq!(
            a.bracket(&v("x1"), &v("x6")).unwrap(),
            v("x7").plus(&v("y3"))
        );
    }

    #[test]
    fn tau_np2_fractional_coefficients() {
        let a = make(&FamilySpec::lie(Family::TauNp2, 13, 4, vec![3, 5])).unwrap();
        let v = |l: &str| a.basis_vector(a.index_of(l).unwrap());
        assert_eq!(
            a.bracket(&v("x2"), &v("x7")).unwrap(),
            v("x9").scaled(&int(3))
        );
        assert_eq!(
            a.bracket(&v("x3"), &v("x6")).unwrap(),
            v("x9").scaled(&int(-5))
        );
        assert_eq!(
            a.bracket(&v("x1"), &v("x7")).unwrap(),
            v("x8").scaled(&int(3))
        );
        assert_eq!(
            a.bracket(&v("x2"), &v("y3")).unwrap(),
            v("x9").scaled(&int(-3))
        );
    }

    #[test]
    fn rejects_invalid_parameters() {
        for spec in [
            FamilySpec::m4(12, 4, 1),
            FamilySpec::lie(Family::L, 11, 4, vec![3, 5, 7]),
            FamilySpec::lie(Family::L, 12, 4, vec![3, 4, 7]),
            FamilySpec::lie(Family::L, 12, 4, vec![3, 5, 9]),
            FamilySpec::lie(Family::Q, 12, 4, vec![3, 5, 7]),
            FamilySpec::lie(Family::TauNp1, 13, 4, vec![3, 5]),
            FamilySpec::m(Family::M1, 7, 4),
            FamilySpec::m(Family::M3, 9, 4),
            FamilySpec::m(Family::M5, 8, 2),
            FamilySpec::m(Family::M4, 10, 4),
        ] {
            let err = make(&spec).unwrap_err();
            assert!(
                matches!(err, crate::Error::InvalidInput(_)),
                "{spec}: {err}"
            );
        }
    }

    #[test]
    fn m4_1_rejection_names_the_divisibility() {
        let err = make(&FamilySpec::m4(12, 4, 1)).unwrap_err().to_string();
        assert!(err.contains("(n-p) | n"), "{err}");
    }

    #[test]
    fn m4_1_witness_at_12_6() {
        let w = m4_1_witness(12, 6).unwrap();
        for i in 1..=6 {
            assert_eq!(deg(&w, &format!("x{i}")), 2 * i as i64);
        }
        assert_eq!((deg(&w, "y1"), deg(&w, "y3"), deg(&w, "y2")), (1, 5, 9));
        assert_eq!((deg(&w, "z1"), deg(&w, "z3"), deg(&w, "z2")), (3, 7, 11));
    }

    #[test]
    fn m4_1_witness_at_16_8_covers_1_to_16() {
        let w = m4_1_witness(16, 8).unwrap();
        let mut d = w.degrees().to_vec();
        d.sort();
        assert_eq!(d, (1..=16).collect::<Vec<_>>());
    }

    #[test]
    fn m4_1_witness_rejects_12_4() {
        assert!(m4_1_witness(12, 4).is_err());
    }

    #[test]
    fn reference_witnesses() {
        let w = reference_witness(&FamilySpec::m4(10, 4, 0))
            .unwrap()
            .unwrap();
        let expect = [
            ("x1", 1),
            ("x6", 6),
            ("y1", 7),
            ("z1", 8),
            ("y2", 9),
            ("z2", 10),
        ];
        for (l, d) in expect {
            assert_eq!(deg(&w, l), d, "{l}");
        }
        let w = reference_witness(&FamilySpec::m(Family::M5, 10, 4))
            .unwrap()
            .unwrap();
        let expect = [
            ("y1", -1),
            ("z1", 0),
            ("x1", 1),
            ("x6", 6),
            ("y2", 7),
            ("z2", 8),
        ];
        for (l, d) in expect {
            assert_eq!(deg(&w, l), d, "{l}");
        }
        assert!(
            reference_witness(&FamilySpec::lie(Family::L, 12, 4, vec![3, 5, 7]))
                .unwrap()
                .is_none()
        );
        assert!(reference_witness(&FamilySpec::m(Family::M3, 9, 5))
            .unwrap()
            .is_none());
    }

    #[test]
    fn spec_json_shape() {
        let spec: FamilySpec = serde_json::from_str(
            r#"{ "family": "L", "n": 12, "p": 4, "r": [3,5,7], "alpha": null }"#,
        )
        .unwrap();
        assert_eq!(spec, FamilySpec::lie(Family::L, 12, 4, vec![3, 5, 7]));
        let tau: FamilySpec =
            serde_json::from_str(r#"{"family":"TAU_NP1","n":12,"p":4,"r":[3,5]}"#).unwrap();
        assert_eq!(tau.full_r(), vec![3, 5, 7]);
    }
}
