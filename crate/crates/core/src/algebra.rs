//! Finite-dimensional graded associative algebras given by structure constants.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::basis::{Element, GradedBasis};
use crate::error::{Error, Result};
use crate::operator::{compose, LinearOperator};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GradedAlgebra {
    name: String,
    basis: Arc<GradedBasis>,
    product: BTreeMap<(usize, usize), Element>,
    unit: Option<Element>,
    delta: Option<LinearOperator>,
    pairing: Option<BTreeMap<(usize, usize), Scalar>>,
}

impl GradedAlgebra {
    /// Builds an algebra from its nonzero structure constants. Zero products are dropped.
    pub fn new(
        name: impl Into<String>,
        basis: Arc<GradedBasis>,
        product: impl IntoIterator<Item = ((usize, usize), Element)>,
    ) -> Result<Self> {
        let dim = basis.dim();
        let mut table = BTreeMap::new();
        for ((i, j), e) in product {
            for k in [i, j] {
                if k >= dim {
                    return Err(Error::IndexOutOfRange { index: k, dim });
                }
            }
            basis.check_element(&e)?;
            if !e.is_zero() {
                table.insert((i, j), e);
            }
        }
        Ok(GradedAlgebra {
            name: name.into(),
            basis,
            product: table,
            unit: None,
            delta: None,
            pairing: None,
        })
    }

    pub fn with_unit(mut self, unit: Element) -> Result<Self> {
        self.basis.check_element(&unit)?;
        self.unit = Some(unit);
        Ok(self)
    }

    pub fn with_delta(mut self, delta: LinearOperator) -> Result<Self> {
        if !crate::operator::same_basis(delta.basis(), &self.basis) {
            return Err(Error::BasisMismatch(
                "delta is defined on another basis".into(),
            ));
        }
        self.delta = Some(delta);
        Ok(self)
    }

    /// The same algebra in the basis whose `i`-th vector is `columns[i]`
    /// (in old coordinates); unit, delta and pairing are carried along.
    pub fn rebased(&self, basis: Arc<GradedBasis>, columns: &[Element]) -> Result<Self> {
        let dim = self.dim();
        if basis.dim() != dim || columns.len() != dim {
            return Err(Error::BasisMismatch(
                "change of basis of the wrong size".into(),
            ));
        }
        for (i, c) in columns.iter().enumerate() {
            self.basis.check_element(c)?;
            if self.basis.homogeneous_degree(c) != Some(basis.degree(i)) {
                return Err(Error::DegreeMismatch(format!(
                    "new basis vector `{}` has the wrong degree",
                    basis.name(i)
                )));
            }
        }
        let p: Vec<Vec<Scalar>> = (0..dim)
            .map(|r| columns.iter().map(|c| c.coeff(r)).collect())
            .collect();
        let pinv = crate::linalg::invert(&p)
            .ok_or_else(|| Error::BasisMismatch("new basis is not independent".into()))?;
        let to_new = |x: &Element| {
            Element::from_terms((0..dim).map(|r| {
                let mut s = Scalar::zero();
                for (k, c) in x.iter() {
                    s += &pinv[r][k] * c;
                }
                (r, s)
            }))
        };
        let mut prods = Vec::new();
        for a in 0..dim {
            for b in 0..dim {
                prods.push(((a, b), to_new(&self.multiply(&columns[a], &columns[b]))));
            }
        }
        let mut out = GradedAlgebra::new(self.name.clone(), basis.clone(), prods)?;
        if let Some(u) = &self.unit {
            out = out.with_unit(to_new(u))?;
        }
        if let Some(d) = &self.delta {
            let images = (0..dim).map(|i| (i, to_new(&d.apply(&columns[i]))));
            out = out.with_delta(LinearOperator::new(basis.clone(), d.degree(), images)?)?;
        }
        if self.pairing.is_some() {
            let mut entries = Vec::new();
            for a in 0..dim {
                for b in 0..dim {
                    let mut s = Scalar::zero();
                    for (i, x) in columns[a].iter() {
                        for (j, y) in columns[b].iter() {
                            s += x * y * self.pairing_entry(i, j);
                        }
                    }
                    entries.push(((a, b), s));
                }
            }
            out = out.with_pairing(entries)?;
        }
        Ok(out)
    }

    pub fn without_delta(&self) -> Self {
        GradedAlgebra {
            delta: None,
            ..self.clone()
        }
    }

    /// Stores a symmetric pairing; `(i, j)` entries are mirrored to `(j, i)`.
    pub fn with_pairing(
        mut self,
        entries: impl IntoIterator<Item = ((usize, usize), Scalar)>,
    ) -> Result<Self> {
        let dim = self.dim();
        let mut table = BTreeMap::new();
        for ((i, j), c) in entries {
            for k in [i, j] {
                if k >= dim {
                    return Err(Error::IndexOutOfRange { index: k, dim });
                }
            }
            if num_traits::Zero::is_zero(&c) {
                continue;
            }
            if let Some(prev) = table.get(&(j, i)) {
                if *prev != c {
                    return Err(Error::InvalidPairing(format!(
                        "asymmetric entries for ({}, {})",
                        self.basis.name(i),
                        self.basis.name(j)
                    )));
                }
            }
            table.insert((i, j), c.clone());
            table.insert((j, i), c);
        }
        self.pairing = Some(table);
        Ok(self)
    }

    pub fn set_name(&mut self, name: impl Into<String>) {
        self.name = name.into();
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.dim()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.basis.degree(i)
    }

    pub fn unit(&self) -> Option<&Element> {
        self.unit.as_ref()
    }

    pub fn delta(&self) -> Option<&LinearOperator> {
        self.delta.as_ref()
    }

    pub fn pairing(&self) -> Option<&BTreeMap<(usize, usize), Scalar>> {
        self.pairing.as_ref()
    }

    pub fn pairing_entry(&self, i: usize, j: usize) -> Scalar {
        self.pairing
            .as_ref()
            .and_then(|p| p.get(&(i, j)).cloned())
            .unwrap_or_else(crate::scalar::zero)
    }

    pub fn products(&self) -> impl Iterator<Item = ((usize, usize), &Element)> + '_ {
        self.product.iter().map(|(&k, e)| (k, e))
    }

    pub fn product_basis(&self, i: usize, j: usize) -> Option<&Element> {
        self.product.get(&(i, j))
    }

    pub fn multiply(&self, x: &Element, y: &Element) -> Element {
        let mut out = Element::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                if let Some(p) = self.product.get(&(i, j)) {
                    out.add_scaled(&(a * b), p);
                }
            }
        }
        out
    }

    /// Left-to-right product of basis vectors.
    pub fn multiply_indices(&self, idx: &[usize]) -> Element {
        let Some((&first, rest)) = idx.split_first() else {
            return Element::zero();
        };
        let mut acc = Element::basis(first);
        for &j in rest {
            if acc.is_zero() {
                break;
            }
            acc = self.multiply(&acc, &Element::basis(j));
        }
        acc
    }
}

impl fmt::Display for GradedAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (dim {})", self.name, self.dim())
    }
}

/// Iterated product `γ_n`. `γ_1` is the identity.
pub fn gamma_n(alg: &GradedAlgebra, args: &[Element]) -> Result<Element> {
    let Some((first, rest)) = args.split_first() else {
        return Err(Error::Precondition(
            "gamma_n needs at least one argument".into(),
        ));
    };
    for a in args {
        alg.basis.check_element(a)?;
    }
    let mut acc = first.clone();
    for a in rest {
        acc = alg.multiply(&acc, a);
    }
    Ok(acc)
}

/// One failed invariant, with the basis tuple that witnesses it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub kind: String,
    pub tuple: Vec<usize>,
    pub defect: Option<Element>,
    pub message: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn push(
        &mut self,
        kind: &str,
        tuple: Vec<usize>,
        defect: Option<Element>,
        message: String,
    ) {
        self.violations.push(Violation {
            kind: kind.to_string(),
            tuple,
            defect,
            message,
        });
    }

    pub fn extend(&mut self, other: ValidationReport) {
        self.violations.extend(other.violations);
    }

    pub fn of_kind<'a>(&'a self, kind: &'a str) -> impl Iterator<Item = &'a Violation> + 'a {
        self.violations.iter().filter(move |v| v.kind == kind)
    }
}

pub(crate) fn tuple_names(basis: &GradedBasis, t: &[usize]) -> String {
    let names: Vec<&str> = t.iter().map(|&i| basis.name(i)).collect();
    format!("({})", names.join(","))
}

/// Checks grading, associativity, unit laws, and (if present) the degree of Δ and Δ² = 0.
pub fn validate_algebra(alg: &GradedAlgebra) -> ValidationReport {
    let b = &alg.basis;
    let dim = alg.dim();
    let mut report = ValidationReport::default();

    for ((i, j), p) in alg.products() {
        let expected = b.degree(i) + b.degree(j);
        if let Some((k, _)) = p.iter().find(|(k, _)| b.degree(*k) != expected) {
            report.push(
                "grading",
                vec![i, j],
                Some(p.clone()),
                format!(
                    "{}*{} = {} has a term of degree {} (expected {})",
                    b.name(i),
                    b.name(j),
                    b.display(p),
                    b.degree(k),
                    expected
                ),
            );
        }
    }

    for i in 0..dim {
        for j in 0..dim {
            for k in 0..dim {
                let ij = alg.multiply_indices(&[i, j]);
                let left = alg.multiply(&ij, &Element::basis(k));
                let jk = alg.multiply_indices(&[j, k]);
                let right = alg.multiply(&Element::basis(i), &jk);
                let defect = &left - &right;
                if !defect.is_zero() {
                    report.push(
                        "associativity",
                        vec![i, j, k],
                        Some(defect.clone()),
                        format!(
                            "{} (ab)c - a(bc) = {}",
                            tuple_names(b, &[i, j, k]),
                            b.display(&defect)
                        ),
                    );
                }
            }
        }
    }

    if let Some(u) = &alg.unit {
        for i in 0..dim {
            let e = Element::basis(i);
            let l = &alg.multiply(u, &e) - &e;
            let r = &alg.multiply(&e, u) - &e;
            for (side, d) in [("left", l), ("right", r)] {
                if !d.is_zero() {
                    report.push(
                        "unit",
                        vec![i],
                        Some(d.clone()),
                        format!(
                            "{side} unit law fails on {}: defect {}",
                            b.name(i),
                            b.display(&d)
                        ),
                    );
                }
            }
        }
    }

    if let Some(delta) = &alg.delta {
        if delta.degree() != 1 {
            report.push(
                "delta_degree",
                vec![],
                None,
                format!("delta declared with degree {}", delta.degree()),
            );
        }
        for (i, img) in delta.degree_violations() {
            report.push(
                "delta_degree",
                vec![i],
                Some(img.clone()),
                format!(
                    "delta({}) = {} is not of degree {}",
                    b.name(i),
                    b.display(&img),
                    b.degree(i) + delta.degree()
                ),
            );
        }
        if let Ok(dd) = compose(delta, delta) {
            for (i, img) in dd.images() {
                report.push(
                    "delta_square",
                    vec![i],
                    Some(img.clone()),
                    format!("delta^2({}) = {}", b.name(i), b.display(img)),
                );
            }
        }
    }
    report
}
