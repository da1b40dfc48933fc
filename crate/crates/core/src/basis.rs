//! Graded bases and sparse elements.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::scalar::{format_scalar, is_negative, Scalar};

/// An ordered list of named basis vectors with integer degrees.
#[derive(Debug, Clone)]
pub struct GradedBasis {
    names: Vec<String>,
    degrees: Vec<i64>,
    index: HashMap<String, usize>,
}

impl PartialEq for GradedBasis {
    fn eq(&self, other: &Self) -> bool {
        self.names == other.names && self.degrees == other.degrees
    }
}

impl Eq for GradedBasis {}

impl GradedBasis {
    pub fn new<S: Into<String>>(entries: impl IntoIterator<Item = (S, i64)>) -> Result<Self> {
        let mut names = Vec::new();
        let mut degrees = Vec::new();
        let mut index = HashMap::new();
        for (name, degree) in entries {
            let name = name.into();
            if index.insert(name.clone(), names.len()).is_some() {
                return Err(Error::BasisMismatch(format!(
                    "duplicate basis name `{name}`"
                )));
            }
            names.push(name);
            degrees.push(degree);
        }
        Ok(GradedBasis {
            names,
            degrees,
            index,
        })
    }

    pub fn dim(&self) -> usize {
        self.names.len()
    }

    pub fn degree(&self, i: usize) -> i64 {
        self.degrees[i]
    }

    pub fn degrees(&self) -> &[i64] {
        &self.degrees
    }

    pub fn name(&self, i: usize) -> &str {
        &self.names[i]
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.index.get(name).copied()
    }

    pub fn basis_vector(&self, name: &str) -> Option<Element> {
        self.index_of(name).map(Element::basis)
    }

    /// Indices of all basis vectors of the given degree, in order.
    pub fn indices_of_degree(&self, degree: i64) -> Vec<usize> {
        (0..self.dim())
            .filter(|&i| self.degrees[i] == degree)
            .collect()
    }

    /// The distinct degrees, ascending.
    pub fn distinct_degrees(&self) -> Vec<i64> {
        let mut d = self.degrees.clone();
        d.sort_unstable();
        d.dedup();
        d
    }

    /// Same names with every degree shifted by `by`.
    pub fn shifted(&self, by: i64) -> GradedBasis {
        GradedBasis {
            names: self.names.clone(),
            degrees: self.degrees.iter().map(|d| d + by).collect(),
            index: self.index.clone(),
        }
    }

    pub fn check_element(&self, x: &Element) -> Result<()> {
        match x.max_index() {
            Some(i) if i >= self.dim() => Err(Error::IndexOutOfRange {
                index: i,
                dim: self.dim(),
            }),
            _ => Ok(()),
        }
    }

    /// `Some(d)` if every term of `x` has degree `d`; `None` for zero or inhomogeneous.
    pub fn homogeneous_degree(&self, x: &Element) -> Option<i64> {
        let mut it = x.iter().map(|(i, _)| self.degrees[i]);
        let first = it.next()?;
        it.all(|d| d == first).then_some(first)
    }

    pub fn is_homogeneous(&self, x: &Element) -> bool {
        x.is_zero() || self.homogeneous_degree(x).is_some()
    }

    pub fn homogeneous_components(&self, x: &Element) -> BTreeMap<i64, Element> {
        let mut out: BTreeMap<i64, Element> = BTreeMap::new();
        for (i, c) in x.iter() {
            out.entry(self.degrees[i])
                .or_default()
                .add_term(i, c.clone());
        }
        out
    }

    pub fn display(&self, x: &Element) -> String {
        x.display_with(|i| self.names[i].clone())
    }
}

/// Finite linear combination of basis vectors. Zero coefficients are never stored.
#[derive(Debug, Clone, PartialEq, Eq, Default, Hash, PartialOrd, Ord)]
pub struct Element {
    coeffs: BTreeMap<usize, Scalar>,
}

impl Element {
    pub fn zero() -> Self {
        Element::default()
    }

    pub fn basis(i: usize) -> Self {
        Element::term(i, Scalar::one())
    }

    pub fn term(i: usize, c: Scalar) -> Self {
        let mut e = Element::zero();
        e.add_term(i, c);
        e
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (usize, Scalar)>) -> Self {
        let mut e = Element::zero();
        for (i, c) in terms {
            e.add_term(i, c);
        }
        e
    }

    /// Dense coordinate vector of length `dim`.
    pub fn from_dense(v: &[Scalar]) -> Self {
        Element::from_terms(v.iter().cloned().enumerate())
    }

    pub fn to_dense(&self, dim: usize) -> Vec<Scalar> {
        let mut v = vec![Scalar::zero(); dim];
        for (i, c) in self.iter() {
            v[i] = c.clone();
        }
        v
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, i: usize) -> Scalar {
        self.coeffs.get(&i).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, &Scalar)> + '_ {
        self.coeffs.iter().map(|(&i, c)| (i, c))
    }

    /// First stored index `>= from`.
    pub(crate) fn first_index_from(&self, from: usize) -> Option<usize> {
        self.coeffs.range(from..).next().map(|(&i, _)| i)
    }

    pub fn min_index(&self) -> Option<usize> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_index(&self) -> Option<usize> {
        self.coeffs.keys().next_back().copied()
    }

    pub fn add_term(&mut self, i: usize, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.coeffs.entry(i) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// `self += c * other`
    pub fn add_scaled(&mut self, c: &Scalar, other: &Element) {
        if c.is_zero() {
            return;
        }
        for (i, x) in other.iter() {
            self.add_term(i, c * x);
        }
    }

    pub fn scaled(&self, c: &Scalar) -> Element {
        if c.is_zero() {
            return Element::zero();
        }
        Element {
            coeffs: self.coeffs.iter().map(|(&i, x)| (i, x * c)).collect(),
        }
    }

    /// Reindexes every basis vector through `f`, summing collisions.
    pub fn map_indices(&self, mut f: impl FnMut(usize) -> usize) -> Element {
        Element::from_terms(self.iter().map(|(i, c)| (f(i), c.clone())))
    }

    pub fn display_with(&self, mut name: impl FnMut(usize) -> String) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (k, (i, c)) in self.iter().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            if k == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if !mag.is_one() {
                out.push_str(&format_scalar(&mag));
                out.push('*');
            }
            out.push_str(&name(i));
        }
        out
    }
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.display_with(|i| format!("#{i}")))
    }
}

impl AddAssign<&Element> for Element {
    fn add_assign(&mut self, rhs: &Element) {
        for (i, c) in rhs.iter() {
            self.add_term(i, c.clone());
        }
    }
}

impl SubAssign<&Element> for Element {
    fn sub_assign(&mut self, rhs: &Element) {
        for (i, c) in rhs.iter() {
            self.add_term(i, -c.clone());
        }
    }
}

impl Add<&Element> for &Element {
    type Output = Element;
    fn add(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub<&Element> for &Element {
    type Output = Element;
    fn sub(self, rhs: &Element) -> Element {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Add for Element {
    type Output = Element;
    fn add(mut self, rhs: Element) -> Element {
        self += &rhs;
        self
    }
}

impl Sub for Element {
    type Output = Element;
    fn sub(mut self, rhs: Element) -> Element {
        self -= &rhs;
        self
    }
}

impl Neg for Element {
    type Output = Element;
    fn neg(self) -> Element {
        Element {
            coeffs: self.coeffs.into_iter().map(|(i, c)| (i, -c)).collect(),
        }
    }
}

impl Neg for &Element {
    type Output = Element;
    fn neg(self) -> Element {
        -self.clone()
    }
}
