//! Homogeneous linear operators on a graded basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::One;

use crate::basis::{Element, GradedBasis};
use crate::error::{Error, Result};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LinearOperator {
    basis: Arc<GradedBasis>,
    degree: i64,
    images: BTreeMap<usize, Element>,
}

pub(crate) fn same_basis(a: &Arc<GradedBasis>, b: &Arc<GradedBasis>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl LinearOperator {
    /// Zero images are dropped; indices must lie in the basis.
    pub fn new(
        basis: Arc<GradedBasis>,
        degree: i64,
        images: impl IntoIterator<Item = (usize, Element)>,
    ) -> Result<Self> {
        let mut table = BTreeMap::new();
        for (i, img) in images {
            if i >= basis.dim() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    dim: basis.dim(),
                });
            }
            basis.check_element(&img)?;
            if !img.is_zero() {
                table.insert(i, img);
            }
        }
        Ok(LinearOperator {
            basis,
            degree,
            images: table,
        })
    }

    pub fn zero(basis: Arc<GradedBasis>, degree: i64) -> Self {
        LinearOperator {
            basis,
            degree,
            images: BTreeMap::new(),
        }
    }

    pub fn identity(basis: Arc<GradedBasis>) -> Self {
        let images = (0..basis.dim()).map(|i| (i, Element::basis(i))).collect();
        LinearOperator {
            basis,
            degree: 0,
            images,
        }
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn image(&self, i: usize) -> Element {
        self.images.get(&i).cloned().unwrap_or_default()
    }

    pub fn image_ref(&self, i: usize) -> Option<&Element> {
        self.images.get(&i)
    }

    pub fn images(&self) -> impl Iterator<Item = (usize, &Element)> + '_ {
        self.images.iter().map(|(&i, e)| (i, e))
    }

    pub fn is_zero(&self) -> bool {
        self.images.is_empty()
    }

    /// Linear extension of the image table.
    pub fn apply(&self, x: &Element) -> Element {
        let mut out = Element::zero();
        for (i, c) in x.iter() {
            if let Some(img) = self.images.get(&i) {
                out.add_scaled(c, img);
            }
        }
        out
    }

    pub fn scaled(&self, c: &Scalar) -> LinearOperator {
        LinearOperator {
            basis: self.basis.clone(),
            degree: self.degree,
            images: self
                .images
                .iter()
                .map(|(&i, e)| (i, e.scaled(c)))
                .filter(|(_, e)| !e.is_zero())
                .collect(),
        }
    }

    /// Basis vectors whose image is not homogeneous of degree `deg + self.degree`.
    pub fn degree_violations(&self) -> Vec<(usize, Element)> {
        self.images
            .iter()
            .filter(|(&i, img)| {
                img.iter()
                    .any(|(j, _)| self.basis.degree(j) != self.basis.degree(i) + self.degree)
            })
            .map(|(&i, img)| (i, img.clone()))
            .collect()
    }

    pub fn check_degree(&self) -> Result<()> {
        match self.degree_violations().first() {
            None => Ok(()),
            Some((i, img)) => Err(Error::DegreeMismatch(format!(
                "{} -> {} is not of degree {}",
                self.basis.name(*i),
                self.basis.display(img),
                self.degree
            ))),
        }
    }

    /// Dense matrix of the block from degree `from` to degree `from + self.degree`,
    /// rows indexed by the target indices.
    pub fn block(&self, from: i64) -> (Vec<usize>, Vec<usize>, Vec<Vec<Scalar>>) {
        let src = self.basis.indices_of_degree(from);
        let dst = self.basis.indices_of_degree(from + self.degree);
        let rows = dst
            .iter()
            .map(|&t| src.iter().map(|&s| self.image(s).coeff(t)).collect())
            .collect();
        (src, dst, rows)
    }
}

pub fn apply_operator(op: &LinearOperator, x: &Element) -> Result<Element> {
    op.basis.check_element(x)?;
    Ok(op.apply(x))
}

/// `f ∘ g`: applies `g` first. Degree is the sum of degrees.
pub fn compose(f: &LinearOperator, g: &LinearOperator) -> Result<LinearOperator> {
    if !same_basis(&f.basis, &g.basis) {
        return Err(Error::BasisMismatch("compose on different bases".into()));
    }
    let images = g
        .images()
        .map(|(i, gi)| (i, f.apply(gi)))
        .collect::<Vec<_>>();
    LinearOperator::new(f.basis.clone(), f.degree + g.degree, images)
}

pub fn add_operators(f: &LinearOperator, g: &LinearOperator) -> Result<LinearOperator> {
    if !same_basis(&f.basis, &g.basis) {
        return Err(Error::BasisMismatch("sum on different bases".into()));
    }
    if f.degree != g.degree {
        return Err(Error::DegreeMismatch(format!(
            "{} vs {}",
            f.degree, g.degree
        )));
    }
    let images = (0..f.basis.dim())
        .map(|i| (i, &f.image(i) + &g.image(i)))
        .collect::<Vec<_>>();
    LinearOperator::new(f.basis.clone(), f.degree, images)
}

impl LinearOperator {
    pub fn negated(&self) -> LinearOperator {
        self.scaled(&-Scalar::one())
    }
}
