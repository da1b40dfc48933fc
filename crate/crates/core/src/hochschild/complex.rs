use std::collections::HashMap;
use std::sync::Arc;

use num_traits::Zero;

use crate::algebra::GradedAlgebra;
use crate::basis::{Element, GradedBasis};
use crate::cohomology::{operator_cohomology_in_degrees, CohomologyBasis};
use crate::error::{Error, Result};
use crate::operator::LinearOperator;
use crate::scalar::Scalar;

use super::{connes_b_dual, hochschild_delta, Cochain, FrobeniusData};

/// `C^0 ⊕ … ⊕ C^{n_max}` as one graded space; the basis cochain
/// `(a1..an) ↦ e_k` sits in degree `n`. The normalized variant only uses
/// arguments other than the unit.
#[derive(Debug, Clone)]
pub struct CochainSpace {
    dim: usize,
    n_max: usize,
    /// Per basis cochain: degree, dense tuple index, value index.
    entries: Vec<(usize, usize, usize)>,
    lookup: HashMap<(usize, usize, usize), usize>,
    basis: Arc<GradedBasis>,
}

impl CochainSpace {
    pub fn new(alg: &GradedAlgebra, n_max: usize) -> Result<Self> {
        Self::with_labels(alg, n_max, false, |n| n as i64)
    }

    /// Cochains vanishing whenever an argument is the unit, which must be a basis vector.
    pub fn normalized(alg: &GradedAlgebra, n_max: usize) -> Result<Self> {
        Self::with_labels(alg, n_max, true, |n| n as i64)
    }

    /// Degree labels other than the cochain degree, for comparing grading conventions.
    pub fn with_labels(
        alg: &GradedAlgebra,
        n_max: usize,
        normalized: bool,
        label: impl Fn(usize) -> i64,
    ) -> Result<Self> {
        let d = alg.dim();
        let names = alg.basis();
        let skip = if normalized {
            Some(unit_index(alg)?)
        } else {
            None
        };
        let mut entries = Vec::new();
        let mut labels = Vec::new();
        for n in 0..=n_max {
            let proto = Cochain::zero(d, n);
            for t in 0..proto.len() {
                let tuple = proto.tuple_of(t);
                if skip.is_some_and(|u| tuple.contains(&u)) {
                    continue;
                }
                let args: Vec<&str> = tuple.iter().map(|&a| names.name(a)).collect();
                for k in 0..d {
                    labels.push((
                        format!("C{n}({})>{}", args.join(","), names.name(k)),
                        label(n),
                    ));
                    entries.push((n, t, k));
                }
            }
        }
        let lookup = entries.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        Ok(CochainSpace {
            dim: d,
            n_max,
            entries,
            lookup,
            basis: Arc::new(GradedBasis::new(labels)?),
        })
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    /// Dimension of the algebra.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.basis.dim()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.dim() == 0
    }

    /// Cochain degree of a basis index.
    pub fn cochain_degree(&self, i: usize) -> usize {
        self.entries[i].0
    }

    pub fn basis_cochain(&self, i: usize) -> Cochain {
        let (n, t, k) = self.entries[i];
        let mut c = Cochain::zero(self.dim, n);
        c.values[t] = Element::basis(k);
        c
    }

    /// Fails on cochains above `n_max` or outside the (normalized) subspace.
    pub fn to_element(&self, f: &Cochain) -> Result<Element> {
        if f.degree() > self.n_max {
            return Err(Error::TruncationOverflow(format!(
                "cochain of degree {} above {}",
                f.degree(),
                self.n_max
            )));
        }
        let mut out = Element::zero();
        for (t, v) in f.nonzero() {
            for (k, c) in v.iter() {
                let i = self
                    .lookup
                    .get(&(f.degree(), t, k))
                    .ok_or_else(|| Error::Precondition("cochain is not normalized".into()))?;
                out.add_term(*i, c.clone());
            }
        }
        Ok(out)
    }

    /// The degree-`n` component of `x` as a cochain.
    pub fn component(&self, x: &Element, n: usize) -> Cochain {
        let mut c = Cochain::zero(self.dim, n);
        for (i, s) in x.iter() {
            let (m, t, k) = self.entries[i];
            if m == n {
                c.values[t].add_term(k, s.clone());
            }
        }
        c
    }

    pub fn contains(&self, f: &Cochain) -> bool {
        f.degree() <= self.n_max && self.to_element(f).is_ok()
    }

    /// Lifts a cochain map `C^n → C^{n+shift}` to an operator; components
    /// leaving the truncated range are dropped.
    pub fn operator(
        &self,
        degree: i64,
        mut f: impl FnMut(&Cochain) -> Result<Option<Cochain>>,
    ) -> Result<LinearOperator> {
        let mut images = Vec::with_capacity(self.len());
        for i in 0..self.len() {
            if let Some(img) = f(&self.basis_cochain(i))? {
                if img.degree() <= self.n_max {
                    images.push((i, self.to_element(&img)?));
                }
            }
        }
        LinearOperator::new(self.basis.clone(), degree, images)
    }

    /// Cup product of basis cochains, zero above `n_max`.
    pub fn cup_algebra(&self, alg: &GradedAlgebra, name: &str) -> Result<GradedAlgebra> {
        let mut products = Vec::new();
        for (i, &(ni, ti, ki)) in self.entries.iter().enumerate() {
            for (j, &(nj, tj, kj)) in self.entries.iter().enumerate() {
                if ni + nj > self.n_max {
                    continue;
                }
                let v = alg.multiply_indices(&[ki, kj]);
                if v.is_zero() {
                    continue;
                }
                let t = ti * self.dim.pow(nj as u32) + tj;
                let img = Element::from_terms(
                    v.iter()
                        .map(|(k, c)| (self.lookup[&(ni + nj, t, k)], c.clone())),
                );
                products.push(((i, j), img));
            }
        }
        GradedAlgebra::new(name, self.basis.clone(), products)
    }
}

/// Index of the unit when it is a basis vector.
pub fn unit_index(alg: &GradedAlgebra) -> Result<usize> {
    let u = alg.unit().ok_or(Error::NoUnit)?;
    match (u.len(), u.iter().next()) {
        (1, Some((i, c))) if *c == Scalar::from_integer(1.into()) => Ok(i),
        _ => Err(Error::Precondition(
            "the unit is not a basis vector; use a unit-adapted basis".into(),
        )),
    }
}

/// `HH^n` for `n ≤ n_max`.
#[derive(Debug, Clone)]
pub struct HHBasis {
    space: CochainSpace,
    cohomology: CohomologyBasis,
    n_max: usize,
}

impl HHBasis {
    pub fn n_max(&self) -> usize {
        self.n_max
    }

    pub fn dims(&self) -> Vec<usize> {
        (0..=self.n_max)
            .map(|n| self.cohomology.classes_of_degree(n as i64))
            .collect()
    }

    pub fn len(&self) -> usize {
        self.cohomology.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cohomology.is_empty()
    }

    /// Class degrees and cochain representatives, in coordinate order.
    pub fn classes(&self) -> Vec<(usize, Cochain)> {
        self.cohomology
            .classes()
            .iter()
            .map(|c| {
                let n = c.degree as usize;
                (n, self.space.component(&c.representative, n))
            })
            .collect()
    }

    /// Class coordinates of a cocycle of degree ≤ n_max.
    pub fn project(&self, f: &Cochain) -> Result<Vec<Scalar>> {
        if f.degree() > self.n_max {
            return Err(Error::TruncationOverflow(format!(
                "degree {} above {}",
                f.degree(),
                self.n_max
            )));
        }
        self.cohomology.project(&self.space.to_element(f)?)
    }

    pub fn is_coboundary_class(&self, f: &Cochain) -> Result<bool> {
        Ok(self.project(f)?.iter().all(Scalar::is_zero))
    }
}

/// `HH^n`, n ≤ n_max, from the full cochain complex.
pub fn hh_cohomology(alg: &GradedAlgebra, n_max: usize) -> Result<HHBasis> {
    hh_from_space(alg, CochainSpace::new(alg, n_max + 1)?, n_max)
}

/// `HH^n` from the normalized subcomplex; representatives vanish on the unit.
pub fn hh_cohomology_normalized(alg: &GradedAlgebra, n_max: usize) -> Result<HHBasis> {
    hh_from_space(alg, CochainSpace::normalized(alg, n_max + 1)?, n_max)
}

fn hh_from_space(alg: &GradedAlgebra, space: CochainSpace, n_max: usize) -> Result<HHBasis> {
    let delta = space.operator(1, |f| {
        if f.degree() > n_max {
            Ok(None)
        } else {
            hochschild_delta(alg, f).map(Some)
        }
    })?;
    let degrees: Vec<i64> = (0..=n_max as i64).collect();
    let cohomology = operator_cohomology_in_degrees(&delta, &degrees)?;
    Ok(HHBasis {
        space,
        cohomology,
        n_max,
    })
}

/// The Connes operator on a cochain space; its declared degree depends on the labels.
pub(crate) fn connes_operator(
    fd: &FrobeniusData,
    space: &CochainSpace,
    degree: i64,
) -> Result<LinearOperator> {
    space.operator(degree, |f| {
        if f.degree() == 0 {
            Ok(None)
        } else {
            connes_b_dual(fd, f).map(Some)
        }
    })
}
