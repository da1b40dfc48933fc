//! Cohomology of a square-zero homogeneous operator, degree by degree.

use num_traits::Zero;

use crate::algebra::GradedAlgebra;
use crate::basis::Element;
use crate::error::{Error, Result};
use crate::linalg::{kernel_and_image, quotient_representatives, SpanCoordinates};
use crate::operator::{compose, LinearOperator};
use crate::scalar::Scalar;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CohomologyClass {
    pub degree: i64,
    pub representative: Element,
}

#[derive(Debug, Clone)]
pub struct CohomologyBasis {
    classes: Vec<CohomologyClass>,
    kernel_dims: Vec<(i64, usize)>,
    image_dims: Vec<(i64, usize)>,
    coords: SpanCoordinates,
    n_image: usize,
    delta: LinearOperator,
}

impl CohomologyBasis {
    pub fn classes(&self) -> &[CohomologyClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn classes_of_degree(&self, degree: i64) -> usize {
        self.classes.iter().filter(|c| c.degree == degree).count()
    }

    /// `dim ker` in the given degree.
    pub fn kernel_dim(&self, degree: i64) -> usize {
        self.kernel_dims
            .iter()
            .find(|(d, _)| *d == degree)
            .map_or(0, |x| x.1)
    }

    /// `dim im` landing in the given degree.
    pub fn image_dim(&self, degree: i64) -> usize {
        self.image_dims
            .iter()
            .find(|(d, _)| *d == degree)
            .map_or(0, |x| x.1)
    }

    /// Class coordinates of a cocycle; fails on anything outside `ker Δ`.
    pub fn project(&self, x: &Element) -> Result<Vec<Scalar>> {
        if !self.delta.apply(x).is_zero() {
            return Err(Error::NotClosed);
        }
        let c = self
            .coords
            .coordinates(x)
            .expect("cocycles lie in span(im, representatives)");
        Ok(c[self.n_image..].to_vec())
    }

    pub fn projects_to_zero(&self, x: &Element) -> Result<bool> {
        Ok(self.project(x)?.iter().all(Scalar::is_zero))
    }
}

/// `ker δ / im δ` for a square-zero homogeneous operator.
pub fn operator_cohomology(delta: &LinearOperator) -> Result<CohomologyBasis> {
    let degrees = delta.basis().distinct_degrees();
    operator_cohomology_in_degrees(delta, &degrees)
}

/// As [`operator_cohomology`], computing classes only in the listed degrees.
pub fn operator_cohomology_in_degrees(
    delta: &LinearOperator,
    degrees: &[i64],
) -> Result<CohomologyBasis> {
    let sq = compose(delta, delta)?;
    if let Some((i, img)) = sq.images().next() {
        return Err(Error::NotSquareZero(format!(
            "delta^2({}) = {}",
            delta.basis().name(i),
            delta.basis().display(img)
        )));
    }
    delta.check_degree()?;
    let basis = delta.basis();
    let mut classes = Vec::new();
    let mut all_image = Vec::new();
    let mut kernel_dims = Vec::new();
    let mut image_dims = Vec::new();
    for &d in degrees {
        let src = basis.indices_of_degree(d);
        let cols: Vec<Element> = src.iter().map(|&i| delta.image(i)).collect();
        let (ker_local, _) = kernel_and_image(&cols);
        let kernel: Vec<Element> = ker_local
            .iter()
            .map(|k| k.map_indices(|j| src[j]))
            .collect();
        let prev = basis.indices_of_degree(d - delta.degree());
        let prev_cols: Vec<Element> = prev.iter().map(|&i| delta.image(i)).collect();
        let (_, image) = kernel_and_image(&prev_cols);
        kernel_dims.push((d, kernel.len()));
        image_dims.push((d, image.len()));
        for rep in quotient_representatives(&kernel, &image) {
            classes.push(CohomologyClass {
                degree: d,
                representative: rep,
            });
        }
        all_image.extend(image);
    }
    let n_image = all_image.len();
    let mut span = all_image;
    span.extend(classes.iter().map(|c| c.representative.clone()));
    let coords = SpanCoordinates::new(&span).expect("image and representatives are independent");
    Ok(CohomologyBasis {
        classes,
        kernel_dims,
        image_dims,
        coords,
        n_image,
        delta: delta.clone(),
    })
}

/// Δ-cohomology of an algebra with differential.
pub fn delta_cohomology(alg: &GradedAlgebra) -> Result<CohomologyBasis> {
    let delta = alg
        .delta()
        .ok_or_else(|| Error::Precondition("algebra has no delta".into()))?;
    operator_cohomology(delta)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::basis::GradedBasis;
    use crate::fixtures;
    use crate::random::Rng;
    use std::sync::Arc;

    #[test]
    fn triangular_has_one_class() {
        let a = fixtures::triangular();
        let h = delta_cohomology(&a).unwrap();
        assert_eq!(h.len(), 1);
        assert_eq!(h.classes()[0].degree, 0);
        assert_eq!(
            h.classes()[0].representative,
            a.basis().basis_vector("e11").unwrap()
        );
    }

    #[test]
    fn zero_delta_keeps_whole_basis() {
        let a = fixtures::triangular();
        let z = LinearOperator::zero(a.basis().clone(), 1);
        let h = operator_cohomology(&z).unwrap();
        assert_eq!(h.len(), 3);
        for (i, c) in h.classes().iter().enumerate() {
            assert_eq!(c.representative, Element::basis(i));
        }
    }

    #[test]
    fn exact_complex_has_no_classes() {
        let b = Arc::new(GradedBasis::new([("u", 0), ("v", 1)]).unwrap());
        let d = LinearOperator::new(b, 1, [(0, Element::basis(1))]).unwrap();
        assert!(operator_cohomology(&d).unwrap().is_empty());
    }

    #[test]
    fn not_square_zero_rejected() {
        let a = fixtures::non_square_zero();
        assert!(matches!(delta_cohomology(&a), Err(Error::NotSquareZero(_))));
    }

    #[test]
    fn projector_properties_on_random_complexes() {
        let mut rng = Rng::seeded(11);
        for _ in 0..10 {
            let alg = rng.random_algebra_with_square_zero_delta(4);
            let delta = alg.delta().unwrap();
            let h = delta_cohomology(&alg).unwrap();
            for d in alg.basis().distinct_degrees() {
                assert_eq!(h.kernel_dim(d) - h.image_dim(d), h.classes_of_degree(d));
            }
            for (k, c) in h.classes().iter().enumerate() {
                let p = h.project(&c.representative).unwrap();
                for (j, x) in p.iter().enumerate() {
                    assert_eq!(x.is_zero(), j != k);
                }
            }
            for _ in 0..20 {
                let x = rng.random_element(alg.dim());
                assert!(h.projects_to_zero(&delta.apply(&x)).unwrap());
            }
        }
    }
}
