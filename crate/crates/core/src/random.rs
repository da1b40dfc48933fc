//! Seeded generators for random test algebras and operators.
//!
//! Small dimensions come from rejection sampling of sparse structure
//! constants; dimension 4 comes from curated families (truncated polynomial
//! algebras, triangular matrices, exterior algebras, products) conjugated by a
//! random degree-preserving change of basis.

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::Zero;
use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{validate_algebra, GradedAlgebra};
use crate::basis::{Element, GradedBasis};
use crate::linalg::{invert, kernel_and_image};
use crate::operator::{compose, LinearOperator};
use crate::scalar::{int, Scalar};

/// Source indices, target indices and the matrix between them.
type Block = (Vec<usize>, Vec<usize>, Vec<Vec<Scalar>>);

pub struct Rng {
    inner: ChaCha8Rng,
}

fn product_table(entries: &[((usize, usize), Element)]) -> BTreeMap<(usize, usize), Element> {
    entries.iter().cloned().collect()
}

/// `K[x]/(x^k)` with `deg x = d`.
pub fn truncated_polynomial(k: usize, d: i64) -> GradedAlgebra {
    let names: Vec<(String, i64)> = (0..k)
        .map(|i| {
            (
                if i == 0 {
                    "1".to_string()
                } else {
                    format!("x{i}")
                },
                i as i64 * d,
            )
        })
        .collect();
    let b = Arc::new(GradedBasis::new(names).unwrap());
    let mut prods = Vec::new();
    for i in 0..k {
        for j in 0..k {
            if i + j < k {
                prods.push(((i, j), Element::basis(i + j)));
            }
        }
    }
    GradedAlgebra::new(format!("poly{k}_{d}"), b, prods)
        .unwrap()
        .with_unit(Element::basis(0))
        .unwrap()
}

/// Upper triangular 2×2 matrices, off-diagonal entry in degree `d`.
pub fn triangular(d: i64) -> GradedAlgebra {
    let b = Arc::new(GradedBasis::new([("e11", 0), ("e22", 0), ("e12", d)]).unwrap());
    let prods = [
        ((0, 0), Element::basis(0)),
        ((0, 2), Element::basis(2)),
        ((2, 1), Element::basis(2)),
        ((1, 1), Element::basis(1)),
    ];
    GradedAlgebra::new(format!("tri_{d}"), b, product_table(&prods))
        .unwrap()
        .with_unit(&Element::basis(0) + &Element::basis(1))
        .unwrap()
}

/// Exterior algebra on two generators of degree 1.
pub fn exterior2() -> GradedAlgebra {
    let b = Arc::new(GradedBasis::new([("1", 0), ("x", 1), ("y", 1), ("xy", 2)]).unwrap());
    let prods = [
        ((0, 0), Element::basis(0)),
        ((0, 1), Element::basis(1)),
        ((1, 0), Element::basis(1)),
        ((0, 2), Element::basis(2)),
        ((2, 0), Element::basis(2)),
        ((0, 3), Element::basis(3)),
        ((3, 0), Element::basis(3)),
        ((1, 2), Element::basis(3)),
        ((2, 1), Element::term(3, int(-1))),
    ];
    GradedAlgebra::new("ext2", b, product_table(&prods))
        .unwrap()
        .with_unit(Element::basis(0))
        .unwrap()
}

/// Direct product `A × B`.
pub fn direct_product(a: &GradedAlgebra, b: &GradedAlgebra) -> GradedAlgebra {
    let na = a.dim();
    let entries: Vec<(String, i64)> = (0..na)
        .map(|i| (format!("a_{}", a.basis().name(i)), a.degree(i)))
        .chain((0..b.dim()).map(|i| (format!("b_{}", b.basis().name(i)), b.degree(i))))
        .collect();
    let basis = Arc::new(GradedBasis::new(entries).unwrap());
    let mut prods: Vec<((usize, usize), Element)> =
        a.products().map(|(k, e)| (k, e.clone())).collect();
    prods.extend(
        b.products()
            .map(|((i, j), e)| ((i + na, j + na), e.map_indices(|k| k + na))),
    );
    let mut out = GradedAlgebra::new(format!("{}x{}", a.name(), b.name()), basis, prods).unwrap();
    if let (Some(ua), Some(ub)) = (a.unit(), b.unit()) {
        out = out.with_unit(ua + &ub.map_indices(|k| k + na)).unwrap();
    }
    out
}

impl Rng {
    pub fn seeded(seed: u64) -> Self {
        Rng {
            inner: ChaCha8Rng::seed_from_u64(seed),
        }
    }

    pub fn below(&mut self, n: usize) -> usize {
        self.inner.gen_range(0..n)
    }

    pub fn chance(&mut self, p: f64) -> bool {
        self.inner.gen_bool(p)
    }

    /// Integer in `-2..=2`.
    pub fn small_scalar(&mut self) -> Scalar {
        int(self.inner.gen_range(-2..=2))
    }

    pub fn nonzero_scalar(&mut self) -> Scalar {
        let v = [-2, -1, 1, 2, 3];
        int(*v.choose(&mut self.inner).unwrap())
    }

    pub fn random_element(&mut self, dim: usize) -> Element {
        Element::from_terms((0..dim).map(|i| (i, self.small_scalar())))
    }

    /// Element supported on the given indices.
    pub fn random_element_on(&mut self, indices: &[usize]) -> Element {
        Element::from_terms(indices.iter().map(|&i| (i, self.small_scalar())))
    }

    /// Sparse structure constants respecting a random grading, resampled until associative.
    pub fn sparse_associative(&mut self, dim: usize) -> GradedAlgebra {
        let degrees: Vec<i64> = (0..dim).map(|_| self.inner.gen_range(0..3)).collect();
        let names: Vec<(String, i64)> = degrees
            .iter()
            .enumerate()
            .map(|(i, &d)| (format!("b{i}"), d))
            .collect();
        let basis = Arc::new(GradedBasis::new(names).unwrap());
        for _ in 0..2000 {
            let mut prods = Vec::new();
            for i in 0..dim {
                for j in 0..dim {
                    let target = basis.indices_of_degree(degrees[i] + degrees[j]);
                    if target.is_empty() || !self.chance(0.45) {
                        continue;
                    }
                    let mut e = Element::zero();
                    for &k in &target {
                        if self.chance(0.6) {
                            e.add_term(k, self.nonzero_scalar());
                        }
                    }
                    prods.push(((i, j), e));
                }
            }
            let alg = GradedAlgebra::new("sparse", basis.clone(), prods).unwrap();
            if validate_algebra(&alg).is_ok() && alg.products().next().is_some() {
                return alg;
            }
        }
        GradedAlgebra::new("sparse", basis, []).unwrap()
    }

    /// Degree-preserving invertible change of basis.
    pub fn conjugate(&mut self, alg: &GradedAlgebra) -> GradedAlgebra {
        let dim = alg.dim();
        let basis = alg.basis();
        let p = loop {
            let mut p = vec![vec![Scalar::zero(); dim]; dim];
            for d in basis.distinct_degrees() {
                let idx = basis.indices_of_degree(d);
                for &i in &idx {
                    for &j in &idx {
                        p[i][j] = if i == j {
                            self.nonzero_scalar()
                        } else {
                            self.small_scalar()
                        };
                    }
                }
            }
            if invert(&p).is_some() {
                break p;
            }
        };
        let columns: Vec<Element> = (0..dim)
            .map(|a| Element::from_terms((0..dim).map(|i| (i, p[i][a].clone()))))
            .collect();
        let mut out = alg
            .without_delta()
            .rebased(basis.clone(), &columns)
            .unwrap();
        out.set_name(format!("{}'", alg.name()));
        out
    }

    /// A random algebra of dimension at most `max_dim`.
    pub fn random_algebra(&mut self, max_dim: usize) -> GradedAlgebra {
        let mut families: Vec<GradedAlgebra> = vec![
            truncated_polynomial(2, 1),
            truncated_polynomial(3, 1),
            truncated_polynomial(2, 0),
            triangular(0),
            triangular(1),
        ];
        if max_dim >= 4 {
            families.extend([
                truncated_polynomial(4, 1),
                truncated_polynomial(4, 0),
                exterior2(),
                direct_product(&truncated_polynomial(3, 1), &truncated_polynomial(1, 0)),
                direct_product(&truncated_polynomial(2, 1), &truncated_polynomial(2, 0)),
                direct_product(&triangular(1), &truncated_polynomial(1, 0)),
            ]);
        }
        if self.chance(0.3) {
            let dim = 2 + self.below(max_dim.clamp(2, 3) - 1);
            return self.sparse_associative(dim);
        }
        let base = families.choose(&mut self.inner).unwrap().clone();
        self.conjugate(&base)
    }

    fn random_block(&mut self, rows: usize, cols: usize) -> Vec<Vec<Scalar>> {
        (0..rows)
            .map(|_| (0..cols).map(|_| self.small_scalar()).collect())
            .collect()
    }

    fn operator_from_blocks(basis: &Arc<GradedBasis>, blocks: &[Block]) -> LinearOperator {
        let mut images = Vec::new();
        for (src, dst, m) in blocks {
            for (c, &s) in src.iter().enumerate() {
                let img =
                    Element::from_terms(dst.iter().enumerate().map(|(r, &t)| (t, m[r][c].clone())));
                images.push((s, img));
            }
        }
        LinearOperator::new(basis.clone(), 1, images).unwrap()
    }

    /// Degree +1 operator with Δ² = 0. Never identically zero when the grading allows it.
    pub fn square_zero_delta(&mut self, alg: &GradedAlgebra) -> LinearOperator {
        let basis = alg.basis().clone();
        for _ in 0..50 {
            let mut blocks: Vec<Block> = Vec::new();
            let mut prev: Option<(i64, Vec<Vec<Scalar>>)> = None;
            for d in basis.distinct_degrees() {
                let src = basis.indices_of_degree(d);
                let dst = basis.indices_of_degree(d + 1);
                if dst.is_empty() {
                    prev = None;
                    continue;
                }
                let mut m = self.random_block(dst.len(), src.len());
                if let Some((pd, pm)) = &prev {
                    if *pd == d - 1 {
                        // rows of this block must annihilate the columns of the previous one
                        let columns: Vec<Element> =
                            pm.iter().map(|row| Element::from_dense(row)).collect();
                        let (left_null, _) = kernel_and_image(&columns);
                        m = (0..dst.len())
                            .map(|_| {
                                let mut row = Element::zero();
                                for z in &left_null {
                                    row.add_scaled(&self.small_scalar(), z);
                                }
                                row.to_dense(src.len())
                            })
                            .collect();
                    }
                }
                if self.chance(0.25) {
                    m = vec![vec![Scalar::zero(); src.len()]; dst.len()];
                }
                prev = Some((d, m.clone()));
                blocks.push((src, dst, m));
            }
            let op = Self::operator_from_blocks(&basis, &blocks);
            debug_assert!(compose(&op, &op).unwrap().is_zero());
            if !op.is_zero() || blocks.is_empty() {
                return op;
            }
        }
        LinearOperator::zero(basis, 1)
    }

    /// Degree +1 operator with Δ² ≠ 0 when the grading has three consecutive degrees.
    pub fn non_square_zero_delta(&mut self, alg: &GradedAlgebra) -> LinearOperator {
        let basis = alg.basis().clone();
        let mut last = LinearOperator::zero(basis.clone(), 1);
        for _ in 0..200 {
            let mut blocks = Vec::new();
            for d in basis.distinct_degrees() {
                let src = basis.indices_of_degree(d);
                let dst = basis.indices_of_degree(d + 1);
                if !dst.is_empty() {
                    let m = self.random_block(dst.len(), src.len());
                    blocks.push((src, dst, m));
                }
            }
            last = Self::operator_from_blocks(&basis, &blocks);
            if !compose(&last, &last).unwrap().is_zero() {
                return last;
            }
        }
        last
    }

    pub fn random_algebra_with_square_zero_delta(&mut self, max_dim: usize) -> GradedAlgebra {
        let alg = self.random_algebra(max_dim);
        let d = self.square_zero_delta(&alg);
        alg.with_delta(d).unwrap()
    }

    /// Algebra spanning three consecutive degrees with a degree +1 operator, Δ² ≠ 0.
    pub fn random_algebra_with_non_square_zero_delta(&mut self, max_dim: usize) -> GradedAlgebra {
        loop {
            let alg = self.random_algebra(max_dim);
            let d = self.non_square_zero_delta(&alg);
            if !compose(&d, &d).unwrap().is_zero() {
                return alg.with_delta(d).unwrap();
            }
        }
    }
}
