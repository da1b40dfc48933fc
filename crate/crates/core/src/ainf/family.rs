use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::basis::{Element, GradedBasis};
use crate::error::{Error, Result};
use crate::multiop::{all_tuples, MultiOp};
use crate::operator::{same_basis, LinearOperator};
use crate::sign::koszul_sign;

/// A family of multilinear operations `m_k`, evaluated on basis tuples.
pub trait OperationFamily {
    fn basis(&self) -> &Arc<GradedBasis>;
    fn degree(&self, arity: usize) -> i64;
    /// Zero for arities the family does not define.
    fn eval_basis(&self, arity: usize, tuple: &[usize]) -> Element;
}

/// The Stasheff sum evaluated on one basis tuple.
pub fn stasheff_defect_at<F: OperationFamily + ?Sized>(fam: &F, tuple: &[usize]) -> Element {
    let basis = fam.basis();
    let n = tuple.len();
    let mut out = Element::zero();
    let mut outer = Vec::with_capacity(n);
    for k in 1..=n {
        for i in 0..=n - k {
            let inner = fam.eval_basis(k, &tuple[i..i + k]);
            if inner.is_zero() {
                continue;
            }
            let passed: Vec<i64> = tuple[..i].iter().map(|&a| basis.degree(a)).collect();
            let sign = koszul_sign(fam.degree(k), &passed);
            let arity = n - k + 1;
            for (b, c) in inner.iter() {
                outer.clear();
                outer.extend_from_slice(&tuple[..i]);
                outer.push(b);
                outer.extend_from_slice(&tuple[i + k..]);
                let v = fam.eval_basis(arity, &outer);
                out.add_scaled(&(&sign * c), &v);
            }
        }
    }
    out
}

/// The Stasheff sum at arity `n` tabulated over every basis tuple.
pub fn stasheff_defect_family<F: OperationFamily + ?Sized>(fam: &F, n: usize) -> MultiOp {
    let basis = fam.basis().clone();
    let degree = fam.degree(1) + fam.degree(n);
    let mut op = MultiOp::zero(basis.clone(), n, degree);
    for t in all_tuples(basis.dim(), n) {
        let v = stasheff_defect_at(fam, &t);
        if !v.is_zero() {
            op.set(t, v).expect("tuple in range");
        }
    }
    op
}

/// The operations `m_{Δ,n}` of an algebra and operator, evaluated on demand.
#[derive(Debug, Clone, Copy)]
pub struct DeltaOperations<'a> {
    alg: &'a GradedAlgebra,
    delta: &'a LinearOperator,
}

impl<'a> DeltaOperations<'a> {
    pub fn new(alg: &'a GradedAlgebra, delta: &'a LinearOperator) -> Result<Self> {
        if !same_basis(alg.basis(), delta.basis()) {
            return Err(Error::BasisMismatch(
                "delta is defined on another basis".into(),
            ));
        }
        delta.check_degree()?;
        Ok(DeltaOperations { alg, delta })
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        self.alg
    }

    pub fn delta(&self) -> &LinearOperator {
        self.delta
    }

    fn delta_of_product(&self, t: &[usize]) -> Element {
        self.delta.apply(&self.alg.multiply_indices(t))
    }

    pub fn eval(&self, tuple: &[usize]) -> Element {
        let n = tuple.len();
        let alg = self.alg;
        match n {
            0 => Element::zero(),
            1 => self.delta.image(tuple[0]),
            _ => {
                let first = Element::basis(tuple[0]);
                let last = Element::basis(tuple[n - 1]);
                let sign = koszul_sign(self.delta.degree(), &[alg.degree(tuple[0])]);
                // Δ(a1⋯an) − Δ(a1⋯a_{n−1})an − s·a1Δ(a2⋯an)
                let mut out = self.delta_of_product(tuple);
                out -= &alg.multiply(&self.delta_of_product(&tuple[..n - 1]), &last);
                let head = alg.multiply(&first, &self.delta_of_product(&tuple[1..]));
                out.add_scaled(&-sign.clone(), &head);
                if n >= 3 {
                    // + s·a1Δ(a2⋯a_{n−1})an
                    let mid = self.delta_of_product(&tuple[1..n - 1]);
                    let t = alg.multiply(&alg.multiply(&first, &mid), &last);
                    out.add_scaled(&sign, &t);
                }
                out
            }
        }
    }

    pub fn tabulate(&self, n: usize) -> MultiOp {
        MultiOp::tabulate(self.alg.basis().clone(), n, self.delta.degree(), |t| {
            self.eval(t)
        })
    }
}

impl OperationFamily for DeltaOperations<'_> {
    fn basis(&self) -> &Arc<GradedBasis> {
        self.alg.basis()
    }

    fn degree(&self, _arity: usize) -> i64 {
        self.delta.degree()
    }

    fn eval_basis(&self, arity: usize, tuple: &[usize]) -> Element {
        debug_assert_eq!(arity, tuple.len());
        self.eval(tuple)
    }
}
