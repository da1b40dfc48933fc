//! A∞-operations `m_n` built from a graded associative product and a
//! degree +1 operator Δ, measuring how far Δ is from being a derivation.
//!
//! On homogeneous arguments:
//!
//! ```text
//! m_1(a)       = Δa
//! m_2(a, b)    = Δ(ab) − Δ(a)b − (−1)^{|a|} aΔ(b)
//! m_n(a1..an)  = Δ(a1⋯an) − Δ(a1⋯a_{n−1})an − (−1)^{|a1|} a1Δ(a2⋯an)
//!                + (−1)^{|a1|} a1Δ(a2⋯a_{n−1})an          (n ≥ 3)
//! ```
//!
//! The signs are the Koszul signs of Δ moving past `a1`.

mod family;
mod structure;

pub use family::{stasheff_defect_at, stasheff_defect_family, DeltaOperations, OperationFamily};
pub use structure::{AInfStructure, Mode};

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::{tuple_names, GradedAlgebra, ValidationReport};
use crate::basis::{Element, GradedBasis};
use crate::cohomology::{operator_cohomology, CohomologyBasis};
use crate::error::{Error, Result};
use crate::multiop::{all_tuples, apply_tensor_slot, multilinear, MultiOp};
use crate::operator::{compose, LinearOperator};

/// Tabulates `m_{Δ,n}` over all basis tuples.
///
/// Δ may have any degree (`m_{Δ²,n}` uses an even one); its images must
/// respect the declared degree.
pub fn construct_m(alg: &GradedAlgebra, delta: &LinearOperator, n: usize) -> Result<MultiOp> {
    let ops = DeltaOperations::new(alg, delta)?;
    Ok(ops.tabulate(n))
}

/// `Σ m_{i+1+j}(id^{⊗i} ⊗ m_k ⊗ id^{⊗j})` over `i + j + k = n`, on every basis tuple.
pub fn stasheff_defect(s: &AInfStructure, n: usize) -> Result<MultiOp> {
    for k in 1..=n {
        if s.op(k).is_none() {
            return Err(Error::MissingArity(k));
        }
    }
    Ok(stasheff_defect_family(s, n))
}

/// `assoc_{m_Δ,n} − m_{Δ²,n}`; zero at every arity by the squaring identity.
pub fn assoc_vs_delta_squared(
    alg: &GradedAlgebra,
    delta: &LinearOperator,
    n: usize,
) -> Result<MultiOp> {
    let ops = DeltaOperations::new(alg, delta)?;
    let assoc = stasheff_defect_family(&ops, n);
    let sq = compose(delta, delta)?;
    let m_sq = construct_m(alg, &sq, n)?;
    assoc.sub(&m_sq)
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Order {
    Finite(usize),
    ExceedsCap,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum OrderWitness {
    /// `m_arity` was checked to vanish on every basis tuple.
    Vanishes { arity: usize },
    /// A nonzero entry of `m_arity`.
    Nonzero {
        arity: usize,
        tuple: Vec<usize>,
        value: Element,
    },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OrderResult {
    pub order: Order,
    pub cap: usize,
    pub witness: OrderWitness,
}

pub(crate) fn require_square_zero(delta: &LinearOperator) -> Result<()> {
    let sq = compose(delta, delta)?;
    let first = sq.images().next().map(|(i, img)| (i, img.clone()));
    match first {
        None => Ok(()),
        Some((i, img)) => Err(Error::NotSquareZero(format!(
            "delta^2({}) = {}",
            delta.basis().name(i),
            delta.basis().display(&img)
        ))),
    }
}

/// Least `n ≤ cap` with `m_{n+1} ≡ 0` (order 0 when Δ = 0).
///
/// Once the first vanishing arity is found, all higher arities up to
/// `cap + 1` are also checked to vanish.
pub fn associative_order(
    alg: &GradedAlgebra,
    delta: &LinearOperator,
    cap: usize,
) -> Result<OrderResult> {
    require_square_zero(delta)?;
    let ops = DeltaOperations::new(alg, delta)?;
    let mut found: Option<usize> = None;
    for arity in 1..=cap + 1 {
        let m = ops.tabulate(arity);
        match (found, m.first_nonzero()) {
            (None, None) => found = Some(arity - 1),
            (Some(order), Some((tuple, value))) => {
                return Err(Error::Precondition(format!(
                    "m_{} vanishes but m_{arity}{} = {} (order {order} is inconsistent)",
                    order + 1,
                    tuple_names(alg.basis(), &tuple),
                    alg.basis().display(&value)
                )));
            }
            _ => {}
        }
    }
    match found {
        Some(order) => Ok(OrderResult {
            order: Order::Finite(order),
            cap,
            witness: OrderWitness::Vanishes { arity: order + 1 },
        }),
        None => {
            let (tuple, value) = ops.tabulate(cap + 1).first_nonzero().expect("nonzero");
            Ok(OrderResult {
                order: Order::ExceedsCap,
                cap,
                witness: OrderWitness::Nonzero {
                    arity: cap + 1,
                    tuple,
                    value,
                },
            })
        }
    }
}

/// Checks `γ₂(id, m₂) = m₂(γ₂, id)` and `γ₂(m₂, id) = m₂(id, γ₂)` on every basis triple.
pub fn compat_check(alg: &GradedAlgebra, delta: &LinearOperator) -> Result<ValidationReport> {
    let ops = DeltaOperations::new(alg, delta)?;
    if let Some((t, v)) = ops.tabulate(3).first_nonzero() {
        return Err(Error::Precondition(format!(
            "associative order exceeds 2: m_3{} = {}",
            tuple_names(alg.basis(), &t),
            alg.basis().display(&v)
        )));
    }
    let basis = alg.basis().clone();
    let m2 = ops.tabulate(2);
    let gamma = MultiOp::tabulate(basis.clone(), 2, 0, |t| alg.multiply_indices(t));
    let mut report = ValidationReport::default();
    for t in all_tuples(alg.dim(), 3) {
        let args: Vec<Element> = t.iter().map(|&i| Element::basis(i)).collect();
        let lhs1 = gamma.eval(&apply_tensor_slot(2, 1, &m2, &args)?)?;
        let rhs1 = m2.eval(&apply_tensor_slot(2, 0, &gamma, &args)?)?;
        let lhs2 = gamma.eval(&apply_tensor_slot(2, 0, &m2, &args)?)?;
        let rhs2 = m2.eval(&apply_tensor_slot(2, 1, &gamma, &args)?)?;
        for (name, l, r) in [
            ("gamma2(id,m2)=m2(gamma2,id)", lhs1, rhs1),
            ("gamma2(m2,id)=m2(id,gamma2)", lhs2, rhs2),
        ] {
            let d = &l - &r;
            if !d.is_zero() {
                report.push(
                    "compatibility",
                    t.clone(),
                    Some(d.clone()),
                    format!(
                        "{name} fails on {}: difference {}",
                        tuple_names(&basis, &t),
                        basis.display(&d)
                    ),
                );
            }
        }
    }
    Ok(report)
}

/// Operations evaluated on cohomology class representatives, in class coordinates.
#[derive(Debug, Clone)]
pub struct InducedOperations {
    pub cohomology: CohomologyBasis,
    /// One basis vector `[rep]` per class, graded by the class degree.
    pub class_basis: Arc<GradedBasis>,
    pub ops: BTreeMap<usize, MultiOp>,
    /// Nonzero induced entries and values that were not cocycles.
    pub report: ValidationReport,
}

impl InducedOperations {
    pub fn is_trivial(&self) -> bool {
        self.report.is_ok()
    }
}

/// Evaluates `m_n` (2 ≤ n ≤ n_max) on the chosen class representatives and
/// projects every value to cohomology.
pub fn induced_on_cohomology(
    alg: &GradedAlgebra,
    delta: &LinearOperator,
    n_max: usize,
) -> Result<InducedOperations> {
    require_square_zero(delta)?;
    let ops = DeltaOperations::new(alg, delta)?;
    let h = operator_cohomology(delta)?;
    let basis = alg.basis();
    let class_basis =
        Arc::new(GradedBasis::new(h.classes().iter().map(|c| {
            (format!("[{}]", basis.display(&c.representative)), c.degree)
        }))?);
    let mut out = BTreeMap::new();
    let mut report = ValidationReport::default();
    for n in 2..=n_max {
        let mut table = MultiOp::zero(class_basis.clone(), n, delta.degree());
        for t in all_tuples(h.len(), n) {
            let args: Vec<Element> = t
                .iter()
                .map(|&i| h.classes()[i].representative.clone())
                .collect();
            let value = multilinear(&args, |b| ops.eval(b));
            match h.project(&value) {
                Ok(coords) => {
                    let induced = Element::from_dense(&coords);
                    if !induced.is_zero() {
                        report.push(
                            "induced_nonzero",
                            t.clone(),
                            Some(induced.clone()),
                            format!(
                                "m_{n}{} = {} in cohomology",
                                tuple_names(&class_basis, &t),
                                class_basis.display(&induced)
                            ),
                        );
                        table.set(t, induced)?;
                    }
                }
                Err(Error::NotClosed) => report.push(
                    "not_closed",
                    t.clone(),
                    Some(value.clone()),
                    format!(
                        "m_{n}{} = {} is not a cocycle",
                        tuple_names(&class_basis, &t),
                        basis.display(&value)
                    ),
                ),
                Err(e) => return Err(e),
            }
        }
        out.insert(n, table);
    }
    Ok(InducedOperations {
        cohomology: h,
        class_basis,
        ops: out,
        report,
    })
}

/// `L_ξ(a) = ξa`, of the same degree as `ξ`.
pub fn left_multiplication(alg: &GradedAlgebra, xi: &Element) -> Result<LinearOperator> {
    alg.basis().check_element(xi)?;
    let degree = alg
        .basis()
        .homogeneous_degree(xi)
        .ok_or(Error::Inhomogeneous)?;
    let images = (0..alg.dim()).map(|i| (i, alg.multiply(xi, &Element::basis(i))));
    LinearOperator::new(alg.basis().clone(), degree, images)
}

/// The structure `m_{𝓛,n}` (n ≤ n_max) of a degree +1 left-linear operator.
///
/// Left-linearity `𝓛(ab) = 𝓛(a)b` is checked on basis pairs, and `m_3` is
/// required to vanish.
pub fn left_action_structure(
    alg: &GradedAlgebra,
    action: &LinearOperator,
    n_max: usize,
) -> Result<AInfStructure> {
    if action.degree() != 1 {
        return Err(Error::DegreeMismatch(format!(
            "action of degree {}",
            action.degree()
        )));
    }
    let basis = alg.basis();
    for i in 0..alg.dim() {
        for j in 0..alg.dim() {
            let lhs = action.apply(&alg.multiply_indices(&[i, j]));
            let rhs = alg.multiply(&action.image(i), &Element::basis(j));
            if lhs != rhs {
                return Err(Error::LawViolated(format!(
                    "L({}*{}) = {} but L({})*{} = {}",
                    basis.name(i),
                    basis.name(j),
                    basis.display(&lhs),
                    basis.name(i),
                    basis.name(j),
                    basis.display(&rhs)
                )));
            }
        }
    }
    let mut s = AInfStructure::from_delta(alg, action, n_max.max(3))?;
    if let Some((t, v)) = s.op(3).and_then(MultiOp::first_nonzero) {
        return Err(Error::StasheffFailure(format!(
            "m_3{} = {} for a left action",
            tuple_names(basis, &t),
            basis.display(&v)
        )));
    }
    s.record("m3_vanishes", "true");
    Ok(s)
}

#[cfg(test)]
mod tests;
