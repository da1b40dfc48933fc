use std::collections::BTreeMap;
use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::basis::{Element, GradedBasis};
use crate::error::{Error, Result};
use crate::multiop::MultiOp;
use crate::operator::{same_basis, LinearOperator};

use super::family::{stasheff_defect_at, DeltaOperations, OperationFamily};

/// Cohomological structures have every operation of degree +1, homological ones −1.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Cohomological,
    Homological,
}

impl Mode {
    pub fn degree(self) -> i64 {
        match self {
            Mode::Cohomological => 1,
            Mode::Homological => -1,
        }
    }
}

/// Operations `m_1, …, m_N` on one graded space, plus a record of what has
/// been verified about them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AInfStructure {
    basis: Arc<GradedBasis>,
    ops: BTreeMap<usize, MultiOp>,
    mode: Mode,
    ledger: Vec<(String, String)>,
}

impl AInfStructure {
    pub fn new(ops: impl IntoIterator<Item = MultiOp>, mode: Mode) -> Result<Self> {
        let mut map = BTreeMap::new();
        let mut basis: Option<Arc<GradedBasis>> = None;
        for op in ops {
            if op.degree() != mode.degree() {
                return Err(Error::DegreeMismatch(format!(
                    "m_{} has degree {}, expected {}",
                    op.arity(),
                    op.degree(),
                    mode.degree()
                )));
            }
            match &basis {
                None => basis = Some(op.basis().clone()),
                Some(b) if !same_basis(b, op.basis()) => {
                    return Err(Error::BasisMismatch(
                        "operations on different spaces".into(),
                    ))
                }
                _ => {}
            }
            if let Some((t, v)) = op.degree_violations().into_iter().next() {
                return Err(Error::DegreeMismatch(format!(
                    "m_{} on {:?} gives inhomogeneous or wrongly graded {}",
                    op.arity(),
                    t,
                    op.basis().display(&v)
                )));
            }
            if map.insert(op.arity(), op).is_some() {
                return Err(Error::Precondition("duplicate arity".into()));
            }
        }
        let basis = basis.ok_or(Error::MissingArity(1))?;
        if !map.contains_key(&1) {
            return Err(Error::MissingArity(1));
        }
        Ok(AInfStructure {
            basis,
            ops: map,
            mode,
            ledger: Vec::new(),
        })
    }

    /// `m_{Δ,1}, …, m_{Δ,n_max}` of an algebra with a degree ±1 operator.
    pub fn from_delta(alg: &GradedAlgebra, delta: &LinearOperator, n_max: usize) -> Result<Self> {
        let mode = match delta.degree() {
            1 => Mode::Cohomological,
            -1 => Mode::Homological,
            d => return Err(Error::DegreeMismatch(format!("delta of degree {d}"))),
        };
        let fam = DeltaOperations::new(alg, delta)?;
        AInfStructure::new((1..=n_max).map(|n| fam.tabulate(n)), mode)
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn mode(&self) -> Mode {
        self.mode
    }

    pub fn op(&self, arity: usize) -> Option<&MultiOp> {
        self.ops.get(&arity)
    }

    pub fn max_arity(&self) -> usize {
        self.ops.keys().next_back().copied().unwrap_or(0)
    }

    pub fn ops(&self) -> impl Iterator<Item = &MultiOp> + '_ {
        self.ops.values()
    }

    /// Replaces one operation, keeping degree and basis consistent.
    pub fn with_op(&self, op: MultiOp) -> Result<Self> {
        let mut ops: Vec<MultiOp> = self
            .ops
            .values()
            .filter(|o| o.arity() != op.arity())
            .cloned()
            .collect();
        ops.push(op);
        let mut s = AInfStructure::new(ops, self.mode)?;
        s.ledger.clone_from(&self.ledger);
        Ok(s)
    }

    pub fn ledger(&self) -> &[(String, String)] {
        &self.ledger
    }

    pub fn record(&mut self, key: impl Into<String>, value: impl Into<String>) {
        self.ledger.push((key.into(), value.into()));
    }

    /// First arity `n ≤ n_max` and basis tuple where the Stasheff sum is nonzero.
    pub fn first_stasheff_failure(&self, n_max: usize) -> Option<(usize, Vec<usize>, Element)> {
        for n in 1..=n_max {
            for t in crate::multiop::all_tuples(self.basis.dim(), n) {
                let d = stasheff_defect_at(self, &t);
                if !d.is_zero() {
                    return Some((n, t, d));
                }
            }
        }
        None
    }
}

impl OperationFamily for AInfStructure {
    fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    fn degree(&self, _arity: usize) -> i64 {
        self.mode.degree()
    }

    fn eval_basis(&self, arity: usize, tuple: &[usize]) -> Element {
        self.ops
            .get(&arity)
            .map(|op| op.eval_basis(tuple))
            .unwrap_or_default()
    }
}
