//! Tabulated multilinear operations and Koszul-signed slot insertion.

use std::collections::BTreeMap;
use std::sync::Arc;

use crate::basis::{Element, GradedBasis};
use crate::error::{Error, Result};
use crate::sign::koszul_sign;

/// Homogeneous multilinear map of fixed arity and degree on one graded space.
/// Tuples absent from the table evaluate to zero.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiOp {
    arity: usize,
    degree: i64,
    basis: Arc<GradedBasis>,
    table: BTreeMap<Vec<usize>, Element>,
}

impl MultiOp {
    pub fn zero(basis: Arc<GradedBasis>, arity: usize, degree: i64) -> Self {
        MultiOp {
            arity,
            degree,
            basis,
            table: BTreeMap::new(),
        }
    }

    pub fn from_table(
        basis: Arc<GradedBasis>,
        arity: usize,
        degree: i64,
        entries: impl IntoIterator<Item = (Vec<usize>, Element)>,
    ) -> Result<Self> {
        let mut op = MultiOp::zero(basis, arity, degree);
        for (t, e) in entries {
            op.set(t, e)?;
        }
        Ok(op)
    }

    /// Tabulates `f` over every basis tuple of the given arity.
    pub fn tabulate(
        basis: Arc<GradedBasis>,
        arity: usize,
        degree: i64,
        mut f: impl FnMut(&[usize]) -> Element,
    ) -> Self {
        let mut op = MultiOp::zero(basis.clone(), arity, degree);
        for t in all_tuples(basis.dim(), arity) {
            let v = f(&t);
            if !v.is_zero() {
                op.table.insert(t, v);
            }
        }
        op
    }

    pub fn set(&mut self, tuple: Vec<usize>, value: Element) -> Result<()> {
        if tuple.len() != self.arity {
            return Err(Error::Precondition(format!(
                "tuple of length {} for arity {}",
                tuple.len(),
                self.arity
            )));
        }
        for &i in &tuple {
            if i >= self.basis.dim() {
                return Err(Error::IndexOutOfRange {
                    index: i,
                    dim: self.basis.dim(),
                });
            }
        }
        self.basis.check_element(&value)?;
        if value.is_zero() {
            self.table.remove(&tuple);
        } else {
            self.table.insert(tuple, value);
        }
        Ok(())
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn basis(&self) -> &Arc<GradedBasis> {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.table.is_empty()
    }

    pub fn nonzero_entries(&self) -> impl Iterator<Item = (&Vec<usize>, &Element)> + '_ {
        self.table.iter()
    }

    pub fn first_nonzero(&self) -> Option<(Vec<usize>, Element)> {
        self.table
            .iter()
            .next()
            .map(|(t, e)| (t.clone(), e.clone()))
    }

    pub fn eval_basis(&self, tuple: &[usize]) -> Element {
        self.table.get(tuple).cloned().unwrap_or_default()
    }

    /// Multilinear extension to arbitrary elements.
    pub fn eval(&self, args: &[Element]) -> Result<Element> {
        if args.len() != self.arity {
            return Err(Error::Precondition(format!(
                "{} arguments for arity {}",
                args.len(),
                self.arity
            )));
        }
        for a in args {
            self.basis.check_element(a)?;
        }
        Ok(multilinear(args, |t| self.eval_basis(t)))
    }

    /// Entries whose value is not homogeneous of degree `sum(inputs) + degree`.
    pub fn degree_violations(&self) -> Vec<(Vec<usize>, Element)> {
        self.table
            .iter()
            .filter(|(t, v)| {
                let d: i64 = t.iter().map(|&i| self.basis.degree(i)).sum::<i64>() + self.degree;
                v.iter().any(|(j, _)| self.basis.degree(j) != d)
            })
            .map(|(t, v)| (t.clone(), v.clone()))
            .collect()
    }

    pub fn sub(&self, other: &MultiOp) -> Result<MultiOp> {
        if self.arity != other.arity || !crate::operator::same_basis(&self.basis, &other.basis) {
            return Err(Error::BasisMismatch(
                "difference of incompatible operations".into(),
            ));
        }
        let mut out = self.clone();
        for (t, v) in &other.table {
            let new = &out.eval_basis(t) - v;
            out.set(t.clone(), new)?;
        }
        Ok(out)
    }
}

/// Expands `f` multilinearly over the basis decompositions of `args`.
pub fn multilinear(args: &[Element], mut f: impl FnMut(&[usize]) -> Element) -> Element {
    let mut out = Element::zero();
    let mut tuple = Vec::with_capacity(args.len());
    expand(args, &mut tuple, &crate::scalar::one(), &mut f, &mut out);
    out
}

fn expand(
    args: &[Element],
    tuple: &mut Vec<usize>,
    coeff: &crate::scalar::Scalar,
    f: &mut impl FnMut(&[usize]) -> Element,
    out: &mut Element,
) {
    match args.split_first() {
        None => out.add_scaled(coeff, &f(tuple)),
        Some((first, rest)) => {
            for (i, c) in first.iter() {
                tuple.push(i);
                expand(rest, tuple, &(coeff * c), f, out);
                tuple.pop();
            }
        }
    }
}

/// All tuples over `0..dim` of the given length, lexicographic.
pub fn all_tuples(dim: usize, len: usize) -> Vec<Vec<usize>> {
    let mut out = vec![Vec::with_capacity(len)];
    for _ in 0..len {
        let mut next = Vec::with_capacity(out.len() * dim);
        for t in &out {
            for i in 0..dim {
                let mut u = t.clone();
                u.push(i);
                next.push(u);
            }
        }
        out = next;
    }
    out
}

/// Evaluates `id^{⊗slot} ⊗ inner ⊗ id^{⊗rest}` on homogeneous arguments.
///
/// Returns the `outer_arity` resulting factors; the Koszul sign of `inner`
/// passing the first `slot` arguments is multiplied into the inner result.
pub fn apply_tensor_slot(
    outer_arity: usize,
    slot: usize,
    inner: &MultiOp,
    args: &[Element],
) -> Result<Vec<Element>> {
    let k = inner.arity();
    if args.len() + 1 != outer_arity + k || slot + k > args.len() {
        return Err(Error::Precondition(format!(
            "slot {slot} with inner arity {k} does not fit {} arguments into outer arity {outer_arity}",
            args.len()
        )));
    }
    let basis = inner.basis();
    let mut passed = Vec::with_capacity(slot);
    for a in args {
        basis.check_element(a)?;
        if !basis.is_homogeneous(a) {
            return Err(Error::Inhomogeneous);
        }
    }
    for a in &args[..slot] {
        // zero arguments make the whole tuple vanish; their degree is irrelevant
        passed.push(basis.homogeneous_degree(a).unwrap_or(0));
    }
    let sign = koszul_sign(inner.degree(), &passed);
    let value = inner.eval(&args[slot..slot + k])?.scaled(&sign);
    let mut out = Vec::with_capacity(outer_arity);
    out.extend_from_slice(&args[..slot]);
    out.push(value);
    out.extend_from_slice(&args[slot + k..]);
    Ok(out)
}
