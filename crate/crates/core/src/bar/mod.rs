//! The reduced tensor coalgebra on a shifted space, truncated at a word
//! length `L`, with the bar coderivation and the operations `t_k` on words.
//!
//! Every operation here preserves or lowers total letter count, so
//! identities checked on inputs of total length ≤ L are exact.

use std::collections::btree_map::Entry;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::sync::Arc;

use num_traits::Zero;

use crate::ainf::{stasheff_defect_at, AInfStructure, DeltaOperations, Mode, OperationFamily};
use crate::algebra::{GradedAlgebra, ValidationReport};
use crate::basis::{Element, GradedBasis};
use crate::error::{Error, Result};
use crate::multiop::MultiOp;
use crate::operator::LinearOperator;
use crate::scalar::{format_scalar, is_negative, Scalar};
use crate::sign::koszul_sign;

/// A nonempty tensor word `v1 ⊗ … ⊗ vn` of basis letters.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<usize>);

impl Word {
    pub fn new(letters: Vec<usize>) -> Result<Self> {
        if letters.is_empty() {
            return Err(Error::Precondition("empty word".into()));
        }
        Ok(Word(letters))
    }

    pub fn letter(i: usize) -> Self {
        Word(vec![i])
    }

    pub fn letters(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn degree(&self, basis: &GradedBasis) -> i64 {
        self.0.iter().map(|&i| basis.degree(i)).sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn display(&self, basis: &GradedBasis) -> String {
        self.0
            .iter()
            .map(|&i| basis.name(i))
            .collect::<Vec<_>>()
            .join("|")
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|i| i.to_string()).collect();
        write!(f, "{}", parts.join("|"))
    }
}

/// Reduced coproduct: every split into two nonempty words.
pub fn coproduct(w: &Word) -> Vec<(Word, Word)> {
    (1..w.len())
        .map(|i| (Word(w.0[..i].to_vec()), Word(w.0[i..].to_vec())))
        .collect()
}

/// Finite combination of words, none longer than `max_length`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TensorElement {
    coeffs: BTreeMap<Word, Scalar>,
    max_length: usize,
}

impl TensorElement {
    pub fn zero(max_length: usize) -> Self {
        TensorElement {
            coeffs: BTreeMap::new(),
            max_length,
        }
    }

    pub fn word(w: Word, max_length: usize) -> Result<Self> {
        let mut t = TensorElement::zero(max_length);
        t.add_term(w, Scalar::from_integer(1.into()))?;
        Ok(t)
    }

    pub fn max_length(&self) -> usize {
        self.max_length
    }

    pub fn add_term(&mut self, w: Word, c: Scalar) -> Result<()> {
        if w.len() > self.max_length {
            return Err(Error::TruncationOverflow(format!(
                "word of length {} exceeds {}",
                w.len(),
                self.max_length
            )));
        }
        if c.is_zero() {
            return Ok(());
        }
        match self.coeffs.entry(w) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
        Ok(())
    }

    pub fn add_scaled(&mut self, c: &Scalar, other: &TensorElement) -> Result<()> {
        for (w, v) in &other.coeffs {
            self.add_term(w.clone(), c * v)?;
        }
        Ok(())
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, w: &Word) -> Scalar {
        self.coeffs.get(w).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, &Scalar)> + '_ {
        self.coeffs.iter()
    }

    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Difference, ignoring the truncation bounds.
    pub fn minus(&self, other: &TensorElement) -> TensorElement {
        let mut out = TensorElement::zero(self.max_length.max(other.max_length));
        for (w, c) in self.terms() {
            out.add_term(w.clone(), c.clone()).expect("within bound");
        }
        for (w, c) in other.terms() {
            out.add_term(w.clone(), -c.clone()).expect("within bound");
        }
        out
    }

    pub fn display(&self, basis: &GradedBasis) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut s = String::new();
        for (k, (w, c)) in self.coeffs.iter().enumerate() {
            let neg = is_negative(c);
            let mag = if neg { -c.clone() } else { c.clone() };
            match (k, neg) {
                (0, true) => s.push('-'),
                (0, false) => {}
                (_, true) => s.push_str(" - "),
                (_, false) => s.push_str(" + "),
            }
            if mag != Scalar::from_integer(1.into()) {
                s.push_str(&format_scalar(&mag));
                s.push('*');
            }
            s.push_str(&w.display(basis));
        }
        s
    }
}

/// A family `m_1, …, m_N` of degree +1 operations on a shifted space,
/// verified to satisfy every Stasheff identity it can take part in.
#[derive(Debug, Clone)]
pub struct BarInput {
    ops: AInfStructure,
}

impl BarInput {
    /// Checks the Stasheff identities up to arity `2N − 1`; beyond that
    /// every term contains an operation of arity above `N`.
    pub fn new(ops: AInfStructure) -> Result<Self> {
        if ops.mode() != Mode::Cohomological {
            return Err(Error::DegreeMismatch(
                "bar input needs degree +1 operations".into(),
            ));
        }
        let bound = 2 * ops.max_arity() - 1;
        if let Some((n, t, d)) = ops.first_stasheff_failure(bound) {
            let b = ops.basis();
            return Err(Error::StasheffFailure(format!(
                "arity {n} on {}: {}",
                crate::algebra::tuple_names(b, &t),
                b.display(&d)
            )));
        }
        Ok(BarInput { ops })
    }

    /// No Stasheff check; for exercising the coderivation on broken data.
    pub fn unchecked(ops: AInfStructure) -> Self {
        BarInput { ops }
    }

    pub fn space(&self) -> &Arc<GradedBasis> {
        self.ops.basis()
    }

    pub fn ops(&self) -> &AInfStructure {
        &self.ops
    }

    pub fn max_arity(&self) -> usize {
        self.ops.max_arity()
    }

    fn m(&self, block: &[usize]) -> Element {
        self.ops.eval_basis(block.len(), block)
    }

    /// Adds `sign · prefix ⊗ m(block) ⊗ suffix` to `out`.
    fn contract(
        &self,
        prefix: &[usize],
        block: &[usize],
        suffix: &[usize],
        out: &mut TensorElement,
    ) -> Result<()> {
        let value = self.m(block);
        if value.is_zero() {
            return Ok(());
        }
        let passed: Vec<i64> = prefix.iter().map(|&i| self.space().degree(i)).collect();
        let sign = koszul_sign(1, &passed);
        for (b, c) in value.iter() {
            let mut letters = Vec::with_capacity(prefix.len() + 1 + suffix.len());
            letters.extend_from_slice(prefix);
            letters.push(b);
            letters.extend_from_slice(suffix);
            out.add_term(Word(letters), &sign * c)?;
        }
        Ok(())
    }
}

/// `m_2(x, y) = (−1)^{|x|} xy` on the space shifted down by one, with `m_1`
/// the shifted Δ when the algebra has one.
pub fn shift_strict(alg: &GradedAlgebra) -> Result<BarInput> {
    let basis = Arc::new(alg.basis().shifted(-1));
    let m1 = match alg.delta() {
        Some(d) => MultiOp::tabulate(basis.clone(), 1, 1, |t| d.image(t[0])),
        None => MultiOp::zero(basis.clone(), 1, 1),
    };
    let m2 = MultiOp::tabulate(basis.clone(), 2, 1, |t| {
        alg.multiply_indices(t)
            .scaled(&koszul_sign(basis.degree(t[0]), &[1]))
    });
    let ops = AInfStructure::new([m1, m2], Mode::Cohomological)?;
    if let Some((n, t, d)) = ops.first_stasheff_failure(3) {
        return Err(Error::StasheffFailure(format!(
            "shifted structure fails at arity {n} on {}: {}",
            crate::algebra::tuple_names(&basis, &t),
            basis.display(&d)
        )));
    }
    BarInput::new(ops)
}

/// `Σ_{i,j} (−1)^{|v1|+…+|vj|} v1⊗…⊗vj ⊗ m_i(v_{j+1},…,v_{j+i}) ⊗ …`.
pub fn bar_coderivation(inp: &BarInput, t: &TensorElement) -> Result<TensorElement> {
    let mut out = TensorElement::zero(t.max_length());
    for (w, c) in t.terms() {
        let mut part = TensorElement::zero(t.max_length());
        let v = w.letters();
        let n = v.len();
        for i in 1..=n.min(inp.max_arity()) {
            for j in 0..=n - i {
                inp.contract(&v[..j], &v[j..j + i], &v[j + i..], &mut part)?;
            }
        }
        out.add_scaled(c, &part)?;
    }
    Ok(out)
}

/// `t_k(w_1, …, w_k)` on words of total length ≤ `max_length`.
///
/// For k ≥ 2 only blocks touching both the first and the last word are
/// contracted, and they swallow every middle word.
pub fn t_op(inp: &BarInput, factors: &[Word], max_length: usize) -> Result<TensorElement> {
    let total: usize = factors.iter().map(Word::len).sum();
    if total > max_length {
        return Err(Error::TruncationOverflow(format!(
            "{total} letters exceed {max_length}"
        )));
    }
    let k = factors.len();
    match k {
        0 => Err(Error::Precondition("t_0 is not defined".into())),
        1 => bar_coderivation(inp, &TensorElement::word(factors[0].clone(), max_length)?),
        _ => {
            let first = factors[0].letters();
            let last = factors[k - 1].letters();
            let mut all: Vec<usize> = Vec::with_capacity(total);
            for f in factors {
                all.extend_from_slice(f.letters());
            }
            let mut out = TensorElement::zero(max_length);
            for i in 0..first.len() {
                for j in 0..last.len() {
                    let start = i;
                    let end = total - j;
                    if end - start > inp.max_arity() {
                        continue;
                    }
                    inp.contract(&all[..start], &all[start..end], &all[end..], &mut out)?;
                }
            }
            Ok(out)
        }
    }
}

/// The displayed strict product
/// `(−1)^{|v1|+…+|v_{n−1}|} v1⊗…⊗v_{n−1} ⊗ m_2(v_n, w_1) ⊗ w_2⊗…⊗w_m`.
pub fn strict_t2(inp: &BarInput, v: &Word, w: &Word, max_length: usize) -> Result<TensorElement> {
    let mut out = TensorElement::zero(max_length);
    let (a, b) = (v.letters(), w.letters());
    let n = a.len();
    inp.contract(&a[..n - 1], &[a[n - 1], b[0]], &b[1..], &mut out)?;
    Ok(out)
}

/// Words of length ≤ L over a graded space, as a graded algebra under
/// concatenation (products overflowing L are zero).
#[derive(Debug, Clone)]
pub struct TruncatedTensorAlgebra {
    words: Vec<Word>,
    index: HashMap<Word, usize>,
    max_length: usize,
    algebra: GradedAlgebra,
}

impl TruncatedTensorAlgebra {
    pub fn new(space: &GradedBasis, max_length: usize) -> Result<Self> {
        let mut words: Vec<Word> = Vec::new();
        let mut layer: Vec<Word> = (0..space.dim()).map(Word::letter).collect();
        for _ in 0..max_length {
            words.extend(layer.iter().cloned());
            layer = layer
                .iter()
                .flat_map(|w| (0..space.dim()).map(move |i| w.concat(&Word::letter(i))))
                .collect();
        }
        let index: HashMap<Word, usize> = words
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, w)| (w, i))
            .collect();
        let basis = Arc::new(GradedBasis::new(
            words.iter().map(|w| (w.display(space), w.degree(space))),
        )?);
        let mut products = Vec::new();
        for (i, u) in words.iter().enumerate() {
            for (j, v) in words.iter().enumerate() {
                if u.len() + v.len() <= max_length {
                    products.push(((i, j), Element::basis(index[&u.concat(v)])));
                }
            }
        }
        let algebra = GradedAlgebra::new(format!("T_{max_length}"), basis, products)?;
        Ok(TruncatedTensorAlgebra {
            words,
            index,
            max_length,
            algebra,
        })
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.algebra
    }

    pub fn word(&self, i: usize) -> &Word {
        &self.words[i]
    }

    pub fn index_of(&self, w: &Word) -> Option<usize> {
        self.index.get(w).copied()
    }

    pub fn to_element(&self, t: &TensorElement) -> Result<Element> {
        let mut out = Element::zero();
        for (w, c) in t.terms() {
            let i = self
                .index_of(w)
                .ok_or_else(|| Error::TruncationOverflow(format!("word of length {}", w.len())))?;
            out.add_term(i, c.clone());
        }
        Ok(out)
    }

    pub fn from_element(&self, x: &Element) -> TensorElement {
        let mut out = TensorElement::zero(self.max_length);
        for (i, c) in x.iter() {
            out.add_term(self.words[i].clone(), c.clone())
                .expect("basis words fit");
        }
        out
    }

    /// The bar coderivation as an operator on the word basis.
    pub fn coderivation(&self, inp: &BarInput) -> Result<LinearOperator> {
        let mut images = Vec::with_capacity(self.words.len());
        for (i, w) in self.words.iter().enumerate() {
            let d = bar_coderivation(inp, &TensorElement::word(w.clone(), self.max_length)?)?;
            images.push((i, self.to_element(&d)?));
        }
        LinearOperator::new(self.algebra.basis().clone(), 1, images)
    }

    /// Every k-tuple of words with total length ≤ L, as word indices.
    pub fn tuples(&self, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::with_capacity(k);
        self.tuples_rec(k, self.max_length, &mut cur, &mut out);
        out
    }

    fn tuples_rec(&self, k: usize, budget: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        let remaining = k - cur.len() - 1;
        for (i, w) in self.words.iter().enumerate() {
            if w.len() + remaining <= budget {
                cur.push(i);
                self.tuples_rec(k, budget - w.len(), cur, out);
                cur.pop();
            }
        }
    }
}

/// The operations `t_k` on the word basis of a truncated tensor algebra.
pub struct TOperations<'a> {
    inp: &'a BarInput,
    tensor: &'a TruncatedTensorAlgebra,
}

impl<'a> TOperations<'a> {
    pub fn new(inp: &'a BarInput, tensor: &'a TruncatedTensorAlgebra) -> Self {
        TOperations { inp, tensor }
    }
}

impl OperationFamily for TOperations<'_> {
    fn basis(&self) -> &Arc<GradedBasis> {
        self.tensor.algebra.basis()
    }

    fn degree(&self, _arity: usize) -> i64 {
        1
    }

    fn eval_basis(&self, _arity: usize, tuple: &[usize]) -> Element {
        let words: Vec<Word> = tuple
            .iter()
            .map(|&i| self.tensor.words[i].clone())
            .collect();
        let t = t_op(self.inp, &words, self.tensor.max_length).expect("within truncation");
        self.tensor.to_element(&t).expect("within truncation")
    }
}

fn word_tuple_names(tensor: &TruncatedTensorAlgebra, t: &[usize]) -> String {
    crate::algebra::tuple_names(tensor.algebra.basis(), t)
}

/// Compares `t_k` with `m_{D,k}` of the truncated tensor algebra, `D` the
/// bar coderivation, on every tuple of total length ≤ L, k ≤ k_max.
pub fn tk_equals_construction(
    inp: &BarInput,
    max_length: usize,
    k_max: usize,
) -> Result<ValidationReport> {
    let tensor = TruncatedTensorAlgebra::new(inp.space(), max_length)?;
    let d = tensor.coderivation(inp)?;
    let construction = DeltaOperations::new(&tensor.algebra, &d)?;
    let t = TOperations::new(inp, &tensor);
    let basis = tensor.algebra.basis();
    let mut report = ValidationReport::default();
    for k in 1..=k_max {
        for tuple in tensor.tuples(k) {
            let lhs = construction.eval(&tuple);
            let rhs = t.eval_basis(k, &tuple);
            if lhs != rhs {
                let diff = &lhs - &rhs;
                report.push(
                    "tk_mismatch",
                    tuple.clone(),
                    Some(diff.clone()),
                    format!(
                        "t_{k}{} differs from the construction by {}",
                        word_tuple_names(&tensor, &tuple),
                        basis.display(&diff)
                    ),
                );
            }
        }
    }
    Ok(report)
}

/// `D²` on every word of length ≤ L.
pub fn coderivation_square_report(inp: &BarInput, max_length: usize) -> Result<ValidationReport> {
    let tensor = TruncatedTensorAlgebra::new(inp.space(), max_length)?;
    let mut report = ValidationReport::default();
    for (i, w) in tensor.words.iter().enumerate() {
        let once = bar_coderivation(inp, &TensorElement::word(w.clone(), max_length)?)?;
        let twice = bar_coderivation(inp, &once)?;
        if !twice.is_zero() {
            report.push(
                "coderivation_square",
                vec![i],
                Some(tensor.to_element(&twice)?),
                format!(
                    "D^2({}) = {}",
                    w.display(inp.space()),
                    twice.display(inp.space())
                ),
            );
        }
    }
    Ok(report)
}

/// Stasheff identities of `{t_k}` on word tuples of total length ≤ L, arity ≤ k_max.
pub fn t_stasheff_report(
    inp: &BarInput,
    max_length: usize,
    k_max: usize,
) -> Result<ValidationReport> {
    let tensor = TruncatedTensorAlgebra::new(inp.space(), max_length)?;
    let t = TOperations::new(inp, &tensor);
    let mut report = ValidationReport::default();
    for k in 1..=k_max {
        for tuple in tensor.tuples(k) {
            let d = stasheff_defect_at(&t, &tuple);
            if !d.is_zero() {
                report.push(
                    "t_stasheff",
                    tuple.clone(),
                    Some(d.clone()),
                    format!(
                        "arity {k} on {}: {}",
                        word_tuple_names(&tensor, &tuple),
                        tensor.algebra.basis().display(&d)
                    ),
                );
            }
        }
    }
    Ok(report)
}

/// For inputs with `m_i = 0` (i ≥ 3): `t_k = 0` for k ≥ 3, `t_2` equals the
/// displayed strict product, and `t_2` is compatible with concatenation:
/// `(−1)^{|u|} u·t_2(v, w) = t_2(uv, w)` and `t_2(u, v)·w = t_2(u, vw)`.
pub fn strict_collapse_report(
    inp: &BarInput,
    max_length: usize,
    k_max: usize,
) -> Result<ValidationReport> {
    if inp.max_arity() > 2
        && (3..=inp.max_arity()).any(|k| inp.ops.op(k).is_some_and(|m| !m.is_zero()))
    {
        return Err(Error::Precondition("input is not strict".into()));
    }
    let tensor = TruncatedTensorAlgebra::new(inp.space(), max_length)?;
    let space = inp.space();
    let basis = tensor.algebra.basis();
    let mut report = ValidationReport::default();
    let words = |t: &[usize]| -> Vec<Word> { t.iter().map(|&i| tensor.words[i].clone()).collect() };
    for k in 3..=k_max {
        for tuple in tensor.tuples(k) {
            let v = t_op(inp, &words(&tuple), max_length)?;
            if !v.is_zero() {
                report.push(
                    "strict_tk",
                    tuple.clone(),
                    Some(tensor.to_element(&v)?),
                    format!(
                        "t_{k}{} = {}",
                        word_tuple_names(&tensor, &tuple),
                        v.display(space)
                    ),
                );
            }
        }
    }
    for tuple in tensor.tuples(2) {
        let ws = words(&tuple);
        let general = t_op(inp, &ws, max_length)?;
        let displayed = strict_t2(inp, &ws[0], &ws[1], max_length)?;
        if general != displayed {
            let d = general.minus(&displayed);
            report.push(
                "strict_t2",
                tuple.clone(),
                Some(tensor.to_element(&d)?),
                format!(
                    "t_2{} differs from the strict formula by {}",
                    word_tuple_names(&tensor, &tuple),
                    d.display(space)
                ),
            );
        }
    }
    let alg = &tensor.algebra;
    for tuple in tensor.tuples(3) {
        let ws = words(&tuple);
        let (u, v, w) = (&ws[0], &ws[1], &ws[2]);
        let sign = koszul_sign(1, &[u.degree(space)]);
        let left1 = alg
            .multiply(
                &Element::basis(tuple[0]),
                &tensor.to_element(&t_op(inp, &[v.clone(), w.clone()], max_length)?)?,
            )
            .scaled(&sign);
        let right1 = tensor.to_element(&t_op(inp, &[u.concat(v), w.clone()], max_length)?)?;
        let left2 = alg.multiply(
            &tensor.to_element(&t_op(inp, &[u.clone(), v.clone()], max_length)?)?,
            &Element::basis(tuple[2]),
        );
        let right2 = tensor.to_element(&t_op(inp, &[u.clone(), v.concat(w)], max_length)?)?;
        for (name, l, r) in [("left", left1, right1), ("right", left2, right2)] {
            if l != r {
                let d = &l - &r;
                report.push(
                    "strict_concat",
                    tuple.clone(),
                    Some(d.clone()),
                    format!(
                        "{name} concatenation compatibility fails on {}: {}",
                        word_tuple_names(&tensor, &tuple),
                        basis.display(&d)
                    ),
                );
            }
        }
    }
    Ok(report)
}

/// Shifted space `x:0, y:1` with `m_3(x, x, x) = y` and all else zero.
pub fn m3_fixture() -> BarInput {
    let basis = Arc::new(GradedBasis::new([("x", 0), ("y", 1)]).expect("distinct names"));
    let m1 = MultiOp::zero(basis.clone(), 1, 1);
    let m2 = MultiOp::zero(basis.clone(), 2, 1);
    let m3 =
        MultiOp::from_table(basis, 3, 1, [(vec![0, 0, 0], Element::basis(1))]).expect("in range");
    BarInput::new(AInfStructure::new([m1, m2, m3], Mode::Cohomological).expect("consistent"))
        .expect("A-infinity")
}

/// `u:0, v:1, w:2` with `m_1 u = v`, `m_1 v = w`: fails the arity-1 identity.
pub fn broken_bar_input() -> BarInput {
    let basis = Arc::new(GradedBasis::new([("u", 0), ("v", 1), ("w", 2)]).expect("distinct names"));
    let m1 = MultiOp::from_table(
        basis,
        1,
        1,
        [(vec![0], Element::basis(1)), (vec![1], Element::basis(2))],
    )
    .expect("in range");
    BarInput::unchecked(AInfStructure::new([m1], Mode::Cohomological).expect("consistent"))
}
