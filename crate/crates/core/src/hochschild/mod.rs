//! Hochschild cochains `C^n(A, A) = Hom(A^{⊗n}, A)` of a finite-dimensional
//! algebra concentrated in degree 0, with the coboundary, cup product,
//! Gerstenhaber bracket and, for a Frobenius pairing, the cochain-level
//! Connes operator.
//!
//! ```text
//! (δf)(a1..a_{n+1}) = a1 f(a2..) + Σ_{i=1}^{n} (−1)^i f(.., a_i a_{i+1}, ..) + (−1)^{n+1} f(a1..an) a_{n+1}
//! (f⌣g)(a1..a_{m+n}) = f(a1..am) g(a_{m+1}..)
//! f∘g = Σ_{i=1}^{m} (−1)^{(i−1)(n−1)} f(a1.., g(a_i..a_{i+n−1}), ..)
//! [f,g] = f∘g − (−1)^{(m−1)(n−1)} g∘f
//! ⟨Δf(a1..a_{n−1}), a_n⟩ = Σ_{i=1}^{n} (−1)^{i(n−1)} ⟨f(a_i..a_n, a_1..a_{i−1}), 1⟩
//! ```

mod checks;
mod complex;

pub use checks::{
    bv_identity_on_hh, check_connes_chain_map, hochschild_ainf_structure, BvOutcome,
    ChainMapOutcome, DegreeReading, HochschildAInf, HochschildGrading, M2Comparison,
};
pub use complex::{hh_cohomology, hh_cohomology_normalized, unit_index, CochainSpace, HHBasis};

use std::collections::BTreeMap;
use std::sync::Arc;

use num_traits::{One, Zero};

use crate::algebra::GradedAlgebra;
use crate::basis::{Element, GradedBasis};
use crate::error::{Error, Result};
use crate::linalg::invert;
use crate::random::Rng;
use crate::scalar::Scalar;

fn sign(odd: bool) -> Scalar {
    if odd {
        -Scalar::one()
    } else {
        Scalar::one()
    }
}

/// A multilinear map `A^{⊗n} → A`, stored densely over basis tuples in
/// lexicographic order. `C^0` holds a single element.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Cochain {
    degree: usize,
    dim: usize,
    values: Vec<Element>,
}

impl Cochain {
    pub fn zero(dim: usize, degree: usize) -> Self {
        Cochain {
            degree,
            dim,
            values: vec![Element::zero(); dim.pow(degree as u32)],
        }
    }

    pub fn from_fn(dim: usize, degree: usize, mut f: impl FnMut(&[usize]) -> Element) -> Self {
        let mut c = Cochain::zero(dim, degree);
        for idx in 0..c.values.len() {
            let t = c.tuple_of(idx);
            c.values[idx] = f(&t);
        }
        c
    }

    /// The 0-cochain given by an element.
    pub fn element(dim: usize, x: Element) -> Self {
        Cochain {
            degree: 0,
            dim,
            values: vec![x],
        }
    }

    pub fn identity(dim: usize) -> Self {
        Cochain::from_fn(dim, 1, |t| Element::basis(t[0]))
    }

    /// `μ(a, b) = ab`.
    pub fn multiplication(alg: &GradedAlgebra) -> Self {
        Cochain::from_fn(alg.dim(), 2, |t| alg.multiply_indices(t))
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn index_of(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &a| acc * self.dim + a)
    }

    pub fn tuple_of(&self, mut idx: usize) -> Vec<usize> {
        let mut t = vec![0; self.degree];
        for slot in t.iter_mut().rev() {
            *slot = idx % self.dim;
            idx /= self.dim;
        }
        t
    }

    pub fn value(&self, tuple: &[usize]) -> &Element {
        &self.values[self.index_of(tuple)]
    }

    pub fn value_at(&self, idx: usize) -> &Element {
        &self.values[idx]
    }

    pub fn set(&mut self, tuple: &[usize], x: Element) {
        let i = self.index_of(tuple);
        self.values[i] = x;
    }

    /// Whether `f` vanishes as soon as one argument is the basis vector `unit`.
    pub fn is_normalized(&self, unit: usize) -> bool {
        self.nonzero()
            .all(|(t, _)| !self.tuple_of(t).contains(&unit))
    }

    pub fn is_zero(&self) -> bool {
        self.values.iter().all(Element::is_zero)
    }

    pub fn nonzero(&self) -> impl Iterator<Item = (usize, &Element)> + '_ {
        self.values.iter().enumerate().filter(|(_, v)| !v.is_zero())
    }

    pub fn scaled(&self, c: &Scalar) -> Cochain {
        Cochain {
            degree: self.degree,
            dim: self.dim,
            values: self.values.iter().map(|v| v.scaled(c)).collect(),
        }
    }

    fn check_same_shape(&self, other: &Cochain) -> Result<()> {
        if self.degree != other.degree || self.dim != other.dim {
            return Err(Error::DegreeMismatch(format!(
                "cochains of degree {} and {}",
                self.degree, other.degree
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Cochain) -> Result<Cochain> {
        self.check_same_shape(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| a + b)
            .collect();
        Ok(Cochain {
            degree: self.degree,
            dim: self.dim,
            values,
        })
    }

    pub fn sub(&self, other: &Cochain) -> Result<Cochain> {
        self.add(&other.scaled(&-Scalar::one()))
    }

    /// Evaluation with one slot holding an arbitrary element.
    fn eval_with_slot(&self, tuple: &mut [usize], slot: usize, x: &Element) -> Element {
        let mut out = Element::zero();
        for (k, c) in x.iter() {
            tuple[slot] = k;
            out.add_scaled(c, self.value(tuple));
        }
        out
    }

    pub fn display(&self, alg: &GradedAlgebra) -> String {
        let b = alg.basis();
        let parts: Vec<String> = self
            .nonzero()
            .map(|(i, v)| {
                let t: Vec<&str> = self.tuple_of(i).iter().map(|&a| b.name(a)).collect();
                format!("({}) -> {}", t.join(","), b.display(v))
            })
            .collect();
        if parts.is_empty() {
            "0".into()
        } else {
            parts.join("; ")
        }
    }
}

/// Random cochain with small integer values.
pub fn random_cochain(rng: &mut Rng, dim: usize, degree: usize) -> Cochain {
    Cochain::from_fn(dim, degree, |_| {
        if rng.chance(0.5) {
            rng.random_element(dim)
        } else {
            Element::zero()
        }
    })
}

/// Random cochain vanishing whenever an argument is the basis vector `unit`.
pub fn random_normalized_cochain(rng: &mut Rng, dim: usize, degree: usize, unit: usize) -> Cochain {
    Cochain::from_fn(dim, degree, |t| {
        if !t.contains(&unit) && rng.chance(0.5) {
            rng.random_element(dim)
        } else {
            Element::zero()
        }
    })
}

fn require_ungraded(alg: &GradedAlgebra) -> Result<()> {
    if (0..alg.dim()).any(|i| alg.degree(i) != 0) {
        return Err(Error::Precondition(
            "Hochschild cochains need an algebra in degree 0".into(),
        ));
    }
    Ok(())
}

fn check_dim(alg: &GradedAlgebra, f: &Cochain) -> Result<()> {
    if f.dim != alg.dim() {
        return Err(Error::BasisMismatch(format!(
            "cochain on dimension {} for algebra of dimension {}",
            f.dim,
            alg.dim()
        )));
    }
    Ok(())
}

/// `(b, c, λ)` with `λ` the coefficient of `e_k` in `e_b e_c`, per `k`.
fn product_preimages(alg: &GradedAlgebra) -> Vec<Vec<(usize, usize, Scalar)>> {
    let mut pre = vec![Vec::new(); alg.dim()];
    for ((b, c), p) in alg.products() {
        for (k, l) in p.iter() {
            pre[k].push((b, c, l.clone()));
        }
    }
    pre
}

/// Scatters each nonzero value of `f` into the entries of `δf` it feeds.
pub fn hochschild_delta(alg: &GradedAlgebra, f: &Cochain) -> Result<Cochain> {
    check_dim(alg, f)?;
    let n = f.degree;
    let d = alg.dim();
    let pre = product_preimages(alg);
    let mut out = Cochain::zero(d, n + 1);
    let block = d.pow(n as u32);
    let last_sign = sign((n + 1) % 2 == 1);
    let mut tuple = vec![0usize; n + 1];
    for (idx, v) in f.nonzero() {
        let t = f.tuple_of(idx);
        for a in 0..d {
            let left = alg.multiply(&Element::basis(a), v);
            if !left.is_zero() {
                out.values[a * block + idx] += &left;
            }
            let right = alg.multiply(v, &Element::basis(a));
            if !right.is_zero() {
                out.values[idx * d + a].add_scaled(&last_sign, &right);
            }
        }
        for slot in 0..n {
            // a_i a_{i+1} sits in slot i−1, with sign (−1)^i
            let s = sign((slot + 1) % 2 == 1);
            tuple[..slot].copy_from_slice(&t[..slot]);
            tuple[slot + 2..].copy_from_slice(&t[slot + 1..]);
            for (b, c, l) in &pre[t[slot]] {
                tuple[slot] = *b;
                tuple[slot + 1] = *c;
                let j = out.index_of(&tuple);
                out.values[j].add_scaled(&(&s * l), v);
            }
        }
    }
    Ok(out)
}

pub fn cup(alg: &GradedAlgebra, f: &Cochain, g: &Cochain) -> Result<Cochain> {
    check_dim(alg, f)?;
    check_dim(alg, g)?;
    let d = alg.dim();
    let mut out = Cochain::zero(d, f.degree + g.degree);
    let gl = g.values.len();
    for (i, fv) in f.nonzero() {
        for (j, gv) in g.nonzero() {
            out.values[i * gl + j] = alg.multiply(fv, gv);
        }
    }
    Ok(out)
}

/// `f∘g`, inserting `g` into each slot of `f`.
pub fn insertion(f: &Cochain, g: &Cochain) -> Result<Cochain> {
    if f.dim != g.dim {
        return Err(Error::BasisMismatch(
            "cochains on different algebras".into(),
        ));
    }
    let (m, n) = (f.degree, g.degree);
    let d = f.dim;
    if m == 0 {
        return Ok(Cochain::zero(d, n.saturating_sub(1)));
    }
    let mut out = Cochain::zero(d, m + n - 1);
    let mut outer = vec![0usize; m];
    for idx in 0..out.values.len() {
        let t = out.tuple_of(idx);
        let mut v = Element::zero();
        for i in 1..=m {
            let gv = g.value(&t[i - 1..i - 1 + n]);
            if gv.is_zero() {
                continue;
            }
            outer[..i - 1].copy_from_slice(&t[..i - 1]);
            outer[i..].copy_from_slice(&t[i - 1 + n..]);
            let term = f.eval_with_slot(&mut outer, i - 1, gv);
            v.add_scaled(&sign((i - 1) * (n + 1) % 2 == 1), &term);
        }
        out.values[idx] = v;
    }
    Ok(out)
}

/// `[f,g] = f∘g − (−1)^{(m−1)(n−1)} g∘f`; for `m + n = 0` the result is the zero 0-cochain.
pub fn gerstenhaber_bracket(f: &Cochain, g: &Cochain) -> Result<Cochain> {
    let (m, n) = (f.degree, g.degree);
    if m + n == 0 {
        return Ok(Cochain::zero(f.dim, 0));
    }
    let fg = insertion(f, g)?;
    let gf = insertion(g, f)?;
    let s = sign((m + 1) * (n + 1) % 2 == 1);
    fg.sub(&gf.scaled(&s))
}

/// A degree-0 unital algebra with a verified symmetric, invariant,
/// non-degenerate pairing.
#[derive(Debug, Clone)]
pub struct FrobeniusData {
    alg: GradedAlgebra,
    gram: Vec<Vec<Scalar>>,
    gram_inverse: Vec<Vec<Scalar>>,
    /// `⟨e_k, 1⟩`.
    counit: Vec<Scalar>,
}

impl FrobeniusData {
    /// Uses the algebra's own pairing section.
    pub fn from_algebra(alg: &GradedAlgebra) -> Result<Self> {
        let pairing = alg
            .pairing()
            .ok_or_else(|| Error::InvalidPairing("algebra has no pairing".into()))?
            .clone();
        frobenius_validate(alg, &pairing)
    }

    pub fn algebra(&self) -> &GradedAlgebra {
        &self.alg
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn gram(&self) -> &[Vec<Scalar>] {
        &self.gram
    }

    pub fn gram_inverse(&self) -> &[Vec<Scalar>] {
        &self.gram_inverse
    }

    pub fn pair(&self, x: &Element, y: &Element) -> Scalar {
        let mut s = Scalar::zero();
        for (i, a) in x.iter() {
            for (j, b) in y.iter() {
                s += a * b * &self.gram[i][j];
            }
        }
        s
    }

    /// The same data in a basis containing the unit (named `1`, replacing the
    /// first basis vector in its support); unchanged if the unit already is one.
    pub fn unit_adapted(&self) -> Result<FrobeniusData> {
        if complex::unit_index(&self.alg).is_ok() {
            return Ok(self.clone());
        }
        let unit = self.alg.unit().ok_or(Error::NoUnit)?.clone();
        let (slot, _) = unit.iter().next().ok_or(Error::NoUnit)?;
        let b = self.alg.basis();
        let taken = (0..self.dim()).any(|i| b.name(i) == "1");
        let labels = (0..self.dim()).map(|i| {
            let name = if i != slot {
                b.name(i).to_string()
            } else if taken {
                "unit".to_string()
            } else {
                "1".to_string()
            };
            (name, b.degree(i))
        });
        let columns: Vec<Element> = (0..self.dim())
            .map(|i| {
                if i == slot {
                    unit.clone()
                } else {
                    Element::basis(i)
                }
            })
            .collect();
        let alg = self
            .alg
            .rebased(Arc::new(GradedBasis::new(labels)?), &columns)?;
        FrobeniusData::from_algebra(&alg)
    }

    /// The element `r` with `⟨r, e_j⟩ = phi[j]` for all `j`.
    pub fn riesz(&self, phi: &[Scalar]) -> Element {
        let d = self.dim();
        Element::from_terms((0..d).map(|k| {
            let mut c = Scalar::zero();
            for (j, p) in phi.iter().enumerate() {
                if !p.is_zero() {
                    c += &self.gram_inverse[k][j] * p;
                }
            }
            (k, c)
        }))
    }
}

/// Checks symmetry, invariance `⟨ab,c⟩ = ⟨a,bc⟩` and non-degeneracy.
pub fn frobenius_validate(
    alg: &GradedAlgebra,
    gram: &BTreeMap<(usize, usize), Scalar>,
) -> Result<FrobeniusData> {
    require_ungraded(alg)?;
    let unit = alg.unit().ok_or(Error::NoUnit)?.clone();
    let d = alg.dim();
    let b = alg.basis();
    let mut g = vec![vec![Scalar::zero(); d]; d];
    for (&(i, j), c) in gram {
        if i >= d || j >= d {
            return Err(Error::IndexOutOfRange {
                index: i.max(j),
                dim: d,
            });
        }
        g[i][j] = c.clone();
    }
    for (i, row) in g.iter().enumerate() {
        for j in 0..i {
            if row[j] != g[j][i] {
                return Err(Error::InvalidPairing(format!(
                    "not symmetric: <{},{}> != <{},{}>",
                    b.name(i),
                    b.name(j),
                    b.name(j),
                    b.name(i)
                )));
            }
        }
    }
    let fd_pair = |x: &Element, y: &Element| -> Scalar {
        let mut s = Scalar::zero();
        for (i, a) in x.iter() {
            for (j, c) in y.iter() {
                s += a * c * &g[i][j];
            }
        }
        s
    };
    for a in 0..d {
        for bb in 0..d {
            for c in 0..d {
                let l = fd_pair(&alg.multiply_indices(&[a, bb]), &Element::basis(c));
                let r = fd_pair(&Element::basis(a), &alg.multiply_indices(&[bb, c]));
                if l != r {
                    return Err(Error::InvalidPairing(format!(
                        "not invariant on ({},{},{})",
                        b.name(a),
                        b.name(bb),
                        b.name(c)
                    )));
                }
            }
        }
    }
    let gram_inverse =
        invert(&g).ok_or_else(|| Error::InvalidPairing("degenerate pairing".into()))?;
    let counit = (0..d).map(|k| fd_pair(&Element::basis(k), &unit)).collect();
    Ok(FrobeniusData {
        alg: alg.clone(),
        gram: g,
        gram_inverse,
        counit,
    })
}

/// The dualized Connes operator `C^n → C^{n−1}`; zero on `C^0`.
///
/// A value `f(t)` enters `⟨Δf(a1..a_{n−1}), a_n⟩` once for each rotation
/// `t = (a_i..a_n, a_1..a_{i−1})`.
pub fn connes_b_dual(fd: &FrobeniusData, f: &Cochain) -> Result<Cochain> {
    check_dim(&fd.alg, f)?;
    let n = f.degree;
    let d = fd.dim();
    if n == 0 {
        return Ok(Cochain::zero(d, 0));
    }
    let mut out = Cochain::zero(d, n - 1);
    let mut functionals: BTreeMap<usize, Vec<Scalar>> = BTreeMap::new();
    let mut a = vec![0usize; n];
    for (idx, v) in f.nonzero() {
        let mut c = Scalar::zero();
        for (k, x) in v.iter() {
            c += x * &fd.counit[k];
        }
        if c.is_zero() {
            continue;
        }
        let t = f.tuple_of(idx);
        for i in 1..=n {
            // a_1..a_{i−1} are the last i−1 letters of t
            a[..i - 1].copy_from_slice(&t[n - i + 1..]);
            a[i - 1..].copy_from_slice(&t[..n - i + 1]);
            let head = out.index_of(&a[..n - 1]);
            let phi = functionals
                .entry(head)
                .or_insert_with(|| vec![Scalar::zero(); d]);
            phi[a[n - 1]] += sign(i * (n - 1) % 2 == 1) * &c;
        }
    }
    for (head, phi) in functionals {
        out.values[head] = fd.riesz(&phi);
    }
    Ok(out)
}

#[cfg(test)]
mod tests;
