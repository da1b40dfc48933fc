//! Exact sparse Gaussian elimination over the rationals.
//!
//! Vectors are [`Element`]s read as sparse coordinate vectors. Pivoting always
//! takes the lowest available index, so every output is deterministic.

use std::collections::BTreeMap;

use num_traits::{One, Zero};

use crate::basis::Element;
use crate::scalar::Scalar;

#[derive(Debug, Clone)]
struct Row {
    vec: Element,
    combo: Element,
}

/// Incrementally built echelon basis of a span.
///
/// Every stored row has leading coefficient 1 at its pivot and records which
/// combination of the inserted vectors produced it.
#[derive(Debug, Clone, Default)]
pub struct Echelon {
    rows: Vec<Row>,
    by_pivot: BTreeMap<usize, usize>,
    inserted: usize,
}

impl Echelon {
    pub fn new() -> Self {
        Echelon::default()
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Number of vectors passed to [`Echelon::insert`] so far.
    pub fn inserted(&self) -> usize {
        self.inserted
    }

    /// Returns `(residual, combo)` with `v = residual + Σ combo_k · inserted_k`.
    /// The residual contains no pivot index.
    pub fn reduce(&self, v: &Element) -> (Element, Element) {
        let mut v = v.clone();
        let mut combo = Element::zero();
        let mut cursor = 0;
        while let Some(i) = v.first_index_from(cursor) {
            if let Some(&r) = self.by_pivot.get(&i) {
                let c = v.coeff(i);
                let row = &self.rows[r];
                v.add_scaled(&-c.clone(), &row.vec);
                combo.add_scaled(&c, &row.combo);
            }
            cursor = i + 1;
        }
        (v, combo)
    }

    pub fn contains(&self, v: &Element) -> bool {
        self.reduce(v).0.is_zero()
    }

    /// Inserts `v` as the next input vector. Returns `Err(combo)` when `v`
    /// already lies in the span, `combo` expressing it through earlier inputs.
    pub fn insert(&mut self, v: &Element) -> Result<(), Element> {
        let id = self.inserted;
        self.inserted += 1;
        let (res, combo) = self.reduce(v);
        if res.is_zero() {
            return Err(combo);
        }
        let pivot = res.min_index().expect("nonzero");
        let lead = res.coeff(pivot);
        let inv = Scalar::one() / lead;
        let mut combo = -combo;
        combo.add_term(id, Scalar::one());
        self.by_pivot.insert(pivot, self.rows.len());
        self.rows.push(Row {
            vec: res.scaled(&inv),
            combo: combo.scaled(&inv),
        });
        Ok(())
    }
}

/// Kernel and image of the linear map whose `j`-th column is `columns[j]`.
///
/// Kernel vectors are indexed by column; the image basis consists of the
/// columns that are independent of all earlier columns.
pub fn kernel_and_image(columns: &[Element]) -> (Vec<Element>, Vec<Element>) {
    let mut ech = Echelon::new();
    let mut kernel = Vec::new();
    let mut image = Vec::new();
    let mut ids = Vec::new();
    for (j, c) in columns.iter().enumerate() {
        match ech.insert(c) {
            Ok(()) => {
                image.push(c.clone());
                ids.push(j);
            }
            Err(combo) => {
                let mut k = Element::basis(j);
                for (id, coef) in combo.iter() {
                    k.add_term(id, -coef.clone());
                }
                kernel.push(k);
            }
        }
    }
    (kernel, image)
}

pub fn rank(vectors: &[Element]) -> usize {
    let mut ech = Echelon::new();
    vectors.iter().filter(|v| ech.insert(v).is_ok()).count()
}

/// Picks, in order, the vectors of `kernel` that are independent modulo `image`.
pub fn quotient_representatives(kernel: &[Element], image: &[Element]) -> Vec<Element> {
    let mut ech = Echelon::new();
    for v in image {
        let _ = ech.insert(v);
    }
    kernel
        .iter()
        .filter(|v| ech.insert(v).is_ok())
        .cloned()
        .collect()
}

/// Coordinates with respect to a list of linearly independent vectors.
#[derive(Debug, Clone)]
pub struct SpanCoordinates {
    ech: Echelon,
    len: usize,
}

impl SpanCoordinates {
    /// `None` if the vectors are dependent.
    pub fn new(vectors: &[Element]) -> Option<Self> {
        let mut ech = Echelon::new();
        for v in vectors {
            ech.insert(v).ok()?;
        }
        Some(SpanCoordinates {
            ech,
            len: vectors.len(),
        })
    }

    /// `Some(c)` with `x = Σ c_k v_k` if `x` lies in the span.
    pub fn coordinates(&self, x: &Element) -> Option<Vec<Scalar>> {
        let (res, combo) = self.ech.reduce(x);
        if !res.is_zero() {
            return None;
        }
        Some(combo.to_dense(self.len))
    }
}

/// Inverse of a square dense matrix, `None` if singular.
pub fn invert(m: &[Vec<Scalar>]) -> Option<Vec<Vec<Scalar>>> {
    let n = m.len();
    let mut a: Vec<Vec<Scalar>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Scalar::one()
                } else {
                    Scalar::zero()
                }
            }));
            r
        })
        .collect();
    for col in 0..n {
        let piv = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, piv);
        let inv = Scalar::one() / a[col][col].clone();
        for x in a[col].iter_mut() {
            *x *= &inv;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                let pivot_row = a[col].clone();
                for (x, p) in a[r].iter_mut().zip(pivot_row.iter()) {
                    *x -= &f * p;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

pub fn mat_mul(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
    let inner = b.len();
    let cols = b.first().map_or(0, |r| r.len());
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|j| {
                    let mut s = Scalar::zero();
                    for k in 0..inner {
                        s += &row[k] * &b[k][j];
                    }
                    s
                })
                .collect()
        })
        .collect()
}
