//! Bundled algebras used by the tests and the command line.

use std::sync::Arc;

use crate::algebra::GradedAlgebra;
use crate::basis::{Element, GradedBasis};
use crate::format::parse_algebra_file;
use crate::operator::LinearOperator;

pub const TRI2: &str = include_str!("../fixtures/tri2.alg");
pub const DUAL: &str = include_str!("../fixtures/dual.alg");
pub const M2: &str = include_str!("../fixtures/m2.alg");
pub const KK: &str = include_str!("../fixtures/kk.alg");
pub const DERIV: &str = include_str!("../fixtures/deriv.alg");
pub const BROKEN: &str = include_str!("../fixtures/broken.alg");

/// Every bundled well-formed algebra file, by file name.
pub const VALID_FILES: [(&str, &str); 5] = [
    ("tri2.alg", TRI2),
    ("dual.alg", DUAL),
    ("m2.alg", M2),
    ("kk.alg", KK),
    ("deriv.alg", DERIV),
];

pub const ALL_FILES: [(&str, &str); 6] = [
    ("tri2.alg", TRI2),
    ("dual.alg", DUAL),
    ("m2.alg", M2),
    ("kk.alg", KK),
    ("deriv.alg", DERIV),
    ("broken.alg", BROKEN),
];

const NON_SQUARE_ZERO: &str = "\
algebra nsz
basis u:0 v:1 w:2
unit u
product u*u = u
product u*v = v
product v*u = v
product u*w = w
product w*u = w
delta u -> v
delta v -> w
end
";

fn parse(text: &str) -> GradedAlgebra {
    parse_algebra_file(text).expect("bundled fixture parses")
}

/// Upper triangular 2×2 matrices with Δ(e22) = e12.
pub fn triangular() -> GradedAlgebra {
    parse(TRI2)
}

pub fn dual_numbers() -> GradedAlgebra {
    parse(DUAL)
}

pub fn matrix_m2() -> GradedAlgebra {
    parse(M2)
}

pub fn product_kk() -> GradedAlgebra {
    parse(KK)
}

/// Triangular matrices with the inner derivation `[e12, -]`.
pub fn inner_derivation() -> GradedAlgebra {
    parse(DERIV)
}

pub fn broken() -> GradedAlgebra {
    parse(BROKEN)
}

/// `u` unit, `v² = 0`, Δu = v, Δv = w, so Δ²u = w.
pub fn non_square_zero() -> GradedAlgebra {
    parse(NON_SQUARE_ZERO)
}

/// Two-dimensional algebra with zero product and Δu = v; every operator is a derivation.
pub fn zero_product_derivation() -> GradedAlgebra {
    let b = Arc::new(GradedBasis::new([("u", 0), ("v", 1)]).unwrap());
    let d = LinearOperator::new(b.clone(), 1, [(0, Element::basis(1))]).unwrap();
    GradedAlgebra::new("zero_uv", b, [])
        .unwrap()
        .with_delta(d)
        .unwrap()
}
