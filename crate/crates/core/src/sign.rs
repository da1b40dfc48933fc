//! The Koszul sign rule.
//!
//! Every sign produced by moving an operator past homogeneous arguments in
//! this crate comes from [`koszul_sign`].

use crate::scalar::{int, Scalar};

/// `(-1)^(op_degree * sum(passed_degrees))`.
pub fn koszul_sign(op_degree: i64, passed_degrees: &[i64]) -> Scalar {
    if koszul_parity(op_degree, passed_degrees) {
        int(-1)
    } else {
        int(1)
    }
}

/// True when the sign is negative.
pub(crate) fn koszul_parity(op_degree: i64, passed_degrees: &[i64]) -> bool {
    if op_degree.rem_euclid(2) == 0 {
        return false;
    }
    passed_degrees.iter().map(|d| d.rem_euclid(2)).sum::<i64>() % 2 == 1
}
