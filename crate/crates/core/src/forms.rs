//! The symmetric bilinear form with `(a, a) = 1` and `(a, b) = eta` on basis elements.

use serde::Serialize;

use crate::algebra::{GmAlgebra, SparseVec};
use crate::exact::{ExactVector, FieldSpec, Matrix, Scalar};

#[derive(Clone, Debug, Serialize)]
pub struct GramData {
    #[serde(skip)]
    pub matrix: Matrix,
    pub determinant: Scalar,
    /// `(1 - eta)^(n-1) (1 + (n-1) eta)`.
    pub closed_form_determinant: Scalar,
    pub determinant_matches: bool,
    pub radical_basis: Vec<ExactVector>,
}

pub fn gram_matrix(field: FieldSpec, n: usize, eta: &Scalar) -> Matrix {
    let mut m = Matrix::zeros(field, n, n);
    for i in 0..n {
        for j in 0..n {
            m.set(i, j, if i == j { field.one() } else { eta.clone() });
        }
    }
    m
}

pub fn closed_form_determinant(field: FieldSpec, n: usize, eta: &Scalar) -> Scalar {
    let one = field.one();
    (&one - eta).pow(n as u64 - 1) * (&one + &(&field.from_int(n as i64 - 1) * eta))
}

pub fn gram(alg: &GmAlgebra) -> GramData {
    let field = alg.field();
    let n = alg.dim();
    let matrix = gram_matrix(field, n, alg.eta());
    let determinant = matrix.determinant();
    let closed = closed_form_determinant(field, n, alg.eta());
    let radical_basis = matrix.kernel();
    GramData { determinant_matches: determinant == closed, determinant, closed_form_determinant: closed, radical_basis, matrix }
}

pub fn radical(alg: &GmAlgebra) -> Vec<ExactVector> {
    gram_matrix(alg.field(), alg.dim(), alg.eta()).kernel()
}

/// `(x, y)` for arbitrary coordinate vectors.
pub fn form(eta: &Scalar, x: &[Scalar], y: &[Scalar]) -> Scalar {
    let field = eta.field();
    let one = field.one();
    let sx = x.iter().fold(field.zero(), |acc, c| acc + c);
    let sy = y.iter().fold(field.zero(), |acc, c| acc + c);
    let diag = x.iter().zip(y).fold(field.zero(), |acc, (a, b)| acc + a * b);
    eta * &(sx * sy) + (&one - eta) * diag
}

/// `(x, e_c)` for a sparse `x`.
fn pair_with_basis(eta: &Scalar, x: &SparseVec, c: usize) -> Scalar {
    let field = eta.field();
    let one = field.one();
    let total = x.iter().fold(field.zero(), |acc, (_, v)| acc + v);
    let own = x.iter().find(|(k, _)| *k == c).map_or(field.zero(), |(_, v)| v.clone());
    eta * &total + (&one - eta) * own
}

/// A basis triple on which the Frobenius identity fails.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DefectTriple {
    pub a: usize,
    pub b: usize,
    pub c: usize,
    pub lhs: Scalar,
    pub rhs: Scalar,
}

/// All basis triples with `(a*b, c) != (b, a*c)`.
pub fn frobenius_defect(alg: &GmAlgebra) -> Vec<DefectTriple> {
    let n = alg.dim();
    let eta = alg.eta();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = pair_with_basis(eta, alg.product(a, b), c);
                let rhs = pair_with_basis(eta, alg.product(a, c), b);
                if lhs != rhs {
                    out.push(DefectTriple { a, b, c, lhs, rhs });
                }
            }
        }
    }
    out
}

/// All basis triples with `(a*b, c) != (a, b*c)`.
pub fn right_frobenius_defect(alg: &GmAlgebra) -> Vec<DefectTriple> {
    let n = alg.dim();
    let eta = alg.eta();
    let mut out = Vec::new();
    for a in 0..n {
        for b in 0..n {
            for c in 0..n {
                let lhs = pair_with_basis(eta, alg.product(a, b), c);
                let rhs = pair_with_basis(eta, alg.product(b, c), a);
                if lhs != rhs {
                    out.push(DefectTriple { a, b, c, lhs, rhs });
                }
            }
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::unit_vector;
    use crate::system::{dihedral, frobenius};

    const Q: FieldSpec = FieldSpec::Rationals;

    fn alg(sys: crate::system::TranspositionSystem, eta: &str) -> GmAlgebra {
        GmAlgebra::build(sys, Scalar::parse(eta, Q).unwrap(), false).unwrap()
    }

    #[test]
    fn gram_examples() {
        let g = gram(&alg(dihedral(5).unwrap(), "-1/3"));
        assert_eq!(g.determinant.to_string(), "-256/243");
        assert!(g.determinant_matches);
        assert!(g.radical_basis.is_empty());
        let g = gram(&alg(dihedral(5).unwrap(), "-1/4"));
        assert_eq!(g.radical_basis.len(), 1);
        assert!(g.determinant.is_zero());
    }

    #[test]
    fn defect_vanishes_only_at_special_eta() {
        assert!(frobenius_defect(&alg(dihedral(5).unwrap(), "-1/3")).is_empty());
        assert!(frobenius_defect(&alg(frobenius(5, 2).unwrap(), "-1/3")).is_empty());
        let defect = frobenius_defect(&alg(dihedral(5).unwrap(), "1/2"));
        assert!(!defect.is_empty());
        assert_ne!(defect[0].lhs, defect[0].rhs);
    }

    #[test]
    fn form_agrees_with_gram_matrix() {
        let eta = Scalar::parse("2/5", Q).unwrap();
        let m = gram_matrix(Q, 4, &eta);
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(&form(&eta, &unit_vector(Q, 4, i), &unit_vector(Q, 4, j)), m.get(i, j));
            }
        }
    }
}
