//! The odd transposition algebra `A_F(G, T, eta)` as a table of sparse
//! structure constants on the basis `T`.

use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{
    good_characteristic, is_zero_vector, unit_vector, zero_vector, EchelonBasis, ExactVector, FieldSpec, Matrix,
    Scalar,
};
use crate::system::TranspositionSystem;

/// Basis expansion `[(index, coefficient)]`, sorted by index, zero-free.
pub type SparseVec = Vec<(usize, Scalar)>;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

impl Side {
    pub fn as_str(self) -> &'static str {
        match self {
            Side::Left => "left",
            Side::Right => "right",
        }
    }
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Side {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "left" => Ok(Side::Left),
            "right" => Ok(Side::Right),
            _ => Err(Error::Format(format!("side must be `left` or `right`, got `{s}`"))),
        }
    }
}

#[derive(Clone, Debug)]
pub struct GmAlgebra {
    sys: TranspositionSystem,
    field: FieldSpec,
    eta: Scalar,
    products: Vec<Vec<SparseVec>>,
}

/// Result of a bounded closure computation.
#[derive(Clone, Debug, Serialize)]
pub struct Closure {
    pub basis: Vec<ExactVector>,
    /// False when the dimension cap stopped the iteration early.
    pub closed: bool,
}

impl Closure {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// `a * b = b^a + eta * sum(I(a, b) \ {b^a})`, and `a * a = a`.
fn basis_product(sys: &TranspositionSystem, eta: &Scalar, a: usize, b: usize) -> Result<SparseVec> {
    let field = eta.field();
    if a == b {
        return Ok(vec![(a, field.one())]);
    }
    let target = sys.conj(b, a);
    let mut support = sys.dihedral_set(a, b)?;
    support.sort_unstable();
    Ok(support
        .into_iter()
        .map(|x| (x, if x == target { field.one() } else { eta.clone() }))
        .collect())
}

impl GmAlgebra {
    /// Structure constants over the field of `eta`.
    ///
    /// Rejects `eta` in `{0, 1}`, invalid systems, and (unless `force`) fields
    /// that are not of good characteristic relative to `(p, eta)`.
    pub fn build(sys: TranspositionSystem, eta: Scalar, force: bool) -> Result<Self> {
        let field = eta.field();
        if eta.is_zero() || eta.is_one() {
            return Err(Error::DegenerateEta(eta.to_string()));
        }
        let report = sys.validate();
        if let Some(first) = report.issues.first() {
            return Err(Error::InvalidSystem {
                count: report.issues.len(),
                first: format!("{}: {}", first.check, first.detail),
            });
        }
        if !force && !good_characteristic(sys.p(), &eta) {
            return Err(Error::BadCharacteristic { p: sys.p(), eta: eta.to_string(), field });
        }
        let n = sys.n();
        let products = (0..n)
            .map(|a| (0..n).map(|b| basis_product(&sys, &eta, a, b)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(GmAlgebra { sys, field, eta, products })
    }

    pub fn system(&self) -> &TranspositionSystem {
        &self.sys
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn eta(&self) -> &Scalar {
        &self.eta
    }

    pub fn p(&self) -> u64 {
        self.sys.p()
    }

    pub fn dim(&self) -> usize {
        self.sys.n()
    }

    /// `e_a * e_b`.
    pub fn product(&self, a: usize, b: usize) -> &SparseVec {
        &self.products[a][b]
    }

    pub fn products(&self) -> &[Vec<SparseVec>] {
        &self.products
    }

    pub fn basis_vector(&self, i: usize) -> ExactVector {
        unit_vector(self.field, self.dim(), i)
    }

    pub fn zero(&self) -> ExactVector {
        zero_vector(self.field, self.dim())
    }

    /// Bilinear extension of the basis products.
    pub fn multiply(&self, x: &[Scalar], y: &[Scalar]) -> ExactVector {
        let n = self.dim();
        assert_eq!(x.len(), n, "left factor has wrong length");
        assert_eq!(y.len(), n, "right factor has wrong length");
        let mut out = self.zero();
        let ys: Vec<(usize, &Scalar)> = y.iter().enumerate().filter(|(_, c)| !c.is_zero()).collect();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for &(j, yj) in &ys {
                let c = xi * yj;
                for (k, s) in &self.products[i][j] {
                    out[*k] = &out[*k] + &(&c * s);
                }
            }
        }
        out
    }

    /// Matrix of `L_a` (side left) or `R_a` (side right) acting on column
    /// vectors: column `k` holds the coordinates of `e_a * e_k` (resp. `e_k * e_a`).
    pub fn mult_matrix(&self, a: usize, side: Side) -> Matrix {
        let n = self.dim();
        let mut m = Matrix::zeros(self.field, n, n);
        for k in 0..n {
            let col = match side {
                Side::Left => &self.products[a][k],
                Side::Right => &self.products[k][a],
            };
            for (r, c) in col {
                m.set(*r, k, c.clone());
            }
        }
        m
    }

    /// Smallest subalgebra containing `seeds`; stops once the dimension exceeds `cap`.
    pub fn subalgebra_closure(&self, seeds: &[ExactVector], cap: usize) -> Result<Closure> {
        let n = self.dim();
        for s in seeds {
            if s.len() != n {
                return Err(Error::DimensionMismatch { got: s.len(), expected: n });
            }
            if is_zero_vector(s) {
                return Err(Error::ZeroVector);
            }
        }
        let mut basis = EchelonBasis::new(self.field, n);
        let mut stored: Vec<ExactVector> = Vec::new();
        for s in seeds {
            if let Some(row) = basis.insert(s) {
                stored.push(row.clone());
            }
        }
        if stored.len() > cap {
            return Ok(Closure { basis: stored, closed: false });
        }
        // Semi-naive iteration: each stored vector is multiplied, in both
        // orders, with itself and every vector stored before it.
        let mut next = 0;
        while next < stored.len() {
            let v = stored[next].clone();
            for i in 0..=next {
                let u = stored[i].clone();
                let prods = if i == next {
                    vec![self.multiply(&v, &v)]
                } else {
                    vec![self.multiply(&u, &v), self.multiply(&v, &u)]
                };
                for w in prods {
                    if let Some(row) = basis.insert(&w) {
                        stored.push(row.clone());
                        if stored.len() > cap {
                            return Ok(Closure { basis: stored, closed: false });
                        }
                    }
                }
            }
            next += 1;
        }
        Ok(Closure { basis: stored, closed: true })
    }

    /// `x * e_b` computed from the sparse table.
    pub fn right_multiply_basis(&self, x: &[Scalar], b: usize) -> ExactVector {
        let mut out = self.zero();
        for (i, xi) in x.iter().enumerate() {
            if xi.is_zero() {
                continue;
            }
            for (k, s) in &self.products[i][b] {
                out[*k] = &out[*k] + &(xi * s);
            }
        }
        out
    }

    /// `e_a * x` computed from the sparse table.
    pub fn left_multiply_basis(&self, a: usize, x: &[Scalar]) -> ExactVector {
        let mut out = self.zero();
        for (j, xj) in x.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            for (k, s) in &self.products[a][j] {
                out[*k] = &out[*k] + &(xj * s);
            }
        }
        out
    }

    /// Smallest subspace containing `v` and closed under right multiplication
    /// by every basis element.
    pub fn right_ideal_closure(&self, v: &[Scalar]) -> Result<Vec<ExactVector>> {
        let n = self.dim();
        if v.len() != n {
            return Err(Error::DimensionMismatch { got: v.len(), expected: n });
        }
        if is_zero_vector(v) {
            return Err(Error::ZeroVector);
        }
        let mut basis = EchelonBasis::new(self.field, n);
        let mut stored = vec![basis.insert(v).expect("nonzero vector").clone()];
        let mut next = 0;
        while next < stored.len() && stored.len() < n {
            let u = stored[next].clone();
            for b in 0..n {
                let w = self.right_multiply_basis(&u, b);
                if let Some(row) = basis.insert(&w) {
                    stored.push(row.clone());
                }
            }
            next += 1;
        }
        Ok(stored)
    }

    /// Applies the basis permutation `e_b -> e_{b^a}` to coordinates.
    pub fn conjugate_vector(&self, x: &[Scalar], a: usize) -> ExactVector {
        let mut out = self.zero();
        for (b, c) in x.iter().enumerate() {
            out[self.sys.conj(b, a)] = c.clone();
        }
        out
    }

    pub fn is_commutative(&self) -> bool {
        let n = self.dim();
        (0..n).all(|i| (i + 1..n).all(|j| self.products[i][j] == self.products[j][i]))
    }
}

/// Sum of all basis elements listed in `set`.
pub fn indicator(field: FieldSpec, n: usize, set: &[usize]) -> ExactVector {
    let mut v = zero_vector(field, n);
    for &i in set {
        v[i] = field.one();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::scale;
    use crate::system::{dihedral, frobenius};

    const Q: FieldSpec = FieldSpec::Rationals;

    fn q(s: &str) -> Scalar {
        Scalar::parse(s, Q).unwrap()
    }

    fn alg(sys: TranspositionSystem, eta: &str) -> GmAlgebra {
        GmAlgebra::build(sys, q(eta), false).unwrap()
    }

    #[test]
    fn product_e0_e1_in_dihedral5() {
        let a = alg(dihedral(5).unwrap(), "-1/3");
        let eta = q("-1/3");
        let expected: SparseVec = vec![(0, eta.clone()), (1, eta.clone()), (2, eta.clone()), (3, eta), (4, Q.one())];
        assert_eq!(a.product(0, 1), &expected);
    }

    #[test]
    fn build_rejects_degenerate_eta() {
        assert!(matches!(GmAlgebra::build(dihedral(5).unwrap(), q("0"), false), Err(Error::DegenerateEta(_))));
        assert!(matches!(GmAlgebra::build(dihedral(5).unwrap(), q("1"), true), Err(Error::DegenerateEta(_))));
        assert!(matches!(
            GmAlgebra::build(dihedral(5).unwrap(), q("2"), false),
            Err(Error::BadCharacteristic { .. })
        ));
        assert!(GmAlgebra::build(dihedral(5).unwrap(), q("2"), true).is_ok());
        assert!(GmAlgebra::build(dihedral(5).unwrap(), q("1/2"), false).is_ok());
    }

    #[test]
    fn gamma_squares_and_unit() {
        let a = alg(dihedral(5).unwrap(), "-1/3");
        let gamma = indicator(Q, 5, &[0, 1, 2, 3, 4]);
        assert_eq!(a.multiply(&gamma, &gamma), scale(&q("-1/3"), &gamma));
        for p in [3u64, 5, 7] {
            let eta = Q.ratio(-1, p as i64 - 2);
            let a = GmAlgebra::build(dihedral(p).unwrap(), eta, false).unwrap();
            let n = a.dim();
            let unit = scale(&Q.from_int(2 - p as i64), &indicator(Q, n, &(0..n).collect::<Vec<_>>()));
            for i in 0..n {
                let e = a.basis_vector(i);
                assert_eq!(a.multiply(&unit, &e), e);
                assert_eq!(a.multiply(&e, &unit), e);
            }
        }
    }

    #[test]
    fn left_matrix_layout() {
        let a = alg(dihedral(5).unwrap(), "-1/3");
        let m = a.mult_matrix(0, Side::Left);
        assert_eq!(m.column(0), a.basis_vector(0));
        assert_ne!(m, a.mult_matrix(0, Side::Right));
    }

    #[test]
    fn commutativity_only_for_p3() {
        assert!(alg(dihedral(3).unwrap(), "-1").is_commutative());
        assert!(alg(frobenius(3, 2).unwrap(), "-1").is_commutative());
        assert!(!alg(dihedral(5).unwrap(), "-1/3").is_commutative());
    }

    #[test]
    fn closure_examples() {
        let a = alg(frobenius(5, 2).unwrap(), "-1/3");
        let two = a.subalgebra_closure(&[a.basis_vector(0), a.basis_vector(1)], 25).unwrap();
        assert!(two.closed);
        assert_eq!(two.dim(), 5);
        let all: Vec<ExactVector> = (0..25).map(|i| a.basis_vector(i)).collect();
        assert_eq!(a.subalgebra_closure(&all, 25).unwrap().dim(), 25);
        let capped = a.subalgebra_closure(&[a.basis_vector(0), a.basis_vector(1), a.basis_vector(5)], 10).unwrap();
        assert!(!capped.closed);
        assert!(matches!(a.subalgebra_closure(&[a.zero()], 25), Err(Error::ZeroVector)));
    }

    #[test]
    fn right_ideal_examples() {
        let a = alg(dihedral(5).unwrap(), "-1/3");
        assert_eq!(a.right_ideal_closure(&a.basis_vector(0)).unwrap().len(), 5);
        assert!(matches!(a.right_ideal_closure(&a.zero()), Err(Error::ZeroVector)));
    }
}
