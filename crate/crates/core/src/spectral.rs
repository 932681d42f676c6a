//! Eigenspace decompositions of the multiplication operators `L_a` and `R_a`.

use serde::Serialize;

use crate::algebra::{GmAlgebra, Side};
use crate::error::{Error, Result};
use crate::exact::{
    lambda_params, roots_of_minus_one, scale, unit_vector, zero_vector, ExactVector, FieldSpec, Matrix, Scalar,
};
use crate::system::{BlockPartition, Permutation};

/// Largest prime field that is scanned exhaustively for stray eigenvalues.
const EXHAUSTIVE_SCAN_LIMIT: u64 = 1024;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EigenPart {
    pub eigenvalue: Scalar,
    pub dim: usize,
    pub basis: Vec<ExactVector>,
}

impl EigenPart {
    fn new(eigenvalue: Scalar, basis: Vec<ExactVector>) -> Self {
        EigenPart { eigenvalue, dim: basis.len(), basis }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SpectralDecomposition {
    pub axis: usize,
    pub side: Side,
    /// Nonzero eigenspaces, in the order the candidates were tried.
    pub parts: Vec<EigenPart>,
    pub semisimple: bool,
    /// `dim A_1(a) == 1`.
    pub primitive: bool,
    /// `n - sum(dim)`; zero exactly when semisimple.
    pub deficit: usize,
}

impl SpectralDecomposition {
    pub fn eigenvalues(&self) -> Vec<Scalar> {
        self.parts.iter().map(|p| p.eigenvalue.clone()).collect()
    }

    pub fn part(&self, lambda: &Scalar) -> Option<&EigenPart> {
        self.parts.iter().find(|p| &p.eigenvalue == lambda)
    }

    pub fn dim_of(&self, lambda: &Scalar) -> usize {
        self.part(lambda).map_or(0, |p| p.dim)
    }

    pub fn require_semisimple(&self) -> Result<()> {
        if self.semisimple {
            Ok(())
        } else {
            Err(Error::NotSemisimple { axis: self.axis, side: self.side.as_str(), deficit: self.deficit })
        }
    }
}

fn push_unique(list: &mut Vec<Scalar>, x: Scalar) {
    if !list.contains(&x) {
        list.push(x);
    }
}

/// Eigenvalues that can occur for `L_a` (left) or `R_a` (right).
pub fn candidate_eigenvalues(alg: &GmAlgebra, side: Side) -> Vec<Scalar> {
    let field = alg.field();
    let (l1, l2) = lambda_params(alg.p(), alg.eta());
    let mut out = Vec::new();
    push_unique(&mut out, field.one());
    push_unique(&mut out, l1);
    match side {
        Side::Left => {
            push_unique(&mut out, l2.clone());
            push_unique(&mut out, -l2);
        }
        Side::Right => {
            let base = alg.eta() - &field.one();
            push_unique(&mut out, base.clone());
            for d in roots_of_minus_one(field, (alg.p() - 1) / 2) {
                push_unique(&mut out, &d * &base);
            }
        }
    }
    out
}

pub fn decompose(alg: &GmAlgebra, a: usize, side: Side) -> Result<SpectralDecomposition> {
    let n = alg.dim();
    if a >= n {
        return Err(Error::IndexOutOfRange { index: a, dim: n });
    }
    let m = alg.mult_matrix(a, side);
    let mut candidates = candidate_eigenvalues(alg, side);
    let mut parts: Vec<EigenPart> = Vec::new();
    let mut total = 0;
    for lambda in &candidates {
        let basis = m.shifted(lambda).kernel();
        if !basis.is_empty() {
            total += basis.len();
            parts.push(EigenPart::new(lambda.clone(), basis));
        }
    }
    if total < n {
        if let FieldSpec::Prime(q) = alg.field() {
            if q <= EXHAUSTIVE_SCAN_LIMIT {
                for lambda in alg.field().elements().into_iter().flatten() {
                    if candidates.contains(&lambda) {
                        continue;
                    }
                    let basis = m.shifted(&lambda).kernel();
                    if !basis.is_empty() {
                        total += basis.len();
                        parts.push(EigenPart::new(lambda.clone(), basis));
                    }
                    candidates.push(lambda);
                }
            }
        }
    }
    let deficit = n - total;
    if side == Side::Left && deficit == 0 {
        // Prefer the explicit blockwise basis when it spans the same spaces.
        let blockwise = axis_eigenbasis(alg, a)?;
        let agrees = blockwise.parts.len() == parts.len()
            && blockwise.parts.iter().zip(&parts).all(|(b, k)| b.eigenvalue == k.eigenvalue && b.dim == k.dim)
            && blockwise
                .parts
                .iter()
                .all(|b| b.basis.iter().all(|v| m.mul_vec(v) == scale(&b.eigenvalue, v)));
        if agrees {
            parts = blockwise.parts;
        }
    }
    let one = alg.field().one();
    let primitive = parts.iter().find(|p| p.eigenvalue == one).map_or(0, |p| p.dim) == 1;
    Ok(SpectralDecomposition { axis: a, side, parts, semisimple: deficit == 0, primitive, deficit })
}

/// The explicit eigenvectors attached to the pair `(a, b)`, indexed by the
/// canonical order `a_1 = a, a_2 = b, ..` of `I(a, b)`.
#[derive(Clone, Debug, Serialize)]
pub struct CanonicalEigenbasis {
    pub order: Vec<usize>,
    pub lambda1: Scalar,
    pub lambda2: Scalar,
    pub a: ExactVector,
    pub z: ExactVector,
    /// `y_1 .. y_{(p-3)/2}`.
    pub ys: Vec<ExactVector>,
    /// `x_1 .. x_{(p-1)/2}`.
    pub xs: Vec<ExactVector>,
    #[serde(skip)]
    field: FieldSpec,
    #[serde(skip)]
    n: usize,
}

impl CanonicalEigenbasis {
    /// Basis element at canonical position `k` (1-based).
    pub fn e(&self, k: usize) -> ExactVector {
        unit_vector(self.field, self.n, self.order[k - 1])
    }

    /// `y_i`, read as zero outside `1..=(p-3)/2`.
    pub fn y(&self, i: usize) -> ExactVector {
        match i.checked_sub(1).and_then(|k| self.ys.get(k)) {
            Some(v) => v.clone(),
            None => zero_vector(self.field, self.n),
        }
    }

    /// `x_i`, read as zero outside `1..=(p-1)/2`.
    pub fn x(&self, i: usize) -> ExactVector {
        match i.checked_sub(1).and_then(|k| self.xs.get(k)) {
            Some(v) => v.clone(),
            None => zero_vector(self.field, self.n),
        }
    }

    /// Sum of the basis elements of `I(a, b)`.
    pub fn gamma(&self) -> ExactVector {
        let mut v = zero_vector(self.field, self.n);
        for &i in &self.order {
            v[i] = self.field.one();
        }
        v
    }

    /// Eigenvalue/eigenvector pairs for `L_a`.
    pub fn pairs(&self) -> Vec<(Scalar, &ExactVector)> {
        let mut out = vec![(self.field.one(), &self.a), (self.lambda1.clone(), &self.z)];
        out.extend(self.ys.iter().map(|y| (self.lambda2.clone(), y)));
        out.extend(self.xs.iter().map(|x| (-&self.lambda2, x)));
        out
    }
}

pub fn canonical_eigenbasis(alg: &GmAlgebra, a: usize, b: usize) -> Result<CanonicalEigenbasis> {
    let sys = alg.system();
    let order = sys.dihedral_set(a, b)?;
    let field = alg.field();
    let n = alg.dim();
    let p = alg.p() as usize;
    let (lambda1, lambda2) = lambda_params(alg.p(), alg.eta());
    let at = |k: usize| order[k - 1];
    let one = field.one();
    let a_vec = unit_vector(field, n, a);
    let mut z = zero_vector(field, n);
    for &i in &order {
        z[i] = one.clone();
    }
    z[a] = field.ratio(p as i64 - 1, p as i64 - 2);
    let (lo, hi) = (p.div_ceil(2), (p + 3) / 2);
    let ys = (1..=(p - 3) / 2)
        .map(|i| {
            let mut y = zero_vector(field, n);
            y[at(i + 1)] = &y[at(i + 1)] + &one;
            y[at(lo)] = &y[at(lo)] - &one;
            y[at(hi)] = &y[at(hi)] - &one;
            y[at(p + 1 - i)] = &y[at(p + 1 - i)] + &one;
            y
        })
        .collect();
    let xs = (1..=(p - 1) / 2)
        .map(|i| {
            let mut x = zero_vector(field, n);
            x[at(i + 1)] = -&one;
            x[at(p + 1 - i)] = one.clone();
            x
        })
        .collect();
    Ok(CanonicalEigenbasis { order, lambda1, lambda2, a: a_vec, z, ys, xs, field, n })
}

/// Eigenbasis of `L_a` assembled block by block.
#[derive(Clone, Debug, Serialize)]
pub struct AxisEigenbasis {
    pub axis: usize,
    pub partition: BlockPartition,
    /// Parts for `1, lambda1, lambda2, -lambda2`, merged where values coincide.
    pub parts: Vec<EigenPart>,
}

pub fn axis_eigenbasis(alg: &GmAlgebra, a: usize) -> Result<AxisEigenbasis> {
    let partition = alg.system().blocks(a)?;
    let (l1, l2) = lambda_params(alg.p(), alg.eta());
    let mut groups: Vec<(Scalar, Vec<ExactVector>)> = Vec::new();
    let mut put = |lambda: Scalar, v: ExactVector| match groups.iter_mut().find(|(l, _)| *l == lambda) {
        Some((_, vs)) => vs.push(v),
        None => groups.push((lambda, vec![v])),
    };
    put(alg.field().one(), unit_vector(alg.field(), alg.dim(), a));
    let bases = partition
        .representatives
        .iter()
        .map(|&b| canonical_eigenbasis(alg, a, b))
        .collect::<Result<Vec<_>>>()?;
    for cb in &bases {
        put(l1.clone(), cb.z.clone());
    }
    for cb in &bases {
        for y in &cb.ys {
            put(l2.clone(), y.clone());
        }
    }
    for cb in &bases {
        for x in &cb.xs {
            put(-&l2, x.clone());
        }
    }
    let parts = groups.into_iter().map(|(l, vs)| EigenPart::new(l, vs)).collect();
    Ok(AxisEigenbasis { axis: a, partition, parts })
}

/// `A_+(a)` (eigenvalues `1, lambda1, lambda2`) and `A_-(a)` (eigenvalue `-lambda2`).
#[derive(Clone, Debug, Serialize)]
pub struct GradedSplit {
    pub axis: usize,
    pub plus: Vec<ExactVector>,
    pub minus: Vec<ExactVector>,
}

pub fn plus_minus_split(alg: &GmAlgebra, a: usize) -> Result<GradedSplit> {
    let dec = decompose(alg, a, Side::Left)?;
    dec.require_semisimple()?;
    let (_, l2) = lambda_params(alg.p(), alg.eta());
    let minus_value = -&l2;
    let (l1, _) = lambda_params(alg.p(), alg.eta());
    let merged = minus_value == alg.field().one() || minus_value == l1 || minus_value == l2;
    let (mut plus, mut minus) = (Vec::new(), Vec::new());
    if merged {
        // When -lambda2 coincides with another value the x-vectors still span the odd part.
        plus.push(unit_vector(alg.field(), alg.dim(), a));
        for &b in &alg.system().blocks(a)?.representatives {
            let cb = canonical_eigenbasis(alg, a, b)?;
            plus.push(cb.z.clone());
            plus.extend(cb.ys.iter().cloned());
            minus.extend(cb.xs.iter().cloned());
        }
    } else {
        for part in dec.parts {
            if part.eigenvalue == minus_value {
                minus.extend(part.basis);
            } else {
                plus.extend(part.basis);
            }
        }
    }
    Ok(GradedSplit { axis: a, plus, minus })
}

/// `tau_a`: identity on `A_+(a)`, negation on `A_-(a)`, in the standard basis.
pub fn tau_matrix(alg: &GmAlgebra, a: usize) -> Result<Matrix> {
    let split = plus_minus_split(alg, a)?;
    let field = alg.field();
    let n = alg.dim();
    let mut columns = split.plus.clone();
    columns.extend(split.minus.iter().cloned());
    let p = Matrix::from_columns(field, n, &columns);
    let p_inv = p.inverse().ok_or(Error::NotSemisimple { axis: a, side: "left", deficit: 0 })?;
    let mut d = Matrix::identity(field, n);
    for k in split.plus.len()..n {
        d.set(k, k, -field.one());
    }
    Ok(p.mul(&d).mul(&p_inv))
}

/// Reads a permutation matrix off as `e_b -> e_{pi(b)}`; `None` if it is not one.
pub fn matrix_permutation(m: &Matrix) -> Option<Permutation> {
    let n = m.cols();
    let images = (0..n)
        .map(|b| {
            let col = m.column(b);
            let nonzero: Vec<usize> = (0..n).filter(|&k| !col[k].is_zero()).collect();
            match nonzero.as_slice() {
                [k] if col[*k].is_one() => Some(*k),
                _ => None,
            }
        })
        .collect::<Option<Vec<usize>>>()?;
    Permutation::from_images(images)
}

pub fn tau_permutation(alg: &GmAlgebra, a: usize) -> Result<Option<Permutation>> {
    Ok(matrix_permutation(&tau_matrix(alg, a)?))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::is_direct_sum;
    use crate::system::{dihedral, frobenius};

    const Q: FieldSpec = FieldSpec::Rationals;

    fn alg(sys: crate::system::TranspositionSystem, eta: Scalar) -> GmAlgebra {
        GmAlgebra::build(sys, eta, false).unwrap()
    }

    #[test]
    fn dihedral5_left_spectrum() {
        let a = alg(dihedral(5).unwrap(), Q.ratio(-1, 3));
        let dec = decompose(&a, 0, Side::Left).unwrap();
        assert!(dec.semisimple && dec.primitive);
        let dims: Vec<(String, usize)> = dec.parts.iter().map(|p| (p.eigenvalue.to_string(), p.dim)).collect();
        assert_eq!(dims, vec![("1".into(), 1), ("0".into(), 1), ("4/3".into(), 1), ("-4/3".into(), 2)]);
    }

    #[test]
    fn frobenius52_left_multiplicities() {
        let a = alg(frobenius(5, 2).unwrap(), Q.ratio(2, 5));
        let dec = decompose(&a, 0, Side::Left).unwrap();
        let dims: Vec<usize> = dec.parts.iter().map(|p| p.dim).collect();
        assert_eq!(dims, vec![1, 6, 6, 12]);
    }

    #[test]
    fn right_side_over_rationals_is_not_semisimple() {
        let a = alg(dihedral(5).unwrap(), Q.ratio(-1, 3));
        let dec = decompose(&a, 0, Side::Right).unwrap();
        assert!(!dec.semisimple);
        assert_eq!(dec.deficit, 2);
        assert!(matches!(dec.require_semisimple(), Err(Error::NotSemisimple { deficit: 2, .. })));
    }

    #[test]
    fn right_side_over_f13() {
        let f = FieldSpec::prime(13).unwrap();
        let a = alg(dihedral(5).unwrap(), Scalar::parse("4", f).unwrap());
        let dec = decompose(&a, 0, Side::Right).unwrap();
        assert!(dec.semisimple);
        let mut values: Vec<i64> = dec.eigenvalues().iter().map(|v| v.to_integer().unwrap()).collect();
        values.sort_unstable();
        assert_eq!(values, vec![0, 1, 2, 3, 11]);
    }

    #[test]
    fn canonical_vectors_are_eigenvectors() {
        for (p, eta) in [(5, Q.ratio(2, 5)), (7, Q.ratio(-1, 5)), (11, Q.ratio(3, 7))] {
            let a = alg(dihedral(p).unwrap(), eta);
            let m = a.mult_matrix(0, Side::Left);
            let cb = canonical_eigenbasis(&a, 0, 1).unwrap();
            for (lambda, v) in cb.pairs() {
                assert_eq!(m.mul_vec(v), scale(&lambda, v));
            }
        }
    }

    #[test]
    fn split_is_direct_and_tau_is_conjugation() {
        let a = alg(frobenius(3, 2).unwrap(), Q.ratio(2, 5));
        let split = plus_minus_split(&a, 0).unwrap();
        assert!(is_direct_sum(Q, 9, &[split.plus.clone(), split.minus.clone()]));
        assert_eq!((split.plus.len(), split.minus.len()), (5, 4));
        let tau = tau_permutation(&a, 0).unwrap().unwrap();
        assert_eq!(tau, a.system().conjugation_permutation(0));
    }

    #[test]
    fn coincident_eigenvalues_merge() {
        // p = 5, eta = -1: lambda1 = -2 = -lambda2.
        let a = GmAlgebra::build(dihedral(5).unwrap(), Q.from_int(-1), true).unwrap();
        let dec = decompose(&a, 0, Side::Left).unwrap();
        assert!(dec.semisimple);
        assert_eq!(dec.dim_of(&Q.from_int(-2)), 3);
        let split = plus_minus_split(&a, 0).unwrap();
        assert_eq!(split.minus.len(), 2);
    }
}
