//! Fusion laws, their verification on axes, and Miyamoto groups.

use std::fmt;

use serde::Serialize;

use crate::algebra::{GmAlgebra, Side};
use crate::error::{Error, Result};
use crate::exact::{lambda_params, ExactVector, FieldSpec, Matrix, Scalar};
use crate::spectral::{decompose, plus_minus_split, tau_permutation, SpectralDecomposition};
use crate::system::{generate, GroupOrder, Permutation};

/// A finite set of values with a product table `values x values -> subsets`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FusionLaw {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub values: Vec<Scalar>,
    /// `table[i][j]` lists `values[i] o values[j]`, in the order of `values`.
    pub table: Vec<Vec<Vec<Scalar>>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LawKind {
    Monster,
    GeneralizedMonster,
}

/// Parsed `--law` argument.
#[derive(Clone, Debug)]
pub enum LawSpec {
    Law(FusionLaw),
    Infer,
}

impl LawSpec {
    /// Accepts `M:<a>,<b>`, `GM:<a>,<b>` and `infer`.
    pub fn parse(text: &str, field: FieldSpec) -> Result<LawSpec> {
        let text = text.trim();
        if text == "infer" {
            return Ok(LawSpec::Infer);
        }
        let bad = || Error::InvalidLawSpec(text.to_string());
        let (kind, rest) = text.split_once(':').ok_or_else(bad)?;
        let kind = match kind {
            "M" => LawKind::Monster,
            "GM" => LawKind::GeneralizedMonster,
            _ => return Err(bad()),
        };
        let (a, b) = rest.split_once(',').ok_or_else(bad)?;
        let alpha = Scalar::parse(a.trim(), field)?;
        let beta = Scalar::parse(b.trim(), field)?;
        Ok(LawSpec::Law(FusionLaw::make(kind, alpha, beta)?))
    }
}

impl FusionLaw {
    /// `M(alpha, beta)` or `GM(alpha, beta)` on the values `1, 0, alpha, beta`.
    pub fn make(kind: LawKind, alpha: Scalar, beta: Scalar) -> Result<FusionLaw> {
        let field = alpha.field();
        let (one, zero) = (field.one(), field.zero());
        let values = vec![one.clone(), zero.clone(), alpha.clone(), beta.clone()];
        for i in 0..4 {
            if values[i + 1..].contains(&values[i]) {
                return Err(Error::CoincidentLawValues);
            }
        }
        let (o, z, a, b) = (one, zero, alpha, beta);
        let gm = kind == LawKind::GeneralizedMonster;
        let zz = if gm { vec![o.clone(), z.clone()] } else { vec![z.clone()] };
        let aa = if gm { vec![o.clone(), z.clone(), a.clone()] } else { vec![o.clone(), z.clone()] };
        let rows: [[Vec<Scalar>; 4]; 4] = [
            [vec![o.clone()], vec![], vec![a.clone()], vec![b.clone()]],
            [vec![], zz, vec![a.clone()], vec![b.clone()]],
            [vec![a.clone()], vec![a.clone()], aa, vec![b.clone()]],
            [vec![b.clone()], vec![b.clone()], vec![b.clone()], vec![o, z, a.clone()]],
        ];
        let prefix = if gm { "GM" } else { "M" };
        let name = format!("{prefix}({a},{b})");
        FusionLaw::custom(Some(name), values, rows.into_iter().map(|r| r.into_iter().collect()).collect())
    }

    /// An explicit table; every cell must be given and draw from `values`.
    pub fn custom(name: Option<String>, values: Vec<Scalar>, table: Vec<Vec<Vec<Scalar>>>) -> Result<FusionLaw> {
        for i in 0..values.len() {
            if values[i + 1..].contains(&values[i]) {
                return Err(Error::CoincidentLawValues);
            }
        }
        let k = values.len();
        if table.len() != k || table.iter().any(|row| row.len() != k) {
            return Err(Error::Format(format!("fusion table must be {k}x{k}")));
        }
        let table = table
            .into_iter()
            .map(|row| row.into_iter().map(|cell| order_like(&values, &cell)).collect::<Result<Vec<_>>>())
            .collect::<Result<Vec<_>>>()?;
        Ok(FusionLaw { name, values, table })
    }

    pub fn index_of(&self, x: &Scalar) -> Option<usize> {
        self.values.iter().position(|v| v == x)
    }

    /// `mu o nu`, or `None` when either value is outside the law.
    pub fn cell(&self, mu: &Scalar, nu: &Scalar) -> Option<&[Scalar]> {
        Some(&self.table[self.index_of(mu)?][self.index_of(nu)?])
    }

    pub fn is_symmetric(&self) -> bool {
        let k = self.values.len();
        (0..k).all(|i| (0..k).all(|j| self.table[i][j] == self.table[j][i]))
    }

    /// Every value and every cell of `self` is contained in `other`.
    pub fn is_contained_in(&self, other: &FusionLaw) -> bool {
        self.values.iter().all(|mu| {
            self.values.iter().all(|nu| match (self.cell(mu, nu), other.cell(mu, nu)) {
                (Some(mine), Some(theirs)) => mine.iter().all(|x| theirs.contains(x)),
                _ => false,
            })
        })
    }

    /// Checks the sign rules of a `Z_2`-grading with parts `plus` and `minus`.
    pub fn is_graded(&self, plus: &[Scalar], minus: &[Scalar]) -> bool {
        let sign = |x: &Scalar| -> Option<bool> {
            if plus.contains(x) {
                Some(true)
            } else if minus.contains(x) {
                Some(false)
            } else {
                None
            }
        };
        self.values.iter().all(|mu| {
            self.values.iter().all(|nu| {
                let (Some(s), Some(t)) = (sign(mu), sign(nu)) else { return false };
                let expected = s == t;
                self.cell(mu, nu).is_some_and(|c| c.iter().all(|x| sign(x) == Some(expected)))
            })
        })
    }
}

fn order_like(values: &[Scalar], cell: &[Scalar]) -> Result<Vec<Scalar>> {
    if let Some(x) = cell.iter().find(|x| !values.contains(x)) {
        return Err(Error::Format(format!("fusion table entry {x} is not a law value")));
    }
    Ok(values.iter().filter(|v| cell.contains(v)).cloned().collect())
}

impl fmt::Display for FusionLaw {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let head: Vec<String> = self.values.iter().map(|v| v.to_string()).collect();
        writeln!(f, "{}", self.name.as_deref().unwrap_or("law"))?;
        for (i, mu) in self.values.iter().enumerate() {
            let cells: Vec<String> = self.table[i]
                .iter()
                .map(|c| format!("{{{}}}", c.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",")))
                .collect();
            writeln!(f, "  {mu} o [{}] = {}", head.join(", "), cells.join(" "))?;
        }
        Ok(())
    }
}

/// A pair of eigenvectors whose product has a nonzero component at some eigenvalue.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    /// Positions inside the respective eigenspace bases.
    pub left_index: usize,
    pub right_index: usize,
    pub left: ExactVector,
    pub right: ExactVector,
    /// Projection of `left * right` onto the offending eigenspace.
    pub component: ExactVector,
}

/// For every ordered pair of eigenspaces, the eigenspaces met by products,
/// each with the first witness found.
#[derive(Clone, Debug, Serialize)]
pub struct ProductSupports {
    pub axis: usize,
    pub side: Side,
    pub eigenvalues: Vec<Scalar>,
    /// `cells[i][j][k]` is set iff some product of `V_i` and `V_j` has a nonzero `V_k` component.
    pub cells: Vec<Vec<Vec<Option<Witness>>>>,
}

impl ProductSupports {
    pub fn compute(alg: &GmAlgebra, dec: &SpectralDecomposition) -> Result<ProductSupports> {
        dec.require_semisimple()?;
        let field = alg.field();
        let n = alg.dim();
        let columns: Vec<ExactVector> = dec.parts.iter().flat_map(|p| p.basis.iter().cloned()).collect();
        let p_inv = Matrix::from_columns(field, n, &columns)
            .inverse()
            .expect("eigenvectors of distinct eigenvalues form a basis");
        let mut offsets = Vec::with_capacity(dec.parts.len() + 1);
        offsets.push(0);
        for part in &dec.parts {
            offsets.push(offsets.last().unwrap() + part.dim);
        }
        let k = dec.parts.len();
        let mut cells = vec![vec![vec![None; k]; k]; k];
        for i in 0..k {
            for j in 0..k {
                let cell: &mut Vec<Option<Witness>> = &mut cells[i][j];
                'pairs: for (s, u) in dec.parts[i].basis.iter().enumerate() {
                    for (t, v) in dec.parts[j].basis.iter().enumerate() {
                        let coords = p_inv.mul_vec(&alg.multiply(u, v));
                        for (r, slot) in cell.iter_mut().enumerate() {
                            if slot.is_some() || coords[offsets[r]..offsets[r + 1]].iter().all(Scalar::is_zero) {
                                continue;
                            }
                            let mut component = alg.zero();
                            for (c, w) in coords[offsets[r]..offsets[r + 1]].iter().zip(&dec.parts[r].basis) {
                                crate::exact::axpy(&mut component, c, w);
                            }
                            *slot = Some(Witness {
                                left_index: s,
                                right_index: t,
                                left: u.clone(),
                                right: v.clone(),
                                component,
                            });
                        }
                        if cell.iter().all(Option::is_some) {
                            break 'pairs;
                        }
                    }
                }
            }
        }
        Ok(ProductSupports { axis: dec.axis, side: dec.side, eigenvalues: dec.eigenvalues(), cells })
    }

    /// The minimal law these products obey.
    pub fn law(&self) -> FusionLaw {
        let table = self
            .cells
            .iter()
            .map(|row| {
                row.iter()
                    .map(|cell| {
                        cell.iter()
                            .zip(&self.eigenvalues)
                            .filter(|(w, _)| w.is_some())
                            .map(|(_, v)| v.clone())
                            .collect()
                    })
                    .collect()
            })
            .collect();
        FusionLaw { name: Some("inferred".into()), values: self.eigenvalues.clone(), table }
    }

    pub fn check(&self, law: &FusionLaw) -> Vec<Violation> {
        let mut out: Vec<Violation> = self
            .eigenvalues
            .iter()
            .filter(|v| law.index_of(v).is_none())
            .map(|v| Violation::Uncovered { eigenvalue: v.clone() })
            .collect();
        for (i, mu) in self.eigenvalues.iter().enumerate() {
            for (j, nu) in self.eigenvalues.iter().enumerate() {
                let Some(allowed) = law.cell(mu, nu) else { continue };
                for (r, lambda) in self.eigenvalues.iter().enumerate() {
                    if let Some(w) = &self.cells[i][j][r] {
                        if !allowed.contains(lambda) {
                            out.push(Violation::Product {
                                left: mu.clone(),
                                right: nu.clone(),
                                offending: lambda.clone(),
                                witness: w.clone(),
                            });
                        }
                    }
                }
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    /// An eigenvalue of the operator that the law does not list.
    Uncovered { eigenvalue: Scalar },
    /// `left o right` misses `offending`, which the witness product reaches.
    Product { left: Scalar, right: Scalar, offending: Scalar, witness: Witness },
}

#[derive(Clone, Debug, Serialize)]
pub struct FusionReport {
    pub axis: usize,
    pub side: Side,
    pub law: FusionLaw,
    pub pass: bool,
    pub violations: Vec<Violation>,
}

pub fn verify_axis(alg: &GmAlgebra, a: usize, law: &FusionLaw, side: Side) -> Result<FusionReport> {
    let dec = decompose(alg, a, side)?;
    let supports = ProductSupports::compute(alg, &dec)?;
    let violations = supports.check(law);
    Ok(FusionReport { axis: a, side, law: law.clone(), pass: violations.is_empty(), violations })
}

#[derive(Clone, Debug, Serialize)]
pub struct InferredLaw {
    pub axis: usize,
    pub side: Side,
    pub law: FusionLaw,
    /// One entry per listed value of every cell.
    pub witnesses: Vec<CellWitness>,
}

#[derive(Clone, Debug, Serialize)]
pub struct CellWitness {
    pub left: Scalar,
    pub right: Scalar,
    pub value: Scalar,
    pub witness: Witness,
}

pub fn infer_law(alg: &GmAlgebra, a: usize, side: Side) -> Result<InferredLaw> {
    let dec = decompose(alg, a, side)?;
    let supports = ProductSupports::compute(alg, &dec)?;
    let mut witnesses = Vec::new();
    for (i, mu) in supports.eigenvalues.iter().enumerate() {
        for (j, nu) in supports.eigenvalues.iter().enumerate() {
            for (r, lambda) in supports.eigenvalues.iter().enumerate() {
                if let Some(w) = &supports.cells[i][j][r] {
                    witnesses.push(CellWitness { left: mu.clone(), right: nu.clone(), value: lambda.clone(), witness: w.clone() });
                }
            }
        }
    }
    Ok(InferredLaw { axis: a, side, law: supports.law(), witnesses })
}

/// Outcome of checking `A_+ * A_+ ⊆ A_+`, `A_- * A_- ⊆ A_+` and the mixed rules on basis pairs.
#[derive(Clone, Debug, Serialize)]
pub struct GradingCheck {
    pub axis: usize,
    pub plus_dim: usize,
    pub minus_dim: usize,
    pub pass: bool,
    /// First failing pair as `(left sign, right sign, left index, right index)`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub failure: Option<(char, char, usize, usize)>,
}

pub fn check_grading(alg: &GmAlgebra, a: usize) -> Result<GradingCheck> {
    let split = plus_minus_split(alg, a)?;
    let n = alg.dim();
    let mut columns = split.plus.clone();
    columns.extend(split.minus.iter().cloned());
    let p_inv = Matrix::from_columns(alg.field(), n, &columns)
        .inverse()
        .ok_or(Error::NotSemisimple { axis: a, side: "left", deficit: 0 })?;
    let k = split.plus.len();
    let parts: [(char, &Vec<ExactVector>); 2] = [('+', &split.plus), ('-', &split.minus)];
    for (si, left) in parts {
        for (sj, right) in parts {
            let target_plus = si == sj;
            for (s, u) in left.iter().enumerate() {
                for (t, v) in right.iter().enumerate() {
                    let coords = p_inv.mul_vec(&alg.multiply(u, v));
                    let leak = if target_plus { &coords[k..] } else { &coords[..k] };
                    if leak.iter().any(|c| !c.is_zero()) {
                        return Ok(GradingCheck {
                            axis: a,
                            plus_dim: k,
                            minus_dim: n - k,
                            pass: false,
                            failure: Some((si, sj, s, t)),
                        });
                    }
                }
            }
        }
    }
    Ok(GradingCheck { axis: a, plus_dim: k, minus_dim: n - k, pass: true, failure: None })
}

#[derive(Clone, Debug, Serialize)]
pub struct MiyamotoReport {
    pub order: GroupOrder,
    pub conjugation_order: GroupOrder,
    pub generators: Vec<Permutation>,
    /// Axes whose `tau` is not a basis permutation.
    pub non_permutation_axes: Vec<usize>,
    /// Axes whose `tau` differs from conjugation.
    pub mismatched_axes: Vec<usize>,
    pub matches_conjugation: bool,
}

pub fn miyamoto_group(alg: &GmAlgebra, cap: usize) -> Result<MiyamotoReport> {
    let sys = alg.system();
    let n = alg.dim();
    let mut generators = Vec::with_capacity(n);
    let mut non_permutation_axes = Vec::new();
    let mut mismatched_axes = Vec::new();
    for a in 0..n {
        match tau_permutation(alg, a)? {
            Some(perm) => {
                if perm != sys.conjugation_permutation(a) {
                    mismatched_axes.push(a);
                }
                generators.push(perm);
            }
            None => non_permutation_axes.push(a),
        }
    }
    let group = generate(n, &generators, cap);
    let (conj, _) = sys.conjugation_group(cap);
    let matches_conjugation = non_permutation_axes.is_empty()
        && mismatched_axes.is_empty()
        && group.order == conj.order
        && group.elements == conj.elements;
    Ok(MiyamotoReport {
        order: group.order,
        conjugation_order: conj.order,
        generators,
        non_permutation_axes,
        mismatched_axes,
        matches_conjugation,
    })
}

/// Result of the bounded search for an `eta` making an axis of `dihedral:p`
/// an `M(alpha, -alpha)`-axis.
#[derive(Clone, Debug, Serialize)]
pub struct EtaScan {
    pub p: u64,
    pub bound: i64,
    pub tried: usize,
    /// `(eta, alpha)` pairs that passed; expected empty.
    pub passing: Vec<(Scalar, Scalar)>,
}

/// Tries every rational `eta = r/s` with `|r|, s <= bound` in good
/// characteristic and every `alpha` in `{±lambda1, ±lambda2}`.
pub fn monster_eta_scan(p: u64, bound: i64) -> Result<EtaScan> {
    let field = FieldSpec::Rationals;
    let sys = crate::system::dihedral(p)?;
    let mut etas: Vec<Scalar> = Vec::new();
    for s in 1..=bound {
        for r in -bound..=bound {
            let eta = field.ratio(r, s);
            if !etas.contains(&eta) {
                etas.push(eta);
            }
        }
    }
    let mut tried = 0;
    let mut passing = Vec::new();
    for eta in etas {
        let Ok(alg) = GmAlgebra::build(sys.clone(), eta.clone(), false) else { continue };
        tried += 1;
        let dec = decompose(&alg, 0, Side::Left)?;
        let supports = ProductSupports::compute(&alg, &dec)?;
        let (l1, l2) = lambda_params(p, &eta);
        let mut alphas: Vec<Scalar> = Vec::new();
        for x in [l2.clone(), -&l2, l1.clone(), -&l1] {
            if !alphas.contains(&x) {
                alphas.push(x);
            }
        }
        for alpha in alphas {
            let Ok(law) = FusionLaw::make(LawKind::Monster, alpha.clone(), -&alpha) else { continue };
            if supports.check(&law).is_empty() {
                passing.push((eta.clone(), alpha));
            }
        }
    }
    Ok(EtaScan { p, bound, tried, passing })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{dihedral, frobenius};

    const Q: FieldSpec = FieldSpec::Rationals;

    fn law(text: &str) -> FusionLaw {
        match LawSpec::parse(text, Q).unwrap() {
            LawSpec::Law(l) => l,
            LawSpec::Infer => panic!("expected a law"),
        }
    }

    fn q(s: &str) -> Scalar {
        Scalar::parse(s, Q).unwrap()
    }

    #[test]
    fn law_tables() {
        let m = law("M:4/3,-4/3");
        assert_eq!(m.cell(&q("4/3"), &q("-4/3")).unwrap(), &[q("-4/3")]);
        assert_eq!(m.cell(&q("1"), &q("0")).unwrap(), &[] as &[Scalar]);
        assert_eq!(m.cell(&q("-4/3"), &q("-4/3")).unwrap(), &[q("1"), q("0"), q("4/3")]);
        assert!(m.is_symmetric());
        let gm = law("GM:6/5,-6/5");
        assert_eq!(gm.cell(&q("0"), &q("0")).unwrap(), &[q("1"), q("0")]);
        assert!(law("M:6/5,-6/5").is_contained_in(&gm));
        assert!(!gm.is_contained_in(&law("M:6/5,-6/5")));
        assert!(m.is_graded(&[q("1"), q("0"), q("4/3")], &[q("-4/3")]));
        assert!(matches!(LawSpec::parse("M:2,2", Q), Err(Error::CoincidentLawValues)));
        assert!(matches!(LawSpec::parse("M:0,2", Q), Err(Error::CoincidentLawValues)));
        assert!(matches!(LawSpec::parse("X:1,2", Q), Err(Error::InvalidLawSpec(_))));
        assert!(matches!(LawSpec::parse("infer", Q), Ok(LawSpec::Infer)));
    }

    #[test]
    fn dihedral5_is_monster_axis() {
        let alg = GmAlgebra::build(dihedral(5).unwrap(), q("-1/3"), false).unwrap();
        let report = verify_axis(&alg, 0, &law("M:4/3,-4/3"), Side::Left).unwrap();
        assert!(report.pass, "{:?}", report.violations);
        let inferred = infer_law(&alg, 0, Side::Left).unwrap();
        assert!(inferred.law.is_contained_in(&law("M:4/3,-4/3")));
        assert_eq!(inferred.law.cell(&q("1"), &q("1")).unwrap(), &[q("1")]);
    }

    #[test]
    fn dihedral7_breaks_monster_in_alpha_alpha() {
        let alg = GmAlgebra::build(dihedral(7).unwrap(), q("-1/5"), false).unwrap();
        assert!(verify_axis(&alg, 0, &law("GM:6/5,-6/5"), Side::Left).unwrap().pass);
        let report = verify_axis(&alg, 0, &law("M:6/5,-6/5"), Side::Left).unwrap();
        assert!(!report.pass);
        let alpha = q("6/5");
        assert!(report.violations.iter().any(|v| matches!(v,
            Violation::Product { left, right, offending, .. } if *left == alpha && *right == alpha && *offending == alpha)));
    }

    #[test]
    fn inferred_law_verifies_itself() {
        let alg = GmAlgebra::build(frobenius(3, 2).unwrap(), q("2/5"), false).unwrap();
        let inferred = infer_law(&alg, 4, Side::Left).unwrap();
        assert!(verify_axis(&alg, 4, &inferred.law, Side::Left).unwrap().pass);
    }

    #[test]
    fn grading_and_miyamoto_on_dihedral5() {
        let alg = GmAlgebra::build(dihedral(5).unwrap(), q("2/5"), false).unwrap();
        for a in 0..5 {
            assert!(check_grading(&alg, a).unwrap().pass);
        }
        let miy = miyamoto_group(&alg, 1000).unwrap();
        assert_eq!(miy.order, GroupOrder::Exact(10));
        assert!(miy.matches_conjugation);
    }
}
