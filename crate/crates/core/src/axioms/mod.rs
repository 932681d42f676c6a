//! Group-free recognition of `GM(p, eta)`-type algebras from structure
//! constants, and reconstruction of the transposition system.

mod audit;

pub use audit::{audit_lemmas, AuditEntry, AuditReport, Reading};

use serde::Serialize;

use crate::algebra::{GmAlgebra, SparseVec};
use crate::error::{Error, Result};
use crate::exact::{FieldSpec, Scalar};
use crate::system::{GroupOrder, TranspositionSystem, DEFAULT_GROUP_CAP};

/// Structure constants on a labelled basis, with no group attached.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractAlgebra {
    field: FieldSpec,
    eta: Scalar,
    p: u64,
    labels: Vec<String>,
    products: Vec<Vec<SparseVec>>,
}

fn normalize(mut v: SparseVec) -> SparseVec {
    v.retain(|(_, c)| !c.is_zero());
    v.sort_by_key(|(k, _)| *k);
    v
}

impl AbstractAlgebra {
    /// `products[i][j]` must be given for every ordered pair.
    pub fn new(eta: Scalar, p: Option<u64>, labels: Vec<String>, products: Vec<Vec<SparseVec>>) -> Result<Self> {
        let field = eta.field();
        if eta.is_zero() || eta.is_one() {
            return Err(Error::DegenerateEta(eta.to_string()));
        }
        let n = products.len();
        if labels.len() != n {
            return Err(Error::Format(format!("{} labels for dimension {n}", labels.len())));
        }
        if n < 2 {
            return Err(Error::Format("an abstract algebra needs at least two basis elements".into()));
        }
        for (i, row) in products.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!("product row {i} has {} entries, expected {n}", row.len())));
            }
            for (j, v) in row.iter().enumerate() {
                for (k, c) in v {
                    if *k >= n {
                        return Err(Error::IndexOutOfRange { index: *k, dim: n });
                    }
                    if c.field() != field {
                        return Err(Error::Format(format!("coefficient of e{i}*e{j} lies in the wrong field")));
                    }
                }
                let mut seen: Vec<usize> = v.iter().map(|(k, _)| *k).collect();
                seen.sort_unstable();
                if seen.windows(2).any(|w| w[0] == w[1]) {
                    return Err(Error::Format(format!("repeated basis index in e{i}*e{j}")));
                }
            }
        }
        let products: Vec<Vec<SparseVec>> =
            products.into_iter().map(|row| row.into_iter().map(normalize).collect()).collect();
        let p = match p {
            Some(p) => p,
            None => products[0][1].len() as u64,
        };
        Ok(AbstractAlgebra { field, eta, p, labels, products })
    }

    pub fn from_gm(alg: &GmAlgebra) -> Self {
        AbstractAlgebra {
            field: alg.field(),
            eta: alg.eta().clone(),
            p: alg.p(),
            labels: alg.system().labels().to_vec(),
            products: alg.products().to_vec(),
        }
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn eta(&self) -> &Scalar {
        &self.eta
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn dim(&self) -> usize {
        self.products.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn product(&self, i: usize, j: usize) -> &SparseVec {
        &self.products[i][j]
    }

    pub fn products(&self) -> &[Vec<SparseVec>] {
        &self.products
    }

    /// Replaces the coefficient of `e_k` in `e_i * e_j`.
    pub fn with_entry(&self, i: usize, j: usize, k: usize, value: Scalar) -> Self {
        let mut out = self.clone();
        let cell = &mut out.products[i][j];
        cell.retain(|(x, _)| *x != k);
        cell.push((k, value));
        out.products[i][j] = normalize(std::mem::take(cell));
        out
    }
}

/// Dihedral data read off a single product.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RecoveredPair {
    /// Sorted support of `e_i * e_j`.
    pub set: Vec<usize>,
    /// The label carrying coefficient 1.
    pub conjugate: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub i: usize,
    pub j: usize,
    pub detail: String,
}

/// `I(i, j)` as the support of `e_i * e_j` and `j^i` as its unique coefficient-1 label.
pub fn recover_dihedral(alg: &AbstractAlgebra, i: usize, j: usize) -> Result<std::result::Result<RecoveredPair, Witness>> {
    let n = alg.dim();
    for idx in [i, j] {
        if idx >= n {
            return Err(Error::IndexOutOfRange { index: idx, dim: n });
        }
    }
    if i == j {
        return Err(Error::SameIndex(i));
    }
    let prod = alg.product(i, j);
    let fail = |detail: String| Ok(Err(Witness { i, j, detail }));
    if prod.len() as u64 != alg.p() {
        return fail(format!("support of e{i}*e{j} has size {}, expected {}", prod.len(), alg.p()));
    }
    let ones: Vec<usize> = prod.iter().filter(|(_, c)| c.is_one()).map(|(k, _)| *k).collect();
    if ones.len() != 1 {
        return fail(format!("e{i}*e{j} has {} coefficients equal to 1", ones.len()));
    }
    if let Some((k, c)) = prod.iter().find(|(_, c)| !c.is_one() && c != alg.eta()) {
        return fail(format!("coefficient {c} at e{k} in e{i}*e{j} is neither 1 nor eta"));
    }
    let set: Vec<usize> = prod.iter().map(|(k, _)| *k).collect();
    if !set.contains(&i) || !set.contains(&j) {
        return fail(format!("support of e{i}*e{j} misses a factor"));
    }
    Ok(Ok(RecoveredPair { set, conjugate: ones[0] }))
}

/// Verdict for one axiom; witnesses are truncated to [`MAX_WITNESSES`].
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct AxiomCheck {
    pub pass: bool,
    pub failures: usize,
    pub witnesses: Vec<Witness>,
}

pub const MAX_WITNESSES: usize = 16;

impl AxiomCheck {
    fn record(&mut self, w: Witness) {
        self.failures += 1;
        if self.witnesses.len() < MAX_WITNESSES {
            self.witnesses.push(w);
        }
    }

    fn finish(mut self) -> Self {
        self.pass = self.failures == 0;
        self
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Reconstruction {
    pub group_order: GroupOrder,
    pub isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub first_difference: Option<(usize, usize)>,
}

#[derive(Clone, Debug, Serialize)]
pub struct AxiomReport {
    pub axiom1: AxiomCheck,
    pub axiom2: AxiomCheck,
    pub axiom3: AxiomCheck,
    pub axiom4: AxiomCheck,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub recovered_conj: Option<Vec<Vec<usize>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reconstruction: Option<Reconstruction>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.axiom1.pass && self.axiom2.pass && self.axiom3.pass && self.axiom4.pass
    }
}

/// `e_{phi(k)}` coefficients of `v` relabelled by `phi`, sorted.
fn relabel(v: &SparseVec, phi: &[usize]) -> SparseVec {
    normalize(v.iter().map(|(k, c)| (phi[*k], c.clone())).collect())
}

pub fn verify_gm_type(alg: &AbstractAlgebra) -> AxiomReport {
    let n = alg.dim();
    let p = alg.p() as usize;
    let one = alg.field().one();

    let mut axiom1 = AxiomCheck::default();
    for i in 0..n {
        if alg.product(i, i) != &vec![(i, one.clone())] {
            axiom1.record(Witness { i, j: i, detail: format!("e{i}*e{i} is not e{i}") });
        }
    }
    let axiom1 = axiom1.finish();

    // Pairwise recovery feeds both axiom 2 and the conjugation table.
    let mut axiom2 = AxiomCheck::default();
    let mut recovered: Vec<Vec<Option<RecoveredPair>>> = vec![vec![None; n]; n];
    for i in 0..n {
        for j in 0..n {
            if i == j {
                continue;
            }
            match recover_dihedral(alg, i, j).expect("indices are in range and distinct") {
                Ok(r) => recovered[i][j] = Some(r),
                Err(w) => axiom2.record(w),
            }
        }
    }
    let conj_table: Option<Vec<Vec<usize>>> = (0..n)
        .map(|x| {
            (0..n)
                .map(|a| if x == a { Some(a) } else { recovered[a][x].as_ref().map(|r| r.conjugate) })
                .collect::<Option<Vec<usize>>>()
        })
        .collect();

    if let Some(conj) = &conj_table {
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                if let Err(detail) = check_dihedral_pair(alg, conj, i, j, p) {
                    axiom2.record(Witness { i, j, detail });
                }
            }
        }
    }
    let axiom2 = axiom2.finish();

    let mut axiom3 = AxiomCheck::default();
    for a in 0..n {
        let block = |b: usize| -> Option<Vec<usize>> {
            recovered[a][b].as_ref().map(|r| r.set.iter().copied().filter(|&x| x != a).collect())
        };
        for b in 0..n {
            if b == a {
                continue;
            }
            let Some(bb) = block(b) else {
                axiom3.record(Witness { i: a, j: b, detail: format!("I({a}, {b}) was not recovered") });
                continue;
            };
            if bb.len() != p - 1 {
                axiom3.record(Witness { i: a, j: b, detail: format!("block of {b} at {a} has size {}", bb.len()) });
                continue;
            }
            if let Some(&c) = bb.iter().find(|&&c| block(c).as_ref() != Some(&bb)) {
                axiom3.record(Witness {
                    i: a,
                    j: b,
                    detail: format!("blocks of {b} and {c} at {a} overlap without being equal"),
                });
            }
        }
    }
    let axiom3 = axiom3.finish();

    let mut axiom4 = AxiomCheck::default();
    match &conj_table {
        None => axiom4.record(Witness { i: 0, j: 0, detail: "conjugation table could not be recovered".into() }),
        Some(conj) => {
            for a in 0..n {
                let phi: Vec<usize> = (0..n).map(|b| conj[b][a]).collect();
                let mut seen = vec![false; n];
                if phi.iter().any(|&x| std::mem::replace(&mut seen[x], true)) {
                    axiom4.record(Witness { i: a, j: a, detail: format!("b -> b^{a} is not a bijection") });
                    continue;
                }
                'pairs: for x in 0..n {
                    for y in 0..n {
                        if relabel(alg.product(x, y), &phi) != *alg.product(phi[x], phi[y]) {
                            axiom4.record(Witness {
                                i: x,
                                j: y,
                                detail: format!("conjugation by {a} does not preserve e{x}*e{y}"),
                            });
                            break 'pairs;
                        }
                    }
                }
            }
        }
    }
    let axiom4 = axiom4.finish();

    let mut report = AxiomReport { axiom1, axiom2, axiom3, axiom4, recovered_conj: conj_table, reconstruction: None };
    if report.passed() {
        report.reconstruction = reconstruct_and_compare(alg, &report).ok();
    }
    report
}

/// The `p x p` constants on the recurrence order of `I(i, j)` must be those of
/// the reflections of the dihedral group of order `2p`.
fn check_dihedral_pair(alg: &AbstractAlgebra, conj: &[Vec<usize>], i: usize, j: usize, p: usize) -> std::result::Result<(), String> {
    let mut seq = vec![i, j];
    while seq.len() < p {
        let k = seq.len();
        seq.push(conj[seq[k - 2]][seq[k - 1]]);
    }
    let mut set = seq.clone();
    set.sort_unstable();
    set.dedup();
    let support: Vec<usize> = alg.product(i, j).iter().map(|(k, _)| *k).collect();
    if set != support {
        return Err(format!("recurrence from ({i}, {j}) gives {seq:?}, support is {support:?}"));
    }
    let one = alg.field().one();
    for k in 0..p {
        for l in 0..p {
            let expected: SparseVec = if k == l {
                vec![(seq[k], one.clone())]
            } else {
                let target = seq[(2 * k + p - l) % p];
                normalize(seq.iter().map(|&x| (x, if x == target { one.clone() } else { alg.eta().clone() })).collect())
            };
            if *alg.product(seq[k], seq[l]) != expected {
                return Err(format!("e{}*e{} differs from the dihedral model inside I({i}, {j})", seq[k], seq[l]));
            }
        }
    }
    Ok(())
}

/// Rebuilds the algebra from the recovered conjugation table and compares
/// structure constants entrywise.
pub fn reconstruct_and_compare(alg: &AbstractAlgebra, report: &AxiomReport) -> Result<Reconstruction> {
    let conj = report
        .recovered_conj
        .clone()
        .filter(|_| report.passed())
        .ok_or_else(|| Error::Format("reconstruction needs a passing axiom report".into()))?;
    let sys = TranspositionSystem::from_table_validated(alg.p(), alg.labels().to_vec(), conj)?;
    let rebuilt = GmAlgebra::build(sys, alg.eta().clone(), true)?;
    let n = alg.dim();
    let first_difference =
        (0..n).flat_map(|i| (0..n).map(move |j| (i, j))).find(|&(i, j)| rebuilt.product(i, j) != alg.product(i, j));
    let (group, _) = rebuilt.system().conjugation_group(DEFAULT_GROUP_CAP);
    Ok(Reconstruction { group_order: group.order, isomorphic: first_difference.is_none(), first_difference })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::{dihedral, frobenius};

    const Q: FieldSpec = FieldSpec::Rationals;

    fn abs(sys: TranspositionSystem, eta: &str) -> (GmAlgebra, AbstractAlgebra) {
        let alg = GmAlgebra::build(sys, Scalar::parse(eta, Q).unwrap(), false).unwrap();
        let abs = AbstractAlgebra::from_gm(&alg);
        (alg, abs)
    }

    #[test]
    fn recover_dihedral_example() {
        let (_, a) = abs(dihedral(5).unwrap(), "-1/3");
        let r = recover_dihedral(&a, 0, 1).unwrap().unwrap();
        assert_eq!(r.set, vec![0, 1, 2, 3, 4]);
        assert_eq!(r.conjugate, 4);
        assert!(matches!(recover_dihedral(&a, 1, 1), Err(Error::SameIndex(1))));
        let broken = a.with_entry(0, 1, 2, Q.zero());
        assert!(recover_dihedral(&broken, 0, 1).unwrap().is_err());
    }

    #[test]
    fn built_algebras_pass_and_round_trip() {
        for (sys, eta, order) in [(dihedral(7).unwrap(), "-1/5", 14), (frobenius(5, 2).unwrap(), "-1/3", 50)] {
            let conj = sys.table().to_vec();
            let (_, a) = abs(sys, eta);
            let report = verify_gm_type(&a);
            assert!(report.passed(), "{report:?}");
            assert_eq!(report.recovered_conj.as_ref(), Some(&conj));
            let rec = report.reconstruction.unwrap();
            assert!(rec.isomorphic);
            assert_eq!(rec.group_order, GroupOrder::Exact(order));
        }
    }

    #[test]
    fn perturbations_are_detected() {
        let (_, a) = abs(dihedral(5).unwrap(), "-1/3");
        for (i, j, k, v) in [(0, 1, 2, "1/7"), (0, 1, 4, "-1/3"), (2, 2, 2, "2"), (3, 1, 0, "5")] {
            let bad = a.with_entry(i, j, k, Scalar::parse(v, Q).unwrap());
            let report = verify_gm_type(&bad);
            assert!(!report.passed(), "({i},{j},{k}) -> {v}");
            assert!(report.reconstruction.is_none());
        }
    }

    #[test]
    fn new_rejects_partial_tables() {
        let eta = Scalar::parse("-1/3", Q).unwrap();
        assert!(AbstractAlgebra::new(eta.clone(), None, vec!["a".into()], vec![vec![vec![]]]).is_err());
        assert!(AbstractAlgebra::new(Q.one(), None, vec![], vec![]).is_err());
        let rows = vec![vec![vec![], vec![]], vec![vec![]]];
        assert!(AbstractAlgebra::new(eta, None, vec!["a".into(), "b".into()], rows).is_err());
    }
}
