//! Finite transposition systems: the set `T` together with its conjugation
//! table. The group itself is never stored; its action on `T` is enough for
//! every algebra-side construction.

mod models;
mod perm;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::exact::is_prime;

pub use models::{burnside23, construct_model, dihedral, frobenius};
pub use perm::{generate, GroupClosure, GroupOrder, Permutation, DEFAULT_GROUP_CAP};

/// `conj[i][j]` is the index of `t_i` conjugated by `t_j`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TranspositionSystem {
    p: u64,
    labels: Vec<String>,
    conj: Vec<Vec<usize>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ValidationIssue {
    pub check: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub cell: Option<(usize, usize)>,
    pub detail: String,
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct ValidationReport {
    pub issues: Vec<ValidationIssue>,
}

impl ValidationReport {
    pub fn passed(&self) -> bool {
        self.issues.is_empty()
    }

    fn push(&mut self, check: &'static str, cell: Option<(usize, usize)>, detail: String) {
        self.issues.push(ValidationIssue { check, cell, detail });
    }
}

/// Partition of `T \ {a}` into the sets `I(a, b) \ {a}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockPartition {
    pub axis: usize,
    /// Each block lists `I(a, rep) \ {a}` in canonical order.
    pub blocks: Vec<Vec<usize>>,
    pub representatives: Vec<usize>,
}

impl TranspositionSystem {
    /// Builds a system without checking the group-theoretic invariants; only
    /// the table shape is enforced. Call [`TranspositionSystem::validate`]
    /// before trusting it.
    pub fn from_table(p: u64, labels: Vec<String>, conj: Vec<Vec<usize>>) -> Result<Self> {
        let n = conj.len();
        if labels.len() != n {
            return Err(Error::Format(format!("{} labels for a {n}x{n} table", labels.len())));
        }
        for (i, row) in conj.iter().enumerate() {
            if row.len() != n {
                return Err(Error::Format(format!("conj row {i} has length {}, expected {n}", row.len())));
            }
            if let Some(&bad) = row.iter().find(|&&x| x >= n) {
                return Err(Error::Format(format!("conj row {i} contains index {bad} >= {n}")));
            }
        }
        Ok(TranspositionSystem { p, labels, conj })
    }

    /// Like [`TranspositionSystem::from_table`] but rejects systems that fail validation.
    pub fn from_table_validated(p: u64, labels: Vec<String>, conj: Vec<Vec<usize>>) -> Result<Self> {
        let sys = Self::from_table(p, labels, conj)?;
        let report = sys.validate();
        match report.issues.first() {
            None => Ok(sys),
            Some(first) => Err(Error::InvalidSystem {
                count: report.issues.len(),
                first: format!("{}: {}", first.check, first.detail),
            }),
        }
    }

    pub fn n(&self) -> usize {
        self.conj.len()
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.conj
    }

    /// Index of `t_x ^ t_a`.
    pub fn conj(&self, x: usize, a: usize) -> usize {
        self.conj[x][a]
    }

    /// The permutation `x -> x^a` of `T`.
    pub fn conjugation_permutation(&self, a: usize) -> Permutation {
        Permutation::from_images((0..self.n()).map(|x| self.conj[x][a]).collect())
            .expect("conjugation by a transposition permutes T")
    }

    /// Canonical ordering of `I(i, j)`: `a_1 = i`, `a_2 = j`, `a_{k+1} = a_{k-1}^{a_k}`.
    pub fn dihedral_set(&self, i: usize, j: usize) -> Result<Vec<usize>> {
        let n = self.n();
        for idx in [i, j] {
            if idx >= n {
                return Err(Error::IndexOutOfRange { index: idx, dim: n });
            }
        }
        if i == j {
            return Err(Error::SameIndex(i));
        }
        Ok(self.recurrence(i, j, self.p as usize))
    }

    fn recurrence(&self, i: usize, j: usize, len: usize) -> Vec<usize> {
        let mut seq = vec![i, j];
        while seq.len() < len {
            let k = seq.len();
            seq.push(self.conj[seq[k - 2]][seq[k - 1]]);
        }
        seq.truncate(len);
        seq
    }

    /// Checks every structural invariant and collects all failures.
    pub fn validate(&self) -> ValidationReport {
        let mut report = ValidationReport::default();
        let n = self.n();
        let p = self.p as usize;
        if self.p < 3 || !is_prime(self.p) {
            report.push("prime", None, format!("p = {} is not an odd prime", self.p));
            return report;
        }
        if n < 2 {
            report.push("size", None, format!("|T| = {n} admits no pairs"));
            return report;
        }
        if !(n - 1).is_multiple_of(p - 1) {
            report.push("block-count", None, format!("|T| - 1 = {} is not divisible by p - 1 = {}", n - 1, p - 1));
        }
        for i in 0..n {
            if self.conj[i][i] != i {
                report.push("self-conjugation", Some((i, i)), format!("conj[{i}][{i}] = {}", self.conj[i][i]));
            }
        }
        let mut involutive = vec![true; n];
        for j in 0..n {
            for i in 0..n {
                let x = self.conj[i][j];
                if self.conj[x][j] != i {
                    report.push("involution", Some((i, j)), format!("conj[conj[{i}][{j}]][{j}] = {} != {i}", self.conj[x][j]));
                    involutive[j] = false;
                    break;
                }
            }
        }
        if !involutive.iter().all(|&ok| ok) {
            return report;
        }
        // Conjugation by a must respect conjugation: (x^y)^a = (x^a)^(y^a).
        'auto: for a in 0..n {
            for x in 0..n {
                for y in 0..n {
                    let lhs = self.conj[self.conj[x][y]][a];
                    let rhs = self.conj[self.conj[x][a]][self.conj[y][a]];
                    if lhs != rhs {
                        report.push(
                            "action",
                            Some((x, y)),
                            format!("conjugation by {a} does not commute with conj at ({x}, {y})"),
                        );
                        break 'auto;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                if i == j {
                    continue;
                }
                let seq = self.recurrence(i, j, p + 2);
                let mut distinct = seq[..p].to_vec();
                distinct.sort_unstable();
                distinct.dedup();
                if distinct.len() != p || seq[p] != i || seq[p + 1] != j {
                    report.push(
                        "dihedral-order",
                        Some((i, j)),
                        format!("canonical recurrence from ({i}, {j}) does not close after {p} distinct steps: {seq:?}"),
                    );
                    continue;
                }
                // Relabel a_k <-> k-1 and compare with reflections r^m s: (m, l) -> 2l - m.
                'cells: for k in 0..p {
                    for l in 0..p {
                        let expected = seq[(2 * l + p - k) % p];
                        if self.conj[seq[k]][seq[l]] != expected {
                            report.push(
                                "dihedral-action",
                                Some((seq[k], seq[l])),
                                format!("inside I({i}, {j}) conj[{}][{}] = {}, dihedral model gives {expected}", seq[k], seq[l], self.conj[seq[k]][seq[l]]),
                            );
                            break 'cells;
                        }
                    }
                }
            }
        }
        report
    }

    /// Greedy partition of `T \ {a}` into dihedral blocks, scanning in index order.
    pub fn blocks(&self, a: usize) -> Result<BlockPartition> {
        let n = self.n();
        if a >= n {
            return Err(Error::IndexOutOfRange { index: a, dim: n });
        }
        let mut assigned = vec![false; n];
        assigned[a] = true;
        let mut blocks = Vec::new();
        let mut representatives = Vec::new();
        for b in 0..n {
            if assigned[b] {
                continue;
            }
            let block: Vec<usize> = self.dihedral_set(a, b)?.into_iter().skip(1).collect();
            for &x in &block {
                assigned[x] = true;
            }
            blocks.push(block);
            representatives.push(b);
        }
        Ok(BlockPartition { axis: a, blocks, representatives })
    }

    /// The permutation group generated by conjugation with each element of `T`.
    pub fn conjugation_group(&self, cap: usize) -> (GroupClosure, Vec<Permutation>) {
        let gens: Vec<Permutation> = (0..self.n()).map(|a| self.conjugation_permutation(a)).collect();
        (generate(self.n(), &gens, cap), gens)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dihedral_conjugation_examples() {
        let d5 = dihedral(5).unwrap();
        assert_eq!(d5.conj(0, 1), 2);
        assert_eq!(d5.conj(1, 0), 4);
        assert!(d5.validate().passed());
        assert!(dihedral(7).unwrap().validate().passed());
    }

    #[test]
    fn dihedral_set_examples() {
        let d5 = dihedral(5).unwrap();
        assert_eq!(d5.dihedral_set(0, 1).unwrap(), vec![0, 1, 2, 3, 4]);
        assert_eq!(d5.dihedral_set(1, 0).unwrap(), vec![1, 0, 4, 3, 2]);
        assert!(matches!(d5.dihedral_set(2, 2), Err(Error::SameIndex(2))));
    }

    #[test]
    fn bad_diagonal_is_pinpointed() {
        let d5 = dihedral(5).unwrap();
        let mut conj = d5.table().to_vec();
        conj[2][2] = 3;
        let bad = TranspositionSystem::from_table(5, d5.labels().to_vec(), conj).unwrap();
        let report = bad.validate();
        assert!(!report.passed());
        assert!(report.issues.iter().any(|i| i.check == "self-conjugation" && i.cell == Some((2, 2))));
    }

    #[test]
    fn block_count_must_divide() {
        // Three points cannot carry a GM(5) structure.
        let conj = vec![vec![0, 0, 0], vec![1, 1, 1], vec![2, 2, 2]];
        let sys = TranspositionSystem::from_table(5, vec!["a".into(), "b".into(), "c".into()], conj).unwrap();
        let report = sys.validate();
        assert!(report.issues.iter().any(|i| i.check == "block-count"));
    }

    #[test]
    fn blocks_examples() {
        let d5 = dihedral(5).unwrap();
        let b = d5.blocks(0).unwrap();
        assert_eq!(b.blocks, vec![vec![1, 2, 3, 4]]);
        let f52 = frobenius(5, 2).unwrap();
        let b = f52.blocks(0).unwrap();
        assert_eq!(b.blocks.len(), 6);
        assert!(b.blocks.iter().all(|blk| blk.len() == 4));
    }

    #[test]
    fn conjugation_group_orders() {
        let (g, _) = dihedral(5).unwrap().conjugation_group(DEFAULT_GROUP_CAP);
        assert_eq!(g.order, GroupOrder::Exact(10));
        let (g, _) = frobenius(5, 2).unwrap().conjugation_group(DEFAULT_GROUP_CAP);
        assert_eq!(g.order, GroupOrder::Exact(50));
        let (g, _) = frobenius(5, 2).unwrap().conjugation_group(20);
        assert_eq!(g.order, GroupOrder::AtLeast(20));
    }

    #[test]
    fn malformed_tables_are_rejected() {
        assert!(TranspositionSystem::from_table(3, vec!["a".into()], vec![vec![0, 1]]).is_err());
        assert!(TranspositionSystem::from_table(3, vec!["a".into()], vec![vec![5]]).is_err());
    }
}
