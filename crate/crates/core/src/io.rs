//! JSON file formats for systems and algebras. Scalars are always strings.

use std::fs;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{GmAlgebra, SparseVec};
use crate::axioms::AbstractAlgebra;
use crate::error::{Error, Result};
use crate::exact::{FieldSpec, Scalar};
use crate::system::TranspositionSystem;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SystemFile {
    pub p: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    pub conj: Vec<Vec<usize>>,
}

impl SystemFile {
    pub fn from_system(sys: &TranspositionSystem) -> Self {
        SystemFile { p: sys.p(), labels: Some(sys.labels().to_vec()), conj: sys.table().to_vec() }
    }

    /// Rejects tables that fail validation.
    pub fn into_system(self) -> Result<TranspositionSystem> {
        let n = self.conj.len();
        let labels = self.labels.unwrap_or_else(|| (0..n).map(|i| format!("t{i}")).collect());
        TranspositionSystem::from_table_validated(self.p, labels, self.conj)
    }
}

/// `[i, j, [[k, "c"], ..]]`: the expansion of `e_i * e_j`.
pub type ProductEntry = (usize, usize, Vec<(usize, String)>);

/// Algebra file. A built algebra carries both the originating `system` and
/// the explicit `products`; either one alone is accepted on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AlgebraFile {
    pub field: String,
    pub eta: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub system: Option<SystemFile>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dim: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub labels: Option<Vec<String>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub products: Option<Vec<ProductEntry>>,
}

fn sparse_strings(v: &SparseVec) -> Vec<(usize, String)> {
    v.iter().map(|(k, c)| (*k, c.to_string())).collect()
}

impl AlgebraFile {
    pub fn from_algebra(alg: &GmAlgebra) -> Self {
        let n = alg.dim();
        let products = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, sparse_strings(alg.product(i, j))))
            .collect();
        AlgebraFile {
            field: alg.field().to_string(),
            eta: alg.eta().to_string(),
            system: Some(SystemFile::from_system(alg.system())),
            p: Some(alg.p()),
            dim: Some(n),
            labels: Some(alg.system().labels().to_vec()),
            products: Some(products),
        }
    }

    pub fn from_abstract(alg: &AbstractAlgebra) -> Self {
        let n = alg.dim();
        let products = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| (i, j, sparse_strings(alg.product(i, j))))
            .collect();
        AlgebraFile {
            field: alg.field().to_string(),
            eta: alg.eta().to_string(),
            system: None,
            p: Some(alg.p()),
            dim: Some(n),
            labels: Some(alg.labels().to_vec()),
            products: Some(products),
        }
    }

    pub fn field_spec(&self) -> Result<FieldSpec> {
        self.field.parse()
    }

    pub fn eta_scalar(&self) -> Result<Scalar> {
        Scalar::parse(&self.eta, self.field_spec()?)
    }

    /// Requires the `system` section.
    pub fn to_gm(&self, force: bool) -> Result<GmAlgebra> {
        let sys = self
            .system
            .clone()
            .ok_or_else(|| Error::Format("algebra file has no `system` section".into()))?
            .into_system()?;
        GmAlgebra::build(sys, self.eta_scalar()?, force)
    }

    /// Uses `products` when present, otherwise expands the `system` section.
    pub fn to_abstract(&self) -> Result<AbstractAlgebra> {
        let field = self.field_spec()?;
        let eta = self.eta_scalar()?;
        let Some(entries) = &self.products else {
            return Ok(AbstractAlgebra::from_gm(&self.to_gm(true)?));
        };
        let n = match self.dim {
            Some(n) => n,
            None => entries.iter().map(|(i, j, _)| i.max(j) + 1).max().unwrap_or(0),
        };
        let mut table: Vec<Vec<Option<SparseVec>>> = vec![vec![None; n]; n];
        for (i, j, terms) in entries {
            if *i >= n || *j >= n {
                return Err(Error::IndexOutOfRange { index: (*i).max(*j), dim: n });
            }
            let v = terms
                .iter()
                .map(|(k, c)| Ok((*k, Scalar::parse(c, field)?)))
                .collect::<Result<SparseVec>>()?;
            if table[*i][*j].replace(v).is_some() {
                return Err(Error::Format(format!("product ({i}, {j}) is given twice")));
            }
        }
        let products = table
            .into_iter()
            .enumerate()
            .map(|(i, row)| {
                row.into_iter()
                    .enumerate()
                    .map(|(j, v)| v.ok_or_else(|| Error::Format(format!("product ({i}, {j}) is missing"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let labels = self.labels.clone().unwrap_or_else(|| (0..n).map(|i| format!("t{i}")).collect());
        AbstractAlgebra::new(eta, self.p, labels, products)
    }
}

pub fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T> {
    let text = fs::read_to_string(path)?;
    Ok(serde_json::from_str(&text)?)
}

pub fn to_json_pretty<T: Serialize>(value: &T) -> Result<String> {
    let mut s = serde_json::to_string_pretty(value)?;
    s.push('\n');
    Ok(s)
}

/// Reads and validates a transposition system.
pub fn read_system(path: &Path) -> Result<TranspositionSystem> {
    read_json::<SystemFile>(path)?.into_system()
}

pub fn read_algebra(path: &Path) -> Result<AlgebraFile> {
    read_json(path)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::system::dihedral;

    #[test]
    fn algebra_round_trip() {
        let alg = GmAlgebra::build(dihedral(5).unwrap(), FieldSpec::Rationals.ratio(-1, 3), false).unwrap();
        let file = AlgebraFile::from_algebra(&alg);
        let text = to_json_pretty(&file).unwrap();
        let back: AlgebraFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back, file);
        assert_eq!(back.to_gm(false).unwrap().products(), alg.products());
        assert_eq!(back.to_abstract().unwrap(), AbstractAlgebra::from_gm(&alg));
    }

    #[test]
    fn abstract_form_without_system() {
        let alg = GmAlgebra::build(dihedral(3).unwrap(), FieldSpec::Rationals.from_int(-1), false).unwrap();
        let mut file = AlgebraFile::from_algebra(&alg);
        file.system = None;
        file.p = None;
        let abs = file.to_abstract().unwrap();
        assert_eq!(abs.p(), 3);
        assert!(file.to_gm(false).is_err());
        file.products.as_mut().unwrap().pop();
        assert!(matches!(file.to_abstract(), Err(Error::Format(_))));
    }

    #[test]
    fn system_file_is_validated() {
        let mut f = SystemFile::from_system(&dihedral(5).unwrap());
        assert!(f.clone().into_system().is_ok());
        f.conj[2][2] = 3;
        assert!(matches!(f.into_system(), Err(Error::InvalidSystem { .. })));
    }
}
