//! JSON wire formats for fields, linearized polynomials and artifacts.
//! Field elements travel as their canonical integer encoding.

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::builder::{CodeArtifact, Mode};
use crate::error::{Error, Result};
use crate::field::{FElem, FieldCtx};
use crate::linq::LinPoly;
use crate::matrix::Matrix;

/// `{"p": int, "s": int, "modulus": [int, ...]}`; the modulus is optional on input.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FieldSpec {
    pub p: u64,
    pub s: u32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub modulus: Option<Vec<u64>>,
}

impl FieldSpec {
    pub fn build(&self) -> Result<FieldCtx> {
        FieldCtx::new(self.p, self.s, self.modulus.as_deref())
    }

    pub fn of(field: &FieldCtx) -> Self {
        FieldSpec { p: field.p(), s: field.s(), modulus: Some(field.modulus().to_vec()) }
    }
}

/// Nonzero `(i, coefficient)` pairs.
pub fn linpoly_to_pairs(f: &LinPoly) -> Vec<(usize, u64)> {
    f.to_pairs().into_iter().map(|(i, c)| (i, c.value())).collect()
}

pub fn linpoly_from_pairs(field: &Arc<FieldCtx>, pairs: &[(usize, u64)]) -> Result<LinPoly> {
    let elems = pairs
        .iter()
        .map(|&(i, c)| field.elem(c).map(|e| (i, e)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LinPoly::from_pairs(field, &elems))
}

pub fn matrix_to_ints(m: &Matrix) -> Vec<Vec<u64>> {
    m.to_rows().into_iter().map(|r| r.into_iter().map(FElem::value).collect()).collect()
}

pub fn matrix_from_ints(field: &FieldCtx, rows: &[Vec<u64>]) -> Result<Matrix> {
    let rows = rows
        .iter()
        .map(|r| r.iter().map(|&v| field.elem(v)).collect::<Result<Vec<_>>>())
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArtifactJson {
    pub field: FieldSpec,
    pub alphas: Vec<u64>,
    #[serde(rename = "T")]
    pub t: Vec<Vec<u64>>,
    #[serde(rename = "G")]
    pub g: Vec<Vec<u64>>,
    pub attempts: u64,
    pub seed: u64,
    pub mode: Mode,
    pub ell: usize,
}

impl From<&CodeArtifact> for ArtifactJson {
    fn from(art: &CodeArtifact) -> Self {
        ArtifactJson {
            field: FieldSpec::of(&art.field),
            alphas: art.alphas.iter().map(|a| a.value()).collect(),
            t: matrix_to_ints(&art.t),
            g: matrix_to_ints(&art.g),
            attempts: art.attempts,
            seed: art.seed,
            mode: art.mode,
            ell: art.ell,
        }
    }
}

impl ArtifactJson {
    /// Rebuilds the artifact; the row polynomials are read back from `T`.
    pub fn into_artifact(self) -> Result<CodeArtifact> {
        let field = Arc::new(self.field.build()?);
        let alphas = self.alphas.iter().map(|&v| field.elem(v)).collect::<Result<Vec<_>>>()?;
        let t = matrix_from_ints(&field, &self.t)?;
        let g = matrix_from_ints(&field, &self.g)?;
        if t.rows() != t.cols() || g.cols() != alphas.len() {
            return Err(Error::BadDimensions(format!(
                "T is {}x{}, G is {}x{} with {} points",
                t.rows(),
                t.cols(),
                g.rows(),
                g.cols(),
                alphas.len()
            )));
        }
        let f_list = t.to_rows().into_iter().map(|row| LinPoly::from_coeffs(&field, row)).collect();
        Ok(CodeArtifact {
            field,
            alphas,
            f_list,
            t,
            g,
            attempts: self.attempts,
            seed: self.seed,
            mode: self.mode,
            ell: self.ell,
            pattern: None,
            warnings: Vec::new(),
        })
    }
}
