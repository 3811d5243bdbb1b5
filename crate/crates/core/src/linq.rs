//! Linearized polynomials `sum c_i x^{q^i}` over `F_{q^s}`.
//!
//! They form a ring under addition and composition. Composition is not
//! commutative, so division and gcds are taken on the right:
//! `f = quotient ∘ g + remainder`.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::field::{FElem, FieldCtx};

#[derive(Clone, Debug)]
pub struct LinPoly {
    field: Arc<FieldCtx>,
    // q-coefficients, no trailing zeros.
    coeffs: Vec<FElem>,
}

impl PartialEq for LinPoly {
    fn eq(&self, other: &Self) -> bool {
        same_field(&self.field, &other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for LinPoly {}

fn same_field(a: &Arc<FieldCtx>, b: &Arc<FieldCtx>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

impl LinPoly {
    pub fn zero(field: &Arc<FieldCtx>) -> Self {
        LinPoly { field: field.clone(), coeffs: Vec::new() }
    }

    /// The composition identity `x`.
    pub fn x(field: &Arc<FieldCtx>) -> Self {
        Self::monomial(field, FElem::ONE, 0)
    }

    /// `c * x^{q^i}`.
    pub fn monomial(field: &Arc<FieldCtx>, c: FElem, i: usize) -> Self {
        let mut coeffs = vec![FElem::ZERO; i + 1];
        coeffs[i] = c;
        Self::from_coeffs(field, coeffs)
    }

    pub fn from_coeffs(field: &Arc<FieldCtx>, mut coeffs: Vec<FElem>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        LinPoly { field: field.clone(), coeffs }
    }

    /// Builds from `(i, coefficient)` pairs; repeated indices are summed.
    pub fn from_pairs(field: &Arc<FieldCtx>, pairs: &[(usize, FElem)]) -> Self {
        let len = pairs.iter().map(|&(i, _)| i + 1).max().unwrap_or(0);
        let mut coeffs = vec![FElem::ZERO; len];
        for &(i, c) in pairs {
            coeffs[i] = field.add(coeffs[i], c);
        }
        Self::from_coeffs(field, coeffs)
    }

    /// Nonzero `(i, coefficient)` pairs in increasing `i`.
    pub fn to_pairs(&self) -> Vec<(usize, FElem)> {
        self.coeffs.iter().copied().enumerate().filter(|(_, c)| !c.is_zero()).collect()
    }

    pub fn field(&self) -> &Arc<FieldCtx> {
        &self.field
    }

    pub fn coeffs(&self) -> &[FElem] {
        &self.coeffs
    }

    /// Coefficient of `x^{q^i}`, zero when out of range.
    pub fn coeff(&self, i: usize) -> FElem {
        self.coeffs.get(i).copied().unwrap_or(FElem::ZERO)
    }

    /// `None` for the zero polynomial.
    pub fn q_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn leading(&self) -> Option<FElem> {
        self.coeffs.last().copied()
    }

    fn check_field(&self, other: &LinPoly) -> Result<()> {
        if same_field(&self.field, &other.field) {
            Ok(())
        } else {
            Err(Error::MixedFields)
        }
    }

    pub fn add(&self, other: &LinPoly) -> Result<LinPoly> {
        self.zip_with(other, |f, a, b| f.add(a, b))
    }

    pub fn sub(&self, other: &LinPoly) -> Result<LinPoly> {
        self.zip_with(other, |f, a, b| f.sub(a, b))
    }

    fn zip_with(&self, other: &LinPoly, op: impl Fn(&FieldCtx, FElem, FElem) -> FElem) -> Result<LinPoly> {
        self.check_field(other)?;
        let len = self.coeffs.len().max(other.coeffs.len());
        let coeffs = (0..len).map(|i| op(&self.field, self.coeff(i), other.coeff(i))).collect();
        Ok(Self::from_coeffs(&self.field, coeffs))
    }

    pub fn scale(&self, c: FElem) -> LinPoly {
        let coeffs = self.coeffs.iter().map(|&x| self.field.mul(c, x)).collect();
        Self::from_coeffs(&self.field, coeffs)
    }

    /// Divides by the leading coefficient. The zero polynomial is returned
    /// unchanged.
    pub fn monic(&self) -> LinPoly {
        match self.leading() {
            Some(lc) => self.scale(self.field.inv(lc).expect("leading coefficient is nonzero")),
            None => self.clone(),
        }
    }

    /// `self ∘ g`, i.e. `x ↦ self(g(x))`.
    pub fn compose(&self, g: &LinPoly) -> Result<LinPoly> {
        self.check_field(g)?;
        if self.is_zero() || g.is_zero() {
            return Ok(Self::zero(&self.field));
        }
        let field = &self.field;
        let mut out = vec![FElem::ZERO; self.coeffs.len() + g.coeffs.len() - 1];
        // frobenius(g_i, j) is computed incrementally over j.
        let mut g_pow = g.coeffs.clone();
        for (j, &fj) in self.coeffs.iter().enumerate() {
            if !fj.is_zero() {
                for (i, &gi) in g_pow.iter().enumerate() {
                    out[i + j] = field.add(out[i + j], field.mul(fj, gi));
                }
            }
            for gi in g_pow.iter_mut() {
                *gi = field.frobenius(*gi, 1);
            }
        }
        Ok(Self::from_coeffs(field, out))
    }

    pub fn evaluate(&self, v: FElem) -> FElem {
        let field = &self.field;
        let mut acc = FElem::ZERO;
        let mut cur = v;
        for &c in &self.coeffs {
            acc = field.add(acc, field.mul(c, cur));
            cur = field.frobenius(cur, 1);
        }
        acc
    }

    /// `x^{q^t} ∘ self`, which is also `self^{q^t}` as an ordinary power.
    pub fn twist(&self, t: usize) -> LinPoly {
        if self.is_zero() {
            return self.clone();
        }
        let mut coeffs = vec![FElem::ZERO; t];
        coeffs.extend(self.coeffs.iter().map(|&c| self.field.frobenius(c, t as u64)));
        Self::from_coeffs(&self.field, coeffs)
    }

    /// Returns `(quotient, remainder)` with `self = quotient ∘ g + remainder`
    /// and `q_degree(remainder) < q_degree(g)`.
    pub fn right_divide(&self, g: &LinPoly) -> Result<(LinPoly, LinPoly)> {
        self.check_field(g)?;
        let dg = g.q_degree().ok_or(Error::DivisorZero)?;
        let field = &self.field;
        let lc = g.coeffs[dg];
        let mut rem = self.coeffs.clone();
        let Some(df) = self.q_degree().filter(|&d| d >= dg) else {
            return Ok((Self::zero(field), self.clone()));
        };
        let mut quot = vec![FElem::ZERO; df - dg + 1];
        for deg in (dg..=df).rev() {
            let c = rem[deg];
            if c.is_zero() {
                continue;
            }
            let delta = deg - dg;
            let q = field.div(c, field.frobenius(lc, delta as u64))?;
            quot[delta] = q;
            for (i, &gi) in g.coeffs.iter().enumerate() {
                let term = field.mul(q, field.frobenius(gi, delta as u64));
                rem[i + delta] = field.sub(rem[i + delta], term);
            }
            debug_assert!(rem[deg].is_zero());
        }
        rem.truncate(dg);
        Ok((Self::from_coeffs(field, quot), Self::from_coeffs(field, rem)))
    }

    /// Monic greatest common right divisor via the right Euclidean algorithm.
    pub fn gcrd(&self, g: &LinPoly) -> Result<LinPoly> {
        self.check_field(g)?;
        if self.is_zero() && g.is_zero() {
            return Err(Error::BothZero);
        }
        let mut a = self.clone();
        let mut b = g.clone();
        while !b.is_zero() {
            let (_, r) = a.right_divide(&b)?;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    /// The monic subspace polynomial `prod_{β ∈ span(gens)} (x - β)^{q^t}`.
    ///
    /// Each generator α updates `f ← f^q - f(α)^{q-1} f`. A generator already
    /// in the span gives `f(α) = 0`, so the step raises the multiplicity
    /// instead of the dimension.
    pub fn subspace_poly(field: &Arc<FieldCtx>, gens: &[FElem], t: usize) -> LinPoly {
        let q = field.q();
        let mut f = Self::x(field);
        for &alpha in gens {
            let e = f.evaluate(alpha);
            let lifted = f.twist(1);
            f = lifted
                .sub(&f.scale(field.pow(e, q - 1)))
                .expect("same field");
        }
        f.twist(t)
    }
}
