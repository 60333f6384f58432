//! The coefficient algebra of a pseudoalgebra: coordinate polynomials glued
//! against elements, with the product induced by the coordinate products.
//! Also small helpers for torsion questions about presented modules over
//! the enveloping algebra.

use crate::dual::{x_mul, x_ract_h, XElt};
use crate::error::Error;
use crate::hopf::{h_mul, mono_antipode_of, HCtx, HElt};
use crate::linalg::Matrix;
use crate::multiindex::{indices_up_to, MultiIndex};
use crate::pseudo::{locality_data, BasisLabel, PseudoAlgebra, PseudoElement};
use crate::scalar::{self, Scalar};
use dashmap::DashMap;
use num::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// An element of the coefficient algebra in normal form: a finite sum of
/// generator labels with polynomial coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CoefElt(pub BTreeMap<BasisLabel, XElt>);

impl CoefElt {
    pub fn zero() -> Self {
        CoefElt::default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn single(label: BasisLabel, x: XElt) -> Self {
        let mut out = CoefElt::zero();
        out.add_term(label, x);
        out
    }

    pub fn add_term(&mut self, label: BasisLabel, x: XElt) {
        if x.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(label) {
            Entry::Vacant(e) => {
                e.insert(x);
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&x);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &CoefElt) {
        for (l, x) in &other.0 {
            self.add_term(l.clone(), x.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &CoefElt) {
        for (l, x) in &other.0 {
            self.add_term(l.clone(), x.scaled(&-scalar::one()));
        }
    }

    pub fn scaled(&self, s: &Scalar) -> CoefElt {
        if s.is_zero() {
            return CoefElt::zero();
        }
        CoefElt(self.0.iter().map(|(l, x)| (l.clone(), x.scaled(s))).collect())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisLabel, &XElt)> {
        self.0.iter()
    }
}

/// The coefficient algebra attached to a pseudoalgebra, with per-label-pair
/// expansion data cached across products.
pub struct CoefAlgebra<'a> {
    pub alg: &'a PseudoAlgebra,
    fourier: DashMap<(BasisLabel, BasisLabel), Arc<Vec<(MultiIndex, PseudoElement)>>>,
}

impl<'a> CoefAlgebra<'a> {
    pub fn new(alg: &'a PseudoAlgebra) -> Self {
        CoefAlgebra {
            alg,
            fourier: DashMap::new(),
        }
    }

    fn ctx(&self) -> &HCtx {
        &self.alg.ctx
    }

    /// Normalize a polynomial against an element with enveloping-algebra
    /// coefficients: the coefficients transfer onto the polynomial through
    /// the right action.
    pub fn glue(&self, x: &XElt, pe: &PseudoElement) -> Result<CoefElt, Error> {
        let mut out = CoefElt::zero();
        for (l, f) in pe.terms() {
            out.add_term(l.clone(), x_ract_h(self.ctx(), x, f)?);
        }
        Ok(out)
    }

    fn label_inners(
        &self,
        la: &BasisLabel,
        lb: &BasisLabel,
    ) -> Result<Arc<Vec<(MultiIndex, PseudoElement)>>, Error> {
        if let Some(hit) = self.fourier.get(&(la.clone(), lb.clone())) {
            return Ok(hit.clone());
        }
        let dim = self.alg.dim();
        let a = PseudoElement::single(la.clone(), dim);
        let b = PseudoElement::single(lb.clone(), dim);
        let (_, inners) = locality_data(self.alg, &a, &b)?;
        let rows: Arc<Vec<(MultiIndex, PseudoElement)>> = Arc::new(inners.into_iter().collect());
        self.fourier.insert((la.clone(), lb.clone()), rows.clone());
        Ok(rows)
    }

    /// The induced product: the polynomial parts are shifted through the
    /// antipode and multiplied, one summand per coordinate product of the
    /// labels.
    pub fn mul(&self, a: &CoefElt, b: &CoefElt) -> Result<CoefElt, Error> {
        let ctx = self.ctx();
        let mut out = CoefElt::zero();
        for (la, xa) in a.terms() {
            for (lb, xb) in b.terms() {
                let rows = self.label_inners(la, lb)?;
                for (i, inner) in rows.iter() {
                    let s = mono_antipode_of(ctx, i);
                    let shifted = x_ract_h(ctx, xa, &s)?;
                    if shifted.is_zero() {
                        continue;
                    }
                    let z = x_mul(&shifted, xb);
                    out.add_assign(&self.glue(&z, inner)?);
                }
            }
        }
        Ok(out)
    }

    /// The image of the pseudoidentity with polynomial part 1 acts as a
    /// left identity on the whole coefficient algebra.
    pub fn unit(&self, e: &PseudoElement) -> Result<CoefElt, Error> {
        self.glue(&XElt::one(self.alg.dim()), e)
    }
}

// ---------------------------------------------------------------------------
// Torsion in presented modules

/// A cyclic left module over the enveloping algebra, presented by a single
/// relation (zero relation means the free module of rank one).
pub struct CyclicModule {
    pub ctx: Arc<HCtx>,
    pub relation: HElt,
}

impl CyclicModule {
    pub fn free(ctx: Arc<HCtx>) -> Self {
        CyclicModule {
            ctx,
            relation: HElt::zero(),
        }
    }

    pub fn quotient(ctx: Arc<HCtx>, relation: HElt) -> Self {
        CyclicModule { ctx, relation }
    }

    /// Decide whether the class of `g` is a torsion element, searching for
    /// annihilating coefficients of degree at most `deg`: f g = q r must be
    /// solvable with f nonzero.  The search is a finite linear system, so a
    /// negative answer is relative to the degree bound.
    pub fn is_torsion(&self, g: &HElt, deg: u32) -> Result<bool, Error> {
        if g.is_zero() {
            return Ok(true);
        }
        if self.relation.is_zero() {
            // free module: no zero divisors in the enveloping algebra
            return Ok(false);
        }
        let n = self.ctx.dim();
        let deg_g = g.degree()?;
        let deg_r = self.relation.degree()?;
        let f_basis = indices_up_to(n, deg);
        let q_deg = (deg + deg_g).saturating_sub(deg_r.min(deg + deg_g));
        let q_basis = indices_up_to(n, q_deg);
        let cols = f_basis.len() + q_basis.len();

        // coordinates of f*g - q*r over all monomials that can appear
        let mut keys: BTreeMap<MultiIndex, usize> = BTreeMap::new();
        let mut columns: Vec<BTreeMap<MultiIndex, Scalar>> = Vec::with_capacity(cols);
        let record = |h: &HElt, keys: &mut BTreeMap<MultiIndex, usize>| {
            let mut col = BTreeMap::new();
            for (i, c) in h.terms() {
                let next = keys.len();
                keys.entry(i.clone()).or_insert(next);
                col.insert(i.clone(), c.clone());
            }
            col
        };
        for i in &f_basis {
            let h = h_mul(&self.ctx, &HElt::monomial(i.clone(), scalar::one()), g);
            columns.push(record(&h, &mut keys));
        }
        for j in &q_basis {
            let h = h_mul(
                &self.ctx,
                &HElt::monomial(j.clone(), scalar::one()),
                &self.relation,
            )
            .scaled(&-scalar::one());
            columns.push(record(&h, &mut keys));
        }

        let mut m = Matrix::zeros(keys.len(), cols);
        for (col, entries) in columns.iter().enumerate() {
            for (key, v) in entries {
                *m.at_mut(keys[key], col) = v.clone();
            }
        }
        for vec in m.kernel() {
            if vec[..f_basis.len()].iter().any(|c| !c.is_zero()) {
                return Ok(true);
            }
        }
        Ok(false)
    }
}
