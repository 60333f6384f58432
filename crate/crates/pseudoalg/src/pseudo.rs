//! Pseudoalgebra elements and the coordinate-product engine.
//!
//! An element is a finite sum of generator labels with coefficients in the
//! enveloping algebra.  Every product here is exact: the engine evaluates
//! the coordinate products a_x b, expands full products into their Fourier
//! coefficients, and verifies the axioms on sampled slices with explicit,
//! provably sufficient truncation windows.

use crate::construct::{OrdinaryAlgebra, XcopAlgebra, XcopElt};
use crate::dual::{h_act_x, pair, x_coproduct, x_mul, x_ract_h, XElt};
use crate::error::Error;
use crate::hopf::{h_mul, mono_antipode_of, mono_mul, HCtx, HElt};
use crate::linalg::Matrix;
use crate::multiindex::{indices_up_to, MultiIndex};
use crate::par::{par_map, Parallelism};
use crate::sample::{random_index, rng_for, small_scalar, SampleCfg};
use crate::scalar::{self, Scalar};
use dashmap::DashMap;
use num::Zero;
use rand::Rng;
use serde::Serialize;
use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

/// A generator label of one of the built-in backends.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BasisLabel {
    /// basis element of an ordinary algebra
    Idx(usize),
    /// monomial in a polynomial backend
    Mono(MultiIndex),
    /// enveloping-quotient monomial times a matrix unit
    MatMono { m: MultiIndex, p: u16, q: u16 },
}

impl fmt::Display for BasisLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let fmt_idx = |m: &MultiIndex| {
            m.0.iter()
                .map(|e| e.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        match self {
            BasisLabel::Idx(i) => write!(f, "b{}", i + 1),
            BasisLabel::Mono(m) => write!(f, "x^({})", fmt_idx(m)),
            BasisLabel::MatMono { m, p, q } => {
                write!(f, "D^({})E{}{}", fmt_idx(m), p + 1, q + 1)
            }
        }
    }
}

/// A finite sum of labels with enveloping-algebra coefficients.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PseudoElement(pub BTreeMap<BasisLabel, HElt>);

impl PseudoElement {
    pub fn zero() -> Self {
        PseudoElement::default()
    }

    pub fn single(label: BasisLabel, dim: usize) -> Self {
        PseudoElement(BTreeMap::from([(label, HElt::one(dim))]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, label: BasisLabel, coeff: HElt) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(label) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                e.get_mut().add_assign(&coeff);
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &PseudoElement) {
        for (l, h) in &other.0 {
            self.add_term(l.clone(), h.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &PseudoElement) {
        for (l, h) in &other.0 {
            self.add_term(l.clone(), h.scaled(&-scalar::one()));
        }
    }

    pub fn scaled(&self, s: &Scalar) -> PseudoElement {
        if s.is_zero() {
            return PseudoElement::zero();
        }
        PseudoElement(self.0.iter().map(|(l, h)| (l.clone(), h.scaled(s))).collect())
    }

    /// Multiply every coefficient by f on the left.
    pub fn h_scaled(&self, ctx: &HCtx, f: &HElt) -> PseudoElement {
        let mut out = PseudoElement::zero();
        for (l, h) in &self.0 {
            out.add_term(l.clone(), h_mul(ctx, f, h));
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisLabel, &HElt)> {
        self.0.iter()
    }

    /// Largest coefficient degree, or zero on the zero element.
    pub fn degree(&self) -> u32 {
        self.0
            .values()
            .filter_map(|h| h.degree().ok())
            .max()
            .unwrap_or(0)
    }

    /// Flatten into sparse (label, monomial) coordinates.
    pub fn coords(&self) -> BTreeMap<(BasisLabel, MultiIndex), Scalar> {
        let mut out = BTreeMap::new();
        for (l, h) in &self.0 {
            for (i, c) in h.terms() {
                out.insert((l.clone(), i.clone()), c.clone());
            }
        }
        out
    }
}

/// Cached expansion data for the matrix-differential-operator backend.
#[derive(Debug, Default)]
pub struct CendData {
    pub n: usize,
    /// (m_a, m_b) -> list of (P1, P2, R, coeff) with P1+P2+Q = m_a and
    /// coeff the R-component of the product of the b-monomial with Q
    family: DashMap<(MultiIndex, MultiIndex), Arc<Vec<(MultiIndex, MultiIndex, MultiIndex, Scalar)>>>,
}

impl CendData {
    fn family(
        &self,
        ctx: &HCtx,
        ma: &MultiIndex,
        mb: &MultiIndex,
    ) -> Arc<Vec<(MultiIndex, MultiIndex, MultiIndex, Scalar)>> {
        if let Some(hit) = self.family.get(&(ma.clone(), mb.clone())) {
            return hit.clone();
        }
        let mut rows = Vec::new();
        for p1 in ma.sub_indices() {
            let rest = ma.checked_sub(&p1).expect("sub-index");
            for p2 in rest.sub_indices() {
                let q = rest.checked_sub(&p2).expect("sub-index");
                let prod = mono_mul(ctx, mb, &q);
                for (r, c) in prod.terms() {
                    rows.push((p1.clone(), p2.clone(), r.clone(), c.clone()));
                }
            }
        }
        let rows = Arc::new(rows);
        self.family.insert((ma.clone(), mb.clone()), rows.clone());
        rows
    }
}

/// How a pseudoalgebra multiplies its generator labels.
pub enum Backend {
    /// current algebra over an ordinary algebra
    Cur(OrdinaryAlgebra),
    /// differential type: an algebra with coordinate action
    Dif(XcopAlgebra),
    /// matrix differential operators of size n
    EqCend(CendData),
    /// a current extension of a pseudoalgebra over a subalgebra of
    /// coordinates
    CurrentExt {
        inner: Box<PseudoAlgebra>,
        embed: Vec<usize>,
        fourier: DashMap<(BasisLabel, BasisLabel), Arc<Vec<(MultiIndex, PseudoElement)>>>,
    },
}

pub struct PseudoAlgebra {
    pub ctx: Arc<HCtx>,
    pub backend: Backend,
    pub name: String,
}

impl PseudoAlgebra {
    /// Current algebra: coefficients sweep past the generators freely.
    pub fn cur(ctx: Arc<HCtx>, alg: OrdinaryAlgebra, name: &str) -> Result<Self, Error> {
        alg.validate()?;
        Ok(PseudoAlgebra {
            ctx,
            backend: Backend::Cur(alg),
            name: name.into(),
        })
    }

    /// Differential type over an algebra-with-coordinate-action.
    pub fn dif(ctx: Arc<HCtx>, xalg: XcopAlgebra, name: &str) -> Result<Self, Error> {
        if xalg.outer_dim() != ctx.dim() {
            return Err(Error::Input(
                "coordinate count of the base does not match the context".into(),
            ));
        }
        Ok(PseudoAlgebra {
            ctx,
            backend: Backend::Dif(xalg),
            name: name.into(),
        })
    }

    /// Matrix differential operators of size n over the given context.
    pub fn cend(ctx: Arc<HCtx>, n: usize) -> Self {
        let name = format!("cend{}", n);
        PseudoAlgebra {
            ctx,
            backend: Backend::EqCend(CendData {
                n,
                family: DashMap::new(),
            }),
            name,
        }
    }

    /// A current extension: the inner algebra lives over a Lie subalgebra
    /// spanned by the listed coordinate positions.
    pub fn current_ext(
        ctx: Arc<HCtx>,
        inner: PseudoAlgebra,
        embed: Vec<usize>,
    ) -> Result<Self, Error> {
        if embed.len() != inner.ctx.dim() {
            return Err(Error::Input(
                "embedding length must match the inner coordinate count".into(),
            ));
        }
        if embed.windows(2).any(|w| w[0] >= w[1]) || embed.iter().any(|&i| i >= ctx.dim()) {
            return Err(Error::Input(
                "embedding must list strictly increasing coordinate positions".into(),
            ));
        }
        let restricted = ctx.lie.restrict(&embed)?;
        for i in 0..restricted.dim {
            for j in (i + 1)..restricted.dim {
                if restricted.bracket_basis(i, j) != inner.ctx.lie.bracket_basis(i, j) {
                    return Err(Error::NotSubalgebra);
                }
            }
        }
        let name = format!("cur_ext({})", inner.name);
        Ok(PseudoAlgebra {
            ctx,
            backend: Backend::CurrentExt {
                inner: Box::new(inner),
                embed,
                fourier: DashMap::new(),
            },
            name,
        })
    }

    pub fn dim(&self) -> usize {
        self.ctx.dim()
    }

    /// Generator labels with internal degree bounded by `deg` (ordinary
    /// algebras list their whole basis).
    pub fn generator_labels(&self, deg: u32) -> Vec<BasisLabel> {
        match &self.backend {
            Backend::Cur(a) => (0..a.dim).map(BasisLabel::Idx).collect(),
            Backend::Dif(x) => x.labels_up_to(deg),
            Backend::EqCend(d) => {
                let mut out = Vec::new();
                for m in indices_up_to(self.dim(), deg) {
                    for p in 0..d.n {
                        for q in 0..d.n {
                            out.push(BasisLabel::MatMono {
                                m: m.clone(),
                                p: p as u16,
                                q: q as u16,
                            });
                        }
                    }
                }
                out
            }
            Backend::CurrentExt { inner, .. } => inner.generator_labels(deg),
        }
    }

    /// How deep into the extracted polynomial the label product reads.
    pub fn needed_x_degree(&self, la: &BasisLabel, lb: &BasisLabel) -> Result<u32, Error> {
        match &self.backend {
            Backend::Cur(_) => Ok(0),
            Backend::Dif(x) => x.taction_bound(lb),
            Backend::EqCend(_) => match la {
                BasisLabel::MatMono { m, .. } => Ok(m.degree()),
                _ => Err(Error::Input("matrix backend uses MatMono labels".into())),
            },
            Backend::CurrentExt { .. } => {
                let rows = self.ext_fourier(la, lb)?;
                Ok(rows.iter().map(|(i, _)| i.degree()).max().unwrap_or(0))
            }
        }
    }

    /// Fourier data of the inner product of two generator labels, computed
    /// in the inner algebra and cached.
    fn ext_fourier(
        &self,
        la: &BasisLabel,
        lb: &BasisLabel,
    ) -> Result<Arc<Vec<(MultiIndex, PseudoElement)>>, Error> {
        let Backend::CurrentExt { inner, fourier, .. } = &self.backend else {
            return Err(Error::Input("not a current extension".into()));
        };
        if let Some(hit) = fourier.get(&(la.clone(), lb.clone())) {
            return Ok(hit.clone());
        }
        let a = PseudoElement::single(la.clone(), inner.dim());
        let b = PseudoElement::single(lb.clone(), inner.dim());
        let fp = pseudoproduct(inner, &a, &b)?;
        let rows: Vec<(MultiIndex, PseudoElement)> = fp.coeffs.into_iter().collect();
        let rows = Arc::new(rows);
        fourier.insert((la.clone(), lb.clone()), rows.clone());
        Ok(rows)
    }

    /// The coordinate product of two generator labels against an already
    /// reduced polynomial (truncated to `needed_x_degree`).
    fn gen_rule(&self, la: &BasisLabel, lb: &BasisLabel, x: &XElt) -> Result<PseudoElement, Error> {
        let dim = self.dim();
        let mut out = PseudoElement::zero();
        match &self.backend {
            Backend::Cur(alg) => {
                let c0 = x.coeff(&MultiIndex::zero(dim));
                if c0.is_zero() {
                    return Ok(out);
                }
                let (i, j) = match (la, lb) {
                    (BasisLabel::Idx(i), BasisLabel::Idx(j)) => (*i, *j),
                    _ => return Err(Error::Input("current backend uses Idx labels".into())),
                };
                for (k, c) in alg.mult[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out.add_term(
                            BasisLabel::Idx(k),
                            HElt::monomial(MultiIndex::zero(dim), &c0 * c),
                        );
                    }
                }
            }
            Backend::Dif(xalg) => {
                let ea = XcopElt::single(la.clone());
                let eb = XcopElt::single(lb.clone());
                for (p, c) in x.terms() {
                    let tp = XElt::monomial(p.clone(), scalar::one());
                    let acted = xalg.taction(&tp, &eb);
                    if acted.is_zero() {
                        continue;
                    }
                    let prod = xalg.mul_elt(&ea, &acted);
                    for (lg, cg) in prod.0 {
                        out.add_term(lg, HElt::monomial(MultiIndex::zero(dim), cg * c));
                    }
                }
            }
            Backend::EqCend(data) => {
                let (ma, pa, qa, mb, pb, qb) = match (la, lb) {
                    (
                        BasisLabel::MatMono { m: ma, p: pa, q: qa },
                        BasisLabel::MatMono { m: mb, p: pb, q: qb },
                    ) => (ma, *pa, *qa, mb, *pb, *qb),
                    _ => return Err(Error::Input("matrix backend uses MatMono labels".into())),
                };
                if qa != pb {
                    return Ok(out);
                }
                for (p1, p2, r, c) in self.with_ctx_family(data, ma, mb).iter() {
                    let xc = x.coeff(p1);
                    if xc.is_zero() {
                        continue;
                    }
                    out.add_term(
                        BasisLabel::MatMono {
                            m: r.clone(),
                            p: pa,
                            q: qb,
                        },
                        HElt::monomial(p2.clone(), xc * c),
                    );
                }
            }
            Backend::CurrentExt { inner, embed, .. } => {
                let rows = self.ext_fourier(la, lb)?;
                let mut x_inner = XElt::zero();
                for (idx, c) in x.terms() {
                    if let Some(r) = idx.restrict(embed) {
                        x_inner.add_term(r, c.clone());
                    }
                }
                if x_inner.is_zero() {
                    return Ok(out);
                }
                for (i, ci) in rows.iter() {
                    let w = pair(&x_inner, &mono_antipode_of(&inner.ctx, i));
                    if w.is_zero() {
                        continue;
                    }
                    for (lg, hg) in ci.terms() {
                        let embedded = embed_helt(hg, dim, embed);
                        out.add_term(lg.clone(), embedded.scaled(&w));
                    }
                }
            }
        }
        Ok(out)
    }

    fn with_ctx_family(
        &self,
        data: &CendData,
        ma: &MultiIndex,
        mb: &MultiIndex,
    ) -> Arc<Vec<(MultiIndex, MultiIndex, MultiIndex, Scalar)>> {
        data.family(&self.ctx, ma, mb)
    }

    /// Backend-provided unit candidate.
    fn unit_candidate(&self) -> Result<PseudoElement, Error> {
        let dim = self.dim();
        Ok(match &self.backend {
            Backend::Cur(a) => {
                let mut out = PseudoElement::zero();
                for (i, c) in a.unit.iter().enumerate() {
                    out.add_term(BasisLabel::Idx(i), HElt::monomial(MultiIndex::zero(dim), c.clone()));
                }
                out
            }
            Backend::Dif(x) => {
                let mut out = PseudoElement::zero();
                for (l, c) in x.unit_elt().0 {
                    out.add_term(l, HElt::monomial(MultiIndex::zero(dim), c));
                }
                out
            }
            Backend::EqCend(d) => {
                let mut out = PseudoElement::zero();
                for p in 0..d.n {
                    out.add_term(
                        BasisLabel::MatMono {
                            m: MultiIndex::zero(dim),
                            p: p as u16,
                            q: p as u16,
                        },
                        HElt::one(dim),
                    );
                }
                out
            }
            Backend::CurrentExt { inner, embed, .. } => {
                let e = inner.unit_candidate()?;
                let mut out = PseudoElement::zero();
                for (l, h) in e.terms() {
                    out.add_term(l.clone(), embed_helt(h, dim, embed));
                }
                out
            }
        })
    }
}

fn embed_helt(h: &HElt, outer_dim: usize, map: &[usize]) -> HElt {
    let mut out = HElt::zero();
    for (i, c) in h.terms() {
        out.add_term(i.embed(outer_dim, map), c.clone());
    }
    out
}

// ---------------------------------------------------------------------------
// The product engine

/// The coordinate product a_x b.
pub fn xprod(
    alg: &PseudoAlgebra,
    a: &PseudoElement,
    x: &XElt,
    b: &PseudoElement,
) -> Result<PseudoElement, Error> {
    let ctx = &alg.ctx;
    let mut out = PseudoElement::zero();
    if x.is_zero() {
        return Ok(out);
    }
    let mut need_cache: BTreeMap<(BasisLabel, BasisLabel), u32> = BTreeMap::new();
    for (la, ha) in a.terms() {
        let x1 = x_ract_h(ctx, x, ha)?;
        if x1.is_zero() {
            continue;
        }
        for (lb, hb) in b.terms() {
            let need = match need_cache.get(&(la.clone(), lb.clone())) {
                Some(v) => *v,
                None => {
                    let v = alg.needed_x_degree(la, lb)?;
                    need_cache.insert((la.clone(), lb.clone()), v);
                    v
                }
            };
            for (k, vb) in hb.terms() {
                for p in k.sub_indices() {
                    let q = k.checked_sub(&p).expect("sub-index");
                    let s = mono_antipode_of(ctx, &p);
                    let x2 = h_act_x(ctx, &s, &x1, need);
                    if x2.is_zero() {
                        continue;
                    }
                    let g = alg.gen_rule(la, lb, &x2)?;
                    if g.is_zero() {
                        continue;
                    }
                    let qh = HElt::monomial(q, scalar::one());
                    for (lg, hg) in g.terms() {
                        out.add_term(lg.clone(), h_mul(ctx, &qh, hg).scaled(vb));
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All nonzero coordinate products a_{t^J} b together with the locality
/// bound.  The enumeration range deg(a) + deg(b) + max needed depth is a
/// proven upper bound for the support.
pub fn locality_data(
    alg: &PseudoAlgebra,
    a: &PseudoElement,
    b: &PseudoElement,
) -> Result<(u32, BTreeMap<MultiIndex, PseudoElement>), Error> {
    let mut inners = BTreeMap::new();
    if a.is_zero() || b.is_zero() {
        return Ok((0, inners));
    }
    let mut nu = 0;
    for (la, _) in a.terms() {
        for (lb, _) in b.terms() {
            nu = nu.max(alg.needed_x_degree(la, lb)?);
        }
    }
    let nmax = a.degree() + b.degree() + nu;
    let mut bound = 0;
    for j in indices_up_to(alg.dim(), nmax) {
        let t = XElt::monomial(j.clone(), scalar::one());
        let inner = xprod(alg, a, &t, b)?;
        if !inner.is_zero() {
            bound = bound.max(j.degree());
            inners.insert(j, inner);
        }
    }
    Ok((bound, inners))
}

/// The full product expanded into Fourier coefficients: a * b =
/// sum_I (partial^I tensor 1) tensor_H coeffs[I].
#[derive(Clone, Debug, Default, PartialEq)]
pub struct FourierProduct {
    pub coeffs: BTreeMap<MultiIndex, PseudoElement>,
}

impl FourierProduct {
    /// Recover a coordinate product from the expansion.
    pub fn x_product(&self, ctx: &HCtx, x: &XElt) -> PseudoElement {
        let mut out = PseudoElement::zero();
        for (i, c) in &self.coeffs {
            let w = pair(x, &mono_antipode_of(ctx, i));
            if !w.is_zero() {
                out.add_assign(&c.scaled(&w));
            }
        }
        out
    }
}

pub fn pseudoproduct(
    alg: &PseudoAlgebra,
    a: &PseudoElement,
    b: &PseudoElement,
) -> Result<FourierProduct, Error> {
    let (_, inners) = locality_data(alg, a, b)?;
    let mut coeffs: BTreeMap<MultiIndex, PseudoElement> = BTreeMap::new();
    for (k, inner) in &inners {
        let s = mono_antipode_of(&alg.ctx, k);
        for (i, sc) in s.terms() {
            coeffs
                .entry(i.clone())
                .or_default()
                .add_assign(&inner.scaled(sc));
        }
    }
    coeffs.retain(|_, c| !c.is_zero());
    Ok(FourierProduct { coeffs })
}

// ---------------------------------------------------------------------------
// Associativity with exact windows

/// Check a_x (b_y c) against the expansion over the coproduct of x.  Returns
/// a description of the first discrepancy, or None when the law holds.  The
/// coproduct window is sized by the locality bounds of both nestings, which
/// makes the comparison exact.
pub fn assoc_witness(
    alg: &PseudoAlgebra,
    a: &PseudoElement,
    x: &XElt,
    b: &PseudoElement,
    y: &XElt,
    c: &PseudoElement,
) -> Result<Option<String>, Error> {
    let (n_ab, inners) = locality_data(alg, a, b)?;
    let mut window = n_ab;
    for inner in inners.values() {
        let (nj, _) = locality_data(alg, inner, c)?;
        window = window.max(nj);
    }

    let bc = xprod(alg, b, y, c)?;
    let lhs = xprod(alg, a, x, &bc)?;

    // a_x(b_y c) = (a_{x_(2)} b)_{x_(1) y} c: the inner product takes the
    // second coproduct leg, the first one multiplies the outer polynomial.
    let dx = x_coproduct(&alg.ctx, x, window);
    let mut rhs = PseudoElement::zero();
    for ((j, k), cc) in dx.terms() {
        if k.degree() > n_ab {
            continue;
        }
        let Some(inner) = inners.get(k) else {
            continue;
        };
        let z = x_mul(&XElt::monomial(j.clone(), scalar::one()), y);
        let term = xprod(alg, inner, &z, c)?;
        rhs.add_assign(&term.scaled(cc));
    }

    if lhs == rhs {
        Ok(None)
    } else {
        let mut diff = lhs.clone();
        diff.sub_assign(&rhs);
        Ok(Some(format!(
            "associativity defect with {} labels in the difference",
            diff.0.len()
        )))
    }
}

// ---------------------------------------------------------------------------
// Units, good elements, annihilators

/// Check that e is a pseudoidentity: left identity on the generator slice
/// and strictly good on the right.
pub fn is_pseudoidentity(alg: &PseudoAlgebra, e: &PseudoElement) -> Result<bool, Error> {
    let one_x = XElt::one(alg.dim());
    for label in alg.generator_labels(2) {
        let g = PseudoElement::single(label, alg.dim());
        if xprod(alg, e, &one_x, &g)? != g {
            return Ok(false);
        }
    }
    let fp = pseudoproduct(alg, e, e)?;
    let expected = BTreeMap::from([(MultiIndex::zero(alg.dim()), e.clone())]);
    Ok(fp.coeffs == expected)
}

pub fn find_pseudoidentity(alg: &PseudoAlgebra) -> Result<PseudoElement, Error> {
    let e = alg.unit_candidate()?;
    if is_pseudoidentity(alg, &e)? {
        Ok(e)
    } else {
        Err(Error::NotFound(format!(
            "the canonical unit of {} fails the identity laws",
            alg.name
        )))
    }
}

/// Project each generator label onto its unique "good" representative via
/// right multiplication by the unit.  Good elements g satisfy g * e =
/// (1 tensor 1) tensor_H g, so the projection is idempotent by
/// associativity.
pub fn find_good_generators(
    alg: &PseudoAlgebra,
    deg: u32,
) -> Result<Vec<(BasisLabel, PseudoElement)>, Error> {
    let e = find_pseudoidentity(alg)?;
    let one_x = XElt::one(alg.dim());
    let mut out = Vec::new();
    for label in alg.generator_labels(deg) {
        let a = PseudoElement::single(label.clone(), alg.dim());
        let g = xprod(alg, &a, &one_x, &e)?;
        out.push((label, g));
    }
    Ok(out)
}

/// Basis of the left annihilator intersected with the slice of elements
/// whose labels and coefficients have degree at most `deg`.
pub fn left_annihilator(alg: &PseudoAlgebra, deg: u32) -> Result<Vec<PseudoElement>, Error> {
    let e = find_pseudoidentity(alg)?;
    let dim = alg.dim();
    let mut basis = Vec::new();
    for label in alg.generator_labels(deg) {
        for i in indices_up_to(dim, deg) {
            let mut pe = PseudoElement::zero();
            pe.add_term(label.clone(), HElt::monomial(i, scalar::one()));
            basis.push(pe);
        }
    }
    // constraint coordinates: (fourier index, label, coefficient monomial)
    let mut images = Vec::with_capacity(basis.len());
    let mut keys: BTreeMap<(MultiIndex, BasisLabel, MultiIndex), usize> = BTreeMap::new();
    for s in &basis {
        let fp = pseudoproduct(alg, s, &e)?;
        let mut flat: BTreeMap<(MultiIndex, BasisLabel, MultiIndex), Scalar> = BTreeMap::new();
        for (i, pe) in &fp.coeffs {
            for ((l, k), v) in pe.coords() {
                flat.insert((i.clone(), l, k), v);
            }
        }
        for key in flat.keys() {
            let next = keys.len();
            keys.entry(key.clone()).or_insert(next);
        }
        images.push(flat);
    }
    let mut m = Matrix::zeros(keys.len(), basis.len());
    for (col, flat) in images.iter().enumerate() {
        for (key, v) in flat {
            *m.at_mut(keys[key], col) = v.clone();
        }
    }
    let kernel = m.kernel();
    let mut out = Vec::new();
    for vec in kernel {
        let mut pe = PseudoElement::zero();
        for (col, c) in vec.iter().enumerate() {
            if !c.is_zero() {
                pe.add_assign(&basis[col].scaled(c));
            }
        }
        if !pe.is_zero() {
            out.push(pe);
        }
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// Verification

#[derive(Clone, Debug, Serialize)]
pub struct AxiomCheck {
    pub name: String,
    pub samples: u32,
    pub failures: u32,
    pub details: Vec<String>,
}

#[derive(Clone, Debug, Serialize)]
pub struct VerifyReport {
    pub algebra: String,
    pub max_deg: u32,
    pub samples: u32,
    pub seed: u64,
    pub checks: Vec<AxiomCheck>,
    pub ok: bool,
}

fn random_element(
    rng: &mut rand_chacha::ChaCha8Rng,
    labels: &[BasisLabel],
    dim: usize,
    coeff_deg: u32,
) -> PseudoElement {
    let mut out = PseudoElement::zero();
    let terms = rng.gen_range(1..=2);
    for _ in 0..terms {
        let label = labels[rng.gen_range(0..labels.len())].clone();
        let idx = random_index(rng, dim, coeff_deg);
        out.add_term(label, HElt::monomial(idx, small_scalar(rng)));
    }
    out
}

fn run_check<T: Send>(
    mode: Parallelism,
    name: &str,
    inputs: Vec<T>,
    f: impl Fn(&T) -> Result<Option<String>, Error> + Sync,
) -> Result<AxiomCheck, Error>
where
    T: Sync,
{
    let samples = inputs.len() as u32;
    let results = par_map(mode, inputs, |input| f(&input));
    let mut failures = 0;
    let mut details = Vec::new();
    for r in results {
        match r? {
            None => {}
            Some(d) => {
                failures += 1;
                if details.len() < 3 {
                    details.push(d);
                }
            }
        }
    }
    Ok(AxiomCheck {
        name: name.into(),
        samples,
        failures,
        details,
    })
}

/// Sample-based verification of the pseudoalgebra axioms: Fourier-expansion
/// consistency, associativity on windowed coproducts, compatibility with
/// coefficient multiplication, and the unit laws.
pub fn verify_axioms(
    alg: &PseudoAlgebra,
    cfg: &SampleCfg,
    mode: Parallelism,
) -> Result<VerifyReport, Error> {
    let dim = alg.dim();
    let labels = alg.generator_labels(cfg.max_deg.min(2));
    if labels.is_empty() {
        return Err(Error::Input("no generator labels in the sample slice".into()));
    }
    let coeff_deg = cfg.max_deg.min(2);
    let mut rng = rng_for(cfg.seed);
    let mut checks = Vec::new();

    // Fourier expansion reproduces every coordinate product
    let mut fourier_inputs = Vec::new();
    for _ in 0..cfg.samples {
        let a = random_element(&mut rng, &labels, dim, coeff_deg);
        let b = random_element(&mut rng, &labels, dim, coeff_deg);
        let j = random_index(&mut rng, dim, cfg.max_deg);
        fourier_inputs.push((a, b, j));
    }
    checks.push(run_check(mode, "fourier_consistency", fourier_inputs, |(a, b, j)| {
        let fp = pseudoproduct(alg, a, b)?;
        let x = XElt::monomial(j.clone(), scalar::one());
        let direct = xprod(alg, a, &x, b)?;
        if fp.x_product(&alg.ctx, &x) == direct {
            Ok(None)
        } else {
            Ok(Some(format!("expansion mismatch at degree {}", j.degree())))
        }
    })?);

    // associativity
    let mut assoc_inputs = Vec::new();
    for _ in 0..cfg.samples {
        let a = random_element(&mut rng, &labels, dim, coeff_deg);
        let b = random_element(&mut rng, &labels, dim, coeff_deg);
        let c = random_element(&mut rng, &labels, dim, coeff_deg);
        let x = XElt::monomial(random_index(&mut rng, dim, cfg.max_deg), scalar::one());
        let y = XElt::monomial(random_index(&mut rng, dim, cfg.max_deg), scalar::one());
        assoc_inputs.push((a, x, b, y, c));
    }
    checks.push(run_check(mode, "associativity", assoc_inputs, |(a, x, b, y, c)| {
        assoc_witness(alg, a, x, b, y, c)
    })?);

    // moving a coefficient across the product agrees with acting on the
    // coordinate polynomial
    let mut lin_inputs = Vec::new();
    for _ in 0..cfg.samples {
        let a = random_element(&mut rng, &labels, dim, coeff_deg);
        let b = random_element(&mut rng, &labels, dim, coeff_deg);
        let f = HElt::monomial(random_index(&mut rng, dim, coeff_deg), scalar::one());
        let x = XElt::monomial(random_index(&mut rng, dim, cfg.max_deg), scalar::one());
        lin_inputs.push((a, b, f, x));
    }
    checks.push(run_check(mode, "coefficient_transfer", lin_inputs, |(a, b, f, x)| {
        let fa = a.h_scaled(&alg.ctx, f);
        let lhs = xprod(alg, &fa, x, b)?;
        let xf = x_ract_h(&alg.ctx, x, f)?;
        let rhs = xprod(alg, a, &xf, b)?;
        if lhs == rhs {
            Ok(None)
        } else {
            Ok(Some("coefficient transfer mismatch".into()))
        }
    })?);

    // unit laws
    let e = find_pseudoidentity(alg)?;
    let mut unit_inputs = Vec::new();
    for _ in 0..cfg.samples {
        unit_inputs.push(random_element(&mut rng, &labels, dim, coeff_deg));
    }
    let one_x = XElt::one(dim);
    checks.push(run_check(mode, "left_unit", unit_inputs, |a| {
        if xprod(alg, &e, &one_x, a)? == *a {
            Ok(None)
        } else {
            Ok(Some("left unit law fails".into()))
        }
    })?);

    let ok = checks.iter().all(|c| c.failures == 0);
    Ok(VerifyReport {
        algebra: alg.name.clone(),
        max_deg: cfg.max_deg,
        samples: cfg.samples,
        seed: cfg.seed,
        checks,
        ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::construct::{env_quotient_xcop, hop_xcop};
    use crate::lie::{Cocycle, LieAlgebra};
    use crate::scalar::{int, one};

    fn ab(n: usize) -> Arc<HCtx> {
        HCtx::new(LieAlgebra::abelian(n)).unwrap()
    }

    fn mono(parts: Vec<u32>) -> MultiIndex {
        MultiIndex(parts)
    }

    fn u_label(k: u32) -> BasisLabel {
        BasisLabel::MatMono {
            m: mono(vec![k]),
            p: 0,
            q: 0,
        }
    }

    fn pe(pairs: Vec<(BasisLabel, MultiIndex, Scalar)>) -> PseudoElement {
        let mut out = PseudoElement::zero();
        for (l, i, c) in pairs {
            out.add_term(l, HElt::monomial(i, c));
        }
        out
    }

    #[test]
    fn current_algebra_products() {
        let ctx = ab(1);
        let alg = PseudoAlgebra::cur(ctx.clone(), OrdinaryAlgebra::matrix(2), "cur_m2").unwrap();
        let e11 = PseudoElement::single(BasisLabel::Idx(0), 1);
        let e12 = PseudoElement::single(BasisLabel::Idx(1), 1);
        let one_x = XElt::one(1);
        assert_eq!(xprod(&alg, &e11, &one_x, &e12).unwrap(), e12);
        assert!(xprod(&alg, &e12, &one_x, &e12).unwrap().is_zero());

        // a coefficient on the left is consumed by the coordinate
        let da = e11.h_scaled(&ctx, &HElt::gen(1, 0));
        let t = XElt::gen(1, 0);
        let mut want = e12.clone();
        want = want.scaled(&-one());
        assert_eq!(xprod(&alg, &da, &t, &e12).unwrap(), want);
        assert!(xprod(&alg, &da, &one_x, &e12).unwrap().is_zero());
    }

    #[test]
    fn matrix_differential_operator_canaries() {
        let ctx = ab(1);
        let alg = PseudoAlgebra::cend(ctx.clone(), 1);
        let u = PseudoElement::single(u_label(1), 1);
        let e = PseudoElement::single(u_label(0), 1);
        let t = XElt::gen(1, 0);
        let one_x = XElt::one(1);

        assert_eq!(xprod(&alg, &u, &t, &e).unwrap(), e);
        let want_u1e = pe(vec![
            (u_label(0), mono(vec![1]), one()),
            (u_label(1), mono(vec![0]), one()),
        ]);
        assert_eq!(xprod(&alg, &u, &one_x, &e).unwrap(), want_u1e);
        assert_eq!(xprod(&alg, &u, &t, &u).unwrap(), u);
        let want_u1u = pe(vec![
            (u_label(1), mono(vec![1]), one()),
            (u_label(2), mono(vec![0]), int(2)),
        ]);
        assert_eq!(xprod(&alg, &u, &one_x, &u).unwrap(), want_u1u);

        let fp = pseudoproduct(&alg, &u, &u).unwrap();
        let mut want = BTreeMap::new();
        want.insert(mono(vec![0]), want_u1u.clone());
        want.insert(mono(vec![1]), u.scaled(&-one()));
        assert_eq!(fp.coeffs, want);
    }

    #[test]
    fn good_elements_of_the_operator_algebra() {
        let ctx = ab(1);
        let alg = PseudoAlgebra::cend(ctx.clone(), 1);
        let goods = find_good_generators(&alg, 2).unwrap();
        let good_of = |k: u32| -> PseudoElement {
            goods
                .iter()
                .find(|(l, _)| *l == u_label(k))
                .map(|(_, g)| g.clone())
                .unwrap()
        };
        assert_eq!(good_of(0), PseudoElement::single(u_label(0), 1));
        let want_u = pe(vec![
            (u_label(1), mono(vec![0]), one()),
            (u_label(0), mono(vec![1]), one()),
        ]);
        assert_eq!(good_of(1), want_u);
        let want_u2 = pe(vec![
            (u_label(2), mono(vec![0]), one()),
            (u_label(1), mono(vec![1]), one()),
            (u_label(0), mono(vec![2]), one()),
        ]);
        assert_eq!(good_of(2), want_u2);

        // goods multiply the unit back to themselves exactly
        let e = find_pseudoidentity(&alg).unwrap();
        let fp = pseudoproduct(&alg, &want_u, &e).unwrap();
        assert_eq!(fp.coeffs, BTreeMap::from([(mono(vec![0]), want_u)]));
    }

    #[test]
    fn differential_type_over_the_opposite_enveloping_algebra() {
        let ctx = ab(1);
        let alg = PseudoAlgebra::dif(ctx.clone(), hop_xcop(&ctx), "dif_hop").unwrap();
        let lbl = |k: u32| BasisLabel::MatMono {
            m: mono(vec![k]),
            p: 0,
            q: 0,
        };
        let a = PseudoElement::single(lbl(1), 1);
        let e = PseudoElement::single(lbl(0), 1);
        let t = XElt::gen(1, 0);
        let one_x = XElt::one(1);

        assert_eq!(xprod(&alg, &a, &t, &a).unwrap(), a);
        assert_eq!(xprod(&alg, &e, &t, &a).unwrap(), e);
        let two_d2 = PseudoElement::single(lbl(2), 1).scaled(&int(2));
        assert_eq!(xprod(&alg, &a, &one_x, &a).unwrap(), two_d2);
    }

    #[test]
    fn weyl_quotient_differential_type() {
        let lie = LieAlgebra::abelian(2);
        let ctx = HCtx::new(lie.clone()).unwrap();
        let mut phi = Cocycle::new();
        phi.set(0, 1, one());
        let xalg = env_quotient_xcop(1, &lie, &phi).unwrap();
        let alg = PseudoAlgebra::dif(ctx, xalg, "dif_weyl").unwrap();
        let x = PseudoElement::single(
            BasisLabel::MatMono {
                m: mono(vec![1, 0]),
                p: 0,
                q: 0,
            },
            2,
        );
        let y = PseudoElement::single(
            BasisLabel::MatMono {
                m: mono(vec![0, 1]),
                p: 0,
                q: 0,
            },
            2,
        );
        let e = PseudoElement::single(
            BasisLabel::MatMono {
                m: mono(vec![0, 0]),
                p: 0,
                q: 0,
            },
            2,
        );
        let t1 = XElt::gen(2, 0);
        let t2 = XElt::gen(2, 1);
        let one_x = XElt::one(2);

        assert_eq!(xprod(&alg, &x, &t1, &x).unwrap(), x);
        assert!(xprod(&alg, &x, &t2, &x).unwrap().is_zero());

        // commutator of the two generators is -1 in the quotient
        let mut comm = xprod(&alg, &x, &one_x, &y).unwrap();
        comm.sub_assign(&xprod(&alg, &y, &one_x, &x).unwrap());
        assert_eq!(comm, e.scaled(&-one()));
    }

    #[test]
    fn units_are_recognized() {
        let ctx = ab(1);
        assert!(find_pseudoidentity(&PseudoAlgebra::cend(ctx.clone(), 2)).is_ok());
        let cur = PseudoAlgebra::cur(ctx.clone(), OrdinaryAlgebra::matrix(2), "m2").unwrap();
        assert!(find_pseudoidentity(&cur).is_ok());
        let nctx = HCtx::new(LieAlgebra::nonabelian2()).unwrap();
        let dif = PseudoAlgebra::dif(nctx.clone(), hop_xcop(&nctx), "hop").unwrap();
        assert!(find_pseudoidentity(&dif).is_ok());
    }

    #[test]
    fn current_extension_over_the_center() {
        let ctx = HCtx::new(LieAlgebra::heisenberg()).unwrap();
        let inner_ctx = ab(1);
        let inner =
            PseudoAlgebra::cur(inner_ctx, OrdinaryAlgebra::scalar_field(), "cur_c").unwrap();
        let alg = PseudoAlgebra::current_ext(ctx.clone(), inner, vec![2]).unwrap();
        let a = PseudoElement::single(BasisLabel::Idx(0), 3);
        let one_x = XElt::one(3);
        assert_eq!(xprod(&alg, &a, &one_x, &a).unwrap(), a);
        assert!(xprod(&alg, &a, &XElt::gen(3, 2), &a).unwrap().is_zero());

        // an ambient coefficient outside the subalgebra still pairs with
        // the ambient coordinates
        let da = a.h_scaled(&ctx, &HElt::gen(3, 0));
        let got = xprod(&alg, &da, &XElt::gen(3, 0), &a).unwrap();
        assert_eq!(got, a.scaled(&-one()));

        // the span of the first two coordinates is not closed under the
        // bracket, so it cannot carry an inner algebra
        let inner2 =
            PseudoAlgebra::cur(ab(2), OrdinaryAlgebra::scalar_field(), "cur_c2").unwrap();
        match PseudoAlgebra::current_ext(ctx, inner2, vec![0, 1]) {
            Err(Error::NotSubalgebra) => {}
            other => panic!("expected a subalgebra failure, got {:?}", other.err()),
        }
    }

    #[test]
    fn associativity_spot_checks() {
        let ctx = ab(1);
        let alg = PseudoAlgebra::cend(ctx.clone(), 1);
        let u = PseudoElement::single(u_label(1), 1);
        let t = XElt::gen(1, 0);
        assert!(assoc_witness(&alg, &u, &t, &u, &t, &u).unwrap().is_none());
        let one_x = XElt::one(1);
        assert!(assoc_witness(&alg, &u, &one_x, &u, &t, &u)
            .unwrap()
            .is_none());
    }

    #[test]
    fn annihilator_of_a_current_algebra_is_trivial() {
        let ctx = ab(1);
        let alg = PseudoAlgebra::cur(ctx, OrdinaryAlgebra::scalar_field(), "cur_c").unwrap();
        assert!(left_annihilator(&alg, 1).unwrap().is_empty());
    }

    #[test]
    fn verification_suite_smoke() {
        let ctx = ab(1);
        let alg = PseudoAlgebra::cend(ctx, 1);
        let cfg = SampleCfg {
            max_deg: 2,
            samples: 4,
            seed: 0,
        };
        let seq = verify_axioms(&alg, &cfg, Parallelism::Sequential).unwrap();
        assert!(seq.ok, "sequential verification failed: {:?}", seq.checks);
        let par = verify_axioms(&alg, &cfg, Parallelism::Rayon).unwrap();
        assert!(par.ok);
        assert_eq!(
            serde_json::to_string(&seq).unwrap(),
            serde_json::to_string(&par).unwrap()
        );
    }
}
