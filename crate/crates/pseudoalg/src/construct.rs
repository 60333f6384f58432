//! Building blocks the pseudoalgebra backends are assembled from:
//! finite-dimensional ordinary algebras, and algebras-with-coordinate-action
//! ("x-cop algebras") in three realizations — an explicit table, a quotient
//! of an enveloping algebra with opposite multiplication, and a polynomial
//! ring with commuting derivations.

use crate::dual::{x_coproduct, XElt};
use crate::error::Error;
use crate::hopf::{h_antipode, mono_mul, HCtx, HElt};
use crate::lie::{central_extension, Cocycle, LieAlgebra};
use crate::multiindex::{indices_up_to, MultiIndex};
use crate::pseudo::BasisLabel;
use crate::scalar::{self, Scalar};
use num::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

// ---------------------------------------------------------------------------
// Ordinary algebras

/// A finite-dimensional unital associative algebra with a fixed basis.
#[derive(Clone, Debug)]
pub struct OrdinaryAlgebra {
    pub dim: usize,
    /// mult[i][j] = coordinates of b_i b_j
    pub mult: Vec<Vec<Vec<Scalar>>>,
    pub unit: Vec<Scalar>,
    pub names: Vec<String>,
}

impl OrdinaryAlgebra {
    /// The ground field as a one-dimensional algebra.
    pub fn scalar_field() -> Self {
        OrdinaryAlgebra {
            dim: 1,
            mult: vec![vec![vec![scalar::one()]]],
            unit: vec![scalar::one()],
            names: vec!["1".into()],
        }
    }

    /// Full matrix algebra on the basis of matrix units E_pq, stored at
    /// index p*n + q.
    pub fn matrix(n: usize) -> Self {
        let dim = n * n;
        let mut mult = vec![vec![vec![scalar::zero(); dim]; dim]; dim];
        let mut names = Vec::with_capacity(dim);
        for p in 0..n {
            for q in 0..n {
                names.push(format!("E{}{}", p + 1, q + 1));
                for r in 0..n {
                    for s in 0..n {
                        if q == r {
                            mult[p * n + q][r * n + s][p * n + s] = scalar::one();
                        }
                    }
                }
            }
        }
        let mut unit = vec![scalar::zero(); dim];
        for p in 0..n {
            unit[p * n + p] = scalar::one();
        }
        OrdinaryAlgebra {
            dim,
            mult,
            unit,
            names,
        }
    }

    pub fn mul_vec(&self, a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
        let mut out = vec![scalar::zero(); self.dim];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                for (k, c) in self.mult[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += x * y * c;
                    }
                }
            }
        }
        out
    }

    pub fn validate(&self) -> Result<(), Error> {
        let basis = |i: usize| -> Vec<Scalar> {
            let mut v = vec![scalar::zero(); self.dim];
            v[i] = scalar::one();
            v
        };
        for i in 0..self.dim {
            let e = basis(i);
            if self.mul_vec(&self.unit, &e) != e || self.mul_vec(&e, &self.unit) != e {
                return Err(Error::AxiomFailure(format!(
                    "unit law fails on basis element {i}"
                )));
            }
            for j in 0..self.dim {
                for k in 0..self.dim {
                    let left = self.mul_vec(&self.mul_vec(&basis(i), &basis(j)), &basis(k));
                    let right = self.mul_vec(&basis(i), &self.mul_vec(&basis(j), &basis(k)));
                    if left != right {
                        return Err(Error::AxiomFailure(format!(
                            "associativity fails on basis triple ({i},{j},{k})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// X-cop algebras

/// A finite rational combination of basis labels.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct XcopElt(pub BTreeMap<BasisLabel, Scalar>);

impl XcopElt {
    pub fn zero() -> Self {
        XcopElt::default()
    }

    pub fn single(label: BasisLabel) -> Self {
        XcopElt(BTreeMap::from([(label, scalar::one())]))
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, label: BasisLabel, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(label) {
            Entry::Vacant(e) => {
                e.insert(coeff);
            }
            Entry::Occupied(mut e) => {
                *e.get_mut() += coeff;
                if e.get().is_zero() {
                    e.remove();
                }
            }
        }
    }

    pub fn add_assign(&mut self, other: &XcopElt) {
        for (l, c) in &other.0 {
            self.add_term(l.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &XcopElt) {
        for (l, c) in &other.0 {
            self.add_term(l.clone(), -c.clone());
        }
    }

    pub fn scaled(&self, s: &Scalar) -> XcopElt {
        if s.is_zero() {
            return XcopElt::zero();
        }
        XcopElt(self.0.iter().map(|(l, c)| (l.clone(), c * s)).collect())
    }

    pub fn terms(&self) -> impl Iterator<Item = (&BasisLabel, &Scalar)> {
        self.0.iter()
    }
}

/// Explicit multiplication and action tables on a finite basis; labels are
/// Idx(0..dim).
#[derive(Clone, Debug)]
pub struct FiniteXcop {
    /// number of ambient coordinates t_k
    pub outer_dim: usize,
    pub dim: usize,
    pub unit: Vec<Scalar>,
    /// mult[i][j] = coordinates of b_i b_j
    pub mult: Vec<Vec<Vec<Scalar>>>,
    /// taction[k][i] = coordinates of t_k(b_i)
    pub taction: Vec<Vec<Vec<Scalar>>>,
}

/// The quotient of the enveloping algebra of a one-dimensional central
/// extension by (central - 1), tensored with a matrix algebra, carrying the
/// OPPOSITE multiplication and the antipode-transported coordinate action.
/// With a zero cocycle and n = 1 this is exactly the opposite enveloping
/// algebra itself.
#[derive(Clone, Debug)]
pub struct EnvQuotient {
    /// enveloping context of the (possibly extended) algebra
    pub hat: Arc<HCtx>,
    /// dimension of the unextended algebra; the center, if any, is the last
    /// coordinate of `hat`
    pub h_dim: usize,
    pub has_center: bool,
    /// matrix factor size
    pub n: usize,
    /// number of ambient coordinates
    pub outer_dim: usize,
    /// inner coordinate k corresponds to ambient coordinate embed[k];
    /// ambient coordinates not hit act as zero
    pub embed: Vec<usize>,
}

/// A polynomial ring C[x_1..x_v] where each ambient coordinate acts as a
/// derivation, given by its images on the variables.  Labels are
/// Mono(exponent).
#[derive(Clone, Debug)]
pub struct PolyDerive {
    pub outer_dim: usize,
    pub vars: usize,
    /// images[k][v] = the polynomial t_k(x_v), as exponent -> coefficient
    pub images: Vec<Vec<BTreeMap<MultiIndex, Scalar>>>,
}

#[derive(Clone, Debug)]
pub enum XcopAlgebra {
    Finite(FiniteXcop),
    EnvQuotient(EnvQuotient),
    PolyDerive(PolyDerive),
}

impl EnvQuotient {
    fn lift(&self, k: &MultiIndex) -> MultiIndex {
        let mut parts = k.0.clone();
        if self.has_center {
            parts.push(0);
        }
        MultiIndex(parts)
    }

    /// Project U(hat) onto the quotient: the divided power c^(m) of the
    /// central element maps to 1/m!.
    fn project(&self, h: &HElt) -> BTreeMap<MultiIndex, Scalar> {
        let mut out: BTreeMap<MultiIndex, Scalar> = BTreeMap::new();
        for (idx, c) in h.terms() {
            let (base, central) = if self.has_center {
                let mut parts = idx.0.clone();
                let m = parts.pop().expect("extended index");
                (MultiIndex(parts), m)
            } else {
                (idx.clone(), 0)
            };
            let scale = c / MultiIndex(vec![central]).factorial();
            let entry = out.entry(base.clone()).or_insert_with(scalar::zero);
            *entry += scale;
            if entry.is_zero() {
                out.remove(&base);
            }
        }
        out
    }

    /// Opposite product of quotient monomials: K o L = project(L * K).
    fn op_mul(&self, k: &MultiIndex, l: &MultiIndex) -> BTreeMap<MultiIndex, Scalar> {
        let prod = mono_mul(&self.hat, &self.lift(l), &self.lift(k));
        self.project(&prod)
    }

    /// The antipode-transported action x . a = S(x |> S(a)) of the inner
    /// coordinates, followed by projection.  `x_inner` lives over the hat
    /// coordinates with zero center component.
    fn act(&self, x_inner: &XElt, k: &MultiIndex) -> BTreeMap<MultiIndex, Scalar> {
        let lifted = HElt::monomial(self.lift(k), scalar::one());
        let s = h_antipode(&self.hat, &lifted);
        let acted = crate::dual::x_act_h(&self.hat, x_inner, &s);
        let back = h_antipode(&self.hat, &acted);
        self.project(&back)
    }

    /// Translate an ambient polynomial into inner coordinates, dropping
    /// monomials that touch coordinates outside the embedding.
    fn pull_back(&self, x: &XElt) -> XElt {
        let mut out = XElt::zero();
        for (idx, c) in x.terms() {
            if let Some(inner) = idx.restrict(&self.embed) {
                out.add_term(self.lift(&inner), c.clone());
            }
        }
        out
    }
}

impl PolyDerive {
    fn derive_once(&self, k: usize, p: &BTreeMap<MultiIndex, Scalar>) -> BTreeMap<MultiIndex, Scalar> {
        let mut out: BTreeMap<MultiIndex, Scalar> = BTreeMap::new();
        for (m, c) in p {
            for v in 0..self.vars {
                if m.0[v] == 0 {
                    continue;
                }
                let mut lowered = m.0.clone();
                lowered[v] -= 1;
                let scale = c * scalar::int(m.0[v] as i64);
                for (im, ic) in &self.images[k][v] {
                    let target = MultiIndex(lowered.clone()).add(im);
                    let entry = out.entry(target).or_insert_with(scalar::zero);
                    *entry += &scale * ic;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }
}

impl XcopAlgebra {
    pub fn outer_dim(&self) -> usize {
        match self {
            XcopAlgebra::Finite(f) => f.outer_dim,
            XcopAlgebra::EnvQuotient(e) => e.outer_dim,
            XcopAlgebra::PolyDerive(p) => p.outer_dim,
        }
    }

    pub fn unit_elt(&self) -> XcopElt {
        match self {
            XcopAlgebra::Finite(f) => {
                let mut out = XcopElt::zero();
                for (i, c) in f.unit.iter().enumerate() {
                    out.add_term(BasisLabel::Idx(i), c.clone());
                }
                out
            }
            XcopAlgebra::EnvQuotient(e) => {
                let mut out = XcopElt::zero();
                for p in 0..e.n {
                    out.add_term(
                        BasisLabel::MatMono {
                            m: MultiIndex::zero(e.h_dim),
                            p: p as u16,
                            q: p as u16,
                        },
                        scalar::one(),
                    );
                }
                out
            }
            XcopAlgebra::PolyDerive(p) => {
                XcopElt::single(BasisLabel::Mono(MultiIndex::zero(p.vars)))
            }
        }
    }

    pub fn mul_labels(&self, a: &BasisLabel, b: &BasisLabel) -> XcopElt {
        match self {
            XcopAlgebra::Finite(f) => {
                let (i, j) = match (a, b) {
                    (BasisLabel::Idx(i), BasisLabel::Idx(j)) => (*i, *j),
                    _ => panic!("finite backend uses Idx labels"),
                };
                let mut out = XcopElt::zero();
                for (k, c) in f.mult[i][j].iter().enumerate() {
                    out.add_term(BasisLabel::Idx(k), c.clone());
                }
                out
            }
            XcopAlgebra::EnvQuotient(e) => {
                let ((ka, pa, qa), (kb, pb, qb)) = match (a, b) {
                    (
                        BasisLabel::MatMono { m: ka, p: pa, q: qa },
                        BasisLabel::MatMono { m: kb, p: pb, q: qb },
                    ) => ((ka, *pa, *qa), (kb, *pb, *qb)),
                    _ => panic!("quotient backend uses MatMono labels"),
                };
                let mut out = XcopElt::zero();
                if qa != pb {
                    return out;
                }
                for (m, c) in e.op_mul(ka, kb) {
                    out.add_term(BasisLabel::MatMono { m, p: pa, q: qb }, c);
                }
                out
            }
            XcopAlgebra::PolyDerive(_) => {
                let (ma, mb) = match (a, b) {
                    (BasisLabel::Mono(ma), BasisLabel::Mono(mb)) => (ma, mb),
                    _ => panic!("polynomial backend uses Mono labels"),
                };
                XcopElt::single(BasisLabel::Mono(ma.add(mb)))
            }
        }
    }

    pub fn mul_elt(&self, a: &XcopElt, b: &XcopElt) -> XcopElt {
        let mut out = XcopElt::zero();
        for (la, ca) in a.terms() {
            for (lb, cb) in b.terms() {
                let prod = self.mul_labels(la, lb);
                for (l, c) in prod.0 {
                    out.add_term(l, c * ca * cb);
                }
            }
        }
        out
    }

    /// Action of an ambient coordinate polynomial.
    pub fn taction(&self, x: &XElt, a: &XcopElt) -> XcopElt {
        let mut out = XcopElt::zero();
        match self {
            XcopAlgebra::Finite(f) => {
                for (idx, xc) in x.terms() {
                    // apply the commuting matrices coordinate by coordinate
                    let mut current = a.clone();
                    for (k, &e) in idx.0.iter().enumerate() {
                        for _ in 0..e {
                            let mut next = XcopElt::zero();
                            for (l, c) in current.terms() {
                                let i = match l {
                                    BasisLabel::Idx(i) => *i,
                                    _ => panic!("finite backend uses Idx labels"),
                                };
                                for (j, m) in f.taction[k][i].iter().enumerate() {
                                    next.add_term(BasisLabel::Idx(j), m * c);
                                }
                            }
                            current = next;
                            if current.is_zero() {
                                break;
                            }
                        }
                        if current.is_zero() {
                            break;
                        }
                    }
                    out.add_assign(&current.scaled(xc));
                }
            }
            XcopAlgebra::EnvQuotient(e) => {
                let x_inner = e.pull_back(x);
                if x_inner.is_zero() {
                    return out;
                }
                for (l, c) in a.terms() {
                    let (k, p, q) = match l {
                        BasisLabel::MatMono { m, p, q } => (m, *p, *q),
                        _ => panic!("quotient backend uses MatMono labels"),
                    };
                    for (m, v) in e.act(&x_inner, k) {
                        out.add_term(BasisLabel::MatMono { m, p, q }, v * c);
                    }
                }
            }
            XcopAlgebra::PolyDerive(p) => {
                for (idx, xc) in x.terms() {
                    let mut current: BTreeMap<MultiIndex, Scalar> = a
                        .terms()
                        .map(|(l, c)| match l {
                            BasisLabel::Mono(m) => (m.clone(), c.clone()),
                            _ => panic!("polynomial backend uses Mono labels"),
                        })
                        .collect();
                    for (k, &e) in idx.0.iter().enumerate() {
                        for _ in 0..e {
                            current = p.derive_once(k, &current);
                            if current.is_empty() {
                                break;
                            }
                        }
                        if current.is_empty() {
                            break;
                        }
                    }
                    for (m, c) in current {
                        out.add_term(BasisLabel::Mono(m), c * xc);
                    }
                }
            }
        }
        out
    }

    /// An upper bound on |I| for which t^I can act nonzero on the label.
    pub fn taction_bound(&self, label: &BasisLabel) -> Result<u32, Error> {
        match self {
            XcopAlgebra::EnvQuotient(_) => {
                let deg = match label {
                    BasisLabel::MatMono { m, .. } => m.degree(),
                    _ => panic!("quotient backend uses MatMono labels"),
                };
                Ok(deg)
            }
            _ => {
                // walk level sets until everything dies, with a hard cap
                let cap = 64u32;
                let mut level = vec![XcopElt::single(label.clone())];
                let mut bound = 0;
                for d in 1..=cap + 1 {
                    let mut next = Vec::new();
                    for elt in &level {
                        for k in 0..self.outer_dim() {
                            let t = XElt::gen(self.outer_dim(), k);
                            let img = self.taction(&t, elt);
                            if !img.is_zero() {
                                next.push(img);
                            }
                        }
                    }
                    if next.is_empty() {
                        return Ok(bound);
                    }
                    if d > cap {
                        return Err(Error::NotClosed(format!(
                            "coordinate action on {label:?} is not locally nilpotent \
                             within {cap} steps"
                        )));
                    }
                    bound = d;
                    level = next;
                }
                Ok(bound)
            }
        }
    }

    pub fn labels_up_to(&self, deg: u32) -> Vec<BasisLabel> {
        match self {
            XcopAlgebra::Finite(f) => (0..f.dim).map(BasisLabel::Idx).collect(),
            XcopAlgebra::EnvQuotient(e) => {
                let mut out = Vec::new();
                for m in indices_up_to(e.h_dim, deg) {
                    for p in 0..e.n {
                        for q in 0..e.n {
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
            XcopAlgebra::PolyDerive(p) => indices_up_to(p.vars, deg)
                .into_iter()
                .map(BasisLabel::Mono)
                .collect(),
        }
    }

    /// Check unit laws, associativity, commuting actions and the twisted
    /// product rule t(ab) = sum (t_(2) a)(t_(1) b) on a degree-bounded slice.
    pub fn validate(&self, ctx: &HCtx, slice_deg: u32) -> Result<(), Error> {
        if self.outer_dim() != ctx.dim() {
            return Err(Error::Input(
                "coordinate count does not match the ambient context".into(),
            ));
        }
        let labels = self.labels_up_to(slice_deg);
        let unit = self.unit_elt();
        let n = self.outer_dim();

        for l in &labels {
            let e = XcopElt::single(l.clone());
            if self.mul_elt(&unit, &e) != e || self.mul_elt(&e, &unit) != e {
                return Err(Error::AxiomFailure(format!("unit law fails at {l:?}")));
            }
        }

        for a in &labels {
            let ea = XcopElt::single(a.clone());
            for b in &labels {
                let eb = XcopElt::single(b.clone());
                for c in &labels {
                    let ec = XcopElt::single(c.clone());
                    let left = self.mul_elt(&self.mul_elt(&ea, &eb), &ec);
                    let right = self.mul_elt(&ea, &self.mul_elt(&eb, &ec));
                    if left != right {
                        return Err(Error::AxiomFailure(format!(
                            "associativity fails at ({a:?},{b:?},{c:?})"
                        )));
                    }
                }
            }
        }

        // commuting coordinate actions
        for a in &labels {
            let ea = XcopElt::single(a.clone());
            for j in 0..n {
                for k in (j + 1)..n {
                    let tj = XElt::gen(n, j);
                    let tk = XElt::gen(n, k);
                    let jk = self.taction(&tj, &self.taction(&tk, &ea));
                    let kj = self.taction(&tk, &self.taction(&tj, &ea));
                    if jk != kj {
                        return Err(Error::AxiomFailure(format!(
                            "coordinate actions {j} and {k} do not commute at {a:?}"
                        )));
                    }
                }
            }
        }

        // twisted product rule, with the coproduct window sized to the
        // actions' nilpotency bounds on everything in sight
        let mut label_bound: BTreeMap<BasisLabel, u32> = BTreeMap::new();
        let mut bound_of = |alg: &Self, l: &BasisLabel| -> Result<u32, Error> {
            if let Some(b) = label_bound.get(l) {
                return Ok(*b);
            }
            let b = alg.taction_bound(l)?;
            label_bound.insert(l.clone(), b);
            Ok(b)
        };
        let mut coproducts: BTreeMap<(usize, u32), crate::dual::XTensor> = BTreeMap::new();
        for a in &labels {
            let ea = XcopElt::single(a.clone());
            for b in &labels {
                let eb = XcopElt::single(b.clone());
                let ab = self.mul_elt(&ea, &eb);
                let mut window = bound_of(self, a)?.max(bound_of(self, b)?);
                for (l, _) in ab.terms() {
                    window = window.max(bound_of(self, l)?);
                }
                for k in 0..n {
                    let t = XElt::gen(n, k);
                    let lhs = self.taction(&t, &ab);
                    let dx = coproducts
                        .entry((k, window))
                        .or_insert_with(|| x_coproduct(ctx, &t, window))
                        .clone();
                    let mut rhs = XcopElt::zero();
                    for ((x1, x2), c) in dx.terms() {
                        let fa = self.taction(&XElt::monomial(x2.clone(), scalar::one()), &ea);
                        let fb = self.taction(&XElt::monomial(x1.clone(), scalar::one()), &eb);
                        rhs.add_assign(&self.mul_elt(&fa, &fb).scaled(c));
                    }
                    if lhs != rhs {
                        return Err(Error::AxiomFailure(format!(
                            "twisted product rule fails for t_{k} at ({a:?},{b:?})"
                        )));
                    }
                }
            }
        }
        Ok(())
    }
}

// ---------------------------------------------------------------------------
// Named constructions

/// The opposite enveloping algebra of the ambient Lie algebra, as an x-cop
/// algebra over itself.
pub fn hop_xcop(ctx: &Arc<HCtx>) -> XcopAlgebra {
    XcopAlgebra::EnvQuotient(EnvQuotient {
        hat: ctx.clone(),
        h_dim: ctx.dim(),
        has_center: false,
        n: 1,
        outer_dim: ctx.dim(),
        embed: (0..ctx.dim()).collect(),
    })
}

/// The opposite enveloping algebra of a coordinate subalgebra, with the
/// remaining ambient coordinates acting as zero.
pub fn hop_sub_xcop(ctx: &Arc<HCtx>, indices: &[usize]) -> Result<XcopAlgebra, Error> {
    let sub = ctx.lie.restrict(indices)?;
    let hat = HCtx::new(sub)?;
    Ok(XcopAlgebra::EnvQuotient(EnvQuotient {
        hat,
        h_dim: indices.len(),
        has_center: false,
        n: 1,
        outer_dim: ctx.dim(),
        embed: indices.to_vec(),
    }))
}

/// Matrices over the quotient of the extended enveloping algebra: the
/// cocycle deforms the opposite multiplication.  A zero cocycle with n = 1
/// reduces to `hop_xcop` up to the harmless central factor.
pub fn env_quotient_xcop(
    n: usize,
    h: &LieAlgebra,
    phi: &Cocycle,
) -> Result<XcopAlgebra, Error> {
    let extended = central_extension(h, phi)?;
    let hat = HCtx::new(extended)?;
    Ok(XcopAlgebra::EnvQuotient(EnvQuotient {
        hat,
        h_dim: h.dim,
        has_center: true,
        n,
        outer_dim: h.dim,
        embed: (0..h.dim).collect(),
    }))
}

/// Polynomials in one variable x with every coordinate acting as zero.
pub fn poly_trivial_action(outer_dim: usize) -> XcopAlgebra {
    XcopAlgebra::PolyDerive(PolyDerive {
        outer_dim,
        vars: 1,
        images: vec![vec![BTreeMap::new()]; outer_dim],
    })
}

/// C[x, y] with t_1 = d/dx and every other coordinate acting as zero: the
/// standard example whose coordinate filtration never stabilizes.
pub fn poly_xy_ddx(outer_dim: usize) -> XcopAlgebra {
    let mut images = vec![vec![BTreeMap::new(), BTreeMap::new()]; outer_dim];
    images[0][0] = BTreeMap::from([(MultiIndex(vec![0, 0]), scalar::one())]);
    XcopAlgebra::PolyDerive(PolyDerive {
        outer_dim,
        vars: 2,
        images,
    })
}
