//! The universal enveloping algebra of a finite-dimensional Lie algebra as a
//! Hopf algebra, in the divided-power basis.
//!
//! Elements are sparse rational combinations of divided monomials d^I with
//! I a multi-index over the generators.  Products are computed by expanding
//! divided monomials into words and straightening with the commutation rule,
//! with the divided-power normalization factored in exactly.

use crate::error::Error;
use crate::lie::LieAlgebra;
use crate::multiindex::MultiIndex;
use crate::scalar::{self, Scalar};
use dashmap::DashMap;
use num::Zero;
use std::collections::BTreeMap;
use std::sync::Arc;

/// Sparse element of the enveloping algebra: multi-index -> coefficient.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HElt(pub BTreeMap<MultiIndex, Scalar>);

/// Sparse element of the tensor square.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct HTensor(pub BTreeMap<(MultiIndex, MultiIndex), Scalar>);

impl HElt {
    pub fn zero() -> Self {
        HElt::default()
    }

    /// The unit element d^0.
    pub fn one(dim: usize) -> Self {
        HElt::monomial(MultiIndex::zero(dim), scalar::one())
    }

    pub fn monomial(idx: MultiIndex, coeff: Scalar) -> Self {
        let mut m = BTreeMap::new();
        if !coeff.is_zero() {
            m.insert(idx, coeff);
        }
        HElt(m)
    }

    /// The generator d_i (0-based) in dimension `dim`.
    pub fn gen(dim: usize, i: usize) -> Self {
        HElt::monomial(MultiIndex::unit(dim, i), scalar::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn coeff(&self, idx: &MultiIndex) -> Scalar {
        self.0.get(idx).cloned().unwrap_or_else(scalar::zero)
    }

    pub fn add_term(&mut self, idx: MultiIndex, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry(idx) {
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

    pub fn add_assign(&mut self, other: &HElt) {
        for (idx, c) in &other.0 {
            self.add_term(idx.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &HElt) {
        for (idx, c) in &other.0 {
            self.add_term(idx.clone(), -c.clone());
        }
    }

    pub fn scaled(&self, s: &Scalar) -> HElt {
        if s.is_zero() {
            return HElt::zero();
        }
        HElt(self.0.iter().map(|(i, c)| (i.clone(), c * s)).collect())
    }

    /// Largest total degree in the support; the zero element has none.
    pub fn degree(&self) -> Result<u32, Error> {
        self.0
            .keys()
            .map(|i| i.degree())
            .max()
            .ok_or(Error::ZeroElement)
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &Scalar)> {
        self.0.iter()
    }
}

impl HTensor {
    pub fn zero() -> Self {
        HTensor::default()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    pub fn add_term(&mut self, left: MultiIndex, right: MultiIndex, coeff: Scalar) {
        if coeff.is_zero() {
            return;
        }
        use std::collections::btree_map::Entry;
        match self.0.entry((left, right)) {
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

    pub fn add_assign(&mut self, other: &HTensor) {
        for ((l, r), c) in &other.0 {
            self.add_term(l.clone(), r.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &HTensor) {
        for ((l, r), c) in &other.0 {
            self.add_term(l.clone(), r.clone(), -c.clone());
        }
    }

    pub fn scaled(&self, s: &Scalar) -> HTensor {
        if s.is_zero() {
            return HTensor::zero();
        }
        HTensor(
            self.0
                .iter()
                .map(|(k, c)| (k.clone(), c * s))
                .collect(),
        )
    }

    /// a (x) b for plain elements.
    pub fn product(a: &HElt, b: &HElt) -> HTensor {
        let mut out = HTensor::zero();
        for (i, x) in &a.0 {
            for (j, y) in &b.0 {
                out.add_term(i.clone(), j.clone(), x * y);
            }
        }
        out
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &Scalar)> {
        self.0.iter()
    }
}

/// Shared computation context for one enveloping algebra: holds the Lie
/// algebra and concurrency-safe memo tables for monomial products and
/// antipodes.
pub struct HCtx {
    pub lie: LieAlgebra,
    mul_cache: DashMap<(MultiIndex, MultiIndex), HElt>,
    antipode_cache: DashMap<MultiIndex, HElt>,
    straighten_cache: DashMap<Vec<usize>, BTreeMap<MultiIndex, Scalar>>,
}

impl std::fmt::Debug for HCtx {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("HCtx").field("lie", &self.lie).finish()
    }
}

impl HCtx {
    pub fn new(lie: LieAlgebra) -> Result<Arc<HCtx>, Error> {
        lie.validate()?;
        Ok(Arc::new(HCtx {
            lie,
            mul_cache: DashMap::new(),
            antipode_cache: DashMap::new(),
            straighten_cache: DashMap::new(),
        }))
    }

    pub fn dim(&self) -> usize {
        self.lie.dim
    }

    pub fn one(&self) -> HElt {
        HElt::one(self.dim())
    }
}

/// Straighten a word in the generators (letters are 0-based generator
/// numbers) into the sorted-word basis.  Adjacent out-of-order letters are
/// rewritten with x_b x_a = x_a x_b + [x_b, x_a]; the bracket term shortens
/// the word, so the rewriting terminates.  Returns multiplicity index of the
/// sorted word -> coefficient, without divided-power normalization.
///
/// Memoized on the word: the rewriting tree revisits the same words
/// massively (a single out-of-place letter bubbling through k letters
/// branches 2^k times without sharing), and the cache collapses that to the
/// polynomially many distinct words.
fn straighten_word(ctx: &HCtx, word: Vec<usize>) -> BTreeMap<MultiIndex, Scalar> {
    if let Some(p) = (0..word.len().saturating_sub(1)).find(|&p| word[p] > word[p + 1]) {
        if let Some(hit) = ctx.straighten_cache.get(&word) {
            return hit.clone();
        }
        let mut swapped = word.clone();
        swapped.swap(p, p + 1);
        let mut out = straighten_word(ctx, swapped);
        for (k, coef) in ctx.lie.bracket_basis(word[p], word[p + 1]) {
            let mut shorter = Vec::with_capacity(word.len() - 1);
            shorter.extend_from_slice(&word[..p]);
            shorter.push(k);
            shorter.extend_from_slice(&word[p + 2..]);
            for (idx, c) in straighten_word(ctx, shorter) {
                let entry = out.entry(idx).or_insert_with(scalar::zero);
                *entry += c * &coef;
            }
        }
        out.retain(|_, c| !c.is_zero());
        ctx.straighten_cache.insert(word, out.clone());
        out
    } else {
        let mut counts = vec![0u32; ctx.dim()];
        for &letter in &word {
            counts[letter] += 1;
        }
        BTreeMap::from([(MultiIndex(counts), scalar::one())])
    }
}

/// Product of two divided monomials d^I d^J, memoized.
pub fn mono_mul(ctx: &HCtx, i: &MultiIndex, j: &MultiIndex) -> HElt {
    debug_assert_eq!(i.len(), ctx.dim());
    debug_assert_eq!(j.len(), ctx.dim());
    if let Some(hit) = ctx.mul_cache.get(&(i.clone(), j.clone())) {
        return hit.clone();
    }
    let mut word = i.word();
    word.extend(j.word());
    let sorted = straighten_word(ctx, word);
    let norm = i.factorial() * j.factorial();
    let mut out = HElt::zero();
    for (k, c) in sorted {
        let scale = c * k.factorial() / &norm;
        out.add_term(k, scale);
    }
    ctx.mul_cache.insert((i.clone(), j.clone()), out.clone());
    out
}

pub fn h_mul(ctx: &HCtx, a: &HElt, b: &HElt) -> HElt {
    let mut out = HElt::zero();
    for (i, x) in &a.0 {
        for (j, y) in &b.0 {
            let prod = mono_mul(ctx, i, j);
            for (k, c) in &prod.0 {
                out.add_term(k.clone(), c * x * y);
            }
        }
    }
    out
}

pub fn h_mul_many(ctx: &HCtx, factors: &[HElt]) -> HElt {
    let mut acc = ctx.one();
    for f in factors {
        acc = h_mul(ctx, &acc, f);
    }
    acc
}

/// Coproduct: d^I -> sum over J + K = I of d^J (x) d^K.  This binomial form
/// is exact in the divided-power basis for every structure constant table.
pub fn h_coproduct(a: &HElt) -> HTensor {
    let mut out = HTensor::zero();
    for (i, c) in &a.0 {
        for j in i.sub_indices() {
            let k = i.checked_sub(&j).expect("sub-index");
            out.add_term(j, k, c.clone());
        }
    }
    out
}

/// Counit: the coefficient of d^0.
pub fn h_counit(a: &HElt) -> Scalar {
    match a.0.iter().next() {
        Some((i, c)) if i.is_zero() => c.clone(),
        _ => scalar::zero(),
    }
}

/// Antipode.  On a divided monomial it is (-1)^{|I|} times the product of
/// the single-generator divided powers taken in decreasing generator order,
/// which requires straightening when the bracket is nontrivial.
pub fn h_antipode(ctx: &HCtx, a: &HElt) -> HElt {
    let mut out = HElt::zero();
    for (i, c) in &a.0 {
        let s = mono_antipode_of(ctx, i);
        for (k, v) in &s.0 {
            out.add_term(k.clone(), v * c);
        }
    }
    out
}

/// Antipode of a single divided monomial, memoized.
pub fn mono_antipode_of(ctx: &HCtx, i: &MultiIndex) -> HElt {
    if let Some(hit) = ctx.antipode_cache.get(i) {
        return hit.clone();
    }
    let dim = ctx.dim();
    let mut acc = ctx.one();
    for m in (0..dim).rev() {
        let k = i.0[m];
        if k == 0 {
            continue;
        }
        let mut single = vec![0u32; dim];
        single[m] = k;
        acc = h_mul(ctx, &acc, &HElt::monomial(MultiIndex(single), scalar::one()));
    }
    let sign = if i.degree() % 2 == 0 {
        scalar::one()
    } else {
        -scalar::one()
    };
    let out = acc.scaled(&sign);
    ctx.antipode_cache.insert(i.clone(), out.clone());
    out
}

/// Componentwise product on the tensor square.
pub fn tensor_mul(ctx: &HCtx, a: &HTensor, b: &HTensor) -> HTensor {
    let mut out = HTensor::zero();
    for ((i1, j1), x) in &a.0 {
        for ((i2, j2), y) in &b.0 {
            let left = mono_mul(ctx, i1, i2);
            let right = mono_mul(ctx, j1, j2);
            let c = x * y;
            for (l, cl) in &left.0 {
                for (r, cr) in &right.0 {
                    out.add_term(l.clone(), r.clone(), cl * cr * &c);
                }
            }
        }
    }
    out
}

/// Multiply the two slots together (the multiplication map of the algebra).
pub fn tensor_collapse(ctx: &HCtx, w: &HTensor) -> HElt {
    let mut out = HElt::zero();
    for ((i, j), c) in &w.0 {
        let prod = mono_mul(ctx, i, j);
        for (k, v) in &prod.0 {
            out.add_term(k.clone(), v * c);
        }
    }
    out
}

/// Apply a linear map monomial-by-monomial to the first slot.
pub fn tensor_map_first(w: &HTensor, f: impl Fn(&MultiIndex) -> HElt) -> HTensor {
    let mut out = HTensor::zero();
    for ((i, j), c) in &w.0 {
        for (k, v) in f(i).0 {
            out.add_term(k, j.clone(), v * c);
        }
    }
    out
}

/// Fourier decomposition of a tensor: the unique finite family l_I with
/// w = sum_I (d^I (x) 1) Delta(l_I).  The algorithm peels the layer of
/// maximal second-slot degree, which the corresponding Delta terms hit with
/// coefficient one, so the maximal degree drops strictly each round.
pub fn fourier_decompose(ctx: &HCtx, w: &HTensor) -> Vec<(MultiIndex, HElt)> {
    let mut rest = w.clone();
    let mut parts: BTreeMap<MultiIndex, HElt> = BTreeMap::new();
    while !rest.is_zero() {
        let m = rest
            .0
            .keys()
            .map(|(_, j)| j.degree())
            .max()
            .expect("nonzero tensor");
        let mut layer: Vec<(MultiIndex, MultiIndex, Scalar)> = Vec::new();
        for ((i, j), c) in &rest.0 {
            if j.degree() == m {
                layer.push((i.clone(), j.clone(), c.clone()));
            }
        }
        for (i, j, c) in layer {
            parts
                .entry(i.clone())
                .or_insert_with(HElt::zero)
                .add_term(j.clone(), c.clone());
            // subtract (d^I (x) 1) Delta(c d^J)
            for a in j.sub_indices() {
                let b = j.checked_sub(&a).expect("sub-index");
                let first = mono_mul(ctx, &i, &a);
                for (k, v) in &first.0 {
                    rest.add_term(k.clone(), b.clone(), -(v * &c));
                }
            }
        }
    }
    parts.retain(|_, l| !l.is_zero());
    parts.into_iter().collect()
}

/// Inverse of the decomposition: sum_I (d^I (x) 1) Delta(l_I).
pub fn fourier_recompose(ctx: &HCtx, parts: &[(MultiIndex, HElt)]) -> HTensor {
    let mut out = HTensor::zero();
    for (i, l) in parts {
        for (j, c) in &l.0 {
            for a in j.sub_indices() {
                let b = j.checked_sub(&a).expect("sub-index");
                let first = mono_mul(ctx, i, &a);
                for (k, v) in &first.0 {
                    out.add_term(k.clone(), b.clone(), v * c);
                }
            }
        }
    }
    out
}
