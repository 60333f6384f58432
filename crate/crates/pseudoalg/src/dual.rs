//! The restricted dual of the enveloping algebra: polynomials (and explicit
//! truncations of power series) in coordinates t_i, paired with divided
//! monomials by <t^I, d^J> = delta_{IJ}.
//!
//! Multiplication of coordinates is plain polynomial multiplication in every
//! case: it is dual to the coproduct, whose binomial form does not see the
//! structure constants.  Everything that IS sensitive to the bracket (the
//! coproduct on coordinates, the two module actions, the antipode) is
//! computed through the pairing.  Results that are genuinely infinite series
//! take an explicit truncation degree; results that are provably polynomial
//! are computed by a degree sweep that keeps going until a safety margin of
//! consecutive empty layers confirms the tail is gone.

use crate::error::Error;
use crate::hopf::{h_mul, mono_antipode_of, mono_mul, HCtx, HElt};
use crate::multiindex::{indices_of_degree, indices_up_to, MultiIndex};
use crate::scalar::{self, Scalar};
use num::Zero;
use std::collections::BTreeMap;

/// Sparse polynomial in the dual coordinates.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct XElt(pub BTreeMap<MultiIndex, Scalar>);

/// Sparse element of the tensor square of the dual.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct XTensor(pub BTreeMap<(MultiIndex, MultiIndex), Scalar>);

impl XElt {
    pub fn zero() -> Self {
        XElt::default()
    }

    pub fn one(dim: usize) -> Self {
        XElt::monomial(MultiIndex::zero(dim), scalar::one())
    }

    pub fn monomial(idx: MultiIndex, coeff: Scalar) -> Self {
        let mut m = BTreeMap::new();
        if !coeff.is_zero() {
            m.insert(idx, coeff);
        }
        XElt(m)
    }

    /// The coordinate t_i (0-based) in dimension `dim`.
    pub fn gen(dim: usize, i: usize) -> Self {
        XElt::monomial(MultiIndex::unit(dim, i), scalar::one())
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

    pub fn add_assign(&mut self, other: &XElt) {
        for (idx, c) in &other.0 {
            self.add_term(idx.clone(), c.clone());
        }
    }

    pub fn sub_assign(&mut self, other: &XElt) {
        for (idx, c) in &other.0 {
            self.add_term(idx.clone(), -c.clone());
        }
    }

    pub fn scaled(&self, s: &Scalar) -> XElt {
        if s.is_zero() {
            return XElt::zero();
        }
        XElt(self.0.iter().map(|(i, c)| (i.clone(), c * s)).collect())
    }

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

impl XTensor {
    pub fn zero() -> Self {
        XTensor::default()
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

    pub fn terms(&self) -> impl Iterator<Item = (&(MultiIndex, MultiIndex), &Scalar)> {
        self.0.iter()
    }

    pub fn coeff(&self, left: &MultiIndex, right: &MultiIndex) -> Scalar {
        self.0
            .get(&(left.clone(), right.clone()))
            .cloned()
            .unwrap_or_else(scalar::zero)
    }
}

/// <x, f> = sum over the common support.
pub fn pair(x: &XElt, f: &HElt) -> Scalar {
    let mut acc = scalar::zero();
    if x.0.len() <= f.0.len() {
        for (i, c) in &x.0 {
            if let Some(v) = f.0.get(i) {
                acc += c * v;
            }
        }
    } else {
        for (i, v) in &f.0 {
            if let Some(c) = x.0.get(i) {
                acc += c * v;
            }
        }
    }
    acc
}

/// Polynomial multiplication t^I t^J = t^{I+J}.
pub fn x_mul(a: &XElt, b: &XElt) -> XElt {
    let mut out = XElt::zero();
    for (i, x) in &a.0 {
        for (j, y) in &b.0 {
            out.add_term(i.add(j), x * y);
        }
    }
    out
}

/// Degree sweep with a tail check: layers up to `hint` are always collected,
/// then the sweep continues until max(dim, 2) consecutive layers come back
/// empty.  A hard cap converts a runaway tail into an error.
fn sweep_layers(
    n: usize,
    hint: u32,
    mut coeff_at: impl FnMut(&MultiIndex) -> Scalar,
) -> Result<XElt, Error> {
    let margin = (n as u32).max(2);
    let cap = hint + margin + 16;
    let mut out = XElt::zero();
    for d in 0..=hint {
        for idx in indices_of_degree(n, d) {
            let c = coeff_at(&idx);
            out.add_term(idx, c);
        }
    }
    let mut empty_run = 0;
    let mut d = hint + 1;
    while empty_run < margin {
        if d > cap {
            return Err(Error::LocalityCapExceeded { cap });
        }
        let mut any = false;
        for idx in indices_of_degree(n, d) {
            let c = coeff_at(&idx);
            if !c.is_zero() {
                any = true;
                out.add_term(idx, c);
            }
        }
        empty_run = if any { 0 } else { empty_run + 1 };
        d += 1;
    }
    Ok(out)
}

/// Left action of the enveloping algebra on coordinates, truncated:
/// <h x, f> = <x, S(h) f> for |f| up to max_deg.  Unlike the right action,
/// the left action genuinely leaves the polynomials when the bracket is
/// noncommutative (S(h) d^J can fold back down to low degree for J of any
/// size), so the truncation degree is part of the interface.
pub fn h_act_x(ctx: &HCtx, h: &HElt, x: &XElt, max_deg: u32) -> XElt {
    if h.is_zero() || x.is_zero() {
        return XElt::zero();
    }
    let sh = crate::hopf::h_antipode(ctx, h);
    let mut out = XElt::zero();
    for j in indices_up_to(ctx.dim(), max_deg) {
        let prod = h_mul(ctx, &sh, &HElt::monomial(j.clone(), scalar::one()));
        out.add_term(j, pair(x, &prod));
    }
    out
}

/// Drop all terms of degree above `max_deg`.
pub fn truncate(x: &XElt, max_deg: u32) -> XElt {
    XElt(
        x.0.iter()
            .filter(|(i, _)| i.degree() <= max_deg)
            .map(|(i, c)| (i.clone(), c.clone()))
            .collect(),
    )
}

/// Right action of the enveloping algebra on coordinates:
/// <x h, f> = <x, f S(h)>.
pub fn x_ract_h(ctx: &HCtx, x: &XElt, h: &HElt) -> Result<XElt, Error> {
    if h.is_zero() || x.is_zero() {
        return Ok(XElt::zero());
    }
    let sh = crate::hopf::h_antipode(ctx, h);
    let hint = x.degree()? + h.degree()?;
    sweep_layers(ctx.dim(), hint, |j| {
        let prod = h_mul(ctx, &HElt::monomial(j.clone(), scalar::one()), &sh);
        pair(x, &prod)
    })
}

/// Antipode on coordinates, truncated: <S(x), d^K> = <x, S(d^K)> for
/// |K| <= max_deg.  For a noncommutative bracket this is an honest power
/// series, so the truncation degree is part of the interface.
pub fn x_antipode(ctx: &HCtx, x: &XElt, max_deg: u32) -> XElt {
    let mut out = XElt::zero();
    for k in indices_up_to(ctx.dim(), max_deg) {
        let c = pair(x, &mono_antipode_of(ctx, &k));
        out.add_term(k, c);
    }
    out
}

/// Coproduct on coordinates, truncated to the window |J|, |K| <= max_deg:
/// the coefficient at t^J (x) t^K is <x, d^J d^K>.  Both slots can be
/// infinite series, so again the window is explicit.
pub fn x_coproduct(ctx: &HCtx, x: &XElt, max_deg: u32) -> XTensor {
    let idxs = indices_up_to(ctx.dim(), max_deg);
    let mut out = XTensor::zero();
    for j in &idxs {
        for k in &idxs {
            let c = pair(x, &mono_mul(ctx, j, k));
            out.add_term(j.clone(), k.clone(), c);
        }
    }
    out
}

/// Action of a coordinate polynomial on the enveloping algebra, defined by
/// <y, x |> f> = <S(x) y, f>.  The coefficient of d^J in x |> f is
/// sum_K <S(x), t^K-coefficient> f_{K+J}, which only needs S(x) up to the
/// degree of f, so the result is exactly computable.
pub fn x_act_h(ctx: &HCtx, x: &XElt, f: &HElt) -> HElt {
    if x.is_zero() || f.is_zero() {
        return HElt::zero();
    }
    let fdeg = f.degree().expect("nonzero");
    let sx = x_antipode(ctx, x, fdeg);
    let mut out = HElt::zero();
    for j in indices_up_to(ctx.dim(), fdeg) {
        let mut c = scalar::zero();
        for (k, s) in &sx.0 {
            let sum = k.add(&j);
            if let Some(v) = f.0.get(&sum) {
                c += s * v;
            }
        }
        out.add_term(j, c);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::LieAlgebra;
    use crate::scalar::{frac, int, one};

    fn ab1() -> std::sync::Arc<HCtx> {
        HCtx::new(LieAlgebra::abelian(1)).unwrap()
    }

    fn nab2() -> std::sync::Arc<HCtx> {
        HCtx::new(LieAlgebra::nonabelian2()).unwrap()
    }

    fn tmono(parts: &[u32]) -> XElt {
        XElt::monomial(MultiIndex(parts.to_vec()), one())
    }

    fn dmono(parts: &[u32]) -> HElt {
        HElt::monomial(MultiIndex(parts.to_vec()), one())
    }

    #[test]
    fn pairing_is_the_kronecker_delta_on_bases() {
        for i in indices_up_to(2, 3) {
            for j in indices_up_to(2, 3) {
                let x = XElt::monomial(i.clone(), one());
                let f = HElt::monomial(j.clone(), one());
                let want = if i == j { one() } else { scalar::zero() };
                assert_eq!(pair(&x, &f), want);
            }
        }
    }

    #[test]
    fn x_mul_is_polynomial_multiplication() {
        let p = x_mul(&tmono(&[1, 0]), &tmono(&[0, 2]));
        assert_eq!(p, tmono(&[1, 2]));
        // and dual to the coproduct: <xy, f> = <x (x) y, Delta f>
        let ctx = nab2();
        let x = tmono(&[1, 1]);
        let y = tmono(&[0, 1]);
        let f = dmono(&[1, 2]);
        let lhs = pair(&x_mul(&x, &y), &f);
        let mut rhs = scalar::zero();
        for ((a, b), c) in crate::hopf::h_coproduct(&f).0 {
            rhs += pair(&x, &HElt::monomial(a, one())) * pair(&y, &HElt::monomial(b, one())) * c;
        }
        assert_eq!(lhs, rhs);
        let _ = ctx;
    }

    #[test]
    fn left_action_is_minus_d_dt_for_one_abelian_generator() {
        let ctx = ab1();
        let d = dmono(&[1]);
        for k in 1..5u32 {
            let acted = h_act_x(&ctx, &d, &tmono(&[k]), k + 2);
            assert_eq!(acted, tmono(&[k - 1]).scaled(&int(-(k as i64))));
        }
        assert_eq!(h_act_x(&ctx, &d, &tmono(&[0]), 3), XElt::zero());
    }

    #[test]
    fn left_and_right_actions_agree_when_abelian() {
        let ctx = HCtx::new(LieAlgebra::abelian(2)).unwrap();
        let h = dmono(&[1, 1]);
        let x = tmono(&[2, 1]);
        assert_eq!(
            h_act_x(&ctx, &h, &x, 5),
            x_ract_h(&ctx, &x, &h).unwrap()
        );
    }

    #[test]
    fn actions_compose() {
        let ctx = nab2();
        let a = dmono(&[1, 0]);
        let b = dmono(&[0, 1]);
        let x = tmono(&[1, 2]);
        // left: a (b x) = (ab) x up to the window; the inner action keeps
        // an extra deg(a) of slack so the outer one is exact on the window
        let window = 5;
        let inner = h_act_x(&ctx, &b, &x, window + 1);
        let lhs = h_act_x(&ctx, &a, &inner, window);
        let rhs = h_act_x(&ctx, &h_mul(&ctx, &a, &b), &x, window);
        assert_eq!(lhs, rhs);
        // right: (x a) b = x (ab), exact polynomials on both sides
        let lhs = x_ract_h(&ctx, &x_ract_h(&ctx, &x, &a).unwrap(), &b).unwrap();
        let rhs = x_ract_h(&ctx, &x, &h_mul(&ctx, &a, &b)).unwrap();
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn primitive_elements_act_as_derivations() {
        let ctx = nab2();
        let window = 4;
        for gen in 0..2 {
            let p = HElt::gen(2, gen);
            let x = tmono(&[1, 1]);
            let y = tmono(&[0, 2]);
            let lhs = h_act_x(&ctx, &p, &x_mul(&x, &y), window);
            let mut rhs = x_mul(&h_act_x(&ctx, &p, &x, window), &y);
            rhs.add_assign(&x_mul(&x, &h_act_x(&ctx, &p, &y, window)));
            assert_eq!(lhs, truncate(&rhs, window));
        }
    }

    #[test]
    fn antipode_on_coordinates() {
        let ctx = HCtx::new(LieAlgebra::abelian(2)).unwrap();
        for i in indices_up_to(2, 3) {
            let s = x_antipode(&ctx, &XElt::monomial(i.clone(), one()), 4);
            let sign = if i.degree() % 2 == 0 { one() } else { -one() };
            assert_eq!(s, XElt::monomial(i.clone(), sign));
        }

        // with [d1, d2] = d2 the antipode of t_2 is an infinite series:
        // S(t_2) = -sum_m t^(m,1)/m!
        let ctx2 = nab2();
        let s = x_antipode(&ctx2, &tmono(&[0, 1]), 3);
        let mut want = XElt::zero();
        want.add_term(MultiIndex(vec![0, 1]), -one());
        want.add_term(MultiIndex(vec![1, 1]), -one());
        want.add_term(MultiIndex(vec![2, 1]), -frac(1, 2));
        assert_eq!(s, want);
    }

    #[test]
    fn coordinate_coproduct_has_the_expected_twist() {
        let ctx = nab2();
        let d = x_coproduct(&ctx, &tmono(&[0, 1]), 2);
        // group-like-with-correction: 1 (x) t_2 + t_2 (x) 1 - t_2 (x) t_1 + ...
        assert_eq!(d.coeff(&MultiIndex(vec![0, 0]), &MultiIndex(vec![0, 1])), one());
        assert_eq!(d.coeff(&MultiIndex(vec![0, 1]), &MultiIndex(vec![0, 0])), one());
        assert_eq!(d.coeff(&MultiIndex(vec![0, 1]), &MultiIndex(vec![1, 0])), -one());
        assert_eq!(d.coeff(&MultiIndex(vec![1, 0]), &MultiIndex(vec![0, 1])), scalar::zero());
        // second slot carries the series tail: coefficient at (t_2, t_1^2) is 1/2
        assert_eq!(
            d.coeff(&MultiIndex(vec![0, 1]), &MultiIndex(vec![2, 0])),
            frac(1, 2)
        );
    }

    #[test]
    fn coordinates_act_on_the_enveloping_algebra() {
        // abelian: t |> d^(k) = -d^(k-1)
        let ctx = ab1();
        for k in 1..5u32 {
            let acted = x_act_h(&ctx, &tmono(&[1]), &dmono(&[k]));
            assert_eq!(acted, dmono(&[k - 1]).scaled(&-one()));
        }

        // the nonabelian check pinning the convention:
        // t_2 |> (d_1 d_2) = -d_1 - 1  for [d_1, d_2] = d_2
        let ctx2 = nab2();
        let acted = x_act_h(&ctx2, &tmono(&[0, 1]), &dmono(&[1, 1]));
        let mut want = HElt::zero();
        want.add_term(MultiIndex(vec![0, 0]), -one());
        want.add_term(MultiIndex(vec![1, 0]), -one());
        assert_eq!(acted, want);
    }

    #[test]
    fn coordinate_action_satisfies_the_twisted_product_rule() {
        // x |> (f g) = sum (x_(2) |> f)(x_(1) |> g), the coproduct taken in
        // the opposite order.
        let ctx = nab2();
        let x = tmono(&[0, 1]);
        let f = dmono(&[1, 0]);
        let g = dmono(&[0, 1]);
        let lhs = x_act_h(&ctx, &x, &h_mul(&ctx, &f, &g));
        let window = 1 + f.degree().unwrap().max(g.degree().unwrap());
        let dx = x_coproduct(&ctx, &x, window);
        let mut rhs = HElt::zero();
        for ((x1, x2), c) in dx.terms() {
            let part_f = x_act_h(&ctx, &XElt::monomial(x2.clone(), one()), &f);
            let part_g = x_act_h(&ctx, &XElt::monomial(x1.clone(), one()), &g);
            let prod = h_mul(&ctx, &part_f, &part_g);
            for (k, v) in prod.0 {
                rhs.add_term(k, v * c);
            }
        }
        assert_eq!(lhs, rhs);
    }

    #[test]
    fn pairing_respects_the_filtration() {
        let ctx = nab2();
        for j in indices_up_to(2, 3) {
            for k in indices_up_to(2, 3) {
                let prod = mono_mul(&ctx, &j, &k);
                for (l, _) in prod.terms() {
                    assert!(j.degree() + k.degree() >= l.degree());
                }
            }
        }
    }
}
