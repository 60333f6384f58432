//! Representations: matrix modules over ordinary algebras, the free modules
//! they induce over current pseudoalgebras (optionally twisted by commuting
//! nilpotent matrices), the shifted tautological modules of the matrix
//! differential-operator algebras, and probes of the submodule lattice.

use crate::construct::OrdinaryAlgebra;
use crate::dual::{h_act_x, x_coproduct, x_mul, x_ract_h, XElt};
use crate::error::Error;
use crate::hopf::{h_mul, mono_antipode_of, HElt};
use crate::linalg::{Matrix, RowSpace};
use crate::multiindex::{indices_up_to, MultiIndex};
use crate::pseudo::{locality_data, Backend, BasisLabel, PseudoAlgebra, PseudoElement};
use crate::scalar::{self, Scalar};
use num::{One, Zero};
use std::collections::BTreeMap;

/// A finite-dimensional module over an ordinary algebra: one action matrix
/// per basis element.
#[derive(Clone, Debug, PartialEq)]
pub struct AModule {
    pub dim_v: usize,
    pub action: Vec<Matrix>,
}

impl AModule {
    pub fn trivial() -> Self {
        AModule {
            dim_v: 1,
            action: vec![Matrix::identity(1)],
        }
    }

    /// The defining column module of the full matrix algebra.
    pub fn matrix_columns(n: usize) -> Self {
        let mut action = Vec::with_capacity(n * n);
        for p in 0..n {
            for q in 0..n {
                let mut m = Matrix::zeros(n, n);
                *m.at_mut(p, q) = scalar::one();
                action.push(m);
            }
        }
        AModule { dim_v: n, action }
    }

    /// Respect of the multiplication table.
    pub fn validate(&self, alg: &OrdinaryAlgebra) -> Result<(), Error> {
        if self.action.len() != alg.dim {
            return Err(Error::Input("one action matrix per basis element".into()));
        }
        for i in 0..alg.dim {
            for j in 0..alg.dim {
                let lhs = self.action[i].mul(&self.action[j]);
                let mut rhs = Matrix::zeros(self.dim_v, self.dim_v);
                for (k, c) in alg.mult[i][j].iter().enumerate() {
                    if !c.is_zero() {
                        rhs = rhs.add(&self.action[k].scaled(c));
                    }
                }
                if !lhs.sub(&rhs).is_zero() {
                    return Err(Error::AxiomFailure(format!(
                        "module law fails on basis pair ({i},{j})"
                    )));
                }
            }
        }
        Ok(())
    }

    pub fn is_unital(&self, alg: &OrdinaryAlgebra) -> bool {
        let mut u = Matrix::zeros(self.dim_v, self.dim_v);
        for (i, c) in alg.unit.iter().enumerate() {
            if !c.is_zero() {
                u = u.add(&self.action[i].scaled(c));
            }
        }
        u.sub(&Matrix::identity(self.dim_v)).is_zero()
    }

    pub fn direct_sum(&self, other: &AModule) -> AModule {
        let dim = self.dim_v + other.dim_v;
        let mut action = Vec::with_capacity(self.action.len());
        for (a, b) in self.action.iter().zip(&other.action) {
            let mut m = Matrix::zeros(dim, dim);
            for i in 0..self.dim_v {
                for j in 0..self.dim_v {
                    *m.at_mut(i, j) = a.at(i, j).clone();
                }
            }
            for i in 0..other.dim_v {
                for j in 0..other.dim_v {
                    *m.at_mut(self.dim_v + i, self.dim_v + j) = b.at(i, j).clone();
                }
            }
            action.push(m);
        }
        AModule { dim_v: dim, action }
    }

    /// Conjugate the whole action by an invertible matrix.
    pub fn conjugate(&self, p: &Matrix) -> Result<AModule, Error> {
        let pinv = p
            .inverse()
            .ok_or_else(|| Error::Input("conjugating matrix is singular".into()))?;
        Ok(AModule {
            dim_v: self.dim_v,
            action: self.action.iter().map(|m| p.mul(m).mul(&pinv)).collect(),
        })
    }
}

/// A module over a pseudoalgebra, free over the coefficients, with column
/// labels Idx(0..fiber dim).
///
/// * `Free` lives over a current algebra: the coordinates act through the
///   underlying matrix module, twisted by one nilpotent matrix per
///   coordinate (all commuting with each other and with the action).
/// * `Taut` lives over the matrix differential-operator algebra: the symbol
///   of an operator is evaluated with a constant shift per coordinate.
#[derive(Clone, Debug)]
pub enum ConformalModule {
    Free { amod: AModule, nil: Vec<Matrix> },
    Taut { n: usize, shift: Vec<Scalar> },
}

impl ConformalModule {
    /// The plain free module: zero twist.
    pub fn tilde(amod: AModule, dim_h: usize) -> Self {
        let dim_v = amod.dim_v;
        ConformalModule::Free {
            amod,
            nil: vec![Matrix::zeros(dim_v, dim_v); dim_h],
        }
    }

    pub fn taut(n: usize, shift: Vec<Scalar>) -> Self {
        ConformalModule::Taut { n, shift }
    }

    pub fn dim_v(&self) -> usize {
        match self {
            ConformalModule::Free { amod, .. } => amod.dim_v,
            ConformalModule::Taut { n, .. } => *n,
        }
    }

    /// Check the module data against its algebra.  Unitality of the fiber
    /// action is reported separately so that the idempotent decomposition
    /// can be exercised on non-unital actions.
    pub fn validate(&self, alg: &PseudoAlgebra) -> Result<(), Error> {
        match (self, &alg.backend) {
            (ConformalModule::Free { amod, nil }, Backend::Cur(a)) => {
                amod.validate(a)?;
                if nil.len() != alg.dim() {
                    return Err(Error::Input("one twist matrix per coordinate".into()));
                }
                for i in 0..nil.len() {
                    for j in 0..nil.len() {
                        if !nil[i].mul(&nil[j]).sub(&nil[j].mul(&nil[i])).is_zero() {
                            return Err(Error::AxiomFailure("twist matrices must commute".into()));
                        }
                    }
                    for m in &amod.action {
                        if !m.mul(&nil[i]).sub(&nil[i].mul(m)).is_zero() {
                            return Err(Error::AxiomFailure(
                                "twist must commute with the fiber action".into(),
                            ));
                        }
                    }
                    let mut power = nil[i].clone();
                    let mut steps = 0;
                    while !power.is_zero() {
                        power = power.mul(&nil[i]);
                        steps += 1;
                        if steps > amod.dim_v {
                            return Err(Error::AxiomFailure(
                                "twist matrices must be nilpotent".into(),
                            ));
                        }
                    }
                }
                Ok(())
            }
            (ConformalModule::Taut { n, shift }, Backend::EqCend(data)) => {
                if *n != data.n {
                    return Err(Error::Input("fiber size must match the algebra".into()));
                }
                if shift.len() != alg.dim() {
                    return Err(Error::Input("one shift per coordinate".into()));
                }
                // translating the symbol by the shift is only an algebra map
                // when the shift kills every bracket
                for (_, targets) in alg.ctx.lie.bracket.iter() {
                    let mut v = Scalar::zero();
                    for (k, c) in targets {
                        v += c * &shift[*k];
                    }
                    if !v.is_zero() {
                        return Err(Error::AxiomFailure(
                            "the shift must vanish on brackets".into(),
                        ));
                    }
                }
                Ok(())
            }
            _ => Err(Error::Input(
                "module style does not match the algebra backend".into(),
            )),
        }
    }

    /// Largest total depth at which the twist matrices act nonzero; the
    /// shifted tautological module instead reports zero because its extra
    /// reach comes from the operator labels.
    pub fn twist_depth(&self) -> u32 {
        match self {
            ConformalModule::Taut { .. } => 0,
            ConformalModule::Free { amod, nil } => {
                let mut depth = 0u32;
                let mut level = vec![Matrix::identity(amod.dim_v)];
                loop {
                    let mut next = Vec::new();
                    for m in &level {
                        for n in nil {
                            let prod = n.mul(m);
                            if !prod.is_zero() {
                                next.push(prod);
                            }
                        }
                    }
                    if next.is_empty() {
                        return depth;
                    }
                    depth += 1;
                    level = next;
                }
            }
        }
    }

    pub fn direct_sum(&self, other: &ConformalModule) -> Result<ConformalModule, Error> {
        match (self, other) {
            (
                ConformalModule::Free { amod: a, nil: na },
                ConformalModule::Free { amod: b, nil: nb },
            ) => {
                let amod = a.direct_sum(b);
                let dim = amod.dim_v;
                let nil = na
                    .iter()
                    .zip(nb)
                    .map(|(x, y)| {
                        let mut m = Matrix::zeros(dim, dim);
                        for i in 0..a.dim_v {
                            for j in 0..a.dim_v {
                                *m.at_mut(i, j) = x.at(i, j).clone();
                            }
                        }
                        for i in 0..b.dim_v {
                            for j in 0..b.dim_v {
                                *m.at_mut(a.dim_v + i, a.dim_v + j) = y.at(i, j).clone();
                            }
                        }
                        m
                    })
                    .collect();
                Ok(ConformalModule::Free { amod, nil })
            }
            _ => Err(Error::Input("only free modules add up directly".into())),
        }
    }

    /// Plain product of the twist matrices for a given exponent.  The
    /// compatibility law forces plain powers here: the exponent map must be
    /// additive, with no binomial rescaling.
    fn twist_matrix(nil: &[Matrix], dim_v: usize, p: &MultiIndex) -> Matrix {
        let mut out = Matrix::identity(dim_v);
        for (c, &e) in p.0.iter().enumerate() {
            for _ in 0..e {
                out = nil[c].mul(&out);
            }
        }
        out
    }

    /// Divided power of the shift: prod shift_c^{r_c} / r_c!.
    fn shift_weight(shift: &[Scalar], r: &MultiIndex) -> Scalar {
        let mut out = scalar::one();
        for (c, &e) in r.0.iter().enumerate() {
            for _ in 0..e {
                if shift[c].is_zero() {
                    return scalar::zero();
                }
                out *= &shift[c];
            }
        }
        out / r.factorial()
    }
}

/// How deep the generator rule reads the reduced polynomial for a given
/// algebra-element label.
fn rule_window(module: &ConformalModule, la: &BasisLabel) -> u32 {
    match (module, la) {
        (ConformalModule::Free { .. }, _) => module.twist_depth(),
        (ConformalModule::Taut { .. }, BasisLabel::MatMono { m, .. }) => m.degree(),
        _ => 0,
    }
}

/// The coordinate action of an algebra element on a module element.
pub fn mod_xprod(
    alg: &PseudoAlgebra,
    module: &ConformalModule,
    a: &PseudoElement,
    x: &XElt,
    m: &PseudoElement,
) -> Result<PseudoElement, Error> {
    let ctx = &alg.ctx;
    let dim_v = module.dim_v();
    let mut out = PseudoElement::zero();
    for (la, ha) in a.terms() {
        let x1 = x_ract_h(ctx, x, ha)?;
        if x1.is_zero() {
            continue;
        }
        let window = rule_window(module, la);
        for (lm, hm) in m.terms() {
            let col = match lm {
                BasisLabel::Idx(j) => *j,
                _ => return Err(Error::Input("module elements use column labels".into())),
            };
            for (k, vm) in hm.terms() {
                for p in k.sub_indices() {
                    let q = k.checked_sub(&p).expect("sub-index");
                    let s = mono_antipode_of(ctx, &p);
                    let x2 = h_act_x(ctx, &s, &x1, window);
                    if x2.is_zero() {
                        continue;
                    }
                    match (module, la) {
                        (ConformalModule::Free { amod, nil }, BasisLabel::Idx(i)) => {
                            let mut acting = Matrix::zeros(dim_v, dim_v);
                            let mut nonzero = false;
                            for (pp, xc) in x2.terms() {
                                let tw = ConformalModule::twist_matrix(nil, dim_v, pp);
                                if tw.is_zero() {
                                    continue;
                                }
                                acting = acting.add(&tw.scaled(xc));
                                nonzero = true;
                            }
                            if !nonzero {
                                continue;
                            }
                            let acting = amod.action[*i].mul(&acting);
                            for row in 0..dim_v {
                                let entry = acting.at(row, col);
                                if !entry.is_zero() {
                                    out.add_term(
                                        BasisLabel::Idx(row),
                                        HElt::monomial(q.clone(), entry * vm),
                                    );
                                }
                            }
                        }
                        (
                            ConformalModule::Taut { shift, .. },
                            BasisLabel::MatMono { m: ma, p: pa, q: qa },
                        ) => {
                            if usize::from(*qa) != col {
                                continue;
                            }
                            // the operator symbol, evaluated with the shift
                            for p1 in ma.sub_indices() {
                                let xc = x2.coeff(&p1);
                                if xc.is_zero() {
                                    continue;
                                }
                                let rest = ma.checked_sub(&p1).expect("sub-index");
                                for r in rest.sub_indices() {
                                    let w = ConformalModule::shift_weight(shift, &r);
                                    if w.is_zero() {
                                        continue;
                                    }
                                    // the peeled part of the module coefficient
                                    // multiplies from the left, the leftover of
                                    // the operator symbol from the right
                                    let p2 = rest.checked_sub(&r).expect("sub-index");
                                    let coeff = h_mul(
                                        ctx,
                                        &HElt::monomial(q.clone(), scalar::one()),
                                        &HElt::monomial(p2, scalar::one()),
                                    );
                                    out.add_term(
                                        BasisLabel::Idx(usize::from(*pa)),
                                        coeff.scaled(&(xc.clone() * w * vm)),
                                    );
                                }
                            }
                        }
                        _ => {
                            return Err(Error::Input(
                                "module style does not match the element labels".into(),
                            ))
                        }
                    }
                }
            }
        }
    }
    Ok(out)
}

/// All nonzero module products a_{t^J} m, with the locality bound.
pub fn mod_locality(
    alg: &PseudoAlgebra,
    module: &ConformalModule,
    a: &PseudoElement,
    m: &PseudoElement,
) -> Result<(u32, BTreeMap<MultiIndex, PseudoElement>), Error> {
    let mut inners = BTreeMap::new();
    if a.is_zero() || m.is_zero() {
        return Ok((0, inners));
    }
    let reach = a
        .terms()
        .map(|(la, _)| rule_window(module, la))
        .max()
        .unwrap_or(0);
    let nmax = a.degree() + m.degree() + reach;
    let mut bound = 0;
    for j in indices_up_to(alg.dim(), nmax) {
        let t = XElt::monomial(j.clone(), scalar::one());
        let inner = mod_xprod(alg, module, a, &t, m)?;
        if !inner.is_zero() {
            bound = bound.max(j.degree());
            inners.insert(j, inner);
        }
    }
    Ok((bound, inners))
}

/// The compatibility law a_x (b_y m) = sum (a_{x(2)} b)_{x(1) y} m, checked
/// with exact windows.  Returns a description of the first discrepancy.
pub fn mod_assoc_witness(
    alg: &PseudoAlgebra,
    module: &ConformalModule,
    a: &PseudoElement,
    x: &XElt,
    b: &PseudoElement,
    y: &XElt,
    m: &PseudoElement,
) -> Result<Option<String>, Error> {
    let (n_ab, inners) = locality_data(alg, a, b)?;
    let mut window = n_ab;
    for inner in inners.values() {
        let (nj, _) = mod_locality(alg, module, inner, m)?;
        window = window.max(nj);
    }

    let bm = mod_xprod(alg, module, b, y, m)?;
    let lhs = mod_xprod(alg, module, a, x, &bm)?;

    // same leg assignment as the algebra witness: the second coproduct leg
    // feeds the inner product, the first multiplies the outer polynomial
    let dx = x_coproduct(&alg.ctx, x, window);
    let mut rhs = PseudoElement::zero();
    for ((j, k), cc) in dx.terms() {
        if k.degree() > n_ab {
            continue;
        }
        let Some(inner) = inners.get(k) else { continue };
        let z = x_mul(&XElt::monomial(j.clone(), scalar::one()), y);
        let term = mod_xprod(alg, module, inner, &z, m)?;
        rhs.add_assign(&term.scaled(cc));
    }

    if lhs == rhs {
        Ok(None)
    } else {
        Ok(Some("module compatibility defect".into()))
    }
}

/// Recover the fiber action matrices of a free module from the coordinate
/// action at the trivial functional.
pub fn extract_a_module(
    alg: &PseudoAlgebra,
    module: &ConformalModule,
) -> Result<Vec<Matrix>, Error> {
    let Backend::Cur(a) = &alg.backend else {
        return Err(Error::OutOfScope("extraction expects a current algebra".into()));
    };
    let dim_v = module.dim_v();
    let one_x = XElt::one(alg.dim());
    let zero_idx = MultiIndex::zero(alg.dim());
    let mut out = Vec::with_capacity(a.dim);
    for i in 0..a.dim {
        let gen = PseudoElement::single(BasisLabel::Idx(i), alg.dim());
        let mut mat = Matrix::zeros(dim_v, dim_v);
        for j in 0..dim_v {
            let col = PseudoElement::single(BasisLabel::Idx(j), alg.dim());
            let image = mod_xprod(alg, module, &gen, &one_x, &col)?;
            for (l, h) in image.terms() {
                let BasisLabel::Idx(row) = l else {
                    unreachable!("module labels are columns")
                };
                let constant = h.coeff(&zero_idx);
                *mat.at_mut(*row, j) = constant.clone();
                let mut rest = h.clone();
                rest.add_term(zero_idx.clone(), -constant);
                if !rest.is_zero() {
                    return Err(Error::ModelMismatch(
                        "action does not restrict to constant coefficients".into(),
                    ));
                }
            }
        }
        out.push(mat);
    }
    Ok(out)
}

/// Project module elements through the action of a pseudoidentity at the
/// trivial functional.
pub fn normalize_module_generators(
    alg: &PseudoAlgebra,
    module: &ConformalModule,
    e: &PseudoElement,
    elems: &[PseudoElement],
) -> Result<Vec<PseudoElement>, Error> {
    let one_x = XElt::one(alg.dim());
    elems
        .iter()
        .map(|m| mod_xprod(alg, module, e, &one_x, m))
        .collect()
}

/// Split a degree-bounded slice of the module into the image and kernel of
/// the idempotent given by the unit acting at the trivial functional.
pub fn curc_decompose(
    alg: &PseudoAlgebra,
    module: &ConformalModule,
    e: &PseudoElement,
    deg: u32,
) -> Result<(Vec<PseudoElement>, Vec<PseudoElement>), Error> {
    let dim = alg.dim();
    let one_x = XElt::one(dim);
    let mut slice = Vec::new();
    for j in 0..module.dim_v() {
        for i in indices_up_to(dim, deg) {
            let mut pe = PseudoElement::zero();
            pe.add_term(BasisLabel::Idx(j), HElt::monomial(i, scalar::one()));
            slice.push(pe);
        }
    }
    let mut key_of: BTreeMap<(BasisLabel, MultiIndex), usize> = BTreeMap::new();
    for s in &slice {
        for k in s.coords().into_keys() {
            let next = key_of.len();
            key_of.entry(k).or_insert(next);
        }
    }
    let to_vec = |pe: &PseudoElement| -> Vec<Scalar> {
        let mut v = vec![scalar::zero(); key_of.len()];
        for (k, c) in pe.coords() {
            if let Some(&i) = key_of.get(&k) {
                v[i] = c;
            }
        }
        v
    };
    let mut image = RowSpace::new(key_of.len());
    let mut kernel = RowSpace::new(key_of.len());
    let mut image_out = Vec::new();
    let mut kernel_out = Vec::new();
    for s in &slice {
        let projected = mod_xprod(alg, module, e, &one_x, s)?;
        if !projected.is_zero() && image.insert(&to_vec(&projected)) {
            image_out.push(projected.clone());
        }
        let mut residue = s.clone();
        residue.sub_assign(&projected);
        if !residue.is_zero() && kernel.insert(&to_vec(&residue)) {
            kernel_out.push(residue);
        }
    }
    Ok((image_out, kernel_out))
}

// ---------------------------------------------------------------------------
// Submodule lattice

fn det(m: &Matrix, size: usize) -> Scalar {
    if size == 1 {
        return m.at(0, 0).clone();
    }
    let mut out = scalar::zero();
    for col in 0..size {
        let c = m.at(0, col);
        if c.is_zero() {
            continue;
        }
        let mut minor = Matrix::zeros(size - 1, size - 1);
        for i in 1..size {
            let mut jj = 0;
            for j in 0..size {
                if j == col {
                    continue;
                }
                *minor.at_mut(i - 1, jj) = m.at(i, j).clone();
                jj += 1;
            }
        }
        let sign = if col % 2 == 0 { scalar::one() } else { -scalar::one() };
        out += sign * c * det(&minor, size - 1);
    }
    out
}

/// Coefficients of det(lambda I - M), ascending, by exact interpolation.
fn char_poly(m: &Matrix, size: usize) -> Vec<Scalar> {
    let points: Vec<Scalar> = (0..=size as i64).map(scalar::int).collect();
    let mut vandermonde = Matrix::zeros(points.len(), size + 1);
    let mut values = Vec::with_capacity(points.len());
    for (r, lam) in points.iter().enumerate() {
        let mut power = scalar::one();
        for c in 0..=size {
            *vandermonde.at_mut(r, c) = power.clone();
            power *= lam;
        }
        let shifted = Matrix::identity(size).scaled(lam).sub(m);
        values.push(det(&shifted, size));
    }
    vandermonde
        .solve(&values)
        .expect("interpolation points are distinct")
}

fn divisors(n: &num::BigInt) -> Vec<num::BigInt> {
    use num::Signed;
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = num::BigInt::one();
    // trial division; magnitudes come from small characteristic polynomials
    while &d * &d <= n {
        if (&n % &d).is_zero() {
            out.push(d.clone());
            out.push(&n / &d);
        }
        d += 1;
        if out.len() > 512 {
            break;
        }
    }
    out
}

/// All rational roots of the polynomial (ascending coefficients).
fn rational_roots(poly: &[Scalar]) -> Vec<Scalar> {
    use num::BigInt;
    let mut coeffs = poly.to_vec();
    while coeffs.last().is_some_and(|c| c.is_zero()) {
        coeffs.pop();
    }
    let mut roots = Vec::new();
    while coeffs.first().is_some_and(|c| c.is_zero()) {
        coeffs.remove(0);
        if !roots.contains(&scalar::zero()) {
            roots.push(scalar::zero());
        }
    }
    if coeffs.len() <= 1 {
        return roots;
    }
    let mut lcm = BigInt::one();
    for c in &coeffs {
        lcm = num::integer::lcm(lcm, c.denom().clone());
    }
    let ints: Vec<BigInt> = coeffs
        .iter()
        .map(|c| (c * Scalar::from(lcm.clone())).to_integer())
        .collect();
    let a0 = ints.first().expect("nonempty");
    let an = ints.last().expect("nonempty");
    let eval = |x: &Scalar| -> Scalar {
        let mut acc = scalar::zero();
        let mut pw = scalar::one();
        for c in &coeffs {
            acc += c * &pw;
            pw *= x;
        }
        acc
    };
    for p in divisors(a0) {
        for q in divisors(an) {
            for sign in [1i64, -1] {
                let cand = Scalar::new(&p * BigInt::from(sign), q.clone());
                if eval(&cand).is_zero() && !roots.contains(&cand) {
                    roots.push(cand);
                }
            }
        }
    }
    roots
}

/// Proper nonzero subspaces of the fiber of a free module invariant under
/// the fiber action and the twist, grown from basis vectors and rational
/// eigenvectors.  The coefficients are free, so these are exactly the fibers
/// of the proper coefficient-saturated submodules.
pub fn module_lattice_probe(module: &ConformalModule) -> Result<Vec<Vec<Vec<Scalar>>>, Error> {
    let ConformalModule::Free { amod, nil } = module else {
        return Err(Error::OutOfScope(
            "the fiber probe applies to free modules".into(),
        ));
    };
    let dim = amod.dim_v;
    let mut operators: Vec<&Matrix> = amod.action.iter().collect();
    operators.extend(nil.iter());

    let mut seeds: Vec<Vec<Scalar>> = Vec::new();
    for i in 0..dim {
        let mut v = vec![scalar::zero(); dim];
        v[i] = scalar::one();
        seeds.push(v);
    }
    for op in &operators {
        for root in rational_roots(&char_poly(op, dim)) {
            let shifted = op.sub(&Matrix::identity(dim).scaled(&root));
            seeds.extend(shifted.kernel());
        }
    }

    let mut found: Vec<Vec<Vec<Scalar>>> = Vec::new();
    for seed in seeds {
        if seed.iter().all(|c| c.is_zero()) {
            continue;
        }
        let mut space = RowSpace::new(dim);
        space.insert(&seed);
        loop {
            let mut grew = false;
            for v in space.basis() {
                for op in &operators {
                    let image = op.apply(&v);
                    if image.iter().any(|c| !c.is_zero()) && space.insert(&image) {
                        grew = true;
                    }
                }
            }
            if !grew {
                break;
            }
        }
        if space.rank() == 0 || space.rank() == dim {
            continue;
        }
        let basis = space.basis();
        if !found.iter().any(|b| b == &basis) {
            found.push(basis);
        }
    }
    Ok(found)
}

/// Whether the submodule generated by the element fills a whole slice of the
/// module: the closure of the element under coordinate products with the
/// generator labels is compared against the span of all monomial elements up
/// to the requested degree.
pub fn slice_generates(
    alg: &PseudoAlgebra,
    module: &ConformalModule,
    start: &PseudoElement,
    deg: u32,
) -> Result<bool, Error> {
    if start.is_zero() {
        return Ok(false);
    }
    let dim = alg.dim();
    let dim_v = module.dim_v();
    let gens: Vec<PseudoElement> = alg
        .generator_labels(1)
        .into_iter()
        .map(|l| PseudoElement::single(l, dim))
        .collect();
    let reach: u32 = gens
        .iter()
        .flat_map(|g| g.terms().map(|(l, _)| rule_window(module, l)))
        .max()
        .unwrap_or(0);
    // every closure round can raise the degree by at most the rule reach
    let rounds = 2 * (deg + 1);
    let cap = start.degree() + rounds * (reach + 1);
    let key_of: BTreeMap<(usize, MultiIndex), usize> = (0..dim_v)
        .flat_map(|j| indices_up_to(dim, cap).into_iter().map(move |i| (j, i)))
        .enumerate()
        .map(|(i, k)| (k, i))
        .collect();
    let to_vec = |pe: &PseudoElement| -> Option<Vec<Scalar>> {
        let mut v = vec![scalar::zero(); key_of.len()];
        for ((l, i), c) in pe.coords() {
            let BasisLabel::Idx(j) = l else { return None };
            let &slot = key_of.get(&(j, i))?;
            v[slot] = c;
        }
        Some(v)
    };

    let mut space = RowSpace::new(key_of.len());
    let mut frontier = vec![start.clone()];
    space.insert(&to_vec(start).ok_or_else(|| Error::Input("slice cap too small".into()))?);
    for _ in 0..rounds {
        let mut next = Vec::new();
        for m in &frontier {
            for g in &gens {
                let (_, inners) = mod_locality(alg, module, g, m)?;
                for inner in inners.values() {
                    let Some(v) = to_vec(inner) else { continue };
                    if space.insert(&v) {
                        next.push(inner.clone());
                    }
                }
            }
        }
        if next.is_empty() {
            break;
        }
        frontier = next;
    }

    for j in 0..dim_v {
        for i in indices_up_to(dim, deg) {
            let mut pe = PseudoElement::zero();
            pe.add_term(BasisLabel::Idx(j), HElt::monomial(i, scalar::one()));
            let v = to_vec(&pe).expect("slice monomial within cap");
            if !space.contains(&v) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}
