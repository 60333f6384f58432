//! Classification of the base algebras sitting under annihilation-free
//! pseudoalgebras: finite degree slices with their coordinate action, the
//! smallness probe, matrix-unit recognition, and the discrimination between
//! plain matrix algebras, currents over an opposite enveloping algebra, and
//! their central deformations of Weyl type.

use crate::construct::XcopAlgebra;
use crate::dual::XElt;
use crate::error::Error;
use crate::hopf::HCtx;
use crate::lie::{Cocycle, LieAlgebra};
use crate::linalg::{Matrix, RowSpace};
use crate::multiindex::{indices_up_to, MultiIndex};
use crate::pseudo::{
    find_good_generators, find_pseudoidentity, xprod, BasisLabel, PseudoAlgebra, PseudoElement,
};
use crate::scalar::{self, Scalar};
use num::Zero;
use serde::Serialize;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A degree-bounded slice of an algebra with coordinate action.  Products
/// that leave the slice are recorded as `None` rather than silently
/// truncated.
#[derive(Clone, Debug)]
pub struct SliceAlgebra {
    pub dim: usize,
    /// number of ambient coordinates
    pub outer_dim: usize,
    pub unit: Vec<Scalar>,
    pub mult: Vec<Vec<Option<Vec<Scalar>>>>,
    /// taction[k][i] = coordinates of t_k acting on basis element i
    pub taction: Vec<Vec<Option<Vec<Scalar>>>>,
    /// total degree of each basis element
    pub degrees: Vec<u32>,
}

fn label_total_degree(l: &BasisLabel) -> u32 {
    match l {
        BasisLabel::Idx(_) => 0,
        BasisLabel::Mono(m) => m.degree(),
        BasisLabel::MatMono { m, .. } => m.degree(),
    }
}

impl SliceAlgebra {
    /// Slice of an x-cop algebra spanned by its labels up to a degree.
    pub fn from_xcop(xalg: &XcopAlgebra, lmax: u32) -> Result<SliceAlgebra, Error> {
        let labels = xalg.labels_up_to(lmax);
        let dim = labels.len();
        let outer_dim = xalg.outer_dim();
        let index: BTreeMap<BasisLabel, usize> = labels
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, l)| (l, i))
            .collect();
        let coords = |e: &crate::construct::XcopElt| -> Option<Vec<Scalar>> {
            let mut v = vec![scalar::zero(); dim];
            for (l, c) in e.terms() {
                let &i = index.get(l)?;
                v[i] = c.clone();
            }
            Some(v)
        };
        let unit = coords(&xalg.unit_elt())
            .ok_or_else(|| Error::NotClosed("unit leaves the slice".into()))?;
        let mut mult = vec![vec![None; dim]; dim];
        for (i, li) in labels.iter().enumerate() {
            for (j, lj) in labels.iter().enumerate() {
                mult[i][j] = coords(&xalg.mul_labels(li, lj));
            }
        }
        let mut taction = vec![vec![None; dim]; outer_dim];
        for k in 0..outer_dim {
            let t = XElt::gen(outer_dim, k);
            for (i, li) in labels.iter().enumerate() {
                let mut e = crate::construct::XcopElt::zero();
                e.add_term(li.clone(), scalar::one());
                taction[k][i] = coords(&xalg.taction(&t, &e));
            }
        }
        let degrees = labels.iter().map(label_total_degree).collect();
        Ok(SliceAlgebra {
            dim,
            outer_dim,
            unit,
            mult,
            taction,
            degrees,
        })
    }

    pub fn mul_coords(&self, a: &[Scalar], b: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut out = vec![scalar::zero(); self.dim];
        for (i, ca) in a.iter().enumerate() {
            if ca.is_zero() {
                continue;
            }
            for (j, cb) in b.iter().enumerate() {
                if cb.is_zero() {
                    continue;
                }
                let entry = self.mult[i][j].as_ref()?;
                for (k, c) in entry.iter().enumerate() {
                    if !c.is_zero() {
                        out[k] += ca * cb * c;
                    }
                }
            }
        }
        Some(out)
    }

    pub fn t_apply(&self, k: usize, v: &[Scalar]) -> Option<Vec<Scalar>> {
        let mut out = vec![scalar::zero(); self.dim];
        for (i, c) in v.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let entry = self.taction[k][i].as_ref()?;
            for (m, e) in entry.iter().enumerate() {
                if !e.is_zero() {
                    out[m] += c * e;
                }
            }
        }
        Some(out)
    }

    /// Basis of the joint kernel of all coordinate actions.
    pub fn zero_action_part(&self) -> Result<Vec<Vec<Scalar>>, Error> {
        let mut blocks = Vec::new();
        for k in 0..self.outer_dim {
            let mut m = Matrix::zeros(self.dim, self.dim);
            let mut nonzero = false;
            for i in 0..self.dim {
                let col = self.taction[k][i]
                    .as_ref()
                    .ok_or_else(|| Error::NotClosed("coordinate action leaves the slice".into()))?;
                for (r, c) in col.iter().enumerate() {
                    if !c.is_zero() {
                        *m.at_mut(r, i) = c.clone();
                        nonzero = true;
                    }
                }
            }
            if nonzero {
                blocks.push(m);
            }
        }
        if blocks.is_empty() {
            let mut out = Vec::with_capacity(self.dim);
            for i in 0..self.dim {
                let mut v = vec![scalar::zero(); self.dim];
                v[i] = scalar::one();
                out.push(v);
            }
            return Ok(out);
        }
        let mut stacked = Matrix::zeros(blocks.len() * self.dim, self.dim);
        for (b, m) in blocks.iter().enumerate() {
            for r in 0..self.dim {
                for c in 0..self.dim {
                    *stacked.at_mut(b * self.dim + r, c) = m.at(r, c).clone();
                }
            }
        }
        Ok(stacked.kernel())
    }

    /// Coordinates whose action on the slice is nonzero.
    pub fn support(&self) -> Vec<usize> {
        (0..self.outer_dim)
            .filter(|&k| {
                self.taction[k].iter().any(|e| {
                    e.as_ref()
                        .map(|v| v.iter().any(|c| !c.is_zero()))
                        .unwrap_or(true)
                })
            })
            .collect()
    }
}

/// Extract the base algebra of an annihilation-free pseudoalgebra: project
/// every generator label of degree at most lmax onto its good
/// representative, and tabulate products and coordinate actions of the
/// goods at the distinguished functional.
pub fn extract_base_algebra(
    alg: &PseudoAlgebra,
    lmax: u32,
) -> Result<(Vec<PseudoElement>, SliceAlgebra), Error> {
    let goods: Vec<PseudoElement> = find_good_generators(alg, lmax)?
        .into_iter()
        .map(|(_, g)| g)
        .filter(|g| !g.is_zero())
        .collect();
    if goods.is_empty() {
        return Err(Error::NotFound("no nonzero good generators".into()));
    }
    let dim = goods.len();
    let hdim = alg.dim();

    let mut keys: BTreeMap<(BasisLabel, MultiIndex), usize> = BTreeMap::new();
    let register = |pe: &PseudoElement, keys: &mut BTreeMap<(BasisLabel, MultiIndex), usize>| {
        for k in pe.coords().into_keys() {
            let next = keys.len();
            keys.entry(k).or_insert(next);
        }
    };
    for g in &goods {
        register(g, &mut keys);
    }
    // products and actions can only involve finitely many coordinates; two
    // passes let us size the ambient space before spanning
    let e = find_pseudoidentity(alg)?;
    let one_x = XElt::one(hdim);
    let mut raw_products: Vec<Vec<PseudoElement>> = Vec::with_capacity(dim);
    for a in &goods {
        let mut row = Vec::with_capacity(dim);
        for b in &goods {
            let p = xprod(alg, a, &one_x, b)?;
            register(&p, &mut keys);
            row.push(p);
        }
        raw_products.push(row);
    }
    let mut raw_actions: Vec<Vec<PseudoElement>> = Vec::with_capacity(hdim);
    for k in 0..hdim {
        let t = XElt::gen(hdim, k);
        let mut row = Vec::with_capacity(dim);
        for b in &goods {
            let p = xprod(alg, &e, &t, b)?;
            register(&p, &mut keys);
            row.push(p);
        }
        raw_actions.push(row);
    }

    let to_vec = |pe: &PseudoElement| -> Vec<Scalar> {
        let mut v = vec![scalar::zero(); keys.len()];
        for (k, c) in pe.coords() {
            v[*keys.get(&k).expect("registered coordinate")] = c;
        }
        v
    };
    let mut span = RowSpace::new(keys.len());
    let mut independent = true;
    for g in &goods {
        independent &= span.insert(&to_vec(g));
    }
    if !independent {
        return Err(Error::NotClosed("good projections are dependent".into()));
    }
    let in_goods = |pe: &PseudoElement| -> Option<Vec<Scalar>> {
        // coordinates relative to the inserted (echelonized) basis get
        // rewritten to the goods basis by a small solve
        let target = to_vec(pe);
        span.coordinates(&target)?;
        let mut m = Matrix::zeros(keys.len(), dim);
        for (j, g) in goods.iter().enumerate() {
            for (r, c) in to_vec(g).iter().enumerate() {
                *m.at_mut(r, j) = c.clone();
            }
        }
        m.solve(&target)
    };

    let degrees: Vec<u32> = goods
        .iter()
        .map(|g| {
            g.terms()
                .map(|(l, h)| label_total_degree(l) + h.degree().unwrap_or(0))
                .max()
                .unwrap_or(0)
        })
        .collect();
    let unit = in_goods(&xprod(alg, &e, &one_x, &e)?)
        .ok_or_else(|| Error::NotClosed("unit is not spanned by the goods".into()))?;

    let mut mult = vec![vec![None; dim]; dim];
    for i in 0..dim {
        for j in 0..dim {
            let p = &raw_products[i][j];
            match in_goods(p) {
                Some(c) => mult[i][j] = Some(c),
                None => {
                    if degrees[i] + degrees[j] <= lmax {
                        return Err(Error::NotClosed(
                            "a product within the slice degree escapes the goods span".into(),
                        ));
                    }
                }
            }
        }
    }
    let mut taction = vec![vec![None; dim]; hdim];
    for k in 0..hdim {
        for j in 0..dim {
            taction[k][j] = Some(in_goods(&raw_actions[k][j]).ok_or_else(|| {
                Error::NotClosed("a coordinate action escapes the goods span".into())
            })?);
        }
    }

    let slice = SliceAlgebra {
        dim,
        outer_dim: hdim,
        unit,
        mult,
        taction,
        degrees,
    };
    Ok((goods, slice))
}

/// Exact table comparison of two slices (same basis order expected).
pub fn model_match(a: &SliceAlgebra, b: &SliceAlgebra) -> bool {
    a.dim == b.dim
        && a.outer_dim == b.outer_dim
        && a.degrees == b.degrees
        && a.unit == b.unit
        && a.mult == b.mult
        && a.taction == b.taction
}

/// Smallness probe: the zero-action part must not grow between two slice
/// degrees.  Polynomial-style algebras keep acquiring new invariants and are
/// rejected.
pub fn is_small(
    make: impl Fn(u32) -> Result<SliceAlgebra, Error>,
    l0: u32,
) -> Result<bool, Error> {
    let d0 = make(l0)?.zero_action_part()?.len();
    let d1 = make(l0 + 1)?.zero_action_part()?.len();
    Ok(d0 == d1)
}

/// The two-sided ideal generated by the seed vectors, grown within the
/// slice; `None` when a product escapes, which callers treat as "the ideal
/// is not visibly proper".
pub fn ideal_closure(slice: &SliceAlgebra, seeds: &[Vec<Scalar>]) -> Option<RowSpace> {
    let mut space = RowSpace::new(slice.dim);
    for s in seeds {
        space.insert(s);
    }
    loop {
        let mut grew = false;
        for v in space.basis() {
            for i in 0..slice.dim {
                let mut basis_vec = vec![scalar::zero(); slice.dim];
                basis_vec[i] = scalar::one();
                let left = slice.mul_coords(&basis_vec, &v)?;
                let right = slice.mul_coords(&v, &basis_vec)?;
                for image in [left, right] {
                    if image.iter().any(|c| !c.is_zero()) && space.insert(&image) {
                        grew = true;
                    }
                }
            }
        }
        if !grew {
            return Some(space);
        }
    }
}

/// Basis of the largest subspace on which every coordinate acts as zero;
/// it is closed under the product by the twisted derivation rule.
pub fn max_current_subalgebra(slice: &SliceAlgebra) -> Result<Vec<Vec<Scalar>>, Error> {
    slice.zero_action_part()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub enum Classification {
    /// full matrix algebra of size n
    MatrixAlgebra { n: usize },
    /// matrices over the opposite enveloping algebra of a coordinate
    /// subalgebra of the given dimension
    CurrentOverSubalgebra { n: usize, sub_dim: usize },
    /// as above but deformed by a non-trivial central cocycle
    WeylLike { n: usize, sub_dim: usize },
}

fn scale_vec(v: &[Scalar], c: &Scalar) -> Vec<Scalar> {
    v.iter().map(|x| x * c).collect()
}

fn add_vecs(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

fn sub_vecs(a: &[Scalar], b: &[Scalar]) -> Vec<Scalar> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

fn is_zero_vec(v: &[Scalar]) -> bool {
    v.iter().all(|c| c.is_zero())
}

/// If p is a scalar multiple of base, return the factor.
fn scalar_multiple(p: &[Scalar], base: &[Scalar]) -> Option<Scalar> {
    let k = base.iter().position(|c| !c.is_zero())?;
    let mu = &p[k] / &base[k];
    if sub_vecs(p, &scale_vec(base, &mu)).iter().all(|c| c.is_zero()) {
        Some(mu)
    } else {
        None
    }
}

/// Recognize a full matrix algebra on the span of the given vectors, which
/// must be closed under the slice product.  The basis is assumed adapted:
/// products of basis vectors are scalar multiples of basis vectors.
fn matrix_units(slice: &SliceAlgebra, basis: &[Vec<Scalar>]) -> Result<usize, Error> {
    let dim = basis.len();
    let mut span = RowSpace::new(slice.dim);
    for b in basis {
        if !span.insert(b) {
            return Err(Error::ModelMismatch(
                "degree-zero basis vectors are dependent".into(),
            ));
        }
    }
    let mini = |v: &[Scalar]| -> Option<Vec<Scalar>> {
        span.coordinates(v)?;
        let mut m = Matrix::zeros(slice.dim, dim);
        for (j, b) in basis.iter().enumerate() {
            for (r, c) in b.iter().enumerate() {
                *m.at_mut(r, j) = c.clone();
            }
        }
        m.solve(v)
    };
    let mul = |a: &[Scalar], b: &[Scalar]| -> Result<Vec<Scalar>, Error> {
        let pa = basis
            .iter()
            .zip(a)
            .fold(vec![scalar::zero(); slice.dim], |acc, (v, c)| {
                add_vecs(&acc, &scale_vec(v, c))
            });
        let pb = basis
            .iter()
            .zip(b)
            .fold(vec![scalar::zero(); slice.dim], |acc, (v, c)| {
                add_vecs(&acc, &scale_vec(v, c))
            });
        let prod = slice
            .mul_coords(&pa, &pb)
            .ok_or_else(|| Error::ModelMismatch("product escapes the slice".into()))?;
        mini(&prod).ok_or_else(|| Error::ModelMismatch("degree-zero part is not closed".into()))
    };

    let unit = mini(&slice.unit)
        .ok_or_else(|| Error::ModelMismatch("unit is not in the degree-zero part".into()))?;

    let n = (1..=dim).find(|n| n * n == dim).ok_or_else(|| {
        Error::ModelMismatch("degree-zero dimension is not a perfect square".into())
    })?;

    let e = |i: usize| -> Vec<Scalar> {
        let mut v = vec![scalar::zero(); dim];
        v[i] = scalar::one();
        v
    };

    // adapted-basis check and idempotent detection
    let mut diag = Vec::new();
    for i in 0..dim {
        for j in 0..dim {
            let p = mul(&e(i), &e(j))?;
            if p.iter().filter(|c| !c.is_zero()).count() > 1 {
                return Err(Error::ModelMismatch(
                    "basis is not adapted to the product".into(),
                ));
            }
        }
        let sq = mul(&e(i), &e(i))?;
        if !sq[i].is_zero() {
            diag.push((i, sq[i].clone()));
        }
    }
    if diag.len() != n {
        return Err(Error::ModelMismatch(format!(
            "expected {n} diagonal idempotents, found {}",
            diag.len()
        )));
    }
    let f: Vec<Vec<Scalar>> = diag
        .iter()
        .map(|(i, c)| scale_vec(&e(*i), &(scalar::one() / c)))
        .collect();
    for (a, fa) in f.iter().enumerate() {
        for (b, fb) in f.iter().enumerate() {
            let p = mul(fa, fb)?;
            let want = if a == b { fa.clone() } else { vec![scalar::zero(); dim] };
            if sub_vecs(&p, &want).iter().any(|c| !c.is_zero()) {
                return Err(Error::ModelMismatch(
                    "diagonal idempotents are not orthogonal".into(),
                ));
            }
        }
    }
    let total = f
        .iter()
        .fold(vec![scalar::zero(); dim], |acc, v| add_vecs(&acc, v));
    if sub_vecs(&total, &unit).iter().any(|c| !c.is_zero()) {
        return Err(Error::ModelMismatch(
            "diagonal idempotents do not sum to the unit".into(),
        ));
    }

    // cell assignment
    let mut cell_of = vec![(usize::MAX, usize::MAX); dim];
    let mut by_cell: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    for k in 0..dim {
        let mut row = None;
        let mut col = None;
        for (a, fa) in f.iter().enumerate() {
            if !is_zero_vec(&mul(fa, &e(k))?) {
                if row.replace(a).is_some() {
                    return Err(Error::ModelMismatch("ambiguous cell row".into()));
                }
            }
            if !is_zero_vec(&mul(&e(k), fa)?) {
                if col.replace(a).is_some() {
                    return Err(Error::ModelMismatch("ambiguous cell column".into()));
                }
            }
        }
        let (Some(r), Some(c)) = (row, col) else {
            return Err(Error::ModelMismatch("element misses the cell grid".into()));
        };
        if by_cell.insert((r, c), k).is_some() {
            return Err(Error::ModelMismatch("two elements share a cell".into()));
        }
        cell_of[k] = (r, c);
    }

    // normalize transition elements through the first row and column
    let mut units: Vec<Vec<Vec<Scalar>>> = vec![vec![Vec::new(); n]; n];
    units[0][0] = f[0].clone();
    for i in 1..n {
        let g0i = e(*by_cell
            .get(&(0, i))
            .ok_or_else(|| Error::ModelMismatch("missing cell".into()))?);
        let gi0 = e(*by_cell
            .get(&(i, 0))
            .ok_or_else(|| Error::ModelMismatch("missing cell".into()))?);
        let p = mul(&g0i, &gi0)?;
        let mu = scalar_multiple(&p, &f[0])
            .filter(|m| !m.is_zero())
            .ok_or_else(|| Error::ModelMismatch("transition products degenerate".into()))?;
        units[0][i] = g0i;
        units[i][0] = scale_vec(&gi0, &(scalar::one() / mu));
        let back = mul(&units[i][0], &units[0][i])?;
        if sub_vecs(&back, &f[i]).iter().any(|c| !c.is_zero()) {
            return Err(Error::ModelMismatch(
                "transition elements do not close on the idempotents".into(),
            ));
        }
        units[i][i] = f[i].clone();
    }
    for i in 1..n {
        for j in 1..n {
            if i != j {
                units[i][j] = mul(&units[i][0].clone(), &units[0][j].clone())?;
            }
        }
    }

    // full table verification
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                for l in 0..n {
                    let p = mul(&units[i][j], &units[k][l])?;
                    let want = if j == k {
                        units[i][l].clone()
                    } else {
                        vec![scalar::zero(); dim]
                    };
                    if sub_vecs(&p, &want).iter().any(|c| !c.is_zero()) {
                        return Err(Error::ModelMismatch(
                            "matrix unit table fails to verify".into(),
                        ));
                    }
                }
            }
        }
    }
    Ok(n)
}

/// Classify a small slice against the known models.  The ambient Lie
/// algebra supplies the expected bracket on the acting coordinates.
pub fn classify_small_simple(
    lie: &LieAlgebra,
    slice: &SliceAlgebra,
) -> Result<Classification, Error> {
    if slice.dim == 0 {
        return Err(Error::Input("empty slice".into()));
    }
    let fil0 = slice.zero_action_part()?;
    let n = matrix_units(slice, &fil0)?;
    if fil0.len() == slice.dim {
        return Ok(Classification::MatrixAlgebra { n });
    }

    let support = slice.support();
    if !lie.is_subalgebra_span(&support) {
        return Err(Error::ModelMismatch(
            "acting coordinates do not span a subalgebra".into(),
        ));
    }
    let sub = lie.restrict(&support)?;

    // left and right multiplication by the degree-zero part, for the
    // centralizer constraints
    let mut commute_rows: Vec<Matrix> = Vec::new();
    for fv in &fil0 {
        let mut lm = Matrix::zeros(slice.dim, slice.dim);
        let mut rm = Matrix::zeros(slice.dim, slice.dim);
        for i in 0..slice.dim {
            let mut basis_vec = vec![scalar::zero(); slice.dim];
            basis_vec[i] = scalar::one();
            let left = slice
                .mul_coords(fv, &basis_vec)
                .ok_or_else(|| Error::ModelMismatch("product escapes the slice".into()))?;
            let right = slice
                .mul_coords(&basis_vec, fv)
                .ok_or_else(|| Error::ModelMismatch("product escapes the slice".into()))?;
            for r in 0..slice.dim {
                *lm.at_mut(r, i) = left[r].clone();
                *rm.at_mut(r, i) = right[r].clone();
            }
        }
        commute_rows.push(lm.sub(&rm));
    }

    // conditioned coordinates: t_j(z_k) = delta_jk unit, commuting with the
    // degree-zero part
    let block = slice.dim;
    let rows = support.len() * block + commute_rows.len() * block;
    let mut system = Matrix::zeros(rows, slice.dim);
    for (bi, &j) in support.iter().enumerate() {
        for i in 0..slice.dim {
            let col = slice.taction[j][i]
                .as_ref()
                .ok_or_else(|| Error::NotClosed("coordinate action leaves the slice".into()))?;
            for r in 0..block {
                *system.at_mut(bi * block + r, i) = col[r].clone();
            }
        }
    }
    for (ci, cm) in commute_rows.iter().enumerate() {
        let base = support.len() * block + ci * block;
        for r in 0..block {
            for c in 0..slice.dim {
                *system.at_mut(base + r, c) = cm.at(r, c).clone();
            }
        }
    }
    let mut zs = Vec::with_capacity(support.len());
    for kpos in 0..support.len() {
        let mut rhs = vec![scalar::zero(); rows];
        for r in 0..block {
            rhs[kpos * block + r] = slice.unit[r].clone();
        }
        let z = system.solve(&rhs).ok_or_else(|| {
            Error::ModelMismatch("no conditioned coordinate representatives".into())
        })?;
        zs.push(z);
    }

    // commutators must decompose over the unit and the conditioned
    // coordinates, with structure constants matching the reversed bracket
    let mut basis_matrix = Matrix::zeros(slice.dim, 1 + zs.len());
    for r in 0..slice.dim {
        *basis_matrix.at_mut(r, 0) = slice.unit[r].clone();
        for (c, z) in zs.iter().enumerate() {
            *basis_matrix.at_mut(r, 1 + c) = z[r].clone();
        }
    }
    let mut phi = Cocycle::new();
    for jpos in 0..support.len() {
        for kpos in (jpos + 1)..support.len() {
            let jk = slice
                .mul_coords(&zs[jpos], &zs[kpos])
                .ok_or_else(|| Error::ModelMismatch("commutator escapes the slice".into()))?;
            let kj = slice
                .mul_coords(&zs[kpos], &zs[jpos])
                .ok_or_else(|| Error::ModelMismatch("commutator escapes the slice".into()))?;
            let com = sub_vecs(&jk, &kj);
            let sol = basis_matrix.solve(&com).ok_or_else(|| {
                Error::ModelMismatch("commutator leaves the conditioned span".into())
            })?;
            let bracket = lie.bracket_basis(support[jpos], support[kpos]);
            for (mpos, &m) in support.iter().enumerate() {
                let expected = -bracket.get(&m).cloned().unwrap_or_else(scalar::zero);
                if sol[1 + mpos] != expected {
                    return Err(Error::ModelMismatch(
                        "structure constants do not match the reversed bracket".into(),
                    ));
                }
            }
            let unit_part = -sol[0].clone();
            if !unit_part.is_zero() {
                phi.set(jpos, kpos, unit_part);
            }
        }
    }
    phi.validate(&sub)?;
    if phi.is_coboundary(&sub) {
        Ok(Classification::CurrentOverSubalgebra {
            n,
            sub_dim: support.len(),
        })
    } else {
        Ok(Classification::WeylLike {
            n,
            sub_dim: support.len(),
        })
    }
}

/// Classify the base algebra of a pseudoalgebra through extraction, or a
/// differential-type backend through its slice directly.
pub fn classify(
    alg: &PseudoAlgebra,
    lmax: u32,
) -> Result<Classification, Error> {
    match &alg.backend {
        crate::pseudo::Backend::Dif(xalg) => {
            if !is_small(|l| SliceAlgebra::from_xcop(xalg, l), lmax)? {
                return Err(Error::OutOfScope(
                    "the coordinate slice keeps growing; not a small algebra".into(),
                ));
            }
            let slice = SliceAlgebra::from_xcop(xalg, lmax)?;
            classify_small_simple(&alg.ctx.lie, &slice)
        }
        crate::pseudo::Backend::Cur(_) | crate::pseudo::Backend::EqCend(_) => {
            if !is_small(|l| extract_base_algebra(alg, l).map(|(_, s)| s), lmax)? {
                return Err(Error::OutOfScope(
                    "the extracted base keeps growing; not a small algebra".into(),
                ));
            }
            let (_, slice) = extract_base_algebra(alg, lmax)?;
            classify_small_simple(&alg.ctx.lie, &slice)
        }
        crate::pseudo::Backend::CurrentExt { .. } => Err(Error::OutOfScope(
            "classify the inner algebra of a current extension directly".into(),
        )),
    }
}

// ---------------------------------------------------------------------------
// Rank one

#[derive(Clone, Debug, Serialize)]
pub struct Rank1Report {
    pub dmax: u32,
    pub unknowns: usize,
    pub kernel_dim: usize,
    /// true when the solution space is exactly the scalar family supported
    /// on the unit coefficient
    pub only_unit_family: bool,
}

/// Linear relaxation of the rank-one structures with coefficient support of
/// degree at most dmax: unknowns are the symmetric products y_{IJ} of the
/// structure coefficients, and the compatibility law induces the relations
///   sum_{I, J >= Q} [I * (J - Q)]_P y_{IJ} = y_{PQ}.
pub fn rank1_classify(ctx: &Arc<HCtx>, dmax: u32) -> Result<Rank1Report, Error> {
    let n = ctx.dim();
    let supp = indices_up_to(n, dmax);
    let mut unknowns: Vec<(MultiIndex, MultiIndex)> = Vec::new();
    let mut slot: BTreeMap<(MultiIndex, MultiIndex), usize> = BTreeMap::new();
    for (a, i) in supp.iter().enumerate() {
        for j in supp.iter().skip(a) {
            let key = (i.clone(), j.clone());
            slot.insert(key.clone(), unknowns.len());
            unknowns.push(key);
        }
    }
    let sorted_key = |a: &MultiIndex, b: &MultiIndex| -> (MultiIndex, MultiIndex) {
        if a <= b {
            (a.clone(), b.clone())
        } else {
            (b.clone(), a.clone())
        }
    };

    let mut rows: Vec<Vec<Scalar>> = Vec::new();
    for q in &supp {
        for p in indices_up_to(n, 2 * dmax) {
            let mut row = vec![scalar::zero(); unknowns.len()];
            let mut nonzero = false;
            // ordered sum over (I, J) with J >= Q
            for i in &supp {
                for j in &supp {
                    let Some(jq) = j.checked_sub(q) else { continue };
                    let prod = crate::hopf::mono_mul(ctx, i, &jq);
                    let c = prod.coeff(&p);
                    if c.is_zero() {
                        continue;
                    }
                    let idx = slot[&sorted_key(i, j)];
                    row[idx] += c;
                    nonzero = true;
                }
            }
            if p.degree() <= dmax {
                let idx = slot[&sorted_key(&p, q)];
                row[idx] -= scalar::one();
                nonzero = true;
            }
            if nonzero {
                rows.push(row);
            }
        }
    }
    let mut system = Matrix::zeros(rows.len(), unknowns.len());
    for (r, row) in rows.iter().enumerate() {
        for (c, v) in row.iter().enumerate() {
            *system.at_mut(r, c) = v.clone();
        }
    }
    let kernel = system.kernel();
    let zero = MultiIndex::zero(n);
    let unit_slot = slot[&(zero.clone(), zero)];
    let only_unit_family = kernel.len() == 1
        && kernel[0]
            .iter()
            .enumerate()
            .all(|(i, c)| i == unit_slot || c.is_zero())
        && !kernel[0][unit_slot].is_zero();
    Ok(Rank1Report {
        dmax,
        unknowns: unknowns.len(),
        kernel_dim: kernel.len(),
        only_unit_family,
    })
}
