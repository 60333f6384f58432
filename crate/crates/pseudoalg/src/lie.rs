//! Finite-dimensional Lie algebras given by exact structure constants,
//! 2-cocycles with trivial coefficients, and one-dimensional central
//! extensions.

use crate::error::Error;
use crate::scalar::{self, Scalar};
use num::Zero;
use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

/// A Lie algebra of dimension n over the rationals. Brackets are stored for
/// i < j only (0-based); [x_j, x_i] is derived by antisymmetry and
/// [x_i, x_i] = 0, so those identities hold by construction and validation
/// concentrates on the Jacobi identity.
#[derive(Clone, Debug, PartialEq)]
pub struct LieAlgebra {
    pub dim: usize,
    /// (i, j) with i < j  ->  sparse coefficients of [x_i, x_j]
    pub bracket: BTreeMap<(usize, usize), BTreeMap<usize, Scalar>>,
}

impl LieAlgebra {
    pub fn new(dim: usize) -> Self {
        LieAlgebra {
            dim,
            bracket: BTreeMap::new(),
        }
    }

    pub fn abelian(dim: usize) -> Self {
        LieAlgebra::new(dim)
    }

    /// dim 2, [x_1, x_2] = x_2 (the unique nonabelian 2-dim algebra).
    pub fn nonabelian2() -> Self {
        let mut g = LieAlgebra::new(2);
        g.set_bracket(0, 1, &[(1, scalar::one())]);
        g
    }

    /// dim 3, [x_1, x_2] = x_3 central.
    pub fn heisenberg() -> Self {
        let mut g = LieAlgebra::new(3);
        g.set_bracket(0, 1, &[(2, scalar::one())]);
        g
    }

    pub fn set_bracket(&mut self, i: usize, j: usize, coeffs: &[(usize, Scalar)]) {
        assert!(i < j && j < self.dim);
        let mut m = BTreeMap::new();
        for (k, c) in coeffs {
            assert!(*k < self.dim);
            if !c.is_zero() {
                m.insert(*k, c.clone());
            }
        }
        if m.is_empty() {
            self.bracket.remove(&(i, j));
        } else {
            self.bracket.insert((i, j), m);
        }
    }

    /// [x_i, x_j] for arbitrary i, j as a sparse coefficient map.
    pub fn bracket_basis(&self, i: usize, j: usize) -> BTreeMap<usize, Scalar> {
        if i == j {
            return BTreeMap::new();
        }
        let (a, b, sign) = if i < j { (i, j, 1) } else { (j, i, -1) };
        let mut out = self.bracket.get(&(a, b)).cloned().unwrap_or_default();
        if sign < 0 {
            for c in out.values_mut() {
                *c = -c.clone();
            }
        }
        out
    }

    /// Bracket of two sparse vectors.
    pub fn bracket_elt(
        &self,
        u: &BTreeMap<usize, Scalar>,
        v: &BTreeMap<usize, Scalar>,
    ) -> BTreeMap<usize, Scalar> {
        let mut out: BTreeMap<usize, Scalar> = BTreeMap::new();
        for (i, a) in u {
            for (j, b) in v {
                for (k, c) in self.bracket_basis(*i, *j) {
                    let entry = out.entry(k).or_insert_with(scalar::zero);
                    *entry += a * b * &c;
                }
            }
        }
        out.retain(|_, c| !c.is_zero());
        out
    }

    /// Check the Jacobi identity on all basis triples.
    pub fn validate(&self) -> Result<(), Error> {
        for ((i, j), m) in &self.bracket {
            debug_assert!(i < j);
            for k in m.keys() {
                assert!(*k < self.dim);
            }
        }
        for i in 0..self.dim {
            for j in (i + 1)..self.dim {
                for k in (j + 1)..self.dim {
                    let mut defect: BTreeMap<usize, Scalar> = BTreeMap::new();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = self.bracket_basis(a, b);
                        let outer =
                            self.bracket_elt(&inner, &BTreeMap::from([(c, scalar::one())]));
                        for (t, v) in outer {
                            *defect.entry(t).or_insert_with(scalar::zero) += v;
                        }
                    }
                    defect.retain(|_, c| !c.is_zero());
                    if !defect.is_empty() {
                        return Err(Error::JacobiViolation {
                            i,
                            j,
                            k,
                            defect: format!("{defect:?}"),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Does the span of the listed basis vectors close under the bracket?
    pub fn is_subalgebra_span(&self, indices: &[usize]) -> bool {
        let set: std::collections::BTreeSet<usize> = indices.iter().copied().collect();
        for &i in indices {
            for &j in indices {
                if self.bracket_basis(i, j).keys().any(|k| !set.contains(k)) {
                    return false;
                }
            }
        }
        true
    }

    /// The Lie algebra structure induced on the span of the listed basis
    /// vectors (which must form a subalgebra); coordinate k of the result is
    /// `indices[k]` of the original.
    pub fn restrict(&self, indices: &[usize]) -> Result<LieAlgebra, Error> {
        if !self.is_subalgebra_span(indices) {
            return Err(Error::NotSubalgebra);
        }
        let pos: BTreeMap<usize, usize> =
            indices.iter().enumerate().map(|(k, &i)| (i, k)).collect();
        let mut out = LieAlgebra::new(indices.len());
        for (a, &i) in indices.iter().enumerate() {
            for (b, &j) in indices.iter().enumerate() {
                if a < b {
                    let coeffs: Vec<(usize, Scalar)> = self
                        .bracket_basis(i, j)
                        .into_iter()
                        .map(|(k, c)| (pos[&k], c))
                        .collect();
                    out.set_bracket(a, b, &coeffs);
                }
            }
        }
        Ok(out)
    }
}

/// A 2-cocycle with trivial (scalar) coefficients: a skew bilinear form
/// phi with phi([x,y],z) + phi([y,z],x) + phi([z,x],y) = 0.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Cocycle {
    /// (i, j) with i < j  ->  phi(x_i, x_j)
    pub entries: BTreeMap<(usize, usize), Scalar>,
}

impl Cocycle {
    pub fn new() -> Self {
        Cocycle::default()
    }

    pub fn set(&mut self, i: usize, j: usize, value: Scalar) {
        assert!(i < j);
        if value.is_zero() {
            self.entries.remove(&(i, j));
        } else {
            self.entries.insert((i, j), value);
        }
    }

    pub fn eval_basis(&self, i: usize, j: usize) -> Scalar {
        if i == j {
            return scalar::zero();
        }
        if i < j {
            self.entries.get(&(i, j)).cloned().unwrap_or_else(scalar::zero)
        } else {
            -self.entries.get(&(j, i)).cloned().unwrap_or_else(scalar::zero)
        }
    }

    pub fn eval(
        &self,
        u: &BTreeMap<usize, Scalar>,
        v: &BTreeMap<usize, Scalar>,
    ) -> Scalar {
        let mut acc = scalar::zero();
        for (i, a) in u {
            for (j, b) in v {
                let p = self.eval_basis(*i, *j);
                if !p.is_zero() {
                    acc += a * b * p;
                }
            }
        }
        acc
    }

    pub fn validate(&self, g: &LieAlgebra) -> Result<(), Error> {
        for (i, j) in self.entries.keys() {
            if *j >= g.dim {
                return Err(Error::CocycleViolation {
                    detail: format!("index pair ({i},{j}) out of range"),
                });
            }
        }
        for i in 0..g.dim {
            for j in (i + 1)..g.dim {
                for k in (j + 1)..g.dim {
                    let mut acc = scalar::zero();
                    for (a, b, c) in [(i, j, k), (j, k, i), (k, i, j)] {
                        let inner = g.bracket_basis(a, b);
                        let unit = BTreeMap::from([(c, scalar::one())]);
                        acc += self.eval(&inner, &unit);
                    }
                    if !acc.is_zero() {
                        return Err(Error::CocycleViolation {
                            detail: format!(
                                "cocycle identity fails on triple ({i},{j},{k}): defect {}",
                                scalar::to_string(&acc)
                            ),
                        });
                    }
                }
            }
        }
        Ok(())
    }

    /// Is phi a coboundary, i.e. phi(x,y) = mu([x,y]) for a linear mu?
    pub fn is_coboundary(&self, g: &LieAlgebra) -> bool {
        use crate::linalg::Matrix;
        let mut rows = Vec::new();
        let mut rhs = Vec::new();
        for i in 0..g.dim {
            for j in (i + 1)..g.dim {
                let br = g.bracket_basis(i, j);
                let mut row = vec![scalar::zero(); g.dim];
                for (k, c) in br {
                    row[k] = c;
                }
                rows.push(row);
                rhs.push(self.eval_basis(i, j));
            }
        }
        if rows.is_empty() {
            return self.entries.is_empty();
        }
        Matrix::from_rows(rows).solve(&rhs).is_some()
    }
}

/// Central extension of g by a one-dimensional center spanned by a new last
/// basis vector c: [x_i, x_j]^ = [x_i, x_j] + phi(x_i, x_j) c.
pub fn central_extension(g: &LieAlgebra, phi: &Cocycle) -> Result<LieAlgebra, Error> {
    g.validate()?;
    phi.validate(g)?;
    let n = g.dim;
    let mut ext = LieAlgebra::new(n + 1);
    for i in 0..n {
        for j in (i + 1)..n {
            let mut coeffs: Vec<(usize, Scalar)> =
                g.bracket_basis(i, j).into_iter().collect();
            let p = phi.eval_basis(i, j);
            if !p.is_zero() {
                coeffs.push((n, p));
            }
            ext.set_bracket(i, j, &coeffs);
        }
    }
    ext.validate()?;
    Ok(ext)
}

// ---------------------------------------------------------------------------
// JSON form (1-based indices, coefficients as "p/q")

#[derive(Serialize, Deserialize)]
pub struct LieJson {
    pub dim: usize,
    #[serde(default)]
    pub bracket: Vec<(usize, usize, Vec<(usize, String)>)>,
}

impl LieAlgebra {
    pub fn to_json(&self) -> LieJson {
        let bracket = self
            .bracket
            .iter()
            .map(|((i, j), m)| {
                (
                    i + 1,
                    j + 1,
                    m.iter()
                        .map(|(k, c)| (k + 1, scalar::to_string(c)))
                        .collect(),
                )
            })
            .collect();
        LieJson {
            dim: self.dim,
            bracket,
        }
    }

    pub fn from_json(json: &LieJson) -> Result<Self, Error> {
        let mut g = LieAlgebra::new(json.dim);
        for (i, j, coeffs) in &json.bracket {
            if *i == 0 || *j == 0 || *i >= *j || *j > json.dim {
                return Err(Error::Input(format!("bad bracket pair ({i},{j})")));
            }
            let mut parsed = Vec::new();
            for (k, c) in coeffs {
                if *k == 0 || *k > json.dim {
                    return Err(Error::Input(format!("bad bracket target {k}")));
                }
                parsed.push((k - 1, scalar::parse(c).map_err(Error::Input)?));
            }
            g.set_bracket(i - 1, j - 1, &parsed);
        }
        g.validate()?;
        Ok(g)
    }
}

#[derive(Serialize, Deserialize)]
pub struct CocycleJson {
    pub phi: Vec<(usize, usize, String)>,
}

impl Cocycle {
    pub fn to_json(&self) -> CocycleJson {
        CocycleJson {
            phi: self
                .entries
                .iter()
                .map(|((i, j), c)| (i + 1, j + 1, scalar::to_string(c)))
                .collect(),
        }
    }

    pub fn from_json(json: &CocycleJson) -> Result<Self, Error> {
        let mut phi = Cocycle::new();
        for (i, j, c) in &json.phi {
            if *i == 0 || *i >= *j {
                return Err(Error::Input(format!("bad cocycle pair ({i},{j})")));
            }
            phi.set(i - 1, j - 1, scalar::parse(c).map_err(Error::Input)?);
        }
        Ok(phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{int, one};

    #[test]
    fn zoo_validates() {
        for g in [
            LieAlgebra::abelian(1),
            LieAlgebra::abelian(2),
            LieAlgebra::nonabelian2(),
            LieAlgebra::heisenberg(),
        ] {
            g.validate().unwrap();
        }
    }

    #[test]
    fn jacobi_violation_detected() {
        // sl2-like triple with one constant broken
        let mut g = LieAlgebra::new(3);
        g.set_bracket(0, 1, &[(2, one())]);
        g.set_bracket(0, 2, &[(0, int(2))]);
        g.set_bracket(1, 2, &[(1, int(3))]); // breaks Jacobi
        assert!(matches!(
            g.validate(),
            Err(Error::JacobiViolation { .. })
        ));
    }

    #[test]
    fn sl2_passes() {
        // [h,e] = 2e, [h,f] = -2f, [e,f] = h with basis order (h,e,f)
        let mut g = LieAlgebra::new(3);
        g.set_bracket(0, 1, &[(1, int(2))]);
        g.set_bracket(0, 2, &[(2, int(-2))]);
        g.set_bracket(1, 2, &[(0, one())]);
        g.validate().unwrap();
    }

    #[test]
    fn heisenberg_from_abelian_extension() {
        let g = LieAlgebra::abelian(2);
        let mut phi = Cocycle::new();
        phi.set(0, 1, one());
        phi.validate(&g).unwrap();
        let ext = central_extension(&g, &phi).unwrap();
        assert_eq!(ext, LieAlgebra::heisenberg());
        assert!(!phi.is_coboundary(&g));
    }

    #[test]
    fn coboundary_on_nonabelian() {
        // On [x1,x2] = x2, phi(x1,x2) = mu(x2) is always a coboundary.
        let g = LieAlgebra::nonabelian2();
        let mut phi = Cocycle::new();
        phi.set(0, 1, int(5));
        phi.validate(&g).unwrap();
        assert!(phi.is_coboundary(&g));
    }

    #[test]
    fn bad_cocycle_rejected() {
        // On Heisenberg, phi(x1,x3) = 1 violates the cocycle identity:
        // phi([x1,x2],x3)+phi([x2,x3],x1)+phi([x3,x1],x2) = phi(x3,x3) = 0 holds,
        // but try phi(x2,x3)=1 with [x1,x2]=x3: defect phi(x3,x3)+0+(-phi(x3... )
        let g = LieAlgebra::heisenberg();
        let mut phi = Cocycle::new();
        phi.set(0, 2, one());
        // cyclic sum over (1,2,3): phi([1,2],3)+phi([2,3],1)+phi([3,1],2)
        //   = phi(x3,x3) + 0 + 0 = 0, so this one is fine;
        phi.validate(&g).unwrap();
        // a genuinely bad one needs a bracket target hit by phi:
        let mut g2 = LieAlgebra::new(3);
        g2.set_bracket(0, 1, &[(1, one())]);
        g2.set_bracket(0, 2, &[(2, one())]);
        let mut bad = Cocycle::new();
        bad.set(1, 2, one());
        assert!(bad.validate(&g2).is_err());
    }

    #[test]
    fn subalgebra_span() {
        let g = LieAlgebra::nonabelian2();
        assert!(g.is_subalgebra_span(&[0]));
        assert!(g.is_subalgebra_span(&[1]));
        assert!(g.is_subalgebra_span(&[0, 1]));
        let h = LieAlgebra::heisenberg();
        assert!(h.is_subalgebra_span(&[0, 2]));
        assert!(!h.is_subalgebra_span(&[0, 1]) || h.bracket_basis(0, 1).is_empty());
        let r = h.restrict(&[0, 2]).unwrap();
        assert_eq!(r, LieAlgebra::abelian(2));
    }

    #[test]
    fn json_round_trip() {
        let g = LieAlgebra::heisenberg();
        let text = serde_json::to_string(&g.to_json()).unwrap();
        let back = LieAlgebra::from_json(&serde_json::from_str(&text).unwrap()).unwrap();
        assert_eq!(g, back);
    }
}
