//! Crossed products `A ⋊_α G` by finite groups.
//!
//! Elements of the crossed product are functions `G → A`, stored as one ambient
//! matrix per group element. Convolution and the integrated form both carry the
//! factor `1/|G|`, so the constant function `p = 1` is a projection and the
//! integrated form sends it to the projection onto the fixed vectors of `U`.

use std::sync::Arc;

use rand::Rng;

use crate::algebra::{AlgebraElement, FdCStarAlgebra, StarRepresentation, TensorPower};
use crate::error::{invalid, Budget, Error, Result};
use crate::groups::{FiniteGroup, Subgroup, UnitaryRep};
use crate::linalg::{identity, nullspace, rel_diff, CMatrix, Tolerance, C64, ONE, ZERO};
use crate::structure::SpannedAlgebra;

/// How each group element acts on the coefficient space of `A`.
#[derive(Clone, Debug)]
pub enum ActionMaps {
    /// `α_g` sends basis unit `i` to basis unit `map[g][i]`.
    Permutation(Vec<Vec<usize>>),
    /// `α_g` is the `D × D` matrix `maps[g]` acting on coefficient vectors.
    Linear(Vec<CMatrix>),
}

/// A finite group acting on a finite-dimensional C*-algebra by *-automorphisms.
#[derive(Clone, Debug)]
pub struct GroupAction {
    group: FiniteGroup,
    algebra: FdCStarAlgebra,
    maps: ActionMaps,
}

impl GroupAction {
    /// Build an action, verifying that every map is a *-automorphism and that `g ↦ α_g` is a homomorphism.
    pub fn new(group: FiniteGroup, algebra: FdCStarAlgebra, maps: ActionMaps, tol: Tolerance) -> Result<Self> {
        let action = Self::new_unchecked(group, algebra, maps)?;
        action.verify(tol)?;
        Ok(action)
    }

    fn new_unchecked(group: FiniteGroup, algebra: FdCStarAlgebra, maps: ActionMaps) -> Result<Self> {
        let d = algebra.dim();
        let ok = match &maps {
            ActionMaps::Permutation(m) => {
                m.len() == group.order() && m.iter().all(|p| p.len() == d && crate::groups::is_permutation(p))
            }
            ActionMaps::Linear(m) => m.len() == group.order() && m.iter().all(|x| x.shape() == (d, d)),
        };
        if !ok {
            return Err(invalid(format!(
                "action needs one map of size {d} per element of a group of order {}",
                group.order()
            )));
        }
        Ok(Self { group, algebra, maps })
    }

    /// The permutation action of `S_n` on `A^{⊗n}`.
    pub fn tensor_permutation(base: &FdCStarAlgebra, n: usize, budget: Budget) -> Result<Self> {
        let tp = TensorPower::new(base, n, budget)?;
        Self::from_tensor_power(&tp)
    }

    pub fn from_tensor_power(tp: &TensorPower) -> Result<Self> {
        let (sn, acts) = tp.all_actions()?;
        let maps = acts.iter().map(|a| a.coeff_map().to_vec()).collect();
        Self::new_unchecked(sn, tp.power().clone(), ActionMaps::Permutation(maps))
    }

    /// Every group element acts as the identity.
    pub fn trivial(group: FiniteGroup, algebra: FdCStarAlgebra) -> Self {
        let id: Vec<usize> = (0..algebra.dim()).collect();
        let maps = ActionMaps::Permutation(vec![id; group.order()]);
        Self { group, algebra, maps }
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn algebra(&self) -> &FdCStarAlgebra {
        &self.algebra
    }

    pub fn maps(&self) -> &ActionMaps {
        &self.maps
    }

    /// `α_g` on coefficient vectors.
    pub fn apply_coeffs(&self, g: usize, x: &AlgebraElement) -> AlgebraElement {
        match &self.maps {
            ActionMaps::Permutation(m) => {
                let mut out = vec![ZERO; x.coeffs.len()];
                for (i, &z) in x.coeffs.iter().enumerate() {
                    out[m[g][i]] = z;
                }
                AlgebraElement { coeffs: out }
            }
            ActionMaps::Linear(m) => {
                let v = crate::linalg::CVector::from_column_slice(&x.coeffs);
                AlgebraElement {
                    coeffs: (&m[g] * v).as_slice().to_vec(),
                }
            }
        }
    }

    /// `α_g` on an ambient matrix of the algebra (components outside the algebra are dropped).
    pub fn apply(&self, g: usize, x: &CMatrix) -> CMatrix {
        let coeffs = self.algebra.units().iter().map(|u| x[(u.row, u.col)]).collect();
        let y = self.apply_coeffs(g, &AlgebraElement { coeffs });
        self.algebra.embed(&y).expect("dimension matches")
    }

    /// Matrix of `α_g` on coefficient space.
    pub fn coeff_matrix(&self, g: usize) -> CMatrix {
        match &self.maps {
            ActionMaps::Permutation(m) => crate::groups::permutation_matrix(&m[g]),
            ActionMaps::Linear(m) => m[g].clone(),
        }
    }

    fn verify(&self, tol: Tolerance) -> Result<()> {
        let d = self.algebra.dim();
        let g = &self.group;
        match &self.maps {
            ActionMaps::Permutation(m) => {
                let units = self.algebra.units();
                let product = |i: usize, j: usize| -> Option<(usize, usize, usize)> {
                    let (a, b) = (units[i], units[j]);
                    (a.block == b.block && a.s == b.r).then_some((a.block, a.r, b.s))
                };
                let lookup: std::collections::HashMap<(usize, usize, usize), usize> = units
                    .iter()
                    .enumerate()
                    .map(|(i, u)| ((u.block, u.r, u.s), i))
                    .collect();
                for map in m {
                    for i in 0..d {
                        let ui = units[i];
                        let adj = lookup[&(ui.block, ui.s, ui.r)];
                        let mi = units[map[i]];
                        if map[adj] != lookup[&(mi.block, mi.s, mi.r)] {
                            return Err(Error::Verification("action map does not preserve adjoints".into()));
                        }
                        for j in 0..d {
                            let lhs = product(i, j).map(|k| map[lookup[&k]]);
                            let rhs = product(map[i], map[j]).map(|k| lookup[&k]);
                            if lhs != rhs {
                                return Err(Error::Verification("action map is not multiplicative".into()));
                            }
                        }
                    }
                }
            }
            ActionMaps::Linear(_) => {
                let basis = self.algebra.basis();
                for h in 0..g.order() {
                    let images: Vec<CMatrix> = basis.iter().map(|b| self.apply(h, b)).collect();
                    for (i, bi) in basis.iter().enumerate() {
                        if rel_diff(&self.apply(h, &bi.adjoint()), &images[i].adjoint()) > tol.eps {
                            return Err(Error::Verification("action map does not preserve adjoints".into()));
                        }
                        for (j, bj) in basis.iter().enumerate() {
                            if rel_diff(&self.apply(h, &(bi * bj)), &(&images[i] * &images[j])) > tol.eps {
                                return Err(Error::Verification("action map is not multiplicative".into()));
                            }
                        }
                    }
                    if crate::linalg::rank(&self.coeff_matrix(h), tol) != d {
                        return Err(Error::Verification("action map is not invertible".into()));
                    }
                }
            }
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                let lhs = self.coeff_matrix(g.mul(a, b));
                let rhs = self.coeff_matrix(a) * self.coeff_matrix(b);
                if rel_diff(&lhs, &rhs) > tol.eps {
                    return Err(Error::Verification("α is not a group homomorphism".into()));
                }
            }
        }
        if rel_diff(&self.coeff_matrix(g.identity()), &identity(d)) > tol.eps {
            return Err(Error::Verification("identity does not act trivially".into()));
        }
        Ok(())
    }

    /// The restricted action of a subgroup, indexed by the subgroup's local numbering.
    pub fn restrict(&self, sub: &Subgroup) -> GroupAction {
        let maps = match &self.maps {
            ActionMaps::Permutation(m) => {
                ActionMaps::Permutation(sub.elements().iter().map(|&g| m[g].clone()).collect())
            }
            ActionMaps::Linear(m) => ActionMaps::Linear(sub.elements().iter().map(|&g| m[g].clone()).collect()),
        };
        GroupAction {
            group: sub.group().clone(),
            algebra: self.algebra.clone(),
            maps,
        }
    }

    pub fn is_fixed(&self, x: &CMatrix, tol: Tolerance) -> bool {
        (0..self.group.order()).all(|g| rel_diff(&self.apply(g, x), x) <= tol.eps)
    }
}

/// Basis of `A^G = {x : α_g(x) = x for all g}`.
pub fn fixed_point_algebra(action: &GroupAction, tol: Tolerance) -> Result<SpannedAlgebra> {
    let alg = &action.algebra;
    let d = alg.dim();
    let coeff_vectors: Vec<Vec<C64>> = match &action.maps {
        ActionMaps::Permutation(m) => {
            // normalised orbit sums of basis units
            let mut seen = vec![false; d];
            let mut out = Vec::new();
            for i in 0..d {
                if seen[i] {
                    continue;
                }
                let mut orbit: Vec<usize> = m.iter().map(|p| p[i]).collect();
                orbit.sort_unstable();
                orbit.dedup();
                let w = ONE / (orbit.len() as f64).sqrt();
                let mut v = vec![ZERO; d];
                for &j in &orbit {
                    seen[j] = true;
                    v[j] = w;
                }
                out.push(v);
            }
            out
        }
        ActionMaps::Linear(m) => {
            let mut stacked = CMatrix::zeros(d * m.len(), d);
            for (g, mg) in m.iter().enumerate() {
                stacked.view_mut((g * d, 0), (d, d)).copy_from(&(mg - identity(d)));
            }
            let ns = nullspace(&stacked, tol);
            (0..ns.ncols())
                .map(|c| ns.column(c).iter().copied().collect())
                .collect()
        }
    };
    let basis = coeff_vectors
        .into_iter()
        .map(|coeffs| alg.embed(&AlgebraElement { coeffs }))
        .collect::<Result<Vec<_>>>()?;
    SpannedAlgebra::from_orthonormal(alg.ambient(), basis)
}

/// An element of `A ⋊_α G`: one ambient matrix of `A` per group element.
#[derive(Clone, Debug)]
pub struct CrossedElement {
    pub values: Vec<CMatrix>,
}

impl CrossedElement {
    pub fn zero(action: &GroupAction) -> Self {
        let k = action.algebra.ambient();
        Self {
            values: vec![CMatrix::zeros(k, k); action.group.order()],
        }
    }

    /// Random element with Gaussian algebra values.
    pub fn random<R: Rng + ?Sized>(action: &GroupAction, rng: &mut R) -> Self {
        Self {
            values: (0..action.group.order())
                .map(|_| action.algebra.random_element(rng))
                .collect(),
        }
    }

    /// `|G| δ_e`, the unit of the normalised convolution algebra.
    pub fn unit(action: &GroupAction) -> Self {
        let mut f = Self::zero(action);
        f.values[action.group.identity()] = action.algebra.unit().scale(action.group.order() as f64);
        f
    }

    pub fn distance(&self, other: &CrossedElement) -> f64 {
        let num: f64 = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| (a - b).norm_squared())
            .sum();
        let den: f64 = self
            .values
            .iter()
            .chain(&other.values)
            .map(|a| a.norm_squared())
            .fold(1.0, f64::max);
        (num / den).sqrt()
    }
}

fn check_same(action: &GroupAction, f: &CrossedElement) -> Result<()> {
    let k = action.algebra.ambient();
    if f.values.len() != action.group.order() || f.values.iter().any(|v| v.shape() != (k, k)) {
        return Err(invalid("crossed element does not match the action"));
    }
    Ok(())
}

/// `(f1 f2)(g) = (1/|G|) Σ_h f1(h) α_h(f2(h⁻¹g))`.
pub fn convolve(action: &GroupAction, f1: &CrossedElement, f2: &CrossedElement) -> Result<CrossedElement> {
    check_same(action, f1)?;
    check_same(action, f2)?;
    let g = &action.group;
    let n = g.order();
    let mut out = CrossedElement::zero(action);
    for h in 0..n {
        for t in 0..n {
            // t = h⁻¹g, so g = h t
            out.values[g.mul(h, t)] += &f1.values[h] * action.apply(h, &f2.values[t]);
        }
    }
    for v in &mut out.values {
        *v = v.unscale(n as f64);
    }
    Ok(out)
}

/// `f*(g) = α_g(f(g⁻¹))*`.
pub fn involution(action: &GroupAction, f: &CrossedElement) -> Result<CrossedElement> {
    check_same(action, f)?;
    let g = &action.group;
    Ok(CrossedElement {
        values: (0..g.order())
            .map(|x| action.apply(x, &f.values[g.inv(x)]).adjoint())
            .collect(),
    })
}

/// The corner projection `p`: the constant function `1`.
pub fn corner_projection(action: &GroupAction) -> CrossedElement {
    CrossedElement {
        values: vec![action.algebra.unit(); action.group.order()],
    }
}

/// `ι(x)`: the constant function `x`, defined for fixed points `x ∈ A^G`.
pub fn iota(action: &GroupAction, x: &CMatrix, tol: Tolerance) -> Result<CrossedElement> {
    let k = action.algebra.ambient();
    if x.shape() != (k, k) || !action.algebra.contains(x, tol) {
        return Err(invalid("ι needs an element of the algebra"));
    }
    if !action.is_fixed(x, tol) {
        return Err(invalid("ι is only defined on fixed points of the action"));
    }
    Ok(CrossedElement {
        values: vec![x.clone(); action.group.order()],
    })
}

/// A representation given by matrices for each matrix unit of the algebra.
#[derive(Clone, Debug)]
pub struct MatrixRep {
    algebra: FdCStarAlgebra,
    dim: usize,
    images: Vec<CMatrix>,
}

impl MatrixRep {
    pub fn new(algebra: &FdCStarAlgebra, images: Vec<CMatrix>) -> Result<Self> {
        if images.len() != algebra.dim() {
            return Err(invalid("one image per matrix unit is required"));
        }
        let dim = images.first().map(|m| m.nrows()).unwrap_or(0);
        if images.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::Shape("images must be square of a common size".into()));
        }
        Ok(Self {
            algebra: algebra.clone(),
            dim,
            images,
        })
    }

    /// Tabulate any representation on the matrix units.
    pub fn tabulate(algebra: &FdCStarAlgebra, rep: &dyn StarRepresentation) -> Self {
        let images = algebra.basis().iter().map(|b| rep.apply(b)).collect();
        Self {
            algebra: algebra.clone(),
            dim: rep.dim(),
            images,
        }
    }
}

impl StarRepresentation for MatrixRep {
    fn dim(&self) -> usize {
        self.dim
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        let mut out = CMatrix::zeros(self.dim, self.dim);
        for (u, img) in self.algebra.units().iter().zip(&self.images) {
            let z = x[(u.row, u.col)];
            if z != ZERO {
                out += img * z;
            }
        }
        out
    }
}

/// Representation `x ↦ u π(x) u*` or more generally `x ↦ v* π(x) v` for an isometry `v`.
#[derive(Clone)]
pub struct CompressedRep {
    inner: Arc<dyn StarRepresentation + Send + Sync>,
    isometry: CMatrix,
}

impl CompressedRep {
    pub fn new(inner: Arc<dyn StarRepresentation + Send + Sync>, isometry: CMatrix) -> Result<Self> {
        if isometry.nrows() != inner.dim() {
            return Err(Error::Shape(
                "isometry rows must match the representation dimension".into(),
            ));
        }
        Ok(Self { inner, isometry })
    }
}

impl StarRepresentation for CompressedRep {
    fn dim(&self) -> usize {
        self.isometry.ncols()
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        self.isometry.adjoint() * self.inner.apply(x) * &self.isometry
    }
}

/// A covariant pair `(π, U)` with `π(α_g(x)) = U_g π(x) U_g*`.
#[derive(Clone)]
pub struct CovariantPair {
    pub pi: Arc<dyn StarRepresentation + Send + Sync>,
    pub u: UnitaryRep,
}

impl std::fmt::Debug for CovariantPair {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("CovariantPair")
            .field("dim", &self.pi.dim())
            .field("group_order", &self.u.group.order())
            .finish()
    }
}

impl CovariantPair {
    pub fn new(pi: Arc<dyn StarRepresentation + Send + Sync>, u: UnitaryRep) -> Result<Self> {
        if pi.dim() != u.dim() {
            return Err(Error::Shape(format!(
                "representation has dimension {}, unitaries have size {}",
                pi.dim(),
                u.dim()
            )));
        }
        Ok(Self { pi, u })
    }

    pub fn dim(&self) -> usize {
        self.pi.dim()
    }

    /// Worst relative covariance residual over all group elements and the given algebra elements.
    pub fn covariance_residual(&self, action: &GroupAction, samples: &[CMatrix]) -> f64 {
        let mut worst: f64 = 0.0;
        for g in 0..action.group.order() {
            let ug = &self.u.matrices[g];
            for x in samples {
                let lhs = self.pi.apply(&action.apply(g, x));
                let rhs = ug * self.pi.apply(x) * ug.adjoint();
                worst = worst.max(rel_diff(&lhs, &rhs));
            }
        }
        worst
    }

    /// Reject pairs that are not covariant on the given samples.
    pub fn check_covariant(&self, action: &GroupAction, samples: &[CMatrix], tol: Tolerance) -> Result<()> {
        if self.u.group.order() != action.group.order() {
            return Err(invalid("unitary representation and action use different groups"));
        }
        let res = self.covariance_residual(action, samples);
        if res > tol.eps {
            return Err(Error::Verification(format!(
                "pair is not covariant (residual {res:.3e})"
            )));
        }
        Ok(())
    }

    /// Projection onto the joint fixed vectors of `U`.
    pub fn fixed_projection(&self) -> CMatrix {
        self.u.fixed_projection()
    }
}

/// `(π ⋊ U)(f) = (1/|G|) Σ_s π(f(s)) U_s`.
pub fn integrated_form(cp: &CovariantPair, action: &GroupAction, f: &CrossedElement) -> Result<CMatrix> {
    check_same(action, f)?;
    if cp.u.group.order() != action.group.order() {
        return Err(invalid("covariant pair and action use different groups"));
    }
    let n = cp.dim();
    let mut out = CMatrix::zeros(n, n);
    for (s, v) in f.values.iter().enumerate() {
        if v.iter().any(|z| *z != ZERO) {
            out += cp.pi.apply(v) * &cp.u.matrices[s];
        }
    }
    Ok(out.unscale(action.group.order() as f64))
}
