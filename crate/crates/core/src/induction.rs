//! Induced covariant representations in the coset-block model.
//!
//! For `G_0 ≤ G` with left coset representatives `g_0 = e, g_1, ..., g_r`, the
//! induced space is `⊕_j H_0`. The algebra acts blockwise by
//! `π(x)_j = π_0(α_{g_j⁻¹}(x))`, and `U_g` moves block `j` to block `k` through
//! `V(h)`, where `g g_j = g_k h`.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::algebra::StarRepresentation;
use crate::crossed::{CovariantPair, GroupAction};
use crate::error::{invalid, Error, Result};
use crate::groups::{Subgroup, UnitaryRep};
use crate::linalg::{range_basis, rank, rel_diff, CMatrix, Tolerance};
use crate::structure::intertwiners;

/// `x ↦ ⊕_j π_0(α_{g_j⁻¹}(x))`.
#[derive(Clone)]
pub struct InducedPi {
    base: Arc<dyn StarRepresentation + Send + Sync>,
    action: GroupAction,
    coset_inverses: Vec<usize>,
}

impl StarRepresentation for InducedPi {
    fn dim(&self) -> usize {
        self.base.dim() * self.coset_inverses.len()
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        let d0 = self.base.dim();
        let mut out = CMatrix::zeros(self.dim(), self.dim());
        for (j, &ginv) in self.coset_inverses.iter().enumerate() {
            let block = self.base.apply(&self.action.apply(ginv, x));
            out.view_mut((j * d0, j * d0), (d0, d0)).copy_from(&block);
        }
        out
    }
}

/// An induced covariant representation together with the data it was built from.
#[derive(Clone, Debug)]
pub struct InducedRep {
    pub base: CovariantPair,
    pub subgroup: Subgroup,
    pub action: GroupAction,
    pub result: CovariantPair,
}

fn sample_elements(action: &GroupAction, count: usize, seed: u64) -> Vec<CMatrix> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count).map(|_| action.algebra().random_element(&mut rng)).collect()
}

/// Induce a covariant pair of `(A, G_0)` to `(A, G)`.
pub fn induce(base: &CovariantPair, action: &GroupAction, sub: &Subgroup, tol: Tolerance) -> Result<InducedRep> {
    let g = action.group();
    if sub.parent().order() != g.order() {
        return Err(invalid("subgroup does not live in the acting group"));
    }
    if base.u.group.order() != sub.order() {
        return Err(invalid("base unitaries are not indexed by the subgroup"));
    }
    let restricted = action.restrict(sub);
    let samples = sample_elements(action, 3, 0x1d);
    base.check_covariant(&restricted, &samples, tol)?;

    let d0 = base.dim();
    let reps = sub.coset_reps();
    let r = reps.len();
    let mut matrices = Vec::with_capacity(g.order());
    for x in 0..g.order() {
        let mut m = CMatrix::zeros(r * d0, r * d0);
        for (j, &gj) in reps.iter().enumerate() {
            let (k, h) = sub.decompose(g.mul(x, gj));
            m.view_mut((k * d0, j * d0), (d0, d0)).copy_from(&base.u.matrices[h]);
        }
        matrices.push(m);
    }
    let pi = InducedPi {
        base: base.pi.clone(),
        action: action.clone(),
        coset_inverses: reps.iter().map(|&gj| g.inv(gj)).collect(),
    };
    let result = CovariantPair::new(Arc::new(pi), UnitaryRep::new(g.clone(), matrices)?)?;
    result.check_covariant(action, &samples, tol)?;
    Ok(InducedRep {
        base: base.clone(),
        subgroup: sub.clone(),
        action: action.clone(),
        result,
    })
}

impl InducedRep {
    pub fn dim(&self) -> usize {
        self.result.dim()
    }

    pub fn block_dim(&self) -> usize {
        self.base.dim()
    }

    pub fn num_blocks(&self) -> usize {
        self.subgroup.index()
    }

    /// Projection `p_j` onto the `j`-th coset block.
    pub fn block_projection(&self, j: usize) -> CMatrix {
        let d0 = self.block_dim();
        let mut p = CMatrix::zeros(self.dim(), self.dim());
        for i in 0..d0 {
            p[(j * d0 + i, j * d0 + i)] = crate::linalg::ONE;
        }
        p
    }

    /// For each `g`, the block permutation `j ↦ k` read off from `U_g`, checked to be exact.
    pub fn block_permutation(&self, g: usize) -> Option<Vec<usize>> {
        let d0 = self.block_dim();
        let u = &self.result.u.matrices[g];
        (0..self.num_blocks())
            .map(|j| {
                let targets: Vec<usize> = (0..self.num_blocks())
                    .filter(|&k| u.view((k * d0, j * d0), (d0, d0)).iter().any(|z| z.norm() > 0.0))
                    .collect();
                (targets.len() == 1).then(|| targets[0])
            })
            .collect()
    }
}

/// Isometry `v ↦ |G/G_0|^{-1/2} (v, v, ..., v)` from `H_0^{G_0}` onto `H^G`.
pub fn fixed_point_unitary(ind: &InducedRep, tol: Tolerance) -> CMatrix {
    let q0 = range_basis(&ind.base.fixed_projection(), tol);
    let r = ind.num_blocks();
    let d0 = ind.block_dim();
    let mut out = CMatrix::zeros(r * d0, q0.ncols());
    let w = 1.0 / (r as f64).sqrt();
    for j in 0..r {
        out.view_mut((j * d0, 0), (d0, q0.ncols())).copy_from(&q0.scale(w));
    }
    out
}

/// Generators of the integrated image of a covariant pair: `π` of each matrix unit and every `U_g`.
fn integrated_generators(pair: &CovariantPair, action: &GroupAction) -> Vec<CMatrix> {
    let mut gens: Vec<CMatrix> = action.algebra().basis().iter().map(|b| pair.pi.apply(b)).collect();
    gens.extend(pair.u.matrices.iter().cloned());
    gens
}

/// Dimension of the commutant `(π ⋊ U)'` of a covariant pair.
pub fn integrated_commutant_dim(
    pair: &CovariantPair,
    action: &GroupAction,
    tol: Tolerance,
    seed: u64,
) -> Result<usize> {
    let gens = integrated_generators(pair, action);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(intertwiners(&gens, &gens, tol, &mut rng)?.len())
}

/// The restriction map `Φ_j : (π⋊U)' ∩ {p_0..p_r}' → (π_j ⋊ V_j)'`, `T ↦ T|_{H_j}`.
#[derive(Clone, Debug)]
pub struct CommutantRestriction {
    pub block: usize,
    pub domain_dim: usize,
    pub target_dim: usize,
    /// Rank of `Φ_j` on a basis of the domain.
    pub image_rank: usize,
    /// Worst residual of `[Φ_j(T), ·]` against the target generators.
    pub residual: f64,
}

impl CommutantRestriction {
    pub fn injective(&self) -> bool {
        self.image_rank == self.domain_dim
    }

    pub fn surjective(&self) -> bool {
        self.image_rank == self.target_dim
    }

    pub fn is_isomorphism(&self, tol: Tolerance) -> bool {
        self.injective() && self.surjective() && self.residual <= tol.eps
    }
}

pub fn commutant_restriction(ind: &InducedRep, j: usize, tol: Tolerance, seed: u64) -> Result<CommutantRestriction> {
    let r = ind.num_blocks();
    if j >= r {
        return Err(invalid(format!("block {j} does not exist (index {r})")));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut gens = integrated_generators(&ind.result, &ind.action);
    gens.extend((0..r).map(|k| ind.block_projection(k)));
    let domain = intertwiners(&gens, &gens, tol, &mut rng)?;

    // compressed pair on H_j: π_j(x) = π_0(α_{g_j⁻¹}x), V_j(g) = U_g|_{H_j} for g ∈ g_j G_0 g_j⁻¹
    let d0 = ind.block_dim();
    let g = ind.action.group();
    let gj = ind.subgroup.coset_reps()[j];
    let compress = |m: &CMatrix| m.view((j * d0, j * d0), (d0, d0)).into_owned();
    let mut target_gens: Vec<CMatrix> = ind
        .action
        .algebra()
        .basis()
        .iter()
        .map(|b| compress(&ind.result.pi.apply(b)))
        .collect();
    for &h in ind.subgroup.elements() {
        let conj = g.mul(g.mul(gj, h), g.inv(gj));
        target_gens.push(compress(&ind.result.u.matrices[conj]));
    }
    let target = intertwiners(&target_gens, &target_gens, tol, &mut rng)?;

    let images: Vec<CMatrix> = domain.iter().map(compress).collect();
    let mut residual: f64 = 0.0;
    for t in &images {
        for x in &target_gens {
            residual = residual.max(rel_diff(&(t * x), &(x * t)));
        }
    }
    for t in &domain {
        // elements of the domain must be block diagonal
        let mut off = t.clone();
        for k in 0..r {
            off.view_mut((k * d0, k * d0), (d0, d0)).fill(crate::linalg::ZERO);
        }
        residual = residual.max(off.norm() / 1f64.max(t.norm()));
    }
    let image_rank = crate::structure::span_rank(&images, Tolerance { eps: tol.eps.max(1e-8) });
    Ok(CommutantRestriction {
        block: j,
        domain_dim: domain.len(),
        target_dim: target.len(),
        image_rank,
        residual,
    })
}

/// Rank of the fixed space `H^G` computed directly from `U`.
pub fn fixed_space_rank(pair: &CovariantPair, tol: Tolerance) -> usize {
    rank(&pair.fixed_projection(), tol)
}

/// Unitary equivalence of two covariant pairs for the same action.
pub fn pairs_equivalent(
    a: &CovariantPair,
    b: &CovariantPair,
    action: &GroupAction,
    tol: Tolerance,
    seed: u64,
) -> Result<bool> {
    if a.dim() != b.dim() {
        return Ok(false);
    }
    let ga = integrated_generators(a, action);
    let gb = integrated_generators(b, action);
    let ra = crate::structure::ConcreteRep::new(a.dim(), ga)?;
    let rb = crate::structure::ConcreteRep::new(b.dim(), gb)?;
    crate::structure::equivalent(&ra, &rb, tol, seed)
}

/// Verify that `fixed_point_unitary` is an isometry onto `H^G`; returns the worst residual.
pub fn fixed_point_residual(ind: &InducedRep, tol: Tolerance) -> Result<f64> {
    let w = fixed_point_unitary(ind, tol);
    let m = w.ncols();
    let iso = rel_diff(&(w.adjoint() * &w), &crate::linalg::identity(m));
    let p = ind.result.fixed_projection();
    let onto = rel_diff(&(&w * w.adjoint()), &p);
    if !iso.is_finite() || !onto.is_finite() {
        return Err(Error::Numerical("fixed-point isometry is not finite".into()));
    }
    Ok(iso.max(onto))
}
