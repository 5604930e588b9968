//! Irreducible representations of symmetric powers `S^n(A)`.
//!
//! An irrep of `S^n(A)` is labelled by a choice of distinct blocks `j_1 < ... < j_m`
//! of `A`, multiplicities `q_1 + ... + q_m = n`, and partitions `λ_k ⊢ q_k` with at
//! most `k_{j_k}` rows. Realization goes through the crossed product: a covariant
//! pair of the Young subgroup is induced to `S_n` and compressed to the fixed space.
//!
//! The module also covers isotropy groups and cocycles for general actions,
//! Schur–Weyl representations and the homogeneous decomposition of multiplicative maps.

use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::algebra::{
    symmetric_power_dimension, AlgebraSpan, FdCStarAlgebra, Representation, StarRepresentation, SymmetricPowerBasis,
    TensorPower,
};
use crate::crossed::{CompressedRep, CovariantPair, GroupAction};
use crate::error::{invalid, Budget, Error, Result};
use crate::groups::{sn_irrep, ssyt_count, young_factors, young_subgroup, Partition, Subgroup, UnitaryRep};
use crate::induction::induce;
use crate::linalg::{c, identity, kron, kron_all, range_basis, rel_diff, CMatrix, Tolerance, C64};
use crate::structure::{
    equivalent, intertwiner_dim, intertwiners, is_irreducible, minimal_central_projections, ConcreteRep,
};

/// Label of an irreducible representation of `S^n(A)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IrrepDescriptor {
    /// Distinct block indices of `A`, ascending.
    pub blocks: Vec<usize>,
    pub q: Vec<usize>,
    pub lambdas: Vec<Vec<usize>>,
    pub dim: u128,
}

impl IrrepDescriptor {
    /// Build a descriptor and compute its dimension; checks every constraint.
    pub fn new(alg: &FdCStarAlgebra, blocks: Vec<usize>, lambdas: Vec<Vec<usize>>) -> Result<Self> {
        if blocks.is_empty() || blocks.len() != lambdas.len() {
            return Err(invalid("a descriptor needs one partition per chosen block"));
        }
        if blocks.windows(2).any(|w| w[0] >= w[1]) {
            return Err(invalid("block indices must be strictly ascending"));
        }
        let mut dim = 1u128;
        let mut q = Vec::with_capacity(blocks.len());
        for (&b, lam) in blocks.iter().zip(&lambdas) {
            let k = *alg
                .blocks()
                .get(b)
                .ok_or_else(|| invalid(format!("block {b} does not exist")))?;
            let p = Partition::new(lam.clone())?;
            if p.is_empty() {
                return Err(invalid("partitions must be non-empty"));
            }
            if p.len() > k {
                return Err(invalid(format!("partition {p} has more than {k} rows")));
            }
            dim *= ssyt_count(&p, k);
            q.push(p.n());
        }
        Ok(Self {
            blocks,
            q,
            lambdas,
            dim,
        })
    }

    pub fn n(&self) -> usize {
        self.q.iter().sum()
    }

    pub fn partitions(&self) -> Vec<Partition> {
        self.lambdas
            .iter()
            .map(|l| Partition::new(l.clone()).expect("validated"))
            .collect()
    }

    /// Block of `A^{⊗n}` carrying `π_{j_1}^{⊗q_1} ⊗ ··· ⊗ π_{j_m}^{⊗q_m}`.
    pub fn power_block(&self, num_blocks: usize) -> usize {
        let mut idx = 0;
        for (&b, &qk) in self.blocks.iter().zip(&self.q) {
            for _ in 0..qk {
                idx = idx * num_blocks + b;
            }
        }
        idx
    }
}

fn compositions(n: usize, parts: usize) -> Vec<Vec<usize>> {
    if parts == 0 {
        return if n == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    for first in (0..=n).rev() {
        for mut rest in compositions(n - first, parts - 1) {
            rest.insert(0, first);
            out.push(rest);
        }
    }
    out
}

fn partitions_up_to(q: usize, rows: usize) -> Vec<Partition> {
    Partition::all(q).into_iter().filter(|p| p.len() <= rows).collect()
}

/// All irreducible representations of `S^n(A)`, without repetition.
pub fn enumerate_sn_irreps(alg: &FdCStarAlgebra, n: usize) -> Result<Vec<IrrepDescriptor>> {
    if n == 0 {
        return Err(invalid("n must be at least 1"));
    }
    let mut out = Vec::new();
    for comp in compositions(n, alg.blocks().len()) {
        let chosen: Vec<(usize, usize)> = comp
            .iter()
            .enumerate()
            .filter(|(_, &q)| q > 0)
            .map(|(b, &q)| (b, q))
            .collect();
        let mut choices: Vec<Vec<Vec<usize>>> = vec![Vec::new()];
        for &(b, qk) in &chosen {
            let options = partitions_up_to(qk, alg.blocks()[b]);
            choices = choices
                .into_iter()
                .flat_map(|prefix| {
                    options.iter().map(move |p| {
                        let mut v = prefix.clone();
                        v.push(p.parts().to_vec());
                        v
                    })
                })
                .collect();
        }
        for lambdas in choices {
            out.push(IrrepDescriptor::new(
                alg,
                chosen.iter().map(|c| c.0).collect(),
                lambdas,
            )?);
        }
    }
    Ok(out)
}

/// `A^{⊗n}`, its permutation action and the orbit-sum basis of `S^n(A)`, built once.
#[derive(Clone, Debug)]
pub struct SymmetricPower {
    pub tp: TensorPower,
    pub action: GroupAction,
    pub basis: SymmetricPowerBasis,
}

impl SymmetricPower {
    pub fn new(alg: &FdCStarAlgebra, n: usize, budget: Budget) -> Result<Self> {
        let tp = TensorPower::new(alg, n, budget)?;
        let action = GroupAction::from_tensor_power(&tp)?;
        let basis = tp.symmetric_power_basis();
        Ok(Self { tp, action, basis })
    }

    pub fn n(&self) -> usize {
        self.tp.n()
    }

    pub fn base(&self) -> &FdCStarAlgebra {
        self.tp.base()
    }

    /// `τ(σ)` restricted to the support of a block of `A^{⊗n}`, for each `σ` in `elements`.
    fn block_tau(&self, elements: &[usize], block: usize) -> Result<Vec<CMatrix>> {
        let supp = self.tp.power().support(block).to_vec();
        elements
            .iter()
            .map(|&g| {
                let sigma = self.action.group().permutation(g).expect("symmetric group");
                let tau = self.tp.permutation_action(sigma)?.ambient_unitary();
                Ok(CMatrix::from_fn(supp.len(), supp.len(), |r, s| tau[(supp[r], supp[s])]))
            })
            .collect()
    }

    /// The representation `x ↦ x_J` of `S^n(A)` on the support of block `J` of `A^{⊗n}`.
    fn block_images(&self, block: usize) -> Vec<CMatrix> {
        let power = self.tp.power();
        (0..self.basis.len())
            .map(|i| power.block_of(&self.basis.element(i), block))
            .collect()
    }
}

/// Realize a descriptor as a concrete irrep of `S^n(A)` on the orbit-sum basis.
pub fn realize_sn_irrep(sp: &SymmetricPower, desc: &IrrepDescriptor, tol: Tolerance) -> Result<ConcreteRep> {
    let alg = sp.base();
    let check = IrrepDescriptor::new(alg, desc.blocks.clone(), desc.lambdas.clone())?;
    if check != *desc || desc.n() != sp.n() {
        return Err(invalid("descriptor does not match the algebra and n"));
    }
    let n = sp.n();
    let block = desc.power_block(alg.blocks().len());
    let young = young_subgroup(sp.action.group(), &desc.q)?;
    let irreps: Vec<UnitaryRep> = desc.partitions().iter().map(sn_irrep).collect::<Result<_>>()?;
    let d_lambda: usize = irreps.iter().map(|u| u.dim()).product();

    // Π_1 = id_{V_λ} ⊗ π_J, W_1 = conj(U_λ) ⊗ τ_J on the Young subgroup
    let mut mult = vec![0; sp.tp.power().blocks().len()];
    mult[block] = d_lambda;
    let pi1 = Representation::new(sp.tp.power(), mult)?;
    let taus = sp.block_tau(young.elements(), block)?;
    let matrices = young
        .elements()
        .iter()
        .zip(&taus)
        .map(|(&g, tau)| {
            let sigma = sp.action.group().permutation(g).expect("symmetric group");
            let factors: Vec<CMatrix> = young_factors(sigma, &desc.q)
                .iter()
                .zip(&irreps)
                .map(|(s, u)| u.matrices[u.group.index_of(s).expect("factor permutation")].map(|z| z.conj()))
                .collect();
            kron(&kron_all(&factors.iter().collect::<Vec<_>>()), tau)
        })
        .collect();
    let w1 = UnitaryRep::new(young.group().clone(), matrices)?;
    let base = CovariantPair::new(Arc::new(pi1), w1)?;
    let ind = induce(&base, &sp.action, &young, tol)?;

    let q = range_basis(&ind.result.fixed_projection(), tol);
    if q.ncols() as u128 != desc.dim {
        return Err(Error::Verification(format!(
            "realized dimension {} differs from the descriptor dimension {} (n = {n})",
            q.ncols(),
            desc.dim
        )));
    }
    let rep = CompressedRep::new(ind.result.pi.clone(), q)?;
    Ok(ConcreteRep::from_rep(&sp.basis, &rep))
}

/// Both sides of the classification count for one `(A, n)`.
#[derive(Clone, Debug, Serialize)]
pub struct CrosscheckReport {
    pub n: usize,
    /// Block dimensions from the numeric Wedderburn decomposition, descending.
    pub numeric: Vec<usize>,
    /// Descriptor dimensions from the enumeration, descending.
    pub enumerated: Vec<u128>,
    pub sum_of_squares: u128,
    pub expected_dimension: u128,
}

impl CrosscheckReport {
    pub fn passed(&self) -> bool {
        self.numeric
            .iter()
            .map(|&d| d as u128)
            .eq(self.enumerated.iter().copied())
            && self.sum_of_squares == self.expected_dimension
    }
}

/// Compare the enumerated irreps of `S^n(A)` with its numerically computed Wedderburn blocks.
pub fn wedderburn_crosscheck(sp: &SymmetricPower, tol: Tolerance, seed: u64) -> Result<CrosscheckReport> {
    let report = minimal_central_projections(&sp.basis, seed, tol)?;
    let descs = enumerate_sn_irreps(sp.base(), sp.n())?;
    let mut enumerated: Vec<u128> = descs.iter().map(|d| d.dim).collect();
    enumerated.sort_unstable_by(|a, b| b.cmp(a));
    Ok(CrosscheckReport {
        n: sp.n(),
        numeric: report.sorted_block_dims(),
        sum_of_squares: enumerated.iter().map(|d| d * d).sum(),
        enumerated,
        expected_dimension: symmetric_power_dimension(sp.base().dim(), sp.n()),
    })
}

/// The Schur–Weyl irrep of `S^n(A)` on `Hom_{S_n}(V_λ, H^{⊗n})` for the irrep of block `b`.
///
/// The carrier is the range of `(d_λ/n!) Σ_σ conj(U_λ(σ)_{00}) τ(σ)`, a copy of the multiplicity space.
pub fn schur_weyl_rep(sp: &SymmetricPower, b: usize, lambda: &Partition) -> Result<ConcreteRep> {
    let alg = sp.base();
    let k = *alg
        .blocks()
        .get(b)
        .ok_or_else(|| invalid(format!("block {b} does not exist")))?;
    let n = sp.n();
    if lambda.n() != n {
        return Err(invalid(format!("partition {lambda} is not a partition of {n}")));
    }
    if lambda.len() > k {
        return Err(invalid(format!(
            "partition {lambda} has more than {k} rows: the carrier is zero"
        )));
    }
    let m = alg.blocks().len();
    let block = (0..n).fold(0, |acc, _| acc * m + b);
    let group = sp.action.group();
    let all: Vec<usize> = (0..group.order()).collect();
    let taus = sp.block_tau(&all, block)?;
    let u = sn_irrep(lambda)?;
    let mut p = CMatrix::zeros(taus[0].nrows(), taus[0].nrows());
    for (g, tau) in taus.iter().enumerate() {
        // sn_irrep and the action both index S_n lexicographically
        let coeff = u.matrices[g][(0, 0)].conj();
        if coeff.norm() > 0.0 {
            p += tau.map(|z| z * coeff);
        }
    }
    p = p.scale(u.dim() as f64 / group.order() as f64);
    let q = range_basis(&p, Tolerance::default());
    let images = sp.block_images(block).iter().map(|x| q.adjoint() * x * &q).collect();
    ConcreteRep::new(q.ncols(), images)
}

/// One Schur–Weyl irrep in the injectivity check.
#[derive(Clone, Debug, Serialize)]
pub struct SwEntry {
    pub block: usize,
    pub lambda: Vec<usize>,
    pub dim: usize,
    pub irreducible: bool,
}

#[derive(Clone, Debug, Serialize)]
pub struct SwInjectivityReport {
    pub entries: Vec<SwEntry>,
    /// Largest intertwiner dimension between distinct entries of the same degree.
    pub max_cross_intertwiner: usize,
}

impl SwInjectivityReport {
    /// Entries of different degree are separated by homogeneity, so only same-degree pairs need tests.
    pub fn injective(&self) -> bool {
        self.max_cross_intertwiner == 0 && self.entries.iter().all(|e| e.irreducible)
    }
}

/// Check that distinct `(π, λ)` with `|λ| ≤ n_max` give inequivalent irreps.
pub fn sw_map_injectivity_check(
    alg: &FdCStarAlgebra,
    n_max: usize,
    budget: Budget,
    tol: Tolerance,
    seed: u64,
) -> Result<SwInjectivityReport> {
    let mut entries = Vec::new();
    let mut worst = 0;
    for n in 1..=n_max {
        let sp = SymmetricPower::new(alg, n, budget)?;
        let mut reps = Vec::new();
        for (b, &k) in alg.blocks().iter().enumerate() {
            for lambda in partitions_up_to(n, k) {
                let rep = schur_weyl_rep(&sp, b, &lambda)?;
                entries.push(SwEntry {
                    block: b,
                    lambda: lambda.parts().to_vec(),
                    dim: rep.dim(),
                    irreducible: is_irreducible(&rep, tol, seed)?,
                });
                reps.push(rep);
            }
        }
        for i in 0..reps.len() {
            for j in i + 1..reps.len() {
                worst = worst.max(intertwiner_dim(&reps[i], &reps[j], tol, seed)?);
            }
        }
    }
    Ok(SwInjectivityReport {
        entries,
        max_cross_intertwiner: worst,
    })
}

/// Certificate that `a ⊗ a ↦ π_1(a) ⊗ π_2(a)` is an irrep of `S²(A)` outside the Schur–Weyl image.
#[derive(Clone, Debug, Serialize)]
pub struct WitnessReport {
    pub blocks: (usize, usize),
    pub dim: usize,
    pub commutant_dim: usize,
    /// `(block, λ, dim of the SW irrep, intertwiner dimension to the witness)`.
    pub sw_intertwiners: Vec<(usize, Vec<usize>, usize, usize)>,
}

impl WitnessReport {
    pub fn is_witness(&self) -> bool {
        self.commutant_dim == 1 && self.sw_intertwiners.iter().all(|e| e.3 == 0)
    }
}

pub fn non_sw_witness(
    sp: &SymmetricPower,
    b1: usize,
    b2: usize,
    tol: Tolerance,
    seed: u64,
) -> Result<(ConcreteRep, WitnessReport)> {
    let alg = sp.base();
    let m = alg.blocks().len();
    if sp.n() != 2 {
        return Err(invalid("the witness lives on the second symmetric power"));
    }
    if b1 == b2 {
        return Err(invalid("the two irreps must be inequivalent"));
    }
    if b1 >= m || b2 >= m {
        return Err(invalid("block index out of range"));
    }
    let block = b1 * m + b2;
    let images = sp.block_images(block);
    let witness = ConcreteRep::new(alg.blocks()[b1] * alg.blocks()[b2], images)?;
    let commutant_dim = crate::structure::commutant_dim(&witness, tol, seed)?;
    let mut sw_intertwiners = Vec::new();
    for (b, &k) in alg.blocks().iter().enumerate() {
        for lambda in partitions_up_to(2, k) {
            let sw = schur_weyl_rep(sp, b, &lambda)?;
            let dim = intertwiner_dim(&sw, &witness, tol, seed)?;
            sw_intertwiners.push((b, lambda.parts().to_vec(), sw.dim(), dim));
        }
    }
    let report = WitnessReport {
        blocks: (b1, b2),
        dim: witness.dim(),
        commutant_dim,
        sw_intertwiners,
    };
    Ok((witness, report))
}

fn basis_images(pi0: &dyn StarRepresentation, action: &GroupAction, g: Option<usize>) -> Vec<CMatrix> {
    action
        .algebra()
        .basis()
        .iter()
        .map(|b| match g {
            Some(g) => pi0.apply(&action.apply(g, b)),
            None => pi0.apply(b),
        })
        .collect()
}

/// `{g : π_0 ∘ α_g ≃ π_0}` for an irreducible `π_0`.
pub fn isotropy_group(
    pi0: &dyn StarRepresentation,
    action: &GroupAction,
    tol: Tolerance,
    seed: u64,
) -> Result<Subgroup> {
    let base = ConcreteRep::new(pi0.dim(), basis_images(pi0, action, None))?;
    let mut members = Vec::new();
    for g in 0..action.group().order() {
        let moved = ConcreteRep::new(pi0.dim(), basis_images(pi0, action, Some(g)))?;
        if equivalent(&base, &moved, tol, seed)? {
            members.push(g);
        }
    }
    Subgroup::from_elements(action.group(), &members)
}

/// Unitaries `V_0(g)` with `V_0(g) π_0(a) V_0(g)* = π_0(α_g(a))` and the cocycle they define.
#[derive(Clone, Debug)]
pub struct CocycleData {
    pub isotropy: Subgroup,
    /// Indexed by the local numbering of `isotropy`.
    pub v: Vec<CMatrix>,
    /// `σ(t, s)` with `V_0(ts) = σ(t, s) V_0(t) V_0(s)`.
    pub sigma: Vec<Vec<C64>>,
}

impl CocycleData {
    /// Worst violation of `σ(r,s)σ(rs,t) = σ(r,st)σ(s,t)` and `|σ| = 1`.
    pub fn identity_residual(&self) -> f64 {
        let g = self.isotropy.group();
        let mut worst: f64 = 0.0;
        for r in 0..g.order() {
            for s in 0..g.order() {
                worst = worst.max((self.sigma[r][s].norm() - 1.0).abs());
                for t in 0..g.order() {
                    let lhs = self.sigma[r][s] * self.sigma[g.mul(r, s)][t];
                    let rhs = self.sigma[r][g.mul(s, t)] * self.sigma[s][t];
                    worst = worst.max((lhs - rhs).norm());
                }
            }
        }
        worst
    }

    /// Worst residual of `V_0(ts) = σ(t,s) V_0(t) V_0(s)`.
    pub fn projective_residual(&self) -> f64 {
        let g = self.isotropy.group();
        let mut worst: f64 = 0.0;
        for t in 0..g.order() {
            for s in 0..g.order() {
                let rhs = (&self.v[t] * &self.v[s]).map(|z| z * self.sigma[t][s]);
                worst = worst.max(rel_diff(&self.v[g.mul(t, s)], &rhs));
            }
        }
        worst
    }

    pub fn is_trivial(&self, tol: Tolerance) -> bool {
        self.sigma.iter().flatten().all(|z| (z - c(1.0, 0.0)).norm() <= tol.eps)
    }
}

/// Scale so the largest-modulus entry (first in column-major order) is positive real.
fn fix_phase(m: &CMatrix) -> CMatrix {
    let mut best = (0.0, crate::linalg::ONE);
    for z in m.iter() {
        if z.norm() > best.0 * (1.0 + 1e-9) {
            best = (z.norm(), *z);
        }
    }
    if best.0 == 0.0 {
        return m.clone();
    }
    let phase = best.1.conj() / best.0;
    m.map(|z| z * phase)
}

pub fn intertwining_cocycle(
    pi0: &dyn StarRepresentation,
    action: &GroupAction,
    isotropy: &Subgroup,
    tol: Tolerance,
    seed: u64,
) -> Result<CocycleData> {
    let d = pi0.dim();
    let base = basis_images(pi0, action, None);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut v = Vec::with_capacity(isotropy.order());
    for &g in isotropy.elements() {
        let moved = basis_images(pi0, action, Some(g));
        let sols = intertwiners(&base, &moved, tol, &mut rng)?;
        if sols.len() != 1 {
            return Err(Error::Numerical(format!(
                "expected a one-dimensional intertwiner space for element {g}, found {}",
                sols.len()
            )));
        }
        let t = &sols[0];
        let scale = ((t.adjoint() * t).trace().re / d as f64).sqrt();
        let u = t.unscale(scale);
        if rel_diff(&(u.adjoint() * &u), &identity(d)) > tol.eps.sqrt() {
            return Err(Error::Numerical("intertwiner is not a multiple of a unitary".into()));
        }
        v.push(fix_phase(&u));
    }
    let g = isotropy.group();
    let sigma = (0..g.order())
        .map(|t| {
            (0..g.order())
                .map(|s| (&v[g.mul(t, s)] * (&v[t] * &v[s]).adjoint()).trace() / d as f64)
                .collect()
        })
        .collect();
    Ok(CocycleData {
        isotropy: isotropy.clone(),
        v,
        sigma,
    })
}

/// Fourier extraction of the degree-`n` parts of a multiplicative map sampled pointwise.
pub struct HomogeneousComponents<'a> {
    phi: &'a dyn Fn(&CMatrix) -> CMatrix,
    n_max: usize,
}

impl<'a> HomogeneousComponents<'a> {
    pub fn new(phi: &'a dyn Fn(&CMatrix) -> CMatrix, n_max: usize) -> Self {
        Self { phi, n_max }
    }

    pub fn n_max(&self) -> usize {
        self.n_max
    }

    fn roots(&self) -> usize {
        self.n_max + 1
    }

    /// `φ_n(a) = (1/M) Σ_{j<M} ζ^{-nj} φ(ζ^j a)`.
    pub fn component(&self, n: usize, a: &CMatrix) -> CMatrix {
        self.all(a).swap_remove(n)
    }

    /// `[φ_0(a), ..., φ_{n_max}(a)]`, sharing the `M` evaluations of `φ`.
    pub fn all(&self, a: &CMatrix) -> Vec<CMatrix> {
        let m = self.roots();
        let values: Vec<CMatrix> = (0..m).map(|j| (self.phi)(&a.map(|z| z * root(m, j as i64)))).collect();
        (0..m)
            .map(|n| {
                let mut acc = values[0].clone();
                for (j, val) in values.iter().enumerate().skip(1) {
                    acc += val.map(|z| z * root(m, -((n * j) as i64)));
                }
                acc.unscale(m as f64)
            })
            .collect()
    }
}

fn root(m: usize, k: i64) -> C64 {
    C64::from_polar(
        1.0,
        2.0 * std::f64::consts::PI * (k.rem_euclid(m as i64)) as f64 / m as f64,
    )
}

#[derive(Clone, Debug, Serialize)]
pub struct HomogeneousReport {
    pub n_max: usize,
    /// Ranks of `P_n = φ_n(1)`.
    pub ranks: Vec<usize>,
    pub sum_residual: f64,
    pub homogeneity_residual: f64,
    pub multiplicativity_residual: f64,
    /// Worst of `P_n² − P_n`, `P_n* − P_n` and `P_n P_m` for `n ≠ m`.
    pub projection_residual: f64,
}

impl HomogeneousReport {
    pub fn max_residual(&self) -> f64 {
        self.sum_residual
            .max(self.homogeneity_residual)
            .max(self.multiplicativity_residual)
            .max(self.projection_residual)
    }
}

/// Decompose `φ` into homogeneous parts of degree `≤ n_max` and verify the parts on `samples`.
///
/// Fails when some part is not homogeneous, which means `n_max` is too small.
pub fn homogeneous_components<'a>(
    phi: &'a dyn Fn(&CMatrix) -> CMatrix,
    n_max: usize,
    unit: &CMatrix,
    samples: &[CMatrix],
    tol: Tolerance,
) -> Result<(HomogeneousComponents<'a>, HomogeneousReport)> {
    let hc = HomogeneousComponents::new(phi, n_max);
    let z = C64::from_polar(1.0, 0.7315);
    let mut sum_residual: f64 = 0.0;
    let mut homogeneity_residual: f64 = 0.0;
    let mut multiplicativity_residual: f64 = 0.0;
    let parts: Vec<Vec<CMatrix>> = samples.iter().map(|a| hc.all(a)).collect();
    for (i, a) in samples.iter().enumerate() {
        let value = phi(a);
        let total = parts[i]
            .iter()
            .fold(CMatrix::zeros(value.nrows(), value.ncols()), |acc, p| acc + p);
        sum_residual = sum_residual.max(rel_diff(&value, &total));
        let scaled = hc.all(&a.map(|w| w * z));
        for (n, (p, s)) in parts[i].iter().zip(&scaled).enumerate() {
            homogeneity_residual = homogeneity_residual.max(rel_diff(s, &p.map(|w| w * z.powu(n as u32))));
        }
        let b = &samples[(i + 1) % samples.len()];
        let prod = hc.all(&(a * b));
        for (n, p) in prod.iter().enumerate() {
            multiplicativity_residual =
                multiplicativity_residual.max(rel_diff(p, &(&parts[i][n] * &parts[(i + 1) % samples.len()][n])));
        }
    }
    let projections = hc.all(unit);
    let mut projection_residual: f64 = 0.0;
    for (n, p) in projections.iter().enumerate() {
        projection_residual = projection_residual
            .max(rel_diff(&(p * p), p))
            .max(rel_diff(&p.adjoint(), p));
        for q in projections.iter().skip(n + 1) {
            projection_residual = projection_residual.max((p * q).norm());
        }
    }
    let report = HomogeneousReport {
        n_max,
        ranks: projections.iter().map(|p| crate::linalg::rank(p, tol)).collect(),
        sum_residual,
        homogeneity_residual,
        multiplicativity_residual,
        projection_residual,
    };
    if report.homogeneity_residual > tol.eps.sqrt() || report.sum_residual > tol.eps.sqrt() {
        return Err(Error::Verification(format!(
            "components are not homogeneous (residual {:.3e}); the degree bound {n_max} is too small",
            report.homogeneity_residual
        )));
    }
    Ok((hc, report))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::make_algebra;
    use crate::crossed::ActionMaps;
    use crate::groups::{FiniteGroup, Partition};
    use crate::structure::commutant_dim;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn dims(alg: &[usize], n: usize) -> Vec<u128> {
        enumerate_sn_irreps(&make_algebra(alg).unwrap(), n)
            .unwrap()
            .iter()
            .map(|d| d.dim)
            .collect()
    }

    /// Independent count of multisets of size `n` from `d` labels.
    fn multiset_count(d: u128, n: u128) -> u128 {
        fn go(d: u128, n: u128) -> u128 {
            if n == 0 {
                return 1;
            }
            if d == 0 {
                return 0;
            }
            (0..=n).map(|k| go(d - 1, n - k)).sum()
        }
        go(d, n)
    }

    #[test]
    fn enumeration_examples() {
        assert_eq!(dims(&[2], 2), vec![3, 1]);
        assert_eq!(dims(&[1, 1], 3), vec![1, 1, 1, 1]);
        let mut d = dims(&[2, 3], 2);
        assert_eq!(d.iter().map(|x| x * x).sum::<u128>(), 91);
        d.sort_unstable();
        assert_eq!(d, vec![1, 3, 3, 6, 6]);
        assert_eq!(dims(&[2], 3), vec![4, 2]);
        assert_eq!(dims(&[2, 3], 1), vec![2, 3]);
    }

    #[test]
    fn sum_of_squares_matches_multiset_count() {
        for blocks in [
            vec![1],
            vec![1, 1, 1],
            vec![2],
            vec![2, 1],
            vec![3],
            vec![2, 3],
            vec![1, 2, 2],
        ] {
            let alg = make_algebra(&blocks).unwrap();
            for n in 1..=4 {
                let descs = enumerate_sn_irreps(&alg, n).unwrap();
                let total: u128 = descs.iter().map(|d| d.dim * d.dim).sum();
                assert_eq!(total, multiset_count(alg.dim() as u128, n as u128), "{blocks:?} n={n}");
                let unique: std::collections::HashSet<_> = descs.iter().collect();
                assert_eq!(unique.len(), descs.len());
            }
        }
    }

    #[test]
    fn descriptor_validation() {
        let alg = make_algebra(&[2, 3]).unwrap();
        assert!(IrrepDescriptor::new(&alg, vec![0], vec![vec![1, 1, 1]]).is_err());
        assert!(IrrepDescriptor::new(&alg, vec![1, 0], vec![vec![1], vec![1]]).is_err());
        assert!(IrrepDescriptor::new(&alg, vec![2], vec![vec![1]]).is_err());
        let d = IrrepDescriptor::new(&alg, vec![0, 1], vec![vec![1], vec![2]]).unwrap();
        assert_eq!((d.n(), d.dim, d.power_block(2)), (3, 12, 0b011));
        let json = serde_json::to_string(&d).unwrap();
        assert_eq!(json, r#"{"blocks":[0,1],"q":[1,2],"lambdas":[[1],[2]],"dim":12}"#);
    }

    #[test]
    fn crosscheck_small_cases() {
        for (blocks, n, expect) in [
            (vec![2], 2, vec![3, 1]),
            (vec![1, 1, 1], 2, vec![1; 6]),
            (vec![2], 3, vec![4, 2]),
            (vec![2, 1], 2, vec![3, 2, 1, 1]),
        ] {
            let sp = SymmetricPower::new(&make_algebra(&blocks).unwrap(), n, Budget::default()).unwrap();
            let r = wedderburn_crosscheck(&sp, tol(), 11).unwrap();
            assert!(r.passed(), "{blocks:?} {n}: {r:?}");
            assert_eq!(r.numeric, expect);
        }
    }

    #[test]
    fn realized_irreps_are_irreducible_and_separated() {
        for (blocks, n) in [(vec![2], 2), (vec![2, 1], 2), (vec![2], 3), (vec![1, 1], 3)] {
            let alg = make_algebra(&blocks).unwrap();
            let sp = SymmetricPower::new(&alg, n, Budget::default()).unwrap();
            let descs = enumerate_sn_irreps(&alg, n).unwrap();
            let reps: Vec<ConcreteRep> = descs.iter().map(|d| realize_sn_irrep(&sp, d, tol()).unwrap()).collect();
            for (d, r) in descs.iter().zip(&reps) {
                assert_eq!(r.dim() as u128, d.dim);
                assert_eq!(commutant_dim(r, tol(), 3).unwrap(), 1, "{d:?}");
            }
            for i in 0..reps.len() {
                for j in i + 1..reps.len() {
                    assert_eq!(intertwiner_dim(&reps[i], &reps[j], tol(), 4).unwrap(), 0);
                }
            }
        }
    }

    #[test]
    fn realized_commutative_irreps_are_characters() {
        // A = C²: the irreps of S³(A) are evaluations at multisets of points
        let alg = make_algebra(&[1, 1]).unwrap();
        let sp = SymmetricPower::new(&alg, 3, Budget::default()).unwrap();
        for d in enumerate_sn_irreps(&alg, 3).unwrap() {
            let rep = realize_sn_irrep(&sp, &d, tol()).unwrap();
            // the orbit sum of multiset M evaluates to 1 exactly at the point multiset M
            let point: Vec<usize> = d
                .blocks
                .iter()
                .zip(&d.q)
                .flat_map(|(&b, &q)| std::iter::repeat_n(b, q))
                .collect();
            for (i, ms) in sp.basis.multisets().iter().enumerate() {
                let expect = if *ms == point { 1.0 } else { 0.0 };
                assert!((rep.images()[i][(0, 0)] - c(expect, 0.0)).norm() < 1e-9);
            }
        }
    }

    #[test]
    fn schur_weyl_matches_realization() {
        for (blocks, n) in [(vec![2], 2), (vec![2], 3), (vec![3], 2), (vec![2, 1], 2), (vec![3], 3)] {
            let alg = make_algebra(&blocks).unwrap();
            let sp = SymmetricPower::new(&alg, n, Budget::default()).unwrap();
            for (b, &k) in blocks.iter().enumerate() {
                for lambda in partitions_up_to(n, k) {
                    let sw = schur_weyl_rep(&sp, b, &lambda).unwrap();
                    assert_eq!(sw.dim() as u128, ssyt_count(&lambda, k));
                    let desc = IrrepDescriptor::new(&alg, vec![b], vec![lambda.parts().to_vec()]).unwrap();
                    let real = realize_sn_irrep(&sp, &desc, tol()).unwrap();
                    assert!(equivalent(&sw, &real, tol(), 5).unwrap(), "{blocks:?} {lambda}");
                }
            }
        }
    }

    #[test]
    fn schur_weyl_edge_cases() {
        let alg = make_algebra(&[3]).unwrap();
        let sp = SymmetricPower::new(&alg, 3, Budget::default()).unwrap();
        let top = schur_weyl_rep(&sp, 0, &Partition::new(vec![1, 1, 1]).unwrap()).unwrap();
        assert_eq!(top.dim(), 1);
        let sym = schur_weyl_rep(&sp, 0, &Partition::new(vec![3]).unwrap()).unwrap();
        assert_eq!(sym.dim(), 10);
        let sp2 = SymmetricPower::new(&make_algebra(&[2]).unwrap(), 3, Budget::default()).unwrap();
        assert!(schur_weyl_rep(&sp2, 0, &Partition::new(vec![1, 1, 1]).unwrap()).is_err());
    }

    #[test]
    fn injectivity_of_schur_weyl_map() {
        let r = sw_map_injectivity_check(&make_algebra(&[2]).unwrap(), 3, Budget::default(), tol(), 1).unwrap();
        assert!(r.injective());
        assert_eq!(r.entries.iter().map(|e| e.dim).collect::<Vec<_>>(), vec![2, 3, 1, 4, 2]);
        let r = sw_map_injectivity_check(&make_algebra(&[1]).unwrap(), 3, Budget::default(), tol(), 1).unwrap();
        assert!(r.injective());
        assert!(r.entries.iter().all(|e| e.dim == 1));
    }

    #[test]
    fn witnesses_outside_schur_weyl_image() {
        for (blocks, dim) in [(vec![2, 3], 6), (vec![1, 1], 1), (vec![2, 1], 2)] {
            let alg = make_algebra(&blocks).unwrap();
            let sp = SymmetricPower::new(&alg, 2, Budget::default()).unwrap();
            let (rep, report) = non_sw_witness(&sp, 0, 1, tol(), 2).unwrap();
            assert_eq!(report.dim, dim);
            assert!(report.is_witness(), "{report:?}");
            let desc = IrrepDescriptor::new(&alg, vec![0, 1], vec![vec![1], vec![1]]).unwrap();
            let real = realize_sn_irrep(&sp, &desc, tol()).unwrap();
            assert!(equivalent(&rep, &real, tol(), 3).unwrap());
            assert!(non_sw_witness(&sp, 1, 1, tol(), 2).is_err());
        }
        // A = C²: the witness x⊗y ↦ x·y differs from both degree-2 characters on the basis
        let alg = make_algebra(&[1, 1]).unwrap();
        let sp = SymmetricPower::new(&alg, 2, Budget::default()).unwrap();
        let (rep, _) = non_sw_witness(&sp, 0, 1, tol(), 2).unwrap();
        let values: Vec<f64> = rep.images().iter().map(|m| m[(0, 0)].re).collect();
        assert_eq!(values, vec![0.0, 1.0, 0.0]);
    }

    fn pi_block(alg: &FdCStarAlgebra, tuple: &[usize]) -> Representation {
        Representation::block(alg, tuple.iter().fold(0, |acc, &b| acc * 2 + b)).unwrap()
    }

    #[test]
    fn isotropy_groups() {
        let a = make_algebra(&[2, 1]).unwrap();
        let tp2 = TensorPower::new(&a, 2, Budget::default()).unwrap();
        let act2 = GroupAction::from_tensor_power(&tp2).unwrap();
        assert_eq!(
            isotropy_group(&pi_block(tp2.power(), &[0, 0]), &act2, tol(), 0)
                .unwrap()
                .order(),
            2
        );
        assert_eq!(
            isotropy_group(&pi_block(tp2.power(), &[0, 1]), &act2, tol(), 0)
                .unwrap()
                .order(),
            1
        );
        let tp3 = TensorPower::new(&a, 3, Budget::default()).unwrap();
        let act3 = GroupAction::from_tensor_power(&tp3).unwrap();
        let iso = isotropy_group(&pi_block(tp3.power(), &[0, 0, 1]), &act3, tol(), 0).unwrap();
        assert_eq!(iso.order(), 2);
        // exhaustive oracle: σ fixes the class iff it preserves the block pattern
        let pattern = [0, 0, 1];
        for g in 0..6 {
            let p = act3.group().permutation(g).unwrap();
            let fixes = (0..3).all(|j| pattern[p[j]] == pattern[j]);
            assert_eq!(iso.local_index(g).is_some(), fixes);
        }
        assert_eq!(
            isotropy_group(&pi_block(tp3.power(), &[1, 1, 1]), &act3, tol(), 0)
                .unwrap()
                .order(),
            6
        );
    }

    #[test]
    fn cocycle_of_tensor_action_is_trivial() {
        let a = make_algebra(&[2]).unwrap();
        let tp = TensorPower::new(&a, 3, Budget::default()).unwrap();
        let act = GroupAction::from_tensor_power(&tp).unwrap();
        let pi = Representation::block(tp.power(), 0).unwrap();
        let iso = isotropy_group(&pi, &act, tol(), 0).unwrap();
        let data = intertwining_cocycle(&pi, &act, &iso, tol(), 1).unwrap();
        assert!(data.is_trivial(Tolerance::new(1e-9).unwrap()));
        assert!(data.identity_residual() < 1e-9);
        assert!(data.projective_residual() < 1e-9);
        for (i, &g) in iso.elements().iter().enumerate() {
            let tau = tp
                .permutation_action(act.group().permutation(g).unwrap())
                .unwrap()
                .ambient_unitary();
            assert!(rel_diff(&data.v[i], &tau) < 1e-9);
        }
    }

    #[test]
    fn cocycle_of_trivial_action() {
        let a = make_algebra(&[3]).unwrap();
        let act = GroupAction::trivial(FiniteGroup::cyclic(4).unwrap(), a.clone());
        let pi = Representation::block(&a, 0).unwrap();
        let iso = isotropy_group(&pi, &act, tol(), 0).unwrap();
        assert_eq!(iso.order(), 4);
        let data = intertwining_cocycle(&pi, &act, &iso, tol(), 1).unwrap();
        assert!(data.v.iter().all(|v| rel_diff(v, &identity(3)) < 1e-9));
        assert!(data.is_trivial(tol()));
    }

    #[test]
    fn cocycle_identity_for_inner_action() {
        // Z_2 × Z_2 acting on M_2 by conjugation with Pauli matrices: a nontrivial cocycle class
        let a = make_algebra(&[2]).unwrap();
        let table = vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]];
        let klein = FiniteGroup::from_table(table, vec![0, 1, 2, 3]).unwrap();
        let x = crate::linalg::from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]);
        let z = crate::linalg::from_real_rows(2, 2, &[1.0, 0.0, 0.0, -1.0]);
        let paulis = [identity(2), x.clone(), z.clone(), &x * &z];
        let basis = a.basis();
        let maps = paulis
            .iter()
            .map(|p| {
                CMatrix::from_fn(4, 4, |r, col| {
                    let moved = p * &basis[col] * p.adjoint();
                    a.coords(&moved, tol()).unwrap().coeffs[r]
                })
            })
            .collect();
        let act = GroupAction::new(klein, a.clone(), ActionMaps::Linear(maps), tol()).unwrap();
        let pi = Representation::block(&a, 0).unwrap();
        let iso = isotropy_group(&pi, &act, tol(), 0).unwrap();
        assert_eq!(iso.order(), 4);
        let data = intertwining_cocycle(&pi, &act, &iso, tol(), 1).unwrap();
        assert!(data.identity_residual() < 1e-9);
        assert!(data.projective_residual() < 1e-9);
        assert!(!data.is_trivial(Tolerance::new(1e-6).unwrap()));
    }

    #[test]
    fn homogeneous_decomposition_of_block_sum() {
        let a = make_algebra(&[2]).unwrap();
        let tp = TensorPower::new(&a, 2, Budget::default()).unwrap();
        let phi = |x: &CMatrix| crate::linalg::direct_sum(&[x.clone(), tp.gamma_n(x)]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let samples: Vec<CMatrix> = (0..20).map(|_| a.random_element(&mut rng)).collect();
        let (hc, report) = homogeneous_components(&phi, 2, &identity(2), &samples, tol()).unwrap();
        assert!(report.max_residual() < 1e-9, "{report:?}");
        assert_eq!(report.ranks, vec![0, 2, 4]);
        let s = &samples[0];
        let expect1 = crate::linalg::direct_sum(&[s.clone(), CMatrix::zeros(4, 4)]).unwrap();
        assert!(rel_diff(&hc.component(1, s), &expect1) < 1e-9);
        // pure degree 2 and degree 0
        let gamma = |x: &CMatrix| tp.gamma_n(x);
        let (hc, _) = homogeneous_components(&gamma, 2, &identity(2), &samples, tol()).unwrap();
        assert!(hc.component(0, s).norm() < 1e-9 && hc.component(1, s).norm() < 1e-9);
        let constant = |_: &CMatrix| identity(1);
        let (hc, report) = homogeneous_components(&constant, 1, &identity(1), &samples[..1], tol()).unwrap();
        assert_eq!(report.ranks, vec![1, 0]);
        assert!(rel_diff(&hc.component(0, s), &identity(1)) < 1e-12);
        // a degree bound that is too small is detected
        assert!(homogeneous_components(&phi, 1, &identity(2), &samples, tol()).is_err());
    }
}
