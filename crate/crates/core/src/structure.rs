//! Wedderburn analysis of concrete *-closed matrix algebras.
//!
//! The central tool is [`intertwiners`], which solves `T π(b) = ρ(b) T` for
//! two representations given by the images of a common *-closed spanning set.
//! A random Hermitian combination of the generators is diagonalised first, and
//! only coordinates pairing (numerically) equal eigenvalues are kept as unknowns.
//! This keeps the linear systems small even when the ambient space is large.

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::algebra::{AlgebraSpan, StarRepresentation};
use crate::error::{Error, Result};
use crate::linalg::{
    complex_gaussian, eig_hermitian_unchecked, flatten_columns, identity, range_basis, rank, rel_diff, unflatten,
    CMatrix, SpanBuilder, Tolerance, C64, SPECTRAL_GAP, ZERO,
};

/// Largest number of unknowns the intertwiner solver will set up.
pub const MAX_INTERTWINER_UNKNOWNS: usize = 2500;

/// A subspace of `M_N` given by a Frobenius-orthonormal basis, assumed *-closed and product-closed.
#[derive(Clone, Debug)]
pub struct SpannedAlgebra {
    ambient: usize,
    basis: Vec<CMatrix>,
}

impl SpannedAlgebra {
    /// Wrap an orthonormal basis without re-checking closure.
    pub fn from_orthonormal(ambient: usize, basis: Vec<CMatrix>) -> Result<Self> {
        if basis.iter().any(|b| b.shape() != (ambient, ambient)) {
            return Err(Error::Shape(format!("span elements must be {ambient}x{ambient}")));
        }
        Ok(Self { ambient, basis })
    }

    /// Orthonormalise a spanning list (closure is not checked; see [`Self::closure_residual`]).
    pub fn from_spanning(ambient: usize, elements: &[CMatrix], tol: Tolerance) -> Result<Self> {
        let mut span = SpanBuilder::new(ambient * ambient, tol.eps);
        for e in elements {
            if e.shape() != (ambient, ambient) {
                return Err(Error::Shape(format!("span elements must be {ambient}x{ambient}")));
            }
            span.push_matrix(e);
        }
        let basis = span.basis().iter().map(|v| unflatten(v, ambient, ambient)).collect();
        Self::from_orthonormal(ambient, basis)
    }

    /// Like [`Self::from_spanning`], but rejects spans that are not closed under products and adjoints.
    pub fn new_checked(ambient: usize, elements: &[CMatrix], tol: Tolerance) -> Result<Self> {
        let s = Self::from_spanning(ambient, elements, tol)?;
        let res = s.closure_residual();
        if res > tol.eps.sqrt() {
            return Err(Error::Verification(format!(
                "span is not a *-algebra (residual {res:.3e})"
            )));
        }
        Ok(s)
    }

    pub fn basis(&self) -> &[CMatrix] {
        &self.basis
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Relative distance of `m` from the span.
    pub fn distance(&self, m: &CMatrix) -> f64 {
        let n = m.norm();
        if n == 0.0 {
            return 0.0;
        }
        let mut r = m.clone();
        for _ in 0..2 {
            for b in &self.basis {
                let coef = b.dotc(&r);
                r -= b * coef;
            }
        }
        r.norm() / n
    }

    pub fn contains(&self, m: &CMatrix, tol: Tolerance) -> bool {
        self.distance(m) <= tol.eps
    }

    /// Worst relative distance from the span of `b_i*` and `b_i b_j` over basis pairs.
    pub fn closure_residual(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for a in &self.basis {
            worst = worst.max(self.distance(&a.adjoint()));
            for b in &self.basis {
                worst = worst.max(self.distance(&(a * b)));
            }
        }
        worst
    }

    /// Whether two spans coincide (same dimension and mutual containment).
    pub fn same_span(&self, other: &SpannedAlgebra, tol: Tolerance) -> bool {
        self.ambient == other.ambient && self.dim() == other.dim() && other.basis.iter().all(|b| self.contains(b, tol))
    }
}

impl AlgebraSpan for SpannedAlgebra {
    fn ambient(&self) -> usize {
        self.ambient
    }

    fn dim(&self) -> usize {
        self.basis.len()
    }

    fn element(&self, i: usize) -> CMatrix {
        self.basis[i].clone()
    }

    fn random_element(&self, rng: &mut dyn RngCore) -> CMatrix {
        let mut m = CMatrix::zeros(self.ambient, self.ambient);
        for b in &self.basis {
            m += b * complex_gaussian(rng);
        }
        m
    }
}

/// A representation recorded by the images of a fixed spanning set of its algebra.
#[derive(Clone, Debug)]
pub struct ConcreteRep {
    dim: usize,
    images: Vec<CMatrix>,
}

impl ConcreteRep {
    pub fn new(dim: usize, images: Vec<CMatrix>) -> Result<Self> {
        if images.iter().any(|m| m.shape() != (dim, dim)) {
            return Err(Error::Shape(format!("images must be {dim}x{dim}")));
        }
        Ok(Self { dim, images })
    }

    /// Images of every spanning element of `span` under `rep`.
    pub fn from_rep<S: AlgebraSpan + ?Sized, P: StarRepresentation + ?Sized>(span: &S, rep: &P) -> Self {
        let images = (0..span.dim()).map(|i| rep.apply(&span.element(i))).collect();
        Self { dim: rep.dim(), images }
    }

    /// The identity representation of a concrete span.
    pub fn defining<S: AlgebraSpan + ?Sized>(span: &S) -> Self {
        let images = (0..span.dim()).map(|i| span.element(i)).collect();
        Self {
            dim: span.ambient(),
            images,
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn images(&self) -> &[CMatrix] {
        &self.images
    }

    pub fn direct_sum(&self, other: &ConcreteRep) -> Result<ConcreteRep> {
        if self.images.len() != other.images.len() {
            return Err(Error::Shape("direct sum needs the same spanning set".into()));
        }
        let images = self
            .images
            .iter()
            .zip(&other.images)
            .map(|(a, b)| crate::linalg::direct_sum(&[a.clone(), b.clone()]))
            .collect::<Result<_>>()?;
        Self::new(self.dim + other.dim, images)
    }

    /// Conjugate by a unitary: `x ↦ u π(x) u*`.
    pub fn conjugated(&self, u: &CMatrix) -> ConcreteRep {
        ConcreteRep {
            dim: self.dim,
            images: self.images.iter().map(|m| u * m * u.adjoint()).collect(),
        }
    }

    /// Compress to the range of an isometry `q`: `x ↦ q* π(x) q`.
    pub fn compressed(&self, q: &CMatrix) -> ConcreteRep {
        ConcreteRep {
            dim: q.ncols(),
            images: self.images.iter().map(|m| q.adjoint() * m * q).collect(),
        }
    }

    /// The image algebra `π(A)` as a concrete span.
    pub fn image_span(&self, tol: Tolerance) -> Result<SpannedAlgebra> {
        SpannedAlgebra::from_spanning(self.dim, &self.images, tol)
    }
}

/// Basis of `{T : T π_i = ρ_i T for all i}` (Frobenius-orthonormal, `dim ρ × dim π`).
///
/// Both lists must be images of the same *-closed spanning set under *-representations.
pub fn intertwiners<R: Rng + ?Sized>(
    pi: &[CMatrix],
    rho: &[CMatrix],
    tol: Tolerance,
    rng: &mut R,
) -> Result<Vec<CMatrix>> {
    if pi.len() != rho.len() {
        return Err(Error::Shape("intertwiners need image lists of equal length".into()));
    }
    let dp = pi.first().map(|m| m.nrows()).unwrap_or(0);
    let dr = rho.first().map(|m| m.nrows()).unwrap_or(0);
    if pi.iter().any(|m| m.shape() != (dp, dp)) || rho.iter().any(|m| m.shape() != (dr, dr)) {
        return Err(Error::Shape(
            "representation images must be square of a common size".into(),
        ));
    }
    if pi.is_empty() {
        return Err(Error::Shape("intertwiners need at least one generator".into()));
    }
    if dp == 0 || dr == 0 {
        return Ok(Vec::new());
    }
    // normalise each generator pair by a common factor, so linear relations survive;
    // pairs that vanish up to roundoff are dropped instead of being blown up
    let norms: Vec<f64> = pi.iter().zip(rho).map(|(a, b)| a.norm().max(b.norm())).collect();
    let floor = f64::EPSILON.sqrt() * norms.iter().fold(0f64, |acc, &s| acc.max(s));
    let scales: Vec<f64> = norms
        .iter()
        .map(|&s| if s > floor && s > 0.0 { 1.0 / s } else { 0.0 })
        .collect();
    let mut hp = CMatrix::zeros(dp, dp);
    let mut hr = CMatrix::zeros(dr, dr);
    for ((a, b), &s) in pi.iter().zip(rho).zip(&scales) {
        if s == 0.0 {
            continue;
        }
        let r: f64 = rng.random_range(-1.0..1.0) * s * 0.5;
        hp += (a + a.adjoint()).scale(r);
        hr += (b + b.adjoint()).scale(r);
    }
    let ep = eig_hermitian_unchecked(&hp);
    let er = eig_hermitian_unchecked(&hr);
    let scale = ep
        .values
        .iter()
        .chain(&er.values)
        .fold(0f64, |acc, v| acc.max(v.abs()))
        .max(f64::MIN_POSITIVE);
    // unknown X[b, a] of X = W* T V survives only when the eigenvalues agree
    let mut unknowns: Vec<(usize, usize)> = Vec::new();
    for (a, &u) in ep.values.iter().enumerate() {
        for (b, &w) in er.values.iter().enumerate() {
            if (u - w).abs() <= SPECTRAL_GAP * scale {
                unknowns.push((b, a));
            }
        }
    }
    if unknowns.is_empty() {
        return Ok(Vec::new());
    }
    if unknowns.len() > MAX_INTERTWINER_UNKNOWNS {
        return Err(Error::Budget(format!(
            "intertwiner system has {} unknowns (limit {MAX_INTERTWINER_UNKNOWNS})",
            unknowns.len()
        )));
    }
    let nu = unknowns.len();
    let v = &ep.vectors;
    let w = &er.vectors;
    let mut gram = CMatrix::zeros(nu, nu);
    for ((a, b), &s) in pi.iter().zip(rho).zip(&scales) {
        if s == 0.0 {
            continue;
        }
        let p = (v.adjoint() * a * v).scale(s);
        let r = (w.adjoint() * b * w).scale(s);
        let ppstar = &p * p.adjoint();
        let rstar_r = r.adjoint() * &r;
        for (i, &(b1, a1)) in unknowns.iter().enumerate() {
            for (j, &(b2, a2)) in unknowns.iter().enumerate() {
                let mut g: C64 = ZERO;
                if b1 == b2 {
                    g += ppstar[(a2, a1)];
                }
                if a1 == a2 {
                    g += rstar_r[(b1, b2)];
                }
                g -= p[(a1, a2)].conj() * r[(b1, b2)];
                g -= r[(b2, b1)].conj() * p[(a2, a1)];
                gram[(i, j)] += g;
            }
        }
    }
    let eg = eig_hermitian_unchecked(&gram);
    // every surviving generator pair has unit norm, so the Gram form is measured against their count
    let reference = scales.iter().filter(|&&s| s > 0.0).count().max(1) as f64;
    let mut out = Vec::new();
    for (k, &lam) in eg.values.iter().enumerate() {
        if lam > tol.eps * reference {
            break;
        }
        let mut x = CMatrix::zeros(dr, dp);
        for (i, &(b, a)) in unknowns.iter().enumerate() {
            x[(b, a)] = eg.vectors[(i, k)];
        }
        out.push(w * x * v.adjoint());
    }
    Ok(out)
}

/// Commutant `{X : [X, b] = 0 for all b}` of a *-closed span.
pub fn commutant<S: AlgebraSpan + ?Sized>(s: &S, tol: Tolerance, seed: u64) -> Result<SpannedAlgebra> {
    let images: Vec<CMatrix> = (0..s.dim()).map(|i| s.element(i)).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let basis = if images.is_empty() {
        let n = s.ambient();
        (0..n * n)
            .map(|k| crate::linalg::matrix_unit(n, k / n, k % n))
            .collect()
    } else {
        intertwiners(&images, &images, tol, &mut rng)?
    };
    SpannedAlgebra::from_orthonormal(s.ambient(), basis)
}

/// Minimal central projections and block data of a *-closed span.
#[derive(Clone, Debug)]
pub struct WedderburnReport {
    pub central_projections: Vec<CMatrix>,
    /// `d_j`: the block is a copy of `M_{d_j}`.
    pub block_dims: Vec<usize>,
    /// `k_j`: how many times the block acts on the ambient space.
    pub multiplicities: Vec<usize>,
}

impl WedderburnReport {
    pub fn ranks(&self) -> Vec<usize> {
        self.block_dims
            .iter()
            .zip(&self.multiplicities)
            .map(|(d, k)| d * k)
            .collect()
    }

    pub fn linear_dim(&self) -> usize {
        self.block_dims.iter().map(|d| d * d).sum()
    }

    /// Block dimensions sorted descending, for multiset comparisons.
    pub fn sorted_block_dims(&self) -> Vec<usize> {
        let mut d = self.block_dims.clone();
        d.sort_unstable_by(|a, b| b.cmp(a));
        d
    }
}

struct UnionFind(Vec<usize>);

impl UnionFind {
    fn find(&mut self, x: usize) -> usize {
        let mut r = x;
        while self.0[r] != r {
            r = self.0[r];
        }
        let mut y = x;
        while self.0[y] != r {
            let next = self.0[y];
            self.0[y] = r;
            y = next;
        }
        r
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.0[ra.max(rb)] = ra.min(rb);
        }
    }
}

fn wedderburn_attempt<S: AlgebraSpan + ?Sized>(
    s: &S,
    rng: &mut ChaCha8Rng,
    tol: Tolerance,
) -> Result<WedderburnReport> {
    let n = s.ambient();
    let y = s.random_element(rng);
    let h = (&y + y.adjoint()).scale(0.5);
    let eig = eig_hermitian_unchecked(&h);
    let clusters = eig.clusters(SPECTRAL_GAP);
    let bases: Vec<CMatrix> = clusters.iter().map(|r| eig.cluster_basis(r.clone())).collect();

    // two more random elements decide which clusters are linked inside one block
    let probes = [s.random_element(rng), s.random_element(rng)];
    let probe_norm = probes
        .iter()
        .map(|p| p.norm())
        .fold(0.0, f64::max)
        .max(f64::MIN_POSITIVE);
    let link = SPECTRAL_GAP * probe_norm;
    let alive: Vec<bool> = bases
        .iter()
        .map(|q| {
            probes
                .iter()
                .any(|p| (p * q).norm() > link || (p.adjoint() * q).norm() > link)
        })
        .collect();
    let mut uf = UnionFind((0..bases.len()).collect());
    for (i, qi) in bases.iter().enumerate() {
        if !alive[i] {
            continue;
        }
        for (j, qj) in bases.iter().enumerate().skip(i + 1) {
            if alive[j]
                && probes
                    .iter()
                    .any(|p| (qi.adjoint() * p * qj).norm() > link || (qj.adjoint() * p * qi).norm() > link)
            {
                uf.union(i, j);
            }
        }
    }
    let mut components: Vec<Vec<usize>> = Vec::new();
    let mut root_slot = std::collections::HashMap::new();
    for i in (0..bases.len()).filter(|&i| alive[i]) {
        let r = uf.find(i);
        let slot = *root_slot.entry(r).or_insert_with(|| {
            components.push(Vec::new());
            components.len() - 1
        });
        components[slot].push(i);
    }
    let mut blocks: Vec<(CMatrix, usize, usize)> = Vec::new();
    for comp in &components {
        let k = bases[comp[0]].ncols();
        if comp.iter().any(|&c| bases[c].ncols() != k) {
            return Err(Error::Numerical("clusters of one block have unequal ranks".into()));
        }
        let mut p = CMatrix::zeros(n, n);
        for &c in comp {
            p += &bases[c] * bases[c].adjoint();
        }
        blocks.push((p, comp.len(), k));
    }
    let linear: usize = blocks.iter().map(|(_, d, _)| d * d).sum();
    if linear != s.dim() {
        return Err(Error::Numerical(format!(
            "block dimensions give Σd² = {linear}, span has dimension {}",
            s.dim()
        )));
    }
    let check_tol = tol.eps.max(1e-12).sqrt() * 1e-2;
    for _ in 0..2 {
        let x = s.random_element(rng);
        for (p, _, _) in &blocks {
            if rel_diff(&(p * &x), &(&x * p)) > check_tol * (1.0 + x.norm()) {
                return Err(Error::Numerical("block projection is not central".into()));
            }
        }
    }
    let first_index = |p: &CMatrix| (0..n).find(|&i| p[(i, i)].re > 1e-6).unwrap_or(n);
    blocks.sort_by_key(|(p, d, k)| (std::cmp::Reverse(*d), std::cmp::Reverse(*k), first_index(p)));
    Ok(WedderburnReport {
        block_dims: blocks.iter().map(|b| b.1).collect(),
        multiplicities: blocks.iter().map(|b| b.2).collect(),
        central_projections: blocks.into_iter().map(|b| b.0).collect(),
    })
}

/// Minimal central projections of a *-closed span, found from the spectrum of a random element.
///
/// Each attempt uses seed `seed + attempt`; after five failed attempts the call errors.
pub fn minimal_central_projections<S: AlgebraSpan + ?Sized>(
    s: &S,
    seed: u64,
    tol: Tolerance,
) -> Result<WedderburnReport> {
    if s.dim() == 0 {
        return Ok(WedderburnReport {
            central_projections: Vec::new(),
            block_dims: Vec::new(),
            multiplicities: Vec::new(),
        });
    }
    let mut last = None;
    for attempt in 0..5u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(attempt));
        match wedderburn_attempt(s, &mut rng, tol) {
            Ok(r) => return Ok(r),
            Err(e) => last = Some(e),
        }
    }
    Err(Error::Numerical(format!(
        "central projections not found after 5 attempts: {}",
        last.map(|e| e.to_string()).unwrap_or_default()
    )))
}

/// Unitary equivalence of two representations of the same spanning set.
pub fn equivalent(pi: &ConcreteRep, rho: &ConcreteRep, tol: Tolerance, seed: u64) -> Result<bool> {
    if pi.dim != rho.dim {
        return Ok(false);
    }
    if pi.dim == 0 {
        return Ok(true);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let ts = intertwiners(&pi.images, &rho.images, tol, &mut rng)?;
    if ts.is_empty() {
        return Ok(false);
    }
    let mut t = CMatrix::zeros(rho.dim, pi.dim);
    for b in &ts {
        t += b * complex_gaussian(&mut rng);
    }
    Ok(rank(&t, Tolerance { eps: tol.eps.max(1e-8) }) == pi.dim)
}

/// Dimension of the intertwiner space between two representations.
pub fn intertwiner_dim(pi: &ConcreteRep, rho: &ConcreteRep, tol: Tolerance, seed: u64) -> Result<usize> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(intertwiners(&pi.images, &rho.images, tol, &mut rng)?.len())
}

pub fn commutant_dim(pi: &ConcreteRep, tol: Tolerance, seed: u64) -> Result<usize> {
    intertwiner_dim(pi, pi, tol, seed)
}

/// Irreducible iff nonzero with scalar commutant.
pub fn is_irreducible(pi: &ConcreteRep, tol: Tolerance, seed: u64) -> Result<bool> {
    Ok(pi.dim > 0 && commutant_dim(pi, tol, seed)? == 1)
}

/// Factor iff the image algebra is a single nondegenerate Wedderburn block.
pub fn is_factor(pi: &ConcreteRep, tol: Tolerance, seed: u64) -> Result<bool> {
    let span = pi.image_span(tol)?;
    let report = minimal_central_projections(&span, seed, tol)?;
    Ok(report.block_dims.len() == 1 && report.ranks()[0] == pi.dim)
}

/// Quasi-equivalence: `π`, `ρ` and `π ⊕ ρ` have the same number of irreducible constituents (types).
pub fn quasi_equivalent(pi: &ConcreteRep, rho: &ConcreteRep, tol: Tolerance, seed: u64) -> Result<bool> {
    let count = |r: &ConcreteRep| -> Result<usize> {
        Ok(minimal_central_projections(&r.image_span(tol)?, seed, tol)?
            .block_dims
            .len())
    };
    let a = count(pi)?;
    let b = count(rho)?;
    Ok(a == b && count(&pi.direct_sum(rho)?)? == a)
}

/// Projection onto the span of `π(b) H` for the given images.
pub fn essential_subspace(images: &[CMatrix], dim: usize, tol: Tolerance) -> CMatrix {
    let mut g = CMatrix::zeros(dim, dim);
    for m in images {
        g += m * m.adjoint();
    }
    let q = range_basis(
        &g,
        Tolerance {
            eps: tol.eps.max(1e-12),
        },
    );
    &q * q.adjoint()
}

/// Ergodicity of a group action and the accompanying bound `dim A ≤ |G|`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ErgodicReport {
    pub is_ergodic: bool,
    pub fixed_dim: usize,
    pub dim_a: usize,
    pub group_order: usize,
}

impl ErgodicReport {
    /// Holds vacuously for non-ergodic actions.
    pub fn bound_holds(&self) -> bool {
        !self.is_ergodic || self.dim_a <= self.group_order
    }
}

pub fn ergodic_bound_check(action: &crate::crossed::GroupAction, tol: Tolerance) -> Result<ErgodicReport> {
    let fixed = crate::crossed::fixed_point_algebra(action, tol)?;
    Ok(ErgodicReport {
        is_ergodic: fixed.dim() == 1,
        fixed_dim: fixed.dim(),
        dim_a: action.algebra().dim(),
        group_order: action.group().order(),
    })
}

/// Flattened rank of a list of matrices, used to compare spans.
pub fn span_rank(ms: &[CMatrix], tol: Tolerance) -> usize {
    if ms.is_empty() {
        return 0;
    }
    rank(&flatten_columns(ms), tol)
}

/// Unit of a span: projection onto the subspace it acts on nondegenerately.
pub fn support_projection<S: AlgebraSpan + ?Sized>(s: &S, tol: Tolerance) -> CMatrix {
    let images: Vec<CMatrix> = (0..s.dim()).map(|i| s.element(i)).collect();
    essential_subspace(&images, s.ambient(), tol)
}

/// The identity matrix as a one-element span.
pub fn scalars(n: usize) -> SpannedAlgebra {
    SpannedAlgebra {
        ambient: n,
        basis: vec![identity(n).unscale((n as f64).sqrt())],
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algebra::{make_algebra, Representation, TensorPower};
    use crate::error::Budget;
    use crate::groups::FiniteGroup;
    use crate::linalg::{from_real_diagonal, haar_unitary, is_projection, kron, matrix_unit};

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn full_matrix_span(n: usize) -> SpannedAlgebra {
        let units: Vec<CMatrix> = (0..n * n).map(|k| matrix_unit(n, k / n, k % n)).collect();
        SpannedAlgebra::from_spanning(n, &units, tol()).unwrap()
    }

    /// Commutant by brute force: null space of the stacked commutator maps on vec(X).
    fn brute_commutant_dim(s: &SpannedAlgebra) -> usize {
        let n = s.ambient();
        let mut rows = CMatrix::zeros(n * n * s.dim(), n * n);
        for (bi, b) in s.basis().iter().enumerate() {
            for k in 0..n * n {
                let x = matrix_unit(n, k % n, k / n);
                let c = &x * b - b * &x;
                for (r, z) in c.as_slice().iter().enumerate() {
                    rows[(bi * n * n + r, k)] = *z;
                }
            }
        }
        crate::linalg::nullspace(&rows, Tolerance::new(1e-10).unwrap()).ncols()
    }

    #[test]
    fn commutant_examples() {
        assert_eq!(commutant(&full_matrix_span(4), tol(), 1).unwrap().dim(), 1);
        let diag: Vec<CMatrix> = (0..3).map(|i| matrix_unit(3, i, i)).collect();
        let d = SpannedAlgebra::from_spanning(3, &diag, tol()).unwrap();
        let c = commutant(&d, tol(), 2).unwrap();
        assert_eq!(c.dim(), 3);
        assert!(c.same_span(&d, Tolerance::new(1e-8).unwrap()));
        // (1 ⊗ M_2)' = M_2 ⊗ 1
        let lifted: Vec<CMatrix> = (0..4)
            .map(|k| kron(&identity(2), &matrix_unit(2, k / 2, k % 2)))
            .collect();
        let s = SpannedAlgebra::from_spanning(4, &lifted, tol()).unwrap();
        let c = commutant(&s, tol(), 3).unwrap();
        assert_eq!(c.dim(), 4);
        assert_eq!(brute_commutant_dim(&s), 4);
        for b in c.basis() {
            for x in s.basis() {
                assert!((b * x - x * b).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn bicommutant_recovers_span() {
        let a = make_algebra(&[2, 1]).unwrap();
        let pi = Representation::new(&a, vec![2, 1]).unwrap();
        let rep = ConcreteRep::from_rep(&SpannedAlgebra::from_spanning(3, &a.basis(), tol()).unwrap(), &pi);
        let s = rep.image_span(tol()).unwrap();
        let c = commutant(&s, tol(), 4).unwrap();
        assert_eq!(c.dim(), brute_commutant_dim(&s));
        let cc = commutant(&c, tol(), 5).unwrap();
        assert!(cc.same_span(&s, Tolerance::new(1e-8).unwrap()));
    }

    #[test]
    fn wedderburn_examples() {
        let r = minimal_central_projections(&full_matrix_span(4), 0, tol()).unwrap();
        assert_eq!((r.block_dims.clone(), r.multiplicities.clone()), (vec![4], vec![1]));
        assert!(rel_diff(&r.central_projections[0], &identity(4)) < 1e-10);

        let m2 = make_algebra(&[2]).unwrap();
        let tp = TensorPower::new(&m2, 2, Budget::default()).unwrap();
        let sb = tp.symmetric_power_basis();
        let r = minimal_central_projections(&sb, 1, tol()).unwrap();
        assert_eq!(r.block_dims, vec![3, 1]);
        assert_eq!(r.ranks(), vec![3, 1]);

        let s3 = FiniteGroup::symmetric(3).unwrap();
        let reg = s3.regular_rep();
        let ga = SpannedAlgebra::from_spanning(6, &reg.matrices, tol()).unwrap();
        let r = minimal_central_projections(&ga, 2, tol()).unwrap();
        assert_eq!(r.sorted_block_dims(), vec![2, 1, 1]);
        assert_eq!(r.linear_dim(), 6);
        assert_eq!(r.ranks().iter().sum::<usize>(), 6);
        let mut sum = CMatrix::zeros(6, 6);
        for (i, p) in r.central_projections.iter().enumerate() {
            assert!(is_projection(p, Tolerance::new(1e-9).unwrap()));
            for q in &r.central_projections[i + 1..] {
                assert!((p * q).norm() < 1e-9);
            }
            sum += p;
        }
        assert!(rel_diff(&sum, &identity(6)) < 1e-9);
    }

    #[test]
    fn wedderburn_is_seed_independent() {
        let a = make_algebra(&[2, 1]).unwrap();
        let tp = TensorPower::new(&a, 2, Budget::default()).unwrap();
        let sb = tp.symmetric_power_basis();
        let key = |r: &WedderburnReport| {
            let mut v: Vec<(usize, usize, usize)> = r
                .block_dims
                .iter()
                .zip(&r.multiplicities)
                .map(|(&d, &k)| (d * k, d, k))
                .collect();
            v.sort_unstable();
            v
        };
        let r1 = minimal_central_projections(&sb, 10, tol()).unwrap();
        let r2 = minimal_central_projections(&sb, 99, tol()).unwrap();
        assert_eq!(key(&r1), key(&r2));
        assert_eq!(r1.linear_dim(), sb.dim());
    }

    #[test]
    fn equivalence_examples() {
        let a = make_algebra(&[2, 3]).unwrap();
        let span = SpannedAlgebra::from_spanning(5, &a.basis(), tol()).unwrap();
        let p0 = ConcreteRep::from_rep(&span, &Representation::block(&a, 0).unwrap());
        let p1 = ConcreteRep::from_rep(&span, &Representation::block(&a, 1).unwrap());
        assert!(equivalent(&p0, &p0, tol(), 0).unwrap());
        assert!(!equivalent(&p0, &p1, tol(), 0).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = haar_unitary(3, &mut rng);
        assert!(equivalent(&p1, &p1.conjugated(&u), tol(), 1).unwrap());
        let twice = ConcreteRep::from_rep(&span, &Representation::new(&a, vec![2, 0]).unwrap());
        let other = ConcreteRep::from_rep(&span, &Representation::new(&a, vec![0, 1]).unwrap());
        assert_eq!(twice.dim(), 4);
        let conj = p0.direct_sum(&p0).unwrap().conjugated(&haar_unitary(4, &mut rng));
        assert!(equivalent(&twice, &conj, tol(), 2).unwrap());
        assert!(equivalent(&other, &p1.conjugated(&u), tol(), 2).unwrap());
    }

    #[test]
    fn irreducible_and_factor() {
        let m2 = make_algebra(&[2]).unwrap();
        let span = SpannedAlgebra::from_spanning(2, &m2.basis(), tol()).unwrap();
        let def = ConcreteRep::defining(&span);
        assert!(is_irreducible(&def, tol(), 0).unwrap());
        let doubled = ConcreteRep::from_rep(&span, &Representation::new(&m2, vec![2]).unwrap());
        assert!(is_factor(&doubled, tol(), 0).unwrap());
        assert!(!is_irreducible(&doubled, tol(), 0).unwrap());
        assert_eq!(commutant_dim(&doubled, tol(), 0).unwrap(), 4);

        let m2c = make_algebra(&[2, 1]).unwrap();
        let span = SpannedAlgebra::from_spanning(3, &m2c.basis(), tol()).unwrap();
        let def = ConcreteRep::defining(&span);
        assert!(!is_factor(&def, tol(), 0).unwrap());
        let c = commutant(&span, tol(), 0).unwrap();
        assert_eq!(c.dim(), 2);

        let p0 = ConcreteRep::from_rep(&span, &Representation::block(&m2c, 0).unwrap());
        let p00 = ConcreteRep::from_rep(&span, &Representation::new(&m2c, vec![3, 0]).unwrap());
        assert!(quasi_equivalent(&p0, &p00, tol(), 0).unwrap());
        assert!(!quasi_equivalent(&p0, &def, tol(), 0).unwrap());
    }

    #[test]
    fn essential_subspace_examples() {
        let c2 = make_algebra(&[1, 1]).unwrap();
        let images: Vec<CMatrix> = c2.basis();
        assert!(rel_diff(&essential_subspace(&images, 2, tol()), &identity(2)) < 1e-12);
        let p = from_real_diagonal(&[1.0, 0.0]);
        let corner: Vec<CMatrix> = images.iter().map(|x| &p * x * &p).collect();
        let e = essential_subspace(&corner, 2, tol());
        assert_eq!(rank(&e, tol()), 1);
        assert!(essential_subspace(&[CMatrix::zeros(2, 2)], 2, tol()).norm() == 0.0);
    }

    #[test]
    fn intertwiners_between_different_sizes() {
        // π = block 0 of M_2 ⊕ C, ρ = π ⊕ π ⊕ (block 1): Hom(π, ρ) has dimension 2
        let a = make_algebra(&[2, 1]).unwrap();
        let span = SpannedAlgebra::from_spanning(3, &a.basis(), tol()).unwrap();
        let pi = ConcreteRep::from_rep(&span, &Representation::block(&a, 0).unwrap());
        let rho = ConcreteRep::from_rep(&span, &Representation::new(&a, vec![2, 1]).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let ts = intertwiners(pi.images(), rho.images(), tol(), &mut rng).unwrap();
        assert_eq!(ts.len(), 2);
        for t in &ts {
            for (x, y) in pi.images().iter().zip(rho.images()) {
                assert!((t * x - y * t).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn roundoff_sized_generators_are_ignored() {
        let a = make_algebra(&[2]).unwrap();
        let span = SpannedAlgebra::from_spanning(2, &a.basis(), tol()).unwrap();
        let pi = ConcreteRep::defining(&span);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let u = a.random_unitary(&mut rng);
        let mut p = pi.images().to_vec();
        let mut r: Vec<CMatrix> = p.iter().map(|x| &u * x * u.adjoint()).collect();
        // a generator that is zero up to roundoff, with unrelated noise on each side
        p.push(CMatrix::from_fn(2, 2, |i, j| C64::new(1e-30 * (i + 2 * j) as f64, 0.0)));
        r.push(CMatrix::from_fn(2, 2, |i, j| C64::new(0.0, 1e-30 * (3 * i + j) as f64)));
        let ts = intertwiners(&p, &r, tol(), &mut rng).unwrap();
        assert_eq!(ts.len(), 1);
    }
}
