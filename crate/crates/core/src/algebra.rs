//! Finite-dimensional C*-algebras `⊕_i M_{k_i}`, their tensor and symmetric powers.
//!
//! An algebra is carried by a faithful block-diagonal embedding into `M_K`.
//! Its basis consists of matrix units, each sitting at one ambient position, so
//! elements are handled either as coefficient vectors or as ambient matrices.
//! Blocks of a tensor product need not be contiguous in the ambient space: each
//! block records the ambient indices it is supported on.

use std::collections::HashMap;

use rand::Rng;

use crate::error::{invalid, Budget, Error, Result};
use crate::groups::{digits_of, factorial, index_of_digits, permute_multi_index, FiniteGroup, Perm};
use crate::linalg::{complex_gaussian, haar_unitary, identity, kron, CMatrix, SpanBuilder, Tolerance, C64, ONE, ZERO};
use crate::structure::SpannedAlgebra;

/// A matrix unit `e_{rs}` of block `block`, placed at ambient position `(row, col)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct MatrixUnit {
    pub block: usize,
    pub r: usize,
    pub s: usize,
    pub row: usize,
    pub col: usize,
}

#[derive(Clone, Debug)]
pub struct FdCStarAlgebra {
    blocks: Vec<usize>,
    supports: Vec<Vec<usize>>,
    ambient: usize,
    units: Vec<MatrixUnit>,
}

/// Coordinates of an algebra element in the matrix-unit basis.
#[derive(Clone, Debug, PartialEq)]
pub struct AlgebraElement {
    pub coeffs: Vec<C64>,
}

impl FdCStarAlgebra {
    /// The algebra `⊕_i M_{k_i}` with contiguous diagonal blocks.
    pub fn new(blocks: &[usize]) -> Result<Self> {
        if blocks.is_empty() || blocks.contains(&0) {
            return Err(invalid("block list must be non-empty with positive sizes"));
        }
        let mut supports = Vec::new();
        let mut units = Vec::new();
        let mut off = 0;
        for (b, &k) in blocks.iter().enumerate() {
            supports.push((off..off + k).collect());
            for r in 0..k {
                for s in 0..k {
                    units.push(MatrixUnit {
                        block: b,
                        r,
                        s,
                        row: off + r,
                        col: off + s,
                    });
                }
            }
            off += k;
        }
        let alg = Self {
            blocks: blocks.to_vec(),
            supports,
            ambient: off,
            units,
        };
        alg.validate()?;
        Ok(alg)
    }

    /// Structural closure check: matrix units occupy distinct positions and each
    /// block fills exactly `support × support`, with supports partitioning the ambient index set.
    fn validate(&self) -> Result<()> {
        let mut owner = vec![usize::MAX; self.ambient];
        for (b, supp) in self.supports.iter().enumerate() {
            if supp.len() != self.blocks[b] {
                return Err(Error::Numerical(format!("block {b} support has wrong size")));
            }
            for &i in supp {
                if owner[i] != usize::MAX {
                    return Err(Error::Numerical("block supports overlap".into()));
                }
                owner[i] = b;
            }
        }
        if owner.contains(&usize::MAX) {
            return Err(Error::Numerical("unit is not in the span".into()));
        }
        let mut seen = std::collections::HashSet::new();
        for u in &self.units {
            let supp = &self.supports[u.block];
            if supp[u.r] != u.row || supp[u.s] != u.col || !seen.insert((u.row, u.col)) {
                return Err(Error::Numerical("matrix units are not closed under products".into()));
            }
        }
        let expected: usize = self.blocks.iter().map(|k| k * k).sum();
        if self.units.len() != expected {
            return Err(Error::Numerical("matrix-unit count differs from Σk²".into()));
        }
        Ok(())
    }

    pub fn blocks(&self) -> &[usize] {
        &self.blocks
    }

    /// Ambient size `K = Σ k_i`.
    pub fn ambient(&self) -> usize {
        self.ambient
    }

    /// Linear dimension `D = Σ k_i²`.
    pub fn dim(&self) -> usize {
        self.units.len()
    }

    pub fn units(&self) -> &[MatrixUnit] {
        &self.units
    }

    pub fn support(&self, block: usize) -> &[usize] {
        &self.supports[block]
    }

    pub fn is_commutative(&self) -> bool {
        self.blocks.iter().all(|&k| k == 1)
    }

    pub fn basis_matrix(&self, i: usize) -> CMatrix {
        let u = self.units[i];
        let mut m = CMatrix::zeros(self.ambient, self.ambient);
        m[(u.row, u.col)] = ONE;
        m
    }

    pub fn basis(&self) -> Vec<CMatrix> {
        (0..self.dim()).map(|i| self.basis_matrix(i)).collect()
    }

    pub fn embed(&self, x: &AlgebraElement) -> Result<CMatrix> {
        if x.coeffs.len() != self.dim() {
            return Err(Error::Shape(format!(
                "element has {} coefficients, algebra dimension is {}",
                x.coeffs.len(),
                self.dim()
            )));
        }
        let mut m = CMatrix::zeros(self.ambient, self.ambient);
        for (u, &z) in self.units.iter().zip(&x.coeffs) {
            m[(u.row, u.col)] = z;
        }
        Ok(m)
    }

    /// Coordinates of an ambient matrix; fails if it leaves the algebra by more than `tol`.
    pub fn coords(&self, m: &CMatrix, tol: Tolerance) -> Result<AlgebraElement> {
        if m.shape() != (self.ambient, self.ambient) {
            return Err(Error::Shape(format!("expected {0}x{0} matrix", self.ambient)));
        }
        let coeffs: Vec<C64> = self.units.iter().map(|u| m[(u.row, u.col)]).collect();
        let owner = self.block_owner();
        let mut outside = 0.0;
        for j in 0..self.ambient {
            for i in 0..self.ambient {
                if owner[i] != owner[j] {
                    outside += m[(i, j)].norm_sqr();
                }
            }
        }
        let outside = f64::sqrt(outside);
        if outside > tol.eps * 1f64.max(m.norm()) {
            return Err(invalid(format!("matrix leaves the algebra (residual {outside:.3e})")));
        }
        Ok(AlgebraElement { coeffs })
    }

    /// Block index owning each ambient coordinate.
    fn block_owner(&self) -> Vec<usize> {
        let mut owner = vec![0; self.ambient];
        for (b, supp) in self.supports.iter().enumerate() {
            for &i in supp {
                owner[i] = b;
            }
        }
        owner
    }

    pub fn contains(&self, m: &CMatrix, tol: Tolerance) -> bool {
        self.coords(m, tol).is_ok()
    }

    /// Block `b` of an ambient matrix as a `k_b × k_b` matrix.
    pub fn block_of(&self, m: &CMatrix, b: usize) -> CMatrix {
        let supp = &self.supports[b];
        CMatrix::from_fn(supp.len(), supp.len(), |r, s| m[(supp[r], supp[s])])
    }

    /// Assemble an ambient matrix from one matrix per block.
    pub fn from_blocks(&self, parts: &[CMatrix]) -> Result<CMatrix> {
        if parts.len() != self.blocks.len() || parts.iter().zip(&self.blocks).any(|(p, &k)| p.shape() != (k, k)) {
            return Err(Error::Shape("one k_i × k_i matrix per block is required".into()));
        }
        let mut m = CMatrix::zeros(self.ambient, self.ambient);
        for (b, p) in parts.iter().enumerate() {
            let supp = &self.supports[b];
            for r in 0..supp.len() {
                for s in 0..supp.len() {
                    m[(supp[r], supp[s])] = p[(r, s)];
                }
            }
        }
        Ok(m)
    }

    pub fn unit(&self) -> CMatrix {
        identity(self.ambient)
    }

    /// Element with standard complex Gaussian coordinates.
    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> CMatrix {
        let coeffs = (0..self.dim()).map(|_| complex_gaussian(rng)).collect();
        self.embed(&AlgebraElement { coeffs }).expect("dimension matches")
    }

    /// Haar unitary of the algebra, sampled block by block.
    pub fn random_unitary<R: Rng + ?Sized>(&self, rng: &mut R) -> CMatrix {
        let parts: Vec<CMatrix> = self.blocks.iter().map(|&k| haar_unitary(k, rng)).collect();
        self.from_blocks(&parts).expect("block shapes match")
    }

    /// Random positive element `y*y`.
    pub fn random_positive<R: Rng + ?Sized>(&self, rng: &mut R) -> CMatrix {
        let y = self.random_element(rng);
        y.adjoint() * y
    }
}

/// Alias for [`FdCStarAlgebra::new`].
pub fn make_algebra(blocks: &[usize]) -> Result<FdCStarAlgebra> {
    FdCStarAlgebra::new(blocks)
}

/// `A ⊗ B` with blocks `k_i·l_j` (first factor major) and Kronecker-product matrix units.
pub fn tensor_algebra(a: &FdCStarAlgebra, b: &FdCStarAlgebra) -> FdCStarAlgebra {
    let l_amb = b.ambient;
    let mut blocks = Vec::new();
    let mut supports = Vec::new();
    for (i, si) in a.supports.iter().enumerate() {
        for (j, sj) in b.supports.iter().enumerate() {
            blocks.push(a.blocks[i] * b.blocks[j]);
            supports.push(
                si.iter()
                    .flat_map(|&x| sj.iter().map(move |&y| x * l_amb + y))
                    .collect(),
            );
        }
    }
    let nb = b.blocks.len();
    let mut units = Vec::with_capacity(a.dim() * b.dim());
    for ua in &a.units {
        for ub in &b.units {
            let lb = b.blocks[ub.block];
            units.push(MatrixUnit {
                block: ua.block * nb + ub.block,
                r: ua.r * lb + ub.r,
                s: ua.s * lb + ub.s,
                row: ua.row * l_amb + ub.row,
                col: ua.col * l_amb + ub.col,
            });
        }
    }
    FdCStarAlgebra {
        blocks,
        supports,
        ambient: a.ambient * l_amb,
        units,
    }
}

/// `A^{⊗n}`; coefficient index is mixed radix in `D` with the first factor most significant.
pub fn tensor_power(a: &FdCStarAlgebra, n: usize) -> Result<FdCStarAlgebra> {
    if n == 0 {
        return Err(invalid("tensor power needs n ≥ 1"));
    }
    let mut out = a.clone();
    for _ in 1..n {
        out = tensor_algebra(&out, a);
    }
    out.validate()?;
    Ok(out)
}

/// A *-representation given by how it acts on ambient matrices of its algebra.
pub trait StarRepresentation {
    fn dim(&self) -> usize;
    fn apply(&self, x: &CMatrix) -> CMatrix;
}

/// `π = ⊕_i π_i^{⊕ n_i}`, where `π_i` is the defining representation of block `i`.
#[derive(Clone, Debug)]
pub struct Representation {
    algebra: FdCStarAlgebra,
    multiplicities: Vec<usize>,
}

impl Representation {
    pub fn new(algebra: &FdCStarAlgebra, multiplicities: Vec<usize>) -> Result<Self> {
        if multiplicities.len() != algebra.blocks.len() {
            return Err(invalid("one multiplicity per block is required"));
        }
        Ok(Self {
            algebra: algebra.clone(),
            multiplicities,
        })
    }

    /// The irreducible representation of block `b`.
    pub fn block(algebra: &FdCStarAlgebra, b: usize) -> Result<Self> {
        if b >= algebra.blocks.len() {
            return Err(invalid(format!("block {b} does not exist")));
        }
        let mut mult = vec![0; algebra.blocks.len()];
        mult[b] = 1;
        Self::new(algebra, mult)
    }

    pub fn multiplicities(&self) -> &[usize] {
        &self.multiplicities
    }

    pub fn is_irreducible(&self) -> bool {
        self.multiplicities.iter().sum::<usize>() == 1
    }
}

impl StarRepresentation for Representation {
    fn dim(&self) -> usize {
        self.multiplicities
            .iter()
            .zip(&self.algebra.blocks)
            .map(|(n, k)| n * k)
            .sum()
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        let mut parts = Vec::new();
        for (b, &n) in self.multiplicities.iter().enumerate() {
            if n > 0 {
                parts.push(kron(&identity(n), &self.algebra.block_of(x, b)));
            }
        }
        if parts.is_empty() {
            return CMatrix::zeros(0, 0);
        }
        crate::linalg::direct_sum(&parts).expect("blocks are square")
    }
}

/// `A^{⊗n}` together with its base algebra, for the permutation action and symmetric powers.
#[derive(Clone, Debug)]
pub struct TensorPower {
    base: FdCStarAlgebra,
    n: usize,
    power: FdCStarAlgebra,
}

/// The factor permutation `α_σ` on `A^{⊗n}`, stored as index maps on coefficients and ambient indices.
#[derive(Clone, Debug)]
pub struct FactorPermutation {
    pub sigma: Perm,
    coeff_map: Vec<usize>,
    ambient_map: Vec<usize>,
}

impl FactorPermutation {
    pub fn apply_coeffs(&self, x: &AlgebraElement) -> AlgebraElement {
        let mut out = vec![ZERO; x.coeffs.len()];
        for (i, &z) in x.coeffs.iter().enumerate() {
            out[self.coeff_map[i]] = z;
        }
        AlgebraElement { coeffs: out }
    }

    /// `α_σ(x) = τ(σ) x τ(σ)*` on an ambient matrix.
    pub fn apply(&self, x: &CMatrix) -> CMatrix {
        let n = self.ambient_map.len();
        let mut out = CMatrix::zeros(n, n);
        for j in 0..n {
            let tj = self.ambient_map[j];
            for i in 0..n {
                out[(self.ambient_map[i], tj)] = x[(i, j)];
            }
        }
        out
    }

    /// Coefficient index map: unit `i` of `A^{⊗n}` goes to unit `coeff_map()[i]`.
    pub fn coeff_map(&self) -> &[usize] {
        &self.coeff_map
    }

    /// `α_σ` as a `D^n × D^n` permutation matrix on coefficient space.
    pub fn to_matrix(&self) -> CMatrix {
        crate::groups::permutation_matrix(&self.coeff_map)
    }

    /// The implementing unitary `τ(σ)` on the ambient space.
    pub fn ambient_unitary(&self) -> CMatrix {
        crate::groups::permutation_matrix(&self.ambient_map)
    }
}

impl TensorPower {
    pub fn new(base: &FdCStarAlgebra, n: usize, budget: Budget) -> Result<Self> {
        if n == 0 {
            return Err(invalid("tensor power needs n ≥ 1"));
        }
        let size = (base.ambient as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
        budget.check(size.min(usize::MAX as u128) as usize, "tensor power")?;
        Ok(Self {
            base: base.clone(),
            n,
            power: tensor_power(base, n)?,
        })
    }

    pub fn base(&self) -> &FdCStarAlgebra {
        &self.base
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn power(&self) -> &FdCStarAlgebra {
        &self.power
    }

    pub fn ambient(&self) -> usize {
        self.power.ambient
    }

    pub fn permutation_action(&self, sigma: &[usize]) -> Result<FactorPermutation> {
        if sigma.len() != self.n || !crate::groups::is_permutation(sigma) {
            return Err(invalid(format!("{sigma:?} is not a permutation of 0..{}", self.n)));
        }
        let d = self.base.dim();
        let k = self.base.ambient;
        let map = |size: usize, radix: usize| -> Vec<usize> {
            (0..size)
                .map(|i| index_of_digits(&permute_multi_index(sigma, &digits_of(i, radix, self.n)), radix))
                .collect()
        };
        Ok(FactorPermutation {
            sigma: sigma.to_vec(),
            coeff_map: map(self.power.dim(), d),
            ambient_map: map(self.power.ambient, k),
        })
    }

    /// All `α_σ`, in the element order of [`FiniteGroup::symmetric`].
    pub fn all_actions(&self) -> Result<(FiniteGroup, Vec<FactorPermutation>)> {
        let sn = FiniteGroup::symmetric(self.n)?;
        let acts = (0..sn.order())
            .map(|g| self.permutation_action(sn.permutation(g).unwrap()))
            .collect::<Result<_>>()?;
        Ok((sn, acts))
    }

    /// `E(x) = (1/n!) Σ_σ α_σ(x)`.
    pub fn symmetrizer(&self, x: &CMatrix) -> Result<CMatrix> {
        let (_, acts) = self.all_actions()?;
        let mut out = CMatrix::zeros(x.nrows(), x.ncols());
        for a in &acts {
            out += a.apply(x);
        }
        Ok(out.unscale(acts.len() as f64))
    }

    /// `Γ_n(a) = a^{⊗n}` for an ambient matrix of the base algebra.
    pub fn gamma_n(&self, a: &CMatrix) -> CMatrix {
        let mut out = a.clone();
        for _ in 1..self.n {
            out = kron(&out, a);
        }
        out
    }

    /// `dΓ(a) = Σ_k 1^{⊗(k−1)} ⊗ a ⊗ 1^{⊗(n−k)}`.
    pub fn d_gamma(&self, a: &CMatrix) -> CMatrix {
        let k = self.base.ambient;
        let mut out = CMatrix::zeros(self.ambient(), self.ambient());
        for pos in 0..self.n {
            let left = identity(k.pow(pos as u32));
            let right = identity(k.pow((self.n - pos - 1) as u32));
            out += kron(&kron(&left, a), &right);
        }
        out
    }

    /// Basis of `S^n(A)` made of orbit sums of matrix-unit monomials.
    pub fn symmetric_power_basis(&self) -> SymmetricPowerBasis {
        let d = self.base.dim();
        let mut class: HashMap<Vec<usize>, usize> = HashMap::new();
        let mut multisets = Vec::new();
        let mut orbits: Vec<Vec<usize>> = Vec::new();
        for i in 0..self.power.dim() {
            let mut digits = digits_of(i, d, self.n);
            digits.sort_unstable();
            let id = *class.entry(digits.clone()).or_insert_with(|| {
                multisets.push(digits);
                orbits.push(Vec::new());
                orbits.len() - 1
            });
            orbits[id].push(i);
        }
        SymmetricPowerBasis {
            power: self.power.clone(),
            n: self.n,
            multisets,
            orbits,
        }
    }
}

/// Anything that spans a concrete subspace of `M_N` closed enough to sample from.
pub trait AlgebraSpan {
    fn ambient(&self) -> usize;
    fn dim(&self) -> usize;
    /// The `i`-th spanning element as a dense matrix.
    fn element(&self, i: usize) -> CMatrix;
    /// A random element of the span (Gaussian coordinates).
    fn random_element(&self, rng: &mut dyn rand::RngCore) -> CMatrix;
}

/// Orbit-sum basis of `S^n(A) = (A^{⊗n})^{S_n}`, stored sparsely.
#[derive(Clone, Debug)]
pub struct SymmetricPowerBasis {
    power: FdCStarAlgebra,
    n: usize,
    multisets: Vec<Vec<usize>>,
    orbits: Vec<Vec<usize>>,
}

impl SymmetricPowerBasis {
    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    /// Multisets of base basis indices labelling the basis vectors.
    pub fn multisets(&self) -> &[Vec<usize>] {
        &self.multisets
    }

    /// Coefficient indices (in `A^{⊗n}`) summed in each basis vector.
    pub fn orbits(&self) -> &[Vec<usize>] {
        &self.orbits
    }

    pub fn coeffs(&self, i: usize) -> AlgebraElement {
        let mut coeffs = vec![ZERO; self.power.dim()];
        for &j in &self.orbits[i] {
            coeffs[j] = ONE;
        }
        AlgebraElement { coeffs }
    }

    /// Coordinates of a symmetric ambient matrix in the orbit-sum basis.
    pub fn coords(&self, m: &CMatrix, tol: Tolerance) -> Result<Vec<C64>> {
        let el = self.power.coords(m, tol)?;
        let mut out = Vec::with_capacity(self.len());
        let mut residual = 0.0;
        for orbit in &self.orbits {
            let mean: C64 = orbit.iter().map(|&j| el.coeffs[j]).sum::<C64>() / orbit.len() as f64;
            residual += orbit.iter().map(|&j| (el.coeffs[j] - mean).norm_sqr()).sum::<f64>();
            out.push(mean);
        }
        if residual.sqrt() > tol.eps * 1f64.max(m.norm()) {
            return Err(invalid("matrix is not fixed by the permutation action"));
        }
        Ok(out)
    }
}

impl AlgebraSpan for SymmetricPowerBasis {
    fn ambient(&self) -> usize {
        self.power.ambient
    }

    fn dim(&self) -> usize {
        self.orbits.len()
    }

    fn element(&self, i: usize) -> CMatrix {
        let mut m = CMatrix::zeros(self.power.ambient, self.power.ambient);
        for &j in &self.orbits[i] {
            let u = self.power.units[j];
            m[(u.row, u.col)] = ONE;
        }
        m
    }

    fn random_element(&self, rng: &mut dyn rand::RngCore) -> CMatrix {
        let mut m = CMatrix::zeros(self.power.ambient, self.power.ambient);
        for orbit in &self.orbits {
            let z = complex_gaussian(rng) / (orbit.len() as f64).sqrt();
            for &j in orbit {
                let u = self.power.units[j];
                m[(u.row, u.col)] = z;
            }
        }
        m
    }
}

/// Smallest unital *-closed, product-closed subspace of `M_N` containing the seeds.
pub fn generated_star_algebra(seeds: &[CMatrix], ambient: usize, tol: Tolerance) -> Result<SpannedAlgebra> {
    if seeds.iter().any(|s| s.shape() != (ambient, ambient)) {
        return Err(Error::Shape(format!("seeds must be {ambient}x{ambient}")));
    }
    let mut gens: Vec<CMatrix> = Vec::new();
    for s in seeds {
        gens.push(s.clone());
        gens.push(s.adjoint());
    }
    let mut span = SpanBuilder::new(ambient * ambient, tol.eps);
    span.push_matrix(&identity(ambient));
    for g in &gens {
        span.push_matrix(g);
    }
    // words in the generators, grown one letter at a time until the span stops growing
    let mut frontier = 0;
    while frontier < span.dim() {
        let upto = span.dim();
        for i in frontier..upto {
            let b = crate::linalg::unflatten(&span.basis()[i], ambient, ambient);
            for g in &gens {
                span.push_matrix(&(g * &b));
            }
        }
        frontier = upto;
    }
    let basis = span
        .into_basis()
        .iter()
        .map(|v| crate::linalg::unflatten(v, ambient, ambient))
        .collect();
    SpannedAlgebra::from_orthonormal(ambient, basis)
}

/// Outcome of sampling `‖(xy)² − x²y²‖` over random pairs.
#[derive(Clone, Debug, PartialEq)]
pub struct SquareMapReport {
    pub multiplicative: bool,
    pub trials_run: usize,
    pub worst_residual: f64,
}

/// Test whether `x ↦ x²` is multiplicative on random pairs; stops at the first counterexample.
pub fn square_map_multiplicativity<R: Rng + ?Sized>(
    a: &FdCStarAlgebra,
    trials: usize,
    tol: Tolerance,
    rng: &mut R,
) -> SquareMapReport {
    let mut worst: f64 = 0.0;
    for t in 0..trials {
        let x = a.random_element(rng);
        let y = a.random_element(rng);
        let xy = &x * &y;
        let lhs = &xy * &xy;
        let rhs = &x * &x * &y * &y;
        let scale = 1f64.max(x.norm().powi(2) * y.norm().powi(2));
        let res = (lhs - rhs).norm() / scale;
        worst = worst.max(res);
        if res > tol.eps {
            return SquareMapReport {
                multiplicative: false,
                trials_run: t + 1,
                worst_residual: worst,
            };
        }
    }
    SquareMapReport {
        multiplicative: true,
        trials_run: trials,
        worst_residual: worst,
    }
}

/// `C(D+n−1, n)`, the dimension of `S^n(A)` for `dim A = D`.
pub fn symmetric_power_dimension(d: usize, n: usize) -> u128 {
    crate::groups::binomial((d + n - 1) as u128, n as u128)
}

/// Number of `S_n`-orbits on `D^n` coefficient indices, counted by Burnside's lemma.
pub fn orbit_count_burnside(d: usize, n: usize) -> Result<u128> {
    let sn = FiniteGroup::symmetric(n)?;
    let mut fixed_total: u128 = 0;
    for g in 0..sn.order() {
        let p = sn.permutation(g).unwrap();
        let mut seen = vec![false; n];
        let mut cycles = 0u32;
        for start in 0..n {
            if !seen[start] {
                cycles += 1;
                let mut j = start;
                while !seen[j] {
                    seen[j] = true;
                    j = p[j];
                }
            }
        }
        fixed_total += (d as u128).pow(cycles);
    }
    Ok(fixed_total / factorial(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{eig_hermitian, flatten_columns, from_real_diagonal, op_norm, rank, rel_diff};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    #[test]
    fn make_algebra_dimensions() {
        let c3 = make_algebra(&[1, 1, 1]).unwrap();
        assert_eq!((c3.dim(), c3.ambient()), (3, 3));
        assert!(c3.is_commutative());
        let m2 = make_algebra(&[2]).unwrap();
        assert_eq!((m2.dim(), m2.ambient()), (4, 2));
        let m23 = make_algebra(&[2, 3]).unwrap();
        assert_eq!((m23.dim(), m23.ambient()), (13, 5));
        assert!(make_algebra(&[]).is_err());
        assert!(make_algebra(&[2, 0]).is_err());
        assert!(m23.contains(&m23.unit(), tol()));
    }

    #[test]
    fn tensor_algebra_blocks() {
        let m2 = make_algebra(&[2]).unwrap();
        let t = tensor_algebra(&m2, &m2);
        assert_eq!((t.blocks(), t.dim()), (&[4][..], 16));
        let c2 = make_algebra(&[1, 1]).unwrap();
        assert_eq!(tensor_algebra(&c2, &c2).blocks(), &[1, 1, 1, 1]);
        let m2c = make_algebra(&[2, 1]).unwrap();
        let t = tensor_algebra(&m2c, &m2);
        assert_eq!((t.blocks(), t.dim()), (&[4, 2][..], 20));
        assert!(t.validate().is_ok());
        assert_eq!(tensor_power(&m2c, 2).unwrap().dim(), 25);
        assert_eq!(tensor_power(&c2, 3).unwrap().blocks(), &[1; 8]);
    }

    #[test]
    fn tensor_units_are_kronecker_products() {
        let a = make_algebra(&[2, 1]).unwrap();
        let b = make_algebra(&[1, 2]).unwrap();
        let t = tensor_algebra(&a, &b);
        for i in 0..a.dim() {
            for j in 0..b.dim() {
                assert_eq!(
                    t.basis_matrix(i * b.dim() + j),
                    kron(&a.basis_matrix(i), &b.basis_matrix(j))
                );
            }
        }
        // the span is closed under products: block structure matches a random product
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let x = t.random_element(&mut rng);
        let y = t.random_element(&mut rng);
        assert!(t.contains(&(x * y), tol()));
    }

    #[test]
    fn permutation_action_properties() {
        let m2 = make_algebra(&[2]).unwrap();
        let tp = TensorPower::new(&m2, 3, Budget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        let (sn, acts) = tp.all_actions().unwrap();
        assert!(rel_diff(&acts[0].to_matrix(), &identity(64)) == 0.0);
        for (g, a) in acts.iter().enumerate() {
            let x = tp.power().random_element(&mut rng);
            let y = tp.power().random_element(&mut rng);
            assert!(rel_diff(&a.apply(&(&x * &y)), &(a.apply(&x) * a.apply(&y))) < 1e-10);
            assert!(rel_diff(&a.apply(&x.adjoint()), &a.apply(&x).adjoint()) < 1e-14);
            let tau = a.ambient_unitary();
            assert!(rel_diff(&a.apply(&x), &(&tau * &x * tau.adjoint())) < 1e-14);
            // coefficient and ambient pictures agree
            let cx = tp.power().coords(&x, tol()).unwrap();
            assert_eq!(tp.power().embed(&a.apply_coeffs(&cx)).unwrap(), a.apply(&x));
            for (h, b) in acts.iter().enumerate() {
                let gh = sn.mul(g, h);
                assert_eq!(a.apply(&b.apply(&x)), acts[gh].apply(&x));
            }
        }
    }

    #[test]
    fn swap_moves_elementary_tensors() {
        let a = make_algebra(&[2, 1]).unwrap();
        let tp = TensorPower::new(&a, 2, Budget::default()).unwrap();
        let swap = tp.permutation_action(&[1, 0]).unwrap();
        let e = a.basis_matrix(1);
        let f = a.basis_matrix(4);
        assert_eq!(swap.apply(&kron(&e, &f)), kron(&f, &e));
    }

    #[test]
    fn symmetrizer_properties() {
        let m2 = make_algebra(&[2]).unwrap();
        let tp = TensorPower::new(&m2, 2, Budget::default()).unwrap();
        let e = m2.basis_matrix(1);
        let f = m2.basis_matrix(2);
        let expected = (kron(&e, &f) + kron(&f, &e)).scale(0.5);
        assert!(rel_diff(&tp.symmetrizer(&kron(&e, &f)).unwrap(), &expected) < 1e-15);
        assert!(rel_diff(&tp.symmetrizer(&identity(4)).unwrap(), &identity(4)) < 1e-15);

        let tp3 = TensorPower::new(&m2, 3, Budget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        let x = tp3.power().random_positive(&mut rng);
        let ex = tp3.symmetrizer(&x).unwrap();
        assert!(rel_diff(&tp3.symmetrizer(&ex).unwrap(), &ex) < 1e-14);
        assert!((ex.trace() - x.trace()).norm() < 1e-10 * x.norm());
        // x ≤ n! E(x)
        let gap = ex.scale(6.0) - &x;
        let eig = eig_hermitian(&gap, Tolerance::new(1e-8).unwrap()).unwrap();
        assert!(eig.values[0] > -1e-9 * x.norm());
        let eig = eig_hermitian(&ex, Tolerance::new(1e-8).unwrap()).unwrap();
        assert!(eig.values[0] > -1e-9 * x.norm());
    }

    #[test]
    fn symmetric_power_basis_counts() {
        let cases = [(vec![1, 1, 1], 2, 6u128), (vec![2], 2, 10), (vec![2, 3], 2, 91)];
        for (blocks, n, expected) in cases {
            let a = make_algebra(&blocks).unwrap();
            let tp = TensorPower::new(&a, n, Budget::default()).unwrap();
            let sb = tp.symmetric_power_basis();
            assert_eq!(sb.len() as u128, expected);
            assert_eq!(sb.len() as u128, orbit_count_burnside(a.dim(), n).unwrap());
            assert_eq!(sb.len() as u128, symmetric_power_dimension(a.dim(), n));
        }
        let big = make_algebra(&[2, 3]).unwrap();
        assert!(matches!(
            TensorPower::new(&big, 5, Budget::default()),
            Err(Error::Budget(_))
        ));
    }

    #[test]
    fn symmetric_basis_is_fixed_and_matches_symmetrizer_range() {
        let a = make_algebra(&[2, 1]).unwrap();
        let tp = TensorPower::new(&a, 2, Budget::default()).unwrap();
        let sb = tp.symmetric_power_basis();
        let (_, acts) = tp.all_actions().unwrap();
        let elems: Vec<CMatrix> = (0..sb.dim()).map(|i| sb.element(i)).collect();
        for e in &elems {
            for act in &acts {
                assert_eq!(&act.apply(e), e);
            }
        }
        let images: Vec<CMatrix> = (0..tp.power().dim())
            .map(|i| tp.symmetrizer(&tp.power().basis_matrix(i)).unwrap())
            .collect();
        let t8 = Tolerance::new(1e-8).unwrap();
        assert_eq!(rank(&flatten_columns(&images), t8), sb.dim());
        assert_eq!(rank(&flatten_columns(&elems), t8), sb.dim());
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let r = sb.random_element(&mut rng);
        assert_eq!(sb.coords(&r, tol()).unwrap().len(), sb.dim());
        assert!(sb.coords(&tp.power().basis_matrix(1), tol()).is_err());
    }

    #[test]
    fn gamma_properties() {
        let m2 = make_algebra(&[2]).unwrap();
        let tp = TensorPower::new(&m2, 2, Budget::default()).unwrap();
        assert_eq!(tp.gamma_n(&identity(2)), identity(4));
        assert_eq!(
            tp.gamma_n(&from_real_diagonal(&[1.0, 2.0])),
            from_real_diagonal(&[1.0, 2.0, 2.0, 4.0])
        );

        let tp3 = TensorPower::new(&m2, 3, Budget::default()).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let a = m2.random_element(&mut rng);
        let b = m2.random_element(&mut rng);
        assert!(rel_diff(&tp3.gamma_n(&(&a * &b)), &(tp3.gamma_n(&a) * tp3.gamma_n(&b))) < 1e-9);
        assert!(rel_diff(&tp3.gamma_n(&a.adjoint()), &tp3.gamma_n(&a).adjoint()) < 1e-14);
        let z = crate::linalg::c(0.3, -1.2);
        assert!(rel_diff(&tp3.gamma_n(&a.map(|x| x * z)), &tp3.gamma_n(&a).map(|x| x * z.powi(3))) < 1e-12);
        let sb = tp3.symmetric_power_basis();
        assert!(sb.coords(&tp3.gamma_n(&a), tol()).is_ok());

        let u = m2.random_unitary(&mut rng);
        let gu = tp3.gamma_n(&u);
        assert!((op_norm(&gu) - 1.0).abs() < 1e-10);
        assert!(rel_diff(&(gu.adjoint() * &gu), &identity(8)) < 1e-10);
    }

    #[test]
    fn d_gamma_properties() {
        let m2 = make_algebra(&[2]).unwrap();
        let tp = TensorPower::new(&m2, 2, Budget::default()).unwrap();
        assert_eq!(tp.d_gamma(&identity(2)), identity(4).scale(2.0));
        let mut rng = ChaCha8Rng::seed_from_u64(16);
        let a = m2.random_element(&mut rng);
        assert_eq!(tp.d_gamma(&a), kron(&a, &identity(2)) + kron(&identity(2), &a));

        let tp3 = TensorPower::new(&m2, 3, Budget::default()).unwrap();
        let b = m2.random_element(&mut rng);
        let lifted = kron(&kron(&b, &identity(2)), &identity(2));
        let lhs = tp3.symmetrizer(&lifted).unwrap().scale(6.0);
        assert!(rel_diff(&lhs, &tp3.d_gamma(&b).scale(2.0)) < 1e-12);
        assert!(rel_diff(&tp3.d_gamma(&b.adjoint()), &tp3.d_gamma(&b).adjoint()) < 1e-14);
    }

    #[test]
    fn generated_algebra_examples() {
        let t8 = Tolerance::new(1e-8).unwrap();
        assert_eq!(generated_star_algebra(&[identity(3)], 3, t8).unwrap().dim(), 1);

        let m2 = make_algebra(&[2]).unwrap();
        let tp = TensorPower::new(&m2, 2, Budget::default()).unwrap();
        let seeds: Vec<CMatrix> = m2.basis().iter().map(|e| tp.d_gamma(e)).collect();
        let gen = generated_star_algebra(&seeds, 4, t8).unwrap();
        assert_eq!(gen.dim(), 10);
        let sb = tp.symmetric_power_basis();
        for i in 0..sb.dim() {
            assert!(gen.contains(&sb.element(i), t8));
        }

        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let h = crate::linalg::random_hermitian(3, &mut rng);
        assert_eq!(generated_star_algebra(&[h], 3, t8).unwrap().dim(), 3);
    }

    #[test]
    fn square_map_detects_commutativity() {
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        let c3 = make_algebra(&[1, 1, 1]).unwrap();
        assert!(square_map_multiplicativity(&c3, 100, tol(), &mut rng).multiplicative);
        let m2 = make_algebra(&[2]).unwrap();
        assert!(!square_map_multiplicativity(&m2, 100, tol(), &mut rng).multiplicative);
        let m2c = make_algebra(&[2, 1]).unwrap();
        assert!(!square_map_multiplicativity(&m2c, 100, tol(), &mut rng).multiplicative);
    }

    #[test]
    fn representation_blocks() {
        let a = make_algebra(&[2, 1]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(19);
        let x = a.random_element(&mut rng);
        let y = a.random_element(&mut rng);
        let pi = Representation::new(&a, vec![2, 1]).unwrap();
        assert_eq!(pi.dim(), 5);
        assert!(!pi.is_irreducible());
        assert!(Representation::block(&a, 0).unwrap().is_irreducible());
        assert!(rel_diff(&pi.apply(&(&x * &y)), &(pi.apply(&x) * pi.apply(&y))) < 1e-12);
        assert!(rel_diff(&pi.apply(&x.adjoint()), &pi.apply(&x).adjoint()) < 1e-14);
    }
}
