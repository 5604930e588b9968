//! Finite groups, symmetric groups and their unitary irreducibles.
//!
//! Group elements are integer indices. A group is stored either as an explicit
//! multiplication table or as a list of permutations; symmetric groups use the
//! latter with elements in lexicographic order, so index 0 is the identity.
//!
//! Permutations are 0-based image vectors and compose as functions:
//! `(σρ)(j) = σ(ρ(j))`.

use std::collections::HashMap;

use crate::error::{invalid, Budget, Result};
use crate::linalg::{c, identity, CMatrix, ONE, ZERO};

pub type Perm = Vec<usize>;

pub fn compose(a: &[usize], b: &[usize]) -> Perm {
    b.iter().map(|&j| a[j]).collect()
}

pub fn invert(p: &[usize]) -> Perm {
    let mut out = vec![0; p.len()];
    for (j, &pj) in p.iter().enumerate() {
        out[pj] = j;
    }
    out
}

pub fn is_permutation(p: &[usize]) -> bool {
    let mut seen = vec![false; p.len()];
    p.iter().all(|&x| x < p.len() && !std::mem::replace(&mut seen[x], true))
}

/// All permutations of `0..n` in lexicographic order.
pub fn all_permutations(n: usize) -> Vec<Perm> {
    let mut current: Perm = (0..n).collect();
    let mut out = vec![current.clone()];
    // next-permutation iteration
    loop {
        let Some(i) = (1..n).rev().find(|&i| current[i - 1] < current[i]) else {
            return out;
        };
        let j = (i..n).rev().find(|&j| current[j] > current[i - 1]).unwrap();
        current.swap(i - 1, j);
        current[i..].reverse();
        out.push(current.clone());
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

pub fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

#[derive(Clone, Debug)]
enum Kind {
    Table {
        mult: Vec<Vec<usize>>,
    },
    Permutations {
        degree: usize,
        perms: Vec<Perm>,
        lookup: HashMap<Perm, usize>,
    },
}

/// A finite group with elements `0..order`.
#[derive(Clone, Debug)]
pub struct FiniteGroup {
    kind: Kind,
    inv: Vec<usize>,
    identity: usize,
    symmetric_degree: Option<usize>,
}

impl FiniteGroup {
    /// Group from a multiplication table `mult[a][b] = ab` and inverse list.
    pub fn from_table(mult: Vec<Vec<usize>>, inv: Vec<usize>) -> Result<Self> {
        let n = mult.len();
        if n == 0 {
            return Err(invalid("group table is empty"));
        }
        if inv.len() != n || mult.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return Err(invalid("group table must be square with entries below the order"));
        }
        let identity = (0..n)
            .find(|&e| (0..n).all(|g| mult[e][g] == g && mult[g][e] == g))
            .ok_or_else(|| invalid("group table has no identity"))?;
        for g in 0..n {
            if inv[g] >= n || mult[g][inv[g]] != identity || mult[inv[g]][g] != identity {
                return Err(invalid(format!("inverse of element {g} is wrong")));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mult[mult[a][b]][c] != mult[a][mult[b][c]] {
                        return Err(invalid(format!("table is not associative at ({a},{b},{c})")));
                    }
                }
            }
        }
        Ok(Self {
            kind: Kind::Table { mult },
            inv,
            identity,
            symmetric_degree: None,
        })
    }

    /// Group of permutations given as a closed list (checked).
    pub fn from_permutations(degree: usize, perms: Vec<Perm>) -> Result<Self> {
        if perms.is_empty() {
            return Err(invalid("permutation group needs at least one element"));
        }
        if perms.iter().any(|p| p.len() != degree || !is_permutation(p)) {
            return Err(invalid(format!("entries must be permutations of 0..{degree}")));
        }
        let g = Self::permutations_unchecked(degree, perms);
        if g.distinct_elements() != g.order() {
            return Err(invalid("duplicate permutations"));
        }
        for a in 0..g.order() {
            for b in 0..g.order() {
                if g.try_mul(a, b).is_none() {
                    return Err(invalid("permutation list is not closed under composition"));
                }
            }
        }
        Ok(g)
    }

    fn distinct_elements(&self) -> usize {
        match &self.kind {
            Kind::Permutations { lookup, .. } => lookup.len(),
            Kind::Table { mult } => mult.len(),
        }
    }

    fn permutations_unchecked(degree: usize, perms: Vec<Perm>) -> Self {
        let lookup: HashMap<Perm, usize> = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let id: Perm = (0..degree).collect();
        let identity = lookup.get(&id).copied().unwrap_or(0);
        let inv = perms
            .iter()
            .map(|p| lookup.get(&invert(p)).copied().unwrap_or(usize::MAX))
            .collect();
        Self {
            kind: Kind::Permutations { degree, perms, lookup },
            inv,
            identity,
            symmetric_degree: None,
        }
    }

    /// The symmetric group `S_n`, `1 ≤ n ≤ 7`, elements in lexicographic order.
    pub fn symmetric(n: usize) -> Result<Self> {
        if !(1..=7).contains(&n) {
            return Err(invalid(format!("symmetric group degree must be in 1..=7, got {n}")));
        }
        let mut g = Self::permutations_unchecked(n, all_permutations(n));
        g.symmetric_degree = Some(n);
        Ok(g)
    }

    /// The cyclic group `Z_m` as a table group.
    pub fn cyclic(m: usize) -> Result<Self> {
        if m == 0 {
            return Err(invalid("cyclic group order must be positive"));
        }
        let mult = (0..m).map(|a| (0..m).map(|b| (a + b) % m).collect()).collect();
        let inv = (0..m).map(|a| (m - a) % m).collect();
        Self::from_table(mult, inv)
    }

    pub fn order(&self) -> usize {
        self.inv.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    fn try_mul(&self, a: usize, b: usize) -> Option<usize> {
        match &self.kind {
            Kind::Table { mult } => Some(mult[a][b]),
            Kind::Permutations { perms, lookup, .. } => lookup.get(&compose(&perms[a], &perms[b])).copied(),
        }
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.try_mul(a, b).expect("group is closed")
    }

    /// `Some(n)` when this is the full symmetric group `S_n`.
    pub fn symmetric_degree(&self) -> Option<usize> {
        self.symmetric_degree
    }

    /// Degree of the permutation model, if the group has one.
    pub fn degree(&self) -> Option<usize> {
        match &self.kind {
            Kind::Permutations { degree, .. } => Some(*degree),
            Kind::Table { .. } => None,
        }
    }

    pub fn permutation(&self, g: usize) -> Option<&[usize]> {
        match &self.kind {
            Kind::Permutations { perms, .. } => Some(&perms[g]),
            Kind::Table { .. } => None,
        }
    }

    pub fn index_of(&self, p: &[usize]) -> Option<usize> {
        match &self.kind {
            Kind::Permutations { lookup, .. } => lookup.get(p).copied(),
            Kind::Table { .. } => None,
        }
    }

    /// Exhaustive check of associativity, identity and inverse laws.
    pub fn check_axioms(&self) -> bool {
        let n = self.order();
        let e = self.identity;
        (0..n).all(|g| self.mul(e, g) == g && self.mul(g, e) == g && self.mul(g, self.inv(g)) == e)
            && (0..n).all(|a| {
                (0..n).all(|b| {
                    let ab = self.mul(a, b);
                    (0..n).all(|c| self.mul(ab, c) == self.mul(a, self.mul(b, c)))
                })
            })
    }

    /// Left regular representation on `C^{|G|}`: `L(g) e_h = e_{gh}`.
    pub fn regular_rep(&self) -> UnitaryRep {
        let n = self.order();
        let matrices = (0..n)
            .map(|g| {
                let mut m = CMatrix::zeros(n, n);
                for h in 0..n {
                    m[(self.mul(g, h), h)] = ONE;
                }
                m
            })
            .collect();
        UnitaryRep {
            group: self.clone(),
            matrices,
        }
    }
}

/// A subgroup with its own element numbering and a left-coset decomposition of the parent.
#[derive(Clone, Debug)]
pub struct Subgroup {
    parent: FiniteGroup,
    group: FiniteGroup,
    elements: Vec<usize>,
    local: HashMap<usize, usize>,
    coset_reps: Vec<usize>,
    coset_of: Vec<usize>,
}

impl Subgroup {
    /// Subgroup from a list of parent indices; closure is verified.
    pub fn from_elements(parent: &FiniteGroup, elements: &[usize]) -> Result<Self> {
        let mut elems: Vec<usize> = elements.to_vec();
        elems.sort_unstable();
        elems.dedup();
        if elems.iter().any(|&g| g >= parent.order()) {
            return Err(invalid("subgroup element out of range"));
        }
        if !elems.contains(&parent.identity()) {
            return Err(invalid("subgroup must contain the identity"));
        }
        let set: std::collections::HashSet<usize> = elems.iter().copied().collect();
        for &a in &elems {
            for &b in &elems {
                if !set.contains(&parent.mul(a, b)) {
                    return Err(invalid("elements are not closed under multiplication"));
                }
            }
        }
        Ok(Self::build(parent, elems))
    }

    fn build(parent: &FiniteGroup, mut elems: Vec<usize>) -> Self {
        elems.sort_unstable();
        let e = parent.identity();
        elems.retain(|&g| g != e);
        elems.insert(0, e);
        let local: HashMap<usize, usize> = elems.iter().enumerate().map(|(i, &g)| (g, i)).collect();
        let group = match parent.degree() {
            Some(degree) => {
                let perms = elems.iter().map(|&g| parent.permutation(g).unwrap().to_vec()).collect();
                let mut g = FiniteGroup::permutations_unchecked(degree, perms);
                if g.order() == parent.order() {
                    g.symmetric_degree = parent.symmetric_degree();
                }
                g
            }
            None => {
                let mult = elems
                    .iter()
                    .map(|&a| elems.iter().map(|&b| local[&parent.mul(a, b)]).collect())
                    .collect();
                let inv = elems.iter().map(|&a| local[&parent.inv(a)]).collect();
                FiniteGroup {
                    kind: Kind::Table { mult },
                    inv,
                    identity: 0,
                    symmetric_degree: None,
                }
            }
        };
        // left cosets gH; the representative is the smallest index, identity first
        let mut coset_of = vec![usize::MAX; parent.order()];
        let mut coset_reps = Vec::new();
        let order: Vec<usize> = std::iter::once(e)
            .chain((0..parent.order()).filter(|&g| g != e))
            .collect();
        for g in order {
            if coset_of[g] != usize::MAX {
                continue;
            }
            let k = coset_reps.len();
            coset_reps.push(g);
            for &h in &elems {
                coset_of[parent.mul(g, h)] = k;
            }
        }
        Self {
            parent: parent.clone(),
            group,
            elements: elems,
            local,
            coset_reps,
            coset_of,
        }
    }

    pub fn whole(parent: &FiniteGroup) -> Self {
        Self::build(parent, (0..parent.order()).collect())
    }

    pub fn trivial(parent: &FiniteGroup) -> Self {
        Self::build(parent, vec![parent.identity()])
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    /// The subgroup as a standalone group; local index `i` is parent element `elements()[i]`.
    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn index(&self) -> usize {
        self.coset_reps.len()
    }

    pub fn local_index(&self, g: usize) -> Option<usize> {
        self.local.get(&g).copied()
    }

    /// Left coset representatives `g_0 = e, g_1, ...`, each minimal in its coset.
    pub fn coset_reps(&self) -> &[usize] {
        &self.coset_reps
    }

    /// Write `g = g_k h`; returns `(k, local index of h)`.
    pub fn decompose(&self, g: usize) -> (usize, usize) {
        let k = self.coset_of[g];
        let h = self.parent.mul(self.parent.inv(self.coset_reps[k]), g);
        (k, self.local[&h])
    }
}

/// Young subgroup `S_{q_1} × ··· × S_{q_m} ⊆ S_n` acting on consecutive position blocks.
pub fn young_subgroup(sn: &FiniteGroup, q: &[usize]) -> Result<Subgroup> {
    let n = sn
        .symmetric_degree()
        .ok_or_else(|| invalid("young_subgroup needs a symmetric group"))?;
    if q.contains(&0) || q.iter().sum::<usize>() != n {
        return Err(invalid(format!("{q:?} is not a composition of {n}")));
    }
    let mut block_of = Vec::with_capacity(n);
    for (k, &qk) in q.iter().enumerate() {
        block_of.extend(std::iter::repeat_n(k, qk));
    }
    let elems = (0..sn.order())
        .filter(|&g| {
            let p = sn.permutation(g).unwrap();
            (0..n).all(|j| block_of[p[j]] == block_of[j])
        })
        .collect();
    Ok(Subgroup::build(sn, elems))
}

/// Split a block-preserving permutation into its restrictions to each block of `q`.
pub fn young_factors(p: &[usize], q: &[usize]) -> Vec<Perm> {
    let mut out = Vec::with_capacity(q.len());
    let mut off = 0;
    for &qk in q {
        out.push((off..off + qk).map(|j| p[j] - off).collect());
        off += qk;
    }
    out
}

/// A partition `λ_1 ≥ λ_2 ≥ ··· > 0`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Partition(Vec<usize>);

impl Partition {
    pub fn new(parts: Vec<usize>) -> Result<Self> {
        if parts.is_empty() || parts.contains(&0) || parts.windows(2).any(|w| w[0] < w[1]) {
            return Err(invalid(format!("{parts:?} is not a partition")));
        }
        Ok(Self(parts))
    }

    pub fn parts(&self) -> &[usize] {
        &self.0
    }

    pub fn n(&self) -> usize {
        self.0.iter().sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// All partitions of `n ≥ 1`, in reverse lexicographic order starting with `(n)`.
    pub fn all(n: usize) -> Vec<Partition> {
        fn rec(rest: usize, max: usize, cur: &mut Vec<usize>, out: &mut Vec<Partition>) {
            if rest == 0 {
                out.push(Partition(cur.clone()));
                return;
            }
            for p in (1..=rest.min(max)).rev() {
                cur.push(p);
                rec(rest - p, p, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n > 0 {
            rec(n, n, &mut Vec::new(), &mut out);
        }
        out
    }

    fn cells(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.0
            .iter()
            .enumerate()
            .flat_map(|(r, &len)| (0..len).map(move |c| (r, c)))
    }

    fn column_length(&self, col: usize) -> usize {
        self.0.iter().filter(|&&len| len > col).count()
    }

    pub fn hook(&self, r: usize, col: usize) -> usize {
        (self.0[r] - col - 1) + (self.column_length(col) - r - 1) + 1
    }

    /// Dimension of the irreducible `S_n` representation: `n! / ∏ hooks`.
    pub fn dimension(&self) -> usize {
        let hooks: u128 = self.cells().map(|(r, c)| self.hook(r, c) as u128).product();
        (factorial(self.n()) / hooks) as usize
    }

    /// Standard Young tableaux; each is the list of `(row, col)` cells of `0, 1, ..., n-1`.
    pub fn standard_tableaux(&self) -> Vec<Vec<(usize, usize)>> {
        fn rec(
            shape: &[usize],
            filled: &mut Vec<usize>,
            cur: &mut Vec<(usize, usize)>,
            n: usize,
            out: &mut Vec<Vec<(usize, usize)>>,
        ) {
            if cur.len() == n {
                out.push(cur.clone());
                return;
            }
            for r in 0..shape.len() {
                let col = filled[r];
                if col < shape[r] && (r == 0 || filled[r - 1] > col) {
                    filled[r] += 1;
                    cur.push((r, col));
                    rec(shape, filled, cur, n, out);
                    cur.pop();
                    filled[r] -= 1;
                }
            }
        }
        let mut out = Vec::new();
        rec(&self.0, &mut vec![0; self.0.len()], &mut Vec::new(), self.n(), &mut out);
        out
    }
}

impl std::fmt::Display for Partition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|p| p.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// Number of semistandard tableaux of shape `λ` with entries in `1..=k` (hook-content formula).
pub fn ssyt_count(lambda: &Partition, k: usize) -> u128 {
    if lambda.len() > k {
        return 0;
    }
    let mut num: u128 = 1;
    let mut den: u128 = 1;
    for (r, col) in lambda.cells() {
        num *= (k + col - r) as u128;
        den *= lambda.hook(r, col) as u128;
    }
    num / den
}

/// A unitary representation: one matrix per group element.
#[derive(Clone, Debug)]
pub struct UnitaryRep {
    pub group: FiniteGroup,
    pub matrices: Vec<CMatrix>,
}

impl UnitaryRep {
    pub fn new(group: FiniteGroup, matrices: Vec<CMatrix>) -> Result<Self> {
        if matrices.len() != group.order() {
            return Err(invalid("one matrix per group element is required"));
        }
        let d = matrices[0].nrows();
        if matrices.iter().any(|m| m.nrows() != d || m.ncols() != d) {
            return Err(invalid("representation matrices must be square of equal size"));
        }
        Ok(Self { group, matrices })
    }

    pub fn dim(&self) -> usize {
        self.matrices.first().map(|m| m.nrows()).unwrap_or(0)
    }

    pub fn character(&self, g: usize) -> crate::linalg::C64 {
        self.matrices[g].trace()
    }

    /// Largest relative residual of `U(gh) = U(g)U(h)`, `U(e) = I` and unitarity.
    pub fn homomorphism_residual(&self) -> f64 {
        let g = &self.group;
        let d = self.dim();
        let mut worst = crate::linalg::rel_diff(&self.matrices[g.identity()], &identity(d));
        for a in 0..g.order() {
            let u = &self.matrices[a];
            worst = worst.max(crate::linalg::rel_diff(&(u.adjoint() * u), &identity(d)));
            for b in 0..g.order() {
                let lhs = &self.matrices[g.mul(a, b)];
                worst = worst.max(crate::linalg::rel_diff(lhs, &(u * &self.matrices[b])));
            }
        }
        worst
    }

    /// Orthogonal projection onto the joint fixed space: `(1/|G|) Σ U(g)`.
    pub fn fixed_projection(&self) -> CMatrix {
        let mut p = CMatrix::zeros(self.dim(), self.dim());
        for m in &self.matrices {
            p += m;
        }
        p.unscale(self.matrices.len() as f64)
    }

    /// Restriction to a subgroup, indexed by the subgroup's local numbering.
    pub fn restrict(&self, sub: &Subgroup) -> UnitaryRep {
        UnitaryRep {
            group: sub.group().clone(),
            matrices: sub.elements().iter().map(|&g| self.matrices[g].clone()).collect(),
        }
    }

    pub fn conjugate(&self) -> UnitaryRep {
        UnitaryRep {
            group: self.group.clone(),
            matrices: self.matrices.iter().map(|m| m.map(|z| z.conj())).collect(),
        }
    }
}

/// Young's orthogonal form matrix of the adjacent transposition `(i, i+1)`.
fn young_generator(
    tableaux: &[Vec<(usize, usize)>],
    lookup: &HashMap<Vec<(usize, usize)>, usize>,
    i: usize,
) -> CMatrix {
    let d = tableaux.len();
    let mut m = CMatrix::zeros(d, d);
    for (t, tab) in tableaux.iter().enumerate() {
        let (r0, c0) = tab[i];
        let (r1, c1) = tab[i + 1];
        let axial = (c1 as f64 - r1 as f64) - (c0 as f64 - r0 as f64);
        m[(t, t)] = c(1.0 / axial, 0.0);
        let mut swapped = tab.clone();
        swapped.swap(i, i + 1);
        if let Some(&s) = lookup.get(&swapped) {
            m[(s, t)] = c((1.0 - 1.0 / (axial * axial)).sqrt(), 0.0);
        }
    }
    m
}

/// Irreducible representation of `S_n` labelled by `λ`, in Young's orthogonal form.
pub fn sn_irrep(lambda: &Partition) -> Result<UnitaryRep> {
    let n = lambda.n();
    let group = FiniteGroup::symmetric(n)?;
    let tableaux = lambda.standard_tableaux();
    let lookup: HashMap<Vec<(usize, usize)>, usize> =
        tableaux.iter().cloned().enumerate().map(|(i, t)| (t, i)).collect();
    let gens: Vec<CMatrix> = (0..n.saturating_sub(1))
        .map(|i| young_generator(&tableaux, &lookup, i))
        .collect();
    let d = tableaux.len();
    let mut matrices: Vec<Option<CMatrix>> = vec![None; group.order()];
    matrices[group.identity()] = Some(identity(d));
    let mut queue = std::collections::VecDeque::from([group.identity()]);
    while let Some(g) = queue.pop_front() {
        let p = group.permutation(g).unwrap().to_vec();
        for (i, gen) in gens.iter().enumerate() {
            let mut s: Perm = (0..n).collect();
            s.swap(i, i + 1);
            let h = group.index_of(&compose(&s, &p)).unwrap();
            if matrices[h].is_none() {
                matrices[h] = Some(gen * matrices[g].as_ref().unwrap());
                queue.push_back(h);
            }
        }
    }
    let matrices = matrices
        .into_iter()
        .map(|m| m.expect("adjacent transpositions generate S_n"))
        .collect();
    UnitaryRep::new(group, matrices)
}

/// Tensor-factor index after permuting positions: output tuple has `t'_{σ(j)} = t_j`.
pub fn permute_multi_index(sigma: &[usize], digits: &[usize]) -> Vec<usize> {
    let mut out = vec![0; digits.len()];
    for (j, &d) in digits.iter().enumerate() {
        out[sigma[j]] = d;
    }
    out
}

/// Mixed-radix digits of `idx` in base `d`, first factor most significant.
pub fn digits_of(mut idx: usize, d: usize, n: usize) -> Vec<usize> {
    let mut out = vec![0; n];
    for slot in out.iter_mut().rev() {
        *slot = idx % d;
        idx /= d;
    }
    out
}

pub fn index_of_digits(digits: &[usize], d: usize) -> usize {
    digits.iter().fold(0, |acc, &x| acc * d + x)
}

/// Index map of the factor permutation `τ(σ)` on `(C^d)^{⊗n}`: basis vector `i` goes to `map[i]`.
pub fn factor_permutation_map(sigma: &[usize], d: usize) -> Vec<usize> {
    let n = sigma.len();
    let size = d.pow(n as u32);
    (0..size)
        .map(|i| index_of_digits(&permute_multi_index(sigma, &digits_of(i, d, n)), d))
        .collect()
}

pub fn permutation_matrix(map: &[usize]) -> CMatrix {
    let mut m = CMatrix::zeros(map.len(), map.len());
    for (i, &j) in map.iter().enumerate() {
        m[(j, i)] = ONE;
    }
    m
}

/// The factor-permuting representation `τ` of `S_n` on `(C^d)^{⊗n}`.
pub fn permutation_rep(n: usize, d: usize, budget: Budget) -> Result<UnitaryRep> {
    if d == 0 {
        return Err(invalid("local dimension must be positive"));
    }
    let size = (d as u128).checked_pow(n as u32).unwrap_or(u128::MAX);
    budget.check(size.min(usize::MAX as u128) as usize, "permutation_rep")?;
    let group = FiniteGroup::symmetric(n)?;
    let matrices = (0..group.order())
        .map(|g| permutation_matrix(&factor_permutation_map(group.permutation(g).unwrap(), d)))
        .collect();
    UnitaryRep::new(group, matrices)
}

/// Isotypic projection `(d_λ/n!) Σ conj(χ_λ(σ)) U(σ)` for a representation of `S_n`.
pub fn isotypic_projection(lambda: &Partition, u: &UnitaryRep) -> Result<CMatrix> {
    if u.group.symmetric_degree() != Some(lambda.n()) {
        return Err(invalid(
            "isotypic_projection needs a representation of S_n with n = |λ|",
        ));
    }
    let irrep = sn_irrep(lambda)?;
    let mut p = CMatrix::zeros(u.dim(), u.dim());
    for g in 0..u.group.order() {
        let chi = irrep.character(g).conj();
        if chi != ZERO {
            p += u.matrices[g].map(|z| z * chi);
        }
    }
    Ok(p.scale(irrep.dim() as f64 / u.group.order() as f64))
}
