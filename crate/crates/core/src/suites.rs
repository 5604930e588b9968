//! Named verification suites.
//!
//! Each suite runs a fixed list of numerical checks and records every outcome as a
//! [`Check`]. Reports serialize to JSON deterministically for a given seed.

use std::sync::Arc;

use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra::{
    generated_star_algebra, make_algebra, orbit_count_burnside, square_map_multiplicativity, symmetric_power_dimension,
    AlgebraSpan, FdCStarAlgebra, Representation, TensorPower,
};
use crate::classify::{non_sw_witness, sw_map_injectivity_check, wedderburn_crosscheck, SymmetricPower};
use crate::crossed::{
    convolve, corner_projection, fixed_point_algebra, integrated_form, involution, iota, ActionMaps, CompressedRep,
    CovariantPair, GroupAction,
};
use crate::error::{invalid, Budget, Result};
use crate::groups::{ssyt_count, young_subgroup, FiniteGroup, Partition, Subgroup, UnitaryRep};
use crate::induction::{commutant_restriction, fixed_point_residual, fixed_space_rank, induce};
use crate::linalg::{from_real_rows, haar_unitary, identity, rel_diff, CMatrix, Tolerance};
use crate::structure::{ergodic_bound_check, minimal_central_projections};

/// Settings shared by every computation driven from the command line.
#[derive(Clone, Copy, Debug, Default)]
pub struct RunConfig {
    pub tol: Tolerance,
    pub seed: u64,
    pub budget: Budget,
}

/// One assertion and the values it was decided on.
#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: Value,
}

#[derive(Clone, Debug, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub passed: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    fn new(suite: &str) -> Self {
        Self {
            suite: suite.to_string(),
            passed: true,
            checks: Vec::new(),
        }
    }

    fn check(&mut self, name: impl Into<String>, passed: bool, detail: Value) {
        self.passed &= passed;
        self.checks.push(Check {
            name: name.into(),
            passed,
            detail,
        });
    }
}

pub const SUITES: [&str; 10] = [
    "dimensions",
    "blocks",
    "classification",
    "crossed",
    "induction",
    "generation",
    "ergodic",
    "schur-weyl",
    "homogeneous",
    "commutativity",
];

/// Run a suite by name; `all` runs every suite in order.
pub fn run_suite(name: &str, cfg: &RunConfig) -> Result<Vec<SuiteReport>> {
    if name == "all" {
        return SUITES.iter().map(|s| run_one(s, cfg)).collect();
    }
    Ok(vec![run_one(name, cfg)?])
}

fn run_one(name: &str, cfg: &RunConfig) -> Result<SuiteReport> {
    match name {
        "dimensions" => dimensions(cfg),
        "blocks" => blocks(cfg),
        "classification" => classification(cfg),
        "crossed" => crossed(cfg),
        "induction" => induction(cfg),
        "generation" => generation(cfg),
        "ergodic" => ergodic(cfg),
        "schur-weyl" => schur_weyl(cfg),
        "homogeneous" => homogeneous(cfg),
        "commutativity" => commutativity(cfg),
        other => Err(invalid(format!("unknown suite '{other}'"))),
    }
}

/// The algebras used by the dimension and classification suites.
pub const TEST_ALGEBRAS: [&[usize]; 5] = [&[1, 1], &[1, 1, 1], &[2], &[2, 1], &[2, 3]];

fn label(blocks: &[usize]) -> String {
    blocks
        .iter()
        .map(|k| if *k == 1 { "C".to_string() } else { format!("M{k}") })
        .collect::<Vec<_>>()
        .join("+")
}

fn within_budget(alg: &FdCStarAlgebra, n: usize, budget: Budget) -> bool {
    (alg.ambient() as u128)
        .checked_pow(n as u32)
        .is_some_and(|s| s <= budget.max_ambient as u128)
}

fn dimensions(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("dimensions");
    for blocks in TEST_ALGEBRAS {
        let alg = make_algebra(blocks)?;
        for n in 1..=3 {
            let name = format!("dim S^{n}({})", label(blocks));
            if !within_budget(&alg, n, cfg.budget) {
                r.check(name, true, json!({"skipped": "budget"}));
                continue;
            }
            let tp = TensorPower::new(&alg, n, cfg.budget)?;
            let orbits = tp.symmetric_power_basis().len() as u128;
            let burnside = orbit_count_burnside(alg.dim(), n)?;
            let binom = symmetric_power_dimension(alg.dim(), n);
            r.check(
                name,
                orbits == binom && burnside == binom,
                json!({"orbits": orbits as u64, "burnside": burnside as u64, "binomial": binom as u64}),
            );
        }
    }
    Ok(r)
}

fn blocks(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("blocks");
    for (k, n) in [(2, 2), (2, 3), (3, 2)] {
        let sp = SymmetricPower::new(&make_algebra(&[k])?, n, cfg.budget)?;
        let numeric = minimal_central_projections(&sp.basis, cfg.seed, cfg.tol)?.sorted_block_dims();
        let mut expected: Vec<usize> = Partition::all(n)
            .iter()
            .filter(|l| l.len() <= k)
            .map(|l| ssyt_count(l, k) as usize)
            .collect();
        expected.sort_unstable_by(|a, b| b.cmp(a));
        r.check(
            format!("blocks of S^{n}(M{k})"),
            numeric == expected,
            json!({"numeric": numeric, "tableaux": expected}),
        );
    }
    Ok(r)
}

fn classification(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("classification");
    for blocks in TEST_ALGEBRAS {
        let alg = make_algebra(blocks)?;
        for n in 1..=3 {
            let name = format!("irreps of S^{n}({})", label(blocks));
            if !within_budget(&alg, n, cfg.budget) {
                r.check(name, true, json!({"skipped": "budget"}));
                continue;
            }
            let sp = SymmetricPower::new(&alg, n, cfg.budget)?;
            let report = wedderburn_crosscheck(&sp, cfg.tol, cfg.seed)?;
            let mut passed = report.passed();
            if blocks == [2, 3] && n == 2 {
                let mut dims = report.enumerated.clone();
                dims.sort_unstable();
                passed &= dims == [1, 3, 3, 6, 6] && report.sum_of_squares == 91;
            }
            r.check(name, passed, serde_json::to_value(&report)?);
        }
    }
    Ok(r)
}

/// `A^{⊗n}` with the defining representation and the factor-permuting unitaries, in block order.
pub fn tensor_covariant_pair(tp: &TensorPower, action: &GroupAction) -> Result<CovariantPair> {
    let power = tp.power();
    let pi = Representation::new(power, vec![1; power.blocks().len()])?;
    // π lists the blocks one after another, while τ acts on the Kronecker-ordered ambient space
    let order: Vec<usize> = (0..power.blocks().len())
        .flat_map(|b| power.support(b).to_vec())
        .collect();
    let matrices = (0..action.group().order())
        .map(|g| {
            let tau = tp
                .permutation_action(action.group().permutation(g).expect("symmetric group"))?
                .ambient_unitary();
            Ok(CMatrix::from_fn(order.len(), order.len(), |r, c| {
                tau[(order[r], order[c])]
            }))
        })
        .collect::<Result<Vec<_>>>()?;
    CovariantPair::new(Arc::new(pi), UnitaryRep::new(action.group().clone(), matrices)?)
}

const CORNER_SAMPLES: usize = 50;
const CORNER_TOL: f64 = 1e-9;

fn crossed(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("crossed");
    for (n, blocks) in [(2, &[1, 1][..]), (2, &[2][..]), (3, &[1, 1][..]), (3, &[2][..])] {
        let alg = make_algebra(blocks)?;
        let tp = TensorPower::new(&alg, n, cfg.budget)?;
        let action = GroupAction::from_tensor_power(&tp)?;
        let cp = tensor_covariant_pair(&tp, &action)?;
        let fixed = fixed_point_algebra(&action, cfg.tol)?;
        let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
        let base = if blocks.len() > 1 {
            format!("({})", label(blocks))
        } else {
            label(blocks)
        };
        let system = format!("S_{n} on {base}^{{⊗{n}}}");

        let p = corner_projection(&action);
        let proj = convolve(&action, &p, &p)?
            .distance(&p)
            .max(involution(&action, &p)?.distance(&p));
        r.check(
            format!("{system}: p = p* = p²"),
            proj < CORNER_TOL,
            json!({"residual": proj}),
        );

        let pu = integrated_form(&cp, &action, &p)?;
        let fixed_proj = cp.fixed_projection();
        let mut onto = rel_diff(&pu, &fixed_proj)
            .max(rel_diff(&(&pu * &pu), &pu))
            .max(rel_diff(&pu.adjoint(), &pu));
        for u in &cp.u.matrices {
            onto = onto.max(rel_diff(&(u * &pu), &pu));
        }
        r.check(
            format!("{system}: Π(p) = P_U projects onto H^G"),
            onto < CORNER_TOL,
            json!({"residual": onto}),
        );

        let (mut mult, mut star, mut comp) = (0f64, 0f64, 0f64);
        for _ in 0..CORNER_SAMPLES {
            let x = fixed.random_element(&mut rng as &mut dyn RngCore);
            let y = fixed.random_element(&mut rng as &mut dyn RngCore);
            let ix = iota(&action, &x, cfg.tol)?;
            let iy = iota(&action, &y, cfg.tol)?;
            mult = mult.max(convolve(&action, &ix, &iy)?.distance(&iota(&action, &(&x * &y), cfg.tol)?));
            star = star.max(involution(&action, &ix)?.distance(&iota(&action, &x.adjoint(), cfg.tol)?));
            let lhs = integrated_form(&cp, &action, &ix)?;
            comp = comp.max(rel_diff(&lhs, &(cp.pi.apply(&x) * &pu)));
        }
        r.check(
            format!("{system}: ι multiplicative"),
            mult < CORNER_TOL,
            json!({"residual": mult, "samples": CORNER_SAMPLES}),
        );
        r.check(
            format!("{system}: ι star-preserving"),
            star < CORNER_TOL,
            json!({"residual": star, "samples": CORNER_SAMPLES}),
        );
        r.check(
            format!("{system}: Π(ι(x)) = π(x)P_U"),
            comp < CORNER_TOL,
            json!({"residual": comp, "samples": CORNER_SAMPLES}),
        );
    }
    Ok(r)
}

const INDUCTION_TOL: f64 = 1e-8;

/// Covariant pair of the Young subgroup `S_q` on block `tuple` of `A^{⊗n}`, conjugated by a Haar unitary.
fn young_base_pair(
    sp: &SymmetricPower,
    sub: &Subgroup,
    tuple: &[usize],
    rng: &mut ChaCha8Rng,
) -> Result<CovariantPair> {
    let m = sp.base().blocks().len();
    let block = tuple.iter().fold(0, |acc, &b| acc * m + b);
    let supp = sp.tp.power().support(block).to_vec();
    let w = haar_unitary(supp.len(), rng);
    let matrices = sub
        .elements()
        .iter()
        .map(|&g| {
            let tau = sp
                .tp
                .permutation_action(sp.action.group().permutation(g).expect("symmetric group"))?
                .ambient_unitary();
            let local = CMatrix::from_fn(supp.len(), supp.len(), |r, s| tau[(supp[r], supp[s])]);
            Ok(&w * local * w.adjoint())
        })
        .collect::<Result<Vec<_>>>()?;
    let pi = Representation::block(sp.tp.power(), block)?;
    let conjugated = CompressedRep::new(Arc::new(pi), w.adjoint())?;
    CovariantPair::new(Arc::new(conjugated), UnitaryRep::new(sub.group().clone(), matrices)?)
}

fn induction(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("induction");
    let sp = SymmetricPower::new(&make_algebra(&[2, 1])?, 3, cfg.budget)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let cases: [(&str, &[usize], [usize; 3]); 5] = [
        ("trivial", &[1, 1, 1], [0, 0, 1]),
        ("trivial", &[1, 1, 1], [0, 1, 0]),
        ("S_2", &[2, 1], [0, 0, 1]),
        ("S_2", &[2, 1], [0, 0, 0]),
        ("S_2", &[2, 1], [1, 1, 0]),
    ];
    for (g0, q, tuple) in cases {
        let sub = young_subgroup(sp.action.group(), q)?;
        let base = young_base_pair(&sp, &sub, &tuple, &mut rng)?;
        let ind = induce(&base, &sp.action, &sub, cfg.tol)?;
        let case = format!("G_0 = {g0}, block {tuple:?}");
        let (base_rank, ind_rank) = (fixed_space_rank(&base, cfg.tol), fixed_space_rank(&ind.result, cfg.tol));
        let iso = fixed_point_residual(&ind, cfg.tol)?;
        r.check(
            format!("{case}: rank H^G = rank H_0^G_0"),
            base_rank == ind_rank && iso < INDUCTION_TOL,
            json!({"base": base_rank, "induced": ind_rank, "isometry_residual": iso}),
        );
        for j in 0..ind.num_blocks() {
            let phi = commutant_restriction(&ind, j, cfg.tol, cfg.seed)?;
            r.check(
                format!("{case}: Φ_{j} is an isomorphism"),
                phi.injective() && phi.surjective() && phi.residual < INDUCTION_TOL,
                json!({"domain": phi.domain_dim, "target": phi.target_dim, "rank": phi.image_rank, "residual": phi.residual}),
            );
        }
    }
    Ok(r)
}

fn generation(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("generation");
    let t8 = Tolerance::new(1e-8)?;
    for (blocks, n) in [(&[2][..], 2), (&[2][..], 3), (&[1, 1, 1][..], 3)] {
        let alg = make_algebra(blocks)?;
        let tp = TensorPower::new(&alg, n, cfg.budget)?;
        let action = GroupAction::from_tensor_power(&tp)?;
        let seeds: Vec<CMatrix> = alg.basis().iter().map(|e| tp.d_gamma(e)).collect();
        let generated = generated_star_algebra(&seeds, tp.ambient(), t8)?;
        let fixed = fixed_point_algebra(&action, t8)?;
        let same = generated.dim() == fixed.dim() && generated.same_span(&fixed, t8);
        r.check(
            format!("alg(dΓ) = S^{n}({})", label(blocks)),
            same,
            json!({"generated": generated.dim(), "fixed": fixed.dim()}),
        );
    }
    Ok(r)
}

/// The Klein four-group acting on `M_2` by conjugation with `1, X, Z, XZ`.
pub fn klein_pauli_action(tol: Tolerance) -> Result<GroupAction> {
    let a = make_algebra(&[2])?;
    let table = vec![vec![0, 1, 2, 3], vec![1, 0, 3, 2], vec![2, 3, 0, 1], vec![3, 2, 1, 0]];
    let klein = FiniteGroup::from_table(table, vec![0, 1, 2, 3])?;
    let x = from_real_rows(2, 2, &[0.0, 1.0, 1.0, 0.0]);
    let z = from_real_rows(2, 2, &[1.0, 0.0, 0.0, -1.0]);
    let paulis = [identity(2), x.clone(), z.clone(), &x * &z];
    let basis = a.basis();
    let mut maps = Vec::new();
    for p in &paulis {
        let mut m = CMatrix::zeros(4, 4);
        for (col, e) in basis.iter().enumerate() {
            let moved = a.coords(&(p * e * p.adjoint()), tol)?;
            m.column_mut(col).copy_from_slice(&moved.coeffs);
        }
        maps.push(m);
    }
    GroupAction::new(klein, a, ActionMaps::Linear(maps), tol)
}

fn ergodic(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("ergodic");
    let s2 = FiniteGroup::symmetric(2)?;
    let s3 = FiniteGroup::symmetric(3)?;
    let z3 = FiniteGroup::cyclic(3)?;
    let perm_action = |g: &FiniteGroup, d: usize| -> Result<GroupAction> {
        let maps = (0..g.order())
            .map(|x| match g.permutation(x) {
                Some(p) => p.to_vec(),
                None => (0..d).map(|i| (i + x) % d).collect(),
            })
            .collect();
        GroupAction::new(
            g.clone(),
            make_algebra(&vec![1; d])?,
            ActionMaps::Permutation(maps),
            cfg.tol,
        )
    };
    let cases = vec![
        ("S_2 swap on C^2", perm_action(&s2, 2)?),
        ("S_3 on C^3", perm_action(&s3, 3)?),
        ("Z_3 rotation on C^3", perm_action(&z3, 3)?),
        ("Klein group on M_2", klein_pauli_action(cfg.tol)?),
        (
            "trivial S_3 on C",
            GroupAction::trivial(s3.clone(), make_algebra(&[1])?),
        ),
        (
            "S_2 on M_2^{⊗2}",
            GroupAction::tensor_permutation(&make_algebra(&[2])?, 2, cfg.budget)?,
        ),
    ];
    for (name, action) in cases {
        let rep = ergodic_bound_check(&action, cfg.tol)?;
        r.check(
            format!("{name}: dim A ≤ |G| when ergodic"),
            rep.bound_holds(),
            json!({"ergodic": rep.is_ergodic, "dim_a": rep.dim_a, "order": rep.group_order, "fixed_dim": rep.fixed_dim}),
        );
        if name.starts_with("S_2 swap") {
            r.check(
                "swap on C^2 attains equality",
                rep.is_ergodic && rep.dim_a == 2 && rep.group_order == 2,
                json!({"dim_a": rep.dim_a, "order": rep.group_order}),
            );
        }
    }
    Ok(r)
}

fn schur_weyl(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("schur-weyl");
    let alg = make_algebra(&[2, 3])?;
    let inj = sw_map_injectivity_check(&alg, 3, cfg.budget, cfg.tol, cfg.seed)?;
    r.check(
        "Schur–Weyl map injective on M2+M3 up to n = 3",
        inj.injective(),
        serde_json::to_value(&inj)?,
    );
    let sp = SymmetricPower::new(&alg, 2, cfg.budget)?;
    let (_, witness) = non_sw_witness(&sp, 0, 1, cfg.tol, cfg.seed)?;
    r.check(
        "π_1⊗π_2 is irreducible and outside the Schur–Weyl image",
        witness.is_witness() && witness.dim == 6,
        serde_json::to_value(&witness)?,
    );
    Ok(r)
}

const HOMOGENEOUS_SAMPLES: usize = 100;

fn homogeneous(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("homogeneous");
    let a = make_algebra(&[2])?;
    let tp = TensorPower::new(&a, 2, cfg.budget)?;
    let phi = |x: &CMatrix| crate::linalg::direct_sum(&[x.clone(), tp.gamma_n(x)]).expect("square blocks");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let samples: Vec<CMatrix> = (0..HOMOGENEOUS_SAMPLES).map(|_| a.random_element(&mut rng)).collect();
    let (_, report) = crate::classify::homogeneous_components(&phi, 2, &a.unit(), &samples, cfg.tol)?;
    let mut detail = serde_json::to_value(&report)?;
    detail["samples"] = json!(HOMOGENEOUS_SAMPLES);
    r.check(
        "Γ_1 ⊕ Γ_2 on M_2 splits into degrees 1 and 2",
        report.max_residual() < 1e-9 && report.ranks == [0, 2, 4],
        detail,
    );
    Ok(r)
}

fn commutativity(cfg: &RunConfig) -> Result<SuiteReport> {
    let mut r = SuiteReport::new("commutativity");
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    for (blocks, commutative) in [(&[1, 1, 1][..], true), (&[2][..], false), (&[2, 1][..], false)] {
        let alg = make_algebra(blocks)?;
        let rep = square_map_multiplicativity(&alg, 100, cfg.tol, &mut rng);
        r.check(
            format!("x ↦ x² multiplicative on {} is {commutative}", label(blocks)),
            rep.multiplicative == commutative,
            json!({"multiplicative": rep.multiplicative, "trials": rep.trials_run, "worst_residual": rep.worst_residual}),
        );
    }
    Ok(r)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_suite_is_rejected() {
        assert!(run_suite("nope", &RunConfig::default()).is_err());
    }

    #[test]
    fn cheap_suites_pass() {
        for name in ["dimensions", "ergodic", "commutativity", "homogeneous", "generation"] {
            let reports = run_suite(name, &RunConfig::default()).unwrap();
            assert!(reports[0].passed, "{:#?}", reports[0]);
        }
    }

    #[test]
    fn klein_action_is_ergodic_with_equality() {
        let rep =
            ergodic_bound_check(&klein_pauli_action(Tolerance::default()).unwrap(), Tolerance::default()).unwrap();
        assert!(rep.is_ergodic);
        assert_eq!((rep.dim_a, rep.group_order), (4, 4));
    }
}
