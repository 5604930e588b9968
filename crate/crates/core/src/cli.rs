//! The `symcross` command line.
//!
//! Every subcommand produces a JSON value; the plain-text output is a table view of it.
//! Exit codes: 0 success, 1 numerical failure, 2 bad input, 3 budget exceeded,
//! 4 a verification failed.

use std::path::PathBuf;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};

use crate::algebra::{symmetric_power_dimension, AlgebraSpan, Representation, TensorPower};
use crate::classify::{
    enumerate_sn_irreps, homogeneous_components, realize_sn_irrep, schur_weyl_rep, wedderburn_crosscheck,
    IrrepDescriptor, SymmetricPower,
};
use crate::crossed::{
    convolve, corner_projection, fixed_point_algebra, integrated_form, involution, iota, CovariantPair,
};
use crate::error::{invalid, Budget, Error, Result};
use crate::formats::{parse_list, render_table, MapsSpec, SpecFile};
use crate::groups::{young_subgroup, Partition, Subgroup, UnitaryRep};
use crate::induction::{commutant_restriction, fixed_point_residual, fixed_space_rank, induce};
use crate::linalg::{identity, rank, rel_diff, CMatrix, Tolerance};
use crate::structure::{commutant_dim, equivalent, minimal_central_projections};
use crate::suites::{run_suite, tensor_covariant_pair, RunConfig};

#[derive(Debug, Parser)]
#[command(
    name = "symcross",
    version,
    about = "Symmetric powers, crossed products and their irreducible representations"
)]
pub struct Cli {
    /// Numerical tolerance.
    #[arg(long, global = true, default_value_t = 1e-9)]
    pub tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Print JSON instead of a table.
    #[arg(long, global = true)]
    pub json: bool,
    /// Largest ambient matrix size any step may allocate.
    #[arg(long, global = true, default_value_t = 2000)]
    pub budget: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct AlgebraArgs {
    /// Block sizes of the algebra, e.g. `2,3` for M2 ⊕ M3.
    #[arg(long, conflicts_with = "spec")]
    pub blocks: Option<String>,
    /// JSON spec file.
    #[arg(long)]
    pub spec: Option<PathBuf>,
    /// Tensor power.
    #[arg(long)]
    pub n: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Dimension and Wedderburn blocks of S^n(A).
    Sympow(AlgebraArgs),
    /// Enumerate the irreducible representations of S^n(A).
    Classify {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Compare with the numeric decomposition and realize every irrep.
        #[arg(long)]
        crosscheck: bool,
    },
    /// Corner identities of the crossed product for a group action.
    Crossed(AlgebraArgs),
    /// Induce a covariant pair from a Young subgroup of S_n acting on A^{⊗n}.
    Induce {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Young composition of n, e.g. `2,1`; defaults to the trivial subgroup.
        #[arg(long)]
        young: Option<String>,
        /// Block of A for each tensor factor, constant on each part of the composition.
        #[arg(long)]
        block: String,
    },
    /// The Schur–Weyl irrep of S^n(A) for one block and one partition.
    SchurWeyl {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Block of A carrying the representation.
        #[arg(long, default_value_t = 0)]
        block: usize,
        /// Partition of n, e.g. `2,1`; n defaults to its size.
        #[arg(long)]
        lambda: String,
    },
    /// Homogeneous components of x ↦ ⊕_d x^{⊗d}.
    Homog {
        #[command(flatten)]
        alg: AlgebraArgs,
        /// Degrees present in the map, e.g. `1,2`.
        #[arg(long, default_value = "1,2")]
        degrees: String,
        /// Degree bound; defaults to the largest degree.
        #[arg(long)]
        n_max: Option<usize>,
        #[arg(long, default_value_t = 100)]
        samples: usize,
    },
    /// Run a named verification suite (`all` runs every suite).
    Verify { suite: String },
}

/// Result of one command: its JSON value and whether every check in it passed.
pub struct Outcome {
    pub value: Value,
    pub passed: bool,
    pub lines: Option<String>,
}

impl Outcome {
    fn new(value: Value, passed: bool) -> Self {
        Self {
            value,
            passed,
            lines: None,
        }
    }

    pub fn render(&self, json: bool) -> String {
        if json {
            let mut s = serde_json::to_string_pretty(&self.value).expect("JSON values serialize");
            s.push('\n');
            s
        } else {
            self.lines.clone().unwrap_or_else(|| render_table(&self.value))
        }
    }
}

pub fn exit_code(err: &Error) -> i32 {
    match err {
        Error::InvalidInput(_) | Error::Shape(_) | Error::Json(_) => 2,
        Error::Budget(_) => 3,
        Error::Verification(_) => 4,
        Error::NotHermitian(_) | Error::Numerical(_) => 1,
    }
}

struct Loaded {
    spec: SpecFile,
    n: Option<usize>,
}

fn load(args: &AlgebraArgs) -> Result<Loaded> {
    let spec = match (&args.blocks, &args.spec) {
        (Some(b), None) => SpecFile {
            algebra: crate::formats::AlgebraSpec { blocks: parse_list(b)? },
            n: args.n,
            group: None,
            maps: None,
        },
        (None, Some(path)) => SpecFile::read(path)?,
        _ => return Err(invalid("give exactly one of --blocks or --spec")),
    };
    let n = args.n.or(spec.n);
    Ok(Loaded { spec, n })
}

fn need_n(l: &Loaded) -> Result<usize> {
    l.n.ok_or_else(|| invalid("--n is required"))
}

pub fn execute(cli: &Cli) -> Result<Outcome> {
    let cfg = RunConfig {
        tol: Tolerance::new(cli.tol)?,
        seed: cli.seed,
        budget: Budget::new(cli.budget)?,
    };
    match &cli.command {
        Command::Sympow(args) => sympow(args, &cfg),
        Command::Classify { alg, crosscheck } => classify(alg, *crosscheck, &cfg),
        Command::Crossed(args) => crossed(args, &cfg),
        Command::Induce { alg, young, block } => induce_cmd(alg, young.as_deref(), block, &cfg),
        Command::SchurWeyl { alg, block, lambda } => schur_weyl(alg, *block, lambda, &cfg),
        Command::Homog {
            alg,
            degrees,
            n_max,
            samples,
        } => homog(alg, degrees, *n_max, *samples, &cfg),
        Command::Verify { suite } => verify(suite, &cfg),
    }
}

fn sympow(args: &AlgebraArgs, cfg: &RunConfig) -> Result<Outcome> {
    let l = load(args)?;
    let n = need_n(&l)?;
    let alg = l.spec.algebra.build()?;
    let sp = SymmetricPower::new(&alg, n, cfg.budget)?;
    let report = minimal_central_projections(&sp.basis, cfg.seed, cfg.tol)?;
    let binom = symmetric_power_dimension(alg.dim(), n);
    let dim = sp.basis.len() as u128;
    let passed = dim == binom && report.linear_dim() as u128 == binom;
    Ok(Outcome::new(
        json!({
            "algebra": alg.blocks(),
            "n": n,
            "dimension": dim as u64,
            "binomial": binom as u64,
            "block_dims": report.block_dims,
            "multiplicities": report.multiplicities,
            "binomial_check": passed,
        }),
        passed,
    ))
}

fn classify(args: &AlgebraArgs, crosscheck: bool, cfg: &RunConfig) -> Result<Outcome> {
    let l = load(args)?;
    let n = need_n(&l)?;
    let alg = l.spec.algebra.build()?;
    let descs = enumerate_sn_irreps(&alg, n)?;
    let sum: u128 = descs.iter().map(|d| d.dim * d.dim).sum();
    let binom = symmetric_power_dimension(alg.dim(), n);
    let mut passed = sum == binom;
    let mut value = json!({
        "algebra": alg.blocks(),
        "n": n,
        "descriptors": descs,
        "sum_of_squares": sum as u64,
        "binomial": binom as u64,
        "sum_of_squares_check": sum == binom,
    });
    if crosscheck {
        let sp = SymmetricPower::new(&alg, n, cfg.budget)?;
        let report = wedderburn_crosscheck(&sp, cfg.tol, cfg.seed)?;
        let realized = realize_all(&sp, &descs, cfg)?;
        let ok = report.passed() && realized.iter().all(|r| r["irreducible"] == json!(true));
        passed &= ok;
        value["crosscheck"] = json!({
            "numeric": report.numeric,
            "enumerated": report.enumerated.iter().map(|&d| d as u64).collect::<Vec<_>>(),
            "realized": realized,
            "result": if ok { "PASS" } else { "FAIL" },
        });
    }
    Ok(Outcome::new(value, passed))
}

fn realize_all(sp: &SymmetricPower, descs: &[IrrepDescriptor], cfg: &RunConfig) -> Result<Vec<Value>> {
    descs
        .iter()
        .map(|d| {
            let rep = realize_sn_irrep(sp, d, cfg.tol)?;
            let irreducible = commutant_dim(&rep, cfg.tol, cfg.seed)? == 1;
            Ok(json!({"dim": rep.dim(), "irreducible": irreducible}))
        })
        .collect()
}

const SAMPLES: usize = 50;

fn crossed(args: &AlgebraArgs, cfg: &RunConfig) -> Result<Outcome> {
    let l = load(args)?;
    let mut spec = l.spec.clone();
    spec.n = l.n;
    let action = spec.action(cfg.budget, cfg.tol)?;
    let alg = action.algebra().clone();
    let g = action.group().clone();
    let cp = match (&spec.group, &spec.maps) {
        (None, _) | (_, Some(MapsSpec::Tensor)) => {
            let tp = TensorPower::new(&spec.algebra.build()?, g.symmetric_degree().unwrap_or(1), cfg.budget)?;
            tensor_covariant_pair(&tp, &action)?
        }
        _ => {
            // the regular pair: induced from the defining representation of the trivial subgroup
            cfg.budget.check(alg.ambient() * g.order(), "regular covariant pair")?;
            let trivial = Subgroup::trivial(&g);
            let pi0 = Representation::new(&alg, vec![1; alg.blocks().len()])?;
            let v = UnitaryRep::new(trivial.group().clone(), vec![identity(alg.ambient())])?;
            let base = CovariantPair::new(Arc::new(pi0), v)?;
            induce(&base, &action, &trivial, cfg.tol)?.result
        }
    };

    let fixed = fixed_point_algebra(&action, cfg.tol)?;
    let p = corner_projection(&action);
    let proj = convolve(&action, &p, &p)?
        .distance(&p)
        .max(involution(&action, &p)?.distance(&p));
    let pu = integrated_form(&cp, &action, &p)?;
    let onto = rel_diff(&pu, &cp.fixed_projection());
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let (mut mult, mut star, mut comp) = (0f64, 0f64, 0f64);
    for _ in 0..SAMPLES {
        let x = fixed.random_element(&mut rng as &mut dyn RngCore);
        let y = fixed.random_element(&mut rng as &mut dyn RngCore);
        let ix = iota(&action, &x, cfg.tol)?;
        mult = mult.max(convolve(&action, &ix, &iota(&action, &y, cfg.tol)?)?.distance(&iota(
            &action,
            &(&x * &y),
            cfg.tol,
        )?));
        star = star.max(involution(&action, &ix)?.distance(&iota(&action, &x.adjoint(), cfg.tol)?));
        comp = comp.max(rel_diff(&integrated_form(&cp, &action, &ix)?, &(cp.pi.apply(&x) * &pu)));
    }
    let worst = proj.max(onto).max(mult).max(star).max(comp);
    Ok(Outcome::new(
        json!({
            "group_order": g.order(),
            "algebra_dim": alg.dim(),
            "fixed_point_dim": fixed.dim(),
            "pair_dim": cp.dim(),
            "rank_p_u": rank(&pu, cfg.tol),
            "residuals": {
                "p_projection": proj,
                "pi_p_equals_p_u": onto,
                "iota_multiplicative": mult,
                "iota_star": star,
                "pi_iota": comp,
            },
            "samples": SAMPLES,
            "passed": worst < cfg.tol.eps,
        }),
        worst < cfg.tol.eps,
    ))
}

fn induce_cmd(args: &AlgebraArgs, young: Option<&str>, block: &str, cfg: &RunConfig) -> Result<Outcome> {
    let l = load(args)?;
    let n = need_n(&l)?;
    let alg = l.spec.algebra.build()?;
    let q = match young {
        Some(s) => parse_list(s)?,
        None => vec![1; n],
    };
    let tuple = parse_list(block)?;
    if tuple.len() != n || tuple.iter().any(|&b| b >= alg.blocks().len()) {
        return Err(invalid(format!("--block needs {n} block indices of the algebra")));
    }
    let sp = SymmetricPower::new(&alg, n, cfg.budget)?;
    let sub = young_subgroup(sp.action.group(), &q)?;
    let mut start = 0;
    for &qk in &q {
        if tuple[start..start + qk].iter().any(|&b| b != tuple[start]) {
            return Err(invalid(
                "--block must be constant on each part of the Young composition",
            ));
        }
        start += qk;
    }
    let m = alg.blocks().len();
    let pb = tuple.iter().fold(0, |acc, &b| acc * m + b);
    let supp = sp.tp.power().support(pb).to_vec();
    let matrices = sub
        .elements()
        .iter()
        .map(|&g| {
            let tau = sp
                .tp
                .permutation_action(sp.action.group().permutation(g).expect("symmetric group"))?
                .ambient_unitary();
            Ok(CMatrix::from_fn(supp.len(), supp.len(), |r, s| tau[(supp[r], supp[s])]))
        })
        .collect::<Result<Vec<_>>>()?;
    let base = CovariantPair::new(
        Arc::new(Representation::block(sp.tp.power(), pb)?),
        UnitaryRep::new(sub.group().clone(), matrices)?,
    )?;
    let ind = induce(&base, &sp.action, &sub, cfg.tol)?;
    let iso = fixed_point_residual(&ind, cfg.tol)?;
    let (r0, r1) = (fixed_space_rank(&base, cfg.tol), fixed_space_rank(&ind.result, cfg.tol));
    let mut restrictions = Vec::new();
    let mut passed = r0 == r1 && iso < 1e-8;
    for j in 0..ind.num_blocks() {
        let phi = commutant_restriction(&ind, j, cfg.tol, cfg.seed)?;
        passed &= phi.injective() && phi.surjective() && phi.residual < 1e-8;
        restrictions.push(json!({
            "block": j,
            "domain_dim": phi.domain_dim,
            "target_dim": phi.target_dim,
            "image_rank": phi.image_rank,
            "residual": phi.residual,
        }));
    }
    Ok(Outcome::new(
        json!({
            "n": n,
            "young": q,
            "block": tuple,
            "index": ind.num_blocks(),
            "base_dim": base.dim(),
            "induced_dim": ind.dim(),
            "fixed_rank_base": r0,
            "fixed_rank_induced": r1,
            "fixed_isometry_residual": iso,
            "restrictions": restrictions,
            "passed": passed,
        }),
        passed,
    ))
}

fn schur_weyl(args: &AlgebraArgs, block: usize, lambda: &str, cfg: &RunConfig) -> Result<Outcome> {
    let l = load(args)?;
    let alg = l.spec.algebra.build()?;
    let lambda = Partition::new(parse_list(lambda)?)?;
    let n = l.n.unwrap_or(lambda.n());
    if n != lambda.n() {
        return Err(invalid(format!("{lambda} is not a partition of {n}")));
    }
    let sp = SymmetricPower::new(&alg, n, cfg.budget)?;
    let rep = schur_weyl_rep(&sp, block, &lambda)?;
    let irreducible = commutant_dim(&rep, cfg.tol, cfg.seed)? == 1;
    let desc = IrrepDescriptor::new(&alg, vec![block], vec![lambda.parts().to_vec()])?;
    let realized = realize_sn_irrep(&sp, &desc, cfg.tol)?;
    let same = equivalent(&rep, &realized, cfg.tol, cfg.seed)?;
    Ok(Outcome::new(
        json!({
            "algebra": alg.blocks(),
            "block": block,
            "lambda": lambda.parts(),
            "dim": rep.dim(),
            "expected_dim": desc.dim as u64,
            "irreducible": irreducible,
            "equivalent_to_realization": same,
        }),
        irreducible && same && rep.dim() as u128 == desc.dim,
    ))
}

fn homog(args: &AlgebraArgs, degrees: &str, n_max: Option<usize>, samples: usize, cfg: &RunConfig) -> Result<Outcome> {
    let l = load(args)?;
    let alg = l.spec.algebra.build()?;
    let degrees = parse_list(degrees)?;
    let top = degrees
        .iter()
        .copied()
        .max()
        .ok_or_else(|| invalid("--degrees is empty"))?;
    let powers = degrees
        .iter()
        .map(|&d| {
            if d == 0 {
                Ok(None)
            } else {
                TensorPower::new(&alg, d, cfg.budget).map(Some)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    let phi = |x: &CMatrix| {
        let parts: Vec<CMatrix> = powers
            .iter()
            .map(|p| match p {
                Some(tp) => tp.gamma_n(x),
                None => identity(1),
            })
            .collect();
        crate::linalg::direct_sum(&parts).expect("square blocks")
    };
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let pts: Vec<CMatrix> = (0..samples.max(1)).map(|_| alg.random_element(&mut rng)).collect();
    let (_, report) = homogeneous_components(&phi, n_max.unwrap_or(top), &alg.unit(), &pts, cfg.tol)?;
    let passed = report.max_residual() < cfg.tol.eps;
    Ok(Outcome::new(
        json!({"degrees": degrees, "samples": pts.len(), "report": report, "passed": passed}),
        passed,
    ))
}

fn verify(suite: &str, cfg: &RunConfig) -> Result<Outcome> {
    let reports = run_suite(suite, cfg)?;
    let passed = reports.iter().all(|r| r.passed);
    let mut lines = String::new();
    for r in &reports {
        for c in &r.checks {
            lines.push_str(&format!(
                "{} [{}] {}  {}\n",
                if c.passed { "PASS" } else { "FAIL" },
                r.suite,
                c.name,
                c.detail
            ));
        }
    }
    lines.push_str(&format!("{}: {suite}\n", if passed { "PASS" } else { "FAIL" }));
    let value = json!({"suite": suite, "seed": cfg.seed, "passed": passed, "reports": reports});
    Ok(Outcome {
        value,
        passed,
        lines: Some(lines),
    })
}
