use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context as _, Result};
use logcap_core::capacity::{self, SolverOptions};
use logcap_core::concavity::{hstable_fixtures, non_slc_examples, slc_sampled, Provenance};
use logcap_core::exp_linear::ExpLinearFixture;
use logcap_core::geometry::{d_convex_check, rado_check, submodularity_check, DegFunction, SupportSet};
use logcap_core::inequalities::{
    digest, run_suite, verify_cf_logconcavity, verify_exchange, verify_inner_product, verify_main_thm,
    verify_monomial_bounds, verify_schrijver, BoundReport, Function, MainKind,
};
use logcap_core::numeric::{format_rational, parse_rational, to_f64};
use logcap_core::permanent::{ryser_permanent, sinkhorn, vdw_bounds_check, NonnegMatrix, SINKHORN_MAX_ITER, SINKHORN_TOL};
use logcap_core::sequences::{lc_trajectory_check, WeightSequence};
use logcap_core::{MultiIndex, Rational, SparsePoly};
use serde::Serialize;
use serde_json::{json, Value};

use crate::args::{Bound, CapArgs, Command, InnerArgs, Kind, PermArgs, PermCheck, PropagateArgs, ProvenanceArg, SlcArgs, Source, TargetArgs, VerifyArgs};

pub struct Context {
    pub seed: Option<u64>,
    /// Sampled commands fail without an explicit seed.
    pub require_seed: bool,
    pub tol: f64,
    /// Relative input paths are resolved against this directory.
    pub base: PathBuf,
}

impl Context {
    fn seed(&self) -> Result<u64> {
        match (self.seed, self.require_seed) {
            (Some(s), _) => Ok(s),
            (None, false) => Ok(0),
            (None, true) => bail!("a seed is required for sampled checks"),
        }
    }

    fn path(&self, p: &Path) -> PathBuf {
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base.join(p)
        }
    }

    fn read(&self, p: &Path) -> Result<String> {
        let path = self.path(p);
        fs::read_to_string(&path).with_context(|| format!("reading {}", path.display()))
    }

    fn poly(&self, p: &Path) -> Result<SparsePoly> {
        SparsePoly::from_json_str(&self.read(p)?).with_context(|| format!("parsing {}", p.display()))
    }
}

pub enum Output {
    /// One result object.
    Single { kind: &'static str, digest: String, value: Value, violation: bool },
    Reports(Vec<BoundReport>),
}

impl Output {
    fn single<T: Serialize>(kind: &'static str, digest: String, value: &T, violation: bool) -> Result<Self> {
        Ok(Output::Single {
            kind,
            digest,
            value: serde_json::to_value(value)?,
            violation,
        })
    }

    pub fn has_guaranteed_violation(&self) -> bool {
        match self {
            Output::Single { violation, .. } => *violation,
            Output::Reports(r) => r.iter().any(BoundReport::is_guaranteed_violation),
        }
    }

    /// The value printed when the command runs on its own.
    pub fn standalone(&self) -> Result<Value> {
        Ok(match self {
            Output::Single { value, .. } => value.clone(),
            Output::Reports(r) => serde_json::to_value(r)?,
        })
    }

    /// Records appended to a manifest report.
    pub fn records(self) -> Result<Vec<Value>> {
        Ok(match self {
            Output::Single { kind, digest, value, .. } => {
                vec![json!({"kind": kind, "inputs_digest": digest, "result": value})]
            }
            Output::Reports(r) => r.iter().map(serde_json::to_value).collect::<serde_json::Result<_>>()?,
        })
    }
}

fn list<T>(s: &str, parse: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',').map(|t| parse(t.trim())).collect()
}

fn rationals(s: &str) -> Result<Vec<Rational>> {
    list(s, |t| Ok(parse_rational(t)?))
}

fn multi_index(s: &str) -> Result<MultiIndex> {
    let v = list(s, |t| t.parse::<u32>().map_err(|_| anyhow!("invalid exponent {t:?}")))?;
    Ok(MultiIndex::new(v))
}

fn catalog_fixture(name: &str) -> Result<(SparsePoly, Provenance)> {
    let all: Vec<_> = hstable_fixtures().into_iter().chain(non_slc_examples()).collect();
    let names: Vec<String> = all.iter().map(|f| f.name.clone()).collect();
    all.into_iter()
        .find(|f| f.name == name)
        .map(|f| (f.poly, f.provenance))
        .ok_or_else(|| anyhow!("unknown fixture {name:?}; known: {}", names.join(", ")))
}

fn load(source: &Source, ctx: &Context) -> Result<(Function, Provenance)> {
    if let Some(p) = &source.poly {
        Ok((Function::Poly(ctx.poly(p)?), Provenance::User))
    } else if let Some(name) = &source.fixture {
        let (p, prov) = catalog_fixture(name)?;
        Ok((Function::Poly(p), prov))
    } else if let Some(a) = &source.exp_linear {
        let f = ExpLinearFixture::new(rationals(a)?)?;
        Ok((Function::ExpLinear(f), Provenance::Constructive("exponential of a linear form".into())))
    } else {
        bail!("one of --poly, --fixture or --exp is required")
    }
}

fn load_poly(source: &Source, ctx: &Context) -> Result<(SparsePoly, Provenance)> {
    match load(source, ctx)? {
        (Function::Poly(p), prov) => Ok((p, prov)),
        (Function::ExpLinear(_), _) => bail!("this command needs a polynomial"),
    }
}

fn provenance(arg: Option<ProvenanceArg>, default: Provenance) -> Provenance {
    match arg {
        None => default,
        Some(ProvenanceArg::User) => Provenance::User,
        Some(ProvenanceArg::Constructive) => Provenance::Constructive("declared by the caller".into()),
    }
}

pub fn execute(command: &Command, ctx: &Context) -> Result<Output> {
    match command {
        Command::Cap(a) => cap(a, ctx),
        Command::Cfr(a) => cfr(a, ctx),
        Command::Der(a) => der(a, ctx),
        Command::Slc(a) => slc(a, ctx),
        Command::Dconvex(a) => {
            let (p, _) = load_poly(&a.source, ctx)?;
            let result = d_convex_check(&SupportSet::of(&p))?;
            Output::single("dconvex", digest(&p), &result, false)
        }
        Command::Rado(a) => {
            let (p, _) = load_poly(&a.source, ctx)?;
            let rado = rado_check(&p)?;
            let sub = submodularity_check(&DegFunction::of(&p)?);
            Output::single("rado", digest(&p), &json!({"rado": rado, "submodularity": sub}), false)
        }
        Command::Propagate(a) => propagate(a, ctx),
        Command::Verify(a) => verify(a, ctx),
        Command::Perm(a) => perm(a, ctx),
        Command::Inner(a) => inner(a, ctx),
        Command::Run(_) => bail!("run cannot be nested inside a manifest"),
    }
}

fn cap(a: &CapArgs, ctx: &Context) -> Result<Output> {
    let (f, _) = load(&a.source, ctx)?;
    let target = match &a.target {
        Some(t) => rationals(t)?,
        None => vec![Rational::from_integer(1.into()); f.num_vars()],
    };
    let target_str: Vec<String> = target.iter().map(format_rational).collect();
    let d = digest(&(&f, &target_str, a.unscaled));
    let result = match &f {
        Function::Poly(p) => {
            let opts = SolverOptions {
                tolerance: ctx.tol,
                scaled: !a.unscaled,
                ..SolverOptions::default()
            };
            capacity::c_f_rational(p, &target, &opts)?
        }
        Function::ExpLinear(e) => {
            if a.unscaled {
                bail!("--unscaled is only available for polynomials");
            }
            let r = target
                .iter()
                .map(|t| {
                    t.is_integer()
                        .then(|| t.to_integer().try_into().ok())
                        .flatten()
                        .ok_or_else(|| anyhow!("exponential inputs need nonnegative integer targets"))
                })
                .collect::<Result<Vec<u32>>>()?;
            capacity::c_f_exp_linear(e, &MultiIndex::new(r))?
        }
    };
    Output::single("capacity", d, &result, false)
}

fn cfr(a: &TargetArgs, ctx: &Context) -> Result<Output> {
    let (f, default) = load(&a.source, ctx)?;
    let r = multi_index(&a.target)?;
    Ok(Output::Reports(verify_monomial_bounds(&f, &r, &provenance(a.provenance, default))?))
}

fn der(a: &TargetArgs, ctx: &Context) -> Result<Output> {
    let (f, _) = load(&a.source, ctx)?;
    let r = multi_index(&a.target)?;
    let value = f.der_at_zero(&r)?;
    let out = json!({
        "target": r,
        "value": format_rational(&value),
        "approx": to_f64(&value),
    });
    Output::single("derivative", digest(&(&f, &r)), &out, false)
}

fn slc(a: &SlcArgs, ctx: &Context) -> Result<Output> {
    let (p, _) = load_poly(&a.source, ctx)?;
    let seed = ctx.seed()?;
    let verdict = slc_sampled(&p, a.samples, seed)?;
    Output::single("slc", digest(&(&p, a.samples, seed)), &verdict, false)
}

fn weights(text: &str) -> Result<Vec<Rational>> {
    let v: Value = serde_json::from_str(text).context("parsing weights")?;
    let arr = match &v {
        Value::Array(a) => a,
        Value::Object(o) => match o.get("b") {
            Some(Value::Array(a)) => a,
            _ => bail!("weights object needs a \"b\" array"),
        },
        _ => bail!("weights must be an array or an object with \"b\""),
    };
    arr.iter()
        .map(|x| match x {
            Value::String(s) => Ok(parse_rational(s)?),
            Value::Number(n) => Ok(parse_rational(&n.to_string())?),
            other => bail!("invalid weight {other}"),
        })
        .collect()
}

fn propagate(a: &PropagateArgs, ctx: &Context) -> Result<Output> {
    let b = WeightSequence::new(weights(&ctx.read(&a.weights)?)?)?;
    let p = ctx.poly(&a.poly)?;
    let grid = rationals(&a.grid)?;
    let report = lc_trajectory_check(&b, &p, &grid)?;
    // a propagatable sequence with log-concave start must stay log-concave
    let violation = report.propagatable && report.precondition && !report.all_in_lc;
    let grid_str: Vec<String> = grid.iter().map(format_rational).collect();
    let b_str: Vec<String> = b.weights().iter().map(format_rational).collect();
    Output::single("trajectory", digest(&(&b_str, &p, &grid_str)), &report, violation)
}

fn verify(a: &VerifyArgs, ctx: &Context) -> Result<Output> {
    if let Some(name) = &a.suite {
        return Ok(Output::Reports(run_suite(name, ctx.seed()?)?));
    }
    let source = Source {
        poly: a.poly.clone(),
        fixture: a.fixture.clone(),
        exp_linear: a.exp_linear.clone(),
    };
    let (f, default) = load(&source, ctx)?;
    let prov = provenance(a.provenance, default);
    let target = a.target.as_deref().map(multi_index).transpose()?;
    let need_target = || target.clone().ok_or_else(|| anyhow!("--target is required for this bound"));
    let reports = match a.bound {
        Bound::Main => {
            let kind = match a.kind {
                Kind::Entire => MainKind::Entire,
                Kind::Homogeneous => MainKind::Homogeneous,
                Kind::Polynomial => MainKind::Polynomial,
            };
            verify_main_thm(&f, kind, &prov)?
        }
        Bound::Monomial => verify_monomial_bounds(&f, &need_target()?, &prov)?,
        Bound::Schrijver => {
            let p = f.as_poly().ok_or_else(|| anyhow!("--bound schrijver needs a polynomial"))?;
            let k = a.k.unwrap_or_else(|| p.variable_degrees().into_iter().max().unwrap_or(1));
            verify_schrijver(p, k, &prov)?
        }
        Bound::Exchange => {
            let p = f.as_poly().ok_or_else(|| anyhow!("--bound exchange needs a polynomial"))?;
            let pair = list(&a.pair, |t| t.parse::<usize>().map_err(|_| anyhow!("invalid index {t:?}")))?;
            let [i, j] = pair[..] else { bail!("--pair takes two indices") };
            vec![verify_exchange(p, &need_target()?, i, j, &prov)?]
        }
        Bound::CfLogconcavity => verify_cf_logconcavity(&f, a.triples, ctx.seed()?, &prov)?,
    };
    Ok(Output::Reports(reports))
}

fn perm(a: &PermArgs, ctx: &Context) -> Result<Output> {
    let m = NonnegMatrix::from_json_str(&ctx.read(&a.matrix)?).with_context(|| format!("parsing {}", a.matrix.display()))?;
    match a.check {
        PermCheck::Vdw => {
            let m = if a.scale {
                sinkhorn(&m, SINKHORN_TOL, SINKHORN_MAX_ITER)?.matrix
            } else {
                m
            };
            Ok(Output::Reports(vdw_bounds_check(&m)?))
        }
        PermCheck::Permanent => {
            let per = ryser_permanent(&m)?;
            let out = json!({"n": m.n(), "permanent": format_rational(&per), "approx": to_f64(&per)});
            Output::single("permanent", digest(&m), &out, false)
        }
        PermCheck::Sinkhorn => {
            let result = sinkhorn(&m, SINKHORN_TOL, SINKHORN_MAX_ITER)?;
            Output::single("sinkhorn", digest(&m), &result, false)
        }
    }
}

fn inner(a: &InnerArgs, ctx: &Context) -> Result<Output> {
    let p = ctx.poly(&a.p)?;
    let q = ctx.poly(&a.q)?;
    let l = rationals(&a.l)?;
    let prov = provenance(Some(a.provenance), Provenance::User);
    Ok(Output::Reports(verify_inner_product(&p, &q, &l, &prov)?))
}
