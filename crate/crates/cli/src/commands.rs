//! Command dispatch: each command runs over a [`Context`] and returns a
//! [`Report`].

use std::collections::BTreeMap;
use clap::Subcommand;
use ncg_core::algebra::{hilbert_series, is_central, match_rational, parse_rational_function, PresentedAlgebra};
use ncg_core::endo::{
    as_gorenstein_check, as_regular_over_r_check, check_nonnegative, degree_zero_algebra, endomorphism_algebra,
    gabriel_quiver_from, radical_and_idempotents, EndomorphismAlgebra,
};
use ncg_core::freealg::NcPoly;
use ncg_core::gmodule::GradedModule;
use ncg_core::homology::{
    are_isomorphic_graded, check_cluster_tilting, eval_iso_check, ext_from_resolution, free_resolution, hom_space,
    in_additive_closure, is_indecomposable, is_mcm, nu_stability_check, IsoResult,
};
use ncg_core::koszul::{clifford_algebra, commutative_semisimple_decompose, enumerate_projective_points, quadratic_dual};
use ncg_core::scalars::{Field, FieldKind, PrimeField};
use serde_json::{json, Value};

use crate::context::Context;
use crate::error::CliError;
use crate::report::{Report, Verdict};
use crate::verify::verify_example;

/// Random trials for isomorphism searches that cannot be exhaustive.
pub const DEFAULT_TRIALS: usize = 256;

#[derive(Clone, Debug, Subcommand)]
pub enum Command {
    /// Reduced Groebner basis of an algebra through the truncation degree.
    Gb { algebra: String },
    /// Hilbert series, optionally matched against a rational function.
    Hilbert {
        algebra: String,
        #[arg(long = "match")]
        matches: Option<String>,
    },
    /// Graded dimensions of Ext^i(M, N) for 0 <= i <= homological max.
    Ext {
        m: String,
        n: String,
        #[arg(long)]
        i: Option<usize>,
    },
    /// Dimension of Hom(M, N(shift))_0.
    Hom {
        m: String,
        n: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i64,
    },
    /// Maximal Cohen-Macaulay test: Ext^i(M, A) = 0 for i >= 1.
    Mcm { m: String },
    /// Whether End(M)_0 is local.
    Indec { m: String },
    /// Graded isomorphism search; `N` may carry a shift, e.g. `X2(1)`.
    Iso {
        m: String,
        n: String,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
    /// n-cluster tilting conditions of X against candidate modules.
    Cluster {
        x: String,
        #[arg(long, default_value_t = 1)]
        n: usize,
        #[arg(long, value_delimiter = ',')]
        candidates: Vec<String>,
    },
    /// Graded pieces of End(X).
    Endo {
        x: String,
        #[arg(long, default_value_t = -2, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long)]
        hi: Option<i64>,
        #[arg(long = "match")]
        matches: Option<String>,
    },
    /// Radical, idempotents and Gabriel quiver of End(X)_0.
    Quiver { x: String },
    /// Quadratic dual and the Koszul numerical identity.
    KoszulDual { algebra: String },
    /// C(A) = A^![w^-1]_0 for a central degree-2 element of A^!.
    Clifford {
        algebra: String,
        #[arg(long)]
        central: String,
    },
    /// Common projective zeros of commutative polynomials over GF(p).
    Points {
        algebra: String,
        #[arg(long = "poly", required = true)]
        polys: Vec<String>,
    },
    /// AS-Gorenstein evidence on both sides.
    Asgorenstein {
        algebra: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        ell: i64,
    },
    /// AS-regularity of End(X) over its degree-zero part.
    Asregular {
        x: String,
        #[arg(long, default_value_t = 2)]
        d: usize,
        #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
        ell: i64,
    },
    /// Evaluation map Hom(X, M) (x)_B X -> M, degree by degree.
    EvalIso {
        x: String,
        m: String,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        lo: i64,
        #[arg(long, default_value_t = 4)]
        hi: i64,
    },
    /// Whether M twisted by an automorphism is isomorphic to M.
    NuStable {
        m: String,
        automorphism: String,
        #[arg(long, default_value_t = DEFAULT_TRIALS)]
        trials: usize,
    },
    /// The full pipeline on the built-in example.
    VerifyExample,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Gb { .. } => "gb",
            Command::Hilbert { .. } => "hilbert",
            Command::Ext { .. } => "ext",
            Command::Hom { .. } => "hom",
            Command::Mcm { .. } => "mcm",
            Command::Indec { .. } => "indec",
            Command::Iso { .. } => "iso",
            Command::Cluster { .. } => "cluster",
            Command::Endo { .. } => "endo",
            Command::Quiver { .. } => "quiver",
            Command::KoszulDual { .. } => "koszul-dual",
            Command::Clifford { .. } => "clifford",
            Command::Points { .. } => "points",
            Command::Asgorenstein { .. } => "asgorenstein",
            Command::Asregular { .. } => "asregular",
            Command::EvalIso { .. } => "eval-iso",
            Command::NuStable { .. } => "nu-stable",
            Command::VerifyExample => "verify-example",
        }
    }

    fn inputs(&self) -> Value {
        match self {
            Command::Gb { algebra } | Command::KoszulDual { algebra } => json!({ "algebra": algebra }),
            Command::Hilbert { algebra, matches } => json!({ "algebra": algebra, "match": matches }),
            Command::Ext { m, n, i } => json!({ "m": m, "n": n, "i": i }),
            Command::Hom { m, n, shift } => json!({ "m": m, "n": n, "shift": shift }),
            Command::Mcm { m } | Command::Indec { m } => json!({ "m": m }),
            Command::Iso { m, n, trials } => json!({ "m": m, "n": n, "trials": trials }),
            Command::Cluster { x, n, candidates } => json!({ "x": x, "n": n, "candidates": candidates }),
            Command::Endo { x, lo, hi, matches } => json!({ "x": x, "lo": lo, "hi": hi, "match": matches }),
            Command::Quiver { x } => json!({ "x": x }),
            Command::Clifford { algebra, central } => json!({ "algebra": algebra, "central": central }),
            Command::Points { algebra, polys } => json!({ "algebra": algebra, "polys": polys }),
            Command::Asgorenstein { algebra, d, ell } => json!({ "algebra": algebra, "d": d, "ell": ell }),
            Command::Asregular { x, d, ell } => json!({ "x": x, "d": d, "ell": ell }),
            Command::EvalIso { x, m, lo, hi } => json!({ "x": x, "m": m, "lo": lo, "hi": hi }),
            Command::NuStable { m, automorphism, trials } => {
                json!({ "m": m, "automorphism": automorphism, "trials": trials })
            }
            Command::VerifyExample => json!({}),
        }
    }
}

/// Runs one command. Errors abort the command; `verify-example` instead
/// records them in a partial report.
pub fn run_command<F: Field>(ctx: &Context<F>, cmd: &Command) -> Result<Report, CliError> {
    if let Command::VerifyExample = cmd {
        return Ok(verify_example(ctx));
    }
    let mut r = Report::new(cmd.name(), cmd.inputs(), ctx.field.kind().to_string(), ctx.window, ctx.seed);
    let w = ctx.window;
    match cmd {
        Command::Gb { algebra } => {
            let a = ctx.algebra(algebra)?;
            let pres = a.presentation();
            let gb = a.groebner_basis();
            let elems: Vec<String> = gb.elements().iter().map(|p| p.display(pres.names(), pres.order())).collect();
            r.push(
                "groebner-basis",
                Verdict::Pass,
                json!({ "complete_through": gb.complete_through(), "size": elems.len(), "elements": elems }),
            );
        }
        Command::Hilbert { algebra, matches } => {
            let a = ctx.algebra(algebra)?;
            let h = hilbert_series(a.as_ref(), ctx.max_deg)?;
            hilbert_check(&mut r, "hilbert", &h.coeffs, matches.as_deref())?;
        }
        Command::Ext { m, n, i } => {
            let (mm, nn) = (ctx.shifted_module(m)?, ctx.shifted_module(n)?);
            let degrees: Vec<usize> = match i {
                Some(i) => vec![*i],
                None => (0..=w.homological_max).collect(),
            };
            let top = degrees.iter().copied().max().unwrap_or(0);
            let res = free_resolution(&mm, top + 1, &w)?;
            for i in degrees {
                let e = ext_from_resolution(&res, &nn, i, &w)?;
                let inconclusive = !e.uncertified.is_empty() || e.incomplete;
                r.push(&format!("ext{i}"), Verdict::decide(!inconclusive, inconclusive), serde_json::to_value(&e).unwrap());
            }
        }
        Command::Hom { m, n, shift } => {
            let h = hom_space(&ctx.shifted_module(m)?, &ctx.shifted_module(n)?, *shift)?;
            r.push("hom", Verdict::Pass, json!({ "dim": h.dim() }));
        }
        Command::Mcm { m } => {
            let rep = is_mcm(&ctx.shifted_module(m)?, &w)?;
            r.push("mcm", mcm_verdict(rep.is_mcm, rep.inconclusive), serde_json::to_value(&rep).unwrap());
        }
        Command::Indec { m } => {
            let ok = is_indecomposable(&ctx.shifted_module(m)?)?;
            r.push("indecomposable", Verdict::from_bool(ok), json!({ "indecomposable": ok }));
        }
        Command::Iso { m, n, trials } => {
            let res = are_isomorphic_graded(&ctx.shifted_module(m)?, &ctx.shifted_module(n)?, &w, *trials, ctx.seed)?;
            push_iso(&mut r, "isomorphic", &res);
        }
        Command::Cluster { x, n, candidates } => {
            let xm = ctx.module(x)?;
            let mods = candidates
                .iter()
                .map(|c| Ok((c.clone(), ctx.shifted_module(c)?)))
                .collect::<Result<Vec<_>, CliError>>()?;
            let refs: Vec<(String, &GradedModule<F>)> = mods.iter().map(|(n, m)| (n.clone(), m)).collect();
            let rep = check_cluster_tilting(&xm, *n, &refs, &w)?;
            let ok = rep.x_is_mcm
                && rep.self_orthogonal
                && rep.candidates.iter().all(|c| (c.mcm && c.ext_vanishing) == c.in_add);
            r.push("cluster-tilting", Verdict::decide(ok, rep.inconclusive), serde_json::to_value(&rep).unwrap());
        }
        Command::Endo { x, lo, hi, matches } => {
            let hi = hi.unwrap_or(w.internal_hi);
            let b = endomorphism_algebra(&ctx.module(x)?, *lo, hi)?;
            let dims: BTreeMap<i64, usize> = b.dims().into_iter().collect();
            let nonneg = check_nonnegative(&b);
            r.push("nonnegative", Verdict::from_bool(nonneg), json!({ "dims": dims }));
            let coeffs: Vec<i64> = (0..=hi).map(|d| dims[&d] as i64).collect();
            hilbert_check(&mut r, "hilbert", &coeffs, matches.as_deref())?;
        }
        Command::Quiver { x } => {
            let b = endomorphism_algebra(&ctx.module(x)?, 0, 0)?;
            r.push("degree-zero", Verdict::Pass, degree_zero_evidence(&b)?);
        }
        Command::KoszulDual { algebra } => {
            let a = ctx.algebra(algebra)?;
            let dual = quadratic_dual(a.presentation())?;
            let ad = PresentedAlgebra::new(&dual, ctx.max_deg)?;
            let ha = hilbert_series(a.as_ref(), ctx.max_deg)?.coeffs;
            let hd = hilbert_series(&ad, ctx.max_deg)?.coeffs;
            let ok = koszul_pairing(&ha, &hd);
            r.push(
                "koszul-pairing",
                Verdict::from_bool(ok),
                json!({
                    "relations": dual.display_relations(),
                    "dual_dims": hd,
                    "dims": ha,
                    "certified_through": ctx.max_deg,
                }),
            );
        }
        Command::Clifford { algebra, central } => {
            let a = ctx.algebra(algebra)?;
            let ad = PresentedAlgebra::new(&quadratic_dual(a.presentation())?, ctx.max_deg)?;
            let wpoly = ctx.poly(algebra, central)?;
            clifford_check(&mut r, &ad, &wpoly)?;
        }
        Command::Points { algebra, polys } => {
            let ps = polys.iter().map(|p| ctx.poly(algebra, p)).collect::<Result<Vec<_>, _>>()?;
            let n = ctx.workspace.generators(algebra).map_or(0, |g| g.0.len());
            let pts = points_over_prime(&ctx.field, &ps, n)?;
            r.push("points", Verdict::Pass, json!({ "count": pts.len(), "points": pts }));
        }
        Command::Asgorenstein { algebra, d, ell } => {
            let rep = as_gorenstein_check(&ctx.algebra(algebra)?, &ctx.opposite(algebra)?, *d, *ell, &w)?;
            r.push("as-gorenstein", Verdict::decide(rep.pass, rep.inconclusive), serde_json::to_value(&rep).unwrap());
        }
        Command::Asregular { x, d, ell } => {
            let b = endomorphism_algebra(&ctx.module(x)?, 0, w.internal_hi + *d as i64)?;
            let rep = as_regular_over_r_check(&b.graded_algebra(), *d, *ell, &w)?;
            r.push("as-regular", Verdict::decide(rep.pass, rep.inconclusive), serde_json::to_value(&rep).unwrap());
        }
        Command::EvalIso { x, m, lo, hi } => {
            let xm = ctx.module(x)?;
            let b = endomorphism_algebra(&xm, 0, *hi)?;
            let alg = ctx.algebra_of(x)?;
            eval_check(&mut r, "eval-iso", &b, &ctx.module(&alg)?, &ctx.shifted_module(m)?, *lo, *hi)?;
        }
        Command::NuStable { m, automorphism, trials } => {
            let sigma = ctx.automorphism(automorphism)?;
            let res = nu_stability_check(&ctx.shifted_module(m)?, &sigma, &w, *trials, ctx.seed)?;
            push_iso(&mut r, "stable", &res);
        }
        Command::VerifyExample => unreachable!("handled above"),
    }
    Ok(r)
}

pub(crate) fn mcm_verdict(is_mcm: bool, inconclusive: bool) -> Verdict {
    if !is_mcm {
        Verdict::Fail
    } else if inconclusive {
        Verdict::Inconclusive
    } else {
        Verdict::Pass
    }
}

fn push_iso<E>(r: &mut Report, name: &str, res: &IsoResult<E>) {
    match res {
        IsoResult::Isomorphic(_) => r.push(name, Verdict::Pass, json!({ "found": true })),
        IsoResult::NotFound { certified, reason } => {
            let v = if *certified { Verdict::Fail } else { Verdict::Inconclusive };
            r.push(name, v, json!({ "found": false, "certified": certified, "reason": reason }));
        }
    }
}

/// Records the dimensions and, when given, the match against a rational
/// function in `t`.
pub(crate) fn hilbert_check(r: &mut Report, name: &str, coeffs: &[i64], target: Option<&str>) -> Result<bool, CliError> {
    match target {
        None => {
            r.push(name, Verdict::Pass, json!({ "dims": coeffs }));
            Ok(true)
        }
        Some(t) => {
            let (num, den) = parse_rational_function(t)?;
            let ok = match_rational(coeffs, &num, &den);
            r.push(
                name,
                Verdict::from_bool(ok),
                json!({ "dims": coeffs, "match": t, "certified_through": coeffs.len() as i64 - 1 }),
            );
            Ok(ok)
        }
    }
}

/// `H_A(t) * H_{A!}(-t) = 1` through the common length.
pub fn koszul_pairing(ha: &[i64], hd: &[i64]) -> bool {
    let n = ha.len().min(hd.len());
    (0..n).all(|k| {
        let s: i64 = (0..=k)
            .map(|i| {
                let sign = if (k - i) % 2 == 0 { 1 } else { -1 };
                ha[i] * hd[k - i] * sign
            })
            .sum();
        s == i64::from(k == 0)
    })
}

pub(crate) fn degree_zero_evidence<F: Field>(b: &EndomorphismAlgebra<F>) -> Result<Value, CliError> {
    let b0 = degree_zero_algebra(b);
    let an = radical_and_idempotents(&b0)?;
    let q = gabriel_quiver_from(&b0, &an)?;
    let sources = q.vertices.len().saturating_sub(1);
    Ok(json!({
        "dim": b0.dim(),
        "radical_dim": an.radical.len(),
        "radical_squared_dim": an.radical_squared_dim,
        "idempotents": an.idempotents.len(),
        "quiver": q,
        "arrows": q.num_arrows(),
        "star_into_sink": q.is_star_into_sink(sources),
    }))
}

/// Structure of `C(A)`: `k^n` when it splits into one-dimensional blocks.
pub(crate) fn clifford_check<F: Field>(r: &mut Report, adual: &PresentedAlgebra<F>, w: &NcPoly<F>) -> Result<bool, CliError> {
    let central = is_central(adual, w)?;
    let c = clifford_algebra(adual, w)?;
    let commutative = c.algebra.is_commutative();
    let (verdict, evidence) = match commutative_semisimple_decompose(&c.algebra) {
        Ok(blocks) => {
            let dims: Vec<usize> = blocks.iter().map(|b| b.dim).collect();
            let split = dims.iter().all(|&d| d == 1);
            let structure = if split {
                format!("k^{}", dims.len())
            } else {
                dims.iter().map(|d| format!("K{d}")).collect::<Vec<_>>().join(" x ")
            };
            (
                Verdict::Pass,
                json!({ "blocks": dims, "split": split, "structure": structure }),
            )
        }
        Err(e @ (ncg_core::Error::NotCommutative | ncg_core::Error::NotSemisimple(_))) => {
            (Verdict::Fail, json!({ "reason": e.to_string() }))
        }
        Err(e) => return Err(e.into()),
    };
    let mut evidence = evidence;
    let obj = evidence.as_object_mut().expect("object");
    obj.insert("central".into(), json!(central));
    obj.insert("commutative".into(), json!(commutative));
    obj.insert("dim".into(), json!(c.algebra.dim()));
    obj.insert("level".into(), json!(c.level));
    obj.insert("even_dims".into(), json!(c.even_dims));
    let pass = verdict == Verdict::Pass;
    r.push("clifford", verdict, evidence);
    Ok(pass)
}

/// Points of `V(polys)` in projective space; only over prime fields.
pub(crate) fn points_over_prime<F: Field>(field: &F, polys: &[NcPoly<F>], n: usize) -> Result<Vec<Vec<u64>>, CliError> {
    let FieldKind::Prime(p) = field.kind() else {
        return Err(ncg_core::Error::UnsupportedField(field.kind().to_string()).into());
    };
    let gf = PrimeField::new(p)?;
    let converted: Vec<NcPoly<PrimeField>> = polys
        .iter()
        .map(|q| {
            NcPoly::from_terms(
                &gf,
                q.terms()
                    .iter()
                    .map(|(w, c)| (w.clone(), gf.from_i64(field.to_i64(c).expect("prime field element")))),
            )
        })
        .collect();
    Ok(enumerate_projective_points(&converted, &gf, n))
}

/// Runs the evaluation check, requiring `A` to be a summand of `X`.
pub(crate) fn eval_check<F: Field>(
    r: &mut Report,
    label: &str,
    b: &EndomorphismAlgebra<F>,
    free: &GradedModule<F>,
    m: &GradedModule<F>,
    lo: i64,
    hi: i64,
) -> Result<bool, CliError> {
    let has_free = in_additive_closure(free, b.module())?;
    let degrees = eval_iso_check(b, has_free, m, lo, hi)?;
    let ok = degrees.iter().all(|d| d.iso);
    r.push(label, Verdict::from_bool(ok), json!({ "degrees": degrees }));
    Ok(ok)
}
