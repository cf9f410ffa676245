//! The end-to-end pipeline on the built-in quadric example.

use std::time::Instant;

use ncg_core::algebra::{hilbert_series, is_central, is_regular_element, PresentedAlgebra};
use ncg_core::endo::{as_gorenstein_check, as_regular_over_r_check, check_nonnegative, endomorphism_algebra};
use ncg_core::gmodule::shift_module;
use ncg_core::homology::{are_isomorphic_graded, is_indecomposable, is_mcm};
use ncg_core::koszul::quadratic_dual;
use ncg_core::scalars::{Field, FieldKind, PrimeField, Rationals};
use serde_json::{json, Value};

use crate::commands::{
    clifford_check, degree_zero_evidence, eval_check, hilbert_check, mcm_verdict, points_over_prime, DEFAULT_TRIALS,
};
use crate::context::{Context, Settings};
use crate::error::CliError;
use crate::report::{Report, Verdict};
use crate::workspace::{parse_workspace, EXAMPLE};

const CONES: [&str; 4] = ["X1", "X2", "X3", "X4"];

/// Builds the example over `field` (default `GF(13)`) and runs every stage.
/// Setup failures, such as a field without a fourth root of unity, yield a
/// report carrying the error.
pub fn verify_example_report(field: Option<FieldKind>, settings: &Settings) -> Report {
    let start = Instant::now();
    let ws = parse_workspace(EXAMPLE).expect("built-in workspace parses");
    let kind = field.unwrap_or(FieldKind::Prime(13));
    let mut report = match kind {
        FieldKind::Prime(p) => match PrimeField::new(p) {
            Ok(f) => setup_and_run(ws, f, settings),
            Err(e) => Err(e.into()),
        },
        FieldKind::Rational => setup_and_run(ws, Rationals, settings),
    }
    .unwrap_or_else(|e| {
        let window = settings.window.unwrap_or_default();
        let mut r = Report::new("verify-example", json!({}), kind.to_string(), window, settings.seed);
        r.error = Some(format!("fixture setup: {e}"));
        r
    });
    report.elapsed = start.elapsed();
    report
}

fn setup_and_run<F: Field>(ws: crate::workspace::WorkspaceFile, field: F, settings: &Settings) -> Result<Report, CliError> {
    let ctx = Context::new(ws, field, settings)?;
    Ok(verify_example(&ctx))
}

/// Runs the eleven stages in order; the first error stops the run and is
/// recorded in the report.
pub fn verify_example<F: Field>(ctx: &Context<F>) -> Report {
    let mut r = Report::new("verify-example", json!({}), ctx.field.kind().to_string(), ctx.window, ctx.seed);
    if let Err((stage, e)) = stages(ctx, &mut r) {
        r.error = Some(format!("stage {stage}: {e}"));
    }
    r
}

type StageResult = Result<(), (usize, CliError)>;

fn at<T>(stage: usize, res: Result<T, impl Into<CliError>>) -> Result<T, (usize, CliError)> {
    res.map_err(|e| (stage, e.into()))
}

fn stages<F: Field>(ctx: &Context<F>, r: &mut Report) -> StageResult {
    let w = ctx.window;

    // 1. Hilbert series of S and A.
    let s = at(1, ctx.algebra("S"))?;
    let a = at(1, ctx.algebra("A"))?;
    let hs = at(1, hilbert_series(s.as_ref(), ctx.max_deg))?;
    at(1, hilbert_check(r, "1 hilbert S", &hs.coeffs, Some("1/(1-t)^3")))?;
    let ha = at(1, hilbert_series(a.as_ref(), ctx.max_deg))?;
    at(1, hilbert_check(r, "1 hilbert A", &ha.coeffs, Some("(1+t)/(1-t)^2")))?;

    // 2. x^2 + y^2 is a central regular element of S.
    let f = at(2, ctx.poly("S", "x^2 + y^2"))?;
    let central = at(2, is_central(&s, &f))?;
    let reg_window = ctx.max_deg - 2;
    let regular = at(2, is_regular_element(&s, &f, reg_window))?;
    r.push(
        "2 central regular",
        Verdict::from_bool(central && regular),
        json!({ "element": "x^2 + y^2", "central": central, "regular": regular, "certified_through": reg_window }),
    );

    // 3. A is AS-Gorenstein with d = 2, ell = 1.
    let op = at(3, ctx.opposite("A"))?;
    let gor = at(3, as_gorenstein_check(&a, &op, 2, 1, &w))?;
    r.push("3 as-gorenstein A", Verdict::decide(gor.pass, gor.inconclusive), to_value(&gor));

    // 4. Quadratic dual and C(A) = k^4.
    let dual = at(4, quadratic_dual(a.presentation()))?;
    let ad = at(4, PresentedAlgebra::new(&dual, ctx.max_deg))?;
    let x2 = at(4, ctx.poly("A", "x^2"))?;
    let mut sub = Report::new("", Value::Null, String::new(), w, 0);
    at(4, clifford_check(&mut sub, &ad, &x2))?;
    let check = sub.checks.pop().expect("one check");
    let four = check.evidence["structure"] == json!("k^4");
    let mut ev = check.evidence;
    ev["dual_relations"] = json!(dual.display_relations());
    r.push("4 clifford C(A)", check.verdict.max(Verdict::from_bool(four)), ev);

    // 5. Four points on xy + z^2 = x^2 - y^2 = 0.
    let polys = vec![at(5, ctx.poly("A", "x*y + z^2"))?, at(5, ctx.poly("A", "x^2 - y^2"))?];
    let pts = at(5, points_over_prime(&ctx.field, &polys, 3))?;
    r.push("5 points", Verdict::from_bool(pts.len() == 4), json!({ "count": pts.len(), "points": pts }));

    // 6. X1..X4: MCM, indecomposable, pairwise non-isomorphic up to shift.
    let cones = CONES
        .iter()
        .map(|n| ctx.module(n))
        .collect::<Result<Vec<_>, _>>()
        .map_err(|e| (6, e))?;
    let mut verdict = Verdict::Pass;
    let mut per_module = Vec::new();
    for (name, m) in CONES.iter().zip(&cones) {
        let mcm = at(6, is_mcm(m, &w))?;
        let indec = at(6, is_indecomposable(m))?;
        verdict = verdict.max(mcm_verdict(mcm.is_mcm, mcm.inconclusive)).max(Verdict::from_bool(indec));
        per_module.push(json!({ "module": name, "mcm": mcm.is_mcm, "indecomposable": indec, "inconclusive": mcm.inconclusive }));
    }
    let (mut certified, mut pairs) = (0usize, 0usize);
    for (i, mi) in cones.iter().enumerate() {
        for (j, mj) in cones.iter().enumerate() {
            if i == j {
                continue;
            }
            for shift in -3..=3 {
                let res = at(6, are_isomorphic_graded(mi, &shift_module(mj, shift), &w, DEFAULT_TRIALS, ctx.seed))?;
                pairs += 1;
                if res.is_certified_negative() {
                    certified += 1;
                } else if res.is_isomorphic() {
                    verdict = verdict.max(Verdict::Fail);
                } else {
                    verdict = verdict.max(Verdict::Inconclusive);
                }
            }
        }
    }
    r.push(
        "6 cone modules",
        verdict,
        json!({ "modules": per_module, "pairs": pairs, "certified_non_isomorphic": certified, "shifts": [-3, 3] }),
    );

    // 7-8. B = End(X): no negative part, Hilbert series 9(1+t)/(1-t)^2.
    let x = at(7, ctx.module("X"))?;
    let hi = w.internal_hi + 2;
    let b = at(7, endomorphism_algebra(&x, -2, hi))?;
    let dims = b.dims();
    let negative: Vec<(i64, usize)> = dims.iter().copied().filter(|(d, _)| *d < 0).collect();
    r.push("7 end nonnegative", Verdict::from_bool(check_nonnegative(&b)), json!({ "negative_dims": negative }));
    let coeffs: Vec<i64> = dims.iter().filter(|(d, _)| *d >= 0).map(|(_, n)| *n as i64).collect();
    at(8, hilbert_check(r, "8 hilbert B", &coeffs, Some("9*(1+t)/(1-t)^2")))?;

    // 9. B_0: dim 9, radical 4 squaring to 0, 5 idempotents, star quiver.
    let ev = at(9, degree_zero_evidence(&b))?;
    let ok = ev["dim"] == json!(9)
        && ev["radical_dim"] == json!(4)
        && ev["radical_squared_dim"] == json!(0)
        && ev["idempotents"] == json!(5)
        && ev["arrows"] == json!(4)
        && ev["star_into_sink"] == json!(true);
    r.push("9 degree-zero B0", Verdict::from_bool(ok), ev);

    // 10. B is AS-regular over B_0 with d = 2, ell = 1.
    let reg = at(10, as_regular_over_r_check(&b.graded_algebra(), 2, 1, &w))?;
    r.push("10 as-regular B", Verdict::decide(reg.pass, reg.inconclusive), to_value(&reg));

    // 11. Evaluation isomorphism for A, X1 and k.
    let free = at(11, ctx.module("A"))?;
    for name in ["A", "X1", "k"] {
        let m = at(11, ctx.module(name))?;
        at(11, eval_check(r, &format!("11 eval-iso {name}"), &b, &free, &m, 0, 4))?;
    }
    Ok(())
}

fn to_value<T: serde::Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable evidence")
}
