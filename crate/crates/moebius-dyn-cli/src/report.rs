//! JSON document builders. Reports carry exact values as strings next to
//! decimal approximations; every document opens with the schema tag.

use moebius_dyn::{
    basin_check, classify_padic, fp_character, siegel_known, siegel_unique, Algebraic, FixedPoints,
    MoebiusMap, PadicClassification, PadicContext, PadicError, Rational, RealClassification,
    RealVerdict, Rotation, SiegelOutcome, WhichFixed,
};
use serde_json::{json, Value};
use std::cmp::Ordering;

pub const SCHEMA: &str = "moebius-dyn/1";

pub fn rational_value(r: &Rational) -> Value {
    json!({ "exact": r.to_string(), "approx": r.to_f64() })
}

/// Exact string plus a decimal approximation; quadratic values over a
/// negative radicand get a complex approximation instead.
pub fn algebraic_value(x: &Algebraic) -> Value {
    match x.to_f64() {
        Some(approx) => json!({ "exact": x.to_string(), "approx": approx }),
        None => {
            let Algebraic::Quad(q) = x else {
                unreachable!("rationals approximate")
            };
            json!({
                "exact": x.to_string(),
                "approx": Value::Null,
                "approx_complex": {
                    "re": q.u().to_f64(),
                    "im": q.v().to_f64() * (-q.radicand()).to_f64().sqrt(),
                },
            })
        }
    }
}

fn fixed_points_value(map: &MoebiusMap<Rational>) -> Value {
    match &map.fixed_points().points {
        FixedPoints::Double { x0 } => json!({
            "kind": "double",
            "x0": rational_value(x0),
        }),
        FixedPoints::Two { x1, x2 } => json!({
            "kind": "two",
            "x1": algebraic_value(x1),
            "x2": algebraic_value(x2),
            "real": !map.discriminant().is_negative(),
        }),
    }
}

fn kq_scan_value(map: &MoebiusMap<Rational>, qmax: u32) -> Value {
    let ks = map.k_values(qmax);
    let zeros: Vec<u32> = ks
        .iter()
        .enumerate()
        .filter(|(_, k)| k.is_zero())
        .map(|(i, _)| (i + 1) as u32)
        .collect();
    json!({
        "qmax": qmax,
        "zeros": zeros,
        "min_period": map.min_period(qmax),
    })
}

fn ordering_str(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    }
}

fn which_str(w: WhichFixed) -> &'static str {
    match w {
        WhichFixed::X1 => "x1",
        WhichFixed::X2 => "x2",
        WhichFixed::Unique => "unique",
    }
}

pub fn real_value(cls: &RealClassification, rotation: Option<&Rotation>, qmax: u32) -> Value {
    let verdict = match &cls.verdict {
        RealVerdict::GloballyPeriodic { q } => json!({
            "verdict": "globally_periodic",
            "q": q,
        }),
        RealVerdict::ConvergesTo { which, point } => json!({
            "verdict": "converges_to",
            "which": which_str(*which),
            "point": algebraic_value(point),
        }),
        RealVerdict::Dense { qmax_scanned } => json!({
            "verdict": "dense",
            "qmax_scanned": qmax_scanned,
        }),
    };
    let mut out = verdict;
    let obj = out.as_object_mut().expect("verdict object");
    obj.insert("qmax".into(), json!(qmax));
    obj.insert(
        "alpha_vs_beta_abs".into(),
        cls.ratio_cmp
            .map(|o| json!(ordering_str(o)))
            .unwrap_or(Value::Null),
    );
    obj.insert(
        "theta".into(),
        cls.theta.map(|t| json!(t)).unwrap_or(Value::Null),
    );
    obj.insert(
        "rotation_radius".into(),
        rotation.map(|r| json!(r.radius)).unwrap_or(Value::Null),
    );
    out
}

fn siegel_value(ctx: &PadicContext) -> Value {
    let outcome = match &ctx.fixed().points {
        FixedPoints::Double { .. } => siegel_unique(ctx),
        FixedPoints::Two { .. } => siegel_known(ctx),
    };
    match outcome {
        Ok(report) => serde_json::to_value(SiegelOutcome::Disk(report)).expect("serializable"),
        Err(PadicError::Condition(cf)) => {
            serde_json::to_value(SiegelOutcome::ConditionFails(cf)).expect("serializable")
        }
        Err(other) => unreachable!("siegel analysis on a valid context: {other}"),
    }
}

fn basin_value(ctx: &PadicContext, which: WhichFixed) -> Value {
    match basin_check(ctx, which) {
        Ok(report) => json!({
            "which": which_str(which),
            "status": "basin",
            "detail": serde_json::to_value(&report).expect("serializable"),
        }),
        Err(PadicError::Condition(cf)) => json!({
            "which": which_str(which),
            "status": "condition_fails",
            "detail": serde_json::to_value(&cf).expect("serializable"),
        }),
        Err(other) => unreachable!("basin analysis on a valid context: {other}"),
    }
}

/// The p-adic analysis block shared by `classify -p`, `padic` and `report`.
pub fn padic_block(ctx: &PadicContext, qmax: u32) -> Value {
    let classification = classify_padic(ctx, qmax);
    let (characters, basins) = match &ctx.fixed().points {
        FixedPoints::Double { .. } => (
            vec![
                serde_json::to_value(fp_character(ctx, WhichFixed::Unique).expect("double root"))
                    .expect("serializable"),
            ],
            Value::Null,
        ),
        FixedPoints::Two { .. } => (
            [WhichFixed::X1, WhichFixed::X2]
                .into_iter()
                .map(|w| {
                    serde_json::to_value(fp_character(ctx, w).expect("simple root"))
                        .expect("serializable")
                })
                .collect(),
            json!([
                basin_value(ctx, WhichFixed::X1),
                basin_value(ctx, WhichFixed::X2)
            ]),
        ),
    };
    json!({
        "p": ctx.p(),
        "classification": serde_json::to_value(&classification).expect("serializable"),
        "fixed_point_characters": characters,
        "siegel": siegel_value(ctx),
        "basin_checks": basins,
        "exclusions": {
            "pole": rational_value(&ctx.map().pole()),
            "note": "the pole and its iterated preimages are excluded from every verdict; \
                     convergence verdicts additionally exclude the other fixed point",
        },
    })
}

/// Target for the iterate command's distance column: the point the p-adic
/// classification converges to, when there is one.
pub fn padic_distance_target(ctx: &PadicContext, qmax: u32) -> Option<Rational> {
    match classify_padic(ctx, qmax) {
        PadicClassification::ConvergesTo { point, .. } => Some(
            point
                .as_rational()
                .expect("convergence verdicts carry rational points")
                .clone(),
        ),
        _ => None,
    }
}

pub fn map_value(map: &MoebiusMap<Rational>) -> Value {
    json!({
        "a": rational_value(map.a()),
        "b": rational_value(map.b()),
        "c": rational_value(map.c()),
        "pole": rational_value(&map.pole()),
        "c_minus_ab": rational_value(&map.c_minus_ab()),
    })
}

pub fn classify_document(
    map: &MoebiusMap<Rational>,
    qmax: u32,
    padic: Option<&PadicContext>,
    confirmation: Option<Value>,
) -> Value {
    let cls = moebius_dyn::classify_real(map, qmax);
    let rotation = moebius_dyn::theta_of(map).ok();
    let (alpha, beta) = map.alpha_beta();
    json!({
        "schema": SCHEMA,
        "command": "classify",
        "map": map_value(map),
        "discriminant": rational_value(&map.discriminant()),
        "alpha": algebraic_value(&alpha),
        "beta": algebraic_value(&beta),
        "fixed_points": fixed_points_value(map),
        "kq_scan": kq_scan_value(map, qmax),
        "real": real_value(&cls, rotation.as_ref(), qmax),
        "numeric_confirmation": confirmation.unwrap_or(Value::Null),
        "padic": padic.map(|ctx| padic_block(ctx, qmax)).unwrap_or(Value::Null),
    })
}
