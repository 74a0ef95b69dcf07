//! Command implementations behind the binary; each returns a JSON document.

use serde_json::{json, Value};

use super::formats::{
    components_json, parse_json, parse_rat, point_json, rat_to_string, word_to_json, ComponentsDoc, MapDoc,
    NormalFormJson,
};
use super::generate::{generate_instance, normal_form_from_params, FormType, Instance};
use super::grammar::{parse_poly_in, print_poly, print_target_poly, print_upoly, SOURCE_VARS};
use super::verify::verify_report;
use crate::analyze::branch_locus_detailed;
use crate::automorph::random_tame;
use crate::normalize::{jcurve_ratio_check, normalize_map, JCurveInput, JCurveVerdict};
use crate::rectify::{rectify_coordinate, RectifyResult};
use crate::{Error, Result};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NOT_IN_CLASS: i32 = 3;
pub const EXIT_INCONSISTENT: i32 = 4;

/// Process exit code for an error.
pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Parse { .. }
        | Error::InvalidParams(_)
        | Error::DegenerateMap
        | Error::ZeroPolynomial
        | Error::ConstantPolynomial
        | Error::NegativeExponent(_) => EXIT_USAGE,
        Error::NotInClass(_) | Error::Lemma1MiddleCoefficients(_) | Error::RectifyFailed(_) => {
            EXIT_NOT_IN_CLASS
        }
        _ => EXIT_INCONSISTENT,
    }
}

pub fn error_json(e: &Error) -> Value {
    let mut v = json!({ "error": e.to_string(), "exit_code": exit_code(e) });
    if let Error::Parse { offset, expected } = e {
        v["offset"] = json!(offset);
        v["expected"] = json!(expected);
    }
    v
}

/// A command's document and exit code.
pub struct Outcome {
    pub doc: Value,
    pub code: i32,
}

impl Outcome {
    fn ok(doc: Value) -> Self {
        Outcome { doc, code: EXIT_OK }
    }
}

fn load_map_doc(text: &str) -> Result<MapDoc> {
    parse_json(text)
}

pub fn analyze(map_text: &str, seed: u64) -> Result<Outcome> {
    let f = load_map_doc(map_text)?.map()?;
    let b = branch_locus_detailed(&f, seed)?;
    let pieces: Vec<Value> = b
        .pieces
        .iter()
        .map(|p| json!({ "defining": print_target_poly(&p.defining), "status": p.status }))
        .collect();
    Ok(Outcome::ok(json!({
        "degree": b.degree,
        "branch_locus": b.curve.to_uv_string(),
        "critical_values": b.critical.to_uv_string(),
        "nonproper_values": b.nonproper.to_uv_string(),
        "pieces": pieces,
    })))
}

pub fn rectify(poly: &str) -> Result<Outcome> {
    let p = parse_poly_in(poly, SOURCE_VARS)?;
    Ok(match rectify_coordinate(&p)? {
        RectifyResult::Rectified { alpha } => Outcome::ok(json!({
            "rectifiable": true,
            "alpha": components_json(&alpha),
            "word": word_to_json(&alpha),
        })),
        RectifyResult::NotRectifiable { stuck, reason } => Outcome {
            doc: json!({ "rectifiable": false, "stuck": print_poly(&stuck), "reason": reason }),
            code: EXIT_NOT_IN_CLASS,
        },
    })
}

pub fn normalize(map_text: &str, seed: u64, trace: bool) -> Result<Outcome> {
    let f = load_map_doc(map_text)?.map()?;
    let t = normalize_map(&f, seed)?;
    let nf = t.final_form.map();
    let mut doc = json!({
        "normal_form": NormalFormJson::from(&t.final_form),
        "normal_map": [print_poly(&nf.f1), print_poly(&nf.f2)],
        "distinguished_point": point_json(&t.distinguished_point()),
        "target_word": components_json(&t.target_word()),
        "source_word": components_json(&t.source_word()),
    });
    if trace {
        doc["trace"] = json!({
            "degree": t.degree,
            "branch_locus": t.branch_locus.to_uv_string(),
            "alpha_target": word_to_json(&t.alpha_target),
            "beta_source": word_to_json(&t.beta_source),
            "shift_c": rat_to_string(&t.shift_c),
            "semi_monomial": print_poly(&t.semi.to_poly()),
            "m": t.m,
            "n": t.n,
            "k": t.k,
            "l": t.l,
            "h": print_upoly(&t.h_poly, "x"),
            "b": print_upoly(&t.b_poly, "x"),
            "c": print_upoly(&t.c_poly, "x"),
            "gamma1": word_to_json(&t.gamma1),
            "gamma2": word_to_json(&t.gamma2),
        });
    }
    Ok(Outcome::ok(doc))
}

pub struct GenerateArgs {
    pub ty: String,
    pub d: u32,
    pub m: Option<u32>,
    pub n: Option<u32>,
    pub a: Option<String>,
    pub seed: u64,
    pub word_len: usize,
    pub deg_bound: usize,
    pub coeff_bound: i64,
}

pub fn generate(args: &GenerateArgs) -> Result<Outcome> {
    let ty: FormType = args.ty.parse()?;
    let a = match &args.a {
        Some(s) => s.split(',').map(parse_rat).collect::<Result<Vec<_>>>()?,
        None => Vec::new(),
    };
    let nf = normal_form_from_params(ty, args.d, args.m, args.n, &a)?;
    let inst = generate_instance(&nf, args.seed, args.word_len, args.deg_bound, args.coeff_bound);
    Ok(Outcome::ok(
        serde_json::to_value(inst.to_doc()).expect("serialisable"),
    ))
}

pub fn verify(map_text: &str, samples: usize, seed: u64) -> Result<Outcome> {
    let doc = load_map_doc(map_text)?;
    let f = doc.map()?;
    let inst = Instance::from_doc(&doc)?;
    let report = verify_report(&f, inst.as_ref(), samples, seed)?;
    let code = if report.passed() {
        EXIT_OK
    } else {
        EXIT_INCONSISTENT
    };
    Ok(Outcome {
        doc: serde_json::to_value(&report).expect("serialisable"),
        code,
    })
}

pub fn jcurve(components_text: &str, probes: usize, seed: u64) -> Result<Outcome> {
    let doc: ComponentsDoc = parse_json(components_text)?;
    let input = JCurveInput {
        components: doc.parse_components()?,
        probes: (0..probes as u64)
            .map(|k| random_tame(seed.wrapping_add(k), 2, 2, 3))
            .collect(),
    };
    let r = jcurve_ratio_check(&input)?;
    let comps: Vec<Value> = r
        .components
        .iter()
        .map(|c| {
            json!({
                "implicit": print_target_poly(&c.implicit),
                "not_line": c.not_line,
                "derivative_gcd": print_upoly(&c.derivative_gcd, "t"),
            })
        })
        .collect();
    let verdict = match r.verdict {
        JCurveVerdict::CandidateJCurve => "candidate_j_curve",
        JCurveVerdict::NotJCurve => "not_j_curve",
    };
    Ok(Outcome::ok(json!({
        "ratio_equal": r.ratio_equal,
        "components": comps,
        "verdict": verdict,
    })))
}
