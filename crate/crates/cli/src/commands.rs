use std::fs::File;
use std::io::BufWriter;
use std::path::Path;

use anyhow::{bail, Context, Result};
use selfsim::analysis::{attractor_diameter, bounded_turning_constant, Certification, TurningOptions, TurningReport};
use selfsim::io::{parse_spec, write_csv, write_svg, Quantity, Table};
use selfsim::isomorphism::{
    bilipschitz_decision, distortion_scan, holder_exponent, sharpness_witness, Decision, DirectionScan, Profile,
    ProfileOptions, ScanOptions,
};
use selfsim::{jordan_check, Config, JordanCertificate, JordanVerdict, LinearZipper, Zipper};
use serde_json::{json, Value};

use crate::Command;

/// Relative spread of `M0` above which the sharpness equality fails.
const WITNESS_SPREAD: f64 = 1e-9;

pub struct Outcome {
    pub code: i32,
    pub summary: String,
    pub results: Value,
}

pub fn run(command: &Command, config: &Config) -> Result<Outcome> {
    match command {
        Command::Validate { spec } => validate(spec),
        Command::Render { spec, depth, out } => render(spec, *depth, out, config),
        Command::Analyze { spec, depth, certify_turning, samples } => {
            analyze(spec, *depth, *certify_turning, *samples, config)
        }
        Command::Compare { first, second, pairs, depth, knots } => {
            let options = ScanOptions { tol: config.eval_tol, ..ScanOptions::new(*pairs, *depth, config.seed) }
                .with_knots((*knots).into());
            compare(first, second, &options, config)
        }
        Command::Witness { first, second, k_max, index } => witness(first, second, *k_max, *index),
    }
}

fn load(path: &Path) -> Result<Zipper> {
    parse_spec(path).with_context(|| format!("cannot load {}", path.display()))
}

fn exact(value: f64) -> Quantity {
    Quantity::Exact { value }
}

fn validate(spec: &Path) -> Result<Outcome> {
    let z = load(spec)?;
    let ratios: Vec<Quantity> = z.ratios().into_iter().map(exact).collect();
    Ok(Outcome {
        code: 0,
        summary: format!(
            "valid: {} maps in dimension {}, signature {}, worst vertex residual {:.3e}",
            z.m(),
            z.dim(),
            z.signature(),
            z.worst_residual()
        ),
        results: json!({
            "valid": true,
            "m": z.m(),
            "dimension": z.dim(),
            "signature": z.signature().bits(),
            "ratios": ratios,
            "worst_vertex_residual": exact(z.worst_residual()),
        }),
    })
}

fn render(spec: &Path, depth: usize, out: &Path, config: &Config) -> Result<Outcome> {
    let z = load(spec)?;
    let points = z.polyline(depth, config)?;
    let file = BufWriter::new(File::create(out).with_context(|| format!("cannot create {}", out.display()))?);
    match out.extension().and_then(|e| e.to_str()) {
        Some("svg") => write_svg(&points, &mut { file })?,
        Some("csv") => write_csv(&points, file)?,
        _ => bail!("output must end in .svg or .csv: {}", out.display()),
    }
    Ok(Outcome {
        code: 0,
        summary: format!("wrote {} points to {}", points.len(), out.display()),
        results: json!({ "depth": depth, "points": points.len(), "out": out }),
    })
}

fn jordan_json(c: &JordanCertificate) -> Value {
    json!({
        "verdict": c.verdict,
        "depth": c.depth,
        "separation_margin": c.margin.map(|value| Quantity::LowerBound { value }),
        "endpoint_gap": exact(c.endpoint_gap),
        "pairs_scanned": c.pairs_scanned,
        "pairs_inconclusive": c.pairs_inconclusive,
        "diameter_upper": Quantity::CertifiedUpperBound { value: c.diameter_hi },
        "cover_radius": Quantity::CertifiedUpperBound { value: c.cover_radius },
    })
}

fn turning_json(t: &TurningReport) -> Value {
    let upper = t.m_certified_upper.map(|value| match t.certification {
        Certification::Segment => exact(value),
        _ => Quantity::CertifiedUpperBound { value },
    });
    json!({
        "m_lower": Quantity::LowerBound { value: t.m_lower },
        "m_certified_upper": upper,
        "certification": t.certification,
        "depth": t.depth,
        "vertex_depth": t.vertex_depth,
        "argmax_pair": [Quantity::Sampled { value: t.argmax_pair.0 }, Quantity::Sampled { value: t.argmax_pair.1 }],
        "pairs_evaluated": t.pairs_evaluated,
        "coincident_pairs": t.coincident_pairs,
    })
}

fn verdict_text(v: &JordanVerdict) -> String {
    match v {
        JordanVerdict::VerifiedToDepth { depth } => format!("verified to depth {depth}"),
        JordanVerdict::ViolationAt { first, second } => format!("violation at cylinders {first} and {second}"),
        JordanVerdict::Inconclusive { depth } => format!("inconclusive at depth {depth}"),
    }
}

fn analyze(spec: &Path, depth: usize, certify: bool, samples: usize, config: &Config) -> Result<Outcome> {
    let z = load(spec)?;
    let jordan = jordan_check(&z, depth, 0.0, config)?;
    let diameter = attractor_diameter(&z, depth, config)?;
    let mut summary =
        format!("Jordan: {}\ndiameter: [{}, {}]", verdict_text(&jordan.verdict), diameter.lo, diameter.hi);
    if jordan.is_violation() {
        return Ok(Outcome {
            code: 2,
            summary,
            results: json!({ "jordan": jordan_json(&jordan), "diameter": Quantity::from(diameter), "turning": null }),
        });
    }
    let mut options = TurningOptions::new(depth, samples);
    options.certify = certify;
    let turning = bounded_turning_constant(&z, &LinearZipper::for_zipper(&z), &options, config)?;
    summary += &format!("\nturning constant: M >= {}", turning.m_lower);
    if let Some(hi) = turning.m_certified_upper {
        summary += &format!(", M <= {hi}");
    }
    Ok(Outcome {
        code: 0,
        summary,
        results: json!({
            "jordan": jordan_json(&jordan),
            "diameter": Quantity::from(diameter),
            "turning": turning_json(&turning),
        }),
    })
}

fn direction_json(d: &DirectionScan) -> Value {
    let m_used = match d.m_status {
        selfsim::isomorphism::BoundStatus::Certified => Quantity::CertifiedUpperBound { value: d.m_used },
        selfsim::isomorphism::BoundStatus::LowerBound => Quantity::LowerBound { value: d.m_used },
    };
    let rows = d.records.iter().map(|r| vec![r.t1, r.t2, r.d, r.d_image, r.holder_ratio]).collect();
    json!({
        "constant": { "value": d.constant, "status": d.m_status },
        "m_used": m_used,
        "domain_diameter_lower": exact(d.diameters_used.0),
        "image_diameter_upper": Quantity::CertifiedUpperBound { value: d.diameters_used.1 },
        "p_min": exact(d.p_min),
        "max_holder_ratio": Quantity::Sampled { value: d.max_holder_ratio },
        "coincident_pairs": d.coincident,
        "violations": d.violations,
        "records": Table::sampled(vec!["t1", "t2", "d", "d_image", "holder_ratio"], rows),
    })
}

fn compare(first: &Path, second: &Path, options: &ScanOptions, config: &Config) -> Result<Outcome> {
    let (a, b) = (load(first)?, load(second)?);
    if a.m() != b.m() {
        return Ok(not_isomorphic(format!("map counts differ ({} vs {})", a.m(), b.m()), Value::Null));
    }
    let pa = Profile::analyze(&a, &ProfileOptions::for_zipper(&a), config)?;
    let pb = Profile::analyze(&b, &ProfileOptions::for_zipper(&b), config)?;
    let decision = bilipschitz_decision(&pa, &pb);
    let profiles = json!({
        "first": { "jordan": jordan_json(&pa.jordan), "turning": turning_json(&pa.turning), "diameter": Quantity::from(pa.diameter) },
        "second": { "jordan": jordan_json(&pb.jordan), "turning": turning_json(&pb.turning), "diameter": Quantity::from(pb.diameter) },
    });
    if let Decision::NotIsomorphic { reason } = &decision.decision {
        return Ok(not_isomorphic(reason.clone(), json!({ "decision": decision, "profiles": profiles })));
    }
    let holder = holder_exponent(&a.ratios(), &b.ratios())?;
    let scan = distortion_scan(&pa, &pb, options, config)?;
    let passed = scan.passed();
    let summary = format!(
        "decision: {}\nalpha = {} (map {}, {})\nforward: C = {}, max ratio {}, {} violations\nbackward: C = {}, max ratio {}, {} violations\nverdict: {}{}",
        match decision.decision {
            Decision::BiLipschitz => "bi-Lipschitz".to_string(),
            Decision::BiHolder { alpha } => format!("bi-Hölder with exponent {alpha}"),
            Decision::NotIsomorphic { .. } => unreachable!(),
        },
        holder.alpha,
        holder.argmin_index,
        match holder.direction {
            selfsim::isomorphism::Direction::POverQ => "p/q",
            selfsim::isomorphism::Direction::QOverP => "q/p",
        },
        scan.forward.constant,
        scan.forward.max_holder_ratio,
        scan.forward.violations.len(),
        scan.backward.constant,
        scan.backward.max_holder_ratio,
        scan.backward.violations.len(),
        if passed { "pass" } else { "fail" },
        if scan.certified() { "" } else { " (constant uses a lower bound on M; bound unverified against a certified M)" },
    );
    Ok(Outcome {
        code: if passed { 0 } else { 2 },
        summary,
        results: json!({
            "decision": decision,
            "holder": {
                "alpha": exact(holder.alpha),
                "argmin_index": holder.argmin_index,
                "direction": holder.direction,
            },
            "profiles": profiles,
            "scan": {
                "pairs": options.pairs,
                "depth": options.depth,
                "seed": options.seed,
                "knots": options.knots,
                "verdict": if passed { "pass" } else { "fail" },
                "forward": direction_json(&scan.forward),
                "backward": direction_json(&scan.backward),
            },
        }),
    })
}

fn not_isomorphic(reason: String, details: Value) -> Outcome {
    Outcome {
        code: 2,
        summary: format!("not isomorphic: {reason}"),
        results: json!({ "verdict": "not-isomorphic", "reason": reason, "details": details }),
    }
}

fn witness(first: &Path, second: &Path, k_max: usize, index: Option<usize>) -> Result<Outcome> {
    let (a, b) = (load(first)?, load(second)?);
    let (p, q) = (a.ratios(), b.ratios());
    let i = match index {
        Some(i) => i,
        None => {
            let alpha = holder_exponent(&p, &q)?.alpha;
            (0..p.len().min(q.len()))
                .find(|&i| ((q[i].ln() / p[i].ln()) - alpha).abs() <= 1e-12 * alpha)
                .map(|i| i + 1)
                .context("no map attains the exponent as log q_i / log p_i")?
        }
    };
    let series = sharpness_witness(&a, &b, i, k_max)?;
    let holds = series.m0_spread < WITNESS_SPREAD;
    let rows = series.records.iter().map(|r| vec![r.k as f64, r.d, r.d_image, r.m0]).collect();
    let slope = series.fit.map(|f| f.slope);
    Ok(Outcome {
        code: if holds { 0 } else { 2 },
        summary: format!(
            "map {i}, {} pairs: M0 spread {:.3e}, log-log slope {}, alpha {}",
            series.records.len(),
            series.m0_spread,
            slope.map_or("n/a".to_string(), |s| s.to_string()),
            series.alpha
        ),
        results: json!({
            "index": i,
            "alpha": exact(series.alpha),
            "m0_spread": exact(series.m0_spread),
            "log_log_slope": slope.map(exact),
            "equality_holds": holds,
            "records": Table { status: "exact", columns: vec!["k", "d", "d_image", "m0"], rows },
            "points": series.records,
        }),
    })
}
