//! Report envelopes and per-command rendering.

use crate::config::{OutputFormat, RunConfig};
use num_bigint::BigInt;
use pellian::approx::{best_records, exponent_report, verify_inequality, ApproxRecord};
use pellian::pell::{class_representatives, solve_pell_capped};
use pellian::system::{
    effective_bound, setup_system_prec, solve_system_route, BoundRoute, EffectiveBoundReport,
};
use pellian::unit::{fundamental_unit_prec, regulator_check_prec, totally_positive_unit_prec, Unit};
use pellian::{Error, IntervalReal, Result, Round};
use serde::Serialize;
use serde_json::{json, Value};

/// Deterministic envelope every command emits in JSON mode.
#[derive(Serialize)]
pub struct ReportEnvelope {
    pub command: String,
    pub version: &'static str,
    pub config: Value,
    pub inputs: Value,
    pub outputs: Value,
    pub derived_constants: Value,
    pub timing_ms: Option<u128>,
}

pub struct Rendered {
    pub stdout: String,
}

pub struct CommandOutput {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub derived_constants: Value,
    pub csv: String,
    pub text: String,
}

pub fn render(cfg: &RunConfig, out: CommandOutput, elapsed_ms: Option<u128>) -> Result<Rendered> {
    let body = match cfg.format {
        OutputFormat::Json => {
            let envelope = ReportEnvelope {
                command: out.command,
                version: env!("CARGO_PKG_VERSION"),
                config: json!({
                    "precision_start": cfg.precision_start,
                    "precision_ceiling": cfg.precision_ceiling,
                    "seed": cfg.seed,
                }),
                inputs: out.inputs,
                outputs: out.outputs,
                derived_constants: out.derived_constants,
                timing_ms: elapsed_ms,
            };
            let mut s = serde_json::to_string_pretty(&envelope)
                .map_err(|e| Error::InvalidArgument(format!("serialization: {e}")))?;
            s.push('\n');
            s
        }
        OutputFormat::Csv => out.csv,
        OutputFormat::Text => out.text,
    };
    Ok(Rendered { stdout: body })
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

pub fn iv_lo(iv: &IntervalReal) -> String {
    iv.lo().to_decimal_round(24, Round::Down)
}

pub fn iv_hi(iv: &IntervalReal) -> String {
    iv.hi().to_decimal_round(24, Round::Up)
}

/// Higher-precision rendering for quantities like `2 - tau` whose whole
/// point is their microscopic distance from a round number.
pub fn iv_hi_long(iv: &IntervalReal) -> String {
    iv.hi().to_decimal_round(80, Round::Up)
}

fn unit_json(u: &Unit) -> Value {
    json!({
        "element": to_value(&u.element),
        "display": u.element.to_string(),
        "norm": u.norm,
        "regulator": to_value(&u.regulator),
        "totally_positive": u.totally_positive,
    })
}

pub fn cmd_unit(cfg: &RunConfig, d: &BigInt) -> Result<CommandOutput> {
    let prec = cfg.precision()?;
    let fundamental = fundamental_unit_prec(d, prec.start)?;
    let positive = totally_positive_unit_prec(d, prec.start)?;
    let check = regulator_check_prec(d, prec);
    let (check_json, check_csv) = match &check {
        Ok(c) => (
            json!({
                "applicable": true,
                "regulator": to_value(&c.regulator),
                "bound": to_value(&c.bound),
                "holds": true,
            }),
            format!("true,{},{}", iv_lo(&c.regulator), iv_hi(&c.regulator)),
        ),
        Err(Error::InvalidArgument(reason)) => (
            json!({ "applicable": false, "reason": reason }),
            "false,,".to_owned(),
        ),
        Err(e) => return Err(e.clone()),
    };
    let outputs = json!({
        "fundamental": unit_json(&fundamental),
        "totally_positive": unit_json(&positive),
        "regulator_check": check_json,
    });
    let csv = format!(
        "D,x,y,norm,totally_positive,log_lo,log_hi,check_applicable,check_regulator_lo,check_regulator_hi\n{},{},{},{},{},{},{},{}\n",
        d,
        positive.element.x(),
        positive.element.y(),
        positive.norm,
        positive.totally_positive,
        iv_lo(&positive.regulator),
        iv_hi(&positive.regulator),
        check_csv,
    );
    let text = format!(
        "D = {d}\nfundamental unit       : {} (norm {})\ntotally positive unit  : {} (norm {})\nlog of positive unit   : [{}, {}]\nregulator check        : {}\n",
        fundamental.element,
        fundamental.norm,
        positive.element,
        positive.norm,
        iv_lo(&positive.regulator),
        iv_hi(&positive.regulator),
        match &check {
            Ok(c) => format!("R_D in [{}, {}] < bound [{}, {}]",
                iv_lo(&c.regulator), iv_hi(&c.regulator), iv_lo(&c.bound), iv_hi(&c.bound)),
            Err(Error::InvalidArgument(r)) => format!("not applicable ({r})"),
            Err(e) => format!("error: {e}"),
        }
    );
    Ok(CommandOutput {
        command: "unit".into(),
        inputs: json!({ "D": d.to_string() }),
        outputs,
        derived_constants: Value::Null,
        csv,
        text,
    })
}

pub fn cmd_pell(cfg: &RunConfig, d: &BigInt, n: &BigInt, cap: u64) -> Result<CommandOutput> {
    let prec = cfg.precision()?;
    let unit = totally_positive_unit_prec(d, prec.start)?;
    let reps = class_representatives(d, n, &unit)?;
    let cap_big = BigInt::from(cap);
    let solutions = solve_pell_capped(d, n, &cap_big)?;
    let outputs = json!({
        "unit": unit_json(&unit),
        "class_representatives": to_value(&reps),
        "solutions": to_value(&solutions),
        "count": solutions.len(),
    });
    let mut csv = String::from("x,y,class_index,power\n");
    for s in &solutions {
        csv.push_str(&format!("{},{},{},{}\n", s.x, s.y, s.class_index, s.power));
    }
    let mut text = format!(
        "x^2 - {d} y^2 = {n}, y <= {cap}\nclasses: {}\n",
        reps.len()
    );
    for s in &solutions {
        text.push_str(&format!("  ({}, {})  [class {}, power {}]\n", s.x, s.y, s.class_index, s.power));
    }
    Ok(CommandOutput {
        command: "pell".into(),
        inputs: json!({ "D": d.to_string(), "N": n.to_string(), "cap": cap }),
        outputs,
        derived_constants: Value::Null,
        csv,
        text,
    })
}

fn bound_summary(rep: &EffectiveBoundReport) -> Value {
    json!({
        "route": to_value(&rep.route),
        "log10_x_bound": to_value(&rep.x_log10_bound),
        "u_exponent": to_value(&rep.u_exponent),
        "has_log_star_factor": rep.has_log_star_factor,
    })
}

pub fn cmd_system(
    cfg: &RunConfig,
    a: &BigInt,
    b: &BigInt,
    u: &BigInt,
    v: &BigInt,
    cap: u64,
    routes: &[BoundRoute],
) -> Result<CommandOutput> {
    let prec = cfg.precision()?;
    let ctx = setup_system_prec(a, b, u, v, prec)?;
    let cap_big = BigInt::from(cap);
    let set = solve_system_route(&ctx, &cap_big, routes[0])?;
    let mut bounds = vec![set.bound.clone()];
    for route in &routes[1..] {
        bounds.push(effective_bound(&ctx, *route)?);
    }
    let outputs = json!({
        "context": to_value(&ctx),
        "solutions": to_value(&set.solutions),
        "count": set.solutions.len(),
        "complete_under_cap": set.complete_under_cap,
        "certified_complete": set.certified_complete,
        "bounds": bounds.iter().map(bound_summary).collect::<Vec<_>>(),
    });
    let derived = json!(bounds.iter().map(to_value).collect::<Vec<_>>());
    let mut csv = String::from("x,y,z\n");
    for s in &set.solutions {
        csv.push_str(&format!("{},{},{}\n", s.x, s.y, s.z));
    }
    let mut text = format!(
        "x^2 - {a} y^2 = {u}, z^2 - {b} y^2 = {v}, y <= {cap}\nsolutions:\n"
    );
    if set.solutions.is_empty() {
        text.push_str("  (none)\n");
    }
    for s in &set.solutions {
        text.push_str(&format!("  ({}, {}, {})\n", s.x, s.y, s.z));
    }
    text.push_str(&format!(
        "complete under cap: {}\ncertified complete: {}\n",
        set.complete_under_cap, set.certified_complete
    ));
    for bound in &bounds {
        text.push_str(&format!(
            "{:?} route: log10(X bound) <= {}\n",
            bound.route,
            iv_hi(&bound.x_log10_bound)
        ));
    }
    Ok(CommandOutput {
        command: "system".into(),
        inputs: json!({
            "a": a.to_string(), "b": b.to_string(),
            "u": u.to_string(), "v": v.to_string(),
            "cap": cap,
            "routes": routes.iter().map(|r| to_value(r)).collect::<Vec<_>>(),
        }),
        outputs,
        derived_constants: derived,
        csv,
        text,
    })
}

pub fn cmd_exponent(a: &BigInt, b: &BigInt, routes: &[BoundRoute]) -> Result<CommandOutput> {
    let mut reports = Vec::new();
    for route in routes {
        reports.push(exponent_report(a, b, *route)?);
    }
    let outputs = json!({ "reports": reports.iter().map(to_value).collect::<Vec<_>>() });
    let mut csv = String::from(
        "a,b,route,tau_lo,tau_hi,mu_eff_upper_hi,regulator_product_lo,regulator_product_hi,has_log_star,threshold_log10_hi\n",
    );
    for r in &reports {
        csv.push_str(&format!(
            "{},{},{:?},{},{},{},{},{},{},{}\n",
            r.a,
            r.b,
            r.route,
            iv_lo(&r.tau),
            iv_hi(&r.tau),
            iv_hi_long(&r.mu_eff_upper),
            iv_lo(&r.regulator_product),
            iv_hi(&r.regulator_product),
            r.has_log_star_factor,
            iv_hi(&r.threshold_log10),
        ));
    }
    let mut text = format!("pair (sqrt {a}, sqrt {b})\n");
    for r in &reports {
        text.push_str(&format!(
            "{:?}: tau in [{}, {}], mu_eff <= {}, threshold ~ 10^{}\n",
            r.route,
            iv_lo(&r.tau),
            iv_hi(&r.tau),
            iv_hi(&r.mu_eff_upper),
            iv_hi(&r.threshold_log10),
        ));
    }
    Ok(CommandOutput {
        command: "exponent".into(),
        inputs: json!({ "a": a.to_string(), "b": b.to_string() }),
        outputs,
        derived_constants: json!(reports
            .iter()
            .map(|r| to_value(&r.exponent_factors))
            .collect::<Vec<_>>()),
        csv,
        text,
    })
}

pub fn cmd_verify(
    a: &BigInt,
    b: &BigInt,
    c: &(BigInt, BigInt),
    mu: &(BigInt, BigInt),
    q_max: u64,
) -> Result<CommandOutput> {
    let report = verify_inequality(a, b, c, mu, q_max)?;
    let outputs = to_value(&report);
    let csv = format!(
        "a,b,c,mu,q_max,pass,n_violations,worst_q,worst_margin_lo,exact_fallbacks\n{},{},{}/{},{}/{},{},{},{},{},{},{}\n",
        a, b, c.0, c.1, mu.0, mu.1, q_max, report.pass, report.n_violations, report.worst_q,
        iv_lo(&report.worst_margin), report.exact_fallbacks,
    );
    let text = format!(
        "max(||q sqrt {a}||, ||q sqrt {b}||) > ({}/{}) q^(1 - {}/{}) for 1 <= q <= {q_max}: {}\nworst q: {} (margin >= {})\n",
        c.0, c.1, mu.0, mu.1,
        if report.pass { "PASS" } else { "FAIL" },
        report.worst_q,
        iv_lo(&report.worst_margin),
    );
    Ok(CommandOutput {
        command: "verify".into(),
        inputs: json!({
            "a": a.to_string(), "b": b.to_string(),
            "c": format!("{}/{}", c.0, c.1),
            "mu": format!("{}/{}", mu.0, mu.1),
            "q_max": q_max,
        }),
        outputs,
        derived_constants: Value::Null,
        csv,
        text,
    })
}

fn record_row(r: &ApproxRecord) -> String {
    let da = r.dist_a.value_interval(96);
    let db = r.dist_b.value_interval(96);
    let dmax = if r.max_is_a { &da } else { &db };
    let le = match &r.local_exponent {
        Some(iv) => iv_lo(iv),
        None => String::new(),
    };
    format!("{},{},{},{},{}\n", r.q, iv_lo(&da), iv_lo(&db), iv_lo(dmax), le)
}

pub fn cmd_records(a: &BigInt, b: &BigInt, q_max: u64) -> Result<CommandOutput> {
    let records = best_records(a, b, q_max)?;
    let mut csv = String::from("q,dist_a,dist_b,max_dist,local_exponent\n");
    for r in &records {
        csv.push_str(&record_row(r));
    }
    let outputs = json!({ "records": to_value(&records), "count": records.len() });
    let mut text = format!("approximation records for (sqrt {a}, sqrt {b}), q <= {q_max}\n");
    for r in &records {
        text.push_str(&format!("  q = {}\n", r.q));
    }
    Ok(CommandOutput {
        command: "records".into(),
        inputs: json!({ "a": a.to_string(), "b": b.to_string(), "q_max": q_max }),
        outputs,
        derived_constants: Value::Null,
        csv,
        text,
    })
}

#[allow(clippy::too_many_arguments)]
pub fn cmd_sweep(
    a_range: (i64, i64),
    b_range: (i64, i64),
    route: BoundRoute,
    q_max: u64,
    c: Option<(BigInt, BigInt)>,
    mu: Option<(BigInt, BigInt)>,
) -> Result<CommandOutput> {
    let header = "a,b,admissible,reason,tau_lo,tau_hi,mu_eff_upper_hi,regulator_product_lo,regulator_product_hi,has_log_star,threshold_log10_hi,verify_pass,verify_violations\n";
    let mut csv = String::from(header);
    let mut rows = Vec::new();
    for a in a_range.0..=a_range.1 {
        for b in b_range.0..=b_range.1 {
            let ab = (BigInt::from(a), BigInt::from(b));
            let reason = admissibility_reason(&ab.0, &ab.1);
            if let Some(reason) = reason {
                csv.push_str(&format!("{a},{b},false,{reason},,,,,,,,,\n"));
                rows.push(json!({ "a": a, "b": b, "admissible": false, "reason": reason }));
                continue;
            }
            let rep = exponent_report(&ab.0, &ab.1, route)?;
            let (vp, vv) = match (&c, &mu) {
                (Some(c), Some(mu)) => {
                    let v = verify_inequality(&ab.0, &ab.1, c, mu, q_max)?;
                    (v.pass.to_string(), v.n_violations.to_string())
                }
                _ => (String::new(), String::new()),
            };
            csv.push_str(&format!(
                "{a},{b},true,,{},{},{},{},{},{},{},{},{}\n",
                iv_lo(&rep.tau),
                iv_hi(&rep.tau),
                iv_hi_long(&rep.mu_eff_upper),
                iv_lo(&rep.regulator_product),
                iv_hi(&rep.regulator_product),
                rep.has_log_star_factor,
                iv_hi(&rep.threshold_log10),
                vp,
                vv,
            ));
            rows.push(json!({
                "a": a, "b": b, "admissible": true,
                "report": to_value(&rep),
                "verify_pass": if vp.is_empty() { Value::Null } else { json!(vp == "true") },
            }));
        }
    }
    let text = csv.clone();
    Ok(CommandOutput {
        command: "sweep".into(),
        inputs: json!({
            "a_range": format!("{}..{}", a_range.0, a_range.1),
            "b_range": format!("{}..{}", b_range.0, b_range.1),
            "route": to_value(&route),
            "q_max": q_max,
            "c": c.map(|c| format!("{}/{}", c.0, c.1)),
            "mu": mu.map(|m| format!("{}/{}", m.0, m.1)),
        }),
        outputs: json!({ "pairs": rows }),
        derived_constants: Value::Null,
        csv,
        text,
    })
}

fn admissibility_reason(a: &BigInt, b: &BigInt) -> Option<String> {
    use pellian::quad::is_square;
    if a < &BigInt::from(2) || is_square(a) {
        return Some(format!("a={a} square or below 2"));
    }
    if b < &BigInt::from(2) || is_square(b) {
        return Some(format!("b={b} square or below 2"));
    }
    if is_square(&(a * b)) {
        return Some(format!("ab={} square", a * b));
    }
    None
}
