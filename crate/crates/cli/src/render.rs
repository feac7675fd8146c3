//! Report assembly helpers: provenance-tagged JSON values and the text and
//! JSON renderings of the discrepancy report.

use serde_json::{json, Value};

use patsym_core::inflate::Mode;
use patsym_core::pattern;
use patsym_core::poly::{Poly, Rational};
use patsym_core::verify::ExpectationReport;

/// One rendered subcommand: the pieces the report envelope needs.
pub struct Rendered {
    pub inputs: Value,
    pub outputs: Value,
    pub mode: Option<String>,
    pub seed: Option<u64>,
    pub text: String,
}

/// Tags a computed numeric value with its provenance.
pub fn computed(value: Value) -> Value {
    json!({ "value": value, "provenance": "computed" })
}

/// Tags a whole array/object of computed values.
pub fn provenance_value(value: Value) -> Value {
    json!({ "values": value, "provenance": "computed" })
}

/// Exact rational as a canonical string: `8` or `31/2`.
pub fn fmt_rational(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Polynomial as ascending coefficient strings plus a display form.
pub fn poly_json(poly: &Poly) -> Value {
    let coeffs: Vec<String> = poly.coeffs().iter().map(fmt_rational).collect();
    json!({ "coefficients": coeffs, "display": poly.to_string() })
}

/// Per-pattern rational values with provenance, by canonical rank.
pub fn rational_values_json(k: usize, values: &[Rational]) -> Value {
    let entries: Vec<Value> = values
        .iter()
        .enumerate()
        .map(|(rank, v)| {
            json!({
                "pattern": pattern::lex_unrank(k, rank).to_string(),
                "value": fmt_rational(v),
            })
        })
        .collect();
    provenance_value(json!(entries))
}

pub fn render_report(report: &ExpectationReport, k: usize, seed: Option<u64>) -> Rendered {
    let mut text = String::new();
    match &report.sigma {
        Some(sigma) => text.push_str(&format!("subject {sigma} (m={})\n", report.m)),
        None => text.push_str(&format!("subject size m={}\n", report.m)),
    }
    for (n, values) in &report.exact {
        text.push_str(&format!("exact n={n}:"));
        for v in values {
            text.push_str(&format!(" {}", fmt_rational(v)));
        }
        text.push('\n');
    }
    for (n, values) in &report.product {
        text.push_str(&format!("product n={n}:"));
        for v in values {
            text.push_str(&format!(" {}", fmt_rational(v)));
        }
        text.push('\n');
    }
    if let Some(agree) = report.oracle_exact_equals_product {
        text.push_str(&format!("exact == product: {agree}\n"));
    }
    if let Some(est) = &report.estimates {
        text.push_str(&format!(
            "sampled n={} samples={} seed={}\n",
            est.n, est.samples, est.seed
        ));
    }
    for assessment in &report.modes {
        text.push_str(&format!(
            "mode {}: verdict {}",
            assessment.mode, assessment.verdict
        ));
        if let Some(achieved) = assessment.target_achieved {
            text.push_str(&format!(", targets achieved by subject: {achieved}"));
        }
        text.push('\n');
        for (rank, residual) in assessment.residuals.iter().enumerate() {
            if !residual.is_zero() {
                let tau = pattern::lex_unrank(k, rank);
                text.push_str(&format!("  residual Y({tau}): {residual}\n"));
            }
        }
    }
    for note in &report.notes {
        text.push_str(&format!("note: {note}\n"));
    }

    let exact_json: Vec<Value> = report
        .exact
        .iter()
        .map(|(n, values)| json!({ "n": n, "expectation": rational_values_json(k, values) }))
        .collect();
    let product_json: Vec<Value> = report
        .product
        .iter()
        .map(|(n, values)| json!({ "n": n, "expectation": rational_values_json(k, values) }))
        .collect();
    let estimates_json = report.estimates.as_ref().map(|est| {
        let entries: Vec<Value> = est
            .stats
            .iter()
            .enumerate()
            .map(|(rank, &(mean, hw))| {
                json!({
                    "pattern": pattern::lex_unrank(k, rank).to_string(),
                    "mean": mean,
                    "ci95": hw,
                })
            })
            .collect();
        json!({
            "n": est.n,
            "samples": est.samples,
            "seed": est.seed,
            "host_subsets": est.host_subsets.to_string(),
            "densities": provenance_value(json!(entries)),
        })
    });
    let modes_json: Vec<Value> = report
        .modes
        .iter()
        .map(|a| {
            let predictions: Vec<Value> = a
                .predictions
                .iter()
                .map(
                    |(n, values)| json!({ "n": n, "expectation": rational_values_json(k, values) }),
                )
                .collect();
            let residuals: Vec<Value> = a
                .residuals
                .iter()
                .enumerate()
                .map(|(rank, poly)| {
                    let mut entry = poly_json(poly);
                    entry.as_object_mut().expect("object").insert(
                        "pattern".into(),
                        json!(pattern::lex_unrank(k, rank).to_string()),
                    );
                    entry
                })
                .collect();
            json!({
                "mode": a.mode.to_string(),
                "verdict": a.verdict.to_string(),
                "targets_at_m": rational_values_json(k, &a.targets_at_m),
                "predictions": predictions,
                "residuals": residuals,
                "residuals_at_m": a.residuals_at_m.iter().map(fmt_rational).collect::<Vec<_>>(),
                "target_achieved": a.target_achieved,
            })
        })
        .collect();

    let paper = report
        .modes
        .iter()
        .find(|a| a.mode == Mode::Paper)
        .map(|a| a.verdict.to_string());
    let derived = report
        .modes
        .iter()
        .find(|a| a.mode == Mode::Derived)
        .map(|a| a.verdict.to_string());

    Rendered {
        inputs: json!({
            "subject": report.sigma.as_ref().map(|p| p.to_string()),
            "m": report.m,
            "k": report.k,
        }),
        outputs: json!({
            "exact": exact_json,
            "product": product_json,
            "oracle_exact_equals_product": report.oracle_exact_equals_product,
            "estimates": estimates_json,
            "modes": modes_json,
            "verdicts": { "paper": paper, "derived": derived },
            "notes": report.notes,
        }),
        mode: None,
        seed,
        text,
    }
}
