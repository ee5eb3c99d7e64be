use std::fmt::Write as _;
use std::sync::Arc;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use vsi_core::cluster::{
    build_complex, build_complex_with, complex_to_json, export_complex, positive_roots, truncated_complex, verify_sphere,
    verify_walls, wall_labels, ExportFormat, ExtMode, TiltingComplex,
};
use vsi_core::decomposition::{d_beta_halfspaces, generic_decomposition, DecompositionOptions};
use vsi_core::presentation::{canonical_decomp, minimal_decomp};
use vsi_core::{DimVector, Field, IntMatrix, Presentation, ProjDecomp, Quiver, Representation};

use crate::{parse_vector, selftest, CliError, Command, ComplexAction, Output, RunConfig};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn ok(json: Value, text: String) -> Result<Output, CliError> {
    Ok(Output { json, text, verified: true })
}

fn header(cfg: &RunConfig) -> Value {
    json!({
        "schema": 1,
        "quiver": serde_json::from_str::<Value>(&cfg.quiver.to_json()).expect("quiver json"),
        "field": cfg.field.to_string(),
        "seed": cfg.seed,
        "trials": cfg.trials,
    })
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Some(b), Value::Object(e)) = (base.as_object_mut(), extra) {
        b.extend(e);
    }
    base
}

fn options(cfg: &RunConfig) -> DecompositionOptions {
    DecompositionOptions { trials: cfg.trials, ..DecompositionOptions::default() }
}

fn indent(m: &IntMatrix) -> String {
    m.to_string().lines().map(|l| format!("  {l}\n")).collect()
}

/// Sum over paths `u -> v` of `gamma0[u] * gamma1[v]`.
fn space_dim(q: &Quiver, d: &ProjDecomp) -> i64 {
    q.all_paths().iter().map(|p| d.gamma0[p.tail] * d.gamma1[p.head]).sum()
}

fn pair(d: &ProjDecomp) -> String {
    format!("({},{})", d.gamma0, d.gamma1)
}

pub fn run<F: Field>(cfg: &RunConfig, cmd: &Command) -> Result<Output, CliError> {
    let q = &cfg.quiver;
    let mut r = rng(cfg.seed);
    match cmd {
        Command::Euler => {
            let eu = q.euler();
            let text = format!(
                "vertices: {}\nE =\n{}E^-1 =\n{}(E^t)^-1 =\n{}",
                q.vertex_ids().join(" "),
                indent(&eu.e),
                indent(&eu.e_inv),
                indent(&eu.et_inv)
            );
            let j = json!({"schema": 1, "vertices": q.vertex_ids(), "e": eu.e.rows(), "e_inv": eu.e_inv.rows(), "et_inv": eu.et_inv.rows()});
            ok(j, text)
        }
        Command::Roots => {
            let roots = positive_roots(q)?;
            let mut text = format!("{} positive roots\n", roots.len());
            for b in &roots {
                writeln!(text, "{b}").unwrap();
            }
            ok(json!({"schema": 1, "count": roots.len(), "roots": roots}), text)
        }
        Command::Decompose { alpha } => {
            let a = parse_vector(q, alpha)?;
            let d = generic_decomposition::<F, _>(q, &a, &mut r, options(cfg))?;
            let parts = d.distinct_parts();
            let mut terms: Vec<String> =
                parts.iter().map(|(b, k)| if *k == 1 { b.to_string() } else { format!("{k}*{b}") }).collect();
            if !d.gamma.is_zero() {
                terms.push(format!("- P{}", d.gamma));
            }
            let text = format!(
                "{a} = {}\n(trials {}, field {})\n",
                if terms.is_empty() { "0".to_string() } else { terms.join(" + ").replace("+ -", "-") },
                cfg.trials,
                cfg.field
            );
            let j = merge(
                header(cfg),
                json!({
                    "alpha": a,
                    "parts": parts.iter().map(|(b, k)| json!({"root": b, "multiplicity": k})).collect::<Vec<_>>(),
                    "gamma": d.gamma,
                    "shifted": -q.et_inv_apply(&d.gamma),
                }),
            );
            ok(j, text)
        }
        Command::Canres { alpha } => {
            let a = parse_vector(q, alpha)?;
            let can = canonical_decomp(q, &a)?;
            let rcan = can.presentation_space(q);
            let rmin = minimal_decomp(q, &a)?;
            let text = format!(
                "alpha = {a}\nmu = {}\ngamma = {}\nR^can = {} (dim {})\nR^min = {} (dim {})\n",
                can.mu,
                can.gamma,
                pair(&rcan),
                space_dim(q, &rcan),
                pair(&rmin),
                space_dim(q, &rmin)
            );
            let j = json!({
                "schema": 1,
                "alpha": a,
                "mu": can.mu,
                "gamma": can.gamma,
                "r_can": {"gamma0": rcan.gamma0, "gamma1": rcan.gamma1, "dim": space_dim(q, &rcan)},
                "r_min": {"gamma0": rmin.gamma0, "gamma1": rmin.gamma1, "dim": space_dim(q, &rmin)},
            });
            ok(j, text)
        }
        Command::Cv { alpha, beta } => {
            let a = parse_vector(q, alpha)?;
            let b = parse_vector(q, beta)?;
            let pairing = q.euler_form(&a, &b)?;
            if pairing != 0 {
                return Err(vsi_core::Error::NonSquareWeight { pairing }.into());
            }
            let decomp = minimal_decomp(q, &a)?;
            let mut values = Vec::new();
            for _ in 0..cfg.trials {
                let v = Representation::<F>::random(q, b.clone(), &mut r)?;
                let phi = Presentation::<F>::random(q, decomp.clone(), &mut r);
                values.push(phi.cv_value(&v)?);
            }
            let nonzero = values.iter().filter(|x| !x.is_zero()).count();
            let text = format!(
                "C_V(phi) = {} (first sample)\nnonvanishing: {} ({nonzero}/{} samples nonzero)\nweight: {b}\n",
                values[0],
                nonzero > 0,
                cfg.trials
            );
            let j = merge(
                header(cfg),
                json!({
                    "alpha": a,
                    "beta": b,
                    "weight": b,
                    "value": values[0].to_string(),
                    "values": values.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "nonvanishing": nonzero > 0,
                    "nonzero_samples": nonzero,
                }),
            );
            ok(j, text)
        }
        Command::Support { alpha, beta, halfspaces } => {
            let a = parse_vector(q, alpha)?;
            let b = parse_vector(q, beta)?;
            let hs = d_beta_halfspaces::<F, _>(q, &b, &mut r, cfg.trials)?;
            let member = hs.contains(&a);
            let mut text = format!("{a} in D({b}): {member} (subrepresentation tests with {} trials)\n", cfg.trials);
            let mut j = merge(header(cfg), json!({"alpha": a, "beta": b, "member": member}));
            if *halfspaces {
                writeln!(text, "equality: x . {} = 0", hs.equality).unwrap();
                for (s, h) in hs.subreps.iter().zip(&hs.inequalities) {
                    writeln!(text, "sub {s}: x . {h} <= 0").unwrap();
                }
                j["halfspaces"] = json!({"equality": hs.equality, "inequalities": hs.inequalities, "subreps": hs.subreps});
            }
            ok(j, text)
        }
        Command::Complex { action } => complex::<F>(cfg, action, &mut r),
        Command::Selftest => selftest::run::<F>(cfg),
    }
}

fn summary(c: &TiltingComplex) -> (usize, usize, usize) {
    (c.vertices.len(), c.ridges().len(), c.facets.len())
}

fn complex<F: Field>(cfg: &RunConfig, action: &ComplexAction, r: &mut ChaCha8Rng) -> Result<Output, CliError> {
    let q: &Arc<Quiver> = &cfg.quiver;
    match action {
        ComplexAction::Build => {
            let c = build_complex::<F, _>(q, r, cfg.trials)?;
            let (v, e, f) = summary(&c);
            let mut text = format!("vertices {v}, ridges {e}, facets {f}\n");
            for facet in &c.facets {
                let labels: Vec<String> = facet.iter().map(|&i| c.vertices[i].label(q)).collect();
                writeln!(text, "{{{}}}", labels.join(", ")).unwrap();
            }
            let j = merge(merge(header(cfg), complex_to_json(&c, q, None)), json!({"ridges": e}));
            ok(j, text)
        }
        ComplexAction::Verify { samples, certified } => {
            let opts = options(cfg);
            let mode = if *certified { ExtMode::Certified } else { ExtMode::Sampled { trials: cfg.trials } };
            let mut c = build_complex_with::<F, _>(q, r, mode).or_else(|e| match e {
                vsi_core::Error::InvariantViolation(_) => build_complex_with::<F, _>(q, r, ExtMode::Certified),
                e => Err(e),
            })?;
            let mut report = verify_sphere::<F, _>(&c, q, r, *samples, opts)?;
            let mut oracle = if *certified { "certified" } else { "sampled" };
            if !report.passed() && !*certified {
                c = build_complex_with::<F, _>(q, r, ExtMode::Certified)?;
                report = verify_sphere::<F, _>(&c, q, r, *samples, opts)?;
                oracle = "certified";
            }
            let mut text = format!(
                "vertices {}, ridges {}, facets {} (ext oracle: {oracle})\npure: {}\nridges in two facets: {}\nconnected: {}\nEuler characteristic: {} (expected {})\nlambda injective: {}\ncovering: {}/{} samples ok (trials {})\n",
                report.vertices,
                report.ridges,
                report.facets,
                report.pure,
                report.ridge_regular,
                report.connected,
                report.euler_characteristic,
                report.expected_euler,
                report.lambda_injective,
                report.covering_samples - report.covering_failures.len(),
                report.covering_samples,
                cfg.trials
            );
            for f in report.failures() {
                writeln!(text, "FAIL {f}").unwrap();
            }
            writeln!(text, "{}", if report.passed() { "PASS" } else { "FAIL" }).unwrap();
            let j = merge(
                header(cfg),
                json!({"oracle": oracle, "report": report, "passed": report.passed(), "failures": report.failures()}),
            );
            Ok(Output { json: j, text, verified: report.passed() })
        }
        ComplexAction::Walls { check, radius } => {
            let c = build_complex::<F, _>(q, r, cfg.trials)?;
            let walls = wall_labels(&c, q)?;
            let mut text = format!("{} walls\n", walls.len());
            for w in &walls {
                let ridge: Vec<String> = w.ridge.iter().map(|&i| c.vertices[i].label(q)).collect();
                let labels: Vec<String> = w.labels.iter().map(ToString::to_string).collect();
                writeln!(text, "{{{}}} -> {}", ridge.join(", "), labels.join(" ")).unwrap();
            }
            let mut j = merge(header(cfg), complex_to_json(&c, q, Some(&walls)));
            let mut verified = true;
            if *check {
                let checks = verify_walls::<F, _>(&c, q, &walls, r, cfg.trials, *radius)?;
                for ch in &checks {
                    writeln!(
                        text,
                        "D({}): {} grid points, {} labeled ridges, {} uncovered: {}",
                        ch.beta,
                        ch.grid_points,
                        ch.labeled_ridges,
                        ch.uncovered.len(),
                        if ch.passed() { "ok" } else { "FAIL" }
                    )
                    .unwrap();
                }
                verified = checks.iter().all(|ch| ch.passed());
                j["checks"] = json!(checks);
                j["radius"] = json!(radius);
            }
            Ok(Output { json: j, text, verified })
        }
        ComplexAction::Export { format } => {
            let fmt: ExportFormat = format.parse()?;
            let c = build_complex::<F, _>(q, r, cfg.trials)?;
            let text = export_complex(&c, q, fmt)?;
            let j = if fmt == ExportFormat::Json {
                serde_json::from_str(&text).expect("exported json")
            } else {
                json!({"schema": 1, "format": format.to_ascii_lowercase(), "content": text})
            };
            ok(j, text)
        }
        ComplexAction::Truncate { depth } => {
            let c = truncated_complex::<F, _>(q, *depth, r, cfg.trials)?;
            let (v, e, f) = summary(&c);
            let sizes: Vec<usize> = c.facets.iter().map(Vec::len).collect();
            let text = format!(
                "depth {depth}: vertices {v}, ridges {e}, facets {f} (facet sizes {}..={}; no sphere guarantees)\n",
                sizes.iter().min().unwrap_or(&0),
                sizes.iter().max().unwrap_or(&0)
            );
            let j = merge(merge(header(cfg), complex_to_json(&c, q, None)), json!({"depth": depth}));
            ok(j, text)
        }
    }
}

pub fn vector(v: &[i64]) -> DimVector {
    DimVector::new(v.to_vec())
}
