use std::fmt::Write as _;
use std::sync::Arc;

use serde_json::json;
use vsi_core::cluster::{build_complex, verify_sphere};
use vsi_core::decomposition::{d_beta_halfspaces, generic_decomposition, DecompositionOptions};
use vsi_core::presentation::{canonical_decomp, minimal_decomp};
use vsi_core::{Field, IntMatrix, Presentation, ProjDecomp, Quiver, Representation};

use crate::commands::{rng, vector};
use crate::{CliError, Output, RunConfig};

type Check = (&'static str, Result<bool, vsi_core::Error>);

fn euler_golden() -> Result<bool, vsi_core::Error> {
    let eu = Quiver::example().euler().clone();
    Ok(eu.e == IntMatrix::new(vec![vec![1, -1, 0], vec![0, 1, -2], vec![0, 0, 1]])
        && eu.e_inv == IntMatrix::new(vec![vec![1, 1, 2], vec![0, 1, 2], vec![0, 0, 1]])
        && eu.et_inv == IntMatrix::new(vec![vec![1, 0, 0], vec![1, 1, 0], vec![2, 2, 1]]))
}

fn decomposition_golden() -> Result<bool, vsi_core::Error> {
    let q = Quiver::example();
    let a = vector(&[1, 2, -3]);
    let can = canonical_decomp(&q, &a)?;
    let rcan = can.presentation_space(&q);
    let rmin = minimal_decomp(&q, &a)?;
    Ok(can.mu == vector(&[1, 2, 0])
        && can.gamma == vector(&[0, 0, 3])
        && (rcan.gamma0, rcan.gamma1) == (vector(&[1, 2, 0]), vector(&[0, 1, 7]))
        && (rmin.gamma0, rmin.gamma1) == (vector(&[1, 1, 0]), vector(&[0, 0, 7])))
}

fn support_golden<F: Field>(seed: u64, trials: usize) -> Result<bool, vsi_core::Error> {
    let q = Arc::new(Quiver::example());
    let hs = d_beta_halfspaces::<F, _>(&q, &vector(&[0, 1, 2]), &mut rng(seed), trials)?;
    for x in -5..=5 {
        for y in -5..=5 {
            for z in -5..=5 {
                let p = vector(&[x, y, z]);
                if hs.contains(&p) != (2 * z == 3 * y + x && y >= x) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(hs.contains(&vector(&[-1, -1, -2])))
}

fn a2_decomposition<F: Field>(seed: u64, trials: usize) -> Result<bool, vsi_core::Error> {
    let q = Arc::new(Quiver::a_n(2));
    let opts = DecompositionOptions { trials, ..DecompositionOptions::default() };
    let d = generic_decomposition::<F, _>(&q, &vector(&[1, 2]), &mut rng(seed), opts)?;
    let e = generic_decomposition::<F, _>(&q, &vector(&[1, -1]), &mut rng(seed), opts)?;
    Ok(d.parts == vec![vector(&[0, 1]), vector(&[1, 1])]
        && d.gamma.is_zero()
        && e.parts == vec![vector(&[1, 0])]
        && e.gamma == vector(&[0, 1]))
}

fn stabilization<F: Field>(seed: u64) -> Result<bool, vsi_core::Error> {
    let q = Arc::new(Quiver::example());
    let mut r = rng(seed);
    // alpha = (1,2,-3) pairs to zero with (3,4,1).
    let decomp = minimal_decomp(&q, &vector(&[1, 2, -3]))?;
    let v = Representation::<F>::random(&q, vector(&[3, 4, 1]), &mut r)?;
    let phi = Presentation::<F>::random(&q, decomp, &mut r);
    let stable = phi.stabilize(&vector(&[1, 0, 2]))?;
    Ok(stable.cv_value(&v)? == phi.cv_value(&v)?)
}

fn cokernel_roundtrip<F: Field>(seed: u64) -> Result<bool, vsi_core::Error> {
    let q = Arc::new(Quiver::example());
    let mut r = rng(seed);
    let m = Representation::<F>::random(&q, vector(&[1, 2, 2]), &mut r)?;
    let p = Presentation::canonical(&m);
    let expected = ProjDecomp::new(&q, m.dim().clone(), m.dim() - &q.et_apply(m.dim()))?;
    Ok(p.decomp() == &expected && vsi_core::rep::is_isomorphic(&p.cokernel(), &m, &mut r)?)
}

fn complexes<F: Field>(seed: u64, trials: usize) -> Result<bool, vsi_core::Error> {
    let mut r = rng(seed);
    let a2 = build_complex::<F, _>(&Arc::new(Quiver::a_n(2)), &mut r, trials)?;
    let q3 = Arc::new(Quiver::a_n(3));
    let a3 = build_complex::<F, _>(&q3, &mut r, trials)?;
    let report = verify_sphere::<F, _>(&a3, &q3, &mut r, 50, DecompositionOptions { trials, ..Default::default() })?;
    Ok((a2.vertices.len(), a2.facets.len()) == (5, 5)
        && (a3.vertices.len(), a3.ridges().len(), a3.facets.len()) == (9, 21, 14)
        && report.passed())
}

pub fn run<F: Field>(cfg: &RunConfig) -> Result<Output, CliError> {
    let checks: Vec<Check> = vec![
        ("euler matrices of 1->2=>3", euler_golden()),
        ("projective decompositions of (1,2,-3)", decomposition_golden()),
        ("support cone D((0,1,2))", support_golden::<F>(cfg.seed, cfg.trials)),
        ("A2 generic decompositions", a2_decomposition::<F>(cfg.seed, cfg.trials)),
        ("C_V under stabilization", stabilization::<F>(cfg.seed)),
        ("canonical presentation cokernel", cokernel_roundtrip::<F>(cfg.seed)),
        ("A2 and A3 complexes", complexes::<F>(cfg.seed, cfg.trials)),
    ];
    let mut text = String::new();
    let mut rows = Vec::new();
    let mut all = true;
    for (name, res) in checks {
        let (passed, detail) = match res {
            Ok(b) => (b, String::new()),
            Err(e) => (false, e.to_string()),
        };
        all &= passed;
        writeln!(text, "{} {name}{}", if passed { "ok  " } else { "FAIL" }, if detail.is_empty() { detail.clone() } else { format!(": {detail}") })
            .unwrap();
        rows.push(json!({"name": name, "passed": passed, "detail": detail}));
    }
    writeln!(text, "{}", if all { "selftest passed" } else { "selftest FAILED" }).unwrap();
    let j = json!({"schema": 1, "field": cfg.field.to_string(), "seed": cfg.seed, "checks": rows, "passed": all});
    Ok(Output { json: j, text, verified: all })
}
