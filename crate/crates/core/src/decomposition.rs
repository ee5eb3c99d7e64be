//! Generic decompositions of virtual dimension vectors and the support cones D(beta).

use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::presentation::{canonical_decomp, minimal_decomp, Presentation};
use crate::quiver::{DimVector, Quiver};
use crate::rep::{check_nonneg, end_field_degree, fitting_decompose, generic_ext, Representation, DEFAULT_SPLIT_RETRIES};

/// Random pairs sampled per generic hom/ext value.
pub const DEFAULT_TRIALS: usize = 3;
/// Fresh samples tried before a generic decomposition is declared unstable.
pub const DEFAULT_RESAMPLES: usize = 10;

#[derive(Clone, Copy, Debug)]
pub struct DecompositionOptions {
    pub trials: usize,
    pub resamples: usize,
    pub split_retries: usize,
}

impl Default for DecompositionOptions {
    fn default() -> Self {
        DecompositionOptions { trials: DEFAULT_TRIALS, resamples: DEFAULT_RESAMPLES, split_retries: DEFAULT_SPLIT_RETRIES }
    }
}

/// `alpha = sum(parts) - (E^t)^-1 gamma`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GenericDecomposition {
    /// Schur roots, sorted.
    pub parts: Vec<DimVector>,
    pub gamma: DimVector,
}

impl GenericDecomposition {
    pub fn reconstruct(&self, quiver: &Quiver) -> DimVector {
        let mut acc = -quiver.et_inv_apply(&self.gamma);
        for p in &self.parts {
            acc += p;
        }
        acc
    }

    /// Distinct part vectors with multiplicities, in sorted order.
    pub fn distinct_parts(&self) -> Vec<(DimVector, usize)> {
        let mut out: Vec<(DimVector, usize)> = Vec::new();
        for p in &self.parts {
            match out.last_mut() {
                Some((q, k)) if q == p => *k += 1,
                _ => out.push((p.clone(), 1)),
            }
        }
        out
    }
}

/// Generic ext vanishes between every two parts (including equal vectors at
/// different positions) and each part avoids the support of `gamma`.
pub fn validate_parts<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    d: &GenericDecomposition,
    rng: &mut R,
    trials: usize,
) -> Result<bool> {
    let distinct = d.distinct_parts();
    for (i, (a, ka)) in distinct.iter().enumerate() {
        if !a.disjoint_support(&d.gamma) {
            return Ok(false);
        }
        if *ka > 1 && generic_ext::<F, R>(quiver, a, a, rng, trials)? != 0 {
            return Ok(false);
        }
        for (b, _) in &distinct[i + 1..] {
            if generic_ext::<F, R>(quiver, a, b, rng, trials)? != 0 || generic_ext::<F, R>(quiver, b, a, rng, trials)? != 0 {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Dimension vectors of the bricks the summands split into over the algebraic closure,
/// or `None` if some summand is not of that kind.
fn brick_parts<F: Field, R: Rng + ?Sized>(summands: &[Representation<F>], rng: &mut R) -> Result<Option<Vec<DimVector>>> {
    let mut parts = Vec::new();
    for s in summands {
        let Some(d) = end_field_degree(s, rng)? else {
            return Ok(None);
        };
        let k = d as i64;
        if s.dim().iter().any(|x| x % k != 0) {
            return Ok(None);
        }
        let part = DimVector::new(s.dim().iter().map(|x| x / k).collect());
        parts.extend(std::iter::repeat(part).take(d));
    }
    Ok(Some(parts))
}

/// Decomposes a general presentation in the canonical presentation space of `a`.
///
/// A random representation of dimension `mu` is split into indecomposables; the
/// result is accepted when every summand is Schur, or has a field of degree `d`
/// as endomorphism ring (counted as `d` conjugate bricks), and the parts pass
/// [`validate_parts`]. Otherwise a fresh sample is drawn.
pub fn generic_decomposition<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    a: &DimVector,
    rng: &mut R,
    opts: DecompositionOptions,
) -> Result<GenericDecomposition> {
    let can = canonical_decomp(quiver, a)?;
    for _ in 0..opts.resamples.max(1) {
        let m = Representation::<F>::random(quiver, can.mu.clone(), rng)?;
        let summands = match fitting_decompose(&m, rng, opts.split_retries) {
            Ok(s) => s,
            Err(Error::SplitFailure { .. }) => continue,
            Err(e) => return Err(e),
        };
        let Some(mut parts) = brick_parts(&summands, rng)? else {
            continue;
        };
        parts.sort();
        let d = GenericDecomposition { parts, gamma: can.gamma.clone() };
        if validate_parts::<F, R>(quiver, &d, rng, opts.trials)? {
            return Ok(d);
        }
    }
    Err(Error::DecompositionUnstable { attempts: opts.resamples.max(1) })
}

/// Whether some sampled representation of dimension `a` has trivial endomorphism ring.
pub fn is_schur_root<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    a: &DimVector,
    rng: &mut R,
    trials: usize,
) -> Result<bool> {
    quiver.check_len(a)?;
    check_nonneg(a)?;
    if a.is_zero() {
        return Err(Error::ZeroVector);
    }
    for _ in 0..trials.max(1) {
        if Representation::<F>::random(quiver, a.clone(), rng)?.is_schur() {
            return Ok(true);
        }
    }
    Ok(false)
}

/// General representations of dimension `b` have a subrepresentation of dimension
/// `sub` iff `ext(sub, b - sub) = 0`.
pub fn subrep_test<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    sub: &DimVector,
    b: &DimVector,
    rng: &mut R,
    trials: usize,
) -> Result<bool> {
    quiver.check_len(sub)?;
    quiver.check_len(b)?;
    if !sub.is_nonneg() || !sub.le(b) {
        return Ok(false);
    }
    if sub.is_zero() || sub == b {
        return Ok(true);
    }
    Ok(generic_ext::<F, R>(quiver, sub, &(b - sub), rng, trials)? == 0)
}

/// `D(beta) = {<x, beta> = 0} ∩ {<x, beta'> <= 0 : beta' a generic subdimension vector}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HalfSpaceSystem {
    pub beta: DimVector,
    /// `E beta`, so that `<x, beta> = x . (E beta)`.
    pub equality: DimVector,
    /// `E beta'` for each subdimension vector in `subreps`.
    pub inequalities: Vec<DimVector>,
    pub subreps: Vec<DimVector>,
}

impl HalfSpaceSystem {
    pub fn contains(&self, x: &DimVector) -> bool {
        x.dot(&self.equality) == 0 && self.inequalities.iter().all(|h| x.dot(h) <= 0)
    }
}

fn box_points(b: &DimVector) -> Vec<DimVector> {
    let mut out = vec![Vec::new()];
    for &bv in b.iter() {
        out = out
            .into_iter()
            .flat_map(|prefix: Vec<i64>| {
                (0..=bv).map(move |x| {
                    let mut p = prefix.clone();
                    p.push(x);
                    p
                })
            })
            .collect();
    }
    out.into_iter().map(DimVector::new).collect()
}

pub fn d_beta_halfspaces<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    b: &DimVector,
    rng: &mut R,
    trials: usize,
) -> Result<HalfSpaceSystem> {
    quiver.check_len(b)?;
    check_nonneg(b)?;
    if b.is_zero() {
        return Err(Error::ZeroVector);
    }
    let mut subreps = Vec::new();
    for sub in box_points(b) {
        if subrep_test::<F, R>(quiver, &sub, b, rng, trials)? {
            subreps.push(sub);
        }
    }
    Ok(HalfSpaceSystem {
        beta: b.clone(),
        equality: quiver.e_apply(b),
        inequalities: subreps.iter().map(|s| quiver.e_apply(s)).collect(),
        subreps,
    })
}

pub fn d_membership<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    a: &DimVector,
    b: &DimVector,
    rng: &mut R,
    trials: usize,
) -> Result<bool> {
    quiver.check_len(a)?;
    Ok(d_beta_halfspaces::<F, R>(quiver, b, rng, trials)?.contains(a))
}

/// Nonvanishing of `C_V` on a general element of `R^min(a)` for general `V` of dimension `b`.
pub fn supp_test_randomized<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    a: &DimVector,
    b: &DimVector,
    rng: &mut R,
    trials: usize,
) -> Result<bool> {
    quiver.check_len(a)?;
    quiver.check_len(b)?;
    check_nonneg(b)?;
    if b.is_zero() {
        return Err(Error::ZeroVector);
    }
    if quiver.euler_form(a, b)? != 0 {
        return Ok(false);
    }
    let decomp = minimal_decomp(quiver, a)?;
    for _ in 0..trials.max(1) {
        let v = Representation::<F>::random(quiver, b.clone(), rng)?;
        let phi = Presentation::<F>::random(quiver, decomp.clone(), rng);
        if !phi.cv_value(&v)?.is_zero() {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type F = Fp<32003>;

    fn dv(v: &[i64]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn rng() -> ChaCha8Rng {
        ChaCha8Rng::seed_from_u64(7)
    }

    #[test]
    fn decompositions_on_a2() {
        let q = Arc::new(Quiver::a_n(2));
        let mut r = rng();
        let opts = DecompositionOptions::default();
        let d = generic_decomposition::<F, _>(&q, &dv(&[1, -1]), &mut r, opts).unwrap();
        assert_eq!(d, GenericDecomposition { parts: vec![dv(&[1, 0])], gamma: dv(&[0, 1]) });
        let d = generic_decomposition::<F, _>(&q, &dv(&[1, 2]), &mut r, opts).unwrap();
        assert_eq!(d, GenericDecomposition { parts: vec![dv(&[0, 1]), dv(&[1, 1])], gamma: dv(&[0, 0]) });
        let d = generic_decomposition::<F, _>(&q, &dv(&[0, 0]), &mut r, opts).unwrap();
        assert!(d.parts.is_empty() && d.gamma.is_zero());
    }

    #[test]
    fn decomposition_on_the_worked_example() {
        let q = Arc::new(Quiver::example());
        let mut r = rng();
        let a = dv(&[1, 2, -3]);
        let d = generic_decomposition::<F, _>(&q, &a, &mut r, DecompositionOptions::default()).unwrap();
        assert_eq!(d.reconstruct(&q), a);
        assert_eq!(d.gamma, dv(&[0, 0, 3]));
    }

    #[test]
    fn isotropic_multiples_split_into_conjugate_bricks() {
        let q = Arc::new(Quiver::example());
        let mut r = rng();
        let a = dv(&[-5, -1, -6]);
        for _ in 0..5 {
            let d = generic_decomposition::<F, _>(&q, &a, &mut r, DecompositionOptions::default()).unwrap();
            assert_eq!(d.parts, vec![dv(&[0, 1, 1]); 4]);
            assert_eq!(d.gamma, dv(&[5, 0, 0]));
        }
        let k = Arc::new(Quiver::from_edges(2, &[(1, 2), (1, 2)]).unwrap());
        let d = generic_decomposition::<crate::field::Fp<2>, _>(&k, &dv(&[3, 3]), &mut r, DecompositionOptions::default()).unwrap();
        assert_eq!(d.parts, vec![dv(&[1, 1]); 3]);
    }

    #[test]
    fn schur_roots() {
        let q = Arc::new(Quiver::a_n(2));
        let mut r = rng();
        assert!(is_schur_root::<F, _>(&q, &dv(&[1, 1]), &mut r, 3).unwrap());
        assert!(!is_schur_root::<F, _>(&q, &dv(&[2, 0]), &mut r, 3).unwrap());
        assert!(is_schur_root::<F, _>(&q, &dv(&[0, 1]), &mut r, 3).unwrap());
        assert!(matches!(is_schur_root::<F, _>(&q, &dv(&[0, 0]), &mut r, 3), Err(Error::ZeroVector)));
    }

    #[test]
    fn subreps_on_a2() {
        let q = Arc::new(Quiver::a_n(2));
        let mut r = rng();
        let b = dv(&[1, 1]);
        assert!(subrep_test::<F, _>(&q, &dv(&[0, 0]), &b, &mut r, 3).unwrap());
        assert!(subrep_test::<F, _>(&q, &b, &b, &mut r, 3).unwrap());
        assert!(subrep_test::<F, _>(&q, &dv(&[0, 1]), &b, &mut r, 3).unwrap());
        assert!(!subrep_test::<F, _>(&q, &dv(&[1, 0]), &b, &mut r, 3).unwrap());
        assert!(!subrep_test::<F, _>(&q, &dv(&[2, 0]), &b, &mut r, 3).unwrap());
    }

    #[test]
    fn support_cone_of_the_worked_example() {
        let q = Arc::new(Quiver::example());
        let mut r = rng();
        let b = dv(&[0, 1, 2]);
        let sys = d_beta_halfspaces::<F, _>(&q, &b, &mut r, 3).unwrap();
        assert_eq!(sys.equality, dv(&[-1, -3, 2]));
        assert!(sys.inequalities.len() <= 6);
        // 2 a3 = 3 a2 + a1 and a2 >= a1
        for x in [[-1, -1, -2], [-2, 0, -1], [1, 1, 2], [-1, 1, 1]] {
            assert!(sys.contains(&dv(&x)), "{x:?}");
        }
        for x in [[-1, 0, -2], [1, 0, 0], [2, 1, 3]] {
            assert!(!sys.contains(&dv(&x)), "{x:?}");
        }
        for v in 0..3 {
            let p = q.proj_vector(v).unwrap();
            assert_eq!(sys.contains(&p), b[v] == 0, "P({v})");
        }
        assert!(matches!(d_beta_halfspaces::<F, _>(&q, &dv(&[0, 0, 0]), &mut r, 3), Err(Error::ZeroVector)));
    }

    #[test]
    fn simple_beta_has_only_trivial_inequalities() {
        let q = Arc::new(Quiver::example());
        let mut r = rng();
        let sys = d_beta_halfspaces::<F, _>(&q, &dv(&[0, 1, 0]), &mut r, 3).unwrap();
        assert_eq!(sys.subreps, vec![dv(&[0, 0, 0]), dv(&[0, 1, 0])]);
        assert_eq!(sys.equality, q.e_apply(&dv(&[0, 1, 0])));
    }

    #[test]
    fn randomized_support_basics() {
        let q = Arc::new(Quiver::example());
        let mut r = rng();
        let b = dv(&[0, 1, 2]);
        assert!(supp_test_randomized::<F, _>(&q, &dv(&[0, 0, 0]), &b, &mut r, 5).unwrap());
        assert!(!supp_test_randomized::<F, _>(&q, &dv(&[1, 0, 0]), &b, &mut r, 5).unwrap());
        assert!(supp_test_randomized::<F, _>(&q, &dv(&[-2, 0, -1]), &b, &mut r, 5).unwrap());
        assert!(supp_test_randomized::<F, _>(&q, &dv(&[-1, -1, -2]), &b, &mut r, 5).unwrap());
    }
}
