//! Projective decompositions of virtual dimension vectors and presentation
//! spaces `Hom(P(gamma1), P(gamma0))`.
//!
//! A presentation is stored as one block per path `p : u -> v` of shape
//! `gamma0[u] x gamma1[v]`, the coefficient of `p` in the map from the copies
//! of `P(v)` to the copies of `P(u)`. Composition is convolution over path
//! concatenation.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::matrix::{Matrix, Subspace};
use crate::quiver::{DimVector, Quiver};
use crate::rep::{check_nonneg, matrix_from_json, matrix_to_json, same_quiver, Representation};

/// `(gamma0, gamma1)` with `E^t alpha = gamma0 - gamma1`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProjDecomp {
    pub alpha: DimVector,
    pub gamma0: DimVector,
    pub gamma1: DimVector,
}

impl ProjDecomp {
    pub fn new(quiver: &Quiver, gamma0: DimVector, gamma1: DimVector) -> Result<Self> {
        quiver.check_len(&gamma0)?;
        quiver.check_len(&gamma1)?;
        check_nonneg(&gamma0)?;
        check_nonneg(&gamma1)?;
        let alpha = quiver.et_inv_apply(&(&gamma0 - &gamma1));
        Ok(ProjDecomp { alpha, gamma0, gamma1 })
    }

    /// `(gamma0 + gamma, gamma1 + gamma)`.
    pub fn stabilized(&self, gamma: &DimVector) -> Self {
        ProjDecomp { alpha: self.alpha.clone(), gamma0: &self.gamma0 + gamma, gamma1: &self.gamma1 + gamma }
    }

    pub fn is_minimal(&self) -> bool {
        self.gamma0.disjoint_support(&self.gamma1)
    }

    /// `(gamma0, gamma1) <= other` in the stabilization order.
    pub fn le(&self, other: &ProjDecomp) -> bool {
        let d = &other.gamma0 - &self.gamma0;
        d.is_nonneg() && &other.gamma1 - &self.gamma1 == d
    }
}

/// Positive and negative parts of `E^t a`.
pub fn minimal_decomp(quiver: &Quiver, a: &DimVector) -> Result<ProjDecomp> {
    quiver.check_len(a)?;
    let s = quiver.et_apply(a);
    Ok(ProjDecomp { alpha: a.clone(), gamma0: s.positive_part(), gamma1: s.negative_part() })
}

/// `a = mu - (E^t)^-1 gamma` with `mu, gamma >= 0` of disjoint support.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CanonicalDecomp {
    pub mu: DimVector,
    pub gamma: DimVector,
}

impl CanonicalDecomp {
    /// The presentation space `R(mu, mu - E^t mu + gamma)`.
    pub fn presentation_space(&self, quiver: &Quiver) -> ProjDecomp {
        let gamma1 = &(&self.mu - &quiver.et_apply(&self.mu)) + &self.gamma;
        ProjDecomp::new(quiver, self.mu.clone(), gamma1).expect("canonical decomposition is nonnegative")
    }
}

/// Repeatedly clears the first negative entry by adding multiples of `dim P(v)`.
pub fn canonical_decomp(quiver: &Quiver, a: &DimVector) -> Result<CanonicalDecomp> {
    quiver.check_len(a)?;
    let n = quiver.n();
    let mut x = a.clone();
    let mut gamma = DimVector::zeros(n);
    while let Some(v) = (0..n).find(|&v| x[v] < 0) {
        let c = -x[v];
        x += &(c * &quiver.proj_vector(v)?);
        let mut g = gamma.into_inner();
        g[v] += c;
        gamma = DimVector::new(g);
    }
    Ok(CanonicalDecomp { mu: x, gamma })
}

/// Weight of `C_V`: the dimension vector of `V`.
pub fn cv_weight<F: Field>(v: &Representation<F>) -> DimVector {
    v.dim().clone()
}

/// A map `P(gamma1) -> P(gamma0)`.
#[derive(Clone, Debug)]
pub struct Presentation<F> {
    quiver: Arc<Quiver>,
    decomp: ProjDecomp,
    blocks: Vec<Matrix<F>>,
}

impl<F: Field> PartialEq for Presentation<F> {
    fn eq(&self, other: &Self) -> bool {
        same_quiver(&self.quiver, &other.quiver) && self.decomp == other.decomp && self.blocks == other.blocks
    }
}

fn g(d: &DimVector, v: usize) -> usize {
    d[v] as usize
}

/// Copies ordered "essential" first (those beyond `min(gamma, other)`), then the
/// copies shared with the other side; vertex-major within each section.
fn copy_order(gamma: &DimVector, other: &DimVector) -> Vec<(usize, usize)> {
    let n = gamma.len();
    let shared: Vec<usize> = (0..n).map(|v| g(gamma, v).min(g(other, v))).collect();
    let mut out = Vec::new();
    for v in 0..n {
        out.extend((0..g(gamma, v) - shared[v]).map(|i| (v, i)));
    }
    for v in 0..n {
        out.extend((g(gamma, v) - shared[v]..g(gamma, v)).map(|i| (v, i)));
    }
    out
}

impl<F: Field> Presentation<F> {
    fn from_fn(quiver: &Arc<Quiver>, decomp: ProjDecomp, mut f: impl FnMut(usize, usize, usize) -> Matrix<F>) -> Self {
        let blocks = quiver
            .all_paths()
            .iter()
            .enumerate()
            .map(|(id, p)| f(id, g(&decomp.gamma0, p.tail), g(&decomp.gamma1, p.head)))
            .collect();
        Presentation { quiver: quiver.clone(), decomp, blocks }
    }

    pub fn zero(quiver: &Arc<Quiver>, decomp: ProjDecomp) -> Self {
        Self::from_fn(quiver, decomp, |_, r, c| Matrix::zeros(r, c))
    }

    pub fn random<R: Rng + ?Sized>(quiver: &Arc<Quiver>, decomp: ProjDecomp, rng: &mut R) -> Self {
        Self::from_fn(quiver, decomp, |_, r, c| Matrix::random(r, c, rng))
    }

    /// Builds from blocks indexed by global path id.
    pub fn from_blocks(quiver: &Arc<Quiver>, decomp: ProjDecomp, blocks: Vec<Matrix<F>>) -> Result<Self> {
        let paths = quiver.all_paths();
        if blocks.len() != paths.len() {
            return Err(Error::ShapeMismatch(format!("expected {} blocks, got {}", paths.len(), blocks.len())));
        }
        for (p, b) in paths.iter().zip(&blocks) {
            if b.shape() != (g(&decomp.gamma0, p.tail), g(&decomp.gamma1, p.head)) {
                return Err(Error::ShapeMismatch(format!("block for path {:?}", p.arrows)));
            }
        }
        Ok(Presentation { quiver: quiver.clone(), decomp, blocks })
    }

    pub fn identity(quiver: &Arc<Quiver>, gamma: &DimVector) -> Result<Self> {
        let decomp = ProjDecomp::new(quiver, gamma.clone(), gamma.clone())?;
        Ok(Self::from_fn(quiver, decomp, |id, r, c| {
            if quiver.path(id).is_empty() {
                Matrix::identity(r)
            } else {
                Matrix::zeros(r, c)
            }
        }))
    }

    /// Random element of `Aut P(gamma)`: invertible constant-path blocks, random elsewhere.
    pub fn random_aut<R: Rng + ?Sized>(quiver: &Arc<Quiver>, gamma: &DimVector, rng: &mut R) -> Result<Self> {
        let decomp = ProjDecomp::new(quiver, gamma.clone(), gamma.clone())?;
        Ok(Self::from_fn(quiver, decomp, |id, r, c| {
            if !quiver.path(id).is_empty() {
                return Matrix::random(r, c, rng);
            }
            loop {
                let m = Matrix::<F>::random(r, c, rng);
                if !m.det().is_zero() {
                    return m;
                }
            }
        }))
    }

    /// The canonical projective presentation `P(alpha - E^t alpha) -> P(alpha)` of `M`.
    ///
    /// The copies of `P(v)` in the first term are grouped by the arrows `a` into `v`
    /// (in arrow order), `dim M_{ta}` copies each; on them the map is
    /// `-(path a)` into the copies of `P(ta)` plus `M_a` into the copies of `P(v)`.
    pub fn canonical(m: &Representation<F>) -> Self {
        let quiver = m.quiver();
        let alpha = m.dim().clone();
        let gamma1 = &alpha - &quiver.et_apply(&alpha);
        let decomp = ProjDecomp { alpha: alpha.clone(), gamma0: alpha.clone(), gamma1 };
        let mut first_col = vec![0usize; quiver.arrows().len()];
        let mut fill = vec![0usize; quiver.n()];
        for (a, &(t, h)) in quiver.arrows().iter().enumerate() {
            first_col[a] = fill[h];
            fill[h] += g(&alpha, t);
        }
        let mut phi = Self::zero(quiver, decomp);
        for (a, &(t, h)) in quiver.arrows().iter().enumerate() {
            let step = quiver.arrow_path(a);
            for k in 0..g(&alpha, t) {
                phi.blocks[step][(k, first_col[a] + k)] = -F::one();
            }
            let c = quiver.constant_path(h);
            phi.blocks[c].set_block(0, first_col[a], m.mat(a));
        }
        phi
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn decomp(&self) -> &ProjDecomp {
        &self.decomp
    }

    pub fn gamma0(&self) -> &DimVector {
        &self.decomp.gamma0
    }

    pub fn gamma1(&self) -> &DimVector {
        &self.decomp.gamma1
    }

    pub fn blocks(&self) -> &[Matrix<F>] {
        &self.blocks
    }

    pub fn block(&self, path: usize) -> &Matrix<F> {
        &self.blocks[path]
    }

    /// `phi + 1_{P(gamma)}`, the new copies appended after the existing ones at each vertex.
    pub fn stabilize(&self, gamma: &DimVector) -> Result<Self> {
        self.quiver.check_len(gamma)?;
        check_nonneg(gamma)?;
        let decomp = self.decomp.stabilized(gamma);
        let quiver = self.quiver.clone();
        Ok(Self::from_fn(&quiver, decomp, |id, r, c| {
            let mut m = Matrix::zeros(r, c);
            let old = &self.blocks[id];
            m.set_block(0, 0, old);
            if quiver.path(id).is_empty() {
                for k in 0..r - old.rows() {
                    m[(old.rows() + k, old.cols() + k)] = F::one();
                }
            }
            m
        }))
    }

    /// `self . other` where `other : P(c) -> P(b)` and `self : P(b) -> P(a)`.
    pub fn compose(&self, other: &Self) -> Result<Self> {
        if !same_quiver(&self.quiver, &other.quiver) {
            return Err(Error::QuiverMismatch);
        }
        if self.decomp.gamma1 != other.decomp.gamma0 {
            return Err(Error::ShapeMismatch(format!(
                "cannot compose: source {} vs target {}",
                self.decomp.gamma1, other.decomp.gamma0
            )));
        }
        let decomp = ProjDecomp::new(&self.quiver, self.decomp.gamma0.clone(), other.decomp.gamma1.clone())?;
        let mut out = Self::zero(&self.quiver, decomp);
        let paths = self.quiver.all_paths();
        for (r, pr) in paths.iter().enumerate() {
            let a = &self.blocks[r];
            if a.rows() == 0 || a.cols() == 0 || a.is_zero() {
                continue;
            }
            for w in pr.head..self.quiver.n() {
                for &p in self.quiver.path_ids(pr.head, w) {
                    let b = &other.blocks[p];
                    if b.cols() == 0 {
                        continue;
                    }
                    let rp = self.quiver.concat(r, p);
                    let prod = a.mul(b);
                    out.blocks[rp] = out.blocks[rp].add(&prod);
                }
            }
        }
        Ok(out)
    }

    /// `(g0, g1) phi = g0 . phi . g1`.
    pub fn apply_action(g0: &Self, phi: &Self, g1: &Self) -> Result<Self> {
        g0.compose(&phi.compose(g1)?)
    }

    /// `prod_v det(g_vv)^{sigma_v}` for an endomorphism of `P(gamma)`.
    pub fn character(&self, sigma: &DimVector) -> Result<F> {
        if self.decomp.gamma0 != self.decomp.gamma1 {
            return Err(Error::ShapeMismatch("character of a non-endomorphism".into()));
        }
        self.quiver.check_len(sigma)?;
        let mut acc = F::one();
        for v in 0..self.quiver.n() {
            let d = self.blocks[self.quiver.constant_path(v)].det();
            acc = acc
                * d.pow_i64(sigma[v])
                    .ok_or_else(|| Error::ShapeMismatch(format!("singular diagonal block at vertex {v}")))?;
        }
        Ok(acc)
    }

    /// Matrix of `Hom(phi, V) : Hom(P(gamma0), V) -> Hom(P(gamma1), V)`.
    ///
    /// A homomorphism `P(gamma) -> V` is a choice of vector in `V_u` for every copy
    /// of `P(u)`; rows follow the copies of `gamma1`, columns those of `gamma0`,
    /// each expanded along the basis of `V` (see [`copy_order`]).
    pub fn hom_matrix(&self, v: &Representation<F>) -> Result<Matrix<F>> {
        if !same_quiver(&self.quiver, v.quiver()) {
            return Err(Error::QuiverMismatch);
        }
        let (g0, g1) = (&self.decomp.gamma0, &self.decomp.gamma1);
        let place = |order: Vec<(usize, usize)>| {
            let mut at = HashMap::new();
            let mut off = 0;
            for (w, i) in order {
                at.insert((w, i), off);
                off += v.dim_at(w);
            }
            (at, off)
        };
        let (col_at, ncols) = place(copy_order(g0, g1));
        let (row_at, nrows) = place(copy_order(g1, g0));
        let mut out = Matrix::<F>::zeros(nrows, ncols);
        for (id, p) in self.quiver.all_paths().iter().enumerate() {
            let blk = &self.blocks[id];
            if blk.rows() == 0 || blk.cols() == 0 || v.dim_at(p.tail) == 0 || v.dim_at(p.head) == 0 {
                continue;
            }
            let vp = v.path_map(id);
            for i in 0..blk.rows() {
                for j in 0..blk.cols() {
                    let c = &blk[(i, j)];
                    if c.is_zero() {
                        continue;
                    }
                    let (r0, c0) = (row_at[&(p.head, j)], col_at[&(p.tail, i)]);
                    for r in 0..vp.rows() {
                        for s in 0..vp.cols() {
                            let val = out[(r0 + r, c0 + s)].clone() + c.clone() * vp[(r, s)].clone();
                            out[(r0 + r, c0 + s)] = val;
                        }
                    }
                }
            }
        }
        Ok(out)
    }

    /// `C_V(phi) = det Hom(phi, V)`; needs `<alpha, dim V> = 0`.
    pub fn cv_value(&self, v: &Representation<F>) -> Result<F> {
        let pairing = self.quiver.euler_form(&self.decomp.alpha, v.dim())?;
        if pairing != 0 {
            return Err(Error::NonSquareWeight { pairing });
        }
        Ok(self.hom_matrix(v)?.det())
    }

    /// Per vertex `w`: basis `(u, copy, path u -> w)` of `P(gamma0)_w` and the image of the map.
    fn images(&self) -> Vec<(Vec<(usize, usize, usize)>, Subspace<F>)> {
        let q = &self.quiver;
        let n = q.n();
        let (g0, g1) = (&self.decomp.gamma0, &self.decomp.gamma1);
        (0..n)
            .map(|w| {
                let mut basis = Vec::new();
                let mut index = HashMap::new();
                for u in 0..n {
                    for i in 0..g(g0, u) {
                        for &r in q.path_ids(u, w) {
                            index.insert((u, i, r), basis.len());
                            basis.push((u, i, r));
                        }
                    }
                }
                let mut gens = Vec::new();
                for v in 0..n {
                    for j in 0..g(g1, v) {
                        for &qq in q.path_ids(v, w) {
                            let mut vec = vec![F::zero(); basis.len()];
                            for u in 0..=v {
                                for &p in q.path_ids(u, v) {
                                    let blk = &self.blocks[p];
                                    let pq = q.concat(p, qq);
                                    for i in 0..blk.rows() {
                                        let c = &blk[(i, j)];
                                        if !c.is_zero() {
                                            let k = index[&(u, i, pq)];
                                            vec[k] = vec[k].clone() + c.clone();
                                        }
                                    }
                                }
                            }
                            gens.push(vec);
                        }
                    }
                }
                let sub = Subspace::span(basis.len(), gens);
                (basis, sub)
            })
            .collect()
    }

    /// Per-vertex dimensions of the image of the map.
    pub fn image_dims(&self) -> DimVector {
        DimVector::new(self.images().iter().map(|(_, s)| s.dim() as i64).collect())
    }

    /// Rank of the map as a linear map of total spaces.
    pub fn rank(&self) -> usize {
        self.images().iter().map(|(_, s)| s.dim()).sum()
    }

    pub fn is_injective(&self) -> bool {
        let source = self.quiver.et_inv_apply(&self.decomp.gamma1);
        self.rank() as i64 == source.total()
    }

    /// `P(gamma0) / im(phi)`, with the complement of the echelon pivots as basis.
    pub fn cokernel(&self) -> Representation<F> {
        let q = &self.quiver;
        let images = self.images();
        let complements: Vec<Vec<usize>> = images.iter().map(|(_, s)| s.complement()).collect();
        let index: Vec<HashMap<(usize, usize, usize), usize>> = images
            .iter()
            .map(|(basis, _)| basis.iter().enumerate().map(|(k, &key)| (key, k)).collect())
            .collect();
        let dim = DimVector::new(complements.iter().map(|c| c.len() as i64).collect());
        let mats = q
            .arrows()
            .iter()
            .enumerate()
            .map(|(b, &(w, w2))| {
                let step = q.arrow_path(b);
                let (ref target_basis, ref target) = images[w2];
                let cols: Vec<Vec<F>> = complements[w]
                    .iter()
                    .map(|&k| {
                        let (u, i, r) = images[w].0[k];
                        let mut e = vec![F::zero(); target_basis.len()];
                        e[index[w2][&(u, i, q.concat(r, step))]] = F::one();
                        target.quotient_coords(&e)
                    })
                    .collect();
                Matrix::from_columns(&cols, complements[w2].len())
            })
            .collect();
        Representation::new(q.clone(), dim, mats).expect("cokernel shapes are consistent")
    }

    pub fn to_json(&self) -> Value {
        let q = &self.quiver;
        let mut blocks = BTreeMap::new();
        for (id, p) in q.all_paths().iter().enumerate() {
            let b = &self.blocks[id];
            if b.rows() == 0 || b.cols() == 0 {
                continue;
            }
            let key = format!("({},{},{})", q.vertex_id(p.tail), q.vertex_id(p.head), q.path_local_index(id));
            blocks.insert(key, matrix_to_json(b));
        }
        json!({
            "field": F::spec().to_string(),
            "gamma0": self.decomp.gamma0,
            "gamma1": self.decomp.gamma1,
            "blocks": blocks,
        })
    }

    pub fn from_json(quiver: &Arc<Quiver>, value: &Value) -> Result<Self> {
        if let Some(tag) = value.get("field").and_then(Value::as_str) {
            if tag != F::spec().to_string() {
                return Err(Error::FieldMismatch(format!("file is over {tag}, expected {}", F::spec())));
            }
        }
        let vec = |key: &str| -> Result<DimVector> {
            serde_json::from_value(value.get(key).cloned().unwrap_or(Value::Null))
                .map_err(|e| Error::Parse(format!("{key}: {e}")))
        };
        let decomp = ProjDecomp::new(quiver, vec("gamma0")?, vec("gamma1")?)?;
        let mut phi = Self::zero(quiver, decomp);
        if let Some(obj) = value.get("blocks").and_then(Value::as_object) {
            for (key, m) in obj {
                let inner = key.trim().trim_start_matches('(').trim_end_matches(')');
                let parts: Vec<&str> = inner.split(',').map(str::trim).collect();
                let [u, v, k] = parts[..] else {
                    return Err(Error::Parse(format!("bad block key {key:?}")));
                };
                let (u, v) = (quiver.vertex_index(u)?, quiver.vertex_index(v)?);
                let k: usize = k.parse().map_err(|_| Error::Parse(format!("bad path index in {key:?}")))?;
                let id = *quiver
                    .path_ids(u, v)
                    .get(k)
                    .ok_or_else(|| Error::Parse(format!("no path {key:?}")))?;
                let (r, c) = phi.blocks[id].shape();
                phi.blocks[id] = matrix_from_json(m, r, c)?;
            }
        }
        Ok(phi)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bareiss;
    use crate::field::Fp;
    use crate::rep::{hom_dim, is_isomorphic};
    use num_traits::{One, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type F = Fp<32003>;

    fn dv(v: &[i64]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    #[test]
    fn decompositions_of_the_worked_example() {
        let q = Quiver::example();
        let a = dv(&[1, 2, -3]);
        let min = minimal_decomp(&q, &a).unwrap();
        assert_eq!((min.gamma0.clone(), min.gamma1.clone()), (dv(&[1, 1, 0]), dv(&[0, 0, 7])));
        let can = canonical_decomp(&q, &a).unwrap();
        assert_eq!((can.mu.clone(), can.gamma.clone()), (dv(&[1, 2, 0]), dv(&[0, 0, 3])));
        let r = can.presentation_space(&q);
        assert_eq!((r.gamma0, r.gamma1), (dv(&[1, 2, 0]), dv(&[0, 1, 7])));
        assert!(min.le(&min.stabilized(&dv(&[0, 2, 1]))));
    }

    #[test]
    fn decompositions_small_cases() {
        let a2 = Quiver::a_n(2);
        let m = minimal_decomp(&a2, &dv(&[1, 1])).unwrap();
        assert_eq!((m.gamma0, m.gamma1), (dv(&[1, 0]), dv(&[0, 0])));
        let c = canonical_decomp(&a2, &dv(&[1, -1])).unwrap();
        assert_eq!((c.mu, c.gamma), (dv(&[1, 0]), dv(&[0, 1])));
        let c = canonical_decomp(&a2, &dv(&[2, 3])).unwrap();
        assert_eq!((c.mu, c.gamma), (dv(&[2, 3]), dv(&[0, 0])));
        let z = minimal_decomp(&a2, &dv(&[0, 0])).unwrap();
        assert!(z.gamma0.is_zero() && z.gamma1.is_zero());
    }

    #[test]
    fn hom_matrix_single_path() {
        let q = Arc::new(Quiver::a_n(2));
        let decomp = ProjDecomp::new(&q, dv(&[1, 1]), dv(&[0, 1])).unwrap();
        let (x, c) = (F::from_i64(5), F::from_i64(7));
        let mut blocks = Vec::new();
        for p in q.all_paths() {
            blocks.push(match (p.tail, p.head) {
                (0, 1) => Matrix::from_rows(vec![vec![x]], 1),
                (1, 1) => Matrix::from_rows(vec![vec![c]], 1),
                (0, 0) => Matrix::zeros(1, 0),
                _ => unreachable!(),
            });
        }
        let phi = Presentation::from_blocks(&q, decomp, blocks).unwrap();
        let s2 = Representation::<F>::simple(&q, 1);
        assert_eq!(phi.hom_matrix(&s2).unwrap(), Matrix::from_rows(vec![vec![c]], 1));
        assert_eq!(phi.cv_value(&s2).unwrap(), c);
        let zero = Representation::<F>::zero_maps(&q, dv(&[0, 0])).unwrap();
        assert_eq!(phi.hom_matrix(&zero).unwrap().shape(), (0, 0));
        assert_eq!(phi.cv_value(&zero).unwrap(), F::one());
        let p1 = Representation::<F>::projective(&q, 0);
        assert!(matches!(phi.cv_value(&p1), Err(Error::NonSquareWeight { pairing: 1 })));
    }

    #[test]
    fn canonical_presentation_small_cases() {
        let q = Arc::new(Quiver::a_n(2));
        let s1 = Representation::<F>::simple(&q, 0);
        let p = Presentation::canonical(&s1);
        assert_eq!((p.gamma0().clone(), p.gamma1().clone()), (dv(&[1, 0]), dv(&[0, 1])));
        assert_eq!(p.cokernel().dim(), &dv(&[1, 0]));
        let p1 = Representation::<F>::projective(&q, 0);
        let p = Presentation::canonical(&p1);
        assert_eq!((p.gamma0().clone(), p.gamma1().clone()), (dv(&[1, 1]), dv(&[0, 1])));
        assert_eq!(p.cokernel().dim(), &dv(&[1, 1]));
        assert!(p.is_injective());
        let zero = Representation::<F>::zero_maps(&q, dv(&[0, 0])).unwrap();
        let p = Presentation::canonical(&zero);
        assert!(p.gamma0().is_zero() && p.gamma1().is_zero());
    }

    #[test]
    fn cokernel_basics() {
        let q = Arc::new(Quiver::a_n(2));
        let id = Presentation::<F>::identity(&q, &dv(&[2, 1])).unwrap();
        assert_eq!(id.cokernel().total_dim(), 0);
        let zero = Presentation::<F>::zero(&q, ProjDecomp::new(&q, dv(&[1, 0]), dv(&[0, 1])).unwrap());
        let c = zero.cokernel();
        let p1 = Representation::<F>::projective(&q, 0);
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert!(is_isomorphic(&c, &p1, &mut rng).unwrap());
        let gen = Presentation::<F>::random(&q, ProjDecomp::new(&q, dv(&[1, 1]), dv(&[0, 1])).unwrap(), &mut rng);
        assert_eq!(gen.rank(), 1);
        let nocols = Presentation::<F>::random(&q, ProjDecomp::new(&q, dv(&[1, 2]), dv(&[0, 0])).unwrap(), &mut rng);
        assert_eq!(nocols.cokernel().dim(), &dv(&[1, 3]));
    }

    #[test]
    fn cokernel_of_canonical_is_isomorphic() {
        let q = Arc::new(Quiver::example());
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for dim in [[1, 1, 1], [2, 1, 3], [0, 2, 1], [1, 2, 2]] {
            let m = Representation::<F>::random(&q, dv(&dim), &mut rng).unwrap();
            let p = Presentation::canonical(&m);
            assert!(p.is_injective());
            let c = p.cokernel();
            assert!(is_isomorphic(&m, &c, &mut rng).unwrap(), "dim {dim:?}");
        }
    }

    #[test]
    fn stabilization_keeps_cv_including_sign() {
        // naive vertex-major ordering flips the sign on this instance
        let q = Arc::new(Quiver::a_n(2));
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let decomp = minimal_decomp(&q, &dv(&[1, 0])).unwrap();
        let phi = Presentation::<F>::random(&q, decomp, &mut rng);
        let v = Representation::<F>::random(&q, dv(&[1, 1]), &mut rng).unwrap();
        let base = phi.cv_value(&v).unwrap();
        assert!(!base.is_zero());
        for gamma in [[1, 0], [0, 1], [2, 3]] {
            let st = phi.stabilize(&dv(&gamma)).unwrap();
            assert_eq!(st.cv_value(&v).unwrap(), base, "gamma {gamma:?}");
            assert_eq!(st.cokernel().dim(), phi.cokernel().dim());
        }
        assert_eq!(phi.stabilize(&dv(&[0, 0])).unwrap(), phi);
    }

    #[test]
    fn hom_matrix_against_bruteforce_hom_space() {
        // dim ker Hom(phi, V) = dim Hom(coker phi, V) for an injective presentation
        let q = Arc::new(Quiver::example());
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let m = Representation::<F>::random(&q, dv(&[1, 1, 2]), &mut rng).unwrap();
        let v = Representation::<F>::random(&q, dv(&[1, 2, 1]), &mut rng).unwrap();
        let phi = Presentation::canonical(&m);
        let hm = phi.hom_matrix(&v).unwrap();
        assert_eq!(hm.cols() - hm.rank(), hom_dim(&m, &v).unwrap());
    }

    #[test]
    fn action_identity_and_associativity() {
        let q = Arc::new(Quiver::example());
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let d = ProjDecomp::new(&q, dv(&[1, 1, 0]), dv(&[0, 1, 2])).unwrap();
        let phi = Presentation::<F>::random(&q, d.clone(), &mut rng);
        let id0 = Presentation::identity(&q, &d.gamma0).unwrap();
        let id1 = Presentation::identity(&q, &d.gamma1).unwrap();
        assert_eq!(Presentation::apply_action(&id0, &phi, &id1).unwrap(), phi);
        let a = Presentation::random_aut(&q, &d.gamma0, &mut rng).unwrap();
        let b = Presentation::random_aut(&q, &d.gamma0, &mut rng).unwrap();
        let lhs = a.compose(&b).unwrap().compose(&phi).unwrap();
        let rhs = a.compose(&b.compose(&phi).unwrap()).unwrap();
        assert_eq!(lhs, rhs);
        assert_eq!(lhs.decomp(), phi.decomp());
        assert!(matches!(phi.compose(&a), Err(Error::ShapeMismatch(_))));
    }

    #[test]
    fn semi_invariance_small() {
        let q = Arc::new(Quiver::example());
        let mut rng = ChaCha8Rng::seed_from_u64(17);
        let a = dv(&[1, 2, -3]);
        let d = canonical_decomp(&q, &a).unwrap().presentation_space(&q);
        let v = Representation::<F>::random(&q, dv(&[3, 4, 1]), &mut rng).unwrap();
        assert_eq!(q.euler_form(&a, v.dim()).unwrap(), 0);
        let phi = Presentation::<F>::random(&q, d.clone(), &mut rng);
        let g0 = Presentation::random_aut(&q, &d.gamma0, &mut rng).unwrap();
        let g1 = Presentation::random_aut(&q, &d.gamma1, &mut rng).unwrap();
        let moved = Presentation::apply_action(&g0, &phi, &g1).unwrap();
        let sigma = cv_weight(&v);
        let expected = g0.character(&sigma).unwrap() * g1.character(&sigma).unwrap() * phi.cv_value(&v).unwrap();
        assert_eq!(moved.cv_value(&v).unwrap(), expected);
    }

    #[test]
    fn rational_cv_matches_bareiss_on_integers() {
        let q = Arc::new(Quiver::a_n(2));
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let d = minimal_decomp(&q, &dv(&[2, 0])).unwrap();
        let phi = Presentation::<crate::Rational>::random(&q, d, &mut rng);
        let v = Representation::<crate::Rational>::random(&q, dv(&[1, 1]), &mut rng).unwrap();
        let m = phi.hom_matrix(&v).unwrap();
        let ints: Vec<Vec<num_bigint::BigInt>> =
            m.to_rows().iter().map(|r| r.iter().map(|x| x.to_integer()).collect()).collect();
        assert_eq!(phi.cv_value(&v).unwrap(), crate::Rational::from_integer(bareiss::det(ints)));
    }

    #[test]
    fn json_roundtrip() {
        let q = Arc::new(Quiver::example());
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let d = ProjDecomp::new(&q, dv(&[1, 2, 0]), dv(&[0, 1, 7])).unwrap();
        let phi = Presentation::<F>::random(&q, d, &mut rng);
        let back = Presentation::<F>::from_json(&q, &phi.to_json()).unwrap();
        assert_eq!(back, phi);
        assert!(phi.to_json()["blocks"].get("(1,3,1)").is_some());
    }
}
