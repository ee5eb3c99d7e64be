//! Representations over an exact field: Hom/Ext, random sampling and
//! decomposition into indecomposable summands.

use std::collections::BTreeMap;
use std::sync::Arc;

use rand::Rng;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::field::{poly_gcd, Field};
use crate::matrix::{Matrix, Subspace};
use crate::quiver::{DimVector, Quiver};

/// Default number of candidate endomorphisms tried before giving up on a split.
pub const DEFAULT_SPLIT_RETRIES: usize = 20;

/// One matrix per arrow, of shape `dim[head] x dim[tail]`.
#[derive(Clone, Debug)]
pub struct Representation<F> {
    quiver: Arc<Quiver>,
    dim: DimVector,
    mats: Vec<Matrix<F>>,
}

impl<F: Field> PartialEq for Representation<F> {
    fn eq(&self, other: &Self) -> bool {
        same_quiver(&self.quiver, &other.quiver) && self.dim == other.dim && self.mats == other.mats
    }
}

pub(crate) fn same_quiver(a: &Arc<Quiver>, b: &Arc<Quiver>) -> bool {
    Arc::ptr_eq(a, b) || **a == **b
}

pub(crate) fn check_nonneg(a: &DimVector) -> Result<()> {
    if a.is_nonneg() {
        Ok(())
    } else {
        Err(Error::NegativeDimension(a.entries().to_vec()))
    }
}

fn udim(a: &DimVector, v: usize) -> usize {
    a[v] as usize
}

impl<F: Field> Representation<F> {
    pub fn new(quiver: Arc<Quiver>, dim: DimVector, mats: Vec<Matrix<F>>) -> Result<Self> {
        quiver.check_len(&dim)?;
        check_nonneg(&dim)?;
        if mats.len() != quiver.arrows().len() {
            return Err(Error::ShapeMismatch(format!(
                "expected {} arrow matrices, got {}",
                quiver.arrows().len(),
                mats.len()
            )));
        }
        for (a, (&(t, h), m)) in quiver.arrows().iter().zip(&mats).enumerate() {
            if m.shape() != (udim(&dim, h), udim(&dim, t)) {
                return Err(Error::ShapeMismatch(format!(
                    "arrow {a}: expected {}x{}, got {}x{}",
                    dim[h],
                    dim[t],
                    m.rows(),
                    m.cols()
                )));
            }
        }
        Ok(Representation { quiver, dim, mats })
    }

    fn from_fn(quiver: &Arc<Quiver>, dim: DimVector, mut f: impl FnMut(usize, usize, usize) -> Matrix<F>) -> Result<Self> {
        quiver.check_len(&dim)?;
        check_nonneg(&dim)?;
        let mats = quiver
            .arrows()
            .iter()
            .enumerate()
            .map(|(a, &(t, h))| f(a, udim(&dim, h), udim(&dim, t)))
            .collect();
        Ok(Representation { quiver: quiver.clone(), dim, mats })
    }

    /// Representation with all arrow maps zero (semisimple).
    pub fn zero_maps(quiver: &Arc<Quiver>, dim: DimVector) -> Result<Self> {
        Self::from_fn(quiver, dim, |_, r, c| Matrix::zeros(r, c))
    }

    /// Entries uniform in the field (bounded integers for the rationals).
    pub fn random<R: Rng + ?Sized>(quiver: &Arc<Quiver>, dim: DimVector, rng: &mut R) -> Result<Self> {
        Self::from_fn(quiver, dim, |_, r, c| Matrix::random(r, c, rng))
    }

    pub fn simple(quiver: &Arc<Quiver>, v: usize) -> Self {
        Self::zero_maps(quiver, DimVector::unit(quiver.n(), v)).expect("valid simple")
    }

    /// `P(v)`: at `u` the basis is the paths `v -> u`, arrows act by appending.
    pub fn projective(quiver: &Arc<Quiver>, v: usize) -> Self {
        let q = quiver.as_ref();
        let dim = q.proj_vector(v).expect("vertex in range");
        Self::from_fn(quiver, dim, |b, rows, cols| {
            let (t, h) = q.arrows()[b];
            let tail_paths = q.path_ids(v, t);
            let head_paths = q.path_ids(v, h);
            let step = q.arrow_path(b);
            let mut m = Matrix::zeros(rows, cols);
            for (c, &p) in tail_paths.iter().enumerate() {
                let target = q.concat(p, step);
                let r = head_paths.iter().position(|&x| x == target).expect("path extends");
                m[(r, c)] = F::one();
            }
            m
        })
        .expect("valid projective")
    }

    /// `I(v)`: at `u` the dual basis of the paths `u -> v`, arrows act by removing a first step.
    pub fn injective(quiver: &Arc<Quiver>, v: usize) -> Self {
        let q = quiver.as_ref();
        let dim = q.inj_vector(v).expect("vertex in range");
        Self::from_fn(quiver, dim, |b, rows, cols| {
            let (t, h) = q.arrows()[b];
            let tail_paths = q.path_ids(t, v);
            let head_paths = q.path_ids(h, v);
            let step = q.arrow_path(b);
            let mut m = Matrix::zeros(rows, cols);
            for (r, &p) in head_paths.iter().enumerate() {
                let longer = q.concat(step, p);
                let c = tail_paths.iter().position(|&x| x == longer).expect("path extends");
                m[(r, c)] = F::one();
            }
            m
        })
        .expect("valid injective")
    }

    pub fn quiver(&self) -> &Arc<Quiver> {
        &self.quiver
    }

    pub fn dim(&self) -> &DimVector {
        &self.dim
    }

    pub fn dim_at(&self, v: usize) -> usize {
        udim(&self.dim, v)
    }

    pub fn total_dim(&self) -> usize {
        self.dim.iter().map(|&x| x as usize).sum()
    }

    pub fn mat(&self, a: usize) -> &Matrix<F> {
        &self.mats[a]
    }

    pub fn mats(&self) -> &[Matrix<F>] {
        &self.mats
    }

    pub fn direct_sum(&self, other: &Self) -> Result<Self> {
        if !same_quiver(&self.quiver, &other.quiver) {
            return Err(Error::QuiverMismatch);
        }
        let dim = &self.dim + &other.dim;
        let q = self.quiver.clone();
        Self::from_fn(&q, dim, |a, r, c| {
            let (x, y) = (&self.mats[a], &other.mats[a]);
            let mut m = Matrix::zeros(r, c);
            m.set_block(0, 0, x);
            m.set_block(x.rows(), x.cols(), y);
            m
        })
    }

    /// The composite `V_{a_k} ... V_{a_1}` along a path (identity for a constant path).
    pub fn path_map(&self, path: usize) -> Matrix<F> {
        let p = self.quiver.path(path);
        let mut acc = Matrix::identity(self.dim_at(p.tail));
        for &a in &p.arrows {
            acc = self.mats[a].mul(&acc);
        }
        acc
    }

    /// Base change `(gM)_a = g_{ha} M_a g_{ta}^-1` by invertible matrices `g_v`.
    pub fn act(&self, g: &[Matrix<F>]) -> Result<Self> {
        if g.len() != self.quiver.n() {
            return Err(Error::DimensionMismatch { expected: self.quiver.n(), got: g.len() });
        }
        let mut inverses = Vec::with_capacity(g.len());
        for (v, gv) in g.iter().enumerate() {
            if gv.shape() != (self.dim_at(v), self.dim_at(v)) {
                return Err(Error::ShapeMismatch(format!("group element at vertex {v}")));
            }
            inverses.push(gv.inverse().ok_or_else(|| Error::ShapeMismatch(format!("singular g at vertex {v}")))?);
        }
        let mats = self
            .quiver
            .arrows()
            .iter()
            .zip(&self.mats)
            .map(|(&(t, h), m)| g[h].mul(m).mul(&inverses[t]))
            .collect();
        Ok(Representation { quiver: self.quiver.clone(), dim: self.dim.clone(), mats })
    }

    pub fn end_dim(&self) -> usize {
        hom_dim(self, self).expect("same quiver")
    }

    /// `End = k`.
    pub fn is_schur(&self) -> bool {
        self.end_dim() == 1
    }

    /// Restriction to a subrepresentation given by invariant subspaces, in their echelon bases.
    pub fn restrict(&self, spaces: &[Subspace<F>]) -> Result<Self> {
        let dim = DimVector::new(spaces.iter().map(|s| s.dim() as i64).collect());
        let mut mats = Vec::with_capacity(self.mats.len());
        for (a, &(t, h)) in self.quiver.arrows().iter().enumerate() {
            let mut cols = Vec::with_capacity(spaces[t].dim());
            for b in spaces[t].basis() {
                let image = self.mats[a].mul_vec(b);
                let c = spaces[h]
                    .coords(&image)
                    .ok_or_else(|| Error::Internal(format!("subspace not invariant under arrow {a}")))?;
                cols.push(c);
            }
            mats.push(Matrix::from_columns(&cols, spaces[h].dim()));
        }
        Representation::new(self.quiver.clone(), dim, mats)
    }

    pub fn to_json(&self) -> Value {
        let mats: BTreeMap<String, Value> = self
            .mats
            .iter()
            .enumerate()
            .map(|(a, m)| (a.to_string(), matrix_to_json(m)))
            .collect();
        json!({ "field": F::spec().to_string(), "dim": self.dim, "mats": mats })
    }

    pub fn from_json(quiver: &Arc<Quiver>, value: &Value) -> Result<Self> {
        if let Some(tag) = value.get("field").and_then(Value::as_str) {
            if tag != F::spec().to_string() {
                return Err(Error::FieldMismatch(format!("file is over {tag}, expected {}", F::spec())));
            }
        }
        let dim: DimVector = serde_json::from_value(value.get("dim").cloned().unwrap_or(Value::Null))
            .map_err(|e| Error::Parse(format!("dim: {e}")))?;
        quiver.check_len(&dim)?;
        check_nonneg(&dim)?;
        let mats_json = value.get("mats").and_then(Value::as_object);
        let mut mats = Vec::new();
        for (a, &(t, h)) in quiver.arrows().iter().enumerate() {
            let (r, c) = (udim(&dim, h), udim(&dim, t));
            let m = match mats_json.and_then(|o| o.get(&a.to_string())) {
                Some(v) => matrix_from_json(v, r, c)?,
                None if r == 0 || c == 0 => Matrix::zeros(r, c),
                None => return Err(Error::Parse(format!("missing matrix for arrow {a}"))),
            };
            mats.push(m);
        }
        Representation::new(quiver.clone(), dim, mats)
    }
}

pub(crate) fn matrix_to_json<F: Field>(m: &Matrix<F>) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| Value::Array(m.row(r).iter().map(|x| Value::String(x.to_string())).collect()))
            .collect(),
    )
}

pub(crate) fn matrix_from_json<F: Field>(v: &Value, rows: usize, cols: usize) -> Result<Matrix<F>> {
    let arr = v.as_array().ok_or_else(|| Error::Parse("matrix must be an array of rows".into()))?;
    if arr.len() != rows {
        return Err(Error::ShapeMismatch(format!("expected {rows} rows, got {}", arr.len())));
    }
    let mut out = Vec::with_capacity(rows);
    for row in arr {
        let row = row.as_array().ok_or_else(|| Error::Parse("matrix row must be an array".into()))?;
        if row.len() != cols {
            return Err(Error::ShapeMismatch(format!("expected {cols} columns, got {}", row.len())));
        }
        out.push(
            row.iter()
                .map(|x| match x {
                    Value::String(s) => F::parse_elem(s),
                    Value::Number(n) => F::parse_elem(&n.to_string()),
                    _ => Err(Error::Parse(format!("bad field element {x}"))),
                })
                .collect::<Result<Vec<F>>>()?,
        );
    }
    Ok(Matrix::from_rows(out, cols))
}

/// A basis of `Hom(M, N)`; each element is one matrix `f_v : M_v -> N_v` per vertex.
#[derive(Clone, Debug)]
pub struct HomSpace<F> {
    pub basis: Vec<Vec<Matrix<F>>>,
}

impl<F: Field> HomSpace<F> {
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn combination(&self, coeffs: &[F]) -> Vec<Matrix<F>> {
        let mut out: Vec<Matrix<F>> = self.basis[0].iter().map(|m| Matrix::zeros(m.rows(), m.cols())).collect();
        for (b, c) in self.basis.iter().zip(coeffs) {
            for (o, m) in out.iter_mut().zip(b) {
                o.add_scaled(m, c);
            }
        }
        out
    }

    pub fn random_element<R: Rng + ?Sized>(&self, rng: &mut R) -> Vec<Matrix<F>> {
        let coeffs: Vec<F> = (0..self.dim()).map(|_| F::sample(rng)).collect();
        self.combination(&coeffs)
    }
}

/// Linear system `f_{ha} M_a - N_a f_{ta} = 0` in the unknowns `(f_v)`.
fn hom_system<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<(Matrix<F>, Vec<usize>)> {
    if !same_quiver(&m.quiver, &n.quiver) {
        return Err(Error::QuiverMismatch);
    }
    let q = &m.quiver;
    let mut offsets = Vec::with_capacity(q.n() + 1);
    let mut total = 0;
    for v in 0..q.n() {
        offsets.push(total);
        total += n.dim_at(v) * m.dim_at(v);
    }
    offsets.push(total);
    let rows: usize = q.arrows().iter().map(|&(t, h)| n.dim_at(h) * m.dim_at(t)).sum();
    let mut sys = Matrix::<F>::zeros(rows, total);
    let mut row0 = 0;
    for (a, &(t, h)) in q.arrows().iter().enumerate() {
        let (mt, mh, nt, nh) = (m.dim_at(t), m.dim_at(h), n.dim_at(t), n.dim_at(h));
        let (ma, na) = (&m.mats[a], &n.mats[a]);
        for i in 0..nh {
            for j in 0..mt {
                let r = row0 + i * mt + j;
                for k in 0..mh {
                    let x = &ma[(k, j)];
                    if !x.is_zero() {
                        let c = offsets[h] + i * mh + k;
                        sys[(r, c)] = sys[(r, c)].clone() + x.clone();
                    }
                }
                for k in 0..nt {
                    let x = &na[(i, k)];
                    if !x.is_zero() {
                        let c = offsets[t] + k * mt + j;
                        sys[(r, c)] = sys[(r, c)].clone() - x.clone();
                    }
                }
            }
        }
        row0 += nh * mt;
    }
    Ok((sys, offsets))
}

pub fn hom_space<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<HomSpace<F>> {
    let (sys, offsets) = hom_system(m, n)?;
    let q = &m.quiver;
    let basis = sys
        .kernel()
        .into_iter()
        .map(|vec| {
            (0..q.n())
                .map(|v| {
                    let (r, c) = (n.dim_at(v), m.dim_at(v));
                    Matrix::from_fn(r, c, |i, j| vec[offsets[v] + i * c + j].clone())
                })
                .collect()
        })
        .collect();
    Ok(HomSpace { basis })
}

pub fn hom_dim<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<usize> {
    let (sys, _) = hom_system(m, n)?;
    Ok(sys.cols() - sys.rank())
}

/// `dim Ext^1(M, N) = dim Hom(M, N) - <dim M, dim N>`.
pub fn ext_dim<F: Field>(m: &Representation<F>, n: &Representation<F>) -> Result<usize> {
    let hom = hom_dim(m, n)? as i64;
    let pairing = m.quiver.euler_form(&m.dim, &n.dim)?;
    let ext = hom - pairing;
    if ext < 0 {
        return Err(Error::Internal(format!("negative ext dimension {ext}")));
    }
    Ok(ext as usize)
}

/// Minimum of `dim Hom(A, B)` over `trials` independent random pairs.
pub fn generic_hom<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    a: &DimVector,
    b: &DimVector,
    rng: &mut R,
    trials: usize,
) -> Result<usize> {
    check_nonneg(a)?;
    check_nonneg(b)?;
    // Every sample is bounded below by max(0, <a,b>), so reaching it ends the search.
    let floor = quiver.euler_form(a, b)?.max(0) as usize;
    let mut best = usize::MAX;
    for _ in 0..trials.max(1) {
        let m = Representation::<F>::random(quiver, a.clone(), rng)?;
        let n = Representation::<F>::random(quiver, b.clone(), rng)?;
        best = best.min(hom_dim(&m, &n)?);
        if best == floor {
            break;
        }
    }
    Ok(best)
}

/// Minimum of `dim Ext^1(A, B)` over `trials` independent random pairs.
pub fn generic_ext<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    a: &DimVector,
    b: &DimVector,
    rng: &mut R,
    trials: usize,
) -> Result<usize> {
    let hom = generic_hom::<F, R>(quiver, a, b, rng, trials)? as i64;
    Ok((hom - quiver.euler_form(a, b)?) as usize)
}

/// Isomorphism test: equal dimension vectors and an invertible random homomorphism.
pub fn is_isomorphic<F: Field, R: Rng + ?Sized>(m: &Representation<F>, n: &Representation<F>, rng: &mut R) -> Result<bool> {
    if !same_quiver(&m.quiver, &n.quiver) {
        return Err(Error::QuiverMismatch);
    }
    if m.dim != n.dim {
        return Ok(false);
    }
    if m.total_dim() == 0 {
        return Ok(true);
    }
    let hom = hom_space(m, n)?;
    if hom.dim() == 0 {
        return Ok(false);
    }
    for _ in 0..3 {
        let f = hom.random_element(rng);
        if f.iter().all(|fv| !fv.det().is_zero()) {
            return Ok(true);
        }
    }
    Ok(false)
}

enum SplitAttempt<F> {
    Split(Box<(Representation<F>, Representation<F>)>),
    /// The candidate is `lambda + nilpotent`.
    Unipotent(F),
    Inconclusive,
}

fn endo_minus_scalar<F: Field>(psi: &[Matrix<F>], lambda: &F) -> Vec<Matrix<F>> {
    psi.iter()
        .map(|m| m.sub(&Matrix::identity(m.rows()).scale(lambda)))
        .collect()
}

fn try_split<F: Field, R: Rng + ?Sized>(m: &Representation<F>, psi: &[Matrix<F>], rng: &mut R) -> SplitAttempt<F> {
    let n = m.total_dim();
    let mut candidates: Vec<F> = Vec::new();
    for p in psi.iter().filter(|p| p.rows() > 0) {
        for r in F::roots(&p.charpoly(), rng) {
            if !candidates.contains(&r) {
                candidates.push(r);
            }
        }
    }
    for lambda in &candidates {
        let shifted: Vec<Matrix<F>> = endo_minus_scalar(psi, lambda).iter().map(|x| x.pow(n)).collect();
        let kernels: Vec<Subspace<F>> = shifted.iter().map(|x| Subspace::span(x.cols(), x.kernel())).collect();
        let kdim: usize = kernels.iter().map(Subspace::dim).sum();
        if kdim == n {
            if candidates.len() == 1 {
                return SplitAttempt::Unipotent(lambda.clone());
            }
            continue;
        }
        if kdim == 0 {
            continue;
        }
        let images: Vec<Subspace<F>> = shifted
            .iter()
            .map(|x| Subspace::span(x.rows(), (0..x.cols()).map(|c| x.column(c))))
            .collect();
        let (Ok(a), Ok(b)) = (m.restrict(&kernels), m.restrict(&images)) else {
            return SplitAttempt::Inconclusive;
        };
        return SplitAttempt::Split(Box::new((a, b)));
    }
    SplitAttempt::Inconclusive
}

fn flatten<F: Field>(e: &[Matrix<F>]) -> Vec<F> {
    e.iter().flat_map(|m| m.to_rows().into_iter().flatten()).collect()
}

fn unflatten<F: Field>(v: &[F], shapes: &[(usize, usize)]) -> Vec<Matrix<F>> {
    let mut at = 0;
    shapes
        .iter()
        .map(|&(r, c)| {
            let m = Matrix::from_fn(r, c, |i, j| v[at + i * c + j].clone());
            at += r * c;
            m
        })
        .collect()
}

fn compose<F: Field>(a: &[Matrix<F>], b: &[Matrix<F>]) -> Vec<Matrix<F>> {
    a.iter().zip(b).map(|(x, y)| x.mul(y)).collect()
}

/// Certifies that `End(M) = k + N` with `N` a nilpotent subalgebra, which makes `End(M)` local.
fn local_certificate<F: Field>(nilpotent_parts: &[Vec<Matrix<F>>]) -> bool {
    let Some(first) = nilpotent_parts.first() else {
        return true;
    };
    let shapes: Vec<(usize, usize)> = first.iter().map(Matrix::shape).collect();
    let len: usize = shapes.iter().map(|&(r, c)| r * c).sum();
    let span = Subspace::span(len, nilpotent_parts.iter().map(|e| flatten(e)));
    let gens: Vec<Vec<Matrix<F>>> = span.basis().iter().map(|v| unflatten(v, &shapes)).collect();
    for x in &gens {
        for y in &gens {
            if !span.contains(&flatten(&compose(x, y))) {
                return false;
            }
        }
    }
    let mut power = span.clone();
    while power.dim() > 0 {
        let elems: Vec<Vec<Matrix<F>>> = power.basis().iter().map(|v| unflatten(v, &shapes)).collect();
        let next = Subspace::span(
            len,
            elems.iter().flat_map(|x| gens.iter().map(move |y| flatten(&compose(x, y)))),
        );
        if next.dim() >= power.dim() {
            return false;
        }
        power = next;
    }
    true
}

/// Random elements tried when looking for a generator of `End(M)`.
const FIELD_ATTEMPTS: usize = 8;

/// `Some(d)` when `End(M)` is a field of degree `d` over `k`.
///
/// Then `M` is indecomposable, and over the algebraic closure it is a sum of `d`
/// pairwise non-isomorphic conjugate bricks, each of dimension `dim M / d`.
/// Detected by a random endomorphism whose minimal polynomial is squarefree of
/// degree `dim End(M)`.
pub fn end_field_degree<F: Field, R: Rng + ?Sized>(m: &Representation<F>, rng: &mut R) -> Result<Option<usize>> {
    let end = hom_space(m, m)?;
    let d = end.dim();
    if d <= 1 {
        return Ok((d == 1).then_some(1));
    }
    let len: usize = m.dim.iter().map(|&x| (x * x) as usize).sum();
    for _ in 0..FIELD_ATTEMPTS {
        let psi = end.random_element(rng);
        let mut power: Vec<Matrix<F>> = psi.iter().map(|p| Matrix::identity(p.rows())).collect();
        let mut cols = Vec::with_capacity(d);
        for _ in 0..d {
            cols.push(flatten(&power));
            power = compose(&power, &psi);
        }
        let basis = Matrix::from_columns(&cols, len);
        if basis.rank() < d {
            continue;
        }
        let c = basis.solve(&flatten(&power)).ok_or_else(|| Error::Internal("endomorphism ring not closed".into()))?;
        // Minimal polynomial x^d - sum c_i x^i, low degree first.
        let mut f: Vec<F> = c.into_iter().map(|x| F::zero() - x).collect();
        f.push(F::one());
        let df: Vec<F> = f.iter().enumerate().skip(1).map(|(i, x)| F::from_i64(i as i64) * x.clone()).collect();
        let squarefree = poly_gcd(f, df).len() == 1;
        return Ok(squarefree.then_some(d));
    }
    Ok(None)
}

/// Either a splitting `M = A + B` or `None` when `M` is certified indecomposable.
fn split_step<F: Field, R: Rng + ?Sized>(
    m: &Representation<F>,
    rng: &mut R,
    max_retries: usize,
) -> Result<Option<(Representation<F>, Representation<F>)>> {
    let end = hom_space(m, m)?;
    if end.dim() <= 1 {
        return Ok(None);
    }
    let mut nilpotent_parts = Vec::new();
    for (i, psi) in end.basis.iter().enumerate() {
        match try_split(m, psi, rng) {
            SplitAttempt::Split(pair) => return Ok(Some(*pair)),
            SplitAttempt::Unipotent(lambda) => nilpotent_parts.push(endo_minus_scalar(psi, &lambda)),
            SplitAttempt::Inconclusive => {}
        }
        if i + 1 == end.dim() && nilpotent_parts.len() == end.dim() && local_certificate(&nilpotent_parts) {
            return Ok(None);
        }
    }
    if end_field_degree(m, rng)?.is_some() {
        return Ok(None);
    }
    for _ in 0..max_retries {
        let psi = end.random_element(rng);
        if let SplitAttempt::Split(pair) = try_split(m, &psi, rng) {
            return Ok(Some(*pair));
        }
    }
    Err(Error::SplitFailure { attempts: max_retries })
}

/// Splits `M` into indecomposable summands using generalized eigenspaces of endomorphisms.
///
/// Each summand is certified either by `End = k` or by `End` being local with
/// residue field `k`, or by `End` being a field. Summands come back in a
/// deterministic order for a given RNG state.
pub fn fitting_decompose<F: Field, R: Rng + ?Sized>(
    m: &Representation<F>,
    rng: &mut R,
    max_retries: usize,
) -> Result<Vec<Representation<F>>> {
    let mut out = Vec::new();
    let mut stack = vec![m.clone()];
    while let Some(x) = stack.pop() {
        if x.total_dim() == 0 {
            continue;
        }
        match split_step(&x, rng, max_retries)? {
            None => out.push(x),
            Some((a, b)) => {
                stack.push(b);
                stack.push(a);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use num_traits::{One, Zero};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    type F = Fp<32003>;

    fn dv(v: &[i64]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    fn a2() -> Arc<Quiver> {
        Arc::new(Quiver::a_n(2))
    }

    #[test]
    fn shapes_and_determinism() {
        let q = Arc::new(Quiver::example());
        let mut r1 = ChaCha8Rng::seed_from_u64(5);
        let mut r2 = ChaCha8Rng::seed_from_u64(5);
        let m = Representation::<F>::random(&q, dv(&[1, 1, 1]), &mut r1).unwrap();
        assert!(m.mats().iter().all(|x| x.shape() == (1, 1)));
        assert_eq!(m, Representation::<F>::random(&q, dv(&[1, 1, 1]), &mut r2).unwrap());
        let z = Representation::<F>::random(&q, dv(&[2, 0, 1]), &mut r1).unwrap();
        assert_eq!(z.mat(0).shape(), (0, 2));
        assert!(matches!(
            Representation::<F>::random(&q, dv(&[1, -1, 0]), &mut r1),
            Err(Error::NegativeDimension(_))
        ));
    }

    #[test]
    fn projectives_and_injectives() {
        let q = Arc::new(Quiver::example());
        let p1 = Representation::<F>::projective(&q, 0);
        assert_eq!(p1.dim(), &dv(&[1, 1, 2]));
        assert_eq!(p1.end_dim(), 1);
        let i3 = Representation::<F>::injective(&q, 2);
        assert_eq!(i3.dim(), &dv(&[2, 2, 1]));
        assert_eq!(i3.end_dim(), 1);
        for v in 0..3 {
            let p = Representation::<F>::projective(&q, v);
            let i = Representation::<F>::injective(&q, v);
            for w in 0..3 {
                let s = Representation::<F>::simple(&q, w);
                assert_eq!(hom_dim(&p, &s).unwrap(), usize::from(v == w));
                assert_eq!(hom_dim(&s, &i).unwrap(), usize::from(v == w));
            }
        }
    }

    #[test]
    fn hom_and_ext_on_a2() {
        let q = a2();
        let s1 = Representation::<F>::simple(&q, 0);
        let s2 = Representation::<F>::simple(&q, 1);
        let p1 = Representation::<F>::projective(&q, 0);
        assert_eq!(hom_dim(&s1, &s2).unwrap(), 0);
        assert_eq!(hom_dim(&s2, &p1).unwrap(), 1);
        assert_eq!(ext_dim(&s1, &s2).unwrap(), 1);
        assert_eq!(ext_dim(&s2, &s1).unwrap(), 0);
        assert_eq!(ext_dim(&p1, &s1).unwrap(), 0);
        let hs = hom_space(&s2, &p1).unwrap();
        assert_eq!(hs.dim(), 1);
        let f = &hs.basis[0];
        assert_eq!(f[1].mul(s2.mat(0)), p1.mat(0).mul(&f[0]));
    }

    #[test]
    fn generic_values_on_a2() {
        let q = a2();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(generic_hom::<F, _>(&q, &dv(&[0, 1]), &dv(&[1, 1]), &mut rng, 3).unwrap(), 1);
        assert_eq!(generic_hom::<F, _>(&q, &dv(&[1, 0]), &dv(&[0, 1]), &mut rng, 3).unwrap(), 0);
        assert_eq!(generic_hom::<F, _>(&q, &dv(&[2, 1]), &dv(&[0, 0]), &mut rng, 3).unwrap(), 0);
        assert_eq!(generic_ext::<F, _>(&q, &dv(&[1, 0]), &dv(&[0, 1]), &mut rng, 3).unwrap(), 1);
        assert_eq!(generic_ext::<F, _>(&q, &dv(&[1, 1]), &dv(&[0, 1]), &mut rng, 3).unwrap(), 0);
        assert_eq!(generic_ext::<F, _>(&q, &dv(&[1, 1]), &dv(&[1, 1]), &mut rng, 3).unwrap(), 0);
    }

    #[test]
    fn end_dims() {
        let q = a2();
        assert!(Representation::<F>::projective(&q, 0).is_schur());
        let s2s2 = Representation::<F>::zero_maps(&q, dv(&[0, 2])).unwrap();
        assert_eq!(s2s2.end_dim(), 4);
        assert_eq!(Representation::<F>::zero_maps(&q, dv(&[0, 0])).unwrap().end_dim(), 0);
    }

    #[test]
    fn fitting_on_explicit_sum() {
        let q = a2();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let m = Representation::new(
            q.clone(),
            dv(&[1, 2]),
            vec![Matrix::from_rows(vec![vec![F::one()], vec![F::zero()]], 1)],
        )
        .unwrap();
        let mut dims: Vec<DimVector> = fitting_decompose(&m, &mut rng, DEFAULT_SPLIT_RETRIES)
            .unwrap()
            .iter()
            .map(|x| x.dim().clone())
            .collect();
        dims.sort();
        assert_eq!(dims, vec![dv(&[0, 1]), dv(&[1, 1])]);
        let p = Representation::<F>::projective(&q, 0);
        assert_eq!(fitting_decompose(&p, &mut rng, 20).unwrap(), vec![p.clone()]);
        let zero = Representation::<F>::zero_maps(&q, dv(&[0, 0])).unwrap();
        assert!(fitting_decompose(&zero, &mut rng, 20).unwrap().is_empty());
    }

    #[test]
    fn fitting_certifies_local_non_schur() {
        // Kronecker module with End = k[x]/x^2: the regular module of dimension (2,2)
        // with a single Jordan block.
        let q = Arc::new(Quiver::from_edges(2, &[(1, 2), (1, 2)]).unwrap());
        let i = Matrix::<F>::identity(2);
        let j = Matrix::from_i64_rows(&[vec![0, 1], vec![0, 0]]);
        let m = Representation::new(q, dv(&[2, 2]), vec![i, j]).unwrap();
        assert_eq!(m.end_dim(), 2);
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let parts = fitting_decompose(&m, &mut rng, 5).unwrap();
        assert_eq!(parts.len(), 1);
    }

    #[test]
    fn fitting_splits_semisimple() {
        let q = Arc::new(Quiver::example());
        let m = Representation::<F>::zero_maps(&q, dv(&[2, 1, 3])).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let parts = fitting_decompose(&m, &mut rng, 20).unwrap();
        assert_eq!(parts.len(), 6);
        assert!(parts.iter().all(|p| p.total_dim() == 1));
    }

    #[test]
    fn isomorphism_and_group_action() {
        let q = Arc::new(Quiver::example());
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let m = Representation::<F>::random(&q, dv(&[1, 2, 2]), &mut rng).unwrap();
        let g: Vec<Matrix<F>> = (0..3).map(|v| Matrix::random(m.dim_at(v), m.dim_at(v), &mut rng)).collect();
        let gm = m.act(&g).unwrap();
        assert!(is_isomorphic(&m, &gm, &mut rng).unwrap());
        let other = Representation::<F>::zero_maps(&q, dv(&[1, 2, 2])).unwrap();
        assert!(!is_isomorphic(&m, &other, &mut rng).unwrap());
    }

    #[test]
    fn json_roundtrip() {
        let q = Arc::new(Quiver::example());
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let m = Representation::<F>::random(&q, dv(&[1, 2, 0]), &mut rng).unwrap();
        let back = Representation::<F>::from_json(&q, &m.to_json()).unwrap();
        assert_eq!(back, m);
        let rational = Representation::<crate::Rational>::from_json(&q, &m.to_json());
        assert!(matches!(rational, Err(Error::FieldMismatch(_))));
    }

    #[test]
    fn field_endomorphisms_over_a_prime_field() {
        type G = Fp<7>;
        let q = Arc::new(Quiver::from_edges(2, &[(1, 2), (1, 2)]).unwrap());
        let mut r = ChaCha8Rng::seed_from_u64(3);
        // x^2 - 3 has no root mod 7, so this pencil is a point of degree two.
        let a = Matrix::<G>::identity(2);
        let b = Matrix::<G>::from_i64_rows(&[vec![0, 3], vec![1, 0]]);
        let m = Representation::new(q.clone(), dv(&[2, 2]), vec![a.clone(), b]).unwrap();
        assert_eq!(m.end_dim(), 2);
        assert_eq!(end_field_degree(&m, &mut r).unwrap(), Some(2));
        assert_eq!(fitting_decompose(&m, &mut r, DEFAULT_SPLIT_RETRIES).unwrap().len(), 1);
        // A Jordan block has a local but non-reduced endomorphism ring.
        let j = Matrix::<G>::from_i64_rows(&[vec![1, 1], vec![0, 1]]);
        let n = Representation::new(q.clone(), dv(&[2, 2]), vec![a, j]).unwrap();
        assert_eq!(end_field_degree(&n, &mut r).unwrap(), None);
        assert_eq!(end_field_degree(&Representation::<G>::simple(&q, 0), &mut r).unwrap(), Some(1));
    }
}
