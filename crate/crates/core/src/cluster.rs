//! The cluster tilting complex of a Dynkin quiver: vertices are positive roots
//! and shifted projectives, simplices are pairwise ext-compatible sets.

use std::collections::{BTreeMap, HashMap, HashSet, VecDeque};
use std::fmt::Write as _;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Float, Signed, Zero};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::bareiss;
use crate::decomposition::{d_beta_halfspaces, generic_decomposition, is_schur_root, DecompositionOptions};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::quiver::{DimVector, Quiver};
use crate::rep::{ext_dim, generic_ext, Representation};

/// Largest coefficient of any positive root of a simply laced Dynkin diagram (the E8 highest root).
pub const ROOT_ENTRY_BOUND: i64 = 6;
/// Random points used by the covering check in [`verify_sphere`].
pub const COVERING_SAMPLES: usize = 200;
/// Entries of covering sample points are drawn from `-COVERING_RADIUS..=COVERING_RADIUS`.
pub const COVERING_RADIUS: i64 = 5;
/// Samples tried before the certified oracle gives up on finding an indecomposable.
const CERTIFY_ATTEMPTS: usize = 64;

/// Leading principal minors of `E + E^t` are all positive.
pub fn is_dynkin(quiver: &Quiver) -> bool {
    let s = quiver.symmetric_form();
    (1..=quiver.n()).all(|k| {
        let minor: Vec<Vec<BigInt>> =
            s.rows()[..k].iter().map(|r| r[..k].iter().map(|&x| BigInt::from(x)).collect()).collect();
        bareiss::det(minor).is_positive()
    })
}

fn tits(quiver: &Quiver, a: &[i64]) -> i64 {
    let sq: i64 = a.iter().map(|x| x * x).sum();
    sq - quiver.arrows().iter().map(|&(t, h)| a[t] * a[h]).sum::<i64>()
}

/// Positive roots ordered by height, then reverse lexicographically (simple roots in vertex order).
pub fn positive_roots(quiver: &Quiver) -> Result<Vec<DimVector>> {
    if !is_dynkin(quiver) {
        return Err(Error::NotDynkin);
    }
    let n = quiver.n();
    let mut out = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        let mut i = 0;
        while i < n && cur[i] == ROOT_ENTRY_BOUND {
            cur[i] = 0;
            i += 1;
        }
        if i == n {
            break;
        }
        cur[i] += 1;
        if tits(quiver, &cur) == 1 {
            out.push(DimVector::new(cur.clone()));
        }
    }
    out.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| b.cmp(a)));
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum VertexKind {
    Root,
    Shifted,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct RootVertex {
    pub kind: VertexKind,
    /// The root, or `p(v)` for a shifted projective.
    pub vector: DimVector,
    pub vertex: Option<usize>,
}

impl RootVertex {
    pub fn root(beta: DimVector) -> Self {
        RootVertex { kind: VertexKind::Root, vector: beta, vertex: None }
    }

    pub fn shifted(quiver: &Quiver, v: usize) -> Result<Self> {
        Ok(RootVertex { kind: VertexKind::Shifted, vector: quiver.proj_vector(v)?, vertex: Some(v) })
    }

    /// `beta` for roots, `-p(v)` for shifted projectives.
    pub fn lambda_vector(&self) -> DimVector {
        match self.kind {
            VertexKind::Root => self.vector.clone(),
            VertexKind::Shifted => -&self.vector,
        }
    }

    pub fn label(&self, quiver: &Quiver) -> String {
        match (self.kind, self.vertex) {
            (VertexKind::Shifted, Some(v)) => format!("p({})[1]", quiver.vertex_id(v)),
            _ => self.vector.to_string(),
        }
    }
}

pub fn complex_vertices(quiver: &Quiver) -> Result<Vec<RootVertex>> {
    let mut out: Vec<RootVertex> = positive_roots(quiver)?.into_iter().map(RootVertex::root).collect();
    for v in 0..quiver.n() {
        out.push(RootVertex::shifted(quiver, v)?);
    }
    Ok(out)
}

/// How ext between two roots is decided.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExtMode {
    /// Minimum over random pairs.
    Sampled { trials: usize },
    /// Exact ext between fixed representatives with trivial endomorphism ring.
    Certified,
}

/// Ext values between roots, memoized.
pub struct ExtOracle<F> {
    quiver: Arc<Quiver>,
    mode: ExtMode,
    reps: HashMap<DimVector, Representation<F>>,
    values: HashMap<(DimVector, DimVector), usize>,
}

impl<F: Field> ExtOracle<F> {
    pub fn new(quiver: &Arc<Quiver>, mode: ExtMode) -> Self {
        ExtOracle { quiver: quiver.clone(), mode, reps: HashMap::new(), values: HashMap::new() }
    }

    pub fn mode(&self) -> ExtMode {
        self.mode
    }

    fn representative<R: Rng + ?Sized>(&mut self, beta: &DimVector, rng: &mut R) -> Result<Representation<F>> {
        if let Some(m) = self.reps.get(beta) {
            return Ok(m.clone());
        }
        for _ in 0..CERTIFY_ATTEMPTS {
            let m = Representation::<F>::random(&self.quiver, beta.clone(), rng)?;
            if m.is_schur() {
                self.reps.insert(beta.clone(), m.clone());
                return Ok(m);
            }
        }
        Err(Error::InvariantViolation(format!("no representation of dimension {beta} with End = k found")))
    }

    pub fn ext<R: Rng + ?Sized>(&mut self, a: &DimVector, b: &DimVector, rng: &mut R) -> Result<usize> {
        let key = (a.clone(), b.clone());
        if let Some(&v) = self.values.get(&key) {
            return Ok(v);
        }
        let v = match self.mode {
            ExtMode::Sampled { trials } => generic_ext::<F, R>(&self.quiver, a, b, rng, trials)?,
            ExtMode::Certified => {
                let m = self.representative(a, rng)?;
                let n = self.representative(b, rng)?;
                ext_dim(&m, &n)?
            }
        };
        self.values.insert(key, v);
        Ok(v)
    }

    /// Compatibility of two distinct complex vertices.
    pub fn compatible<R: Rng + ?Sized>(&mut self, x: &RootVertex, y: &RootVertex, rng: &mut R) -> Result<bool> {
        match (x.kind, y.kind) {
            (VertexKind::Shifted, VertexKind::Shifted) => Ok(true),
            (VertexKind::Root, VertexKind::Shifted) => Ok(x.vector[y.vertex.expect("shifted vertex")] == 0),
            (VertexKind::Shifted, VertexKind::Root) => Ok(y.vector[x.vertex.expect("shifted vertex")] == 0),
            (VertexKind::Root, VertexKind::Root) => {
                Ok(self.ext(&x.vector, &y.vector, rng)? == 0 && self.ext(&y.vector, &x.vector, rng)? == 0)
            }
        }
    }
}

/// Compatibility of two distinct complex vertices using sampled generic ext.
pub fn compatible<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    x: &RootVertex,
    y: &RootVertex,
    rng: &mut R,
    trials: usize,
) -> Result<bool> {
    ExtOracle::<F>::new(quiver, ExtMode::Sampled { trials }).compatible(x, y, rng)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TiltingComplex {
    pub n: usize,
    pub vertices: Vec<RootVertex>,
    /// Sorted vertex index sets, in lexicographic order.
    pub facets: Vec<Vec<usize>>,
    pub compat: Vec<Vec<bool>>,
}

/// Sorted ridge -> indices of the facets containing it.
pub type RidgeMap = BTreeMap<Vec<usize>, Vec<usize>>;

impl TiltingComplex {
    pub fn lambda_vectors(&self) -> Vec<DimVector> {
        self.vertices.iter().map(RootVertex::lambda_vector).collect()
    }

    pub fn ridges(&self) -> RidgeMap {
        let mut out: RidgeMap = BTreeMap::new();
        for (fi, f) in self.facets.iter().enumerate() {
            for skip in 0..f.len() {
                let ridge: Vec<usize> = f.iter().enumerate().filter(|&(i, _)| i != skip).map(|(_, &v)| v).collect();
                out.entry(ridge).or_default().push(fi);
            }
        }
        out
    }

    /// Whether the vertex set lies in some facet.
    pub fn is_simplex(&self, vs: &[usize]) -> bool {
        self.facets.iter().any(|f| vs.iter().all(|v| f.binary_search(v).is_ok()))
    }

    /// Number of faces of each size, starting from size one.
    pub fn face_counts(&self) -> Vec<usize> {
        let mut seen: HashSet<Vec<usize>> = HashSet::new();
        let mut counts = vec![0usize; self.facets.iter().map(Vec::len).max().unwrap_or(0)];
        for f in &self.facets {
            let k = f.len();
            for mask in 1u64..(1u64 << k) {
                let face: Vec<usize> = (0..k).filter(|i| mask >> i & 1 == 1).map(|i| f[i]).collect();
                let size = face.len();
                if seen.insert(face) {
                    counts[size - 1] += 1;
                }
            }
        }
        counts
    }

    /// Vertex index of a positive root, or of the shifted projective at `v`.
    pub fn root_index(&self, beta: &DimVector) -> Option<usize> {
        self.vertices.iter().position(|x| x.kind == VertexKind::Root && &x.vector == beta)
    }

    pub fn shifted_index(&self, v: usize) -> Option<usize> {
        self.vertices.iter().position(|x| x.kind == VertexKind::Shifted && x.vertex == Some(v))
    }

    /// Adds compatibility edges implied by the facets (used after import).
    fn compat_from_facets(vertices: usize, facets: &[Vec<usize>]) -> Vec<Vec<bool>> {
        let mut compat = vec![vec![false; vertices]; vertices];
        for f in facets {
            for &a in f {
                for &b in f {
                    if a != b {
                        compat[a][b] = true;
                    }
                }
            }
        }
        compat
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
struct Bits(Vec<u64>);

impl Bits {
    fn empty(n: usize) -> Self {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }

    fn clear(&mut self, i: usize) {
        self.0[i / 64] &= !(1 << (i % 64));
    }

    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }

    fn and_not(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & !b).collect())
    }

    fn is_empty(&self) -> bool {
        self.0.iter().all(|&w| w == 0)
    }

    fn count(&self) -> u32 {
        self.0.iter().map(|w| w.count_ones()).sum()
    }

    fn ones(&self) -> Vec<usize> {
        let mut out = Vec::new();
        for (wi, &w) in self.0.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let b = w.trailing_zeros() as usize;
                out.push(wi * 64 + b);
                w &= w - 1;
            }
        }
        out
    }
}

/// All maximal cliques, each sorted, in lexicographic order.
pub fn maximal_cliques(compat: &[Vec<bool>]) -> Vec<Vec<usize>> {
    let n = compat.len();
    let nbrs: Vec<Bits> = (0..n)
        .map(|i| {
            let mut b = Bits::empty(n);
            for j in 0..n {
                if i != j && compat[i][j] {
                    b.set(j);
                }
            }
            b
        })
        .collect();
    let mut all = Bits::empty(n);
    for i in 0..n {
        all.set(i);
    }
    let mut out = Vec::new();
    let mut r = Vec::new();
    bron_kerbosch(&nbrs, &mut r, all, Bits::empty(n), &mut out);
    for c in &mut out {
        c.sort_unstable();
    }
    out.sort();
    out
}

fn bron_kerbosch(nbrs: &[Bits], r: &mut Vec<usize>, mut p: Bits, mut x: Bits, out: &mut Vec<Vec<usize>>) {
    if p.is_empty() {
        if x.is_empty() && !r.is_empty() {
            out.push(r.clone());
        }
        return;
    }
    let mut pivot = usize::MAX;
    let mut best = 0;
    let mut candidates = p.ones();
    candidates.extend(x.ones());
    candidates.sort_unstable();
    for &u in &candidates {
        let c = p.and(&nbrs[u]).count();
        if pivot == usize::MAX || c > best {
            pivot = u;
            best = c;
        }
    }
    for v in p.and_not(&nbrs[pivot]).ones() {
        r.push(v);
        bron_kerbosch(nbrs, r, p.and(&nbrs[v]), x.and(&nbrs[v]), out);
        r.pop();
        p.clear(v);
        x.set(v);
    }
}

fn int_rank(vectors: &[DimVector]) -> usize {
    bareiss::rank(vectors.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect())
}

fn build_with<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    vertices: Vec<RootVertex>,
    oracle: &mut ExtOracle<F>,
    rng: &mut R,
) -> Result<TiltingComplex> {
    let m = vertices.len();
    let mut compat = vec![vec![false; m]; m];
    for i in 0..m {
        for j in i + 1..m {
            let c = oracle.compatible(&vertices[i], &vertices[j], rng)?;
            compat[i][j] = c;
            compat[j][i] = c;
        }
    }
    let facets = maximal_cliques(&compat);
    Ok(TiltingComplex { n: quiver.n(), vertices, facets, compat })
}

/// Checks facet size `n` and linear independence of facet vectors.
pub fn check_invariants(c: &TiltingComplex) -> Result<()> {
    let lam = c.lambda_vectors();
    for f in &c.facets {
        if f.len() != c.n {
            return Err(Error::InvariantViolation(format!("facet {f:?} has {} vertices, expected {}", f.len(), c.n)));
        }
        let vs: Vec<DimVector> = f.iter().map(|&i| lam[i].clone()).collect();
        if int_rank(&vs) != c.n {
            return Err(Error::InvariantViolation(format!("facet {f:?} has linearly dependent vectors")));
        }
    }
    Ok(())
}

/// Builds the complex with the given ext oracle and checks its invariants.
pub fn build_complex_with<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    rng: &mut R,
    mode: ExtMode,
) -> Result<TiltingComplex> {
    let vertices = complex_vertices(quiver)?;
    let mut oracle = ExtOracle::<F>::new(quiver, mode);
    let c = build_with(quiver, vertices, &mut oracle, rng)?;
    check_invariants(&c)?;
    Ok(c)
}

/// Builds with sampled ext; an invariant violation triggers one rebuild with the certified oracle.
pub fn build_complex<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    rng: &mut R,
    trials: usize,
) -> Result<TiltingComplex> {
    match build_complex_with::<F, R>(quiver, rng, ExtMode::Sampled { trials }) {
        Err(Error::InvariantViolation(_)) => build_complex_with::<F, R>(quiver, rng, ExtMode::Certified),
        other => other,
    }
}

/// Non-Dynkin exploration: Schur roots with entries at most `depth`, plus shifted
/// projectives, with facets the maximal cliques. No invariants are checked.
pub fn truncated_complex<F: Field, R: Rng + ?Sized>(
    quiver: &Arc<Quiver>,
    depth: i64,
    rng: &mut R,
    trials: usize,
) -> Result<TiltingComplex> {
    let n = quiver.n();
    let mut roots = Vec::new();
    let mut cur = vec![0i64; n];
    loop {
        let mut i = 0;
        while i < n && cur[i] == depth {
            cur[i] = 0;
            i += 1;
        }
        if i == n || depth <= 0 {
            break;
        }
        cur[i] += 1;
        let a = DimVector::new(cur.clone());
        if is_schur_root::<F, R>(quiver, &a, rng, trials)? {
            roots.push(a);
        }
    }
    roots.sort_by(|a, b| a.total().cmp(&b.total()).then_with(|| b.cmp(a)));
    let mut vertices: Vec<RootVertex> = roots.into_iter().map(RootVertex::root).collect();
    for v in 0..n {
        vertices.push(RootVertex::shifted(quiver, v)?);
    }
    let mut oracle = ExtOracle::<F>::new(quiver, ExtMode::Sampled { trials });
    build_with(quiver, vertices, &mut oracle, rng)
}

fn combine<T: Clone + PartialOrd + Zero>(c: &TiltingComplex, coeffs: &[(usize, T)]) -> Result<Vec<(usize, T)>> {
    let mut acc: BTreeMap<usize, T> = BTreeMap::new();
    for (v, t) in coeffs {
        if *v >= c.vertices.len() {
            return Err(Error::NotASimplex(vec![*v]));
        }
        if *t < T::zero() {
            return Err(Error::NegativeCoefficient(*v));
        }
        let e = acc.entry(*v).or_insert_with(T::zero);
        *e = e.clone() + t.clone();
    }
    let support: Vec<(usize, T)> = acc.into_iter().filter(|(_, t)| !t.is_zero()).collect();
    if support.is_empty() {
        return Err(Error::ZeroCoefficients);
    }
    let vs: Vec<usize> = support.iter().map(|(v, _)| *v).collect();
    if !c.is_simplex(&vs) {
        return Err(Error::NotASimplex(vs));
    }
    Ok(support)
}

/// Unnormalized `sum t_j lambda_j` for nonnegative rational coefficients on a simplex.
pub fn lambda_ray(c: &TiltingComplex, coeffs: &[(usize, BigRational)]) -> Result<Vec<BigRational>> {
    let support = combine(c, coeffs)?;
    let mut out = vec![BigRational::zero(); c.n];
    for (v, t) in support {
        for (o, &x) in out.iter_mut().zip(c.vertices[v].lambda_vector().iter()) {
            *o += &t * BigRational::from_integer(BigInt::from(x));
        }
    }
    Ok(out)
}

/// The point of the unit sphere for nonnegative coefficients on a simplex.
pub fn lambda_point<T: Float>(c: &TiltingComplex, coeffs: &[(usize, T)]) -> Result<Vec<T>> {
    let support = combine(c, coeffs)?;
    let mut out = vec![T::zero(); c.n];
    for (v, t) in support {
        for (o, &x) in out.iter_mut().zip(c.vertices[v].lambda_vector().iter()) {
            *o = *o + t * T::from(x).expect("small integer");
        }
    }
    let norm = out.iter().fold(T::zero(), |s, &x| s + x * x).sqrt();
    Ok(out.into_iter().map(|x| x / norm).collect())
}

fn primitive(v: &DimVector) -> DimVector {
    let g = v.gcd();
    if g == 0 {
        return v.clone();
    }
    DimVector::new(v.iter().map(|x| x / g).collect())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SphereReport {
    pub n: usize,
    pub vertices: usize,
    pub facets: usize,
    pub ridges: usize,
    pub pure: bool,
    pub ridge_regular: bool,
    pub connected: bool,
    pub euler_characteristic: i64,
    pub expected_euler: i64,
    pub lambda_injective: bool,
    pub covering_samples: usize,
    pub covering_failures: Vec<String>,
}

impl SphereReport {
    pub fn failures(&self) -> Vec<String> {
        let mut out = Vec::new();
        if !self.pure {
            out.push("some facet does not have n vertices".to_string());
        }
        if !self.ridge_regular {
            out.push("some ridge is not in exactly two facets".to_string());
        }
        if !self.connected {
            out.push("facet adjacency graph is disconnected".to_string());
        }
        if self.euler_characteristic != self.expected_euler {
            out.push(format!("Euler characteristic {} != {}", self.euler_characteristic, self.expected_euler));
        }
        if !self.lambda_injective {
            out.push("two vertices have the same lambda direction".to_string());
        }
        out.extend(self.covering_failures.iter().map(|s| format!("covering: {s}")));
        out
    }

    pub fn passed(&self) -> bool {
        self.failures().is_empty()
    }
}

/// Combinatorial sphere checks plus the covering test with `samples` random points.
pub fn verify_sphere<F: Field, R: Rng + ?Sized>(
    c: &TiltingComplex,
    quiver: &Arc<Quiver>,
    rng: &mut R,
    samples: usize,
    opts: DecompositionOptions,
) -> Result<SphereReport> {
    let n = c.n;
    let pure = !c.facets.is_empty() && c.facets.iter().all(|f| f.len() == n);
    let ridges = c.ridges();
    let ridge_regular = ridges.values().all(|fs| fs.len() == 2);

    let mut adj = vec![Vec::new(); c.facets.len()];
    for fs in ridges.values() {
        for &a in fs {
            for &b in fs {
                if a != b {
                    adj[a].push(b);
                }
            }
        }
    }
    let mut seen = vec![false; c.facets.len()];
    let mut queue = VecDeque::new();
    if !c.facets.is_empty() {
        seen[0] = true;
        queue.push_back(0);
    }
    while let Some(f) = queue.pop_front() {
        for &g in &adj[f] {
            if !seen[g] {
                seen[g] = true;
                queue.push_back(g);
            }
        }
    }
    let connected = seen.iter().all(|&s| s);

    let euler_characteristic =
        c.face_counts().iter().enumerate().map(|(k, &cnt)| if k % 2 == 0 { cnt as i64 } else { -(cnt as i64) }).sum();
    let expected_euler = if n % 2 == 1 { 2 } else { 0 };

    let dirs: HashSet<DimVector> = c.lambda_vectors().iter().map(primitive).collect();
    let lambda_injective = dirs.len() == c.vertices.len();

    let mut covering_failures = Vec::new();
    for _ in 0..samples {
        let x = loop {
            let x = DimVector::new((0..n).map(|_| rng.gen_range(-COVERING_RADIUS..=COVERING_RADIUS)).collect());
            if !x.is_zero() {
                break x;
            }
        };
        if let Some(msg) = covering_failure::<F, R>(c, quiver, &x, rng, opts)? {
            covering_failures.push(msg);
        }
    }

    Ok(SphereReport {
        n,
        vertices: c.vertices.len(),
        facets: c.facets.len(),
        ridges: ridges.len(),
        pure,
        ridge_regular,
        connected,
        euler_characteristic,
        expected_euler,
        lambda_injective,
        covering_samples: samples,
        covering_failures,
    })
}

/// Support of the generic decomposition of `x` as vertex indices, with multiplicities.
pub fn decomposition_support<F: Field, R: Rng + ?Sized>(
    c: &TiltingComplex,
    quiver: &Arc<Quiver>,
    x: &DimVector,
    rng: &mut R,
    opts: DecompositionOptions,
) -> Result<std::result::Result<Vec<(usize, i64)>, String>> {
    let d = generic_decomposition::<F, R>(quiver, x, rng, opts)?;
    let mut support = Vec::new();
    for (beta, k) in d.distinct_parts() {
        match c.root_index(&beta) {
            Some(i) => support.push((i, k as i64)),
            None => return Ok(Err(format!("{x}: part {beta} is not a vertex"))),
        }
    }
    for (v, &g) in d.gamma.iter().enumerate() {
        if g > 0 {
            match c.shifted_index(v) {
                Some(i) => support.push((i, g)),
                None => return Ok(Err(format!("{x}: no shifted vertex at {v}"))),
            }
        }
    }
    support.sort_unstable();
    Ok(Ok(support))
}

fn covering_failure<F: Field, R: Rng + ?Sized>(
    c: &TiltingComplex,
    quiver: &Arc<Quiver>,
    x: &DimVector,
    rng: &mut R,
    opts: DecompositionOptions,
) -> Result<Option<String>> {
    let support = match decomposition_support::<F, R>(c, quiver, x, rng, opts) {
        Ok(Ok(s)) => s,
        Ok(Err(msg)) => return Ok(Some(msg)),
        Err(Error::DecompositionUnstable { .. }) => return Ok(Some(format!("{x}: decomposition unstable"))),
        Err(e) => return Err(e),
    };
    let vs: Vec<usize> = support.iter().map(|&(v, _)| v).collect();
    if !c.is_simplex(&vs) {
        return Ok(Some(format!("{x}: support {vs:?} is not a simplex")));
    }
    let mut acc = DimVector::zeros(c.n);
    for &(v, k) in &support {
        acc += &(k * &c.vertices[v].lambda_vector());
    }
    if &acc != x {
        return Ok(Some(format!("{x}: support recombines to {acc}")));
    }
    Ok(None)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Wall {
    pub ridge: Vec<usize>,
    pub labels: Vec<DimVector>,
}

/// Positive roots orthogonal (under the Euler form) to every lambda vector of each ridge.
pub fn wall_labels(c: &TiltingComplex, quiver: &Quiver) -> Result<Vec<Wall>> {
    let roots = positive_roots(quiver)?;
    let lam = c.lambda_vectors();
    let mut out = Vec::new();
    for ridge in c.ridges().into_keys() {
        let mut labels = Vec::new();
        for beta in &roots {
            let mut ok = true;
            for &v in &ridge {
                if quiver.euler_form(&lam[v], beta)? != 0 {
                    ok = false;
                    break;
                }
            }
            if ok {
                labels.push(beta.clone());
            }
        }
        if labels.is_empty() {
            return Err(Error::EmptyLabel(ridge));
        }
        out.push(Wall { ridge, labels });
    }
    Ok(out)
}

/// Exact membership of integer points in the cone over linearly independent integer vectors.
struct SimplicialCone {
    gens: Vec<DimVector>,
    rows: Vec<usize>,
    det: i128,
}

impl SimplicialCone {
    fn new(gens: Vec<DimVector>, n: usize) -> Option<Self> {
        let k = gens.len();
        // Pick k coordinates on which the generators are independent.
        let mut rows = Vec::new();
        for r in 0..n {
            let mut trial = rows.clone();
            trial.push(r);
            let m: Vec<Vec<i128>> = trial.iter().map(|&r| gens.iter().map(|g| g[r] as i128).collect()).collect();
            if bareiss::rank(m) == trial.len() {
                rows = trial;
            }
            if rows.len() == k {
                break;
            }
        }
        if rows.len() != k {
            return None;
        }
        let det = bareiss::det(Self::sub(&gens, &rows, None));
        Some(SimplicialCone { gens, rows, det })
    }

    fn sub(gens: &[DimVector], rows: &[usize], replace: Option<(usize, &DimVector)>) -> Vec<Vec<i128>> {
        rows.iter()
            .map(|&r| {
                (0..gens.len())
                    .map(|j| match replace {
                        Some((c, x)) if c == j => x[r] as i128,
                        _ => gens[j][r] as i128,
                    })
                    .collect()
            })
            .collect()
    }

    /// `Some(integral)` when `x` lies in the cone, where `integral` says the
    /// coefficients are integers.
    fn locate(&self, x: &DimVector) -> Option<bool> {
        let nums: Vec<i128> =
            (0..self.gens.len()).map(|j| bareiss::det(Self::sub(&self.gens, &self.rows, Some((j, x))))).collect();
        if nums.iter().any(|&t| t * self.det.signum() < 0) {
            return None;
        }
        for (r, &xr) in x.iter().enumerate() {
            let s: i128 = self.gens.iter().zip(&nums).map(|(g, t)| g[r] as i128 * t).sum();
            if s != xr as i128 * self.det {
                return None;
            }
        }
        Some(nums.iter().all(|t| t % self.det == 0))
    }
}

/// Comparison of one support cone `D(beta)` with the cones over its labeled ridges.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WallCheck {
    pub beta: DimVector,
    pub labeled_ridges: usize,
    pub grid_points: usize,
    /// Grid points of `D(beta)` outside every labeled ridge cone.
    pub uncovered: Vec<DimVector>,
    /// Covered points whose coefficients are not integers.
    pub non_integral: Vec<DimVector>,
    /// Labeled ridges with a vertex outside `D(beta)`.
    pub ridges_outside: Vec<Vec<usize>>,
}

impl WallCheck {
    pub fn passed(&self) -> bool {
        self.labeled_ridges > 0 && self.uncovered.is_empty() && self.non_integral.is_empty() && self.ridges_outside.is_empty()
    }
}

fn grid(n: usize, radius: i64) -> Vec<DimVector> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|p: Vec<i64>| {
                (-radius..=radius).map(move |x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    out.into_iter().map(DimVector::new).collect()
}

/// For every positive root, compares the grid points of `D(beta)` in radius
/// `radius` with the union of cones over ridges labeled `beta`.
pub fn verify_walls<F: Field, R: Rng + ?Sized>(
    c: &TiltingComplex,
    quiver: &Arc<Quiver>,
    walls: &[Wall],
    rng: &mut R,
    trials: usize,
    radius: i64,
) -> Result<Vec<WallCheck>> {
    let lam = c.lambda_vectors();
    let points = grid(c.n, radius);
    let mut out = Vec::new();
    for beta in positive_roots(quiver)? {
        let hs = d_beta_halfspaces::<F, R>(quiver, &beta, rng, trials)?;
        let labeled: Vec<&Wall> = walls.iter().filter(|w| w.labels.contains(&beta)).collect();
        let mut cones = Vec::new();
        let mut ridges_outside = Vec::new();
        for w in &labeled {
            if w.ridge.iter().any(|&v| !hs.contains(&lam[v])) {
                ridges_outside.push(w.ridge.clone());
            }
            let gens: Vec<DimVector> = w.ridge.iter().map(|&v| lam[v].clone()).collect();
            match SimplicialCone::new(gens, c.n) {
                Some(cone) => cones.push(cone),
                None => {
                    return Err(Error::InvariantViolation(format!("ridge {:?} has dependent vectors", w.ridge)));
                }
            }
        }
        let mut grid_points = 0;
        let mut uncovered = Vec::new();
        let mut non_integral = Vec::new();
        for x in points.iter().filter(|x| hs.contains(x)) {
            grid_points += 1;
            let hits: Vec<bool> = cones.iter().filter_map(|cone| cone.locate(x)).collect();
            if hits.is_empty() {
                uncovered.push(x.clone());
            } else if !hits.iter().any(|&b| b) {
                non_integral.push(x.clone());
            }
        }
        out.push(WallCheck { beta, labeled_ridges: labeled.len(), grid_points, uncovered, non_integral, ridges_outside });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ExportFormat {
    Json,
    Obj,
    Svg,
}

impl std::str::FromStr for ExportFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "json" => Ok(ExportFormat::Json),
            "obj" => Ok(ExportFormat::Obj),
            "svg" => Ok(ExportFormat::Svg),
            other => Err(Error::Parse(format!("unknown export format {other:?}"))),
        }
    }
}

pub fn complex_to_json(c: &TiltingComplex, quiver: &Quiver, walls: Option<&[Wall]>) -> Value {
    let vertices: Vec<Value> = c
        .vertices
        .iter()
        .map(|v| {
            json!({
                "kind": v.kind,
                "vector": v.vector,
                "vertex": v.vertex.map(|i| quiver.vertex_id(i).to_string()),
            })
        })
        .collect();
    let mut out = json!({
        "schema": 1,
        "n": c.n,
        "vertices": vertices,
        "facets": c.facets,
    });
    if let Some(walls) = walls {
        out["walls"] = json!(walls.iter().map(|w| json!({"ridge": w.ridge, "labels": w.labels})).collect::<Vec<_>>());
    }
    out
}

pub fn complex_from_json(quiver: &Quiver, value: &Value) -> Result<TiltingComplex> {
    #[derive(Deserialize)]
    struct VertexJson {
        kind: VertexKind,
        vector: DimVector,
        vertex: Option<String>,
    }
    #[derive(Deserialize)]
    struct ComplexJson {
        vertices: Vec<VertexJson>,
        facets: Vec<Vec<usize>>,
    }
    let j: ComplexJson = serde_json::from_value(value.clone()).map_err(|e| Error::Parse(e.to_string()))?;
    let mut vertices = Vec::with_capacity(j.vertices.len());
    for v in j.vertices {
        quiver.check_len(&v.vector)?;
        let vertex = v.vertex.map(|id| quiver.vertex_index(&id)).transpose()?;
        vertices.push(RootVertex { kind: v.kind, vector: v.vector, vertex });
    }
    let mut facets = j.facets;
    for f in &mut facets {
        f.sort_unstable();
        if let Some(&bad) = f.iter().find(|&&i| i >= vertices.len()) {
            return Err(Error::Parse(format!("facet refers to vertex {bad}")));
        }
    }
    facets.sort();
    let compat = TiltingComplex::compat_from_facets(vertices.len(), &facets);
    Ok(TiltingComplex { n: quiver.n(), vertices, facets, compat })
}

fn unit_coords(v: &DimVector) -> Vec<f64> {
    let norm = v.iter().map(|&x| (x * x) as f64).sum::<f64>().sqrt();
    v.iter().map(|&x| x as f64 / norm).collect()
}

pub fn export_complex(c: &TiltingComplex, quiver: &Quiver, format: ExportFormat) -> Result<String> {
    match format {
        ExportFormat::Json => {
            let walls = wall_labels(c, quiver).ok();
            Ok(serde_json::to_string_pretty(&complex_to_json(c, quiver, walls.as_deref())).expect("serializable"))
        }
        ExportFormat::Obj => {
            if c.n != 2 && c.n != 3 {
                return Err(Error::UnsupportedDimension(c.n));
            }
            let mut s = String::new();
            for v in &c.vertices {
                let mut p = unit_coords(&v.lambda_vector());
                p.resize(3, 0.0);
                writeln!(s, "v {:.12} {:.12} {:.12}", p[0], p[1], p[2]).expect("write to string");
            }
            let tag = if c.n == 3 { "f" } else { "l" };
            for f in &c.facets {
                let idx: Vec<String> = f.iter().map(|i| (i + 1).to_string()).collect();
                writeln!(s, "{tag} {}", idx.join(" ")).expect("write to string");
            }
            Ok(s)
        }
        ExportFormat::Svg => {
            if c.n != 2 {
                return Err(Error::UnsupportedDimension(c.n));
            }
            let pts: Vec<(f64, f64)> = c
                .vertices
                .iter()
                .map(|v| {
                    let p = unit_coords(&v.lambda_vector());
                    (150.0 + 100.0 * p[0], 150.0 - 100.0 * p[1])
                })
                .collect();
            let mut order: Vec<usize> = (0..pts.len()).collect();
            order.sort_by(|&a, &b| {
                let ta = (150.0 - pts[a].1).atan2(pts[a].0 - 150.0);
                let tb = (150.0 - pts[b].1).atan2(pts[b].0 - 150.0);
                ta.total_cmp(&tb)
            });
            let poly: Vec<String> = order.iter().map(|&i| format!("{:.3},{:.3}", pts[i].0, pts[i].1)).collect();
            let mut s = String::new();
            writeln!(s, r#"<svg xmlns="http://www.w3.org/2000/svg" width="300" height="300" viewBox="0 0 300 300">"#)
                .expect("write to string");
            writeln!(s, r##"  <circle cx="150" cy="150" r="100" fill="none" stroke="#ccc"/>"##).expect("write to string");
            writeln!(s, r#"  <polygon points="{}" fill="none" stroke="black"/>"#, poly.join(" ")).expect("write to string");
            for (i, v) in c.vertices.iter().enumerate() {
                let (x, y) = pts[i];
                writeln!(s, r#"  <circle cx="{x:.3}" cy="{y:.3}" r="3"/>"#).expect("write to string");
                writeln!(s, r#"  <text x="{:.3}" y="{:.3}" font-size="10">{}</text>"#, x + 5.0, y - 5.0, v.label(quiver))
                    .expect("write to string");
            }
            s.push_str("</svg>\n");
            Ok(s)
        }
    }
}
