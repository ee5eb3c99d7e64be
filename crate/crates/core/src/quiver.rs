//! Quivers, dimension vectors, the Euler matrix and path enumeration.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, AddAssign, Index, Mul, Neg, Sub};
use std::str::FromStr;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Integer vector indexed by the vertices of a quiver in canonical order.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DimVector(Vec<i64>);

impl DimVector {
    pub fn new(entries: Vec<i64>) -> Self {
        DimVector(entries)
    }

    pub fn zeros(n: usize) -> Self {
        DimVector(vec![0; n])
    }

    pub fn unit(n: usize, v: usize) -> Self {
        let mut e = vec![0; n];
        e[v] = 1;
        DimVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn entries(&self) -> &[i64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<i64> {
        self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = &i64> {
        self.0.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&x| x == 0)
    }

    pub fn is_nonneg(&self) -> bool {
        self.0.iter().all(|&x| x >= 0)
    }

    /// Vertices with nonzero entry.
    pub fn support(&self) -> Vec<usize> {
        self.0.iter().enumerate().filter(|(_, &x)| x != 0).map(|(i, _)| i).collect()
    }

    pub fn disjoint_support(&self, other: &DimVector) -> bool {
        self.0.iter().zip(&other.0).all(|(&a, &b)| a == 0 || b == 0)
    }

    /// Componentwise `self <= other`.
    pub fn le(&self, other: &DimVector) -> bool {
        self.0.iter().zip(&other.0).all(|(a, b)| a <= b)
    }

    pub fn positive_part(&self) -> DimVector {
        DimVector(self.0.iter().map(|&x| x.max(0)).collect())
    }

    pub fn negative_part(&self) -> DimVector {
        DimVector(self.0.iter().map(|&x| (-x).max(0)).collect())
    }

    pub fn min(&self, other: &DimVector) -> DimVector {
        DimVector(self.0.iter().zip(&other.0).map(|(&a, &b)| a.min(b)).collect())
    }

    pub fn dot(&self, other: &DimVector) -> i64 {
        self.0
            .iter()
            .zip(&other.0)
            .fold(0i64, |acc, (&a, &b)| checked_add(acc, checked_mul(a, b)))
    }

    pub fn total(&self) -> i64 {
        self.0.iter().sum()
    }

    pub fn gcd(&self) -> i64 {
        self.0.iter().fold(0i64, |g, &x| num_integer::gcd(g, x))
    }

    /// Parse `"1,2,-3"` (whitespace and surrounding parentheses tolerated).
    pub fn parse(s: &str) -> Result<Self> {
        let s = s.trim().trim_start_matches(['(', '[']).trim_end_matches([')', ']']);
        if s.trim().is_empty() {
            return Ok(DimVector(Vec::new()));
        }
        s.split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|e| Error::Parse(format!("bad vector entry {t:?}: {e}")))
            })
            .collect::<Result<Vec<_>>>()
            .map(DimVector)
    }
}

impl FromStr for DimVector {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        DimVector::parse(s)
    }
}

impl fmt::Debug for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for DimVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Index<usize> for DimVector {
    type Output = i64;
    fn index(&self, i: usize) -> &i64 {
        &self.0[i]
    }
}

impl From<Vec<i64>> for DimVector {
    fn from(v: Vec<i64>) -> Self {
        DimVector(v)
    }
}

impl<const N: usize> From<[i64; N]> for DimVector {
    fn from(v: [i64; N]) -> Self {
        DimVector(v.to_vec())
    }
}

impl Add for &DimVector {
    type Output = DimVector;
    fn add(self, rhs: &DimVector) -> DimVector {
        assert_eq!(self.len(), rhs.len(), "dimension vector length mismatch");
        DimVector(self.0.iter().zip(&rhs.0).map(|(&a, &b)| checked_add(a, b)).collect())
    }
}

impl Add for DimVector {
    type Output = DimVector;
    fn add(self, rhs: DimVector) -> DimVector {
        &self + &rhs
    }
}

impl AddAssign<&DimVector> for DimVector {
    fn add_assign(&mut self, rhs: &DimVector) {
        *self = &*self + rhs;
    }
}

impl Sub for &DimVector {
    type Output = DimVector;
    fn sub(self, rhs: &DimVector) -> DimVector {
        assert_eq!(self.len(), rhs.len(), "dimension vector length mismatch");
        DimVector(self.0.iter().zip(&rhs.0).map(|(&a, &b)| checked_add(a, -b)).collect())
    }
}

impl Sub for DimVector {
    type Output = DimVector;
    fn sub(self, rhs: DimVector) -> DimVector {
        &self - &rhs
    }
}

impl Neg for &DimVector {
    type Output = DimVector;
    fn neg(self) -> DimVector {
        DimVector(self.0.iter().map(|&a| -a).collect())
    }
}

impl Neg for DimVector {
    type Output = DimVector;
    fn neg(self) -> DimVector {
        -&self
    }
}

impl Mul<&DimVector> for i64 {
    type Output = DimVector;
    fn mul(self, rhs: &DimVector) -> DimVector {
        DimVector(rhs.0.iter().map(|&a| checked_mul(self, a)).collect())
    }
}

pub(crate) fn checked_add(a: i64, b: i64) -> i64 {
    a.checked_add(b).expect("integer overflow in exact arithmetic")
}

pub(crate) fn checked_mul(a: i64, b: i64) -> i64 {
    a.checked_mul(b).expect("integer overflow in exact arithmetic")
}

/// Square or rectangular integer matrix, rows indexed by canonical vertex order.
#[derive(Clone, PartialEq, Eq, Debug, Serialize, Deserialize)]
#[serde(transparent)]
pub struct IntMatrix(Vec<Vec<i64>>);

impl IntMatrix {
    pub fn new(rows: Vec<Vec<i64>>) -> Self {
        IntMatrix(rows)
    }

    pub fn identity(n: usize) -> Self {
        IntMatrix((0..n).map(|i| (0..n).map(|j| i64::from(i == j)).collect()).collect())
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.0
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.0[r][c]
    }

    pub fn transpose(&self) -> IntMatrix {
        let n = self.0.len();
        let m = self.0.first().map_or(0, |r| r.len());
        IntMatrix((0..m).map(|c| (0..n).map(|r| self.0[r][c]).collect()).collect())
    }

    pub fn mul(&self, rhs: &IntMatrix) -> IntMatrix {
        let inner = rhs.0.len();
        let cols = rhs.0.first().map_or(0, |r| r.len());
        IntMatrix(
            self.0
                .iter()
                .map(|row| {
                    assert_eq!(row.len(), inner, "integer matrix shape mismatch");
                    (0..cols)
                        .map(|c| (0..inner).fold(0, |acc, k| checked_add(acc, checked_mul(row[k], rhs.0[k][c]))))
                        .collect()
                })
                .collect(),
        )
    }

    pub fn mul_vec(&self, v: &DimVector) -> DimVector {
        DimVector(
            self.0
                .iter()
                .map(|row| {
                    assert_eq!(row.len(), v.len(), "integer matrix shape mismatch");
                    row.iter().zip(v.iter()).fold(0, |acc, (&a, &b)| checked_add(acc, checked_mul(a, b)))
                })
                .collect(),
        )
    }

    pub fn column(&self, c: usize) -> DimVector {
        DimVector(self.0.iter().map(|r| r[c]).collect())
    }

    pub fn scale(&self, s: i64) -> IntMatrix {
        IntMatrix(self.0.iter().map(|r| r.iter().map(|&x| checked_mul(s, x)).collect()).collect())
    }

    pub fn add(&self, rhs: &IntMatrix) -> IntMatrix {
        IntMatrix(
            self.0
                .iter()
                .zip(&rhs.0)
                .map(|(a, b)| a.iter().zip(b).map(|(&x, &y)| checked_add(x, y)).collect())
                .collect(),
        )
    }
}

impl fmt::Display for IntMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let width = self
            .0
            .iter()
            .flatten()
            .map(|x| x.to_string().len())
            .max()
            .unwrap_or(1);
        for row in &self.0 {
            write!(f, "[")?;
            for (i, x) in row.iter().enumerate() {
                if i > 0 {
                    write!(f, " ")?;
                }
                write!(f, "{x:>width$}")?;
            }
            writeln!(f, "]")?;
        }
        Ok(())
    }
}

/// Euler matrix with its two inverses.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EulerData {
    pub e: IntMatrix,
    pub e_inv: IntMatrix,
    pub et_inv: IntMatrix,
}

/// A directed path, stored as its arrows in traversal order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    pub tail: usize,
    pub head: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.arrows.is_empty()
    }
}

#[derive(Debug)]
struct PathTable {
    paths: Vec<Path>,
    by_pair: Vec<Vec<Vec<usize>>>,
    lookup: HashMap<(usize, Vec<usize>), usize>,
}

/// Finite acyclic quiver with vertices stored in a fixed topological order.
#[derive(Debug)]
pub struct Quiver {
    ids: Vec<String>,
    arrows: Vec<(usize, usize)>,
    paths: OnceLock<PathTable>,
    euler: OnceLock<EulerData>,
}

impl Clone for Quiver {
    fn clone(&self) -> Self {
        Quiver { ids: self.ids.clone(), arrows: self.arrows.clone(), paths: OnceLock::new(), euler: OnceLock::new() }
    }
}

impl PartialEq for Quiver {
    fn eq(&self, other: &Self) -> bool {
        self.ids == other.ids && self.arrows == other.arrows
    }
}

impl Eq for Quiver {}

#[derive(Deserialize, Serialize)]
struct QuiverJson {
    vertices: Vec<String>,
    arrows: Vec<(String, String)>,
}

impl Quiver {
    /// Validates and orders a quiver given vertex identifiers and arrows `(tail, head)`.
    ///
    /// Vertices are ordered topologically; among vertices that are ready at the same
    /// time the one listed first in `vertices` wins.
    pub fn new(vertices: Vec<String>, arrows: Vec<(String, String)>) -> Result<Quiver> {
        let mut position = HashMap::new();
        for (i, v) in vertices.iter().enumerate() {
            if position.insert(v.clone(), i).is_some() {
                return Err(Error::Parse(format!("duplicate vertex {v:?}")));
            }
        }
        let lookup = |v: &String| position.get(v).copied().ok_or_else(|| Error::UnknownVertex(v.clone()));
        let raw: Vec<(usize, usize)> = arrows
            .iter()
            .map(|(t, h)| Ok((lookup(t)?, lookup(h)?)))
            .collect::<Result<_>>()?;

        let n = vertices.len();
        let mut indeg = vec![0usize; n];
        for &(_, h) in &raw {
            indeg[h] += 1;
        }
        let mut order = Vec::with_capacity(n);
        let mut done = vec![false; n];
        while order.len() < n {
            let Some(next) = (0..n).find(|&v| !done[v] && indeg[v] == 0) else {
                let stuck = (0..n).find(|&v| !done[v]).unwrap();
                return Err(Error::OrientedCycle(vertices[stuck].clone()));
            };
            done[next] = true;
            order.push(next);
            for &(t, h) in &raw {
                if t == next {
                    indeg[h] -= 1;
                }
            }
        }
        let mut rank = vec![0; n];
        for (r, &v) in order.iter().enumerate() {
            rank[v] = r;
        }
        Ok(Quiver {
            ids: order.iter().map(|&v| vertices[v].clone()).collect(),
            arrows: raw.iter().map(|&(t, h)| (rank[t], rank[h])).collect(),
            paths: OnceLock::new(),
            euler: OnceLock::new(),
        })
    }

    /// Vertices named `"1".."n"`, arrows given as 1-based `(tail, head)` pairs.
    pub fn from_edges(n: usize, arrows: &[(usize, usize)]) -> Result<Quiver> {
        let ids = (1..=n).map(|i| i.to_string()).collect();
        let arrows = arrows.iter().map(|&(t, h)| (t.to_string(), h.to_string())).collect();
        Quiver::new(ids, arrows)
    }

    /// The running example `1 -> 2 => 3` (one arrow 1->2, two arrows 2->3).
    pub fn example() -> Quiver {
        Quiver::from_edges(3, &[(1, 2), (2, 3), (2, 3)]).expect("valid example quiver")
    }

    /// Linearly oriented `A_n`: `1 -> 2 -> ... -> n`.
    pub fn a_n(n: usize) -> Quiver {
        let arrows: Vec<_> = (1..n).map(|i| (i, i + 1)).collect();
        Quiver::from_edges(n, &arrows).expect("valid A_n")
    }

    /// `D_n` (n >= 4) with the branch at vertex n-2: `1 -> 2 -> ... -> n-2 -> n-1`, `n-2 -> n`.
    pub fn d_n(n: usize) -> Quiver {
        assert!(n >= 4, "D_n needs n >= 4");
        let mut arrows: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
        arrows.push((n - 2, n));
        Quiver::from_edges(n, &arrows).expect("valid D_n")
    }

    /// `E_n` (n in 6..=8): chain `1 -> ... -> n-1` with `n` attached at vertex 3.
    pub fn e_n(n: usize) -> Quiver {
        assert!((6..=8).contains(&n), "E_n needs 6 <= n <= 8");
        let mut arrows: Vec<_> = (1..n - 1).map(|i| (i, i + 1)).collect();
        arrows.push((3, n));
        Quiver::from_edges(n, &arrows).expect("valid E_n")
    }

    /// Built-in quivers by name: `example`, `A<n>`, `D<n>`, `E6`..`E8`.
    pub fn builtin(name: &str) -> Option<Quiver> {
        let name = name.trim();
        if name.eq_ignore_ascii_case("example") {
            return Some(Quiver::example());
        }
        let (kind, rest) = name.split_at(1);
        let n: usize = rest.parse().ok()?;
        match kind {
            "A" | "a" if n >= 1 => Some(Quiver::a_n(n)),
            "D" | "d" if n >= 4 => Some(Quiver::d_n(n)),
            "E" | "e" if (6..=8).contains(&n) => Some(Quiver::e_n(n)),
            _ => None,
        }
    }

    /// Parses the JSON format, or the line format `u -> v` (one arrow per line).
    ///
    /// In the line format a line holding a single token declares an isolated vertex;
    /// blank lines and lines starting with `#` are skipped.
    pub fn parse(text: &str) -> Result<Quiver> {
        if text.trim_start().starts_with('{') {
            let j: QuiverJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
            return Quiver::new(j.vertices, j.arrows);
        }
        let mut vertices: Vec<String> = Vec::new();
        let mut arrows = Vec::new();
        let note = |v: &str, vertices: &mut Vec<String>| {
            if !vertices.iter().any(|x| x == v) {
                vertices.push(v.to_string());
            }
        };
        for (lineno, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            match line.split_once("->") {
                Some((t, h)) => {
                    let (t, h) = (t.trim(), h.trim());
                    if t.is_empty() || h.is_empty() || h.contains("->") {
                        return Err(Error::Parse(format!("line {}: malformed arrow {line:?}", lineno + 1)));
                    }
                    note(t, &mut vertices);
                    note(h, &mut vertices);
                    arrows.push((t.to_string(), h.to_string()));
                }
                None if !line.contains(char::is_whitespace) => note(line, &mut vertices),
                None => return Err(Error::Parse(format!("line {}: expected `u -> v`", lineno + 1))),
            }
        }
        Quiver::new(vertices, arrows)
    }

    pub fn to_json(&self) -> String {
        let j = QuiverJson {
            vertices: self.ids.clone(),
            arrows: self.arrows.iter().map(|&(t, h)| (self.ids[t].clone(), self.ids[h].clone())).collect(),
        };
        serde_json::to_string(&j).expect("serializable")
    }

    pub fn n(&self) -> usize {
        self.ids.len()
    }

    pub fn vertex_ids(&self) -> &[String] {
        &self.ids
    }

    pub fn vertex_id(&self, v: usize) -> &str {
        &self.ids[v]
    }

    pub fn vertex_index(&self, id: &str) -> Result<usize> {
        self.ids
            .iter()
            .position(|x| x == id)
            .ok_or_else(|| Error::UnknownVertex(id.to_string()))
    }

    /// Arrows as `(tail, head)` in canonical vertex indices, in input order.
    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn check_len(&self, a: &DimVector) -> Result<()> {
        if a.len() != self.n() {
            return Err(Error::DimensionMismatch { expected: self.n(), got: a.len() });
        }
        Ok(())
    }

    /// Euler matrix `E` and the inverses `E^-1`, `(E^t)^-1`.
    pub fn euler(&self) -> &EulerData {
        self.euler.get_or_init(|| {
            let n = self.n();
            let mut e = vec![vec![0i64; n]; n];
            for (i, row) in e.iter_mut().enumerate() {
                row[i] = 1;
            }
            for &(t, h) in &self.arrows {
                e[t][h] -= 1;
            }
            // Back substitution for the upper unitriangular inverse.
            let mut inv = vec![vec![0i64; n]; n];
            for c in 0..n {
                for r in (0..=c).rev() {
                    let mut s = i64::from(r == c);
                    for k in r + 1..=c {
                        s = checked_add(s, -checked_mul(e[r][k], inv[k][c]));
                    }
                    inv[r][c] = s;
                }
            }
            let e = IntMatrix(e);
            let e_inv = IntMatrix(inv);
            assert_eq!(e.mul(&e_inv), IntMatrix::identity(n), "Euler matrix inverse check failed");
            let et_inv = e_inv.transpose();
            EulerData { e, e_inv, et_inv }
        })
    }

    /// `<a, b> = a^t E b`.
    pub fn euler_form(&self, a: &DimVector, b: &DimVector) -> Result<i64> {
        self.check_len(a)?;
        self.check_len(b)?;
        Ok(a.dot(&self.euler().e.mul_vec(b)))
    }

    pub fn tits_form(&self, a: &DimVector) -> Result<i64> {
        self.euler_form(a, a)
    }

    /// `E^t a`: coordinates of `a` in the basis of projective dimension vectors.
    pub fn et_apply(&self, a: &DimVector) -> DimVector {
        self.euler().e.transpose().mul_vec(a)
    }

    /// `(E^t)^-1 g`, i.e. `dim P(g)` for `g >= 0`.
    pub fn et_inv_apply(&self, g: &DimVector) -> DimVector {
        self.euler().et_inv.mul_vec(g)
    }

    /// `E a` (so that `<x, a> = x . (E a)`).
    pub fn e_apply(&self, a: &DimVector) -> DimVector {
        self.euler().e.mul_vec(a)
    }

    pub fn proj_vector(&self, v: usize) -> Result<DimVector> {
        if v >= self.n() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(self.euler().et_inv.column(v))
    }

    pub fn inj_vector(&self, v: usize) -> Result<DimVector> {
        if v >= self.n() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(self.euler().e_inv.column(v))
    }

    /// Coxeter transformation `-E^-1 E^t` on dimension vectors.
    pub fn tau(&self, a: &DimVector) -> Result<DimVector> {
        self.check_len(a)?;
        let eu = self.euler();
        Ok(-eu.e_inv.mul_vec(&eu.e.transpose().mul_vec(a)))
    }

    /// Inverse Coxeter transformation `-(E^t)^-1 E`.
    pub fn tau_inverse(&self, a: &DimVector) -> Result<DimVector> {
        self.check_len(a)?;
        let eu = self.euler();
        Ok(-eu.et_inv.mul_vec(&eu.e.mul_vec(a)))
    }

    /// Symmetrized Euler form `E + E^t`.
    pub fn symmetric_form(&self) -> IntMatrix {
        let e = &self.euler().e;
        e.add(&e.transpose())
    }

    fn path_table(&self) -> &PathTable {
        self.paths.get_or_init(|| {
            let n = self.n();
            let mut out_arrows = vec![Vec::new(); n];
            for (i, &(t, _)) in self.arrows.iter().enumerate() {
                out_arrows[t].push(i);
            }
            let mut paths = Vec::new();
            let mut by_pair = vec![vec![Vec::new(); n]; n];
            let mut lookup = HashMap::new();
            for u in 0..n {
                // DFS from u; paths discovered in arrow-index order.
                let mut stack: Vec<(usize, Vec<usize>)> = vec![(u, Vec::new())];
                let mut found: Vec<(usize, Vec<usize>)> = Vec::new();
                while let Some((at, arrows)) = stack.pop() {
                    found.push((at, arrows.clone()));
                    for &a in out_arrows[at].iter().rev() {
                        let mut next = arrows.clone();
                        next.push(a);
                        stack.push((self.arrows[a].1, next));
                    }
                }
                for (head, arrows) in found {
                    let id = paths.len();
                    lookup.insert((u, arrows.clone()), id);
                    by_pair[u][head].push(id);
                    paths.push(Path { tail: u, head, arrows });
                }
            }
            PathTable { paths, by_pair, lookup }
        })
    }

    /// All paths of the quiver, indexed by global path id.
    pub fn all_paths(&self) -> &[Path] {
        &self.path_table().paths
    }

    pub fn path(&self, id: usize) -> &Path {
        &self.path_table().paths[id]
    }

    /// Global ids of the paths `u -> v`, the constant path first when `u == v`.
    pub fn path_ids(&self, u: usize, v: usize) -> &[usize] {
        &self.path_table().by_pair[u][v]
    }

    /// All directed paths `u -> v` as arrow sequences.
    pub fn paths_between(&self, u: usize, v: usize) -> Result<Vec<Vec<usize>>> {
        if u >= self.n() {
            return Err(Error::UnknownVertex(u.to_string()));
        }
        if v >= self.n() {
            return Err(Error::UnknownVertex(v.to_string()));
        }
        Ok(self.path_ids(u, v).iter().map(|&id| self.path(id).arrows.clone()).collect())
    }

    /// Id of the constant path at `v`.
    pub fn constant_path(&self, v: usize) -> usize {
        self.path_table().lookup[&(v, Vec::new())]
    }

    /// Id of the length-one path along arrow `a`.
    pub fn arrow_path(&self, a: usize) -> usize {
        let t = self.arrows[a].0;
        self.path_table().lookup[&(t, vec![a])]
    }

    /// Position of a path within `path_ids(tail, head)`.
    pub fn path_local_index(&self, id: usize) -> usize {
        let p = self.path(id);
        self.path_ids(p.tail, p.head).iter().position(|&x| x == id).expect("path registered")
    }

    /// Id of the concatenation "first `p`, then `q`".
    pub fn concat(&self, p: usize, q: usize) -> usize {
        let (pp, qq) = (self.path(p), self.path(q));
        assert_eq!(pp.head, qq.tail, "paths do not compose");
        let mut arrows = pp.arrows.clone();
        arrows.extend_from_slice(&qq.arrows);
        self.path_table().lookup[&(pp.tail, arrows)]
    }
}

impl fmt::Display for Quiver {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Quiver(n={}; ", self.n())?;
        for (i, &(t, h)) in self.arrows.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{}->{}", self.ids[t], self.ids[h])?;
        }
        write!(f, ")")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn dv(v: &[i64]) -> DimVector {
        DimVector::new(v.to_vec())
    }

    #[test]
    fn example_quiver_loads() {
        let q = Quiver::example();
        assert_eq!(q.n(), 3);
        assert_eq!(q.vertex_ids(), ["1", "2", "3"]);
        let from_lines = Quiver::parse("1 -> 2\n2 -> 3\n2 -> 3\n").unwrap();
        assert_eq!(from_lines, q);
        let from_json = Quiver::parse(r#"{"vertices": ["1","2","3"], "arrows": [["1","2"],["2","3"],["2","3"]]}"#).unwrap();
        assert_eq!(from_json, q);
        assert_eq!(Quiver::parse(&q.to_json()).unwrap(), q);
    }

    #[test]
    fn single_vertex_and_cycles() {
        let q = Quiver::parse(r#"{"vertices": ["x"], "arrows": []}"#).unwrap();
        assert_eq!(q.n(), 1);
        assert_eq!(q.euler().e, IntMatrix::identity(1));
        assert!(matches!(Quiver::parse("1 -> 2\n2 -> 1"), Err(Error::OrientedCycle(_))));
        assert!(matches!(Quiver::parse("1 -> 1"), Err(Error::OrientedCycle(_))));
        assert!(matches!(
            Quiver::parse(r#"{"vertices": ["1"], "arrows": [["1","2"]]}"#),
            Err(Error::UnknownVertex(_))
        ));
        assert!(matches!(Quiver::parse("1 -> "), Err(Error::Parse(_))));
        assert!(matches!(Quiver::parse("{not json"), Err(Error::Parse(_))));
    }

    #[test]
    fn topological_order_ties_follow_input() {
        let q = Quiver::parse("b -> a\nc -> a").unwrap();
        assert_eq!(q.vertex_ids(), ["b", "c", "a"]);
        for &(t, h) in q.arrows() {
            assert!(t < h);
        }
    }

    #[test]
    fn example_euler_matrices() {
        let eu = Quiver::example().euler().clone();
        assert_eq!(eu.e, IntMatrix::new(vec![vec![1, -1, 0], vec![0, 1, -2], vec![0, 0, 1]]));
        assert_eq!(eu.e_inv, IntMatrix::new(vec![vec![1, 1, 2], vec![0, 1, 2], vec![0, 0, 1]]));
        assert_eq!(eu.et_inv, IntMatrix::new(vec![vec![1, 0, 0], vec![1, 1, 0], vec![2, 2, 1]]));
        assert_eq!(Quiver::a_n(2).euler().e, IntMatrix::new(vec![vec![1, -1], vec![0, 1]]));
        let disconnected = Quiver::from_edges(3, &[]).unwrap();
        assert_eq!(disconnected.euler().e, IntMatrix::identity(3));
    }

    #[test]
    fn euler_form_examples() {
        let q = Quiver::example();
        assert_eq!(q.euler_form(&dv(&[1, 0, 0]), &dv(&[0, 1, 2])).unwrap(), -1);
        assert_eq!(q.euler_form(&dv(&[1, 1, 2]), &dv(&[0, 1, 2])).unwrap(), 0);
        assert_eq!(q.euler_form(&dv(&[5, -3, 2]), &dv(&[0, 0, 0])).unwrap(), 0);
        assert!(matches!(
            q.euler_form(&dv(&[1, 0]), &dv(&[0, 1, 2])),
            Err(Error::DimensionMismatch { expected: 3, got: 2 })
        ));
    }

    #[test]
    fn projective_and_injective_vectors() {
        let q = Quiver::example();
        assert_eq!(q.proj_vector(0).unwrap(), dv(&[1, 1, 2]));
        assert_eq!(q.inj_vector(2).unwrap(), dv(&[2, 2, 1]));
        let s2 = &q.proj_vector(1).unwrap() - &(2 * &q.proj_vector(2).unwrap());
        assert_eq!(s2, dv(&[0, 1, 0]));
        assert!(matches!(q.proj_vector(3), Err(Error::UnknownVertex(_))));
    }

    #[test]
    fn tau_examples() {
        let a2 = Quiver::a_n(2);
        assert_eq!(a2.tau(&dv(&[1, 0])).unwrap(), dv(&[0, 1]));
        assert_eq!(a2.tau(&dv(&[0, 0])).unwrap(), dv(&[0, 0]));
        assert_eq!(a2.tau_inverse(&dv(&[0, 1])).unwrap(), dv(&[1, 0]));
    }

    #[test]
    fn tits_form_examples() {
        assert_eq!(Quiver::a_n(2).tits_form(&dv(&[1, 1])).unwrap(), 1);
        assert_eq!(Quiver::a_n(2).tits_form(&dv(&[0, 0])).unwrap(), 0);
        // 1 + 1 + 1 - (1*1) - 2*(1*1) = 0
        assert_eq!(Quiver::example().tits_form(&dv(&[1, 1, 1])).unwrap(), 0);
    }

    #[test]
    fn path_enumeration() {
        let q = Quiver::example();
        assert_eq!(q.paths_between(0, 2).unwrap(), vec![vec![0, 1], vec![0, 2]]);
        assert_eq!(q.paths_between(1, 1).unwrap(), vec![Vec::<usize>::new()]);
        assert!(q.paths_between(2, 0).unwrap().is_empty());
        assert!(q.paths_between(0, 7).is_err());
        let a = q.path_ids(0, 1)[0];
        let b = q.path_ids(1, 2)[1];
        let ab = q.concat(a, b);
        assert_eq!(q.path(ab).arrows, vec![0, 2]);
        assert_eq!(q.concat(q.constant_path(0), a), a);
    }

    #[test]
    fn vector_parsing_and_display() {
        let v = DimVector::parse("1, 2,-3").unwrap();
        assert_eq!(v, dv(&[1, 2, -3]));
        assert_eq!(v.to_string(), "(1,2,-3)");
        assert_eq!(DimVector::parse("(1,2,-3)").unwrap(), v);
        assert!(DimVector::parse("1,x").is_err());
    }

    #[test]
    fn builtins() {
        assert_eq!(Quiver::builtin("A3").unwrap().n(), 3);
        assert_eq!(Quiver::builtin("D4").unwrap().n(), 4);
        assert_eq!(Quiver::builtin("E6").unwrap().arrows().len(), 5);
        assert!(Quiver::builtin("D3").is_none());
        assert_eq!(Quiver::builtin("example").unwrap(), Quiver::example());
    }
}
