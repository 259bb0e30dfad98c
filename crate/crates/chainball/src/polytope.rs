//! Exact convex polytopes containing the origin: facets, vertices and the
//! Minkowski functional.

use std::cmp::Ordering;
use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{format_rational, parse_rational, AlgebraError, Rational};

pub type RationalVector = Vec<Rational>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PolytopeError {
    #[error("degenerate input: {0}")]
    Degenerate(String),
    #[error("dimension mismatch: expected {0}, got {1}")]
    DimensionMismatch(usize, usize),
    #[error(transparent)]
    Parse(#[from] AlgebraError),
}

/// facet {y : ⟨normal, y⟩ = 1}
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Facet {
    pub normal: RationalVector,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Polytope {
    pub dim: usize,
    pub vertices: Vec<RationalVector>,
    pub facets: Vec<Facet>,
}

pub fn dot(a: &[Rational], b: &[Rational]) -> Rational {
    a.iter().zip(b).fold(Rational::zero(), |acc, (x, y)| acc + x * y)
}

/// the entries as i64 when all are integers of moderate size
fn small_integers(v: &[Rational]) -> Option<Vec<i64>> {
    v.iter()
        .map(|q| if q.is_integer() { q.numer().to_i64().filter(|k| k.abs() < 1 << 40) } else { None })
        .collect()
}

pub fn cmp_vec(a: &[Rational], b: &[Rational]) -> Ordering {
    for (x, y) in a.iter().zip(b) {
        match x.cmp(y) {
            Ordering::Equal => continue,
            o => return o,
        }
    }
    a.len().cmp(&b.len())
}

pub fn neg_vec(a: &[Rational]) -> RationalVector {
    a.iter().map(|x| -x).collect()
}

pub fn scale_vec(a: &[Rational], q: &Rational) -> RationalVector {
    a.iter().map(|x| x * q).collect()
}

pub fn unit_vector(n: usize, i: usize, sign: i64) -> RationalVector {
    (0..n)
        .map(|j| if j == i { Rational::from_integer(BigInt::from(sign)) } else { Rational::zero() })
        .collect()
}

/// rank of a list of rational row vectors
pub fn rank(rows: &[RationalVector]) -> usize {
    let mut m: Vec<RationalVector> = rows.to_vec();
    let cols = m.first().map_or(0, |r| r.len());
    let mut r = 0;
    for c in 0..cols {
        let Some(piv) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, piv);
        let pv = m[r][c].clone();
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &pv;
                for k in c..cols {
                    let d = &f * &m[r][k];
                    m[i][k] -= d;
                }
            }
        }
        r += 1;
        if r == m.len() {
            break;
        }
    }
    r
}

fn to_integer_row(p: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let l = p.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let row = p.iter().map(|x| x.numer() * (&l / x.denom())).collect();
    (row, l)
}

fn primitive(v: Vec<BigInt>) -> Vec<BigInt> {
    let g = v.iter().fold(BigInt::zero(), |acc, x| acc.gcd(x));
    if g.is_zero() || g.is_one() {
        v
    } else {
        v.into_iter().map(|x| x / &g).collect()
    }
}

fn idot(a: &[BigInt], b: &[BigInt]) -> BigInt {
    a.iter().zip(b).fold(BigInt::zero(), |acc, (x, y)| acc + x * y)
}

#[derive(Clone)]
struct Bits(Vec<u64>);

impl Bits {
    fn new(len: usize) -> Self {
        Bits(vec![0; len.div_ceil(64)])
    }
    fn set(&mut self, i: usize) {
        self.0[i / 64] |= 1 << (i % 64);
    }
    fn and(&self, o: &Bits) -> Bits {
        Bits(self.0.iter().zip(&o.0).map(|(a, b)| a & b).collect())
    }
    fn count(&self) -> usize {
        self.0.iter().map(|w| w.count_ones() as usize).sum()
    }
    fn contains_all(&self, o: &Bits) -> bool {
        self.0.iter().zip(&o.0).all(|(a, b)| a & b == *b)
    }
}

struct Ray {
    v: Vec<BigInt>,
    tight: Bits,
}

/// facet normals of conv(points) by double description on the polar cone
/// {(h, s) : ⟨p, h⟩ ≤ s for all p, s ≥ 0}
fn facet_normals(points: &[RationalVector], n: usize) -> Result<Vec<RationalVector>, PolytopeError> {
    let d = n + 1;
    let mut rows: Vec<Vec<BigInt>> = Vec::with_capacity(points.len() + 1);
    let mut s_row = vec![BigInt::zero(); d];
    s_row[n] = BigInt::from(-1);
    rows.push(s_row);
    for p in points {
        let (mut r, l) = to_integer_row(p);
        r.push(-l);
        rows.push(r);
    }
    let nrows = rows.len();

    // greedy basis of d independent rows
    let mut basis: Vec<usize> = Vec::new();
    let mut basis_rat: Vec<RationalVector> = Vec::new();
    for (i, r) in rows.iter().enumerate() {
        let mut trial = basis_rat.clone();
        trial.push(r.iter().map(|x| Rational::from_integer(x.clone())).collect());
        if rank(&trial) == trial.len() {
            basis.push(i);
            basis_rat = trial;
            if basis.len() == d {
                break;
            }
        }
    }
    if basis.len() < d {
        return Err(PolytopeError::Degenerate("points do not span the full dimension".into()));
    }

    // initial rays: columns of -B^{-1}
    let inv = invert(&basis_rat).expect("basis is invertible");
    let mut rays: Vec<Ray> = Vec::new();
    for k in 0..d {
        let col: Vec<Rational> = (0..d).map(|i| -&inv[i][k]).collect();
        let l = col.iter().fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
        let v = primitive(col.iter().map(|x| x.numer() * (&l / x.denom())).collect());
        let mut tight = Bits::new(nrows);
        for (j, &b) in basis.iter().enumerate() {
            if j != k {
                tight.set(b);
            }
        }
        rays.push(Ray { v, tight });
    }

    let in_basis: BTreeSet<usize> = basis.iter().copied().collect();
    for (ri, a) in rows.iter().enumerate() {
        if in_basis.contains(&ri) {
            continue;
        }
        let vals: Vec<BigInt> = rays.iter().map(|r| idot(a, &r.v)).collect();
        let pos: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_positive()).collect();
        if pos.is_empty() {
            for (i, r) in rays.iter_mut().enumerate() {
                if vals[i].is_zero() {
                    r.tight.set(ri);
                }
            }
            continue;
        }
        let neg: Vec<usize> = (0..rays.len()).filter(|&i| vals[i].is_negative()).collect();
        let mut fresh: Vec<Ray> = Vec::new();
        for &p in &pos {
            for &q in &neg {
                let common = rays[p].tight.and(&rays[q].tight);
                if common.count() + 2 < d {
                    continue;
                }
                let adjacent = rays
                    .iter()
                    .enumerate()
                    .all(|(k, r)| k == p || k == q || !r.tight.contains_all(&common));
                if !adjacent {
                    continue;
                }
                let vp = &vals[p];
                let vq = -&vals[q];
                let v: Vec<BigInt> =
                    rays[q].v.iter().zip(&rays[p].v).map(|(x, y)| vp * x + &vq * y).collect();
                let mut tight = common;
                tight.set(ri);
                fresh.push(Ray { v: primitive(v), tight });
            }
        }
        let mut kept: Vec<Ray> = Vec::new();
        for (i, mut r) in rays.into_iter().enumerate() {
            if vals[i].is_positive() {
                continue;
            }
            if vals[i].is_zero() {
                r.tight.set(ri);
            }
            kept.push(r);
        }
        kept.extend(fresh);
        rays = kept;
    }

    let mut normals: Vec<RationalVector> = Vec::new();
    for r in &rays {
        let s = &r.v[n];
        if !s.is_positive() {
            return Err(PolytopeError::Degenerate("origin is not an interior point".into()));
        }
        normals.push(r.v[..n].iter().map(|x| Rational::new(x.clone(), s.clone())).collect());
    }
    normals.sort_by(|a, b| cmp_vec(a, b));
    normals.dedup();
    Ok(normals)
}

fn invert(m: &[RationalVector]) -> Option<Vec<RationalVector>> {
    let n = m.len();
    let mut a: Vec<RationalVector> = m
        .iter()
        .enumerate()
        .map(|(i, r)| {
            let mut row = r.clone();
            row.extend((0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }));
            row
        })
        .collect();
    for c in 0..n {
        let piv = (c..n).find(|&i| !a[i][c].is_zero())?;
        a.swap(c, piv);
        let pv = a[c][c].clone();
        for v in a[c].iter_mut() {
            *v /= &pv;
        }
        for i in 0..n {
            if i != c && !a[i][c].is_zero() {
                let f = a[i][c].clone();
                for k in 0..2 * n {
                    let d = &f * &a[c][k];
                    a[i][k] -= d;
                }
            }
        }
    }
    Some(a.into_iter().map(|r| r[n..].to_vec()).collect())
}

impl Polytope {
    /// assembles the polytope from points and a complete list of facet normals
    pub fn from_normals(dim: usize, points: &[RationalVector], normals: Vec<RationalVector>) -> Self {
        let mut pts: Vec<RationalVector> = points.to_vec();
        pts.sort_by(|a, b| cmp_vec(a, b));
        pts.dedup();
        let one = Rational::one();
        let vertices: Vec<RationalVector> = pts
            .into_iter()
            .filter(|p| {
                let on: Vec<RationalVector> =
                    normals.iter().filter(|h| dot(h, p) == one).cloned().collect();
                on.len() >= dim && rank(&on) == dim
            })
            .collect();
        let facets = normals
            .into_iter()
            .map(|h| {
                let vs = (0..vertices.len()).filter(|&i| dot(&h, &vertices[i]) == one).collect();
                Facet { normal: h, vertices: vs }
            })
            .collect();
        Polytope { dim, vertices, facets }
    }

    pub fn contains(&self, x: &[Rational]) -> bool {
        let one = Rational::one();
        self.facets.iter().all(|f| dot(&f.normal, x) <= one)
    }

    pub fn minkowski_norm(&self, x: &[Rational]) -> Rational {
        if let Some(xi) = small_integers(x) {
            let mut best: Option<Rational> = None;
            let mut best_int = 0i128;
            for f in &self.facets {
                match small_integers(&f.normal) {
                    Some(h) => best_int = best_int.max(h.iter().zip(&xi).map(|(a, b)| *a as i128 * *b as i128).sum()),
                    None => {
                        let v = dot(&f.normal, x);
                        best = Some(best.map_or(v.clone(), |b| b.max(v)));
                    }
                }
            }
            let int = Rational::from_integer(BigInt::from(best_int));
            return best.map_or(int.clone(), |b| b.max(int));
        }
        self.facets
            .iter()
            .map(|f| dot(&f.normal, x))
            .max()
            .unwrap_or_else(Rational::zero)
            .max(Rational::zero())
    }

    /// facets attaining the norm of x
    pub fn supporting_facets(&self, x: &[Rational]) -> Vec<&Facet> {
        let m = self.minkowski_norm(x);
        if m.is_zero() {
            return vec![];
        }
        self.facets.iter().filter(|f| dot(&f.normal, x) == m).collect()
    }

    pub fn is_centrally_symmetric(&self) -> bool {
        let set: BTreeSet<Vec<Rational>> = self.vertices.iter().cloned().collect();
        self.vertices.iter().all(|v| set.contains(&neg_vec(v)))
    }

    pub fn to_json(&self) -> PolytopeJson {
        PolytopeJson {
            dim: self.dim,
            vertices: self.vertices.iter().map(|v| v.iter().map(format_rational).collect()).collect(),
            facets: self
                .facets
                .iter()
                .map(|f| FacetJson {
                    normal: f.normal.iter().map(format_rational).collect(),
                    vertices: f.vertices.clone(),
                })
                .collect(),
        }
    }

    pub fn from_json(j: &PolytopeJson) -> Result<Self, PolytopeError> {
        let parse_vec = |v: &Vec<String>| -> Result<RationalVector, PolytopeError> {
            if v.len() != j.dim {
                return Err(PolytopeError::DimensionMismatch(j.dim, v.len()));
            }
            v.iter().map(|s| parse_rational(s).map_err(PolytopeError::from)).collect()
        };
        let vertices = j.vertices.iter().map(parse_vec).collect::<Result<Vec<_>, _>>()?;
        let facets = j
            .facets
            .iter()
            .map(|f| Ok(Facet { normal: parse_vec(&f.normal)?, vertices: f.vertices.clone() }))
            .collect::<Result<Vec<_>, PolytopeError>>()?;
        Ok(Polytope { dim: j.dim, vertices, facets })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FacetJson {
    pub normal: Vec<String>,
    pub vertices: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PolytopeJson {
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub facets: Vec<FacetJson>,
}

/// convex hull of points spanning R^n with the origin strictly inside;
/// non-extreme and duplicate points are dropped
pub fn convex_hull(points: &[RationalVector]) -> Result<Polytope, PolytopeError> {
    let n = points
        .first()
        .map(|p| p.len())
        .ok_or_else(|| PolytopeError::Degenerate("empty point set".into()))?;
    if let Some(p) = points.iter().find(|p| p.len() != n) {
        return Err(PolytopeError::DimensionMismatch(n, p.len()));
    }
    if n == 0 {
        return Err(PolytopeError::Degenerate("zero dimension".into()));
    }
    let mut pts = points.to_vec();
    pts.sort_by(|a, b| cmp_vec(a, b));
    pts.dedup();
    let normals = facet_normals(&pts, n)?;
    Ok(Polytope::from_normals(n, &pts, normals))
}

pub fn minkowski_norm(ball: &Polytope, x: &[Rational]) -> Rational {
    ball.minkowski_norm(x)
}

pub fn supporting_facet<'a>(ball: &'a Polytope, x: &[Rational]) -> Vec<&'a Facet> {
    ball.supporting_facets(x)
}
