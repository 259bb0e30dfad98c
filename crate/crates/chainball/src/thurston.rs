//! Thurston norm balls of C(n,p) complements and per-class data.
//!
//! Coordinates are taken in the basis of twice-punctured disks bounded by
//! L_1..L_n. For p < 0 the ball is the hull of the points produced by the
//! clasp-shape state machine below together with ±e_i; it is reported as
//! conjectured.

use std::collections::{BTreeSet, HashSet, VecDeque};
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{gcd_i64, Rational};
use crate::chainlink::{ChainLinkError, ChainLinkParams};
use crate::polytope::{
    cmp_vec, convex_hull, neg_vec, unit_vector, Facet, FacetJson, Polytope, PolytopeError,
    RationalVector,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ThurstonError {
    #[error("p = {0} is outside the range of this constructor")]
    OutOfRange(i64),
    #[error("p = {p} is not canonical for n = {n}; apply the mirror first")]
    NotCanonical { n: usize, p: i64 },
    #[error("class has length {0}, expected {1}")]
    Length(usize, usize),
    #[error("class is not primitive")]
    NotPrimitive,
    #[error("class is zero")]
    ZeroClass,
    #[error("norm {0} is not an integer")]
    NonIntegralNorm(String),
    #[error("class is not in the cone over the face x_1+…+x_(n-1)-x_n = 1")]
    NotInCone,
    #[error("some axis vertex is zero")]
    ZeroAxis,
    #[error("no valid squeeze pair")]
    NoSqueezePair,
    #[error(transparent)]
    ChainLink(#[from] ChainLinkError),
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum NormStatus {
    Proven,
    Conjectured,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NormBall {
    pub params: ChainLinkParams,
    pub polytope: Polytope,
    pub status: NormStatus,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NormBallJson {
    pub n: usize,
    pub p: i64,
    pub status: NormStatus,
    pub dim: usize,
    pub vertices: Vec<Vec<String>>,
    pub facets: Vec<FacetJson>,
}

impl NormBall {
    pub fn norm(&self, x: &[Rational]) -> Rational {
        self.polytope.minkowski_norm(x)
    }

    pub fn to_json(&self) -> NormBallJson {
        let pj = self.polytope.to_json();
        NormBallJson {
            n: self.params.n,
            p: self.params.p,
            status: self.status,
            dim: pj.dim,
            vertices: pj.vertices,
            facets: pj.facets,
        }
    }
}

fn check_n(n: usize) -> Result<(), ThurstonError> {
    ChainLinkParams::new(n, 0)?;
    Ok(())
}

fn axis_points(n: usize) -> Vec<RationalVector> {
    (0..n).flat_map(|i| [unit_vector(n, i, 1), unit_vector(n, i, -1)]).collect()
}

/// the cocube ball of C(n,p), p ≥ 1
pub fn norm_ball_positive(n: usize, p: i64) -> Result<NormBall, ThurstonError> {
    check_n(n)?;
    if p < 1 {
        return Err(ThurstonError::OutOfRange(p));
    }
    let polytope = convex_hull(&axis_points(n))?;
    Ok(NormBall { params: ChainLinkParams { n, p }, polytope, status: NormStatus::Proven })
}

/// cocube plus the two apexes ±(1,…,1)/(n-2)
pub fn norm_ball_zero(n: usize) -> Result<NormBall, ThurstonError> {
    check_n(n)?;
    let mut pts = axis_points(n);
    let apex: RationalVector = vec![Rational::new(BigInt::one(), BigInt::from(n - 2)); n];
    pts.push(neg_vec(&apex));
    pts.push(apex);
    let polytope = convex_hull(&pts)?;
    Ok(NormBall { params: ChainLinkParams { n, p: 0 }, polytope, status: NormStatus::Proven })
}

/// normals ±(Σ_{j≠i} e_j - e_i) of the faces through the apexes of the p = 0 ball
pub fn zero_ball_normals(n: usize) -> Vec<RationalVector> {
    let mut out = Vec::new();
    for i in 0..n {
        let h: RationalVector =
            (0..n).map(|j| Rational::from_integer(BigInt::from(if j == i { -1 } else { 1 }))).collect();
        out.push(neg_vec(&h));
        out.push(h);
    }
    out.sort_by(|a, b| cmp_vec(a, b));
    out
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum ClaspShape {
    Plus,
    Minus,
}

/// State of the vertex generator. `live` lists the components not yet
/// twisted out, in cyclic order; `shape[k]` and `frozen[k]` describe the
/// clasp between `live[k]` and `live[k+1]`. Signs are indexed by the
/// original component.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ChainLinkState {
    pub n: usize,
    pub live: Vec<usize>,
    pub shape: Vec<ClaspShape>,
    pub frozen: Vec<bool>,
    pub sign: Vec<i8>,
}

impl ChainLinkState {
    /// |p| minus clasps followed by pluses, all signs +1
    pub fn initial(n: usize, minus: usize) -> Self {
        ChainLinkState {
            n,
            live: (0..n).collect(),
            shape: (0..n).map(|j| if j < minus { ClaspShape::Minus } else { ClaspShape::Plus }).collect(),
            frozen: vec![false; n],
            sign: vec![1; n],
        }
    }

    pub fn removed(&self) -> BTreeSet<usize> {
        let live: BTreeSet<usize> = self.live.iter().copied().collect();
        (0..self.n).filter(|j| !live.contains(j)).collect()
    }

    /// 0 on removed components, sign_j/(live - 2) elsewhere
    pub fn point(&self) -> RationalVector {
        let big_n = BigInt::from(self.live.len() - 2);
        let live: BTreeSet<usize> = self.live.iter().copied().collect();
        (0..self.n)
            .map(|j| {
                if live.contains(&j) {
                    Rational::new(BigInt::from(self.sign[j]), big_n.clone())
                } else {
                    Rational::zero()
                }
            })
            .collect()
    }

    /// shapes of the two clasps at live position k
    fn clasps_at(&self, k: usize) -> (usize, usize) {
        let l = self.live.len();
        ((k + l - 1) % l, k)
    }

    /// moves the component at live position k across its clasps
    pub fn flip(&self, k: usize) -> Option<Self> {
        let (a, b) = self.clasps_at(k);
        if self.shape[a] == self.shape[b] || self.frozen[a] || self.frozen[b] {
            return None;
        }
        let mut next = self.clone();
        next.shape.swap(a, b);
        let c = self.live[k];
        next.sign[c] = -next.sign[c];
        Some(next)
    }

    /// twists out the component at live position k, merging its clasps into a frozen "+"
    pub fn full_twist(&self, k: usize) -> Option<Self> {
        let l = self.live.len();
        let (a, b) = self.clasps_at(k);
        if self.shape[a] == self.shape[b] || l <= 3 {
            return None;
        }
        let c = self.live[k];
        let removed = self.removed();
        if removed.contains(&((c + self.n - 1) % self.n)) || removed.contains(&((c + 1) % self.n)) {
            return None;
        }
        let mut next = self.clone();
        next.live.remove(k);
        if k == 0 {
            // clasps l-1 and 0 merge into the new last clasp
            next.shape = self.shape[1..l - 1].to_vec();
            next.shape.push(ClaspShape::Plus);
            next.frozen = self.frozen[1..l - 1].to_vec();
            next.frozen.push(true);
        } else {
            next.shape.splice(a..=b, [ClaspShape::Plus]);
            next.frozen.splice(a..=b, [true]);
        }
        Some(next)
    }
}

fn check_canonical_negative(n: usize, p: i64) -> Result<(), ThurstonError> {
    check_n(n)?;
    if p >= 0 {
        return Err(ThurstonError::OutOfRange(p));
    }
    if p < ChainLinkParams::canonical_floor(n) {
        return Err(ThurstonError::NotCanonical { n, p });
    }
    Ok(())
}

/// candidate vertices for p < 0 (canonical range), closed under antipody
pub fn candidate_vertices_negative(n: usize, p: i64) -> Result<Vec<RationalVector>, ThurstonError> {
    check_canonical_negative(n, p)?;
    Ok(generate_candidates(n, p.unsigned_abs() as usize))
}

fn generate_candidates(n: usize, minus: usize) -> Vec<RationalVector> {
    let start = ChainLinkState::initial(n, minus);
    let mut seen: HashSet<ChainLinkState> = HashSet::new();
    let mut queue = VecDeque::new();
    let mut points: BTreeSet<Vec<Rational>> = BTreeSet::new();
    seen.insert(start.clone());
    queue.push_back(start);
    while let Some(st) = queue.pop_front() {
        let v = st.point();
        points.insert(neg_vec(&v));
        points.insert(v);
        for k in 0..st.live.len() {
            for next in [st.flip(k), st.full_twist(k)].into_iter().flatten() {
                if seen.insert(next.clone()) {
                    queue.push_back(next);
                }
            }
        }
    }
    let mut out: Vec<RationalVector> = points.into_iter().collect();
    out.sort_by(|a, b| cmp_vec(a, b));
    out
}

/// hull of the candidates and ±e_i
pub fn conjectured_ball_negative(n: usize, p: i64) -> Result<NormBall, ThurstonError> {
    let mut pts = candidate_vertices_negative(n, p)?;
    pts.extend(axis_points(n));
    let polytope = convex_hull(&pts)?;
    Ok(NormBall { params: ChainLinkParams { n, p }, polytope, status: NormStatus::Conjectured })
}

/// coordinate reindexing carrying the ball of C(n,-p-n) to that of C(n,p):
/// x_1 fixed, x_j ↔ x_{n+2-j}
pub fn mirror_reindex<T: Clone>(x: &[T]) -> Vec<T> {
    let n = x.len();
    (0..n).map(|j| if j == 0 { x[0].clone() } else { x[n - j].clone() }).collect()
}

/// the norm ball for any (n,p), canonicalizing through the mirror
pub fn norm_ball(params: ChainLinkParams) -> Result<NormBall, ThurstonError> {
    let (canon, mirrored) = params.canonical();
    let base = match canon.p {
        p if p >= 1 => norm_ball_positive(canon.n, p)?,
        0 => norm_ball_zero(canon.n)?,
        p => conjectured_ball_negative(canon.n, p)?,
    };
    if !mirrored {
        return Ok(base);
    }
    let pts: Vec<RationalVector> = base.polytope.vertices.iter().map(|v| mirror_reindex(v)).collect();
    let mut normals: Vec<RationalVector> =
        base.polytope.facets.iter().map(|f| mirror_reindex(&f.normal)).collect();
    normals.sort_by(|a, b| cmp_vec(a, b));
    let polytope = Polytope::from_normals(canon.n, &pts, normals);
    Ok(NormBall { params, polytope, status: base.status })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SliceResult {
    pub ok: bool,
    /// a vertex on {x_i = 0} (coordinate i deleted) outside both lower balls
    pub witness: Option<RationalVector>,
}

/// vertices of B(n,p) on {x_i = 0}, with coordinate i deleted, lie in B(n-1,p) ∪ B(n-1,p+1)
pub fn slice_check(n: usize, p: i64, i: usize) -> Result<SliceResult, ThurstonError> {
    check_canonical_negative(n, p)?;
    if n < 4 {
        return Err(ThurstonError::ChainLink(ChainLinkError::TooFewComponents(n - 1)));
    }
    if i >= n {
        return Err(ThurstonError::Length(i, n));
    }
    let ball = norm_ball(ChainLinkParams { n, p })?;
    let lower_a = norm_ball(ChainLinkParams { n: n - 1, p })?;
    let lower_b = norm_ball(ChainLinkParams { n: n - 1, p: p + 1 })?;
    for v in &ball.polytope.vertices {
        if !v[i].is_zero() {
            continue;
        }
        let w: RationalVector =
            v.iter().enumerate().filter(|(j, _)| *j != i).map(|(_, x)| x.clone()).collect();
        if !lower_a.polytope.contains(&w) && !lower_b.polytope.contains(&w) {
            return Ok(SliceResult { ok: false, witness: Some(w) });
        }
    }
    Ok(SliceResult { ok: true, witness: None })
}

/// Thurston norm of x; the status says whether the ball is proven
pub fn thurston_norm(
    params: ChainLinkParams,
    x: &[Rational],
) -> Result<(Rational, NormStatus), ThurstonError> {
    if x.len() != params.n {
        return Err(ThurstonError::Length(x.len(), params.n));
    }
    let ball = norm_ball(params)?;
    Ok((ball.norm(x), ball.status))
}

/// α_1 + … + α_{n-1} - α_n, valid on the cone over the face with that normal
pub fn norm_in_fibered_cone(x: &[Rational]) -> Result<Rational, ThurstonError> {
    let n = x.len();
    let ball = norm_ball_zero(n)?;
    let mut h: RationalVector = vec![Rational::one(); n];
    h[n - 1] = -Rational::one();
    if !ball.polytope.supporting_facets(x).iter().any(|f| f.normal == h) {
        return Err(ThurstonError::NotInCone);
    }
    Ok(crate::polytope::dot(&h, x))
}

/// Σ gcd(a_{i-1} + a_{i+1}, a_i), cyclic
pub fn boundary_count(a: &[i64]) -> i64 {
    boundary_count_linked(a, &vec![1; a.len()])
}

/// boundary count with clasp linking signs: link[i] is the sign of the clasp
/// between components i and i+1, giving Σ gcd(link[i-1]·a_{i-1} + link[i]·a_{i+1}, a_i)
pub fn boundary_count_linked(a: &[i64], link: &[i64]) -> i64 {
    let n = a.len();
    (0..n)
        .map(|i| {
            let prev = (i + n - 1) % n;
            let next = (i + 1) % n;
            gcd_i64(link[prev] * a[prev] + link[i] * a[next], a[i])
        })
        .sum()
}

/// clasp linking signs of the canonical diagram: -1 on the first |p| clasps when p < 0
pub fn linking_signs(params: ChainLinkParams) -> Vec<i64> {
    let m = if params.p < 0 { params.p.unsigned_abs() as usize } else { 0 };
    (0..params.n).map(|j| if j < m { -1 } else { 1 }).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SurfaceType {
    pub genus: Option<i64>,
    pub boundary: i64,
    pub euler_char: i64,
}

impl fmt::Display for SurfaceType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.genus {
            Some(g) => write!(f, "S_{{{},{}}}", g, self.boundary),
            None => write!(f, "S_{{?,{}}}", self.boundary),
        }
    }
}

/// reads "S_{g,b}"
pub fn parse_surface_label(s: &str) -> Option<(i64, i64)> {
    let inner = s.trim().strip_prefix("S_{")?.strip_suffix('}')?;
    let (g, b) = inner.split_once(',')?;
    Some((g.trim().parse().ok()?, b.trim().parse().ok()?))
}

fn is_primitive(x: &[i64]) -> bool {
    x.iter().fold(0i64, |g, &v| g.gcd(&v)) == 1
}

/// topology of a minimal representative of the primitive integral class x,
/// assuming it is connected
pub fn topological_type(params: ChainLinkParams, x: &[i64]) -> Result<SurfaceType, ThurstonError> {
    if x.len() != params.n {
        return Err(ThurstonError::Length(x.len(), params.n));
    }
    if x.iter().all(|&v| v == 0) {
        return Err(ThurstonError::ZeroClass);
    }
    if !is_primitive(x) {
        return Err(ThurstonError::NotPrimitive);
    }
    let ball = norm_ball(params)?;
    let xr: RationalVector = x.iter().map(|&v| Rational::from_integer(BigInt::from(v))).collect();
    let norm = ball.norm(&xr);
    if !norm.is_integer() {
        return Err(ThurstonError::NonIntegralNorm(norm.to_string()));
    }
    let norm = norm.to_integer().to_i64().expect("norm fits in i64");
    let (canon, mirrored) = params.canonical();
    let xc = if mirrored { mirror_reindex(x) } else { x.to_vec() };
    let boundary = boundary_count_linked(&xc, &linking_signs(canon));
    let twice = 2 - boundary + norm;
    let genus = (twice >= 0 && twice % 2 == 0).then_some(twice / 2);
    Ok(SurfaceType { genus, boundary, euler_char: -norm })
}

/// facet through the axis points a_i·e_i: normal (1/a_1,…,1/a_n); the
/// incident indices refer to those axis points
pub fn facet_from_axis_vertices(a: &[Rational]) -> Result<Facet, ThurstonError> {
    if a.iter().any(|x| x.is_zero()) {
        return Err(ThurstonError::ZeroAxis);
    }
    Ok(Facet { normal: a.iter().map(|x| x.recip()).collect(), vertices: (0..a.len()).collect() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SqueezeFiber {
    /// squeezed component (1-based)
    pub k: usize,
    /// component carrying the -1 (1-based)
    pub i: usize,
    pub fiber: RationalVector,
    pub combined: RationalVector,
}

/// the fiber obtained by squeezing a component whose clasps differ, for canonical p < 0
pub fn squeeze_fiber(n: usize, p: i64) -> Result<SqueezeFiber, ThurstonError> {
    check_canonical_negative(n, p)?;
    if n < 4 {
        return Err(ThurstonError::NoSqueezePair);
    }
    let st = ChainLinkState::initial(n, p.unsigned_abs() as usize);
    let mixed = |c: usize| st.shape[(c + n - 1) % n] != st.shape[c];
    let k = (0..n).find(|&c| mixed(c)).ok_or(ThurstonError::NoSqueezePair)?;
    let near = [(k + n - 1) % n, k, (k + 1) % n];
    let i = (0..n)
        .find(|&c| !mixed(c) && !near.contains(&c))
        .ok_or(ThurstonError::NoSqueezePair)?;
    let fiber: RationalVector = (0..n)
        .map(|j| {
            let num = if j == k {
                0
            } else if j == i {
                -1
            } else {
                1
            };
            Rational::new(BigInt::from(num), BigInt::from(n - 1))
        })
        .collect();
    let combined: RationalVector = (0..n)
        .map(|j| Rational::new(BigInt::from(if j == i { -1 } else { 1 }), BigInt::from(n)))
        .collect();
    Ok(SqueezeFiber { k: k + 1, i: i + 1, fiber, combined })
}

/// facets of the ball established as fibered faces: all faces for p = 0, the
/// all-ones faces for p ∈ {1, 2}, and for p < 0 the faces through the squeeze fibers
pub fn fibered_facets(ball: &NormBall) -> Result<Vec<RationalVector>, ThurstonError> {
    let n = ball.params.n;
    let (canon, mirrored) = ball.params.canonical();
    let mut out: Vec<RationalVector> = Vec::new();
    match canon.p {
        0 => out.extend(ball.polytope.facets.iter().map(|f| f.normal.clone())),
        1 | 2 => {
            let ones: RationalVector = vec![Rational::one(); n];
            out.push(neg_vec(&ones));
            out.push(ones);
        }
        p if p < 0 && n >= 4 => {
            let sq = squeeze_fiber(canon.n, p)?;
            let c = if mirrored { mirror_reindex(&sq.combined) } else { sq.combined };
            for x in [neg_vec(&c), c] {
                out.extend(ball.polytope.supporting_facets(&x).iter().map(|f| f.normal.clone()));
            }
        }
        _ => {}
    }
    out.sort_by(|a, b| cmp_vec(a, b));
    out.dedup();
    Ok(out)
}

/// true when x lies in the open cone over an established fibered face
pub fn in_fibered_cone(ball: &NormBall, x: &[Rational]) -> Result<bool, ThurstonError> {
    let sup = ball.polytope.supporting_facets(x);
    if sup.len() != 1 {
        return Ok(false);
    }
    Ok(fibered_facets(ball)?.contains(&sup[0].normal))
}

pub fn to_rational_vec(x: &[i64]) -> RationalVector {
    x.iter().map(|&v| BigRational::from_integer(BigInt::from(v))).collect()
}

/// Σ|x_i|
pub fn l1_norm(x: &[Rational]) -> Rational {
    x.iter().fold(Rational::zero(), |acc, v| acc + v.abs())
}
