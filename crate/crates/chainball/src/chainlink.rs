//! The chained links C(n,p): standard diagram, Seifert circles, orientation
//! statistics and the hyperbolicity / fiberedness predicates.
//!
//! Diagram layout. Components L_1..L_n sit counterclockwise on a ring; the
//! clasp between L_i and L_{i+1} is a lens with an outer and an inner
//! crossing. L_i is over at the outer crossing and L_{i+1} at the inner one,
//! so every clasp is drawn the same way. The |p| half-twists sit on L_1
//! between its outer and inner sides. Positive twists continue the
//! alternation along L_1, negative ones break it.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ChainLinkError {
    #[error("n must be at least 3, got {0}")]
    TooFewComponents(usize),
    #[error("orientation has length {0}, expected {1}")]
    OrientationLength(usize, usize),
    #[error("orientation entries must be +1 or -1")]
    BadOrientation,
    #[error("malformed diagram: arc {0} appears {1} times as an in-arc and {2} times as an out-arc")]
    MalformedDiagram(usize, usize, usize),
    #[error("non-alternating: Seifert surface not guaranteed minimal")]
    NonAlternating,
    #[error("class fiberedness is only decided for p >= 0")]
    NegativeTwist,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChainLinkParams {
    pub n: usize,
    pub p: i64,
}

impl ChainLinkParams {
    pub fn new(n: usize, p: i64) -> Result<Self, ChainLinkError> {
        if n < 3 {
            return Err(ChainLinkError::TooFewComponents(n));
        }
        Ok(ChainLinkParams { n, p })
    }

    /// smallest p the mirror identity never needs to change
    pub fn canonical_floor(n: usize) -> i64 {
        -((n / 2) as i64)
    }

    pub fn is_canonical(&self) -> bool {
        self.p >= Self::canonical_floor(self.n)
    }

    /// the mirror-equivalent parameters with p ≥ -⌊n/2⌋, and whether the mirror was applied
    pub fn canonical(&self) -> (ChainLinkParams, bool) {
        if self.is_canonical() {
            (*self, false)
        } else {
            (mirror_params(*self), true)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Orientation {
    signs: Vec<i8>,
}

impl Orientation {
    pub fn new(signs: Vec<i8>) -> Result<Self, ChainLinkError> {
        if signs.iter().any(|&s| s != 1 && s != -1) {
            return Err(ChainLinkError::BadOrientation);
        }
        Ok(Orientation { signs })
    }

    pub fn all_positive(n: usize) -> Self {
        Orientation { signs: vec![1; n] }
    }

    /// every orientation of n components, in binary order with +1 first
    pub fn all(n: usize) -> impl Iterator<Item = Orientation> {
        (0..1u64 << n).map(move |bits| Orientation {
            signs: (0..n).map(|i| if bits >> i & 1 == 1 { -1 } else { 1 }).collect(),
        })
    }

    pub fn signs(&self) -> &[i8] {
        &self.signs
    }

    pub fn len(&self) -> usize {
        self.signs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.signs.is_empty()
    }

    fn check(&self, n: usize) -> Result<(), ChainLinkError> {
        if self.signs.len() != n {
            Err(ChainLinkError::OrientationLength(self.signs.len(), n))
        } else {
            Ok(())
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CrossingKind {
    /// outer crossing of the clasp between L_i and L_{i+1} (0-based i)
    ClaspOuter(usize),
    /// inner crossing of the same clasp
    ClaspInner(usize),
    /// k-th half-twist of L_1
    Twist(usize),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Crossing {
    pub over_in: usize,
    pub over_out: usize,
    pub under_in: usize,
    pub under_out: usize,
    pub sign: i8,
    /// arcs counterclockwise around the crossing, starting at the incoming under-arc
    pub arcs: [usize; 4],
    pub kind: CrossingKind,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PDDiagram {
    pub crossings: Vec<Crossing>,
    /// component index (0-based) of each arc
    pub arc_component: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CrossingJson {
    pub sign: i8,
    pub arcs: [usize; 4],
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PDJson {
    pub crossings: Vec<CrossingJson>,
}

impl PDDiagram {
    pub fn crossing_count(&self) -> usize {
        self.crossings.len()
    }

    pub fn arc_count(&self) -> usize {
        self.arc_component.len()
    }

    pub fn component_count(&self) -> usize {
        self.arc_component.iter().collect::<BTreeSet<_>>().len()
    }

    pub fn writhe(&self) -> i64 {
        self.crossings.iter().map(|c| c.sign as i64).sum()
    }

    /// faces of the underlying planar map; a connected planar diagram has crossings + 2
    pub fn face_count(&self) -> usize {
        // (crossing, slot) of both ends of every arc
        let mut ends: Vec<Vec<(usize, usize)>> = vec![Vec::new(); self.arc_count()];
        for (ci, c) in self.crossings.iter().enumerate() {
            for (s, &a) in c.arcs.iter().enumerate() {
                ends[a].push((ci, s));
            }
        }
        let other_end = |ci: usize, s: usize| -> (usize, usize) {
            let a = self.crossings[ci].arcs[s];
            let e = &ends[a];
            if e[0] == (ci, s) { e[1] } else { e[0] }
        };
        let mut seen = vec![[false; 4]; self.crossings.len()];
        let mut faces = 0;
        for ci in 0..self.crossings.len() {
            for s in 0..4 {
                if seen[ci][s] {
                    continue;
                }
                faces += 1;
                let mut cur = (ci, s);
                while !seen[cur.0][cur.1] {
                    seen[cur.0][cur.1] = true;
                    let (c2, s2) = other_end(cur.0, cur.1);
                    cur = (c2, (s2 + 1) % 4);
                }
            }
        }
        faces
    }

    /// true when every component meets over and under crossings alternately
    pub fn is_alternating(&self) -> bool {
        let mut head: Vec<Option<(usize, bool)>> = vec![None; self.arc_count()];
        for (ci, c) in self.crossings.iter().enumerate() {
            head[c.over_in] = Some((ci, true));
            head[c.under_in] = Some((ci, false));
        }
        self.crossings.iter().all(|c| {
            let next_over = |out: usize| head[out].map(|(_, o)| o);
            next_over(c.over_out) == Some(false) && next_over(c.under_out) == Some(true)
        })
    }

    pub fn to_json(&self) -> PDJson {
        PDJson {
            crossings: self
                .crossings
                .iter()
                .map(|c| CrossingJson { sign: c.sign, arcs: c.arcs })
                .collect(),
        }
    }
}

pub fn is_hyperbolic(params: ChainLinkParams) -> bool {
    let small = |k: i64| (0..=2).contains(&k);
    let a = (params.n as i64 + params.p).abs();
    let b = params.p.abs();
    !(small(a) && small(b))
}

/// C(n,p) ≅ C(n,-p-n)
pub fn mirror_params(params: ChainLinkParams) -> ChainLinkParams {
    ChainLinkParams { n: params.n, p: -params.p - params.n as i64 }
}

const OUTER: usize = 0;
const INNER: usize = 1;
const TWIST: usize = 2;

struct SlotGraph {
    kinds: Vec<CrossingKind>,
    nbr: Vec<[(usize, usize); 4]>,
}

fn slot_graph(n: usize, m: usize) -> SlotGraph {
    let idx = |kind: usize, i: usize| match kind {
        OUTER => i,
        INNER => n + i,
        _ => 2 * n + i,
    };
    let total = 2 * n + m;
    let mut nbr = vec![[(usize::MAX, usize::MAX); 4]; total];
    let mut link = |a: usize, sa: usize, b: usize, sb: usize| {
        nbr[a][sa] = (b, sb);
        nbr[b][sb] = (a, sa);
    };
    // slots counterclockwise; at the outer crossing of clasp i:
    // 0 = L_{i+1} forward, 1 = L_i forward, 2 = L_{i+1} back, 3 = L_i back;
    // at the inner crossing: 0 = L_i back, 1 = L_{i+1} back, 2 = L_i forward, 3 = L_{i+1} forward.
    // twist crossings: 0/1 = outer/inner side towards L_2, 2/3 = inner/outer side towards L_n.
    for i in 0..n {
        let im = (i + n - 1) % n;
        link(idx(OUTER, i), 1, idx(INNER, i), 0);
        if i == 0 && m > 0 {
            link(idx(TWIST, 0), 2, idx(INNER, im), 1);
            link(idx(TWIST, m - 1), 1, idx(INNER, i), 2);
            link(idx(TWIST, 0), 3, idx(OUTER, im), 0);
            link(idx(TWIST, m - 1), 0, idx(OUTER, i), 3);
            for k in 0..m - 1 {
                link(idx(TWIST, k), 0, idx(TWIST, k + 1), 3);
                link(idx(TWIST, k), 1, idx(TWIST, k + 1), 2);
            }
        } else {
            link(idx(INNER, i), 2, idx(INNER, im), 1);
            link(idx(OUTER, im), 0, idx(OUTER, i), 3);
        }
        link(idx(INNER, im), 3, idx(OUTER, im), 2);
    }
    let kinds = (0..n)
        .map(CrossingKind::ClaspOuter)
        .chain((0..n).map(CrossingKind::ClaspInner))
        .chain((0..m).map(CrossingKind::Twist))
        .collect();
    SlotGraph { kinds, nbr }
}

/// the standard diagram of C(n,p) with 2n clasp crossings and |p| twist crossings
pub fn standard_diagram(
    params: ChainLinkParams,
    orient: &Orientation,
) -> Result<PDDiagram, ChainLinkError> {
    let n = params.n;
    if n < 3 {
        return Err(ChainLinkError::TooFewComponents(n));
    }
    orient.check(n)?;
    let m = params.p.unsigned_abs() as usize;
    let g = slot_graph(n, m);
    let nc = g.kinds.len();

    // trace each component in its reference direction, starting on the
    // forward slot of L_i at the outer crossing of clasp i
    let mut arc_component = Vec::new();
    // for every crossing and slot: (arc id, arc arrives here in reference direction)
    let mut slot_arc = vec![[(usize::MAX, false); 4]; nc];
    // visits per component: (crossing, slot entered, slot left)
    let mut visits: Vec<Vec<(usize, usize, usize)>> = Vec::new();
    for comp in 0..n {
        let start = (comp, 1);
        let mut cur = start;
        let mut vs = Vec::new();
        loop {
            let arc = arc_component.len();
            arc_component.push(comp);
            let d = g.nbr[cur.0][cur.1];
            slot_arc[cur.0][cur.1] = (arc, false);
            slot_arc[d.0][d.1] = (arc, true);
            let next = (d.0, (d.1 + 2) % 4);
            vs.push((d.0, d.1, next.1));
            cur = next;
            if cur == start {
                break;
            }
        }
        visits.push(vs);
    }

    // over slot pair per crossing: true = {1,3}, false = {0,2}
    let mut over13 = vec![None; nc];
    for (ci, k) in g.kinds.iter().enumerate() {
        if !matches!(k, CrossingKind::Twist(_)) {
            over13[ci] = Some(true);
        }
    }
    // alternate along L_1 from its outer clasp crossing (where it is over)
    let v1 = &visits[0];
    let start = v1.iter().position(|&(c, _, _)| c == 0).expect("L_1 meets its outer clasp crossing");
    let mut expect_over = true;
    for step in 0..v1.len() {
        let (c, sin, _) = v1[(start + step) % v1.len()];
        if over13[c].is_none() {
            let this_pair13 = sin % 2 == 1;
            over13[c] = Some(if expect_over { this_pair13 } else { !this_pair13 });
        }
        expect_over = !expect_over;
    }
    if params.p < 0 {
        for (ci, k) in g.kinds.iter().enumerate() {
            if matches!(k, CrossingKind::Twist(_)) {
                over13[ci] = over13[ci].map(|b| !b);
            }
        }
    }

    let mut crossings = Vec::with_capacity(nc);
    for ci in 0..nc {
        let o13 = over13[ci].unwrap();
        let comp_of = |s: usize| arc_component[slot_arc[ci][s].0];
        // a slot is incoming when its arc arrives here in the oriented direction
        let incoming = |s: usize| {
            let (_, arrives) = slot_arc[ci][s];
            let sign = orient.signs[comp_of(s)];
            arrives == (sign == 1)
        };
        let (op, up) = if o13 { ((1, 3), (0, 2)) } else { ((0, 2), (1, 3)) };
        let (o_in, o_out) = if incoming(op.0) { (op.0, op.1) } else { (op.1, op.0) };
        let (u_in, u_out) = if incoming(up.0) { (up.0, up.1) } else { (up.1, up.0) };
        let sign = if u_out == (o_out + 1) % 4 { 1 } else { -1 };
        let arcs = [0, 1, 2, 3].map(|k| slot_arc[ci][(u_in + k) % 4].0);
        crossings.push(Crossing {
            over_in: slot_arc[ci][o_in].0,
            over_out: slot_arc[ci][o_out].0,
            under_in: slot_arc[ci][u_in].0,
            under_out: slot_arc[ci][u_out].0,
            sign,
            arcs,
            kind: g.kinds[ci],
        });
    }
    Ok(PDDiagram { crossings, arc_component })
}

/// cycles of the orientation-respecting smoothing permutation on arcs
pub fn seifert_circles(d: &PDDiagram) -> Result<usize, ChainLinkError> {
    let na = d.arc_count();
    let mut ins = vec![0usize; na];
    let mut outs = vec![0usize; na];
    let mut next = vec![usize::MAX; na];
    for c in &d.crossings {
        for a in [c.over_in, c.under_in] {
            if a < na {
                ins[a] += 1;
            }
        }
        for a in [c.over_out, c.under_out] {
            if a < na {
                outs[a] += 1;
            }
        }
        if c.under_in < na {
            next[c.under_in] = c.over_out;
        }
        if c.over_in < na {
            next[c.over_in] = c.under_out;
        }
    }
    for a in 0..na {
        if ins[a] != 1 || outs[a] != 1 {
            return Err(ChainLinkError::MalformedDiagram(a, ins[a], outs[a]));
        }
    }
    for c in &d.crossings {
        for a in [c.over_in, c.under_in, c.over_out, c.under_out] {
            if a >= na {
                return Err(ChainLinkError::MalformedDiagram(a, 0, 0));
            }
        }
    }
    let mut seen = vec![false; na];
    let mut cycles = 0;
    for a in 0..na {
        if seen[a] {
            continue;
        }
        cycles += 1;
        let mut cur = a;
        while !seen[cur] {
            seen[cur] = true;
            cur = next[cur];
        }
    }
    Ok(cycles)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SeifertData {
    pub circles: usize,
    pub crossings: usize,
    pub euler_char: i64,
    /// None when (2 - χ - n) is odd or negative
    pub genus: Option<i64>,
    pub boundary_components: usize,
}

fn surface_data(params: ChainLinkParams, d: &PDDiagram) -> Result<SeifertData, ChainLinkError> {
    let circles = seifert_circles(d)?;
    let crossings = d.crossing_count();
    let euler_char = circles as i64 - crossings as i64;
    let twice = 2 - euler_char - params.n as i64;
    let genus = (twice >= 0 && twice % 2 == 0).then_some(twice / 2);
    Ok(SeifertData { circles, crossings, euler_char, genus, boundary_components: params.n })
}

/// Seifert surface of the standard diagram; only for the alternating case p ≥ 0
pub fn seifert_surface_data(
    params: ChainLinkParams,
    orient: &Orientation,
) -> Result<SeifertData, ChainLinkError> {
    if params.p < 0 {
        return Err(ChainLinkError::NonAlternating);
    }
    let d = standard_diagram(params, orient)?;
    surface_data(params, &d)
}

/// circle and crossing counts for any p, without a minimality claim
pub fn seifert_counts(
    params: ChainLinkParams,
    orient: &Orientation,
) -> Result<SeifertData, ChainLinkError> {
    let d = standard_diagram(params, orient)?;
    surface_data(params, &d)
}

/// cyclically adjacent sign flips
pub fn sign_changes(orient: &Orientation) -> usize {
    let s = &orient.signs;
    let n = s.len();
    (0..n).filter(|&i| s[i] != s[(i + 1) % n]).count()
}

/// fiberedness of the class (±1,…,±1) given by an orientation, p ≥ 0
pub fn is_fibered_class(
    params: ChainLinkParams,
    orient: &Orientation,
) -> Result<bool, ChainLinkError> {
    if params.p < 0 {
        return Err(ChainLinkError::NegativeTwist);
    }
    orient.check(params.n)?;
    let s = sign_changes(orient);
    Ok(match params.p {
        0 => s == 2,
        1 => s == 0,
        2 => s == 0,
        _ => false,
    })
}

pub fn is_fibered_link(params: ChainLinkParams) -> bool {
    let n = params.n as i64;
    -n - 2 <= params.p && params.p <= 2
}
