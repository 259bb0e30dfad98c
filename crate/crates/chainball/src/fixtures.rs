//! Tabulated p < 0 vertex data and its verification against the generator.

use std::collections::BTreeSet;
use std::path::Path;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{format_rational, parse_rational, Rational};
use crate::chainlink::ChainLinkParams;
use crate::polytope::{neg_vec, unit_vector, RationalVector};
use crate::thurston::{norm_ball, parse_surface_label, topological_type};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("cannot read {0}: {1}")]
    Io(String, std::io::Error),
    #[error("bad fixture {0}: {1}")]
    Json(String, serde_json::Error),
    #[error("bad rational in fixture: {0}")]
    Rational(String),
}

/// one non-axis vertex; its antipode is implied
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureRow {
    pub vertex: Vec<String>,
    /// surface of `multiple · vertex`, written S_{g,b}
    pub surface: String,
    /// smallest integer making the vertex integral
    pub multiple: i64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FixtureTable {
    pub n: usize,
    pub p: i64,
    pub rows: Vec<FixtureRow>,
}

const BUNDLED: [(&str, &str); 6] = [
    ("c4m1.json", include_str!("../fixtures/c4m1.json")),
    ("c5m1.json", include_str!("../fixtures/c5m1.json")),
    ("c5m2.json", include_str!("../fixtures/c5m2.json")),
    ("c6m1.json", include_str!("../fixtures/c6m1.json")),
    ("c6m2.json", include_str!("../fixtures/c6m2.json")),
    ("c6m3.json", include_str!("../fixtures/c6m3.json")),
];

impl FixtureTable {
    pub fn parse(name: &str, text: &str) -> Result<Self, FixtureError> {
        serde_json::from_str(text).map_err(|e| FixtureError::Json(name.to_string(), e))
    }

    pub fn row_vertex(row: &FixtureRow) -> Result<RationalVector, FixtureError> {
        row.vertex
            .iter()
            .map(|s| parse_rational(s).map_err(|_| FixtureError::Rational(s.clone())))
            .collect()
    }

    /// rows, their antipodes and ±e_i
    pub fn expected_vertices(&self) -> Result<BTreeSet<RationalVector>, FixtureError> {
        let mut out = BTreeSet::new();
        for row in &self.rows {
            let v = Self::row_vertex(row)?;
            out.insert(neg_vec(&v));
            out.insert(v);
        }
        for i in 0..self.n {
            out.insert(unit_vector(self.n, i, 1));
            out.insert(unit_vector(self.n, i, -1));
        }
        Ok(out)
    }
}

/// the six built-in tables, sorted by (n, p)
pub fn bundled() -> Vec<FixtureTable> {
    let mut out: Vec<FixtureTable> = BUNDLED
        .iter()
        .map(|(name, text)| FixtureTable::parse(name, text).expect("bundled fixture parses"))
        .collect();
    sort_tables(&mut out);
    out
}

fn sort_tables(tables: &mut [FixtureTable]) {
    tables.sort_by_key(|t| (t.n, std::cmp::Reverse(t.p)));
}

/// every *.json file in `dir`, sorted by (n, p)
pub fn load_dir(dir: &Path) -> Result<Vec<FixtureTable>, FixtureError> {
    let shown = dir.display().to_string();
    let entries = std::fs::read_dir(dir).map_err(|e| FixtureError::Io(shown.clone(), e))?;
    let mut out = Vec::new();
    for entry in entries {
        let path = entry.map_err(|e| FixtureError::Io(shown.clone(), e))?.path();
        if path.extension().and_then(|s| s.to_str()) != Some("json") {
            continue;
        }
        let name = path.display().to_string();
        let text = std::fs::read_to_string(&path).map_err(|e| FixtureError::Io(name.clone(), e))?;
        out.push(FixtureTable::parse(&name, &text)?);
    }
    sort_tables(&mut out);
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Report {
    pub case: String,
    pub status: Status,
    pub expected: String,
    pub actual: String,
    pub witness: Option<Vec<String>>,
}

fn render_vec(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

fn fail(case: &str, expected: String, actual: String, witness: Vec<String>) -> Report {
    Report { case: case.to_string(), status: Status::Fail, expected, actual, witness: Some(witness) }
}

/// compares the computed ball with a table, then re-derives each row's surface
pub fn verify_table(table: &FixtureTable) -> Report {
    let case = format!("C({},{})", table.n, table.p);
    let expected = match table.expected_vertices() {
        Ok(e) => e,
        Err(e) => return fail(&case, "parsable fixture".into(), e.to_string(), vec![]),
    };
    let params = match ChainLinkParams::new(table.n, table.p) {
        Ok(p) => p,
        Err(e) => return fail(&case, "valid (n,p)".into(), e.to_string(), vec![]),
    };
    let ball = match norm_ball(params) {
        Ok(b) => b,
        Err(e) => return fail(&case, "norm ball".into(), e.to_string(), vec![]),
    };
    let got: BTreeSet<RationalVector> = ball.polytope.vertices.iter().cloned().collect();
    if got != expected {
        let witness = got.symmetric_difference(&expected).next().cloned().unwrap_or_default();
        return fail(
            &case,
            format!("{} vertices", expected.len()),
            format!("{} vertices", got.len()),
            render_vec(&witness),
        );
    }
    for row in &table.rows {
        let v = FixtureTable::row_vertex(row).expect("checked above");
        let k = Rational::from_integer(BigInt::from(row.multiple));
        let scaled: Vec<Rational> = v.iter().map(|x| x * &k).collect();
        if scaled.iter().any(|x| !x.is_integer()) {
            return fail(&case, "integral multiple".into(), row.multiple.to_string(), row.vertex.clone());
        }
        let ints: Vec<i64> = scaled.iter().map(|x| x.to_integer().to_i64().unwrap()).collect();
        let g = ints.iter().fold(0i64, |g, x| g.gcd(x));
        let want = parse_surface_label(&row.surface);
        let got = topological_type(params, &ints);
        let norm_ok = ball.norm(&scaled).abs() == k;
        match (want, got) {
            (Some((wg, wb)), Ok(t)) if g == 1 && norm_ok && t.genus == Some(wg) && t.boundary == wb => {}
            (_, Ok(t)) => {
                return fail(&case, row.surface.clone(), t.to_string(), row.vertex.clone());
            }
            (_, Err(e)) => return fail(&case, row.surface.clone(), e.to_string(), row.vertex.clone()),
        }
    }
    Report {
        case,
        status: Status::Pass,
        expected: format!("{} vertices", expected.len()),
        actual: format!("{} vertices", got.len()),
        witness: None,
    }
}
