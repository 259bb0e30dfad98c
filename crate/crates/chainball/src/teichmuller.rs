//! Teichmüller polynomial of the fibered face of C(n,-2).
//!
//! Polynomials live in Z[x_1^±,…,x_{n-1}^±, u^±]; variable index n-1 is u.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::algebra::{
    largest_real_root, poly_divide_exact, specialize, AlgebraError, IntPoly, LaurentPoly,
    PolyMatrix, TermRecord,
};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TeichError {
    #[error("n = {0} is too small, need n >= {1}")]
    TooSmall(usize, usize),
    #[error("n = {0} is too large for the determinant path (max 8)")]
    TooLarge(usize),
    #[error("specialization does not match (1-t)^(n-2)(1-(n+2)t+t^2): got {0}")]
    SpecializationMismatch(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
}

pub const MAX_DET_N: usize = 8;

fn check_n(n: usize) -> Result<(), TeichError> {
    if n < 3 {
        return Err(TeichError::TooSmall(n, 3));
    }
    Ok(())
}

/// index of u in the ring
pub fn u_var(n: usize) -> usize {
    n - 1
}

/// x1..x{n-1}, u
pub fn variable_names(n: usize) -> Vec<String> {
    let mut names: Vec<String> = (1..n).map(|i| format!("x{i}")).collect();
    names.push("u".into());
    names
}

/// a_1 = 1, a_k = (x_1⋯x_{k-1})^{-1}
pub fn diagonal_entries(n: usize) -> Vec<LaurentPoly> {
    (0..n)
        .map(|k| {
            let exps: Vec<i32> = (0..n).map(|j| if j < k { -1 } else { 0 }).collect();
            LaurentPoly::monomial(n, exps, 1)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TransitionMatrices {
    pub t_v: PolyMatrix,
    pub t_h: PolyMatrix,
    pub d: PolyMatrix,
    pub d_s: PolyMatrix,
}

pub fn build_transition_matrices(n: usize) -> Result<TransitionMatrices, TeichError> {
    check_n(n)?;
    let a = diagonal_entries(n);
    let mut shifted = vec![a[n - 1].clone()];
    shifted.extend(a[..n - 1].iter().cloned());
    let d = PolyMatrix::diagonal(&a, n);
    let d_s = PolyMatrix::diagonal(&shifted, n);
    let zero = PolyMatrix::zero(n, n, n);
    let id = PolyMatrix::identity(n, n);
    let mut ones = PolyMatrix::zero(n, n, n);
    for i in 0..n {
        for j in 0..n {
            ones.set(i, j, LaurentPoly::one(n));
        }
    }
    let t_v = PolyMatrix::block(&d_s, &zero, &d, &d)?;
    let t_h = PolyMatrix::block(&id, &ones, &zero, &id)?;
    Ok(TransitionMatrices { t_v, t_h, d, d_s })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TeichPolynomial {
    pub n: usize,
    pub poly: LaurentPoly,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TeichJson {
    pub n: usize,
    pub variables: Vec<String>,
    pub terms: Vec<TermRecord>,
    pub rendered: String,
}

impl TeichPolynomial {
    pub fn render(&self) -> String {
        let names = variable_names(self.n);
        let refs: Vec<&str> = names.iter().map(|s| s.as_str()).collect();
        self.poly.render(&refs)
    }

    pub fn to_json(&self) -> TeichJson {
        TeichJson {
            n: self.n,
            variables: variable_names(self.n),
            terms: self.poly.to_records(),
            rendered: self.render(),
        }
    }

    pub fn from_json(j: &TeichJson) -> Result<Self, TeichError> {
        Ok(TeichPolynomial { n: j.n, poly: LaurentPoly::from_records(j.n, &j.terms)? })
    }
}

/// Π(a_i - u)
pub fn diagonal_char_poly(n: usize) -> LaurentPoly {
    let u = LaurentPoly::var(n, u_var(n));
    diagonal_entries(n).iter().fold(LaurentPoly::one(n), |acc, a| &acc * &(a - &u))
}

/// det(T_V T_H - uI) / det(D - uI)
pub fn teich_poly_det(n: usize) -> Result<TeichPolynomial, TeichError> {
    check_n(n)?;
    if n > MAX_DET_N {
        return Err(TeichError::TooLarge(n));
    }
    let m = build_transition_matrices(n)?;
    let u = LaurentPoly::var(n, u_var(n));
    let num = m.t_v.mul(&m.t_h)?.sub_scalar_identity(&u)?.det()?;
    let den = m.d.sub_scalar_identity(&u)?.det()?;
    let poly = poly_divide_exact(&num, &den, u_var(n))?;
    Ok(TeichPolynomial { n, poly })
}

/// A - Σ u·a_k·A_k with A_k the product of (a_i - u) over i ∉ {k, k-1}
pub fn teich_poly_closed(n: usize) -> Result<TeichPolynomial, TeichError> {
    check_n(n)?;
    let a = diagonal_entries(n);
    let u = LaurentPoly::var(n, u_var(n));
    let factors: Vec<LaurentPoly> = a.iter().map(|ai| ai - &u).collect();
    let big_a = factors.iter().fold(LaurentPoly::one(n), |acc, f| &acc * f);
    let mut poly = big_a;
    for k in 0..n {
        let pred = (k + n - 1) % n;
        let a_k = factors
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != k && *i != pred)
            .fold(LaurentPoly::one(n), |acc, (_, f)| &acc * f);
        poly = &poly - &(&(&u * &a[k]) * &a_k);
    }
    Ok(TeichPolynomial { n, poly })
}

/// (D_s - uI)(D - uI) - u·𝟏·D, the n×n matrix left after block row reduction
pub fn reduced_matrix(n: usize) -> Result<PolyMatrix, TeichError> {
    let m = build_transition_matrices(n)?;
    let u = LaurentPoly::var(n, u_var(n));
    let left = m.d_s.sub_scalar_identity(&u)?.mul(&m.d.sub_scalar_identity(&u)?)?;
    let mut u_ones = PolyMatrix::zero(n, n, n);
    for i in 0..n {
        for j in 0..n {
            u_ones.set(i, j, u.clone());
        }
    }
    Ok(left.sub(&u_ones.mul(&m.d)?)?)
}

/// (n+1)×(n-1): a zero row, a ones row, then -I
pub fn invariant_homology_basis(n: usize) -> Result<Vec<Vec<i64>>, TeichError> {
    check_n(n)?;
    let mut rows = vec![vec![0; n - 1], vec![1; n - 1]];
    for i in 0..n - 1 {
        rows.push((0..n - 1).map(|j| if i == j { -1 } else { 0 }).collect());
    }
    Ok(rows)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateRow {
    pub label: String,
    /// coefficients on y_1..y_n
    pub y: Vec<i64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CoordinateChange {
    /// u, x_1, …, x_{n-1} from x_i = a_1 - a_{i+1}, a_i = y_i - y_{i+1}
    pub from_relations: Vec<CoordinateRow>,
    /// the tabulated rows u, x_1, x_2, x_{n-2}, x_{n-1}
    pub tabulated: Vec<CoordinateRow>,
}

/// coefficients of a_i = y_i - y_{i+1} (1-based, cyclic)
fn a_in_y(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[(i + n - 1) % n] += 1;
    v[i % n] -= 1;
    v
}

pub fn coordinate_change(n: usize) -> Result<CoordinateChange, TeichError> {
    if n < 4 {
        return Err(TeichError::TooSmall(n, 4));
    }
    let mut u_row = vec![0; n];
    u_row[0] = 1;
    let mut from_relations = vec![CoordinateRow { label: "u".into(), y: u_row.clone() }];
    let a1 = a_in_y(n, 1);
    for i in 1..n {
        let ai = a_in_y(n, i + 1);
        from_relations.push(CoordinateRow {
            label: format!("x{i}"),
            y: a1.iter().zip(&ai).map(|(p, q)| p - q).collect(),
        });
    }
    // y_1 - y_2 + y_{i+1} - y_{i+2}, with the x_{n-2} row sign-flipped on its last two terms
    let generic = |i: usize, flip: bool| {
        let mut v = vec![0; n];
        let s = if flip { -1 } else { 1 };
        v[0] += 1;
        v[1] -= 1;
        v[i % n] += s;
        v[(i + 1) % n] -= s;
        v
    };
    let tabulated = vec![
        CoordinateRow { label: "u".into(), y: u_row },
        CoordinateRow { label: "x1".into(), y: generic(1, false) },
        CoordinateRow { label: "x2".into(), y: generic(2, false) },
        CoordinateRow { label: format!("x{}", n - 2), y: generic(n - 2, true) },
        CoordinateRow { label: format!("x{}", n - 1), y: generic(n - 1, false) },
    ];
    Ok(CoordinateChange { from_relations, tabulated })
}

/// (1-t)^(n-2)(1-(n+2)t+t^2)
pub fn expected_fiber_polynomial(n: usize) -> IntPoly {
    let one_minus = IntPoly::from_i64(&[1, -1]).pow((n - 2) as u32);
    let quad = IntPoly::from_i64(&[1, -(n as i64 + 2), 1]);
    &one_minus * &quad
}

/// P at x_i = 1, u = t
pub fn specialize_fiber_all_ones(n: usize) -> Result<IntPoly, TeichError> {
    let p = teich_poly_closed(n)?;
    let mut weights = vec![0; n];
    weights[u_var(n)] = 1;
    let s = specialize(&p.poly, &weights)?;
    let want = expected_fiber_polynomial(n);
    if s.shift != 0 || s.poly != want {
        return Err(TeichError::SpecializationMismatch(s.poly.render("t")));
    }
    Ok(s.poly)
}

/// (n+2+√(n²+4n))/2
pub fn stretch_factor_exact(n: usize) -> f64 {
    let n = n as f64;
    (n + 2.0 + (n * n + 4.0 * n).sqrt()) / 2.0
}

/// largest real root of the all-ones specialization
pub fn stretch_factor(n: usize, tol: f64) -> Result<f64, TeichError> {
    let f = specialize_fiber_all_ones(n)?;
    Ok(largest_real_root(&f, tol)?)
}

/// a_1⋯a_n = x_1^{-(n-1)} x_2^{-(n-2)} ⋯ x_{n-1}^{-1}
pub fn diagonal_product(n: usize) -> LaurentPoly {
    let exps: Vec<i32> = (0..n).map(|j| if j + 1 < n { -((n - 1 - j) as i32) } else { 0 }).collect();
    LaurentPoly::monomial(n, exps, BigInt::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn x(n: usize, i: usize) -> LaurentPoly {
        LaurentPoly::var(n, i)
    }

    #[test]
    fn matrices_n3() {
        let m = build_transition_matrices(3).unwrap();
        let inv = |e: Vec<i32>| LaurentPoly::monomial(3, e, 1);
        assert_eq!(m.d.get(0, 0), &LaurentPoly::one(3));
        assert_eq!(m.d.get(1, 1), &inv(vec![-1, 0, 0]));
        assert_eq!(m.d.get(2, 2), &inv(vec![-1, -1, 0]));
        assert_eq!(m.d_s.get(0, 0), &inv(vec![-1, -1, 0]));
        assert_eq!(m.d_s.get(1, 1), &LaurentPoly::one(3));
        assert_eq!(m.d_s.get(2, 2), &inv(vec![-1, 0, 0]));
        assert_eq!(m.t_v.rows(), 6);
    }

    #[test]
    fn t_h_squared() {
        let m = build_transition_matrices(4).unwrap();
        let sq = m.t_h.mul(&m.t_h).unwrap();
        for i in 0..4 {
            for j in 0..4 {
                assert_eq!(sq.get(i, 4 + j), &LaurentPoly::constant(4, 2));
            }
        }
    }

    #[test]
    fn closed_form_n3() {
        let n = 3;
        let a = diagonal_entries(n);
        let u = x(n, 2);
        let f = |i: usize| &a[i] - &u;
        let big_a = &(&f(0) * &f(1)) * &f(2);
        let sum = &(&(&a[0] * &f(1)) + &(&a[1] * &f(2))) + &(&a[2] * &f(0));
        let want = &big_a - &(&u * &sum);
        assert_eq!(teich_poly_closed(3).unwrap().poly, want);
    }

    #[test]
    fn det_matches_closed_small() {
        for n in 3..=5 {
            assert_eq!(teich_poly_det(n).unwrap(), teich_poly_closed(n).unwrap(), "n={n}");
        }
    }

    #[test]
    fn u_degree_and_constant_term() {
        for n in 3..=7 {
            let p = teich_poly_closed(n).unwrap().poly;
            let uv = u_var(n);
            assert_eq!(p.degree_in(uv), Some(n as i32));
            assert!(p.coeff_in(uv, n as i32).is_unit());
            assert_eq!(p.coeff_in(uv, 0), diagonal_product(n));
        }
    }

    #[test]
    fn det_path_limits() {
        assert_eq!(teich_poly_det(9), Err(TeichError::TooLarge(9)));
        assert_eq!(teich_poly_closed(2), Err(TeichError::TooSmall(2, 3)));
    }

    #[test]
    fn homology_basis_n3() {
        let b = invariant_homology_basis(3).unwrap();
        assert_eq!(b, vec![vec![0, 0], vec![1, 1], vec![-1, 0], vec![0, -1]]);
    }

    #[test]
    fn coordinate_rows() {
        let c = coordinate_change(6).unwrap();
        assert_eq!(c.from_relations[0].y, vec![1, 0, 0, 0, 0, 0]);
        assert_eq!(c.from_relations[1].y, vec![1, -2, 1, 0, 0, 0]);
        assert!(c.from_relations[1..].iter().all(|r| r.y.iter().sum::<i64>() == 0));
        assert_eq!(c.tabulated[1].y, vec![1, 0, -1, 0, 0, 0]);
        assert_eq!(c.tabulated[2].y, vec![1, -1, 1, -1, 0, 0]);
        assert_eq!(c.tabulated[3].y, vec![1, -1, 0, 0, -1, 1]);
        assert_eq!(c.tabulated[4].y, vec![0, -1, 0, 0, 0, 1]);
        assert!(coordinate_change(3).is_err());
    }

    #[test]
    fn fiber_specializations() {
        assert_eq!(specialize_fiber_all_ones(3).unwrap(), IntPoly::from_i64(&[1, -6, 6, -1]));
        for n in 3..=8 {
            assert_eq!(specialize_fiber_all_ones(n).unwrap(), expected_fiber_polynomial(n));
        }
    }

    #[test]
    fn stretch_values() {
        let tol = 1e-10;
        assert!((stretch_factor(3, tol).unwrap() - 4.7912878475).abs() < 1e-9);
        assert!((stretch_factor(4, tol).unwrap() - 5.8284271247).abs() < 1e-9);
        assert!((stretch_factor(5, tol).unwrap() - 6.8541019662).abs() < 1e-9);
    }

    #[test]
    fn json_round_trip() {
        let p = teich_poly_closed(4).unwrap();
        let j = p.to_json();
        assert_eq!(j.variables, vec!["x1", "x2", "x3", "u"]);
        assert_eq!(TeichPolynomial::from_json(&j).unwrap(), p);
    }
}
