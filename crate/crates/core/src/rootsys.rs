//! Root systems, Weyl groups and degree tables for the supported simple types.
//!
//! Roots live in the usual Bourbaki ambient spaces (e.g. `A_l` inside an
//! `(l+1)`-dimensional space with coordinates summing to zero) and all
//! arithmetic is exact over the rationals.

use std::collections::{HashSet, VecDeque};
use std::fmt;
use std::str::FromStr;

use num_rational::Rational64;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::error::{Error, Result};

pub type Vector = Vec<Rational64>;

const CLOSURE_LIMIT: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Family {
    A,
    B,
    C,
    D,
    G,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CartanType {
    family: Family,
    rank: usize,
}

impl CartanType {
    /// The ten supported types: A1–A4, B2–B3, C2–C3, D4, G2.
    pub fn new(family: Family, rank: usize) -> Result<Self> {
        let ok = match family {
            Family::A => (1..=4).contains(&rank),
            Family::B | Family::C => (2..=3).contains(&rank),
            Family::D => rank == 4,
            Family::G => rank == 2,
        };
        if ok {
            Ok(CartanType { family, rank })
        } else {
            Err(Error::UnsupportedType(format!("{family:?}{rank}")))
        }
    }

    pub fn all() -> Vec<CartanType> {
        use Family::*;
        [(A, 1), (A, 2), (A, 3), (A, 4), (B, 2), (B, 3), (C, 2), (C, 3), (D, 4), (G, 2)]
            .into_iter()
            .map(|(f, r)| CartanType { family: f, rank: r })
            .collect()
    }

    pub fn family(&self) -> Family {
        self.family
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Dimension of the simple Lie algebra.
    pub fn dim(&self) -> usize {
        let l = self.rank;
        match self.family {
            Family::A => l * (l + 2),
            Family::B | Family::C => l * (2 * l + 1),
            Family::D => l * (2 * l - 1),
            Family::G => 14,
        }
    }
}

impl fmt::Display for CartanType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}{}", self.family, self.rank)
    }
}

impl FromStr for CartanType {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let mut chars = s.chars();
        let family = match chars.next().map(|c| c.to_ascii_uppercase()) {
            Some('A') => Family::A,
            Some('B') => Family::B,
            Some('C') => Family::C,
            Some('D') => Family::D,
            Some('G') => Family::G,
            _ => return Err(Error::UnsupportedType(s.to_string())),
        };
        let rank = chars
            .as_str()
            .parse::<usize>()
            .map_err(|_| Error::UnsupportedType(s.to_string()))?;
        CartanType::new(family, rank)
    }
}

#[derive(Debug, Clone)]
pub struct RootSystem {
    pub cartan_type: CartanType,
    pub ambient_dim: usize,
    pub roots: Vec<Vector>,
    pub positive_roots: Vec<Vector>,
    pub simple_roots: Vec<Vector>,
}

#[derive(Debug, Clone)]
pub struct WeylGroup {
    /// Ambient-dimension square matrices, row-major.
    pub elements: Vec<Matrix>,
    /// Indices into `elements` of the simple reflections.
    pub generators: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ExponentData {
    pub degrees: Vec<usize>,
    pub exponents: Vec<usize>,
}

/// Dense square matrix over the rationals.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Matrix {
    n: usize,
    data: Vec<Rational64>,
}

impl Matrix {
    pub fn identity(n: usize) -> Self {
        let mut data = vec![Rational64::zero(); n * n];
        for i in 0..n {
            data[i * n + i] = Rational64::one();
        }
        Matrix { n, data }
    }

    /// Orthogonal reflection in the hyperplane perpendicular to `alpha`.
    pub fn reflection(alpha: &[Rational64]) -> Self {
        let n = alpha.len();
        let norm = dot(alpha, alpha);
        let two = Rational64::from_integer(2);
        let mut m = Matrix::identity(n);
        for i in 0..n {
            for j in 0..n {
                m.data[i * n + j] -= two * alpha[i] * alpha[j] / norm;
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Rational64 {
        self.data[i * self.n + j]
    }

    pub fn mul(&self, other: &Matrix) -> Matrix {
        let n = self.n;
        let mut data = vec![Rational64::zero(); n * n];
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        Matrix { n, data }
    }

    pub fn apply(&self, v: &[Rational64]) -> Vector {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| self.data[i * self.n + j] * v[j]).sum())
            .collect()
    }

    pub fn transpose(&self) -> Matrix {
        let n = self.n;
        let mut data = vec![Rational64::zero(); n * n];
        for i in 0..n {
            for j in 0..n {
                data[j * n + i] = self.data[i * n + j];
            }
        }
        Matrix { n, data }
    }

    /// Applies the matrix to a complex ambient vector.
    pub fn apply_f64(&self, v: &[num_complex::Complex64]) -> Vec<num_complex::Complex64> {
        (0..self.n)
            .map(|i| {
                (0..self.n)
                    .map(|j| v[j] * to_f64(self.data[i * self.n + j]))
                    .sum()
            })
            .collect()
    }
}

pub fn dot(a: &[Rational64], b: &[Rational64]) -> Rational64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub fn to_f64(r: Rational64) -> f64 {
    *r.numer() as f64 / *r.denom() as f64
}

fn unit(n: usize, i: usize) -> Vector {
    let mut v = vec![Rational64::zero(); n];
    v[i] = Rational64::one();
    v
}

fn combo(n: usize, terms: &[(usize, i64)]) -> Vector {
    let mut v = vec![Rational64::zero(); n];
    for &(i, c) in terms {
        v[i] += Rational64::from_integer(c);
    }
    v
}

fn simple_roots(t: CartanType) -> (usize, Vec<Vector>) {
    let l = t.rank;
    let chain = |n: usize, count: usize| -> Vec<Vector> {
        (0..count).map(|i| combo(n, &[(i, 1), (i + 1, -1)])).collect()
    };
    match t.family {
        Family::A => (l + 1, chain(l + 1, l)),
        Family::B => {
            let mut s = chain(l, l - 1);
            s.push(unit(l, l - 1));
            (l, s)
        }
        Family::C => {
            let mut s = chain(l, l - 1);
            s.push(combo(l, &[(l - 1, 2)]));
            (l, s)
        }
        Family::D => {
            let mut s = chain(l, l - 1);
            s.push(combo(l, &[(l - 2, 1), (l - 1, 1)]));
            (l, s)
        }
        Family::G => (3, vec![combo(3, &[(0, 1), (1, -1)]), combo(3, &[(0, -2), (1, 1), (2, 1)])]),
    }
}

/// Solves the square rational system `m x = rhs` by Gaussian elimination.
fn solve_rational(mut m: Vec<Vec<Rational64>>, mut rhs: Vec<Rational64>) -> Option<Vec<Rational64>> {
    let n = rhs.len();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        rhs.swap(col, pivot);
        let p = m[col][col];
        for r in 0..n {
            if r != col && !m[r][col].is_zero() {
                let f = m[r][col] / p;
                let pivot_row = m[col].clone();
                for (x, v) in m[r][col..].iter_mut().zip(&pivot_row[col..]) {
                    *x -= f * v;
                }
                let v = rhs[col];
                rhs[r] -= f * v;
            }
        }
    }
    Some((0..n).map(|i| rhs[i] / m[i][i]).collect())
}

impl RootSystem {
    pub fn rank(&self) -> usize {
        self.simple_roots.len()
    }

    /// Coordinates of an ambient vector in the span of the simple roots.
    pub fn simple_coordinates(&self, v: &[Rational64]) -> Option<Vector> {
        let gram: Vec<Vec<Rational64>> = self
            .simple_roots
            .iter()
            .map(|a| self.simple_roots.iter().map(|b| dot(a, b)).collect())
            .collect();
        let rhs = self.simple_roots.iter().map(|a| dot(a, v)).collect();
        solve_rational(gram, rhs)
    }

    /// Simple coroots `2α/⟨α,α⟩`.
    pub fn simple_coroots(&self) -> Vec<Vector> {
        self.simple_roots.iter().map(|a| coroot(a)).collect()
    }

    pub fn contains(&self, v: &[Rational64]) -> bool {
        self.roots.iter().any(|r| r.as_slice() == v)
    }
}

pub fn coroot(alpha: &[Rational64]) -> Vector {
    let s = Rational64::from_integer(2) / dot(alpha, alpha);
    alpha.iter().map(|x| x * s).collect()
}

pub fn build_root_system(t: CartanType) -> Result<RootSystem> {
    // re-validate so hand-built CartanType values cannot slip through
    let t = CartanType::new(t.family, t.rank)?;
    let (n, simple) = simple_roots(t);
    let reflections: Vec<Matrix> = simple.iter().map(|a| Matrix::reflection(a)).collect();

    // Orbit of the simple roots under the simple reflections.
    let mut seen: HashSet<Vector> = simple.iter().cloned().collect();
    let mut queue: VecDeque<Vector> = simple.iter().cloned().collect();
    let mut roots: Vec<Vector> = simple.clone();
    while let Some(v) = queue.pop_front() {
        for s in &reflections {
            let w = s.apply(&v);
            if seen.insert(w.clone()) {
                roots.push(w.clone());
                queue.push_back(w);
            }
            if roots.len() > CLOSURE_LIMIT {
                return Err(Error::ClosureOverflow(CLOSURE_LIMIT));
            }
        }
    }
    roots.sort();

    let mut rs = RootSystem {
        cartan_type: t,
        ambient_dim: n,
        roots,
        positive_roots: Vec::new(),
        simple_roots: simple,
    };
    let positive: Vec<Vector> = rs
        .roots
        .iter()
        .filter(|r| {
            rs.simple_coordinates(r)
                .map(|c| c.iter().all(|x| !x.is_negative()))
                .unwrap_or(false)
        })
        .cloned()
        .collect();
    rs.positive_roots = positive;
    Ok(rs)
}

pub fn generate_weyl(rs: &RootSystem) -> Result<WeylGroup> {
    let gens: Vec<Matrix> = rs.simple_roots.iter().map(|a| Matrix::reflection(a)).collect();
    let id = Matrix::identity(rs.ambient_dim);
    let mut elements = vec![id.clone()];
    let mut seen: HashSet<Matrix> = HashSet::from([id]);
    let mut frontier = 0;
    while frontier < elements.len() {
        let g = elements[frontier].clone();
        frontier += 1;
        for s in &gens {
            let h = s.mul(&g);
            if seen.insert(h.clone()) {
                elements.push(h);
                if elements.len() > CLOSURE_LIMIT {
                    return Err(Error::ClosureOverflow(CLOSURE_LIMIT));
                }
            }
        }
    }
    let generators = gens
        .iter()
        .map(|s| elements.iter().position(|e| e == s).expect("generator in closure"))
        .collect();
    Ok(WeylGroup { elements, generators })
}

impl WeylGroup {
    pub fn order(&self) -> usize {
        self.elements.len()
    }
}

pub fn exponent_data(t: CartanType) -> Result<ExponentData> {
    let t = CartanType::new(t.family, t.rank)?;
    let l = t.rank;
    let mut degrees: Vec<usize> = match t.family {
        Family::A => (2..=l + 1).collect(),
        Family::B | Family::C => (1..=l).map(|i| 2 * i).collect(),
        Family::D => {
            let mut d: Vec<usize> = (1..l).map(|i| 2 * i).collect();
            d.push(l);
            d
        }
        Family::G => vec![2, 6],
    };
    degrees.sort_unstable();
    let exponents = degrees.iter().map(|d| d - 1).collect();
    Ok(ExponentData { degrees, exponents })
}

/// `v - 2⟨v,α⟩/⟨α,α⟩ α`.
pub fn reflect(rs: &RootSystem, alpha: &[Rational64], v: &[Rational64]) -> Result<Vector> {
    if !rs.contains(alpha) {
        return Err(Error::NotARoot);
    }
    let c = Rational64::from_integer(2) * dot(v, alpha) / dot(alpha, alpha);
    Ok(v.iter().zip(alpha).map(|(x, a)| x - c * a).collect())
}

#[derive(Debug, Clone, Serialize)]
pub struct LieIdentities {
    pub prod_d_eq_w: bool,
    pub sum_m_eq_pos_roots: bool,
    pub sum_2m_plus_1_eq_dim: bool,
    pub roots_eq_dim_minus_rank: bool,
    pub roots_closed_under_negation: bool,
    pub weyl_permutes_roots: bool,
}

impl LieIdentities {
    pub fn all_hold(&self) -> bool {
        self.prod_d_eq_w
            && self.sum_m_eq_pos_roots
            && self.sum_2m_plus_1_eq_dim
            && self.roots_eq_dim_minus_rank
            && self.roots_closed_under_negation
            && self.weyl_permutes_roots
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct LieReport {
    #[serde(rename = "type")]
    pub type_name: String,
    pub rank: usize,
    pub dim: usize,
    pub num_roots: usize,
    pub num_positive_roots: usize,
    pub weyl_order: usize,
    pub degrees: Vec<usize>,
    pub exponents: Vec<usize>,
    pub identities: LieIdentities,
}

/// Builds every structure for `t` and checks the classical counting identities exactly.
pub fn lie_check(t: CartanType) -> Result<LieReport> {
    let rs = build_root_system(t)?;
    let w = generate_weyl(&rs)?;
    let ex = exponent_data(t)?;
    let roots: HashSet<&Vector> = rs.roots.iter().collect();
    let neg_closed = rs
        .roots
        .iter()
        .all(|r| roots.contains(&r.iter().map(|x| -x).collect::<Vector>()));
    let permutes = w.elements.iter().all(|g| {
        let image: HashSet<Vector> = rs.roots.iter().map(|r| g.apply(r)).collect();
        image.len() == rs.roots.len() && image.iter().all(|r| roots.contains(r))
    });
    let identities = LieIdentities {
        prod_d_eq_w: ex.degrees.iter().product::<usize>() == w.order(),
        sum_m_eq_pos_roots: ex.exponents.iter().sum::<usize>() == rs.positive_roots.len(),
        sum_2m_plus_1_eq_dim: ex.exponents.iter().map(|m| 2 * m + 1).sum::<usize>() == t.dim(),
        roots_eq_dim_minus_rank: rs.roots.len() == t.dim() - t.rank(),
        roots_closed_under_negation: neg_closed && rs.roots.len() == 2 * rs.positive_roots.len(),
        weyl_permutes_roots: permutes,
    };
    Ok(LieReport {
        type_name: t.to_string(),
        rank: t.rank(),
        dim: t.dim(),
        num_roots: rs.roots.len(),
        num_positive_roots: rs.positive_roots.len(),
        weyl_order: w.order(),
        degrees: ex.degrees,
        exponents: ex.exponents,
        identities,
    })
}
