//! Sign matrices, their negative-sign graphs, and the feasibility test for
//! sign patterns of inverse doubly-nonnegative matrices.
//!
//! A sign pattern `S` is the pattern of some `A⁻¹` with `A` doubly
//! nonnegative, invertible and irreducible exactly when `S` is symmetric, its
//! diagonal is all `+`, and the graph of its off-diagonal `−` entries is
//! connected. [`construct_witness`] produces the certificate for the
//! sufficient direction: a strictly diagonally dominant M-matrix `Q` with
//! pattern `S`, whose inverse is the doubly-nonnegative witness.

use std::fmt;

use rand::Rng;
use serde::Serialize;

use crate::densemat::{cholesky_invert, DenseMatrix, SymMatrix};
use crate::error::{Error, Result};
use crate::graph::{is_connected, UGraph};
use crate::rng::seeded;
use crate::tol::Tolerances;

/// Sign alphabet. Zero is classified as `Plus`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn as_char(self) -> char {
        match self {
            Sign::Plus => '+',
            Sign::Minus => '-',
        }
    }

    pub fn from_char(c: char) -> Option<Self> {
        match c {
            '+' => Some(Sign::Plus),
            '-' => Some(Sign::Minus),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SignMatrix {
    n: usize,
    signs: Vec<Sign>,
}

impl SignMatrix {
    pub fn new(n: usize, signs: Vec<Sign>) -> Result<Self> {
        if signs.len() != n * n {
            return Err(Error::DimensionMismatch {
                expected: n * n,
                found: signs.len(),
            });
        }
        Ok(Self { n, signs })
    }

    /// Builds a sign matrix from rows such as `"+-+"`.
    pub fn from_rows<S: AsRef<str>>(rows: &[S]) -> Result<Self> {
        let n = rows.len();
        let mut signs = Vec::with_capacity(n * n);
        for (i, row) in rows.iter().enumerate() {
            let row = row.as_ref();
            let before = signs.len();
            for c in row.chars() {
                signs.push(Sign::from_char(c).ok_or_else(|| Error::Parse {
                    line: i + 1,
                    message: format!("unexpected character {c:?}"),
                })?);
            }
            if signs.len() - before != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: signs.len() - before,
                });
            }
        }
        Self::new(n, signs)
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> Sign) -> Self {
        let signs = (0..n * n).map(|k| f(k / n, k % n)).collect();
        Self { n, signs }
    }

    pub fn all_plus(n: usize) -> Self {
        Self::from_fn(n, |_, _| Sign::Plus)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Sign {
        self.signs[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, s: Sign) {
        self.signs[i * self.n + j] = s;
    }

    /// First `(i, j)` with `i < j` and `s_ij != s_ji`.
    pub fn first_asymmetry(&self) -> Option<(usize, usize)> {
        (0..self.n)
            .flat_map(|i| (i + 1..self.n).map(move |j| (i, j)))
            .find(|&(i, j)| self.get(i, j) != self.get(j, i))
    }

    pub fn is_symmetric(&self) -> bool {
        self.first_asymmetry().is_none()
    }

    pub fn diagonal_all_plus(&self) -> bool {
        (0..self.n).all(|i| self.get(i, i) == Sign::Plus)
    }

    pub fn count(&self, s: Sign) -> usize {
        self.signs.iter().filter(|&&x| x == s).count()
    }

    /// Positions `(i, j)` where the two matrices differ.
    pub fn diff(&self, other: &SignMatrix) -> Vec<(usize, usize)> {
        assert_eq!(self.n, other.n);
        (0..self.n * self.n)
            .filter(|&k| self.signs[k] != other.signs[k])
            .map(|k| (k / self.n, k % self.n))
            .collect()
    }
}

impl fmt::Display for SignMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.n {
            let row: String = (0..self.n).map(|j| self.get(i, j).as_char()).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

/// Sign pattern together with the entries whose sign is numerically uncertain.
#[derive(Debug, Clone, PartialEq)]
pub struct SignReading {
    pub signs: SignMatrix,
    /// Entries with `|q_ij| <= tol_zero`; classified `Plus`.
    pub ambiguous: Vec<(usize, usize)>,
}

pub fn sign_of(q: &SymMatrix) -> SignMatrix {
    sign_of_with(q, &Tolerances::default())
}

pub fn sign_of_with(q: &SymMatrix, tol: &Tolerances) -> SignMatrix {
    sign_of_report(q, tol).signs
}

pub fn sign_of_report(q: &SymMatrix, tol: &Tolerances) -> SignReading {
    classify(q.n(), q.as_slice(), tol.zero_abs(q.max_abs()))
}

/// Sign pattern of a general square matrix.
pub fn sign_of_dense(q: &DenseMatrix, tol: &Tolerances) -> SignReading {
    classify(q.n(), q.as_slice(), tol.zero_abs(q.max_abs()))
}

fn classify(n: usize, data: &[f64], zero: f64) -> SignReading {
    let mut ambiguous = Vec::new();
    let signs = data
        .iter()
        .enumerate()
        .map(|(k, &x)| {
            if x.abs() <= zero {
                ambiguous.push((k / n, k % n));
            }
            if x < -zero {
                Sign::Minus
            } else {
                Sign::Plus
            }
        })
        .collect();
    SignReading {
        signs: SignMatrix { n, signs },
        ambiguous,
    }
}

/// Graph on `0..n` with an edge wherever an off-diagonal sign is `Minus`.
pub fn negative_sign_graph(s: &SignMatrix) -> Result<UGraph> {
    if let Some((row, col)) = s.first_asymmetry() {
        return Err(Error::AsymmetricSignMatrix { row, col });
    }
    Ok(minus_union_graph(s))
}

fn minus_union_graph(s: &SignMatrix) -> UGraph {
    let mut g = UGraph::new(s.n);
    for i in 0..s.n {
        for j in i + 1..s.n {
            if s.get(i, j) == Sign::Minus || s.get(j, i) == Sign::Minus {
                g.add_edge(i, j).expect("indices in range");
            }
        }
    }
    g
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FeasibilityReport {
    pub feasible: bool,
    pub symmetric_ok: bool,
    pub diagonal_ok: bool,
    pub delta_connected: bool,
    /// Components of the negative-sign graph (zero-based vertices).
    pub delta_components: Vec<Vec<usize>>,
}

/// Evaluates symmetry, the all-`+` diagonal and connectivity of the
/// negative-sign graph. For an asymmetric `S` the graph takes an edge
/// wherever either of `s_ij`, `s_ji` is `Minus`.
pub fn check_feasible(s: &SignMatrix) -> FeasibilityReport {
    let symmetric_ok = s.is_symmetric();
    let diagonal_ok = s.diagonal_all_plus();
    let conn = is_connected(&minus_union_graph(s));
    FeasibilityReport {
        feasible: symmetric_ok && diagonal_ok && conn.connected,
        symmetric_ok,
        diagonal_ok,
        delta_connected: conn.connected,
        delta_components: conn.components,
    }
}

/// The M-matrix `Q` with `q_ii = n`, `q_ij = −1` on `Minus` and `0` on
/// `Plus`. Its inverse is a doubly-nonnegative matrix whose inverse has
/// pattern `s`.
pub fn construct_witness(s: &SignMatrix) -> Result<SymMatrix> {
    if !check_feasible(s).feasible {
        return Err(Error::InfeasiblePattern);
    }
    let n = s.n as f64;
    Ok(SymMatrix::from_fn(s.n, |i, j| {
        if i == j {
            n
        } else if s.get(i, j) == Sign::Minus {
            -1.0
        } else {
            0.0
        }
    }))
}

/// `construct_witness(s)⁻¹`, the doubly-nonnegative witness itself.
pub fn witness_dn_matrix(s: &SignMatrix) -> Result<SymMatrix> {
    cholesky_invert(&construct_witness(s)?)
}

/// Random feasible pattern: a uniform random spanning tree of `K_n` is
/// forced to `Minus`, every other off-diagonal pair is `Minus` with
/// probability 1/2.
pub fn random_feasible_sign_matrix(n: usize, seed: u64) -> SignMatrix {
    let mut rng = seeded(seed);
    let tree = UGraph::random_labeled_tree(n, &mut rng);
    let mut s = SignMatrix::all_plus(n);
    for i in 0..n {
        for j in i + 1..n {
            let minus = tree.has_edge(i, j) || rng.gen_bool(0.5);
            if minus {
                s.set(i, j, Sign::Minus);
                s.set(j, i, Sign::Minus);
            }
        }
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densemat::verify_doubly_nonnegative;

    fn two_component_pattern() -> SignMatrix {
        SignMatrix::from_rows(&["+-++", "-+++", "+++-", "++-+"]).unwrap()
    }

    #[test]
    fn zero_matrix_is_all_plus() {
        let z = SymMatrix::from_fn(2, |_, _| 0.0);
        assert_eq!(sign_of(&z), SignMatrix::all_plus(2));
        assert_eq!(sign_of_report(&z, &Tolerances::default()).ambiguous.len(), 4);
    }

    #[test]
    fn sign_of_examples() {
        let q = SymMatrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]]).unwrap();
        assert_eq!(sign_of(&q), SignMatrix::from_rows(&["+-", "-+"]).unwrap());
        let inv = SymMatrix::from_rows(&[
            vec![3.0, -2.0, 1.0],
            vec![-2.0, 4.0, -2.0],
            vec![1.0, -2.0, 3.0],
        ])
        .unwrap()
        .scaled(0.25);
        assert_eq!(sign_of(&inv), SignMatrix::from_rows(&["+-+", "-+-", "+-+"]).unwrap());
    }

    #[test]
    fn negative_sign_graph_examples() {
        assert_eq!(negative_sign_graph(&two_component_pattern()).unwrap().edges(), vec![(0, 1), (2, 3)]);
        assert_eq!(negative_sign_graph(&SignMatrix::all_plus(3)).unwrap().edge_count(), 0);
        let pair = SignMatrix::from_rows(&["+-", "-+"]).unwrap();
        assert_eq!(negative_sign_graph(&pair).unwrap().edges(), vec![(0, 1)]);
    }

    #[test]
    fn negative_sign_graph_rejects_asymmetry() {
        let s = SignMatrix::from_rows(&["+-", "++"]).unwrap();
        assert_eq!(
            negative_sign_graph(&s),
            Err(Error::AsymmetricSignMatrix { row: 0, col: 1 })
        );
    }

    #[test]
    fn feasibility_examples() {
        let r = check_feasible(&two_component_pattern());
        assert!(!r.feasible && r.symmetric_ok && r.diagonal_ok && !r.delta_connected);
        assert_eq!(r.delta_components, vec![vec![0, 1], vec![2, 3]]);

        assert!(check_feasible(&SignMatrix::from_rows(&["+-", "-+"]).unwrap()).feasible);
        assert!(!check_feasible(&SignMatrix::all_plus(3)).feasible);
        assert!(check_feasible(&SignMatrix::all_plus(1)).feasible);

        let bad_diag = SignMatrix::from_rows(&["--", "-+"]).unwrap();
        let r = check_feasible(&bad_diag);
        assert!(!r.feasible && !r.diagonal_ok && r.delta_connected);

        let asym = SignMatrix::from_rows(&["+-", "++"]).unwrap();
        let r = check_feasible(&asym);
        assert!(!r.feasible && !r.symmetric_ok);
    }

    #[test]
    fn witness_two_by_two() {
        let s = SignMatrix::from_rows(&["+-", "-+"]).unwrap();
        let q = construct_witness(&s).unwrap();
        assert_eq!(q, SymMatrix::from_rows(&[vec![2.0, -1.0], vec![-1.0, 2.0]]).unwrap());
        let a = witness_dn_matrix(&s).unwrap();
        let expected = SymMatrix::from_rows(&[vec![2.0, 1.0], vec![1.0, 2.0]])
            .unwrap()
            .scaled(1.0 / 3.0);
        assert!(a.max_abs_diff(&expected) < 1e-15);
        assert!(verify_doubly_nonnegative(&a).passes());
        assert!(a.min_entry() > 0.0);
    }

    #[test]
    fn witness_path_pattern() {
        let s = SignMatrix::from_rows(&["+-+", "-+-", "+-+"]).unwrap();
        let q = construct_witness(&s).unwrap();
        let expected = SymMatrix::from_rows(&[
            vec![3.0, -1.0, 0.0],
            vec![-1.0, 3.0, -1.0],
            vec![0.0, -1.0, 3.0],
        ])
        .unwrap();
        assert_eq!(q, expected);
    }

    #[test]
    fn witness_rejects_infeasible() {
        assert_eq!(construct_witness(&two_component_pattern()), Err(Error::InfeasiblePattern));
    }

    #[test]
    fn witness_for_single_vertex() {
        let q = construct_witness(&SignMatrix::all_plus(1)).unwrap();
        assert_eq!(q.get(0, 0), 1.0);
    }

    #[test]
    fn random_feasible_patterns() {
        for seed in 0..20 {
            assert_eq!(
                random_feasible_sign_matrix(2, seed),
                SignMatrix::from_rows(&["+-", "-+"]).unwrap()
            );
        }
        assert!(check_feasible(&random_feasible_sign_matrix(5, 3)).feasible);
        assert_eq!(random_feasible_sign_matrix(1, 9), SignMatrix::all_plus(1));
        assert_eq!(random_feasible_sign_matrix(7, 4), random_feasible_sign_matrix(7, 4));
    }

    #[test]
    fn display_round_trips_through_rows() {
        let s = two_component_pattern();
        let text = s.to_string();
        let rows: Vec<&str> = text.lines().collect();
        assert_eq!(SignMatrix::from_rows(&rows).unwrap(), s);
    }
}
