//! Inverse sign patterns of doubly-nonnegative matrices whose graph is a tree.
//!
//! If the graph of `A` is a tree, the sign of `(A⁻¹)_ij` is fixed by the tree
//! alone: negative when `i` and `j` get different colors in the two-coloring
//! of the tree (equivalently, when their distance is odd), nonnegative
//! otherwise. The induction behind this attaches one leaf at a time and
//! updates the inverse with a block formula; [`leaf_attach_inverse_update`]
//! implements that step and [`leaf_ratio_check`] checks its consequence for
//! leaf columns.

use rand::Rng;
use serde::Serialize;

use crate::densemat::SymMatrix;
use crate::error::{Error, Result};
use crate::graph::{is_connected, UGraph};
use crate::rng::seeded;
use crate::signpattern::{Sign, SignMatrix};
use crate::tol::Tolerances;

/// True iff `g` is connected with `n − 1` edges.
pub fn is_tree(g: &UGraph) -> bool {
    g.n() >= 1 && g.edge_count() == g.n() - 1 && is_connected(g).connected
}

/// Proper two-coloring with vertex `0` colored `0`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TwoColoring {
    colors: Vec<u8>,
}

impl TwoColoring {
    pub fn color(&self, v: usize) -> u8 {
        self.colors[v]
    }

    pub fn colors(&self) -> &[u8] {
        &self.colors
    }

    pub fn differ(&self, i: usize, j: usize) -> bool {
        self.colors[i] != self.colors[j]
    }

    /// The other member of the color-swap class. Not canonical.
    pub fn swapped(&self) -> Self {
        Self {
            colors: self.colors.iter().map(|c| 1 - c).collect(),
        }
    }
}

/// Breadth-first layering of a tree: even layers get color 0.
pub fn two_coloring(g: &UGraph) -> Result<TwoColoring> {
    if !is_tree(g) {
        return Err(Error::NotATree);
    }
    let colors = g
        .bfs_distances(0)
        .into_iter()
        .map(|d| (d.expect("trees are connected") % 2) as u8)
        .collect();
    Ok(TwoColoring { colors })
}

/// Sign pattern determined by a coloring: `+` on the diagonal and between
/// equal colors, `−` between different colors.
pub fn pattern_from_coloring(coloring: &TwoColoring) -> SignMatrix {
    SignMatrix::from_fn(coloring.colors.len(), |i, j| {
        if coloring.differ(i, j) {
            Sign::Minus
        } else {
            Sign::Plus
        }
    })
}

pub fn predict_tree_sign_pattern(g: &UGraph) -> Result<SignMatrix> {
    Ok(pattern_from_coloring(&two_coloring(g)?))
}

/// Whether the tree distance between `i` and `j` is odd.
pub fn odd_distance_predicate(g: &UGraph, i: usize, j: usize) -> Result<bool> {
    if !is_tree(g) {
        return Err(Error::NotATree);
    }
    let d = g.bfs_distances(i)[j].expect("trees are connected");
    Ok(d % 2 == 1)
}

/// Attaching a new leaf to vertex `attach_vertex` of the tree matrix `base`:
///
/// ```text
/// A_next = [ base        c·e_i ]
///          [ c·e_iᵀ      d     ]
/// ```
#[derive(Debug, Clone, PartialEq)]
pub struct LeafAttachment {
    pub base: SymMatrix,
    pub attach_vertex: usize,
    pub edge_weight: f64,
    pub new_diagonal: f64,
}

impl LeafAttachment {
    pub fn new(base: SymMatrix, attach_vertex: usize, edge_weight: f64, new_diagonal: f64) -> Result<Self> {
        if attach_vertex >= base.n() {
            return Err(Error::InvalidArgument(format!(
                "attach vertex {attach_vertex} out of range for dimension {}",
                base.n()
            )));
        }
        if !(edge_weight > 0.0 && new_diagonal > 0.0) {
            return Err(Error::InvalidArgument(
                "edge weight and new diagonal must be positive".into(),
            ));
        }
        Ok(Self {
            base,
            attach_vertex,
            edge_weight,
            new_diagonal,
        })
    }

    /// The bordered matrix `A_next`; the leaf is the last index.
    pub fn assemble(&self) -> SymMatrix {
        let k = self.base.n();
        SymMatrix::from_fn(k + 1, |i, j| match (i == k, j == k) {
            (false, false) => self.base.get(i, j),
            (true, true) => self.new_diagonal,
            (false, true) if i == self.attach_vertex => self.edge_weight,
            _ => 0.0,
        })
    }
}

/// Inverse of the bordered matrix from the inverse of its base.
///
/// With `c`, `d`, `i` from the attachment and `T = (A − (c²/d)·e_i·e_iᵀ)⁻¹`:
///
/// ```text
/// A_next⁻¹ = [ T               −(c/d)·T·e_i          ]
///            [ −(c/d)·e_iᵀ·T    1/d + (c/d)²·T_ii    ]
/// ```
///
/// `T` comes from `prev_inverse` by a Sherman–Morrison rank-one update.
pub fn leaf_attach_inverse_update(prev_inverse: &SymMatrix, att: &LeafAttachment) -> Result<SymMatrix> {
    let k = att.base.n();
    if prev_inverse.n() != k {
        return Err(Error::DimensionMismatch {
            expected: k,
            found: prev_inverse.n(),
        });
    }
    let i = att.attach_vertex;
    let c = att.edge_weight;
    let d = att.new_diagonal;
    let rho = c * c / d;

    // (A − ρ·e_i·e_iᵀ)⁻¹ = P + ρ/(1 − ρ·P_ii) · P·e_i·e_iᵀ·P; the factor must be
    // positive for the deflated base to stay positive definite.
    let factor = 1.0 - rho * prev_inverse.get(i, i);
    if factor <= 1e-12 || factor.is_nan() {
        return Err(Error::SchurNotPositiveDefinite { factor });
    }
    let col: Vec<f64> = (0..k).map(|r| prev_inverse.get(r, i)).collect();
    let gain = rho / factor;
    let top_left = SymMatrix::from_fn(k, |r, s| prev_inverse.get(r, s) + gain * col[r] * col[s]);

    let border: Vec<f64> = (0..k).map(|r| -(c / d) * top_left.get(r, i)).collect();
    let corner = 1.0 / d + (c / d) * (c / d) * top_left.get(i, i);
    Ok(SymMatrix::from_fn(k + 1, |r, s| match (r == k, s == k) {
        (false, false) => top_left.get(r, s),
        (false, true) => border[r],
        (true, true) => corner,
        (true, false) => unreachable!("from_fn visits the upper triangle"),
    }))
}

/// A tree matrix rebuilt one leaf at a time in breadth-first order.
#[derive(Debug, Clone, PartialEq)]
pub struct AttachmentChain {
    /// `order[k]` is the original vertex placed at position `k`.
    pub order: Vec<usize>,
    /// The `1 × 1` starting matrix.
    pub start: SymMatrix,
    /// Step `k` attaches position `k + 1`; its base is the leading
    /// `(k + 1) × (k + 1)` block in the new order.
    pub steps: Vec<LeafAttachment>,
}

impl AttachmentChain {
    /// `a` with rows and columns permuted into chain order.
    pub fn permuted(&self, a: &SymMatrix) -> SymMatrix {
        a.principal_submatrix(&self.order)
    }
}

/// Decomposes a tree matrix into its leaf attachments, rooted at vertex 0.
/// Every base is a leading principal submatrix of the reordered `a`.
pub fn attachment_chain(g: &UGraph, a: &SymMatrix) -> Result<AttachmentChain> {
    if !is_tree(g) {
        return Err(Error::NotATree);
    }
    if a.n() != g.n() {
        return Err(Error::DimensionMismatch {
            expected: g.n(),
            found: a.n(),
        });
    }
    let n = g.n();
    let mut order = vec![0];
    let mut position = vec![usize::MAX; n];
    position[0] = 0;
    let mut parent = vec![usize::MAX; n];
    let mut head = 0;
    while head < order.len() {
        let u = order[head];
        head += 1;
        for v in g.neighbors(u) {
            if position[v] == usize::MAX {
                position[v] = order.len();
                parent[v] = u;
                order.push(v);
            }
        }
    }
    let permuted = a.principal_submatrix(&order);
    let start = permuted.principal_submatrix(&[0]);
    let steps = (1..n)
        .map(|k| {
            let base = permuted.principal_submatrix(&(0..k).collect::<Vec<_>>());
            let p = position[parent[order[k]]];
            LeafAttachment::new(base, p, permuted.get(k, p), permuted.get(k, k))
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(AttachmentChain { order, start, steps })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeafRatio {
    pub leaf: usize,
    pub parent: usize,
    /// Observed ratio `Ainv[j][leaf] / Ainv[j][parent]` on the best-conditioned row.
    pub kappa: Option<f64>,
    /// `−a_{leaf,parent} / a_{leaf,leaf}`, the ratio implied by the block formula.
    pub predicted_kappa: f64,
    pub max_rel_deviation: f64,
    pub checked: usize,
    pub skipped: usize,
    pub ok: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeafRatioReport {
    pub leaves: Vec<LeafRatio>,
}

impl LeafRatioReport {
    pub fn passes(&self) -> bool {
        self.leaves.iter().all(|l| l.ok)
    }

    pub fn violations(&self) -> impl Iterator<Item = &LeafRatio> {
        self.leaves.iter().filter(|l| !l.ok)
    }
}

/// For every leaf `v` with neighbor `p`, checks that column `v` of `ainv` is a
/// single negative multiple of column `p` on all rows outside `{v, p}`.
/// Leaves with no such row (n = 2) are omitted.
pub fn leaf_ratio_check(a: &SymMatrix, ainv: &SymMatrix, g: &UGraph) -> Result<LeafRatioReport> {
    leaf_ratio_check_with(a, ainv, g, &Tolerances::default())
}

pub fn leaf_ratio_check_with(
    a: &SymMatrix,
    ainv: &SymMatrix,
    g: &UGraph,
    tol: &Tolerances,
) -> Result<LeafRatioReport> {
    if !is_tree(g) {
        return Err(Error::NotATree);
    }
    let n = g.n();
    for m in [a.n(), ainv.n()] {
        if m != n {
            return Err(Error::DimensionMismatch { expected: n, found: m });
        }
    }
    let skip_below = 1e3 * tol.zero_abs(ainv.max_abs());
    let mut leaves = Vec::new();
    for v in (0..n).filter(|&v| g.degree(v) == 1) {
        let p = g.neighbors(v).next().expect("leaves have one neighbor");
        let rows: Vec<usize> = (0..n).filter(|&j| j != v && j != p).collect();
        if rows.is_empty() {
            continue;
        }
        let (usable, skipped): (Vec<usize>, Vec<usize>) = rows
            .into_iter()
            .partition(|&j| ainv.get(j, v).abs() >= skip_below || ainv.get(j, p).abs() >= skip_below);
        let anchor = usable
            .iter()
            .copied()
            .max_by(|&x, &y| ainv.get(x, p).abs().total_cmp(&ainv.get(y, p).abs()));
        let kappa = anchor.map(|j| ainv.get(j, v) / ainv.get(j, p));
        let predicted_kappa = -a.get(v, p) / a.get(v, v);
        let max_rel_deviation = match kappa {
            Some(k) => usable
                .iter()
                .map(|&j| (ainv.get(j, v) / ainv.get(j, p) - k).abs() / k.abs())
                .fold(0.0, f64::max),
            None => 0.0,
        };
        let ok = match kappa {
            Some(k) => {
                k < 0.0
                    && max_rel_deviation <= tol.ratio
                    && (k - predicted_kappa).abs() <= tol.ratio * predicted_kappa.abs()
            }
            None => true,
        };
        leaves.push(LeafRatio {
            leaf: v,
            parent: p,
            kappa,
            predicted_kappa,
            max_rel_deviation,
            checked: usable.len(),
            skipped: skipped.len(),
            ok,
        });
    }
    Ok(LeafRatioReport { leaves })
}

/// Uniform random labelled tree on `n` vertices.
pub fn random_tree(n: usize, seed: u64) -> UGraph {
    UGraph::random_labeled_tree(n, &mut seeded(seed))
}

/// Doubly-nonnegative realization of a tree: edge weights uniform in
/// `[0.5, 2.0]`, each diagonal the sum of its incident weights plus a margin
/// uniform in `[0.1, 1.0]`. Strict diagonal dominance makes it positive
/// definite, and the zero pattern is exactly the tree.
pub fn random_tree_dn_matrix(g: &UGraph, seed: u64) -> Result<SymMatrix> {
    if !is_tree(g) {
        return Err(Error::NotATree);
    }
    let n = g.n();
    let mut rng = seeded(seed);
    let mut weights = vec![0.0; n * n];
    let mut diag = vec![0.0; n];
    for (u, v) in g.edges() {
        let w = rng.gen_range(0.5..=2.0);
        weights[u * n + v] = w;
        weights[v * n + u] = w;
        diag[u] += w;
        diag[v] += w;
    }
    for d in diag.iter_mut() {
        *d += rng.gen_range(0.1..=1.0);
    }
    Ok(SymMatrix::from_fn(n, |i, j| if i == j { diag[i] } else { weights[i * n + j] }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::densemat::{cholesky_invert, matrix_graph, verify_doubly_nonnegative};
    use crate::signpattern::sign_of;

    fn sym(rows: &[&[f64]]) -> SymMatrix {
        SymMatrix::from_rows(&rows.iter().map(|r| r.to_vec()).collect::<Vec<_>>()).unwrap()
    }

    fn path3_matrix() -> SymMatrix {
        sym(&[&[2.0, 1.0, 0.0], &[1.0, 2.0, 1.0], &[0.0, 1.0, 2.0]])
    }

    #[test]
    fn tree_detection() {
        assert!(is_tree(&UGraph::path(3)));
        assert!(!is_tree(&UGraph::complete(3)));
        assert!(!is_tree(&UGraph::new(2)));
        assert!(is_tree(&UGraph::new(1)));
    }

    #[test]
    fn colorings() {
        assert_eq!(two_coloring(&UGraph::path(4)).unwrap().colors(), &[0, 1, 0, 1]);
        assert_eq!(two_coloring(&UGraph::star(4)).unwrap().colors(), &[0, 1, 1, 1]);
        assert_eq!(two_coloring(&UGraph::path(2)).unwrap().colors(), &[0, 1]);
        assert_eq!(two_coloring(&UGraph::complete(3)), Err(Error::NotATree));
    }

    #[test]
    fn predictions() {
        assert_eq!(
            predict_tree_sign_pattern(&UGraph::path(2)).unwrap(),
            SignMatrix::from_rows(&["+-", "-+"]).unwrap()
        );
        let p3 = predict_tree_sign_pattern(&UGraph::path(3)).unwrap();
        assert_eq!(p3, SignMatrix::from_rows(&["+-+", "-+-", "+-+"]).unwrap());
        assert_eq!(p3, sign_of(&cholesky_invert(&path3_matrix()).unwrap()));

        let star = predict_tree_sign_pattern(&UGraph::star(4)).unwrap();
        assert_eq!(star, SignMatrix::from_rows(&["+---", "-+++", "-+++", "-+++"]).unwrap());
    }

    #[test]
    fn color_swap_leaves_prediction_unchanged() {
        let c = two_coloring(&UGraph::star(5)).unwrap();
        assert_eq!(pattern_from_coloring(&c), pattern_from_coloring(&c.swapped()));
    }

    #[test]
    fn odd_distances() {
        let p3 = UGraph::path(3);
        assert!(!odd_distance_predicate(&p3, 0, 2).unwrap());
        assert!(odd_distance_predicate(&p3, 0, 1).unwrap());
        assert!(odd_distance_predicate(&UGraph::path(4), 0, 3).unwrap());
        assert_eq!(odd_distance_predicate(&UGraph::complete(3), 0, 1), Err(Error::NotATree));
    }

    #[test]
    fn single_attachment() {
        let base = sym(&[&[2.0]]);
        let att = LeafAttachment::new(base.clone(), 0, 1.0, 2.0).unwrap();
        assert_eq!(att.assemble(), sym(&[&[2.0, 1.0], &[1.0, 2.0]]));
        let inv = leaf_attach_inverse_update(&cholesky_invert(&base).unwrap(), &att).unwrap();
        let expected = sym(&[&[2.0, -1.0], &[-1.0, 2.0]]).scaled(1.0 / 3.0);
        assert!(inv.max_abs_diff(&expected) < 1e-15);
        assert!(inv.get(0, 1) < 0.0);
    }

    #[test]
    fn border_is_negative_multiple_of_attach_column() {
        let base = path3_matrix();
        let att = LeafAttachment::new(base.clone(), 1, 0.7, 3.0).unwrap();
        let inv = leaf_attach_inverse_update(&cholesky_invert(&base).unwrap(), &att).unwrap();
        let scale = -(0.7 / 3.0);
        for r in 0..3 {
            assert!((inv.get(r, 3) - scale * inv.get(r, 1)).abs() < 1e-15);
        }
    }

    #[test]
    fn two_attachments_build_the_path() {
        let a1 = sym(&[&[2.0]]);
        let step1 = LeafAttachment::new(a1.clone(), 0, 1.0, 2.0).unwrap();
        let inv2 = leaf_attach_inverse_update(&cholesky_invert(&a1).unwrap(), &step1).unwrap();
        let step2 = LeafAttachment::new(step1.assemble(), 1, 1.0, 2.0).unwrap();
        let inv3 = leaf_attach_inverse_update(&inv2, &step2).unwrap();
        assert_eq!(step2.assemble(), path3_matrix());
        let direct = cholesky_invert(&path3_matrix()).unwrap();
        assert!(inv3.max_abs_diff(&direct) <= 1e-9 * 3.0);
    }

    #[test]
    fn chain_rebuilds_the_matrix() {
        let g = random_tree(9, 4);
        let a = random_tree_dn_matrix(&g, 4).unwrap();
        let chain = attachment_chain(&g, &a).unwrap();
        assert_eq!(chain.steps.len(), 8);
        let mut inv = cholesky_invert(&chain.start).unwrap();
        let mut current = chain.start.clone();
        for step in &chain.steps {
            assert_eq!(step.base, current);
            inv = leaf_attach_inverse_update(&inv, step).unwrap();
            current = step.assemble();
        }
        let target = chain.permuted(&a);
        assert_eq!(current, target);
        assert!(inv.max_abs_diff(&cholesky_invert(&target).unwrap()) <= 1e-9 * 9.0);
    }

    #[test]
    fn schur_failure_is_reported() {
        let base = sym(&[&[1.0]]);
        // c²/d = 1 deflates the base to zero.
        let att = LeafAttachment::new(base.clone(), 0, 1.0, 1.0).unwrap();
        assert!(matches!(
            leaf_attach_inverse_update(&cholesky_invert(&base).unwrap(), &att),
            Err(Error::SchurNotPositiveDefinite { .. })
        ));
        assert!(LeafAttachment::new(base.clone(), 0, -1.0, 1.0).is_err());
        assert!(LeafAttachment::new(base, 1, 1.0, 1.0).is_err());
    }

    #[test]
    fn leaf_ratio_on_path() {
        let a = path3_matrix();
        let ainv = cholesky_invert(&a).unwrap();
        let report = leaf_ratio_check(&a, &ainv, &UGraph::path(3)).unwrap();
        assert!(report.passes());
        let leaf2 = report.leaves.iter().find(|l| l.leaf == 2).unwrap();
        assert_eq!(leaf2.parent, 1);
        assert!((leaf2.kappa.unwrap() + 0.5).abs() < 1e-14);
        assert_eq!(leaf2.checked, 1);
    }

    #[test]
    fn leaf_ratio_on_star() {
        let g = UGraph::star(5);
        let a = random_tree_dn_matrix(&g, 3).unwrap();
        let report = leaf_ratio_check(&a, &cholesky_invert(&a).unwrap(), &g).unwrap();
        assert_eq!(report.leaves.len(), 4);
        assert!(report.passes(), "{report:?}");
        assert!(report.leaves.iter().all(|l| l.checked == 3));
    }

    #[test]
    fn leaf_ratio_vacuous_for_single_edge() {
        let a = sym(&[&[2.0, 1.0], &[1.0, 2.0]]);
        let report = leaf_ratio_check(&a, &cholesky_invert(&a).unwrap(), &UGraph::path(2)).unwrap();
        assert!(report.leaves.is_empty());
    }

    #[test]
    fn random_trees_small_cases() {
        assert_eq!(random_tree(1, 0).n(), 1);
        assert_eq!(random_tree(2, 0).edges(), vec![(0, 1)]);
        assert!(is_tree(&random_tree(8, 17)));
        assert_eq!(random_tree(30, 5), random_tree(30, 5));
    }

    #[test]
    fn tree_dn_realization() {
        for seed in 0..20 {
            let g = random_tree(12, seed);
            let a = random_tree_dn_matrix(&g, seed).unwrap();
            assert_eq!(matrix_graph(&a), g);
            assert!(verify_doubly_nonnegative(&a).passes());
        }
        let single = random_tree_dn_matrix(&UGraph::path(2), 1).unwrap();
        assert!(single.get(0, 1) >= 0.5 && single.get(0, 1) <= 2.0);
        assert_eq!(random_tree_dn_matrix(&UGraph::complete(3), 0), Err(Error::NotATree));
    }

    #[test]
    fn path_matrix_margins() {
        // Unit weights leave margins (1, 0, 1): the middle row is only weakly
        // dominant, so this sits on the boundary of the generator's family,
        // yet it is still positive definite (eigenvalues 2 ± √2, 2).
        let a = path3_matrix();
        let margins: Vec<f64> = (0..3)
            .map(|i| a.get(i, i) - (0..3).filter(|&j| j != i).map(|j| a.get(i, j)).sum::<f64>())
            .collect();
        assert_eq!(margins, vec![1.0, 0.0, 1.0]);
        assert!(verify_doubly_nonnegative(&a).passes());
        assert!((crate::densemat::min_eigenvalue(&a).unwrap() - (2.0 - 2f64.sqrt())).abs() < 1e-10);
    }
}
