//! Sign patterns of inverse doubly-nonnegative matrices.
//!
//! A real symmetric matrix is *doubly nonnegative* (DN) when it is entrywise
//! nonnegative and positive semidefinite. This crate answers two questions
//! about inverses of invertible, irreducible DN matrices:
//!
//! * which `{+, −}` patterns can occur as the sign pattern of such an inverse
//!   ([`check_feasible`]), with an explicit witness for every feasible pattern
//!   ([`construct_witness`]);
//! * when the graph of the DN matrix is a tree, what the inverse pattern is
//!   ([`predict_tree_sign_pattern`]).
//!
//! The [`oracle`] module cross-checks both with brute-force enumeration and
//! seeded randomized campaigns.
//!
//! ```
//! use dnsign::{check_feasible, construct_witness, cholesky_invert, sign_of, SignMatrix};
//!
//! let s = SignMatrix::from_rows(&["+-+", "-+-", "+-+"]).unwrap();
//! assert!(check_feasible(&s).feasible);
//!
//! let q = construct_witness(&s).unwrap();
//! let a = cholesky_invert(&q).unwrap(); // the DN witness
//! assert!(a.min_entry() > 0.0);
//! assert_eq!(sign_of(&cholesky_invert(&a).unwrap()), s);
//! ```

pub mod densemat;
pub mod error;
pub mod graph;
pub mod oracle;
pub mod rng;
pub mod signpattern;
pub mod textfmt;
pub mod tol;
pub mod treesign;

pub use densemat::{
    cholesky_invert, inversion_residual, matrix_graph, min_eigenvalue, perron_eigenpair,
    verify_doubly_nonnegative, Cholesky, DenseMatrix, DnVerdict, EigenPair, SymMatrix,
};
pub use error::{Error, Result};
pub use graph::{is_connected, Connectivity, UGraph};
pub use oracle::{
    bipartition_crossing_oracle, necessity_campaign, quadratic_form_gap, random_dn_matrix,
    search_nonunique_complete, tree_prediction_campaign, Bipartition, CampaignReport,
};
pub use signpattern::{
    check_feasible, construct_witness, negative_sign_graph, random_feasible_sign_matrix, sign_of,
    FeasibilityReport, Sign, SignMatrix,
};
pub use tol::Tolerances;
pub use treesign::{
    attachment_chain, is_tree, leaf_attach_inverse_update, leaf_ratio_check, odd_distance_predicate,
    predict_tree_sign_pattern, random_tree, random_tree_dn_matrix, two_coloring, AttachmentChain, LeafAttachment,
    TwoColoring,
};

// The guide under `book/` is compiled as doc tests so its snippets stay in
// sync with the API.
#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/feasibility.md")]
    mod feasibility {}
    #[doc = include_str!("../../../book/src/trees.md")]
    mod trees {}
    #[doc = include_str!("../../../book/src/verification.md")]
    mod verification {}
    #[doc = include_str!("../../../book/src/formats.md")]
    mod formats {}
}
