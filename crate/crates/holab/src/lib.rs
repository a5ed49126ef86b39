//! Numerical differential geometry of submanifolds of complex space forms.
//!
//! The crate evaluates parametric immersions into Cⁿ, CPⁿ and CHⁿ, builds
//! adapted frames, second fundamental forms and normal connections, runs
//! parallel transport along parameter curves, estimates the Lie algebra of
//! the restricted normal holonomy group, and packages a set of executable
//! geometric checks (CR classification consequences, lift identities of the
//! Hopf fibration, holonomy identification, reduction of codimension,
//! splitting of the normal bundle, and the complex-nullity identity).
//!
//! Geometry on the curved models is computed on the Hopf pull-back: the
//! circle bundle over the submanifold inside the sphere S^{2n+1} or the
//! anti-de-Sitter space H^{n+1}_1, where the ambient space is a real space
//! form and every curvature quantity is algebraic. See the book under
//! `book/` for a guided tour.

pub mod ambient;
pub mod catalog;
pub mod crtype;
pub mod error;
pub mod hopf;
pub mod holonomy;
pub mod immersion;
pub mod linalg;
pub mod sampled;
pub mod scalar;
pub mod submanifold;
pub mod tol;
pub mod verify;

pub use ambient::{AmbientSpace, SpaceForm, TotalSpacePoint};
pub use error::{Error, Result};
pub use immersion::{Chart, CoordMap, Immersion, JetData, JetMode, SmoothFn};

#[cfg(doctest)]
mod book_doctests {
    //! Every code block in the book is compiled and run by `cargo test`.
    macro_rules! chapter {
        ($name:ident, $path:literal) => {
            #[doc = include_str!($path)]
            mod $name {}
        };
    }
    chapter!(introduction, "../../../book/src/introduction.md");
    chapter!(spaces, "../../../book/src/spaces.md");
    chapter!(immersions, "../../../book/src/immersions.md");
    chapter!(hopf, "../../../book/src/hopf.md");
    chapter!(fundamental, "../../../book/src/fundamental.md");
    chapter!(classification, "../../../book/src/classification.md");
    chapter!(transport, "../../../book/src/transport.md");
    chapter!(holonomy, "../../../book/src/holonomy.md");
    chapter!(checks, "../../../book/src/checks.md");
    chapter!(catalog, "../../../book/src/catalog.md");
}
