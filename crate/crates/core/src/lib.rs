pub mod acceptance;
pub mod bundle;
pub mod canon;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod kirby;
pub mod network;
pub mod oracle;
pub mod relations;
pub mod rewrite;
pub mod scalar;
pub mod tensor;
pub mod tangle;
pub mod term;
pub mod translate;
pub mod validate;

pub use canon::canonicalize;
pub use error::{Error, Result};
pub use rewrite::{eliminate_antipodes, local_confluence_report, ConfluenceReport, RewriteRule};
pub use scalar::Scalar;
pub use tensor::DenseTensor;
pub use term::{conv_compose, conv_identity, delta_power, term_compose, term_tensor, BraidedTerm, Generator, HopfDiagram, Slice};
pub use bundle::{builtin_bundle, builtin_bundles, bundle_from_abelian_group, resolve_bundle, AbelianParams, CoendBundle, TestModule};
pub use kirby::{invariant_tau, kirby_check, KirbyCandidate, TauResult};
pub use tangle::{StringLinkPresentation, TangleEvent, TangleWord, PureBraidWord, Letter};
pub use translate::{phi, psi0, psi_full, psi_geom, psi_of_tangle, LinkSource};
