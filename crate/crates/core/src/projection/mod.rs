//! PCA, DCA, MDR, RUCA and random projection matrices, and their
//! application to data.

mod angle;
mod config;
mod fit;
mod io;

pub use angle::subspace_angle;
pub use config::{Method, ProjectionConfig};
pub use fit::{fit, fit_dca, fit_mdr, fit_pca, fit_random, fit_ruca, project, ProjectionModel};
pub use io::ModelDocument;
