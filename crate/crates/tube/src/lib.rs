//! Reconstruction of distances in model CAT(0) spaces from a unit-distance oracle.
//!
//! The only primitive the reconstruction uses is "is `d(x, y) ≤ 1`", plus
//! knowledge of which point sets are geodesic. Everything else is rebuilt
//! from sequences of unit steps, horoballs, flat strips and parallel
//! transport around rank-one axes.
//!
//! ```
//! use tube::flatstrip::reconstruct_flat;
//! use tube::model_spaces::{ModelSpace, NumericMode, Point};
//! use tube::oracle::{GeodesicWitnesses, OracleSession};
//! use tube::scalar::Scalar;
//!
//! let sp = ModelSpace::euclidean(NumericMode::ExactRational);
//! let c = sp.geodesic_through(&Point::xy_q(0, 0, 1), &Point::xy_q(3, 4, 5)).unwrap().complete();
//! let mut session = OracleSession::new(sp.clone());
//! let mut w = GeodesicWitnesses::new(1);
//! let est = reconstruct_flat(&mut session, &c, &Scalar::int(0), &Scalar::ratio(7, 3), 1e-6, &mut w).unwrap();
//! assert_eq!(est.exact.as_deref(), Some("7/3"));
//! assert!(session.counts().total > 0);
//! ```

pub mod batch;
pub mod exact;
pub mod flatstrip;
pub mod horo;
pub mod model_spaces;
pub mod oracle;
pub mod properties;
pub mod rankone;
pub mod scalar;
pub mod sequences;
