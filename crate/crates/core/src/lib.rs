//! Fréchet distance decisions for planar polygonal curves under translation.
//!
//! The fixed-`δ` decision is answered from the free-space skeleton
//! ([`freespace`]). Translation problems are answered by maintaining a
//! fixed-size grid graph ([`grid`]) whose reachability mirrors the free space,
//! updating it event by event as the translation moves ([`sweep`]) and
//! touring the candidate translations of the plane ([`translation`]).

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod backend;
pub mod bench;
pub mod curve;
pub mod error;
pub mod freespace;
pub mod fsg;
pub mod geom;
pub mod grid;
pub mod sweep;
pub mod translation;

pub use curve::{parse_curve, random_curve, BBox, Curve, Translation2};
pub use error::{Error, Result};
pub use freespace::{alt_godau_decide, build_skeleton, frechet_value, FreeSpaceSkeleton};
pub use geom::{Direction2, Point2, Segment2, Tolerance};
