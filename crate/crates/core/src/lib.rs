//! Bijections between plane maps of prescribed girth and mobiles.
//!
//! The crate covers the combinatorial map toolkit ([`map`]), the canonical
//! orientations ([`orientation`]), mobiles ([`mobile`]), the master bijection
//! and its inverse ([`bijection`]), exact counting series ([`series`]) and a
//! brute-force enumeration oracle ([`oracle`]). The [`verify`] module runs the
//! cross-checks between all of them.

pub mod map;
pub mod bijection;
pub mod mobile;
pub mod oracle;
pub mod orientation;
pub mod series;
pub mod verify;
