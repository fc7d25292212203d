// Licensed under the Apache License, Version 2.0 (the "License"); you may
// not use this file except in compliance with the License. You may obtain
// a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS, WITHOUT
// WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied. See the
// License for the specific language governing permissions and limitations
// under the License.

//! Finite models of Gromov hyperbolic spaces and their boundaries.
//!
//! A hyperbolic space is truncated to a finite connected graph with a base
//! vertex; boundary points are stood in for by geodesic rays recorded up to
//! a horizon sphere. On top of that model the crate computes
//!
//! * Gromov products and the four-point and Rips hyperbolicity constants
//!   ([`graph`]),
//! * the visual quasi-metric and its inner metric ([`boundary`]),
//! * distance cocycles, boundary quasi-cocycles and the barycenter
//!   functional ([`cocycle`], [`barycenter`]),
//! * growth, temperedness and critical exponent diagnostics ([`growth`]),
//! * approximately invariant measure sequences: sandwiched Cesàro averages,
//!   horizon-ray averages and pre-Patterson averages ([`amenable`]),
//! * interior approximation of boundary measures and atom extraction
//!   ([`approx`]),
//! * the hyperbolization `H(Y)` of a CAT(0) base and CAT(-1) comparison
//!   tests ([`hyperbolize`]).
//!
//! The crate is `no_std` and only needs `alloc`. File formats and the
//! command-line front end live in the `hyperbound-cli` crate.
#![no_std]

extern crate alloc;

#[cfg(test)]
extern crate std;

pub mod amenable;
pub mod approx;
pub mod barycenter;
pub mod boundary;
pub mod cocycle;
mod error;
pub mod graph;
pub mod growth;
mod halfint;
pub mod hyperbolize;
pub mod measure;

pub use error::{Error, Result};
pub use graph::{GeodesicSegment, Graph, Vertex};
pub use halfint::HalfInt;
