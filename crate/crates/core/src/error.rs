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

use core::fmt;

pub type Result<T, E = Error> = core::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq)]
pub enum Error {
    InvalidVertex {
        vertex: usize,
        count: usize,
    },
    Disconnected,
    InvalidParameter(&'static str),
    UnsupportedPresentation(&'static str),
    EmptySphere {
        radius: u32,
    },
    EmptyHorizonCell {
        endpoint: usize,
    },
    /// A boundary measure has an atom of weight at least one half.
    AtomTooHeavy {
        weight: f64,
    },
    NotProbability {
        mass: f64,
    },
    HorizonTooShallow {
        needed: u32,
        available: u32,
    },
    IndexOutOfRange {
        index: usize,
        len: usize,
    },
    RadiusTooLarge {
        requested: u32,
        limit: u32,
    },
    DivergentNormalizer {
        delta: f64,
        growth: f64,
    },
    RayConstruction(&'static str),
    NotIsometry {
        deviation: f64,
    },
    TriangleInequality {
        excess: f64,
    },
}

impl Error {
    /// Short machine-readable code used by the command line `ERR` lines.
    pub fn code(&self) -> &'static str {
        match self {
            Error::InvalidVertex { .. } => "InvalidVertex",
            Error::Disconnected => "Disconnected",
            Error::InvalidParameter(_) => "InvalidParameter",
            Error::UnsupportedPresentation(_) => "UnsupportedPresentation",
            Error::EmptySphere { .. } => "EmptySphere",
            Error::EmptyHorizonCell { .. } => "EmptyHorizonCell",
            Error::AtomTooHeavy { .. } => "AtomTooHeavy",
            Error::NotProbability { .. } => "NotProbability",
            Error::HorizonTooShallow { .. } => "HorizonTooShallow",
            Error::IndexOutOfRange { .. } => "IndexOutOfRange",
            Error::RadiusTooLarge { .. } => "RadiusTooLarge",
            Error::DivergentNormalizer { .. } => "DivergentNormalizer",
            Error::RayConstruction(_) => "RayConstruction",
            Error::NotIsometry { .. } => "NotIsometry",
            Error::TriangleInequality { .. } => "TriangleInequality",
        }
    }
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::InvalidVertex { vertex, count } => {
                write!(
                    f,
                    "vertex {vertex} out of range for a graph with {count} vertices"
                )
            }
            Error::Disconnected => f.write_str("graph is not connected"),
            Error::InvalidParameter(what) => write!(f, "invalid parameter: {what}"),
            Error::UnsupportedPresentation(what) => write!(f, "unsupported presentation: {what}"),
            Error::EmptySphere { radius } => write!(f, "sphere of radius {radius} is empty"),
            Error::EmptyHorizonCell { endpoint } => {
                write!(
                    f,
                    "horizon cell of the point ending at vertex {endpoint} is empty"
                )
            }
            Error::AtomTooHeavy { weight } => {
                write!(f, "measure has an atom of weight {weight} >= 1/2")
            }
            Error::NotProbability { mass } => {
                write!(f, "expected a probability measure, mass is {mass}")
            }
            Error::HorizonTooShallow { needed, available } => {
                write!(
                    f,
                    "horizon too shallow: need radius {needed}, have {available}"
                )
            }
            Error::IndexOutOfRange { index, len } => {
                write!(f, "index {index} out of range 0..{len}")
            }
            Error::RadiusTooLarge { requested, limit } => {
                write!(f, "radius {requested} exceeds the admissible limit {limit}")
            }
            Error::DivergentNormalizer { delta, growth } => {
                write!(
                    f,
                    "exponent {delta} does not exceed the growth rate {growth}"
                )
            }
            Error::RayConstruction(what) => write!(f, "cannot construct ray: {what}"),
            Error::NotIsometry { deviation } => {
                write!(
                    f,
                    "map is not an isometry of the base (deviation {deviation})"
                )
            }
            Error::TriangleInequality { excess } => {
                write!(
                    f,
                    "base distances violate the triangle inequality by {excess}"
                )
            }
        }
    }
}

impl core::error::Error for Error {}
