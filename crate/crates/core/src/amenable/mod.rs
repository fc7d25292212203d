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

//! Approximately invariant sequences of measures: Cesàro averages of
//! sandwiched set sequences, the horizon construction of `λ_n(x, γ)`, and
//! Cesàro averages of pre-Patterson measures along geodesic rays.

mod lambda;
mod patterson;
mod sandwich;

pub use lambda::{
    build_lambda_n, lambda_decay_experiment, lambda_sets, DecayRow, LambdaParams, RaySurrogate,
    Site,
};
pub use patterson::{
    cesaro_geodesic_hspace, extend_ray, pre_patterson_graph, pre_patterson_hspace,
    HorocyclicLattice, PrePatterson, TreeDensity, TreeModel, TreeSite,
};
pub use sandwich::{sandwich_bound_holds, sandwich_bound_value, NestedCesaro, SandwichInstance};
