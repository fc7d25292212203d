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

use std::io;

use thiserror::Error;

/// Failures of the command-line front end.
#[derive(Debug, Error)]
pub enum CliError {
    /// Malformed arguments or input files.
    #[error("{0}")]
    Parse(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    /// A precondition of a library routine.
    #[error(transparent)]
    Core(#[from] hyperbound::Error),
}

impl CliError {
    pub fn parse(msg: impl Into<String>) -> Self {
        CliError::Parse(msg.into())
    }

    pub fn io(path: impl Into<String>, source: io::Error) -> Self {
        CliError::Io {
            path: path.into(),
            source,
        }
    }

    /// `1` for parse and IO failures, `2` for library preconditions.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Parse(_) | CliError::Io { .. } => 1,
            CliError::Core(_) => 2,
        }
    }

    /// The `ERR <code> <detail>` line for library preconditions.
    pub fn err_line(&self) -> Option<String> {
        match self {
            CliError::Core(e) => Some(format!("ERR {} {}", e.code(), e)),
            _ => None,
        }
    }
}

pub type Result<T, E = CliError> = std::result::Result<T, E>;
