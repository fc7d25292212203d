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

use std::fs::File;
use std::io::{self, BufWriter, Write};

use crate::error::{CliError, Result};

/// A text sink opened with the standard header: version, command line and
/// seed.
pub struct Output {
    path: String,
    sink: Box<dyn Write>,
}

pub fn header(command_line: &str, seed: Option<u64>) -> String {
    let seed = seed.map_or_else(|| "none".to_string(), |s| s.to_string());
    format!(
        "# hyperbound {}\n# command: {command_line}\n# seed: {seed}\n",
        env!("CARGO_PKG_VERSION")
    )
}

impl Output {
    /// Standard output when `path` is `None`.
    pub fn open(path: Option<&str>, command_line: &str, seed: Option<u64>) -> Result<Self> {
        let (path, sink): (String, Box<dyn Write>) = match path {
            Some(p) => {
                let f = File::create(p).map_err(|e| CliError::io(p, e))?;
                (p.to_string(), Box::new(BufWriter::new(f)))
            }
            None => (
                "<stdout>".to_string(),
                Box::new(BufWriter::new(io::stdout())),
            ),
        };
        let mut out = Output { path, sink };
        out.write(&header(command_line, seed))?;
        Ok(out)
    }

    pub fn write(&mut self, text: &str) -> Result<()> {
        self.sink
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io(&self.path, e))
    }

    pub fn line(&mut self, text: impl AsRef<str>) -> Result<()> {
        self.write(text.as_ref())?;
        self.write("\n")
    }

    pub fn finish(mut self) -> Result<()> {
        self.sink.flush().map_err(|e| CliError::io(&self.path, e))
    }
}
