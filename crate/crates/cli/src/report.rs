//! Report rendering.
//!
//! CSV reports start with a `#` provenance line (tool, version, command,
//! seed) and a `# config:` line holding the parameters as JSON, then the
//! per-row table, then one `# summary:` line per summary field. JSON
//! reports carry the same content as a single object.

use serde::Serialize;
use serde_json::Value;

use crate::args::Format;
use crate::Failure;

pub const TOOL: &str = "qsearch";
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct Report<R, S> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: u64,
    pub config: Value,
    pub rows: Vec<R>,
    pub summary: S,
}

impl<R: Serialize, S: Serialize> Report<R, S> {
    pub fn new(command: &'static str, seed: u64, config: &impl Serialize, rows: Vec<R>, summary: S) -> Self {
        Self {
            tool: TOOL,
            version: VERSION,
            command,
            seed,
            config: serde_json::to_value(config).unwrap_or(Value::Null),
            rows,
            summary,
        }
    }

    pub fn render(&self, format: Format) -> Result<Vec<u8>, Failure> {
        match format {
            Format::Json => {
                let mut out = serde_json::to_vec_pretty(self)?;
                out.push(b'\n');
                Ok(out)
            }
            Format::Csv => self.render_csv(),
        }
    }

    fn render_csv(&self) -> Result<Vec<u8>, Failure> {
        let mut out = format!(
            "# {} {} command={} seed={}\n# config: {}\n",
            self.tool, self.version, self.command, self.seed, self.config
        )
        .into_bytes();
        {
            let mut w = csv::Writer::from_writer(&mut out);
            for row in &self.rows {
                w.serialize(row)?;
            }
            w.flush()?;
        }
        if let Value::Object(fields) = serde_json::to_value(&self.summary)? {
            for (key, value) in fields {
                out.extend_from_slice(format!("# summary: {key}={value}\n").as_bytes());
            }
        }
        Ok(out)
    }
}
