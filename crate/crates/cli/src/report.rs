use serde::Serialize;
use serde_json::Value;

use crate::config::Scenario;
use crate::CliError;

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

/// What a subcommand produced: a summary, named checks and artifact files.
#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub command: String,
    pub flux: String,
    pub seed: u64,
    pub summary: Value,
    pub checks: Vec<Check>,
    #[serde(skip)]
    pub artifacts: Vec<(String, String)>,
}

impl Report {
    pub fn new(command: &str, sc: &Scenario) -> Self {
        Self {
            command: command.to_string(),
            flux: sc.flux.to_string(),
            seed: sc.seed,
            summary: Value::Null,
            checks: Vec::new(),
            artifacts: Vec::new(),
        }
    }

    pub fn check(&mut self, name: &str, passed: bool, detail: impl Into<String>) {
        self.checks.push(Check { name: name.to_string(), passed, detail: detail.into() });
    }

    /// A CSV artifact with a `#` header line naming the run.
    pub fn csv(&mut self, file: &str, body: String) {
        let header = format!("# conlaw {} flux={} seed={}\n", self.command, self.flux, self.seed);
        self.artifacts.push((file.to_string(), header + &body));
    }

    pub fn json(&mut self, file: &str, value: &impl Serialize) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(value).map_err(|e| CliError::Config(e.to_string()))?;
        self.artifacts.push((file.to_string(), text + "\n"));
        Ok(())
    }

    pub fn text(&mut self, file: &str, body: String) {
        self.artifacts.push((file.to_string(), body));
    }

    /// Prints the report and writes artifacts plus `report.json` to the output directory.
    pub fn emit(&self, sc: &Scenario) -> Result<(), CliError> {
        let text = serde_json::to_string_pretty(self).map_err(|e| CliError::Config(e.to_string()))? + "\n";
        print!("{text}");
        if let Some(dir) = &sc.out_dir {
            std::fs::create_dir_all(dir)?;
            for (name, body) in &self.artifacts {
                std::fs::write(dir.join(name), body)?;
            }
            std::fs::write(dir.join("report.json"), text)?;
        }
        Ok(())
    }
}
