use std::fs;
use std::io::Write;
use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use hyperalg_core::graph::{GraphError, Semantics};
use hyperalg_core::hypermatrix::{AnyHypermatrix, HmxError};
use hyperalg_core::power::Formulation;
use hyperalg_core::product::Convention;
use hyperalg_core::scalar::{Backend, Modulus};
use serde::Serialize;
use serde_json::json;

use crate::args::{BackendChoice, Global};

/// Settings shared by every command; embedded in every JSON record.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    /// Requested backend; `auto` is resolved per input.
    pub backend: String,
    pub prime: u64,
    pub convention: Convention,
    pub semantics: Semantics,
    pub formulation: Formulation,
    pub seed: u64,
    pub output: String,
    #[serde(skip)]
    pub choice: BackendChoice,
    #[serde(skip)]
    pub modulus: Modulus,
    #[serde(skip)]
    pub out: Option<PathBuf>,
    #[serde(skip)]
    pub timing: bool,
}

impl RunConfig {
    pub fn from_global(g: &Global) -> Result<RunConfig> {
        let modulus = Modulus::new(g.prime).with_context(|| format!("invalid --prime / HYPERALG_PRIME {}", g.prime))?;
        let semantics = if g.paths_only { Semantics::Paths } else { g.semantics };
        Ok(RunConfig {
            backend: match g.backend {
                BackendChoice::Auto => "auto",
                BackendChoice::Exact => "exact",
                BackendChoice::Modp => "modp",
            }
            .to_string(),
            prime: modulus.get(),
            convention: g.convention,
            semantics,
            formulation: g.formulation,
            seed: g.seed,
            output: g
                .out
                .as_ref()
                .map_or_else(|| "stdout".to_string(), |p| p.display().to_string()),
            choice: g.backend,
            modulus,
            out: g.out.clone(),
            timing: g.timing,
        })
    }

    /// Brings a loaded hypermatrix into the requested backend.
    pub fn resolve(&self, h: AnyHypermatrix) -> Result<AnyHypermatrix> {
        Ok(match (self.choice, h) {
            (BackendChoice::Auto, h) => h,
            (BackendChoice::Exact, h @ AnyHypermatrix::Exact(_)) => h,
            (BackendChoice::Exact, AnyHypermatrix::ModP(_)) => {
                bail!("--backend exact given for a mod-p input")
            }
            (BackendChoice::Modp, h) => AnyHypermatrix::ModP(h.into_modp(self.modulus)?),
        })
    }

    /// Backend for graph computations on `n` vertices.
    pub fn graph_backend(&self, n: usize) -> Backend {
        match self.choice {
            BackendChoice::Auto => hyperalg_core::graph::default_backend(n, self.modulus),
            BackendChoice::Exact => Backend::Exact,
            BackendChoice::Modp => Backend::ModP(self.modulus.get()),
        }
    }

    pub fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(path) => fs::write(path, text).with_context(|| format!("writing {}", path.display())),
            None => {
                let mut stdout = std::io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
                Ok(())
            }
        }
    }
}

/// One JSON line: `{"command": ..., <body fields>, "config": {...}}`.
pub fn record(command: &str, body: serde_json::Value, cfg: &RunConfig) -> String {
    let mut obj = serde_json::Map::new();
    obj.insert("command".into(), json!(command));
    if let serde_json::Value::Object(fields) = body {
        obj.extend(fields);
    }
    obj.insert("config".into(), serde_json::to_value(cfg).expect("config serializes"));
    let mut line = serde_json::Value::Object(obj).to_string();
    line.push('\n');
    line
}

fn kind(err: &anyhow::Error) -> &'static str {
    for cause in err.chain() {
        if cause.is::<HmxError>() {
            return "hmx";
        }
        if cause.is::<GraphError>() {
            return "graph";
        }
        if cause.is::<std::io::Error>() {
            return "io";
        }
    }
    "operation"
}

/// Machine-parsable single-line error report for stderr.
pub fn error_record(command: &str, err: &anyhow::Error) -> String {
    json!({
        "error": {
            "command": command,
            "kind": kind(err),
            "message": format!("{err:#}"),
        }
    })
    .to_string()
}
