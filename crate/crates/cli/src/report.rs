use serde::Serialize;
use serde_json::Value;

/// Machine-readable record of one invocation.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    /// `null` unless `--timing` is given, so reports are reproducible.
    pub timing_ms: Option<f64>,
    pub seed: u64,
}

/// What a command produced: its report, a text rendering and an exit code.
pub struct Outcome {
    pub command: String,
    pub inputs: Value,
    pub outputs: Value,
    pub text: String,
    pub exit_code: i32,
}

impl Outcome {
    pub fn new(command: &str, inputs: Value, outputs: Value, text: String) -> Self {
        Outcome {
            command: command.into(),
            inputs,
            outputs,
            text,
            exit_code: 0,
        }
    }

    /// Exit code 2 when `verdict` is false.
    pub fn verdict(mut self, verdict: bool) -> Self {
        self.exit_code = if verdict { 0 } else { 2 };
        self
    }
}

/// Two-column key/value table with aligned keys.
#[derive(Default)]
pub struct Table {
    rows: Vec<(String, String)>,
}

impl Table {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn row(mut self, key: &str, value: impl ToString) -> Self {
        self.rows.push((key.into(), value.to_string()));
        self
    }

    pub fn render(&self) -> String {
        let width = self.rows.iter().map(|(k, _)| k.len()).max().unwrap_or(0);
        let mut out = String::new();
        for (k, v) in &self.rows {
            let mut lines = v.lines();
            out.push_str(&format!("{k:<width$}  {}\n", lines.next().unwrap_or("")));
            for l in lines {
                out.push_str(&format!("{:<width$}  {l}\n", ""));
            }
        }
        out
    }
}

/// `[a, b, c]` with each entry formatted by `f`.
pub fn bracket<T>(items: &[T], f: impl Fn(&T) -> String) -> String {
    format!("[{}]", items.iter().map(f).collect::<Vec<_>>().join(", "))
}

pub fn float(x: &f64) -> String {
    format!("{x:.12}")
}
