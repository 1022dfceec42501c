use std::fmt;

/// A failure reported by the command-line layer.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliError {
    /// Machine-readable category, printed as `error.kind=`.
    pub kind: &'static str,
    /// 1-based line in the instance file, when known.
    pub line: Option<usize>,
    pub message: String,
}

pub const EXIT_OK: i32 = 0;
pub const EXIT_ASSERTION: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

impl CliError {
    pub fn new(kind: &'static str, message: impl Into<String>) -> Self {
        Self {
            kind,
            line: None,
            message: message.into(),
        }
    }

    pub fn at_line(mut self, line: usize) -> Self {
        self.line.get_or_insert(line);
        self
    }

    pub fn exit_code(&self) -> i32 {
        match self.kind {
            "budget" => EXIT_BUDGET,
            "assertion" => EXIT_ASSERTION,
            _ => EXIT_INVALID,
        }
    }

    /// `error.kind=`, optional `error.line=`, then `error.message=`.
    pub fn lines(&self) -> Vec<String> {
        let mut out = vec![format!("error.kind={}", self.kind)];
        if let Some(l) = self.line {
            out.push(format!("error.line={l}"));
        }
        out.push(format!("error.message={}", self.message));
        out
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for CliError {}

impl From<wittbox_core::Error> for CliError {
    fn from(e: wittbox_core::Error) -> Self {
        CliError::new(e.kind(), e.to_string())
    }
}
