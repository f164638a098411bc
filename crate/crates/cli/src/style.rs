use std::io::IsTerminal;

/// ANSI styling for terminals; off when piped or `REFCLASS_NO_COLOR` is set.
pub struct Style {
    enabled: bool,
}

impl Style {
    pub fn stdout() -> Self {
        Style {
            enabled: std::io::stdout().is_terminal()
                && std::env::var_os("REFCLASS_NO_COLOR").is_none(),
        }
    }

    fn paint(&self, code: &str, text: &str) -> String {
        if self.enabled {
            format!("\x1b[{code}m{text}\x1b[0m")
        } else {
            text.to_string()
        }
    }

    pub fn good(&self, text: &str) -> String {
        self.paint("32", text)
    }

    pub fn bad(&self, text: &str) -> String {
        self.paint("31", text)
    }

    pub fn dim(&self, text: &str) -> String {
        self.paint("2", text)
    }
}
