//! `key = value` configuration files.
//!
//! One setting per line. `#` starts a comment line; blank lines are skipped.
//! Keys are long flag names without the leading dashes; whitespace around
//! key and value is trimmed. `true` enables a switch, `false` leaves it off.
//! Settings are placed before the command-line flags, so flags win.

/// Converts file contents to flag arguments.
pub fn to_args(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for (no, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| format!("line {}: expected key = value", no + 1))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.starts_with('-') || key.contains(char::is_whitespace) {
            return Err(format!("line {}: bad key '{key}'", no + 1));
        }
        match value {
            "true" => out.push(format!("--{key}")),
            "false" => {}
            _ => out.push(format!("--{key}={value}")),
        }
    }
    Ok(out)
}
