use std::fs;
use std::path::Path;

const SUBCOMMANDS: [&str; 5] = ["gen", "region", "glm-bench", "theory", "verify"];

/// Parses `key = value` lines into flag tokens. Blank lines and `#` comments
/// are skipped; a value may hold several whitespace-separated items
/// (`range = -5 5`). A key without a value is a switch.
pub fn parse(text: &str) -> Result<Vec<String>, String> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (key, value) = match line.split_once('=') {
            Some((k, v)) => (k.trim(), v.trim()),
            None => (line, ""),
        };
        if key.is_empty() || key.contains(char::is_whitespace) {
            return Err(format!("config line {}: bad key in '{raw}'", i + 1));
        }
        out.push(format!("--{}", key.trim_start_matches("--")));
        out.extend(value.split_whitespace().map(str::to_string));
    }
    Ok(out)
}

/// Value of `--config` in raw arguments, if present.
pub fn find_path(argv: &[String]) -> Option<String> {
    let mut it = argv.iter().skip(1);
    while let Some(a) = it.next() {
        if a == "--" {
            return None;
        }
        if a == "--config" {
            return it.next().cloned();
        }
        if let Some(v) = a.strip_prefix("--config=") {
            return Some(v.to_string());
        }
    }
    None
}

/// Inserts the config file's flags right after the subcommand name so that
/// flags typed on the command line, which come later, take precedence.
pub fn expand(argv: &[String], path: &Path) -> Result<Vec<String>, String> {
    let text =
        fs::read_to_string(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let flags = parse(&text)?;
    let pos = argv
        .iter()
        .skip(1)
        .position(|a| SUBCOMMANDS.contains(&a.as_str()))
        .map(|p| p + 2)
        .ok_or_else(|| "no subcommand given".to_string())?;
    let mut out: Vec<String> = argv[..pos].to_vec();
    out.extend(flags);
    out.extend(argv[pos..].iter().cloned());
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_lists_and_switches() {
        let f = parse("# sweep\nalgo = ppam\nrange = -5 5\n\nfrom-truth\n").unwrap();
        assert_eq!(f, ["--algo", "ppam", "--range", "-5", "5", "--from-truth"]);
    }

    #[test]
    fn finds_path_in_either_form() {
        let argv = |v: &[&str]| v.iter().map(|s| s.to_string()).collect::<Vec<_>>();
        assert_eq!(
            find_path(&argv(&["x", "--config", "a.cfg", "gen"])).as_deref(),
            Some("a.cfg")
        );
        assert_eq!(
            find_path(&argv(&["x", "gen", "--config=b.cfg"])).as_deref(),
            Some("b.cfg")
        );
        assert_eq!(find_path(&argv(&["x", "gen"])), None);
    }

    #[test]
    fn rejects_spaced_keys() {
        assert!(parse("bad key = 1").is_err());
    }
}
