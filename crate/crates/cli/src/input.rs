//! Parsing of complex numbers, lists, characters and `key=value` config files.

use std::ffi::OsString;
use std::path::Path;

use hecke_moments::characters::{enumerate_characters, Character};
use num_complex::Complex64;

use crate::CliError;

/// Parses `re`, `imi`, `re+imi` or `re-imi` (exponents allowed, e.g. `1e-3-2.5e1i`).
pub fn parse_complex(text: &str) -> Result<Complex64, String> {
    let t: String = text.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || format!("cannot parse complex number {text:?}; expected re+imi");
    if t.is_empty() {
        return Err(bad());
    }
    let Some(body) = t.strip_suffix('i') else {
        return t.parse::<f64>().map(|re| Complex64::new(re, 0.0)).map_err(|_| bad());
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&k| (bytes[k] == b'+' || bytes[k] == b'-') && !matches!(bytes[k - 1], b'e' | b'E'));
    let (re, im) = match split {
        Some(k) => (&body[..k], &body[k..]),
        None => ("0", body),
    };
    let im = match im {
        "" | "+" => "1",
        "-" => "-1",
        other => other,
    };
    let re: f64 = re.parse().map_err(|_| bad())?;
    let im: f64 = im.trim_start_matches('+').parse().map_err(|_| bad())?;
    Ok(Complex64::new(re, im))
}

/// Comma-separated list.
pub fn parse_list<T: std::str::FromStr>(text: &str) -> Result<Vec<T>, String> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<T>().map_err(|_| format!("bad list entry {s:?}")))
        .collect()
}

/// The character with the given exponent vector, or the first primitive character modulo `q`.
pub fn resolve_character(q: u64, exponents: Option<&[u64]>) -> Result<Character, CliError> {
    match exponents {
        Some(e) => Character::from_exponents(q, e).map_err(CliError::from),
        None => enumerate_characters(q)
            .into_iter()
            .find(Character::is_primitive)
            .ok_or_else(|| CliError::Invalid(format!("there is no primitive character modulo {q}"))),
    }
}

/// Turns `key=value` lines into `--key value` arguments. Blank lines and `#` comments are
/// skipped; `true` / `false` toggle flags.
pub fn config_arguments(path: &Path) -> Result<Vec<OsString>, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Invalid(format!("cannot read config {}: {e}", path.display())))?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once('=')
            .ok_or_else(|| CliError::Invalid(format!("{}:{}: expected key=value", path.display(), lineno + 1)))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() || key.starts_with('-') {
            return Err(CliError::Invalid(format!("{}:{}: bad key {key:?}", path.display(), lineno + 1)));
        }
        match value {
            "true" => out.push(format!("--{key}").into()),
            "false" => {}
            _ => {
                out.push(format!("--{key}").into());
                out.push(value.into());
            }
        }
    }
    Ok(out)
}

/// Splices config-file arguments in right after the subcommand name, so that explicit
/// arguments (which come later) take precedence.
pub fn merge_config(args: Vec<OsString>) -> Result<Vec<OsString>, CliError> {
    let mut path = None;
    let mut rest = Vec::with_capacity(args.len());
    let mut iter = args.into_iter();
    while let Some(a) = iter.next() {
        let s = a.to_string_lossy().into_owned();
        if s == "--config" {
            let p = iter.next().ok_or_else(|| CliError::Invalid("--config needs a path".into()))?;
            path = Some(p);
        } else if let Some(p) = s.strip_prefix("--config=") {
            path = Some(p.into());
        } else {
            rest.push(a);
        }
    }
    let Some(path) = path else { return Ok(rest) };
    let extra = config_arguments(Path::new(&path))?;
    // rest[0] is the program name; the subcommand is the first argument not starting with '-'.
    let at = rest.iter().skip(1).position(|a| !a.to_string_lossy().starts_with('-')).map(|k| k + 2);
    let at = at.ok_or_else(|| CliError::Invalid("a config file needs a subcommand".into()))?;
    rest.splice(at..at, extra);
    Ok(rest)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn complex_forms() {
        let cases = [
            ("0.5+3i", (0.5, 3.0)),
            ("2", (2.0, 0.0)),
            ("-1.5-2i", (-1.5, -2.0)),
            ("3i", (0.0, 3.0)),
            ("-i", (0.0, -1.0)),
            ("1e-3+2e1i", (1e-3, 20.0)),
            ("1e+2-1E-1i", (100.0, -0.1)),
            (" 1 + 2i ", (1.0, 2.0)),
        ];
        for (text, (re, im)) in cases {
            assert_eq!(parse_complex(text).unwrap(), Complex64::new(re, im), "{text}");
        }
        for bad in ["", "i1", "1+2j", "abc", "1++2i"] {
            assert!(parse_complex(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn lists() {
        assert_eq!(parse_list::<u64>("101, 211,401").unwrap(), vec![101, 211, 401]);
        assert!(parse_list::<u64>("1,x").is_err());
    }

    #[test]
    fn config_splice() {
        let dir = std::env::temp_dir().join(format!("hm-config-{}", std::process::id()));
        std::fs::write(&dir, "# comment\nq = 5\nomit-timing = true\nseed=false\n").unwrap();
        let args: Vec<OsString> =
            ["prog", "--config", dir.to_str().unwrap(), "moment", "--level", "11"].iter().map(Into::into).collect();
        let merged = merge_config(args).unwrap();
        let merged: Vec<String> = merged.iter().map(|a| a.to_string_lossy().into_owned()).collect();
        assert_eq!(merged, ["prog", "moment", "--q", "5", "--omit-timing", "--level", "11"]);
        std::fs::remove_file(dir).unwrap();
    }
}
