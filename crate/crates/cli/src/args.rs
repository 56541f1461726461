//! Minimal `--flag value` argument parsing.

use std::collections::BTreeMap;

#[derive(Debug, Default)]
pub struct Args {
    pub positional: Vec<String>,
    flags: BTreeMap<String, String>,
    consumed: std::cell::RefCell<Vec<String>>,
}

impl Args {
    /// Parses `args` as positionals interleaved with `--name value` pairs.
    pub fn parse<I: Iterator<Item = String>>(args: I) -> Result<Self, String> {
        let mut out = Args::default();
        let mut it = args.peekable();
        while let Some(a) = it.next() {
            if let Some(name) = a.strip_prefix("--") {
                let value = it
                    .next()
                    .ok_or_else(|| format!("flag --{name} needs a value"))?;
                if out
                    .flags
                    .insert(name.to_string(), value)
                    .is_some()
                {
                    return Err(format!("flag --{name} given twice"));
                }
            } else {
                out.positional.push(a);
            }
        }
        Ok(out)
    }

    pub fn get(&self, name: &str) -> Option<&str> {
        self.consumed.borrow_mut().push(name.to_string());
        self.flags.get(name).map(|s| s.as_str())
    }

    pub fn get_parsed<T: std::str::FromStr>(&self, name: &str) -> Result<Option<T>, String>
    where
        T::Err: std::fmt::Display,
    {
        match self.get(name) {
            None => Ok(None),
            Some(v) => v
                .parse::<T>()
                .map(Some)
                .map_err(|e| format!("bad value for --{name}: {e}")),
        }
    }

    /// Errors if any flag was never looked up (catches typos).
    pub fn reject_unknown(&self) -> Result<(), String> {
        let seen = self.consumed.borrow();
        for name in self.flags.keys() {
            if !seen.iter().any(|s| s == name) {
                return Err(format!("unknown flag --{name}"));
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn of(parts: &[&str]) -> Result<Args, String> {
        Args::parse(parts.iter().map(|s| s.to_string()))
    }

    #[test]
    fn positionals_and_flags() {
        let a = of(&["l2", "--seed", "7", "--out", "x.csv"]).unwrap();
        assert_eq!(a.positional, vec!["l2"]);
        assert_eq!(a.get("seed"), Some("7"));
        assert_eq!(a.get_parsed::<u64>("seed").unwrap(), Some(7));
        assert_eq!(a.get("out"), Some("x.csv"));
        a.reject_unknown().unwrap();
    }

    #[test]
    fn unknown_flags_are_rejected() {
        let a = of(&["--whoops", "1"]).unwrap();
        assert!(a.reject_unknown().is_err());
    }

    #[test]
    fn duplicate_and_dangling_flags_error() {
        assert!(of(&["--seed", "1", "--seed", "2"]).is_err());
        assert!(of(&["--seed"]).is_err());
    }
}
