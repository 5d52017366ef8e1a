//! Model configurations: what the base types and constants of a signature
//! denote.
//!
//! The text format is line oriented; `#` starts a comment.
//!
//! ```text
//! seed 7              # drives every entry left unspecified
//! max 3               # largest base object drawn at random
//! discrete-two        # families over 2 vanish away from tt and ff
//! type A = 3          # a closed base type: 3 points, or dimension 3
//! type F(1) = 2       # F at the global element of index 1 of its parameter
//! type F(*) = 1       # F everywhere else
//! const c = 5         # c denotes the global element of index 5
//! const k(0, 2) = 1
//! ```
//!
//! Global elements are indexed as the backend enumerates them: pointed-set
//! points in order with the basepoint first, vectors by their bits read as a
//! binary number. The elements of `2` are `0` (zero/basepoint), `1` (`tt`),
//! `2` (`ff`) and, over GF(2), `3` (`tt + ff`).

use std::collections::BTreeMap;
use std::hash::{Hash, Hasher};

#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

/// Values of a family at chosen parameter indices, and for the rest.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Family {
    pub at: BTreeMap<Vec<u128>, u128>,
    pub default: Option<u128>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Config {
    pub seed: u64,
    pub max: u32,
    pub discrete_two: bool,
    pub types: BTreeMap<String, Family>,
    pub consts: BTreeMap<String, Family>,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            seed: 0,
            max: 3,
            discrete_two: false,
            types: BTreeMap::new(),
            consts: BTreeMap::new(),
        }
    }
}

impl Config {
    pub fn random(seed: u64, max: u32) -> Self {
        Config {
            seed,
            max,
            ..Self::default()
        }
    }

    pub fn parse(src: &str) -> Result<Config, ConfigError> {
        let mut cfg = Config::default();
        for (i, raw) in src.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let fail = |m: &str| ConfigError {
                line: i + 1,
                message: m.to_string(),
            };
            let (word, rest) = line.split_once(char::is_whitespace).unwrap_or((line, ""));
            let rest = rest.trim();
            match word {
                "seed" => cfg.seed = rest.parse().map_err(|_| fail("expected a number after `seed`"))?,
                "max" => cfg.max = rest.parse().map_err(|_| fail("expected a number after `max`"))?,
                "discrete-two" if rest.is_empty() => cfg.discrete_two = true,
                "type" | "const" => {
                    let (lhs, rhs) = rest.split_once('=').ok_or_else(|| fail("expected `=`"))?;
                    let value: u128 = rhs.trim().parse().map_err(|_| fail("expected a number after `=`"))?;
                    let lhs = lhs.trim();
                    let (name, key) = match lhs.split_once('(') {
                        None => (lhs, Some(vec![])),
                        Some((n, args)) => {
                            let args = args.strip_suffix(')').ok_or_else(|| fail("unclosed `(`"))?;
                            if args.trim() == "*" {
                                (n.trim(), None)
                            } else {
                                let key = args
                                    .split(',')
                                    .map(|a| a.trim().parse::<u128>())
                                    .collect::<Result<Vec<_>, _>>()
                                    .map_err(|_| fail("arguments must be element indices or `*`"))?;
                                (n.trim(), Some(key))
                            }
                        }
                    };
                    if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_' || c == '\'') {
                        return Err(fail("expected a name"));
                    }
                    let table = if word == "type" { &mut cfg.types } else { &mut cfg.consts };
                    let fam = table.entry(name.to_string()).or_default();
                    match key {
                        Some(k) => {
                            fam.at.insert(k, value);
                        }
                        None => fam.default = Some(value),
                    }
                }
                _ => return Err(fail(&format!("unknown directive `{}`", word))),
            }
        }
        Ok(cfg)
    }

    pub fn set_type(&mut self, name: &str, key: Vec<u128>, size: u32) {
        self.types.entry(name.to_string()).or_default().at.insert(key, size as u128);
    }

    pub fn set_const(&mut self, name: &str, key: Vec<u128>, point: u128) {
        self.consts.entry(name.to_string()).or_default().at.insert(key, point);
    }

    fn draw(&self, kind: &str, name: &str, key: &[u128]) -> u64 {
        let mut h = std::collections::hash_map::DefaultHasher::new();
        (self.seed, kind, name, key).hash(&mut h);
        h.finish()
    }

    /// The size of base type `name` at the given parameter indices; sizes
    /// drawn at random lie in `lo..=max`.
    pub fn type_size(&self, name: &str, key: &[u128], lo: u32) -> u32 {
        if let Some(f) = self.types.get(name) {
            if let Some(v) = f.at.get(key).or(f.default.as_ref()) {
                return *v as u32;
            }
        }
        let hi = self.max.max(lo);
        lo + (self.draw("type", name, key) % (hi - lo + 1) as u64) as u32
    }

    /// Index of the global element constant `name` denotes, among `npoints`.
    pub fn const_point(&self, name: &str, key: &[u128], npoints: u128) -> u128 {
        if let Some(f) = self.consts.get(name) {
            if let Some(v) = f.at.get(key).or(f.default.as_ref()) {
                return *v % npoints.max(1);
            }
        }
        self.draw("const", name, key) as u128 % npoints.max(1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_every_directive() {
        let cfg = Config::parse(
            "seed 7\nmax 2 # small\ndiscrete-two\n\ntype A = 3\ntype F(1) = 2\ntype F(*) = 1\nconst k(0, 2) = 4\n",
        )
        .unwrap();
        assert_eq!(cfg.seed, 7);
        assert_eq!(cfg.max, 2);
        assert!(cfg.discrete_two);
        assert_eq!(cfg.type_size("A", &[], 1), 3);
        assert_eq!(cfg.type_size("F", &[1], 1), 2);
        assert_eq!(cfg.type_size("F", &[2], 1), 1);
        assert_eq!(cfg.const_point("k", &[0, 2], 10), 4);
    }

    #[test]
    fn rejects_malformed_lines() {
        assert_eq!(Config::parse("seed x").unwrap_err().line, 1);
        assert_eq!(Config::parse("\ntype A 3").unwrap_err().line, 2);
        assert!(Config::parse("type F(a) = 1").is_err());
        assert!(Config::parse("colour blue").is_err());
    }

    #[test]
    fn unspecified_entries_are_drawn_in_range_and_stable() {
        let cfg = Config::random(11, 4);
        for n in ["A", "B", "C"] {
            let s = cfg.type_size(n, &[], 1);
            assert!((1..=4).contains(&s));
            assert_eq!(s, cfg.type_size(n, &[], 1));
        }
        assert!(cfg.const_point("c", &[], 5) < 5);
    }
}
