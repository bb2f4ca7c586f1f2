//! Run configuration: `key = value` files merged with command-line flags.

use std::collections::BTreeMap;
use std::fmt;
use std::path::PathBuf;

use sha2::{Digest, Sha256};

/// Default sieve budget, 2 GiB.
pub const DEFAULT_MEM_LIMIT: u64 = 2 << 30;

/// Configuration problem; maps to exit status 2.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConfigError {
    pub file: Option<String>,
    pub line: Option<usize>,
    pub column: Option<usize>,
    pub message: String,
}

impl ConfigError {
    pub fn new(message: impl Into<String>) -> Self {
        ConfigError { file: None, line: None, column: None, message: message.into() }
    }

    fn at(line: usize, column: usize, message: impl Into<String>) -> Self {
        ConfigError { file: None, line: Some(line), column: Some(column), message: message.into() }
    }
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let file = self.file.as_deref().unwrap_or("config");
        match (self.line, self.column) {
            (Some(l), Some(c)) => write!(f, "{file}: line {l}, column {c}: {}", self.message),
            (Some(l), None) => write!(f, "{file}: line {l}: {}", self.message),
            _ => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

/// What `M(x)` is in `sum` and `moment`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum MainChoice {
    /// The predicted main term for the descriptor.
    #[default]
    Predicted,
    /// `M(x) = S(x)`, so `Delta` vanishes.
    Exact,
    /// `M(x) = x`.
    Identity,
    /// `M(x) = 0`.
    Zero,
}

impl MainChoice {
    fn parse(s: &str) -> Option<Self> {
        Some(match s {
            "predicted" => MainChoice::Predicted,
            "exact" => MainChoice::Exact,
            "identity" => MainChoice::Identity,
            "zero" => MainChoice::Zero,
            _ => return None,
        })
    }

    pub fn as_str(self) -> &'static str {
        match self {
            MainChoice::Predicted => "predicted",
            MainChoice::Exact => "exact",
            MainChoice::Identity => "identity",
            MainChoice::Zero => "zero",
        }
    }
}

/// Settings as given, before defaults. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct Settings {
    pub fields: Option<Vec<String>>,
    pub func: Option<String>,
    pub xmax: Option<u64>,
    pub nmax: Option<u64>,
    pub grid_ratio: Option<f64>,
    pub threads: Option<usize>,
    pub mem_limit: Option<u64>,
    pub out: Option<PathBuf>,
    pub overrides: Option<PathBuf>,
    pub main: Option<MainChoice>,
    pub zpower: Option<bool>,
    pub prime: Option<u64>,
    pub points: Option<usize>,
    pub fallback: Option<bool>,
}

macro_rules! take {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $src.$f.is_some() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl Settings {
    /// Overlays `other` on top of `self`; set keys in `other` win.
    pub fn overlay(&mut self, other: &Settings) {
        take!(
            self, other, fields, func, xmax, nmax, grid_ratio, threads, mem_limit, out, overrides, main, zpower, prime,
            points, fallback
        );
    }

    /// Parses config text. Blank lines and `#` comments are skipped.
    pub fn parse(text: &str) -> Result<Settings, ConfigError> {
        let mut s = Settings::default();
        for (i, raw) in text.lines().enumerate() {
            let line = i + 1;
            let body = raw.split('#').next().unwrap_or("");
            if body.trim().is_empty() {
                continue;
            }
            let Some(eq) = body.find('=') else {
                let col = body.len() - body.trim_start().len() + 1;
                return Err(ConfigError::at(line, col, "expected key = value"));
            };
            let key = body[..eq].trim();
            let value_raw = &body[eq + 1..];
            let value = value_raw.trim();
            let vcol = eq + 2 + (value_raw.len() - value_raw.trim_start().len());
            s.set(key, value).map_err(|msg| {
                let col = if msg.starts_with("unknown key") { body.len() - body.trim_start().len() + 1 } else { vcol };
                ConfigError::at(line, col, msg)
            })?;
        }
        Ok(s)
    }

    /// Sets one key from its textual value.
    pub fn set(&mut self, key: &str, value: &str) -> Result<(), String> {
        match key {
            "fields" => self.fields = Some(value.split_whitespace().map(str::to_string).collect()),
            "fn" => self.func = Some(value.to_string()),
            "xmax" => self.xmax = Some(parse_count(value)?),
            "nmax" => self.nmax = Some(parse_count(value)?),
            "grid-ratio" => self.grid_ratio = Some(parse_ratio(value)?),
            "threads" => self.threads = Some(parse_count(value)? as usize),
            "mem-limit" => self.mem_limit = Some(parse_bytes(value)?),
            "out" => self.out = Some(PathBuf::from(value)),
            "overrides" => self.overrides = Some(PathBuf::from(value)),
            "main" => self.main = Some(MainChoice::parse(value).ok_or_else(|| format!("unknown main term {value:?}"))?),
            "zpower" => self.zpower = Some(parse_bool(value)?),
            "prime" => self.prime = Some(parse_count(value)?),
            "points" => self.points = Some(parse_count(value)? as usize),
            "fallback" => self.fallback = Some(parse_bool(value)?),
            _ => return Err(format!("unknown key {key:?}")),
        }
        Ok(())
    }
}

fn parse_bool(s: &str) -> Result<bool, String> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(format!("expected true or false, found {s:?}")),
    }
}

/// Nonnegative integers written as `1000000`, `1_000_000`, `1e6` or `10^6`.
pub fn parse_count(s: &str) -> Result<u64, String> {
    let t = s.trim().replace('_', "");
    let bad = || format!("expected a nonnegative integer, found {s:?}");
    if let Some((m, e)) = t.split_once(['e', 'E']) {
        let m: u64 = m.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return 10u64.checked_pow(e).and_then(|p| p.checked_mul(m)).ok_or_else(bad);
    }
    if let Some((b, e)) = t.split_once('^') {
        let b: u64 = b.parse().map_err(|_| bad())?;
        let e: u32 = e.parse().map_err(|_| bad())?;
        return b.checked_pow(e).ok_or_else(bad);
    }
    t.parse().map_err(|_| bad())
}

/// A ratio `> 1`, either a decimal or `b^(p/q)` like `2^(1/4)`.
pub fn parse_ratio(s: &str) -> Result<f64, String> {
    let t = s.trim();
    let bad = || format!("expected a ratio > 1, found {s:?}");
    let r = match t.split_once('^') {
        Some((b, e)) => {
            let b: f64 = b.trim().parse().map_err(|_| bad())?;
            let e = e.trim().trim_start_matches('(').trim_end_matches(')');
            let e = match e.split_once('/') {
                Some((n, d)) => {
                    n.trim().parse::<f64>().map_err(|_| bad())? / d.trim().parse::<f64>().map_err(|_| bad())?
                }
                None => e.parse::<f64>().map_err(|_| bad())?,
            };
            b.powf(e)
        }
        None => t.parse().map_err(|_| bad())?,
    };
    if r.is_finite() && r > 1.0 {
        Ok(r)
    } else {
        Err(bad())
    }
}

/// Byte counts with an optional `K`, `M` or `G` suffix (powers of 1024).
pub fn parse_bytes(s: &str) -> Result<u64, String> {
    let t = s.trim();
    let (num, shift) = match t.char_indices().last() {
        Some((i, 'K' | 'k')) => (&t[..i], 10),
        Some((i, 'M' | 'm')) => (&t[..i], 20),
        Some((i, 'G' | 'g')) => (&t[..i], 30),
        _ => (t, 0),
    };
    let n = parse_count(num)?;
    n.checked_mul(1u64 << shift).ok_or_else(|| format!("byte count {s:?} overflows"))
}

/// A complete configuration with defaults applied.
#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub fields: Vec<String>,
    pub func: Option<String>,
    pub xmax: Option<u64>,
    pub nmax: Option<u64>,
    pub grid_ratio: f64,
    /// 0 means the rayon default.
    pub threads: usize,
    pub mem_limit: u64,
    pub out: Option<PathBuf>,
    pub overrides: Option<PathBuf>,
    pub main: MainChoice,
    pub zpower: bool,
    pub prime: Option<u64>,
    pub points: usize,
    pub fallback: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig::from_settings(&Settings::default())
    }
}

impl RunConfig {
    pub fn from_settings(s: &Settings) -> Self {
        RunConfig {
            fields: s.fields.clone().unwrap_or_default(),
            func: s.func.clone(),
            xmax: s.xmax,
            nmax: s.nmax,
            grid_ratio: s.grid_ratio.unwrap_or_else(|| 2f64.powf(0.25)),
            threads: s.threads.unwrap_or(0),
            mem_limit: s.mem_limit.unwrap_or(DEFAULT_MEM_LIMIT),
            out: s.out.clone(),
            overrides: s.overrides.clone(),
            main: s.main.unwrap_or_default(),
            zpower: s.zpower.unwrap_or(false),
            prime: s.prime,
            points: s.points.unwrap_or(3),
            fallback: s.fallback.unwrap_or(false),
        }
    }

    /// Hex SHA-256 over everything that can change the numbers in an output.
    ///
    /// Threads, memory limit and the output path are left out, as is the
    /// overrides path; the overrides file content goes in instead.
    pub fn hash(&self, command: &str, overrides_text: Option<&str>) -> String {
        let mut kv: BTreeMap<&str, String> = BTreeMap::new();
        kv.insert("command", command.to_string());
        kv.insert("fields", self.fields.join(" "));
        kv.insert("fn", self.func.clone().unwrap_or_default());
        kv.insert("xmax", self.xmax.map(|x| x.to_string()).unwrap_or_default());
        kv.insert("nmax", self.nmax.map(|x| x.to_string()).unwrap_or_default());
        kv.insert("grid-ratio", format!("{:e}", self.grid_ratio));
        kv.insert("main", self.main.as_str().to_string());
        kv.insert("zpower", self.zpower.to_string());
        kv.insert("prime", self.prime.map(|x| x.to_string()).unwrap_or_default());
        kv.insert("points", self.points.to_string());
        kv.insert("fallback", self.fallback.to_string());
        kv.insert("overrides", overrides_text.unwrap_or("").to_string());
        let mut h = Sha256::new();
        for (k, v) in kv {
            h.update(k.as_bytes());
            h.update(b"=");
            h.update(v.as_bytes());
            h.update(b"\n");
        }
        h.finalize().iter().map(|b| format!("{b:02x}")).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn counts_and_ratios() {
        assert_eq!(parse_count("10^6"), Ok(1_000_000));
        assert_eq!(parse_count("2.5e4").is_err(), true);
        assert_eq!(parse_count("25e3"), Ok(25_000));
        assert_eq!(parse_count("1_000"), Ok(1000));
        assert!((parse_ratio("2^(1/4)").unwrap() - 2f64.powf(0.25)).abs() < 1e-15);
        assert!(parse_ratio("1").is_err());
        assert_eq!(parse_bytes("512M"), Ok(512 << 20));
        assert_eq!(parse_bytes("2G"), Ok(2 << 30));
    }

    #[test]
    fn file_errors_carry_line_and_column() {
        let err = Settings::parse("fn = a\n\n  xmax = ten\n").unwrap_err();
        assert_eq!((err.line, err.column), (Some(3), Some(10)));
        let err = Settings::parse("# comment\nbogus = 1").unwrap_err();
        assert_eq!((err.line, err.column), (Some(2), Some(1)));
        let err = Settings::parse("fields quad:-4").unwrap_err();
        assert_eq!(err.line, Some(1));
    }

    #[test]
    fn flags_win() {
        let mut s = Settings::parse("xmax = 100\nfields = quad:-4 quad:5\n").unwrap();
        let flags = Settings { xmax: Some(7), ..Default::default() };
        s.overlay(&flags);
        let c = RunConfig::from_settings(&s);
        assert_eq!(c.xmax, Some(7));
        assert_eq!(c.fields, vec!["quad:-4", "quad:5"]);
    }

    #[test]
    fn hash_ignores_threads_and_out() {
        let a = RunConfig { threads: 1, ..Default::default() };
        let b = RunConfig { threads: 8, out: Some("x.csv".into()), mem_limit: 1, ..Default::default() };
        assert_eq!(a.hash("sum", None), b.hash("sum", None));
        let c = RunConfig { xmax: Some(5), ..Default::default() };
        assert_ne!(a.hash("sum", None), c.hash("sum", None));
        assert_ne!(a.hash("sum", None), a.hash("moment", None));
        assert_ne!(a.hash("sum", None), a.hash("sum", Some("7 3,1,1")));
    }
}
