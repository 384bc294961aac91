//! Option resolution: built-in defaults, then the `--config` file, then
//! explicit CLI flags, highest precedence last. The config file is flat
//! `key = value` text; keys mirror the CLI flags plus `scan.*` extras for
//! the grid, which has no dedicated flags.

use std::path::{Path, PathBuf};

use crate::CliError;

/// Scan grid and evaluation plan. No CLI flags map here directly; override
/// via `scan.*` config keys.
#[derive(Clone, Debug)]
pub struct ScanSettings {
    pub re_lo: f64,
    pub re_hi: f64,
    pub im_lo: f64,
    pub im_hi: f64,
    pub nx: u32,
    pub ny: u32,
    pub n_list: Vec<u32>,
    pub precision: Option<u32>,
}

impl Default for ScanSettings {
    fn default() -> Self {
        ScanSettings {
            re_lo: 0.85,
            re_hi: 1.15,
            im_lo: -0.2,
            im_hi: 0.2,
            nx: 41,
            ny: 41,
            n_list: vec![50, 100, 200],
            precision: None,
        }
    }
}

#[derive(Clone, Debug, Default)]
pub struct Settings {
    pub n: Option<u32>,
    pub beta: Option<(f64, f64)>,
    pub digits: Option<u32>,
    pub threads: Option<u32>,
    pub out: Option<PathBuf>,
    pub scan: ScanSettings,
}

/// `--beta re,im` (also the config-file `beta` value).
pub fn parse_beta(s: &str) -> Result<(f64, f64), String> {
    let (re, im) = s
        .split_once(',')
        .ok_or_else(|| format!("expected re,im (got {s:?})"))?;
    let re: f64 = re
        .trim()
        .parse()
        .map_err(|e| format!("bad Re part {re:?}: {e}"))?;
    let im: f64 = im
        .trim()
        .parse()
        .map_err(|e| format!("bad Im part {im:?}: {e}"))?;
    if !re.is_finite() || !im.is_finite() {
        return Err("beta must be finite".into());
    }
    Ok((re, im))
}

impl Settings {
    pub fn apply_config_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| {
            CliError::Usage(format!("cannot read config file {}: {e}", path.display()))
        })?;
        for (idx, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                CliError::Usage(format!("config line {}: not key=value: {raw:?}", idx + 1))
            })?;
            self.apply_key(key.trim(), value.trim())
                .map_err(|msg| CliError::Usage(format!("config line {}: {msg}", idx + 1)))?;
        }
        Ok(())
    }

    fn apply_key(&mut self, key: &str, value: &str) -> Result<(), String> {
        fn num<T: std::str::FromStr>(value: &str, what: &str) -> Result<T, String>
        where
            T::Err: std::fmt::Display,
        {
            value
                .parse()
                .map_err(|e| format!("bad {what} value {value:?}: {e}"))
        }
        match key {
            "n" => self.n = Some(num(value, "n")?),
            "beta" => self.beta = Some(parse_beta(value)?),
            "digits" => self.digits = Some(num(value, "digits")?),
            "threads" => self.threads = Some(num(value, "threads")?),
            "out" => self.out = Some(PathBuf::from(value)),
            "scan.re_lo" => self.scan.re_lo = num(value, key)?,
            "scan.re_hi" => self.scan.re_hi = num(value, key)?,
            "scan.im_lo" => self.scan.im_lo = num(value, key)?,
            "scan.im_hi" => self.scan.im_hi = num(value, key)?,
            "scan.nx" => self.scan.nx = num(value, key)?,
            "scan.ny" => self.scan.ny = num(value, key)?,
            "scan.precision" => self.scan.precision = Some(num(value, key)?),
            "scan.n_list" => {
                self.scan.n_list = value
                    .split(',')
                    .map(|part| num(part.trim(), "scan.n_list entry"))
                    .collect::<Result<_, _>>()?;
            }
            other => return Err(format!("unknown config key {other:?}")),
        }
        Ok(())
    }

    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("."))
    }

    pub fn need_n(&self) -> Result<u32, CliError> {
        match self.n {
            Some(n) if n >= 1 => Ok(n),
            Some(n) => Err(CliError::Usage(format!("--n must be >= 1 (got {n})"))),
            None => Err(CliError::Usage(
                "this command needs --n (or `n =` in the config file)".into(),
            )),
        }
    }

    pub fn need_beta(&self) -> Result<(f64, f64), CliError> {
        self.beta.ok_or_else(|| {
            CliError::Usage("this command needs --beta re,im (or `beta =` in the config file)".into())
        })
    }
}
