//! The solver configuration dialect: `KEY= VALUE` lines and `%` comments.
//!
//! Only the perturbation options are interpreted. Every other key is kept
//! verbatim, in first-seen order, and written back unchanged.

use std::fmt::Write as _;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};

use crate::barycentric::ComponentTarget;
use crate::error::{Error, Result};
use crate::tolerances::URLX_ADVISORY_FLOOR;

pub const KEY_USING_UQ: &str = "USING_UQ";
pub const KEY_COMPONENT: &str = "UQ_COMPONENT";
pub const KEY_PERMUTE: &str = "UQ_PERMUTE";
pub const KEY_URLX: &str = "UQ_URLX";
pub const KEY_DELTA_B: &str = "UQ_DELTA_B";

pub const DEFAULT_URLX: f64 = 0.1;
pub const DEFAULT_DELTA_B: f64 = 1.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct UqConfig {
    pub using_uq: bool,
    pub component: ComponentTarget,
    pub permute: bool,
    pub urlx: f64,
    pub delta_b: f64,
    /// Every non-perturbation key, in first-seen order.
    pub passthrough: IndexMap<String, String>,
}

impl Default for UqConfig {
    fn default() -> Self {
        Self {
            using_uq: false,
            component: ComponentTarget::One,
            permute: false,
            urlx: DEFAULT_URLX,
            delta_b: DEFAULT_DELTA_B,
            passthrough: IndexMap::new(),
        }
    }
}

/// Replacement values applied on top of a parsed configuration.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct ConfigOverrides {
    pub using_uq: Option<bool>,
    pub component: Option<ComponentTarget>,
    pub permute: Option<bool>,
    pub urlx: Option<f64>,
    pub delta_b: Option<f64>,
}

impl UqConfig {
    pub fn with_overrides(&self, o: &ConfigOverrides) -> Self {
        Self {
            using_uq: o.using_uq.unwrap_or(self.using_uq),
            component: o.component.unwrap_or(self.component),
            permute: o.permute.unwrap_or(self.permute),
            urlx: o.urlx.unwrap_or(self.urlx),
            delta_b: o.delta_b.unwrap_or(self.delta_b),
            passthrough: self.passthrough.clone(),
        }
    }

    /// Pass-through value looked up without regard to key case.
    pub fn get(&self, key: &str) -> Option<&str> {
        self.passthrough
            .iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(key))
            .map(|(_, v)| v.as_str())
    }
}

fn parse_bool(value: &str) -> Option<bool> {
    if value.eq_ignore_ascii_case("YES") {
        Some(true)
    } else if value.eq_ignore_ascii_case("NO") {
        Some(false)
    } else {
        None
    }
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "YES"
    } else {
        "NO"
    }
}

pub fn parse_config(text: &str) -> Result<UqConfig> {
    let mut cfg = UqConfig::default();
    for (index, raw) in text.lines().enumerate() {
        let line = index + 1;
        let err = |message: String| Error::Config { line, message };
        let trimmed = raw.trim();
        if trimmed.is_empty() || trimmed.starts_with('%') {
            continue;
        }
        let (key, value) = trimmed
            .split_once('=')
            .ok_or_else(|| err(format!("expected KEY= VALUE, found '{trimmed}'")))?;
        let (key, value) = (key.trim(), value.trim());
        if key.is_empty() {
            return Err(err("empty key".into()));
        }

        let unit = |name: &str| -> Result<f64> {
            let v: f64 = value
                .parse()
                .map_err(|_| err(format!("{name} expects a number, found '{value}'")))?;
            if (0.0..=1.0).contains(&v) {
                Ok(v)
            } else {
                Err(err(format!("{name} = {v} is outside [0, 1]")))
            }
        };
        let boolean = |name: &str| {
            parse_bool(value)
                .ok_or_else(|| err(format!("{name} expects YES or NO, found '{value}'")))
        };

        match key.to_ascii_uppercase().as_str() {
            KEY_USING_UQ => cfg.using_uq = boolean(KEY_USING_UQ)?,
            KEY_PERMUTE => cfg.permute = boolean(KEY_PERMUTE)?,
            KEY_COMPONENT => {
                cfg.component = value
                    .parse::<i64>()
                    .ok()
                    .and_then(ComponentTarget::from_index)
                    .ok_or_else(|| {
                        err(format!(
                            "{KEY_COMPONENT} must be 1, 2 or 3, found '{value}'"
                        ))
                    })?
            }
            KEY_URLX => cfg.urlx = unit(KEY_URLX)?,
            KEY_DELTA_B => cfg.delta_b = unit(KEY_DELTA_B)?,
            _ => {
                cfg.passthrough.insert(key.to_string(), value.to_string());
            }
        }
    }
    warn_low_urlx(cfg.urlx);
    Ok(cfg)
}

pub(crate) fn warn_low_urlx(urlx: f64) {
    if urlx < URLX_ADVISORY_FLOOR {
        log::warn!(
            "under-relaxation {urlx} is below {URLX_ADVISORY_FLOOR}; perturbations may not be complete at convergence"
        );
    }
}

/// Pass-through keys in their original order, then the five perturbation
/// keys.
pub fn emit_config(base: &UqConfig, overrides: &ConfigOverrides) -> String {
    let c = base.with_overrides(overrides);
    let mut out = String::new();
    for (k, v) in &c.passthrough {
        let _ = writeln!(out, "{k}= {v}");
    }
    let _ = writeln!(out, "{KEY_USING_UQ}= {}", yes_no(c.using_uq));
    let _ = writeln!(out, "{KEY_COMPONENT}= {}", c.component.index());
    let _ = writeln!(out, "{KEY_PERMUTE}= {}", yes_no(c.permute));
    let _ = writeln!(out, "{KEY_URLX}= {:?}", c.urlx);
    let _ = writeln!(out, "{KEY_DELTA_B}= {:?}", c.delta_b);
    out
}
