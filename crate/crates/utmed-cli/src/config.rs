//! Sweep config files: flat `key = value` lines, `#` comments, lists comma
//! separated. Every key mirrors a `sweep` flag and flags take precedence.
//!
//! ```text
//! images  = lena.pgm, boat.pgm
//! filters = pa, smf3
//! kind    = sp
//! levels  = 0.1, 0.3, 0.5, 0.7, 0.9
//! seeds   = 1, 2, 3
//! t       = 40
//! t1      = 20
//! ```

use std::path::PathBuf;

use crate::commands::{FilterArg, KindArg};

#[derive(Debug, Default)]
pub struct ConfigFile {
    pub images: Vec<PathBuf>,
    pub filters: Vec<FilterArg>,
    pub kind: Option<KindArg>,
    pub levels: Vec<f64>,
    pub seeds: Vec<u64>,
    pub var: Option<f64>,
    pub t: Option<u8>,
    pub t1: Option<u8>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut cfg = Self::default();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| format!("config line {}: expected key = value", lineno + 1))?;
            let key = key.trim();
            let value = value.trim();
            let at = |what: &str| format!("config line {}: {what}", lineno + 1);
            match key {
                "images" => cfg.images = list(value).map(PathBuf::from).collect(),
                "filters" => {
                    cfg.filters = list(value)
                        .map(|name| {
                            FilterArg::parse_name(name)
                                .ok_or_else(|| at(&format!("unknown filter \"{name}\"")))
                        })
                        .collect::<Result<_, _>>()?;
                }
                "kind" => {
                    cfg.kind = Some(
                        KindArg::parse_name(value)
                            .ok_or_else(|| at(&format!("unknown noise kind \"{value}\"")))?,
                    );
                }
                "levels" => {
                    cfg.levels = list(value)
                        .map(|v| {
                            v.parse::<f64>()
                                .map_err(|_| at(&format!("bad level \"{v}\"")))
                        })
                        .collect::<Result<_, _>>()?;
                }
                "seeds" => {
                    cfg.seeds = list(value)
                        .map(|v| {
                            v.parse::<u64>()
                                .map_err(|_| at(&format!("bad seed \"{v}\"")))
                        })
                        .collect::<Result<_, _>>()?;
                }
                "var" => {
                    cfg.var =
                        Some(value.parse().map_err(|_| at(&format!("bad var \"{value}\"")))?);
                }
                "t" => {
                    cfg.t = Some(
                        value
                            .parse()
                            .map_err(|_| at(&format!("bad threshold \"{value}\"")))?,
                    );
                }
                "t1" => {
                    cfg.t1 = Some(
                        value
                            .parse()
                            .map_err(|_| at(&format!("bad threshold \"{value}\"")))?,
                    );
                }
                other => return Err(at(&format!("unknown key \"{other}\""))),
            }
        }
        Ok(cfg)
    }
}

fn list(value: &str) -> impl Iterator<Item = &str> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let cfg = ConfigFile::parse(
            "# benchmark grid\nimages = a.pgm, b.pgm\nfilters = pa, smf3\nkind = sp\nlevels = 0.1, 0.5\nseeds = 1,2,3\nt = 35\nt1 = 15\n",
        )
        .unwrap();
        assert_eq!(cfg.images.len(), 2);
        assert_eq!(cfg.filters, vec![FilterArg::Pa, FilterArg::Smf3]);
        assert_eq!(cfg.kind, Some(KindArg::Sp));
        assert_eq!(cfg.levels, vec![0.1, 0.5]);
        assert_eq!(cfg.seeds, vec![1, 2, 3]);
        assert_eq!((cfg.t, cfg.t1), (Some(35), Some(15)));
    }

    #[test]
    fn rejects_unknown_keys_and_values() {
        assert!(ConfigFile::parse("speed = 9\n").is_err());
        assert!(ConfigFile::parse("filters = warp\n").is_err());
        assert!(ConfigFile::parse("levels = fast\n").is_err());
        assert!(ConfigFile::parse("just a line\n").is_err());
    }

    #[test]
    fn ignores_comments_and_blanks() {
        let cfg = ConfigFile::parse("\n# only a comment\nkind = rvin # inline\n").unwrap();
        assert_eq!(cfg.kind, Some(KindArg::Rvin));
    }
}
