//! Optional key=value config files, merged under the explicit `--config`
//! flag: one `key = value` pair per line, `#` starts a comment, keys match
//! the long flag names. Explicit command-line flags always win.

use std::collections::HashMap;
use std::path::PathBuf;

#[derive(Default)]
pub struct ConfigFile {
    values: HashMap<String, String>,
}

impl ConfigFile {
    pub fn load(path: &Option<PathBuf>) -> Result<Self, String> {
        let Some(path) = path else {
            return Ok(Self::default());
        };
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        let mut values = HashMap::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or(format!("config line {} is not `key = value`", lineno + 1))?;
            values.insert(key.trim().to_string(), value.trim().to_string());
        }
        Ok(Self { values })
    }

    pub fn resolve_f64(&self, key: &str, flag: Option<f64>) -> Result<Option<f64>, String> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|v| {
                v.parse::<f64>()
                    .map_err(|_| format!("config key `{key}`: `{v}` is not a number"))
            })
            .transpose()
    }

    pub fn resolve_u64(&self, key: &str, flag: Option<u64>) -> Result<Option<u64>, String> {
        if flag.is_some() {
            return Ok(flag);
        }
        self.values
            .get(key)
            .map(|v| {
                v.parse::<u64>()
                    .map_err(|_| format!("config key `{key}`: `{v}` is not an integer"))
            })
            .transpose()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_pairs_and_comments() {
        let dir = std::env::temp_dir().join("cvqc-config-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("demo.conf");
        std::fs::write(&path, "# demo\ny = 0.1\nshots=500\n").unwrap();
        let cfg = ConfigFile::load(&Some(path)).unwrap();
        assert_eq!(cfg.resolve_f64("y", None).unwrap(), Some(0.1));
        assert_eq!(cfg.resolve_u64("shots", None).unwrap(), Some(500));
        // explicit flags win
        assert_eq!(cfg.resolve_f64("y", Some(0.5)).unwrap(), Some(0.5));
        assert_eq!(cfg.resolve_u64("missing", None).unwrap(), None);
    }
}
