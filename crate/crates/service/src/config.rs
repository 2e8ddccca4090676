use std::net::SocketAddr;
use std::path::{Path, PathBuf};

use factbench::tagger::{parse_lexicon, HighlightScheme, NerMode, TaggerConfig};
use serde::Deserialize;

use crate::ServiceError;

pub const DEFAULT_BIND_ADDR: &str = "127.0.0.1:8080";

#[derive(Debug, Clone)]
pub struct ServiceConfig {
    pub data_dir: PathBuf,
    pub bind_addr: SocketAddr,
    pub tagger: TaggerConfig,
    /// Built UI assets. Without them `/` serves a short placeholder page.
    pub static_dir: Option<PathBuf>,
}

impl ServiceConfig {
    pub fn new(data_dir: impl Into<PathBuf>) -> Self {
        ServiceConfig {
            data_dir: data_dir.into(),
            bind_addr: DEFAULT_BIND_ADDR.parse().expect("valid default address"),
            tagger: TaggerConfig::default(),
            static_dir: None,
        }
    }

    /// Reads `DATA_DIR` (default `./sessions`), `BIND_ADDR`, `TAGGER_CONFIG`
    /// and `STATIC_DIR`.
    pub fn from_env() -> Result<Self, ServiceError> {
        let var = |k: &str| std::env::var(k).ok().filter(|v| !v.is_empty());
        let mut cfg = ServiceConfig::new(var("DATA_DIR").unwrap_or_else(|| "sessions".into()));
        if let Some(addr) = var("BIND_ADDR") {
            cfg.bind_addr = addr
                .parse()
                .map_err(|_| ServiceError::Config(format!("BIND_ADDR {addr:?} is not host:port")))?;
        }
        if let Some(path) = var("TAGGER_CONFIG") {
            cfg.tagger = load_tagger_config(Path::new(&path))?;
        }
        cfg.static_dir = var("STATIC_DIR").map(PathBuf::from);
        Ok(cfg)
    }
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct TaggerToml {
    /// Word-list file, relative to the config file.
    lexicon: Option<PathBuf>,
    verbs: Option<Vec<String>>,
    ner_mode: Option<NerMode>,
    highlight_scheme: Option<HighlightScheme>,
    language: Option<String>,
}

/// Loads a tagger configuration from TOML:
///
/// ```toml
/// lexicon = "verbs.txt"
/// highlight_scheme = "VERBS"
/// ner_mode = "CAPITALIZATION_HEURISTIC"
/// language = "en"
/// ```
pub fn load_tagger_config(path: &Path) -> Result<TaggerConfig, ServiceError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| ServiceError::Config(format!("{}: {e}", path.display())))?;
    parse_tagger_config(&text, path.parent().unwrap_or(Path::new(".")))
}

pub fn parse_tagger_config(text: &str, base: &Path) -> Result<TaggerConfig, ServiceError> {
    let t: TaggerToml = toml::from_str(text).map_err(|e| ServiceError::Config(e.to_string()))?;
    let mut cfg = TaggerConfig::default();
    if let Some(file) = t.lexicon {
        let path = base.join(file);
        let words = std::fs::read_to_string(&path)
            .map_err(|e| ServiceError::Config(format!("{}: {e}", path.display())))?;
        cfg.verb_lexicon = parse_lexicon(&words);
    }
    if let Some(verbs) = t.verbs {
        cfg = cfg.with_lexicon(verbs);
    }
    if let Some(m) = t.ner_mode {
        cfg.ner_mode = m;
    }
    if let Some(s) = t.highlight_scheme {
        cfg.highlight_scheme = s;
    }
    if let Some(l) = t.language {
        cfg.language = l;
    }
    Ok(cfg)
}
