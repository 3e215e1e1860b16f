//! File loading with reference resolution: references inside `.dfib`,
//! `.rmcat`, `.theory` and `.model` files are resolved relative to the
//! referring file's directory.

use crate::dfib::{parse_dfib, DFib, DFibError};
use crate::fincat::{parse_fincat, FinCat};
use crate::model::{parse_model, ModelError, ParsedModel};
use crate::rmcat::{parse_rmcat, parse_theory, RMCat, RMCatError, Theory};
use std::path::{Path, PathBuf};
use std::sync::Arc;

pub struct Loader {
    base_dir: PathBuf,
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "unnamed".into())
}

impl Loader {
    pub fn for_file(path: &Path) -> Loader {
        Loader {
            base_dir: path.parent().unwrap_or(Path::new(".")).to_path_buf(),
        }
    }

    fn resolve_path(&self, reference: &str) -> PathBuf {
        let p = Path::new(reference);
        if p.is_absolute() {
            p.to_path_buf()
        } else {
            self.base_dir.join(p)
        }
    }

    pub fn fincat(&self, path: &Path) -> Result<Arc<FinCat>, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        parse_fincat(&stem(path), &text)
            .map(Arc::new)
            .map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn fincat_ref(&self, reference: &str) -> Result<Arc<FinCat>, String> {
        let path = self.resolve_path(reference);
        Loader::for_file(&path).fincat(&path)
    }

    pub fn dfib(&self, path: &Path) -> Result<Arc<DFib>, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let loader = Loader::for_file(path);
        let resolve = |r: &str| -> Result<Arc<FinCat>, DFibError> {
            loader
                .fincat_ref(r)
                .map_err(|e| DFibError::Parse(0, e))
        };
        parse_dfib(&text, &resolve)
            .map(Arc::new)
            .map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn rmcat(&self, path: &Path) -> Result<Arc<RMCat>, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let loader = Loader::for_file(path);
        let resolve = |r: &str| -> Result<Arc<FinCat>, RMCatError> {
            loader
                .fincat_ref(r)
                .map_err(|e| RMCatError::Parse(0, e))
        };
        parse_rmcat(&stem(path), &text, &resolve)
            .map(Arc::new)
            .map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn theory(&self, path: &Path) -> Result<(Arc<RMCat>, Theory), String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let loader = Loader::for_file(path);
        let resolve = |r: &str| -> Result<Arc<RMCat>, RMCatError> {
            let p = loader.resolve_path(r);
            Loader::for_file(&p)
                .rmcat(&p)
                .map_err(|e| RMCatError::Parse(0, e))
        };
        parse_theory(&text, &resolve).map_err(|e| format!("{}: {e}", path.display()))
    }

    pub fn model(&self, path: &Path) -> Result<ParsedModel, String> {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let loader = Loader::for_file(path);
        struct Io {
            loader: Loader,
        }
        impl crate::model::ModelResolver for Io {
            fn fincat(&self, r: &str) -> Result<Arc<FinCat>, ModelError> {
                self.loader
                    .fincat_ref(r)
                    .map_err(|e| ModelError::Parse(0, e))
            }
            fn dfib(&self, r: &str, _base: &Arc<FinCat>) -> Result<Arc<DFib>, ModelError> {
                let p = self.loader.resolve_path(r);
                Loader::for_file(&p)
                    .dfib(&p)
                    .map_err(|e| ModelError::Parse(0, e))
            }
            fn rmcat(&self, r: &str) -> Result<Arc<RMCat>, ModelError> {
                let p = self.loader.resolve_path(r);
                Loader::for_file(&p)
                    .rmcat(&p)
                    .map_err(|e| ModelError::Parse(0, e))
            }
        }
        parse_model(&text, &Io { loader })
            .map_err(|e| format!("{}: {e}", path.display()))
    }
}
