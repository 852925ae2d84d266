//! OHPC model files: a versioned JSON dump of trained word models.

use std::path::Path;

use homcheck_core::ohpc::Models;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MODEL_FORMAT: &str = "homcheck-ohpc-models";
pub const MODEL_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct ModelFile {
    format: String,
    version: u32,
    models: Models,
}

pub fn to_string(models: &Models) -> String {
    let file = ModelFile {
        format: MODEL_FORMAT.to_owned(),
        version: MODEL_VERSION,
        models: models.clone(),
    };
    let mut s = serde_json::to_string(&file).expect("models serialize");
    s.push('\n');
    s
}

pub fn from_str(path: &Path, text: &str) -> Result<Models> {
    let file: ModelFile = serde_json::from_str(text).map_err(|source| Error::Json {
        path: path.to_path_buf(),
        source,
    })?;
    if file.format != MODEL_FORMAT || file.version != MODEL_VERSION {
        return Err(Error::parse(
            path,
            1,
            format!(
                "unsupported model file {} v{} (expected {MODEL_FORMAT} v{MODEL_VERSION})",
                file.format, file.version
            ),
        ));
    }
    Ok(file.models)
}

pub fn save(path: &Path, models: &Models) -> Result<()> {
    crate::formats::write_file(path, &to_string(models))
}

pub fn load(path: &Path) -> Result<Models> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    from_str(path, &text)
}

#[cfg(test)]
mod tests {
    use super::*;
    use homcheck_core::ohpc::{FeatureConfig, FeatureVector, TrainScope, WordModel};
    use homcheck_core::{Pos, Word};

    #[test]
    fn round_trip() {
        let f: FeatureVector = ["w:-1:follow".to_string(), "b:lead".to_string()].into_iter().collect();
        let m = WordModel::train(
            Word::new("lead", Pos::Noun).unwrap(),
            [("lead%1:27:00::", &f), ("lead%1:04:00::", &f)],
        )
        .unwrap();
        let models = Models::from_models(FeatureConfig::default(), TrainScope::Homonymous, vec![m]);
        let text = to_string(&models);
        assert_eq!(from_str(Path::new("m"), &text).unwrap(), models);
        let bad = text.replace("\"version\":1", "\"version\":9");
        assert!(from_str(Path::new("m"), &bad).is_err());
    }
}
