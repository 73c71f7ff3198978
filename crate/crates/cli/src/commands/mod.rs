pub mod build;
pub mod figure;
pub mod plan;
pub mod report;
pub mod verify;

use std::path::PathBuf;

use polyembed::MapNode;

use crate::config::RunConfig;
use crate::CliError;

/// A path, or a descriptor name under `<out>/maps/`.
pub fn resolve_map(cfg: &RunConfig, name: &str) -> Result<(String, MapNode), CliError> {
    let direct = PathBuf::from(name);
    let path = if direct.is_file() {
        direct
    } else {
        cfg.out_dir().join("maps").join(format!("{name}.json"))
    };
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Usage(format!("map `{name}` not found ({}: {e})", path.display())))?;
    let node = MapNode::from_descriptor(&text)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or(name).to_string();
    Ok((stem, node))
}
