//! Family files shipped with the tool.

use std::path::Path;

pub const BUNDLED: [(&str, &str); 8] = [
    ("cone.fam", include_str!("../corpus/cone.fam")),
    ("whitney.fam", include_str!("../corpus/whitney.fam")),
    ("c10.fam", include_str!("../corpus/c10.fam")),
    ("cusp.fam", include_str!("../corpus/cusp.fam")),
    ("cartan.fam", include_str!("../corpus/cartan.fam")),
    ("weights1.fam", include_str!("../corpus/weights1.fam")),
    ("weights2.fam", include_str!("../corpus/weights2.fam")),
    ("douady.fam", include_str!("../corpus/douady.fam")),
];

pub fn bundled(name: &str) -> Option<&'static str> {
    let want = if name.ends_with(".fam") { name.to_string() } else { format!("{name}.fam") };
    BUNDLED.iter().find(|(n, _)| *n == want).map(|(_, t)| *t)
}

pub fn bundled_items() -> Vec<(String, String)> {
    BUNDLED.iter().map(|(n, t)| (n.to_string(), t.to_string())).collect()
}

/// Every `*.fam` file in `dir`, by file name.
pub fn items_in(dir: &Path) -> std::io::Result<Vec<(String, String)>> {
    let mut out = Vec::new();
    for entry in std::fs::read_dir(dir)? {
        let path = entry?.path();
        if path.extension().is_some_and(|e| e == "fam") {
            let name = path.file_name().unwrap_or_default().to_string_lossy().into_owned();
            out.push((name, std::fs::read_to_string(&path)?));
        }
    }
    out.sort();
    Ok(out)
}

/// A file path, or failing that the name of a bundled family.
pub fn load(arg: &str) -> std::io::Result<String> {
    match std::fs::read_to_string(arg) {
        Ok(t) => Ok(t),
        Err(e) => {
            let name = Path::new(arg).file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
            if Path::new(arg).components().count() <= 1 {
                if let Some(t) = bundled(&name) {
                    return Ok(t.to_string());
                }
            }
            Err(e)
        }
    }
}
