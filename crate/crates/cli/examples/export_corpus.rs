//! Regenerate `corpus/` from the built-in instances.

use std::fs;
use std::path::Path;

fn main() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("corpus");
    fs::create_dir_all(&dir).expect("corpus directory");
    for (name, p) in diffcoh::bundled::standard_files().expect("corpus instances") {
        fs::write(dir.join(&name), diffcoh::problem::serialize(&p)).expect("write");
        println!("{name}");
    }
}
