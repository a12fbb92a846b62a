use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(std::env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");
    println!("cargo:rerun-if-changed=cbindgen.toml");
    let config = cbindgen::Config::from_file(dir.join("cbindgen.toml")).expect("cbindgen.toml");
    let header = dir.join("include").join("fcakit.h");
    match cbindgen::generate_with_config(&dir, config) {
        Ok(bindings) => {
            // write_to_file leaves the file alone when nothing changed
            bindings.write_to_file(&header);
        }
        Err(e) => panic!("cannot generate {}: {e}", header.display()),
    }
}
