use std::env;
use std::path::PathBuf;

fn main() {
    let dir = PathBuf::from(env::var("CARGO_MANIFEST_DIR").unwrap());
    println!("cargo:rerun-if-changed=src/lib.rs");
    let out = dir.join("include").join("tatm.h");
    std::fs::create_dir_all(out.parent().unwrap()).unwrap();
    let mut config = cbindgen::Config::default();
    config.enumeration.rename_variants = cbindgen::RenameRule::QualifiedScreamingSnakeCase;
    cbindgen::Builder::new()
        .with_config(config)
        .with_crate(&dir)
        .with_language(cbindgen::Language::C)
        .with_include_guard("TATM_H")
        .with_cpp_compat(true)
        .with_documentation(true)
        .generate()
        .expect("unable to generate C bindings")
        .write_to_file(out);
}
