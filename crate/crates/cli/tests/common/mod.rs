#![allow(dead_code)]

use std::path::PathBuf;
use std::process::{Command, Output};

pub fn gbord(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gbord"))
        .args(args)
        .current_dir(env!("CARGO_MANIFEST_DIR"))
        .output()
        .expect("gbord runs")
}

pub fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden")
}

/// Golden cases: file stem and arguments (JSON output is added by the runner).
pub const GOLDEN: &[(&str, &[&str])] = &[
    ("lazard_ranks", &["lazard", "--max-degree", "6", "--what", "ranks"]),
    ("lazard_basis", &["lazard", "--max-degree", "5", "--what", "basis"]),
    ("lazard_pn", &["lazard", "--max-degree", "6", "--what", "pn"]),
    ("fgl_additive", &["fgl", "--law", "additive", "--order", "4"]),
    ("fgl_multiplicative", &["fgl", "--law", "multiplicative", "--order", "4"]),
    ("fgl_universal", &["fgl", "--law", "universal", "--order", "5"]),
    ("weyl_sl3", &["weyl", "--group", "SL3"]),
    ("weyl_g2", &["weyl", "--group", "G2"]),
    ("weyl_so5_file", &["weyl", "--root-datum", "tests/data/so5.json", "--summary"]),
    ("torsion_sl2", &["torsion-index", "--group", "SL2"]),
    ("torsion_sl3", &["torsion-index", "--group", "SL3"]),
    ("torsion_gl2", &["torsion-index", "--group", "GL2"]),
    ("torsion_sp4", &["torsion-index", "--group", "Sp4"]),
    ("torsion_pgl2", &["torsion-index", "--group", "PGL2"]),
    ("torsion_g2", &["torsion-index", "--group", "G2"]),
    ("torsion_pgl2_components", &["torsion-index", "--group", "PGL2", "--components", "2"]),
    ("torsion_so5_file", &["torsion-index", "--root-datum", "tests/data/so5.json"]),
    ("twisted_sl2_universal", &["twisted", "--group", "SL2", "--order", "3"]),
    ("twisted_gl2_additive", &["twisted", "--group", "GL2", "--law", "additive", "--order", "4"]),
    (
        "twisted_torus2_multiplicative",
        &["twisted", "--group", "Torus(2)", "--law", "multiplicative", "--order", "2", "--degree-bound", "1"],
    ),
    ("btpair_r1", &["btpair", "--rank", "1", "--max-degree", "5"]),
    ("btpair_r2", &["btpair", "--rank", "2", "--max-degree", "5"]),
    ("coinv_sl2_1", &["coinv", "--group", "SL2", "--degree", "1"]),
    ("coinv_sl2_5", &["coinv", "--group", "SL2", "--degree", "5"]),
    ("coinv_gl2_3", &["coinv", "--group", "GL2", "--degree", "3"]),
    ("duality_torus1", &["verify-duality", "--group", "Torus(1)", "--max-degree", "6"]),
    ("duality_torus2", &["verify-duality", "--group", "Torus(2)", "--max-degree", "6"]),
    ("duality_sl2", &["verify-duality", "--group", "SL2", "--max-degree", "6"]),
    ("duality_gl2", &["verify-duality", "--group", "GL2", "--max-degree", "4"]),
    ("duality_pgl2", &["verify-duality", "--group", "PGL2", "--max-degree", "4"]),
];

/// Compares every golden case byte for byte; with `GBORD_BLESS=1` the files
/// are rewritten instead. Returns the names of mismatching cases.
pub fn check_goldens() -> Vec<String> {
    let bless = std::env::var("GBORD_BLESS").is_ok_and(|v| v == "1");
    let mut bad = Vec::new();
    for (name, args) in GOLDEN {
        let mut full = vec!["--format", "json"];
        full.extend_from_slice(args);
        let out = gbord(&full);
        let path = golden_dir().join(format!("{name}.json"));
        if !out.status.success() {
            bad.push(format!("{name}: exit {:?}", out.status.code()));
            continue;
        }
        if bless {
            std::fs::write(&path, &out.stdout).expect("golden writable");
            continue;
        }
        match std::fs::read(&path) {
            Ok(expect) if expect == out.stdout => {}
            Ok(_) => bad.push(format!("{name}: output differs from {}", path.display())),
            Err(e) => bad.push(format!("{name}: {e}")),
        }
    }
    bad
}
