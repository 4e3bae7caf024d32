use std::path::Path;

use qbcat::fixtures;
use qbcat::io::read_qcategory;

#[test]
fn json_fixtures_match_builtin_ones() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures");
    for (file, builtin) in [
        ("e_ac.json", fixtures::e_ac()),
        ("e_ch.json", fixtures::e_ch()),
        ("e_x.json", fixtures::e_x()),
    ] {
        assert_eq!(read_qcategory(&dir.join(file)).unwrap(), builtin, "{file}");
    }
}
