use seifert_volumes::torsion::format::{parse_complex, write_complex};
use seifert_volumes::torsion::{chain_torsion, circle_torsion, HomologyBasis};
use seifert_volumes::linalg::Mat;
use std::path::Path;

#[test]
fn golden_complexes() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let index = std::fs::read_to_string(dir.join("complexes.txt")).unwrap();
    let mut seen = 0;
    for line in index.lines().filter(|l| !l.starts_with('#') && !l.trim().is_empty()) {
        let (file, expected) = line.split_once(' ').unwrap();
        let text = std::fs::read_to_string(dir.join(file)).unwrap();
        let parsed = parse_complex(&text).unwrap();
        let hb = parsed.homology.clone().unwrap_or_else(|| HomologyBasis::empty(&parsed.complex));
        let t = chain_torsion(&parsed.complex, &hb).unwrap();
        assert_eq!(t.magnitude.to_string(), expected.trim(), "{file}");
        let again = parse_complex(&write_complex(&parsed)).unwrap();
        assert_eq!(again, parsed, "{file} round trip");
        seen += 1;
    }
    assert_eq!(seen, 2);
}

#[test]
fn quarter_turn_agrees_with_closed_form() {
    use seifert_volumes::linalg::qi;
    let phi = Mat::from_rows(vec![vec![qi(0), qi(-1), qi(0)], vec![qi(1), qi(0), qi(0)], vec![qi(0), qi(0), qi(1)]]);
    assert_eq!(circle_torsion(&phi, 0.0).unwrap().torsion.magnitude.to_string(), "1/2");
}
