use std::path::Path;

use selfsim::io::{read_spec, ZipperSpec};
use selfsim::{corpus, parse_spec, Zipper};

fn corpus_path(name: &str) -> std::path::PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../corpus").join(format!("{name}.zipper"))
}

fn bits(z: &Zipper) -> Vec<u64> {
    let mut out = Vec::new();
    for s in z.maps() {
        out.push(s.ratio().to_bits());
        out.extend(s.orthogonal().iter().map(|v| v.to_bits()));
        out.extend(s.translation().coords().iter().map(|v| v.to_bits()));
    }
    for v in z.vertices() {
        out.extend(v.coords().iter().map(|c| c.to_bits()));
    }
    out.extend(z.signature().bits().into_iter().map(u64::from));
    out
}

#[test]
fn every_file_matches_its_constructor() {
    for (name, expected) in corpus::all() {
        let parsed = parse_spec(&corpus_path(name)).unwrap_or_else(|e| panic!("{name}: {e}"));
        assert_eq!(bits(&parsed), bits(&expected), "{name}");
    }
}

#[test]
fn files_round_trip_through_the_serializer() {
    for (name, _) in corpus::all() {
        let spec = read_spec(&corpus_path(name)).unwrap();
        assert_eq!(spec.name.as_deref(), Some(name));
        let again = ZipperSpec::parse(&spec.to_toml()).unwrap();
        assert_eq!(again, spec, "{name}");
        assert_eq!(bits(&again.build().unwrap()), bits(&spec.build().unwrap()), "{name}");
    }
}

#[test]
fn diagnostics_carry_the_file_name() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.zipper");
    let text = std::fs::read_to_string(corpus_path("koch"))
        .unwrap()
        .replace("reflect = [false, false, false, false]", "reflect = [false]");
    std::fs::write(&path, text).unwrap();
    let err = parse_spec(&path).unwrap_err().to_string();
    assert!(err.contains("broken.zipper: maps.reflect"), "{err}");
}
