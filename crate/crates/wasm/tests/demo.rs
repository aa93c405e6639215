use striptok_wasm::{build_shape, decode_ids, encode, SHAPES};

#[test]
fn every_shape_encodes_and_decodes_back() {
    for name in SHAPES {
        let enc = encode(name, 3).unwrap();
        let faces: usize = enc.strips.iter().map(|s| s.faces.len()).sum();
        assert_eq!(faces, enc.faces, "{name}");
        assert_eq!(enc.classes.len(), enc.tokens.len());
        assert_eq!(enc.transitions, enc.strips.len());
        let dec = decode_ids(&enc.tokens, enc.stride).unwrap();
        assert_eq!(dec.faces.len(), enc.faces, "{name}");
        assert_eq!(dec.report.consumed_tokens, enc.tokens.len());
    }
}

#[test]
fn positions_stay_in_the_unit_cube() {
    let enc = encode("icosphere", 2).unwrap();
    let inside = |p: &[f64; 3]| p.iter().all(|c| (0.0..=1.0).contains(c));
    assert!(enc.strips.iter().flat_map(|s| s.faces.iter().flatten()).all(inside));
}

#[test]
fn garbage_decodes_without_error() {
    let ids: Vec<u16> = (0..500).map(|i| (i * 7919 % 5000) as u16).collect();
    let dec = decode_ids(&ids, 2).unwrap();
    assert_eq!(dec.report.accounted_tokens(), ids.len());
}

#[test]
fn bad_arguments_are_errors() {
    assert!(build_shape("teapot", 3).is_err());
    assert!(decode_ids(&[], 3).is_err());
    assert!(decode_ids(&[], 1).unwrap().faces.is_empty());
}
