use std::path::Path;

use compactvrp::io::*;
use compactvrp_core::oracle::oracle_front;

fn fixture_bytes(name: &str) -> Vec<u8> {
    std::fs::read(Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)).unwrap()
}

#[test]
fn bundled_instances_are_canonical() {
    for name in ["tiny1.json", "fixture7.json", "fixture9.json", "mutation-base.json"] {
        let bytes = fixture_bytes(name);
        let inst = load_instance(&bytes).unwrap();
        assert_eq!(write_instance(&inst).as_bytes(), &bytes[..], "{name}");
    }
}

#[test]
fn derived_front_round_trips() {
    let inst = load_instance(&fixture_bytes("fixture7.json")).unwrap();
    let front = oracle_front(&inst, 9).unwrap();
    let three = compactvrp_core::ParetoFront::new(front.points()[..3].to_vec()).unwrap();
    let doc = FrontDoc::from_front(inst.name(), "oracle", &three);

    let json = write_front_json(&doc);
    let back = read_front_json(json.as_bytes()).unwrap();
    assert_eq!(back, doc);
    assert_eq!(back.to_front(&inst).unwrap(), three);
    assert_eq!(write_front_json(&back), json);

    let csv = write_front_csv(&doc);
    let back = read_front_csv(csv.as_bytes(), inst.name(), "oracle").unwrap();
    assert_eq!(back.objectives(), three.objectives());
    assert_eq!(write_front_csv(&back), csv);
}

#[test]
fn front_reader_rejects_bad_documents() {
    let inst = load_instance(&fixture_bytes("tiny1.json")).unwrap();
    assert!(read_front_json(b"{\"instance\": \"x\"}").is_err());
    let doc = read_front_json(br#"{"instance": "tiny1", "method": "econ", "points": [{"f1": 10, "f2": 0, "routes": [[1, 1]]}]}"#).unwrap();
    assert!(matches!(doc.to_front(&inst), Err(FormatError::Point { index: 0, .. })));
    assert!(read_front_csv(b"f1,f2\n10,x\n", "t", "m").is_err());
}

#[test]
fn instance_errors_name_the_invariant() {
    let tiny = String::from_utf8(fixture_bytes("fixture7.json")).unwrap();
    let broken = tiny.replacen("\"distance\": [\n    [0, ", "\"distance\": [\n    [0, 999", 1);
    let err = load_instance(broken.as_bytes()).unwrap_err().to_string();
    assert!(err.contains("distance matrix not symmetric"), "{err}");
}
