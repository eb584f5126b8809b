use tms_core::catalog;
use tms_core::scheme::format::{parse, serialize};

#[test]
fn shipped_files_match_the_catalog() {
    let dir = concat!(env!("CARGO_MANIFEST_DIR"), "/../../data");
    for name in catalog::NAMES {
        let text = std::fs::read_to_string(format!("{dir}/{name}.tms")).unwrap();
        let built = catalog::get(name).unwrap().scheme;
        let read = parse(&text).unwrap();
        assert_eq!(read, built, "{name}");
        assert_eq!(serialize(&read), serialize(&built), "{name}");
    }
}

#[test]
fn round_trip_is_stable() {
    for name in catalog::NAMES {
        let s = catalog::get(name).unwrap().scheme;
        let once = serialize(&s);
        assert_eq!(serialize(&parse(&once).unwrap()), once, "{name}");
    }
}
