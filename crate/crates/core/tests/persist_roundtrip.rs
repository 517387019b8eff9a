use proptest::prelude::*;
use srindex::build::{build_index, BuildOptions};
use srindex::persist::{self, HEADER_LEN};
use srindex::{PersistError, Text, Variant};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn round_trip_is_bit_exact(raw in proptest::collection::vec(b'a'..b'f', 2..400), s in 1usize..20, v in 0u8..3) {
        let text = Text::from_bytes(&raw).unwrap();
        prop_assume!(s < text.n());
        let idx = build_index(&text, &BuildOptions::new(s, Variant::from_u8(v).unwrap())).unwrap();
        let bytes = persist::to_bytes(&idx);
        let back = persist::from_bytes(&bytes).unwrap();
        prop_assert_eq!(persist::to_bytes(&back), bytes.clone());
        let total: usize = persist::component_sizes(&back).iter().map(|c| c.bytes).sum();
        prop_assert_eq!(total + HEADER_LEN, bytes.len());
        for m in [1usize, 2, 3, 5] {
            if m < raw.len() {
                let p = &raw[raw.len() / 3..][..m.min(raw.len() - raw.len() / 3)];
                prop_assert_eq!(idx.locate(p).unwrap(), back.locate(p).unwrap());
                prop_assert_eq!(idx.count(p).unwrap(), back.count(p).unwrap());
            }
        }
    }

    #[test]
    fn truncation_never_loads(cut in 0usize..10_000) {
        let text = Text::from_bytes(b"mississippi river banks").unwrap();
        let idx = build_index(&text, &BuildOptions::new(3, Variant::ValidArea)).unwrap();
        let bytes = persist::to_bytes(&idx);
        let cut = cut % bytes.len();
        prop_assert!(persist::from_bytes(&bytes[..cut]).is_err());
    }
}

#[test]
fn file_round_trip() {
    let dir = std::env::temp_dir().join(format!("srindex-persist-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("x.srix");
    let text = Text::from_bytes(b"abracadabra").unwrap();
    let idx = build_index(&text, &BuildOptions::new(4, Variant::Valid)).unwrap();
    let written = persist::save_file(&idx, &path).unwrap();
    assert_eq!(written as u64, std::fs::metadata(&path).unwrap().len());
    assert_eq!(persist::load_file(&path).unwrap(), idx);
    assert!(matches!(persist::load_file(dir.join("missing")), Err(PersistError::Io(_))));
    std::fs::remove_dir_all(&dir).unwrap();
}
