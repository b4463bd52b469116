mod common;

use std::fs;

use common::random_bytes;
use gcdxor::{decrypt_file, encrypt_file, histogram, recover_from_keys};
use proptest::prelude::*;

#[test]
fn encryption_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src");
    fs::write(&src, random_bytes(10_000, 7)).unwrap();
    let (c1, k1, c2, k2) = (
        dir.path().join("c1"),
        dir.path().join("k1"),
        dir.path().join("c2"),
        dir.path().join("k2"),
    );
    encrypt_file(&src, &c1, &k1).unwrap();
    encrypt_file(&src, &c2, &k2).unwrap();
    assert_eq!(fs::read(&c1).unwrap(), fs::read(&c2).unwrap());
    assert_eq!(fs::read(&k1).unwrap(), fs::read(&k2).unwrap());
}

#[test]
fn outputs_are_replaced_atomically() {
    let dir = tempfile::tempdir().unwrap();
    let (src, ct, key) = (
        dir.path().join("src"),
        dir.path().join("ct"),
        dir.path().join("key"),
    );
    fs::write(&ct, b"stale").unwrap();
    fs::write(&src, b"fresh data").unwrap();
    encrypt_file(&src, &ct, &key).unwrap();
    assert_eq!(fs::read(&ct).unwrap().len(), 10);
    let names: Vec<_> = fs::read_dir(dir.path())
        .unwrap()
        .map(|e| e.unwrap().file_name().into_string().unwrap())
        .collect();
    assert_eq!(names.len(), 3, "leftover temporaries: {names:?}");
}

#[test]
fn histogram_of_random_file() {
    let dir = tempfile::tempdir().unwrap();
    let src = dir.path().join("src");
    fs::write(&src, random_bytes(65536, 11)).unwrap();
    assert_eq!(histogram(&src).unwrap().total(), 65536);
    let empty = dir.path().join("empty");
    fs::write(&empty, b"").unwrap();
    assert_eq!(histogram(&empty).unwrap().total(), 0);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(32))]

    #[test]
    fn file_round_trip(data in proptest::collection::vec(any::<u8>(), 0..200_000)) {
        let dir = tempfile::tempdir().unwrap();
        let (src, ct, key, out) = (
            dir.path().join("src"),
            dir.path().join("ct"),
            dir.path().join("key"),
            dir.path().join("out"),
        );
        fs::write(&src, &data).unwrap();
        let report = encrypt_file(&src, &ct, &key).unwrap();
        prop_assert_eq!(report.bytes_processed, data.len() as u64);
        prop_assert_eq!(fs::metadata(&ct).unwrap().len(), data.len() as u64);
        decrypt_file(&ct, &key, &out).unwrap();
        prop_assert_eq!(fs::read(&out).unwrap(), data.clone());
        prop_assert_eq!(recover_from_keys(&key).unwrap(), data);
    }
}
