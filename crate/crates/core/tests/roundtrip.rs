mod common;

use common::{arb_project, atm};
use proptest::prelude::*;
use srs_core::format::{parse, serialize, ParseOutcome};

fn line_count(bytes: &[u8]) -> usize {
    let n = bytes.split(|b| *b == b'\n').count();
    let n = if bytes.ends_with(b"\n") { n - 1 } else { n };
    n.max(1)
}

fn assert_lines_in_range(bytes: &[u8]) {
    if let ParseOutcome::Failure(diags) = parse(bytes) {
        assert!(!diags.is_empty());
        let max = line_count(bytes);
        for d in diags {
            assert!(d.line >= 1 && d.line <= max, "{d} outside 1..={max}");
        }
    }
}

#[test]
fn fixture_is_canonical() {
    let bytes = std::fs::read(common::fixture_dir().join("atm.srs")).unwrap();
    assert_eq!(serialize(&atm()).as_bytes(), &bytes[..]);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn round_trip_and_idempotence(p in arb_project()) {
        p.check_invariants().unwrap();
        let s = serialize(&p);
        let back = parse(s.as_bytes());
        prop_assert_eq!(&back, &ParseOutcome::Success(p.clone()));
        let ParseOutcome::Success(q) = back else { unreachable!() };
        prop_assert_eq!(serialize(&q), s.clone());
        prop_assert!(s.ends_with('\n') && !s.ends_with("\n\n"));
        prop_assert!(!s.contains('\r'));
    }

    #[test]
    fn crlf_input_parses_the_same(p in arb_project()) {
        let s = serialize(&p).replace('\n', "\r\n");
        prop_assert_eq!(parse(s.as_bytes()), ParseOutcome::Success(p));
    }

    #[test]
    fn parser_is_total_on_bytes(bytes in prop::collection::vec(any::<u8>(), 0..400)) {
        assert_lines_in_range(&bytes);
    }

    #[test]
    fn parser_is_total_on_damaged_files(p in arb_project(), cut in any::<prop::sample::Index>(), junk in "[\\[\\]@#a-z: \n-]{0,20}") {
        let s = serialize(&p);
        let at = cut.index(s.len() + 1);
        let at = (0..=at).rev().find(|i| s.is_char_boundary(*i)).unwrap();
        let damaged = format!("{}{}{}", &s[..at], junk, &s[at..]);
        assert_lines_in_range(damaged.as_bytes());
    }
}
