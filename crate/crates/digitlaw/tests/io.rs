use digitlaw::io::{parse_linelist, write_linelist, write_report_json, LineList, Source};
use digitlaw_core::{conformance_report, Line};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

fn line() -> impl Strategy<Value = Line> {
    (finite(), finite()).prop_map(|(energy, strength)| Line {
        energy,
        strength: strength.abs(),
    })
}

fn source() -> impl Strategy<Value = Source> {
    prop_oneof![
        Just(Source::File),
        Just(Source::Simulated),
        Just(Source::Fixture)
    ]
}

proptest! {
    #[test]
    fn linelist_round_trip(
        lines in prop::collection::vec(line(), 0..200),
        label in "[ -~]{0,40}",
        source in source(),
    ) {
        let list = LineList { lines, label, source };
        let text = write_linelist(&list);
        let back = parse_linelist(&text).unwrap();
        prop_assert_eq!(back.lines.len(), list.lines.len());
        for (a, b) in back.lines.iter().zip(&list.lines) {
            prop_assert_eq!(a.energy.to_bits(), b.energy.to_bits());
            prop_assert_eq!(a.strength.to_bits(), b.strength.to_bits());
        }
        prop_assert_eq!(back.source, list.source);
        prop_assert_eq!(&back.label, &list.label);
        prop_assert_eq!(write_linelist(&back), text);
    }

    #[test]
    fn comma_and_whitespace_layouts_agree(rows in prop::collection::vec((finite(), finite()), 1..50)) {
        let spaced: String = rows.iter().map(|(e, s)| format!("{e:e}   {:e}\n", s.abs())).collect();
        let comma: String = rows.iter().map(|(e, s)| format!("{e:e},{:e}\n", s.abs())).collect();
        prop_assert_eq!(parse_linelist(&spaced).unwrap().lines, parse_linelist(&comma).unwrap().lines);
    }

    #[test]
    fn json_round_trip(values in prop::collection::vec(1e-300f64..1e300, 1..300)) {
        let report = conformance_report(&values, 1, 10, 0.0).unwrap();
        let v: serde_json::Value = serde_json::from_str(&write_report_json(&report)).unwrap();
        prop_assert_eq!(v["total"].as_u64().unwrap(), report.counts_total);
        prop_assert_eq!(v["chi_square"].as_f64().unwrap().to_bits(), report.chi_square.to_bits());
        prop_assert_eq!(v["p_value"].as_f64().unwrap().to_bits(), report.p_value.to_bits());
        prop_assert_eq!(v["mad"].as_f64().unwrap().to_bits(), report.mad.to_bits());
        for row in &report.rows {
            let key = row.digits.to_string();
            prop_assert_eq!(v["observed"][&key].as_f64().unwrap().to_bits(), row.observed.to_bits());
            prop_assert_eq!(v["expected"][&key].as_f64().unwrap().to_bits(), row.expected.to_bits());
        }
    }
}

#[test]
fn malformed_row_reports_position() {
    let err = parse_linelist("# header\n1 2\n3 4\n5 x7\n").unwrap_err();
    let msg = err.to_string();
    assert!(msg.contains("line 4") && msg.contains("x7"), "{msg}");
}
