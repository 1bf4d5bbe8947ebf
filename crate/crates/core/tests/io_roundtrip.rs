use casimir_core::io::{Cell, Table};
use casimir_core::readout::{read_spring_table, write_spring_table};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop::num::f64::NORMAL | prop::num::f64::SUBNORMAL | prop::num::f64::ZERO
}

proptest! {
    #[test]
    fn numeric_csv_cells_reparse_exactly(values in prop::collection::vec(finite(), 1..20)) {
        let mut t = Table::new(&["x"]);
        for v in &values {
            t.push(vec![Cell::Num(*v)]);
        }
        let mut buf = Vec::new();
        t.write_csv(&mut buf).unwrap();
        let mut reader = csv::Reader::from_reader(buf.as_slice());
        let back: Vec<f64> = reader.records().map(|r| r.unwrap()[0].parse().unwrap()).collect();
        prop_assert_eq!(back.len(), values.len());
        for (a, b) in back.iter().zip(&values) {
            prop_assert_eq!(a.to_bits(), b.to_bits());
        }
    }

    #[test]
    fn spring_table_round_trip(data in prop::collection::vec((finite(), finite()), 0..20)) {
        let mut buf = Vec::new();
        write_spring_table(&data, &mut buf).unwrap();
        let back = read_spring_table(buf.as_slice()).unwrap();
        prop_assert_eq!(back.len(), data.len());
        for (a, b) in back.iter().zip(&data) {
            prop_assert_eq!(a.0.to_bits(), b.0.to_bits());
            prop_assert_eq!(a.1.to_bits(), b.1.to_bits());
        }
    }
}
