use proptest::prelude::*;

use lsmix::formats::{fmt_f64, write_csv};
use lsmix::scenario::{MuSpec, Scenario};

proptest! {
    #[test]
    fn csv_values_round_trip(v in prop::collection::vec(prop::num::f64::NORMAL | prop::num::f64::ZERO, 1..20)) {
        let mut out = Vec::new();
        write_csv(&mut out, &["v"], &[&v]).unwrap();
        let text = String::from_utf8(out).unwrap();
        let back: Vec<f64> = text.lines().skip(1).map(|l| l.parse().unwrap()).collect();
        prop_assert_eq!(back, v);
    }

    #[test]
    fn seventeen_significant_digits(x in prop::num::f64::NORMAL) {
        let s = fmt_f64(x);
        let mantissa = s.trim_start_matches('-').split('e').next().unwrap();
        prop_assert_eq!(mantissa.chars().filter(|c| c.is_ascii_digit()).count(), 17);
    }

    #[test]
    fn explicit_mu_parses(mu in prop::collection::vec(-10.0f64..10.0, 5)) {
        let list: Vec<String> = mu.iter().map(|v| fmt_f64(*v)).collect();
        let s = Scenario::parse(&format!("n = 5\nsigma = 1\np = 2\nmu = {}\n", list.join(", "))).unwrap();
        prop_assert_eq!(s.mu, MuSpec::Explicit(mu));
    }
}
