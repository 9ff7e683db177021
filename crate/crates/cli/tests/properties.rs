use proptest::prelude::*;
use tailbound_cli::format::Display;
use tailbound_cli::run_args;

fn rows(text: &str) -> Vec<Vec<f64>> {
    text.lines()
        .skip(1)
        .map(|l| l.split(',').map(|c| c.parse().unwrap()).collect())
        .collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn significant_display_round_trips(v in 1e-300f64..1e300, digits in 1usize..10) {
        let shown = Display::Significant(digits).render(v);
        let back: f64 = shown.parse().unwrap();
        let rel = (back - v).abs() / v;
        prop_assert!(rel <= 0.5 * 10f64.powi(1 - digits as i32) * (1.0 + 1e-9), "{v} -> {shown}");
    }

    #[test]
    fn tabular_display_parses(v in 0.0f64..50.0) {
        let back: f64 = Display::Tabular.render(v).parse().unwrap();
        prop_assert!((back - v).abs() <= 0.0005 + 0.05 * v.min(0.01));
    }

    #[test]
    fn clamped_table_is_capped_sandwich(mean in 0.2f64..5.0, halfnormal in any::<bool>(), lo in 0.05f64..2.0) {
        let family = if halfnormal { "halfnormal" } else { "exponential" };
        let dist = format!("{family}:mean={mean}");
        let nu = format!("{lo}:{}:{}", lo * 4.0, lo);
        let out = run_args(["tailbound", "table", "--dist", &dist, "--nu", &nu, "--digits", "12", "--clamp"]).unwrap();
        for row in rows(&out.text) {
            let (tail, enhanced, traditional) = (row[1], row[2], row[3]);
            prop_assert!(traditional <= 1.0 && enhanced <= 1.0);
            prop_assert!(tail <= enhanced * (1.0 + 1e-9) && enhanced <= traditional * (1.0 + 1e-9), "{row:?}");
        }
    }
}
