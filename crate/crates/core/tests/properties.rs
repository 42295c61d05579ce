//! Property tests over the public API.

use brun_core::decimal::{format_down, format_up, parse_down, parse_up};
use brun_core::projection::{project_table, DEFAULT_B_ASSUMED};
use brun_core::rv_bound::{brun_upper, derive_params, BoundOptions, CensusInput, ParamInputs};
use brun_core::sieve::{census, SieveConfig, TwinCensus};
use brun_core::tables::{extend_brun, parse_table, serialize_table, CensusTableEntry};
use brun_core::Interval;
use proptest::prelude::*;

fn monotone_table() -> impl Strategy<Value = Vec<CensusTableEntry>> {
    (1u32..14, prop::collection::vec((1u64..50, 0u64..1_000_000), 2..30)).prop_map(|(n, steps)| {
        let (mut k, mut c) = (0u64, 0u64);
        steps
            .into_iter()
            .map(|(dk, dc)| {
                k += dk;
                c += dc;
                CensusTableEntry::new(k, n, c, format!("{}", c + dk)).unwrap()
            })
            .collect()
    })
}

proptest! {
    #[test]
    fn table_round_trip(entries in monotone_table()) {
        let text = serialize_table(&entries);
        let parsed = parse_table(&text).unwrap();
        prop_assert_eq!(&parsed, &entries);
        prop_assert_eq!(serialize_table(&parsed), text);
    }

    #[test]
    fn extension_never_lowers_the_base(entries in monotone_table(), lo in 0.0f64..2.0, w in 0.0f64..1e-3) {
        let first = &entries[0];
        let base = TwinCensus { x: first.threshold, pi2: first.pi2, brun_partial: Interval::new(lo, lo + w).unwrap() };
        let ext = extend_brun(&base, &entries).unwrap();
        prop_assert!(ext.brun_partial.lo() >= base.brun_partial.lo());
        prop_assert_eq!(ext.pi2, entries.last().unwrap().pi2);
    }

    #[test]
    fn decimal_strings_bracket_the_value(x in -1e300f64..1e300) {
        prop_assert!(parse_down(&format_down(x)).unwrap() <= x);
        prop_assert!(parse_up(&format_up(x)).unwrap() >= x);
    }

    #[test]
    fn census_is_monotone(a in 3u64..200_000, d in 0u64..50_000) {
        let cfg = SieveConfig::default().with_threads(1);
        let (lo, hi) = (census(a, &cfg).unwrap(), census(a + d, &cfg).unwrap());
        prop_assert!(lo.pi2 <= hi.pi2);
        prop_assert!(lo.brun_partial.lo() <= hi.brun_partial.lo());
        prop_assert!(lo.brun_partial.hi() <= hi.brun_partial.hi());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn projected_bounds_fall_with_x0(k in 19u32..70, dk in 1u32..10) {
        let params = derive_params(&ParamInputs::default()).unwrap();
        let rows = project_table(&[k, k + dk], DEFAULT_B_ASSUMED, &params, &BoundOptions::default()).unwrap();
        prop_assert!(rows[1].upper_pred < rows[0].upper_pred);
    }

    #[test]
    fn certificate_lower_is_the_census_lower(lo in 1.80f64..1.85, w in 0.0f64..1e-4, k in 17u32..20) {
        let params = derive_params(&ParamInputs::default()).unwrap();
        let x = 10u64.pow(k - 1) * 4;
        let pi2 = (1.32 * 2.0 * (x as f64) / (x as f64).ln().powi(2)) as u64;
        let input = CensusInput {
            census: TwinCensus { x, pi2, brun_partial: Interval::new(lo, lo + w).unwrap() },
            rigorous: true,
            provenance: Vec::new(),
        };
        let cert = brun_upper(&input, &params, &BoundOptions::default()).unwrap();
        prop_assert_eq!(cert.lower, lo);
        prop_assert!(cert.lower < cert.upper);
    }
}
