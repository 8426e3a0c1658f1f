use cqie_core::schedule::{
    classical_flag, instantaneous_params, make_original_protocol, make_quench_protocol, EnergyScales,
    ProtocolSchedule, ScheduleVariant,
};
use proptest::prelude::*;

fn protocols(s_bar: f64, h_bar: f64, j: f64) -> [ProtocolSchedule; 2] {
    [
        make_original_protocol(s_bar, h_bar, j).unwrap(),
        make_quench_protocol(s_bar, h_bar, j).unwrap(),
    ]
}

proptest! {
    #[test]
    fn curves_are_continuous_at_breakpoints(s_bar in 0.05f64..=1.0, h in 0.0f64..2.0, j in -0.5f64..0.5) {
        for sched in protocols(s_bar, h, j) {
            for curve in [sched.s_curve(), sched.g_curve()] {
                for &(t, v) in curve.points() {
                    for dt in [-1e-7, 1e-7] {
                        let t2 = (t + dt).clamp(0.0, sched.duration());
                        if t2 < sched.duration() - 0.01 {
                            prop_assert!((curve.eval(t2).unwrap() - v).abs() < 1e-5);
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn original_cycle_returns_to_pure_coupling(s_bar in 0.05f64..=1.0, h in 0.0f64..2.0, j in 0.0f64..0.5) {
        let sc = EnergyScales::surrogate();
        let sched = make_original_protocol(s_bar, h, j).unwrap();
        for t in [0.0, sched.duration()] {
            let p = instantaneous_params(&sched, &sc, t).unwrap();
            prop_assert_eq!(p.bz, 0.0);
            prop_assert_eq!(p.bx, 0.0);
            prop_assert!((p.jz - 6.0 * j).abs() < 1e-12);
        }
    }

    #[test]
    fn segments_are_monotone(s_bar in 0.05f64..=1.0, h in 0.0f64..2.0) {
        for sched in protocols(s_bar, h, 0.1) {
            for curve in [sched.s_curve(), sched.g_curve()] {
                for w in curve.points().windows(2) {
                    let (a, b) = (w[0], w[1]);
                    let mut prev = a.1;
                    for k in 1..=20 {
                        let v = curve.eval(a.0 + (b.0 - a.0) * k as f64 / 20.0).unwrap();
                        prop_assert!((v - prev) * (b.1 - a.1) >= -1e-12);
                        prev = v;
                    }
                }
            }
        }
    }

    #[test]
    fn field_is_linear_in_h_and_coupling_is_not(t in 0.0f64..30.0, h in 0.0f64..2.0, c in 0.0f64..4.0) {
        let sc = EnergyScales::surrogate();
        let base = make_original_protocol(0.4, h, 0.12).unwrap();
        let scaled = base.with_params(0.4, h * c, 0.12).unwrap();
        let p = instantaneous_params(&base, &sc, t).unwrap();
        let q = instantaneous_params(&scaled, &sc, t).unwrap();
        prop_assert!((q.bz - c * p.bz).abs() <= 1e-9 * (1.0 + p.bz.abs()));
        prop_assert_eq!(q.jz, p.jz);
        prop_assert_eq!(q.bx, p.bx);
    }

    #[test]
    fn json_round_trip(s_bar in 0.05f64..=1.0, h in 0.0f64..2.0, j in -0.5f64..0.5) {
        for sched in protocols(s_bar, h, j) {
            let back = ProtocolSchedule::from_json(&sched.to_json()).unwrap();
            prop_assert_eq!(back.fingerprint(), sched.fingerprint());
        }
    }
}

#[test]
fn classical_region_of_surrogate() {
    let sc = EnergyScales::surrogate();
    assert!(classical_flag(&make_original_protocol(0.6, 1.0, 0.1).unwrap(), &sc));
    assert!(classical_flag(&make_quench_protocol(0.5, 1.0, 0.1).unwrap(), &sc));
    assert!(!classical_flag(&make_original_protocol(0.4, 1.0, 0.1).unwrap(), &sc));
}

#[test]
fn quench_holds_field_until_the_end() {
    let sc = EnergyScales::surrogate();
    let q = make_quench_protocol(0.6, 1.0, 0.0).unwrap();
    assert_eq!(q.variant(), ScheduleVariant::Quench);
    assert!((q.duration() - 30.01).abs() < 1e-12);
    assert_eq!(instantaneous_params(&q, &sc, 30.0).unwrap().bz, 6.0);
    assert_eq!(instantaneous_params(&q, &sc, 30.01).unwrap().bz, 0.0);
    assert!(instantaneous_params(&q, &sc, 31.0).is_err());
}
