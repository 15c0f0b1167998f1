use markov_dubins::word::ADMISSIBLE_WORDS;
use markov_dubins::{
    AdjointCertificate, Instance, Normality, OrientedPoint, PathCandidate, PmpReport, SolvedPath,
    SolverConfig, SwitchingLaw,
};
use mdubins_cli::bundle::{
    CertificateEntry, CertificateSummary, Comparison, PathRow, PathSummary, ResultBundle, Samples,
    Source, SwitchingRow,
};
use proptest::prelude::*;

fn finite() -> impl Strategy<Value = f64> {
    prop_oneof![
        -1e6..1e6f64,
        any::<f64>().prop_filter("finite", |x| x.is_finite()),
        Just(0.0),
        Just(-0.0),
        Just(f64::MIN_POSITIVE),
    ]
}

fn path_row() -> impl Strategy<Value = PathRow> {
    (finite(), finite(), finite(), finite(), finite()).prop_map(|(t, x, y, theta, u)| PathRow {
        t,
        x,
        y,
        theta,
        u,
    })
}

fn switching_row() -> impl Strategy<Value = SwitchingRow> {
    (finite(), finite(), finite()).prop_map(|(t, lambda3, lambda3_dot)| SwitchingRow {
        t,
        lambda3,
        lambda3_dot,
    })
}

fn summary(word: &str, d: [f64; 5]) -> PathSummary {
    PathSummary {
        word: word.parse().unwrap(),
        durations: d,
        switch_times: d
            .iter()
            .scan(0.0, |t, x| {
                *t += x;
                Some(*t)
            })
            .take(4)
            .collect(),
        length: d.iter().sum(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn bundle_round_trips(
        pose in prop::array::uniform6(-10.0..10.0f64),
        a in 0.2..5.0f64,
        d in prop::array::uniform5(0.0..10.0f64),
        word in prop::sample::select(&ADMISSIBLE_WORDS[..]),
        mult in prop::array::uniform3(finite()),
        report_vals in prop::array::uniform2(0.0..1.0f64),
        switch_err in prop::collection::vec(0.0..1e-6f64, 0..4),
        path in prop::collection::vec(path_row(), 0..20),
        switching in prop::collection::vec(switching_row(), 0..20),
        abnormal in any::<bool>(),
        with_comparison in any::<bool>(),
    ) {
        let inst = Instance::new(
            OrientedPoint::new(pose[0], pose[1], pose[2]),
            OrientedPoint::new(pose[3], pose[4], pose[5]),
            a,
        ).unwrap();
        let s = summary(word, d);
        let cert = AdjointCertificate {
            lambda0: mult[0],
            rho: mult[1],
            phi: mult[2],
            word: s.word.clone(),
            theta_switch: vec![],
            normality: if abnormal { Normality::Abnormal } else { Normality::Normal },
            law: SwitchingLaw::ThreeArc { theta1: mult[0], theta2: mult[1] },
        };
        let report = PmpReport {
            max_abs_h: report_vals[0],
            sign_law_violations: 3,
            ellipse_drift: report_vals[1],
            switch_zero_errors: switch_err,
            n_samples: 512,
            passed: false,
        };
        let solved = SolvedPath {
            candidate: PathCandidate::new(d),
            word: s.word.clone(),
            length: s.length,
            switch_times: [0.0; 4],
        };
        let bundle = ResultBundle {
            instance: inst,
            source: Source::Oracle,
            config: Some(SolverConfig::default()),
            best: s.clone(),
            stationary: vec![s.clone(), summary("", [d[1], 0.0, d[0], 0.0, 0.0])],
            certificate: CertificateEntry {
                word: s.word.clone(),
                length: s.length,
                certificate: Some(CertificateSummary::new(&cert, report)),
                error: None,
            },
            all_certificates: vec![CertificateEntry {
                word: s.word.clone(),
                length: s.length,
                certificate: None,
                error: Some("no certificate".into()),
            }],
            comparison: with_comparison.then(|| Comparison::new(&solved, &solved)),
            samples: Samples { path, switching },
        };
        let text = bundle.to_json().unwrap();
        let back = ResultBundle::from_json(&text).unwrap();
        prop_assert_eq!(&back, &bundle);
        prop_assert_eq!(back.to_json().unwrap(), text);
    }
}
