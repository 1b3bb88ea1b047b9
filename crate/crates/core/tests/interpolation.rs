use dpmirror::interfam::{
    reference_transition_word, render_svg, sweep, transposition_word, validate_word, FamilySpec, SvgStyle,
    SweepOptions, SPHERE_DEGREE,
};

#[test]
fn endpoint_counts_match_the_fiber_tables() {
    for (from, counts) in [(3u8, (9, 10)), (2, (10, 11))] {
        let t =
            sweep(&FamilySpec::standard(from).unwrap(), &SweepOptions { samples: 120, ..Default::default() }).unwrap();
        assert_eq!(t.endpoint_finite_counts(), counts, "{from}→{}", from - 1);
        assert!(t.points.iter().all(|p| p.len() == SPHERE_DEGREE));
        assert_eq!(t.samples.first(), Some(&0.0));
        assert_eq!(t.samples.last(), Some(&1.0));
        assert!(t.samples.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn outputs_are_deterministic() {
    let fam = FamilySpec::standard(2).unwrap();
    let opts = SweepOptions { samples: 80, ..Default::default() };
    let (t1, t2) = (sweep(&fam, &opts).unwrap(), sweep(&fam, &opts).unwrap());
    let style = SvgStyle::default();
    assert_eq!(render_svg(Some(&t1), &style), render_svg(Some(&t2), &style));
    assert_eq!(t1.to_csv(), t2.to_csv());
    assert!(t1.to_csv().starts_with("s,track,chart,re,im\n"));
    let svg = render_svg(Some(&t1), &style);
    assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
}

#[test]
fn reference_words_validate_and_candidates_are_checked() {
    for from in [3u8, 2] {
        let reference = reference_transition_word(from).unwrap();
        let v = validate_word(from, from - 1, &reference).unwrap();
        assert!(v.equals_reference && v.maps_classes, "{from}→{}", from - 1);
        let t = sweep(&FamilySpec::standard(from).unwrap(), &SweepOptions::default()).unwrap();
        if let Ok(w) = transposition_word(&t) {
            let c = validate_word(from, from - 1, &w).unwrap();
            assert_eq!(c.candidate, w.to_string());
        }
    }
}
