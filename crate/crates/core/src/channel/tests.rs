use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::*;
use crate::matlib::{approx_eq, random_psd_rank, CMatrix, ToleranceConfig};

fn tol() -> ToleranceConfig {
    ToleranceConfig::default()
}

fn fixture(name: &str) -> String {
    let dir = find_fixture_dir().expect("fixture directory");
    std::fs::read_to_string(dir.join(name)).expect("fixture file")
}

#[test]
fn loads_example_1() {
    let inst = load_instance(&fixture("ex1.json"), &tol()).unwrap();
    assert_eq!((inst.t1(), inst.t2(), inst.r1(), inst.r2()), (2, 2, 2, 2));
    assert!(!inst.is_zic());
    assert!(inst.h1.distance(&CMatrix::identity(2)) == 0.0);
}

#[test]
fn all_bundled_fixtures_load_and_validate() {
    for name in ["ex1.json", "ex2.json", "ex3.json", "ex4.json", "ex5.json"] {
        let inst = load_instance(&fixture(name), &tol()).unwrap_or_else(|e| panic!("{name}: {e}"));
        inst.validate(&tol()).unwrap();
    }
    let p = load_power_document(&fixture("ex5_power.json")).unwrap();
    assert_eq!(p.p1, 8.0);
    assert_eq!(p.p2, 1.0);
}

#[test]
fn rejects_indefinite_covariance() {
    let doc = r#"{
        "H1": [[1.0]], "H2": [[1.0]], "H3": [[1.0]], "H4": [[1.0]],
        "S1": [[1.0, 0.0], [0.0, -1.0]], "S2": [[1.0]]
    }"#;
    // S1 is 2x2 while t1 = 1: dimension error fires first, so use square dims
    let doc2 = r#"{
        "H1": [[1.0, 0.0], [0.0, 1.0]], "H2": [[1.0, 0.0], [0.0, 1.0]],
        "H3": [[1.0, 0.0], [0.0, 1.0]], "H4": [[1.0, 0.0], [0.0, 1.0]],
        "S1": [[1.0, 0.0], [0.0, -1.0]],
        "S2": [[1.0, 0.0], [0.0, 1.0]]
    }"#;
    assert!(matches!(
        load_instance(doc, &tol()),
        Err(ChannelError::Dimension(_))
    ));
    assert!(matches!(
        load_instance(doc2, &tol()),
        Err(ChannelError::Constraint(_))
    ));
}

#[test]
fn rejects_cross_matrix_shape_mismatch() {
    // H2 is 2x3 but H4 says t2 = 2.
    let doc = r#"{
        "H1": [[1.0, 0.0], [0.0, 1.0]],
        "H2": [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
        "H3": [[1.0, 0.0], [0.0, 1.0]],
        "H4": [[1.0, 0.0], [0.0, 1.0]],
        "S1": [[1.0, 0.0], [0.0, 1.0]],
        "S2": [[1.0, 0.0], [0.0, 1.0]]
    }"#;
    assert!(matches!(
        load_instance(doc, &tol()),
        Err(ChannelError::Dimension(_))
    ));
}

#[test]
fn rejects_malformed_document() {
    assert!(matches!(
        load_instance("not json", &tol()),
        Err(ChannelError::Parse(_))
    ));
    assert!(matches!(
        load_instance(r#"{"H1": [[1.0]]}"#, &tol()),
        Err(ChannelError::Parse(_))
    ));
    assert!(matches!(
        load_instance(
            r#"{"H1": [["x"]], "H2": [[1.0]], "H3": [[1.0]], "H4": [[1.0]], "S1": [[1.0]], "S2": [[1.0]]}"#,
            &tol()
        ),
        Err(ChannelError::Parse(_))
    ));
}

#[test]
fn serialize_round_trips_bit_exact() {
    let t = tol();
    for name in ["ex1.json", "ex4.json", "ex5.json"] {
        let inst = load_instance(&fixture(name), &t).unwrap();
        let text = serialize_instance(&inst);
        let again = load_instance(&text, &t).unwrap();
        assert_eq!(inst.h1, again.h1);
        assert_eq!(inst.s1, again.s1);
        assert_eq!(inst.s2, again.s2);
        assert_eq!(text, serialize_instance(&again));
    }
}

#[test]
fn complex_entries_round_trip() {
    let doc = r#"{
        "H1": [[[0.5, -1.25]]], "H2": [[1.0]], "H3": [[1.0]], "H4": [[1.0]],
        "S1": [[1.0]], "S2": [[1.0]]
    }"#;
    let inst = load_instance(doc, &tol()).unwrap();
    assert_eq!(inst.h1[(0, 0)].re, 0.5);
    assert_eq!(inst.h1[(0, 0)].im, -1.25);
    let again = load_instance(&serialize_instance(&inst), &tol()).unwrap();
    assert_eq!(inst.h1, again.h1);
}

#[test]
fn example3_s2_is_rank_two() {
    // The printed S2 of the third example is singular: eigenvalues 0, 2, 6
    // with null vector proportional to [1, -1, 2].
    let t = tol();
    let inst = load_instance(&fixture("ex3.json"), &t).unwrap();
    let space = null_offset_space(&inst, 2, &t).unwrap();
    assert_eq!(space.dim(), 1);
    let b = space.basis.as_ref().unwrap();
    assert!((&inst.s2 * b).frobenius_norm() <= t.eq_tol * (1.0 + inst.s2.frobenius_norm()));
}

#[test]
fn example4_offset_spaces_are_one_dimensional() {
    let t = tol();
    let inst = load_instance(&fixture("ex4.json"), &t).unwrap();
    assert_eq!(null_offset_space(&inst, 1, &t).unwrap().dim(), 1);
    assert_eq!(null_offset_space(&inst, 2, &t).unwrap().dim(), 1);
}

#[test]
fn zero_covariance_gives_full_null_space() {
    let t = tol();
    let space = NullOffsetSpace::from_covariance(&CMatrix::zeros(3, 3), 1, &t).unwrap();
    assert_eq!(space.dim(), 3);
    assert!(space.projector_range.is_zero());
}

#[test]
fn projector_invariants_on_random_singular_covariances() {
    let t = tol();
    let mut rng = ChaCha8Rng::seed_from_u64(0x1C0FFEE);
    for rank in 0..=4 {
        let s = random_psd_rank(4, rank, &mut rng);
        let space = NullOffsetSpace::from_covariance(&s, 1, &t).unwrap();
        let pi = &space.projector_range;
        assert!(approx_eq(&(pi * pi), pi, &t), "projector not idempotent");
        assert!(pi.hermitian_deviation() <= 1e-10 * (1.0 + pi.frobenius_norm()));
        assert!(approx_eq(&(pi * &s), &s, &t), "projector must fix range(S)");
        // complementarity with the null projector
        let total = &space.projector_null() + pi;
        assert!(total.distance(&CMatrix::identity(4)) <= 1e-10);
        assert_eq!(space.dim(), 4 - rank);
    }
}

#[test]
fn membership_cases() {
    let t = tol();
    let inst = load_instance(&fixture("ex3.json"), &t).unwrap();
    // zero offset always belongs
    assert!(membership_b(&CMatrix::zeros(3, 3), &inst.s2, &t).unwrap());
    // the printed offset of the third example: rows proportional to [1,-1,2]
    let b = CMatrix::from_real_rows(&[&[0.5, -0.5, 1.0], &[1.0, -1.0, 2.0], &[0.6, -0.6, 1.2]]);
    assert!(membership_b(&b, &inst.s2, &t).unwrap());
    // identity against a nonsingular covariance is not an offset
    assert!(!membership_b(&CMatrix::identity(3), &inst.s1, &t).unwrap());
    // shape mismatch is an error
    assert!(membership_b(&CMatrix::zeros(2, 2), &inst.s2, &t).is_err());
}

#[test]
fn swap_users_is_an_involution() {
    let t = tol();
    let inst = load_instance(&fixture("ex2.json"), &t).unwrap();
    let back = inst.swap_users().swap_users();
    assert_eq!(inst.h1, back.h1);
    assert_eq!(inst.h3, back.h3);
    assert_eq!(inst.s2, back.s2);
    let sw = inst.swap_users();
    assert_eq!(sw.h1, inst.h4);
    assert_eq!(sw.h2, inst.h3);
    assert_eq!(sw.s1, inst.s2);
}
