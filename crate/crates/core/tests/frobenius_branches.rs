//! Every branch of the third-order solution-structure classification on
//! constructed fixtures, with the exact annihilation oracle.

mod common;

use common::{check_branch, Want};
use modeforge::algebra::coeff::{rat, ratq};
use modeforge::frobenius::Apparentness::*;
use modeforge::frobenius::PointKind::*;
use num::Zero;

const ANY: Want = Want::Nonzero;

#[test]
fn triple_exponent_is_completely_not_apparent() {
    // kappa_1 = kappa_2 = kappa_3 = 1 (interior sum 3): basis
    // {y, dy/da, d2y/da2} with a log^2 element.
    let st = check_branch(
        Interior,
        [rat(1), rat(1), rat(1)],
        [ANY, ANY, ANY],
        CompletelyNotApparent,
        3,
    );
    assert_eq!(st.basis[2].log_degree(), 2);
    // cusp flavor: all exponents 0
    check_branch(
        Cusp,
        [rat(0), rat(0), rat(0)],
        [ANY, ANY, ANY],
        CompletelyNotApparent,
        5,
    );
}

#[test]
fn double_top_exponent_branches() {
    // kappa_1 < kappa_2 = kappa_3 = (-1, 2, 2), m1 = 3.
    let ks = || [rat(-1), rat(2), rat(2)];
    // R_{m1}(k1) = 0: third solution log-free at kappa_1, single log only.
    let st = check_branch(Interior, ks(), [Want::Zero, ANY, ANY], NotApparent, 7);
    assert_eq!(st.basis[2].log_degree(), 0);
    // R_{m1}(k1) != 0: log^2 appears.
    let st = check_branch(Interior, ks(), [Want::Nonzero, ANY, ANY], CompletelyNotApparent, 7);
    assert_eq!(st.basis[2].log_degree(), 2);
}

#[test]
fn double_bottom_exponent_branches() {
    // kappa_1 = kappa_2 < kappa_3 = (0, 0, 3), m2 = 3.
    let ks = || [rat(0), rat(0), rat(3)];
    let st = check_branch(Interior, ks(), [ANY, Want::Zero, ANY], NotApparent, 11);
    assert_eq!(st.basis[2].log_degree(), 1);
    let st = check_branch(Interior, ks(), [ANY, Want::Nonzero, ANY], CompletelyNotApparent, 11);
    assert_eq!(st.basis[2].log_degree(), 2);
    // fractional flavor at the cusp: (-1/3, -1/3, 2/3), the shape of every
    // extremal seed.
    check_branch(
        Cusp,
        [ratq(-1, 3), ratq(-1, 3), ratq(2, 3)],
        [ANY, Want::Nonzero, ANY],
        CompletelyNotApparent,
        13,
    );
}

#[test]
fn distinct_exponents_r2_zero_branches() {
    // kappa = (-1, 0, 4): m1 = 1, m2 = 4.
    let ks = || [rat(-1), rat(0), rat(4)];
    // all obstructions vanish: apparent, log-free basis
    let st = check_branch(
        Interior,
        ks(),
        [Want::Zero, Want::Zero, Want::Zero],
        Apparent,
        17,
    );
    for y in &st.basis {
        assert_eq!(y.log_degree(), 0);
    }
    check_branch(
        Interior,
        ks(),
        [Want::Zero, Want::Zero, Want::Nonzero],
        NotApparent,
        17,
    );
    check_branch(
        Interior,
        ks(),
        [Want::Nonzero, Want::Zero, ANY],
        NotApparent,
        17,
    );
}

#[test]
fn distinct_exponents_r2_nonzero_branches() {
    let ks = || [rat(-1), rat(0), rat(4)];
    check_branch(
        Interior,
        ks(),
        [Want::Zero, Want::Nonzero, Want::Zero],
        NotApparent,
        19,
    );
    check_branch(
        Interior,
        ks(),
        [Want::Zero, Want::Nonzero, Want::Nonzero],
        NotApparent,
        19,
    );
    let st = check_branch(
        Interior,
        ks(),
        [Want::Nonzero, Want::Nonzero, Want::Nonzero],
        CompletelyNotApparent,
        19,
    );
    assert_eq!(st.basis[2].log_degree(), 2);
    // cusp flavor with distinct exponents summing to zero
    check_branch(
        Cusp,
        [rat(-3), rat(1), rat(2)],
        [Want::Zero, Want::Zero, Want::Zero],
        Apparent,
        23,
    );
}

#[test]
fn rescaling_leaves_classification_invariant() {
    // x -> lambda x maps a_n -> lambda^{n+2} a_n, b_n -> lambda^{n+3} b_n;
    // tags, exponents, and obstruction vanishing are unchanged.
    use modeforge::frobenius::{classify, LaurentData, LocalExponents};
    let exps = LocalExponents::new([rat(-1), rat(0), rat(4)]).unwrap();
    for lambda in [ratq(2, 1), ratq(-1, 3), ratq(5, 7)] {
        let data = common::tuned_data(
            Interior,
            &exps,
            [Want::Zero, Want::Nonzero, Want::Zero],
            20,
            19,
        );
        // a-vec index i holds a_{i-2}, so it scales by lambda^{(i-2)+2} =
        // lambda^i; likewise b-vec index i scales by lambda^i.
        let mut pow = ratq(1, 1);
        let mut a2 = Vec::new();
        for v in &data.a {
            a2.push(v * &pow);
            pow *= &lambda;
        }
        let mut pow = ratq(1, 1);
        let mut b2 = Vec::new();
        for v in &data.b {
            b2.push(v * &pow);
            pow *= &lambda;
        }
        let scaled = LaurentData::new(Interior, a2, b2);
        let st0 = classify(&data).unwrap();
        let st1 = classify(&scaled).unwrap();
        assert_eq!(st0.tag, st1.tag);
        assert_eq!(st0.exponents.as_array(), st1.exponents.as_array());
        for (w0, w1) in st0.witness.iter().zip(st1.witness.iter()) {
            assert_eq!(w0.at, w1.at);
            assert_eq!(w0.value.is_zero(), w1.value.is_zero());
        }
    }
}
