//! Shared fixture machinery for the Frobenius branch tests: build local
//! Laurent data with prescribed exponents and a prescribed pattern of
//! vanishing obstructions, by tuning the tail coefficients the obstructions
//! depend on affinely.

use modeforge::algebra::coeff::{rat, ratq, Rat};
use modeforge::frobenius::{
    apply_operator, classify, run_recursion, LaurentData, LocalExponents, LocalStructure,
    PointKind,
};
use num::Zero;

/// Wanted value of one obstruction.
#[derive(Clone, Copy, PartialEq, Debug)]
pub enum Want {
    Zero,
    Nonzero,
}

/// Deterministic small-rational tail so fixtures are reproducible.
fn tail(seed: i64, i: i64) -> Rat {
    let v = (seed * 37 + i * 17) % 11 - 5;
    let w = (seed * 13 + i * 7) % 5 + 1;
    ratq(v, w)
}

/// Build interior or cusp data with the given exponents and obstruction
/// pattern (in the order R_{m1}(k1), R_{m2}(k2), R_{m1+m2}(k1); entries for
/// absent resonances are ignored).
pub fn tuned_data(
    kind: PointKind,
    exps: &LocalExponents,
    pattern: [Want; 3],
    len: usize,
    seed: i64,
) -> LaurentData<Rat> {
    let m1 = exps.diff1() as usize;
    let m2 = exps.diff2() as usize;
    let [k1, k2, k3] = exps.as_array();
    // indicial coefficients from the target cubic
    let e2 = &k1 * &k2 + &k1 * &k3 + &k2 * &k3;
    let e3 = &k1 * &k2 * &k3;
    let (a_m2, b_m3) = match kind {
        // s(s-1)(s-2) + a s + b = s^3 - 3 s^2 + (2+a) s + b
        PointKind::Interior => (&e2 - rat(2), -e3),
        // s^3 + a s + b
        PointKind::Cusp => (e2.clone(), -e3),
    };
    let mut a = vec![a_m2];
    let mut b = vec![b_m3];
    for i in 1..len as i64 {
        a.push(tail(seed, i));
        b.push(tail(seed + 1, i));
    }
    let mut data = LaurentData::new(kind, a, b);
    // Fix obstructions by increasing knob index: each knob b[n'] has affine
    // coefficient 1 in its own obstruction, and an obstruction at n' only
    // reads b-entries up to index n', so later (higher) fixes cannot
    // disturb earlier ones.
    let fix = |data: &mut LaurentData<Rat>, alpha: &Rat, n_prime: usize, which: usize| {
        let run = run_recursion(data, alpha, &[], n_prime).unwrap();
        let (at, val) = run.obstructions[which].clone();
        assert_eq!(at, n_prime);
        data.b[n_prime] = &data.b[n_prime] - &val;
    };
    let mut fixes: Vec<(usize, Rat, usize)> = Vec::new();
    if m1 > 0 && pattern[0] == Want::Zero {
        fixes.push((m1, k1.clone(), 0));
    }
    if m2 > 0 && pattern[1] == Want::Zero {
        fixes.push((m2, k2.clone(), 0));
    }
    if m1 > 0 && m2 > 0 && pattern[2] == Want::Zero {
        fixes.push((m1 + m2, k1.clone(), 1));
    }
    fixes.sort_by_key(|(n, _, _)| *n);
    for (n_prime, alpha, which) in fixes {
        fix(&mut data, &alpha, n_prime, which);
    }
    data
}

/// Classify and check: wanted obstruction pattern holds, stated tag comes
/// out, and every basis element is annihilated through its validity.
pub fn check_branch(
    kind: PointKind,
    kappas: [Rat; 3],
    pattern: [Want; 3],
    expect: modeforge::frobenius::Apparentness,
    seed: i64,
) -> LocalStructure {
    let exps = LocalExponents::new(kappas).unwrap();
    let span = (exps.diff1() + exps.diff2()) as usize;
    let data = tuned_data(kind, &exps, pattern, span + 14, seed);
    let st = classify(&data).unwrap();
    assert_eq!(st.tag, expect, "tag for {:?} {:?}", exps.as_array(), pattern);
    // the witnesses realize the wanted pattern
    let m1 = exps.diff1() as usize;
    let m2 = exps.diff2() as usize;
    for w in &st.witness {
        let want = if w.at == m1 && w.alpha == exps.k1 {
            pattern[0]
        } else if w.at == m2 && w.alpha == exps.k2 {
            pattern[1]
        } else {
            pattern[2]
        };
        match want {
            Want::Zero => assert!(w.value.is_zero(), "obstruction at {} should vanish", w.at),
            Want::Nonzero => assert!(
                !w.value.is_zero(),
                "obstruction at {} should not vanish (tune the seed)",
                w.at
            ),
        }
    }
    // the ultimate oracle: exact annihilation of each basis element
    for (i, y) in st.basis.iter().enumerate() {
        let res = apply_operator(&data, y);
        assert!(
            res.is_zero_through_valid(),
            "basis element {i} of {:?} {:?} is not annihilated",
            exps.as_array(),
            pattern
        );
    }
    st
}
