use std::time::Instant;
fn main() {
    for k in [16i64] {
        let t0 = Instant::now();
        let f = modeforge::quasi::extremal(k, 40 + 2 * (k / 4) + 8).unwrap();
        let t1 = Instant::now();
        let h = modeforge::quasi::h_vector(&f);
        let (qc, rc, w) = modeforge::mode::annihilator(&h).unwrap();
        let t2 = Instant::now();
        let wr = modeforge::quasi::wronskian(&f).unwrap();
        let t3 = Instant::now();
        let _inv = modeforge::mode::singular_inventory(&wr.series, 3*k).unwrap();
        let t4 = Instant::now();
        let q = qc.map(|c| c.as_rat().unwrap());
        let r = rc.map(|c| c.as_rat().unwrap());
        let _fit = modeforge::mode::fit_ansatz(&q.trimmed(), &r.trimmed(), &_inv).unwrap();
        let t5 = Instant::now();
        let _ = w;
        println!("k={k}: extremal {:?} annihilator {:?} wronskian {:?} inventory {:?} fit {:?}",
            t1-t0, t2-t1, t3-t2, t4-t3, t5-t4);
        let m = modeforge::mode::mode_from_quasi(&f).unwrap();
        let t6 = Instant::now();
        println!("  full mode_from_quasi {:?}", t6-t5);
        let _ = m;
    }
}
