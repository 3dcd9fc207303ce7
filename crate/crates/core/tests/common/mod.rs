/// Exhaustive search over active sets. At the optimum the zero bound is active on
/// a prefix and the remaining entries split into consecutive blocks, each equal
/// to its weighted mean; every such candidate is enumerated and the best
/// feasible one kept.
pub fn brute_force(v: &[f64], m: &[f64]) -> Vec<f64> {
    let n = v.len();
    let mut best: Option<(f64, Vec<f64>)> = None;
    for zeros in 0..=n {
        let rest = n - zeros;
        let cuts = if rest == 0 { 1 } else { 1usize << (rest - 1) };
        for mask in 0..cuts {
            let mut x = vec![0.0; n];
            let mut start = zeros;
            for i in zeros..n {
                let last = i + 1 == n || mask & (1 << (i - zeros)) != 0;
                if last {
                    let mass: f64 = m[start..=i].iter().sum();
                    let mean = (start..=i).map(|k| m[k] * v[k]).sum::<f64>() / mass;
                    x[start..=i].iter_mut().for_each(|e| *e = mean);
                    start = i + 1;
                }
            }
            let feasible = x.iter().all(|&e| e >= 0.0) && x.windows(2).all(|w| w[0] <= w[1]);
            if !feasible {
                continue;
            }
            let obj: f64 = x.iter().zip(v).zip(m).map(|((a, b), w)| w * (a - b) * (a - b)).sum();
            if best.as_ref().is_none_or(|(o, _)| obj < *o) {
                best = Some((obj, x));
            }
        }
    }
    best.unwrap().1
}
