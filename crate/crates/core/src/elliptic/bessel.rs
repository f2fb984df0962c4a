/// `I_k(r)` with its first two derivatives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BesselValues {
    pub value: f64,
    pub derivative: f64,
    pub second: f64,
    /// Series terms used.
    pub terms: usize,
}

#[derive(Default)]
struct Kahan {
    sum: f64,
    c: f64,
}

impl Kahan {
    fn add(&mut self, x: f64) {
        let y = x - self.c;
        let t = self.sum + y;
        self.c = (t - self.sum) - y;
        self.sum = t;
    }
}

/// Modified Bessel function of the first kind by its ascending series
/// `Σ (r/2)^{2m+k} / (m! (m+k)!)`, summed termwise for all three outputs.
///
/// Stops once a term falls below `1e-18` of the partial sum; on `r ≤ 1`
/// and `k ≤ 64` that takes at most a dozen terms.
pub fn bessel_i(k: usize, r: f64) -> BesselValues {
    if r == 0.0 {
        // I_0 = 1 + r²/4 + ..., I_1 = r/2 + ..., I_2 = r²/8 + ...
        let value = if k == 0 { 1.0 } else { 0.0 };
        let derivative = if k == 1 { 0.5 } else { 0.0 };
        let second = match k {
            0 => 0.5,
            2 => 0.25,
            _ => 0.0,
        };
        return BesselValues { value, derivative, second, terms: 1 };
    }
    let half = 0.5 * r;
    // leading coefficient (r/2)^k / k!
    let mut lead = 1.0;
    for j in 1..=k {
        lead *= half / j as f64;
    }
    let (mut v, mut d, mut dd) = (Kahan::default(), Kahan::default(), Kahan::default());
    let mut term = lead;
    let kf = k as f64;
    let mut terms = 0;
    for m in 0..200 {
        let p = 2.0 * m as f64 + kf;
        v.add(term);
        d.add(term * p / r);
        dd.add(term * p * (p - 1.0) / (r * r));
        terms = m + 1;
        let next = term * half * half / (((m + 1) * (m + 1 + k)) as f64);
        if next.abs() <= 1e-18 * v.sum.abs() || next == 0.0 {
            break;
        }
        term = next;
    }
    BesselValues { value: v.sum, derivative: d.sum, second: dd.sum, terms }
}
