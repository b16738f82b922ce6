use num_complex::Complex64;

/// Neumaier-compensated accumulator for complex terms.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: Complex64,
    carry: Complex64,
}

#[inline]
fn two_sum(acc: f64, x: f64) -> (f64, f64) {
    let t = acc + x;
    let err = if acc.abs() >= x.abs() {
        (acc - t) + x
    } else {
        (x - t) + acc
    };
    (t, err)
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    #[inline]
    pub fn add(&mut self, x: Complex64) {
        let (re, ere) = two_sum(self.sum.re, x.re);
        let (im, eim) = two_sum(self.sum.im, x.im);
        self.sum = Complex64::new(re, im);
        self.carry += Complex64::new(ere, eim);
    }

    pub fn value(&self) -> Complex64 {
        self.sum + self.carry
    }
}

impl FromIterator<Complex64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = Complex64>>(iter: I) -> Self {
        let mut acc = Self::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}
