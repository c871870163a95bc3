//! Number formatting shared by the CSV/TSV writers.

/// How reals are rendered in text outputs.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Precision {
    /// 17 significant digits: enough to round-trip any `f64`.
    #[default]
    Full,
    /// Fixed number of decimals, halves rounded away from zero. Display only.
    Decimals(usize),
}

impl Precision {
    pub fn format(self, x: f64) -> String {
        match self {
            Precision::Full => sig17(x),
            Precision::Decimals(d) => {
                let scale = 10f64.powi(d as i32);
                let rounded = (x * scale).round() / scale;
                if rounded.is_finite() {
                    format!("{rounded:.d$}")
                } else {
                    format!("{x:.d$}")
                }
            }
        }
    }
}

/// Plain decimal notation with 17 significant digits.
pub fn sig17(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (16 - magnitude).max(0) as usize;
    format!("{x:.decimals$}")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn seventeen_digits_round_trip() {
        for x in [61.0 / 14.0, 0.1, 1.0 / 3.0, 22.0, 1e-7 / 3.0, 12345.678901234567] {
            let s = sig17(x);
            assert_eq!(s.parse::<f64>().unwrap(), x, "{s}");
            let digits = s.trim_start_matches(['0', '.', '-']).replace('.', "");
            assert_eq!(digits.len(), 17, "{s}");
        }
        assert_eq!(sig17(0.0), "0");
        assert_eq!(Precision::Decimals(2).format(61.0 / 14.0), "4.36");
    }

    #[test]
    fn halves_round_up() {
        assert_eq!(Precision::Decimals(2).format(3.625), "3.63");
        assert_eq!(Precision::Decimals(2).format(0.125), "0.13");
        assert_eq!(Precision::Decimals(2).format(29.0 / 40.0), "0.73");
        assert_eq!(Precision::Decimals(0).format(-2.5), "-3");
        assert_eq!(Precision::Decimals(1).format(f64::MAX), format!("{:.1}", f64::MAX));
    }
}
