use crate::bits::LabelSet;
use crate::game::Measure;
use crate::Rational;

fn abs_diff(a: Rational, b: Rational) -> Rational {
    if a > b {
        a - b
    } else {
        b - a
    }
}

/// Scale selection: the first m in 1..N whose prefix of consecutive
/// measures stays within twice the thresholds while the next measure jumps
/// by at least twice threshold m on every set; N otherwise. 1-based.
pub fn msp(measures: &[Measure], thresholds: &[Rational], sets: &[LabelSet]) -> usize {
    let n = measures.len();
    assert_eq!(n, thresholds.len(), "one threshold per measure");
    let gap = |a: &Measure, b: &Measure, s: LabelSet| {
        abs_diff(a.complement_mass(s), b.complement_mass(s))
    };
    let two = Rational::from_integer(2.into());
    for m in 1..n {
        // Prefix condition at i = m (i = 2..m-1 were checked on earlier m).
        if m >= 2 {
            let (a, b) = (&measures[m - 1], &measures[m - 2]);
            let bound = &two * &thresholds[m - 2];
            if sets.iter().any(|&s| gap(a, b, s) > bound) {
                return n;
            }
        }
        let (a, b) = (&measures[m - 1], &measures[m]);
        let bound = &two * &thresholds[m - 1];
        if sets.iter().all(|&s| gap(a, b, s) >= bound) {
            return m;
        }
    }
    n
}
