//! Dense distributions over integer lattice positions.

use crate::numeric::Scalar;
use std::io::Write;

/// A probability vector over a contiguous range of integer positions.
#[derive(Clone, Debug, PartialEq)]
pub struct Distribution<T> {
    time: u32,
    support_min: i64,
    probs: Vec<T>,
}

impl<T: Scalar> Distribution<T> {
    pub fn new(time: u32, support_min: i64, probs: Vec<T>) -> Self {
        Distribution {
            time,
            support_min,
            probs,
        }
    }

    /// Point mass at the origin.
    pub fn point_mass(time: u32) -> Self {
        Distribution::new(time, 0, vec![T::one()])
    }

    pub fn time(&self) -> u32 {
        self.time
    }

    pub fn support_min(&self) -> i64 {
        self.support_min
    }

    pub fn support_max(&self) -> i64 {
        self.support_min + self.probs.len() as i64 - 1
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    /// Probability at `x`; zero outside the stored support.
    pub fn prob(&self, x: i64) -> T {
        let idx = x - self.support_min;
        if idx < 0 || idx as usize >= self.probs.len() {
            T::zero()
        } else {
            self.probs[idx as usize].clone()
        }
    }

    /// `(x, prob)` pairs over the stored support.
    pub fn iter(&self) -> impl Iterator<Item = (i64, &T)> {
        let min = self.support_min;
        self.probs
            .iter()
            .enumerate()
            .map(move |(i, p)| (min + i as i64, p))
    }

    pub fn total(&self) -> T {
        self.probs.iter().fold(T::zero(), |acc, p| acc + p.clone())
    }

    pub fn mean(&self) -> T {
        self.iter()
            .fold(T::zero(), |acc, (x, p)| acc + T::from_int(x) * p.clone())
    }

    /// Central second moment.
    pub fn variance(&self) -> T {
        let mean = self.mean();
        self.iter().fold(T::zero(), |acc, (x, p)| {
            let d = T::from_int(x) - mean.clone();
            acc + d.clone() * d * p.clone()
        })
    }

    /// Raw moment of order `n`.
    pub fn raw_moment(&self, n: u32) -> T {
        self.iter().fold(T::zero(), |acc, (x, p)| {
            acc + crate::numeric::powi(&T::from_int(x), n) * p.clone()
        })
    }

    /// Total-variation distance `(1/2) sum |p - q|` over the union of supports.
    pub fn tv_distance(&self, other: &Self) -> T {
        let lo = self.support_min.min(other.support_min);
        let hi = self.support_max().max(other.support_max());
        let mut acc = T::zero();
        for x in lo..=hi {
            acc = acc + (self.prob(x) - other.prob(x)).abs_val();
        }
        acc / T::from_int(2)
    }

    pub fn map<U: Scalar>(&self, f: impl Fn(&T) -> U) -> Distribution<U> {
        Distribution::new(
            self.time,
            self.support_min,
            self.probs.iter().map(f).collect(),
        )
    }

    pub fn to_f64(&self) -> Distribution<f64> {
        self.map(|p| p.to_f64())
    }

    /// CSV dump with header `t,x,prob`, one row per support point.
    pub fn write_csv<W: Write + ?Sized>(&self, w: &mut W) -> std::io::Result<()> {
        writeln!(w, "t,x,prob")?;
        for (x, p) in self.iter() {
            writeln!(w, "{},{},{}", self.time, x, p.format_csv())?;
        }
        Ok(())
    }
}

/// True when the restriction to `x >= 0` increases anywhere, i.e. the
/// distribution is not monotone non-increasing on the non-negative axis.
pub fn nonmonotone_on_nonneg(dist: &Distribution<f64>) -> bool {
    let mut prev: Option<f64> = None;
    for x in 0..=dist.support_max() {
        let p = dist.prob(x);
        if let Some(q) = prev {
            if p > q + 1e-12 {
                return true;
            }
        }
        prev = Some(p);
    }
    false
}

#[cfg(test)]
mod tests {
    use super::*;
    use num::rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::ratio(n, d)
    }

    #[test]
    fn point_mass_moments() {
        let d = Distribution::<f64>::point_mass(0);
        assert_eq!(d.prob(0), 1.0);
        assert_eq!(d.prob(3), 0.0);
        assert_eq!(d.mean(), 0.0);
        assert_eq!(d.variance(), 0.0);
    }

    #[test]
    fn exact_moments() {
        // {-1: 1/4, 0: 1/2, 1: 1/4}
        let d = Distribution::new(1, -1, vec![rat(1, 4), rat(1, 2), rat(1, 4)]);
        assert_eq!(d.total(), rat(1, 1));
        assert_eq!(d.mean(), rat(0, 1));
        assert_eq!(d.variance(), rat(1, 2));
        assert_eq!(d.raw_moment(2), rat(1, 2));
    }

    #[test]
    fn tv_distance_disjoint_is_one() {
        let a = Distribution::new(0, 0, vec![1.0f64]);
        let b = Distribution::new(0, 5, vec![1.0f64]);
        assert_eq!(a.tv_distance(&b), 1.0);
        assert_eq!(a.tv_distance(&a), 0.0);
    }

    #[test]
    fn csv_shape() {
        let d = Distribution::new(2, -1, vec![0.25f64, 0.5, 0.25]);
        let mut buf = Vec::new();
        d.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert_eq!(lines.next(), Some("t,x,prob"));
        assert_eq!(lines.clone().count(), 3);
        assert!(lines.next().unwrap().starts_with("2,-1,"));
    }

    #[test]
    fn nonmonotone_detection() {
        let flat = Distribution::new(1, -1, vec![0.2f64, 0.6, 0.2]);
        assert!(!nonmonotone_on_nonneg(&flat));
        let bump = Distribution::new(2, -2, vec![0.3f64, 0.1, 0.2, 0.1, 0.3]);
        assert!(nonmonotone_on_nonneg(&bump));
    }
}
