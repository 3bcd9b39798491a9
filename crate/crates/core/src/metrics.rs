//! Morozova–Chentsov functions for the supported monotone metrics.
//!
//! The superoperator `c(L_ρ, R_ρ)` acts on a matrix written in the eigenbasis of
//! `ρ` entrywise: `(c(L_ρ, R_ρ) X)_ij = c(λ_i, λ_j) X_ij`. Skew information only
//! ever needs the combination `(m(c)/2) · c(x, y) · (x − y)²`, which is what
//! [`MetricSpec::weight`] returns without ever dividing by `x − y`.

use alloc::format;
use alloc::string::String;
use core::fmt;
use core::str::FromStr;


// Inherent float methods are std-only; in a no_std build they come from here.
#[allow(unused_imports)]
use num_traits::Float;
use crate::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum MetricKind {
    /// Wigner–Yanase, the WYD family at `α = 1/2`.
    WignerYanase,
    /// Wigner–Yanase–Dyson with parameter `α ∈ (0, 1)`.
    WignerYanaseDyson,
    /// Symmetric logarithmic derivative (quantum Fisher), `f(t) = (1 + t)/2`.
    Sld,
}

/// A named monotone metric.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MetricSpec {
    kind: MetricKind,
    alpha: Option<f64>,
}

/// Builds a metric, rejecting a missing or spurious `alpha`.
pub fn make_metric(kind: MetricKind, alpha: Option<f64>) -> Result<MetricSpec> {
    match (kind, alpha) {
        (MetricKind::WignerYanaseDyson, Some(a)) => {
            if a > 0.0 && a < 1.0 {
                Ok(MetricSpec { kind, alpha: Some(a) })
            } else {
                Err(Error::Domain(format!("WYD alpha {a} outside (0, 1)")))
            }
        }
        (MetricKind::WignerYanaseDyson, None) => {
            Err(Error::Domain("WYD metric needs an alpha".into()))
        }
        (_, Some(a)) => Err(Error::Domain(format!(
            "alpha {a} given for a metric without parameters"
        ))),
        (_, None) => Ok(MetricSpec { kind, alpha: None }),
    }
}

impl MetricSpec {
    pub fn wy() -> Self {
        Self {
            kind: MetricKind::WignerYanase,
            alpha: None,
        }
    }

    pub fn wyd(alpha: f64) -> Result<Self> {
        make_metric(MetricKind::WignerYanaseDyson, Some(alpha))
    }

    pub fn sld() -> Self {
        Self {
            kind: MetricKind::Sld,
            alpha: None,
        }
    }

    pub fn kind(&self) -> MetricKind {
        self.kind
    }

    /// The parameter as supplied; only `Some` for WYD.
    pub fn alpha(&self) -> Option<f64> {
        self.alpha
    }

    /// WYD exponent, with WY mapped to `1/2`.
    pub fn wyd_exponent(&self) -> Option<f64> {
        match self.kind {
            MetricKind::WignerYanase => Some(0.5),
            MetricKind::WignerYanaseDyson => self.alpha,
            MetricKind::Sld => None,
        }
    }

    /// `m(c) = lim_{t→0} f(t)`.
    pub fn m_c(&self) -> f64 {
        match self.kind {
            MetricKind::WignerYanase => 0.25,
            MetricKind::WignerYanaseDyson => {
                let a = self.alpha.unwrap_or(0.5);
                a * (1.0 - a)
            }
            MetricKind::Sld => 0.5,
        }
    }

    /// Morozova–Chentsov function `c(x, y)`, with its diagonal limit `1/x`.
    pub fn mc_function(&self, x: f64, y: f64) -> Result<f64> {
        if !(x >= 0.0 && y >= 0.0) {
            return Err(Error::Domain(format!("c({x}, {y}) needs non-negative arguments")));
        }
        if x == 0.0 && y == 0.0 {
            return Err(Error::Domain("c(0, 0) is undefined".into()));
        }
        if x == y {
            return Ok(1.0 / x);
        }
        Ok(match self.kind {
            MetricKind::WignerYanase => {
                let s = x.sqrt() + y.sqrt();
                4.0 / (s * s)
            }
            MetricKind::WignerYanaseDyson => {
                let a = self.alpha.unwrap_or(0.5);
                let d = x - y;
                (x.powf(a) - y.powf(a)) * (x.powf(1.0 - a) - y.powf(1.0 - a))
                    / (a * (1.0 - a) * d * d)
            }
            MetricKind::Sld => 2.0 / (x + y),
        })
    }

    /// Operator monotone function recovered as `f(t) = 1 / c(t, 1)`.
    pub fn monotone_function(&self, t: f64) -> Result<f64> {
        if t.is_nan() || t <= 0.0 {
            return Err(Error::Domain(format!("f({t}) needs t > 0")));
        }
        Ok(1.0 / self.mc_function(t, 1.0)?)
    }

    /// Pairwise eigenvalue weight `w(x, y) = (m(c)/2) c(x, y) (x − y)²`.
    ///
    /// Symmetric, non-negative, and zero on the diagonal and at `(0, 0)`. The WYD
    /// family uses the product form `½ (x^α − y^α)(x^{1−α} − y^{1−α})`.
    pub fn weight(&self, x: f64, y: f64) -> f64 {
        if x == y {
            return 0.0;
        }
        match self.kind {
            MetricKind::WignerYanase => {
                let d = x.sqrt() - y.sqrt();
                0.5 * d * d
            }
            MetricKind::WignerYanaseDyson => {
                let a = self.alpha.unwrap_or(0.5);
                0.5 * (pow0(x, a) - pow0(y, a)) * (pow0(x, 1.0 - a) - pow0(y, 1.0 - a))
            }
            MetricKind::Sld => {
                let d = x - y;
                d * d / (2.0 * (x + y))
            }
        }
    }
}

#[inline]
fn pow0(x: f64, s: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x.powf(s)
    }
}

impl fmt::Display for MetricSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            MetricKind::WignerYanase => f.write_str("wy"),
            MetricKind::WignerYanaseDyson => write!(f, "wyd:{}", self.alpha.unwrap_or(0.5)),
            MetricKind::Sld => f.write_str("sld"),
        }
    }
}

impl FromStr for MetricSpec {
    type Err = Error;

    /// Accepts exactly `wy`, `sld` or `wyd:<alpha>`.
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "wy" => Ok(Self::wy()),
            "sld" => Ok(Self::sld()),
            _ => {
                let Some(rest) = s.strip_prefix("wyd:") else {
                    return Err(Error::Domain(format!("unknown metric {s:?}")));
                };
                let alpha: f64 = rest
                    .parse()
                    .map_err(|_| Error::Domain(format!("bad WYD alpha {rest:?}")))?;
                Self::wyd(alpha)
            }
        }
    }
}

impl From<MetricSpec> for String {
    fn from(m: MetricSpec) -> String {
        format!("{m}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec::Vec;

    fn all_metrics() -> Vec<MetricSpec> {
        let mut v: Vec<MetricSpec> = [0.1, 0.25, 0.5, 0.75, 0.9]
            .iter()
            .map(|&a| MetricSpec::wyd(a).unwrap())
            .collect();
        v.push(MetricSpec::wy());
        v.push(MetricSpec::sld());
        v
    }

    #[test]
    fn constants() {
        assert_eq!(MetricSpec::wyd(0.25).unwrap().m_c(), 3.0 / 16.0);
        assert_eq!(MetricSpec::wyd(0.5).unwrap().m_c(), 0.25);
        assert_eq!(MetricSpec::wy().m_c(), 0.25);
        assert_eq!(MetricSpec::sld().m_c(), 0.5);
        // m(c) is the t → 0 limit of f
        for m in all_metrics() {
            let f0 = m.monotone_function(1e-200).unwrap();
            assert!((f0 - m.m_c()).abs() < 1e-6, "{m}: {f0}");
        }
    }

    #[test]
    fn wyd_half_matches_wy() {
        let half = MetricSpec::wyd(0.5).unwrap();
        let wy = MetricSpec::wy();
        for &(x, y) in &[(0.3, 0.7), (1.0, 0.0), (0.01, 0.99), (0.5, 0.5)] {
            assert!((half.weight(x, y) - wy.weight(x, y)).abs() <= 1e-15);
            if !(x == 0.0 && y == 0.0) {
                let a = half.mc_function(x, y).unwrap();
                let b = wy.mc_function(x, y).unwrap();
                assert!((a - b).abs() <= 1e-12 * a.max(1.0));
            }
        }
    }

    #[test]
    fn make_metric_errors() {
        assert!(make_metric(MetricKind::WignerYanaseDyson, Some(0.0)).is_err());
        assert!(make_metric(MetricKind::WignerYanaseDyson, Some(1.0)).is_err());
        assert!(make_metric(MetricKind::WignerYanaseDyson, None).is_err());
        assert!(make_metric(MetricKind::Sld, Some(0.3)).is_err());
        assert!(make_metric(MetricKind::WignerYanase, Some(0.5)).is_err());
        assert!(make_metric(MetricKind::Sld, None).is_ok());
    }

    #[test]
    fn mc_values() {
        let wy = MetricSpec::wyd(0.5).unwrap();
        assert!((wy.mc_function(1.0, 0.0).unwrap() - 4.0).abs() < 1e-15);
        for m in all_metrics() {
            assert_eq!(m.mc_function(1.0, 1.0).unwrap(), 1.0);
            assert!(m.mc_function(0.0, 0.0).is_err());
            assert!(m.mc_function(-1.0, 0.5).is_err());
        }
        assert_eq!(MetricSpec::sld().mc_function(1.0, 3.0).unwrap(), 0.5);
    }

    #[test]
    fn functional_equation() {
        for m in all_metrics() {
            for &t in &[0.01, 0.1, 0.5, 1.0, 2.0, 10.0, 100.0] {
                let lhs = m.monotone_function(t).unwrap();
                let rhs = t * m.monotone_function(1.0 / t).unwrap();
                assert!((lhs - rhs).abs() <= 1e-12 * lhs.max(1.0), "{m} t={t}: {lhs} vs {rhs}");
            }
            assert_eq!(m.monotone_function(1.0).unwrap(), 1.0);
        }
    }

    #[test]
    fn weight_values() {
        let wy = MetricSpec::wyd(0.5).unwrap();
        assert_eq!(wy.weight(1.0, 0.0), 0.5);
        assert_eq!(MetricSpec::sld().weight(1.0, 0.0), 0.5);
        for m in all_metrics() {
            assert_eq!(m.weight(0.0, 0.0), 0.0);
            assert_eq!(m.weight(0.4, 0.4), 0.0);
            assert_eq!(m.weight(0.2, 0.7), m.weight(0.7, 0.2));
            assert!(m.weight(0.9, 0.0) > 0.0);
        }
    }

    #[test]
    fn weight_is_product_form_of_mc() {
        for m in all_metrics() {
            for &(x, y) in &[(0.1, 0.9), (0.3, 0.31), (1.0, 0.05), (0.6, 0.2)] {
                let via_c = 0.5 * m.m_c() * m.mc_function(x, y).unwrap() * (x - y) * (x - y);
                assert!((via_c - m.weight(x, y)).abs() <= 1e-12, "{m} ({x},{y})");
            }
        }
    }

    #[test]
    fn weight_vanishes_quadratically() {
        let h = 1e-6;
        for m in all_metrics() {
            for i in 0..=9 {
                let x = 0.1 + 0.1 * i as f64;
                let w = m.weight(x, x + h);
                // c(x, x) = 1/x ≤ 10 here, so K = m(c)/2 · 10 · (1 + slack) suffices
                assert!(w.abs() <= 0.5 * m.m_c() * 11.0 * h * h, "{m} x={x}: {w}");
            }
        }
    }

    #[test]
    fn parse_and_display() {
        assert_eq!("wy".parse::<MetricSpec>().unwrap(), MetricSpec::wy());
        assert_eq!("sld".parse::<MetricSpec>().unwrap(), MetricSpec::sld());
        let m: MetricSpec = "wyd:0.25".parse().unwrap();
        assert_eq!(m.alpha(), Some(0.25));
        assert_eq!(alloc::format!("{m}"), "wyd:0.25");
        assert!("wyd:1.5".parse::<MetricSpec>().is_err());
        assert!("wyd".parse::<MetricSpec>().is_err());
        assert!("WY".parse::<MetricSpec>().is_err());
        assert!("wyd:abc".parse::<MetricSpec>().is_err());
    }
}
