//! Points of the base line `P^1`.

use core::fmt;

use crate::poly::Chart;
use crate::scalar::{FieldMode, Scalar};
use crate::unipoly::{Place, UniPoly};

/// A point `(t0 : t1)`, normalized to `(1 : c)` or `(0 : 1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BasePoint {
    t0: Scalar,
    t1: Scalar,
}

impl BasePoint {
    /// `None` for `(0 : 0)`.
    pub fn new(t0: Scalar, t1: Scalar) -> Option<Self> {
        if !t0.is_zero() {
            let inv = t0.inv().unwrap();
            Some(BasePoint {
                t1: &t1 * &inv,
                t0: Scalar::one(t0.mode()),
            })
        } else if !t1.is_zero() {
            Some(BasePoint {
                t0,
                t1: Scalar::one(t1.mode()),
            })
        } else {
            None
        }
    }

    /// `(1 : c)`.
    pub fn affine(c: Scalar) -> Self {
        BasePoint {
            t0: Scalar::one(c.mode()),
            t1: c,
        }
    }

    /// `(0 : 1)`.
    pub fn infinity(mode: FieldMode) -> Self {
        BasePoint {
            t0: Scalar::zero(mode),
            t1: Scalar::one(mode),
        }
    }

    pub fn t0(&self) -> &Scalar {
        &self.t0
    }

    pub fn t1(&self) -> &Scalar {
        &self.t1
    }

    pub fn mode(&self) -> FieldMode {
        self.t0.mode()
    }

    /// Value of the chart's local coordinate, if the point lies in the chart.
    pub fn chart_coordinate(&self, chart: Chart) -> Option<Scalar> {
        match chart {
            Chart::T0 => (!self.t0.is_zero()).then(|| self.t1.clone()),
            Chart::T1 => {
                let inv = self.t1.inv()?;
                Some(&self.t0 * &inv)
            }
        }
    }

    /// The point with local coordinate `c` in `chart`.
    pub fn from_chart(chart: Chart, c: Scalar) -> Self {
        let one = Scalar::one(c.mode());
        match chart {
            Chart::T0 => BasePoint::affine(c),
            Chart::T1 => BasePoint::new(c, one).unwrap(),
        }
    }

    /// Chart whose local coordinate vanishes at this point, if any.
    pub fn is_chart_origin(&self, chart: Chart) -> bool {
        self.chart_coordinate(chart).is_some_and(|c| c.is_zero())
    }
}

impl fmt::Display for BasePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}:{})", self.t0, self.t1)
    }
}

/// A closed point of the base: a rational point, or the zero set of a
/// monic polynomial in `t = t1/t0` with no root in the field.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BasePlace {
    Point(BasePoint),
    Closed(UniPoly),
}

impl BasePlace {
    /// Translate a place of a chart's coordinate ring.
    pub fn from_chart(chart: Chart, place: &Place) -> Self {
        match (chart, place) {
            (_, Place::Point(c)) => BasePlace::Point(BasePoint::from_chart(chart, c.clone())),
            (Chart::T0, Place::Higher(g)) => BasePlace::Closed(g.monic()),
            (Chart::T1, Place::Higher(g)) => {
                BasePlace::Closed(g.reversed(g.degree().unwrap_or(0)).monic())
            }
        }
    }

    pub fn degree(&self) -> usize {
        match self {
            BasePlace::Point(_) => 1,
            BasePlace::Closed(g) => g.degree().unwrap_or(0),
        }
    }

    pub fn point(&self) -> Option<&BasePoint> {
        match self {
            BasePlace::Point(p) => Some(p),
            BasePlace::Closed(_) => None,
        }
    }

    /// Whether the place lies in the chart.
    pub fn in_chart(&self, chart: Chart) -> bool {
        match self {
            BasePlace::Point(p) => p.chart_coordinate(chart).is_some(),
            BasePlace::Closed(_) => true,
        }
    }
}

impl fmt::Display for BasePlace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasePlace::Point(p) => write!(f, "{}", p),
            BasePlace::Closed(g) => write!(f, "{{{} = 0}}", g),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;

    #[test]
    fn normalization() {
        let q = FieldMode::Rational;
        let s = |v| Scalar::from_i64(q, v);
        assert_eq!(BasePoint::new(s(2), s(4)).unwrap(), BasePoint::affine(s(2)));
        assert_eq!(BasePoint::new(s(0), s(-3)).unwrap(), BasePoint::infinity(q));
        assert!(BasePoint::new(s(0), s(0)).is_none());
        assert_eq!(BasePoint::affine(s(0)).to_string(), "(1:0)");
        let p = BasePoint::affine(s(5));
        assert_eq!(p.chart_coordinate(Chart::T1).unwrap(), Scalar::from_ratio(q, &1.into(), &5.into()).unwrap());
        assert_eq!(BasePoint::from_chart(Chart::T1, s(0)), BasePoint::infinity(q));
    }

    #[test]
    fn places_agree_across_charts() {
        let q = FieldMode::Rational;
        let s = |v| Scalar::from_i64(q, v);
        // t^2 + 1 in the first chart is 1 + v^2 in the second
        let g = UniPoly::from_coeffs(alloc::vec![s(1), s(0), s(1)]);
        assert_eq!(
            BasePlace::from_chart(Chart::T0, &Place::Higher(g.clone())),
            BasePlace::from_chart(Chart::T1, &Place::Higher(g))
        );
        let h = UniPoly::from_coeffs(alloc::vec![s(2), s(1), s(1)]);
        let expected = UniPoly::from_coeffs(alloc::vec![
            Scalar::from_ratio(q, &1.into(), &2.into()).unwrap(),
            Scalar::from_ratio(q, &1.into(), &2.into()).unwrap(),
            s(1)
        ]);
        assert_eq!(
            BasePlace::from_chart(Chart::T1, &Place::Higher(h)),
            BasePlace::Closed(expected)
        );
        assert_eq!(
            BasePlace::from_chart(Chart::T1, &Place::Point(s(0))).to_string(),
            "(0:1)"
        );
    }
}
