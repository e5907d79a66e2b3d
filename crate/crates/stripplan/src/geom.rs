//! Exact rational plane geometry: points, segments, orientation and
//! intersection predicates. No floating point, no epsilons.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;
use std::fmt;

pub type Rat = BigRational;

/// Rational from an integer.
pub fn rat(n: i64) -> Rat {
    BigRational::from_integer(BigInt::from(n))
}

/// Rational p/q.
pub fn ratio(p: i64, q: i64) -> Rat {
    BigRational::new(BigInt::from(p), BigInt::from(q))
}

#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Point {
    pub x: Rat,
    pub y: Rat,
}

impl Point {
    pub fn new(x: Rat, y: Rat) -> Self {
        Point { x, y }
    }

    pub fn of(x: i64, y: i64) -> Self {
        Point::new(rat(x), rat(y))
    }
}

impl fmt::Debug for Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

/// Sign of the cross product (b - a) x (c - a): positive if a,b,c make a
/// left turn, negative for a right turn, zero if collinear.
pub fn orient(a: &Point, b: &Point, c: &Point) -> Ordering {
    let lhs = (&b.x - &a.x) * (&c.y - &a.y);
    let rhs = (&b.y - &a.y) * (&c.x - &a.x);
    lhs.cmp(&rhs)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Segment {
    pub a: Point,
    pub b: Point,
}

impl Segment {
    pub fn new(a: Point, b: Point) -> Self {
        Segment { a, b }
    }

    pub fn is_degenerate(&self) -> bool {
        self.a == self.b
    }

    fn bbox_overlaps(&self, other: &Segment) -> bool {
        let (sx0, sx1) = minmax(&self.a.x, &self.b.x);
        let (ox0, ox1) = minmax(&other.a.x, &other.b.x);
        if sx1 < ox0 || ox1 < sx0 {
            return false;
        }
        let (sy0, sy1) = minmax(&self.a.y, &self.b.y);
        let (oy0, oy1) = minmax(&other.a.y, &other.b.y);
        !(sy1 < oy0 || oy1 < sy0)
    }

    /// True if `p` lies on this segment (endpoints included).
    pub fn contains_point(&self, p: &Point) -> bool {
        if orient(&self.a, &self.b, p) != Ordering::Equal {
            return false;
        }
        let (x0, x1) = minmax(&self.a.x, &self.b.x);
        let (y0, y1) = minmax(&self.a.y, &self.b.y);
        *x0 <= p.x && p.x <= *x1 && *y0 <= p.y && p.y <= *y1
    }
}

fn minmax<'a>(a: &'a Rat, b: &'a Rat) -> (&'a Rat, &'a Rat) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// How two segments meet.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Meet {
    Disjoint,
    /// Exactly one shared point which is an endpoint of both segments.
    SharedEndpoint(Point),
    /// Any other non-empty intersection (crossing, T-touch, overlap).
    Crossing,
}

/// Exact intersection classification of two non-degenerate segments.
pub fn segments_meet(s: &Segment, t: &Segment) -> Meet {
    if !s.bbox_overlaps(t) {
        return Meet::Disjoint;
    }
    let o1 = orient(&s.a, &s.b, &t.a);
    let o2 = orient(&s.a, &s.b, &t.b);
    let o3 = orient(&t.a, &t.b, &s.a);
    let o4 = orient(&t.a, &t.b, &s.b);

    use Ordering::Equal;
    if o1 != Equal && o2 != Equal && o3 != Equal && o4 != Equal {
        if o1 != o2 && o3 != o4 {
            return Meet::Crossing;
        }
        return Meet::Disjoint;
    }

    // Some collinearity is involved; collect incidences.
    let mut touch: Vec<Point> = Vec::new();
    for p in [&t.a, &t.b] {
        if s.contains_point(p) {
            touch.push(p.clone());
        }
    }
    for p in [&s.a, &s.b] {
        if t.contains_point(p) && !touch.contains(p) {
            touch.push(p.clone());
        }
    }
    match touch.len() {
        0 => Meet::Disjoint,
        1 => {
            let p = touch.pop().unwrap();
            let endpoint_of_s = p == s.a || p == s.b;
            let endpoint_of_t = p == t.a || p == t.b;
            if endpoint_of_s && endpoint_of_t {
                Meet::SharedEndpoint(p)
            } else {
                Meet::Crossing
            }
        }
        _ => Meet::Crossing,
    }
}

/// Compare two direction vectors by angle, counterclockwise starting just
/// above the positive x-axis. Total order on non-zero directions; vectors
/// pointing the same way compare equal.
pub fn angle_cmp(u: &(Rat, Rat), v: &(Rat, Rat)) -> Ordering {
    let hu = half(u);
    let hv = half(v);
    if hu != hv {
        return hu.cmp(&hv);
    }
    // Same half-plane: positive cross means u -> v turns ccw, so u first.
    let cross = &u.0 * &v.1 - &u.1 * &v.0;
    if cross.is_positive() {
        Ordering::Less
    } else if cross.is_negative() {
        Ordering::Greater
    } else {
        Ordering::Equal
    }
}

/// 0 for the upper half (y > 0, or y == 0 and x > 0), 1 for the lower half.
fn half(v: &(Rat, Rat)) -> u8 {
    if v.1 > Rat::zero() || (v.1.is_zero() && v.0.is_positive()) {
        0
    } else {
        1
    }
}

/// Render a rational as a decimal with the given number of fraction digits
/// (round toward zero). Deterministic, used for SVG output.
pub fn decimal(r: &Rat, digits: u32) -> String {
    let neg = r.is_negative();
    let abs = r.abs();
    let scale = BigInt::from(10u32).pow(digits);
    let scaled = (abs.numer() * &scale) / abs.denom();
    let whole = &scaled / &scale;
    let frac = &scaled % &scale;
    let mut s = format!("{whole}.{frac:0>width$}", width = digits as usize);
    while s.ends_with('0') {
        s.pop();
    }
    if s.ends_with('.') {
        s.pop();
    }
    if neg && scaled != BigInt::zero() {
        format!("-{s}")
    } else {
        s
    }
}

/// Parse "p/q" or "p" into a rational.
pub fn parse_rat(s: &str) -> Option<Rat> {
    let mut it = s.splitn(2, '/');
    let p: BigInt = it.next()?.trim().parse().ok()?;
    match it.next() {
        None => Some(BigRational::from_integer(p)),
        Some(q) => {
            let q: BigInt = q.trim().parse().ok()?;
            if q.is_zero() {
                None
            } else {
                Some(BigRational::new(p, q))
            }
        }
    }
}

/// Format a rational as "p/q" (or "p" when integral).
pub fn format_rat(r: &Rat) -> String {
    if r.denom() == &BigInt::one() {
        format!("{}", r.numer())
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod test {
    use super::*;

    #[test]
    fn crossing_segments() {
        let s = Segment::new(Point::of(0, 0), Point::of(2, 2));
        let t = Segment::new(Point::of(0, 2), Point::of(2, 0));
        assert_eq!(segments_meet(&s, &t), Meet::Crossing);
    }

    #[test]
    fn shared_endpoint_only() {
        let s = Segment::new(Point::of(0, 0), Point::of(1, 1));
        let t = Segment::new(Point::of(1, 1), Point::of(2, 0));
        assert_eq!(
            segments_meet(&s, &t),
            Meet::SharedEndpoint(Point::of(1, 1))
        );
    }

    #[test]
    fn t_touch_is_a_crossing() {
        let s = Segment::new(Point::of(0, 0), Point::of(2, 0));
        let t = Segment::new(Point::of(1, 0), Point::of(1, 5));
        assert_eq!(segments_meet(&s, &t), Meet::Crossing);
    }

    #[test]
    fn collinear_overlap_is_a_crossing() {
        let s = Segment::new(Point::of(0, 0), Point::of(3, 0));
        let t = Segment::new(Point::of(1, 0), Point::of(5, 0));
        assert_eq!(segments_meet(&s, &t), Meet::Crossing);
    }

    #[test]
    fn collinear_disjoint() {
        let s = Segment::new(Point::of(0, 0), Point::of(1, 0));
        let t = Segment::new(Point::of(2, 0), Point::of(3, 0));
        assert_eq!(segments_meet(&s, &t), Meet::Disjoint);
    }

    #[test]
    fn angle_order_is_ccw_from_east() {
        let e = (rat(1), rat(0));
        let n = (rat(0), rat(1));
        let w = (rat(-1), rat(0));
        let s = (rat(0), rat(-1));
        assert_eq!(angle_cmp(&e, &n), Ordering::Less);
        assert_eq!(angle_cmp(&n, &w), Ordering::Less);
        assert_eq!(angle_cmp(&w, &s), Ordering::Less);
        assert_eq!(angle_cmp(&e, &e), Ordering::Equal);
    }

    #[test]
    fn decimal_rendering() {
        assert_eq!(decimal(&ratio(1, 2), 4), "0.5");
        assert_eq!(decimal(&ratio(-7, 3), 4), "-2.3333");
        assert_eq!(decimal(&rat(5), 4), "5");
    }

    #[test]
    fn rat_round_trip() {
        for s in ["3", "-4/7", "22/7"] {
            let r = parse_rat(s).unwrap();
            assert_eq!(format_rat(&r), s);
        }
    }
}
