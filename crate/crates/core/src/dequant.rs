//! Dequantization: the deformed additions `x +_h y = S_h^{-1}(S_h(x) + S_h(y))`,
//! their tropical limits, the hyperfield homotopy and grid emission.

use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::cmp::Ordering;

use astro_float::{BigFloat, Consts, Radix, RoundingMode};
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;
use crate::hyperfield::{hypersum, Element, Field, Part, SetValue};
use crate::num::{fmt_rational, parse_rational, rational_pow, Turn, Q};

pub const DEFAULT_PRECISION: usize = 128;
const RM: RoundingMode = RoundingMode::ToEven;

/// A working precision with its constant cache.
///
/// Tolerances default to `2^-(bits/2)` relative, i.e. `2^-64` at 128 bits.
pub struct Prec {
    p: usize,
    cc: Consts,
    eps_bits: usize,
}

impl Prec {
    pub fn new(bits: usize) -> Self {
        let bits = bits.max(64);
        Prec { p: bits, cc: Consts::new().expect("constant cache"), eps_bits: bits / 2 }
    }

    pub fn bits(&self) -> usize {
        self.p
    }

    /// The same tolerance at `extra` more bits of working precision.
    pub fn widened(&self, extra: usize) -> Prec {
        Prec { p: self.p + extra, cc: Consts::new().expect("constant cache"), eps_bits: self.eps_bits }
    }

    pub fn int(&self, n: i64) -> BigFloat {
        BigFloat::from_i64(n, self.p)
    }

    pub fn q(&mut self, x: &Q) -> BigFloat {
        let n = BigFloat::parse(&x.numer().to_string(), Radix::Dec, self.p, RM, &mut self.cc);
        let d = BigFloat::parse(&x.denom().to_string(), Radix::Dec, self.p, RM, &mut self.cc);
        n.div(&d, self.p, RM)
    }

    /// The relative tolerance `2^-eps_bits`.
    pub fn eps(&self) -> BigFloat {
        self.int(1).div(&self.int(2).powi(self.eps_bits, self.p, RM), self.p, RM)
    }

    /// `|a - b| <= eps * max(1, |a|, |b|)`.
    pub fn close(&self, a: &BigFloat, b: &BigFloat) -> bool {
        let scale = self.int(1).max(&a.abs()).max(&b.abs());
        let diff = a.sub(b, self.p, RM).abs();
        diff.cmp(&self.eps().mul(&scale, self.p, RM)).is_some_and(|c| c <= 0)
    }

    /// A rational within `10^-digits` relative of `x`.
    pub fn to_rational(&mut self, x: &BigFloat, digits: usize) -> Q {
        let s = self.format_sig(x, digits);
        parse_rational(&s).unwrap_or_else(Q::zero)
    }

    /// Whether `|x| <= eps * scale`.
    pub fn negligible(&self, x: &BigFloat, scale: &BigFloat) -> bool {
        let bound = self.eps().mul(&self.int(1).max(&scale.abs()), self.p, RM);
        Prec::cmp(&x.abs(), &bound) != Ordering::Greater
    }

    pub fn to_f64(&mut self, x: &BigFloat) -> f64 {
        if x.is_zero() {
            return 0.0;
        }
        let s = x.format(Radix::Dec, RM, &mut self.cc).unwrap_or_default();
        s.parse::<f64>().unwrap_or(f64::NAN)
    }

    /// Decimal rendering with `digits` significant digits, no exponent.
    pub fn format_sig(&mut self, x: &BigFloat, digits: usize) -> String {
        if x.is_zero() {
            return String::from("0");
        }
        let s = x.format(Radix::Dec, RM, &mut self.cc).unwrap_or_default();
        format_decimal(&s, digits)
    }

    fn pi(&mut self) -> BigFloat {
        self.cc.pi(self.p, RM)
    }

    /// `x^e` for `x >= 0`, using repeated multiplication for integer exponents.
    pub fn pow_q(&mut self, x: &BigFloat, e: &Q) -> BigFloat {
        if x.is_zero() {
            return self.int(0);
        }
        if e.is_integer() {
            let n = e.numer().abs().to_usize().unwrap_or(usize::MAX);
            let v = x.powi(n, self.p, RM);
            return if e.is_negative() { self.int(1).div(&v, self.p, RM) } else { v };
        }
        let eb = self.q(e);
        x.pow(&eb, self.p, RM, &mut self.cc)
    }

    pub fn mul(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.mul(b, self.p, RM)
    }

    pub fn add(&self, a: &BigFloat, b: &BigFloat) -> BigFloat {
        a.add(b, self.p, RM)
    }

    /// Total comparison; NaN compares greater.
    pub fn cmp(a: &BigFloat, b: &BigFloat) -> Ordering {
        match a.cmp(b) {
            Some(c) if c < 0 => Ordering::Less,
            Some(0) => Ordering::Equal,
            _ => Ordering::Greater,
        }
    }
}

impl Default for Prec {
    fn default() -> Self {
        Prec::new(DEFAULT_PRECISION)
    }
}

/// Rounds a `d.ddd…e±x` string to `digits` significant digits in plain notation.
fn format_decimal(s: &str, digits: usize) -> String {
    let (neg, body) = match s.strip_prefix('-') {
        Some(b) => (true, b),
        None => (false, s),
    };
    let (mant, exp) = match body.split_once(['e', 'E']) {
        Some((m, e)) => (m, e.parse::<i64>().unwrap_or(0)),
        None => (body, 0),
    };
    let (ip, fp) = mant.split_once('.').unwrap_or((mant, ""));
    let mut ds: Vec<u8> = ip.bytes().chain(fp.bytes()).map(|b| b - b'0').collect();
    // position of the decimal point relative to the start of `ds`
    let mut point = ip.len() as i64 + exp;
    let lead = ds.iter().take_while(|&&d| d == 0).count();
    ds.drain(..lead);
    point -= lead as i64;
    if ds.is_empty() {
        return String::from("0");
    }
    if ds.len() > digits {
        let round_up = ds[digits] >= 5;
        ds.truncate(digits);
        if round_up {
            let mut i = digits;
            loop {
                if i == 0 {
                    ds.insert(0, 1);
                    ds.truncate(digits);
                    point += 1;
                    break;
                }
                i -= 1;
                if ds[i] == 9 {
                    ds[i] = 0;
                } else {
                    ds[i] += 1;
                    break;
                }
            }
        }
    }
    ds.resize(digits, 0);
    let mut out = String::new();
    if neg {
        out.push('-');
    }
    let digit = |d: u8| char::from(b'0' + d);
    if point <= 0 {
        out.push_str("0.");
        for _ in 0..(-point) {
            out.push('0');
        }
        out.extend(ds.iter().map(|&d| digit(d)));
    } else if point as usize >= ds.len() {
        out.extend(ds.iter().map(|&d| digit(d)));
        for _ in 0..(point as usize - ds.len()) {
            out.push('0');
        }
    } else {
        let (a, b) = ds.split_at(point as usize);
        out.extend(a.iter().map(|&d| digit(d)));
        out.push('.');
        out.extend(b.iter().map(|&d| digit(d)));
    }
    out
}

fn check_h(h: &Q) -> Result<(), Error> {
    if h.is_positive() {
        Ok(())
    } else {
        Err(Error::Invalid(alloc::format!("h must be positive, got {}", fmt_rational(h))))
    }
}

/// `S_h(x) = |x|^{1/h} x/|x|` on the reals.
pub fn s_h(prec: &mut Prec, x: &BigFloat, h: &Q) -> Result<BigFloat, Error> {
    check_h(h)?;
    let m = prec.pow_q(&x.abs(), &h.recip());
    Ok(if x.is_negative() { m.neg() } else { m })
}

/// `x +_h y` on the reals.
pub fn plus_h(prec: &mut Prec, x: &BigFloat, y: &BigFloat, h: &Q) -> Result<BigFloat, Error> {
    let sx = s_h(prec, x, h)?;
    let sy = s_h(prec, y, h)?;
    let s = sx.add(&sy, prec.p, RM);
    s_h(prec, &s, &h.recip())
}

/// A complex number in Cartesian form.
#[derive(Clone, Debug)]
pub struct Complex {
    pub re: BigFloat,
    pub im: BigFloat,
}

impl Complex {
    pub fn from_polar(prec: &mut Prec, modulus: &BigFloat, turns: &BigFloat) -> Complex {
        let two_pi = prec.pi().mul(&prec.int(2), prec.p, RM);
        let theta = turns.mul(&two_pi, prec.p, RM);
        let c = theta.cos(prec.p, RM, &mut prec.cc);
        let s = theta.sin(prec.p, RM, &mut prec.cc);
        Complex { re: modulus.mul(&c, prec.p, RM), im: modulus.mul(&s, prec.p, RM) }
    }

    pub fn from_element(prec: &mut Prec, x: &Element) -> Complex {
        let m = prec.q(x.modulus());
        let t = prec.q(x.angle().value());
        Complex::from_polar(prec, &m, &t)
    }

    /// Modulus and angle in turns within `[0, 1)`.
    pub fn to_polar(&self, prec: &mut Prec) -> (BigFloat, BigFloat) {
        let p = prec.p;
        let m = self.re.mul(&self.re, p, RM).add(&self.im.mul(&self.im, p, RM), p, RM).sqrt(p, RM);
        if m.is_zero() {
            return (m, prec.int(0));
        }
        let pi = prec.pi();
        let mut theta = if self.re.is_zero() {
            let half_pi = pi.div(&prec.int(2), p, RM);
            if self.im.is_negative() { half_pi.neg() } else { half_pi }
        } else {
            let a = self.im.div(&self.re, p, RM).atan(p, RM, &mut prec.cc);
            if self.re.is_negative() { a.add(&pi, p, RM) } else { a }
        };
        let two_pi = pi.mul(&prec.int(2), p, RM);
        if theta.is_negative() {
            theta = theta.add(&two_pi, p, RM);
        }
        let mut turns = theta.div(&two_pi, p, RM);
        if Prec::cmp(&turns, &prec.int(1)) != Ordering::Less {
            turns = turns.sub(&prec.int(1), p, RM);
        }
        (m, turns)
    }

    pub fn add(&self, other: &Complex, prec: &Prec) -> Complex {
        Complex { re: self.re.add(&other.re, prec.p, RM), im: self.im.add(&other.im, prec.p, RM) }
    }
}

/// `S_h` on the complex plane: raise the modulus to `1/h`, keep the phase.
pub fn s_h_complex(prec: &mut Prec, z: &Complex, h: &Q) -> Result<Complex, Error> {
    check_h(h)?;
    let (m, t) = z.to_polar(prec);
    let m = prec.pow_q(&m, &h.recip());
    Ok(Complex::from_polar(prec, &m, &t))
}

/// `x +_h y` on the complex plane.
pub fn plus_h_complex(prec: &mut Prec, x: &Complex, y: &Complex, h: &Q) -> Result<Complex, Error> {
    let sx = s_h_complex(prec, x, h)?;
    let sy = s_h_complex(prec, y, h)?;
    let s = sx.add(&sy, prec);
    s_h_complex(prec, &s, &h.recip())
}

/// How a pair behaves in the tropical limit.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PairKind {
    /// One modulus is strictly larger.
    Dominant,
    /// Equal elements.
    Tie,
    /// `x = -y`: the sum is exactly zero at every `h`.
    Cancellation,
    /// Equal moduli with different phases (complex case only).
    Arc,
}

#[derive(Clone, Debug)]
pub struct LimitStep {
    pub h: Q,
    pub value: String,
    pub distance: f64,
}

#[derive(Clone, Debug)]
pub struct LimitReport {
    pub x: Element,
    pub y: Element,
    pub kind: PairKind,
    pub target: SetValue,
    pub steps: Vec<LimitStep>,
    pub passed: bool,
}

fn check_hs(hs: &[Q]) -> Result<(), Error> {
    if hs.is_empty() || hs.iter().any(|h| !h.is_positive()) || hs.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Invalid(String::from("h values must be positive and strictly decreasing")));
    }
    Ok(())
}

fn trend_ok(prec: &mut Prec, ds: &[BigFloat]) -> bool {
    let slack = prec.eps();
    ds.windows(2).all(|w| Prec::cmp(&w[1], &w[0].add(&slack, prec.p, RM)) != Ordering::Greater)
}

/// Follows `x +_h y` along decreasing `h` and measures the distance to the
/// tropical hypersum `x ⊞ y` in TR.
///
/// Dominant pairs must end within `tol`; ties must shrink monotonically;
/// cancellations stay at distance zero.
pub fn tropical_limit_check(prec: &mut Prec, x: &Q, y: &Q, hs: &[Q], tol: f64) -> Result<LimitReport, Error> {
    check_hs(hs)?;
    let ex = Element::real(Field::TR, x.clone())?;
    let ey = Element::real(Field::TR, y.clone())?;
    let target = hypersum(&ex, &ey)?;
    let kind = if x.abs() != y.abs() || x.is_zero() {
        PairKind::Dominant
    } else if x == y {
        PairKind::Tie
    } else {
        PairKind::Cancellation
    };
    let bx = prec.q(x);
    let by = prec.q(y);
    let mut steps = Vec::new();
    let mut ds = Vec::new();
    for h in hs {
        let z = plus_h(prec, &bx, &by, h)?;
        let d = distance_to_set(prec, &target, &Complex { re: z.clone(), im: prec.int(0) });
        steps.push(LimitStep { h: h.clone(), value: prec.format_sig(&z, 20), distance: prec.to_f64(&d) });
        ds.push(d);
    }
    let last = steps.last().map(|s| s.distance).unwrap_or(0.0);
    let passed = trend_ok(prec, &ds)
        && match kind {
            PairKind::Dominant => last < tol,
            PairKind::Tie => steps.len() < 2 || last < steps[0].distance || steps[0].distance == 0.0,
            PairKind::Cancellation | PairKind::Arc => steps.iter().all(|s| s.distance == 0.0),
        };
    Ok(LimitReport { x: ex, y: ey, kind, target, steps, passed })
}

/// Euclidean distance from a point of the plane to a set value drawn in the
/// plane (line fields on the real axis, circle fields on the unit circle).
pub fn distance_to_set(prec: &mut Prec, set: &SetValue, z: &Complex) -> BigFloat {
    let p = prec.p;
    let (rho, theta) = z.to_polar(prec);
    let mut cands: Vec<BigFloat> = Vec::new();
    if set.contains_zero() {
        cands.push(rho.clone());
    }
    let chord = |prec: &mut Prec, r: &BigFloat, phi: &BigFloat| {
        let w = Complex::from_polar(prec, r, phi);
        let dx = z.re.sub(&w.re, p, RM);
        let dy = z.im.sub(&w.im, p, RM);
        dx.mul(&dx, p, RM).add(&dy.mul(&dy, p, RM), p, RM).sqrt(p, RM)
    };
    for part in set.parts() {
        match part {
            Part::Disk { radius } => {
                let r = prec.q(&radius);
                let d = rho.sub(&r, p, RM);
                cands.push(if d.is_negative() { prec.int(0) } else { d });
            }
            Part::Circle { modulus } => {
                let r = prec.q(&modulus);
                cands.push(rho.sub(&r, p, RM).abs());
            }
            Part::Points(ps) => {
                for e in ps {
                    let r = prec.q(e.modulus());
                    let a = prec.q(e.angle().value());
                    cands.push(chord(prec, &r, &a));
                }
            }
            Part::Arc { start, end, modulus, .. } => {
                let r = prec.q(&modulus);
                let s = prec.q(&start);
                let e = prec.q(&end);
                let t1 = theta.add(&prec.int(1), p, RM);
                let inside = |t: &BigFloat| Prec::cmp(t, &s) != Ordering::Less && Prec::cmp(t, &e) != Ordering::Greater;
                if inside(&theta) || inside(&t1) {
                    cands.push(rho.sub(&r, p, RM).abs());
                } else {
                    cands.push(chord(prec, &r, &s));
                    cands.push(chord(prec, &r, &e));
                }
            }
            Part::Interval { lo, hi, .. } => {
                let lo = prec.q(&lo);
                let hi = prec.q(&hi);
                let c = if Prec::cmp(&z.re, &lo) == Ordering::Less {
                    lo
                } else if Prec::cmp(&z.re, &hi) == Ordering::Greater {
                    hi
                } else {
                    z.re.clone()
                };
                let dx = z.re.sub(&c, p, RM);
                cands.push(dx.mul(&dx, p, RM).add(&z.im.mul(&z.im, p, RM), p, RM).sqrt(p, RM));
            }
        }
    }
    cands.into_iter().reduce(|a, b| if Prec::cmp(&a, &b) == Ordering::Greater { b } else { a }).unwrap_or_else(|| prec.int(0))
}

/// The complex analogue of [`tropical_limit_check`], against the TC hypersum.
pub fn tropical_limit_check_complex(prec: &mut Prec, x: &Element, y: &Element, hs: &[Q], tol: f64) -> Result<LimitReport, Error> {
    check_hs(hs)?;
    let target = hypersum(x, y)?;
    let kind = if x.modulus() != y.modulus() || x.is_zero() {
        PairKind::Dominant
    } else if x == y {
        PairKind::Tie
    } else if *x == y.neg() {
        PairKind::Cancellation
    } else {
        PairKind::Arc
    };
    let cx = Complex::from_element(prec, x);
    let cy = Complex::from_element(prec, y);
    let mut steps = Vec::new();
    let mut ds = Vec::new();
    for h in hs {
        let z = plus_h_complex(prec, &cx, &cy, h)?;
        let d = distance_to_set(prec, &target, &z);
        let (m, t) = z.to_polar(prec);
        let value = alloc::format!("{}@{}", prec.format_sig(&m, 20), prec.format_sig(&t, 20));
        steps.push(LimitStep { h: h.clone(), value, distance: prec.to_f64(&d) });
        ds.push(d);
    }
    let last = steps.last().map(|s| s.distance).unwrap_or(0.0);
    let passed = trend_ok(prec, &ds)
        && match kind {
            PairKind::Dominant | PairKind::Cancellation => last < tol,
            PairKind::Tie | PairKind::Arc => steps.len() < 2 || last < steps[0].distance || steps[0].distance == 0.0,
        };
    Ok(LimitReport { x: x.clone(), y: y.clone(), kind, target, steps, passed })
}

/// The pointwise limit operation `lim_{h→0} x +_h y` on the reals.
pub fn naive_limit(x: &Q, y: &Q) -> Q {
    match x.abs().cmp(&y.abs()) {
        Ordering::Greater => x.clone(),
        Ordering::Less => y.clone(),
        Ordering::Equal => {
            if x == y {
                x.clone()
            } else {
                Q::zero()
            }
        }
    }
}

/// The failure of associativity of the limit operation on `(1, -1, -1)`,
/// next to the composite values at positive `h`, which agree.
#[derive(Clone, Debug)]
pub struct NonAssociativity {
    pub naive_left: Q,
    pub naive_right: Q,
    /// `((1 +_h -1) +_h -1, 1 +_h (-1 +_h -1))` for each `h`.
    pub composite: Vec<(Q, f64, f64)>,
}

pub fn non_associativity_witness(prec: &mut Prec, hs: &[Q]) -> Result<NonAssociativity, Error> {
    let one = Q::one();
    let m1 = -Q::one();
    let naive_left = naive_limit(&naive_limit(&one, &m1), &m1);
    let naive_right = naive_limit(&one, &naive_limit(&m1, &m1));
    let b1 = prec.int(1);
    let bm = prec.int(-1);
    let mut composite = Vec::new();
    for h in hs {
        let inner = plus_h(prec, &b1, &bm, h)?;
        let l = plus_h(prec, &inner, &bm, h)?;
        let inner = plus_h(prec, &bm, &bm, h)?;
        let r = plus_h(prec, &b1, &inner, h)?;
        composite.push((h.clone(), prec.to_f64(&l), prec.to_f64(&r)));
    }
    Ok(NonAssociativity { naive_left, naive_right, composite })
}

/// Largest associativity defect of `+_h` over the given triples, and whether
/// every defect is within tolerance.
///
/// `S_h` stretches a magnitude ratio `R` to `R^{1/h}`, so the sums are formed
/// with that many extra bits; otherwise a small summand next to a cancelling
/// pair is absorbed and the defect is rounding, not arithmetic.
pub fn associativity_defect(prec: &mut Prec, triples: &[[Q; 3]], h: &Q) -> Result<(f64, bool), Error> {
    check_h(h)?;
    let log2 = |x: &Q| x.numer().bits() as i64 - x.denom().bits() as i64;
    let logs: Vec<i64> = triples.iter().flatten().filter(|x| !x.is_zero()).map(log2).collect();
    let spread = (logs.iter().max().unwrap_or(&0) - logs.iter().min().unwrap_or(&0) + 2) as u64;
    let stretch = h.recip().ceil().to_integer().to_u64().unwrap_or(u64::MAX);
    let extra = usize::try_from(spread.saturating_mul(stretch)).unwrap_or(usize::MAX).min(1 << 20);
    let prec = &mut prec.widened(extra + 8);
    let mut worst = 0.0f64;
    let mut ok = true;
    for [a, b, c] in triples {
        let (a, b, c) = (prec.q(a), prec.q(b), prec.q(c));
        let ab = plus_h(prec, &a, &b, h)?;
        let l = plus_h(prec, &ab, &c, h)?;
        let bc = plus_h(prec, &b, &c, h)?;
        let r = plus_h(prec, &a, &bc, h)?;
        if !prec.close(&l, &r) {
            ok = false;
        }
        let d = prec.to_f64(&l.sub(&r, prec.p, RM).abs());
        if d > worst {
            worst = d;
        }
    }
    Ok((worst, ok))
}

/// Value of the homotopy `H(x, t) = x |x|^{-t}`.
#[derive(Clone, Debug)]
pub enum HomotopyValue {
    Exact(Element),
    /// The modulus is irrational; the phase is unchanged.
    Approx { field: Field, modulus: BigFloat, angle: Turn },
}

impl HomotopyValue {
    pub fn exact(&self) -> Option<&Element> {
        match self {
            HomotopyValue::Exact(e) => Some(e),
            HomotopyValue::Approx { .. } => None,
        }
    }
}

/// `H(x, t) = x |x|^{-t}` for `x` in Triangle, TR, TC or TT and `t ∈ [0, 1]`.
pub fn homotopy_h(prec: &mut Prec, x: &Element, t: &Q) -> Result<HomotopyValue, Error> {
    let f = x.field();
    if !matches!(f, Field::Triangle | Field::TR | Field::TC | Field::TT) {
        return Err(Error::Invalid(alloc::format!("homotopy is defined on TRI, TR, TC, TT, not {f}")));
    }
    if t.is_negative() || *t > Q::one() {
        return Err(Error::Invalid(alloc::format!("t = {} is outside [0, 1]", fmt_rational(t))));
    }
    if x.is_zero() {
        return Ok(HomotopyValue::Exact(x.clone()));
    }
    let e = Q::one() - t;
    match rational_pow(x.modulus(), &e) {
        Some(m) => Ok(HomotopyValue::Exact(Element::polar(f, m, x.angle().clone())?)),
        None => {
            let m = prec.q(x.modulus());
            Ok(HomotopyValue::Approx { field: f, modulus: prec.pow_q(&m, &e), angle: x.angle().clone() })
        }
    }
}

/// `lo:hi:step` with rational (or terminating decimal) entries.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GridSpec {
    pub lo: Q,
    pub hi: Q,
    pub step: Q,
}

impl GridSpec {
    pub fn parse(s: &str) -> Result<GridSpec, Error> {
        let bad = || Error::Parse(alloc::format!("grid `{s}` is not lo:hi:step"));
        let mut it = s.split(':');
        let lo = parse_rational(it.next().ok_or_else(bad)?).ok_or_else(bad)?;
        let hi = parse_rational(it.next().ok_or_else(bad)?).ok_or_else(bad)?;
        let step = parse_rational(it.next().ok_or_else(bad)?).ok_or_else(bad)?;
        if it.next().is_some() || !step.is_positive() || hi < lo {
            return Err(bad());
        }
        Ok(GridSpec { lo, hi, step })
    }

    pub fn values(&self) -> Vec<Q> {
        let mut out = Vec::new();
        let mut x = self.lo.clone();
        while x <= self.hi {
            out.push(x.clone());
            x += &self.step;
        }
        out
    }
}

/// Rows `(x, y, z = x +_h y)` over the square grid, each rendered with 20
/// significant digits.
pub fn figure_emit(prec: &mut Prec, h: &Q, grid: &GridSpec) -> Result<Vec<[String; 3]>, Error> {
    check_h(h)?;
    let vals = grid.values();
    let bigs: Vec<BigFloat> = vals.iter().map(|v| prec.q(v)).collect();
    let labels: Vec<String> = bigs.iter().map(|b| prec.format_sig(b, 20)).collect();
    let s: Vec<BigFloat> = bigs.iter().map(|b| s_h(prec, b, h)).collect::<Result<_, _>>()?;
    let inv = h.recip();
    let mut rows = Vec::with_capacity(vals.len() * vals.len());
    for (i, sx) in s.iter().enumerate() {
        for (j, sy) in s.iter().enumerate() {
            let sum = sx.add(sy, prec.p, RM);
            let z = s_h(prec, &sum, &inv)?;
            rows.push([labels[i].clone(), labels[j].clone(), prec.format_sig(&z, 20)]);
        }
    }
    Ok(rows)
}

#[cfg(test)]
mod tests {
    extern crate std;

    use super::*;
    use crate::hyperfield::el;
    use crate::num::{q, qi};

    #[test]
    fn decimal_rounding() {
        assert_eq!(format_decimal("1.14869835499703500679862694677792758944e+0", 20), "1.1486983549970350068");
        assert_eq!(format_decimal("-2.0e+0", 5), "-2.0000");
        assert_eq!(format_decimal("9.9999996e-3", 3), "0.0100");
        assert_eq!(format_decimal("1.25e+2", 2), "130");
    }

    #[test]
    fn s_h_examples() {
        let mut p = Prec::default();
        let four = p.int(4);
        let v = s_h(&mut p, &four, &qi(1)).unwrap();
        assert!(p.close(&v, &four));
        let v = s_h(&mut p, &four, &q(1, 2)).unwrap();
        assert!(p.close(&v, &p.int(16)));
        let (m, three) = (p.int(-3), p.int(3));
        let a = s_h(&mut p, &m, &q(1, 3)).unwrap();
        let b = s_h(&mut p, &three, &q(1, 3)).unwrap().neg();
        assert!(p.close(&a, &b));
        assert!(s_h(&mut p, &four, &qi(0)).is_err());
        // S_h^{-1} = S_{1/h}
        for h in [q(1, 5), q(2, 3), qi(3)] {
            for x in [q(7, 3), q(-1, 2), qi(5)] {
                let bx = p.q(&x);
                let y = s_h(&mut p, &bx, &h).unwrap();
                let back = s_h(&mut p, &y, &h.recip()).unwrap();
                assert!(p.close(&back, &bx));
            }
        }
    }

    #[test]
    fn plus_h_examples() {
        let mut p = Prec::default();
        let one = p.int(1);
        let z = plus_h(&mut p, &one, &one, &q(1, 5)).unwrap();
        assert_eq!(p.format_sig(&z, 12), "1.14869835500");
        let (a, b) = (p.q(&q(3, 2)), p.q(&q(-2, 7)));
        let v = plus_h(&mut p, &a, &b, &qi(1)).unwrap();
        assert!(p.close(&v, &a.add(&b, 128, RM)));
        assert!(plus_h(&mut p, &one, &one.neg(), &q(1, 100)).unwrap().is_zero());
        let l = plus_h(&mut p, &a, &b, &q(1, 3)).unwrap();
        let r = plus_h(&mut p, &b, &a, &q(1, 3)).unwrap();
        assert!(p.close(&l, &r));
        let zero = p.int(0);
        let v = plus_h(&mut p, &a, &zero, &q(1, 9)).unwrap();
        assert!(p.close(&v, &a));
    }

    #[test]
    fn limits_follow_tropical_rules() {
        let mut p = Prec::default();
        let hs = [qi(1), q(1, 3), q(1, 9), q(1, 27)];
        let r = tropical_limit_check(&mut p, &qi(3), &qi(-2), &hs, 1e-3).unwrap();
        assert_eq!(r.kind, PairKind::Dominant);
        assert!(r.passed, "{r:?}");
        let r = tropical_limit_check(&mut p, &qi(1), &qi(1), &hs, 1e-6).unwrap();
        assert_eq!(r.kind, PairKind::Tie);
        assert!(r.passed);
        let r = tropical_limit_check(&mut p, &qi(2), &qi(-2), &hs, 1e-6).unwrap();
        assert!(r.passed && r.steps.iter().all(|s| s.distance == 0.0));
        assert!(tropical_limit_check(&mut p, &qi(1), &qi(1), &[q(1, 3), qi(1)], 1e-6).is_err());
    }

    #[test]
    fn complex_limits() {
        let mut p = Prec::default();
        let hs = [qi(1), q(1, 3), q(1, 9), q(1, 27), q(1, 81)];
        for (x, y) in [("TC:2@0", "TC:1@1/4"), ("TC:1@0", "TC:1@1/2"), ("TC:1@0", "TC:1@1/4")] {
            let r = tropical_limit_check_complex(&mut p, &el(x), &el(y), &hs, 1e-6).unwrap();
            assert!(r.passed, "{r:?}");
        }
    }

    #[test]
    fn naive_limit_is_not_associative() {
        let mut p = Prec::default();
        let w = non_associativity_witness(&mut p, &[q(1, 3), q(1, 27)]).unwrap();
        assert_eq!(w.naive_left, qi(-1));
        assert_eq!(w.naive_right, qi(0));
        for (_, l, r) in w.composite {
            assert!((l - r).abs() < 1e-30 && (l + 1.0).abs() < 1e-30);
        }
    }

    #[test]
    fn associativity_survives_cancellation() {
        // 1/3 next to a cancelling pair of 2s: 2^81 swamps (1/3)^81 at 128 bits
        let mut p = Prec::default();
        let t = [[qi(2), qi(-2), q(1, 3)], [q(1, 3), qi(-3), qi(3)]];
        for h in [qi(1), q(1, 9), q(1, 81)] {
            let (worst, ok) = associativity_defect(&mut p, &t, &h).unwrap();
            assert!(ok, "defect {worst} at h={h}");
        }
    }

    #[test]
    fn homotopy_examples() {
        let mut p = Prec::default();
        assert_eq!(homotopy_h(&mut p, &el("TT:4"), &qi(1)).unwrap().exact(), Some(&el("TT:1")));
        assert_eq!(homotopy_h(&mut p, &el("TR:-9"), &q(1, 2)).unwrap().exact(), Some(&el("TR:-3")));
        assert_eq!(homotopy_h(&mut p, &el("TC:7/2@1/3"), &qi(0)).unwrap().exact(), Some(&el("TC:7/2@1/3")));
        assert!(homotopy_h(&mut p, &el("TR:2"), &q(1, 2)).unwrap().exact().is_none());
        assert!(homotopy_h(&mut p, &el("TR:2"), &q(3, 2)).is_err());
        assert!(homotopy_h(&mut p, &el("S:+"), &q(1, 2)).is_err());
    }

    #[test]
    fn grid_rows() {
        let mut p = Prec::default();
        let g = GridSpec::parse("-1:1:1").unwrap();
        let rows = figure_emit(&mut p, &q(1, 5), &g).unwrap();
        assert_eq!(rows.len(), 9);
        let one_one = rows.iter().find(|r| r[0] == "1.0000000000000000000" && r[1] == "1.0000000000000000000").unwrap();
        assert!(one_one[2].starts_with("1.148698354997035"));
        let cancel = rows.iter().find(|r| r[0] == "1.0000000000000000000" && r[1] == "-1.0000000000000000000").unwrap();
        assert_eq!(cancel[2], "0");
        let plane = figure_emit(&mut p, &qi(1), &GridSpec::parse("0:1:0.5").unwrap()).unwrap();
        assert!(plane.iter().any(|r| r[0] == "0.50000000000000000000" && r[1] == "1.0000000000000000000" && r[2] == "1.5000000000000000000"));
        assert!(GridSpec::parse("2:1:1").is_err());
    }
}
