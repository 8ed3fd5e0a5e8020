//! Truncated Taylor jets.
//!
//! A [`Jet`] of order `K` holds `d[k] = f^(k)(x0)` for `k = 0..=K`: derivative
//! values, not Taylor coefficients. Arithmetic converts to Taylor coefficients
//! internally (`c[k] = d[k] / k!`), applies the usual truncated-series
//! recurrences and converts back.
//!
//! Binary operators (`+`, `-`, `*`) panic on order mismatch, the same way
//! shape mismatches panic in array libraries. The named methods
//! ([`Jet::try_mul`], [`Jet::div`], ...) return [`Error::OrderMismatch`] instead.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default jet order used throughout the crate.
pub const DEFAULT_ORDER: usize = 5;

/// Divisor leading values smaller than this are treated as poles.
pub const DEFAULT_POLE_GUARD: f64 = 1e-10;

/// Value and first `order` derivatives of a scalar function at a point.
#[derive(Clone, PartialEq)]
pub struct Jet {
    d: Vec<f64>,
}

fn factorial(k: usize) -> f64 {
    (1..=k).fold(1.0, |acc, i| acc * i as f64)
}

impl Jet {
    pub fn constant(c: f64, order: usize) -> Self {
        let mut d = vec![0.0; order + 1];
        d[0] = c;
        Jet { d }
    }

    /// The identity function `x` expanded at `x0`.
    ///
    /// An order-0 variable is just the constant `x0`; callers asking for a
    /// variable normally want `order >= 1`.
    pub fn variable(x0: f64, order: usize) -> Self {
        let mut j = Self::constant(x0, order);
        if order >= 1 {
            j.d[1] = 1.0;
        }
        j
    }

    pub fn zero(order: usize) -> Self {
        Self::constant(0.0, order)
    }

    /// Builds a jet from derivative values `[f, f', f'', ...]`.
    pub fn from_derivatives(d: Vec<f64>) -> Result<Self> {
        if d.is_empty() {
            return Err(Error::InvalidArgument("empty derivative list".into()));
        }
        Ok(Jet { d })
    }

    /// Builds a jet from Taylor coefficients `c[k] = f^(k) / k!`.
    pub fn from_taylor(c: &[f64]) -> Self {
        Jet {
            d: c.iter().enumerate().map(|(k, &ck)| ck * factorial(k)).collect(),
        }
    }

    pub fn taylor(&self) -> Vec<f64> {
        self.d.iter().enumerate().map(|(k, &dk)| dk / factorial(k)).collect()
    }

    pub fn order(&self) -> usize {
        self.d.len() - 1
    }

    pub fn value(&self) -> f64 {
        self.d[0]
    }

    /// The `k`-th derivative value.
    pub fn deriv(&self, k: usize) -> f64 {
        self.d[k]
    }

    pub fn derivs(&self) -> &[f64] {
        &self.d
    }

    pub fn is_finite(&self) -> bool {
        self.d.iter().all(|v| v.is_finite())
    }

    /// Drops derivatives above `order`.
    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order(), "cannot raise jet order by truncation");
        Jet {
            d: self.d[..=order].to_vec(),
        }
    }

    /// Jet of `f'`; the order drops by one.
    pub fn derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::OrderExhausted { have: 0, need: 1 });
        }
        Ok(Jet {
            d: self.d[1..].to_vec(),
        })
    }

    fn check_order(&self, other: &Jet) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch {
                left: self.order(),
                right: other.order(),
            });
        }
        Ok(())
    }

    pub fn scale(&self, c: f64) -> Self {
        Jet {
            d: self.d.iter().map(|v| v * c).collect(),
        }
    }

    /// Leibniz product.
    pub fn try_mul(&self, other: &Jet) -> Result<Self> {
        self.check_order(other)?;
        let a = self.taylor();
        let b = other.taylor();
        let c: Vec<f64> = (0..a.len()).map(|k| (0..=k).map(|j| a[j] * b[k - j]).sum()).collect();
        Ok(Self::from_taylor(&c))
    }

    /// Quotient with the default pole guard.
    pub fn div(&self, other: &Jet) -> Result<Self> {
        self.div_guarded(other, DEFAULT_POLE_GUARD)
    }

    pub fn div_guarded(&self, other: &Jet, guard: f64) -> Result<Self> {
        self.check_order(other)?;
        let b0 = other.value();
        if !(b0.abs() >= guard) {
            return Err(Error::Pole { value: b0, guard });
        }
        let a = self.taylor();
        let b = other.taylor();
        let mut q = vec![0.0; a.len()];
        for k in 0..a.len() {
            let acc: f64 = (1..=k).map(|j| b[j] * q[k - j]).sum();
            q[k] = (a[k] - acc) / b0;
        }
        Ok(Self::from_taylor(&q))
    }

    pub fn recip(&self) -> Result<Self> {
        Self::constant(1.0, self.order()).div(self)
    }

    pub fn exp(&self) -> Self {
        let a = self.taylor();
        let mut e = vec![0.0; a.len()];
        e[0] = a[0].exp();
        for k in 1..a.len() {
            let s: f64 = (1..=k).map(|j| j as f64 * a[j] * e[k - j]).sum();
            e[k] = s / k as f64;
        }
        Self::from_taylor(&e)
    }

    pub fn ln(&self) -> Result<Self> {
        let a = self.taylor();
        if !(a[0] > 0.0) {
            return Err(Error::Domain { op: "ln", value: a[0] });
        }
        let mut l = vec![0.0; a.len()];
        l[0] = a[0].ln();
        for k in 1..a.len() {
            let s: f64 = (1..k).map(|j| j as f64 * l[j] * a[k - j]).sum();
            l[k] = (a[k] - s / k as f64) / a[0];
        }
        Ok(Self::from_taylor(&l))
    }

    pub fn sqrt(&self) -> Result<Self> {
        let a = self.taylor();
        if !(a[0] > 0.0) {
            return Err(Error::Domain {
                op: "sqrt",
                value: a[0],
            });
        }
        let mut s = vec![0.0; a.len()];
        s[0] = a[0].sqrt();
        for k in 1..a.len() {
            let acc: f64 = (1..k).map(|j| s[j] * s[k - j]).sum();
            s[k] = (a[k] - acc) / (2.0 * s[0]);
        }
        Ok(Self::from_taylor(&s))
    }

    pub fn powi(&self, n: u32) -> Self {
        let mut out = Self::constant(1.0, self.order());
        for _ in 0..n {
            out = &out * self;
        }
        out
    }

    /// Jet of `a'/a`, of order `K - 1`.
    pub fn log_derivative(&self) -> Result<Self> {
        if self.order() == 0 {
            return Err(Error::OrderExhausted { have: 0, need: 1 });
        }
        let k = self.order() - 1;
        self.derivative()?.div(&self.truncate(k))
    }

    /// Chain rule: `outer` holds the derivatives of `F` at `inner.value()`,
    /// the result is the jet of `F(inner(x))`.
    pub fn compose(outer: &Jet, inner: &Jet) -> Result<Self> {
        if outer.order() < inner.order() {
            return Err(Error::OrderExhausted {
                have: outer.order(),
                need: inner.order(),
            });
        }
        let order = inner.order();
        let f = outer.taylor();
        let mut h = inner.taylor();
        h[0] = 0.0;
        let h = Self::from_taylor(&h);
        let mut acc = Self::constant(f[0], order);
        let mut power = Self::constant(1.0, order);
        for fk in f.iter().take(order + 1).skip(1) {
            power = &power * &h;
            acc = &acc + &power.scale(*fk);
        }
        Ok(acc)
    }
}

impl fmt::Debug for Jet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet{:?}", self.d)
    }
}

fn assert_same_order(a: &Jet, b: &Jet) {
    assert_eq!(
        a.order(),
        b.order(),
        "jet order mismatch: {} vs {}",
        a.order(),
        b.order()
    );
}

impl Add for &Jet {
    type Output = Jet;
    fn add(self, rhs: &Jet) -> Jet {
        assert_same_order(self, rhs);
        Jet {
            d: self.d.iter().zip(&rhs.d).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Jet {
    type Output = Jet;
    fn sub(self, rhs: &Jet) -> Jet {
        assert_same_order(self, rhs);
        Jet {
            d: self.d.iter().zip(&rhs.d).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Mul for &Jet {
    type Output = Jet;
    fn mul(self, rhs: &Jet) -> Jet {
        assert_same_order(self, rhs);
        Jet::try_mul(self, rhs).expect("orders checked")
    }
}

impl Neg for &Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

impl Add<f64> for &Jet {
    type Output = Jet;
    fn add(self, rhs: f64) -> Jet {
        let mut out = self.clone();
        out.d[0] += rhs;
        out
    }
}

impl Sub<f64> for &Jet {
    type Output = Jet;
    fn sub(self, rhs: f64) -> Jet {
        self + (-rhs)
    }
}

impl Mul<f64> for &Jet {
    type Output = Jet;
    fn mul(self, rhs: f64) -> Jet {
        self.scale(rhs)
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet { $tr::$m(&self, &rhs) }
        }
        impl $tr<&Jet> for Jet {
            type Output = Jet;
            fn $m(self, rhs: &Jet) -> Jet { $tr::$m(&self, rhs) }
        }
        impl $tr<Jet> for &Jet {
            type Output = Jet;
            fn $m(self, rhs: Jet) -> Jet { $tr::$m(self, &rhs) }
        }
        impl $tr<f64> for Jet {
            type Output = Jet;
            fn $m(self, rhs: f64) -> Jet { $tr::$m(&self, rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

impl Neg for Jet {
    type Output = Jet;
    fn neg(self) -> Jet {
        self.scale(-1.0)
    }
}

type JetFnInner = dyn Fn(f64, usize) -> Result<Jet> + Send + Sync;

/// A function that can be expanded as a jet of any requested order at any
/// point. Every state, potential and Painleve solution in the crate is one of
/// these.
#[derive(Clone)]
pub struct JetFn(Arc<JetFnInner>);

impl JetFn {
    pub fn new<F>(f: F) -> Self
    where
        F: Fn(f64, usize) -> Result<Jet> + Send + Sync + 'static,
    {
        JetFn(Arc::new(f))
    }

    /// Jet of the function at `x`, exactly of order `order`.
    pub fn eval(&self, x: f64, order: usize) -> Result<Jet> {
        let j = (self.0)(x, order)?;
        match j.order().cmp(&order) {
            std::cmp::Ordering::Equal => Ok(j),
            std::cmp::Ordering::Greater => Ok(j.truncate(order)),
            std::cmp::Ordering::Less => Err(Error::OrderExhausted {
                have: j.order(),
                need: order,
            }),
        }
    }

    pub fn value(&self, x: f64) -> Result<f64> {
        Ok(self.eval(x, 0)?.value())
    }

    /// `f'`, evaluated by expanding `f` one order higher.
    pub fn derivative(&self) -> JetFn {
        let f = self.clone();
        JetFn::new(move |x, k| f.eval(x, k + 1)?.derivative())
    }

    /// `f'/f`.
    pub fn log_derivative(&self) -> JetFn {
        let f = self.clone();
        JetFn::new(move |x, k| f.eval(x, k + 1)?.log_derivative())
    }

    pub fn recip(&self) -> JetFn {
        let f = self.clone();
        JetFn::new(move |x, k| f.eval(x, k)?.recip())
    }

    pub fn scaled(&self, c: f64) -> JetFn {
        let f = self.clone();
        JetFn::new(move |x, k| Ok(f.eval(x, k)?.scale(c)))
    }

    pub fn product(&self, other: &JetFn) -> JetFn {
        let (f, g) = (self.clone(), other.clone());
        JetFn::new(move |x, k| Ok(&f.eval(x, k)? * &g.eval(x, k)?))
    }

    pub fn quotient(&self, other: &JetFn) -> JetFn {
        let (f, g) = (self.clone(), other.clone());
        JetFn::new(move |x, k| f.eval(x, k)?.div(&g.eval(x, k)?))
    }

    /// `self(inner(t))`.
    pub fn compose(&self, inner: &JetFn) -> JetFn {
        let (f, g) = (self.clone(), inner.clone());
        JetFn::new(move |t, k| {
            let y = g.eval(t, k)?;
            let outer = f.eval(y.value(), k)?;
            Jet::compose(&outer, &y)
        })
    }

    /// The identity function `x`.
    pub fn identity() -> JetFn {
        JetFn::new(|x, k| Ok(Jet::variable(x, k)))
    }
}

impl fmt::Debug for JetFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("JetFn(..)")
    }
}
