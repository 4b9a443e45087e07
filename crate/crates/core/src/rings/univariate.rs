//! Dense univariate polynomials over the rationals, constant term first.

use num::{One, Zero};

use crate::Rational;

pub fn trim(mut p: Vec<Rational>) -> Vec<Rational> {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

pub fn degree(p: &[Rational]) -> Option<usize> {
    p.iter().rposition(|c| !c.is_zero())
}

pub fn derivative(p: &[Rational]) -> Vec<Rational> {
    trim(
        p.iter()
            .enumerate()
            .skip(1)
            .map(|(i, c)| c * Rational::from_integer((i as i64).into()))
            .collect(),
    )
}

pub fn mul(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Rational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    trim(out)
}

pub fn pow(p: &[Rational], k: u32) -> Vec<Rational> {
    let mut out = vec![Rational::one()];
    for _ in 0..k {
        out = mul(&out, p);
    }
    out
}

pub fn rem(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r = trim(a.to_vec());
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] -= &c * bc;
        }
        r = trim(r);
    }
    r
}

/// Monic gcd.
pub fn gcd(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b);
        a = b;
        b = r;
    }
    if let Some(d) = degree(&a) {
        let lead = a[d].clone();
        a.iter_mut().for_each(|c| *c /= &lead);
    }
    a
}

/// Polynomials `(s, t)` with `s a + t b = gcd(a, b)` (monic gcd).
pub fn ext_gcd(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>, Vec<Rational>) {
    let (mut r0, mut r1) = (trim(a.to_vec()), trim(b.to_vec()));
    let (mut s0, mut s1) = (vec![Rational::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Rational::one()]);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1);
        let s2 = sub(&s0, &mul(&q, &s1));
        let t2 = sub(&t0, &mul(&q, &t1));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if let Some(d) = degree(&r0) {
        let lead = r0[d].clone();
        for p in [&mut r0, &mut s0, &mut t0] {
            p.iter_mut().for_each(|c| *c /= &lead);
        }
    }
    (r0, s0, t0)
}

pub fn sub(a: &[Rational], b: &[Rational]) -> Vec<Rational> {
    let n = a.len().max(b.len());
    trim(
        (0..n)
            .map(|i| a.get(i).cloned().unwrap_or_else(Rational::zero) - b.get(i).cloned().unwrap_or_else(Rational::zero))
            .collect(),
    )
}

pub fn div_rem(a: &[Rational], b: &[Rational]) -> (Vec<Rational>, Vec<Rational>) {
    let b = trim(b.to_vec());
    let db = degree(&b).expect("division by zero polynomial");
    let lead = b[db].clone();
    let mut r = trim(a.to_vec());
    let mut q = vec![Rational::zero(); r.len().saturating_sub(db).max(1)];
    while let Some(dr) = degree(&r) {
        if dr < db {
            break;
        }
        let c = &r[dr] / &lead;
        for (i, bc) in b.iter().enumerate() {
            r[dr - db + i] -= &c * bc;
        }
        q[dr - db] += c;
        r = trim(r);
    }
    (trim(q), r)
}

pub fn eval(p: &[Rational], x: &Rational) -> Rational {
    p.iter().rev().fold(Rational::zero(), |acc, c| acc * x + c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn qs(v: &[i64]) -> Vec<Rational> {
        v.iter().map(|&c| Rational::from_integer(c.into())).collect()
    }

    #[test]
    fn gcd_of_square_free_is_one() {
        let p = qs(&[0, 2, -3, 1]);
        assert_eq!(gcd(&p, &derivative(&p)), qs(&[1]));
        let sq = qs(&[0, 0, 1]);
        assert_eq!(gcd(&sq, &derivative(&sq)), qs(&[0, 1]));
    }

    #[test]
    fn bezout_identity() {
        let p = qs(&[0, 2, -3, 1]);
        let dp = derivative(&p);
        let (g, s, t) = ext_gcd(&p, &dp);
        assert_eq!(g, qs(&[1]));
        assert_eq!(sub(&mul(&s, &p), &mul(&t, &dp).iter().map(|c| -c.clone()).collect::<Vec<_>>()), qs(&[1]));
    }
}
