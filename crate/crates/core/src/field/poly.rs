//! Dense univariate polynomials over a [`Field`], coefficients low to high.
//! Only what irreducibility testing and table construction need.

use super::Field;

pub(crate) fn trim<F: Field>(f: &F, a: &mut Vec<F::Elem>) {
    while a.last().is_some_and(|&c| f.is_zero(c)) {
        a.pop();
    }
}

pub(crate) fn degree<F: Field>(f: &F, a: &[F::Elem]) -> Option<usize> {
    a.iter().rposition(|&c| !f.is_zero(c))
}

/// `a mod b` for `b != 0`.
pub(crate) fn rem<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let db = degree(f, b).expect("polynomial remainder by zero");
    let lead_inv = f.inv(b[db]).expect("nonzero leading coefficient");
    let mut r = a.to_vec();
    trim(f, &mut r);
    while let Some(dr) = degree(f, &r) {
        if dr < db {
            break;
        }
        let c = f.mul(r[dr], lead_inv);
        let shift = dr - db;
        for (i, &bi) in b[..=db].iter().enumerate() {
            r[shift + i] = f.sub(r[shift + i], f.mul(c, bi));
        }
        trim(f, &mut r);
    }
    r
}

pub(crate) fn mul<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![f.zero(); a.len() + b.len() - 1];
    for (i, &ai) in a.iter().enumerate() {
        if f.is_zero(ai) {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            out[i + j] = f.add(out[i + j], f.mul(ai, bj));
        }
    }
    trim(f, &mut out);
    out
}

pub(crate) fn mulmod<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem], m: &[F::Elem]) -> Vec<F::Elem> {
    rem(f, &mul(f, a, b), m)
}

pub(crate) fn powmod<F: Field>(f: &F, a: &[F::Elem], mut e: u64, m: &[F::Elem]) -> Vec<F::Elem> {
    let mut base = rem(f, a, m);
    let mut acc = rem(f, &[f.one()], m);
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(f, &acc, &base, m);
        }
        base = mulmod(f, &base, &base, m);
        e >>= 1;
    }
    acc
}

pub(crate) fn gcd<F: Field>(f: &F, a: &[F::Elem], b: &[F::Elem]) -> Vec<F::Elem> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(f, &mut x);
    trim(f, &mut y);
    while !y.is_empty() {
        let r = rem(f, &x, &y);
        x = y;
        y = r;
    }
    x
}

/// Ben-Or irreducibility test: `g` of degree `d` is irreducible iff
/// `gcd(x^{Q^i} - x, g) = 1` for all `1 <= i <= d/2`, where `Q` is the
/// field order.
pub(crate) fn is_irreducible<F: Field>(f: &F, g: &[F::Elem]) -> bool {
    let Some(d) = degree(f, g) else {
        return false;
    };
    if d == 0 {
        return false;
    }
    let x = vec![f.zero(), f.one()];
    let mut h = rem(f, &x, g);
    for _ in 1..=d / 2 {
        h = powmod(f, &h, f.order(), g);
        let mut diff = h.clone();
        diff.resize(diff.len().max(2), f.zero());
        diff[1] = f.sub(diff[1], f.one());
        trim(f, &mut diff);
        let common = gcd(f, &diff, g);
        if degree(f, &common).unwrap_or(0) > 0 || common.is_empty() {
            return false;
        }
    }
    true
}

/// Lowest monic irreducible polynomial of degree `d` over `f`, in the order
/// of the integer encoding of its non-leading coefficients.
pub(crate) fn lowest_irreducible<F: Field>(f: &F, d: usize) -> Vec<F::Elem> {
    let q = f.order();
    let mut t: u64 = 0;
    loop {
        let mut g = Vec::with_capacity(d + 1);
        let mut rest = t;
        for _ in 0..d {
            g.push(f.element(rest % q));
            rest /= q;
        }
        g.push(f.one());
        if is_irreducible(f, &g) {
            return g;
        }
        t += 1;
    }
}
