//! Reference implementations used as test oracles. They share no code with the
//! library beyond the rational type.

#![allow(dead_code)]

use std::collections::BTreeMap;

use num_integer::Integer;
use num_rational::Ratio;

pub type Q = Ratio<i64>;

/// Coefficients of `∏_{n≥1}(1 - q^n)` up to `q^len-1`, by multiplying factors out.
pub fn euler_product(len: usize) -> Vec<i64> {
    let mut c = vec![0i64; len];
    c[0] = 1;
    for n in 1..len {
        for k in (n..len).rev() {
            c[k] -= c[k - n];
        }
    }
    c
}

/// The same coefficients from the pentagonal number theorem.
pub fn pentagonal(len: usize) -> Vec<i64> {
    let mut c = vec![0i64; len];
    for k in -(len as i64)..=(len as i64) {
        let e = k * (3 * k - 1) / 2;
        if (0..len as i64).contains(&e) {
            c[e as usize] += if k % 2 == 0 { 1 } else { -1 };
        }
    }
    c
}

/// `∏(1 - q^n)^{-3}` by brute-force convolution with geometric series.
pub fn inverse_cube(len: usize) -> Vec<i64> {
    let mut c = vec![0i64; len];
    c[0] = 1;
    for _ in 0..3 {
        for n in 1..len {
            for k in n..len {
                c[k] += c[k - n];
            }
        }
    }
    c
}

fn gauss_reduce(mut a: i64, mut b: i64, mut c: i64) -> (i64, i64, i64) {
    loop {
        if b > a || b <= -a {
            // translate b into (-a, a]
            let t = Integer::div_floor(&(a - b), &(2 * a));
            let nb = b + 2 * a * t;
            c += t * (b + a * t);
            b = nb;
        } else if a > c {
            (a, b, c) = (c, -b, a);
        } else {
            if a == c && b < 0 {
                b = -b;
            }
            return (a, b, c);
        }
    }
}

fn weight(a: i64, b: i64, c: i64) -> Q {
    if a == b && b == c {
        Q::new(1, 3)
    } else if b == 0 && a == c {
        Q::new(1, 2)
    } else {
        Q::from_integer(1)
    }
}

/// H(N) by reducing every form in a generous box and counting the distinct
/// reduced representatives with stabilizer weights.
pub fn hurwitz_by_reduction(n: i64) -> Q {
    if n == 0 {
        return Q::new(-1, 12);
    }
    let box_a = 2 * ((n as f64).sqrt() as i64) + 2;
    let mut classes = std::collections::BTreeSet::new();
    for a in 1..=box_a {
        for b in -box_a..=box_a {
            let num = b * b + n;
            if num % (4 * a) == 0 {
                classes.insert(gauss_reduce(a, b, num / (4 * a)));
            }
        }
    }
    classes.iter().map(|&(a, b, c)| weight(a, b, c)).sum()
}

/// Weighted count of primitive reduced forms of discriminant `d < 0`.
fn primitive_class_number(d: i64) -> Q {
    let n = -d;
    let mut h = Q::from_integer(0);
    let mut a = 1;
    while 3 * a * a <= n {
        for b in -a + 1..=a {
            if (b * b + n) % (4 * a) != 0 {
                continue;
            }
            let c = (b * b + n) / (4 * a);
            if c < a || (c == a && b < 0) {
                continue;
            }
            if a.gcd(&b).gcd(&c) == 1 {
                h += Q::from_integer(1);
            }
        }
        a += 1;
    }
    match d {
        -3 => h / 3,
        -4 => h / 2,
        _ => h,
    }
}

/// H(N) as a sum of primitive class numbers over square conductors.
pub fn hurwitz_by_conductors(n: i64) -> Q {
    if n == 0 {
        return Q::new(-1, 12);
    }
    let mut total = Q::from_integer(0);
    let mut f = 1;
    while f * f <= n {
        if n % (f * f) == 0 && matches!((n / (f * f)) % 4, 0 | 3) {
            total += primitive_class_number(-n / (f * f));
        }
        f += 1;
    }
    total
}

pub fn sigma1(n: i64) -> i64 {
    (1..=n).filter(|d| n % d == 0).sum()
}

pub fn min_divisor_sum(n: i64) -> i64 {
    (1..=n).filter(|d| n % d == 0).map(|d| d.min(n / d)).sum()
}

/// `Ω̄_γ = Σ_{k|γ} Ω_{γ/k}/k²` on Chern triples `(r, c1, c2)` with `r ≥ 1`,
/// where `γ/k` divides `r`, `c1` and `ch2 = c1²/2 - c2` and must again have
/// integral `c2`. Independent of the library's `ChTriple`.
pub fn cover_sum(omega: &BTreeMap<(i64, i64, i64), Q>) -> BTreeMap<(i64, i64, i64), Q> {
    omega
        .keys()
        .map(|&(r, c1, c2)| {
            let ch2 = Q::new(c1 * c1, 2) - c2;
            let mut acc = Q::from_integer(0);
            for k in 1..=r {
                if r % k != 0 || c1 % k != 0 {
                    continue;
                }
                let c1k = c1 / k;
                let c2k = Q::new(c1k * c1k, 2) - ch2 / k;
                if !c2k.is_integer() {
                    continue;
                }
                let v = omega
                    .get(&(r / k, c1k, c2k.to_integer()))
                    .expect("lattice closed under divisors");
                acc += *v / (k * k);
            }
            ((r, c1, c2), acc)
        })
        .collect()
}

/// Adds every divisor class of `γ` to `out`.
pub fn divisor_closure(r: i64, c1: i64, c2: i64, out: &mut std::collections::BTreeSet<(i64, i64, i64)>) {
    let ch2 = Q::new(c1 * c1, 2) - c2;
    for k in 1..=r {
        if r % k == 0 && c1 % k == 0 {
            let c1k = c1 / k;
            let c2k = Q::new(c1k * c1k, 2) - ch2 / k;
            if c2k.is_integer() {
                out.insert((r / k, c1k, c2k.to_integer()));
            }
        }
    }
}
