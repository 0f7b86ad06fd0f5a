//! Hurwitz class numbers H(N), with the Kronecker–Hurwitz relation checked for small n.

use mockgw::numtheory::{hurwitz, HurwitzTable};
use mockgw::qseries::{int, Rational};

fn main() {
    let table = HurwitzTable::new(40);
    for (n, h) in table.iter().filter(|(_, h)| *h != int(0)) {
        println!("H({n:>2}) = {h}");
    }

    for n in 1..=10i64 {
        let mut lhs = Rational::from_integer(0.into());
        let mut r = -((4 * n) as f64).sqrt().floor() as i64;
        while r * r <= 4 * n {
            lhs += hurwitz(4 * n - r * r);
            r += 1;
        }
        let divisors: Vec<i64> = (1..=n).filter(|d| n % d == 0).collect();
        let sigma: i64 = divisors.iter().sum();
        let mins: i64 = divisors.iter().map(|d| (*d).min(n / d)).sum();
        println!(
            "n = {n:>2}: Σ H(4n - r²) = {lhs}, 2σ(n) - Σ min(d, n/d) = {}",
            2 * sigma - mins
        );
    }
}
