//! Dedekind eta as an exact q-series: pentagonal sum versus the naive product,
//! and a numerical evaluation at τ = i.

use mockgw::mockverify::{eval_series, TauPoint};
use mockgw::numtheory::{eta, eta_by_product};
use mockgw::qseries::{int, rat};

fn main() {
    let cutoff = rat(1, 24) + int(30);
    let pent = eta(&cutoff);
    let prod = eta_by_product(&cutoff);
    println!("η = {pent}");
    println!("pentagonal == product: {}", pent == prod);

    let at_i = eval_series::<f64>(&pent, TauPoint::new(0.0, 1.0), 1e-14).expect("tail is tiny at τ = i");
    let direct: f64 = (-2.0 * std::f64::consts::PI / 24.0).exp()
        * (1..200)
            .map(|n| 1.0 - (-2.0 * std::f64::consts::PI * n as f64).exp())
            .product::<f64>();
    println!(
        "η(i) ≈ {:.15} (tail bound {:e}), direct product {direct:.15}",
        at_i.value.re, at_i.tail_bound
    );
}
