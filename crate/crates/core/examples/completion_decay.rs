//! The completion f̂_{2,0} = f_{2,0} + correction, and the decay of the
//! correction as Im τ grows.

use mockgw::genseries::f2;
use mockgw::mockverify::real::c;
use mockgw::mockverify::{complete_depth1, CompletionSpec, IntegralOptions, PreparedSeries};

fn main() {
    let f = PreparedSeries::<f64>::new(&f2(0, 60).unwrap());
    let spec = CompletionSpec::rank2(0);
    let opts = IntegralOptions::default();
    for im in [1.0, 2.0, 4.0, 8.0] {
        let tau = c(0.2, im);
        let holo = f.eval(tau, 1e-14).unwrap().value;
        let full = complete_depth1(&f, &spec, tau, 1e-14, &opts).unwrap();
        println!("Im τ = {im}: f = {holo:.10}, f̂ - f = {:.3e}", (full - holo).norm());
    }
}
