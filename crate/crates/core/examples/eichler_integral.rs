//! The weight-3/2 Eichler integral of a unary theta series, by quadrature and
//! by incomplete gamma functions, in f64 and double-double.

use mockgw::mockverify::eichler::mirror_point;
use mockgw::mockverify::real::c;
use mockgw::mockverify::{eichler_closed_form, eichler_quadrature, IntegralOptions, DD};
use mockgw::numtheory::ThetaSpec;
use mockgw::qseries::{int, rat};

fn main() {
    let k = rat(3, 2);
    let opts = IntegralOptions::default();
    for mu in [int(0), rat(1, 2)] {
        let shadow = ThetaSpec::new(mu.clone(), int(2)).unwrap();
        for (x, y) in [(0.0, 0.7), (0.3, 1.0), (-0.45, 1.3)] {
            let tau = c::<f64>(x, y);
            let w = mirror_point(tau);
            let closed = eichler_closed_form(&shadow, &k, tau, w).unwrap();
            let quad = eichler_quadrature(&shadow, &k, tau, w, &opts).unwrap();
            println!(
                "μ = {mu}, τ = {tau}: closed {closed:.12}, |quad - closed| = {:.1e}",
                (quad - closed).norm()
            );
        }
        let tau = c::<DD>(0.3, 1.0);
        let hi = eichler_closed_form(&shadow, &k, tau, mirror_point(tau)).unwrap();
        println!("μ = {mu}, τ = 0.3+1i in double-double: {} + {}i", hi.re, hi.im);
    }
}
