//! The depth-2 completion machinery on a synthetic rank-3 numerator.
//!
//! The series below is NOT a real f_{3,0}: it is a placeholder
//! (1 + q + q² + … up to q⁴⁰) so the iterated integral can be exercised. Real rank-3 data has to
//! be loaded from a file, see `mockgw expand --data`.

use mockgw::mockverify::real::c;
use mockgw::mockverify::{complete_depth2, Depth2Spec, InnerMode, IntegralOptions, PreparedDepth2, PreparedSeries};
use mockgw::qseries::{int, QSeries};

fn main() {
    let synthetic = QSeries::make((0..=40).map(|n| (int(n), int(1))), int(41)).unwrap();
    let f3 = PreparedSeries::<f64>::new(&synthetic);
    let spec = PreparedDepth2::new(Depth2Spec::rank3(40).unwrap());
    let opts = IntegralOptions::default();

    let tau = c(0.3, 1.1);
    let value = complete_depth2(&f3, &spec, tau, 1e-12, &opts).unwrap();
    println!("synthetic f̂_3(0.3+1.1i) = {value:.12}");

    for im in [2.0, 4.0, 8.0] {
        let corr = spec
            .correction(c(0.3, im), InnerMode::Completion, 1e-12, &opts)
            .unwrap();
        println!("Im τ = {im}: |depth-2 correction| = {:.3e}", corr.norm());
    }
    let constant = spec
        .correction(tau, InnerMode::Constant(1.0, 0.0), 1e-12, &opts)
        .unwrap();
    println!("with the inner completion replaced by 1: {constant:.12}");
}
