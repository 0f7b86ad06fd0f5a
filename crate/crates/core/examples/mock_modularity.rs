//! Fits the S-matrix of the rank-2 vector with and without its completion.
//! Only the completed vector transforms with a constant matrix.

use mockgw::genseries::SeriesCatalog;
use mockgw::mockverify::pipeline::{run_verification, VerifyRequest};
use mockgw::mockverify::Element;

fn main() {
    let catalog = SeriesCatalog::builtin();
    for completed in [true, false] {
        let mut req = VerifyRequest::new(2, Element::S);
        req.completed = completed;
        let out = run_verification(&catalog, &req).unwrap();
        println!(
            "completed = {completed}: pass = {}, matrix spread {:.2e}",
            out.pass, out.stability.max_spread
        );
        for r in &out.stability.reports {
            println!("  holdout residual {:.2e}", r.holdout_residual);
        }
        let m = &out.stability.reports[0].fitted_matrix;
        println!("  M = {m:.6?}");
    }

    let t = run_verification(&catalog, &VerifyRequest::new(2, Element::T)).unwrap();
    println!("T phases from exponent classes: {:?}", t.exponent_classes);
}
