//! Rank 1: h_{1,0} = 1/η³, and the Vafa–Witten invariants read off from it.

use mockgw::genseries::{SeriesCatalog, SeriesSpec};
use mockgw::numtheory::eta;
use mockgw::qseries::{int, rat};

fn main() {
    let catalog = SeriesCatalog::builtin();
    let spec = SeriesSpec::new(1, 0, 12).unwrap();
    let h = catalog.h_vw(&spec).unwrap();
    println!("h_(1,0) = {h}");

    let eta3 = eta(&(rat(1, 24) + int(12))).pow_int(3).unwrap();
    println!("h·η³ = {}", h.mul(&eta3));

    for rec in catalog.extract_invariants(&spec, 0..=6).unwrap() {
        println!("γ = {:?}: VW = {}, GW = {}", rec.gamma, rec.vw, rec.gw);
    }
}
