//! Rational invariants Ω̄ and their BPS counterparts Ω via Möbius inversion.

use mockgw::genseries::{
    bps_invert, chern_range, multiple_cover, BpsLattice, ChTriple, IntegralityReport, SeriesCatalog,
};

fn main() {
    let catalog = SeriesCatalog::builtin();
    let classes: Vec<_> = chern_range(2, 0, 0..=8).collect();
    let lattice = BpsLattice::from_catalog(&catalog, classes.iter().copied()).unwrap();
    let omega = bps_invert(&lattice).unwrap();
    for gamma in &classes {
        let t = ChTriple::from_chern(gamma);
        println!(
            "γ = ({}, {}, {}), ch = {t}: Ω̄ = {}, Ω = {}",
            gamma.r, gamma.c1, gamma.c2, lattice.data[&t], omega[&t]
        );
    }
    println!("round trip exact: {}", multiple_cover(&omega).unwrap() == lattice.data);
    println!("{}", IntegralityReport::from_omega(&omega).diagnostic());
}
