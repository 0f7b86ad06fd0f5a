//! Rank 2: the class-number numerators f_{2,c1} and h_{2,c1} = f_{2,c1}/η⁶.

use mockgw::genseries::{f2, SeriesCatalog, SeriesSpec};

fn main() {
    let catalog = SeriesCatalog::builtin();
    for c1 in 0..2 {
        println!("f_(2,{c1}) = {}", f2(c1, 8).unwrap());
        let h = catalog.h_vw(&SeriesSpec::new(2, c1, 8).unwrap()).unwrap();
        println!("h_(2,{c1}) = {h}");
        println!(
            "exponent class of h_(2,{c1}): {:?}",
            h.exponent_class().map(|c| c.to_string())
        );
    }
}
