//! Correspondence records: contact order, cone decomposition and curve class of γ.

use mockgw::toricgeo::{curve_class, fiber_class, ChernData, CorrespondenceRecord, Fan};

fn main() {
    let fan = Fan::standard();
    for gamma in [
        ChernData::new(1, 0, 0),
        ChernData::new(2, -1, 1),
        ChernData::new(3, -2, 4),
        ChernData::new(0, 0, 1),
    ] {
        let rec = CorrespondenceRecord::build(&fan, &gamma).unwrap();
        println!("{}", serde_json::to_string(&rec).unwrap());
    }

    let f = fiber_class(&fan);
    println!("F: exc = {:?}, -K·F = {}", f.exc, f.anticanonical_degree());
    let base = curve_class(&fan, &ChernData::new(2, -1, 0)).unwrap();
    let shifted = curve_class(&fan, &ChernData::new(2, -1, 3)).unwrap();
    println!("β(2,-1,3) == β(2,-1,0) + 3F: {}", shifted == base + f.scaled(3));
}
