//! The log Gromov–Witten series assembled term by term through the
//! correspondence, compared against the Vafa–Witten series.

use mockgw::genseries::{SeriesCatalog, SeriesSpec};

fn main() {
    let catalog = SeriesCatalog::builtin();
    for (r, c1) in [(1, 0), (2, 0), (2, -1)] {
        let spec = SeriesSpec::new(r, c1, 6).unwrap();
        let gw = catalog.h_gw_with_records(&spec).unwrap();
        println!("h^GW_({r},{c1}) = {}", gw.series);
        for rec in gw.records.iter().take(4) {
            println!(
                "  γ = {:?}  v = {:?}  exc = {:?}  VW = {}  GW = {}",
                rec.gamma, rec.contact_order, rec.curve_class.exc, rec.vw, rec.gw
            );
        }
        let vw = catalog.h_vw(&spec).unwrap();
        println!("  equal to h^VW: {}", gw.series == vw);
    }
}
