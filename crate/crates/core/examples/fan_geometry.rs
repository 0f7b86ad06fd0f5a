//! The 9-ray fan: rays, adjacent determinants, self-intersections and cone decomposition.

use mockgw::toricgeo::{Fan, Vec2, BLOWUP_RAYS};

fn main() {
    let fan = Fan::standard();
    let mut total = 0;
    for (w, det) in fan.rays().iter().zip(fan.adjacent_determinants()) {
        let s = fan.self_intersection(*w).unwrap();
        total += s;
        let mark = if BLOWUP_RAYS.contains(w) { " (blow-up ray)" } else { "" };
        println!("ray {w}: D² = {s}, det with next = {det}{mark}");
    }
    println!("Σ D² = {total}");

    for v in [Vec2::new(2, -1), Vec2::new(3, -3), Vec2::new(-4, 7)] {
        let d = fan.cone_decompose(v).unwrap();
        println!("{v} = {}·{} + {}·{}", d.a, d.w1, d.b, d.w2);
    }
}
