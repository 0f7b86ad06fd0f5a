mod common;

use std::collections::{BTreeMap, BTreeSet};

use proptest::prelude::*;

use common::Q;
use mockgw::genseries::{bps_invert, exponent_offset, multiple_cover, BpsLattice, ChTriple, SeriesCatalog, SeriesSpec};
use mockgw::numtheory::{hurwitz, HurwitzTable};
use mockgw::qseries::{frac, int, rat, QSeries, Rational};
use mockgw::toricgeo::{ChernData, Fan, Vec2};

fn series() -> impl Strategy<Value = QSeries> {
    let term = (
        -16i64..32,
        prop::sample::select(vec![1i64, 2, 4, 8]),
        -9i64..=9,
        1i64..=5,
    );
    (prop::collection::vec(term, 0..8), 4i64..24).prop_map(|(terms, cut)| {
        let cutoff = rat(cut, 2);
        let mut map = BTreeMap::new();
        for (en, ed, cn, cd) in terms {
            map.insert(rat(en, ed), rat(cn, cd));
        }
        QSeries::make(map, cutoff).unwrap()
    })
}

fn nonzero_series() -> impl Strategy<Value = QSeries> {
    series().prop_filter("needs a leading term", |s| !s.is_zero())
}

/// Equality where both sides are known.
fn agree(a: &QSeries, b: &QSeries) -> bool {
    let m = a.cutoff().min(b.cutoff()).clone();
    a.truncate(&m) == b.truncate(&m)
}

proptest! {
    #[test]
    fn addition_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.add(&b), b.add(&a));
        prop_assert_eq!(a.add(&b).add(&c), a.add(&b.add(&c)));
        prop_assert!(a.sub(&a).is_zero());
        prop_assert_eq!(a.neg().neg(), a.clone());
    }

    #[test]
    fn multiplication_is_commutative_and_associative(a in series(), b in series(), c in series()) {
        prop_assert_eq!(a.mul(&b), b.mul(&a));
        prop_assert!(agree(&a.mul(&b).mul(&c), &a.mul(&b.mul(&c))));
    }

    #[test]
    fn multiplication_distributes(a in series(), b in series(), c in series()) {
        prop_assert!(agree(&a.mul(&b.add(&c)), &a.mul(&b).add(&a.mul(&c))));
    }

    #[test]
    fn one_is_neutral(a in series()) {
        let one = QSeries::one(int(1000));
        prop_assert_eq!(a.mul(&one), a.clone());
    }

    #[test]
    fn inverse_is_inverse(s in nonzero_series()) {
        let inv = s.inv().unwrap();
        let p = s.mul(&inv);
        prop_assert_eq!(p.clone(), QSeries::one(p.cutoff().clone()));
        prop_assert_eq!(inv.valuation().cloned(), s.valuation().map(|v| -v));
    }

    #[test]
    fn integer_powers(s in nonzero_series(), k in 0i64..4) {
        let pos = s.pow_int(k).unwrap();
        let mut naive = QSeries::one(int(1000));
        for _ in 0..k {
            naive = naive.mul(&s);
        }
        prop_assert!(agree(&pos, &naive));
        let neg = s.pow_int(-k).unwrap();
        prop_assert!(agree(&neg, &pos.inv().unwrap()));
    }

    #[test]
    fn json_round_trip(s in series()) {
        prop_assert_eq!(QSeries::from_json(&s.to_json()).unwrap(), s);
    }

    #[test]
    fn hurwitz_table_matches_direct(n in 0i64..3000) {
        let table = HurwitzTable::new(n as usize);
        prop_assert_eq!(table.get(n), Some(hurwitz(n)));
        let twelve = hurwitz(n) * int(12);
        prop_assert!(twelve.is_integer());
    }

    #[test]
    fn hurwitz_matches_oracles(n in 0i64..1500) {
        let a = common::hurwitz_by_conductors(n);
        prop_assert_eq!(hurwitz(n), rat(*a.numer(), *a.denom()));
    }

    #[test]
    fn cone_decomposition(x in -60i64..60, y in -60i64..60) {
        let fan = Fan::standard();
        let v = Vec2::new(x, y);
        let d = fan.cone_decompose(v).unwrap();
        prop_assert!(d.a >= 0 && d.b >= 0);
        prop_assert_eq!(Vec2::new(d.a * d.w1.x + d.b * d.w2.x, d.a * d.w1.y + d.b * d.w2.y), v);
        prop_assert!(fan.cones().any(|(p, q)| (p, q) == (d.w1, d.w2)));
        prop_assert_eq!(d.w1.det(d.w2).abs(), 1);
    }

    #[test]
    fn chern_triple_scaling(r in 1i64..5, c1 in -5i64..5, c2 in -5i64..12, k in 1i64..5) {
        let t = ChTriple::from_chern(&ChernData::new(r, c1, c2));
        prop_assert_eq!(t.scaled(k).divide(k), Some(t.clone()));
        prop_assert_eq!(t.to_chern(), Some(ChernData::new(r, c1, c2)));
        prop_assert!(t.scaled(k).divisors().contains(&k) || t.scaled(k).to_chern().is_none());
    }

    #[test]
    fn bps_round_trip(entries in prop::collection::vec((1i64..=6, -6i64..=6, -4i64..=12, -40i64..=40, 1i64..=4), 1..10)) {
        let mut keys = BTreeSet::new();
        for (r, c1, c2, _, _) in &entries {
            common::divisor_closure(*r, *c1, *c2, &mut keys);
        }
        let omega: BTreeMap<(i64, i64, i64), Q> = keys
            .iter()
            .enumerate()
            .map(|(i, k)| {
                let (_, _, _, n, d) = entries[i % entries.len()];
                (*k, Q::new(n + i as i64, d))
            })
            .collect();
        let lib: BTreeMap<ChTriple, Rational> = omega
            .iter()
            .map(|(&(r, c1, c2), v)| (ChTriple::from_chern(&ChernData::new(r, c1, c2)), rat(*v.numer(), *v.denom())))
            .collect();
        let bar = multiple_cover(&lib).unwrap();
        let oracle: BTreeMap<ChTriple, Rational> = common::cover_sum(&omega)
            .iter()
            .map(|(&(r, c1, c2), v)| (ChTriple::from_chern(&ChernData::new(r, c1, c2)), rat(*v.numer(), *v.denom())))
            .collect();
        prop_assert_eq!(&bar, &oracle);
        prop_assert_eq!(bps_invert(&BpsLattice { data: bar }).unwrap(), lib);
    }

    #[test]
    fn vw_exponents_lie_in_one_class(r in 1i64..=2, c1 in -3i64..3, order in 1usize..25) {
        let spec = SeriesSpec::new(r, c1, order).unwrap();
        let h = SeriesCatalog::builtin().h_vw(&spec).unwrap();
        let class = frac(&exponent_offset(r, spec.assembly_c1()));
        prop_assert!(h.terms().all(|(e, _)| frac(e) == class));
    }
}

#[test]
fn bps_inversion_reports_missing_divisors() {
    let mut lattice = BpsLattice::new();
    lattice.insert(ChTriple::from_chern(&ChernData::new(2, 0, 2)), rat(-21, 4));
    assert!(bps_invert(&lattice).is_err());
}
