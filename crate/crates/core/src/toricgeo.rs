//! Toric model of the mirror rational elliptic surface and the map
//! `γ = (r, c1, c2) ↦ (dimension vector, contact order, curve class)`.
//!
//! The toric surface `Ȳ` has the complete smooth fan whose nine rays are the
//! boundary lattice points of the anticanonical polygon of P². The surface `Y`
//! is obtained by blowing up one point on each of the boundary divisors of the
//! rays (1,1), (-2,1) and (1,-2); those exceptional curves are `E1, E2, E3`.
//!
//! A curve class is stored as its intersection profile with the nine toric
//! divisors together with the exceptional multiplicities, not as coordinates
//! in a basis of H₂.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Sub};

use serde::{Deserialize, Serialize};

/// An integer vector in Z².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Vec2 {
    pub x: i64,
    pub y: i64,
}

impl Vec2 {
    pub const ZERO: Vec2 = Vec2 { x: 0, y: 0 };

    pub const fn new(x: i64, y: i64) -> Self {
        Vec2 { x, y }
    }

    pub fn det(self, other: Vec2) -> i64 {
        self.x * other.y - self.y * other.x
    }

    pub fn is_zero(self) -> bool {
        self.x == 0 && self.y == 0
    }

    /// gcd of the entries; 0 for the zero vector.
    pub fn content(self) -> i64 {
        gcd(self.x.abs(), self.y.abs())
    }

    pub fn is_primitive(self) -> bool {
        self.content() == 1
    }
}

impl Add for Vec2 {
    type Output = Vec2;
    fn add(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Vec2 {
    type Output = Vec2;
    fn sub(self, o: Vec2) -> Vec2 {
        Vec2::new(self.x - o.x, self.y - o.y)
    }
}

impl Mul<Vec2> for i64 {
    type Output = Vec2;
    fn mul(self, v: Vec2) -> Vec2 {
        Vec2::new(self * v.x, self * v.y)
    }
}

impl fmt::Display for Vec2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

fn gcd(mut a: i64, mut b: i64) -> i64 {
    while b != 0 {
        let t = a % b;
        a = b;
        b = t;
    }
    a
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum GeometryError {
    #[error("malformed fan: {0}")]
    MalformedFan(String),
    #[error("{0} is not a ray of the fan")]
    NotARay(Vec2),
    #[error("contact order mismatch: formula gives {formula}, balancing gives {balancing}")]
    ContactOrderMismatch { formula: Vec2, balancing: Vec2 },
    #[error("{v} has no non-negative integral decomposition in any cone")]
    NoDecomposition { v: Vec2 },
    #[error("curve class profile is not balanced: Σ (β·D_w) w = {0}")]
    Unbalanced(Vec2),
}

/// The blow-up rays carrying `E1`, `E2`, `E3`, in that order.
pub const BLOWUP_RAYS: [Vec2; 3] = [Vec2::new(1, 1), Vec2::new(-2, 1), Vec2::new(1, -2)];

/// Number of rays of the fan.
pub const RAY_COUNT: usize = 9;

/// The nine-ray fan of `Ȳ`, stored counterclockwise starting from (1,0).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Fan {
    rays: [Vec2; RAY_COUNT],
}

/// A two-dimensional cone `w1, w2` and the coefficients of `v = a·w1 + b·w2`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeDecomposition {
    pub w1: Vec2,
    pub w2: Vec2,
    pub a: i64,
    pub b: i64,
}

impl Default for Fan {
    fn default() -> Self {
        Fan::standard()
    }
}

impl Fan {
    /// The fan with rays (1,1),(1,0),(1,-1),(1,-2),(0,-1),(-1,0),(-2,1),(-1,1),(0,1).
    pub fn standard() -> Self {
        Fan {
            rays: [
                Vec2::new(1, 0),
                Vec2::new(1, 1),
                Vec2::new(0, 1),
                Vec2::new(-1, 1),
                Vec2::new(-2, 1),
                Vec2::new(-1, 0),
                Vec2::new(0, -1),
                Vec2::new(1, -2),
                Vec2::new(1, -1),
            ],
        }
    }

    /// Builds a fan from nine counterclockwise rays, checking primitivity and
    /// unimodularity of every adjacent pair.
    pub fn from_rays(rays: [Vec2; RAY_COUNT]) -> Result<Self, GeometryError> {
        let fan = Fan { rays };
        for (i, w) in rays.iter().enumerate() {
            if !w.is_primitive() {
                return Err(GeometryError::MalformedFan(format!("ray {w} is not primitive")));
            }
            let next = fan.ccw_neighbor(i);
            if w.det(next) != 1 {
                return Err(GeometryError::MalformedFan(format!(
                    "rays {w} and {next} do not span a unimodular counterclockwise cone"
                )));
            }
        }
        Ok(fan)
    }

    pub fn rays(&self) -> &[Vec2; RAY_COUNT] {
        &self.rays
    }

    pub fn index_of(&self, w: Vec2) -> Option<usize> {
        self.rays.iter().position(|r| *r == w)
    }

    fn ccw_neighbor(&self, i: usize) -> Vec2 {
        self.rays[(i + 1) % RAY_COUNT]
    }

    fn cw_neighbor(&self, i: usize) -> Vec2 {
        self.rays[(i + RAY_COUNT - 1) % RAY_COUNT]
    }

    /// Determinants `det(w_i, w_{i+1})` of consecutive rays.
    pub fn adjacent_determinants(&self) -> [i64; RAY_COUNT] {
        std::array::from_fn(|i| self.rays[i].det(self.ccw_neighbor(i)))
    }

    /// Self-intersection of the boundary divisor of `w`, from
    /// `w_prev + w_next = -s·w`.
    pub fn self_intersection(&self, w: Vec2) -> Result<i64, GeometryError> {
        let i = self.index_of(w).ok_or(GeometryError::NotARay(w))?;
        let sum = self.cw_neighbor(i) + self.ccw_neighbor(i);
        // w is primitive, so at most one coordinate test decides s.
        let s = if w.x != 0 {
            if sum.x % w.x != 0 {
                return Err(GeometryError::MalformedFan(format!(
                    "neighbours of {w} do not sum to a multiple of it"
                )));
            }
            -(sum.x / w.x)
        } else {
            if sum.y % w.y != 0 {
                return Err(GeometryError::MalformedFan(format!(
                    "neighbours of {w} do not sum to a multiple of it"
                )));
            }
            -(sum.y / w.y)
        };
        if sum != (-s) * w {
            return Err(GeometryError::MalformedFan(format!(
                "neighbours of {w} do not sum to a multiple of it"
            )));
        }
        Ok(s)
    }

    /// The cones of the fan as `(w1, w2)` with `w1` the counterclockwise-later edge.
    pub fn cones(&self) -> impl Iterator<Item = (Vec2, Vec2)> + '_ {
        (0..RAY_COUNT).map(move |i| (self.ccw_neighbor(i), self.rays[i]))
    }

    /// Writes `v = a·w1 + b·w2` with `a, b ≥ 0` in the cone containing `v`.
    ///
    /// The zero vector gets `a = b = 0` in the cone spanned by (1,1) and (1,0).
    /// A vector on a ray `w` is reported as `a·w` with `w1 = w` and `b = 0`.
    pub fn cone_decompose(&self, v: Vec2) -> Result<ConeDecomposition, GeometryError> {
        if v.is_zero() {
            let (w1, w2) = self.cones().next().expect("nonempty fan");
            return Ok(ConeDecomposition { w1, w2, a: 0, b: 0 });
        }
        let t = v.content();
        let dir = Vec2::new(v.x / t, v.y / t);
        if let Some(i) = self.index_of(dir) {
            return Ok(ConeDecomposition {
                w1: dir,
                w2: self.cw_neighbor(i),
                a: t,
                b: 0,
            });
        }
        for (w1, w2) in self.cones() {
            let d = w1.det(w2);
            let a_num = v.det(w2);
            let b_num = w1.det(v);
            // a = a_num/d, b = b_num/d must both be non-negative.
            if a_num * d < 0 || b_num * d < 0 {
                continue;
            }
            if a_num % d != 0 || b_num % d != 0 {
                return Err(GeometryError::NoDecomposition { v });
            }
            return Ok(ConeDecomposition {
                w1,
                w2,
                a: a_num / d,
                b: b_num / d,
            });
        }
        Err(GeometryError::NoDecomposition { v })
    }
}

/// Chern data `γ = (r, c1, c2)` of a sheaf on P² and the quantities derived from it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ChernData {
    pub r: i64,
    pub c1: i64,
    pub c2: i64,
}

impl ChernData {
    pub const fn new(r: i64, c1: i64, c2: i64) -> Self {
        ChernData { r, c1, c2 }
    }

    /// Holomorphic Euler characteristic `r + c1(c1+3)/2 - c2`.
    pub fn chi(&self) -> i64 {
        // c1(c1+3) is always even.
        self.r + self.c1 * (self.c1 + 3) / 2 - self.c2
    }

    /// Quiver dimension vector `(-χ, r + c1 - χ, r + 2c1 - χ)`.
    pub fn dimension_vector(&self) -> [i64; 3] {
        let chi = self.chi();
        [-chi, self.r + self.c1 - chi, self.r + 2 * self.c1 - chi]
    }

    /// `dim M^s = r² + c1² + 3r·c1 - 2χr + 1`.
    pub fn moduli_dim(&self) -> i64 {
        let (r, c1) = (self.r, self.c1);
        r * r + c1 * c1 + 3 * r * c1 - 2 * self.chi() * r + 1
    }

    /// `(-1)^{dim M^s}`.
    pub fn sign(&self) -> i64 {
        if self.moduli_dim().rem_euclid(2) == 0 {
            1
        } else {
            -1
        }
    }
}

impl fmt::Display for ChernData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{})", self.r, self.c1, self.c2)
    }
}

pub fn dimension_vector(gamma: &ChernData) -> [i64; 3] {
    gamma.dimension_vector()
}

/// `v_γ = (r, r + 3c1)`, checked against tropical balancing
/// `n1(1,1) + n2(-2,1) + n3(1,-2) + v_γ = 0`.
pub fn contact_order(gamma: &ChernData) -> Result<Vec2, GeometryError> {
    let formula = Vec2::new(gamma.r, gamma.r + 3 * gamma.c1);
    let n = gamma.dimension_vector();
    let sum = BLOWUP_RAYS.iter().zip(n).fold(Vec2::ZERO, |acc, (w, k)| acc + k * *w);
    let balancing = Vec2::ZERO - sum;
    if formula != balancing {
        return Err(GeometryError::ContactOrderMismatch { formula, balancing });
    }
    Ok(formula)
}

/// A class on `Y`: intersection numbers with the nine toric divisors of `Ȳ`
/// (in [`Fan::rays`] order) and the multiplicities of `E1, E2, E3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct CurveClass {
    pub profile: [i64; RAY_COUNT],
    pub exc: [i64; 3],
}

impl CurveClass {
    pub const ZERO: CurveClass = CurveClass {
        profile: [0; RAY_COUNT],
        exc: [0; 3],
    };

    /// `β̄·D_w` for a ray `w` of the standard fan.
    pub fn profile_at(&self, fan: &Fan, w: Vec2) -> Option<i64> {
        fan.index_of(w).map(|i| self.profile[i])
    }

    /// `Σ_w (β̄·D_w)·w`, zero exactly when the profile comes from a toric class.
    pub fn balance(&self, fan: &Fan) -> Vec2 {
        fan.rays()
            .iter()
            .zip(self.profile)
            .fold(Vec2::ZERO, |acc, (w, k)| acc + k * *w)
    }

    /// Degree against `-K_Y`: `Σ_w β̄·D_w - (n1 + n2 + n3)`.
    pub fn anticanonical_degree(&self) -> i64 {
        self.profile.iter().sum::<i64>() - self.exc.iter().sum::<i64>()
    }

    pub fn scaled(&self, k: i64) -> CurveClass {
        CurveClass {
            profile: self.profile.map(|p| k * p),
            exc: self.exc.map(|e| k * e),
        }
    }

    /// Profile keyed by ray, for display and export.
    pub fn profile_map(&self, fan: &Fan) -> BTreeMap<Vec2, i64> {
        fan.rays().iter().copied().zip(self.profile).collect()
    }
}

impl Add for CurveClass {
    type Output = CurveClass;
    fn add(self, o: CurveClass) -> CurveClass {
        CurveClass {
            profile: std::array::from_fn(|i| self.profile[i] + o.profile[i]),
            exc: std::array::from_fn(|i| self.exc[i] + o.exc[i]),
        }
    }
}

/// The toric class `β̄_γ`, as the profile
/// `n1 δ_{(1,1)} + n2 δ_{(-2,1)} + n3 δ_{(1,-2)} + a δ_{w1} + b δ_{w2}`.
pub fn toric_curve_class(fan: &Fan, gamma: &ChernData) -> Result<[i64; RAY_COUNT], GeometryError> {
    let n = gamma.dimension_vector();
    let v = contact_order(gamma)?;
    let cone = fan.cone_decompose(v)?;
    let mut profile = [0i64; RAY_COUNT];
    for (w, k) in BLOWUP_RAYS.iter().zip(n) {
        let i = fan.index_of(*w).ok_or(GeometryError::NotARay(*w))?;
        profile[i] += k;
    }
    for (w, k) in [(cone.w1, cone.a), (cone.w2, cone.b)] {
        let i = fan.index_of(w).ok_or(GeometryError::NotARay(w))?;
        profile[i] += k;
    }
    let class = CurveClass { profile, exc: [0; 3] };
    let balance = class.balance(fan);
    if !balance.is_zero() {
        return Err(GeometryError::Unbalanced(balance));
    }
    Ok(profile)
}

/// `β_γ = π*β̄_γ - n1 E1 - n2 E2 - n3 E3`.
pub fn curve_class(fan: &Fan, gamma: &ChernData) -> Result<CurveClass, GeometryError> {
    Ok(CurveClass {
        profile: toric_curve_class(fan, gamma)?,
        exc: gamma.dimension_vector(),
    })
}

/// The elliptic fiber class `F = β_{(0,0,1)}`.
pub fn fiber_class(fan: &Fan) -> CurveClass {
    curve_class(fan, &ChernData::new(0, 0, 1)).expect("fiber class is well defined")
}

/// Everything the correspondence attaches to `γ`, in export form.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorrespondenceRecord {
    pub gamma: [i64; 3],
    pub chi: i64,
    pub nvec: [i64; 3],
    pub v: [i64; 2],
    pub cone: ConeRecord,
    pub profile: BTreeMap<String, i64>,
    pub exc: [i64; 3],
    pub dim_s: i64,
    pub sign: i64,
    pub anticanonical_degree: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeRecord {
    pub w1: [i64; 2],
    pub w2: [i64; 2],
    pub a: i64,
    pub b: i64,
}

impl CorrespondenceRecord {
    pub fn build(fan: &Fan, gamma: &ChernData) -> Result<Self, GeometryError> {
        let v = contact_order(gamma)?;
        let cone = fan.cone_decompose(v)?;
        let class = curve_class(fan, gamma)?;
        Ok(CorrespondenceRecord {
            gamma: [gamma.r, gamma.c1, gamma.c2],
            chi: gamma.chi(),
            nvec: gamma.dimension_vector(),
            v: [v.x, v.y],
            cone: ConeRecord {
                w1: [cone.w1.x, cone.w1.y],
                w2: [cone.w2.x, cone.w2.y],
                a: cone.a,
                b: cone.b,
            },
            profile: class
                .profile_map(fan)
                .into_iter()
                .map(|(w, k)| (w.to_string(), k))
                .collect(),
            exc: class.exc,
            dim_s: gamma.moduli_dim(),
            sign: gamma.sign(),
            anticanonical_degree: class.anticanonical_degree(),
        })
    }
}
