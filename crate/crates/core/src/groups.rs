//! Catalog of the screw-motion space groups and their point groups.
//!
//! Every catalogued group is a `× 1_R` class: the linear parts are rotations
//! of S² and the fibre is only translated. The fibre shift of an element is
//! `(s + m)·τ` where `s ∈ [0, 1)` is the exact fractional part carried by
//! its generator word and `m` an integer lattice offset.
//!
//! Axis conventions:
//!
//! * `1q`: `g₁` is the `q`-fold rotation about `z`.
//! * `3q`: `[2,2,q]`, two half-turns `g₁` (about `x`) and `g₂` (about the
//!   axis at longitude `π/q` in the equator plane); `g₁g₂` is the `q`-fold
//!   rotation about `z`.
//! * `8`, `9`, `10`: `[2,3,n]`, `g₁` the half-turn about `x`, `g₂` a 3-fold
//!   rotation whose axis lies in the `[x, y]` plane, `g₁g₂` the `n`-fold
//!   rotation whose axis lies in the `[x, z]` half-plane with `z > 0`.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use nalgebra::{Matrix3, Vector3};
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::isometry::{rotation_matrix, FibreFlag, Isometry};

/// Exact fractional translation part, in units of the lattice parameter τ.
pub type Frac = Ratio<i64>;

/// Frobenius-norm threshold for identifying two rotation matrices.
pub const DEDUPE_TOLERANCE: f64 = 1e-8;
/// Tolerance for a relator word to evaluate to the identity.
pub const RELATOR_TOLERANCE: f64 = 1e-9;
/// Default half-width of the enumeration window, in lattice units.
pub const DEFAULT_K_MAX: u32 = 2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum GroupName {
    #[serde(rename = "1q.I.1")]
    OneQI1,
    #[serde(rename = "1q.I.2")]
    OneQI2,
    #[serde(rename = "3q.I.1")]
    ThreeQI1,
    #[serde(rename = "3q.I.2")]
    ThreeQI2,
    #[serde(rename = "3qe.I.3")]
    ThreeQeI3,
    #[serde(rename = "8.I.1")]
    EightI1,
    #[serde(rename = "8.I.2")]
    EightI2,
    #[serde(rename = "9.I.1")]
    NineI1,
    #[serde(rename = "9.I.2")]
    NineI2,
    #[serde(rename = "10.I.1")]
    TenI1,
}

impl GroupName {
    pub const ALL: [GroupName; 10] = [
        GroupName::OneQI1,
        GroupName::OneQI2,
        GroupName::ThreeQI1,
        GroupName::ThreeQI2,
        GroupName::ThreeQeI3,
        GroupName::EightI1,
        GroupName::EightI2,
        GroupName::NineI1,
        GroupName::NineI2,
        GroupName::TenI1,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GroupName::OneQI1 => "1q.I.1",
            GroupName::OneQI2 => "1q.I.2",
            GroupName::ThreeQI1 => "3q.I.1",
            GroupName::ThreeQI2 => "3q.I.2",
            GroupName::ThreeQeI3 => "3qe.I.3",
            GroupName::EightI1 => "8.I.1",
            GroupName::EightI2 => "8.I.2",
            GroupName::NineI1 => "9.I.1",
            GroupName::NineI2 => "9.I.2",
            GroupName::TenI1 => "10.I.1",
        }
    }

    pub fn family(self) -> Family {
        match self {
            GroupName::OneQI1 | GroupName::OneQI2 => Family::Cyclic,
            GroupName::ThreeQI1 | GroupName::ThreeQI2 | GroupName::ThreeQeI3 => Family::Dihedral,
            GroupName::EightI1 | GroupName::EightI2 => Family::Tetrahedral,
            GroupName::NineI1 | GroupName::NineI2 => Family::Octahedral,
            GroupName::TenI1 => Family::Icosahedral,
        }
    }

    /// `q` used when the caller does not choose one.
    pub fn default_q(self) -> Option<u32> {
        match self.family() {
            Family::Cyclic | Family::Dihedral if self == GroupName::ThreeQeI3 => Some(4),
            Family::Cyclic | Family::Dihedral => Some(3),
            _ => None,
        }
    }

    /// Generator translation parts for this group at parameter `q`, `k`.
    fn fractions(self, q: Option<u32>, k: Option<u32>) -> Vec<Frac> {
        let half = Frac::new(1, 2);
        let zero = Frac::from_integer(0);
        match self {
            GroupName::OneQI1 => vec![zero],
            GroupName::OneQI2 => vec![Frac::new(k.unwrap_or(1) as i64, q.unwrap_or(3) as i64)],
            GroupName::ThreeQI1 | GroupName::EightI1 | GroupName::NineI1 | GroupName::TenI1 => {
                vec![zero, zero]
            }
            GroupName::ThreeQI2 => vec![half, half],
            GroupName::ThreeQeI3 => vec![zero, half],
            GroupName::EightI2 => vec![zero, Frac::new(1, 3)],
            GroupName::NineI2 => vec![half, zero],
        }
    }
}

impl fmt::Display for GroupName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for GroupName {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        GroupName::ALL
            .into_iter()
            .find(|g| g.as_str().eq_ignore_ascii_case(&compact))
            .ok_or_else(|| Error::UnknownGroup(s.to_string()))
    }
}

/// Point-group family, named after its rotation group on S².
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Family {
    /// `1q`: cyclic `C_q`.
    Cyclic,
    /// `3q`: dihedral `D_q = [2,2,q]`.
    Dihedral,
    /// `8`: tetrahedral `[2,3,3]`.
    Tetrahedral,
    /// `9`: octahedral `[2,3,4]`.
    Octahedral,
    /// `10`: icosahedral `[2,3,5]`.
    Icosahedral,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Cyclic,
        Family::Dihedral,
        Family::Tetrahedral,
        Family::Octahedral,
        Family::Icosahedral,
    ];

    pub fn code(self) -> &'static str {
        match self {
            Family::Cyclic => "1q",
            Family::Dihedral => "3q",
            Family::Tetrahedral => "8",
            Family::Octahedral => "9",
            Family::Icosahedral => "10",
        }
    }

    pub fn has_parameter(self) -> bool {
        matches!(self, Family::Cyclic | Family::Dihedral)
    }

    pub fn point_group_order(self, q: u32) -> usize {
        match self {
            Family::Cyclic => q as usize,
            Family::Dihedral => 2 * q as usize,
            Family::Tetrahedral => 12,
            Family::Octahedral => 24,
            Family::Icosahedral => 60,
        }
    }

    /// Macbeath signature of the point group, times the trivial R part.
    pub fn signature(self, q: Option<u32>) -> String {
        let q = q.map(|q| q.to_string()).unwrap_or_else(|| "q".into());
        match self {
            Family::Cyclic => format!("(+,0,[{q},{q}],{{}})x1_R"),
            Family::Dihedral => format!("(+,0,[2,2,{q}],{{}})x1_R"),
            Family::Tetrahedral => "(+,0,[2,3,3],{})x1_R".into(),
            Family::Octahedral => "(+,0,[2,3,4],{})x1_R".into(),
            Family::Icosahedral => "(+,0,[2,3,5],{})x1_R".into(),
        }
    }

    /// Order of the third rotation `g₁g₂` in the `[2,3,n]` families.
    fn triangle_order(self) -> Option<u32> {
        match self {
            Family::Tetrahedral => Some(3),
            Family::Octahedral => Some(4),
            Family::Icosahedral => Some(5),
            _ => None,
        }
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "1q" => Ok(Family::Cyclic),
            "3q" | "3qe" => Ok(Family::Dihedral),
            "8" => Ok(Family::Tetrahedral),
            "9" => Ok(Family::Octahedral),
            "10" => Ok(Family::Icosahedral),
            other => Err(Error::UnknownFamily(other.to_string())),
        }
    }
}

/// Translation-part classes admitted by the defining relations.
///
/// For `3q` the class `(0, 1/2)` only exists for even `q` (the relator
/// `(g₁g₂)^q` would otherwise carry the half-integer shift `q/2`).
pub fn frobenius_classes(family: &str, q: u32) -> Result<Vec<Vec<Frac>>> {
    let fam: Family = family.parse()?;
    let z = Frac::from_integer(0);
    let h = Frac::new(1, 2);
    Ok(match fam {
        Family::Cyclic => std::iter::once(vec![z])
            .chain((1..=q / 2).map(|k| vec![Frac::new(k as i64, q as i64)]))
            .collect(),
        Family::Dihedral => {
            let mut v = vec![vec![z, z], vec![h, h]];
            if q.is_multiple_of(2) {
                v.push(vec![z, h]);
            }
            v
        }
        Family::Tetrahedral => vec![vec![z, z], vec![z, Frac::new(1, 3)]],
        Family::Octahedral => vec![vec![z, z], vec![h, z]],
        Family::Icosahedral => vec![vec![z, z]],
    })
}

/// A screw generator: right-handed rotation by `2π/order` about `axis`,
/// carrying the fibre shift `frac·τ`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Generator {
    pub axis: Vector3<f64>,
    pub order: u32,
    pub frac: Frac,
}

impl Generator {
    pub fn matrix(&self) -> Matrix3<f64> {
        rotation_matrix(&self.axis, 2.0 * PI / self.order as f64)
    }

    pub fn isometry(&self, tau: f64) -> Isometry {
        Isometry::from_parts(self.matrix(), FibreFlag::Preserve, frac_to_f64(self.frac) * tau)
    }
}

pub fn frac_to_f64(f: Frac) -> f64 {
    *f.numer() as f64 / *f.denom() as f64
}

/// Fractional part in `[0, 1)`.
pub fn frac_mod1(f: Frac) -> Frac {
    f - f.floor()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpaceGroupSpec {
    name: GroupName,
    q: Option<u32>,
    k: Option<u32>,
    generators: Vec<Generator>,
    relators: Vec<Vec<usize>>,
    point_group_order: usize,
    fundamental_triangle: [Vector3<f64>; 3],
}

impl SpaceGroupSpec {
    /// Catalog entry at its default parameters (`q = 3`, or `q = 4` for 3qe).
    pub fn catalog(name: GroupName) -> Self {
        Self::new(name, name.default_q(), None).expect("catalog defaults are valid")
    }

    pub fn new(name: GroupName, q: Option<u32>, k: Option<u32>) -> Result<Self> {
        let family = name.family();
        let q = if family.has_parameter() {
            Some(q.or(name.default_q()).expect("parametric family has a default"))
        } else {
            if q.is_some() {
                return Err(Error::InvalidParameter(format!("{name} takes no q")));
            }
            None
        };
        match (name, q, k) {
            (GroupName::OneQI2, Some(q), k) => {
                let k = k.unwrap_or(1);
                if q < 2 || k < 1 || k > q / 2 {
                    return Err(Error::InvalidParameter(format!(
                        "1q.I.2 needs 1 <= k <= floor(q/2), got q = {q}, k = {k}"
                    )));
                }
            }
            (_, _, Some(_)) => {
                return Err(Error::InvalidParameter(format!("{name} takes no k")));
            }
            (GroupName::OneQI1, Some(0), _) => {
                return Err(Error::InvalidParameter("q must be positive".into()));
            }
            (GroupName::ThreeQI1 | GroupName::ThreeQI2, Some(q), _) if q < 2 => {
                return Err(Error::InvalidParameter(format!("{name} needs q >= 2")));
            }
            (GroupName::ThreeQeI3, Some(q), _) if q < 2 || q % 2 == 1 => {
                return Err(Error::InvalidParameter(format!("3qe.I.3 needs even q >= 2, got {q}")));
            }
            _ => {}
        }
        let k = if name == GroupName::OneQI2 { Some(k.unwrap_or(1)) } else { None };
        let fracs = name.fractions(q, k);
        let qv = q.unwrap_or(0);
        let (axes, orders, relators, triangle) = match family {
            Family::Cyclic => {
                let a = 2.0 * PI / qv as f64;
                (
                    vec![Vector3::z()],
                    vec![qv],
                    vec![vec![0; qv as usize]],
                    [Vector3::x(), Vector3::new(a.cos(), a.sin(), 0.0), Vector3::z()],
                )
            }
            Family::Dihedral => {
                let a = PI / qv as f64;
                let second = Vector3::new(a.cos(), a.sin(), 0.0);
                let product: Vec<usize> = (0..qv).flat_map(|_| [0, 1]).collect();
                (
                    vec![Vector3::x(), second],
                    vec![2, 2],
                    vec![vec![0, 0], vec![1, 1], product],
                    [Vector3::x(), second, Vector3::z()],
                )
            }
            Family::Tetrahedral | Family::Octahedral | Family::Icosahedral => {
                let n = family.triangle_order().expect("triangle family");
                let pn = PI / n as f64;
                // Möbius triangle angles π/2 (at g₁), π/3 (at g₂), π/n (at g₁g₂).
                let to_three = (pn.cos() / (PI / 3.0).sin()).acos();
                let to_n = (0.5 / pn.sin()).acos();
                let a3 = Vector3::new(to_three.cos(), to_three.sin(), 0.0);
                let an = Vector3::new(to_n.cos(), 0.0, to_n.sin());
                let product: Vec<usize> = (0..n).flat_map(|_| [0, 1]).collect();
                // g₂ turns clockwise about a3 so that g₁g₂ fixes `an` rather
                // than its mirror image below the equator.
                (
                    vec![Vector3::x(), -a3],
                    vec![2, 3],
                    vec![vec![0, 0], vec![1, 1, 1], product],
                    [Vector3::x(), a3, an],
                )
            }
        };
        let generators = axes
            .into_iter()
            .zip(orders)
            .zip(fracs)
            .map(|((axis, order), frac)| Generator { axis, order, frac })
            .collect();
        Ok(Self {
            name,
            q,
            k,
            generators,
            relators,
            point_group_order: family.point_group_order(qv),
            fundamental_triangle: triangle,
        })
    }

    pub fn name(&self) -> GroupName {
        self.name
    }

    pub fn family(&self) -> Family {
        self.name.family()
    }

    pub fn q(&self) -> Option<u32> {
        self.q
    }

    pub fn k(&self) -> Option<u32> {
        self.k
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn relators(&self) -> &[Vec<usize>] {
        &self.relators
    }

    pub fn point_group_order(&self) -> usize {
        self.point_group_order
    }

    /// Vertices of the spherical triangle searched for kernel points: the
    /// fixed points of `g₁`, `g₂` and `g₁g₂` for the `[2,m,n]` families, the
    /// half digon `0 ≤ longitude ≤ 2π/q`, `z ≥ 0` for `1q`.
    pub fn fundamental_triangle(&self) -> &[Vector3<f64>; 3] {
        &self.fundamental_triangle
    }

    /// Translation parts `(τ₁, τ₂)` (or `(τ₁)`) as exact fractions.
    pub fn fractional_parts(&self) -> Vec<Frac> {
        self.generators.iter().map(|g| g.frac).collect()
    }

    pub fn fractional_parts_string(&self) -> String {
        let parts: Vec<String> = self.fractional_parts().iter().map(|f| f.to_string()).collect();
        format!("({})", parts.join(","))
    }

    pub fn signature(&self) -> String {
        self.family().signature(self.q)
    }

    /// Isometry of a generator word, generator shifts scaled by `tau`.
    /// The first letter acts first.
    pub fn word_isometry(&self, word: &[usize], tau: f64) -> Isometry {
        word.iter().fold(Isometry::identity(), |acc, &i| acc.then(&self.generators[i].isometry(tau)))
    }

    pub fn label(&self) -> String {
        match (self.q, self.k) {
            (Some(q), Some(k)) => format!("{} (q={q}, k={k})", self.name),
            (Some(q), None) => format!("{} (q={q})", self.name),
            _ => self.name.to_string(),
        }
    }
}

/// A point-group element with the exact fractional shift of its word.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointGroupElement {
    pub linear: Matrix3<f64>,
    /// In `[0, 1)`.
    pub frac: Frac,
    pub word: Vec<usize>,
}

impl PointGroupElement {
    pub fn is_identity_rotation(&self) -> bool {
        (self.linear - Matrix3::identity()).norm() < DEDUPE_TOLERANCE
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointGroup {
    elements: Vec<PointGroupElement>,
}

impl PointGroup {
    /// Identity first, then in breadth-first word order.
    pub fn elements(&self) -> &[PointGroupElement] {
        &self.elements
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    /// Index of the element whose linear part matches `m`.
    pub fn find(&self, m: &Matrix3<f64>) -> Option<usize> {
        self.elements.iter().position(|e| (e.linear - m).norm() < DEDUPE_TOLERANCE)
    }

    /// Elements of Γ whose fibre shift lies in `[-k_max·τ, k_max·τ]`,
    /// excluding the identity.
    pub fn enumerate(&self, tau: f64, k_max: u32) -> Vec<GroupElement> {
        let k = k_max as i64;
        let mut out = Vec::new();
        for e in &self.elements {
            let s = frac_to_f64(e.frac);
            let identity = e.is_identity_rotation();
            for m in -k - 1..=k {
                let total = e.frac + Frac::from_integer(m);
                if total > Frac::from_integer(k) || total < Frac::from_integer(-k) {
                    continue;
                }
                if identity && total == Frac::from_integer(0) {
                    continue;
                }
                out.push(GroupElement {
                    iso: Isometry::from_parts(e.linear, FibreFlag::Preserve, (s + m as f64) * tau),
                    word: e.word.clone(),
                    lattice: m,
                });
            }
        }
        out
    }
}

/// An element of the space group: point-group word plus lattice offset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupElement {
    pub iso: Isometry,
    pub word: Vec<usize>,
    pub lattice: i64,
}

/// Closes the generator rotations under composition and checks the
/// defining relations, including that every relator carries an integral
/// translation part.
pub fn build_point_group(spec: &SpaceGroupSpec) -> Result<PointGroup> {
    let expected = spec.point_group_order();
    let limit = 10 * expected;
    let gens: Vec<(Matrix3<f64>, Frac)> =
        spec.generators().iter().map(|g| (g.matrix(), frac_mod1(g.frac))).collect();
    let mut elements = vec![PointGroupElement {
        linear: Matrix3::identity(),
        frac: Frac::from_integer(0),
        word: Vec::new(),
    }];
    let mut frontier = 0;
    while frontier < elements.len() {
        let current = elements[frontier].clone();
        frontier += 1;
        for (i, (m, f)) in gens.iter().enumerate() {
            // current first, then generator i
            let linear = m * current.linear;
            let frac = frac_mod1(current.frac + f);
            match elements.iter().find(|e| (e.linear - linear).norm() < DEDUPE_TOLERANCE) {
                Some(existing) => {
                    if existing.frac != frac {
                        return Err(Error::RelationViolation {
                            group: spec.label(),
                            detail: format!(
                                "word {:?} reaches a known rotation with shift {} instead of {}",
                                [current.word.as_slice(), &[i]].concat(),
                                frac,
                                existing.frac
                            ),
                        });
                    }
                }
                None => {
                    let mut word = current.word.clone();
                    word.push(i);
                    elements.push(PointGroupElement { linear, frac, word });
                    if elements.len() > limit {
                        return Err(Error::ClosureOverflow { expected, limit });
                    }
                }
            }
        }
    }
    for relator in spec.relators() {
        let (m, f) = relator
            .iter()
            .fold((Matrix3::identity(), Frac::from_integer(0)), |(m, f), &i| (gens[i].0 * m, f + gens[i].1));
        let defect = (m - Matrix3::identity()).norm();
        if defect > RELATOR_TOLERANCE {
            return Err(Error::RelationViolation {
                group: spec.label(),
                detail: format!("relator {relator:?} is off the identity by {defect:e}"),
            });
        }
        if !f.is_integer() {
            return Err(Error::RelationViolation {
                group: spec.label(),
                detail: format!("relator {relator:?} carries non-lattice shift {f}"),
            });
        }
    }
    if elements.len() != expected {
        return Err(Error::RelationViolation {
            group: spec.label(),
            detail: format!("closure has {} elements, expected {expected}", elements.len()),
        });
    }
    Ok(PointGroup { elements })
}

/// Bounded enumeration of Γ, see [`PointGroup::enumerate`].
pub fn enumerate_elements(spec: &SpaceGroupSpec, tau: f64, k_max: u32) -> Result<Vec<GroupElement>> {
    if !(tau > 0.0 && tau.is_finite()) {
        return Err(Error::domain("lattice parameter tau", tau));
    }
    Ok(build_point_group(spec)?.enumerate(tau, k_max))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn all_specs() -> Vec<SpaceGroupSpec> {
        GroupName::ALL.into_iter().map(SpaceGroupSpec::catalog).collect()
    }

    #[test]
    fn names_round_trip() {
        for g in GroupName::ALL {
            assert_eq!(g.as_str().parse::<GroupName>().unwrap(), g);
        }
        assert_eq!("8. I. 2".parse::<GroupName>().unwrap(), GroupName::EightI2);
        assert!(matches!("7.I.1".parse::<GroupName>(), Err(Error::UnknownGroup(_))));
    }

    #[test]
    fn point_group_orders() {
        let cases = [
            (SpaceGroupSpec::new(GroupName::OneQI1, Some(3), None).unwrap(), 3),
            (SpaceGroupSpec::catalog(GroupName::EightI1), 12),
            (SpaceGroupSpec::catalog(GroupName::NineI2), 24),
            (SpaceGroupSpec::catalog(GroupName::TenI1), 60),
            (SpaceGroupSpec::new(GroupName::ThreeQI2, Some(5), None).unwrap(), 10),
        ];
        for (spec, n) in cases {
            let pg = build_point_group(&spec).unwrap();
            assert_eq!(pg.len(), n, "{}", spec.label());
            assert_eq!(spec.point_group_order(), n);
        }
    }

    #[test]
    fn generators_have_their_orders() {
        for spec in all_specs() {
            for g in spec.generators() {
                let m = g.matrix().pow(g.order);
                assert!((m - Matrix3::identity()).norm() < 1e-10);
            }
        }
    }

    #[test]
    fn closure_is_a_group() {
        for spec in all_specs() {
            let pg = build_point_group(&spec).unwrap();
            for a in pg.elements() {
                for b in pg.elements() {
                    let idx = pg.find(&(b.linear * a.linear)).expect("closed");
                    // Shifts form a homomorphism to Q/Z.
                    assert_eq!(pg.elements()[idx].frac, frac_mod1(a.frac + b.frac));
                }
            }
        }
    }

    #[test]
    fn triangle_vertices_are_rotation_centres() {
        for spec in all_specs() {
            let tri = spec.fundamental_triangle();
            let gens = spec.generators();
            match spec.family() {
                Family::Cyclic => {
                    assert!((gens[0].matrix() * tri[2] - tri[2]).norm() < 1e-12);
                }
                _ => {
                    let g1 = gens[0].matrix();
                    let g2 = gens[1].matrix();
                    assert!((g1 * tri[0] - tri[0]).norm() < 1e-12);
                    assert!((g2 * tri[1] - tri[1]).norm() < 1e-12);
                    let prod = g2 * g1;
                    assert!((prod * tri[2] - tri[2]).norm() < 1e-12, "{}", spec.label());
                }
            }
            // Half of a fundamental domain of the point group.
            let area = crate::geometry::triangle_area(&tri[0], &tri[1], &tri[2]);
            let expected = crate::geometry::fundamental_area(spec.point_group_order()) / 2.0;
            assert!((area - expected).abs() < 1e-12, "{} {area} {expected}", spec.label());
        }
    }

    #[test]
    fn enumeration_counts() {
        let spec = SpaceGroupSpec::new(GroupName::OneQI1, Some(3), None).unwrap();
        assert_eq!(enumerate_elements(&spec, 1.0, 1).unwrap().len(), 8);
        let spec = SpaceGroupSpec::catalog(GroupName::EightI1);
        assert_eq!(enumerate_elements(&spec, 1.0, 1).unwrap().len(), 35);
        let els = enumerate_elements(&spec, 1.0, 0).unwrap();
        assert_eq!(els.len(), 11);
        assert!(els.iter().all(|e| e.iso.shift() == 0.0 && e.lattice == 0));
        // 8.I.2 keeps only the V4 rotations at zero shift.
        let spec = SpaceGroupSpec::catalog(GroupName::EightI2);
        assert_eq!(enumerate_elements(&spec, 1.0, 0).unwrap().len(), 3);
        assert!(enumerate_elements(&spec, 0.0, 1).is_err());
    }

    #[test]
    fn enumerated_shifts_follow_words() {
        let spec = SpaceGroupSpec::catalog(GroupName::EightI2);
        let tau = 1.7;
        for e in enumerate_elements(&spec, tau, 2).unwrap() {
            let w = spec.word_isometry(&e.word, tau);
            let whole = spec_word_frac(&spec, &e.word).floor();
            let expected = w.shift() + (e.lattice as f64 - frac_to_f64(whole)) * tau;
            assert!((e.iso.shift() - expected).abs() < 1e-12);
            assert!((w.linear() - e.iso.linear()).norm() < 1e-12);
            assert!(e.iso.shift().abs() <= 2.0 * tau + 1e-12);
        }
    }

    fn spec_word_frac(spec: &SpaceGroupSpec, word: &[usize]) -> Frac {
        word.iter().map(|&i| spec.generators()[i].frac).sum()
    }

    #[test]
    fn frobenius_class_lists() {
        let c = frobenius_classes("1q", 3).unwrap();
        assert_eq!(c, vec![vec![Frac::from_integer(0)], vec![Frac::new(1, 3)]]);
        let c = frobenius_classes("1q", 6).unwrap();
        assert_eq!(c.len(), 4);
        let c = frobenius_classes("8", 0).unwrap();
        assert_eq!(c[1], vec![Frac::from_integer(0), Frac::new(1, 3)]);
        let c = frobenius_classes("9", 0).unwrap();
        assert_eq!(c, vec![vec![Frac::from_integer(0); 2], vec![Frac::new(1, 2), Frac::from_integer(0)]]);
        assert_eq!(frobenius_classes("10", 0).unwrap().len(), 1);
        assert_eq!(frobenius_classes("3q", 3).unwrap().len(), 2);
        assert_eq!(frobenius_classes("3q", 4).unwrap().len(), 3);
        assert!(matches!(frobenius_classes("7", 3), Err(Error::UnknownFamily(_))));
    }

    #[test]
    fn every_class_builds_a_consistent_group() {
        for q in 2..=8u32 {
            for class in frobenius_classes("3q", q).unwrap() {
                let name = match (class[0] == Frac::new(1, 2), class[1] == Frac::new(1, 2)) {
                    (false, false) => GroupName::ThreeQI1,
                    (true, true) => GroupName::ThreeQI2,
                    _ => GroupName::ThreeQeI3,
                };
                let spec = SpaceGroupSpec::new(name, Some(q), None).unwrap();
                assert_eq!(spec.fractional_parts(), class);
                build_point_group(&spec).unwrap();
            }
        }
    }

    #[test]
    fn inconsistent_translation_parts_are_rejected() {
        let mut spec = SpaceGroupSpec::new(GroupName::ThreeQI1, Some(3), None).unwrap();
        spec.generators[1].frac = Frac::new(1, 2);
        assert!(matches!(build_point_group(&spec), Err(Error::RelationViolation { .. })));
    }

    #[test]
    fn wrong_axes_overflow_or_fail_relations() {
        let mut spec = SpaceGroupSpec::catalog(GroupName::EightI1);
        spec.generators[1].axis = Vector3::new(0.3, 0.8, 0.1);
        let err = build_point_group(&spec).unwrap_err();
        assert!(matches!(err, Error::ClosureOverflow { .. } | Error::RelationViolation { .. }));
    }

    #[test]
    fn parameter_validation() {
        assert!(SpaceGroupSpec::new(GroupName::ThreeQeI3, Some(3), None).is_err());
        assert!(SpaceGroupSpec::new(GroupName::OneQI2, Some(4), Some(3)).is_err());
        assert!(SpaceGroupSpec::new(GroupName::EightI1, Some(3), None).is_err());
        assert!(SpaceGroupSpec::new(GroupName::OneQI1, Some(3), Some(1)).is_err());
        let s = SpaceGroupSpec::new(GroupName::OneQI2, Some(5), Some(2)).unwrap();
        assert_eq!(s.fractional_parts(), vec![Frac::new(2, 5)]);
        assert_eq!(SpaceGroupSpec::catalog(GroupName::EightI2).fractional_parts_string(), "(0,1/3)");
    }
}
