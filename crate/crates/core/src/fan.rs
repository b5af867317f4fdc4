//! Smooth fans over the boundary lattice, the divisor registry, and the
//! affine charts attached to maximal cones.
//!
//! Strata are cones. A toroidal blow-up of the stratum `σ` is the star
//! subdivision of the fan at `σ`: a new ray `Σ_{ρ∈σ} v_ρ` replaces each ray of
//! `σ` in turn inside every maximal cone containing `σ`. Chart coordinates
//! are indexed by rays; ray ids double as divisor ids.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::field::Field;
use crate::hull;
use crate::monomial_ideal::MonomialIdeal;
use crate::poly::{is_identifier, ExponentVector, MonomialMap, Polynomial, VarTable, Variable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct DivisorId(pub u32);

impl fmt::Display for DivisorId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DivisorKind {
    Original,
    Exceptional,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DivisorRecord {
    pub id: DivisorId,
    pub kind: DivisorKind,
    /// Index of the model in which the divisor first appears (0 for originals).
    pub birth_step: usize,
    pub name: String,
    /// Primitive ray vector in the original boundary lattice.
    pub ray: Vec<i64>,
}

/// Append-only list of divisors; `records[i].id == DivisorId(i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DivisorRegistry {
    records: Vec<DivisorRecord>,
}

impl DivisorRegistry {
    pub fn get(&self, id: DivisorId) -> Option<&DivisorRecord> {
        self.records.get(id.0 as usize)
    }

    pub fn record(&self, id: DivisorId) -> &DivisorRecord {
        &self.records[id.0 as usize]
    }

    pub fn name(&self, id: DivisorId) -> &str {
        &self.record(id).name
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &DivisorRecord> {
        self.records.iter()
    }

    fn push(&mut self, kind: DivisorKind, birth_step: usize, name: String, ray: Vec<i64>) -> DivisorId {
        let id = DivisorId(self.records.len() as u32);
        self.records.push(DivisorRecord { id, kind, birth_step, name, ray });
        id
    }

    fn exceptional_count(&self) -> usize {
        self.records.iter().filter(|r| r.kind == DivisorKind::Exceptional).count()
    }
}

/// A set of rays, kept sorted. Orders graded-lexicographically: by size, then
/// lexicographically on the sorted ids.
#[derive(Clone, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Cone(Vec<DivisorId>);

impl Cone {
    pub fn new(mut rays: Vec<DivisorId>) -> Self {
        rays.sort();
        rays.dedup();
        Cone(rays)
    }

    pub fn from_ids(ids: &[u32]) -> Self {
        Cone::new(ids.iter().map(|&i| DivisorId(i)).collect())
    }

    pub fn rays(&self) -> &[DivisorId] {
        &self.0
    }

    pub fn ids(&self) -> Vec<u32> {
        self.0.iter().map(|d| d.0).collect()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, ray: DivisorId) -> bool {
        self.0.binary_search(&ray).is_ok()
    }

    pub fn is_face_of(&self, other: &Cone) -> bool {
        self.0.iter().all(|r| other.contains(*r))
    }

    pub fn position(&self, ray: DivisorId) -> Option<usize> {
        self.0.binary_search(&ray).ok()
    }

    /// All faces, including the empty cone and the cone itself.
    pub fn faces(&self) -> Vec<Cone> {
        let n = self.0.len();
        (0u64..(1u64 << n))
            .map(|mask| Cone((0..n).filter(|i| mask & (1 << i) != 0).map(|i| self.0[i]).collect()))
            .collect()
    }

    fn replace(&self, old: DivisorId, new: DivisorId) -> Cone {
        Cone::new(self.0.iter().map(|&r| if r == old { new } else { r }).collect())
    }
}

impl Ord for Cone {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.0.len().cmp(&other.0.len()).then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Cone {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Cone{:?}", self.ids())
    }
}

impl fmt::Display for Cone {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.ids())
    }
}

/// Affine chart on a maximal cone.
///
/// Variable layout: one boundary coordinate per ray of `cone` (in ray order),
/// then the non-boundary variables. The hull is cached at construction.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Chart {
    cone: Cone,
    vars: Arc<VarTable>,
    generators: Vec<Polynomial>,
    hull: MonomialIdeal,
}

impl Chart {
    pub fn new(cone: Cone, vars: Arc<VarTable>, generators: Vec<Polynomial>) -> Result<Self> {
        if generators.iter().any(|g| g.vars() != &vars) {
            return Err(Error::Poly(crate::poly::PolyError::VarTableMismatch));
        }
        let positions: Vec<usize> = (0..cone.len()).collect();
        let hull = hull::hull_ideal(&generators, &positions)?;
        Ok(Chart { cone, vars, generators, hull })
    }

    pub fn cone(&self) -> &Cone {
        &self.cone
    }

    pub fn vars(&self) -> &Arc<VarTable> {
        &self.vars
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    /// Cached toroidal hull over the chart's boundary coordinates.
    pub fn hull(&self) -> &MonomialIdeal {
        &self.hull
    }

    pub fn boundary_count(&self) -> usize {
        self.cone.len()
    }

    pub fn boundary_positions(&self) -> Vec<usize> {
        (0..self.cone.len()).collect()
    }

    /// Coordinate positions of the rays of `face`, or `None` if it is not a face.
    pub fn positions_of(&self, face: &Cone) -> Option<Vec<usize>> {
        face.rays().iter().map(|r| self.cone.position(*r)).collect()
    }

    pub fn field(&self) -> Field {
        self.generators[0].field()
    }
}

/// One stratum with the maximal cones (charts) containing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Stratum {
    pub cone: Cone,
    pub charts: Vec<Cone>,
}

/// The fan, its divisors and the ideal in every chart.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealSheafModel {
    field: Field,
    boundary_count: usize,
    free_names: Vec<String>,
    registry: DivisorRegistry,
    charts: BTreeMap<Cone, Arc<Chart>>,
    step: usize,
}

impl IdealSheafModel {
    /// The orthant model: one chart, unit rays for the boundary variables.
    ///
    /// Generators must live over `vars`; the chart re-lays them out with the
    /// boundary variables first (in declared order), then the free ones.
    pub fn initial(vars: Arc<VarTable>, generators: Vec<Polynomial>, field: Field) -> Result<Self> {
        let boundary = vars.boundary_indices();
        let free = vars.free_indices();
        if boundary.is_empty() {
            return Err(Error::EmptyBoundary);
        }
        let generators: Vec<Polynomial> = generators.into_iter().filter(|g| !g.is_zero()).collect();
        if generators.is_empty() {
            return Err(Error::ZeroIdeal);
        }
        for g in &generators {
            if g.field() != field {
                return Err(Error::Poly(crate::poly::PolyError::FieldMismatch(field, g.field())));
            }
        }
        let b = boundary.len();
        let mut registry = DivisorRegistry::default();
        for (k, &i) in boundary.iter().enumerate() {
            let mut ray = vec![0i64; b];
            ray[k] = 1;
            registry.push(DivisorKind::Original, 0, vars.name(i).to_string(), ray);
        }
        let free_names: Vec<String> = free.iter().map(|&i| vars.name(i).to_string()).collect();
        let cone = Cone::new(registry.iter().map(|r| r.id).collect());
        let chart_vars = chart_table(&registry, &cone, &free_names);
        let layout: Vec<usize> = boundary.iter().chain(free.iter()).copied().collect();
        let n = vars.len();
        let mut images = vec![ExponentVector::zeros(n); n];
        for (new_pos, &old_pos) in layout.iter().enumerate() {
            images[old_pos] = ExponentVector::unit(n, new_pos, 1);
        }
        let relayout = MonomialMap::new(vars.clone(), chart_vars.clone(), images)?;
        let gens = generators
            .iter()
            .map(|g| g.substitute_monomial_map(&relayout))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        let chart = Chart::new(cone.clone(), chart_vars, gens)?;
        let mut charts = BTreeMap::new();
        charts.insert(cone, Arc::new(chart));
        Ok(IdealSheafModel { field, boundary_count: b, free_names, registry, charts, step: 0 })
    }

    /// Parses generator strings over declared variables.
    pub fn from_strings(
        variables: &[&str],
        boundary: &[&str],
        generators: &[&str],
        field: Field,
    ) -> Result<Self> {
        let vars = declared_table(
            &variables.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
            &boundary.iter().map(|s| s.to_string()).collect::<Vec<_>>(),
        )?;
        let gens = generators
            .iter()
            .map(|g| crate::poly::parse_polynomial(g, &vars, field))
            .collect::<std::result::Result<Vec<_>, _>>()?;
        Self::initial(vars, gens, field)
    }

    pub(crate) fn with_charts(
        &self,
        registry: DivisorRegistry,
        charts: BTreeMap<Cone, Arc<Chart>>,
        step: usize,
    ) -> Self {
        IdealSheafModel {
            field: self.field,
            boundary_count: self.boundary_count,
            free_names: self.free_names.clone(),
            registry,
            charts,
            step,
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary_count
    }

    pub fn free_names(&self) -> &[String] {
        &self.free_names
    }

    pub fn registry(&self) -> &DivisorRegistry {
        &self.registry
    }

    pub fn step(&self) -> usize {
        self.step
    }

    pub fn charts(&self) -> impl Iterator<Item = &Arc<Chart>> {
        self.charts.values()
    }

    pub fn chart_map(&self) -> &BTreeMap<Cone, Arc<Chart>> {
        &self.charts
    }

    pub fn chart(&self, cone: &Cone) -> Option<&Arc<Chart>> {
        self.charts.get(cone)
    }

    pub fn chart_count(&self) -> usize {
        self.charts.len()
    }

    pub fn charts_containing<'a>(&'a self, cone: &'a Cone) -> impl Iterator<Item = &'a Arc<Chart>> + 'a {
        self.charts.values().filter(move |c| cone.is_face_of(c.cone()))
    }

    pub fn contains_cone(&self, cone: &Cone) -> bool {
        self.charts_containing(cone).next().is_some()
    }

    /// Display names of a cone's divisors.
    pub fn cone_names(&self, cone: &Cone) -> Vec<String> {
        cone.rays().iter().map(|r| self.registry.name(*r).to_string()).collect()
    }

    /// Every cone of the fan once, in graded-lex order, with the charts containing it.
    pub fn enumerate_strata(&self) -> Vec<Stratum> {
        let mut all: BTreeMap<Cone, Vec<Cone>> = BTreeMap::new();
        for key in self.charts.keys() {
            for face in key.faces() {
                all.entry(face).or_default().push(key.clone());
            }
        }
        all.into_iter().map(|(cone, charts)| Stratum { cone, charts }).collect()
    }

    /// Determinant of the ray matrix of a maximal cone.
    pub fn ray_determinant(&self, cone: &Cone) -> BigInt {
        let rows: Vec<Vec<BigInt>> = cone
            .rays()
            .iter()
            .map(|r| self.registry.record(*r).ray.iter().map(|&v| BigInt::from(v)).collect())
            .collect();
        determinant(rows)
    }

    /// Every maximal cone has a unimodular ray matrix.
    pub fn is_smooth(&self) -> bool {
        self.charts.keys().all(|c| c.len() == self.boundary_count && self.ray_determinant(c).abs().is_one())
    }

    /// Star subdivision at `center`, without touching the ideal.
    pub fn star_subdivide(&self, center: &Cone) -> Result<Subdivision> {
        if center.is_empty() {
            return Err(Error::EmptyCenter);
        }
        let parents: Vec<Cone> = self.charts_containing(center).map(|c| c.cone().clone()).collect();
        if parents.is_empty() {
            return Err(Error::ConeNotInFan(center.clone()));
        }
        let mut registry = self.registry.clone();
        if center.len() == 1 {
            let ray = center.rays()[0];
            let children = parents
                .into_iter()
                .map(|parent| {
                    let chart = &self.charts[&parent];
                    ChildChart {
                        parent: parent.clone(),
                        cone: parent.clone(),
                        replaced: None,
                        exceptional_position: parent.position(ray).unwrap(),
                        map: MonomialMap::identity(chart.vars().clone()),
                    }
                })
                .collect();
            return Ok(Subdivision { center: center.clone(), new_divisor: ray, registry, children });
        }
        let mut vector = vec![0i64; self.boundary_count];
        for r in center.rays() {
            for (slot, v) in vector.iter_mut().zip(&self.registry.record(*r).ray) {
                *slot = slot.checked_add(*v).ok_or(Error::RayOverflow)?;
            }
        }
        let name = self.fresh_exceptional_name();
        let new_id = registry.push(DivisorKind::Exceptional, self.step + 1, name, vector);
        let mut children = Vec::new();
        for parent in parents {
            let chart = &self.charts[&parent];
            for &k in center.rays() {
                let cone = parent.replace(k, new_id);
                let vars = chart_table(&registry, &cone, &self.free_names);
                let map = chart_substitution(chart, &vars, &cone, center, k, new_id)?;
                children.push(ChildChart {
                    parent: parent.clone(),
                    exceptional_position: cone.position(new_id).unwrap(),
                    cone,
                    replaced: Some(k),
                    map,
                });
            }
        }
        Ok(Subdivision { center: center.clone(), new_divisor: new_id, registry, children })
    }

    fn fresh_exceptional_name(&self) -> String {
        let taken: BTreeSet<&str> = self
            .registry
            .iter()
            .map(|r| r.name.as_str())
            .chain(self.free_names.iter().map(|s| s.as_str()))
            .collect();
        let mut name = format!("E{}", self.registry.exceptional_count() + 1);
        while taken.contains(name.as_str()) {
            name.push('_');
        }
        name
    }
}

/// One chart produced by a star subdivision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChildChart {
    pub parent: Cone,
    pub cone: Cone,
    /// The ray of the center swapped out for the new ray (`None` for divisor centers).
    pub replaced: Option<DivisorId>,
    /// Coordinate of the exceptional divisor in the child chart.
    pub exceptional_position: usize,
    /// Parent chart variables expressed in child chart variables.
    pub map: MonomialMap,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Subdivision {
    pub center: Cone,
    /// The new exceptional divisor, or the center's own divisor when `|center| = 1`.
    pub new_divisor: DivisorId,
    pub registry: DivisorRegistry,
    pub children: Vec<ChildChart>,
}

/// Variable table for the chart on `cone`.
pub(crate) fn chart_table(registry: &DivisorRegistry, cone: &Cone, free: &[String]) -> Arc<VarTable> {
    let vars = cone
        .rays()
        .iter()
        .map(|r| Variable::boundary(registry.name(*r)))
        .chain(free.iter().map(|n| Variable::free(n.clone())))
        .collect();
    Arc::new(VarTable::new(vars).expect("registry and free names are distinct identifiers"))
}

/// Builds the declared variable table from names and the boundary subset.
pub fn declared_table(variables: &[String], boundary: &[String]) -> Result<Arc<VarTable>> {
    for b in boundary {
        if !variables.contains(b) {
            return Err(Error::UnknownVariable(b.clone()));
        }
    }
    if let Some(bad) = variables.iter().find(|v| !is_identifier(v)) {
        return Err(Error::Poly(crate::poly::PolyError::InvalidVariableName(bad.clone())));
    }
    let vars = variables
        .iter()
        .map(|n| Variable { name: n.clone(), boundary: boundary.contains(n) })
        .collect();
    Ok(Arc::new(VarTable::new(vars)?))
}

/// The blow-up chart map from `parent`'s coordinates to the child's: for the
/// swapped-out ray `k` of the center `σ`, `x_k ↦ e` and `x_j ↦ x_j · e` for
/// the other `j ∈ σ`, where `e` is the coordinate of the new ray; every other
/// variable maps to itself.
pub fn chart_substitution(
    parent: &Chart,
    child_vars: &Arc<VarTable>,
    child_cone: &Cone,
    center: &Cone,
    replaced: DivisorId,
    new_ray: DivisorId,
) -> Result<MonomialMap> {
    if !center.is_face_of(parent.cone()) {
        return Err(Error::InconsistentSubstitution(format!(
            "center {center} is not a face of chart {}",
            parent.cone()
        )));
    }
    if !center.contains(replaced) {
        return Err(Error::InconsistentSubstitution(format!(
            "ray {replaced} is not in the center {center}"
        )));
    }
    if *child_cone != parent.cone().replace(replaced, new_ray) {
        return Err(Error::InconsistentSubstitution(format!(
            "chart {child_cone} does not arise from {} by swapping {replaced}",
            parent.cone()
        )));
    }
    let n = child_vars.len();
    let b = child_cone.len();
    let new_pos = child_cone.position(new_ray).expect("new ray is in the child");
    let mut images = Vec::with_capacity(parent.vars().len());
    for &ray in parent.cone().rays() {
        let img = if ray == replaced {
            ExponentVector::unit(n, new_pos, 1)
        } else {
            let pos = child_cone.position(ray).expect("retained ray is in the child");
            let mut v = vec![0u32; n];
            v[pos] = 1;
            if center.contains(ray) {
                v[new_pos] = 1;
            }
            ExponentVector::new(v)
        };
        images.push(img);
    }
    for j in b..parent.vars().len() {
        images.push(ExponentVector::unit(n, j, 1));
    }
    Ok(MonomialMap::new(parent.vars().clone(), child_vars.clone(), images)?)
}

fn determinant(mut m: Vec<Vec<BigInt>>) -> BigInt {
    // Bareiss fraction-free elimination.
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                m[i][j] = (&m[i][j] * &m[k][k] - &m[i][k] * &m[k][j]) / &prev;
            }
        }
        prev = m[k][k].clone();
    }
    sign * &m[n - 1][n - 1]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn model(vars: &[&str], boundary: &[&str], gens: &[&str]) -> IdealSheafModel {
        IdealSheafModel::from_strings(vars, boundary, gens, Field::Rational).unwrap()
    }

    #[test]
    fn initial_model_examples() {
        let m = model(&["x", "y", "u"], &["x", "y"], &["x^2 + x*y*u"]);
        assert_eq!(m.chart_count(), 1);
        assert_eq!(m.enumerate_strata().len(), 4);
        assert_eq!(m.registry().record(DivisorId(1)).ray, vec![0, 1]);
        assert!(m.is_smooth());

        let err = IdealSheafModel::from_strings(&["x", "y", "u"], &["x", "y"], &["x - x"], Field::Rational);
        assert_eq!(err.unwrap_err(), Error::ZeroIdeal);
        let err = IdealSheafModel::from_strings(&["x", "u"], &[], &["x"], Field::Rational);
        assert_eq!(err.unwrap_err(), Error::EmptyBoundary);

        let m = model(&["x"], &["x"], &["x"]);
        assert_eq!(m.chart_count(), 1);
        assert_eq!(m.enumerate_strata().len(), 2);
    }

    #[test]
    fn relayout_puts_boundary_first() {
        let m = model(&["u", "x", "y"], &["x", "y"], &["u*x + y^2"]);
        let chart = m.charts().next().unwrap();
        assert_eq!(chart.vars().names(), vec!["x", "y", "u"]);
        assert_eq!(chart.generators()[0].to_string(), "x*u + y^2");
    }

    #[test]
    fn star_subdivision_2d() {
        let m = model(&["x", "y"], &["x", "y"], &["x*y"]);
        let sub = m.star_subdivide(&Cone::from_ids(&[0, 1])).unwrap();
        assert_eq!(sub.new_divisor, DivisorId(2));
        assert_eq!(sub.registry.record(DivisorId(2)).ray, vec![1, 1]);
        assert_eq!(sub.registry.name(DivisorId(2)), "E1");
        let cones: Vec<Cone> = sub.children.iter().map(|c| c.cone.clone()).collect();
        assert_eq!(cones, vec![Cone::from_ids(&[1, 2]), Cone::from_ids(&[0, 2])]);
    }

    #[test]
    fn star_subdivision_counts_3d() {
        let m = model(&["x", "y", "z"], &["x", "y", "z"], &["x*y*z"]);
        assert_eq!(m.star_subdivide(&Cone::from_ids(&[0, 1])).unwrap().children.len(), 2);
        assert_eq!(m.star_subdivide(&Cone::from_ids(&[0, 1, 2])).unwrap().children.len(), 3);
        let ray = m.star_subdivide(&Cone::from_ids(&[0])).unwrap();
        assert_eq!(ray.children.len(), 1);
        assert_eq!(ray.new_divisor, DivisorId(0));
        assert_eq!(ray.children[0].cone, Cone::from_ids(&[0, 1, 2]));
        assert_eq!(ray.registry, *m.registry());
        assert_eq!(
            m.star_subdivide(&Cone::from_ids(&[7])).unwrap_err(),
            Error::ConeNotInFan(Cone::from_ids(&[7]))
        );
    }

    #[test]
    fn chart_substitution_examples() {
        let m = model(&["x", "y"], &["x", "y"], &["x*y"]);
        let sub = m.star_subdivide(&Cone::from_ids(&[0, 1])).unwrap();
        // k = x: the x coordinate becomes E1, y ↦ x·y in chart variables (y, E1).
        let kx = &sub.children[0];
        assert_eq!(kx.replaced, Some(DivisorId(0)));
        assert_eq!(kx.map.target().names(), vec!["y", "E1"]);
        let imgs: Vec<Vec<u32>> = kx.map.images().iter().map(|e| e.as_slice().to_vec()).collect();
        assert_eq!(imgs, vec![vec![0, 1], vec![1, 1]]);
        assert_eq!(kx.exceptional_position, 1);

        let m3 = model(&["x", "y", "z"], &["x", "y", "z"], &["x"]);
        let sub = m3.star_subdivide(&Cone::from_ids(&[0, 1])).unwrap();
        let ky = sub.children.iter().find(|c| c.replaced == Some(DivisorId(1))).unwrap();
        // Chart (x, z, E1): x ↦ x·E1, y ↦ E1, z ↦ z.
        let imgs: Vec<Vec<u32>> = ky.map.images().iter().map(|e| e.as_slice().to_vec()).collect();
        assert_eq!(imgs, vec![vec![1, 0, 1], vec![0, 0, 1], vec![0, 1, 0]]);

        let parent = m3.charts().next().unwrap();
        let vars = chart_table(&sub.registry, &ky.cone, &[]);
        let bad = chart_substitution(parent, &vars, &ky.cone, &Cone::from_ids(&[0, 1]), DivisorId(2), DivisorId(3));
        assert!(matches!(bad, Err(Error::InconsistentSubstitution(_))));
    }

    #[test]
    fn exceptional_names_avoid_clashes() {
        let m = model(&["x", "y", "E1"], &["x", "y"], &["x*y + E1"]);
        let sub = m.star_subdivide(&Cone::from_ids(&[0, 1])).unwrap();
        assert_eq!(sub.registry.name(sub.new_divisor), "E1_");
    }

    #[test]
    fn determinants() {
        let d = determinant(vec![
            vec![BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(1)],
        ]);
        assert_eq!(d, BigInt::from(-1));
        let d = determinant(vec![
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(1)],
            vec![BigInt::from(1), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(1)],
        ]);
        assert_eq!(d, BigInt::from(2));
        let d = determinant(vec![
            vec![BigInt::from(0), BigInt::from(1), BigInt::from(0)],
            vec![BigInt::from(1), BigInt::from(0), BigInt::from(0)],
            vec![BigInt::from(0), BigInt::from(0), BigInt::from(1)],
        ]);
        assert_eq!(d, BigInt::from(-1));
    }
}
