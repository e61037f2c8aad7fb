//! Distance evaluators over finite metric structures.
//!
//! For a point set `S`, a parameter `a`, an automorphism `γ`, a `[0,1]`-valued
//! formula `φ` and a tuple length `n`:
//!
//! * set form: `sup_{x ∈ Sⁿ} ( min_{i<j} d(γ⁻¹xᵢ, γ⁻¹xⱼ) ∧ min_i φ(γ⁻¹xᵢ, a) )`
//! * group form: `sup_{x ∈ Sⁿ} min_{i<j} φ(γ⁻¹(xᵢ⁻¹xⱼ), a)`
//! * vector form: `sup_{x ∈ Sⁿ} inf_{η ∈ Kⁿ∖0} φ(γ⁻¹(Σ ηᵢxᵢ), a)`
//!
//! Empty suprema are 0 and empty infima are 1, so every form is 1 at `n = 0`.
//! Over a discrete metric with `φ = 1 − 1_F`, the largest `n` with value 1 is
//! the difference count, the index or the codimension respectively; see
//! [`discrete_reduction`].

use std::collections::HashMap;

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::groups::{PermGroup, Subgroup};
use crate::perm::Perm;
use crate::poset::Rational;
use crate::sets::FiniteSubset;
use crate::vect::SubspaceBasis;

pub const DEFAULT_ENUMERATION_CAP: u128 = 10_000_000;
pub const MAX_FORMULAS: usize = 4096;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Formula {
    pub name: String,
    /// `values[x][a]`.
    pub values: Vec<Vec<Rational>>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroupTable {
    pub mul: Vec<Vec<usize>>,
    pub inv: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VectorTable {
    pub p: u32,
    pub coords: Vec<Vec<u32>>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Form {
    Set,
    Group,
    Vector,
}

#[derive(Clone, Debug)]
pub struct MetricStructure {
    points: usize,
    params: usize,
    dist: Vec<Vec<Rational>>,
    formulas: Vec<Formula>,
    group: Option<GroupTable>,
    vector: Option<VectorTable>,
    coord_index: HashMap<Vec<u32>, usize>,
    enumeration_cap: u128,
}

fn in_unit(x: &Rational) -> bool {
    *x >= Rational::zero() && *x <= Rational::one()
}

impl MetricStructure {
    /// Validates the structure and closes the formulas under pointwise max.
    pub fn new(
        dist: Vec<Vec<Rational>>,
        formulas: Vec<Formula>,
        group: Option<GroupTable>,
        vector: Option<VectorTable>,
    ) -> Result<Self> {
        let n = dist.len();
        if dist.iter().any(|r| r.len() != n) {
            return Err(Error::Shape("distance table is not square".into()));
        }
        for x in 0..n {
            if !dist[x][x].is_zero() {
                return Err(Error::Invalid(format!("d({x},{x}) is not zero")));
            }
            for y in 0..n {
                if !in_unit(&dist[x][y]) {
                    return Err(Error::Invalid(format!("d({x},{y}) lies outside [0,1]")));
                }
                if dist[x][y] != dist[y][x] {
                    return Err(Error::Invalid(format!("d is not symmetric at ({x},{y})")));
                }
                for z in 0..n {
                    if dist[x][z] > dist[x][y] + dist[y][z] {
                        return Err(Error::Invalid(format!("triangle inequality fails at ({x},{y},{z})")));
                    }
                }
            }
        }
        let params = formulas.first().map_or(0, |f| f.values.first().map_or(0, Vec::len));
        for f in &formulas {
            if f.values.len() != n || f.values.iter().any(|r| r.len() != params) {
                return Err(Error::Shape(format!(
                    "formula {} must be a {n} x {params} table",
                    f.name
                )));
            }
            if f.values.iter().flatten().any(|v| !in_unit(v)) {
                return Err(Error::Invalid(format!("formula {} takes values outside [0,1]", f.name)));
            }
        }
        if let Some(g) = &group {
            check_group(g, n)?;
        }
        let mut coord_index = HashMap::new();
        if let Some(v) = &vector {
            if !crate::vect::is_prime(v.p) {
                return Err(Error::Invalid(format!("{} is not prime", v.p)));
            }
            let len = v.coords.first().map_or(0, Vec::len);
            if v.coords.len() != n || v.coords.iter().any(|c| c.len() != len || c.iter().any(|&x| x >= v.p)) {
                return Err(Error::Shape(
                    "vector coordinates must give one reduced vector per point".into(),
                ));
            }
            for (i, c) in v.coords.iter().enumerate() {
                if coord_index.insert(c.clone(), i).is_some() {
                    return Err(Error::Invalid(format!("two points share coordinates {c:?}")));
                }
            }
        }
        Ok(MetricStructure {
            points: n,
            params,
            dist,
            formulas: close_under_max(formulas)?,
            group,
            vector,
            coord_index,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        })
    }

    pub fn with_enumeration_cap(mut self, cap: u128) -> Self {
        self.enumeration_cap = cap;
        self
    }

    pub fn points(&self) -> usize {
        self.points
    }

    pub fn params(&self) -> usize {
        self.params
    }

    /// Formulas after closing under max.
    pub fn formulas(&self) -> &[Formula] {
        &self.formulas
    }

    pub fn formula_index(&self, name: &str) -> Option<usize> {
        self.formulas.iter().position(|f| f.name == name)
    }

    /// Discrete metric on `0..carrier` with `φ(x, a) = 1 − 1[x ∈ F_a]`.
    pub fn discrete_sets(carrier: usize, family: &[FiniteSubset]) -> Result<Self> {
        let phi = outside_formula(carrier, family.len(), |x, a| family[a].contains(x));
        MetricStructure::new(discrete_metric(carrier), vec![phi], None, None)
    }

    /// The elements of `group` under the discrete metric, with `φ = 1 − 1_{F_a}`.
    pub fn discrete_group(group: &PermGroup, family: &[Subgroup]) -> Result<Self> {
        let n = group.order();
        let mul = (0..n).map(|a| (0..n).map(|b| group.mul(a, b)).collect()).collect();
        let inv = (0..n).map(|a| group.inv(a)).collect();
        let phi = outside_formula(n, family.len(), |x, a| family[a].contains(x));
        MetricStructure::new(discrete_metric(n), vec![phi], Some(GroupTable { mul, inv }), None)
    }

    /// All vectors of `F_p^dim` under the discrete metric, with `φ = 1 − 1_{F_a}`.
    pub fn discrete_vectors(p: u32, dim: usize, family: &[SubspaceBasis], cap: usize) -> Result<Self> {
        let coords = SubspaceBasis::full(p, dim).vectors(cap)?;
        let phi = outside_formula(coords.len(), family.len(), |x, a| family[a].contains(&coords[x]));
        MetricStructure::new(
            discrete_metric(coords.len()),
            vec![phi],
            None,
            Some(VectorTable { p, coords }),
        )
    }

    /// Point index of a coordinate vector, in structures with a vector block.
    pub fn point_of(&self, coords: &[u32]) -> Option<usize> {
        self.coord_index.get(coords).copied()
    }

    fn check_query(&self, s: &[usize], a: usize, phi: usize, gamma: Option<&Perm>) -> Result<()> {
        if let Some(&x) = s.iter().find(|&&x| x >= self.points) {
            return Err(Error::Invalid(format!("point {x} outside 0..{}", self.points)));
        }
        if a >= self.params {
            return Err(Error::Invalid(format!("parameter {a} outside 0..{}", self.params)));
        }
        if phi >= self.formulas.len() {
            return Err(Error::Invalid(format!("formula index {phi} out of range")));
        }
        if let Some(g) = gamma {
            if g.degree() != self.points {
                return Err(Error::InvalidAction(format!(
                    "{g:?} does not permute the {} points",
                    self.points
                )));
            }
        }
        Ok(())
    }

    fn check_budget(&self, base: u128, n: usize) -> Result<()> {
        let count = base.checked_pow(n as u32);
        if count.is_none_or(|c| c > self.enumeration_cap) {
            return Err(Error::EnumerationCapExceeded(format!(
                "{base}^{n} tuples exceed the cap of {}",
                self.enumeration_cap
            )));
        }
        Ok(())
    }

    fn pullback(gamma: Option<&Perm>) -> Vec<usize> {
        gamma
            .map(|g| g.inverse().images().iter().map(|&x| x as usize).collect())
            .unwrap_or_default()
    }

    /// Set-form distance.
    pub fn delta_set(&self, s: &[usize], a: usize, gamma: Option<&Perm>, phi: usize, n: usize) -> Result<Rational> {
        self.check_query(s, a, phi, gamma)?;
        self.check_budget(s.len() as u128, n)?;
        let back = Self::pullback(gamma);
        let pull = |x: usize| if back.is_empty() { x } else { back[x] };
        let table = &self.formulas[phi].values;
        let pts: Vec<usize> = s.iter().map(|&x| pull(x)).collect();
        let mut best = Rational::zero();
        let mut chosen = Vec::with_capacity(n);
        sup_min(&pts, n, &mut chosen, Rational::one(), &mut best, &mut |chosen, y| {
            let mut v = table[y][a];
            for &x in chosen.iter() {
                v = v.min(self.dist[x][y]);
            }
            v
        });
        Ok(best)
    }

    /// Group-form distance.
    pub fn delta_group(&self, s: &[usize], a: usize, gamma: Option<&Perm>, phi: usize, n: usize) -> Result<Rational> {
        let g = self
            .group
            .as_ref()
            .ok_or_else(|| Error::Invalid("structure has no group block".into()))?;
        self.check_query(s, a, phi, gamma)?;
        self.check_budget(s.len() as u128, n)?;
        let back = Self::pullback(gamma);
        let pull = |x: usize| if back.is_empty() { x } else { back[x] };
        let table = &self.formulas[phi].values;
        let mut best = Rational::zero();
        let mut chosen = Vec::with_capacity(n);
        sup_min(s, n, &mut chosen, Rational::one(), &mut best, &mut |chosen, y| {
            chosen
                .iter()
                .map(|&x| table[pull(g.mul[g.inv[x]][y])][a])
                .min()
                .unwrap_or_else(Rational::one)
        });
        Ok(best)
    }

    /// Vector-form distance.
    pub fn delta_vect(&self, s: &[usize], a: usize, gamma: Option<&Perm>, phi: usize, n: usize) -> Result<Rational> {
        let v = self
            .vector
            .as_ref()
            .ok_or_else(|| Error::Invalid("structure has no vector block".into()))?;
        self.check_query(s, a, phi, gamma)?;
        self.check_budget(s.len() as u128 * v.p as u128, n)?;
        let back = Self::pullback(gamma);
        let pull = |x: usize| if back.is_empty() { x } else { back[x] };
        let table = &self.formulas[phi].values;
        let p = v.p;
        let zero = vec![0u32; v.coords.first().map_or(0, Vec::len)];
        let mut closed = true;
        let value = |c: &[u32], closed: &mut bool| -> Rational {
            match self.coord_index.get(c) {
                Some(&x) => table[pull(x)][a],
                None => {
                    *closed = false;
                    Rational::zero()
                }
            }
        };
        // DFS over tuples; `spans[j]` lists every combination of the first j entries.
        let mut best = Rational::zero();
        let mut stack: Vec<(usize, Vec<Vec<u32>>, Rational)> = vec![(0, vec![zero], Rational::one())];
        while let Some((depth, span, current)) = stack.pop() {
            if current <= best {
                continue;
            }
            if depth == n {
                best = current;
                if best.is_one() {
                    break;
                }
                continue;
            }
            for &x in s {
                let xc = &v.coords[x];
                let mut next_span = Vec::with_capacity(span.len() * p as usize);
                let mut next_value = current;
                for c in 0..p {
                    for w in &span {
                        let comb: Vec<u32> = w
                            .iter()
                            .zip(xc)
                            .map(|(&wi, &xi)| ((wi as u64 + c as u64 * xi as u64) % p as u64) as u32)
                            .collect();
                        if c != 0 {
                            next_value = next_value.min(value(&comb, &mut closed));
                        }
                        next_span.push(comb);
                    }
                }
                if next_value > best {
                    stack.push((depth + 1, next_span, next_value));
                }
            }
        }
        if !closed {
            return Err(Error::Invalid(
                "vector block is not closed under linear combinations".into(),
            ));
        }
        Ok(best)
    }

    pub fn delta(
        &self,
        form: Form,
        s: &[usize],
        a: usize,
        gamma: Option<&Perm>,
        phi: usize,
        n: usize,
    ) -> Result<Rational> {
        match form {
            Form::Set => self.delta_set(s, a, gamma, phi, n),
            Form::Group => self.delta_group(s, a, gamma, phi, n),
            Form::Vector => self.delta_vect(s, a, gamma, phi, n),
        }
    }

    /// Values for every formula and every `n` in `0..=n_max`, formula-major.
    pub fn sweep(
        &self,
        form: Form,
        s: &[usize],
        a: usize,
        gamma: Option<&Perm>,
        n_max: usize,
    ) -> Result<Vec<SweepRow>> {
        let mut rows = Vec::with_capacity(self.formulas.len() * (n_max + 1));
        for phi in 0..self.formulas.len() {
            for n in 0..=n_max {
                rows.push(SweepRow {
                    formula: phi,
                    n,
                    value: self.delta(form, s, a, gamma, phi, n)?,
                });
            }
        }
        Ok(rows)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SweepRow {
    pub formula: usize,
    pub n: usize,
    pub value: Rational,
}

/// Depth-first sup over `pts^n` of a running minimum; `step(chosen, y)` is the
/// contribution of appending `y`. Branches that cannot beat `best` are cut.
fn sup_min<F>(pts: &[usize], n: usize, chosen: &mut Vec<usize>, current: Rational, best: &mut Rational, step: &mut F)
where
    F: FnMut(&[usize], usize) -> Rational,
{
    if chosen.len() == n {
        if current > *best {
            *best = current;
        }
        return;
    }
    for &y in pts {
        let v = current.min(step(chosen, y));
        if v <= *best {
            continue;
        }
        chosen.push(y);
        sup_min(pts, n, chosen, v, best, step);
        chosen.pop();
        if best.is_one() {
            return;
        }
    }
}

fn check_group(g: &GroupTable, n: usize) -> Result<()> {
    if g.mul.len() != n || g.mul.iter().any(|r| r.len() != n) || g.inv.len() != n {
        return Err(Error::Shape(format!(
            "group block must have an {n} x {n} table and {n} inverses"
        )));
    }
    if g.mul.iter().flatten().chain(&g.inv).any(|&x| x >= n) {
        return Err(Error::Invalid("group block refers to a point out of range".into()));
    }
    let e = (0..n)
        .find(|&e| (0..n).all(|x| g.mul[e][x] == x && g.mul[x][e] == x))
        .ok_or_else(|| Error::Invalid("group block has no identity".into()))?;
    for x in 0..n {
        if g.mul[x][g.inv[x]] != e {
            return Err(Error::Invalid(format!("inverse of {x} is wrong")));
        }
        for y in 0..n {
            for z in 0..n {
                if g.mul[g.mul[x][y]][z] != g.mul[x][g.mul[y][z]] {
                    return Err(Error::Invalid("group multiplication is not associative".into()));
                }
            }
        }
    }
    Ok(())
}

fn close_under_max(mut formulas: Vec<Formula>) -> Result<Vec<Formula>> {
    let mut i = 0;
    while i < formulas.len() {
        for j in 0..i {
            let values: Vec<Vec<Rational>> = formulas[i]
                .values
                .iter()
                .zip(&formulas[j].values)
                .map(|(r, s)| r.iter().zip(s).map(|(x, y)| *x.max(y)).collect())
                .collect();
            if formulas.iter().all(|f| f.values != values) {
                if formulas.len() >= MAX_FORMULAS {
                    return Err(Error::EnumerationCapExceeded(format!(
                        "closing the formulas under max exceeds {MAX_FORMULAS}"
                    )));
                }
                let name = format!("max({},{})", formulas[j].name, formulas[i].name);
                formulas.push(Formula { name, values });
            }
        }
        i += 1;
    }
    Ok(formulas)
}

fn discrete_metric(n: usize) -> Vec<Vec<Rational>> {
    (0..n)
        .map(|x| (0..n).map(|y| Rational::from_integer(i64::from(x != y))).collect())
        .collect()
}

fn outside_formula(points: usize, params: usize, inside: impl Fn(usize, usize) -> bool) -> Formula {
    Formula {
        name: "outside".into(),
        values: (0..points)
            .map(|x| {
                (0..params)
                    .map(|a| Rational::from_integer(i64::from(!inside(x, a))))
                    .collect()
            })
            .collect(),
    }
}

/// Largest `n` with distance exactly 1 for the formula `phi`.
pub fn discrete_reduction(structure: &MetricStructure, form: Form, s: &[usize], a: usize, phi: usize) -> Result<u64> {
    let mut n = 0;
    while n <= structure.points() {
        if !structure.delta(form, s, a, None, phi, n + 1)?.is_one() {
            return Ok(n as u64);
        }
        n += 1;
    }
    Err(Error::Internal(
        "distance stayed at 1 beyond the number of points".into(),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(n: i64, d: i64) -> Rational {
        Rational::new(n, d)
    }

    fn set(n: usize, xs: &[usize]) -> FiniteSubset {
        FiniteSubset::from_members(n, xs).unwrap()
    }

    #[test]
    fn set_form_examples() {
        let st = MetricStructure::discrete_sets(4, &[set(4, &[2, 3])]).unwrap();
        let s = [1, 2];
        assert_eq!(st.delta_set(&s, 0, None, 0, 0).unwrap(), r(1, 1));
        assert_eq!(st.delta_set(&s, 0, None, 0, 1).unwrap(), r(1, 1));
        assert_eq!(st.delta_set(&s, 0, None, 0, 2).unwrap(), r(0, 1));
        assert_eq!(st.delta_set(&[], 0, None, 0, 1).unwrap(), r(0, 1));
        assert_eq!(st.delta_set(&[], 0, None, 0, 0).unwrap(), r(1, 1));
    }

    /// Literal evaluation of the set form over all of `Sⁿ`, no pruning.
    fn literal_set(st: &MetricStructure, s: &[usize], a: usize, phi: usize, n: usize) -> Rational {
        let mut best = Rational::zero();
        let total = s.len().pow(n as u32);
        if n == 0 {
            return Rational::one();
        }
        for code in 0..total {
            let x: Vec<usize> = (0..n).map(|i| s[code / s.len().pow(i as u32) % s.len()]).collect();
            let mut v = Rational::one();
            for i in 0..n {
                v = v.min(st.formulas()[phi].values[x[i]][a]);
                for j in i + 1..n {
                    v = v.min(st.dist[x[i]][x[j]]);
                }
            }
            best = best.max(v);
        }
        best
    }

    #[test]
    fn pruned_set_search_matches_literal_evaluation() {
        let half = r(1, 2);
        let dist = vec![
            vec![r(0, 1), half, r(1, 1)],
            vec![half, r(0, 1), half],
            vec![r(1, 1), half, r(0, 1)],
        ];
        let phi = Formula {
            name: "phi".into(),
            values: vec![vec![half], vec![r(1, 1)], vec![r(1, 3)]],
        };
        let st = MetricStructure::new(dist, vec![phi], None, None).unwrap();
        for mask in 0..8usize {
            let s: Vec<usize> = (0..3).filter(|i| mask >> i & 1 == 1).collect();
            for n in 0..=4 {
                assert_eq!(st.delta_set(&s, 0, None, 0, n).unwrap(), literal_set(&st, &s, 0, 0, n));
            }
        }
    }

    #[test]
    fn group_form_examples() {
        let g = PermGroup::symmetric(3);
        let h = g
            .subgroup_from_perms(&[Perm::from_cycles(3, &[&[0, 1]]).unwrap()])
            .unwrap();
        let st = MetricStructure::discrete_group(&g, std::slice::from_ref(&h)).unwrap();
        let all: Vec<usize> = (0..6).collect();
        assert_eq!(st.delta_group(&all, 0, None, 0, 1).unwrap(), r(1, 1));
        assert_eq!(st.delta_group(&all, 0, None, 0, 3).unwrap(), r(1, 1));
        assert_eq!(st.delta_group(&all, 0, None, 0, 4).unwrap(), r(0, 1));
        assert_eq!(st.delta_group(&h.members(), 0, None, 0, 2).unwrap(), r(0, 1));
        assert_eq!(discrete_reduction(&st, Form::Group, &all, 0, 0).unwrap(), 3);
    }

    #[test]
    fn vector_form_examples() {
        let line = SubspaceBasis::new(2, 2, vec![vec![1, 0]]).unwrap();
        let st = MetricStructure::discrete_vectors(2, 2, std::slice::from_ref(&line), 1024).unwrap();
        let all: Vec<usize> = (0..4).collect();
        assert_eq!(st.delta_vect(&all, 0, None, 0, 0).unwrap(), r(1, 1));
        assert_eq!(st.delta_vect(&all, 0, None, 0, 1).unwrap(), r(1, 1));
        assert_eq!(st.delta_vect(&all, 0, None, 0, 2).unwrap(), r(0, 1));
        let zero = st.point_of(&[0, 0]).unwrap();
        assert_eq!(st.delta_vect(&[zero], 0, None, 0, 1).unwrap(), r(0, 1));
        assert_eq!(discrete_reduction(&st, Form::Vector, &all, 0, 0).unwrap(), 1);
    }

    #[test]
    fn gamma_is_applied_inverted() {
        // φ vanishes on {2,3}; pulling back along γ = (0 2)(1 3) moves the zero set to {0,1}.
        let st = MetricStructure::discrete_sets(4, &[set(4, &[2, 3])]).unwrap();
        let gamma = Perm::from_cycles(4, &[&[0, 2], &[1, 3]]).unwrap();
        assert_eq!(st.delta_set(&[0, 1], 0, Some(&gamma), 0, 1).unwrap(), r(0, 1));
        assert_eq!(st.delta_set(&[2, 3], 0, Some(&gamma), 0, 2).unwrap(), r(1, 1));
        assert!(st.delta_set(&[0], 0, Some(&Perm::identity(3)), 0, 1).is_err());
    }

    #[test]
    fn formulas_are_closed_under_max() {
        let dist = discrete_metric(2);
        let f = |name: &str, a: i64, b: i64| Formula {
            name: name.into(),
            values: vec![vec![r(a, 2)], vec![r(b, 2)]],
        };
        let st = MetricStructure::new(dist, vec![f("f", 0, 1), f("g", 1, 0), f("h", 0, 0)], None, None).unwrap();
        // max(f,g) is new; max with h adds nothing.
        assert_eq!(st.formulas().len(), 4);
        assert_eq!(st.formulas()[3].name, "max(f,g)");
        assert_eq!(st.formulas()[3].values, vec![vec![r(1, 2)], vec![r(1, 2)]]);
    }

    #[test]
    fn structure_validation() {
        let bad_triangle = vec![
            vec![r(0, 1), r(1, 1), r(0, 1)],
            vec![r(1, 1), r(0, 1), r(0, 1)],
            vec![r(0, 1), r(0, 1), r(0, 1)],
        ];
        assert!(MetricStructure::new(bad_triangle, vec![], None, None).is_err());
        let asym = vec![vec![r(0, 1), r(1, 1)], vec![r(1, 2), r(0, 1)]];
        assert!(MetricStructure::new(asym, vec![], None, None).is_err());
        let out_of_range = vec![vec![r(0, 1), r(3, 2)], vec![r(3, 2), r(0, 1)]];
        assert!(MetricStructure::new(out_of_range, vec![], None, None).is_err());
        let bad_group = GroupTable {
            mul: vec![vec![0, 1], vec![1, 1]],
            inv: vec![0, 1],
        };
        assert!(MetricStructure::new(discrete_metric(2), vec![], Some(bad_group), None).is_err());
        let st = MetricStructure::new(discrete_metric(2), vec![], None, None).unwrap();
        assert!(st.delta_group(&[0], 0, None, 0, 1).is_err());
    }

    #[test]
    fn enumeration_cap_is_enforced() {
        let st = MetricStructure::discrete_vectors(3, 3, &[SubspaceBasis::zero(3, 3)], 1024)
            .unwrap()
            .with_enumeration_cap(1000);
        let all: Vec<usize> = (0..27).collect();
        assert!(matches!(
            st.delta_vect(&all, 0, None, 0, 3),
            Err(Error::EnumerationCapExceeded(_))
        ));
    }

    #[test]
    fn set_reduction_matches_difference() {
        let st = MetricStructure::discrete_sets(4, &[set(4, &[2, 3])]).unwrap();
        assert_eq!(discrete_reduction(&st, Form::Set, &[1, 2], 0, 0).unwrap(), 1);
        assert_eq!(discrete_reduction(&st, Form::Set, &[0, 1, 2], 0, 0).unwrap(), 2);
    }
}
