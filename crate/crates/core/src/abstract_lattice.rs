//! Close-knit data given directly as finite tables.
//!
//! Elements are `0..size`. The meet table defines the semilattice; the family,
//! distances, increments and Γ are explicit. This is the only instantiation in
//! which several strong elements with different `n` values can occur, so it
//! exercises the full absorption loop of the engine.

use std::collections::{HashMap, VecDeque};
use std::hash::Hash;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::engine::{validate_conditions, CloseKnitInstance, Violation, ViolationKind};
use crate::error::{Error, Result};
use crate::poset::IndexValue;

pub const MAX_SIZE: usize = 256;

/// Raw tables as read from an instance file.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbstractTables {
    pub size: usize,
    pub meet: Vec<Vec<usize>>,
    pub family: Vec<usize>,
    /// `delta[s][a]`.
    pub delta: Vec<Vec<IndexValue>>,
    /// `increment[s][a]`.
    pub increment: Vec<Vec<usize>>,
    /// Each entry permutes the elements.
    pub gamma: Vec<Vec<usize>>,
    /// `family_action[g][a]`; derived from `gamma` when absent.
    pub family_action: Option<Vec<Vec<usize>>>,
}

#[derive(Clone, Debug)]
pub struct AbstractLattice {
    tables: AbstractTables,
    family_action: Vec<Vec<usize>>,
    order: Vec<Vec<bool>>,
    chain: Vec<Vec<u64>>,
}

fn is_permutation(p: &[usize], n: usize) -> bool {
    let mut seen = vec![false; n];
    p.len() == n && p.iter().all(|&x| x < n && !std::mem::replace(&mut seen[x], true))
}

impl AbstractLattice {
    /// Checks table shapes and ranges only; see [`AbstractLattice::violations`]
    /// for the close-knit conditions.
    pub fn from_tables(tables: AbstractTables) -> Result<Self> {
        let n = tables.size;
        let k = tables.family.len();
        if n == 0 {
            return Err(Error::Empty("abstract lattice has no elements"));
        }
        if n > MAX_SIZE {
            return Err(Error::ElementCapExceeded { cap: MAX_SIZE });
        }
        if k == 0 {
            return Err(Error::Empty("abstract family is empty"));
        }
        let square = |rows: &[Vec<usize>], cols: usize, name: &str| -> Result<()> {
            if rows.len() != n || rows.iter().any(|r| r.len() != cols) {
                return Err(Error::Shape(format!("{name} table must be {n} x {cols}")));
            }
            if rows.iter().flatten().any(|&x| x >= n) {
                return Err(Error::Invalid(format!(
                    "{name} table refers to an element outside 0..{n}"
                )));
            }
            Ok(())
        };
        square(&tables.meet, n, "meet")?;
        square(&tables.increment, k, "increment")?;
        if let Some(&f) = tables.family.iter().find(|&&f| f >= n) {
            return Err(Error::Invalid(format!("family member {f} outside 0..{n}")));
        }
        if tables.delta.len() != n || tables.delta.iter().any(|r| r.len() != k) {
            return Err(Error::Shape(format!("delta table must be {n} x {k}")));
        }
        let first = &tables.delta[0][0];
        if tables
            .delta
            .iter()
            .flatten()
            .any(|v| v.len() != first.len() || v.kind() != first.kind())
        {
            return Err(Error::Shape("delta values differ in length or level kind".into()));
        }
        if let Some(g) = tables.gamma.iter().find(|g| !is_permutation(g, n)) {
            return Err(Error::Invalid(format!(
                "gamma entry {g:?} is not a permutation of the elements"
            )));
        }
        let family_action = match &tables.family_action {
            Some(action) => {
                if action.len() != tables.gamma.len() || action.iter().any(|p| !is_permutation(p, k)) {
                    return Err(Error::Invalid(
                        "family_action must give one permutation of A per gamma entry".into(),
                    ));
                }
                action.clone()
            }
            None => derive_family_action(&tables)?,
        };
        let order: Vec<Vec<bool>> = (0..n)
            .map(|x| (0..n).map(|y| tables.meet[x][y] == x).collect())
            .collect();
        let chain = longest_chains(&order);
        Ok(AbstractLattice {
            tables,
            family_action,
            order,
            chain,
        })
    }

    pub fn tables(&self) -> &AbstractTables {
        &self.tables
    }

    pub fn size(&self) -> usize {
        self.tables.size
    }

    /// All violations of the semilattice laws, Γ-invariance and the close-knit conditions.
    pub fn violations(&self) -> Vec<Violation> {
        let n = self.size();
        let m = &self.tables.meet;
        let mut out = Vec::new();
        let mut law = |detail: String| {
            out.push(Violation {
                kind: ViolationKind::Associativity,
                detail,
            })
        };
        for x in 0..n {
            if m[x][x] != x {
                law(format!("meet({x},{x}) = {} is not idempotent", m[x][x]));
            }
            for y in 0..n {
                if m[x][y] != m[y][x] {
                    law(format!("meet({x},{y}) != meet({y},{x})"));
                }
                for z in 0..n {
                    if m[m[x][y]][z] != m[x][m[y][z]] {
                        law(format!("meet is not associative at ({x},{y},{z})"));
                    }
                }
            }
        }
        for (g, perm) in self.tables.gamma.iter().enumerate() {
            for x in 0..n {
                for y in 0..n {
                    if perm[m[x][y]] != m[perm[x]][perm[y]] {
                        out.push(Violation {
                            kind: ViolationKind::Equivariance,
                            detail: format!("gamma {g} does not preserve meet({x},{y})"),
                        });
                    }
                }
            }
        }
        if out.is_empty() {
            out.extend(validate_conditions(self, 0, 0).violations);
        }
        out
    }

    fn lub(&self, xs: &[usize]) -> Option<usize> {
        let uppers: Vec<usize> = (0..self.size())
            .filter(|&u| xs.iter().all(|&x| self.order[x][u]))
            .collect();
        uppers
            .iter()
            .copied()
            .find(|&u| uppers.iter().all(|&v| self.order[u][v]))
    }

    pub fn leq_elements(&self, x: usize, y: usize) -> bool {
        self.order[x][y]
    }

    /// Elements fixed by every gamma entry.
    pub fn fixed_points(&self) -> Vec<usize> {
        (0..self.size())
            .filter(|&x| self.tables.gamma.iter().all(|g| g[x] == x))
            .collect()
    }
}

fn derive_family_action(tables: &AbstractTables) -> Result<Vec<Vec<usize>>> {
    let mut position = HashMap::new();
    for (a, &f) in tables.family.iter().enumerate() {
        if position.insert(f, a).is_some() {
            return Err(Error::Invalid(format!(
                "family repeats element {f}; give family_action explicitly"
            )));
        }
    }
    tables
        .gamma
        .iter()
        .enumerate()
        .map(|(g, perm)| {
            tables
                .family
                .iter()
                .map(|&f| {
                    position.get(&perm[f]).copied().ok_or_else(|| {
                        Error::EquivarianceViolation(format!("gamma {g} maps family member {f} outside the family"))
                    })
                })
                .collect()
        })
        .collect()
}

/// `chain[x][y]`: length of the longest chain from `x` up to `y`, or 0 when `x ≰ y`.
fn longest_chains(order: &[Vec<bool>]) -> Vec<Vec<u64>> {
    let n = order.len();
    let mut by_height: Vec<usize> = (0..n).collect();
    by_height.sort_by_key(|&x| (0..n).filter(|&y| order[y][x]).count());
    let mut chain = vec![vec![0u64; n]; n];
    for x in 0..n {
        for &y in &by_height {
            if x == y || !order[x][y] {
                continue;
            }
            chain[x][y] = by_height
                .iter()
                .filter(|&&c| c != y && order[x][c] && order[c][y])
                .map(|&c| chain[x][c] + 1)
                .max()
                .unwrap_or(1);
        }
    }
    chain
}

/// Parses and fully validates tables; the first violation is returned as an error.
pub fn load_abstract(tables: AbstractTables) -> Result<AbstractLattice> {
    let lattice = AbstractLattice::from_tables(tables)?;
    match lattice.violations().into_iter().next() {
        Some(v) => Err(v.into_error()),
        None => Ok(lattice),
    }
}

impl CloseKnitInstance for AbstractLattice {
    type Elem = usize;

    fn family(&self) -> &[usize] {
        &self.tables.family
    }

    fn meet(&self, x: &usize, y: &usize) -> usize {
        self.tables.meet[*x][*y]
    }

    fn leq(&self, x: &usize, y: &usize) -> bool {
        self.order[*x][*y]
    }

    fn delta(&self, s: &usize, a: usize) -> IndexValue {
        self.tables.delta[*s][a].clone()
    }

    fn increment(&self, s: &usize, a: usize) -> usize {
        self.tables.increment[*s][a]
    }

    fn gamma_len(&self) -> usize {
        self.tables.gamma.len()
    }

    fn act(&self, g: usize, x: &usize) -> usize {
        self.tables.gamma[g][*x]
    }

    fn act_index(&self, g: usize, a: usize) -> usize {
        self.family_action[g][a]
    }

    /// Length of the longest chain from `x ∧ y` up to `x`.
    fn measure(&self, x: &usize, y: &usize) -> u64 {
        self.chain[self.meet(x, y)][*x]
    }

    /// The least upper bound of the family, offered only when every increment
    /// stays below `s ∨ f_a`; arbitrary increment tables give no upper bound.
    fn join_span(&self) -> Option<usize> {
        let t = &self.tables;
        let bounded = (0..self.size()).all(|x| {
            t.family
                .iter()
                .zip(&t.increment[x])
                .all(|(&f, &inc)| self.lub(&[x, f]).is_some_and(|j| self.order[inc][j]))
        });
        if bounded {
            self.lub(&t.family)
        } else {
            None
        }
    }

    fn all_elements(&self) -> Option<Vec<usize>> {
        Some((0..self.size()).collect())
    }
}

/// Tabulates a concrete instance over `elements`, which must be closed under
/// meet, increments and Γ.
pub fn tabulate<I>(inst: &I, elements: &[I::Elem]) -> Result<AbstractTables>
where
    I: CloseKnitInstance,
    I::Elem: Hash,
{
    let index: HashMap<&I::Elem, usize> = elements.iter().enumerate().map(|(i, e)| (e, i)).collect();
    let lookup = |e: &I::Elem| -> Result<usize> {
        index
            .get(e)
            .copied()
            .ok_or_else(|| Error::Invalid(format!("{e:?} is not among the tabulated elements")))
    };
    let k = inst.family().len();
    let meet = elements
        .iter()
        .map(|x| elements.iter().map(|y| lookup(&inst.meet(x, y))).collect())
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let increment = elements
        .iter()
        .map(|s| (0..k).map(|a| lookup(&inst.increment(s, a))).collect())
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let delta = elements
        .iter()
        .map(|s| (0..k).map(|a| inst.delta(s, a)).collect())
        .collect();
    let gamma = (0..inst.gamma_len())
        .map(|g| elements.iter().map(|x| lookup(&inst.act(g, x))).collect())
        .collect::<Result<Vec<Vec<usize>>>>()?;
    let family_action = (0..inst.gamma_len())
        .map(|g| (0..k).map(|a| inst.act_index(g, a)).collect())
        .collect();
    Ok(AbstractTables {
        size: elements.len(),
        meet,
        family: inst.family().iter().map(&lookup).collect::<Result<_>>()?,
        delta,
        increment,
        gamma,
        family_action: Some(family_action),
    })
}

/// Draws a random valid instance with at most `max_size` elements and
/// `max_family` family members.
///
/// The lattice is the down-set lattice of a random poset on at most four
/// points, Γ is generated by a random order automorphism, and with
/// `c_a` an equivariant choice of elements the data are
/// `s^a = s ∪ c_a` and `delta(s, a)` = weighted sizes of `s ∖ c_a` on
/// Γ-invariant blocks of points. Candidates that fail validation are redrawn.
pub fn random_instance<R: Rng>(rng: &mut R, max_size: usize, max_family: usize) -> AbstractLattice {
    loop {
        if let Some(lattice) = try_random_instance(rng, max_size, max_family) {
            return lattice;
        }
    }
}

fn try_random_instance<R: Rng>(rng: &mut R, max_size: usize, max_family: usize) -> Option<AbstractLattice> {
    let k = rng.gen_range(1..=4usize);
    // below[i] is a bitmask of the points strictly below i.
    let mut below = vec![0u32; k];
    for j in 0..k {
        for i in 0..j {
            if rng.gen_bool(0.35) {
                below[j] |= 1 << i | below[i];
            }
        }
    }
    for j in 0..k {
        for i in 0..k {
            if below[j] >> i & 1 == 1 {
                below[j] |= below[i];
            }
        }
    }
    let mut elements: Vec<u32> = (0..1u32 << k)
        .filter(|&m| (0..k).all(|i| m >> i & 1 == 0 || below[i] & !m == 0))
        .collect();
    if elements.len() > max_size {
        return None;
    }
    elements.sort_by_key(|m| (m.count_ones(), *m));
    let position: HashMap<u32, usize> = elements.iter().enumerate().map(|(i, &m)| (m, i)).collect();

    // Order automorphisms of the poset.
    let mut autos: Vec<Vec<usize>> = Vec::new();
    permutations(k, &mut |p: &[usize]| {
        let preserves = (0..k).all(|i| (0..k).all(|j| (below[j] >> i & 1) == (below[p[j]] >> p[i] & 1)));
        if preserves {
            autos.push(p.to_vec());
        }
    });
    let map_mask =
        |p: &[usize], m: u32| -> u32 { (0..k).filter(|&i| m >> i & 1 == 1).fold(0, |acc, i| acc | 1 << p[i]) };
    let gamma_points: Vec<Vec<usize>> = (0..rng.gen_range(0..=2))
        .map(|_| autos.choose(rng).expect("identity is an automorphism").clone())
        .collect();
    let gamma: Vec<Vec<usize>> = gamma_points
        .iter()
        .map(|p| elements.iter().map(|&m| position[&map_mask(p, m)]).collect())
        .collect();

    // Family: orbit of up to three random seeds.
    let seeds: Vec<usize> = (0..rng.gen_range(1..=3))
        .map(|_| rng.gen_range(0..elements.len()))
        .collect();
    let (family, family_action) = element_orbits(&seeds, &gamma)?;
    if family.len() > max_family {
        return None;
    }

    // Equivariant c_a: choose for one index per orbit and propagate.
    let mut c: Vec<Option<usize>> = vec![None; family.len()];
    for start in 0..family.len() {
        if c[start].is_some() {
            continue;
        }
        let choice = if rng.gen_bool(0.7) {
            rng.gen_range(0..elements.len())
        } else {
            family[start]
        };
        let mut queue = VecDeque::from([(start, choice)]);
        while let Some((a, x)) = queue.pop_front() {
            match c[a] {
                Some(y) if y == x => continue,
                Some(_) => return None,
                None => c[a] = Some(x),
            }
            for (g, perm) in gamma.iter().enumerate() {
                queue.push_back((family_action[g][a], perm[x]));
            }
        }
    }
    let c: Vec<u32> = c
        .into_iter()
        .map(|x| elements[x.expect("every index assigned")])
        .collect();

    // Γ-invariant blocks of points with positive weights, one coordinate per block.
    let mut block_of: Vec<usize> = (0..k).collect();
    for p in &gamma_points {
        for i in 0..k {
            let (a, b) = (block_of[i], block_of[p[i]]);
            if a != b {
                for x in block_of.iter_mut() {
                    if *x == b {
                        *x = a;
                    }
                }
            }
        }
    }
    let mut blocks: Vec<usize> = block_of.clone();
    blocks.sort_unstable();
    blocks.dedup();
    if blocks.len() > 1 && rng.gen_bool(0.5) {
        // A single coordinate: totally ordered distances.
        for x in block_of.iter_mut() {
            *x = blocks[0];
        }
        blocks.truncate(1);
    }
    let weight: HashMap<usize, u64> = blocks.iter().map(|&b| (b, rng.gen_range(1..=2))).collect();
    let cap: u64 = (0..k).map(|i| weight[&block_of[i]]).sum();

    let delta = elements
        .iter()
        .map(|&s| {
            c.iter()
                .map(|&ca| {
                    let rest = s & !ca;
                    let coords = blocks
                        .iter()
                        .map(|&b| {
                            (0..k)
                                .filter(|&i| rest >> i & 1 == 1 && block_of[i] == b)
                                .map(|_| weight[&b])
                                .sum()
                        })
                        .collect();
                    IndexValue::nat(cap, coords).expect("weighted counts are bounded by the cap")
                })
                .collect()
        })
        .collect();
    let increment = elements
        .iter()
        .map(|&s| c.iter().map(|&ca| position[&(s | ca)]).collect())
        .collect();
    let meet = elements
        .iter()
        .map(|&x| elements.iter().map(|&y| position[&(x & y)]).collect())
        .collect();
    let tables = AbstractTables {
        size: elements.len(),
        meet,
        family,
        delta,
        increment,
        gamma,
        family_action: Some(family_action),
    };
    load_abstract(tables).ok()
}

fn element_orbits(seeds: &[usize], gamma: &[Vec<usize>]) -> Option<(Vec<usize>, Vec<Vec<usize>>)> {
    let closed = crate::engine::orbit_closure(seeds, gamma.len(), |g, &x| gamma[g][x], usize::MAX).ok()?;
    Some((closed.members, closed.action))
}

fn permutations(k: usize, visit: &mut impl FnMut(&[usize])) {
    fn go(p: &mut Vec<usize>, used: &mut Vec<bool>, k: usize, visit: &mut impl FnMut(&[usize])) {
        if p.len() == k {
            visit(p);
            return;
        }
        for x in 0..k {
            if !used[x] {
                used[x] = true;
                p.push(x);
                go(p, used, k, visit);
                p.pop();
                used[x] = false;
            }
        }
    }
    go(&mut Vec::with_capacity(k), &mut vec![false; k], k, visit);
}
