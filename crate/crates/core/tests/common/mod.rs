//! Test-only hierarchy generators and an independent ranking oracle.
//!
//! The oracle never calls into the crate's model or AHP code. It recomputes
//! closures with plain set walks, builds every pairwise comparison matrix in
//! full, normalizes each column separately and averages rows.
#![allow(dead_code)]

use std::collections::{BTreeSet, HashSet};
use std::fmt::Write;

use rand::seq::SliceRandom;
use rand::Rng;

#[derive(Clone, Debug)]
pub struct RawHierarchy {
    pub roles: Vec<String>,
    pub perms: Vec<String>,
    /// (role, permission) indices.
    pub grants: BTreeSet<(usize, usize)>,
    /// (senior, junior) indices; always senior < junior, so acyclic.
    pub edges: BTreeSet<(usize, usize)>,
    pub danger: BTreeSet<usize>,
}

impl RawHierarchy {
    /// Random DAG with `1..=max_n` roles and `1..=max_m` permissions.
    pub fn random(rng: &mut impl Rng, max_n: usize, max_m: usize) -> Self {
        let n = rng.gen_range(1..=max_n);
        let m = rng.gen_range(1..=max_m);
        // Shuffled names so index order and lexicographic order disagree.
        let mut role_names: Vec<usize> = (0..n).collect();
        role_names.shuffle(rng);
        let roles = role_names.iter().map(|i| format!("role{i}")).collect();
        let perms = (0..m).map(|j| format!("perm{j}")).collect();
        let mut grants = BTreeSet::new();
        for r in 0..n {
            for p in 0..m {
                if rng.gen_bool(0.3) {
                    grants.insert((r, p));
                }
            }
        }
        let mut edges = BTreeSet::new();
        for s in 0..n {
            for j in s + 1..n {
                if rng.gen_bool(0.25) {
                    edges.insert((s, j));
                }
            }
        }
        let danger = (0..m).filter(|_| rng.gen_bool(0.2)).collect();
        Self {
            roles,
            perms,
            grants,
            edges,
            danger,
        }
    }

    /// Layered synthetic hierarchy for scaling runs: each role grants three
    /// permissions and dominates up to two roles further down.
    pub fn synthetic(n: usize, m: usize, rng: &mut impl Rng) -> Self {
        let roles = (0..n).map(|i| format!("role{i:05}")).collect();
        let perms = (0..m).map(|j| format!("perm{j:05}")).collect();
        let mut grants = BTreeSet::new();
        for r in 0..n {
            for _ in 0..3 {
                grants.insert((r, rng.gen_range(0..m)));
            }
        }
        let mut edges = BTreeSet::new();
        for s in 0..n {
            for _ in 0..2 {
                if s + 1 < n {
                    let j = rng.gen_range(s + 1..n.min(s + 50));
                    edges.insert((s, j));
                }
            }
        }
        let danger = (0..m).filter(|j| j % 10 == 0).collect();
        Self {
            roles,
            perms,
            grants,
            edges,
            danger,
        }
    }

    pub fn to_rhf(&self) -> String {
        let mut s = String::new();
        for p in &self.perms {
            writeln!(s, "permission {p}").unwrap();
        }
        for r in &self.roles {
            writeln!(s, "role {r}").unwrap();
        }
        for &(r, p) in &self.grants {
            writeln!(s, "grant {} {}", self.roles[r], self.perms[p]).unwrap();
        }
        for &(a, b) in &self.edges {
            writeln!(s, "dominates {} {}", self.roles[a], self.roles[b]).unwrap();
        }
        for &p in &self.danger {
            writeln!(s, "danger {}", self.perms[p]).unwrap();
        }
        s
    }

    /// Reflexive-transitive closure by depth-first search.
    pub fn dominated(&self, role: usize) -> HashSet<usize> {
        let mut seen = HashSet::from([role]);
        let mut stack = vec![role];
        while let Some(v) = stack.pop() {
            for &(s, j) in &self.edges {
                if s == v && seen.insert(j) {
                    stack.push(j);
                }
            }
        }
        seen
    }

    pub fn effective(&self, role: usize) -> HashSet<usize> {
        let reach = self.dominated(role);
        self.grants
            .iter()
            .filter(|(r, _)| reach.contains(r))
            .map(|&(_, p)| p)
            .collect()
    }

    pub fn direct_juniors(&self, role: usize) -> usize {
        self.edges.iter().filter(|(s, _)| *s == role).count()
    }

    /// Candidate role indices by direct set comparison.
    pub fn candidates(&self, pu: &HashSet<usize>) -> Vec<usize> {
        let mut c: Vec<usize> = (0..self.roles.len())
            .filter(|&r| pu.is_subset(&self.effective(r)))
            .collect();
        c.sort_by(|a, b| self.roles[*a].cmp(&self.roles[*b]));
        c
    }

    /// Random non-empty subset of some role's effective permissions.
    pub fn random_satisfiable_request(&self, rng: &mut impl Rng) -> Option<Vec<String>> {
        let holders: Vec<usize> = (0..self.roles.len())
            .filter(|&r| !self.effective(r).is_empty())
            .collect();
        let role = *holders.choose(rng)?;
        let eff: Vec<usize> = self.effective(role).into_iter().collect();
        let k = rng.gen_range(1..=eff.len());
        let mut picked: Vec<usize> = eff.choose_multiple(rng, k).copied().collect();
        picked.sort();
        Some(picked.into_iter().map(|p| self.perms[p].clone()).collect())
    }

    pub fn perm_indices(&self, names: &[String]) -> HashSet<usize> {
        names
            .iter()
            .map(|n| self.perms.iter().position(|p| p == n).unwrap())
            .collect()
    }
}

/// Full ratio matrix for cost scores: `M[i][j] = v[j] / v[i]`.
pub fn cost_matrix(v: &[f64]) -> Vec<Vec<f64>> {
    v.iter()
        .map(|vi| v.iter().map(|vj| vj / vi).collect())
        .collect()
}

/// Full matrix for benefit scores: `M[i][j] = v[i] / v[j]`.
pub fn benefit_matrix(v: &[f64]) -> Vec<Vec<f64>> {
    v.iter()
        .map(|vi| v.iter().map(|vj| vi / vj).collect())
        .collect()
}

/// Column `j` divided by its sum.
pub fn normalized_column(m: &[Vec<f64>], j: usize) -> Vec<f64> {
    let total: f64 = m.iter().map(|row| row[j]).sum();
    m.iter().map(|row| row[j] / total).collect()
}

/// Normalize every column separately, then average each row.
pub fn matrix_weights(m: &[Vec<f64>]) -> Vec<f64> {
    let k = m.len();
    let columns: Vec<Vec<f64>> = (0..k).map(|j| normalized_column(m, j)).collect();
    (0..k)
        .map(|i| columns.iter().map(|c| c[i]).sum::<f64>() / k as f64)
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub enum OracleRanking {
    Exact(String),
    Ranked {
        order: Vec<String>,
        probabilities: Vec<f64>,
    },
}

/// Extra criteria the oracle understands, mirroring the library's.
#[derive(Clone, Copy, Debug)]
pub enum OracleCriterion {
    Availability,
    Integrity,
    ManagerCost { alpha: f64, lambda: f64 },
}

/// Independent evaluation of the selection algorithm.
pub fn oracle_rank(
    h: &RawHierarchy,
    pu_names: &[String],
    s: f64,
    extra: &[(OracleCriterion, f64)],
) -> Option<OracleRanking> {
    let pu = h.perm_indices(pu_names);
    let cands = h.candidates(&pu);
    if cands.is_empty() {
        return None;
    }
    let dp: Vec<usize> = cands
        .iter()
        .map(|&r| h.effective(r).len() - pu.len())
        .collect();
    let dr: Vec<usize> = cands.iter().map(|&r| h.dominated(r).len()).collect();

    let exact: Vec<usize> = (0..cands.len()).filter(|&i| dp[i] == 0).collect();
    if !exact.is_empty() {
        let best = exact
            .into_iter()
            .min_by(|&a, &b| {
                dr[a]
                    .cmp(&dr[b])
                    .then(h.roles[cands[a]].cmp(&h.roles[cands[b]]))
            })
            .unwrap();
        return Some(OracleRanking::Exact(h.roles[cands[best]].clone()));
    }

    let as_f = |v: &[usize]| v.iter().map(|&x| x as f64).collect::<Vec<f64>>();
    let mut alternative_weights = vec![
        matrix_weights(&cost_matrix(&as_f(&dp))),
        matrix_weights(&cost_matrix(&as_f(&dr))),
    ];
    let mut first_row = vec![1.0, 1.0 / s];
    for &(c, pref) in extra {
        let w = match c {
            OracleCriterion::Availability => {
                let v: Vec<f64> = cands.iter().map(|&r| h.effective(r).len() as f64).collect();
                matrix_weights(&benefit_matrix(&v))
            }
            OracleCriterion::Integrity => {
                let v: Vec<f64> = cands
                    .iter()
                    .map(|&r| {
                        (h.effective(r)
                            .intersection(&h.danger.iter().copied().collect())
                            .count()
                            + 1) as f64
                    })
                    .collect();
                matrix_weights(&cost_matrix(&v))
            }
            OracleCriterion::ManagerCost { alpha, lambda } => {
                let v: Vec<f64> = cands
                    .iter()
                    .map(|&r| ((h.direct_juniors(r) + 1) as f64 * lambda).powf(alpha))
                    .collect();
                matrix_weights(&cost_matrix(&v))
            }
        };
        alternative_weights.push(w);
        first_row.push(pref);
    }
    // Criteria matrix completed from its first row: M[i][j] = t[j] / t[i].
    let criteria_matrix: Vec<Vec<f64>> = first_row
        .iter()
        .map(|ti| first_row.iter().map(|tj| tj / ti).collect())
        .collect();
    let criteria = matrix_weights(&criteria_matrix);

    let k = cands.len();
    let p: Vec<f64> = (0..k)
        .map(|i| {
            criteria
                .iter()
                .zip(&alternative_weights)
                .map(|(w, alt)| w * alt[i])
                .sum()
        })
        .collect();

    // Insertion sort with a tolerance on probability ties.
    let mut idx: Vec<usize> = (0..k).collect();
    let before = |a: usize, b: usize| -> bool {
        if (p[a] - p[b]).abs() > 1e-10 {
            return p[a] > p[b];
        }
        (dp[a], dr[a], &h.roles[cands[a]]) < (dp[b], dr[b], &h.roles[cands[b]])
    };
    for i in 1..k {
        let mut j = i;
        while j > 0 && before(idx[j], idx[j - 1]) {
            idx.swap(j, j - 1);
            j -= 1;
        }
    }
    Some(OracleRanking::Ranked {
        order: idx.iter().map(|&i| h.roles[cands[i]].clone()).collect(),
        probabilities: idx.iter().map(|&i| p[i]).collect(),
    })
}

pub const H1: &str = include_str!("../../examples/data/h1.rhf");
