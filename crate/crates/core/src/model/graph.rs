use std::collections::{BTreeSet, HashMap};

use super::{BitSet, HierarchyError, PermissionId, RoleId};

/// Immutable role hierarchy with precomputed closures.
///
/// Roles and permissions are frozen into lexicographic index orders at
/// construction. Those orders index every bit vector held by the graph, so
/// permission-set inclusion and closure sizes are word operations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RoleGraph {
    roles: Vec<RoleId>,
    role_index: HashMap<RoleId, usize>,
    permissions: Vec<PermissionId>,
    permission_index: HashMap<PermissionId, usize>,
    /// Direct grants, indexed by role; bits over the permission universe.
    grants: Vec<BitSet>,
    /// Direct strict dominance: `juniors[senior]`, sorted and deduplicated.
    juniors: Vec<Vec<usize>>,
    danger: BitSet,
    /// Union of grants over each role's dominated set.
    effective: Vec<BitSet>,
    /// Reflexive-transitive dominance closure; bits over the role universe.
    dominated: Vec<BitSet>,
}

/// Incremental construction of a [`RoleGraph`].
///
/// Each directive is checked as it is added, so callers that want to report
/// every problem (the RHF checker) can record an error and keep going.
#[derive(Clone, Debug, Default)]
pub struct RoleGraphBuilder {
    roles: BTreeSet<RoleId>,
    permissions: BTreeSet<PermissionId>,
    grants: BTreeSet<(RoleId, PermissionId)>,
    dominance: BTreeSet<(RoleId, RoleId)>,
    danger: BTreeSet<PermissionId>,
}

impl RoleGraphBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn permission(&mut self, id: &str) -> Result<&mut Self, HierarchyError> {
        let id = PermissionId::new(id)?;
        if !self.permissions.insert(id.clone()) {
            return Err(HierarchyError::DuplicateDeclaration {
                line: None,
                what: "permission",
                id: id.to_string(),
            });
        }
        Ok(self)
    }

    pub fn role(&mut self, id: &str) -> Result<&mut Self, HierarchyError> {
        let id = RoleId::new(id)?;
        if !self.roles.insert(id.clone()) {
            return Err(HierarchyError::DuplicateDeclaration {
                line: None,
                what: "role",
                id: id.to_string(),
            });
        }
        Ok(self)
    }

    pub fn grant(&mut self, role: &str, permission: &str) -> Result<&mut Self, HierarchyError> {
        let role = self.declared_role(role)?;
        let permission = self.declared_permission(permission)?;
        if !self.grants.insert((role.clone(), permission.clone())) {
            return Err(HierarchyError::DuplicateDeclaration {
                line: None,
                what: "grant",
                id: format!("{role} {permission}"),
            });
        }
        Ok(self)
    }

    pub fn dominates(&mut self, senior: &str, junior: &str) -> Result<&mut Self, HierarchyError> {
        let senior = self.declared_role(senior)?;
        let junior = self.declared_role(junior)?;
        if !self.dominance.insert((senior.clone(), junior.clone())) {
            return Err(HierarchyError::DuplicateDeclaration {
                line: None,
                what: "dominance",
                id: format!("{senior} {junior}"),
            });
        }
        Ok(self)
    }

    pub fn danger(&mut self, permission: &str) -> Result<&mut Self, HierarchyError> {
        let permission = self.declared_permission(permission)?;
        if !self.danger.insert(permission.clone()) {
            return Err(HierarchyError::DuplicateDeclaration {
                line: None,
                what: "danger",
                id: permission.to_string(),
            });
        }
        Ok(self)
    }

    fn declared_role(&self, id: &str) -> Result<RoleId, HierarchyError> {
        let id = RoleId::new(id)?;
        if self.roles.contains(&id) {
            Ok(id)
        } else {
            Err(HierarchyError::UnknownReference {
                line: None,
                what: "role",
                id: id.to_string(),
            })
        }
    }

    fn declared_permission(&self, id: &str) -> Result<PermissionId, HierarchyError> {
        let id = PermissionId::new(id)?;
        if self.permissions.contains(&id) {
            Ok(id)
        } else {
            Err(HierarchyError::UnknownReference {
                line: None,
                what: "permission",
                id: id.to_string(),
            })
        }
    }

    /// Freezes the index orders, rejects dominance cycles and computes closures.
    pub fn build(&self) -> Result<RoleGraph, HierarchyError> {
        let roles: Vec<RoleId> = self.roles.iter().cloned().collect();
        let permissions: Vec<PermissionId> = self.permissions.iter().cloned().collect();
        let role_index: HashMap<RoleId, usize> = roles
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, r)| (r, i))
            .collect();
        let permission_index: HashMap<PermissionId, usize> = permissions
            .iter()
            .cloned()
            .enumerate()
            .map(|(i, p)| (p, i))
            .collect();
        let (n, m) = (roles.len(), permissions.len());

        let mut grants = vec![BitSet::new(m); n];
        for (r, p) in &self.grants {
            grants[role_index[r]].insert(permission_index[p]);
        }
        let mut juniors = vec![Vec::new(); n];
        for (s, j) in &self.dominance {
            juniors[role_index[s]].push(role_index[j]);
        }
        // BTreeSet iteration already yields each senior's juniors in order.
        let mut danger = BitSet::new(m);
        for p in &self.danger {
            danger.insert(permission_index[p]);
        }

        let order = topological_order(&juniors).map_err(|cycle| HierarchyError::Cycle {
            path: cycle.into_iter().map(|i| roles[i].to_string()).collect(),
        })?;

        let mut effective = grants.clone();
        let mut dominated: Vec<BitSet> = (0..n)
            .map(|i| {
                let mut s = BitSet::new(n);
                s.insert(i);
                s
            })
            .collect();
        // Juniors come after seniors in `order`; walk it backwards.
        for &senior in order.iter().rev() {
            for &junior in &juniors[senior] {
                let (eff_j, dom_j) = (effective[junior].clone(), dominated[junior].clone());
                effective[senior].union_with(&eff_j);
                dominated[senior].union_with(&dom_j);
            }
        }

        Ok(RoleGraph {
            roles,
            role_index,
            permissions,
            permission_index,
            grants,
            juniors,
            danger,
            effective,
            dominated,
        })
    }
}

/// Kahn's algorithm over senior → junior edges. On failure returns one cycle
/// as a closed path `a -> b -> ... -> a`.
fn topological_order(juniors: &[Vec<usize>]) -> Result<Vec<usize>, Vec<usize>> {
    let n = juniors.len();
    let mut indegree = vec![0usize; n];
    let mut seniors = vec![Vec::new(); n];
    for (s, js) in juniors.iter().enumerate() {
        for &j in js {
            indegree[j] += 1;
            seniors[j].push(s);
        }
    }
    let mut queue: Vec<usize> = (0..n).filter(|&i| indegree[i] == 0).collect();
    let mut order = Vec::with_capacity(n);
    while let Some(v) = queue.pop() {
        order.push(v);
        for &j in &juniors[v] {
            indegree[j] -= 1;
            if indegree[j] == 0 {
                queue.push(j);
            }
        }
    }
    if order.len() == n {
        return Ok(order);
    }

    // Every leftover node has a leftover senior; walk seniors until a repeat.
    let start = (0..n).find(|&i| indegree[i] > 0).expect("leftover node");
    let mut seen = vec![usize::MAX; n];
    let mut walk = Vec::new();
    let mut v = start;
    while seen[v] == usize::MAX {
        seen[v] = walk.len();
        walk.push(v);
        v = *seniors[v]
            .iter()
            .find(|&&s| indegree[s] > 0)
            .expect("leftover senior");
    }
    let mut cycle: Vec<usize> = walk[seen[v]..].to_vec();
    cycle.reverse();
    let first = cycle[0];
    cycle.push(first);
    Err(cycle)
}

impl RoleGraph {
    pub fn builder() -> RoleGraphBuilder {
        RoleGraphBuilder::new()
    }

    /// Roles in lexicographic order.
    pub fn roles(&self) -> &[RoleId] {
        &self.roles
    }

    /// Permissions in lexicographic order; bit `j` of every permission set is
    /// `permissions()[j]`.
    pub fn permissions(&self) -> &[PermissionId] {
        &self.permissions
    }

    pub fn role_count(&self) -> usize {
        self.roles.len()
    }

    pub fn permission_count(&self) -> usize {
        self.permissions.len()
    }

    pub fn role_index(&self, role: &str) -> Result<usize, HierarchyError> {
        self.role_index
            .get(role)
            .copied()
            .ok_or_else(|| HierarchyError::UnknownRole(role.to_string()))
    }

    pub fn permission_index(&self, permission: &str) -> Result<usize, HierarchyError> {
        self.permission_index
            .get(permission)
            .copied()
            .ok_or_else(|| HierarchyError::UnknownPermission(permission.to_string()))
    }

    pub fn direct_grants(&self, role: &str) -> Result<BTreeSet<PermissionId>, HierarchyError> {
        Ok(self.permission_names(&self.grants[self.role_index(role)?]))
    }

    /// Direct grants unioned over every dominated role, the role itself included.
    pub fn effective_permissions(
        &self,
        role: &str,
    ) -> Result<BTreeSet<PermissionId>, HierarchyError> {
        Ok(self.permission_names(&self.effective[self.role_index(role)?]))
    }

    /// Reflexive-transitive closure of direct dominance; always contains `role`.
    pub fn dominated_roles(&self, role: &str) -> Result<BTreeSet<RoleId>, HierarchyError> {
        let i = self.role_index(role)?;
        Ok(self.dominated[i]
            .iter()
            .map(|j| self.roles[j].clone())
            .collect())
    }

    /// Distinct direct juniors of `role`, the role itself excluded.
    pub fn direct_subordinates_count(&self, role: &str) -> Result<usize, HierarchyError> {
        Ok(self.juniors[self.role_index(role)?].len())
    }

    /// Roles whose effective permissions include every requested permission,
    /// in lexicographic order.
    pub fn candidate_roles(
        &self,
        request: &PermissionRequest,
    ) -> Result<Vec<RoleId>, HierarchyError> {
        let wanted = request.to_bits(self)?;
        let found: Vec<RoleId> = self
            .effective
            .iter()
            .enumerate()
            .filter(|(_, eff)| wanted.is_subset(eff))
            .map(|(i, _)| self.roles[i].clone())
            .collect();
        if found.is_empty() {
            Err(HierarchyError::NoCandidate)
        } else {
            Ok(found)
        }
    }

    pub fn danger_permissions(&self) -> BTreeSet<PermissionId> {
        self.permission_names(&self.danger)
    }

    /// Direct dominance pairs `(senior, junior)` in lexicographic order.
    pub fn dominance_edges(&self) -> impl Iterator<Item = (&RoleId, &RoleId)> + '_ {
        self.juniors
            .iter()
            .enumerate()
            .flat_map(move |(s, js)| js.iter().map(move |&j| (&self.roles[s], &self.roles[j])))
    }

    /// Direct grants `(role, permission)` in lexicographic order.
    pub fn grant_pairs(&self) -> impl Iterator<Item = (&RoleId, &PermissionId)> + '_ {
        self.grants.iter().enumerate().flat_map(move |(r, bits)| {
            bits.iter()
                .map(move |p| (&self.roles[r], &self.permissions[p]))
        })
    }

    pub(crate) fn effective_bits(&self, role: usize) -> &BitSet {
        &self.effective[role]
    }

    pub(crate) fn dominated_count(&self, role: usize) -> usize {
        self.dominated[role].count()
    }

    pub(crate) fn junior_count(&self, role: usize) -> usize {
        self.juniors[role].len()
    }

    pub(crate) fn direct_grant_count(&self, role: usize) -> usize {
        self.grants[role].count()
    }

    pub(crate) fn danger_bits(&self) -> &BitSet {
        &self.danger
    }

    pub(crate) fn is_granted_anywhere(&self, permission: usize) -> bool {
        self.grants.iter().any(|g| g.contains(permission))
    }

    fn permission_names(&self, bits: &BitSet) -> BTreeSet<PermissionId> {
        bits.iter().map(|p| self.permissions[p].clone()).collect()
    }
}

/// The permission set a user asks for. Non-empty; membership in a particular
/// graph is checked when the request is evaluated against it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PermissionRequest {
    required: BTreeSet<PermissionId>,
}

impl PermissionRequest {
    pub fn new(required: impl IntoIterator<Item = PermissionId>) -> Result<Self, HierarchyError> {
        let required: BTreeSet<PermissionId> = required.into_iter().collect();
        if required.is_empty() {
            return Err(HierarchyError::EmptyRequest);
        }
        Ok(Self { required })
    }

    pub fn parse<S: AsRef<str>>(ids: &[S]) -> Result<Self, HierarchyError> {
        let ids = ids
            .iter()
            .map(|s| PermissionId::new(s.as_ref()))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(ids)
    }

    pub fn required(&self) -> &BTreeSet<PermissionId> {
        &self.required
    }

    pub fn len(&self) -> usize {
        self.required.len()
    }

    pub fn is_empty(&self) -> bool {
        self.required.is_empty()
    }

    /// The request as a bit vector over `graph`'s permission ordering.
    pub fn to_bits(&self, graph: &RoleGraph) -> Result<BitSet, HierarchyError> {
        let mut bits = BitSet::new(graph.permission_count());
        for p in &self.required {
            bits.insert(graph.permission_index(p.as_str())?);
        }
        Ok(bits)
    }
}
