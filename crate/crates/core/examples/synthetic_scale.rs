// Times ranking on layered synthetic hierarchies of growing size.

use std::time::Instant;

use rbac_ahp::{rank_roles, AuthorizationQuery, ExtendedCriterion, PermissionRequest, RoleGraph};

/// `n` roles in layers of ten; each role holds one permission and
/// dominates up to two roles of the next layer. The last role also holds
/// `p00000` so no candidate fits a bottom-layer request exactly.
fn layered(n: usize) -> RoleGraph {
    let mut b = RoleGraph::builder();
    for i in 0..n {
        b.permission(&format!("p{i:05}")).unwrap();
        b.role(&format!("r{i:05}")).unwrap();
        b.grant(&format!("r{i:05}"), &format!("p{i:05}")).unwrap();
    }
    b.grant(&format!("r{:05}", n - 1), "p00000").unwrap();
    for i in 0..n.saturating_sub(10) {
        for j in [i + 10, i + 10 + (i % 7) % (n - i - 10).max(1)] {
            let _ = b.dominates(&format!("r{i:05}"), &format!("r{j:05}"));
        }
    }
    b.build().unwrap()
}

fn main() {
    for n in [100, 400, 1600] {
        let t = Instant::now();
        let graph = layered(n);
        let built = t.elapsed();
        let need = PermissionRequest::parse(&[format!("p{:05}", n - 1)]).unwrap();
        let q = AuthorizationQuery::new(need).with_criterion(ExtendedCriterion::Availability, 1.0);
        let t = Instant::now();
        let result = rank_roles(&graph, &q).unwrap();
        println!(
            "n={n:<5} build {built:>10.2?} rank {:>10.2?} candidates {:<4} selected {}",
            t.elapsed(),
            result.scores.len(),
            result.selected
        );
    }
}
