// Adds availability, integrity and manager cost to the clinic ranking.

use rbac_ahp::{
    parse_hierarchy, rank_roles, AuthorizationQuery, ExtendedCriterion, PermissionRequest,
};

fn main() {
    let text = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/data/clinic.rhf"
    ))
    .unwrap();
    let graph = parse_hierarchy(&text).unwrap();
    let need = PermissionRequest::parse(&["records.read"]).unwrap();

    let base = AuthorizationQuery::new(need);
    let extended = base
        .clone()
        .with_criterion(ExtendedCriterion::Integrity, 0.5)
        .with_criterion(ExtendedCriterion::ManagerCost, 1.0)
        .with_alpha(2.0);

    for (label, q) in [("base", base), ("extended", extended)] {
        let result = rank_roles(&graph, &q).unwrap();
        println!("{label}: selected {}", result.selected);
        for s in &result.scores {
            println!(
                "  {:<10} p={:.4} dp={} dr={} {:?}",
                s.role.as_str(),
                s.probability,
                s.dp,
                s.dr,
                s.extended
            );
        }
    }
}
