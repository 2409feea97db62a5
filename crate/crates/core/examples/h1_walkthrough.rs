// The three-role hierarchy, ranked at a few values of `s`.
//
// Run with `cargo run --example h1_walkthrough`.

use rbac_ahp::{parse_hierarchy, rank_roles, AuthorizationQuery, PermissionRequest};

fn main() {
    let text =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/h1.rhf"))
            .expect("read h1.rhf");
    let graph = parse_hierarchy(&text).expect("valid hierarchy");

    for role in graph.roles() {
        let eff = graph.effective_permissions(role.as_str()).unwrap();
        let dr = graph.dominated_roles(role.as_str()).unwrap().len();
        println!("{role}: effective={eff:?} dr={dr}");
    }

    let need = PermissionRequest::parse(&["p1", "p2"]).unwrap();
    for s in [0.5, 1.0, 2.0] {
        let result = rank_roles(&graph, &AuthorizationQuery::new(need.clone()).with_s(s)).unwrap();
        print!("s={s}: {} {}", result.mode, result.selected);
        for score in &result.scores {
            print!("  {}={:.4}", score.role, score.probability);
        }
        println!();
    }

    // Every permission r2 holds: no excess, so the ranking is skipped.
    let exact = PermissionRequest::parse(&["p1", "p2", "p3", "p4"]).unwrap();
    let result = rank_roles(&graph, &AuthorizationQuery::new(exact)).unwrap();
    println!("full request: {} {}", result.mode, result.selected);
}
