// Builds a hierarchy in code, prints its canonical text form and
// shows what validation reports for a broken file.

use rbac_ahp::{check_hierarchy, parse_hierarchy, RoleGraph};

fn main() {
    let mut b = RoleGraph::builder();
    b.permission("orders.read").unwrap();
    b.permission("orders.refund").unwrap();
    b.permission("reports.export").unwrap();
    b.role("clerk").unwrap();
    b.role("supervisor").unwrap();
    b.grant("clerk", "orders.read").unwrap();
    b.grant("supervisor", "orders.refund").unwrap();
    b.dominates("supervisor", "clerk").unwrap();
    b.danger("orders.refund").unwrap();
    let graph = b.build().unwrap();

    let text = graph.to_rhf();
    print!("{text}");
    assert_eq!(parse_hierarchy(&text).unwrap(), graph);

    // reports.export is never granted: a warning, not an error.
    let outcome = check_hierarchy(&text);
    for issue in &outcome.report.issues {
        println!("{:?} {} {}", issue.severity, issue.code, issue.message);
    }

    let broken = "role a\nrole a\ngrant a nowhere\ndominates a b\n";
    let outcome = check_hierarchy(broken);
    assert!(outcome.graph.is_none());
    for issue in outcome.report.errors() {
        println!("{}: {}", issue.code, issue.message);
    }

    let cyclic = std::fs::read_to_string(concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/examples/data/cyclic.rhf"
    ))
    .unwrap();
    println!("{}", parse_hierarchy(&cyclic).unwrap_err());
}
