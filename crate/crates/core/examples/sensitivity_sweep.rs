// Sweeps `s` on a log grid and reports where the ranking flips.

use rbac_ahp::authorizer::{s_grid, GridScale};
use rbac_ahp::{parse_hierarchy, sensitivity_sweep, AuthorizationQuery, PermissionRequest};

fn main() {
    let text =
        std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/data/h1.rhf"))
            .unwrap();
    let graph = parse_hierarchy(&text).unwrap();
    let query = AuthorizationQuery::new(PermissionRequest::parse(&["p1", "p2"]).unwrap());

    let grid = s_grid(0.1, 10.0, 11, GridScale::Log).unwrap();
    let sweep = sensitivity_sweep(&graph, &query, &grid).unwrap();
    for (s, r) in sweep.grid.iter().zip(&sweep.rankings) {
        println!("s={s:<8.4} selected {}", r.selected);
    }
    for c in &sweep.change_points {
        println!(
            "flip between {:.4} and {:.4}: {:?} -> {:?}",
            c.s_before, c.s_after, c.order_before, c.order_after
        );
    }
}
