// Pairwise matrices by hand: score-derived matrices are perfectly
// consistent, a hand-tuned one is not.

use rbac_ahp::ahp::{
    consistency_index, ideal_consistency_check, matrix_from_scores, normalize_weights,
    weights_from_scores, Orientation, PairwiseMatrix, ScoreVector,
};

fn main() {
    let excess = ScoreVector::from_counts(&[1, 3, 6]).unwrap();
    let m = matrix_from_scores(&excess, Orientation::Cost).unwrap();
    for row in m.rows() {
        println!("{row:.3?}");
    }
    let via_matrix = normalize_weights(&m);
    let closed_form = weights_from_scores(&excess, Orientation::Cost).unwrap();
    println!(
        "weights {:.4?} (closed form {:.4?})",
        via_matrix.values(),
        closed_form.values()
    );
    println!(
        "consistent: {}, CI = {:.2e}",
        ideal_consistency_check(&m, 1e-12),
        consistency_index(&m).unwrap()
    );

    let judged = PairwiseMatrix::new(vec![
        vec![1.0, 3.0, 5.0],
        vec![1.0 / 3.0, 1.0, 4.0],
        vec![1.0 / 5.0, 1.0 / 4.0, 1.0],
    ])
    .unwrap();
    println!(
        "hand-tuned: consistent {}, CI = {:.4}",
        ideal_consistency_check(&judged, 1e-12),
        consistency_index(&judged).unwrap()
    );
}
