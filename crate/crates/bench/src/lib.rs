//! Benchmark inputs shared by the criterion targets.

use crn_realize_core::{
    generate, net_reaction_data, GenSpec, NetReactionData, RatMatrix, TargetType,
};

/// The two-class Type I input with five source vertices.
pub fn type_one_input() -> NetReactionData {
    NetReactionData::new(
        RatMatrix::from_i64(&[&[1, 2, 3, 3, 3], &[0, 0, 0, 1, 2]]),
        RatMatrix::from_i64(&[&[1, -1, 0, 0, 0], &[0, 0, 1, 0, -1]]),
    )
    .expect("well-formed input")
}

/// `(Y, W)` of a generated system.
pub fn generated_input(target: TargetType, sizes: &[usize], seed: u64) -> NetReactionData {
    let sys = generate(&GenSpec::new(target, sizes.to_vec(), seed)).expect("satisfiable spec");
    net_reaction_data(&sys)
}
