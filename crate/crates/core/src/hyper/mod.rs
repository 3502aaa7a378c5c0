//! Reconstruction of a hyperelliptic curve from its expansions: the conic
//! `C` that the canonical map factors through, the function `h` with
//! `ℚ(X) = ℚ(C)(√h)`, and finally a Weierstrass model (even genus) or a
//! conic model `y² = H, Q = 0` (odd genus).

mod even;
mod odd;
mod sections;
mod verify;

pub use even::{pencil, step6_even_genus, EvenGenusResult};
pub use odd::{
    diagonalize_conic, parametrize_conic, parity_decomposition, projection_check, pullback, reduce_to_p1,
    step7_parity_split, OddGenusResult, Parametrization, ParityDecomposition, PointReduction,
};
pub use sections::{
    step1_ordered_basis, step2_trace_sections, step3_find_conic, step4_h_series, step5_express_h, Piece, PipelineState,
};
pub use verify::{image_of_point, model_series, recompute, verify, Check, ModelSeries, PointImage, Verification};
