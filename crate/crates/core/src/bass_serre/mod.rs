//! Segment indices in the Bass–Serre tree and finite balls of the complex `X_{(A,λ)}`.

mod ball;
mod index;
mod skeleton;

pub use ball::{
    build_ball, build_ball_with, build_metric_ball, build_metric_ball_with, BallShape, Cell, ComplexBall, LinePoint,
    Strip, TreeLink, TreeNode, VerticalEdge,
};
pub use index::{
    concat_indices, fixes_segment, reverse_index, segment_index, segment_index_brute_force, IndexSequence,
};
pub use skeleton::{rooted_isomorphism, ColoredGraph};
