//! Reference frames used by the regression suite and the CLI.

use crate::frames::Frame;
use crate::ratlin::rat;
use crate::subspaces::Subspace;

const M5_10: [&[i64]; 5] = [
    &[ 1,  0,  0,  0,  0,  6,  4,  2, 11,  0],
    &[ 0,  1,  0,  0,  0, 13, 10,  8,  0,  3],
    &[ 0,  0,  1,  0,  0,  7,  7,  0,  9,  8],
    &[ 0,  0,  0,  1,  0, 16,  0,  8, 30, 13],
    &[ 0,  0,  0,  0,  1,  0,  4, 12, 14, 18],
];

const M5_11: [&[i64]; 5] = [
    &[ 1,  0,  0,  0,  0,  5,  0,  3, 35,  7,  0],
    &[ 0,  1,  0,  0,  0, 18,  0, 14, 27,  0,  2],
    &[ 0,  0,  1,  0,  0,  0, 23,  5,  0,  1, 14],
    &[ 0,  0,  0,  1,  0,  0,  8,  0, 14,  7, 14],
    &[ 0,  0,  0,  0,  1,  0,  0,  3, 30,  3, 14],
];

const M5_12: [&[i64]; 5] = [
    &[ 1,  0,  0,  0,  0,  7,  0, 10, 10, 11,  0,  0],
    &[ 0,  1,  0,  0,  0,  4,  0,  7, 16,  0, 15,  0],
    &[ 0,  0,  1,  0,  0,  0, 16,  2,  0,  2,  3,  0],
    &[ 0,  0,  0,  1,  0,  0,  1,  0, 23,  3,  0,  9],
    &[ 0,  0,  0,  0,  1,  0,  0, 12,  2, 11,  0,  2],
];

const M5_13: [&[i64]; 5] = [
    &[ 1,  0,  0,  0,  0,  6,  0,  4, 12, 16,  0,  0,  0],
    &[ 0,  1,  0,  0,  0,  6,  0,  8,  5,  0,  0, 15,  0],
    &[ 0,  0,  1,  0,  0,  0,  9,  5,  0,  0, 11, 12,  0],
    &[ 0,  0,  0,  1,  0,  0, 16,  0,  6,  1,  0,  0,  8],
    &[ 0,  0,  0,  0,  1,  0,  0,  7,  6,  0, 10,  0,  9],
];

const M5_14: [&[i64]; 5] = [
    &[ 1,  0,  0,  0,  0, 11,  0, 20,  0, 16,  4,  0,  0,  0],
    &[ 0,  1,  0,  0,  0,  5,  0,  0,  1, 16,  0,  0,  4,  0],
    &[ 0,  0,  1,  0,  0,  0,  3,  6,  0,  0,  0, 13,  8,  0],
    &[ 0,  0,  0,  1,  0,  0, 17,  0,  0,  8,  8,  0,  0,  4],
    &[ 0,  0,  0,  0,  1,  0,  0,  0,  1,  2,  0,  1,  0,  3],
];

const M5_15: [&[i64]; 5] = [
    &[ 1,  0,  0,  0,  0, 12,  0,  4,  0,  7,  0, 13,  0,  0,  0],
    &[ 0,  1,  0,  0,  0, 17,  0,  0,  3,  0, 10,  0,  0,  2,  0],
    &[ 0,  0,  1,  0,  0,  0,  1,  8,  0,  0,  0,  0, 12, 17,  0],
    &[ 0,  0,  0,  1,  0,  0,  3,  0,  0,  0,  1, 15,  0,  0,  2],
    &[ 0,  0,  0,  0,  1,  0,  0,  0,  3,  1,  0,  0, 13,  0, 18],
];

/// The six explicit exact PR frames in `R^5` of lengths 10 through 15, as
/// `(N, frame)` pairs. Columns are the frame vectors.
pub fn reference_frames_r5() -> Vec<(usize, Frame)> {
    [&M5_10, &M5_11, &M5_12, &M5_13, &M5_14, &M5_15]
        .iter()
        .map(|rows| {
            let f = Frame::from_i64_rows(&rows[..]).expect("reference matrices span");
            (f.len(), f)
        })
        .collect()
}

/// The reference frame of length `len` in `R^5`, if there is one.
pub fn reference_frame_r5(len: usize) -> Option<Frame> {
    reference_frames_r5().into_iter().find(|(n, _)| *n == len).map(|(_, f)| f)
}

/// `{e1, e2, e3, e1+e2, e1+e2+e3}` in `R^3`.
pub fn r3_example() -> Frame {
    Frame::from_i64_columns(3, &[&[1, 0, 0], &[0, 1, 0], &[0, 0, 1], &[1, 1, 0], &[1, 1, 1]])
        .expect("spans")
}

/// Listed witness pairs `(removed index, x, y)` for the frame of
/// [`r3_example`], for the removals of `e2`, `e3`, `e1+e2` and `e1+e2+e3`.
/// They are data, not verified claims; see the regression suite.
pub fn r3_example_witnesses() -> Vec<(usize, [i64; 3], [i64; 3])> {
    vec![
        (1, [1, 2, 0], [-1, 4, 0]),
        (2, [1, 0, 1], [1, 0, -3]),
        (3, [1, 1, 1], [1, -1, -1]),
        (4, [1, 0, 1], [1, 0, -1]),
    ]
}

/// `span{e1+e2+e3, e1-e2+e4}` in `R^4`.
pub fn r4_example_subspace() -> Subspace {
    let v = |xs: [i64; 4]| xs.iter().map(|&x| rat(x)).collect::<Vec<_>>();
    Subspace::from_vectors(4, &[v([1, 1, 1, 0]), v([1, -1, 0, 1])]).expect("independent")
}
