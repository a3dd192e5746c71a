//! Payoff tables of the two example instances under utilities (25, 5, 1),
//! transcribed from the published tables. Indexed `[w3][w1][w2]`, entries
//! are the payoffs of (w1, w2, w3).

pub type Table = [[[[u32; 3]; 6]; 6]; 6];

pub const P1: Table = [
    [
        [[25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1]],
        [[25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1]],
        [[5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1]],
        [[5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1]],
        [[1, 25, 5], [1, 25, 5], [1, 1, 25], [1, 1, 25], [1, 25, 5], [1, 1, 25]],
        [[1, 25, 5], [1, 25, 5], [1, 1, 25], [1, 1, 25], [1, 25, 5], [1, 1, 25]],
    ],
    [
        [[25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1]],
        [[25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1]],
        [[5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1]],
        [[5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1]],
        [[1, 25, 5], [1, 25, 5], [1, 1, 25], [1, 1, 25], [1, 25, 5], [1, 1, 25]],
        [[1, 25, 5], [1, 25, 5], [1, 1, 25], [1, 1, 25], [1, 25, 5], [1, 1, 25]],
    ],
    [
        [[25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1]],
        [[25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1]],
        [[5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1]],
        [[5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1]],
        [[1, 25, 5], [1, 25, 5], [1, 1, 25], [1, 1, 25], [1, 25, 5], [1, 1, 25]],
        [[1, 25, 5], [1, 25, 5], [1, 1, 25], [1, 1, 25], [1, 25, 5], [1, 1, 25]],
    ],
    [
        [[25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1]],
        [[25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1]],
        [[5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1]],
        [[5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1]],
        [[1, 25, 5], [1, 25, 5], [1, 1, 25], [1, 1, 25], [1, 25, 5], [1, 1, 25]],
        [[1, 25, 5], [1, 25, 5], [1, 1, 25], [1, 1, 25], [1, 25, 5], [1, 1, 25]],
    ],
    [
        [[25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1]],
        [[25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1]],
        [[5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1]],
        [[5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1]],
        [[1, 25, 5], [1, 25, 5], [1, 1, 25], [1, 1, 25], [1, 25, 5], [1, 1, 25]],
        [[1, 25, 5], [1, 25, 5], [1, 1, 25], [1, 1, 25], [1, 25, 5], [1, 1, 25]],
    ],
    [
        [[25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1]],
        [[25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1], [25, 1, 1]],
        [[5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1]],
        [[5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1], [5, 25, 1]],
        [[1, 25, 5], [1, 25, 5], [1, 1, 25], [1, 1, 25], [1, 25, 5], [1, 1, 25]],
        [[1, 25, 5], [1, 25, 5], [1, 1, 25], [1, 1, 25], [1, 25, 5], [1, 1, 25]],
    ],
];

pub const P2: Table = [
    [
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [25, 1, 1], [25, 25, 5], [25, 25, 5]],
        [[5, 5, 5], [5, 5, 5], [25, 1, 1], [25, 1, 1], [5, 5, 5], [25, 25, 5]],
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [1, 25, 25], [1, 25, 25], [1, 25, 25]],
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [1, 25, 25], [1, 25, 25], [1, 25, 25]],
        [[5, 5, 5], [5, 5, 5], [5, 1, 25], [5, 1, 25], [5, 5, 5], [5, 1, 25]],
        [[5, 5, 5], [5, 5, 5], [5, 1, 25], [5, 1, 25], [5, 5, 5], [5, 1, 25]],
    ],
    [
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [25, 1, 1], [25, 25, 5], [25, 25, 5]],
        [[5, 5, 5], [5, 5, 5], [25, 1, 1], [25, 1, 1], [5, 5, 5], [25, 25, 5]],
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [1, 25, 25], [1, 25, 25], [1, 25, 25]],
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [1, 25, 25], [1, 25, 25], [1, 25, 25]],
        [[5, 5, 5], [5, 5, 5], [5, 1, 25], [5, 1, 25], [5, 5, 5], [5, 1, 25]],
        [[5, 5, 5], [5, 5, 5], [5, 1, 25], [5, 1, 25], [5, 5, 5], [5, 1, 25]],
    ],
    [
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [25, 1, 1], [25, 25, 5], [25, 25, 5]],
        [[5, 5, 5], [5, 5, 5], [25, 1, 1], [25, 1, 1], [5, 5, 5], [25, 25, 5]],
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [1, 25, 25], [1, 25, 25], [1, 25, 25]],
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [1, 25, 25], [1, 25, 25], [1, 25, 25]],
        [[5, 5, 5], [5, 5, 5], [5, 1, 25], [5, 1, 25], [5, 5, 5], [5, 1, 25]],
        [[5, 5, 5], [5, 5, 5], [5, 1, 25], [5, 1, 25], [5, 5, 5], [5, 1, 25]],
    ],
    [
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [25, 1, 1], [25, 25, 5], [25, 25, 5]],
        [[5, 5, 5], [5, 5, 5], [25, 1, 1], [25, 1, 1], [5, 5, 5], [25, 25, 5]],
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [1, 25, 25], [1, 25, 25], [1, 25, 25]],
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [1, 25, 25], [1, 25, 25], [1, 25, 25]],
        [[5, 5, 5], [5, 5, 5], [5, 1, 25], [5, 1, 25], [5, 5, 5], [5, 1, 25]],
        [[5, 5, 5], [5, 5, 5], [5, 1, 25], [5, 1, 25], [5, 5, 5], [5, 1, 25]],
    ],
    [
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [25, 1, 1], [25, 25, 5], [25, 25, 5]],
        [[5, 5, 5], [5, 5, 5], [25, 1, 1], [25, 1, 1], [5, 5, 5], [25, 25, 5]],
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [1, 25, 25], [1, 25, 25], [1, 25, 25]],
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [1, 25, 25], [1, 25, 25], [1, 25, 25]],
        [[5, 5, 5], [5, 5, 5], [5, 1, 25], [5, 1, 25], [5, 5, 5], [5, 1, 25]],
        [[5, 5, 5], [5, 5, 5], [5, 1, 25], [5, 1, 25], [5, 5, 5], [5, 1, 25]],
    ],
    [
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [25, 1, 1], [25, 25, 5], [25, 25, 5]],
        [[5, 5, 5], [5, 5, 5], [25, 1, 1], [25, 1, 1], [5, 5, 5], [25, 25, 5]],
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [1, 25, 25], [1, 25, 25], [1, 25, 25]],
        [[1, 5, 1], [1, 5, 1], [1, 5, 1], [1, 25, 25], [1, 25, 25], [1, 25, 25]],
        [[5, 5, 5], [5, 5, 5], [5, 1, 25], [5, 1, 25], [5, 5, 5], [5, 1, 25]],
        [[5, 5, 5], [5, 5, 5], [5, 1, 25], [5, 1, 25], [5, 5, 5], [5, 1, 25]],
    ],
];
