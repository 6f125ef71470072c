#![allow(dead_code)]

pub mod oracle;

use treesplit::forest::{build_forest, Forest, Loc, TreeSpec};
use treesplit::iet::IntervalExchange;
use treesplit::system::{LetterSpec, SystemSpec};
use treesplit::{Field, Scalar, SystemOfIsometries};

pub fn q(n: i64, d: i64) -> Scalar {
    Scalar::frac(n, d)
}

/// `a + b sqrt(d)`.
pub fn quad(a: Scalar, b: Scalar, d: u32) -> Scalar {
    &a + &(&b * &Scalar::sqrt(d))
}

pub fn golden() -> IntervalExchange {
    IntervalExchange::golden()
}

pub fn perturbed_three() -> IntervalExchange {
    let c = &q(1, 6) + &(&Scalar::sqrt(2) / &Scalar::int(100));
    IntervalExchange::new(vec![q(1, 2), q(1, 3), c], &[3, 2, 1]).unwrap()
}

pub fn sqrt_two() -> IntervalExchange {
    IntervalExchange::two(Scalar::one(), Scalar::sqrt(2)).unwrap()
}

pub fn rational_two() -> IntervalExchange {
    IntervalExchange::two(q(1, 3), q(2, 3)).unwrap()
}

/// Keane interval exchanges over quadratic fields.
pub fn iet_corpus() -> Vec<(&'static str, IntervalExchange)> {
    let s2 = |a: i64, b: i64, c: i64, d: i64| quad(q(a, b), q(c, d), 2);
    vec![
        ("golden", golden()),
        ("sqrt2", sqrt_two()),
        ("sqrt3", IntervalExchange::two(Scalar::one(), Scalar::sqrt(3)).unwrap()),
        ("sqrt7", IntervalExchange::two(Scalar::int(2), Scalar::sqrt(7)).unwrap()),
        ("silver", IntervalExchange::two(s2(1, 1, 1, 1), Scalar::one()).unwrap()),
        ("three321", perturbed_three()),
        ("three312", IntervalExchange::new(vec![q(1, 3), Scalar::sqrt(2) / Scalar::int(3), q(1, 2)], &[3, 1, 2]).unwrap()),
        ("three321b", IntervalExchange::new(vec![Scalar::sqrt(3), q(1, 1), q(2, 3)], &[3, 2, 1]).unwrap()),
        (
            "four4321",
            IntervalExchange::new(vec![q(1, 1), Scalar::sqrt(2), q(3, 4), s2(-1, 1, 1, 1)], &[4, 3, 2, 1]).unwrap(),
        ),
        (
            "four2413",
            IntervalExchange::new(vec![Scalar::sqrt(5), q(1, 1), q(1, 3), q(2, 7)], &[2, 4, 1, 3]).unwrap(),
        ),
        (
            "five54321",
            IntervalExchange::new(
                vec![q(1, 1), Scalar::sqrt(3), q(1, 2), s2(1, 1, 0, 1) / Scalar::int(3), Scalar::sqrt(3) / Scalar::int(2)],
                &[5, 4, 3, 2, 1],
            )
            .unwrap(),
        ),
    ]
}

pub fn segment(len: Scalar) -> Forest {
    build_forest(&[TreeSpec {
        name: "I".into(),
        vertices: vec!["l".into(), "r".into()],
        edges: vec![("e".into(), "l".into(), "r".into(), len)],
    }])
    .unwrap()
}

pub fn at(f: &Forest, x: Scalar) -> Loc {
    Loc::new(0, f.tree(0).point_on_edge(0, x).unwrap())
}

/// Letters on a segment given as `(name, domain start, image start, length, flip)`.
pub fn segment_system(len: Scalar, letters: &[(&str, Scalar, Scalar, Scalar, bool)]) -> SystemOfIsometries {
    let root = std::iter::once(&len)
        .chain(letters.iter().flat_map(|(_, d, i, l, _)| [d, i, l]))
        .map(Scalar::root)
        .max()
        .unwrap_or(0);
    let field = if root == 0 { Field::Rational } else { Field::Quadratic(root) };
    let f = segment(len);
    let letters = letters
        .iter()
        .map(|(name, d, i, l, flip)| {
            let d1 = d + l;
            let i1 = i + l;
            let anchors = if *flip {
                vec![(at(&f, d.clone()), at(&f, i1.clone())), (at(&f, d1), at(&f, i.clone()))]
            } else {
                vec![(at(&f, d.clone()), at(&f, i.clone())), (at(&f, d1), at(&f, i1))]
            };
            LetterSpec { name: name.to_string(), anchors }
        })
        .collect();
    SystemSpec { field, forest: f, letters, rank_hint: None }.build().unwrap()
}

/// Two reflections on disjoint unit segments of `[0, 3]`: a language with two
/// separate halves.
pub fn reflections() -> SystemOfIsometries {
    segment_system(
        Scalar::int(3),
        &[("a", q(0, 1), q(0, 1), q(1, 1), true), ("b", q(2, 1), q(2, 1), q(1, 1), true)],
    )
}

/// Systems on which the Rips machine makes progress.
pub fn rips_corpus() -> Vec<(&'static str, SystemOfIsometries)> {
    vec![
        ("shift", segment_system(q(3, 1), &[("a", q(0, 1), q(1, 1), q(2, 1), false)])),
        (
            "overlap",
            segment_system(q(4, 1), &[("a", q(0, 1), q(1, 1), q(2, 1), false), ("b", q(1, 1), q(2, 1), q(2, 1), true)]),
        ),
        (
            "three",
            segment_system(
                q(5, 1),
                &[
                    ("a", q(0, 1), q(2, 1), q(2, 1), false),
                    ("b", q(1, 1), q(3, 1), q(2, 1), false),
                    ("c", q(1, 2), q(7, 2), q(3, 2), true),
                ],
            ),
        ),
    ]
}

/// Two translations on a segment over `Q(sqrt 2)` on which the Rips machine keeps
/// cutting the forest into more and smaller components.
pub fn levitt_example() -> SystemOfIsometries {
    let r2 = |a: i64, b: i64, c: i64, d: i64| quad(q(a, b), q(c, d), 2);
    segment_system(
        r2(5, 2, 1, 8),
        &[
            ("a", r2(21, 32, -3, 64), r2(7, 16, -1, 32), r2(3, 4, 1, 4), false),
            ("b", q(9, 8), q(3, 2), r2(1, 2, 1, 8), false),
        ],
    )
}
