#![allow(dead_code, clippy::needless_range_loop)]

use pcm_alloc::ingest::{CarResult, Race, SeasonResults};
use pcm_alloc::PairwiseComparisonMatrix;
use rand::seq::SliceRandom;
use rand::Rng;

pub const TEAMS_2014: [&str; 11] = [
    "Mercedes",
    "Red Bull",
    "Williams",
    "Ferrari",
    "McLaren",
    "Force India",
    "Toro Rosso",
    "Lotus",
    "Marussia",
    "Sauber",
    "Caterham",
];

/// Published comparison matrix for 2014 at alpha = 1, as printed (row-major).
pub const PRINTED_PCM_2014: [[&str; 11]; 11] = [
    [
        "1", "4.36", "5.73", "4.77", "5.82", "5.33", "6.5", "13", "11", "9.43", "22",
    ],
    ["0.23", "1", "1.39", "2.45", "2.8", "3.63", "9.14", "8", "8", "8", "8"],
    [
        "0.17", "0.72", "1", "1.42", "1.62", "1.68", "5.64", "11", "9.71", "17", "13.6",
    ],
    [
        "0.21", "0.41", "0.70", "1", "1.24", "1.71", "5.33", "6.6", "9.86", "14", "11.5",
    ],
    [
        "0.17", "0.36", "0.62", "0.81", "1", "1.17", "3.69", "5.91", "9.86", "35", "23.67",
    ],
    [
        "0.19", "0.28", "0.60", "0.58", "0.85", "1", "2.48", "5.55", "9.14", "12.6", "16",
    ],
    [
        "0.15", "0.11", "0.18", "0.19", "0.27", "0.40", "1", "2.14", "3.73", "4.15", "3.73",
    ],
    [
        "0.08", "0.13", "0.09", "0.15", "0.17", "0.18", "0.47", "1", "3.06", "1.38", "4.25",
    ],
    [
        "0.09", "0.13", "0.10", "0.10", "0.10", "0.11", "0.27", "0.33", "1", "0.64", "1.55",
    ],
    [
        "0.11", "0.13", "0.06", "0.07", "0.03", "0.08", "0.24", "0.73", "1.57", "1", "1.91",
    ],
    [
        "0.05", "0.13", "0.07", "0.09", "0.04", "0.06", "0.27", "0.24", "0.65", "0.52", "1",
    ],
];

/// Whether `value` rounds (half away from zero) to the printed decimal string.
/// A margin of 1e-9 absorbs binary representation of exact halves like 0.725.
pub fn matches_printed(value: f64, printed: &str) -> bool {
    let decimals = printed.split_once('.').map_or(0, |(_, frac)| frac.len());
    let target: f64 = printed.parse().unwrap();
    (value - target).abs() <= 0.5 * 10f64.powi(-(decimals as i32)) + 1e-9
}

/// Constructors' points for 2014 under 1961-1990, 1991-2002, 2003-2009 and 2010-.
pub const PRINTED_POINTS_2014: [(&str, [u64; 4]); 11] = [
    ("Mercedes", [233, 249, 281, 676]),
    ("Red Bull", [96, 99, 154, 389]),
    ("Williams", [62, 62, 113, 287]),
    ("Ferrari", [36, 36, 78, 213]),
    ("McLaren", [31, 31, 62, 171]),
    ("Force India", [16, 16, 46, 141]),
    ("Toro Rosso", [1, 1, 5, 30]),
    ("Lotus", [0, 0, 2, 10]),
    ("Marussia", [0, 0, 0, 2]),
    ("Sauber", [0, 0, 0, 0]),
    ("Caterham", [0, 0, 0, 0]),
];

/// One point of a plotted 2014 curve.
pub struct CurvePoint {
    pub series: String,
    pub method: String,
    pub alpha: f64,
    pub value: f64,
}

/// Plotted 2014 curves: team shares, EM share differences of two team pairs
/// (`A-B` means share of A minus share of B) and `hhi_star`.
pub fn curves_2014() -> Vec<CurvePoint> {
    let text = include_str!("../data/curves_2014.csv");
    text.lines()
        .skip(1)
        .map(|line| {
            let f: Vec<&str> = line.split(',').collect();
            CurvePoint {
                series: f[0].to_string(),
                method: f[1].to_string(),
                alpha: f[2].parse().unwrap(),
                value: f[3].parse().unwrap(),
            }
        })
        .collect()
}

pub fn team_names(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("T{i}")).collect()
}

/// Random reciprocal matrix with upper entries log-uniform in [1/9, 9].
pub fn random_reciprocal<R: Rng>(rng: &mut R, n: usize) -> Vec<Vec<f64>> {
    let mut rows = vec![vec![1.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let a = rng.gen_range(-9f64.ln()..=9f64.ln()).exp();
            rows[i][j] = a;
            rows[j][i] = 1.0 / a;
        }
    }
    rows
}

pub fn pcm_from(rows: Vec<Vec<f64>>) -> PairwiseComparisonMatrix {
    let n = rows.len();
    PairwiseComparisonMatrix::from_rows(team_names(n), rows, 1.0, 0.0).unwrap()
}

/// Make row `i` dominate row `j` entrywise while keeping reciprocity.
pub fn inject_dominance(rows: &mut [Vec<f64>], i: usize, j: usize) {
    let n = rows.len();
    for k in 0..n {
        if k == i || k == j {
            continue;
        }
        let a = rows[i][k].max(rows[j][k]);
        rows[i][k] = a;
        rows[k][i] = 1.0 / a;
    }
    let a = rows[i][j].max(1.0 / rows[i][j]);
    rows[i][j] = a;
    rows[j][i] = 1.0 / a;
}

/// Perron vector of a positive matrix by repeated squaring: `A^(2^k) 1`,
/// rescaled after every squaring.
pub fn perron_by_squaring(rows: &[Vec<f64>], k: usize) -> Vec<f64> {
    let n = rows.len();
    let mut b = rows.to_vec();
    for _ in 0..k {
        let mut c = vec![vec![0.0; n]; n];
        for i in 0..n {
            for j in 0..n {
                c[i][j] = (0..n).map(|l| b[i][l] * b[l][j]).sum();
            }
        }
        let scale = c.iter().flatten().fold(0.0f64, |m, &v| m.max(v));
        for row in &mut c {
            for v in row.iter_mut() {
                *v /= scale;
            }
        }
        b = c;
    }
    let v: Vec<f64> = b.iter().map(|row| row.iter().sum()).collect();
    let total: f64 = v.iter().sum();
    v.into_iter().map(|x| x / total).collect()
}

/// Random season: every team enters two cars per race, finishing order is a
/// random permutation and about a fifth of cars are not classified. Ranks
/// number the classified cars consecutively.
pub fn random_season<R: Rng>(rng: &mut R, teams: usize, races: usize) -> SeasonResults {
    let names = team_names(teams);
    let races = (0..races)
        .map(|r| {
            let mut cars: Vec<(usize, u8)> = (0..teams).flat_map(|t| [(t, 1), (t, 2)]).collect();
            cars.shuffle(rng);
            let mut next_rank = 0;
            let results = cars
                .iter()
                .map(|&(t, car)| {
                    let classified = rng.gen_bool(0.8);
                    if classified {
                        next_rank += 1;
                    }
                    CarResult {
                        team_id: names[t].clone(),
                        car_index: car,
                        finish_rank: classified.then_some(next_rank),
                        classified: Some(classified),
                        laps_fraction: None,
                    }
                })
                .collect();
            Race {
                race_id: format!("r{r}"),
                ordinal: r as u32 + 1,
                results,
            }
        })
        .collect();
    SeasonResults::new("synthetic", names, races).unwrap()
}
