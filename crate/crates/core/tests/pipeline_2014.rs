#![allow(clippy::needless_range_loop)]

mod common;

use common::{curves_2014, TEAMS_2014};
use pcm_alloc::alloc::{allocate, indifferent_alpha, sweep, AlphaGrid};
use pcm_alloc::fixtures::goals_2014;
use pcm_alloc::goals::goals_matrix;
use pcm_alloc::ingest::parse_season;
use pcm_alloc::metrics::{ranking_of, DEFAULT_REFINE_TOL};
use pcm_alloc::pcm::build_pcm;
use pcm_alloc::weights::{weights_at, Method, WeightingMethod};

fn both() -> [WeightingMethod; 2] {
    [WeightingMethod::eigenvector(), WeightingMethod::row_geometric_mean()]
}

#[test]
fn fixture_goals() {
    let g = goals_2014();
    assert_eq!(g.teams(), TEAMS_2014);
    assert_eq!(g.between("Mercedes", "Red Bull").unwrap(), 61);
    assert_eq!(g.between("Red Bull", "Mercedes").unwrap(), 14);
    assert_eq!(g.between("Williams", "Sauber").unwrap(), 68);
    assert_eq!(g.between("Sauber", "Williams").unwrap(), 4);
    // 19 races, at most four comparisons per pair and race.
    for i in 0..g.len() {
        for j in 0..g.len() {
            assert!(g.get(i, j) + g.get(j, i) <= 76);
        }
    }
}

#[test]
fn only_marussia_sauber_is_below_the_diagonal_trend() {
    let m = build_pcm(&goals_2014(), 1.0, 0.0).unwrap();
    let mut exceptions = Vec::new();
    for i in 0..m.len() {
        for j in i + 1..m.len() {
            if m.get(i, j) < m.get(j, i) {
                exceptions.push((TEAMS_2014[i], TEAMS_2014[j]));
            }
        }
    }
    assert_eq!(exceptions, [("Marussia", "Sauber")]);
}

#[test]
fn rgm_ranking_is_the_official_one() {
    for alpha in [0.5, 1.0, 3.0] {
        let w = weights_at(&goals_2014(), &WeightingMethod::row_geometric_mean(), alpha, 0.0).unwrap();
        assert_eq!(ranking_of(&w).teams, TEAMS_2014);
    }
}

#[test]
fn middle_teams_peak_inside_the_range() {
    let goals = goals_2014();
    let result = sweep(
        &goals,
        &both(),
        &AlphaGrid::standard().points(),
        0.0,
        DEFAULT_REFINE_TOL,
    )
    .unwrap();
    let curves = curves_2014();
    for method in [Method::Eigenvector, Method::RowGeometricMean] {
        let s = result.for_method(method).unwrap();
        let mut peaked: Vec<&str> = s.interior_maxima.iter().map(|m| m.team.as_str()).collect();
        peaked.sort_unstable();
        assert_eq!(
            peaked,
            ["Ferrari", "Force India", "McLaren", "Red Bull", "Williams"],
            "{method}"
        );
        for m in &s.interior_maxima {
            let plotted = curves
                .iter()
                .filter(|p| p.series == m.team && p.method == method.tag())
                .max_by(|a, b| a.value.total_cmp(&b.value))
                .unwrap();
            assert!((plotted.alpha - m.alpha).abs() <= 0.1, "{method} {}", m.team);
            assert!(m.share >= plotted.value - 1e-9);
        }
    }
}

#[test]
fn sweep_rows_agree_with_single_evaluations() {
    let goals = goals_2014();
    let grid = [0.0, 0.5, 1.0, 2.5];
    let result = sweep(&goals, &both(), &grid, 0.0, DEFAULT_REFINE_TOL).unwrap();
    for (method, s) in both().iter().zip(&result.methods) {
        for (rec, &a) in s.records.iter().zip(&grid) {
            assert_eq!(rec.weights, weights_at(&goals, method, a, 0.0).unwrap().weights);
        }
    }
    assert!(result.methods[1].crossings.is_scale_invariant());
}

#[test]
fn allocation_of_published_pot() {
    let w = weights_at(&goals_2014(), &WeightingMethod::row_geometric_mean(), 1.0, 0.0).unwrap();
    let report = allocate(&w, 350.0, 0.01).unwrap();
    assert_eq!(report.total_units(), 35_000);
    let merc = &report.allocations[0];
    assert_eq!(merc.team, "Mercedes");
    assert!((merc.amount - 350.0 * w.weights[0]).abs() <= 0.01);
}

#[test]
fn equal_share_target_is_met_at_zero() {
    let goals = goals_2014();
    for method in both() {
        let r = indifferent_alpha(
            &goals,
            "Lotus",
            1.0 / 11.0,
            &method,
            &AlphaGrid::standard().points(),
            1e-9,
            0.0,
        )
        .unwrap();
        assert_eq!(r.smallest_root(), Some(0.0));
        assert_eq!(r.roots.len(), 1, "Lotus only loses share as alpha grows");
    }
}

#[test]
fn unreachable_target_has_no_solution() {
    let goals = goals_2014();
    let r = indifferent_alpha(
        &goals,
        "Red Bull",
        0.2,
        &WeightingMethod::row_geometric_mean(),
        &AlphaGrid::standard().points(),
        1e-9,
        0.0,
    )
    .unwrap();
    assert!(r.no_solution);
    assert_eq!(r.smallest_root(), None);
}

#[test]
fn red_bull_target_below_its_peak_is_met_twice() {
    let goals = goals_2014();
    let r = indifferent_alpha(
        &goals,
        "Red Bull",
        0.12,
        &WeightingMethod::row_geometric_mean(),
        &AlphaGrid::standard().points(),
        1e-9,
        0.0,
    )
    .unwrap();
    assert_eq!(r.roots.len(), 2);
    assert!(r.roots.iter().all(|root| root.residual.abs() < 1e-9));
}

#[test]
fn season_to_allocation() {
    let text = include_str!("data/mini_season.csv");
    let season = parse_season(text.as_bytes()).unwrap();
    let goals = goals_matrix(&season);
    assert_eq!(goals.races_counted(), Some(2));
    assert_eq!(goals.rows(), [vec![0, 3, 5], vec![5, 0, 6], vec![3, 1, 0]]);

    let m = build_pcm(&goals, 1.0, 0.0).unwrap();
    assert_eq!(m.get(1, 2), 6.0);
    assert_eq!(m.get(0, 1), 0.6);
    // RGM by hand: row products 0.6*5/3 = 1, 5/3*6 = 10, 0.6/6 = 0.1.
    let w = WeightingMethod::row_geometric_mean().weights(&m).unwrap();
    let roots = [1.0f64, 10f64.cbrt(), 0.1f64.cbrt()];
    let total: f64 = roots.iter().sum();
    for (a, b) in w.weights.iter().zip(roots) {
        assert!((a - b / total).abs() < 1e-15);
    }
    let report = allocate(&w, 1000.0, 1.0).unwrap();
    let units: Vec<u64> = report.allocations.iter().map(|a| a.units).collect();
    assert_eq!(units.iter().sum::<u64>(), 1000);
    let quotas: Vec<f64> = roots.iter().map(|r| r / total * 1000.0).collect();
    for (u, q) in units.iter().zip(&quotas) {
        assert!(*u == q.floor() as u64 || *u == q.ceil() as u64);
    }
}

#[test]
fn smoothing_keeps_every_pair_finite() {
    let text = ",A,B,C\nA,,4,2\nB,0,,1\nC,0,3,\n";
    let goals = pcm_alloc::load_goals(text.as_bytes()).unwrap();
    assert!(build_pcm(&goals, 1.0, 0.0).is_err());
    let m = build_pcm(&goals, 1.0, 0.5).unwrap();
    assert_eq!(m.get(0, 1), 9.0);
    assert_eq!(m.get(1, 0), 1.0 / 9.0);
    for method in both() {
        let w = method.weights(&m).unwrap();
        assert_eq!(ranking_of(&w).teams, ["A", "C", "B"]);
    }
}
