use luckmeter::corrstats::{
    binary_rank_ceiling, fisher_ci, midranks, normal_quantile, pearson, phi_from_counts, r_from_rates,
    spearman, ConfusionCounts,
};
use luckmeter::dataio::{parse_labeled_csv, render_svg, write_ranking_csv, SvgOptions};
use luckmeter::sieve::{CurveKind, LabeledRanking, RankedEntry};
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use statrs::distribution::{ContinuousCDF, Normal};

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol * (1.0 + a.abs().max(b.abs()))
}

fn ranking(scores: &[f64], labels: &[bool]) -> LabeledRanking {
    LabeledRanking::build(scores.iter().zip(labels).enumerate().map(|(i, (&s, &l))| (format!("e{i}"), s, l)))
        .unwrap()
}

/// Scores on a coarse integer grid so ties are common, with both classes
/// guaranteed present.
fn scored_labels(max_len: usize) -> impl Strategy<Value = (Vec<f64>, Vec<bool>)> {
    (3..max_len).prop_flat_map(|n| {
        (
            prop::collection::vec(0..20i32, n).prop_map(|v| v.into_iter().map(f64::from).collect()),
            prop::collection::vec(any::<bool>(), n - 2)
                .prop_map(|mut v| {
                    v.push(true);
                    v.push(false);
                    v
                })
                .prop_shuffle(),
        )
    })
}

proptest! {
    #[test]
    fn quartet_agrees(tp in 0u64..40, fp in 0u64..40, fn_ in 0u64..40, tn in 0u64..40) {
        let c = ConfusionCounts::new(tp, fp, fn_, tn);
        prop_assume!(c.positives() > 0 && c.negatives() > 0 && c.selected() > 0 && c.selected() < c.total());
        let phi = phi_from_counts(&c).unwrap().r;
        let rate = r_from_rates(c.tpr().unwrap(), c.fpr().unwrap(), c.positives(), c.negatives()).unwrap().r;
        let (sel, lab) = c.indicator_vectors();
        let p = pearson(&sel, &lab).unwrap().r;
        let s = spearman(&sel, &lab).unwrap().r;
        prop_assert!(close(phi, rate, 1e-12));
        prop_assert!(close(phi, p, 1e-12));
        prop_assert!(close(phi, s, 1e-12));
    }

    #[test]
    fn phi_matches_rate_form_at_large_counts(
        tp in 0u64..1_000_000, fp in 0u64..1_000_000, fn_ in 0u64..1_000_000, tn in 0u64..1_000_000,
    ) {
        let c = ConfusionCounts::new(tp, fp, fn_, tn);
        prop_assume!(c.positives() > 0 && c.negatives() > 0 && c.selected() > 0 && c.selected() < c.total());
        let phi = phi_from_counts(&c).unwrap().r;
        let rate = r_from_rates(c.tpr().unwrap(), c.fpr().unwrap(), c.positives(), c.negatives()).unwrap().r;
        prop_assert!(close(phi, rate, 1e-10));
        prop_assert!(phi.abs() <= 1.0 + 1e-12);
    }

    #[test]
    fn rate_form_is_antisymmetric(tpr in 0.01f64..0.99, fpr in 0.01f64..0.99, np in 1u64..5000, nn in 1u64..5000) {
        let a = r_from_rates(tpr, fpr, np, nn).unwrap().r;
        let b = r_from_rates(fpr, tpr, nn, np).unwrap().r;
        prop_assert!(close(a, -b, 1e-12));
    }

    #[test]
    fn spearman_ignores_monotone_transforms(
        pairs in prop::collection::vec((0.01f64..100.0, -50.0f64..50.0), 3..60),
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let Ok(base) = spearman(&x, &y) else { return Ok(()); };
        let logged: Vec<f64> = x.iter().map(|v| v.ln()).collect();
        let cubed: Vec<f64> = y.iter().map(|v| v * v * v).collect();
        prop_assert!(close(base.r, spearman(&logged, &cubed).unwrap().r, 1e-12));
    }

    #[test]
    fn pearson_affine_invariance(
        pairs in prop::collection::vec((-100.0f64..100.0, -100.0f64..100.0), 3..60),
        a in 0.1f64..10.0, b in -100.0f64..100.0,
    ) {
        let (x, y): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        let Ok(base) = pearson(&x, &y) else { return Ok(()); };
        let moved: Vec<f64> = x.iter().map(|v| a * v + b).collect();
        let negated: Vec<f64> = x.iter().map(|v| -v).collect();
        prop_assert!(close(base.r, pearson(&moved, &y).unwrap().r, 1e-9));
        prop_assert!(close(-base.r, pearson(&negated, &y).unwrap().r, 1e-12));
    }

    #[test]
    fn midranks_sum_and_equivariance(values in prop::collection::vec(0..10i32, 1..80), seed in any::<u64>()) {
        let values: Vec<f64> = values.into_iter().map(f64::from).collect();
        let ranks = midranks(&values).unwrap();
        let n = values.len() as f64;
        prop_assert!(close(ranks.iter().sum::<f64>(), n * (n + 1.0) / 2.0, 1e-12));

        let mut perm: Vec<usize> = (0..values.len()).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        let shuffled: Vec<f64> = perm.iter().map(|&i| values[i]).collect();
        let reranked = midranks(&shuffled).unwrap();
        for (k, &i) in perm.iter().enumerate() {
            prop_assert_eq!(reranked[k], ranks[i]);
        }
    }

    #[test]
    fn fisher_width_monotone(r in -0.95f64..0.95, n in 5usize..5000) {
        let width = |n, level| {
            let ci = fisher_ci(r, n, level).unwrap();
            prop_assert!(ci.lower < r && r < ci.upper);
            Ok(ci.upper - ci.lower)
        };
        prop_assert!(width(n, 0.90)? < width(n, 0.95)?);
        prop_assert!(width(n, 0.95)? < width(n, 0.99)?);
        prop_assert!(width(n + 1, 0.95)? < width(n, 0.95)?);
    }

    #[test]
    fn quantile_matches_statrs(p in 1e-12f64..(1.0 - 1e-12)) {
        let ours = normal_quantile(p).unwrap();
        let theirs = Normal::standard().inverse_cdf(p);
        prop_assert!(close(ours, theirs, 1e-9), "{} vs {}", ours, theirs);
    }

    #[test]
    fn correlation_curve_matches_rate_form((scores, labels) in scored_labels(60)) {
        let rk = ranking(&scores, &labels);
        let curve = rk.correlation_curve();
        let (np, nn) = (rk.n_pos() as u64, rk.n_neg() as u64);
        for pt in &curve.points {
            let c = rk.confusion_at(pt.threshold).unwrap();
            let want = r_from_rates(c.tpr().unwrap(), c.fpr().unwrap(), np, nn).unwrap().r;
            prop_assert!(close(pt.y, want, 1e-12));
        }
        prop_assert_eq!(curve.points.len(), rk.len() - 1);
    }

    #[test]
    fn analysis_ignores_monotone_score_transforms((scores, labels) in scored_labels(60)) {
        let base = ranking(&scores, &labels).analyze();
        let exp: Vec<f64> = scores.iter().map(|s| (s / 4.0).exp()).collect();
        let affine: Vec<f64> = scores.iter().map(|s| 3.0 * s - 11.0).collect();
        for moved in [exp, affine] {
            let other = ranking(&moved, &labels).analyze();
            prop_assert_eq!(&base.curves, &other.curves);
            prop_assert_eq!(base.best, other.best);
            prop_assert_eq!(base.tie_count, other.tie_count);
            prop_assert_eq!(&base.split_ties, &other.split_ties);
        }
    }

    #[test]
    fn build_is_a_stable_descending_sort((scores, labels) in scored_labels(80)) {
        let rk = ranking(&scores, &labels);
        let mut reference: Vec<usize> = (0..scores.len()).collect();
        reference.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]));
        let got: Vec<String> = rk.entries().iter().map(|e| e.id.clone()).collect();
        let want: Vec<String> = reference.iter().map(|i| format!("e{i}")).collect();
        prop_assert_eq!(got, want);
    }

    #[test]
    fn ranking_csv_round_trips((scores, labels) in scored_labels(80)) {
        // scores on a grid that six significant digits represent exactly
        let scores: Vec<f64> = scores.iter().map(|s| s / 8.0 - 1.0).collect();
        let rk = ranking(&scores, &labels);
        let text = write_ranking_csv(&rk);
        let back = parse_labeled_csv(&text).unwrap();
        prop_assert_eq!(write_ranking_csv(&back), text);
        let strip = |r: &LabeledRanking| -> Vec<(String, f64, bool)> {
            r.entries().iter().map(|e| (e.id.clone(), e.score, e.label)).collect()
        };
        prop_assert_eq!(strip(&back), strip(&rk));
    }
}

#[test]
fn ceiling_bounds_random_placements() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let n = rng.gen_range(2..40usize);
        let n_pos = rng.gen_range(1..n);
        let mut labels = vec![0.0; n];
        labels[..n_pos].fill(1.0);
        labels.shuffle(&mut rng);
        let ranks: Vec<f64> = (1..=n).map(|r| r as f64).collect();
        let r = spearman(&ranks, &labels).unwrap().r;
        let ceiling = binary_rank_ceiling(n_pos, n).unwrap().r;
        assert!(r.abs() <= ceiling + 1e-12, "n={n} n_pos={n_pos} r={r} ceiling={ceiling}");
    }
    // attained with the positives on top
    let labels: Vec<f64> = (0..30).map(|i| if i < 4 { 1.0 } else { 0.0 }).collect();
    let ranks: Vec<f64> = (1..=30).map(|r| r as f64).collect();
    let r = spearman(&ranks, &labels).unwrap().r;
    assert!(close(r.abs(), binary_rank_ceiling(4, 30).unwrap().r, 1e-12));
}

#[test]
fn shuffled_labels_average_half_auc() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let (n_pos, n_neg) = (20usize, 180usize);
    let scores: Vec<f64> = (0..n_pos + n_neg).map(|i| i as f64).collect();
    let mut labels: Vec<bool> = (0..n_pos + n_neg).map(|i| i < n_pos).collect();
    let trials = 1000;
    let mean = (0..trials)
        .map(|_| {
            labels.shuffle(&mut rng);
            ranking(&scores, &labels).analyze().auc
        })
        .sum::<f64>()
        / trials as f64;
    // Mann-Whitney null variance, no ties
    let (m, k) = (n_pos as f64, n_neg as f64);
    let sd = ((m + k + 1.0) / (12.0 * m * k)).sqrt() / (trials as f64).sqrt();
    assert!((mean - 0.5).abs() < 3.0 * sd, "mean AUC {mean}, 3 sd = {}", 3.0 * sd);
}

#[test]
fn random_labels_carry_no_rank_correlation() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let rows: Vec<(String, f64, bool)> =
        (0..10_000).map(|i| (format!("x{i}"), rng.gen::<f64>(), rng.gen_bool(0.1))).collect();
    let r = LabeledRanking::build(rows).unwrap().binary_spearman().unwrap().r;
    assert!(r.abs() < 0.05, "r = {r}");
}

#[test]
fn imbalance_splits_roc_from_correlation() {
    // identical rates at the same relative threshold, different class balance
    let sieve = |n_pos: u64, n_neg: u64| {
        let c = ConfusionCounts::new(n_pos * 4 / 5, n_neg / 5, n_pos - n_pos * 4 / 5, n_neg - n_neg / 5);
        (c.tpr().unwrap(), c.fpr().unwrap(), phi_from_counts(&c).unwrap().r)
    };
    let (tpr_a, fpr_a, r_a) = sieve(500, 500);
    let (tpr_b, fpr_b, r_b) = sieve(25, 2500);
    assert_eq!((tpr_a, fpr_a), (tpr_b, fpr_b));
    assert!(r_a > 0.55 && r_b < 0.3, "balanced {r_a}, imbalanced {r_b}");
}

#[test]
fn svg_for_many_points_stays_small() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let entries: Vec<RankedEntry> = (0..10_000)
        .map(|i| RankedEntry { id: format!("p{i}"), score: rng.gen(), label: i % 37 == 0, source_row: None })
        .collect();
    let report = LabeledRanking::from_entries(entries).unwrap().analyze();
    for kind in [CurveKind::Roc, CurveKind::Precision, CurveKind::Correlation] {
        let svg = render_svg(report.curve(kind).unwrap(), &SvgOptions::default()).unwrap();
        assert!(svg.len() < 5_000_000, "{} svg is {} bytes", kind.name(), svg.len());
        assert!(svg.starts_with("<svg") || svg.starts_with("<?xml"));
    }
}
