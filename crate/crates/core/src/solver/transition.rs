//! State transition rules.
//!
//! Both rules are pseudo-random-proportional: with probability `q0` the
//! best candidate is taken (ties broken uniformly at random), otherwise a
//! roulette draw is made. The combined rule ranks candidates by the product
//! of λ-weighted pheromone and heuristic powers; the dominance rule ranks
//! them by how many sibling candidates they dominate.

use rand::Rng;

use crate::costgraph::DEGREE;

/// Which way the per-edge cost pairs are compared in the dominance rule.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Orientation {
    /// A candidate beats another when its `(Cf, Cs)` is component-wise
    /// larger with one strict inequality (more pheromone and desirability).
    #[default]
    Maximize,
    /// Literal minimisation reading of Pareto dominance.
    Minimize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, thiserror::Error)]
#[error("no feasible candidate")]
pub struct DeadEnd;

/// Exponents of the four factors for a given `(alpha, beta, lambda)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Exponents {
    pub pher_f: f64,
    pub pher_s: f64,
    pub heur_f: f64,
    pub heur_s: f64,
}

impl Exponents {
    pub fn new(alpha: f64, beta: f64, lambda: f64) -> Self {
        Self {
            pher_f: alpha * lambda,
            pher_s: alpha * (1.0 - lambda),
            heur_f: beta * lambda,
            heur_s: beta * (1.0 - lambda),
        }
    }
}

/// Per-objective edge costs `(Cf, Cs)` used by the dominance rule.
pub fn dominance_costs(
    tau_f: f64,
    tau_s: f64,
    eta_f: f64,
    eta_s: f64,
    ex: &Exponents,
) -> (f64, f64) {
    (
        tau_f.powf(ex.pher_f) * eta_f.powf(ex.heur_f),
        tau_s.powf(ex.pher_s) * eta_s.powf(ex.heur_s),
    )
}

/// Combined-rule score of an edge; equals `Cf * Cs`.
pub fn cstr_score(tau_f: f64, tau_s: f64, eta_f: f64, eta_s: f64, ex: &Exponents) -> f64 {
    let (cf, cs) = dominance_costs(tau_f, tau_s, eta_f, eta_s, ex);
    cf * cs
}

/// `a` dominates `b` when it is no larger in every component and strictly
/// smaller in at least one.
pub fn dominates(a: (f64, f64), b: (f64, f64)) -> bool {
    a.0 <= b.0 && a.1 <= b.1 && (a.0 < b.0 || a.1 < b.1)
}

/// Whether candidate `a` counts as better than `b` under `orient`.
pub fn beats(orient: Orientation, a: (f64, f64), b: (f64, f64)) -> bool {
    match orient {
        Orientation::Minimize => dominates(a, b),
        Orientation::Maximize => dominates(b, a),
    }
}

/// For each candidate, the number of other candidates it beats.
pub fn dominance_counts(costs: &[(f64, f64)], orient: Orientation, out: &mut [usize]) {
    for (j, &cj) in costs.iter().enumerate() {
        out[j] = costs
            .iter()
            .enumerate()
            .filter(|&(u, &cu)| u != j && beats(orient, cj, cu))
            .count();
    }
}

/// Roulette probabilities of the dominance rule: `(count + 1) / Σ (count + 1)`.
pub fn dstr_probabilities(counts: &[usize]) -> Vec<f64> {
    let total: usize = counts.iter().map(|c| c + 1).sum();
    counts
        .iter()
        .map(|&c| (c + 1) as f64 / total as f64)
        .collect()
}

/// Roulette probabilities of the combined rule: score over total score.
pub fn cstr_probabilities(scores: &[f64]) -> Vec<f64> {
    let total: f64 = scores.iter().sum();
    scores.iter().map(|s| s / total).collect()
}

/// Index of a maximal entry, ties resolved uniformly with `rng`.
fn argmax_random_tie<R: Rng + ?Sized, T: PartialOrd + Copy>(keys: &[T], rng: &mut R) -> usize {
    let mut best = keys[0];
    let mut ties = 0usize;
    for &k in keys {
        if k > best {
            best = k;
            ties = 1;
        } else if k == best {
            ties += 1;
        }
    }
    let pick = if ties > 1 { rng.gen_range(0..ties) } else { 0 };
    keys.iter()
        .enumerate()
        .filter(|(_, &k)| k == best)
        .nth(pick)
        .map(|(i, _)| i)
        .unwrap()
}

/// Draws an index with probability proportional to `weights`.
fn roulette<R: Rng + ?Sized>(weights: &[f64], rng: &mut R) -> usize {
    let total: f64 = weights.iter().sum();
    let r = rng.gen::<f64>() * total;
    let mut acc = 0.0;
    for (i, w) in weights.iter().enumerate() {
        acc += w;
        if r < acc {
            return i;
        }
    }
    // rounding left r at the very top; take the last candidate with weight
    weights
        .iter()
        .rposition(|&w| w > 0.0)
        .unwrap_or(weights.len() - 1)
}

/// Combined state transition rule over precomputed scores.
pub fn cstr_choose<R: Rng + ?Sized>(
    scores: &[f64],
    q0: f64,
    rng: &mut R,
) -> Result<usize, DeadEnd> {
    if scores.is_empty() {
        return Err(DeadEnd);
    }
    let q: f64 = rng.gen();
    Ok(if q <= q0 {
        argmax_random_tie(scores, rng)
    } else {
        roulette(scores, rng)
    })
}

/// Dominance state transition rule over candidate cost pairs.
pub fn dstr_choose<R: Rng + ?Sized>(
    costs: &[(f64, f64)],
    orient: Orientation,
    q0: f64,
    rng: &mut R,
) -> Result<usize, DeadEnd> {
    if costs.is_empty() {
        return Err(DeadEnd);
    }
    let mut stack = [0usize; DEGREE];
    let mut heap = Vec::new();
    let counts: &mut [usize] = if costs.len() <= DEGREE {
        &mut stack[..costs.len()]
    } else {
        heap.resize(costs.len(), 0);
        &mut heap
    };
    dominance_counts(costs, orient, counts);
    let q: f64 = rng.gen();
    if q <= q0 {
        return Ok(argmax_random_tie(counts, rng));
    }
    // Integer roulette over count + 1 keeps the draw exact.
    let total: usize = counts.iter().map(|c| c + 1).sum();
    let mut r = rng.gen_range(0..total);
    for (i, &c) in counts.iter().enumerate() {
        if r < c + 1 {
            return Ok(i);
        }
        r -= c + 1;
    }
    unreachable!("roulette draw below total weight")
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn dominance_examples() {
        assert!(dominates((1.0, 1.0), (2.0, 2.0)));
        assert!(!dominates((1.0, 2.0), (1.0, 2.0)));
        assert!(!dominates((1.0, 3.0), (2.0, 2.0)));
        assert!(!dominates((2.0, 2.0), (1.0, 3.0)));
    }

    #[test]
    fn score_examples() {
        let ex = Exponents::new(1.0, 2.0, 0.5);
        assert_eq!(cstr_score(1.0, 1.0, 1.0, 1.0, &ex), 1.0);
        let v = cstr_score(0.04, 0.04, 2.0, 2.0, &ex);
        assert!((v - 0.16).abs() < 1e-12);
    }

    #[test]
    fn dominance_cost_example() {
        let ex = Exponents::new(1.0, 2.0, 0.9);
        let (cf, _) = dominance_costs(1.0, 0.3, 1.0, 0.7, &ex);
        assert_eq!(cf, 1.0);
        let (cf, _) = dominance_costs(0.5, 1.0, 2.0, 1.0, &ex);
        let expect = 0.5f64.powf(0.9) * 2f64.powf(1.8);
        assert!((cf - expect).abs() < 1e-12);
        assert!((cf - 1.8661).abs() < 1e-4);
    }

    #[test]
    fn score_is_product_of_costs() {
        let ex = Exponents::new(1.0, 2.0, 0.3);
        let (cf, cs) = dominance_costs(0.2, 0.7, 3.0, 1.5, &ex);
        let score = cstr_score(0.2, 0.7, 3.0, 1.5, &ex);
        assert!((score - cf * cs).abs() <= 1e-15 * score.abs());
    }

    #[test]
    fn lambda_monotone_when_speed_factors_dominate() {
        // tau_f * eta_f^2 > tau_s * eta_s^2
        let mut prev = 0.0;
        for l in [0.1, 0.3, 0.5, 0.7, 0.9] {
            let v = cstr_score(0.5, 0.1, 3.0, 1.0, &Exponents::new(1.0, 2.0, l));
            assert!(v > prev);
            prev = v;
        }
    }

    #[test]
    fn lambda_switches_argmax() {
        // A has larger speed factors and smaller safety factors than B.
        let a = (0.6, 0.1, 4.0, 1.0);
        let b = (0.2, 0.5, 1.5, 3.0);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for (lambda, want) in [(0.9, 0), (0.1, 1)] {
            let ex = Exponents::new(1.0, 2.0, lambda);
            let scores = [
                cstr_score(a.0, a.1, a.2, a.3, &ex),
                cstr_score(b.0, b.1, b.2, b.3, &ex),
            ];
            assert_eq!(cstr_choose(&scores, 1.0, &mut rng).unwrap(), want);
        }
    }

    #[test]
    fn empty_candidates_are_dead_ends() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(cstr_choose(&[], 0.4, &mut rng), Err(DeadEnd));
        assert_eq!(
            dstr_choose(&[], Orientation::Maximize, 0.4, &mut rng),
            Err(DeadEnd)
        );
    }

    #[test]
    fn single_candidate_always_chosen() {
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        for q0 in [0.0, 0.4, 1.0] {
            assert_eq!(cstr_choose(&[0.3], q0, &mut rng), Ok(0));
            assert_eq!(
                dstr_choose(&[(0.3, 2.0)], Orientation::Maximize, q0, &mut rng),
                Ok(0)
            );
        }
    }

    #[test]
    fn pure_exploitation_picks_best() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..1000 {
            assert_eq!(cstr_choose(&[5.0, 1.0, 1.0], 1.0, &mut rng), Ok(0));
        }
    }

    #[test]
    fn exploitation_ties_are_spread() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let mut hits = [0usize; 3];
        for _ in 0..3000 {
            hits[cstr_choose(&[2.0, 1.0, 2.0], 1.0, &mut rng).unwrap()] += 1;
        }
        assert_eq!(hits[1], 0);
        assert!(hits[0] > 1300 && hits[2] > 1300, "{hits:?}");
    }

    #[test]
    fn dominance_count_chain() {
        let costs = [(1.0, 1.0), (2.0, 2.0), (3.0, 3.0)];
        let mut counts = [0; 3];
        dominance_counts(&costs, Orientation::Minimize, &mut counts);
        assert_eq!(counts, [2, 1, 0]);
        let p = dstr_probabilities(&counts);
        assert_eq!(p, [3.0 / 6.0, 2.0 / 6.0, 1.0 / 6.0]);
        dominance_counts(&costs, Orientation::Maximize, &mut counts);
        assert_eq!(counts, [0, 1, 2]);
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert_eq!(
            dstr_choose(&costs, Orientation::Minimize, 1.0, &mut rng),
            Ok(0)
        );
        assert_eq!(
            dstr_choose(&costs, Orientation::Maximize, 1.0, &mut rng),
            Ok(2)
        );
    }

    #[test]
    fn incomparable_candidates_are_uniform() {
        let costs = [(1.0, 4.0), (2.0, 3.0), (3.0, 2.0), (4.0, 1.0)];
        let mut counts = [9; 4];
        dominance_counts(&costs, Orientation::Maximize, &mut counts);
        assert_eq!(counts, [0; 4]);
        assert_eq!(dstr_probabilities(&counts), [0.25; 4]);
    }

    #[test]
    fn probabilities_sum_to_one() {
        let p = cstr_probabilities(&[0.1, 3.0, 1e-6, 2.5]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        let p = dstr_probabilities(&[0, 3, 1, 7, 2]);
        assert!((p.iter().sum::<f64>() - 1.0).abs() < 1e-9);
    }
}
