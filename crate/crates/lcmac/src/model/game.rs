//! Exact per-channel contention game.
//!
//! One tagged station plays against a population of competitors. At stage 0
//! every active station draws from its own (possibly post-backoff-skewed)
//! distribution; the strict minimum wins, stations tied at the minimum
//! advance to the next stage, and stages 1.. use fresh uniform draws over
//! the full window. The game ends with a unique winner or, if ties persist
//! past `s_max`, with an unresolved collision.
//!
//! Everything here is exact: the tie-set size after stage 0 is tracked as a
//! full distribution (a product of per-competitor generating polynomials),
//! and later stages evolve that distribution with exact uniform-draw
//! transition probabilities. A mean-field product approximation would be
//! cheaper but visibly wrong already for three stations.

/// One competitor class as seen from the tagged station: `count` stations,
/// each independently active with probability `activity`, drawing from the
/// normalized stage-0 distribution `stage0` when active.
pub(crate) struct Competitor<'a> {
    pub activity: f64,
    pub stage0: &'a [f64],
    pub count: usize,
}

/// Per-stage outcome probabilities for the tagged station, all joint (not
/// conditioned on reaching the stage).
pub(crate) struct GameOutcome {
    /// `stage_win[s]`: tagged station reaches stage `s` and wins it outright.
    pub stage_win: Vec<f64>,
    /// `theta[s]`: tagged station reaches stage `s`; `theta[0] = 1`.
    pub theta: Vec<f64>,
    /// `tie[s]`: tagged station reaches stage `s` and ties for the minimum
    /// there; `tie[s_max]` is the unresolved-collision probability.
    pub tie: Vec<f64>,
}

/// Solve the game for a tagged station drawing from `tagged_stage0` at
/// stage 0 against `competitors`, with uniform draws over `beta + 1` values
/// at stages `1..=s_max`.
pub(crate) fn resolve(
    beta: u32,
    s_max: u32,
    tagged_stage0: &[f64],
    competitors: &[Competitor],
) -> GameOutcome {
    let w = beta as usize + 1;
    debug_assert_eq!(tagged_stage0.len(), w);
    let stages = s_max as usize + 1;
    let total: usize = competitors.iter().map(|c| c.count).sum();

    let mut stage_win = vec![0.0; stages];
    let mut theta = vec![0.0; stages];
    let mut tie = vec![0.0; stages];
    theta[0] = 1.0;

    // Stage 0: for each tagged draw j, expand the product over competitors of
    //   (P[inactive or draws > j]  +  P[active and draws exactly j] * x).
    // The coefficient of x^r is the probability that exactly r competitors
    // tie with the tagged station at j while nobody undercuts it; r = 0 is an
    // outright win. States where some competitor draws below j carry no term
    // and are thereby excluded.
    let mut reach = vec![0.0; total + 1]; // reach[r]: tied with r others at stage 1
    let mut poly = Vec::with_capacity(total + 1);
    for (j, &p_draw) in tagged_stage0.iter().enumerate() {
        if p_draw == 0.0 {
            continue;
        }
        poly.clear();
        poly.push(1.0);
        for comp in competitors {
            let cdf_le: f64 = comp.stage0[..=j].iter().sum();
            let not_involved = 1.0 - comp.activity * cdf_le;
            let tie_at = comp.activity * comp.stage0[j];
            for _ in 0..comp.count {
                poly.push(0.0);
                for r in (1..poly.len()).rev() {
                    poly[r] = poly[r] * not_involved + poly[r - 1] * tie_at;
                }
                poly[0] *= not_involved;
            }
        }
        stage_win[0] += p_draw * poly[0];
        for (r, &p) in poly.iter().enumerate().skip(1) {
            reach[r] += p_draw * p;
        }
    }
    tie[0] = reach.iter().sum();

    if total == 0 || s_max == 0 {
        return GameOutcome {
            stage_win,
            theta,
            tie,
        };
    }

    // Uniform-stage transition table. With m tied competitors left and draws
    // uniform over w values:
    //   trans[m][r] = P(tagged at the strict minimum of the others' draws,
    //                   exactly r competitors tied with it)
    //               = sum_j (1/w) C(m,r) (1/w)^r ((w-1-j)/w)^(m-r)
    // so trans[m][0] is the win probability and rows sum to less than 1 (the
    // rest is the tagged station losing outright).
    let binom = pascal_rows(total);
    let mut trans = vec![Vec::new(); total + 1];
    for (m, row) in trans.iter_mut().enumerate().skip(1) {
        *row = vec![0.0; m + 1];
        for j in 0..w {
            let above = (w - 1 - j) as f64 / w as f64;
            for r in 0..=m {
                row[r] += (1.0 / w as f64)
                    * binom[m][r]
                    * (1.0 / w as f64).powi(r as i32)
                    * above.powi((m - r) as i32);
            }
        }
    }

    let mut next = vec![0.0; total + 1];
    for s in 1..stages {
        theta[s] = reach.iter().sum();
        next.iter_mut().for_each(|v| *v = 0.0);
        for (r, &p) in reach.iter().enumerate().skip(1) {
            if p == 0.0 {
                continue;
            }
            stage_win[s] += p * trans[r][0];
            for (r2, &t) in trans[r].iter().enumerate().skip(1) {
                next[r2] += p * t;
            }
        }
        tie[s] = next.iter().sum();
        std::mem::swap(&mut reach, &mut next);
    }

    GameOutcome {
        stage_win,
        theta,
        tie,
    }
}

/// Binomial coefficients up to row `n`, exact in f64 for the population
/// sizes used here.
fn pascal_rows(n: usize) -> Vec<Vec<f64>> {
    let mut rows: Vec<Vec<f64>> = Vec::with_capacity(n + 1);
    for m in 0..=n {
        let mut row = vec![1.0; m + 1];
        for r in 1..m {
            row[r] = rows[m - 1][r - 1] + rows[m - 1][r];
        }
        rows.push(row);
    }
    rows
}
