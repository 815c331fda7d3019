use serde::Serialize;

use crate::sieve::SparseSieve;

/// One read-off sieve point: the top `threshold` scientists by Q-factor
/// contain `tp` laureates and `fp` others.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NobelPoint {
    pub threshold: usize,
    pub tp: usize,
    pub fp: usize,
}

/// Laureates versus other scientists in a Q-factor ranking, known only at a
/// few thresholds read off published ROC and precision plots.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct EmbeddedNobelPoints {
    pub n_pos: usize,
    pub n_neg: usize,
    pub points: &'static [NobelPoint],
}

const fn pt(threshold: usize, tp: usize) -> NobelPoint {
    NobelPoint { threshold, tp, fp: threshold - tp }
}

static NOBEL: EmbeddedNobelPoints = EmbeddedNobelPoints {
    n_pos: 25,
    n_neg: 2890,
    points: &[pt(1, 0), pt(11, 3), pt(25, 5), pt(51, 10), pt(759, 25)],
};

pub fn embedded_nobel() -> &'static EmbeddedNobelPoints {
    &NOBEL
}

impl EmbeddedNobelPoints {
    pub fn point(&self, threshold: usize) -> Option<NobelPoint> {
        self.points.iter().copied().find(|p| p.threshold == threshold)
    }

    pub fn to_sparse(&self) -> SparseSieve {
        SparseSieve::new(self.n_pos, self.n_neg, self.points.iter().map(|p| (p.threshold, p.tp)).collect())
            .expect("embedded points are consistent")
    }
}
