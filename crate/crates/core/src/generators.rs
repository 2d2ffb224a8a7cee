//! Random graph sources: binomial random graphs, the pairing (configuration)
//! model, and the exact isolation probability of a vertex set under a
//! uniformly random pairing.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::rng::{below, open_unit, RngSeed};
use crate::scalar::Scalar;

/// Per-vertex degrees with an even total `2M`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DegreeSequence {
    degrees: Vec<u32>,
    sum: u64,
}

impl DegreeSequence {
    pub fn new(degrees: Vec<u32>) -> Result<Self> {
        let sum: u64 = degrees.iter().map(|&d| d as u64).sum();
        if sum % 2 == 1 {
            return Err(Error::OddDegreeSum(sum));
        }
        Ok(DegreeSequence { degrees, sum })
    }

    /// Whitespace-separated non-negative integers, one per vertex.
    pub fn parse(text: &str) -> Result<Self> {
        let mut degrees = Vec::new();
        for (i, line) in text.lines().enumerate() {
            for tok in line.split_whitespace() {
                degrees.push(tok.parse::<u32>().map_err(|e| Error::Parse {
                    line: i + 1,
                    reason: format!("`{tok}`: {e}"),
                })?);
            }
        }
        Self::new(degrees)
    }

    pub fn regular(n: usize, d: u32) -> Result<Self> {
        Self::new(vec![d; n])
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    pub fn n(&self) -> usize {
        self.degrees.len()
    }

    /// Total degree `2M`.
    pub fn sum(&self) -> u64 {
        self.sum
    }

    /// Number of pairs `M`.
    pub fn pairs(&self) -> u64 {
        self.sum / 2
    }

    /// Minimum degree at least two, as required of a core degree sequence.
    pub fn is_core_sequence(&self) -> bool {
        self.degrees.iter().all(|&d| d >= 2)
    }
}

/// Samples `G(n, p)`.
///
/// Pairs `(w, v)` with `w < v` are visited in the order
/// `(0,1), (0,2), (1,2), (0,3), ...` and the gaps between present pairs are
/// drawn from the geometric distribution, so the expected running time is
/// `O(n + e*)`. Logarithms come from `libm` so the output is the same on
/// every platform.
pub fn sample_gnp(n: usize, p: f64, seed: &RngSeed) -> Result<Graph> {
    if !(0.0..=1.0).contains(&p) || p.is_nan() {
        return Err(Error::param("p", format!("{p} is outside [0, 1]")));
    }
    let mut edges = Vec::new();
    if p == 1.0 {
        for v in 1..n {
            for w in 0..v {
                edges.push((w, v));
            }
        }
    } else if p > 0.0 && n > 1 {
        let mut rng = seed.rng_for("gnp");
        let log_q = libm::log1p(-p);
        let mut v: u64 = 1;
        let mut w: i64 = -1;
        let n = n as u64;
        while v < n {
            let r = open_unit(&mut rng);
            let skip = (libm::log(r) / log_q).floor();
            // A skip beyond the remaining pair count ends the scan.
            if skip >= (n * n) as f64 {
                break;
            }
            w += 1 + skip as i64;
            while w >= v as i64 && v < n {
                w -= v as i64;
                v += 1;
            }
            if v < n {
                edges.push((w as usize, v as usize));
            }
        }
    }
    Graph::build(n, &edges, false)
}

/// Projects a uniformly random perfect matching of the `2M` degree points
/// onto the vertices. Loops and parallel edges are kept.
pub fn sample_configuration(ds: &DegreeSequence, seed: &RngSeed) -> Result<Graph> {
    let mut points: Vec<usize> = Vec::with_capacity(ds.sum() as usize);
    for (v, &d) in ds.degrees().iter().enumerate() {
        points.extend(std::iter::repeat_n(v, d as usize));
    }
    let mut rng = seed.rng_for("pairing");
    for i in (1..points.len()).rev() {
        let j = below(&mut rng, i as u64 + 1) as usize;
        points.swap(i, j);
    }
    let edges: Vec<_> = points.chunks_exact(2).map(|c| (c[0], c[1])).collect();
    Graph::build(ds.n(), &edges, true)
}

fn check_isolation_args(pairs: u64, set_degree: u64) -> Result<()> {
    if set_degree % 2 == 1 {
        return Err(Error::param(
            "set_degree",
            format!("{set_degree} is odd; isolation is impossible"),
        ));
    }
    if set_degree > 2 * pairs {
        return Err(Error::param(
            "set_degree",
            format!("{set_degree} exceeds the total degree {}", 2 * pairs),
        ));
    }
    Ok(())
}

/// Probability that a uniformly random pairing on `2M` points matches the
/// `set_degree` points of a vertex set only among themselves:
/// `((dS-1)/(2M-1)) ((dS-3)/(2M-3)) ... (1/(2M-dS+1))`, which equals
/// `C(M, dS/2) / C(2M, dS)`.
///
/// Evaluated as the product, so exact scalars give the exact rational.
pub fn pairing_isolation_probability<S: Scalar>(pairs: u64, set_degree: u64) -> Result<S> {
    check_isolation_args(pairs, set_degree)?;
    let mut p = S::one();
    let mut k = 0;
    while k < set_degree / 2 {
        p = p * S::ratio(set_degree - 1 - 2 * k, 2 * pairs - 1 - 2 * k);
        k += 1;
    }
    Ok(p)
}

/// Natural log of [`pairing_isolation_probability`] via log-gamma, usable
/// when `M` is far too large for the product.
pub fn pairing_isolation_ln(pairs: u64, set_degree: u64) -> Result<f64> {
    check_isolation_args(pairs, set_degree)?;
    Ok(ln_binomial(pairs as f64, (set_degree / 2) as f64)
        - ln_binomial(2.0 * pairs as f64, set_degree as f64))
}

pub(crate) fn ln_binomial(n: f64, k: f64) -> f64 {
    libm::lgamma(n + 1.0) - libm::lgamma(k + 1.0) - libm::lgamma(n - k + 1.0)
}
