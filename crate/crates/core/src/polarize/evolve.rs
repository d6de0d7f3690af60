use std::fmt::Write as _;

use serde::Serialize;

use super::bhat::Bhat;
use super::table::{classical_reduce, ClassicalTable};
use crate::channels::CqChannel;
use crate::config::Tolerances;
use crate::error::{Error, Result};
use crate::report::{fmt_opt, fmt_real};

/// Deepest level the scalar evolution accepts (2^24 trackers).
pub const MAX_LEVEL: usize = 24;

/// Default cap on the classical table alphabet before bounding kicks in.
pub const DEFAULT_ALPHABET_CAP: usize = 32;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum EvolveMode {
    /// Table convolution on the classical reduction.
    ExactClassical,
    /// Interval recursion seeded with √F(W).
    FidelityBounds,
}

impl EvolveMode {
    pub fn parse(s: &str) -> Result<Self> {
        match s {
            "exact_classical" | "exact" => Ok(Self::ExactClassical),
            "fidelity_bounds" | "bounds" => Ok(Self::FidelityBounds),
            _ => Err(Error::Invalid(format!("unknown evolution mode '{s}'"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum TrackerKind {
    BhattacharyyaExact,
    FidelityBounds,
}

/// √F of one synthesized channel: an interval [lower, upper], collapsed to a
/// point when `exact` holds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScalarTracker {
    pub kind: TrackerKind,
    pub n: usize,
    /// 1-based synthesized-channel index.
    pub index: usize,
    pub lower: Bhat,
    pub upper: Bhat,
    /// True when no alphabet reduction occurred along the path.
    pub exact: bool,
}

impl ScalarTracker {
    /// Path bits, most significant first: 0 is minus, 1 is plus.
    pub fn path(&self) -> usize {
        self.index - 1
    }

    /// The path as a string of '-' and '+', first transform first.
    pub fn path_string(&self) -> String {
        (0..self.n)
            .map(|k| {
                if (self.path() >> (self.n - 1 - k)) & 1 == 1 {
                    '+'
                } else {
                    '-'
                }
            })
            .collect()
    }

    pub fn value(&self) -> Option<f64> {
        self.exact.then(|| self.upper.value())
    }

    /// log₂ N^β threshold exponent: the test value is 2^{−N^β}.
    fn threshold_exponent(&self, beta: f64) -> f64 {
        (self.n as f64 * beta).exp2()
    }

    /// upper < 2^{−N^β}.
    pub fn is_good(&self, beta: f64) -> bool {
        self.upper.log2() < -self.threshold_exponent(beta)
    }

    /// lower > 1 − 2^{−N^β}.
    pub fn is_poor(&self, beta: f64) -> bool {
        self.lower.log2_complement() < -self.threshold_exponent(beta)
    }
}

#[derive(Debug, Clone, Copy)]
pub struct EvolveOptions {
    pub alphabet_cap: usize,
    pub tol: Tolerances,
}

impl Default for EvolveOptions {
    fn default() -> Self {
        Self {
            alphabet_cap: DEFAULT_ALPHABET_CAP,
            tol: Tolerances::default(),
        }
    }
}

#[derive(Debug, Clone)]
enum Node {
    Exact(ClassicalTable),
    Bounded {
        degraded: ClassicalTable,
        upgraded: ClassicalTable,
    },
    Interval {
        lower: Bhat,
        upper: Bhat,
        commuting: bool,
    },
}

impl Node {
    fn child(&self, plus: bool, cap: usize) -> Node {
        match self {
            Node::Exact(t) => {
                let next = t.transform(plus);
                if next.len() > cap {
                    Node::Bounded {
                        degraded: next.degraded(cap),
                        upgraded: next.upgraded(cap),
                    }
                } else {
                    Node::Exact(next)
                }
            }
            Node::Bounded { degraded, upgraded } => Node::Bounded {
                degraded: degraded.transform(plus).degraded(cap),
                upgraded: upgraded.transform(plus).upgraded(cap),
            },
            &Node::Interval {
                lower,
                upper,
                commuting,
            } => {
                if plus {
                    Node::Interval {
                        lower: lower.square(),
                        upper: upper.square(),
                        commuting,
                    }
                } else {
                    Node::Interval {
                        lower: if commuting {
                            lower.minus_lower_commuting()
                        } else {
                            lower
                        },
                        upper: upper.minus_upper(lower),
                        commuting,
                    }
                }
            }
        }
    }

    fn tracker(&self, n: usize, index: usize) -> ScalarTracker {
        let (kind, lower, upper, exact) = match self {
            Node::Exact(t) => {
                let z = t.bhattacharyya();
                (TrackerKind::BhattacharyyaExact, z, z, true)
            }
            Node::Bounded { degraded, upgraded } => (
                TrackerKind::BhattacharyyaExact,
                upgraded.bhattacharyya(),
                degraded.bhattacharyya(),
                false,
            ),
            &Node::Interval { lower, upper, .. } => {
                (TrackerKind::FidelityBounds, lower, upper, false)
            }
        };
        ScalarTracker {
            kind,
            n,
            index,
            lower,
            upper,
            exact,
        }
    }
}

fn root_node(w: &CqChannel, mode: EvolveMode, opts: &EvolveOptions) -> Result<Node> {
    match mode {
        EvolveMode::ExactClassical => {
            let table = classical_reduce(w)?.table();
            Ok(if table.len() > opts.alphabet_cap {
                Node::Bounded {
                    degraded: table.degraded(opts.alphabet_cap),
                    upgraded: table.upgraded(opts.alphabet_cap),
                }
            } else {
                Node::Exact(table)
            })
        }
        EvolveMode::FidelityBounds => {
            let f = Bhat::new(w.root_fidelity()?);
            Ok(Node::Interval {
                lower: f,
                upper: f,
                commuting: w.commutator_norm()? <= opts.tol.commute,
            })
        }
    }
}

fn descend(
    node: &Node,
    depth: usize,
    n: usize,
    first_index: usize,
    cap: usize,
    out: &mut [ScalarTracker],
) {
    if depth == n {
        out[0] = node.tracker(n, first_index);
        return;
    }
    let half = out.len() / 2;
    let (lo, hi) = out.split_at_mut(half);
    let minus = node.child(false, cap);
    let plus = node.child(true, cap);
    if depth < 10 {
        rayon::join(
            || descend(&minus, depth + 1, n, first_index, cap, lo),
            || descend(&plus, depth + 1, n, first_index + half, cap, hi),
        );
    } else {
        descend(&minus, depth + 1, n, first_index, cap, lo);
        descend(&plus, depth + 1, n, first_index + half, cap, hi);
    }
}

/// √F trackers for all 2^n synthesized channels, index ascending.
pub fn evolve_scalar(w: &CqChannel, n: usize, mode: EvolveMode) -> Result<Vec<ScalarTracker>> {
    evolve_scalar_with(w, n, mode, &EvolveOptions::default())
}

pub fn evolve_scalar_with(
    w: &CqChannel,
    n: usize,
    mode: EvolveMode,
    opts: &EvolveOptions,
) -> Result<Vec<ScalarTracker>> {
    if n > MAX_LEVEL {
        return Err(Error::Resource(format!(
            "level {n} exceeds the limit {MAX_LEVEL}"
        )));
    }
    let root = root_node(w, mode, opts)?;
    let placeholder = root.tracker(0, 1);
    let mut out = vec![placeholder; 1 << n];
    descend(&root, 0, n, 1, opts.alphabet_cap.max(2), &mut out);
    Ok(out)
}

/// Tracker for a single index, following its path only.
pub fn track_index(
    w: &CqChannel,
    n: usize,
    index: usize,
    mode: EvolveMode,
) -> Result<ScalarTracker> {
    let len = 1usize << n;
    if index == 0 || index > len {
        return Err(Error::IndexOutOfRange {
            index,
            blocklength: len,
        });
    }
    let opts = EvolveOptions::default();
    let mut node = root_node(w, mode, &opts)?;
    for k in 0..n {
        node = node.child(((index - 1) >> (n - 1 - k)) & 1 == 1, opts.alphabet_cap);
    }
    Ok(node.tracker(n, index))
}

/// Fractions of good, poor and undecided indices.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PolarizationFractions {
    pub n: usize,
    pub beta: f64,
    pub good: f64,
    pub poor: f64,
    pub undecided: f64,
}

pub(crate) fn check_beta(beta: f64) -> Result<()> {
    if !(beta > 0.0 && beta < 1.0) {
        return Err(Error::Domain(format!("beta {beta} outside (0, 1)")));
    }
    Ok(())
}

pub fn fractions_of(trackers: &[ScalarTracker], beta: f64) -> PolarizationFractions {
    let total = trackers.len() as f64;
    let good = trackers.iter().filter(|t| t.is_good(beta)).count() as f64;
    let poor = trackers.iter().filter(|t| t.is_poor(beta)).count() as f64;
    PolarizationFractions {
        n: trackers.first().map_or(0, |t| t.n),
        beta,
        good: good / total,
        poor: poor / total,
        undecided: (total - good - poor) / total,
    }
}

/// Good: √F upper bound below 2^{−N^β}. Poor: lower bound above 1 − 2^{−N^β}.
pub fn polarization_fractions(
    w: &CqChannel,
    n: usize,
    beta: f64,
    mode: EvolveMode,
) -> Result<PolarizationFractions> {
    check_beta(beta)?;
    Ok(fractions_of(&evolve_scalar(w, n, mode)?, beta))
}

/// CSV with columns n,index,path,lower_log2,upper_log2,exact_value.
pub fn trajectory_csv(trackers: &[ScalarTracker]) -> String {
    let mut s = String::from("n,index,path,lower_log2,upper_log2,exact_value\n");
    for t in trackers {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{}",
            t.n,
            t.index,
            t.path_string(),
            fmt_real(t.lower.log2()),
            fmt_real(t.upper.log2()),
            fmt_opt(t.value())
        );
    }
    s
}
