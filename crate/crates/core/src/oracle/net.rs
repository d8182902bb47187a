//! Exact region counting for small ReLU networks on a one-dimensional
//! input.
//!
//! Every pre-activation of every layer is piecewise affine in the
//! input, so its zeros can be solved exactly segment by segment. The
//! union of all zeros cuts the line into segments on which the full
//! activation pattern is constant; evaluating the network at one
//! witness per segment plus every breakpoint then yields the exact set
//! of attained patterns, deduplicated globally so the result is a
//! pattern count rather than a segment count.

use alloc::collections::BTreeSet;
use alloc::vec;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

use crate::bound::Architecture;
use crate::error::Error;
use crate::histogram::Histogram;

/// One fully connected ReLU layer; `weights[i]` is the row of neuron `i`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetLayer {
    pub weights: Vec<Vec<BigRational>>,
    pub biases: Vec<BigRational>,
}

impl NetLayer {
    pub fn width(&self) -> usize {
        self.biases.len()
    }
}

/// A ReLU network with rational parameters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalNet {
    layers: Vec<NetLayer>,
}

impl RationalNet {
    /// Validates that consecutive layer shapes fit together.
    pub fn new(layers: Vec<NetLayer>) -> Result<Self, Error> {
        if layers.is_empty() {
            return Err(Error::LayerShape { layer: 0 });
        }
        let mut fan_in = None;
        for (index, layer) in layers.iter().enumerate() {
            if layer.weights.is_empty() || layer.weights.len() != layer.biases.len() {
                return Err(Error::LayerShape { layer: index });
            }
            let row_len = layer.weights[0].len();
            if row_len == 0 || layer.weights.iter().any(|row| row.len() != row_len) {
                return Err(Error::LayerShape { layer: index });
            }
            if let Some(expected) = fan_in {
                if row_len != expected {
                    return Err(Error::LayerShape { layer: index });
                }
            }
            fan_in = Some(layer.width());
        }
        Ok(RationalNet { layers })
    }

    pub fn layers(&self) -> &[NetLayer] {
        &self.layers
    }

    pub fn input_dim(&self) -> usize {
        self.layers[0].weights[0].len()
    }

    pub fn widths(&self) -> Vec<usize> {
        self.layers.iter().map(NetLayer::width).collect()
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn architecture(&self) -> Architecture {
        Architecture::new(self.input_dim(), self.widths()).unwrap()
    }
}

/// Exact result of a region count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct NetRegions {
    /// Number of distinct attained activation patterns.
    pub count: u64,
    /// For each layer, the histogram over distinct patterns up to that
    /// layer of the number of active neurons in it.
    pub per_layer: Vec<Histogram>,
    /// Histogram over distinct full patterns of the minimum active
    /// count across layers: the quantity block families bound.
    pub min_histogram: Histogram,
    /// All input points where some pre-activation changes sign.
    pub breakpoints: Vec<BigRational>,
}

const BREAKPOINT_BUDGET: usize = 100_000;

#[derive(Clone)]
struct Affine {
    slope: BigRational,
    offset: BigRational,
}

impl Affine {
    fn eval(&self, x: &BigRational) -> BigRational {
        &self.slope * x + &self.offset
    }
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

/// A point strictly inside segment `s` of the line cut at `points`.
fn segment_witness(points: &[BigRational], s: usize) -> BigRational {
    if points.is_empty() {
        int(0)
    } else if s == 0 {
        &points[0] - int(1)
    } else if s == points.len() {
        &points[points.len() - 1] + int(1)
    } else {
        (&points[s - 1] + &points[s]) / int(2)
    }
}

/// Counts the attained activation patterns of a net with scalar input.
pub fn count_regions_1d_net(net: &RationalNet) -> Result<NetRegions, Error> {
    if net.input_dim() != 1 {
        return Err(Error::InputDimension { expected: 1, found: net.input_dim() });
    }

    let mut points: Vec<BigRational> = Vec::new();
    // Current hidden state as one affine piece per neuron per segment.
    let mut pieces: Vec<Vec<Affine>> =
        vec![vec![Affine { slope: int(1), offset: int(0) }]];

    for layer in net.layers() {
        let segments = points.len() + 1;
        let mut pre: Vec<Vec<Affine>> = Vec::with_capacity(layer.width());
        for (row, bias) in layer.weights.iter().zip(&layer.biases) {
            let mut neuron = Vec::with_capacity(segments);
            for s in 0..segments {
                let mut slope = BigRational::zero();
                let mut offset = bias.clone();
                for (w, input) in row.iter().zip(&pieces) {
                    if !w.is_zero() {
                        slope += w * &input[s].slope;
                        offset += w * &input[s].offset;
                    }
                }
                neuron.push(Affine { slope, offset });
            }
            pre.push(neuron);
        }

        // New breakpoints: zero crossings strictly inside a segment.
        let mut fresh: Vec<BigRational> = Vec::new();
        for neuron in &pre {
            for (s, piece) in neuron.iter().enumerate() {
                if piece.slope.is_zero() {
                    continue;
                }
                let zero = -(&piece.offset / &piece.slope);
                let above_lo = s == 0 || points[s - 1] < zero;
                let below_hi = s == points.len() || zero < points[s];
                if above_lo && below_hi {
                    fresh.push(zero);
                }
            }
        }
        fresh.sort();
        fresh.dedup();
        if points.len() + fresh.len() > BREAKPOINT_BUDGET {
            return Err(Error::BreakpointBudget { limit: BREAKPOINT_BUDGET });
        }
        let old_points = points.clone();
        points.extend(fresh);
        points.sort();
        points.dedup();

        // Re-cut each pre-activation along the refined segmentation and
        // apply the rectifier: a piece is kept where the sign on the
        // open segment is positive, zeroed otherwise.
        let new_segments = points.len() + 1;
        let mut next: Vec<Vec<Affine>> = Vec::with_capacity(pre.len());
        for neuron in &pre {
            let mut refined = Vec::with_capacity(new_segments);
            for s in 0..new_segments {
                let witness = segment_witness(&points, s);
                let old_s = old_points.partition_point(|p| p < &witness);
                let piece = &neuron[old_s];
                if piece.eval(&witness).is_positive() {
                    refined.push(piece.clone());
                } else {
                    refined.push(Affine { slope: int(0), offset: int(0) });
                }
            }
            next.push(refined);
        }
        pieces = next;
    }

    // Evaluation points: one interior witness per segment plus every
    // breakpoint, in order.
    let mut eval_points: Vec<BigRational> = Vec::new();
    for s in 0..=points.len() {
        eval_points.push(segment_witness(&points, s));
        if s < points.len() {
            eval_points.push(points[s].clone());
        }
    }

    let widths = net.widths();
    let mut prefixes: Vec<BTreeSet<Vec<bool>>> = vec![BTreeSet::new(); widths.len()];
    let mut full: BTreeSet<Vec<bool>> = BTreeSet::new();
    for x in &eval_points {
        let mut state = vec![x.clone()];
        let mut pattern: Vec<bool> = Vec::new();
        for (l, layer) in net.layers().iter().enumerate() {
            let mut out = Vec::with_capacity(layer.width());
            for (row, bias) in layer.weights.iter().zip(&layer.biases) {
                let mut z = bias.clone();
                for (w, v) in row.iter().zip(&state) {
                    z += w * v;
                }
                let active = z.is_positive();
                pattern.push(active);
                out.push(if active { z } else { BigRational::zero() });
            }
            state = out;
            prefixes[l].insert(pattern.clone());
        }
        full.insert(pattern);
    }

    let mut per_layer = Vec::with_capacity(widths.len());
    let mut start = 0usize;
    for (l, &w) in widths.iter().enumerate() {
        let mut counts = vec![0u64; w + 1];
        for pattern in &prefixes[l] {
            let active = pattern[start..start + w].iter().filter(|&&b| b).count();
            counts[active] += 1;
        }
        per_layer.push(Histogram::from_u64_entries(&counts));
        start += w;
    }

    let cap = *widths.iter().min().unwrap();
    let mut min_counts = vec![0u64; cap + 1];
    for pattern in &full {
        let mut start = 0usize;
        let mut least = usize::MAX;
        for &w in &widths {
            let active = pattern[start..start + w].iter().filter(|&&b| b).count();
            least = least.min(active);
            start += w;
        }
        min_counts[least] += 1;
    }

    Ok(NetRegions {
        count: full.len() as u64,
        per_layer,
        min_histogram: Histogram::from_u64_entries(&min_counts),
        breakpoints: points,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hist;

    fn layer(rows: &[(&[i64], i64)]) -> NetLayer {
        NetLayer {
            weights: rows.iter().map(|(r, _)| r.iter().map(|&w| int(w)).collect()).collect(),
            biases: rows.iter().map(|(_, b)| int(*b)).collect(),
        }
    }

    #[test]
    fn saturating_three_neuron_example() {
        // h(x) = (relu(1 - x), relu(x), relu(x - 2))
        let net = RationalNet::new(vec![layer(&[
            (&[-1], 1),
            (&[1], 0),
            (&[1], -2),
        ])])
        .unwrap();
        let regions = count_regions_1d_net(&net).unwrap();
        assert_eq!(regions.count, 4);
        assert_eq!(regions.per_layer, vec![hist![0, 2, 2]]);
        assert_eq!(regions.min_histogram, hist![0, 2, 2]);
        assert_eq!(regions.breakpoints, vec![int(0), int(1), int(2)]);
    }

    #[test]
    fn single_layer_distinct_breakpoints() {
        for p1 in 1..=6i64 {
            let rows: Vec<(Vec<BigRational>, BigRational)> =
                (1..=p1).map(|i| (vec![int(1)], int(-i))).collect();
            let net = RationalNet::new(vec![NetLayer {
                weights: rows.iter().map(|(r, _)| r.clone()).collect(),
                biases: rows.iter().map(|(_, b)| b.clone()).collect(),
            }])
            .unwrap();
            let regions = count_regions_1d_net(&net).unwrap();
            assert_eq!(regions.count, p1 as u64 + 1);
        }
    }

    #[test]
    fn two_layer_composition_refines_segments() {
        // First layer folds the line at 0 and 1; the second layer cuts
        // the folded value, generating breakpoints not present in the
        // first layer.
        let net = RationalNet::new(vec![
            layer(&[(&[1], 0), (&[-1], 1)]),
            layer(&[(&[1, -1], 0), (&[1, 1], -1)]),
        ])
        .unwrap();
        let regions = count_regions_1d_net(&net).unwrap();
        assert!(regions.count >= 4);
        assert!(regions.breakpoints.len() >= 3);
        assert_eq!(regions.per_layer.len(), 2);
        assert_eq!(regions.per_layer[1].l1_norm(), (regions.count as u64).into());
    }

    #[test]
    fn concurrent_breakpoints_merge_patterns() {
        // Both neurons vanish at the origin; the origin's pattern is
        // all-inactive and distinct from either side.
        let net = RationalNet::new(vec![layer(&[(&[1], 0), (&[-1], 0)])]).unwrap();
        let regions = count_regions_1d_net(&net).unwrap();
        assert_eq!(regions.count, 3);
        assert_eq!(regions.per_layer, vec![hist![1, 2]]);
    }

    #[test]
    fn constant_neurons_produce_one_region() {
        let net = RationalNet::new(vec![layer(&[(&[0], 1), (&[0], -1)])]).unwrap();
        let regions = count_regions_1d_net(&net).unwrap();
        assert_eq!(regions.count, 1);
        assert_eq!(regions.per_layer, vec![hist![0, 1]]);
        assert!(regions.breakpoints.is_empty());
    }

    #[test]
    fn shape_validation() {
        assert_eq!(RationalNet::new(vec![]), Err(Error::LayerShape { layer: 0 }));
        let ragged = NetLayer {
            weights: vec![vec![int(1)], vec![int(1), int(2)]],
            biases: vec![int(0), int(0)],
        };
        assert_eq!(RationalNet::new(vec![ragged]), Err(Error::LayerShape { layer: 0 }));
        let first = layer(&[(&[1], 0)]);
        let second = layer(&[(&[1, 1], 0)]);
        assert_eq!(
            RationalNet::new(vec![first, second]),
            Err(Error::LayerShape { layer: 1 })
        );
        let wide = RationalNet::new(vec![layer(&[(&[1, 2], 0)])]).unwrap();
        assert_eq!(
            count_regions_1d_net(&wide),
            Err(Error::InputDimension { expected: 1, found: 2 })
        );
    }

    #[test]
    fn positive_rescaling_keeps_the_pattern_set() {
        let net = RationalNet::new(vec![
            layer(&[(&[2], -1), (&[-3], 2)]),
            layer(&[(&[1, 1], -1), (&[2, -1], 0), (&[1, 0], -2)]),
        ])
        .unwrap();
        let mut scaled_layers = net.layers().to_vec();
        let second = &mut scaled_layers[1];
        for (i, row) in second.weights.iter_mut().enumerate() {
            let factor = int(3 + i as i64);
            for w in row.iter_mut() {
                *w = &*w * &factor;
            }
            second.biases[i] = &second.biases[i] * &factor;
        }
        let scaled = RationalNet::new(scaled_layers).unwrap();
        let a = count_regions_1d_net(&net).unwrap();
        let b = count_regions_1d_net(&scaled).unwrap();
        assert_eq!(a.count, b.count);
        assert_eq!(a.per_layer, b.per_layer);
        assert_eq!(a.min_histogram, b.min_histogram);
    }
}
