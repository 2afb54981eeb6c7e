//! OPTICS reachability ordering and threshold-based cluster extraction.

use rayon::prelude::*;

use crate::imaging::Coord;

/// Reachability plot produced by [`optics_ordering`].
///
/// `order` lists point indices in visiting order; `reachability` and
/// `core_distance` are indexed by point, with `f64::INFINITY` standing in
/// for "undefined".
#[derive(Debug, Clone, PartialEq)]
pub struct Ordering {
    pub order: Vec<usize>,
    pub reachability: Vec<f64>,
    pub core_distance: Vec<f64>,
}

impl Ordering {
    /// Reachability values in visiting order.
    pub fn plot(&self) -> Vec<f64> {
        self.order.iter().map(|&i| self.reachability[i]).collect()
    }
}

fn dist(a: Coord, b: Coord) -> f64 {
    let dr = a.row as f64 - b.row as f64;
    let dc = a.col as f64 - b.col as f64;
    dr.hypot(dc)
}

/// Distance to the `min_pts`-th nearest point, the point itself counted
/// first; infinite when that neighbor is farther than `eps`.
fn core_distances(points: &[Coord], min_pts: usize, eps: f64) -> Vec<f64> {
    let n = points.len();
    if n < min_pts || min_pts == 0 {
        return vec![f64::INFINITY; n];
    }
    points
        .par_iter()
        .map(|&p| {
            let mut d: Vec<f64> = points.iter().map(|&q| dist(p, q)).collect();
            let (_, kth, _) = d.select_nth_unstable_by(min_pts - 1, f64::total_cmp);
            if *kth <= eps {
                *kth
            } else {
                f64::INFINITY
            }
        })
        .collect()
}

/// Computes the OPTICS visiting order and reachability distances.
///
/// Seeds are consumed by smallest reachability, ties by smallest index; a
/// new component starts at the smallest unprocessed index.
pub fn optics_ordering(points: &[Coord], min_pts: usize, eps: f64) -> Ordering {
    let n = points.len();
    let core = core_distances(points, min_pts, eps);
    let mut reach = vec![f64::INFINITY; n];
    let mut pending: Vec<usize> = (0..n).collect();
    let mut order = Vec::with_capacity(n);

    while !pending.is_empty() {
        let (slot, _) = pending
            .iter()
            .enumerate()
            .min_by(|(_, &a), (_, &b)| reach[a].total_cmp(&reach[b]).then(a.cmp(&b)))
            .expect("pending is non-empty");
        let p = pending.swap_remove(slot);
        order.push(p);
        if core[p].is_infinite() {
            continue;
        }
        let origin = points[p];
        for &q in &pending {
            let d = dist(origin, points[q]);
            if d <= eps {
                let candidate = core[p].max(d);
                if candidate < reach[q] {
                    reach[q] = candidate;
                }
            }
        }
    }

    Ordering {
        order,
        reachability: reach,
        core_distance: core,
    }
}

/// Linear-interpolated quantile of the finite values; `None` if there are
/// none.
pub fn finite_quantile(values: &[f64], q: f64) -> Option<f64> {
    let mut finite: Vec<f64> = values.iter().copied().filter(|v| v.is_finite()).collect();
    if finite.is_empty() {
        return None;
    }
    finite.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (finite.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    let frac = pos - lo as f64;
    Some(finite[lo] + (finite[hi] - finite[lo]) * frac)
}

/// Cuts the ordering at `threshold` the way a DBSCAN run with that radius
/// would: a point whose reachability exceeds the threshold starts a new
/// cluster if it is a core point at that radius, and is noise otherwise.
/// Clusters smaller than `min_pts` are dissolved into noise.
///
/// Returns a label per point (`None` = noise), labels numbered in order of
/// first appearance.
pub fn extract_clusters(ordering: &Ordering, threshold: f64, min_pts: usize) -> Vec<Option<usize>> {
    let n = ordering.reachability.len();
    let mut labels: Vec<Option<usize>> = vec![None; n];
    let mut current: Option<usize> = None;
    let mut next_label = 0;
    for &p in &ordering.order {
        if ordering.reachability[p] > threshold {
            if ordering.core_distance[p] <= threshold {
                current = Some(next_label);
                next_label += 1;
                labels[p] = current;
            }
        } else {
            labels[p] = current;
        }
    }

    let mut sizes = vec![0usize; next_label];
    for l in labels.iter().flatten() {
        sizes[*l] += 1;
    }
    let mut remap = vec![None; next_label];
    let mut kept = 0;
    for (label, &size) in sizes.iter().enumerate() {
        if size >= min_pts {
            remap[label] = Some(kept);
            kept += 1;
        }
    }
    labels
        .into_iter()
        .map(|l| l.and_then(|l| remap[l]))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn line(n: usize, row: usize) -> Vec<Coord> {
        (0..n).map(|c| Coord::new(row, c)).collect()
    }

    #[test]
    fn core_distance_counts_self() {
        let pts = line(6, 0);
        let o = optics_ordering(&pts, 5, f64::INFINITY);
        // ends see neighbors at 1,2,3,4; the middle sees 1,1,2,2
        assert_eq!(o.core_distance[0], 4.0);
        assert_eq!(o.core_distance[2], 2.0);
    }

    #[test]
    fn ordering_visits_every_point_once() {
        let mut pts = line(8, 0);
        pts.extend(line(8, 40));
        let o = optics_ordering(&pts, 3, f64::INFINITY);
        let mut seen = o.order.clone();
        seen.sort_unstable();
        assert_eq!(seen, (0..16).collect::<Vec<_>>());
        // exactly one infinite entry (the start) and one jump between lines
        let plot = o.plot();
        assert!(plot[0].is_infinite());
        assert_eq!(plot.iter().filter(|r| **r >= 40.0).count(), 2);
    }

    #[test]
    fn finite_eps_leaves_isolated_points_unreachable() {
        let pts = vec![Coord::new(0, 0), Coord::new(0, 1), Coord::new(0, 50)];
        let o = optics_ordering(&pts, 2, 5.0);
        assert!(o.reachability[2].is_infinite());
        assert_eq!(o.reachability[1], 1.0);
    }

    #[test]
    fn quantile_interpolates() {
        let v = [f64::INFINITY, 1.0, 2.0, 3.0, 4.0, 5.0];
        assert_eq!(finite_quantile(&v, 0.75), Some(4.0));
        assert_eq!(finite_quantile(&v, 0.5), Some(3.0));
        assert_eq!(finite_quantile(&[1.0, 2.0], 0.75), Some(1.75));
        assert_eq!(finite_quantile(&[f64::INFINITY], 0.75), None);
    }

    #[test]
    fn extraction_splits_at_jumps() {
        let mut pts = line(8, 0);
        pts.extend(line(8, 40));
        pts.push(Coord::new(20, 100));
        let o = optics_ordering(&pts, 3, f64::INFINITY);
        let labels = extract_clusters(&o, 3.0, 3);
        assert!(labels[..8].iter().all(|l| *l == labels[0] && l.is_some()));
        assert!(labels[8..16].iter().all(|l| *l == labels[8] && l.is_some()));
        assert_ne!(labels[0], labels[8]);
        assert_eq!(labels[16], None);
    }
}
