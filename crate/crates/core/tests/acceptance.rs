//! End-to-end acceptance criteria. Run with `--nocapture` to see the
//! per-criterion report.

mod common;

use std::fs;
use std::path::PathBuf;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use stroketrap::features::report::ResultDocument;
use stroketrap::features::{
    circle_density, count_foreground_pixels, extract, render_overlay, score_all_pairs,
    ExtractionResult, PipelineParams, TRAPEZOID_LEVEL,
};
use stroketrap::geometry::{
    construct_trapezoid, polygon_area, signed_area, AffineTransform, Point,
};
use stroketrap::imaging::pnm::encode_pgm;
use stroketrap::imaging::BinaryImage;
use stroketrap::synthesis::{
    build_pair_db, render_synthetic, Edge, FillMode, Node, PairDbConfig, StrokeGraph,
};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn random_point(rng: &mut ChaCha8Rng, lo: f64, hi: f64) -> Point {
    Point::new(rng.gen_range(lo..hi), rng.gen_range(lo..hi))
}

fn random_image(rng: &mut ChaCha8Rng, max: usize) -> BinaryImage {
    let (w, h) = (rng.gen_range(1..=max), rng.gen_range(1..=max));
    let p = rng.gen_range(0.05..0.95);
    BinaryImage::from_fn(w, h, |_, _| rng.gen_bool(p)).unwrap()
}

fn pixel_count_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let start = Instant::now();
    let cases = 1000;
    let mut mismatches = 0;
    for _ in 0..cases {
        let img = random_image(&mut rng, 64);
        let (ci, cj) = loop {
            let a = random_point(&mut rng, -10.0, 74.0);
            let b = random_point(&mut rng, -10.0, 74.0);
            if a.distance(b) > 1e-3 {
                break (a, b);
            }
        };
        let q = construct_trapezoid(ci, rng.gen_range(0.5..20.0), cj, rng.gen_range(0.5..20.0))
            .unwrap();
        if count_foreground_pixels(&img, &q) != common::brute_force_count(&img, &q) {
            mismatches += 1;
        }
    }
    let secs = start.elapsed().as_secs_f64();
    check(
        mismatches == 0 && secs < 30.0,
        format!("{cases} cases, {mismatches} mismatches, {secs:.2} s"),
    )
}

fn geometry_suite() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let cases = 2000;
    let (mut chord, mut perp, mut area_rel) = (0.0f64, 0.0f64, 0.0f64);
    let mut wrong_orientation = 0;
    for _ in 0..cases {
        let ci = random_point(&mut rng, -500.0, 500.0);
        let cj = random_point(&mut rng, -500.0, 500.0);
        let (ri, rj) = (rng.gen_range(0.1..50.0), rng.gen_range(0.1..50.0));
        let q = construct_trapezoid(ci, ri, cj, rj).unwrap();
        if signed_area(&q) >= 0.0 {
            wrong_orientation += 1;
        }
        chord = chord
            .max((q[0].distance(q[1]) - 2.0 * ri).abs())
            .max((q[2].distance(q[3]) - 2.0 * rj).abs());
        let axis = cj - ci;
        for c in [q[1] - q[0], q[3] - q[2]] {
            perp = perp.max((axis.dot(c) / (axis.norm() * c.norm())).asin().abs());
        }
        let expected = (ri + rj) * ci.distance(cj);
        area_rel = area_rel.max((polygon_area(&q) - expected).abs() / expected);
    }
    check(
        wrong_orientation == 0 && chord <= 1e-6 && perp <= 1e-6 && area_rel <= 1e-6,
        format!(
            "{cases} cases, {wrong_orientation} counter-clockwise, max chord err {chord:.1e}, \
             max angle err {perp:.1e} rad, max area rel err {area_rel:.1e}"
        ),
    )
}

fn random_transform(rng: &mut ChaCha8Rng) -> AffineTransform {
    loop {
        let mut e = || rng.gen_range(-3.0f64..3.0);
        let m = [[e(), e()], [e(), e()]];
        let t = [rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)];
        if (m[0][0] * m[1][1] - m[0][1] * m[1][0]).abs() >= 0.5 {
            return AffineTransform::new(m, t).unwrap();
        }
    }
}

fn affine_axioms() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let cases = 1000;
    let id = AffineTransform::identity();
    let mut worst = 0.0f64;
    let mut closure_failures = 0;
    for _ in 0..cases {
        let (a, b, c) = (
            random_transform(&mut rng),
            random_transform(&mut rng),
            random_transform(&mut rng),
        );
        let ab = a.compose(&b);
        if AffineTransform::new(ab.matrix(), ab.offset()).is_err()
            || (ab.det() - a.det() * b.det()).abs() > 1e-9 * (a.det() * b.det()).abs()
        {
            closure_failures += 1;
        }
        let p = random_point(&mut rng, -100.0, 100.0);
        let scale = a.apply(p).norm().max(1.0);
        let errs = [
            ab.compose(&c)
                .apply(p)
                .distance(a.compose(&b.compose(&c)).apply(p))
                / scale.max(ab.compose(&c).apply(p).norm()),
            a.compose(&id).apply(p).distance(a.apply(p)) / scale,
            id.compose(&a).apply(p).distance(a.apply(p)) / scale,
            a.inverse().compose(&a).apply(p).distance(p),
            a.compose(&a.inverse()).apply(p).distance(p),
        ];
        worst = errs.iter().copied().fold(worst, f64::max);
    }
    check(
        closure_failures == 0 && worst <= 1e-9,
        format!("{cases} triples, {closure_failures} closure failures, max err {worst:.1e}"),
    )
}

fn clustering_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let scenes = 50;
    let mut failures = Vec::new();
    for k in 0..scenes {
        let blobs = rng.gen_range(2..=6);
        let img = common::blob_scene(&mut rng, blobs, 128, 10.0);
        let expected = common::connected_components(&img);
        let result = extract(&img, &PipelineParams::default()).map_err(|e| e.to_string())?;
        let got: Vec<_> = result
            .clustering
            .clusters
            .iter()
            .map(|c| c.points.clone())
            .collect();
        if expected.len() != blobs || got != expected || !result.clustering.noise.is_empty() {
            failures.push(format!(
                "scene {k}: {} blobs, {} clusters",
                blobs,
                got.len()
            ));
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{scenes} scenes, {} mismatched {:?}",
            failures.len(),
            failures
        ),
    )
}

fn round_trip() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let graphs = 25;
    let (mut worst_c, mut worst_r) = (0.0f64, 0.0f64);
    let mut count_failures = 0;
    for _ in 0..graphs {
        let nodes = rng.gen_range(2..=5);
        let g = common::spaced_graph(&mut rng, nodes, 160);
        let img = render_synthetic(&g, FillMode::Solid).map_err(|e| e.to_string())?;
        let result = extract(&img, &PipelineParams::default()).map_err(|e| e.to_string())?;
        let clusters = &result.clustering.clusters;
        if clusters.len() != nodes {
            count_failures += 1;
            continue;
        }
        let mut used = vec![false; nodes];
        for n in g.nodes() {
            let (k, c) = clusters
                .iter()
                .enumerate()
                .filter(|(k, _)| !used[*k])
                .min_by(|a, b| {
                    a.1.centroid
                        .distance(n.centroid)
                        .total_cmp(&b.1.centroid.distance(n.centroid))
                })
                .unwrap();
            used[k] = true;
            worst_c = worst_c.max(c.centroid.distance(n.centroid));
            worst_r = worst_r.max((c.radius - n.radius).abs());
        }
    }
    check(
        count_failures == 0 && worst_c <= 2.0 && worst_r <= 2.0,
        format!(
            "{graphs} graphs, {count_failures} node-count mismatches, \
             max centroid err {worst_c:.3} px, max radius err {worst_r:.3} px"
        ),
    )
}

fn snapshot(dir: &std::path::Path) -> Vec<(String, Vec<u8>)> {
    let mut files: Vec<_> = fs::read_dir(dir)
        .unwrap()
        .map(|e| {
            let e = e.unwrap();
            (
                e.file_name().to_string_lossy().into_owned(),
                fs::read(e.path()).unwrap(),
            )
        })
        .collect();
    files.sort();
    files
}

fn determinism() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let mut inputs: Vec<PathBuf> = Vec::new();
    for k in 0..4 {
        let blobs = rng.gen_range(2..=5);
        let img = common::blob_scene(&mut rng, blobs, 96, 10.0);
        let path = dir.path().join(format!("in{k}.pgm"));
        fs::write(&path, encode_pgm(&img.to_gray())).unwrap();
        inputs.push(path);
    }

    let params = PipelineParams {
        sample: stroketrap::clustering::SampleConfig::new(0.7, 42).unwrap(),
        ..PipelineParams::default()
    };
    let mut extract_runs = Vec::new();
    for threads in [1, 4] {
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap();
        let docs: Vec<String> = pool.install(|| {
            inputs
                .iter()
                .map(|p| {
                    let gray = stroketrap::imaging::pnm::read_gray(p).unwrap();
                    let bin = stroketrap::imaging::Preprocess::default()
                        .apply(&gray)
                        .unwrap();
                    let r = extract(&bin, &params).unwrap();
                    ResultDocument::new(&r, &params, None, None, None)
                        .to_json()
                        .unwrap()
                })
                .collect()
        });
        extract_runs.push(docs);
    }

    let mut db_runs = Vec::new();
    for (k, workers) in [(0, 1), (1, 4), (2, 4)] {
        let out = dir.path().join(format!("db{k}"));
        let cfg = PairDbConfig {
            pipeline: params,
            fill: FillMode::Stochastic { seed: 9 },
            workers: Some(workers),
            ..PairDbConfig::default()
        };
        build_pair_db(&inputs, &cfg, &out).map_err(|e| e.to_string())?;
        db_runs.push(snapshot(&out));
    }
    let files = db_runs[0].len();
    check(
        extract_runs[0] == extract_runs[1]
            && db_runs[0] == db_runs[1]
            && db_runs[1] == db_runs[2]
            && files == 13,
        format!(
            "{} extract docs x 2 pools, pair db {files} files x 3 runs (workers 1, 4, 4)",
            inputs.len()
        ),
    )
}

fn fixtures() -> Vec<BinaryImage> {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut out = Vec::new();
    for _ in 0..8 {
        let blobs = rng.gen_range(2..=6);
        out.push(common::blob_scene(&mut rng, blobs, 96, 10.0));
    }
    for _ in 0..6 {
        let nodes: Vec<Node> = (0..rng.gen_range(3..=6))
            .map(|_| Node {
                centroid: random_point(&mut rng, 12.0, 84.0),
                radius: rng.gen_range(2.0..4.5),
            })
            .collect();
        let n = nodes.len();
        let mut edges = Vec::new();
        for j in 1..n {
            if rng.gen_bool(0.5) {
                edges.push(Edge {
                    i: j - 1,
                    j,
                    density: rng.gen_range(0.3..1.0),
                });
            }
        }
        let g = StrokeGraph::new(nodes, edges, 96, 96).unwrap();
        out.push(render_synthetic(&g, FillMode::Stochastic { seed: rng.gen() }).unwrap());
    }
    out
}

// Top `n` by density descending, ties by source pair.
fn oracle_top(
    result: &ExtractionResult,
    img: &BinaryImage,
    params: &PipelineParams,
    n: usize,
) -> Vec<(usize, usize)> {
    let mut all: Vec<_> = score_all_pairs(img, &result.clustering)
        .into_iter()
        .filter(|s| s.area >= params.min_area && s.density >= params.min_density)
        .collect();
    all.sort_by(|a, b| {
        b.density
            .total_cmp(&a.density)
            .then(a.trap.src.cmp(&b.trap.src))
    });
    all.iter().take(n).map(|s| s.trap.src).collect()
}

fn near_outline(p: Point, quads: &[[Point; 4]]) -> bool {
    quads.iter().any(|q| {
        (0..4).any(|k| {
            let (a, b) = (q[k], q[(k + 1) % 4]);
            let d = b - a;
            let t = ((p - a).dot(d) / d.dot(d)).clamp(0.0, 1.0);
            p.distance(a + d * t) <= 1.0
        })
    })
}

fn ordering_and_overlay() -> Outcome {
    let imgs = fixtures();
    let mut problems = Vec::new();
    let mut drawn_total = 0;
    for (k, img) in imgs.iter().enumerate() {
        for n_t in [0, 1, 3, 50] {
            let params = PipelineParams {
                max_trapezoids: n_t,
                ..PipelineParams::default()
            };
            let result = extract(img, &params).map_err(|e| e.to_string())?;
            if result
                .trapezoids
                .windows(2)
                .any(|w| w[0].density < w[1].density)
            {
                problems.push(format!("fixture {k}: densities increase"));
            }
            let plotted: Vec<_> = result.plotted().iter().map(|s| s.trap.src).collect();
            if plotted != oracle_top(&result, img, &params, n_t) {
                problems.push(format!("fixture {k}, N_T={n_t}: wrong top set"));
            }
            let quads: Vec<_> = result.plotted().iter().map(|s| s.trap.vertices).collect();
            let overlay = render_overlay(img, &result, n_t);
            for row in 0..overlay.height() {
                for col in 0..overlay.width() {
                    if overlay.get(row, col) == TRAPEZOID_LEVEL
                        && !near_outline(Point::new(row as f64, col as f64), &quads)
                    {
                        problems.push(format!(
                            "fixture {k}, N_T={n_t}: stray pixel ({row}, {col})"
                        ));
                    }
                }
            }
            for q in &quads {
                for v in q {
                    let (r, c) = (v.row.round(), v.col.round());
                    let inside = r >= 0.0
                        && c >= 0.0
                        && (r as usize) < img.height()
                        && (c as usize) < img.width();
                    if inside && overlay.get(r as usize, c as usize) != TRAPEZOID_LEVEL {
                        problems.push(format!("fixture {k}, N_T={n_t}: vertex not drawn"));
                    }
                }
            }
            drawn_total += quads.len();
        }
    }
    problems.dedup();
    check(
        problems.is_empty(),
        format!(
            "{} fixtures x 4 N_T values, {drawn_total} outlines checked, problems {problems:?}",
            imgs.len()
        ),
    )
}

fn circle_density_sanity() -> Outcome {
    let img = BinaryImage::from_fn(64, 64, |_, _| true).unwrap();
    let centers = [
        Point::new(31.5, 31.5),
        Point::new(32.0, 32.0),
        Point::new(31.25, 32.6),
    ];
    let densities: Vec<f64> = centers
        .iter()
        .map(|&c| circle_density(&img, c, 10.0).1)
        .collect();
    check(
        densities.iter().all(|d| (0.93..=1.07).contains(d)),
        format!("r = 10, densities {densities:.4?}"),
    )
}

#[test]
fn acceptance() {
    let criteria: [Criterion; 8] = [
        ("pixel-count oracle", pixel_count_oracle),
        ("trapezoid geometry", geometry_suite),
        ("affine group axioms", affine_axioms),
        ("clustering soundness", clustering_soundness),
        ("render/extract round trip", round_trip),
        ("determinism", determinism),
        ("density ordering and overlay top-N_T", ordering_and_overlay),
        ("circle density sanity", circle_density_sanity),
    ];
    let mut failed = Vec::new();
    for (k, (name, run)) in criteria.iter().enumerate() {
        let outcome = run();
        let (tag, detail) = match &outcome {
            Ok(d) => ("PASS", d),
            Err(d) => ("FAIL", d),
        };
        println!("[{tag}] {}. {name}: {detail}", k + 1);
        if outcome.is_err() {
            failed.push(k + 1);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
