//! Acceptance suite. Runs without the libtest harness so that every criterion
//! prints exactly one PASS/FAIL line; the process fails if any criterion does.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use skinfuse::cli::{cmd_compare, CompareArgs, ConfigArgs};
use skinfuse::colorspace::{lo_pixel, FeaturePairId, Interval, LO_BY_RANGE, LO_I_RANGE};
use skinfuse::evaluation::{
    classify_baseline, f_score, metrics, run_comparison, sobottka_accepts, wang_yuan_accepts, BaselineId, Confusion,
    Variant,
};
use skinfuse::face_region::{elliptical_mask, EyePair, PreprocessConfig};
use skinfuse::imaging::{BinaryMask, RgbImage};
use skinfuse::skin_model::{
    classify_hist, detect, fuse, smooth_grid, DetectorParams, FusionMode, GaussianModel, Hist2D, SkinDetector,
};
use skinfuse::synth::{generate_suite, write_dataset, SuiteConfig};

type Check = Result<String, String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

// 1 ---------------------------------------------------------------------------

fn f_score_identity() -> Check {
    let mut worst = 0.0f64;
    for (p, r, f) in [(0.7661, 0.6984, 0.7307), (0.6403, 0.6580, 0.6490)] {
        let direct = f_score(p, r);
        worst = worst.max((direct - f).abs());
        // through the confusion-matrix path as well: counts scaled to 4-digit rates
        let tp = (r * 1e6f64).round() as u64;
        let fn_ = 1_000_000 - tp;
        let fp = ((tp as f64) * (1.0 - p) / p).round() as u64;
        let m = metrics(&Confusion { tp, fp, tn: 5_000_000, fn_ }).map_err(|e| e.to_string())?;
        worst = worst.max((m.f_score - f).abs());
    }
    ensure(worst <= 5e-4, || format!("max |F - table| = {worst:.2e}"))?;
    Ok(format!("max |F - table| = {worst:.2e}"))
}

// 2 ---------------------------------------------------------------------------

fn threshold_boundary() -> Check {
    let range = Interval::new(0.0, 4.0);
    let mut hist = Hist2D::empty((4, 4), range, range);
    hist.smoothed = true;
    hist.set(0, 0, 20.0);
    hist.set(1, 1, f64::next_up(20.0));
    hist.set(2, 2, 20.0 + 1e-9);
    hist.set(3, 3, f64::next_down(20.0));
    let accept_all = GaussianModel {
        mu: (2.0, 2.0),
        sigma: (1e6, 1e6),
        boundary_scale: 2.0,
        literal_variance_axes: false,
        exact_ellipse: false,
    };
    let det = SkinDetector::new(FeaturePairId::IBy, hist, accept_all, 20.0).map_err(|e| e.to_string())?;
    let plane = skinfuse::FeaturePlane {
        width: 4,
        height: 1,
        pair: FeaturePairId::IBy,
        a: vec![0.5, 1.5, 2.5, 3.5],
        b: vec![0.5, 1.5, 2.5, 3.5],
        range_a: range,
        range_b: range,
    };
    let hist_mask = classify_hist(&det, &plane);
    let fused = det.classify(&plane, FusionMode::Fusion);
    let want = [false, true, true, false];
    for m in [&hist_mask, &fused] {
        ensure(m.as_slice() == want, || format!("got {:?}, want {want:?}", m.as_slice()))?;
    }
    Ok("20 -> non-skin, next_up(20) and 20+1e-9 -> skin".into())
}

// 3 ---------------------------------------------------------------------------

fn random_mask(rng: &mut ChaCha8Rng, w: usize, h: usize) -> BinaryMask {
    let p: f64 = rng.gen_range(0.05..0.95);
    BinaryMask::from_fn(w, h, |_, _| rng.gen_bool(p))
}

fn false_positives(m: &BinaryMask, truth: &BinaryMask) -> usize {
    m.as_slice().iter().zip(truth.as_slice()).filter(|(&p, &t)| p && !t).count()
}

fn fusion_law() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for i in 0..200 {
        let (w, h) = (rng.gen_range(1..=64), rng.gen_range(1..=64));
        let (a, b, truth) = (random_mask(&mut rng, w, h), random_mask(&mut rng, w, h), random_mask(&mut rng, w, h));
        let f = fuse(&a, &b).map_err(|e| e.to_string())?;
        for y in 0..h {
            for x in 0..w {
                ensure(f.get(x, y) == (a.get(x, y) && b.get(x, y)), || format!("pair {i}: pixel ({x},{y})"))?;
            }
        }
        let (ff, fa, fb) = (false_positives(&f, &truth), false_positives(&a, &truth), false_positives(&b, &truth));
        ensure(ff <= fa.min(fb), || format!("pair {i}: fp {ff} > min({fa}, {fb})"))?;
    }
    Ok("200 pairs: intersection exact, fused fp <= min".into())
}

// 4 ---------------------------------------------------------------------------

/// LU factor of `I + lambda * D'D` for one length, `D` the second-difference matrix.
fn dense_system(n: usize, lambda: f64) -> nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn> {
    let mut a = DMatrix::<f64>::identity(n, n);
    if n >= 3 {
        let mut d = DMatrix::<f64>::zeros(n - 2, n);
        for r in 0..n - 2 {
            d[(r, r)] = 1.0;
            d[(r, r + 1)] = -2.0;
            d[(r, r + 2)] = 1.0;
        }
        a += lambda * d.transpose() * d;
    }
    a.lu()
}

/// Rows first, then columns, each by a dense solve.
fn dense_smooth_grid(v: &[f64], rows: usize, cols: usize, lambda: f64) -> Vec<f64> {
    let mut out = v.to_vec();
    if lambda == 0.0 {
        return out;
    }
    let solve = |lu: &nalgebra::LU<f64, nalgebra::Dyn, nalgebra::Dyn>, y: &[f64]| {
        lu.solve(&DVector::from_column_slice(y)).expect("SPD system").as_slice().to_vec()
    };
    let along_row = dense_system(cols, lambda);
    for r in 0..rows {
        let s = solve(&along_row, &out[r * cols..(r + 1) * cols]);
        out[r * cols..(r + 1) * cols].copy_from_slice(&s);
    }
    let along_col = dense_system(rows, lambda);
    for c in 0..cols {
        let col: Vec<f64> = (0..rows).map(|r| out[r * cols + c]).collect();
        for (r, z) in solve(&along_col, &col).into_iter().enumerate() {
            out[r * cols + c] = z;
        }
    }
    out
}

fn random_counts(rng: &mut ChaCha8Rng, n: usize) -> Vec<f64> {
    // sparse, peaked counts like a face-sample histogram
    let mut v = vec![0.0; n];
    let peak = rng.gen_range(0..n);
    for _ in 0..rng.gen_range(1..2000) {
        let j = (peak as i64 + rng.gen_range(-40i64..=40)).clamp(0, n as i64 - 1) as usize;
        v[j] += 1.0;
    }
    v
}

fn smoother_properties() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let mut worst_mass = 0.0f64;
    let mut worst_dense = 0.0f64;
    for i in 0..50 {
        let (rows, cols) = (rng.gen_range(1..=64), rng.gen_range(1..=64));
        let y = random_counts(&mut rng, rows * cols);
        let mass: f64 = y.iter().sum();
        for lambda in [0.0, 1.0, 10.0, 100.0] {
            let z = smooth_grid(&y, rows, cols, lambda);
            if lambda == 0.0 {
                let same = z.iter().zip(&y).all(|(a, b)| a.to_bits() == b.to_bits());
                ensure(same, || format!("histogram {i}: lambda=0 changed values"))?;
            }
            let rel = (z.iter().sum::<f64>() - mass).abs() / mass.max(1.0);
            worst_mass = worst_mass.max(rel);
            ensure(rel <= 1e-6, || format!("histogram {i} ({rows}x{cols}) lambda={lambda}: mass drift {rel:.2e}"))?;
        }
        // dense comparison on 16x16
        let y16 = random_counts(&mut rng, 256);
        for lambda in [0.0, 1.0, 10.0, 100.0] {
            let z = smooth_grid(&y16, 16, 16, lambda);
            let d = dense_smooth_grid(&y16, 16, 16, lambda);
            let err = z.iter().zip(&d).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
            worst_dense = worst_dense.max(err);
            ensure(err <= 1e-9, || format!("histogram {i} lambda={lambda}: dense mismatch {err:.2e}"))?;
        }
    }
    Ok(format!("mass drift <= {worst_mass:.1e}, dense error <= {worst_dense:.1e}"))
}

// 5 ---------------------------------------------------------------------------

fn lo_translation() -> Check {
    // c = num / den; channels are drawn as multiples of den so that c * x is an exact 8-bit value.
    let scales: [(u32, u32); 4] = [(1, 2), (4, 5), (5, 4), (2, 1)];
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut worst = (0.0f64, 0.0f64);
    for _ in 0..1000 {
        for &(num, den) in &scales {
            let c = num as f64 / den as f64;
            let hi = (255 * den / num).min(255);
            let draw = |rng: &mut ChaCha8Rng| -> u32 {
                let lo_k = 50u32.div_ceil(den);
                let hi_k = hi / den;
                rng.gen_range(lo_k..=hi_k) * den
            };
            let p = [draw(&mut rng), draw(&mut rng), draw(&mut rng)];
            let q = p.map(|x| x * num / den);
            let (a0, b0) = lo_pixel(p.map(|x| x as u8));
            let (a1, b1) = lo_pixel(q.map(|x| x as u8));
            let shift = 105.0 * c.log10();
            let (ea, eb) = ((a1 - a0 - shift).abs(), (b1 - b0).abs());
            worst = (worst.0.max(ea), worst.1.max(eb));
            ensure(ea <= 1.0 && eb <= 1.0, || format!("pixel {p:?} c={c}: errors ({ea:.3}, {eb:.3})"))?;
        }
    }
    Ok(format!("4000 checks, max error I {:.3}, B_y {:.3}", worst.0, worst.1))
}

// 6 ---------------------------------------------------------------------------

fn ellipse_geometry() -> Check {
    let cfg = PreprocessConfig::default();
    let (w, h) = (200usize, 200usize);
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut worst = 0.0f64;
    for i in 0..100 {
        let d: f64 = rng.gen_range(4.0..50.0);
        let t: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
        let margin = 0.9 * d + 2.0;
        let cx: f64 = rng.gen_range(margin..w as f64 - margin);
        let cy: f64 = rng.gen_range(margin..h as f64 - margin);
        let (dx, dy) = (0.5 * d * t.cos(), 0.5 * d * t.sin());
        let eyes = EyePair::new((cx - dx, cy - dy), (cx + dx, cy + dy)).map_err(|e| e.to_string())?;
        let m = elliptical_mask((w, h), &eyes, &cfg).map_err(|e| e.to_string())?;
        let (a, b) = (0.8 * d, 0.9 * d);
        let area = std::f64::consts::PI * a * b;
        let hh = ((a - b) / (a + b)).powi(2);
        let perimeter = std::f64::consts::PI * (a + b) * (1.0 + 3.0 * hh / (10.0 + (4.0 - 3.0 * hh).sqrt()));
        let dev = (m.count() as f64 - area).abs();
        worst = worst.max(dev / perimeter);
        ensure(dev <= 3.0 * perimeter, || format!("pair {i}: area {} vs {area:.1}", m.count()))?;
        let swapped = elliptical_mask((w, h), &eyes.swapped(), &cfg).map_err(|e| e.to_string())?;
        ensure(swapped == m, || format!("pair {i}: swap changed the mask"))?;
        let centre = eyes.midpoint();
        ensure(m.get(centre.0 as usize, centre.1 as usize), || format!("pair {i}: centre pixel off"))?;
    }
    Ok(format!("100 pairs, worst |area error| = {worst:.3} perimeters"))
}

// 7 ---------------------------------------------------------------------------

/// Straight-line, per-pixel reimplementation of the whole detector.
fn oracle_detect(img: &RgbImage, eyes: &EyePair, cfg: &PreprocessConfig, params: &DetectorParams) -> Vec<bool> {
    let (w, h) = img.dims();
    let blank = vec![false; w * h];

    // edge map: luma, 3x3 Sobel with replicated borders, threshold, dilation
    let luma: Vec<i32> = img
        .pixels()
        .map(|[r, g, b]| (0.299 * r as f64 + 0.587 * g as f64 + 0.114 * b as f64).round().clamp(0.0, 255.0) as i32)
        .collect();
    let mut edge = vec![false; w * h];
    if w >= 3 && h >= 3 {
        let at = |x: i64, y: i64| luma[(y.clamp(0, h as i64 - 1) as usize) * w + x.clamp(0, w as i64 - 1) as usize];
        let kx = [[-1, 0, 1], [-2, 0, 2], [-1, 0, 1]];
        let ky = [[-1, -2, -1], [0, 0, 0], [1, 2, 1]];
        for y in 0..h as i64 {
            for x in 0..w as i64 {
                let (mut gx, mut gy) = (0, 0);
                for j in 0..3 {
                    for i in 0..3 {
                        let v = at(x + i as i64 - 1, y + j as i64 - 1);
                        gx += kx[j][i] * v;
                        gy += ky[j][i] * v;
                    }
                }
                let mag = (((gx * gx + gy * gy) as f64).sqrt() / 8.0).round().min(255.0) as u8;
                edge[y as usize * w + x as usize] = mag > cfg.edge_threshold;
            }
        }
    }
    let r = cfg.dilate_radius as i64;
    for _ in 0..cfg.dilate_iterations {
        let prev = edge.clone();
        for y in 0..h as i64 {
            for x in 0..w as i64 {
                let mut any = false;
                for yy in (y - r).max(0)..=(y + r).min(h as i64 - 1) {
                    for xx in (x - r).max(0)..=(x + r).min(w as i64 - 1) {
                        any |= prev[yy as usize * w + xx as usize];
                    }
                }
                edge[y as usize * w + x as usize] = any;
            }
        }
    }

    // face ellipse, pixel centres
    let d = ((eyes.right.0 - eyes.left.0).powi(2) + (eyes.right.1 - eyes.left.1).powi(2)).sqrt();
    let (mx, my) = ((eyes.left.0 + eyes.right.0) / 2.0, (eyes.left.1 + eyes.right.1) / 2.0);
    let (ax, ay) = (0.5 * cfg.minor_axis_factor * d, 0.5 * cfg.major_axis_factor * d);
    let (ux, uy) = ((eyes.right.0 - eyes.left.0) / d, (eyes.right.1 - eyes.left.1) / d);
    let mut sample = Vec::new();
    for y in 0..h {
        for x in 0..w {
            let (px, py) = (x as f64 + 0.5 - mx, y as f64 + 0.5 - my);
            let (u, v) = (ux * px + uy * py, -uy * px + ux * py);
            if (u / ax).powi(2) + (v / ay).powi(2) <= 1.0 && !edge[y * w + x] {
                sample.push(y * w + x);
            }
        }
    }
    if sample.is_empty() {
        return blank;
    }

    let feats: Vec<(f64, f64)> = img
        .pixels()
        .map(|[r, g, b]| {
            let l = |c: u8| 105.0 * (c as f64 + 1.0).log10();
            (l(g), l(b) - (l(g) + l(r)) / 2.0)
        })
        .collect();
    let (na, nb) = (params.bins_a, params.bins_b);
    let bin = |v: f64, r: Interval, n: usize| {
        if v < r.lo || v > r.hi {
            None
        } else {
            Some((((v - r.lo) / (r.hi - r.lo) * n as f64).floor() as usize).min(n - 1))
        }
    };
    let cell = |(a, b): (f64, f64)| Some((bin(a, LO_I_RANGE, na)?, bin(b, LO_BY_RANGE, nb)?));
    let mut counts = vec![0.0; na * nb];
    for &i in &sample {
        if let Some((ia, ib)) = cell(feats[i]) {
            counts[ia * nb + ib] += 1.0;
        }
    }
    let smooth = dense_smooth_grid(&counts, na, nb, params.lambda);
    let hist_ok = |f: (f64, f64)| cell(f).is_some_and(|(ia, ib)| smooth[ia * nb + ib] > params.hist_threshold);

    let kept: Vec<(f64, f64)> = sample.iter().map(|&i| feats[i]).filter(|&f| hist_ok(f)).collect();
    let n = kept.len() as f64;
    if kept.len() < 2 {
        return blank;
    }
    let ma = kept.iter().map(|p| p.0).sum::<f64>() / n;
    let mb = kept.iter().map(|p| p.1).sum::<f64>() / n;
    let va = kept.iter().map(|p| (p.0 - ma).powi(2)).sum::<f64>() / (n - 1.0);
    let vb = kept.iter().map(|p| (p.1 - mb).powi(2)).sum::<f64>() / (n - 1.0);
    if va <= (1e-9 * ma.abs().max(1.0)).powi(2) || vb <= (1e-9 * mb.abs().max(1.0)).powi(2) {
        return blank;
    }
    let (sx, sy) = (params.boundary_scale * va.sqrt(), params.boundary_scale * vb.sqrt());
    feats
        .iter()
        .map(|&(a, b)| {
            let (dx, dy) = (a - ma, b - mb);
            let dist = (dx * dx + dy * dy).sqrt();
            let tau = dy.atan2(dx);
            let boundary = ((sx * tau.cos()).powi(2) + (sy * tau.sin()).powi(2)).sqrt();
            hist_ok((a, b)) && (dist == 0.0 || boundary > dist)
        })
        .collect()
}

/// Smooth colour field with a few flat patches, so the face region keeps smooth pixels.
fn random_scene(rng: &mut ChaCha8Rng, n: usize) -> RgbImage {
    let base = [rng.gen_range(90.0..230.0), rng.gen_range(60.0..180.0), rng.gen_range(40.0..160.0)];
    let grad: [(f64, f64); 3] = std::array::from_fn(|_| (rng.gen_range(-1.5..1.5), rng.gen_range(-1.5..1.5)));
    let patches: Vec<(usize, usize, usize, [u8; 3])> = (0..rng.gen_range(0..3))
        .map(|_| (rng.gen_range(0..n), rng.gen_range(0..n), rng.gen_range(3..10), [rng.gen(), rng.gen(), rng.gen()]))
        .collect();
    let noise = rng.gen_range(0..6);
    RgbImage::from_fn(n, n, |x, y| {
        for &(px, py, s, c) in &patches {
            if x >= px && x < px + s && y >= py && y < py + s {
                return c;
            }
        }
        std::array::from_fn(|k| {
            let v = base[k] + grad[k].0 * x as f64 + grad[k].1 * y as f64 + rng.gen_range(-noise..=noise) as f64;
            v.round().clamp(0.0, 255.0) as u8
        })
    })
}

fn pipeline_oracle() -> Check {
    let n = 32usize;
    let cfg = PreprocessConfig::default();
    let small = DetectorParams {
        lambda: 1.0,
        hist_threshold: 2.0,
        ..DetectorParams::default()
    };
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut non_blank = [0usize; 2];
    for i in 0..25 {
        let img = random_scene(&mut rng, n);
        let d: f64 = rng.gen_range(6.0..14.0);
        let t: f64 = rng.gen_range(-0.6..0.6);
        let (dx, dy) = (0.5 * d * t.cos(), 0.5 * d * t.sin());
        let (cx, cy) = (rng.gen_range(dx.abs() + 1.0..n as f64 - dx.abs() - 1.0), rng.gen_range(dy.abs() + 1.0..n as f64 - dy.abs() - 1.0));
        let eyes = EyePair::new((cx - dx, cy - dy), (cx + dx, cy + dy)).map_err(|e| e.to_string())?;
        for (k, params) in [DetectorParams::default(), small.clone()].iter().enumerate() {
            let got = detect(&img, &[eyes], FeaturePairId::IBy, &cfg, params);
            let want = oracle_detect(&img, &eyes, &cfg, params);
            if let Some(p) = got.as_slice().iter().zip(&want).position(|(a, b)| a != b) {
                return Err(format!("image {i}, params set {k}: first mismatch at pixel {p}"));
            }
            non_blank[k] += usize::from(!got.is_blank());
        }
    }
    // the comparison must not be vacuous
    ensure(non_blank[1] >= 10, || format!("only {} non-blank masks with small-sample params", non_blank[1]))?;
    Ok(format!(
        "25 images x 2 parameter sets identical; non-blank masks: default {}, small-sample {}",
        non_blank[0], non_blank[1]
    ))
}

// 8 ---------------------------------------------------------------------------

fn synthetic_end_to_end() -> Check {
    let samples = generate_suite(&SuiteConfig::default());
    ensure(samples.len() == 20, || format!("{} scenes", samples.len()))?;
    let variants = FusionMode::ALL.map(Variant::Mode);
    let r = run_comparison("synthetic", &samples, &[], &variants, &PreprocessConfig::default(), &DetectorParams::default());
    let get = |i: usize| r.variants[i].metrics.clone().ok_or("no metrics".to_string());
    let (fusion, hist, gmm) = (get(0)?, get(1)?, get(2)?);
    // per image as well as pooled
    for (f, (hh, g)) in r.variants[0].per_image.iter().zip(r.variants[1].per_image.iter().zip(&r.variants[2].per_image)) {
        ensure(f.confusion.fp <= hh.confusion.fp.min(g.confusion.fp), || format!("{}: fused fp too high", f.id))?;
    }
    let summary = format!(
        "recall fusion {:.3} / hist {:.3} / gmm {:.3}; fpr fusion {:.4} / hist {:.4} / gmm {:.4}",
        fusion.recall, hist.recall, gmm.recall, fusion.false_positive_rate, hist.false_positive_rate, gmm.false_positive_rate
    );
    ensure(fusion.false_positive_rate <= gmm.false_positive_rate, || summary.clone())?;
    ensure(fusion.false_positive_rate <= hist.false_positive_rate, || summary.clone())?;
    ensure(fusion.recall >= 0.85, || summary.clone())?;
    ensure(gmm.recall >= fusion.recall, || summary.clone())?;
    Ok(summary)
}

// 9 ---------------------------------------------------------------------------

fn one_pixel(p: [u8; 3], id: BaselineId) -> bool {
    classify_baseline(&RgbImage::filled(1, 1, p), id).get(0, 0)
}

fn baseline_boundaries() -> Check {
    // interval endpoints at the predicate level, every other component interior
    let (h, s) = (25.0, 0.4);
    for (hh, ss) in [(0.0, s), (50.0, s), (h, 0.23), (h, 0.68)] {
        ensure(sobottka_accepts(hh, ss), || format!("sobottka ({hh}, {ss}) rejected"))?;
    }
    for (hh, ss) in [(f64::next_up(50.0), s), (h, f64::next_down(0.23)), (h, f64::next_up(0.68)), (f64::next_down(0.0), s)] {
        ensure(!sobottka_accepts(hh, ss), || format!("sobottka ({hh}, {ss}) accepted"))?;
    }
    let mid = [0.4, 0.32, 25.0, 0.4, 0.6];
    let bounds = [(0.36, 0.465), (0.28, 0.363), (0.0, 50.0), (0.20, 0.68), (0.35, 1.0)];
    for (k, &(lo, hi)) in bounds.iter().enumerate() {
        for (v, inside) in [(lo, true), (hi, true), (f64::next_down(lo), false), (f64::next_up(hi), false)] {
            let mut x = mid;
            x[k] = v;
            ensure(wang_yuan_accepts(x[0], x[1], x[2], x[3], x[4]) == inside, || {
                format!("wang_yuan component {k} = {v}: expected {inside}")
            })?;
        }
    }
    // constructed 8-bit pixels landing exactly on the boundaries
    let cases: [([u8; 3], BaselineId, bool); 9] = [
        ([240, 220, 120], BaselineId::SobottkaHs, true),  // H = 50, S = 0.5
        ([240, 221, 120], BaselineId::SobottkaHs, false), // H = 50.5
        ([100, 90, 77], BaselineId::SobottkaHs, true),    // S = 0.23
        ([100, 90, 78], BaselineId::SobottkaHs, false),   // S = 0.22
        ([100, 60, 32], BaselineId::SobottkaHs, true),    // S = 0.68
        ([100, 60, 31], BaselineId::SobottkaHs, false),   // S = 0.69
        ([93, 60, 47], BaselineId::WangYuan, true),       // r = 0.465
        ([94, 60, 46], BaselineId::WangYuan, false),      // r = 0.47
        ([0, 0, 0], BaselineId::WangYuan, false),
    ];
    for (p, id, want) in cases {
        ensure(one_pixel(p, id) == want, || format!("{id} pixel {p:?}: expected {want}"))?;
    }
    Ok("all interval endpoints inside, neighbouring doubles outside".into())
}

// 10 --------------------------------------------------------------------------

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let data = dir.path().join("suite");
    write_dataset(&data, &generate_suite(&SuiteConfig::default())).map_err(|e| e.to_string())?;
    let run = |tag: &str| -> Result<(Vec<u8>, Vec<u8>), String> {
        let args = CompareArgs {
            dataset: data.clone(),
            features: FeaturePairId::ALL.to_vec(),
            modes: FusionMode::ALL.to_vec(),
            baselines: BaselineId::ALL.to_vec(),
            csv: Some(dir.path().join(format!("{tag}.csv"))),
            json: Some(dir.path().join(format!("{tag}.json"))),
            config: ConfigArgs::default(),
        };
        cmd_compare(&args).map_err(|e| format!("{e:#}"))?;
        let read = |ext: &str| std::fs::read(dir.path().join(format!("{tag}.{ext}"))).map_err(|e| e.to_string());
        Ok((read("csv")?, read("json")?))
    };
    let (csv1, json1) = run("first")?;
    let (csv2, json2) = run("second")?;
    ensure(csv1 == csv2, || "CSV differs between runs".into())?;
    ensure(json1 == json2, || "JSON differs between runs".into())?;
    Ok(format!("12 variants; CSV {} bytes and JSON {} bytes identical", csv1.len(), json1.len()))
}

fn main() {
    let criteria: [(&str, u64, fn() -> Check); 10] = [
        ("F-score identity", 1, f_score_identity),
        ("histogram threshold boundary", 1, threshold_boundary),
        ("fusion intersection law", 5, fusion_law),
        ("smoother conservation and identity", 30, smoother_properties),
        ("log-opponent translation", 1, lo_translation),
        ("face ellipse geometry", 5, ellipse_geometry),
        ("brute-force pipeline oracle", 30, pipeline_oracle),
        ("synthetic end-to-end", 60, synthetic_end_to_end),
        ("baseline range fidelity", 1, baseline_boundaries),
        ("determinism", 60, determinism),
    ];
    let mut failed = 0;
    for (n, (name, budget, f)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = f();
        let took = start.elapsed();
        let over = took > Duration::from_secs(*budget);
        let (status, detail) = match (&outcome, over) {
            (Ok(d), false) => ("PASS", d.clone()),
            (Ok(d), true) => ("FAIL", format!("{d}; exceeded {budget} s budget")),
            (Err(e), _) => ("FAIL", e.clone()),
        };
        if status == "FAIL" {
            failed += 1;
        }
        println!("criterion {:>2} {status} [{:.2}s] {name}: {detail}", n + 1, took.as_secs_f64());
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
