use std::f64::consts::PI;

use polyembed::geometry::{parse_shape, sample, sample_point, CounterRng, SampleSpec, ShapeDescriptor};

/// Hit-or-miss volume inside the bounding box, with its standard error.
fn rejection_volume(shape: &ShapeDescriptor, n: usize, seed: u64) -> (f64, f64) {
    let (lo, hi) = shape.bounding_box().unwrap();
    let box_vol: f64 = lo.iter().zip(&hi).map(|(a, b)| b - a).product();
    let mut hits = 0usize;
    let mut p = vec![0.0; lo.len()];
    for k in 0..n {
        let mut rng = CounterRng::new(seed, k as u64);
        for (i, x) in p.iter_mut().enumerate() {
            *x = lo[i] + (hi[i] - lo[i]) * rng.unit();
        }
        hits += shape.contains(&p).unwrap() as usize;
    }
    let f = hits as f64 / n as f64;
    (f * box_vol, box_vol * (f * (1.0 - f) / n as f64).sqrt())
}

#[test]
fn uniform_disk_moments() {
    let d = ShapeDescriptor::disk(1.0).unwrap();
    let pts = sample(&d, &SampleSpec::uniform(1_000_000, 3)).unwrap();
    let n = pts.len() as f64;
    let (mut mx, mut my, mut r2) = (0.0, 0.0, 0.0);
    for p in &pts {
        let (x, y) = p.pair(0);
        mx += x;
        my += y;
        r2 += x * x + y * y;
    }
    assert!((mx / n).abs() < 0.01 && (my / n).abs() < 0.01);
    // E|p|^2 = R^2/2 for the uniform disk.
    assert!((r2 / n - 0.5).abs() < 0.01);
}

#[test]
fn closed_form_volumes_match_rejection() {
    for text in ["ball4(1)", "ball6(0.7)", "disk(1) * ball4(0.5)", "rect(1, 2, 3, 0.5)", "tdisk(0, 0.1, 0.2) * disk(1)"] {
        let s = parse_shape(text).unwrap();
        let (est, se) = rejection_volume(&s, 400_000, 11);
        let exact = s.volume().unwrap();
        assert!((est - exact).abs() <= 3.0 * se + 1e-12, "{text}: {est} +- {se} vs {exact}");
    }
}

#[test]
fn polydisk_volume_within_one_percent() {
    let s = ShapeDescriptor::polydisk(&[1.0, 2.0, 3.0]).unwrap();
    assert!((s.volume().unwrap() - 36.0 * PI.powi(3)).abs() < 1e-9);
    let (est, _) = rejection_volume(&s, 1_000_000, 5);
    assert!((est / s.volume().unwrap() - 1.0).abs() < 0.01);
}

#[test]
fn samples_lie_inside_and_are_reproducible() {
    for text in ["polydisk(0.1, 1, 3)", "ball4(2)", "sigma(2) * disk(1)", "rect(1, 2; -0.5, -1) * disk(0.1)"] {
        let s = parse_shape(text).unwrap();
        for spec in [SampleSpec::uniform(5000, 7), SampleSpec::grid(5000), SampleSpec::boundary_biased(5000, 7)] {
            let a = sample(&s, &spec).unwrap();
            assert_eq!(a.len(), 5000);
            assert!(a.iter().all(|p| s.contains(p.coords()).unwrap()), "{text} {:?}", spec.mode);
            assert_eq!(a, sample(&s, &spec).unwrap());
            if spec.mode != polyembed::SampleMode::Grid {
                assert_eq!(a[1234], sample_point(&s, &spec, 1234).unwrap());
            }
        }
    }
}

#[test]
fn display_round_trips() {
    for text in ["polydisk(0.1, 1, 3)", "disk(2) * ball4(0.5) * plane", "sigma(1) * tdisk(0, 0.1, 0.2)", "rect(1, 2; -0.5, -1)"] {
        let s = parse_shape(text).unwrap();
        assert_eq!(parse_shape(&s.to_string()).unwrap(), s);
    }
}
