//! Acceptance criteria. Each test prints one `[PASS]` / `[FAIL]` line; run
//! with `cargo test -p qshare-core --test acceptance -- --nocapture` to see
//! them.

use std::time::Instant;

use num_complex::Complex64;
use num_rational::Ratio;
use qshare_core::geometry::{self, PolytopeMesh};
use qshare_core::monotones::{self, PairConcurrenceTable};
use qshare_core::verify::{self, SuiteConfig};
use qshare_core::{PureState, RngStream};

const SEED: u64 = 20_240_601;

fn report(id: u32, what: &str, ok: bool, detail: String) {
    println!(
        "[{}] criterion {id}: {what} ({detail})",
        if ok { "PASS" } else { "FAIL" }
    );
    assert!(ok, "criterion {id} failed: {what} ({detail})");
}

fn config(counts: Vec<usize>) -> SuiteConfig {
    SuiteConfig {
        party_counts: counts,
        samples: 10_000,
        seed: SEED,
        ..SuiteConfig::default()
    }
}

#[test]
fn criterion_01_sharing_inequality() {
    let start = Instant::now();
    let r = verify::run_inequality_sweep(&config((2..=8).collect())).unwrap();
    let elapsed = start.elapsed().as_secs_f64();
    let worst = (2..=8)
        .map(|n| r.check(&format!("sharing[N={n}]")).unwrap().worst_margin)
        .fold(f64::INFINITY, f64::min);
    let all_sharing = (2..=8).all(|n| {
        let c = r.check(&format!("sharing[N={n}]")).unwrap();
        c.pass && c.samples == 10_000
    });
    report(
        1,
        "sharing inequality, N = 2..8, 10^4 Haar states each",
        all_sharing && elapsed < 120.0,
        format!("worst margin {worst:.3e}, {elapsed:.1}s"),
    );
}

#[test]
fn criterion_02_two_party_collapse() {
    let r = verify::run_inequality_sweep(&config(vec![2])).unwrap();
    let c = r.check("two_party_equality[N=2]").unwrap();
    report(
        2,
        "|Y_1 - Y_2| <= 1e-9 over 10^4 two-qubit states",
        c.pass && c.samples == 10_000 && c.tolerance == 1e-9,
        format!("max deviation {:.3e}", -c.worst_margin),
    );
}

#[test]
fn criterion_03_c_y_identity() {
    // C from 2 sqrt(lambda_1 lambda_2), Y from 2 lambda_min.
    let mut worst = 0.0f64;
    let mut count = 0;
    for n in [3, 4] {
        let devs = verify::map_samples(SEED, n, 2, 10_000, |_, _, state| {
            (1..=n)
                .map(|j| {
                    let (hi, lo) = monotones::qubit_lambdas(&state, j).unwrap();
                    let c = 2.0 * (hi * lo).sqrt();
                    let y = monotones::y_monotone(&[hi, lo]).unwrap();
                    let c_api = monotones::concurrence_one_vs_rest(&state, j).unwrap();
                    assert!((c - c_api).abs() <= 1e-15);
                    (c * c - y * (2.0 - y)).abs()
                })
                .fold(0.0, f64::max)
        })
        .unwrap();
        count += devs.len();
        worst = devs.into_iter().fold(worst, f64::max);
    }
    report(
        3,
        "C^2 = Y(2 - Y) within 1e-9, N = 3 and 4, 10^4 states each",
        worst <= 1e-9 && count == 20_000,
        format!("max deviation {worst:.3e}"),
    );
}

#[test]
fn criterion_04_monogamy_lower_bound_figure1() {
    let r = verify::run_bound_sandwich(&config(vec![3, 4])).unwrap();
    let mut ok = true;
    let mut worst_lower = f64::INFINITY;
    let mut worst_mono = f64::INFINITY;
    for n in [3, 4] {
        let lower = r.check(&format!("lower_bound[N={n}]")).unwrap();
        let mono = r.check(&format!("monogamy[N={n}]")).unwrap();
        ok &= lower.pass && mono.pass && lower.samples == 10_000;
        worst_lower = worst_lower.min(lower.worst_margin);
        worst_mono = worst_mono.min(mono.worst_margin);
    }
    let rows = verify::figure1_dataset(100, SEED).unwrap();
    let rows_ok = rows.len() == 100
        && rows.iter().all(|row| {
            row.lower - 1e-9 <= row.y1
                && row.y1 <= row.upper_clamped + 1e-9
                && row.upper_clamped == row.upper_raw.min(1.0)
        });
    report(
        4,
        "monogamy and lower bound over 10^4 states at N = 3, 4; 100-row bound table",
        ok && rows_ok,
        format!("worst lower margin {worst_lower:.3e}, worst monogamy residual {worst_mono:.3e}"),
    );
}

#[test]
fn criterion_05_family_loci() {
    let r = verify::run_family_checks(&config(vec![3])).unwrap();
    let names = [
        "ghz_diagonal",
        "symmetric_w_y",
        "symmetric_w_pairwise_concurrence",
        "symmetric_w_lower_bound_tight",
        "w_on_tetrahedron_surface",
        "w_base_triangle_total",
    ];
    let ghz = r.check("ghz_diagonal").unwrap();
    let surface = r.check("w_on_tetrahedron_surface").unwrap();
    let ok = names.iter().all(|n| r.check(n).unwrap().pass)
        && ghz.samples == 181
        && surface.samples == 10_000;

    // Direct re-evaluation of the symmetric W numbers.
    let a = Complex64::new(1.0 / 3f64.sqrt(), 0.0);
    let w = PureState::w_state(a, a, a).unwrap();
    let y = monotones::entanglement_profile(&w).unwrap().y;
    let table = PairConcurrenceTable::compute(&w).unwrap();
    let direct = y.iter().all(|v| (v - 2.0 / 3.0).abs() <= 1e-9)
        && (table.get(1, 2) - 2.0 / 3.0).abs() <= 1e-9;
    report(
        5,
        "GHZ diagonal (181 angles), symmetric W, 10^4 W states on tetrahedron faces",
        ok && direct,
        format!(
            "ghz dev {:.3e}, base-triangle samples {}, C_12 = {:.12}",
            -ghz.worst_margin,
            r.check("w_base_triangle_total").unwrap().samples,
            table.get(1, 2)
        ),
    );
}

#[test]
fn criterion_06_polytope_volumes() {
    let exact_ok = geometry::inhabitable_volume(2).unwrap() == Ratio::new(0, 1)
        && geometry::inhabitable_volume(3).unwrap() == Ratio::new(1, 2)
        && geometry::inhabitable_volume(4).unwrap() == Ratio::new(5, 6);
    let mut details = Vec::new();
    let mut mc_ok = true;
    for n in [3, 4, 5] {
        let est = geometry::polytope_volume_mc(n, 1_000_000, &RngStream::new(SEED).split(n as u64))
            .unwrap();
        let v = geometry::ratio_to_f64(geometry::inhabitable_volume(n).unwrap());
        let z = (est.estimate - v) / est.standard_error;
        mc_ok &= z.abs() <= 5.0;
        details.push(format!("N={n}: {:.5} vs {v:.5} (z={z:+.2})", est.estimate));
    }
    report(
        6,
        "V_2 = 0, V_3 = 1/2, V_4 = 5/6; 10^6-sample estimates within 5 sigma for N = 3, 4, 5",
        exact_ok && mc_ok,
        details.join("; "),
    );
}

#[test]
fn criterion_07_additivity() {
    let peak = geometry::additivity_n3(2.0).unwrap();
    let exact_ok = (peak - 0.866_025_4).abs() < 1e-7
        && (peak - 3f64.sqrt() / 2.0).abs() < 1e-15
        && geometry::additivity_n3(0.0).unwrap() == 0.0
        && geometry::additivity_n3(3.0).unwrap() == 0.0;

    let rows = verify::figure4_dataset(61, 100_000, SEED).unwrap();
    // Slices with Y_T >= 2 are entirely inhabitable, so their estimate has
    // zero variance; allow float round-off there.
    let worst_z = rows
        .iter()
        .map(|r| {
            let diff = (r.mc - r.exact).abs();
            if diff <= 1e-12 {
                0.0
            } else {
                diff / r.mc_std_error
            }
        })
        .fold(0.0, f64::max);
    let argmax = rows
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.exact.total_cmp(&b.1.exact))
        .map(|(i, _)| i)
        .unwrap();
    let peak_ok = rows.len() == 61 && (rows[argmax].y_total - 2.0).abs() < 1e-12;
    report(
        7,
        "A(2) = sqrt(3)/2, A(0) = A(3) = 0; 61-point Monte Carlo curve within 3 sigma; peak at Y_T = 2",
        exact_ok && worst_z <= 3.0 && peak_ok,
        format!("worst |z| {worst_z:.2}, peak row Y_T = {}", rows[argmax].y_total),
    );
}

#[test]
fn criterion_08_mesh() {
    let mesh: PolytopeMesh = verify::polytope_mesh_export();
    let expected = [
        ("O", [0.0, 0.0, 0.0]),
        ("A", [1.0, 1.0, 0.0]),
        ("B", [1.0, 0.0, 1.0]),
        ("C", [0.0, 1.0, 1.0]),
        ("E", [1.0, 1.0, 1.0]),
    ];
    let vertices_ok = mesh.vertices.len() == 5
        && expected.iter().all(|(name, coords)| mesh.vertex(name) == Some(*coords));
    let (a, b, c) = (
        mesh.vertex("A").unwrap(),
        mesh.vertex("B").unwrap(),
        mesh.vertex("C").unwrap(),
    );
    let centroid: [Ratio<i64>; 3] = std::array::from_fn(|i| {
        Ratio::new((a[i] + b[i] + c[i]) as i64, 3)
    });
    let centroid_ok = centroid.iter().all(|&x| x == Ratio::new(2, 3));
    report(
        8,
        "mesh has vertices O, A, B, C, E; centroid of ABC is (2/3, 2/3, 2/3)",
        vertices_ok && centroid_ok && mesh.faces.len() == 6,
        format!("{} vertices, {} faces", mesh.vertices.len(), mesh.faces.len()),
    );
}

#[test]
fn criterion_09_qudit_speculation() {
    let r = verify::run_qudit_speculation(3, 3, 10_000, SEED).unwrap();
    let c = &r.checks[0];
    report(
        9,
        "qutrit sharing margins over 10^4 states (M = 3, N = 3), speculative",
        r.speculative && c.samples == 10_000 && c.pass,
        format!(
            "worst margin {:.3e}, violations {}, records {}",
            c.worst_margin,
            c.violations,
            c.counterexamples.len()
        ),
    );
}

fn with_threads<T: Send>(threads: usize, f: impl FnOnce() -> T + Send) -> T {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .unwrap()
        .install(f)
}

#[test]
fn criterion_10_determinism() {
    let produce = || {
        let samples = verify::samples_csv(3, &verify::sample_profiles(3, 1000, 7).unwrap());
        let fig1 = verify::figure1_csv(&verify::figure1_dataset(100, 3).unwrap());
        let fig4 = verify::figure4_csv(&verify::figure4_dataset(13, 5_000, 3).unwrap());
        let mut cfg = config(vec![2, 3]);
        cfg.samples = 600;
        let reports: Vec<String> = verify::run_named("all", &cfg)
            .unwrap()
            .iter()
            .map(|r| r.to_json())
            .collect();
        let vol = geometry::polytope_volume_mc(4, 200_000, &RngStream::new(9)).unwrap();
        (samples, fig1, fig4, reports, vol.estimate.to_bits())
    };
    let one = with_threads(1, produce);
    let four = with_threads(4, produce);
    let again = with_threads(3, produce);
    report(
        10,
        "identical seeds give byte-identical outputs for 1, 3 and 4 worker threads",
        one == four && one == again,
        format!("{} bytes of sample CSV compared", one.0.len()),
    );
}
