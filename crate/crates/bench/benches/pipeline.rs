//! Benchmarks across the pipeline: pair statistics, detector tables,
//! heralding metrics, loss, calibration, and the Monte-Carlo sampler.

use std::hint::black_box;

use criterion::{criterion_group, criterion_main, Criterion};
use photon_mux::{
    apply_loss, calibrate_nbar, choose_cutoff, multiplexed_metrics, simulate_system,
    single_source_metrics, thermal_distribution, DetectorModel, MultiplexConfig, PHOTON_CAP,
};

fn config(n_sources: usize, detector: DetectorModel, nbar: f64) -> MultiplexConfig {
    MultiplexConfig {
        n_sources,
        eta_s: 0.8,
        eta_tau: 0.99,
        rep_rate: 1e6,
        detector,
        nbar,
    }
}

fn bench_pair_statistics(c: &mut Criterion) {
    c.bench_function("thermal_distribution_cap", |b| {
        b.iter(|| thermal_distribution(black_box(1.0), black_box(PHOTON_CAP)).unwrap())
    });
    c.bench_function("choose_cutoff_1e12", |b| {
        b.iter(|| choose_cutoff(black_box(1.0), black_box(1e-12)))
    });
}

fn bench_detector_tables(c: &mut Criterion) {
    c.bench_function("binary_povm_cap", |b| {
        b.iter(|| {
            DetectorModel::Binary { efficiency: 0.7 }
                .povm(black_box(PHOTON_CAP))
                .unwrap()
        })
    });
    c.bench_function("pnr_povm_cap", |b| {
        b.iter(|| {
            DetectorModel::Pnr { efficiency: 0.7 }
                .povm(black_box(PHOTON_CAP))
                .unwrap()
        })
    });
    c.bench_function("pseudo_pnr_povm_m64_cap", |b| {
        b.iter(|| {
            DetectorModel::PseudoPnr {
                modes: 64,
                efficiency: 0.7,
            }
            .povm(black_box(PHOTON_CAP))
            .unwrap()
        })
    });
}

fn bench_loss(c: &mut Criterion) {
    let dist = thermal_distribution(1.0, PHOTON_CAP).unwrap();
    c.bench_function("apply_loss_cap", |b| {
        b.iter(|| apply_loss(black_box(&dist), black_box(0.405504)).unwrap())
    });
}

fn bench_metrics(c: &mut Criterion) {
    c.bench_function("single_source_metrics_pnr", |b| {
        b.iter(|| {
            single_source_metrics(black_box(0.1), DetectorModel::Pnr { efficiency: 0.7 }).unwrap()
        })
    });
    let sixteen_way = config(
        16,
        DetectorModel::PseudoPnr {
            modes: 8,
            efficiency: 0.7,
        },
        0.1,
    );
    c.bench_function("multiplexed_metrics_16way_pseudo8", |b| {
        b.iter(|| multiplexed_metrics(black_box(&sixteen_way)).unwrap())
    });
}

fn bench_calibration(c: &mut Criterion) {
    let binary = config(1, DetectorModel::Binary { efficiency: 0.7 }, f64::NAN);
    c.bench_function("calibrate_binary_snr100", |b| {
        b.iter(|| calibrate_nbar(black_box(100.0), black_box(&binary)).unwrap())
    });
    let counting = config(16, DetectorModel::Pnr { efficiency: 0.7 }, f64::NAN);
    c.bench_function("calibrate_pnr16_snr100", |b| {
        b.iter(|| calibrate_nbar(black_box(100.0), black_box(&counting)).unwrap())
    });
}

fn bench_sampler(c: &mut Criterion) {
    let four_way = config(
        4,
        DetectorModel::PseudoPnr {
            modes: 8,
            efficiency: 0.7,
        },
        0.1,
    );
    c.bench_function("simulate_system_10k_trials", |b| {
        b.iter(|| simulate_system(black_box(&four_way), black_box(10_000), black_box(7)).unwrap())
    });
}

criterion_group!(
    benches,
    bench_pair_statistics,
    bench_detector_tables,
    bench_loss,
    bench_metrics,
    bench_calibration,
    bench_sampler
);
criterion_main!(benches);
