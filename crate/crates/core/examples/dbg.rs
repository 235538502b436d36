use gaussint::analysis::estimate_weak11;
use gaussint::kernels::KernelSpec;
use gaussint::quad::QuadratureConfig;
use gaussint::riesz::calibrate_cbeta;
use gaussint::MultiIndex;

fn main() {
    let quad = QuadratureConfig::default().with_tols(1e-7, 1e-7);
    let cal = calibrate_cbeta(&MultiIndex::new(vec![1]), 1, &quad, 1e-5).unwrap();
    let spec = KernelSpec::hermite(1, &MultiIndex::new(vec![1]), cal.c_beta).unwrap();
    let weak_quad = QuadratureConfig { abs_tol: 1e-7, rel_tol: 1e-6, sphere_nodes: 16, ..quad.clone() };
    for y0 in [0.0f64, 0.3, 0.5, 1.0, 1.3] {
        let report = estimate_weak11(&spec, &[0.5, 0.25, 0.125], &[], &[y0], &weak_quad).unwrap();
        let stats: Vec<f64> = report.details.iter().map(|d| d["statistic"].as_f64().unwrap()).collect();
        println!("y0={y0}: stats={:?} max_ratio={:.4}", stats.iter().map(|s| (s * 1e4).round() / 1e4).collect::<Vec<_>>(), report.statistic);
    }
}
