// Probe: CLI plot-data design numbers for the default configuration.

use cubic_nef::family::{make_model, FamilySpec};
use cubic_nef::numerics::log_end_grid;
use cubic_nef::posterior::{posterior_functional_summary, PosteriorState};
use cubic_nef::prior::{normalize, HyperParams, PriorKind};
use cubic_nef::theorems::check_linearity;

fn trapezoid(xs: &[f64], ys: &[f64]) -> f64 {
    let mut total = 0.0;
    for i in 1..xs.len() {
        total += 0.5 * (ys[i] + ys[i - 1]) * (xs[i] - xs[i - 1]);
    }
    total
}

fn main() {
    let model = make_model(&FamilySpec::InverseGaussian).unwrap();
    let beta = 1.0;
    let (t, m0) = (2.0, 1.0);
    let hp = HyperParams::new(t, m0, beta, &model).unwrap();

    // Trapezoid normalization of the two prior densities on log-end grids.
    for (kind, label) in [
        (PriorKind::GeneralizedNatural, "natural"),
        (PriorKind::GeneralizedMean, "mean"),
    ] {
        let prior = normalize(kind, &hp, &model).unwrap();
        for (n, clamp) in [(100usize, 1e-6), (200, 1e-6), (200, 1e-8), (400, 1e-8)] {
            let grid = log_end_grid(&prior.domain, n, clamp);
            let dens: Vec<f64> = grid
                .iter()
                .map(|&p| prior.log_density(p).map(f64::exp).unwrap_or(0.0))
                .collect();
            println!(
                "{label} prior trapezoid n={n} clamp={clamp:.0e}: {:.6}",
                trapezoid(&grid, &dens)
            );
        }
    }

    // Affinity of the quadrature posterior functional in xbar.
    let state = PosteriorState::new(model.clone(), hp).unwrap();
    for n in [1usize, 3] {
        let xbars: Vec<f64> = (0..9).map(|i| -0.6 + 0.2 * i as f64).collect();
        let vals: Vec<f64> = xbars
            .iter()
            .map(|&x| posterior_functional_summary(&state, n, x).unwrap())
            .collect();
        let nf = xbars.len() as f64;
        let sx: f64 = xbars.iter().sum();
        let sy: f64 = vals.iter().sum();
        let sxx: f64 = xbars.iter().map(|x| x * x).sum();
        let sxy: f64 = xbars.iter().zip(&vals).map(|(x, y)| x * y).sum();
        let slope = (nf * sxy - sx * sy) / (nf * sxx - sx * sx);
        let intercept = (sy - slope * sx) / nf;
        let mut ss_res = 0.0;
        let mut dev: f64 = 0.0;
        let ybar = sy / nf;
        let mut ss_tot = 0.0;
        for (x, y) in xbars.iter().zip(&vals) {
            let r = y - (slope * x + intercept);
            ss_res += r * r;
            ss_tot += (y - ybar) * (y - ybar);
            dev = dev.max(r.abs());
        }
        println!(
            "functional affinity n={n}: max dev {dev:.3e}, R^2 = {:.12}, values {:?}",
            1.0 - ss_res / ss_tot,
            vals
        );
    }

    // Linearity report at the acceptance configuration.
    let xbars: Vec<f64> = (0..7).map(|i| -0.45 + 0.25 * i as f64).collect();
    let rep = check_linearity(&model, beta, t, m0, &[1, 2, 5], &xbars);
    println!(
        "linearity (2,1): max_residual {:.6e} pass {} notes: {}",
        rep.max_residual, rep.pass, rep.notes
    );
}
