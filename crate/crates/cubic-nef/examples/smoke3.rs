// Probe: acceptance-support numbers (catalog identity, triple agreement,
// impostor scan, self-consistency, sampler distance).

use cubic_nef::family::{make_model, FamilySpec, QuadraticKind};
use cubic_nef::numerics::{fd_derivative, integrate, log_end_grid, uniform_grid, Tolerance};
use cubic_nef::prior::{normalize, HyperParams, PriorKind};
use cubic_nef::tbeta::m_beta_set;
use cubic_nef::theorems::{
    catalog_exp_form, check_cubic_reconstruction, check_dy_identity,
    fit_abc_model, fit_abc_scan, monge_ampere_residual_model,
};

fn main() {
    let kinds = [
        (QuadraticKind::Gaussian, [-0.5, 0.7, 2.0]),
        (QuadraticKind::Poisson, [0.5, 1.0, 3.0]),
        (QuadraticKind::Gamma { shape: 1.0 }, [0.5, 1.0, 3.0]),
        (QuadraticKind::Binomial { trials: 4 }, [0.5, 1.0, 3.0]),
        (QuadraticKind::NegativeBinomial { successes: 2.0 }, [0.5, 1.0, 3.0]),
        (QuadraticKind::Hyperbolic, [-0.5, 0.7, 2.0]),
    ];

    // Criterion-1 support: catalog identity over the 3x3 grids.
    for (kind, ms) in kinds {
        let model = make_model(&FamilySpec::Quadratic(kind)).unwrap();
        let mut worst = 0.0_f64;
        for t in [1.0, 2.0, 5.0] {
            for &m in &ms {
                let rep = check_dy_identity(&model, t, m);
                if !rep.pass {
                    println!("  dy FAIL {} t={t} m={m}: {}", model.name(), rep.notes);
                }
                worst = worst.max(rep.max_residual);
            }
        }
        println!("dy {}: worst {:.3e}", model.name(), worst);
    }

    // Criterion-5 support: triple agreement for transported Gaussian/Gamma.
    for base in [QuadraticKind::Gaussian, QuadraticKind::Gamma { shape: 1.0 }] {
        for beta in [0.5, 1.0] {
            let spec = FamilySpec::CubicViaTBeta { base, beta };
            let model = make_model(&spec).unwrap();
            let fit = fit_abc_model(&model, beta, 100).unwrap();
            let (a0, b0, c0) = catalog_exp_form(base);
            let gap = (fit.a - a0)
                .abs()
                .max((fit.b - (b0 + beta * a0)).abs())
                .max((fit.c - c0).abs());
            let m_beta = m_beta_set(&model, beta).unwrap();
            let grid = log_end_grid(&m_beta, 50, 1e-3);
            let mut ma = 0.0_f64;
            for &m in &grid {
                let theta = model.psi(m).unwrap();
                ma = ma.max(monge_ampere_residual_model(&model, beta, &fit, theta).unwrap());
            }
            let rec = check_cubic_reconstruction(&spec, beta, &fit);
            println!(
                "triple {} beta={beta}: fit res {:.3e} rule gap {:.3e} ma {:.3e} rec {:.3e} pass {}",
                model.name(),
                fit.residual,
                gap,
                ma,
                rec.max_residual,
                rec.pass
            );
        }
    }
    let ig = make_model(&FamilySpec::InverseGaussian).unwrap();
    let fit = fit_abc_model(&ig, 1.0, 100).unwrap();
    println!(
        "IG abc: a {:.3e} b {:.3e} c {:.3e} res {:.3e}",
        fit.a, fit.b, fit.c, fit.residual
    );

    // Criterion-6 support: quartic impostor scan.
    let ms = uniform_grid(0.6, 3.0, 50);
    let vs: Vec<f64> = ms.iter().map(|&m| 1.0 + m.powi(4)).collect();
    let betas: Vec<f64> = (0..=80).map(|i| -2.0 + 0.05 * i as f64).collect();
    let scan = fit_abc_scan(&ms, &vs, &betas);
    let min_finite = scan
        .iter()
        .filter(|(_, r)| r.is_finite())
        .fold(f64::INFINITY, |acc, &(_, r)| acc.min(r));
    let any_small = scan.iter().any(|&(_, r)| r <= 1e-2);
    println!("impostor scan: min finite residual {min_finite:.6}, any <= 1e-2: {any_small}");

    // Criterion-9 support: psi round-trip, variance vs finite differences,
    // density normalization, sampler distance.
    let specs = [
        FamilySpec::Quadratic(QuadraticKind::Gaussian),
        FamilySpec::Quadratic(QuadraticKind::Poisson),
        FamilySpec::Quadratic(QuadraticKind::Gamma { shape: 1.0 }),
        FamilySpec::Quadratic(QuadraticKind::Binomial { trials: 4 }),
        FamilySpec::Quadratic(QuadraticKind::NegativeBinomial { successes: 2.0 }),
        FamilySpec::Quadratic(QuadraticKind::Hyperbolic),
        FamilySpec::InverseGaussian,
        FamilySpec::CubicViaTBeta { base: QuadraticKind::Gamma { shape: 1.0 }, beta: -0.5 },
        FamilySpec::CubicViaTBeta { base: QuadraticKind::Binomial { trials: 4 }, beta: 0.25 },
    ];
    for spec in &specs {
        let model = make_model(spec).unwrap();
        let grid = log_end_grid(model.mean_domain(), 40, 1e-3);
        let mut rt = 0.0_f64;
        let mut vfd = 0.0_f64;
        for &m in &grid {
            if !m.is_finite() {
                continue;
            }
            let theta = match model.psi(m) {
                Ok(th) => th,
                Err(_) => continue,
            };
            let back = model.k1(theta).unwrap_or(f64::NAN);
            rt = rt.max((back - m).abs() / m.abs().max(1.0));
            let v = model.variance(m).unwrap();
            let step = 1e-5 * theta.abs().max(1.0);
            if let Ok(fd) = fd_derivative(|x| model.k1(x).unwrap_or(f64::NAN), theta, 1, step) {
                vfd = vfd.max((v - fd).abs() / v.abs().max(1.0));
            }
        }
        println!("self {}: psi rt {:.3e} V-vs-fd {:.3e}", model.name(), rt, vfd);
    }

    // Normalization and sampler Kolmogorov distance for the two headline
    // priors.
    let tol = Tolerance::default();
    let gauss = make_model(&FamilySpec::Quadratic(QuadraticKind::Gaussian)).unwrap();
    let cases: [(&str, _, PriorKind, f64, f64, f64); 3] = [
        ("gaussian-std-natural", gauss.clone(), PriorKind::StandardNatural, 0.0, 2.0, 0.7),
        ("ig-gen-natural", ig.clone(), PriorKind::GeneralizedNatural, 1.0, 2.0, 1.0),
        ("ig-gen-mean", ig.clone(), PriorKind::GeneralizedMean, 1.0, 2.0, 1.0),
    ];
    for (label, model, kind, beta, t, m0) in cases {
        let hp = HyperParams::new(t, m0, beta, &model).unwrap();
        let prior = normalize(kind, &hp, &model).unwrap();
        let mass = integrate(
            |p| prior.log_density(p).map(f64::exp).unwrap_or(0.0),
            &prior.domain,
            &tol,
        )
        .unwrap()
        .value;
        // Numeric CDF on a fine grid for the Kolmogorov distance.
        let grid = log_end_grid(&prior.domain, 4096, 1e-9);
        let dens: Vec<f64> = grid
            .iter()
            .map(|&p| prior.log_density(p).map(f64::exp).unwrap_or(0.0))
            .collect();
        let mut cdf = vec![0.0];
        for i in 1..grid.len() {
            let add = 0.5 * (dens[i] + dens[i - 1]) * (grid[i] - grid[i - 1]);
            cdf.push(cdf[i - 1] + add);
        }
        let total = *cdf.last().unwrap();
        let mut draws = prior.sample(10_000, 42).unwrap();
        draws.sort_by(f64::total_cmp);
        let mut ks = 0.0_f64;
        for (i, &x) in draws.iter().enumerate() {
            let idx = grid.partition_point(|&g| g <= x).clamp(1, grid.len() - 1);
            let frac = (x - grid[idx - 1]) / (grid[idx] - grid[idx - 1]);
            let fx = (cdf[idx - 1] + frac.clamp(0.0, 1.0) * (cdf[idx] - cdf[idx - 1])) / total;
            let emp_hi = (i + 1) as f64 / draws.len() as f64;
            let emp_lo = i as f64 / draws.len() as f64;
            ks = ks.max((fx - emp_hi).abs()).max((fx - emp_lo).abs());
        }
        println!("{label}: mass {mass:.10}, sampler KS {ks:.5}");
    }
}
