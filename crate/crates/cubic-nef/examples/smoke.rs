use cubic_nef::family::{make_model, FamilySpec, QuadraticKind};
use cubic_nef::numerics::{integrate, Interval, Tolerance};
use cubic_nef::posterior::{
    closed_form_functional, posterior_functional_summary, update_summary, DataBatch,
    PosteriorState,
};
use cubic_nef::prior::{normalize, HyperParams, PriorKind};
use cubic_nef::tbeta::tbeta_measure_logdensity;
use cubic_nef::theorems::{
    check_conjugacy, check_dy_identity, check_group_law, check_linearity, check_prop3,
    check_t2_inclusion, fit_abc_model, verify_suite, VerifyConfig,
};

fn main() {
    let ig = make_model(&FamilySpec::InverseGaussian).unwrap();
    println!("== pins ==");
    println!("k_IG(-0.5)   = {:.12}  (expect -0.5)", ig.k(-0.5).unwrap());
    println!("psi_IG(0)    = {:.12}  (expect -0.5)", ig.psi(0.0).unwrap());
    println!("k_IG(-2)     = {:.12}  (expect 0)", ig.k(-2.0).unwrap());
    println!(
        "logdens(-0.5,0) = {:.8}  (expect -0.41893853)",
        ig.log_density(-0.5, 0.0).unwrap()
    );
    println!(
        "tbeta(1,0)   = {:.7}  (expect -0.9189385)",
        tbeta_measure_logdensity(&ig, 1.0, 0.0).unwrap()
    );
    println!("V_IG(1) = {} (8), V_IG(0) = {} (1)", ig.variance(1.0).unwrap(), ig.variance(0.0).unwrap());

    // tbeta measure of the IG model at beta=1 is standard normal; integral 1.
    let tol = Tolerance::default();
    let z = integrate(
        |x| tbeta_measure_logdensity(&ig, 1.0, x).map(f64::exp).unwrap_or(0.0),
        &Interval::real_line(),
        &tol,
    )
    .unwrap();
    println!("int tbeta-measure beta=1 = {:.12} (expect 1)", z.value);

    println!("== DY gaussian (2, 0.7) ==");
    let gauss = make_model(&FamilySpec::Quadratic(QuadraticKind::Gaussian)).unwrap();
    let r = check_dy_identity(&gauss, 2.0, 0.7);
    println!("residual = {:.3e} pass={} notes: {}", r.max_residual, r.pass, r.notes);

    println!("== IG beta=1 prop3 grid ==");
    for t in [1.0, 2.0, 5.0] {
        for m0 in [0.0, 1.0, 3.0] {
            let hp = HyperParams::new(t, m0, 1.0, &ig).unwrap();
            let prior = normalize(PriorKind::GeneralizedNatural, &hp, &ig).unwrap();
            let e = prior
                .expectation(|th| {
                    let m = ig.k1(th).unwrap();
                    m / (1.0 + m)
                })
                .unwrap();
            println!("  (t={t}, m0={m0}): E = {e:.9}");
        }
    }
    let r = check_prop3(&ig, 1.0, 2.0, 1.0);
    println!("prop3 (2,1) residual = {:.6e}; notes: {}", r.max_residual, r.notes);

    println!("== posterior functional IG beta=1 (2,1) n=3 xbar=0.4 ==");
    let hp = HyperParams::new(2.0, 1.0, 1.0, &ig).unwrap();
    let state = PosteriorState::new(ig.clone(), hp).unwrap();
    let up = update_summary(&state, 3, 0.4).unwrap();
    println!("updated (t', m0') = ({}, {})  (expect 3.8, 0.84210526...)", up.hp.t, up.hp.m0);
    let f = posterior_functional_summary(&state, 3, 0.4).unwrap();
    let c = closed_form_functional(&state, 3, 0.4);
    println!("functional = {f:.16} (expect 0.3990004195242298)");
    println!("closed     = {c:.16} (expect 0.4571428571428572)");

    println!("== abc fits (beta=0 catalog) ==");
    for kind in [
        QuadraticKind::Gaussian,
        QuadraticKind::Poisson,
        QuadraticKind::Gamma { shape: 1.0 },
        QuadraticKind::Gamma { shape: 2.5 },
        QuadraticKind::Binomial { trials: 4 },
        QuadraticKind::NegativeBinomial { successes: 2.0 },
        QuadraticKind::Hyperbolic,
    ] {
        let model = make_model(&FamilySpec::Quadratic(kind)).unwrap();
        let fit = fit_abc_model(&model, 0.0, 100).unwrap();
        println!(
            "  {:>22}: a={:+.6e} b={:+.6e} c={:+.6e} res={:.3e}",
            model.name(),
            fit.a,
            fit.b,
            fit.c,
            fit.residual
        );
    }
    let fit_ig = fit_abc_model(&ig, 1.0, 100).unwrap();
    println!(
        "  IG beta=1: a={:+.3e} b={:+.3e} c={:+.3e} res={:.3e}",
        fit_ig.a, fit_ig.b, fit_ig.c, fit_ig.residual
    );

    println!("== T2 inclusion ==");
    for (spec, beta, t, m0, label) in [
        (FamilySpec::InverseGaussian, 1.0, 2.0, 1.0, "IG beta=1 (2,1)"),
        (
            FamilySpec::CubicViaTBeta { base: QuadraticKind::Gamma { shape: 1.0 }, beta: -0.5 },
            -0.5,
            2.0,
            1.0,
            "T_-0.5(Gamma(1)) (2,1)",
        ),
        (
            FamilySpec::CubicViaTBeta { base: QuadraticKind::Gaussian, beta: 0.5 },
            0.5,
            2.0,
            0.3,
            "T_0.5(Gauss) (2,0.3)",
        ),
    ] {
        let r = check_t2_inclusion(&spec, beta, t, m0);
        println!("  {label}: residual={:.3e} pass={} | {}", r.max_residual, r.pass, r.notes);
    }

    println!("== conjugacy IG beta=1 (2,1) ==");
    let r = check_conjugacy(&ig, 1.0, 2.0, 1.0, &[0.5]);
    println!("  n=1: residual={:.3e} pass={}", r.max_residual, r.pass);
    let r = check_conjugacy(&ig, 1.0, 2.0, 1.0, &[0.5, -0.3, 0.2, -1.1, 0.8]);
    println!("  n=5: residual={:.3e} pass={} notes={}", r.max_residual, r.pass, r.notes);

    println!("== linearity ==");
    let r = check_linearity(&gauss, 0.0, 2.0, 0.7, &[1, 2, 5], &[-1.5, -1.0, -0.5, 0.0, 0.5, 1.0, 1.5]);
    println!("  gaussian: residual={:.3e} pass={}", r.max_residual, r.pass);
    let tg = make_model(&FamilySpec::CubicViaTBeta {
        base: QuadraticKind::Gamma { shape: 1.0 },
        beta: -0.5,
    })
    .unwrap();
    let r = check_linearity(&tg, -0.5, 2.0, 1.0, &[1, 2, 5], &[0.3, 0.5, 0.8, 1.0, 1.2, 1.4, 1.6]);
    println!("  T_-0.5(Gamma(1)): residual={:.3e} pass={}", r.max_residual, r.pass);
    let tb = make_model(&FamilySpec::CubicViaTBeta {
        base: QuadraticKind::Binomial { trials: 4 },
        beta: 0.25,
    })
    .unwrap();
    let r = check_linearity(&tb, 0.25, 2.0, 1.0, &[1, 2, 5], &[0.5, 1.0, 1.5, 2.0, 2.5, 3.0, 3.5]);
    println!("  T_0.25(B(4)): residual={:.3e} pass={}", r.max_residual, r.pass);
    let r = check_linearity(&ig, 1.0, 2.0, 1.0, &[1, 2, 5], &[-1.5, -1.0, -0.5, 0.0, 0.3, 0.6, 0.9]);
    println!("  IG beta=1 (control, expect FAIL): residual={:.3e} pass={}", r.max_residual, r.pass);

    println!("== group law ==");
    let r = check_group_law();
    println!("  residual={:.3e} pass={} ({})", r.max_residual, r.pass, r.notes);

    println!("== IG batch validation ==");
    let d = DataBatch::new(vec![0.5, -0.3, 0.2, -1.1, 0.8], &ig, 1.0).unwrap();
    println!("  n={} xbar={}", d.n(), d.sample_mean());

    println!("== verify suite: gaussian beta=0 (2, 0) ==");
    let cfg = VerifyConfig {
        family: FamilySpec::Quadratic(QuadraticKind::Gaussian),
        beta: 0.0,
        t: 2.0,
        m0: 0.0,
        grid_size: 100,
    };
    for rep in verify_suite(&cfg).unwrap() {
        println!(
            "  {:22} {} residual={:.3e} tol={:.0e}",
            rep.name,
            if rep.pass { "PASS" } else { "FAIL" },
            rep.max_residual,
            rep.tolerance
        );
    }

    println!("== verify suite: IG beta=1 (2, 0) ==");
    let cfg = VerifyConfig {
        family: FamilySpec::InverseGaussian,
        beta: 1.0,
        t: 2.0,
        m0: 0.0,
        grid_size: 100,
    };
    for rep in verify_suite(&cfg).unwrap() {
        println!(
            "  {:22} {} residual={:.3e} tol={:.0e}",
            rep.name,
            if rep.pass { "PASS" } else { "FAIL" },
            rep.max_residual,
            rep.tolerance
        );
    }

    for (label, family, beta) in [
        (
            "T_-0.5(Gamma1) beta=-0.5 (2, 1)",
            FamilySpec::CubicViaTBeta { base: QuadraticKind::Gamma { shape: 1.0 }, beta: -0.5 },
            -0.5,
        ),
        (
            "T_0.25(Binom4) beta=0.25 (2, 1)",
            FamilySpec::CubicViaTBeta { base: QuadraticKind::Binomial { trials: 4 }, beta: 0.25 },
            0.25,
        ),
        (
            "T_0.5(Gauss) beta=0.5 (2, 0.3)",
            FamilySpec::CubicViaTBeta { base: QuadraticKind::Gaussian, beta: 0.5 },
            0.5,
        ),
    ] {
        println!("== verify suite: {label} ==");
        let cfg = VerifyConfig { family, beta, t: 2.0, m0: if beta > 0.4 { 0.3 } else { 1.0 }, grid_size: 100 };
        for rep in verify_suite(&cfg).unwrap() {
            println!(
                "  {:22} {} residual={:.3e} tol={:.0e}",
                rep.name,
                if rep.pass { "PASS" } else { "FAIL" },
                rep.max_residual,
                rep.tolerance
            );
            if !rep.pass {
                println!("      notes: {}", rep.notes);
            }
        }
    }
}
