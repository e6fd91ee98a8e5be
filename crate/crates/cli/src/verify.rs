use serde_json::json;

use symiso::dynsys::{self, ComponentKind};
use symiso::fixtures;
use symiso::graphsym::{automorphisms_with, Strategy};
use symiso::isotropy::{align_to, commutator_residual, gamma2_elements, is_member, nearest, sample_gamma};
use symiso::rng::subtask_seed;
use symiso::spectral::{eig_sym, eig_sym_with};
use symiso::stencil::{builtin, reflection, HessianContext};
use symiso::{Matrix, Result};

use crate::output::Report;

struct Check {
    name: &'static str,
    /// Measured deviation; the check passes when it is within `tol`.
    measured: f64,
    tol: f64,
}

fn max_dev(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn bool_dev(ok: bool) -> f64 {
    if ok {
        0.0
    } else {
        f64::INFINITY
    }
}

fn checks() -> Result<Vec<Check>> {
    let mut out = Vec::new();

    let d0 = eig_sym(&fixtures::guiding_mu0())?;
    out.push(Check { name: "guiding A(0) eigenvalues 0, 4, 4", measured: max_dev(d0.values(), &[0.0, 4.0, 4.0]), tol: 1e-8 });
    let aligned = align_to(&d0, &fixtures::matrix("guiding_mu0_basis.txt"))?;
    let mats: Vec<Matrix<f64>> = gamma2_elements(&aligned)?.into_iter().map(|e| e.gamma).collect();
    let worst = fixtures::guiding_mu0_gammas()
        .iter()
        .flat_map(|g| [g.clone(), -g])
        .map(|g| nearest(&g, &mats).map_or(f64::INFINITY, |(_, d)| d))
        .fold(0.0, f64::max);
    out.push(Check { name: "sign group of A(0) contains ±γ1..γ4", measured: worst, tol: 1e-3 });
    let v = fixtures::guiding_mu0_kernel();
    let flip = gamma2_elements(&d0)?
        .iter()
        .map(|e| {
            let gv = e.gamma.matvec(&v).expect("3-vector");
            gv.iter().zip(&v).map(|(a, b)| (a + b).abs()).fold(0.0, f64::max)
        })
        .fold(f64::INFINITY, f64::min);
    out.push(Check { name: "some sign element maps the kernel vector v to -v", measured: flip, tol: 1e-6 });

    let dn = eig_sym(&fixtures::guiding_mu_neg025())?;
    let mut dev = max_dev(dn.values(), &[-1.0, 5.0, 5.0]);
    if dn.multiplicities() != [1, 2] {
        dev = f64::INFINITY;
    }
    out.push(Check { name: "A(-0.25) eigenvalues -1, 5, 5 with m = (1, 2)", measured: dev, tol: 1e-8 });
    let worst = (0..50)
        .map(|k| commutator_residual(dn.matrix(), &sample_gamma(&dn, subtask_seed(0, k)).gamma))
        .collect::<Result<Vec<f64>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    out.push(Check { name: "50 Haar samples of Γ(A(-0.25)) commute", measured: worst, tol: 1e-8 });
    let rot = fixtures::matrix("guiding_mu_neg025_rotation.txt");
    out.push(Check { name: "quarter-turn rotation commutes with A(-0.25)", measured: commutator_residual(dn.matrix(), &rot)?, tol: 1e-3 });

    let a16 = fixtures::d4_mu0();
    let r = fixtures::matrix("d4_rotation.txt");
    let s = fixtures::matrix("d4_reflection.txt");
    let res = commutator_residual(&a16, &r)?.max(commutator_residual(&a16, &s)?);
    out.push(Check { name: "16x16 family commutes with rotation and reflection", measured: res, tol: 1e-10 });
    let d16 = eig_sym_with(&a16, Some(1e-8))?;
    let m = d16.multiplicities();
    let (simple, double) = (m.iter().filter(|&&k| k == 1).count(), m.iter().filter(|&&k| k == 2).count());
    out.push(Check { name: "16x16 family has 8 simple and 4 double eigenvalues", measured: bool_dev(simple == 8 && double == 4 && m.len() == 12), tol: 0.0 });
    let g1 = fixtures::matrix("d4_hidden_gamma1.txt");
    out.push(Check { name: "hidden symmetry γ1 is a member at 1e-8", measured: bool_dev(is_member(&d16, &g1, 1e-8)?), tol: 0.0 });

    let g = fixtures::asymmetric_graph();
    let dg = g.spectrum::<f64>()?;
    let values: Vec<f64> = dg.clusters().iter().map(|c| c.value).collect();
    let mut dev = if dg.multiplicities() == fixtures::ASYMMETRIC_GRAPH_MULTIPLICITIES { 0.0 } else { f64::INFINITY };
    if values.len() == fixtures::ASYMMETRIC_GRAPH_SPECTRUM.len() {
        dev = dev.max(max_dev(&values, &fixtures::ASYMMETRIC_GRAPH_SPECTRUM));
    }
    out.push(Check { name: "asymmetric graph spectrum (two decimals)", measured: dev, tol: 1e-2 });
    let trivial = [Strategy::Backtracking, Strategy::Exhaustive].into_iter().all(|st| {
        automorphisms_with(&g, 100, st).is_ok_and(|a| a.len() == 1 && a[0].is_identity())
    });
    out.push(Check { name: "asymmetric graph has only the identity automorphism", measured: bool_dev(trivial), tol: 0.0 });

    let f = builtin("taylor-demo").expect("registered");
    let x = [1.0, 1.0, 1.0];
    let ctx = HessianContext::new(f.as_ref(), &x)?;
    let g2 = reflection(ctx.decomposition.eigenvector(0));
    let i3 = Matrix::identity(3);
    let h = [0.2, 0.05, 0.1];
    let s1 = ctx.probe(f.as_ref(), &i3, &g2, &h)?.value;
    let s2 = ctx.probe(f.as_ref(), &i3, &g2, &h.map(|v| v / 10.0))?.value;
    out.push(Check { name: "Taylor probe 6.40e-5 at h (relative)", measured: (s1 / 6.40e-5 - 1.0).abs(), tol: 0.02 });
    out.push(Check { name: "Taylor probe 6.38e-9 at h/10 (relative)", measured: (s2 / 6.38e-9 - 1.0).abs(), tol: 0.02 });
    let slope = ctx.order_fit(f.as_ref(), &i3, &g2, &h, 6)?;
    out.push(Check { name: "Taylor probe order 4", measured: (slope - 4.0).abs(), tol: 0.2 });

    let set = dynsys::equilibria(0.5)?;
    let sphere = set.components.iter().find(|c| c.kind() == ComponentKind::Sphere);
    let dev = sphere.map_or(f64::INFINITY, |c| (c.radius() - 2f64.sqrt()).abs());
    out.push(Check { name: "equilibria at mu = 0.5: sphere of radius sqrt 2", measured: dev, tol: 1e-8 });
    Ok(out)
}

/// The report and whether every check passed.
pub fn run() -> (Report, bool) {
    let checks = match checks() {
        Ok(c) => c,
        Err(e) => return (Report::new(json!({"error": e.to_string(), "passed": false})), false),
    };
    let all = checks.iter().all(|c| c.measured <= c.tol);
    let mut csv = vec!["check,tolerance,measured,status".to_string()];
    let mut rows = Vec::new();
    let width = checks.iter().map(|c| c.name.chars().count()).max().unwrap_or(0);
    let mut table = format!("{:<width$}  {:>10}  {:>12}  status\n", "check", "tolerance", "measured");
    for c in &checks {
        let status = if c.measured <= c.tol { "PASS" } else { "FAIL" };
        csv.push(format!("\"{}\",{},{},{status}", c.name, c.tol, c.measured));
        let pad = width - c.name.chars().count();
        table.push_str(&format!("{}{}  {:>10.1e}  {:>12.3e}  {status}\n", c.name, " ".repeat(pad), c.tol, c.measured));
        let measured = if c.measured.is_finite() { json!(c.measured) } else { json!("inf") };
        rows.push(json!({"check": c.name, "tolerance": c.tol, "measured": measured, "status": status}));
    }
    table.push_str(if all { "all checks passed\n" } else { "some checks FAILED\n" });
    (Report::new(json!({"passed": all, "checks": rows})).with_csv(csv).with_text(table), all)
}
