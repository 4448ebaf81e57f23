//! Single-matrix rows: norm brackets, lower bounds on `w` and `w^2`, and
//! the iterated-square-root upper bounds.

use crate::linalg::cartesian_parts;
use crate::ComplexMatrix;

use super::{one_plus_sin2, BoundEvaluation, CatalogError, Certified, Ctx};

/// `||A A* + A* A||` as a certified scalar.
fn gram_sum_norm(ctx: &Ctx, a: &ComplexMatrix) -> Result<Certified, CatalogError> {
    let adj = a.adjoint();
    let m = a.mul(&adj)?.add(&adj.mul(a)?)?;
    ctx.opnorm_hermitian(&m)
}

/// `(||Re A||, ||Im A||)` as certified scalars.
fn part_norms(ctx: &Ctx, a: &ComplexMatrix) -> Result<(Certified, Certified), CatalogError> {
    let (re, im) = cartesian_parts(a);
    Ok((ctx.opnorm_hermitian(&re)?, ctx.opnorm_hermitian(&im)?))
}

pub(super) fn evaluate(ctx: &Ctx) -> Result<BoundEvaluation, CatalogError> {
    let a = ctx.only_a()?;
    ctx.run_requirements_single(a)?;
    let spec = ctx.spec;
    match spec.id {
        "eq-1.1-lower" => {
            let w = ctx.radius(a)?;
            Ok(BoundEvaluation::from_parts(spec, w, ctx.opnorm(a).scale(0.5)))
        }
        "eq-1.1-upper" => {
            let w = ctx.radius(a)?;
            Ok(BoundEvaluation::from_parts(spec, w, ctx.opnorm(a)))
        }
        "eq-1.2-cos" => {
            let gamma = ctx.gamma_for(&[a])?;
            let w = ctx.radius(a)?;
            let bound = gamma.cos_angle().mul(ctx.opnorm(a));
            Ok(BoundEvaluation::from_parts(spec, w, bound))
        }
        "lem-2.1-im" => {
            let gamma = ctx.gamma_for(&[a])?;
            let (_, im) = cartesian_parts(a);
            let target = ctx.opnorm_hermitian(&im)?;
            let bound = gamma.sin_angle().mul(ctx.radius(a)?);
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "thm-2.2" => {
            let gamma = ctx.gamma_nonzero(ctx.gamma_for(&[a])?)?;
            let w2 = ctx.radius(a)?.square();
            let csc2 = gamma.csc_angle().square();
            let (re_n, im_n) = part_norms(ctx, a)?;
            let bound = csc2
                .scale(0.25)
                .mul(gram_sum_norm(ctx, a)?)
                .add(csc2.scale(0.5).mul(im_n.square().sub(re_n.square())));
            Ok(BoundEvaluation::from_parts(spec, w2, bound))
        }
        "base-quarter" => {
            let w2 = ctx.radius(a)?.square();
            Ok(BoundEvaluation::from_parts(spec, w2, gram_sum_norm(ctx, a)?.scale(0.25)))
        }
        "base-refined" => {
            let w2 = ctx.radius(a)?.square();
            let (re_n, im_n) = part_norms(ctx, a)?;
            let bound = gram_sum_norm(ctx, a)?
                .scale(0.25)
                .add(re_n.square().sub(im_n.square()).abs().scale(0.5));
            Ok(BoundEvaluation::from_parts(spec, w2, bound))
        }
        "lem-2.9" | "lem-2.9-ad" => {
            let k = if spec.id.ends_with("-ad") { 1.0 } else { 2.0 };
            let gamma = ctx.gamma_for(&[a])?;
            let target = ctx.opnorm(a);
            let bound = one_plus_sin2(gamma, k).sqrt().mul(ctx.radius(a)?);
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "cor-2.11" | "cor-2.11-ad" => {
            let k = if spec.id.ends_with("-ad") { 1.0 } else { 2.0 };
            let gamma = ctx.gamma_for(&[a])?;
            let target = ctx.radius(a)?.powf(0.5);
            let (root, root_err) = ctx.sqrt_m(a)?;
            let bound = one_plus_sin2(gamma.scale(0.5), k)
                .sqrt()
                .mul(ctx.radius_approx(&root, root_err)?);
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "thm-2.12" | "thm-2.12-ad" => {
            let k = if spec.id.ends_with("-ad") { 1.0 } else { 2.0 };
            let n = ctx.halvings()?;
            let gamma = ctx.gamma_for(&[a])?;
            let target = ctx.radius(a)?.powf(0.5f64.powi(n as i32));
            let (last, last_err) = ctx.chain_to(a, n)?;
            let mut factor = Certified::exact(1.0);
            for i in 1..=n {
                let piece = one_plus_sin2(gamma.scale(0.5f64.powi(i as i32)), k);
                factor = factor.mul(piece.powf(0.5f64.powi((n + 1 - i) as i32)));
            }
            let bound = factor.mul(ctx.radius_approx(&last, last_err)?);
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "thm-3.1" => {
            let (t1, _, _) = ctx.cone_for(&[a])?;
            let target = ctx.opnorm(a);
            let factor = Certified::exact(1.0).add(t1.cos_angle().square()).sqrt();
            Ok(BoundEvaluation::from_parts(spec, target, factor.mul(ctx.radius(a)?)))
        }
        "eq-3.2-rot" => {
            let (t1, t2, _) = ctx.cone_for(&[a])?;
            let target = ctx.opnorm(a);
            let factor = one_plus_sin2(t2.sub(t1).scale(0.5), 2.0).sqrt();
            Ok(BoundEvaluation::from_parts(spec, target, factor.mul(ctx.radius(a)?)))
        }
        "lem-3.4" => {
            let gamma = ctx.gamma_nonzero(ctx.gamma_for(&[a])?)?;
            let half_csc = gamma.csc_angle().scale(0.5);
            let (re_n, im_n) = part_norms(ctx, a)?;
            // The difference term is signed; a heavier real part weakens
            // the bound rather than being folded in as |.|.
            let bound = half_csc.mul(ctx.opnorm(a)).add(half_csc.mul(im_n.sub(re_n)));
            Ok(BoundEvaluation::from_parts(spec, ctx.radius(a)?, bound))
        }
        "thm-3.5" => {
            let (t1, t2, _) = ctx.cone_for(&[a])?;
            let half_csc = ctx.gamma1(t1, t2).csc_angle().scale(0.5);
            let (re_n, im_n) = part_norms(ctx, a)?;
            let bound =
                half_csc.mul(ctx.opnorm(a)).add(half_csc.mul(im_n.sub(re_n).abs()));
            Ok(BoundEvaluation::from_parts(spec, ctx.radius(a)?, bound))
        }
        "base-1p" => {
            let (re_n, im_n) = part_norms(ctx, a)?;
            let bound = ctx.opnorm(a).scale(0.5).add(im_n.sub(re_n).abs().scale(0.5));
            Ok(BoundEvaluation::from_parts(spec, ctx.radius(a)?, bound))
        }
        "thm-3.7" => {
            let (t1, t2, _) = ctx.cone_for(&[a])?;
            let csc2 = ctx.gamma1(t1, t2).csc_angle().square();
            let (re_n, im_n) = part_norms(ctx, a)?;
            let bound = csc2
                .scale(0.25)
                .mul(gram_sum_norm(ctx, a)?)
                .add(csc2.scale(0.5).mul(im_n.square().sub(re_n.square()).abs()));
            Ok(BoundEvaluation::from_parts(spec, ctx.radius(a)?.square(), bound))
        }
        "base-2p" => {
            let (re_n, im_n) = part_norms(ctx, a)?;
            let bound = gram_sum_norm(ctx, a)?
                .scale(0.25)
                .add(im_n.square().sub(re_n.square()).abs().scale(0.5));
            Ok(BoundEvaluation::from_parts(spec, ctx.radius(a)?.square(), bound))
        }
        other => Err(ctx.bad(format!("{other} is not a single-matrix row"))),
    }
}
