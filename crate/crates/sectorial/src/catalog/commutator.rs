//! Commutator-type rows: bounds on `w(AXB +- BYA)` and `w(AB +- BA)`.

use crate::linalg::cartesian_parts;
use crate::ComplexMatrix;

use super::{BoundEvaluation, CatalogError, Certified, Ctx, Sign};

const TWO_SQRT_2: f64 = 2.0 * std::f64::consts::SQRT_2;

/// `w(P +- Q)` for the row's sign choice.
fn combined_radius(
    ctx: &Ctx,
    p: &ComplexMatrix,
    q: &ComplexMatrix,
) -> Result<Certified, CatalogError> {
    let m = match ctx.input.sign {
        Sign::Plus => p.add(q)?,
        Sign::Minus => p.sub(q)?,
    };
    ctx.radius(&m)
}

/// `sqrt(w^2(A) - (csc^2 gamma / 2)(||Im A||^2 - ||Re A||^2))`, the damped
/// radius the refined commutator bounds share. The argument is nonnegative
/// up to certified error; the square root clamps the rest.
fn damped_radius(ctx: &Ctx, a: &ComplexMatrix, gamma: Certified) -> Result<Certified, CatalogError> {
    let w2 = ctx.radius(a)?.square();
    let (re, im) = cartesian_parts(a);
    let re_n = ctx.opnorm_hermitian(&re)?;
    let im_n = ctx.opnorm_hermitian(&im)?;
    let csc2 = gamma.csc_angle().square();
    Ok(w2.sub(csc2.scale(0.5).mul(im_n.square().sub(re_n.square()))).sqrt())
}

/// `2 sqrt2 sin(gamma) ||B|| * damped_radius(A)`.
fn refined_bound(
    ctx: &Ctx,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    gamma: Certified,
) -> Result<Certified, CatalogError> {
    Ok(gamma
        .sin_angle()
        .scale(TWO_SQRT_2)
        .mul(ctx.opnorm(b))
        .mul(damped_radius(ctx, a, gamma)?))
}

pub(super) fn evaluate(ctx: &Ctx) -> Result<BoundEvaluation, CatalogError> {
    let spec = ctx.spec;
    let (a, b) = ctx.pair()?;
    match spec.id {
        "thm-2.4" => {
            let (x, y) = ctx.weights()?;
            if x.dim() != a.dim() || y.dim() != a.dim() {
                return Err(ctx.bad("X and Y must match the dimension of A and B"));
            }
            let gamma = ctx.gamma_nonzero(ctx.gamma_for(&[a])?)?;
            let target = combined_radius(ctx, &a.mul(x)?.mul(b)?, &b.mul(y)?.mul(a)?)?;
            let weight = ctx.opnorm(x).max(ctx.opnorm(y));
            let bound = refined_bound(ctx, a, b, gamma)?.mul(weight);
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "cor-2.5" => {
            let gamma = ctx.gamma_nonzero(ctx.gamma_for(&[a])?)?;
            let target = combined_radius(ctx, &a.mul(b)?, &b.mul(a)?)?;
            let bound = refined_bound(ctx, a, b, gamma)?;
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "cor-2.7" => {
            // Both factors must fit one sector; the bound is the better of
            // the two role assignments at that shared angle.
            let gamma = ctx.gamma_nonzero(ctx.gamma_for(&[a, b])?)?;
            let target = combined_radius(ctx, &a.mul(b)?, &b.mul(a)?)?;
            let beta1 = refined_bound(ctx, a, b, gamma)?;
            let beta2 = refined_bound(ctx, b, a, gamma)?;
            Ok(BoundEvaluation::from_parts(spec, target, beta1.min(beta2)))
        }
        "base-fong" => {
            let target = combined_radius(ctx, &a.mul(b)?, &b.mul(a)?)?;
            let bound = ctx.opnorm(b).scale(TWO_SQRT_2).mul(ctx.radius(a)?);
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "base-kitt-comm" => {
            let target = combined_radius(ctx, &a.mul(b)?, &b.mul(a)?)?;
            let w2 = ctx.radius(a)?.square();
            let (re, im) = cartesian_parts(a);
            let re_n = ctx.opnorm_hermitian(&re)?;
            let im_n = ctx.opnorm_hermitian(&im)?;
            let damp = w2
                .sub(re_n.square().sub(im_n.square()).abs().scale(0.5))
                .sqrt();
            let bound = ctx.opnorm(b).scale(TWO_SQRT_2).mul(damp);
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        other => Err(ctx.bad(format!("{other} is not a commutator row"))),
    }
}
