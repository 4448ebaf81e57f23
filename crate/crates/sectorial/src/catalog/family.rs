//! Family rows: sums, fractional-power splittings and product bounds.

use crate::ComplexMatrix;

use super::{one_plus_sin2, sum_family, BoundEvaluation, CatalogError, Certified, Ctx};

/// `||sum_i (M_i M_i* + M_i* M_i)||` as a certified scalar.
fn gram_family_norm(ctx: &Ctx, mats: &[ComplexMatrix]) -> Result<Certified, CatalogError> {
    let mut acc = crate::ComplexMatrix::zeros(mats[0].dim());
    for m in mats {
        let adj = m.adjoint();
        acc = acc.add(&m.mul(&adj)?)?.add(&adj.mul(m)?)?;
    }
    ctx.opnorm_hermitian(&acc)
}

/// The four fractional powers an alpha-splitting row consumes:
/// `A^a, A^(1-a), B^a, B^(1-a)`, each with its matrix error.
#[allow(clippy::type_complexity)]
fn alpha_powers(
    ctx: &Ctx,
    a: &ComplexMatrix,
    b: &ComplexMatrix,
    alpha: f64,
) -> Result<[(ComplexMatrix, f64); 4], CatalogError> {
    Ok([
        ctx.alpha_power(a, alpha)?,
        ctx.alpha_power(a, 1.0 - alpha)?,
        ctx.alpha_power(b, alpha)?,
        ctx.alpha_power(b, 1.0 - alpha)?,
    ])
}

pub(super) fn evaluate(ctx: &Ctx) -> Result<BoundEvaluation, CatalogError> {
    let spec = ctx.spec;
    match spec.id {
        "prop-2.8" => {
            let mats = ctx.a_members()?;
            for (i, m) in mats.iter().enumerate() {
                ctx.require_accretive(m, &format!("A_{}", i + 1))?;
            }
            let target = ctx.opnorm(&sum_family(mats)?).powf(0.5);
            let mut bound = Certified::exact(0.0);
            for m in mats {
                let (root, err) = ctx.sqrt_m(m)?;
                bound = bound.add(ctx.opnorm_approx(&root, err));
            }
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "cor-2.10" | "cor-2.10-ad" => {
            let ad = spec.id.ends_with("-ad");
            let k = if ad { 1.0 } else { 2.0 };
            let mats = ctx.a_members()?;
            if ad {
                for (i, m) in mats.iter().enumerate() {
                    ctx.require_accretive_dissipative(m, &format!("A_{}", i + 1))?;
                }
            }
            let refs: Vec<&ComplexMatrix> = mats.iter().collect();
            let gamma = ctx.gamma_for(&refs)?;
            let target = ctx.radius(&sum_family(mats)?)?.powf(0.5);
            let mut root_sum = Certified::exact(0.0);
            for m in mats {
                let (root, err) = ctx.sqrt_m(m)?;
                root_sum = root_sum.add(ctx.radius_approx(&root, err)?);
            }
            let bound = one_plus_sin2(gamma.scale(0.5), k).sqrt().mul(root_sum);
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "prop-2.13-i" | "prop-2.13-ii" => {
            let (a, b) = ctx.pair()?;
            ctx.require_accretive(a, "A")?;
            ctx.require_accretive(b, "B")?;
            let alpha = ctx.alpha()?;
            let target = ctx.opnorm(&a.add(b)?);
            let [pa, pa1, pb, pb1] = alpha_powers(ctx, a, b, alpha)?;
            let (na, na1) = (ctx.opnorm_approx(&pa.0, pa.1), ctx.opnorm_approx(&pa1.0, pa1.1));
            let (nb, nb1) = (ctx.opnorm_approx(&pb.0, pb.1), ctx.opnorm_approx(&pb1.0, pb1.1));
            let bound = if spec.id.ends_with("-i") {
                na.add(nb).mul(na1.add(nb1))
            } else {
                na.add(nb1).mul(na1.add(nb))
            };
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "cor-2.14-i" | "cor-2.14-ii" => {
            let (a, b) = ctx.pair()?;
            let gamma = ctx.gamma_for(&[a, b])?;
            let alpha = ctx.alpha()?;
            let target = ctx.radius(&a.add(b)?)?;
            let [pa, pa1, pb, pb1] = alpha_powers(ctx, a, b, alpha)?;
            let (wa, wa1) = (ctx.radius_approx(&pa.0, pa.1)?, ctx.radius_approx(&pa1.0, pa1.1)?);
            let (wb, wb1) = (ctx.radius_approx(&pb.0, pb.1)?, ctx.radius_approx(&pb1.0, pb1.1)?);
            let f = one_plus_sin2(gamma.scale(alpha), 2.0).sqrt();
            let f1 = one_plus_sin2(gamma.scale(1.0 - alpha), 2.0).sqrt();
            let bound = if spec.id.ends_with("-i") {
                f.mul(f1).mul(wa.add(wb)).mul(wa1.add(wb1))
            } else {
                f.mul(wa).add(f1.mul(wb1)).mul(f1.mul(wa1).add(f.mul(wb)))
            };
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "lem-2.15" | "thm-2.16" => {
            let (af, bf) = ctx.families()?;
            let members: Vec<&ComplexMatrix> = af.iter().chain(bf.iter()).collect();
            ctx.require_double_commuting(&members)?;
            let mut prod_sum = crate::ComplexMatrix::zeros(af[0].dim());
            for (p, q) in af.iter().zip(bf) {
                prod_sum = prod_sum.add(&p.mul(q)?)?;
            }
            let target = ctx.radius(&prod_sum)?;
            let bound = if spec.id == "lem-2.15" {
                gram_family_norm(ctx, af)?
                    .sqrt()
                    .mul(gram_family_norm(ctx, bf)?.sqrt())
                    .scale(0.5)
            } else {
                let gamma = ctx.gamma_for(&members)?;
                let mut a2 = Certified::exact(0.0);
                for m in af {
                    a2 = a2.add(ctx.radius(m)?.square());
                }
                let mut b2 = Certified::exact(0.0);
                for m in bf {
                    b2 = b2.add(ctx.radius(m)?.square());
                }
                one_plus_sin2(gamma, 1.0).mul(a2.sqrt()).mul(b2.sqrt())
            };
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "cor-2.17" => {
            let (a, b) = ctx.pair()?;
            ctx.require_double_commuting(&[a, b])?;
            let gamma = ctx.gamma_for(&[a, b])?;
            let target = ctx.radius(&a.mul(b)?)?;
            let bound = one_plus_sin2(gamma, 1.0).mul(ctx.radius(a)?).mul(ctx.radius(b)?);
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "lem-3.2" | "lem-3.2-ad" => {
            let k = if spec.id.ends_with("-ad") { 1.0 } else { 2.0 };
            let (a, b) = ctx.pair()?;
            if spec.id.ends_with("-ad") {
                ctx.require_accretive_dissipative(a, "A")?;
                ctx.require_accretive_dissipative(b, "B")?;
            }
            let gamma = ctx.gamma_for(&[a, b])?;
            let target = ctx.radius(&a.mul(b)?)?;
            let bound = one_plus_sin2(gamma, k).mul(ctx.radius(a)?).mul(ctx.radius(b)?);
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "thm-3.3" => {
            let (a, b) = ctx.pair()?;
            let (t1, _, _) = ctx.cone_for(&[a, b])?;
            let target = ctx.radius(&a.mul(b)?)?;
            let factor = Certified::exact(1.0).add(t1.cos_angle().square());
            let bound = factor.mul(ctx.radius(a)?).mul(ctx.radius(b)?);
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        "eq-3.4-rot" => {
            let (a, b) = ctx.pair()?;
            let (t1, t2, _) = ctx.cone_for(&[a, b])?;
            let target = ctx.radius(&a.mul(b)?)?;
            let factor = one_plus_sin2(t2.sub(t1).scale(0.5), 2.0);
            let bound = factor.mul(ctx.radius(a)?).mul(ctx.radius(b)?);
            Ok(BoundEvaluation::from_parts(spec, target, bound))
        }
        other => Err(ctx.bad(format!("{other} is not a family row"))),
    }
}
