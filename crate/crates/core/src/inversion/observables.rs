use super::cycles::{class_sum, MAX_ORDER};
use super::moments::MomentSet;
use crate::error::{Error, Result};
use crate::estimators::ObservableMode;
use crate::qcore::matrix::{self, CMat};

fn check_order(k: usize) -> Result<()> {
    if !(1..MAX_ORDER).contains(&k) {
        return Err(Error::OrderOutOfRange { k, min: 1, max: MAX_ORDER - 1 });
    }
    Ok(())
}

/// Weights `c_ℓ`, `ℓ = 0..=k`, of `Tr(Oρ^ℓ)` in `ξ_k`, equivalently of `ρ^ℓ`
/// in `γ_k(ρ)`.
///
/// In `S_{k+1}` the distinguished slot lies on a cycle of length `ℓ + 1`;
/// there are `C(k, ℓ) ℓ!` such cycles and the remaining `k − ℓ` slots carry
/// any permutation, contributing the class sum of order `k − ℓ`.
pub fn gamma_expansion_coefficients(k: usize, p: &MomentSet) -> Result<Vec<f64>> {
    check_order(k)?;
    if p.order() < k {
        return Err(Error::MissingInputs(format!("need moments up to order {k}")));
    }
    let fact = |n: usize| -> f64 { (1..=n).map(|i| i as f64).product() };
    let total = fact(k + 1);
    (0..=k)
        .map(|l| {
            let binom = fact(k) / (fact(l) * fact(k - l));
            Ok(binom * fact(l) * class_sum(k - l, p.values())? / total)
        })
        .collect()
}

/// `ξ_k` from moments and `o = [Tr(O), Tr(Oρ), …, Tr(Oρ^k)]`.
pub fn xi_from(p: &MomentSet, o: &[f64], k: usize) -> Result<f64> {
    if o.len() < k + 1 {
        return Err(Error::MissingInputs(format!("need Tr(Oρ^ℓ) for ℓ = 0..={k}")));
    }
    let c = gamma_expansion_coefficients(k, p)?;
    Ok(c.iter().zip(o).map(|(c, o)| c * o).sum())
}

/// Recovers `[Tr(Oρ), …, Tr(Oρ^t)]` from `[ξ_1, …, ξ_t]`.
///
/// In traceless mode the `ξ` values refer to `O₀` and the answer is shifted
/// back by `Tr(O) p_k / d`; in full mode they refer to `O` itself.
pub fn observable_powers_from_xi(
    xi: &[f64],
    p: &MomentSet,
    trace_o: f64,
    d: usize,
    mode: ObservableMode,
) -> Result<Vec<f64>> {
    let t = xi.len();
    if p.order() < t {
        return Err(Error::MissingInputs(format!("need moments up to order {t}")));
    }
    let mut o = vec![match mode {
        ObservableMode::Traceless => 0.0,
        ObservableMode::Full => trace_o,
    }];
    for k in 1..=t {
        let c = gamma_expansion_coefficients(k, p)?;
        let lower: f64 = c[..k].iter().zip(&o).map(|(c, o)| c * o).sum();
        o.push((xi[k - 1] - lower) / c[k]);
    }
    o.remove(0);
    if mode == ObservableMode::Traceless {
        for (k, ok) in o.iter_mut().enumerate() {
            *ok += trace_o * p.get(k + 1).expect("checked order") / d as f64;
        }
    }
    Ok(o)
}

/// `γ_k(ρ) = Σ_ℓ c_ℓ ρ^ℓ` from exact powers `[ρ^0, …, ρ^k]`.
pub fn assemble_gamma(k: usize, p: &MomentSet, powers: &[CMat]) -> Result<CMat> {
    let c = gamma_expansion_coefficients(k, p)?;
    if powers.len() < k + 1 {
        return Err(Error::MissingInputs(format!("need ρ^ℓ for ℓ = 0..={k}")));
    }
    let mut out = matrix::scale(&powers[0], c[0]);
    for l in 1..=k {
        out += matrix::scale(&powers[l], c[l]);
    }
    Ok(out)
}

/// Recursively solves `[γ_1, …, γ_t]` for `[ρ, ρ², …, ρ^t]`.
pub fn powers_from_gamma(gammas: &[CMat], p: &MomentSet) -> Result<Vec<CMat>> {
    let t = gammas.len();
    let d = gammas.first().map(|g| g.nrows()).ok_or_else(|| Error::MissingInputs("no γ estimates".into()))?;
    let mut powers = vec![matrix::identity(d)];
    for k in 1..=t {
        let c = gamma_expansion_coefficients(k, p)?;
        let mut rhs = gammas[k - 1].clone();
        for l in 0..k {
            rhs -= matrix::scale(&powers[l], c[l]);
        }
        powers.push(matrix::scale(&rhs, 1.0 / c[k]));
    }
    powers.remove(0);
    Ok(powers)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: &[f64], b: &[f64]) -> bool {
        a.len() == b.len() && a.iter().zip(b).all(|(x, y)| (x - y).abs() < 1e-14)
    }

    #[test]
    fn gamma_one_and_two() {
        let p = MomentSet::from_higher(&[0.3, 0.1]);
        assert!(close(&gamma_expansion_coefficients(1, &p).unwrap(), &[0.5, 0.5]));
        assert!(close(&gamma_expansion_coefficients(2, &p).unwrap(), &[1.3 / 6.0, 1.0 / 3.0, 1.0 / 3.0]));
    }

    #[test]
    fn gamma_three_matches_closed_form() {
        let (p2, p3) = (0.4, 0.2);
        let p = MomentSet::from_higher(&[p2, p3]);
        let expect = [(1.0 + 3.0 * p2 + 2.0 * p3) / 24.0, (1.0 + p2) / 8.0, 0.25, 0.25];
        assert!(close(&gamma_expansion_coefficients(3, &p).unwrap(), &expect));
    }

    #[test]
    fn traceless_xi_one() {
        let p = MomentSet::from_higher(&[0.5]);
        let xi = xi_from(&p, &[0.0, 0.8], 1).unwrap();
        assert!((xi - 0.4).abs() < 1e-15);
    }

    #[test]
    fn first_order_inversion() {
        let p = MomentSet::from_higher(&[0.5]);
        let o = observable_powers_from_xi(&[0.4], &p, 2.0, 4, ObservableMode::Traceless).unwrap();
        assert!((o[0] - (0.8 + 0.5)).abs() < 1e-15);
    }
}
