use serde::Serialize;

use super::alpha::AlphaTable;

/// `μ = (3+√17)/2`.
pub fn mu() -> f64 {
    (3.0 + 17f64.sqrt()) / 2.0
}

/// `log₂(3+√17) − 1 = log₂ μ`.
pub fn beta_upper() -> f64 {
    (3.0 + 17f64.sqrt()).log2() - 1.0
}

/// `ν = (log₂(3+√17) − 1) / log₂(1+√2)`.
pub fn nu() -> f64 {
    beta_upper() / (1.0 + 2f64.sqrt()).log2()
}

/// `δ = 1/ν`.
pub fn delta() -> f64 {
    (1.0 + 2f64.sqrt()).log2() / beta_upper()
}

pub fn beta_lower() -> f64 {
    3f64.log2()
}

/// Exponent of the earlier commutator-word construction, `log₁₄ 4`.
pub fn log14_4() -> f64 {
    4f64.ln() / 14f64.ln()
}

#[derive(Clone, Debug, Serialize)]
pub struct NamedConstant {
    pub name: &'static str,
    pub closed_form: &'static str,
    pub value: f64,
    /// Rounded to twelve decimals.
    pub decimal: String,
}

fn named(name: &'static str, closed_form: &'static str, value: f64) -> NamedConstant {
    NamedConstant {
        name,
        closed_form,
        value,
        decimal: format!("{value:.12}"),
    }
}

pub fn constants() -> Vec<NamedConstant> {
    vec![
        named("mu", "(3+sqrt(17))/2", mu()),
        named("nu", "(log2(3+sqrt(17))-1)/log2(1+sqrt(2))", nu()),
        named("delta", "log2(1+sqrt(2))/(log2(3+sqrt(17))-1)", delta()),
        named("log2_3", "log2(3)", beta_lower()),
        named("beta_upper", "log2(3+sqrt(17))-1", beta_upper()),
        named("log14_4", "log(4)/log(14)", log14_4()),
    ]
}

/// Girths of the derived series as far as they are known.
#[derive(Clone, Debug, Serialize)]
pub struct BetaRow {
    pub n: usize,
    pub lower: usize,
    pub upper: usize,
    pub exact: Option<usize>,
}

#[derive(Clone, Debug, Serialize)]
pub struct ConstantsReport {
    pub constants: Vec<NamedConstant>,
    pub alpha: Vec<(usize, Option<usize>, bool)>,
    pub alpha_quotients: Vec<(usize, f64)>,
    pub beta: Vec<BetaRow>,
    /// `log₂β(n)/n` for exact `β(n)`, `n ≥ 1`.
    pub beta_quotients: Vec<(usize, f64)>,
    /// `(n, α(2ⁿ), β(n), α(2ⁿ) ≤ β(n))` where both are exact.
    pub alpha_beta_relation: Vec<(usize, usize, usize, bool)>,
    pub quotients_at_least_one: bool,
    pub beta_monotone: bool,
}

pub fn report_constants(alpha: &AlphaTable, beta: &[BetaRow]) -> ConstantsReport {
    let alpha_quotients = alpha.quotients();
    let beta_quotients: Vec<(usize, f64)> = beta
        .iter()
        .filter(|r| r.n >= 1)
        .filter_map(|r| r.exact.map(|b| (r.n, (b as f64).log2() / r.n as f64)))
        .collect();
    let relation = beta
        .iter()
        .filter_map(|r| {
            let b = r.exact?;
            let a = alpha.exact(1usize.checked_shl(r.n as u32)?)?;
            Some((r.n, a, b, a <= b))
        })
        .collect();
    let exact_beta: Vec<usize> = beta.iter().filter_map(|r| r.exact).collect();
    ConstantsReport {
        constants: constants(),
        alpha: alpha
            .entries
            .values()
            .map(|e| (e.n, e.value, e.exact))
            .collect(),
        quotients_at_least_one: alpha_quotients
            .iter()
            .chain(beta_quotients.iter())
            .all(|q| q.1 >= 1.0),
        alpha_quotients,
        beta: beta.to_vec(),
        beta_quotients,
        alpha_beta_relation: relation,
        beta_monotone: exact_beta.windows(2).all(|w| w[0] <= w[1]),
    }
}

/// How a computed value compares with digits printed in the literature
/// (a decimal comma is read as a point).
#[derive(Clone, Debug, Serialize)]
pub struct PrintedMatch {
    pub printed: String,
    pub truncated: String,
    pub rounded: String,
    /// Truncation or rounding to the printed precision reproduces it.
    pub matches: bool,
}

pub fn compare_printed(value: f64, printed: &str) -> PrintedMatch {
    let normal = printed.replace(',', ".");
    let digits = normal.split('.').nth(1).map_or(0, |d| d.len());
    let scale = 10f64.powi(digits as i32);
    let truncated = format!("{:.*}", digits, (value * scale).trunc() / scale);
    let rounded = format!("{value:.digits$}");
    PrintedMatch {
        printed: printed.to_string(),
        matches: truncated == normal || rounded == normal,
        truncated,
        rounded,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_digits() {
        assert!(compare_printed(mu(), "3,56155").matches);
        assert!(compare_printed(nu(), "1,4411").matches);
        assert!(compare_printed(nu(), "1,44115577304").matches);
        assert!(compare_printed(beta_lower(), "1.5849").matches);
        assert!(compare_printed(beta_upper(), "1.8325").matches);
        assert!(compare_printed(log14_4(), "0,5252").matches);
        let d = compare_printed(delta(), "0,69391");
        assert_eq!((d.truncated.as_str(), d.rounded.as_str()), ("0.69388", "0.69389"));
    }

    #[test]
    fn twelve_decimals() {
        assert_eq!(format!("{:.12}", mu()), "3.561552812809");
        assert_eq!(format!("{:.12}", nu()), "1.441155773039");
        assert_eq!(format!("{:.12}", delta()), "0.693887516331");
        assert_eq!(format!("{:.12}", beta_upper()), "1.832506383580");
    }

    #[test]
    fn identities_between_constants() {
        assert!((beta_upper() - mu().log2()).abs() < 1e-14);
        assert!((nu() * delta() - 1.0).abs() < 1e-14);
    }
}
