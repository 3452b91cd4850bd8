//! Parameter sets, reference scales, non-dimensionalisation and the ε-hierarchy.
//!
//! ```
//! use amo::params::{BiophysicalParams, nondimensionalise, extract_hierarchy};
//!
//! let d = nondimensionalise(&BiophysicalParams::default()).unwrap();
//! let e = extract_hierarchy(&d).unwrap();
//! assert!((e.epsilon - 0.2239).abs() < 1e-3);
//! ```

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Dimensional parameters of the reduced F6P–FBP oscillator (µM, ms).
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BiophysicalParams {
    pub alpha: f64,
    pub beta: f64,
    pub eta: f64,
    pub nu: f64,
    pub gamma: f64,
    pub omega: f64,
    pub kappa1: f64,
    pub kappa2: f64,
    pub kappa3: f64,
    pub kappa4: f64,
    pub kappa5: f64,
    pub kappa6: f64,
}

impl Default for BiophysicalParams {
    fn default() -> Self {
        Self {
            alpha: 8.61e-4,
            beta: 0.231,
            eta: 0.769,
            nu: 1.04e-2,
            gamma: 5.20e-4,
            omega: 1.0,
            kappa1: 11.2,
            kappa2: 8.51,
            kappa3: 3.61e-3,
            kappa4: 1.89e-4,
            kappa5: 15.5,
            kappa6: 142.0,
        }
    }
}

impl BiophysicalParams {
    pub fn fields(&self) -> [(&'static str, f64); 12] {
        [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("eta", self.eta),
            ("nu", self.nu),
            ("gamma", self.gamma),
            ("omega", self.omega),
            ("kappa1", self.kappa1),
            ("kappa2", self.kappa2),
            ("kappa3", self.kappa3),
            ("kappa4", self.kappa4),
            ("kappa5", self.kappa5),
            ("kappa6", self.kappa6),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        check_positive(&self.fields())
    }
}

/// Smolen-formalism glycolysis parameters with clamped ATP.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SmolenParams {
    #[serde(rename = "K_GPI")]
    pub k_gpi: f64,
    #[serde(rename = "K_LG")]
    pub k_lg: f64,
    pub k_gk: f64,
    pub g_lce: f64,
    pub h_gkglc: f64,
    #[serde(rename = "k_PFK")]
    pub k_pfk: f64,
    #[serde(rename = "v_GK")]
    pub v_gk: f64,
    #[serde(rename = "v_PDH")]
    pub v_pdh: f64,
    #[serde(rename = "v_PFK")]
    pub v_pfk: f64,
    #[serde(rename = "A_tot")]
    pub a_tot: f64,
    #[serde(rename = "K1")]
    pub k1: f64,
    #[serde(rename = "K2")]
    pub k2: f64,
    #[serde(rename = "K3")]
    pub k3: f64,
    #[serde(rename = "K4")]
    pub k4: f64,
    pub f13: f64,
    pub f23: f64,
    pub f41: f64,
    pub f42: f64,
    pub f43: f64,
    #[serde(rename = "ATP_clamp", default = "default_atp")]
    pub atp_clamp: f64,
}

fn default_atp() -> f64 {
    1800.0
}

impl Default for SmolenParams {
    fn default() -> Self {
        Self {
            k_gpi: 3.33,
            k_lg: 0.3,
            k_gk: 13.0,
            g_lce: 7.0,
            h_gkglc: 4.0,
            k_pfk: 0.06,
            v_gk: 1.11e-2,
            v_pdh: 1.04e-3,
            v_pfk: 1.04e-2,
            a_tot: 3000.0,
            k1: 30.0,
            k2: 1.0,
            k3: 224.0,
            k4: 31.6,
            f13: 0.02,
            f23: 0.2,
            f41: 20.0,
            f42: 20.0,
            f43: 20.0,
            atp_clamp: default_atp(),
        }
    }
}

impl SmolenParams {
    pub fn fields(&self) -> [(&'static str, f64); 20] {
        [
            ("K_GPI", self.k_gpi),
            ("K_LG", self.k_lg),
            ("k_gk", self.k_gk),
            ("g_lce", self.g_lce),
            ("h_gkglc", self.h_gkglc),
            ("k_PFK", self.k_pfk),
            ("v_GK", self.v_gk),
            ("v_PDH", self.v_pdh),
            ("v_PFK", self.v_pfk),
            ("A_tot", self.a_tot),
            ("K1", self.k1),
            ("K2", self.k2),
            ("K3", self.k3),
            ("K4", self.k4),
            ("f13", self.f13),
            ("f23", self.f23),
            ("f41", self.f41),
            ("f42", self.f42),
            ("f43", self.f43),
            ("ATP_clamp", self.atp_clamp),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        check_positive(&self.fields())
    }
}

/// Reference scales used to remove units.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ReferenceScales {
    pub kappa_x: f64,
    pub kappa_y: f64,
    pub kappa_tau: f64,
}

/// Hatted dimensionless parameters.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct DimensionlessParams {
    pub hat_alpha: f64,
    pub hat_nu1: f64,
    pub hat_nu2: f64,
    pub hat_gamma: f64,
    pub hat_sigma1: f64,
    pub hat_sigma2: f64,
    pub hat_sigma3: f64,
    pub hat_sigma4: f64,
    pub hat_sigma6: f64,
}

impl DimensionlessParams {
    pub fn fields(&self) -> [(&'static str, f64); 9] {
        [
            ("hatAlpha", self.hat_alpha),
            ("hatNu1", self.hat_nu1),
            ("hatNu2", self.hat_nu2),
            ("hatGamma", self.hat_gamma),
            ("hatSigma1", self.hat_sigma1),
            ("hatSigma2", self.hat_sigma2),
            ("hatSigma3", self.hat_sigma3),
            ("hatSigma4", self.hat_sigma4),
            ("hatSigma6", self.hat_sigma6),
        ]
    }

    pub fn validate(&self) -> Result<()> {
        check_positive(&self.fields())
    }

    /// The three-significant-figure published values.
    pub fn table() -> Self {
        let t = TABLE_DIMENSIONLESS;
        Self {
            hat_alpha: t[0].1,
            hat_nu1: t[1].1,
            hat_nu2: t[2].1,
            hat_gamma: t[3].1,
            hat_sigma1: t[4].1,
            hat_sigma2: t[5].1,
            hat_sigma3: t[6].1,
            hat_sigma4: t[7].1,
            hat_sigma6: t[8].1,
        }
    }
}

/// Published dimensionless values (three significant figures).
pub const TABLE_DIMENSIONLESS: [(&str, f64); 9] = [
    ("hatAlpha", 5.56e-3),
    ("hatNu1", 6.72e-2),
    ("hatNu2", 1.0),
    ("hatGamma", 3.30e-1),
    ("hatSigma1", 1.38),
    ("hatSigma2", 4.20e-2),
    ("hatSigma3", 1.14e-1),
    ("hatSigma4", 5.02e-2),
    ("hatSigma6", 2.52e-3),
];

/// Relative tolerance for comparisons against three-figure tables.
pub const TABLE_REL_TOL: f64 = 5e-3;

/// Small parameter and O(1) prefactors of the singularly perturbed system.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EpsilonParams {
    pub epsilon: f64,
    pub alpha: f64,
    pub nu: f64,
    pub gamma: f64,
    pub sigma1: f64,
    pub sigma2: f64,
    pub sigma3: f64,
    pub sigma4: f64,
}

impl Default for EpsilonParams {
    /// Hierarchy extracted from the default biophysical parameters.
    fn default() -> Self {
        let d = nondimensionalise(&BiophysicalParams::default()).expect("defaults are valid");
        extract_hierarchy(&d).expect("defaults satisfy the hierarchy")
    }
}

impl EpsilonParams {
    /// Same O(1) prefactors at a different ε.
    pub fn with_epsilon(&self, epsilon: f64) -> Self {
        Self { epsilon, ..*self }
    }

    /// `ν − α σ₁`, the combination that recurs in every scaled field.
    pub fn a(&self) -> f64 {
        self.nu - self.alpha * self.sigma1
    }

    /// Re-expand into hatted parameters.
    pub fn to_dimensionless(&self) -> DimensionlessParams {
        let e = self.epsilon;
        DimensionlessParams {
            hat_alpha: self.alpha * e,
            hat_nu1: self.nu * e,
            hat_nu2: 1.0,
            hat_gamma: self.gamma,
            hat_sigma1: self.sigma1,
            hat_sigma2: self.sigma2 * e * e,
            hat_sigma3: self.sigma3 * e * e,
            hat_sigma4: self.sigma4 * e * e,
            hat_sigma6: e.powi(4),
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.epsilon > 0.0 && self.epsilon < 1.0) {
            return Err(Error::Hierarchy(format!(
                "epsilon = {} outside (0, 1)",
                self.epsilon
            )));
        }
        check_positive(&[
            ("alpha", self.alpha),
            ("nu", self.nu),
            ("gamma", self.gamma),
            ("sigma1", self.sigma1),
            ("sigma2", self.sigma2),
            ("sigma3", self.sigma3),
            ("sigma4", self.sigma4),
        ])
        .map_err(|e| Error::Hierarchy(e.to_string()))?;
        if self.nu <= 2.0 * self.sigma1 * self.alpha {
            return Err(Error::Hierarchy(format!(
                "nu = {} must exceed 2*sigma1*alpha = {}",
                self.nu,
                2.0 * self.sigma1 * self.alpha
            )));
        }
        if self.sigma2 >= 2.0 / self.gamma {
            return Err(Error::Hierarchy(format!(
                "sigma2 = {} must be below 2/gamma = {}",
                self.sigma2,
                2.0 / self.gamma
            )));
        }
        Ok(())
    }
}

fn check_positive(fields: &[(&'static str, f64)]) -> Result<()> {
    for &(name, v) in fields {
        if !(v > 0.0) || !v.is_finite() {
            return Err(Error::domain(name, v, "must be strictly positive and finite"));
        }
    }
    Ok(())
}

pub fn compute_reference_scales(p: &BiophysicalParams) -> Result<ReferenceScales> {
    p.validate()?;
    let kappa_y = (p.kappa5 / p.kappa4).cbrt();
    let kappa_x = kappa_y * (p.kappa6.powi(3) / (p.kappa4 * p.kappa5 * p.kappa5)).powf(1.0 / 12.0);
    let kappa_tau = kappa_y / (p.eta * p.nu);
    Ok(ReferenceScales {
        kappa_x,
        kappa_y,
        kappa_tau,
    })
}

pub fn nondimensionalise(p: &BiophysicalParams) -> Result<DimensionlessParams> {
    let s = compute_reference_scales(p)?;
    Ok(nondimensionalise_with(p, &s))
}

/// Hatted parameters for arbitrary (not necessarily canonical) scales.
pub fn nondimensionalise_with(p: &BiophysicalParams, s: &ReferenceScales) -> DimensionlessParams {
    let (kx, ky, kt) = (s.kappa_x, s.kappa_y, s.kappa_tau);
    DimensionlessParams {
        hat_alpha: kt * p.beta * p.alpha / kx,
        hat_nu1: kt * p.beta * p.nu / kx,
        hat_nu2: kt * p.eta * p.nu / ky,
        hat_gamma: kt * p.eta * p.gamma / (ky * p.omega).sqrt(),
        hat_sigma1: p.kappa5 / p.kappa1,
        hat_sigma2: p.kappa5 / (p.kappa2 * ky),
        hat_sigma3: p.kappa5 / (p.kappa3 * kx * kx),
        hat_sigma4: p.kappa5 / (p.kappa4 * kx * kx * ky),
        hat_sigma6: p.kappa5 / (p.kappa6 * ky),
    }
}

pub fn extract_hierarchy(d: &DimensionlessParams) -> Result<EpsilonParams> {
    d.validate().map_err(|e| Error::Hierarchy(e.to_string()))?;
    if (d.hat_nu2 - 1.0).abs() > 1e-12 {
        return Err(Error::Hierarchy(format!(
            "hatNu2 = {} but the hierarchy assumes hatNu2 = 1",
            d.hat_nu2
        )));
    }
    let eps = d.hat_sigma6.powf(0.25);
    let e2 = eps * eps;
    let e = EpsilonParams {
        epsilon: eps,
        alpha: d.hat_alpha / eps,
        nu: d.hat_nu1 / eps,
        gamma: d.hat_gamma,
        sigma1: d.hat_sigma1,
        sigma2: d.hat_sigma2 / e2,
        sigma3: d.hat_sigma3 / e2,
        sigma4: d.hat_sigma4 / e2,
    };
    e.validate()?;
    Ok(e)
}

/// One asymptotic condition with its measured margin.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConditionCheck {
    pub name: String,
    pub description: String,
    pub measured: f64,
    pub bound: String,
    pub pass: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub checks: Vec<ConditionCheck>,
    pub all_pass: bool,
}

impl ValidationReport {
    pub fn get(&self, name: &str) -> Option<&ConditionCheck> {
        self.checks.iter().find(|c| c.name == name)
    }
}

/// Band accepted for quantities that the analysis only requires to be O(1).
pub const ORDER_ONE_BAND: (f64, f64) = (0.1, 10.0);

pub fn validate_asymptotics(d: &DimensionlessParams) -> ValidationReport {
    let mut checks = Vec::new();
    let mut push = |name: &str, description: &str, measured: f64, bound: String, pass: bool| {
        checks.push(ConditionCheck {
            name: name.into(),
            description: description.into(),
            measured,
            bound,
            pass,
        })
    };

    let a = d.hat_sigma2.ln() / d.hat_sigma6.ln();
    push(
        "sigma2_exponent",
        "exponent a in hatSigma2 ~ hatSigma6^a",
        a,
        "[0.5, 1)".into(),
        (0.5..1.0).contains(&a),
    );
    let r2 = d.hat_sigma2 / d.hat_sigma6.sqrt();
    push(
        "sigma2_over_sqrt_sigma6",
        "hatSigma2 / sqrt(hatSigma6)",
        r2,
        format!("{:?}", ORDER_ONE_BAND),
        r2 > ORDER_ONE_BAND.0 && r2 < ORDER_ONE_BAND.1,
    );
    let r43 = d.hat_sigma4 / d.hat_sigma3;
    push(
        "sigma4_over_sigma3",
        "hatSigma4 / hatSigma3",
        r43,
        format!("{:?}", ORDER_ONE_BAND),
        r43 > ORDER_ONE_BAND.0 && r43 < ORDER_ONE_BAND.1,
    );
    let ratio = d.hat_nu1 / d.hat_alpha;
    push(
        "nu1_over_alpha",
        "hatNu1 / hatAlpha, must exceed 2 hatSigma1",
        ratio,
        format!("> {}", 2.0 * d.hat_sigma1),
        ratio > 2.0 * d.hat_sigma1,
    );
    let margin = d.hat_nu1 - 2.0 * d.hat_sigma1 * d.hat_alpha;
    push(
        "final_condition",
        "hatNu1 - 2 hatSigma1 hatAlpha",
        margin,
        "> 0".into(),
        margin > 0.0,
    );
    let yeq_lhs = if margin > 0.0 {
        (d.hat_alpha / (d.hat_gamma * d.hat_nu1)).powi(2) / (1.0 - 2.0 * d.hat_sigma1 * d.hat_alpha / d.hat_nu1)
    } else {
        f64::INFINITY
    };
    push(
        "equilibrium_above_fold",
        "(hatAlpha/(hatGamma hatNu1))^2 / (1 - 2 hatSigma1 hatAlpha/hatNu1) below hatSigma4/hatSigma3",
        yeq_lhs,
        format!("< {}", r43),
        yeq_lhs < r43,
    );
    let sigma2 = d.hat_sigma2 / d.hat_sigma6.sqrt();
    let border = 2.0 / d.hat_gamma - sigma2;
    push(
        "sigma2_border",
        "2/hatGamma - sigma2",
        border,
        "> 0".into(),
        border > 0.0,
    );
    let py1 = d.hat_sigma2 - d.hat_sigma1 * d.hat_sigma6;
    push(
        "rate_y_positivity_2",
        "hatSigma2 - hatSigma1 hatSigma6",
        py1,
        "> 0".into(),
        py1 > 0.0,
    );
    let py2 = d.hat_sigma4 - d.hat_sigma3 * d.hat_sigma6;
    push(
        "rate_y_positivity_4",
        "hatSigma4 - hatSigma3 hatSigma6",
        py2,
        "> 0".into(),
        py2 > 0.0,
    );
    let all_pass = checks.iter().all(|c| c.pass);
    ValidationReport { checks, all_pass }
}

/// Contents of a parameter file: both dimensional tables.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ParamFile {
    pub biophysical: BiophysicalParams,
    #[serde(default)]
    pub smolen: SmolenParams,
}

impl Default for ParamFile {
    fn default() -> Self {
        Self {
            biophysical: BiophysicalParams::default(),
            smolen: SmolenParams::default(),
        }
    }
}

impl ParamFile {
    /// Parse JSON, reporting the path of the offending field on failure.
    pub fn from_json(text: &str) -> Result<Self> {
        let de = &mut serde_json::Deserializer::from_str(text);
        let pf: ParamFile = serde_path_to_error::deserialize(de)
            .map_err(|e| Error::Usage(format!("{} (at `{}`)", e.inner(), e.path())))?;
        pf.biophysical.validate()?;
        pf.smolen.validate()?;
        Ok(pf)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn equal_kappas_give_unit_scales() {
        let p = BiophysicalParams {
            kappa5: 2.0,
            kappa4: 2.0,
            eta: 1.0,
            nu: 1.0,
            ..Default::default()
        };
        let s = compute_reference_scales(&p).unwrap();
        assert!((s.kappa_y - 1.0).abs() < 1e-15);
        assert!((s.kappa_tau - 1.0).abs() < 1e-15);
    }

    #[test]
    fn nonpositive_field_is_named() {
        let p = BiophysicalParams {
            kappa3: 0.0,
            ..Default::default()
        };
        match compute_reference_scales(&p) {
            Err(Error::Domain { field, .. }) => assert_eq!(field, "kappa3"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn kappa1_equal_kappa5_gives_unit_sigma1() {
        let p = BiophysicalParams {
            kappa1: 15.5,
            ..Default::default()
        };
        assert_eq!(nondimensionalise(&p).unwrap().hat_sigma1, 1.0);
    }

    #[test]
    fn hierarchy_violation_on_slow_nu() {
        let mut d = DimensionlessParams::table();
        d.hat_nu1 = d.hat_sigma1 * d.hat_alpha;
        assert!(matches!(extract_hierarchy(&d), Err(Error::Hierarchy(_))));
        let r = validate_asymptotics(&d);
        assert!(!r.get("final_condition").unwrap().pass);
    }

    #[test]
    fn sigma2_equal_sigma6_flags_exponent() {
        let mut d = DimensionlessParams::table();
        d.hat_sigma2 = d.hat_sigma6;
        let r = validate_asymptotics(&d);
        let c = r.get("sigma2_exponent").unwrap();
        assert!((c.measured - 1.0).abs() < 1e-15);
        assert!(!c.pass);
    }

    #[test]
    fn missing_field_is_reported_by_name() {
        let mut v = serde_json::to_value(ParamFile::default()).unwrap();
        v["biophysical"].as_object_mut().unwrap().remove("kappa5");
        let err = ParamFile::from_json(&v.to_string()).unwrap_err();
        assert!(err.to_string().contains("kappa5"), "{err}");
    }
}
