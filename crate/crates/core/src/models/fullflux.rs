//! F6P–FBP system with explicit glycolytic fluxes and clamped ATP.

use super::VectorField;
use crate::error::{Error, Result};
use crate::params::SmolenParams;

/// The three fluxes (µM/ms) and the nucleotide pool at one state.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Fluxes {
    pub j_gk: f64,
    pub j_pfk: f64,
    pub j_pdh: f64,
    pub adp: f64,
    pub amp: f64,
}

/// ADP and AMP from the conserved adenine pool at the clamped ATP.
pub fn nucleotides(p: &SmolenParams) -> Result<(f64, f64)> {
    let atp = p.atp_clamp;
    let rad = atp * (4.0 * p.a_tot - 3.0 * atp);
    if !(atp > 0.0) || !(rad > 0.0) {
        return Err(Error::domain(
            "ATP_clamp",
            atp,
            format!("must lie in (0, 4 A_tot/3) = (0, {})", 4.0 * p.a_tot / 3.0),
        ));
    }
    let adp = (rad.sqrt() - atp) / 2.0;
    Ok((adp, adp * adp / atp))
}

pub fn j_gk(p: &SmolenParams) -> f64 {
    p.v_gk / (1.0 + (p.k_gk / p.g_lce).powf(p.h_gkglc))
}

pub fn j_pdh(fbp: f64, p: &SmolenParams) -> f64 {
    p.v_pdh * fbp.max(0.0).sqrt()
}

/// All sixteen weights, indexed `w[i][j][k][l]`.
pub fn pfk_weights(f6p: f64, fbp: f64, amp: f64, p: &SmolenParams) -> [[[[f64; 2]; 2]; 2]; 2] {
    let base = [
        amp / p.k1,
        fbp / p.k2,
        f6p * f6p / (p.k3 * p.k3),
        p.atp_clamp * p.atp_clamp / (p.k4 * p.k4),
    ];
    let mut w = [[[[0.0; 2]; 2]; 2]; 2];
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    let num = base[0].powi(i as i32)
                        * base[1].powi(j as i32)
                        * base[2].powi(k as i32)
                        * base[3].powi(l as i32);
                    let den = p.f13.powi((i * k) as i32)
                        * p.f23.powi((j * k) as i32)
                        * p.f41.powi((i * l) as i32)
                        * p.f42.powi((j * l) as i32)
                        * p.f43.powi((k * l) as i32);
                    w[i][j][k][l] = num / den;
                }
            }
        }
    }
    w
}

pub fn j_pfk_from_weights(w: &[[[[f64; 2]; 2]; 2]; 2], p: &SmolenParams) -> f64 {
    let mut total = 0.0;
    let mut active = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for l in 0..2 {
                active += w[i][j][1][l];
            }
            for k in 0..2 {
                for l in 0..2 {
                    total += w[i][j][k][l];
                }
            }
        }
    }
    p.v_pfk * ((1.0 - p.k_pfk) * w[1][1][1][0] + p.k_pfk * active) / total
}

pub fn fluxes(f6p: f64, fbp: f64, p: &SmolenParams) -> Result<Fluxes> {
    let (adp, amp) = nucleotides(p)?;
    let w = pfk_weights(f6p, fbp, amp, p);
    Ok(Fluxes {
        j_gk: j_gk(p),
        j_pfk: j_pfk_from_weights(&w, p),
        j_pdh: j_pdh(fbp, p),
        adp,
        amp,
    })
}

/// Weight shares of the PFK denominator, largest first, labelled `wijkl`.
pub fn weight_shares(f6p: f64, fbp: f64, p: &SmolenParams) -> Result<Vec<(String, f64)>> {
    let (_, amp) = nucleotides(p)?;
    let w = pfk_weights(f6p, fbp, amp, p);
    let mut out = Vec::with_capacity(16);
    let mut total = 0.0;
    for i in 0..2 {
        for j in 0..2 {
            for k in 0..2 {
                for l in 0..2 {
                    total += w[i][j][k][l];
                    out.push((format!("w{i}{j}{k}{l}"), w[i][j][k][l]));
                }
            }
        }
    }
    for e in out.iter_mut() {
        e.1 /= total;
    }
    out.sort_by(|a, b| b.1.total_cmp(&a.1));
    Ok(out)
}

/// `(dF6P/dt, dFBP/dt)`.
pub fn eval_fullflux(s: [f64; 2], p: &SmolenParams) -> Result<[f64; 2]> {
    let [f6p, fbp] = s;
    if fbp < 0.0 {
        return Err(Error::domain("FBP", fbp, "must be non-negative"));
    }
    let f = fluxes(f6p, fbp, p)?;
    Ok([
        (f.j_gk - f.j_pfk) / (1.0 + p.k_gpi),
        (f.j_pfk - 0.5 * f.j_pdh) / (1.0 + p.k_lg),
    ])
}

#[derive(Clone, Debug)]
pub struct Fullflux {
    pub p: SmolenParams,
    adp_amp: (f64, f64),
}

impl Fullflux {
    pub fn new(p: SmolenParams) -> Result<Self> {
        let adp_amp = nucleotides(&p)?;
        Ok(Self { p, adp_amp })
    }
}

impl VectorField for Fullflux {
    fn id(&self) -> &'static str {
        "fullflux"
    }
    fn labels(&self) -> &'static [&'static str] {
        &["F6P", "FBP"]
    }
    fn nonnegative(&self) -> &'static [bool] {
        &[true, true]
    }
    fn rhs(&self, s: &[f64], out: &mut [f64]) {
        let p = &self.p;
        let fbp = s[1].max(0.0);
        let w = pfk_weights(s[0], fbp, self.adp_amp.1, p);
        let jpfk = j_pfk_from_weights(&w, p);
        out[0] = (j_gk(p) - jpfk) / (1.0 + p.k_gpi);
        out[1] = (jpfk - 0.5 * j_pdh(fbp, p)) / (1.0 + p.k_lg);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn no_pdh_flux_without_fbp() {
        assert_eq!(j_pdh(0.0, &SmolenParams::default()), 0.0);
    }

    #[test]
    fn atp_outside_pool_is_rejected() {
        let p = SmolenParams {
            atp_clamp: 4.0 * 3000.0 / 3.0 + 1.0,
            ..Default::default()
        };
        assert!(matches!(nucleotides(&p), Err(Error::Domain { .. })));
    }

    #[test]
    fn pool_is_conserved() {
        let p = SmolenParams::default();
        let (adp, amp) = nucleotides(&p).unwrap();
        assert!((p.atp_clamp + adp + amp - p.a_tot).abs() < 1e-9);
    }
}
