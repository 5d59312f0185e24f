//! The JSON cocycle record: parameters plus an optional polynomial summand and one
//! kind-specific part.

use serde::{Deserialize, Serialize};
use wittext::cocycles::{Cocycle, ExtensionParams};
use wittext::polynomials::parse_poly_in;
use wittext::{MPoly, Scalar, UPoly, Var};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CocycleRecord {
    pub alpha: String,
    pub beta: String,
    pub gamma: String,
    /// One of `poly`, `delta_km`, `delta_m0`, `inv_m`.
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub poly: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub mu: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub at_zero: Option<String>,
    /// `m` (default) or `m+k` for `inv_m`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub pole: Option<String>,
}

fn scalar(field: &str, text: &str) -> Result<Scalar, String> {
    text.parse().map_err(|e| format!("{field}: {e}"))
}

fn km_poly(field: &str, text: &str) -> Result<MPoly, String> {
    parse_poly_in(text, &[Var::K, Var::M]).map_err(|e| format!("{field}: {e}"))
}

fn k_poly(field: &str, text: &str) -> Result<UPoly, String> {
    let p = parse_poly_in(text, &[Var::K]).map_err(|e| format!("{field}: {e}"))?;
    p.to_upoly(Var::K).ok_or_else(|| format!("{field}: expected a polynomial in k"))
}

fn required<'a>(field: &str, v: &'a Option<String>, kind: &str) -> Result<&'a str, String> {
    v.as_deref().ok_or_else(|| format!("kind {kind} requires field '{field}'"))
}

impl CocycleRecord {
    /// Decodes the record. δ_{k+m,0} cocycles require α = 0 unless `relaxed`.
    pub fn decode(&self, relaxed: bool) -> Result<(Cocycle, ExtensionParams), String> {
        let params = ExtensionParams::new(
            scalar("alpha", &self.alpha)?,
            scalar("beta", &self.beta)?,
            scalar("gamma", &self.gamma)?,
        );
        let poly = match &self.poly {
            Some(t) => km_poly("poly", t)?,
            None => MPoly::zero(),
        };
        let extra = |names: &[(&str, &Option<String>)]| -> Result<(), String> {
            match names.iter().find(|(_, v)| v.is_some()) {
                Some((n, _)) => Err(format!("field '{n}' is not used by kind {}", self.kind)),
                None => Ok(()),
            }
        };
        let main = match self.kind.as_str() {
            "poly" => {
                extra(&[("f", &self.f), ("mu", &self.mu), ("at_zero", &self.at_zero), ("pole", &self.pole)])?;
                if self.poly.is_none() {
                    return Err("kind poly requires field 'poly'".into());
                }
                Cocycle::zero()
            }
            "delta_km" => {
                extra(&[("mu", &self.mu), ("at_zero", &self.at_zero), ("pole", &self.pole)])?;
                if !params.gamma_integral() {
                    return Err("delta_km requires an integer gamma".into());
                }
                if !relaxed && !params.alpha.is_zero() {
                    return Err("delta_km requires alpha = 0 (pass --relaxed to check anyway)".into());
                }
                Cocycle::delta_km(k_poly("f", required("f", &self.f, "delta_km")?)?)
            }
            "delta_m0" => {
                extra(&[("f", &self.f), ("at_zero", &self.at_zero), ("pole", &self.pole)])?;
                if !params.gamma_integral() {
                    return Err("delta_m0 requires an integer gamma".into());
                }
                if !relaxed && !params.beta.is_one() {
                    return Err("delta_m0 requires beta = 1 (pass --relaxed to check anyway)".into());
                }
                Cocycle::delta_m0(k_poly("mu", required("mu", &self.mu, "delta_m0")?)?)
            }
            "inv_m" => {
                extra(&[("f", &self.f)])?;
                let mu = km_poly("mu", required("mu", &self.mu, "inv_m")?)?;
                let at = match &self.at_zero {
                    Some(t) => k_poly("at_zero", t)?,
                    None => UPoly::zero(),
                };
                match self.pole.as_deref().unwrap_or("m") {
                    "m" => Cocycle::inv_m(mu, at),
                    "m+k" | "k+m" => Cocycle::inv_mk(mu, at),
                    other => return Err(format!("pole must be 'm' or 'm+k', got '{other}'")),
                }
            }
            other => return Err(format!("unknown kind '{other}'")),
        };
        Ok((main.add(&Cocycle::poly(poly)), params))
    }

    pub fn encode(tau: &Cocycle, params: &ExtensionParams) -> Result<CocycleRecord, String> {
        let mut rec = CocycleRecord {
            alpha: params.alpha.to_string(),
            beta: params.beta.to_string(),
            gamma: params.gamma.to_string(),
            kind: "poly".into(),
            poly: None,
            f: None,
            mu: None,
            at_zero: None,
            pole: None,
        };
        let k = |p: &UPoly| p.display_in("k");
        let nonzero_k = |p: &UPoly| (!p.is_zero()).then(|| k(p));
        let (km, m0, im, imk) =
            (!tau.delta_km.is_zero(), !tau.delta_m0.is_zero(), !tau.inv_m.is_zero(), !tau.inv_mk.is_zero());
        match (km, m0, im, imk) {
            (false, _, true, false) => {
                rec.kind = "inv_m".into();
                rec.mu = Some(tau.inv_m.to_string());
                rec.at_zero = nonzero_k(&tau.delta_m0);
            }
            (_, false, false, true) => {
                rec.kind = "inv_m".into();
                rec.mu = Some(tau.inv_mk.to_string());
                rec.at_zero = nonzero_k(&tau.delta_km);
                rec.pole = Some("m+k".into());
            }
            (true, false, false, false) => {
                rec.kind = "delta_km".into();
                rec.f = Some(k(&tau.delta_km));
            }
            (false, true, false, false) => {
                rec.kind = "delta_m0".into();
                rec.mu = Some(k(&tau.delta_m0));
            }
            (false, false, false, false) => {}
            _ => return Err(format!("cocycle {tau} has no single-kind encoding")),
        }
        if !tau.poly.is_zero() || rec.kind == "poly" {
            rec.poly = Some(tau.poly.to_string());
        }
        Ok(rec)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(json: &str) -> CocycleRecord {
        serde_json::from_str(json).unwrap()
    }

    #[test]
    fn decode_kinds() {
        let (t, p) = rec(r#"{"alpha":"2","beta":"0","gamma":"0","kind":"poly","poly":"k^3 + 2*k^2*m"}"#)
            .decode(false)
            .unwrap();
        assert_eq!(t.to_string(), "k^3 + 2*k^2*m");
        assert_eq!(p.alpha, Scalar::int(2));
        let (t, _) = rec(r#"{"alpha":"2","beta":"1","gamma":"1/2","kind":"inv_m","mu":"k^3","poly":"k^2"}"#)
            .decode(false)
            .unwrap();
        assert_eq!(t.to_string(), "m^-1*k^3 + k^2");
        assert!(rec(r#"{"alpha":"1","beta":"-1","gamma":"0","kind":"delta_km","f":"k^3"}"#).decode(false).is_err());
        assert!(rec(r#"{"alpha":"1","beta":"-1","gamma":"0","kind":"delta_km","f":"k^3"}"#).decode(true).is_ok());
        assert!(rec(r#"{"alpha":"0","beta":"1","gamma":"0","kind":"delta_m0","f":"k"}"#).decode(false).is_err());
        assert!(serde_json::from_str::<CocycleRecord>(r#"{"alpha":"0","beta":"1","gamma":"0","kind":"poly","x":"1"}"#).is_err());
    }

    #[test]
    fn encode_round_trip() {
        for json in [
            r#"{"alpha":"0","beta":"-1","gamma":"0","kind":"delta_km","f":"k^3"}"#,
            r#"{"alpha":"2","beta":"1","gamma":"0","kind":"delta_m0","mu":"k^3"}"#,
            r#"{"alpha":"2","beta":"1","gamma":"1/2","kind":"inv_m","poly":"k^2","mu":"k^3"}"#,
            r#"{"alpha":"0","beta":"-1","gamma":"1/2","kind":"inv_m","poly":"k^2","mu":"k^3","pole":"m+k"}"#,
            r#"{"alpha":"2","beta":"0","gamma":"0","kind":"poly","poly":"k^3 + 2*k^2*m"}"#,
        ] {
            let r = rec(json);
            let (t, p) = r.decode(false).unwrap();
            assert_eq!(CocycleRecord::encode(&t, &p).unwrap(), r);
            assert_eq!(serde_json::to_string(&r).unwrap(), json);
        }
    }
}
