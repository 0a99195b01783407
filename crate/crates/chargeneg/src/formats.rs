//! JSON wire formats for Hamiltonians, cumulant sets, negativity results and
//! expansion coefficients.
//!
//! Cumulant and coefficient maps are keyed `"a,b"`. Exact rationals are
//! strings (`"-3/8"`); polynomials in the replica index are coefficient
//! arrays in ascending powers.

use std::collections::BTreeMap;

use chargeneg_core::cumulants::CumulantSet;
use chargeneg_core::expansion::{ExpansionCoefficients, Poly, Rational, RationalFunction};
use chargeneg_core::linalg::CMat;
use chargeneg_core::model::{Ensemble, HoppingMatrix};
use chargeneg_core::negativity::{NegativityKind, NegativityResult};
use chargeneg_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case", deny_unknown_fields)]
pub enum EnsembleSpec {
    AllConnected { scale: f64 },
    Local { decay_length: f64, scale: f64 },
    TranslationInvariant { range: usize, scale: f64 },
    TightBinding { hopping: f64, chemical_potential: f64 },
    Explicit,
}

impl From<&Ensemble> for EnsembleSpec {
    fn from(e: &Ensemble) -> Self {
        match *e {
            Ensemble::AllConnected { scale } => EnsembleSpec::AllConnected { scale },
            Ensemble::Local { decay_length, scale } => EnsembleSpec::Local { decay_length, scale },
            Ensemble::TranslationInvariant { range, scale } => EnsembleSpec::TranslationInvariant { range, scale },
            Ensemble::TightBinding {
                hopping,
                chemical_potential,
            } => EnsembleSpec::TightBinding {
                hopping,
                chemical_potential,
            },
            Ensemble::Explicit => EnsembleSpec::Explicit,
        }
    }
}

impl From<&EnsembleSpec> for Ensemble {
    fn from(e: &EnsembleSpec) -> Self {
        match *e {
            EnsembleSpec::AllConnected { scale } => Ensemble::AllConnected { scale },
            EnsembleSpec::Local { decay_length, scale } => Ensemble::Local { decay_length, scale },
            EnsembleSpec::TranslationInvariant { range, scale } => Ensemble::TranslationInvariant { range, scale },
            EnsembleSpec::TightBinding {
                hopping,
                chemical_potential,
            } => Ensemble::TightBinding {
                hopping,
                chemical_potential,
            },
            EnsembleSpec::Explicit => Ensemble::Explicit,
        }
    }
}

/// Hopping matrix as separate real and imaginary row-major arrays.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HamiltonianFile {
    pub n: usize,
    pub ensemble: EnsembleSpec,
    pub seed: Option<u64>,
    pub real: Vec<Vec<f64>>,
    pub imag: Vec<Vec<f64>>,
}

impl From<&HoppingMatrix> for HamiltonianFile {
    fn from(h: &HoppingMatrix) -> Self {
        let n = h.n();
        let t = h.matrix();
        HamiltonianFile {
            n,
            ensemble: h.ensemble().into(),
            seed: h.seed(),
            real: (0..n).map(|i| (0..n).map(|j| t[(i, j)].re).collect()).collect(),
            imag: (0..n).map(|i| (0..n).map(|j| t[(i, j)].im).collect()).collect(),
        }
    }
}

impl HamiltonianFile {
    pub fn to_hopping(&self) -> CliResult<HoppingMatrix> {
        let n = self.n;
        let square = |m: &Vec<Vec<f64>>| m.len() == n && m.iter().all(|r| r.len() == n);
        if !square(&self.real) || !square(&self.imag) {
            return Err(CliError::Format(format!("hopping arrays must be {n}x{n}")));
        }
        let t = CMat::from_fn(n, n, |i, j| Complex64::new(self.real[i][j], self.imag[i][j]));
        Ok(HoppingMatrix::from_matrix(t, (&self.ensemble).into(), self.seed)?)
    }
}

fn pair_key(a: usize, b: usize) -> String {
    format!("{a},{b}")
}

fn parse_pair(key: &str) -> CliResult<(usize, usize)> {
    let bad = || CliError::Format(format!("malformed key {key:?}, expected \"a,b\""));
    let (a, b) = key.split_once(',').ok_or_else(bad)?;
    Ok((
        a.trim().parse().map_err(|_| bad())?,
        b.trim().parse().map_err(|_| bad())?,
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CumulantFile {
    /// Largest `a + b` present.
    pub order: usize,
    pub values: BTreeMap<String, f64>,
}

impl From<&CumulantSet> for CumulantFile {
    fn from(set: &CumulantSet) -> Self {
        CumulantFile {
            order: set.max_order(),
            values: set.iter().map(|((a, b), v)| (pair_key(a, b), v)).collect(),
        }
    }
}

impl CumulantFile {
    pub fn to_set(&self) -> CliResult<CumulantSet> {
        let mut set = CumulantSet::new();
        for (k, &v) in &self.values {
            let (a, b) = parse_pair(k)?;
            if a + b > self.order {
                return Err(CliError::Format(format!("entry {k} exceeds order {}", self.order)));
            }
            set.insert(a, b, v);
        }
        Ok(set)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NegativityFile {
    /// `"logarithmic"` or `"renyi"`.
    pub kind: String,
    pub n_e: Option<u32>,
    pub value: f64,
    pub term1: f64,
    pub term2: f64,
}

impl From<&NegativityResult> for NegativityFile {
    fn from(r: &NegativityResult) -> Self {
        let (kind, n_e) = match r.kind {
            NegativityKind::Logarithmic => ("logarithmic", None),
            NegativityKind::Renyi(n) => ("renyi", Some(n)),
        };
        NegativityFile {
            kind: kind.into(),
            n_e,
            value: r.value,
            term1: r.term1,
            term2: r.term2,
        }
    }
}

impl NegativityFile {
    pub fn to_result(&self) -> CliResult<NegativityResult> {
        let kind = match (self.kind.as_str(), self.n_e) {
            ("logarithmic", None) => NegativityKind::Logarithmic,
            ("renyi", Some(n)) => NegativityKind::Renyi(n),
            _ => {
                return Err(CliError::Format(format!(
                    "bad negativity kind {:?} / n_e {:?}",
                    self.kind, self.n_e
                )))
            }
        };
        Ok(NegativityResult {
            value: self.value,
            kind,
            term1: self.term1,
            term2: self.term2,
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FractionTerm {
    pub num: Vec<String>,
    pub den: Vec<String>,
}

/// One expansion order. `n_e` is `null` for symbolic coefficients, else the
/// rational replica index they were evaluated at (`"1"` for the replica
/// limit).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoefficientFile {
    #[serde(rename = "M")]
    pub order: usize,
    pub n_e: Option<String>,
    pub terms: BTreeMap<String, FractionTerm>,
}

fn poly_strings(p: &Poly) -> Vec<String> {
    if p.is_zero() {
        return vec!["0".into()];
    }
    p.coeffs().iter().map(ToString::to_string).collect()
}

fn parse_poly(coeffs: &[String]) -> CliResult<Poly> {
    let parsed = coeffs
        .iter()
        .map(|s| {
            s.parse::<Rational>()
                .map_err(|_| CliError::Format(format!("bad rational {s:?}")))
        })
        .collect::<CliResult<Vec<_>>>()?;
    Ok(Poly::from_coeffs(parsed))
}

impl CoefficientFile {
    pub fn new(coeffs: &ExpansionCoefficients, n_e: Option<&Rational>) -> Self {
        CoefficientFile {
            order: coeffs.order(),
            n_e: n_e.map(ToString::to_string),
            terms: coeffs
                .terms()
                .iter()
                .map(|(&(a, b), f)| {
                    let term = FractionTerm {
                        num: poly_strings(f.numerator()),
                        den: poly_strings(f.denominator()),
                    };
                    (pair_key(a, b), term)
                })
                .collect(),
        }
    }

    pub fn to_coefficients(&self) -> CliResult<ExpansionCoefficients> {
        let mut terms = BTreeMap::new();
        for (k, t) in &self.terms {
            let f = RationalFunction::new(parse_poly(&t.num)?, parse_poly(&t.den)?)?;
            terms.insert(parse_pair(k)?, f);
        }
        Ok(ExpansionCoefficients::from_terms(self.order, terms)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use chargeneg_core::expansion::{negativity_coefficients, rational};
    use chargeneg_core::model::build_translation_invariant;

    #[test]
    fn hamiltonian_round_trip_is_bit_exact() {
        let h = build_translation_invariant(7, 42, 3, 1.0).unwrap();
        let text = serde_json::to_string(&HamiltonianFile::from(&h)).unwrap();
        let back: HamiltonianFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_hopping().unwrap(), h);
        assert!(text.contains("\"kind\":\"translation-invariant\""));
    }

    #[test]
    fn non_hermitian_hamiltonian_is_rejected() {
        let file = HamiltonianFile {
            n: 2,
            ensemble: EnsembleSpec::Explicit,
            seed: None,
            real: vec![vec![0.0, 1.0], vec![2.0, 0.0]],
            imag: vec![vec![0.0; 2]; 2],
        };
        assert!(file.to_hopping().is_err());
    }

    #[test]
    fn cumulant_round_trip() {
        let mut set = CumulantSet::new();
        set.insert(1, 1, -0.25);
        set.insert(2, 2, 1e-17);
        let file = CumulantFile::from(&set);
        assert_eq!(file.order, 4);
        let text = serde_json::to_string(&file).unwrap();
        assert!(text.contains("\"1,1\":-0.25"));
        let back: CumulantFile = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_set().unwrap(), set);
        assert!(parse_pair("3").is_err());
    }

    #[test]
    fn negativity_round_trip() {
        let r = NegativityResult {
            value: 0.5,
            kind: NegativityKind::Renyi(4),
            term1: 0.75,
            term2: -0.25,
        };
        let file = NegativityFile::from(&r);
        let back: NegativityFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(back.to_result().unwrap(), r);
    }

    #[test]
    fn coefficient_round_trip() {
        let c = negativity_coefficients(4).unwrap();
        let file = CoefficientFile::new(&c, None);
        let back: CoefficientFile = serde_json::from_str(&serde_json::to_string(&file).unwrap()).unwrap();
        assert_eq!(back.to_coefficients().unwrap(), c);

        let at_one = c.at(&rational(1, 1)).unwrap();
        let file = CoefficientFile::new(&at_one, Some(&rational(1, 1)));
        assert_eq!(file.n_e.as_deref(), Some("1"));
        assert_eq!(
            (&file.terms["2,2"].num[..], &file.terms["2,2"].den[..]),
            (&["1".to_string()][..], &["8".to_string()][..])
        );
        assert_eq!(
            (&file.terms["3,1"].num[..], &file.terms["3,1"].den[..]),
            (&["-1".to_string()][..], &["24".to_string()][..])
        );
    }
}
