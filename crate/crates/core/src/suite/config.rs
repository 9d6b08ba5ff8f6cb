//! Suite configuration: TOML schema, defaults, validation and hashing.

use std::path::{Path, PathBuf};

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::params::{AlgebraParams, SamplingRegime};

/// Verification suites, listed in dependency order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SuiteId {
    Bosons,
    Contractions,
    Relations,
    Coproduct,
    Affine,
    Cancellation,
    HighestWeight,
    IomDuality,
}

impl SuiteId {
    pub const ALL: [SuiteId; 8] = [
        SuiteId::Bosons,
        SuiteId::Contractions,
        SuiteId::Relations,
        SuiteId::Coproduct,
        SuiteId::Affine,
        SuiteId::Cancellation,
        SuiteId::HighestWeight,
        SuiteId::IomDuality,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SuiteId::Bosons => "bosons",
            SuiteId::Contractions => "contractions",
            SuiteId::Relations => "relations",
            SuiteId::Coproduct => "coproduct",
            SuiteId::Affine => "affine",
            SuiteId::Cancellation => "cancellation",
            SuiteId::HighestWeight => "highest-weight",
            SuiteId::IomDuality => "iom-duality",
        }
    }

    pub fn parse(s: &str) -> Result<Self> {
        Self::ALL
            .into_iter()
            .find(|id| id.name() == s.trim())
            .ok_or_else(|| Error::Config { path: "suites".into(), msg: format!("unknown suite `{s}`") })
    }
}

/// `[re, im]` as written in the config file.
pub type Cplx = [f64; 2];

fn cplx(x: Cplx) -> C64 {
    C64::new(x[0], x[1])
}

/// Either a seed for the sampling annuli or explicit values.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamSource {
    pub seed: Option<u64>,
    pub regime: Option<SamplingRegime>,
    pub q: Option<Cplx>,
    pub d: Option<Cplx>,
    pub dc: Option<Cplx>,
    pub u: Option<Vec<Cplx>>,
    pub uc: Option<Vec<Cplx>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Tolerances {
    pub rel: f64,
    pub relations: f64,
    pub coproduct: f64,
    pub affine: f64,
    pub affine_witness: f64,
    pub cancellation: f64,
    pub cancellation_control: f64,
    pub highest_weight: f64,
    /// Floor of the truncation-scaled bound for integrals of motion.
    pub iom_floor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            rel: 1e-8,
            relations: 1e-7,
            coproduct: 1e-10,
            affine: 1e-7,
            affine_witness: 1e-4,
            cancellation: 1e-7,
            cancellation_control: 1e-3,
            highest_weight: 1e-8,
            iom_floor: 1e-6,
        }
    }
}

/// Basis truncation and mode window of one suite.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Window {
    pub d_max: usize,
    pub l_max: usize,
    /// `|k| ≤ modes` for current modes.
    pub modes: i64,
    pub h_max: i32,
}

fn window(d_max: usize, l_max: usize, modes: i64, h_max: i32) -> Window {
    Window { d_max, l_max, modes, h_max }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct IomSettings {
    pub d_max: usize,
    pub l_max: usize,
    pub order: usize,
    pub order_dual: usize,
    pub ladder: Vec<usize>,
    pub control_delta: f64,
}

impl Default for IomSettings {
    fn default() -> Self {
        Self { d_max: 2, l_max: 1, order: 1, order_dual: 1, ladder: vec![1, 2, 3, 4], control_delta: 0.1 }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct Settings {
    /// Largest boson mode in the commutator checks.
    pub boson_r_max: i32,
    /// Order in `w/z` of the contraction-table comparison.
    pub table_order: usize,
    /// Basis and `|a|, |b|` window of the zero-mode contraction products.
    pub zero_modes: Window,
    pub relations: Window,
    pub coproduct: Window,
    pub affine: Window,
    pub cancellation: Window,
    pub highest_weight: Window,
    /// `|s| ≤ hw_s_max` for the highest-weight vectors.
    pub hw_s_max: i64,
    pub iom: IomSettings,
}

impl Default for Settings {
    fn default() -> Self {
        Self {
            boson_r_max: 6,
            table_order: 8,
            zero_modes: window(1, 1, 1, 0),
            relations: window(3, 1, 3, 3),
            coproduct: window(2, 1, 3, 2),
            affine: window(3, 1, 2, 2),
            cancellation: window(2, 1, 3, 0),
            highest_weight: window(2, 2, 1, 1),
            hw_s_max: 3,
            iom: IomSettings::default(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SuiteConfig {
    pub m: usize,
    pub n: usize,
    pub suites: Vec<SuiteId>,
    #[serde(default)]
    pub params: ParamSource,
    #[serde(default)]
    pub tolerance: Tolerances,
    #[serde(default)]
    pub settings: Settings,
    #[serde(default, skip_serializing)]
    pub cache_dir: Option<PathBuf>,
    #[serde(default, skip_serializing)]
    pub report: Option<PathBuf>,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        Self {
            m: 2,
            n: 2,
            suites: SuiteId::ALL.to_vec(),
            params: ParamSource { seed: Some(1), ..ParamSource::default() },
            tolerance: Tolerances::default(),
            settings: Settings::default(),
            cache_dir: None,
            report: None,
        }
    }
}

fn bad(path: &str, msg: impl Into<String>) -> Error {
    Error::Config { path: path.into(), msg: msg.into() }
}

impl SuiteConfig {
    pub fn from_toml(text: &str) -> Result<Self> {
        let cfg: Self = toml::from_str(text).map_err(|e| {
            let path = e.span().map(|s| format!("bytes {}..{}", s.start, s.end)).unwrap_or_else(|| "<root>".into());
            bad(&path, e.message())
        })?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_toml(&std::fs::read_to_string(path)?)
    }

    /// Rejects configurations that cannot run, naming the offending field.
    pub fn validate(&self) -> Result<()> {
        if self.suites.is_empty() {
            return Err(bad("suites", "the suite list is empty"));
        }
        if self.m < 2 {
            return Err(bad("m", "needs m >= 2"));
        }
        if self.n < 2 {
            return Err(bad("n", "needs n >= 2"));
        }
        let t = &self.tolerance;
        for (name, v) in [
            ("rel", t.rel),
            ("relations", t.relations),
            ("coproduct", t.coproduct),
            ("affine", t.affine),
            ("affine_witness", t.affine_witness),
            ("cancellation", t.cancellation),
            ("cancellation_control", t.cancellation_control),
            ("highest_weight", t.highest_weight),
            ("iom_floor", t.iom_floor),
        ] {
            if !(v.is_finite() && v > 0.0) {
                return Err(bad(&format!("tolerance.{name}"), "must be positive and finite"));
            }
        }
        let s = &self.settings;
        if s.boson_r_max < 1 {
            return Err(bad("settings.boson_r_max", "must be >= 1"));
        }
        let ladder = &s.iom.ladder;
        if ladder.is_empty() || ladder.windows(2).any(|w| w[0] >= w[1]) {
            return Err(bad("settings.iom.ladder", "must be nonempty and strictly increasing"));
        }
        if self.suites.contains(&SuiteId::Coproduct) && self.n != 2 {
            return Err(bad("suites", "the coproduct suite needs n = 2"));
        }
        let p = &self.params;
        let explicit = [p.q.is_some(), p.d.is_some(), p.dc.is_some(), p.u.is_some(), p.uc.is_some()];
        match (p.seed.is_some(), explicit.iter().filter(|x| **x).count()) {
            (true, 0) => {}
            (false, 5) => {
                if p.u.as_ref().unwrap().len() != self.n {
                    return Err(bad("params.u", format!("expected {} values", self.n)));
                }
                if p.uc.as_ref().unwrap().len() != self.m {
                    return Err(bad("params.uc", format!("expected {} values", self.m)));
                }
            }
            (true, _) => return Err(bad("params", "give either a seed or explicit values, not both")),
            (false, _) => return Err(bad("params", "explicit parameters need all of q, d, dc, u, uc")),
        }
        self.resolve_params(self.m, self.n).map(|_| ())
    }

    /// Parameters at shape `(m, n)` (the highest-weight suite asks for `n = 1`).
    pub fn resolve_params(&self, m: usize, n: usize) -> Result<AlgebraParams> {
        let p = &self.params;
        if let Some(seed) = p.seed {
            let regime = p.regime.clone().unwrap_or_default();
            return AlgebraParams::sample(m, n, seed, &regime);
        }
        let get = |x: Option<Cplx>, name: &str| x.map(cplx).ok_or_else(|| bad(&format!("params.{name}"), "missing"));
        let list = |x: &Option<Vec<Cplx>>, name: &str, len: usize| -> Result<Vec<C64>> {
            let v = x.as_ref().ok_or_else(|| bad(&format!("params.{name}"), "missing"))?;
            Ok(v.iter().copied().map(cplx).chain(std::iter::repeat(C64::new(1.0, 0.0))).take(len).collect())
        };
        let out = AlgebraParams::new(m, n, get(p.q, "q")?, get(p.d, "d")?, get(p.dc, "dc")?, list(&p.u, "u", n)?, list(&p.uc, "uc", m)?)?;
        if n >= 2 {
            out.check_moduli()?;
        }
        Ok(out)
    }

    /// Digest of everything that affects results (not the report or cache paths).
    pub fn hash_hex(&self) -> String {
        let canonical = Self { suites: self.ordered_suites(), ..self.clone() };
        let json = serde_json::to_string(&canonical).expect("config serializes");
        hex::encode(Sha256::digest(json.as_bytes()))
    }

    /// Selected suites, deduplicated, in dependency order.
    pub fn ordered_suites(&self) -> Vec<SuiteId> {
        let mut v = self.suites.clone();
        v.sort();
        v.dedup();
        v
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn minimal_file_uses_defaults() {
        let cfg = SuiteConfig::from_toml("m = 2\nn = 2\nsuites = [\"affine\", \"bosons\"]\n[params]\nseed = 4\n").unwrap();
        cfg.validate().unwrap();
        assert_eq!(cfg.ordered_suites(), vec![SuiteId::Bosons, SuiteId::Affine]);
        assert_eq!(cfg.settings, Settings::default());
    }

    #[test]
    fn empty_suite_list_is_rejected() {
        let cfg = SuiteConfig::from_toml("m = 2\nn = 2\nsuites = []\n").unwrap();
        match cfg.validate() {
            Err(Error::Config { path, .. }) => assert_eq!(path, "suites"),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn field_paths_are_reported() {
        let mut cfg = SuiteConfig::default();
        cfg.settings.iom.ladder = vec![3, 2];
        assert!(matches!(cfg.validate(), Err(Error::Config { path, .. }) if path == "settings.iom.ladder"));
        let err = SuiteConfig::from_toml("m = 2\nn = 2\nsuites = [\"bosons\"]\nbogus = 1\n").unwrap_err();
        assert!(err.to_string().contains("bogus"), "{err}");
        let err = SuiteConfig::from_toml("m = 2\nn = 2\nsuites = [\"nope\"]\n").unwrap_err();
        assert!(matches!(err, Error::Config { .. }));
    }

    #[test]
    fn explicit_parameters_resolve() {
        let text = "m = 2\nn = 2\nsuites = [\"contractions\"]\n[params]\nq = [1.1, 0.1]\nd = [0.27, 0.4]\ndc = [0.25, -0.3]\nu = [[1.0, 0.0], [0.9, 0.2]]\nuc = [[1.1, 0.0], [1.0, -0.3]]\n";
        let cfg = SuiteConfig::from_toml(text).unwrap();
        cfg.validate().unwrap();
        let p = cfg.resolve_params(2, 2).unwrap();
        assert_eq!(p.q, C64::new(1.1, 0.1));
    }

    #[test]
    fn hash_ignores_output_paths() {
        let a = SuiteConfig::default();
        let b = SuiteConfig { report: Some("x.json".into()), cache_dir: Some("c".into()), ..a.clone() };
        assert_eq!(a.hash_hex(), b.hash_hex());
        let mut d = a.clone();
        d.suites.reverse();
        assert_eq!(a.hash_hex(), d.hash_hex());
        let c = SuiteConfig { m: 3, ..a.clone() };
        assert_ne!(a.hash_hex(), c.hash_hex());
    }
}
