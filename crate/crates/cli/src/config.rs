//! The run configuration. Flags are translated into a [`RunConfig`]; a
//! config file is one directly. Every output echoes the config it ran.

use ffdioph::boxcount::BoxCountRun;
use ffdioph::exponents::{FamilyConfig, PsiConfig};
use ffdioph::measure::SetKind;
use ffdioph::verify::VerifyParams;
use ffdioph::FieldConfig;
use num_rational::BigRational;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "binary_field")]
    pub field: FieldConfig,
    #[serde(default)]
    pub seed: u64,
    pub task: Task,
}

pub fn binary_field() -> FieldConfig {
    FieldConfig { p: 2, l: 1, modulus: None }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    Verify {
        lemma: String,
        #[serde(default)]
        params: VerifyParams,
    },
    Measure {
        sets: Vec<SetSpec>,
        #[serde(default = "one")]
        n: usize,
        #[serde(default)]
        depth: Option<usize>,
        /// Recount by enumerating points of `U`.
        #[serde(default)]
        brute: bool,
    },
    Exponents {
        quantity: Quantity,
        family: FamilyConfig,
        #[serde(default)]
        psi: Option<PsiConfig>,
        #[serde(default = "one")]
        n: usize,
        n_max: usize,
        #[serde(default = "tolerance")]
        tolerance: f64,
    },
    Dimension(DimensionTask),
    Stochastic {
        family: FamilyConfig,
        n_t: usize,
        #[serde(with = "ffdioph::serde_util::rational_str")]
        delta: BigRational,
        /// Defaults to the closed form of the family, when it has one.
        #[serde(default, with = "rational_opt_str")]
        v_s: Option<BigRational>,
        #[serde(default = "one")]
        n: usize,
        #[serde(default)]
        depth: Option<usize>,
        /// Monte Carlo samples; `0` skips sampling.
        #[serde(default)]
        samples: u64,
    },
    Boxcount {
        family: FamilyConfig,
        psi: PsiConfig,
        run: BoxCountRun,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum DimensionTask {
    Thm1 {
        m: usize,
        n: usize,
        #[serde(with = "ffdioph::serde_util::rational_str")]
        v_s: BigRational,
        #[serde(with = "ffdioph::serde_util::rational_str")]
        lambda: BigRational,
    },
    Thm2 {
        m: usize,
        n: usize,
        #[serde(with = "ffdioph::serde_util::rational_str")]
        eta: BigRational,
    },
    Slength {
        family: FamilyConfig,
        n: usize,
        #[serde(with = "ffdioph::serde_util::rational_str")]
        lambda: BigRational,
        #[serde(with = "ffdioph::serde_util::rational_str")]
        epsilon: BigRational,
        #[serde(with = "ffdioph::serde_util::rational_str")]
        s: BigRational,
        m_exponent: usize,
        n_max: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// v(S), the exponent of convergence of S.
    #[value(name = "vS")]
    #[serde(rename = "vS")]
    VS,
    /// γ(S), the counting exponent of S.
    Gamma,
    /// λ(ψ) along S.
    Lambda,
    /// η(ψ).
    Eta,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SetSpec {
    pub kind: SetKind,
    /// Coefficients of each entry of `q`, lowest degree first.
    pub q: Vec<Vec<u32>>,
    pub r: i64,
}

fn one() -> usize {
    1
}

fn tolerance() -> f64 {
    0.05
}

mod rational_opt_str {
    use num_rational::BigRational;
    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(r: &Option<BigRational>, s: S) -> Result<S::Ok, S::Error> {
        ffdioph::serde_util::rational_opt(r, s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Option<BigRational>, D::Error> {
        #[derive(Deserialize)]
        struct Wrap(#[serde(with = "ffdioph::serde_util::rational_str")] BigRational);
        Ok(Option::<Wrap>::deserialize(d)?.map(|w| w.0))
    }
}
