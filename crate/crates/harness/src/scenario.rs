//! Scenario files: flat `key = value` text, one pair per line, `#` comments.
//!
//! ```text
//! n = 32
//! sigma = 1
//! design = standard        # standard | fourier
//! p = 8
//! collection = all_subsets # all_subsets | ordered | unordered | binomial | fixed
//! alpha = 1
//! b = 1
//! beta = theorem1          # theorem1 | remark4 | <number>
//! mu = coef:3,3,3,3,0,0,0,0
//! reps = 10000
//! seed = 42
//! ```

use std::collections::BTreeMap;
use std::path::Path;

use lsmix_core::collections::{
    all_subsets, binomial_subsets, fourier_design, ordered_linear, unordered_linear,
};
use lsmix_core::design::{standard_basis, DesignFamily};
use lsmix_core::tuning::{self, OrthonormalRule};
use lsmix_core::{LRule, MixConfig, Model, ModelCollection, VarianceMode};

use crate::error::{HarnessError, Result};
use crate::signal::{signal_section5, BvFunction};

#[derive(Debug, Clone, PartialEq)]
pub enum MuSpec {
    Zero,
    Explicit(Vec<f64>),
    /// coefficients on the leading design columns
    Coefficients(Vec<f64>),
    Illustration,
    Bv(BvFunction),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DesignSpec {
    Standard { p: usize },
    Fourier,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CollectionSpec {
    AllSubsets {
        alpha: f64,
        b: f64,
    },
    Ordered {
        alpha: f64,
    },
    Unordered {
        q: usize,
    },
    Binomial {
        b: f64,
    },
    /// one model spanned by the listed columns; `S_*` is the whole design
    Fixed {
        columns: Vec<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BetaSpec {
    Theorem1,
    Remark4,
    Value(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Scenario {
    pub mu: MuSpec,
    pub sigma: f64,
    pub n: usize,
    pub design: DesignSpec,
    pub collection: CollectionSpec,
    pub beta: BetaSpec,
    pub l_rule: LRule,
    pub known_variance: bool,
    pub reps: usize,
    pub master_seed: u64,
}

/// A scenario with its vectors and collection materialised.
#[derive(Debug, Clone)]
pub struct Prepared {
    pub mu: Vec<f64>,
    pub collection: ModelCollection,
    pub config: MixConfig,
    /// whether `beta` satisfies the general risk-bound condition
    pub conditions_ok: bool,
}

impl Scenario {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut kv: BTreeMap<String, (usize, String)> = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| HarnessError::Parse {
                line: i + 1,
                msg: format!("expected `key = value`, got `{line}`"),
            })?;
            let key = k.trim().to_ascii_lowercase();
            if kv
                .insert(key.clone(), (i + 1, v.trim().to_string()))
                .is_some()
            {
                return Err(HarnessError::Parse {
                    line: i + 1,
                    msg: format!("duplicate key `{key}`"),
                });
            }
        }
        let mut r = Reader { kv };

        let design = match r.take("design").as_ref().map(|(l, v)| (*l, v.as_str())) {
            None | Some((_, "standard")) => DesignSpec::Standard {
                p: r.required("p")?,
            },
            Some((_, "fourier")) => DesignSpec::Fourier,
            Some((line, other)) => {
                return Err(HarnessError::Parse {
                    line,
                    msg: format!("unknown design `{other}`"),
                })
            }
        };
        let n: usize = match design {
            DesignSpec::Fourier => r.optional("n")?.unwrap_or(60),
            DesignSpec::Standard { .. } => r.required("n")?,
        };
        let p = match design {
            DesignSpec::Standard { p } => p,
            DesignSpec::Fourier => lsmix_core::collections::FOURIER_COLUMNS,
        };
        let alpha: f64 = r.optional("alpha")?.unwrap_or(1.0);
        let b: f64 = r.optional("b")?.unwrap_or(1.0);
        let collection = match r.take("collection").as_ref().map(|(l, v)| (*l, v.as_str())) {
            None | Some((_, "all_subsets")) => CollectionSpec::AllSubsets { alpha, b },
            Some((_, "ordered")) => CollectionSpec::Ordered { alpha },
            Some((_, "unordered")) => CollectionSpec::Unordered {
                q: r.optional("q")?.unwrap_or(p),
            },
            Some((_, "binomial")) => CollectionSpec::Binomial { b },
            Some((_, "fixed")) => {
                let (line, v) = r.take("model").ok_or_else(|| {
                    HarnessError::Invalid("collection = fixed needs `model`".into())
                })?;
                CollectionSpec::Fixed {
                    columns: parse_list(&v, line)?,
                }
            }
            Some((line, other)) => {
                return Err(HarnessError::Parse {
                    line,
                    msg: format!("unknown collection `{other}`"),
                })
            }
        };
        let beta = match r.take("beta") {
            None => BetaSpec::Theorem1,
            Some((_, v)) if v == "theorem1" => BetaSpec::Theorem1,
            Some((_, v)) if v == "remark4" => BetaSpec::Remark4,
            Some((line, v)) => BetaSpec::Value(parse_value(&v, line)?),
        };
        let l_rule = match r.take("l_rule").as_ref().map(|(l, v)| (*l, v.as_str())) {
            None | Some((_, "per_model")) => LRule::PerModel,
            Some((_, "half_dim")) => LRule::HalfDim,
            Some((_, "b_times_card")) => LRule::BTimesCardinality(b),
            Some((line, other)) => {
                return Err(HarnessError::Parse {
                    line,
                    msg: format!("unknown l_rule `{other}`"),
                })
            }
        };
        let known_variance = match r.take("variance").as_ref().map(|(l, v)| (*l, v.as_str())) {
            None | Some((_, "residual")) => false,
            Some((_, "known")) => true,
            Some((line, other)) => {
                return Err(HarnessError::Parse {
                    line,
                    msg: format!("unknown variance mode `{other}`"),
                })
            }
        };
        let mu = match r.take("mu") {
            None => MuSpec::Zero,
            Some((line, v)) => parse_mu(&v, line)?,
        };
        let sigma: f64 = r.required("sigma")?;
        let reps: usize = r.optional("reps")?.unwrap_or(1000);
        let master_seed: u64 = r.optional("seed")?.unwrap_or(0);
        if let Some((key, (line, _))) = r.kv.iter().next() {
            return Err(HarnessError::Parse {
                line: *line,
                msg: format!("unknown key `{key}`"),
            });
        }
        let s = Scenario {
            mu,
            sigma,
            n,
            design,
            collection,
            beta,
            l_rule,
            known_variance,
            reps,
            master_seed,
        };
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<()> {
        if self.reps < 1 {
            return Err(HarnessError::Invalid("reps must be at least 1".into()));
        }
        // sigma = 0 is accepted so noiseless runs can be checked
        if !(self.sigma >= 0.0 && self.sigma.is_finite()) {
            return Err(HarnessError::Invalid(format!(
                "sigma must be finite and >= 0, got {}",
                self.sigma
            )));
        }
        if self.known_variance && self.sigma == 0.0 {
            return Err(HarnessError::Invalid(
                "known-variance mode needs sigma > 0".into(),
            ));
        }
        Ok(())
    }

    pub fn build_design(&self) -> Result<DesignFamily> {
        Ok(match self.design {
            DesignSpec::Standard { p } => standard_basis(self.n, p)?,
            DesignSpec::Fourier => fourier_design(self.n)?,
        })
    }

    pub fn prepare(&self) -> Result<Prepared> {
        self.validate()?;
        let design = self.build_design()?;
        let mu = match &self.mu {
            MuSpec::Zero => vec![0.0; self.n],
            MuSpec::Explicit(v) => {
                if v.len() != self.n {
                    return Err(HarnessError::Invalid(format!(
                        "mu has {} entries, n = {}",
                        v.len(),
                        self.n
                    )));
                }
                v.clone()
            }
            MuSpec::Coefficients(theta) => {
                if theta.len() > design.p() {
                    return Err(HarnessError::Invalid(format!(
                        "{} coefficients for a design with {} columns",
                        theta.len(),
                        design.p()
                    )));
                }
                let mut full = theta.clone();
                full.resize(design.p(), 0.0);
                design.combine(&full)?.into_inner()
            }
            MuSpec::Illustration => signal_section5(self.n),
            MuSpec::Bv(f) => (0..self.n)
                .map(|i| f.eval(i as f64 / self.n as f64))
                .collect(),
        };
        let p = design.p();
        let collection = match &self.collection {
            CollectionSpec::AllSubsets { alpha, b } => all_subsets(design, *alpha, *b)?,
            CollectionSpec::Ordered { alpha } => ordered_linear(design, *alpha)?,
            CollectionSpec::Unordered { q } => unordered_linear(design, *q)?,
            CollectionSpec::Binomial { b } => binomial_subsets(design, *b)?,
            CollectionSpec::Fixed { columns } => {
                let model = Model::new(0, columns.clone(), 1.0, 0.0)?;
                ModelCollection::new(design, vec![model], (0..p).collect())?
            }
        };
        let (n, n_star) = (collection.n(), collection.n_star());
        let beta = match self.beta {
            BetaSpec::Theorem1 => tuning::beta_max_theorem1(n, n_star)?,
            BetaSpec::Remark4 => {
                tuning::beta_max_orthonormal(n, collection.star_dim(), OrthonormalRule::Remark4)?
            }
            BetaSpec::Value(b) => b,
        };
        let variance = if self.known_variance {
            VarianceMode::Known(self.sigma * self.sigma)
        } else {
            VarianceMode::ResidualEstimate
        };
        let config = MixConfig::new(beta, self.l_rule, variance)?;
        Ok(Prepared {
            mu,
            conditions_ok: tuning::check_theorem1_conditions(beta, n_star, n),
            collection,
            config,
        })
    }
}

struct Reader {
    kv: BTreeMap<String, (usize, String)>,
}

impl Reader {
    fn take(&mut self, key: &str) -> Option<(usize, String)> {
        self.kv.remove(key)
    }

    fn optional<T: std::str::FromStr>(&mut self, key: &str) -> Result<Option<T>> {
        match self.take(key) {
            None => Ok(None),
            Some((line, v)) => parse_value(&v, line).map(Some),
        }
    }

    fn required<T: std::str::FromStr>(&mut self, key: &str) -> Result<T> {
        self.optional(key)?
            .ok_or_else(|| HarnessError::Invalid(format!("missing required key `{key}`")))
    }
}

fn parse_value<T: std::str::FromStr>(v: &str, line: usize) -> Result<T> {
    v.trim().parse().map_err(|_| HarnessError::Parse {
        line,
        msg: format!("cannot parse `{v}`"),
    })
}

fn parse_list<T: std::str::FromStr>(v: &str, line: usize) -> Result<Vec<T>> {
    if v.trim().is_empty() {
        return Ok(Vec::new());
    }
    v.split(',').map(|x| parse_value(x, line)).collect()
}

fn parse_mu(v: &str, line: usize) -> Result<MuSpec> {
    let v = v.trim();
    Ok(match v {
        "zero" => MuSpec::Zero,
        "illustration" | "fourier" => MuSpec::Illustration,
        _ => {
            if let Some(rest) = v.strip_prefix("bv:") {
                MuSpec::Bv(rest.parse()?)
            } else if let Some(rest) = v.strip_prefix("coef:") {
                MuSpec::Coefficients(parse_list(rest, line)?)
            } else {
                MuSpec::Explicit(parse_list(v, line)?)
            }
        }
    })
}
