//! Flat `key = value` configuration shared by the config file and CLI flags.
//!
//! Keys match the long flag names (`gen-n`, `budget-fracs`, ...); `_` and `-`
//! are interchangeable. Later assignments override earlier ones, so the CLI
//! applies the file first and its own flags second.

use std::fs;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};

use smk_core::ast::{AstConfig, EstimatorKind};
use smk_core::objectives::RevenueCostRule;

use crate::experiment::{default_budget_fractions, Algorithm, ExperimentSpec, ObjectiveKind, Source};

#[derive(Clone, Debug, PartialEq)]
pub struct Settings {
    pub algorithms: Vec<Algorithm>,
    pub objective: ObjectiveKind,
    pub graph: Option<PathBuf>,
    pub features: Option<PathBuf>,
    pub gen_n: usize,
    pub gen_p: f64,
    pub gen_dim: usize,
    pub budget_fracs: Vec<f64>,
    pub trials: usize,
    pub epsilon: f64,
    pub delta: f64,
    pub alpha: f64,
    pub seed: u64,
    pub out_csv: Option<PathBuf>,
    pub out_svg: Option<PathBuf>,
    pub estimator: EstimatorKind,
    pub cost_rule: RevenueCostRule,
    pub deterministic: bool,
}

impl Default for Settings {
    fn default() -> Self {
        let ast = AstConfig::default();
        Settings {
            algorithms: vec![Algorithm::Ast],
            objective: ObjectiveKind::Cut,
            graph: None,
            features: None,
            gen_n: 500,
            gen_p: 0.2,
            gen_dim: 64,
            budget_fracs: default_budget_fractions(),
            trials: 5,
            epsilon: ast.epsilon,
            delta: ast.delta,
            alpha: ast.alpha,
            seed: 0,
            out_csv: None,
            out_svg: None,
            estimator: ast.estimator,
            cost_rule: RevenueCostRule::default(),
            deterministic: false,
        }
    }
}

fn number<T: std::str::FromStr>(key: &str, value: &str) -> Result<T>
where
    T::Err: std::error::Error + Send + Sync + 'static,
{
    value.trim().parse().with_context(|| format!("bad value `{value}` for `{key}`"))
}

fn list<T, F: Fn(&str) -> Result<T>>(value: &str, item: F) -> Result<Vec<T>> {
    value.split(',').map(str::trim).filter(|s| !s.is_empty()).map(item).collect()
}

impl Settings {
    /// Applies one assignment.
    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        let key = key.trim().replace('_', "-");
        let v = value.trim();
        match key.as_str() {
            "algorithm" => self.algorithms = list(v, str::parse)?,
            "objective" => self.objective = v.parse()?,
            "graph" => self.graph = Some(PathBuf::from(v)),
            "features" => self.features = Some(PathBuf::from(v)),
            "gen-n" => self.gen_n = number(&key, v)?,
            "gen-p" => self.gen_p = number(&key, v)?,
            "gen-dim" => self.gen_dim = number(&key, v)?,
            "budget-fracs" => self.budget_fracs = list(v, |s| number(&key, s))?,
            "trials" => self.trials = number(&key, v)?,
            "epsilon" => self.epsilon = number(&key, v)?,
            "delta" => self.delta = number(&key, v)?,
            "alpha" => self.alpha = number(&key, v)?,
            "seed" => self.seed = number(&key, v)?,
            "out-csv" => self.out_csv = Some(PathBuf::from(v)),
            "out-svg" => self.out_svg = Some(PathBuf::from(v)),
            "estimator" => {
                self.estimator = match v {
                    "greedy" => EstimatorKind::Greedy,
                    "singleton" => EstimatorKind::Singleton,
                    other => bail!("unknown estimator `{other}` (expected greedy or singleton)"),
                }
            }
            "cost-rule" => {
                self.cost_rule = match v {
                    "one_minus_exp_neg" => RevenueCostRule::OneMinusExpNeg,
                    "exp_minus_one" => RevenueCostRule::ExpMinusOne,
                    other => bail!("unknown cost rule `{other}` (expected one_minus_exp_neg or exp_minus_one)"),
                }
            }
            "deterministic" => self.deterministic = number(&key, v)?,
            _ => bail!("unknown setting `{key}`"),
        }
        if self.algorithms.is_empty() {
            bail!("`algorithm` needs at least one entry");
        }
        Ok(())
    }

    /// Applies every line of a config file in order.
    pub fn apply_text(&mut self, text: &str, origin: &Path) -> Result<()> {
        for (i, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let Some((key, value)) = line.split_once('=') else {
                bail!("{}:{}: expected `key = value`", origin.display(), i + 1);
            };
            self.set(key, value)
                .with_context(|| format!("{}:{}", origin.display(), i + 1))?;
        }
        Ok(())
    }

    pub fn apply_file(&mut self, path: &Path) -> Result<()> {
        let text = fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
        self.apply_text(&text, path)
    }

    pub fn ast_config(&self) -> AstConfig {
        AstConfig {
            alpha: self.alpha,
            epsilon: self.epsilon,
            delta: self.delta,
            seed: self.seed,
            estimator: self.estimator,
            ..AstConfig::default()
        }
    }

    /// Source named by the settings: a data file for the objective when one
    /// was given, otherwise a generated instance.
    pub fn source(&self) -> Source {
        let file = match self.objective {
            ObjectiveKind::ImageSumm => &self.features,
            ObjectiveKind::Cut | ObjectiveKind::Revenue => &self.graph,
        };
        match file {
            Some(path) => Source::File(path.clone()),
            None => Source::Generate {
                n: self.gen_n,
                p: self.gen_p,
                seed: self.seed,
            },
        }
    }

    pub fn spec(&self, algorithm: Algorithm) -> ExperimentSpec {
        ExperimentSpec {
            budget_fractions: self.budget_fracs.clone(),
            trials: self.trials,
            config: self.ast_config(),
            cost_rule: self.cost_rule,
            feature_dim: self.gen_dim,
            deterministic: self.deterministic,
            ..ExperimentSpec::new(algorithm, self.objective, self.source())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn file_then_flags() {
        let mut s = Settings::default();
        let text = "# sweep\nalgorithm = ast, density_greedy\nobjective = revenue\ngen_n = 120\n\nbudget-fracs = 0.1,0.3\nepsilon=0.05\n";
        s.apply_text(text, Path::new("sweep.conf")).unwrap();
        assert_eq!(s.algorithms, vec![Algorithm::Ast, Algorithm::DensityGreedy]);
        assert_eq!(s.objective, ObjectiveKind::Revenue);
        assert_eq!(s.gen_n, 120);
        assert_eq!(s.budget_fracs, vec![0.1, 0.3]);
        s.set("gen-n", "90").unwrap();
        s.set("estimator", "singleton").unwrap();
        assert_eq!(s.gen_n, 90);
        assert_eq!(s.epsilon, 0.05);
        let spec = s.spec(Algorithm::Ast);
        assert_eq!(spec.config.epsilon, 0.05);
        assert_eq!(spec.config.estimator, EstimatorKind::Singleton);
        assert_eq!(spec.source, Source::Generate { n: 90, p: 0.2, seed: 0 });
    }

    #[test]
    fn errors_carry_line_numbers() {
        let mut s = Settings::default();
        let err = s.apply_text("trials = 3\nnonsense\n", Path::new("a.conf")).unwrap_err();
        assert!(format!("{err:#}").contains("a.conf:2"));
        let err = s.apply_text("trials = many\n", Path::new("b.conf")).unwrap_err();
        assert!(format!("{err:#}").contains("b.conf:1"));
        assert!(s.set("colour", "red").is_err());
        assert!(s.set("algorithm", " , ").is_err());
    }

    #[test]
    fn data_files_select_the_source() {
        let mut s = Settings::default();
        s.set("features", "imgs.csv").unwrap();
        assert!(matches!(s.source(), Source::Generate { .. }));
        s.set("objective", "image_summ").unwrap();
        assert_eq!(s.source(), Source::File("imgs.csv".into()));
    }
}
