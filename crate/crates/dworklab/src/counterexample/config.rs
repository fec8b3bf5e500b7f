//! Key-value experiment configuration and form preparation.
//!
//! Files are plain `key = value` lines; `#` starts a comment. Recognized
//! keys: n, k, r, form ("generate" or grammar text), j_list
//! (comma-separated), s, c0..c5, seed, b_max.

use crate::analysis::{
    find_derivative_witness, generate_example, intertwining_rank, relabel_for_witness,
};
use crate::parse::parse_form;
use crate::poly::Form;

use super::instance::Constants;
use super::CxError;

#[derive(Debug, Clone)]
pub enum FormSpec {
    Generate,
    Text(String),
}

#[derive(Debug, Clone)]
pub struct ExperimentConfig {
    pub n: usize,
    pub k: u32,
    pub r: usize,
    pub form: FormSpec,
    pub j_list: Vec<u64>,
    pub s: Option<f64>,
    pub constants: Constants,
    pub seed: u64,
    pub b_max: u32,
}

pub fn parse_config(text: &str) -> Result<ExperimentConfig, CxError> {
    let mut n = None;
    let mut k = None;
    let mut r = None;
    let mut form = FormSpec::Generate;
    let mut j_list = Vec::new();
    let mut s = None;
    let mut constants = Constants::default();
    let mut seed = 0u64;
    let mut b_max = 32u32;

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(CxError::Config(format!(
                "line {}: expected `key = value`, got `{raw}`",
                lineno + 1
            )));
        };
        let key = key.trim();
        let value = value.trim();
        let bad =
            |what: &str| CxError::Config(format!("line {}: bad {what}: `{value}`", lineno + 1));
        match key {
            "n" => n = Some(value.parse::<usize>().map_err(|_| bad("n"))?),
            "k" => k = Some(value.parse::<u32>().map_err(|_| bad("k"))?),
            "r" => r = Some(value.parse::<usize>().map_err(|_| bad("r"))?),
            "form" => {
                form = if value == "generate" {
                    FormSpec::Generate
                } else {
                    FormSpec::Text(value.to_string())
                };
            }
            "j_list" => {
                j_list = value
                    .split(',')
                    .map(|v| v.trim().parse::<u64>().map_err(|_| bad("j_list")))
                    .collect::<Result<_, _>>()?;
            }
            "s" => s = Some(value.parse::<f64>().map_err(|_| bad("s"))?),
            "c0" => {
                constants.c0 = value.parse().map_err(|_| bad("c0"))?;
                constants.refresh_delta0();
            }
            "c1" => constants.c1 = value.parse().map_err(|_| bad("c1"))?,
            "c2" => constants.c2 = value.parse().map_err(|_| bad("c2"))?,
            "c3" => constants.c3 = value.parse().map_err(|_| bad("c3"))?,
            "c4" => constants.c4 = value.parse().map_err(|_| bad("c4"))?,
            "c5" => constants.c5 = value.parse().map_err(|_| bad("c5"))?,
            "seed" => seed = value.parse().map_err(|_| bad("seed"))?,
            "b_max" => b_max = value.parse().map_err(|_| bad("b_max"))?,
            other => {
                return Err(CxError::Config(format!(
                    "line {}: unknown key `{other}`",
                    lineno + 1
                )));
            }
        }
    }

    let n = n.ok_or_else(|| CxError::Config("missing key `n`".into()))?;
    let k = k.ok_or_else(|| CxError::Config("missing key `k`".into()))?;
    let r = r.ok_or_else(|| CxError::Config("missing key `r`".into()))?;
    Ok(ExperimentConfig {
        n,
        k,
        r,
        form,
        j_list,
        s,
        constants,
        seed,
        b_max,
    })
}

/// Resolves the working form: generates the example family or parses the
/// given text, verifies the intertwining rank matches, relabels so the
/// witness variable comes first, requires integer coefficients, and finds
/// the derivative witness tuple.
pub fn prepare_form(
    n: usize,
    k: u32,
    r: usize,
    spec: &FormSpec,
    b_max: u32,
) -> Result<(Form, Vec<i64>), CxError> {
    let raw = match spec {
        FormSpec::Generate => generate_example(n, k, r)?,
        FormSpec::Text(text) => {
            let f = parse_form(text, Some(n))?;
            if !f.is_homogeneous() || f.degree() != Some(k) {
                return Err(CxError::FormMismatch(format!(
                    "expected a homogeneous form of degree {k}"
                )));
            }
            f
        }
    };
    let report = intertwining_rank(&raw)?;
    if report.rank != r {
        return Err(CxError::FormMismatch(format!(
            "form has intertwining rank {}, expected {r}",
            report.rank
        )));
    }
    let relabeled = relabel_for_witness(&raw, &report);
    if relabeled.integer_terms().is_none() {
        return Err(CxError::FormMismatch(
            "coefficients must be integers; clear denominators first".into(),
        ));
    }
    let witness = find_derivative_witness(&relabeled, r, b_max)?;
    Ok((relabeled, witness.tuple))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_a_full_config() {
        let text = "\
# growth experiment
n = 3
k = 3
r = 2
form = generate
j_list = 40, 50, 60
s = 0.25
c4 = 0.4
seed = 7
";
        let cfg = parse_config(text).unwrap();
        assert_eq!((cfg.n, cfg.k, cfg.r), (3, 3, 2));
        assert_eq!(cfg.j_list, vec![40, 50, 60]);
        assert_eq!(cfg.s, Some(0.25));
        assert_eq!(cfg.constants.c4, 0.4);
        assert_eq!(cfg.seed, 7);
    }

    #[test]
    fn rejects_unknown_keys() {
        assert!(matches!(parse_config("bogus = 1"), Err(CxError::Config(_))));
    }

    #[test]
    fn prepare_rejects_rank_mismatch() {
        let err = prepare_form(3, 3, 2, &FormSpec::Text("x1^3 + x2^3 + x3^3".into()), 32);
        assert!(matches!(err, Err(CxError::FormMismatch(_))));
    }

    #[test]
    fn prepare_generates_and_finds_witness() {
        let (form, witness) = prepare_form(3, 3, 2, &FormSpec::Generate, 32).unwrap();
        assert_eq!(form.degree(), Some(3));
        assert_eq!(witness, vec![1, 1]);
    }
}
