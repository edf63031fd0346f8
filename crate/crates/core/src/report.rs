//! Batch verification runs and their reports, shared by the command-line tool
//! and the examples.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::time::Duration;

use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::Value;

use crate::bkar::bkar_check;
use crate::error::{Error, Result};
use crate::gjdm::{color_tree, main_theorem_check, mobile, sv_tree};
use crate::gue::{maintool_check, mc_cumulant, random_maintool_instance, refined_expansion_check};
use crate::maps::{enumerate_maps, rooted_from_labeled, thooft_leading, tutte};
use crate::partition::SetPartition;
use crate::perm::{NumericalPartition, Permutation};
use crate::poly::{rational, Monomial, Polynomial, Var};

pub const SCHEMA: &str = "v1";

/// One comparison: the two values compared and whether they agree.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub pass: bool,
    pub lhs: String,
    pub rhs: String,
    pub values: BTreeMap<String, String>,
}

impl Verdict {
    pub fn new(check: impl Into<String>, pass: bool, lhs: impl ToString, rhs: impl ToString) -> Self {
        Verdict { check: check.into(), pass, lhs: lhs.to_string(), rhs: rhs.to_string(), values: BTreeMap::new() }
    }

    pub fn with(mut self, key: &str, value: impl ToString) -> Self {
        self.values.insert(key.to_string(), value.to_string());
        self
    }
}

/// The outcome of one command. The JSON form omits timings so that equal
/// `(command, seed)` pairs give identical bytes.
#[derive(Clone, Debug, Serialize)]
pub struct RunReport {
    pub schema: &'static str,
    pub command: String,
    pub seed: Option<u64>,
    pub parameters: BTreeMap<String, Value>,
    pub verdicts: Vec<Verdict>,
    #[serde(skip)]
    pub elapsed: Option<Duration>,
    #[serde(skip)]
    pub csv_columns: Option<Vec<String>>,
    #[serde(skip)]
    pub dot: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub artifact: Option<Value>,
}

impl RunReport {
    pub fn new(command: &str, seed: Option<u64>) -> Self {
        RunReport {
            schema: SCHEMA,
            command: command.to_string(),
            seed,
            parameters: BTreeMap::new(),
            verdicts: Vec::new(),
            elapsed: None,
            csv_columns: None,
            dot: None,
            artifact: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl Serialize) -> Self {
        self.parameters.insert(key.to_string(), serde_json::to_value(value).expect("parameters serialize"));
        self
    }

    pub fn all_pass(&self) -> bool {
        self.verdicts.iter().all(|v| v.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_table(&self) -> String {
        let mut out = format!("{} ({} checks)\n", self.command, self.verdicts.len());
        let keys: Vec<&String> = {
            let mut k: Vec<&String> = self.verdicts.iter().flat_map(|v| v.values.keys()).collect();
            k.sort();
            k.dedup();
            k
        };
        let mut rows = vec![["check", "result", "lhs", "rhs"].iter().map(|s| s.to_string()).chain(keys.iter().map(|k| k.to_string())).collect::<Vec<_>>()];
        for v in &self.verdicts {
            let mut row = vec![v.check.clone(), if v.pass { "pass" } else { "FAIL" }.to_string(), v.lhs.clone(), v.rhs.clone()];
            row.extend(keys.iter().map(|k| v.values.get(*k).cloned().unwrap_or_default()));
            rows.push(row);
        }
        let widths: Vec<usize> =
            (0..rows[0].len()).map(|c| rows.iter().map(|r| r[c].chars().count()).max().unwrap_or(0)).collect();
        for row in &rows {
            let line: Vec<String> = row.iter().zip(&widths).map(|(cell, w)| format!("{cell:<w$}")).collect();
            out.push_str(line.join("  ").trim_end());
            out.push('\n');
        }
        let passed = self.verdicts.iter().filter(|v| v.pass).count();
        let _ = write!(out, "{passed}/{} passed", self.verdicts.len());
        if let Some(t) = self.elapsed {
            let _ = write!(out, " in {:.2}s", t.as_secs_f64());
        }
        out.push('\n');
        out
    }

    pub fn to_csv(&self) -> Result<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        let io = |e: csv::Error| Error::Invalid(e.to_string());
        match &self.csv_columns {
            Some(cols) => {
                w.write_record(cols).map_err(io)?;
                for v in &self.verdicts {
                    w.write_record(cols.iter().map(|c| v.values.get(c).map(String::as_str).unwrap_or(""))).map_err(io)?;
                }
            }
            None => {
                w.write_record(["check", "pass", "lhs", "rhs"]).map_err(io)?;
                for v in &self.verdicts {
                    w.write_record([v.check.as_str(), if v.pass { "true" } else { "false" }, &v.lhs, &v.rhs]).map_err(io)?;
                }
            }
        }
        let bytes = w.into_inner().map_err(|e| Error::Invalid(e.to_string()))?;
        String::from_utf8(bytes).map_err(|e| Error::Invalid(e.to_string()))
    }
}

fn check_cap(name: &str, value: usize, cap: usize, unsafe_sizes: bool) -> Result<()> {
    if value > cap && !unsafe_sizes {
        return Err(Error::SizeLimit(format!("{name} = {value} exceeds {cap}; pass --unsafe-sizes to override")));
    }
    Ok(())
}

/// Checks `|GJdM_n(θ)| = (n/2 − ℓ + 2)|Map_n(θ)|` on one θ per class, even
/// `n ≤ n_max`, stopping at the first failure.
pub fn cmd_verify_main(n_max: usize, classes: Option<&[NumericalPartition]>, unsafe_sizes: bool) -> Result<RunReport> {
    check_cap("n-max", n_max, 10, unsafe_sizes)?;
    let mut report = RunReport::new("verify-main", None).param("n_max", n_max);
    if let Some(c) = classes {
        report = report.param("classes", c.iter().map(|l| l.to_string()).collect::<Vec<_>>());
    }
    for n in (2..=n_max).step_by(2) {
        for lambda in NumericalPartition::all(n) {
            if classes.is_some_and(|c| !c.contains(&lambda)) {
                continue;
            }
            let c = main_theorem_check(&lambda.representative());
            let verdict = Verdict::new(format!("λ={lambda}"), c.holds(), c.gjdm, c.maps as i128 * c.denominator.max(0) as i128)
                .with("maps", c.maps)
                .with("gjdm", c.gjdm)
                .with("denominator", c.denominator);
            let failed = !verdict.pass;
            report.verdicts.push(verdict);
            if failed {
                return Ok(report);
            }
        }
    }
    Ok(report)
}

/// Brute-force labeled and rooted counts against the two closed forms.
pub fn cmd_tutte(n_max: usize, unsafe_sizes: bool) -> Result<RunReport> {
    check_cap("n-max", n_max, 10, unsafe_sizes)?;
    let mut report = RunReport::new("tutte", None).param("n_max", n_max);
    for n in (2..=n_max).step_by(2) {
        for lambda in NumericalPartition::all(n).into_iter().filter(NumericalPartition::is_eulerian) {
            let brute = rational(enumerate_maps(&lambda.representative()).len() as i64);
            let rooted = rooted_from_labeled(&lambda, &brute);
            let closed = tutte(&lambda)?;
            report.verdicts.push(
                Verdict::new(format!("λ={lambda} labeled"), brute == closed.labeled, &brute, &closed.labeled),
            );
            report.verdicts.push(
                Verdict::new(format!("λ={lambda} rooted"), rooted == closed.rooted, &rooted, &closed.rooted),
            );
        }
    }
    Ok(report)
}

/// The leading coefficient of each cumulant polynomial against `|Map_n(θ)|`.
pub fn cmd_thooft(n_max: usize, unsafe_sizes: bool) -> Result<RunReport> {
    check_cap("n-max", n_max, 10, unsafe_sizes)?;
    let mut report = RunReport::new("thooft", None).param("n_max", n_max);
    for n in 1..=n_max {
        for lambda in NumericalPartition::all(n) {
            let leading = thooft_leading(&lambda)?;
            let maps = enumerate_maps(&lambda.representative()).len() as i128;
            report.verdicts.push(Verdict::new(format!("λ={lambda}"), leading == maps, leading, maps));
        }
    }
    Ok(report)
}

/// A random partition of `0..n` and a random polynomial in the off-diagonal `q`
/// variables of total degree at most three.
pub fn random_bkar_instance<R: Rng + ?Sized>(n: usize, rng: &mut R) -> (SetPartition, Polynomial) {
    let labels: Vec<usize> = (0..n).map(|_| rng.gen_range(0..n)).collect();
    let theta = SetPartition::from_labels(&labels);
    let mut f = Polynomial::zero();
    for _ in 0..rng.gen_range(1..=3) {
        let mut powers = Vec::new();
        for _ in 0..rng.gen_range(0..=3) {
            let i = rng.gen_range(0..n);
            let j = (i + rng.gen_range(1..n)) % n;
            powers.push((Var::q(i, j), 1));
        }
        let coeff = BigRational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=4).into());
        f.add_term(Monomial::from_powers(powers), coeff);
    }
    (theta, f)
}

/// Random BKAR instances: Möbius sum, tree integral and product form agree.
pub fn cmd_bkar(n: usize, trials: usize, seed: u64, unsafe_sizes: bool) -> Result<RunReport> {
    check_cap("n", n, 5, unsafe_sizes)?;
    if n < 2 {
        return Err(Error::Invalid("n must be at least 2".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RunReport::new("bkar", Some(seed)).param("n", n).param("trials", trials);
    for t in 0..trials {
        let (theta, f) = random_bkar_instance(n, &mut rng);
        let c = bkar_check(&theta, &f)?;
        report.verdicts.push(
            Verdict::new(format!("trial {}", t + 1), c.holds(), &c.lhs, &c.rhs)
                .with("theta", &theta)
                .with("closed_form", &c.closed_form),
        );
    }
    Ok(report)
}

/// Random Gaussian-polynomial instances of the tree expansion of cumulants.
pub fn cmd_maintool(trials: usize, seed: u64) -> Result<RunReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = RunReport::new("maintool", Some(seed)).param("trials", trials);
    for t in 0..trials {
        let (theta, polys, c) = random_maintool_instance(&mut rng);
        let check = maintool_check(&theta, &polys, &c)?;
        report.verdicts.push(
            Verdict::new(format!("trial {}", t + 1), check.holds(), &check.lhs, &check.rhs).with("theta", &theta),
        );
    }
    Ok(report)
}

/// The tree-indexed expansions of `𝔐_{λ,N}` against its exact value.
pub fn cmd_expansion(lambda: &NumericalPartition, levels: usize, unsafe_sizes: bool) -> Result<RunReport> {
    check_cap("n", lambda.size(), 4, unsafe_sizes)?;
    check_cap("N", levels, 3, unsafe_sizes)?;
    let r = refined_expansion_check(lambda, levels as i64)?;
    let mut report = RunReport::new("expansion", None).param("lambda", lambda.parts()).param("N", levels);
    report.verdicts.push(Verdict::new("tree sum", r.tree_sum == r.exact, &r.tree_sum, &r.exact));
    report.verdicts.push(Verdict::new("quadruple sum", r.quadruple_sum == r.exact, &r.quadruple_sum, &r.exact));
    report.verdicts.push(
        Verdict::new("culled terms vanish", r.culled_nonzero == 0, r.culled_nonzero, 0).with("culled", r.culled),
    );
    Ok(report)
}

/// A Monte-Carlo estimate, passing when within four standard errors.
pub fn cmd_mc(lambda: &NumericalPartition, levels: usize, samples: usize, seed: u64, unsafe_sizes: bool) -> Result<RunReport> {
    check_cap("N", levels, 200, unsafe_sizes)?;
    check_cap("samples", samples, 10_000_000, unsafe_sizes)?;
    let e = mc_cumulant(lambda, levels, samples, seed)?;
    let mut report = RunReport::new("mc", Some(seed))
        .param("lambda", lambda.parts())
        .param("N", levels)
        .param("samples", samples);
    report.csv_columns = Some(["lambda", "N", "samples", "estimate", "stderr", "exact", "seed"].map(String::from).to_vec());
    report.verdicts.push(
        Verdict::new("within 4 stderr", e.z_score().abs() <= 4.0, e.estimate, e.exact)
            .with("lambda", lambda)
            .with("N", levels)
            .with("samples", samples)
            .with("estimate", e.estimate)
            .with("stderr", e.stderr)
            .with("exact", e.exact)
            .with("seed", seed),
    );
    Ok(report)
}

/// Parses `g` from a comma- or whitespace-separated list of `-1`, `0`, `1`
/// (also `-`, `+`).
pub fn parse_signs(text: &str) -> Result<Vec<i8>> {
    text.split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(|t| match t {
            "-1" | "-" => Ok(-1),
            "0" => Ok(0),
            "1" | "+1" | "+" => Ok(1),
            _ => Err(Error::Parse(format!("bad sign {t:?}"))),
        })
        .collect()
}

/// The Shabat-Voevodsky tree of `(θ, σ)`, its coloring by `g`, or its mobile.
pub fn cmd_export(theta: &Permutation, sigma: &Permutation, g: Option<&[i8]>, as_mobile: bool) -> Result<RunReport> {
    let mut report = RunReport::new("export", None)
        .param("theta", theta.to_string())
        .param("sigma", sigma.to_string());
    let (tree, check) = match g {
        None => (sv_tree(theta, sigma)?, None),
        Some(g) => {
            report = report.param("g", g).param("mobile", as_mobile);
            let colored = color_tree(theta, sigma, g)?;
            if as_mobile {
                let m = mobile(theta, sigma, g)?;
                let back = m.to_colored_tree()?;
                (m.tree().clone(), Some(back == colored))
            } else {
                (colored, None)
            }
        }
    };
    let (t2, s2) = tree.read_off();
    let read_back = t2.permutation() == theta && s2.permutation() == sigma;
    report.verdicts.push(Verdict::new("read-off recovers (θ, σ)", read_back, format!("({t2}, {s2})"), format!("({theta}, {sigma})")));
    if let Some(ok) = check {
        report.verdicts.push(Verdict::new("mobile decodes to the colored tree", ok, ok, true));
    }
    report.dot = Some(tree.to_dot());
    report.artifact = Some(tree.to_json());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verify_main_small() {
        let r = cmd_verify_main(4, None, false).unwrap();
        assert!(r.all_pass());
        assert_eq!(r.verdicts.len(), 2 + 5);
        let only = [NumericalPartition::new(vec![4]).unwrap()];
        let r = cmd_verify_main(4, Some(&only), false).unwrap();
        assert_eq!(r.verdicts.len(), 1);
        assert!(cmd_verify_main(12, None, false).is_err());
    }

    #[test]
    fn json_is_reproducible() {
        let a = cmd_bkar(4, 5, 17, false).unwrap();
        let b = cmd_bkar(4, 5, 17, false).unwrap();
        assert!(a.all_pass());
        assert_eq!(a.to_json(), b.to_json());
        assert!(a.to_json().contains("\"schema\": \"v1\""));
    }

    #[test]
    fn mc_csv_header() {
        let r = cmd_mc(&NumericalPartition::new(vec![2]).unwrap(), 4, 2000, 1, false).unwrap();
        let csv = r.to_csv().unwrap();
        assert!(csv.starts_with("lambda,N,samples,estimate,stderr,exact,seed\n"));
    }

    #[test]
    fn signs_parse() {
        assert_eq!(parse_signs("1,-1, 0 +").unwrap(), vec![1, -1, 0, 1]);
        assert!(parse_signs("2").is_err());
    }
}
