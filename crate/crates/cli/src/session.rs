//! Session files: ring, optional ideal, named items, optional command list.

use std::collections::BTreeMap;

use serde::Deserialize;

use hskernel_core::hs::HSDerivation;
use hskernel_core::ideal::{
    derivation_to_hs, fingerprint, is_log_derivation, is_log_hs, obstruction_step, step_integrate,
};
use hskernel_core::text::parse_poly;
use hskernel_core::verify::{self, Parallelism};
use hskernel_core::{dual, DiffOp, Ideal, KernelError, MultiIndex, Poly, Ring, TruncSeries};

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Kernel(KernelError),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "{m}"),
            CliError::Kernel(e) => write!(f, "{e}"),
        }
    }
}

impl From<KernelError> for CliError {
    fn from(e: KernelError) -> CliError {
        CliError::Kernel(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

type CliResult<T> = Result<T, CliError>;

#[derive(Deserialize)]
struct SessionFile {
    ring: RingSpec,
    #[serde(default)]
    ideal: Option<Vec<String>>,
    #[serde(default)]
    items: BTreeMap<String, ItemSpec>,
    #[serde(default)]
    commands: Vec<String>,
}

#[derive(Deserialize)]
struct RingSpec {
    #[serde(rename = "char")]
    characteristic: u64,
    vars: Vec<String>,
}

/// Exactly one of the fields must be present.
#[derive(Deserialize)]
struct ItemSpec {
    #[serde(default)]
    poly: Option<String>,
    #[serde(default)]
    diffop: Option<BTreeMap<String, String>>,
    #[serde(default)]
    hs: Option<Vec<Vec<String>>>,
}

#[derive(Clone, Debug)]
pub enum Item {
    Poly(Poly),
    Op(DiffOp),
    Hs(HSDerivation),
}

pub struct Session {
    ring: Ring,
    names: Vec<String>,
    ideal: Option<Ideal>,
    items: BTreeMap<String, Item>,
    commands: Vec<String>,
}

impl Session {
    pub fn parse(text: &str) -> CliResult<Session> {
        let file: SessionFile =
            serde_json::from_str(text).map_err(|e| usage(format!("invalid session JSON: {e}")))?;
        let names = file.ring.vars.clone();
        if names.is_empty() {
            return Err(usage("ring.vars must be non-empty"));
        }
        let ring = Ring::new(names.len(), file.ring.characteristic)?;
        let ideal = match &file.ideal {
            None => None,
            Some(gens) => {
                let gens = gens
                    .iter()
                    .map(|s| parse_poly(s, ring, &names))
                    .collect::<Result<Vec<_>, _>>()?;
                Some(Ideal::new(ring, gens)?)
            }
        };
        let mut items = BTreeMap::new();
        for (name, spec) in &file.items {
            let count =
                spec.poly.is_some() as u8 + spec.diffop.is_some() as u8 + spec.hs.is_some() as u8;
            if count != 1 {
                return Err(usage(format!(
                    "item '{name}' must define exactly one of poly, diffop, hs"
                )));
            }
            let item = if let Some(src) = &spec.poly {
                Item::Poly(parse_poly(src, ring, &names)?)
            } else if let Some(terms) = &spec.diffop {
                let mut op = DiffOp::zero(ring);
                for (key, src) in terms {
                    let alpha = parse_index(key, ring.nvars())
                        .ok_or_else(|| usage(format!("item '{name}': bad index key '{key}'")))?;
                    op = op.add(&DiffOp::from_term(alpha, parse_poly(src, ring, &names)?))?;
                }
                Item::Op(op)
            } else {
                let rows = spec.hs.as_ref().expect("checked");
                if rows.len() != ring.nvars() {
                    return Err(usage(format!(
                        "item '{name}': expected {} image rows, got {}",
                        ring.nvars(),
                        rows.len()
                    )));
                }
                let order = rows[0].len().saturating_sub(1);
                let images = rows
                    .iter()
                    .map(|row| {
                        let coeffs = row
                            .iter()
                            .map(|s| parse_poly(s, ring, &names))
                            .collect::<Result<Vec<_>, _>>()?;
                        TruncSeries::from_coeffs(ring, order, coeffs)
                    })
                    .collect::<Result<Vec<_>, _>>()?;
                Item::Hs(HSDerivation::from_images(ring, images)?)
            };
            items.insert(name.clone(), item);
        }
        Ok(Session {
            ring,
            names,
            ideal,
            items,
            commands: file.commands,
        })
    }

    pub fn commands(&self) -> &[String] {
        &self.commands
    }

    fn item(&self, name: &str) -> CliResult<&Item> {
        self.items
            .get(name)
            .ok_or_else(|| usage(format!("unknown item '{name}'")))
    }

    fn op_item(&self, name: &str) -> CliResult<&DiffOp> {
        match self.item(name)? {
            Item::Op(op) => Ok(op),
            _ => Err(usage(format!("item '{name}' is not a diffop"))),
        }
    }

    fn hs_item(&self, name: &str) -> CliResult<&HSDerivation> {
        match self.item(name)? {
            Item::Hs(d) => Ok(d),
            _ => Err(usage(format!("item '{name}' is not an hs derivation"))),
        }
    }

    fn ideal(&self) -> CliResult<&Ideal> {
        self.ideal
            .as_ref()
            .ok_or_else(|| usage("session declares no ideal"))
    }

    /// Runs one command; returns (report lines, mathematical-negative flag).
    pub fn run(
        &self,
        cmd: &[String],
        seed: u64,
        cases: usize,
        target: usize,
    ) -> CliResult<(Vec<String>, bool)> {
        let Some((verb, args)) = cmd.split_first() else {
            return Err(usage("empty command"));
        };
        match (verb.as_str(), args) {
            ("check-log", [name]) => self.check_log(name),
            ("components", [name]) => self.components(name),
            ("compose", [a, b]) => self.compose(a, b),
            ("total-symbol", [name]) => self.total_symbol(name),
            ("theta", [name]) => self.theta(name),
            ("shuffle", [a, b]) => self.shuffle(a, b),
            ("divided-power", [name, i]) => {
                let i: u32 = i
                    .parse()
                    .map_err(|_| usage("divided-power needs an integer"))?;
                self.divided_power(name, i)
            }
            ("reduce", [name]) => self.reduce(name),
            ("fingerprint", [name]) => self.fingerprint(name),
            ("obstruction", [name]) => self.obstruction(name),
            ("step-integrate", [name]) => self.step_integrate(name, target),
            ("verify-theorems", []) => self.verify_theorems(seed, cases),
            _ => Err(usage(format!(
                "unknown command or bad arguments: '{}'",
                cmd.join(" ")
            ))),
        }
    }

    fn check_log(&self, name: &str) -> CliResult<(Vec<String>, bool)> {
        let ideal = self.ideal()?;
        match self.item(name)? {
            Item::Op(op) => {
                if is_log_derivation(op, ideal)? {
                    Ok((vec![format!("check-log {name}: LOGARITHMIC")], false))
                } else {
                    let (j, g) = first_bad_derivation(op, ideal)?;
                    Ok((
                        vec![format!(
                            "check-log {name}: NOT LOGARITHMIC (delta(g{}) reduces to {})",
                            j + 1,
                            g.render(&self.names)
                        )],
                        true,
                    ))
                }
            }
            Item::Hs(d) => {
                if is_log_hs(d, ideal)? {
                    Ok((vec![format!("check-log {name}: LOGARITHMIC")], false))
                } else {
                    let (j, i, nf) = first_bad_hs(d, ideal)?;
                    Ok((
                        vec![format!(
                            "check-log {name}: NOT LOGARITHMIC (t^{i} coefficient of Phi(g{}) reduces to {})",
                            j + 1,
                            nf.render(&self.names)
                        )],
                        true,
                    ))
                }
            }
            Item::Poly(_) => Err(usage(format!("item '{name}' is not a derivation"))),
        }
    }

    fn components(&self, name: &str) -> CliResult<(Vec<String>, bool)> {
        let d = self.hs_item(name)?;
        let mut lines = Vec::new();
        for i in 0..=d.length() {
            lines.push(format!("D_{i} = {}", d.component(i)?.render(&self.names)));
        }
        Ok((lines, false))
    }

    fn compose(&self, a: &str, b: &str) -> CliResult<(Vec<String>, bool)> {
        let da = self.hs_item(a)?;
        let db = self.hs_item(b)?;
        let (da, db) = if da.length() > db.length() {
            (da.truncate(db.length())?, db.clone())
        } else {
            (da.clone(), db.truncate(da.length())?)
        };
        let prod = da.compose(&db)?;
        let mut lines = vec![format!("compose {a} {b}: length {}", prod.length())];
        for i in 0..=prod.length() {
            lines.push(format!(
                "D_{i} = {}",
                prod.component(i)?.render(&self.names)
            ));
        }
        Ok((lines, false))
    }

    fn total_symbol(&self, name: &str) -> CliResult<(Vec<String>, bool)> {
        let d = self.hs_item(name)?;
        let sym = d.total_symbol()?;
        let mut lines = Vec::new();
        for i in 0..=sym.length() {
            let slice = DiffOp::from_terms(self.ring, sym.slot(i).principal());
            lines.push(format!("sigma_{i} = {}", slice.render(&self.names)));
        }
        lines.push(format!("exponential type: {}", sym.is_exponential_type()?));
        Ok((lines, false))
    }

    fn theta(&self, name: &str) -> CliResult<(Vec<String>, bool)> {
        let op = self.op_item(name)?;
        let n = op.order().unwrap_or(0);
        let t = dual::theta(op, n)?;
        Ok((render_md(&t, &self.names), false))
    }

    fn shuffle(&self, a: &str, b: &str) -> CliResult<(Vec<String>, bool)> {
        let (pa, pb) = (self.op_item(a)?, self.op_item(b)?);
        let ta = dual::theta(pa, pa.order().unwrap_or(0))?;
        let tb = dual::theta(pb, pb.order().unwrap_or(0))?;
        let s = dual::shuffle(&ta, &tb)?;
        Ok((render_md(&s, &self.names), false))
    }

    fn divided_power(&self, name: &str, i: u32) -> CliResult<(Vec<String>, bool)> {
        let op = self.op_item(name)?;
        let t = dual::theta(op, op.order().unwrap_or(0))?;
        let r = dual::divided_power(&t, i)?;
        Ok((render_md(&r, &self.names), false))
    }

    fn reduce(&self, name: &str) -> CliResult<(Vec<String>, bool)> {
        let Item::Poly(p) = self.item(name)? else {
            return Err(usage(format!("item '{name}' is not a poly")));
        };
        let nf = self.ideal()?.reduce(p)?;
        Ok((
            vec![format!("reduce {name}: {}", nf.render(&self.names))],
            false,
        ))
    }

    fn fingerprint(&self, name: &str) -> CliResult<(Vec<String>, bool)> {
        let op = self.op_item(name)?;
        let fp = fingerprint(op, self.ideal()?)?;
        let parts: Vec<String> = fp.iter().map(|p| p.render(&self.names)).collect();
        Ok((
            vec![format!("fingerprint {name}: ({})", parts.join(", "))],
            false,
        ))
    }

    fn obstruction(&self, name: &str) -> CliResult<(Vec<String>, bool)> {
        let d = self.hs_item(name)?;
        let report = obstruction_step(d, self.ideal()?)?;
        let blocked = !report.is_ok();
        Ok((vec![render_report(&report, &self.names)], blocked))
    }

    fn step_integrate(&self, name: &str, target: usize) -> CliResult<(Vec<String>, bool)> {
        let start = match self.item(name)? {
            Item::Op(op) => derivation_to_hs(op)?,
            Item::Hs(d) => d.clone(),
            Item::Poly(_) => return Err(usage(format!("item '{name}' is not a derivation"))),
        };
        let (d, trace) = step_integrate(&start, self.ideal()?, target)?;
        let mut lines: Vec<String> = trace
            .iter()
            .map(|r| render_report(r, &self.names))
            .collect();
        let blocked = d.length() < target;
        if blocked {
            lines.push(format!(
                "greedy path blocked at length {} (target {target}); not a verdict on {target}-integrability",
                d.length()
            ));
        } else {
            lines.push(format!("reached length {target}"));
        }
        Ok((lines, blocked))
    }

    fn verify_theorems(&self, seed: u64, cases: usize) -> CliResult<(Vec<String>, bool)> {
        let outcomes = verify::run_all(seed, cases, Parallelism::Parallel);
        let failed = outcomes.iter().any(|o| !o.passed());
        let lines = outcomes.iter().map(|o| o.to_string()).collect();
        Ok((lines, failed))
    }
}

fn parse_index(key: &str, nvars: usize) -> Option<MultiIndex> {
    let inner = key.trim().strip_prefix('[')?.strip_suffix(']')?;
    let parts: Vec<u32> = inner
        .split(',')
        .map(|p| p.trim().parse().ok())
        .collect::<Option<Vec<_>>>()?;
    (parts.len() == nvars).then(|| MultiIndex::new(parts))
}

fn render_md(t: &hskernel_core::MultiDerivation, names: &[String]) -> Vec<String> {
    t.render(names).lines().map(String::from).collect()
}

fn render_report(r: &hskernel_core::ObstructionReport, names: &[String]) -> String {
    match &r.correction {
        Some(c) => format!("step {}: OK (correction: {})", r.step, c.render(names)),
        None => format!(
            "step {}: BLOCKED (obstruction NF: {})",
            r.step,
            r.obstruction_nf.render(names)
        ),
    }
}

fn first_bad_derivation(op: &DiffOp, ideal: &Ideal) -> Result<(usize, Poly), KernelError> {
    for (j, g) in ideal.gens().iter().enumerate() {
        let nf = ideal.reduce(&op.apply(g))?;
        if !nf.is_zero() {
            return Ok((j, nf));
        }
    }
    unreachable!("caller established non-logarithmicity")
}

fn first_bad_hs(d: &HSDerivation, ideal: &Ideal) -> Result<(usize, usize, Poly), KernelError> {
    for (j, g) in ideal.gens().iter().enumerate() {
        let s = d.apply_phi(g)?;
        for i in 1..=d.length() {
            let nf = ideal.reduce(s.coeff(i))?;
            if !nf.is_zero() {
                return Ok((j, i, nf));
            }
        }
    }
    unreachable!("caller established non-logarithmicity")
}
