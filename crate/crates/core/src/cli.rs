//! Command dispatch and reports for problem files.

use std::fmt::Write as _;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::connection::{check_symbols, Connection};
use crate::diffop::{Ambient, Cochain, SeriesCochain};
use crate::error::{Error, Result};
use crate::hochschild::{bounded_cohomology, Caps, CurvedDgla};
use crate::linfty::{
    gauge_equivalent, jacobi_check, jacobi_residual, HochschildAlgebra, LInftyAlgebra,
};
use crate::parse::parse_poly;
use crate::poisson::{anchor, coisotropy_check, schouten_jacobi, CoisotropicData};
use crate::problem::{parse_cochain, parse_matrix, parse_range, Command, ProblemFile, StarSpec};
use crate::quantize::{
    boxtimes, conjugate, dequant, encode_gauge, gauge_check_module, moyal, quant,
    solve_first_order, solve_second_order, trivial_line, FirstOrder, HkrCaps, HkrWitness,
    ModuleDeformation, SecondOrder, StarProduct,
};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Verdict {
    Pass,
    Fail,
    CapExhausted,
}

impl Verdict {
    pub fn label(&self) -> &'static str {
        match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::CapExhausted => "CAP-EXHAUSTED",
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandReport {
    pub command: String,
    pub verdict: Verdict,
    /// `key = value` lines; values use the problem-file grammar.
    pub lines: Vec<(String, String)>,
    /// Assertion commands that re-fail on the reported witness.
    pub assertions: Vec<String>,
}

#[derive(Clone, Debug)]
pub struct Report {
    pub seed: u64,
    pub caps: HkrCaps,
    pub commands: Vec<CommandReport>,
    /// The input with any computed deformation, for the machine block.
    pub state: ProblemFile,
}

#[derive(Clone, Copy, Debug, Default)]
pub struct RunOptions {
    /// Overrides the file's caps.
    pub caps: Option<HkrCaps>,
    /// Used when neither the flag nor the file sets caps.
    pub default_caps: HkrCaps,
    pub seed: u64,
}

impl Report {
    /// 0 all pass, 1 any failure, 3 cap exhaustion without failures.
    pub fn exit_code(&self) -> i32 {
        if self.commands.iter().any(|c| c.verdict == Verdict::Fail) {
            1
        } else if self
            .commands
            .iter()
            .any(|c| c.verdict == Verdict::CapExhausted)
        {
            3
        } else {
            0
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "dqmod report");
        let _ = writeln!(out, "seed = {}", self.seed);
        let _ = writeln!(out, "caps = {},{}", self.caps.order, self.caps.degree);
        for (i, c) in self.commands.iter().enumerate() {
            let _ = writeln!(out, "\n[{}] {}: {}", i + 1, c.command, c.verdict.label());
            for (k, v) in &c.lines {
                let _ = writeln!(out, "    {} = {}", k, v);
            }
            for a in &c.assertions {
                let _ = writeln!(out, "    assert: {}", a);
            }
        }
        let count = |v: Verdict| self.commands.iter().filter(|c| c.verdict == v).count();
        let _ = writeln!(
            out,
            "\nsummary: {} passed, {} failed, {} cap-exhausted",
            count(Verdict::Pass),
            count(Verdict::Fail),
            count(Verdict::CapExhausted)
        );
        out
    }

    /// A problem file: verdicts, the (possibly solved) state, and the
    /// witness assertions as its command list.
    pub fn machine(&self) -> String {
        let mut out = String::from("# dqmod machine report\n[verdicts]\n");
        for (i, c) in self.commands.iter().enumerate() {
            let _ = writeln!(out, "c{} = {} {}", i + 1, c.verdict.label(), c.command);
            for (k, v) in &c.lines {
                let _ = writeln!(out, "# c{}.{} = {}", i + 1, k, v);
            }
        }
        out.push('\n');
        out.push_str(&self.state.fmt_sections());
        out.push_str("\n[commands]\n");
        for c in &self.commands {
            for a in &c.assertions {
                let _ = writeln!(out, "{}", a);
            }
        }
        out
    }
}

struct Outcome {
    verdict: Verdict,
    lines: Vec<(String, String)>,
    assertions: Vec<String>,
}

impl Outcome {
    fn pass() -> Self {
        Outcome {
            verdict: Verdict::Pass,
            lines: vec![],
            assertions: vec![],
        }
    }

    fn fail(msg: impl Into<String>) -> Self {
        Outcome {
            verdict: Verdict::Fail,
            lines: vec![("reason".into(), msg.into())],
            assertions: vec![],
        }
    }

    fn line(mut self, k: &str, v: impl Into<String>) -> Self {
        self.lines.push((k.into(), v.into()));
        self
    }

    fn assert(mut self, a: String) -> Self {
        self.assertions.push(a);
        self
    }

    fn verdict(mut self, v: Verdict) -> Self {
        self.verdict = v;
        self
    }
}

fn from_error(e: Error) -> Outcome {
    match e {
        Error::CapExhausted { .. } | Error::CapEscape(_) | Error::ResourceLimit { .. } => {
            Outcome::fail(e.to_string()).verdict(Verdict::CapExhausted)
        }
        e => Outcome::fail(e.to_string()),
    }
}

fn quoted(s: &str) -> String {
    format!("\"{}\"", s)
}

enum FirstState {
    NotRun,
    Solved(ModuleDeformation),
    Failed(Outcome),
}

struct Runner<'a> {
    pf: &'a ProblemFile,
    caps: HkrCaps,
    seed: u64,
    first: FirstState,
    second: Option<ModuleDeformation>,
    quantized: Option<Connection>,
}

/// Runs every command in order; later commands see earlier solutions.
pub fn run(pf: &ProblemFile, opts: RunOptions) -> Report {
    let caps = opts.caps.or(pf.caps).unwrap_or(opts.default_caps);
    let mut r = Runner {
        pf,
        caps,
        seed: opts.seed,
        first: FirstState::NotRun,
        second: None,
        quantized: None,
    };
    let mut commands = Vec::new();
    for c in &pf.commands {
        let o = r.command(c).unwrap_or_else(from_error);
        commands.push(CommandReport {
            command: c.text(),
            verdict: o.verdict,
            lines: o.lines,
            assertions: o.assertions,
        });
    }
    let mut state = pf.clone();
    if let Some(d) = r.current() {
        state.deformation = Some(d.alphas().to_vec());
    }
    state.commands.clear();
    Report {
        seed: opts.seed,
        caps,
        commands,
        state,
    }
}

impl<'a> Runner<'a> {
    fn names(&self) -> &[String] {
        &self.pf.vars
    }

    fn data(&self) -> Result<CoisotropicData> {
        let ideal = self
            .pf
            .ideal
            .as_ref()
            .ok_or_else(|| Error::Precondition("no [subvariety] given".into()))?;
        anchor(&self.pf.poisson, ideal)
    }

    fn ambient(&self) -> Result<Ambient> {
        self.pf
            .ambient()
            .ok_or_else(|| Error::Precondition("needs a coordinate-aligned subvariety".into()))
    }

    fn star(&self) -> Result<StarProduct> {
        match &self.pf.star {
            StarSpec::Moyal => moyal(&self.pf.poisson),
            StarSpec::Zero => Ok(StarProduct::zero(self.pf.vars.len())),
            StarSpec::Explicit(a, b) => StarProduct::new(a.clone(), b.clone()),
        }
    }

    fn connection(&self, data: &CoisotropicData) -> Result<Option<Connection>> {
        match &self.pf.connection {
            None => Ok(None),
            Some(c) => Connection::from_generators(data, c.lambda.clone(), c.mu.clone(), &c.gammas)
                .map(Some),
        }
    }

    fn fmt_connection(
        &self,
        out: Outcome,
        c: &Connection,
        data: &CoisotropicData,
    ) -> Result<Outcome> {
        let mut out = out
            .line("lambda", crate::poly::fmt_rat(&c.lambda))
            .line("mu", crate::poly::fmt_rat(&c.mu));
        for (name, op) in c.fmt_with(data, self.names())? {
            out = out.line(&format!("gamma[{}]", name), op);
        }
        Ok(out)
    }

    /// The most refined deformation available: solved or given.
    fn current(&self) -> Option<ModuleDeformation> {
        if let Some(d) = &self.second {
            return Some(d.clone());
        }
        if let FirstState::Solved(d) = &self.first {
            return Some(d.clone());
        }
        let alphas = self.pf.deformation.clone()?;
        ModuleDeformation::new(&self.data().ok()?, alphas).ok()
    }

    fn hkr_failure(&self, w: &HkrWitness) -> Outcome {
        Outcome::fail(format!("no solution: {:?}", w.condition))
            .line("residual", w.residual.fmt_with(self.names()))
            .assert(format!(
                "assert-zero-cochain arity={} cochain={}",
                w.residual.arity(),
                quoted(&w.residual.fmt_with(self.names()))
            ))
    }

    fn ensure_first(&mut self) -> Result<()> {
        if !matches!(self.first, FirstState::NotRun) {
            return Ok(());
        }
        let data = match self.data() {
            Ok(d) => d,
            Err(Error::Precondition(_)) => {
                let ideal = self
                    .pf
                    .ideal
                    .as_ref()
                    .ok_or_else(|| Error::Precondition("no [subvariety] given".into()))?;
                let rep = coisotropy_check(&self.pf.poisson, ideal)?;
                let mut o = Outcome::fail("subvariety is not coisotropic");
                if let Some((a, b, nf)) = rep.witness {
                    let g = ideal.generators();
                    o = o
                        .line(
                            "pair",
                            format!(
                                "{}, {}",
                                g[a].fmt_with(self.names()),
                                g[b].fmt_with(self.names())
                            ),
                        )
                        .line("bracket", nf.fmt_with(self.names()))
                        .assert(format!(
                            "assert-in-ideal poly={}",
                            quoted(&nf.fmt_with(self.names()))
                        ));
                }
                self.first = FirstState::Failed(o);
                return Ok(());
            }
            Err(e) => return Err(e),
        };
        let ideal = self.pf.ideal.as_ref().unwrap();
        let star = self.star()?;
        let target = self.connection(&data)?;
        let res = solve_first_order(
            &star,
            &self.pf.poisson,
            ideal,
            self.pf.rank,
            target.as_ref(),
            self.caps,
        );
        self.first = match res {
            Err(e) => FirstState::Failed(from_error(e)),
            Ok(FirstOrder::Solved { deformation, .. }) => FirstState::Solved(deformation),
            Ok(FirstOrder::NotCoisotropic { pair, bracket }) => {
                let g = ideal.generators();
                FirstState::Failed(
                    Outcome::fail("subvariety is not coisotropic")
                        .line(
                            "pair",
                            format!(
                                "{}, {}",
                                g[pair.0].fmt_with(self.names()),
                                g[pair.1].fmt_with(self.names())
                            ),
                        )
                        .line("bracket", bracket.fmt_with(self.names()))
                        .assert(format!(
                            "assert-in-ideal poly={}",
                            quoted(&bracket.fmt_with(self.names()))
                        )),
                )
            }
            Ok(FirstOrder::Failed(w)) => FirstState::Failed(self.hkr_failure(&w)),
        };
        Ok(())
    }

    fn dependency(&self, what: &str, o: &Outcome) -> Outcome {
        let mut d = Outcome::fail(format!("dependency {} failed", what)).verdict(o.verdict);
        for (k, v) in &o.lines {
            d = d.line(&format!("{}.{}", what, k), v.clone());
        }
        d.assertions = o.assertions.clone();
        d
    }

    fn command(&mut self, c: &Command) -> Result<Outcome> {
        let names = self.names().to_vec();
        match c.name.as_str() {
            "check-poisson" => {
                let rep = schouten_jacobi(&self.pf.poisson);
                Ok(match rep.witness {
                    None => Outcome::pass(),
                    Some(((i, j, k), s)) => Outcome::fail("Jacobi identity fails")
                        .line(
                            "triple",
                            format!("{}, {}, {}", names[i], names[j], names[k]),
                        )
                        .line("jacobiator", s.fmt_with(&names))
                        .assert(format!("assert-zero poly={}", quoted(&s.fmt_with(&names)))),
                })
            }
            "check-coisotropic" => {
                let ideal = self
                    .pf
                    .ideal
                    .as_ref()
                    .ok_or_else(|| Error::Precondition("no [subvariety] given".into()))?;
                let rep = coisotropy_check(&self.pf.poisson, ideal)?;
                Ok(match rep.witness {
                    None => Outcome::pass(),
                    Some((a, b, nf)) => {
                        let g = ideal.generators();
                        Outcome::fail("bracket of generators leaves the ideal")
                            .line(
                                "pair",
                                format!("{}, {}", g[a].fmt_with(&names), g[b].fmt_with(&names)),
                            )
                            .line("bracket", nf.fmt_with(&names))
                            .assert(format!(
                                "assert-in-ideal poly={}",
                                quoted(&nf.fmt_with(&names))
                            ))
                    }
                })
            }
            "solve-order1" => {
                self.ensure_first()?;
                Ok(match &self.first {
                    FirstState::Solved(d) => {
                        Outcome::pass().line("alpha1", d.alpha(1).fmt_with(&names))
                    }
                    FirstState::Failed(o) => self.clone_outcome(o),
                    FirstState::NotRun => unreachable!(),
                })
            }
            "solve-order2" => {
                self.ensure_first()?;
                let d1 = match &self.first {
                    FirstState::Solved(d) => d.clone(),
                    FirstState::Failed(o) => return Ok(self.dependency("solve-order1", o)),
                    FirstState::NotRun => unreachable!(),
                };
                let star = self.star()?;
                let data = d1.data().clone();
                let line = if self.pf.connection.is_some() {
                    Some(trivial_line(&data)?)
                } else {
                    None
                };
                match solve_second_order(&d1, &star, line.as_ref(), self.caps)? {
                    SecondOrder::Solved {
                        deformation,
                        freedom,
                        caps,
                        ..
                    } => {
                        let o = Outcome::pass()
                            .line("alpha1", deformation.alpha(1).fmt_with(&names))
                            .line("alpha2", deformation.alpha(2).fmt_with(&names))
                            .line("freedom", freedom.to_string())
                            .line("caps", format!("{},{}", caps.0, caps.1));
                        self.second = Some(deformation);
                        Ok(o)
                    }
                    SecondOrder::Obstructed {
                        pair, obstruction, ..
                    } => {
                        let g = data.generators.clone();
                        let m = obstruction.fmt_with(&names);
                        Ok(
                            Outcome::fail("curvature differs from the star-product class")
                                .line(
                                    "pair",
                                    format!("{}, {}", names[g[pair.0]], names[g[pair.1]]),
                                )
                                .line("obstruction", m.clone())
                                .assert(format!("assert-zero-matrix matrix={}", quoted(&m))),
                        )
                    }
                    SecondOrder::Failed(w) => Ok(self.hkr_failure(&w)),
                }
            }
            "verify-dgla" => {
                let amb = self
                    .pf
                    .ambient()
                    .unwrap_or_else(|| Ambient::new(names.len(), &[], self.pf.rank));
                let star = self.star()?;
                let h = CurvedDgla::new(&amb, &star.as_vec(), 2)?;
                let samples: usize = c
                    .args
                    .get("samples")
                    .map(|s| s.parse().unwrap())
                    .unwrap_or(3);
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let tests: Vec<SeriesCochain> = (0..samples)
                    .map(|i| h.monomial(i % 2, &Cochain::random(&amb, i % 3, 2, 2, 2, &mut rng)))
                    .collect();
                let rep = h.axioms(&tests)?;
                let o = if rep.all() {
                    Outcome::pass()
                } else {
                    Outcome::fail("curved dgLa axioms fail")
                };
                Ok(o.line("l1l0", rep.l1l0.to_string())
                    .line("l1_squared", rep.l1_squared.to_string())
                    .line("jacobi", rep.jacobi.to_string())
                    .line("derivation", rep.derivation.to_string()))
            }
            "mc-residual" => {
                let d = self.require_deformation()?;
                let star = self.star()?;
                let r = d.mc_residual(&star)?;
                match (0..=r.order()).find(|&n| !r.coeff(n).is_zero()) {
                    None => Ok(Outcome::pass().line("order", d.order().to_string())),
                    Some(n) => {
                        let v = r.coeff(n).fmt_with(&names);
                        Ok(Outcome::fail("Maurer-Cartan residual is nonzero")
                            .line("power", n.to_string())
                            .line("residual", v.clone())
                            .assert(format!(
                                "assert-zero-cochain arity={} cochain={}",
                                r.arity(),
                                quoted(&v)
                            )))
                    }
                }
            }
            "cohomology" => {
                let amb = self.ambient()?;
                let degrees = parse_range(&c.args["degree"]).unwrap();
                let top = *degrees.iter().max().unwrap();
                let caps = c
                    .args
                    .get("caps")
                    .and_then(|s| crate::problem::parse_caps3(s))
                    .unwrap_or(Caps::new(top, 2, 2));
                let twisted = c.args.get("twisted").is_some_and(|v| v == "true");
                let res = if twisted {
                    let d = self.require_deformation()?;
                    let h = CurvedDgla::new(&amb, &self.star()?.as_vec(), d.order())?;
                    let t = h.twist(&d.as_series())?;
                    bounded_cohomology(&amb, d.order(), &degrees, caps, &|s| t.l1(s))?
                } else {
                    let h = CurvedDgla::flat(&amb, 0);
                    bounded_cohomology(&amb, 0, &degrees, caps, &|s| h.l1(s))?
                };
                let mut o = Outcome::pass().line(
                    "caps",
                    format!("{},{},{}", caps.arity, caps.order, caps.degree),
                );
                for r in res {
                    o = o.line(
                        &format!("H{}", r.degree),
                        format!(
                            "{} (cocycles {}, coboundaries {})",
                            r.dim, r.cocycle_dim, r.coboundary_dim
                        ),
                    );
                }
                Ok(o)
            }
            "gauge-check" => {
                let d = self.require_deformation()?;
                let star = self.star()?;
                let amb = d.ambient().clone();
                let samples: usize = c.args.get("samples").map_or(1, |s| s.parse().unwrap());
                let mut rng = ChaCha8Rng::seed_from_u64(self.seed);
                let mut o = Outcome::pass();
                for k in 0..samples.max(1) {
                    let phis: Vec<Cochain> = (0..d.order())
                        .map(|_| Cochain::random(&amb, 0, 1, 1, 2, &mut rng))
                        .collect();
                    let moved = conjugate(&d, &phis)?;
                    let module = gauge_check_module(&d, &moved, &phis)?;
                    let enc = encode_gauge(&d, &phis, &star)?;
                    let alg = HochschildAlgebra::new(&enc.dgla);
                    let path = gauge_equivalent(&alg, &enc.start, &enc.end, &enc.path)?;
                    let ok = module.holds && path.holds();
                    if ok && k + 1 < samples {
                        continue;
                    }
                    o = if ok {
                        Outcome::pass()
                    } else {
                        Outcome::fail("gauge transformation is not coherent")
                    };
                    o = o
                        .line("samples", (k + 1).to_string())
                        .line("module", module.holds.to_string())
                        .line("path_is_mc", path.path_is_mc.to_string())
                        .line(
                            "endpoints",
                            (path.starts_at_b0 && path.ends_at_b1).to_string(),
                        );
                    for (i, p) in phis.iter().enumerate() {
                        o = o.line(&format!("phi{}", i + 1), p.fmt_with(&names));
                    }
                    break;
                }
                Ok(o)
            }
            "quant" => {
                let data = self.data()?;
                let m = self
                    .connection(&data)?
                    .ok_or_else(|| Error::Precondition("no [connection] given".into()))?;
                let line = trivial_line(&data)?;
                let q = quant(&m, &line, &data)?;
                let sym = check_symbols(&q, &data)?;
                let star = self.star()?;
                let second = match solve_first_order(
                    &star,
                    &self.pf.poisson,
                    self.pf.ideal.as_ref().unwrap(),
                    q.rank(),
                    Some(&q),
                    self.caps,
                )? {
                    FirstOrder::Solved { deformation, .. } => {
                        match solve_second_order(&deformation, &star, Some(&line), self.caps)? {
                            SecondOrder::Solved { .. } => "solved".to_string(),
                            SecondOrder::Obstructed { obstruction, .. } => {
                                format!("obstructed {}", obstruction.fmt_with(&names))
                            }
                            SecondOrder::Failed(w) => format!("failed {:?}", w.condition),
                        }
                    }
                    FirstOrder::NotCoisotropic { .. } => "not coisotropic".into(),
                    FirstOrder::Failed(w) => format!("first order failed {:?}", w.condition),
                };
                let ok = sym.holds && second == "solved";
                let o = if ok {
                    Outcome::pass()
                } else {
                    Outcome::fail("quantized module does not extend")
                };
                let o = self
                    .fmt_connection(o, &q, &data)?
                    .line("solve-order2", second);
                self.quantized = Some(q);
                Ok(o)
            }
            "dequant" => {
                let data = self.data()?;
                let line = trivial_line(&data)?;
                let m = self
                    .connection(&data)?
                    .ok_or_else(|| Error::Precondition("no [connection] given".into()))?;
                let (src, check) = match &self.quantized {
                    Some(q) => (q.clone(), true),
                    None => (m.clone(), false),
                };
                let back = dequant(&src, &line, &data)?;
                let o = if check {
                    let same = back.gammas(&data)? == m.gammas(&data)?
                        && back.lambda == m.lambda
                        && back.mu == m.mu;
                    if same {
                        Outcome::pass()
                    } else {
                        Outcome::fail("round trip does not reproduce the connection")
                    }
                    .line("round_trip", same.to_string())
                } else {
                    Outcome::pass()
                };
                self.fmt_connection(o, &back, &data)
            }
            "boxtimes" => {
                let data = self.data()?;
                let line = trivial_line(&data)?;
                let e = self
                    .connection(&data)?
                    .ok_or_else(|| Error::Precondition("no [connection] given".into()))?;
                let b = boxtimes(&e, &line, &line, &data)?;
                let sym = check_symbols(&b, &data)?;
                let same = b.gammas(&data)? == e.gammas(&data)?;
                let o = if sym.holds && same {
                    Outcome::pass()
                } else {
                    Outcome::fail("E ⊠ L is not E")
                };
                self.fmt_connection(o.line("unit_law", same.to_string()), &b, &data)
            }
            "linfty-check" => {
                let l = self
                    .pf
                    .linfty
                    .as_ref()
                    .ok_or_else(|| Error::Precondition("no [linfty] section".into()))?;
                let arity: usize = c.args.get("arity").map(|s| s.parse().unwrap()).unwrap_or(3);
                let rep = jacobi_check(l, &l.basis(), arity)?;
                Ok(match rep.witness {
                    None => Outcome::pass().line("arity", arity.to_string()),
                    Some((word, r)) => {
                        let w: Vec<&str> = word.iter().map(|&i| l.space().label(i)).collect();
                        Outcome::fail("higher Jacobi relation fails")
                            .line("word", w.join(","))
                            .line("residual", r.fmt_with(l.space()))
                            .assert(format!("assert-jacobi word={}", w.join(",")))
                    }
                })
            }
            "assert-in-ideal" => {
                let ideal = self
                    .pf
                    .ideal
                    .as_ref()
                    .ok_or_else(|| Error::Precondition("no [subvariety] given".into()))?;
                let p = parse_poly(&c.args["poly"], &names)?;
                let nf = ideal.normal_form(&p)?;
                Ok(if nf.is_zero() {
                    Outcome::pass()
                } else {
                    Outcome::fail("not in the ideal").line("normal_form", nf.fmt_with(&names))
                })
            }
            "assert-zero" => {
                let p = parse_poly(&c.args["poly"], &names)?;
                Ok(if p.is_zero() {
                    Outcome::pass()
                } else {
                    Outcome::fail("nonzero")
                })
            }
            "assert-zero-matrix" => {
                let m = parse_matrix(&c.args["matrix"], &names, self.pf.rank, c.line, 1)?;
                Ok(if m.is_zero() {
                    Outcome::pass()
                } else {
                    Outcome::fail("nonzero")
                })
            }
            "assert-zero-cochain" => {
                let amb = self.ambient()?;
                let arity: usize = c.args["arity"].parse().unwrap();
                let x = parse_cochain(&c.args["cochain"], &names, &amb, arity, c.line, 1)?;
                Ok(if x.is_zero() {
                    Outcome::pass()
                } else {
                    Outcome::fail("nonzero")
                })
            }
            "assert-jacobi" => {
                let l = self
                    .pf
                    .linfty
                    .as_ref()
                    .ok_or_else(|| Error::Precondition("no [linfty] section".into()))?;
                let basis = l.basis();
                let xs: Vec<_> = c.args["word"]
                    .split(',')
                    .filter(|s| !s.is_empty())
                    .map(|s| basis[l.space().index(s.trim()).unwrap()].clone())
                    .collect();
                let r = jacobi_residual(l, &xs)?;
                Ok(if l.is_zero(&r) {
                    Outcome::pass()
                } else {
                    Outcome::fail("relation fails").line("residual", r.fmt_with(l.space()))
                })
            }
            other => Err(Error::Precondition(format!("unknown command {}", other))),
        }
    }

    fn clone_outcome(&self, o: &Outcome) -> Outcome {
        Outcome {
            verdict: o.verdict,
            lines: o.lines.clone(),
            assertions: o.assertions.clone(),
        }
    }

    fn require_deformation(&mut self) -> Result<ModuleDeformation> {
        if self.second.is_none() && self.pf.deformation.is_none() {
            self.ensure_first()?;
        }
        if let Some(d) = self.current() {
            return Ok(d);
        }
        match &self.first {
            FirstState::Failed(o) if o.verdict == Verdict::CapExhausted => {
                Err(Error::CapExhausted {
                    order: self.caps.order,
                    degree: self.caps.degree,
                })
            }
            _ => Err(Error::Precondition("no deformation available".into())),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::problem::parse_problem;

    const LAGRANGIAN: &str = "[variables]\nnames = q, p\n[poisson]\nP[q][p] = 1\n[subvariety]\nideal = p\n\
        [star]\nkind = moyal\n[commands]\ncheck-poisson\ncheck-coisotropic\nsolve-order1\nsolve-order2\nmc-residual\n";

    #[test]
    fn lagrangian_runs_end_to_end() {
        let pf = parse_problem(LAGRANGIAN).unwrap();
        let rep = run(&pf, RunOptions::default());
        assert_eq!(rep.exit_code(), 0, "{}", rep.text());
        assert_eq!(rep.text(), run(&pf, RunOptions::default()).text());
        let again = parse_problem(&rep.machine()).unwrap();
        assert_eq!(again.deformation.as_ref().map(|d| d.len()), Some(2));
    }

    #[test]
    fn non_coisotropic_witness_refails() {
        let text = "[variables]\nnames = x1, x2, x3\n[poisson]\nP[x1][x2] = 1\n[subvariety]\nideal = x1, x2\n\
                    [commands]\ncheck-coisotropic\nsolve-order2\n";
        let pf = parse_problem(text).unwrap();
        let rep = run(&pf, RunOptions::default());
        assert_eq!(rep.exit_code(), 1);
        assert!(rep.commands.iter().all(|c| c.verdict == Verdict::Fail));
        assert!(rep.commands[1].lines[0].1.contains("dependency"));
        let back = parse_problem(&rep.machine()).unwrap();
        assert_eq!(back.commands.len(), 2);
        let rerun = run(&back, RunOptions::default());
        assert!(rerun.commands.iter().all(|c| c.verdict == Verdict::Fail));
    }
}
