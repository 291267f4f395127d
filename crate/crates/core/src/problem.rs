//! Problem files: a sectioned plain-text format, see `docs/grammar.md`.

use std::collections::BTreeMap;

use num_traits::Zero;

use crate::diffop::{Ambient, Cochain, CochainKey, RingOp};
use crate::error::{Error, Result};
use crate::hochschild::Caps;
use crate::ideal::{BuchbergerLimits, Ideal};
use crate::linfty::LInfty;
use crate::matrix::PolyMatrix;
use crate::parse::{parse_poly_at, parse_rat};
use crate::poisson::Bivector;
use crate::poly::{fmt_rat, Poly, Rat};
use crate::quantize::HkrCaps;

pub const COMMANDS: &[&str] = &[
    "check-poisson",
    "check-coisotropic",
    "solve-order1",
    "solve-order2",
    "verify-dgla",
    "mc-residual",
    "cohomology",
    "gauge-check",
    "quant",
    "dequant",
    "boxtimes",
    "linfty-check",
    "assert-in-ideal",
    "assert-zero",
    "assert-zero-matrix",
    "assert-zero-cochain",
    "assert-jacobi",
];

const SECTIONS: &[&str] = &[
    "variables",
    "poisson",
    "subvariety",
    "module",
    "star",
    "connection",
    "deformation",
    "caps",
    "linfty",
    "commands",
    "verdicts",
];

#[derive(Clone, Debug, PartialEq)]
pub enum StarSpec {
    Moyal,
    Zero,
    Explicit(RingOp, RingOp),
}

#[derive(Clone, Debug, PartialEq)]
pub struct ConnectionSpec {
    pub lambda: Rat,
    pub mu: Rat,
    /// Generator operators in generator order.
    pub gammas: Vec<Cochain>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Command {
    pub name: String,
    pub args: BTreeMap<String, String>,
    pub line: usize,
}

impl Command {
    pub fn text(&self) -> String {
        let mut s = self.name.clone();
        for (k, v) in &self.args {
            if v.chars().any(|c| c.is_whitespace() || c == '"') {
                s.push_str(&format!(" {}=\"{}\"", k, v.replace('"', "'")));
            } else {
                s.push_str(&format!(" {}={}", k, v));
            }
        }
        s
    }
}

#[derive(Clone, Debug)]
pub struct ProblemFile {
    pub vars: Vec<String>,
    pub poisson: Bivector,
    pub ideal: Option<Ideal>,
    pub rank: usize,
    pub star: StarSpec,
    pub connection: Option<ConnectionSpec>,
    pub deformation: Option<Vec<Cochain>>,
    pub caps: Option<HkrCaps>,
    pub linfty: Option<LInfty>,
    pub commands: Vec<Command>,
}

impl ProblemFile {
    /// Module ambient; needs a coordinate-aligned ideal.
    pub fn ambient(&self) -> Option<Ambient> {
        let vars = self.ideal.as_ref()?.coordinate_vars()?.to_vec();
        Some(Ambient::new(self.vars.len(), &vars, self.rank))
    }

    /// Re-parseable text of everything except commands.
    pub fn fmt_sections(&self) -> String {
        let names = &self.vars;
        let mut out = format!("[variables]\nnames = {}\n", names.join(", "));
        out.push_str("\n[poisson]\n");
        for i in 0..names.len() {
            for j in i + 1..names.len() {
                let p = self.poisson.get(i, j);
                if !p.is_zero() {
                    out.push_str(&format!(
                        "P[{}][{}] = {}\n",
                        names[i],
                        names[j],
                        p.fmt_with(names)
                    ));
                }
            }
        }
        if let Some(id) = &self.ideal {
            let g: Vec<String> = id.generators().iter().map(|p| p.fmt_with(names)).collect();
            out.push_str(&format!("\n[subvariety]\nideal = {}\n", g.join(", ")));
        }
        out.push_str(&format!("\n[module]\nrank = {}\n", self.rank));
        out.push_str("\n[star]\n");
        match &self.star {
            StarSpec::Moyal => out.push_str("kind = moyal\n"),
            StarSpec::Zero => out.push_str("kind = zero\n"),
            StarSpec::Explicit(a1, a2) => out.push_str(&format!(
                "alpha1 = {}\nalpha2 = {}\n",
                a1.fmt_with(names),
                a2.fmt_with(names)
            )),
        }
        if let (Some(c), Some(id)) = (&self.connection, &self.ideal) {
            out.push_str(&format!(
                "\n[connection]\nlambda = {}\nmu = {}\n",
                fmt_rat(&c.lambda),
                fmt_rat(&c.mu)
            ));
            let gens = id.coordinate_vars().unwrap_or(&[]);
            for (g, op) in gens.iter().zip(&c.gammas) {
                out.push_str(&format!("gamma[{}] = {}\n", names[*g], op.fmt_with(names)));
            }
        }
        if let Some(d) = &self.deformation {
            out.push_str("\n[deformation]\n");
            for (i, a) in d.iter().enumerate() {
                out.push_str(&format!("alpha{} = {}\n", i + 1, a.fmt_with(names)));
            }
        }
        if let Some(c) = &self.caps {
            out.push_str(&format!(
                "\n[caps]\norder = {}\ndegree = {}\n",
                c.order, c.degree
            ));
        }
        if let Some(l) = &self.linfty {
            out.push_str("\n[linfty]\n");
            out.push_str(&l.fmt());
        }
        out
    }
}

struct Line<'a> {
    no: usize,
    text: &'a str,
    /// Column of `text[0]` in the raw line, 1-based.
    col: usize,
}

fn perr(line: usize, col: usize, msg: impl Into<String>) -> Error {
    Error::Parse {
        line,
        col,
        msg: msg.into(),
    }
}

/// Parses a problem file. Everything is validated before any algebra runs.
pub fn parse_problem(text: &str) -> Result<ProblemFile> {
    parse_problem_with(text, BuchbergerLimits::default())
}

pub fn parse_problem_with(text: &str, limits: BuchbergerLimits) -> Result<ProblemFile> {
    let mut sections: BTreeMap<String, (usize, Vec<Line>)> = BTreeMap::new();
    let mut current: Option<String> = None;
    for (i, raw) in text.lines().enumerate() {
        let no = i + 1;
        let body = raw.split('#').next().unwrap_or("");
        let trimmed = body.trim();
        if trimmed.is_empty() {
            continue;
        }
        let col = body.len() - body.trim_start().len() + 1;
        if trimmed.starts_with('[') {
            let name = trimmed
                .strip_prefix('[')
                .and_then(|s| s.strip_suffix(']'))
                .ok_or_else(|| perr(no, col, "malformed section header"))?
                .trim()
                .to_string();
            if !SECTIONS.contains(&name.as_str()) {
                return Err(perr(no, col + 1, format!("unknown section [{}]", name)));
            }
            if let Some((first, _)) = sections.get(&name) {
                return Err(perr(
                    no,
                    col,
                    format!("duplicate section [{}], first at line {}", name, first),
                ));
            }
            sections.insert(name.clone(), (no, Vec::new()));
            current = Some(name);
            continue;
        }
        let Some(cur) = &current else {
            return Err(perr(no, col, "content before the first section"));
        };
        sections.get_mut(cur).unwrap().1.push(Line {
            no,
            text: trimmed,
            col,
        });
    }

    let kv = |l: &Line| -> Result<(String, String, usize)> {
        let (k, v) = l
            .text
            .split_once('=')
            .ok_or_else(|| perr(l.no, l.col, "expected `key = value`"))?;
        let vcol = l.col + k.len() + 1 + (v.len() - v.trim_start().len());
        Ok((k.trim().to_string(), v.trim().to_string(), vcol))
    };

    // variables
    let (vline, vlines) = sections
        .get("variables")
        .ok_or_else(|| perr(1, 1, "missing [variables] section"))?;
    let mut vars: Vec<String> = Vec::new();
    for l in vlines {
        let (k, v, c) = kv(l)?;
        if k != "names" {
            return Err(perr(
                l.no,
                l.col,
                format!("unknown key `{}` in [variables]", k),
            ));
        }
        for name in v.split(',').map(str::trim) {
            let ok = name
                .chars()
                .next()
                .is_some_and(|ch| ch.is_ascii_alphabetic())
                && name
                    .chars()
                    .all(|ch| ch.is_ascii_alphanumeric() || ch == '_');
            if !ok || name == "eps" {
                return Err(perr(l.no, c, format!("bad variable name `{}`", name)));
            }
            if vars.iter().any(|x| x == name) {
                return Err(perr(l.no, c, format!("variable `{}` declared twice", name)));
            }
            vars.push(name.to_string());
        }
    }
    if vars.is_empty() {
        return Err(perr(*vline, 1, "no variables declared"));
    }
    let n = vars.len();
    let var_index = |s: &str, line: usize, col: usize| -> Result<usize> {
        if let Some(i) = vars.iter().position(|v| v == s) {
            return Ok(i);
        }
        match s.parse::<usize>() {
            Ok(k) if (1..=n).contains(&k) => Ok(k - 1),
            _ => Err(perr(line, col, format!("undeclared variable `{}`", s))),
        }
    };

    // poisson
    let mut poisson = Bivector::zero(n);
    let mut seen: BTreeMap<(usize, usize), (Poly, usize)> = BTreeMap::new();
    if let Some((_, lines)) = sections.get("poisson") {
        for l in lines {
            let (k, v, c) = kv(l)?;
            let idx = parse_pair_index(&k)
                .ok_or_else(|| perr(l.no, l.col, "expected `P[i][j] = poly`"))?;
            let i = var_index(&idx.0, l.no, l.col)?;
            let j = var_index(&idx.1, l.no, l.col)?;
            let p = parse_poly_at(&v, &vars, l.no, c)?;
            if i == j {
                if !p.is_zero() {
                    return Err(perr(l.no, l.col, "diagonal entries of P must vanish"));
                }
                continue;
            }
            let (key, val) = if i < j { ((i, j), p) } else { ((j, i), -&p) };
            if let Some((prev, at)) = seen.get(&key) {
                if *prev != val {
                    return Err(perr(
                        l.no,
                        l.col,
                        format!("entry contradicts antisymmetry with line {}", at),
                    ));
                }
            }
            seen.insert(key, (val.clone(), l.no));
            poisson
                .set(key.0, key.1, val)
                .map_err(|e| perr(l.no, l.col, e.to_string()))?;
        }
    }

    // subvariety
    let mut ideal = None;
    if let Some((_, lines)) = sections.get("subvariety") {
        for l in lines {
            let (k, v, c) = kv(l)?;
            if k != "ideal" {
                return Err(perr(
                    l.no,
                    l.col,
                    format!("unknown key `{}` in [subvariety]", k),
                ));
            }
            let mut gens = Vec::new();
            let mut off = 0;
            for part in split_top(&v, ',') {
                gens.push(parse_poly_at(part.trim(), &vars, l.no, c + off)?);
                off += part.len() + 1;
            }
            ideal = Some(Ideal::new(n, gens, limits).map_err(|e| match e {
                e @ Error::ResourceLimit { .. } => e,
                e => perr(l.no, c, e.to_string()),
            })?);
        }
    }

    // module
    let mut rank = 1;
    if let Some((_, lines)) = sections.get("module") {
        for l in lines {
            let (k, v, c) = kv(l)?;
            match k.as_str() {
                "rank" => {
                    rank = v
                        .parse()
                        .ok()
                        .filter(|&r| r > 0)
                        .ok_or_else(|| perr(l.no, c, "rank must be positive"))?
                }
                _ => {
                    return Err(perr(
                        l.no,
                        l.col,
                        format!("unknown key `{}` in [module]", k),
                    ))
                }
            }
        }
    }

    // star
    let mut star = StarSpec::Moyal;
    if let Some((sline, lines)) = sections.get("star") {
        let mut a1 = None;
        let mut a2 = None;
        let mut kind = None;
        for l in lines {
            let (k, v, c) = kv(l)?;
            match k.as_str() {
                "kind" => kind = Some((v, c, l.no)),
                "alpha1" => a1 = Some(parse_ring_op(&v, &vars, 2, l.no, c)?),
                "alpha2" => a2 = Some(parse_ring_op(&v, &vars, 2, l.no, c)?),
                _ => return Err(perr(l.no, l.col, format!("unknown key `{}` in [star]", k))),
            }
        }
        star = match (kind, a1, a2) {
            (Some((k, _, _)), None, None) if k == "moyal" => StarSpec::Moyal,
            (Some((k, _, _)), None, None) if k == "zero" => StarSpec::Zero,
            (Some((k, c, no)), None, None) => {
                return Err(perr(no, c, format!("unknown star kind `{}`", k)))
            }
            (None, Some(a), Some(b)) => StarSpec::Explicit(a, b),
            (None, Some(a), None) => StarSpec::Explicit(a, RingOp::zero(n, 2)),
            _ => {
                return Err(perr(
                    *sline,
                    1,
                    "[star] needs `kind` or `alpha1`/`alpha2`, not both",
                ))
            }
        };
    }

    let amb = || -> Option<Ambient> {
        let v = ideal.as_ref()?.coordinate_vars()?.to_vec();
        Some(Ambient::new(n, &v, rank))
    };

    // connection
    let mut connection = None;
    if let Some((cline, lines)) = sections.get("connection") {
        let amb = amb().ok_or_else(|| {
            perr(
                *cline,
                1,
                "[connection] needs a coordinate-aligned [subvariety]",
            )
        })?;
        let gens = ideal
            .as_ref()
            .and_then(|i| i.coordinate_vars())
            .unwrap_or(&[])
            .to_vec();
        let mut lambda = Rat::zero();
        let mut mu = Rat::from_integer(1.into());
        let mut gammas = vec![Cochain::zero(&amb, 0); gens.len()];
        for l in lines {
            let (k, v, c) = kv(l)?;
            match k.as_str() {
                "lambda" => {
                    lambda = parse_rat(&v).ok_or_else(|| perr(l.no, c, "expected a rational"))?
                }
                "mu" => mu = parse_rat(&v).ok_or_else(|| perr(l.no, c, "expected a rational"))?,
                _ => {
                    let name = k
                        .strip_prefix("gamma[")
                        .and_then(|s| s.strip_suffix(']'))
                        .ok_or_else(|| {
                            perr(l.no, l.col, format!("unknown key `{}` in [connection]", k))
                        })?;
                    let var = var_index(name, l.no, l.col)?;
                    let g = gens.iter().position(|&x| x == var).ok_or_else(|| {
                        perr(l.no, l.col, format!("`{}` is not an ideal generator", name))
                    })?;
                    gammas[g] = parse_cochain(&v, &vars, &amb, 0, l.no, c)?;
                }
            }
        }
        connection = Some(ConnectionSpec { lambda, mu, gammas });
    }

    // deformation
    let mut deformation = None;
    if let Some((dline, lines)) = sections.get("deformation") {
        let amb = amb().ok_or_else(|| {
            perr(
                *dline,
                1,
                "[deformation] needs a coordinate-aligned [subvariety]",
            )
        })?;
        let mut alphas: BTreeMap<usize, Cochain> = BTreeMap::new();
        for l in lines {
            let (k, v, c) = kv(l)?;
            let idx: usize = k
                .strip_prefix("alpha")
                .and_then(|s| s.parse().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| {
                    perr(l.no, l.col, format!("unknown key `{}` in [deformation]", k))
                })?;
            alphas.insert(idx, parse_cochain(&v, &vars, &amb, 1, l.no, c)?);
        }
        let order = alphas.keys().max().copied().unwrap_or(0);
        if alphas.len() != order {
            return Err(perr(*dline, 1, "alphas must be numbered 1..r without gaps"));
        }
        deformation = Some(alphas.into_values().collect());
    }

    // caps
    let mut caps = None;
    if let Some((_, lines)) = sections.get("caps") {
        let mut c = HkrCaps::default();
        for l in lines {
            let (k, v, vc) = kv(l)?;
            let x: u32 = v
                .parse()
                .map_err(|_| perr(l.no, vc, "expected an integer"))?;
            match k.as_str() {
                "order" => c.order = x,
                "degree" => c.degree = x,
                _ => return Err(perr(l.no, l.col, format!("unknown key `{}` in [caps]", k))),
            }
        }
        caps = Some(c);
    }

    // linfty
    let mut linfty = None;
    if let Some((lline, lines)) = sections.get("linfty") {
        // buffer line k is file line lline + k - 1
        let mut buf = String::new();
        let mut last = *lline;
        for l in lines {
            while last < l.no {
                buf.push('\n');
                last += 1;
            }
            buf.push_str(&" ".repeat(l.col - 1));
            buf.push_str(l.text);
        }
        linfty = Some(LInfty::parse(&buf).map_err(|e| match e {
            Error::Parse { line, col, msg } => perr(line + lline - 1, col, msg),
            other => other,
        })?);
    }

    // commands
    let mut commands = Vec::new();
    if let Some((_, lines)) = sections.get("commands") {
        for l in lines {
            commands.push(parse_command(l.text, l.no, l.col)?);
        }
    }
    for c in &commands {
        check_command_args(c, &vars, amb().as_ref(), linfty.as_ref())?;
    }

    // verdicts are informational
    if let Some((_, lines)) = sections.get("verdicts") {
        for l in lines {
            kv(l)?;
        }
    }

    Ok(ProblemFile {
        vars,
        poisson,
        ideal,
        rank,
        star,
        connection,
        deformation,
        caps,
        linfty,
        commands,
    })
}

fn parse_pair_index(k: &str) -> Option<(String, String)> {
    let rest = k.strip_prefix('P')?.trim();
    let rest = rest.strip_prefix('[')?;
    let (a, rest) = rest.split_once(']')?;
    let rest = rest.trim().strip_prefix('[')?;
    let (b, rest) = rest.split_once(']')?;
    if !rest.trim().is_empty() {
        return None;
    }
    Some((a.trim().to_string(), b.trim().to_string()))
}

/// Splits on `sep` outside brackets and parentheses.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' => depth += 1,
            ')' | ']' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn parse_exp(s: &str, n: usize, line: usize, col: usize) -> Result<Vec<u32>> {
    let inner = s
        .trim()
        .strip_prefix('(')
        .and_then(|x| x.strip_suffix(')'))
        .ok_or_else(|| perr(line, col, "exponent vectors look like (1,0,…)"))?;
    let v: Vec<u32> = inner
        .split(',')
        .map(|x| x.trim().parse::<u32>())
        .collect::<std::result::Result<_, _>>()
        .map_err(|_| perr(line, col, "bad exponent"))?;
    if v.len() != n {
        return Err(perr(
            line,
            col,
            format!("exponent vector needs {} entries", n),
        ));
    }
    Ok(v)
}

/// One `coefficient | d(a1)=(…) | … | d(e)=(…)` term.
struct Term<'a> {
    coef: &'a str,
    coef_col: usize,
    slots: Vec<(Option<usize>, Vec<u32>)>,
}

fn parse_terms<'a>(text: &'a str, n: usize, line: usize, col: usize) -> Result<Vec<Term<'a>>> {
    let mut out = Vec::new();
    if text.trim() == "0" {
        return Ok(out);
    }
    let mut off = 0;
    for term in split_top(text, ';') {
        let tcol = col + off;
        off += term.len() + 1;
        let mut parts = term.split('|');
        let coef = parts.next().unwrap_or("");
        let lead = coef.len() - coef.trim_start().len();
        let mut slots = Vec::new();
        let mut pcol = tcol + coef.len() + 1;
        for p in parts {
            let (lhs, rhs) = p
                .split_once('=')
                .ok_or_else(|| perr(line, pcol, "expected d(slot)=(…)"))?;
            let slot = lhs
                .trim()
                .strip_prefix("d(")
                .and_then(|s| s.strip_suffix(')'))
                .ok_or_else(|| perr(line, pcol, "expected d(a1)… or d(e)"))?;
            let idx = if slot == "e" {
                None
            } else {
                let k: usize = slot
                    .strip_prefix('a')
                    .and_then(|s| s.parse().ok())
                    .filter(|&k| k >= 1)
                    .ok_or_else(|| perr(line, pcol, format!("bad slot `{}`", slot)))?;
                Some(k - 1)
            };
            slots.push((idx, parse_exp(rhs, n, line, pcol)?));
            pcol += p.len() + 1;
        }
        out.push(Term {
            coef: coef.trim(),
            coef_col: tcol + lead,
            slots,
        });
    }
    Ok(out)
}

pub fn parse_ring_op(
    text: &str,
    vars: &[String],
    arity: usize,
    line: usize,
    col: usize,
) -> Result<RingOp> {
    let n = vars.len();
    let mut op = RingOp::zero(n, arity);
    for t in parse_terms(text, n, line, col)? {
        let f = parse_poly_at(t.coef, vars, line, t.coef_col)?;
        let mut ds = vec![vec![0; n]; arity];
        for (slot, e) in t.slots {
            match slot {
                Some(k) if k < arity => ds[k] = e,
                _ => {
                    return Err(perr(
                        line,
                        t.coef_col,
                        format!("slot out of range for arity {}", arity),
                    ))
                }
            }
        }
        op.add_term(ds, f);
    }
    Ok(op)
}

pub fn parse_matrix(
    text: &str,
    vars: &[String],
    rank: usize,
    line: usize,
    col: usize,
) -> Result<PolyMatrix> {
    let t = text.trim();
    let n = vars.len();
    if !t.starts_with('[') {
        return Ok(PolyMatrix::scalar(
            rank,
            &parse_poly_at(t, vars, line, col)?,
        ));
    }
    let inner = t
        .strip_prefix('[')
        .and_then(|s| s.strip_suffix(']'))
        .ok_or_else(|| perr(line, col, "unbalanced ["))?;
    let rows = split_top(inner, ',');
    if rows.len() != rank {
        return Err(perr(line, col, format!("matrix needs {} rows", rank)));
    }
    let mut m = PolyMatrix::zero(rank, n);
    for (i, r) in rows.iter().enumerate() {
        let r = r.trim();
        let entries = r
            .strip_prefix('[')
            .and_then(|s| s.strip_suffix(']'))
            .ok_or_else(|| perr(line, col, "matrix rows look like [a, b]"))?;
        let es = split_top(entries, ',');
        if es.len() != rank {
            return Err(perr(
                line,
                col,
                format!("matrix rows need {} entries", rank),
            ));
        }
        for (j, e) in es.iter().enumerate() {
            m.set(i, j, parse_poly_at(e.trim(), vars, line, col)?);
        }
    }
    Ok(m)
}

pub fn parse_cochain(
    text: &str,
    vars: &[String],
    amb: &Ambient,
    arity: usize,
    line: usize,
    col: usize,
) -> Result<Cochain> {
    let n = vars.len();
    let mut c = Cochain::zero(amb, arity);
    for t in parse_terms(text, n, line, col)? {
        let m = parse_matrix(t.coef, vars, amb.rank, line, t.coef_col)?;
        let mut ring = vec![vec![0; n]; arity];
        let mut module = vec![0; n];
        for (slot, e) in t.slots {
            match slot {
                None => module = e,
                Some(k) if k < arity => ring[k] = e,
                _ => {
                    return Err(perr(
                        line,
                        t.coef_col,
                        format!("slot out of range for arity {}", arity),
                    ))
                }
            }
        }
        if module
            .iter()
            .enumerate()
            .any(|(i, &k)| k > 0 && amb.is_ideal_var(i))
        {
            return Err(perr(line, t.coef_col, "module derivatives must be along Y"));
        }
        c.add_term(CochainKey { ring, module }, m);
    }
    Ok(c)
}

fn parse_command(text: &str, line: usize, col: usize) -> Result<Command> {
    let mut toks: Vec<(String, usize)> = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        if chars[i].is_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        let mut tok = String::new();
        let mut quoted = false;
        while i < chars.len() && (quoted || !chars[i].is_whitespace()) {
            if chars[i] == '"' {
                quoted = !quoted;
            } else {
                tok.push(chars[i]);
            }
            i += 1;
        }
        if quoted {
            return Err(perr(line, col + start, "unterminated quote"));
        }
        toks.push((tok, col + start));
    }
    let (name, ncol) = toks
        .first()
        .cloned()
        .ok_or_else(|| perr(line, col, "empty command"))?;
    if !COMMANDS.contains(&name.as_str()) {
        return Err(perr(line, ncol, format!("unknown command `{}`", name)));
    }
    let mut args = BTreeMap::new();
    for (t, c) in &toks[1..] {
        let (k, v) = t
            .split_once('=')
            .ok_or_else(|| perr(line, *c, "arguments look like key=value"))?;
        if args.insert(k.to_string(), v.to_string()).is_some() {
            return Err(perr(line, *c, format!("argument `{}` given twice", k)));
        }
    }
    Ok(Command { name, args, line })
}

/// `a..b` or a single integer.
pub fn parse_range(s: &str) -> Option<Vec<usize>> {
    if let Some((a, b)) = s.split_once("..") {
        let (a, b): (usize, usize) = (a.trim().parse().ok()?, b.trim().parse().ok()?);
        if a > b {
            return None;
        }
        Some((a..=b).collect())
    } else {
        Some(vec![s.trim().parse().ok()?])
    }
}

/// `a,o,d` or `(a,o,d)`.
pub fn parse_caps3(s: &str) -> Option<Caps> {
    let s = s.trim().trim_start_matches('(').trim_end_matches(')');
    let v: Vec<&str> = s.split(',').collect();
    if v.len() != 3 {
        return None;
    }
    Some(Caps::new(
        v[0].trim().parse().ok()?,
        v[1].trim().parse().ok()?,
        v[2].trim().parse().ok()?,
    ))
}

fn check_command_args(
    c: &Command,
    vars: &[String],
    amb: Option<&Ambient>,
    linfty: Option<&LInfty>,
) -> Result<()> {
    let allowed: &[&str] = match c.name.as_str() {
        "cohomology" => &["degree", "caps", "twisted"],
        "verify-dgla" => &["samples"],
        "gauge-check" => &["samples"],
        "assert-in-ideal" | "assert-zero" => &["poly"],
        "assert-zero-matrix" => &["matrix"],
        "assert-zero-cochain" => &["arity", "cochain"],
        "assert-jacobi" => &["word"],
        "linfty-check" => &["arity"],
        _ => &[],
    };
    let bad = |k: &str, msg: &str| perr(c.line, 1, format!("{}: {} `{}`", c.name, msg, k));
    for k in c.args.keys() {
        if !allowed.contains(&k.as_str()) {
            return Err(bad(k, "unknown argument"));
        }
    }
    let need = |k: &str| c.args.get(k).ok_or_else(|| bad(k, "missing argument"));
    match c.name.as_str() {
        "cohomology" => {
            parse_range(need("degree")?).ok_or_else(|| bad("degree", "bad range"))?;
            if let Some(v) = c.args.get("caps") {
                parse_caps3(v).ok_or_else(|| bad("caps", "expected arity,order,degree"))?;
            }
        }
        "verify-dgla" | "gauge-check" => {
            if let Some(v) = c.args.get("samples") {
                v.parse::<usize>()
                    .map_err(|_| bad("samples", "expected an integer"))?;
            }
        }
        "linfty-check" => {
            if let Some(v) = c.args.get("arity") {
                v.parse::<usize>()
                    .map_err(|_| bad("arity", "expected an integer"))?;
            }
        }
        "assert-in-ideal" | "assert-zero" => {
            parse_poly_at(need("poly")?, vars, c.line, 1)?;
        }
        "assert-zero-matrix" => {
            let rank = amb.map(|a| a.rank).unwrap_or(1);
            parse_matrix(need("matrix")?, vars, rank, c.line, 1)?;
        }
        "assert-zero-cochain" => {
            let amb =
                amb.ok_or_else(|| bad("cochain", "needs a coordinate-aligned subvariety for"))?;
            let arity: usize = need("arity")?
                .parse()
                .map_err(|_| bad("arity", "expected an integer"))?;
            parse_cochain(need("cochain")?, vars, amb, arity, c.line, 1)?;
        }
        "assert-jacobi" => {
            let l = linfty.ok_or_else(|| bad("word", "needs an [linfty] section for"))?;
            for w in need("word")?.split(',').filter(|s| !s.is_empty()) {
                l.space()
                    .index(w.trim())
                    .ok_or_else(|| bad(w, "undeclared basis element"))?;
            }
        }
        _ => {}
    }
    Ok(())
}
