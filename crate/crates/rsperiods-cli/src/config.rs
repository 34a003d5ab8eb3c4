//! Flat key-value configuration with `[section]` headers.
//!
//! Tokens are whitespace-separated; a `[name]` token opens a new section and
//! `key=value` tokens assign into the current section, so both the compact
//! one-line layout (`[local] p=3 kind=inert chi.o=1 ...`) and the stacked
//! layout are accepted. `#` starts a comment. Roots of unity are written
//! `zeta:M:k` (the literal `ζ:M:k` spelling is accepted too); plain integers
//! and `num/den` rationals are also valid scalar values.

use rsperiods::chars::{inert_unit_generators, FChar, MultChar};
use rsperiods::exact::{rat, CycQ};
use rsperiods::localring::{make_algebra, Kind, QuadAlgebra};

/// A parsed `key=value` entry with its line number for error reporting.
#[derive(Clone, Debug)]
pub struct Entry {
    pub key: String,
    pub value: String,
    pub line: usize,
}

/// A raw configuration section.
#[derive(Clone, Debug)]
pub struct Section {
    pub name: String,
    pub line: usize,
    pub entries: Vec<Entry>,
}

/// Tokenized configuration text.
pub fn parse_sections(text: &str) -> Result<Vec<Section>, Vec<String>> {
    let mut sections: Vec<Section> = Vec::new();
    let mut errors = Vec::new();
    for (idx, raw_line) in text.lines().enumerate() {
        let line = idx + 1;
        let content = raw_line.split('#').next().unwrap_or("");
        for tok in content.split_whitespace() {
            if let Some(name) = tok.strip_prefix('[').and_then(|t| t.strip_suffix(']')) {
                sections.push(Section {
                    name: name.to_string(),
                    line,
                    entries: Vec::new(),
                });
            } else if let Some((k, v)) = tok.split_once('=') {
                match sections.last_mut() {
                    Some(s) => s.entries.push(Entry {
                        key: k.to_string(),
                        value: v.to_string(),
                        line,
                    }),
                    None => errors.push(format!(
                        "line {line}: entry `{tok}` appears before any [section] header"
                    )),
                }
            } else {
                errors.push(format!("line {line}: unrecognized token `{tok}`"));
            }
        }
    }
    if errors.is_empty() {
        Ok(sections)
    } else {
        Err(errors)
    }
}

/// Parse a scalar value: integer, `num/den`, or `zeta:M:k`.
pub fn parse_scalar(v: &str) -> Result<CycQ, String> {
    if let Some(rest) = v.strip_prefix("zeta:").or_else(|| v.strip_prefix("ζ:")) {
        let (m, k) = rest
            .split_once(':')
            .ok_or_else(|| format!("malformed root of unity `{v}` (want zeta:M:k)"))?;
        let m: u64 = m.parse().map_err(|_| format!("bad order in `{v}`"))?;
        let k: i64 = k.parse().map_err(|_| format!("bad exponent in `{v}`"))?;
        if m == 0 {
            return Err(format!("zero order in `{v}`"));
        }
        return Ok(CycQ::root_of_unity(m, k));
    }
    if let Some((n, d)) = v.split_once('/') {
        let n: i64 = n.parse().map_err(|_| format!("bad numerator in `{v}`"))?;
        let d: i64 = d.parse().map_err(|_| format!("bad denominator in `{v}`"))?;
        if d == 0 {
            return Err(format!("zero denominator in `{v}`"));
        }
        return Ok(CycQ::from_rat(1, rat(n, d)));
    }
    let n: i64 = v
        .parse()
        .map_err(|_| format!("expected integer, num/den, or zeta:M:k, got `{v}`"))?;
    Ok(CycQ::from_int(1, n))
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..n).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

/// A fully built local case.
#[derive(Clone, Debug)]
pub struct LocalCase {
    pub label: String,
    pub alg: QuadAlgebra,
    pub chi: MultChar,
    /// Whether the newform-side checks run for this case. Always true for
    /// user-configured cases; sweep-generated cases inherit the sweep tiering.
    pub newform: bool,
}

/// The imaginary-quadratic global data.
#[derive(Clone, Copy, Debug)]
pub struct GlobalSpec {
    pub level: u64,
    pub disc: i64,
    pub w_k: u32,
    pub cond: u64,
}

/// Sweep parameters.
#[derive(Clone, Debug)]
pub struct SweepSpec {
    pub primes: Vec<u64>,
    pub max_order: u64,
}

/// Fully validated run configuration.
#[derive(Clone, Debug, Default)]
pub struct Config {
    pub locals: Vec<LocalCase>,
    pub global: Option<GlobalSpec>,
    pub sweep: Option<SweepSpec>,
}

struct SectionReader<'a> {
    section: &'a Section,
    used: Vec<bool>,
}

impl<'a> SectionReader<'a> {
    fn new(section: &'a Section) -> Self {
        let used = vec![false; section.entries.len()];
        SectionReader { section, used }
    }

    fn get(&mut self, key: &str) -> Option<&'a str> {
        for (i, e) in self.section.entries.iter().enumerate() {
            if e.key == key {
                self.used[i] = true;
                return Some(&e.value);
            }
        }
        None
    }

    fn require(&mut self, key: &str) -> Result<&'a str, String> {
        self.get(key).ok_or_else(|| {
            format!(
                "line {}: [{}] section is missing required key `{key}`",
                self.section.line, self.section.name
            )
        })
    }

    fn finish(self) -> Result<(), Vec<String>> {
        let unknown: Vec<String> = self
            .section
            .entries
            .iter()
            .zip(&self.used)
            .filter(|(_, &u)| !u)
            .map(|(e, _)| format!("line {}: unknown key `{}`", e.line, e.key))
            .collect();
        if unknown.is_empty() {
            Ok(())
        } else {
            Err(unknown)
        }
    }
}

fn parse_u64(v: &str, what: &str) -> Result<u64, String> {
    v.parse().map_err(|_| format!("bad {what} `{v}`"))
}

/// Build one `FChar` from `o` / `gen` / `pi` keys with a prefix.
fn build_fchar(r: &mut SectionReader, prefix: &str, p: u64) -> Result<FChar, String> {
    let o = match r.get(&format!("{prefix}.o")) {
        Some(v) => parse_u64(v, "conductor exponent")? as u32,
        None => 0,
    };
    let pi = match r.get(&format!("{prefix}.pi")) {
        Some(v) => parse_scalar(v)?,
        None => CycQ::one(1),
    };
    if o == 0 {
        if r.get(&format!("{prefix}.gen")).is_some() {
            return Err(format!("`{prefix}.gen` given but `{prefix}.o` is 0"));
        }
        return Ok(FChar::unramified(p, pi));
    }
    let gen = r
        .get(&format!("{prefix}.gen"))
        .ok_or_else(|| format!("ramified `{prefix}` needs `{prefix}.gen`"))?;
    let image = parse_scalar(gen)?;
    FChar::from_generator(p, o, image, pi).map_err(|e| e.to_string())
}

fn build_local(section: &Section, precision: i64) -> Result<LocalCase, Vec<String>> {
    let mut r = SectionReader::new(section);
    let inner = (|r: &mut SectionReader| -> Result<LocalCase, String> {
        let p = parse_u64(r.require("p")?, "prime")?;
        if !is_prime(p) {
            return Err(format!("p = {p} is not prime"));
        }
        let kind = match r.require("kind")? {
            "split" => Kind::Split,
            "inert" => Kind::Inert,
            "ramified" => Kind::Ramified,
            other => return Err(format!("unknown kind `{other}`")),
        };
        if p == 2 && kind == Kind::Ramified {
            return Err(
                "p = 2 with E/F ramified violates the standing assumption (at p = 2 both E/F \
                 and chi must be unramified)"
                    .into(),
            );
        }
        let alg = make_algebra(p, kind, precision).map_err(|e| e.to_string())?;
        let chi = match kind {
            Kind::Split => {
                let chi1 = build_fchar(r, "chi1", p)?;
                let chi2 = build_fchar(r, "chi2", p)?;
                if p == 2 && (chi1.is_ramified() || chi2.is_ramified()) {
                    return Err(
                        "p = 2 with chi ramified violates the standing assumption".into(),
                    );
                }
                MultChar::Split { chi1, chi2 }
            }
            Kind::Ramified => {
                let pi = match r.get("chi.pi") {
                    Some(v) => parse_scalar(v)?,
                    None => CycQ::one(1),
                };
                if r.get("chi.o").map(|v| v != "0").unwrap_or(false) {
                    return Err(
                        "E/F ramified requires an unramified chi (chi.o must be 0)".into(),
                    );
                }
                MultChar::field_unramified(pi)
            }
            Kind::Inert => {
                let o = match r.get("chi.o") {
                    Some(v) => parse_u64(v, "conductor exponent")? as u32,
                    None => 0,
                };
                let pi = match r.get("chi.pi") {
                    Some(v) => parse_scalar(v)?,
                    None => CycQ::one(1),
                };
                if o == 0 {
                    if r.get("chi.gen").is_some() {
                        return Err("`chi.gen` given but `chi.o` is 0".into());
                    }
                    MultChar::field_unramified(pi)
                } else {
                    if p == 2 {
                        return Err(
                            "p = 2 with chi ramified violates the standing assumption".into(),
                        );
                    }
                    let images = r
                        .require("chi.gen")?
                        .split(',')
                        .map(parse_scalar)
                        .collect::<Result<Vec<_>, _>>()?;
                    let gens = inert_unit_generators(&alg, o).map_err(|e| e.to_string())?;
                    if images.len() > gens.len() {
                        return Err(format!(
                            "chi.gen lists {} images but the unit group at level {o} has {} \
                             generators",
                            images.len(),
                            gens.len()
                        ));
                    }
                    let pairs: Vec<_> = gens
                        .iter()
                        .zip(images)
                        .map(|((g, _), im)| (g.clone(), im))
                        .collect();
                    MultChar::field_from_generators(&alg, o, &pairs, pi)
                        .map_err(|e| e.to_string())?
                }
            }
        };
        let label = match r.get("label") {
            Some(l) => l.to_string(),
            None => format!("p{p}-{kind:?}").to_lowercase(),
        };
        Ok(LocalCase { label, alg, chi, newform: true })
    })(&mut r);
    let mut errors = Vec::new();
    let case = match inner {
        Ok(c) => Some(c),
        Err(e) => {
            errors.push(format!("line {}: {e}", section.line));
            None
        }
    };
    if let Err(mut unknown) = r.finish() {
        errors.append(&mut unknown);
    }
    match (case, errors.is_empty()) {
        (Some(c), true) => Ok(c),
        (_, _) => Err(errors),
    }
}

fn build_global(section: &Section) -> Result<GlobalSpec, Vec<String>> {
    let mut r = SectionReader::new(section);
    let inner = (|r: &mut SectionReader| -> Result<GlobalSpec, String> {
        let level = parse_u64(r.require("n")?, "level")?;
        let disc: i64 = r
            .require("d")?
            .parse()
            .map_err(|_| "bad discriminant".to_string())?;
        let w_k = parse_u64(r.require("w")?, "root-of-unity count")? as u32;
        let cond = match r.get("c") {
            Some(v) => parse_u64(v, "ring class conductor")?,
            None => 1,
        };
        Ok(GlobalSpec {
            level,
            disc,
            w_k,
            cond,
        })
    })(&mut r);
    let mut errors = Vec::new();
    let spec = match inner {
        Ok(s) => Some(s),
        Err(e) => {
            errors.push(format!("line {}: {e}", section.line));
            None
        }
    };
    if let Err(mut unknown) = r.finish() {
        errors.append(&mut unknown);
    }
    match (spec, errors.is_empty()) {
        (Some(s), true) => Ok(s),
        (_, _) => Err(errors),
    }
}

fn build_sweep(section: &Section) -> Result<SweepSpec, Vec<String>> {
    let mut r = SectionReader::new(section);
    let inner = (|r: &mut SectionReader| -> Result<SweepSpec, String> {
        let primes = match r.get("primes") {
            Some("") => Vec::new(),
            Some(v) => v
                .split(',')
                .map(|t| {
                    let p = parse_u64(t, "prime")?;
                    if !is_prime(p) {
                        return Err(format!("sweep prime {p} is not prime"));
                    }
                    Ok(p)
                })
                .collect::<Result<Vec<_>, _>>()?,
            None => vec![3, 5, 7],
        };
        let max_order = match r.get("max-order") {
            Some(v) => parse_u64(v, "order cap")?,
            None => 12,
        };
        Ok(SweepSpec { primes, max_order })
    })(&mut r);
    let mut errors = Vec::new();
    let spec = match inner {
        Ok(s) => Some(s),
        Err(e) => {
            errors.push(format!("line {}: {e}", section.line));
            None
        }
    };
    if let Err(mut unknown) = r.finish() {
        errors.append(&mut unknown);
    }
    match (spec, errors.is_empty()) {
        (Some(s), true) => Ok(s),
        (_, _) => Err(errors),
    }
}

/// Parse and validate the whole configuration.
pub fn parse_config(text: &str, precision: i64) -> Result<Config, Vec<String>> {
    let sections = parse_sections(text)?;
    let mut cfg = Config::default();
    let mut errors = Vec::new();
    for s in &sections {
        match s.name.as_str() {
            "local" => match build_local(s, precision) {
                Ok(c) => cfg.locals.push(c),
                Err(mut e) => errors.append(&mut e),
            },
            "global" => match build_global(s) {
                Ok(g) => {
                    if cfg.global.is_some() {
                        errors.push(format!("line {}: duplicate [global] section", s.line));
                    }
                    cfg.global = Some(g);
                }
                Err(mut e) => errors.append(&mut e),
            },
            "sweep" => match build_sweep(s) {
                Ok(g) => {
                    if cfg.sweep.is_some() {
                        errors.push(format!("line {}: duplicate [sweep] section", s.line));
                    }
                    cfg.sweep = Some(g);
                }
                Err(mut e) => errors.append(&mut e),
            },
            other => errors.push(format!("line {}: unknown section `[{other}]`", s.line)),
        }
    }
    if errors.is_empty() {
        Ok(cfg)
    } else {
        Err(errors)
    }
}
