//! Multiplicative and additive characters of `F = Q_p` and of a quadratic etale
//! algebra `E/F`, together with antinorm characters on norm-one groups,
//! conductors, and epsilon factors (Gauss sums).
//!
//! Characters take values in roots of unity inside the exact cyclotomic field;
//! all evaluations are table lookups on residue classes, so no analytic limits or
//! floating point are involved anywhere.

use std::collections::HashMap;

use crate::exact::{rat_int, CycQ, Rat};
use crate::localring::{
    norm_one_reps, rat_mod_pk, unit_reps, val_p, Kind, PadicElem, QuadAlgebra,
};
use crate::{Error, Result};

/// Order of a root of unity in the cyclotomic field (`None` if the element is
/// not a root of unity).
pub fn cyc_order(x: &CycQ) -> Option<u64> {
    if x.is_zero() {
        return None;
    }
    let bound = 2 * x.order().max(1);
    let mut acc = x.clone();
    for k in 1..=bound {
        if acc.is_one() {
            return Some(k);
        }
        acc = &acc * x;
    }
    None
}

/// The standard additive character of `F = Q_p` of order zero, optionally
/// rescaled: `psi(x) = e(scale * x)` with `e` trivial on `Z_p`.
#[derive(Clone, Debug)]
pub struct AddChar {
    pub p: u64,
    pub scale: Rat,
}

impl AddChar {
    pub fn standard(p: u64) -> Self {
        AddChar { p, scale: rat_int(1) }
    }

    /// `psi^{-1}(x) = psi(-x)`.
    pub fn inverse(&self) -> Self {
        AddChar { p: self.p, scale: -self.scale.clone() }
    }

    /// `psi(b x)` as a rescaled character.
    pub fn twist(&self, b: &Rat) -> Self {
        AddChar { p: self.p, scale: &self.scale * b }
    }

    /// Evaluate at a rational: a root of unity of p-power order.
    pub fn eval(&self, x: &Rat) -> CycQ {
        let t = &self.scale * x;
        match val_p(&t, self.p) {
            None => CycQ::one(1),
            Some(v) if v >= 0 => CycQ::one(1),
            Some(v) => {
                let n = (-v) as u32;
                let pn = self.p.pow(n);
                let u = &t * &rat_int(self.p as i64).pow(n as i32);
                let r = rat_mod_pk(&u, self.p, n).expect("unit after clearing the pole");
                CycQ::root_of_unity(pn, r as i64)
            }
        }
    }

    /// `psi_E = psi . Tr_{E/F}` on the quadratic algebra.
    pub fn eval_e(&self, alg: &QuadAlgebra, x: &PadicElem) -> CycQ {
        self.eval(&alg.trace(x))
    }
}

/// A multiplicative character of `F^times` given by a value table on unit
/// classes modulo `p^level` and a value at the uniformizer `p`.
#[derive(Clone, Debug)]
pub struct FChar {
    pub p: u64,
    pub level: u32,
    table: HashMap<u64, CycQ>,
    pub pi_value: CycQ,
}

/// Smallest primitive root modulo `p^level` (odd `p`, `level >= 1`).
pub fn primitive_root(p: u64, level: u32) -> Result<u64> {
    if p == 2 {
        return Err(Error::Unsupported(
            "unit groups of Q_2 are not cyclic at this level".into(),
        ));
    }
    let m = p.pow(level);
    let order = (p - 1) * p.pow(level - 1);
    'g: for g in 2..m {
        if g % p == 0 {
            continue;
        }
        // g is a generator iff g^{order/l} != 1 for every prime l | order.
        for (l, _) in crate::exact::factorize(order) {
            if pow_mod_u(g, order / l, m) == 1 {
                continue 'g;
            }
        }
        return Ok(g);
    }
    Err(Error::Unsupported("no primitive root found".into()))
}

fn pow_mod_u(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut acc: u64 = 1;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            acc = mulmod(acc, b, m);
        }
        b = mulmod(b, b, m);
        e >>= 1;
    }
    acc
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

impl FChar {
    /// The unramified character with the given value at `p`.
    pub fn unramified(p: u64, pi_value: CycQ) -> Self {
        FChar { p, level: 0, table: HashMap::new(), pi_value }
    }

    /// The trivial character.
    pub fn trivial(p: u64) -> Self {
        FChar::unramified(p, CycQ::one(1))
    }

    /// The character sending the smallest primitive root modulo `p^level` to
    /// `gen_image` (odd `p`); errors unless `gen_image` has order dividing
    /// `phi(p^level)`.
    pub fn from_generator(p: u64, level: u32, gen_image: CycQ, pi_value: CycQ) -> Result<Self> {
        if level == 0 {
            return Ok(FChar::unramified(p, pi_value));
        }
        let g = primitive_root(p, level)?;
        let m = p.pow(level);
        let order = (p - 1) * p.pow(level - 1);
        let mut table = HashMap::new();
        let mut residue: u64 = 1;
        let mut value = CycQ::one(1);
        for _ in 0..order {
            table.insert(residue, value.clone());
            residue = mulmod(residue, g, m);
            value = &value * &gen_image;
        }
        if !value.is_one() {
            return Err(Error::Config(format!(
                "generator image must have order dividing {}",
                order
            )));
        }
        Ok(FChar { p, level, table, pi_value })
    }

    /// Evaluate at a nonzero rational.
    pub fn eval(&self, x: &Rat) -> Result<CycQ> {
        let v = val_p(x, self.p).ok_or_else(|| {
            Error::Unsupported("multiplicative character at zero".into())
        })?;
        let u = x * &crate::localring::rat_pow_p(self.p, -v);
        let unit_part = if self.level == 0 {
            CycQ::one(1)
        } else {
            let key = rat_mod_pk(&u, self.p, self.level)?;
            self.table.get(&key).cloned().ok_or_else(|| {
                Error::Unsupported("residue outside the unit table".into())
            })?
        };
        Ok(&unit_part * &pow_cyc(&self.pi_value, v))
    }

    /// Conductor exponent: minimal `m` with the character trivial on `1 + p^m Z_p`.
    pub fn conductor(&self) -> u32 {
        'm: for m in 0..=self.level {
            let pm = self.p.pow(m);
            for (&r, v) in &self.table {
                if r % pm == 1 % pm && !v.is_one() {
                    continue 'm;
                }
            }
            return m;
        }
        self.level
    }

    pub fn is_ramified(&self) -> bool {
        self.conductor() > 0
    }

    pub fn inverse(&self) -> Self {
        FChar {
            p: self.p,
            level: self.level,
            table: self
                .table
                .iter()
                .map(|(k, v)| (*k, v.inv().expect("root of unity")))
                .collect(),
            pi_value: self.pi_value.inv().expect("root of unity"),
        }
    }

    /// Pointwise product of two characters of `F^times`.
    pub fn mul(&self, rhs: &FChar) -> Result<FChar> {
        assert_eq!(self.p, rhs.p);
        let level = self.level.max(rhs.level);
        let mut table = HashMap::new();
        let m = self.p.pow(level);
        for r in 1..m {
            if r % self.p == 0 {
                continue;
            }
            let x = rat_int(r as i64);
            table.insert(r, &self.eval(&x)? * &rhs.eval(&x)?);
        }
        let mut out = FChar {
            p: self.p,
            level,
            table,
            pi_value: &self.pi_value * &rhs.pi_value,
        };
        out.trim();
        Ok(out)
    }

    /// Drop the table to the conductor level (canonical form).
    fn trim(&mut self) {
        let c = self.conductor();
        if c == self.level {
            return;
        }
        let m = self.p.pow(c);
        let table = self
            .table
            .iter()
            .filter(|(&r, _)| r < m.max(1))
            .map(|(k, v)| (*k, v.clone()))
            .collect();
        self.level = c;
        if c == 0 {
            self.table = HashMap::new();
        } else {
            self.table = table;
        }
    }

    /// The order of the character (lcm of value orders), if finite.
    pub fn order(&self) -> Option<u64> {
        let mut l = cyc_order(&self.pi_value)?;
        for v in self.table.values() {
            l = num_integer::lcm(l, cyc_order(v)?);
        }
        Some(l)
    }

    /// All characters of `(Z/p^level)^times` (odd `p`), with trivial value at `p`.
    pub fn all_unit_characters(p: u64, level: u32) -> Result<Vec<FChar>> {
        if level == 0 {
            return Ok(vec![FChar::trivial(p)]);
        }
        let order = (p - 1) * p.pow(level - 1);
        (0..order)
            .map(|j| {
                FChar::from_generator(
                    p,
                    level,
                    CycQ::root_of_unity(order, j as i64),
                    CycQ::one(1),
                )
            })
            .collect()
    }
}

fn pow_cyc(x: &CycQ, e: i64) -> CycQ {
    let b = if e >= 0 { x.clone() } else { x.inv().expect("root of unity") };
    let mut acc = CycQ::one(1);
    for _ in 0..e.abs() {
        acc = &acc * &b;
    }
    acc
}

/// A multiplicative character of `E^times`.
#[derive(Clone, Debug)]
pub enum MultChar {
    /// `chi = (chi_1, chi_2)` on the split algebra.
    Split { chi1: FChar, chi2: FChar },
    /// A character of a quadratic field `E`: a table on unit classes modulo
    /// `pi_E^level` plus a value at the uniformizer.
    Field {
        level: u32,
        table: HashMap<(u64, u64), CycQ>,
        pi_value: CycQ,
    },
}

/// Reduce the coordinates of an integral element modulo `p^k` (a convenient
/// small representative of its class).
pub fn reduce_coords(alg: &QuadAlgebra, x: &PadicElem, k: u32) -> PadicElem {
    let ra = rat_mod_pk(&x.a, alg.p, k).expect("integral coordinates");
    let rb = rat_mod_pk(&x.b, alg.p, k).expect("integral coordinates");
    alg.elem_int(ra as i64, rb as i64)
}

/// `x^e` reduced modulo `p^k` at every step (x integral).
pub fn pow_mod(alg: &QuadAlgebra, x: &PadicElem, e: u64, k: u32) -> PadicElem {
    let mut acc = alg.one();
    let mut b = reduce_coords(alg, x, k);
    let mut e = e;
    while e > 0 {
        if e & 1 == 1 {
            acc = reduce_coords(alg, &alg.mul(&acc, &b), k);
        }
        b = reduce_coords(alg, &alg.mul(&b, &b), k);
        e >>= 1;
    }
    acc
}

/// Generators of the unit group `(O_E / pi^level)^times` for an inert quadratic
/// field with odd `p`, as `(element, order)` pairs: a Teichmueller-type generator
/// of order `q^2 - 1` and, for `level = 2`, the one-units `1 + p` and `1 + p w`.
pub fn inert_unit_generators(alg: &QuadAlgebra, level: u32) -> Result<Vec<(PadicElem, u64)>> {
    assert_eq!(alg.kind, Kind::Inert);
    if alg.p == 2 {
        return Err(Error::Unsupported("inert unit generators need odd p".into()));
    }
    if !(1..=2).contains(&level) {
        return Err(Error::Unsupported(
            "inert unit generators implemented for levels 1 and 2".into(),
        ));
    }
    let q2m1 = alg.p * alg.p - 1;
    // A generator of the residue field F_{q^2}^times, by search at level one.
    let gen1 = unit_reps(alg, 1)?
        .into_iter()
        .find(|y| {
            for (l, _) in crate::exact::factorize(q2m1) {
                if pow_mod(alg, y, q2m1 / l, 1) == alg.one() {
                    return false;
                }
            }
            true
        })
        .ok_or_else(|| Error::Unsupported("residue field generator not found".into()))?;
    if level == 1 {
        return Ok(vec![(gen1, q2m1)]);
    }
    // Teichmueller lift modulo p^2: raise to the power p^2 * t with
    // p^2 t = 1 mod (q^2 - 1), killing the one-unit part.
    let p2 = alg.p * alg.p;
    let t = (1..q2m1)
        .find(|t| (p2 % q2m1) * (t % q2m1) % q2m1 == 1)
        .expect("p^2 invertible mod q^2-1");
    let g = pow_mod(alg, &gen1, p2 * t, 2);
    Ok(vec![
        (g, q2m1),
        (alg.elem_int(1 + alg.p as i64, 0), alg.p),
        (alg.elem_int(1, alg.p as i64), alg.p),
    ])
}

impl MultChar {
    /// An unramified character of a quadratic field, with the given value at the
    /// uniformizer.
    pub fn field_unramified(pi_value: CycQ) -> Self {
        MultChar::Field { level: 0, table: HashMap::new(), pi_value }
    }

    /// Build a field character from generator images by multiplicative closure:
    /// starting from `1 -> 1`, repeatedly multiply known classes by the given
    /// generators. Errors if the images are inconsistent (not a homomorphism) or
    /// the generators do not generate the unit classes at this level.
    pub fn field_from_generators(
        alg: &QuadAlgebra,
        level: u32,
        gens: &[(PadicElem, CycQ)],
        pi_value: CycQ,
    ) -> Result<Self> {
        let plevel = level;
        let mut table: HashMap<(u64, u64), CycQ> = HashMap::new();
        let mut work: Vec<(PadicElem, CycQ)> = vec![(alg.one(), CycQ::one(1))];
        let e = alg.e() as u32;
        let red_level = ((plevel + e - 1) / e).max(1);
        table.insert(alg.residue_key(&alg.one(), plevel)?, CycQ::one(1));
        while let Some((x, vx)) = work.pop() {
            for (g, vg) in gens {
                let y = reduce_coords(alg, &alg.mul(&x, g), red_level);
                let vy = &vx * vg;
                let key = alg.residue_key(&y, plevel)?;
                match table.get(&key) {
                    Some(existing) => {
                        if existing != &vy {
                            return Err(Error::Config(
                                "generator images are not a homomorphism".into(),
                            ));
                        }
                    }
                    None => {
                        table.insert(key, vy.clone());
                        work.push((y, vy));
                    }
                }
            }
        }
        let expected = unit_reps(alg, plevel)?.len();
        if table.len() != expected {
            return Err(Error::Config(format!(
                "generators span {} of {} unit classes",
                table.len(),
                expected
            )));
        }
        Ok(MultChar::Field { level: plevel, table, pi_value })
    }

    /// Evaluate at a nonzero element (for split, both components nonzero).
    pub fn eval(&self, alg: &QuadAlgebra, x: &PadicElem) -> Result<CycQ> {
        match self {
            MultChar::Split { chi1, chi2 } => Ok(&chi1.eval(&x.a)? * &chi2.eval(&x.b)?),
            MultChar::Field { level, table, pi_value } => {
                let v = alg.val_pi(x).ok_or_else(|| {
                    Error::Unsupported("multiplicative character at zero".into())
                })?;
                let u = alg.mul(x, &alg.uniformizer_pow(-v));
                let unit_part = if *level == 0 {
                    CycQ::one(1)
                } else {
                    let key = alg.residue_key(&u, *level)?;
                    table.get(&key).cloned().ok_or_else(|| {
                        Error::Unsupported("residue outside the unit table".into())
                    })?
                };
                Ok(&unit_part * &pow_cyc(pi_value, v))
            }
        }
    }

    pub fn inverse(&self) -> Self {
        match self {
            MultChar::Split { chi1, chi2 } => {
                MultChar::Split { chi1: chi1.inverse(), chi2: chi2.inverse() }
            }
            MultChar::Field { level, table, pi_value } => MultChar::Field {
                level: *level,
                table: table
                    .iter()
                    .map(|(k, v)| (*k, v.inv().expect("root of unity")))
                    .collect(),
                pi_value: pi_value.inv().expect("root of unity"),
            },
        }
    }

    /// Twist by `omega . N` for a character `omega` of `F^times`.
    pub fn twist_by_norm(&self, alg: &QuadAlgebra, omega: &FChar) -> Result<MultChar> {
        match self {
            MultChar::Split { chi1, chi2 } => Ok(MultChar::Split {
                chi1: chi1.mul(omega)?,
                chi2: chi2.mul(omega)?,
            }),
            MultChar::Field { level, table, pi_value } => {
                let new_level = (*level).max(omega.conductor() * alg.e() as u32);
                let mut new_table = HashMap::new();
                if new_level > 0 {
                    for u in unit_reps(alg, new_level)? {
                        let key = alg.residue_key(&u, new_level)?;
                        let base = if *level == 0 {
                            CycQ::one(1)
                        } else {
                            table[&alg.residue_key(&u, *level)?].clone()
                        };
                        let tw = omega.eval(&alg.norm(&u))?;
                        new_table.insert(key, &base * &tw);
                    }
                }
                let pi = alg.uniformizer();
                let tw_pi = omega.eval(&alg.norm(&pi))?;
                Ok(MultChar::Field {
                    level: new_level,
                    table: new_table,
                    pi_value: &pi_value.clone() * &tw_pi,
                })
            }
        }
    }

    /// Conductor exponent in uniformizer units (split: the pair's maximum is not
    /// used; see [`MultChar::split_conductors`]).
    pub fn conductor(&self, alg: &QuadAlgebra) -> Result<u32> {
        match self {
            MultChar::Split { chi1, chi2 } => Ok(chi1.conductor().max(chi2.conductor())),
            MultChar::Field { level, table, .. } => {
                'm: for m in 0..=*level {
                    for u in unit_reps(alg, (*level).max(1))? {
                        // test only units congruent to 1 mod pi^m
                        let diff = alg.sub(&u, &alg.one());
                        let ok = match alg.val_pi(&diff) {
                            None => true,
                            Some(v) => v >= m as i64,
                        };
                        if ok {
                            let key = alg.residue_key(&u, *level)?;
                            let val =
                                if *level == 0 { CycQ::one(1) } else { table[&key].clone() };
                            if !val.is_one() {
                                continue 'm;
                            }
                        }
                    }
                    return Ok(m);
                }
                Ok(*level)
            }
        }
    }

    /// The pair of conductor exponents for a split character.
    pub fn split_conductors(&self) -> Option<(u32, u32)> {
        match self {
            MultChar::Split { chi1, chi2 } => Some((chi1.conductor(), chi2.conductor())),
            _ => None,
        }
    }

    pub fn is_ramified(&self, alg: &QuadAlgebra) -> Result<bool> {
        Ok(self.conductor(alg)? > 0)
    }

    /// `chi(-1)`, always a sign.
    pub fn minus_one(&self, alg: &QuadAlgebra) -> Result<CycQ> {
        self.eval(alg, &alg.from_f(rat_int(-1)))
    }

    /// The order of the character, if finite.
    pub fn order(&self) -> Option<u64> {
        match self {
            MultChar::Split { chi1, chi2 } => {
                Some(num_integer::lcm(chi1.order()?, chi2.order()?))
            }
            MultChar::Field { table, pi_value, .. } => {
                let mut l = cyc_order(pi_value)?;
                for v in table.values() {
                    l = num_integer::lcm(l, cyc_order(v)?);
                }
                Some(l)
            }
        }
    }
}

/// The antinorm character `xi` attached to `chi`: the restriction of `chi^{-1}`
/// to the norm-one group `E^1`, stored as an evaluable table (field cases) or as
/// the character `mu(v) = chi_1^{-1}(v) chi_2(v)` of `F^times` (split case,
/// under `v -> (v, v^{-1})`).
#[derive(Clone, Debug)]
pub struct AntinormChar {
    /// Conductor exponent of `xi` on `E^1` (uniformizer units).
    pub o_xi: u32,
    /// `chi(-1)` (a sign; equals `xi(-1)` on `E^1`).
    pub chi_minus_one: CycQ,
    inner: XiInner,
}

#[derive(Clone, Debug)]
enum XiInner {
    Trivial,
    SplitMu(FChar),
    FieldTable { level: u32, table: HashMap<(u64, u64), CycQ> },
}

/// Build the antinorm character of `chi`.
pub fn antinorm(alg: &QuadAlgebra, chi: &MultChar) -> Result<AntinormChar> {
    if alg.kind == Kind::Ramified {
        if let MultChar::Field { level, .. } = chi {
            if *level > 0 {
                return Err(Error::Hypothesis(
                    "characters of a ramified quadratic field must be unramified".into(),
                ));
            }
        }
    }
    let chi_minus_one = chi.minus_one(alg)?;
    match (alg.kind, chi) {
        (Kind::Split, MultChar::Split { chi1, chi2 }) => {
            let mu = chi1.inverse().mul(chi2)?;
            Ok(AntinormChar {
                o_xi: mu.conductor(),
                chi_minus_one,
                inner: XiInner::SplitMu(mu),
            })
        }
        (Kind::Ramified, MultChar::Field { .. }) => {
            Ok(AntinormChar { o_xi: 0, chi_minus_one, inner: XiInner::Trivial })
        }
        (Kind::Inert, MultChar::Field { level, .. }) => {
            let level = *level;
            let mut table = HashMap::new();
            if level > 0 {
                for t in norm_one_reps(alg, level)? {
                    let key = alg.residue_key(&t, level)?;
                    table.insert(key, chi.eval(alg, &t)?.inv()?);
                }
            }
            let inner = XiInner::FieldTable { level, table };
            let mut xi = AntinormChar { o_xi: level, chi_minus_one, inner };
            xi.o_xi = xi.field_conductor(alg, level)?;
            Ok(xi)
        }
        _ => Err(Error::Config("character kind does not match the algebra".into())),
    }
}

impl AntinormChar {
    /// Evaluate at a norm-one element.
    pub fn eval(&self, alg: &QuadAlgebra, t: &PadicElem) -> Result<CycQ> {
        debug_assert_eq!(alg.norm(t), rat_int(1));
        match &self.inner {
            XiInner::Trivial => Ok(CycQ::one(1)),
            XiInner::SplitMu(mu) => mu.eval(&t.a),
            XiInner::FieldTable { level, table } => {
                if *level == 0 {
                    return Ok(CycQ::one(1));
                }
                let key = alg.residue_key(t, *level)?;
                table.get(&key).cloned().ok_or_else(|| {
                    Error::Unsupported("norm-one residue outside the table".into())
                })
            }
        }
    }

    fn field_conductor(&self, alg: &QuadAlgebra, level: u32) -> Result<u32> {
        'm: for m in 0..=level {
            for t in norm_one_reps(alg, level.max(1))? {
                let diff = alg.sub(&t, &alg.one());
                let near_one = match alg.val_pi(&diff) {
                    None => true,
                    Some(v) => v >= m as i64,
                };
                if near_one && !self.eval(alg, &t)?.is_one() {
                    continue 'm;
                }
            }
            return Ok(m);
        }
        Ok(level)
    }

    pub fn is_ramified(&self) -> bool {
        self.o_xi > 0
    }

    /// Whether `xi^2` is ramified.
    pub fn square_is_ramified(&self, alg: &QuadAlgebra) -> Result<bool> {
        match &self.inner {
            XiInner::Trivial => Ok(false),
            XiInner::SplitMu(mu) => Ok(mu.mul(mu)?.conductor() > 0),
            XiInner::FieldTable { level, .. } => {
                for t in norm_one_reps(alg, (*level).max(1))? {
                    let v = self.eval(alg, &t)?;
                    if !(&v * &v).is_one() {
                        return Ok(true);
                    }
                }
                Ok(false)
            }
        }
    }

    /// The split antinorm value at the uniformizer direction: `mu(p)` for
    /// `xi = mu` under `v -> (v, v^{-1})`. `None` for field cases.
    pub fn split_mu_at_p(&self) -> Option<CycQ> {
        match &self.inner {
            XiInner::SplitMu(mu) => Some(mu.pi_value.clone()),
            _ => None,
        }
    }

    /// The inverse antinorm character.
    pub fn inverse(&self) -> Self {
        let inner = match &self.inner {
            XiInner::Trivial => XiInner::Trivial,
            XiInner::SplitMu(mu) => XiInner::SplitMu(mu.inverse()),
            XiInner::FieldTable { level, table } => XiInner::FieldTable {
                level: *level,
                table: table
                    .iter()
                    .map(|(k, v)| (*k, v.inv().expect("root of unity")))
                    .collect(),
            },
        };
        AntinormChar {
            o_xi: self.o_xi,
            chi_minus_one: self.chi_minus_one.clone(),
            inner,
        }
    }
}

/// The epsilon factor of a ramified character of `E^times`:
/// `eps(chi, psi) = int_{O_E^x} chi(pi^{-o} u) psi_E(pi^{-o} u) du` with the
/// additive measure normalized by `vol(O_E) = 1`.
pub fn epsilon_factor(alg: &QuadAlgebra, chi: &MultChar, psi: &AddChar) -> Result<CycQ> {
    let o = chi.conductor(alg)?;
    if o == 0 {
        return Err(Error::Unsupported(
            "epsilon factor requested for an unramified character".into(),
        ));
    }
    if matches!(chi, MultChar::Split { .. }) {
        return Err(Error::Unsupported(
            "use the component epsilon factors for split characters".into(),
        ));
    }
    let pim = alg.uniformizer_pow(-(o as i64));
    // Each unit class modulo pi^o is a coset of pi^o O_E of additive volume
    // q^{-f o}.
    let fo = (alg.f() * o as i64) as i32;
    let vol = (rat_int(1) / rat_int(alg.p as i64)).pow(fo);
    let mut acc = CycQ::zero(1);
    for u in unit_reps(alg, o)? {
        let x = alg.mul(&pim, &u);
        let term = &chi.eval(alg, &x)? * &psi.eval_e(alg, &x);
        acc = &acc + &term;
    }
    Ok(&acc * &CycQ::from_rat(1, vol))
}

/// The epsilon factor of a ramified character of `F^times` (same normalization).
pub fn epsilon_factor_f(chi: &FChar, psi: &AddChar) -> Result<CycQ> {
    let o = chi.conductor();
    if o == 0 {
        return Err(Error::Unsupported(
            "epsilon factor requested for an unramified character".into(),
        ));
    }
    let p = chi.p;
    let po = crate::localring::rat_pow_p(p, -(o as i64));
    let vol = crate::localring::rat_pow_p(p, -(o as i64));
    let mut acc = CycQ::zero(1);
    for u in 1..p.pow(o) {
        if u % p == 0 {
            continue;
        }
        let x = &rat_int(u as i64) * &po;
        let term = &chi.eval(&x)? * &psi.eval(&x);
        acc = &acc + &term;
    }
    Ok(&acc * &CycQ::from_rat(1, vol))
}

/// The rows of the period-ratio table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CaseKind {
    /// `E/F` ramified (so `chi` unramified).
    Ramified,
    /// `E/F` inert, `chi` unramified.
    InertUnramified,
    /// `E/F` inert, `chi` ramified but `xi` unramified (`chi = omega . N`).
    InertXiUnramified,
    /// `E/F` inert, `xi` ramified, `xi^2` unramified.
    InertXiRamSquareUnram,
    /// `E/F` inert, `xi^2` ramified.
    InertXiSquareRam,
    /// `E/F` split, `chi` unramified.
    SplitUnramified,
    /// `E/F` split, `chi` ramified, `xi` unramified.
    SplitXiUnramified,
    /// `E/F` split, exactly one `chi_i` ramified, `xi^2` unramified.
    SplitSemiSquareUnram,
    /// `E/F` split, both `chi_i` ramified, `xi^2` unramified (`xi` ramified).
    SplitFullySquareUnram,
    /// `E/F` split, exactly one `chi_i` ramified, `xi^2` ramified.
    SplitSemiSquareRam,
    /// `E/F` split, both `chi_i` ramified, `xi^2` ramified.
    SplitFullySquareRam,
}

/// Classification of a local dihedral datum `(E, chi)` into the rows of the
/// ratio table; rejects configurations outside the standing hypotheses.
pub fn classify_case(alg: &QuadAlgebra, chi: &MultChar) -> Result<CaseKind> {
    let xi = antinorm(alg, chi)?;
    match alg.kind {
        Kind::Ramified => Ok(CaseKind::Ramified),
        Kind::Inert => {
            if !chi.is_ramified(alg)? {
                Ok(CaseKind::InertUnramified)
            } else if !xi.is_ramified() {
                Ok(CaseKind::InertXiUnramified)
            } else if !xi.square_is_ramified(alg)? {
                Ok(CaseKind::InertXiRamSquareUnram)
            } else {
                Ok(CaseKind::InertXiSquareRam)
            }
        }
        Kind::Split => {
            let (o1, o2) = chi.split_conductors().ok_or_else(|| {
                Error::Config("split algebra needs a split character".into())
            })?;
            let n_ram = (o1 > 0) as u8 + (o2 > 0) as u8;
            if n_ram == 0 {
                return Ok(CaseKind::SplitUnramified);
            }
            if !xi.is_ramified() {
                return Ok(CaseKind::SplitXiUnramified);
            }
            let sq = xi.square_is_ramified(alg)?;
            Ok(match (n_ram, sq) {
                (1, false) => CaseKind::SplitSemiSquareUnram,
                (2, false) => CaseKind::SplitFullySquareUnram,
                (1, true) => CaseKind::SplitSemiSquareRam,
                _ => CaseKind::SplitFullySquareRam,
            })
        }
    }
}

/// One entry of the desk-scale verification sweep.
#[derive(Clone, Debug)]
pub struct SweepCase {
    /// Stable, human-readable case label (used as a report key).
    pub label: String,
    pub alg: QuadAlgebra,
    pub chi: MultChar,
    /// Whether the newform-side checks (averaged Schwartz function, ratio
    /// oracle) run for this case at desk scale. The optimal-form checks always
    /// run; the `SL_2(O_F)` average costs `q^{k-1}` Fourier transforms over
    /// grids of `q^4`-plus classes, so the deepest levels and the largest
    /// residue fields keep the cheap side only.
    pub newform: bool,
}

/// Divisors of `n` in `1..=cap`, ascending.
fn divisors_upto(n: u64, cap: u64) -> Vec<u64> {
    (1..=n.min(cap)).filter(|d| n % d == 0).collect()
}

/// The tiered desk-scale sweep of local cases: all algebra kinds over the
/// given primes, conductor exponents up to 2 and character orders up to
/// `max_order`. Deeper conductors and larger residue fields are sampled
/// rather than exhausted to keep the full sweep within a desk-scale budget:
/// conductor exponent 2 (and split order-2 antinorms away from the smallest
/// prime) run at `p = 3` only, and the most expensive newform-side averages
/// (conductor 2 inert; large character orders at `p = 7`) are marked
/// optimal-form-only through the `newform` flag.
pub fn sweep_cases(primes: &[u64], max_order: u64, precision: i64) -> Result<Vec<SweepCase>> {
    let mut out = Vec::new();
    for &p in primes {
        let q = p as i64;
        // Ramified E, unramified chi with chi(pi_E) = +-1.
        for (tag, pi) in [("pi+", CycQ::one(1)), ("pi-", CycQ::from_int(1, -1))] {
            out.push(SweepCase {
                label: format!("p{p}-ramified-{tag}"),
                alg: crate::localring::make_algebra(p, Kind::Ramified, precision)?,
                chi: MultChar::field_unramified(pi),
                newform: true,
            });
        }
        // Inert, unramified chi.
        let alg = crate::localring::make_algebra(p, Kind::Inert, precision)?;
        for (tag, pi) in [("triv", CycQ::one(1)), ("z3", CycQ::root_of_unity(3, 1))] {
            out.push(SweepCase {
                label: format!("p{p}-inert-o0-{tag}"),
                alg: alg.clone(),
                chi: MultChar::field_unramified(pi),
                newform: true,
            });
        }
        // Inert, conductor 1: one character per order dividing q^2 - 1.
        let g = inert_unit_generators(&alg, 1)?[0].0.clone();
        for d in divisors_upto((q * q - 1) as u64, max_order) {
            if d == 1 {
                continue;
            }
            out.push(SweepCase {
                label: format!("p{p}-inert-o1-ord{d}"),
                alg: alg.clone(),
                chi: MultChar::field_from_generators(
                    &alg,
                    1,
                    &[(g.clone(), CycQ::root_of_unity(d, 1))],
                    CycQ::one(1),
                )?,
                // Large residue fields make the conductor-1 average costly;
                // keep the newform side to the smallest orders at p = 7.
                newform: p < 7 || d <= 3,
            });
        }
        // Inert, conductor 2 (sampled at the smallest prime).
        if p == 3 {
            let gens = inert_unit_generators(&alg, 2)?;
            // Quadratic on the tame part, full order on the wild part, so the
            // total order stays within the sweep cap.
            let images: Vec<(PadicElem, CycQ)> = gens
                .iter()
                .enumerate()
                .map(|(i, (g, ord))| {
                    let image = if i == 0 {
                        CycQ::root_of_unity(2, (ord % 2 == 0) as i64)
                    } else {
                        CycQ::root_of_unity(*ord, 1)
                    };
                    (g.clone(), image)
                })
                .collect();
            out.push(SweepCase {
                label: format!("p{p}-inert-o2"),
                alg: alg.clone(),
                chi: MultChar::field_from_generators(&alg, 2, &images, CycQ::one(1))?,
                // Level 4 averaging (q^3 Bruhat cells over q^8-class grids)
                // is beyond the desk-scale budget: optimal side only.
                newform: false,
            });
        }
        // Split cases.
        let alg = crate::localring::make_algebra(p, Kind::Split, precision)?;
        out.push(SweepCase {
            label: format!("p{p}-split-o0-z5"),
            alg: alg.clone(),
            chi: MultChar::Split {
                chi1: FChar::unramified(p, CycQ::root_of_unity(5, 1)),
                chi2: FChar::trivial(p),
            },
            newform: true,
        });
        // Semiramified: one ramified component per order dividing q - 1.
        for d in divisors_upto((q - 1) as u64, max_order) {
            if d == 1 {
                continue;
            }
            if d > 2 && p != 3 && p != 5 {
                continue;
            }
            out.push(SweepCase {
                label: format!("p{p}-split-semi-ord{d}"),
                alg: alg.clone(),
                chi: MultChar::Split {
                    chi1: FChar::from_generator(p, 1, CycQ::root_of_unity(d, 1), CycQ::one(1))?,
                    chi2: FChar::trivial(p),
                },
                newform: true,
            });
        }
        // Fully ramified with unramified antinorm (equal components).
        let quad = FChar::from_generator(p, 1, CycQ::root_of_unity(2, 1), CycQ::one(1))?;
        out.push(SweepCase {
            label: format!("p{p}-split-full-xiunram"),
            alg: alg.clone(),
            chi: MultChar::Split {
                chi1: quad.clone(),
                chi2: quad.clone(),
            },
            newform: true,
        });
        // Fully ramified with distinct components (antinorm ramified).
        if p > 3 {
            let top = (q - 1) as u64;
            let d = divisors_upto(top, max_order)
                .into_iter()
                .rfind(|&d| d > 2)
                .unwrap_or(2);
            out.push(SweepCase {
                label: format!("p{p}-split-full-ord{d}"),
                alg: alg.clone(),
                chi: MultChar::Split {
                    chi1: FChar::from_generator(p, 1, CycQ::root_of_unity(d, 1), CycQ::one(1))?,
                    chi2: quad.clone(),
                },
                // The distinct-component average is verified at p = 5; at
                // p = 7 only the optimal side runs at desk scale.
                newform: p == 5,
            });
        }
        // Split conductor 2 (sampled at the smallest prime).
        if p == 3 {
            out.push(SweepCase {
                label: format!("p{p}-split-semi-o2"),
                alg: alg.clone(),
                chi: MultChar::Split {
                    chi1: FChar::from_generator(
                        p,
                        2,
                        CycQ::root_of_unity(6.min(max_order), 1),
                        CycQ::one(1),
                    )?,
                    chi2: FChar::trivial(p),
                },
                newform: true,
            });
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::rat;
    use crate::localring::make_algebra;

    fn legendre(p: u64) -> FChar {
        FChar::from_generator(p, 1, CycQ::root_of_unity(2, 1), CycQ::one(1)).unwrap()
    }

    #[test]
    fn additive_character_basics() {
        let psi = AddChar::standard(3);
        assert!(psi.eval(&rat(5, 1)).is_one());
        assert_eq!(psi.eval(&rat(1, 3)), CycQ::root_of_unity(3, 1));
        assert_eq!(psi.eval(&rat(2, 9)), CycQ::root_of_unity(9, 2));
        // psi is additive: psi(x + y) = psi(x) psi(y).
        let x = rat(1, 3);
        let y = rat(5, 9);
        assert_eq!(psi.eval(&(&x + &y)), &psi.eval(&x) * &psi.eval(&y));
    }

    #[test]
    fn legendre_epsilon_is_the_quadratic_gauss_sum() {
        // E = F = Q_3, chi the quadratic residue character with chi(3) = 1:
        // eps = (zeta_3 - zeta_3^2) / 3.
        let chi = legendre(3);
        let psi = AddChar::standard(3);
        let eps = epsilon_factor_f(&chi, &psi).unwrap();
        let expected = &(&CycQ::root_of_unity(3, 1) - &CycQ::root_of_unity(3, 2))
            * &CycQ::from_rat(1, rat(1, 3));
        assert_eq!(eps, expected);
        // And eps^2 = chi(-1)/q = -1/3 for the quadratic character.
        assert_eq!(&eps * &eps, CycQ::from_rat(1, rat(-1, 3)));
    }

    #[test]
    fn epsilon_product_identity_f() {
        // eps(chi, psi) eps(chi^{-1}, psi^{-1}) = q^{-o(chi)}.
        let psi = AddChar::standard(5);
        for j in 1..4i64 {
            let chi =
                FChar::from_generator(5, 1, CycQ::root_of_unity(4, j), CycQ::one(1)).unwrap();
            let lhs = &epsilon_factor_f(&chi, &psi).unwrap()
                * &epsilon_factor_f(&chi.inverse(), &psi.inverse()).unwrap();
            assert_eq!(lhs, CycQ::from_rat(1, rat(1, 5)), "j = {}", j);
        }
        // Level two.
        let chi =
            FChar::from_generator(3, 2, CycQ::root_of_unity(6, 1), CycQ::one(1)).unwrap();
        assert_eq!(chi.conductor(), 2);
        let psi = AddChar::standard(3);
        let lhs = &epsilon_factor_f(&chi, &psi).unwrap()
            * &epsilon_factor_f(&chi.inverse(), &psi.inverse()).unwrap();
        assert_eq!(lhs, CycQ::from_rat(1, rat(1, 9)));
    }

    #[test]
    fn epsilon_product_identity_inert() {
        let alg = make_algebra(3, Kind::Inert, 8).unwrap();
        let psi = AddChar::standard(3);
        let gens = inert_unit_generators(&alg, 1).unwrap();
        // A character of F_9^x of order 8.
        let chi = MultChar::field_from_generators(
            &alg,
            1,
            &[(gens[0].0.clone(), CycQ::root_of_unity(8, 1))],
            CycQ::one(1),
        )
        .unwrap();
        let lhs = &epsilon_factor(&alg, &chi, &psi).unwrap()
            * &epsilon_factor(&alg, &chi.inverse(), &psi.inverse()).unwrap();
        // |pi^{o}|_E = q_E^{-1} = 1/9.
        assert_eq!(lhs, CycQ::from_rat(1, rat(1, 9)));
    }

    #[test]
    fn gauss_sum_support_lemma() {
        // int_{O_E^x} chi(u) psi_E(x u) du is supported on pi^{-o} O_E^x with
        // value chi^{-1}(x) eps(chi, psi).
        let alg = make_algebra(3, Kind::Inert, 8).unwrap();
        let psi = AddChar::standard(3);
        let gens = inert_unit_generators(&alg, 1).unwrap();
        let chi = MultChar::field_from_generators(
            &alg,
            1,
            &[(gens[0].0.clone(), CycQ::root_of_unity(8, 3))],
            CycQ::one(1),
        )
        .unwrap();
        let eps = epsilon_factor(&alg, &chi, &psi).unwrap();
        // Enumerate at level two so the additive character is constant on each
        // class even for arguments of valuation -2.
        let gauss_at = |x: &PadicElem| {
            let mut acc = CycQ::zero(1);
            for u in unit_reps(&alg, 2).unwrap() {
                let term = &chi.eval(&alg, &u).unwrap()
                    * &psi.eval_e(&alg, &alg.mul(x, &u));
                acc = &acc + &term;
            }
            &acc * &CycQ::from_rat(1, rat(1, 81))
        };
        // On the shell pi^{-1} O_E^x.
        let x = alg.elem(rat(1, 3), rat(2, 3));
        assert_eq!(
            gauss_at(&x),
            &chi.eval(&alg, &x).unwrap().inv().unwrap() * &eps
        );
        // Vanishing on O_E and on pi^{-2} O_E^x.
        assert!(gauss_at(&alg.one()).is_zero());
        assert!(gauss_at(&alg.elem(rat(1, 9), rat(1, 9))).is_zero());
    }

    #[test]
    fn inert_character_tables_close() {
        let alg = make_algebra(5, Kind::Inert, 8).unwrap();
        let gens = inert_unit_generators(&alg, 2).unwrap();
        assert_eq!(gens[0].1, 24);
        let images = [
            CycQ::root_of_unity(12, 1), // order 12 | 24
            CycQ::root_of_unity(5, 2),
            CycQ::root_of_unity(5, 1),
        ];
        let pairs: Vec<_> = gens
            .iter()
            .zip(images.iter())
            .map(|((g, _), v)| (g.clone(), v.clone()))
            .collect();
        let chi =
            MultChar::field_from_generators(&alg, 2, &pairs, CycQ::one(1)).unwrap();
        assert_eq!(chi.conductor(&alg).unwrap(), 2);
        // Multiplicativity spot check.
        let x = alg.elem_int(2, 7);
        let y = alg.elem_int(11, 3);
        assert_eq!(
            chi.eval(&alg, &alg.mul(&x, &y)).unwrap(),
            &chi.eval(&alg, &x).unwrap() * &chi.eval(&alg, &y).unwrap()
        );
        // chi(-1) is a sign.
        let m = chi.minus_one(&alg).unwrap();
        assert!((&m * &m).is_one());
    }

    #[test]
    fn antinorm_cases_inert() {
        let alg = make_algebra(3, Kind::Inert, 8).unwrap();
        let g = inert_unit_generators(&alg, 1).unwrap()[0].0.clone();
        let mk = |j: i64| {
            MultChar::field_from_generators(
                &alg,
                1,
                &[(g.clone(), CycQ::root_of_unity(8, j))],
                CycQ::one(1),
            )
            .unwrap()
        };
        // chi of order 8: xi ramified with xi^2 ramified.
        let xi = antinorm(&alg, &mk(1)).unwrap();
        assert_eq!(xi.o_xi, 1);
        assert!(xi.square_is_ramified(&alg).unwrap());
        assert_eq!(classify_case(&alg, &mk(1)).unwrap(), CaseKind::InertXiSquareRam);
        // chi of order 4: xi ramified, xi^2 unramified.
        let xi = antinorm(&alg, &mk(2)).unwrap();
        assert_eq!(xi.o_xi, 1);
        assert!(!xi.square_is_ramified(&alg).unwrap());
        assert_eq!(
            classify_case(&alg, &mk(2)).unwrap(),
            CaseKind::InertXiRamSquareUnram
        );
        // chi of order 2: xi unramified although chi is ramified.
        let xi = antinorm(&alg, &mk(4)).unwrap();
        assert_eq!(xi.o_xi, 0);
        assert_eq!(classify_case(&alg, &mk(4)).unwrap(), CaseKind::InertXiUnramified);
        // xi(chi^{-1}) = xi(chi)^{-1} on norm-one elements.
        let chi = mk(1);
        let xi = antinorm(&alg, &chi).unwrap();
        let xii = antinorm(&alg, &chi.inverse()).unwrap();
        for t in norm_one_reps(&alg, 1).unwrap() {
            assert_eq!(
                xi.eval(&alg, &t).unwrap(),
                xii.eval(&alg, &t).unwrap().inv().unwrap()
            );
        }
    }

    #[test]
    fn antinorm_split_is_the_ratio_character() {
        let alg = make_algebra(3, Kind::Split, 8).unwrap();
        let chi1 = legendre(3);
        let chi2 = FChar::unramified(3, CycQ::root_of_unity(4, 1));
        let chi = MultChar::Split { chi1: chi1.clone(), chi2: chi2.clone() };
        let xi = antinorm(&alg, &chi).unwrap();
        assert_eq!(xi.o_xi, 1);
        // xi((v, 1/v)) = chi1^{-1}(v) chi2(v).
        let t = alg.elem(rat(2, 1), rat(1, 2));
        let expected = &chi1.eval(&rat(2, 1)).unwrap().inv().unwrap()
            * &chi2.eval(&rat(2, 1)).unwrap();
        assert_eq!(xi.eval(&alg, &t).unwrap(), expected);
        assert_eq!(
            classify_case(&alg, &chi).unwrap(),
            CaseKind::SplitSemiSquareUnram
        );
    }

    #[test]
    fn unramified_chi_has_unramified_antinorm() {
        for kind in [Kind::Split, Kind::Inert, Kind::Ramified] {
            let alg = make_algebra(7, kind, 8).unwrap();
            let chi = match kind {
                Kind::Split => MultChar::Split {
                    chi1: FChar::unramified(7, CycQ::root_of_unity(3, 1)),
                    chi2: FChar::unramified(7, CycQ::root_of_unity(3, 2)),
                },
                _ => MultChar::field_unramified(CycQ::root_of_unity(5, 1)),
            };
            let xi = antinorm(&alg, &chi).unwrap();
            assert_eq!(xi.o_xi, 0);
        }
    }

    #[test]
    fn ramified_field_rejects_ramified_chi() {
        let alg = make_algebra(3, Kind::Ramified, 8).unwrap();
        let chi = MultChar::Field {
            level: 1,
            table: HashMap::new(),
            pi_value: CycQ::one(1),
        };
        assert!(matches!(antinorm(&alg, &chi), Err(Error::Hypothesis(_))));
    }

    #[test]
    fn f_char_conductor_and_order() {
        let chi = FChar::from_generator(3, 2, CycQ::root_of_unity(6, 1), CycQ::one(1)).unwrap();
        assert_eq!(chi.conductor(), 2);
        assert_eq!(chi.order(), Some(6));
        // The square has order 3, and order-3 characters of (Z/9)^x are still
        // nontrivial on 1 + 3Z_3, so the conductor stays 2.
        let sq = chi.mul(&chi).unwrap();
        assert_eq!(sq.conductor(), 2);
        assert_eq!(sq.order(), Some(3));
        let chi = legendre(5);
        assert_eq!(chi.conductor(), 1);
        assert_eq!(chi.order(), Some(2));
    }

    #[test]
    fn all_unit_characters_count() {
        assert_eq!(FChar::all_unit_characters(3, 1).unwrap().len(), 2);
        assert_eq!(FChar::all_unit_characters(5, 2).unwrap().len(), 20);
    }
}
