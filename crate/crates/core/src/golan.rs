//! Deciding whether finitely many elements generate F.
//!
//! Three conditions are checked: the core graph is the criterion graph;
//! the subgroup contains elements with endpoint germs `(1, 0)` and `(0, 1)`
//! (in log2 form); and some element `xi` fixes a dyadic `x` in `(0, 1)` with
//! slope 1 on the left and 2 on the right. The germ condition is decided
//! exactly on the lattice of germ vectors. The last one is a bounded search,
//! so the verdict can be `Unknown`.

use std::fmt;

use serde::Serialize;

use crate::core2::{build_core_of_maps, is_generation_graph};
use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::exec::Exec;
use crate::plmap::{Carrier, PLMap, Side};

pub const DEFAULT_DEPTH: usize = 8;

/// log2 of the slopes at `0+` and `1-`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct GermVector {
    pub at_zero: i64,
    pub at_one: i64,
}

impl GermVector {
    pub fn of(f: &PLMap) -> Result<GermVector> {
        if !f.fixes_zero() {
            return Err(Error::precondition("germs at 0 and 1 are only defined for elements of F"));
        }
        let f = f.to_interval()?;
        Ok(GermVector {
            at_zero: f.one_sided_slope(&Dyadic::zero(), Side::Right)?,
            at_one: f.one_sided_slope(&Dyadic::one(), Side::Left)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Letter {
    pub generator: usize,
    pub inverse: bool,
}

/// A word in the generators and their inverses.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn eval(&self, gens: &[PLMap]) -> PLMap {
        let id = PLMap::identity(Carrier::Interval);
        self.0.iter().fold(id, |acc, l| {
            let g = &gens[l.generator];
            acc.then(&if l.inverse { g.inverse() } else { g.clone() })
        })
    }

    /// Renders with the given generator names, e.g. `k0 k1^-1`.
    pub fn render(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|l| {
                let n = names.get(l.generator).cloned().unwrap_or_else(|| format!("g{}", l.generator + 1));
                if l.inverse {
                    format!("{n}^-1")
                } else {
                    n
                }
            })
            .collect();
        parts.join(" ")
    }

    /// `g_1^c_1 ... g_m^c_m`.
    pub fn from_exponents(coeffs: &[i64]) -> Word {
        let mut letters = Vec::new();
        for (i, &c) in coeffs.iter().enumerate() {
            for _ in 0..c.unsigned_abs() {
                letters.push(Letter { generator: i, inverse: c < 0 });
            }
        }
        Word(letters)
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(&[]))
    }
}

impl Serialize for Word {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The germ lattice in Hermite normal form: `basis` is `(p, q), (0, r)` with
/// `p, r > 0` and `0 <= q < r` (either row may be absent). `coeffs[i]`
/// expresses basis row `i` in terms of the generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GermLattice {
    pub basis: Vec<[i64; 2]>,
    #[serde(skip)]
    coeffs: Vec<Vec<i64>>,
}

fn reduce_column(rows: &mut [([i128; 2], Vec<i128>)], col: usize) -> Option<usize> {
    loop {
        let pivot = (0..rows.len()).filter(|&i| rows[i].0[col] != 0).min_by_key(|&i| rows[i].0[col].abs())?;
        let mut done = true;
        for i in 0..rows.len() {
            if i != pivot && rows[i].0[col] != 0 {
                let k = rows[i].0[col].div_euclid(rows[pivot].0[col]);
                let (pv, pc) = rows[pivot].clone();
                for (x, p) in rows[i].0.iter_mut().zip(pv) {
                    *x -= k * p;
                }
                for (c, p) in rows[i].1.iter_mut().zip(&pc) {
                    *c -= k * p;
                }
                if rows[i].0[col] != 0 {
                    done = false;
                }
            }
        }
        if done {
            return Some(pivot);
        }
    }
}

impl GermLattice {
    pub fn of(vectors: &[GermVector]) -> GermLattice {
        let m = vectors.len();
        let mut rows: Vec<([i128; 2], Vec<i128>)> = vectors
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let mut e = vec![0i128; m];
                e[i] = 1;
                ([v.at_zero as i128, v.at_one as i128], e)
            })
            .collect();
        let mut out: Vec<([i128; 2], Vec<i128>)> = Vec::new();
        if let Some(p) = reduce_column(&mut rows, 0) {
            out.push(rows.remove(p));
        }
        if let Some(p) = reduce_column(&mut rows, 1) {
            out.push(rows.remove(p));
        }
        for row in out.iter_mut() {
            let lead = if row.0[0] != 0 { row.0[0] } else { row.0[1] };
            if lead < 0 {
                row.0.iter_mut().for_each(|x| *x = -*x);
                row.1.iter_mut().for_each(|x| *x = -*x);
            }
        }
        if out.len() == 2 && out[0].0[0] != 0 {
            let r = out[1].0[1];
            let k = out[0].0[1].div_euclid(r);
            let (pv, pc) = out[1].clone();
            out[0].0[1] -= k * pv[1];
            for (c, p) in out[0].1.iter_mut().zip(&pc) {
                *c -= k * p;
            }
        }
        GermLattice {
            basis: out.iter().map(|r| [r.0[0] as i64, r.0[1] as i64]).collect(),
            coeffs: out.iter().map(|r| r.1.iter().map(|&c| c as i64).collect()).collect(),
        }
    }

    /// Exponents `c` with `sum c_i v_i = target`, if the target is in the
    /// lattice.
    pub fn solve(&self, target: [i64; 2]) -> Option<Vec<i64>> {
        let m = self.coeffs.first().map_or(0, |c| c.len());
        let mut acc = vec![0i64; m];
        let mut rest = target;
        for (row, c) in self.basis.iter().zip(&self.coeffs) {
            let col = if row[0] != 0 { 0 } else { 1 };
            if rest[col] % row[col] != 0 {
                return None;
            }
            let k = rest[col] / row[col];
            rest[0] -= k * row[0];
            rest[1] -= k * row[1];
            for (a, ci) in acc.iter_mut().zip(c) {
                *a += k * ci;
            }
        }
        (rest == [0, 0]).then_some(acc)
    }

    pub fn contains(&self, target: [i64; 2]) -> bool {
        self.solve(target).is_some()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LatticeCheck {
    pub has_1_0: bool,
    pub has_0_1: bool,
    pub lattice: GermLattice,
}

pub fn germ_lattice_check(gens: &[PLMap]) -> Result<LatticeCheck> {
    let vs = gens.iter().map(GermVector::of).collect::<Result<Vec<_>>>()?;
    let lattice = GermLattice::of(&vs);
    Ok(LatticeCheck { has_1_0: lattice.contains([1, 0]), has_0_1: lattice.contains([0, 1]), lattice })
}

/// The smallest breakpoint `x` in `(0, 1)` fixed by `xi` with left slope 1
/// and right slope 2.
pub fn xi_point(xi: &PLMap) -> Option<Dyadic> {
    let xi = xi.to_interval().ok()?;
    xi.breakpoints().into_iter().find(|x| {
        x.is_positive()
            && xi.lift(x) == *x
            && xi.one_sided_slope(x, Side::Left) == Ok(0)
            && xi.one_sided_slope(x, Side::Right) == Ok(1)
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub mu: Option<Word>,
    pub nu: Option<Word>,
    pub xi: Option<(Word, Dyadic)>,
    pub depth: usize,
}

impl SearchResult {
    pub fn complete(&self) -> bool {
        self.mu.is_some() && self.nu.is_some() && self.xi.is_some()
    }
}

fn letters(m: usize) -> Vec<Letter> {
    (0..m).flat_map(|g| [Letter { generator: g, inverse: false }, Letter { generator: g, inverse: true }]).collect()
}

/// Breadth-first search over freely reduced words of length at most
/// `depth`, letters ordered `g1, g1^-1, g2, g2^-1, ...`; for each condition
/// the first word in this order is returned.
pub fn find_witnesses(gens: &[PLMap], depth: usize, exec: Exec) -> Result<SearchResult> {
    let gens: Vec<PLMap> = gens.iter().map(|g| g.to_interval()).collect::<Result<_>>()?;
    let alphabet = letters(gens.len());
    let values: Vec<PLMap> = alphabet
        .iter()
        .map(|l| if l.inverse { gens[l.generator].inverse() } else { gens[l.generator].clone() })
        .collect();
    let mut out = SearchResult { mu: None, nu: None, xi: None, depth: 0 };
    let mut level: Vec<(Word, PLMap)> = vec![(Word::default(), PLMap::identity(Carrier::Interval))];
    for len in 1..=depth {
        let next: Vec<Vec<(Word, PLMap)>> = exec.map(&level, |(w, e)| {
            alphabet
                .iter()
                .enumerate()
                .filter(|(_, l)| w.0.last().is_none_or(|p| !(p.generator == l.generator && p.inverse != l.inverse)))
                .map(|(i, l)| {
                    let mut word = w.0.clone();
                    word.push(*l);
                    (Word(word), e.then(&values[i]))
                })
                .collect()
        });
        level = next.into_iter().flatten().collect();
        if level.is_empty() {
            break;
        }
        out.depth = len;
        let checks = exec.map(&level, |(_, e)| {
            let germ = GermVector::of(e).ok();
            (
                germ == Some(GermVector { at_zero: 1, at_one: 0 }),
                germ == Some(GermVector { at_zero: 0, at_one: 1 }),
                xi_point(e),
            )
        });
        for ((w, _), (is_mu, is_nu, x)) in level.iter().zip(checks) {
            if out.mu.is_none() && is_mu {
                out.mu = Some(w.clone());
            }
            if out.nu.is_none() && is_nu {
                out.nu = Some(w.clone());
            }
            if out.xi.is_none() {
                if let Some(x) = x {
                    out.xi = Some((w.clone(), x));
                }
            }
        }
        if out.complete() {
            break;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Verdict {
    Yes,
    No,
    Unknown,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Witnesses {
    pub mu: Word,
    pub nu: Word,
    pub xi: Word,
    pub x: Dyadic,
}

impl Witnesses {
    /// Re-checks the three conditions directly on the evaluated words.
    pub fn verify(&self, gens: &[PLMap]) -> bool {
        let mu = GermVector::of(&self.mu.eval(gens)).ok();
        let nu = GermVector::of(&self.nu.eval(gens)).ok();
        let xi = self.xi.eval(gens);
        mu == Some(GermVector { at_zero: 1, at_one: 0 })
            && nu == Some(GermVector { at_zero: 0, at_one: 1 })
            && self.x.is_positive()
            && self.x < Dyadic::one()
            && xi.lift(&self.x) == self.x
            && xi.one_sided_slope(&self.x, Side::Left) == Ok(0)
            && xi.one_sided_slope(&self.x, Side::Right) == Ok(1)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Refutation {
    /// The core graph differs from the criterion graph.
    Core { dot: String },
    /// A required germ vector lies outside the lattice.
    Lattice { basis: Vec<[i64; 2]>, missing: [i64; 2] },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GenVerdict {
    pub verdict: Verdict,
    pub failed_condition: Option<String>,
    pub witnesses: Option<Witnesses>,
    pub refutation: Option<Refutation>,
    pub core_dot: String,
    pub germ_basis: Vec<[i64; 2]>,
    pub search_depth: usize,
}

pub fn generates_f(gens: &[PLMap], depth: usize, exec: Exec) -> Result<GenVerdict> {
    let core = build_core_of_maps(gens)?;
    let lattice = germ_lattice_check(gens)?;
    let mut v = GenVerdict {
        verdict: Verdict::Unknown,
        failed_condition: None,
        witnesses: None,
        refutation: None,
        core_dot: core.graph.to_dot(),
        germ_basis: lattice.lattice.basis.clone(),
        search_depth: depth,
    };
    if !is_generation_graph(&core.graph) {
        v.verdict = Verdict::No;
        v.failed_condition = Some("core graph".into());
        v.refutation = Some(Refutation::Core { dot: v.core_dot.clone() });
        return Ok(v);
    }
    for (target, ok, name) in [([1, 0], lattice.has_1_0, "germ (1,0)"), ([0, 1], lattice.has_0_1, "germ (0,1)")] {
        if !ok {
            v.verdict = Verdict::No;
            v.failed_condition = Some(name.into());
            v.refutation = Some(Refutation::Lattice { basis: v.germ_basis.clone(), missing: target });
            return Ok(v);
        }
    }
    let found = find_witnesses(gens, depth, exec)?;
    match found.xi {
        Some((xi, x)) => {
            let lattice_word = |t| Word::from_exponents(&lattice.lattice.solve(t).expect("checked above"));
            v.verdict = Verdict::Yes;
            v.witnesses = Some(Witnesses {
                mu: found.mu.unwrap_or_else(|| lattice_word([1, 0])),
                nu: found.nu.unwrap_or_else(|| lattice_word([0, 1])),
                xi,
                x,
            });
        }
        None => {
            v.failed_condition = Some(format!("no fixed breakpoint witness within depth {depth}"));
        }
    }
    Ok(v)
}
