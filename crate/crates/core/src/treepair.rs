//! Binary words and tree pairs.
//!
//! An element is written `(u1,...,un)->(v1,...,vn)`: the standard dyadic
//! interval of `ui` is mapped affinely onto that of `vi`. Domain words are
//! kept in lexicographic order; the images then run through the sorted range
//! leaves cyclically, starting at index `offset`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::dyadic::Dyadic;
use crate::error::{Error, Result};
use crate::plmap::{Carrier, DyadicArc, PLMap, Side};

/// A finite word over `{0, 1}`. The derived order is lexicographic with
/// prefixes first, which is the preorder of the infinite binary tree.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct BinaryWord(Vec<bool>);

impl BinaryWord {
    pub fn empty() -> Self {
        BinaryWord(Vec::new())
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BinaryWord(bits)
    }

    pub fn bits(&self) -> &[bool] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn child(&self, bit: bool) -> BinaryWord {
        let mut v = self.0.clone();
        v.push(bit);
        BinaryWord(v)
    }

    pub fn parent(&self) -> Option<BinaryWord> {
        if self.0.is_empty() {
            None
        } else {
            Some(BinaryWord(self.0[..self.0.len() - 1].to_vec()))
        }
    }

    pub fn last_bit(&self) -> Option<bool> {
        self.0.last().copied()
    }

    /// Left endpoint of the standard dyadic interval.
    pub fn start(&self) -> Dyadic {
        let mut n = BigInt::zero();
        for &b in &self.0 {
            n <<= 1;
            if b {
                n += 1;
            }
        }
        Dyadic::new(n, self.0.len() as u32)
    }

    pub fn end(&self) -> Dyadic {
        &self.start() + &Dyadic::pow2(-(self.0.len() as i64))
    }

    /// The word of `[start, start + 2^-level]`; `None` unless that is a
    /// standard dyadic subinterval of `[0, 1]`.
    pub fn from_standard(start: &Dyadic, level: u32) -> Option<BinaryWord> {
        let scaled = start.mul_pow2(level as i64);
        if !scaled.is_integer() || scaled.is_negative() {
            return None;
        }
        let a = scaled.floor();
        if a >= (BigInt::one() << level) {
            return None;
        }
        let bits = (0..level).rev().map(|i| a.bit(i as u64)).collect();
        Some(BinaryWord(bits))
    }

    fn siblings(a: &BinaryWord, b: &BinaryWord) -> bool {
        a.last_bit() == Some(false) && b.last_bit() == Some(true) && a.parent() == b.parent()
    }
}

impl fmt::Display for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "e");
        }
        for &b in &self.0 {
            write!(f, "{}", if b { '1' } else { '0' })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BinaryWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl FromStr for BinaryWord {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s == "e" {
            return Ok(BinaryWord::empty());
        }
        if s.is_empty() {
            return Err(Error::parse(0, "empty word; write the root as \"e\""));
        }
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.char_indices() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => return Err(Error::parse(i, format!("unexpected character {c:?} in a binary word"))),
            }
        }
        Ok(BinaryWord(bits))
    }
}

/// All vertices of the tree with the given leaves, in preorder.
pub fn tree_nodes(leaves: &[BinaryWord]) -> Vec<BinaryWord> {
    let mut nodes: Vec<BinaryWord> = Vec::new();
    for l in leaves {
        for k in 0..=l.len() {
            nodes.push(BinaryWord(l.0[..k].to_vec()));
        }
    }
    nodes.sort();
    nodes.dedup();
    nodes
}

fn check_antichain(words: &[BinaryWord], side: &str) -> Result<()> {
    let mut cursor = Dyadic::zero();
    for w in words {
        if w.start() != cursor {
            return Err(Error::invalid(format!(
                "{side} leaves are not a complete antichain: {w} does not start at {cursor}"
            )));
        }
        cursor = w.end();
    }
    if cursor != Dyadic::one() {
        return Err(Error::invalid(format!("{side} leaves are not a complete antichain: they stop at {cursor}")));
    }
    Ok(())
}

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TreePair {
    domain: Vec<BinaryWord>,
    range: Vec<BinaryWord>,
    offset: usize,
}

impl TreePair {
    pub fn identity() -> Self {
        TreePair { domain: vec![BinaryWord::empty()], range: vec![BinaryWord::empty()], offset: 0 }
    }

    /// Builds a pair from matched leaves `(u, v)`, in any order.
    pub fn from_pairs(mut pairs: Vec<(BinaryWord, BinaryWord)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::invalid("a tree pair needs at least one leaf"));
        }
        pairs.sort_by(|a, b| a.0.cmp(&b.0));
        let domain: Vec<BinaryWord> = pairs.iter().map(|p| p.0.clone()).collect();
        check_antichain(&domain, "domain")?;
        let mut range: Vec<BinaryWord> = pairs.iter().map(|p| p.1.clone()).collect();
        range.sort();
        check_antichain(&range, "range")?;
        let n = domain.len();
        let offset = range.binary_search(&pairs[0].1).expect("image is a range leaf");
        for (i, (_, v)) in pairs.iter().enumerate() {
            if range[(i + offset) % n] != *v {
                return Err(Error::invalid(format!(
                    "images are not in cyclic order: leaf {} is sent to {v}",
                    pairs[i].0
                )));
            }
        }
        Ok(TreePair { domain, range, offset })
    }

    pub fn domain(&self) -> &[BinaryWord] {
        &self.domain
    }

    /// Range leaves in lexicographic order.
    pub fn range(&self) -> &[BinaryWord] {
        &self.range
    }

    pub fn offset(&self) -> usize {
        self.offset
    }

    pub fn len(&self) -> usize {
        self.domain.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Image of the `i`-th domain leaf.
    pub fn image(&self, i: usize) -> &BinaryWord {
        &self.range[(i + self.offset) % self.domain.len()]
    }

    pub fn pairs(&self) -> Vec<(BinaryWord, BinaryWord)> {
        (0..self.len()).map(|i| (self.domain[i].clone(), self.image(i).clone())).collect()
    }

    fn reducible_at(&self) -> Option<usize> {
        let n = self.len();
        (0..n.saturating_sub(1)).find(|&i| {
            let ri = (i + self.offset) % n;
            ri + 1 < n
                && BinaryWord::siblings(&self.domain[i], &self.domain[i + 1])
                && BinaryWord::siblings(&self.range[ri], &self.range[ri + 1])
        })
    }

    pub fn is_reduced(&self) -> bool {
        self.reducible_at().is_none()
    }

    /// Cancels matched carets until none remain.
    pub fn reduce(&self) -> TreePair {
        let mut tp = self.clone();
        while let Some(i) = tp.reducible_at() {
            let mut pairs = tp.pairs();
            let (u, v) = pairs.remove(i + 1);
            pairs[i] = (u.parent().unwrap(), v.parent().unwrap());
            tp = TreePair::from_pairs(pairs).expect("merging a matched caret keeps the pair valid");
        }
        tp
    }

    pub fn to_plmap(&self) -> PLMap {
        let carrier = if self.offset == 0 { Carrier::Interval } else { Carrier::Circle };
        let pts: Vec<(Dyadic, Dyadic)> =
            (0..self.len()).map(|i| (self.domain[i].start(), self.image(i).start())).collect();
        PLMap::from_points(carrier, pts).expect("leaf matching defines a valid map")
    }

    /// The reduced tree pair of `f`.
    pub fn from_plmap(f: &PLMap) -> TreePair {
        let mut cuts: Vec<Dyadic> = vec![Dyadic::zero()];
        cuts.extend(f.breakpoints());
        cuts.push(f.lift_inv(&Dyadic::zero()).fract());
        cuts.sort();
        cuts.dedup();
        cuts.push(Dyadic::one());
        let mut pairs = Vec::new();
        for w in cuts.windows(2) {
            let (x0, x1) = (&w[0], &w[1]);
            let k = f.one_sided_slope(x0, Side::Right).expect("inside [0, 1)");
            let y0 = f.lift(x0).fract();
            let seg = DyadicArc::new(x0.clone(), x1.clone()).expect("cuts are increasing");
            for (s, j) in seg.standard_decomposition() {
                refine(&mut pairs, x0, &y0, k, s, j);
            }
        }
        TreePair::from_pairs(pairs).expect("refined leaves form a valid pair").reduce()
    }
}

fn refine(out: &mut Vec<(BinaryWord, BinaryWord)>, x0: &Dyadic, y0: &Dyadic, k: i64, s: Dyadic, j: i64) {
    let t = y0 + &(&s - x0).mul_pow2(k);
    let level = j - k;
    if level >= 0 {
        if let Some(v) = BinaryWord::from_standard(&t, level as u32) {
            let u = BinaryWord::from_standard(&s, j as u32).expect("standard decomposition");
            out.push((u, v));
            return;
        }
    }
    let mid = &s + &Dyadic::pow2(-(j + 1));
    refine(out, x0, y0, k, s, j + 1);
    refine(out, x0, y0, k, mid, j + 1);
}

impl fmt::Display for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let d: Vec<String> = self.domain.iter().map(|w| w.to_string()).collect();
        let r: Vec<String> = (0..self.len()).map(|i| self.image(i).to_string()).collect();
        write!(f, "({})->({})", d.join(","), r.join(","))
    }
}

impl fmt::Debug for TreePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

struct Parser<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while let Some(c) = self.src[self.pos..].chars().next() {
            if c.is_whitespace() {
                self.pos += c.len_utf8();
            } else {
                break;
            }
        }
    }

    fn expect(&mut self, tok: &str) -> Result<()> {
        self.skip_ws();
        if self.src[self.pos..].starts_with(tok) {
            self.pos += tok.len();
            Ok(())
        } else {
            Err(Error::parse(self.pos, format!("expected {tok:?}")))
        }
    }

    fn word(&mut self) -> Result<BinaryWord> {
        self.skip_ws();
        let start = self.pos;
        let rest = &self.src[self.pos..];
        if rest.starts_with('e') {
            self.pos += 1;
            return Ok(BinaryWord::empty());
        }
        let len = rest.find(|c| c != '0' && c != '1').unwrap_or(rest.len());
        if len == 0 {
            return Err(Error::parse(start, "expected a binary word"));
        }
        self.pos += len;
        let w = rest[..len].parse::<BinaryWord>().map_err(|_| Error::parse(start, "bad binary word"))?;
        // whitespace inside a word is ignored too
        let mut bits = w.0;
        loop {
            let save = self.pos;
            self.skip_ws();
            let rest = &self.src[self.pos..];
            let more = rest.find(|c| c != '0' && c != '1').unwrap_or(rest.len());
            if more == 0 || save == self.pos {
                self.pos = save;
                break;
            }
            bits.extend(rest[..more].chars().map(|c| c == '1'));
            self.pos += more;
        }
        Ok(BinaryWord(bits))
    }

    fn list(&mut self) -> Result<Vec<BinaryWord>> {
        self.expect("(")?;
        self.skip_ws();
        if self.src[self.pos..].starts_with(')') {
            self.pos += 1;
            return Ok(vec![BinaryWord::empty()]);
        }
        let mut out = vec![self.word()?];
        loop {
            self.skip_ws();
            match self.src[self.pos..].chars().next() {
                Some(',') => {
                    self.pos += 1;
                    out.push(self.word()?);
                }
                Some(')') => {
                    self.pos += 1;
                    return Ok(out);
                }
                _ => return Err(Error::parse(self.pos, "expected \",\" or \")\"")),
            }
        }
    }
}

impl FromStr for TreePair {
    type Err = Error;

    /// Accepts `(wordlist)->(wordlist)`; `e` is the empty word and `()` is
    /// read as `(e)`. Whitespace is ignored.
    fn from_str(s: &str) -> Result<Self> {
        let mut p = Parser { src: s, pos: 0 };
        let dom = p.list()?;
        p.expect("->")?;
        let ran_pos = p.pos;
        let ran = p.list()?;
        p.skip_ws();
        if p.pos != s.len() {
            return Err(Error::parse(p.pos, "trailing input"));
        }
        if dom.len() != ran.len() {
            return Err(Error::parse(ran_pos, format!("{} domain words but {} range words", dom.len(), ran.len())));
        }
        TreePair::from_pairs(dom.into_iter().zip(ran).collect())
    }
}
