//! Free-group words, group presentations, the integral group ring, Fox free
//! differential calculus, and the abelianization map `α`.
//!
//! Words are always stored freely reduced. Group-ring arithmetic is exact;
//! the only inexact step is evaluation under a representation.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use nalgebra::{DMatrix, Matrix2, Matrix3};
use num_complex::Complex64;

use crate::error::AlgebraError;
use crate::laurent::{LaurentMatrix, LaurentPoly};
use crate::su2::{adjoint, Su2};

/// A generator raised to `±1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Letter {
    pub gen: usize,
    pub exp: i8,
}

impl Letter {
    pub fn new(gen: usize, exp: i8) -> Letter {
        debug_assert!(exp == 1 || exp == -1);
        Letter { gen, exp }
    }

    pub fn inverse(self) -> Letter {
        Letter { gen: self.gen, exp: -self.exp }
    }
}

/// A freely reduced word in the free group.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn identity() -> Word {
        Word(Vec::new())
    }

    pub fn generator(gen: usize) -> Word {
        Word(vec![Letter::new(gen, 1)])
    }

    /// Free reduction of an arbitrary letter sequence.
    pub fn reduce(letters: impl IntoIterator<Item = Letter>) -> Word {
        let mut out: Vec<Letter> = Vec::new();
        for l in letters {
            if out.last().is_some_and(|&last| last == l.inverse()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Builds from `(generator, exponent)` pairs with arbitrary integer exponents.
    pub fn from_powers(powers: &[(usize, i64)]) -> Word {
        Word::reduce(powers.iter().flat_map(|&(g, e)| {
            let l = Letter::new(g, if e < 0 { -1 } else { 1 });
            std::iter::repeat(l).take(e.unsigned_abs() as usize)
        }))
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inverse()).collect())
    }

    pub fn pow(&self, e: i64) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        (0..e.unsigned_abs()).fold(Word::identity(), |acc, _| &acc * &base)
    }

    /// Exponent sum of each generator.
    pub fn exponent_sums(&self, generators: usize) -> Vec<i64> {
        let mut v = vec![0i64; generators];
        for l in &self.0 {
            v[l.gen] += l.exp as i64;
        }
        v
    }

    pub fn max_generator(&self) -> Option<usize> {
        self.0.iter().map(|l| l.gen).max()
    }

    /// Replaces each generator by a word (a homomorphism of free groups).
    pub fn substitute(&self, images: &[Word]) -> Word {
        Word::reduce(self.0.iter().flat_map(|l| {
            let w = if l.exp > 0 { images[l.gen].clone() } else { images[l.gen].inverse() };
            w.0
        }))
    }

    pub fn eval_su2(&self, images: &[Su2]) -> Su2 {
        self.0.iter().fold(Su2::IDENTITY, |acc, l| {
            let g = images[l.gen];
            acc * if l.exp > 0 { g } else { g.inverse() }
        })
    }

    /// Parses whitespace-separated tokens `g` or `g^e`; `1` is the identity.
    pub fn parse(text: &str, names: &[String]) -> Result<Word, AlgebraError> {
        let mut powers = Vec::new();
        for tok in text.split_whitespace() {
            if tok == "1" {
                continue;
            }
            let (name, exp) = match tok.split_once('^') {
                Some((n, e)) => {
                    let e: i64 = e.parse().map_err(|_| AlgebraError::Parse(format!("bad exponent in '{tok}'")))?;
                    if e == 0 {
                        return Err(AlgebraError::Parse(format!("zero exponent in '{tok}'")));
                    }
                    (n, e)
                }
                None => (tok, 1),
            };
            let gen = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| AlgebraError::Parse(format!("unknown generator '{name}'")))?;
            powers.push((gen, exp));
        }
        Ok(Word::from_powers(&powers))
    }

    /// Inverse of [`Word::parse`], grouping runs into powers.
    pub fn display(&self, names: &[String]) -> String {
        if self.0.is_empty() {
            return "1".to_string();
        }
        let mut toks = Vec::new();
        let mut i = 0;
        while i < self.0.len() {
            let l = self.0[i];
            let mut run = 1;
            while i + run < self.0.len() && self.0[i + run] == l {
                run += 1;
            }
            let e = run as i64 * l.exp as i64;
            toks.push(if e == 1 { names[l.gen].clone() } else { format!("{}^{}", names[l.gen], e) });
            i += run;
        }
        toks.join(" ")
    }
}

impl Mul for &Word {
    type Output = Word;
    fn mul(self, o: &Word) -> Word {
        Word::reduce(self.0.iter().chain(o.0.iter()).copied())
    }
}

impl Mul for Word {
    type Output = Word;
    fn mul(self, o: Word) -> Word {
        &self * &o
    }
}

/// Longitude–meridian pair, written in the presentation generators.
#[derive(Clone, Debug, PartialEq)]
pub struct Peripheral {
    pub lambda: Word,
    pub mu: Word,
}

#[derive(Clone, Debug, PartialEq)]
pub struct GroupPresentation {
    pub names: Vec<String>,
    pub relators: Vec<Word>,
    pub peripheral: Option<Peripheral>,
}

impl GroupPresentation {
    pub fn new(names: Vec<String>, relators: Vec<Word>, peripheral: Option<Peripheral>) -> Result<Self, AlgebraError> {
        let p = GroupPresentation { names, relators, peripheral };
        let count = p.generator_count();
        let words = p.relators.iter().chain(p.peripheral.iter().flat_map(|q| [&q.lambda, &q.mu]));
        for w in words {
            if let Some(g) = w.max_generator().filter(|&g| g >= count) {
                return Err(AlgebraError::InvalidGenerator { index: g, count });
            }
        }
        Ok(p)
    }

    /// Parses generator names and word strings.
    pub fn parse(names: &[&str], relators: &[&str], peripheral: Option<(&str, &str)>) -> Result<Self, AlgebraError> {
        let names: Vec<String> = names.iter().map(|s| s.to_string()).collect();
        let rels = relators.iter().map(|r| Word::parse(r, &names)).collect::<Result<Vec<_>, _>>()?;
        let per = match peripheral {
            Some((l, m)) => Some(Peripheral { lambda: Word::parse(l, &names)?, mu: Word::parse(m, &names)? }),
            None => None,
        };
        GroupPresentation::new(names, rels, per)
    }

    /// Figure-eight knot group `⟨x, y | w x w⁻¹ y⁻¹⟩` with `w = [x⁻¹, y] = x y⁻¹ x⁻¹ y`.
    pub fn figure_eight() -> GroupPresentation {
        GroupPresentation::parse(
            &["x", "y"],
            &["x y^-1 x^-1 y x y^-1 x y x^-1 y^-1"],
            Some(("y x^-1 y^-1 x^2 y^-1 x^-1 y", "x")),
        )
        .expect("static presentation")
    }

    pub fn generator_count(&self) -> usize {
        self.names.len()
    }

    pub fn deficiency(&self) -> i64 {
        self.generator_count() as i64 - self.relators.len() as i64
    }

    pub fn peripheral(&self) -> Result<&Peripheral, AlgebraError> {
        self.peripheral.as_ref().ok_or(AlgebraError::MissingPeripheral)
    }

    /// Fox Jacobian: entry `(i, j)` is `∂r_i/∂x_j`.
    pub fn fox_matrix(&self) -> Vec<Vec<GroupRingElement>> {
        self.relators
            .iter()
            .map(|r| (0..self.generator_count()).map(|j| fox_derivative(r, j)).collect())
            .collect()
    }

    pub fn word(&self, text: &str) -> Result<Word, AlgebraError> {
        Word::parse(text, &self.names)
    }
}

/// Finite integral combination of words.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct GroupRingElement {
    terms: BTreeMap<Word, i64>,
}

impl GroupRingElement {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::from_word(Word::identity())
    }

    pub fn from_word(w: Word) -> Self {
        Self::from_terms([(w, 1)])
    }

    pub fn from_terms(terms: impl IntoIterator<Item = (Word, i64)>) -> Self {
        let mut e = Self::zero();
        for (w, c) in terms {
            e.add_term(w, c);
        }
        e
    }

    pub fn add_term(&mut self, w: Word, c: i64) {
        if c == 0 {
            return;
        }
        let entry = self.terms.entry(w.clone()).or_insert(0);
        *entry += c;
        if *entry == 0 {
            self.terms.remove(&w);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Word, i64)> {
        self.terms.iter().map(|(w, &c)| (w, c))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Sum of coefficients (the augmentation `Z[π] → Z`).
    pub fn augmentation(&self) -> i64 {
        self.terms.values().sum()
    }

    pub fn left_mul(&self, w: &Word) -> Self {
        Self::from_terms(self.terms.iter().map(|(u, &c)| (w * u, c)))
    }

    pub fn right_mul(&self, w: &Word) -> Self {
        Self::from_terms(self.terms.iter().map(|(u, &c)| (u * w, c)))
    }

    pub fn scale(&self, k: i64) -> Self {
        Self::from_terms(self.terms.iter().map(|(u, &c)| (u.clone(), c * k)))
    }

    /// Applies a free-group homomorphism to every word.
    pub fn substitute(&self, images: &[Word]) -> Self {
        Self::from_terms(self.terms.iter().map(|(u, &c)| (u.substitute(images), c)))
    }

    /// Image in `Z[t^±1]` under `α` (exact).
    pub fn abelianize(&self, alpha: &AbelianizationMap) -> BTreeMap<i64, i64> {
        let mut out = BTreeMap::new();
        for (w, c) in &self.terms {
            *out.entry(alpha.apply(w)).or_insert(0) += c;
        }
        out.retain(|_, c| *c != 0);
        out
    }

    /// `Σ c·Ad(ρ(w))`.
    pub fn ad_matrix(&self, images: &[Su2]) -> Matrix3<f64> {
        self.terms
            .iter()
            .fold(Matrix3::zeros(), |acc, (w, &c)| acc + adjoint(&w.eval_su2(images)) * c as f64)
    }

    /// `Σ c·ρ(w)` as a 2×2 complex matrix.
    pub fn su2_matrix(&self, images: &[Su2]) -> Matrix2<Complex64> {
        self.terms.iter().fold(Matrix2::zeros(), |acc, (w, &c)| {
            acc + w.eval_su2(images).to_matrix() * Complex64::new(c as f64, 0.0)
        })
    }

    /// `Σ c·t^α(w)·ρ(w)` evaluated at a complex number `t`.
    pub fn alpha_rho_at(&self, images: &[Su2], alpha: &AbelianizationMap, t: Complex64) -> Matrix2<Complex64> {
        self.terms.iter().fold(Matrix2::zeros(), |acc, (w, &c)| {
            acc + w.eval_su2(images).to_matrix() * (t.powi(alpha.apply(w) as i32) * c as f64)
        })
    }

    pub fn parse(text: &str, names: &[String]) -> Result<Self, AlgebraError> {
        let mut out = Self::zero();
        let mut sign = 1i64;
        let mut pending: Vec<&str> = Vec::new();
        let flush = |out: &mut Self, toks: &mut Vec<&str>, sign: i64| -> Result<(), AlgebraError> {
            if toks.is_empty() {
                return Ok(());
            }
            let (mut coeff, mut word_toks) = (1i64, toks.clone());
            if let Some((c, rest)) = toks[0].split_once('*') {
                coeff = c.parse().map_err(|_| AlgebraError::Parse(format!("bad coefficient '{c}'")))?;
                word_toks[0] = rest;
                if rest.is_empty() {
                    word_toks.remove(0);
                }
            } else if let Ok(c) = toks[0].parse::<i64>() {
                if toks.len() > 1 {
                    return Err(AlgebraError::Parse(format!("coefficient '{c}' must be written as '{c}*word'")));
                }
                coeff = c;
                word_toks.clear();
            }
            let w = Word::parse(&word_toks.join(" "), names)?;
            out.add_term(w, sign * coeff);
            toks.clear();
            Ok(())
        };
        for tok in text.split_whitespace() {
            match tok {
                "+" | "-" => {
                    flush(&mut out, &mut pending, sign)?;
                    sign = if tok == "-" { -1 } else { 1 };
                }
                _ if pending.is_empty() && tok.len() > 1 && tok.starts_with('-') && tok[1..].parse::<i64>().is_err() => {
                    sign = -sign;
                    pending.push(&tok[1..]);
                }
                _ => pending.push(tok),
            }
        }
        flush(&mut out, &mut pending, sign)?;
        Ok(out)
    }

    pub fn display(&self, names: &[String]) -> String {
        if self.terms.is_empty() {
            return "0".into();
        }
        let mut s = String::new();
        for (i, (w, &c)) in self.terms.iter().enumerate() {
            let (op, mag) = if c < 0 { ("-", -c) } else { ("+", c) };
            if i == 0 {
                if c < 0 {
                    s.push('-');
                }
            } else {
                s.push_str(&format!(" {op} "));
            }
            let word = w.display(names);
            if mag == 1 {
                s.push_str(&word);
            } else if w.is_empty() {
                s.push_str(&mag.to_string());
            } else {
                s.push_str(&format!("{mag}*{word}"));
            }
        }
        s
    }
}

impl Add for &GroupRingElement {
    type Output = GroupRingElement;
    fn add(self, o: &GroupRingElement) -> GroupRingElement {
        let mut out = self.clone();
        for (w, &c) in &o.terms {
            out.add_term(w.clone(), c);
        }
        out
    }
}

impl Sub for &GroupRingElement {
    type Output = GroupRingElement;
    fn sub(self, o: &GroupRingElement) -> GroupRingElement {
        self + &(-o)
    }
}

impl Neg for &GroupRingElement {
    type Output = GroupRingElement;
    fn neg(self) -> GroupRingElement {
        self.scale(-1)
    }
}

impl Mul for &GroupRingElement {
    type Output = GroupRingElement;
    fn mul(self, o: &GroupRingElement) -> GroupRingElement {
        let mut out = GroupRingElement::zero();
        for (u, &a) in &self.terms {
            for (v, &b) in &o.terms {
                out.add_term(u * v, a * b);
            }
        }
        out
    }
}

impl fmt::Display for GroupRingElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let max = self.terms.keys().filter_map(|w| w.max_generator()).max().map_or(0, |g| g + 1);
        let names: Vec<String> = (0..max).map(|g| format!("x{g}")).collect();
        write!(f, "{}", self.display(&names))
    }
}

/// Cyclic conjugates `R` of each relator and its inverse, as `(relator, exponent, c, R)`
/// with `R = c⁻¹ r^ε c`.
fn relator_rotations(relators: &[Word]) -> Vec<(usize, i64, Word, Vec<Letter>)> {
    let mut out = Vec::new();
    for (i, r) in relators.iter().enumerate() {
        for (eps, rr) in [(1, r.clone()), (-1, r.inverse())] {
            let l = rr.letters();
            for k in 0..l.len() {
                let rot: Vec<Letter> = l[k..].iter().chain(&l[..k]).copied().collect();
                out.push((i, eps, Word::reduce(l[..k].iter().copied()), rot));
            }
        }
    }
    out
}

fn find_subword(hay: &[Letter], needle: &[Letter]) -> Option<usize> {
    if needle.is_empty() || needle.len() > hay.len() {
        return None;
    }
    (0..=hay.len() - needle.len()).find(|&i| &hay[i..i + needle.len()] == needle)
}

/// Dehn-style reduction: replaces any subword that is more than half of a
/// cyclic conjugate of a relator by the inverse of the remainder. The result
/// equals `w` in the group; reaching the empty word certifies `w = 1`.
pub fn dehn_reduce(w: &Word, relators: &[Word]) -> Word {
    let rots = relator_rotations(relators);
    let mut cur = w.clone();
    'outer: loop {
        for (_, _, _, rot) in &rots {
            let l = rot.len();
            for plen in (l / 2 + 1..=l).rev() {
                if let Some(i) = find_subword(cur.letters(), &rot[..plen]) {
                    let s = Word::reduce(rot[plen..].iter().copied()).inverse();
                    let v = cur.letters();
                    cur = Word::reduce(v[..i].iter().chain(s.letters()).chain(&v[i + plen..]).copied());
                    continue 'outer;
                }
            }
        }
        return cur;
    }
}

/// Certifies `z = 0` in `Z[π]` by pairing terms whose words are equal in `π`
/// (checked with [`dehn_reduce`]). `false` means "not certified", not "nonzero".
pub fn certify_zero(z: &GroupRingElement, relators: &[Word]) -> bool {
    let mut pos: Vec<Word> = Vec::new();
    let mut neg: Vec<Word> = Vec::new();
    for (w, c) in z.terms() {
        let bucket = if c > 0 { &mut pos } else { &mut neg };
        bucket.extend(std::iter::repeat(w.clone()).take(c.unsigned_abs() as usize));
    }
    if pos.len() != neg.len() {
        return false;
    }
    for w in pos {
        let hit = neg.iter().position(|v| dehn_reduce(&(&w * &v.inverse()), relators).is_empty());
        match hit {
            Some(k) => {
                neg.swap_remove(k);
            }
            None => return false,
        }
    }
    true
}

/// One factor `u r_i^ε u⁻¹` of a product of conjugates of relators.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConjugateFactor {
    pub conjugator: Word,
    pub relator: usize,
    pub exponent: i64,
}

/// Evaluates `∏ u_k r_{i_k}^{ε_k} u_k⁻¹` in the free group.
pub fn product_of_conjugates(factors: &[ConjugateFactor], relators: &[Word]) -> Word {
    factors.iter().fold(Word::identity(), |acc, f| {
        let r = relators[f.relator].pow(f.exponent);
        &acc * &(&(&f.conjugator * &r) * &f.conjugator.inverse())
    })
}

/// Best-first search for `w = ∏ u_k r^{ε_k} u_k⁻¹` in the free group, applying
/// replacements of at least half a relator and allowing the word to grow by
/// at most `slack` letters per step.
pub fn find_identity(w: &Word, relators: &[Word], max_depth: usize, slack: usize) -> Option<Vec<ConjugateFactor>> {
    use std::cmp::Reverse;
    use std::collections::{BinaryHeap, HashMap};
    let rots = relator_rotations(relators);
    let mut seen: HashMap<Word, usize> = HashMap::from([(w.clone(), 0)]);
    let mut heap = BinaryHeap::new();
    let mut history: Vec<(usize, Option<usize>, ConjugateFactor)> = Vec::new();
    heap.push(Reverse((w.len(), 0usize, w.clone(), None::<usize>)));
    while let Some(Reverse((len, depth, v, hist))) = heap.pop() {
        if len == 0 {
            let mut factors = Vec::new();
            let mut at = hist;
            while let Some(k) = at {
                factors.push(history[k].2.clone());
                at = history[k].1;
            }
            factors.reverse();
            return Some(factors);
        }
        if depth >= max_depth {
            continue;
        }
        for (rel, eps, c, rot) in &rots {
            let l = rot.len();
            for plen in l / 2..=l {
                let p = &rot[..plen];
                let s = Word::reduce(rot[plen..].iter().copied());
                let letters = v.letters();
                if plen > letters.len() {
                    break;
                }
                for i in 0..=letters.len() - plen {
                    if &letters[i..i + plen] != p {
                        continue;
                    }
                    let a = Word::reduce(letters[..i].iter().copied());
                    let next = Word::reduce(
                        letters[..i].iter().chain(s.inverse().letters()).chain(&letters[i + plen..]).copied(),
                    );
                    if next.len() > len + slack || seen.get(&next).is_some_and(|&d| d <= depth + 1) {
                        continue;
                    }
                    seen.insert(next.clone(), depth + 1);
                    // A P B = (A R A⁻¹)(A S⁻¹ B) and A R A⁻¹ = (A c⁻¹) r^ε (A c⁻¹)⁻¹
                    let factor = ConjugateFactor { conjugator: &a * &c.inverse(), relator: *rel, exponent: *eps };
                    history.push((history.len(), hist, factor));
                    heap.push(Reverse((next.len(), depth + 1, next, Some(history.len() - 1))));
                }
            }
        }
    }
    None
}

/// Fox derivative `∂w/∂x_j`, from `∂(uv) = ∂u + u·∂v`.
pub fn fox_derivative(w: &Word, j: usize) -> GroupRingElement {
    let mut out = GroupRingElement::zero();
    let mut prefix: Vec<Letter> = Vec::new();
    for &l in w.letters() {
        if l.gen == j {
            if l.exp > 0 {
                out.add_term(Word::reduce(prefix.iter().copied()), 1);
            } else {
                out.add_term(Word::reduce(prefix.iter().copied().chain([l])), -1);
            }
        }
        prefix.push(l);
    }
    out
}

/// Result of the integer Smith normal form `U·M·V = D`.
#[derive(Clone, Debug, PartialEq)]
pub struct SmithForm {
    /// Nonzero diagonal entries `d_1 | d_2 | …`, all positive.
    pub diagonal: Vec<i64>,
    pub u: Vec<Vec<i64>>,
    pub v: Vec<Vec<i64>>,
}

impl SmithForm {
    pub fn rank(&self) -> usize {
        self.diagonal.len()
    }

    /// Divisors larger than one.
    pub fn torsion(&self) -> Vec<i64> {
        self.diagonal.iter().copied().filter(|&d| d > 1).collect()
    }
}

fn identity_i64(n: usize) -> Vec<Vec<i64>> {
    (0..n).map(|i| (0..n).map(|j| (i == j) as i64).collect()).collect()
}

/// Smith normal form with naive pivoting on the smallest nonzero entry.
pub fn smith_normal_form(m: &[Vec<i64>], cols: usize) -> SmithForm {
    let rows = m.len();
    let mut a: Vec<Vec<i64>> = m.to_vec();
    let mut u = identity_i64(rows);
    let mut v = identity_i64(cols);
    let mut diagonal = Vec::new();
    let row_op = |a: &mut Vec<Vec<i64>>, u: &mut Vec<Vec<i64>>, dst: usize, src: usize, k: i64| {
        for j in 0..a[0].len() {
            a[dst][j] -= k * a[src][j];
        }
        for j in 0..u[0].len() {
            u[dst][j] -= k * u[src][j];
        }
    };
    let col_op = |a: &mut Vec<Vec<i64>>, v: &mut Vec<Vec<i64>>, dst: usize, src: usize, k: i64| {
        for row in a.iter_mut() {
            row[dst] -= k * row[src];
        }
        for row in v.iter_mut() {
            row[dst] -= k * row[src];
        }
    };
    for t in 0..rows.min(cols) {
        loop {
            let mut best: Option<(usize, usize)> = None;
            for i in t..rows {
                for j in t..cols {
                    if a[i][j] != 0 && best.map_or(true, |(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((pi, pj)) = best else {
                return SmithForm { diagonal, u, v };
            };
            a.swap(t, pi);
            u.swap(t, pi);
            for row in a.iter_mut() {
                row.swap(t, pj);
            }
            for row in v.iter_mut() {
                row.swap(t, pj);
            }
            let p = a[t][t];
            let mut clean = true;
            for i in t + 1..rows {
                let k = a[i][t].div_euclid(p);
                row_op(&mut a, &mut u, i, t, k);
                clean &= a[i][t] == 0;
            }
            for j in t + 1..cols {
                let k = a[t][j].div_euclid(p);
                col_op(&mut a, &mut v, j, t, k);
                clean &= a[t][j] == 0;
            }
            if !clean {
                continue;
            }
            // divisibility: fold a non-divisible row into row t and retry
            let bad = (t + 1..rows).find(|&i| (t + 1..cols).any(|j| a[i][j] % p != 0));
            if let Some(i) = bad {
                row_op(&mut a, &mut u, t, i, -1);
                continue;
            }
            if p < 0 {
                for j in 0..cols {
                    a[t][j] = -a[t][j];
                }
                for x in u[t].iter_mut() {
                    *x = -*x;
                }
            }
            diagonal.push(a[t][t]);
            break;
        }
    }
    SmithForm { diagonal, u, v }
}

/// `α: π → ⟨t⟩` recorded by the exponent of `t` on each generator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AbelianizationMap {
    pub exponents: Vec<i64>,
    pub torsion: Vec<i64>,
}

impl AbelianizationMap {
    pub fn apply(&self, w: &Word) -> i64 {
        w.letters().iter().map(|l| self.exponents[l.gen] * l.exp as i64).sum()
    }

    /// `(−1)^α(w)`, the central character used by the involution.
    pub fn parity_sign(&self, w: &Word) -> f64 {
        if self.apply(w).rem_euclid(2) == 0 {
            1.0
        } else {
            -1.0
        }
    }
}

/// Abelianization of a presentation with peripheral data, normalized so `α(μ) = t`.
pub fn abelianize(p: &GroupPresentation) -> Result<AbelianizationMap, AlgebraError> {
    let mu = &p.peripheral()?.mu;
    let m = p.generator_count();
    let rows: Vec<Vec<i64>> = p.relators.iter().map(|r| r.exponent_sums(m)).collect();
    let snf = if rows.is_empty() {
        SmithForm { diagonal: vec![], u: vec![], v: identity_i64(m) }
    } else {
        smith_normal_form(&rows, m)
    };
    let rank = m - snf.rank();
    if rank != 1 {
        return Err(AlgebraError::FreeRankNotOne { rank });
    }
    let mut exponents: Vec<i64> = (0..m).map(|j| snf.v[j][m - 1]).collect();
    let image = mu.exponent_sums(m).iter().zip(&exponents).map(|(a, b)| a * b).sum::<i64>();
    match image {
        1 => {}
        -1 => exponents.iter_mut().for_each(|e| *e = -*e),
        exponent => return Err(AlgebraError::MeridianNotGenerator { exponent }),
    }
    Ok(AbelianizationMap { exponents, torsion: snf.torsion() })
}

/// Evaluates under `α ⊗ ρ` (or `α` alone when `rho` is `None`) as a Laurent matrix.
pub fn evaluate(g: &GroupRingElement, rho: Option<&[Su2]>, alpha: Option<&AbelianizationMap>) -> LaurentMatrix {
    let n = if rho.is_some() { 2 } else { 1 };
    let mut out = LaurentMatrix::zeros(n, n);
    for (w, c) in g.terms() {
        let k = alpha.map_or(0, |a| a.apply(w));
        let m = match rho {
            Some(images) => {
                let m2 = w.eval_su2(images).to_matrix();
                DMatrix::from_fn(2, 2, |i, j| m2[(i, j)])
            }
            None => DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0)),
        };
        let term = LaurentMatrix::from_constant(k, &(m * Complex64::new(c as f64, 0.0)));
        out = &out + &term;
    }
    out
}

/// Convenience: `α(w)` as a Laurent monomial.
pub fn alpha_monomial(alpha: &AbelianizationMap, w: &Word) -> LaurentPoly {
    LaurentPoly::monomial(alpha.apply(w), Complex64::new(1.0, 0.0))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn names() -> Vec<String> {
        vec!["x".into(), "y".into()]
    }

    fn random_word(rng: &mut ChaCha8Rng, gens: usize, len: usize) -> Word {
        Word::reduce((0..len).map(|_| Letter::new(rng.gen_range(0..gens), if rng.gen_bool(0.5) { 1 } else { -1 })))
    }

    fn random_element(rng: &mut ChaCha8Rng) -> GroupRingElement {
        GroupRingElement::from_terms((0..3).map(|_| (random_word(rng, 2, 4), rng.gen_range(-3..=3))))
    }

    #[test]
    fn free_reduction() {
        let n = names();
        assert!(Word::parse("x x^-1", &n).unwrap().is_empty());
        assert_eq!(Word::parse("x y y^-1 x", &n).unwrap(), Word::parse("x^2", &n).unwrap());
        let w = Word::parse("x y^-1 y x^-1 y", &n).unwrap();
        assert_eq!(Word::reduce(w.letters().iter().copied()), w);
    }

    #[test]
    fn figure_eight_relator_from_commutator() {
        // [a, b] = a⁻¹ b⁻¹ a b; relator r = [x⁻¹, y] x (y [x⁻¹, y])⁻¹
        let n = names();
        let (x, y) = (Word::generator(0), Word::generator(1));
        let comm = |a: &Word, b: &Word| &(&(&a.inverse() * &b.inverse()) * a) * b;
        let w = comm(&x.inverse(), &y);
        let r = &(&w * &x) * &(&y * &w).inverse();
        assert_eq!(r.len(), 10);
        assert_eq!(r.display(&n), "x y^-1 x^-1 y x y^-1 x y x^-1 y^-1");
        assert_eq!(GroupPresentation::figure_eight().relators[0], r);
    }

    #[test]
    fn fox_defining_rules() {
        let n = names();
        let x = Word::generator(0);
        assert_eq!(fox_derivative(&x, 0), GroupRingElement::one());
        assert_eq!(fox_derivative(&x.inverse(), 0), GroupRingElement::from_word(x.inverse()).scale(-1));
        let xy = Word::parse("x y", &n).unwrap();
        assert_eq!(fox_derivative(&xy, 1), GroupRingElement::from_word(x));
    }

    #[test]
    fn fox_derivatives_of_figure_eight_relator() {
        // hand application of the product rule, letter by letter
        let n = names();
        let r = &GroupPresentation::figure_eight().relators[0];
        let dx = GroupRingElement::parse(
            "1 - x y^-1 x^-1 + x y^-1 x^-1 y + x y^-1 x^-1 y x y^-1 - x y^-1 x^-1 y x y^-1 x y x^-1",
            &n,
        )
        .unwrap();
        let dy = GroupRingElement::parse(
            "-x y^-1 + x y^-1 x^-1 - x y^-1 x^-1 y x y^-1 + x y^-1 x^-1 y x y^-1 x - x y^-1 x^-1 y x y^-1 x y x^-1 y^-1",
            &n,
        )
        .unwrap();
        assert_eq!(fox_derivative(r, 0), dx);
        assert_eq!(fox_derivative(r, 1), dy);
    }

    #[test]
    fn fox_fundamental_identity_symbolic() {
        let p = GroupPresentation::figure_eight();
        for r in &p.relators {
            let mut sum = GroupRingElement::zero();
            for j in 0..2 {
                let xj = &GroupRingElement::from_word(Word::generator(j)) - &GroupRingElement::one();
                sum = &sum + &(&fox_derivative(r, j) * &xj);
            }
            let expected = &GroupRingElement::from_word(r.clone()) - &GroupRingElement::one();
            assert_eq!(sum, expected);
        }
    }

    #[test]
    fn fox_fundamental_identity_numeric() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let p = GroupPresentation::figure_eight();
        let r = &p.relators[0];
        for _ in 0..20 {
            let imgs = [Su2::random(&mut rng), Su2::random(&mut rng)];
            let mut lhs = Matrix2::zeros();
            for j in 0..2 {
                let xj = &GroupRingElement::from_word(Word::generator(j)) - &GroupRingElement::one();
                lhs += (&fox_derivative(r, j) * &xj).su2_matrix(&imgs);
            }
            let rhs = r.eval_su2(&imgs).to_matrix() - Matrix2::identity();
            assert!((lhs - rhs).norm() < 1e-12);
        }
    }

    #[test]
    fn fox_product_rule_random_words() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..100 {
            let (u, v) = (random_word(&mut rng, 3, 8), random_word(&mut rng, 3, 8));
            for j in 0..3 {
                let lhs = fox_derivative(&(&u * &v), j);
                let rhs = &fox_derivative(&u, j) + &fox_derivative(&v, j).left_mul(&u);
                assert_eq!(lhs, rhs);
            }
        }
    }

    #[test]
    fn ring_axioms_random() {
        let mut rng = ChaCha8Rng::seed_from_u64(13);
        for _ in 0..30 {
            let (a, b, c) = (random_element(&mut rng), random_element(&mut rng), random_element(&mut rng));
            assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
            assert_eq!(&(&a + &b) * &c, &(&a * &c) + &(&b * &c));
        }
    }

    #[test]
    fn evaluate_is_multiplicative() {
        let mut rng = ChaCha8Rng::seed_from_u64(14);
        let alpha = AbelianizationMap { exponents: vec![1, 1], torsion: vec![] };
        for _ in 0..20 {
            let imgs = [Su2::random(&mut rng), Su2::random(&mut rng)];
            let (g, h) = (random_element(&mut rng), random_element(&mut rng));
            let lhs = evaluate(&(&g * &h), Some(&imgs), Some(&alpha));
            let rhs = &evaluate(&g, Some(&imgs), Some(&alpha)) * &evaluate(&h, Some(&imgs), Some(&alpha));
            for i in 0..2 {
                for j in 0..2 {
                    assert!(lhs[(i, j)].max_distance(&rhs[(i, j)]) < 1e-10);
                }
            }
        }
    }

    #[test]
    fn evaluate_basic() {
        let imgs = [Su2::from_axis_angle(0.4, crate::su2::Su2Vector::E3), Su2::IDENTITY];
        let alpha = AbelianizationMap { exponents: vec![1, 1], torsion: vec![] };
        let one = evaluate(&GroupRingElement::one(), Some(&imgs), Some(&alpha));
        assert_eq!(one, LaurentMatrix::identity(2));
        let x = evaluate(&GroupRingElement::from_word(Word::generator(0)), Some(&imgs), Some(&alpha));
        let m = imgs[0].to_matrix();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(x[(i, j)], LaurentPoly::monomial(1, m[(i, j)]));
            }
        }
    }

    #[test]
    fn abelianize_figure_eight() {
        let a = abelianize(&GroupPresentation::figure_eight()).unwrap();
        assert_eq!(a.exponents, vec![1, 1]);
        assert!(a.torsion.is_empty());
        for r in &GroupPresentation::figure_eight().relators {
            assert_eq!(a.apply(r), 0);
        }
    }

    #[test]
    fn abelianize_free_group_on_one_generator() {
        let p = GroupPresentation::parse(&["x"], &[], Some(("1", "x"))).unwrap();
        assert_eq!(abelianize(&p).unwrap().exponents, vec![1]);
    }

    #[test]
    fn abelianize_with_torsion() {
        let p = GroupPresentation::parse(&["x", "y"], &["x^2 y^-2"], Some(("1", "x"))).unwrap();
        let a = abelianize(&p).unwrap();
        assert_eq!(a.exponents, vec![1, 1]);
        assert_eq!(a.torsion, vec![2]);
    }

    #[test]
    fn abelianize_rejects_wrong_rank() {
        let p = GroupPresentation::parse(&["x", "y"], &[], Some(("1", "x"))).unwrap();
        assert_eq!(abelianize(&p), Err(AlgebraError::FreeRankNotOne { rank: 2 }));
        let q = GroupPresentation::parse(&["x", "y"], &["x y^-2"], Some(("1", "x"))).unwrap();
        assert_eq!(abelianize(&q), Err(AlgebraError::MeridianNotGenerator { exponent: 2 }));
    }

    /// Invariant factors from gcds of k×k minors, independent of elimination.
    fn determinantal_divisors(m: &[Vec<i64>], cols: usize) -> Vec<i64> {
        fn det(m: &[Vec<i64>]) -> i64 {
            let n = m.len();
            if n == 0 {
                return 1;
            }
            (0..n)
                .map(|j| {
                    let minor: Vec<Vec<i64>> =
                        m[1..].iter().map(|r| r.iter().enumerate().filter(|&(k, _)| k != j).map(|(_, &x)| x).collect()).collect();
                    let s = if j % 2 == 0 { 1 } else { -1 };
                    s * m[0][j] * det(&minor)
                })
                .sum()
        }
        fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
            if k == 0 {
                return vec![vec![]];
            }
            if n < k {
                return vec![];
            }
            let mut out = subsets(n - 1, k);
            for mut s in subsets(n - 1, k - 1) {
                s.push(n - 1);
                out.push(s);
            }
            out
        }
        fn gcd(a: i64, b: i64) -> i64 {
            if b == 0 {
                a.abs()
            } else {
                gcd(b, a % b)
            }
        }
        let mut prev = 1;
        let mut out = Vec::new();
        for k in 1..=m.len().min(cols) {
            let mut g = 0;
            for rs in subsets(m.len(), k) {
                for cs in subsets(cols, k) {
                    let sub: Vec<Vec<i64>> = rs.iter().map(|&i| cs.iter().map(|&j| m[i][j]).collect()).collect();
                    g = gcd(g, det(&sub));
                }
            }
            if g == 0 {
                break;
            }
            out.push(g / prev);
            prev = g;
        }
        out
    }

    #[test]
    fn smith_form_matches_minor_oracle() {
        let mut rng = ChaCha8Rng::seed_from_u64(15);
        let fixed = vec![vec![2, -2]];
        assert_eq!(smith_normal_form(&fixed, 2).diagonal, vec![2]);
        for _ in 0..40 {
            let rows = rng.gen_range(1..4);
            let cols = rng.gen_range(1..4);
            let m: Vec<Vec<i64>> = (0..rows).map(|_| (0..cols).map(|_| rng.gen_range(-6..=6)).collect()).collect();
            let snf = smith_normal_form(&m, cols);
            assert_eq!(snf.diagonal, determinantal_divisors(&m, cols), "{m:?}");
            // U·M·V is diagonal
            for i in 0..rows {
                for j in 0..cols {
                    let mut s = 0;
                    for a in 0..rows {
                        for b in 0..cols {
                            s += snf.u[i][a] * m[a][b] * snf.v[b][j];
                        }
                    }
                    let want = if i == j && i < snf.diagonal.len() { snf.diagonal[i] } else { 0 };
                    assert_eq!(s, want);
                }
            }
        }
    }

    #[test]
    fn group_ring_text_format() {
        let n = names();
        let e = GroupRingElement::parse("-1 + x - 2*x y^-1 + 3", &n).unwrap();
        assert_eq!(e.augmentation(), 1);
        let back = GroupRingElement::parse(&e.display(&n), &n).unwrap();
        assert_eq!(back, e);
        assert!(GroupRingElement::parse("2 x", &n).is_err());
        assert!(Word::parse("z", &n).is_err());
        assert!(Word::parse("x^0", &n).is_err());
    }

    #[test]
    fn dehn_reduction_kills_conjugated_relators() {
        let p = GroupPresentation::figure_eight();
        let r = &p.relators[0];
        let u = p.word("y x^2").unwrap();
        let w = &(&u * r) * &u.inverse();
        assert!(dehn_reduce(&w, &p.relators).is_empty());
        assert!(!dehn_reduce(&p.word("x y").unwrap(), &p.relators).is_empty());
        let z = &GroupRingElement::from_word(w) - &GroupRingElement::one();
        assert!(certify_zero(&z, &p.relators));
        assert!(!certify_zero(&GroupRingElement::from_word(Word::generator(0)), &p.relators));
    }

    #[test]
    fn identity_for_peripheral_commutator() {
        let p = GroupPresentation::figure_eight();
        let per = p.peripheral().unwrap();
        let comm = &(&(&per.lambda * &per.mu) * &per.lambda.inverse()) * &per.mu.inverse();
        let factors = find_identity(&comm, &p.relators, 8, 2).expect("identity exists");
        assert_eq!(product_of_conjugates(&factors, &p.relators), comm);
    }

    proptest::proptest! {
        #[test]
        fn reduce_is_idempotent(letters in proptest::collection::vec((0usize..3, proptest::bool::ANY), 0..30)) {
            let w = Word::reduce(letters.iter().map(|&(g, s)| Letter::new(g, if s { 1 } else { -1 })));
            let again = Word::reduce(w.letters().iter().copied());
            proptest::prop_assert_eq!(&again, &w);
            for pair in w.letters().windows(2) {
                proptest::prop_assert!(pair[0] != pair[1].inverse());
            }
        }
    }
}

#[cfg(test)]
pub(crate) mod tests_support {
    use crate::su2::{Su2, Su2Vector};

    /// A figure-eight representation off the metabelian locus, gauge `(θ, φ) = (1.3, φ*)`.
    pub fn figure_eight_point() -> [Su2; 2] {
        let (theta, phi): (f64, f64) = (1.3, 1.344_217_650_720_486_4);
        [
            Su2::from_axis_angle(theta, Su2Vector::E3),
            Su2::from_axis_angle(theta, Su2Vector::new(phi.sin(), 0.0, phi.cos())),
        ]
    }
}
