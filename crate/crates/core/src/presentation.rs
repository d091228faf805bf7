//! Finitely presented groups: words, free reduction and a bounded Tietze
//! simplifier that records how every eliminated generator is expressed in
//! the survivors.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn gen(gen: usize) -> Self {
        Letter { gen, inverse: false }
    }

    pub fn inv(gen: usize) -> Self {
        Letter { gen, inverse: true }
    }

    pub fn inverted(self) -> Self {
        Letter { gen: self.gen, inverse: !self.inverse }
    }

    /// Parses the signed, 1-based encoding used in input files: `k` is
    /// generator `k-1`, `-k` its inverse.
    pub fn from_signed(code: i64) -> Result<Self> {
        match code {
            0 => Err(Error::Parse("letter code 0 is not allowed; generators are 1-based".into())),
            k if k > 0 => Ok(Letter::gen((k - 1) as usize)),
            k => Ok(Letter::inv((-k - 1) as usize)),
        }
    }

    pub fn to_signed(self) -> i64 {
        let k = self.gen as i64 + 1;
        if self.inverse {
            -k
        } else {
            k
        }
    }
}

pub type Word = Vec<Letter>;

pub fn word_from_signed(codes: &[i64]) -> Result<Word> {
    codes.iter().map(|&c| Letter::from_signed(c)).collect()
}

pub fn word_to_signed(word: &[Letter]) -> Vec<i64> {
    word.iter().map(|l| l.to_signed()).collect()
}

pub fn inverse_word(word: &[Letter]) -> Word {
    word.iter().rev().map(|l| l.inverted()).collect()
}

/// Cancels adjacent `x x⁻¹` pairs.
pub fn free_reduce(word: &[Letter]) -> Word {
    let mut out: Word = Vec::with_capacity(word.len());
    for &l in word {
        if out.last() == Some(&l.inverted()) {
            out.pop();
        } else {
            out.push(l);
        }
    }
    out
}

/// Free reduction followed by cancellation between the two ends.
pub fn cyclic_reduce(word: &[Letter]) -> Word {
    let w = free_reduce(word);
    let mut lo = 0;
    let mut hi = w.len();
    while hi - lo >= 2 && w[lo] == w[hi - 1].inverted() {
        lo += 1;
        hi -= 1;
    }
    w[lo..hi].to_vec()
}

/// Canonical representative of a cyclically reduced relator up to rotation
/// and inversion.
fn canonical_relator(word: &[Letter]) -> Word {
    let inv = inverse_word(word);
    let mut best: Option<Word> = None;
    for w in [word, inv.as_slice()] {
        for k in 0..w.len() {
            let rotated: Word = w[k..].iter().chain(&w[..k]).copied().collect();
            if best.as_ref().is_none_or(|b| rotated < *b) {
                best = Some(rotated);
            }
        }
    }
    best.unwrap_or_default()
}

fn format_word(word: &[Letter], f: &mut fmt::Formatter<'_>) -> fmt::Result {
    if word.is_empty() {
        return write!(f, "1");
    }
    for (i, l) in word.iter().enumerate() {
        if i > 0 {
            write!(f, " ")?;
        }
        if l.inverse {
            write!(f, "g{}^-1", l.gen)?;
        } else {
            write!(f, "g{}", l.gen)?;
        }
    }
    Ok(())
}

/// Display adapter for words.
pub struct DisplayWord<'a>(pub &'a [Letter]);

impl fmt::Display for DisplayWord<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        format_word(self.0, f)
    }
}

/// A finite group presentation `⟨g_0, …, g_{n-1} | relators⟩`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Presentation {
    generators: usize,
    relators: Vec<Word>,
}

impl Presentation {
    pub fn new(generators: usize, relators: Vec<Word>) -> Result<Self> {
        for r in &relators {
            if let Some(l) = r.iter().find(|l| l.gen >= generators) {
                return Err(Error::UnknownGenerator(l.gen));
            }
        }
        Ok(Presentation { generators, relators })
    }

    /// Free group of the given rank.
    pub fn free(generators: usize) -> Self {
        Presentation { generators, relators: Vec::new() }
    }

    pub fn generator_count(&self) -> usize {
        self.generators
    }

    pub fn relators(&self) -> &[Word] {
        &self.relators
    }

    pub fn check_word(&self, word: &[Letter]) -> Result<()> {
        match word.iter().find(|l| l.gen >= self.generators) {
            Some(l) => Err(Error::UnknownGenerator(l.gen)),
            None => Ok(()),
        }
    }

    /// Rank of the abelianization's free part: generators minus the rank of
    /// the relator exponent-sum matrix over the rationals.
    pub fn abelian_rank(&self) -> usize {
        let n = self.generators;
        let mut rows: Vec<Vec<f64>> = self
            .relators
            .iter()
            .map(|r| {
                let mut row = vec![0.0; n];
                for l in r {
                    row[l.gen] += if l.inverse { -1.0 } else { 1.0 };
                }
                row
            })
            .collect();
        let mut rank = 0;
        for col in 0..n {
            let Some(pivot) = (rank..rows.len()).max_by(|&a, &b| rows[a][col].abs().total_cmp(&rows[b][col].abs())) else {
                break;
            };
            if rows[pivot][col].abs() < 1e-9 {
                continue;
            }
            rows.swap(rank, pivot);
            let p = rows[rank].clone();
            for row in rows.iter_mut().skip(rank + 1) {
                let factor = row[col] / p[col];
                if factor != 0.0 {
                    for (x, y) in row.iter_mut().zip(&p) {
                        *x -= factor * y;
                    }
                }
            }
            rank += 1;
        }
        n - rank
    }

    /// Runs [`simplify`] on this presentation.
    pub fn simplify(&self) -> Simplified {
        simplify(self.generators, &self.relators)
    }
}

impl fmt::Display for Presentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "< ")?;
        for g in 0..self.generators {
            if g > 0 {
                write!(f, ", ")?;
            }
            write!(f, "g{g}")?;
        }
        write!(f, " | ")?;
        for (i, r) in self.relators.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            format_word(r, f)?;
        }
        write!(f, " >")
    }
}

/// Output of [`simplify`].
#[derive(Clone, Debug)]
pub struct Simplified {
    /// Reduced presentation on the surviving generators, renumbered from 0.
    pub presentation: Presentation,
    /// Original index of each surviving generator.
    pub survivors: Vec<usize>,
    /// Every original generator written as a word in the surviving generators.
    pub rewriting: Vec<Word>,
}

impl Simplified {
    /// Rewrites a word in the original generators into the reduced ones.
    pub fn rewrite(&self, word: &[Letter]) -> Result<Word> {
        let mut out = Vec::new();
        for l in word {
            let image = self
                .rewriting
                .get(l.gen)
                .ok_or_else(|| Error::WordNotReducible(format!("generator {} outside the elimination log", l.gen)))?;
            if l.inverse {
                out.extend(inverse_word(image));
            } else {
                out.extend(image.iter().copied());
            }
        }
        Ok(free_reduce(&out))
    }
}

/// Bounded Tietze simplification.
///
/// Repeatedly eliminates a generator `y` using a cyclically reduced relator
/// of length 1 (`y = 1`) or of length 2 in two distinct generators
/// (`y = x^{±1}`, always removing the higher-indexed one). Relators that
/// become trivial are dropped and duplicates up to rotation and inversion
/// are merged. No other moves are attempted.
pub fn simplify(generators: usize, relators: &[Word]) -> Simplified {
    let mut expr: Vec<Word> = (0..generators).map(|g| vec![Letter::gen(g)]).collect();
    let mut alive = vec![true; generators];
    let mut work: Vec<Word> = relators.to_vec();

    let rewrite = |expr: &[Word], word: &[Letter]| -> Word {
        let mut out = Vec::with_capacity(word.len());
        for l in word {
            if l.inverse {
                out.extend(inverse_word(&expr[l.gen]));
            } else {
                out.extend(expr[l.gen].iter().copied());
            }
        }
        cyclic_reduce(&out)
    };

    loop {
        let mut eliminated = false;
        for slot in work.iter_mut() {
            let r = rewrite(&expr, slot);
            let target = match r.as_slice() {
                [y] => Some((y.gen, Vec::new())),
                [a, b] if a.gen != b.gen => {
                    // a·b = 1: solve for the higher-indexed generator.
                    let (keep, drop) = if a.gen < b.gen { (*a, *b) } else { (*b, *a) };
                    let value = if drop.inverse { vec![keep] } else { vec![keep.inverted()] };
                    Some((drop.gen, value))
                }
                _ => None,
            };
            *slot = r;
            if let Some((y, value)) = target {
                alive[y] = false;
                for e in expr.iter_mut() {
                    if e.iter().any(|l| l.gen == y) {
                        let mut out = Vec::with_capacity(e.len());
                        for l in e.iter() {
                            if l.gen == y {
                                if l.inverse {
                                    out.extend(inverse_word(&value));
                                } else {
                                    out.extend(value.iter().copied());
                                }
                            } else {
                                out.push(*l);
                            }
                        }
                        *e = free_reduce(&out);
                    }
                }
                eliminated = true;
            }
        }
        if !eliminated {
            break;
        }
    }

    let survivors: Vec<usize> = (0..generators).filter(|&g| alive[g]).collect();
    let mut renumber = vec![usize::MAX; generators];
    for (new, &old) in survivors.iter().enumerate() {
        renumber[old] = new;
    }
    let renumbered = |w: &[Letter]| -> Word { w.iter().map(|l| Letter { gen: renumber[l.gen], inverse: l.inverse }).collect() };

    let mut seen = BTreeSet::new();
    let mut reduced = Vec::new();
    for r in &work {
        let r = rewrite(&expr, r);
        if r.is_empty() {
            continue;
        }
        let r = renumbered(&r);
        if seen.insert(canonical_relator(&r)) {
            reduced.push(r);
        }
    }
    let rewriting = expr.iter().map(|e| renumbered(e)).collect();
    Simplified { presentation: Presentation { generators: survivors.len(), relators: reduced }, survivors, rewriting }
}
