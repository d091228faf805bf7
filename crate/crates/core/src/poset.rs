//! Finite posets, their low-dimensional simplicial sets, paths, path frames
//! and a finite presentation of the fundamental group.
//!
//! A 1-simplex `b = (∂0b, ∂1b; |b|)` is a line from `∂1b` to `∂0b` through
//! the support `|b|`. A 2-simplex has faces `∂0c, ∂1c, ∂2c` with
//! `∂0∂0c = ∂0∂1c`, `∂1∂0c = ∂0∂2c`, `∂1∂1c = ∂1∂2c`, so that any flat
//! connection satisfies `z(∂0c)·z(∂2c) = z(∂1c)`.

use std::collections::{HashMap, VecDeque};
use std::fmt;

use crate::error::{Error, Result};
use crate::presentation::{self, inverse_word, Letter, Presentation, Word};

/// Index of an element inside its [`Poset`].
pub type Element = usize;

/// A finite, pathwise connected partially ordered set.
///
/// Elements are stored sorted by identifier, so element indices follow the
/// lexicographic order of the identifiers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poset {
    names: Vec<String>,
    index: HashMap<String, Element>,
    leq: Vec<Vec<bool>>,
}

impl Poset {
    /// Reflexive-transitive closure of the cover pairs `(x, y)` meaning `x ≤ y`.
    pub fn close_order<S: AsRef<str>>(elements: &[S], cover_pairs: &[(S, S)]) -> Result<Poset> {
        if elements.is_empty() {
            return Err(Error::EmptyPoset);
        }
        let mut names: Vec<String> = elements.iter().map(|e| e.as_ref().to_string()).collect();
        names.sort();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::DuplicateElement(w[0].clone()));
        }
        let index: HashMap<String, Element> = names.iter().enumerate().map(|(i, n)| (n.clone(), i)).collect();
        let n = names.len();
        let mut leq = vec![vec![false; n]; n];
        for (i, row) in leq.iter_mut().enumerate() {
            row[i] = true;
        }
        for (x, y) in cover_pairs {
            let lookup = |s: &S| index.get(s.as_ref()).copied().ok_or_else(|| Error::UnknownElement(s.as_ref().to_string()));
            leq[lookup(x)?][lookup(y)?] = true;
        }
        for k in 0..n {
            for i in 0..n {
                if leq[i][k] {
                    let row = leq[k].clone();
                    for (target, &above) in leq[i].iter_mut().zip(&row) {
                        *target |= above;
                    }
                }
            }
        }
        for i in 0..n {
            for j in (i + 1)..n {
                if leq[i][j] && leq[j][i] {
                    return Err(Error::CycleDetected(names[i].clone(), names[j].clone()));
                }
            }
        }
        let poset = Poset { names, index, leq };
        let reach = poset.bfs_parents(0);
        if let Some(o) = (0..n).find(|&o| reach[o].is_none() && o != 0) {
            return Err(Error::Disconnected(poset.names[o].clone(), poset.names[0].clone()));
        }
        Ok(poset)
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn name(&self, e: Element) -> &str {
        &self.names[e]
    }

    pub fn element(&self, name: &str) -> Result<Element> {
        self.index.get(name).copied().ok_or_else(|| Error::UnknownElement(name.to_string()))
    }

    pub fn leq(&self, a: Element, b: Element) -> bool {
        self.leq[a][b]
    }

    pub fn comparable(&self, a: Element, b: Element) -> bool {
        self.leq[a][b] || self.leq[b][a]
    }

    /// All pairs `(a, b)` with `a ≤ b`, reflexive ones included.
    pub fn relation(&self) -> Vec<(Element, Element)> {
        let n = self.len();
        (0..n).flat_map(|a| (0..n).filter(move |&b| self.leq[a][b]).map(move |b| (a, b))).collect()
    }

    /// Elements below `s`, in index order.
    pub fn down_set(&self, s: Element) -> Vec<Element> {
        (0..self.len()).filter(|&x| self.leq[x][s]).collect()
    }

    /// An element above every other one, if present.
    pub fn maximum(&self) -> Option<Element> {
        (0..self.len()).find(|&m| (0..self.len()).all(|x| self.leq[x][m]))
    }

    /// BFS over the comparability graph; neighbours visited in identifier order.
    fn bfs_parents(&self, base: Element) -> Vec<Option<Element>> {
        let n = self.len();
        let mut parent = vec![None; n];
        let mut seen = vec![false; n];
        seen[base] = true;
        let mut queue = VecDeque::from([base]);
        while let Some(x) = queue.pop_front() {
            for y in 0..n {
                if !seen[y] && y != x && self.comparable(x, y) {
                    seen[y] = true;
                    parent[y] = Some(x);
                    queue.push_back(y);
                }
            }
        }
        parent
    }

    /// `Σ1`: all `(d0, d1; s)` with `d0, d1 ≤ s`, ordered by support, then `d0`, then `d1`.
    pub fn simplices1(&self) -> Vec<Simplex1> {
        let mut out = Vec::new();
        for s in 0..self.len() {
            let down = self.down_set(s);
            for &d0 in &down {
                for &d1 in &down {
                    out.push(Simplex1 { d0, d1, support: s });
                }
            }
        }
        out
    }

    /// `Σ2`: all face-compatible quadruples, ordered by support, face
    /// supports and then vertices.
    pub fn simplices2(&self) -> Vec<Simplex2> {
        let mut out = Vec::new();
        let n = self.len();
        let below = |a: Element, b: Element| -> Vec<Element> { (0..n).filter(|&x| self.leq[x][a] && self.leq[x][b]).collect() };
        for s in 0..n {
            let down = self.down_set(s);
            for &s0 in &down {
                for &s1 in &down {
                    let v0s = below(s0, s1);
                    for &s2 in &down {
                        let v1s = below(s0, s2);
                        let v2s = below(s1, s2);
                        for &v0 in &v0s {
                            for &v1 in &v1s {
                                for &v2 in &v2s {
                                    out.push(Simplex2 {
                                        faces: [
                                            Simplex1 { d0: v0, d1: v1, support: s0 },
                                            Simplex1 { d0: v0, d1: v2, support: s1 },
                                            Simplex1 { d0: v1, d1: v2, support: s2 },
                                        ],
                                        support: s,
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
        out
    }

    /// Breadth-first path frame at `base`: every route runs along the BFS
    /// tree using the simplices `(o', o; o')`, `o ≤ o'`, or their reverses.
    pub fn path_frame(&self, base: Element) -> PathFrame {
        let parent = self.bfs_parents(base);
        let mut order = vec![base];
        let mut i = 0;
        while i < order.len() {
            let x = order[i];
            i += 1;
            order.extend((0..self.len()).filter(|&y| parent[y] == Some(x)));
        }
        let mut routes: Vec<Option<Path>> = vec![None; self.len()];
        routes[base] = Some(Path::empty(base));
        for &o in order.iter().skip(1) {
            let p = parent[o].expect("poset is connected");
            let step = tree_step(self, o, p);
            let rest = routes[p].clone().expect("parents are routed first");
            let mut steps = vec![step];
            steps.extend(rest.steps);
            routes[o] = Some(Path { start: o, steps });
        }
        PathFrame { base, routes: routes.into_iter().map(|r| r.expect("every element is routed")).collect() }
    }
}

/// The step from `from` to the comparable element `to` along `(max, min; max)`.
fn tree_step(poset: &Poset, from: Element, to: Element) -> Step {
    if poset.leq(from, to) {
        Step { simplex: Simplex1 { d0: to, d1: from, support: to }, forward: true }
    } else {
        Step { simplex: Simplex1 { d0: from, d1: to, support: from }, forward: false }
    }
}

/// 1-simplex: a line from `d1` to `d0` inside `support`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex1 {
    pub d0: Element,
    pub d1: Element,
    pub support: Element,
}

impl Simplex1 {
    pub fn is_degenerate(&self) -> bool {
        self.d0 == self.d1 && self.d1 == self.support
    }

    /// `b̄`: the same support with the faces exchanged.
    pub fn reversed(&self) -> Simplex1 {
        Simplex1 { d0: self.d1, d1: self.d0, support: self.support }
    }

    pub fn is_valid_in(&self, poset: &Poset) -> bool {
        self.d0 < poset.len()
            && self.d1 < poset.len()
            && self.support < poset.len()
            && poset.leq(self.d0, self.support)
            && poset.leq(self.d1, self.support)
    }

    pub fn display<'a>(&self, poset: &'a Poset) -> impl fmt::Display + 'a {
        let b = *self;
        DisplaySimplex1 { b, poset }
    }
}

struct DisplaySimplex1<'a> {
    b: Simplex1,
    poset: &'a Poset,
}

impl fmt::Display for DisplaySimplex1<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{};{})", self.poset.name(self.b.d0), self.poset.name(self.b.d1), self.poset.name(self.b.support))
    }
}

/// 2-simplex with faces `[∂0c, ∂1c, ∂2c]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Simplex2 {
    pub faces: [Simplex1; 3],
    pub support: Element,
}

impl Simplex2 {
    /// Face compatibility and support conditions.
    pub fn is_valid_in(&self, poset: &Poset) -> bool {
        let [f0, f1, f2] = self.faces;
        self.faces.iter().all(|f| f.is_valid_in(poset) && poset.leq(f.support, self.support))
            && f0.d0 == f1.d0
            && f0.d1 == f2.d0
            && f1.d1 == f2.d1
    }

    /// Vertices `(∂00c, ∂10c, ∂11c)`.
    pub fn vertices(&self) -> (Element, Element, Element) {
        (self.faces[0].d0, self.faces[0].d1, self.faces[1].d1)
    }
}

/// One traversal of a 1-simplex. Forward goes `d1 → d0`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Step {
    pub simplex: Simplex1,
    pub forward: bool,
}

impl Step {
    pub fn forward(simplex: Simplex1) -> Self {
        Step { simplex, forward: true }
    }

    pub fn backward(simplex: Simplex1) -> Self {
        Step { simplex, forward: false }
    }

    pub fn source(&self) -> Element {
        if self.forward {
            self.simplex.d1
        } else {
            self.simplex.d0
        }
    }

    pub fn target(&self) -> Element {
        if self.forward {
            self.simplex.d0
        } else {
            self.simplex.d1
        }
    }

    pub fn flipped(&self) -> Step {
        Step { simplex: self.simplex, forward: !self.forward }
    }
}

/// A path, stored in traversal order: `steps[0]` is walked first.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    start: Element,
    steps: Vec<Step>,
}

impl Path {
    pub fn empty(at: Element) -> Self {
        Path { start: at, steps: Vec::new() }
    }

    pub fn single(step: Step) -> Self {
        Path { start: step.source(), steps: vec![step] }
    }

    /// Checks that consecutive steps are composable.
    pub fn new(start: Element, steps: Vec<Step>) -> Result<Self> {
        let mut at = start;
        for (i, s) in steps.iter().enumerate() {
            if s.source() != at {
                return Err(Error::NotComposable(format!("step {i} starts at element {} but the path is at {at}", s.source())));
            }
            at = s.target();
        }
        Ok(Path { start, steps })
    }

    pub fn start(&self) -> Element {
        self.start
    }

    pub fn end(&self) -> Element {
        self.steps.last().map_or(self.start, Step::target)
    }

    pub fn steps(&self) -> &[Step] {
        &self.steps
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    pub fn is_closed(&self) -> bool {
        self.start == self.end()
    }

    /// `self * first`: walk `first`, then `self`. Requires `first.end() == self.start()`.
    pub fn compose(&self, first: &Path) -> Result<Path> {
        if first.end() != self.start {
            return Err(Error::NotComposable(format!(
                "first path ends at element {} but the second starts at {}",
                first.end(),
                self.start
            )));
        }
        let mut steps = first.steps.clone();
        steps.extend(self.steps.iter().copied());
        Ok(Path { start: first.start, steps })
    }

    /// `γ⁻¹`.
    pub fn reverse(&self) -> Path {
        Path { start: self.end(), steps: self.steps.iter().rev().map(Step::flipped).collect() }
    }

    /// Elements met as faces or supports along the path.
    pub fn touched(&self) -> Vec<Element> {
        let mut out = vec![self.start];
        for s in &self.steps {
            out.extend([s.simplex.d0, s.simplex.d1, s.simplex.support]);
        }
        out.sort_unstable();
        out.dedup();
        out
    }
}

/// A route `γ_{ao}: o → a` for every element `o`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PathFrame {
    base: Element,
    routes: Vec<Path>,
}

impl PathFrame {
    pub fn base(&self) -> Element {
        self.base
    }

    pub fn route(&self, o: Element) -> &Path {
        &self.routes[o]
    }

    pub fn routes(&self) -> &[Path] {
        &self.routes
    }

    /// Simplices of the spanning tree (first step of every nonempty route).
    pub fn tree_simplices(&self) -> Vec<Simplex1> {
        self.routes.iter().filter_map(|r| r.steps.first().map(|s| s.simplex)).collect()
    }

    /// `γ_{a∂0b} * b * γ_{a∂1b}⁻¹`, a closed path at the base.
    pub fn loop_through(&self, b: Simplex1) -> Path {
        let mut steps = self.routes[b.d1].reverse().steps;
        steps.push(Step::forward(b));
        steps.extend(self.routes[b.d0].steps.iter().copied());
        Path { start: self.base, steps }
    }
}

/// A poset together with its enumerated `Σ1` and `Σ2`.
#[derive(Clone, Debug)]
pub struct Nerve {
    poset: Poset,
    simplices1: Vec<Simplex1>,
    index1: HashMap<Simplex1, usize>,
    simplices2: Vec<Simplex2>,
}

impl Nerve {
    pub fn new(poset: Poset) -> Self {
        let simplices1 = poset.simplices1();
        let index1 = simplices1.iter().enumerate().map(|(i, b)| (*b, i)).collect();
        let simplices2 = poset.simplices2();
        Nerve { poset, simplices1, index1, simplices2 }
    }

    pub fn poset(&self) -> &Poset {
        &self.poset
    }

    pub fn simplices1(&self) -> &[Simplex1] {
        &self.simplices1
    }

    pub fn simplices2(&self) -> &[Simplex2] {
        &self.simplices2
    }

    pub fn index_of(&self, b: &Simplex1) -> Option<usize> {
        self.index1.get(b).copied()
    }

    pub fn path_frame(&self, base: Element) -> PathFrame {
        self.poset.path_frame(base)
    }

    /// Presentation of `π1` at the frame's base, reduced by bounded Tietze moves.
    ///
    /// Generators are all 1-simplices; relators are `g_{∂0c} g_{∂2c} g_{∂1c}⁻¹`
    /// for every 2-simplex, `g_b` for degenerate `b`, and `g_b` for the
    /// spanning-tree simplices of `frame`.
    pub fn pi1_presentation(&self, frame: &PathFrame) -> Pi1Presentation {
        let idx = |b: &Simplex1| self.index1[b];
        let mut relators: Vec<Word> = Vec::with_capacity(self.simplices2.len() + self.simplices1.len());
        for b in self.simplices1.iter().filter(|b| b.is_degenerate()) {
            relators.push(vec![Letter::gen(idx(b))]);
        }
        let tree = frame.tree_simplices();
        for b in &tree {
            relators.push(vec![Letter::gen(idx(b))]);
        }
        for c in &self.simplices2 {
            let [f0, f1, f2] = c.faces;
            relators.push(vec![Letter::gen(idx(&f0)), Letter::gen(idx(&f2)), Letter::inv(idx(&f1))]);
        }
        let simplified = presentation::simplify(self.simplices1.len(), &relators);
        let generators = simplified.survivors.iter().map(|&i| self.simplices1[i]).collect();
        Pi1Presentation { base: frame.base(), generators, tree, presentation: simplified.presentation.clone(), simplified }
    }

    /// Word of a path in the reduced generators of `pres`, written in
    /// composition order: the last step is the leftmost factor.
    pub fn word_of_path(&self, pres: &Pi1Presentation, path: &Path) -> Result<Word> {
        let mut word = Vec::new();
        for s in path.steps().iter().rev() {
            let i = self
                .index_of(&s.simplex)
                .ok_or_else(|| Error::WordNotReducible(format!("{:?} is not a 1-simplex of the poset", s.simplex)))?;
            let image = pres
                .simplified
                .rewriting
                .get(i)
                .ok_or_else(|| Error::WordNotReducible(format!("simplex {i} outside the elimination log")))?;
            if s.forward {
                word.extend(image.iter().copied());
            } else {
                word.extend(inverse_word(image));
            }
        }
        Ok(presentation::free_reduce(&word))
    }

    /// `γ_{a∂0b} * b * γ_{a∂1b}⁻¹` for a surviving generator `b`.
    pub fn loop_of_generator(&self, pres: &Pi1Presentation, frame: &PathFrame, generator: usize) -> Result<Path> {
        let b = pres.generators.get(generator).ok_or(Error::UnknownGenerator(generator))?;
        Ok(frame.loop_through(*b))
    }
}

/// Finite presentation of `π1(K)` at a base point.
#[derive(Clone, Debug)]
pub struct Pi1Presentation {
    base: Element,
    generators: Vec<Simplex1>,
    tree: Vec<Simplex1>,
    presentation: Presentation,
    simplified: presentation::Simplified,
}

impl Pi1Presentation {
    pub fn base(&self) -> Element {
        self.base
    }

    /// The 1-simplex behind each reduced generator.
    pub fn generators(&self) -> &[Simplex1] {
        &self.generators
    }

    pub fn tree(&self) -> &[Simplex1] {
        &self.tree
    }

    pub fn presentation(&self) -> &Presentation {
        &self.presentation
    }

    pub fn generator_count(&self) -> usize {
        self.presentation.generator_count()
    }

    pub fn relators(&self) -> &[Word] {
        self.presentation.relators()
    }

    /// Word in the reduced generators for the 1-simplex with `Σ1` index `i`.
    pub fn simplex_word(&self, i: usize) -> &[Letter] {
        &self.simplified.rewriting[i]
    }
}
