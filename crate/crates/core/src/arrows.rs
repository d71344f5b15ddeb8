//! Partition arrows decided by exhaustive search over colorings.

use rayon::prelude::*;
use serde::Serialize;

use crate::category::{FiniteCategory, MorphismId, ObjectId};
use crate::error::{Error, Result};
use crate::search::{Budget, SearchConfig};
use crate::structures::Structure;

/// What gets colored: copies of `A` (classes of `hom(A, C)` up to `Aut(A)`) or embeddings.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Mode {
    Objects,
    Morphisms,
}

/// Colorings of `0..domain` judged by the colors they put on each block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ColoringProblem {
    pub domain: usize,
    /// One block per candidate `w`, as sorted distinct domain indices.
    pub blocks: Vec<Vec<usize>>,
    /// Domain permutations induced by automorphisms of the host.
    pub symmetries: Vec<Vec<usize>>,
}

/// How the domain and the candidates of a problem map back to morphisms.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProblemLayout {
    pub mode: Mode,
    /// Representative `A -> C` of every domain element.
    pub domain: Vec<MorphismId>,
    /// The candidate `w: B -> C` behind every block.
    pub candidates: Vec<MorphismId>,
}

impl ColoringProblem {
    /// The problem behind `c -> (b)^a`.
    pub fn arrow(
        cat: &FiniteCategory,
        c: ObjectId,
        b: ObjectId,
        a: ObjectId,
        mode: Mode,
    ) -> Result<(Self, ProblemLayout)> {
        let hom_ac = cat.hom(a, c);
        // Element index of every morphism `a -> c`, by position in the hom-set.
        let (index, domain): (Vec<usize>, Vec<MorphismId>) = match mode {
            Mode::Morphisms => ((0..hom_ac.len()).collect(), hom_ac.to_vec()),
            Mode::Objects => {
                let classes = cat.hom_classes(a, c);
                let mut index = vec![0; hom_ac.len()];
                for (i, k) in classes.iter().enumerate() {
                    for &m in &k.members {
                        index[cat.position(m)] = i;
                    }
                }
                (index, classes.iter().map(|k| k.representative).collect())
            }
        };
        let element = |m: MorphismId| index[cat.position(m)];
        let candidates = cat.hom(b, c).to_vec();
        let blocks = candidates
            .iter()
            .map(|&w| {
                let mut block: Vec<usize> = cat.hom(a, b).iter().map(|&f| element(cat.comp(w, f))).collect();
                block.sort_unstable();
                block.dedup();
                block
            })
            .collect();
        let symmetries = cat
            .automorphisms(c)
            .into_iter()
            .filter(|&g| g != cat.identity(c))
            .map(|g| domain.iter().map(|&m| element(cat.comp(g, m))).collect())
            .collect();
        Ok((
            ColoringProblem {
                domain: domain.len(),
                blocks,
                symmetries,
            },
            ProblemLayout {
                mode,
                domain,
                candidates,
            },
        ))
    }

    /// Number of distinct colors `colors` puts on a block.
    pub fn colors_on(&self, block: usize, colors: &[usize]) -> usize {
        let mut seen: Vec<usize> = self.blocks[block].iter().map(|&x| colors[x]).collect();
        seen.sort_unstable();
        seen.dedup();
        seen.len()
    }

    /// Whether every block sees more than `t` colors.
    pub fn refutes(&self, colors: &[usize], t: usize) -> bool {
        colors.len() == self.domain && (0..self.blocks.len()).all(|b| self.colors_on(b, colors) > t)
    }

    /// Least block with at most `t` colors.
    pub fn oligochromatic(&self, colors: &[usize], t: usize) -> Option<usize> {
        (0..self.blocks.len()).find(|&b| self.colors_on(b, colors) <= t)
    }

    fn membership(&self) -> Vec<Vec<usize>> {
        let mut of = vec![Vec::new(); self.domain];
        for (b, block) in self.blocks.iter().enumerate() {
            for &x in block {
                of[x].push(b);
            }
        }
        of
    }

    /// Numerically least coloring with colors below `k` putting more than `t`
    /// colors on every block; element 0 is the most significant digit.
    pub fn least_refuting(
        &self,
        k: usize,
        t: usize,
        cfg: &SearchConfig,
        budget: &Budget,
    ) -> Result<Option<Vec<usize>>> {
        let k = k.min(self.domain).max(1);
        let mut root = State::new(self, k, t, cfg.prune_symmetry);
        if root.blocked() {
            return Ok(None);
        }
        if cfg.jobs <= 1 || self.domain < 4 {
            return root.dfs(budget);
        }
        // Split the tree at a fixed depth and search the subtrees in order.
        let depth = prefix_depth(self.domain, k, cfg.jobs);
        let mut prefixes = Vec::new();
        root.collect_prefixes(depth, &mut prefixes, budget)?;
        let found = cfg.install(|| {
            prefixes.par_iter().find_map_first(|prefix| {
                let mut s = State::new(self, k, t, cfg.prune_symmetry);
                for &c in prefix {
                    s.assign(c);
                }
                match s.dfs(budget) {
                    Ok(Some(c)) => Some(Ok(c)),
                    Ok(None) => None,
                    Err(e) => Some(Err(e)),
                }
            })
        })?;
        found.transpose()
    }

    /// Largest value over all colorings of the least number of colors on a block,
    /// with the first coloring reaching it. Colors are unbounded.
    pub fn max_min_colors(&self, budget: &Budget) -> Result<(usize, Vec<usize>)> {
        if self.blocks.is_empty() {
            return Ok((0, vec![0; self.domain]));
        }
        let mut s = State::new(self, self.domain.max(1), 0, false);
        let mut best = (0usize, Vec::new());
        s.branch_and_bound(&mut best, budget)?;
        Ok(best)
    }
}

fn prefix_depth(domain: usize, k: usize, jobs: usize) -> usize {
    let target = (jobs * 8) as f64;
    let per_level = (k as f64).max(2.0);
    let depth = (target.ln() / per_level.ln()).ceil() as usize + 1;
    depth.clamp(1, domain - 1)
}

/// Incremental coloring state shared by both searches.
struct State<'a> {
    p: &'a ColoringProblem,
    k: usize,
    t: usize,
    prune: bool,
    member: Vec<Vec<usize>>,
    colors: Vec<usize>,
    /// `counts[b][c]`: elements of block `b` colored `c`.
    counts: Vec<Vec<u32>>,
    distinct: Vec<usize>,
    open: Vec<usize>,
    used: usize,
    used_stack: Vec<usize>,
}

impl<'a> State<'a> {
    fn new(p: &'a ColoringProblem, k: usize, t: usize, prune: bool) -> Self {
        State {
            p,
            k,
            t,
            prune: prune && !p.symmetries.is_empty(),
            member: p.membership(),
            colors: Vec::with_capacity(p.domain),
            counts: vec![vec![0; k.max(1)]; p.blocks.len()],
            distinct: vec![0; p.blocks.len()],
            open: p.blocks.iter().map(Vec::len).collect(),
            used: 0,
            used_stack: Vec::with_capacity(p.domain),
        }
    }

    /// Some block can no longer exceed `t` colors.
    fn blocked(&self) -> bool {
        self.distinct.iter().zip(&self.open).any(|(&d, &o)| d + o <= self.t)
    }

    fn assign(&mut self, c: usize) -> bool {
        let x = self.colors.len();
        self.colors.push(c);
        self.used_stack.push(self.used);
        self.used = self.used.max(c + 1);
        let mut ok = true;
        for &b in &self.member[x] {
            let slot = &mut self.counts[b][c];
            *slot += 1;
            if *slot == 1 {
                self.distinct[b] += 1;
            }
            self.open[b] -= 1;
            if self.distinct[b] + self.open[b] <= self.t {
                ok = false;
            }
        }
        ok
    }

    fn unassign(&mut self) {
        let x = self.colors.len() - 1;
        let c = self.colors.pop().unwrap();
        self.used = self.used_stack.pop().unwrap();
        for &b in &self.member[x] {
            let slot = &mut self.counts[b][c];
            *slot -= 1;
            if *slot == 0 {
                self.distinct[b] -= 1;
            }
            self.open[b] += 1;
        }
    }

    /// Colors tried at the next element, ascending.
    fn choices(&self) -> std::ops::Range<usize> {
        let x = self.colors.len();
        if self.member[x].is_empty() {
            // Elements in no block never matter; 0 keeps the coloring least.
            return 0..1;
        }
        0..(self.used + 1).min(self.k)
    }

    /// Whether some symmetry maps the current prefix to a smaller coloring.
    fn dominated(&self) -> bool {
        let m = self.colors.len();
        let mut relabel = vec![usize::MAX; self.k];
        'perms: for perm in &self.p.symmetries {
            relabel.iter_mut().for_each(|r| *r = usize::MAX);
            let mut next = 0;
            for i in 0..m {
                let j = perm[i];
                if j >= m {
                    continue 'perms;
                }
                let c = self.colors[j];
                if relabel[c] == usize::MAX {
                    relabel[c] = next;
                    next += 1;
                }
                let image = relabel[c];
                if image < self.colors[i] {
                    return true;
                }
                if image > self.colors[i] {
                    continue 'perms;
                }
            }
        }
        false
    }

    fn dfs(&mut self, budget: &Budget) -> Result<Option<Vec<usize>>> {
        if self.colors.len() == self.p.domain {
            return Ok(Some(self.colors.clone()));
        }
        for c in self.choices() {
            budget.tick()?;
            let ok = self.assign(c);
            if ok && !(self.prune && self.dominated()) {
                if let Some(found) = self.dfs(budget)? {
                    return Ok(Some(found));
                }
            }
            self.unassign();
        }
        Ok(None)
    }

    fn collect_prefixes(&mut self, depth: usize, out: &mut Vec<Vec<usize>>, budget: &Budget) -> Result<()> {
        if self.colors.len() == depth {
            out.push(self.colors.clone());
            return Ok(());
        }
        for c in self.choices() {
            budget.tick()?;
            let ok = self.assign(c);
            if ok && !(self.prune && self.dominated()) {
                self.collect_prefixes(depth, out, budget)?;
            }
            self.unassign();
        }
        Ok(())
    }

    /// Optimistic value: every open element of a block could take a fresh color.
    fn bound(&self) -> usize {
        self.distinct
            .iter()
            .zip(&self.open)
            .map(|(d, o)| d + o)
            .min()
            .unwrap_or(0)
    }

    fn branch_and_bound(&mut self, best: &mut (usize, Vec<usize>), budget: &Budget) -> Result<()> {
        if self.colors.len() == self.p.domain {
            let value = self.bound();
            if value > best.0 || best.1.is_empty() {
                *best = (value, self.colors.clone());
            }
            return Ok(());
        }
        // Fresh colors first: the injective coloring is reached immediately.
        for c in self.choices().rev() {
            budget.tick()?;
            self.assign(c);
            if self.bound() > best.0 || best.1.is_empty() {
                self.branch_and_bound(best, budget)?;
            }
            self.unassign();
        }
        Ok(())
    }
}

/// A coloring of the domain of an arrow problem.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Coloring {
    pub mode: Mode,
    /// Representative morphism of each colored element.
    pub domain: Vec<MorphismId>,
    pub colors: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ArrowResult {
    pub holds: bool,
    pub mode: Mode,
    pub k: usize,
    pub k_effective: usize,
    pub t: usize,
    pub domain_size: usize,
    pub candidates: usize,
    /// A coloring defeating every candidate, when the relation fails.
    pub certificate: Option<Coloring>,
    /// Which degenerate-case convention decided the verdict, if any.
    pub convention: Option<String>,
    /// Search nodes visited; depends on scheduling when run in parallel.
    #[serde(skip)]
    pub nodes: u64,
}

fn check_parameters(k: usize, t: usize) -> Result<()> {
    if k == 0 || t == 0 {
        return Err(Error::Invalid("k and t must be at least 1".into()));
    }
    Ok(())
}

/// Decides `c -> (b)^a_{k,t}` for copies or for embeddings of `a`.
#[allow(clippy::too_many_arguments)]
pub fn arrow(
    cat: &FiniteCategory,
    c: ObjectId,
    b: ObjectId,
    a: ObjectId,
    k: usize,
    t: usize,
    mode: Mode,
    cfg: &SearchConfig,
) -> Result<ArrowResult> {
    check_parameters(k, t)?;
    let (problem, layout) = ColoringProblem::arrow(cat, c, b, a, mode)?;
    let budget = Budget::new("coloring search nodes", cfg.guard);
    let found = problem.least_refuting(k, t, cfg, &budget)?;
    if let Some(colors) = &found {
        if !problem.refutes(colors, t) {
            return Err(Error::Internal("emitted coloring does not refute the arrow".into()));
        }
    }
    let convention = if problem.blocks.is_empty() {
        Some("no morphism B -> C exists, so the relation fails".to_string())
    } else if problem.domain == 0 {
        Some("A has no copies in C; the single empty coloring is defeated by any w".to_string())
    } else {
        None
    };
    Ok(ArrowResult {
        holds: found.is_none(),
        mode,
        k,
        k_effective: k.min(problem.domain).max(1),
        t,
        domain_size: problem.domain,
        candidates: problem.blocks.len(),
        certificate: found.map(|colors| Coloring {
            mode,
            domain: layout.domain.clone(),
            colors,
        }),
        convention,
        nodes: budget.used(),
    })
}

/// `c -> (b)^a_{k,t}` with colors on copies of `a`.
#[allow(clippy::too_many_arguments)]
pub fn arrow_objects(
    cat: &FiniteCategory,
    c: ObjectId,
    b: ObjectId,
    a: ObjectId,
    k: usize,
    t: usize,
    cfg: &SearchConfig,
) -> Result<ArrowResult> {
    arrow(cat, c, b, a, k, t, Mode::Objects, cfg)
}

/// `c -> (b)^a_{k,t}` with colors on embeddings of `a`.
#[allow(clippy::too_many_arguments)]
pub fn arrow_morphisms(
    cat: &FiniteCategory,
    c: ObjectId,
    b: ObjectId,
    a: ObjectId,
    k: usize,
    t: usize,
    cfg: &SearchConfig,
) -> Result<ArrowResult> {
    arrow(cat, c, b, a, k, t, Mode::Morphisms, cfg)
}

/// The least refuting coloring, or `None` when the arrow holds.
#[allow(clippy::too_many_arguments)]
pub fn find_bad_coloring(
    cat: &FiniteCategory,
    c: ObjectId,
    b: ObjectId,
    a: ObjectId,
    k: usize,
    t: usize,
    mode: Mode,
    cfg: &SearchConfig,
) -> Result<Option<Coloring>> {
    Ok(arrow(cat, c, b, a, k, t, mode, cfg)?.certificate)
}

/// Runs the search with symmetry pruning off and on and insists on one answer.
#[allow(clippy::too_many_arguments)]
pub fn arrow_cross_checked(
    cat: &FiniteCategory,
    c: ObjectId,
    b: ObjectId,
    a: ObjectId,
    k: usize,
    t: usize,
    mode: Mode,
    cfg: &SearchConfig,
) -> Result<ArrowResult> {
    let plain = arrow(cat, c, b, a, k, t, mode, &cfg.with_pruning(false))?;
    let pruned = arrow(cat, c, b, a, k, t, mode, &cfg.with_pruning(true))?;
    if plain.holds != pruned.holds || plain.certificate != pruned.certificate {
        return Err(Error::Internal("symmetry pruning changed the arrow verdict".into()));
    }
    Ok(plain)
}

/// For a given coloring, the least `w` showing at most `t` colors.
#[allow(clippy::too_many_arguments)]
pub fn oligochromatic_witness(
    cat: &FiniteCategory,
    c: ObjectId,
    b: ObjectId,
    a: ObjectId,
    t: usize,
    mode: Mode,
    colors: &[usize],
) -> Result<Option<MorphismId>> {
    let (problem, layout) = ColoringProblem::arrow(cat, c, b, a, mode)?;
    if colors.len() != problem.domain {
        return Err(Error::Invalid(format!(
            "coloring has {} entries but the domain has {}",
            colors.len(),
            problem.domain
        )));
    }
    Ok(problem.oligochromatic(colors, t).map(|i| layout.candidates[i]))
}

/// Two-element subchains colored by agreement with an enumeration.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PairColoring {
    /// Pairs `(x, y)` with `x` below `y` in the chain, lexicographic.
    pub pairs: Vec<(usize, usize)>,
    pub colors: Vec<usize>,
}

/// Colors `{x < y}` with 0 when the enumeration lists `x` before `y`, else 1.
///
/// `enumeration` lists the elements in the order they are enumerated.
pub fn sierpinski_coloring(chain: &Structure, enumeration: &[usize]) -> Result<PairColoring> {
    let n = chain.size();
    let sig = chain.signature();
    if sig.relations().len() != 1 || sig.relations()[0].arity != 2 || !sig.constants().is_empty() {
        return Err(Error::Invalid("a chain has exactly one binary relation".into()));
    }
    for x in 0..n {
        if chain.holds(0, &[x, x]) {
            return Err(Error::Invalid("chain relation is not irreflexive".into()));
        }
        for y in 0..n {
            if x != y && chain.holds(0, &[x, y]) == chain.holds(0, &[y, x]) {
                return Err(Error::Invalid("chain relation is not a total order".into()));
            }
            for z in 0..n {
                if chain.holds(0, &[x, y]) && chain.holds(0, &[y, z]) && !chain.holds(0, &[x, z]) {
                    return Err(Error::Invalid("chain relation is not transitive".into()));
                }
            }
        }
    }
    let mut position = vec![usize::MAX; n];
    for (i, &x) in enumeration.iter().enumerate() {
        if x >= n || position[x] != usize::MAX {
            return Err(Error::Invalid(
                "enumeration is not a permutation of the universe".into(),
            ));
        }
        position[x] = i;
    }
    if enumeration.len() != n {
        return Err(Error::Invalid(
            "enumeration is not a permutation of the universe".into(),
        ));
    }
    let mut pairs = Vec::new();
    let mut colors = Vec::new();
    for x in 0..n {
        for y in 0..n {
            if chain.holds(0, &[x, y]) {
                pairs.push((x, y));
                colors.push(usize::from(position[x] > position[y]));
            }
        }
    }
    Ok(PairColoring { pairs, colors })
}
