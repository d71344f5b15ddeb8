//! Finite relational structures with constants, and embeddings between them.

mod parse;
mod search;

use serde::Serialize;

use crate::error::{Error, Result};

pub use parse::{
    parse_pool, parse_structure, parse_structure_or_shorthand, serialize_pool, serialize_structure, shorthand,
};
pub use search::{are_isomorphic, automorphism_group, enumerate_embeddings, first_embedding};

/// Largest relation table we are willing to allocate.
const MAX_TABLE: usize = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct RelationSymbol {
    pub name: String,
    pub arity: usize,
}

/// Relation and constant symbols, each list kept sorted by name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default, Serialize)]
pub struct Signature {
    relations: Vec<RelationSymbol>,
    constants: Vec<String>,
}

impl Signature {
    pub fn new<R, C, S, T>(relations: R, constants: C) -> Result<Self>
    where
        R: IntoIterator<Item = (S, usize)>,
        C: IntoIterator<Item = T>,
        S: Into<String>,
        T: Into<String>,
    {
        let mut rels: Vec<RelationSymbol> = relations
            .into_iter()
            .map(|(n, a)| RelationSymbol {
                name: n.into(),
                arity: a,
            })
            .collect();
        let mut consts: Vec<String> = constants.into_iter().map(Into::into).collect();
        for r in &rels {
            if r.arity == 0 {
                return Err(Error::Invalid(format!("relation `{}` has arity 0", r.name)));
            }
        }
        rels.sort();
        consts.sort();
        let mut names: Vec<&str> = rels
            .iter()
            .map(|r| r.name.as_str())
            .chain(consts.iter().map(String::as_str))
            .collect();
        names.sort_unstable();
        if let Some(w) = names.windows(2).find(|w| w[0] == w[1]) {
            return Err(Error::Invalid(format!("symbol `{}` declared twice", w[0])));
        }
        Ok(Signature {
            relations: rels,
            constants: consts,
        })
    }

    pub fn relational<R, S>(relations: R) -> Result<Self>
    where
        R: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        Signature::new(relations, Vec::<String>::new())
    }

    pub fn relations(&self) -> &[RelationSymbol] {
        &self.relations
    }

    pub fn constants(&self) -> &[String] {
        &self.constants
    }

    pub fn relation_index(&self, name: &str) -> Option<usize> {
        self.relations.iter().position(|r| r.name == name)
    }

    pub fn constant_index(&self, name: &str) -> Option<usize> {
        self.constants.iter().position(|c| c == name)
    }

    pub fn has_symbol(&self, name: &str) -> bool {
        self.relation_index(name).is_some() || self.constant_index(name).is_some()
    }

    pub fn without_constants(&self) -> Signature {
        Signature {
            relations: self.relations.clone(),
            constants: Vec::new(),
        }
    }
}

/// One relation stored as a dense truth table indexed in lexicographic tuple order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Table {
    arity: usize,
    bits: Vec<bool>,
}

/// A finite structure on the universe `0..size`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Structure {
    signature: Signature,
    size: usize,
    tables: Vec<Table>,
    constants: Vec<usize>,
}

fn table_len(size: usize, arity: usize) -> Result<usize> {
    let mut len: usize = 1;
    for _ in 0..arity {
        len = len
            .checked_mul(size)
            .filter(|&l| l <= MAX_TABLE)
            .ok_or_else(|| Error::Invalid(format!("relation table {size}^{arity} too large")))?;
    }
    Ok(len)
}

impl Structure {
    /// A structure with every relation empty and every constant at 0.
    pub fn empty(signature: Signature, size: usize) -> Result<Self> {
        if size == 0 && !signature.constants.is_empty() {
            return Err(Error::Invalid("constants need a nonempty universe".into()));
        }
        let tables = signature
            .relations
            .iter()
            .map(|r| {
                Ok(Table {
                    arity: r.arity,
                    bits: vec![false; table_len(size, r.arity)?],
                })
            })
            .collect::<Result<Vec<_>>>()?;
        let constants = vec![0; signature.constants.len()];
        Ok(Structure {
            signature,
            size,
            tables,
            constants,
        })
    }

    /// Builds a structure from named tuple lists and constant values.
    pub fn from_tuples(
        signature: Signature,
        size: usize,
        tuples: &[(&str, Vec<Vec<usize>>)],
        constants: &[(&str, usize)],
    ) -> Result<Self> {
        let mut s = Structure::empty(signature, size)?;
        for (name, list) in tuples {
            for t in list {
                s.insert(name, t)?;
            }
        }
        let mut seen = vec![false; s.signature.constants.len()];
        for (name, value) in constants {
            let i = s
                .signature
                .constant_index(name)
                .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
            s.set_constant(i, *value)?;
            seen[i] = true;
        }
        if let Some(i) = seen.iter().position(|&b| !b) {
            return Err(Error::Invalid(format!(
                "constant `{}` has no value",
                s.signature.constants[i]
            )));
        }
        Ok(s)
    }

    pub fn signature(&self) -> &Signature {
        &self.signature
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn constants(&self) -> &[usize] {
        &self.constants
    }

    pub fn constant(&self, name: &str) -> Option<usize> {
        self.signature.constant_index(name).map(|i| self.constants[i])
    }

    pub fn set_constant(&mut self, index: usize, value: usize) -> Result<()> {
        if value >= self.size {
            return Err(Error::OutOfRange {
                element: value,
                size: self.size,
            });
        }
        self.constants[index] = value;
        Ok(())
    }

    fn index_of(&self, tuple: &[usize]) -> usize {
        tuple.iter().fold(0, |acc, &x| acc * self.size + x)
    }

    fn check_tuple(&self, rel: usize, tuple: &[usize]) -> Result<()> {
        let sym = &self.signature.relations[rel];
        if tuple.len() != sym.arity {
            return Err(Error::ArityMismatch {
                symbol: sym.name.clone(),
                expected: sym.arity,
                found: tuple.len(),
            });
        }
        if let Some(&x) = tuple.iter().find(|&&x| x >= self.size) {
            return Err(Error::OutOfRange {
                element: x,
                size: self.size,
            });
        }
        Ok(())
    }

    /// Adds a tuple to the named relation.
    pub fn insert(&mut self, name: &str, tuple: &[usize]) -> Result<()> {
        let rel = self
            .signature
            .relation_index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        self.insert_at(rel, tuple)
    }

    pub fn insert_at(&mut self, rel: usize, tuple: &[usize]) -> Result<()> {
        self.check_tuple(rel, tuple)?;
        let i = self.index_of(tuple);
        self.tables[rel].bits[i] = true;
        Ok(())
    }

    /// Truth value of relation `rel` on `tuple`; the tuple must be in range.
    pub fn holds(&self, rel: usize, tuple: &[usize]) -> bool {
        self.tables[rel].bits[self.index_of(tuple)]
    }

    pub fn holds_named(&self, name: &str, tuple: &[usize]) -> Result<bool> {
        let rel = self
            .signature
            .relation_index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        self.check_tuple(rel, tuple)?;
        Ok(self.holds(rel, tuple))
    }

    /// Truth value by precomputed table index.
    pub(crate) fn holds_index(&self, rel: usize, index: usize) -> bool {
        self.tables[rel].bits[index]
    }

    /// Tuples of relation `rel` in lexicographic order.
    pub fn tuples(&self, rel: usize) -> Vec<Vec<usize>> {
        let arity = self.tables[rel].arity;
        self.tables[rel]
            .bits
            .iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| decode(i, arity, self.size))
            .collect()
    }

    pub fn tuple_count(&self, rel: usize) -> usize {
        self.tables[rel].bits.iter().filter(|&&b| b).count()
    }

    /// Number of tuple occurrences of each element, across all relations.
    pub fn degrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.size];
        for rel in 0..self.tables.len() {
            for t in self.tuples(rel) {
                for x in t {
                    deg[x] += 1;
                }
            }
        }
        deg
    }

    /// Pulls the structure back along an injective map into its universe.
    pub fn pullback(&self, map: &[usize]) -> Result<Structure> {
        if let Some(&x) = map.iter().find(|&&x| x >= self.size) {
            return Err(Error::OutOfRange {
                element: x,
                size: self.size,
            });
        }
        if !is_injective(map) {
            return Err(Error::Invalid("pullback along a non-injective map".into()));
        }
        let mut out = Structure::empty(self.signature.without_constants(), map.len())?;
        for rel in 0..self.tables.len() {
            let arity = self.tables[rel].arity;
            for i in 0..out.tables[rel].bits.len() {
                let t = decode(i, arity, map.len());
                let image: Vec<usize> = t.iter().map(|&x| map[x]).collect();
                out.tables[rel].bits[i] = self.holds(rel, &image);
            }
        }
        if self.signature.constants.is_empty() {
            return Ok(out);
        }
        let mut constants = Vec::with_capacity(self.constants.len());
        for (name, &c) in self.signature.constants.iter().zip(&self.constants) {
            match map.iter().position(|&x| x == c) {
                Some(p) => constants.push(p),
                None => return Err(Error::ConstantOutsideSubset(name.clone())),
            }
        }
        out.signature = self.signature.clone();
        out.constants = constants;
        Ok(out)
    }

    /// The same universe without the named relation.
    pub fn forget_relation(&self, name: &str) -> Result<Structure> {
        let rel = self
            .signature
            .relation_index(name)
            .ok_or_else(|| Error::UnknownSymbol(name.to_string()))?;
        let mut s = self.clone();
        s.signature.relations.remove(rel);
        s.tables.remove(rel);
        Ok(s)
    }

    /// Adds a relation symbol together with its table.
    pub fn with_relation(&self, name: &str, arity: usize, tuples: &[Vec<usize>]) -> Result<Structure> {
        let mut rels: Vec<(String, usize)> = self
            .signature
            .relations
            .iter()
            .map(|r| (r.name.clone(), r.arity))
            .collect();
        rels.push((name.to_string(), arity));
        let sig = Signature::new(rels, self.signature.constants.clone())?;
        let mut s = Structure::empty(sig, self.size)?;
        for (i, r) in self.signature.relations.iter().enumerate() {
            for t in self.tuples(i) {
                s.insert(&r.name, &t)?;
            }
        }
        for t in tuples {
            s.insert(name, t)?;
        }
        s.constants = self.constants.clone();
        Ok(s)
    }
}

pub(crate) fn decode(mut index: usize, arity: usize, size: usize) -> Vec<usize> {
    let mut t = vec![0; arity];
    for slot in t.iter_mut().rev() {
        *slot = index % size;
        index /= size;
    }
    t
}

pub(crate) fn is_injective(map: &[usize]) -> bool {
    let mut seen = std::collections::HashSet::with_capacity(map.len());
    map.iter().all(|x| seen.insert(*x))
}

/// An element map between universes; position `i` holds the image of `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Embedding(pub Vec<usize>);

impl Embedding {
    pub fn identity(n: usize) -> Self {
        Embedding((0..n).collect())
    }

    pub fn map(&self) -> &[usize] {
        &self.0
    }

    /// `self` after `before`.
    pub fn compose(&self, before: &Embedding) -> Embedding {
        Embedding(before.0.iter().map(|&x| self.0[x]).collect())
    }

    /// Inverse of a bijection onto `0..len`.
    pub fn inverse(&self) -> Option<Embedding> {
        let mut inv = vec![usize::MAX; self.0.len()];
        for (i, &x) in self.0.iter().enumerate() {
            if x >= inv.len() || inv[x] != usize::MAX {
                return None;
            }
            inv[x] = i;
        }
        Some(Embedding(inv))
    }
}

/// Whether `map` embeds `a` into `b`.
pub fn is_embedding(map: &[usize], a: &Structure, b: &Structure) -> Result<bool> {
    if a.signature != b.signature {
        return Err(Error::SignatureMismatch(
            "embedding between structures of different signatures".into(),
        ));
    }
    if map.len() != a.size {
        return Err(Error::Invalid(format!(
            "map has {} entries for a universe of size {}",
            map.len(),
            a.size
        )));
    }
    if map.iter().any(|&x| x >= b.size) || !is_injective(map) {
        return Ok(false);
    }
    if a.constants.iter().zip(&b.constants).any(|(&ca, &cb)| map[ca] != cb) {
        return Ok(false);
    }
    for rel in 0..a.tables.len() {
        let arity = a.tables[rel].arity;
        for (i, &bit) in a.tables[rel].bits.iter().enumerate() {
            let t = decode(i, arity, a.size);
            let image: Vec<usize> = t.iter().map(|&x| map[x]).collect();
            if bit != b.holds(rel, &image) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Induced substructure on `subset`, relabelled in increasing order, with its inclusion.
pub fn induced_substructure(a: &Structure, subset: &[usize]) -> Result<(Structure, Embedding)> {
    let mut sorted = subset.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    let sub = a.pullback(&sorted)?;
    Ok((sub, Embedding(sorted)))
}

/// Constant names and their values, kept apart from a stripped structure.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ConstantTable {
    pub names: Vec<String>,
    pub values: Vec<usize>,
}

impl ConstantTable {
    /// Whether `map` sends the listed constants of one table onto the other's.
    pub fn preserved_by(&self, map: &[usize], target: &ConstantTable) -> bool {
        self.names == target.names
            && self
                .values
                .iter()
                .zip(&target.values)
                .all(|(&a, &b)| map.get(a) == Some(&b))
    }
}

/// Splits the constants off a structure.
pub fn encode_constants(a: &Structure) -> Result<(Structure, ConstantTable)> {
    if a.signature.constants.is_empty() {
        return Err(Error::Invalid("structure has no constants to encode".into()));
    }
    let mut stripped = a.clone();
    stripped.signature.constants.clear();
    stripped.constants.clear();
    let table = ConstantTable {
        names: a.signature.constants.clone(),
        values: a.constants.clone(),
    };
    Ok((stripped, table))
}

/// Every isomorphism between finite induced substructures extends to an automorphism.
pub fn is_ultrahomogeneous(a: &Structure) -> Result<bool> {
    let aut = automorphism_group(a)?;
    let n = a.size;
    for mask in 0u64..(1u64 << n) {
        let subset: Vec<usize> = (0..n).filter(|&i| mask >> i & 1 == 1).collect();
        let (sub, inclusion) = match induced_substructure(a, &subset) {
            Ok(x) => x,
            Err(Error::ConstantOutsideSubset(_)) => continue,
            Err(e) => return Err(e),
        };
        let homs = enumerate_embeddings(&sub, a)?;
        let reached: std::collections::HashSet<Embedding> = aut.iter().map(|g| g.compose(&inclusion)).collect();
        if homs.iter().any(|f| !reached.contains(f)) {
            return Ok(false);
        }
    }
    Ok(true)
}
