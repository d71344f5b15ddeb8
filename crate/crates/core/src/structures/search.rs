use super::{decode, Embedding, Structure};
use crate::error::{Error, Result};

/// Backtracking embedding search.
///
/// Domain vertices are assigned in order of decreasing degree; each new
/// assignment is checked against every tuple it completes.
struct Search<'a> {
    a: &'a Structure,
    b: &'a Structure,
    order: Vec<usize>,
    map: Vec<usize>,
    used: Vec<bool>,
    assigned: Vec<bool>,
}

impl<'a> Search<'a> {
    fn new(a: &'a Structure, b: &'a Structure) -> Result<Option<Self>> {
        if a.signature != b.signature {
            return Err(Error::SignatureMismatch(
                "embedding search between different signatures".into(),
            ));
        }
        let mut s = Search {
            a,
            b,
            order: Vec::new(),
            map: vec![usize::MAX; a.size],
            used: vec![false; b.size],
            assigned: vec![false; a.size],
        };
        if a.size > b.size {
            return Ok(None);
        }
        for (&ca, &cb) in a.constants.iter().zip(&b.constants) {
            if s.assigned[ca] {
                if s.map[ca] != cb {
                    return Ok(None);
                }
                continue;
            }
            if s.used[cb] {
                return Ok(None);
            }
            s.map[ca] = cb;
            s.used[cb] = true;
            s.assigned[ca] = true;
            if !s.consistent(ca) {
                return Ok(None);
            }
        }
        let deg = a.degrees();
        let mut free: Vec<usize> = (0..a.size).filter(|&v| !s.assigned[v]).collect();
        free.sort_by(|&x, &y| deg[y].cmp(&deg[x]).then(x.cmp(&y)));
        s.order = free;
        Ok(Some(s))
    }

    /// Checks all tuples over assigned vertices that mention `v`.
    fn consistent(&self, v: usize) -> bool {
        let dom: Vec<usize> = (0..self.a.size).filter(|&x| self.assigned[x]).collect();
        let k = dom.len();
        for (rel, table) in self.a.tables.iter().enumerate() {
            let arity = table.arity;
            let total = k.pow(arity as u32);
            for code in 0..total {
                let t: Vec<usize> = decode(code, arity, k).into_iter().map(|i| dom[i]).collect();
                if !t.contains(&v) {
                    continue;
                }
                let image: Vec<usize> = t.iter().map(|&x| self.map[x]).collect();
                if self.a.holds(rel, &t) != self.b.holds(rel, &image) {
                    return false;
                }
            }
        }
        true
    }

    /// Visits every embedding; the visitor returns `false` to stop.
    fn run(&mut self, depth: usize, visit: &mut dyn FnMut(&[usize]) -> bool) -> bool {
        if depth == self.order.len() {
            return visit(&self.map);
        }
        let v = self.order[depth];
        for y in 0..self.b.size {
            if self.used[y] {
                continue;
            }
            self.map[v] = y;
            self.used[y] = true;
            self.assigned[v] = true;
            let keep_going = !self.consistent(v) || self.run(depth + 1, visit);
            self.assigned[v] = false;
            self.used[y] = false;
            self.map[v] = usize::MAX;
            if !keep_going {
                return false;
            }
        }
        true
    }
}

/// All embeddings `a -> b` in lexicographic order of their element maps.
pub fn enumerate_embeddings(a: &Structure, b: &Structure) -> Result<Vec<Embedding>> {
    let mut out = Vec::new();
    if let Some(mut s) = Search::new(a, b)? {
        s.run(0, &mut |m| {
            out.push(Embedding(m.to_vec()));
            true
        });
    }
    out.sort();
    Ok(out)
}

/// Some embedding `a -> b`, if one exists.
pub fn first_embedding(a: &Structure, b: &Structure) -> Result<Option<Embedding>> {
    let mut found = None;
    if let Some(mut s) = Search::new(a, b)? {
        s.run(0, &mut |m| {
            found = Some(Embedding(m.to_vec()));
            false
        });
    }
    Ok(found)
}

/// The automorphism group as a sorted list of permutations.
pub fn automorphism_group(a: &Structure) -> Result<Vec<Embedding>> {
    enumerate_embeddings(a, a)
}

/// An isomorphism `a -> b`, if the structures are isomorphic.
pub fn are_isomorphic(a: &Structure, b: &Structure) -> Result<Option<Embedding>> {
    if a.signature != b.signature {
        return Err(Error::SignatureMismatch("isomorphism test".into()));
    }
    if a.size != b.size {
        return Ok(None);
    }
    for rel in 0..a.tables.len() {
        if a.tuple_count(rel) != b.tuple_count(rel) {
            return Ok(None);
        }
    }
    first_embedding(a, b)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::structures::shorthand;

    #[test]
    fn chain_counts() {
        let c2 = shorthand("chain 2").unwrap();
        let c3 = shorthand("chain 3").unwrap();
        let c4 = shorthand("chain 4").unwrap();
        assert_eq!(enumerate_embeddings(&c2, &c4).unwrap().len(), 6);
        assert!(enumerate_embeddings(&c3, &c2).unwrap().is_empty());
        assert_eq!(automorphism_group(&c4).unwrap(), vec![Embedding::identity(4)]);
    }

    #[test]
    fn output_is_sorted() {
        let k2 = shorthand("clique 2").unwrap();
        let p3 = shorthand("path 3").unwrap();
        let homs = enumerate_embeddings(&k2, &p3).unwrap();
        let maps: Vec<Vec<usize>> = homs.into_iter().map(|e| e.0).collect();
        assert_eq!(maps, vec![vec![0, 1], vec![1, 0], vec![1, 2], vec![2, 1]]);
    }

    #[test]
    fn symmetric_groups() {
        assert_eq!(automorphism_group(&shorthand("clique 3").unwrap()).unwrap().len(), 6);
        assert_eq!(
            automorphism_group(&shorthand("tournament-cycle 3").unwrap())
                .unwrap()
                .len(),
            3
        );
        assert_eq!(
            automorphism_group(&shorthand("emptygraph 0").unwrap()).unwrap().len(),
            1
        );
    }

    #[test]
    fn isomorphism_witness() {
        let a = shorthand("path 3").unwrap();
        let b = a.pullback(&[1, 0, 2]).unwrap();
        let w = are_isomorphic(&b, &a).unwrap().unwrap();
        assert!(crate::structures::is_embedding(&w.0, &b, &a).unwrap());
        assert!(are_isomorphic(&a, &shorthand("clique 3").unwrap()).unwrap().is_none());
    }
}
