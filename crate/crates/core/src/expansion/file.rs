//! JSON description of an expansion between two structure pools.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::Expansion;
use crate::category::{FiniteCategory, Functor};
use crate::error::{Error, Result};
use crate::structures::parse_pool;

/// ```json
/// {
///   "source": "ordered.pool",
///   "target": "graphs.pool",
///   "objects": { "K2[0<1]": "K2", "K2[1<0]": "K2" },
///   "morphisms": [ { "dom": "K2[0<1]", "cod": "K2[1<0]", "images": [1] } ]
/// }
/// ```
///
/// `source` and `target` name pool files. Without `morphisms`, source
/// morphisms are identified with target morphisms by element map. Otherwise
/// every source hom-set must be listed, with `images[i]` the position in the
/// target hom-set of the `i`-th source morphism.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExpansionFile {
    pub source: String,
    pub target: String,
    pub objects: BTreeMap<String, String>,
    #[serde(default)]
    pub morphisms: Option<Vec<HomIdentification>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HomIdentification {
    pub dom: String,
    pub cod: String,
    pub images: Vec<usize>,
}

impl ExpansionFile {
    pub fn parse(text: &str) -> Result<Self> {
        Ok(serde_json::from_str(text)?)
    }

    /// Builds the expansion; `read` resolves the pool names to pool text.
    pub fn build(&self, read: &dyn Fn(&str) -> Result<String>) -> Result<Expansion> {
        let source = FiniteCategory::from_pool(parse_pool(&read(&self.source)?)?)?;
        let target = FiniteCategory::from_pool(parse_pool(&read(&self.target)?)?)?;
        let mut object_map = Vec::with_capacity(source.object_count());
        for a in source.objects() {
            let name = source.name(a);
            let image = self
                .objects
                .get(name)
                .ok_or_else(|| Error::InvalidExpansion(format!("source object `{name}` has no image")))?;
            let b = target
                .find_object(image)
                .ok_or_else(|| Error::InvalidExpansion(format!("unknown target object `{image}`")))?;
            object_map.push(b);
        }
        if let Some(extra) = self.objects.keys().find(|k| source.find_object(k).is_none()) {
            return Err(Error::InvalidExpansion(format!("unknown source object `{extra}`")));
        }
        let Some(homs) = &self.morphisms else {
            return Expansion::by_element_maps(source, target, object_map);
        };
        let mut morphism_map = vec![usize::MAX; source.morphism_count()];
        for h in homs {
            let find = |cat: &FiniteCategory, n: &str| {
                cat.find_object(n)
                    .ok_or_else(|| Error::InvalidExpansion(format!("unknown source object `{n}`")))
            };
            let (a, b) = (find(&source, &h.dom)?, find(&source, &h.cod)?);
            let hom = source.hom(a, b);
            if h.images.len() != hom.len() {
                return Err(Error::InvalidExpansion(format!(
                    "hom({}, {}) has {} morphisms but {} images",
                    h.dom,
                    h.cod,
                    hom.len(),
                    h.images.len()
                )));
            }
            let image_hom = target.hom(object_map[a], object_map[b]);
            for (&f, &i) in hom.iter().zip(&h.images) {
                morphism_map[f] = *image_hom.get(i).ok_or_else(|| {
                    Error::InvalidExpansion(format!("image index {i} outside hom-set of size {}", image_hom.len()))
                })?;
            }
        }
        if let Some(f) = morphism_map.iter().position(|&m| m == usize::MAX) {
            let (a, b) = (source.dom(f), source.cod(f));
            return Err(Error::InvalidExpansion(format!(
                "hom({}, {}) is not identified",
                source.name(a),
                source.name(b)
            )));
        }
        let functor = Functor::new(&source, &target, object_map, morphism_map)?;
        Expansion::new(source, target, functor)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn reader(name: &str) -> Result<String> {
        match name {
            "t" => Ok("K2 = clique 2\n".into()),
            "s" => Ok(
                "A = { signature rel < 2; rel E 2; universe 2 <: (0,1); E: (0,1) (1,0); }\n\
                       B = { signature rel < 2; rel E 2; universe 2 <: (1,0); E: (0,1) (1,0); }\n"
                    .into(),
            ),
            _ => Err(Error::Io(format!("no pool {name}"))),
        }
    }

    #[test]
    fn element_maps_by_default() {
        let file =
            ExpansionFile::parse(r#"{"source": "s", "target": "t", "objects": {"A": "K2", "B": "K2"}}"#).unwrap();
        let u = file.build(&reader).unwrap();
        assert!(u.classify_restrictions().has_unique_restrictions);
    }

    #[test]
    fn explicit_identification_must_be_complete() {
        let file = ExpansionFile::parse(
            r#"{"source": "s", "target": "t", "objects": {"A": "K2", "B": "K2"},
                "morphisms": [{"dom": "A", "cod": "A", "images": [0]}]}"#,
        )
        .unwrap();
        assert!(matches!(file.build(&reader), Err(Error::InvalidExpansion(_))));
        assert!(ExpansionFile::parse(r#"{"source": "s"}"#).is_err());
    }
}
