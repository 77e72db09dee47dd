//! Affine matrices produced by this crate on the untwisted and twisted loop
//! algebras of the fixture types, frozen in `catalog.json`.

use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::{extract_from_twist, AffineLabel, Gcm};
use crate::classify::{conjugacy_classes, dynkin_automorphism_group};
use crate::descent::lie_twist;
use crate::error::Result;
use crate::lie::automorphisms::ToralCharge;
use crate::lie::cartan::{CartanType, FiniteCartanMatrix};
use crate::lie::chevalley::chevalley_algebra;
use crate::lie::roots::RootSystem;

/// Types whose loop algebras make up the catalog.
pub const CATALOG_TYPES: [&str; 7] = ["A1", "A2", "A3", "B2", "C3", "D4", "G2"];

const GOLDEN: &str = include_str!("catalog.json");

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CatalogEntry {
    pub label: AffineLabel,
    pub gcm: Gcm,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Catalog {
    pub entries: Vec<CatalogEntry>,
}

impl Catalog {
    pub fn get(&self, label: &AffineLabel) -> Option<&Gcm> {
        self.entries.iter().find(|e| &e.label == label).map(|e| &e.gcm)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("catalog serializes");
        s.push('\n');
        s
    }
}

/// One entry per conjugacy class of diagram automorphisms of each type.
pub fn generate_catalog() -> Result<Catalog> {
    let mut entries = Vec::new();
    for label in CATALOG_TYPES {
        let t: CartanType = label.parse()?;
        let cartan = FiniteCartanMatrix::of_type(t);
        let ch = chevalley_algebra(&RootSystem::new(&cartan)?)?;
        let out = dynkin_automorphism_group(&cartan)?;
        for class in conjugacy_classes(&out.group).classes {
            let perm = &out.elements[class.rep];
            let data = lie_twist(&ch, perm, &ToralCharge::zero(cartan.rank()))?;
            let (gcm, _) = extract_from_twist(&ch, &data, perm, None)?;
            entries.push(CatalogEntry {
                label: AffineLabel {
                    base_type: t,
                    r: perm.order(),
                },
                gcm,
            });
        }
    }
    Ok(Catalog { entries })
}

/// The frozen catalog shipped with the crate.
pub fn builtin_catalog() -> &'static Catalog {
    static CATALOG: OnceLock<Catalog> = OnceLock::new();
    CATALOG.get_or_init(|| serde_json::from_str(GOLDEN).expect("bundled catalog is valid JSON"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::cartan::permutation_equivalent;

    #[test]
    fn regenerated_catalog_matches_golden_file() {
        let fresh = generate_catalog().unwrap();
        if std::env::var_os("LOOPALG_BLESS").is_some() {
            let path = concat!(env!("CARGO_MANIFEST_DIR"), "/src/affine/catalog.json");
            std::fs::write(path, fresh.to_json()).unwrap();
            return;
        }
        assert_eq!(&fresh, builtin_catalog());
        assert_eq!(fresh.to_json(), GOLDEN);
    }

    #[test]
    fn entries_are_pairwise_inequivalent() {
        let c = builtin_catalog();
        assert_eq!(c.entries.len(), 11);
        for (i, a) in c.entries.iter().enumerate() {
            a.gcm.check_affine().unwrap();
            for b in &c.entries[i + 1..] {
                if a.gcm.size() == b.gcm.size() {
                    assert!(permutation_equivalent(&a.gcm.0, &b.gcm.0).is_none(), "{} vs {}", a.label, b.label);
                }
            }
        }
    }

    #[test]
    fn known_entries() {
        let c = builtin_catalog();
        let a1 = AffineLabel {
            base_type: "A1".parse().unwrap(),
            r: 1,
        };
        assert_eq!(c.get(&a1).unwrap().0, vec![vec![2, -2], vec![-2, 2]]);
        let d43 = AffineLabel {
            base_type: "D4".parse().unwrap(),
            r: 3,
        };
        assert_eq!(c.get(&d43).unwrap().size(), 3);
        assert_eq!(d43.to_string(), "D4^(3)");
    }
}
