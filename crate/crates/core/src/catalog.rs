//! Feasibility catalog for (2k, k) equiangular tight frames with k odd: an
//! entry is constructible here exactly when 2k - 1 is a prime power, in which
//! case the witness and the applicable construction routes are recorded.

use serde::Serialize;

use crate::arith::prime_power;
use crate::error::{Error, Result};

pub const MAX_CATALOG_K: u64 = 1_000_000;

/// Feasibility record for one odd k.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CatalogEntry {
    pub k: u64,
    pub two_k: u64,
    pub feasible: Feasibility,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
    pub routes: Vec<&'static str>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Feasibility {
    Paley,
    Unknown,
}

impl CatalogEntry {
    fn for_k(k: u64) -> CatalogEntry {
        let two_k = 2 * k;
        match prime_power(two_k - 1) {
            Some((p, alpha)) => {
                let mut routes = vec!["cab"];
                match two_k {
                    6 => routes.push("c6"),
                    10 => routes.push("c10"),
                    14 => routes.push("c14"),
                    _ => {}
                }
                routes.push("zauner");
                CatalogEntry {
                    k,
                    two_k,
                    feasible: Feasibility::Paley,
                    witness: Some(format!("{p}^{alpha}")),
                    routes,
                }
            }
            None => CatalogEntry {
                k,
                two_k,
                feasible: Feasibility::Unknown,
                witness: None,
                routes: Vec::new(),
            },
        }
    }
}

/// Entries for every odd k from 3 up to `max_k`.
pub fn catalog(max_k: u64) -> Result<Vec<CatalogEntry>> {
    if max_k > MAX_CATALOG_K {
        return Err(Error::TooLarge(max_k, MAX_CATALOG_K));
    }
    Ok((3..=max_k).step_by(2).map(CatalogEntry::for_k).collect())
}
