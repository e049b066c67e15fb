//! Built-in manifold specs. Each entry is also shipped as an `.akspec` file
//! under `catalog/`, and the built-in spec is parsed from that file.

use crate::error::{Error, Result};
use crate::hodge::CheckId;
use crate::model::{parse_spec, FrameForm, ManifoldSpec, Pairing, RealFramePresentation};

/// A real coframe presentation together with the real fundamental form.
#[derive(Clone, PartialEq, Debug)]
pub struct RealData {
    pub presentation: RealFramePresentation,
    pub omega: FrameForm,
}

/// Expected verdict of a check, as rendered by `VerificationReport::verdict`.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Expectation {
    pub check: CheckId,
    pub verdict: &'static str,
}

#[derive(Clone, PartialEq, Debug)]
pub struct CatalogEntry {
    pub key: &'static str,
    pub spec: ManifoldSpec,
    /// The `.akspec` text the spec is parsed from.
    pub source: &'static str,
    pub provenance: &'static str,
    pub real: Option<RealData>,
    pub expected: Vec<Expectation>,
}

struct Raw {
    key: &'static str,
    source: &'static str,
    provenance: &'static str,
}

const RAW: [Raw; 7] = [
    Raw {
        key: "iwasawa_ak",
        source: include_str!("../catalog/iwasawa_ak.akspec"),
        provenance: "Iwasawa manifold, left-invariant non-integrable almost-Kähler structure; real and complex structure equations both given",
    },
    Raw {
        key: "h12_t3",
        source: include_str!("../catalog/h12_t3.akspec"),
        provenance: "H(1,2) x T^3 nilmanifold of real dimension 8 with a left-invariant almost-Kähler structure",
    },
    Raw {
        key: "kt4",
        source: include_str!("../catalog/kt4.akspec"),
        provenance: "Kodaira-Thurston nilmanifold with an engine-chosen non-integrable almost-Kähler structure",
    },
    Raw {
        key: "torus4_flat",
        source: include_str!("../catalog/torus4_flat.akspec"),
        provenance: "flat 4-torus, baseline in real dimension 4",
    },
    Raw {
        key: "torus6_flat",
        source: include_str!("../catalog/torus6_flat.akspec"),
        provenance: "flat 6-torus, Kähler baseline",
    },
    Raw {
        key: "torus6_f",
        source: include_str!("../catalog/torus6_f.akspec"),
        provenance: "6-torus with a non-invariant almost-Kähler structure built from a function f(x2); E stands for exp(f), F for f'",
    },
    Raw {
        key: "torus6_g",
        source: include_str!("../catalog/torus6_g.akspec"),
        provenance: "6-torus with a non-invariant almost-complex structure built from a function g; V3g is the derivative V3(g)",
    },
];

pub fn keys() -> Vec<&'static str> {
    RAW.iter().map(|r| r.key).collect()
}

pub fn get(key: &str) -> Result<CatalogEntry> {
    let raw = RAW.iter().find(|r| r.key == key).ok_or_else(|| Error::UnknownKey(key.to_string()))?;
    let spec = parse_spec(raw.source)?;
    Ok(CatalogEntry {
        key: raw.key,
        spec,
        source: raw.source,
        provenance: raw.provenance,
        real: real_data(raw.key)?,
        expected: expected(raw.key),
    })
}

pub fn all() -> Result<Vec<CatalogEntry>> {
    keys().into_iter().map(get).collect()
}

fn real_data(key: &str) -> Result<Option<RealData>> {
    let f = FrameForm::from_int_terms;
    let z = FrameForm::zero;
    let data = match key {
        "iwasawa_ak" => RealData {
            presentation: RealFramePresentation::new(
                vec![z(), z(), z(), z(), f(&[(&[1, 3], -1), (&[2, 4], 1)]), f(&[(&[1, 4], -1), (&[2, 3], -1)])],
                Pairing::new(vec![(1, 6), (2, 5), (3, 4)])?,
            )?,
            omega: f(&[(&[1, 6], 2), (&[2, 5], 2), (&[3, 4], 2)]),
        },
        "h12_t3" => RealData {
            presentation: RealFramePresentation::new(
                vec![z(), z(), z(), z(), f(&[(&[2, 3], -1)]), f(&[(&[1, 3], -1)]), z(), z()],
                Pairing::new(vec![(1, 5), (2, 6), (3, 7), (4, 8)])?,
            )?,
            omega: f(&[(&[1, 5], 1), (&[2, 6], 1), (&[3, 7], 1), (&[4, 8], 1)]),
        },
        "kt4" => RealData {
            presentation: RealFramePresentation::new(
                vec![z(), z(), z(), f(&[(&[1, 2], 1)])],
                Pairing::new(vec![(1, 3), (4, 2)])?,
            )?,
            omega: f(&[(&[1, 3], 1), (&[4, 2], 1)]),
        },
        _ => return Ok(None),
    };
    Ok(Some(data))
}

fn expected(key: &str) -> Vec<Expectation> {
    CheckId::ALL
        .into_iter()
        .map(|check| {
            let verdict = match (key, check) {
                ("torus6_f" | "torus6_g", _) => "Inapplicable",
                ("kt4" | "torus4_flat", CheckId::Inclusion21) => "Inapplicable",
                ("kt4" | "torus4_flat", _) => "Holds",
                (_, CheckId::Prop41) => "Inapplicable",
                ("iwasawa_ak", CheckId::Inclusion21) => "Holds (strict inclusion)",
                (_, CheckId::Inclusion21) => "Holds (equality)",
                _ => "Holds",
            };
            Expectation { check, verdict }
        })
        .collect()
}
