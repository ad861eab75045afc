//! Hardness instances: formulas, gadgets, unions, joinings and the explicit
//! witness regions that go with them.

mod formula;
mod gadgets;
mod joining;
mod templates;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::net_type::{Family, NetType};
use crate::region::{Problem, Region, RegionError};
use crate::ts::{AtomKind, SeparationAtom};

pub use formula::{brute_model, Cm1in3Formula, FormulaError, MAX_BRUTE_VARS};
pub use gadgets::{GadgetKind, Member, Union};
pub use joining::{
    backbone_connector_region, extend_backbone, extend_linear, joining, linear_joining, lj_w_region,
    lj_w_separating_region, lj_y_region, JoinKind, Joined,
};
pub use templates::{
    alpha_region, alpha_witness_region, consistency, thin_event_region, thin_event_template, ppt_essp_witness,
    thinly_distributed, FullWitness, ThinCase,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ReductionError {
    #[error(transparent)]
    Formula(#[from] FormulaError),
    #[error("variant {variant} needs b >= {min}, got {b}")]
    Bound { variant: Variant, min: u32, b: u32 },
    #[error("the given variable set is not a one-in-three model")]
    NotAModel,
    #[error("member {0} is not linear")]
    NonLinear(String),
    #[error("region `{name}` is invalid: {source}")]
    Template { name: String, source: RegionError },
    #[error("region `{name}` does not solve {atom}")]
    NotSolved { name: String, atom: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("no such {kind} `{name}`")]
    Unknown { kind: &'static str, name: String },
}

/// The four reductions, one per hardness result.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Variant {
    PptEssp,
    PtEssp,
    Ssp,
    ZEssp,
}

impl Variant {
    pub const ALL: [Variant; 4] = [Variant::PptEssp, Variant::PtEssp, Variant::Ssp, Variant::ZEssp];

    pub fn tag(self) -> &'static str {
        match self {
            Variant::PptEssp => "ppt-essp",
            Variant::PtEssp => "pt-essp",
            Variant::Ssp => "ssp",
            Variant::ZEssp => "z-essp",
        }
    }

    pub fn min_bound(self) -> u32 {
        match self {
            Variant::ZEssp => 2,
            _ => 1,
        }
    }

    /// The type the instance and its witness regions are checked against.
    pub fn family(self) -> Family {
        match self {
            Variant::PptEssp | Variant::Ssp => Family::Ppt,
            Variant::PtEssp => Family::Pt,
            Variant::ZEssp => Family::Zppt,
        }
    }

    pub fn net_type(self, b: u32) -> NetType {
        NetType::new(self.family(), b).expect("bounds are checked by the caller")
    }

    pub fn problem(self) -> Problem {
        match self {
            Variant::Ssp => Problem::Ssp,
            _ => Problem::Essp,
        }
    }

    pub fn join_kind(self) -> JoinKind {
        match self {
            Variant::ZEssp => JoinKind::Backbone,
            _ => JoinKind::Linear,
        }
    }
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.tag())
    }
}

impl FromStr for Variant {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.to_ascii_lowercase().replace('_', "-");
        Variant::ALL
            .into_iter()
            .find(|v| v.tag() == norm)
            .ok_or_else(|| format!("unknown variant `{s}` (expected ppt-essp, pt-essp, ssp or z-essp)"))
    }
}

/// The union built for one formula, variant and bound, with its atom α.
#[derive(Clone, Debug)]
pub struct GadgetUnion {
    pub variant: Variant,
    pub b: u32,
    pub formula: Cm1in3Formula,
    pub union: Union,
    pub alpha: SeparationAtom,
}

impl GadgetUnion {
    pub fn net_type(&self) -> NetType {
        self.variant.net_type(self.b)
    }

    pub fn alpha_label(&self) -> String {
        self.alpha.label(&self.union)
    }

    /// Carries a union region over to `j`, with every connector state at the
    /// support of the α state so that α stays solved.
    pub fn extend_to_join(&self, j: &Joined, r: &Region) -> Region {
        let z = match self.alpha {
            SeparationAtom::Essa { state, .. } => r.sup[state],
            SeparationAtom::Ssa(s, _) => r.sup[s],
        };
        match j.kind {
            JoinKind::Linear => extend_linear(&self.union, j, r, z),
            JoinKind::Backbone => extend_backbone(&self.union, j, r, z),
        }
    }

    /// The joining the variant calls for.
    pub fn join(&self) -> Result<Joined, ReductionError> {
        match self.variant.join_kind() {
            JoinKind::Linear => linear_joining(&self.union),
            JoinKind::Backbone => Ok(joining(&self.union)),
        }
    }
}

pub fn build_union(phi: &Cm1in3Formula, variant: Variant, b: u32) -> Result<GadgetUnion, ReductionError> {
    if b < variant.min_bound() {
        return Err(ReductionError::Bound { variant, min: variant.min_bound(), b });
    }
    let bu = b as usize;
    let m = phi.m();
    let mut members = Vec::new();
    match variant {
        Variant::PptEssp | Variant::PtEssp | Variant::Ssp => {
            match variant {
                Variant::PptEssp => {
                    members.push(gadgets::h1(bu));
                    members.extend((0..4).map(gadgets::d));
                }
                Variant::PtEssp => {
                    members.push(gadgets::h0(bu));
                    members.extend((0..4).map(|j| gadgets::c(j, bu)));
                }
                _ => {
                    members.push(gadgets::h2(bu));
                    members.extend((0..4).map(gadgets::d));
                }
            }
            members.extend((0..2 * m).map(gadgets::f_pure));
            members.extend((0..2 * m).map(gadgets::g_pure));
            members.extend((0..m).map(|i| gadgets::m_gadget(i, bu)));
            members.extend(phi.clauses().iter().enumerate().map(|(i, &c)| gadgets::t_pure(i, c, bu)));
        }
        Variant::ZEssp => {
            members.push(gadgets::h3(bu));
            members.extend((0..m).map(|j| gadgets::f_group(j, bu)));
            members.extend(phi.clauses().iter().enumerate().map(|(i, &c)| gadgets::t_group(i, c, bu)));
            members.extend((0..m).map(|j| gadgets::g_group(j, bu)));
        }
    }
    let union = Union::new(members);
    let st = |name: String| union.state_index(&name).expect("alpha state exists");
    let ev = |name: &str| union.event_index(name).expect("alpha event exists");
    let alpha = match variant {
        Variant::PptEssp => SeparationAtom::Essa { event: ev("k"), state: st(format!("h1_{}", 2 * b + 4)) },
        Variant::PtEssp => SeparationAtom::Essa { event: ev("k"), state: st(format!("h0_{}", 4 * b + 1)) },
        Variant::Ssp => SeparationAtom::Ssa(st("h2_0".into()), st(format!("h2_{b}"))),
        Variant::ZEssp => SeparationAtom::Essa { event: ev("k"), state: st(format!("h3_1_{}", b - 1)) },
    };
    debug_assert!(alpha.is_well_formed(&union));
    if variant.problem() == Problem::Essp {
        let atoms = crate::region::AtomSource::atoms(&union, AtomKind::Essa);
        for e in 0..union.events().len() {
            assert!(
                atoms.iter().any(|a| matches!(a, SeparationAtom::Essa { event, .. } if *event == e)),
                "every event of an ESSP union has an atom"
            );
        }
    }
    Ok(GadgetUnion { variant, b, formula: phi.clone(), union, alpha })
}
