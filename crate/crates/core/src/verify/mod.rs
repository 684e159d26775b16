//! Checks of the maximum, comparison and sector inequalities on discrete
//! data, plus seeded random instances to run them on.
//!
//! Every check returns a [`VerificationReport`] whose `passed` flag is
//! exactly `worst_violation <= tolerance_used`. Checks that could not be
//! applied (a hypothesis failed, or the scheme refused the instance) say so
//! in [`VerificationReport::classification`].

mod identities;
mod instance;
mod lemma;
mod principle;
mod sector;

use alloc::string::String;
use alloc::vec::Vec;

pub use identities::verify_kernel_identities;
pub use instance::{
    generate_comparison_pair, generate_instance, generate_instance_with_notes, BcKind, InstanceConfig, OperatorKind,
    Roughness, TrigField,
};
pub use lemma::{probe_threshold, verify_lemma1, ProbeFamily, ProbeRow};
pub use principle::{comparison_case, max_principle_case, verify_comparison, verify_max_principle};
pub use sector::{random_sector_case, verify_sector_inequality, SectorCase};

/// What a report actually establishes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    /// Hypotheses held and the conclusion was checked.
    Checked,
    /// A hypothesis of the statement failed; nothing was concluded.
    NotApplicable,
    /// Parameters outside the admissible range (`μ^α < λ`), run on purpose.
    HypothesisViolatedProbe,
    /// The discretisation refused the instance (step restriction); this says
    /// nothing about the continuous statement.
    SchemeLimitation,
}

impl Classification {
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Checked => "checked",
            Self::NotApplicable => "not-applicable",
            Self::HypothesisViolatedProbe => "hypothesis-violated-probe",
            Self::SchemeLimitation => "scheme-limitation",
        }
    }
}

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq)]
pub struct VerificationReport {
    pub passed: bool,
    /// Largest value of the quantity required to be `≤ 0` (`−∞` when no
    /// point was checked).
    pub worst_violation: f64,
    /// `(x index, t index)` of the worst point.
    pub witness: (usize, usize),
    pub tolerance_used: f64,
    pub instance_seed: u64,
    pub notes: Vec<String>,
    pub classification: Classification,
}

impl VerificationReport {
    /// `passed` is derived, so the `passed ⇔ worst ≤ tolerance` invariant holds.
    pub fn new(worst_violation: f64, witness: (usize, usize), tolerance_used: f64) -> Self {
        Self {
            passed: worst_violation <= tolerance_used,
            worst_violation,
            witness,
            tolerance_used,
            instance_seed: 0,
            notes: Vec::new(),
            classification: Classification::Checked,
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.notes.push(note.into());
        self
    }

    /// Counts towards pass statistics (checked, or a scheme refusal, which
    /// is a failure of the sweep).
    pub fn is_counted(&self) -> bool {
        matches!(
            self.classification,
            Classification::Checked | Classification::SchemeLimitation
        )
    }
}
