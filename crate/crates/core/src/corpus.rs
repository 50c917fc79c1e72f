//! Bundled example scripts, broken variants, structures and vector fields.

use crate::proofkit::{parse_proof, parse_theory, Calculus, ProofScript, ScriptError, Theory};

/// A bundled proof script. Broken variants carry the line number where
/// checking is expected to fail, written as `# expect-fail: n` in the file.
#[derive(Clone, Copy, Debug)]
pub struct Entry {
    pub name: &'static str,
    pub text: &'static str,
    pub theory: Option<&'static str>,
}

impl Entry {
    pub fn script(&self) -> Result<ProofScript, ScriptError> {
        parse_proof(self.text)
    }

    pub fn theory(&self) -> Result<Theory, ScriptError> {
        match self.theory {
            Some(t) => parse_theory(t).map(|(_, th)| th),
            None => Ok(Theory::default()),
        }
    }

    pub fn expect_fail(&self) -> Option<usize> {
        self.text.lines().find_map(|l| l.trim().strip_prefix("# expect-fail:")?.trim().parse().ok())
    }

    pub fn calculus(&self) -> Option<Calculus> {
        self.script().ok().map(|s| s.calculus)
    }
}

macro_rules! entry {
    ($name:literal) => {
        Entry { name: $name, text: include_str!(concat!("../corpus/proofs/", $name, ".proof")), theory: None }
    };
    ($name:literal, $th:literal) => {
        Entry {
            name: $name,
            text: include_str!(concat!("../corpus/proofs/", $name, ".proof")),
            theory: Some(include_str!(concat!("../corpus/proofs/", $th, ".theory"))),
        }
    };
}

pub const PROOFS: &[Entry] = &[
    entry!("taut"),
    entry!("eq"),
    entry!("ax_mu"),
    entry!("ax_exI"),
    entry!("ax_V"),
    entry!("ax_assign"),
    entry!("ax_ctl"),
    entry!("ax_test"),
    entry!("ax_choice"),
    entry!("ax_comp"),
    entry!("ax_star"),
    entry!("ax_dual"),
    entry!("rule_mp"),
    entry!("rule_ma"),
    entry!("rule_fpmu"),
    entry!("rule_m"),
    entry!("rule_fpstar"),
    entry!("rule_rename"),
    entry!("rule_hyp", "rule_hyp"),
    entry!("gl_multi"),
    entry!("derived_intersection"),
    entry!("derived_seq_dual"),
    entry!("derived_mono_mu"),
    entry!("derived_mono_nu"),
    entry!("derived_box_mono"),
    entry!("derived_replace_loop"),
    entry!("gl_multi_sharp"),
];

pub const BROKEN: &[Entry] = &[
    entry!("broken_fpmu_capture"),
    entry!("broken_forward_ref"),
    entry!("broken_v_side"),
    entry!("broken_assign_side"),
    entry!("broken_mu_capture"),
    entry!("broken_exI_capture"),
    entry!("broken_gl_pvar"),
    entry!("broken_mp_mismatch"),
    entry!("broken_star_body"),
    entry!("broken_hyp_range"),
    entry!("broken_fpstar_order"),
];

pub fn find(name: &str) -> Option<&'static Entry> {
    PROOFS.iter().chain(BROKEN).find(|e| e.name == name)
}

pub const TOGGLE: &str = include_str!("../corpus/structures/toggle.json");
/// Domain `0..4` with truncated subtraction as the binary function `-`.
pub const PREDECESSOR: &str = include_str!("../corpus/structures/predecessor.json");

/// A polynomial field with the ball it is analysed on and one trajectory.
#[derive(Clone, Copy, Debug)]
pub struct FieldEntry {
    pub name: &'static str,
    pub field: &'static str,
    pub radius: f64,
    pub start: &'static [f64],
    pub duration: f64,
    pub triples: Option<&'static str>,
}

pub const FIELDS: &[FieldEntry] = &[
    FieldEntry {
        name: "growth",
        field: include_str!("../corpus/fields/growth.csv"),
        radius: 4.0,
        start: &[1.0],
        duration: 1.0,
        triples: Some(include_str!("../corpus/fields/growth_triples.csv")),
    },
    FieldEntry {
        name: "constant",
        field: include_str!("../corpus/fields/constant.csv"),
        radius: 3.0,
        start: &[0.0, 1.0],
        duration: 2.0,
        triples: None,
    },
    FieldEntry {
        name: "rotation",
        field: include_str!("../corpus/fields/rotation.csv"),
        radius: 2.0,
        start: &[1.0, 0.0],
        duration: std::f64::consts::TAU,
        triples: Some(include_str!("../corpus/fields/rotation_triples.csv")),
    },
    FieldEntry {
        name: "square",
        field: include_str!("../corpus/fields/square.csv"),
        radius: 2.0,
        start: &[0.5],
        duration: 1.0,
        triples: None,
    },
    FieldEntry {
        name: "lotka",
        field: include_str!("../corpus/fields/lotka.csv"),
        radius: 3.0,
        start: &[1.0, 0.5],
        duration: 1.0,
        triples: None,
    },
];
