//! The experiment configuration surface.
//!
//! One flat key-value document drives every CLI subcommand. Unknown keys
//! are rejected (a typo must not silently fall back to a default), and
//! every omitted key is materialized to its default on load, so the config
//! snapshot embedded in each artifact is complete provenance for a replay.

use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::algebra::{EnumKind, GenStyle};
use crate::construction::{
    build_cube_family, pad_to_all_n, power_generating_set,
    power_generating_set_projections_only, sym_variant, CubeIndex, GeneratingFamily, LocalAction,
};
use crate::error::{LabError, Result};
use crate::spectral::{EigenMethod, GraphKind};
use crate::spectral::baseline::BaselineMode;

/// Flat configuration for every subcommand; unknown keys are rejected and
/// defaults are materialized on load.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ExperimentConfig {
    // --- construction -----------------------------------------------------
    /// Side length K of the cube (points per fiber).
    pub k_side: u64,
    /// Cube dimension d; the family permutes K^d points.
    pub d: usize,
    /// Field characteristic of the local matrix group.
    pub p: u32,
    /// Field extension degree.
    pub m: usize,
    /// Matrix size of the local group.
    pub m_mat: usize,
    /// Point enumeration: "projective_plane" or "nonzero_vectors".
    pub enumeration: String,
    /// Local generator style: "involution" or "elementary".
    pub style: String,
    /// Family to construct: "cube_union", "padded", or "sym_padded".
    pub family_kind: String,
    /// Target degree for the padded kinds.
    pub pad_n: Option<usize>,
    /// Certify only per-copy projections of the power set (the route for
    /// local groups whose direct-power certificate does not apply).
    pub projections_only: bool,

    // --- shared -----------------------------------------------------------
    /// Base seed for every randomized routine (overridable with --seed).
    pub seed: u64,
    /// Family artifact consumed by analysis subcommands; relative paths
    /// resolve against the output directory. Unset: use `family.json` in
    /// the output directory when present, otherwise construct the family
    /// from the keys above in memory.
    pub family_file: Option<String>,

    // --- budgets ----------------------------------------------------------
    pub max_cube_points: usize,
    /// Largest vertex count solved with the dense eigensolver.
    pub dense_cutoff: usize,
    /// Largest permutation degree accepted by certify.
    pub max_bsgs_degree: usize,
    /// Vertex budget for graph construction (Cayley enumeration, tuples).
    pub max_vertices: usize,

    // --- spectral ---------------------------------------------------------
    /// "auto", "dense", "power", or "lanczos".
    pub solver: String,
    pub tolerance: f64,
    /// "schreier_points", "schreier_tuples", or "cayley".
    pub graph: String,
    /// Tuple length for the tuple graph.
    pub tuple_r: usize,

    // --- walks ------------------------------------------------------------
    /// "mixing", "statistics", or "transitivity".
    pub walk_kind: String,
    /// Horizon of the exact mixing curve.
    pub steps: usize,
    /// Word length for statistics; unset means ceil(8·n·ln n).
    pub length: Option<usize>,
    pub samples: usize,
    /// Tuple size routed by the transitivity probe (full-scale reference:
    /// tuples of K^(5/4) points).
    pub probe_r: usize,
    /// Move budget of the probe (full-scale reference: 440 set elements).
    pub probe_t: usize,
    pub probe_pairs: usize,

    // --- characters -------------------------------------------------------
    /// Symmetric-group degree for the table and the decay scan.
    pub chars_n: usize,
    /// Exponent multiplier checked by the scan.
    pub scan_c: f64,
    /// Floor constant of the decay base.
    pub scan_q: f64,
    /// First-row cap; unset means n − ceil(n^(1/4)).
    pub scan_lambda1_cap: Option<usize>,
    /// Class-support floor; unset means n/2.
    pub scan_support_floor: Option<usize>,

    // --- baseline ---------------------------------------------------------
    /// "cayley_elements" or "schreier_points".
    pub baseline_mode: String,
    /// Order of the cyclic group the baseline draws from.
    pub baseline_order: usize,
    pub baseline_set_size: usize,
    pub baseline_trials: usize,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        ExperimentConfig {
            k_side: 7,
            d: 2,
            p: 2,
            m: 1,
            m_mat: 3,
            enumeration: "projective_plane".into(),
            style: "involution".into(),
            family_kind: "cube_union".into(),
            pad_n: None,
            projections_only: false,
            seed: 0,
            family_file: None,
            max_cube_points: 100_000,
            dense_cutoff: 4000,
            max_bsgs_degree: 512,
            max_vertices: 100_000,
            solver: "auto".into(),
            tolerance: 1e-10,
            graph: "schreier_points".into(),
            tuple_r: 2,
            walk_kind: "mixing".into(),
            steps: 200,
            length: None,
            samples: 10_000,
            probe_r: 2,
            probe_t: 12,
            probe_pairs: 2000,
            chars_n: 8,
            scan_c: 1.0,
            scan_q: 0.9,
            scan_lambda1_cap: None,
            scan_support_floor: None,
            baseline_mode: "cayley_elements".into(),
            baseline_order: 1000,
            baseline_set_size: 2,
            baseline_trials: 20,
        }
    }
}

impl ExperimentConfig {
    /// Parses a config document, materializing defaults. Unknown keys and
    /// malformed values are reported by name.
    pub fn from_json(text: &str) -> Result<ExperimentConfig> {
        serde_json::from_str(text)
            .map_err(|e| LabError::Invalid(format!("config error: {e}")))
    }

    /// Loads the file, or yields the all-defaults config when no path is
    /// given.
    pub fn load(path: Option<&Path>) -> Result<ExperimentConfig> {
        match path {
            None => Ok(ExperimentConfig::default()),
            Some(p) => {
                let text = std::fs::read_to_string(p).map_err(|e| {
                    LabError::Invalid(format!("config error: cannot read {}: {e}", p.display()))
                })?;
                ExperimentConfig::from_json(&text)
            }
        }
    }

    pub fn enum_kind(&self) -> Result<EnumKind> {
        match self.enumeration.as_str() {
            "projective_plane" => Ok(EnumKind::ProjectivePlane),
            "nonzero_vectors" => Ok(EnumKind::NonzeroVectors),
            other => Err(LabError::Invalid(format!(
                "unknown enumeration '{other}' (projective_plane | nonzero_vectors)"
            ))),
        }
    }

    pub fn gen_style(&self) -> Result<GenStyle> {
        match self.style.as_str() {
            "involution" => Ok(GenStyle::Involution),
            "elementary" => Ok(GenStyle::Elementary),
            other => Err(LabError::Invalid(format!(
                "unknown style '{other}' (involution | elementary)"
            ))),
        }
    }

    pub fn graph_kind(&self) -> Result<GraphKind> {
        match self.graph.as_str() {
            "schreier_points" => Ok(GraphKind::SchreierPoints),
            "schreier_tuples" => Ok(GraphKind::SchreierTuples),
            "cayley" => Ok(GraphKind::Cayley),
            other => Err(LabError::Invalid(format!(
                "unknown graph '{other}' (schreier_points | schreier_tuples | cayley)"
            ))),
        }
    }

    /// Resolves the solver choice for a graph of `n` vertices.
    pub fn eigen_method(&self, n: usize) -> Result<EigenMethod> {
        match self.solver.as_str() {
            "auto" => Ok(if n <= self.dense_cutoff {
                EigenMethod::Dense
            } else {
                EigenMethod::Lanczos
            }),
            "dense" => Ok(EigenMethod::Dense),
            "power" => Ok(EigenMethod::PowerDeflation),
            "lanczos" => Ok(EigenMethod::Lanczos),
            other => Err(LabError::Invalid(format!(
                "unknown solver '{other}' (auto | dense | power | lanczos)"
            ))),
        }
    }

    pub fn baseline_mode(&self) -> Result<BaselineMode> {
        match self.baseline_mode.as_str() {
            "cayley_elements" => Ok(BaselineMode::CayleyElements),
            "schreier_points" => Ok(BaselineMode::SchreierPoints),
            other => Err(LabError::Invalid(format!(
                "unknown baseline_mode '{other}' (cayley_elements | schreier_points)"
            ))),
        }
    }

    /// The cube/local-action pair the construction keys describe.
    pub fn build_context(&self) -> Result<(CubeIndex, LocalAction)> {
        let local =
            LocalAction::new(self.p, self.m, self.m_mat, self.gen_style()?, self.enum_kind()?)?;
        if local.k_points() as u64 != self.k_side {
            return Err(LabError::Invalid(format!(
                "the local action permutes {} points but k_side is {}",
                local.k_points(),
                self.k_side
            )));
        }
        let cube = CubeIndex::new(self.k_side, self.d, self.max_cube_points)?;
        Ok((cube, local))
    }

    /// Builds the generating family the construction keys describe:
    /// the per-copy power set embedded into the cube, optionally padded up
    /// to a larger degree and optionally extended by an odd element.
    pub fn build_family(&self) -> Result<GeneratingFamily> {
        let (cube, local) = self.build_context()?;
        let copies = cube.n() / cube.k_side() as usize;
        let power = if self.projections_only {
            power_generating_set_projections_only(&local, copies, self.seed)?
        } else {
            power_generating_set(&local, copies, self.seed)?
        };
        let base = build_cube_family(&cube, &local, &power)?;
        match self.family_kind.as_str() {
            "cube_union" => Ok(base),
            "padded" | "sym_padded" => {
                let n = self
                    .pad_n
                    .ok_or_else(|| LabError::Invalid("padded kinds need the pad_n key".into()))?;
                let padded = pad_to_all_n(n, &base)?;
                if self.family_kind == "padded" {
                    Ok(padded)
                } else {
                    sym_variant(&padded, None)
                }
            }
            other => Err(LabError::Invalid(format!(
                "unknown family_kind '{other}' (cube_union | padded | sym_padded)"
            ))),
        }
    }

    /// Default word length for statistics walks: ceil(8·n·ln n).
    pub fn word_length(&self, degree: usize) -> usize {
        self.length
            .unwrap_or_else(|| (8.0 * degree as f64 * (degree as f64).ln()).ceil() as usize)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_document_materializes_every_default() {
        let cfg = ExperimentConfig::from_json("{}").unwrap();
        assert_eq!(cfg, ExperimentConfig::default());
        assert_eq!(cfg.k_side, 7);
        assert_eq!(cfg.chars_n, 8);
    }

    #[test]
    fn unknown_keys_are_rejected_by_name() {
        let err = ExperimentConfig::from_json(r#"{"k_sdie": 7}"#).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("k_sdie"), "message should name the key: {msg}");
        assert_eq!(err.exit_code(), 2);
    }

    #[test]
    fn partial_documents_override_only_their_keys() {
        let cfg = ExperimentConfig::from_json(r#"{"d": 3, "seed": 9}"#).unwrap();
        assert_eq!(cfg.d, 3);
        assert_eq!(cfg.seed, 9);
        assert_eq!(cfg.k_side, 7);
    }

    #[test]
    fn enum_fields_parse_and_reject() {
        let mut cfg = ExperimentConfig::default();
        assert_eq!(cfg.enum_kind().unwrap(), EnumKind::ProjectivePlane);
        assert_eq!(cfg.graph_kind().unwrap(), GraphKind::SchreierPoints);
        assert_eq!(cfg.eigen_method(10).unwrap(), EigenMethod::Dense);
        assert_eq!(cfg.eigen_method(100_000).unwrap(), EigenMethod::Lanczos);
        cfg.solver = "qr".into();
        assert!(cfg.eigen_method(10).is_err());
        cfg.enumeration = "affine".into();
        assert!(cfg.enum_kind().is_err());
    }

    #[test]
    fn default_word_length_scales_as_n_log_n() {
        let cfg = ExperimentConfig::default();
        assert_eq!(cfg.word_length(49), (8.0 * 49.0 * (49.0f64).ln()).ceil() as usize);
        let explicit = ExperimentConfig::from_json(r#"{"length": 10}"#).unwrap();
        assert_eq!(explicit.word_length(49), 10);
    }

    #[test]
    fn config_round_trips_with_all_fields_present() {
        let cfg = ExperimentConfig::default();
        let text = serde_json::to_string_pretty(&cfg).unwrap();
        for key in ["k_side", "dense_cutoff", "scan_q", "baseline_trials", "walk_kind"] {
            assert!(text.contains(key), "snapshot must materialize {key}");
        }
        let back = ExperimentConfig::from_json(&text).unwrap();
        assert_eq!(back, cfg);
    }

    #[test]
    fn build_context_checks_the_side_length() {
        let mut cfg = ExperimentConfig::default();
        cfg.k_side = 8;
        assert!(cfg.build_context().is_err());
        cfg.k_side = 7;
        let (cube, local) = cfg.build_context().unwrap();
        assert_eq!(cube.n(), 49);
        assert_eq!(local.k_points(), 7);
    }
}
