//! Search guards shared by the exponential procedures.

/// Name of the environment variable that multiplies every guard.
pub const GUARD_OVERRIDE_VAR: &str = "GBS_GUARD_OVERRIDE";

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub iso_vertices: usize,
    pub iso_edge_pairs: usize,
    pub ball_radius: usize,
    pub ball_width: usize,
    pub ball_vertices: usize,
    pub metric_radius: usize,
    pub profile_length: usize,
    pub direction_pairs: usize,
    pub partition_edges: usize,
    pub length_bound: u64,
}

impl Limits {
    pub const DEFAULT: Limits = Limits {
        iso_vertices: 12,
        iso_edge_pairs: 24,
        ball_radius: 6,
        ball_width: 10_000,
        ball_vertices: 4_000_000,
        metric_radius: 12,
        profile_length: 12,
        direction_pairs: 20,
        partition_edges: 16,
        length_bound: 12,
    };

    /// Every guard multiplied by `factor` (the length-function bound included).
    pub fn scaled(factor: usize) -> Limits {
        let f = factor.max(1);
        let d = Limits::DEFAULT;
        Limits {
            iso_vertices: d.iso_vertices * f,
            iso_edge_pairs: d.iso_edge_pairs * f,
            ball_radius: d.ball_radius * f,
            ball_width: d.ball_width * f,
            ball_vertices: d.ball_vertices * f,
            metric_radius: d.metric_radius * f,
            profile_length: d.profile_length * f,
            direction_pairs: d.direction_pairs * f,
            partition_edges: d.partition_edges * f,
            length_bound: d.length_bound * f as u64,
        }
    }

    /// Reads `GBS_GUARD_OVERRIDE`. A positive integer is used as the multiplier;
    /// any other non-empty value multiplies by 4.
    pub fn from_env() -> Limits {
        match std::env::var(GUARD_OVERRIDE_VAR) {
            Ok(v) if !v.trim().is_empty() => match v.trim().parse::<usize>() {
                Ok(f) if f >= 1 => Limits::scaled(f),
                _ => Limits::scaled(4),
            },
            _ => Limits::DEFAULT,
        }
    }
}

impl Default for Limits {
    fn default() -> Self {
        Limits::DEFAULT
    }
}
