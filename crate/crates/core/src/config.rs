use std::sync::OnceLock;

/// Environment variable that overrides [`Limits::max_universe`].
pub const MAX_N_ENV: &str = "ENTROPLEX_MAX_N";

/// Hard ceiling imposed by the 64-bit subset encoding.
pub const HARD_MAX_UNIVERSE: usize = 63;

/// Size caps for the exponential and pseudo-polynomial procedures.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Limits {
    /// Largest universe accepted by parsers and by step-function enumeration.
    pub max_universe: usize,
    /// Largest total multiplicity of a set representation.
    pub multiplicity_cap: u64,
    /// Largest universe for the elemental Shannon-cone programs.
    pub polymatroid_max_n: usize,
    /// Largest universe for the step-function weight program.
    pub step_bound_max_n: usize,
    /// Largest universe for enumerating monotone Boolean functions.
    pub boolean_enum_max_n: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            max_universe: 24,
            multiplicity_cap: 100_000,
            polymatroid_max_n: 10,
            step_bound_max_n: 16,
            boolean_enum_max_n: 5,
        }
    }
}

impl Limits {
    /// Defaults, with `max_universe` taken from `ENTROPLEX_MAX_N` when set.
    pub fn from_env() -> Self {
        let mut limits = Limits::default();
        if let Some(n) = std::env::var(MAX_N_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            limits.max_universe = n.clamp(1, HARD_MAX_UNIVERSE);
        }
        limits
    }

    /// Process-wide limits, read from the environment once.
    pub fn current() -> &'static Limits {
        static LIMITS: OnceLock<Limits> = OnceLock::new();
        LIMITS.get_or_init(Limits::from_env)
    }
}
