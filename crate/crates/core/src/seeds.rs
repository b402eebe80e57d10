//! Seed signatures for well-known manifolds and knot complements.
//!
//! All of these are canonical 1-vertex triangulation signatures (the
//! 0-surgery of the unknot is 3-vertex) and make convenient starting points
//! for graph generation and for exercising the codec.

/// Minimal 1-vertex triangulation of the 3-sphere.
pub const S3: &str = "cMcabbgqs";
/// S² × S¹.
pub const S2XS1: &str = "cMcabbjaj";
/// Real projective 3-space.
pub const RP3: &str = "cMcabbgqw";
/// Lens space L(7,1).
pub const L71: &str = "eLAkbcbddhhjhk";
/// Lens space L(7,2).
pub const L72: &str = "cMcabbjqw";
/// The 3-torus.
pub const T3: &str = "gvLQQedfedffrwawrhh";
/// The Poincaré homology sphere.
pub const PHS: &str = "fvPQcdecedekrsnrs";
/// The Weeks manifold, the smallest closed hyperbolic 3-manifold.
pub const WEEKS: &str = "jLvAzQQcfeghighiiuquanobwwr";

/// The eight closed-manifold seeds with display names.
pub const CLOSED: &[(&str, &str)] = &[
    ("S3", S3),
    ("S2xS1", S2XS1),
    ("RP3", RP3),
    ("L(7,1)", L71),
    ("L(7,2)", L72),
    ("T3", T3),
    ("PHS", PHS),
    ("Weeks", WEEKS),
];

/// Knot complement seeds (ideal 1-vertex triangulations).
pub const KNOTS: &[(&str, &str)] = &[
    ("Unknot", "cMcabbgds"),
    ("Trefoil", "cPcbbbadu"),
    ("FigureEight", "cPcbbbiht"),
    ("5_1", "dLQbcccaekv"),
    ("5_2", "dLQbcccdero"),
    ("6_1", "eLPkbcddddcwjb"),
    ("8_2", "fLLQcbcdeeedowxxd"),
];

/// Closed manifolds obtained by 0- and 1-surgery on the unknot and trefoil.
pub const SURGERIES: &[(&str, &str)] = &[
    ("Unknot0", "cMcabbjaj"),
    ("Unknot1", "cMcabbgag"),
    ("Trefoil0", "gvLQQcdefeffnjndspx"),
    ("Trefoil1", "hLLLQkcdefgfgghsdaenjw"),
];

/// Every seed signature above, in catalog order.
pub const ALL_SEEDS: &[&str] = &[
    S3,
    S2XS1,
    RP3,
    L71,
    L72,
    T3,
    PHS,
    WEEKS,
    "cMcabbgds",
    "cPcbbbadu",
    "cPcbbbiht",
    "dLQbcccaekv",
    "dLQbcccdero",
    "eLPkbcddddcwjb",
    "fLLQcbcdeeedowxxd",
    "cMcabbjaj",
    "cMcabbgag",
    "gvLQQcdefeffnjndspx",
    "hLLLQkcdefgfgghsdaenjw",
];
