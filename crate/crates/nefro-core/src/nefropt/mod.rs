//! Constraint-substitution optimization and CTF/accuracy evaluation.
