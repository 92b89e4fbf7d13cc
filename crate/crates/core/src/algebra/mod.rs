pub mod context;
pub mod derivation;
pub mod element;
pub mod rational;
pub mod trig;

pub use context::{AlgebraContext, Backend, Ctx, FormalManifold, GeneratorKind, GeneratorSpec, Lin};
pub use derivation::{commutator_on, exp_wedge, Derivation, Operator};
pub use element::{koszul, GradedElement, MonoKey, Parity};
pub use rational::{format_rational, frac, parse_rational, rat, GaussianRational, Rational};
pub use trig::{canonical_mode, mode_norm, Mode, TrigPoly, Wave};
