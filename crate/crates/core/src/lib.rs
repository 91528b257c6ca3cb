pub mod error;
pub mod fuzzy;
pub mod io;
pub mod locale;
pub mod rational;
pub mod sheaf;
pub mod simplicial;
pub mod stalks;
pub mod vr;

pub use error::{Error, Result};
pub use locale::{IntervalLocale, LocaleElement, Orientation, ProductLocale};
pub use rational::Rational;
