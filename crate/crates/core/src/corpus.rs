//! Bundled model files.

use crate::model::Model;
use crate::parser::parse_model;
use crate::Result;

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub key: &'static str,
    pub source: &'static str,
}

impl Fixture {
    pub fn model(&self) -> Result<Model> {
        parse_model(self.source)
    }
}

/// The models analysed by `analyze --corpus`, in report order.
pub const CORPUS: &[Fixture] = &[
    Fixture { key: "relativistic", source: include_str!("../corpus/relativistic.model") },
    Fixture { key: "bilocal", source: include_str!("../corpus/bilocal.model") },
    Fixture { key: "cawley", source: include_str!("../corpus/cawley.model") },
    Fixture { key: "frenkel", source: include_str!("../corpus/frenkel.model") },
    Fixture { key: "second_class", source: include_str!("../corpus/second_class.model") },
];

/// Further fixtures used by the test suites.
pub const EXTRA: &[Fixture] = &[
    Fixture { key: "relativistic_massless", source: include_str!("../corpus/relativistic_massless.model") },
    Fixture { key: "free_particle", source: include_str!("../corpus/free_particle.model") },
];

pub fn fixture(key: &str) -> Option<Fixture> {
    CORPUS.iter().chain(EXTRA).copied().find(|f| f.key == key)
}

/// Parses a bundled model by key.
pub fn load(key: &str) -> Result<Model> {
    let f = fixture(key).ok_or_else(|| crate::Error::Inconclusive(format!("no bundled model `{key}`")))?;
    f.model()
}
