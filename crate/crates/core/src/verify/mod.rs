//! Reproduction harness for the five bundled numerical examples and
//! property oracles for the supporting lemmas. This module is the engine
//! behind the acceptance suite and the `example` / `verify-all` commands.

mod lemmas;
mod reports;

pub use lemmas::{lemma_leftinv_oracle, lemma_pd_oracle, lemma_riccati_oracle, RiccatiAgreement};

pub use reports::{
    run_all_examples, run_example, run_example_in, ExampleReport, Quantity, VerdictExpectation,
    VerifyError, QUANTITY_TOLERANCE,
};
