//! The two worked examples: the single-qubit `X`/`Z` splitting and the
//! periodic `XX` chain.

mod single_qubit;
mod xx_chain;

pub use single_qubit::{SingleQubitConstants, SingleQubitModel};
pub use xx_chain::{ChainBoundInputs, XXChainModel, MAX_LEN, MIN_LEN};

#[cfg(test)]
mod tests;
