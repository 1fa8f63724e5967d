//! Test support shared by the workspace: seeded generators for datasheets,
//! tables and policies, plus reference oracles written independently of the
//! library code they check.

pub mod fixtures;
pub mod gen;
pub mod oracle;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

pub type TestRng = ChaCha8Rng;

pub fn rng(seed: u64) -> TestRng {
    ChaCha8Rng::seed_from_u64(seed)
}
