//! Samplers: functions from random bit tapes to (lazy) values.

pub mod monad;
pub mod prims;
pub mod programs;
pub mod report;
pub mod tape;

pub use monad::{bind, ret, Sampler};
pub use prims::{
    bernoulli, bernoulli_with, bot_samp, bot_samp_bot, cantor, normal, normal_with, std_bernoulli,
    std_geometric, std_geometric_with, std_normal, std_normal_with, std_uniform, uniform,
    uniform_with, Fuel,
};
pub use programs::{always_div, maybe_bot, maybe_bot_prime, my_normal, my_normal_prime, never_div};
pub use report::{render_on, sample_record, Render, Rendered, SampleRecord};
pub use tape::{BitTape, TapeSource};
