//! Shared fixtures for the benchmarks.

use cdist::lang::{compile, default_global_env, LazyValue};
use cdist::Sampler;

pub const GEOMETRIC: &str = include_str!("../../../programs/geometric.lcd");
pub const MY_NORMAL: &str = include_str!("../../../programs/my_normal.lcd");

pub fn program(src: &str) -> Sampler<LazyValue> {
    compile(src, &default_global_env(), Default::default())
        .expect("benchmark program compiles")
        .sampler
}
