//! Ball cache file naming under the cache directory (flag `--cache-dir`,
//! falling back to the `BRANCHLAB_CACHE_DIR` environment variable).

use branchlab_core::search::Arena;
use branchlab_core::GgsGroup;

pub const CACHE_DIR_ENV: &str = "BRANCHLAB_CACHE_DIR";

pub fn ball_file_name(group: &GgsGroup, radius: usize, arena: Arena) -> String {
    let e: Vec<String> = group.vector().e.iter().map(u32::to_string).collect();
    let arena_tag = match arena {
        Arena::Full => "full",
        Arena::ThetaKernel => "kernel",
    };
    format!(
        "ball_p{}_e{}_r{}_{}.tsv",
        group.p(),
        e.join("-"),
        radius,
        arena_tag
    )
}
