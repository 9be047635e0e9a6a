//! The armordb daemon.
//!
//! ```text
//! cargo run --example server -- examples/data/armordb.conf
//! ```
//!
//! Settings may be overridden with `ARMORDB_*` variables, for example
//! `ARMORDB_LISTEN=0.0.0.0:9000`. Logging follows `RUST_LOG`.

fn main() {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("info")).init();
    let config = std::env::args_os().nth(1).map(std::path::PathBuf::from);
    std::process::exit(armordb::server::launch(config.as_deref()));
}
