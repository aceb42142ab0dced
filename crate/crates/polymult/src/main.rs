//! Binary entry point: parse arguments, dispatch, exit with the status
//! documented in the [`polymult::cli`] module.

fn main() {
    std::process::exit(polymult::cli::run());
}
