fn main() {
    std::process::exit(las_synth::cli::run_cli(std::env::args_os()));
}
