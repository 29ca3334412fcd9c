fn main() {
    std::process::exit(dea_outage::cli::main_with_args(std::env::args_os()));
}
