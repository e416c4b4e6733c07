fn main() {
    std::process::exit(hilbert_core::cli::run());
}
