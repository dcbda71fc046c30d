fn main() {
    std::process::exit(contracted_kernels::cli::run());
}
