fn main() {
    std::process::exit(geoloop::cli::run());
}
