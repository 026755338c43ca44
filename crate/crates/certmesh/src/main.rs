fn main() {
    std::process::exit(certmesh::cli::run());
}
