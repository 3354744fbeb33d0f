fn main() {
    let code = voa_coset::run(std::env::args_os(), &mut std::io::stdout().lock());
    std::process::exit(code);
}
