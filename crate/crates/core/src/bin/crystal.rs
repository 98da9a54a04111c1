fn main() {
    let threads = std::env::var("CRYSTAL_THREADS").ok();
    let out = crystal_quadric::cli::run(std::env::args_os(), threads.as_deref());
    print!("{}", out.stdout);
    eprint!("{}", out.stderr);
    std::process::exit(out.code);
}
