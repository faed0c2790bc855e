use clap::Parser;

fn main() {
    let cli = ainf::Cli::parse();
    let code = ainf::run(cli, &mut std::io::stdout().lock(), &mut std::io::stderr().lock());
    std::process::exit(code);
}
