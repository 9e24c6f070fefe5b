use std::process::ExitCode;

fn main() -> ExitCode {
    let args: Vec<String> = std::env::args().skip(1).collect();
    let json = args.iter().any(|a| a == "--json");
    let result = wallkit::cli::run(args);
    if json {
        println!("{}", serde_json::to_string_pretty(&result.machine).unwrap());
    } else {
        print!("{}", result.human);
        if !result.human.ends_with('\n') && !result.human.is_empty() {
            println!();
        }
    }
    ExitCode::from(result.exit_code as u8)
}
