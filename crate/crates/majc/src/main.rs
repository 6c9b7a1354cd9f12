use clap::Parser;
use majc::cli::{dispatch, Cli};

fn main() {
    let cli = Cli::parse();
    let to_file = cli.out.is_some();
    match dispatch(&cli) {
        Ok(report) => {
            let rendered = serde_json::to_string_pretty(&report)
                .expect("run reports always serialize");
            // Keep stdout clean for the artifact when it goes there.
            if to_file {
                println!("{rendered}");
            } else {
                eprintln!("{rendered}");
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}
