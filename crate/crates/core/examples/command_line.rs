//! Drives the command-line front end in-process and prints what each
//! subcommand writes.
//!
//! Run with `cargo run --example command_line`.

use chisq_predictive::cli::run;

fn main() {
    let invocations: [&[&str]; 4] = [
        &[
            "density",
            "--prior",
            "hier",
            "--b-mode",
            "one",
            "--a",
            "0",
            "--n1",
            "2",
            "--n2",
            "2",
            "--p",
            "2",
            "--v",
            "1",
            "--w",
            "1",
            "--xnormsq",
            "2",
        ],
        &[
            "check", "--b-mode", "half", "--a", "6", "--n1", "3", "--n2", "3", "--p", "14",
        ],
        &[
            "risk", "--prior", "hier", "--b-mode", "one", "--a", "6", "--n1", "3", "--n2", "3", "--p", "14", "--theta",
            "0,20", "--reps", "2000", "--seed", "1",
        ],
        &[
            "risk", "--prior", "hier", "--b-mode", "one", "--a", "6", "--n1", "3", "--n2", "3", "--p", "14", "--theta",
            "0,20", "--method", "semi",
        ],
    ];
    for args in invocations {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("chisq-predictive").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        println!("$ chisq-predictive {}", args.join(" "));
        print!("{}{}", String::from_utf8_lossy(&out), String::from_utf8_lossy(&err));
        println!("(exit {code})\n");
    }
}
