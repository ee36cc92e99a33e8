//! Command-line front end.

use crate::commands::{
    cmd_bi_sim, cmd_concentration, cmd_embed, cmd_generate, cmd_hill, cmd_limits, cmd_tailmeasure, Ctx,
};
use crate::error::{CliError, CliResult};
use crate::selftest::run_selftest;
use crate::settings::{Settings, OUTPUT_DIR_ENV};
use clap::{Arg, ArgAction, ArgMatches, Command};
use std::ffi::OsString;
use std::io::Write;
use std::path::PathBuf;
use std::time::Instant;

struct Key {
    name: &'static str,
    help: &'static str,
    switch: bool,
}

const fn val(name: &'static str, help: &'static str) -> Key {
    Key { name, help, switch: false }
}

const fn sw(name: &'static str, help: &'static str) -> Key {
    Key { name, help, switch: true }
}

const GLOBAL: &[Key] = &[
    val("alpha", "probability of the in-attachment scheme [0.5]"),
    val("delta-in", "in-degree offset [1]"),
    val("delta-out", "out-degree offset [1]"),
    val("seed", "master seed [1]"),
    val("jobs", "worker threads, 0 = all cores [0]"),
    val("out-dir", "output directory [$PALAB_OUTPUT_DIR or .]"),
];

type Runner = fn(&mut Ctx) -> CliResult<Vec<PathBuf>>;

struct Sub {
    name: &'static str,
    about: &'static str,
    keys: &'static [Key],
    runner: Option<Runner>,
}

const SUBS: &[Sub] = &[
    Sub {
        name: "generate",
        about: "Grow one graph and write its joint degree census",
        keys: &[val("n", "number of nodes [1e5]"), sw("edges", "also write the edge list")],
        runner: Some(cmd_generate),
    },
    Sub {
        name: "embed",
        about: "Run the continuous-time embedding and write per-node records",
        keys: &[val("n", "number of births [1000]")],
        runner: Some(cmd_embed),
    },
    Sub {
        name: "bi-sim",
        about: "Simulate birth-immigration processes and compare with the gamma limit",
        keys: &[
            val("lambda", "birth rate [1]"),
            val("theta", "immigration rate [1]"),
            val("init", "initial value [0]"),
            val("t", "time horizon [ln(1000)/lambda]"),
            val("replicates", "number of trajectories [1e4]"),
            sw("shotnoise", "use the shot-noise construction (needs init=0)"),
            val("budget", "jump budget per trajectory [1e8]"),
        ],
        runner: Some(cmd_bi_sim),
    },
    Sub {
        name: "limits",
        about: "Tabulate the limiting degree laws",
        keys: &[
            sw("table", "also build the joint table"),
            val("tail-tol", "marginal ccdf cut-off [1e-10]"),
            val("k-max", "joint cells kept: i + j <= k-max [adaptive]"),
            val("i", "print marginal and joint values at this in-degree"),
            val("j", "print marginal and joint values at this out-degree"),
        ],
        runner: Some(cmd_limits),
    },
    Sub {
        name: "hill",
        about: "Hill estimator consistency across graph sizes",
        keys: &[
            val("n", "ascending sizes, comma separated [1e4,1e5,1e6]"),
            val("replicates", "replicates [50]"),
            val("k", "order statistics used [ceil(sqrt(n ln n))]"),
        ],
        runner: Some(cmd_hill),
    },
    Sub {
        name: "tailmeasure",
        about: "Empirical versus limiting tail measures of one graph",
        keys: &[
            val("n", "number of nodes [1e6]"),
            val("k", "intermediate sequence value [ceil(sqrt(n ln n))]"),
            val("grid-x", "rectangle corners in the in-coordinate [0.25,0.5,1,2]"),
            val("grid-y", "rectangle corners in the out-coordinate [0.25,0.5,1,2]"),
            val("grid-1d", "evaluation points of the marginal measures [0.5,1,1.5,2,3,4,5]"),
            val("normalization", "marginal scaling: scaling or order-statistic [scaling]"),
        ],
        runner: Some(cmd_tailmeasure),
    },
    Sub {
        name: "concentration",
        about: "Fluctuations of joint tail counts across replicates",
        keys: &[val("n", "ascending sizes [1e4,1e5,1e6]"), val("replicates", "replicates [30]")],
        runner: Some(cmd_concentration),
    },
    Sub { name: "selftest", about: "Internal consistency suite", keys: &[], runner: None },
];

fn arg_for(k: &Key, global: bool) -> Arg {
    let a = Arg::new(k.name).long(k.name).help(k.help).global(global);
    if k.switch {
        a.action(ArgAction::SetTrue)
    } else {
        a.num_args(1).value_name("VALUE")
    }
}

pub fn command() -> Command {
    let mut cmd = Command::new("palab")
        .version(crate::output::VERSION)
        .about("Directed preferential attachment laboratory")
        .after_help(format!(
            "Exit codes: 0 success, 2 configuration error, 3 numeric failure, 4 self-test failure.\n\
             The output directory defaults to ${OUTPUT_DIR_ENV}."
        ))
        .subcommand_required(true)
        .arg(
            Arg::new("config")
                .long("config")
                .global(true)
                .num_args(1)
                .value_name("FILE")
                .help("key=value file; flags override it"),
        );
    for k in GLOBAL {
        cmd = cmd.arg(arg_for(k, true));
    }
    for s in SUBS {
        let mut sub = Command::new(s.name).about(s.about);
        for k in s.keys {
            sub = sub.arg(arg_for(k, false));
        }
        cmd = cmd.subcommand(sub);
    }
    cmd
}

fn collect_flags(m: &ArgMatches, keys: &[&Key]) -> Vec<(String, String)> {
    let mut out = Vec::new();
    for k in keys {
        if k.switch {
            if m.get_flag(k.name) {
                out.push((k.name.to_string(), "true".to_string()));
            }
        } else if let Some(v) = m.get_one::<String>(k.name) {
            out.push((k.name.to_string(), v.clone()));
        }
    }
    out
}

fn dispatch(sub: &Sub, m: &ArgMatches, report: &mut dyn Write) -> CliResult<()> {
    let keys: Vec<&Key> = GLOBAL.iter().chain(sub.keys).collect();
    let flags = collect_flags(m, &keys);
    let settings = match m.get_one::<String>("config") {
        Some(path) => {
            let known: Vec<&str> = keys.iter().map(|k| k.name).collect();
            Settings::load(path.as_ref(), &known, flags)?
        }
        None => Settings::new(Vec::new(), "", flags),
    };
    let Some(runner) = sub.runner else {
        return selftest(report);
    };
    let mut ctx = Ctx::new(sub.name, &settings, Box::new(&mut *report))?;
    let paths = runner(&mut ctx)?;
    drop(ctx);
    for p in paths {
        writeln!(report, "wrote {}", p.display()).ok();
    }
    Ok(())
}

fn selftest(report: &mut dyn Write) -> CliResult<()> {
    let start = Instant::now();
    let checks = run_selftest()?;
    let mut failed = Vec::new();
    for c in &checks {
        writeln!(report, "{} {}: {}", if c.pass { "PASS" } else { "FAIL" }, c.name, c.detail).ok();
        if !c.pass {
            failed.push(c.name);
        }
    }
    writeln!(report, "selftest finished in {:.1} s", start.elapsed().as_secs_f64()).ok();
    if failed.is_empty() {
        Ok(())
    } else {
        Err(CliError::Acceptance(failed.join(", ")))
    }
}

/// Parses `args` (program name first), runs the command, and returns the exit code.
pub fn run<I, T>(args: I, report: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let matches = match command().try_get_matches_from(args) {
        Ok(m) => m,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let (name, sub_m) = matches.subcommand().expect("subcommand is required");
    let sub = SUBS.iter().find(|s| s.name == name).expect("registered subcommand");
    match dispatch(sub, sub_m, report) {
        Ok(()) => 0,
        Err(e) => {
            eprintln!("palab {name}: {e}");
            e.exit_code()
        }
    }
}
