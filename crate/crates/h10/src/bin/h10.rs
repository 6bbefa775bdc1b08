//! Command-line front end: run the interpreters, apply the compilers and
//! reducers, and search for solutions with the bounded solvers.
//!
//! Exit codes: 0 on success, 1 for a negative result (out of fuel, no
//! solution within the bound, failed verification), 2 for malformed input,
//! 3 for a compilation or layout error.

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use h10::compilers::{
    godel_encode, mm_fractran_report, mm_remove_self_loops, mm_to_fractran, ra_mm_report,
    ra_mm_simulator,
};
use h10::dio::{
    dprm_pipeline_with, elem_to_single, expo_fun, finitize_vars, form_to_elem,
    fractran_halting_formula_with, fun_var, h10_to_h10z, table_pow, DioCstr, DioForm, DioSingle,
    PowBuilder, Valuation, ZPoly,
};
use h10::json::{
    fractran_from_json, fractran_to_json, nat_from_json, nat_to_json, nats_from_json,
    nats_to_json, read_input, write_output, JsonError,
};
use h10::models::lterm::LOutcome;
use h10::models::{
    fractran_run, fractran_step, l_eval, mm_run, mm_step, ra_eval, LTerm, MMProg, MMState,
    RecAlg, RunOutcome,
};
use h10::murec_dio::{equation_vars, ra_find};
use h10::solver::{sat_cstrs, sat_single, sat_z, verify_z, SatOutcome};
use h10::{nat, Nat};

#[derive(Parser)]
#[command(name = "h10", version, about = "Computation models and Diophantine reductions")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run one of the interpreters on a program and an input.
    #[command(subcommand)]
    Run(RunCmd),
    /// Translate between machine models.
    #[command(subcommand)]
    Compile(CompileCmd),
    /// Apply one of the Diophantine reductions.
    #[command(subcommand)]
    Reduce(ReduceCmd),
    /// Bounded brute-force solution search.
    #[command(subcommand)]
    Solve(SolveCmd),
    /// Cross-check translations against the interpreters and solvers.
    #[command(subcommand)]
    Verify(VerifyCmd),
}

#[derive(Args)]
struct Io {
    /// Input file (`-` for stdin).
    input: String,
    /// Output file (`-` for stdout).
    #[arg(long, default_value = "-")]
    out: String,
}

#[derive(Subcommand)]
enum RunCmd {
    /// Minsky machine: program JSON plus `--regs` initial registers.
    Mm {
        #[command(flatten)]
        io: Io,
        /// Initial register file as a JSON list, e.g. `[3,0]`.
        #[arg(long, default_value = "[]")]
        regs: String,
        #[arg(long, default_value_t = 10_000)]
        fuel: u64,
        /// Print every intermediate state to stderr.
        #[arg(long)]
        trace: bool,
    },
    /// FRACTRAN: program JSON plus a start natural.
    Fractran {
        #[command(flatten)]
        io: Io,
        /// Start value (decimal, may exceed 64 bits).
        #[arg(long)]
        start: String,
        #[arg(long, default_value_t = 10_000)]
        fuel: u64,
        #[arg(long)]
        trace: bool,
    },
    /// Mu-recursive algorithm: term JSON plus `--args`.
    Murec {
        #[command(flatten)]
        io: Io,
        /// Arguments as a JSON list.
        #[arg(long, default_value = "[]")]
        args: String,
        #[arg(long, default_value_t = 1_000_000)]
        fuel: u64,
    },
    /// Weak call-by-value lambda term (de Bruijn JSON).
    Lterm {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value_t = 100_000)]
        fuel: u64,
    },
}

#[derive(Subcommand)]
enum CompileCmd {
    /// Remove DEC self-loops from a machine starting at PC 1.
    MmDeselfloop {
        #[command(flatten)]
        io: Io,
    },
    /// Translate a self-loop-free machine to a FRACTRAN program.
    MmToFractran {
        #[command(flatten)]
        io: Io,
        /// Also print a size report to stderr.
        #[arg(long)]
        report: bool,
    },
    /// Compile a mu-recursive algorithm to a Minsky machine simulator.
    MurecToMm {
        #[command(flatten)]
        io: Io,
        #[arg(long)]
        report: bool,
    },
}

/// Which exponential the formula builders should use.
#[derive(Clone, Copy, ValueEnum)]
enum PowChoice {
    /// The faithful Diophantine exponential (large output).
    Expo,
    /// A tiny finite lookup standing in for the exponential: the output has
    /// the same shape and stage sizes but is only meaningful structurally.
    Compact,
}

fn with_pow<T>(choice: PowChoice, f: impl FnOnce(&PowBuilder) -> T) -> T {
    match choice {
        PowChoice::Expo => f(&expo_fun),
        PowChoice::Compact => f(&table_pow(&[(2, 1), (3, 1)])),
    }
}

#[derive(Subcommand)]
enum ReduceCmd {
    /// Formula to elementary constraints (the satisfiability-preserving list).
    FormToElem {
        #[command(flatten)]
        io: Io,
    },
    /// Elementary constraints to a single polynomial equation.
    ElemToSingle {
        #[command(flatten)]
        io: Io,
    },
    /// Compact an equation's variables onto an initial segment.
    Finitize {
        #[command(flatten)]
        io: Io,
    },
    /// FRACTRAN halting (from start value `x_0`) as a formula.
    FractranToDio {
        #[command(flatten)]
        io: Io,
        #[arg(long, value_enum, default_value_t = PowChoice::Expo)]
        pow: PowChoice,
    },
    /// Full pipeline: Minsky machine to one equation over naturals.
    Dprm {
        #[command(flatten)]
        io: Io,
        /// Number of parameter registers (inputs) of the machine.
        #[arg(long, default_value_t = 1)]
        params: usize,
        /// `compact` keeps the output small enough to inspect; `expo` is
        /// the faithful construction and needs several GB beyond toy inputs.
        #[arg(long, value_enum, default_value_t = PowChoice::Compact)]
        pow: PowChoice,
        /// Where to write the equation itself (the report goes to `--out`).
        #[arg(long)]
        equation_out: Option<String>,
    },
    /// Equation over naturals to a signed polynomial (four-square blocks).
    H10ToH10z {
        #[command(flatten)]
        io: Io,
    },
    /// Equation over naturals to a mu-recursive solution search.
    H10ToMurec {
        #[command(flatten)]
        io: Io,
        /// Number of parameters of the resulting algorithm.
        #[arg(long, default_value_t = 0)]
        params: usize,
    },
}

#[derive(Subcommand)]
enum SolveCmd {
    /// Satisfy a list of elementary constraints.
    Cstrs {
        #[command(flatten)]
        io: Io,
        /// Parameter values as a JSON list.
        #[arg(long, default_value = "[]")]
        params: String,
        #[arg(long, default_value_t = 64)]
        bound: u64,
    },
    /// Satisfy a single equation.
    Single {
        #[command(flatten)]
        io: Io,
        #[arg(long, default_value = "[]")]
        params: String,
        #[arg(long, default_value_t = 64)]
        bound: u64,
    },
    /// Find an integer root of a signed polynomial.
    H10z {
        #[command(flatten)]
        io: Io,
        /// Number of integer variables.
        #[arg(long)]
        vars: usize,
        #[arg(long, default_value_t = 16)]
        bound: u64,
    },
}

#[derive(Subcommand)]
enum VerifyCmd {
    /// Check a machine and a FRACTRAN program stay in lockstep under the
    /// Godel encoding from a given start register file.
    Bisim {
        /// Minsky machine JSON.
        machine: String,
        /// FRACTRAN program JSON.
        fractran: String,
        #[arg(long, default_value = "[]")]
        regs: String,
        #[arg(long, default_value_t = 1_000)]
        fuel: u64,
    },
    /// Check a formula and an equation agree on all parameter tuples with
    /// entries below `--max`.
    Oracle {
        /// Formula JSON.
        formula: String,
        /// Equation JSON.
        equation: String,
        /// Number of parameters to sweep.
        #[arg(long, default_value_t = 1)]
        params: usize,
        /// Exclusive upper bound on parameter entries.
        #[arg(long, default_value_t = 4)]
        max: u64,
        /// Witness bound for both solvers.
        #[arg(long, default_value_t = 64)]
        bound: u64,
    },
}

/// Error wrapper mapping to exit codes.
enum Failure {
    /// Exit 1: the computation came back negative.
    Negative(String),
    /// Exit 2: the input could not be parsed.
    Input(String),
    /// Exit 3: a compiler or layout error.
    Compile(String),
}

impl From<JsonError> for Failure {
    fn from(e: JsonError) -> Self {
        Failure::Input(e.to_string())
    }
}

impl From<h10::compilers::CompileError> for Failure {
    fn from(e: h10::compilers::CompileError) -> Self {
        Failure::Compile(e.to_string())
    }
}

fn parse<T: serde::de::DeserializeOwned>(path: &str) -> Result<T, Failure> {
    let text = read_input(path)?;
    h10::json::from_str_deep(&text).map_err(|e| Failure::Input(format!("{}: {}", path, e)))
}

fn parse_value(path: &str) -> Result<Value, Failure> {
    let text = read_input(path)?;
    serde_json::from_str(&text).map_err(|e| Failure::Input(format!("{}: {}", path, e)))
}

fn parse_inline(what: &str, s: &str) -> Result<Value, Failure> {
    serde_json::from_str(s).map_err(|e| Failure::Input(format!("{}: {}", what, e)))
}

fn emit(out: &str, v: &Value) -> Result<(), Failure> {
    write_output(out, &serde_json::to_string(v).expect("serializable"))?;
    Ok(())
}

fn u64s(ns: &[Nat], what: &str) -> Result<Vec<u64>, Failure> {
    ns.iter()
        .map(|n| u64::try_from(n).map_err(|_| Failure::Input(format!("{} entry too large", what))))
        .collect()
}

fn main() {
    let cli = Cli::parse();
    // the reducers build and serialize formulas nesting tens of thousands
    // of binders deep; run everything on a roomy stack
    let result = std::thread::Builder::new()
        .stack_size(1 << 30)
        .spawn(move || dispatch(cli))
        .expect("spawn")
        .join()
        .expect("worker thread");
    let code = match result {
        Ok(()) => 0,
        Err(Failure::Negative(msg)) => {
            eprintln!("{}", msg);
            1
        }
        Err(Failure::Input(msg)) => {
            eprintln!("input error: {}", msg);
            2
        }
        Err(Failure::Compile(msg)) => {
            eprintln!("compile error: {}", msg);
            3
        }
    };
    std::process::exit(code);
}

fn dispatch(cli: Cli) -> Result<(), Failure> {
    match cli.cmd {
        Cmd::Run(c) => run_cmd(c),
        Cmd::Compile(c) => compile_cmd(c),
        Cmd::Reduce(c) => reduce_cmd(c),
        Cmd::Solve(c) => solve_cmd(c),
        Cmd::Verify(c) => verify_cmd(c),
    }
}

fn run_cmd(c: RunCmd) -> Result<(), Failure> {
    match c {
        RunCmd::Mm { io, regs, fuel, trace } => {
            let prog: MMProg = parse(&io.input)?;
            let regs = u64s(&nats_from_json(&parse_inline("--regs", &regs)?)?, "--regs")?;
            let mut regs = regs;
            regs.resize(prog.regs, 0);
            let st = MMState { pc: prog.start, regs };
            if trace {
                let mut cur = st.clone();
                for _ in 0..fuel {
                    eprintln!("{}", serde_json::to_string(&cur).unwrap());
                    match mm_step(&prog, &cur).map_err(|e| Failure::Input(e.to_string()))? {
                        Some(next) => cur = next,
                        None => break,
                    }
                }
            }
            let outcome = mm_run(&prog, st, fuel).map_err(|e| Failure::Input(e.to_string()))?;
            match outcome {
                RunOutcome::Halted { state, steps } => emit(
                    &io.out,
                    &json!({"halted": true, "steps": steps, "state": state}),
                ),
                RunOutcome::OutOfFuel { state } => {
                    emit(&io.out, &json!({"halted": false, "state": state}))?;
                    Err(Failure::Negative(format!("out of fuel after {} steps", fuel)))
                }
            }
        }
        RunCmd::Fractran { io, start, fuel, trace } => {
            let prog = fractran_from_json(&parse_value(&io.input)?)?;
            if !prog.is_regular() {
                return Err(Failure::Input("zero denominator in program".into()));
            }
            let x = nat_from_json(&parse_inline("--start", &start)?)?;
            if trace {
                let mut cur = x.clone();
                for _ in 0..fuel {
                    eprintln!("{}", cur);
                    match fractran_step(&prog, &cur) {
                        Some(next) => cur = next,
                        None => break,
                    }
                }
            }
            match fractran_run(&prog, x, fuel) {
                RunOutcome::Halted { state, steps } => emit(
                    &io.out,
                    &json!({"halted": true, "steps": steps, "value": nat_to_json(&state)}),
                ),
                RunOutcome::OutOfFuel { state } => {
                    emit(&io.out, &json!({"halted": false, "value": nat_to_json(&state)}))?;
                    Err(Failure::Negative(format!("out of fuel after {} steps", fuel)))
                }
            }
        }
        RunCmd::Murec { io, args, fuel } => {
            let f: RecAlg = parse(&io.input)?;
            let args = u64s(&nats_from_json(&parse_inline("--args", &args)?)?, "--args")?;
            match ra_eval(&f, &args, fuel).map_err(|e| Failure::Input(e.to_string()))? {
                Some(v) => emit(&io.out, &json!({"value": v})),
                None => Err(Failure::Negative("out of fuel".into())),
            }
        }
        RunCmd::Lterm { io, fuel } => {
            let t: LTerm = parse(&io.input)?;
            match l_eval(&t, fuel).map_err(|e| Failure::Input(e.to_string()))? {
                LOutcome::Value(v) => emit(&io.out, &json!({"value": v})),
                LOutcome::OutOfFuel => Err(Failure::Negative("out of fuel".into())),
                LOutcome::Stuck => Err(Failure::Input("stuck application".into())),
            }
        }
    }
}

fn compile_cmd(c: CompileCmd) -> Result<(), Failure> {
    match c {
        CompileCmd::MmDeselfloop { io } => {
            let prog: MMProg = parse(&io.input)?;
            let out = mm_remove_self_loops(&prog)?;
            emit(&io.out, &serde_json::to_value(&out).unwrap())
        }
        CompileCmd::MmToFractran { io, report } => {
            let prog: MMProg = parse(&io.input)?;
            let target = mm_to_fractran(&prog)?;
            if report {
                let r = mm_fractran_report(&prog, &target);
                eprintln!("{}", serde_json::to_string(&r).unwrap());
            }
            emit(&io.out, &fractran_to_json(&target))
        }
        CompileCmd::MurecToMm { io, report } => {
            let f: RecAlg = parse(&io.input)?;
            let (_, prog) = ra_mm_simulator(&f)?;
            if report {
                let r = ra_mm_report(&f)?;
                eprintln!("{}", serde_json::to_string(&r).unwrap());
            }
            emit(&io.out, &serde_json::to_value(&prog).unwrap())
        }
    }
}

fn reduce_cmd(c: ReduceCmd) -> Result<(), Failure> {
    match c {
        ReduceCmd::FormToElem { io } => {
            let a: DioForm = parse(&io.input)?;
            let repr = form_to_elem(&a, 0);
            emit(&io.out, &serde_json::to_value(&repr).unwrap())
        }
        ReduceCmd::ElemToSingle { io } => {
            let l: Vec<DioCstr> = parse(&io.input)?;
            let e = elem_to_single(&l);
            emit(&io.out, &serde_json::to_value(&e).unwrap())
        }
        ReduceCmd::Finitize { io } => {
            let e: DioSingle = parse(&io.input)?;
            let (n, out) = finitize_vars(&e);
            emit(&io.out, &json!({"vars": n, "equation": out}))
        }
        ReduceCmd::FractranToDio { io, pow } => {
            let prog = fractran_from_json(&parse_value(&io.input)?)?;
            if !prog.is_regular() {
                return Err(Failure::Input("zero denominator in program".into()));
            }
            let form = with_pow(pow, |p| {
                fractran_halting_formula_with(p, &prog, &fun_var(0))
            });
            emit(&io.out, &serde_json::to_value(&form).unwrap())
        }
        ReduceCmd::Dprm { io, params, pow, equation_out } => {
            let prog: MMProg = parse(&io.input)?;
            if params > prog.regs {
                return Err(Failure::Input(format!(
                    "{} parameters but only {} registers",
                    params, prog.regs
                )));
            }
            // deep intermediate formulas: run on a large dedicated stack
            let child = std::thread::Builder::new()
                .stack_size(1 << 30)
                .spawn(move || with_pow(pow, |p| dprm_pipeline_with(p, &prog, params)))
                .expect("spawn");
            let out = child.join().expect("pipeline thread")?;
            if let Some(path) = equation_out {
                write_output(&path, &serde_json::to_string(&out.equation).unwrap())?;
            }
            emit(&io.out, &serde_json::to_value(&out).unwrap())
        }
        ReduceCmd::H10ToH10z { io } => {
            let v = parse_value(&io.input)?;
            let (n, e): (usize, DioSingle) = match (v.get("vars"), v.get("equation")) {
                (Some(n), Some(e)) => (
                    n.as_u64().ok_or_else(|| Failure::Input("vars".into()))? as usize,
                    serde_json::from_value(e.clone())
                        .map_err(|e| Failure::Input(e.to_string()))?,
                ),
                _ => {
                    let e: DioSingle =
                        serde_json::from_value(v).map_err(|e| Failure::Input(e.to_string()))?;
                    let n = equation_vars(&e);
                    (n, e)
                }
            };
            let (zvars, poly) = h10_to_h10z(n, &e);
            emit(&io.out, &json!({"vars": zvars, "poly": poly}))
        }
        ReduceCmd::H10ToMurec { io, params } => {
            let e: DioSingle = parse(&io.input)?;
            let f = ra_find(&e, params);
            emit(&io.out, &serde_json::to_value(&f).unwrap())
        }
    }
}

fn solve_cmd(c: SolveCmd) -> Result<(), Failure> {
    match c {
        SolveCmd::Cstrs { io, params, bound } => {
            let l: Vec<DioCstr> = parse(&io.input)?;
            let nu = Valuation::of_prefix(nats_from_json(&parse_inline("--params", &params)?)?);
            match sat_cstrs(&l, &nu, &nat(bound)) {
                SatOutcome::Sat(sol) => emit(&io.out, &json!({"solution": nats_to_json(&sol)})),
                SatOutcome::NoneUpTo(b) => {
                    Err(Failure::Negative(format!("no solution with values <= {}", b)))
                }
            }
        }
        SolveCmd::Single { io, params, bound } => {
            let e: DioSingle = parse(&io.input)?;
            let nu = Valuation::of_prefix(nats_from_json(&parse_inline("--params", &params)?)?);
            match sat_single(&e, &nu, &nat(bound)) {
                SatOutcome::Sat(sol) => emit(&io.out, &json!({"solution": nats_to_json(&sol)})),
                SatOutcome::NoneUpTo(b) => {
                    Err(Failure::Negative(format!("no solution with values <= {}", b)))
                }
            }
        }
        SolveCmd::H10z { io, vars, bound } => {
            let v = parse_value(&io.input)?;
            let poly: ZPoly = match v.get("poly") {
                Some(p) => serde_json::from_value(p.clone())
                    .map_err(|e| Failure::Input(e.to_string()))?,
                None => serde_json::from_value(v).map_err(|e| Failure::Input(e.to_string()))?,
            };
            match sat_z(&poly, vars, &nat(bound)) {
                Some(sol) => {
                    assert!(verify_z(&poly, &sol));
                    let ints: Vec<String> = sol.iter().map(|i| i.to_string()).collect();
                    emit(&io.out, &json!({ "solution": ints }))
                }
                None => Err(Failure::Negative(format!(
                    "no root with |values| <= {}",
                    bound
                ))),
            }
        }
    }
}

fn verify_cmd(c: VerifyCmd) -> Result<(), Failure> {
    match c {
        VerifyCmd::Bisim { machine, fractran, regs, fuel } => {
            let prog: MMProg = parse(&machine)?;
            let target = fractran_from_json(&parse_value(&fractran)?)?;
            let regs = u64s(&nats_from_json(&parse_inline("--regs", &regs)?)?, "--regs")?;
            let mut regs = regs;
            regs.resize(prog.regs, 0);
            let mut mm = MMState { pc: prog.start, regs };
            let mut fx = godel_encode(&mm);
            for step in 0..fuel {
                let mm_next = mm_step(&prog, &mm).map_err(|e| Failure::Input(e.to_string()))?;
                let fr_next = fractran_step(&target, &fx);
                match (mm_next, fr_next) {
                    (None, None) => {
                        println!("lockstep for {} steps, both halted", step);
                        return Ok(());
                    }
                    (Some(m), Some(f)) => {
                        if godel_encode(&m) != f {
                            return Err(Failure::Negative(format!(
                                "diverged at step {}: machine {:?} vs value {}",
                                step + 1,
                                m,
                                f
                            )));
                        }
                        mm = m;
                        fx = f;
                    }
                    (m, f) => {
                        return Err(Failure::Negative(format!(
                            "halting mismatch at step {}: machine {} vs fractran {}",
                            step,
                            m.is_some(),
                            f.is_some()
                        )));
                    }
                }
            }
            println!("lockstep for {} steps, both still running", fuel);
            Ok(())
        }
        VerifyCmd::Oracle { formula, equation, params, max, bound } => {
            let a: DioForm = parse(&formula)?;
            let e: DioSingle = parse(&equation)?;
            let mut tuple = vec![0u64; params];
            let total = (max as usize).pow(params as u32).max(1);
            for k in 0..total {
                let mut k = k as u64;
                for t in tuple.iter_mut() {
                    *t = k % max;
                    k /= max;
                }
                let nu = Valuation::of_prefix(tuple.iter().map(|&x| nat(x)).collect());
                let lhs = h10::dio::df_eval_bounded(&a, &nu, &nat(bound)).holds();
                let rhs = sat_single(&e, &nu, &nat(bound)).assignment().is_some();
                if lhs != rhs {
                    return Err(Failure::Negative(format!(
                        "disagree at {:?}: formula {} vs equation {}",
                        tuple, lhs, rhs
                    )));
                }
            }
            println!("agree on {} tuples", total);
            Ok(())
        }
    }
}
