//! Batch front end for `equivar-core`.
//!
//! Exit codes: 0 success, 1 negative answer, 2 usage or input error,
//! 3 failed internal consistency check. Errors are written to stderr as JSON.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use equivar_core::burnside::{parse_class_values, BurnsideRing, SuperClassFunction};
use equivar_core::chain::{
    g_split_check, kw_equivalence, AdmissibleChainMap, PlainComplex, SpecialComplex,
};
use equivar_core::classify::DressClassification;
use equivar_core::gcw::{GSimplicialComplex, SimplicialJson};
use equivar_core::io::{
    matrix_from_json, ComplexJson, GroupJson, HomotopyCertificateJson, LatticeJson, ScalarJson,
    SplitCertificateJson,
};
use equivar_core::resolving::{
    m_p, m_p_closed_form, oliver_burnside_element, realizable_fixed_euler, ResolvingConditions,
};
use equivar_core::{ConcreteGSet, FiniteGroup, Prime, Ring, SubgroupLattice};

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_INTERNAL: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "equivar",
    version,
    about = "Exact computations with finite group actions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct Common {
    /// Preset group name such as S3, A4, D4, Q8, C2xC2, E2^3.
    #[arg(long)]
    pub preset: Option<String>,
    /// JSON file describing the group (preset, generators or table).
    #[arg(long, value_name = "FILE")]
    pub group: Option<PathBuf>,
    /// Emit JSON instead of text tables.
    #[arg(long)]
    pub json: bool,
    /// Write the result to a file instead of stdout.
    #[arg(long, value_name = "FILE")]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Group summary and subgroup lattice.
    Group {
        #[command(subcommand)]
        action: GroupCmd,
    },
    /// Table of marks.
    Marks(Common),
    /// p-hypoelementary classes and membership in the Dress classes.
    Classify {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        prime: u64,
    },
    /// Burnside ring arithmetic.
    Burnside {
        #[command(subcommand)]
        action: BurnsideCmd,
    },
    /// Resolving functions.
    Resolving {
        #[command(subcommand)]
        action: ResolvingCmd,
    },
    /// m_p(G) by lattice gcd and by closed form.
    Mp {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        prime: u64,
    },
    /// Whether an integer can be the Euler characteristic of a fixed set.
    Realizable {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        prime: u64,
        #[arg(long, allow_hyphen_values = true)]
        chi: i64,
    },
    /// Special G-complexes read from JSON.
    Complex {
        #[command(subcommand)]
        action: ComplexCmd,
    },
    /// G-simplicial complexes.
    Gcw {
        #[command(subcommand)]
        action: GcwCmd,
    },
}

#[derive(Debug, Subcommand)]
pub enum GroupCmd {
    Info(Common),
    Lattice(Common),
}

#[derive(Debug, Subcommand)]
pub enum BurnsideCmd {
    /// Product of two elements.
    Mul {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
    /// Recover an element from its marks, e.g. "(8,2,2,2)".
    Solve {
        #[command(flatten)]
        common: Common,
        #[arg(long, allow_hyphen_values = true)]
        marks: String,
    },
    /// Compare marks on the p-hypoelementary classes.
    Conlon {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        prime: u64,
        #[arg(long, allow_hyphen_values = true)]
        x: String,
        #[arg(long, allow_hyphen_values = true)]
        y: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum ResolvingCmd {
    /// Basis of the lattice of resolving functions.
    Solve {
        #[command(flatten)]
        common: Common,
        /// Omit for the integral conditions (all primes dividing |G|).
        #[arg(long)]
        prime: Option<u64>,
    },
    /// Check one function given by its values, e.g. "(6,-2,-2,2)".
    Check {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        prime: Option<u64>,
        #[arg(long, allow_hyphen_values = true)]
        phi: String,
    },
}

#[derive(Debug, Clone, Args)]
pub struct ComplexInput {
    #[command(flatten)]
    pub common: Common,
    /// Complex JSON file, `-` for stdin.
    #[arg(long, value_name = "FILE")]
    pub input: PathBuf,
    /// Override the coefficient ring of the file (Z, Q, GF(p)).
    #[arg(long)]
    pub ring: Option<String>,
}

#[derive(Debug, Subcommand)]
pub enum ComplexCmd {
    /// Homology of the complex, a fixed subcomplex or the orbit quotient.
    Homology {
        #[command(flatten)]
        input: ComplexInput,
        /// Use the augmented complex.
        #[arg(long)]
        reduced: bool,
        /// Subgroup class name or `#index`; homology of the fixed subcomplex.
        #[arg(long)]
        fixed: Option<String>,
        /// Homology of the orbit quotient.
        #[arg(long, conflicts_with = "fixed")]
        quotient: bool,
    },
    /// Equivariant splitting of the augmented complex over Z.
    SplitCheck(ComplexInput),
    /// Homotopy-equivalence check for a chain map over a field.
    KwCheck {
        #[command(flatten)]
        input: ComplexInput,
        /// identity, zero, project:CLASS:DEGREE, include:CLASS:DEGREE.
        #[arg(long, default_value = "identity")]
        map: String,
        /// JSON file `{"target": complex?, "maps": [matrix, ...]}` overriding `--map`.
        #[arg(long, value_name = "FILE")]
        map_file: Option<PathBuf>,
    },
}

#[derive(Debug, Clone, Args)]
pub struct GcwInput {
    #[command(flatten)]
    pub common: Common,
    /// Simplicial complex JSON file, `-` for stdin.
    #[arg(
        long,
        value_name = "FILE",
        required_unless_present = "simplex_boundary"
    )]
    pub input: Option<PathBuf>,
    /// Boundary of the simplex on the group's natural permutation action.
    #[arg(long, conflicts_with = "input")]
    pub simplex_boundary: bool,
    /// Apply barycentric subdivision this many times before the command.
    #[arg(long, default_value_t = 0)]
    pub subdivide: usize,
    /// Cone off the (subdivided) input before the command.
    #[arg(long)]
    pub coned: bool,
}

#[derive(Debug, Subcommand)]
pub enum GcwCmd {
    /// Barycentric subdivision.
    Sd(GcwInput),
    /// Cone with a fixed apex.
    Cone(GcwInput),
    /// Fixed subcomplex of a subgroup class.
    Fixed {
        #[command(flatten)]
        input: GcwInput,
        #[arg(long)]
        subgroup: String,
    },
    /// Cellular chain complex as complex JSON.
    Chain {
        #[command(flatten)]
        input: GcwInput,
        #[arg(long, default_value = "Z")]
        ring: String,
        #[arg(long)]
        augmented: bool,
    },
    /// Orbit quotient of the cellular chains and its homology.
    Quotient {
        #[command(flatten)]
        input: GcwInput,
        #[arg(long, default_value = "Z")]
        ring: String,
    },
    /// Burnside class and fixed-set Euler characteristics.
    Class(GcwInput),
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Internal(String),
}

impl Failure {
    fn code(&self) -> i32 {
        match self {
            Failure::Usage(_) => EXIT_USAGE,
            Failure::Internal(_) => EXIT_INTERNAL,
        }
    }

    fn to_json(&self) -> String {
        let (kind, message) = match self {
            Failure::Usage(m) => ("usage", m),
            Failure::Internal(m) => ("internal", m),
        };
        json!({ "error": kind, "message": message }).to_string()
    }
}

fn usage<E: std::fmt::Display>(e: E) -> Failure {
    Failure::Usage(e.to_string())
}

/// A computed answer with text and JSON renderings.
struct Report {
    text: String,
    json: Value,
    negative: bool,
}

impl Report {
    fn new(text: String, json: Value) -> Self {
        Report {
            text,
            json,
            negative: false,
        }
    }

    fn negative(mut self, negative: bool) -> Self {
        self.negative = negative;
        self
    }
}

/// Parses `argv` (including the program name) and runs the command.
pub fn run<I, T>(argv: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let rendered = e.render().to_string();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    Outcome {
                        code: EXIT_OK,
                        stdout: rendered,
                        stderr: String::new(),
                    }
                }
                _ => Outcome {
                    code: EXIT_USAGE,
                    stdout: String::new(),
                    stderr: Failure::Usage(rendered.trim_end().to_string()).to_json() + "\n",
                },
            };
        }
    };
    let common = cli.command.common().clone();
    let result = execute(&cli.command).and_then(|report| {
        let mut body = if common.json {
            serde_json::to_string_pretty(&report.json)
                .map_err(|e| Failure::Internal(e.to_string()))?
        } else {
            report.text
        };
        if !body.ends_with('\n') {
            body.push('\n');
        }
        let code = if report.negative {
            EXIT_NEGATIVE
        } else {
            EXIT_OK
        };
        match &common.output {
            Some(path) => {
                std::fs::write(path, &body)
                    .map_err(|e| usage(format!("{}: {e}", path.display())))?;
                Ok((code, String::new()))
            }
            None => Ok((code, body)),
        }
    });
    match result {
        Ok((code, stdout)) => Outcome {
            code,
            stdout,
            stderr: String::new(),
        },
        Err(f) => Outcome {
            code: f.code(),
            stdout: String::new(),
            stderr: f.to_json() + "\n",
        },
    }
}

impl Command {
    fn common(&self) -> &Common {
        match self {
            Command::Group { action } => match action {
                GroupCmd::Info(c) | GroupCmd::Lattice(c) => c,
            },
            Command::Marks(c) => c,
            Command::Classify { common, .. }
            | Command::Mp { common, .. }
            | Command::Realizable { common, .. } => common,
            Command::Burnside { action } => match action {
                BurnsideCmd::Mul { common, .. }
                | BurnsideCmd::Solve { common, .. }
                | BurnsideCmd::Conlon { common, .. } => common,
            },
            Command::Resolving { action } => match action {
                ResolvingCmd::Solve { common, .. } | ResolvingCmd::Check { common, .. } => common,
            },
            Command::Complex { action } => match action {
                ComplexCmd::Homology { input, .. } | ComplexCmd::KwCheck { input, .. } => {
                    &input.common
                }
                ComplexCmd::SplitCheck(input) => &input.common,
            },
            Command::Gcw { action } => match action {
                GcwCmd::Sd(i) | GcwCmd::Cone(i) | GcwCmd::Class(i) => &i.common,
                GcwCmd::Fixed { input, .. }
                | GcwCmd::Chain { input, .. }
                | GcwCmd::Quotient { input, .. } => &input.common,
            },
        }
    }
}

fn execute(cmd: &Command) -> Result<Report, Failure> {
    match cmd {
        Command::Group { action } => match action {
            GroupCmd::Info(c) => group_info(&*load_lattice(c)?),
            GroupCmd::Lattice(c) => group_lattice(&*load_lattice(c)?),
        },
        Command::Marks(c) => marks(&BurnsideRing::new(load_lattice(c)?)),
        Command::Classify { common, prime } => {
            classify(&*load_lattice(common)?, parse_prime(*prime)?)
        }
        Command::Burnside { action } => burnside(action),
        Command::Resolving { action } => resolving(action),
        Command::Mp { common, prime } => mp(&*load_lattice(common)?, parse_prime(*prime)?),
        Command::Realizable { common, prime, chi } => {
            let lattice = load_lattice(common)?;
            let p = parse_prime(*prime)?;
            let ok = realizable_fixed_euler(&lattice, p, *chi).map_err(usage)?;
            Ok(Report::new(
                ok.to_string(),
                json!({ "prime": p.get(), "chi": chi, "m_p": m_p(&lattice, p), "realizable": ok }),
            )
            .negative(!ok))
        }
        Command::Complex { action } => complex(action),
        Command::Gcw { action } => gcw(action),
    }
}

fn read_input(path: &Path) -> Result<String, Failure> {
    if path.as_os_str() == "-" {
        let mut s = String::new();
        std::io::Read::read_to_string(&mut std::io::stdin(), &mut s).map_err(usage)?;
        Ok(s)
    } else {
        std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
    }
}

fn load_group(c: &Common) -> Result<Arc<FiniteGroup>, Failure> {
    let spec = match (&c.preset, &c.group) {
        (Some(p), None) => GroupJson {
            preset: Some(p.clone()),
            ..GroupJson::default()
        },
        (None, Some(path)) => serde_json::from_str(&read_input(path)?).map_err(usage)?,
        _ => return Err(usage("give exactly one of --preset or --group")),
    };
    spec.build().map(Arc::new).map_err(usage)
}

fn load_lattice(c: &Common) -> Result<Arc<SubgroupLattice>, Failure> {
    Ok(Arc::new(SubgroupLattice::new(load_group(c)?)))
}

fn parse_prime(p: u64) -> Result<Prime, Failure> {
    Prime::new(p).map_err(usage)
}

fn parse_ring(s: &str) -> Result<Ring, Failure> {
    s.parse().map_err(usage)
}

fn class_names(lattice: &SubgroupLattice) -> Vec<String> {
    lattice.classes().iter().map(|c| c.name.clone()).collect()
}

fn fmt_tuple(v: &[i64]) -> String {
    let parts: Vec<String> = v.iter().map(i64::to_string).collect();
    format!("({})", parts.join(","))
}

/// Left-aligned columns separated by two spaces.
fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.chars().count()).collect();
    for r in rows {
        for (w, cell) in widths.iter_mut().zip(r) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let mut out = String::new();
    let mut line = |cells: Vec<&str>| {
        let padded: Vec<String> = cells
            .iter()
            .zip(&widths)
            .map(|(c, &w)| format!("{c:<w$}"))
            .collect();
        out.push_str(padded.join("  ").trim_end());
        out.push('\n');
    };
    line(header.to_vec());
    for r in rows {
        line(r.iter().map(String::as_str).collect());
    }
    out
}

fn group_info(lattice: &SubgroupLattice) -> Result<Report, Failure> {
    let g = lattice.group();
    let n = g.order();
    let abelian = g.is_abelian_subset(&(0..n).collect::<Vec<_>>());
    let normal = lattice
        .classes()
        .iter()
        .filter(|c| c.members.len() == 1)
        .count();
    let json = json!({
        "order": n,
        "abelian": abelian,
        "subgroups": lattice.subgroups().len(),
        "classes": lattice.num_classes(),
        "normal_subgroups": normal,
        "element_orders": (0..n).map(|x| g.element_order(x)).collect::<Vec<_>>(),
    });
    let text = format!(
        "order: {n}\nabelian: {abelian}\nsubgroups: {}\nconjugacy classes of subgroups: {}\nnormal subgroups: {normal}",
        lattice.subgroups().len(),
        lattice.num_classes()
    );
    Ok(Report::new(text, json))
}

fn group_lattice(lattice: &SubgroupLattice) -> Result<Report, Failure> {
    let export = LatticeJson::new(lattice);
    let rows: Vec<Vec<String>> = export
        .classes
        .iter()
        .map(|c| {
            vec![
                c.index.to_string(),
                c.name.clone(),
                c.order.to_string(),
                c.conjugates.to_string(),
                c.weyl_order.to_string(),
                format!("{:?}", c.representative),
            ]
        })
        .collect();
    let text = table(
        &["#", "name", "order", "conjugates", "weyl", "representative"],
        &rows,
    );
    Ok(Report::new(
        text,
        serde_json::to_value(&export).map_err(|e| Failure::Internal(e.to_string()))?,
    ))
}

fn marks(ring: &BurnsideRing) -> Result<Report, Failure> {
    let names = class_names(ring.lattice());
    let tom = ring.table_of_marks();
    let mut header = vec!["G/K \\ L"];
    header.extend(names.iter().map(String::as_str));
    let rows: Vec<Vec<String>> = tom
        .marks
        .iter()
        .enumerate()
        .map(|(c, row)| {
            let mut r = vec![format!("G/{}", names[c])];
            r.extend(row.iter().map(i64::to_string));
            r
        })
        .collect();
    Ok(Report::new(
        table(&header, &rows),
        json!({ "classes": names, "marks": tom.marks }),
    ))
}

fn classify(lattice: &SubgroupLattice, p: Prime) -> Result<Report, Failure> {
    let d = DressClassification::new(lattice, p);
    let names = class_names(lattice);
    let hypo: Vec<&str> = d
        .hypoelementary_classes
        .iter()
        .map(|&c| names[c].as_str())
        .collect();
    let text = format!(
        "prime: {p}\n{p}-hypoelementary classes: {}\nG is {p}-hypoelementary: {}\nprimes q with G in G_{p}^q: {:?}\nG in G_{p}: {}",
        hypo.join(", "),
        d.in_gp1,
        d.gpq_primes,
        d.in_gp
    );
    let json = json!({
        "prime": p.get(),
        "hypoelementary_classes": hypo,
        "in_gp1": d.in_gp1,
        "gpq_primes": d.gpq_primes,
        "in_gp": d.in_gp,
    });
    Ok(Report::new(text, json))
}

fn burnside(cmd: &BurnsideCmd) -> Result<Report, Failure> {
    match cmd {
        BurnsideCmd::Mul { common, x, y } => {
            let ring = BurnsideRing::new(load_lattice(common)?);
            let x = ring.parse_element(x).map_err(usage)?;
            let y = ring.parse_element(y).map_err(usage)?;
            let z = ring.mul(&x, &y);
            let marks = ring.rho(&z).values;
            if ring.rho(&x).pointwise_mul(&ring.rho(&y)).values != marks {
                return Err(Failure::Internal("marks are not multiplicative".into()));
            }
            let shown = ring.format_element(&z);
            Ok(Report::new(
                format!("{shown}\nmarks: {}", fmt_tuple(&marks)),
                json!({ "product": shown, "coefficients": z.coeffs, "marks": marks }),
            ))
        }
        BurnsideCmd::Solve { common, marks } => {
            let ring = BurnsideRing::new(load_lattice(common)?);
            let values = parse_class_values(marks).map_err(usage)?;
            ring.check_len(values.len()).map_err(usage)?;
            let v = SuperClassFunction { values };
            let obs = ring.psi(&v);
            match ring.rho_solve(&v) {
                Some(x) => {
                    if !obs.is_zero() {
                        return Err(Failure::Internal(
                            "solvable marks with nonzero obstruction".into(),
                        ));
                    }
                    let shown = ring.format_element(&x);
                    Ok(Report::new(
                        shown.clone(),
                        json!({ "in_image": true, "element": shown, "coefficients": x.coeffs }),
                    ))
                }
                None => {
                    if obs.is_zero() {
                        return Err(Failure::Internal(
                            "unsolvable marks with zero obstruction".into(),
                        ));
                    }
                    Ok(Report::new(
                        format!(
                            "not in the image of the mark homomorphism\nobstruction: {} mod {}",
                            fmt_tuple(&obs.residues),
                            fmt_tuple(&obs.moduli)
                        ),
                        json!({ "in_image": false, "obstruction": obs }),
                    )
                    .negative(true))
                }
            }
        }
        BurnsideCmd::Conlon {
            common,
            prime,
            x,
            y,
        } => {
            let ring = BurnsideRing::new(load_lattice(common)?);
            let p = parse_prime(*prime)?;
            let x = ring.parse_element(x).map_err(usage)?;
            let y = ring.parse_element(y).map_err(usage)?;
            let (ix, iy) = (ring.conlon_invariant(&x, p), ring.conlon_invariant(&y, p));
            let equal = ring.conlon_equal(&x, &y, p);
            let names = class_names(ring.lattice());
            let classes: Vec<&str> = ix.classes.iter().map(|&c| names[c].as_str()).collect();
            let text = format!(
                "{}\nclasses: {}\nx marks: {}\ny marks: {}",
                if equal { "equal" } else { "different" },
                classes.join(", "),
                fmt_tuple(&ix.marks),
                fmt_tuple(&iy.marks)
            );
            let json = json!({
                "prime": p.get(),
                "equal": equal,
                "classes": classes,
                "x_marks": ix.marks,
                "y_marks": iy.marks,
            });
            Ok(Report::new(text, json).negative(!equal))
        }
    }
}

fn conditions(
    lattice: &SubgroupLattice,
    prime: Option<u64>,
) -> Result<ResolvingConditions, Failure> {
    Ok(match prime {
        Some(p) => ResolvingConditions::new(lattice, parse_prime(p)?),
        None => ResolvingConditions::integral(lattice),
    })
}

fn resolving(cmd: &ResolvingCmd) -> Result<Report, Failure> {
    match cmd {
        ResolvingCmd::Solve { common, prime } => {
            let lattice = load_lattice(common)?;
            let cond = conditions(&lattice, *prime)?;
            let lat = cond.lattice(&lattice);
            for b in &lat.basis {
                cond.check(b)
                    .map_err(|f| Failure::Internal(format!("basis vector fails: {f}")))?;
            }
            let names = class_names(&lattice);
            let gcd = lat.gcd_at_whole_group();
            let mut text = format!("classes: {}\nrank: {}\n", names.join(", "), lat.rank());
            for b in &lat.basis {
                let _ = writeln!(text, "{}", fmt_tuple(&b.values));
            }
            let _ = write!(text, "gcd of values at G: {gcd}");
            let json = json!({
                "prime": prime,
                "classes": names,
                "basis": lat.basis.iter().map(|b| &b.values).collect::<Vec<_>>(),
                "gcd_at_whole_group": gcd,
            });
            Ok(Report::new(text, json))
        }
        ResolvingCmd::Check { common, prime, phi } => {
            let lattice = load_lattice(common)?;
            let cond = conditions(&lattice, *prime)?;
            let values = parse_class_values(phi).map_err(usage)?;
            let phi = SuperClassFunction { values };
            match cond.check(&phi) {
                Ok(cert) => {
                    if !cert.verify(&lattice) {
                        return Err(Failure::Internal("certificate does not verify".into()));
                    }
                    let mut text = "resolving".to_string();
                    let mut json = json!({ "resolving": true, "certificate": cert });
                    if let Some(p) = prime {
                        let ring = BurnsideRing::new(lattice.clone());
                        let x = oliver_burnside_element(&ring, &phi, parse_prime(*p)?)
                            .map_err(|e| Failure::Internal(e.to_string()))?;
                        let shown = ring.format_element(&x);
                        let marks = ring.rho(&x).values;
                        let _ = write!(
                            text,
                            "\nBurnside element: {shown}\nmarks: {}",
                            fmt_tuple(&marks)
                        );
                        json["burnside_element"] =
                            json!({ "element": shown, "coefficients": x.coeffs, "marks": marks });
                    }
                    Ok(Report::new(text, json))
                }
                Err(failure) => Ok(Report::new(
                    format!("not resolving: {failure}"),
                    json!({ "resolving": false, "failure": failure }),
                )
                .negative(true)),
            }
        }
    }
}

fn mp(lattice: &SubgroupLattice, p: Prime) -> Result<Report, Failure> {
    let by_lattice = m_p(lattice, p);
    let closed = m_p_closed_form(lattice, p);
    if by_lattice != closed {
        return Err(Failure::Internal(format!(
            "m_{p} mismatch: lattice gcd {by_lattice}, closed form {closed}"
        )));
    }
    Ok(Report::new(
        format!("{by_lattice}\nlattice gcd: {by_lattice}\nclosed form: {closed}"),
        json!({ "prime": p.get(), "m_p": by_lattice, "lattice_gcd": by_lattice, "closed_form": closed }),
    ))
}

fn load_complex(
    input: &ComplexInput,
    lattice: Arc<SubgroupLattice>,
) -> Result<SpecialComplex, Failure> {
    let mut spec: ComplexJson = serde_json::from_str(&read_input(&input.input)?).map_err(usage)?;
    if let Some(r) = &input.ring {
        spec.ring = parse_ring(r)?.to_string();
    }
    spec.build(lattice).map_err(usage)
}

fn homology_report(c: &PlainComplex) -> Result<Report, Failure> {
    let groups = c.homology().map_err(usage)?;
    let exact = groups.iter().all(|h| h.is_zero());
    // unreduced complexes are acyclic when only H_0 = R survives
    let acyclic = groups.iter().all(|h| {
        if c.bottom == 0 && h.degree == 0 {
            h.rank == 1 && h.torsion.is_empty()
        } else {
            h.is_zero()
        }
    });
    let rows: Vec<Vec<String>> = groups
        .iter()
        .map(|h| {
            vec![
                h.degree.to_string(),
                h.rank.to_string(),
                h.torsion.join(" "),
            ]
        })
        .collect();
    let mut text = format!("ring: {}\ndimensions: {:?}\n", c.ring, c.dims);
    text.push_str(&table(&["degree", "rank", "torsion"], &rows));
    let _ = write!(text, "exact: {exact}\nacyclic: {acyclic}");
    Ok(Report::new(
        text,
        json!({ "ring": c.ring.to_string(), "bottom": c.bottom, "dimensions": c.dims, "homology": groups, "exact": exact, "acyclic": acyclic }),
    ))
}

fn complex(cmd: &ComplexCmd) -> Result<Report, Failure> {
    match cmd {
        ComplexCmd::Homology {
            input,
            reduced,
            fixed,
            quotient,
        } => {
            let lattice = load_lattice(&input.common)?;
            let c = load_complex(input, lattice.clone())?;
            let plain = if let Some(name) = fixed {
                let class = lattice.class_by_name(name).map_err(usage)?;
                let sub = c.fixed_subcomplex(class);
                if *reduced {
                    augment_plain(&c, class, sub)?
                } else {
                    sub
                }
            } else if *quotient {
                c.quotient_complex()
            } else if *reduced {
                c.augmented().map_err(usage)?
            } else {
                c.underlying()
            };
            homology_report(&plain)
        }
        ComplexCmd::SplitCheck(input) => {
            let lattice = load_lattice(&input.common)?;
            let c = load_complex(input, lattice)?;
            match g_split_check(&c).map_err(usage)? {
                Ok(cert) => {
                    if !cert.verify(&c).map_err(usage)? {
                        return Err(Failure::Internal(
                            "split certificate does not verify".into(),
                        ));
                    }
                    let degrees = cert.contraction.len();
                    Ok(Report::new(
                        format!(
                            "split: true\nsections verified in degrees -1..={}",
                            degrees as i64 - 2
                        ),
                        json!({ "split": true, "certificate": SplitCertificateJson::from(&cert) }),
                    ))
                }
                Err(f) => Ok(Report::new(
                    format!("split: false\nfails at degree {}: {}", f.degree, f.reason),
                    json!({ "split": false, "failure": f }),
                )
                .negative(true)),
            }
        }
        ComplexCmd::KwCheck {
            input,
            map,
            map_file,
        } => {
            let lattice = load_lattice(&input.common)?;
            let c = load_complex(input, lattice.clone())?;
            let f = match map_file {
                Some(path) => map_from_file(path, &c, lattice)?,
                None => named_map(map, &c, lattice)?,
            };
            match kw_equivalence(&f).map_err(usage)? {
                Ok(cert) => {
                    if !cert.verify(&f).map_err(usage)? {
                        return Err(Failure::Internal("homotopy certificate does not verify".into()));
                    }
                    Ok(Report::new(
                        "homotopy equivalence: true\ncertificate verified".to_string(),
                        json!({ "equivalence": true, "certificate": HomotopyCertificateJson::from(&cert) }),
                    ))
                }
                Err(w) => Ok(Report::new(
                    format!(
                        "homotopy equivalence: false\nfixed points of {} (class {}) not a quasi-isomorphism; cone homology in degree {}",
                        w.class_name, w.class, w.degree
                    ),
                    json!({ "equivalence": false, "witness": w }),
                )
                .negative(true)),
            }
        }
    }
}

/// Fixed subcomplex with the augmentation restricted to fixed basis elements.
fn augment_plain(
    c: &SpecialComplex,
    class: usize,
    sub: PlainComplex,
) -> Result<PlainComplex, Failure> {
    let full = c.augmented().map_err(usage)?;
    let fixed = c.basis(0).fixed_points(c.lattice().representative(class));
    let first = full.boundaries[0].select(&[0], &fixed);
    let mut dims = vec![1];
    dims.extend(&sub.dims);
    let mut boundaries = vec![first];
    boundaries.extend(sub.boundaries);
    PlainComplex::new(c.ring(), -1, dims, boundaries).map_err(usage)
}

fn named_map(
    spec: &str,
    c: &SpecialComplex,
    lattice: Arc<SubgroupLattice>,
) -> Result<AdmissibleChainMap, Failure> {
    let parts: Vec<&str> = spec.split(':').collect();
    match parts.as_slice() {
        ["identity"] => Ok(AdmissibleChainMap::identity(c)),
        ["zero"] => AdmissibleChainMap::zero(c, c).map_err(usage),
        [kind @ ("project" | "include"), class, degree] => {
            let class = lattice.class_by_name(class).map_err(usage)?;
            let degree: usize = degree.parse().map_err(usage)?;
            let x = ConcreteGSet::coset_space(lattice.group(), lattice.representative(class));
            let e = SpecialComplex::elementary(lattice.clone(), c.ring(), x, degree).map_err(usage)?;
            if *kind == "project" {
                AdmissibleChainMap::projection(c, &e).map_err(usage)
            } else {
                AdmissibleChainMap::inclusion(c, &e).map_err(usage)
            }
        }
        _ => Err(usage(format!(
            "unknown map `{spec}` (expected identity, zero, project:CLASS:DEGREE or include:CLASS:DEGREE)"
        ))),
    }
}

fn map_from_file(
    path: &Path,
    source: &SpecialComplex,
    lattice: Arc<SubgroupLattice>,
) -> Result<AdmissibleChainMap, Failure> {
    let value: Value = serde_json::from_str(&read_input(path)?).map_err(usage)?;
    let target = match value.get("target") {
        Some(t) => {
            let spec: ComplexJson = serde_json::from_value(t.clone()).map_err(usage)?;
            spec.build(lattice).map_err(usage)?
        }
        None => source.clone(),
    };
    let raw: Vec<Vec<Vec<ScalarJson>>> =
        serde_json::from_value(value.get("maps").cloned().unwrap_or(Value::Null)).map_err(usage)?;
    let maps = raw
        .iter()
        .enumerate()
        .map(|(i, rows)| {
            let cols = if i <= source.top() {
                source.basis(i).size()
            } else {
                0
            };
            matrix_from_json(rows, cols).map_err(usage)
        })
        .collect::<Result<Vec<_>, _>>()?;
    AdmissibleChainMap::new(source.clone(), target, maps).map_err(usage)
}

fn load_simplicial(
    input: &GcwInput,
) -> Result<(Arc<SubgroupLattice>, GSimplicialComplex), Failure> {
    let group = load_group(&input.common)?;
    let lattice = Arc::new(SubgroupLattice::new(group.clone()));
    let mut k = if input.simplex_boundary {
        let x = group
            .natural_action()
            .ok_or_else(|| usage("group has no permutation representation; use --input"))?;
        GSimplicialComplex::simplex_boundary(group, x).map_err(usage)?
    } else {
        let path = input
            .input
            .as_ref()
            .ok_or_else(|| usage("missing --input"))?;
        let spec: SimplicialJson = serde_json::from_str(&read_input(path)?).map_err(usage)?;
        GSimplicialComplex::from_json(group, &spec).map_err(usage)?
    };
    for _ in 0..input.subdivide {
        k = k.barycentric_subdivision();
    }
    if input.coned {
        k = k.cone();
    }
    Ok((lattice, k))
}

fn simplicial_report(k: &GSimplicialComplex) -> Result<Report, Failure> {
    let json = serde_json::to_value(k.to_json()).map_err(|e| Failure::Internal(e.to_string()))?;
    let text = serde_json::to_string_pretty(&json).map_err(|e| Failure::Internal(e.to_string()))?;
    Ok(Report::new(text, json))
}

fn gcw(cmd: &GcwCmd) -> Result<Report, Failure> {
    match cmd {
        GcwCmd::Sd(input) => {
            simplicial_report(&load_simplicial(input)?.1.barycentric_subdivision())
        }
        GcwCmd::Cone(input) => simplicial_report(&load_simplicial(input)?.1.cone()),
        GcwCmd::Fixed { input, subgroup } => {
            let (lattice, k) = load_simplicial(input)?;
            let class = lattice.class_by_name(subgroup).map_err(usage)?;
            let fixed = k
                .fixed_complex(lattice.representative(class))
                .map_err(usage)?;
            let counts = fixed.face_counts();
            let chi = fixed.euler_characteristic();
            Ok(Report::new(
                format!(
                    "subgroup: {subgroup}\nface counts: {counts:?}\neuler characteristic: {chi}"
                ),
                json!({ "subgroup": lattice.classes()[class].name, "face_counts": counts, "euler_characteristic": chi, "simplices": fixed.simplices }),
            ))
        }
        GcwCmd::Chain {
            input,
            ring,
            augmented,
        } => {
            let (lattice, k) = load_simplicial(input)?;
            let c = k
                .cellular_chain_complex(lattice, parse_ring(ring)?, *augmented)
                .map_err(usage)?;
            let json = serde_json::to_value(ComplexJson::from_complex(&c))
                .map_err(|e| Failure::Internal(e.to_string()))?;
            let text = serde_json::to_string_pretty(&json)
                .map_err(|e| Failure::Internal(e.to_string()))?;
            Ok(Report::new(text, json))
        }
        GcwCmd::Quotient { input, ring } => {
            let (lattice, k) = load_simplicial(input)?;
            let c = k
                .cellular_chain_complex(lattice, parse_ring(ring)?, false)
                .map_err(usage)?;
            homology_report(&c.quotient_complex())
        }
        GcwCmd::Class(input) => {
            let (lattice, k) = load_simplicial(input)?;
            let ring = BurnsideRing::new(lattice.clone());
            let x = k.burnside_class(&ring).map_err(usage)?;
            let marks = ring.rho(&x).values;
            let chis = (0..lattice.num_classes())
                .map(|c| k.euler_char(lattice.representative(c)))
                .collect::<Result<Vec<_>, _>>()
                .map_err(usage)?;
            if marks != chis {
                return Err(Failure::Internal(format!(
                    "marks {} differ from fixed Euler characteristics {}",
                    fmt_tuple(&marks),
                    fmt_tuple(&chis)
                )));
            }
            let shown = ring.format_element(&x);
            Ok(Report::new(
                format!(
                    "{shown}\nmarks: {}\nclasses: {}",
                    fmt_tuple(&marks),
                    class_names(&lattice).join(", ")
                ),
                json!({ "element": shown, "coefficients": x.coeffs, "marks": marks, "classes": class_names(&lattice) }),
            ))
        }
    }
}
