use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use scva_core::brst::{budget_from_env, cohomology_dims, cohomology_ring_check, CohomologyTable};
use scva_core::characters::{compare_characters, enumerate_character, product_character, Formula, QYSeries};
use scva_core::expr::{format_state, parse_state};
use scva_core::holonomy::{cy_check, g2_check, qk_check, HolonomyReport};
use scva_core::rational::{binomial, format_rational, parse_rational, rat};
use scva_core::report::Report;
use scva_core::structures::{
    conformal_boson, conformal_fermion, n1_from_n2, n1_structure, n2_structure, n4_structure,
    polarized_fermion_conformal, twist, verify, Twist,
};
use scva_core::vertex::ope_singular;
use scva_core::{Error, Grading, Sector, SpaceSpec};

const EXIT_FAIL: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser)]
#[command(name = "scva", version, about = "Exact free-field vertex algebra checks")]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum SectorArg {
    #[value(name = "NS")]
    Ns,
    #[value(name = "R")]
    R,
}

impl From<SectorArg> for Sector {
    fn from(s: SectorArg) -> Sector {
        match s {
            SectorArg::Ns => Sector::NS,
            SectorArg::R => Sector::R,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum TwistArg {
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
}

impl From<TwistArg> for Twist {
    fn from(t: TwistArg) -> Twist {
        match t {
            TwistArg::A => Twist::A,
            TwistArg::B => Twist::B,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    VirasoroBoson,
    VirasoroFermion,
    Lambda,
    N1,
    N1FromN2,
    N2,
    N4,
    Topological,
}

#[derive(Clone, Copy, ValueEnum)]
enum GradingArg {
    Untwisted,
    #[value(name = "A", alias = "a")]
    A,
    #[value(name = "B", alias = "b")]
    B,
    Riemannian,
}

#[derive(Clone, Copy, ValueEnum)]
enum Case {
    G2,
    Qk,
    Cy,
}

#[derive(Args)]
struct SpaceArgs {
    /// dim T (real dimension of the underlying space).
    #[arg(long)]
    dim: usize,
    #[arg(long, value_enum, default_value_t = SectorArg::Ns)]
    sector: SectorArg,
    /// Use a polarized basis (b, c, phi, psi) instead of an orthonormal one (a, phi).
    #[arg(long)]
    polarized: bool,
}

impl SpaceArgs {
    fn space(&self) -> scva_core::Result<SpaceSpec> {
        SpaceSpec::new(self.dim, self.sector.into(), self.polarized, false)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Verify a superconformal structure relation by relation.
    Verify {
        #[arg(value_enum)]
        kind: Kind,
        /// dim T.
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = SectorArg::Ns)]
        sector: SectorArg,
        /// Parameter of the lambda family.
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        lambda: String,
        /// Parameter `a` of the N=1 vector a tau+ + tau-/a.
        #[arg(long, default_value = "1", allow_hyphen_values = true)]
        a: String,
        #[arg(long, value_enum, default_value_t = TwistArg::A)]
        twist: TwistArg,
    },
    /// Singular part of the OPE a(z) b(w) of two states.
    Ope {
        a: String,
        b: String,
        #[command(flatten)]
        space: SpaceArgs,
    },
    /// BRST cohomology dimensions of a twisted polarized space.
    Brst {
        #[arg(long = "dimTprime")]
        dim_t_prime: usize,
        #[arg(long, value_enum, default_value_t = SectorArg::R)]
        sector: SectorArg,
        #[arg(long, value_enum, default_value_t = TwistArg::A)]
        twist: TwistArg,
        /// Largest twisted weight enumerated.
        #[arg(long, default_value = "2")]
        cutoff: String,
        /// Also check the product structure on the weight-zero classes.
        #[arg(long)]
        ring: bool,
    },
    /// Graded character by basis enumeration.
    Character {
        /// dim T.
        #[arg(long)]
        dim: usize,
        #[arg(long, value_enum, default_value_t = SectorArg::Ns)]
        sector: SectorArg,
        #[arg(long, value_enum, default_value_t = GradingArg::Untwisted)]
        grading: GradingArg,
        #[arg(long, default_value = "3")]
        cutoff: String,
        /// Compare with the product formula for the chosen grading.
        #[arg(long)]
        check_product: bool,
        /// Insert (-1)^F.
        #[arg(long)]
        signed: bool,
    },
    /// Special-holonomy OPE tables with discrepancy reports.
    Holonomy {
        #[arg(value_enum)]
        case: Case,
        /// n: complex dimension for cy, quaternionic dimension for qk.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long, value_enum, default_value_t = SectorArg::Ns)]
        sector: SectorArg,
    },
    /// Print the sign and ordering conventions.
    Conventions,
}

struct Outcome {
    text: String,
    json: Value,
    ok: bool,
}

fn polarized_half(dim: usize, what: &str) -> scva_core::Result<usize> {
    if dim == 0 || dim % 2 != 0 {
        return Err(Error::InvalidSpace(format!("{what} needs an even dim T, got {dim}")));
    }
    Ok(dim / 2)
}

fn report_outcome(r: &Report) -> Outcome {
    Outcome { text: r.to_text(), json: r.to_json(), ok: r.passed() }
}

fn holonomy_outcome(r: &HolonomyReport) -> Outcome {
    Outcome { text: r.to_text(), json: r.to_json(), ok: r.passed() }
}

fn cmd_verify(kind: Kind, dim: usize, sector: Sector, lambda: &str, a: &str, tw: Twist) -> scva_core::Result<Outcome> {
    let st = match kind {
        Kind::VirasoroBoson => conformal_boson(&SpaceSpec::orthonormal(dim)?)?,
        Kind::VirasoroFermion => conformal_fermion(&SpaceSpec::orthonormal(dim)?)?,
        Kind::N1 => n1_structure(&SpaceSpec::orthonormal(dim)?)?,
        Kind::Lambda => {
            let space = SpaceSpec::polarized(polarized_half(dim, "lambda")?, sector)?;
            polarized_fermion_conformal(&space, &parse_rational(lambda)?)?
        }
        Kind::N2 => n2_structure(&SpaceSpec::polarized(polarized_half(dim, "n2")?, sector)?)?,
        Kind::N1FromN2 => {
            let space = SpaceSpec::polarized(polarized_half(dim, "n1-from-n2")?, sector)?;
            n1_from_n2(&n2_structure(&space)?, &parse_rational(a)?)?
        }
        Kind::N4 => n4_structure(&SpaceSpec::quaternionic(dim, sector)?)?,
        Kind::Topological => {
            let space = SpaceSpec::polarized(polarized_half(dim, "topological")?, sector)?;
            twist(&n2_structure(&space)?, tw)?
        }
    };
    Ok(report_outcome(&verify(&st)?))
}

fn cmd_ope(a: &str, b: &str, space: &SpaceSpec) -> scva_core::Result<Outcome> {
    let (sa, sb) = (parse_state(a, space)?, parse_state(b, space)?);
    let sing = ope_singular(space, &sa, &sb);
    let mut text = String::new();
    let mut poles = Vec::new();
    for (order, st) in sing.poles.iter().rev() {
        let shown = format_state(space, st);
        text.push_str(&format!("pole {order} (product {}): {shown}\n", order - 1));
        poles.push(json!({ "pole": order, "product": order - 1, "state": shown }));
    }
    if poles.is_empty() {
        text.push_str("no singular part\n");
    }
    let json = json!({
        "schema": scva_core::report::SCHEMA,
        "space": space.to_string(),
        "a": format_state(space, &sa),
        "b": format_state(space, &sb),
        "poles": poles,
    });
    Ok(Outcome { text, json, ok: true })
}

/// The cohomology predicted for a twisted polarized space: the exterior
/// algebra at twisted weight zero in the R sector, the scalar line in NS.
fn predicted(sector: Sector, dp: usize) -> Vec<((i32, i32), usize)> {
    match sector {
        Sector::R => (0..=dp)
            .map(|k| ((0, k as i32), usize::try_from(binomial(dp as i64, k as u32)).unwrap_or(usize::MAX)))
            .collect(),
        Sector::NS => vec![((0, 0), 1)],
    }
}

fn table_text(t: &CohomologyTable) -> String {
    let mut s = format!("{:>8} {:>7} {:>6} {:>9}\n", "weight", "charge", "block", "H");
    for (&(w2, q), e) in &t.entries {
        s.push_str(&format!("{:>8} {:>7} {:>6} {:>9}\n", format_rational(&rat(w2 as i64, 2)), q, e.block_dim, e.dim));
    }
    s.push_str(&format!("total {}\n", t.total()));
    s
}

fn cmd_brst(dp: usize, sector: Sector, tw: Twist, cutoff: &str, ring: bool) -> scva_core::Result<Outcome> {
    let space = SpaceSpec::polarized(dp, sector)?;
    let cutoff = parse_rational(cutoff)?;
    let budget = budget_from_env();
    let table = cohomology_dims(&space, tw, &cutoff, budget)?;
    let expected = predicted(sector, dp);
    let matches = table.nonzero() == expected;
    let mut text = format!("BRST cohomology, twist {tw:?}, {space}, twisted weight <= {}\n", format_rational(&cutoff));
    text.push_str(&table_text(&table));
    let fmt_entries = |v: &[((i32, i32), usize)]| -> Vec<Value> {
        v.iter()
            .map(|&((w2, q), d)| json!({ "weight": format_rational(&rat(w2 as i64, 2)), "charge": q, "dim": d }))
            .collect()
    };
    text.push_str(&format!(
        "predicted nonzero entries {:?}: {}\n",
        expected,
        if matches { "MATCH" } else { "MISMATCH" }
    ));
    let mut json = table.to_json();
    json["space"] = json!(space.to_string());
    json["predicted"] = json!(fmt_entries(&expected));
    json["matches_prediction"] = json!(matches);
    let mut ok = matches;
    if ring {
        let r = cohomology_ring_check(&space, tw, &cutoff, budget)?;
        text.push_str(&r.to_text());
        json["ring"] = r.to_json();
        ok &= r.passed();
    }
    Ok(Outcome { text, json, ok })
}

fn series_json(s: &QYSeries) -> Value {
    s.to_json()
}

fn cmd_character(
    dim: usize,
    sector: Sector,
    g: GradingArg,
    cutoff: &str,
    check: bool,
    signed: bool,
) -> scva_core::Result<Outcome> {
    let cutoff = parse_rational(cutoff)?;
    let (space, grading, formula, dims) = match g {
        GradingArg::Riemannian => (SpaceSpec::orthonormal(dim)?, Grading::Untwisted, Formula::Riemannian, (dim, 0)),
        other => {
            let dp = polarized_half(dim, "a polarized grading")?;
            let (grading, formula) = match other {
                GradingArg::A => (Grading::A, Formula::ATwist),
                GradingArg::B => (Grading::B, Formula::BTwist),
                _ => (Grading::Untwisted, Formula::N2),
            };
            (SpaceSpec::polarized(dp, sector)?, grading, formula, (dp, dp))
        }
    };
    let series = enumerate_character(&space, grading, &cutoff, signed, budget_from_env())?;
    let mut text = format!("character of {space}, grading {grading:?}\n{}", series.to_table());
    let mut json = json!({
        "schema": scva_core::report::SCHEMA,
        "space": space.to_string(),
        "grading": format!("{grading:?}"),
        "series": series_json(&series),
    });
    let mut ok = true;
    if check {
        let product = product_character(formula, dims, &cutoff, signed)?;
        let cmp = compare_characters(&series, &product)?;
        // The displayed NS product carries no ground prefactor.
        let prefactor_ok = cmp.prefactors_equal || space.sector() == Sector::NS;
        ok = cmp.equal && prefactor_ok;
        match &cmp.first_mismatch {
            None if ok => text.push_str(&format!("MATCH ({} coefficients)\n", cmp.compared)),
            None => text.push_str("MISMATCH in the ground prefactor\n"),
            Some(((q2, y), l, r)) => text.push_str(&format!(
                "MISMATCH at q^{} y^{y}: enumerated {l}, product {r}\n",
                format_rational(&rat(*q2 as i64, 2))
            )),
        }
        json["product_check"] = json!({
            "formula": format!("{formula:?}"),
            "equal": ok,
            "compared": cmp.compared,
            "first_mismatch": cmp.first_mismatch.as_ref().map(|((q2, y), l, r)| json!({
                "q2": q2, "y": y, "enumerated": l.to_string(), "product": r.to_string()
            })),
        });
    }
    Ok(Outcome { text, json, ok })
}

fn cmd_holonomy(case: Case, n: Option<usize>, sector: Sector) -> scva_core::Result<Outcome> {
    let r = match case {
        Case::G2 => g2_check(&SpaceSpec::orthonormal(7)?)?,
        Case::Qk => qk_check(&SpaceSpec::orthonormal(4 * n.unwrap_or(1))?)?,
        Case::Cy => cy_check(&SpaceSpec::polarized(n.unwrap_or(2), sector)?)?,
    };
    Ok(holonomy_outcome(&r))
}

fn run(cli: &Cli) -> scva_core::Result<Outcome> {
    match &cli.command {
        Command::Verify { kind, dim, sector, lambda, a, twist } => {
            cmd_verify(*kind, *dim, (*sector).into(), lambda, a, (*twist).into())
        }
        Command::Ope { a, b, space } => cmd_ope(a, b, &space.space()?),
        Command::Brst { dim_t_prime, sector, twist, cutoff, ring } => {
            cmd_brst(*dim_t_prime, (*sector).into(), (*twist).into(), cutoff, *ring)
        }
        Command::Character { dim, sector, grading, cutoff, check_product, signed } => {
            cmd_character(*dim, (*sector).into(), *grading, cutoff, *check_product, *signed)
        }
        Command::Holonomy { case, n, sector } => cmd_holonomy(*case, *n, (*sector).into()),
        Command::Conventions => Ok(Outcome {
            text: scva_core::conventions::TEXT.to_string(),
            json: json!({ "schema": scva_core::report::SCHEMA, "conventions": scva_core::conventions::TEXT }),
            ok: true,
        }),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(out) => {
            match cli.format {
                Format::Text => print!("{}", out.text),
                Format::Json => println!("{}", serde_json::to_string_pretty(&out.json).expect("serializable")),
            }
            if out.ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(EXIT_FAIL)
            }
        }
        Err(e @ Error::BudgetExceeded { .. }) => {
            eprintln!("error: {e}; raise {} to allow larger blocks", scva_core::brst::BUDGET_ENV);
            ExitCode::from(EXIT_BUDGET)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(EXIT_USAGE)
        }
    }
}
