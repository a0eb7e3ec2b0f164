use dirac3t_core::flow_index::{index_element, sections_exist, spectral_flow_closed_form, spectral_flow_numeric};
use dirac3t_core::io::round_json;
use dirac3t_core::lattice_oracle::{landau_check, mode_block_oracle};
use dirac3t_core::spectral_sections::{
    build_sections, chern_number, classify_small_r, relative_degree, verify_spectral_section, FieldGrid,
    SectionDescriptor,
};
use dirac3t_core::spectrum_engine::{enumerate_spectrum, kernel_dimension, HarmonicForm};
use dirac3t_core::torus_geometry::{decompose_spinc, saturate_and_cosets, ParameterLattice, SpincStructure};
use dirac3t_core::Error;
use nalgebra::Vector3;
use serde_json::{json, Value};

use crate::args::{BuildArgs, Cli, Command, Format, LatticeArgs, SectionsCommand, VerifyCommand};

pub enum Failure {
    Domain(Error),
    Usage(String),
}

impl<E: Into<Error>> From<E> for Failure {
    fn from(e: E) -> Self {
        Failure::Domain(e.into())
    }
}

/// Pretty JSON with every float rounded to 12 significant digits.
pub fn render(mut value: Value) -> String {
    round_json(&mut value);
    let mut s = serde_json::to_string_pretty(&value).expect("JSON values serialize");
    s.push('\n');
    s
}

pub fn error_json(module: &str, message: &str) -> String {
    render(json!({ "error": message, "module": module }))
}

fn lattice_of(args: &LatticeArgs) -> Result<(SpincStructure, ParameterLattice), Failure> {
    let lattice = saturate_and_cosets(&args.lattice.0)?;
    Ok((decompose_spinc(args.khat), lattice))
}

fn json_only(cli: &Cli) -> Result<(), Failure> {
    match cli.format {
        Format::Json => Ok(()),
        Format::Csv => Err(Failure::Usage("this command only writes JSON".into())),
    }
}

pub fn execute(cli: &Cli) -> Result<String, Failure> {
    match &cli.command {
        Command::Spectrum(a) => {
            let spinc = decompose_spinc(a.khat);
            let form = HarmonicForm::new(Vector3::from(a.alpha));
            let slice = enumerate_spectrum(&spinc, &form, a.cutoff)?;
            if cli.format == Format::Csv {
                return Ok(slice.to_csv());
            }
            Ok(render(json!({
                "khat": a.khat,
                "alpha": a.alpha,
                "cutoff": a.cutoff,
                "kernel_dimension": kernel_dimension(&spinc, &form),
                "total_multiplicity": slice.total_multiplicity(),
                "entries": slice.entries,
            })))
        }
        Command::Flow(a) => {
            json_only(cli)?;
            let spinc = decompose_spinc(a.khat);
            let r = spectral_flow_numeric(&spinc, &a.loop_vector, a.samples)?;
            let mut v = serde_json::to_value(&r).expect("serializable");
            v["khat"] = json!(a.khat);
            v["closed_form"] = json!(spectral_flow_closed_form(&spinc, &a.loop_vector));
            v["samples"] = json!(a.samples);
            Ok(render(v))
        }
        Command::Index(a) => {
            json_only(cli)?;
            let (spinc, lattice) = lattice_of(a)?;
            let idx = index_element(&spinc, &lattice);
            Ok(render(json!({
                "khat": a.khat,
                "lattice": lattice.generators(),
                "values": idx.values,
                "zero": idx.is_zero(),
            })))
        }
        Command::Exists(a) => {
            json_only(cli)?;
            let (spinc, lattice) = lattice_of(a)?;
            Ok(render(json!({ "exists": sections_exist(&spinc, &lattice) })))
        }
        Command::Classify(a) => {
            json_only(cli)?;
            let (spinc, lattice) = lattice_of(a)?;
            let c = classify_small_r(&spinc, &lattice).map_err(Error::from)?;
            Ok(render(json!({
                "khat": a.khat,
                "lattice": lattice.generators(),
                "classification": c,
            })))
        }
        Command::Sections(SectionsCommand::Build(b)) => build(cli, b),
        Command::Verify(VerifyCommand::Landau(a)) => {
            json_only(cli)?;
            let r = landau_check(a.h, a.norm_k, a.grid, a.levels)?;
            Ok(render(serde_json::to_value(&r).expect("serializable")))
        }
        Command::Verify(VerifyCommand::Blocks(a)) => {
            json_only(cli)?;
            let r = mode_block_oracle(a.count, a.seed);
            Ok(render(serde_json::to_value(&r).expect("serializable")))
        }
        Command::Verify(VerifyCommand::Flow(a)) => {
            json_only(cli)?;
            let spinc = decompose_spinc(a.khat);
            let r = spectral_flow_numeric(&spinc, &a.loop_vector, a.samples)?;
            let closed = spectral_flow_closed_form(&spinc, &a.loop_vector);
            Ok(render(json!({
                "khat": a.khat,
                "loop": a.loop_vector,
                "numeric": r.flow,
                "closed_form": closed,
                "agree": r.flow == closed,
                "crossings": r.crossings.len(),
            })))
        }
    }
}

fn descriptor(b: &BuildArgs, spinc: &SpincStructure, lattice: &ParameterLattice) -> Result<SectionDescriptor, Failure> {
    match (&b.degrees, b.rank) {
        (Some(map), None) => {
            let mut g = vec![0; lattice.cosets().len()];
            for &(c, n) in &map.0 {
                let slot = g.get_mut(c).ok_or_else(|| {
                    Failure::Usage(format!("coset {c} does not exist; ℓ_ℤ/ℓ has {} cosets", lattice.cosets().len()))
                })?;
                *slot = n;
            }
            Ok(SectionDescriptor::trivial(lattice, &g, b.radius)?)
        }
        (None, Some(rank)) => Ok(SectionDescriptor::nontrivial(rank, b.chern.unwrap_or(0), b.radius)),
        (None, None) if spinc.is_trivial() => {
            Ok(SectionDescriptor::trivial(lattice, &vec![0; lattice.cosets().len()], b.radius)?)
        }
        _ => Err(Failure::Usage("give either --degrees or --rank/--chern".into())),
    }
}

fn build(cli: &Cli, b: &BuildArgs) -> Result<String, Failure> {
    let (spinc, lattice) = lattice_of(&b.target)?;
    let desc = descriptor(b, &spinc, &lattice)?;
    let fields = build_sections(&spinc, &lattice, &desc, b.grid)?;
    let report = verify_spectral_section(&fields, &spinc, &lattice, desc.radius)?;
    // forced blocks are summarized by the report; only the free fields are written
    let (free, forced): (Vec<_>, Vec<_>) = fields.iter().partition(|f| !matches!(f.grid, FieldGrid::Chart { .. }));
    if cli.format == Format::Csv {
        if free.iter().any(|f| f.dim != 2) {
            return Err(Failure::Usage("CSV output needs 2×2 projector fields".into()));
        }
        let mut out = String::new();
        for (i, f) in free.iter().enumerate() {
            let csv = f.to_bloch_csv().expect("2×2 field");
            let mut lines = csv.lines();
            let head = lines.next().unwrap_or_default();
            if i == 0 {
                out.push_str(&format!("field,{head}\n"));
            }
            for line in lines {
                out.push_str(&format!("{i},{line}\n"));
            }
        }
        return Ok(out);
    }
    let mut invariants = Vec::new();
    for f in &free {
        let entry = match f.grid {
            FieldGrid::Polar { .. } => json!({ "coset": f.coset, "block": f.block, "relative_degree": relative_degree(f)? }),
            FieldGrid::Torus { n1, n2 } if n1 >= 2 && n2 >= 2 => json!({ "chern_number": chern_number(f)? }),
            _ => json!({ "coset": f.coset, "block": f.block }),
        };
        invariants.push(entry);
    }
    Ok(render(json!({
        "khat": b.target.khat,
        "lattice": lattice.generators(),
        "descriptor": desc,
        "report": report,
        "invariants": invariants,
        "forced_blocks": forced.iter().map(|f| f.block).collect::<Vec<_>>(),
        "fields": free,
    })))
}
