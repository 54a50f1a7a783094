//! Function input resolution: JSON file, chart file, or inline affine
//! coefficients, with `-` reading stdin.

use std::io::Read;

use qudit_sim::mvlogic::{AffineForm, FunctionSpec, MvFunction};
use qudit_sim::{parse_chart, RegisterShape, SimError};

#[derive(Debug, clap::Args)]
pub struct FunctionInput {
    /// Function JSON file ('-' for stdin): {"radix":n,"arity":r,"outputs":[..]}
    /// or {"radix":n,"affine":[A0..Ar]}.
    #[arg(long, value_name = "FILE", conflicts_with_all = ["chart", "affine"])]
    pub function: Option<String>,

    /// Marquand chart file ('-' for stdin): a "radix n" header, then n rows
    /// of output digits with columns indexed by the first input.
    #[arg(long, value_name = "FILE", conflicts_with = "affine")]
    pub chart: Option<String>,

    /// Inline affine coefficients, "radix:A0,A1,...,Ar" (e.g. "3:1,2,1").
    #[arg(long, value_name = "SPEC")]
    pub affine: Option<String>,
}

fn read_source(path: &str) -> Result<String, SimError> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| SimError::InvalidArgument(format!("failed to read stdin: {e}")))?;
        Ok(buf)
    } else {
        std::fs::read_to_string(path)
            .map_err(|e| SimError::InvalidArgument(format!("failed to read '{path}': {e}")))
    }
}

fn parse_affine_spec(spec: &str) -> Result<(MvFunction, Option<AffineForm>), SimError> {
    let bad = |msg: &str| SimError::InvalidArgument(format!("affine spec '{spec}': {msg}"));
    let (radix_part, coeff_part) = spec
        .split_once(':')
        .ok_or_else(|| bad("expected 'radix:A0,A1,...,Ar'"))?;
    let radix: usize = radix_part.trim().parse().map_err(|_| bad("invalid radix"))?;
    let coefficients: Vec<usize> = coeff_part
        .split(',')
        .map(|t| t.trim().parse().map_err(|_| bad("invalid coefficient")))
        .collect::<Result<_, _>>()?;
    if coefficients.len() < 2 {
        return Err(bad("need at least A0 and A1"));
    }
    let shape = RegisterShape::new(radix, coefficients.len() - 1)?;
    let form = AffineForm::new(shape, coefficients)?;
    Ok((form.tabulate(), Some(form)))
}

impl FunctionInput {
    pub fn resolve(&self) -> Result<(MvFunction, Option<AffineForm>), SimError> {
        match (&self.function, &self.chart, &self.affine) {
            (Some(path), None, None) => {
                let text = read_source(path)?;
                let spec: FunctionSpec = serde_json::from_str(&text).map_err(|e| {
                    SimError::InvalidArgument(format!("invalid function JSON: {e}"))
                })?;
                spec.build()
            }
            (None, Some(path), None) => {
                let table = parse_chart(&read_source(path)?)?;
                let form = qudit_sim::detect_affine(&table);
                Ok((table, form))
            }
            (None, None, Some(spec)) => parse_affine_spec(spec),
            _ => Err(SimError::InvalidArgument(
                "provide exactly one of --function, --chart, --affine".into(),
            )),
        }
    }
}
