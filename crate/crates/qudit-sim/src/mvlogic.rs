//! Multi-valued logical functions: truth tables, affine forms,
//! constant/balanced classification, affineness detection, and Marquand
//! chart ingestion.
//!
//! Truth tables are indexed in the same big-endian digit order as the
//! register module, so there is a single indexing convention across the
//! crate.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::SimError;
use crate::register::RegisterShape;
use crate::Result;

/// A total function `{0..n-1}^r -> {0..n-1}` stored as a truth table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MvFunction {
    shape: RegisterShape,
    outputs: Vec<usize>,
}

impl MvFunction {
    pub fn new(shape: RegisterShape, outputs: Vec<usize>) -> Result<Self> {
        if outputs.len() != shape.dimension() {
            return Err(SimError::DimensionMismatch(format!(
                "table length {} vs register dim {}",
                outputs.len(),
                shape.dimension()
            )));
        }
        if let Some(&bad) = outputs.iter().find(|&&v| v >= shape.radix()) {
            return Err(SimError::DigitOutOfRange { digit: bad, radix: shape.radix() });
        }
        Ok(Self { shape, outputs })
    }

    /// The constant function with the given value.
    pub fn constant(shape: RegisterShape, value: usize) -> Result<Self> {
        Self::new(shape, vec![value; shape.dimension()])
    }

    /// Uniformly random table.
    pub fn random<R: Rng + ?Sized>(shape: RegisterShape, rng: &mut R) -> Self {
        let outputs = (0..shape.dimension()).map(|_| rng.random_range(0..shape.radix())).collect();
        Self { shape, outputs }
    }

    /// Random balanced table: a shuffled multiset holding each codomain
    /// value exactly `n^(r-1)` times.
    pub fn random_balanced<R: Rng + ?Sized>(shape: RegisterShape, rng: &mut R) -> Self {
        let per_value = shape.dimension() / shape.radix();
        let mut outputs: Vec<usize> = (0..shape.radix())
            .flat_map(|v| std::iter::repeat(v).take(per_value))
            .collect();
        outputs.shuffle(rng);
        Self { shape, outputs }
    }

    pub fn shape(&self) -> RegisterShape {
        self.shape
    }

    pub fn outputs(&self) -> &[usize] {
        &self.outputs
    }

    /// Value at a basis index.
    pub fn value_at(&self, index: usize) -> Result<usize> {
        self.outputs
            .get(index)
            .copied()
            .ok_or(SimError::IndexOutOfRange { index, dim: self.outputs.len() })
    }
}

/// `f(x_1,...,x_r) = A_0 ⊕ A_1·x_1 ⊕ ... ⊕ A_r·x_r` with mod-n arithmetic.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AffineForm {
    shape: RegisterShape,
    coefficients: Vec<usize>,
}

impl AffineForm {
    /// `coefficients` lists `A_0..A_r`, so it has `arity + 1` entries.
    pub fn new(shape: RegisterShape, coefficients: Vec<usize>) -> Result<Self> {
        if coefficients.len() != shape.arity() + 1 {
            return Err(SimError::DimensionMismatch(format!(
                "expected {} coefficients, got {}",
                shape.arity() + 1,
                coefficients.len()
            )));
        }
        if let Some(&bad) = coefficients.iter().find(|&&v| v >= shape.radix()) {
            return Err(SimError::DigitOutOfRange { digit: bad, radix: shape.radix() });
        }
        Ok(Self { shape, coefficients })
    }

    pub fn shape(&self) -> RegisterShape {
        self.shape
    }

    /// `A_0..A_r`.
    pub fn coefficients(&self) -> &[usize] {
        &self.coefficients
    }

    /// Coefficients of the variables only, `A_1..A_r`.
    pub fn variable_coefficients(&self) -> &[usize] {
        &self.coefficients[1..]
    }

    /// `(A_0 + Σ A_i·x_i) mod n`.
    pub fn eval(&self, digits: &[usize]) -> Result<usize> {
        if digits.len() != self.shape.arity() {
            return Err(SimError::DimensionMismatch(format!(
                "expected {} digits, got {}",
                self.shape.arity(),
                digits.len()
            )));
        }
        let n = self.shape.radix();
        let mut acc = self.coefficients[0];
        for (a, &x) in self.coefficients[1..].iter().zip(digits) {
            if x >= n {
                return Err(SimError::DigitOutOfRange { digit: x, radix: n });
            }
            acc = (acc + a * x) % n;
        }
        Ok(acc)
    }

    /// Truth table of this form over the whole domain.
    pub fn tabulate(&self) -> MvFunction {
        let outputs = (0..self.shape.dimension())
            .map(|index| {
                let digits = self.shape.index_to_digits(index).expect("index in range");
                self.eval(&digits).expect("digits in range")
            })
            .collect();
        MvFunction { shape: self.shape, outputs }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum ClassTag {
    Constant,
    Balanced,
    Neither,
}

/// Classification of a table together with its codomain histogram.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FunctionClass {
    pub tag: ClassTag,
    pub histogram: Vec<u64>,
}

/// Histogram-based constant/balanced classification.
pub fn classify(f: &MvFunction) -> FunctionClass {
    let n = f.shape.radix();
    let dim = f.shape.dimension() as u64;
    let mut histogram = vec![0u64; n];
    for &v in &f.outputs {
        histogram[v] += 1;
    }
    let tag = if histogram.iter().any(|&c| c == dim) {
        ClassTag::Constant
    } else if histogram.iter().all(|&c| c == dim / n as u64) {
        ClassTag::Balanced
    } else {
        ClassTag::Neither
    };
    FunctionClass { tag, histogram }
}

/// Recovers the unique affine form tabulating to `f`, if one exists.
///
/// Probes `A_0 = f(0,...,0)` and `A_i = f(e_i) ⊖ A_0` at the unit inputs,
/// then verifies the candidate against the full table.
pub fn detect_affine(f: &MvFunction) -> Option<AffineForm> {
    let shape = f.shape;
    let n = shape.radix();
    let a0 = f.outputs[0];
    let mut coefficients = Vec::with_capacity(shape.arity() + 1);
    coefficients.push(a0);
    for i in 0..shape.arity() {
        let unit_index = n.pow((shape.arity() - 1 - i) as u32);
        coefficients.push((f.outputs[unit_index] + n - a0) % n);
    }
    let candidate = AffineForm { shape, coefficients };
    (candidate.tabulate().outputs == f.outputs).then_some(candidate)
}

/// Exact number of balanced tables on the shape, `(n^r)! / ((n^(r-1))!)^n`.
/// Guarded to `n^r <= 20` so the arithmetic stays exact.
pub fn count_balanced(shape: RegisterShape) -> Result<u64> {
    let dim = shape.dimension();
    if dim > 20 {
        return Err(SimError::CountGuard(dim));
    }
    fn factorial(k: usize) -> u128 {
        (1..=k as u128).product()
    }
    let numerator = factorial(dim);
    let denominator = factorial(dim / shape.radix()).pow(shape.radix() as u32);
    Ok((numerator / denominator) as u64)
}

/// Parses a Marquand chart document into a truth table.
///
/// The format is a `radix n` header line followed by exactly `n` rows of
/// whitespace-separated output digits. Rows are indexed by the last input
/// digit and columns by the leading digits read as a big-endian number, so a
/// cell at column `A`, row `B` lands at table index `A·n + B`. A two-input
/// chart is the plain n×n grid; wider charts extend column-wise in
/// row-major blocks.
pub fn parse_chart(text: &str) -> Result<MvFunction> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty());

    let (header_line, header) = lines.next().ok_or_else(|| SimError::Parse {
        line: 1,
        column: 1,
        message: "empty chart".into(),
    })?;
    let mut header_tokens = header.split_whitespace();
    let radix: usize = match (header_tokens.next(), header_tokens.next(), header_tokens.next()) {
        (Some("radix"), Some(value), None) => value.parse().map_err(|_| SimError::Parse {
            line: header_line,
            column: 2,
            message: format!("invalid radix value '{value}'"),
        })?,
        _ => {
            return Err(SimError::Parse {
                line: header_line,
                column: 1,
                message: "expected header 'radix <n>'".into(),
            })
        }
    };
    if radix < 2 {
        return Err(SimError::RadixTooSmall(radix));
    }

    let mut grid: Vec<Vec<usize>> = Vec::new();
    let mut row_lines = Vec::new();
    for (line_no, line) in lines {
        let mut row = Vec::new();
        for (col, token) in line.split_whitespace().enumerate() {
            let value: usize = token.parse().map_err(|_| SimError::Parse {
                line: line_no,
                column: col + 1,
                message: format!("invalid cell '{token}'"),
            })?;
            if value >= radix {
                return Err(SimError::Parse {
                    line: line_no,
                    column: col + 1,
                    message: format!("cell value {value} out of range for radix {radix}"),
                });
            }
            row.push(value);
        }
        grid.push(row);
        row_lines.push(line_no);
    }

    if grid.len() != radix {
        return Err(SimError::Parse {
            line: row_lines.last().copied().unwrap_or(header_line),
            column: 1,
            message: format!("expected {radix} rows, got {}", grid.len()),
        });
    }
    let width = grid[0].len();
    for (row, &line_no) in grid.iter().zip(&row_lines) {
        if row.len() != width {
            return Err(SimError::Parse {
                line: line_no,
                column: row.len() + 1,
                message: format!("expected {width} cells per row, got {}", row.len()),
            });
        }
    }

    // Column count must be n^(r-1) for some arity r >= 1.
    let mut arity = 1usize;
    let mut expected_width = 1usize;
    while expected_width < width {
        expected_width *= radix;
        arity += 1;
    }
    if expected_width != width {
        return Err(SimError::Parse {
            line: row_lines[0],
            column: 1,
            message: format!("column count {width} is not a power of the radix {radix}"),
        });
    }

    let shape = RegisterShape::new(radix, arity)?;
    let mut outputs = vec![0usize; shape.dimension()];
    for (b, row) in grid.iter().enumerate() {
        for (a, &value) in row.iter().enumerate() {
            outputs[a * radix + b] = value;
        }
    }
    MvFunction::new(shape, outputs)
}

/// JSON form of a function: either a truth table
/// `{"radix": n, "arity": r, "outputs": [...]}` or an affine description
/// `{"radix": n, "affine": [A0..Ar]}`.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum FunctionSpec {
    Affine { radix: usize, affine: Vec<usize> },
    Table { radix: usize, arity: usize, outputs: Vec<usize> },
}

impl FunctionSpec {
    /// Builds the table, returning the originating affine form when given one.
    pub fn build(&self) -> Result<(MvFunction, Option<AffineForm>)> {
        match self {
            FunctionSpec::Affine { radix, affine } => {
                if affine.len() < 2 {
                    return Err(SimError::InvalidArgument(
                        "affine form needs at least A0 and A1".into(),
                    ));
                }
                let shape = RegisterShape::new(*radix, affine.len() - 1)?;
                let form = AffineForm::new(shape, affine.clone())?;
                Ok((form.tabulate(), Some(form)))
            }
            FunctionSpec::Table { radix, arity, outputs } => {
                let shape = RegisterShape::new(*radix, *arity)?;
                Ok((MvFunction::new(shape, outputs.clone())?, None))
            }
        }
    }
}

impl From<&MvFunction> for FunctionSpec {
    fn from(f: &MvFunction) -> Self {
        FunctionSpec::Table {
            radix: f.shape.radix(),
            arity: f.shape.arity(),
            outputs: f.outputs.clone(),
        }
    }
}
