//! Touchstone v1 S-parameter files (.s1p/.s2p).
//!
//! Reads and writes the format VNA software and field solvers export, so
//! model output can be laid directly against measurement. Version 2 files
//! ([Version] keyword) are rejected. Only S-parameters, one or two ports;
//! 2-port rows follow the v1 column order S11 S21 S12 S22.

use num_complex::Complex64;
use std::path::Path;

use crate::cascade::FrequencyResponse;
use crate::error::{Error, Result};

/// Number format of the data columns.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    /// magnitude, angle in degrees
    Ma,
    /// 20 log10 magnitude, angle in degrees
    Db,
    /// real, imaginary
    Ri,
}

impl Format {
    fn token(&self) -> &'static str {
        match self {
            Format::Ma => "MA",
            Format::Db => "DB",
            Format::Ri => "RI",
        }
    }

    fn decode(&self, u: f64, v: f64) -> Complex64 {
        match self {
            Format::Ri => Complex64::new(u, v),
            Format::Ma => Complex64::from_polar(u, v.to_radians()),
            Format::Db => Complex64::from_polar(10f64.powf(u / 20.0), v.to_radians()),
        }
    }

    fn encode(&self, s: Complex64) -> (f64, f64) {
        match self {
            Format::Ri => (s.re, s.im),
            Format::Ma => (s.norm(), s.arg().to_degrees()),
            Format::Db => (
                20.0 * s.norm().max(1e-300).log10(),
                s.arg().to_degrees(),
            ),
        }
    }
}

impl std::str::FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "ma" => Ok(Format::Ma),
            "db" => Ok(Format::Db),
            "ri" => Ok(Format::Ri),
            other => Err(Error::Touchstone(format!("unknown format '{other}'"))),
        }
    }
}

/// Frequency unit of the option line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FreqUnit {
    Hz,
    KHz,
    MHz,
    GHz,
}

impl FreqUnit {
    fn multiplier(&self) -> f64 {
        match self {
            FreqUnit::Hz => 1.0,
            FreqUnit::KHz => 1e3,
            FreqUnit::MHz => 1e6,
            FreqUnit::GHz => 1e9,
        }
    }

    fn token(&self) -> &'static str {
        match self {
            FreqUnit::Hz => "Hz",
            FreqUnit::KHz => "kHz",
            FreqUnit::MHz => "MHz",
            FreqUnit::GHz => "GHz",
        }
    }
}

/// Parsed option line (or its defaults, "# GHz S MA R 50").
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Options {
    pub unit: FreqUnit,
    pub format: Format,
    pub z_ref: f64,
}

impl Default for Options {
    fn default() -> Self {
        Options {
            unit: FreqUnit::GHz,
            format: Format::Ma,
            z_ref: 50.0,
        }
    }
}

/// A Touchstone v1 document: option line, data, and the comments that were
/// on the way in.
#[derive(Debug, Clone)]
pub struct TouchstoneDocument {
    pub options: Options,
    pub ports: usize,
    pub f_hz: Vec<f64>,
    /// ports^2 values per frequency, stored row-major [s11] or
    /// [s11 s12 s21 s22].
    pub data: Vec<Complex64>,
    pub comments: Vec<String>,
}

impl TouchstoneDocument {
    pub fn n_points(&self) -> usize {
        self.f_hz.len()
    }

    pub fn s(&self, idx: usize, i: usize, j: usize) -> Complex64 {
        self.data[idx * self.ports * self.ports + (i - 1) * self.ports + (j - 1)]
    }

    /// View as a [`FrequencyResponse`] for the analysis pipeline.
    pub fn to_response(&self) -> Result<FrequencyResponse> {
        match self.ports {
            1 => FrequencyResponse::one_port(self.f_hz.clone(), self.data.clone(), self.options.z_ref),
            2 => {
                let s: Vec<[Complex64; 4]> = (0..self.n_points())
                    .map(|k| {
                        [
                            self.s(k, 1, 1),
                            self.s(k, 1, 2),
                            self.s(k, 2, 1),
                            self.s(k, 2, 2),
                        ]
                    })
                    .collect();
                FrequencyResponse::two_port(self.f_hz.clone(), s, self.options.z_ref)
            }
            n => Err(Error::Touchstone(format!("unsupported port count {n}"))),
        }
    }
}

/// Parses Touchstone v1 text. Port count is inferred from the data-row
/// arity (3 columns = 1 port, 9 = 2 ports); tolerant of arbitrary
/// whitespace and '!' comments anywhere.
pub fn parse(text: &str) -> Result<TouchstoneDocument> {
    let mut options: Option<Options> = None;
    let mut comments = Vec::new();
    let mut ports = 0usize;
    let mut f_hz: Vec<f64> = Vec::new();
    let mut data: Vec<Complex64> = Vec::new();

    for (idx, raw_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match raw_line.find('!') {
            Some(pos) => {
                let comment = raw_line[pos + 1..].trim();
                if !comment.is_empty() {
                    comments.push(comment.to_string());
                }
                &raw_line[..pos]
            }
            None => raw_line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if line.starts_with('[') {
            return Err(Error::TouchstoneParse {
                line: line_no,
                message: format!(
                    "keyword '{line}' is Touchstone v2; only v1 files are supported"
                ),
            });
        }
        if let Some(rest) = line.strip_prefix('#') {
            if options.is_some() {
                return Err(Error::TouchstoneParse {
                    line: line_no,
                    message: "multiple option lines".into(),
                });
            }
            if !data.is_empty() {
                return Err(Error::TouchstoneParse {
                    line: line_no,
                    message: "option line after data".into(),
                });
            }
            options = Some(parse_option_line(rest, line_no)?);
            continue;
        }

        // data row
        let mut values = Vec::new();
        for tok in line.split_whitespace() {
            let v: f64 = tok.parse().map_err(|_| Error::TouchstoneParse {
                line: line_no,
                message: format!("bad number '{tok}'"),
            })?;
            values.push(v);
        }
        if ports == 0 {
            ports = match values.len() {
                3 => 1,
                9 => 2,
                n => {
                    return Err(Error::TouchstoneParse {
                        line: line_no,
                        message: format!(
                            "row has {n} columns; expected 3 (.s1p) or 9 (.s2p)"
                        ),
                    })
                }
            };
        } else if values.len() != 1 + 2 * ports * ports {
            return Err(Error::TouchstoneParse {
                line: line_no,
                message: format!(
                    "row has {} columns; expected {} for a {}-port file",
                    values.len(),
                    1 + 2 * ports * ports,
                    ports
                ),
            });
        }

        let opts = options.unwrap_or_default();
        let f = values[0] * opts.unit.multiplier();
        if let Some(&last) = f_hz.last() {
            if f <= last {
                return Err(Error::TouchstoneParse {
                    line: line_no,
                    message: format!(
                        "frequencies must be strictly ascending ({f} Hz after {last} Hz)"
                    ),
                });
            }
        }
        f_hz.push(f);
        let mut point = Vec::with_capacity(ports * ports);
        for pair in values[1..].chunks_exact(2) {
            point.push(opts.format.decode(pair[0], pair[1]));
        }
        if ports == 2 {
            // file order S11 S21 S12 S22 -> row-major S11 S12 S21 S22
            point.swap(1, 2);
        }
        data.extend(point);
    }

    if f_hz.is_empty() {
        return Err(Error::Touchstone("no data rows".into()));
    }
    Ok(TouchstoneDocument {
        options: options.unwrap_or_default(),
        ports,
        f_hz,
        data,
        comments,
    })
}

fn parse_option_line(rest: &str, line_no: usize) -> Result<Options> {
    let mut opts = Options::default();
    let mut tokens = rest.split_whitespace().peekable();
    while let Some(tok) = tokens.next() {
        match tok.to_ascii_lowercase().as_str() {
            "hz" => opts.unit = FreqUnit::Hz,
            "khz" => opts.unit = FreqUnit::KHz,
            "mhz" => opts.unit = FreqUnit::MHz,
            "ghz" => opts.unit = FreqUnit::GHz,
            "s" => {}
            "y" | "z" | "g" | "h" => {
                return Err(Error::TouchstoneParse {
                    line: line_no,
                    message: format!(
                        "parameter type '{}' not supported; only S-parameters",
                        tok.to_ascii_uppercase()
                    ),
                });
            }
            "ma" => opts.format = Format::Ma,
            "db" => opts.format = Format::Db,
            "ri" => opts.format = Format::Ri,
            "r" => {
                let z = tokens.next().ok_or(Error::TouchstoneParse {
                    line: line_no,
                    message: "'R' must be followed by a reference impedance".into(),
                })?;
                opts.z_ref = z.parse().map_err(|_| Error::TouchstoneParse {
                    line: line_no,
                    message: format!("bad reference impedance '{z}'"),
                })?;
                if !(opts.z_ref > 0.0) || !opts.z_ref.is_finite() {
                    return Err(Error::TouchstoneParse {
                        line: line_no,
                        message: format!("reference impedance must be positive, got {}", opts.z_ref),
                    });
                }
            }
            other => {
                return Err(Error::TouchstoneParse {
                    line: line_no,
                    message: format!("unknown option token '{other}'"),
                });
            }
        }
    }
    Ok(opts)
}

/// Serializes a response as Touchstone v1 text: GHz option line matching
/// the response's reference impedance, one frequency per line.
pub fn write(response: &FrequencyResponse, format: Format) -> Result<String> {
    if response.ports() > 2 {
        return Err(Error::Touchstone(format!(
            "unsupported port count {}",
            response.ports()
        )));
    }
    let mut out = String::new();
    out.push_str(&format!(
        "# GHz S {} R {}\n",
        format.token(),
        fmt_sig(response.z_ref())
    ));
    for idx in 0..response.len() {
        let f_ghz = response.frequencies()[idx] / 1e9;
        out.push_str(&format!("{f_ghz:.9e}"));
        let entries: &[(usize, usize)] = if response.ports() == 1 {
            &[(1, 1)]
        } else {
            // v1 2-port column order
            &[(1, 1), (2, 1), (1, 2), (2, 2)]
        };
        for &(i, j) in entries {
            let (u, v) = format.encode(response.s(idx, i, j));
            out.push_str(&format!(" {u:.9e} {v:.9e}"));
        }
        out.push('\n');
    }
    Ok(out)
}

/// Compact formatting for the option line's impedance (50 rather than
/// 5.0e1).
fn fmt_sig(x: f64) -> String {
    if x == x.trunc() && x.abs() < 1e9 {
        format!("{}", x as i64)
    } else {
        format!("{x:.9e}")
    }
}

/// Port count implied by a file extension, if any.
pub fn ports_from_extension(path: &Path) -> Option<usize> {
    match path
        .extension()
        .and_then(|e| e.to_str())
        .map(|e| e.to_ascii_lowercase())
        .as_deref()
    {
        Some("s1p") => Some(1),
        Some("s2p") => Some(2),
        _ => None,
    }
}

/// Reads and parses a Touchstone file, cross-checking the extension-implied
/// port count against the data.
pub fn read_file(path: &Path) -> Result<TouchstoneDocument> {
    let text = std::fs::read_to_string(path)?;
    let doc = parse(&text)?;
    if let Some(expected) = ports_from_extension(path) {
        if expected != doc.ports {
            return Err(Error::Touchstone(format!(
                "{} implies {} port(s) but the data has {}",
                path.display(),
                expected,
                doc.ports
            )));
        }
    }
    Ok(doc)
}
