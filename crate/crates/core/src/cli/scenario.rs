//! Scenario files: JSON schema, validation into library types, and
//! canonical re-serialization.

use serde::{Deserialize, Serialize};

use super::expr::{format_z_poly, parse_poly, parse_z_poly, Variables};
use crate::error::{Error, Result};
use crate::position::Caps;
use crate::projective::{restrict_form_to_map, AnalyticMap, HomogeneousForm, Hypersurface, SpaceSpec};
use crate::scalar::{fmt_scalar, int, parse_scalar, Scalar};
use crate::series::{iterated_composition, iterated_power_series, PowerLawTail, Series, Valuation, DEFAULT_ORDER_CAP};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub description: Option<String>,
    pub valuation: ValuationFile,
    pub space: SpaceFile,
    pub map: MapFile,
    pub hypersurfaces: Vec<HypersurfaceFile>,
    #[serde(default)]
    pub options: OptionsFile,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ValuationFile {
    pub kind: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub p: Option<u64>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SpaceFile {
    #[serde(rename = "N")]
    pub n: usize,
    #[serde(rename = "X_ideal", default, skip_serializing_if = "Option::is_none")]
    pub x_ideal: Option<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MapFile {
    pub coords: Vec<CoordFile>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum CoordFile {
    Expr(String),
    Builtin(BuiltinFile),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BuiltinFile {
    pub builtin: String,
    pub order: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub a: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outer_order: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tail: Option<TailFile>,
}

/// `v(a_n) ≥ coefficient·n^exponent + offset` beyond the head.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TailFile {
    pub coefficient: String,
    pub exponent: String,
    #[serde(default = "zero_string")]
    pub offset: String,
}

fn zero_string() -> String {
    "0".into()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypersurfaceFile {
    pub name: String,
    pub form: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OptionsFile {
    #[serde(default = "default_domain")]
    pub t_domain: [String; 2],
    #[serde(rename = "assumed_M", default, skip_serializing_if = "Option::is_none")]
    pub assumed_m: Option<u32>,
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub normalize_coeffs: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub caps: Option<CapsFile>,
}

fn default_domain() -> [String; 2] {
    ["0".into(), "10".into()]
}

impl Default for OptionsFile {
    fn default() -> Self {
        OptionsFile { t_domain: default_domain(), assumed_m: None, normalize_coeffs: false, caps: None }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CapsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_subset_q: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_generators: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_degree: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_pairs: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_nullstellensatz_power: Option<u32>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lattice_bound: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub order_cap: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BuiltinKind {
    /// `g(z) = Σ a^(n²) z^n`.
    G,
    /// `g(g(z))`.
    G2,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BuiltinCoord {
    pub kind: BuiltinKind,
    pub order: usize,
    pub a: Option<Scalar>,
    pub outer_order: Option<usize>,
    pub tail: Option<PowerLawTail>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoordSpec {
    Polynomial(Vec<Scalar>),
    Builtin(BuiltinCoord),
}

impl CoordSpec {
    /// Whether this coordinate relies on a tail bound that is declared
    /// rather than proved from closed-form coefficients.
    pub fn declared_tail(&self) -> bool {
        matches!(self, CoordSpec::Builtin(b) if b.kind == BuiltinKind::G2 || b.tail.is_some())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ScenarioOptions {
    pub t_min: Scalar,
    pub t_max: Scalar,
    pub assumed_m: Option<u32>,
    pub normalize_coeffs: bool,
    pub caps: Caps,
    pub order_cap: usize,
}

/// A validated scenario.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Scenario {
    pub name: Option<String>,
    pub description: Option<String>,
    pub valuation: Valuation,
    pub space: SpaceSpec,
    pub coords: Vec<CoordSpec>,
    pub map: AnalyticMap,
    pub hypersurfaces: Vec<Hypersurface>,
    pub options: ScenarioOptions,
}

fn schema(field: &str, message: impl std::fmt::Display) -> Error {
    Error::Schema(format!("{field}: {message}"))
}

fn scalar_field(s: &str, field: &str) -> Result<Scalar> {
    parse_scalar(s).map_err(|e| schema(field, e))
}

fn form_field(src: &str, nvars: usize, field: &str) -> Result<HomogeneousForm> {
    let p = parse_poly(src, Variables::Projective(nvars), field)?;
    HomogeneousForm::new(p).map_err(|e| match e {
        Error::Inhomogeneous(m) => Error::Inhomogeneous(format!("{field}: {m}")),
        other => other,
    })
}

fn build_builtin(b: &BuiltinCoord, valuation: Valuation, cap: usize, field: &str) -> Result<Series> {
    if b.order > cap {
        return Err(Error::OrderCap { requested: b.order, cap });
    }
    let p = valuation
        .prime()
        .ok_or_else(|| schema(field, "builtin series need a p-adic valuation"))?;
    let a = b.a.clone().unwrap_or_else(|| int(p as i64));
    let series = match b.kind {
        BuiltinKind::G => iterated_power_series(&a, b.order, valuation)?,
        BuiltinKind::G2 => {
            let outer = b.outer_order.unwrap_or_else(|| (b.order / 2).max(1));
            iterated_composition(&a, b.order, outer, valuation)?
        }
    };
    match &b.tail {
        Some(t) => series.declare_tail(t.clone()),
        None => Ok(series),
    }
}

impl Scenario {
    pub fn from_file(file: &ScenarioFile) -> Result<Self> {
        let valuation = match (file.valuation.kind.as_str(), file.valuation.p) {
            ("p-adic", Some(p)) => Valuation::padic(p)?,
            ("p-adic", None) => return Err(schema("valuation.p", "missing prime for a p-adic valuation")),
            ("trivial", None) => Valuation::Trivial,
            ("trivial", Some(_)) => return Err(schema("valuation.p", "a trivial valuation takes no prime")),
            (k, _) => return Err(schema("valuation.kind", format!("expected \"p-adic\" or \"trivial\", got {k:?}"))),
        };

        let o = &file.options;
        let t_min = scalar_field(&o.t_domain[0], "options.t_domain[0]")?;
        let t_max = scalar_field(&o.t_domain[1], "options.t_domain[1]")?;
        if t_min >= t_max {
            return Err(schema("options.t_domain", "need t_min < t_max"));
        }
        if o.assumed_m == Some(0) {
            return Err(schema("options.assumed_M", "M must be a positive integer"));
        }
        let mut caps = Caps::default();
        let mut order_cap = DEFAULT_ORDER_CAP;
        if let Some(c) = &o.caps {
            caps.max_subset_q = c.max_subset_q.unwrap_or(caps.max_subset_q);
            caps.max_generators = c.max_generators.unwrap_or(caps.max_generators);
            caps.max_degree = c.max_degree.unwrap_or(caps.max_degree);
            caps.max_pairs = c.max_pairs.unwrap_or(caps.max_pairs);
            caps.max_nullstellensatz_power = c.max_nullstellensatz_power.unwrap_or(caps.max_nullstellensatz_power);
            caps.lattice_bound = c.lattice_bound.unwrap_or(caps.lattice_bound);
            order_cap = c.order_cap.unwrap_or(order_cap);
        }

        let nv = file.space.n + 1;
        let x_ideal = file
            .space
            .x_ideal
            .iter()
            .flatten()
            .enumerate()
            .map(|(i, s)| form_field(s, nv, &format!("space.X_ideal[{i}]")))
            .collect::<Result<Vec<_>>>()?;
        let space = SpaceSpec::variety(file.space.n, x_ideal, &caps)?;

        if file.map.coords.len() != nv {
            return Err(schema("map.coords", format!("expected N+1 = {nv} coordinates, got {}", file.map.coords.len())));
        }
        let mut coords = vec![];
        let mut series = vec![];
        for (i, c) in file.map.coords.iter().enumerate() {
            let field = format!("map.coords[{i}]");
            let spec = match c {
                CoordFile::Expr(s) => CoordSpec::Polynomial(crate::upoly::trim(parse_z_poly(s, &field)?)),
                CoordFile::Builtin(b) => {
                    let kind = match b.builtin.as_str() {
                        "g" => BuiltinKind::G,
                        "g2" | "g∘g" => BuiltinKind::G2,
                        other => return Err(Error::UnknownBuiltin(format!("{field}: {other}"))),
                    };
                    let a = b.a.as_deref().map(|s| scalar_field(s, &format!("{field}.a"))).transpose()?;
                    let tail = b
                        .tail
                        .as_ref()
                        .map(|t| {
                            PowerLawTail::new(
                                scalar_field(&t.coefficient, &format!("{field}.tail.coefficient"))?,
                                scalar_field(&t.exponent, &format!("{field}.tail.exponent"))?,
                                scalar_field(&t.offset, &format!("{field}.tail.offset"))?,
                            )
                        })
                        .transpose()?;
                    if kind == BuiltinKind::G && b.outer_order.is_some() {
                        return Err(schema(&field, "outer_order applies only to g2"));
                    }
                    CoordSpec::Builtin(BuiltinCoord { kind, order: b.order, a, outer_order: b.outer_order, tail })
                }
            };
            series.push(match &spec {
                CoordSpec::Polynomial(cs) => Series::polynomial(cs.clone(), valuation),
                CoordSpec::Builtin(b) => build_builtin(b, valuation, order_cap, &field)?,
            });
            coords.push(spec);
        }
        let map = AnalyticMap::new(series)?;

        let mut hypersurfaces = vec![];
        for (i, h) in file.hypersurfaces.iter().enumerate() {
            if hypersurfaces.iter().any(|d: &Hypersurface| d.name == h.name) {
                return Err(schema(&format!("hypersurfaces[{i}].name"), format!("duplicate name {:?}", h.name)));
            }
            let form = form_field(&h.form, nv, &format!("hypersurfaces[{i}].form"))?;
            hypersurfaces.push(Hypersurface::new(h.name.clone(), form));
        }
        if hypersurfaces.is_empty() {
            return Err(schema("hypersurfaces", "at least one hypersurface is required"));
        }

        // f must land in X
        for (i, g) in space.x_ideal.iter().enumerate() {
            match restrict_form_to_map(g, &map, order_cap) {
                Err(Error::ContainedInHypersurface(_)) | Err(Error::ContainmentUndetermined(_)) => {}
                Ok(_) => return Err(Error::InvalidMap(format!("f does not map into X (generator {i} is nonzero on f)"))),
                Err(e) => return Err(e),
            }
        }

        Ok(Scenario {
            name: file.name.clone(),
            description: file.description.clone(),
            valuation,
            space,
            coords,
            map,
            hypersurfaces,
            options: ScenarioOptions {
                t_min,
                t_max,
                assumed_m: o.assumed_m,
                normalize_coeffs: o.normalize_coeffs,
                caps,
                order_cap,
            },
        })
    }

    /// Canonical file form.
    pub fn to_file(&self) -> ScenarioFile {
        let valuation = match self.valuation {
            Valuation::PAdic(p) => ValuationFile { kind: "p-adic".into(), p: Some(p) },
            Valuation::Trivial => ValuationFile { kind: "trivial".into(), p: None },
        };
        let x_ideal = (!self.space.x_ideal.is_empty())
            .then(|| self.space.x_ideal.iter().map(|f| f.to_string()).collect());
        let coords = self
            .coords
            .iter()
            .map(|c| match c {
                CoordSpec::Polynomial(cs) => CoordFile::Expr(format_z_poly(cs)),
                CoordSpec::Builtin(b) => CoordFile::Builtin(BuiltinFile {
                    builtin: match b.kind {
                        BuiltinKind::G => "g".into(),
                        BuiltinKind::G2 => "g2".into(),
                    },
                    order: b.order,
                    a: b.a.as_ref().map(fmt_scalar),
                    outer_order: b.outer_order,
                    tail: b.tail.as_ref().map(|t| TailFile {
                        coefficient: fmt_scalar(t.coefficient()),
                        exponent: fmt_scalar(t.exponent()),
                        offset: fmt_scalar(t.offset()),
                    }),
                }),
            })
            .collect();
        let d = Caps::default();
        let c = &self.options.caps;
        let diff = |a, b| (a != b).then_some(a);
        let caps = CapsFile {
            max_subset_q: diff(c.max_subset_q, d.max_subset_q),
            max_generators: diff(c.max_generators, d.max_generators),
            max_degree: (c.max_degree != d.max_degree).then_some(c.max_degree),
            max_pairs: diff(c.max_pairs, d.max_pairs),
            max_nullstellensatz_power: (c.max_nullstellensatz_power != d.max_nullstellensatz_power)
                .then_some(c.max_nullstellensatz_power),
            lattice_bound: (c.lattice_bound != d.lattice_bound).then_some(c.lattice_bound),
            order_cap: diff(self.options.order_cap, DEFAULT_ORDER_CAP),
        };
        ScenarioFile {
            name: self.name.clone(),
            description: self.description.clone(),
            valuation,
            space: SpaceFile { n: self.space.ambient_dim, x_ideal },
            map: MapFile { coords },
            hypersurfaces: self
                .hypersurfaces
                .iter()
                .map(|h| HypersurfaceFile { name: h.name.clone(), form: h.form.to_string() })
                .collect(),
            options: OptionsFile {
                t_domain: [fmt_scalar(&self.options.t_min), fmt_scalar(&self.options.t_max)],
                assumed_m: self.options.assumed_m,
                normalize_coeffs: self.options.normalize_coeffs,
                caps: (caps != CapsFile::default()).then_some(caps),
            },
        }
    }

    pub fn q(&self) -> usize {
        self.hypersurfaces.len()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.hypersurfaces.iter().map(|h| h.degree()).collect()
    }

    pub fn declared_tails(&self) -> bool {
        self.coords.iter().any(|c| c.declared_tail())
    }
}

/// Parses and validates a scenario document. JSON syntax errors carry
/// line and column.
pub fn parse_scenario(text: &str) -> Result<Scenario> {
    let file: ScenarioFile = serde_json::from_str(text).map_err(|e| Error::Schema(e.to_string()))?;
    Scenario::from_file(&file)
}

pub fn serialize_scenario(s: &Scenario) -> String {
    serde_json::to_string_pretty(&s.to_file()).expect("scenario serialization") + "\n"
}

#[cfg(test)]
mod tests {
    use super::*;

    const CONICS: &str = r#"{
        "valuation": {"kind": "p-adic", "p": 5},
        "space": {"N": 2},
        "map": {"coords": ["z", "1", "0"]},
        "hypersurfaces": [
            {"name": "D1", "form": "X0*X1 - X2^2"},
            {"name": "D2", "form": "X0*X2 - X1^2"},
            {"name": "D3", "form": "X0*X1 - X2^2 + 3*(X0*X2 - X1^2)"}
        ],
        "options": {"t_domain": ["0", "10"]}
    }"#;

    #[test]
    fn parses_and_round_trips() {
        let s = parse_scenario(CONICS).unwrap();
        assert_eq!(s.q(), 3);
        assert_eq!(s.degrees(), vec![2, 2, 2]);
        let text = serialize_scenario(&s);
        assert_eq!(parse_scenario(&text).unwrap(), s);
        assert_eq!(serialize_scenario(&parse_scenario(&text).unwrap()), text);
    }

    #[test]
    fn rejections() {
        let inhom = CONICS.replace("X0*X1 - X2^2\"}", "X0*X1 - X2^2 + X0\"}");
        assert!(matches!(parse_scenario(&inhom), Err(Error::Inhomogeneous(_))));
        let p4 = CONICS.replace("\"p\": 5", "\"p\": 4");
        assert_eq!(parse_scenario(&p4).unwrap_err(), Error::NotPrime(4));
        let short = CONICS.replace("[\"z\", \"1\", \"0\"]", "[\"z\", \"1\"]");
        assert!(matches!(parse_scenario(&short), Err(Error::Schema(_))));
        let unknown = CONICS.replace("\"space\"", "\"spaec\"");
        let e = parse_scenario(&unknown).unwrap_err().to_string();
        assert!(e.contains("line"), "{e}");
        let common = CONICS.replace("[\"z\", \"1\", \"0\"]", "[\"z\", \"z^2\", \"0\"]");
        assert!(matches!(parse_scenario(&common), Err(Error::InvalidMap(_))));
    }

    #[test]
    fn builtins_and_caps_round_trip() {
        let text = r#"{
            "name": "g",
            "valuation": {"kind": "p-adic", "p": 2},
            "space": {"N": 1},
            "map": {"coords": ["1", {"builtin": "g", "order": 12, "tail": {"coefficient": "1", "exponent": "2"}}]},
            "hypersurfaces": [{"name": "H", "form": "X1"}],
            "options": {"t_domain": ["-1", "5/2"], "assumed_M": 2, "normalize_coeffs": true, "caps": {"lattice_bound": 2}}
        }"#;
        let s = parse_scenario(text).unwrap();
        assert!(s.declared_tails());
        assert_eq!(s.options.caps.lattice_bound, 2);
        assert_eq!(parse_scenario(&serialize_scenario(&s)).unwrap(), s);
    }

    #[test]
    fn variety_scenario() {
        let text = r#"{
            "valuation": {"kind": "trivial"},
            "space": {"N": 2, "X_ideal": ["X0*X2 - X1^2"]},
            "map": {"coords": ["1", "z", "z^2"]},
            "hypersurfaces": [{"name": "H", "form": "X1"}]
        }"#;
        let s = parse_scenario(text).unwrap();
        assert_eq!(s.space.dim, 1);
        let off = text.replace("\"z^2\"]", "\"z^3\"]");
        assert!(matches!(parse_scenario(&off), Err(Error::InvalidMap(_))));
    }
}
