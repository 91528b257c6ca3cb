//! JSON and CSV file formats.
//!
//! Every number is written as an exact decimal or `"p/q"` string. Readers
//! also accept JSON numbers, which are taken at their literal decimal value.

use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::fuzzy::{Arrow, Cone, Diagram, FuzzySet};
use crate::locale::{IntervalLocale, Orientation};
use crate::rational::{format_decimal, parse_rational, Rational};
use crate::sheaf::{MonoPresheaf, StepPresheaf};
use crate::simplicial::{Simplex, SimplicialFuzzySet};
use crate::stalks::{StalkPoint, Verdict};
use crate::vr::{PointCloud, VrSystem};

/// A number in a file: a string (`"3/10"`, `"0.3"`) or a JSON number.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum NumberDoc {
    Text(String),
    Json(serde_json::Number),
}

impl NumberDoc {
    pub fn parse(&self) -> Result<Rational> {
        match self {
            NumberDoc::Text(s) => parse_rational(s),
            NumberDoc::Json(n) => parse_rational(&n.to_string()),
        }
    }
}

impl From<&Rational> for NumberDoc {
    fn from(r: &Rational) -> Self {
        NumberDoc::Text(format_decimal(r))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LocaleDoc {
    pub lo: NumberDoc,
    pub hi: NumberDoc,
    #[serde(default = "standard")]
    pub orientation: Orientation,
}

fn standard() -> Orientation {
    Orientation::Standard
}

impl LocaleDoc {
    pub fn to_locale(&self) -> Result<IntervalLocale> {
        IntervalLocale::new(self.lo.parse()?, self.hi.parse()?, self.orientation)
    }
}

impl From<&IntervalLocale> for LocaleDoc {
    fn from(l: &IntervalLocale) -> Self {
        LocaleDoc { lo: l.lo().into(), hi: l.hi().into(), orientation: l.orientation() }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ElementDoc {
    pub id: String,
    pub grade: NumberDoc,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attained: Option<bool>,
}

/// Fuzzy set and mono presheaf files share this shape.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FuzzySetDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locale: Option<LocaleDoc>,
    pub elements: Vec<ElementDoc>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StepPresheafDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locale: Option<LocaleDoc>,
    pub cuts: Vec<NumberDoc>,
    pub levels: Vec<Vec<String>>,
    pub restrictions: Vec<BTreeMap<String, String>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArrowDoc {
    pub from: String,
    pub to: String,
    pub map: BTreeMap<String, String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DiagramDoc {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub locale: Option<LocaleDoc>,
    #[serde(default)]
    pub nodes: BTreeMap<String, FuzzySetDoc>,
    #[serde(default)]
    pub arrows: Vec<ArrowDoc>,
}

fn from_json<T: for<'de> Deserialize<'de>>(text: &str, what: &str) -> Result<T> {
    serde_json::from_str(text).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn to_json<T: Serialize>(value: &T) -> String {
    let mut s = serde_json::to_string_pretty(value).expect("documents serialize");
    s.push('\n');
    s
}

/// Picks the file's own locale, falling back to `fallback`. Both present
/// and different is an error.
fn resolve_locale(own: Option<&LocaleDoc>, fallback: Option<&IntervalLocale>, what: &str) -> Result<IntervalLocale> {
    match (own, fallback) {
        (Some(doc), Some(f)) => {
            let l = doc.to_locale()?;
            if &l != f {
                return Err(Error::LocaleMismatch(format!("{what} lives over {l}, expected {f}")));
            }
            Ok(l)
        }
        (Some(doc), None) => doc.to_locale(),
        (None, Some(f)) => Ok(f.clone()),
        (None, None) => Err(Error::Parse(format!("{what}: no locale given"))),
    }
}

/// Parses `--locale` text: a JSON descriptor, or `[lo,hi]` optionally
/// followed by `^op`.
pub fn parse_locale(text: &str) -> Result<IntervalLocale> {
    let t = text.trim();
    if t.starts_with('{') {
        return from_json::<LocaleDoc>(t, "locale").and_then(|d| d.to_locale());
    }
    let (body, orientation) = match t.strip_suffix("^op") {
        Some(b) => (b.trim(), Orientation::Opposite),
        None => (t, Orientation::Standard),
    };
    let inner = body
        .strip_prefix('[')
        .and_then(|b| b.strip_suffix(']'))
        .ok_or_else(|| Error::Parse(format!("locale {text:?}: expected [lo,hi] or [lo,hi]^op")))?;
    let (lo, hi) = inner
        .split_once(',')
        .ok_or_else(|| Error::Parse(format!("locale {text:?}: expected two endpoints")))?;
    IntervalLocale::new(parse_rational(lo)?, parse_rational(hi)?, orientation)
}

pub fn write_locale(locale: &IntervalLocale) -> String {
    to_json(&LocaleDoc::from(locale))
}

fn fuzzy_from_doc(doc: &FuzzySetDoc, fallback: Option<&IntervalLocale>, what: &str) -> Result<FuzzySet> {
    let locale = resolve_locale(doc.locale.as_ref(), fallback, what)?;
    let grades = doc
        .elements
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let g = e.grade.parse().map_err(|err| Error::Parse(format!("{what}: elements[{k}].grade: {err}")))?;
            Ok((e.id.clone(), g))
        })
        .collect::<Result<Vec<_>>>()?;
    FuzzySet::new(locale, grades).map_err(|e| Error::Parse(format!("{what}: {e}")))
}

fn fuzzy_doc(set: &FuzzySet, with_locale: bool) -> FuzzySetDoc {
    FuzzySetDoc {
        locale: with_locale.then(|| set.locale().into()),
        elements: set.iter().map(|(id, g)| ElementDoc { id: id.clone(), grade: g.into(), attained: None }).collect(),
    }
}

pub fn read_fuzzy_set(text: &str, fallback: Option<&IntervalLocale>) -> Result<FuzzySet> {
    let doc: FuzzySetDoc = from_json(text, "fuzzy set")?;
    if let Some(k) = doc.elements.iter().position(|e| e.attained.is_some()) {
        return Err(Error::Parse(format!(
            "fuzzy set: elements[{k}].attained belongs to presheaf files, not fuzzy sets"
        )));
    }
    fuzzy_from_doc(&doc, fallback, "fuzzy set")
}

pub fn write_fuzzy_set(set: &FuzzySet) -> String {
    to_json(&fuzzy_doc(set, true))
}

/// Reads a mono presheaf. A missing `attained` means `true`, so every fuzzy
/// set file is also the file of its level-cut sheaf.
pub fn read_mono_presheaf(text: &str, fallback: Option<&IntervalLocale>) -> Result<MonoPresheaf> {
    let doc: FuzzySetDoc = from_json(text, "presheaf")?;
    let locale = resolve_locale(doc.locale.as_ref(), fallback, "presheaf")?;
    let entries = doc
        .elements
        .iter()
        .enumerate()
        .map(|(k, e)| {
            let g = e.grade.parse().map_err(|err| Error::Parse(format!("presheaf: elements[{k}].grade: {err}")))?;
            Ok((e.id.clone(), g, e.attained.unwrap_or(true)))
        })
        .collect::<Result<Vec<_>>>()?;
    MonoPresheaf::new(locale, entries).map_err(|e| Error::Parse(format!("presheaf: {e}")))
}

pub fn write_mono_presheaf(p: &MonoPresheaf) -> String {
    let doc = FuzzySetDoc {
        locale: Some(p.locale().into()),
        elements: p
            .entries()
            .iter()
            .map(|(id, e)| ElementDoc { id: id.clone(), grade: (&e.grade).into(), attained: Some(e.attained) })
            .collect(),
    };
    to_json(&doc)
}

pub fn read_step_presheaf(text: &str, fallback: Option<&IntervalLocale>) -> Result<StepPresheaf> {
    let doc: StepPresheafDoc = from_json(text, "step presheaf")?;
    let locale = resolve_locale(doc.locale.as_ref(), fallback, "step presheaf")?;
    let cuts = doc
        .cuts
        .iter()
        .enumerate()
        .map(|(k, c)| c.parse().map_err(|e| Error::Parse(format!("step presheaf: cuts[{k}]: {e}"))))
        .collect::<Result<Vec<_>>>()?;
    let levels = doc.levels.iter().map(|l| l.iter().cloned().collect::<BTreeSet<_>>()).collect();
    StepPresheaf::new(locale, cuts, levels, doc.restrictions.clone())
        .map_err(|e| Error::Parse(format!("step presheaf: {e}")))
}

pub fn write_step_presheaf(p: &StepPresheaf) -> String {
    let doc = StepPresheafDoc {
        locale: Some(p.locale().into()),
        cuts: p.cuts().iter().map(Into::into).collect(),
        levels: p.levels().iter().map(|l| l.iter().cloned().collect()).collect(),
        restrictions: p.restrictions().to_vec(),
    };
    to_json(&doc)
}

/// Reads a diagram. Nodes may omit their locale when the diagram (or
/// `fallback`) supplies one; nodes over different locales are rejected.
pub fn read_diagram(text: &str, fallback: Option<&IntervalLocale>) -> Result<Diagram> {
    let doc: DiagramDoc = from_json(text, "diagram")?;
    let mut locale = match (&doc.locale, fallback) {
        (Some(d), f) => Some(resolve_locale(Some(d), f, "diagram")?),
        (None, f) => f.cloned(),
    };
    let mut nodes = BTreeMap::new();
    for (label, node) in &doc.nodes {
        let what = format!("diagram: node {label:?}");
        let set = fuzzy_from_doc(node, locale.as_ref(), &what)?;
        locale.get_or_insert_with(|| set.locale().clone());
        nodes.insert(label.clone(), set);
    }
    let locale = locale.ok_or_else(|| Error::Parse("diagram: no locale given".into()))?;
    let arrows = doc
        .arrows
        .iter()
        .map(|a| Arrow { from: a.from.clone(), to: a.to.clone(), map: a.map.clone() })
        .collect();
    Diagram::new(locale, nodes, arrows)
}

pub fn write_diagram(d: &Diagram) -> String {
    let doc = DiagramDoc {
        locale: Some(d.locale().into()),
        nodes: d.nodes().iter().map(|(k, v)| (k.clone(), fuzzy_doc(v, false))).collect(),
        arrows: d
            .arrows()
            .iter()
            .map(|a| ArrowDoc { from: a.from.clone(), to: a.to.clone(), map: a.map.clone() })
            .collect(),
    };
    to_json(&doc)
}

/// A limit or colimit: the apex as a fuzzy set plus one map per leg.
pub fn cone_json(cone: &Cone) -> Value {
    let mut apex = serde_json::to_value(fuzzy_doc(&cone.apex, true)).expect("documents serialize");
    let legs: serde_json::Map<String, Value> =
        cone.legs.iter().map(|(k, m)| (k.clone(), json!(m.map()))).collect();
    apex["legs"] = Value::Object(legs);
    apex
}

/// Point clouds: a JSON array of arrays, or CSV with one point per row.
/// Blank lines and `#` comments are skipped in CSV.
pub fn read_points(text: &str) -> Result<PointCloud> {
    if text.trim_start().starts_with('[') {
        let rows: Vec<Vec<NumberDoc>> = from_json(text, "point cloud")?;
        let pts = rows
            .iter()
            .enumerate()
            .map(|(i, row)| {
                row.iter()
                    .enumerate()
                    .map(|(j, x)| x.parse().map_err(|e| Error::Parse(format!("point cloud: [{i}][{j}]: {e}"))))
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        return PointCloud::new(pts);
    }
    let mut pts = Vec::new();
    for (n, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let row = line
            .split(',')
            .enumerate()
            .map(|(j, x)| {
                parse_rational(x).map_err(|e| Error::Parse(format!("point cloud: line {}, field {}: {e}", n + 1, j + 1)))
            })
            .collect::<Result<Vec<_>>>()?;
        pts.push(row);
    }
    PointCloud::new(pts)
}

pub fn write_points(cloud: &PointCloud) -> String {
    let rows: Vec<Vec<NumberDoc>> = cloud.points().iter().map(|p| p.iter().map(Into::into).collect()).collect();
    to_json(&rows)
}

fn levels_json(levels: &[Vec<Simplex>], grade: impl Fn(&Simplex) -> Rational) -> Value {
    Value::Array(
        levels
            .iter()
            .enumerate()
            .map(|(k, simplices)| {
                let list: Vec<Value> = simplices
                    .iter()
                    .map(|s| json!({ "vertices": s, "grade": format_decimal(&grade(s)) }))
                    .collect();
                json!({ "k": k, "simplices": list })
            })
            .collect(),
    )
}

/// VR output. `levels` defaults to the whole system; `R` and grades are
/// locale values (squared distances in squared mode).
pub fn vr_json(v: &VrSystem, levels: Option<&[Vec<Simplex>]>) -> Value {
    let all: Vec<Vec<Simplex>>;
    let levels = match levels {
        Some(l) => l,
        None => {
            all = v.complex().levels().iter().map(|l| l.keys().cloned().collect()).collect();
            &all
        }
    };
    json!({
        "R": format_decimal(v.r_locale()),
        "R_defaulted": v.r_defaulted(),
        "metric": v.metric().name(),
        "dim_cap": v.dim_cap(),
        "levels": levels_json(levels, |s| v.grade(s).expect("simplex of the system").clone()),
    })
}

/// Simplicial fuzzy set in the VR output shape, with a locale descriptor.
pub fn write_simplicial(z: &SimplicialFuzzySet) -> String {
    let levels: Vec<Vec<Simplex>> = z.levels().iter().map(|l| l.keys().cloned().collect()).collect();
    let value = json!({
        "locale": LocaleDoc::from(z.locale()),
        "dim_cap": z.levels().len().saturating_sub(1),
        "levels": levels_json(&levels, |s| z.grade(s).expect("stored simplex").clone()),
    });
    to_json(&value)
}

#[derive(Deserialize)]
struct SimplexDoc {
    vertices: Simplex,
    grade: NumberDoc,
}

#[derive(Deserialize)]
struct LevelDoc {
    k: usize,
    simplices: Vec<SimplexDoc>,
}

#[derive(Deserialize)]
struct SimplicialDoc {
    #[serde(default)]
    locale: Option<LocaleDoc>,
    #[serde(rename = "R", default)]
    r: Option<NumberDoc>,
    levels: Vec<LevelDoc>,
}

/// Reads a simplicial fuzzy set written by [`write_simplicial`] or
/// [`vr_json`]; VR output is read over `[0, R]^op`.
pub fn read_simplicial(text: &str) -> Result<SimplicialFuzzySet> {
    let doc: SimplicialDoc = from_json(text, "simplicial set")?;
    let locale = match (&doc.locale, &doc.r) {
        (Some(l), _) => l.to_locale()?,
        (None, Some(r)) => IntervalLocale::opposite_from_zero(r.parse()?)?,
        (None, None) => return Err(Error::Parse("simplicial set: needs \"locale\" or \"R\"".into())),
    };
    let mut levels = Vec::with_capacity(doc.levels.len());
    for (pos, level) in doc.levels.iter().enumerate() {
        if level.k != pos {
            return Err(Error::Parse(format!("simplicial set: levels[{pos}].k is {}", level.k)));
        }
        let mut map = BTreeMap::new();
        for (j, s) in level.simplices.iter().enumerate() {
            if s.vertices.len() != pos + 1 {
                return Err(Error::Parse(format!("simplicial set: levels[{pos}].simplices[{j}] has the wrong size")));
            }
            map.insert(s.vertices.clone(), s.grade.parse()?);
        }
        levels.push(map);
    }
    SimplicialFuzzySet::new(locale, levels)
}

pub fn point_text(p: &StalkPoint) -> String {
    match p {
        StalkPoint::Bottom => "bottom".into(),
        StalkPoint::Point(x) => format_decimal(x),
    }
}

/// Parses `bottom` or a number.
pub fn parse_stalk_point(text: &str) -> Result<StalkPoint> {
    match text.trim() {
        "bottom" => Ok(StalkPoint::Bottom),
        t => parse_rational(t).map(StalkPoint::Point),
    }
}

pub fn verdict_json(v: &Verdict) -> Value {
    let witness = match &v.witness {
        Some(w) => json!({ "point": point_text(&w.point), "element": w.element, "reason": w.reason }),
        None => Value::Null,
    };
    let mut out = json!({ "mode": v.mode, "ok": v.ok, "witness": witness });
    if let Some(s) = v.sectionwise {
        out["sectionwise"] = json!(s);
    }
    out
}

pub fn render(value: &Value) -> String {
    to_json(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, ratio};
    use crate::vr::{vr_build, VrOptions};

    #[test]
    fn fuzzy_set_file() {
        let text = r#"{ "locale": { "lo": "0", "hi": "1", "orientation": "standard" },
                        "elements": [ { "id": "a", "grade": "3/10" }, { "id": "b", "grade": 0.5 } ] }"#;
        let set = read_fuzzy_set(text, None).unwrap();
        assert_eq!(set.grade("a"), Some(&ratio(3, 10)));
        assert_eq!(set.grade("b"), Some(&ratio(1, 2)));
        assert_eq!(read_fuzzy_set(&write_fuzzy_set(&set), None).unwrap(), set);
        assert!(write_fuzzy_set(&set).contains("\"0.3\""));
    }

    #[test]
    fn locale_fallback_and_mismatch() {
        let text = r#"{ "elements": [ { "id": "a", "grade": "2" } ] }"#;
        assert!(read_fuzzy_set(text, None).is_err());
        let l = parse_locale("[0,5]^op").unwrap();
        assert_eq!(read_fuzzy_set(text, Some(&l)).unwrap().locale(), &l);
        let own = r#"{ "locale": {"lo":"0","hi":"1"}, "elements": [] }"#;
        assert!(matches!(read_fuzzy_set(own, Some(&l)), Err(Error::LocaleMismatch(_))));
    }

    #[test]
    fn parse_errors_name_the_field() {
        let text = r#"{ "locale": {"lo":"0","hi":"1"}, "elements": [ { "id": "a", "grade": "x" } ] }"#;
        let err = read_fuzzy_set(text, None).unwrap_err().to_string();
        assert!(err.contains("elements[0].grade"), "{err}");
        let err = read_points("0,0\n1,zz\n").unwrap_err().to_string();
        assert!(err.contains("line 2, field 2"), "{err}");
        assert!(read_fuzzy_set(r#"{ "elements": [], "extra": 1 }"#, None).is_err());
    }

    #[test]
    fn inline_locales() {
        assert_eq!(parse_locale("[0,1]").unwrap(), IntervalLocale::unit());
        assert_eq!(
            parse_locale("[0, 5/2]^op").unwrap(),
            IntervalLocale::opposite_from_zero(ratio(5, 2)).unwrap()
        );
        let l = parse_locale(r#"{"lo":"0","hi":"3","orientation":"opposite"}"#).unwrap();
        assert_eq!(parse_locale(&write_locale(&l)).unwrap(), l);
        assert!(parse_locale("0,1").is_err());
    }

    #[test]
    fn mixed_locales_in_a_diagram() {
        let text = r#"{ "nodes": {
            "A": { "locale": {"lo":"0","hi":"1"}, "elements": [] },
            "B": { "locale": {"lo":"0","hi":"2"}, "elements": [] } }, "arrows": [] }"#;
        assert!(matches!(read_diagram(text, None), Err(Error::LocaleMismatch(_))));
    }

    #[test]
    fn points_csv_and_json() {
        let csv = read_points("# 3-4-5\n0,0\n3,0\n\n0,4\n").unwrap();
        let json = read_points("[[0,0],[3,0],[\"0\",\"4\"]]").unwrap();
        assert_eq!(csv, json);
        assert_eq!(read_points(&write_points(&csv)).unwrap(), csv);
    }

    #[test]
    fn vr_output_shape_and_round_trip() {
        let cloud = read_points("0,0\n3,0\n0,4\n").unwrap();
        let v = vr_build(&cloud, &VrOptions::default()).unwrap();
        let out = vr_json(&v, None);
        assert_eq!(out["dim_cap"], 2);
        assert_eq!(out["levels"][1]["simplices"][0], json!({ "vertices": [0, 1], "grade": "9" }));
        let back = read_simplicial(&render(&out)).unwrap();
        assert_eq!(&back, v.complex());
        assert_eq!(read_simplicial(&write_simplicial(v.complex())).unwrap(), *v.complex());
        assert_eq!(v.grade(&[0, 2]), Some(&int(16)));
    }

    #[test]
    fn stalk_points() {
        assert_eq!(parse_stalk_point("bottom").unwrap(), StalkPoint::Bottom);
        assert_eq!(parse_stalk_point("0.4").unwrap(), StalkPoint::Point(ratio(2, 5)));
        assert_eq!(point_text(&StalkPoint::Point(ratio(2, 5))), "0.4");
    }
}
