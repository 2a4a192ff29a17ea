//! Schedule documents.
//!
//! ```json
//! {
//!   "scheme": "three",
//!   "shape": "triangle",
//!   "lambda": 1.0e0,
//!   "t_f": 6.2831853071795862e0,
//!   "segments": [
//!     {"axis": "z", "shape": "triangle", "t0": 0.0e0, "t1": 2.0e0, "magnitude": 1.0e0, "sign": 1},
//!     {"axis": {"tilted": 0.5}, ...}
//!   ]
//! }
//! ```
//!
//! Numbers are written with 17 significant digits so that a write/read cycle
//! reproduces every value bit for bit.

use serde_json::Value;

use crate::error::{Error, Result};
use crate::pulse::{PulseShape, PulseWindow};
use crate::scalar::Real;
use crate::schedule::{Axis, PulseSegment, Schedule, Scheme, Sign};

fn num<T: Real>(x: T) -> String {
    format!("{:.16e}", x.as_f64())
}

fn axis_json<T: Real>(axis: &Axis<T>) -> String {
    match axis {
        Axis::Z => "\"z\"".into(),
        Axis::Y => "\"y\"".into(),
        Axis::Tilted(theta) => format!("{{\"tilted\": {}}}", num(*theta)),
    }
}

pub fn schedule_to_json<T: Real>(sched: &Schedule<T>) -> String {
    let mut out = String::from("{\n");
    out += &format!("  \"scheme\": \"{}\",\n", sched.scheme());
    out += &format!("  \"shape\": \"{}\",\n", sched.shape());
    out += &format!("  \"lambda\": {},\n", num(sched.lambda()));
    out += &format!("  \"t_f\": {},\n", num(sched.t_f()));
    out += "  \"segments\": [";
    for (k, seg) in sched.segments().iter().enumerate() {
        out += if k == 0 { "\n" } else { ",\n" };
        out += &format!(
            "    {{\"axis\": {}, \"shape\": \"{}\", \"t0\": {}, \"t1\": {}, \"magnitude\": {}, \"sign\": {}}}",
            axis_json(&seg.axis),
            seg.shape,
            num(seg.window.t0()),
            num(seg.window.t1()),
            num(seg.window.magnitude()),
            seg.sign.as_i8()
        );
    }
    if !sched.segments().is_empty() {
        out += "\n  ";
    }
    out += "]\n}\n";
    out
}

fn field<'a>(v: &'a Value, key: &str) -> Result<&'a Value> {
    v.get(key).ok_or_else(|| Error::Document(format!("missing field '{key}'")))
}

fn number<T: Real>(v: &Value, key: &str) -> Result<T> {
    field(v, key)?
        .as_f64()
        .map(T::lit)
        .ok_or_else(|| Error::Document(format!("field '{key}' must be a number")))
}

fn text<'a>(v: &'a Value, key: &str) -> Result<&'a str> {
    field(v, key)?.as_str().ok_or_else(|| Error::Document(format!("field '{key}' must be a string")))
}

fn parse_axis<T: Real>(v: &Value) -> Result<Axis<T>> {
    match v {
        Value::String(s) if s == "z" => Ok(Axis::Z),
        Value::String(s) if s == "y" => Ok(Axis::Y),
        Value::Object(_) => Ok(Axis::Tilted(number(v, "tilted")?)),
        other => Err(Error::Document(format!("unknown axis {other}"))),
    }
}

fn parse_segment<T: Real>(v: &Value) -> Result<PulseSegment<T>> {
    let shape: PulseShape = text(v, "shape")?.parse()?;
    let sign = field(v, "sign")?
        .as_i64()
        .and_then(|s| i8::try_from(s).ok())
        .and_then(Sign::from_i8)
        .ok_or_else(|| Error::Document("field 'sign' must be 1 or -1".into()))?;
    Ok(PulseSegment {
        axis: parse_axis(field(v, "axis")?)?,
        shape,
        window: PulseWindow::new(number(v, "t0")?, number(v, "t1")?, number(v, "magnitude")?)?,
        sign,
    })
}

/// Parses and re-validates a schedule document.
pub fn schedule_from_json<T: Real>(doc: &str) -> Result<Schedule<T>> {
    let v: Value = serde_json::from_str(doc)?;
    let scheme: Scheme = text(&v, "scheme")?.parse()?;
    let shape: PulseShape = text(&v, "shape")?.parse()?;
    let segments = field(&v, "segments")?
        .as_array()
        .ok_or_else(|| Error::Document("field 'segments' must be an array".into()))?
        .iter()
        .map(parse_segment)
        .collect::<Result<Vec<_>>>()?;
    Schedule::new(scheme, shape, number(&v, "lambda")?, segments, number(&v, "t_f")?)
}

#[cfg(test)]
mod tests {
    use proptest::prelude::*;

    use super::*;
    use crate::bloch::BlochAngles;
    use crate::one_rotation::plan_one_rotation;
    use crate::three_rotation::plan_three_rotation;

    #[test]
    fn empty_schedule_round_trips() {
        let s = Schedule::<f64>::empty(Scheme::OneRotation, PulseShape::Quadratic, 2.0);
        assert_eq!(schedule_from_json::<f64>(&schedule_to_json(&s)).unwrap(), s);
    }

    #[test]
    fn rejects_malformed_documents() {
        assert!(matches!(schedule_from_json::<f64>("not json"), Err(Error::Document(_))));
        assert!(matches!(schedule_from_json::<f64>("{}"), Err(Error::Document(_))));
        let bad_sign = r#"{"scheme":"three","shape":"bang","lambda":1,"t_f":1,
            "segments":[{"axis":"z","shape":"bang","t0":0,"t1":1,"magnitude":1,"sign":0}]}"#;
        assert!(matches!(schedule_from_json::<f64>(bad_sign), Err(Error::Document(_))));
        let bad_tf = r#"{"scheme":"three","shape":"bang","lambda":1,"t_f":3,
            "segments":[{"axis":"z","shape":"bang","t0":0,"t1":1,"magnitude":1,"sign":-1}]}"#;
        assert!(matches!(schedule_from_json::<f64>(bad_tf), Err(Error::InvalidSchedule(_))));
    }

    #[test]
    fn parses_hand_written_document() {
        let doc = r#"{"scheme":"one","shape":"bang","lambda":1,"t_f":2,
            "segments":[{"axis":{"tilted":0.5},"shape":"bang","t0":0,"t1":2,"magnitude":0.25,"sign":-1}]}"#;
        let s = schedule_from_json::<f64>(doc).unwrap();
        assert_eq!(s.segments()[0].axis, Axis::Tilted(0.5));
        assert_eq!(s.segments()[0].sign, Sign::Minus);
    }

    proptest! {
        #[test]
        fn planned_schedules_round_trip(
            t0 in 0.0..std::f64::consts::PI, p0 in 0.0..std::f64::consts::TAU,
            ts in 0.0..std::f64::consts::PI, ps in 0.0..std::f64::consts::TAU,
            lambda in 1e-3..1e3f64, shape in prop::sample::select(PulseShape::ALL.to_vec()),
            one in any::<bool>(),
        ) {
            let a = BlochAngles::new(t0, p0).unwrap();
            let b = BlochAngles::new(ts, ps).unwrap();
            let (s, _) = if one {
                plan_one_rotation(&a, &b, shape, lambda, None).unwrap()
            } else {
                plan_three_rotation(&a, &b, shape, lambda, None).unwrap()
            };
            let back = schedule_from_json::<f64>(&schedule_to_json(&s)).unwrap();
            prop_assert_eq!(back, s);
        }
    }
}
