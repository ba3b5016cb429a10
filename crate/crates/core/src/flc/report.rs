//! JSON verdicts shared by the checkers and the CLI.

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use super::{SfdpVerdict, UdpVerdict};
use crate::exact::ExactLength;
use crate::measure::json::LengthReport;
use crate::measure::MeasureWindow;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub property: String,
    pub window: [LengthReport; 2],
    pub verdict: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub counterexample: Option<Value>,
}

impl CheckReport {
    pub fn new(property: &str, w: &MeasureWindow, holds: bool) -> Self {
        CheckReport {
            property: property.to_string(),
            window: [w.origin().into(), (&w.end()).into()],
            verdict: if holds { "holds on window" } else { "fails on window" }.to_string(),
            witness: None,
            counterexample: None,
        }
    }

    pub fn holds(&self) -> bool {
        self.verdict == "holds on window"
    }

    pub fn with_witness(mut self, v: Value) -> Self {
        self.witness = Some(v);
        self
    }

    pub fn with_counterexample(mut self, v: Value) -> Self {
        self.counterexample = Some(v);
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }
}

fn len(l: &ExactLength) -> Value {
    serde_json::to_value(LengthReport::from(l)).expect("lengths always serialize")
}

pub fn sfdp_report(w: &MeasureWindow, l: &ExactLength, v: &SfdpVerdict) -> CheckReport {
    let r = CheckReport::new("sfdp", w, v.holds());
    match v {
        SfdpVerdict::Holds { tested, classes } => {
            r.with_witness(json!({ "l": len(l), "tested": tested, "classes": classes }))
        }
        SfdpVerdict::Violated(c) => r.with_counterexample(json!({
            "l": len(l),
            "y": len(&c.y),
            "z": len(&c.z),
            "collar": c.collar,
            "next_at_y": c.next_at_y,
            "next_at_z": c.next_at_z,
        })),
    }
}

pub fn udp_report(w: &MeasureWindow, r: &ExactLength, v: &UdpVerdict) -> CheckReport {
    let rep = CheckReport::new("udp", w, v.holds);
    match &v.witness {
        None => rep.with_witness(json!({ "R": len(r), "positions": v.positions, "tested": v.tested })),
        Some(c) => rep.with_counterexample(json!({
            "R": len(r),
            "y": len(&c.y),
            "z": len(&c.z),
            "piece_at_y": c.piece_at_y,
            "piece_at_z": c.piece_at_z,
        })),
    }
}

pub fn length_value(l: &ExactLength) -> Value {
    len(l)
}
