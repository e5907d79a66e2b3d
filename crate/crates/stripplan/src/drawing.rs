//! The drawing data type shared by the synthesis code and the validator,
//! with its JSON file format.

use crate::geom::{format_rat, parse_rat, Point};
use crate::plane::{EdgeId, VertexId};
use std::collections::BTreeMap;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StripDrawing {
    pub k: u32,
    pub points: BTreeMap<VertexId, Point>,
    /// Per-edge y-monotone polylines, oriented from the edge's first
    /// endpoint to its second.
    pub polylines: BTreeMap<EdgeId, Vec<Point>>,
}

impl StripDrawing {
    pub fn new(k: u32) -> Self {
        StripDrawing { k, points: BTreeMap::new(), polylines: BTreeMap::new() }
    }

    pub fn to_json(&self) -> Vec<u8> {
        let vertices: Vec<serde_json::Value> = self
            .points
            .iter()
            .map(|(v, p)| {
                serde_json::json!({
                    "id": v.0,
                    "x": format_rat(&p.x),
                    "y": format_rat(&p.y),
                })
            })
            .collect();
        let edges: Vec<serde_json::Value> = self
            .polylines
            .iter()
            .map(|(e, pts)| {
                let points: Vec<serde_json::Value> = pts
                    .iter()
                    .map(|p| {
                        serde_json::json!([format_rat(&p.x), format_rat(&p.y)])
                    })
                    .collect();
                serde_json::json!({ "id": e.0, "points": points })
            })
            .collect();
        let doc = serde_json::json!({
            "k": self.k,
            "vertices": vertices,
            "edges": edges,
        });
        let mut out = serde_json::to_vec_pretty(&doc).expect("serializable");
        out.push(b'\n');
        out
    }

    pub fn from_json(bytes: &[u8]) -> Result<Self, String> {
        let doc: serde_json::Value =
            serde_json::from_slice(bytes).map_err(|e| e.to_string())?;
        let k = doc["k"].as_u64().ok_or("missing k")? as u32;
        let mut drawing = StripDrawing::new(k);
        for v in doc["vertices"].as_array().ok_or("missing vertices")? {
            let id = v["id"].as_u64().ok_or("vertex id")? as u32;
            let x = parse_rat(v["x"].as_str().ok_or("vertex x")?)
                .ok_or("bad rational x")?;
            let y = parse_rat(v["y"].as_str().ok_or("vertex y")?)
                .ok_or("bad rational y")?;
            drawing.points.insert(VertexId(id), Point::new(x, y));
        }
        for e in doc["edges"].as_array().ok_or("missing edges")? {
            let id = e["id"].as_u64().ok_or("edge id")? as u32;
            let mut pts = Vec::new();
            for p in e["points"].as_array().ok_or("edge points")? {
                let arr = p.as_array().ok_or("point pair")?;
                let x = parse_rat(arr[0].as_str().ok_or("point x")?)
                    .ok_or("bad rational")?;
                let y = parse_rat(arr[1].as_str().ok_or("point y")?)
                    .ok_or("bad rational")?;
                pts.push(Point::new(x, y));
            }
            drawing.polylines.insert(EdgeId(id), pts);
        }
        Ok(drawing)
    }
}

#[cfg(test)]
mod test {
    use super::*;
    use crate::geom::{rat, ratio};

    #[test]
    fn json_round_trip() {
        let mut d = StripDrawing::new(2);
        d.points.insert(VertexId(0), Point::new(rat(0), ratio(3, 2)));
        d.points.insert(VertexId(1), Point::new(ratio(-7, 3), ratio(5, 2)));
        d.polylines.insert(
            EdgeId(0),
            vec![
                Point::new(rat(0), ratio(3, 2)),
                Point::new(ratio(-7, 3), ratio(5, 2)),
            ],
        );
        let bytes = d.to_json();
        let back = StripDrawing::from_json(&bytes).unwrap();
        assert_eq!(back, d);
        assert_eq!(back.to_json(), bytes);
    }
}
