use std::fmt::Write;

use crate::floorplan::RoomLabel;

use super::{VectorFloorplan, VectorizeError};

fn fill(t: RoomLabel) -> &'static str {
    match t {
        RoomLabel::Living => "#f4e3c1",
        RoomLabel::Master => "#c9dff2",
        RoomLabel::Second => "#d8e8c4",
        RoomLabel::Study => "#e6d4ef",
        RoomLabel::Bathroom => "#bfe8e4",
        RoomLabel::Kitchen => "#f6cfc4",
        RoomLabel::Balcony => "#e9ecd0",
        _ => "#dddddd",
    }
}

/// Standalone SVG drawing: one `path.room` per room, wall centerlines as
/// `line.wall`, and a quarter-circle swing for each door.
pub fn export_svg(vf: &VectorFloorplan) -> String {
    let mut s = String::new();
    let _ = writeln!(
        s,
        r##"<svg xmlns="http://www.w3.org/2000/svg" width="{w}" height="{h}" viewBox="0 0 {w} {h}">"##,
        w = vf.width,
        h = vf.height
    );
    for r in &vf.rooms {
        let mut d = String::new();
        for (i, p) in r.polygon.iter().enumerate() {
            let _ = write!(d, "{}{} {} ", if i == 0 { 'M' } else { 'L' }, p.x, p.y);
        }
        d.push('Z');
        let _ = writeln!(
            s,
            r##"  <path class="room {}" d="{d}" fill="{}" stroke="none"/>"##,
            r.room_type.name(),
            fill(r.room_type)
        );
    }
    for w in &vf.walls {
        let _ = writeln!(
            s,
            r##"  <line class="wall" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#222" stroke-width="3"/>"##,
            w.a.x, w.a.y, w.b.x, w.b.y
        );
    }
    for d in &vf.doors {
        let (a, b) = (d.segment.a, d.segment.b);
        let r = d.segment.len();
        // leaf drawn perpendicular from `a`, swinging to `b`
        let tip = if d.segment.is_horizontal() {
            (a.x, a.y + r)
        } else {
            (a.x + r, a.y)
        };
        let _ = writeln!(
            s,
            r##"  <path class="door" d="M{} {} L{} {} A{r} {r} 0 0 0 {} {}" fill="none" stroke="#555"/>"##,
            a.x, a.y, tip.0, tip.1, b.x, b.y
        );
    }
    if let Some(me) = vf.main_entrance {
        let _ = writeln!(
            s,
            r##"  <line class="entrance" x1="{}" y1="{}" x2="{}" y2="{}" stroke="#d33" stroke-width="4"/>"##,
            me.a.x, me.a.y, me.b.x, me.b.y
        );
    }
    s.push_str("</svg>\n");
    s
}

pub fn export_json(vf: &VectorFloorplan) -> String {
    serde_json::to_string_pretty(vf).expect("vector floorplan serializes")
}

pub fn import_json(json: &str) -> Result<VectorFloorplan, VectorizeError> {
    let vf: VectorFloorplan =
        serde_json::from_str(json).map_err(|e| VectorizeError::Format(e.to_string()))?;
    if let Some(d) = vf.doors.iter().find(|d| d.room_index >= vf.rooms.len()) {
        return Err(VectorizeError::Format(format!(
            "door refers to missing room {}",
            d.room_index
        )));
    }
    Ok(vf)
}
