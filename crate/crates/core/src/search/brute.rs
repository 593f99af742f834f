use crate::constructions::{GoodStructure, Host};
use crate::polygon::IncidencePolygon;

/// Every t-good structure (the full one included) by trying each point subset. Lines meeting the
/// subset in other than `t` points are forced in; the remaining lines are chosen by a plain
/// recursion that only rejects choices giving an outside point more than `t` lines.
/// `None` above 24 points.
pub fn brute_force_tgood(polygon: &IncidencePolygon, t: u32) -> Option<Vec<GoodStructure>> {
    let np = polygon.num_points();
    let nl = polygon.num_lines();
    if np > 24 {
        return None;
    }
    let t = t as usize;
    let host = Host::of(polygon);
    let mut out = Vec::new();
    for mask in 0u32..(1u32 << np) {
        let inside = |p: usize| mask >> p & 1 == 1;
        let mut lines_in = vec![false; nl];
        let mut free = Vec::new();
        for (l, chosen) in lines_in.iter_mut().enumerate() {
            let k = polygon.points_on(l).iter().filter(|&&p| inside(p as usize)).count();
            if k == t {
                free.push(l);
            } else {
                *chosen = true;
            }
        }
        let mut load = vec![0usize; np];
        for (l, _) in lines_in.iter().enumerate().filter(|(_, &c)| c) {
            for &p in polygon.points_on(l) {
                load[p as usize] += 1;
            }
        }
        if (0..np).any(|p| !inside(p) && load[p] > t) {
            continue;
        }
        choose(polygon, &free, 0, &mut lines_in, &mut load, &inside, t, &mut |lines_in| {
            let points = (0..np).filter(|&p| inside(p)).collect();
            let lines = (0..nl).filter(|&l| lines_in[l]).collect();
            out.push(GoodStructure::new(host, t as u32, points, lines));
        });
    }
    out.sort_by(|a, b| (a.size(), &a.points, &a.lines).cmp(&(b.size(), &b.points, &b.lines)));
    Some(out)
}

#[allow(clippy::too_many_arguments)]
fn choose(
    polygon: &IncidencePolygon,
    free: &[usize],
    i: usize,
    lines_in: &mut [bool],
    load: &mut [usize],
    inside: &dyn Fn(usize) -> bool,
    t: usize,
    emit: &mut dyn FnMut(&[bool]),
) {
    if i == free.len() {
        if (0..load.len()).all(|p| inside(p) || load[p] == t) {
            emit(lines_in);
        }
        return;
    }
    let l = free[i];
    choose(polygon, free, i + 1, lines_in, load, inside, t, emit);
    let pts = polygon.points_on(l);
    if pts.iter().all(|&p| inside(p as usize) || load[p as usize] < t) {
        lines_in[l] = true;
        for &p in pts {
            load[p as usize] += 1;
        }
        choose(polygon, free, i + 1, lines_in, load, inside, t, emit);
        for &p in pts {
            load[p as usize] -= 1;
        }
        lines_in[l] = false;
    }
}
