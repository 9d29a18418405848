//! Power tables: scenario inputs echoed, then the rejection rates.

use super::format;
use super::scenarios::{RhoSpec, ScenarioRecord};
use crate::simulation::PowerRow;

fn letter(e: usize) -> char {
    (b'a' + e as u8) as char
}

pub fn header(records: &[ScenarioRecord]) -> Vec<String> {
    let sc = &records[0].scenario;
    let (k, j, h) = (sc.k(), sc.n_endpoints(), sc.n_hypotheses());
    let mut cols: Vec<String> = (1..=k).map(|g| format!("n{g}")).collect();
    for e in 0..j {
        cols.extend((1..=k).map(|g| format!("m{}{g}", letter(e))));
    }
    cols.extend((0..j).map(|e| format!("s{}", letter(e))));
    if common_rho(records) {
        cols.push("rho".into());
    } else {
        cols.extend((1..=j * (j - 1) / 2).map(|i| format!("rho{i}")));
    }
    cols.push("IUT".into());
    cols.push("UIT".into());
    cols.extend((1..=h).map(|i| format!("m{i}")));
    cols.extend((1..=h).map(|i| format!("e{i}")));
    cols.push("aiaUIT".into());
    cols.push("RR".into());
    cols
}

fn common_rho(records: &[ScenarioRecord]) -> bool {
    records.iter().all(|r| matches!(r.rho, RhoSpec::Common(_)))
}

pub fn row(rec: &ScenarioRecord, power: &PowerRow, common: bool) -> Vec<String> {
    let sc = &rec.scenario;
    let mut out: Vec<String> = sc.group_sizes.iter().map(|n| n.to_string()).collect();
    for e in 0..sc.n_endpoints() {
        out.extend((0..sc.k()).map(|g| format::input(sc.means[(g, e)])));
    }
    out.extend(sc.sds.iter().map(|&s| format::input(s)));
    match (&rec.rho, common) {
        (RhoSpec::Common(r), true) => out.push(format::input(*r)),
        _ => {
            let j = sc.n_endpoints();
            for a in 0..j {
                for b in a + 1..j {
                    out.push(format::input(sc.rho.get(a, b)));
                }
            }
        }
    }
    out.push(format::prob(power.iut));
    out.push(format::prob(power.uit));
    out.extend(power.m.iter().map(|&p| format::prob(p)));
    out.extend(power.e.iter().map(|&p| format::prob(p)));
    out.push(format::prob(power.aia));
    out.push(power.rr.map(|r| format!("{r:.3}")).unwrap_or_default());
    out
}

pub fn to_csv(records: &[ScenarioRecord], rows: &[PowerRow]) -> String {
    let common = common_rho(records);
    let mut out = header(records).join(",");
    out.push('\n');
    for (rec, power) in records.iter().zip(rows) {
        out.push_str(&row(rec, power, common).join(","));
        out.push('\n');
    }
    out
}
