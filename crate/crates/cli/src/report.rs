//! The final run report.
//!
//! A report is a flat TOML document with a fixed field order, so two runs can
//! be compared with `diff`. The wall time is the last line and is the only
//! field that varies between runs with the same settings.

use std::fmt::Write as _;
use std::time::Duration;

use gatesynth_core::fitness::Score;
use gatesynth_core::Genotype;

/// Optimizer and objective settings echoed into the report.
#[derive(Debug, Clone, PartialEq)]
pub struct ReportParams {
    pub groups: usize,
    pub group_size: usize,
    pub r1: f64,
    pub r2: f64,
    pub r3: f64,
    pub transfers: usize,
    pub iterations: usize,
    pub alpha: f64,
    pub beta: f64,
    pub angle_step: f64,
    pub angle_count: u32,
    pub gate_set: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunReport {
    pub target: String,
    pub qubits: usize,
    pub max_gates: usize,
    pub seed: u64,
    pub params: ReportParams,
    pub iterations_run: usize,
    pub best: Score,
    pub genotype: Genotype,
    /// The best circuit as a G/T/C/Q table.
    pub table: String,
    pub wall_time: Duration,
}

impl RunReport {
    /// Everything except the wall time; identical for identical settings.
    pub fn record(&self) -> String {
        let p = &self.params;
        let mut s = String::new();
        let _ = writeln!(s, "target = {}", quote(&self.target));
        let _ = writeln!(s, "n = {}", self.qubits);
        let _ = writeln!(s, "max_gates = {}", self.max_gates);
        let _ = writeln!(s, "seed = {}", self.seed);
        let _ = writeln!(
            s,
            "params = {{ groups = {}, group_size = {}, r1 = {:?}, r2 = {:?}, r3 = {:?}, transfers = {}, \
             iterations = {}, alpha = {:?}, beta = {:?}, angle_step = {:?}, angle_count = {}, gate_set = {} }}",
            p.groups,
            p.group_size,
            p.r1,
            p.r2,
            p.r3,
            p.transfers,
            p.iterations,
            p.alpha,
            p.beta,
            p.angle_step,
            p.angle_count,
            quote(&p.gate_set),
        );
        let _ = writeln!(s, "iterations_run = {}", self.iterations_run);
        let _ = writeln!(s, "best_y = {:?}", self.best.y);
        let _ = writeln!(s, "best_c = {:?}", self.best.c);
        let _ = writeln!(s, "best_cost = {}", self.best.cost);
        let _ = writeln!(s, "genotype = {}", quote(&self.genotype.to_string()));
        let _ = writeln!(s, "table = \"\"\"\n{}\"\"\"", self.table);
        s
    }

    pub fn render(&self) -> String {
        format!("{}wall_time = {:?}\n", self.record(), self.wall_time.as_secs_f64())
    }
}

fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for ch in s.chars() {
        match ch {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use gatesynth_core::circuit::Gene;

    fn sample() -> RunReport {
        RunReport {
            target: "file:dir/\"odd\".txt".into(),
            qubits: 2,
            max_gates: 2,
            seed: 4,
            params: ReportParams {
                groups: 15,
                group_size: 25,
                r1: 0.8,
                r2: 0.1,
                r3: 0.1,
                transfers: 3,
                iterations: 10,
                alpha: 0.9,
                beta: 0.1,
                angle_step: std::f64::consts::FRAC_PI_8,
                angle_count: 17,
                gate_set: "single:X".into(),
            },
            iterations_run: 10,
            best: Score {
                y: 0.08333333333333337,
                c: 1.0,
                cost: 6,
            },
            genotype: Genotype::new(vec![Gene::new(1, 2, 0, 0), Gene::new(0, 1, 0, 0)]),
            table: "G, T, C, Q\nSingle X, 2, 0, 0\n0, 0, 0, 0\n".into(),
            wall_time: Duration::from_millis(1500),
        }
    }

    #[test]
    fn field_order() {
        let text = sample().render();
        let keys: Vec<&str> = text
            .lines()
            .filter_map(|l| l.split_once(" = ").map(|(k, _)| k))
            .filter(|k| !k.contains(' ') && !k.contains(','))
            .collect();
        assert_eq!(
            keys,
            [
                "target", "n", "max_gates", "seed", "params", "iterations_run", "best_y", "best_c", "best_cost",
                "genotype", "table", "wall_time"
            ]
        );
        assert!(text.ends_with("wall_time = 1.5\n"));
    }

    #[test]
    fn parses_as_toml_with_exact_floats() {
        let r = sample();
        let doc: toml::Table = r.render().parse().unwrap();
        assert_eq!(doc["target"].as_str(), Some(r.target.as_str()));
        assert_eq!(doc["best_y"].as_float(), Some(r.best.y));
        assert_eq!(doc["best_c"].as_float(), Some(1.0));
        assert_eq!(doc["best_cost"].as_integer(), Some(6));
        assert_eq!(doc["params"]["angle_step"].as_float(), Some(r.params.angle_step));
        assert_eq!(doc["genotype"].as_str(), Some("1 2 0 0; 0 1 0 0"));
        assert_eq!(doc["table"].as_str(), Some(r.table.as_str()));
    }
}
