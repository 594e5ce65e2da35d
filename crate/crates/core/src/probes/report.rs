use serde::Serialize;

/// Which probe a report holds.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum ProbeKind {
    Otoc4,
    Renyi2,
    StabEntropy { alpha: f64 },
    Loe,
}

impl ProbeKind {
    pub fn name(&self) -> String {
        match self {
            ProbeKind::Otoc4 => "otoc4".into(),
            ProbeKind::Renyi2 => "renyi2".into(),
            ProbeKind::StabEntropy { alpha } => format!("stab_entropy_{alpha}"),
            ProbeKind::Loe => "loe".into(),
        }
    }
}

/// One probe value on one ensemble draw.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ProbeReport {
    pub probe: ProbeKind,
    pub value: f64,
    pub t: f64,
    pub cut: Vec<u32>,
    pub draw_id: u64,
}

impl ProbeReport {
    /// Checks the value against the probe's range for an n-qubit system.
    pub fn in_range(&self, n: u32) -> bool {
        let n_a = self.cut.len() as f64;
        let small = n_a.min(n as f64 - n_a);
        let tol = 1e-9;
        match self.probe {
            ProbeKind::Otoc4 => self.value.abs() <= 1.0 + tol,
            ProbeKind::Renyi2 => (-tol..=small + tol).contains(&self.value),
            ProbeKind::StabEntropy { .. } => self.value >= -tol,
            ProbeKind::Loe => (-tol..=2.0 * small + tol).contains(&self.value),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ranges() {
        let r = ProbeReport { probe: ProbeKind::Renyi2, value: 2.5, t: 1.0, cut: vec![0, 1, 2], draw_id: 0 };
        assert!(r.in_range(6));
        assert!(!ProbeReport { value: 3.5, ..r.clone() }.in_range(6));
        assert!(ProbeReport { probe: ProbeKind::Loe, value: 5.9, ..r }.in_range(6));
    }
}
