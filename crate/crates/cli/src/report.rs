//! The `check` subcommand's report: runs the axiom, bounds, and quadrant
//! checks against one copula and renders a pass/fail table. The exit-code
//! mapping lives here so it can be unit-tested against synthetic reports.

use copulakit_core::copulas::{
    check_copula_axioms, frechet_bounds_check, quadrant_dependence, AxiomReport, CopulaFamily,
    QuadrantReport, QuadrantVerdict,
};
use copulakit_core::Result;
use std::fmt::Write as _;

/// Tolerance for the envelope check, matching the axiom tolerance.
pub const BOUNDS_TOLERANCE: f64 = 1e-12;

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub copula: String,
    pub grid: usize,
    pub axioms: AxiomReport,
    pub bounds_worst: f64,
    pub quadrant: QuadrantReport,
}

impl CheckReport {
    pub fn bounds_pass(&self) -> bool {
        self.bounds_worst <= BOUNDS_TOLERANCE
    }

    pub fn all_pass(&self) -> bool {
        self.axioms.passes() && self.bounds_pass()
    }

    /// 0 when every check passed, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        if self.all_pass() {
            0
        } else {
            1
        }
    }

    pub fn render(&self) -> String {
        let yn = |ok: bool| if ok { "pass" } else { "FAIL" };
        let a = &self.axioms;
        let grounding_ok = a.worst_grounding_error <= AxiomReport::TOLERANCE;
        let margins_ok = a.worst_margin_error <= AxiomReport::TOLERANCE;
        let mass_ok = a.min_rectangle_mass >= -AxiomReport::TOLERANCE;
        let quadrant = match self.quadrant.verdict {
            QuadrantVerdict::Positive => "PQD",
            QuadrantVerdict::Negative => "NQD",
            QuadrantVerdict::Neither => "mixed",
        };
        let mut out = String::new();
        let _ = writeln!(out, "copula           {}", self.copula);
        let _ = writeln!(out, "grid             {}", self.grid);
        let _ = writeln!(
            out,
            "grounding        {}   worst error {:e}",
            yn(grounding_ok),
            a.worst_grounding_error
        );
        let _ = writeln!(
            out,
            "uniform-margins  {}   worst error {:e}",
            yn(margins_ok),
            a.worst_margin_error
        );
        let _ = writeln!(
            out,
            "2-increasing     {}   min rectangle mass {:e}",
            yn(mass_ok),
            a.min_rectangle_mass
        );
        let _ = writeln!(
            out,
            "frechet-bounds   {}   worst violation {:e}",
            yn(self.bounds_pass()),
            self.bounds_worst
        );
        let _ = writeln!(
            out,
            "quadrant         {}   deviation range [{:.6}, {:.6}]",
            quadrant, self.quadrant.min_deviation, self.quadrant.max_deviation
        );
        let _ = writeln!(
            out,
            "result           {}",
            if self.all_pass() { "PASS" } else { "FAIL" }
        );
        out
    }
}

/// Runs all checks for one family on a `grid × grid` lattice.
pub fn run_check(c: &CopulaFamily, grid: usize) -> Result<CheckReport> {
    Ok(CheckReport {
        copula: c.to_string(),
        grid,
        axioms: check_copula_axioms(c, grid)?,
        bounds_worst: frechet_bounds_check(c, grid)?,
        quadrant: quadrant_dependence(c, grid)?,
    })
}
