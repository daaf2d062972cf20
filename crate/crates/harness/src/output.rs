//! CSV tables.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{HarnessError, Result};

pub const ERROR_HEADER: &str = "experiment,method,integrator,N,dt,T,l2,h1,linf,rate_l2,rate_h1";
pub const PROFILE_HEADER: &str = "t,x,v";
pub const EIGEN_HEADER: &str = "N,k,eigenvalue";

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub experiment: String,
    pub method: String,
    pub integrator: String,
    pub n: usize,
    /// Step actually used after rounding the step count.
    pub dt: f64,
    pub t_end: f64,
    pub l2: f64,
    pub h1: f64,
    pub linf: f64,
    pub rate_l2: Option<f64>,
    pub rate_h1: Option<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProfileRow {
    pub t: f64,
    pub x: f64,
    pub v: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenRow {
    pub n: usize,
    pub k: usize,
    pub eigenvalue: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub enum ResultTable {
    Errors(Vec<ErrorRow>),
    Profiles(Vec<ProfileRow>),
    Eigenvalues(Vec<EigenRow>),
}

fn opt(x: Option<f64>) -> String {
    x.map(|v| v.to_string()).unwrap_or_default()
}

impl ResultTable {
    pub fn len(&self) -> usize {
        match self {
            ResultTable::Errors(r) => r.len(),
            ResultTable::Profiles(r) => r.len(),
            ResultTable::Eigenvalues(r) => r.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn header(&self) -> &'static str {
        match self {
            ResultTable::Errors(_) => ERROR_HEADER,
            ResultTable::Profiles(_) => PROFILE_HEADER,
            ResultTable::Eigenvalues(_) => EIGEN_HEADER,
        }
    }

    /// Header plus one line per row, LF endings, floats in shortest round-trip form.
    pub fn to_csv(&self) -> String {
        let mut s = String::new();
        s.push_str(self.header());
        s.push('\n');
        match self {
            ResultTable::Errors(rows) => {
                for r in rows {
                    let _ = writeln!(
                        s,
                        "{},{},{},{},{},{},{},{},{},{},{}",
                        r.experiment,
                        r.method,
                        r.integrator,
                        r.n,
                        r.dt,
                        r.t_end,
                        r.l2,
                        r.h1,
                        r.linf,
                        opt(r.rate_l2),
                        opt(r.rate_h1)
                    );
                }
            }
            ResultTable::Profiles(rows) => {
                for r in rows {
                    let _ = writeln!(s, "{},{},{}", r.t, r.x, r.v);
                }
            }
            ResultTable::Eigenvalues(rows) => {
                for r in rows {
                    let _ = writeln!(s, "{},{},{}", r.n, r.k, r.eigenvalue);
                }
            }
        }
        s
    }
}

pub fn emit_csv(table: &ResultTable, path: &Path) -> Result<()> {
    std::fs::write(path, table.to_csv()).map_err(|e| HarnessError::io(path, e))
}
