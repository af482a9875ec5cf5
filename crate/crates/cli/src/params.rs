use lrs_core::analysis::AnalysisContext;
use lrs_core::code::{build_code, LrsCode};

use crate::{CliError, CodeArgs};

#[derive(Debug, Clone, Copy)]
pub struct FieldSpec {
    pub p: u64,
    pub r: usize,
    pub q: u64,
}

/// One validated sweep point.
#[derive(Debug, Clone, Copy)]
pub struct Point {
    pub field: FieldSpec,
    pub ell: usize,
    pub eta: usize,
    pub m: usize,
}

fn invalid(msg: impl Into<String>) -> CliError {
    CliError::Validation(msg.into())
}

fn prime_power(q: u64) -> Option<(u64, usize)> {
    let p = (2..=q).find(|d| q % d == 0)?;
    let (mut rest, mut r) = (q, 0);
    while rest % p == 0 {
        rest /= p;
        r += 1;
    }
    (rest == 1).then_some((p, r))
}

pub fn field_spec(a: &CodeArgs) -> Result<FieldSpec, CliError> {
    let (p, r) = match (a.p, a.q) {
        (Some(p), _) => (p, a.r.unwrap_or(1)),
        (None, Some(q)) => {
            let (p, r) = prime_power(q).ok_or_else(|| invalid(format!("q = {q} is not a prime power")))?;
            if a.r.is_some_and(|given| given != r) {
                return Err(invalid(format!("--r does not match q = {q}")));
            }
            (p, r)
        }
        (None, None) => return Err(invalid("one of --q or --p is required")),
    };
    let q = u32::try_from(r)
        .ok()
        .and_then(|r| p.checked_pow(r))
        .ok_or_else(|| invalid(format!("{p}^{r} overflows")))?;
    if a.q.is_some_and(|given| given != q) {
        return Err(invalid(format!(
            "--q {} does not equal p^r = {q}",
            a.q.unwrap_or_default()
        )));
    }
    Ok(FieldSpec { p, r, q })
}

pub fn point(a: &CodeArgs, field: FieldSpec, ell: usize) -> Result<Point, CliError> {
    if ell == 0 || a.n % ell != 0 {
        return Err(invalid(format!("ell = {ell} does not divide n = {}", a.n)));
    }
    if ell as u64 > field.q - 1 {
        return Err(invalid(format!("ell = {ell} exceeds q - 1 = {}", field.q - 1)));
    }
    let eta = a.n / ell;
    let m = match (a.square_blocks, a.m) {
        (true, Some(_)) => return Err(invalid("--m conflicts with --square-blocks")),
        (true, None) => eta,
        (false, Some(m)) => m,
        (false, None) => return Err(invalid("one of --m or --square-blocks is required")),
    };
    if eta > m {
        return Err(invalid(format!("block length eta = {eta} exceeds m = {m}")));
    }
    Ok(Point { field, ell, eta, m })
}

impl Point {
    pub fn context(&self, a: &CodeArgs) -> Result<AnalysisContext, CliError> {
        Ok(AnalysisContext::new(
            self.field.q,
            self.m,
            self.ell,
            self.eta,
            a.k,
            a.w,
            a.u,
        )?)
    }

    pub fn code(&self, a: &CodeArgs) -> Result<LrsCode, CliError> {
        Ok(build_code(self.field.p, self.field.r, self.m, self.ell, self.eta, a.k)?)
    }
}

/// Validates every point of a sweep before any work starts; sorted by ell.
pub fn sweep(a: &CodeArgs, list: &str) -> Result<Vec<Point>, CliError> {
    let mut ells = lrs_core::format::parse_ell_sweep(list).map_err(|e| invalid(format!("--ell: {e}")))?;
    ells.sort_unstable();
    ells.dedup();
    let field = field_spec(a)?;
    let points: Vec<Point> = ells
        .into_iter()
        .map(|ell| point(a, field, ell))
        .collect::<Result<_, _>>()?;
    for p in &points {
        p.context(a)?;
    }
    Ok(points)
}

/// Comma-separated nonnegative block ranks.
pub fn composition(s: &str) -> Result<Vec<usize>, CliError> {
    s.split(',')
        .map(|v| {
            v.trim()
                .parse()
                .map_err(|_| invalid(format!("bad composition entry {v:?}")))
        })
        .collect()
}
