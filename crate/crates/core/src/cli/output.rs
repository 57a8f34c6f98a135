//! CSV writers. Floats are printed with 17 significant digits so that
//! values round-trip and repeated runs are byte-identical.

use crate::hmap::FieldRow;
use crate::verify::Verdict;

use super::AnalyzeSummary;

fn num(x: f64) -> String {
    format!("{x:.16e}")
}

fn opt(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn quote(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

/// Columns `z_re,z_im,gp_abs,hp_abs,mu_abs,jacobian,U`; `U` is empty where
/// it was not computed.
pub fn field_csv(rows: &[FieldRow]) -> String {
    let mut s = String::from("z_re,z_im,gp_abs,hp_abs,mu_abs,jacobian,U\n");
    for r in rows {
        s.push_str(&format!(
            "{},{},{},{},{},{},{}\n",
            num(r.z.re),
            num(r.z.im),
            num(r.gp_abs),
            num(r.hp_abs),
            num(r.mu_abs),
            num(r.jacobian),
            opt(r.u)
        ));
    }
    s
}

/// Columns `name,lhs,rhs,pass,witness_re,witness_im`.
pub fn verdicts_csv(verdicts: &[Verdict]) -> String {
    let mut s = String::from("name,lhs,rhs,pass,witness_re,witness_im\n");
    for v in verdicts {
        let w = v.witness.map(|w| w.z);
        s.push_str(&format!(
            "{},{},{},{},{},{}\n",
            quote(&v.name),
            num(v.lhs),
            num(v.rhs),
            v.pass,
            opt(w.map(|z| z.re)),
            opt(w.map(|z| z.im))
        ));
    }
    s
}

pub(super) fn summary_csv(s: &AnalyzeSummary) -> String {
    let header = "map,alpha,p,X,Y,Y_h,C,hardy_g,hardy_h,bergman_df,k_hat,K_hat,min_jacobian,B,u_boundary_error\n";
    let row = [
        quote(&s.map),
        num(s.alpha),
        num(s.p),
        num(s.x),
        num(s.y),
        num(s.y_h),
        num(s.c),
        num(s.hardy_g),
        num(s.hardy_h),
        num(s.bergman_df),
        opt(s.k_hat),
        opt(s.big_k_hat),
        num(s.min_jacobian),
        opt(s.target.as_ref().map(|t| t.b)),
        opt(s.u_boundary_error),
    ]
    .join(",");
    format!("{header}{row}\n")
}
