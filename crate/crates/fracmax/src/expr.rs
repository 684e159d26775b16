//! Closed-form fields in the config file, e.g. `"-sin(PI*x)*(1+t)"`.
//!
//! Unary minus binds tighter than `^`: `-x^2` is `(-x)^2`, so write `-(x^2)`.

use std::sync::Arc;

use exmex::{Express, FlatEx};

/// A parsed expression in the variables `x` and `t` (either may be absent).
#[derive(Clone)]
pub struct Expr {
    text: String,
    flat: Arc<FlatEx<f64>>,
    /// For each variable of `flat`, in its order: true for `x`, false for `t`.
    slots: Vec<bool>,
}

impl std::fmt::Debug for Expr {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Expr({:?})", self.text)
    }
}

impl Expr {
    /// Parses `text`, accepting only the variables in `allowed`.
    pub fn parse(text: &str, allowed: &[&str]) -> Result<Self, String> {
        let flat = exmex::parse::<f64>(text).map_err(|e| format!("cannot parse {text:?}: {e}"))?;
        let mut slots = Vec::new();
        for name in flat.var_names() {
            if !allowed.contains(&name.as_str()) {
                return Err(format!(
                    "unknown variable {name:?} in {text:?} (allowed: {})",
                    allowed.join(", ")
                ));
            }
            slots.push(name == "x");
        }
        Ok(Self {
            text: text.to_owned(),
            flat: Arc::new(flat),
            slots,
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    /// NaN if evaluation fails; the core's finiteness checks then reject it.
    pub fn eval(&self, x: f64, t: f64) -> f64 {
        let vars: Vec<f64> = self.slots.iter().map(|&is_x| if is_x { x } else { t }).collect();
        self.flat.eval(&vars).unwrap_or(f64::NAN)
    }

    pub fn field(&self) -> fracmax_core::solver::FieldFn {
        let e = self.clone();
        fracmax_core::solver::field_fn(move |x, t| e.eval(x, t))
    }

    pub fn space(&self) -> fracmax_core::solver::SpaceFn {
        let e = self.clone();
        fracmax_core::solver::space_fn(move |x| e.eval(x, 0.0))
    }

    pub fn time(&self) -> fracmax_core::caputo::TimeFn {
        let e = self.clone();
        fracmax_core::caputo::time_fn(move |t| e.eval(0.0, t))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn variables_map_by_name() {
        let e = Expr::parse("x - 2*t", &["x", "t"]).unwrap();
        assert_eq!(e.eval(3.0, 1.0), 1.0);
        let e = Expr::parse("t^2", &["x", "t"]).unwrap();
        assert_eq!(e.eval(5.0, 3.0), 9.0);
        let e = Expr::parse("sin(PI*x)", &["x"]).unwrap();
        assert!((e.eval(0.5, 0.0) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn unary_minus_binds_tightest() {
        assert_eq!(Expr::parse("-x^2", &["x"]).unwrap().eval(3.0, 0.0), 9.0);
        assert_eq!(Expr::parse("-(x^2)", &["x"]).unwrap().eval(3.0, 0.0), -9.0);
    }

    #[test]
    fn rejects_foreign_variables() {
        assert!(Expr::parse("x + y", &["x", "t"]).is_err());
        assert!(Expr::parse("x", &["t"]).is_err());
        assert!(Expr::parse("1 +* 2", &["x"]).is_err());
    }
}
